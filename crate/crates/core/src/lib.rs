//! Exact tools for skew-hyperplane covers of `{-1,1}^n`.
//!
//! * [`cube`]: points, hyperplanes, exhaustive cover verification.
//! * [`constructions`]: explicit covers.
//! * [`fourier`]: Fourier–Walsh transform, degree, the sets `W(m)`.
//! * [`interpolation`]: recovering top coefficients from values on `W(m)`.
//! * [`kernel`]: the linear system behind the `n/2 + 1` lower bound.
//! * [`search`]: bounded exact search for small covers.
//! * [`formats`]: plane and polynomial file formats, JSON reports.

pub mod constructions;
pub mod cube;
pub mod error;
pub mod formats;
pub mod fourier;
pub mod interpolation;
pub mod kernel;
pub mod linalg;
pub mod rational;
pub mod search;
pub mod subsets;

pub use cube::{verify_cover, CoverFamily, CoverReport, CubePoint, Hyperplane, PointSet};
pub use error::{Error, Result};
pub use rational::Rational;
