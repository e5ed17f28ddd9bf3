//! The linear system forcing the top-degree coefficients of a polynomial
//! whose support lies on a skew hyperplane.
//!
//! For every `(d+1)`-subset `T`: `Σ_{j∈T} a_j c_{T∖{j}} = 0`, in the unknowns
//! `c_S`, `|S| = d`. Rows and columns are indexed in colex order.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg;
use crate::rational::{self, Rational};
use crate::subsets::{binom, colex_rank, k_subsets};

/// Upper limit on the number of rows `binom(n, d+1)`.
pub const MAX_ROWS: u128 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelSystem {
    n: usize,
    d: usize,
    a: Vec<Rational>,
    row_sets: Vec<u32>,
    col_sets: Vec<u32>,
    /// Sparse rows: `(column, value)` sorted by column.
    rows: Vec<Vec<(usize, Rational)>>,
}

impl KernelSystem {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.a
    }

    /// Row labels `T` as bitmasks.
    pub fn row_sets(&self) -> &[u32] {
        &self.row_sets
    }

    /// Column labels `S` as bitmasks.
    pub fn col_sets(&self) -> &[u32] {
        &self.col_sets
    }

    pub fn rows(&self) -> &[Vec<(usize, Rational)>] {
        &self.rows
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_cols(&self) -> usize {
        self.col_sets.len()
    }

    pub fn dense(&self) -> Vec<Vec<Rational>> {
        self.rows
            .iter()
            .map(|r| {
                let mut row = vec![Rational::zero(); self.num_cols()];
                for (c, v) in r {
                    row[*c] = v.clone();
                }
                row
            })
            .collect()
    }

    /// `A c`.
    pub fn apply(&self, c: &[Rational]) -> Vec<Rational> {
        assert_eq!(c.len(), self.num_cols(), "vector length must match columns");
        self.rows
            .iter()
            .map(|r| r.iter().map(|(col, v)| v * &c[*col]).sum())
            .collect()
    }

    fn integer_dense(&self) -> linalg::IntMatrix {
        // A single common scale keeps the matrix a multiple of A.
        let lcm = rational::common_denominator(&self.a);
        let scaled: Vec<BigInt> = self
            .a
            .iter()
            .map(|v| v.numer() * (&lcm / v.denom()))
            .collect();
        self.rows
            .iter()
            .zip(&self.row_sets)
            .map(|(r, &t)| {
                let mut row = vec![BigInt::zero(); self.num_cols()];
                for (c, _) in r {
                    let j = (t & !self.col_sets[*c]).trailing_zeros() as usize;
                    row[*c] = scaled[j].clone();
                }
                row
            })
            .collect()
    }
}

fn check_nonzero(a: &[Rational]) -> Result<()> {
    match a.iter().position(Zero::is_zero) {
        Some(j) => Err(Error::ZeroCoefficient(j + 1)),
        None => Ok(()),
    }
}

pub fn build_system(a: &[Rational], d: usize) -> Result<KernelSystem> {
    let n = a.len();
    if n == 0 {
        return Err(Error::ZeroDimension);
    }
    check_nonzero(a)?;
    if d >= n {
        return Err(Error::DegreeOutOfRange { d, n });
    }
    if n > 31 {
        return Err(Error::DimensionTooLarge { n, max: 31 });
    }
    let rows_count = binom(n as u64, d as u64 + 1);
    if rows_count > MAX_ROWS {
        return Err(Error::SystemTooLarge {
            rows: rows_count,
            max: MAX_ROWS,
        });
    }
    let row_sets: Vec<u32> = k_subsets(n, d + 1).collect();
    let col_sets: Vec<u32> = k_subsets(n, d).collect();
    let rows = row_sets
        .iter()
        .map(|&t| {
            let mut entries: Vec<(usize, Rational)> = (0..n)
                .filter(|j| t >> j & 1 == 1)
                .map(|j| (colex_rank(t & !(1 << j)), a[j].clone()))
                .collect();
            entries.sort_by_key(|(c, _)| *c);
            entries
        })
        .collect();
    Ok(KernelSystem {
        n,
        d,
        a: a.to_vec(),
        row_sets,
        col_sets,
        rows,
    })
}

/// Exact nullity of the system matrix.
pub fn kernel_dim(system: &KernelSystem) -> usize {
    linalg::nullity(&system.integer_dense(), system.num_cols())
}

/// Nullity by fraction-free elimination alone, without the modular screen.
pub fn kernel_dim_bareiss(system: &KernelSystem) -> usize {
    system.num_cols() - linalg::rank_bareiss(&system.integer_dense())
}

/// Determinant of `[[0, a3, a2], [a3, 0, a1], [a2, a1, 0]]` by cofactor expansion.
pub fn base_case_det(a1: &Rational, a2: &Rational, a3: &Rational) -> Rational {
    let zero = Rational::zero();
    let m = [[&zero, a3, a2], [a3, &zero, a1], [a2, a1, &zero]];
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// `c_S = K Π_{i∈S} a_i` over the `d`-subsets in colex order.
pub fn product_vector(a: &[Rational], d: usize, k: &Rational) -> Result<Vec<Rational>> {
    check_nonzero(a)?;
    let n = a.len();
    if d > n {
        return Err(Error::DegreeOutOfRange { d, n });
    }
    Ok(k_subsets(n, d)
        .map(|s| {
            (0..n)
                .filter(|j| s >> j & 1 == 1)
                .fold(k.clone(), |acc, j| acc * &a[j])
        })
        .collect())
}

/// Kernel dimension together with whether the trivial-kernel claim applies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelCertificate {
    pub n: usize,
    pub d: usize,
    pub rows: usize,
    pub cols: usize,
    pub nullity: usize,
    /// `n >= 2d + 1`.
    pub expects_trivial_kernel: bool,
}

impl KernelCertificate {
    /// False only when the hypothesis holds but the kernel is nontrivial.
    pub fn consistent(&self) -> bool {
        !self.expects_trivial_kernel || self.nullity == 0
    }
}

pub fn certify(a: &[Rational], d: usize) -> Result<KernelCertificate> {
    let sys = build_system(a, d)?;
    Ok(KernelCertificate {
        n: sys.n,
        d,
        rows: sys.num_rows(),
        cols: sys.num_cols(),
        nullity: kernel_dim(&sys),
        expects_trivial_kernel: sys.n > 2 * d,
    })
}

/// `Π_{i∈T} a_i` for a bitmask `T`.
pub fn subset_product(a: &[Rational], t: u32) -> Rational {
    (0..a.len())
        .filter(|j| t >> j & 1 == 1)
        .fold(Rational::one(), |acc, j| acc * &a[j])
}
