//! Points of `{-1,1}^n`, affine hyperplanes with exact rational coefficients,
//! and exhaustive cover verification.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::subsets::binom;

/// Largest dimension for which exhaustive enumeration is attempted.
pub const MAX_EXHAUSTIVE_N: usize = 24;

/// Number of uncovered points kept in a [`CoverReport`].
pub const UNCOVERED_SAMPLE_CAP: usize = 32;

/// A point of `{-1,1}^n`. Bit `j` set means `x_{j+1} = -1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CubePoint {
    bits: u32,
    n: u8,
}

impl CubePoint {
    pub fn new(bits: u32, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroDimension);
        }
        if n > 31 || u64::from(bits) >= 1u64 << n {
            return Err(Error::DimensionTooLarge { n, max: 31 });
        }
        Ok(CubePoint { bits, n: n as u8 })
    }

    /// Builds a point from `±1` coordinates.
    pub fn from_signs(signs: &[i8]) -> Result<Self> {
        let bits = signs
            .iter()
            .enumerate()
            .fold(0u32, |acc, (j, &s)| if s < 0 { acc | 1 << j } else { acc });
        CubePoint::new(bits, signs.len())
    }

    pub(crate) fn new_unchecked(bits: u32, n: usize) -> Self {
        CubePoint { bits, n: n as u8 }
    }

    pub fn bits(self) -> u32 {
        self.bits
    }

    pub fn n(self) -> usize {
        usize::from(self.n)
    }

    /// Coordinate `x_{j+1}` for 0-based `j`.
    pub fn coord(self, j: usize) -> i8 {
        if self.bits >> j & 1 == 1 {
            -1
        } else {
            1
        }
    }

    pub fn coords(self) -> Vec<i8> {
        (0..self.n()).map(|j| self.coord(j)).collect()
    }

    /// Number of coordinates equal to `-1`.
    pub fn hamming_weight(self) -> u32 {
        self.bits.count_ones()
    }
}

impl fmt::Display for CubePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<&str> = self
            .coords()
            .into_iter()
            .map(|c| if c > 0 { "+1" } else { "-1" })
            .collect();
        write!(f, "({})", parts.join(","))
    }
}

/// The hyperplane `a·x + b = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Hyperplane {
    a: Vec<Rational>,
    b: Rational,
}

impl Hyperplane {
    pub fn new(a: Vec<Rational>, b: Rational) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::ZeroDimension);
        }
        Ok(Hyperplane { a, b })
    }

    pub fn from_ints(a: &[i64], b: i64) -> Result<Self> {
        Hyperplane::new(a.iter().map(|&v| rational::int(v)).collect(), rational::int(b))
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.a
    }

    pub fn offset(&self) -> &Rational {
        &self.b
    }

    /// True iff every coefficient is nonzero.
    pub fn is_skew(&self) -> bool {
        self.a.iter().all(|c| !c.is_zero())
    }

    pub fn eval(&self, p: CubePoint) -> Result<Rational> {
        if p.n() != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                found: p.n(),
            });
        }
        let mut acc = self.b.clone();
        for (j, c) in self.a.iter().enumerate() {
            if p.coord(j) > 0 {
                acc += c;
            } else {
                acc -= c;
            }
        }
        Ok(acc)
    }

    pub fn covers(&self, p: CubePoint) -> Result<bool> {
        Ok(self.eval(p)?.is_zero())
    }

    /// All points on the plane, in ascending bitmask order.
    pub fn covered_set(&self) -> Result<Vec<CubePoint>> {
        let n = self.n();
        let set = self.coverage()?;
        Ok(set.iter().map(|bits| CubePoint::new_unchecked(bits, n)).collect())
    }

    /// Exhaustive coverage bitset.
    pub fn coverage(&self) -> Result<PointSet> {
        check_exhaustive(self.n())?;
        Ok(IntPlane::from_plane(self).coverage())
    }
}

impl fmt::Display for Hyperplane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, c) in self.a.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c < &Rational::zero();
            let mag = if neg { -c.clone() } else { c.clone() };
            let sign = match (first, neg) {
                (true, true) => "-",
                (true, false) => "",
                (false, true) => " - ",
                (false, false) => " + ",
            };
            let coeff = if mag == rational::int(1) {
                String::new()
            } else {
                rational::format(&mag)
            };
            write!(f, "{sign}{coeff}x{}", j + 1)?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        if !self.b.is_zero() {
            let neg = self.b < Rational::zero();
            let mag = if neg { -self.b.clone() } else { self.b.clone() };
            write!(f, " {} {}", if neg { '-' } else { '+' }, rational::format(&mag))?;
        }
        write!(f, " = 0")
    }
}

pub(crate) fn check_exhaustive(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::ZeroDimension);
    }
    if n > MAX_EXHAUSTIVE_N {
        return Err(Error::DimensionTooLarge {
            n,
            max: MAX_EXHAUSTIVE_N,
        });
    }
    Ok(())
}

/// Integer-scaled copy of a plane used by the enumeration loops.
/// Scaling by the (positive) common denominator leaves the zero set unchanged.
#[derive(Debug, Clone)]
pub(crate) enum IntPlane {
    Small { a: Vec<i64>, b: i64 },
    Big { a: Vec<BigInt>, b: BigInt },
}

impl IntPlane {
    pub(crate) fn from_plane(plane: &Hyperplane) -> Self {
        let mut all = plane.a.clone();
        all.push(plane.b.clone());
        let (mut ints, _) = rational::to_integers(&all);
        let b = ints.pop().expect("offset present");
        let mut with_b = ints.clone();
        with_b.push(b.clone());
        if rational::abs_sum_fits_i64(&with_b) {
            IntPlane::Small {
                a: ints.iter().map(|v| rational::to_i64(v).unwrap()).collect(),
                b: rational::to_i64(&b).unwrap(),
            }
        } else {
            IntPlane::Big { a: ints, b }
        }
    }

    /// Walks the cube in Gray-code order, updating `a·x + b` by one term per step.
    pub(crate) fn coverage(&self) -> PointSet {
        match self {
            IntPlane::Small { a, b } => {
                let n = a.len();
                let mut set = PointSet::empty(n);
                let mut val: i64 = a.iter().sum::<i64>() + b;
                let mut gray: u32 = 0;
                if val == 0 {
                    set.insert(0);
                }
                for i in 1u64..(1u64 << n) {
                    let j = i.trailing_zeros() as usize;
                    gray ^= 1 << j;
                    if gray >> j & 1 == 1 {
                        val -= 2 * a[j];
                    } else {
                        val += 2 * a[j];
                    }
                    if val == 0 {
                        set.insert(gray);
                    }
                }
                set
            }
            IntPlane::Big { a, b } => {
                let n = a.len();
                let mut set = PointSet::empty(n);
                let mut val: BigInt = a.iter().sum::<BigInt>() + b;
                let mut gray: u32 = 0;
                if val.is_zero() {
                    set.insert(0);
                }
                for i in 1u64..(1u64 << n) {
                    let j = i.trailing_zeros() as usize;
                    gray ^= 1 << j;
                    if gray >> j & 1 == 1 {
                        val -= &a[j] * 2;
                    } else {
                        val += &a[j] * 2;
                    }
                    if val.is_zero() {
                        set.insert(gray);
                    }
                }
                set
            }
        }
    }
}

/// A dense bitset over the `2^n` points of the cube.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PointSet {
    n: usize,
    words: Vec<u64>,
}

impl PointSet {
    pub fn empty(n: usize) -> Self {
        let len = (1usize << n).div_ceil(64);
        PointSet {
            n,
            words: vec![0; len],
        }
    }

    pub fn full(n: usize) -> Self {
        let mut s = PointSet::empty(n);
        let total = 1usize << n;
        for (i, w) in s.words.iter_mut().enumerate() {
            let lo = i * 64;
            *w = if total - lo >= 64 {
                u64::MAX
            } else {
                (1u64 << (total - lo)) - 1
            };
        }
        s
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn insert(&mut self, bits: u32) {
        self.words[(bits >> 6) as usize] |= 1 << (bits & 63);
    }

    pub fn contains(&self, bits: u32) -> bool {
        self.words[(bits >> 6) as usize] >> (bits & 63) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn union_with(&mut self, other: &PointSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn difference_with(&mut self, other: &PointSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn intersection_len(&self, other: &PointSet) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn is_subset(&self, other: &PointSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    /// Smallest member, if any.
    pub fn first(&self) -> Option<u32> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| (i as u32) * 64 + w.trailing_zeros())
    }

    /// Members in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let t = w.trailing_zeros();
                    w &= w - 1;
                    Some(i as u32 * 64 + t)
                }
            })
        })
    }
}

/// An ordered family of hyperplanes sharing one dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverFamily {
    planes: Vec<Hyperplane>,
}

impl CoverFamily {
    pub fn new(planes: Vec<Hyperplane>) -> Result<Self> {
        let first = planes.first().ok_or(Error::EmptyFamily)?;
        let n = first.n();
        if let Some(bad) = planes.iter().find(|p| p.n() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: bad.n(),
            });
        }
        Ok(CoverFamily { planes })
    }

    pub fn n(&self) -> usize {
        self.planes[0].n()
    }

    pub fn planes(&self) -> &[Hyperplane] {
        &self.planes
    }

    pub fn len(&self) -> usize {
        self.planes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.planes.is_empty()
    }

    pub fn into_planes(self) -> Vec<Hyperplane> {
        self.planes
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverReport {
    pub n: usize,
    pub covered: bool,
    pub num_uncovered: u64,
    pub uncovered_sample: Vec<CubePoint>,
    pub per_plane_counts: Vec<u64>,
}

/// Exhaustively checks whether the family covers `{-1,1}^n`.
pub fn verify_cover(family: &CoverFamily) -> Result<CoverReport> {
    let n = family.n();
    check_exhaustive(n)?;
    let sets = plane_coverages(family.planes());
    let mut union = PointSet::empty(n);
    for s in &sets {
        union.union_with(s);
    }
    let mut uncovered = PointSet::full(n);
    uncovered.difference_with(&union);
    let num_uncovered = uncovered.len() as u64;
    let uncovered_sample = uncovered
        .iter()
        .take(UNCOVERED_SAMPLE_CAP)
        .map(|b| CubePoint::new_unchecked(b, n))
        .collect();
    Ok(CoverReport {
        n,
        covered: num_uncovered == 0,
        num_uncovered,
        uncovered_sample,
        per_plane_counts: sets.iter().map(|s| s.len() as u64).collect(),
    })
}

#[cfg(feature = "parallel")]
fn plane_coverages(planes: &[Hyperplane]) -> Vec<PointSet> {
    use rayon::prelude::*;
    planes
        .par_iter()
        .map(|p| IntPlane::from_plane(p).coverage())
        .collect()
}

#[cfg(not(feature = "parallel"))]
fn plane_coverages(planes: &[Hyperplane]) -> Vec<PointSet> {
    planes
        .iter()
        .map(|p| IntPlane::from_plane(p).coverage())
        .collect()
}

/// Largest number of points a skew plane can contain: `binom(n, floor(n/2))`.
pub fn sperner_bound(n: usize) -> u128 {
    binom(n as u64, (n / 2) as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn pt(signs: &[i8]) -> CubePoint {
        CubePoint::from_signs(signs).unwrap()
    }

    fn plane(a: &[i64], b: i64) -> Hyperplane {
        Hyperplane::from_ints(a, b).unwrap()
    }

    #[test]
    fn eval_examples() {
        assert_eq!(plane(&[1, 1, 1], 0).eval(pt(&[1, 1, 1])).unwrap(), int(3));
        assert_eq!(
            plane(&[1, 1, 1, 1, 2], 0).eval(pt(&[1, 1, -1, -1, 1])).unwrap(),
            int(2)
        );
        assert_eq!(plane(&[1, -1], 0).eval(pt(&[-1, -1])).unwrap(), int(0));
    }

    #[test]
    fn eval_dimension_mismatch() {
        let err = plane(&[1, 1], 0).eval(pt(&[1, 1, 1])).unwrap_err();
        assert_eq!(err, Error::DimensionMismatch { expected: 2, found: 3 });
        assert!(plane(&[1, 1], 0).covers(pt(&[1])).is_err());
    }

    #[test]
    fn covers_examples() {
        let p = plane(&[1, 1, 1], 0);
        for bits in 0..8 {
            assert!(!p.covers(CubePoint::new(bits, 3).unwrap()).unwrap());
        }
        assert!(plane(&[1, 1], 0).covers(pt(&[1, -1])).unwrap());
        assert!(!plane(&[1, 1], 0).covers(pt(&[1, 1])).unwrap());
    }

    #[test]
    fn covered_set_examples() {
        let s = plane(&[1, 1], 0).covered_set().unwrap();
        assert_eq!(s, vec![pt(&[-1, 1]), pt(&[1, -1])]);

        // Direct enumeration: a·x - 1 = 0 with unit a needs two +1 and one -1.
        let s = plane(&[1, 1, 1], -1).covered_set().unwrap();
        let expected: Vec<CubePoint> = (0..8u32)
            .filter(|b| b.count_ones() == 1)
            .map(|b| CubePoint::new(b, 3).unwrap())
            .collect();
        assert_eq!(s, expected);

        assert!(plane(&[1, 2, 4], 0).covered_set().unwrap().is_empty());
    }

    #[test]
    fn covered_set_too_large() {
        let p = Hyperplane::from_ints(&[1; 25], 0).unwrap();
        assert_eq!(
            p.covered_set().unwrap_err(),
            Error::DimensionTooLarge { n: 25, max: 24 }
        );
    }

    #[test]
    fn skewness() {
        assert!(plane(&[1, 1, 1], 0).is_skew());
        assert!(!plane(&[1, 0, 1], 2).is_skew());
        let h = Hyperplane::new(vec![frac(1, 2), int(-3), int(7)], int(0)).unwrap();
        assert!(h.is_skew());
    }

    #[test]
    fn verify_single_plane() {
        let fam = CoverFamily::new(vec![plane(&[1, 1], 0)]).unwrap();
        let r = verify_cover(&fam).unwrap();
        assert!(!r.covered);
        assert_eq!(r.num_uncovered, 2);
        assert_eq!(r.uncovered_sample, vec![pt(&[1, 1]), pt(&[-1, -1])]);
        assert_eq!(r.per_plane_counts, vec![2]);
    }

    #[test]
    fn sample_is_capped() {
        let fam = CoverFamily::new(vec![plane(&[1, 2, 4, 8, 16, 32, 64], 0)]).unwrap();
        let r = verify_cover(&fam).unwrap();
        assert_eq!(r.num_uncovered, 128);
        assert_eq!(r.uncovered_sample.len(), UNCOVERED_SAMPLE_CAP);
        assert!(r.uncovered_sample.windows(2).all(|w| w[0].bits() < w[1].bits()));
    }

    #[test]
    fn empty_and_mixed_families() {
        assert_eq!(CoverFamily::new(vec![]).unwrap_err(), Error::EmptyFamily);
        assert!(matches!(
            CoverFamily::new(vec![plane(&[1, 1], 0), plane(&[1, 1, 1], 1)]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn rational_plane_matches_scaled_integer_plane() {
        let h = Hyperplane::new(vec![frac(1, 2), frac(1, 3), frac(1, 6)], int(0)).unwrap();
        let g = plane(&[3, 2, 1], 0);
        assert_eq!(h.covered_set().unwrap(), g.covered_set().unwrap());
        assert_eq!(h.covered_set().unwrap().len(), 2);
    }

    #[test]
    fn big_coefficients_take_exact_path() {
        let huge = BigInt::from(1u64 << 62) * BigInt::from(1u64 << 40);
        let a = vec![Rational::from_integer(huge.clone()), Rational::from_integer(huge)];
        let h = Hyperplane::new(a, int(0)).unwrap();
        assert!(matches!(IntPlane::from_plane(&h), IntPlane::Big { .. }));
        assert_eq!(h.covered_set().unwrap().len(), 2);
    }

    #[test]
    fn display() {
        assert_eq!(plane(&[1, -1, 2], -3).to_string(), "x1 - x2 + 2x3 - 3 = 0");
        assert_eq!(pt(&[1, -1]).to_string(), "(+1,-1)");
    }

    #[test]
    fn point_set_ops() {
        let mut s = PointSet::empty(7);
        s.insert(3);
        s.insert(100);
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![3, 100]);
        assert_eq!(s.first(), Some(3));
        assert_eq!(PointSet::full(7).len(), 128);
        assert_eq!(PointSet::full(2).len(), 4);
        assert!(s.is_subset(&PointSet::full(7)));
    }
}
