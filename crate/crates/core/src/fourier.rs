//! Fourier–Walsh representation of functions `{-1,1}^n -> Q^k`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cube::{check_exhaustive, CubePoint};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::subsets::{k_subsets, subsets_up_to};

/// `f(x) = Σ_S f̂(S) x^S` with vector coefficients in `Q^k`.
///
/// Only nonzero coefficient vectors are stored; subsets are bitmasks with
/// bit `j` standing for coordinate `x_{j+1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultilinearPoly {
    n: usize,
    k: usize,
    coeffs: BTreeMap<u32, Vec<Rational>>,
}

impl MultilinearPoly {
    pub fn zero(n: usize, k: usize) -> Self {
        MultilinearPoly {
            n,
            k,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn new(n: usize, k: usize, coeffs: BTreeMap<u32, Vec<Rational>>) -> Result<Self> {
        let mut p = MultilinearPoly::zero(n, k);
        for (s, c) in coeffs {
            p.set(s, c)?;
        }
        Ok(p)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Sets `f̂(S)`; a zero vector removes the entry.
    pub fn set(&mut self, subset: u32, value: Vec<Rational>) -> Result<()> {
        if self.n < 32 && u64::from(subset) >= 1u64 << self.n {
            return Err(Error::InvalidSubset(format!(
                "mask {subset:#b} has elements beyond n = {}",
                self.n
            )));
        }
        if value.len() != self.k {
            return Err(Error::CodomainMismatch {
                expected: self.k,
                found: value.len(),
            });
        }
        if value.iter().all(Zero::is_zero) {
            self.coeffs.remove(&subset);
        } else {
            self.coeffs.insert(subset, value);
        }
        Ok(())
    }

    /// `f̂(S)`, or the zero vector.
    pub fn coefficient(&self, subset: u32) -> Vec<Rational> {
        self.coeffs
            .get(&subset)
            .cloned()
            .unwrap_or_else(|| vec![Rational::zero(); self.k])
    }

    /// Nonzero coefficients in ascending mask order.
    pub fn terms(&self) -> impl Iterator<Item = (u32, &[Rational])> {
        self.coeffs.iter().map(|(s, c)| (*s, c.as_slice()))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Largest `|S|` with `f̂(S) ≠ 0`; the zero polynomial has degree 0.
    pub fn degree(&self) -> usize {
        self.coeffs
            .keys()
            .map(|s| s.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    /// Direct monomial summation at one point.
    pub fn evaluate(&self, p: CubePoint) -> Result<Vec<Rational>> {
        if p.n() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: p.n(),
            });
        }
        let mut out = vec![Rational::zero(); self.k];
        for (s, c) in &self.coeffs {
            let negative = (s & p.bits()).count_ones() % 2 == 1;
            for (o, v) in out.iter_mut().zip(c) {
                if negative {
                    *o -= v;
                } else {
                    *o += v;
                }
            }
        }
        Ok(out)
    }
}

/// Values of a function on all `2^n` points, indexed by bitmask.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValueTable {
    n: usize,
    k: usize,
    values: Vec<Rational>,
}

impl ValueTable {
    /// `values` is laid out point-major: entry `p * k + c` is component `c` at point `p`.
    pub fn new(n: usize, k: usize, values: Vec<Rational>) -> Result<Self> {
        check_exhaustive(n)?;
        if k == 0 || values.len() != k << n {
            return Err(Error::CodomainMismatch {
                expected: k << n,
                found: values.len(),
            });
        }
        Ok(ValueTable { n, k, values })
    }

    pub fn from_fn(
        n: usize,
        k: usize,
        mut f: impl FnMut(CubePoint) -> Vec<Rational>,
    ) -> Result<Self> {
        check_exhaustive(n)?;
        let mut values = Vec::with_capacity(k << n);
        for bits in 0..1u32 << n {
            let v = f(CubePoint::new_unchecked(bits, n));
            if v.len() != k {
                return Err(Error::CodomainMismatch {
                    expected: k,
                    found: v.len(),
                });
            }
            values.extend(v);
        }
        ValueTable::new(n, k, values)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn value(&self, bits: u32) -> &[Rational] {
        let i = bits as usize * self.k;
        &self.values[i..i + self.k]
    }

    fn component(&self, c: usize) -> Vec<Rational> {
        self.values.iter().skip(c).step_by(self.k).cloned().collect()
    }
}

/// In-place unnormalized Walsh–Hadamard butterfly:
/// `out[S] = Σ_p in[p] (-1)^{|S ∩ p|}`.
fn butterfly(data: &mut [BigInt]) {
    let len = data.len();
    let mut h = 1;
    while h < len {
        for block in data.chunks_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (u, v) in lo.iter_mut().zip(hi.iter_mut()) {
                let sum = &*u + &*v;
                let diff = &*u - &*v;
                *u = sum;
                *v = diff;
            }
        }
        h *= 2;
    }
}

/// Exact transform of one component: integer butterfly over a common
/// denominator, divided by `scale * denominator` at the end.
fn transform_component(column: &[Rational], scale: &BigInt) -> Vec<Rational> {
    let (mut ints, lcm) = rational::to_integers(column);
    butterfly(&mut ints);
    let denom = scale * lcm;
    ints.into_iter()
        .map(|v| Rational::new(v, denom.clone()))
        .collect()
}

/// Fourier–Walsh coefficients `f̂(S) = 2^{-n} Σ_x f(x) x^S`.
pub fn wht(table: &ValueTable) -> Result<MultilinearPoly> {
    check_exhaustive(table.n)?;
    let scale = BigInt::one() << table.n;
    let columns: Vec<Vec<Rational>> = (0..table.k)
        .map(|c| transform_component(&table.component(c), &scale))
        .collect();
    let mut poly = MultilinearPoly::zero(table.n, table.k);
    for s in 0..1u32 << table.n {
        let v: Vec<Rational> = columns.iter().map(|col| col[s as usize].clone()).collect();
        poly.set(s, v)?;
    }
    Ok(poly)
}

/// Values `f(p) = Σ_S f̂(S) (-1)^{|S ∩ p|}` at every point.
pub fn inverse_wht(poly: &MultilinearPoly) -> Result<ValueTable> {
    check_exhaustive(poly.n)?;
    let size = 1usize << poly.n;
    let mut columns = Vec::with_capacity(poly.k);
    for c in 0..poly.k {
        let mut dense = vec![Rational::zero(); size];
        for (s, v) in &poly.coeffs {
            dense[*s as usize] = v[c].clone();
        }
        columns.push(transform_component(&dense, &BigInt::one()));
    }
    let mut values = Vec::with_capacity(size * poly.k);
    for p in 0..size {
        values.extend(columns.iter().map(|col| col[p].clone()));
    }
    ValueTable::new(poly.n, poly.k, values)
}

/// Points whose number of `-1` coordinates is divisible by `m`, ascending.
pub fn w_set(n: usize, m: usize) -> Result<Vec<CubePoint>> {
    if m < 2 {
        return Err(Error::BadModulus(m));
    }
    check_exhaustive(n)?;
    Ok((0..1u32 << n)
        .filter(|b| (b.count_ones() as usize).is_multiple_of(m))
        .map(|b| CubePoint::new_unchecked(b, n))
        .collect())
}

/// Membership test for `W(m)`.
pub fn in_w(p: CubePoint, m: usize) -> bool {
    (p.hamming_weight() as usize).is_multiple_of(m)
}

/// Deterministic pseudo-random polynomial of degree exactly `d` with small
/// integer coefficients in `[-3, 3]`.
pub fn random_poly(n: usize, d: usize, k: usize, seed: u64) -> Result<MultilinearPoly> {
    if d > n {
        return Err(Error::DegreeOutOfRange { d, n });
    }
    check_exhaustive(n)?;
    if k == 0 {
        return Err(Error::CodomainMismatch { expected: 1, found: 0 });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut poly = MultilinearPoly::zero(n, k);
    for s in subsets_up_to(n, d) {
        if rng.gen_bool(0.5) {
            let v = (0..k).map(|_| rational::int(rng.gen_range(-3..=3))).collect();
            poly.set(s, v)?;
        }
    }
    let top: Vec<u32> = k_subsets(n, d).collect();
    let s = top[rng.gen_range(0..top.len())];
    let mut v: Vec<Rational> = (0..k).map(|_| rational::int(rng.gen_range(-3..=3))).collect();
    let lead = rng.gen_range(1..=3) * if rng.gen_bool(0.5) { 1 } else { -1 };
    v[0] = rational::int(lead);
    poly.set(s, v)?;
    Ok(poly)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};
    use crate::subsets::binom;

    fn scalar(n: usize, terms: &[(u32, i64)]) -> MultilinearPoly {
        let mut p = MultilinearPoly::zero(n, 1);
        for &(s, c) in terms {
            p.set(s, vec![int(c)]).unwrap();
        }
        p
    }

    #[test]
    fn product_of_two_coordinates() {
        let t = ValueTable::from_fn(2, 1, |p| vec![int(i64::from(p.coord(0) * p.coord(1)))]).unwrap();
        assert_eq!(wht(&t).unwrap(), scalar(2, &[(0b11, 1)]));
    }

    #[test]
    fn constant_table() {
        let c = frac(7, 3);
        let t = ValueTable::from_fn(3, 1, |_| vec![c.clone()]).unwrap();
        let p = wht(&t).unwrap();
        assert_eq!(p.terms().count(), 1);
        assert_eq!(p.coefficient(0), vec![c]);
    }

    #[test]
    fn inverse_examples() {
        let t = inverse_wht(&scalar(3, &[(0, 1)])).unwrap();
        assert!((0..8).all(|b| t.value(b) == [int(1)]));
        let t = inverse_wht(&scalar(1, &[(1, 1)])).unwrap();
        assert_eq!(t.value(0), [int(1)]);
        assert_eq!(t.value(1), [int(-1)]);
    }

    #[test]
    fn inverse_matches_direct_summation() {
        for seed in 0..10 {
            let p = random_poly(5, 3, 2, seed).unwrap();
            let t = inverse_wht(&p).unwrap();
            for b in 0..32 {
                let pt = CubePoint::new(b, 5).unwrap();
                assert_eq!(t.value(b), p.evaluate(pt).unwrap().as_slice());
            }
        }
    }

    #[test]
    fn coefficient_formula_matches_mean() {
        let n = 4;
        let p = random_poly(n, 3, 1, 11).unwrap();
        let t = inverse_wht(&p).unwrap();
        let fast = wht(&t).unwrap();
        for s in 0..1u32 << n {
            let mut acc = Rational::zero();
            for b in 0..1u32 << n {
                let sign = if (s & b).count_ones() % 2 == 1 { -1 } else { 1 };
                acc += &t.value(b)[0] * int(sign);
            }
            acc /= int(1 << n);
            assert_eq!(fast.coefficient(s)[0], acc);
        }
    }

    #[test]
    fn degree_examples() {
        assert_eq!(scalar(3, &[(0, 5)]).degree(), 0);
        assert_eq!(scalar(3, &[(0b101, 1), (0b010, -1)]).degree(), 2);
        assert_eq!(MultilinearPoly::zero(4, 1).degree(), 0);
    }

    #[test]
    fn w_set_examples() {
        assert_eq!(w_set(4, 2).unwrap().len(), 8);
        let w = w_set(5, 5).unwrap();
        assert_eq!(w.iter().map(|p| p.bits()).collect::<Vec<_>>(), vec![0, 31]);
        assert_eq!(w_set(3, 2).unwrap().len(), 4);
        assert_eq!(w_set(3, 1).unwrap_err(), Error::BadModulus(1));
    }

    #[test]
    fn w_set_sizes() {
        for n in 1..=20usize {
            for m in 2..=n.max(2) {
                let expected: u128 = (0..=n).step_by(m).map(|j| binom(n as u64, j as u64)).sum();
                assert_eq!(w_set(n, m).unwrap().len() as u128, expected, "n={n} m={m}");
            }
        }
    }

    #[test]
    fn random_poly_contract() {
        let c = random_poly(4, 0, 1, 3).unwrap();
        assert_eq!(c.degree(), 0);
        assert!(!c.is_zero());
        assert_eq!(random_poly(6, 3, 2, 9).unwrap(), random_poly(6, 3, 2, 9).unwrap());
        for s in 0..50 {
            assert_eq!(random_poly(6, 3, 1, s).unwrap().degree(), 3);
        }
        assert_eq!(
            random_poly(3, 4, 1, 0).unwrap_err(),
            Error::DegreeOutOfRange { d: 4, n: 3 }
        );
    }

    #[test]
    fn set_validates() {
        let mut p = MultilinearPoly::zero(2, 1);
        assert!(p.set(0b100, vec![int(1)]).is_err());
        assert!(p.set(0b1, vec![int(1), int(2)]).is_err());
        p.set(0b1, vec![int(0)]).unwrap();
        assert!(p.is_zero());
    }

    #[test]
    fn too_large() {
        assert!(matches!(
            w_set(25, 2),
            Err(Error::DimensionTooLarge { n: 25, .. })
        ));
    }
}
