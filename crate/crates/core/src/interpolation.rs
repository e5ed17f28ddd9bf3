//! Recovery of a top Fourier–Walsh coefficient from values on `W(m)`.
//!
//! Coordinates are split into chunks `I_1..I_d` of size `m`, a parity block
//! `I_extra` of size `m/2`, and the remainder `I_rest`. A point `x` is drawn
//! chunk by chunk; each chunk is either all `+1` (probability `1/m`) or has its
//! last coordinate `+1` and exactly `m/2` of the other `m-1` equal to `-1`
//! (each such pattern with probability `1/(2·binom(m-2, m/2-1))`). `I_rest` is
//! always `+1` and `I_extra` is all `-1` exactly when the number `s` of `-1`s
//! in the chunks is not a multiple of `m`. Flipping chunk `j` by `y_j` and
//! weighting by `y_1⋯y_d` gives a signed measure on `W(m)` whose integral
//! against `f` is `f̂(S)` whenever `deg f ≤ |S|`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::cube::{check_exhaustive, CubePoint};
use crate::error::{Error, Result};
use crate::fourier::{in_w, ValueTable};
use crate::linalg;
use crate::rational::{self, Rational};
use crate::subsets::{binom, indices_of, subsets_up_to};

/// Largest `n` accepted by [`vanishing_dimension`].
pub const MAX_VANISHING_N: usize = 20;

/// Canonical split of the coordinates for a target subset `S`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChunkLayout {
    n: usize,
    m: usize,
    d: usize,
    subset: u32,
    /// `relabel[canonical position] = caller's coordinate`, both 0-based.
    relabel: Vec<usize>,
}

impl ChunkLayout {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn subset(&self) -> u32 {
        self.subset
    }

    pub fn relabel(&self) -> &[usize] {
        &self.relabel
    }

    /// Chunk `I_j` (0-based `j`) in caller coordinates; its last entry is the `j`-th element of `S`.
    pub fn chunk(&self, j: usize) -> &[usize] {
        &self.relabel[j * self.m..(j + 1) * self.m]
    }

    pub fn chunks(&self) -> Vec<&[usize]> {
        (0..self.d).map(|j| self.chunk(j)).collect()
    }

    pub fn extra(&self) -> &[usize] {
        let start = self.d * self.m;
        &self.relabel[start..start + self.m / 2]
    }

    pub fn rest(&self) -> &[usize] {
        &self.relabel[self.d * self.m + self.m / 2..]
    }

    fn mask(coords: &[usize]) -> u32 {
        coords.iter().fold(0, |acc, &c| acc | 1 << c)
    }
}

/// Smallest `n` with `d <= n/m - 1/2`.
pub fn min_dimension(m: usize, d: usize) -> usize {
    d * m + m / 2
}

pub fn chunk_layout(n: usize, m: usize, d: usize, subset: u32) -> Result<ChunkLayout> {
    if m < 2 {
        return Err(Error::BadModulus(m));
    }
    if m % 2 == 1 {
        return Err(Error::OddModulus(m));
    }
    check_exhaustive(n)?;
    if u64::from(subset) >= 1u64 << n {
        return Err(Error::InvalidSubset(format!(
            "mask {subset:#b} has elements beyond n = {n}"
        )));
    }
    let size = subset.count_ones() as usize;
    if size != d {
        return Err(Error::BadSubsetSize {
            expected: d,
            found: size,
        });
    }
    let needed = min_dimension(m, d);
    if n < needed {
        return Err(Error::DegreeTooHigh { n, m, d, needed });
    }
    let targets = indices_of(subset);
    let mut others = (0..n).filter(|c| subset >> c & 1 == 0);
    let relabel = (0..n)
        .map(|pos| {
            if pos < d * m && pos % m == m - 1 {
                targets[pos / m]
            } else {
                others.next().expect("enough coordinates")
            }
        })
        .collect();
    Ok(ChunkLayout {
        n,
        m,
        d,
        subset,
        relabel,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Atom {
    pub point: CubePoint,
    pub weight: Rational,
    pub sign: i8,
}

/// A signed probability measure on `W(m)`, stored as explicit atoms in
/// ascending point order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InterpolationScheme {
    layout: ChunkLayout,
    atoms: Vec<Atom>,
}

impl InterpolationScheme {
    pub fn layout(&self) -> &ChunkLayout {
        &self.layout
    }

    pub fn n(&self) -> usize {
        self.layout.n
    }

    pub fn m(&self) -> usize {
        self.layout.m
    }

    pub fn d(&self) -> usize {
        self.layout.d
    }

    pub fn subset(&self) -> u32 {
        self.layout.subset
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn total_weight(&self) -> Rational {
        self.atoms.iter().map(|a| &a.weight).sum()
    }

    /// Checks the measure invariants: unit mass, positive weights, support in `W(m)`.
    pub fn is_well_formed(&self) -> bool {
        self.total_weight().is_one()
            && self.atoms.iter().all(|a| a.weight > Rational::zero())
            && self.atoms.iter().all(|a| in_w(a.point, self.layout.m))
            && self.atoms.windows(2).all(|w| w[0].point < w[1].point)
    }
}

/// One admissible chunk pattern: bitmask over local positions `0..m` (set = `-1`).
fn chunk_patterns(m: usize) -> Vec<(u32, Rational)> {
    let half = m / 2;
    let mut out = vec![(0u32, rational::frac(1, m as i64))];
    let each = Rational::new(
        1.into(),
        (2 * binom(m as u64 - 2, half as u64 - 1)).into(),
    );
    out.extend(
        (0u32..1 << (m - 1))
            .filter(|p| p.count_ones() as usize == half)
            .map(|p| (p, each.clone())),
    );
    out
}

/// Support of the chunk distribution as `(point bits, probability)` in caller coordinates.
pub fn distribution(layout: &ChunkLayout) -> Vec<(u32, Rational)> {
    let m = layout.m;
    let patterns = chunk_patterns(m);
    // Per chunk: (caller mask, number of -1s, probability).
    let per_chunk: Vec<Vec<(u32, usize, &Rational)>> = layout
        .chunks()
        .iter()
        .map(|coords| {
            patterns
                .iter()
                .map(|(p, prob)| {
                    let mask = (0..m)
                        .filter(|i| p >> i & 1 == 1)
                        .fold(0u32, |acc, i| acc | 1 << coords[i]);
                    (mask, p.count_ones() as usize, prob)
                })
                .collect()
        })
        .collect();
    let extra = ChunkLayout::mask(layout.extra());
    let mut out = Vec::new();
    let mut idx = vec![0usize; layout.d];
    loop {
        let mut bits = 0u32;
        let mut s = 0usize;
        let mut prob = Rational::one();
        for (j, &i) in idx.iter().enumerate() {
            let (mask, ones, p) = per_chunk[j][i];
            bits |= mask;
            s += ones;
            prob *= p;
        }
        if !s.is_multiple_of(m) {
            bits |= extra;
        }
        out.push((bits, prob));
        // Odometer over chunk choices.
        let mut j = 0;
        while j < layout.d {
            idx[j] += 1;
            if idx[j] < patterns.len() {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
        if j == layout.d {
            break;
        }
    }
    out
}

/// Builds the explicit signed measure for target subset `S` (bitmask, `|S| = d`).
pub fn build_scheme(n: usize, m: usize, d: usize, subset: u32) -> Result<InterpolationScheme> {
    let layout = chunk_layout(n, m, d, subset)?;
    let chunk_masks: Vec<u32> = layout.chunks().iter().map(|c| ChunkLayout::mask(c)).collect();
    let y_weight = Rational::new(1.into(), num_bigint::BigInt::one() << d);
    let mut merged: BTreeMap<u32, (Rational, i8)> = BTreeMap::new();
    for (x, prob) in distribution(&layout) {
        let w = &prob * &y_weight;
        for y in 0u32..1 << d {
            let flip = (0..d)
                .filter(|j| y >> j & 1 == 1)
                .fold(0u32, |acc, j| acc | chunk_masks[j]);
            let point = x ^ flip;
            let sign: i8 = if y.count_ones() % 2 == 1 { -1 } else { 1 };
            match merged.get_mut(&point) {
                Some((acc, s)) => {
                    if *s != sign {
                        return Err(Error::SignConflict(point));
                    }
                    *acc += &w;
                }
                None => {
                    merged.insert(point, (w.clone(), sign));
                }
            }
        }
    }
    let atoms = merged
        .into_iter()
        .map(|(bits, (weight, sign))| Atom {
            point: CubePoint::new_unchecked(bits, n),
            weight,
            sign,
        })
        .collect();
    Ok(InterpolationScheme { layout, atoms })
}

/// `Σ weight · sign · f(point)` with `f` supplied pointwise.
pub fn recover_with(
    scheme: &InterpolationScheme,
    k: usize,
    mut f: impl FnMut(CubePoint) -> Option<Vec<Rational>>,
) -> Result<Vec<Rational>> {
    let mut acc = vec![Rational::zero(); k];
    for atom in &scheme.atoms {
        let v = f(atom.point).ok_or(Error::MissingValue(atom.point.bits()))?;
        if v.len() != k {
            return Err(Error::CodomainMismatch {
                expected: k,
                found: v.len(),
            });
        }
        for (a, x) in acc.iter_mut().zip(&v) {
            let term = &atom.weight * x;
            if atom.sign > 0 {
                *a += term;
            } else {
                *a -= term;
            }
        }
    }
    Ok(acc)
}

/// Recovers `f̂(S)` from a full value table (only atom points are read).
pub fn recover_coefficient(scheme: &InterpolationScheme, table: &ValueTable) -> Result<Vec<Rational>> {
    if table.n() != scheme.n() {
        return Err(Error::DimensionMismatch {
            expected: scheme.n(),
            found: table.n(),
        });
    }
    recover_with(scheme, table.k(), |p| Some(table.value(p.bits()).to_vec()))
}

/// Dimension of the space of multilinear polynomials of degree `<= d` that
/// vanish on all of `W(m)`.
pub fn vanishing_dimension(n: usize, m: usize, d: usize) -> Result<usize> {
    if m < 2 {
        return Err(Error::BadModulus(m));
    }
    if n == 0 {
        return Err(Error::ZeroDimension);
    }
    if n > MAX_VANISHING_N {
        return Err(Error::DimensionTooLarge {
            n,
            max: MAX_VANISHING_N,
        });
    }
    let cols = subsets_up_to(n, d);
    let rows: Vec<Vec<i64>> = (0..1u32 << n)
        .filter(|b| (b.count_ones() as usize).is_multiple_of(m))
        .map(|p| {
            cols.iter()
                .map(|s| if (s & p).count_ones() % 2 == 1 { -1 } else { 1 })
                .collect()
        })
        .collect();
    Ok(cols.len() - linalg::rank_exact_i64(&rows))
}
