//! Exact rank and determinant over the rationals.
//!
//! Rows are scaled to integers first (row scaling never changes rank). A pass
//! modulo a prime picks out a set of independent rows; fraction-free (Bareiss)
//! elimination over `Z` on those rows then confirms full column rank exactly.
//! When the modular pass finds a deficiency, Bareiss runs on the whole matrix.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::rational::{self, Rational};

/// Mersenne prime `2^61 - 1`.
const PRIME: u64 = (1 << 61) - 1;

pub type IntMatrix = Vec<Vec<BigInt>>;

/// Clears denominators row by row.
pub fn integer_rows(rows: &[Vec<Rational>]) -> IntMatrix {
    rows.iter().map(|r| rational::to_integers(r).0).collect()
}

fn mul_mod(a: u64, b: u64) -> u64 {
    ((u128::from(a) * u128::from(b)) % u128::from(PRIME)) as u64
}

fn pow_mod(mut a: u64, mut e: u64) -> u64 {
    let mut acc = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a);
        }
        a = mul_mod(a, a);
        e >>= 1;
    }
    acc
}

fn reduce(v: &BigInt) -> u64 {
    v.mod_floor(&BigInt::from(PRIME)).to_u64().expect("residue below p")
}

/// Row-echelon basis modulo `2^61 - 1`, grown one row at a time.
#[derive(Debug, Clone)]
struct ModBasis {
    cols: usize,
    /// `(pivot column, normalized row)`, pivot entry equal to 1.
    rows: Vec<(usize, Vec<u64>)>,
}

impl ModBasis {
    fn new(cols: usize) -> Self {
        ModBasis {
            cols,
            rows: Vec::new(),
        }
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `row` against the basis; keeps it when independent.
    fn insert(&mut self, mut row: Vec<u64>) -> bool {
        for (pc, b) in &self.rows {
            let f = row[*pc];
            if f == 0 {
                continue;
            }
            for j in *pc..self.cols {
                if b[j] != 0 {
                    row[j] = (row[j] + PRIME - mul_mod(f, b[j])) % PRIME;
                }
            }
        }
        let Some(pc) = row.iter().position(|&v| v != 0) else {
            return false;
        };
        let inv = pow_mod(row[pc], PRIME - 2);
        for v in row.iter_mut().skip(pc) {
            *v = mul_mod(*v, inv);
        }
        self.rows.push((pc, row));
        true
    }
}

/// Rank modulo `p` and the indices of the rows that formed the basis.
fn rank_mod_p_rows(rows: impl Iterator<Item = Vec<u64>>, cols: usize) -> (usize, Vec<usize>) {
    let mut basis = ModBasis::new(cols);
    let mut picked = Vec::new();
    for (i, row) in rows.enumerate() {
        if basis.insert(row) {
            picked.push(i);
        }
        if basis.rank() == cols {
            break;
        }
    }
    (basis.rank(), picked)
}

/// Rank of `rows` modulo `2^61 - 1`.
pub fn rank_mod_p(rows: &IntMatrix) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    rank_mod_p_rows(rows.iter().map(|r| r.iter().map(reduce).collect()), cols).0
}

/// Rank over `Q` given the modular screen's result.
fn confirm(rows: &IntMatrix, cols: usize, screen: (usize, Vec<usize>)) -> usize {
    let (rank_p, picked) = screen;
    if rank_p == cols && cols > 0 {
        let square: IntMatrix = picked.iter().map(|&i| rows[i].clone()).collect();
        let r = rank_bareiss(&square);
        // Independence modulo p implies independence over Q.
        assert_eq!(r, cols, "modular pivot rows must stay independent over Q");
        return r;
    }
    rank_bareiss(rows)
}

fn reduce_i64(v: i64) -> u64 {
    v.rem_euclid(PRIME as i64) as u64
}

/// Exact rank of a small-integer matrix.
pub fn rank_exact_i64(rows: &[Vec<i64>]) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let screen = rank_mod_p_rows(rows.iter().map(|r| r.iter().map(|&v| reduce_i64(v)).collect()), cols);
    let big: IntMatrix = if screen.0 == cols {
        // Only the picked rows are needed for confirmation.
        let mut out = vec![Vec::new(); rows.len()];
        for &i in &screen.1 {
            out[i] = rows[i].iter().map(|&v| BigInt::from(v)).collect();
        }
        out
    } else {
        rows.iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect()
    };
    confirm(&big, cols, screen)
}

/// Fraction-free Gaussian elimination; returns the rank over `Q`.
pub fn rank_bareiss(rows: &IntMatrix) -> usize {
    bareiss(rows.clone()).0
}

/// Determinant of a square integer matrix by Bareiss elimination.
pub fn det_bareiss(rows: &IntMatrix) -> BigInt {
    let n = rows.len();
    assert!(rows.iter().all(|r| r.len() == n), "square matrix expected");
    if n == 0 {
        return BigInt::one();
    }
    let (rank, last_pivot, swaps) = bareiss(rows.clone());
    if rank < n {
        BigInt::zero()
    } else if swaps % 2 == 1 {
        -last_pivot
    } else {
        last_pivot
    }
}

/// Determinant of a square rational matrix.
pub fn det_rational(rows: &[Vec<Rational>]) -> Rational {
    let mut scale = BigInt::one();
    let ints: IntMatrix = rows
        .iter()
        .map(|r| {
            let (ints, lcm) = rational::to_integers(r);
            scale *= lcm;
            ints
        })
        .collect();
    Rational::new(det_bareiss(&ints), scale)
}

/// Returns `(rank, last pivot, row swaps)`.
fn bareiss(mut m: IntMatrix) -> (usize, BigInt, usize) {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut rank = 0;
    let mut swaps = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(piv) = (rank..rows)
            .filter(|&i| !m[i][c].is_zero())
            .min_by_key(|&i| m[i][c].abs())
        else {
            continue;
        };
        if piv != rank {
            m.swap(rank, piv);
            swaps += 1;
        }
        let (head, tail) = m.split_at_mut(rank + 1);
        let pivot_row = &head[rank];
        let p = &pivot_row[c];
        for row in tail.iter_mut() {
            let f = row[c].clone();
            for j in c + 1..cols {
                let v = p * &row[j] - &f * &pivot_row[j];
                debug_assert!((&v % &prev).is_zero());
                row[j] = v / &prev;
            }
            row[c] = BigInt::zero();
        }
        prev = m[rank][c].clone();
        rank += 1;
    }
    (rank, prev, swaps)
}

/// Exact rank: modular row selection, then Bareiss confirmation.
pub fn rank_exact(rows: &IntMatrix) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let screen = rank_mod_p_rows(rows.iter().map(|r| r.iter().map(reduce).collect()), cols);
    confirm(rows, cols, screen)
}

/// Dimension of the nullspace `{c : A c = 0}`.
pub fn nullity(rows: &IntMatrix, cols: usize) -> usize {
    if rows.is_empty() {
        return cols;
    }
    cols - rank_exact(rows)
}
