//! Explicit skew covers: the `2^m`-plane family, level sets, the even-`n`
//! balanced family, and the two hand-built small examples.

use crate::cube::{check_exhaustive, CoverFamily, Hyperplane, MAX_EXHAUSTIVE_N};
use crate::error::{Error, Result};

/// Dimension covered by [`power_of_two_cover`]: `2^m + m - 1`.
pub fn power_of_two_dimension(m: u32) -> usize {
    (1usize << m) + m as usize - 1
}

/// `2^m` skew planes covering `{-1,1}^{2^m+m-1}`:
/// `x_1 + ... + x_{2^m-1} + Σ_j ±2^j x_{2^m+j} = 0`.
///
/// Planes are ordered by sign pattern read as an `m`-bit integer, bit `j` set
/// meaning a minus sign on `2^j`.
pub fn power_of_two_cover(m: u32) -> Result<CoverFamily> {
    if m == 0 {
        return Err(Error::ZeroM);
    }
    if m > 5 {
        return Err(Error::MTooLarge {
            m,
            n: usize::MAX,
            max: MAX_EXHAUSTIVE_N,
        });
    }
    let n = power_of_two_dimension(m);
    if n > MAX_EXHAUSTIVE_N {
        return Err(Error::MTooLarge {
            m,
            n,
            max: MAX_EXHAUSTIVE_N,
        });
    }
    let ones = (1usize << m) - 1;
    let planes = (0u32..1 << m)
        .map(|pattern| {
            let mut a = vec![1i64; ones];
            a.extend((0..m).map(|j| {
                let mag = 1i64 << j;
                if pattern >> j & 1 == 1 {
                    -mag
                } else {
                    mag
                }
            }));
            Hyperplane::from_ints(&a, 0)
        })
        .collect::<Result<Vec<_>>>()?;
    CoverFamily::new(planes)
}

/// Sign pattern (bit `j` set ⇔ minus on `2^j`) with `Σ ±2^j = k`, if one exists.
pub fn signed_binary_pattern(k: i64, m: u32) -> Option<u32> {
    let top = (1i64 << m) - 1;
    if k % 2 == 0 || k.abs() > top {
        return None;
    }
    // Σ s_j 2^j = 2u - top where u collects the plus signs.
    let u = ((k + top) / 2) as u32;
    Some(!u & (top as u32))
}

/// The `n + 1` planes `x_1 + ... + x_n = 2k - n`, `k = 0..=n`.
pub fn level_set_cover(n: usize) -> Result<CoverFamily> {
    check_exhaustive(n)?;
    let planes = (0..=n)
        .map(|k| level_plane(n, k))
        .collect::<Result<Vec<_>>>()?;
    CoverFamily::new(planes)
}

/// Plane `k` of the level-set family; it holds the points with exactly `k` coordinates `+1`.
pub fn level_plane(n: usize, k: usize) -> Result<Hyperplane> {
    Hyperplane::from_ints(&vec![1; n], n as i64 - 2 * k as i64)
}

/// Level sets `k = 1..n-1` plus `x_1 + ... + x_{n/2} - x_{n/2+1} - ... - x_n = 0`.
pub fn balanced_even_cover(n: usize) -> Result<CoverFamily> {
    check_exhaustive(n)?;
    if n % 2 == 1 {
        return Err(Error::OddDimension(n));
    }
    let mut planes = (1..n).map(|k| level_plane(n, k)).collect::<Result<Vec<_>>>()?;
    let split: Vec<i64> = (0..n).map(|j| if j < n / 2 { 1 } else { -1 }).collect();
    planes.push(Hyperplane::from_ints(&split, 0)?);
    CoverFamily::new(planes)
}

/// The four planes covering `{-1,1}^5`, as displayed in the introduction.
pub fn example_n5() -> CoverFamily {
    let rows: [[i64; 5]; 4] = [
        [1, 1, 1, 1, 2],
        [1, 1, 1, -1, 2],
        [1, 1, 1, 1, -2],
        [1, 1, 1, -1, -2],
    ];
    family_from_rows(&rows)
}

/// The five planes covering `{-1,1}^6`.
pub fn example_n6() -> CoverFamily {
    let rows: [[i64; 6]; 5] = [
        [1, -1, 2, 1, 1, 2],
        [1, -1, 1, 1, 1, -1],
        [1, -1, -1, 2, -2, 1],
        [1, 1, 1, 1, 1, -1],
        [1, -1, -3, 1, 1, -1],
    ];
    family_from_rows(&rows)
}

fn family_from_rows<const N: usize>(rows: &[[i64; N]]) -> CoverFamily {
    let planes = rows
        .iter()
        .map(|r| Hyperplane::from_ints(r, 0).expect("nonempty row"))
        .collect();
    CoverFamily::new(planes).expect("nonempty family")
}
