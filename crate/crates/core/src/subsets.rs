//! Subsets of `[n]` as bitmasks, in colexicographic order.
//!
//! For subsets of a fixed size, colex order coincides with ascending bitmask
//! value, so iteration is Gosper's hack and ranking is the combinatorial
//! number system.

/// `binom(n, k)` as `u128`; zero when `k > n`.
pub fn binom(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * u128::from(n - i) / u128::from(i + 1);
    }
    acc
}

/// Iterator over all `k`-subsets of `[n]` in colex order.
#[derive(Debug, Clone)]
pub struct KSubsets {
    next: Option<u64>,
    limit: u64,
}

impl Iterator for KSubsets {
    type Item = u32;

    fn next(&mut self) -> Option<u32> {
        let cur = self.next?;
        self.next = if cur == 0 {
            None
        } else {
            let c = cur & cur.wrapping_neg();
            let r = cur + c;
            let nxt = (((r ^ cur) >> 2) / c) | r;
            (nxt < self.limit).then_some(nxt)
        };
        Some(cur as u32)
    }
}

pub fn k_subsets(n: usize, k: usize) -> KSubsets {
    assert!(n < 32, "subset masks are 32-bit");
    let first = if k > n { None } else { Some((1u64 << k) - 1) };
    KSubsets {
        next: first,
        limit: 1u64 << n,
    }
}

/// Position of `mask` among the subsets of its size in colex order.
pub fn colex_rank(mask: u32) -> usize {
    let mut rank = 0u128;
    let mut m = mask;
    let mut i = 1u64;
    while m != 0 {
        let c = m.trailing_zeros() as u64;
        rank += binom(c, i);
        i += 1;
        m &= m - 1;
    }
    rank as usize
}

/// All subsets of `[n]` with at most `d` elements, in colex (= ascending mask) order.
pub fn subsets_up_to(n: usize, d: usize) -> Vec<u32> {
    let mut out: Vec<u32> = (0..=d.min(n)).flat_map(|k| k_subsets(n, k)).collect();
    out.sort_unstable();
    out
}

pub fn mask_from_indices(indices: &[usize]) -> u32 {
    indices.iter().fold(0, |acc, &i| acc | (1 << i))
}

pub fn indices_of(mask: u32) -> Vec<usize> {
    (0..32).filter(|&i| mask >> i & 1 == 1).collect()
}
