//! Bounded exact search for small skew covers.
//!
//! Coefficients range over `{-B..B} ∖ {0}` and offsets over `[-offset_bound,
//! offset_bound]`. A negative answer is a statement about that finite space
//! only.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::{Duration, Instant};

use num_integer::Integer;

use crate::cube::{check_exhaustive, CoverFamily, Hyperplane, IntPlane, PointSet};
use crate::error::{Error, Result};

/// Upper limit on the number of raw coefficient/offset combinations enumerated.
pub const MAX_POOL_ESTIMATE: u128 = 10_000_000;

/// Smallest integer at least `n/2 + 1`.
pub fn lower_bound(n: usize) -> usize {
    (n + 3) / 2
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchConfig {
    pub n: usize,
    pub coeff_bound: i64,
    pub offset_bound: i64,
    pub max_k: usize,
    pub time_budget: Option<Duration>,
    /// Restrict the first plane to all-positive, nondecreasing coefficients.
    pub canonical_first: bool,
    /// Worker threads; `1` gives a fully deterministic run.
    pub workers: usize,
}

impl SearchConfig {
    /// Defaults: offsets up to `n`, canonical first plane, single worker, no time limit.
    pub fn new(n: usize, coeff_bound: i64, max_k: usize) -> Self {
        SearchConfig {
            n,
            coeff_bound,
            offset_bound: n as i64,
            max_k,
            time_budget: None,
            canonical_first: true,
            workers: 1,
        }
    }

    fn validate(&self) -> Result<()> {
        check_exhaustive(self.n)?;
        if self.coeff_bound < 1 {
            return Err(Error::BadConfig("coefficient bound must be at least 1".into()));
        }
        if self.offset_bound < 0 {
            return Err(Error::BadConfig("offset bound must be nonnegative".into()));
        }
        if self.max_k == 0 {
            return Err(Error::BadConfig("max_k must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchStatus {
    FoundCover,
    ExhaustedNoCover,
    Timeout,
}

impl SearchStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            SearchStatus::FoundCover => "FoundCover",
            SearchStatus::ExhaustedNoCover => "ExhaustedNoCover",
            SearchStatus::Timeout => "Timeout",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    pub status: SearchStatus,
    pub family: Option<CoverFamily>,
    pub nodes_explored: u64,
    pub candidate_pool_size: usize,
    /// Largest family size proven impossible within the bounds (0 if none).
    pub exhausted_up_to: usize,
}

fn pool_estimate(n: usize, b: i64, offset_bound: i64) -> u128 {
    let per = 2 * b as u128;
    let mut total: u128 = (2 * offset_bound as u128 + 1) * b as u128;
    for _ in 1..n {
        total = total.saturating_mul(per);
    }
    total
}

/// Integer skew planes within the bounds: first coefficient positive, primitive
/// (gcd of all entries 1), parity-feasible, and containing at least one point.
/// Ordered colexicographically by `(a_1, ..., a_n, b)`.
pub fn candidate_pool(n: usize, coeff_bound: i64, offset_bound: i64) -> Result<Vec<Hyperplane>> {
    Ok(raw_pool(n, coeff_bound, offset_bound)?
        .into_iter()
        .map(|(a, b, _)| Hyperplane::from_ints(&a, b).expect("nonempty"))
        .collect())
}

type RawPlane = (Vec<i64>, i64, PointSet);

fn raw_pool(n: usize, coeff_bound: i64, offset_bound: i64) -> Result<Vec<RawPlane>> {
    check_exhaustive(n)?;
    if coeff_bound < 1 || offset_bound < 0 {
        return Err(Error::BadConfig("bounds must be positive".into()));
    }
    let estimate = pool_estimate(n, coeff_bound, offset_bound);
    if estimate > MAX_POOL_ESTIMATE {
        return Err(Error::PoolTooLarge {
            estimate,
            max: MAX_POOL_ESTIMATE,
        });
    }
    let values: Vec<i64> = (-coeff_bound..=coeff_bound).filter(|&v| v != 0).collect();
    let mut out = Vec::new();
    let mut idx = vec![0usize; n];
    loop {
        let a: Vec<i64> = idx.iter().map(|&i| values[i]).collect();
        if a[0] > 0 {
            let sum: i64 = a.iter().sum();
            let g = a.iter().fold(0i64, |g, &v| g.gcd(&v));
            for b in -offset_bound..=offset_bound {
                if (b - sum).rem_euclid(2) != 0 || g.gcd(&b) != 1 {
                    continue;
                }
                let cov = IntPlane::Small { a: a.clone(), b }.coverage();
                if !cov.is_empty() {
                    out.push((a.clone(), b, cov));
                }
            }
        }
        // Odometer, most significant digit last.
        let mut j = 0;
        while j < n {
            idx[j] += 1;
            if idx[j] < values.len() {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
        if j == n {
            break;
        }
    }
    out.sort_by_key(|x| colex_key(&x.0, x.1));
    Ok(out)
}

fn colex_key(a: &[i64], b: i64) -> Vec<i64> {
    std::iter::once(b).chain(a.iter().rev().copied()).collect()
}

/// Picks the plane covering the most uncovered points until the cube is covered;
/// ties go to the earlier plane in `pool`.
pub fn greedy_cover(n: usize, pool: &[Hyperplane]) -> Result<CoverFamily> {
    check_exhaustive(n)?;
    if pool.is_empty() {
        return Err(Error::EmptyFamily);
    }
    if let Some(p) = pool.iter().find(|p| p.n() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: p.n(),
        });
    }
    let covs: Vec<PointSet> = pool.iter().map(|p| IntPlane::from_plane(p).coverage()).collect();
    let mut uncovered = PointSet::full(n);
    let mut chosen = Vec::new();
    while !uncovered.is_empty() {
        let (best, gain) = covs
            .iter()
            .enumerate()
            .map(|(i, c)| (i, c.intersection_len(&uncovered)))
            .fold((0, 0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if gain == 0 {
            return Err(Error::PoolInsufficient {
                uncovered: uncovered.len(),
            });
        }
        uncovered.difference_with(&covs[best]);
        chosen.push(pool[best].clone());
    }
    CoverFamily::new(chosen)
}

/// Coverage sets after removing duplicates and dominated planes.
struct Candidates {
    words: usize,
    /// Flattened coverage bitsets, `words` per candidate.
    cov: Vec<u64>,
    /// Index into the raw pool.
    origin: Vec<usize>,
    /// Candidates containing each point, in candidate order.
    through: Vec<Vec<u32>>,
}

impl Candidates {
    fn build(n: usize, pool: &[RawPlane], keep: impl Fn(&RawPlane) -> bool, dominance: bool) -> Self {
        let mut seen = std::collections::HashSet::new();
        let mut picked: Vec<usize> = Vec::new();
        for (i, p) in pool.iter().enumerate() {
            if keep(p) && seen.insert(p.2.words().to_vec()) {
                picked.push(i);
            }
        }
        if dominance {
            // Larger sets first so a dominating set is always seen before the sets it contains.
            let mut by_size = picked.clone();
            by_size.sort_by_key(|&i| std::cmp::Reverse(pool[i].2.len()));
            let mut kept: Vec<usize> = Vec::new();
            for &i in &by_size {
                let c = &pool[i].2;
                if !kept.iter().any(|&j| c.is_subset(&pool[j].2)) {
                    kept.push(i);
                }
            }
            kept.sort_unstable();
            picked = kept;
        }
        let words = pool.first().map_or(1, |p| p.2.words().len());
        let mut cov = Vec::with_capacity(picked.len() * words);
        let mut through = vec![Vec::new(); 1 << n];
        for (ci, &i) in picked.iter().enumerate() {
            cov.extend_from_slice(pool[i].2.words());
            for pt in pool[i].2.iter() {
                through[pt as usize].push(ci as u32);
            }
        }
        Candidates {
            words,
            cov,
            origin: picked,
            through,
        }
    }

    fn len(&self) -> usize {
        self.origin.len()
    }

    fn set(&self, i: usize) -> &[u64] {
        &self.cov[i * self.words..(i + 1) * self.words]
    }

    fn gain(&self, i: usize, uncovered: &[u64]) -> usize {
        self.set(i)
            .iter()
            .zip(uncovered)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }
}

fn count(words: &[u64]) -> usize {
    words.iter().map(|w| w.count_ones() as usize).sum()
}

fn first(words: &[u64]) -> Option<usize> {
    words
        .iter()
        .enumerate()
        .find(|(_, &w)| w != 0)
        .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
}

fn minus(words: &[u64], set: &[u64]) -> Vec<u64> {
    words.iter().zip(set).map(|(a, b)| a & !b).collect()
}

struct Shared {
    nodes: AtomicU64,
    deadline: Option<Instant>,
    timed_out: AtomicBool,
    stop: AtomicBool,
}

impl Shared {
    fn tick(&self) -> bool {
        let n = self.nodes.fetch_add(1, Ordering::Relaxed);
        if n.is_multiple_of(1024) {
            if let Some(d) = self.deadline {
                if Instant::now() >= d {
                    self.timed_out.store(true, Ordering::Relaxed);
                }
            }
        }
        !self.timed_out.load(Ordering::Relaxed) && !self.stop.load(Ordering::Relaxed)
    }
}

/// Depth-first branch and bound below the root. Returns the chosen candidate
/// indices on success.
fn dfs(cands: &Candidates, shared: &Shared, uncovered: &[u64], remaining: usize, chosen: &mut Vec<u32>) -> bool {
    if !shared.tick() {
        return false;
    }
    let left = count(uncovered);
    if left == 0 {
        return true;
    }
    if remaining == 0 {
        return false;
    }
    let p = first(uncovered).expect("nonempty");
    let branches = &cands.through[p];
    if remaining == 1 {
        if let Some(&c) = branches.iter().find(|&&c| cands.gain(c as usize, uncovered) == left) {
            chosen.push(c);
            return true;
        }
        return false;
    }
    // Bound: best r-1 gains among all candidates.
    let mut top = vec![0usize; remaining - 1];
    for i in 0..cands.len() {
        let g = cands.gain(i, uncovered);
        if g > top[remaining - 2] {
            let pos = top.iter().position(|&t| g > t).expect("smaller slot exists");
            top.insert(pos, g);
            top.pop();
        }
    }
    let rest_bound: usize = top.iter().sum();
    let mut order: Vec<(usize, u32)> = branches
        .iter()
        .map(|&c| (cands.gain(c as usize, uncovered), c))
        .filter(|&(g, _)| g + rest_bound >= left)
        .collect();
    order.sort_by(|x, y| y.0.cmp(&x.0).then(x.1.cmp(&y.1)));
    for (_, c) in order {
        let next = minus(uncovered, cands.set(c as usize));
        chosen.push(c);
        if dfs(cands, shared, &next, remaining - 1, chosen) {
            return true;
        }
        chosen.pop();
    }
    false
}

/// Iterative deepening over the family size with first-plane symmetry breaking.
pub fn min_cover_search(config: &SearchConfig) -> Result<SearchOutcome> {
    config.validate()?;
    let n = config.n;
    let pool = raw_pool(n, config.coeff_bound, config.offset_bound)?;
    let pool_size = pool.len();
    let body = Candidates::build(n, &pool, |_| true, true);
    let root = if config.canonical_first {
        Candidates::build(
            n,
            &pool,
            |(a, _, _)| a.iter().all(|&v| v > 0) && a.windows(2).all(|w| w[0] <= w[1]),
            false,
        )
    } else {
        Candidates::build(n, &pool, |_| true, true)
    };
    let shared = Shared {
        nodes: AtomicU64::new(0),
        deadline: config.time_budget.map(|t| Instant::now() + t),
        timed_out: AtomicBool::new(false),
        stop: AtomicBool::new(false),
    };
    let full = PointSet::full(n);
    let total = 1usize << n;
    let outcome = |status, family, exhausted_up_to| SearchOutcome {
        status,
        family,
        nodes_explored: shared.nodes.load(Ordering::Relaxed),
        candidate_pool_size: pool_size,
        exhausted_up_to,
    };
    if body.len() == 0 {
        return Ok(outcome(SearchStatus::ExhaustedNoCover, None, config.max_k));
    }
    let max_cov = (0..body.len()).map(|i| count(body.set(i))).max().unwrap_or(0);
    let start = total.div_ceil(max_cov).max(1);
    let mut exhausted = start - 1;
    for k in start..=config.max_k {
        match search_k(&body, &root, &shared, full.words(), k, config) {
            Some(found) => {
                let planes = found
                    .into_iter()
                    .map(|(is_root, c)| {
                        let src = if is_root { &root } else { &body };
                        let (a, b, _) = &pool[src.origin[c as usize]];
                        Hyperplane::from_ints(a, *b).expect("nonempty")
                    })
                    .collect();
                return Ok(outcome(SearchStatus::FoundCover, Some(CoverFamily::new(planes)?), exhausted));
            }
            None if shared.timed_out.load(Ordering::Relaxed) => {
                return Ok(outcome(SearchStatus::Timeout, None, exhausted));
            }
            None => exhausted = k,
        }
    }
    Ok(outcome(SearchStatus::ExhaustedNoCover, None, config.max_k))
}

type Found = Vec<(bool, u32)>;

fn search_k(body: &Candidates, root: &Candidates, shared: &Shared, full: &[u64], k: usize, config: &SearchConfig) -> Option<Found> {
    let left = count(full);
    let bound: usize = {
        let mut g: Vec<usize> = (0..body.len()).map(|i| count(body.set(i))).collect();
        g.sort_unstable_by(|a, b| b.cmp(a));
        g.iter().take(k - 1).sum()
    };
    let mut branches: Vec<(usize, u32)> = (0..root.len())
        .map(|c| (count(root.set(c)), c as u32))
        .filter(|&(g, _)| g + bound >= left)
        .collect();
    branches.sort_by(|x, y| y.0.cmp(&x.0).then(x.1.cmp(&y.1)));
    let try_branch = |c: u32| -> Option<Found> {
        let next = minus(full, root.set(c as usize));
        let mut chosen = Vec::new();
        if dfs(body, shared, &next, k - 1, &mut chosen) {
            let mut out = vec![(true, c)];
            out.extend(chosen.into_iter().map(|x| (false, x)));
            Some(out)
        } else {
            None
        }
    };
    if !shared.tick() {
        return None;
    }
    if config.workers <= 1 {
        return branches.iter().find_map(|&(_, c)| try_branch(c));
    }
    parallel_branches(&branches, shared, config.workers, try_branch)
}

#[cfg(feature = "parallel")]
fn parallel_branches(
    branches: &[(usize, u32)],
    shared: &Shared,
    workers: usize,
    try_branch: impl Fn(u32) -> Option<Found> + Sync,
) -> Option<Found> {
    use rayon::prelude::*;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("thread pool");
    // The earliest branch with a cover wins, so the family does not depend on scheduling.
    let results: Vec<Option<Found>> = pool.install(|| {
        branches
            .par_iter()
            .map(|&(_, c)| {
                let r = try_branch(c);
                if r.is_some() {
                    shared.stop.store(true, Ordering::Relaxed);
                }
                r
            })
            .collect()
    });
    let found = results.into_iter().flatten().next();
    shared.stop.store(false, Ordering::Relaxed);
    found
}

#[cfg(not(feature = "parallel"))]
fn parallel_branches(
    branches: &[(usize, u32)],
    _shared: &Shared,
    _workers: usize,
    try_branch: impl Fn(u32) -> Option<Found>,
) -> Option<Found> {
    branches.iter().find_map(|&(_, c)| try_branch(c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{level_set_cover, power_of_two_cover};
    use crate::cube::verify_cover;

    fn ints(p: &Hyperplane) -> (Vec<i64>, i64) {
        let a = p.coefficients().iter().map(|c| i64::try_from(c.to_integer()).unwrap()).collect();
        (a, i64::try_from(p.offset().to_integer()).unwrap())
    }

    #[test]
    fn lower_bound_values() {
        assert_eq!(lower_bound(5), 4);
        assert_eq!(lower_bound(2), 2);
        assert_eq!(lower_bound(6), 4);
        assert_eq!(lower_bound(1), 2);
    }

    #[test]
    fn pool_n2() {
        let pool: Vec<_> = candidate_pool(2, 1, 0).unwrap().iter().map(ints).collect();
        assert_eq!(pool.len(), 2);
        assert!(pool.contains(&(vec![1, 1], 0)));
        assert!(pool.contains(&(vec![1, -1], 0)));
    }

    #[test]
    fn pool_filters() {
        let pool: Vec<_> = candidate_pool(2, 1, 2).unwrap().iter().map(ints).collect();
        // x1 + x2 + 1 has the wrong parity; x1 + x2 + 2 is primitive and hits (-1,-1).
        assert!(!pool.contains(&(vec![1, 1], 1)));
        assert!(pool.contains(&(vec![1, 1], 2)));
        let pool = candidate_pool(4, 2, 4).unwrap();
        assert!(pool.iter().all(Hyperplane::is_skew));
        assert!(pool.iter().all(|p| !p.covered_set().unwrap().is_empty()));
        // Scalar multiples are merged: 2x1 + 2x2 + 2x3 + 2x4 is absent.
        assert!(!pool.iter().map(ints).any(|(a, b)| a == vec![2, 2, 2, 2] && b == 0));
    }

    #[test]
    fn pool_too_large() {
        assert!(matches!(candidate_pool(14, 3, 2), Err(Error::PoolTooLarge { .. })));
    }

    #[test]
    fn n2_single_plane_impossible() {
        let mut cfg = SearchConfig::new(2, 1, 1);
        cfg.offset_bound = 0;
        let out = min_cover_search(&cfg).unwrap();
        assert_eq!(out.status, SearchStatus::ExhaustedNoCover);
        assert!(out.family.is_none());
    }

    #[test]
    fn n5_record() {
        let mut cfg = SearchConfig::new(5, 2, 4);
        cfg.offset_bound = 0;
        let out = min_cover_search(&cfg).unwrap();
        assert_eq!(out.status, SearchStatus::FoundCover);
        let fam = out.family.unwrap();
        assert_eq!(fam.len(), 4);
        assert!(verify_cover(&fam).unwrap().covered);
        assert!(fam.planes().iter().all(|p| {
            let (a, b) = ints(p);
            b == 0 && a.iter().all(|v| (1..=2).contains(&v.abs()))
        }));
        assert_eq!(out.exhausted_up_to, 3);
    }

    #[test]
    fn deterministic() {
        let mut cfg = SearchConfig::new(4, 1, 4);
        cfg.offset_bound = 2;
        assert_eq!(min_cover_search(&cfg).unwrap(), min_cover_search(&cfg).unwrap());
    }

    #[test]
    fn parallel_agrees_on_family() {
        let mut cfg = SearchConfig::new(5, 2, 4);
        cfg.offset_bound = 0;
        let single = min_cover_search(&cfg).unwrap();
        cfg.workers = 4;
        let multi = min_cover_search(&cfg).unwrap();
        assert_eq!(single.status, multi.status);
        assert_eq!(single.family, multi.family);
    }

    #[test]
    fn without_symmetry_breaking() {
        let mut cfg = SearchConfig::new(4, 1, 4);
        cfg.offset_bound = 4;
        cfg.canonical_first = false;
        let a = min_cover_search(&cfg).unwrap();
        cfg.canonical_first = true;
        let b = min_cover_search(&cfg).unwrap();
        assert_eq!(a.status, b.status);
        assert_eq!(a.family.map(|f| f.len()), b.family.map(|f| f.len()));
    }

    #[test]
    fn timeout_is_reported() {
        let mut cfg = SearchConfig::new(7, 2, 4);
        cfg.offset_bound = 2;
        cfg.time_budget = Some(Duration::ZERO);
        let out = min_cover_search(&cfg).unwrap();
        assert_eq!(out.status, SearchStatus::Timeout);
    }

    #[test]
    fn greedy_examples() {
        let pool = level_set_cover(3).unwrap().into_planes();
        let g = greedy_cover(3, &pool).unwrap();
        assert!(g.len() <= 4);
        assert!(verify_cover(&g).unwrap().covered);

        let pool = power_of_two_cover(2).unwrap().into_planes();
        let g = greedy_cover(5, &pool).unwrap();
        assert_eq!(g.len(), 4);
        assert!(g.len() >= lower_bound(5));
    }

    #[test]
    fn greedy_insufficient() {
        let pool = vec![Hyperplane::from_ints(&[1, 1], 0).unwrap()];
        assert_eq!(greedy_cover(2, &pool).unwrap_err(), Error::PoolInsufficient { uncovered: 2 });
        assert_eq!(greedy_cover(2, &[]).unwrap_err(), Error::EmptyFamily);
    }

    #[test]
    fn bad_config() {
        assert!(min_cover_search(&SearchConfig::new(3, 0, 2)).is_err());
        assert!(min_cover_search(&SearchConfig::new(3, 1, 0)).is_err());
    }
}
