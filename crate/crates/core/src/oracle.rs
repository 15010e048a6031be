//! Brute-force ground truth: every commuting `p`-tuple on `n` points, streamed.
//!
//! Tuples are built along a centralizer chain: `σ_1` ranges over all of `S_n`,
//! `σ_2` over the elements of `S_n` commuting with `σ_1`, `σ_3` over those
//! commuting with both, and so on. Nothing here knows any counting formula.

use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::check::CheckReport;
use crate::counting::CountTable;
use crate::error::{Error, Result};
use crate::perm::{orbit_count, CommutingTuple, Permutation};
use crate::records::CountRecord;
use crate::series::partition_count;

/// Default refusal threshold for [`estimated_cost`], in tuple-steps.
pub const DEFAULT_CEILING: f64 = 1e9;

/// All permutations of `n` points in lexicographic order of their images.
pub fn all_permutations(n: usize) -> Vec<Permutation> {
    let mut images: Vec<usize> = (0..n).collect();
    let mut out = vec![Permutation::from_images_unchecked(images.clone())];
    loop {
        let Some(i) = (1..n).rev().find(|&i| images[i - 1] < images[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| images[j] > images[i - 1]).unwrap();
        images.swap(i - 1, j);
        images[i..].reverse();
        out.push(Permutation::from_images_unchecked(images.clone()));
    }
}

/// Upper-bound style estimate: `n! · c^{p-1}` with `c` the mean centralizer
/// size in `S_n`, which is the number of conjugacy classes.
pub fn estimated_cost(p: usize, n: usize) -> f64 {
    let n_fact: f64 = (1..=n).map(|i| i as f64).product();
    if p == 0 {
        return 1.0;
    }
    let mean_centralizer = partition_count(n).to_f64().unwrap_or(f64::INFINITY);
    n_fact * mean_centralizer.powi(p as i32 - 1)
}

fn check_budget(p: usize, n: usize, ceiling: f64) -> Result<()> {
    let estimated = estimated_cost(p, n);
    if estimated > ceiling {
        return Err(Error::BudgetExceeded { estimated, ceiling });
    }
    Ok(())
}

struct Level {
    /// Centralizer of the prefix above this level; the next level filters it.
    pool: Arc<Vec<u32>>,
    choices: Arc<Vec<u32>>,
    pos: usize,
}

/// Streaming enumerator over commuting tuples.
pub struct CommutingTuples {
    n: usize,
    p: usize,
    group: Arc<Vec<Permutation>>,
    levels: Vec<Level>,
    chosen: Vec<u32>,
    empty_pending: bool,
}

impl CommutingTuples {
    fn new(p: usize, n: usize, group: Arc<Vec<Permutation>>, first: Option<u32>) -> Self {
        let all: Arc<Vec<u32>> = Arc::new((0..group.len() as u32).collect());
        let choices = match first {
            Some(idx) => Arc::new(vec![idx]),
            None => all.clone(),
        };
        let levels = if p == 0 {
            Vec::new()
        } else {
            vec![Level {
                pool: all,
                choices,
                pos: 0,
            }]
        };
        CommutingTuples {
            n,
            p,
            group,
            levels,
            chosen: Vec::with_capacity(p),
            empty_pending: p == 0,
        }
    }

    fn emit(&self) -> CommutingTuple {
        CommutingTuple::new_unchecked(
            self.n,
            self.chosen.iter().map(|&i| self.group[i as usize].clone()).collect(),
        )
    }
}

impl Iterator for CommutingTuples {
    type Item = CommutingTuple;

    fn next(&mut self) -> Option<CommutingTuple> {
        if self.empty_pending {
            self.empty_pending = false;
            return Some(CommutingTuple::empty(self.n));
        }
        loop {
            let depth = self.levels.len();
            let top = self.levels.last_mut()?;
            if top.pos == top.choices.len() {
                self.levels.pop();
                continue;
            }
            let idx = top.choices[top.pos];
            top.pos += 1;
            self.chosen.truncate(depth - 1);
            self.chosen.push(idx);
            if depth == self.p {
                return Some(self.emit());
            }
            let chosen = &self.group[idx as usize];
            let next: Arc<Vec<u32>> = Arc::new(
                top.pool
                    .iter()
                    .copied()
                    .filter(|&c| self.group[c as usize].commutes_unchecked(chosen))
                    .collect(),
            );
            self.levels.push(Level {
                pool: next.clone(),
                choices: next,
                pos: 0,
            });
        }
    }
}

/// Every commuting `p`-tuple on `n` points, exactly once.
pub fn enumerate_commuting(p: usize, n: usize) -> Result<CommutingTuples> {
    enumerate_commuting_with_budget(p, n, DEFAULT_CEILING)
}

pub fn enumerate_commuting_with_budget(p: usize, n: usize, ceiling: f64) -> Result<CommutingTuples> {
    check_budget(p, n, ceiling)?;
    Ok(CommutingTuples::new(p, n, Arc::new(all_permutations(n)), None))
}

/// The transitive commuting `p`-tuples on `n` points.
pub fn enumerate_transitive(p: usize, n: usize) -> Result<impl Iterator<Item = CommutingTuple>> {
    enumerate_transitive_with_budget(p, n, DEFAULT_CEILING)
}

pub fn enumerate_transitive_with_budget(
    p: usize,
    n: usize,
    ceiling: f64,
) -> Result<impl Iterator<Item = CommutingTuple>> {
    Ok(enumerate_commuting_with_budget(p, n, ceiling)?.filter(|t| orbit_count(t.n(), t.perms()) == 1))
}

/// Number of commuting `p`-tuples on `n` points with `k` orbits, by enumeration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitHistogram {
    pub p: usize,
    pub n: usize,
    /// `counts[k]` for `0 ≤ k ≤ n`.
    pub counts: Vec<BigUint>,
}

impl OrbitHistogram {
    fn empty(p: usize, n: usize) -> Self {
        OrbitHistogram {
            p,
            n,
            counts: vec![BigUint::default(); n + 1],
        }
    }

    pub fn count(&self, k: usize) -> BigUint {
        self.counts.get(k).cloned().unwrap_or_default()
    }

    pub fn total(&self) -> BigUint {
        self.counts.iter().sum()
    }

    /// Adds another partial histogram of the same shape.
    pub fn merge(&mut self, other: &OrbitHistogram) {
        debug_assert_eq!((self.p, self.n), (other.p, other.n));
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
    }

    pub fn records(&self) -> Vec<CountRecord> {
        self.counts
            .iter()
            .enumerate()
            .map(|(k, v)| CountRecord::new(self.p as u32, self.n, k, v))
            .collect()
    }
}

fn tally(p: usize, n: usize, tuples: impl Iterator<Item = CommutingTuple>) -> OrbitHistogram {
    let mut counts = vec![0u64; n + 1];
    for t in tuples {
        counts[orbit_count(n, t.perms())] += 1;
    }
    OrbitHistogram {
        p,
        n,
        counts: counts.into_iter().map(BigUint::from).collect(),
    }
}

pub fn histogram(p: usize, n: usize) -> Result<OrbitHistogram> {
    histogram_with_budget(p, n, DEFAULT_CEILING)
}

pub fn histogram_with_budget(p: usize, n: usize, ceiling: f64) -> Result<OrbitHistogram> {
    Ok(tally(p, n, enumerate_commuting_with_budget(p, n, ceiling)?))
}

/// Same result as [`histogram`], with the stream split by `σ_1` across the
/// current rayon pool and the partial histograms summed.
pub fn histogram_parallel(p: usize, n: usize, ceiling: f64) -> Result<OrbitHistogram> {
    check_budget(p, n, ceiling)?;
    if p == 0 {
        return histogram_with_budget(p, n, ceiling);
    }
    let group = Arc::new(all_permutations(n));
    let hist = (0..group.len() as u32)
        .into_par_iter()
        .map(|first| tally(p, n, CommutingTuples::new(p, n, group.clone(), Some(first))))
        .reduce(
            || OrbitHistogram::empty(p, n),
            |mut a, b| {
                a.merge(&b);
                a
            },
        );
    Ok(hist)
}

/// Compares an enumerated histogram with a count table row.
pub fn compare_with_table(hist: &OrbitHistogram, table: &CountTable) -> Result<CheckReport> {
    let row = table
        .row(hist.p as u32, hist.n)
        .ok_or_else(|| Error::InvalidRange(format!("table lacks p={} n={}", hist.p, hist.n)))?;
    let mut report = CheckReport::new(format!("enumeration vs table p={} n={}", hist.p, hist.n));
    for k in 0..=hist.n {
        report.compare(|| format!("p={} n={} k={}", hist.p, hist.n, k), &hist.count(k), &row[k]);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use std::collections::HashSet;

    use super::*;

    fn counts(h: &OrbitHistogram) -> Vec<u64> {
        h.counts.iter().map(|c| c.to_u64().unwrap()).collect()
    }

    #[test]
    fn permutations_listing() {
        assert_eq!(all_permutations(0).len(), 1);
        assert_eq!(all_permutations(4).len(), 24);
        let p5 = all_permutations(5);
        assert_eq!(p5.len(), 120);
        assert!(p5.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn enumeration_sizes() {
        assert_eq!(enumerate_commuting(0, 3).unwrap().count(), 1);
        assert_eq!(enumerate_commuting(0, 0).unwrap().count(), 1);
        assert_eq!(enumerate_commuting(1, 3).unwrap().count(), 6);
        assert_eq!(enumerate_commuting(2, 3).unwrap().count(), 18);
        assert_eq!(enumerate_commuting(3, 3).unwrap().count(), 48);
    }

    #[test]
    fn histograms() {
        assert_eq!(counts(&histogram(1, 3).unwrap()), vec![0, 2, 3, 1]);
        assert_eq!(counts(&histogram(2, 3).unwrap()), vec![0, 8, 9, 1]);
        assert_eq!(counts(&histogram(3, 3).unwrap()), vec![0, 26, 21, 1]);
        assert_eq!(counts(&histogram(0, 4).unwrap()), vec![0, 0, 0, 0, 1]);
        assert_eq!(histogram(3, 3).unwrap().total(), BigUint::from(48u32));
    }

    #[test]
    fn transitive_examples() {
        assert_eq!(enumerate_transitive(1, 5).unwrap().count(), 24);
        assert!(enumerate_transitive(1, 5)
            .unwrap()
            .all(|t| t.perms()[0].pow(5).is_identity() && !t.perms()[0].is_identity()));
        assert_eq!(enumerate_transitive(2, 2).unwrap().count(), 3);
        assert_eq!(enumerate_transitive(2, 3).unwrap().count(), 8);
    }

    #[test]
    fn stream_has_no_duplicates_and_all_commute() {
        for p in 0..=3 {
            for n in 0..=4 {
                let all: Vec<_> = enumerate_commuting(p, n).unwrap().collect();
                let distinct: HashSet<_> = all.iter().cloned().collect();
                assert_eq!(distinct.len(), all.len());
                for t in &all {
                    assert_eq!(t.p(), p);
                    assert!(CommutingTuple::new(n, t.perms().to_vec()).is_ok());
                }
            }
        }
    }

    #[test]
    fn parallel_split_agrees() {
        for (p, n) in [(1, 4), (2, 4), (3, 4), (2, 5), (0, 3)] {
            assert_eq!(
                histogram(p, n).unwrap(),
                histogram_parallel(p, n, DEFAULT_CEILING).unwrap()
            );
        }
    }

    #[test]
    fn budget_refusal() {
        match enumerate_commuting_with_budget(2, 6, 100.0) {
            Err(Error::BudgetExceeded { estimated, ceiling }) => {
                assert_eq!(ceiling, 100.0);
                assert_eq!(estimated, 720.0 * 11.0);
            }
            _ => panic!("expected a refusal"),
        }
        assert!(histogram(3, 12).is_err());
        assert!(estimated_cost(3, 7) < DEFAULT_CEILING);
        assert_eq!(estimated_cost(0, 50), 1.0);
    }

    #[test]
    fn merge_is_order_independent() {
        let a = histogram(2, 3).unwrap();
        let b = histogram(2, 3).unwrap();
        let mut ab = a.clone();
        ab.merge(&b);
        let mut ba = b.clone();
        ba.merge(&a);
        assert_eq!(ab, ba);
        assert_eq!(ab.count(1), BigUint::from(16u32));
    }
}
