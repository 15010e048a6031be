//! Log-concavity sweeps in `k` and the `k = n-1` closed form.

use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use num_traits::Signed;
use rayon::prelude::*;
use serde::Serialize;

use crate::counting::{binomial, CountTable};
use crate::error::{Error, Result};

/// Largest `n` for which log-concavity at this `p` is already established
/// (proved for `p = 1`, checked numerically elsewhere for `p ≤ 5`).
pub fn established_range(p: u32) -> Option<usize> {
    match p {
        1 => Some(usize::MAX),
        2 => Some(1500),
        3..=5 => Some(100),
        _ => None,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    /// Inside an established range: a regression in this code.
    Regression,
    /// Outside every established range; needs independent confirmation.
    CounterexampleCandidate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub n: usize,
    pub k: usize,
    pub kind: ViolationKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RowStatus {
    pub n: usize,
    pub checked: usize,
    pub violations: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub p: u32,
    pub n_max: usize,
    pub max_n_checked: usize,
    pub rows: Vec<RowStatus>,
    pub violations: Vec<Violation>,
    pub wall_time_ms: u128,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn checked(&self) -> usize {
        self.rows.iter().map(|r| r.checked).sum()
    }
}

/// `k` values in `2..=n-1` where `A(n,k)² < A(n,k-1)·A(n,k+1)`.
pub fn row_violations(row: &[BigUint]) -> Vec<usize> {
    let n = row.len() - 1;
    (2..n)
        .filter(|&k| &row[k] * &row[k] < &row[k - 1] * &row[k + 1])
        .collect()
}

/// Checks every row `3 ≤ n ≤ n_max` of an existing table.
pub fn sweep_table(table: &CountTable, p: u32, n_max: usize) -> Result<SweepReport> {
    let start = Instant::now();
    if n_max > table.n_max() || !table.has_p(p) {
        return Err(Error::InvalidRange(format!("table does not cover p={} n<={}", p, n_max)));
    }
    let established = established_range(p).unwrap_or(0);
    let per_row: Vec<(RowStatus, Vec<Violation>)> = (3..=n_max)
        .into_par_iter()
        .map(|n| {
            let row = table.row(p, n).expect("covered");
            let bad = row_violations(row);
            let kind = if n <= established {
                ViolationKind::Regression
            } else {
                ViolationKind::CounterexampleCandidate
            };
            let status = RowStatus {
                n,
                checked: n - 2,
                violations: bad.len(),
            };
            (status, bad.into_iter().map(|k| Violation { n, k, kind }).collect())
        })
        .collect();
    let mut rows = Vec::with_capacity(per_row.len());
    let mut violations = Vec::new();
    for (status, v) in per_row {
        rows.push(status);
        violations.extend(v);
    }
    Ok(SweepReport {
        p,
        n_max,
        max_n_checked: n_max.max(2),
        rows,
        violations,
        wall_time_ms: start.elapsed().as_millis(),
    })
}

/// Builds the table for `p` and checks `A(p,n,k)² ≥ A(p,n,k-1) A(p,n,k+1)` for
/// `3 ≤ n ≤ n_max`, `2 ≤ k ≤ n-1`, in exact integers.
pub fn logconcavity_sweep(p: u32, n_max: usize) -> Result<SweepReport> {
    if p == 0 {
        return Err(Error::NotPositive("p"));
    }
    if n_max < 3 {
        return Err(Error::InvalidRange(format!("n_max = {} < 3", n_max)));
    }
    let start = Instant::now();
    let table = CountTable::build_for(&[p], n_max)?;
    let mut report = sweep_table(&table, p, n_max)?;
    report.wall_time_ms = start.elapsed().as_millis();
    Ok(report)
}

/// `Δ(p,n) = [C(n,2)² - 3 C(n,4)] (2^p-1)² - C(n,3) (3^p-1)`.
pub fn delta_closed_form(p: u32, n: usize) -> BigInt {
    let n = n as u64;
    let two = BigInt::from(2).pow(p) - 1;
    let three = BigInt::from(3).pow(p) - 1;
    let c2 = BigInt::from(binomial(n, 2));
    let c3 = BigInt::from(binomial(n, 3));
    let c4 = BigInt::from(binomial(n, 4));
    (&c2 * &c2 - c4 * 3) * &two * &two - c3 * three
}

/// `A(p,n,n-1)² - A(p,n,n) A(p,n,n-2)` read from a table.
pub fn delta_from_table(table: &CountTable, p: u32, n: usize) -> Option<BigInt> {
    if n < 2 {
        return None;
    }
    let top = BigInt::from(table.a(p, n, n - 1)?);
    Some(&top * &top - BigInt::from(table.a(p, n, n)?) * BigInt::from(table.a(p, n, n - 2)?))
}

/// `(2^p - 1)² ≥ 3^p - 1`.
pub fn scalar_inequality(p: u32) -> bool {
    let two = BigInt::from(2).pow(p) - 1;
    &two * &two >= BigInt::from(3).pow(p) - 1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropositionFailure {
    pub p: u32,
    pub n: usize,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropositionReport {
    pub p_max: u32,
    pub n_max: usize,
    pub checked: usize,
    pub failures: Vec<PropositionFailure>,
}

impl PropositionReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// For `1 ≤ p ≤ p_max`, `3 ≤ n ≤ n_max`: the closed form equals the table value
/// and is positive; and `(2^p-1)² ≥ 3^p-1` for `2 ≤ p ≤ p_max`.
pub fn proposition_check(p_max: u32, n_max: usize) -> Result<PropositionReport> {
    let table = CountTable::build_for(&(1..=p_max).collect::<Vec<_>>(), n_max)?;
    let mut failures = Vec::new();
    let mut checked = 0;
    for p in 1..=p_max {
        if p >= 2 {
            checked += 1;
            if !scalar_inequality(p) {
                failures.push(PropositionFailure {
                    p,
                    n: 0,
                    reason: "(2^p-1)^2 < 3^p-1".into(),
                });
            }
        }
        for n in 3..=n_max {
            checked += 1;
            let closed = delta_closed_form(p, n);
            let direct = delta_from_table(&table, p, n).expect("covered");
            if closed != direct {
                failures.push(PropositionFailure {
                    p,
                    n,
                    reason: format!("closed form {} != table {}", closed, direct),
                });
            } else if !closed.is_positive() {
                failures.push(PropositionFailure {
                    p,
                    n,
                    reason: format!("delta = {} is not positive", closed),
                });
            }
        }
    }
    Ok(PropositionReport {
        p_max,
        n_max,
        checked,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delta_examples() {
        assert_eq!(delta_closed_form(2, 3), BigInt::from(73));
        let table = CountTable::build(5, 30).unwrap();
        for p in 1..=5 {
            for n in 3..=30 {
                assert_eq!(Some(delta_closed_form(p, n)), delta_from_table(&table, p, n));
            }
        }
        for n in 3..=30 {
            assert!(delta_closed_form(1, n) >= BigInt::from(0));
        }
    }

    #[test]
    fn scalar_inequality_values() {
        // 9 >= 8 at p = 2, fails at p = 1 (1 < 2)
        assert!(scalar_inequality(2));
        assert!(!scalar_inequality(1));
        assert!((2..=60).all(scalar_inequality));
    }

    #[test]
    fn proposition_examples() {
        assert!(proposition_check(1, 10).unwrap().passed());
        let r = proposition_check(5, 30).unwrap();
        assert!(r.passed(), "{:?}", r.failures);
        assert_eq!(r.checked, 4 + 5 * 28);
    }

    #[test]
    fn sweep_small() {
        let r = logconcavity_sweep(1, 30).unwrap();
        assert!(r.passed());
        assert_eq!(r.rows.len(), 28);
        assert_eq!(r.checked(), (3..=30).map(|n| n - 2).sum::<usize>());
        assert!(logconcavity_sweep(0, 10).is_err());
        assert!(logconcavity_sweep(2, 2).is_err());
    }

    #[test]
    fn row_violation_detection() {
        let row: Vec<BigUint> = [0u32, 1, 1, 5, 1].iter().map(|&x| BigUint::from(x)).collect();
        // k=2: 1 < 1*5, k=3: 25 >= 1
        assert_eq!(row_violations(&row), vec![2]);
    }

    #[test]
    fn violations_are_classified() {
        // a fake table whose row 4 is not log-concave
        let mut parts = std::collections::BTreeMap::new();
        let big = |v: &[u32]| v.iter().map(|&x| BigUint::from(x)).collect::<Vec<_>>();
        let rows = vec![big(&[1]), big(&[0, 1]), big(&[0, 1, 1]), big(&[0, 1, 1, 1]), big(&[0, 1, 1, 5, 1])];
        parts.insert(7, (big(&[0, 1, 1, 1, 1]), rows.clone()));
        parts.insert(3, (big(&[0, 1, 1, 1, 1]), rows));
        let table = CountTable::from_parts(4, parts).unwrap();
        let r = sweep_table(&table, 7, 4).unwrap();
        assert_eq!(r.violations, vec![Violation { n: 4, k: 2, kind: ViolationKind::CounterexampleCandidate }]);
        let r = sweep_table(&table, 3, 4).unwrap();
        assert_eq!(r.violations[0].kind, ViolationKind::Regression);
    }
}
