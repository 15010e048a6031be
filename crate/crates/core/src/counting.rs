//! Exact values of `A(p, n, k)`, the number of commuting `p`-tuples of
//! permutations of `n` points with exactly `k` orbits.
//!
//! The table is filled by conditioning on the orbit of the first point:
//!
//! ```text
//! A(p, n, k) = Σ_{m=1}^{n-k+1} C(n-1, m-1) · A(p, m, 1) · A(p, n-m, k-1),   A(p, 0, 0) = 1
//! ```
//!
//! with `A(p, m, 1) = (m-1)! · B(p, m)`. The product `C(n-1, m-1)·(m-1)!` is the
//! falling factorial `(n-1)!/(n-m)!`, which is what the builder accumulates.
//! [`a_count_composition`] evaluates the composition sum over rationals as an
//! independent route.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numtheory::{b_multiplicative, b_row};
use crate::records::CountRecord;

type BigRational = Ratio<BigUint>;

/// Rows at or above this size are filled in parallel.
const PARALLEL_ROW: usize = 48;

pub fn factorial(n: usize) -> BigUint {
    (1..=n as u64).fold(BigUint::one(), |acc, i| acc * i)
}

/// `C(n, k)`, zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

#[derive(Clone, Debug)]
struct Layer {
    b: Vec<BigUint>,
    /// `rows[n][k]` for `0 ≤ k ≤ n`.
    rows: Vec<Vec<BigUint>>,
}

impl Layer {
    fn build(p: u32, n_max: usize) -> Result<Self> {
        let b = b_row(p, n_max)?;
        let mut rows: Vec<Vec<BigUint>> = Vec::with_capacity(n_max + 1);
        rows.push(vec![BigUint::one()]);
        for n in 1..=n_max {
            // weights[m] = C(n-1, m-1) · (m-1)! · B(p, m) = (n-1)!/(n-m)! · B(p, m)
            let mut weights = Vec::with_capacity(n + 1);
            weights.push(BigUint::zero());
            let mut falling = BigUint::one();
            for m in 1..=n {
                if m > 1 {
                    falling *= (n - m + 1) as u64;
                }
                weights.push(&falling * &b[m]);
            }
            let entry = |k: usize| -> BigUint {
                if k == 0 {
                    return BigUint::zero();
                }
                let mut acc = BigUint::zero();
                for m in 1..=n - k + 1 {
                    let prev = &rows[n - m][k - 1];
                    if !prev.is_zero() && !weights[m].is_zero() {
                        acc += &weights[m] * prev;
                    }
                }
                acc
            };
            let row: Vec<BigUint> = if n >= PARALLEL_ROW {
                (0..=n).into_par_iter().map(entry).collect()
            } else {
                (0..=n).map(entry).collect()
            };
            rows.push(row);
        }
        Ok(Layer { b, rows })
    }
}

/// Memoized `A(p, n, k)` and `B(p, n)` for a set of `p` values and `n ≤ n_max`.
///
/// Immutable once built.
#[derive(Clone, Debug)]
pub struct CountTable {
    n_max: usize,
    layers: BTreeMap<u32, Layer>,
}

impl CountTable {
    /// Table for `p = 0..=p_max`.
    pub fn build(p_max: u32, n_max: usize) -> Result<Self> {
        Self::build_for((0..=p_max).collect::<Vec<_>>().as_slice(), n_max)
    }

    pub fn build_for(ps: &[u32], n_max: usize) -> Result<Self> {
        let mut layers = BTreeMap::new();
        for &p in ps {
            if let std::collections::btree_map::Entry::Vacant(e) = layers.entry(p) {
                e.insert(Layer::build(p, n_max)?);
            }
        }
        Ok(CountTable { n_max, layers })
    }

    /// Reassembles a table from stored rows, e.g. a cache file.
    ///
    /// `b[p][n]` must cover `1..=n_max` (index 0 ignored) and `rows[p][n]` must
    /// have `n + 1` entries.
    pub fn from_parts(
        n_max: usize,
        parts: BTreeMap<u32, (Vec<BigUint>, Vec<Vec<BigUint>>)>,
    ) -> Result<Self> {
        let mut layers = BTreeMap::new();
        for (p, (b, rows)) in parts {
            if b.len() != n_max + 1 || rows.len() != n_max + 1 {
                return Err(Error::InvalidRange(format!("layer p={} has wrong length", p)));
            }
            if rows.iter().enumerate().any(|(n, row)| row.len() != n + 1) {
                return Err(Error::InvalidRange(format!("layer p={} has a ragged row", p)));
            }
            layers.insert(p, Layer { b, rows });
        }
        Ok(CountTable { n_max, layers })
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn ps(&self) -> impl Iterator<Item = u32> + '_ {
        self.layers.keys().copied()
    }

    pub fn has_p(&self, p: u32) -> bool {
        self.layers.contains_key(&p)
    }

    /// `A(p, n, k)`; `None` only when `(p, n)` lies outside the table.
    /// Out-of-range `k` gives zero.
    pub fn a(&self, p: u32, n: usize, k: usize) -> Option<BigUint> {
        let row = self.row(p, n)?;
        Some(row.get(k).cloned().unwrap_or_default())
    }

    /// `A(p, n, 0..=n)`.
    pub fn row(&self, p: u32, n: usize) -> Option<&[BigUint]> {
        self.layers.get(&p)?.rows.get(n).map(Vec::as_slice)
    }

    /// `B(p, n)` for `1 ≤ n ≤ n_max`.
    pub fn b(&self, p: u32, n: usize) -> Option<&BigUint> {
        if n == 0 {
            return None;
        }
        self.layers.get(&p)?.b.get(n)
    }

    pub fn total(&self, p: u32, n: usize) -> Option<BigUint> {
        Some(self.row(p, n)?.iter().sum())
    }

    /// Every stored `A` value as export records, ordered by `(p, n, k)`.
    pub fn records(&self) -> Vec<CountRecord> {
        let mut out = Vec::new();
        for &p in self.layers.keys() {
            out.extend(self.records_for(p));
        }
        out
    }

    pub fn records_for(&self, p: u32) -> Vec<CountRecord> {
        let mut out = Vec::new();
        if let Some(layer) = self.layers.get(&p) {
            for (n, row) in layer.rows.iter().enumerate() {
                for (k, v) in row.iter().enumerate() {
                    out.push(CountRecord::new(p, n, k, v));
                }
            }
        }
        out
    }
}

/// `A(p, n, 1) = (n-1)! · B(p, n)`.
pub fn a_transitive(p: u32, n: usize) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::NotPositive("n"));
    }
    Ok(factorial(n - 1) * b_multiplicative(p, n as u64)?)
}

/// `A(p, n, k)` from a freshly built single-`p` table.
pub fn a_count(p: u32, n: usize, k: usize) -> Result<BigUint> {
    let table = CountTable::build_for(&[p], n)?;
    Ok(table.a(p, n, k).expect("table covers (p, n)"))
}

/// `Σ_k A(p, n, k)`, the number of commuting `p`-tuples on `n` points.
pub fn total_commuting(p: u32, n: usize) -> Result<BigUint> {
    let table = CountTable::build_for(&[p], n)?;
    Ok(table.total(p, n).expect("table covers (p, n)"))
}

/// `A(p, n, k)` for all `k`, by the composition sum
/// `(n!/k!) Σ_{n_1+…+n_k = n} Π B(p, n_i)/n_i` in exact rationals.
pub fn composition_row(p: u32, n: usize) -> Result<Vec<BigUint>> {
    let weights: Vec<BigRational> = (0..=n)
        .map(|m| {
            if m == 0 {
                Ok(BigRational::zero())
            } else {
                Ok(BigRational::new(b_multiplicative(p, m as u64)?, BigUint::from(m)))
            }
        })
        .collect::<Result<_>>()?;

    // sums[(rest, parts)] = Σ over compositions of `rest` into `parts` parts of Π weights
    fn sums(
        rest: usize,
        parts: usize,
        weights: &[BigRational],
        memo: &mut HashMap<(usize, usize), BigRational>,
    ) -> BigRational {
        if parts == 0 {
            return if rest == 0 { BigRational::one() } else { BigRational::zero() };
        }
        if rest < parts {
            return BigRational::zero();
        }
        if let Some(v) = memo.get(&(rest, parts)) {
            return v.clone();
        }
        let mut acc = BigRational::zero();
        for first in 1..=rest - parts + 1 {
            let tail = sums(rest - first, parts - 1, weights, memo);
            if !tail.is_zero() {
                acc += &weights[first] * tail;
            }
        }
        memo.insert((rest, parts), acc.clone());
        acc
    }

    let mut memo = HashMap::new();
    let n_fact = factorial(n);
    (0..=n)
        .map(|k| {
            let value = BigRational::from_integer(n_fact.clone())
                / BigRational::from_integer(factorial(k))
                * sums(n, k, &weights, &mut memo);
            if !value.is_integer() {
                return Err(Error::NonIntegral {
                    value: value.to_string(),
                    context: format!("composition sum p={} n={} k={}", p, n, k),
                });
            }
            Ok(value.to_integer())
        })
        .collect()
}

pub fn a_count_composition(p: u32, n: usize, k: usize) -> Result<BigUint> {
    if k > n {
        return Ok(BigUint::zero());
    }
    Ok(composition_row(p, n)?.swap_remove(k))
}

/// Unsigned Stirling numbers of the first kind, `c[n][k]` for `n ≤ n_max`.
pub fn stirling_first_triangle(n_max: usize) -> Vec<Vec<BigUint>> {
    let mut rows: Vec<Vec<BigUint>> = vec![vec![BigUint::one()]];
    for n in 1..=n_max {
        let prev = &rows[n - 1];
        let row = (0..=n)
            .map(|k| {
                let mut v = BigUint::zero();
                if k >= 1 {
                    v += &prev[k - 1];
                }
                if k < n {
                    v += &prev[k] * (n as u64 - 1);
                }
                v
            })
            .collect();
        rows.push(row);
    }
    rows
}

pub fn stirling_first_unsigned(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    stirling_first_triangle(n).swap_remove(n).swap_remove(k)
}

/// `Σ_{rs = n} A(p, s, 1) · n!/(r! s!^r) · (r-1)! · s!^{r-1} · s`, which equals
/// `A(p+1, n, 1)`.
pub fn reduction_rhs(p: u32, n: usize) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::NotPositive("n"));
    }
    let n_fact = factorial(n);
    let mut acc = BigUint::zero();
    for s in (1..=n).filter(|s| n.is_multiple_of(*s)) {
        let r = n / s;
        let s_fact = factorial(s);
        let (multinomial, rem) = n_fact.div_rem(&(factorial(r) * s_fact.pow(r as u32)));
        if !rem.is_zero() {
            return Err(Error::NonIntegral {
                value: format!("{}/(r! s!^r)", n_fact),
                context: format!("r={} s={}", r, s),
            });
        }
        acc += a_transitive(p, s)?
            * multinomial
            * factorial(r - 1)
            * s_fact.pow(r as u32 - 1)
            * BigUint::from(s);
    }
    Ok(acc)
}

/// `A(p, n, n-1) = C(n, 2)(2^p - 1)` for `n ≥ 1`.
pub fn a_one_merge(p: u32, n: usize) -> BigUint {
    binomial(n as u64, 2) * (BigUint::from(2u32).pow(p) - 1u32)
}

/// `A(p, n, n-2) = C(n, 3)(3^p - 1) + 3 C(n, 4)(2^p - 1)^2` for `n ≥ 2`.
pub fn a_two_merges(p: u32, n: usize) -> BigUint {
    let two = BigUint::from(2u32).pow(p) - 1u32;
    let three = BigUint::from(3u32).pow(p) - 1u32;
    binomial(n as u64, 3) * three + binomial(n as u64, 4) * 3u32 * &two * &two
}
