//! Exact polynomials, integer partitions, and truncated power series in `u`
//! with polynomial coefficients in `x`.
//!
//! The generating function of the counts is
//! `Σ_{n,k} A(p,n,k)/n! x^k u^n = exp(x Σ_m B(p,m)/m u^m) = Π_m (1 - u^m)^{-x B(p-1,m)}`.
//! Its `u^n` coefficient is computed here by the recurrence
//! `n P_n = x Σ_{m=1}^n B(p,m) P_{n-m}` (from `F' = x G' F`), and separately by
//! expanding the product side with binomial series.

use std::fmt;
use std::ops::{Add, Mul};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::check::CheckReport;
use crate::counting::{factorial, CountTable};
use crate::error::{Error, Result};
use crate::numtheory::b_row;

/// Polynomial in `x` with exact rational coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatPolynomial {
    coeffs: Vec<BigRational>,
}

impl RatPolynomial {
    pub fn from_coeffs(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        RatPolynomial { coeffs }
    }

    pub fn from_integers<T: Into<BigInt>>(coeffs: impl IntoIterator<Item = T>) -> Self {
        Self::from_coeffs(
            coeffs
                .into_iter()
                .map(|c| BigRational::from_integer(c.into()))
                .collect(),
        )
    }

    pub fn zero() -> Self {
        RatPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// `c·x + d`.
    pub fn linear(c: BigRational, d: BigRational) -> Self {
        Self::from_coeffs(vec![d, c])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Coefficient of `x^i`, zero beyond the degree.
    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Multiplies by `x`.
    pub fn shift_degree(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(BigRational::zero());
        coeffs.extend(self.coeffs.iter().cloned());
        RatPolynomial { coeffs }
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    /// `q(x) = self(x + c)`, by Horner's scheme.
    pub fn translate(&self, c: &BigRational) -> Self {
        let step = RatPolynomial::linear(BigRational::one(), c.clone());
        self.coeffs
            .iter()
            .rev()
            .fold(RatPolynomial::zero(), |acc, a| &(&acc * &step) + &RatPolynomial::constant(a.clone()))
    }

    /// Drops every term of degree above `max_degree`.
    pub fn truncate(&self, max_degree: usize) -> Self {
        Self::from_coeffs(self.coeffs.iter().take(max_degree + 1).cloned().collect())
    }

    /// Coefficients of `factor · self`, failing if any is not an integer.
    pub fn scaled_integers(&self, factor: &BigInt) -> Result<Vec<BigInt>> {
        let f = BigRational::from_integer(factor.clone());
        self.coeffs
            .iter()
            .map(|c| {
                let v = c * &f;
                if v.is_integer() {
                    Ok(v.to_integer())
                } else {
                    Err(Error::NonIntegral {
                        value: v.to_string(),
                        context: format!("scaling polynomial by {}", factor),
                    })
                }
            })
            .collect()
    }

    pub fn to_json(&self, n: usize) -> PolynomialJson {
        PolynomialJson {
            n,
            coeffs: self
                .coeffs
                .iter()
                .map(|c| format!("{}/{}", c.numer(), c.denom()))
                .collect(),
        }
    }
}

impl Add for &RatPolynomial {
    type Output = RatPolynomial;

    fn add(self, rhs: &RatPolynomial) -> RatPolynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        RatPolynomial::from_coeffs((0..len).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Mul for &RatPolynomial {
    type Output = RatPolynomial;

    fn mul(self, rhs: &RatPolynomial) -> RatPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return RatPolynomial::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        RatPolynomial::from_coeffs(out)
    }
}

impl fmt::Display for RatPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {} ", sign)?;
            }
            first = false;
            let abs = c.abs();
            match i {
                0 => write!(f, "{}", abs)?,
                _ => {
                    if !abs.is_one() {
                        write!(f, "{} ", abs)?;
                    }
                    if i == 1 {
                        f.write_str("x")?;
                    } else {
                        write!(f, "x^{}", i)?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// `{"n": 2, "coeffs": ["0/1", "3/2", "1/2"]}`, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PolynomialJson {
    pub n: usize,
    pub coeffs: Vec<String>,
}

/// An integer partition, parts weakly decreasing.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartitionDiagram {
    parts: Vec<usize>,
}

impl PartitionDiagram {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) || parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidRange(format!("{:?} is not a partition", parts)));
        }
        Ok(PartitionDiagram { parts })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn conjugate(&self) -> PartitionDiagram {
        let width = self.parts.first().copied().unwrap_or(0);
        let parts = (0..width)
            .map(|j| self.parts.iter().take_while(|&&len| len > j).count())
            .collect();
        PartitionDiagram { parts }
    }

    /// `hooks[i][j]` for the cell in row `i`, column `j`: arm + leg + 1.
    pub fn hook_lengths(&self) -> Vec<Vec<usize>> {
        let cols = self.conjugate();
        self.parts
            .iter()
            .enumerate()
            .map(|(i, &len)| (0..len).map(|j| (len - j - 1) + (cols.parts[j] - i - 1) + 1).collect())
            .collect()
    }
}

/// All partitions of `n` in reverse lexicographic order, starting from `(n)`.
pub fn partitions(n: usize) -> Partitions {
    Partitions {
        next: Some(if n == 0 { Vec::new() } else { vec![n] }),
    }
}

pub struct Partitions {
    next: Option<Vec<usize>>,
}

impl Iterator for Partitions {
    type Item = PartitionDiagram;

    fn next(&mut self) -> Option<PartitionDiagram> {
        let current = self.next.take()?;
        // Successor: lower the last part above 1 and refill greedily.
        if let Some(pos) = current.iter().rposition(|&x| x > 1) {
            let mut succ = current[..pos].to_vec();
            let cap = current[pos] - 1;
            // the unit taken off `current[pos]` plus the trailing ones
            let mut rest = current.len() - pos;
            succ.push(cap);
            while rest > 0 {
                let part = rest.min(cap);
                succ.push(part);
                rest -= part;
            }
            self.next = Some(succ);
        }
        Some(PartitionDiagram { parts: current })
    }
}

/// Number of partitions of `0..=n_max` by Euler's pentagonal recurrence.
pub fn partition_counts(n_max: usize) -> Vec<BigUint> {
    let mut counts: Vec<BigInt> = vec![BigInt::one()];
    for n in 1..=n_max {
        let mut acc = BigInt::zero();
        for k in 1.. {
            let g1 = k * (3 * k - 1) / 2;
            if g1 > n {
                break;
            }
            let g2 = k * (3 * k + 1) / 2;
            let mut term = counts[n - g1].clone();
            if g2 <= n {
                term += &counts[n - g2];
            }
            if k % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        counts.push(acc);
    }
    counts
        .into_iter()
        .map(|c| c.to_biguint().expect("partition counts are nonnegative"))
        .collect()
}

pub fn partition_count(n: usize) -> BigUint {
    partition_counts(n).swap_remove(n)
}

/// `P_0, …, P_{n_max}` for a given `p`, where `P_n` is the `u^n` coefficient of
/// `exp(x Σ_m B(p,m)/m u^m)`.
pub fn darcais_polys(p: u32, n_max: usize) -> Result<Vec<RatPolynomial>> {
    let b = b_row(p, n_max)?;
    let mut polys = vec![RatPolynomial::one()];
    for n in 1..=n_max {
        let mut acc = RatPolynomial::zero();
        for m in 1..=n {
            if b[m].is_zero() {
                continue;
            }
            let weight = BigRational::from_integer(BigInt::from(b[m].clone()));
            acc = &acc + &polys[n - m].scale(&weight);
        }
        let inv_n = BigRational::new(BigInt::one(), BigInt::from(n));
        polys.push(acc.shift_degree().scale(&inv_n));
    }
    Ok(polys)
}

pub fn darcais_poly(p: u32, n: usize) -> Result<RatPolynomial> {
    Ok(darcais_polys(p, n)?.swap_remove(n))
}

/// `n! · P_n` as integers, in increasing powers of `x`.
pub fn darcais_scaled(p: u32, n: usize) -> Result<Vec<BigInt>> {
    darcais_poly(p, n)?.scaled_integers(&BigInt::from(factorial(n)))
}

/// `Q_n(x) = Σ_{λ ⊢ n} Π_{cells} (1 + x/h²)`.
pub fn nekrasov_okounkov_poly(n: usize) -> RatPolynomial {
    let mut total = RatPolynomial::zero();
    for lambda in partitions(n) {
        // Π (1 + x/h²) = Π (h² + x) / Π h², expanded over the integers first.
        let mut numer: Vec<BigInt> = vec![BigInt::one()];
        let mut denom = BigInt::one();
        for h in lambda.hook_lengths().into_iter().flatten() {
            let h2 = BigInt::from(h * h);
            let mut next = vec![BigInt::zero(); numer.len() + 1];
            for (i, c) in numer.iter().enumerate() {
                next[i] += c * &h2;
                next[i + 1] += c;
            }
            numer = next;
            denom *= h2;
        }
        let term = RatPolynomial::from_coeffs(
            numer
                .into_iter()
                .map(|c| BigRational::new(c, denom.clone()))
                .collect(),
        );
        total = &total + &term;
    }
    total
}

/// Power series in `u` truncated after `u^order`, coefficients in `Q[x]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesTruncation {
    order: usize,
    coeffs: Vec<RatPolynomial>,
}

impl SeriesTruncation {
    pub fn one(order: usize) -> Self {
        let mut coeffs = vec![RatPolynomial::zero(); order + 1];
        coeffs[0] = RatPolynomial::one();
        SeriesTruncation { order, coeffs }
    }

    pub fn from_coeffs(mut coeffs: Vec<RatPolynomial>, order: usize) -> Self {
        coeffs.resize(order + 1, RatPolynomial::zero());
        SeriesTruncation { order, coeffs }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeff(&self, n: usize) -> &RatPolynomial {
        &self.coeffs[n]
    }

    pub fn mul(&self, other: &SeriesTruncation) -> SeriesTruncation {
        let order = self.order.min(other.order);
        let mut out = vec![RatPolynomial::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(order + 1 - i) {
                if !b.is_zero() {
                    out[i + j] = &out[i + j] + &(a * b);
                }
            }
        }
        SeriesTruncation { order, coeffs: out }
    }

    /// `(1 - u^m)^{-c x}` to the given order: the `u^{mj}` coefficient is
    /// `Π_{i<j} (c x + i) / j!`.
    pub fn binomial_factor(m: usize, c: &BigUint, order: usize) -> SeriesTruncation {
        let mut coeffs = vec![RatPolynomial::zero(); order + 1];
        let cx = BigRational::from_integer(BigInt::from(c.clone()));
        let mut term = RatPolynomial::one();
        let mut j = 0usize;
        while m * j <= order {
            coeffs[m * j] = term.clone();
            j += 1;
            let step = RatPolynomial::linear(cx.clone(), BigRational::from_integer(BigInt::from(j - 1)));
            term = (&term * &step).scale(&BigRational::new(BigInt::one(), BigInt::from(j)));
        }
        SeriesTruncation { order, coeffs }
    }
}

/// `Π_{m=1}^{order} (1 - u^m)^{-x B(p-1, m)}` truncated at `u^order`.
pub fn bryan_fulman_product(p: u32, order: usize) -> Result<SeriesTruncation> {
    if p == 0 {
        return Err(Error::NotPositive("p"));
    }
    let exponents = b_row(p - 1, order)?;
    let mut acc = SeriesTruncation::one(order);
    for (m, c) in exponents.iter().enumerate().skip(1) {
        if c.is_zero() {
            continue;
        }
        acc = acc.mul(&SeriesTruncation::binomial_factor(m, c, order));
    }
    Ok(acc)
}

/// Compares the product side with `Σ_{n,k} A(p,n,k)/n! x^k u^n` from a count
/// table, coefficient by coefficient up to `u^order`.
pub fn verify_bryan_fulman(p: u32, order: usize) -> Result<CheckReport> {
    if order == 0 {
        return Err(Error::NotPositive("order"));
    }
    let product = bryan_fulman_product(p, order)?;
    let table = CountTable::build_for(&[p], order)?;
    let mut report = CheckReport::new(format!("product identity p={} order={}", p, order));
    for n in 0..=order {
        let n_fact = BigInt::from(factorial(n));
        let row = table.row(p, n).expect("table covers order");
        let lhs = product.coeff(n);
        let top = lhs.degree().unwrap_or(0).max(n);
        for k in 0..=top {
            let rhs = BigRational::new(BigInt::from(row.get(k).cloned().unwrap_or_default()), n_fact.clone());
            report.compare(|| format!("n={} k={}", n, k), &lhs.coeff(k), &rhs);
        }
    }
    Ok(report)
}

/// Checks `Q_n(x) = P_n(x + 1)` with `p = 2` for every `n ≤ n_max`.
pub fn shift_check(n_max: usize) -> Result<CheckReport> {
    let polys = darcais_polys(2, n_max)?;
    let one = BigRational::one();
    let mut report = CheckReport::new(format!("hook-length shift n<={}", n_max));
    for (n, pn) in polys.iter().enumerate() {
        let shifted = pn.translate(&one);
        report.compare(|| format!("n={}", n), &nekrasov_okounkov_poly(n), &shifted);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn poly(c: &[(i64, i64)]) -> RatPolynomial {
        RatPolynomial::from_coeffs(c.iter().map(|&(n, d)| rat(n, d)).collect())
    }

    #[test]
    fn partitions_examples() {
        let zero: Vec<_> = partitions(0).collect();
        assert_eq!(zero, vec![PartitionDiagram::new(vec![]).unwrap()]);
        let four: Vec<Vec<usize>> = partitions(4).map(|l| l.parts().to_vec()).collect();
        assert_eq!(four, vec![vec![4], vec![3, 1], vec![2, 2], vec![2, 1, 1], vec![1, 1, 1, 1]]);
        assert_eq!(partitions(10).count(), 42);
    }

    #[test]
    fn partitions_agree_with_euler_counts() {
        let counts = partition_counts(30);
        for n in 0..=30 {
            let all: Vec<_> = partitions(n).collect();
            assert_eq!(BigUint::from(all.len()), counts[n]);
            assert!(all.iter().all(|l| l.size() == n));
            // strictly decreasing in lexicographic order, hence distinct
            assert!(all.windows(2).all(|w| w[0].parts() > w[1].parts()));
        }
        assert_eq!(partition_count(100).to_string(), "190569292");
    }

    #[test]
    fn hook_examples() {
        let one = PartitionDiagram::new(vec![1]).unwrap();
        assert_eq!(one.hook_lengths(), vec![vec![1]]);
        let two_one = PartitionDiagram::new(vec![2, 1]).unwrap();
        assert_eq!(two_one.hook_lengths(), vec![vec![3, 1], vec![1]]);
        let row = PartitionDiagram::new(vec![5]).unwrap();
        assert_eq!(row.hook_lengths(), vec![vec![5, 4, 3, 2, 1]]);
        assert!(PartitionDiagram::new(vec![1, 2]).is_err());
        assert!(PartitionDiagram::new(vec![2, 0]).is_err());
    }

    #[test]
    fn hook_length_formula_counts_tableaux() {
        // Σ_λ (n!/Π h)² = n!
        for n in 0..=9 {
            let mut total = BigUint::zero();
            for lambda in partitions(n) {
                let prod: BigUint = lambda.hook_lengths().into_iter().flatten().map(BigUint::from).product();
                let f = factorial(n) / prod;
                total += &f * &f;
            }
            assert_eq!(total, factorial(n));
        }
    }

    #[test]
    fn darcais_examples() {
        for p in 1..4 {
            assert_eq!(darcais_poly(p, 0).unwrap(), RatPolynomial::one());
        }
        assert_eq!(darcais_poly(2, 2).unwrap(), poly(&[(0, 1), (3, 2), (1, 2)]));
        assert_eq!(darcais_poly(2, 3).unwrap(), poly(&[(0, 1), (8, 6), (9, 6), (1, 6)]));
        assert_eq!(
            darcais_scaled(2, 3).unwrap(),
            vec![BigInt::from(0), BigInt::from(8), BigInt::from(9), BigInt::from(1)]
        );
    }

    #[test]
    fn darcais_matches_counts_and_totals() {
        let table = CountTable::build(4, 12).unwrap();
        for p in 1..=4 {
            let polys = darcais_polys(p, 12).unwrap();
            for (n, pn) in polys.iter().enumerate() {
                let scaled = pn.scaled_integers(&BigInt::from(factorial(n))).unwrap();
                let row: Vec<BigInt> = table.row(p, n).unwrap().iter().cloned().map(BigInt::from).collect();
                assert_eq!(scaled, row);
                let at_one = pn.eval(&BigRational::one()) * BigRational::from_integer(BigInt::from(factorial(n)));
                assert_eq!(at_one.to_integer(), BigInt::from(table.total(p, n).unwrap()));
            }
        }
    }

    #[test]
    fn nekrasov_examples() {
        assert_eq!(nekrasov_okounkov_poly(0), RatPolynomial::one());
        assert_eq!(nekrasov_okounkov_poly(1), poly(&[(1, 1), (1, 1)]));
        assert_eq!(nekrasov_okounkov_poly(2), poly(&[(4, 2), (5, 2), (1, 2)]));
        for n in 0..=15 {
            let at_zero = nekrasov_okounkov_poly(n).eval(&BigRational::zero());
            assert_eq!(at_zero, BigRational::from_integer(BigInt::from(partition_count(n))));
        }
    }

    #[test]
    fn translate_and_display() {
        let p = poly(&[(0, 1), (3, 2), (1, 2)]);
        assert_eq!(p.translate(&BigRational::one()), poly(&[(2, 1), (5, 2), (1, 2)]));
        assert_eq!(p.to_string(), "3/2 x + 1/2 x^2");
        assert_eq!(poly(&[(-1, 1), (0, 1), (1, 1)]).to_string(), "-1 + x^2");
        assert_eq!(RatPolynomial::zero().to_string(), "0");
        assert_eq!(p.to_json(2).coeffs, vec!["0/1", "3/2", "1/2"]);
    }

    #[test]
    fn non_integral_scaling_is_reported() {
        let p = poly(&[(1, 3)]);
        assert!(p.scaled_integers(&BigInt::from(2)).is_err());
        assert_eq!(p.scaled_integers(&BigInt::from(3)).unwrap(), vec![BigInt::one()]);
    }

    #[test]
    fn binomial_factor_at_c_one_is_rising_factorial() {
        // (1-u)^{-x}: coefficient of u^j is x(x+1)…(x+j-1)/j!
        let s = SeriesTruncation::binomial_factor(1, &BigUint::one(), 4);
        assert_eq!(s.coeff(2), &poly(&[(0, 1), (1, 2), (1, 2)]));
        assert_eq!(s.coeff(3), &poly(&[(0, 1), (2, 6), (3, 6), (1, 6)]));
        let t = SeriesTruncation::binomial_factor(2, &BigUint::one(), 4);
        assert!(t.coeff(1).is_zero());
        assert_eq!(t.coeff(2), &poly(&[(0, 1), (1, 1)]));
    }

    #[test]
    fn product_identity_small_orders() {
        for p in 1..=3 {
            let report = verify_bryan_fulman(p, 10).unwrap();
            assert!(report.passed(), "{}", report);
        }
        assert!(verify_bryan_fulman(0, 5).is_err());
        assert!(verify_bryan_fulman(2, 0).is_err());
    }

    #[test]
    fn shift_examples() {
        assert!(shift_check(1).unwrap().passed());
        assert!(shift_check(10).unwrap().passed());
    }
}
