//! Factorization, Gaussian binomials, and three routes to `B(p, n)`.
//!
//! `B(p, ·)` is multiplicative with `B(p, q^m) = [m+p-1 choose m]_q` at a prime
//! `q`. The same value is a weighted count of divisor chains
//! `s_1 | s_2 | … | s_{p-1} | n` (weight `s_1⋯s_{p-1}`) and a multiple Dirichlet
//! convolution of power functions. All three are implemented independently;
//! the chain sum is treated as the reference.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type BigCount = BigUint;

/// Prime factorization as `(prime, multiplicity)` pairs with increasing primes.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Factorization(Vec<(u64, u32)>);

impl Factorization {
    pub fn pairs(&self) -> &[(u64, u32)] {
        &self.0
    }

    pub fn value(&self) -> u64 {
        self.0.iter().map(|&(q, m)| q.pow(m)).product()
    }

    /// All divisors, sorted.
    pub fn divisors(&self) -> Vec<u64> {
        let mut divs = vec![1u64];
        for &(q, m) in &self.0 {
            let len = divs.len();
            let mut pk = 1;
            for _ in 0..m {
                pk *= q;
                for i in 0..len {
                    divs.push(divs[i] * pk);
                }
            }
        }
        divs.sort_unstable();
        divs
    }
}

pub fn factorize(n: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::NotPositive("n"));
    }
    let mut pairs = Vec::new();
    let mut rest = n;
    let mut d = 2u64;
    while d * d <= rest {
        if rest.is_multiple_of(d) {
            let mut m = 0;
            while rest.is_multiple_of(d) {
                rest /= d;
                m += 1;
            }
            pairs.push((d, m));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        pairs.push((rest, 1));
    }
    Ok(Factorization(pairs))
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n).map(|f| f.0 == [(n, 1)]).unwrap_or(false)
}

/// Sorted divisors of `n` by trial division.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// The Gaussian binomial `[a choose b]_q` evaluated at an integer `q ≥ 2`.
///
/// Uses `[a-b+i choose i]_q = [a-b+i-1 choose i-1]_q · (q^{a-b+i} - 1) / (q^i - 1)`,
/// so every intermediate quotient is itself a Gaussian binomial and each
/// division is exact.
pub fn q_binomial(a: u64, b: u64, q: u64) -> Result<BigCount> {
    if b > a {
        return Err(Error::InvalidRange(format!("q_binomial: {} > {}", b, a)));
    }
    if q < 2 {
        return Err(Error::InvalidRange(format!("q_binomial: q = {} < 2", q)));
    }
    let q_big = BigUint::from(q);
    let b = b.min(a - b);
    let offset = a - b;
    let mut result = BigUint::one();
    for i in 1..=b {
        let num = q_big.pow(to_u32(offset + i)?) - 1u32;
        let den = q_big.pow(to_u32(i)?) - 1u32;
        let (quot, rem) = (result * num).div_rem(&den);
        debug_assert!(rem.is_zero());
        result = quot;
    }
    Ok(result)
}

fn to_u32(x: u64) -> Result<u32> {
    u32::try_from(x).map_err(|_| Error::InvalidRange(format!("exponent {} too large", x)))
}

/// `B(p, q^m)` for a prime `q`. For `p = 0` this is `[m = 0]`.
pub fn b_prime_power(p: u32, q: u64, m: u32) -> Result<BigCount> {
    if !is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    if m == 0 {
        return Ok(BigUint::one());
    }
    if p == 0 {
        return Ok(BigUint::zero());
    }
    q_binomial(u64::from(m) + u64::from(p) - 1, u64::from(m), q)
}

/// `B(p, n)` as the product of prime-power values over the factorization of `n`.
pub fn b_multiplicative(p: u32, n: u64) -> Result<BigCount> {
    let f = factorize(n)?;
    let mut acc = BigUint::one();
    for &(q, m) in f.pairs() {
        acc *= b_prime_power(p, q, m)?;
    }
    Ok(acc)
}

/// `B(p, n)` as the sum over divisor chains `s_1 | … | s_{p-1} | n` of `s_1⋯s_{p-1}`.
pub fn b_flag_sum(p: u32, n: u64) -> Result<BigCount> {
    if n == 0 {
        return Err(Error::NotPositive("n"));
    }
    if p == 0 {
        return Ok(if n == 1 { BigUint::one() } else { BigUint::zero() });
    }
    // chains(len, top) = Σ over s_1 | … | s_len | top of s_1⋯s_len
    fn chains(len: u32, top: u64, memo: &mut HashMap<(u32, u64), BigUint>) -> BigUint {
        if len == 0 {
            return BigUint::one();
        }
        if let Some(v) = memo.get(&(len, top)) {
            return v.clone();
        }
        let mut acc = BigUint::zero();
        for s in divisors(top) {
            acc += chains(len - 1, s, memo) * s;
        }
        memo.insert((len, top), acc.clone());
        acc
    }
    Ok(chains(p - 1, n, &mut HashMap::new()))
}

/// `B(p, n)` as `Σ_{d_1⋯d_p = n} d_1^{p-1} d_2^{p-2} ⋯ d_{p-1}`.
pub fn b_dirichlet(p: u32, n: u64) -> Result<BigCount> {
    if n == 0 {
        return Err(Error::NotPositive("n"));
    }
    if p == 0 {
        return Ok(if n == 1 { BigUint::one() } else { BigUint::zero() });
    }
    // convolve(k, m) = Σ_{d_1⋯d_k = m} d_1^{k-1} ⋯ d_{k-1}^1 d_k^0
    fn convolve(k: u32, m: u64, memo: &mut HashMap<(u32, u64), BigUint>) -> BigUint {
        if k == 1 {
            return BigUint::one();
        }
        if let Some(v) = memo.get(&(k, m)) {
            return v.clone();
        }
        let mut acc = BigUint::zero();
        for d in divisors(m) {
            acc += BigUint::from(d).pow(k - 1) * convolve(k - 1, m / d, memo);
        }
        memo.insert((k, m), acc.clone());
        acc
    }
    Ok(convolve(p, n, &mut HashMap::new()))
}

/// `σ(n)`, the sum of the divisors of `n`.
pub fn divisor_sum(n: u64) -> Result<BigCount> {
    if n == 0 {
        return Err(Error::NotPositive("n"));
    }
    Ok(divisors(n).into_iter().map(BigUint::from).sum())
}

/// Which formula to evaluate `B(p, n)` with.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum BMethod {
    #[default]
    Multiplicative,
    Flag,
    Dirichlet,
}

impl BMethod {
    pub fn eval(self, p: u32, n: u64) -> Result<BigCount> {
        match self {
            BMethod::Multiplicative => b_multiplicative(p, n),
            BMethod::Flag => b_flag_sum(p, n),
            BMethod::Dirichlet => b_dirichlet(p, n),
        }
    }
}

impl std::str::FromStr for BMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "multiplicative" => Ok(BMethod::Multiplicative),
            "flag" => Ok(BMethod::Flag),
            "dirichlet" => Ok(BMethod::Dirichlet),
            other => Err(Error::Parse(format!("unknown B method {:?}", other))),
        }
    }
}

/// `B(p, 1..=n_max)` via the multiplicative route; index 0 is unused and zero.
pub fn b_row(p: u32, n_max: usize) -> Result<Vec<BigCount>> {
    let mut row = vec![BigUint::zero(); n_max + 1];
    for (n, slot) in row.iter_mut().enumerate().skip(1) {
        *slot = b_multiplicative(p, n as u64)?;
    }
    Ok(row)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(x: u64) -> BigUint {
        BigUint::from(x)
    }

    #[test]
    fn factorize_examples() {
        assert!(factorize(1).unwrap().pairs().is_empty());
        assert_eq!(factorize(12).unwrap().pairs(), &[(2, 2), (3, 1)]);
        assert_eq!(factorize(97).unwrap().pairs(), &[(97, 1)]);
        assert_eq!(factorize(0), Err(Error::NotPositive("n")));
        assert_eq!(factorize(360).unwrap().value(), 360);
        assert_eq!(factorize(12).unwrap().divisors(), vec![1, 2, 3, 4, 6, 12]);
    }

    #[test]
    fn factorization_pieces_are_prime() {
        for n in 1..3000u64 {
            let f = factorize(n).unwrap();
            assert_eq!(f.value(), n);
            assert!(f.pairs().windows(2).all(|w| w[0].0 < w[1].0));
            for &(q, m) in f.pairs() {
                assert!(m >= 1);
                assert!((2..q).take_while(|d| d * d <= q).all(|d| q % d != 0));
            }
            assert_eq!(f.divisors(), divisors(n));
        }
    }

    #[test]
    fn q_binomial_examples() {
        for q in 2..6 {
            for m in 0..6 {
                assert_eq!(q_binomial(m, 0, q).unwrap(), big(1));
            }
        }
        assert_eq!(q_binomial(2, 1, 2).unwrap(), big(3));
        assert_eq!(q_binomial(4, 2, 2).unwrap(), big(35));
        assert!(q_binomial(2, 3, 2).is_err());
    }

    /// Oracle: coefficient sum of the Gaussian polynomial built by the q-Pascal
    /// rule, evaluated at q.
    fn q_binomial_by_pascal(a: usize, b: usize, q: u64) -> BigUint {
        // poly[a][b] coefficients in q
        let mut table: Vec<Vec<Vec<u64>>> = vec![vec![vec![]; a + 1]; a + 1];
        for i in 0..=a {
            table[i][0] = vec![1];
            table[i][i] = vec![1];
            for j in 1..i {
                // [i, j] = [i-1, j-1] + q^j [i-1, j]
                let mut c = table[i - 1][j - 1].clone();
                let shifted = &table[i - 1][j];
                if c.len() < shifted.len() + j {
                    c.resize(shifted.len() + j, 0);
                }
                for (e, &v) in shifted.iter().enumerate() {
                    c[e + j] += v;
                }
                table[i][j] = c;
            }
        }
        table[a][b]
            .iter()
            .enumerate()
            .map(|(e, &c)| BigUint::from(c) * BigUint::from(q).pow(e as u32))
            .sum()
    }

    #[test]
    fn q_binomial_matches_pascal_oracle() {
        for a in 0..12 {
            for b in 0..=a {
                for q in [2u64, 3, 5, 7] {
                    assert_eq!(
                        q_binomial(a as u64, b as u64, q).unwrap(),
                        q_binomial_by_pascal(a, b, q),
                        "[{} {}]_{}",
                        a,
                        b,
                        q
                    );
                }
            }
        }
    }

    #[test]
    fn b_prime_power_examples() {
        for p in 0..5 {
            assert_eq!(b_prime_power(p, 3, 0).unwrap(), big(1));
        }
        assert_eq!(b_prime_power(2, 2, 2).unwrap(), big(7));
        assert_eq!(b_prime_power(3, 2, 2).unwrap(), big(35));
        assert_eq!(b_prime_power(0, 2, 3).unwrap(), big(0));
        assert_eq!(b_prime_power(2, 4, 1), Err(Error::NotPrime(4)));
    }

    #[test]
    fn b_examples() {
        for n in 1..200 {
            assert_eq!(b_multiplicative(1, n).unwrap(), big(1));
            assert_eq!(b_flag_sum(1, n).unwrap(), big(1));
            assert_eq!(b_dirichlet(1, n).unwrap(), big(1));
        }
        assert_eq!(b_multiplicative(2, 6).unwrap(), big(12));
        assert_eq!(b_multiplicative(3, 3).unwrap(), big(13));
        assert_eq!(b_flag_sum(2, 4).unwrap(), big(7));
        assert_eq!(b_flag_sum(3, 4).unwrap(), big(35));
        assert_eq!(b_dirichlet(2, 6).unwrap(), big(12));
        assert_eq!(b_dirichlet(3, 4).unwrap(), big(35));
        assert_eq!(b_flag_sum(1, 9).unwrap(), big(1));
    }

    #[test]
    fn b_at_p_zero_is_indicator_of_one() {
        for n in 1..50 {
            let expected = big(u64::from(n == 1));
            assert_eq!(b_multiplicative(0, n).unwrap(), expected);
            assert_eq!(b_flag_sum(0, n).unwrap(), expected);
            assert_eq!(b_dirichlet(0, n).unwrap(), expected);
        }
    }

    #[test]
    fn divisor_sum_examples() {
        assert_eq!(divisor_sum(1).unwrap(), big(1));
        assert_eq!(divisor_sum(6).unwrap(), big(12));
        assert_eq!(divisor_sum(97).unwrap(), big(98));
        assert!(divisor_sum(0).is_err());
    }

    #[test]
    fn routes_agree_on_small_range() {
        for p in 1..=6 {
            for n in 1..=300 {
                let m = b_multiplicative(p, n).unwrap();
                assert_eq!(m, b_flag_sum(p, n).unwrap(), "flag p={} n={}", p, n);
                assert_eq!(m, b_dirichlet(p, n).unwrap(), "dirichlet p={} n={}", p, n);
            }
        }
    }

    #[test]
    fn flag_sum_is_multiplicative() {
        fn gcd(a: u64, b: u64) -> u64 {
            if b == 0 {
                a
            } else {
                gcd(b, a % b)
            }
        }
        for p in 1..=4 {
            for a in 1..=60u64 {
                for b in (1..=60u64).filter(|&b| gcd(a, b) == 1) {
                    assert_eq!(
                        b_flag_sum(p, a * b).unwrap(),
                        b_flag_sum(p, a).unwrap() * b_flag_sum(p, b).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn monotone_in_p() {
        for n in 1..=200 {
            for p in 1..6 {
                let lo = b_multiplicative(p, n).unwrap();
                let hi = b_multiplicative(p + 1, n).unwrap();
                if n > 1 {
                    assert!(lo < hi);
                } else {
                    assert_eq!(lo, hi);
                }
            }
        }
    }

    #[test]
    fn method_parsing() {
        assert_eq!("flag".parse::<BMethod>().unwrap(), BMethod::Flag);
        assert!("nope".parse::<BMethod>().is_err());
        assert_eq!(BMethod::Dirichlet.eval(3, 4).unwrap(), big(35));
    }
}
