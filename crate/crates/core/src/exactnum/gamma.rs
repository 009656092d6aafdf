//! Factorials, binomials and half-integer gamma values.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::ExactScalar;
use crate::error::{invalid, Result};

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// n!! with (−1)!! = 0!! = 1.
pub fn double_factorial(n: i64) -> BigInt {
    let mut acc = BigInt::one();
    let mut k = n;
    while k > 1 {
        acc *= k;
        k -= 2;
    }
    acc
}

/// C(n, k) for 0 ≤ k; zero when k > n.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Generalized binomial m(m−1)…(m−j+1)/j! for any integer m.
pub fn generalized_binomial(m: i64, j: u64) -> BigInt {
    let mut num = BigInt::one();
    for i in 0..j as i64 {
        num *= m - i;
    }
    let (q, r) = num.div_rem(&factorial(j));
    debug_assert!(r.is_zero());
    q
}

/// Γ(two_x / 2), exact.
pub fn gamma_half(two_x: u32) -> Result<ExactScalar> {
    if two_x == 0 {
        return Err(invalid("gamma_half needs two_x >= 1 (pole at 0)"));
    }
    if two_x.is_multiple_of(2) {
        let v = factorial(u64::from(two_x / 2 - 1));
        return Ok(ExactScalar::from_rational(BigRational::from_integer(v)));
    }
    // Γ(m + 1/2) = (2m)! / (4^m m!) · √π
    let m = u64::from((two_x - 1) / 2);
    let num = factorial(2 * m);
    let den = (BigInt::one() << (2 * m)) * factorial(m);
    Ok(ExactScalar::with_sqrt_pi(BigRational::new(num, den), 1))
}

/// Γ(two_x / 2) for any two_x that is not a non-positive even integer.
/// Negative half-integers follow from the reflection of the recurrence.
pub fn gamma_half_signed(two_x: i64) -> Result<ExactScalar> {
    if two_x > 0 {
        return gamma_half(two_x as u32);
    }
    if two_x % 2 == 0 {
        return Err(invalid(format!("gamma pole at {}", two_x / 2)));
    }
    // Γ(x) = Γ(x + k) / (x (x+1) … (x+k−1)) with x + k = 1/2.
    let mut g = gamma_half(1)?;
    let mut t = two_x;
    while t < 1 {
        g = g / ExactScalar::from_rational(BigRational::new(t.into(), 2.into()));
        t += 2;
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn gamma_half_examples() {
        assert_eq!(gamma_half(2).unwrap(), ExactScalar::from_rational(q(1, 1)));
        assert_eq!(gamma_half(3).unwrap(), ExactScalar::with_sqrt_pi(q(1, 2), 1));
        assert_eq!(gamma_half(7).unwrap(), ExactScalar::with_sqrt_pi(q(15, 8), 1));
        assert!(gamma_half(0).is_err());
    }

    #[test]
    fn gamma_half_recurrence() {
        for two_x in 1..60u32 {
            let lhs = gamma_half(two_x + 2).unwrap();
            let rhs = gamma_half(two_x).unwrap()
                * ExactScalar::from_rational(q(i64::from(two_x), 2));
            assert_eq!(lhs, rhs, "two_x = {two_x}");
        }
    }

    #[test]
    fn negative_half_integers() {
        // Γ(−1/2) = −2√π, Γ(−3/2) = 4√π/3
        assert_eq!(gamma_half_signed(-1).unwrap(), ExactScalar::with_sqrt_pi(q(-2, 1), 1));
        assert_eq!(gamma_half_signed(-3).unwrap(), ExactScalar::with_sqrt_pi(q(4, 3), 1));
        assert!(gamma_half_signed(-2).is_err());
    }

    #[test]
    fn combinatorics() {
        assert_eq!(double_factorial(7), BigInt::from(105));
        assert_eq!(double_factorial(-1), BigInt::from(1));
        assert_eq!(binomial(10, 3), BigInt::from(120));
        assert_eq!(binomial(3, 5), BigInt::from(0));
        assert_eq!(generalized_binomial(-1, 3), BigInt::from(-1));
        assert_eq!(generalized_binomial(5, 2), BigInt::from(10));
        assert_eq!(generalized_binomial(2, 4), BigInt::from(0));
    }
}
