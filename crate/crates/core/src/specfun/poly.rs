//! Hermite and Laguerre polynomials and the terminating hypergeometric sums.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::compensated::{Dd, NeumaierSum};
use crate::error::{invalid, Result};
use crate::exactnum::{factorial, generalized_binomial, ExactScalar};
use crate::hp::ldexp;
use crate::real::Scalar;

/// Largest Hermite degree accepted by the float entry points.
pub const MAX_HERMITE_DEGREE: u32 = 10_000;

/// H_n(x) by the recurrence H_{k+1} = 2x H_k − 2k H_{k−1}.
pub fn hermite<T: Scalar>(n: u32, x: &T) -> T {
    let one = x.from_int_like(1);
    if n == 0 {
        return one;
    }
    let two_x = x.clone() + x.clone();
    let mut prev = one;
    let mut cur = two_x.clone();
    for k in 1..n {
        let next = two_x.clone() * cur.clone() - prev * x.from_int_like(2 * i64::from(k));
        prev = cur;
        cur = next;
    }
    cur
}

/// H_0(x), …, H_n(x) in one pass.
pub fn hermite_all<T: Scalar>(n: u32, x: &T) -> Vec<T> {
    let mut out = Vec::with_capacity(n as usize + 1);
    out.push(x.from_int_like(1));
    if n == 0 {
        return out;
    }
    let two_x = x.clone() + x.clone();
    out.push(two_x.clone());
    for k in 1..n as usize {
        let next = two_x.clone() * out[k].clone() - out[k - 1].clone() * x.from_int_like(2 * k as i64);
        out.push(next);
    }
    out
}

/// H_n(x) in double-double arithmetic, rounded to `f64`. Overflows to ±∞ like `f64`.
pub fn hermite_f64(n: u32, x: f64) -> f64 {
    hermite(n, &Dd::from(x)).to_f64()
}

/// H_n at an exact argument (which must be rational, i.e. carry no √π).
pub fn hermite_exact(n: u32, x: &ExactScalar) -> Result<ExactScalar> {
    if x.sqrt_pi_power() != 0 {
        return Err(invalid("polynomial argument must be rational"));
    }
    Ok(ExactScalar::from_rational(hermite(n, x.rational())))
}

/// Coefficients of H_n by power (index i holds the coefficient of x^i), from
/// H_n(x) = n! Σ_m (−1)^m (2x)^(n−2m) / (m! (n−2m)!).
pub fn hermite_coefficients(n: u32) -> Vec<BigInt> {
    let n = u64::from(n);
    let mut c = vec![BigInt::zero(); n as usize + 1];
    let nf = factorial(n);
    for m in 0..=n / 2 {
        let p = n - 2 * m;
        let mut v = &nf * (BigInt::one() << p) / (factorial(m) * factorial(p));
        if m % 2 == 1 {
            v = -v;
        }
        c[p as usize] = v;
    }
    c
}

/// L_p^q(x) = Σ_{k=0}^{p} (−1)^k C(p+q, p−k) x^k / k!.
///
/// The binomial is the polynomial one, so the sum is also defined when
/// p + q < 0; the families only use p + q ≥ 0.
pub fn laguerre<T: Scalar>(p: u32, q: i64, x: &T) -> T {
    // Horner in x with exact rational coefficients.
    let mut acc = x.from_int_like(0);
    for k in (0..=u64::from(p)).rev() {
        let c = generalized_binomial(i64::from(p) + q, u64::from(p) - k);
        let mut c = BigRational::new(c, factorial(k));
        if k % 2 == 1 {
            c = -c;
        }
        acc = acc * x.clone() + x.from_ratio_like(&c);
    }
    acc
}

/// L_p^q(x) by the three-term recurrence in double-double arithmetic.
pub fn laguerre_f64(p: u32, q: i64, x: f64) -> f64 {
    let x = Dd::from(x);
    let one = Dd::ONE;
    if p == 0 {
        return 1.0;
    }
    let mut prev = one;
    let mut cur = one.from_int_like(1 + q) - x;
    for j in 1..p as i64 {
        // (j+1) L_{j+1} = (2j + q + 1 − x) L_j − (j + q) L_{j−1}
        let a = one.from_int_like(2 * j + q + 1) - x;
        let next = (a * cur - one.from_int_like(j + q) * prev).div_int(j + 1);
        prev = cur;
        cur = next;
    }
    cur.to_f64()
}

/// L_p^q at an exact rational argument.
pub fn laguerre_exact(p: u32, q: i64, x: &ExactScalar) -> Result<ExactScalar> {
    if x.sqrt_pi_power() != 0 {
        return Err(invalid("polynomial argument must be rational"));
    }
    Ok(ExactScalar::from_rational(laguerre(p, q, x.rational())))
}

/// ₂F₁(−n, a; 3/2; 1/2) exactly, with a = a_num2 / 2.
///
/// Term k is (−1)^k C(n,k) P_k / ((2k+1)!! 2^k) with P_k = Π_{i<k} (a_num2 + 2i);
/// all terms are put over the common denominator (2n+1)!! 2^n.
pub fn hyp2f1_term(n: u32, a_num2: i64) -> ExactScalar {
    let n = i64::from(n);
    let mut binom = BigInt::one();
    let mut pk = BigInt::one();
    // (2n+1)!! / (2k+1)!!
    let mut odd_ratio = crate::exactnum::double_factorial(2 * n + 1);
    let mut num = BigInt::zero();
    for k in 0..=n {
        let mut t = (&binom * &pk * &odd_ratio) << (n - k) as usize;
        if k % 2 == 1 {
            t = -t;
        }
        num += t;
        if k == n {
            break;
        }
        binom = binom * (n - k) / (k + 1);
        pk *= a_num2 + 2 * k;
        odd_ratio /= 2 * k + 3;
    }
    let den = crate::exactnum::double_factorial(2 * n + 1) << n as usize;
    ExactScalar::from_rational(BigRational::new(num, den))
}

/// ₂F₁(−n, a; 3/2; 1/2) in floating point through the Pfaff transformation
/// 2^(−n) Σ_k C(n,k) (3/2 − a)_k / (3/2)_k, whose terms barely cancel.
pub fn hyp2f1_float(n: u32, a_num2: i64) -> f64 {
    let n = i64::from(n);
    let mut t = 1.0f64;
    let mut sum = NeumaierSum::new();
    let mut scale = 0i64;
    sum.add(t);
    for k in 0..n {
        let f = (3 - a_num2 + 2 * k) as f64;
        if f == 0.0 {
            break;
        }
        t *= (n - k) as f64 / (k + 1) as f64 * f / (3 + 2 * k) as f64;
        if t.abs() > 1e150 {
            // Rescale by an exact power of two.
            let v = sum.value();
            sum = NeumaierSum::new();
            sum.add(ldexp(v, -500));
            t = ldexp(t, -500);
            scale += 500;
        }
        sum.add(t);
    }
    ldexp(sum.value(), scale - n)
}

/// ₁F₁(−n; c; x) = Σ_k (−n)_k x^k / ((c)_k k!), with c = c_num2 / 2 > 0.
pub fn hyp1f1_neg_int<T: Scalar>(n: u32, c_num2: i64, x: &T) -> T {
    // Horner on coefficients r_k = (−n)_k / ((c)_k k!).
    let mut coeffs = Vec::with_capacity(n as usize + 1);
    let mut r = BigRational::one();
    coeffs.push(r.clone());
    for k in 0..i64::from(n) {
        r *= BigRational::new(BigInt::from(2 * (k - i64::from(n))), BigInt::from((c_num2 + 2 * k) * (k + 1)));
        coeffs.push(r.clone());
    }
    let mut acc = x.from_int_like(0);
    for c in coeffs.iter().rev() {
        acc = acc * x.clone() + x.from_ratio_like(c);
    }
    acc
}
