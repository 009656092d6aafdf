//! Tanh-sinh (double-exponential) quadrature over any `Real` type.
//!
//! The substitution x = c + h·tanh((π/2)·sinh t) makes the integrand decay
//! double-exponentially in t, which absorbs algebraic endpoint behavior such
//! as (a − x)^(ν−1/2). Level k uses step 2^−k; each level reuses every node of
//! the previous ones, so the error estimate |S_k − S_{k−1}| is free.

use std::any::{Any, TypeId};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{invalid, Error, Result};
use crate::real::Real;

/// Stopping controls for one integration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadOptions {
    pub abs_tol: f64,
    /// Relative to the L1 norm ∫|f|, so cancelling integrands are judged by their scale.
    pub rel_tol: f64,
    pub min_level: u32,
    pub max_level: u32,
}

impl QuadOptions {
    pub fn absolute(tol: f64) -> Self {
        QuadOptions { abs_tol: tol, rel_tol: 0.0, min_level: 3, max_level: 12 }
    }

    pub fn relative(tol: f64) -> Self {
        QuadOptions { abs_tol: 0.0, rel_tol: tol, min_level: 3, max_level: 12 }
    }

    pub fn with_max_level(mut self, level: u32) -> Self {
        self.max_level = level;
        self
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuadResult<R = f64> {
    pub value: R,
    pub error_estimate: f64,
    pub evaluations: usize,
    pub level: u32,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BatchResult<R = f64> {
    pub values: Vec<R>,
    pub error_estimates: Vec<f64>,
    pub l1_norms: Vec<f64>,
    pub evaluations: usize,
    pub level: u32,
}

/// Sample point handed to endpoint-aware integrands: x together with its
/// distances to both ends, each computed without cancellation.
pub struct Point<'a, R> {
    pub x: &'a R,
    pub from_lo: &'a R,
    pub to_hi: &'a R,
}

/// One abscissa of the reference rule on [−1, 1]: distance δ of the node
/// from ±1 and the weight dx/dt.
#[derive(Clone, Debug)]
struct Node<R> {
    delta: R,
    weight: R,
}

type NodeCache = Mutex<HashMap<(TypeId, u64, u32), Arc<dyn Any + Send + Sync>>>;

fn node_cache() -> &'static NodeCache {
    static CACHE: OnceLock<NodeCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn nodes_for_level<R: Real + Send + Sync + 'static>(proto: &R, level: u32) -> Arc<Vec<Node<R>>> {
    let key = (TypeId::of::<R>(), proto.unit_roundoff().to_bits(), level);
    if let Some(v) = node_cache().lock().expect("node cache").get(&key) {
        if let Ok(v) = Arc::clone(v).downcast::<Vec<Node<R>>>() {
            return v;
        }
    }
    let nodes = Arc::new(build_level(proto, level));
    node_cache().lock().expect("node cache").insert(key, nodes.clone());
    nodes
}

fn build_level<R: Real>(proto: &R, level: u32) -> Vec<Node<R>> {
    let h = 0.5f64.powi(level as i32);
    let eps = proto.unit_roundoff();
    let cutoff = eps * eps;
    let half_pi = proto.pi_like().div_int(2);
    let one = proto.from_int_like(1);
    let mut out = Vec::new();
    let mut j = 0u64;
    loop {
        // Level 0 holds every multiple of 1; deeper levels only the new odd ones.
        if level > 0 && j.is_multiple_of(2) {
            j += 1;
            continue;
        }
        let t = proto.lift(j as f64 * h);
        let et = t.exp();
        let sinh = (et.clone() - one.clone() / et.clone()).div_int(2);
        let cosh = (et.clone() + one.clone() / et).div_int(2);
        let u = half_pi.clone() * sinh;
        let e = (-(u.clone() + u)).exp();
        let denom = one.clone() + e.clone();
        let delta = (e.clone() + e.clone()) / denom.clone();
        let weight = proto.pi_like() * (cosh.clone() + cosh) * e / (denom.clone() * denom);
        if delta.to_f64() < cutoff || j as f64 * h > 12.0 {
            break;
        }
        out.push(Node { delta, weight });
        j += 1;
    }
    out
}

fn run<R, F>(lo: &R, hi: &R, m: usize, opts: &QuadOptions, f: F) -> Result<BatchResult<R>>
where
    R: Real + Send + Sync + 'static,
    F: Fn(Point<'_, R>) -> Vec<R>,
{
    if !(lo.clone() < hi.clone()) {
        return Err(invalid("integration needs lo < hi"));
    }
    let zero = lo.from_int_like(0);
    let half = (hi.clone() - lo.clone()).div_int(2);
    let mid = lo.clone() + half.clone();
    let eps = lo.unit_roundoff();
    let mut raw = vec![zero.clone(); m];
    let mut raw_abs = vec![zero.clone(); m];
    let mut evaluations = 0usize;
    let mut prev: Option<Vec<R>> = None;
    let mut last_est = vec![f64::INFINITY; m];

    let add = |x: &R, from_lo: &R, to_hi: &R, w: &R, raw: &mut [R], raw_abs: &mut [R], evals: &mut usize| {
        *evals += 1;
        let vals = f(Point { x, from_lo, to_hi });
        for (i, v) in vals.into_iter().enumerate().take(m) {
            if !v.is_finite() {
                continue;
            }
            let wv = w.clone() * v;
            raw_abs[i] = raw_abs[i].clone() + wv.abs();
            raw[i] = raw[i].clone() + wv;
        }
    };

    for level in 0..=opts.max_level {
        let nodes = nodes_for_level(lo, level);
        for (idx, node) in nodes.iter().enumerate() {
            let d = half.clone() * node.delta.clone();
            let far = half.clone() + half.clone() - d.clone();
            if level == 0 && idx == 0 {
                add(&mid, &half, &half, &node.weight, &mut raw, &mut raw_abs, &mut evaluations);
                continue;
            }
            let xr = hi.clone() - d.clone();
            add(&xr, &far, &d, &node.weight, &mut raw, &mut raw_abs, &mut evaluations);
            let xl = lo.clone() + d.clone();
            add(&xl, &d, &far, &node.weight, &mut raw, &mut raw_abs, &mut evaluations);
        }
        let step = half.clone() * lo.lift(0.5f64.powi(level as i32));
        let sums: Vec<R> = raw.iter().map(|r| r.clone() * step.clone()).collect();
        let sums_f: Vec<f64> = sums.iter().map(Real::to_f64).collect();
        let l1: Vec<f64> = raw_abs.iter().map(|r| (r.clone() * step.clone()).to_f64()).collect();
        if let Some(p) = &prev {
            let mut all_ok = true;
            for i in 0..m {
                let floor = 16.0 * eps * l1[i];
                last_est[i] = (sums[i].clone() - p[i].clone()).abs().to_f64() + floor;
                let target = opts.abs_tol.max(opts.rel_tol * l1[i]);
                if !(last_est[i] <= target) {
                    all_ok = false;
                }
            }
            if all_ok && level >= opts.min_level {
                return Ok(BatchResult {
                    values: sums,
                    error_estimates: last_est,
                    l1_norms: l1,
                    evaluations,
                    level,
                });
            }
            if level == opts.max_level {
                let worst = (0..m).max_by(|&a, &b| last_est[a].total_cmp(&last_est[b])).unwrap_or(0);
                return Err(Error::QuadratureNotConverged {
                    value: sums_f[worst],
                    error_estimate: last_est[worst],
                });
            }
        }
        prev = Some(sums);
    }
    Err(invalid("max_level must be at least 1"))
}

fn single<R: Clone>(b: BatchResult<R>) -> QuadResult<R> {
    QuadResult {
        value: b.values[0].clone(),
        error_estimate: b.error_estimates[0],
        evaluations: b.evaluations,
        level: b.level,
    }
}

/// ∫_lo^hi f(x) dx to absolute tolerance `tol`.
pub fn integrate_finite<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> Result<QuadResult> {
    integrate_with(&lo, &hi, &QuadOptions::absolute(tol), |x: &f64| f(*x))
}

/// ∫_lo^hi f over any real type.
pub fn integrate_with<R, F>(lo: &R, hi: &R, opts: &QuadOptions, f: F) -> Result<QuadResult<R>>
where
    R: Real + Send + Sync + 'static,
    F: Fn(&R) -> R,
{
    run(lo, hi, 1, opts, |p| vec![f(p.x)]).map(single)
}

/// As [`integrate_with`], but the integrand also receives x − lo and hi − x.
pub fn integrate_endpoint<R, F>(lo: &R, hi: &R, opts: &QuadOptions, f: F) -> Result<QuadResult<R>>
where
    R: Real + Send + Sync + 'static,
    F: Fn(Point<'_, R>) -> R,
{
    run(lo, hi, 1, opts, |p| vec![f(p)]).map(single)
}

/// Several integrands sharing one node sweep; converged when every component is.
pub fn integrate_batch<R, F>(lo: &R, hi: &R, m: usize, opts: &QuadOptions, f: F) -> Result<BatchResult<R>>
where
    R: Real + Send + Sync + 'static,
    F: Fn(Point<'_, R>) -> Vec<R>,
{
    if m == 0 {
        return Err(invalid("batch needs at least one integrand"));
    }
    run(lo, hi, m, opts, f)
}

/// Pointwise envelope |f(x)| ≤ coeff_bound · (1+x)^(degree+1) · e^(−rate·x²).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GaussianEnvelope {
    pub rate: f64,
    pub degree: u32,
    pub coeff_bound: f64,
}

impl GaussianEnvelope {
    /// Bound on ∫_X^∞ of the envelope: g(X)/(−(ln g)'(X)), valid once the
    /// log-derivative is negative (it decreases monotonically).
    pub fn tail_bound(&self, x: f64) -> f64 {
        let d = f64::from(self.degree + 1);
        let slope = 2.0 * self.rate * x - d / (1.0 + x);
        if slope <= 0.0 {
            return f64::INFINITY;
        }
        let log_g = self.coeff_bound.ln() + d * (1.0 + x).ln() - self.rate * x * x;
        log_g.exp() / slope
    }

    /// Smallest X on a 1/4 grid whose tail bound is below `target`.
    pub fn truncation_point(&self, target: f64) -> Result<f64> {
        if !(self.rate > 0.0) || !(target > 0.0) {
            return Err(invalid("envelope needs rate > 0 and a positive target"));
        }
        let mut x = 0.25;
        while self.tail_bound(x) > target {
            x += 0.25;
            if x > 1e4 {
                return Err(invalid("no truncation point below 1e4"));
            }
        }
        Ok(x)
    }
}

/// ∫_0^∞ f with the range cut where the envelope's tail is below tol/10.
pub fn integrate_gaussian_tail<F: Fn(f64) -> f64>(
    f: F,
    env: &GaussianEnvelope,
    tol: f64,
) -> Result<QuadResult> {
    let x = env.truncation_point(tol / 10.0)?;
    let mut r = integrate_with(&0.0, &x, &QuadOptions::absolute(tol * 0.9), |t: &f64| f(*t))?;
    r.error_estimate += env.tail_bound(x);
    Ok(r)
}

/// Batch Gaussian-tail integration over any real type; `tol` is absolute.
pub fn integrate_gaussian_tail_batch<R, F>(
    proto: &R,
    env: &GaussianEnvelope,
    m: usize,
    opts: &QuadOptions,
    f: F,
) -> Result<BatchResult<R>>
where
    R: Real + Send + Sync + 'static,
    F: Fn(&R) -> Vec<R>,
{
    let target = opts.abs_tol.max(f64::MIN_POSITIVE);
    let x = env.truncation_point(target / 10.0)?;
    let lo = proto.from_int_like(0);
    let hi = proto.lift(x);
    let mut r = integrate_batch(&lo, &hi, m, opts, |p| f(p.x))?;
    let tail = env.tail_bound(x);
    for e in &mut r.error_estimates {
        *e += tail;
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hp::Hp;
    use std::f64::consts::PI;

    #[test]
    fn polynomial() {
        let r = integrate_finite(|x| x, 0.0, 1.0, 1e-14).unwrap();
        assert!((r.value - 0.5).abs() < 1e-15);
        assert!(r.error_estimate >= 0.0 && r.evaluations > 0);
    }

    #[test]
    fn endpoint_singularity() {
        // ∫_0^1 (1−x)^(−1/2) dx = 2, with the distance passed exactly.
        let opts = QuadOptions::absolute(1e-12);
        let r = integrate_endpoint(&0.0, &1.0, &opts, |p: Point<'_, f64>| 1.0 / p.to_hi.sqrt()).unwrap();
        assert!((r.value - 2.0).abs() < 1e-12, "{}", r.value);
    }

    #[test]
    fn gaussian_half_line() {
        let env = GaussianEnvelope { rate: 1.0, degree: 0, coeff_bound: 1.0 };
        let r = integrate_gaussian_tail(|x| (-x * x).exp(), &env, 1e-13).unwrap();
        assert!((r.value - PI.sqrt() / 2.0).abs() < 1e-13);
        assert!(r.error_estimate >= (r.value - PI.sqrt() / 2.0).abs());
    }

    #[test]
    fn high_precision_matches_known_value() {
        let p = 256;
        let lo = Hp::zero(p);
        let hi = Hp::one(p);
        let opts = QuadOptions::absolute(1e-70).with_max_level(9);
        // ∫_0^1 4/(1+x²) = π
        let r = integrate_with(&lo, &hi, &opts, |x: &Hp| Hp::from_i64(4, p) / (Hp::one(p) + x * x)).unwrap();
        let diff = (r.value - Hp::pi(p)).abs();
        assert!(diff.to_f64() < 1e-70);
    }

    #[test]
    fn batch_shares_nodes() {
        let opts = QuadOptions::absolute(1e-13);
        let r = integrate_batch(&0.0, &PI, 3, &opts, |p: Point<'_, f64>| {
            vec![p.x.sin(), p.x.cos(), 1.0]
        })
        .unwrap();
        assert!((r.values[0] - 2.0).abs() < 1e-13);
        assert!(r.values[1].abs() < 1e-13);
        assert!((r.values[2] - PI).abs() < 1e-13);
        // |cos| has a kink, so its L1 norm is only a scale estimate.
        assert!((r.l1_norms[1] - 2.0).abs() < 1e-2);
    }

    #[test]
    fn non_convergence_is_reported() {
        let opts = QuadOptions::absolute(1e-15).with_max_level(2);
        let r = integrate_with(&0.0, &1.0, &opts, |x: &f64| (200.0 * x).sin());
        assert!(matches!(r, Err(Error::QuadratureNotConverged { .. })));
    }

    #[test]
    fn rejects_empty_interval() {
        assert!(integrate_finite(|x| x, 1.0, 1.0, 1e-10).is_err());
    }

    #[test]
    fn truncation_point_is_conservative() {
        let env = GaussianEnvelope { rate: 1.0, degree: 3, coeff_bound: 2.0 };
        let x = env.truncation_point(1e-12).unwrap();
        assert!(env.tail_bound(x) <= 1e-12);
        assert!(env.tail_bound(x - 0.25) > 1e-12);
    }
}
