//! Summation of non-negative term streams with a stopping rule and a tail model.
//!
//! Terms are evaluated in parallel chunks and reduced one by one in index
//! order, so results do not depend on the thread count.

use std::fmt;
use std::time::Instant;

use rayon::prelude::*;

use crate::compensated::Dd;
use crate::error::{invalid, Error, Result};
use crate::exactnum::{gamma_half, ExactScalar};
use crate::hp::Hp;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SumMode {
    ExactRational,
    FloatCompensated,
}

impl fmt::Display for SumMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SumMode::ExactRational => "exact",
            SumMode::FloatCompensated => "float",
        })
    }
}

impl std::str::FromStr for SumMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" | "exact_rational" => Ok(SumMode::ExactRational),
            "float" | "float_compensated" => Ok(SumMode::FloatCompensated),
            other => Err(invalid(format!("unknown mode `{other}`"))),
        }
    }
}

/// Estimate of Σ_{n > N} of the stream.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TailModel {
    None,
    /// Σ J_{ν+1}(nπ)²/n^{2ν}: smooth part of the squared Bessel asymptotic.
    F3 { nu: u32 },
    /// Σ H_ν(nπ)²/n^{2ν}: leading large-argument Struve term.
    F4 { nu: u32 },
    /// S_M = S − M^{−α} Σ_{k<order} d_k M^{−k} fitted to partial sums near N, α = two_alpha/2.
    PowerLaw { two_alpha: u32, order: usize },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum StopRule {
    /// Stop once `k` consecutive terms are each ≤ rel_tol × running sum.
    Geometric { k: usize, rel_tol: f64 },
    /// Sum exactly `n` terms, then add the tail model.
    FixedPlusTail { n: u64, tail: TailModel },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SumPolicy {
    pub mode: SumMode,
    pub stop: StopRule,
    pub max_terms: u64,
}

impl SumPolicy {
    pub fn validate(&self) -> Result<()> {
        match self.stop {
            StopRule::Geometric { k, rel_tol } => {
                if k == 0 || !(rel_tol > 0.0) {
                    return Err(invalid("geometric stop needs k >= 1 and rel_tol > 0"));
                }
            }
            StopRule::FixedPlusTail { n, tail } => {
                if n < 10 {
                    return Err(invalid("fixed stop needs N >= 10"));
                }
                if let TailModel::PowerLaw { order, .. } = tail {
                    if order < 3 {
                        return Err(invalid("power-law tail needs order >= 3"));
                    }
                }
            }
        }
        if self.max_terms == 0 {
            return Err(invalid("max_terms must be positive"));
        }
        Ok(())
    }
}

/// An indexed stream of non-negative terms.
pub trait TermSource: Sync {
    fn label(&self) -> String;
    fn first_index(&self) -> u64;
    fn float_term(&self, n: u64) -> Result<f64>;
    /// Exact term, when the stream has one. All terms of a stream must carry
    /// the same power of √π.
    fn exact_term(&self, _n: u64) -> Option<Result<ExactScalar>> {
        None
    }
    /// Factor applied to the F3/F4 tail models, for streams that are a
    /// constant multiple of the table summands.
    fn tail_scale(&self) -> f64 {
        1.0
    }
}

/// Term stream built from closures; handy for tests and ad-hoc sums.
pub struct FnSource<F, G = fn(u64) -> Option<Result<ExactScalar>>> {
    pub label: String,
    pub first: u64,
    pub float: F,
    pub exact: Option<G>,
}

impl<F> FnSource<F>
where
    F: Fn(u64) -> Result<f64> + Sync,
{
    pub fn float_only(label: impl Into<String>, first: u64, float: F) -> Self {
        FnSource { label: label.into(), first, float, exact: None }
    }
}

impl<F, G> TermSource for FnSource<F, G>
where
    F: Fn(u64) -> Result<f64> + Sync,
    G: Fn(u64) -> Option<Result<ExactScalar>> + Sync,
{
    fn label(&self) -> String {
        self.label.clone()
    }
    fn first_index(&self) -> u64 {
        self.first
    }
    fn float_term(&self, n: u64) -> Result<f64> {
        (self.float)(n)
    }
    fn exact_term(&self, n: u64) -> Option<Result<ExactScalar>> {
        self.exact.as_ref().and_then(|g| g(n))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SumReport {
    pub label: String,
    pub mode: SumMode,
    pub terms_used: u64,
    pub partial_sum: f64,
    /// Exact partial sum (exact mode only).
    pub exact_partial: Option<ExactScalar>,
    pub tail_estimate: f64,
    pub tail_error_bound: f64,
    pub total: f64,
    pub rhs: Option<f64>,
    pub abs_err: f64,
    pub rel_err: f64,
    /// The stopping rule fired within the budget.
    pub stop_fired: bool,
    pub budget_exhausted: bool,
    pub converged: bool,
    pub elapsed_ms: f64,
}

impl SumReport {
    /// Compares against a right-hand side; converged iff the stop fired and rel_err ≤ tol.
    pub fn with_rhs(mut self, rhs: f64, tol: f64) -> Self {
        self.abs_err = (self.total - rhs).abs();
        self.rel_err = if rhs != 0.0 { self.abs_err / rhs.abs() } else { self.abs_err };
        self.rhs = Some(rhs);
        self.converged = self.stop_fired && !self.budget_exhausted && self.rel_err <= tol;
        self
    }
}

/// Running sum in either mode.
enum Acc {
    Exact(ExactScalar),
    Float(Dd),
}

impl Acc {
    fn to_f64(&self) -> f64 {
        match self {
            Acc::Exact(e) => e.to_f64(),
            Acc::Float(d) => d.to_f64(),
        }
    }

    fn to_hp(&self, bits: usize) -> Hp {
        match self {
            Acc::Exact(e) => e.to_hp(bits),
            Acc::Float(d) => Hp::from_f64(d.hi, bits) + Hp::from_f64(d.lo, bits),
        }
    }
}

enum Term {
    Exact(ExactScalar),
    Float(f64),
}

impl Term {
    fn to_f64(&self) -> f64 {
        match self {
            Term::Exact(e) => e.to_f64(),
            Term::Float(v) => *v,
        }
    }
}

fn eval_term(src: &dyn TermSource, mode: SumMode, n: u64) -> Result<Term> {
    match mode {
        SumMode::FloatCompensated => src.float_term(n).map(Term::Float),
        SumMode::ExactRational => match src.exact_term(n) {
            Some(r) => r.map(Term::Exact),
            None => Err(invalid(format!("{} has no exact terms", src.label()))),
        },
    }
}

/// Bits used for the power-law solve.
const FIT_BITS: usize = 384;

/// Sums the stream under `policy`. The report's rhs fields are unset; see
/// [`SumReport::with_rhs`].
pub fn sum_series(src: &dyn TermSource, policy: &SumPolicy) -> Result<SumReport> {
    policy.validate()?;
    let start = Instant::now();
    let first = src.first_index();
    let mode = policy.mode;
    let mut acc = match mode {
        SumMode::ExactRational => None,
        SumMode::FloatCompensated => Some(Acc::Float(Dd::ZERO)),
    };

    let (target, checkpoints) = match policy.stop {
        StopRule::Geometric { .. } => (policy.max_terms, Vec::new()),
        StopRule::FixedPlusTail { n, tail } => {
            let cps = match tail {
                TailModel::PowerLaw { order, .. } => fit_points(n, order),
                _ => Vec::new(),
            };
            (n.min(policy.max_terms), cps)
        }
    };
    let chunk = match policy.stop {
        StopRule::Geometric { .. } => 32u64,
        StopRule::FixedPlusTail { .. } => 2048u64,
    };

    let mut used = 0u64;
    let mut run = 0usize;
    let mut stop_fired = false;
    let mut saved: Vec<(u64, Hp)> = Vec::new();
    'outer: while used < target {
        let len = chunk.min(target - used);
        let lo = first + used;
        let terms: Vec<Result<Term>> =
            (lo..lo + len).into_par_iter().map(|n| eval_term(src, mode, n)).collect();
        for t in terms {
            let t = t?;
            let tf = t.to_f64();
            if !(tf >= 0.0) {
                return Err(invalid(format!("{}: term {} is {tf}, expected >= 0", src.label(), first + used)));
            }
            acc = Some(match (acc.take(), t) {
                (None, Term::Exact(e)) => Acc::Exact(e),
                (Some(Acc::Exact(s)), Term::Exact(e)) => Acc::Exact(s.checked_add(&e)?),
                (Some(Acc::Float(s)), Term::Float(v)) => Acc::Float(s + Dd::from(v)),
                _ => unreachable!("mode fixes the term kind"),
            });
            used += 1;
            let s = acc.as_ref().expect("accumulator set");
            if checkpoints.contains(&used) {
                saved.push((used, s.to_hp(FIT_BITS)));
            }
            if let StopRule::Geometric { k, rel_tol } = policy.stop {
                if tf <= rel_tol * s.to_f64() {
                    run += 1;
                    if run >= k {
                        stop_fired = true;
                        break 'outer;
                    }
                } else {
                    run = 0;
                }
            }
        }
    }

    let (tail, tail_bound, budget_exhausted) = match policy.stop {
        StopRule::Geometric { .. } => (0.0, 0.0, !stop_fired),
        StopRule::FixedPlusTail { n, tail } => {
            if used < n {
                (0.0, f64::INFINITY, true)
            } else {
                stop_fired = true;
                let (t, b) = match tail {
                    TailModel::None => (0.0, 0.0),
                    TailModel::F3 { nu } => {
                        let k = src.tail_scale();
                        (k * tail_f3(nu, n), k * tail_f3_bound(nu, n))
                    }
                    TailModel::F4 { nu } => {
                        let k = src.tail_scale();
                        (k * tail_f4(nu, n), k * tail_f4_bound(nu, n))
                    }
                    TailModel::PowerLaw { two_alpha, order } => {
                        let s_n = acc.as_ref().map(|a| a.to_hp(FIT_BITS)).unwrap_or(Hp::zero(FIT_BITS));
                        let (limit, err) = power_law_limit(&saved, two_alpha, order)?;
                        ((limit - s_n).to_f64(), err)
                    }
                };
                (t, b, false)
            }
        }
    };

    let partial = acc.as_ref().map(Acc::to_f64).unwrap_or(0.0);
    let exact_partial = match (&acc, mode) {
        (Some(Acc::Exact(e)), _) => Some(e.clone()),
        (None, SumMode::ExactRational) => Some(ExactScalar::zero()),
        _ => None,
    };
    Ok(SumReport {
        label: src.label(),
        mode,
        terms_used: used,
        partial_sum: partial,
        exact_partial,
        tail_estimate: tail,
        tail_error_bound: tail_bound,
        total: partial + tail,
        rhs: None,
        abs_err: f64::NAN,
        rel_err: f64::NAN,
        stop_fired,
        budget_exhausted,
        converged: stop_fired && !budget_exhausted,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

/// Truncation points M_j = N − j·step, j = 0..=order, used by the power-law fit.
fn fit_points(n: u64, order: usize) -> Vec<u64> {
    let step = (n / (4 * (order as u64 + 1))).max(1);
    (0..=order as u64).filter_map(|j| n.checked_sub(j * step)).filter(|&m| m > 0).collect()
}

/// Limit S of S_M = S − M^{−α} Σ_{k<K} d_k M^{−k} from K+1 partial sums,
/// with the error estimated as the change when two fewer terms are fitted.
pub fn power_law_limit(points: &[(u64, Hp)], two_alpha: u32, order: usize) -> Result<(Hp, f64)> {
    if points.len() < order + 1 || order < 3 {
        return Err(invalid("power-law fit needs order >= 3 and order + 1 partial sums"));
    }
    let full = solve_limit(&points[..=order], two_alpha, order)?;
    let reduced = solve_limit(&points[..order - 1], two_alpha, order - 2)?;
    let err = (full.clone() - reduced).abs().to_f64();
    Ok((full, err))
}

fn solve_limit(points: &[(u64, Hp)], two_alpha: u32, order: usize) -> Result<Hp> {
    let p = FIT_BITS;
    let n = order + 1;
    // Rows: [1, −M^{−α}, −M^{−α−1}, …] · [S, d_0, …] = S_M
    let mut a: Vec<Vec<Hp>> = Vec::with_capacity(n);
    let mut rhs: Vec<Hp> = Vec::with_capacity(n);
    for (m, s) in points.iter().take(n) {
        let mh = Hp::from_i64(*m as i64, p);
        let base = if two_alpha.is_multiple_of(2) {
            mh.powi(-(two_alpha as i32 / 2))
        } else {
            mh.powi(-(two_alpha as i32 / 2)) / mh.sqrt()
        };
        let inv = mh.recip();
        let mut row = vec![Hp::one(p)];
        let mut c = -base;
        for _ in 0..order {
            row.push(c.clone());
            c = c * &inv;
        }
        a.push(row);
        rhs.push(s.with_precision(p));
    }
    // Gaussian elimination with partial pivoting.
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| {
                a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap_or(std::cmp::Ordering::Equal)
            })
            .expect("non-empty");
        if a[piv][col].is_zero() {
            return Err(invalid("singular power-law system"));
        }
        a.swap(col, piv);
        rhs.swap(col, piv);
        for r in col + 1..n {
            let f = &a[r][col] / &a[col][col];
            let (upper, lower) = a.split_at_mut(r);
            for (dst, src) in lower[0][col..].iter_mut().zip(&upper[col][col..]) {
                *dst = &*dst - &(src * &f);
            }
            let v = &rhs[col] * &f;
            rhs[r] = &rhs[r] - &v;
        }
    }
    let mut x = vec![Hp::zero(p); n];
    for r in (0..n).rev() {
        let mut s = rhs[r].clone();
        for c in r + 1..n {
            s = s - &a[r][c] * &x[c];
        }
        x[r] = s / &a[r][r];
    }
    Ok(x.swap_remove(0))
}

/// Σ_{n>N} J_{ν+1}(nπ)²/n^{2ν} ≈ N^{−2ν}/(2νπ²), from J² ~ (1/(π² n)) on average.
pub fn tail_f3(nu: u32, n: u64) -> f64 {
    let pi2 = std::f64::consts::PI * std::f64::consts::PI;
    (n as f64).powi(-2 * nu as i32) / (2.0 * f64::from(nu) * pi2)
}

/// Bound on |true tail − tail_f3|: next-order smooth and oscillatory corrections.
pub fn tail_f3_bound(nu: u32, n: u64) -> f64 {
    let v = f64::from(nu);
    let mu = 4.0 * (v + 1.0) * (v + 1.0);
    tail_f3(nu, n) * 2.0 * (v + (mu - 1.0) / (4.0 * std::f64::consts::PI) + 1.0) / n as f64
}

fn gamma_nu_half(nu: u32) -> f64 {
    gamma_half(2 * nu + 1).map(|g| g.to_f64()).unwrap_or(f64::NAN)
}

/// Coefficient A_ν = (π/2)^{2ν−2} / (π Γ(ν+1/2)²) of the leading 1/n² behavior.
pub fn tail_f4_coefficient(nu: u32) -> f64 {
    let pi = std::f64::consts::PI;
    let g = gamma_nu_half(nu);
    (pi / 2.0).powi(2 * nu as i32 - 2) / (pi * g * g)
}

/// Σ_{n>N} H_ν(nπ)²/n^{2ν} ≈ A_ν (1/N − 1/(2N²)).
pub fn tail_f4(nu: u32, n: u64) -> f64 {
    let nf = n as f64;
    tail_f4_coefficient(nu) * (1.0 / nf - 1.0 / (2.0 * nf * nf))
}

/// Bound on |true tail − tail_f4|: Euler–Maclaurin remainder, the next Struve
/// term, the Y_ν² mean and the oscillating cross term.
pub fn tail_f4_bound(nu: u32, n: u64) -> f64 {
    let pi = std::f64::consts::PI;
    let nf = n as f64;
    let v = f64::from(nu);
    let a = tail_f4_coefficient(nu);
    let cross = 2.0 * 2f64.sqrt() / pi / (pi.sqrt() * gamma_nu_half(nu)) * (pi / 2.0).powf(v - 1.0);
    a * (2.0 * v + 1.0) / (nf * nf * nf) + 1.0 / (pi * pi * nf.powi(2 * nu as i32)) + cross * nf.powf(-v - 1.5)
}
