//! Asymptotic rate bounds as functions of the relative distance δ.
//!
//! All logarithms are base 2 unless a `q` is given. Curves return the
//! conventional endpoint values at δ = 0 (r/(r+1) or r/N) and δ ≥ 1/2 (0).

use crate::error::{Error, Result};
use crate::krawtchouk::binomial;
use crate::model::{BoundKind, BoundResult, BoundValue, Method, Witness, WitnessValue};
use num_traits::ToPrimitive;

/// Number of seed points for every scalar minimization.
pub const GRID_POINTS: usize = 512;
/// Final bracket width of the golden-section refinement.
pub const GOLDEN_TOL: f64 = 1e-12;

/// One evaluated point of a rate curve.
#[derive(Debug, Clone, PartialEq)]
pub struct RateCurvePoint {
    pub delta: f64,
    pub value: f64,
    /// Name and value of the inner optimization argument, if any.
    pub minimizer: Option<(&'static str, f64)>,
    pub method: Method,
}

impl RateCurvePoint {
    fn new(method: Method, delta: f64, value: f64, minimizer: Option<(&'static str, f64)>) -> Self {
        Self {
            delta,
            value,
            minimizer,
            method,
        }
    }

    pub fn to_bound_result(&self) -> BoundResult {
        let mut witness = Witness::default().with("delta", WitnessValue::Float(self.delta));
        if let Some((name, x)) = self.minimizer {
            witness = witness.with(name, WitnessValue::Float(x));
        }
        BoundResult {
            value: BoundValue::Float(self.value),
            kind: BoundKind::Rate,
            method: self.method,
            witness,
            exact: false,
        }
    }
}

/// How to read the coefficients of the disjoint-repair-group bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DisjointInterpretation {
    /// β_i(x) = c_i x^{-i} for all i, with c_t halved for odd r in both the
    /// rate formula and the equation defining μ.
    #[default]
    Consistent,
    /// β_t(x) = c_t x^{+t} and an unhalved root polynomial, as typeset.
    AsPrinted,
}

/// Minimizes `f` on `[a, b]`: best of a uniform grid of `grid` points, then
/// golden-section search on the bracketing grid cells.
pub fn minimize_scalar<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, grid: usize) -> (f64, f64) {
    assert!(grid >= 2 && a <= b);
    let step = (b - a) / (grid - 1) as f64;
    let point = |i: usize| {
        if i + 1 == grid {
            b
        } else {
            a + step * i as f64
        }
    };
    let (mut best_i, mut best_f) = (0, f(a));
    for i in 1..grid {
        let v = f(point(i));
        if v < best_f {
            best_i = i;
            best_f = v;
        }
    }
    let mut lo = point(best_i.saturating_sub(1));
    let mut hi = point((best_i + 1).min(grid - 1));
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - phi * (hi - lo);
    let mut x2 = lo + phi * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > GOLDEN_TOL {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = f(x2);
        }
        if x2 - x1 <= 0.0 {
            break;
        }
    }
    let (x, v) = if f1 <= f2 { (x1, f1) } else { (x2, f2) };
    if v <= best_f {
        (x, v)
    } else {
        (point(best_i), best_f)
    }
}

/// Binary entropy, with h(0) = h(1) = 0.
pub fn h2(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        return 0.0;
    }
    -x * x.log2() - (1.0 - x) * (1.0 - x).log2()
}

/// τ(δ) = 1/2 − √(δ(1−δ)).
pub fn tau(delta: f64) -> f64 {
    0.5 - (delta * (1.0 - delta)).max(0.0).sqrt()
}

/// Smallest s used when minimizing over s ∈ (0, 1] on a log scale.
const S_MIN_LN: f64 = -40.0;

/// Gilbert-Varshamov type lower bound for binary LRC codes with ρ = 2.
pub fn gv_lrc(r: usize, delta: f64) -> RateCurvePoint {
    gv_lrc_with_grid(r, delta, GRID_POINTS)
}

pub fn gv_lrc_with_grid(r: usize, delta: f64, grid: usize) -> RateCurvePoint {
    let w = (r + 1) as f64;
    if delta <= 0.0 {
        return RateCurvePoint::new(Method::Gv, delta, r as f64 / w, Some(("s", 0.0)));
    }
    if delta >= 0.5 {
        return RateCurvePoint::new(Method::Gv, delta, 0.0, Some(("s", 1.0)));
    }
    let obj = |u: f64| {
        let s = u.exp();
        ((1.0 + s).powf(w) + (1.0 - s).powf(w)).log2() / w - delta * u / std::f64::consts::LN_2
    };
    let (u, v) = minimize_scalar(obj, S_MIN_LN, 0.0, grid);
    RateCurvePoint::new(Method::Gv, delta, (1.0 - v).max(0.0), Some(("s", u.exp())))
}

/// Polynomial coefficients of b_ρ(s) in s, indexed by degree.
pub fn b_rho_coefficients(q: u32, r: usize, rho: usize) -> Vec<f64> {
    let n = r + rho - 1;
    let qf = q as f64;
    let mut coef = vec![0.0; n + 1];
    coef[0] = 1.0;
    for (w, c) in coef.iter_mut().enumerate().skip(rho) {
        let inner: f64 = (0..=w - rho)
            .map(|j| big_to_f64(&binomial(w - 1, j)) * (-qf).powi(-(j as i32)))
            .sum();
        *c = (qf - 1.0) * big_to_f64(&binomial(n, w)) * qf.powi((w - rho) as i32) * inner;
    }
    coef
}

fn big_to_f64(x: &num_bigint::BigInt) -> f64 {
    x.to_f64().unwrap_or(f64::INFINITY)
}

/// Gilbert-Varshamov type lower bound for q-ary (ρ, r) LRC codes. Assumes a
/// q-ary MDS code of length N = r+ρ−1 and distance ρ exists.
pub fn gv_rho(q: u32, r: usize, rho: usize, delta: f64) -> RateCurvePoint {
    let n = (r + rho - 1) as f64;
    if delta <= 0.0 {
        return RateCurvePoint::new(Method::GvRho, delta, r as f64 / n, Some(("s", 0.0)));
    }
    if delta >= 0.5 {
        return RateCurvePoint::new(Method::GvRho, delta, 0.0, Some(("s", 1.0)));
    }
    let coef = b_rho_coefficients(q, r, rho);
    let lnq = (q as f64).ln();
    let obj = |u: f64| {
        let s = u.exp();
        let b: f64 = coef.iter().rev().fold(0.0, |acc, c| acc * s + c);
        b.ln() / lnq / n - delta * u / lnq
    };
    let (u, v) = minimize_scalar(obj, S_MIN_LN, 0.0, GRID_POINTS);
    RateCurvePoint::new(
        Method::GvRho,
        delta,
        (r as f64 / n - v).max(0.0),
        Some(("s", u.exp())),
    )
}

fn g_mrrw(x: f64) -> f64 {
    h2(0.5 - 0.5 * (1.0 - x).max(0.0).sqrt())
}

/// The second McEliece-Rodemich-Rumsey-Welch bound on the rate of binary codes.
pub fn mrrw2(delta: f64) -> f64 {
    mrrw2_point(delta).value
}

pub fn mrrw2_point(delta: f64) -> RateCurvePoint {
    mrrw2_with_grid(delta, GRID_POINTS)
}

pub fn mrrw2_with_grid(delta: f64, grid: usize) -> RateCurvePoint {
    if delta <= 0.0 {
        return RateCurvePoint::new(Method::Mrrw2, delta, 1.0, None);
    }
    if delta >= 0.5 {
        return RateCurvePoint::new(Method::Mrrw2, delta, 0.0, None);
    }
    let obj = |a: f64| g_mrrw(a * a) - g_mrrw(a * a + 2.0 * delta * a + 2.0 * delta);
    let (a, v) = minimize_scalar(obj, 0.0, 1.0 - 2.0 * delta, grid);
    RateCurvePoint::new(
        Method::Mrrw2,
        delta,
        (1.0 + v).clamp(0.0, 1.0),
        Some(("alpha", a)),
    )
}

/// min over σ ∈ [0, 1/(r+1)] of σr + (1−σ(r+1))·inner(δ/(1−σ(r+1))), with the
/// inner term taken as 0 once its argument reaches 1/2.
fn shortened<F: Fn(f64) -> f64>(r: usize, delta: f64, inner: F, grid: usize) -> (f64, f64) {
    let w = (r + 1) as f64;
    let obj = |sigma: f64| {
        let rest = 1.0 - sigma * w;
        let tail = if rest <= 0.0 || delta / rest >= 0.5 {
            0.0
        } else {
            rest * inner(delta / rest)
        };
        sigma * r as f64 + tail
    };
    minimize_scalar(obj, 0.0, 1.0 / w, grid)
}

/// Shortening upper bound built from any asymptotic rate bound `r_opt`.
pub fn upper_cm<F: Fn(f64) -> f64>(r: usize, delta: f64, r_opt: F) -> RateCurvePoint {
    upper_cm_with_grid(r, delta, r_opt, GRID_POINTS)
}

pub fn upper_cm_with_grid<F: Fn(f64) -> f64>(
    r: usize,
    delta: f64,
    r_opt: F,
    grid: usize,
) -> RateCurvePoint {
    if delta <= 0.0 {
        let w = (r + 1) as f64;
        return RateCurvePoint::new(
            Method::UpperCm,
            delta,
            r as f64 / w,
            Some(("sigma", 1.0 / w)),
        );
    }
    if delta >= 0.5 {
        return RateCurvePoint::new(Method::UpperCm, delta, 0.0, Some(("sigma", 0.0)));
    }
    let (sigma, v) = shortened(r, delta, r_opt, grid);
    RateCurvePoint::new(
        Method::UpperCm,
        delta,
        v.clamp(0.0, 1.0),
        Some(("sigma", sigma)),
    )
}

/// The shortening bound with the MRRW2 bound inside.
pub fn upper_cm_mrrw2(r: usize, delta: f64) -> RateCurvePoint {
    upper_cm(r, delta, mrrw2)
}

/// c(w, τ) = log₂e/(8w²) · (τ^w/2)^{w+1}.
pub fn coset_penalty(w: usize, tau: f64) -> f64 {
    let wf = w as f64;
    std::f64::consts::LOG2_E / (8.0 * wf * wf) * (tau.powi(w as i32) / 2.0).powi(w as i32 + 1)
}

/// R₀(r, δ) = h(τ) − c(r+1, τ).
pub fn r0(r: usize, delta: f64) -> f64 {
    if delta >= 0.5 {
        return 0.0;
    }
    let t = tau(delta);
    h2(t) - coset_penalty(r + 1, t)
}

/// Upper bound on the rate of linear LRC codes: shortening with R₀ inside.
pub fn upper_linear(r: usize, delta: f64) -> RateCurvePoint {
    upper_linear_with_grid(r, delta, GRID_POINTS)
}

pub fn upper_linear_with_grid(r: usize, delta: f64, grid: usize) -> RateCurvePoint {
    if delta <= 0.0 {
        let w = (r + 1) as f64;
        return RateCurvePoint::new(
            Method::UpperLinear,
            delta,
            r as f64 / w,
            Some(("sigma", 1.0 / w)),
        );
    }
    if delta >= 0.5 {
        return RateCurvePoint::new(Method::UpperLinear, delta, 0.0, Some(("sigma", 0.0)));
    }
    let (sigma, v) = shortened(r, delta, |x| r0(r, x).max(0.0), grid);
    RateCurvePoint::new(
        Method::UpperLinear,
        delta,
        v.clamp(0.0, 1.0),
        Some(("sigma", sigma)),
    )
}

/// Per-group weight coefficients c_i = C(r+1, i), i = 0..=t, with c_t divided
/// by 2^{r mod 2} when `halve` is set.
fn group_coefficients(r: usize, halve: bool) -> Vec<f64> {
    let t = (r + 1) / 2;
    let mut c: Vec<f64> = (0..=t).map(|i| big_to_f64(&binomial(r + 1, i))).collect();
    if halve && r % 2 == 1 {
        c[t] /= 2.0;
    }
    c
}

/// The point μ ≥ 1 at which the disjoint-repair-group bound is evaluated:
/// 1 when the x = 1 mean condition holds, otherwise the positive root of
/// (r+1)τ Σ c_i x^{t−i} − Σ i c_i x^{t−i}.
pub fn mu_root(r: usize, tau_val: f64, interp: DisjointInterpretation) -> Result<f64> {
    if !(tau_val > 0.0 && tau_val < 0.5) {
        return Err(Error::InvalidParams(format!(
            "tau={tau_val} outside (0, 1/2)"
        )));
    }
    let t = (r + 1) / 2;
    let target = (r + 1) as f64 * tau_val;
    let halved = group_coefficients(r, true);
    let total: f64 = halved.iter().sum();
    let mean: f64 = halved
        .iter()
        .enumerate()
        .map(|(i, c)| i as f64 * c)
        .sum::<f64>()
        / total;
    if mean <= target {
        return Ok(1.0);
    }
    let c = group_coefficients(r, interp == DisjointInterpretation::Consistent);
    let f = |x: f64| -> f64 {
        (0..=t)
            .map(|i| c[i] * (target - i as f64) * x.powi((t - i) as i32))
            .sum()
    };
    let (mut lo, mut hi) = (1.0f64, 2.0f64);
    if f(lo) > 0.0 {
        return Err(Error::Bracket(format!("f(1) > 0 for r={r}, tau={tau_val}")));
    }
    while f(hi) <= 0.0 {
        lo = hi;
        hi *= 2.0;
        if !hi.is_finite() || hi > 1e300 {
            return Err(Error::Bracket(format!(
                "no sign change for r={r}, tau={tau_val}"
            )));
        }
    }
    let scale: f64 = (0..=t)
        .map(|i| (c[i] * (target - i as f64)).abs())
        .sum::<f64>();
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        let size = scale * mid.powi(t as i32);
        if fm.abs() <= 1e-12 * size || hi - lo <= f64::EPSILON * hi {
            return Ok(mid);
        }
        if fm > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Upper bound on the rate of binary linear LRC codes with disjoint repair
/// groups, τ·log₂μ + log₂(Σ β_i(μ))/(r+1).
pub fn upper_disjoint(
    r: usize,
    delta: f64,
    interp: DisjointInterpretation,
) -> Result<RateCurvePoint> {
    if delta <= 0.0 || delta >= 0.5 {
        // τ = 1/2 gives μ = 1; τ = 0 sends μ to infinity and the bound to 0.
        let value = if delta <= 0.0 {
            group_coefficients(r, true).iter().sum::<f64>().log2() / (r + 1) as f64
        } else {
            0.0
        };
        return Ok(RateCurvePoint::new(
            Method::UpperDisjoint,
            delta,
            value,
            None,
        ));
    }
    let tv = tau(delta);
    let mu = mu_root(r, tv, interp)?;
    let t = (r + 1) / 2;
    let c = group_coefficients(r, true);
    let sum: f64 = (0..=t)
        .map(|i| {
            let e = if i == t && interp == DisjointInterpretation::AsPrinted {
                i as i32
            } else {
                -(i as i32)
            };
            c[i] * mu.powi(e)
        })
        .sum();
    let value = tv * mu.log2() + sum.log2() / (r + 1) as f64;
    Ok(RateCurvePoint::new(
        Method::UpperDisjoint,
        delta,
        value,
        Some(("mu", mu)),
    ))
}

/// upper_cm(r, δ, mrrw2) − upper_disjoint(r, δ) in consistent mode; positive
/// where the disjoint-group bound is tighter.
pub fn disjoint_improvement(r: usize, delta: f64) -> Result<f64> {
    Ok(upper_cm_mrrw2(r, delta).value
        - upper_disjoint(r, delta, DisjointInterpretation::Consistent)?.value)
}

/// Points `a, a+step, …` up to `b` inclusive (within a half step).
pub fn delta_grid(a: f64, b: f64, step: f64) -> Vec<f64> {
    if step <= 0.0 || b < a {
        return vec![a];
    }
    let count = ((b - a) / step + 0.5).floor() as usize;
    (0..=count).map(|i| a + step * i as f64).collect()
}
