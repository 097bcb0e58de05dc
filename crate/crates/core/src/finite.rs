//! Finite-length bounds on the dimension of LRC codes: Singleton-type
//! bounds, the recursive bound with a log-convex base bound, and the
//! shortening bounds.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use crate::classical::{best_known_m2, formula_m, hamming_real, plotkin_real, BestKnownTable};
use crate::error::{Error, Result};
use crate::lpbound::{lp_dimension_bound, LpOptions};
use crate::model::{floor_log, BoundResult, BoundValue, CodeParams, Method, Witness, WitnessValue};

/// `μ = ⌈(n - d + 1)/N⌉ + 1`.
pub fn mu(n: usize, d: usize, n_max: usize) -> usize {
    (n + 1 - d).div_ceil(n_max) + 1
}

/// A bound `B(l, ρ)` on codes of length `l` and distance `ρ` that is
/// log-convex in `l`, with `B(0, ρ) = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LogConvexBound {
    Hamming,
    Plotkin,
    Singleton,
}

impl LogConvexBound {
    pub fn method(self) -> Method {
        match self {
            LogConvexBound::Hamming => Method::RecHamming,
            LogConvexBound::Plotkin => Method::RecPlotkin,
            LogConvexBound::Singleton => Method::RecSingleton,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            LogConvexBound::Hamming => "hamming",
            LogConvexBound::Plotkin => "plotkin",
            LogConvexBound::Singleton => "singleton",
        }
    }

    /// Exact (un-floored) value of `B(l, ρ)`.
    pub fn eval(self, l: usize, rho: usize, q: u32) -> Result<BigRational> {
        if l == 0 {
            return Ok(BigRational::one());
        }
        match self {
            LogConvexBound::Hamming => Ok(hamming_real(q, l, rho.saturating_sub(1) / 2)),
            LogConvexBound::Plotkin => plotkin_real(q, l, rho),
            LogConvexBound::Singleton => {
                if rho > l + 1 {
                    return Ok(BigRational::one());
                }
                Ok(BigRational::from_integer(num_traits::pow(
                    BigInt::from(q),
                    l + 1 - rho,
                )))
            }
        }
    }
}

/// `k <= μ log_q B(N, ρ)` for an LRC code of length `n`, distance `d`,
/// locality `r` and local distance `ρ`. Repair groups need not be disjoint.
pub fn recursive_bound(
    q: u32,
    n: usize,
    d: usize,
    r: usize,
    rho: usize,
    base: LogConvexBound,
) -> Result<BoundResult> {
    check_free_length(q, n, d, r, rho)?;
    let n_max = r + rho - 1;
    let m = mu(n, d, n_max);
    let b = base.eval(n_max, rho, q)?;
    let card = num_traits::pow(b.clone(), m);
    let k = floor_log(q, &card);
    let real_k = m as f64 * b.to_f64().unwrap_or(f64::NAN).log(q as f64);
    let witness = Witness::default()
        .with("mu", WitnessValue::Int(m as i64))
        .with("base", WitnessValue::Text(base.name().into()))
        .with("base_value", WitnessValue::Rational(b))
        .with("cardinality_bound", WitnessValue::Rational(card))
        .with("real_k_bound", WitnessValue::Float(real_k));
    Ok(BoundResult::dimension(base.method(), k, witness))
}

/// The recursive bound instantiated with the Hamming, Plotkin or Singleton bound.
pub fn corollary2(
    kind: LogConvexBound,
    q: u32,
    n: usize,
    d: usize,
    r: usize,
    rho: usize,
) -> Result<BoundResult> {
    recursive_bound(q, n, d, r, rho, kind)
}

fn check_free_length(q: u32, n: usize, d: usize, r: usize, rho: usize) -> Result<()> {
    if q < 2 {
        return Err(Error::InvalidParams(format!("alphabet size q={q} < 2")));
    }
    if r < 1 || rho < 2 {
        return Err(Error::InvalidParams(format!(
            "need r >= 1 and rho >= 2, got r={r}, rho={rho}"
        )));
    }
    if d < 1 || d > n {
        return Err(Error::InvalidParams(format!(
            "distance d={d} outside [1, n={n}]"
        )));
    }
    Ok(())
}

/// `d <= n - k - ⌈k/r⌉ + 2`.
pub fn singleton_gopalan(n: usize, k: usize, r: usize) -> i64 {
    n as i64 - k as i64 - k.div_ceil(r) as i64 + 2
}

/// `d <= n - k + 1 - (⌈k/r⌉ - 1)(ρ - 1)`.
pub fn singleton_rho(n: usize, k: usize, r: usize, rho: usize) -> i64 {
    let groups = k.div_ceil(r).max(1) as i64;
    n as i64 - k as i64 + 1 - (groups - 1) * (rho as i64 - 1)
}

/// Largest `k` whose distance bound still allows `d`.
fn invert(n: usize, d: usize, bound: impl Fn(usize) -> i64) -> i64 {
    (0..=n)
        .rev()
        .find(|&k| bound(k) >= d as i64)
        .map_or(0, |k| k as i64)
}

/// Dimension bound from [`singleton_gopalan`].
pub fn singleton_gopalan_k(n: usize, d: usize, r: usize) -> Result<BoundResult> {
    if r < 1 || d < 1 || d > n {
        return Err(Error::InvalidParams(format!(
            "need r >= 1 and 1 <= d <= n, got n={n}, d={d}, r={r}"
        )));
    }
    let k = invert(n, d, |k| singleton_gopalan(n, k, r));
    Ok(BoundResult::dimension(
        Method::SingletonGopalan,
        k,
        Witness::default(),
    ))
}

/// Dimension bound from [`singleton_rho`].
pub fn singleton_rho_k(n: usize, d: usize, r: usize, rho: usize) -> Result<BoundResult> {
    if r < 1 || rho < 2 || d < 1 || d > n {
        return Err(Error::InvalidParams(format!(
            "need r >= 1, rho >= 2 and 1 <= d <= n, got n={n}, d={d}, r={r}, rho={rho}"
        )));
    }
    let k = invert(n, d, |k| singleton_rho(n, k, r, rho));
    Ok(BoundResult::dimension(
        Method::SingletonRho,
        k,
        Witness::default(),
    ))
}

/// Options of [`shortening_bound`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShorteningOptions {
    /// Cap the residual code size by the shortening bound itself and by the
    /// LP bound, treating the residual as an LRC code.
    pub lrc_recursive: bool,
    /// Fail on missing table entries instead of using the formulas.
    pub strict: bool,
    /// Largest residual group count for which the LP cap is computed.
    pub lp_group_limit: usize,
}

impl Default for ShorteningOptions {
    fn default() -> Self {
        Self {
            lrc_recursive: false,
            strict: true,
            lp_group_limit: 2,
        }
    }
}

struct Shortening<'a> {
    q: u32,
    d: usize,
    r: usize,
    table: &'a BestKnownTable,
    opts: ShorteningOptions,
    memo: HashMap<usize, (i64, usize)>,
}

impl Shortening<'_> {
    /// `⌊log_q M(m, d)⌋` for an unrestricted code.
    fn plain(&self, m: usize) -> Result<i64> {
        let size = if self.q == 2 {
            best_known_m2(m, self.d, self.table, self.opts.strict)?
        } else {
            formula_m(self.q, m, self.d)
        };
        Ok(floor_log(self.q, &BigRational::from_integer(size)))
    }

    /// Best bound on `⌊log_q M(m, d, r)⌋` and the minimizing group count.
    fn bound(&mut self, m: usize) -> Result<(i64, usize)> {
        if let Some(&hit) = self.memo.get(&m) {
            return Ok(hit);
        }
        let width = self.r + 1;
        let mut best = (self.plain(m)?, 0);
        let max_groups = if self.d > 1 {
            m.saturating_sub(1) / width
        } else {
            m / width
        };
        for s in 1..=max_groups {
            let rest = m - s * width;
            let tail = if self.opts.lrc_recursive {
                self.bound(rest)?.0
            } else {
                self.plain(rest)?
            };
            let value = (s * self.r) as i64 + tail;
            if value < best.0 {
                best = (value, s);
            }
        }
        if self.opts.lrc_recursive
            && m.is_multiple_of(width)
            && m / width <= self.opts.lp_group_limit
            && self.d <= m
        {
            let params = CodeParams::new(self.q, m / width, self.r, 2, self.d)?;
            let lp = lp_dimension_bound(&params, LpOptions::default())?;
            if let Some(k) = lp.k() {
                if k < best.0 {
                    best = (k, 0);
                }
            }
        }
        self.memo.insert(m, best);
        Ok(best)
    }
}

/// `k <= min_s { s r + log_q M(n - s(r+1), d) }` over `s = 0` and every
/// `s >= 1` with `s(r+1) <= n - 1` (or `<= n` when `d = 1`).
///
/// `M` is the best-known table value for binary codes and the classical
/// formulas otherwise. With `lrc_recursive` the residual size is also capped
/// by this bound applied to the residual and, for residuals made of at most
/// `lp_group_limit` whole groups, by the LP bound.
pub fn shortening_bound(
    q: u32,
    n: usize,
    d: usize,
    r: usize,
    table: &BestKnownTable,
    opts: ShorteningOptions,
) -> Result<BoundResult> {
    check_free_length(q, n, d, r, 2)?;
    let mut state = Shortening {
        q,
        d,
        r,
        table,
        opts,
        memo: HashMap::new(),
    };
    let (k, s) = state.bound(n)?;
    let method = if opts.lrc_recursive {
        Method::ShorteningLrc
    } else {
        Method::Shortening
    };
    let witness = Witness::default().with("s", WitnessValue::Int(s as i64));
    Ok(BoundResult::dimension(method, k, witness))
}

/// Real-valued `k` bound of the recursive bound, for comparisons.
pub fn real_k(result: &BoundResult) -> Option<f64> {
    match result.witness.get("real_k_bound") {
        Some(WitnessValue::Float(x)) => Some(*x),
        _ => match &result.value {
            BoundValue::Exact(v) => v.to_f64(),
            BoundValue::Float(x) => Some(*x),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mu_examples() {
        assert_eq!(mu(12, 3, 4), 4);
        assert_eq!(mu(8, 3, 4), 3);
        for n in 1..20 {
            for w in 1..6 {
                assert_eq!(mu(n, n, w), 2);
            }
        }
    }

    #[test]
    fn recursive_examples() {
        let h = corollary2(LogConvexBound::Hamming, 2, 14, 3, 5, 3).unwrap();
        assert_eq!(h.witness.get("mu"), Some(&WitnessValue::Int(3)));
        assert_eq!(h.k(), Some(12));

        let s = corollary2(LogConvexBound::Singleton, 2, 12, 3, 3, 2).unwrap();
        assert_eq!(s.k(), Some(12));

        let p = corollary2(LogConvexBound::Plotkin, 2, 8, 5, 2, 3).unwrap();
        assert_eq!(p.witness.get("mu"), Some(&WitnessValue::Int(2)));
        assert_eq!(p.k(), Some(3));
        let real = real_k(&p).unwrap();
        assert!((real - 2.0 * 3f64.log2()).abs() < 1e-12);

        assert_eq!(
            corollary2(LogConvexBound::Plotkin, 2, 16, 3, 7, 2),
            Err(Error::PlotkinInapplicable { q: 2, n: 8, d: 2 })
        );
    }

    #[test]
    fn base_bounds_start_at_one() {
        for b in [
            LogConvexBound::Hamming,
            LogConvexBound::Plotkin,
            LogConvexBound::Singleton,
        ] {
            for rho in 2..6 {
                assert_eq!(b.eval(0, rho, 2).unwrap(), BigRational::one());
            }
        }
    }

    #[test]
    fn singleton_type_examples() {
        assert_eq!(singleton_gopalan(10, 4, 2), 6);
        assert_eq!(singleton_gopalan(14, 8, 4), 6);
        assert_eq!(singleton_gopalan(9, 3, 5), 9 - 3 + 1);
        assert_eq!(singleton_rho(12, 6, 3, 3), 5);
        assert_eq!(singleton_rho(12, 2, 3, 3), 11);
        for n in 1..15 {
            for k in 0..=n {
                for r in 1..5 {
                    if k >= 1 {
                        assert_eq!(singleton_rho(n, k, r, 2), singleton_gopalan(n, k, r));
                    }
                }
            }
        }
        assert_eq!(singleton_gopalan_k(10, 6, 2).unwrap().k(), Some(4));
        assert_eq!(singleton_rho_k(12, 5, 3, 3).unwrap().k(), Some(6));
    }

    #[test]
    fn shortening_examples() {
        let t = BestKnownTable::bundled();
        let opts = ShorteningOptions::default();
        assert_eq!(shortening_bound(2, 8, 3, 3, &t, opts).unwrap().k(), Some(4));
        assert_eq!(
            shortening_bound(2, 33, 5, 10, &t, opts).unwrap().k(),
            Some(23)
        );
        assert_eq!(shortening_bound(2, 6, 3, 2, &t, opts).unwrap().k(), Some(3));
        for r in 1..10 {
            assert_eq!(
                shortening_bound(2, r + 1, 2, r, &t, opts).unwrap().k(),
                Some(r as i64)
            );
            for d in 2..=r + 1 {
                assert!(
                    shortening_bound(2, r + 1, d, r, &t, opts)
                        .unwrap()
                        .k()
                        .unwrap()
                        <= r as i64
                );
            }
        }
    }

    #[test]
    fn lrc_recursion_never_worse() {
        let t = BestKnownTable::bundled();
        let plain = ShorteningOptions::default();
        let lrc = ShorteningOptions {
            lrc_recursive: true,
            ..plain
        };
        for r in 2..=6 {
            for s in 1..=3 {
                let n = s * (r + 1);
                for d in 3..=6.min(n) {
                    let a = shortening_bound(2, n, d, r, &t, plain)
                        .unwrap()
                        .k()
                        .unwrap();
                    let b = shortening_bound(2, n, d, r, &t, lrc).unwrap().k().unwrap();
                    assert!(b <= a, "n={n} d={d} r={r}: {b} > {a}");
                }
            }
        }
    }
}
