//! Delsarte linear-programming bound for codes with disjoint repair groups,
//! viewed as codes in the product Hamming scheme `H(N, q)^{⊗s}`.
//!
//! The primal maximizes `Σ_{i∈T} a_i` subject to
//! `Σ_{i∈T} a_i K_j(i) >= -K_j(0)` for every nonzero `j`; any code satisfies
//! `|C| <= 1 + optimum`. A dual certificate is a polynomial
//! `f = 1 + Σ f_j K_j` with `f_j >= 0` and `f <= 0` on `T`, and then `|C| <= f(0)`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::krawtchouk::{binomial, KrawTable};
use crate::model::{
    all_indices, floor_log, index_of, rank_of, BoundResult, CodeParams, Method, MultiIndex,
    Witness, WitnessValue,
};
use crate::ratlp::{self, LpProblem, LpStatus, SolveMode, SolveOptions};

/// Multi-indices `i` with `Σ i_p >= d` and every `i_p ∈ {0, ρ, ..., N}`,
/// excluding zero, as ranks in increasing order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeasibleIndexSet {
    s: usize,
    n_max: usize,
    ranks: Vec<usize>,
}

impl FeasibleIndexSet {
    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn len(&self) -> usize {
        self.ranks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }

    pub fn indices(&self) -> Vec<MultiIndex> {
        self.ranks
            .iter()
            .map(|&r| index_of(r, self.s, self.n_max).expect("rank in range"))
            .collect()
    }

    pub fn contains(&self, i: &MultiIndex) -> bool {
        rank_of(i, self.n_max)
            .map(|r| self.ranks.binary_search(&r).is_ok())
            .unwrap_or(false)
    }
}

fn admissible(i: &MultiIndex, rho: usize, d: usize) -> bool {
    !i.is_zero() && i.weight() >= d && i.entries().iter().all(|&e| e == 0 || e >= rho)
}

pub fn enumerate_t(params: &CodeParams) -> FeasibleIndexSet {
    let (s, n_max) = (params.groups(), params.group_width());
    let (rho, d) = (params.local_distance(), params.distance());
    let ranks = all_indices(s, n_max)
        .enumerate()
        .filter(|(_, i)| admissible(i, rho, d))
        .map(|(r, _)| r)
        .collect();
    FeasibleIndexSet { s, n_max, ranks }
}

/// Krawtchouk values of one group as machine integers.
#[derive(Debug, Clone)]
struct SmallKraw {
    k: Vec<Vec<i128>>,
}

impl SmallKraw {
    fn new(table: &KrawTable) -> Result<Self> {
        let n = table.n();
        let k = (0..=n)
            .map(|j| {
                (0..=n)
                    .map(|x| {
                        table.get(j, x).to_i128().ok_or_else(|| {
                            Error::SizeGuard(format!("K_{j}({x}) does not fit in 128 bits"))
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { k })
    }

    fn multi(&self, j: &[usize], i: &[usize]) -> Option<i128> {
        j.iter()
            .zip(i)
            .try_fold(1i128, |acc, (&jp, &ip)| acc.checked_mul(self.k[jp][ip]))
    }

    fn multi_i64(&self, j: &[usize], i: &[usize]) -> Result<i64> {
        self.multi(j, i)
            .and_then(|v| i64::try_from(v).ok())
            .ok_or_else(|| Error::SizeGuard("LP coefficient does not fit in 64 bits".into()))
    }
}

fn nonzero_indices(s: usize, n_max: usize) -> Vec<MultiIndex> {
    all_indices(s, n_max).skip(1).collect()
}

/// The primal LP: one variable per member of `T` in rank order, one row per
/// nonzero `j` in rank order, integer coefficients `K_j(i)` and right-hand
/// sides `-K_j(0)`.
pub fn build_primal(params: &CodeParams) -> Result<LpProblem<i64>> {
    let n_max = params.group_width();
    let table = KrawTable::new(n_max, params.q())?;
    let small = SmallKraw::new(&table)?;
    let vars = enumerate_t(params).indices();
    let rows = nonzero_indices(params.groups(), n_max);
    let zero = vec![0; params.groups()];
    let mut matrix = Vec::with_capacity(vars.len() * rows.len());
    let mut rhs = Vec::with_capacity(rows.len());
    for j in &rows {
        for i in &vars {
            matrix.push(small.multi_i64(j.entries(), i.entries())?);
        }
        rhs.push(-small.multi_i64(j.entries(), &zero)?);
    }
    LpProblem::from_flat(vec![1; vars.len()], matrix, rhs)
}

/// Orbits of multi-indices under permutations of the repair groups.
#[derive(Debug, Clone)]
pub struct SymmetricLp {
    pub problem: LpProblem<i64>,
    /// Sorted representatives of the variable orbits, with orbit sizes.
    pub var_orbits: Vec<(MultiIndex, usize)>,
    /// Sorted representatives of the row orbits, with orbit sizes.
    pub row_orbits: Vec<(MultiIndex, usize)>,
}

fn orbits<'a>(indices: impl Iterator<Item = &'a MultiIndex>) -> Vec<(MultiIndex, Vec<MultiIndex>)> {
    let mut map: BTreeMap<MultiIndex, Vec<MultiIndex>> = BTreeMap::new();
    for i in indices {
        map.entry(i.sorted()).or_default().push(i.clone());
    }
    map.into_iter().collect()
}

/// The primal LP collapsed to one variable per orbit of `T` and one row per
/// orbit of nonzero `j`. A symmetric optimum of the full LP exists, so the
/// optimum is unchanged; the objective weight of an orbit is its size.
pub fn build_symmetric(params: &CodeParams) -> Result<SymmetricLp> {
    let n_max = params.group_width();
    let small = SmallKraw::new(&KrawTable::new(n_max, params.q())?)?;
    let vars = enumerate_t(params).indices();
    let rows = nonzero_indices(params.groups(), n_max);
    let var_orbits = orbits(vars.iter());
    let row_orbits = orbits(rows.iter());
    let zero = vec![0; params.groups()];
    let mut matrix = Vec::with_capacity(var_orbits.len() * row_orbits.len());
    let mut rhs = Vec::with_capacity(row_orbits.len());
    for (jrep, _) in &row_orbits {
        for (_, members) in &var_orbits {
            let mut acc = 0i64;
            for i in members {
                acc = acc
                    .checked_add(small.multi_i64(jrep.entries(), i.entries())?)
                    .ok_or_else(|| Error::SizeGuard("orbit sum overflows".into()))?;
            }
            matrix.push(acc);
        }
        rhs.push(-small.multi_i64(jrep.entries(), &zero)?);
    }
    let objective = var_orbits.iter().map(|(_, m)| m.len() as i64).collect();
    Ok(SymmetricLp {
        problem: LpProblem::from_flat(objective, matrix, rhs)?,
        var_orbits: var_orbits.into_iter().map(|(r, m)| (r, m.len())).collect(),
        row_orbits: row_orbits.into_iter().map(|(r, m)| (r, m.len())).collect(),
    })
}

/// Nonnegative Krawtchouk coefficients `f_j` over nonzero `j` (absent means 0).
#[derive(Debug, Clone, PartialEq)]
pub struct DualCertificate {
    pub coefficients: BTreeMap<MultiIndex, BigRational>,
}

impl DualCertificate {
    pub fn new(coefficients: BTreeMap<MultiIndex, BigRational>) -> Self {
        Self { coefficients }
    }

    pub fn zero() -> Self {
        Self::new(BTreeMap::new())
    }

    pub fn support(&self) -> usize {
        self.coefficients.values().filter(|c| !c.is_zero()).count()
    }

    pub fn to_witness(&self) -> WitnessValue {
        WitnessValue::Coefficients(
            self.coefficients
                .iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(j, c)| (j.clone(), c.clone()))
                .collect(),
        )
    }
}

/// Verifies `f_j >= 0` and `f(i) <= 0` for all `i ∈ T` exactly and returns
/// `f(0) = 1 + Σ f_j K_j(0)`, an upper bound on `|C|`.
pub fn check_dual_certificate(params: &CodeParams, cert: &DualCertificate) -> Result<BigRational> {
    let s = params.groups();
    let n_max = params.group_width();
    let table = KrawTable::new(n_max, params.q())?;
    let small = SmallKraw::new(&table)?;
    let mut support: Vec<(&MultiIndex, BigInt)> = Vec::new();
    let lcm = cert
        .coefficients
        .values()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    for (j, c) in &cert.coefficients {
        if j.len() != s || j.entries().iter().any(|&e| e > n_max) {
            return Err(Error::CertificateRejected {
                index: j.to_string(),
                reason: "not a multi-index of this scheme".into(),
            });
        }
        if j.is_zero() {
            return Err(Error::CertificateRejected {
                index: j.to_string(),
                reason: "the zero index carries the fixed constant 1".into(),
            });
        }
        if c.is_negative() {
            return Err(Error::CertificateRejected {
                index: j.to_string(),
                reason: format!("negative coefficient {c}"),
            });
        }
        if !c.is_zero() {
            support.push((j, (c * BigRational::from_integer(lcm.clone())).to_integer()));
        }
    }
    // L·f(i) = L + Σ F_j K_j(i) with integer F_j = L·f_j
    let small_f: Option<Vec<i128>> = support.iter().map(|(_, f)| f.to_i128()).collect();
    let lcm_small = lcm.to_i128();
    let scaled_value = |i: &[usize]| -> BigInt {
        if let (Some(fs), Some(l)) = (&small_f, lcm_small) {
            let mut acc = Some(l);
            for ((j, _), f) in support.iter().zip(fs) {
                acc = acc.and_then(|a| {
                    small
                        .multi(j.entries(), i)
                        .and_then(|k| k.checked_mul(*f))
                        .and_then(|t| a.checked_add(t))
                });
                if acc.is_none() {
                    break;
                }
            }
            if let Some(v) = acc {
                return BigInt::from(v);
            }
        }
        let mut acc = lcm.clone();
        for (j, f) in &support {
            let k = table
                .multi(j, &MultiIndex::new(i.to_vec(), n_max).unwrap())
                .unwrap();
            acc += f * k;
        }
        acc
    };
    let t = enumerate_t(params);
    for i in t.indices() {
        let v = scaled_value(i.entries());
        if v.is_positive() {
            return Err(Error::CertificateRejected {
                index: i.to_string(),
                reason: format!("f(i) = {} > 0", BigRational::new(v, lcm.clone())),
            });
        }
    }
    Ok(BigRational::new(scaled_value(&vec![0; s]), lcm))
}

/// How the LP is solved.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpMode {
    /// Exact rational simplex.
    Exact,
    /// Floating-point simplex followed by exact certification of the dual.
    Float,
    /// Certified float for `s >= 3`, exact otherwise.
    Auto,
}

impl LpMode {
    pub fn resolve(self, params: &CodeParams) -> SolveMode {
        match self {
            LpMode::Exact => SolveMode::Exact,
            LpMode::Float => SolveMode::Float,
            LpMode::Auto if params.groups() >= 3 => SolveMode::Float,
            LpMode::Auto => SolveMode::Exact,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LpOptions {
    pub mode: LpMode,
    /// Solve the LP reduced by the symmetry between repair groups; `None`
    /// reduces exactly when the solve runs in float mode.
    pub symmetric: Option<bool>,
}

impl LpOptions {
    pub fn uses_symmetry(&self, mode: SolveMode) -> bool {
        self.symmetric.unwrap_or(mode == SolveMode::Float)
    }
}

impl Default for LpOptions {
    fn default() -> Self {
        Self {
            mode: LpMode::Auto,
            symmetric: None,
        }
    }
}

/// Full outcome of an LP bound computation.
#[derive(Debug, Clone)]
pub struct LpOutcome {
    /// Certified upper bound on `|C|` (equal to `1 + optimum` in exact mode).
    pub cardinality: BigRational,
    pub certificate: DualCertificate,
    pub mode: SolveMode,
    pub pivots: usize,
    /// Optimal value reported by the solver (a float in float mode).
    pub solver_objective: f64,
}

/// Turns a floating dual into an exactly feasible one. The dual is rounded to
/// integers at a fixed scale and then divided by the smallest slack, which
/// restores `Σ_j f_j (-K_j(i)) >= 1` on every column exactly.
fn certify_float_dual(
    params: &CodeParams,
    rows: &[MultiIndex],
    dual: &[f64],
) -> Result<DualCertificate> {
    let ymax = dual.iter().cloned().fold(0.0f64, f64::max);
    if !(ymax > 0.0) || dual.iter().any(|y| !y.is_finite()) {
        return Err(Error::Internal("float dual is zero or not finite".into()));
    }
    let scale = 2f64.powi(52) / ymax;
    let g: Vec<i128> = dual
        .iter()
        .map(|&y| (y.max(0.0) * scale).round() as i128)
        .collect();
    let small = SmallKraw::new(&KrawTable::new(params.group_width(), params.q())?)?;
    let support: Vec<usize> = (0..g.len()).filter(|&j| g[j] != 0).collect();
    let mut min_slack: Option<i128> = None;
    for i in enumerate_t(params).indices() {
        let mut acc = 0i128;
        for &j in &support {
            let k = small
                .multi(rows[j].entries(), i.entries())
                .ok_or_else(|| Error::SizeGuard("certificate product overflows".into()))?;
            acc = k
                .checked_mul(g[j])
                .and_then(|t| acc.checked_sub(t))
                .ok_or_else(|| Error::SizeGuard("certificate sum overflows".into()))?;
        }
        min_slack = Some(min_slack.map_or(acc, |m| m.min(acc)));
    }
    let m = match min_slack {
        Some(m) if m > 0 => BigInt::from(m),
        None => BigInt::one(),
        Some(m) => {
            return Err(Error::CertificateRejected {
                index: "T".into(),
                reason: format!("rounded dual has nonpositive slack {m}"),
            })
        }
    };
    let coefficients = support
        .iter()
        .map(|&j| {
            (
                rows[j].clone(),
                BigRational::new(BigInt::from(g[j]), m.clone()),
            )
        })
        .collect();
    Ok(DualCertificate::new(coefficients))
}

/// Solves the LP and returns the certified cardinality bound and certificate.
pub fn solve_lp(params: &CodeParams, opts: LpOptions) -> Result<LpOutcome> {
    let s = params.groups();
    let n_max = params.group_width();
    let mode = opts.mode.resolve(params);
    if enumerate_t(params).is_empty() {
        // no admissible distance: only the trivial code
        return Ok(LpOutcome {
            cardinality: BigRational::one(),
            certificate: DualCertificate::zero(),
            mode,
            pivots: 0,
            solver_objective: 0.0,
        });
    }
    let rows = nonzero_indices(s, n_max);
    let (sol, dual_full): (
        ratlp::LpSolution,
        Box<dyn Fn(&ratlp::LpSolution) -> DualVec>,
    ) = if opts.uses_symmetry(mode) {
        let sym = build_symmetric(params)?;
        let sol = ratlp::solve_with(&sym.problem, mode, &SolveOptions::default())?;
        let row_pos: BTreeMap<MultiIndex, (usize, usize)> = sym
            .row_orbits
            .iter()
            .enumerate()
            .map(|(p, (rep, size))| (rep.clone(), (p, *size)))
            .collect();
        let lift_map: Vec<(usize, usize)> = rows.iter().map(|j| row_pos[&j.sorted()]).collect();
        let lift = move |sol: &ratlp::LpSolution| -> DualVec {
            match &sol.dual {
                ratlp::LpVector::Exact(y) => DualVec::Exact(
                    lift_map
                        .iter()
                        .map(|&(p, size)| &y[p] / BigRational::from_integer(BigInt::from(size)))
                        .collect(),
                ),
                ratlp::LpVector::Float(y) => DualVec::Float(
                    lift_map
                        .iter()
                        .map(|&(p, size)| y[p] / size as f64)
                        .collect(),
                ),
            }
        };
        (sol, Box::new(lift))
    } else {
        let problem = build_primal(params)?;
        let sol = ratlp::solve_with(&problem, mode, &SolveOptions::default())?;
        let plain = |sol: &ratlp::LpSolution| -> DualVec {
            match &sol.dual {
                ratlp::LpVector::Exact(y) => DualVec::Exact(y.clone()),
                ratlp::LpVector::Float(y) => DualVec::Float(y.clone()),
            }
        };
        (sol, Box::new(plain))
    };
    match sol.status {
        LpStatus::Optimal => {}
        other => return Err(Error::LpStatus(other.as_str())),
    }
    let objective = sol
        .objective
        .as_ref()
        .map(|o| o.to_f64())
        .unwrap_or(f64::NAN);
    let certificate = match dual_full(&sol) {
        DualVec::Exact(y) => DualCertificate::new(
            rows.iter()
                .zip(y)
                .filter(|(_, c)| !c.is_zero())
                .map(|(j, c)| (j.clone(), c))
                .collect(),
        ),
        DualVec::Float(y) => certify_float_dual(params, &rows, &y)?,
    };
    let cardinality = check_dual_certificate(params, &certificate)?;
    if let Some(ratlp::LpScalar::Exact(v)) = &sol.objective {
        if cardinality != BigRational::one() + v {
            return Err(Error::Internal(format!(
                "dual value {cardinality} differs from 1 + optimum {}",
                BigRational::one() + v
            )));
        }
    }
    Ok(LpOutcome {
        cardinality,
        certificate,
        mode,
        pivots: sol.pivots,
        solver_objective: objective,
    })
}

enum DualVec {
    Exact(Vec<BigRational>),
    Float(Vec<f64>),
}

/// `k <= ⌊log_q(1 + optimum)⌋`, with the comparison done exactly.
pub fn lp_dimension_bound(params: &CodeParams, opts: LpOptions) -> Result<BoundResult> {
    let out = solve_lp(params, opts)?;
    let k = floor_log(params.q(), &out.cardinality);
    let witness = Witness::default()
        .with("mode", WitnessValue::Text(out.mode.as_str().into()))
        .with(
            "symmetric",
            WitnessValue::Bool(opts.uses_symmetry(out.mode)),
        )
        .with(
            "cardinality_bound",
            WitnessValue::Rational(out.cardinality.clone()),
        )
        .with("pivots", WitnessValue::Int(out.pivots as i64))
        .with("certificate", out.certificate.to_witness());
    Ok(BoundResult::dimension(Method::Lp, k, witness))
}

/// `d = tN + ∂` with `1 <= ∂ <= N`.
pub fn split_distance(d: usize, n_max: usize) -> (usize, usize) {
    let t = (d - 1) / n_max;
    (t, d - t * n_max)
}

/// Krawtchouk coefficients of `q^{N-D+1} Π_{i=D}^{N} (1 - x/i)`:
/// `binom(N-k, D-1) / binom(N, D-1)` for `k = 0..=N`.
fn annihilator_coefficients(n_max: usize, dist: usize) -> Vec<BigRational> {
    let den = binomial(n_max, dist - 1);
    (0..=n_max)
        .map(|k| BigRational::new(binomial(n_max - k, dist - 1), den.clone()))
        .collect()
}

/// The product polynomial certifying the LP form of the Singleton bound:
/// `k <= r(s-t) + ρ - ∂` when `ρ <= ∂` and `k <= r(s-t)` otherwise.
pub fn singleton_certificate(params: &CodeParams) -> Result<(DualCertificate, BoundResult)> {
    let (s, n_max) = (params.groups(), params.group_width());
    let (r, rho, d) = (
        params.locality(),
        params.local_distance(),
        params.distance(),
    );
    let (t, part) = split_distance(d, n_max);
    let active = s - t;
    // per-group coefficient vectors; inactive groups carry the constant 1
    let trivial: Vec<BigRational> = (0..=n_max)
        .map(|k| {
            if k == 0 {
                BigRational::one()
            } else {
                BigRational::zero()
            }
        })
        .collect();
    let mut factors = vec![trivial; s];
    for (p, factor) in factors.iter_mut().enumerate().take(active) {
        let dist = if rho <= part && p == active - 1 {
            part
        } else {
            rho
        };
        *factor = annihilator_coefficients(n_max, dist);
    }
    let mut coefficients = BTreeMap::new();
    for j in all_indices(s, n_max).skip(1) {
        let c: BigRational = j
            .entries()
            .iter()
            .zip(&factors)
            .map(|(&jp, f)| f[jp].clone())
            .product();
        if !c.is_zero() {
            coefficients.insert(j, c);
        }
    }
    let cert = DualCertificate::new(coefficients);
    let expected_k = if rho <= part {
        r * active + rho - part
    } else {
        r * active
    };
    let value = check_dual_certificate(params, &cert)
        .map_err(|e| Error::Internal(format!("singleton certificate failed to verify: {e}")))?;
    let expected = BigRational::from_integer(num_traits::pow(BigInt::from(params.q()), expected_k));
    if value != expected {
        return Err(Error::Internal(format!(
            "singleton certificate value {value} differs from q^{expected_k}"
        )));
    }
    let witness = Witness::default()
        .with("t", WitnessValue::Int(t as i64))
        .with("partial", WitnessValue::Int(part as i64))
        .with("cardinality_bound", WitnessValue::Rational(value))
        .with("certificate", cert.to_witness());
    let result = BoundResult::dimension(Method::LpSingletonCert, expected_k as i64, witness);
    Ok((cert, result))
}
