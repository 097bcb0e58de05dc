//! Dense simplex solver for `maximize c·a  s.t.  A·a >= b, a >= 0`.
//!
//! The same dictionary-form simplex runs over exact rationals or over `f64`.
//! Pivot selection is Dantzig's rule, falling back to Bland's rule after a run
//! of degenerate pivots so that the method terminates. Problems whose origin
//! is infeasible go through a phase-1 solve with one auxiliary variable.

use std::fmt::{self, Debug, Write as _};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::model::fmt_rational;

/// Coefficient storage of an [`LpProblem`].
pub trait LpCoefficient: Clone + Debug + Send + Sync {
    fn to_f64(&self) -> f64;
    fn to_rational(&self) -> BigRational;
    /// Fast path for integral coefficients.
    fn as_i64(&self) -> Option<i64>;
}

impl LpCoefficient for i64 {
    fn to_f64(&self) -> f64 {
        *self as f64
    }
    fn to_rational(&self) -> BigRational {
        BigRational::from_integer(BigInt::from(*self))
    }
    fn as_i64(&self) -> Option<i64> {
        Some(*self)
    }
}

impl LpCoefficient for BigRational {
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn to_rational(&self) -> BigRational {
        self.clone()
    }
    fn as_i64(&self) -> Option<i64> {
        if self.is_integer() {
            self.to_integer().to_i64()
        } else {
            None
        }
    }
}

/// Dense LP in inequality form. Row `i` reads `Σ_j matrix[i][j]·a_j >= rhs[i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct LpProblem<C: LpCoefficient = BigRational> {
    objective: Vec<C>,
    matrix: Vec<C>,
    rhs: Vec<C>,
}

impl<C: LpCoefficient> LpProblem<C> {
    pub fn new(objective: Vec<C>, rows: Vec<Vec<C>>, rhs: Vec<C>) -> Result<Self> {
        let n = objective.len();
        if rows.len() != rhs.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} constraint rows but {} right-hand sides",
                rows.len(),
                rhs.len()
            )));
        }
        let mut matrix = Vec::with_capacity(rows.len() * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} coefficients, expected {n}",
                    row.len()
                )));
            }
            matrix.extend(row);
        }
        Self::from_flat(objective, matrix, rhs)
    }

    /// Row-major constructor.
    pub fn from_flat(objective: Vec<C>, matrix: Vec<C>, rhs: Vec<C>) -> Result<Self> {
        if matrix.len() != objective.len() * rhs.len() {
            return Err(Error::DimensionMismatch(format!(
                "matrix has {} entries, expected {}x{}",
                matrix.len(),
                rhs.len(),
                objective.len()
            )));
        }
        let finite = |c: &C| c.to_f64().is_finite() || c.as_i64().is_some();
        if !(objective.iter().all(finite) && matrix.iter().all(finite) && rhs.iter().all(finite)) {
            return Err(Error::InvalidParams("non-finite LP coefficient".into()));
        }
        Ok(Self {
            objective,
            matrix,
            rhs,
        })
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn num_rows(&self) -> usize {
        self.rhs.len()
    }

    pub fn objective(&self) -> &[C] {
        &self.objective
    }

    pub fn rhs(&self) -> &[C] {
        &self.rhs
    }

    pub fn row(&self, i: usize) -> &[C] {
        let n = self.num_vars();
        &self.matrix[i * n..(i + 1) * n]
    }

    pub fn coef(&self, i: usize, j: usize) -> &C {
        &self.matrix[i * self.num_vars() + j]
    }

    /// Plain-text dump: `max <nvars> <nrows>`, the objective row, then one
    /// line per constraint terminated by `>= rhs`. Every number is `p/q`.
    pub fn dump(&self) -> String {
        let fmt = |c: &C| {
            let r = c.to_rational();
            format!("{}/{}", r.numer(), r.denom())
        };
        let mut out = String::new();
        let _ = writeln!(out, "max {} {}", self.num_vars(), self.num_rows());
        let obj: Vec<String> = self.objective.iter().map(fmt).collect();
        let _ = writeln!(out, "{}", obj.join(" "));
        for i in 0..self.num_rows() {
            let row: Vec<String> = self.row(i).iter().map(fmt).collect();
            let _ = writeln!(out, "{} >= {}", row.join(" "), fmt(&self.rhs[i]));
        }
        out
    }

    /// Converts the coefficients to exact rationals.
    pub fn to_rational(&self) -> LpProblem<BigRational> {
        LpProblem {
            objective: self.objective.iter().map(C::to_rational).collect(),
            matrix: self.matrix.iter().map(C::to_rational).collect(),
            rhs: self.rhs.iter().map(C::to_rational).collect(),
        }
    }
}

impl LpProblem<BigRational> {
    /// Parses the format written by [`LpProblem::dump`].
    pub fn parse_dump(text: &str) -> Result<Self> {
        let bad = |line: usize, msg: &str| Error::DataFile {
            path: "<lp dump>".into(),
            line,
            msg: msg.into(),
        };
        let parse_q = |line: usize, tok: &str| -> Result<BigRational> {
            let (p, q) = tok.split_once('/').unwrap_or((tok, "1"));
            let p: BigInt = p.parse().map_err(|_| bad(line, "bad numerator"))?;
            let q: BigInt = q.parse().map_err(|_| bad(line, "bad denominator"))?;
            if q.is_zero() {
                return Err(bad(line, "zero denominator"));
            }
            Ok(BigRational::new(p, q))
        };
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or_else(|| bad(1, "empty dump"))?;
        let mut it = header.split_whitespace();
        if it.next() != Some("max") {
            return Err(bad(1, "expected 'max <nvars> <nrows>'"));
        }
        let n: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| bad(1, "nvars"))?;
        let m: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| bad(1, "nrows"))?;
        let (_, obj_line) = lines.next().ok_or_else(|| bad(2, "missing objective"))?;
        let objective = obj_line
            .split_whitespace()
            .map(|t| parse_q(2, t))
            .collect::<Result<Vec<_>>>()?;
        let mut rows = Vec::with_capacity(m);
        let mut rhs = Vec::with_capacity(m);
        for (idx, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            let (lhs, r) = line
                .split_once(">=")
                .ok_or_else(|| bad(idx + 1, "missing '>='"))?;
            rows.push(
                lhs.split_whitespace()
                    .map(|t| parse_q(idx + 1, t))
                    .collect::<Result<Vec<_>>>()?,
            );
            rhs.push(parse_q(idx + 1, r.trim())?);
        }
        if objective.len() != n || rows.len() != m {
            return Err(bad(1, "header does not match body"));
        }
        Self::new(objective, rows, rhs)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMode {
    Exact,
    Float,
}

impl SolveMode {
    pub fn as_str(self) -> &'static str {
        match self {
            SolveMode::Exact => "exact",
            SolveMode::Float => "float",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

impl LpStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            LpStatus::Optimal => "optimal",
            LpStatus::Infeasible => "infeasible",
            LpStatus::Unbounded => "unbounded",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpVector {
    Exact(Vec<BigRational>),
    Float(Vec<f64>),
}

impl LpVector {
    pub fn to_f64(&self) -> Vec<f64> {
        match self {
            LpVector::Exact(v) => v
                .iter()
                .map(|x| ToPrimitive::to_f64(x).unwrap_or(f64::NAN))
                .collect(),
            LpVector::Float(v) => v.clone(),
        }
    }

    pub fn exact(&self) -> Option<&[BigRational]> {
        match self {
            LpVector::Exact(v) => Some(v),
            LpVector::Float(_) => None,
        }
    }
}

/// Result of [`solve`]. The dual vector has one entry per constraint row and
/// satisfies `Σ_i y_i·(-A_ij) >= c_j`, `y >= 0`; its objective is `-b·y`.
#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    pub mode: SolveMode,
    pub objective: Option<LpScalar>,
    pub primal: LpVector,
    pub dual: LpVector,
    pub pivots: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpScalar {
    Exact(BigRational),
    Float(f64),
}

impl LpScalar {
    pub fn to_f64(&self) -> f64 {
        match self {
            LpScalar::Exact(r) => ToPrimitive::to_f64(r).unwrap_or(f64::NAN),
            LpScalar::Float(x) => *x,
        }
    }
}

impl fmt::Display for LpScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LpScalar::Exact(r) => f.write_str(&fmt_rational(r)),
            LpScalar::Float(x) => write!(f, "{x}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PivotRule {
    /// Smallest-index entering and leaving variables throughout.
    Bland,
    /// Largest reduced cost; switches to Bland's rule after a run of
    /// degenerate pivots until the objective strictly improves.
    Dantzig,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    pub rule: PivotRule,
    pub max_pivots: usize,
    /// Pivot and feasibility tolerance in float mode.
    pub tolerance: f64,
    /// Consecutive degenerate pivots before falling back to Bland's rule.
    pub degenerate_run: usize,
    /// In exact mode, first solve in floats and rebuild the final basis
    /// exactly; the exact simplex runs only if that basis fails to verify.
    pub crossover: bool,
    /// Float mode rebuilds the dictionary from the problem data after this
    /// many pivots (0 disables).
    pub refactor_every: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            rule: PivotRule::Dantzig,
            max_pivots: 200_000,
            tolerance: 1e-9,
            degenerate_run: 20,
            crossover: true,
            refactor_every: 50,
        }
    }
}

/// Arithmetic needed by the tableau.
trait Field:
    Clone
    + Debug
    + PartialOrd
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + for<'a> Div<&'a Self, Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_coef<C: LpCoefficient>(c: &C) -> Self;
    fn from_f64(x: f64) -> Self;
    fn is_pos(&self, tol: f64) -> bool;
    fn is_neg(&self, tol: f64) -> bool;
    fn is_nonzero(&self) -> bool;
    fn magnitude(&self) -> f64;
    const EXACT: bool;
}

impl Field for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_coef<C: LpCoefficient>(c: &C) -> Self {
        c.to_f64()
    }
    fn from_f64(x: f64) -> Self {
        x
    }
    fn is_pos(&self, tol: f64) -> bool {
        *self > tol
    }
    fn is_neg(&self, tol: f64) -> bool {
        *self < -tol
    }
    fn is_nonzero(&self) -> bool {
        *self != 0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
    const EXACT: bool = false;
}

impl Field for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_coef<C: LpCoefficient>(c: &C) -> Self {
        c.to_rational()
    }
    fn from_f64(x: f64) -> Self {
        BigRational::from_float(x).expect("finite row scale")
    }
    fn is_pos(&self, _tol: f64) -> bool {
        self.is_positive()
    }
    fn is_neg(&self, _tol: f64) -> bool {
        self.is_negative()
    }
    fn is_nonzero(&self) -> bool {
        !self.is_zero()
    }
    fn magnitude(&self) -> f64 {
        ToPrimitive::to_f64(&self.abs()).unwrap_or(f64::INFINITY)
    }
    const EXACT: bool = true;
}

/// Dictionary `x_B[i] = beta_i - Σ_j alpha_ij x_N[j]` plus objective rows
/// `z = z0 - Σ_j w_j x_N[j]` stored the same way.
#[derive(Clone)]
struct Tableau<F> {
    rows: usize,
    cols: usize,
    /// (rows + objective rows) x (cols + 1), last column is beta.
    data: Vec<F>,
    basic: Vec<usize>,
    nonbasic: Vec<usize>,
    constraint_rows: usize,
}

impl<F: Field> Tableau<F> {
    fn width(&self) -> usize {
        self.cols + 1
    }

    fn at(&self, i: usize, j: usize) -> &F {
        &self.data[i * self.width() + j]
    }

    fn beta(&self, i: usize) -> &F {
        self.at(i, self.cols)
    }

    fn pivot(&mut self, r: usize, e: usize) {
        let w = self.width();
        let a = self.data[r * w + e].clone();
        let inv = F::one() / &a;
        for j in 0..w {
            if j != e {
                let v = self.data[r * w + j].clone() * &inv;
                self.data[r * w + j] = v;
            }
        }
        self.data[r * w + e] = inv.clone();
        let pivot_row: Vec<F> = self.data[r * w..(r + 1) * w].to_vec();
        for i in 0..self.rows {
            if i == r {
                continue;
            }
            let f = self.data[i * w + e].clone();
            if !f.is_nonzero() {
                continue;
            }
            for (j, pr) in pivot_row.iter().enumerate() {
                if j != e && pr.is_nonzero() {
                    let v = self.data[i * w + j].clone() - &(f.clone() * pr);
                    self.data[i * w + j] = v;
                }
            }
            self.data[i * w + e] = -(f * &inv);
        }
        std::mem::swap(&mut self.basic[r], &mut self.nonbasic[e]);
    }

    /// Pivots the structural variables of `target` into the basis, choosing
    /// the largest available pivot each time. Fails when the resulting basis
    /// is singular or not primal feasible within `tol`.
    fn warm_start(&mut self, target: &[usize], tol: f64, pivots: &mut usize) -> Result<()> {
        // without an auxiliary column, slack labels start right after the structurals
        let slack_start = self.cols;
        let mut in_target = vec![false; slack_start + self.constraint_rows];
        for &v in target {
            in_target[v] = true;
        }
        for &var in target.iter().filter(|&&v| v < slack_start) {
            let Some(e) = self.nonbasic.iter().position(|&v| v == var) else {
                continue;
            };
            let mut best: Option<(usize, f64)> = None;
            for i in 0..self.constraint_rows {
                let b = self.basic[i];
                if b < slack_start || in_target[b] {
                    continue;
                }
                let mag = self.at(i, e).magnitude();
                if mag > 0.0 && best.is_none_or(|(_, m)| mag > m) {
                    best = Some((i, mag));
                }
            }
            let (r, _) =
                best.ok_or_else(|| Error::Internal("warm-start basis is singular".into()))?;
            self.pivot(r, e);
            *pivots += 1;
        }
        if (0..self.constraint_rows).any(|i| self.beta(i).is_neg(tol)) {
            return Err(Error::Internal(
                "warm-start basis is not primal feasible".into(),
            ));
        }
        Ok(())
    }

    /// Runs simplex on objective row `obj`. Columns in `blocked` never enter.
    fn optimize(
        &mut self,
        obj: usize,
        blocked: Option<usize>,
        opts: &SolveOptions,
        pivots: &mut usize,
        budget: Option<usize>,
        degenerate: &mut usize,
    ) -> Result<Outcome> {
        let tol = opts.tolerance;
        let mut taken = 0usize;
        loop {
            if budget.is_some_and(|b| taken >= b) {
                return Ok(Outcome::Budget);
            }
            let use_bland = opts.rule == PivotRule::Bland || *degenerate >= opts.degenerate_run;
            let mut enter: Option<usize> = None;
            for j in 0..self.cols {
                if Some(j) == blocked {
                    continue;
                }
                let wj = self.at(obj, j);
                if !wj.is_neg(tol) {
                    continue;
                }
                enter = match enter {
                    None => Some(j),
                    Some(best) => {
                        let better = if use_bland {
                            self.nonbasic[j] < self.nonbasic[best]
                        } else {
                            wj < self.at(obj, best)
                        };
                        Some(if better { j } else { best })
                    }
                };
            }
            let Some(e) = enter else {
                return Ok(Outcome::Optimal);
            };
            let mut leave: Option<(usize, F)> = None;
            let harris = !F::EXACT && !use_bland;
            if harris {
                leave = self.harris_row(e, tol);
            }
            for i in (0..self.constraint_rows).filter(|_| !harris) {
                let a = self.at(i, e);
                if !a.is_pos(tol) {
                    continue;
                }
                let b = self.beta(i).clone();
                let b = if b.is_neg(0.0) { F::zero() } else { b };
                let ratio = b / a;
                leave = match leave {
                    None => Some((i, ratio)),
                    Some((bi, br)) => {
                        // ties (within tolerance in float mode) go to the smaller label
                        let take = if (br.clone() - &ratio).is_pos(tol) {
                            true
                        } else if (ratio.clone() - &br).is_pos(tol) {
                            false
                        } else {
                            self.basic[i] < self.basic[bi]
                        };
                        if take {
                            Some((i, ratio))
                        } else {
                            Some((bi, br))
                        }
                    }
                };
            }
            let Some((r, ratio)) = leave else {
                return Ok(Outcome::Unbounded);
            };
            taken += 1;
            if ratio.is_pos(tol) {
                *degenerate = 0;
            } else {
                *degenerate += 1;
            }
            *pivots += 1;
            if *pivots > opts.max_pivots {
                return Err(Error::IterationLimit(opts.max_pivots));
            }
            self.pivot(r, e);
        }
    }
}

impl<F: Field> Tableau<F> {
    /// Two-pass ratio test: among rows whose ratio is within `tol` of the
    /// minimum, take the one with the largest pivot entry.
    fn harris_row(&self, e: usize, tol: f64) -> Option<(usize, F)> {
        let mut bound = f64::INFINITY;
        for i in 0..self.constraint_rows {
            let a = self.at(i, e).magnitude();
            if self.at(i, e).is_pos(tol) {
                let b = if self.beta(i).is_neg(0.0) {
                    0.0
                } else {
                    self.beta(i).magnitude()
                };
                bound = bound.min((b + tol) / a);
            }
        }
        let mut best: Option<(usize, f64)> = None;
        for i in 0..self.constraint_rows {
            if !self.at(i, e).is_pos(tol) {
                continue;
            }
            let a = self.at(i, e).magnitude();
            let b = if self.beta(i).is_neg(0.0) {
                0.0
            } else {
                self.beta(i).magnitude()
            };
            if b / a <= bound && best.is_none_or(|(_, m)| a > m) {
                best = Some((i, a));
            }
        }
        best.map(|(i, _)| {
            let b = if self.beta(i).is_neg(0.0) {
                F::zero()
            } else {
                self.beta(i).clone()
            };
            (i, b / self.at(i, e))
        })
    }
}

enum Outcome {
    Optimal,
    Unbounded,
    /// The pivot budget ran out first.
    Budget,
}

struct RawSolution<F> {
    status: LpStatus,
    objective: F,
    primal: Vec<F>,
    dual: Vec<F>,
    pivots: usize,
    /// Labels of the basic variables at termination (slack of row `i` is `n + i`).
    basis: Vec<usize>,
}

fn simplex<F: Field, C: LpCoefficient>(
    problem: &LpProblem<C>,
    scaling: Option<&Scaling>,
    opts: &SolveOptions,
    warm: Option<&[usize]>,
) -> Result<RawSolution<F>> {
    let n = problem.num_vars();
    let m = problem.num_rows();
    let tol = opts.tolerance;
    // `A a >= b`  <=>  `-A a <= -b`; slack s_i = -b_i + Σ A_ij a_j.
    let scale = |i: usize| -> F {
        match scaling {
            Some(s) => F::from_f64(s.rows[i]),
            None => F::one(),
        }
    };
    // variable j of the tableau is a_j / col_scale(j)
    let col_scale = |j: usize| -> F {
        match scaling {
            Some(s) => F::from_f64(s.cols[j]),
            None => F::one(),
        }
    };
    let rhs: Vec<F> = (0..m)
        .map(|i| -(F::from_coef(&problem.rhs[i]) * &scale(i)))
        .collect();
    let needs_phase1 = rhs.iter().any(|b| b.is_neg(tol));
    let cols = n + usize::from(needs_phase1);
    let obj_rows = 1 + usize::from(needs_phase1);
    let width = cols + 1;
    let mut data = Vec::with_capacity((m + obj_rows) * width);
    for i in 0..m {
        let s = scale(i);
        for j in 0..n {
            data.push(-(F::from_coef(problem.coef(i, j)) * &s * &col_scale(j)));
        }
        if needs_phase1 {
            data.push(-F::one());
        }
        data.push(rhs[i].clone());
    }
    for j in 0..n {
        data.push(-(F::from_coef(&problem.objective[j]) * &col_scale(j)));
    }
    if needs_phase1 {
        data.push(F::zero());
    }
    data.push(F::zero());
    let aux_label = n + m;
    if needs_phase1 {
        for _ in 0..n {
            data.push(F::zero());
        }
        data.push(F::one());
        data.push(F::zero());
    }
    let mut nonbasic: Vec<usize> = (0..n).collect();
    if needs_phase1 {
        nonbasic.push(aux_label);
    }
    let mut tab = Tableau {
        rows: m + obj_rows,
        cols,
        data,
        basic: (n..n + m).collect(),
        nonbasic,
        constraint_rows: m,
    };
    let mut pivots = 0usize;
    let obj_row = m;
    if needs_phase1 {
        let aux_row = m + 1;
        let aux_col = n;
        // most negative beta leaves, auxiliary enters
        let mut r = 0;
        for i in 1..m {
            if tab.beta(i) < tab.beta(r) {
                r = i;
            }
        }
        tab.pivot(r, aux_col);
        pivots += 1;
        if let Outcome::Budget = tab.optimize(aux_row, None, opts, &mut pivots, None, &mut 0)? {
            unreachable!("no budget in phase 1");
        }
        if tab.beta(aux_row).is_neg(tol) {
            return Ok(RawSolution {
                status: LpStatus::Infeasible,
                objective: F::zero(),
                primal: vec![F::zero(); n],
                dual: vec![F::zero(); m],
                pivots,
                basis: tab.basic.clone(),
            });
        }
        // drive the auxiliary variable out of the basis if it is still there
        if let Some(r) = tab.basic.iter().position(|&b| b == aux_label) {
            let mut best: Option<usize> = None;
            for j in 0..tab.cols {
                let a = tab.at(r, j);
                if a.is_pos(tol) || a.is_neg(tol) {
                    best = match best {
                        None => Some(j),
                        Some(b) => {
                            let abs = |x: &F| if x.is_neg(0.0) { -x.clone() } else { x.clone() };
                            if abs(a) > abs(tab.at(r, b)) {
                                Some(j)
                            } else {
                                Some(b)
                            }
                        }
                    };
                }
            }
            match best {
                Some(j) => {
                    tab.pivot(r, j);
                    pivots += 1;
                }
                None => {
                    return Err(Error::Internal(
                        "auxiliary variable stuck in basis after phase 1".into(),
                    ))
                }
            }
        }
        // drop the auxiliary column and the phase-1 objective row
        let e = tab
            .nonbasic
            .iter()
            .position(|&v| v == aux_label)
            .ok_or_else(|| Error::Internal("auxiliary variable missing after phase 1".into()))?;
        let old_w = tab.width();
        let mut data = Vec::with_capacity((m + 1) * (old_w - 1));
        for i in 0..m + 1 {
            for j in 0..old_w {
                if j != e {
                    data.push(tab.data[i * old_w + j].clone());
                }
            }
        }
        tab.nonbasic.remove(e);
        tab.data = data;
        tab.cols -= 1;
        tab.rows = m + 1;
    }
    if let (Some(target), false) = (warm, needs_phase1) {
        tab.warm_start(target, 0.0, &mut pivots)?;
    }
    // float solves periodically rebuild the dictionary from the original data
    let fresh =
        (scaling.is_some() && !needs_phase1 && opts.refactor_every > 0).then(|| tab.clone());
    let budget = fresh.as_ref().map(|_| opts.refactor_every);
    let mut refreshed_at_optimum = false;
    let mut degenerate = 0;
    let bounded = loop {
        match tab.optimize(obj_row, None, opts, &mut pivots, budget, &mut degenerate)? {
            Outcome::Unbounded => break false,
            Outcome::Optimal if refreshed_at_optimum || fresh.is_none() => break true,
            outcome => {
                refreshed_at_optimum = matches!(outcome, Outcome::Optimal);
                let mut rebuilt = fresh.clone().expect("refresh only with a saved dictionary");
                let mut extra = 0;
                if rebuilt.warm_start(&tab.basic, tol, &mut extra).is_ok() {
                    tab = rebuilt;
                } else if refreshed_at_optimum {
                    break true;
                }
            }
        }
    };
    if !bounded {
        return Ok(RawSolution {
            status: LpStatus::Unbounded,
            objective: F::zero(),
            primal: vec![F::zero(); n],
            dual: vec![F::zero(); m],
            pivots,
            basis: tab.basic.clone(),
        });
    }
    let mut primal = vec![F::zero(); n];
    for (i, &b) in tab.basic.iter().enumerate() {
        if b < n {
            primal[b] = tab.beta(i).clone() * &col_scale(b);
        }
    }
    let mut dual = vec![F::zero(); m];
    for (j, &v) in tab.nonbasic.iter().enumerate() {
        if (n..n + m).contains(&v) {
            let i = v - n;
            dual[i] = tab.at(obj_row, j).clone() * &scale(i);
        }
    }
    Ok(RawSolution {
        status: LpStatus::Optimal,
        objective: tab.beta(obj_row).clone(),
        primal,
        dual,
        pivots,
        basis: tab.basic.clone(),
    })
}

/// Solves `M x = rhs` exactly by Gauss-Jordan elimination; `None` if singular.
fn solve_square(
    mut m: Vec<Vec<BigRational>>,
    mut rhs: Vec<BigRational>,
) -> Option<Vec<BigRational>> {
    let size = rhs.len();
    for col in 0..size {
        let p = (col..size).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, p);
        rhs.swap(col, p);
        let inv = m[col][col].recip();
        for v in m[col][col..].iter_mut() {
            *v *= &inv;
        }
        rhs[col] *= &inv;
        let (head, tail) = m.split_at_mut(col + 1);
        let pivot_row = &head[col];
        let pivot_rhs = rhs[col].clone();
        for (off, row) in tail.iter_mut().enumerate() {
            let f = row[col].clone();
            if f.is_zero() {
                continue;
            }
            for (v, pv) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
            rhs[col + 1 + off] -= &f * &pivot_rhs;
        }
    }
    for col in (0..size).rev() {
        let x = rhs[col].clone();
        for r in 0..col {
            if !m[r][col].is_zero() {
                let t = &m[r][col] * &x;
                rhs[r] -= t;
            }
        }
    }
    Some(rhs)
}

/// Exact primal and dual solutions for a given basis, or `None` when the
/// basis is singular. Optimality is not checked here.
fn basis_solution<C: LpCoefficient>(problem: &LpProblem<C>, basis: &[usize]) -> Option<LpSolution> {
    let n = problem.num_vars();
    let m = problem.num_rows();
    let mut structural: Vec<usize> = basis.iter().copied().filter(|&b| b < n).collect();
    structural.sort_unstable();
    let slack_basic: Vec<bool> = {
        let mut v = vec![false; m];
        for &b in basis.iter().filter(|&&b| b >= n) {
            v[b - n] = true;
        }
        v
    };
    let tight: Vec<usize> = (0..m).filter(|&i| !slack_basic[i]).collect();
    if tight.len() != structural.len() {
        return None;
    }
    let mat: Vec<Vec<BigRational>> = tight
        .iter()
        .map(|&i| {
            structural
                .iter()
                .map(|&j| problem.coef(i, j).to_rational())
                .collect()
        })
        .collect();
    let b: Vec<BigRational> = tight
        .iter()
        .map(|&i| problem.rhs[i].to_rational())
        .collect();
    let x = solve_square(mat.clone(), b)?;
    let transposed: Vec<Vec<BigRational>> = (0..structural.len())
        .map(|c| {
            tight
                .iter()
                .enumerate()
                .map(|(r, _)| -mat[r][c].clone())
                .collect()
        })
        .collect();
    let c: Vec<BigRational> = structural
        .iter()
        .map(|&j| problem.objective[j].to_rational())
        .collect();
    let y_tight = solve_square(transposed, c)?;
    let mut primal = vec![<BigRational as Zero>::zero(); n];
    for (&j, v) in structural.iter().zip(x) {
        primal[j] = v;
    }
    let mut dual = vec![<BigRational as Zero>::zero(); m];
    for (&i, v) in tight.iter().zip(y_tight) {
        dual[i] = v;
    }
    let objective: BigRational = (0..n)
        .map(|j| problem.objective[j].to_rational() * &primal[j])
        .sum();
    Some(LpSolution {
        status: LpStatus::Optimal,
        mode: SolveMode::Exact,
        objective: Some(LpScalar::Exact(objective)),
        primal: LpVector::Exact(primal),
        dual: LpVector::Exact(dual),
        pivots: 0,
    })
}

/// Row equilibration factors that make the float tolerance meaningful.
/// Power-of-two row and column factors that equilibrate the constraint
/// matrix; scaling by them is exact in floating point.
struct Scaling {
    rows: Vec<f64>,
    cols: Vec<f64>,
}

fn pow2_near(x: f64) -> f64 {
    if x > 0.0 && x.is_finite() {
        2f64.powi(x.log2().round() as i32)
    } else {
        1.0
    }
}

/// Alternating geometric-mean scaling of rows and columns.
fn scaling<C: LpCoefficient>(problem: &LpProblem<C>) -> Scaling {
    let (m, n) = (problem.num_rows(), problem.num_vars());
    let abs: Vec<Vec<f64>> = (0..m)
        .map(|i| problem.row(i).iter().map(|c| c.to_f64().abs()).collect())
        .collect();
    let mut rows = vec![1.0; m];
    let mut cols = vec![1.0; n];
    let geo = |vals: &mut dyn Iterator<Item = f64>| -> f64 {
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for v in vals.filter(|v| *v > 0.0) {
            lo = lo.min(v);
            hi = hi.max(v);
        }
        if hi > 0.0 {
            1.0 / (lo * hi).sqrt()
        } else {
            1.0
        }
    };
    for _ in 0..8 {
        for i in 0..m {
            rows[i] = pow2_near(geo(&mut (0..n).map(|j| abs[i][j] * cols[j])));
        }
        for j in 0..n {
            cols[j] = pow2_near(geo(&mut (0..m).map(|i| abs[i][j] * rows[i])));
        }
    }
    // finish with unit row maxima
    for i in 0..m {
        let mx = (0..n).map(|j| abs[i][j] * cols[j]).fold(0.0, f64::max);
        if mx > 0.0 {
            rows[i] = pow2_near(1.0 / mx);
        }
    }
    Scaling { rows, cols }
}

/// Solves with default options.
pub fn solve<C: LpCoefficient>(problem: &LpProblem<C>, mode: SolveMode) -> Result<LpSolution> {
    solve_with(problem, mode, &SolveOptions::default())
}

pub fn solve_with<C: LpCoefficient>(
    problem: &LpProblem<C>,
    mode: SolveMode,
    opts: &SolveOptions,
) -> Result<LpSolution> {
    match mode {
        SolveMode::Exact => {
            let mut warm_basis: Option<Vec<usize>> = None;
            if opts.crossover {
                let scales = scaling(problem);
                // tighter tolerances resolve near-degenerate reduced costs
                for tol in [opts.tolerance, opts.tolerance * 1e-3, opts.tolerance * 1e-6] {
                    let float_opts = SolveOptions {
                        tolerance: tol,
                        ..*opts
                    };
                    let Ok(raw) = simplex::<f64, C>(problem, Some(&scales), &float_opts, None)
                    else {
                        continue;
                    };
                    if raw.status != LpStatus::Optimal {
                        continue;
                    }
                    if let Some(mut sol) = basis_solution(problem, &raw.basis) {
                        sol.pivots = raw.pivots;
                        if verify_exact(problem, &sol).is_ok() {
                            return Ok(sol);
                        }
                    }
                    warm_basis.get_or_insert(raw.basis);
                }
            }
            let raw: RawSolution<BigRational> = match warm_basis
                .as_deref()
                .map(|b| simplex(problem, None, opts, Some(b)))
            {
                Some(Ok(raw)) => raw,
                _ => simplex(problem, None, opts, None)?,
            };
            let sol = LpSolution {
                status: raw.status,
                mode,
                objective: (raw.status == LpStatus::Optimal)
                    .then(|| LpScalar::Exact(raw.objective.clone())),
                primal: LpVector::Exact(raw.primal),
                dual: LpVector::Exact(raw.dual),
                pivots: raw.pivots,
            };
            if sol.status == LpStatus::Optimal {
                verify_exact(problem, &sol)?;
            }
            Ok(sol)
        }
        SolveMode::Float => {
            let scales = scaling(problem);
            let raw: RawSolution<f64> = simplex(problem, Some(&scales), opts, None)?;
            Ok(LpSolution {
                status: raw.status,
                mode,
                objective: (raw.status == LpStatus::Optimal)
                    .then_some(LpScalar::Float(raw.objective)),
                primal: LpVector::Float(raw.primal),
                dual: LpVector::Float(raw.dual),
                pivots: raw.pivots,
            })
        }
    }
}

/// Re-checks an exact optimal solution: primal feasibility, dual feasibility
/// and a zero duality gap, all from the original problem data.
pub fn verify_exact<C: LpCoefficient>(problem: &LpProblem<C>, sol: &LpSolution) -> Result<()> {
    let (Some(x), Some(y)) = (sol.primal.exact(), sol.dual.exact()) else {
        return Err(Error::Internal(
            "verify_exact needs an exact solution".into(),
        ));
    };
    let n = problem.num_vars();
    let m = problem.num_rows();
    if x.iter().any(Signed::is_negative) {
        return Err(Error::Internal(
            "primal solution has a negative entry".into(),
        ));
    }
    for i in 0..m {
        let lhs: BigRational = (0..n)
            .map(|j| problem.coef(i, j).to_rational() * &x[j])
            .sum();
        if lhs < problem.rhs[i].to_rational() {
            return Err(Error::Internal(format!("primal row {i} violated")));
        }
    }
    let dual_obj = certify(problem, y)?;
    let primal_obj: BigRational = (0..n)
        .map(|j| problem.objective[j].to_rational() * &x[j])
        .sum();
    if primal_obj != dual_obj {
        return Err(Error::Internal(format!(
            "duality gap: primal {} vs dual {}",
            fmt_rational(&primal_obj),
            fmt_rational(&dual_obj)
        )));
    }
    match &sol.objective {
        Some(LpScalar::Exact(v)) if *v == primal_obj => Ok(()),
        _ => Err(Error::Internal(
            "reported objective differs from c·a".into(),
        )),
    }
}

/// Weak-duality bound: checks `y >= 0` and `Σ_i y_i (-A_ij) >= c_j` for every
/// column and returns `-b·y`, an upper bound on the primal optimum.
pub fn certify<C: LpCoefficient>(
    problem: &LpProblem<C>,
    dual: &[BigRational],
) -> Result<BigRational> {
    let n = problem.num_vars();
    let m = problem.num_rows();
    if dual.len() != m {
        return Err(Error::DimensionMismatch(format!(
            "dual has {} entries, problem has {m} rows",
            dual.len()
        )));
    }
    if let Some(i) = dual.iter().position(Signed::is_negative) {
        return Err(Error::InvalidParams(format!("dual entry {i} is negative")));
    }
    // common denominator keeps the column sums in integers
    let lcm = dual.iter().fold(BigInt::one(), |acc, y| acc.lcm(y.denom()));
    let scaled: Vec<BigInt> = dual
        .iter()
        .map(|y| (y * BigRational::from_integer(lcm.clone())).to_integer())
        .collect();
    let support: Vec<usize> = (0..m).filter(|&i| !scaled[i].is_zero()).collect();
    let all_integral = problem.matrix.iter().all(|c| c.as_i64().is_some());
    for j in 0..n {
        let sum: BigRational = if all_integral {
            let mut acc = BigInt::zero();
            for &i in &support {
                acc -= &scaled[i] * problem.coef(i, j).as_i64().unwrap_or(0);
            }
            BigRational::new(acc, lcm.clone())
        } else {
            support
                .iter()
                .map(|&i| -(problem.coef(i, j).to_rational() * &dual[i]))
                .sum()
        };
        if sum < problem.objective[j].to_rational() {
            return Err(Error::DualInfeasible { column: j });
        }
    }
    Ok(support
        .iter()
        .map(|&i| -(problem.rhs[i].to_rational() * &dual[i]))
        .sum())
}

/// Closest rational to `x` with denominator at most `max_den` (continued
/// fraction convergents and semiconvergents).
pub fn best_rational(x: f64, max_den: u64) -> BigRational {
    assert!(x.is_finite(), "cannot rationalize a non-finite value");
    let exact = BigRational::from_float(x).unwrap_or_else(<BigRational as Zero>::zero);
    let max_den = BigInt::from(max_den.max(1));
    // convergents h/k of the exact dyadic value
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    let mut rest = exact.clone();
    loop {
        let a = rest.floor().to_integer();
        let h2 = &a * &h1 + &h0;
        let k2 = &a * &k1 + &k0;
        if k2 > max_den {
            // best semiconvergent within the limit
            let t = (&max_den - &k0) / &k1;
            let hs = &t * &h1 + &h0;
            let ks = &t * &k1 + &k0;
            let semi = BigRational::new(hs, ks);
            let conv = BigRational::new(h1.clone(), k1.clone());
            let de = |r: &BigRational| (r - &exact).abs();
            return if de(&semi) < de(&conv) { semi } else { conv };
        }
        h0 = std::mem::replace(&mut h1, h2);
        k0 = std::mem::replace(&mut k1, k2);
        let frac = &rest - BigRational::from_integer(a);
        if frac.is_zero() {
            return BigRational::new(h1, k1);
        }
        rest = frac.recip();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{int, rational};

    fn q(v: i64) -> BigRational {
        int(v)
    }

    fn exact_value(sol: &LpSolution) -> BigRational {
        match &sol.objective {
            Some(LpScalar::Exact(v)) => v.clone(),
            other => panic!("no exact objective: {other:?}"),
        }
    }

    #[test]
    fn box_constraint() {
        let p = LpProblem::new(vec![q(1)], vec![vec![q(-1)]], vec![q(-1)]).unwrap();
        let sol = solve(&p, SolveMode::Exact).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert_eq!(exact_value(&sol), q(1));
        assert_eq!(certify(&p, &[q(1)]).unwrap(), q(1));
        let f = solve(&p, SolveMode::Float).unwrap();
        assert!((f.objective.unwrap().to_f64() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn one_face() {
        let p = LpProblem::new(vec![q(1), q(1)], vec![vec![q(-1), q(-1)]], vec![q(-2)]).unwrap();
        let sol = solve(&p, SolveMode::Exact).unwrap();
        assert_eq!(exact_value(&sol), q(2));
    }

    #[test]
    fn zero_dual_with_nonpositive_objective() {
        let p = LpProblem::new(vec![q(-1), q(0)], vec![vec![q(-1), q(-1)]], vec![q(-2)]).unwrap();
        assert_eq!(certify(&p, &[q(0)]).unwrap(), q(0));
        assert_eq!(exact_value(&solve(&p, SolveMode::Exact).unwrap()), q(0));
    }

    #[test]
    fn certify_rejects_infeasible_dual() {
        let p = LpProblem::new(vec![q(1)], vec![vec![q(-1)]], vec![q(-1)]).unwrap();
        assert_eq!(
            certify(&p, &[rational(1, 2)]),
            Err(Error::DualInfeasible { column: 0 })
        );
        assert!(certify(&p, &[q(-1)]).is_err());
        assert!(certify(&p, &[q(1), q(1)]).is_err());
    }

    #[test]
    fn infeasible_and_unbounded() {
        // a >= 2 and -a >= -1
        let p =
            LpProblem::new(vec![q(1)], vec![vec![q(1)], vec![q(-1)]], vec![q(2), q(-1)]).unwrap();
        assert_eq!(
            solve(&p, SolveMode::Exact).unwrap().status,
            LpStatus::Infeasible
        );
        assert_eq!(
            solve(&p, SolveMode::Float).unwrap().status,
            LpStatus::Infeasible
        );
        // a1 - a2 >= -1, maximize a1 + a2
        let p = LpProblem::new(vec![q(1), q(1)], vec![vec![q(1), q(-1)]], vec![q(-1)]).unwrap();
        assert_eq!(
            solve(&p, SolveMode::Exact).unwrap().status,
            LpStatus::Unbounded
        );
        assert_eq!(
            solve(&p, SolveMode::Float).unwrap().status,
            LpStatus::Unbounded
        );
    }

    #[test]
    fn phase_one_with_lower_bounds() {
        // maximize -a1 - a2 s.t. a1 + a2 >= 3, a1 >= 1, -a1 >= -2  -> optimum -3
        let p = LpProblem::new(
            vec![q(-1), q(-1)],
            vec![vec![q(1), q(1)], vec![q(1), q(0)], vec![q(-1), q(0)]],
            vec![q(3), q(1), q(-2)],
        )
        .unwrap();
        let sol = solve(&p, SolveMode::Exact).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert_eq!(exact_value(&sol), q(-3));
        let f = solve(&p, SolveMode::Float).unwrap();
        assert!((f.objective.unwrap().to_f64() + 3.0).abs() < 1e-9);
    }

    #[test]
    fn dimension_mismatch() {
        assert!(LpProblem::new(vec![q(1)], vec![vec![q(1), q(2)]], vec![q(0)]).is_err());
        assert!(LpProblem::new(vec![q(1)], vec![vec![q(1)]], vec![]).is_err());
    }

    #[test]
    fn iteration_limit_reported() {
        let p = LpProblem::new(
            vec![q(1), q(1)],
            vec![vec![q(-1), q(0)], vec![q(0), q(-1)]],
            vec![q(-1), q(-1)],
        )
        .unwrap();
        let opts = SolveOptions {
            max_pivots: 1,
            crossover: false,
            ..SolveOptions::default()
        };
        assert_eq!(
            solve_with(&p, SolveMode::Exact, &opts),
            Err(Error::IterationLimit(1))
        );
    }

    #[test]
    fn beale_cycling_example_terminates() {
        // Beale's example cycles under the textbook largest-coefficient rule.
        // max 3/4 x4 - 20 x5 + 1/2 x6 - 6 x7
        let p = LpProblem::new(
            vec![rational(3, 4), q(-20), rational(1, 2), q(-6)],
            vec![
                vec![rational(-1, 4), q(8), q(1), q(-9)],
                vec![rational(-1, 2), q(12), rational(1, 2), q(-3)],
                vec![q(0), q(0), q(-1), q(0)],
            ],
            vec![q(0), q(0), q(-1)],
        )
        .unwrap();
        for rule in [PivotRule::Bland, PivotRule::Dantzig] {
            let opts = SolveOptions {
                rule,
                degenerate_run: 0,
                crossover: false,
                ..SolveOptions::default()
            };
            let sol = solve_with(&p, SolveMode::Exact, &opts).unwrap();
            assert_eq!(exact_value(&sol), rational(5, 4));
        }
    }

    #[test]
    fn dump_roundtrip() {
        let p = LpProblem::new(
            vec![q(1), rational(-2, 3)],
            vec![vec![q(1), q(2)], vec![rational(1, 2), q(0)]],
            vec![q(3), q(-4)],
        )
        .unwrap();
        let text = p.dump();
        assert!(text.starts_with("max 2 2\n1/1 -2/3\n"));
        assert_eq!(LpProblem::parse_dump(&text).unwrap(), p);
    }

    #[test]
    fn rationalize() {
        assert_eq!(best_rational(0.5, 10), rational(1, 2));
        assert_eq!(
            best_rational(std::f64::consts::PI, 1000),
            rational(355, 113)
        );
        assert_eq!(best_rational(-0.75, 100), rational(-3, 4));
        assert_eq!(best_rational(2.0, 1), q(2));
    }
}
