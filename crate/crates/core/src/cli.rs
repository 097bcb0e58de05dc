//! Command-line front end: single bounds, table reproduction, asymptotic
//! sweeps, the improvement curves and verification suites.

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::asym::{self, DisjointInterpretation, RateCurvePoint};
use crate::classical::{
    best_known_m2, check_hamming_log_convex, violates_log_convexity, BestKnownTable,
};
use crate::error::{Error, Result};
use crate::finite::{self, LogConvexBound, ShorteningOptions};
use crate::krawtchouk::{check_orthogonality, KrawTable};
use crate::lpbound::{lp_dimension_bound, singleton_certificate, LpMode, LpOptions};
use crate::model::{
    all_indices, fmt_float, fmt_rational, BoundResult, BoundValue, CodeParams, Method, WitnessValue,
};
use crate::oracle;

#[derive(Debug, Parser)]
#[command(
    name = "lrc-bounds",
    version,
    about = "Bounds on locally recoverable codes"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one finite-length bound and print a JSON record.
    Bound(BoundArgs),
    /// Print one of the four reference tables as CSV (r,SH,LP,flag).
    Table(TableArgs),
    /// Sweep an asymptotic bound over a grid of relative distances.
    Asym(AsymArgs),
    /// Tabulate upper_cm minus the disjoint-group bound over δ.
    Figure1(FigureArgs),
    /// Run a verification suite; exit status 0 iff every check passes.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BoundMethod {
    Lp,
    Sh,
    ShLrc,
    RecHamming,
    RecPlotkin,
    RecSingleton,
    SingletonGopalan,
    SingletonRho,
    LpSingletonCert,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exact,
    Float,
    Auto,
}

impl From<ModeArg> for LpMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Exact => LpMode::Exact,
            ModeArg::Float => LpMode::Float,
            ModeArg::Auto => LpMode::Auto,
        }
    }
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    #[arg(long, default_value_t = 2)]
    pub q: u32,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub r: usize,
    #[arg(long, default_value_t = 2)]
    pub rho: usize,
    #[arg(long, value_enum)]
    pub method: BoundMethod,
    #[arg(long, value_enum, default_value_t = ModeArg::Auto)]
    pub mode: ModeArg,
    /// Fail instead of falling back to formulas when a table entry is missing.
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableId {
    #[value(name = "I", alias = "i", alias = "1")]
    I,
    #[value(name = "II", alias = "ii", alias = "2")]
    II,
    #[value(name = "III", alias = "iii", alias = "3")]
    III,
    #[value(name = "IV", alias = "iv", alias = "4")]
    IV,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[arg(long, value_enum)]
    pub id: TableId,
    #[arg(long, value_enum, default_value_t = ModeArg::Auto)]
    pub mode: ModeArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AsymBound {
    Gv,
    GvRho,
    Mrrw2,
    UpperCm,
    UpperLinear,
    UpperDisjoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InterpArg {
    Consistent,
    AsPrinted,
}

impl From<InterpArg> for DisjointInterpretation {
    fn from(i: InterpArg) -> Self {
        match i {
            InterpArg::Consistent => DisjointInterpretation::Consistent,
            InterpArg::AsPrinted => DisjointInterpretation::AsPrinted,
        }
    }
}

#[derive(Debug, Args)]
pub struct AsymArgs {
    #[arg(long, value_enum)]
    pub bound: AsymBound,
    #[arg(long, default_value_t = 2)]
    pub r: usize,
    #[arg(long, default_value_t = 2)]
    pub rho: usize,
    #[arg(long, default_value_t = 2)]
    pub q: u32,
    /// Grid `start:end:step`, end inclusive.
    #[arg(long)]
    pub delta_grid: String,
    #[arg(long, value_enum, default_value_t = InterpArg::Consistent)]
    pub interp: InterpArg,
}

#[derive(Debug, Args)]
pub struct FigureArgs {
    #[arg(long, value_delimiter = ',', default_value = "2,3,4,5")]
    pub r: Vec<usize>,
    #[arg(long, default_value = "0.01:0.49:0.005")]
    pub delta_grid: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Delsarte,
    Oracle,
    Certificate,
    Cosets,
    Orthogonality,
    Logconvex,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub suite: Suite,
}

/// Exit status for an error: 2 for bad input, 3 for an inapplicable method.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidParams(_)
        | Error::OutOfRange { .. }
        | Error::DimensionMismatch(_)
        | Error::DataFile { .. } => 2,
        Error::PlotkinInapplicable { .. } | Error::MissingTableEntry { .. } => 3,
        _ => 1,
    }
}

/// Parses the arguments, runs the command and returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    match dispatch(&cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn dispatch(command: &Command, out: &mut dyn Write) -> Result<i32> {
    let table = BestKnownTable::load()?;
    let io = |e: std::io::Error| Error::Internal(format!("write failed: {e}"));
    match command {
        Command::Bound(args) => {
            let result = cmd_bound(args, &table)?;
            let record = bound_record(args, &result);
            writeln!(
                out,
                "{}",
                serde_json::to_string(&record).expect("JSON values serialize")
            )
            .map_err(io)?;
            Ok(0)
        }
        Command::Table(args) => {
            write!(out, "{}", cmd_table(args.id, args.mode.into(), &table)?).map_err(io)?;
            Ok(0)
        }
        Command::Asym(args) => {
            write!(out, "{}", cmd_asym(args)?).map_err(io)?;
            Ok(0)
        }
        Command::Figure1(args) => {
            write!(out, "{}", cmd_figure1(&args.r, &args.delta_grid)?).map_err(io)?;
            Ok(0)
        }
        Command::Verify(args) => {
            let report = run_suite(args.suite, &table)?;
            for f in &report.failures {
                writeln!(out, "FAIL {f}").map_err(io)?;
            }
            writeln!(
                out,
                "{}: {} checks, {} failures",
                suite_name(args.suite),
                report.checked,
                report.failures.len()
            )
            .map_err(io)?;
            Ok(if report.failures.is_empty() { 0 } else { 1 })
        }
    }
}

/// Evaluates the bound named by `args`.
pub fn cmd_bound(args: &BoundArgs, table: &BestKnownTable) -> Result<BoundResult> {
    let disjoint = || CodeParams::from_length(args.q, args.n, args.r, args.rho, args.d);
    let rec = |kind| finite::corollary2(kind, args.q, args.n, args.d, args.r, args.rho);
    match args.method {
        BoundMethod::Lp => lp_dimension_bound(
            &disjoint()?,
            LpOptions {
                mode: args.mode.into(),
                symmetric: None,
            },
        ),
        BoundMethod::LpSingletonCert => Ok(singleton_certificate(&disjoint()?)?.1),
        BoundMethod::Sh | BoundMethod::ShLrc => {
            if args.rho != 2 {
                return Err(Error::InvalidParams(
                    "shortening bounds need rho = 2".into(),
                ));
            }
            let opts = ShorteningOptions {
                lrc_recursive: args.method == BoundMethod::ShLrc,
                strict: args.strict,
                ..ShorteningOptions::default()
            };
            finite::shortening_bound(args.q, args.n, args.d, args.r, table, opts)
        }
        BoundMethod::RecHamming => rec(LogConvexBound::Hamming),
        BoundMethod::RecPlotkin => rec(LogConvexBound::Plotkin),
        BoundMethod::RecSingleton => rec(LogConvexBound::Singleton),
        BoundMethod::SingletonGopalan => finite::singleton_gopalan_k(args.n, args.d, args.r),
        BoundMethod::SingletonRho => finite::singleton_rho_k(args.n, args.d, args.r, args.rho),
    }
}

fn float_value(x: f64) -> Value {
    fmt_float(x)
        .parse::<f64>()
        .ok()
        .and_then(serde_json::Number::from_f64)
        .map_or(Value::Null, Value::Number)
}

fn rational_value(r: &num_rational::BigRational) -> Value {
    if r.is_integer() {
        if let Ok(v) = i64::try_from(r.numer()) {
            return json!(v);
        }
    }
    Value::String(fmt_rational(r))
}

fn witness_value(w: &WitnessValue) -> Value {
    match w {
        WitnessValue::Int(v) => json!(v),
        WitnessValue::Float(x) => float_value(*x),
        WitnessValue::Rational(r) => Value::String(fmt_rational(r)),
        WitnessValue::Bool(b) => json!(b),
        WitnessValue::Text(t) => json!(t),
        WitnessValue::Coefficients(cs) => {
            let mut m = Map::new();
            for (i, c) in cs {
                let key = i
                    .entries()
                    .iter()
                    .map(|e| e.to_string())
                    .collect::<Vec<_>>()
                    .join(",");
                m.insert(format!("({key})"), Value::String(fmt_rational(c)));
            }
            Value::Object(m)
        }
    }
}

/// JSON record `{method, params, kind, value, exact, witness}`.
pub fn bound_record(args: &BoundArgs, result: &BoundResult) -> Value {
    let value = match &result.value {
        BoundValue::Exact(r) => rational_value(r),
        BoundValue::Float(x) => float_value(*x),
    };
    let witness: Map<String, Value> = result
        .witness
        .fields
        .iter()
        .map(|(k, v)| (k.to_string(), witness_value(v)))
        .collect();
    json!({
        "method": result.method.as_str(),
        "params": {"q": args.q, "n": args.n, "d": args.d, "r": args.r, "rho": args.rho},
        "kind": result.kind.as_str(),
        "value": value,
        "exact": result.exact,
        "witness": witness,
    })
}

/// Published SH and LP rows for r = 2..=10.
pub struct ReferenceTable {
    pub groups: usize,
    pub distance: usize,
    pub sh: [i64; 9],
    pub lp: [i64; 9],
}

pub fn reference_table(id: TableId) -> ReferenceTable {
    match id {
        TableId::I => ReferenceTable {
            groups: 2,
            distance: 3,
            sh: [3, 4, 6, 8, 10, 11, 13, 15, 17],
            lp: [2, 4, 5, 7, 9, 11, 12, 14, 16],
        },
        TableId::II => ReferenceTable {
            groups: 3,
            distance: 3,
            sh: [5, 7, 10, 13, 16, 18, 21, 24, 27],
            lp: [4, 7, 9, 12, 15, 18, 20, 23, 26],
        },
        TableId::III => ReferenceTable {
            groups: 2,
            distance: 5,
            sh: [1, 2, 3, 5, 7, 8, 10, 12, 13],
            lp: [1, 2, 3, 5, 6, 8, 9, 11, 13],
        },
        TableId::IV => ReferenceTable {
            groups: 3,
            distance: 5,
            sh: [2, 5, 7, 10, 13, 15, 18, 21, 23],
            lp: [2, 4, 6, 9, 11, 14, 17, 19, 22],
        },
    }
}

/// One computed row of a table.
#[derive(Debug, Clone, PartialEq)]
pub struct TableRow {
    pub r: usize,
    pub sh: i64,
    pub lp: i64,
    /// Empty when both cells match the reference values.
    pub flag: String,
}

/// Computes rows r = 2..=10 of a table, in parallel, in row order.
pub fn table_rows(id: TableId, mode: LpMode, table: &BestKnownTable) -> Result<Vec<TableRow>> {
    let reference = reference_table(id);
    (2..=10usize)
        .into_par_iter()
        .map(|r| {
            let n = reference.groups * (r + 1);
            let d = reference.distance;
            let sh = finite::shortening_bound(2, n, d, r, table, ShorteningOptions::default())?;
            let params = CodeParams::new(2, reference.groups, r, 2, d)?;
            let lp = lp_dimension_bound(&params, LpOptions { mode, symmetric: None })?;
            let sh_k = sh.k().ok_or_else(|| Error::Internal("SH is not a dimension bound".into()))?;
            let lp_k = lp.k().ok_or_else(|| Error::Internal("LP is not a dimension bound".into()))?;
            let mut flags = Vec::new();
            let (ref_sh, ref_lp) = (reference.sh[r - 2], reference.lp[r - 2]);
            if sh_k != ref_sh {
                let s = match sh.witness.get("s") {
                    Some(WitnessValue::Int(s)) => *s as usize,
                    _ => 0,
                };
                let m = n - s * (r + 1);
                let bound = best_known_m2(m, d, table, false)?;
                let source = table.get(m, d).map_or("formula".to_string(), |e| e.source.clone());
                flags.push(format!(
                    "SH {sh_k} differs from reference {ref_sh}: s={s} uses M2({m};{d})<={bound} [{source}]"
                ));
            }
            if lp_k != ref_lp {
                flags.push(format!("LP {lp_k} differs from reference {ref_lp}"));
            }
            Ok(TableRow {
                r,
                sh: sh_k,
                lp: lp_k,
                flag: flags.join("; "),
            })
        })
        .collect()
}

pub fn cmd_table(id: TableId, mode: LpMode, table: &BestKnownTable) -> Result<String> {
    let mut s = String::from("r,SH,LP,flag\n");
    for row in table_rows(id, mode, table)? {
        s.push_str(&format!("{},{},{},{}\n", row.r, row.sh, row.lp, row.flag));
    }
    Ok(s)
}

/// Parses `start:end:step`.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let bad = || Error::InvalidParams(format!("delta grid {spec:?} is not start:end:step"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let nums: Vec<f64> = parts
        .iter()
        .map(|p| p.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<Result<_>>()?;
    let (a, b, step) = (nums[0], nums[1], nums[2]);
    if !(0.0..=0.5).contains(&a) || !(0.0..=0.5).contains(&b) || b < a || !(step > 0.0) {
        return Err(Error::InvalidParams(format!(
            "delta grid {spec:?} must satisfy 0 <= start <= end <= 1/2 and step > 0"
        )));
    }
    Ok(asym::delta_grid(a, b, step))
}

/// Evaluates one asymptotic bound at one δ.
pub fn asym_point(args: &AsymArgs, delta: f64) -> Result<RateCurvePoint> {
    if args.r < 1 {
        return Err(Error::InvalidParams("r must be at least 1".into()));
    }
    Ok(match args.bound {
        AsymBound::Gv => asym::gv_lrc(args.r, delta),
        AsymBound::GvRho => {
            if args.q < 2 || args.rho < 2 {
                return Err(Error::InvalidParams("need q >= 2 and rho >= 2".into()));
            }
            asym::gv_rho(args.q, args.r, args.rho, delta)
        }
        AsymBound::Mrrw2 => asym::mrrw2_point(delta),
        AsymBound::UpperCm => asym::upper_cm_mrrw2(args.r, delta),
        AsymBound::UpperLinear => asym::upper_linear(args.r, delta),
        AsymBound::UpperDisjoint => asym::upper_disjoint(args.r, delta, args.interp.into())?,
    })
}

pub fn cmd_asym(args: &AsymArgs) -> Result<String> {
    let grid = parse_grid(&args.delta_grid)?;
    let points: Vec<RateCurvePoint> = grid
        .par_iter()
        .map(|&d| asym_point(args, d))
        .collect::<Result<_>>()?;
    let mut s = String::from("delta,value,method,minimizer,note\n");
    for p in points {
        let minimizer = p
            .minimizer
            .map_or(String::new(), |(k, v)| format!("{k}={}", fmt_float(v)));
        let note = if p.value > 1.0 { "non-physical" } else { "" };
        s.push_str(&format!(
            "{},{},{},{},{}\n",
            fmt_float(p.delta),
            fmt_float(p.value),
            p.method.as_str(),
            minimizer,
            note
        ));
    }
    Ok(s)
}

/// One row of the improvement data: `difference = upper_cm − upper_disjoint`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FigureRow {
    pub r: usize,
    pub delta: f64,
    pub upper_cm: f64,
    pub upper_disjoint: f64,
    pub difference: f64,
}

pub fn figure1_rows(rs: &[usize], grid: &[f64]) -> Result<Vec<FigureRow>> {
    let cells: Vec<(usize, f64)> = rs
        .iter()
        .flat_map(|&r| grid.iter().map(move |&d| (r, d)))
        .collect();
    cells
        .par_iter()
        .map(|&(r, delta)| {
            if r < 1 {
                return Err(Error::InvalidParams("r must be at least 1".into()));
            }
            let cm = asym::upper_cm_mrrw2(r, delta).value;
            let dis = asym::upper_disjoint(r, delta, DisjointInterpretation::Consistent)?.value;
            Ok(FigureRow {
                r,
                delta,
                upper_cm: cm,
                upper_disjoint: dis,
                difference: cm - dis,
            })
        })
        .collect()
}

pub fn cmd_figure1(rs: &[usize], grid: &str) -> Result<String> {
    let rows = figure1_rows(rs, &parse_grid(grid)?)?;
    let mut s = String::from("r,delta,upper_cm,upper_disjoint,difference\n");
    for row in rows {
        s.push_str(&format!(
            "{},{},{},{},{}\n",
            row.r,
            fmt_float(row.delta),
            fmt_float(row.upper_cm),
            fmt_float(row.upper_disjoint),
            fmt_float(row.difference)
        ));
    }
    Ok(s)
}

/// Outcome of a verification suite.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SuiteReport {
    pub checked: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn suite_name(s: Suite) -> &'static str {
    match s {
        Suite::Delsarte => "delsarte",
        Suite::Oracle => "oracle",
        Suite::Certificate => "certificate",
        Suite::Cosets => "cosets",
        Suite::Orthogonality => "orthogonality",
        Suite::Logconvex => "logconvex",
    }
}

pub fn run_suite(suite: Suite, table: &BestKnownTable) -> Result<SuiteReport> {
    match suite {
        Suite::Delsarte => delsarte_suite(),
        Suite::Oracle => oracle_suite(table),
        Suite::Certificate => certificate_suite(),
        Suite::Cosets => coset_suite(),
        Suite::Orthogonality => {
            let mut tables = Vec::new();
            for q in [2, 3] {
                for n in 1..=8 {
                    tables.push(KrawTable::new(n, q)?);
                }
            }
            Ok(orthogonality_suite(&tables))
        }
        Suite::Logconvex => logconvex_suite(table),
    }
}

/// Orthogonality and valency sums of each table for s = 1 and s = 2.
pub fn orthogonality_suite(tables: &[KrawTable]) -> SuiteReport {
    let mut report = SuiteReport::default();
    for t in tables {
        for s in 1..=2 {
            let res = check_orthogonality(t, s);
            report.check(res.is_ok(), || {
                format!(
                    "orthogonality q={} N={} s={s} at {:?}",
                    t.q(),
                    t.n(),
                    res.clone().unwrap_err()
                )
            });
            let total: num_bigint::BigInt = all_indices(s, t.n())
                .map(|i| t.valency(&i).unwrap_or_default())
                .sum();
            let space = num_traits::pow(num_bigint::BigInt::from(t.q()), s * t.n());
            report.check(total == space, || {
                format!("valency sum q={} N={} s={s}", t.q(), t.n())
            });
        }
    }
    report
}

fn logconvex_suite(table: &BestKnownTable) -> Result<SuiteReport> {
    let mut report = SuiteReport::default();
    for q in 2..=4 {
        for e in 0..=5 {
            let res = check_hamming_log_convex(q, e, 30);
            report.check(res.is_ok(), || {
                format!("hamming bound q={q} e={e} at {:?}", res.unwrap_err())
            });
        }
    }
    let values: Vec<_> = (7..=9)
        .map(|n| best_known_m2(n, 4, table, true))
        .collect::<Result<_>>()?;
    report.check(violates_log_convexity(&values), || {
        format!("M2(7..9;4) = {values:?} does not violate log-convexity")
    });
    Ok(report)
}

fn delsarte_suite() -> Result<SuiteReport> {
    let mut report = SuiteReport::default();
    for s in 1..=2 {
        for r in 1..=3 {
            for k in 0..=(s * r).min(4) {
                let mut failures = Vec::new();
                let mut checked = 0;
                oracle::visit_disjoint(s, r, k, &mut |c| {
                    checked += 1;
                    if !oracle::verify_delsarte(c).unwrap_or(false) {
                        failures.push(format!("delsarte s={s} r={r} rows={:?}", c.rows()));
                    }
                })?;
                report.checked += checked;
                report.failures.extend(failures);
            }
        }
    }
    Ok(report)
}

/// Instances searched exhaustively by the oracle suite, as (s, r).
pub const ORACLE_INSTANCES: [(usize, usize); 7] =
    [(1, 1), (1, 2), (1, 3), (2, 1), (2, 2), (2, 3), (3, 2)];

/// Every finite upper bound on k for binary codes with `s` disjoint groups
/// of width r+1 and distance d. Inapplicable bounds are skipped.
pub fn finite_upper_bounds(
    s: usize,
    r: usize,
    d: usize,
    table: &BestKnownTable,
) -> Result<Vec<(Method, i64)>> {
    let n = s * (r + 1);
    let params = CodeParams::new(2, s, r, 2, d)?;
    let mut out = Vec::new();
    let mut push = |res: Result<BoundResult>| -> Result<()> {
        match res {
            Ok(b) => {
                let k = b
                    .k()
                    .ok_or_else(|| Error::Internal("not a dimension bound".into()))?;
                out.push((b.method, k));
                Ok(())
            }
            Err(Error::PlotkinInapplicable { .. }) => Ok(()),
            Err(e) => Err(e),
        }
    };
    push(lp_dimension_bound(&params, LpOptions::default()))?;
    push(singleton_certificate(&params).map(|(_, b)| b))?;
    for kind in [
        LogConvexBound::Hamming,
        LogConvexBound::Plotkin,
        LogConvexBound::Singleton,
    ] {
        push(finite::corollary2(kind, 2, n, d, r, 2))?;
    }
    push(finite::singleton_gopalan_k(n, d, r))?;
    push(finite::singleton_rho_k(n, d, r, 2))?;
    for lrc_recursive in [false, true] {
        let opts = ShorteningOptions {
            lrc_recursive,
            ..ShorteningOptions::default()
        };
        push(finite::shortening_bound(2, n, d, r, table, opts))?;
    }
    Ok(out)
}

fn oracle_suite(table: &BestKnownTable) -> Result<SuiteReport> {
    let mut report = SuiteReport::default();
    for (s, r) in ORACLE_INSTANCES {
        let profile = oracle::distance_profile(s, r)?;
        let n = s * (r + 1);
        for d in 1..=n {
            let best = oracle::max_dimension_from_profile(&profile, d) as i64;
            for (method, k) in finite_upper_bounds(s, r, d, table)? {
                report.check(k >= best, || {
                    format!(
                        "{} gives k<={k} but a code with k={best} exists (s={s} r={r} d={d})",
                        method.as_str()
                    )
                });
            }
        }
        for k in 0..=s * r {
            let mut bad = Vec::new();
            let mut checked = 0;
            oracle::visit_disjoint(s, r, k, &mut |c| {
                checked += 1;
                let delsarte = oracle::verify_delsarte(c).unwrap_or(false);
                let local = k == 0
                    || oracle::locality_of(c)
                        .ok()
                        .flatten()
                        .is_some_and(|l| l <= r);
                if !delsarte || !local {
                    bad.push(format!(
                        "s={s} r={r} rows={:?} delsarte={delsarte} locality_ok={local}",
                        c.rows()
                    ));
                }
            })?;
            report.checked += checked;
            report.failures.extend(bad);
        }
    }
    Ok(report)
}

/// The parameter grid of the Singleton certificate check.
pub fn certificate_grid() -> Vec<(u32, usize, usize, usize, usize)> {
    let mut grid = Vec::new();
    for q in [2, 3, 4] {
        for s in [2, 3] {
            for rho in [2, 3] {
                for r in 2..=6 {
                    let n = s * (r + rho - 1);
                    for d in 2..=n {
                        grid.push((q, s, r, rho, d));
                    }
                }
            }
        }
    }
    grid
}

fn certificate_suite() -> Result<SuiteReport> {
    let grid = certificate_grid();
    let failures: Vec<String> = grid
        .par_iter()
        .filter_map(|&(q, s, r, rho, d)| {
            let res = CodeParams::new(q, s, r, rho, d).and_then(|p| singleton_certificate(&p));
            res.err()
                .map(|e| format!("q={q} s={s} r={r} rho={rho} d={d}: {e}"))
        })
        .collect();
    Ok(SuiteReport {
        checked: grid.len(),
        failures,
    })
}

/// The (s, r) pairs of the coset suite: n = s(r+1) ≤ 16 and n − s ≤ 14.
pub fn coset_instances() -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for r in 1..=15 {
        for s in 1..=16 / (r + 1) {
            if s * (r + 1) - s <= oracle::MAX_COSET_REDUNDANCY {
                out.push((s, r));
            }
        }
    }
    out
}

fn coset_suite() -> Result<SuiteReport> {
    let mut report = SuiteReport::default();
    for (s, r) in coset_instances() {
        for t_frac in [0.1, 0.25, 0.5, 1.0] {
            let rep = oracle::coset_leader_report(s, r, t_frac)?;
            report.check(rep.passes(), || {
                format!("cosets s={s} r={r} t_frac={t_frac}: {rep:?}")
            });
        }
    }
    Ok(report)
}
