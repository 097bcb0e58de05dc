//! Classical upper bounds on `M_q(n, d)`, the size of the largest `q`-ary code
//! of length `n` and minimum distance `d`, plus the bundled table of
//! best-known upper bounds for binary codes.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::krawtchouk::binomial;

/// The bundled copy of `data/m2_upper.csv`.
pub const BUNDLED_M2_TABLE: &str = include_str!("../data/m2_upper.csv");

/// Environment variable naming a directory that holds a replacement `m2_upper.csv`.
pub const DATA_DIR_ENV: &str = "LRC_DATA_DIR";

/// Volume of a Hamming ball of radius `e` in `F_q^n`.
pub fn ball_volume(q: u32, n: usize, e: usize) -> BigInt {
    let qm1 = BigInt::from(q - 1);
    (0..=e.min(n))
        .map(|i| binomial(n, i) * num_traits::pow(qm1.clone(), i))
        .sum()
}

/// Un-floored sphere-packing bound `q^n / V(n, e)`.
pub fn hamming_real(q: u32, n: usize, e: usize) -> BigRational {
    BigRational::new(num_traits::pow(BigInt::from(q), n), ball_volume(q, n, e))
}

/// Sphere-packing bound with `e = ⌊(d-1)/2⌋`, floored.
pub fn hamming_m(q: u32, n: usize, d: usize) -> BigInt {
    let e = d.saturating_sub(1) / 2;
    num_traits::pow(BigInt::from(q), n) / ball_volume(q, n, e)
}

/// Exact Plotkin quantity `d / (d - θn)` with `θ = (q-1)/q`; needs `dq > (q-1)n`.
pub fn plotkin_real(q: u32, n: usize, d: usize) -> Result<BigRational> {
    let (qq, nn, dd) = (q as u64, n as u64, d as u64);
    if dd * qq <= (qq - 1) * nn {
        return Err(Error::PlotkinInapplicable { q, n, d });
    }
    // d / (d - (q-1)n/q) = dq / (dq - (q-1)n)
    Ok(BigRational::new(
        BigInt::from(dd * qq),
        BigInt::from(dd * qq - (qq - 1) * nn),
    ))
}

/// Plotkin bound `⌊d / (d - θn)⌋`.
pub fn plotkin_m(q: u32, n: usize, d: usize) -> Result<BigInt> {
    Ok(plotkin_real(q, n, d)?.floor().to_integer())
}

/// Singleton bound `q^{n-d+1}` (one codeword when `d > n`).
pub fn singleton_m(q: u32, n: usize, d: usize) -> BigInt {
    if d > n {
        return BigInt::one();
    }
    num_traits::pow(BigInt::from(q), n + 1 - d.max(1))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableEntry {
    pub bound: BigInt,
    pub source: String,
}

/// Upper bounds on `M_2(n, d)` keyed by `(n, d)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BestKnownTable {
    entries: BTreeMap<(usize, usize), TableEntry>,
    origin: String,
}

impl BestKnownTable {
    /// Parses `n,d,bound,source` records; `#` starts a comment line.
    /// Any malformed line is an error.
    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |msg: String| Error::DataFile {
                path: origin.to_string(),
                line: idx + 1,
                msg,
            };
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() != 4 {
                return Err(bad(format!("expected 4 fields, found {}", fields.len())));
            }
            let n: usize = fields[0]
                .parse()
                .map_err(|_| bad(format!("bad n '{}'", fields[0])))?;
            let d: usize = fields[1]
                .parse()
                .map_err(|_| bad(format!("bad d '{}'", fields[1])))?;
            let bound: BigInt = fields[2]
                .parse()
                .map_err(|_| bad(format!("bad bound '{}'", fields[2])))?;
            if bound < BigInt::one() {
                return Err(bad("bound must be at least 1".into()));
            }
            if fields[3].is_empty() {
                return Err(bad("empty source".into()));
            }
            let entry = TableEntry {
                bound,
                source: fields[3].to_string(),
            };
            if entries.insert((n, d), entry).is_some() {
                return Err(bad(format!("duplicate entry for ({n},{d})")));
            }
        }
        Ok(Self {
            entries,
            origin: origin.to_string(),
        })
    }

    pub fn bundled() -> Self {
        Self::parse(BUNDLED_M2_TABLE, "bundled:m2_upper.csv").expect("bundled table parses")
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::DataFile {
            path: path.display().to_string(),
            line: 0,
            msg: e.to_string(),
        })?;
        Self::parse(&text, &path.display().to_string())
    }

    /// The table named by `LRC_DATA_DIR`, or the bundled one.
    pub fn load() -> Result<Self> {
        match std::env::var_os(DATA_DIR_ENV) {
            Some(dir) => Self::from_file(&PathBuf::from(dir).join("m2_upper.csv")),
            None => Ok(Self::bundled()),
        }
    }

    pub fn origin(&self) -> &str {
        &self.origin
    }

    pub fn get(&self, n: usize, d: usize) -> Option<&TableEntry> {
        self.entries.get(&(n, d))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(usize, usize), &TableEntry)> {
        self.entries.iter()
    }

    /// Checks monotonicity in `n`, anti-monotonicity in `d`, and positivity.
    /// Returns a description of the first violation.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        for (&(n, d), e) in &self.entries {
            if e.bound < BigInt::one() {
                return Err(format!("M_2({n},{d}) < 1"));
            }
            if let Some(next) = self.entries.get(&(n + 1, d)) {
                if next.bound < e.bound {
                    return Err(format!("M_2({},{d}) < M_2({n},{d})", n + 1));
                }
            }
            if let Some(next) = self.entries.get(&(n, d + 1)) {
                if next.bound > e.bound {
                    return Err(format!("M_2({n},{}) > M_2({n},{d})", d + 1));
                }
            }
        }
        Ok(())
    }
}

/// Best available upper bound on `M_2(n, d)`: the minimum of the table entry
/// and the Hamming, Plotkin (when applicable) and Singleton bounds.
///
/// `d > n` gives 1, `d <= 1` gives `2^n`, `d = 2` gives `2^{n-1}` and
/// `3d > 2n` gives 2 (three words would need pairwise distances summing to
/// more than 2n). Other pairs without a table entry fail in `strict` mode and
/// fall back to the formulas otherwise.
pub fn best_known_m2(n: usize, d: usize, table: &BestKnownTable, strict: bool) -> Result<BigInt> {
    if d > n {
        return Ok(BigInt::one());
    }
    if d <= 1 {
        return Ok(num_traits::pow(BigInt::from(2u32), n));
    }
    if d == 2 {
        return Ok(num_traits::pow(BigInt::from(2u32), n - 1));
    }
    if 3 * d > 2 * n {
        return Ok(BigInt::from(2u32));
    }
    let mut best = hamming_m(2, n, d).min(singleton_m(2, n, d));
    if let Ok(p) = plotkin_m(2, n, d) {
        best = best.min(p);
    }
    match table.get(n, d) {
        Some(e) => best = best.min(e.bound.clone()),
        None if strict => return Err(Error::MissingTableEntry { n, d }),
        None => {}
    }
    Ok(best)
}

/// Classical upper bound on `M_q(n, d)` from the formulas alone.
pub fn formula_m(q: u32, n: usize, d: usize) -> BigInt {
    if d > n {
        return BigInt::one();
    }
    let mut best = hamming_m(q, n, d).min(singleton_m(q, n, d));
    if let Ok(p) = plotkin_m(q, n, d) {
        best = best.min(p);
    }
    best
}

/// Checks `B(n1)·B(n2) <= B(n1-1)·B(n2+1)` for the un-floored Hamming bound
/// over `1 <= n1 <= n2 <= max_n`. Returns the first violating `(n1, n2)`.
pub fn check_hamming_log_convex(
    q: u32,
    e: usize,
    max_n: usize,
) -> std::result::Result<(), (usize, usize)> {
    let vals: Vec<BigRational> = (0..=max_n + 1).map(|n| hamming_real(q, n, e)).collect();
    for n1 in 1..=max_n {
        for n2 in n1..=max_n {
            if &vals[n1] * &vals[n2] > &vals[n1 - 1] * &vals[n2 + 1] {
                return Err((n1, n2));
            }
        }
    }
    Ok(())
}

/// True when `f(j1) f(j2) <= f(j1-1) f(j2+1)` fails somewhere on the given
/// consecutive values `f(start), f(start+1), ...`.
pub fn violates_log_convexity(values: &[BigInt]) -> bool {
    let len = values.len();
    for a in 1..len {
        for b in a..len.saturating_sub(1) {
            if &values[a] * &values[b] > &values[a - 1] * &values[b + 1] {
                return true;
            }
        }
    }
    false
}
