//! Parameter and result types shared by every bound computation.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Parameters of a finite-length query on a `q`-ary code with `s` disjoint
/// repair groups of width `N = r + rho - 1` and global distance `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CodeParams {
    q: u32,
    s: usize,
    r: usize,
    rho: usize,
    d: usize,
}

impl CodeParams {
    pub fn new(q: u32, s: usize, r: usize, rho: usize, d: usize) -> Result<Self> {
        if q < 2 {
            return Err(Error::InvalidParams(format!("alphabet size q={q} < 2")));
        }
        if s < 1 {
            return Err(Error::InvalidParams(
                "need at least one repair group".into(),
            ));
        }
        if r < 1 {
            return Err(Error::InvalidParams(format!("locality r={r} < 1")));
        }
        if rho < 2 {
            return Err(Error::InvalidParams(format!(
                "local distance rho={rho} < 2"
            )));
        }
        let n = s * (r + rho - 1);
        if d < 1 || d > n {
            return Err(Error::InvalidParams(format!(
                "distance d={d} outside [1, n={n}]"
            )));
        }
        Ok(Self { q, s, r, rho, d })
    }

    /// Builds parameters from a total length, which must split into whole
    /// repair groups of width `r + rho - 1`.
    pub fn from_length(q: u32, n: usize, r: usize, rho: usize, d: usize) -> Result<Self> {
        if r < 1 || rho < 2 {
            return Self::new(q, 1, r, rho, d);
        }
        let width = r + rho - 1;
        if n == 0 || !n.is_multiple_of(width) {
            return Err(Error::InvalidParams(format!(
                "length n={n} is not a positive multiple of r+rho-1={width}"
            )));
        }
        Self::new(q, n / width, r, rho, d)
    }

    pub fn q(&self) -> u32 {
        self.q
    }
    pub fn groups(&self) -> usize {
        self.s
    }
    pub fn locality(&self) -> usize {
        self.r
    }
    pub fn local_distance(&self) -> usize {
        self.rho
    }
    pub fn distance(&self) -> usize {
        self.d
    }
    /// Repair group width `N = r + rho - 1`.
    pub fn group_width(&self) -> usize {
        self.r + self.rho - 1
    }
    pub fn length(&self) -> usize {
        self.s * self.group_width()
    }
}

impl fmt::Display for CodeParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "q={} n={} s={} r={} rho={} d={}",
            self.q,
            self.length(),
            self.s,
            self.r,
            self.rho,
            self.d
        )
    }
}

/// A point query on an asymptotic rate curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticQuery {
    pub r: usize,
    pub rho: usize,
    pub delta: f64,
    pub q: u32,
}

impl AsymptoticQuery {
    pub fn new(r: usize, delta: f64) -> Result<Self> {
        Self::with_local_distance(2, r, 2, delta)
    }

    pub fn with_local_distance(q: u32, r: usize, rho: usize, delta: f64) -> Result<Self> {
        if !(0.0..=0.5).contains(&delta) {
            return Err(Error::InvalidParams(format!(
                "delta={delta} outside [0, 1/2]"
            )));
        }
        if r < 1 || rho < 2 || q < 2 {
            return Err(Error::InvalidParams(format!("q={q} r={r} rho={rho}")));
        }
        Ok(Self { r, rho, delta, q })
    }
}

/// Index of a relation of the product Hamming scheme: one Hamming distance
/// per repair group.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(Vec<usize>);

impl MultiIndex {
    /// Validates every entry against the group width `n_max`.
    pub fn new(entries: Vec<usize>, n_max: usize) -> Result<Self> {
        if let Some(&bad) = entries.iter().find(|&&e| e > n_max) {
            return Err(Error::OutOfRange {
                what: "multi-index entry",
                value: bad as i64,
                range: format!("0..={n_max}"),
            });
        }
        Ok(Self(entries))
    }

    pub fn zero(s: usize) -> Self {
        Self(vec![0; s])
    }

    pub fn entries(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn weight(&self) -> usize {
        self.0.iter().sum()
    }

    /// Entries sorted in non-increasing order: the representative of the
    /// orbit under permutations of the repair groups.
    pub fn sorted(&self) -> Self {
        let mut v = self.0.clone();
        v.sort_unstable_by(|a, b| b.cmp(a));
        Self(v)
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (p, e) in self.0.iter().enumerate() {
            if p > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// Mixed-radix rank of `index` with radix `n_max + 1`, last coordinate fastest.
pub fn rank_of(index: &MultiIndex, n_max: usize) -> Result<usize> {
    let radix = n_max + 1;
    let mut rank = 0usize;
    for &e in index.entries() {
        if e > n_max {
            return Err(Error::OutOfRange {
                what: "multi-index entry",
                value: e as i64,
                range: format!("0..={n_max}"),
            });
        }
        rank = rank * radix + e;
    }
    Ok(rank)
}

/// Inverse of [`rank_of`].
pub fn index_of(rank: usize, s: usize, n_max: usize) -> Result<MultiIndex> {
    let radix = n_max + 1;
    let total = radix
        .checked_pow(s as u32)
        .ok_or_else(|| Error::SizeGuard(format!("({radix})^{s} multi-indices overflow usize")))?;
    if rank >= total {
        return Err(Error::OutOfRange {
            what: "rank",
            value: rank as i64,
            range: format!("0..{total}"),
        });
    }
    let mut entries = vec![0; s];
    let mut rest = rank;
    for slot in entries.iter_mut().rev() {
        *slot = rest % radix;
        rest /= radix;
    }
    Ok(MultiIndex(entries))
}

/// Iterates all of `{0..=n_max}^s` in rank order.
pub fn all_indices(s: usize, n_max: usize) -> impl Iterator<Item = MultiIndex> {
    let radix = n_max + 1;
    let total = radix.pow(s as u32);
    (0..total).map(move |rank| {
        let mut entries = vec![0; s];
        let mut rest = rank;
        for slot in entries.iter_mut().rev() {
            *slot = rest % radix;
            rest /= radix;
        }
        MultiIndex(entries)
    })
}

/// What a bound constrains.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    /// Upper bound on the dimension `k = log_q |C|`.
    Dimension,
    /// Asymptotic rate bound.
    Rate,
    /// Upper bound on the cardinality `|C|`.
    Cardinality,
}

impl BoundKind {
    pub fn as_str(self) -> &'static str {
        match self {
            BoundKind::Dimension => "dimension-bound-k",
            BoundKind::Rate => "rate-bound-R",
            BoundKind::Cardinality => "cardinality-bound-M",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Lp,
    LpSingletonCert,
    Shortening,
    ShorteningLrc,
    RecHamming,
    RecPlotkin,
    RecSingleton,
    SingletonGopalan,
    SingletonRho,
    Gv,
    GvRho,
    Mrrw2,
    UpperCm,
    UpperLinear,
    UpperDisjoint,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Lp => "lp",
            Method::LpSingletonCert => "lp-singleton-cert",
            Method::Shortening => "sh",
            Method::ShorteningLrc => "sh-lrc",
            Method::RecHamming => "rec-hamming",
            Method::RecPlotkin => "rec-plotkin",
            Method::RecSingleton => "rec-singleton",
            Method::SingletonGopalan => "singleton-gopalan",
            Method::SingletonRho => "singleton-rho",
            Method::Gv => "gv",
            Method::GvRho => "gv-rho",
            Method::Mrrw2 => "mrrw2",
            Method::UpperCm => "upper-cm",
            Method::UpperLinear => "upper-linear",
            Method::UpperDisjoint => "upper-disjoint",
        }
    }
}

/// A bound value: exact rational or 64-bit float.
#[derive(Debug, Clone, PartialEq)]
pub enum BoundValue {
    Exact(BigRational),
    Float(f64),
}

impl BoundValue {
    pub fn integer(v: i64) -> Self {
        BoundValue::Exact(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            BoundValue::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            BoundValue::Float(x) => *x,
        }
    }

    /// Integer value, when the bound is an exact integer.
    pub fn as_integer(&self) -> Option<i64> {
        match self {
            BoundValue::Exact(r) if r.is_integer() => r.to_integer().to_i64(),
            _ => None,
        }
    }
}

impl fmt::Display for BoundValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundValue::Exact(r) => f.write_str(&fmt_rational(r)),
            BoundValue::Float(x) => f.write_str(&fmt_float(*x)),
        }
    }
}

/// Supporting data for a bound: minimizers, certificates, roots.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Witness {
    pub fields: Vec<(&'static str, WitnessValue)>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum WitnessValue {
    Int(i64),
    Float(f64),
    Rational(BigRational),
    Bool(bool),
    Text(String),
    /// Sparse coefficient list, e.g. a dual certificate.
    Coefficients(Vec<(MultiIndex, BigRational)>),
}

impl Witness {
    pub fn with(mut self, key: &'static str, value: WitnessValue) -> Self {
        self.fields.push((key, value));
        self
    }

    pub fn get(&self, key: &str) -> Option<&WitnessValue> {
        self.fields.iter().find(|(k, _)| *k == key).map(|(_, v)| v)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundResult {
    pub value: BoundValue,
    pub kind: BoundKind,
    pub method: Method,
    pub witness: Witness,
    pub exact: bool,
}

impl BoundResult {
    pub fn dimension(method: Method, k: i64, witness: Witness) -> Self {
        Self {
            value: BoundValue::integer(k.max(0)),
            kind: BoundKind::Dimension,
            method,
            witness,
            exact: true,
        }
    }

    /// The integer dimension bound, if this is one.
    pub fn k(&self) -> Option<i64> {
        match self.kind {
            BoundKind::Dimension => self.value.as_integer(),
            _ => None,
        }
    }
}

/// Largest integer `k` with `q^k <= x`, computed exactly. `x` must be positive.
pub fn floor_log(q: u32, x: &BigRational) -> i64 {
    assert!(x.is_positive(), "floor_log of a non-positive value");
    let q = BigInt::from(q);
    let num = x.numer();
    let den = x.denom();
    if x >= &BigRational::one() {
        // q^k * den <= num
        let mut k = 0i64;
        let mut p = den.clone();
        loop {
            p *= &q;
            if &p > num {
                return k;
            }
            k += 1;
        }
    } else {
        // smallest j with q^j * num >= den, then k = -j
        let mut j = 0i64;
        let mut p = num.clone();
        while &p < den {
            p *= &q;
            j += 1;
        }
        -j
    }
}

pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Formats a rational as `p/q`, or `p` when the denominator is one.
pub fn fmt_rational(r: &BigRational) -> String {
    if r.denom().is_one() || r.numer().is_zero() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Formats a float with 12 significant digits.
pub fn fmt_float(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".into();
    }
    let s = format!("{:.*e}", 11, x);
    // normalise to plain notation when it is short enough
    let v: f64 = s.parse().unwrap_or(x);
    let mag = v.abs().log10().floor() as i32;
    if (-5..12).contains(&mag) {
        let decimals = (11 - mag).max(0) as usize;
        let plain = format!("{:.*}", decimals, v);
        let plain = if plain.contains('.') {
            plain
                .trim_end_matches('0')
                .trim_end_matches('.')
                .to_string()
        } else {
            plain
        };
        plain
    } else {
        let (mantissa, exp) = s.split_once('e').unwrap_or((&s, "0"));
        let mantissa = mantissa.trim_end_matches('0').trim_end_matches('.');
        format!("{mantissa}e{exp}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_examples() {
        let n = 11;
        assert_eq!(
            rank_of(&MultiIndex::new(vec![0, 0], n).unwrap(), n).unwrap(),
            0
        );
        assert_eq!(
            rank_of(&MultiIndex::new(vec![0, 1], n).unwrap(), n).unwrap(),
            1
        );
        assert_eq!(
            rank_of(&MultiIndex::new(vec![1, 0], n).unwrap(), n).unwrap(),
            12
        );
    }

    #[test]
    fn rank_matches_lexicographic_enumeration() {
        // count position of (1,0) in a nested-loop enumeration
        let n = 11;
        let mut pos = 0;
        'outer: for a in 0..=n {
            for b in 0..=n {
                if (a, b) == (1, 0) {
                    break 'outer;
                }
                pos += 1;
            }
        }
        assert_eq!(pos, 12);
        assert_eq!(index_of(12, 2, n).unwrap().entries(), &[1, 0]);
    }

    #[test]
    fn index_examples() {
        assert_eq!(index_of(0, 2, 11).unwrap().entries(), &[0, 0]);
        assert_eq!(index_of(143, 2, 11).unwrap().entries(), &[11, 11]);
        assert!(index_of(144, 2, 11).is_err());
    }

    #[test]
    fn entry_out_of_range() {
        assert!(MultiIndex::new(vec![0, 12], 11).is_err());
        assert!(rank_of(&MultiIndex(vec![12]), 11).is_err());
    }

    #[test]
    fn rank_roundtrip_exhaustive() {
        for s in 1..=4 {
            for n in 0..=12 {
                for (expected, idx) in all_indices(s, n).enumerate() {
                    let rank = rank_of(&idx, n).unwrap();
                    assert_eq!(rank, expected);
                    assert_eq!(index_of(rank, s, n).unwrap(), idx);
                }
            }
        }
    }

    #[test]
    fn params_reject_invalid() {
        assert!(CodeParams::new(1, 2, 2, 2, 3).is_err());
        assert!(CodeParams::new(2, 0, 2, 2, 3).is_err());
        assert!(CodeParams::new(2, 2, 0, 2, 3).is_err());
        assert!(CodeParams::new(2, 2, 2, 1, 3).is_err());
        assert!(CodeParams::new(2, 2, 2, 2, 0).is_err());
        assert!(CodeParams::new(2, 2, 2, 2, 7).is_err());
        assert!(CodeParams::from_length(2, 7, 2, 2, 3).is_err());
        let p = CodeParams::from_length(2, 6, 2, 2, 3).unwrap();
        assert_eq!((p.groups(), p.group_width(), p.length()), (2, 3, 6));
        assert!(AsymptoticQuery::new(2, 0.6).is_err());
        assert!(AsymptoticQuery::new(2, 0.5).is_ok());
    }

    #[test]
    fn floor_log_exact() {
        assert_eq!(floor_log(2, &int(8)), 3);
        assert_eq!(floor_log(2, &rational(15, 2)), 2);
        assert_eq!(floor_log(2, &rational(16, 2)), 3);
        assert_eq!(floor_log(3, &int(1)), 0);
        assert_eq!(floor_log(2, &rational(1, 2)), -1);
        assert_eq!(floor_log(2, &rational(1, 3)), -2);
    }

    #[test]
    fn float_formatting() {
        assert_eq!(fmt_float(0.5), "0.5");
        assert_eq!(fmt_float(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt_float(65.5196), "65.5196");
        assert_eq!(fmt_float(1e-6), "1e-6");
        assert_eq!(fmt_float(2.5e-7), "2.5e-7");
        assert_eq!(fmt_rational(&rational(6, 4)), "3/2");
        assert_eq!(fmt_rational(&int(-4)), "-4");
    }
}
