//! Brute-force ground truth for small binary LRC codes with disjoint repair
//! groups: exhaustive subspace search, distance distributions, Delsarte
//! checks, locality and coset-leader counting.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::krawtchouk::{binomial, KrawTable};
use crate::model::{all_indices, MultiIndex};

/// Largest code length accepted by the subspace search.
pub const MAX_SEARCH_LENGTH: usize = 14;
/// Largest number of subspaces a single enumeration may visit.
pub const MAX_SUBSPACES: u128 = 1 << 22;
/// Largest length accepted by the coset scan.
pub const MAX_COSET_LENGTH: usize = 20;
/// Largest number of cosets the coset scan may tabulate.
pub const MAX_COSET_REDUNDANCY: usize = 14;

/// A binary linear code given by generator rows (bit p is coordinate p),
/// with `groups` consecutive repair groups of `width` coordinates each.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryCode {
    n: usize,
    groups: usize,
    width: usize,
    rows: Vec<u32>,
}

impl BinaryCode {
    /// Builds a code; the rows must be linearly independent.
    pub fn new(groups: usize, width: usize, rows: Vec<u32>) -> Result<Self> {
        let n = groups * width;
        if n == 0 || n > 32 {
            return Err(Error::InvalidParams(format!("length {n} outside 1..=32")));
        }
        if rows.iter().any(|&w| n < 32 && w >> n != 0) {
            return Err(Error::InvalidParams(
                "generator row exceeds code length".into(),
            ));
        }
        if rank(&rows) != rows.len() {
            return Err(Error::InvalidParams("generator rows are dependent".into()));
        }
        Ok(Self {
            n,
            groups,
            width,
            rows,
        })
    }

    pub fn length(&self) -> usize {
        self.n
    }

    pub fn groups(&self) -> usize {
        self.groups
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn rows(&self) -> &[u32] {
        &self.rows
    }

    pub fn dimension(&self) -> usize {
        self.rows.len()
    }

    /// All 2^k codewords in Gray-code order, starting with zero.
    pub fn codewords(&self) -> Vec<u32> {
        let k = self.rows.len();
        let mut out = Vec::with_capacity(1 << k);
        let mut word = 0u32;
        out.push(word);
        for i in 1u32..(1 << k) {
            word ^= self.rows[i.trailing_zeros() as usize];
            out.push(word);
        }
        out
    }

    /// Minimum weight of a nonzero codeword; `None` for the zero code.
    pub fn min_distance(&self) -> Option<usize> {
        self.codewords()
            .into_iter()
            .skip(1)
            .map(|w| w.count_ones() as usize)
            .min()
    }

    /// Weights of `word` on each repair group.
    pub fn group_weights(&self, word: u32) -> Vec<usize> {
        let mask = if self.width >= 32 {
            u32::MAX
        } else {
            (1u32 << self.width) - 1
        };
        (0..self.groups)
            .map(|g| ((word >> (g * self.width)) & mask).count_ones() as usize)
            .collect()
    }
}

fn rank(rows: &[u32]) -> usize {
    let mut basis: Vec<u32> = Vec::new();
    for &r in rows {
        let mut v = r;
        for &b in &basis {
            v = v.min(v ^ b);
        }
        if v != 0 {
            basis.push(v);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis.len()
}

/// The all-ones word on each repair group.
pub fn group_parities(groups: usize, width: usize) -> Vec<u32> {
    (0..groups)
        .map(|g| ((1u32 << width) - 1) << (g * width))
        .collect()
}

/// Basis of the words with even weight on every group.
fn even_group_basis(groups: usize, width: usize) -> Vec<u32> {
    let mut basis = Vec::new();
    for g in 0..groups {
        let base = g * width;
        for p in 0..width - 1 {
            basis.push((1u32 << (base + p)) | (1u32 << (base + width - 1)));
        }
    }
    basis
}

/// Number of k-dimensional subspaces of F_2^m.
pub fn gaussian_binomial2(m: usize, k: usize) -> u128 {
    if k > m {
        return 0;
    }
    let mut num = 1u128;
    let mut den = 1u128;
    for i in 0..k {
        num *= (1u128 << (m - i)) - 1;
        den *= (1u128 << (i + 1)) - 1;
    }
    num / den
}

fn for_each_subset(
    m: usize,
    k: usize,
    start: usize,
    acc: &mut Vec<usize>,
    f: &mut dyn FnMut(&[usize]),
) {
    if acc.len() == k {
        f(acc);
        return;
    }
    for p in start..m {
        if m - p < k - acc.len() {
            break;
        }
        acc.push(p);
        for_each_subset(m, k, p + 1, acc, f);
        acc.pop();
    }
}

/// Calls `f` once for every k-dimensional subspace of F_2^m, given by rows in
/// reduced row-echelon form.
fn for_each_rref(m: usize, k: usize, f: &mut dyn FnMut(&[u32])) {
    for_each_subset(m, k, 0, &mut Vec::new(), &mut |pivots| {
        let free: Vec<Vec<usize>> = pivots
            .iter()
            .map(|&p| (p + 1..m).filter(|j| !pivots.contains(j)).collect())
            .collect();
        let total: usize = free.iter().map(Vec::len).sum();
        let mut rows = vec![0u32; k];
        for mask in 0u64..(1u64 << total) {
            let mut bit = 0;
            for (i, cols) in free.iter().enumerate() {
                let mut row = 1u32 << pivots[i];
                for &j in cols {
                    if mask >> bit & 1 == 1 {
                        row |= 1 << j;
                    }
                    bit += 1;
                }
                rows[i] = row;
            }
            f(&rows);
        }
    });
}

fn check_search_size(groups: usize, r: usize, k: usize) -> Result<(usize, usize)> {
    let width = r + 1;
    let n = groups * width;
    if groups == 0 || r == 0 {
        return Err(Error::InvalidParams(
            "need at least one group and r >= 1".into(),
        ));
    }
    if n > MAX_SEARCH_LENGTH {
        return Err(Error::SizeGuard(format!(
            "length {n} exceeds {MAX_SEARCH_LENGTH}"
        )));
    }
    let m = n - groups;
    if k > m {
        return Err(Error::InvalidParams(format!("k={k} exceeds n-s={m}")));
    }
    if gaussian_binomial2(m, k) > MAX_SUBSPACES {
        return Err(Error::SizeGuard(format!(
            "{} subspaces",
            gaussian_binomial2(m, k)
        )));
    }
    Ok((width, m))
}

/// Every k-dimensional binary code of length s(r+1) whose words have even
/// weight on each of the s repair groups, each exactly once.
pub fn enumerate_disjoint(s: usize, r: usize, k: usize) -> Result<Vec<BinaryCode>> {
    let mut out = Vec::new();
    visit_disjoint(s, r, k, &mut |c| out.push(c.clone()))?;
    Ok(out)
}

/// Streaming form of [`enumerate_disjoint`].
pub fn visit_disjoint(s: usize, r: usize, k: usize, f: &mut dyn FnMut(&BinaryCode)) -> Result<()> {
    let (width, m) = check_search_size(s, r, k)?;
    let basis = even_group_basis(s, width);
    for_each_rref(m, k, &mut |coords| {
        let rows = coords
            .iter()
            .map(|&c| {
                (0..m)
                    .filter(|j| c >> j & 1 == 1)
                    .fold(0u32, |acc, j| acc ^ basis[j])
            })
            .collect();
        let code = BinaryCode {
            n: s * width,
            groups: s,
            width,
            rows,
        };
        f(&code);
    });
    Ok(())
}

/// For each k in 0..=n−s, the largest minimum distance over the enumerated
/// codes of dimension k (the zero code counts as distance n+1).
pub fn distance_profile(s: usize, r: usize) -> Result<Vec<usize>> {
    let m = s * r;
    (0..=m)
        .map(|k| {
            let mut best = 0;
            visit_disjoint(s, r, k, &mut |c| {
                best = best.max(c.min_distance().unwrap_or(c.length() + 1));
            })?;
            Ok(best)
        })
        .collect()
}

/// Largest k such that some enumerated code has minimum distance at least d.
pub fn max_dimension_exhaustive(s: usize, r: usize, d: usize) -> Result<usize> {
    let profile = distance_profile(s, r)?;
    Ok(max_dimension_from_profile(&profile, d))
}

pub fn max_dimension_from_profile(profile: &[usize], d: usize) -> usize {
    profile.iter().rposition(|&best| best >= d).unwrap_or(0)
}

/// Group-wise distance distribution normalized by |C|.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupDistanceDistribution {
    pub groups: usize,
    pub width: usize,
    pub counts: BTreeMap<MultiIndex, BigRational>,
}

impl GroupDistanceDistribution {
    pub fn total(&self) -> BigRational {
        self.counts
            .values()
            .fold(BigRational::zero(), |acc, v| acc + v)
    }

    pub fn get(&self, i: &MultiIndex) -> BigRational {
        self.counts
            .get(i)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// Adds `delta` to the entry at `i`.
    pub fn adjust(&mut self, i: &MultiIndex, delta: BigRational) {
        let v = self.get(i) + delta;
        self.counts.insert(i.clone(), v);
    }
}

/// Exact distance distribution. For a linear code the pairs at group distance
/// i, divided by |C|, are the codewords of group weight i.
pub fn distance_distribution(code: &BinaryCode) -> GroupDistanceDistribution {
    let mut counts: BTreeMap<MultiIndex, BigRational> = BTreeMap::new();
    for w in code.codewords() {
        let idx = MultiIndex::new(code.group_weights(w), code.width())
            .expect("group weights lie in range");
        *counts.entry(idx).or_insert_with(BigRational::zero) += BigRational::one();
    }
    GroupDistanceDistribution {
        groups: code.groups(),
        width: code.width(),
        counts,
    }
}

/// First nonzero j with Σ_i a_i K_j(i) < 0, if any.
pub fn delsarte_violation(dist: &GroupDistanceDistribution) -> Result<Option<MultiIndex>> {
    let table = KrawTable::new(dist.width, 2)?;
    for j in all_indices(dist.groups, dist.width).filter(|j| !j.is_zero()) {
        let mut sum = BigRational::zero();
        for (i, a) in &dist.counts {
            sum += a * BigRational::from_integer(table.multi(&j, i)?);
        }
        if sum.is_negative() {
            return Ok(Some(j));
        }
    }
    Ok(None)
}

/// True iff the code's distance distribution satisfies every Delsarte
/// inequality, checked exactly.
pub fn verify_delsarte(code: &BinaryCode) -> Result<bool> {
    Ok(delsarte_violation(&distance_distribution(code))?.is_none())
}

/// Basis of the dual code.
fn dual_basis(code: &BinaryCode) -> Vec<u32> {
    let n = code.length();
    // reduce the generator to echelon form keyed by the lowest set bit
    let mut echelon: Vec<u32> = Vec::new();
    for &r in code.rows() {
        let mut v = r;
        for &b in &echelon {
            if v >> b.trailing_zeros() & 1 == 1 {
                v ^= b;
            }
        }
        if v != 0 {
            let p = v.trailing_zeros();
            for b in echelon.iter_mut() {
                if *b >> p & 1 == 1 {
                    *b ^= v;
                }
            }
            echelon.push(v);
        }
    }
    let pivots: Vec<u32> = echelon.iter().map(|b| b.trailing_zeros()).collect();
    (0..n as u32)
        .filter(|c| !pivots.contains(c))
        .map(|c| {
            let mut w = 1u32 << c;
            for (b, &p) in echelon.iter().zip(&pivots) {
                if b >> c & 1 == 1 {
                    w |= 1 << p;
                }
            }
            w
        })
        .collect()
}

/// Smallest r such that every coordinate lies in the support of a dual word of
/// weight at most r+1; `None` when some coordinate has no repair group.
pub fn locality_of(code: &BinaryCode) -> Result<Option<usize>> {
    let n = code.length();
    if n > MAX_SEARCH_LENGTH {
        return Err(Error::SizeGuard(format!(
            "length {n} exceeds {MAX_SEARCH_LENGTH}"
        )));
    }
    let dual = BinaryCode {
        n,
        groups: 1,
        width: n,
        rows: dual_basis(code),
    };
    let mut best = vec![usize::MAX; n];
    for w in dual.codewords().into_iter().skip(1) {
        let weight = w.count_ones() as usize;
        for (c, b) in best.iter_mut().enumerate() {
            if w >> c & 1 == 1 {
                *b = (*b).min(weight);
            }
        }
    }
    if best.contains(&usize::MAX) {
        return Ok(None);
    }
    Ok(best.into_iter().max().map(|w| w - 1))
}

/// Result of scanning all cosets of the span of the group parities.
#[derive(Debug, Clone, PartialEq)]
pub struct CosetReport {
    pub cosets: usize,
    /// t = ⌊(r+1)/2⌋.
    pub t: usize,
    /// Weight threshold T = ⌊t_frac · n⌋.
    pub threshold: usize,
    /// Every coset has a minimum-weight leader with at most t ones per group.
    pub leaders_within_t: bool,
    /// Number of cosets by leader weight.
    pub count_by_weight: Vec<u64>,
    /// Coefficients of (Σ_{i≤t} c_i x^i)^s with c_t halved for odd r.
    pub generating_coefficients: Vec<u64>,
}

impl CosetReport {
    pub fn leaders_up_to_threshold(&self) -> u64 {
        self.count_by_weight.iter().take(self.threshold + 1).sum()
    }

    pub fn generating_bound(&self) -> u64 {
        self.generating_coefficients
            .iter()
            .take(self.threshold + 1)
            .sum()
    }

    pub fn passes(&self) -> bool {
        self.leaders_within_t && self.leaders_up_to_threshold() <= self.generating_bound()
    }
}

/// Exhaustively scans the cosets of span{v_1, …, v_s} in F_2^{s(r+1)}.
pub fn coset_leader_report(s: usize, r: usize, t_frac: f64) -> Result<CosetReport> {
    let width = r + 1;
    let n = s * width;
    if s == 0 || r == 0 || n > MAX_COSET_LENGTH || n - s > MAX_COSET_REDUNDANCY {
        return Err(Error::SizeGuard(format!("coset scan for s={s}, r={r}")));
    }
    if !(0.0..=1.0).contains(&t_frac) {
        return Err(Error::InvalidParams(format!(
            "t_frac={t_frac} outside [0, 1]"
        )));
    }
    let t = width / 2;
    let parities = group_parities(s, width);
    let group_mask = (1u32 << width) - 1;
    // coset key: drop the last bit of each group after normalizing it to zero
    let key = |x: u32| -> usize {
        let mut k = 0usize;
        for (g, &v) in parities.iter().enumerate() {
            let mut part = x & v;
            if part >> (g * width + width - 1) & 1 == 1 {
                part ^= v;
            }
            k |= ((part >> (g * width)) as usize) << (g * (width - 1));
        }
        k
    };
    let cosets = 1usize << (n - s);
    let mut min_weight = vec![usize::MAX; cosets];
    let mut good = vec![false; cosets];
    for x in 0u32..(1u32 << n) {
        let kx = key(x);
        let w = x.count_ones() as usize;
        let within = (0..s).all(|g| ((x >> (g * width)) & group_mask).count_ones() as usize <= t);
        if w < min_weight[kx] {
            min_weight[kx] = w;
            good[kx] = within;
        } else if w == min_weight[kx] {
            good[kx] |= within;
        }
    }
    let mut count_by_weight = vec![0u64; n + 1];
    for &w in &min_weight {
        count_by_weight[w] += 1;
    }
    let mut per_group: Vec<u64> = (0..=t)
        .map(|i| binomial(width, i).to_u64().unwrap_or(u64::MAX))
        .collect();
    if r % 2 == 1 {
        per_group[t] /= 2;
    }
    let mut coeffs = vec![1u64];
    for _ in 0..s {
        let mut next = vec![0u64; coeffs.len() + t];
        for (a, ca) in coeffs.iter().enumerate() {
            for (b, cb) in per_group.iter().enumerate() {
                next[a + b] += ca * cb;
            }
        }
        coeffs = next;
    }
    coeffs.resize(n + 1, 0);
    Ok(CosetReport {
        cosets,
        t,
        threshold: (t_frac * n as f64 + 1e-9).floor() as usize,
        leaders_within_t: good.iter().all(|&g| g),
        count_by_weight,
        generating_coefficients: coeffs,
    })
}

/// True iff every coset has a leader with at most t ones per group and the
/// leaders of weight ≤ T are bounded by the generating-function count.
pub fn coset_leader_check(s: usize, r: usize, t_frac: f64) -> Result<bool> {
    Ok(coset_leader_report(s, r, t_frac)?.passes())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::rational;

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_disjoint(2, 2, 2).unwrap().len(), 35);
        assert_eq!(gaussian_binomial2(4, 2), 35);
        let zero = enumerate_disjoint(2, 2, 0).unwrap();
        assert_eq!(zero.len(), 1);
        assert_eq!(zero[0].dimension(), 0);
        let even = enumerate_disjoint(1, 2, 2).unwrap();
        assert_eq!(even.len(), 1);
        let mut words = even[0].codewords();
        words.sort_unstable();
        assert_eq!(words, vec![0b000, 0b011, 0b101, 0b110]);
    }

    #[test]
    fn enumeration_matches_gaussian_binomials_and_is_distinct() {
        for (s, r) in [(1, 3), (2, 2), (2, 3), (3, 2)] {
            for k in 0..=s * r {
                let codes = enumerate_disjoint(s, r, k).unwrap();
                assert_eq!(codes.len() as u128, gaussian_binomial2(s * r, k));
                let mut spans: Vec<Vec<u32>> = codes
                    .iter()
                    .map(|c| {
                        let mut w = c.codewords();
                        w.sort_unstable();
                        w
                    })
                    .collect();
                spans.sort();
                spans.dedup();
                assert_eq!(spans.len(), codes.len());
                for c in &codes {
                    assert!(c
                        .codewords()
                        .iter()
                        .all(|&w| c.group_weights(w).iter().all(|x| x % 2 == 0)));
                }
            }
        }
    }

    #[test]
    fn size_guard() {
        assert!(matches!(
            enumerate_disjoint(5, 2, 3),
            Err(Error::SizeGuard(_))
        ));
        assert!(matches!(
            enumerate_disjoint(2, 2, 5),
            Err(Error::InvalidParams(_))
        ));
    }

    #[test]
    fn max_dimension_examples() {
        assert_eq!(max_dimension_exhaustive(2, 2, 3).unwrap(), 2);
        // every group has even weight, so the all-ones word is excluded
        assert_eq!(max_dimension_exhaustive(2, 2, 6).unwrap(), 0);
        assert_eq!(max_dimension_exhaustive(2, 2, 4).unwrap(), 2);
        assert_eq!(max_dimension_exhaustive(2, 2, 1).unwrap(), 4);
        assert_eq!(max_dimension_exhaustive(2, 3, 1).unwrap(), 6);
    }

    #[test]
    fn distance_distribution_examples() {
        let zero = BinaryCode::new(2, 3, vec![]).unwrap();
        let d = distance_distribution(&zero);
        assert_eq!(d.counts.len(), 1);
        assert_eq!(d.get(&MultiIndex::zero(2)), rational(1, 1));
        let even = BinaryCode::new(1, 3, vec![0b011, 0b101]).unwrap();
        let d = distance_distribution(&even);
        assert_eq!(d.get(&MultiIndex::new(vec![0], 3).unwrap()), rational(1, 1));
        assert_eq!(d.get(&MultiIndex::new(vec![2], 3).unwrap()), rational(3, 1));
        for c in enumerate_disjoint(2, 2, 3).unwrap() {
            assert_eq!(distance_distribution(&c).total(), rational(8, 1));
        }
    }

    #[test]
    fn delsarte_holds_and_mutation_is_caught() {
        assert!(verify_delsarte(&BinaryCode::new(2, 3, vec![]).unwrap()).unwrap());
        // [4,3] even-weight code: removing the all-ones word breaks j = (2)
        let code = BinaryCode::new(1, 4, vec![0b0011, 0b0101, 0b1001]).unwrap();
        assert!(verify_delsarte(&code).unwrap());
        let mut d = distance_distribution(&code);
        let four = MultiIndex::new(vec![4], 4).unwrap();
        d.adjust(&four, rational(-1, 1));
        assert_eq!(
            delsarte_violation(&d).unwrap(),
            Some(MultiIndex::new(vec![2], 4).unwrap())
        );
    }

    #[test]
    fn locality_examples() {
        let even4 = BinaryCode::new(1, 4, vec![0b0011, 0b0101, 0b1001]).unwrap();
        assert_eq!(locality_of(&even4).unwrap(), Some(3));
        let rep = BinaryCode::new(1, 5, vec![0b11111]).unwrap();
        assert_eq!(locality_of(&rep).unwrap(), Some(1));
        let full = BinaryCode::new(1, 2, vec![0b01, 0b10]).unwrap();
        assert_eq!(locality_of(&full).unwrap(), None);
        for c in enumerate_disjoint(2, 3, 2).unwrap() {
            assert!(locality_of(&c).unwrap().unwrap() <= 3);
        }
    }

    #[test]
    fn coset_examples() {
        let rep = coset_leader_report(2, 2, 1.0).unwrap();
        assert_eq!(rep.cosets, 16);
        assert!(rep.leaders_within_t);
        assert!(rep.passes());
        let odd = coset_leader_report(1, 3, 1.0).unwrap();
        assert_eq!(odd.count_by_weight[..3], [1, 4, 3]);
        assert_eq!(odd.generating_coefficients[..3], [1, 4, 3]);
        assert!(odd.passes());
        for (s, r) in [(1, 3), (2, 3), (3, 2), (4, 2)] {
            let full = coset_leader_report(s, r, 1.0).unwrap();
            assert_eq!(full.leaders_up_to_threshold(), 1 << (s * r));
            assert_eq!(full.generating_bound(), 1 << (s * r));
        }
    }
}
