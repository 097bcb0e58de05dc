//! Krawtchouk polynomials and valencies of the product Hamming scheme
//! `H(N, q)^{⊗s}`, in exact integer arithmetic.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::model::MultiIndex;

/// Pascal triangle of exact binomial coefficients up to row `max_n`.
#[derive(Debug, Clone)]
pub struct Pascal {
    rows: Vec<Vec<BigInt>>,
}

impl Pascal {
    pub fn new(max_n: usize) -> Self {
        let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(max_n + 1);
        rows.push(vec![BigInt::one()]);
        for n in 1..=max_n {
            let prev = &rows[n - 1];
            let mut row = Vec::with_capacity(n + 1);
            row.push(BigInt::one());
            for k in 1..n {
                row.push(&prev[k - 1] + &prev[k]);
            }
            row.push(BigInt::one());
            rows.push(row);
        }
        Self { rows }
    }

    /// `binom(n, k)`, zero when `k > n`.
    pub fn get(&self, n: usize, k: usize) -> BigInt {
        if k > n {
            BigInt::zero()
        } else {
            self.rows[n][k].clone()
        }
    }
}

/// `binom(n, k)` computed multiplicatively; zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

fn check_args(n: usize, q: u32, j: usize, x: usize) -> Result<()> {
    if q < 2 {
        return Err(Error::InvalidParams(format!("alphabet size q={q} < 2")));
    }
    for (what, v) in [("degree j", j), ("argument x", x)] {
        if v > n {
            return Err(Error::OutOfRange {
                what,
                value: v as i64,
                range: format!("0..={n}"),
            });
        }
    }
    Ok(())
}

fn krawtchouk_sum(pascal: &Pascal, n: usize, q: u32, j: usize, x: usize) -> BigInt {
    let qm1 = BigInt::from(q - 1);
    let mut acc = BigInt::zero();
    for l in 0..=j {
        let term =
            pascal.get(x, l) * pascal.get(n - x, j - l) * num_traits::pow(qm1.clone(), j - l);
        if l % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// `K_j^{(n)}(x) = Σ_l (-1)^l (q-1)^{j-l} binom(x,l) binom(n-x,j-l)`.
pub fn krawtchouk(n: usize, q: u32, j: usize, x: usize) -> Result<BigInt> {
    check_args(n, q, j, x)?;
    Ok(krawtchouk_sum(&Pascal::new(n), n, q, j, x))
}

/// Memoized table `table[j][x] = K_j^{(n)}(x)` for one `(n, q)`.
#[derive(Debug, Clone, PartialEq)]
pub struct KrawTable {
    q: u32,
    n: usize,
    table: Vec<Vec<BigInt>>,
}

impl KrawTable {
    pub fn new(n: usize, q: u32) -> Result<Self> {
        check_args(n, q, 0, 0)?;
        let pascal = Pascal::new(n);
        let table = (0..=n)
            .map(|j| {
                (0..=n)
                    .map(|x| krawtchouk_sum(&pascal, n, q, j, x))
                    .collect()
            })
            .collect();
        Ok(Self { q, n, table })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, j: usize, x: usize) -> &BigInt {
        &self.table[j][x]
    }

    /// Overwrites one entry. Only meant for mutation tests of the verifiers.
    pub fn set(&mut self, j: usize, x: usize, value: BigInt) {
        self.table[j][x] = value;
    }

    /// Product eigenvalue `Π_p K_{j_p}(i_p)`.
    pub fn multi(&self, j: &MultiIndex, i: &MultiIndex) -> Result<BigInt> {
        if j.len() != i.len() {
            return Err(Error::DimensionMismatch(format!(
                "multi-indices of length {} and {}",
                j.len(),
                i.len()
            )));
        }
        let mut acc = BigInt::one();
        for (&jp, &ip) in j.entries().iter().zip(i.entries()) {
            if jp > self.n || ip > self.n {
                return Err(Error::OutOfRange {
                    what: "multi-index entry",
                    value: jp.max(ip) as i64,
                    range: format!("0..={}", self.n),
                });
            }
            acc *= &self.table[jp][ip];
        }
        Ok(acc)
    }

    /// Valency `e(i) = Π_p binom(N, i_p)(q-1)^{i_p}`, the product eigenvalue at zero.
    pub fn valency(&self, i: &MultiIndex) -> Result<BigInt> {
        let mut acc = BigInt::one();
        for &ip in i.entries() {
            if ip > self.n {
                return Err(Error::OutOfRange {
                    what: "multi-index entry",
                    value: ip as i64,
                    range: format!("0..={}", self.n),
                });
            }
            acc *= &self.table[ip][0];
        }
        Ok(acc)
    }
}

/// `K_j^{(N)}(i) = Π_p K_{j_p}^{(N)}(i_p)`.
pub fn multi_krawtchouk(n: usize, q: u32, j: &MultiIndex, i: &MultiIndex) -> Result<BigInt> {
    KrawTable::new(n, q)?.multi(j, i)
}

/// Valency of the relation `i` in `H(N, q)^{⊗s}`.
pub fn valency(n: usize, q: u32, i: &MultiIndex) -> Result<BigInt> {
    if q < 2 {
        return Err(Error::InvalidParams(format!("alphabet size q={q} < 2")));
    }
    let qm1 = BigInt::from(q - 1);
    let mut acc = BigInt::one();
    for &ip in i.entries() {
        if ip > n {
            return Err(Error::OutOfRange {
                what: "multi-index entry",
                value: ip as i64,
                range: format!("0..={n}"),
            });
        }
        acc *= binomial(n, ip) * num_traits::pow(qm1.clone(), ip);
    }
    Ok(acc)
}

/// Checks `Σ_i e(i) K_j(i) K_{j'}(i) = q^{sN} e(j) [j = j']` for all pairs.
/// Returns the first offending pair.
pub fn check_orthogonality(
    table: &KrawTable,
    s: usize,
) -> std::result::Result<(), (MultiIndex, MultiIndex)> {
    let n = table.n();
    let indices: Vec<MultiIndex> = crate::model::all_indices(s, n).collect();
    let vals: Vec<BigInt> = indices.iter().map(|i| table.valency(i).unwrap()).collect();
    let space = num_traits::pow(BigInt::from(table.q()), s * n);
    // eigenvalue matrix rows, one per j
    let rows: Vec<Vec<BigInt>> = indices
        .iter()
        .map(|j| indices.iter().map(|i| table.multi(j, i).unwrap()).collect())
        .collect();
    for (a, ja) in indices.iter().enumerate() {
        let weighted: Vec<BigInt> = rows[a].iter().zip(&vals).map(|(k, e)| k * e).collect();
        for b in a..indices.len() {
            let sum: BigInt = weighted.iter().zip(&rows[b]).map(|(w, k)| w * k).sum();
            let expected = if a == b {
                &space * &vals[a]
            } else {
                BigInt::zero()
            };
            if sum != expected {
                return Err((ja.clone(), indices[b].clone()));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::all_indices;

    fn mi(v: &[usize]) -> MultiIndex {
        MultiIndex::new(v.to_vec(), 100).unwrap()
    }

    #[test]
    fn scalar_examples() {
        assert_eq!(krawtchouk(3, 2, 1, 1).unwrap(), BigInt::from(1));
        assert_eq!(krawtchouk(4, 2, 2, 0).unwrap(), BigInt::from(6));
        assert_eq!(krawtchouk(3, 3, 1, 0).unwrap(), BigInt::from(6));
        assert!(krawtchouk(3, 2, 4, 0).is_err());
        assert!(krawtchouk(3, 2, 0, 4).is_err());
        assert!(krawtchouk(3, 1, 0, 0).is_err());
    }

    #[test]
    fn binary_degree_one_is_linear() {
        for n in 1..10 {
            for x in 0..=n {
                assert_eq!(
                    krawtchouk(n, 2, 1, x).unwrap(),
                    BigInt::from(n as i64 - 2 * x as i64)
                );
            }
        }
    }

    #[test]
    fn multi_examples() {
        assert_eq!(
            multi_krawtchouk(3, 2, &mi(&[1, 2]), &mi(&[0, 0])).unwrap(),
            BigInt::from(9)
        );
        for i in all_indices(2, 3) {
            assert_eq!(
                multi_krawtchouk(3, 2, &mi(&[0, 0]), &i).unwrap(),
                BigInt::one()
            );
        }
        // (3 - 2)^2 from the defining sum
        let k11 = krawtchouk(3, 2, 1, 1).unwrap();
        assert_eq!(
            multi_krawtchouk(3, 2, &mi(&[1, 1]), &mi(&[1, 1])).unwrap(),
            &k11 * &k11
        );
        assert_eq!(k11, BigInt::one());
        assert!(multi_krawtchouk(3, 2, &mi(&[1]), &mi(&[1, 1])).is_err());
    }

    #[test]
    fn valency_examples() {
        assert_eq!(valency(4, 2, &mi(&[0, 0])).unwrap(), BigInt::one());
        assert_eq!(valency(4, 2, &mi(&[2, 1])).unwrap(), BigInt::from(24));
        assert_eq!(valency(3, 3, &mi(&[1])).unwrap(), BigInt::from(6));
        let t = KrawTable::new(4, 2).unwrap();
        assert_eq!(
            t.valency(&mi(&[2, 1])).unwrap(),
            t.multi(&mi(&[2, 1]), &mi(&[0, 0])).unwrap()
        );
    }

    #[test]
    fn table_rows_and_columns() {
        for q in 2..5 {
            for n in 0..9 {
                let t = KrawTable::new(n, q).unwrap();
                for x in 0..=n {
                    assert!(t.get(0, x).is_one());
                }
                for j in 0..=n {
                    let expected = binomial(n, j) * num_traits::pow(BigInt::from(q - 1), j);
                    assert_eq!(t.get(j, 0), &expected);
                }
            }
        }
    }

    #[test]
    fn pascal_matches_multiplicative() {
        let p = Pascal::new(40);
        for n in 0..=40 {
            for k in 0..=n + 1 {
                assert_eq!(p.get(n, k), binomial(n, k));
            }
        }
    }

    #[test]
    fn orthogonality_small() {
        for q in [2, 3] {
            for n in 0..=8 {
                for s in 1..=2 {
                    let t = KrawTable::new(n, q).unwrap();
                    assert!(check_orthogonality(&t, s).is_ok(), "q={q} n={n} s={s}");
                }
            }
        }
    }

    #[test]
    fn mutated_table_breaks_orthogonality() {
        let mut t = KrawTable::new(4, 2).unwrap();
        let v = t.get(2, 1).clone();
        t.set(2, 1, v + 1);
        assert!(check_orthogonality(&t, 1).is_err());
    }

    #[test]
    fn valencies_sum_to_space() {
        for q in [2u32, 3] {
            for n in 0..=8 {
                for s in 1..=3 {
                    let total: BigInt = all_indices(s, n).map(|i| valency(n, q, &i).unwrap()).sum();
                    assert_eq!(total, num_traits::pow(BigInt::from(q), s * n));
                }
            }
        }
    }

    #[test]
    fn self_duality() {
        for q in [2u32, 3] {
            for n in 0..=6 {
                let t = KrawTable::new(n, q).unwrap();
                for s in 1..=2 {
                    for i in all_indices(s, n) {
                        for j in all_indices(s, n) {
                            let lhs = t.valency(&i).unwrap() * t.multi(&j, &i).unwrap();
                            let rhs = t.valency(&j).unwrap() * t.multi(&i, &j).unwrap();
                            assert_eq!(lhs, rhs);
                        }
                    }
                }
            }
        }
    }
}
