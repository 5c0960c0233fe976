use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Rank and invariant factors `d_1 | d_2 | ...`, each `> 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbelianGroupInvariants {
    pub rank: usize,
    pub torsion: Vec<u64>,
}

impl AbelianGroupInvariants {
    pub fn free(rank: usize) -> Self {
        AbelianGroupInvariants { rank, torsion: Vec::new() }
    }

    /// From a rank and any list of cyclic orders (normalized).
    pub fn new(rank: usize, orders: &[u64]) -> Self {
        let big: Vec<BigInt> = orders.iter().map(|&d| BigInt::from(d)).collect();
        Self::from_big(rank, &big).expect("u64 input")
    }

    pub(crate) fn from_big(rank: usize, orders: &[BigInt]) -> Result<Self> {
        let chain = divisibility_chain(orders.to_vec());
        let torsion = chain
            .into_iter()
            .filter(|d| !d.is_one())
            .map(|d| d.to_u64().ok_or(Error::Overflow))
            .collect::<Result<Vec<_>>>()?;
        Ok(AbelianGroupInvariants { rank, torsion })
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let orders: Vec<u64> = self.torsion.iter().chain(&other.torsion).copied().collect();
        Self::new(self.rank + other.rank, &orders)
    }

    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }
}

impl fmt::Display for AbelianGroupInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.rank > 0 {
            parts.push(if self.rank == 1 { "Z".to_string() } else { format!("Z^{}", self.rank) });
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Rewrites nonzero diagonal entries as a divisibility chain, ascending.
fn divisibility_chain(mut d: Vec<BigInt>) -> Vec<BigInt> {
    for x in d.iter_mut() {
        *x = x.abs();
    }
    d.retain(|x| !x.is_zero());
    d.sort();
    let n = d.len();
    for i in 0..n {
        for j in i + 1..n {
            let g = d[i].gcd(&d[j]);
            let l = &d[i] / &g * &d[j];
            d[i] = g;
            d[j] = l;
        }
    }
    d
}

/// Sparse integer matrix, stored by rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    pub nrows: usize,
    pub ncols: usize,
    rows: Vec<BTreeMap<usize, i64>>,
}

impl SparseMatrix {
    pub fn new(nrows: usize, ncols: usize) -> Self {
        SparseMatrix { nrows, ncols, rows: vec![BTreeMap::new(); nrows] }
    }

    pub fn from_dense(m: &[Vec<i64>]) -> Self {
        let ncols = m.first().map_or(0, |r| r.len());
        let mut s = Self::new(m.len(), ncols);
        for (i, row) in m.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                s.add(i, j, v);
            }
        }
        s
    }

    pub fn add(&mut self, r: usize, c: usize, v: i64) {
        if v == 0 {
            return;
        }
        let e = self.rows[r].entry(c).or_insert(0);
        *e += v;
        if *e == 0 {
            self.rows[r].remove(&c);
        }
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.rows[r].get(&c).copied().unwrap_or(0)
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, i64)> + '_ {
        self.rows[r].iter().map(|(&c, &v)| (c, v))
    }

    /// Appends a column.
    pub fn with_column(&self, col: &[i64]) -> Self {
        let mut m = self.clone();
        m.ncols += 1;
        for (r, &v) in col.iter().enumerate() {
            m.add(r, self.ncols, v);
        }
        m
    }

    pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
        let mut out = SparseMatrix::new(self.nrows, other.ncols);
        for r in 0..self.nrows {
            for (k, a) in self.row(r) {
                for (c, b) in other.row(k) {
                    out.add(r, c, a * b);
                }
            }
        }
        out
    }

    /// Nonzero invariant factors (ones included), ascending, as a divisibility
    /// chain. Unit pivots are eliminated sparsely first; whatever is left is
    /// reduced densely over arbitrary-precision integers.
    pub fn invariant_factors(&self, budget: u64) -> Result<Vec<BigInt>> {
        let nnz = self.nnz() as u64;
        if nnz > budget {
            return Err(Error::BudgetExceeded { needed: nnz, budget });
        }
        let mut rows: Vec<BTreeMap<usize, i128>> =
            self.rows.iter().map(|r| r.iter().map(|(&c, &v)| (c, v as i128)).collect()).collect();
        let mut col_rows: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); self.ncols];
        for (r, row) in rows.iter().enumerate() {
            for &c in row.keys() {
                col_rows[c].insert(r);
            }
        }
        let mut ones = 0usize;
        loop {
            let mut found = false;
            for r in 0..rows.len() {
                let pick = rows[r]
                    .iter()
                    .filter(|(_, v)| v.abs() == 1)
                    .min_by_key(|(&c, _)| (col_rows[c].len(), c))
                    .map(|(&c, &v)| (c, v));
                let Some((c, pv)) = pick else { continue };
                let prow = std::mem::take(&mut rows[r]);
                for &cc in prow.keys() {
                    col_rows[cc].remove(&r);
                }
                let others: Vec<usize> = col_rows[c].iter().copied().collect();
                for r2 in others {
                    let f = rows[r2][&c] * pv;
                    for (&cc, &v) in &prow {
                        let old = rows[r2].get(&cc).copied().unwrap_or(0);
                        let new = f.checked_mul(v).and_then(|x| old.checked_sub(x)).ok_or(Error::Overflow)?;
                        if new == 0 {
                            rows[r2].remove(&cc);
                            col_rows[cc].remove(&r2);
                        } else {
                            rows[r2].insert(cc, new);
                            col_rows[cc].insert(r2);
                        }
                    }
                }
                debug_assert!(col_rows[c].is_empty());
                ones += 1;
                found = true;
            }
            if !found {
                break;
            }
        }
        let live_rows: Vec<usize> = (0..rows.len()).filter(|&r| !rows[r].is_empty()).collect();
        let live_cols: Vec<usize> = (0..self.ncols).filter(|&c| !col_rows[c].is_empty()).collect();
        let dense_size = (live_rows.len() as u64) * (live_cols.len() as u64);
        if dense_size > budget {
            return Err(Error::BudgetExceeded { needed: dense_size, budget });
        }
        let col_pos: BTreeMap<usize, usize> = live_cols.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let mut dense = vec![vec![BigInt::zero(); live_cols.len()]; live_rows.len()];
        for (i, &r) in live_rows.iter().enumerate() {
            for (&c, &v) in &rows[r] {
                dense[i][col_pos[&c]] = BigInt::from(v);
            }
        }
        let mut diag = dense_diagonalize(dense);
        diag.extend(std::iter::repeat(BigInt::one()).take(ones));
        Ok(divisibility_chain(diag))
    }

    pub fn rank(&self, budget: u64) -> Result<usize> {
        Ok(self.invariant_factors(budget)?.len())
    }
}

/// Diagonal entries left after unimodular row and column operations.
fn dense_diagonalize(mut a: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let m = a.len();
    let n = a.first().map_or(0, |r| r.len());
    let mut diag = Vec::new();
    for t in 0..m.min(n) {
        // smallest nonzero entry of the remaining block as pivot
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                if !a[i][j].is_zero() && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut dirty = false;
            for i in t + 1..m {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                for j in t..n {
                    let s = &q * &a[t][j];
                    a[i][j] -= s;
                }
                if !a[i][t].is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..n {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                for i in t..m {
                    let s = &q * &a[i][t];
                    a[i][j] -= s;
                }
                if !a[t][j].is_zero() {
                    dirty = true;
                }
            }
            if !dirty {
                break;
            }
            // move the smallest remainder in row/column t to the pivot
            let mut best = (t, t);
            for i in t + 1..m {
                if !a[i][t].is_zero() && a[i][t].abs() < a[best.0][best.1].abs() {
                    best = (i, t);
                }
            }
            for j in t + 1..n {
                if !a[t][j].is_zero() && a[t][j].abs() < a[best.0][best.1].abs() {
                    best = (t, j);
                }
            }
            if best.0 != t {
                a.swap(t, best.0);
            } else if best.1 != t {
                for row in a.iter_mut() {
                    row.swap(t, best.1);
                }
            }
        }
        diag.push(a[t][t].abs());
    }
    diag
}

/// Invariant factors (nonzero diagonal of the Smith form) and rank.
pub fn smith_normal_form(m: &[Vec<i64>]) -> (Vec<BigInt>, usize) {
    let f = SparseMatrix::from_dense(m).invariant_factors(u64::MAX).expect("unbounded budget");
    let r = f.len();
    (f, r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn small_examples() {
        assert_eq!(smith_normal_form(&[vec![2, 0], vec![0, 3]]), (ints(&[1, 6]), 2));
        assert_eq!(smith_normal_form(&[vec![0, 0], vec![0, 0]]), (vec![], 0));
        let id = vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]];
        assert_eq!(smith_normal_form(&id), (ints(&[1, 1, 1]), 3));
        assert_eq!(smith_normal_form(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]).0, ints(&[2, 6, 12]));
    }

    /// Determinantal divisors: d_1..d_k = gcd of k-minors ratios, on 3x3.
    fn det3(m: &[Vec<i64>]) -> i64 {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    #[test]
    fn product_of_factors_is_determinant() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let m: Vec<Vec<i64>> = (0..3).map(|_| (0..3).map(|_| rng.gen_range(-6..=6)).collect()).collect();
            let (f, r) = smith_normal_form(&m);
            let d = det3(&m);
            if d != 0 {
                assert_eq!(r, 3);
                let p: BigInt = f.iter().product();
                assert_eq!(p, BigInt::from(d.abs()));
            } else {
                assert!(r < 3);
            }
            for w in f.windows(2) {
                assert!((&w[1] % &w[0]).is_zero());
            }
            let g = m.iter().flatten().fold(0i64, |a, &b| a.gcd(&b));
            if g != 0 {
                assert_eq!(f[0], BigInt::from(g));
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        let m = SparseMatrix::from_dense(&[vec![1, 1], vec![1, 1]]);
        assert!(matches!(m.invariant_factors(3), Err(Error::BudgetExceeded { needed: 4, budget: 3 })));
    }

    #[test]
    fn group_normalization() {
        let g = AbelianGroupInvariants::new(1, &[2, 3, 1]);
        assert_eq!(g.torsion, vec![6]);
        assert_eq!(g.to_string(), "Z + Z/6");
        let h = AbelianGroupInvariants::new(0, &[4, 6]);
        assert_eq!(h.torsion, vec![2, 12]);
        assert_eq!(g.direct_sum(&h), AbelianGroupInvariants::new(1, &[2, 12, 6]));
    }
}
