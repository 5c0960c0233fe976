use std::collections::HashMap;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::snf::{AbelianGroupInvariants, SparseMatrix};
use super::{is_degenerate, FormalChain};
use crate::error::{Error, Result};
use crate::group::GroupTable;
use crate::quandle::FiniteQuandle;

/// Default cap on stored matrix entries; `QF_BUDGET` overrides it.
pub const DEFAULT_BUDGET: u64 = 3_000_000;

pub fn budget_from_env() -> u64 {
    std::env::var("QF_BUDGET").ok().and_then(|s| s.trim().parse().ok()).unwrap_or(DEFAULT_BUDGET)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Theory {
    Rack,
    Quandle,
    SimplicialCoinvariant,
}

impl FromStr for Theory {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rack" => Ok(Theory::Rack),
            "quandle" => Ok(Theory::Quandle),
            "simplicial-coinvariant" | "simplicial" => Ok(Theory::SimplicialCoinvariant),
            _ => Err(Error::Parse(format!("unknown theory {s:?}"))),
        }
    }
}

fn tuples(n: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..n).map(move |x| {
                    let mut t = t.clone();
                    t.push(x);
                    t
                })
            })
            .collect();
    }
    out
}

/// Generators of the chain group in degree `k`.
pub fn basis(x: &FiniteQuandle, theory: Theory, k: i64) -> Vec<Vec<usize>> {
    if k < 0 {
        return Vec::new();
    }
    let k = k as usize;
    let n = x.size();
    match theory {
        Theory::Rack => tuples(n, k),
        Theory::Quandle => tuples(n, k).into_iter().filter(|t| !is_degenerate(t)).collect(),
        Theory::SimplicialCoinvariant => {
            tuples(n, k + 1).into_iter().filter(|t| x.canonicalize(t) == *t).collect()
        }
    }
}

/// Boundary of one generator, expressed in the degree `k-1` generators.
fn boundary_of(x: &FiniteQuandle, theory: Theory, t: &[usize]) -> Vec<(Vec<usize>, i64)> {
    let mut out = Vec::new();
    match theory {
        Theory::Rack | Theory::Quandle => {
            let n = t.len();
            if n <= 1 {
                return out;
            }
            for i in 1..n {
                let sign = if (i + 1) % 2 == 0 { 1 } else { -1 };
                let acted: Vec<usize> =
                    t[..i].iter().map(|&y| x.at(y, t[i])).chain(t[i + 1..].iter().copied()).collect();
                let plain: Vec<usize> = t[..i].iter().chain(t[i + 1..].iter()).copied().collect();
                out.push((acted, sign));
                out.push((plain, -sign));
            }
            if theory == Theory::Quandle {
                out.retain(|(f, _)| !is_degenerate(f));
            }
        }
        Theory::SimplicialCoinvariant => {
            if t.len() <= 1 {
                return out;
            }
            for i in 0..t.len() {
                let face: Vec<usize> =
                    t.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &y)| y).collect();
                out.push((x.canonicalize(&face), if i % 2 == 0 { 1 } else { -1 }));
            }
        }
    }
    out
}

/// Matrix of `∂: span(source) -> span(target)`; rows are target generators.
pub fn boundary_matrix(
    x: &FiniteQuandle,
    theory: Theory,
    source: &[Vec<usize>],
    target: &[Vec<usize>],
) -> Result<SparseMatrix> {
    let index: HashMap<&[usize], usize> = target.iter().enumerate().map(|(i, t)| (t.as_slice(), i)).collect();
    let mut m = SparseMatrix::new(target.len(), source.len());
    for (j, t) in source.iter().enumerate() {
        for (f, c) in boundary_of(x, theory, t) {
            let i = *index
                .get(f.as_slice())
                .ok_or_else(|| Error::Parse(format!("face {f:?} is not a basis element")))?;
            m.add(i, j, c);
        }
    }
    Ok(m)
}

/// Bases and boundary matrices around degree `n`.
#[derive(Clone, Debug)]
pub struct ComplexSlice {
    pub degree: usize,
    pub basis_lo: Vec<Vec<usize>>,
    pub basis: Vec<Vec<usize>>,
    pub basis_hi: Vec<Vec<usize>>,
    /// `∂_n`
    pub d_n: SparseMatrix,
    /// `∂_{n+1}`
    pub d_hi: SparseMatrix,
}

impl ComplexSlice {
    pub fn build(x: &FiniteQuandle, theory: Theory, n: usize, budget: u64) -> Result<Self> {
        let gens_hi = match theory {
            Theory::SimplicialCoinvariant => (x.size() as u64).saturating_pow(n as u32 + 2),
            _ => (x.size() as u64).saturating_pow(n as u32 + 1),
        };
        let needed = gens_hi.saturating_mul(2 * (n as u64 + 1));
        if needed > budget {
            return Err(Error::BudgetExceeded { needed, budget });
        }
        let lo = match theory {
            // C_0 = Z for rack and quandle chains
            Theory::Rack | Theory::Quandle if n == 1 => vec![Vec::new()],
            _ => basis(x, theory, n as i64 - 1),
        };
        Self::from_bases(x, theory, n, lo, basis(x, theory, n as i64), basis(x, theory, n as i64 + 1))
    }

    pub fn from_bases(
        x: &FiniteQuandle,
        theory: Theory,
        degree: usize,
        basis_lo: Vec<Vec<usize>>,
        basis: Vec<Vec<usize>>,
        basis_hi: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let d_n = if degree == 0 || (theory != Theory::SimplicialCoinvariant && degree == 1) {
            SparseMatrix::new(basis_lo.len(), basis.len())
        } else {
            boundary_matrix(x, theory, &basis, &basis_lo)?
        };
        let d_hi = boundary_matrix(x, theory, &basis_hi, &basis)?;
        Ok(ComplexSlice { degree, basis_lo, basis, basis_hi, d_n, d_hi })
    }

    pub fn homology(&self, budget: u64) -> Result<AbelianGroupInvariants> {
        let r_n = self.d_n.rank(budget)?;
        let f_hi = self.d_hi.invariant_factors(budget)?;
        let rank = self.basis.len() - r_n - f_hi.len();
        AbelianGroupInvariants::from_big(rank, &f_hi)
    }
}

pub fn homology(x: &FiniteQuandle, theory: Theory, n: usize) -> Result<AbelianGroupInvariants> {
    homology_with_budget(x, theory, n, budget_from_env())
}

pub fn homology_with_budget(x: &FiniteQuandle, theory: Theory, n: usize, budget: u64) -> Result<AbelianGroupInvariants> {
    if theory != Theory::SimplicialCoinvariant && n == 0 {
        return Ok(AbelianGroupInvariants::free(1));
    }
    ComplexSlice::build(x, theory, n, budget)?.homology(budget)
}

/// Whether `chain` (degree `n`, tuples in the degree-`n` basis after
/// canonicalization) is a boundary over the integers.
pub fn is_boundary(x: &FiniteQuandle, theory: Theory, chain: &FormalChain<usize>, budget: u64) -> Result<bool> {
    let n = chain.degree;
    let basis_n = basis(x, theory, n as i64);
    let basis_hi = basis(x, theory, n as i64 + 1);
    let d = boundary_matrix(x, theory, &basis_hi, &basis_n)?;
    let index: HashMap<&[usize], usize> = basis_n.iter().enumerate().map(|(i, t)| (t.as_slice(), i)).collect();
    let mut v = vec![0i64; basis_n.len()];
    for (t, c) in chain.terms() {
        let key = match theory {
            Theory::SimplicialCoinvariant => x.canonicalize(t),
            _ => t.clone(),
        };
        if theory == Theory::Quandle && is_degenerate(&key) {
            continue;
        }
        let i = *index.get(key.as_slice()).ok_or_else(|| Error::Parse(format!("{key:?} is not a generator")))?;
        v[i] += c;
    }
    let f = d.invariant_factors(budget)?;
    let g = d.with_column(&v).invariant_factors(budget)?;
    Ok(f == g)
}

/// `H_k(Z/n; Z)` from the periodic resolution: the boundary maps after
/// tensoring with `Z` alternate between `0` (odd degrees) and `n` (even).
pub fn cyclic_group_homology(n: u64, k: usize) -> Result<AbelianGroupInvariants> {
    if n == 0 {
        return Err(Error::InvalidGroup("cyclic group of order 0".into()));
    }
    let map = |j: usize| -> SparseMatrix {
        let v = if j == 0 || j % 2 == 1 { 0 } else { n as i64 };
        SparseMatrix::from_dense(&[vec![v]])
    };
    let r_k = map(k).rank(u64::MAX)?;
    let f = map(k + 1).invariant_factors(u64::MAX)?;
    AbelianGroupInvariants::from_big(1 - r_k - f.len(), &f)
}

/// `H_k(G; Z)` from the normalized bar complex; for small groups.
pub fn bar_homology(g: &GroupTable, k: usize, budget: u64) -> Result<AbelianGroupInvariants> {
    let nontrivial: Vec<usize> = (0..g.size()).filter(|&x| x != g.identity()).collect();
    let gens = |j: usize| -> Vec<Vec<usize>> {
        tuples(nontrivial.len(), j).into_iter().map(|t| t.iter().map(|&i| nontrivial[i]).collect()).collect()
    };
    let needed = (nontrivial.len() as u64).saturating_pow(k as u32 + 1).saturating_mul(k as u64 + 2);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let matrix = |j: usize| -> SparseMatrix {
        let src = gens(j);
        let tgt = if j == 0 { Vec::new() } else { gens(j - 1) };
        let index: HashMap<Vec<usize>, usize> = tgt.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
        let mut m = SparseMatrix::new(tgt.len(), src.len());
        if j == 0 {
            return m;
        }
        for (col, t) in src.iter().enumerate() {
            let mut push = |face: Vec<usize>, s: i64| {
                if face.iter().all(|&x| x != g.identity()) {
                    m.add(index[&face], col, s);
                }
            };
            push(t[1..].to_vec(), 1);
            for i in 0..j - 1 {
                let mut f = t[..i].to_vec();
                f.push(g.mul(t[i], t[i + 1]));
                f.extend_from_slice(&t[i + 2..]);
                push(f, if (i + 1) % 2 == 0 { 1 } else { -1 });
            }
            push(t[..j - 1].to_vec(), if j % 2 == 0 { 1 } else { -1 });
        }
        m
    };
    let r_k = matrix(k).rank(budget)?;
    let f = matrix(k + 1).invariant_factors(budget)?;
    AbelianGroupInvariants::from_big(gens(k).len() - r_k - f.len(), &f)
}
