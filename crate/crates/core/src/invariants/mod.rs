//! Invariant pipelines on top of colorings: the state sum, the four-term
//! pairing with a cochain on `X⁴`, cocycle families, reductions modulo `N`
//! for torus knots, and the truncated representative of the fundamental class.

mod families;

pub use families::{mochizuki_cocycle, multilinear_cocycles, MultilinearCocycles, TrilinearForm};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::chains::{fundamental_class, ik_phi, FormalChain};
use crate::coloring::{crossing_weight, enumerate_colorings, shadow_complete, ShadowColoring};
use crate::diagram::LinkDiagram;
use crate::error::{Error, Result};
use crate::grouphom::truncated::{beta_truncated, truncated_boundary, TruncatedSimplex};
use crate::quandle::{FiniteQuandle, ParabolicPoint, ParabolicQuandle};

/// A cochain `X^arity → A` on a finite quandle, with `A = ℤ` (modulus 0) or
/// `ℤ/m`. Entries may be missing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CochainTable {
    pub arity: usize,
    pub size: usize,
    pub modulus: u64,
    values: Vec<Option<i64>>,
}

#[derive(Deserialize)]
struct CochainJson {
    #[serde(default)]
    modulus: u64,
    #[serde(default)]
    arity: Option<usize>,
    #[serde(default)]
    values: Option<Vec<i64>>,
    #[serde(default)]
    entries: Option<Vec<Vec<i64>>>,
    #[serde(default)]
    default: Option<i64>,
}

impl CochainTable {
    pub fn new(arity: usize, size: usize, modulus: u64) -> Self {
        CochainTable { arity, size, modulus, values: vec![None; size.pow(arity as u32)] }
    }

    pub fn zero(arity: usize, size: usize, modulus: u64) -> Self {
        CochainTable { arity, size, modulus, values: vec![Some(0); size.pow(arity as u32)] }
    }

    pub fn from_fn(arity: usize, size: usize, modulus: u64, mut f: impl FnMut(&[usize]) -> i64) -> Self {
        let mut t = Self::new(arity, size, modulus);
        let mut idx = vec![0; arity];
        for slot in 0..t.values.len() {
            let mut r = slot;
            for k in (0..arity).rev() {
                idx[k] = r % size;
                r /= size;
            }
            t.values[slot] = Some(t.reduce(f(&idx)));
        }
        t
    }

    fn slot(&self, t: &[usize]) -> usize {
        t.iter().fold(0, |acc, &x| acc * self.size + x)
    }

    pub fn reduce(&self, v: i64) -> i64 {
        if self.modulus == 0 {
            v
        } else {
            v.rem_euclid(self.modulus as i64)
        }
    }

    pub fn get(&self, t: &[usize]) -> Result<i64> {
        self.values[self.slot(t)].ok_or_else(|| Error::PartialCocycle(t.to_vec()))
    }

    pub fn set(&mut self, t: &[usize], v: i64) {
        let s = self.slot(t);
        self.values[s] = Some(self.reduce(v));
    }

    pub fn is_total(&self) -> bool {
        self.values.iter().all(Option::is_some)
    }

    /// Accepts `{"modulus":m,"values":[..]}` (dense, row-major) or
    /// `{"modulus":m,"entries":[[x1,..,xk,v],..],"default":d?}`.
    pub fn from_json(value: &Value, arity: usize, size: usize) -> Result<Self> {
        let raw: CochainJson = serde_json::from_value(value.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        if let Some(a) = raw.arity {
            if a != arity {
                return Err(Error::DegreeMismatch { expected: arity, found: a });
            }
        }
        let mut t = Self::new(arity, size, raw.modulus);
        if let Some(values) = raw.values {
            if values.len() != t.values.len() {
                return Err(Error::Parse(format!("expected {} values, found {}", t.values.len(), values.len())));
            }
            t.values = values.into_iter().map(|v| Some(t.reduce(v))).collect();
        }
        if let Some(d) = raw.default {
            for v in t.values.iter_mut().filter(|v| v.is_none()) {
                *v = Some(d);
            }
        }
        for e in raw.entries.unwrap_or_default() {
            if e.len() != arity + 1 {
                return Err(Error::Parse(format!("cochain entries have {} indices and a value", arity)));
            }
            let idx: Vec<usize> = e[..arity]
                .iter()
                .map(|&x| usize::try_from(x).ok().filter(|&x| x < size))
                .collect::<Option<_>>()
                .ok_or_else(|| Error::Parse("cochain index out of range".into()))?;
            t.set(&idx, e[arity]);
        }
        Ok(t)
    }

    /// Dense JSON when total, sparse entries otherwise.
    pub fn to_json(&self) -> Value {
        if self.is_total() {
            let values: Vec<i64> = self.values.iter().map(|v| v.expect("total")).collect();
            serde_json::json!({"modulus": self.modulus, "arity": self.arity, "values": values})
        } else {
            let mut entries = Vec::new();
            for (slot, v) in self.values.iter().enumerate() {
                if let Some(v) = v {
                    let mut idx = vec![0i64; self.arity + 1];
                    let mut r = slot;
                    for k in (0..self.arity).rev() {
                        idx[k] = (r % self.size) as i64;
                        r /= self.size;
                    }
                    idx[self.arity] = *v;
                    entries.push(idx);
                }
            }
            serde_json::json!({"modulus": self.modulus, "arity": self.arity, "entries": entries})
        }
    }
}

/// `Σ_τ ε_τ φ(x_τ, y_τ, z_τ)`.
pub fn state_sum(d: &LinkDiagram, s: &ShadowColoring<usize>, phi: &CochainTable) -> Result<i64> {
    if phi.arity != 3 {
        return Err(Error::DegreeMismatch { expected: 3, found: phi.arity });
    }
    let mut total = 0;
    for c in 0..d.crossings.len() {
        let (eps, x, y, z) = crossing_weight(d, s, c);
        total += eps * phi.get(&[x, y, z])?;
    }
    Ok(phi.reduce(total))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ColoringValue {
    pub coloring_id: usize,
    pub value: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantReport {
    pub per_coloring: Vec<ColoringValue>,
    /// The values as a sorted multiset.
    pub multiset: Vec<i64>,
    pub sum: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub modulus: Option<u64>,
}

impl InvariantReport {
    fn new(values: Vec<i64>, sum: i64) -> Self {
        let mut multiset = values.clone();
        multiset.sort_unstable();
        let per_coloring = values.into_iter().enumerate().map(|(coloring_id, value)| ColoringValue { coloring_id, value }).collect();
        InvariantReport { per_coloring, multiset, sum, modulus: None }
    }

    /// Every value and the sum taken modulo `n`.
    pub fn reduced(&self, n: u64) -> Self {
        let r = |v: i64| v.rem_euclid(n as i64);
        let mut out = Self::new(self.per_coloring.iter().map(|c| r(c.value)).collect(), r(self.sum));
        out.modulus = Some(n);
        out
    }
}

/// All shadow colorings of `d` by `x` with basepoint `x0`, in enumeration order.
pub fn all_shadow_colorings(d: &LinkDiagram, x: &FiniteQuandle, x0: usize) -> Result<Vec<ShadowColoring<usize>>> {
    enumerate_colorings(d, x).into_iter().map(|c| shadow_complete(d, x, &c, x0)).collect()
}

/// State sums over every coloring.
pub fn state_sum_report(d: &LinkDiagram, x: &FiniteQuandle, phi: &CochainTable, x0: usize) -> Result<InvariantReport> {
    let values = all_shadow_colorings(d, x, x0)?
        .iter()
        .map(|s| state_sum(d, s, phi))
        .collect::<Result<Vec<_>>>()?;
    let sum = phi.reduce(values.iter().sum());
    Ok(InvariantReport::new(values, sum))
}

/// `φ_θ(a,b,c) = θ(k₁,a,b,c) − θ(k₁,a◁b,b,c) − θ(k₁,a◁c,b◁c,c) + θ(k₁,(a◁b)◁c,b◁c,c)`.
pub fn four_term_contraction(x: &FiniteQuandle, theta: &CochainTable, k1: usize) -> Result<CochainTable> {
    if theta.arity != 4 {
        return Err(Error::DegreeMismatch { expected: 4, found: theta.arity });
    }
    let n = x.size();
    let mut out = CochainTable::new(3, n, theta.modulus);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if let Ok(v) = four_term(x, theta, k1, a, b, c) {
                    out.set(&[a, b, c], v);
                }
            }
        }
    }
    Ok(out)
}

fn four_term(x: &FiniteQuandle, theta: &CochainTable, k1: usize, a: usize, b: usize, c: usize) -> Result<i64> {
    let ab = x.at(a, b);
    let v = theta.get(&[k1, a, b, c])? - theta.get(&[k1, ab, b, c])? - theta.get(&[k1, x.at(a, c), x.at(b, c), c])?
        + theta.get(&[k1, x.at(ab, c), x.at(b, c), c])?;
    Ok(theta.reduce(v))
}

/// The crossing sum of the four-term combination of `θ`, evaluated crossing by
/// crossing without building the contracted cochain.
pub fn pairing_theorem22(
    d: &LinkDiagram,
    x: &FiniteQuandle,
    s: &ShadowColoring<usize>,
    theta: &CochainTable,
    k1: usize,
) -> Result<i64> {
    if theta.arity != 4 {
        return Err(Error::DegreeMismatch { expected: 4, found: theta.arity });
    }
    let mut total = 0;
    for c in 0..d.crossings.len() {
        let (eps, a, b, cc) = crossing_weight(d, s, c);
        total += eps * four_term(x, theta, k1, a, b, cc)?;
    }
    Ok(theta.reduce(total))
}

pub fn pairing_report(
    d: &LinkDiagram,
    x: &FiniteQuandle,
    theta: &CochainTable,
    k1: usize,
    x0: usize,
) -> Result<InvariantReport> {
    let values = all_shadow_colorings(d, x, x0)?
        .iter()
        .map(|s| pairing_theorem22(d, x, s, theta, k1))
        .collect::<Result<Vec<_>>>()?;
    let sum = theta.reduce(values.iter().sum());
    Ok(InvariantReport::new(values, sum))
}

/// How a cochain fails the quandle 3-cocycle condition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum CocycleFailure {
    /// `φ(x,x,y) ≠ 0` or `φ(x,y,y) ≠ 0`.
    NotNormalized { tuple: Vec<usize> },
    /// `δφ(x1,x2,x3,x4) ≠ 0`.
    Coboundary { tuple: Vec<usize>, value: i64 },
}

/// Exhaustive quandle 3-cocycle check:
/// `Σ_{i=2..4} (−1)^i [φ(.., x̂_i, ..) − φ(x_1◁x_i, .., x_{i−1}◁x_i, x_{i+1}, ..)] = 0`
/// together with the normalization on degenerate triples.
pub fn check_quandle_3cocycle(x: &FiniteQuandle, phi: &CochainTable) -> Result<Option<CocycleFailure>> {
    if phi.arity != 3 || phi.size != x.size() {
        return Err(Error::DegreeMismatch { expected: 3, found: phi.arity });
    }
    let n = x.size();
    for a in 0..n {
        for b in 0..n {
            if phi.get(&[a, a, b])? != 0 {
                return Ok(Some(CocycleFailure::NotNormalized { tuple: vec![a, a, b] }));
            }
            if phi.get(&[a, b, b])? != 0 {
                return Ok(Some(CocycleFailure::NotNormalized { tuple: vec![a, b, b] }));
            }
        }
    }
    let mut t = [0usize; 4];
    for slot in 0..n.pow(4) {
        let mut r = slot;
        for k in (0..4).rev() {
            t[k] = r % n;
            r /= n;
        }
        let mut v = 0;
        for i in 1..4 {
            let sign = if i % 2 == 1 { 1 } else { -1 };
            let skip: Vec<usize> = (0..4).filter(|&j| j != i).map(|j| t[j]).collect();
            let acted: Vec<usize> = (0..4)
                .filter(|&j| j != i)
                .map(|j| if j < i { x.at(t[j], t[i]) } else { t[j] })
                .collect();
            v += sign * (phi.get(&skip)? - phi.get(&acted)?);
        }
        let v = phi.reduce(v);
        if v != 0 {
            return Ok(Some(CocycleFailure::Coboundary { tuple: t.to_vec(), value: v }));
        }
    }
    Ok(None)
}

/// Link types for which the pairing is only determined modulo an integer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "type")]
pub enum LinkType {
    /// The `(m, n)`-torus knot in `S³`: `N = mn`.
    Torus { m: u64, n: u64 },
    /// The torus knot in a solid torus; the two available readings of `N`.
    SolidTorus { m: u64, n: u64, reading: SolidTorusReading },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolidTorusReading {
    /// `N = n`.
    #[default]
    Winding,
    /// `N = m`, the order of the torsion `ℤ/m` in homology.
    Torsion,
}

impl LinkType {
    pub fn modulus(&self) -> u64 {
        match *self {
            LinkType::Torus { m, n } => m * n,
            LinkType::SolidTorus { n, reading: SolidTorusReading::Winding, .. } => n,
            LinkType::SolidTorus { m, reading: SolidTorusReading::Torsion, .. } => m,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Reduced {
    pub value: i64,
    /// The modulus actually applied: `N` for `A = ℤ`, `gcd(k, N)` for `A = ℤ/k`.
    pub modulus: u64,
    pub n: u64,
}

/// Reduces a value of `A = ℤ` (`a_modulus = 0`) or `ℤ/k` modulo `N`.
pub fn mod_reduce(value: i64, a_modulus: u64, link: LinkType) -> Reduced {
    use num_integer::Integer;
    let n = link.modulus();
    let m = if a_modulus == 0 { n } else { a_modulus.gcd(&n) };
    let value = if m == 0 { value } else { value.rem_euclid(m as i64) };
    Reduced { value, modulus: m, n }
}

/// Output of the parabolic pipeline: the quandle class, its image under `φ₃`
/// and the truncated simplices obtained by `β`.
#[derive(Clone, Debug, Serialize)]
pub struct FundamentalClassRep {
    pub quandle_class: Vec<(i64, Vec<ParabolicPoint>)>,
    pub phi: Vec<(i64, Vec<ParabolicPoint>)>,
    pub simplices: Vec<SignedSimplex>,
    /// Classes of degree-2 faces that survive grouping; empty for a cycle.
    pub boundary_residue: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SignedSimplex {
    pub coeff: i64,
    pub simplex: TruncatedSimplex,
}

/// `res(β) ∘ φ₃` applied to the fundamental class of a parabolic shadow
/// coloring, with basepoint `p` in the last slot.
pub fn fundamental_class_rep(
    d: &LinkDiagram,
    q: &ParabolicQuandle,
    s: &ShadowColoring<ParabolicPoint>,
    p: &ParabolicPoint,
) -> Result<FundamentalClassRep> {
    let class = fundamental_class(d, q, s)?;
    let phi = ik_phi(q, &class, p)?;
    let rep = beta_on_chain(d, q, s, &phi)?;
    Ok(FundamentalClassRep { quandle_class: chain_terms(&class), ..rep })
}

/// `β` applied termwise to a simplicial chain on parabolic points, followed
/// by the boundary check.
pub fn beta_on_chain(
    d: &LinkDiagram,
    q: &ParabolicQuandle,
    s: &ShadowColoring<ParabolicPoint>,
    chain: &FormalChain<ParabolicPoint>,
) -> Result<FundamentalClassRep> {
    let mut simplices = Vec::new();
    for (t, c) in chain.terms() {
        let mut simplex = beta_truncated(&q.field, t)?;
        simplex.cusps = t.iter().map(|x| cusp_of(d, s, x)).collect();
        simplices.push((c, simplex));
    }
    let residue = truncated_boundary(&q.field, &simplices)?;
    Ok(FundamentalClassRep {
        quandle_class: Vec::new(),
        phi: chain_terms(chain),
        simplices: simplices.into_iter().map(|(coeff, simplex)| SignedSimplex { coeff, simplex }).collect(),
        boundary_residue: residue.len(),
    })
}

fn chain_terms(c: &FormalChain<ParabolicPoint>) -> Vec<(i64, Vec<ParabolicPoint>)> {
    c.terms().map(|(t, k)| (k, t.clone())).collect()
}

/// The component whose arcs carry the color `x`, when exactly one does; every
/// point of a knot belongs to cusp 0.
fn cusp_of(d: &LinkDiagram, s: &ShadowColoring<ParabolicPoint>, x: &ParabolicPoint) -> Option<usize> {
    if d.components.len() == 1 {
        return Some(0);
    }
    let comps: Vec<usize> = d
        .components
        .iter()
        .enumerate()
        .filter(|(_, comp)| comp.iter().any(|&e| s.arc_colors[d.arc_of_edge(e)] == *x))
        .map(|(i, _)| i)
        .collect();
    match comps.as_slice() {
        [i] => Some(*i),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trefoil() -> LinkDiagram {
        LinkDiagram::parse("X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]").unwrap()
    }

    #[test]
    fn zero_cocycle_and_unknot() {
        let x = FiniteQuandle::dihedral(3).unwrap();
        let phi = CochainTable::zero(3, 3, 3);
        let r = state_sum_report(&trefoil(), &x, &phi, 0).unwrap();
        assert_eq!(r.per_coloring.len(), 9);
        assert!(r.multiset.iter().all(|&v| v == 0));
        let m = mochizuki_cocycle(3, [1, 1, 1, 1]).unwrap();
        let r = state_sum_report(&LinkDiagram::unknot(), &x, &m, 0).unwrap();
        assert_eq!(r.multiset, vec![0, 0, 0]);
    }

    #[test]
    fn missing_entry_is_reported() {
        let x = FiniteQuandle::dihedral(3).unwrap();
        let phi = CochainTable::new(3, 3, 3);
        let d = trefoil();
        let s = &all_shadow_colorings(&d, &x, 0).unwrap()[0];
        assert!(matches!(state_sum(&d, s, &phi), Err(Error::PartialCocycle(_))));
    }

    #[test]
    fn mochizuki_on_trefoil() {
        let x = FiniteQuandle::dihedral(3).unwrap();
        let phi = mochizuki_cocycle(3, [1, 1, 1, 1]).unwrap();
        assert_eq!(check_quandle_3cocycle(&x, &phi).unwrap(), None);
        let d = trefoil();
        let r = state_sum_report(&d, &x, &phi, 0).unwrap();
        let cols = enumerate_colorings(&d, &x);
        let mut nontrivial = Vec::new();
        for (c, v) in cols.iter().zip(&r.per_coloring) {
            if c.iter().all(|&a| a == c[0]) {
                assert_eq!(v.value, 0);
            } else {
                nontrivial.push(v.value);
            }
        }
        assert_eq!(nontrivial.len(), 6);
        assert!(nontrivial[0] != 0 && nontrivial.iter().all(|&v| v == nontrivial[0]));
    }

    #[test]
    fn pairing_first_argument_only_cancels() {
        let x = FiniteQuandle::dihedral(3).unwrap();
        let theta = CochainTable::from_fn(4, 3, 3, |t| (t[0] * 2 + 1) as i64);
        let d = trefoil();
        for s in all_shadow_colorings(&d, &x, 1).unwrap() {
            assert_eq!(pairing_theorem22(&d, &x, &s, &theta, 2).unwrap(), 0);
        }
    }

    #[test]
    fn reductions() {
        assert_eq!(mod_reduce(7, 0, LinkType::Torus { m: 2, n: 3 }).value, 1);
        assert_eq!(mod_reduce(0, 0, LinkType::Torus { m: 2, n: 3 }).value, 0);
        let st = LinkType::SolidTorus { m: 2, n: 3, reading: SolidTorusReading::Winding };
        assert_eq!(mod_reduce(7, 0, st), Reduced { value: 1, modulus: 3, n: 3 });
        let lm = LinkType::SolidTorus { m: 2, n: 3, reading: SolidTorusReading::Torsion };
        assert_eq!(mod_reduce(7, 0, lm).modulus, 2);
        assert_eq!(mod_reduce(5, 4, LinkType::Torus { m: 2, n: 3 }), Reduced { value: 1, modulus: 2, n: 6 });
    }

    #[test]
    fn cochain_json_forms() {
        let t = CochainTable::from_fn(3, 2, 5, |v| v.iter().sum::<usize>() as i64);
        assert_eq!(CochainTable::from_json(&t.to_json(), 3, 2).unwrap(), t);
        let sparse = serde_json::json!({"modulus": 3, "entries": [[0, 1, 1, 2]], "default": 0});
        let s = CochainTable::from_json(&sparse, 3, 2).unwrap();
        assert_eq!(s.get(&[0, 1, 1]).unwrap(), 2);
        assert_eq!(s.get(&[1, 1, 1]).unwrap(), 0);
    }
}
