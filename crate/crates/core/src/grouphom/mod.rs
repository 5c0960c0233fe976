//! Relative group (co)homology tooling for a finite group `G` and a family of
//! subgroups `K_1..K_m`: the mapping-cone complex, the map `α` to coset tuples,
//! nonhomogeneous relative 3-cocycles, malnormality and transfer checks.
//!
//! The parabolic side (truncated simplices and `β`) lives in [`truncated`].

pub mod truncated;

use std::collections::BTreeMap;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::chains::{quandle_project, FormalChain};
use crate::error::{Error, Result};
use crate::group::GroupTable;

pub use truncated::{
    beta_truncated, group_by_equivalence, parabolic_tuple_equiv, truncated_boundary, TruncatedFace,
    TruncatedSimplex,
};

/// Generator of the mapping-cone complex `C^gr_n(G, 𝒦)`.
///
/// In degree `n`, `Group` carries `n+1` elements of `G` and `Sub` carries `n`
/// elements of `K_family`. Degree 1 has only `Group` generators.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ConeGen {
    Group { family: usize, g: Vec<usize> },
    Sub { family: usize, k: Vec<usize> },
}

impl ConeGen {
    pub fn degree(&self) -> usize {
        match self {
            ConeGen::Group { g, .. } => g.len().saturating_sub(1),
            ConeGen::Sub { k, .. } => k.len(),
        }
    }
}

/// A family of subgroups of one group, each given by its element list.
#[derive(Clone, Debug)]
pub struct SubgroupFamily<'a> {
    pub group: &'a GroupTable,
    pub subgroups: Vec<Vec<usize>>,
}

impl<'a> SubgroupFamily<'a> {
    pub fn new(group: &'a GroupTable, subgroups: Vec<Vec<usize>>) -> Result<Self> {
        for (i, k) in subgroups.iter().enumerate() {
            if !group.is_subgroup(k) {
                return Err(Error::InvalidGroup(format!("family {i} is not a subgroup")));
            }
        }
        Ok(SubgroupFamily { group, subgroups })
    }

    /// All generators of degree `n` (for `n ≥ 1`).
    pub fn cone_basis(&self, n: usize) -> Vec<ConeGen> {
        let g: Vec<usize> = (0..self.group.size()).collect();
        let mut out = Vec::new();
        for family in 0..self.subgroups.len() {
            for t in tuples(&g, n + 1) {
                out.push(ConeGen::Group { family, g: t });
            }
            if n > 1 {
                for t in tuples(&self.subgroups[family], n) {
                    out.push(ConeGen::Sub { family, k: t });
                }
            }
        }
        out
    }

    /// Mapping-cone boundary
    /// `∂(g⃗, k⃗) = (∂^Δ g⃗ + (-1)^n ι(k⃗), ∂^Δ k⃗)`, where the `Sub` part is
    /// dropped when it would land in degree 1. Degree-0 terms are reduced to
    /// coset representatives.
    pub fn cone_boundary(&self, chain: &FormalChain<ConeGen>) -> Result<FormalChain<ConeGen>> {
        let n = chain.degree;
        if n == 0 {
            return Err(Error::DegreeMismatch { expected: 1, found: 0 });
        }
        let mut out = FormalChain::zero(n - 1);
        for (t, c) in chain.terms() {
            let [gen] = t.as_slice() else {
                return Err(Error::DegreeMismatch { expected: 1, found: t.len() });
            };
            if gen.degree() != n {
                return Err(Error::DegreeMismatch { expected: n, found: gen.degree() });
            }
            match gen {
                ConeGen::Group { family, g } => {
                    for (i, mut face) in faces(g) {
                        if n == 1 {
                            // degree 0 is spanned by the cosets K_family\G
                            face[0] = self.coset_rep(*family, face[0]);
                        }
                        out.add_term(vec![ConeGen::Group { family: *family, g: face }], sign(i) * c);
                    }
                }
                ConeGen::Sub { family, k } => {
                    let s = if n % 2 == 0 { c } else { -c };
                    out.add_term(vec![ConeGen::Group { family: *family, g: k.clone() }], s);
                    if n - 1 > 1 {
                        for (i, face) in faces(k) {
                            out.add_term(vec![ConeGen::Sub { family: *family, k: face }], sign(i) * c);
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// Least element of the coset `K_family x`.
    pub fn coset_rep(&self, family: usize, x: usize) -> usize {
        self.subgroups[family].iter().map(|&k| self.group.mul(k, x)).min().expect("nonempty subgroup")
    }

    /// `α`: `(g⃗ ; k⃗) ↦ (K_j g_0, .., K_j g_n)` in the normalized simplicial
    /// complex of `⊔_j K_j\G`. `Sub` generators go to zero.
    pub fn alpha_map(&self, chain: &FormalChain<ConeGen>) -> Result<FormalChain<Coset>> {
        let which: Vec<Vec<usize>> = self.subgroups.iter().map(|k| self.group.right_cosets(k).1).collect();
        let mut out = FormalChain::zero(chain.degree);
        for (t, c) in chain.terms() {
            let [gen] = t.as_slice() else {
                return Err(Error::DegreeMismatch { expected: 1, found: t.len() });
            };
            if let ConeGen::Group { family, g } = gen {
                let tuple: Vec<Coset> = g
                    .iter()
                    .map(|&x| Coset { family: *family, index: which[*family][x] })
                    .collect();
                out.add_term(tuple, c);
            }
        }
        Ok(quandle_project(&out))
    }

    /// Malnormality: `g⁻¹ K_i g ∩ K_j = {1}` for all `i, j` and `g ∉ K_j`.
    pub fn malnormal_check(&self) -> MalnormalVerdict {
        let g = self.group;
        let e = g.identity();
        for (i, ki) in self.subgroups.iter().enumerate() {
            for (j, kj) in self.subgroups.iter().enumerate() {
                let mut in_kj = vec![false; g.size()];
                for &x in kj {
                    in_kj[x] = true;
                }
                for x in 0..g.size() {
                    if in_kj[x] {
                        continue;
                    }
                    if let Some(h) = ki.iter().map(|&k| g.conj(k, x)).find(|&h| h != e && in_kj[h]) {
                        return MalnormalVerdict {
                            malnormal: false,
                            witness: Some(MalnormalWitness { i, j, g: x, element: h }),
                        };
                    }
                }
            }
        }
        MalnormalVerdict { malnormal: true, witness: None }
    }
}

/// A right coset `K_family g`, identified by its index in
/// [`GroupTable::right_cosets`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Coset {
    pub family: usize,
    pub index: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MalnormalWitness {
    pub i: usize,
    pub j: usize,
    /// `g ∉ K_j` with `g⁻¹ K_i g ∩ K_j ≠ {1}`.
    pub g: usize,
    /// A non-identity element of that intersection.
    pub element: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MalnormalVerdict {
    pub malnormal: bool,
    pub witness: Option<MalnormalWitness>,
}

/// `gcd(|K_i|, m) = 1` for every `i`, i.e. each `|K_i|` is invertible in `ℤ/m`.
pub fn transfer_check(orders: &[usize], m: u64) -> bool {
    orders.iter().all(|&k| (k as u64).gcd(&m) == 1)
}

fn sign(i: usize) -> i64 {
    if i % 2 == 0 {
        1
    } else {
        -1
    }
}

fn faces(t: &[usize]) -> impl Iterator<Item = (usize, Vec<usize>)> + '_ {
    (0..t.len()).map(move |i| {
        let mut f = t.to_vec();
        f.remove(i);
        (i, f)
    })
}

fn tuples(elems: &[usize], len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|t: Vec<usize>| {
                elems.iter().map(move |&x| {
                    let mut t = t.clone();
                    t.push(x);
                    t
                })
            })
            .collect();
    }
    out
}

/// Coefficients `ℤ` (`modulus = 0`) or `ℤ/m`, with `G` acting by unit
/// multipliers (`g·a = action[g]·a`); no action means trivial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coefficients {
    pub modulus: u64,
    pub action: Option<Vec<i64>>,
}

impl Coefficients {
    pub fn trivial(modulus: u64) -> Self {
        Coefficients { modulus, action: None }
    }

    pub fn reduce(&self, v: i64) -> i64 {
        if self.modulus == 0 {
            v
        } else {
            v.rem_euclid(self.modulus as i64)
        }
    }

    pub fn act(&self, g: usize, v: i64) -> i64 {
        match &self.action {
            None => v,
            Some(u) => self.reduce(u[g] * v),
        }
    }

    /// The action must be a homomorphism into the units.
    pub fn check(&self, group: &GroupTable) -> Result<()> {
        let Some(u) = &self.action else { return Ok(()) };
        if u.len() != group.size() {
            return Err(Error::InvalidGroup("action table has the wrong length".into()));
        }
        for a in 0..group.size() {
            for b in 0..group.size() {
                if self.reduce(u[group.mul(a, b)]) != self.reduce(u[a] * u[b]) {
                    return Err(Error::InvalidGroup(format!("action is not a homomorphism at ({a}, {b})")));
                }
            }
        }
        Ok(())
    }
}

/// Per-family data `(θ_ℓ: G³ → A, η_ℓ: K_ℓ² → A)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyCocycle {
    pub subgroup: Vec<usize>,
    /// Flat table indexed by `(g1·n + g2)·n + g3`.
    pub theta: Vec<i64>,
    pub eta: BTreeMap<(usize, usize), i64>,
}

/// A nonhomogeneous 3-cocycle of `G` relative to `K_1..K_m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelativeCocycle3 {
    pub coefficients: Coefficients,
    pub families: Vec<FamilyCocycle>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CocycleEquation {
    K1,
    K2,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CocycleViolation {
    pub family: usize,
    pub equation: CocycleEquation,
    pub tuple: Vec<usize>,
    pub residual: i64,
}

impl FamilyCocycle {
    fn theta(&self, n: usize, a: usize, b: usize, c: usize) -> i64 {
        self.theta[(a * n + b) * n + c]
    }

    fn eta(&self, a: usize, b: usize) -> i64 {
        self.eta.get(&(a, b)).copied().unwrap_or(0)
    }
}

impl RelativeCocycle3 {
    /// `θ = δf` on `G` and `η = f|_K` for a 2-cochain `f` (flat `n×n` table).
    pub fn coboundary(group: &GroupTable, subgroups: &[Vec<usize>], f: &[i64], coefficients: Coefficients) -> Self {
        let n = group.size();
        let fv = |a: usize, b: usize| f[a * n + b];
        let mut theta = vec![0; n * n * n];
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let v = coefficients.act(a, fv(b, c)) - fv(group.mul(a, b), c) + fv(a, group.mul(b, c)) - fv(a, b);
                    theta[(a * n + b) * n + c] = coefficients.reduce(v);
                }
            }
        }
        let families = subgroups
            .iter()
            .map(|k| FamilyCocycle {
                subgroup: k.clone(),
                theta: theta.clone(),
                eta: k.iter().flat_map(|&a| k.iter().map(move |&b| ((a, b), fv(a, b)))).collect(),
            })
            .collect();
        RelativeCocycle3 { coefficients, families }
    }

    /// Exhaustive check of (k1) over `G⁴` and (k2) over `K_ℓ³`; returns the
    /// first violation found.
    pub fn check(&self, group: &GroupTable) -> Result<Option<CocycleViolation>> {
        self.coefficients.check(group)?;
        let n = group.size();
        let co = &self.coefficients;
        for (l, fam) in self.families.iter().enumerate() {
            if fam.theta.len() != n * n * n {
                return Err(Error::InvalidGroup(format!("theta table of family {l} has the wrong size")));
            }
            if !group.is_subgroup(&fam.subgroup) {
                return Err(Error::InvalidGroup(format!("family {l} is not a subgroup")));
            }
            let th = |a, b, c| fam.theta(n, a, b, c);
            for g1 in 0..n {
                for g2 in 0..n {
                    for g3 in 0..n {
                        for g4 in 0..n {
                            let v = co.act(g1, th(g2, g3, g4)) - th(group.mul(g1, g2), g3, g4)
                                + th(g1, group.mul(g2, g3), g4)
                                - th(g1, g2, group.mul(g3, g4))
                                + th(g1, g2, g3);
                            let r = co.reduce(v);
                            if r != 0 {
                                return Ok(Some(CocycleViolation {
                                    family: l,
                                    equation: CocycleEquation::K1,
                                    tuple: vec![g1, g2, g3, g4],
                                    residual: r,
                                }));
                            }
                        }
                    }
                }
            }
            for &k1 in &fam.subgroup {
                for &k2 in &fam.subgroup {
                    for &k3 in &fam.subgroup {
                        let rhs = co.act(k1, fam.eta(k2, k3)) - fam.eta(group.mul(k1, k2), k3)
                            + fam.eta(k1, group.mul(k2, k3))
                            - fam.eta(k1, k2);
                        let r = co.reduce(th(k1, k2, k3) - rhs);
                        if r != 0 {
                            return Ok(Some(CocycleViolation {
                                family: l,
                                equation: CocycleEquation::K2,
                                tuple: vec![k1, k2, k3],
                                residual: r,
                            }));
                        }
                    }
                }
            }
        }
        Ok(None)
    }

    /// Reads
    /// `{"modulus":m,"action":[..]?,"families":[{"subgroup":..,"theta":[[g1,g2,g3,v],..],"eta":[[k1,k2,v],..]}]}`.
    /// Entries not listed are zero. `subgroup` is an element list or the name of
    /// a subgroup stored in the group table.
    pub fn from_json(value: &Value, group: &GroupTable) -> Result<Self> {
        let raw: CocycleJson = serde_json::from_value(value.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        let n = group.size();
        let mut families = Vec::new();
        for f in raw.families {
            let subgroup = match &f.subgroup {
                Value::String(name) => group.subgroup(name)?.to_vec(),
                v => serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?,
            };
            let mut theta = vec![0; n * n * n];
            for e in &f.theta {
                let [a, b, c, v] = e.as_slice() else {
                    return Err(Error::Parse("theta entries are [g1,g2,g3,value]".into()));
                };
                let idx = |x: i64| usize::try_from(x).ok().filter(|&x| x < n);
                let (Some(a), Some(b), Some(c)) = (idx(*a), idx(*b), idx(*c)) else {
                    return Err(Error::Parse("theta entry out of range".into()));
                };
                theta[(a * n + b) * n + c] = *v;
            }
            let mut eta = BTreeMap::new();
            for e in &f.eta {
                let [a, b, v] = e.as_slice() else {
                    return Err(Error::Parse("eta entries are [k1,k2,value]".into()));
                };
                if *a < 0 || *b < 0 || *a as usize >= n || *b as usize >= n {
                    return Err(Error::Parse("eta entry out of range".into()));
                }
                eta.insert((*a as usize, *b as usize), *v);
            }
            families.push(FamilyCocycle { subgroup, theta, eta });
        }
        Ok(RelativeCocycle3 { coefficients: Coefficients { modulus: raw.modulus, action: raw.action }, families })
    }

    pub fn to_json(&self, group: &GroupTable) -> Value {
        let n = group.size();
        let families: Vec<Value> = self
            .families
            .iter()
            .map(|f| {
                let mut theta = Vec::new();
                for a in 0..n {
                    for b in 0..n {
                        for c in 0..n {
                            let v = f.theta(n, a, b, c);
                            if v != 0 {
                                theta.push(vec![a as i64, b as i64, c as i64, v]);
                            }
                        }
                    }
                }
                let eta: Vec<[i64; 3]> =
                    f.eta.iter().filter(|(_, &v)| v != 0).map(|(&(a, b), &v)| [a as i64, b as i64, v]).collect();
                serde_json::json!({"subgroup": f.subgroup, "theta": theta, "eta": eta})
            })
            .collect();
        let mut out = serde_json::json!({"modulus": self.coefficients.modulus, "families": families});
        if let Some(a) = &self.coefficients.action {
            out["action"] = serde_json::json!(a);
        }
        out
    }
}

#[derive(Deserialize)]
struct CocycleJson {
    #[serde(default)]
    modulus: u64,
    #[serde(default)]
    action: Option<Vec<i64>>,
    families: Vec<FamilyJson>,
}

#[derive(Deserialize)]
struct FamilyJson {
    subgroup: Value,
    #[serde(default)]
    theta: Vec<Vec<i64>>,
    #[serde(default)]
    eta: Vec<Vec<i64>>,
}
