//! Quandles: finite operation tables, the standard builders, and the
//! parabolic quandle over a number field.

mod parabolic;

pub use parabolic::{det_pair, ParabolicPoint, ParabolicQuandle};

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt::Debug;
use std::sync::OnceLock;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::GroupTable;

/// A right-distributive operation with invertible right translations.
pub trait Quandle {
    type Elem: Clone + Ord + Debug;

    /// `x ◁ y`
    fn op(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;

    /// The unique `z` with `z ◁ y = x`.
    fn op_inv(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;

    fn same(&self, x: &Self::Elem, y: &Self::Elem) -> bool {
        x == y
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "axiom")]
pub enum AxiomViolation {
    /// `x ◁ x != x`
    Idempotency { x: usize },
    /// `· ◁ y` is not a bijection; `x` and `x2` have the same image.
    NotBijective { y: usize, x: usize, x2: usize },
    /// `(x◁y)◁z != (x◁z)◁(y◁z)`
    Distributivity { x: usize, y: usize, z: usize },
    /// An entry outside `0..n`, or a ragged table.
    NotATable { row: usize },
}

/// First violation of axioms I, II, III (checked in that order).
pub fn check_axioms(table: &[Vec<usize>]) -> std::result::Result<(), AxiomViolation> {
    let n = table.len();
    for (row, r) in table.iter().enumerate() {
        if r.len() != n || r.iter().any(|&v| v >= n) {
            return Err(AxiomViolation::NotATable { row });
        }
    }
    for x in 0..n {
        if table[x][x] != x {
            return Err(AxiomViolation::Idempotency { x });
        }
    }
    for y in 0..n {
        let mut seen = vec![usize::MAX; n];
        for x in 0..n {
            let v = table[x][y];
            if seen[v] != usize::MAX {
                return Err(AxiomViolation::NotBijective { y, x: seen[v], x2: x });
            }
            seen[v] = x;
        }
    }
    for x in 0..n {
        for y in 0..n {
            let xy = table[x][y];
            for z in 0..n {
                if table[xy][z] != table[table[x][z]][table[y][z]] {
                    return Err(AxiomViolation::Distributivity { x, y, z });
                }
            }
        }
    }
    Ok(())
}

/// A finite quandle on `0..n`, with `table[i][j] = i ◁ j`.
#[derive(Clone, Debug)]
pub struct FiniteQuandle {
    table: Vec<Vec<usize>>,
    inv_table: Vec<Vec<usize>>,
    pub labels: Vec<String>,
    inner: OnceLock<InnerData>,
}

impl PartialEq for FiniteQuandle {
    fn eq(&self, other: &Self) -> bool {
        self.table == other.table
    }
}

impl Eq for FiniteQuandle {}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InnerData {
    /// Orbit id of each element; ids ordered by minimal element.
    pub orbit_of: Vec<usize>,
    pub orbits: Vec<Vec<usize>>,
    /// The group generated by the right translations, as permutations
    /// (`perm[x]` is the image of `x`), sorted, identity first.
    pub group: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct TableJson {
    size: usize,
    table: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    labels: Vec<String>,
}

/// One family `(K_l, k_l)` of a coset quandle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetFamily {
    pub subgroup: Vec<usize>,
    pub k: usize,
}

/// Where each coset-quandle element came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CosetElement {
    pub family: usize,
    /// Sorted coset `K_l g`.
    pub coset: Vec<usize>,
}

impl FiniteQuandle {
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self> {
        if table.is_empty() {
            return Err(Error::InvalidQuandle("empty table".into()));
        }
        check_axioms(&table).map_err(|v| Error::InvalidQuandle(format!("{v:?}")))?;
        let n = table.len();
        let mut inv_table = vec![vec![0; n]; n];
        for x in 0..n {
            for y in 0..n {
                inv_table[table[x][y]][y] = x;
            }
        }
        let labels = (0..n).map(|i| i.to_string()).collect();
        Ok(FiniteQuandle { table, inv_table, labels, inner: OnceLock::new() })
    }

    pub fn trivial(n: usize) -> Result<Self> {
        Self::from_table((0..n).map(|i| vec![i; n]).collect())
    }

    /// `R_n`: `i ◁ j = 2j - i mod n`.
    pub fn dihedral(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidQuandle("dihedral quandle of order 0".into()));
        }
        Self::from_table((0..n).map(|i| (0..n).map(|j| (2 * j + n - i) % n).collect()).collect())
    }

    /// `x ◁ y = t x + (1 - t) y` over `Z/m`.
    pub fn alexander(m: usize, t: i64) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidQuandle("modulus 0".into()));
        }
        let mi = m as i64;
        let t = t.rem_euclid(mi);
        if t.gcd(&mi) != 1 {
            return Err(Error::NonInvertibleParameter(format!("t = {t} is not a unit mod {m}")));
        }
        let s = (1 - t).rem_euclid(mi);
        Self::from_table(
            (0..mi)
                .map(|x| (0..mi).map(|y| ((t * x + s * y) % mi) as usize).collect())
                .collect(),
        )
    }

    /// Conjugation quandle `x ◁ y = y^-1 x y` on a conjugation-closed subset.
    /// Elements are the given group elements in sorted order.
    pub fn conjugation(g: &GroupTable, elems: &[usize]) -> Result<Self> {
        let set: BTreeSet<usize> = elems.iter().copied().collect();
        let list: Vec<usize> = set.iter().copied().collect();
        let pos = |x: usize| list.iter().position(|&e| e == x);
        let mut table = Vec::with_capacity(list.len());
        for &x in &list {
            let mut row = Vec::with_capacity(list.len());
            for &y in &list {
                let c = g.conj(x, y);
                row.push(pos(c).ok_or_else(|| {
                    Error::InvalidQuandle(format!("subset is not closed under conjugation ({x}^{y})"))
                })?);
            }
            table.push(row);
        }
        let mut q = Self::from_table(table)?;
        q.labels = list.iter().map(|&x| g.labels[x].clone()).collect();
        Ok(q)
    }

    /// Coset quandle on the disjoint union of `K_l \ G`, with
    /// `K_l x ◁ K_m y = K_l (x y^-1 k_m y)`.
    pub fn coset(g: &GroupTable, families: &[CosetFamily]) -> Result<(Self, Vec<CosetElement>)> {
        let mut elems = Vec::new();
        let mut which = Vec::new();
        for (l, fam) in families.iter().enumerate() {
            if !g.is_subgroup(&fam.subgroup) {
                return Err(Error::InvalidGroup(format!("family {l} is not a subgroup")));
            }
            if !fam.subgroup.contains(&fam.k) {
                return Err(Error::NotInSubgroup { family: l, element: fam.k });
            }
            if fam.subgroup.iter().any(|&h| !g.commutes(h, fam.k)) {
                return Err(Error::NonCentralElement { family: l, element: fam.k });
            }
            let (cosets, w) = g.right_cosets(&fam.subgroup);
            let base = elems.len();
            which.push(w.iter().map(|&c| base + c).collect::<Vec<_>>());
            elems.extend(cosets.into_iter().map(|coset| CosetElement { family: l, coset }));
        }
        let n = elems.len();
        let mut table = vec![vec![0; n]; n];
        for (i, ei) in elems.iter().enumerate() {
            let x = ei.coset[0];
            for (j, ej) in elems.iter().enumerate() {
                let y = ej.coset[0];
                let k = families[ej.family].k;
                let r = g.mul(x, g.conj(k, y));
                table[i][j] = which[ei.family][r];
            }
        }
        let mut q = Self::from_table(table)?;
        q.labels = elems.iter().map(|e| format!("K{}*{}", e.family, g.labels[e.coset[0]])).collect();
        Ok((q, elems))
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        if value.get("kind").is_some() {
            return QuandleSpec::from_json(value)?.build();
        }
        let raw: TableJson =
            serde_json::from_value(value.clone()).map_err(|e| Error::Parse(format!("quandle: {e}")))?;
        if raw.table.len() != raw.size {
            return Err(Error::InvalidQuandle(format!("size {} but {} rows", raw.size, raw.table.len())));
        }
        let mut q = Self::from_table(raw.table)?;
        if raw.labels.len() == raw.size {
            q.labels = raw.labels;
        }
        Ok(q)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let trivial_labels = self.labels.iter().enumerate().all(|(i, l)| *l == i.to_string());
        serde_json::to_value(TableJson {
            size: self.size(),
            table: self.table.clone(),
            labels: if trivial_labels { Vec::new() } else { self.labels.clone() },
        })
        .expect("serializable")
    }

    pub fn size(&self) -> usize {
        self.table.len()
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn at(&self, x: usize, y: usize) -> usize {
        self.table[x][y]
    }

    pub fn at_inv(&self, x: usize, y: usize) -> usize {
        self.inv_table[x][y]
    }

    pub fn inner(&self) -> &InnerData {
        self.inner.get_or_init(|| compute_inner(&self.table))
    }

    /// Orbit partition and the inner group.
    pub fn inner_orbit_data(&self) -> (&[Vec<usize>], &[Vec<usize>]) {
        let d = self.inner();
        (&d.orbits, &d.group)
    }

    pub fn orbit_count(&self) -> usize {
        self.inner().orbits.len()
    }

    /// Lexicographically least tuple in the diagonal orbit of `t` under
    /// the inner group.
    pub fn canonicalize(&self, t: &[usize]) -> Vec<usize> {
        let group = &self.inner().group;
        let mut best = t.to_vec();
        let mut cand = vec![0; t.len()];
        for perm in group {
            for (c, &x) in cand.iter_mut().zip(t) {
                *c = perm[x];
            }
            if cand < best {
                best.copy_from_slice(&cand);
            }
        }
        best
    }

    /// Some bijection `f` with `f(x◁y) = f(x)◁f(y)` into `other`, by
    /// backtracking; intended for small quandles.
    pub fn isomorphism_to(&self, other: &FiniteQuandle) -> Option<Vec<usize>> {
        let n = self.size();
        if n != other.size() {
            return None;
        }
        let mut f = vec![usize::MAX; n];
        let mut used = vec![false; n];
        fn rec(a: &FiniteQuandle, b: &FiniteQuandle, i: usize, f: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
            let n = a.size();
            if i == n {
                return true;
            }
            for v in 0..n {
                if used[v] {
                    continue;
                }
                f[i] = v;
                let ok = (0..=i).all(|j| {
                    let (x, y) = (a.at(i, j), a.at(j, i));
                    let fx_ok = x > i || f[x] == b.at(f[i], f[j]);
                    let fy_ok = y > i || f[y] == b.at(f[j], f[i]);
                    fx_ok && fy_ok
                });
                if ok {
                    used[v] = true;
                    if rec(a, b, i + 1, f, used) {
                        return true;
                    }
                    used[v] = false;
                }
            }
            f[i] = usize::MAX;
            false
        }
        if rec(self, other, 0, &mut f, &mut used) {
            debug_assert!((0..n).all(|x| (0..n).all(|y| f[self.at(x, y)] == other.at(f[x], f[y]))));
            Some(f)
        } else {
            None
        }
    }
}

impl Quandle for FiniteQuandle {
    type Elem = usize;

    fn op(&self, x: &usize, y: &usize) -> usize {
        self.table[*x][*y]
    }

    fn op_inv(&self, x: &usize, y: &usize) -> usize {
        self.inv_table[*x][*y]
    }
}

fn compute_inner(table: &[Vec<usize>]) -> InnerData {
    let n = table.len();
    let gens: Vec<Vec<usize>> = (0..n).map(|y| (0..n).map(|x| table[x][y]).collect()).collect();
    let id: Vec<usize> = (0..n).collect();
    let mut seen: HashSet<Vec<usize>> = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(p) = queue.pop_front() {
        for g in &gens {
            let q: Vec<usize> = p.iter().map(|&x| g[x]).collect();
            if seen.insert(q.clone()) {
                queue.push_back(q);
            }
        }
    }
    let mut group: Vec<Vec<usize>> = seen.into_iter().collect();
    group.sort();

    let mut orbit_of = vec![usize::MAX; n];
    let mut orbits = Vec::new();
    for x in 0..n {
        if orbit_of[x] != usize::MAX {
            continue;
        }
        let id = orbits.len();
        let mut orbit = vec![x];
        orbit_of[x] = id;
        let mut i = 0;
        while i < orbit.len() {
            let z = orbit[i];
            for g in &gens {
                let w = g[z];
                if orbit_of[w] == usize::MAX {
                    orbit_of[w] = id;
                    orbit.push(w);
                }
            }
            i += 1;
        }
        orbit.sort_unstable();
        orbits.push(orbit);
    }
    InnerData { orbit_of, orbits, group }
}

/// Builder specifications, as accepted in JSON (`{"kind": ...}`).
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum QuandleSpec {
    Trivial { n: usize },
    Dihedral { n: usize },
    Alexander { m: usize, t: i64 },
    Conjugation { group: serde_json::Value, elements: Vec<usize> },
    Coset { group: serde_json::Value, families: Vec<CosetFamilySpec> },
    Table { table: Vec<Vec<usize>> },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CosetFamilySpec {
    /// Either an element list or the name of a subgroup in the group JSON.
    pub subgroup: serde_json::Value,
    pub k: usize,
}

impl QuandleSpec {
    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        serde_json::from_value(value.clone()).map_err(|e| Error::Parse(format!("quandle spec: {e}")))
    }

    pub fn build(&self) -> Result<FiniteQuandle> {
        match self {
            QuandleSpec::Trivial { n } => FiniteQuandle::trivial(*n),
            QuandleSpec::Dihedral { n } => FiniteQuandle::dihedral(*n),
            QuandleSpec::Alexander { m, t } => FiniteQuandle::alexander(*m, *t),
            QuandleSpec::Conjugation { group, elements } => {
                FiniteQuandle::conjugation(&GroupTable::from_json(group)?, elements)
            }
            QuandleSpec::Coset { group, families } => {
                let g = GroupTable::from_json(group)?;
                let fams = families
                    .iter()
                    .map(|f| {
                        let subgroup = match &f.subgroup {
                            serde_json::Value::String(name) => g.subgroup(name)?.to_vec(),
                            v => serde_json::from_value(v.clone())
                                .map_err(|e| Error::Parse(format!("subgroup: {e}")))?,
                        };
                        Ok(CosetFamily { subgroup, k: f.k })
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(FiniteQuandle::coset(&g, &fams)?.0)
            }
            QuandleSpec::Table { table } => FiniteQuandle::from_table(table.clone()),
        }
    }
}
