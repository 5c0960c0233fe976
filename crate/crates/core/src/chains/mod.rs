//! Formal chains, rack/quandle and simplicial boundaries, the fundamental
//! 3-class of a shadow coloring and the Inoue-Kabaya map.

mod homology;
mod snf;

pub use homology::{
    bar_homology, boundary_matrix, budget_from_env, cyclic_group_homology, homology, homology_with_budget, is_boundary,
    ComplexSlice, Theory, DEFAULT_BUDGET,
};
pub use snf::{smith_normal_form, AbelianGroupInvariants, SparseMatrix};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::coloring::{crossing_weight, ShadowColoring};
use crate::diagram::LinkDiagram;
use crate::error::{Error, Result};
use crate::quandle::{FiniteQuandle, Quandle};

/// A finitely supported integer combination of tuples.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FormalChain<T: Ord> {
    pub degree: usize,
    terms: BTreeMap<Vec<T>, i64>,
}

#[derive(Serialize, Deserialize)]
struct TermJson<T> {
    tuple: Vec<T>,
    coeff: i64,
}

#[derive(Serialize, Deserialize)]
struct ChainJson<T> {
    degree: usize,
    terms: Vec<TermJson<T>>,
}

impl<T: Ord + Clone> FormalChain<T> {
    pub fn zero(degree: usize) -> Self {
        FormalChain { degree, terms: BTreeMap::new() }
    }

    pub fn from_terms(degree: usize, terms: impl IntoIterator<Item = (Vec<T>, i64)>) -> Self {
        let mut c = Self::zero(degree);
        for (t, k) in terms {
            c.add_term(t, k);
        }
        c
    }

    pub fn generator(degree: usize, tuple: Vec<T>) -> Self {
        Self::from_terms(degree, [(tuple, 1)])
    }

    pub fn add_term(&mut self, tuple: Vec<T>, coeff: i64) {
        if coeff == 0 {
            return;
        }
        let entry = self.terms.entry(tuple);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if *o.get() == 0 {
                    o.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<T>, i64)> {
        self.terms.iter().map(|(t, &c)| (t, c))
    }

    pub fn coeff(&self, tuple: &[T]) -> i64 {
        self.terms.get(tuple).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut c = self.clone();
        for (t, k) in other.terms() {
            c.add_term(t.clone(), k);
        }
        c
    }

    pub fn scale(&self, k: i64) -> Self {
        Self::from_terms(self.degree, self.terms().map(|(t, c)| (t.clone(), c * k)))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1))
    }

    /// Applies `f` to every tuple and collects like terms.
    pub fn map<U: Ord + Clone>(&self, f: impl Fn(&[T]) -> Vec<U>) -> FormalChain<U> {
        FormalChain::from_terms(self.degree, self.terms().map(|(t, c)| (f(t), c)))
    }

    pub fn filter(&self, keep: impl Fn(&[T]) -> bool) -> Self {
        Self::from_terms(self.degree, self.terms().filter(|(t, _)| keep(t)).map(|(t, c)| (t.clone(), c)))
    }

    fn uniform_len(&self, expected: usize) -> Result<()> {
        match self.terms.keys().find(|t| t.len() != expected) {
            Some(t) => Err(Error::DegreeMismatch { expected, found: t.len() }),
            None => Ok(()),
        }
    }
}

impl<T: Ord + Clone + Serialize> FormalChain<T> {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(ChainJson {
            degree: self.degree,
            terms: self.terms().map(|(t, c)| TermJson { tuple: t.clone(), coeff: c }).collect(),
        })
        .expect("serializable")
    }
}

impl<T: Ord + Clone + for<'de> Deserialize<'de>> FormalChain<T> {
    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let raw: ChainJson<T> =
            serde_json::from_value(value.clone()).map_err(|e| Error::Parse(format!("chain: {e}")))?;
        Ok(Self::from_terms(raw.degree, raw.terms.into_iter().map(|t| (t.tuple, t.coeff))))
    }
}

/// `∂(x_1..x_n) = Σ_i (-1)^i [(x_1◁x_i, .., x_{i-1}◁x_i, x_{i+1}, .., x_n) - (x_1, .., ^x_i, .., x_n)]`,
/// with `∂_1 = 0`.
pub fn rack_boundary<Q: Quandle>(q: &Q, chain: &FormalChain<Q::Elem>) -> Result<FormalChain<Q::Elem>> {
    let n = chain.degree;
    if n == 0 {
        return Err(Error::DegreeMismatch { expected: 1, found: 0 });
    }
    chain.uniform_len(n)?;
    let mut out = FormalChain::zero(n - 1);
    if n == 1 {
        return Ok(out);
    }
    for (t, c) in chain.terms() {
        for i in 1..n {
            let sign = if (i + 1) % 2 == 0 { c } else { -c };
            let xi = &t[i];
            let acted: Vec<Q::Elem> =
                t[..i].iter().map(|x| q.op(x, xi)).chain(t[i + 1..].iter().cloned()).collect();
            let plain: Vec<Q::Elem> = t[..i].iter().chain(t[i + 1..].iter()).cloned().collect();
            out.add_term(acted, sign);
            out.add_term(plain, -sign);
        }
        // i = 1 (first coordinate): both faces coincide and cancel.
    }
    Ok(out)
}

/// Alternating face deletion on tuples of length `degree + 1`.
pub fn simplicial_boundary<T: Ord + Clone>(chain: &FormalChain<T>) -> Result<FormalChain<T>> {
    let n = chain.degree;
    if n == 0 {
        return Err(Error::DegreeMismatch { expected: 1, found: 0 });
    }
    chain.uniform_len(n + 1)?;
    let mut out = FormalChain::zero(n - 1);
    for (t, c) in chain.terms() {
        for i in 0..=n {
            let face: Vec<T> = t.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, x)| x.clone()).collect();
            out.add_term(face, if i % 2 == 0 { c } else { -c });
        }
    }
    Ok(out)
}

pub fn is_degenerate<T: PartialEq>(t: &[T]) -> bool {
    t.windows(2).any(|w| w[0] == w[1])
}

/// Drops tuples with two equal consecutive entries.
pub fn quandle_project<T: Ord + Clone>(chain: &FormalChain<T>) -> FormalChain<T> {
    chain.filter(|t| !is_degenerate(t))
}

/// `Σ_τ ε_τ (λ(x_τ), C(y_τ), C(z_τ))` before removing degenerate terms.
pub fn fundamental_class_raw<Q: Quandle>(d: &LinkDiagram, s: &ShadowColoring<Q::Elem>) -> FormalChain<Q::Elem> {
    let mut c = FormalChain::zero(3);
    for i in 0..d.crossings.len() {
        let (eps, x, y, z) = crossing_weight(d, s, i);
        c.add_term(vec![x, y, z], eps);
    }
    c
}

/// The fundamental 3-class in the quandle complex; checked to be a cycle.
pub fn fundamental_class<Q: Quandle>(
    d: &LinkDiagram,
    q: &Q,
    s: &ShadowColoring<Q::Elem>,
) -> Result<FormalChain<Q::Elem>> {
    let c = quandle_project(&fundamental_class_raw::<Q>(d, s));
    let b = quandle_project(&rack_boundary(q, &c)?);
    if !b.is_zero() {
        return Err(Error::NotACycle(format!("boundary has {} terms", b.len())));
    }
    Ok(c)
}

/// `φ_n(x_1..x_n) = Σ_ι (-1)^{ι(2)+..+ι(n)} (x(ι,1), .., x(ι,n), p)` with
/// `x(ι,i) = x_i ◁^{ι(i+1)} x_{i+1} .. ◁^{ι(n)} x_n`.
pub fn ik_phi<Q: Quandle>(q: &Q, chain: &FormalChain<Q::Elem>, p: &Q::Elem) -> Result<FormalChain<Q::Elem>> {
    let n = chain.degree;
    chain.uniform_len(n)?;
    let mut out = FormalChain::zero(n);
    if n == 0 {
        for (_, c) in chain.terms() {
            out.add_term(vec![p.clone()], c);
        }
        return Ok(out);
    }
    for (t, c) in chain.terms() {
        for mask in 0u32..(1 << (n - 1)) {
            // bit j-1 of mask is ι(j+1), the action by x_{j+1} (0-based j)
            let acts = |j: usize| mask >> (j - 1) & 1 == 1;
            let mut tuple = Vec::with_capacity(n + 1);
            for i in 0..n {
                let mut x = t[i].clone();
                for j in i + 1..n {
                    if acts(j) {
                        x = q.op(&x, &t[j]);
                    }
                }
                tuple.push(x);
            }
            tuple.push(p.clone());
            let sign = if mask.count_ones() % 2 == 0 { c } else { -c };
            out.add_term(tuple, sign);
        }
    }
    Ok(out)
}

/// Replaces every tuple by the least tuple in its diagonal inner-group orbit.
pub fn coinvariant_canonicalize(x: &FiniteQuandle, chain: &FormalChain<usize>) -> FormalChain<usize> {
    chain.map(|t| x.canonicalize(t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::{enumerate_colorings, shadow_complete};

    fn r(n: usize) -> FiniteQuandle {
        FiniteQuandle::dihedral(n).unwrap()
    }

    #[test]
    fn rack_boundary_degree_two() {
        let q = r(5);
        let c = FormalChain::generator(2, vec![1, 3]);
        let b = rack_boundary(&q, &c).unwrap();
        let expect = FormalChain::from_terms(1, [(vec![q.at(1, 3)], 1), (vec![1], -1)]);
        assert_eq!(b, expect);
        assert!(rack_boundary(&q, &FormalChain::generator(2, vec![2, 2])).unwrap().is_zero());
    }

    #[test]
    fn rack_boundary_squares_to_zero_on_r3() {
        let q = r(3);
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    let g = FormalChain::generator(3, vec![a, b, c]);
                    let bb = rack_boundary(&q, &rack_boundary(&q, &g).unwrap()).unwrap();
                    assert!(bb.is_zero());
                }
            }
        }
    }

    #[test]
    fn simplicial_examples() {
        let c = FormalChain::generator(1, vec![7, 9]);
        assert_eq!(
            simplicial_boundary(&c).unwrap(),
            FormalChain::from_terms(0, [(vec![9], 1), (vec![7], -1)])
        );
        let c = FormalChain::generator(2, vec!['a', 'a', 'b']);
        assert_eq!(simplicial_boundary(&c).unwrap(), FormalChain::generator(1, vec!['a', 'a']));
    }

    #[test]
    fn projection() {
        let c = FormalChain::from_terms(3, [(vec![0, 0, 1], 2), (vec![0, 1, 0], 1), (vec![1, 2, 2], -1)]);
        assert_eq!(quandle_project(&c), FormalChain::generator(3, vec![0, 1, 0]));
    }

    #[test]
    fn phi_small_degrees() {
        let q = r(5);
        let (a, b, c, p) = (1, 2, 4, 0);
        let phi2 = ik_phi(&q, &FormalChain::generator(2, vec![a, b]), &p).unwrap();
        let expect2 = FormalChain::from_terms(2, [(vec![a, b, p], 1), (vec![q.at(a, b), b, p], -1)]);
        assert_eq!(phi2, expect2);
        let phi3 = ik_phi(&q, &FormalChain::generator(3, vec![a, b, c]), &p).unwrap();
        let op = |x, y| q.at(x, y);
        let expect3 = FormalChain::from_terms(
            3,
            [
                (vec![a, b, c, p], 1),
                (vec![op(a, b), b, c, p], -1),
                (vec![op(a, c), op(b, c), c, p], -1),
                (vec![op(op(a, b), c), op(b, c), c, p], 1),
            ],
        );
        assert_eq!(phi3, expect3);
        let phi1 = ik_phi(&q, &FormalChain::generator(1, vec![a]), &p).unwrap();
        assert_eq!(phi1, FormalChain::generator(1, vec![a, p]));
    }

    #[test]
    fn chain_map_needs_coinvariants() {
        // ∂φ_2(a,b) - φ_1∂(a,b) = (a,b) - (a◁b,b), zero only after coinvariants
        let q = r(3);
        let p = 0;
        let g = FormalChain::generator(2, vec![1, 2]);
        let lhs = simplicial_boundary(&ik_phi(&q, &g, &p).unwrap()).unwrap();
        let rhs = ik_phi(&q, &rack_boundary(&q, &g).unwrap(), &p).unwrap();
        let diff = lhs.sub(&rhs);
        assert!(!diff.is_zero());
        assert!(coinvariant_canonicalize(&q, &diff).is_zero());
    }

    #[test]
    fn fundamental_classes_are_cycles() {
        let d = LinkDiagram::parse("X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]").unwrap();
        let q = r(3);
        for col in enumerate_colorings(&d, &q) {
            let s = shadow_complete(&d, &q, &col, 0).unwrap();
            let c = fundamental_class(&d, &q, &s).unwrap();
            if col.iter().all(|&x| x == col[0]) {
                assert!(c.is_zero());
            }
        }
        let u = LinkDiagram::unknot();
        let s = shadow_complete(&u, &q, &[1], 0).unwrap();
        assert!(fundamental_class(&u, &q, &s).unwrap().is_zero());
    }

    #[test]
    fn chain_json_roundtrip() {
        let c = FormalChain::from_terms(2, [(vec![0usize, 1], 3), (vec![1, 0], -1)]);
        let j = c.to_json();
        assert_eq!(j["terms"][0]["coeff"], 3);
        assert_eq!(FormalChain::<usize>::from_json(&j).unwrap(), c);
    }
}
