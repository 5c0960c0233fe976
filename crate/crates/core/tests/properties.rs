mod common;

use std::collections::BTreeSet;

use common::*;
use proptest::prelude::*;
use qf_core::chains::{
    coinvariant_canonicalize, fundamental_class, ik_phi, is_boundary, quandle_project, rack_boundary,
    simplicial_boundary, FormalChain, Theory,
};
use qf_core::coloring::{enumerate_colorings, shadow_complete};
use qf_core::diagram::{LinkDiagram, Side};
use qf_core::field::{FieldElem, Mat2, NumberField};
use qf_core::group::GroupTable;
use qf_core::grouphom::{beta_truncated, parabolic_tuple_equiv, SubgroupFamily};
use qf_core::invariants::{mochizuki_cocycle, state_sum_report};
use qf_core::quandle::{FiniteQuandle, ParabolicPoint, Quandle};

/// A braid word on 2..=4 strands followed by each generator once, so the
/// closure is connected and every strand crosses something.
fn braid() -> impl Strategy<Value = (usize, Vec<i32>)> {
    (2usize..=4).prop_flat_map(|n| {
        let m = n as i32 - 1;
        let letter = (1..=m, any::<bool>()).prop_map(|(i, s)| if s { i } else { -i });
        prop::collection::vec(letter, 0..7).prop_map(move |mut w| {
            w.extend(1..=m);
            (n, w)
        })
    })
}

fn closure(n: usize, w: &[i32]) -> LinkDiagram {
    LinkDiagram::parse(&braid_closure_pd(n, w)).unwrap()
}

/// Fixed points of the braid action on `X^n` count the colorings of the
/// closure; dihedral quandles are involutory, so no orientation choice enters.
fn braid_action_colorings(x: &FiniteQuandle, n: usize, w: &[i32]) -> usize {
    let m = x.size();
    (0..m.pow(n as u32))
        .filter(|&k| {
            let start: Vec<usize> = (0..n).map(|i| k / m.pow(i as u32) % m).collect();
            let mut v = start.clone();
            for &l in w {
                let i = l.unsigned_abs() as usize - 1;
                let (a, b) = (v[i], v[i + 1]);
                (v[i], v[i + 1]) = if l > 0 { (x.at(b, a), a) } else { (b, x.at(a, b)) };
            }
            v == start
        })
        .count()
}

fn state_sum_multiset(d: &LinkDiagram, p: u64) -> Vec<i64> {
    let x = FiniteQuandle::dihedral(p as usize).unwrap();
    let phi = mochizuki_cocycle(p, [1, 1, 1, 1]).unwrap();
    state_sum_report(d, &x, &phi, 0).unwrap().multiset
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn faces_cover_each_dart_once((n, w) in braid()) {
        let d = closure(n, &w);
        let darts: Vec<(usize, Side)> = d.faces.iter().flat_map(|f| f.boundary.iter().copied()).collect();
        prop_assert_eq!(darts.len(), 2 * d.n_edges);
        let distinct: BTreeSet<_> = darts.iter().map(|&(e, s)| (e, s == Side::Left)).collect();
        prop_assert_eq!(distinct.len(), darts.len());
        prop_assert_eq!(d.faces.len(), d.crossings.len() + 2);
    }

    #[test]
    fn reversal_keeps_face_sets((n, w) in braid()) {
        let d = closure(n, &w);
        let (r, map) = d.reversed().unwrap();
        let sets = |x: &LinkDiagram, f: &dyn Fn(usize) -> usize| -> BTreeSet<BTreeSet<usize>> {
            x.faces.iter().map(|fc| fc.boundary.iter().map(|&(e, _)| f(e)).collect()).collect()
        };
        prop_assert_eq!(sets(&d, &|e| map[e]), sets(&r, &|e| e));
    }

    #[test]
    fn coloring_count_matches_braid_action((n, w) in braid(), m in prop::sample::select(vec![3usize, 4, 5])) {
        let x = FiniteQuandle::dihedral(m).unwrap();
        let d = closure(n, &w);
        prop_assert_eq!(enumerate_colorings(&d, &x).len(), braid_action_colorings(&x, n, &w));
    }

    #[test]
    fn shadows_are_consistent_and_classes_are_cycles((n, w) in braid()) {
        let d = closure(n, &w);
        for x in [FiniteQuandle::dihedral(3).unwrap(), FiniteQuandle::alexander(5, 2).unwrap()] {
            for col in enumerate_colorings(&d, &x) {
                for x0 in 0..x.size() {
                    let s = shadow_complete(&d, &x, &col, x0).unwrap();
                    prop_assert!(fundamental_class(&d, &x, &s).is_ok());
                }
            }
        }
    }

    #[test]
    fn state_sum_total_ignores_basepoint((n, w) in braid()) {
        let d = closure(n, &w);
        let x = FiniteQuandle::dihedral(3).unwrap();
        let phi = mochizuki_cocycle(3, [1, 1, 1, 1]).unwrap();
        let sums: BTreeSet<i64> = (0..3).map(|x0| state_sum_report(&d, &x, &phi, x0).unwrap().sum).collect();
        prop_assert_eq!(sums.len(), 1);
    }

    #[test]
    fn state_sums_survive_braid_moves((n, w) in braid(), at in any::<prop::sample::Index>(), g in 1i32..4) {
        let g = g.min(n as i32 - 1);
        let base = state_sum_multiset(&closure(n, &w), 3);
        let cut = at.index(w.len() + 1);
        // second Reidemeister move
        let mut w2 = w.clone();
        w2.splice(cut..cut, [g, -g]);
        prop_assert_eq!(&state_sum_multiset(&closure(n, &w2), 3), &base);
        // conjugation
        let mut w3 = vec![g];
        w3.extend(&w);
        w3.push(-g);
        prop_assert_eq!(&state_sum_multiset(&closure(n, &w3), 3), &base);
        // stabilization, a first Reidemeister move
        let mut w4 = w.clone();
        w4.push(if cut % 2 == 0 { n as i32 } else { -(n as i32) });
        prop_assert_eq!(&state_sum_multiset(&closure(n + 1, &w4), 3), &base);
        // third Reidemeister move
        if n >= 3 {
            let mut a = w.clone();
            a.splice(cut..cut, [1, 2, 1]);
            let mut b = w.clone();
            b.splice(cut..cut, [2, 1, 2]);
            prop_assert_eq!(state_sum_multiset(&closure(n, &a), 5), state_sum_multiset(&closure(n, &b), 5));
        }
    }
}

fn hex_elem() -> impl Strategy<Value = FieldElem> {
    (-3i64..=3, -3i64..=3).prop_map(|(a, b)| FieldElem::from_ints(&[a, b]))
}

fn hex_point() -> impl Strategy<Value = ParabolicPoint> {
    (hex_elem(), hex_elem())
        .prop_filter("nonzero", |(a, b)| !(a.is_zero() && b.is_zero()))
        .prop_map(|(a, b)| ParabolicPoint::new(a, b).unwrap())
}

fn sl2(f: &NumberField, x: &FieldElem, y: &FieldElem) -> Mat2 {
    let one = FieldElem::from_int(1);
    let zero = FieldElem::zero();
    let u = Mat2([[one.clone(), x.clone()], [zero.clone(), one.clone()]]);
    let l = Mat2([[one.clone(), zero], [y.clone(), one]]);
    f.mat_mul(&u, &l)
}

fn act_all(f: &NumberField, t: &[ParabolicPoint], m: &Mat2) -> Vec<ParabolicPoint> {
    t.iter()
        .map(|p| {
            let (a, b) = f.vec_mat((p.a(), p.b()), m);
            ParabolicPoint::new(a, b).unwrap()
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn parabolic_axioms(x in hex_point(), y in hex_point(), z in hex_point()) {
        let q = hexagonal();
        prop_assert_eq!(q.op(&x, &x), x.clone());
        prop_assert_eq!(q.op(&q.op_inv(&x, &y), &y), x.clone());
        prop_assert_eq!(q.op_inv(&q.op(&x, &y), &y), x.clone());
        prop_assert_eq!(q.op(&q.op(&x, &y), &z), q.op(&q.op(&x, &z), &q.op(&y, &z)));
    }

    #[test]
    fn beta_satisfies_constraints(t in prop::collection::vec(hex_point(), 4)) {
        let f = NumberField::hexagonal();
        if let Ok(s) = beta_truncated(&f, &t) {
            prop_assert!(s.check(&f));
        }
    }

    #[test]
    fn tuple_equivalence_is_an_equivalence(
        t in prop::collection::vec(hex_point(), 4),
        (x1, y1, x2, y2) in (hex_elem(), hex_elem(), hex_elem(), hex_elem()),
    ) {
        let f = NumberField::hexagonal();
        prop_assume!(!t[0].is_proportional(&t[1], &f));
        let m = sl2(&f, &x1, &y1);
        let n = sl2(&f, &x2, &y2);
        let tm = act_all(&f, &t, &m);
        let tmn = act_all(&f, &tm, &n);
        prop_assert!(parabolic_tuple_equiv(&f, &t, &t).unwrap().is_some());
        prop_assert!(parabolic_tuple_equiv(&f, &t, &tm).unwrap().is_some());
        prop_assert!(parabolic_tuple_equiv(&f, &tm, &t).unwrap().is_some());
        prop_assert!(parabolic_tuple_equiv(&f, &tm, &tmn).unwrap().is_some());
        prop_assert!(parabolic_tuple_equiv(&f, &t, &tmn).unwrap().is_some());
    }
}

fn small_quandles() -> Vec<FiniteQuandle> {
    let mut v: Vec<FiniteQuandle> = (1..=4).map(|n| FiniteQuandle::trivial(n).unwrap()).collect();
    v.extend([3, 4].map(|n| FiniteQuandle::dihedral(n).unwrap()));
    v.push(FiniteQuandle::alexander(4, 3).unwrap());
    v
}

fn all_tuples(n: usize, len: usize) -> Vec<Vec<usize>> {
    (0..n.pow(len as u32))
        .map(|k| (0..len).map(|i| k / n.pow((len - 1 - i) as u32) % n).collect())
        .collect()
}

#[test]
fn boundaries_square_to_zero_exhaustively() {
    for x in small_quandles() {
        for deg in 2..=4 {
            for t in all_tuples(x.size(), deg) {
                let g = FormalChain::generator(deg, t.clone());
                let rr = rack_boundary(&x, &rack_boundary(&x, &g).unwrap()).unwrap();
                assert!(rr.is_zero());
                let q = quandle_project(&g);
                let qq = quandle_project(&rack_boundary(&x, &quandle_project(&rack_boundary(&x, &q).unwrap())).unwrap());
                assert!(qq.is_zero());
                let s = FormalChain::generator(deg - 1, t);
                if deg >= 3 {
                    assert!(simplicial_boundary(&simplicial_boundary(&s).unwrap()).unwrap().is_zero());
                }
            }
        }
    }
}

#[test]
fn degenerate_generators_map_to_boundaries() {
    for m in [3, 4] {
        let x = FiniteQuandle::dihedral(m).unwrap();
        for n in 2..=3 {
            for t in all_tuples(m, n + 1) {
                if !t[..n].windows(2).any(|w| w[0] == w[1]) {
                    continue;
                }
                let phi = ik_phi(&x, &FormalChain::generator(n, t[..n].to_vec()), &t[n]).unwrap();
                let c = coinvariant_canonicalize(&x, &phi);
                assert!(is_boundary(&x, Theory::SimplicialCoinvariant, &c, 1_000_000).unwrap(), "{t:?}");
            }
        }
    }
}

fn s3_with_transposition() -> (GroupTable, Vec<usize>) {
    let g = GroupTable::symmetric(3);
    let k = g.generated(&[g.perm(&[1, 0, 2]).unwrap()]);
    (g, k)
}

#[test]
fn alpha_is_a_chain_map() {
    let (g, k) = s3_with_transposition();
    let fam = SubgroupFamily::new(&g, vec![k]).unwrap();
    for n in 2..=3 {
        for gen in fam.cone_basis(n) {
            let c = FormalChain::generator(n, vec![gen]);
            let lhs = quandle_project(&simplicial_boundary(&fam.alpha_map(&c).unwrap()).unwrap());
            let rhs = fam.alpha_map(&fam.cone_boundary(&c).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn malnormal_family_acts_freely_on_distinct_cosets() {
    let (g, k) = s3_with_transposition();
    assert!(SubgroupFamily::new(&g, vec![k.clone()]).unwrap().malnormal_check().malnormal);
    let (cosets, which) = g.right_cosets(&k);
    let reps: Vec<usize> = cosets.iter().map(|c| c[0]).collect();
    for len in 2..=3 {
        for t in all_tuples(reps.len(), len) {
            let distinct: BTreeSet<_> = t.iter().collect();
            if distinct.len() != len {
                continue;
            }
            let stab: Vec<usize> = (0..g.size())
                .filter(|&h| t.iter().all(|&i| which[g.mul(reps[i], h)] == i))
                .collect();
            assert_eq!(stab, vec![g.identity()], "{t:?}");
        }
    }
}

#[test]
fn braid_closures_match_known_counts() {
    let x = FiniteQuandle::dihedral(3).unwrap();
    let trefoil = closure(2, &[1, 1, 1]);
    assert_eq!(enumerate_colorings(&trefoil, &x).len(), 9);
    let fig8 = closure(3, &[1, -2, 1, -2]);
    assert_eq!(enumerate_colorings(&fig8, &x).len(), 3);
    let r5 = FiniteQuandle::dihedral(5).unwrap();
    assert_eq!(enumerate_colorings(&fig8, &r5).len(), 25);
    assert_eq!(closure(2, &[1, 1]).components.len(), 2);
    assert_eq!(closure(3, &[1, 2]).components.len(), 1);
}
