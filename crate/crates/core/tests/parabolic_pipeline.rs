mod common;

use common::*;
use qf_core::chains::{fundamental_class, ik_phi, rack_boundary, quandle_project, FormalChain};
use qf_core::coloring::{shadow_complete, ParabolicColoringFile, ShadowColoring};
use qf_core::diagram::LinkDiagram;
use qf_core::error::Error;
use qf_core::invariants::fundamental_class_rep;
use qf_core::quandle::{ParabolicPoint, ParabolicQuandle, Quandle};

fn load(pd: &str, coloring: &str) -> (LinkDiagram, ParabolicQuandle, ShadowColoring<ParabolicPoint>) {
    load_parabolic(pd, coloring)
}

#[test]
fn fig8_holonomy_coloring_is_accepted() {
    let (_, q, s) = load("fig8.pd", "fig8_parabolic.json");
    let a = pt(&[1], &[0]);
    let b = pt(&[0], &[0, 1]);
    assert_eq!(s.arc_colors[1], a);
    assert_eq!(s.arc_colors[3], b);
    assert_eq!(s.arc_colors[0], pt(&[1], &[-1, 1]));
    assert_eq!(s.arc_colors[2], pt(&[0, 1], &[0, -1]));
    assert_eq!(q.op(&a, &b), s.arc_colors[0]);
    assert_eq!(q.op(&b, &a), s.arc_colors[2]);
}

#[test]
fn fig8_broken_coloring_is_rejected() {
    let mut d = diagram("fig8.pd");
    let mut f = ParabolicColoringFile::from_json(&serde_json::from_str(&data("fig8_parabolic.json")).unwrap()).unwrap();
    f.arcs[2] = pt(&[1], &[1]);
    assert!(matches!(f.shadow(&mut d, None), Err(Error::WirtingerViolation { .. })));
}

#[test]
fn fig8_class_is_a_cycle_with_inverse_region_color() {
    let (d, q, s) = load("fig8.pd", "fig8_parabolic.json");
    let a = pt(&[1], &[0]);
    let b = pt(&[0], &[0, 1]);
    let c = fundamental_class(&d, &q, &s).unwrap();
    let sreg = q.op_inv(&b, &a);
    let expect = quandle_project(&FormalChain::from_terms(
        3,
        [
            (vec![sreg.clone(), a.clone(), b.clone()], -1),
            (vec![sreg.clone(), b.clone(), a.clone()], -1),
            (vec![q.op(&sreg, &b), a.clone(), q.op(&a, &b)], 1),
            (vec![b.clone(), b.clone(), q.op(&b, &a)], 1),
        ],
    ));
    assert_eq!(c, expect);
}

#[test]
fn printed_symbolic_class_is_not_a_quandle_cycle() {
    let q = hexagonal();
    let c = quandle_project(&printed_fig8_class(&q));
    let bd = quandle_project(&rack_boundary(&q, &c).unwrap());
    assert_eq!(bd.len(), 4);
}

#[test]
fn phi3_of_printed_class_gives_twelve_terms() {
    let q = hexagonal();
    let p = pt(&[0], &[1]);
    let phi = ik_phi(&q, &printed_fig8_class(&q), &p).unwrap();
    assert_eq!(phi.len(), 12);
    assert_eq!(phi, fig8_phi3_golden(&p));
}

#[test]
fn fig8_fixture_basepoint_is_degenerate_for_beta() {
    let (d, q, s) = load("fig8.pd", "fig8_parabolic.json");
    for p in [pt(&[0], &[1]), pt(&[1], &[2]), pt(&[2], &[1])] {
        let e = fundamental_class_rep(&d, &q, &s, &p);
        assert!(matches!(e, Err(Error::DegenerateTuple { .. })), "{p:?}");
    }
}

#[test]
fn fig8_generic_basepoint_gives_a_truncated_cycle() {
    let (d, q, s) = load("fig8.pd", "fig8_parabolic.json");
    let s = shadow_complete(&d, &q, &s.arc_colors, pt(&[1], &[2])).unwrap();
    let r = fundamental_class_rep(&d, &q, &s, &pt(&[2], &[1])).unwrap();
    assert_eq!(r.simplices.len(), 16);
    assert_eq!(r.boundary_residue, 0);
    assert!(r.simplices.iter().all(|t| t.simplex.check(&q.field)));
}

#[test]
fn knot52_cubic_coloring_gives_a_truncated_cycle() {
    let (d, q, s) = load("knot52.pd", "knot52_parabolic.json");
    assert_eq!(q.field.degree(), 3);
    let c = fundamental_class(&d, &q, &s).unwrap();
    assert!(!c.is_zero());
    let r = [pt(&[2], &[1]), pt(&[1], &[3]), pt(&[3], &[1, 1])]
        .iter()
        .find_map(|p| fundamental_class_rep(&d, &q, &s, p).ok())
        .expect("some basepoint avoids degenerate pairs");
    assert_eq!(r.boundary_residue, 0);
    assert!(r.simplices.iter().all(|t| t.simplex.check(&q.field)));
}

#[test]
fn monochromatic_coloring_gives_empty_chain() {
    let (d, q, _) = load("fig8.pd", "fig8_parabolic.json");
    let a = pt(&[1], &[0]);
    let s = shadow_complete(&d, &q, &vec![a.clone(); 4], pt(&[1], &[2])).unwrap();
    let r = fundamental_class_rep(&d, &q, &s, &pt(&[0], &[1])).unwrap();
    assert!(r.simplices.is_empty());
}
