#![allow(dead_code)]

use qf_core::chains::FormalChain;
use qf_core::coloring::{ParabolicColoringFile, ShadowColoring};
use qf_core::diagram::LinkDiagram;
use qf_core::field::NumberField;
use qf_core::quandle::{ParabolicPoint, ParabolicQuandle, Quandle};

pub fn data(name: &str) -> String {
    std::fs::read_to_string(format!("{}/../../data/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

pub fn diagram(name: &str) -> LinkDiagram {
    LinkDiagram::parse(&data(name)).unwrap()
}

pub fn load_parabolic(pd: &str, coloring: &str) -> (LinkDiagram, ParabolicQuandle, ShadowColoring<ParabolicPoint>) {
    let mut d = diagram(pd);
    let f = ParabolicColoringFile::from_json(&serde_json::from_str(&data(coloring)).unwrap()).unwrap();
    let (q, s) = f.shadow(&mut d, None).unwrap();
    (d, q, s)
}

pub fn pt(a: &[i64], b: &[i64]) -> ParabolicPoint {
    ParabolicPoint::from_ints(a, b)
}

pub fn hexagonal() -> ParabolicQuandle {
    ParabolicQuandle::new(NumberField::hexagonal())
}

/// a = (1,0), b = (0,ω) with ω² = ω − 1.
pub fn fig8_ab() -> (ParabolicPoint, ParabolicPoint) {
    (pt(&[1], &[0]), pt(&[0], &[0, 1]))
}

/// −(b◁a,a,b) − (b◁a,b,a) + ((b◁a)◁b,a,a◁b) + (b,b,b◁a), as printed.
pub fn printed_fig8_class(q: &ParabolicQuandle) -> FormalChain<ParabolicPoint> {
    let (a, b) = fig8_ab();
    let ba = q.op(&b, &a);
    FormalChain::from_terms(
        3,
        [
            (vec![ba.clone(), a.clone(), b.clone()], -1),
            (vec![ba.clone(), b.clone(), a.clone()], -1),
            (vec![q.op(&ba, &b), a.clone(), q.op(&a, &b)], 1),
            (vec![b.clone(), b.clone(), ba.clone()], 1),
        ],
    )
}

/// Hand expansion of φ₃ on the printed class, with the trailing basepoint `p`.
pub fn fig8_phi3_golden(p: &ParabolicPoint) -> FormalChain<ParabolicPoint> {
    let (a, b) = fig8_ab();
    let ab = pt(&[1], &[-1, 1]);
    let ba = pt(&[0, 1], &[0, -1]);
    let golden = [
        (-1, [pt(&[0, -1], &[0, 1]), a.clone(), b.clone()]),
        (1, [pt(&[0, -2], &[0, 1]), a.clone(), b.clone()]),
        (1, [pt(&[0, -1], &[1, 1]), ab.clone(), b.clone()]),
        (-1, [pt(&[0, -2], &[2, 1]), ab.clone(), b.clone()]),
        (-1, [pt(&[0, -1], &[0, 1]), b.clone(), a.clone()]),
        (1, [pt(&[0, -1], &[1, 1]), b.clone(), a.clone()]),
        (1, [pt(&[0, -2], &[0, 1]), pt(&[0, -1], &[0, 1]), a.clone()]),
        (-1, [pt(&[-1, -2], &[1, 1]), pt(&[0, -1], &[0, 1]), a.clone()]),
        (1, [pt(&[0, -1], &[1, 1]), a.clone(), ab.clone()]),
        (-1, [pt(&[-1, -2], &[1, 1]), a.clone(), ab.clone()]),
        (-1, [pt(&[0, -2], &[2, 1]), ba.clone(), ab.clone()]),
        (1, [pt(&[1, -4], &[1, 3]), ba, ab]),
    ];
    FormalChain::from_terms(
        3,
        golden.into_iter().map(|(c, t)| {
            let mut t = t.to_vec();
            t.push(p.clone());
            (t, c)
        }),
    )
}

/// PD code of the closure of a braid word on `n` strands. Letter `±i` is
/// `σ_i^{±1}` acting on positions `i-1, i` (1-based `i`). Edges are relabeled
/// consecutively along each component.
pub fn braid_closure_pd(n: usize, word: &[i32]) -> String {
    let mut next_token = n;
    let mut current: Vec<usize> = (0..n).collect();
    let mut succ: Vec<Option<usize>> = vec![None; n];
    let mut raw = Vec::new();
    for &l in word {
        let i = l.unsigned_abs() as usize - 1;
        let (l_in, r_in) = (current[i], current[i + 1]);
        let (l_out, r_out) = (next_token, next_token + 1);
        next_token += 2;
        succ.extend([None, None]);
        succ[l_in] = Some(r_out);
        succ[r_in] = Some(l_out);
        raw.push(if l > 0 { [r_in, r_out, l_out, l_in] } else { [l_in, r_in, r_out, l_out] });
        current[i] = l_out;
        current[i + 1] = r_out;
    }
    // close: the top edge at each position is the bottom edge at that position
    let mut alias: Vec<usize> = (0..next_token).collect();
    for (pos, &top) in current.iter().enumerate() {
        alias[top] = pos;
    }
    let canon = |t: usize| alias[t];
    let mut label = vec![0usize; next_token];
    let mut next_label = 1;
    for start in 0..n {
        if label[start] != 0 {
            continue;
        }
        let mut t = start;
        while label[t] == 0 {
            label[t] = next_label;
            next_label += 1;
            t = canon(succ[t].expect("every position is crossed"));
        }
    }
    raw.iter()
        .map(|x| {
            let l: Vec<String> = x.iter().map(|&t| label[canon(t)].to_string()).collect();
            format!("X[{}]", l.join(","))
        })
        .collect::<Vec<_>>()
        .join(" ")
}
