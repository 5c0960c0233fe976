//! Arc colorings and shadow colorings.
//!
//! At a crossing with over-arc `β`, the coloring relation is
//! `C(α) ◁ C(β) = C(γ)` where `α` is the under-arc on the right of `β` and
//! `γ` the one on its left: `α` is the incoming under-arc at a positive
//! crossing and the outgoing one at a negative crossing. Regions obey the
//! same rule across every arc, `λ(left) = λ(right) ◁ C(δ)`.

use serde::{Deserialize, Serialize};

use crate::diagram::{LinkDiagram, Side};
use crate::error::{Error, Result};
use crate::group::GroupTable;
use crate::field::NumberField;
use crate::quandle::{CosetElement, CosetFamily, FiniteQuandle, ParabolicPoint, ParabolicQuandle, Quandle};

/// `(α, β, γ)` arc ids at crossing `c`, with `C(α) ◁ C(β) = C(γ)`.
pub fn crossing_arcs(d: &LinkDiagram, c: usize) -> (usize, usize, usize) {
    let x = &d.crossings[c];
    if x.sign > 0 {
        (x.under_in_arc, x.over_arc, x.under_out_arc)
    } else {
        (x.under_out_arc, x.over_arc, x.under_in_arc)
    }
}

pub fn check_coloring<Q: Quandle>(d: &LinkDiagram, q: &Q, colors: &[Q::Elem]) -> Result<()> {
    if colors.len() != d.arcs.len() {
        return Err(Error::Parse(format!("{} colors for {} arcs", colors.len(), d.arcs.len())));
    }
    for c in 0..d.crossings.len() {
        let (a, b, g) = crossing_arcs(d, c);
        if !q.same(&q.op(&colors[a], &colors[b]), &colors[g]) {
            return Err(Error::WirtingerViolation { crossing: c });
        }
    }
    Ok(())
}

/// All colorings by a finite quandle, in lexicographic order.
pub fn enumerate_colorings(d: &LinkDiagram, x: &FiniteQuandle) -> Vec<Vec<usize>> {
    let n_arcs = d.arcs.len();
    // Crossings become checkable once their largest arc is assigned.
    let mut ready: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); n_arcs];
    for c in 0..d.crossings.len() {
        let (a, b, g) = crossing_arcs(d, c);
        ready[a.max(b).max(g)].push((a, b, g));
    }
    let mut out = Vec::new();
    let mut cur = vec![0usize; n_arcs];
    fn rec(
        i: usize,
        x: &FiniteQuandle,
        ready: &[Vec<(usize, usize, usize)>],
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for v in 0..x.size() {
            cur[i] = v;
            if ready[i].iter().all(|&(a, b, g)| x.at(cur[a], cur[b]) == cur[g]) {
                rec(i + 1, x, ready, cur, out);
            }
        }
    }
    rec(0, x, &ready, &mut cur, &mut out);
    out
}

/// Fills unknown arc colors from known ones through the crossing relations
/// and checks the result.
pub fn complete_coloring<Q: Quandle>(d: &LinkDiagram, q: &Q, partial: &[Option<Q::Elem>]) -> Result<Vec<Q::Elem>> {
    let mut colors = partial.to_vec();
    if colors.len() != d.arcs.len() {
        return Err(Error::Parse(format!("{} colors for {} arcs", colors.len(), d.arcs.len())));
    }
    loop {
        let mut progress = false;
        for c in 0..d.crossings.len() {
            let (a, b, g) = crossing_arcs(d, c);
            let Some(cb) = colors[b].clone() else { continue };
            match (&colors[a], &colors[g]) {
                (Some(ca), None) => {
                    colors[g] = Some(q.op(ca, &cb));
                    progress = true;
                }
                (None, Some(cg)) => {
                    colors[a] = Some(q.op_inv(cg, &cb));
                    progress = true;
                }
                _ => {}
            }
        }
        if !progress {
            break;
        }
    }
    let colors = colors
        .into_iter()
        .enumerate()
        .map(|(arc, c)| c.ok_or(Error::Underdetermined { arc }))
        .collect::<Result<Vec<_>>>()?;
    check_coloring(d, q, &colors)?;
    Ok(colors)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShadowColoring<E> {
    pub arc_colors: Vec<E>,
    pub region_colors: Vec<E>,
    pub x0: E,
}

/// Extends an arc coloring to the regions, starting from `x0` on the
/// unbounded face.
pub fn shadow_complete<Q: Quandle>(
    d: &LinkDiagram,
    q: &Q,
    colors: &[Q::Elem],
    x0: Q::Elem,
) -> Result<ShadowColoring<Q::Elem>> {
    check_coloring(d, q, colors)?;
    let nf = d.faces.len();
    let mut region: Vec<Option<Q::Elem>> = vec![None; nf];
    region[d.unbounded_face] = Some(x0.clone());
    let mut stack = vec![d.unbounded_face];
    while let Some(f) = stack.pop() {
        let here = region[f].clone().expect("visited face has a color");
        for &(e, side) in &d.faces[f].boundary {
            let col = &colors[d.arc_of_edge(e)];
            let (other, value) = match side {
                Side::Right => (d.face_of(e, Side::Left), q.op(&here, col)),
                Side::Left => (d.face_of(e, Side::Right), q.op_inv(&here, col)),
            };
            if region[other].is_none() {
                region[other] = Some(value);
                stack.push(other);
            }
        }
    }
    let region_colors = region
        .into_iter()
        .map(|r| r.ok_or_else(|| Error::MalformedPd("face graph is disconnected".into())))
        .collect::<Result<Vec<_>>>()?;
    for e in 1..=d.n_edges {
        let l = &region_colors[d.face_of(e, Side::Left)];
        let r = &region_colors[d.face_of(e, Side::Right)];
        if !q.same(&q.op(r, &colors[d.arc_of_edge(e)]), l) {
            return Err(Error::InconsistentPropagation { edge: e });
        }
    }
    Ok(ShadowColoring { arc_colors: colors.to_vec(), region_colors, x0 })
}

/// Signed weight `(ε, x, y, z)` of a crossing: the source region, the source
/// under-arc and the over-arc.
pub fn crossing_weight<E: Clone>(d: &LinkDiagram, s: &ShadowColoring<E>, c: usize) -> (i64, E, E, E) {
    let (a, b, _) = crossing_arcs(d, c);
    (
        d.crossings[c].sign as i64,
        s.region_colors[d.source_region(c)].clone(),
        s.arc_colors[a].clone(),
        s.arc_colors[b].clone(),
    )
}

/// Coloring by a coset quandle built from a group representation of the
/// knot group: arc `i` gets the class `K_l g_i`, where `l` is the family of
/// its component. Missing images are filled through the crossing relation.
pub struct HomColoring {
    pub quandle: FiniteQuandle,
    pub elements: Vec<CosetElement>,
    pub colors: Vec<usize>,
    /// The identity coset of the first family.
    pub basepoint: usize,
}

pub fn coloring_from_hom(
    d: &LinkDiagram,
    g: &GroupTable,
    families: &[CosetFamily],
    component_family: &[usize],
    images: &[Option<usize>],
) -> Result<HomColoring> {
    let (quandle, elements) = FiniteQuandle::coset(g, families)?;
    if component_family.len() != d.components.len() {
        return Err(Error::Parse(format!(
            "{} family labels for {} components",
            component_family.len(),
            d.components.len()
        )));
    }
    let class_of = |family: usize, x: usize| {
        elements.iter().position(|e| e.family == family && e.coset.contains(&x)).expect("cosets cover G")
    };
    let family_of_arc = |arc: usize| {
        let e = d.arcs[arc][0];
        let comp = d.components.iter().position(|c| c.contains(&e)).expect("edge in a component");
        component_family[comp]
    };
    if images.len() != d.arcs.len() {
        return Err(Error::Parse(format!("{} images for {} arcs", images.len(), d.arcs.len())));
    }
    let partial: Vec<Option<usize>> = images
        .iter()
        .enumerate()
        .map(|(arc, im)| {
            im.map(|x| {
                if x >= g.size() {
                    Err(Error::InvalidGroup(format!("element {x} out of range")))
                } else {
                    Ok(class_of(family_of_arc(arc), x))
                }
            })
            .transpose()
        })
        .collect::<Result<_>>()?;
    let colors = complete_coloring(d, &quandle, &partial)?;
    for (arc, &c) in colors.iter().enumerate() {
        if elements[c].family != family_of_arc(arc) {
            return Err(Error::WirtingerViolation { crossing: first_crossing_of_arc(d, arc) });
        }
    }
    let basepoint = class_of(0, g.identity());
    Ok(HomColoring { quandle, elements, colors, basepoint })
}

fn first_crossing_of_arc(d: &LinkDiagram, arc: usize) -> usize {
    (0..d.crossings.len())
        .find(|&c| {
            let (a, _, g) = crossing_arcs(d, c);
            a == arc || g == arc
        })
        .unwrap_or(0)
}

/// A parabolic arc coloring as stored on disk:
/// `{"field":{"d":-3},"arcs":[[a,b],..],"x0":[a,b],"unbounded_face":k?}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ParabolicColoringFile {
    pub field: serde_json::Value,
    pub arcs: Vec<ParabolicPoint>,
    pub x0: ParabolicPoint,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unbounded_face: Option<usize>,
}

impl ParabolicColoringFile {
    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        serde_json::from_value(value.clone()).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Checks the points against the field and the crossing relations, then
    /// completes the shadow coloring. `field` overrides the stored field.
    pub fn shadow(
        &self,
        d: &mut LinkDiagram,
        field: Option<NumberField>,
    ) -> Result<(ParabolicQuandle, ShadowColoring<ParabolicPoint>)> {
        let field = match field {
            Some(f) => f,
            None => NumberField::from_json(&self.field)?,
        };
        let q = ParabolicQuandle::new(field);
        for p in self.arcs.iter().chain([&self.x0]) {
            q.check(p)?;
        }
        if self.arcs.len() != d.arcs.len() {
            return Err(Error::Parse(format!("{} arc colors for {} arcs", self.arcs.len(), d.arcs.len())));
        }
        if let Some(k) = self.unbounded_face {
            d.set_unbounded_face(k)?;
        }
        let s = shadow_complete(d, &q, &self.arcs, self.x0.clone())?;
        Ok((q, s))
    }
}
