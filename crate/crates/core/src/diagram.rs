//! Oriented link diagrams from PD codes.
//!
//! `X[a,b,c,d]` lists the four edge-ends of a crossing counterclockwise,
//! starting at the incoming under-edge `a`; `c` is the outgoing under-edge.
//! The crossing is positive when `d` is the incoming over-edge.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Crossing {
    pub pd: [usize; 4],
    pub sign: i8,
    pub over_in: usize,
    pub over_out: usize,
    pub over_arc: usize,
    pub under_in_arc: usize,
    pub under_out_arc: usize,
}

impl Crossing {
    pub fn under_in(&self) -> usize {
        self.pd[0]
    }

    pub fn under_out(&self) -> usize {
        self.pd[2]
    }

    /// Slot holding the incoming over-edge.
    pub fn over_in_slot(&self) -> usize {
        if self.sign > 0 {
            3
        } else {
            1
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Face {
    pub index: usize,
    /// Darts in traversal order (face on the left of the direction of
    /// travel), starting from the least `(edge, side)`.
    pub boundary: Vec<(usize, Side)>,
}

/// Where an edge starts and ends: `(crossing, slot)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeEnds {
    pub tail: (usize, usize),
    pub head: (usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinkDiagram {
    pub crossings: Vec<Crossing>,
    /// Edge ids are `1..=n_edges`.
    pub n_edges: usize,
    /// Arcs as sorted edge lists, ordered by least edge.
    pub arcs: Vec<Vec<usize>>,
    pub components: Vec<Vec<usize>>,
    pub faces: Vec<Face>,
    pub unbounded_face: usize,
    /// Indexed by edge id; entry 0 unused. Empty for the crossingless unknot.
    #[serde(skip)]
    ends: Vec<Option<EdgeEnds>>,
    #[serde(skip)]
    arc_of_edge: Vec<usize>,
    #[serde(skip)]
    face_of: BTreeMap<(usize, Side), usize>,
}

#[derive(Deserialize)]
struct PdJson {
    pd: Vec<Vec<usize>>,
    #[serde(default)]
    unbounded_face: Option<usize>,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }

    /// Classes over `1..n`, each sorted, ordered by least element.
    fn classes(&mut self, n: usize) -> Vec<Vec<usize>> {
        let mut by_root: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for e in 1..=n {
            let r = self.find(e);
            by_root.entry(r).or_default().push(e);
        }
        let mut v: Vec<Vec<usize>> = by_root.into_values().collect();
        v.sort_by_key(|c| c[0]);
        v
    }
}

/// Reads `X[a,b,c,d]` tokens. An optional `PD[...]` wrapper, commas between
/// tokens and `#` comment lines are accepted.
pub fn parse_pd_tuples(text: &str) -> Result<Vec<[usize; 4]>> {
    let body: String = text
        .lines()
        .filter(|l| !l.trim_start().starts_with('#'))
        .collect::<Vec<_>>()
        .join(" ");
    let mut s = body.trim();
    if let Some(rest) = s.strip_prefix("PD[") {
        s = rest.strip_suffix(']').ok_or_else(|| Error::MalformedPd("unbalanced PD[...]".into()))?;
    }
    let mut out = Vec::new();
    let mut rest = s.trim_start_matches([' ', ',', '\t']);
    while !rest.is_empty() {
        let inner = rest
            .strip_prefix("X[")
            .ok_or_else(|| Error::MalformedPd(format!("expected X[...] at {:?}", truncate(rest))))?;
        let close = inner.find(']').ok_or_else(|| Error::MalformedPd("missing ]".into()))?;
        let nums = inner[..close]
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::MalformedPd(format!("bad edge label {:?}", t.trim())))
            })
            .collect::<Result<Vec<_>>>()?;
        let tuple: [usize; 4] = nums
            .try_into()
            .map_err(|v: Vec<usize>| Error::MalformedPd(format!("crossing with {} entries", v.len())))?;
        out.push(tuple);
        rest = inner[close + 1..].trim_start_matches([' ', ',', '\t', '\n', '\r']);
    }
    Ok(out)
}

fn truncate(s: &str) -> String {
    s.chars().take(20).collect()
}

impl LinkDiagram {
    /// Parses text PD input, or JSON `{"pd": [...], "unbounded_face": k}`.
    /// The word `unknot` gives the crossingless diagram.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        if t.starts_with('{') {
            let raw: PdJson = serde_json::from_str(t).map_err(|e| Error::MalformedPd(format!("json: {e}")))?;
            let tuples = raw
                .pd
                .into_iter()
                .map(|v| {
                    let n = v.len();
                    v.try_into().map_err(|_| Error::MalformedPd(format!("crossing with {n} entries")))
                })
                .collect::<Result<Vec<[usize; 4]>>>()?;
            let mut d = if tuples.is_empty() { Self::unknot() } else { Self::from_pd(&tuples)? };
            if let Some(k) = raw.unbounded_face {
                d.set_unbounded_face(k)?;
            }
            return Ok(d);
        }
        if t.eq_ignore_ascii_case("unknot") {
            return Ok(Self::unknot());
        }
        Self::from_pd(&parse_pd_tuples(t)?)
    }

    /// One counterclockwise circle, edge 1; face 0 inside, face 1 outside.
    pub fn unknot() -> Self {
        let faces = vec![
            Face { index: 0, boundary: vec![(1, Side::Left)] },
            Face { index: 1, boundary: vec![(1, Side::Right)] },
        ];
        let face_of = BTreeMap::from([((1, Side::Left), 0), ((1, Side::Right), 1)]);
        LinkDiagram {
            crossings: Vec::new(),
            n_edges: 1,
            arcs: vec![vec![1]],
            components: vec![vec![1]],
            faces,
            unbounded_face: 1,
            ends: vec![None, None],
            arc_of_edge: vec![usize::MAX, 0],
            face_of,
        }
    }

    pub fn from_pd(tuples: &[[usize; 4]]) -> Result<Self> {
        if tuples.is_empty() {
            return Err(Error::MalformedPd("no crossings".into()));
        }
        let n_edges = 2 * tuples.len();
        let mut count = vec![0usize; n_edges + 1];
        for t in tuples {
            for &e in t {
                if e == 0 || e > n_edges {
                    return Err(Error::MalformedPd(format!("edge {e} outside 1..{n_edges}")));
                }
                count[e] += 1;
            }
        }
        if let Some(e) = (1..=n_edges).find(|&e| count[e] != 2) {
            return Err(Error::MalformedPd(format!("edge {e} appears {} times", count[e])));
        }

        let mut comp = UnionFind::new(n_edges + 1);
        let mut arcs_uf = UnionFind::new(n_edges + 1);
        for t in tuples {
            comp.union(t[0], t[2]);
            comp.union(t[1], t[3]);
            arcs_uf.union(t[1], t[3]);
        }
        let components = comp.classes(n_edges);
        let mut succ = vec![0usize; n_edges + 1];
        for c in &components {
            for (i, &e) in c.iter().enumerate() {
                succ[e] = c[(i + 1) % c.len()];
            }
        }

        // Orientation of the over strand: Some(true) when d is incoming.
        let mut d_in: Vec<Option<bool>> = tuples
            .iter()
            .map(|t| {
                let (b, d) = (t[1], t[3]);
                match (succ[b] == d, succ[d] == b) {
                    (true, false) => Ok(Some(false)),
                    (false, true) => Ok(Some(true)),
                    (true, true) => Ok(None),
                    (false, false) => {
                        Err(Error::MalformedPd(format!("over edges {b},{d} are not consecutive")))
                    }
                }
            })
            .collect::<Result<_>>()?;

        // Resolve two-edge components by propagating heads and tails.
        loop {
            let mut head_known = vec![false; n_edges + 1];
            let mut tail_known = vec![false; n_edges + 1];
            for (t, di) in tuples.iter().zip(&d_in) {
                head_known[t[0]] = true;
                tail_known[t[2]] = true;
                if let Some(di) = di {
                    let (inn, out) = if *di { (t[3], t[1]) } else { (t[1], t[3]) };
                    head_known[inn] = true;
                    tail_known[out] = true;
                }
            }
            let mut progress = false;
            for (t, di) in tuples.iter().zip(d_in.iter_mut()) {
                if di.is_some() {
                    continue;
                }
                // An edge that already has a head elsewhere must leave here.
                let (b, d) = (t[1], t[3]);
                if head_known[b] || tail_known[d] {
                    *di = Some(true);
                    progress = true;
                } else if head_known[d] || tail_known[b] {
                    *di = Some(false);
                    progress = true;
                }
            }
            if !progress {
                match d_in.iter_mut().find(|x| x.is_none()) {
                    Some(x) => *x = Some(true),
                    None => break,
                }
            }
        }

        let mut head: Vec<Option<(usize, usize)>> = vec![None; n_edges + 1];
        let mut tail: Vec<Option<(usize, usize)>> = vec![None; n_edges + 1];
        let set_end = |v: &mut Vec<Option<(usize, usize)>>, e: usize, at: (usize, usize)| -> Result<()> {
            if v[e].is_some() {
                return Err(Error::MalformedPd(format!("inconsistent orientation of edge {e}")));
            }
            v[e] = Some(at);
            Ok(())
        };
        for (i, (t, di)) in tuples.iter().zip(&d_in).enumerate() {
            let (in_slot, out_slot) = if di.expect("resolved") { (3, 1) } else { (1, 3) };
            set_end(&mut head, t[0], (i, 0))?;
            set_end(&mut tail, t[2], (i, 2))?;
            set_end(&mut head, t[in_slot], (i, in_slot))?;
            set_end(&mut tail, t[out_slot], (i, out_slot))?;
        }
        let mut ends = vec![None; n_edges + 1];
        for e in 1..=n_edges {
            let (h, tl) = (head[e].expect("every edge has a head"), tail[e].expect("every edge has a tail"));
            ends[e] = Some(EdgeEnds { tail: tl, head: h });
            // The strand continues through the crossing to the successor.
            let next = tuples[h.0][(h.1 + 2) % 4];
            if next != succ[e] {
                return Err(Error::MalformedPd(format!(
                    "orientation: edge {e} continues to {next}, numbering expects {}",
                    succ[e]
                )));
            }
        }

        let arcs = arcs_uf.classes(n_edges);
        let mut arc_of_edge = vec![usize::MAX; n_edges + 1];
        for (i, arc) in arcs.iter().enumerate() {
            for &e in arc {
                arc_of_edge[e] = i;
            }
        }
        let crossings = tuples
            .iter()
            .zip(&d_in)
            .map(|(t, di)| {
                let di = di.expect("resolved");
                let (over_in, over_out) = if di { (t[3], t[1]) } else { (t[1], t[3]) };
                Crossing {
                    pd: *t,
                    sign: if di { 1 } else { -1 },
                    over_in,
                    over_out,
                    over_arc: arc_of_edge[over_in],
                    under_in_arc: arc_of_edge[t[0]],
                    under_out_arc: arc_of_edge[t[2]],
                }
            })
            .collect();

        let mut d = LinkDiagram {
            crossings,
            n_edges,
            arcs,
            components,
            faces: Vec::new(),
            unbounded_face: 0,
            ends,
            arc_of_edge,
            face_of: BTreeMap::new(),
        };
        d.compute_faces()?;
        d.unbounded_face = d.face_of[&(1, Side::Right)];
        Ok(d)
    }

    pub fn ends(&self, edge: usize) -> Option<EdgeEnds> {
        self.ends.get(edge).copied().flatten()
    }

    pub fn arc_of_edge(&self, edge: usize) -> usize {
        self.arc_of_edge[edge]
    }

    pub fn face_of(&self, edge: usize, side: Side) -> usize {
        self.face_of[&(edge, side)]
    }

    pub fn set_unbounded_face(&mut self, k: usize) -> Result<()> {
        if k >= self.faces.len() {
            return Err(Error::MalformedPd(format!("face {k} does not exist ({} faces)", self.faces.len())));
        }
        self.unbounded_face = k;
        Ok(())
    }

    /// Face in the corner between slots `s` and `s+1` (counterclockwise)
    /// of crossing `c`.
    pub fn corner_face(&self, c: usize, s: usize) -> usize {
        let s1 = (s + 1) % 4;
        let e = self.crossings[c].pd[s1];
        let side = if self.ends[e].expect("edge").head == (c, s1) { Side::Left } else { Side::Right };
        self.face_of[&(e, side)]
    }

    /// Region to the right of both incoming strands at crossing `c`.
    pub fn source_region(&self, c: usize) -> usize {
        if self.crossings[c].sign > 0 {
            self.corner_face(c, 0)
        } else {
            self.corner_face(c, 1)
        }
    }

    /// Traces the faces of the planar map and checks the Euler formula.
    pub fn compute_faces(&mut self) -> Result<()> {
        let n = self.n_edges;
        let mut face_of: BTreeMap<(usize, Side), usize> = BTreeMap::new();
        let mut faces: Vec<Vec<(usize, Side)>> = Vec::new();
        for e in 1..=n {
            for side in [Side::Left, Side::Right] {
                if face_of.contains_key(&(e, side)) {
                    continue;
                }
                let id = faces.len();
                let mut cycle = Vec::new();
                let (mut ce, mut cs) = (e, side);
                loop {
                    if face_of.insert((ce, cs), id).is_some() {
                        return Err(Error::MalformedPd(format!("face traversal revisits edge {ce}")));
                    }
                    cycle.push((ce, cs));
                    let (ne, ns) = self.next_dart(ce, cs);
                    if (ne, ns) == (e, side) {
                        break;
                    }
                    if cycle.len() > 2 * n {
                        return Err(Error::MalformedPd("face traversal does not close".into()));
                    }
                    (ce, cs) = (ne, ns);
                }
                faces.push(cycle);
            }
        }
        let expected = 2 - self.crossings.len() as i64 + n as i64;
        if faces.len() as i64 != expected {
            return Err(Error::EulerMismatch { faces: faces.len(), expected });
        }
        // Deterministic order: rotate each cycle to its least dart, then sort.
        for f in faces.iter_mut() {
            let k = f.iter().enumerate().min_by_key(|(_, d)| **d).map(|(i, _)| i).unwrap_or(0);
            f.rotate_left(k);
        }
        faces.sort();
        self.face_of = BTreeMap::new();
        for (i, f) in faces.iter().enumerate() {
            for &d in f {
                self.face_of.insert(d, i);
            }
        }
        self.faces = faces.into_iter().enumerate().map(|(index, boundary)| Face { index, boundary }).collect();
        Ok(())
    }

    fn next_dart(&self, e: usize, side: Side) -> (usize, Side) {
        let ends = self.ends[e].expect("edge");
        // Left side: travel along the orientation, arriving at the head.
        let (c, s) = if side == Side::Left { ends.head } else { ends.tail };
        let ns = (s + 3) % 4;
        let ne = self.crossings[c].pd[ns];
        let leaving_forward = self.ends[ne].expect("edge").tail == (c, ns);
        (ne, if leaving_forward { Side::Left } else { Side::Right })
    }

    /// The same diagram with every component reversed, renumbered so that
    /// ids again increase along each component. Returns the diagram and the
    /// map from old edge ids to new ones.
    pub fn reversed(&self) -> Result<(LinkDiagram, Vec<usize>)> {
        if self.crossings.is_empty() {
            return Ok((self.clone(), vec![0, 1]));
        }
        let mut map = vec![0; self.n_edges + 1];
        for comp in &self.components {
            let first = comp[0];
            let len = comp.len();
            for (i, &e) in comp.iter().enumerate() {
                map[e] = first + (len - i) % len;
            }
        }
        let tuples: Vec<[usize; 4]> = self
            .crossings
            .iter()
            .map(|c| {
                let [a, b, cc, d] = c.pd;
                [map[cc], map[d], map[a], map[b]]
            })
            .collect();
        Ok((LinkDiagram::from_pd(&tuples)?, map))
    }

    pub fn pd_string(&self) -> String {
        self.crossings
            .iter()
            .map(|c| format!("X[{},{},{},{}]", c.pd[0], c.pd[1], c.pd[2], c.pd[3]))
            .collect::<Vec<_>>()
            .join(" ")
    }
}
