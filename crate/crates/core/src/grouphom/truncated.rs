//! Truncated simplices over `PSL₂` of a number field and the map `β` from
//! tuples of parabolic points.

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::field::{FieldElem, Mat2, NumberField};
use crate::quandle::{det_pair, ParabolicPoint};

/// A simplex on `n+1` vertices decorated by the labels `g_ij` (`i ≠ j`).
/// `points[i]` is the first row shared by every `g_i•`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSimplex {
    pub points: Vec<ParabolicPoint>,
    /// `labels[i][j]` is `g_ij`; the diagonal is unused.
    pub labels: Vec<Vec<Option<Mat2>>>,
    /// Per-vertex cusp tag `m_i`, when known.
    pub cusps: Vec<Option<usize>>,
}

/// A degree-2 face of a truncated 3-simplex.
pub type TruncatedFace = TruncatedSimplex;

impl TruncatedSimplex {
    pub fn degree(&self) -> usize {
        self.points.len() - 1
    }

    pub fn label(&self, i: usize, j: usize) -> &Mat2 {
        self.labels[i][j].as_ref().expect("off-diagonal label")
    }

    /// `det g_ij = 1` for every label, and `g_ij g_ik⁻¹` is `±[[1,0],[x,1]]`
    /// for every vertex `i`.
    pub fn check(&self, field: &NumberField) -> bool {
        let n = self.points.len();
        let one = FieldElem::from_int(1);
        for i in 0..n {
            for j in (0..n).filter(|&j| j != i) {
                if field.det(self.label(i, j)) != one {
                    return false;
                }
                for k in (0..n).filter(|&k| k != i && k != j) {
                    let Ok(inv) = field.mat_inv(self.label(i, k)) else { return false };
                    let q = field.mat_mul(self.label(i, j), &inv).canonical_sign();
                    let [[a, b], [_, d]] = &q.0;
                    if *a != one || !b.is_zero() || *d != one {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Restriction to the face opposite vertex `v`.
    pub fn face(&self, v: usize) -> TruncatedSimplex {
        let keep: Vec<usize> = (0..self.points.len()).filter(|&i| i != v).collect();
        TruncatedSimplex {
            points: keep.iter().map(|&i| self.points[i].clone()).collect(),
            labels: keep.iter().map(|&i| keep.iter().map(|&j| self.labels[i][j].clone()).collect()).collect(),
            cusps: keep.iter().map(|&i| self.cusps[i]).collect(),
        }
    }

    /// The same simplex with every label multiplied on the right by `m`.
    pub fn act(&self, field: &NumberField, m: &Mat2) -> Result<TruncatedSimplex> {
        let points = self
            .points
            .iter()
            .map(|p| {
                let (x, y) = field.vec_mat((p.a(), p.b()), m);
                ParabolicPoint::new(x, y)
            })
            .collect::<Result<_>>()?;
        let labels = self
            .labels
            .iter()
            .map(|row| row.iter().map(|g| g.as_ref().map(|g| field.mat_mul(g, m).canonical_sign())).collect())
            .collect();
        Ok(TruncatedSimplex { points, labels, cusps: self.cusps.clone() })
    }
}

impl Serialize for TruncatedSimplex {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Label<'a> {
            i: usize,
            j: usize,
            matrix: &'a Mat2,
        }
        let n = self.points.len();
        let labels: Vec<Label> = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| Label { i, j, matrix: self.label(i, j) })
            .collect();
        let mut st = s.serialize_struct("TruncatedSimplex", 3)?;
        st.serialize_field("points", &self.points)?;
        st.serialize_field("labels", &labels)?;
        st.serialize_field("cusps", &self.cusps)?;
        st.end()
    }
}

/// `β`: `g_ij = [[a_i, b_i], [a_j/δ, b_j/δ]]` with `δ = a_i b_j − a_j b_i`.
/// Every pair of points must be independent.
pub fn beta_labels(field: &NumberField, points: &[ParabolicPoint]) -> Result<TruncatedSimplex> {
    let n = points.len();
    let mut labels = vec![vec![None; n]; n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let delta = det_pair(field, &points[i], &points[j]);
            if delta.is_zero() {
                return Err(Error::DegenerateTuple { i: i.min(j), j: i.max(j) });
            }
            let inv = field.inv(&delta)?;
            labels[i][j] = Some(Mat2([
                [points[i].a().clone(), points[i].b().clone()],
                [field.mul(points[j].a(), &inv), field.mul(points[j].b(), &inv)],
            ]));
        }
    }
    Ok(TruncatedSimplex { points: points.to_vec(), labels, cusps: vec![None; n] })
}

/// `β` on a 4-tuple; the labels are verified against the determinant and
/// coset conditions.
pub fn beta_truncated(field: &NumberField, points: &[ParabolicPoint]) -> Result<TruncatedSimplex> {
    if points.len() != 4 {
        return Err(Error::DegreeMismatch { expected: 4, found: points.len() });
    }
    let s = beta_labels(field, points)?;
    if !s.check(field) {
        return Err(Error::Field("β produced labels violating the coset condition".into()));
    }
    Ok(s)
}

/// Finds `M` with `det M = 1` and `t1[i]·M = ±t2[i]` for all `i`.
pub fn parabolic_tuple_equiv(
    field: &NumberField,
    t1: &[ParabolicPoint],
    t2: &[ParabolicPoint],
) -> Result<Option<Mat2>> {
    if t1.len() != t2.len() || t1.len() < 2 {
        return Err(Error::DegreeMismatch { expected: t1.len().max(2), found: t2.len() });
    }
    let p = Mat2([[t1[0].a().clone(), t1[0].b().clone()], [t1[1].a().clone(), t1[1].b().clone()]]);
    if field.det(&p).is_zero() {
        return Err(Error::IllConditioned);
    }
    let p_inv = field.mat_inv(&p)?;
    let one = FieldElem::from_int(1);
    // M and -M are the same element, so the sign of the first row is fixed
    for s in [1i64, -1] {
        let (c, d) = if s == 1 {
            (t2[1].a().clone(), t2[1].b().clone())
        } else {
            (-t2[1].a(), -t2[1].b())
        };
        let target = Mat2([[t2[0].a().clone(), t2[0].b().clone()], [c, d]]);
        let m = field.mat_mul(&p_inv, &target);
        if field.det(&m) != one {
            continue;
        }
        let all = t1.iter().zip(t2).skip(2).all(|(x, y)| {
            let (u, v) = field.vec_mat((x.a(), x.b()), &m);
            ParabolicPoint::new(u, v).is_ok_and(|q| q == *y)
        });
        if all {
            return Ok(Some(m.canonical_sign()));
        }
    }
    Ok(None)
}

/// Sums coefficients of terms that are equal in coinvariants (some `M` carries
/// one onto the other, labels included) and drops classes summing to zero.
/// The first member of each class is its representative.
pub fn group_by_equivalence(
    field: &NumberField,
    terms: &[(i64, TruncatedSimplex)],
) -> Result<Vec<(i64, TruncatedSimplex)>> {
    let mut classes: Vec<(i64, TruncatedSimplex)> = Vec::new();
    'outer: for (c, s) in terms {
        for (acc, rep) in classes.iter_mut() {
            if let Some(m) = parabolic_tuple_equiv(field, &rep.points, &s.points)? {
                let moved = rep.act(field, &m)?;
                let labels_match = moved.labels.iter().flatten().zip(s.labels.iter().flatten()).all(|(x, y)| match (x, y) {
                    (Some(x), Some(y)) => x.eq_projective(y),
                    (None, None) => true,
                    _ => false,
                });
                if labels_match {
                    *acc += c;
                    continue 'outer;
                }
            }
        }
        classes.push((*c, s.clone()));
    }
    classes.retain(|(c, _)| *c != 0);
    Ok(classes)
}

/// Alternating sum of faces, grouped in coinvariants.
pub fn truncated_boundary(field: &NumberField, chain: &[(i64, TruncatedSimplex)]) -> Result<Vec<(i64, TruncatedSimplex)>> {
    Ok(group_by_equivalence(field, &raw_faces(chain))?)
}

/// Alternating sum of faces without any identification.
pub fn raw_faces(chain: &[(i64, TruncatedSimplex)]) -> Vec<(i64, TruncatedSimplex)> {
    let mut out = Vec::new();
    for (c, s) in chain {
        for v in 0..s.points.len() {
            let sign = if v % 2 == 0 { *c } else { -*c };
            out.push((sign, s.face(v)));
        }
    }
    out
}
