use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::Quandle;
use crate::error::{Error, Result};
use crate::field::{FieldElem, Mat2, NumberField};

/// A nonzero row vector `(a, b)` up to sign, stored in canonical form: the
/// first nonzero coordinate has a positive leading coefficient.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ParabolicPoint {
    a: FieldElem,
    b: FieldElem,
}

impl ParabolicPoint {
    pub fn new(a: FieldElem, b: FieldElem) -> Result<Self> {
        if a.is_zero() && b.is_zero() {
            return Err(Error::Field("(0, 0) is not a parabolic point".into()));
        }
        let flip = if a.is_zero() { b.leading_is_negative() } else { a.leading_is_negative() };
        Ok(if flip { ParabolicPoint { a: -a, b: -b } } else { ParabolicPoint { a, b } })
    }

    pub fn from_ints(a: &[i64], b: &[i64]) -> Self {
        Self::new(FieldElem::from_ints(a), FieldElem::from_ints(b)).expect("nonzero point")
    }

    pub fn a(&self) -> &FieldElem {
        &self.a
    }

    pub fn b(&self) -> &FieldElem {
        &self.b
    }

    pub fn is_proportional(&self, other: &ParabolicPoint, field: &NumberField) -> bool {
        det_pair(field, self, other).is_zero()
    }
}

/// `a_i b_j - a_j b_i`, defined up to sign on classes.
pub fn det_pair(field: &NumberField, p: &ParabolicPoint, q: &ParabolicPoint) -> FieldElem {
    &field.mul(&p.a, &q.b) - &field.mul(&q.a, &p.b)
}

impl fmt::Debug for ParabolicPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.b)
    }
}

impl fmt::Display for ParabolicPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.b)
    }
}

impl Serialize for ParabolicPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        (&self.a, &self.b).serialize(s)
    }
}

impl<'de> Deserialize<'de> for ParabolicPoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let (a, b) = <(FieldElem, FieldElem)>::deserialize(d)?;
        ParabolicPoint::new(a, b).map_err(serde::de::Error::custom)
    }
}

/// Pairs over a number field modulo sign, with
/// `(a,b) ◁ (c,d) = (a,b) [[1+cd, d^2], [-c^2, 1-cd]]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParabolicQuandle {
    pub field: NumberField,
}

impl ParabolicQuandle {
    pub fn new(field: NumberField) -> Self {
        ParabolicQuandle { field }
    }

    /// The matrix of `· ◁ (c,d)`; it has determinant 1.
    pub fn matrix(&self, q: &ParabolicPoint) -> Mat2 {
        let f = &self.field;
        let one = FieldElem::from_int(1);
        let cd = f.mul(&q.a, &q.b);
        Mat2([
            [&one + &cd, f.square(&q.b)],
            [-f.square(&q.a), &one - &cd],
        ])
    }

    pub fn apply(&self, p: &ParabolicPoint, m: &Mat2) -> Result<ParabolicPoint> {
        let (x, y) = self.field.vec_mat((&p.a, &p.b), m);
        ParabolicPoint::new(x, y)
    }

    pub fn check(&self, p: &ParabolicPoint) -> Result<()> {
        self.field.check(&p.a)?;
        self.field.check(&p.b)
    }
}

impl Quandle for ParabolicQuandle {
    type Elem = ParabolicPoint;

    fn op(&self, p: &ParabolicPoint, q: &ParabolicPoint) -> ParabolicPoint {
        self.apply(p, &self.matrix(q)).expect("the matrix is invertible")
    }

    fn op_inv(&self, p: &ParabolicPoint, q: &ParabolicPoint) -> ParabolicPoint {
        let f = &self.field;
        let one = FieldElem::from_int(1);
        let cd = f.mul(&q.a, &q.b);
        let m = Mat2([
            [&one - &cd, -f.square(&q.b)],
            [f.square(&q.a), &one + &cd],
        ]);
        self.apply(p, &m).expect("the matrix is invertible")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup() -> (ParabolicQuandle, FieldElem) {
        let f = NumberField::hexagonal();
        let w = f.gen();
        (ParabolicQuandle::new(f), w)
    }

    fn pt(a: FieldElem, b: FieldElem) -> ParabolicPoint {
        ParabolicPoint::new(a, b).unwrap()
    }

    #[test]
    fn worked_values() {
        let (q, w) = setup();
        let one = FieldElem::from_int(1);
        let zero = FieldElem::zero();
        let a = pt(one.clone(), zero.clone());
        let b = pt(zero.clone(), w.clone());
        let ba = q.op(&b, &a);
        assert_eq!(ba, pt(-&w, w.clone()));
        assert_eq!(q.op(&ba, &a), pt(-&(&w + &w), w.clone()));
        assert_eq!(q.op(&a, &a), a);
        assert_eq!(q.op(&a, &b), pt(one.clone(), &w - &one));
    }

    #[test]
    fn sign_canonical() {
        let (_, w) = setup();
        let p = pt(-&w, w.clone());
        let m = pt(w.clone(), -&w);
        assert_eq!(p, m);
        assert!(!p.a().leading_is_negative());
        assert!(ParabolicPoint::new(FieldElem::zero(), FieldElem::zero()).is_err());
    }

    #[test]
    fn matrix_has_unit_determinant() {
        let (q, w) = setup();
        let p = pt(&w + &FieldElem::from_int(3), FieldElem::from_ints(&[-2, 5]));
        assert_eq!(q.field.det(&q.matrix(&p)), FieldElem::from_int(1));
    }

    #[test]
    fn inverse_translation() {
        let (q, w) = setup();
        let x = pt(FieldElem::from_ints(&[2, 1]), w.clone());
        let y = pt(FieldElem::from_ints(&[0, -1]), FieldElem::from_int(3));
        assert_eq!(q.op_inv(&q.op(&x, &y), &y), x);
        assert_eq!(q.op(&q.op_inv(&x, &y), &y), x);
    }

    #[test]
    fn json_roundtrip() {
        let (_, w) = setup();
        let p = pt(w.clone(), FieldElem::from_int(-1));
        let s = serde_json::to_string(&p).unwrap();
        let back: ParabolicPoint = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
    }
}
