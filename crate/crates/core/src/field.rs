//! Exact arithmetic in algebraic number fields `Q[t]/(f)`.
//!
//! Elements are coefficient vectors in the power basis `1, t, t^2, ...`,
//! stored without trailing zeros so that equality and ordering are plain
//! data comparisons. Addition and negation need no field context; the
//! product, inverse and the 2x2 matrix helpers go through [`NumberField`].

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let t = s.trim();
    BigRational::from_str(t).map_err(|_| Error::Parse(format!("not a rational number: {t:?}")))
}

pub fn rational(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// An element of a number field in the power basis.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FieldElem(Vec<BigRational>);

impl FieldElem {
    pub fn zero() -> Self {
        FieldElem(Vec::new())
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_coeffs(vec![rational(n)])
    }

    pub fn from_rational(q: BigRational) -> Self {
        Self::from_coeffs(vec![q])
    }

    /// `c0 + c1 t + c2 t^2 + ...` from integer coefficients.
    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| rational(c)).collect())
    }

    pub fn from_coeffs(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        FieldElem(coeffs)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.0
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        self.0.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Sign of the first nonzero coefficient (constant term first).
    pub fn leading_is_negative(&self) -> bool {
        self.0.iter().find(|c| !c.is_zero()).is_some_and(|c| c.is_negative())
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        Self::from_coeffs(self.0.iter().map(|c| c * q).collect())
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { "-" } else { "+" })?;
            }
            first = false;
            let unit = abs.is_one();
            match k {
                0 => write!(f, "{abs}")?,
                _ => {
                    if !unit {
                        write!(f, "{abs}")?;
                    }
                    write!(f, "t")?;
                    if k > 1 {
                        write!(f, "^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl Add for &FieldElem {
    type Output = FieldElem;
    fn add(self, rhs: &FieldElem) -> FieldElem {
        let n = self.0.len().max(rhs.0.len());
        FieldElem::from_coeffs((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &FieldElem {
    type Output = FieldElem;
    fn sub(self, rhs: &FieldElem) -> FieldElem {
        let n = self.0.len().max(rhs.0.len());
        FieldElem::from_coeffs((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        FieldElem(self.0.iter().map(|c| -c).collect())
    }
}

impl Add for FieldElem {
    type Output = FieldElem;
    fn add(self, rhs: FieldElem) -> FieldElem {
        &self + &rhs
    }
}

impl Sub for FieldElem {
    type Output = FieldElem;
    fn sub(self, rhs: FieldElem) -> FieldElem {
        &self - &rhs
    }
}

impl Neg for FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        -&self
    }
}

impl Serialize for FieldElem {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.0.len().max(1)))?;
        if self.0.is_empty() {
            seq.serialize_element("0")?;
        }
        for c in &self.0 {
            seq.serialize_element(&c.to_string())?;
        }
        seq.end()
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawScalar {
    Int(i64),
    Str(String),
}

impl RawScalar {
    fn to_rational(&self) -> Result<BigRational> {
        match self {
            RawScalar::Int(n) => Ok(rational(*n)),
            RawScalar::Str(s) => parse_rational(s),
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawElem {
    Scalar(RawScalar),
    Coeffs(Vec<RawScalar>),
}

impl<'de> Deserialize<'de> for FieldElem {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = RawElem::deserialize(deserializer)?;
        let coeffs = match raw {
            RawElem::Scalar(s) => vec![s.to_rational().map_err(de::Error::custom)?],
            RawElem::Coeffs(v) => v
                .iter()
                .map(|s| s.to_rational())
                .collect::<Result<Vec<_>>>()
                .map_err(de::Error::custom)?,
        };
        Ok(FieldElem::from_coeffs(coeffs))
    }
}

/// `Q[t]/(f)` for a monic irreducible `f`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NumberField {
    /// Coefficients `c_0..c_{n-1}` of `f(t) = t^n + c_{n-1} t^{n-1} + ... + c_0`.
    lower: Vec<BigRational>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum FieldSpec {
    Quadratic { d: i64 },
    MinPoly { minpoly: Vec<FieldElem> },
}

impl NumberField {
    /// Field from the coefficients of a monic polynomial, constant term first,
    /// leading 1 included. Irreducibility is the caller's responsibility for
    /// degree > 2; it is checked for quadratics.
    pub fn from_monic(coeffs: &[BigRational]) -> Result<Self> {
        let n = coeffs.len().saturating_sub(1);
        if n == 0 {
            return Err(Error::Field("minimal polynomial must have degree >= 1".into()));
        }
        if !coeffs[n].is_one() {
            return Err(Error::Field("minimal polynomial must be monic".into()));
        }
        if n == 2 {
            // t^2 + c1 t + c0 is irreducible iff its discriminant is not a square.
            let disc = &coeffs[1] * &coeffs[1] - rational(4) * &coeffs[0];
            if is_rational_square(&disc) {
                return Err(Error::Field("quadratic minimal polynomial is reducible".into()));
            }
        }
        Ok(NumberField { lower: coeffs[..n].to_vec() })
    }

    pub fn from_monic_ints(coeffs: &[i64]) -> Result<Self> {
        Self::from_monic(&coeffs.iter().map(|&c| rational(c)).collect::<Vec<_>>())
    }

    /// The rationals.
    pub fn rationals() -> Self {
        NumberField { lower: vec![BigRational::zero()] }
    }

    /// `Q(sqrt d)` with the integral-basis generator: `(1 + sqrt d)/2` when
    /// `d = 1 mod 4`, otherwise `sqrt d`. For `d = -3` the generator satisfies
    /// `t^2 = t - 1`.
    pub fn quadratic(d: i64) -> Result<Self> {
        if d == 0 || d == 1 || !is_squarefree(d) {
            return Err(Error::Field(format!("{d} is not a square-free integer other than 0, 1")));
        }
        if d.rem_euclid(4) == 1 {
            // t^2 - t + (1 - d)/4
            Self::from_monic_ints(&[(1 - d) / 4, -1, 1])
        } else {
            Self::from_monic_ints(&[-d, 0, 1])
        }
    }

    /// `Q(w)` with `w = (-1 + sqrt -3)/2`, i.e. `w^2 = -1 - w`.
    pub fn eisenstein() -> Self {
        Self::from_monic_ints(&[1, 1, 1]).expect("t^2+t+1 is irreducible")
    }

    /// `Q(w)` with `w = (1 + sqrt -3)/2`, i.e. `w^2 = w - 1`.
    pub fn hexagonal() -> Self {
        Self::quadratic(-3).expect("-3 is square-free")
    }

    pub fn degree(&self) -> usize {
        self.lower.len()
    }

    pub fn minpoly(&self) -> Vec<BigRational> {
        let mut v = self.lower.clone();
        v.push(BigRational::one());
        v
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let spec: FieldSpec = serde_json::from_value(value.clone())
            .map_err(|e| Error::Parse(format!("field spec: {e}")))?;
        match spec {
            FieldSpec::Quadratic { d } => Self::quadratic(d),
            FieldSpec::MinPoly { minpoly } => {
                let coeffs = minpoly
                    .iter()
                    .map(|c| match c.coeffs() {
                        [] => Ok(BigRational::zero()),
                        [q] => Ok(q.clone()),
                        _ => Err(Error::Parse("minpoly coefficients must be rational".into())),
                    })
                    .collect::<Result<Vec<_>>>()?;
                Self::from_monic(&coeffs)
            }
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let minpoly: Vec<FieldElem> = self.minpoly().into_iter().map(FieldElem::from_rational).collect();
        serde_json::json!({ "minpoly": minpoly })
    }

    /// The generator `t`.
    pub fn gen(&self) -> FieldElem {
        self.reduce(vec![BigRational::zero(), BigRational::one()])
    }

    pub fn contains(&self, x: &FieldElem) -> bool {
        x.0.len() <= self.degree()
    }

    pub fn check(&self, x: &FieldElem) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::Field(format!("{x} has more coefficients than the field degree {}", self.degree())))
        }
    }

    fn reduce(&self, mut c: Vec<BigRational>) -> FieldElem {
        let n = self.degree();
        while c.len() > n {
            let top = c.pop().expect("nonempty");
            if top.is_zero() {
                continue;
            }
            let shift = c.len() - n;
            for (j, cj) in self.lower.iter().enumerate() {
                c[shift + j] -= &top * cj;
            }
        }
        FieldElem::from_coeffs(c)
    }

    pub fn mul(&self, x: &FieldElem, y: &FieldElem) -> FieldElem {
        if x.is_zero() || y.is_zero() {
            return FieldElem::zero();
        }
        let mut c = vec![BigRational::zero(); x.0.len() + y.0.len() - 1];
        for (i, a) in x.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.0.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        self.reduce(c)
    }

    pub fn square(&self, x: &FieldElem) -> FieldElem {
        self.mul(x, x)
    }

    pub fn pow(&self, x: &FieldElem, mut e: u64) -> FieldElem {
        let mut base = x.clone();
        let mut acc = FieldElem::from_int(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse, solving `x * y = 1` as a linear system over Q.
    pub fn inv(&self, x: &FieldElem) -> Result<FieldElem> {
        let n = self.degree();
        if x.is_zero() {
            return Err(Error::Field("division by zero".into()));
        }
        // Column k of the multiplication matrix is x * t^k.
        let mut cols = Vec::with_capacity(n);
        let mut basis = FieldElem::from_int(1);
        let t = self.gen();
        for _ in 0..n {
            cols.push(self.mul(x, &basis));
            basis = self.mul(&basis, &t);
        }
        // Augmented rows: a[r][k] = coeff r of column k, rhs e_0.
        let mut a: Vec<Vec<BigRational>> = (0..n)
            .map(|r| {
                let mut row: Vec<BigRational> = cols.iter().map(|c| c.coeff(r)).collect();
                row.push(if r == 0 { BigRational::one() } else { BigRational::zero() });
                row
            })
            .collect();
        for col in 0..n {
            let piv = (col..n)
                .find(|&r| !a[r][col].is_zero())
                .ok_or_else(|| Error::Field(format!("{x} is a zero divisor; minimal polynomial is reducible")))?;
            a.swap(col, piv);
            let p = a[col][col].clone();
            for v in a[col].iter_mut() {
                *v /= &p;
            }
            for r in 0..n {
                if r != col && !a[r][col].is_zero() {
                    let f = a[r][col].clone();
                    for k in col..=n {
                        let sub = &f * &a[col][k];
                        a[r][k] -= sub;
                    }
                }
            }
        }
        Ok(FieldElem::from_coeffs(a.into_iter().map(|mut row| row.pop().expect("rhs")).collect()))
    }

    pub fn div(&self, x: &FieldElem, y: &FieldElem) -> Result<FieldElem> {
        Ok(self.mul(x, &self.inv(y)?))
    }

    pub fn mat_mul(&self, a: &Mat2, b: &Mat2) -> Mat2 {
        let e = |i: usize, j: usize| &self.mul(&a.0[i][0], &b.0[0][j]) + &self.mul(&a.0[i][1], &b.0[1][j]);
        Mat2([[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]])
    }

    pub fn det(&self, a: &Mat2) -> FieldElem {
        &self.mul(&a.0[0][0], &a.0[1][1]) - &self.mul(&a.0[0][1], &a.0[1][0])
    }

    pub fn mat_inv(&self, a: &Mat2) -> Result<Mat2> {
        let d = self.inv(&self.det(a))?;
        let [[p, q], [r, s]] = &a.0;
        Ok(Mat2([
            [self.mul(s, &d), self.mul(&-q, &d)],
            [self.mul(&-r, &d), self.mul(p, &d)],
        ]))
    }

    /// Row vector times matrix.
    pub fn vec_mat(&self, v: (&FieldElem, &FieldElem), m: &Mat2) -> (FieldElem, FieldElem) {
        let x = &self.mul(v.0, &m.0[0][0]) + &self.mul(v.1, &m.0[1][0]);
        let y = &self.mul(v.0, &m.0[0][1]) + &self.mul(v.1, &m.0[1][1]);
        (x, y)
    }
}

/// A 2x2 matrix over a number field, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Mat2(pub [[FieldElem; 2]; 2]);

impl Mat2 {
    pub fn identity() -> Self {
        Mat2([[FieldElem::from_int(1), FieldElem::zero()], [FieldElem::zero(), FieldElem::from_int(1)]])
    }

    pub fn neg(&self) -> Self {
        let n = |x: &FieldElem| -x;
        Mat2([[n(&self.0[0][0]), n(&self.0[0][1])], [n(&self.0[1][0]), n(&self.0[1][1])]])
    }

    /// Equality in PSL2: `self = other` or `self = -other`.
    pub fn eq_projective(&self, other: &Mat2) -> bool {
        self == other || self.neg() == *other
    }

    /// Representative with the first nonzero entry (row-major) having a
    /// positive leading coefficient.
    pub fn canonical_sign(&self) -> Mat2 {
        let first = self.0.iter().flatten().find(|x| !x.is_zero());
        match first {
            Some(x) if x.leading_is_negative() => self.neg(),
            _ => self.clone(),
        }
    }
}

fn is_squarefree(d: i64) -> bool {
    let n = d.unsigned_abs();
    let mut k: u64 = 2;
    while k * k <= n {
        if n % (k * k) == 0 {
            return false;
        }
        k += 1;
    }
    true
}

fn is_rational_square(q: &BigRational) -> bool {
    if q.is_negative() {
        return false;
    }
    let is_sq = |n: &BigInt| {
        let r = n.sqrt();
        &r * &r == *n
    };
    is_sq(q.numer()) && is_sq(q.denom())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w() -> (NumberField, FieldElem) {
        let f = NumberField::hexagonal();
        let w = f.gen();
        (f, w)
    }

    #[test]
    fn hexagonal_generator_relation() {
        let (f, w) = w();
        // w^2 = w - 1 and w^3 = -1
        assert_eq!(f.square(&w), &w - &FieldElem::from_int(1));
        assert_eq!(f.pow(&w, 3), FieldElem::from_int(-1));
    }

    #[test]
    fn eisenstein_generator_relation() {
        let f = NumberField::eisenstein();
        let w = f.gen();
        assert_eq!(f.square(&w), &FieldElem::from_int(-1) - &w);
        assert_eq!(f.pow(&w, 3), FieldElem::from_int(1));
    }

    #[test]
    fn inverse_roundtrip() {
        let (f, w) = w();
        let x = &FieldElem::from_int(2) + &w;
        let y = f.inv(&x).unwrap();
        assert_eq!(f.mul(&x, &y), FieldElem::from_int(1));
        assert!(f.inv(&FieldElem::zero()).is_err());
    }

    #[test]
    fn cubic_field_inverse() {
        // t^3 + t^2 + 2t + 1
        let f = NumberField::from_monic_ints(&[1, 2, 1, 1]).unwrap();
        let t = f.gen();
        assert_eq!(f.pow(&t, 3), FieldElem::from_ints(&[-1, -2, -1]));
        let x = FieldElem::from_ints(&[3, -1, 2]);
        assert_eq!(f.mul(&x, &f.inv(&x).unwrap()), FieldElem::from_int(1));
    }

    #[test]
    fn quadratic_rejects_bad_d() {
        assert!(NumberField::quadratic(4).is_err());
        assert!(NumberField::quadratic(1).is_err());
        assert!(NumberField::quadratic(-12).is_err());
        assert_eq!(NumberField::quadratic(2).unwrap().degree(), 2);
        assert!(NumberField::from_monic_ints(&[-4, 0, 1]).is_err());
    }

    #[test]
    fn json_roundtrip_of_elements() {
        let x = FieldElem::from_coeffs(vec![parse_rational("-1/2").unwrap(), rational(3)]);
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, r#"["-1/2","3"]"#);
        let y: FieldElem = serde_json::from_str(&s).unwrap();
        assert_eq!(x, y);
        let z: FieldElem = serde_json::from_str("7").unwrap();
        assert_eq!(z, FieldElem::from_int(7));
    }

    #[test]
    fn display_is_readable() {
        assert_eq!(FieldElem::from_ints(&[1, -4]).to_string(), "1-4t");
        assert_eq!(FieldElem::from_ints(&[0, -1]).to_string(), "-t");
        assert_eq!(FieldElem::zero().to_string(), "0");
    }

    #[test]
    fn matrix_inverse() {
        let (f, w) = w();
        let m = Mat2([[FieldElem::from_int(1), w.clone()], [FieldElem::zero(), FieldElem::from_int(1)]]);
        let mi = f.mat_inv(&m).unwrap();
        assert_eq!(f.mat_mul(&m, &mi), Mat2::identity());
    }
}
