use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{de::Error as _, Deserialize, Deserializer, Serialize, Serializer};

use super::{format_scalar, parse_scalar, Scalar};
use crate::error::{check_dim, Error, Result};

/// A point of E^n with exact rational coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point(Vec<Scalar>);

impl Point {
    pub fn new(coords: Vec<Scalar>) -> Self {
        Point(coords)
    }

    pub fn origin(dim: usize) -> Self {
        Point(vec![Scalar::zero(); dim])
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Point(coords.iter().map(|&c| super::int(c)).collect())
    }

    /// 2D point from two rationals given as `(num, den)` pairs.
    pub fn from_ratios(coords: &[(i64, i64)]) -> Self {
        Point(coords.iter().map(|&(n, d)| super::ratio(n, d)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<Scalar> {
        self.0
    }

    pub fn x(&self) -> &Scalar {
        &self.0[0]
    }

    pub fn y(&self) -> &Scalar {
        &self.0[1]
    }

    pub fn is_origin(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// Inner product; both points must share the dimension.
    pub fn dot(&self, other: &Point) -> Scalar {
        dot(&self.0, &other.0)
    }

    pub fn norm_sq(&self) -> Scalar {
        dot(&self.0, &self.0)
    }

    pub fn scaled(&self, factor: &Scalar) -> Point {
        Point(self.0.iter().map(|c| c * factor).collect())
    }

    pub fn add(&self, other: &Point) -> Point {
        Point(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Point) -> Point {
        Point(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> Point {
        Point(self.0.iter().map(|c| -c).collect())
    }

    pub fn check_dim(&self, dim: usize) -> Result<()> {
        check_dim(dim, self.dim())
    }
}

pub(crate) fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    a.iter()
        .zip(b)
        .fold(Scalar::zero(), |acc, (x, y)| acc + x * y)
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        super::serde_scalar::vec::serialize(&self.0, s)
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        super::serde_scalar::vec::deserialize(d).map(Point)
    }
}

/// Canonical representative of a ray from the origin: a primitive integer
/// vector (coordinate gcd 1) with the sign of the ray preserved.
///
/// Two `Direction`s compare equal exactly when they span the same ray.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Direction(Vec<BigInt>);

/// Canonical integer representative of the ray spanned by `v`.
pub fn canonical_direction(v: &[Scalar]) -> Result<Direction> {
    if v.iter().all(Zero::is_zero) {
        return Err(Error::ZeroVector);
    }
    let lcm = v.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = v
        .iter()
        .map(|c| (c * Scalar::from_integer(lcm.clone())).to_integer())
        .collect();
    let gcd = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    Ok(Direction(ints.into_iter().map(|c| c / &gcd).collect()))
}

impl Direction {
    pub fn from_ints(coords: &[i64]) -> Result<Self> {
        let v: Vec<Scalar> = coords.iter().map(|&c| super::int(c)).collect();
        canonical_direction(&v)
    }

    pub fn of_point(p: &Point) -> Result<Self> {
        canonical_direction(p.coords())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.0
    }

    pub fn to_scalars(&self) -> Vec<Scalar> {
        self.0.iter().cloned().map(Scalar::from_integer).collect()
    }

    pub fn to_point(&self) -> Point {
        Point(self.to_scalars())
    }

    pub fn neg(&self) -> Direction {
        Direction(self.0.iter().map(|c| -c).collect())
    }

    /// The representative of the line through this ray whose first nonzero
    /// coordinate is positive.
    pub fn line_representative(&self) -> Direction {
        match self.0.iter().find(|c| !c.is_zero()) {
            Some(c) if c.is_negative() => self.neg(),
            _ => self.clone(),
        }
    }

    pub fn dot(&self, other: &Direction) -> BigInt {
        self.0
            .iter()
            .zip(&other.0)
            .fold(BigInt::zero(), |acc, (a, b)| acc + a * b)
    }

    pub fn dot_scalars(&self, v: &[Scalar]) -> Scalar {
        self.0.iter().zip(v).fold(Scalar::zero(), |acc, (a, b)| {
            acc + b * Scalar::from_integer(a.clone())
        })
    }

    pub fn norm_sq(&self) -> BigInt {
        self.dot(self)
    }

    /// z-component of the planar cross product `self × other`.
    pub fn cross(&self, other: &Direction) -> BigInt {
        &self.0[0] * &other.0[1] - &self.0[1] * &other.0[0]
    }

    /// Planar rotation by +90 degrees.
    pub fn rot_ccw(&self) -> Direction {
        Direction(vec![-&self.0[1], self.0[0].clone()])
    }

    /// Planar rotation by -90 degrees.
    pub fn rot_cw(&self) -> Direction {
        Direction(vec![self.0[1].clone(), -&self.0[0]])
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl Serialize for Direction {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.0.iter().map(|c| c.to_string()))
    }
}

impl<'de> Deserialize<'de> for Direction {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        let v = raw
            .iter()
            .map(|t| parse_scalar(t).map_err(D::Error::custom))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        canonical_direction(&v).map_err(D::Error::custom)
    }
}

/// Position of a point relative to a closed half-space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Interior,
    Boundary,
    Exterior,
}

/// Closed half-space `{x : <normal, x> <= offset}` with a nonzero normal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Halfspace {
    normal: Vec<Scalar>,
    offset: Scalar,
}

impl Halfspace {
    pub fn new(normal: Vec<Scalar>, offset: Scalar) -> Result<Self> {
        if normal.iter().all(Zero::is_zero) {
            return Err(Error::ZeroVector);
        }
        Ok(Halfspace { normal, offset })
    }

    pub fn from_ints(normal: &[i64], offset: i64) -> Result<Self> {
        Halfspace::new(
            normal.iter().map(|&c| super::int(c)).collect(),
            super::int(offset),
        )
    }

    pub fn dim(&self) -> usize {
        self.normal.len()
    }

    pub fn normal(&self) -> &[Scalar] {
        &self.normal
    }

    pub fn offset(&self) -> &Scalar {
        &self.offset
    }

    /// Value of `<normal, x>`.
    pub fn eval(&self, x: &Point) -> Scalar {
        dot(&self.normal, x.coords())
    }

    /// Exact three-way classification of `x`.
    pub fn classify(&self, x: &Point) -> Result<Side> {
        check_dim(self.dim(), x.dim())?;
        let v = self.eval(x);
        Ok(match v.cmp(&self.offset) {
            std::cmp::Ordering::Less => Side::Interior,
            std::cmp::Ordering::Equal => Side::Boundary,
            std::cmp::Ordering::Greater => Side::Exterior,
        })
    }

    /// Membership in the closed half-space (dimensions assumed equal).
    pub fn contains(&self, x: &Point) -> bool {
        self.eval(x) <= self.offset
    }

    /// Canonical form: the normal rescaled to a primitive integer vector and
    /// the offset scaled by the same positive factor. Equal keys describe
    /// the same half-space.
    pub fn canonical_key(&self) -> (Direction, Scalar) {
        let dir = canonical_direction(&self.normal).expect("nonzero normal");
        let (i, c) = self
            .normal
            .iter()
            .enumerate()
            .find(|(_, c)| !c.is_zero())
            .expect("nonzero normal");
        let factor = Scalar::from_integer(dir.0[i].clone()) / c;
        (dir, &self.offset * factor)
    }
}

impl fmt::Display for Halfspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}, x> <= {}", Point(self.normal.clone()), self.offset)
    }
}

impl Serialize for Halfspace {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Halfspace", 2)?;
        st.serialize_field(
            "normal",
            &self.normal.iter().map(format_scalar).collect::<Vec<_>>(),
        )?;
        st.serialize_field("offset", &format_scalar(&self.offset))?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for Halfspace {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            #[serde(with = "super::serde_scalar::vec")]
            normal: Vec<Scalar>,
            #[serde(with = "super::serde_scalar")]
            offset: Scalar,
        }
        let raw = Raw::deserialize(d)?;
        Halfspace::new(raw.normal, raw.offset).map_err(D::Error::custom)
    }
}

/// Exact classification of `x` against `h`.
pub fn halfspace_contains(h: &Halfspace, x: &Point) -> Result<Side> {
    h.classify(x)
}
