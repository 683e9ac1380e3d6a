//! Exact scalar arithmetic, points, directions, half-spaces, a rational
//! simplex solver and planar hull primitives.
//!
//! Every predicate in the crate is decided here with exact rationals; there
//! is no floating point anywhere on a decision path.

pub mod hull2d;
pub mod lp;
mod point;

pub(crate) use point::dot as point_dot;
pub use point::{canonical_direction, halfspace_contains, Direction, Halfspace, Point, Side};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational number with arbitrary-precision numerator and denominator.
///
/// `BigRational` keeps the denominator positive and the fraction reduced
/// after every operation.
pub type Scalar = BigRational;

pub fn int(v: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(v))
}

/// `num / den`; panics on a zero denominator.
pub fn ratio(num: i64, den: i64) -> Scalar {
    Scalar::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `"n"`, `"n/d"` or a finite decimal such as `"-1.25"` exactly.
pub fn parse_scalar(text: &str) -> Result<Scalar> {
    let s = text.trim();
    let bad = || Error::invalid(format!("not an exact rational: {text:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::invalid(format!("zero denominator in {text:?}")));
        }
        return Ok(Scalar::new(n, d));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = whole.trim_start().starts_with('-');
        let whole: BigInt = match whole {
            "" | "-" | "+" => BigInt::zero(),
            w => w.parse().map_err(|_| bad())?,
        };
        let frac_num: BigInt = frac.parse().map_err(|_| bad())?;
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let frac_part = Scalar::new(frac_num, scale);
        let whole = Scalar::from_integer(whole);
        return Ok(if negative {
            whole - frac_part
        } else {
            whole + frac_part
        });
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Scalar::from_integer(n))
}

/// `"n"` for integers, `"n/d"` otherwise.
pub fn format_scalar(v: &Scalar) -> String {
    v.to_string()
}

/// The exact dyadic rational equal to a finite `f64`.
pub fn from_f64_exact(v: f64) -> Result<Scalar> {
    Scalar::from_float(v).ok_or_else(|| Error::invalid(format!("non-finite value {v}")))
}

/// Lossy conversion used only for drawing.
pub fn to_f64(v: &Scalar) -> f64 {
    use num_traits::ToPrimitive;
    v.to_f64().unwrap_or(f64::NAN)
}

/// Smallest nonnegative integer `k` with `k^2 >= q`.
pub fn ceil_sqrt(q: &Scalar) -> BigInt {
    if !q.is_positive() {
        return BigInt::zero();
    }
    let c = q.ceil().to_integer();
    let mut k = c.sqrt();
    while Scalar::from_integer(&k * &k) < *q {
        k += BigInt::one();
    }
    while k.is_positive() {
        let prev = &k - BigInt::one();
        if Scalar::from_integer(&prev * &prev) >= *q {
            k = prev;
        } else {
            break;
        }
    }
    k
}

/// Largest integer `k >= 0` with `k^2 <= q` (zero for negative `q`).
pub fn floor_sqrt(q: &Scalar) -> BigInt {
    if !q.is_positive() {
        return BigInt::zero();
    }
    let mut k = q.floor().to_integer().sqrt();
    while Scalar::from_integer((&k + 1) * (&k + 1)) <= *q {
        k += BigInt::one();
    }
    k
}

/// Serde adapters that write scalars as `"num/den"` strings.
pub mod serde_scalar {
    use super::{format_scalar, parse_scalar, Scalar};
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Scalar, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_scalar(v))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Scalar, D::Error> {
        let text = String::deserialize(d)?;
        parse_scalar(&text).map_err(D::Error::custom)
    }

    pub mod vec {
        use super::super::{format_scalar, parse_scalar, Scalar};
        use serde::{de::Error as _, ser::SerializeSeq, Deserialize, Deserializer, Serializer};

        pub fn serialize<S: Serializer>(v: &[Scalar], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(v.len()))?;
            for x in v {
                seq.serialize_element(&format_scalar(x))?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Scalar>, D::Error> {
            Vec::<String>::deserialize(d)?
                .iter()
                .map(|t| parse_scalar(t).map_err(D::Error::custom))
                .collect()
        }
    }

    pub mod option {
        use super::super::{format_scalar, parse_scalar, Scalar};
        use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

        pub fn serialize<S: Serializer>(v: &Option<Scalar>, s: S) -> Result<S::Ok, S::Error> {
            match v {
                Some(x) => s.serialize_some(&format_scalar(x)),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Scalar>, D::Error> {
            Option::<String>::deserialize(d)?
                .map(|t| parse_scalar(&t).map_err(D::Error::custom))
                .transpose()
        }
    }
}
