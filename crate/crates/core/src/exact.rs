//! Small helpers around [`BigRational`] shared by every module, including the
//! `{num, den}` string encoding used in JSON exports.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub type Q = BigRational;

pub fn rat(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: i64) -> Q {
    Q::from_integer(BigInt::from(v))
}

/// `base^-exp` as an exact rational.
pub fn inv_pow(base: u64, exp: u32) -> Q {
    Q::new(BigInt::one(), num_traits::pow(BigInt::from(base), exp as usize))
}

pub fn pow(base: &Q, exp: u32) -> Q {
    num_traits::pow(base.clone(), exp as usize)
}

pub fn abs(v: &Q) -> Q {
    v.abs()
}

pub fn is_zero(v: &Q) -> bool {
    v.is_zero()
}

/// Exact square root of a non-negative rational, when it is rational.
pub fn sqrt_exact(v: &Q) -> Option<Q> {
    if v.is_negative() {
        return None;
    }
    let n = v.numer().sqrt();
    let d = v.denom().sqrt();
    if &n * &n == *v.numer() && &d * &d == *v.denom() {
        Some(Q::new(n, d))
    } else {
        None
    }
}

pub fn to_f64(v: &Q) -> f64 {
    use num_traits::ToPrimitive;
    v.to_f64().unwrap_or(f64::NAN)
}

/// JSON form of an exact rational: numerator and denominator as decimal strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalRepr {
    pub num: String,
    pub den: String,
}

impl From<&Q> for RationalRepr {
    fn from(v: &Q) -> Self {
        RationalRepr {
            num: v.numer().to_string(),
            den: v.denom().to_string(),
        }
    }
}

impl TryFrom<RationalRepr> for Q {
    type Error = String;

    fn try_from(r: RationalRepr) -> Result<Self, Self::Error> {
        let num: BigInt = r.num.parse().map_err(|e| format!("bad numerator: {e}"))?;
        let den: BigInt = r.den.parse().map_err(|e| format!("bad denominator: {e}"))?;
        if den.is_zero() {
            return Err("zero denominator".into());
        }
        Ok(Q::new(num, den))
    }
}

/// `#[serde(with = "crate::exact::serde_q")]` adapter.
pub mod serde_q {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Q, s: S) -> Result<S::Ok, S::Error> {
        RationalRepr::from(v).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        let r = RationalRepr::deserialize(d)?;
        Q::try_from(r).map_err(serde::de::Error::custom)
    }
}

/// Parses `"a/b"` or `"a"` into an exact rational.
pub fn parse_q(text: &str) -> Result<Q, String> {
    let text = text.trim();
    let (n, d) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt = n.parse().map_err(|_| format!("not an integer: {n:?}"))?;
    let den: BigInt = d.parse().map_err(|_| format!("not an integer: {d:?}"))?;
    if den.is_zero() {
        return Err(format!("zero denominator in {text:?}"));
    }
    Ok(Q::new(num, den))
}

pub fn fmt_q(v: &Q) -> String {
    if v.is_integer() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_of_squares_and_non_squares() {
        assert_eq!(sqrt_exact(&rat(9, 4)), Some(rat(3, 2)));
        assert_eq!(sqrt_exact(&rat(2, 1)), None);
        assert_eq!(sqrt_exact(&rat(-1, 1)), None);
        assert_eq!(sqrt_exact(&Q::zero()), Some(Q::zero()));
    }

    #[test]
    fn parse_and_repr_roundtrip() {
        let v = parse_q(" -6/8 ").unwrap();
        assert_eq!(v, rat(-3, 4));
        let back = Q::try_from(RationalRepr::from(&v)).unwrap();
        assert_eq!(back, v);
        assert!(parse_q("1/0").is_err());
        assert_eq!(inv_pow(2, 3), rat(1, 8));
    }
}
