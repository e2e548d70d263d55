//! Exact complex scalars `re + im*i` with rational parts.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::{int, parse_q, sqrt_exact, to_f64, Q};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GaussianRational {
    pub re: Q,
    pub im: Q,
}

pub type G = GaussianRational;

impl GaussianRational {
    pub fn new(re: Q, im: Q) -> Self {
        GaussianRational { re, im }
    }

    pub fn real(re: Q) -> Self {
        GaussianRational { re, im: Q::zero() }
    }

    pub fn from_int(v: i64) -> Self {
        Self::real(int(v))
    }

    pub fn i() -> Self {
        GaussianRational::new(Q::zero(), Q::one())
    }

    pub fn conj(&self) -> Self {
        GaussianRational::new(self.re.clone(), -&self.im)
    }

    /// `|z|^2`, always rational.
    pub fn norm_sqr(&self) -> Q {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn inv(&self) -> Result<Self> {
        let n = self.norm_sqr();
        if n.is_zero() {
            return Err(Error::invalid("division by zero"));
        }
        Ok(GaussianRational::new(&self.re / &n, -&self.im / &n))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// Exact square root in `Q(i)`, when one exists.
    pub fn sqrt(&self) -> Option<Self> {
        if self.im.is_zero() {
            return if self.re.is_negative() {
                sqrt_exact(&-&self.re).map(|s| GaussianRational::new(Q::zero(), s))
            } else {
                sqrt_exact(&self.re).map(Self::real)
            };
        }
        // (x + iy)^2 = a + ib  =>  x^2 = (a + |z|)/2, y = b/(2x)
        let modulus = sqrt_exact(&self.norm_sqr())?;
        let x = sqrt_exact(&((&self.re + modulus) / int(2)))?;
        let y = &self.im / (int(2) * &x);
        Some(GaussianRational::new(x, y))
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(to_f64(&self.re), to_f64(&self.im))
    }

    /// Parses `a/b`, `a/b+c/di`, `-i`, `3i` and similar.
    pub fn parse(text: &str) -> Result<Self> {
        let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = |m: String| Error::parse("gaussian rational", m);
        if let Some(body) = t.strip_suffix('i') {
            let split = body
                .char_indices()
                .skip(1)
                .filter(|&(_, c)| c == '+' || c == '-')
                .map(|(k, _)| k)
                .last();
            let (re, im) = match split {
                Some(k) => (&body[..k], &body[k..]),
                None => ("0", body),
            };
            let im = match im {
                "" | "+" => "1",
                "-" => "-1",
                s => s.trim_start_matches('+'),
            };
            Ok(GaussianRational::new(parse_q(re).map_err(bad)?, parse_q(im).map_err(bad)?))
        } else {
            Ok(Self::real(parse_q(&t).map_err(bad)?))
        }
    }
}

impl Zero for GaussianRational {
    fn zero() -> Self {
        GaussianRational::new(Q::zero(), Q::zero())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussianRational {
    fn one() -> Self {
        Self::real(Q::one())
    }
}

impl From<Q> for GaussianRational {
    fn from(v: Q) -> Self {
        Self::real(v)
    }
}

impl From<i64> for GaussianRational {
    fn from(v: i64) -> Self {
        Self::from_int(v)
    }
}

impl<'a> Add<&'a G> for &'a G {
    type Output = G;
    fn add(self, o: &G) -> G {
        G::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl<'a> Sub<&'a G> for &'a G {
    type Output = G;
    fn sub(self, o: &G) -> G {
        G::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl<'a> Mul<&'a G> for &'a G {
    type Output = G;
    fn mul(self, o: &G) -> G {
        G::new(&self.re * &o.re - &self.im * &o.im, &self.re * &o.im + &self.im * &o.re)
    }
}

impl<'a> Div<&'a G> for &'a G {
    type Output = G;
    /// Panics on a zero divisor; use [`GaussianRational::checked_div`] otherwise.
    fn div(self, o: &G) -> G {
        self.checked_div(o).expect("division by zero")
    }
}

impl<'a> Mul<&'a Q> for &'a G {
    type Output = G;
    fn mul(self, o: &Q) -> G {
        G::new(&self.re * o, &self.im * o)
    }
}

macro_rules! owned_ops {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr<G> for G {
            type Output = G;
            fn $f(self, o: G) -> G { (&self).$f(&o) }
        }
        impl<'a> $tr<&'a G> for G {
            type Output = G;
            fn $f(self, o: &G) -> G { (&self).$f(o) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul, Div div);

impl Neg for G {
    type Output = G;
    fn neg(self) -> G {
        G::new(-self.re, -self.im)
    }
}

impl Neg for &G {
    type Output = G;
    fn neg(self) -> G {
        G::new(-&self.re, -&self.im)
    }
}

impl AddAssign<&G> for G {
    fn add_assign(&mut self, o: &G) {
        self.re += &o.re;
        self.im += &o.im;
    }
}

impl SubAssign<&G> for G {
    fn sub_assign(&mut self, o: &G) {
        self.re -= &o.re;
        self.im -= &o.im;
    }
}

impl MulAssign<&G> for G {
    fn mul_assign(&mut self, o: &G) {
        *self = &*self * o;
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use crate::exact::fmt_q;
        if self.im.is_zero() {
            return write!(f, "{}", fmt_q(&self.re));
        }
        let im = match fmt_q(&self.im.abs()).as_str() {
            "1" => String::new(),
            s => s.to_string(),
        };
        let sign = if self.im.is_negative() { "-" } else { "+" };
        if self.re.is_zero() {
            write!(f, "{}{im}i", if sign == "-" { "-" } else { "" })
        } else {
            write!(f, "{}{sign}{im}i", fmt_q(&self.re))
        }
    }
}

#[derive(Serialize, Deserialize)]
struct Repr {
    re: [String; 2],
    im: [String; 2],
}

fn pair(v: &Q) -> [String; 2] {
    [v.numer().to_string(), v.denom().to_string()]
}

fn unpair(p: &[String; 2]) -> std::result::Result<Q, String> {
    crate::exact::RationalRepr {
        num: p[0].clone(),
        den: p[1].clone(),
    }
    .try_into()
}

impl Serialize for GaussianRational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        Repr {
            re: pair(&self.re),
            im: pair(&self.im),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GaussianRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = Repr::deserialize(d)?;
        let re = unpair(&r.re).map_err(serde::de::Error::custom)?;
        let im = unpair(&r.im).map_err(serde::de::Error::custom)?;
        Ok(GaussianRational { re, im })
    }
}
