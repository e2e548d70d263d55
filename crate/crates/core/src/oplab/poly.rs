//! Univariate polynomials over `Q(i)`, coefficients stored low degree first.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::gaussian::G;
use super::matrix::ExactMatrix;
use crate::error::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Poly {
    coeffs: Vec<G>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<G>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| G::from_int(c)).collect())
    }

    pub fn constant(c: G) -> Self {
        Self::new(vec![c])
    }

    pub fn x() -> Self {
        Self::new(vec![G::zero(), G::one()])
    }

    /// `x - root`.
    pub fn linear(root: G) -> Self {
        Self::new(vec![-root, G::one()])
    }

    pub fn coeffs(&self) -> &[G] {
        &self.coeffs
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&G> {
        self.coeffs.last()
    }

    pub fn coeff(&self, k: usize) -> G {
        self.coeffs.get(k).cloned().unwrap_or_else(G::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn is_monic(&self) -> bool {
        self.lead().is_some_and(One::is_one)
    }

    pub fn scale(&self, s: &G) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn monic(&self) -> Poly {
        match self.lead() {
            Some(l) => self.scale(&l.inv().expect("non-zero leading coefficient")),
            None => Poly::zero(),
        }
    }

    pub fn eval(&self, x: &G) -> G {
        let mut acc = G::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    /// `p(x^n)`.
    pub fn compose_power(&self, n: usize) -> Poly {
        let mut out = vec![G::zero(); self.coeffs.len().saturating_sub(1) * n + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            out[k * n] = c.clone();
        }
        Poly::new(out)
    }

    /// Quotient and remainder.
    pub fn div_rem(&self, d: &Poly) -> Result<(Poly, Poly)> {
        let dd = d.degree().ok_or_else(|| Error::invalid("polynomial division by zero"))?;
        let lead_inv = d.lead().expect("non-zero").inv()?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut quot = vec![G::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[k + j] -= &(&c * dc);
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Ok((Poly::new(quot), Poly::new(rem)))
    }

    pub fn divides(&self, other: &Poly) -> bool {
        other.is_zero() || other.div_rem(self).is_ok_and(|(_, r)| r.is_zero())
    }

    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).expect("non-zero divisor").1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Resultant as the determinant of the Sylvester matrix.
    pub fn resultant(&self, other: &Poly) -> G {
        let (Some(m), Some(n)) = (self.degree(), other.degree()) else {
            return G::zero();
        };
        if m == 0 && n == 0 {
            return G::one();
        }
        if m == 0 {
            return self.coeff(0).pow(n as u32);
        }
        if n == 0 {
            return other.coeff(0).pow(m as u32);
        }
        let size = m + n;
        let mut s = ExactMatrix::zeros(size, size);
        for r in 0..n {
            for (k, c) in self.coeffs.iter().rev().enumerate() {
                s.set(r, r + k, c.clone());
            }
        }
        for r in 0..m {
            for (k, c) in other.coeffs.iter().rev().enumerate() {
                s.set(n + r, r + k, c.clone());
            }
        }
        s.det().expect("square")
    }
}

impl Zero for Poly {
    fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl One for Poly {
    fn one() -> Self {
        Poly::constant(G::one())
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|k| &self.coeff(k) + &o.coeff(k)).collect())
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|k| &self.coeff(k) - &o.coeff(k)).collect())
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![G::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        Poly::new(out)
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, o: Poly) -> Poly {
        &self + &o
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, o: Poly) -> Poly {
        &self * &o
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mono = match k {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{k}"),
            };
            let (neg, body) = if c.is_real() {
                let s = c.to_string();
                match s.strip_prefix('-') {
                    Some(rest) => (true, rest.to_string()),
                    None => (false, s),
                }
            } else {
                (false, format!("({c})"))
            };
            let body = if body == "1" && k > 0 { String::new() } else { body };
            match (first, neg) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            write!(f, "{body}{mono}")?;
            first = false;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn division_with_remainder() {
        let p = Poly::from_ints(&[2, -3, 1]);
        let (q, r) = p.div_rem(&Poly::from_ints(&[-1, 1])).unwrap();
        assert_eq!(q, Poly::from_ints(&[-2, 1]));
        assert!(r.is_zero());
        let (q, r) = Poly::from_ints(&[1, 0, 1]).div_rem(&Poly::from_ints(&[0, 2])).unwrap();
        assert_eq!(&(&q * &Poly::from_ints(&[0, 2])) + &r, Poly::from_ints(&[1, 0, 1]));
        assert!(p.div_rem(&Poly::zero()).is_err());
    }

    #[test]
    fn gcd_and_divides() {
        let a = Poly::from_ints(&[2, -3, 1]);
        let b = Poly::from_ints(&[-1, 0, 1]);
        assert_eq!(a.gcd(&b), Poly::from_ints(&[-1, 1]));
        assert!(Poly::from_ints(&[-1, 1]).divides(&a));
        assert!(!Poly::from_ints(&[0, 1]).divides(&a));
        assert!(a.divides(&Poly::zero()));
    }

    #[test]
    fn resultant_detects_common_roots() {
        let a = Poly::from_ints(&[2, -3, 1]);
        assert!(a.resultant(&Poly::from_ints(&[-2, 1])).is_zero());
        // res(x - 1, x - 2) = -1
        assert_eq!(Poly::from_ints(&[-1, 1]).resultant(&Poly::from_ints(&[-2, 1])), G::from_int(-1));
        // res(x^2 + 1, x - 2) = 5
        assert_eq!(Poly::from_ints(&[1, 0, 1]).resultant(&Poly::from_ints(&[-2, 1])), G::from_int(5));
    }

    #[test]
    fn compose_and_display() {
        let p = Poly::from_ints(&[-2, 1]).compose_power(3);
        assert_eq!(p, Poly::from_ints(&[-2, 0, 0, 1]));
        assert_eq!(p.to_string(), "x^3 - 2");
        assert_eq!(Poly::from_ints(&[2, -3, 1]).to_string(), "x^2 - 3x + 2");
        assert_eq!(Poly::linear(G::i()).to_string(), "x + (-i)");
        assert_eq!(p.eval(&G::from_int(2)), G::from_int(6));
    }
}
