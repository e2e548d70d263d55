//! Dense matrices over `Q(i)`.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::gaussian::G;
use super::poly::Poly;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<G>,
}

impl ExactMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<G>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::invalid("matrix dimensions must be positive"));
        }
        if data.len() != rows * cols {
            return Err(Error::invalid(format!("{rows}x{cols} matrix needs {} entries, got {}", rows * cols, data.len())));
        }
        Ok(ExactMatrix { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<G>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::invalid("ragged matrix rows"));
        }
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    /// Integer entries; panics on ragged input.
    pub fn from_ints<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.as_ref().iter().map(|&v| G::from_int(v)).collect()).collect())
            .expect("rectangular integer matrix")
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix {
            rows,
            cols,
            data: vec![G::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, G::one())
    }

    pub fn scalar(n: usize, v: G) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = v.clone();
        }
        m
    }

    pub fn diagonal(entries: &[G]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, v) in entries.iter().enumerate() {
            m.data[i * n + i] = v.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn require_square(&self, what: &str) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::invalid(format!("{what} must be square, got {}x{}", self.rows, self.cols)))
        }
    }

    pub fn get(&self, r: usize, c: usize) -> &G {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: G) {
        self.data[r * self.cols + c] = v;
    }

    pub fn entries(&self) -> &[G] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[G] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Self::identity(self.rows)
    }

    pub fn checked_mul(&self, o: &ExactMatrix) -> Result<ExactMatrix> {
        if self.cols != o.rows {
            return Err(Error::invalid(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        let mut out = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        out.data[i * o.cols + j] += &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    fn zip(&self, o: &ExactMatrix, f: impl Fn(&G, &G) -> G) -> Result<ExactMatrix> {
        if (self.rows, self.cols) != (o.rows, o.cols) {
            return Err(Error::invalid("matrix shapes differ"));
        }
        Ok(ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn checked_add(&self, o: &ExactMatrix) -> Result<ExactMatrix> {
        self.zip(o, |a, b| a + b)
    }

    pub fn checked_sub(&self, o: &ExactMatrix) -> Result<ExactMatrix> {
        self.zip(o, |a, b| a - b)
    }

    pub fn scale(&self, s: &G) -> ExactMatrix {
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    pub fn transpose(&self) -> ExactMatrix {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn adjoint(&self) -> ExactMatrix {
        let mut t = self.transpose();
        t.data.iter_mut().for_each(|v| *v = v.conj());
        t
    }

    pub fn trace(&self) -> G {
        let mut t = G::zero();
        for i in 0..self.rows.min(self.cols) {
            t += self.get(i, i);
        }
        t
    }

    pub fn pow(&self, exp: u32) -> Result<ExactMatrix> {
        let n = self.require_square("matrix power base")?;
        let mut acc = Self::identity(n);
        for _ in 0..exp {
            acc = acc.checked_mul(self)?;
        }
        Ok(acc)
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> ExactMatrix {
        let mut out = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                out.set(i, j, self.get(r0 + i, c0 + j).clone());
            }
        }
        out
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &ExactMatrix) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self.set(r0 + i, c0 + j, b.get(i, j).clone());
            }
        }
    }

    pub fn direct_sum(&self, o: &ExactMatrix) -> ExactMatrix {
        let mut out = Self::zeros(self.rows + o.rows, self.cols + o.cols);
        out.set_block(0, 0, self);
        out.set_block(self.rows, self.cols, o);
        out
    }

    pub fn kron(&self, o: &ExactMatrix) -> ExactMatrix {
        let mut out = Self::zeros(self.rows * o.rows, self.cols * o.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if !a.is_zero() {
                    out.set_block(i * o.rows, j * o.cols, &o.scale(a));
                }
            }
        }
        out
    }

    /// Row echelon form in place; returns pivot columns and the sign/scale
    /// product accumulated for the determinant.
    fn eliminate(&mut self, reduced: bool) -> (Vec<usize>, G) {
        let mut pivots = Vec::new();
        let mut det_factor = G::one();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..self.cols {
                    self.data.swap(p * self.cols + j, r * self.cols + j);
                }
                det_factor = -det_factor;
            }
            let pivot = self.get(r, c).clone();
            det_factor = &det_factor * &pivot;
            let inv = pivot.inv().expect("non-zero pivot");
            for j in c..self.cols {
                let v = self.get(r, j) * &inv;
                self.set(r, j, v);
            }
            let targets: Vec<usize> = if reduced { (0..self.rows).filter(|&i| i != r).collect() } else { (r + 1..self.rows).collect() };
            for i in targets {
                let f = self.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..self.cols {
                    let v = self.get(i, j) - &(&f * self.get(r, j));
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (pivots, det_factor)
    }

    pub fn rank(&self) -> usize {
        self.clone().eliminate(false).0.len()
    }

    pub fn det(&self) -> Result<G> {
        let n = self.require_square("determinant argument")?;
        let (pivots, factor) = self.clone().eliminate(false);
        Ok(if pivots.len() < n { G::zero() } else { factor })
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    pub fn inverse(&self) -> Result<ExactMatrix> {
        let n = self.require_square("inverse argument")?;
        let mut aug = Self::zeros(n, 2 * n);
        aug.set_block(0, 0, self);
        aug.set_block(0, n, &Self::identity(n));
        let (pivots, _) = aug.eliminate(true);
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(Error::invalid("matrix is singular"));
        }
        Ok(aug.block(0, n, n, n))
    }

    /// Basis of `{v : M v = 0}` as column vectors.
    pub fn nullspace(&self) -> Vec<Vec<G>> {
        let mut m = self.clone();
        let (pivots, _) = m.eliminate(true);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![G::zero(); self.cols];
                v[f] = G::one();
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = -m.get(r, f);
                }
                v
            })
            .collect()
    }

    /// Column-stacking vectorisation.
    pub fn vec(&self) -> Vec<G> {
        let mut out = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                out.push(self.get(i, j).clone());
            }
        }
        out
    }

    pub fn unvec(v: &[G], rows: usize, cols: usize) -> ExactMatrix {
        let mut m = Self::zeros(rows, cols);
        for j in 0..cols {
            for i in 0..rows {
                m.set(i, j, v[j * rows + i].clone());
            }
        }
        m
    }

    /// Characteristic polynomial `det(xI - A)` via reduction to Hessenberg form.
    pub fn charpoly(&self) -> Result<Poly> {
        let n = self.require_square("characteristic polynomial argument")?;
        let mut h = self.clone();
        for c in 0..n.saturating_sub(2) {
            let Some(p) = (c + 1..n).find(|&i| !h.get(i, c).is_zero()) else {
                continue;
            };
            if p != c + 1 {
                // similarity by the transposition (p, c+1)
                for j in 0..n {
                    h.data.swap(p * n + j, (c + 1) * n + j);
                }
                for i in 0..n {
                    h.data.swap(i * n + p, i * n + c + 1);
                }
            }
            let pivot_inv = h.get(c + 1, c).inv().expect("non-zero pivot");
            for i in c + 2..n {
                let f = h.get(i, c) * &pivot_inv;
                if f.is_zero() {
                    continue;
                }
                // row_i -= f row_{c+1}; col_{c+1} += f col_i
                for j in 0..n {
                    let v = h.get(i, j) - &(&f * h.get(c + 1, j));
                    h.set(i, j, v);
                }
                for r in 0..n {
                    let v = h.get(r, c + 1) + &(&f * h.get(r, i));
                    h.set(r, c + 1, v);
                }
            }
        }
        let x = Poly::x();
        let mut ps = vec![Poly::one()];
        for m in 0..n {
            let mut next = &(&x - &Poly::constant(h.get(m, m).clone())) * &ps[m];
            let mut sub = G::one();
            for i in (0..m).rev() {
                sub = &sub * h.get(i + 1, i);
                if sub.is_zero() {
                    break;
                }
                let coef = &sub * h.get(i, m);
                next = &next - &ps[i].scale(&coef);
            }
            ps.push(next);
        }
        Ok(ps.pop().expect("non-empty"))
    }

    pub fn to_complex(&self) -> Vec<Complex64> {
        self.data.iter().map(G::to_complex).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("matrix serialises")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::parse("matrix json", e.to_string()))
    }
}

macro_rules! mat_op {
    ($tr:ident $f:ident $checked:ident) => {
        impl<'a> $tr<&'a ExactMatrix> for &'a ExactMatrix {
            type Output = ExactMatrix;
            /// Panics on a shape mismatch.
            fn $f(self, o: &ExactMatrix) -> ExactMatrix {
                self.$checked(o).expect("compatible matrix shapes")
            }
        }
    };
}
mat_op!(Mul mul checked_mul);
mat_op!(Add add checked_add);
mat_op!(Sub sub checked_sub);

#[derive(Serialize, Deserialize)]
struct Repr {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<G>>,
}

impl Serialize for ExactMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        Repr {
            rows: self.rows,
            cols: self.cols,
            entries: (0..self.rows).map(|r| self.row(r).to_vec()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ExactMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = Repr::deserialize(d)?;
        let m = ExactMatrix::from_rows(r.entries).map_err(serde::de::Error::custom)?;
        if (m.rows, m.cols) != (r.rows, r.cols) {
            return Err(serde::de::Error::custom("declared shape does not match entries"));
        }
        Ok(m)
    }
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let cells: Vec<String> = self.row(r).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_inverse() {
        let a = ExactMatrix::from_ints(&[[2, 1], [1, 1]]);
        let inv = a.inverse().unwrap();
        assert_eq!(inv, ExactMatrix::from_ints(&[[1, -1], [-1, 2]]));
        assert!((&a * &inv).is_identity());
        assert_eq!(a.det().unwrap(), G::from_int(1));
        let s = ExactMatrix::from_ints(&[[1, 2], [2, 4]]);
        assert!(s.inverse().is_err());
        assert_eq!(s.rank(), 1);
        assert_eq!(s.det().unwrap(), G::zero());
        assert!(a.checked_mul(&ExactMatrix::zeros(3, 1)).is_err());
    }

    #[test]
    fn determinant_sign() {
        let p = ExactMatrix::from_ints(&[[0, 1, 0], [0, 0, 1], [1, 0, 0]]);
        assert_eq!(p.det().unwrap(), G::from_int(1));
        let q = ExactMatrix::from_ints(&[[0, 1], [1, 0]]);
        assert_eq!(q.det().unwrap(), G::from_int(-1));
    }

    #[test]
    fn nullspace_vectors_are_annihilated() {
        let m = ExactMatrix::from_ints(&[[1, 2, 3], [2, 4, 6]]);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 2);
        for v in ns {
            let col = ExactMatrix::new(3, 1, v).unwrap();
            assert!((&m * &col).is_zero());
        }
    }

    #[test]
    fn charpoly_small_cases() {
        let a = ExactMatrix::from_ints(&[[2, 1], [1, 1]]);
        // x^2 - 3x + 1
        assert_eq!(a.charpoly().unwrap(), Poly::from_ints(&[1, -3, 1]));
        let p = ExactMatrix::from_ints(&[[0, 1, 0], [0, 0, 1], [1, 0, 0]]);
        assert_eq!(p.charpoly().unwrap(), Poly::from_ints(&[-1, 0, 0, 1]));
        let z = ExactMatrix::zeros(2, 2);
        assert_eq!(z.charpoly().unwrap(), Poly::from_ints(&[0, 0, 1]));
    }

    #[test]
    fn charpoly_matches_cofactor_expansion() {
        fn det_poly(m: &[Vec<Poly>]) -> Poly {
            if m.len() == 1 {
                return m[0][0].clone();
            }
            let mut acc = Poly::zero();
            for (j, entry) in m[0].iter().enumerate() {
                let minor: Vec<Vec<Poly>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, p)| p.clone()).collect())
                    .collect();
                let term = entry * &det_poly(&minor);
                acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
            }
            acc
        }
        let a = ExactMatrix::from_ints(&[[0, 3, -1, 2], [1, 0, 0, 5], [0, 2, 2, 0], [4, -1, 0, 1]]);
        let rows: Vec<Vec<Poly>> = (0..4)
            .map(|i| {
                (0..4)
                    .map(|j| {
                        let c = Poly::constant(-a.get(i, j));
                        if i == j {
                            &c + &Poly::x()
                        } else {
                            c
                        }
                    })
                    .collect()
            })
            .collect();
        assert_eq!(a.charpoly().unwrap(), det_poly(&rows));
    }

    #[test]
    fn vec_and_kron() {
        let a = ExactMatrix::from_ints(&[[1, 2], [3, 4]]);
        let x = ExactMatrix::from_ints(&[[0, 1], [1, 1]]);
        // vec(A X) = (I kron A) vec(X)
        let lhs = (&a * &x).vec();
        let k = ExactMatrix::identity(2).kron(&a);
        let rhs = &k * &ExactMatrix::new(4, 1, x.vec()).unwrap();
        assert_eq!(lhs, rhs.entries());
        assert_eq!(ExactMatrix::unvec(&x.vec(), 2, 2), x);
    }

    #[test]
    fn json_roundtrip() {
        let m = ExactMatrix::from_rows(vec![vec![G::parse("1/2+i").unwrap(), G::from_int(0)]]).unwrap();
        let text = m.to_json();
        assert!(text.starts_with(r#"{"rows":1,"cols":2,"entries":[[{"re":["1","2"],"im":["1","1"]}"#), "{text}");
        assert_eq!(ExactMatrix::from_json(&text).unwrap(), m);
        assert!(ExactMatrix::from_json(r#"{"rows":2,"cols":2,"entries":[[]]}"#).is_err());
    }
}
