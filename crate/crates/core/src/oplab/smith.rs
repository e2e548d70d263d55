//! Smith normal form of `xI - A` over `Q(i)[x]`.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::matrix::ExactMatrix;
use super::poly::Poly;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    n: usize,
    entries: Vec<Poly>,
}

impl PolyMatrix {
    /// `xI - A`.
    pub fn characteristic(a: &ExactMatrix) -> Result<Self> {
        let n = a.require_square("matrix")?;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let c = Poly::constant(-a.get(i, j));
                entries.push(if i == j { &c + &Poly::x() } else { c });
            }
        }
        Ok(PolyMatrix { n, entries })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.entries[i * self.n + j]
    }

    fn at(&mut self, i: usize, j: usize) -> &mut Poly {
        &mut self.entries[i * self.n + j]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.n {
                self.entries.swap(a * self.n + j, b * self.n + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.n {
                self.entries.swap(i * self.n + a, i * self.n + b);
            }
        }
    }

    /// `row_dst -= q * row_src`, restricted to columns `from..`.
    fn row_axpy(&mut self, dst: usize, src: usize, q: &Poly, from: usize) {
        for j in from..self.n {
            let t = q * self.get(src, j);
            if !t.is_zero() {
                let v = self.get(dst, j) - &t;
                *self.at(dst, j) = v;
            }
        }
    }

    fn col_axpy(&mut self, dst: usize, src: usize, q: &Poly, from: usize) {
        for i in from..self.n {
            let t = q * self.get(i, src);
            if !t.is_zero() {
                let v = self.get(i, dst) - &t;
                *self.at(i, dst) = v;
            }
        }
    }

    /// Diagonal of the Smith normal form, each entry monic (or zero).
    pub fn smith_diagonal(mut self) -> Vec<Poly> {
        let n = self.n;
        for t in 0..n {
            loop {
                let mut best: Option<(usize, usize, usize)> = None;
                for i in t..n {
                    for j in t..n {
                        if let Some(d) = self.get(i, j).degree() {
                            if best.is_none_or(|(bd, _, _)| d < bd) {
                                best = Some((d, i, j));
                            }
                        }
                    }
                }
                let Some((_, pi, pj)) = best else {
                    // remaining block is zero
                    return (0..n).map(|k| self.get(k, k).monic()).collect();
                };
                self.swap_rows(t, pi);
                self.swap_cols(t, pj);

                let pivot = self.get(t, t).clone();
                let mut dirty = false;
                for i in t + 1..n {
                    if self.get(i, t).is_zero() {
                        continue;
                    }
                    let (q, r) = self.get(i, t).div_rem(&pivot).expect("non-zero pivot");
                    self.row_axpy(i, t, &q, t);
                    dirty |= !r.is_zero();
                }
                for j in t + 1..n {
                    if self.get(t, j).is_zero() {
                        continue;
                    }
                    let (q, r) = self.get(t, j).div_rem(&pivot).expect("non-zero pivot");
                    self.col_axpy(j, t, &q, t);
                    dirty |= !r.is_zero();
                }
                if dirty {
                    continue;
                }
                let offender = (t + 1..n).find(|&i| (t + 1..n).any(|j| !pivot.divides(self.get(i, j))));
                match offender {
                    Some(i) => self.row_axpy(t, i, &-&Poly::one(), t),
                    None => break,
                }
            }
        }
        (0..n).map(|k| self.get(k, k).monic()).collect()
    }
}

/// Monic divisibility chain `f1 | f2 | ... | fk`; constant factors are dropped.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct InvariantFactors {
    factors: Vec<Poly>,
}

impl InvariantFactors {
    pub fn new(factors: Vec<Poly>) -> Result<Self> {
        let f = InvariantFactors { factors };
        if !f.factors.iter().all(|p| p.is_monic() && !p.is_constant()) {
            return Err(Error::invalid("invariant factors must be monic and non-constant"));
        }
        if !f.is_chain() {
            return Err(Error::invalid("invariant factors must form a divisibility chain"));
        }
        Ok(f)
    }

    pub fn of(a: &ExactMatrix) -> Result<Self> {
        let diag = PolyMatrix::characteristic(a)?.smith_diagonal();
        let mut factors: Vec<Poly> = diag.into_iter().filter(|p| !p.is_constant()).collect();
        factors.sort_by_key(|p| p.degree());
        Self::new(factors)
    }

    pub fn factors(&self) -> &[Poly] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn is_chain(&self) -> bool {
        self.factors.windows(2).all(|w| w[0].divides(&w[1]))
    }

    pub fn product(&self) -> Poly {
        self.factors.iter().fold(Poly::one(), |acc, p| &acc * p)
    }

    /// Factors of the `k`-fold direct sum.
    pub fn repeated(&self, k: usize) -> InvariantFactors {
        InvariantFactors {
            factors: self.factors.iter().flat_map(|p| std::iter::repeat_n(p.clone(), k)).collect(),
        }
    }
}

impl fmt::Display for InvariantFactors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.factors.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}
