//! The ring `T = S * Q<x, y>` with `S = Q[a, b, c]`, the homomorphism `Phi`
//! into 2x2 rational matrices, and the identities behind
//! `M (x + x) = (y + y) M` for `M = [[a, b], [c, a]]` with `det M = 1`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::Serialize;

use crate::certificate::{Certificate, Relation};
use crate::exact::{fmt_q, int, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Letter {
    A,
    B,
    C,
    X,
    Y,
}

impl Letter {
    pub const ALL: [Letter; 5] = [Letter::A, Letter::B, Letter::C, Letter::X, Letter::Y];

    /// `a`, `b`, `c` generate the commutative factor `S`.
    pub fn is_scalar(self) -> bool {
        matches!(self, Letter::A | Letter::B | Letter::C)
    }

    pub fn symbol(self) -> char {
        match self {
            Letter::A => 'a',
            Letter::B => 'b',
            Letter::C => 'c',
            Letter::X => 'x',
            Letter::Y => 'y',
        }
    }
}

/// Sorts each maximal run of `S`-letters; letters of `S` commute with each
/// other but not with `x`, `y`.
pub fn canonical_word(word: &[Letter]) -> Vec<Letter> {
    let mut out = word.to_vec();
    let mut i = 0;
    while i < out.len() {
        if out[i].is_scalar() {
            let start = i;
            while i < out.len() && out[i].is_scalar() {
                i += 1;
            }
            out[start..i].sort();
        } else {
            i += 1;
        }
    }
    out
}

/// Finite rational combination of canonical words.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct FreeExpr {
    terms: BTreeMap<Vec<Letter>, Q>,
}

impl FreeExpr {
    pub fn zero() -> Self {
        FreeExpr::default()
    }

    pub fn one() -> Self {
        Self::term(Vec::new(), Q::one())
    }

    pub fn letter(l: Letter) -> Self {
        Self::term(vec![l], Q::one())
    }

    pub fn term(word: Vec<Letter>, coeff: Q) -> Self {
        let mut e = FreeExpr::zero();
        e.push(canonical_word(&word), coeff);
        e
    }

    fn push(&mut self, word: Vec<Letter>, coeff: Q) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry(word).or_insert_with(Q::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    /// Re-canonicalises every word and merges like terms.
    pub fn normalize(&self) -> FreeExpr {
        let mut out = FreeExpr::zero();
        for (w, c) in &self.terms {
            out.push(canonical_word(w), c.clone());
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<Vec<Letter>, Q> {
        &self.terms
    }

    pub fn scale(&self, s: &Q) -> FreeExpr {
        let mut out = FreeExpr::zero();
        for (w, c) in &self.terms {
            out.push(w.clone(), c * s);
        }
        out
    }
}

impl<'a> Add<&'a FreeExpr> for &'a FreeExpr {
    type Output = FreeExpr;
    fn add(self, o: &FreeExpr) -> FreeExpr {
        let mut out = self.clone();
        for (w, c) in &o.terms {
            out.push(w.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a FreeExpr> for &'a FreeExpr {
    type Output = FreeExpr;
    fn sub(self, o: &FreeExpr) -> FreeExpr {
        self + &(-o)
    }
}

impl Neg for &FreeExpr {
    type Output = FreeExpr;
    fn neg(self) -> FreeExpr {
        self.scale(&-Q::one())
    }
}

impl<'a> Mul<&'a FreeExpr> for &'a FreeExpr {
    type Output = FreeExpr;
    fn mul(self, o: &FreeExpr) -> FreeExpr {
        let mut out = FreeExpr::zero();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &o.terms {
                let mut w = w1.clone();
                w.extend_from_slice(w2);
                out.push(canonical_word(&w), c1 * c2);
            }
        }
        out
    }
}

impl fmt::Display for FreeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (w, c)) in self.terms.iter().enumerate() {
            let word: String = w.iter().map(|l| l.symbol()).collect();
            let neg = c < &Q::zero();
            let mag = if neg { -c.clone() } else { c.clone() };
            let sep = match (k, neg) {
                (0, true) => "-",
                (0, false) => "",
                (_, true) => " - ",
                (_, false) => " + ",
            };
            let body = match (mag.is_one(), word.is_empty()) {
                (true, false) => word,
                (_, true) => fmt_q(&mag),
                (false, false) => format!("{}{word}", fmt_q(&mag)),
            };
            write!(f, "{sep}{body}")?;
        }
        Ok(())
    }
}

/// `s x - y s` for a letter `s` of `S`.
pub fn ideal_generator(s: Letter) -> FreeExpr {
    let x = FreeExpr::letter(Letter::X);
    let y = FreeExpr::letter(Letter::Y);
    let s = FreeExpr::letter(s);
    &(&s * &x) - &(&y * &s)
}

/// Polynomial in the commuting `a`, `b`, `c`, keyed by exponent triples.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CommPoly {
    terms: BTreeMap<[u32; 3], Q>,
}

impl CommPoly {
    pub fn constant(c: Q) -> Self {
        let mut p = CommPoly::default();
        p.push([0, 0, 0], c);
        p
    }

    pub fn var(l: Letter) -> Self {
        let e = match l {
            Letter::A => [1, 0, 0],
            Letter::B => [0, 1, 0],
            Letter::C => [0, 0, 1],
            _ => panic!("x and y are not variables of S"),
        };
        let mut p = CommPoly::default();
        p.push(e, Q::one());
        p
    }

    fn push(&mut self, e: [u32; 3], c: Q) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(Q::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        *self == CommPoly::constant(Q::one())
    }

    /// Normal form modulo `a^2 - bc - 1` via the rewrite `a^2 -> bc + 1`.
    pub fn reduce(&self) -> CommPoly {
        let mut work: Vec<([u32; 3], Q)> = self.terms.iter().map(|(e, c)| (*e, c.clone())).collect();
        let mut out = CommPoly::default();
        while let Some((e, c)) = work.pop() {
            if e[0] >= 2 {
                work.push(([e[0] - 2, e[1] + 1, e[2] + 1], c.clone()));
                work.push(([e[0] - 2, e[1], e[2]], c));
            } else {
                out.push(e, c);
            }
        }
        out
    }
}

impl<'a> Add<&'a CommPoly> for &'a CommPoly {
    type Output = CommPoly;
    fn add(self, o: &CommPoly) -> CommPoly {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.push(*e, c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a CommPoly> for &'a CommPoly {
    type Output = CommPoly;
    fn sub(self, o: &CommPoly) -> CommPoly {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.push(*e, -c.clone());
        }
        out
    }
}

impl<'a> Mul<&'a CommPoly> for &'a CommPoly {
    type Output = CommPoly;
    fn mul(self, o: &CommPoly) -> CommPoly {
        let mut out = CommPoly::default();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                out.push([e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2]], c1 * c2);
            }
        }
        out
    }
}

impl Neg for &CommPoly {
    type Output = CommPoly;
    fn neg(self) -> CommPoly {
        &CommPoly::default() - self
    }
}

impl fmt::Display for CommPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(e, c)| {
                let mono: String = ['a', 'b', 'c']
                    .iter()
                    .zip(e)
                    .filter(|(_, &k)| k > 0)
                    .map(|(v, &k)| if k == 1 { v.to_string() } else { format!("{v}^{k}") })
                    .collect();
                match (mono.is_empty(), c.is_one()) {
                    (true, _) => fmt_q(c),
                    (false, true) => mono,
                    (false, false) if *c == -Q::one() => format!("-{mono}"),
                    (false, false) => format!("{}{mono}", fmt_q(c)),
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + ").replace("+ -", "- "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix2 {
    pub e: [[Q; 2]; 2],
}

impl RationalMatrix2 {
    pub fn from_ints(m: [[i64; 2]; 2]) -> Self {
        RationalMatrix2 {
            e: m.map(|row| row.map(int)),
        }
    }

    pub fn identity() -> Self {
        Self::from_ints([[1, 0], [0, 1]])
    }

    pub fn zero() -> Self {
        Self::from_ints([[0, 0], [0, 0]])
    }

    pub fn mul(&self, o: &Self) -> Self {
        let e = std::array::from_fn(|i| std::array::from_fn(|j| &self.e[i][0] * &o.e[0][j] + &self.e[i][1] * &o.e[1][j]));
        RationalMatrix2 { e }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let e = std::array::from_fn(|i| std::array::from_fn(|j| &self.e[i][j] - &o.e[i][j]));
        RationalMatrix2 { e }
    }
}

impl fmt::Display for RationalMatrix2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = |i: usize| format!("[{}, {}]", fmt_q(&self.e[i][0]), fmt_q(&self.e[i][1]));
        write!(f, "[{}, {}]", r(0), r(1))
    }
}

pub fn phi(l: Letter) -> RationalMatrix2 {
    match l {
        Letter::A => RationalMatrix2::from_ints([[0, 1], [1, 0]]),
        Letter::B | Letter::C => RationalMatrix2::zero(),
        Letter::X => RationalMatrix2::from_ints([[1, 0], [0, -1]]),
        Letter::Y => RationalMatrix2::from_ints([[-1, 0], [0, 1]]),
    }
}

pub fn phi_word(word: &[Letter]) -> RationalMatrix2 {
    word.iter().fold(RationalMatrix2::identity(), |acc, &l| acc.mul(&phi(l)))
}

fn assert_matrix_eq(cert: &mut Certificate, label: &str, lhs: &RationalMatrix2, rhs: &RationalMatrix2) {
    for i in 0..2 {
        for j in 0..2 {
            cert.assert(format!("{label} [{},{}]", i + 1, j + 1), lhs.e[i][j].clone(), Relation::Eq, rhs.e[i][j].clone());
        }
    }
}

pub fn verify_phi_homomorphism() -> Certificate {
    use Letter::*;
    let mut cert = Certificate::new("bell_phi_homomorphism");
    for s in [A, B, C] {
        let lhs = phi(s).mul(&phi(X)).sub(&phi(Y).mul(&phi(s)));
        assert_matrix_eq(&mut cert, &format!("Phi({0})Phi(x) - Phi(y)Phi({0}) == 0", s.symbol()), &lhs, &RationalMatrix2::zero());
    }
    let det = phi(A).mul(&phi(A)).sub(&phi(B).mul(&phi(C)));
    assert_matrix_eq(&mut cert, "Phi(a)^2 - Phi(b)Phi(c) == Phi(1)", &det, &RationalMatrix2::identity());
    let (px, py) = (phi(X), phi(Y));
    let differing = (0..2).flat_map(|i| (0..2).map(move |j| (i, j))).find(|&(i, j)| px.e[i][j] != py.e[i][j]);
    match differing {
        Some((i, j)) => cert.assert(format!("Phi(x) != Phi(y) at [{},{}]", i + 1, j + 1), px.e[i][j].clone(), Relation::Ne, py.e[i][j].clone()),
        None => cert.assert_true("Phi(x) != Phi(y)", false),
    };
    cert
}

/// Entries of `M (x + x) - (y + y) M` for `M = [[a, b], [c, a]]`.
pub fn conjugation_entries() -> [[FreeExpr; 2]; 2] {
    use Letter::*;
    let x = FreeExpr::letter(X);
    let y = FreeExpr::letter(Y);
    [[A, B], [C, A]].map(|row| {
        row.map(|s| {
            let s = FreeExpr::letter(s);
            &(&s * &x) - &(&y * &s)
        })
    })
}

pub fn verify_conjugation_identity() -> Certificate {
    let mut cert = Certificate::new("bell_conjugation_identity");
    let gens: Vec<(Letter, FreeExpr)> = [Letter::A, Letter::B, Letter::C].iter().map(|&l| (l, ideal_generator(l))).collect();
    let entries = conjugation_entries();
    for (i, row) in entries.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            let hit = gens.iter().find(|(_, g)| e == g || *e == -g);
            let label = match hit {
                Some((l, g)) => format!("entry [{},{}] = {e} is +-({g}), generator {}", i + 1, j + 1, l.symbol()),
                None => format!("entry [{},{}] = {e} is an ideal generator", i + 1, j + 1),
            };
            cert.assert_true(label, hit.is_some());
        }
    }
    cert
}

pub fn verify_determinant_unit() -> Certificate {
    use Letter::*;
    let mut cert = Certificate::new("bell_determinant_unit");
    let (a, b, c) = (CommPoly::var(A), CommPoly::var(B), CommPoly::var(C));
    let det = &(&a * &a) - &(&b * &c);
    let reduced = det.reduce();
    cert.note(format!("det M = {det} reduces to {reduced}"));
    cert.assert_true("a^2 - bc reduces to 1", reduced.is_one());
    let relation = &det - &CommPoly::constant(Q::one());
    cert.assert_true("a^2 - bc - 1 reduces to 0", relation.reduce().is_zero());
    let m = [[a.clone(), b.clone()], [c.clone(), a.clone()]];
    let inv = [[a.clone(), -&b], [-&c, a.clone()]];
    for i in 0..2 {
        for j in 0..2 {
            let entry = &(&m[i][0] * &inv[0][j]) + &(&m[i][1] * &inv[1][j]);
            let expect = if i == j { CommPoly::constant(Q::one()) } else { CommPoly::default() };
            cert.assert_true(format!("(M [[a,-b],[-c,a]]) [{},{}] = {entry} reduces to {expect}", i + 1, j + 1), entry.reduce() == expect);
        }
    }
    cert
}

pub fn verify_all() -> Vec<Certificate> {
    vec![verify_phi_homomorphism(), verify_conjugation_identity(), verify_determinant_unit()]
}
