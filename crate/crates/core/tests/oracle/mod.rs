//! Reference computations written straight from the definitions, sharing no
//! code with the library.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type R = BigRational;
pub type C = Complex<BigRational>;

pub fn r(n: i64, d: i64) -> R {
    R::new(BigInt::from(n), BigInt::from(d))
}

pub fn half_pow(k: usize) -> R {
    R::new(BigInt::one(), BigInt::from(2).pow(k as u32))
}

pub fn recip_pow(n: u64, k: usize) -> R {
    R::new(BigInt::one(), BigInt::from(n).pow(k as u32))
}

/// `prefix` ends in `1 0^i` for some forbidden index `i`.
pub fn completion_pending(prefix: &[u8], forbidden: &[u32]) -> bool {
    forbidden.iter().any(|&i| {
        let i = i as usize;
        prefix.len() > i && prefix[prefix.len() - i - 1] == 1 && prefix[prefix.len() - i..].iter().all(|&d| d == 0)
    })
}

/// `(p, p~)` by direct product over positions.
pub fn weights(word: &[u8], n: u8, forbidden: &[u32]) -> (R, R) {
    let (mut p, mut t) = (R::one(), R::one());
    for k in 1..=word.len() {
        let prefix = &word[..k - 1];
        if completion_pending(prefix, forbidden) {
            if word[k - 1] == 2 {
                p *= half_pow(k);
                t = R::zero();
            } else {
                p *= (R::one() - half_pow(k)) / R::from_integer((n as i64 - 1).into());
                t /= R::from_integer((n as i64 - 1).into());
            }
        } else {
            p /= R::from_integer((n as i64).into());
            t /= R::from_integer((n as i64).into());
        }
    }
    (p, t)
}

pub fn p(word: &[u8], n: u8, forbidden: &[u32]) -> R {
    weights(word, n, forbidden).0
}

/// All words of length `k`, lexicographic.
pub fn words(k: usize, n: u8) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..n).map(move |d| {
                    let mut v = w.clone();
                    v.push(d);
                    v
                })
            })
            .collect();
    }
    out
}

pub fn b_word(i: u32) -> Vec<u8> {
    let mut w = vec![1];
    w.extend(std::iter::repeat(0).take(i as usize));
    w.push(2);
    w
}

/// Cell masses of the level-`k` approximant with a depth-`m` uniform-on-`p~`
/// inner measure, refined to level `level >= k + m`.
pub fn nu_cells(n: u8, forbidden: &[u32], k: usize, m: usize, level: usize) -> Vec<R> {
    assert!(level >= k + m);
    let tail = level - k - m;
    let split = recip_pow(n as u64, tail);
    words(level, n)
        .iter()
        .map(|w| p(&w[..k], n, forbidden) * weights(&w[k..k + m], n, forbidden).1 * &split)
        .collect()
}

/// `int |F_a - F_b|` for densities constant on `len` equal cells of `[0,1]`.
pub fn w1_cells(a: &[R], b: &[R]) -> R {
    assert_eq!(a.len(), b.len());
    let h = R::new(BigInt::one(), BigInt::from(a.len()));
    let two = R::from_integer(2.into());
    let (mut fa, mut fb) = (R::zero(), R::zero());
    let mut total = R::zero();
    for (ma, mb) in a.iter().zip(b) {
        let d0 = &fa - &fb;
        fa += ma;
        fb += mb;
        let d1 = &fa - &fb;
        total += if d0.is_negative() == d1.is_negative() || d0.is_zero() || d1.is_zero() {
            &h * (d0.abs() + d1.abs()) / &two
        } else {
            let (x, y) = (d0.abs(), d1.abs());
            &h * (&x * &x + &y * &y) / (&two * (x + y))
        };
    }
    total
}

pub fn c(re: &R, im: &R) -> C {
    Complex::new(re.clone(), im.clone())
}

pub fn cz() -> C {
    Complex::new(R::zero(), R::zero())
}

pub fn cint(v: i64) -> C {
    Complex::new(R::from_integer(v.into()), R::zero())
}

pub type Mat = Vec<Vec<C>>;

pub fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let (n, m, k) = (a.len(), b[0].len(), b.len());
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| (0..k).fold(cz(), |acc, t| acc + &a[i][t] * &b[t][j]))
                .collect()
        })
        .collect()
}

pub fn identity(n: usize) -> Mat {
    (0..n).map(|i| (0..n).map(|j| cint((i == j) as i64)).collect()).collect()
}

/// `J_n(A)`: identity blocks on the superdiagonal, `A` bottom-left.
pub fn jn(a: &Mat, n: usize) -> Mat {
    let d = a.len();
    let mut out = vec![vec![cz(); d * n]; d * n];
    for blk in 0..n - 1 {
        for i in 0..d {
            out[blk * d + i][(blk + 1) * d + i] = cint(1);
        }
    }
    for i in 0..d {
        for j in 0..d {
            out[(n - 1) * d + i][j] = a[i][j].clone();
        }
    }
    out
}

fn is_zero(z: &C) -> bool {
    z.re.is_zero() && z.im.is_zero()
}

/// Row reduction; returns `(rank, det)` (det only meaningful when square).
pub fn eliminate(mut m: Mat) -> (usize, C) {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut det = cint(1);
    let mut rank = 0;
    for col in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| !is_zero(&m[r][col])) else {
            det = cz();
            continue;
        };
        if piv != rank {
            m.swap(piv, rank);
            det = -det;
        }
        let pv = m[rank][col].clone();
        det = det * &pv;
        for r in rank + 1..rows {
            if !is_zero(&m[r][col]) {
                let f = &m[r][col] / &pv;
                for c2 in col..cols {
                    let t = &f * &m[rank][c2];
                    m[r][c2] = &m[r][c2] - t;
                }
            }
        }
        rank += 1;
    }
    if rank < rows {
        det = cz();
    }
    (rank, det)
}

pub fn det(m: &Mat) -> C {
    eliminate(m.clone()).1
}

pub fn rank(m: &Mat) -> usize {
    eliminate(m.clone()).0
}

/// `det(x I - M)` at a scalar.
pub fn char_at(m: &Mat, x: &C) -> C {
    let n = m.len();
    let shifted = (0..n)
        .map(|i| (0..n).map(|j| if i == j { x - &m[i][j] } else { -m[i][j].clone() }).collect())
        .collect();
    det(&shifted)
}

pub fn sub_scalar(m: &Mat, s: &C) -> Mat {
    let n = m.len();
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { &m[i][j] - s } else { m[i][j].clone() }).collect())
        .collect()
}

pub fn direct_sum(a: &Mat, b: &Mat) -> Mat {
    let (p, q) = (a.len(), b.len());
    let mut out = vec![vec![cz(); p + q]; p + q];
    for i in 0..p {
        for j in 0..p {
            out[i][j] = a[i][j].clone();
        }
    }
    for i in 0..q {
        for j in 0..q {
            out[p + i][p + j] = b[i][j].clone();
        }
    }
    out
}

/// Similarity over an algebraically closed field for matrices with the given
/// eigenvalue candidates: the ranks of `(M - t)^k` determine the Jordan form.
pub fn similar_by_ranks(a: &Mat, b: &Mat, eigenvalues: &[C]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let d = a.len();
    for t in eigenvalues {
        let (sa, sb) = (sub_scalar(a, t), sub_scalar(b, t));
        let (mut pa, mut pb) = (sa.clone(), sb.clone());
        for _ in 0..d {
            if rank(&pa) != rank(&pb) {
                return false;
            }
            pa = mat_mul(&pa, &sa);
            pb = mat_mul(&pb, &sb);
        }
    }
    let total = |m: &Mat| -> usize {
        eigenvalues
            .iter()
            .map(|t| {
                let s = sub_scalar(m, t);
                let mut pw = s.clone();
                for _ in 1..d {
                    pw = mat_mul(&pw, &s);
                }
                d - rank(&pw)
            })
            .sum()
    };
    total(a) == d && total(b) == d
}

/// Length-`k` windows of an eventually-1 weight sequence indexed by `Z`.
pub fn windows(exceptional: &BTreeMap<i64, R>, k: usize) -> BTreeSet<Vec<R>> {
    let weight = |i: i64| exceptional.get(&i).cloned().unwrap_or_else(R::one);
    let mut out = BTreeSet::new();
    out.insert(vec![R::one(); k]);
    if let (Some(&lo), Some(&hi)) = (exceptional.keys().next(), exceptional.keys().last()) {
        for start in lo - k as i64..=hi + 1 {
            out.insert((start..start + k as i64).map(weight).collect());
        }
    }
    out
}

/// Exceptional weights of `J_n` of a bilateral shift: `w_i` moves to `n i + n - 1`.
pub fn interleave(exceptional: &BTreeMap<i64, R>, n: i64) -> BTreeMap<i64, R> {
    exceptional.iter().map(|(&i, w)| (n * i + n - 1, w.clone())).collect()
}
