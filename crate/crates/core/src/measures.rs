//! Cylinder-measure engine.
//!
//! Approximants are exact piecewise-linear CDFs on `[0, 1]`. The depth-`K`
//! approximant of `nu~` spreads `p~(i)` uniformly over each cylinder of length
//! `K`; the approximant of `nu` spreads `p(i)` according to a rescaled copy of
//! the depth-`M` `nu~` approximant. `mu0` and `mu` are the pushforwards under
//! `x -> x/N` and under `x -> (x + i)/N` summed over the digits `i`.

use std::io::Write;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::certificate::{Certificate, Relation};
use crate::error::{Error, Result};
use crate::exact::{fmt_q, int, inv_pow, pow, rat, Q};
use crate::weights::{digit_factors, WeightTable};
use crate::words::{checked_count, cylinder_interval, is_pending, ForbiddenSet, Word, Words};

/// Piecewise-linear cumulative distribution on `[0, 1]`.
///
/// Breakpoints are `(x, F(x))` with `x` non-decreasing. Approximants built here
/// have strictly increasing `x`; a repeated `x` encodes a jump (left limit,
/// then value), which is only used for degenerate point masses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiecewiseCdf {
    points: Vec<(Q, Q)>,
}

impl PiecewiseCdf {
    pub fn new(points: Vec<(Q, Q)>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::invalid("a CDF needs at least two breakpoints"));
        }
        if !points[0].0.is_zero() || !points[points.len() - 1].0.is_one() {
            return Err(Error::invalid("CDF breakpoints must span [0, 1]"));
        }
        if points[0].1.is_negative() {
            return Err(Error::invalid("CDF must start non-negative"));
        }
        for (i, pair) in points.windows(2).enumerate() {
            let ((x0, f0), (x1, f1)) = (&pair[0], &pair[1]);
            if x1 < x0 || f1 < f0 {
                return Err(Error::invalid(format!("CDF not monotone at breakpoint {}", i + 1)));
            }
            if x1 == x0 && i + 2 < points.len() && points[i + 2].0 == *x0 {
                return Err(Error::invalid("at most two breakpoints may share an abscissa"));
            }
        }
        Ok(PiecewiseCdf { points })
    }

    pub fn identity() -> Self {
        PiecewiseCdf {
            points: vec![(Q::zero(), Q::zero()), (Q::one(), Q::one())],
        }
    }

    /// Point mass `mass` at `at` in `[0, 1]`.
    pub fn point_mass(at: Q, mass: Q) -> Result<Self> {
        let mut points = Vec::new();
        if !at.is_zero() {
            points.push((Q::zero(), Q::zero()));
        }
        points.push((at.clone(), Q::zero()));
        points.push((at.clone(), mass.clone()));
        if !at.is_one() {
            points.push((Q::one(), mass));
        }
        Self::new(points)
    }

    pub fn points(&self) -> &[(Q, Q)] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn total_mass(&self) -> &Q {
        &self.points[self.points.len() - 1].1
    }

    pub fn is_strictly_increasing(&self) -> bool {
        self.points.windows(2).all(|p| p[0].0 < p[1].0)
    }

    /// Right-continuous evaluation.
    pub fn eval(&self, x: &Q) -> Q {
        if x < &self.points[0].0 {
            return Q::zero();
        }
        // index of the last breakpoint with abscissa <= x
        let idx = self.points.partition_point(|(px, _)| px <= x) - 1;
        let (x0, f0) = &self.points[idx];
        if x0 == x || idx + 1 == self.points.len() {
            return f0.clone();
        }
        let (x1, f1) = &self.points[idx + 1];
        f0 + (f1 - f0) * (x - x0) / (x1 - x0)
    }

    /// Mass of `[a, b]` for a non-atomic CDF.
    pub fn mass(&self, a: &Q, b: &Q) -> Q {
        self.eval(b) - self.eval(a)
    }

    pub fn cylinder_mass(&self, word: &Word) -> Q {
        let c = cylinder_interval(word);
        self.mass(&c.left, &c.right())
    }

    pub fn scaled(&self, factor: &Q) -> PiecewiseCdf {
        PiecewiseCdf {
            points: self.points.iter().map(|(x, f)| (x.clone(), f * factor)).collect(),
        }
    }

    fn segments(&self) -> impl Iterator<Item = (&Q, &Q, &Q, &Q)> {
        self.points
            .windows(2)
            .filter(|p| p[0].0 < p[1].0)
            .map(|p| (&p[0].0, &p[1].0, &p[0].1, &p[1].1))
    }

    /// CSV with columns `x_num,x_den,F_num,F_den`, one row per breakpoint.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "x_num,x_den,F_num,F_den")?;
        for (x, f) in &self.points {
            writeln!(out, "{},{},{},{}", x.numer(), x.denom(), f.numer(), f.denom())?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureKind {
    Nu,
    NuTilde,
    Mu0,
    Mu,
    MuNormalized,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeasureSpec {
    pub forbidden: ForbiddenSet,
    pub kind: MeasureKind,
    /// Depth of the `nu~` approximant used inside each cylinder of `nu`.
    pub base_depth: usize,
    pub depth: usize,
}

impl MeasureSpec {
    pub fn new(forbidden: ForbiddenSet, kind: MeasureKind, depth: usize, base_depth: usize) -> Self {
        MeasureSpec {
            forbidden,
            kind,
            base_depth,
            depth,
        }
    }

    pub fn base(&self) -> u8 {
        self.forbidden.base()
    }

    /// Nominal total mass: `N` for un-normalized `mu`, otherwise 1.
    pub fn nominal_mass(&self) -> Q {
        match self.kind {
            MeasureKind::Mu => int(self.base() as i64),
            _ => Q::one(),
        }
    }

    /// Number of linear pieces the construction produces.
    pub fn piece_count(&self, cap: u128) -> Result<u128> {
        let extra = match self.kind {
            MeasureKind::NuTilde => return checked_count(self.depth, self.base(), cap),
            MeasureKind::Nu => 0,
            MeasureKind::Mu0 | MeasureKind::Mu | MeasureKind::MuNormalized => 1,
        };
        checked_count(self.depth + self.base_depth + extra, self.base(), cap)
    }
}

/// Exact `nu` mass of the cylinder coded by `word`: `p(word)`.
pub fn nu_mass(word: &Word, table: &WeightTable) -> Result<Q> {
    table.p(word)
}

/// Exact `mu` mass of the cylinder coded by `w = (w1 w2 .. wK)`: `p(w2 .. wK)`,
/// divided by `N` when normalized.
pub fn mu_mass(word: &Word, table: &WeightTable, normalized: bool) -> Result<Q> {
    if word.is_empty() {
        return Err(Error::invalid("mu_mass needs a non-empty word; the total mass is N"));
    }
    let m = table.p(&word.shift())?;
    Ok(if normalized {
        m / int(table.base() as i64)
    } else {
        m
    })
}

fn nu_tilde_cdf(table: &WeightTable, depth: usize, cap: u128) -> Result<PiecewiseCdf> {
    let level = table.level(depth, cap)?;
    let n = table.base() as u64;
    let step = inv_pow(n, depth as u32);
    let mut points = Vec::with_capacity(level.len() + 1);
    points.push((Q::zero(), Q::zero()));
    let mut acc = Q::zero();
    for (m, (_, pair)) in level.iter().enumerate() {
        acc += &pair.p_tilde;
        points.push((&step * int(m as i64 + 1), acc.clone()));
    }
    Ok(PiecewiseCdf { points })
}

fn nu_cdf(table: &WeightTable, depth: usize, base_depth: usize, cap: u128) -> Result<PiecewiseCdf> {
    checked_count(depth + base_depth, table.base(), cap)?;
    let inner = nu_tilde_cdf(table, base_depth, cap)?;
    let level = table.level(depth, cap)?;
    let width = inv_pow(table.base() as u64, depth as u32);

    let mut offsets = Vec::with_capacity(level.len());
    let mut acc = Q::zero();
    for (_, pair) in &level {
        offsets.push(acc.clone());
        acc += &pair.p;
    }

    let pieces: Vec<Vec<(Q, Q)>> = level
        .par_iter()
        .zip(offsets.par_iter())
        .enumerate()
        .map(|(m, ((_, pair), offset))| {
            let left = &width * int(m as i64);
            // the first breakpoint of each cylinder is the last one of its predecessor
            let skip = usize::from(m > 0);
            inner.points[skip..]
                .iter()
                .map(|(x, g)| (&left + &width * x, offset + &pair.p * g))
                .collect()
        })
        .collect();
    Ok(PiecewiseCdf {
        points: pieces.into_iter().flatten().collect(),
    })
}

/// Pushforward of `cdf` under `x -> x/N`, extended by its total mass on `[1/N, 1]`.
fn contract(cdf: &PiecewiseCdf, base: u8) -> PiecewiseCdf {
    let n = int(base as i64);
    let mut points: Vec<(Q, Q)> = cdf.points.iter().map(|(x, f)| (x / &n, f.clone())).collect();
    points.push((Q::one(), cdf.total_mass().clone()));
    PiecewiseCdf { points }
}

/// `sum_i (g_i o f)_* cdf` with `g_i(x) = x + i/N`, `f(x) = x/N`.
fn tile(cdf: &PiecewiseCdf, base: u8) -> PiecewiseCdf {
    let n = int(base as i64);
    let mass = cdf.total_mass().clone();
    let mut points = Vec::with_capacity(cdf.len() * base as usize);
    for i in 0..base {
        let shift_x = int(i as i64) / &n;
        let shift_f = &mass * int(i as i64);
        let skip = usize::from(i > 0);
        points.extend(
            cdf.points[skip..]
                .iter()
                .map(|(x, f)| (&shift_x + x / &n, &shift_f + f)),
        );
    }
    PiecewiseCdf { points }
}

pub fn build_cdf(spec: &MeasureSpec, cap: u128) -> Result<PiecewiseCdf> {
    spec.piece_count(cap)?;
    let table = WeightTable::new(spec.forbidden.clone());
    build_cdf_with(spec, &table, cap)
}

pub fn build_cdf_with(spec: &MeasureSpec, table: &WeightTable, cap: u128) -> Result<PiecewiseCdf> {
    spec.piece_count(cap)?;
    Ok(match spec.kind {
        MeasureKind::NuTilde => nu_tilde_cdf(table, spec.depth, cap)?,
        MeasureKind::Nu => nu_cdf(table, spec.depth, spec.base_depth, cap)?,
        MeasureKind::Mu0 => contract(&nu_cdf(table, spec.depth, spec.base_depth, cap)?, spec.base()),
        MeasureKind::Mu => tile(&nu_cdf(table, spec.depth, spec.base_depth, cap)?, spec.base()),
        MeasureKind::MuNormalized => {
            let mu = tile(&nu_cdf(table, spec.depth, spec.base_depth, cap)?, spec.base());
            mu.scaled(&rat(1, spec.base() as i64))
        }
    })
}

fn segment_value(seg: (&Q, &Q, &Q, &Q), x: &Q) -> Q {
    let (x0, x1, f0, f1) = seg;
    f0 + (f1 - f0) * (x - x0) / (x1 - x0)
}

/// `int_0^1 |F_a - F_b|`, split at every breakpoint of either CDF and at the
/// sign change of the (linear) difference inside each piece.
pub fn w1_distance(a: &PiecewiseCdf, b: &PiecewiseCdf) -> Result<Q> {
    if a.total_mass() != b.total_mass() {
        return Err(Error::MassMismatch {
            left: fmt_q(a.total_mass()),
            right: fmt_q(b.total_mass()),
        });
    }
    let sa: Vec<_> = a.segments().collect();
    let sb: Vec<_> = b.segments().collect();

    let mut xs: Vec<&Q> = Vec::with_capacity(sa.len() + sb.len() + 2);
    let (mut i, mut j) = (0, 0);
    let pa: Vec<&Q> = a.points.iter().map(|p| &p.0).collect();
    let pb: Vec<&Q> = b.points.iter().map(|p| &p.0).collect();
    while i < pa.len() || j < pb.len() {
        let next = match (pa.get(i), pb.get(j)) {
            (Some(x), Some(y)) if x <= y => {
                i += 1;
                *x
            }
            (Some(x), None) => {
                i += 1;
                *x
            }
            (_, Some(y)) => {
                j += 1;
                *y
            }
            (None, None) => unreachable!(),
        };
        if xs.last() != Some(&next) {
            xs.push(next);
        }
    }

    let two = int(2);
    let (mut ia, mut ib) = (0, 0);
    let mut total = Q::zero();
    for pair in xs.windows(2) {
        let (lo, hi) = (pair[0], pair[1]);
        while sa[ia].1 <= lo {
            ia += 1;
        }
        while sb[ib].1 <= lo {
            ib += 1;
        }
        let d0 = segment_value(sa[ia], lo) - segment_value(sb[ib], lo);
        let d1 = segment_value(sa[ia], hi) - segment_value(sb[ib], hi);
        let h = hi - lo;
        let same_sign = !(d0.is_positive() && d1.is_negative() || d0.is_negative() && d1.is_positive());
        total += if same_sign {
            h * (d0.abs() + d1.abs()) / &two
        } else {
            let (a0, a1) = (d0.abs(), d1.abs());
            h * (&a0 * &a0 + &a1 * &a1) / (&two * (a0 + a1))
        };
    }
    Ok(total)
}

fn words_up_to(max_len: usize, base: u8) -> impl Iterator<Item = Word> {
    (0..=max_len).flat_map(move |len| {
        let count = (base as u128).pow(len as u32);
        Words::range(len, base, 0, count)
    })
}

fn base_params(name: &str, forbidden: &ForbiddenSet) -> Certificate {
    Certificate::new(name)
        .param("N", forbidden.base())
        .param("B", forbidden)
        .param("B_cap_index", forbidden.cap())
}

/// `W1(nu_K, nu_{K+1}) <= N^-K` and the same for `nu~`, for every `K <= k_max`.
pub fn w1_cauchy_certificate(forbidden: &ForbiddenSet, k_max: usize, base_depth: usize, cap: u128) -> Result<Certificate> {
    let table = WeightTable::new(forbidden.clone());
    MeasureSpec::new(forbidden.clone(), MeasureKind::Nu, k_max + 1, base_depth).piece_count(cap)?;
    let mut cert = base_params("w1_cauchy", forbidden)
        .param("K_max", k_max)
        .param("M", base_depth)
        .param("cap", cap);
    cert.note("nu approximants use the depth-M nu~ approximant inside each cylinder; the N^-K bound only needs each inner measure to be a probability measure on its cylinder");
    let n = forbidden.base() as u64;
    for (kind, label) in [(MeasureKind::Nu, "nu"), (MeasureKind::NuTilde, "nu_tilde")] {
        let build = |k: usize| build_cdf_with(&MeasureSpec::new(forbidden.clone(), kind, k, base_depth), &table, cap);
        let mut prev = build(0)?;
        for k in 0..=k_max {
            let next = build(k + 1)?;
            let d = w1_distance(&prev, &next)?;
            cert.assert(format!("W1({label}_{k}, {label}_{}) <= N^-{k}", k + 1), d, Relation::Le, inv_pow(n, k as u32));
            prev = next;
        }
    }
    Ok(cert)
}

/// Translation invariance of `mu` over the first digit, plus the `nu`-level
/// equalities `p(i w) = p(0 w)` for `i >= 2`.
pub fn translation_certificate(forbidden: &ForbiddenSet, depth: usize, base_depth: usize, cap: u128) -> Result<Certificate> {
    if depth < 2 {
        return Err(Error::invalid("translation certificate needs depth >= 2"));
    }
    let table = WeightTable::new(forbidden.clone());
    let spec = MeasureSpec::new(forbidden.clone(), MeasureKind::Mu, depth - 1, base_depth);
    let mu = build_cdf_with(&spec, &table, cap)?;
    let base = forbidden.base();
    let mut cert = base_params("translation", forbidden)
        .param("D", depth)
        .param("M", base_depth);
    for w in words_up_to(depth - 1, base) {
        let m0 = mu.cylinder_mass(&w.prepend(0));
        cert.assert(format!("mu[0{w}] == p({w})"), m0.clone(), Relation::Eq, mu_mass(&w.prepend(0), &table, false)?);
        cert.assert(format!("mu[0{w}] > 0"), m0.clone(), Relation::Gt, Q::zero());
        for i in 1..base {
            cert.assert(format!("mu[{i}{w}] == mu[0{w}]"), mu.cylinder_mass(&w.prepend(i)), Relation::Eq, m0.clone());
        }
        let p0 = table.p(&w.prepend(0))?;
        let p1 = table.p(&w.prepend(1))?;
        cert.assert(format!("p(1{w})/p(0{w}) > 0"), p1 / &p0, Relation::Gt, Q::zero());
        for i in 2..base {
            cert.assert(format!("p({i}{w}) == p(0{w})"), table.p(&w.prepend(i))?, Relation::Eq, p0.clone());
        }
    }
    Ok(cert)
}

/// True when no forbidden word is completed in `word` after position `after`.
fn aligned_after(word: &Word, after: usize, forbidden: &ForbiddenSet) -> bool {
    let d = word.digits();
    (after..d.len()).all(|t| !(d[t] == 2 && is_pending(&d[..t], forbidden)))
}

/// Ratio of `mu0` to `nu` on the cylinders inside `[0, 1/N]`, with the band
/// `[R_j/2, R_j]` on every family aligned at a prefix `j`.
pub fn continuity_certificate(forbidden: &ForbiddenSet, depth: usize, base_depth: usize, cap: u128) -> Result<Certificate> {
    if depth < 2 {
        return Err(Error::invalid("continuity certificate needs depth >= 2"));
    }
    let table = WeightTable::new(forbidden.clone());
    let nu = build_cdf_with(&MeasureSpec::new(forbidden.clone(), MeasureKind::Nu, depth, base_depth), &table, cap)?;
    let mu0 = contract(&nu, forbidden.base());
    let mut cert = base_params("continuity", forbidden)
        .param("D", depth)
        .param("M", base_depth);
    let half = rat(1, 2);
    for w in words_up_to(depth - 1, forbidden.base()) {
        let c = w.prepend(0);
        let nu_m = nu.cylinder_mass(&c);
        let mu_m = mu0.cylinder_mass(&c);
        cert.assert(format!("nu[{c}] == p({c})"), nu_m.clone(), Relation::Eq, table.p(&c)?);
        cert.assert(format!("mu0[{c}] == p({w})"), mu_m.clone(), Relation::Eq, table.p(&w)?);
        cert.assert(format!("nu[{c}] > 0"), nu_m.clone(), Relation::Gt, Q::zero());
        cert.assert(format!("mu0[{c}] > 0"), mu_m.clone(), Relation::Gt, Q::zero());
        let ratio = mu_m / nu_m;
        for jlen in 1..=c.len() {
            if !aligned_after(&c, jlen, forbidden) {
                continue;
            }
            let j = c.prefix(jlen);
            let r_j = table.p(&j.shift())? / table.p(&j)?;
            let mut r = Q::one();
            for k in jlen..c.len() {
                if is_pending(&c.digits()[..k], forbidden) {
                    r *= (Q::one() - inv_pow(2, k as u32)) / (Q::one() - inv_pow(2, k as u32 + 1));
                }
            }
            cert.assert(format!("ratio[{c}] == R[{j}] r"), ratio.clone(), Relation::Eq, &r_j * r);
            cert.assert(format!("ratio[{c}] >= R[{j}]/2"), ratio.clone(), Relation::Ge, &r_j * &half);
            cert.assert(format!("ratio[{c}] <= R[{j}]"), ratio.clone(), Relation::Le, r_j);
        }
    }
    Ok(cert)
}

/// Sum of `p(i b)` over all `i` of length `k`.
pub fn e_set_mass(table: &WeightTable, b: &Word, k: usize, cap: u128) -> Result<Q> {
    let mut total = Q::zero();
    for (i, _) in table.level(k, cap)? {
        total += table.p(&i.concat(b))?;
    }
    Ok(total)
}

/// Mass of the codings whose `k` consecutive length-`|b|` blocks after a free
/// prefix of length `n` all differ from `b`.
pub fn avoidance_mass(forbidden: &ForbiddenSet, b: &Word, n: usize, k: usize, cap: u128) -> Result<Q> {
    checked_count(n + k * b.len(), forbidden.base(), cap)?;
    fn walk(digits: &mut Vec<u8>, weight: Q, forbidden: &ForbiddenSet, b: &[u8], n: usize, total_len: usize, acc: &mut Q) {
        let len = digits.len();
        if len > n && (len - n).is_multiple_of(b.len()) && digits[len - b.len()..] == *b {
            return;
        }
        if len == total_len {
            *acc += weight;
            return;
        }
        for d in 0..forbidden.base() {
            let (f, _) = digit_factors(digits, d, forbidden);
            digits.push(d);
            walk(digits, &weight * f, forbidden, b, n, total_len, acc);
            digits.pop();
        }
    }
    let mut acc = Q::zero();
    walk(&mut Vec::new(), Q::one(), forbidden, b.digits(), n, n + k * b.len(), &mut acc);
    Ok(acc)
}

/// Finite-resolution evidence that `nu_alpha` and `nu_beta` are mutually
/// singular, for a word `b` forbidden under alpha but not under beta.
pub fn singularity_certificate(
    alpha: &ForbiddenSet,
    beta: &ForbiddenSet,
    b: &Word,
    k: usize,
    n: usize,
    cap: u128,
) -> Result<Certificate> {
    if alpha.base() != beta.base() || b.base() != alpha.base() {
        return Err(Error::invalid("alpha, beta and b must share a base"));
    }
    let idx = alpha
        .member_index(b)
        .ok_or_else(|| Error::invalid(format!("{b:?} is not a member of B_alpha")))?;
    if beta.contains_index(idx) {
        return Err(Error::invalid(format!("{b:?} is also a member of B_beta")));
    }
    let base = alpha.base() as i64;
    let len = b.len() as u32;
    let mut cert = Certificate::new("singularity")
        .param("N", base)
        .param("B_alpha", alpha)
        .param("B_beta", beta)
        .param("b", b)
        .param("k", k)
        .param("n", n);

    let table = WeightTable::new(alpha.clone());
    let e = e_set_mass(&table, b, k, cap)?;
    cert.assert(
        format!("sum_i p_alpha(i b) <= 2^-(k+|b|) [k={k}]"),
        e,
        Relation::Le,
        inv_pow(2, k as u32 + len),
    );

    let avoid = avoidance_mass(beta, b, n, k, cap)?;
    let corrected = pow(&(Q::one() - Q::new(1.into(), num_traits::pow(num_bigint::BigInt::from(2 * base), len as usize))), k as u32);
    let naive = pow(&(Q::one() - rat(1, 2 * base)), k as u32);
    cert.assert("avoidance mass <= (1 - (2N)^-|b|)^k", avoid.clone(), Relation::Le, corrected);
    cert.inform("avoidance mass <= (1 - 1/(2N))^k [naive bound]", avoid, Relation::Le, naive);
    cert.note("inside a block equal to b no digit can be a forced completion for beta, so every digit weight is at least 1/(2N); this gives the per-block bound 1 - (2N)^-|b|");
    Ok(cert)
}

/// Cylinder-resolution witnesses for the two circle conditions with `n = N`:
/// equal positive translated masses, and `nu0 ~ phi` on every arc `(0 w)`.
pub fn circle_stability_certificate(
    forbidden: &ForbiddenSet,
    n: u32,
    depth: usize,
    base_depth: usize,
    cap: u128,
) -> Result<Certificate> {
    let base = forbidden.base();
    if n != base as u32 {
        return Err(Error::UnsupportedConfiguration(format!(
            "arc subdivision n = {n} must equal the digit base N = {base}"
        )));
    }
    if depth < 2 {
        return Err(Error::invalid("circle certificate needs depth >= 2"));
    }
    let table = WeightTable::new(forbidden.clone());
    let mu = build_cdf_with(&MeasureSpec::new(forbidden.clone(), MeasureKind::MuNormalized, depth - 1, base_depth), &table, cap)?;
    let mut cert = base_params("circle_stability", forbidden)
        .param("n", n)
        .param("D", depth)
        .param("M", base_depth);
    cert.note("arcs of the circle are identified with subintervals of [0,1] via t -> exp(2 pi i t)");
    for w in words_up_to(depth - 1, base) {
        let m0 = mu.cylinder_mass(&w.prepend(0));
        cert.assert(format!("(a) mu[0{w}] > 0"), m0.clone(), Relation::Gt, Q::zero());
        for i in 1..base {
            cert.assert(format!("(a) mu[{i}{w}] == mu[0{w}]"), mu.cylinder_mass(&w.prepend(i)), Relation::Eq, m0.clone());
        }
        let nu0 = table.p(&w.prepend(0))?;
        let phi = table.p(&w)?;
        cert.assert(format!("(b) nu[0{w}] > 0"), nu0.clone(), Relation::Gt, Q::zero());
        cert.assert(format!("(b) phi[0{w}] = nu[{w}] > 0"), phi.clone(), Relation::Gt, Q::zero());
        cert.assert(format!("(b) phi/nu ratio on (0{w}) > 0"), phi / nu0, Relation::Gt, Q::zero());
        // the same witness on the circle measure itself: arc (0 w) and its N-th power image (w)
        let image = if w.is_empty() { Q::one() } else { mu.cylinder_mass(&w) };
        cert.assert(format!("(b) circle image of (0{w}) > 0"), image, Relation::Gt, Q::zero());
    }
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::DEFAULT_CAP;

    fn w(d: &[u8]) -> Word {
        Word::new(d.to_vec(), 3).unwrap()
    }

    fn set(ix: &[u32]) -> ForbiddenSet {
        ForbiddenSet::new(ix.iter().copied(), 3).unwrap()
    }

    #[test]
    fn masses() {
        let t = WeightTable::new(set(&[1]));
        assert_eq!(nu_mass(&w(&[1, 0, 2]), &t).unwrap(), rat(1, 72));
        assert_eq!(nu_mass(&Word::empty(3), &t).unwrap(), rat(1, 1));
        let e = WeightTable::new(set(&[]));
        assert_eq!(nu_mass(&w(&[2, 1]), &e).unwrap(), rat(1, 9));
        assert_eq!(mu_mass(&w(&[2, 1, 0, 2]), &t, false).unwrap(), rat(1, 72));
        assert_eq!(mu_mass(&w(&[2, 1, 0, 2]), &t, true).unwrap(), rat(1, 216));
        for d in 0..3 {
            assert_eq!(mu_mass(&w(&[d]), &t, false).unwrap(), rat(1, 1));
        }
        assert_eq!(mu_mass(&w(&[1, 1]), &e, false).unwrap(), rat(1, 3));
        assert!(mu_mass(&Word::empty(3), &t, false).is_err());
    }

    #[test]
    fn lebesgue_cases_are_identity() {
        let e = set(&[]);
        for depth in 0..4 {
            let c = build_cdf(&MeasureSpec::new(e.clone(), MeasureKind::NuTilde, depth, 0), DEFAULT_CAP).unwrap();
            for (x, f) in c.points() {
                assert_eq!(x, f);
            }
        }
        let mu = build_cdf(&MeasureSpec::new(e.clone(), MeasureKind::Mu, 2, 1), DEFAULT_CAP).unwrap();
        for (x, f) in mu.points() {
            assert_eq!(f, &(x * int(3)));
        }
        let mu = build_cdf(&MeasureSpec::new(e, MeasureKind::MuNormalized, 2, 1), DEFAULT_CAP).unwrap();
        assert!(mu.points().iter().all(|(x, f)| x == f));
    }

    #[test]
    fn nu_tilde_vanishes_on_forbidden_cylinder() {
        let c = build_cdf(&MeasureSpec::new(set(&[1]), MeasureKind::NuTilde, 3, 0), DEFAULT_CAP).unwrap();
        assert_eq!(c.cylinder_mass(&w(&[1, 0, 2])), rat(0, 1));
        assert_eq!(c.cylinder_mass(&w(&[1, 0, 0])), rat(1, 18));
        assert_eq!(c.len(), 28);
    }

    #[test]
    fn w1_basic_cases() {
        let a = PiecewiseCdf::identity();
        assert_eq!(w1_distance(&a, &a).unwrap(), rat(0, 1));
        let p0 = PiecewiseCdf::point_mass(rat(0, 1), rat(1, 1)).unwrap();
        let p1 = PiecewiseCdf::point_mass(rat(1, 1), rat(1, 1)).unwrap();
        assert_eq!(w1_distance(&p0, &p1).unwrap(), rat(1, 1));
        assert_eq!(w1_distance(&p0, &a).unwrap(), rat(1, 2));
        let heavy = PiecewiseCdf::point_mass(rat(1, 2), rat(2, 1)).unwrap();
        assert!(matches!(w1_distance(&a, &heavy), Err(Error::MassMismatch { .. })));
    }

    #[test]
    fn w1_crossing_difference() {
        // F_a: all mass at 1/2, F_b uniform; |F_a - F_b| = x on [0,1/2), 1-x after
        let a = PiecewiseCdf::point_mass(rat(1, 2), rat(1, 1)).unwrap();
        let b = PiecewiseCdf::identity();
        assert_eq!(w1_distance(&a, &b).unwrap(), rat(1, 4));
        // two linear CDFs crossing inside a single piece
        let c = PiecewiseCdf::new(vec![(rat(0, 1), rat(0, 1)), (rat(1, 2), rat(3, 4)), (rat(1, 1), rat(1, 1))]).unwrap();
        let d = PiecewiseCdf::new(vec![(rat(0, 1), rat(0, 1)), (rat(1, 2), rat(1, 4)), (rat(1, 1), rat(1, 1))]).unwrap();
        // |c - d| is a tent of height 1/2 on [0,1]
        assert_eq!(w1_distance(&c, &d).unwrap(), rat(1, 4));
    }

    #[test]
    fn invalid_cdfs_rejected() {
        assert!(PiecewiseCdf::new(vec![(rat(0, 1), rat(0, 1))]).is_err());
        assert!(PiecewiseCdf::new(vec![(rat(0, 1), rat(1, 1)), (rat(1, 1), rat(0, 1))]).is_err());
        assert!(PiecewiseCdf::new(vec![(rat(0, 1), rat(0, 1)), (rat(1, 2), rat(1, 1))]).is_err());
    }

    #[test]
    fn cap_is_enforced() {
        let spec = MeasureSpec::new(set(&[1]), MeasureKind::Nu, 10, 4);
        assert!(matches!(build_cdf(&spec, 1000), Err(Error::EnumerationTooLarge { .. })));
    }

    #[test]
    fn singularity_examples() {
        let alpha = set(&[1]);
        let beta = set(&[]);
        let b = w(&[1, 0, 2]);
        let t = WeightTable::new(alpha.clone());
        assert_eq!(e_set_mass(&t, &b, 0, DEFAULT_CAP).unwrap(), rat(1, 72));
        assert_eq!(e_set_mass(&t, &b, 1, DEFAULT_CAP).unwrap(), rat(1, 144));
        assert_eq!(avoidance_mass(&beta, &b, 0, 1, DEFAULT_CAP).unwrap(), rat(26, 27));
        let cert = singularity_certificate(&alpha, &beta, &b, 1, 0, DEFAULT_CAP).unwrap();
        assert!(cert.passed());
        let naive = cert.checks.iter().find(|c| !c.asserted).unwrap();
        assert!(!naive.holds);
        assert_eq!((naive.lhs.clone(), naive.rhs.clone()), (rat(26, 27), rat(5, 6)));
        assert!(singularity_certificate(&beta, &alpha, &b, 1, 0, DEFAULT_CAP).is_err());
        assert!(singularity_certificate(&alpha, &alpha, &b, 1, 0, DEFAULT_CAP).is_err());
    }

    #[test]
    fn circle_requires_matching_n() {
        assert!(matches!(
            circle_stability_certificate(&set(&[1]), 2, 3, 1, DEFAULT_CAP),
            Err(Error::UnsupportedConfiguration(_))
        ));
    }
}
