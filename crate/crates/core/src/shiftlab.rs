//! Decision procedures for diagonal unitaries with rational spectra, weighted
//! shifts with eventually-1 weights, and symbolic isometry/normal descriptors.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::{fmt_q, int, parse_q, Q};

pub const ORBIT_CAP: usize = 1 << 20;

/// Point `e^(2 pi i value)` of the circle, `value` a rational in `[0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Angle(Q);

impl Angle {
    pub fn new(v: Q) -> Self {
        let f = &v - Q::from_integer(v.floor().to_integer());
        Angle(f)
    }

    pub fn zero() -> Self {
        Angle(Q::zero())
    }

    pub fn value(&self) -> &Q {
        &self.0
    }

    pub fn times(&self, n: u64) -> Angle {
        Angle::new(&self.0 * int(n as i64))
    }

    pub fn add(&self, o: &Angle) -> Angle {
        Angle::new(&self.0 + &o.0)
    }

    pub fn sub(&self, o: &Angle) -> Angle {
        Angle::new(&self.0 - &o.0)
    }

    /// The `n` preimages `(self + t)/n` under `x -> n x`.
    pub fn roots(&self, n: u64) -> Vec<Angle> {
        (0..n).map(|t| Angle::new((&self.0 + int(t as i64)) / int(n as i64))).collect()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", fmt_q(&self.0))
    }
}

impl FromStr for Angle {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_q(s).map(Angle::new).map_err(|m| Error::parse("angle (rational only)", m))
    }
}

impl Serialize for Angle {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

fn depth_pow(n: u64, j: usize) -> Q {
    num_traits::pow(int(n as i64), j)
}

/// Truncation of `S_n(a)`: every `theta` with `n^j theta = n^k a` for `j, k <= depth`.
pub fn orbit_expand(a: &Angle, n: u64, depth: usize) -> BTreeSet<Angle> {
    let mut forward = Vec::with_capacity(depth + 1);
    let mut x = a.clone();
    for _ in 0..=depth {
        if forward.contains(&x) {
            break;
        }
        forward.push(x.clone());
        x = x.times(n);
    }
    let mut out = BTreeSet::new();
    for f in &forward {
        for j in 0..=depth {
            let m = depth_pow(n, j);
            let count = m.to_integer();
            let mut t = BigInt::zero();
            while t < count {
                out.insert(Angle::new((f.value() + Q::from_integer(t.clone())) / &m));
                t += 1;
            }
        }
    }
    out
}

/// Points of the forward orbit under `x -> n x`, up to and including the
/// first repeat; the tail from the repeated point on is the cycle.
fn forward_orbit(a: &Angle, n: u64, cap: usize) -> Result<(Vec<Angle>, usize)> {
    let mut seen: HashMap<Angle, usize> = HashMap::new();
    let mut seq = Vec::new();
    let mut x = a.clone();
    loop {
        if let Some(&start) = seen.get(&x) {
            return Ok((seq, start));
        }
        if seq.len() >= cap {
            return Err(Error::Undecided { cap });
        }
        seen.insert(x.clone(), seq.len());
        seq.push(x.clone());
        x = x.times(n);
    }
}

/// `S_n(a) == S_n(b)`: the forward orbits under `x -> n x` meet.
pub fn s_class_equal(a: &Angle, b: &Angle, n: u64, cap: usize) -> Result<bool> {
    let (orbit, start) = forward_orbit(a, n, cap)?;
    // both orbits end in cycles; they meet iff b's cycle meets a's cycle
    let cycle: BTreeSet<&Angle> = orbit[start..].iter().collect();
    let (other, ostart) = forward_orbit(b, n, cap)?;
    Ok(other[ostart..].iter().any(|x| cycle.contains(x)))
}

/// Canonical member of `S_n(a)`: smallest denominator, then smallest numerator.
/// Those are exactly the points of the forward cycle; the minimum is returned.
pub fn class_representative(a: &Angle, n: u64, cap: usize) -> Result<Angle> {
    let (orbit, start) = forward_orbit(a, n, cap)?;
    Ok(orbit[start..]
        .iter()
        .min_by(|x, y| x.denom().cmp(y.denom()).then_with(|| x.value().cmp(y.value())))
        .expect("non-empty cycle")
        .clone())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Generator {
    Single { angle: Angle },
    /// `S_m(c)`.
    Class { angle: Angle, m: u64 },
    /// `r + S_m(c)`.
    Rotated { shift: Angle, angle: Angle, m: u64 },
    /// `S(c)`, which for rational `c` is every rational angle.
    SClass { angle: Angle },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AngleGenerator {
    pub generator: Generator,
    pub infinite: bool,
}

/// Point spectrum of a diagonal unitary as a union of generators.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct AngleSet {
    pub generators: Vec<AngleGenerator>,
}

fn parse_class(text: &str) -> Result<(Angle, u64)> {
    let (a, m) = text
        .split_once('@')
        .ok_or_else(|| Error::parse("angle set", format!("class needs '@m': {text:?}")))?;
    let m: u64 = m.trim().parse().map_err(|_| Error::parse("angle set", format!("bad class base {m:?}")))?;
    if m < 2 {
        return Err(Error::parse("angle set", "class base must be >= 2"));
    }
    Ok((a.trim().parse()?, m))
}

impl AngleSet {
    pub fn new(generators: Vec<AngleGenerator>) -> Self {
        AngleSet { generators }
    }

    /// Comma-separated generators: `single:1/3`, `class:0/1@2`,
    /// `rotated:1/3+0/1@2`, `sclass:1/5`; a `!finite` suffix marks finite
    /// multiplicity.
    pub fn parse(text: &str) -> Result<Self> {
        let mut generators = Vec::new();
        for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (body, infinite) = match part.strip_suffix("!finite") {
                Some(b) => (b, false),
                None => (part, true),
            };
            let (kind, arg) = body
                .split_once(':')
                .ok_or_else(|| Error::parse("angle set", format!("missing kind in {part:?}")))?;
            let generator = match kind.trim() {
                "single" => Generator::Single { angle: arg.parse()? },
                "class" => {
                    let (angle, m) = parse_class(arg)?;
                    Generator::Class { angle, m }
                }
                "rotated" => {
                    let (shift, rest) = arg
                        .split_once('+')
                        .ok_or_else(|| Error::parse("angle set", format!("rotated needs 'r+c@m': {arg:?}")))?;
                    let (angle, m) = parse_class(rest)?;
                    Generator::Rotated {
                        shift: shift.parse()?,
                        angle,
                        m,
                    }
                }
                "sclass" => Generator::SClass { angle: arg.parse()? },
                other => return Err(Error::parse("angle set", format!("unknown generator kind {other:?}"))),
            };
            generators.push(AngleGenerator { generator, infinite });
        }
        Ok(AngleSet { generators })
    }

    pub fn contains(&self, theta: &Angle, cap: usize) -> Result<bool> {
        for g in &self.generators {
            if generator_contains(&g.generator, theta, cap)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

impl fmt::Display for AngleSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .generators
            .iter()
            .map(|g| {
                let body = match &g.generator {
                    Generator::Single { angle } => format!("single:{angle}"),
                    Generator::Class { angle, m } => format!("class:{angle}@{m}"),
                    Generator::Rotated { shift, angle, m } => format!("rotated:{shift}+{angle}@{m}"),
                    Generator::SClass { angle } => format!("sclass:{angle}"),
                };
                if g.infinite {
                    body
                } else {
                    format!("{body}!finite")
                }
            })
            .collect();
        write!(f, "{}", parts.join(","))
    }
}

fn generator_contains(g: &Generator, theta: &Angle, cap: usize) -> Result<bool> {
    match g {
        Generator::Single { angle } => Ok(angle == theta),
        Generator::Class { angle, m } => s_class_equal(theta, angle, *m, cap),
        Generator::Rotated { shift, angle, m } => s_class_equal(&theta.sub(shift), angle, *m, cap),
        Generator::SClass { .. } => Ok(true),
    }
}

/// Why a point lies outside a generator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum Exclusion {
    NotEqual { single: Angle },
    /// `theta - shift = p/q` lies in `S_m(0)` iff `m^k` is in `q Z` for some `k`.
    PowerNotInDenominatorIdeal { m: u64, q: String },
    OrbitsDisjoint { class_of: Angle, m: u64 },
}

fn exclusion(g: &Generator, theta: &Angle) -> Option<Exclusion> {
    match g {
        Generator::Single { angle } => Some(Exclusion::NotEqual { single: angle.clone() }),
        Generator::Class { angle, m } | Generator::Rotated { angle, m, .. } => {
            let shift = match g {
                Generator::Rotated { shift, .. } => shift.clone(),
                _ => Angle::zero(),
            };
            if angle.value().is_zero() {
                Some(Exclusion::PowerNotInDenominatorIdeal {
                    m: *m,
                    q: theta.sub(&shift).denom().to_string(),
                })
            } else {
                Some(Exclusion::OrbitsDisjoint {
                    class_of: angle.clone(),
                    m: *m,
                })
            }
        }
        Generator::SClass { .. } => None,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessKind {
    /// `angle` is an `n`-th root of `of`, which is in the set.
    Root,
    /// `angle = n * of`.
    Power,
    FiniteMultiplicity,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiagWitness {
    pub angle: Angle,
    pub kind: WitnessKind,
    pub of: Angle,
    /// One entry per generator, in set order.
    pub exclusions: Vec<Exclusion>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ClassRep {
    Sn { representative: Angle, n: u64 },
    AllRationals,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiagDecision {
    pub stable: bool,
    pub partition: Vec<ClassRep>,
    pub witness: Option<DiagWitness>,
}

fn sample_points(g: &Generator, depth: usize) -> Vec<Angle> {
    match g {
        Generator::Single { angle } => vec![angle.clone()],
        Generator::Class { angle, m } => orbit_expand(angle, *m, depth).into_iter().collect(),
        Generator::Rotated { shift, angle, m } => orbit_expand(angle, *m, depth).into_iter().map(|a| a.add(shift)).collect(),
        Generator::SClass { .. } => Vec::new(),
    }
}

fn base_point(g: &Generator) -> Angle {
    match g {
        Generator::Single { angle } | Generator::Class { angle, .. } | Generator::SClass { angle } => angle.clone(),
        Generator::Rotated { shift, angle, .. } => angle.add(shift),
    }
}

/// Whether `diag(S)` with uniform infinite multiplicity is unitarily
/// equivalent to its `J_n`: the set must equal its preimage under `x -> n x`.
/// Class generators are probed on their depth-truncated orbits.
pub fn diag_stability_decide(set: &AngleSet, n: u64, depth: usize) -> Result<DiagDecision> {
    if n < 2 {
        return Err(Error::invalid("n must be >= 2"));
    }
    if let Some(g) = set.generators.iter().find(|g| !g.infinite) {
        let a = base_point(&g.generator);
        return Ok(DiagDecision {
            stable: false,
            partition: Vec::new(),
            witness: Some(DiagWitness {
                angle: a.clone(),
                kind: WitnessKind::FiniteMultiplicity,
                of: a,
                exclusions: Vec::new(),
            }),
        });
    }
    if set.generators.iter().any(|g| matches!(g.generator, Generator::SClass { .. })) {
        return Ok(DiagDecision {
            stable: true,
            partition: vec![ClassRep::AllRationals],
            witness: None,
        });
    }
    let missing = |theta: &Angle| -> Result<bool> { Ok(!set.contains(theta, ORBIT_CAP)?) };
    for g in &set.generators {
        for theta in sample_points(&g.generator, depth) {
            let candidates = theta
                .roots(n)
                .into_iter()
                .map(|r| (r, WitnessKind::Root))
                .chain(std::iter::once((theta.times(n), WitnessKind::Power)));
            for (cand, kind) in candidates {
                if missing(&cand)? {
                    let exclusions = set.generators.iter().filter_map(|h| exclusion(&h.generator, &cand)).collect();
                    return Ok(DiagDecision {
                        stable: false,
                        partition: Vec::new(),
                        witness: Some(DiagWitness {
                            angle: cand,
                            kind,
                            of: theta,
                            exclusions,
                        }),
                    });
                }
            }
        }
    }
    let mut reps = BTreeSet::new();
    for g in &set.generators {
        reps.insert(class_representative(&base_point(&g.generator), n, ORBIT_CAP)?);
    }
    Ok(DiagDecision {
        stable: true,
        partition: reps.into_iter().map(|representative| ClassRep::Sn { representative, n }).collect(),
        witness: None,
    })
}

/// Stability for every `n >= 2` at once: needs an `S`-class generator and
/// infinite multiplicities throughout. Otherwise the smallest failing `n` up to
/// `max_n` is reported.
pub fn diag_stability_all_n(set: &AngleSet, depth: usize, max_n: u64) -> Result<(bool, Option<(u64, DiagDecision)>)> {
    let all_infinite = set.generators.iter().all(|g| g.infinite);
    let has_s_class = set.generators.iter().any(|g| matches!(g.generator, Generator::SClass { .. }));
    if all_infinite && has_s_class {
        return Ok((true, None));
    }
    for n in 2..=max_n {
        let d = diag_stability_decide(set, n, depth)?;
        if !d.stable {
            return Ok((false, Some((n, d))));
        }
    }
    Err(Error::Undecided { cap: max_n as usize })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ShiftKind {
    Bilateral,
    Unilateral,
}

/// Weighted shift `W e_k = w_k e_(k+1)` with `w_k = 1` outside `exceptional`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightSeq {
    kind: ShiftKind,
    exceptional: BTreeMap<i64, Q>,
}

impl WeightSeq {
    pub fn new(kind: ShiftKind, weights: impl IntoIterator<Item = (i64, Q)>) -> Result<Self> {
        let mut exceptional = BTreeMap::new();
        for (pos, w) in weights {
            if !w.is_positive() {
                return Err(Error::invalid(format!("weight at {pos} must be positive")));
            }
            if kind == ShiftKind::Unilateral && pos < 0 {
                return Err(Error::invalid("unilateral positions start at 0"));
            }
            if !w.is_one() {
                exceptional.insert(pos, w);
            }
        }
        Ok(WeightSeq { kind, exceptional })
    }

    pub fn ones(kind: ShiftKind) -> Self {
        WeightSeq {
            kind,
            exceptional: BTreeMap::new(),
        }
    }

    /// `bilateral;0:2,5:3` or `unilateral;` (empty means all ones).
    pub fn parse(text: &str) -> Result<Self> {
        let (kind, rest) = text.split_once(';').unwrap_or((text, ""));
        let kind = match kind.trim() {
            "bilateral" => ShiftKind::Bilateral,
            "unilateral" => ShiftKind::Unilateral,
            k => return Err(Error::parse("weight sequence", format!("unknown kind {k:?}"))),
        };
        let mut weights = Vec::new();
        for item in rest.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (p, w) = item
                .split_once(':')
                .ok_or_else(|| Error::parse("weight sequence", format!("expected pos:weight, got {item:?}")))?;
            let p: i64 = p.trim().parse().map_err(|_| Error::parse("weight sequence", format!("bad position {p:?}")))?;
            weights.push((p, parse_q(w).map_err(|m| Error::parse("weight sequence", m))?));
        }
        Self::new(kind, weights)
    }

    pub fn kind(&self) -> ShiftKind {
        self.kind
    }

    pub fn exceptional(&self) -> &BTreeMap<i64, Q> {
        &self.exceptional
    }

    pub fn weight(&self, pos: i64) -> Q {
        self.exceptional.get(&pos).cloned().unwrap_or_else(Q::one)
    }

    /// `d(W)`: the minimal gap between exceptional positions.
    pub fn min_gap(&self) -> Option<i64> {
        let pos: Vec<i64> = self.exceptional.keys().copied().collect();
        pos.windows(2).map(|w| w[1] - w[0]).min()
    }

    /// Width of the exceptional support, 0 when empty.
    pub fn span(&self) -> i64 {
        match (self.exceptional.keys().next(), self.exceptional.keys().next_back()) {
            (Some(a), Some(b)) => b - a + 1,
            _ => 0,
        }
    }
}

impl fmt::Display for WeightSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            ShiftKind::Bilateral => "bilateral",
            ShiftKind::Unilateral => "unilateral",
        };
        let items: Vec<String> = self.exceptional.iter().map(|(p, w)| format!("{p}:{}", fmt_q(w))).collect();
        write!(f, "{kind};{}", items.join(","))
    }
}

impl Serialize for WeightSeq {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

fn interleave(w: &WeightSeq, n: u64) -> WeightSeq {
    let n = n as i64;
    WeightSeq {
        kind: w.kind,
        exceptional: w.exceptional.iter().map(|(&i, v)| (n * i + n - 1, v.clone())).collect(),
    }
}

/// Weights of `J_n(W)` in the interleaved basis: `n - 1` ones before each `w_i`,
/// which lands at position `n i + n - 1`.
pub fn shift_jn_weights(w: &WeightSeq, n: u64) -> Result<WeightSeq> {
    if n < 2 {
        return Err(Error::invalid("n must be >= 2"));
    }
    if w.kind != ShiftKind::Bilateral {
        return Err(Error::invalid("unilateral sequence: use unilateral_jn_weights"));
    }
    Ok(interleave(w, n))
}

pub fn unilateral_jn_weights(w: &WeightSeq, n: u64) -> Result<WeightSeq> {
    if n < 2 {
        return Err(Error::invalid("n must be >= 2"));
    }
    if w.kind != ShiftKind::Unilateral {
        return Err(Error::invalid("bilateral sequence: use shift_jn_weights"));
    }
    Ok(interleave(w, n))
}

/// All length-`k` windows `(w_(i+1), ..., w_(i+k))`, `i` in `Z` (or `i >= -1`
/// for unilateral shifts).
pub fn k_spectrum(w: &WeightSeq, k: usize) -> BTreeSet<Vec<Q>> {
    let k = k as i64;
    let mut out = BTreeSet::new();
    out.insert(vec![Q::one(); k as usize]);
    if let (Some(&lo), Some(&hi)) = (w.exceptional.keys().next(), w.exceptional.keys().next_back()) {
        let mut start = lo - k;
        if w.kind == ShiftKind::Unilateral {
            start = start.max(-1);
        }
        for i in start..=hi {
            out.insert((1..=k).map(|j| w.weight(i + j)).collect());
        }
    }
    out
}

pub fn spectra_agree(v: &WeightSeq, w: &WeightSeq, max_k: usize) -> bool {
    (1..=max_k).all(|k| k_spectrum(v, k) == k_spectrum(w, k))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShiftRefutation {
    pub s: i64,
    pub t: i64,
    /// `L = t - s = d(W)`.
    pub gap: i64,
    /// `(w_s, 1, ..., 1, w_t)`, a window of `W` of length `L + 1`.
    #[serde(serialize_with = "ser_q_vec")]
    pub window: Vec<Q>,
    /// Separation radius: `1` is outside `(w_s - delta, w_s + delta)` and the same for `w_t`.
    #[serde(with = "crate::exact::serde_q")]
    pub delta: Q,
    pub jn_gap: i64,
    pub window_in_jn_spectrum: bool,
}

fn ser_q_vec<S: Serializer>(v: &[Q], s: S) -> std::result::Result<S::Ok, S::Error> {
    let strs: Vec<String> = v.iter().map(fmt_q).collect();
    strs.serialize(s)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShiftDecision {
    pub stable: bool,
    pub refutation: Option<ShiftRefutation>,
}

/// Bilateral weighted shifts: `J_n`-stable (unitarily or approximately) iff
/// at most one weight differs from 1.
pub fn bilateral_stability_decide(w: &WeightSeq, n: u64) -> Result<ShiftDecision> {
    let jn = shift_jn_weights(w, n)?;
    if w.exceptional.len() <= 1 {
        return Ok(ShiftDecision {
            stable: true,
            refutation: None,
        });
    }
    let gap = w.min_gap().expect("two exceptional positions");
    let keys: Vec<i64> = w.exceptional.keys().copied().collect();
    let s = *keys.windows(2).find(|p| p[1] - p[0] == gap).map(|p| &p[0]).expect("gap attained");
    let t = s + gap;
    let window: Vec<Q> = (s..=t).map(|i| w.weight(i)).collect();
    let delta = [&window[0], &window[window.len() - 1]]
        .iter()
        .map(|v| (*v - Q::one()).abs())
        .min()
        .expect("two entries")
        / int(2);
    let window_in_jn_spectrum = k_spectrum(&jn, window.len()).contains(&window);
    Ok(ShiftDecision {
        stable: false,
        refutation: Some(ShiftRefutation {
            s,
            t,
            gap,
            window,
            delta,
            jn_gap: jn.min_gap().expect("two exceptional positions"),
            window_in_jn_spectrum,
        }),
    })
}

/// Unilateral weighted shifts: stable iff `(w_0, w_1, ...)` equals the
/// interleaved `(1_(n-1), w_0, 1_(n-1), w_1, ...)`.
pub fn unilateral_stability_decide(w: &WeightSeq, n: u64) -> Result<ShiftDecision> {
    let jn = unilateral_jn_weights(w, n)?;
    Ok(ShiftDecision {
        stable: jn.exceptional == w.exceptional,
        refutation: None,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Multiplicity {
    Finite(u64),
    Infinite,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum UnitaryPart {
    Absent,
    Diagonal { spectrum: AngleSet },
    CircleSpectrum,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Descriptor {
    /// Wold form `S^(alpha) + U`.
    Isometry { shift_multiplicity: Multiplicity, unitary: UnitaryPart },
    Normal { circle_spectrum: bool },
}

impl Descriptor {
    /// `isometry:<alpha|inf>[;circle|;<angle set>]`, `normal:circle`, `normal:other`.
    pub fn parse(text: &str) -> Result<Self> {
        let (kind, rest) = text
            .split_once(':')
            .ok_or_else(|| Error::parse("descriptor", format!("missing kind in {text:?}")))?;
        match kind.trim() {
            "normal" => match rest.trim() {
                "circle" => Ok(Descriptor::Normal { circle_spectrum: true }),
                "other" => Ok(Descriptor::Normal { circle_spectrum: false }),
                r => Err(Error::UnsupportedConfiguration(format!("normal spectrum must be a token, got {r:?}"))),
            },
            "isometry" => {
                let (alpha, unitary) = rest.split_once(';').unwrap_or((rest, ""));
                let shift_multiplicity = match alpha.trim() {
                    "inf" | "omega" => Multiplicity::Infinite,
                    a => Multiplicity::Finite(a.parse().map_err(|_| Error::parse("descriptor", format!("bad multiplicity {a:?}")))?),
                };
                let unitary = match unitary.trim() {
                    "" => UnitaryPart::Absent,
                    "circle" => UnitaryPart::CircleSpectrum,
                    s => UnitaryPart::Diagonal {
                        spectrum: AngleSet::parse(s).map_err(|e| Error::UnsupportedConfiguration(e.to_string()))?,
                    },
                };
                Ok(Descriptor::Isometry {
                    shift_multiplicity,
                    unitary,
                })
            }
            k => Err(Error::parse("descriptor", format!("unknown kind {k:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DescriptorVerdict {
    /// Unitarily equivalent to `J_n` of itself.
    Stable,
    /// Approximately unitarily equivalent, for every `n >= 2`.
    ApproximatelyStable,
    NotStable,
}

pub fn descriptor_stability(d: &Descriptor, n: u64, depth: usize) -> Result<(DescriptorVerdict, Option<DiagDecision>)> {
    match d {
        Descriptor::Normal { circle_spectrum } => Ok((
            if *circle_spectrum {
                DescriptorVerdict::ApproximatelyStable
            } else {
                DescriptorVerdict::NotStable
            },
            None,
        )),
        Descriptor::Isometry { unitary, .. } => match unitary {
            UnitaryPart::Absent => Ok((DescriptorVerdict::Stable, None)),
            UnitaryPart::CircleSpectrum => Ok((DescriptorVerdict::ApproximatelyStable, None)),
            UnitaryPart::Diagonal { spectrum } => {
                let dec = diag_stability_decide(spectrum, n, depth)?;
                let verdict = if dec.stable {
                    DescriptorVerdict::Stable
                } else {
                    DescriptorVerdict::NotStable
                };
                Ok((verdict, Some(dec)))
            }
        },
    }
}

/// `n^k` lies in `q Z` for some `k` iff every prime factor of `q` divides `n`.
pub fn power_reaches_multiple(n: u64, q: &BigInt) -> bool {
    let n = BigInt::from(n);
    let mut q = q.abs();
    loop {
        let g = q.gcd(&n);
        if g.is_one() {
            return q.is_one();
        }
        while (&q % &g).is_zero() {
            q /= &g;
        }
    }
}
