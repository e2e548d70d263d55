//! Batch driver: configuration, certificate families and reports.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bellring;
use crate::certificate::{Certificate, Relation};
use crate::error::{Error, Result};
use crate::exact::{int, rat, Q};
use crate::measures::{self, MeasureKind, MeasureSpec};
use crate::oplab::{self, jn, sample, ExactMatrix, G};
use crate::shiftlab::{self, AngleSet, ShiftKind, WeightSeq, WitnessKind};
use crate::weights::{c_n_bound, write_weight_csv, WeightTable};
use crate::words::{b_word, checked_count, ForbiddenSet, DEFAULT_CAP};

pub const WORKERS_ENV: &str = "JNLAB_WORKERS";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Measure,
    Op,
    Diag,
    Shift,
    Bell,
}

impl Family {
    pub const ALL: [Family; 5] = [Family::Measure, Family::Op, Family::Diag, Family::Shift, Family::Bell];

    pub fn name(self) -> &'static str {
        match self {
            Family::Measure => "measure",
            Family::Op => "op",
            Family::Diag => "diag",
            Family::Shift => "shift",
            Family::Bell => "bell",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    pub base: u8,
    /// One measure per entry; an empty string is the empty set.
    pub forbidden: Vec<String>,
    /// `K`: deepest level for weights and the W1 Cauchy chain.
    pub depth: usize,
    /// `M`: depth of the inner approximant.
    pub base_depth: usize,
    /// `D`: cylinder depth for translation, continuity and circle certificates.
    pub cylinder_depth: usize,
    pub n: u32,
    pub seed: u64,
    pub op_trials: usize,
    pub op_size: usize,
    pub angles: Vec<String>,
    pub weights: Vec<String>,
    pub emit: Option<PathBuf>,
    pub report: Option<PathBuf>,
    pub cap: u128,
    pub families: Vec<Family>,
    pub timings: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            base: 3,
            forbidden: vec![String::new(), "1".into()],
            depth: 6,
            base_depth: 2,
            cylinder_depth: 6,
            n: 2,
            seed: 42,
            op_trials: 10,
            op_size: 4,
            angles: vec!["class:0@2".into(), "single:0".into(), "rotated:1/3+0@2".into()],
            weights: vec![
                "bilateral;".into(),
                "bilateral;0:2".into(),
                "bilateral;0:2,5:3".into(),
                "unilateral;".into(),
                "unilateral;0:2".into(),
            ],
            emit: None,
            report: None,
            cap: DEFAULT_CAP,
            families: Family::ALL.to_vec(),
            timings: false,
        }
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::parse(format!("--{key}"), format!("not a valid number: {value:?}")))
}

/// Splits a list value on `|`; the value `""` is a single empty entry.
fn list(value: &str) -> Vec<String> {
    value.split('|').map(|s| s.trim().to_string()).collect()
}

impl SuiteConfig {
    /// Applies one `key = value` setting; keys mirror the long flags.
    pub fn apply(&mut self, key: &str, value: &str) -> Result<()> {
        let key = key.trim().trim_start_matches("--");
        match key {
            "N" => self.base = parse_num(key, value)?,
            "forbidden" => self.forbidden = list(value),
            "depth" => self.depth = parse_num(key, value)?,
            "base-depth" => self.base_depth = parse_num(key, value)?,
            "cylinder-depth" => self.cylinder_depth = parse_num(key, value)?,
            "n" => self.n = parse_num(key, value)?,
            "seed" => self.seed = parse_num(key, value)?,
            "op-trials" => self.op_trials = parse_num(key, value)?,
            "op-size" => self.op_size = parse_num(key, value)?,
            "angles" => self.angles = list(value).into_iter().filter(|s| !s.is_empty()).collect(),
            "weights" => self.weights = list(value).into_iter().filter(|s| !s.is_empty()).collect(),
            "emit" => self.emit = Some(PathBuf::from(value.trim())),
            "report" => self.report = Some(PathBuf::from(value.trim())),
            "cap" => self.cap = parse_num(key, value)?,
            "families" => {
                let mut fams = Vec::new();
                for name in value.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                    let f = Family::ALL
                        .into_iter()
                        .find(|f| f.name() == name)
                        .ok_or_else(|| Error::parse("--families", format!("unknown family {name:?}")))?;
                    fams.push(f);
                }
                fams.sort();
                fams.dedup();
                self.families = fams;
            }
            "timings" => {
                self.timings = match value.trim() {
                    "true" | "1" | "yes" => true,
                    "false" | "0" | "no" => false,
                    v => return Err(Error::parse("--timings", format!("expected a boolean, got {v:?}"))),
                }
            }
            _ => return Err(Error::parse(format!("--{key}"), "unknown key")),
        }
        Ok(())
    }

    /// Flat `key = value` text; `#` starts a comment.
    pub fn apply_text(&mut self, text: &str, origin: &str) -> Result<()> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let ctx = format!("{origin}:{}", lineno + 1);
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::parse(ctx.clone(), "expected key = value"))?;
            self.apply(k, v).map_err(|e| match e {
                Error::Parse { message, .. } => Error::parse(ctx.clone(), message),
                other => other,
            })?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |flag: &str, m: String| Err(Error::parse(format!("--{flag}"), m));
        if self.base < 3 {
            return bad("N", format!("N >= 3 required, got {}", self.base));
        }
        if self.n < 2 {
            return bad("n", format!("n >= 2 required, got {}", self.n));
        }
        if self.cylinder_depth < 2 {
            return bad("cylinder-depth", "cylinder depth must be >= 2".into());
        }
        if self.op_size == 0 {
            return bad("op-size", "operator size must be positive".into());
        }
        for f in &self.forbidden {
            ForbiddenSet::parse(f, self.base).map_err(|e| Error::parse("--forbidden", e.to_string()))?;
        }
        for a in &self.angles {
            AngleSet::parse(a).map_err(|e| Error::parse("--angles", e.to_string()))?;
        }
        for w in &self.weights {
            WeightSeq::parse(w).map_err(|e| Error::parse("--weights", e.to_string()))?;
        }
        Ok(())
    }

    pub fn forbidden_sets(&self) -> Result<Vec<ForbiddenSet>> {
        self.forbidden.iter().map(|f| ForbiddenSet::parse(f, self.base)).collect()
    }

    /// Config echo for reports; output paths are left out so reports written
    /// to different places stay comparable.
    pub fn echo(&self) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        m.insert("N".into(), self.base.to_string());
        m.insert("forbidden".into(), self.forbidden.join("|"));
        m.insert("depth".into(), self.depth.to_string());
        m.insert("base-depth".into(), self.base_depth.to_string());
        m.insert("cylinder-depth".into(), self.cylinder_depth.to_string());
        m.insert("n".into(), self.n.to_string());
        m.insert("seed".into(), self.seed.to_string());
        m.insert("op-trials".into(), self.op_trials.to_string());
        m.insert("op-size".into(), self.op_size.to_string());
        m.insert("angles".into(), self.angles.join("|"));
        m.insert("weights".into(), self.weights.join("|"));
        m.insert("cap".into(), self.cap.to_string());
        m.insert("families".into(), self.families.iter().map(|f| f.name()).collect::<Vec<_>>().join(","));
        m
    }
}

/// Reads an optional config file, then applies flag overrides in order.
pub fn parse_config(path: Option<&Path>, flags: &[(String, String)]) -> Result<SuiteConfig> {
    let mut cfg = SuiteConfig::default();
    if let Some(p) = path {
        let text = fs::read_to_string(p).map_err(|e| Error::parse(p.display().to_string(), e.to_string()))?;
        cfg.apply_text(&text, &p.display().to_string())?;
    }
    for (k, v) in flags {
        cfg.apply(k, v)?;
    }
    cfg.validate()?;
    Ok(cfg)
}

#[derive(Clone, Debug, Serialize)]
pub struct Timing {
    pub family: String,
    pub seconds: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub config: BTreeMap<String, String>,
    pub certificates: Vec<Certificate>,
    /// Wall-clock timings, only when requested: they would break byte-identity.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<Vec<Timing>>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.certificates.iter().all(|c| c.passed() || c.is_skipped())
    }

    pub fn counts(&self) -> (usize, usize, usize) {
        let pass = self.certificates.iter().filter(|c| c.passed()).count();
        let skip = self.certificates.iter().filter(|c| c.is_skipped()).count();
        (pass, self.certificates.len() - pass - skip, skip)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises") + "\n"
    }
}

/// A certificate, or a skip record when a resource cap or unsupported
/// configuration stops it.
fn guarded(name: &str, f: impl FnOnce() -> Result<Certificate>) -> Certificate {
    match f() {
        Ok(c) => c,
        Err(e @ (Error::EnumerationTooLarge { .. } | Error::UnsupportedConfiguration(_) | Error::Undecided { .. })) => {
            Certificate::skipped(name, e.to_string())
        }
        Err(e) => {
            let mut c = Certificate::new(name);
            c.note(format!("error: {e}"));
            c.assert_true("completed without error", false);
            c
        }
    }
}

fn set_tag(set: &ForbiddenSet) -> String {
    if set.is_empty() {
        "empty".into()
    } else {
        set.indices().iter().map(u32::to_string).collect::<Vec<_>>().join("-")
    }
}

/// `sum p = sum p~ = 1` at every level up to `depth`, and the decay bounds as
/// a maximum ratio per level.
pub fn weight_certificate(set: &ForbiddenSet, depth: usize, cap: u128) -> Result<Certificate> {
    let table = WeightTable::new(set.clone());
    let n = set.base() as u64;
    let c_n = c_n_bound(set.base());
    let mut cert = Certificate::new("weights")
        .param("N", set.base())
        .param("B", set)
        .param("K", depth)
        .param("C_N", crate::exact::fmt_q(&c_n));
    for k in 0..=depth {
        let level = table.level(k, cap)?;
        let (mut sp, mut st) = (Q::zero(), Q::zero());
        let (mut max_p, mut max_t) = (Q::zero(), Q::zero());
        let scale = num_traits::pow(int(n as i64 - 1), k);
        for (_, pair) in &level {
            sp += &pair.p;
            st += &pair.p_tilde;
            max_p = max_p.max(&pair.p * &scale / &c_n);
            max_t = max_t.max(&pair.p_tilde * &scale);
        }
        cert.assert(format!("sum p over level {k} == 1"), sp, Relation::Eq, Q::one());
        cert.assert(format!("sum p~ over level {k} == 1"), st, Relation::Eq, Q::one());
        cert.assert(format!("max p(i) (N-1)^{k} / C_N <= 1"), max_p, Relation::Le, Q::one());
        cert.assert(format!("max p~(i) (N-1)^{k} <= 1"), max_t, Relation::Le, Q::one());
    }
    Ok(cert)
}

fn measure_family(cfg: &SuiteConfig) -> Result<Vec<Certificate>> {
    let mut out = Vec::new();
    let sets = cfg.forbidden_sets()?;
    for set in &sets {
        let tag = set_tag(set);
        let named = |c: Certificate| -> Certificate {
            let mut c = c;
            c.name = format!("{}[B={tag}]", c.name);
            c
        };
        let (d, m, k, cap) = (cfg.cylinder_depth, cfg.base_depth, cfg.depth, cfg.cap);
        let jobs: Vec<Box<dyn Fn() -> Certificate + Sync + Send>> = vec![
            Box::new(move || guarded("weights", || weight_certificate(set, k, cap))),
            Box::new(move || guarded("w1_cauchy", || measures::w1_cauchy_certificate(set, k, m, cap))),
            Box::new(move || guarded("translation", || measures::translation_certificate(set, d, m, cap))),
            Box::new(move || guarded("continuity", || measures::continuity_certificate(set, d, m, cap))),
            Box::new(move || guarded("circle_stability", || measures::circle_stability_certificate(set, set.base() as u32, d, m, cap))),
        ];
        let certs: Vec<Certificate> = {
            use rayon::prelude::*;
            jobs.par_iter().map(|j| named(j())).collect()
        };
        out.extend(certs);
        if let Some(&idx) = set.indices().iter().next() {
            let b = b_word(idx, set.base())?;
            let beta = ForbiddenSet::empty(set.base())?;
            for kk in 1..=3 {
                for nn in 0..=2 {
                    let c = guarded("singularity", || measures::singularity_certificate(set, &beta, &b, kk, nn, cap));
                    let mut c = c.param("k", kk).param("n", nn);
                    c.name = format!("{}[B={tag},k={kk},n={nn}]", c.name);
                    out.push(c);
                }
            }
        }
    }
    if let Some(dir) = &cfg.emit {
        emit_csv(cfg, &sets, dir)?;
    }
    Ok(out)
}

/// CDF and weight-table companions for every configured measure.
pub fn emit_csv(cfg: &SuiteConfig, sets: &[ForbiddenSet], dir: &Path) -> Result<Vec<PathBuf>> {
    let io = |path: &Path, e: std::io::Error| Error::Emit {
        path: path.display().to_string(),
        source: e,
    };
    fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
    let mut written = Vec::new();
    for set in sets {
        let tag = set_tag(set);
        let table = WeightTable::new(set.clone());
        let spec = MeasureSpec::new(set.clone(), MeasureKind::Nu, cfg.depth, cfg.base_depth);
        if checked_count(cfg.depth + cfg.base_depth, set.base(), cfg.cap).is_err() {
            continue;
        }
        let cdf = measures::build_cdf_with(&spec, &table, cfg.cap)?;
        let path = dir.join(format!("cdf_nu_N{}_B{tag}_K{}_M{}.csv", set.base(), cfg.depth, cfg.base_depth));
        let mut buf = Vec::new();
        cdf.write_csv(&mut buf).map_err(|e| io(&path, e))?;
        fs::write(&path, buf).map_err(|e| io(&path, e))?;
        written.push(path);

        let rows = table.level(cfg.depth, cfg.cap)?;
        let path = dir.join(format!("weights_N{}_B{tag}_K{}.csv", set.base(), cfg.depth));
        let mut buf = Vec::new();
        write_weight_csv(&rows, &mut buf).map_err(|e| io(&path, e))?;
        fs::write(&path, buf).map_err(|e| io(&path, e))?;
        written.push(path);
    }
    Ok(written)
}

fn op_family(cfg: &SuiteConfig) -> Result<Vec<Certificate>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let d = cfg.op_size;
    let n = cfg.n as usize;
    let trials = cfg.op_trials;
    let seeded = |name: &str| Certificate::new(name).param("seed", cfg.seed).param("trials", trials).param("d", d);

    let mut root = seeded("op_root_identity").param("n", n);
    let mut sim = seeded("op_similarity");
    let mut halve = seeded("op_kaplansky_halving");
    let mut specht = seeded("op_specht");
    let mut commutant = seeded("op_commutant");
    let mut j2 = seeded("op_j2_intertwiner");
    let mut sym = seeded("op_symmetry_witnesses").param("n", n);
    let mut rosen = Vec::new();

    for t in 0..trials {
        let a = sample::gaussian_matrix(&mut rng, d, 3);
        let (p, c) = jn::root_identity_check(&a, n)?;
        root.assert_true(format!("[{t}] J_n(A)^n == A^(n)"), p);
        root.assert_true(format!("[{t}] det(xI - J_n(A)) == chi_A(x^n)"), c);

        let j = sample::jordan_type(&mut rng, d, &[0, 1, 2]);
        let b = sample::conjugate_unimodular(&mut rng, &j);
        sim.assert_true(format!("[{t}] similar(A, R A R^-1)"), oplab::similar_decide(&j, &b)?);
        let r = oplab::similarity_witness(&j, &b)?;
        sim.assert_true(format!("[{t}] witness: B R == R A, R invertible"), (&b * &r) == (&r * &j) && r.is_invertible());

        let h = oplab::kaplansky_halve(&j.direct_sum(&j))?;
        halve.assert_true(format!("[{t}] halve(A + A) == invariant_factors(A)"), h == oplab::invariant_factors(&j)?);

        let small = sample::gaussian_matrix(&mut rng, 2.min(d), 2);
        let u = sample::rational_unitary(&mut rng, small.rows());
        let conj = &(&u.adjoint() * &small) * &u;
        let out = oplab::specht_equiv(&small, &conj, Some(8))?;
        specht.assert_true(format!("[{t}] traces agree for A, U*AU up to length 8"), out.equivalent);

        let ca = sample::jordan_type(&mut rng, 2.min(d), &[0, 1]);
        let basis = oplab::commutant_basis(&ca)?;
        let mut z = ExactMatrix::zeros(2 * ca.rows(), 2 * ca.rows());
        for m in &basis {
            z = &z + &m.scale(&G::from_int(rng.gen_range(-2..=2)));
        }
        let cc = oplab::commutant_structure_check(&ca, &z)?;
        commutant.assert_true(format!("[{t}] commutant structure ({} basis elements)", basis.len()), cc.passed());

        let w = sample::unimodular(&mut rng, ca.rows(), 4);
        let bb = &(&w * &ca) * &w.inverse()?;
        let s = &w.direct_sum(&w) * &(&ExactMatrix::identity(2 * ca.rows()) + &z.scale(&G::real(rat(1, 7))));
        if s.is_invertible() {
            match oplab::j2_intertwiner_analysis(&ca, &bb, &s, cfg.seed.wrapping_add(t as u64)) {
                Ok(r) => {
                    j2.assert_true(format!("[{t}] identities and recovery in {} trials", r.trials_used), r.certificate.passed());
                }
                Err(Error::RecoveryInconclusive { trials }) => {
                    let ids = oplab::j2_block_identities(&ca, &bb, &s)?;
                    j2.assert_true(format!("[{t}] block identities"), ids.passed());
                    j2.note(format!("[{t}] recovery inconclusive after {trials} trials"));
                }
                Err(e) => return Err(e),
            }
        }

        let kappa = G::from_int([1, 4, 9, -4][t % 4]);
        let bsum = sample::gaussian_matrix(&mut rng, 1, 2);
        let wit = jn::symmetry_witnesses(&a, &bsum, n, &kappa, true)?;
        sym.assert_true(format!("[{t}] rotation ({})", if wit.rotation.exact { "exact" } else { "float" }), wit.rotation.holds);
        sym.assert_true(format!("[{t}] direct-sum rearrangement"), wit.direct_sum.holds);
        sym.assert_true(format!("[{t}] scaling"), wit.scaling.holds);

        if t < 3 {
            let a1 = sample::jordan_type(&mut rng, 2, &[1, 2]);
            let a2 = sample::jordan_type(&mut rng, 2, &[5, -1]);
            let r1 = sample::unimodular(&mut rng, 2, 3);
            let r2 = sample::unimodular(&mut rng, 2, 3);
            let b1 = &(&r1 * &a1) * &r1.inverse()?;
            let b2 = &(&r2 * &a2) * &r2.inverse()?;
            let tt = r1.direct_sum(&r2);
            let mut c = guarded("op_rosenblum_split", || oplab::rosenblum_split_check(&a1, &a2, &b1, &b2, &tt));
            c.set_param("trial", t);
            c.name = format!("{}[{t}]", c.name);
            rosen.push(c);
        }
    }
    let mut out = vec![root, sim, halve, specht, commutant, j2, sym];
    out.extend(rosen);
    Ok(out)
}

fn diag_family(cfg: &SuiteConfig) -> Result<Vec<Certificate>> {
    let n = cfg.n as u64;
    let depth = 4;
    let mut out = Vec::new();
    for text in &cfg.angles {
        let name = format!("diag_stability[{text}]");
        out.push(guarded(&name, || {
            let set = AngleSet::parse(text)?;
            let dec = shiftlab::diag_stability_decide(&set, n, depth)?;
            let mut c = Certificate::new(name.clone())
                .param("n", n)
                .param("depth", depth)
                .param("decision", if dec.stable { "stable" } else { "not stable" });
            match &dec.witness {
                Some(w) => {
                    c.set_param("witness", &w.angle);
                    c.set_param("witness_kind", format!("{:?}", w.kind));
                    if w.kind != WitnessKind::FiniteMultiplicity {
                        c.assert_true(format!("{} is outside the set", w.angle), !set.contains(&w.angle, shiftlab::ORBIT_CAP)?);
                        c.assert_true(format!("{} is in the set", w.of), set.contains(&w.of, shiftlab::ORBIT_CAP)?);
                        let rel = match w.kind {
                            WitnessKind::Root => w.angle.times(n) == w.of,
                            _ => w.of.times(n) == w.angle,
                        };
                        c.assert_true("witness is a root or power of a member", rel);
                        for ex in &w.exclusions {
                            if let shiftlab::Exclusion::PowerNotInDenominatorIdeal { m, q } = ex {
                                let q: num_bigint::BigInt = q.parse().expect("integer");
                                c.assert_true(format!("{m}^k is never a multiple of {q}"), !shiftlab::power_reaches_multiple(*m, &q));
                            }
                        }
                    } else {
                        c.assert_true("a finite-multiplicity generator is present", set.generators.iter().any(|g| !g.infinite));
                    }
                }
                None => {
                    c.assert_true("partition is non-empty", !dec.partition.is_empty());
                    for rep in &dec.partition {
                        if let shiftlab::ClassRep::Sn { representative, .. } = rep {
                            c.assert_true(format!("representative {representative} is in the set"), set.contains(representative, shiftlab::ORBIT_CAP)?);
                        }
                    }
                }
            }
            Ok(c)
        }));
    }
    Ok(out)
}

fn shift_family(cfg: &SuiteConfig) -> Result<Vec<Certificate>> {
    let n = cfg.n as u64;
    let mut out = Vec::new();
    for text in &cfg.weights {
        let name = format!("shift_stability[{text}]");
        out.push(guarded(&name, || {
            let w = WeightSeq::parse(text)?;
            let mut c = Certificate::new(name.clone()).param("n", n);
            match w.kind() {
                ShiftKind::Bilateral => {
                    let dec = shiftlab::bilateral_stability_decide(&w, n)?;
                    let jn = shiftlab::shift_jn_weights(&w, n)?;
                    c.set_param("decision", if dec.stable { "stable" } else { "not stable" });
                    let k_max = (w.span() as usize + 1) * n as usize + 2;
                    c.assert_true(
                        format!("|Omega| <= 1 iff k-spectra of W and J_n(W) agree for k <= {k_max}"),
                        dec.stable == shiftlab::spectra_agree(&w, &jn, k_max),
                    );
                    if let (Some(d), Some(dj)) = (w.min_gap(), jn.min_gap()) {
                        c.assert("d(J_n(W))", int(dj), Relation::Eq, int(d * n as i64));
                    }
                    if let Some(r) = &dec.refutation {
                        c.assert_true("separated window absent from the J_n(W) spectrum", !r.window_in_jn_spectrum);
                        c.assert("delta", r.delta.clone(), Relation::Gt, Q::zero());
                    }
                }
                ShiftKind::Unilateral => {
                    let dec = shiftlab::unilateral_stability_decide(&w, n)?;
                    c.set_param("decision", if dec.stable { "stable" } else { "not stable" });
                    c.assert_true("stable iff all weights are 1", dec.stable == w.exceptional().is_empty());
                }
            }
            Ok(c)
        }));
    }
    Ok(out)
}

fn run_family(f: Family, cfg: &SuiteConfig) -> Vec<Certificate> {
    let res = match f {
        Family::Measure => measure_family(cfg),
        Family::Op => op_family(cfg),
        Family::Diag => diag_family(cfg),
        Family::Shift => shift_family(cfg),
        Family::Bell => Ok(bellring::verify_all()),
    };
    res.unwrap_or_else(|e| {
        let mut c = Certificate::new(format!("{}_family", f.name()));
        c.note(format!("error: {e}"));
        c.assert_true("family completed", false);
        vec![c]
    })
}

/// Number of workers from the environment, if set.
pub fn workers_from_env() -> Option<usize> {
    std::env::var(WORKERS_ENV).ok()?.trim().parse().ok().filter(|&n| n > 0)
}

/// Runs the configured families on a worker pool; report order follows the
/// configuration, not completion order.
pub fn run_suite(cfg: &SuiteConfig) -> Report {
    use rayon::prelude::*;
    let work = || -> Vec<(Vec<Certificate>, Timing)> {
        cfg.families
            .par_iter()
            .map(|&f| {
                let start = Instant::now();
                let certs = run_family(f, cfg);
                let t = Timing {
                    family: f.name().into(),
                    seconds: start.elapsed().as_secs_f64(),
                };
                (certs, t)
            })
            .collect()
    };
    let results = match workers_from_env().and_then(|w| rayon::ThreadPoolBuilder::new().num_threads(w).build().ok()) {
        Some(pool) => pool.install(work),
        None => work(),
    };
    let mut certificates = Vec::new();
    let mut timings = Vec::new();
    for (c, t) in results {
        certificates.extend(c);
        timings.push(t);
    }
    Report {
        tool: "jnlab".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        config: cfg.echo(),
        certificates,
        timings: cfg.timings.then_some(timings),
    }
}

pub fn emit_report(report: &Report, path: &Path) -> Result<()> {
    let err = |e| Error::Emit {
        path: path.display().to_string(),
        source: e,
    };
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(err)?;
    }
    let mut f = fs::File::create(path).map_err(err)?;
    f.write_all(report.to_json().as_bytes()).map_err(err)
}

/// Certificates as a CSV summary: one row per certificate.
pub fn write_summary_csv<W: Write>(report: &Report, mut out: W) -> std::io::Result<()> {
    writeln!(out, "name,status,asserted_checks")?;
    for c in &report.certificates {
        let status = match &c.status {
            crate::certificate::Status::Pass => "pass",
            crate::certificate::Status::Fail => "fail",
            crate::certificate::Status::Skipped { .. } => "skipped",
        };
        writeln!(out, "\"{}\",{status},{}", c.name.replace('"', "\"\""), c.checks.iter().filter(|k| k.asserted).count())?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flags(pairs: &[(&str, &str)]) -> Vec<(String, String)> {
        pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
    }

    #[test]
    fn flag_examples() {
        let cfg = parse_config(None, &flags(&[("N", "3"), ("forbidden", "1"), ("depth", "6")])).unwrap();
        assert_eq!((cfg.base, cfg.forbidden.clone(), cfg.depth), (3, vec!["1".to_string()], 6));
        assert!(cfg.forbidden_sets().unwrap()[0].contains_index(1));
        let cfg = parse_config(None, &flags(&[("forbidden", "")])).unwrap();
        assert!(cfg.forbidden_sets().unwrap()[0].is_empty());
        let err = parse_config(None, &flags(&[("N", "2")])).unwrap_err();
        assert!(matches!(err, Error::Parse { .. }), "{err}");
        assert!(parse_config(None, &flags(&[("colour", "red")])).is_err());
    }

    #[test]
    fn config_text_reports_line() {
        let mut cfg = SuiteConfig::default();
        cfg.apply_text("N = 4\n# comment\nforbidden = 1 | 1,3\n", "cfg").unwrap();
        assert_eq!(cfg.base, 4);
        assert_eq!(cfg.forbidden, vec!["1", "1,3"]);
        let err = cfg.apply_text("depth = 3\nbogus = 1\n", "cfg").unwrap_err();
        assert!(err.to_string().contains("cfg:2"), "{err}");
    }

    #[test]
    fn bell_suite_passes() {
        let cfg = parse_config(None, &flags(&[("families", "bell")])).unwrap();
        let r = run_suite(&cfg);
        assert_eq!(r.certificates.len(), 3);
        assert!(r.all_passed());
        assert!(r.timings.is_none());
    }

    #[test]
    fn caps_turn_into_skips() {
        let cfg = parse_config(None, &flags(&[("families", "measure"), ("forbidden", "1"), ("cap", "100")])).unwrap();
        let r = run_suite(&cfg);
        assert!(r.certificates.iter().any(Certificate::is_skipped));
        assert!(r.all_passed());
    }
}
