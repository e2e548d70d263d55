//! The block matrix `J_n(A)` and its exact identities.

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::Serialize;

use super::gaussian::G;
use super::matrix::ExactMatrix;
use crate::error::{Error, Result};

pub const FLOAT_TOLERANCE: f64 = 1e-12;

/// Identity blocks on the block superdiagonal, `A` in the bottom-left block.
pub fn build_jn(a: &ExactMatrix, n: usize) -> Result<ExactMatrix> {
    let d = a.require_square("J_n argument")?;
    if n < 2 {
        return Err(Error::invalid(format!("J_n needs n >= 2, got {n}")));
    }
    let mut out = ExactMatrix::zeros(n * d, n * d);
    let id = ExactMatrix::identity(d);
    for k in 0..n - 1 {
        out.set_block(k * d, (k + 1) * d, &id);
    }
    out.set_block((n - 1) * d, 0, a);
    Ok(out)
}

/// `n`-fold direct sum `A + ... + A`.
pub fn ampliation(a: &ExactMatrix, n: usize) -> ExactMatrix {
    let mut out = a.clone();
    for _ in 1..n {
        out = out.direct_sum(a);
    }
    out
}

/// `(J_n(A)^n == A^(n), det(xI - J_n(A)) == charpoly_A(x^n))`.
pub fn root_identity_check(a: &ExactMatrix, n: usize) -> Result<(bool, bool)> {
    let j = build_jn(a, n)?;
    let power = j.pow(n as u32)? == ampliation(a, n);
    let chars = j.charpoly()? == a.charpoly()?.compose_power(n);
    Ok((power, chars))
}

#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    pub name: String,
    /// Present for exact witnesses.
    pub matrix: Option<ExactMatrix>,
    pub exact: bool,
    /// Max-entry residual; zero in exact mode.
    pub residual: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SymmetryWitnesses {
    pub rotation: Witness,
    pub direct_sum: Witness,
    pub scaling: Witness,
}

impl SymmetryWitnesses {
    pub fn all_hold(&self) -> bool {
        self.rotation.holds && self.direct_sum.holds && self.scaling.holds
    }
}

/// Primitive `n`-th root of unity when it lies in `Q(i)`.
pub fn exact_root_of_unity(n: usize) -> Option<G> {
    match n {
        1 => Some(G::one()),
        2 => Some(G::from_int(-1)),
        4 => Some(G::i()),
        _ => None,
    }
}

fn block_diag_powers(theta: &G, d: usize, n: usize) -> ExactMatrix {
    let entries: Vec<G> = (0..n).flat_map(|k| std::iter::repeat_n(theta.pow(k as u32), d)).collect();
    ExactMatrix::diagonal(&entries)
}

type CMat = (usize, Vec<Complex64>);

fn cmul(a: &CMat, b: &CMat) -> CMat {
    let n = a.0;
    let mut out = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        for k in 0..n {
            let x = a.1[i * n + k];
            if x == Complex64::new(0.0, 0.0) {
                continue;
            }
            for j in 0..n {
                out[i * n + j] += x * b.1[k * n + j];
            }
        }
    }
    (n, out)
}

fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn rotation_witness(a: &ExactMatrix, n: usize, allow_float: bool) -> Result<Witness> {
    let d = a.rows();
    let j = build_jn(a, n)?;
    if let Some(theta) = exact_root_of_unity(n) {
        let v = block_diag_powers(&theta, d, n);
        let holds = &(&v.adjoint() * &j) * &v == j.scale(&theta);
        return Ok(Witness {
            name: format!("V*J_{n}(A)V = theta J_{n}(A)"),
            matrix: Some(v),
            exact: true,
            residual: 0.0,
            holds,
        });
    }
    if !allow_float {
        return Err(Error::UnsupportedConfiguration(format!(
            "primitive {n}-th root of unity is not Gaussian-rational; enable float mode"
        )));
    }
    let theta = Complex64::from_polar(1.0, std::f64::consts::TAU / n as f64);
    let size = n * d;
    let mut v = vec![Complex64::new(0.0, 0.0); size * size];
    let mut v_adj = v.clone();
    for k in 0..n {
        let t = theta.powu(k as u32);
        for r in 0..d {
            let i = k * d + r;
            v[i * size + i] = t;
            v_adj[i * size + i] = t.conj();
        }
    }
    let jc = (size, j.to_complex());
    let lhs = cmul(&cmul(&(size, v_adj), &jc), &(size, v));
    let rhs: Vec<Complex64> = jc.1.iter().map(|x| x * theta).collect();
    let residual = max_diff(&lhs.1, &rhs);
    Ok(Witness {
        name: format!("V*J_{n}(A)V = theta J_{n}(A) [float]"),
        matrix: None,
        exact: false,
        residual,
        holds: residual <= FLOAT_TOLERANCE,
    })
}

/// Permutation `P` with `P^T J_n(A + B) P = J_n(A) + J_n(B)`.
pub fn direct_sum_witness(a: &ExactMatrix, b: &ExactMatrix, n: usize) -> Result<(ExactMatrix, bool)> {
    let da = a.require_square("A")?;
    let db = b.require_square("B")?;
    let d = da + db;
    let size = n * d;
    // column c of P maps J_n(A)+J_n(B) coordinates to J_n(A+B) coordinates
    let mut p = ExactMatrix::zeros(size, size);
    for k in 0..n {
        for r in 0..da {
            p.set(k * d + r, k * da + r, G::one());
        }
        for r in 0..db {
            p.set(k * d + da + r, n * da + k * db + r, G::one());
        }
    }
    let lhs = &(&p.transpose() * &build_jn(&a.direct_sum(b), n)?) * &p;
    let holds = lhs == build_jn(a, n)?.direct_sum(&build_jn(b, n)?);
    Ok((p, holds))
}

fn scaling_witness(a: &ExactMatrix, kappa: &G, allow_float: bool) -> Result<Witness> {
    let d = a.rows();
    if kappa.is_zero() {
        return Err(Error::invalid("kappa must be non-zero"));
    }
    let lhs_j = build_jn(&a.scale(kappa), 2)?;
    if let Some(s) = kappa.sqrt() {
        let entries: Vec<G> = (0..2 * d).map(|i| if i < d { G::one() } else { s.clone() }).collect();
        let dm = ExactMatrix::diagonal(&entries);
        let holds = &(&dm.inverse()? * &lhs_j) * &dm == build_jn(a, 2)?.scale(&s);
        return Ok(Witness {
            name: "D^-1 J_2(kA) D = k^(1/2) J_2(A)".into(),
            matrix: Some(dm),
            exact: true,
            residual: 0.0,
            holds,
        });
    }
    if !allow_float {
        return Err(Error::UnsupportedConfiguration(format!(
            "kappa = {kappa} has no Gaussian-rational square root; enable float mode"
        )));
    }
    let s = kappa.to_complex().sqrt();
    let size = 2 * d;
    let mut dm = vec![Complex64::new(0.0, 0.0); size * size];
    let mut dinv = dm.clone();
    for i in 0..size {
        let v = if i < d { Complex64::new(1.0, 0.0) } else { s };
        dm[i * size + i] = v;
        dinv[i * size + i] = v.inv();
    }
    let lhs = cmul(&cmul(&(size, dinv), &(size, lhs_j.to_complex())), &(size, dm));
    let rhs: Vec<Complex64> = build_jn(a, 2)?.to_complex().into_iter().map(|x| x * s).collect();
    let residual = max_diff(&lhs.1, &rhs);
    Ok(Witness {
        name: "D^-1 J_2(kA) D = k^(1/2) J_2(A) [float]".into(),
        matrix: None,
        exact: false,
        residual,
        holds: residual <= FLOAT_TOLERANCE,
    })
}

/// Rotation, direct-sum and scaling witnesses. The direct-sum witness uses
/// `b` as the second summand.
pub fn symmetry_witnesses(a: &ExactMatrix, b: &ExactMatrix, n: usize, kappa: &G, allow_float: bool) -> Result<SymmetryWitnesses> {
    a.require_square("A")?;
    let rotation = rotation_witness(a, n, allow_float)?;
    let (p, holds) = direct_sum_witness(a, b, n)?;
    let direct_sum = Witness {
        name: format!("P^T J_{n}(A+B) P = J_{n}(A) + J_{n}(B)"),
        matrix: Some(p),
        exact: true,
        residual: 0.0,
        holds,
    };
    let scaling = scaling_witness(a, kappa, allow_float)?;
    Ok(SymmetryWitnesses {
        rotation,
        direct_sum,
        scaling,
    })
}
