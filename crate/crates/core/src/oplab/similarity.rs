//! Similarity over `Q(i)`: decisions via invariant factors, explicit witnesses,
//! halving of doubled matrices and spectral splitting of intertwiners.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::gaussian::G;
use super::matrix::ExactMatrix;
use super::smith::InvariantFactors;
use crate::certificate::{Certificate, Relation};
use crate::error::{Error, Result};
use crate::exact::Q;

pub fn invariant_factors(a: &ExactMatrix) -> Result<InvariantFactors> {
    InvariantFactors::of(a)
}

fn same_square_size(a: &ExactMatrix, b: &ExactMatrix) -> Result<usize> {
    let n = a.require_square("A")?;
    if b.require_square("B")? != n {
        return Err(Error::invalid(format!("size mismatch: {n} vs {}", b.rows())));
    }
    Ok(n)
}

pub fn similar_decide(a: &ExactMatrix, b: &ExactMatrix) -> Result<bool> {
    same_square_size(a, b)?;
    Ok(invariant_factors(a)? == invariant_factors(b)?)
}

/// Basis of `{X : X A - B X = 0}` for `A` of size `p` and `B` of size `q`.
pub fn intertwiner_space(a: &ExactMatrix, b: &ExactMatrix) -> Result<Vec<ExactMatrix>> {
    let p = a.require_square("A")?;
    let q = b.require_square("B")?;
    // vec(X A) = (A^T kron I_q) vec X,  vec(B X) = (I_p kron B) vec X
    let op = a.transpose().kron(&ExactMatrix::identity(q)).checked_sub(&ExactMatrix::identity(p).kron(b))?;
    Ok(op.nullspace().into_iter().map(|v| ExactMatrix::unvec(&v, q, p)).collect())
}

const WITNESS_TRIALS: usize = 64;

/// Invertible `R` with `B = R A R^-1`, checked by exact multiplication.
///
/// `R` is drawn from the solution space of `B R = R A`: basis elements first,
/// then seeded integer combinations.
pub fn similarity_witness(a: &ExactMatrix, b: &ExactMatrix) -> Result<ExactMatrix> {
    same_square_size(a, b)?;
    if !similar_decide(a, b)? {
        return Err(Error::NoWitness);
    }
    if a == b {
        return Ok(ExactMatrix::identity(a.rows()));
    }
    let basis = intertwiner_space(a, b)?;
    let verified = |r: &ExactMatrix| r.is_invertible() && (b * r) == (r * a);
    if let Some(r) = basis.iter().find(|r| verified(r)) {
        return Ok(r.clone());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..WITNESS_TRIALS {
        let mut r = ExactMatrix::zeros(a.rows(), a.cols());
        for m in &basis {
            let c = G::from_int(rng.gen_range(-50..=50));
            r = &r + &m.scale(&c);
        }
        if verified(&r) {
            return Ok(r);
        }
    }
    Err(Error::NoWitness)
}

/// Invariant factors of any `A` with `A + A` similar to `M`.
pub fn kaplansky_halve(m: &ExactMatrix) -> Result<InvariantFactors> {
    let n = m.require_square("M")?;
    if n % 2 != 0 {
        return Err(Error::NotADouble(format!("odd size {n}")));
    }
    let f = invariant_factors(m)?;
    let fs = f.factors();
    if fs.len() % 2 != 0 || fs.chunks(2).any(|c| c[0] != c[1]) {
        return Err(Error::NotADouble(format!("invariant factors {f} do not pair up")));
    }
    InvariantFactors::new(fs.iter().step_by(2).cloned().collect())
}

/// Kernel dimension of `X -> X A - B X`.
pub fn sylvester_kernel_dim(a: &ExactMatrix, b: &ExactMatrix) -> Result<usize> {
    Ok(intertwiner_space(a, b)?.len())
}

/// For `T (A1 + A2) = (B1 + B2) T` with separated spectra, the off-diagonal
/// blocks of `T` vanish and the diagonal ones are invertible.
pub fn rosenblum_split_check(a1: &ExactMatrix, a2: &ExactMatrix, b1: &ExactMatrix, b2: &ExactMatrix, t: &ExactMatrix) -> Result<Certificate> {
    let d1 = a1.require_square("A1")?;
    let d2 = a2.require_square("A2")?;
    let e1 = b1.require_square("B1")?;
    let e2 = b2.require_square("B2")?;
    if t.rows() != e1 + e2 || t.cols() != d1 + d2 {
        return Err(Error::invalid("T must map the A-blocks onto the B-blocks"));
    }
    let res_a2_b1 = a2.charpoly()?.resultant(&b1.charpoly()?);
    let res_a1_b2 = a1.charpoly()?.resultant(&b2.charpoly()?);
    for (res, what) in [(&res_a2_b1, "A2, B1"), (&res_a1_b2, "A1, B2")] {
        if res.is_zero() {
            return Err(Error::SpectraNotDisjoint(format!("resultant of charpolys of {what} vanishes")));
        }
    }
    let mut cert = Certificate::new("rosenblum_split")
        .param("dims", format!("{d1}+{d2} -> {e1}+{e2}"));
    cert.assert("|res(chi_A2, chi_B1)|^2 != 0", res_a2_b1.norm_sqr(), Relation::Ne, Q::zero());
    cert.assert("|res(chi_A1, chi_B2)|^2 != 0", res_a1_b2.norm_sqr(), Relation::Ne, Q::zero());
    let a = a1.direct_sum(a2);
    let b = b1.direct_sum(b2);
    cert.assert_true("T invertible", t.is_invertible());
    cert.assert_true("T (A1+A2) == (B1+B2) T", (t * &a) == (&b * t));
    let t1 = t.block(0, 0, e1, d1);
    let t2 = t.block(0, d1, e1, d2);
    let t3 = t.block(e1, 0, e2, d1);
    let t4 = t.block(e1, d1, e2, d2);
    cert.assert_true("T2 == 0", t2.is_zero());
    cert.assert_true("T3 == 0", t3.is_zero());
    cert.assert_true("T1 invertible", t1.is_invertible());
    cert.assert_true("T4 invertible", t4.is_invertible());
    cert.assert("dim ker(X -> X A2 - B1 X)", Q::from_integer(sylvester_kernel_dim(a2, b1)?.into()), Relation::Eq, Q::zero());
    cert.assert("dim ker(X -> X A1 - B2 X)", Q::from_integer(sylvester_kernel_dim(a1, b2)?.into()), Relation::Eq, Q::zero());
    Ok(cert)
}
