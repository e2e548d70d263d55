//! Commutant of `J_2(A)` and intertwiners `S J_2(A) = J_2(B) S`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::gaussian::G;
use super::jn::build_jn;
use super::matrix::ExactMatrix;
use super::similarity::intertwiner_space;
use crate::certificate::{Certificate, Relation};
use crate::error::{Error, Result};
use crate::exact::int;

pub const RECOVERY_TRIALS: usize = 32;

/// Quadrants `(Z1, Z2, Z3, Z4)` of a `2d x 2d` matrix.
pub fn quadrants(z: &ExactMatrix, d: usize) -> (ExactMatrix, ExactMatrix, ExactMatrix, ExactMatrix) {
    (z.block(0, 0, d, d), z.block(0, d, d, d), z.block(d, 0, d, d), z.block(d, d, d, d))
}

/// Basis of `{Z : Z J_2(A) = J_2(A) Z}`.
pub fn commutant_basis(a: &ExactMatrix) -> Result<Vec<ExactMatrix>> {
    let j = build_jn(a, 2)?;
    intertwiner_space(&j, &j)
}

/// `Z = [[Z1, Z2], [Z2 A, Z1]]` with `Z1`, `Z2` commuting with `A`.
pub fn has_commutant_form(a: &ExactMatrix, z: &ExactMatrix) -> bool {
    let d = a.rows();
    let (z1, z2, z3, z4) = quadrants(z, d);
    z3 == &z2 * a && z4 == z1 && &z1 * a == a * &z1 && &z2 * a == a * &z2
}

pub fn commutant_structure_check(a: &ExactMatrix, z: &ExactMatrix) -> Result<Certificate> {
    let d = a.require_square("A")?;
    let j = build_jn(a, 2)?;
    if z.rows() != 2 * d || z.cols() != 2 * d || (z * &j) != (&j * z) {
        return Err(Error::invalid("Z does not commute with J_2(A)"));
    }
    let (z1, z2, z3, z4) = quadrants(z, d);
    let mut cert = Certificate::new("commutant_structure").param("d", d);
    cert.assert_true("Z3 == Z2 A", z3 == &z2 * a);
    cert.assert_true("Z4 == Z1", z4 == z1);
    cert.assert_true("Z1 A == A Z1", &z1 * a == a * &z1);
    cert.assert_true("Z2 A == A Z2", &z2 * a == a * &z2);
    let basis = commutant_basis(a)?;
    cert.inform("dim commutant(J_2(A))", int(basis.len() as i64), Relation::Ge, int(0));
    for (k, m) in basis.iter().enumerate() {
        cert.assert_true(format!("basis[{k}] has block form"), has_commutant_form(a, m));
    }
    Ok(cert)
}

fn check_intertwiner(a: &ExactMatrix, b: &ExactMatrix, s: &ExactMatrix) -> Result<usize> {
    let d = a.require_square("A")?;
    if b.require_square("B")? != d || s.rows() != 2 * d || s.cols() != 2 * d {
        return Err(Error::invalid("A, B must be d x d and S 2d x 2d"));
    }
    if !s.is_invertible() {
        return Err(Error::invalid("S is not invertible"));
    }
    if (s * &build_jn(a, 2)?) != (&build_jn(b, 2)? * s) {
        return Err(Error::invalid("S J_2(A) != J_2(B) S"));
    }
    Ok(d)
}

/// Block identities forced on an invertible intertwiner of `J_2(A)`, `J_2(B)`.
pub fn j2_block_identities(a: &ExactMatrix, b: &ExactMatrix, s: &ExactMatrix) -> Result<Certificate> {
    let d = check_intertwiner(a, b, s)?;
    let (s1, s2, s3, s4) = quadrants(s, d);
    let mut cert = Certificate::new("j2_intertwiner").param("d", d);
    cert.assert_true("S1 == S4", s1 == s4);
    cert.assert_true("S3 == S2 A", s3 == &s2 * a);
    cert.assert_true("S2 A == B S2", &s2 * a == b * &s2);
    cert.assert_true("S1 A == B S1", &s1 * a == b * &s1);
    Ok(cert)
}

#[derive(Clone, Debug)]
pub struct J2Analysis {
    pub certificate: Certificate,
    /// Invertible `W1` with `W1 A = B W1`.
    pub w1: ExactMatrix,
    pub trials_used: usize,
}

/// Block identities, then a seeded search for `Z` in the commutant of `J_2(A)`
/// making `W1 = S2 A Z2 + S1 Z1` invertible.
pub fn j2_intertwiner_analysis(a: &ExactMatrix, b: &ExactMatrix, s: &ExactMatrix, seed: u64) -> Result<J2Analysis> {
    let mut certificate = j2_block_identities(a, b, s)?;
    let d = a.rows();
    let (s1, s2, _, _) = quadrants(s, d);
    let basis = commutant_basis(a)?;
    let s2a = &s2 * a;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for trial in 1..=RECOVERY_TRIALS {
        let mut z = ExactMatrix::zeros(2 * d, 2 * d);
        for m in &basis {
            z = &z + &m.scale(&G::from_int(rng.gen_range(-2..=2)));
        }
        let (z1, z2, _, _) = quadrants(&z, d);
        let w1 = &(&s2a * &z2) + &(&s1 * &z1);
        if w1.is_invertible() {
            certificate.set_param("recovery_trials", trial);
            certificate.assert_true("W1 invertible", true);
            certificate.assert_true("W1 A == B W1", (&w1 * a) == (b * &w1));
            return Ok(J2Analysis {
                certificate,
                w1,
                trials_used: trial,
            });
        }
    }
    Err(Error::RecoveryInconclusive { trials: RECOVERY_TRIALS })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nilpotent_commutant_has_dimension_four() {
        let a = ExactMatrix::from_ints(&[[0, 1], [0, 0]]);
        let basis = commutant_basis(&a).unwrap();
        assert_eq!(basis.len(), 4);
        assert!(basis.iter().all(|z| has_commutant_form(&a, z)));
    }

    #[test]
    fn structure_examples() {
        let a = ExactMatrix::from_ints(&[[1, 2], [0, 3]]);
        assert!(commutant_structure_check(&a, &ExactMatrix::identity(4)).unwrap().passed());
        let j = build_jn(&a, 2).unwrap();
        assert!(commutant_structure_check(&a, &j).unwrap().passed());
        let bad = ExactMatrix::from_ints(&[[1, 0, 0, 0], [0, 2, 0, 0], [0, 0, 3, 0], [0, 0, 0, 4]]);
        assert!(commutant_structure_check(&a, &bad).is_err());
    }

    #[test]
    fn direct_sum_intertwiner_recovers() {
        let a = ExactMatrix::from_ints(&[[1, 1], [0, 2]]);
        let w = ExactMatrix::from_ints(&[[1, 1], [1, 2]]);
        let b = &(&w * &a) * &w.inverse().unwrap();
        let s = w.direct_sum(&w);
        let r = j2_intertwiner_analysis(&a, &b, &s, 7).unwrap();
        assert!(r.certificate.passed());
        assert_eq!(&r.w1 * &a, &b * &r.w1);
    }

    #[test]
    fn s_equal_to_j2() {
        let a = ExactMatrix::from_ints(&[[2, 1], [0, 3]]);
        let s = build_jn(&a, 2).unwrap();
        let cert = j2_block_identities(&a, &a, &s).unwrap();
        assert!(cert.passed());
        let r = j2_intertwiner_analysis(&a, &a, &s, 1).unwrap();
        assert_eq!(&r.w1 * &a, &a * &r.w1);
    }

    #[test]
    fn non_intertwiner_rejected() {
        let a = ExactMatrix::from_ints(&[[1]]);
        let b = ExactMatrix::from_ints(&[[2]]);
        assert!(j2_block_identities(&a, &b, &ExactMatrix::identity(2)).is_err());
    }
}
