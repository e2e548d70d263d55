//! Seeded generators for test and suite matrices.

use num_traits::One;
use rand::Rng;

use super::gaussian::G;
use super::matrix::ExactMatrix;
use crate::exact::{int, rat};

/// Entries `(a + b i)/q` with `|a|, |b| <= bound` and `q` in `1..=3`.
pub fn gaussian_matrix<R: Rng>(rng: &mut R, d: usize, bound: i64) -> ExactMatrix {
    let data = (0..d * d)
        .map(|_| {
            let q = rng.gen_range(1..=3);
            G::new(rat(rng.gen_range(-bound..=bound), q), rat(rng.gen_range(-bound..=bound), q))
        })
        .collect();
    ExactMatrix::new(d, d, data).expect("square")
}

/// Product of random elementary integer operations: determinant +-1.
pub fn unimodular<R: Rng>(rng: &mut R, d: usize, steps: usize) -> ExactMatrix {
    let mut m = ExactMatrix::identity(d);
    if d < 2 {
        return m;
    }
    for _ in 0..steps {
        let i = rng.gen_range(0..d);
        let mut j = rng.gen_range(0..d - 1);
        if j >= i {
            j += 1;
        }
        let c = G::from_int(*[-1, 1, 2].get(rng.gen_range(0..3)).expect("index"));
        let mut e = ExactMatrix::identity(d);
        e.set(i, j, c);
        m = &m * &e;
    }
    m
}

pub fn jordan_block(lambda: &G, k: usize) -> ExactMatrix {
    let mut m = ExactMatrix::scalar(k, lambda.clone());
    for i in 0..k.saturating_sub(1) {
        m.set(i, i + 1, G::one());
    }
    m
}

/// Direct sum of Jordan blocks of total size `d`, eigenvalues drawn from
/// `eigenvalues`.
pub fn jordan_type<R: Rng>(rng: &mut R, d: usize, eigenvalues: &[i64]) -> ExactMatrix {
    let mut blocks: Vec<ExactMatrix> = Vec::new();
    let mut left = d;
    while left > 0 {
        let k = rng.gen_range(1..=left.min(3));
        let lambda = G::from_int(eigenvalues[rng.gen_range(0..eigenvalues.len())]);
        blocks.push(jordan_block(&lambda, k));
        left -= k;
    }
    let mut it = blocks.into_iter();
    let first = it.next().expect("d > 0");
    it.fold(first, |acc, b| acc.direct_sum(&b))
}

/// `R A R^-1` for a unimodular `R`.
pub fn conjugate_unimodular<R: Rng>(rng: &mut R, a: &ExactMatrix) -> ExactMatrix {
    let r = unimodular(rng, a.rows(), 2 * a.rows());
    &(&r * a) * &r.inverse().expect("unimodular")
}

/// Skew-Hermitian `K` with small Gaussian-integer entries.
pub fn skew_hermitian<R: Rng>(rng: &mut R, d: usize) -> ExactMatrix {
    let mut k = ExactMatrix::zeros(d, d);
    for i in 0..d {
        k.set(i, i, G::new(int(0), int(rng.gen_range(-2..=2))));
        for j in i + 1..d {
            let z = G::new(int(rng.gen_range(-2..=2)), int(rng.gen_range(-2..=2)));
            k.set(j, i, -z.conj());
            k.set(i, j, z);
        }
    }
    k
}

/// Cayley transform `(I - K)(I + K)^-1`, unitary for skew-Hermitian `K`.
pub fn cayley_unitary(k: &ExactMatrix) -> ExactMatrix {
    let id = ExactMatrix::identity(k.rows());
    let plus = (&id + k).inverse().expect("I + K is invertible for skew-Hermitian K");
    &(&id - k) * &plus
}

pub fn rational_unitary<R: Rng>(rng: &mut R, d: usize) -> ExactMatrix {
    cayley_unitary(&skew_hermitian(rng, d))
}

pub fn is_unitary(u: &ExactMatrix) -> bool {
    (&u.adjoint() * u).is_identity()
}
