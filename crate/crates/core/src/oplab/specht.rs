//! Trace comparison over words in `A` and `A*`.
//!
//! Words are visited by length, then lexicographically with `x < y`, where
//! `x = A` and `y = A*`. A word whose joint value `(w(A), w(B))` is a linear
//! combination of earlier joint values has a determined trace difference, and so
//! do all its extensions, so only independent words are extended. When no
//! word of some length survives, agreement is certified for every length.

use num_traits::Zero;
use serde::Serialize;

use super::gaussian::G;
use super::matrix::ExactMatrix;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpechtDifference {
    pub word: String,
    pub trace_a: G,
    pub trace_b: G,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpechtOutcome {
    pub equivalent: bool,
    pub first_difference: Option<SpechtDifference>,
    pub max_length: usize,
    /// Words whose traces were compared.
    pub words_checked: usize,
    /// Agreement holds for all word lengths, not just up to `max_length`.
    pub exhausted: bool,
}

pub fn default_length(d: usize) -> usize {
    2 * d * d
}

/// Incremental row-echelon basis for linear independence tests.
struct Echelon {
    rows: Vec<(usize, Vec<G>)>,
}

impl Echelon {
    fn insert(&mut self, mut v: Vec<G>) -> bool {
        for (p, row) in &self.rows {
            if !v[*p].is_zero() {
                let f = v[*p].clone();
                for (x, r) in v.iter_mut().zip(row) {
                    *x -= &(&f * r);
                }
            }
        }
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[p].inv().expect("non-zero");
        v.iter_mut().for_each(|x| *x = &*x * &inv);
        for (_, row) in self.rows.iter_mut() {
            if !row[p].is_zero() {
                let f = row[p].clone();
                for (x, r) in row.iter_mut().zip(&v) {
                    *x -= &(&f * r);
                }
            }
        }
        self.rows.push((p, v));
        true
    }
}

pub fn specht_equiv(a: &ExactMatrix, b: &ExactMatrix, max_length: Option<usize>) -> Result<SpechtOutcome> {
    let d = a.require_square("A")?;
    if b.require_square("B")? != d {
        return Err(Error::invalid("A and B must have the same size"));
    }
    let max_length = max_length.unwrap_or_else(|| default_length(d));
    let letters = [(a.clone(), b.clone(), 'x'), (a.adjoint(), b.adjoint(), 'y')];
    let joint = |p: &ExactMatrix, q: &ExactMatrix| -> Vec<G> { p.entries().iter().chain(q.entries()).cloned().collect() };

    let mut basis = Echelon { rows: Vec::new() };
    let id = ExactMatrix::identity(d);
    basis.insert(joint(&id, &id));
    let mut frontier = vec![(String::new(), id.clone(), id)];
    let mut checked = 0;
    for _ in 1..=max_length {
        let mut next = Vec::new();
        for (word, pa, pb) in &frontier {
            for (la, lb, c) in &letters {
                let wa = pa * la;
                let wb = pb * lb;
                let w = format!("{word}{c}");
                checked += 1;
                let (ta, tb) = (wa.trace(), wb.trace());
                if ta != tb {
                    return Ok(SpechtOutcome {
                        equivalent: false,
                        first_difference: Some(SpechtDifference {
                            word: w,
                            trace_a: ta,
                            trace_b: tb,
                        }),
                        max_length,
                        words_checked: checked,
                        exhausted: false,
                    });
                }
                if basis.insert(joint(&wa, &wb)) {
                    next.push((w, wa, wb));
                }
            }
        }
        if next.is_empty() {
            return Ok(SpechtOutcome {
                equivalent: true,
                first_difference: None,
                max_length,
                words_checked: checked,
                exhausted: true,
            });
        }
        frontier = next;
    }
    Ok(SpechtOutcome {
        equivalent: true,
        first_difference: None,
        max_length,
        words_checked: checked,
        exhausted: false,
    })
}

/// Brute-force variant visiting every word up to `max_length`.
pub fn specht_equiv_exhaustive(a: &ExactMatrix, b: &ExactMatrix, max_length: usize) -> Result<Option<String>> {
    let d = a.require_square("A")?;
    let letters = [(a.clone(), b.clone(), 'x'), (a.adjoint(), b.adjoint(), 'y')];
    let mut frontier = vec![(String::new(), ExactMatrix::identity(d), ExactMatrix::identity(d))];
    for _ in 0..max_length {
        let mut next = Vec::with_capacity(frontier.len() * 2);
        for (word, pa, pb) in &frontier {
            for (la, lb, c) in &letters {
                let (wa, wb) = (pa * la, pb * lb);
                let w = format!("{word}{c}");
                if wa.trace() != wb.trace() {
                    return Ok(Some(w));
                }
                next.push((w, wa, wb));
            }
        }
        frontier = next;
    }
    Ok(None)
}
