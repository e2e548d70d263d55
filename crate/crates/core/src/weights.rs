//! Exact cylinder weights `p` and `p~` for a fixed forbidden set.
//!
//! Each new digit at position `k` multiplies the parent weight by one of three
//! factors: `1/N` when no completion is pending, `2^-k` (resp. `0` for `p~`)
//! when the digit completes a forbidden word, and `(1 - 2^-k)/(N - 1)`
//! (resp. `1/(N - 1)`) for the remaining digits while a completion is pending.

use std::collections::HashMap;
use std::io::Write;
use std::sync::RwLock;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{int, inv_pow, Q};
use crate::words::{checked_count, is_pending, ForbiddenSet, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum WeightVariant {
    Standard,
    Tilde,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightPair {
    pub p: Q,
    pub p_tilde: Q,
}

impl WeightPair {
    pub fn get(&self, variant: WeightVariant) -> &Q {
        match variant {
            WeightVariant::Standard => &self.p,
            WeightVariant::Tilde => &self.p_tilde,
        }
    }
}

/// Multiplicative factors `(p_k, p~_k)` for appending `digit` to `parent`.
pub fn digit_factors(parent: &[u8], digit: u8, forbidden: &ForbiddenSet) -> (Q, Q) {
    let n = forbidden.base() as i64;
    let k = parent.len() as u32 + 1;
    if is_pending(parent, forbidden) {
        if digit == 2 {
            (inv_pow(2, k), Q::zero())
        } else {
            let q = Q::one() - inv_pow(2, k);
            (q / int(n - 1), Q::new(1.into(), (n - 1).into()))
        }
    } else {
        let f = Q::new(1.into(), n.into());
        (f.clone(), f)
    }
}

/// Memoized weight table for one `(N, B)` pair. Concurrent readers may race to
/// fill the same entry; every writer stores the same value.
pub struct WeightTable {
    forbidden: ForbiddenSet,
    cache: RwLock<HashMap<Vec<u8>, WeightPair>>,
}

impl WeightTable {
    pub fn new(forbidden: ForbiddenSet) -> Self {
        let mut cache = HashMap::new();
        cache.insert(
            Vec::new(),
            WeightPair {
                p: Q::one(),
                p_tilde: Q::one(),
            },
        );
        WeightTable {
            forbidden,
            cache: RwLock::new(cache),
        }
    }

    pub fn forbidden(&self) -> &ForbiddenSet {
        &self.forbidden
    }

    pub fn base(&self) -> u8 {
        self.forbidden.base()
    }

    fn check(&self, word: &Word) -> Result<()> {
        if word.base() != self.base() {
            return Err(Error::invalid(format!(
                "base mismatch: word has base {}, table has base {}",
                word.base(),
                self.base()
            )));
        }
        Ok(())
    }

    pub fn pair(&self, word: &Word) -> Result<WeightPair> {
        self.check(word)?;
        let digits = word.digits();
        let (mut len, mut acc) = {
            let cache = self.cache.read().expect("weight cache poisoned");
            let mut len = digits.len();
            loop {
                if let Some(v) = cache.get(&digits[..len]) {
                    break (len, v.clone());
                }
                len -= 1;
            }
        };
        if len == digits.len() {
            return Ok(acc);
        }
        let mut fresh = Vec::with_capacity(digits.len() - len);
        while len < digits.len() {
            let (f, ft) = digit_factors(&digits[..len], digits[len], &self.forbidden);
            acc = WeightPair {
                p: acc.p * f,
                p_tilde: acc.p_tilde * ft,
            };
            len += 1;
            fresh.push((digits[..len].to_vec(), acc.clone()));
        }
        let mut cache = self.cache.write().expect("weight cache poisoned");
        cache.extend(fresh);
        Ok(acc)
    }

    pub fn p(&self, word: &Word) -> Result<Q> {
        Ok(self.pair(word)?.p)
    }

    pub fn p_tilde(&self, word: &Word) -> Result<Q> {
        Ok(self.pair(word)?.p_tilde)
    }

    pub fn weight(&self, word: &Word, variant: WeightVariant) -> Result<Q> {
        let pair = self.pair(word)?;
        Ok(match variant {
            WeightVariant::Standard => pair.p,
            WeightVariant::Tilde => pair.p_tilde,
        })
    }

    /// Weights of every word of length `depth`, lexicographic order. Built level
    /// by level, so it does not touch the memo cache.
    pub fn level(&self, depth: usize, cap: u128) -> Result<Vec<(Word, WeightPair)>> {
        checked_count(depth, self.base(), cap)?;
        let mut current = vec![(
            Word::empty(self.base()),
            WeightPair {
                p: Q::one(),
                p_tilde: Q::one(),
            },
        )];
        for _ in 0..depth {
            let mut next = Vec::with_capacity(current.len() * self.base() as usize);
            for (word, pair) in &current {
                for d in 0..self.base() {
                    let (f, ft) = digit_factors(word.digits(), d, &self.forbidden);
                    next.push((
                        word.child(d),
                        WeightPair {
                            p: &pair.p * f,
                            p_tilde: &pair.p_tilde * ft,
                        },
                    ));
                }
            }
            current = next;
        }
        Ok(current)
    }

    pub fn check_consistency(&self, word: &Word, variant: WeightVariant) -> Result<Consistency> {
        let rhs = self.weight(word, variant)?;
        let mut lhs = Q::zero();
        for d in 0..self.base() {
            lhs += self.weight(&word.child(d), variant)?;
        }
        Ok(Consistency {
            holds: lhs == rhs,
            lhs,
            rhs,
        })
    }

    pub fn check_decay(&self, word: &Word) -> Result<DecayCheck> {
        let pair = self.pair(word)?;
        let n = self.base() as u64;
        let geometric = inv_pow(n - 1, word.len() as u32);
        let p_bound = c_n_bound(self.base()) * &geometric;
        Ok(DecayCheck {
            holds: pair.p <= p_bound && pair.p_tilde <= geometric,
            p: pair.p,
            p_bound,
            p_tilde: pair.p_tilde,
            p_tilde_bound: geometric,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Consistency {
    pub lhs: Q,
    pub rhs: Q,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecayCheck {
    pub p: Q,
    pub p_bound: Q,
    pub p_tilde: Q,
    pub p_tilde_bound: Q,
    pub holds: bool,
}

/// Rational upper bound for `((N-1)/2)^(log2(N-1))`: the value itself when
/// `N - 1` is a power of two, otherwise rounded up to a multiple of `2^-20`.
pub fn c_n_bound(base: u8) -> Q {
    let m = base as u64 - 1;
    if m.is_power_of_two() {
        let e = m.trailing_zeros();
        // ((2^e)/2)^e = 2^(e(e-1))
        return Q::from_integer(num_bigint::BigInt::one() << (e * e.saturating_sub(1)) as usize);
    }
    let scale = (1u64 << 20) as f64;
    let value = ((m as f64) / 2.0).powf((m as f64).log2());
    // pad by a relative 1e-12 so float rounding cannot land below the true value
    let scaled = (value * scale * (1.0 + 1e-12)).ceil() as i64;
    Q::new(scaled.into(), (1i64 << 20).into())
}

pub fn weight_p(word: &Word, forbidden: &ForbiddenSet) -> Result<Q> {
    WeightTable::new(forbidden.clone()).p(word)
}

pub fn weight_p_tilde(word: &Word, forbidden: &ForbiddenSet) -> Result<Q> {
    WeightTable::new(forbidden.clone()).p_tilde(word)
}

/// CSV with columns `word,p_num,p_den,ptilde_num,ptilde_den`.
pub fn write_weight_csv<W: Write>(rows: &[(Word, WeightPair)], mut out: W) -> std::io::Result<()> {
    writeln!(out, "word,p_num,p_den,ptilde_num,ptilde_den")?;
    for (word, pair) in rows {
        writeln!(
            out,
            "{},{},{},{},{}",
            word,
            pair.p.numer(),
            pair.p.denom(),
            pair.p_tilde.numer(),
            pair.p_tilde.denom()
        )?;
    }
    Ok(())
}
