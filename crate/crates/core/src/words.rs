//! Symbolic coding layer: digit words over `{0, .., N-1}`, the forbidden words
//! `1 0^i 2`, pending completions and the projection onto N-adic intervals.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{inv_pow, Q};

/// Default cap on the number of items any exhaustive enumeration may produce.
pub const DEFAULT_CAP: u128 = 1 << 22;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Word {
    base: u8,
    digits: Vec<u8>,
}

impl Word {
    pub fn new(digits: Vec<u8>, base: u8) -> Result<Self> {
        check_base(base)?;
        if let Some(d) = digits.iter().find(|&&d| d >= base) {
            return Err(Error::invalid(format!("digit {d} out of range for base {base}")));
        }
        Ok(Word { base, digits })
    }

    pub fn empty(base: u8) -> Self {
        Word {
            base,
            digits: Vec::new(),
        }
    }

    /// The `index`-th word of length `len` in lexicographic order.
    pub fn from_index(mut index: u128, len: usize, base: u8) -> Self {
        let mut digits = vec![0u8; len];
        for slot in digits.iter_mut().rev() {
            *slot = (index % base as u128) as u8;
            index /= base as u128;
        }
        Word { base, digits }
    }

    pub fn base(&self) -> u8 {
        self.base
    }

    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn last(&self) -> Option<u8> {
        self.digits.last().copied()
    }

    /// `self` followed by `digit`.
    pub fn child(&self, digit: u8) -> Word {
        debug_assert!(digit < self.base);
        let mut digits = Vec::with_capacity(self.digits.len() + 1);
        digits.extend_from_slice(&self.digits);
        digits.push(digit);
        Word {
            base: self.base,
            digits,
        }
    }

    /// The word with its last digit removed (the empty word is its own parent).
    pub fn parent(&self) -> Word {
        self.prefix(self.len().saturating_sub(1))
    }

    pub fn prefix(&self, len: usize) -> Word {
        Word {
            base: self.base,
            digits: self.digits[..len.min(self.len())].to_vec(),
        }
    }

    /// Left shift: drops the first digit.
    pub fn shift(&self) -> Word {
        Word {
            base: self.base,
            digits: self.digits.get(1..).unwrap_or_default().to_vec(),
        }
    }

    pub fn concat(&self, other: &Word) -> Word {
        debug_assert_eq!(self.base, other.base);
        let mut digits = self.digits.clone();
        digits.extend_from_slice(&other.digits);
        Word {
            base: self.base,
            digits,
        }
    }

    pub fn prepend(&self, digit: u8) -> Word {
        let mut digits = Vec::with_capacity(self.len() + 1);
        digits.push(digit);
        digits.extend_from_slice(&self.digits);
        Word {
            base: self.base,
            digits,
        }
    }

    pub fn ends_with(&self, suffix: &Word) -> bool {
        self.digits.ends_with(&suffix.digits)
    }

    pub fn contains_subword(&self, sub: &Word) -> bool {
        sub.is_empty() || self.digits.windows(sub.len()).any(|w| w == sub.digits.as_slice())
    }

    /// Index of the lexicographic position among words of the same length.
    pub fn index(&self) -> u128 {
        self.digits
            .iter()
            .fold(0u128, |acc, &d| acc * self.base as u128 + d as u128)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.digits.is_empty() {
            return f.write_str("-");
        }
        let sep = if self.base > 10 { "." } else { "" };
        let parts: Vec<String> = self.digits.iter().map(|d| d.to_string()).collect();
        f.write_str(&parts.join(sep))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self)
    }
}

pub(crate) fn check_base(base: u8) -> Result<()> {
    if base < 3 {
        return Err(Error::invalid(format!("base must be at least 3, got {base}")));
    }
    Ok(())
}

/// The forbidden word `1 0^i 2`.
pub fn b_word(i: u32, base: u8) -> Result<Word> {
    if i < 1 {
        return Err(Error::invalid("forbidden word index must be at least 1"));
    }
    check_base(base)?;
    let mut digits = Vec::with_capacity(i as usize + 2);
    digits.push(1);
    digits.extend(std::iter::repeat_n(0, i as usize));
    digits.push(2);
    Ok(Word { base, digits })
}

/// A finite subset of `{1 0^i 2 : i >= 1}`, stored by index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForbiddenSet {
    base: u8,
    indices: BTreeSet<u32>,
}

impl ForbiddenSet {
    pub fn new(indices: impl IntoIterator<Item = u32>, base: u8) -> Result<Self> {
        check_base(base)?;
        let indices: BTreeSet<u32> = indices.into_iter().collect();
        if indices.contains(&0) {
            return Err(Error::invalid("forbidden word index must be at least 1"));
        }
        Ok(ForbiddenSet { base, indices })
    }

    pub fn empty(base: u8) -> Result<Self> {
        Self::new([], base)
    }

    /// Parses the comma-separated index list, e.g. `"1,3"`; the empty string is the empty set.
    pub fn parse(text: &str, base: u8) -> Result<Self> {
        let mut indices = Vec::new();
        for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let i: u32 = part
                .parse()
                .map_err(|_| Error::parse(format!("forbidden set {text:?}"), format!("bad index {part:?}")))?;
            indices.push(i);
        }
        Self::new(indices, base)
    }

    pub fn base(&self) -> u8 {
        self.base
    }

    pub fn indices(&self) -> &BTreeSet<u32> {
        &self.indices
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains_index(&self, i: u32) -> bool {
        self.indices.contains(&i)
    }

    /// Largest index held; reports record it as the truncation cap.
    pub fn cap(&self) -> u32 {
        self.indices.iter().next_back().copied().unwrap_or(0)
    }

    pub fn words(&self) -> Vec<Word> {
        self.indices
            .iter()
            .map(|&i| b_word(i, self.base).expect("validated index"))
            .collect()
    }

    /// If `word` is some member `1 0^i 2`, its index.
    pub fn member_index(&self, word: &Word) -> Option<u32> {
        forbidden_index(word).filter(|i| self.indices.contains(i))
    }

    pub fn to_text(&self) -> String {
        let parts: Vec<String> = self.indices.iter().map(|i| i.to_string()).collect();
        parts.join(",")
    }
}

impl fmt::Display for ForbiddenSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.to_text())
    }
}

/// `Some(i)` when `word` is exactly `1 0^i 2` with `i >= 1`.
pub fn forbidden_index(word: &Word) -> Option<u32> {
    let d = word.digits();
    if d.len() < 3 || d[0] != 1 || d[d.len() - 1] != 2 {
        return None;
    }
    d[1..d.len() - 1]
        .iter()
        .all(|&x| x == 0)
        .then(|| (d.len() - 2) as u32)
}

/// Index `i` such that appending a `2` to `word` completes `1 0^i 2`, if any,
/// regardless of membership in a particular set.
pub(crate) fn trailing_completion_index(word: &[u8]) -> Option<u32> {
    let zeros = word.iter().rev().take_while(|&&d| d == 0).count();
    if zeros == 0 || zeros == word.len() {
        return None;
    }
    (word[word.len() - 1 - zeros] == 1).then_some(zeros as u32)
}

/// The singleton `{word 2}` when appending `2` to `word` completes a member of
/// `forbidden`; `None` otherwise. At most one member can be pending.
pub fn pending_completion(word: &Word, forbidden: &ForbiddenSet) -> Result<Option<Word>> {
    if word.base() != forbidden.base() {
        return Err(Error::invalid(format!(
            "base mismatch: word has base {}, forbidden set has base {}",
            word.base(),
            forbidden.base()
        )));
    }
    Ok(is_pending(word.digits(), forbidden).then(|| word.child(2)))
}

pub(crate) fn is_pending(digits: &[u8], forbidden: &ForbiddenSet) -> bool {
    trailing_completion_index(digits).is_some_and(|i| forbidden.contains_index(i))
}

/// Left endpoint `sum_k i_k N^-k` of the cylinder coded by `word`.
pub fn project_pi(word: &Word) -> Q {
    let base = BigInt::from(word.base());
    let mut num = BigInt::zero();
    for &d in word.digits() {
        num = num * &base + BigInt::from(d);
    }
    Q::new(num, num_traits::pow(base, word.len()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CylinderInterval {
    pub left: Q,
    pub width: Q,
}

impl CylinderInterval {
    pub fn right(&self) -> Q {
        &self.left + &self.width
    }

    /// Intersection as a closed interval, `None` when disjoint.
    pub fn intersect(&self, other: &CylinderInterval) -> Option<(Q, Q)> {
        let lo = (&self.left).max(&other.left).clone();
        let hi = self.right().min(other.right());
        (lo <= hi).then_some((lo, hi))
    }
}

pub fn cylinder_interval(word: &Word) -> CylinderInterval {
    CylinderInterval {
        left: project_pi(word),
        width: inv_pow(word.base() as u64, word.len() as u32),
    }
}

/// Number of words of length `depth`, failing if it exceeds `cap`.
pub fn checked_count(depth: usize, base: u8, cap: u128) -> Result<u128> {
    let mut count: u128 = 1;
    for _ in 0..depth {
        count = count.saturating_mul(base as u128);
        if count > cap {
            return Err(Error::EnumerationTooLarge {
                requested: count,
                cap,
            });
        }
    }
    Ok(count)
}

/// All `N^depth` words of length `depth`, in lexicographic order.
pub fn enumerate_words(depth: usize, base: u8, cap: u128) -> Result<Words> {
    check_base(base)?;
    let total = checked_count(depth, base, cap)?;
    Ok(Words {
        base,
        len: depth,
        next: 0,
        end: total,
    })
}

/// Lexicographic word iterator over an index range; split the range to
/// partition a traversal across workers.
#[derive(Clone, Debug)]
pub struct Words {
    base: u8,
    len: usize,
    next: u128,
    end: u128,
}

impl Words {
    pub fn range(depth: usize, base: u8, start: u128, end: u128) -> Words {
        Words {
            base,
            len: depth,
            next: start,
            end,
        }
    }
}

impl Iterator for Words {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        if self.next >= self.end {
            return None;
        }
        let w = Word::from_index(self.next, self.len, self.base);
        self.next += 1;
        Some(w)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let rem = (self.end - self.next) as usize;
        (rem, Some(rem))
    }
}

impl ExactSizeIterator for Words {}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn w(d: &[u8]) -> Word {
        Word::new(d.to_vec(), 3).unwrap()
    }

    /// Suffix scan straight from the definition: is some member a suffix of `word 2`?
    fn pending_by_suffix_scan(word: &Word, set: &ForbiddenSet) -> bool {
        let extended = word.child(2);
        set.words().iter().any(|b| extended.ends_with(b))
    }

    #[test]
    fn b_words() {
        assert_eq!(b_word(1, 3).unwrap().digits(), &[1, 0, 2]);
        assert_eq!(b_word(2, 3).unwrap().digits(), &[1, 0, 0, 2]);
        let b = b_word(1, 4).unwrap();
        assert_eq!((b.digits(), b.base()), (&[1u8, 0, 2][..], 4));
        assert!(b_word(0, 3).is_err());
        assert!(b_word(1, 2).is_err());
    }

    #[test]
    fn pending_examples() {
        let b1 = ForbiddenSet::new([1], 3).unwrap();
        assert_eq!(pending_completion(&w(&[1, 0]), &b1).unwrap(), Some(w(&[1, 0, 2])));
        assert_eq!(pending_completion(&w(&[0, 1]), &b1).unwrap(), None);
        assert_eq!(pending_completion(&w(&[2, 1, 0]), &b1).unwrap(), Some(w(&[2, 1, 0, 2])));
        let other_base = ForbiddenSet::new([1], 4).unwrap();
        assert!(pending_completion(&w(&[1, 0]), &other_base).is_err());
    }

    #[test]
    fn pending_matches_suffix_scan() {
        let set = ForbiddenSet::new([1, 2, 4], 3).unwrap();
        for len in 0..=7 {
            for word in enumerate_words(len, 3, DEFAULT_CAP).unwrap() {
                let got = pending_completion(&word, &set).unwrap();
                assert_eq!(got.is_some(), pending_by_suffix_scan(&word, &set), "{word:?}");
                if let Some(c) = got {
                    assert_eq!(c.last(), Some(2));
                }
            }
        }
    }

    #[test]
    fn forbidden_words_have_no_overlaps() {
        for i in 1..=12u32 {
            let bi = b_word(i, 3).unwrap();
            for j in 1..=12u32 {
                let bj = b_word(j, 3).unwrap();
                let max = if i == j { bi.len() - 1 } else { bi.len() };
                for k in 1..=max.min(bj.len()) {
                    assert!(!bj.ends_with(&bi.prefix(k)), "prefix {k} of b{i} is a suffix of b{j}");
                }
                if i != j {
                    assert!(!bj.contains_subword(&bi));
                }
            }
        }
    }

    #[test]
    fn projection_examples() {
        assert_eq!(project_pi(&w(&[1, 0, 2])), rat(11, 27));
        assert_eq!(project_pi(&Word::empty(3)), rat(0, 1));
        assert_eq!(project_pi(&w(&[2, 2])), rat(8, 9));
        let c = cylinder_interval(&w(&[1, 0, 2]));
        assert_eq!((c.left.clone(), c.right()), (rat(11, 27), rat(12, 27)));
        let c = cylinder_interval(&Word::empty(3));
        assert_eq!((c.left.clone(), c.right()), (rat(0, 1), rat(1, 1)));
        let c = cylinder_interval(&Word::new(vec![0], 4).unwrap());
        assert_eq!((c.left.clone(), c.width.clone()), (rat(0, 1), rat(1, 4)));
    }

    #[test]
    fn projection_is_injective_and_cylinders_touch_at_most_at_a_point() {
        for base in [3u8, 4] {
            let words: Vec<Word> = enumerate_words(4, base, DEFAULT_CAP).unwrap().collect();
            let denom = (base as i64).pow(4);
            for (m, word) in words.iter().enumerate() {
                assert_eq!(project_pi(word), rat(m as i64, denom));
            }
            for a in words.iter().step_by(7) {
                for b in &words {
                    if a == b {
                        continue;
                    }
                    if let Some((lo, hi)) = cylinder_interval(a).intersect(&cylinder_interval(b)) {
                        assert_eq!(lo, hi);
                    }
                }
            }
        }
    }

    #[test]
    fn enumeration_order_and_cap() {
        let all: Vec<Word> = enumerate_words(0, 3, DEFAULT_CAP).unwrap().collect();
        assert_eq!(all, vec![Word::empty(3)]);
        let all: Vec<Word> = enumerate_words(1, 3, DEFAULT_CAP).unwrap().collect();
        assert_eq!(all, vec![w(&[0]), w(&[1]), w(&[2])]);
        let all: Vec<Word> = enumerate_words(2, 3, DEFAULT_CAP).unwrap().collect();
        assert_eq!(all.len(), 9);
        assert_eq!(all[0], w(&[0, 0]));
        assert_eq!(all[8], w(&[2, 2]));
        assert!(all.windows(2).all(|p| p[0] < p[1]));
        assert!(matches!(
            enumerate_words(30, 3, DEFAULT_CAP),
            Err(Error::EnumerationTooLarge { .. })
        ));
    }

    #[test]
    fn forbidden_set_parsing() {
        let s = ForbiddenSet::parse("1,3", 3).unwrap();
        assert_eq!(s.indices().iter().copied().collect::<Vec<_>>(), vec![1, 3]);
        assert_eq!(s.cap(), 3);
        assert!(ForbiddenSet::parse("", 3).unwrap().is_empty());
        assert!(ForbiddenSet::parse("0", 3).is_err());
        assert!(ForbiddenSet::parse("x", 3).is_err());
        assert_eq!(s.member_index(&w(&[1, 0, 0, 0, 2])), Some(3));
        assert_eq!(s.member_index(&w(&[1, 0, 0, 2])), None);
    }
}
