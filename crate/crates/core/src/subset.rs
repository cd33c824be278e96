//! Subsets of a ground set `[n] = {1, .., n}` packed into a machine word.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported ground-set size.
pub const MAX_N: usize = 32;

/// A subset of `[n]`. Element `i` is stored in bit `i - 1`.
///
/// Ordering is by cardinality first and then lexicographic on the sorted
/// element lists, so `1 < 2 < 12 < 13 < 23 < 123`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Subset {
    n: u8,
    bits: u32,
}

/// Mask with the low `n` bits set.
#[inline]
pub fn full_mask(n: usize) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

impl Subset {
    pub fn empty(n: usize) -> Self {
        assert!(n <= MAX_N, "ground set too large: {n}");
        Subset { n: n as u8, bits: 0 }
    }

    pub fn full(n: usize) -> Self {
        assert!(n <= MAX_N, "ground set too large: {n}");
        Subset { n: n as u8, bits: full_mask(n) }
    }

    /// Builds a subset from 1-based elements, rejecting anything outside `[n]`.
    pub fn new(n: usize, elements: impl IntoIterator<Item = usize>) -> Result<Self> {
        if n == 0 || n > MAX_N {
            return Err(Error::InvalidParameters(format!(
                "ground set size {n} outside 1..={MAX_N}"
            )));
        }
        let mut bits = 0u32;
        for e in elements {
            if e == 0 || e > n {
                return Err(Error::ElementOutOfRange { element: e, n });
            }
            bits |= 1 << (e - 1);
        }
        Ok(Subset { n: n as u8, bits })
    }

    /// Raw constructor; `bits` is truncated to `[n]`.
    #[inline]
    pub fn from_bits(n: usize, bits: u32) -> Self {
        debug_assert!(n <= MAX_N);
        Subset { n: n as u8, bits: bits & full_mask(n) }
    }

    /// Parses either a digit string (`"1345"`, only for `n <= 9`) or a
    /// comma separated list (`"1,3,10"`). The empty string and `"∅"` give the
    /// empty set.
    pub fn parse(n: usize, s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "∅" || s == "{}" {
            return Ok(Subset::empty(n));
        }
        let parsed: Option<Vec<usize>> = if s.contains(',') {
            s.split(',').map(|t| t.trim().parse::<usize>().ok()).collect()
        } else {
            s.chars().map(|c| c.to_digit(10).map(|d| d as usize)).collect()
        };
        let elements = parsed.ok_or_else(|| Error::Parse(format!("bad subset literal {s:?}")))?;
        Subset::new(n, elements)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n as usize
    }

    #[inline]
    pub fn bits(&self) -> u32 {
        self.bits
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    #[inline]
    pub fn is_full(&self) -> bool {
        self.bits == full_mask(self.n())
    }

    #[inline]
    pub fn contains(&self, e: usize) -> bool {
        e >= 1 && e <= self.n() && self.bits & (1 << (e - 1)) != 0
    }

    pub fn insert(&self, e: usize) -> Self {
        debug_assert!(e >= 1 && e <= self.n());
        Subset { n: self.n, bits: self.bits | (1 << (e - 1)) }
    }

    pub fn remove(&self, e: usize) -> Self {
        debug_assert!(e >= 1 && e <= self.n());
        Subset { n: self.n, bits: self.bits & !(1 << (e - 1)) }
    }

    #[inline]
    pub fn union(&self, other: &Subset) -> Self {
        Subset { n: self.n, bits: self.bits | other.bits }
    }

    #[inline]
    pub fn intersection(&self, other: &Subset) -> Self {
        Subset { n: self.n, bits: self.bits & other.bits }
    }

    #[inline]
    pub fn difference(&self, other: &Subset) -> Self {
        Subset { n: self.n, bits: self.bits & !other.bits }
    }

    #[inline]
    pub fn complement(&self) -> Self {
        Subset { n: self.n, bits: !self.bits & full_mask(self.n()) }
    }

    #[inline]
    pub fn is_subset_of(&self, other: &Subset) -> bool {
        self.bits & !other.bits == 0
    }

    #[inline]
    pub fn is_disjoint(&self, other: &Subset) -> bool {
        self.bits & other.bits == 0
    }

    /// Same subset viewed inside a different ground set size.
    pub fn with_n(&self, n: usize) -> Self {
        Subset::from_bits(n, self.bits)
    }

    /// Elements in ascending order.
    pub fn iter(&self) -> Elements {
        Elements { bits: self.bits }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn min(&self) -> Option<usize> {
        (self.bits != 0).then(|| self.bits.trailing_zeros() as usize + 1)
    }

    pub fn max(&self) -> Option<usize> {
        (self.bits != 0).then(|| 32 - self.bits.leading_zeros() as usize)
    }

    /// `#{s in self : s > e}`.
    #[inline]
    pub fn count_above(&self, e: usize) -> usize {
        if e >= 32 {
            0
        } else {
            (self.bits >> e).count_ones() as usize
        }
    }

    /// Element at 0-based position `i` in ascending order.
    pub fn nth(&self, i: usize) -> Option<usize> {
        self.iter().nth(i)
    }

    /// All subsets of this subset (including empty and itself).
    pub fn subsets(&self) -> impl Iterator<Item = Subset> + '_ {
        let n = self.n;
        let full = self.bits;
        let mut cur = Some(0u32);
        std::iter::from_fn(move || {
            let c = cur?;
            cur = if c == full { None } else { Some((c.wrapping_sub(full)) & full) };
            Some(Subset { n, bits: c })
        })
    }

    /// Digit-string form for `n <= 9`, comma separated otherwise.
    pub fn label(&self) -> String {
        if self.is_empty() {
            return "∅".to_string();
        }
        let sep = if self.n() <= 9 { "" } else { "," };
        self.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(sep)
    }
}

/// Ascending iterator over the members of a [`Subset`].
pub struct Elements {
    bits: u32,
}

impl Iterator for Elements {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.bits == 0 {
            return None;
        }
        let tz = self.bits.trailing_zeros();
        self.bits &= self.bits - 1;
        Some(tz as usize + 1)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let c = self.bits.count_ones() as usize;
        (c, Some(c))
    }
}

impl Ord for Subset {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| {
                let diff = self.bits ^ other.bits;
                if diff == 0 {
                    Ordering::Equal
                } else if self.bits & (diff & diff.wrapping_neg()) != 0 {
                    // smallest differing element belongs to self
                    Ordering::Less
                } else {
                    Ordering::Greater
                }
            })
            .then_with(|| self.n.cmp(&other.n))
    }
}

impl PartialOrd for Subset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}/{}", self.label(), self.n)
    }
}

/// Subsets serialize as sorted element lists.
impl Serialize for Subset {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

/// Element list without its ground set; callers attach `n` afterwards.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(transparent)]
pub struct RawSubset(pub Vec<usize>);

impl RawSubset {
    pub fn resolve(&self, n: usize) -> Result<Subset> {
        Subset::new(n, self.0.iter().copied())
    }
}

/// All `k`-subsets of `[n]` in lexicographic order.
pub fn k_subsets(n: usize, k: usize) -> Vec<Subset> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (1..=k).collect();
    loop {
        out.push(Subset::from_bits(n, idx.iter().fold(0, |m, &e| m | 1 << (e - 1))));
        // advance to next combination
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] < n - (k - 1 - i) {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// All `2^n` subsets of `[n]`, in increasing bit order.
pub fn all_subsets(n: usize) -> impl Iterator<Item = Subset> {
    assert!(n < 32, "power set of [{n}] is too large to enumerate");
    (0u32..(1u32 << n)).map(move |b| Subset::from_bits(n, b))
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}

/// Formats a set of subsets as `{13, 15, 35}`.
pub fn format_family<'a>(family: impl IntoIterator<Item = &'a Subset>) -> String {
    let mut v: Vec<&Subset> = family.into_iter().collect();
    v.sort();
    format!(
        "{{{}}}",
        v.iter().map(|s| s.label()).collect::<Vec<_>>().join(", ")
    )
}

/// Parses a whitespace or `;` separated list of subset literals.
pub fn parse_family(n: usize, s: &str) -> Result<Vec<Subset>> {
    s.split(|c: char| c.is_whitespace() || c == ';')
        .filter(|t| !t.is_empty())
        .map(|t| Subset::parse(n, t))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: usize, lit: &str) -> Subset {
        Subset::parse(n, lit).unwrap()
    }

    #[test]
    fn parse_and_label() {
        assert_eq!(s(6, "1345").to_vec(), vec![1, 3, 4, 5]);
        assert_eq!(s(6, "1345").label(), "1345");
        assert_eq!(s(12, "1,3,10").label(), "1,3,10");
        assert!(s(4, "").is_empty());
        assert!(Subset::parse(4, "15").is_err());
        assert!(Subset::parse(4, "1a").is_err());
    }

    #[test]
    fn ordering_is_size_then_lex() {
        let mut v = [s(4, "23"), s(4, "123"), s(4, "4"), s(4, "13"), s(4, "")];
        v.sort();
        let labels: Vec<_> = v.iter().map(|x| x.label()).collect();
        assert_eq!(labels, ["∅", "4", "13", "23", "123"]);
        assert!(s(4, "14") < s(4, "23"));
        assert!(s(4, "124") < s(4, "134"));
    }

    #[test]
    fn k_subsets_count_and_order() {
        let v = k_subsets(5, 2);
        assert_eq!(v.len(), 10);
        assert_eq!(v[0].label(), "12");
        assert_eq!(v[9].label(), "45");
        assert_eq!(k_subsets(3, 0).len(), 1);
        assert_eq!(k_subsets(3, 4).len(), 0);
        assert_eq!(binomial(6, 3), 20);
    }

    #[test]
    fn subsets_of_subset() {
        let all: Vec<_> = s(5, "135").subsets().collect();
        assert_eq!(all.len(), 8);
        assert!(all.iter().all(|x| x.is_subset_of(&s(5, "135"))));
        assert_eq!(Subset::empty(3).subsets().count(), 1);
    }

    #[test]
    fn count_above_matches_definition() {
        let x = s(8, "2578");
        for e in 1..=8 {
            let brute = x.iter().filter(|&v| v > e).count();
            assert_eq!(x.count_above(e), brute);
        }
    }

    #[test]
    fn json_shape() {
        assert_eq!(serde_json::to_string(&s(6, "135")).unwrap(), "[1,3,5]");
    }
}
