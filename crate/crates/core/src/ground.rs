//! Ground-set combinatorics on `[n]`: interval decompositions, gap parity,
//! Gale evenness, interweaving and separation, internal points and simplices,
//! and circuits of the alternating matroid.
//!
//! The points are fixed at parameters `t_i = i`; every predicate here is
//! purely combinatorial and independent of that choice.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::subset::{all_subsets, Subset};

/// Minimal decomposition of a subset into (possibly cyclic) intervals.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntervalDecomposition {
    pub n: usize,
    /// `(start, end)` pairs; in the cyclic regime `end < start` means the
    /// block wraps from `n` to `1`. Blocks are listed by ascending start.
    pub blocks: Vec<(usize, usize)>,
    pub cyclic: bool,
}

impl IntervalDecomposition {
    /// Number of blocks (the `l` of an `l`-ple interval).
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Left endpoints of the blocks.
    pub fn hat(&self) -> Subset {
        Subset::new(self.n, self.blocks.iter().map(|b| b.0)).expect("block starts lie in [n]")
    }
}

#[inline]
fn pred(e: usize, n: usize) -> usize {
    if e == 1 {
        n
    } else {
        e - 1
    }
}

#[inline]
fn succ(e: usize, n: usize) -> usize {
    if e == n {
        1
    } else {
        e + 1
    }
}

pub fn decompose(s: &Subset, cyclic: bool) -> Result<IntervalDecomposition> {
    if s.is_empty() {
        return Err(Error::EmptySubset);
    }
    let n = s.n();
    if s.is_full() {
        return Ok(IntervalDecomposition { n, blocks: vec![(1, n)], cyclic });
    }
    let mut blocks = Vec::new();
    for start in s.iter() {
        let opens = if cyclic {
            !s.contains(pred(start, n))
        } else {
            start == 1 || !s.contains(start - 1)
        };
        if !opens {
            continue;
        }
        let mut end = start;
        loop {
            let next = if cyclic { succ(end, n) } else { end + 1 };
            if (!cyclic && next > n) || !s.contains(next) {
                break;
            }
            end = next;
        }
        blocks.push((start, end));
    }
    Ok(IntervalDecomposition { n, blocks, cyclic })
}

/// Number of blocks in the minimal (cyclic) interval decomposition; 0 for ∅.
pub fn interval_count(s: &Subset, cyclic: bool) -> usize {
    if s.is_empty() {
        return 0;
    }
    if s.is_full() {
        return 1;
    }
    let n = s.n();
    let bits = s.bits();
    // block starts: members whose predecessor is absent
    let shifted = bits << 1;
    let mut starts = bits & !shifted;
    if cyclic && s.contains(n) && s.contains(1) {
        starts &= !1;
    }
    starts.count_ones() as usize
}

pub fn hat(s: &Subset, cyclic: bool) -> Result<Subset> {
    decompose(s, cyclic).map(|d| d.hat())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

/// Parity of `#{s in S : s > e}` for a non-member `e`.
pub fn gap_parity(s: &Subset, e: usize) -> Result<Parity> {
    if e == 0 || e > s.n() {
        return Err(Error::ElementOutOfRange { element: e, n: s.n() });
    }
    if s.contains(e) {
        return Err(Error::NotAGap { element: e, set: *s });
    }
    Ok(if s.count_above(e).is_multiple_of(2) { Parity::Even } else { Parity::Odd })
}

#[inline]
fn is_even_gap(s: &Subset, e: usize) -> bool {
    s.count_above(e).is_multiple_of(2)
}

/// Every gap of `s` in `[n]` is even.
pub fn is_even_subset(s: &Subset) -> bool {
    s.complement().iter().all(|e| is_even_gap(s, e))
}

/// Every gap of `s` in `[n]` is odd.
pub fn is_odd_subset(s: &Subset) -> bool {
    s.complement().iter().all(|e| !is_even_gap(s, e))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GaleKind {
    Lower,
    Upper,
    Neither,
}

/// Classifies a `δ`-subset as a lower facet, upper facet or non-facet of
/// the cyclic polytope `C(n, δ)` by Gale's evenness criterion.
pub fn gale_kind(f: &Subset, delta: usize) -> Result<GaleKind> {
    if f.len() != delta {
        return Err(Error::WrongCardinality { expected: delta, set: *f });
    }
    Ok(if is_even_subset(f) {
        GaleKind::Lower
    } else if is_odd_subset(f) {
        GaleKind::Upper
    } else {
        GaleKind::Neither
    })
}

/// Chain `i_0 < i_1 < .. < i_{δ+1}` witnessing that `A` δ-interweaves `B`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InterweaveWitness {
    pub chain: Vec<usize>,
    pub delta: usize,
}

impl InterweaveWitness {
    /// Members of the chain drawn from `B ∖ A` (`i_{δ+1}, i_{δ-1}, ..`).
    pub fn b_side(&self) -> Vec<usize> {
        let top = self.delta + 1;
        self.chain.iter().enumerate().filter(|(k, _)| (top - k).is_multiple_of(2)).map(|(_, &e)| e).collect()
    }

    /// Members of the chain drawn from `A ∖ B` (`i_δ, i_{δ-2}, ..`).
    pub fn a_side(&self) -> Vec<usize> {
        let top = self.delta + 1;
        self.chain.iter().enumerate().filter(|(k, _)| (top - k) % 2 == 1).map(|(_, &e)| e).collect()
    }
}

#[inline]
fn bits_above(p: usize) -> u32 {
    // bits for elements > p, i.e. 0-based indices >= p
    if p >= 32 {
        0
    } else {
        u32::MAX << p
    }
}

/// Greedy leftmost alternating chain of length `len` whose top element is
/// drawn from `top_mask` and which alternates with `other_mask` downwards.
/// Returns the lexicographically least such chain.
fn alternating_chain(other_mask: u32, top_mask: u32, len: usize) -> Option<Vec<usize>> {
    let mut chain = Vec::with_capacity(len);
    let mut last = 0usize;
    for k in 0..len {
        let mask = if (len - 1 - k).is_multiple_of(2) { top_mask } else { other_mask };
        let cand = mask & bits_above(last);
        if cand == 0 {
            return None;
        }
        last = cand.trailing_zeros() as usize + 1;
        chain.push(last);
    }
    Some(chain)
}

/// Allocation-free existence test for [`alternating_chain`].
#[inline]
fn has_alternating_chain(other_mask: u32, top_mask: u32, len: usize) -> bool {
    let mut last = 0usize;
    for k in 0..len {
        let mask = if (len - 1 - k).is_multiple_of(2) { top_mask } else { other_mask };
        let cand = mask & bits_above(last);
        if cand == 0 {
            return false;
        }
        last = cand.trailing_zeros() as usize + 1;
    }
    true
}

/// Bit-level test: does `a` δ-interweave `b`?
#[inline]
pub fn interweaves_bits(a: u32, b: u32, delta: usize) -> bool {
    has_alternating_chain(a & !b, b & !a, delta + 2)
}

/// Bit-level test: are `a` and `b` δ-separated?
#[inline]
pub fn separated_bits(a: u32, b: u32, delta: usize) -> bool {
    !interweaves_bits(a, b, delta) && !interweaves_bits(b, a, delta)
}

/// Returns the lexicographically least witness chain if `A` δ-interweaves `B`.
pub fn interweaves(a: &Subset, b: &Subset, delta: usize) -> Option<InterweaveWitness> {
    let x = a.difference(b).bits();
    let y = b.difference(a).bits();
    alternating_chain(x, y, delta + 2).map(|chain| InterweaveWitness { chain, delta })
}

/// `A` δ-interweaves `B` and the symmetric difference is exactly the chain.
pub fn tightly_interweaves(a: &Subset, b: &Subset, delta: usize) -> bool {
    tightly_interweaves_bits(a.bits(), b.bits(), delta)
}

pub fn tightly_interweaves_bits(a: u32, b: u32, delta: usize) -> bool {
    let a_only = a & !b;
    let b_only = b & !a;
    let sym = a_only | b_only;
    if sym.count_ones() as usize != delta + 2 {
        return false;
    }
    // walk the symmetric difference from the top down: B, A, B, ...
    let mut rest = sym;
    let mut want_b = true;
    while rest != 0 {
        let top = 31 - rest.leading_zeros();
        let bit = 1u32 << top;
        if want_b != (b_only & bit != 0) {
            return false;
        }
        want_b = !want_b;
        rest &= !bit;
    }
    true
}

pub fn is_separated_pair(a: &Subset, b: &Subset, delta: usize) -> bool {
    separated_bits(a.bits(), b.bits(), delta)
}

/// First pair (in input order) that is δ-interweaving, if any.
pub fn first_interweaving_pair(c: &[Subset], delta: usize) -> Option<(Subset, Subset)> {
    for (i, a) in c.iter().enumerate() {
        for b in &c[i + 1..] {
            if !separated_bits(a.bits(), b.bits(), delta) {
                return Some((*a, *b));
            }
        }
    }
    None
}

pub fn is_separated_collection(c: &[Subset], delta: usize) -> bool {
    first_interweaving_pair(c, delta).is_none()
}

/// Whether `ξ_A` projects to the interior of the zonotope `Z(n, δ+1)`.
pub fn is_internal_point(a: &Subset, delta: usize) -> bool {
    if a.is_empty() || a.is_full() {
        return false;
    }
    let d = delta / 2;
    if delta.is_multiple_of(2) {
        interval_count(a, true) > d
    } else {
        let l = interval_count(a, false);
        l >= d + 2 || (l == d + 1 && !a.contains(1) && !a.contains(a.n()))
    }
}

/// Whether the `⌊δ/2⌋`-simplex `|A|` is internal in `C(n, δ)`.
pub fn is_internal_simplex(a: &Subset, delta: usize) -> Result<bool> {
    let d = delta / 2;
    if a.len() != d + 1 {
        return Err(Error::WrongCardinality { expected: d + 1, set: *a });
    }
    Ok(if delta.is_multiple_of(2) {
        interval_count(a, true) == d + 1
    } else {
        interval_count(a, false) == d + 1 && !a.contains(1) && !a.contains(a.n())
    })
}

/// `(X, Y)` is a circuit of `C(n, δ)`: `#X = ⌊δ/2⌋+1`, `#Y = ⌈δ/2⌉+1` and
/// `X` δ-interweaves `Y`.
pub fn is_circuit(x: &Subset, y: &Subset, delta: usize) -> Result<bool> {
    if !x.is_disjoint(y) {
        return Err(Error::NotDisjoint(*x, *y));
    }
    Ok(x.len() == delta / 2 + 1
        && y.len() == delta.div_ceil(2) + 1
        && interweaves_bits(x.bits(), y.bits(), delta))
}

/// Whether some circuit `(X, Y)` has `X ⊆ a` and `Y ⊆ b`.
///
/// A circuit is exactly an alternating chain of length `δ+2` with the top
/// element in `Y`, so shared elements of `a` and `b` may sit on either side.
#[inline]
pub fn contains_circuit_halves(a: u32, b: u32, delta: usize) -> bool {
    has_alternating_chain(a, b, delta + 2)
}

/// Subsets that are vertices of every cubillage of `Z(n, δ+1)`.
pub fn boundary_points(n: usize, delta: usize) -> Vec<Subset> {
    let mut v: Vec<Subset> = all_subsets(n).filter(|a| !is_internal_point(a, delta)).collect();
    v.sort();
    v
}

/// Candidate internal points of `Z(n, δ+1)`.
pub fn internal_points(n: usize, delta: usize) -> Vec<Subset> {
    let mut v: Vec<Subset> = all_subsets(n).filter(|a| is_internal_point(a, delta)).collect();
    v.sort();
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subset::{binomial, k_subsets};

    fn s(n: usize, lit: &str) -> Subset {
        Subset::parse(n, lit).unwrap()
    }

    #[test]
    fn decompose_examples() {
        let d = decompose(&s(4, "412"), true).unwrap();
        assert_eq!(d.blocks, vec![(4, 2)]);
        assert_eq!(d.len(), 1);

        let d = decompose(&s(6, "1345"), true).unwrap();
        let mut blocks = d.blocks.clone();
        blocks.sort();
        assert_eq!(blocks, vec![(1, 1), (3, 5)]);

        let d = decompose(&s(6, "1345"), false).unwrap();
        assert_eq!(d.blocks, vec![(1, 1), (3, 5)]);

        let full = decompose(&Subset::full(5), true).unwrap();
        assert_eq!(full.blocks, vec![(1, 5)]);

        assert!(matches!(decompose(&Subset::empty(4), true), Err(Error::EmptySubset)));
    }

    /// Brute force: smallest number of (cyclic) intervals covering exactly S.
    fn min_cover(sub: &Subset, cyclic: bool) -> usize {
        let n = sub.n();
        let mut intervals = Vec::new();
        for a in 1..=n {
            for len in 1..=n {
                if !cyclic && a + len - 1 > n {
                    break;
                }
                let iv = Subset::new(n, (0..len).map(|k| (a - 1 + k) % n + 1)).unwrap();
                if iv.is_subset_of(sub) {
                    intervals.push(iv.bits());
                }
            }
        }
        // BFS on number of intervals
        for k in 1..=n {
            if covers_with(sub.bits(), &intervals, k, 0) {
                return k;
            }
        }
        unreachable!()
    }

    fn covers_with(target: u32, ivs: &[u32], k: usize, acc: u32) -> bool {
        if acc == target {
            return true;
        }
        if k == 0 {
            return false;
        }
        let missing = target & !acc;
        let low = missing & missing.wrapping_neg();
        ivs.iter().filter(|&&iv| iv & low != 0).any(|&iv| covers_with(target, ivs, k - 1, acc | iv))
    }

    #[test]
    fn decomposition_is_minimal() {
        for n in 1..=7 {
            for sub in all_subsets(n).filter(|x| !x.is_empty()) {
                for cyclic in [false, true] {
                    let d = decompose(&sub, cyclic).unwrap();
                    assert_eq!(d.len(), min_cover(&sub, cyclic), "{sub:?} cyclic={cyclic}");
                    assert_eq!(interval_count(&sub, cyclic), d.len());
                    // union of blocks is S
                    let mut acc = Subset::empty(n);
                    for &(a, b) in &d.blocks {
                        let mut e = a;
                        loop {
                            acc = acc.insert(e);
                            if e == b {
                                break;
                            }
                            e = if e == n { 1 } else { e + 1 };
                        }
                    }
                    assert_eq!(acc, sub);
                }
            }
        }
    }

    #[test]
    fn hat_examples() {
        assert_eq!(hat(&s(6, "1345"), true).unwrap(), s(6, "13"));
        assert_eq!(hat(&s(6, "13"), true).unwrap(), s(6, "13"));
        assert_eq!(hat(&s(7, "2367"), true).unwrap(), s(7, "26"));
        assert!(hat(&Subset::empty(3), true).is_err());
    }

    #[test]
    fn gap_parity_examples() {
        assert_eq!(gap_parity(&s(4, "23"), 1).unwrap(), Parity::Even);
        assert_eq!(gap_parity(&s(4, "12"), 3).unwrap(), Parity::Even);
        assert_eq!(gap_parity(&s(4, "14"), 2).unwrap(), Parity::Odd);
        assert!(matches!(gap_parity(&s(4, "14"), 4), Err(Error::NotAGap { .. })));
    }

    #[test]
    fn gale_examples() {
        assert_eq!(gale_kind(&s(4, "12"), 2).unwrap(), GaleKind::Lower);
        assert_eq!(gale_kind(&s(4, "14"), 2).unwrap(), GaleKind::Upper);
        assert_eq!(gale_kind(&s(4, "13"), 2).unwrap(), GaleKind::Neither);
        assert!(gale_kind(&s(4, "123"), 2).is_err());
    }

    #[test]
    fn interweave_examples() {
        let w = interweaves(&s(6, "13"), &s(6, "26"), 2).unwrap();
        assert_eq!(w.chain, vec![1, 2, 3, 6]);
        assert_eq!(w.a_side(), vec![1, 3]);
        assert_eq!(w.b_side(), vec![2, 6]);
        assert!(interweaves(&s(4, "13"), &s(4, "13"), 1).is_none());
        let w = interweaves(&s(3, "2"), &s(3, "13"), 1).unwrap();
        assert_eq!(w.chain, vec![1, 2, 3]);
    }

    #[test]
    fn tight_examples() {
        assert!(tightly_interweaves(&s(7, "1256"), &s(7, "1357"), 2));
        assert!(!tightly_interweaves(&s(4, "13"), &s(4, "24"), 1));
        assert!(tightly_interweaves(&s(3, "2"), &s(3, "13"), 1));
    }

    #[test]
    fn separated_collection_examples() {
        let mut c = boundary_points(4, 1);
        c.extend([s(4, "3"), s(4, "13"), s(4, "23")]);
        assert!(is_separated_collection(&c, 1));

        let c = vec![s(4, "13"), s(4, "24")];
        assert_eq!(first_interweaving_pair(&c, 2), Some((s(4, "13"), s(4, "24"))));
        assert!(is_separated_collection(&[], 3));
    }

    #[test]
    fn internal_point_examples() {
        assert!(is_internal_point(&s(4, "3"), 1));
        assert!(is_internal_point(&s(4, "13"), 2));
        assert!(!is_internal_point(&s(4, "12"), 1));
    }

    #[test]
    fn internal_simplex_examples() {
        assert!(is_internal_simplex(&s(6, "13"), 2).unwrap());
        assert!(is_internal_simplex(&s(4, "3"), 1).unwrap());
        assert!(!is_internal_simplex(&s(6, "12"), 2).unwrap());
        assert!(is_internal_simplex(&s(6, "123"), 2).is_err());
    }

    #[test]
    fn circuit_examples() {
        assert!(is_circuit(&s(4, "13"), &s(4, "24"), 2).unwrap());
        assert!(is_circuit(&s(3, "2"), &s(3, "13"), 1).unwrap());
        assert!(!is_circuit(&s(4, "12"), &s(4, "34"), 2).unwrap());
        assert!(is_circuit(&s(4, "12"), &s(4, "23"), 2).is_err());
    }

    #[test]
    fn internal_simplex_agrees_with_internal_point() {
        for n in 2..=10 {
            for delta in 1..=4 {
                if n < delta + 1 {
                    continue;
                }
                for a in k_subsets(n, delta / 2 + 1) {
                    assert_eq!(
                        is_internal_simplex(&a, delta).unwrap(),
                        is_internal_point(&a, delta),
                        "{a:?} delta={delta}"
                    );
                }
            }
        }
    }

    #[test]
    fn boundary_points_are_separated_from_everything() {
        for n in 1..=8 {
            for delta in 0..=3 {
                let all: Vec<Subset> = all_subsets(n).collect();
                for a in &all {
                    let universal = all.iter().all(|b| is_separated_pair(a, b, delta));
                    assert_eq!(universal, !is_internal_point(a, delta), "{a:?} n={n} delta={delta}");
                }
            }
        }
    }

    #[test]
    fn internal_candidates_cover_cubillage_interior() {
        for n in 2..=9 {
            for delta in 0..=3 {
                if n > delta + 1 {
                    assert!(internal_points(n, delta).len() >= binomial(n - 1, delta + 1));
                }
            }
        }
    }

    /// Exhaustive chain search, independent of the greedy implementation.
    fn brute_force_chains(a: &Subset, b: &Subset, delta: usize) -> Vec<Vec<usize>> {
        let n = a.n();
        let len = delta + 2;
        let mut out = Vec::new();
        for chain in k_subsets(n, len) {
            let c = chain.to_vec();
            let ok = c.iter().enumerate().all(|(k, &e)| {
                if (len - 1 - k).is_multiple_of(2) {
                    b.contains(e) && !a.contains(e)
                } else {
                    a.contains(e) && !b.contains(e)
                }
            });
            if ok {
                out.push(c);
            }
        }
        out
    }

    #[test]
    fn witness_is_lexicographically_least() {
        for n in 1..=6 {
            let all: Vec<Subset> = all_subsets(n).collect();
            for delta in 0..=3 {
                for a in &all {
                    for b in &all {
                        let chains = brute_force_chains(a, b, delta);
                        match interweaves(a, b, delta) {
                            None => assert!(chains.is_empty()),
                            Some(w) => {
                                assert_eq!(w.chain.len(), delta + 2);
                                assert_eq!(Some(&w.chain), chains.iter().min());
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn tightness_brute_force() {
        for n in 1..=6 {
            let all: Vec<Subset> = all_subsets(n).collect();
            for delta in 0..=3 {
                for a in &all {
                    for b in &all {
                        let sym = a.difference(b).union(&b.difference(a));
                        let tight = brute_force_chains(a, b, delta)
                            .iter()
                            .any(|c| Subset::new(n, c.iter().copied()).unwrap() == sym);
                        assert_eq!(tightly_interweaves(a, b, delta), tight);
                    }
                }
            }
        }
    }
}
