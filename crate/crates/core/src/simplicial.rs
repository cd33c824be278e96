//! Triangulations of the cyclic polytope `C(n, δ)` and the first higher
//! Stasheff-Tamari order `S(n, δ)`.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::enumerate::{bfs_closure, Enumeration, Limits};
use crate::error::{Error, Result};
use crate::ground::{contains_circuit_halves, gale_kind, is_even_subset, is_internal_simplex, is_odd_subset, GaleKind};
use crate::subset::{format_family, k_subsets, RawSubset, Subset};

/// A triangulation, stored as its sorted set of maximal simplices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Triangulation {
    n: usize,
    delta: usize,
    simplices: Vec<Subset>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangulationJson {
    pub n: usize,
    pub delta: usize,
    pub simplices: Vec<RawSubset>,
}

fn check_params(n: usize, delta: usize) -> Result<()> {
    if delta == 0 {
        return Err(Error::InvalidParameters("δ must be at least 1".into()));
    }
    if n < delta + 1 {
        return Err(Error::InvalidParameters(format!("need n >= δ+1, got n={n}, δ={delta}")));
    }
    if n > crate::subset::MAX_N {
        return Err(Error::InvalidParameters(format!("n={n} exceeds {}", crate::subset::MAX_N)));
    }
    Ok(())
}

impl Triangulation {
    /// Structural constructor: sizes and ranges only. See [`validate`].
    pub fn new(n: usize, delta: usize, simplices: impl IntoIterator<Item = Subset>) -> Result<Self> {
        check_params(n, delta)?;
        let mut v: Vec<Subset> = simplices.into_iter().collect();
        for s in &v {
            if s.n() != n {
                return Err(Error::Mismatch(format!("simplex {s} is over [{}], expected [{n}]", s.n())));
            }
            if s.len() != delta + 1 {
                return Err(Error::WrongCardinality { expected: delta + 1, set: *s });
            }
        }
        v.sort();
        v.dedup();
        Ok(Triangulation { n, delta, simplices: v })
    }

    pub(crate) fn from_sorted(n: usize, delta: usize, simplices: Vec<Subset>) -> Self {
        Triangulation { n, delta, simplices }
    }

    pub fn parse(n: usize, delta: usize, s: &str) -> Result<Self> {
        Triangulation::new(n, delta, crate::subset::parse_family(n, s)?)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    pub fn simplices(&self) -> &[Subset] {
        &self.simplices
    }

    pub fn contains_simplex(&self, s: &Subset) -> bool {
        self.simplices.binary_search(s).is_ok()
    }

    /// All faces of all maximal simplices, including the empty face.
    pub fn faces(&self) -> Vec<Subset> {
        let set: BTreeSet<Subset> = self.simplices.iter().flat_map(|s| s.subsets().collect::<Vec<_>>()).collect();
        set.into_iter().collect()
    }

    /// `ė(T)`: the internal `⌊δ/2⌋`-simplices.
    pub fn internal_simplices(&self) -> Vec<Subset> {
        let k = self.delta / 2 + 1;
        let mut set = BTreeSet::new();
        for s in &self.simplices {
            for f in s.subsets().filter(|f| f.len() == k) {
                if is_internal_simplex(&f, self.delta).unwrap_or(false) {
                    set.insert(f);
                }
            }
        }
        set.into_iter().collect()
    }

    pub fn key(&self) -> String {
        format_family(&self.simplices)
    }

    pub fn to_json(&self) -> TriangulationJson {
        TriangulationJson {
            n: self.n,
            delta: self.delta,
            simplices: self.simplices.iter().map(|s| RawSubset(s.to_vec())).collect(),
        }
    }

    pub fn from_json(j: &TriangulationJson) -> Result<Self> {
        let simplices = j.simplices.iter().map(|r| r.resolve(j.n)).collect::<Result<Vec<_>>>()?;
        Triangulation::new(j.n, j.delta, simplices)
    }
}

impl fmt::Display for Triangulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.key())
    }
}

impl Serialize for Triangulation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

/// Even (δ+1)-subsets: the lower facets of `C(n, δ+1)`.
pub fn lower_triangulation(n: usize, delta: usize) -> Result<Triangulation> {
    check_params(n, delta)?;
    let v = k_subsets(n, delta + 1).into_iter().filter(is_even_subset).collect();
    Ok(Triangulation::from_sorted_checked(n, delta, v))
}

/// Odd (δ+1)-subsets: the upper facets of `C(n, δ+1)`.
pub fn upper_triangulation(n: usize, delta: usize) -> Result<Triangulation> {
    check_params(n, delta)?;
    let v = k_subsets(n, delta + 1).into_iter().filter(is_odd_subset).collect();
    Ok(Triangulation::from_sorted_checked(n, delta, v))
}

impl Triangulation {
    fn from_sorted_checked(n: usize, delta: usize, mut v: Vec<Subset>) -> Self {
        v.sort();
        Triangulation { n, delta, simplices: v }
    }
}

/// The local move at a `(δ+2)`-set `S`: its lower facets are replaced by
/// its upper facets.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct FlipDescriptor {
    pub s: Subset,
    pub removed: Vec<Subset>,
    pub added: Vec<Subset>,
}

impl FlipDescriptor {
    /// Splits the facets of `|S|` by their position from the top of `S`.
    pub fn at(s: &Subset, delta: usize) -> Result<Self> {
        if s.len() != delta + 2 {
            return Err(Error::WrongCardinality { expected: delta + 2, set: *s });
        }
        let mut removed = Vec::new();
        let mut added = Vec::new();
        for (i, e) in s.iter().enumerate() {
            let facet = s.remove(e);
            if (delta + 1 - i).is_multiple_of(2) {
                removed.push(facet);
            } else {
                added.push(facet);
            }
        }
        removed.sort();
        added.sort();
        Ok(FlipDescriptor { s: *s, removed, added })
    }

    pub fn apply(&self, t: &Triangulation) -> Result<Triangulation> {
        if !self.removed.iter().all(|r| t.contains_simplex(r)) {
            return Err(Error::NotACover(format!("flip at {} is not available in {}", self.s, t)));
        }
        let mut v: Vec<Subset> = t.simplices.iter().filter(|x| !self.removed.contains(x)).copied().collect();
        v.extend(self.added.iter().copied());
        v.sort();
        Ok(Triangulation::from_sorted(t.n, t.delta, v))
    }
}

/// All increasing flips of `T`, ordered by the flip set `S`.
pub fn increasing_flips(t: &Triangulation) -> Vec<(FlipDescriptor, Triangulation)> {
    let present: HashSet<u32> = t.simplices.iter().map(|s| s.bits()).collect();
    let mut out = Vec::new();
    for s in k_subsets(t.n, t.delta + 2) {
        let fd = FlipDescriptor::at(&s, t.delta).expect("size is δ+2");
        if fd.removed.iter().all(|r| present.contains(&r.bits())) {
            let next = fd.apply(t).expect("checked availability");
            out.push((fd, next));
        }
    }
    out
}

/// The flip taking `t` to `u`, if `t ⋖ u`.
pub fn flip_between(t: &Triangulation, u: &Triangulation) -> Option<FlipDescriptor> {
    if t.n != u.n || t.delta != u.delta {
        return None;
    }
    let removed: Vec<Subset> = t.simplices.iter().filter(|x| !u.contains_simplex(x)).copied().collect();
    let added: Vec<Subset> = u.simplices.iter().filter(|x| !t.contains_simplex(x)).copied().collect();
    let s = removed.iter().chain(&added).fold(Subset::empty(t.n), |acc, x| acc.union(x));
    if s.len() != t.delta + 2 {
        return None;
    }
    let fd = FlipDescriptor::at(&s, t.delta).ok()?;
    (fd.removed == removed && fd.added == added).then_some(fd)
}

pub fn enumerate_hst(n: usize, delta: usize, limits: &Limits) -> Result<Enumeration<Triangulation>> {
    let start = lower_triangulation(n, delta)?;
    let e = bfs_closure(
        start,
        Triangulation::key,
        |t| Ok(increasing_flips(t).into_iter().map(|(_, u)| u).collect()),
        limits,
    )?;
    let top = e.poset.maximal_elements()[0];
    if e.elements[top] != upper_triangulation(n, delta)? {
        return Err(Error::Internal("maximum of S(n, δ) is not the upper triangulation".into()));
    }
    Ok(e)
}

/// Result of [`validate`]; violations are listed in check order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub violations: Vec<String>,
}

/// `∏_{i<j} (a_j - a_i)` over the sorted vertices, i.e. `δ!` times the
/// normalised volume of `|A|` on the moment curve with `t_i = i`.
fn vandermonde(a: &Subset) -> Option<u128> {
    let v = a.to_vec();
    let mut acc: u128 = 1;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            acc = acc.checked_mul((v[j] - v[i]) as u128)?;
        }
    }
    Some(acc)
}

fn total_volume(simplices: &[Subset]) -> Option<u128> {
    simplices.iter().try_fold(0u128, |acc, s| acc.checked_add(vandermonde(s)?))
}

/// Checks boundary coverage, the circuit rule and the exact volume identity.
pub fn validate(t: &Triangulation) -> ValidationReport {
    let mut violations = Vec::new();
    let (n, delta) = (t.n, t.delta);

    for f in k_subsets(n, delta) {
        if gale_kind(&f, delta).map(|k| k != GaleKind::Neither).unwrap_or(false)
            && !t.simplices.iter().any(|s| f.is_subset_of(s))
        {
            violations.push(format!("boundary facet {f} is not covered"));
        }
    }

    'circuits: for (i, a) in t.simplices.iter().enumerate() {
        for b in &t.simplices[i + 1..] {
            if contains_circuit_halves(a.bits(), b.bits(), delta) || contains_circuit_halves(b.bits(), a.bits(), delta) {
                violations.push(format!("simplices {a} and {b} contain opposite halves of a circuit"));
                break 'circuits;
            }
        }
    }

    let lower = k_subsets(n, delta + 1).into_iter().filter(is_even_subset).collect::<Vec<_>>();
    match (total_volume(&t.simplices), total_volume(&lower)) {
        (Some(v), Some(w)) if v != w => violations.push(format!("volume {v} differs from the polytope volume {w}")),
        (None, _) | (_, None) => violations.push("volume computation overflowed".into()),
        _ => {}
    }

    ValidationReport { valid: violations.is_empty(), violations }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tri(n: usize, delta: usize, s: &str) -> Triangulation {
        Triangulation::parse(n, delta, s).unwrap()
    }

    fn labels(v: &[Subset]) -> Vec<String> {
        v.iter().map(|s| s.label()).collect()
    }

    #[test]
    fn canonical_triangulations() {
        assert_eq!(labels(lower_triangulation(6, 2).unwrap().simplices()), ["123", "134", "145", "156"]);
        assert_eq!(labels(lower_triangulation(4, 1).unwrap().simplices()), ["12", "23", "34"]);
        assert_eq!(labels(upper_triangulation(4, 1).unwrap().simplices()), ["14"]);
        assert!(lower_triangulation(2, 2).is_err());
    }

    #[test]
    fn internal_simplices_examples() {
        assert_eq!(labels(&tri(4, 1, "13 34").internal_simplices()), ["3"]);
        assert_eq!(labels(&tri(4, 2, "123 134").internal_simplices()), ["13"]);
        assert_eq!(labels(&lower_triangulation(6, 2).unwrap().internal_simplices()), ["13", "14", "15"]);
    }

    #[test]
    fn flip_descriptor_at_1236() {
        let fd = FlipDescriptor::at(&Subset::parse(7, "1236").unwrap(), 2).unwrap();
        assert_eq!(labels(&fd.removed), ["123", "136"]);
        assert_eq!(labels(&fd.added), ["126", "236"]);
    }

    #[test]
    fn flips_of_lower_segment_triangulation() {
        let flips = increasing_flips(&lower_triangulation(4, 1).unwrap());
        let sets: Vec<String> = flips.iter().map(|(f, _)| f.s.label()).collect();
        assert_eq!(sets, ["123", "234"]);
        assert!(increasing_flips(&upper_triangulation(6, 2).unwrap()).is_empty());
    }

    #[test]
    fn heptagon_flip_at_1236() {
        // ė = {13, 16, 35, 36}
        let t = tri(7, 2, "123 136 345 356 167");
        assert!(validate(&t).valid, "{:?}", validate(&t));
        assert_eq!(labels(&t.internal_simplices()), ["13", "16", "35", "36"]);
        let (_, u) = increasing_flips(&t).into_iter().find(|(f, _)| f.s.label() == "1236").unwrap();
        assert_eq!(labels(&u.internal_simplices()), ["16", "26", "35", "36"]);
        assert_eq!(flip_between(&t, &u).unwrap().s.label(), "1236");
        assert!(flip_between(&u, &t).is_none());
    }

    #[test]
    fn validation_examples() {
        assert!(validate(&tri(4, 2, "123 134")).valid);
        let bad = validate(&tri(4, 2, "123 124"));
        assert!(!bad.valid);
        assert!(bad.violations.iter().any(|v| v.contains("34")));
        let bad = validate(&tri(4, 1, "13"));
        assert!(!bad.valid);
        assert!(bad.violations[0].contains("facet"));
    }

    #[test]
    fn small_counts() {
        let lim = Limits::default();
        assert_eq!(enumerate_hst(4, 1, &lim).unwrap().elements.len(), 4);
        assert_eq!(enumerate_hst(5, 2, &lim).unwrap().elements.len(), 5);
        assert_eq!(enumerate_hst(6, 2, &lim).unwrap().elements.len(), 14);
    }

    #[test]
    fn json_round_trip() {
        let t = tri(6, 2, "123 134 145 156");
        let s = serde_json::to_string(&t).unwrap();
        assert_eq!(s, r#"{"n":6,"delta":2,"simplices":[[1,2,3],[1,3,4],[1,4,5],[1,5,6]]}"#);
        let back = Triangulation::from_json(&serde_json::from_str(&s).unwrap()).unwrap();
        assert_eq!(back, t);
    }
}
