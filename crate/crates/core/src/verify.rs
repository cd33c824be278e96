//! End-to-end check that `g: B(n, δ+1) → S(n, δ)` is a quotient map.

use serde::Serialize;

use crate::crosssection::g_assignment;
use crate::enumerate::Enumeration;
use crate::error::Result;
use crate::poset::{analyze_map, is_isomorphic, quotient, PosetMap, QuotientReport};
use crate::simplicial::Triangulation;
use crate::subset::binomial;
use crate::zonotopal::{spectrum_size, Cubillage};

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub n: usize,
    pub delta: usize,
    pub bruhat_size: usize,
    pub hst_size: usize,
    pub map: QuotientReport,
    /// Fibre quotient is a poset.
    pub quotient_is_poset: bool,
    /// Fibre quotient has exactly the order of `S(n, δ)` (class `i` ↦ triangulation `i`).
    pub quotient_matches_target: bool,
    /// Independent structural isomorphism check of the same two posets.
    pub quotient_isomorphic: bool,
    /// `#Sp` and `#ISp` of every cubillage.
    pub cardinalities_ok: bool,
    pub pass: bool,
}

pub fn verify_enumerations(bruhat: &Enumeration<Cubillage>, hst: &Enumeration<Triangulation>) -> Result<VerifyReport> {
    let first = &bruhat.elements[0];
    let (n, delta) = (first.n(), first.delta());
    let assignment = g_assignment(bruhat, hst)?;
    let map = analyze_map(&PosetMap::new(&bruhat.poset, &hst.poset, assignment.clone())?)?;
    let (mut quotient_is_poset, mut quotient_matches_target, mut quotient_isomorphic) = (false, false, false);
    if map.is_surjective {
        if let Ok(q) = quotient(&bruhat.poset, &assignment)? {
            quotient_is_poset = true;
            let (a, b) = (q.closure()?, hst.poset.closure()?);
            quotient_matches_target = q.len() == hst.poset.len()
                && (0..q.len()).all(|i| (0..q.len()).all(|j| a.leq(i, j) == b.leq(i, j)));
            quotient_isomorphic = is_isomorphic(&q, &hst.poset)?.is_some();
        }
    }
    let (sp, isp) = (spectrum_size(n, delta + 1), binomial(n - 1, delta + 1));
    let cardinalities_ok = bruhat
        .elements
        .iter()
        .all(|q| q.spectrum().len() == sp && q.internal_spectrum().len() == isp);
    let pass = map.is_quotient_map && quotient_is_poset && quotient_matches_target && quotient_isomorphic && cardinalities_ok;
    Ok(VerifyReport {
        n,
        delta,
        bruhat_size: bruhat.elements.len(),
        hst_size: hst.elements.len(),
        map,
        quotient_is_poset,
        quotient_matches_target,
        quotient_isomorphic,
        cardinalities_ok,
        pass,
    })
}

/// Default `(δ, n)` grid.
pub const DEFAULT_GRID: &[(usize, usize)] =
    &[(1, 4), (1, 5), (1, 6), (1, 7), (2, 4), (2, 5), (2, 6), (2, 7), (3, 5), (3, 6)];

/// Extra cells added by `--extend`.
pub const EXTENDED_GRID: &[(usize, usize)] = &[(3, 7), (4, 6), (4, 7)];
