//! The cross-section map `g: B(n, δ+1) → S(n, δ)` and its dual `ḡ`.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::enumerate::Enumeration;
use crate::error::{Error, Result};
use crate::ground::is_internal_simplex;
use crate::simplicial::{validate, Triangulation};
use crate::subset::{k_subsets, Subset};
use crate::zonotopal::{cubes, inversion_set_of, visibility, Cubillage};

fn check_dim(q: &Cubillage) -> Result<()> {
    if q.dim() < 2 {
        return Err(Error::OutOfDomain("the cross-section needs a zonotope of dimension at least 2".into()));
    }
    Ok(())
}

/// `g(Q)`: generator sets of the cubes with initial vertex `∅`.
pub fn g(q: &Cubillage) -> Result<Triangulation> {
    check_dim(q)?;
    let simplices = cubes(q)?.into_iter().filter(|c| c.initial.is_empty()).map(|c| c.generators);
    Triangulation::new(q.n(), q.delta(), simplices)
}

/// `ḡ(Q)`: generator sets of the cubes with final vertex `[n]`.
pub fn g_bar(q: &Cubillage) -> Result<Triangulation> {
    check_dim(q)?;
    let simplices = cubes(q)?.into_iter().filter(|c| c.final_vertex().is_full()).map(|c| c.generators);
    Triangulation::new(q.n(), q.delta(), simplices)
}

/// `(δ+1)`-subsets whose whole face lattice lies in the spectrum.
pub fn g_containment(q: &Cubillage) -> Result<Triangulation> {
    check_dim(q)?;
    let simplices = k_subsets(q.n(), q.dim()).into_iter().filter(|a| a.subsets().all(|s| q.contains(&s)));
    Triangulation::new(q.n(), q.delta(), simplices)
}

/// `ISp(Q) ∩ C([n], ⌊δ/2⌋+1)`, which equals `ė(g(Q))`.
pub fn internal_cross_section(q: &Cubillage) -> Vec<Subset> {
    let k = q.delta() / 2 + 1;
    q.internal_spectrum().into_iter().filter(|a| a.len() == k).collect()
}

/// `ė(ḡ(Q))` read off the spectrum: complements of its `(n-⌊δ/2⌋-1)`-subsets.
pub fn internal_cross_section_bar(q: &Cubillage) -> Vec<Subset> {
    let k = q.n() - q.delta() / 2 - 1;
    let mut v: Vec<Subset> = q
        .spectrum()
        .iter()
        .filter(|a| a.len() == k)
        .map(|a| a.complement())
        .filter(|a| is_internal_simplex(a, q.delta()).unwrap_or(false))
        .collect();
    v.sort();
    v
}

/// Whether `Sp(Q) ⊇ Σ(T)`, i.e. whether `g(Q) = T`.
pub fn g_containment_check(q: &Cubillage, t: &Triangulation) -> Result<bool> {
    if q.n() != t.n() || q.delta() != t.delta() {
        return Err(Error::Mismatch(format!(
            "cubillage of Z({}, {}) against triangulation of C({}, {})",
            q.n(),
            q.dim(),
            t.n(),
            t.delta()
        )));
    }
    Ok(t.faces().iter().all(|f| q.contains(f)))
}

/// Lookup of triangulations by their internal simplices.
#[derive(Debug, Clone)]
pub struct InternalIndex {
    by_internal: HashMap<Vec<Subset>, Triangulation>,
}

impl InternalIndex {
    pub fn new(hst: &Enumeration<Triangulation>) -> Self {
        let by_internal = hst.elements.iter().map(|t| (t.internal_simplices(), t.clone())).collect();
        InternalIndex { by_internal }
    }

    pub fn get(&self, internal: &[Subset]) -> Option<&Triangulation> {
        self.by_internal.get(internal)
    }

    pub fn len(&self) -> usize {
        self.by_internal.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_internal.is_empty()
    }
}

/// `g(Q)` in all three characterizations, for auditing.
#[derive(Debug, Clone, Serialize)]
pub struct CrossSectionResult {
    /// Cubes with initial vertex `∅`.
    pub triangulation: Triangulation,
    /// `ISp(Q) ∩ C([n], ⌊δ/2⌋+1)`.
    pub source_internal: Vec<Subset>,
    /// `V(inv(Q))`.
    pub visible: Vec<Subset>,
    /// Maximal simplices whose faces all lie in the spectrum.
    pub containment: Triangulation,
    /// Triangulation with `ė = source_internal`, when an index is supplied.
    pub by_internal_spectrum: Option<Triangulation>,
    pub valid: bool,
    pub agree: bool,
}

pub fn cross_section(q: &Cubillage, index: Option<&InternalIndex>) -> Result<CrossSectionResult> {
    let t = g(q)?;
    let source_internal = internal_cross_section(q);
    let (visible, _) = visibility(&inversion_set_of(q)?);
    let containment = g_containment(q)?;
    let by_internal_spectrum = index.and_then(|ix| ix.get(&source_internal)).cloned();
    let mut agree = t.simplices() == visible.as_slice()
        && containment == t
        && t.internal_simplices() == source_internal;
    if let Some(ix) = index {
        agree &= by_internal_spectrum.as_ref() == Some(&t) && !ix.is_empty();
    }
    Ok(CrossSectionResult {
        valid: validate(&t).valid,
        triangulation: t,
        source_internal,
        visible,
        containment,
        by_internal_spectrum,
        agree,
    })
}

/// Dual of [`CrossSectionResult`] for `ḡ`.
#[derive(Debug, Clone, Serialize)]
pub struct CrossSectionBarResult {
    /// Cubes with final vertex `[n]`.
    pub triangulation: Triangulation,
    /// Complements of `(n-⌊δ/2⌋-1)`-subsets in the spectrum.
    pub source_internal: Vec<Subset>,
    /// `V̄(inv(Q))`.
    pub covisible: Vec<Subset>,
    pub valid: bool,
    pub agree: bool,
}

pub fn cross_section_bar(q: &Cubillage) -> Result<CrossSectionBarResult> {
    let t = g_bar(q)?;
    let source_internal = internal_cross_section_bar(q);
    let (_, covisible) = visibility(&inversion_set_of(q)?);
    let agree = t.simplices() == covisible.as_slice() && t.internal_simplices() == source_internal;
    Ok(CrossSectionBarResult { valid: validate(&t).valid, triangulation: t, source_internal, covisible, agree })
}

/// Index of `g(Q)` in `hst` for every element of `bruhat`.
pub fn g_assignment(bruhat: &Enumeration<Cubillage>, hst: &Enumeration<Triangulation>) -> Result<Vec<usize>> {
    map_assignment(bruhat, hst, g)
}

/// Index of `ḡ(Q)` in `hst` for every element of `bruhat`.
pub fn g_bar_assignment(bruhat: &Enumeration<Cubillage>, hst: &Enumeration<Triangulation>) -> Result<Vec<usize>> {
    map_assignment(bruhat, hst, g_bar)
}

fn map_assignment(
    bruhat: &Enumeration<Cubillage>,
    hst: &Enumeration<Triangulation>,
    f: fn(&Cubillage) -> Result<Triangulation>,
) -> Result<Vec<usize>> {
    let lookup = hst.lookup();
    bruhat
        .elements
        .par_iter()
        .map(|q| {
            let t = f(q)?;
            lookup
                .get(&t)
                .copied()
                .ok_or_else(|| Error::Internal(format!("image {t} of {q} is not an enumerated triangulation")))
        })
        .collect()
}
