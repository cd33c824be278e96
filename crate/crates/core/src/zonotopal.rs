//! Cubillages of the cyclic zonotope `Z(n, δ+1)`, encoded by their spectra
//! (maximal δ-separated collections), and the higher Bruhat order `B(n, δ+1)`.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::enumerate::{bfs_closure, Enumeration, Limits};
use crate::error::{Error, Result};
use crate::ground::{first_interweaving_pair, is_internal_point, separated_bits, tightly_interweaves};
use crate::subset::{binomial, format_family, k_subsets, RawSubset, Subset};

fn check_params(n: usize, dim: usize) -> Result<()> {
    if dim == 0 {
        return Err(Error::InvalidParameters("zonotope dimension must be at least 1".into()));
    }
    if n < dim {
        return Err(Error::InvalidParameters(format!("need n >= δ+1, got n={n}, δ+1={dim}")));
    }
    if n >= crate::subset::MAX_N {
        return Err(Error::InvalidParameters(format!("n={n} is too large")));
    }
    Ok(())
}

/// `Σ_{i ≤ dim} C(n, i)`.
pub fn spectrum_size(n: usize, dim: usize) -> usize {
    (0..=dim).map(|i| binomial(n, i)).sum()
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cubillage {
    n: usize,
    dim: usize,
    spectrum: Vec<Subset>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CubillageJson {
    pub n: usize,
    pub dim: usize,
    pub spectrum: Vec<RawSubset>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inversion_set: Option<Vec<RawSubset>>,
}

impl Cubillage {
    /// Validating constructor: separation, cardinality and boundary checks.
    pub fn new(n: usize, dim: usize, spectrum: impl IntoIterator<Item = Subset>) -> Result<Self> {
        check_params(n, dim)?;
        let mut v: Vec<Subset> = spectrum.into_iter().collect();
        if let Some(bad) = v.iter().find(|s| s.n() != n) {
            return Err(Error::Mismatch(format!("{bad} is over [{}], expected [{n}]", bad.n())));
        }
        v.sort();
        v.dedup();
        let q = Cubillage { n, dim, spectrum: v };
        q.check()?;
        Ok(q)
    }

    pub(crate) fn from_sorted(n: usize, dim: usize, spectrum: Vec<Subset>) -> Self {
        debug_assert!(spectrum.windows(2).all(|w| w[0] < w[1]));
        Cubillage { n, dim, spectrum }
    }

    fn check(&self) -> Result<()> {
        let delta = self.delta();
        let want = spectrum_size(self.n, self.dim);
        if self.spectrum.len() != want {
            return Err(Error::InvalidCubillage(format!(
                "spectrum has {} elements, a cubillage of Z({}, {}) has {want}",
                self.spectrum.len(),
                self.n,
                self.dim
            )));
        }
        if let Some((a, b)) = first_interweaving_pair(&self.spectrum, delta) {
            return Err(Error::InvalidCubillage(format!("{a} and {b} are not {delta}-separated")));
        }
        let internal = self.spectrum.iter().filter(|a| is_internal_point(a, delta)).count();
        let want_internal = binomial(self.n - 1, self.dim);
        if internal != want_internal {
            return Err(Error::InvalidCubillage(format!(
                "{internal} internal vertices, expected {want_internal}"
            )));
        }
        Ok(())
    }

    pub fn parse(n: usize, dim: usize, s: &str) -> Result<Self> {
        Cubillage::new(n, dim, crate::subset::parse_family(n, s)?)
    }

    /// Builds a cubillage from its internal spectrum; boundary vertices are
    /// added automatically.
    pub fn from_internal(n: usize, dim: usize, internal: impl IntoIterator<Item = Subset>) -> Result<Self> {
        check_params(n, dim)?;
        let delta = dim - 1;
        let mut v = crate::ground::boundary_points(n, delta);
        for s in internal {
            if !is_internal_point(&s, delta) {
                return Err(Error::InvalidCubillage(format!("{s} is not an internal point")));
            }
            v.push(s);
        }
        Cubillage::new(n, dim, v)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn delta(&self) -> usize {
        self.dim - 1
    }

    pub fn spectrum(&self) -> &[Subset] {
        &self.spectrum
    }

    pub fn contains(&self, s: &Subset) -> bool {
        self.spectrum.binary_search(s).is_ok()
    }

    /// Vertices projecting to the interior.
    pub fn internal_spectrum(&self) -> Vec<Subset> {
        let delta = self.delta();
        self.spectrum.iter().filter(|a| is_internal_point(a, delta)).copied().collect()
    }

    /// Key used in posets and on disk: the internal spectrum.
    pub fn key(&self) -> String {
        format_family(&self.internal_spectrum())
    }

    pub fn to_json(&self, with_inversion_set: bool) -> Result<CubillageJson> {
        let inversion_set = if with_inversion_set {
            Some(inversion_set_of(self)?.members.iter().map(|s| RawSubset(s.to_vec())).collect())
        } else {
            None
        };
        Ok(CubillageJson {
            n: self.n,
            dim: self.dim,
            spectrum: self.spectrum.iter().map(|s| RawSubset(s.to_vec())).collect(),
            inversion_set,
        })
    }

    pub fn from_json(j: &CubillageJson) -> Result<Self> {
        let spectrum = j.spectrum.iter().map(|r| r.resolve(j.n)).collect::<Result<Vec<_>>>()?;
        let q = Cubillage::new(j.n, j.dim, spectrum)?;
        if let Some(inv) = &j.inversion_set {
            let given = InversionSet::new(j.n, q.delta(), inv.iter().map(|r| r.resolve(j.n)).collect::<Result<Vec<_>>>()?)?;
            if given != inversion_set_of(&q)? {
                return Err(Error::InvalidCubillage("inversion_set field does not match the spectrum".into()));
            }
        }
        Ok(q)
    }
}

impl fmt::Display for Cubillage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.key())
    }
}

/// A cube of a cubillage: `{E ∪ S : S ⊆ A}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Cube {
    pub initial: Subset,
    pub generators: Subset,
}

impl Cube {
    pub fn final_vertex(&self) -> Subset {
        self.initial.union(&self.generators)
    }
}

/// A set of `(δ+2)`-subsets of `[n]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct InversionSet {
    pub n: usize,
    pub delta: usize,
    pub members: Vec<Subset>,
}

impl InversionSet {
    pub fn new(n: usize, delta: usize, members: impl IntoIterator<Item = Subset>) -> Result<Self> {
        check_params(n, delta + 1)?;
        let mut v: Vec<Subset> = members.into_iter().collect();
        for s in &v {
            if s.n() != n {
                return Err(Error::Mismatch(format!("{s} is over [{}], expected [{n}]", s.n())));
            }
            if s.len() != delta + 2 {
                return Err(Error::WrongCardinality { expected: delta + 2, set: *s });
            }
        }
        v.sort();
        v.dedup();
        Ok(InversionSet { n, delta, members: v })
    }

    pub fn empty(n: usize, delta: usize) -> Result<Self> {
        InversionSet::new(n, delta, [])
    }

    pub fn full(n: usize, delta: usize) -> Result<Self> {
        InversionSet::new(n, delta, k_subsets(n, delta + 2))
    }

    pub fn contains(&self, k: &Subset) -> bool {
        self.members.binary_search(k).is_ok()
    }
}

/// The `δ+2` maximal proper subsets of `K` in packet (lexicographic) order:
/// the largest element is dropped first.
pub fn packet(k: &Subset) -> Result<Vec<Subset>> {
    if k.is_empty() {
        return Err(Error::EmptySubset);
    }
    Ok(k.to_vec().into_iter().rev().map(|e| k.remove(e)).collect())
}

fn is_odd_gap(i: &Subset, e: usize) -> bool {
    i.count_above(e) % 2 == 1
}

/// Initial vertex `E(I)` of the cube generated by `I`, read off `inv`.
pub fn initial_vertex(inv: &InversionSet, i: &Subset) -> Subset {
    let mut e = Subset::empty(inv.n);
    for x in 1..=inv.n {
        if i.contains(x) {
            continue;
        }
        let inverted = inv.contains(&i.insert(x));
        // (not inverted ∧ odd gap) ∨ (inverted ∧ even gap)
        if inverted == is_odd_gap(i, x) {
            continue;
        }
        e = e.insert(x);
    }
    e
}

/// Packet digraph: an edge for each consecutive pair of each packet, in lex
/// or reverse-lex direction depending on membership in `inv`.
fn packet_digraph(inv: &InversionSet) -> (Vec<Subset>, Vec<Vec<usize>>) {
    let nodes = k_subsets(inv.n, inv.delta + 1);
    let index: HashMap<Subset, usize> = nodes.iter().enumerate().map(|(i, s)| (*s, i)).collect();
    let mut succ = vec![Vec::new(); nodes.len()];
    for k in k_subsets(inv.n, inv.delta + 2) {
        let mut p = packet(&k).expect("nonempty");
        if inv.contains(&k) {
            p.reverse();
        }
        for w in p.windows(2) {
            succ[index[&w[0]]].push(index[&w[1]]);
        }
    }
    for s in &mut succ {
        s.sort_unstable();
        s.dedup();
    }
    (nodes, succ)
}

fn is_acyclic(succ: &[Vec<usize>]) -> bool {
    let mut indeg = vec![0usize; succ.len()];
    for s in succ {
        for &t in s {
            indeg[t] += 1;
        }
    }
    let mut stack: Vec<usize> = (0..succ.len()).filter(|&i| indeg[i] == 0).collect();
    let mut seen = 0;
    while let Some(v) = stack.pop() {
        seen += 1;
        for &t in &succ[v] {
            indeg[t] -= 1;
            if indeg[t] == 0 {
                stack.push(t);
            }
        }
    }
    seen == succ.len()
}

/// Spectrum `⋃_I {E(I) ∪ S : S ⊆ I}` of the cubillage with inversion set `inv`.
pub fn cubillage_from_inversion_set(inv: &InversionSet) -> Result<Cubillage> {
    let (_, succ) = packet_digraph(inv);
    if !is_acyclic(&succ) {
        return Err(Error::InconsistentInversionSet("packet digraph has a cycle".into()));
    }
    let mut set = BTreeSet::new();
    for i in k_subsets(inv.n, inv.delta + 1) {
        let e = initial_vertex(inv, &i);
        for s in i.subsets() {
            set.insert(e.union(&s));
        }
    }
    let q = Cubillage::new(inv.n, inv.delta + 1, set).map_err(|e| Error::InconsistentInversionSet(e.to_string()))?;
    if &inversion_set_of(&q)? != inv {
        return Err(Error::InconsistentInversionSet("spectrum does not reproduce the inversion set".into()));
    }
    Ok(q)
}

/// One cube per `(δ+1)`-subset, located by scanning the spectrum.
pub fn cubes(q: &Cubillage) -> Result<Vec<Cube>> {
    let present: HashSet<u32> = q.spectrum.iter().map(|s| s.bits()).collect();
    let mut out = Vec::new();
    for a in k_subsets(q.n, q.dim) {
        let mut found: Option<Subset> = None;
        for x in &q.spectrum {
            if !x.is_disjoint(&a) || !present.contains(&x.union(&a).bits()) {
                continue;
            }
            if a.subsets().all(|s| present.contains(&x.union(&s).bits())) {
                if let Some(prev) = found {
                    return Err(Error::Internal(format!("generators {a} admit two initial vertices {prev} and {x}")));
                }
                found = Some(*x);
            }
        }
        match found {
            Some(e) => out.push(Cube { initial: e, generators: a }),
            None => return Err(Error::Internal(format!("no cube with generators {a}"))),
        }
    }
    Ok(out)
}

pub fn inversion_set_of(q: &Cubillage) -> Result<InversionSet> {
    let e: HashMap<Subset, Subset> = cubes(q)?.into_iter().map(|c| (c.generators, c.initial)).collect();
    let mut members = Vec::new();
    for k in k_subsets(q.n, q.dim + 1) {
        let mut verdict: Option<bool> = None;
        for x in k.iter() {
            let i = k.remove(x);
            let in_e = e[&i].contains(x);
            let inverted = if is_odd_gap(&i, x) { !in_e } else { in_e };
            match verdict {
                None => verdict = Some(inverted),
                Some(v) if v != inverted => {
                    return Err(Error::Internal(format!("packet {k} is read inconsistently")));
                }
                _ => {}
            }
        }
        if verdict == Some(true) {
            members.push(k);
        }
    }
    InversionSet::new(q.n, q.delta(), members)
}

/// A linear order on the `(δ+1)`-subsets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AdmissibleOrder {
    pub n: usize,
    pub delta: usize,
    pub sequence: Vec<Subset>,
}

impl fmt::Display for AdmissibleOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.sequence.iter().map(|s| s.label()).collect();
        f.write_str(&parts.join("<"))
    }
}

impl AdmissibleOrder {
    pub fn parse(n: usize, delta: usize, s: &str) -> Result<Self> {
        let sequence = s.split('<').map(|t| Subset::parse(n, t)).collect::<Result<Vec<_>>>()?;
        Ok(AdmissibleOrder { n, delta, sequence })
    }

    /// Inversion set, if every packet is lex or reverse-lex.
    pub fn inversion_set(&self) -> Option<InversionSet> {
        let all = k_subsets(self.n, self.delta + 1);
        if self.sequence.len() != all.len() {
            return None;
        }
        let pos: HashMap<Subset, usize> = self.sequence.iter().enumerate().map(|(i, s)| (*s, i)).collect();
        if pos.len() != all.len() || all.iter().any(|s| !pos.contains_key(s)) {
            return None;
        }
        let mut members = Vec::new();
        for k in k_subsets(self.n, self.delta + 2) {
            let p: Vec<usize> = packet(&k).ok()?.iter().map(|s| pos[s]).collect();
            if p.windows(2).all(|w| w[0] < w[1]) {
                continue;
            }
            if p.windows(2).all(|w| w[0] > w[1]) {
                members.push(k);
                continue;
            }
            return None;
        }
        InversionSet::new(self.n, self.delta, members).ok()
    }
}

pub fn is_admissible(order: &AdmissibleOrder) -> bool {
    order.inversion_set().is_some()
}

/// Lazy stream of the linear extensions of the packet digraph, in
/// lexicographic order of node indices.
pub struct AdmissibleOrders {
    n: usize,
    delta: usize,
    nodes: Vec<Subset>,
    succ: Vec<Vec<usize>>,
    indeg: Vec<usize>,
    placed: Vec<bool>,
    prefix: Vec<usize>,
    started: bool,
    done: bool,
}

impl AdmissibleOrders {
    fn place(&mut self, v: usize) {
        self.placed[v] = true;
        self.prefix.push(v);
        for &t in &self.succ[v] {
            self.indeg[t] -= 1;
        }
    }

    fn unplace(&mut self) -> Option<usize> {
        let v = self.prefix.pop()?;
        self.placed[v] = false;
        for &t in &self.succ[v] {
            self.indeg[t] += 1;
        }
        Some(v)
    }

    fn available_after(&self, after: Option<usize>) -> Option<usize> {
        let lo = after.map_or(0, |a| a + 1);
        (lo..self.nodes.len()).find(|&v| !self.placed[v] && self.indeg[v] == 0)
    }

    fn fill(&mut self) {
        while self.prefix.len() < self.nodes.len() {
            let v = self.available_after(None).expect("acyclic digraph always has a source");
            self.place(v);
        }
    }

    fn emit(&self) -> AdmissibleOrder {
        AdmissibleOrder { n: self.n, delta: self.delta, sequence: self.prefix.iter().map(|&i| self.nodes[i]).collect() }
    }
}

impl Iterator for AdmissibleOrders {
    type Item = AdmissibleOrder;

    fn next(&mut self) -> Option<AdmissibleOrder> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            self.fill();
            return Some(self.emit());
        }
        while let Some(last) = self.unplace() {
            if let Some(v) = self.available_after(Some(last)) {
                self.place(v);
                self.fill();
                return Some(self.emit());
            }
        }
        self.done = true;
        None
    }
}

pub fn admissible_orders(inv: &InversionSet) -> Result<AdmissibleOrders> {
    let (nodes, succ) = packet_digraph(inv);
    if !is_acyclic(&succ) {
        return Err(Error::InconsistentInversionSet("packet digraph has a cycle".into()));
    }
    let mut indeg = vec![0usize; nodes.len()];
    for s in &succ {
        for &t in s {
            indeg[t] += 1;
        }
    }
    let len = nodes.len();
    Ok(AdmissibleOrders {
        n: inv.n,
        delta: inv.delta,
        nodes,
        succ,
        indeg,
        placed: vec![false; len],
        prefix: Vec::with_capacity(len),
        started: false,
        done: false,
    })
}

/// `(V, V̄)`: generator sets whose cube has initial vertex `∅`, resp. final
/// vertex `[n]`.
pub fn visibility(inv: &InversionSet) -> (Vec<Subset>, Vec<Subset>) {
    let mut v = Vec::new();
    let mut vbar = Vec::new();
    for i in k_subsets(inv.n, inv.delta + 1) {
        let e = initial_vertex(inv, &i);
        if e.is_empty() {
            v.push(i);
        }
        if e.union(&i).is_full() {
            vbar.push(i);
        }
    }
    (v, vbar)
}

/// An increasing flip `Sp' = Sp ∖ {a} ∪ {b}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Exchange {
    pub a: Subset,
    pub b: Subset,
}

/// `K` has the alternating shape making `A △ K` tightly interweave from `A`:
/// counting from the top of `K`, even positions are outside `A`, odd inside.
fn fits_exchange_shape(a: u32, k: &Subset, delta: usize) -> bool {
    k.iter().enumerate().all(|(j, e)| {
        let inside = a & (1 << (e - 1)) != 0;
        inside == ((delta + 1 - j) % 2 == 1)
    })
}

/// Result of applying an exchange; no validation.
pub(crate) fn apply_exchange(q: &Cubillage, a: &Subset, b: &Subset) -> Cubillage {
    let mut v: Vec<Subset> = q.spectrum.iter().filter(|x| *x != a).copied().collect();
    let pos = v.binary_search(b).unwrap_or_else(|p| p);
    v.insert(pos, *b);
    Cubillage::from_sorted(q.n, q.dim, v)
}

/// All increasing covers of `Q`, ordered by `(A, B)`.
pub fn exchange_flips(q: &Cubillage) -> Vec<(Exchange, Cubillage)> {
    let delta = q.delta();
    let present: HashSet<u32> = q.spectrum.iter().map(|s| s.bits()).collect();
    let ks = k_subsets(q.n, delta + 2);
    let mut out = Vec::new();
    for a in q.internal_spectrum() {
        let ab = a.bits();
        for k in &ks {
            if !fits_exchange_shape(ab, k, delta) {
                continue;
            }
            let neighbours_ok = k.iter().all(|e| present.contains(&(ab ^ (1 << (e - 1)))));
            if !neighbours_ok {
                continue;
            }
            let b = Subset::from_bits(q.n, ab ^ k.bits());
            if present.contains(&b.bits()) {
                continue;
            }
            let ok = q.spectrum.iter().all(|x| x.bits() == ab || separated_bits(x.bits(), b.bits(), delta));
            if ok {
                out.push((Exchange { a, b }, apply_exchange(q, &a, &b)));
            }
        }
    }
    out.sort_by_key(|x| (x.0.a, x.0.b));
    out
}

/// The exchange taking `q` to `r`, if `q ⋖ r`.
pub fn exchange_between(q: &Cubillage, r: &Cubillage) -> Option<Exchange> {
    if q.n != r.n || q.dim != r.dim {
        return None;
    }
    let only_q: Vec<&Subset> = q.spectrum.iter().filter(|x| !r.contains(x)).collect();
    let only_r: Vec<&Subset> = r.spectrum.iter().filter(|x| !q.contains(x)).collect();
    if only_q.len() != 1 || only_r.len() != 1 {
        return None;
    }
    let (a, b) = (*only_q[0], *only_r[0]);
    tightly_interweaves(&a, &b, q.delta()).then_some(Exchange { a, b })
}

pub fn lower_cubillage(n: usize, dim: usize) -> Result<Cubillage> {
    check_params(n, dim)?;
    cubillage_from_inversion_set(&InversionSet::empty(n, dim - 1)?)
}

pub fn upper_cubillage(n: usize, dim: usize) -> Result<Cubillage> {
    check_params(n, dim)?;
    cubillage_from_inversion_set(&InversionSet::full(n, dim - 1)?)
}

pub fn enumerate_bruhat(n: usize, dim: usize, limits: &Limits) -> Result<Enumeration<Cubillage>> {
    check_params(n, dim)?;
    let start = lower_cubillage(n, dim)?;
    let e = bfs_closure(
        start,
        Cubillage::key,
        |q| Ok(exchange_flips(q).into_iter().map(|(_, r)| r).collect()),
        limits,
    )?;
    let top = e.poset.maximal_elements()[0];
    if e.elements[top] != upper_cubillage(n, dim)? {
        return Err(Error::Internal("maximum of B(n, δ+1) is not the upper cubillage".into()));
    }
    Ok(e)
}

/// Which extremal colour to contract.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Colour {
    First,
    Last,
}

fn contract_bits(x: &Subset, colour: Colour) -> Subset {
    let n = x.n();
    match colour {
        Colour::Last => Subset::from_bits(n - 1, x.bits()),
        Colour::First => Subset::from_bits(n - 1, x.bits() >> 1),
    }
}

/// `Q / i` for `i = n` or `i = 1`: the cubillage of `Z(n-1, δ+1)` obtained
/// by deleting the colour from every vertex.
pub fn contraction(q: &Cubillage, colour: Colour) -> Result<Cubillage> {
    if q.n <= q.dim {
        return Err(Error::OutOfDomain(format!("Z({}, {}) has no contraction", q.n, q.dim)));
    }
    let set: BTreeSet<Subset> = q.spectrum.iter().map(|x| contract_bits(x, colour)).collect();
    Cubillage::new(q.n - 1, q.dim, set).map_err(|e| Error::Internal(format!("contraction failed: {e}")))
}

/// Membrane inside `Q / n`: the vertices `X ⊆ [n-1]` with both `X` and
/// `X ∪ {n}` in the spectrum, as a cubillage of `Z(n-1, δ)`.
pub fn membrane_of_contraction(q: &Cubillage) -> Result<Cubillage> {
    if q.dim < 2 {
        return Err(Error::OutOfDomain("membranes need a zonotope of dimension at least 2".into()));
    }
    if q.n <= q.dim {
        return Err(Error::OutOfDomain(format!("Z({}, {}) has no contraction", q.n, q.dim)));
    }
    let top = 1u32 << (q.n - 1);
    let present: HashSet<u32> = q.spectrum.iter().map(|s| s.bits()).collect();
    let v: Vec<Subset> = q
        .spectrum
        .iter()
        .filter(|x| x.bits() & top == 0 && present.contains(&(x.bits() | top)))
        .map(|x| Subset::from_bits(q.n - 1, x.bits()))
        .collect();
    Cubillage::new(q.n - 1, q.dim - 1, v).map_err(|e| Error::Internal(format!("membrane is not a cubillage: {e}")))
}
