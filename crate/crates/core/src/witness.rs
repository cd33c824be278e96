//! Constructive certificates for surjectivity and fullness of `g`.

use std::collections::{BTreeSet, HashSet};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::ground::{hat, is_internal_point, separated_bits, tightly_interweaves};
use crate::poset::FinitePoset;
use crate::simplicial::{flip_between, Triangulation};
use crate::subset::{all_subsets, Subset};
use crate::zonotopal::{apply_exchange, exchange_between, membrane_of_contraction, Cubillage};

fn even_half(t: &Triangulation) -> Result<usize> {
    if !t.delta().is_multiple_of(2) {
        return Err(Error::OutOfDomain(format!("expected an even-dimensional triangulation, got δ={}", t.delta())));
    }
    Ok(t.delta() / 2)
}

/// `U(T)`: subsets whose cyclic hat spans a face of `T` of dimension `>= d`.
pub fn u_of(t: &Triangulation) -> Result<Vec<Subset>> {
    let d = even_half(t)?;
    let faces: HashSet<u32> = t.faces().iter().map(|f| f.bits()).collect();
    let mut out: Vec<Subset> = all_subsets(t.n())
        .filter(|i| !i.is_empty() && !i.is_full())
        .filter(|i| {
            let h = hat(i, true).expect("nonempty");
            h.len() > d && faces.contains(&h.bits())
        })
        .collect();
    out.sort();
    Ok(out)
}

/// `Q_T`: the cubillage of `Z(n, 2d+1)` with internal spectrum `U(T)`.
pub fn build_q_t(t: &Triangulation) -> Result<Cubillage> {
    let u = u_of(t)?;
    Cubillage::from_internal(t.n(), t.delta() + 1, u).map_err(|e| Error::Internal(format!("U(T) is not an internal spectrum: {e}")))
}

fn check_flip_set(s: &Subset) -> Result<usize> {
    if s.len() < 2 || !s.len().is_multiple_of(2) {
        return Err(Error::InvalidParameters(format!("flip set {s} must have an even size 2d+2 >= 2")));
    }
    Ok(s.len() / 2 - 1)
}

/// The four I-set families for a flip set `S`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ISets {
    pub lower: Vec<Subset>,
    pub upper: Vec<Subset>,
    pub lower_closed: Vec<Subset>,
    pub upper_closed: Vec<Subset>,
}

/// `S_l` (even positions) and `S_u` (odd positions) of the sorted `S`.
pub fn split_positions(s: &Subset) -> (Subset, Subset) {
    let mut l = Subset::empty(s.n());
    let mut u = Subset::empty(s.n());
    for (i, e) in s.iter().enumerate() {
        if i % 2 == 0 {
            l = l.insert(e);
        } else {
            u = u.insert(e);
        }
    }
    (l, u)
}

/// By definition: `S_l ⊆ Î ⊊ S` etc., over all subsets of `[n]`.
pub fn i_sets(s: &Subset) -> Result<ISets> {
    check_flip_set(s)?;
    let (sl, su) = split_positions(s);
    let mut r = ISets { lower: vec![], upper: vec![], lower_closed: vec![], upper_closed: vec![] };
    for i in all_subsets(s.n()).filter(|i| !i.is_empty()) {
        let h = hat(&i, true)?;
        if !h.is_subset_of(s) {
            continue;
        }
        let proper = h != *s;
        if sl.is_subset_of(&h) {
            r.lower_closed.push(i);
            if proper {
                r.lower.push(i);
            }
        }
        if su.is_subset_of(&h) {
            r.upper_closed.push(i);
            if proper {
                r.upper.push(i);
            }
        }
    }
    Ok(r)
}

/// `∏_j (s_{j+1} - s_j)` with the wrap difference taken mod `n`.
pub fn closed_count(s: &Subset) -> Result<u64> {
    check_flip_set(s)?;
    Ok(boxes(s).iter().map(|&b| b as u64).product())
}

/// Side lengths `s_{i+1} - s_i` (mod `n` for the last one).
pub fn boxes(s: &Subset) -> Vec<usize> {
    let v = s.to_vec();
    let k = v.len();
    (0..k)
        .map(|i| if i + 1 < k { v[i + 1] - v[i] } else { v[0] + s.n() - v[k - 1] })
        .collect()
}

/// Coordinates `(n_0, .., n_{2d+1})` relative to a flip set `S`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CoordinateVector {
    pub s: Subset,
    pub coords: Vec<usize>,
}

impl CoordinateVector {
    pub fn new(s: &Subset, coords: Vec<usize>) -> Result<Self> {
        check_flip_set(s)?;
        let b = boxes(s);
        if coords.len() != b.len() {
            return Err(Error::InvalidParameters(format!("{} coordinates for a flip set of size {}", coords.len(), b.len())));
        }
        if let Some(i) = (0..b.len()).find(|&i| coords[i] > b[i]) {
            return Err(Error::OutOfDomain(format!("coordinate n_{i}={} exceeds {}", coords[i], b[i])));
        }
        Ok(CoordinateVector { s: *s, coords })
    }

    fn shifted(&self, steps: isize) -> Option<CoordinateVector> {
        let b = boxes(&self.s);
        let mut c = Vec::with_capacity(self.coords.len());
        for (i, &x) in self.coords.iter().enumerate() {
            let dir = if i % 2 == 0 { -steps } else { steps };
            let y = x as isize + dir;
            if y < 0 || y > b[i] as isize {
                return None;
            }
            c.push(y as usize);
        }
        Some(CoordinateVector { s: self.s, coords: c })
    }

    /// Whether `φ(self)` lies in `I'_l`: even coordinates positive, odd ones short of their box.
    pub fn in_lower_closed(&self) -> bool {
        let b = boxes(&self.s);
        self.coords.iter().enumerate().all(|(i, &x)| if i % 2 == 0 { x > 0 } else { x < b[i] })
    }

    pub fn in_upper_closed(&self) -> bool {
        let b = boxes(&self.s);
        self.coords.iter().enumerate().all(|(i, &x)| if i % 2 == 0 { x < b[i] } else { x > 0 })
    }

    pub fn label(&self) -> String {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        format!("({})", parts.join(", "))
    }
}

/// `φ(n) = ⋃ [s_i, s_i + n_i - 1]`, read cyclically.
pub fn phi(v: &CoordinateVector) -> Subset {
    let n = v.s.n();
    let mut out = Subset::empty(n);
    for (s_i, &len) in v.s.iter().zip(&v.coords) {
        for k in 0..len {
            out = out.insert((s_i - 1 + k) % n + 1);
        }
    }
    out
}

/// Inverse of `φ` on its image: each segment `[s_i, s_{i+1} - 1]` must meet
/// `I` in an initial run.
pub fn phi_inverse(i: &Subset, s: &Subset) -> Result<CoordinateVector> {
    check_flip_set(s)?;
    if i.n() != s.n() {
        return Err(Error::Mismatch("subset and flip set live on different ground sets".into()));
    }
    let n = s.n();
    let b = boxes(s);
    let mut coords = Vec::with_capacity(b.len());
    for (s_i, &len) in s.iter().zip(&b) {
        let seg: Vec<usize> = (0..len).map(|k| (s_i - 1 + k) % n + 1).collect();
        let run = seg.iter().take_while(|&&e| i.contains(e)).count();
        if seg[run..].iter().any(|&e| i.contains(e)) {
            return Err(Error::OutOfDomain(format!("{i} is not of the form φ(n) for S={s}")));
        }
        coords.push(run);
    }
    Ok(CoordinateVector { s: *s, coords })
}

fn lambda(v: &CoordinateVector) -> usize {
    let b = boxes(&v.s);
    v.coords.iter().enumerate().map(|(i, &x)| if i % 2 == 0 { x } else { b[i] - x }).min().unwrap_or(0)
}

fn mu(v: &CoordinateVector) -> usize {
    let b = boxes(&v.s);
    v.coords.iter().enumerate().map(|(i, &x)| if i % 2 == 0 { b[i] - x } else { x }).min().unwrap_or(0)
}

/// Whether `φ(v) ∈ I_l`: in `I'_l` and some coordinate sits on the boundary.
pub fn in_lower(v: &CoordinateVector) -> bool {
    let b = boxes(&v.s);
    v.in_lower_closed() && v.coords.iter().enumerate().any(|(i, &x)| if i % 2 == 0 { x == b[i] } else { x == 0 })
}

pub fn in_upper(v: &CoordinateVector) -> bool {
    let b = boxes(&v.s);
    v.in_upper_closed() && v.coords.iter().enumerate().any(|(i, &x)| if i % 2 == 0 { x == 0 } else { x == b[i] })
}

/// `ψ: I_l → I_u`, `φ(n) ↦ φ(n + λ t)` with `t = (-1, 1, .., -1, 1)`.
/// Returns the image and `λ`.
pub fn psi(i: &Subset, s: &Subset) -> Result<(Subset, usize)> {
    let v = phi_inverse(i, s)?;
    if !in_lower(&v) {
        return Err(Error::OutOfDomain(format!("{i} is not in I_l({s}, {})", s.n())));
    }
    let l = lambda(&v);
    let w = v.shifted(l as isize).ok_or_else(|| Error::Internal("λ step left the box".into()))?;
    Ok((phi(&w), l))
}

/// `ψ⁻¹: I_u → I_l`, `φ(n) ↦ φ(n - μ t)`. Returns the image and `μ`.
pub fn psi_inverse(j: &Subset, s: &Subset) -> Result<(Subset, usize)> {
    let v = phi_inverse(j, s)?;
    if !in_upper(&v) {
        return Err(Error::OutOfDomain(format!("{j} is not in I_u({s}, {})", s.n())));
    }
    let m = mu(&v);
    let w = v.shifted(-(m as isize)).ok_or_else(|| Error::Internal("μ step left the box".into()))?;
    Ok((phi(&w), m))
}

/// Interweaving read off coordinates: `φ(v)` 2d-interweaves `φ(w)`
/// iff `w` is strictly smaller on even and strictly larger on odd coordinates.
pub fn coords_interweave(v: &CoordinateVector, w: &CoordinateVector) -> bool {
    v.coords
        .iter()
        .zip(&w.coords)
        .enumerate()
        .all(|(i, (&a, &b))| if i % 2 == 0 { b < a } else { a < b })
}

/// The exchange lattice on `I'(S, n) ∖ I_u(S, n)`, i.e. the box with even
/// coordinates in `[1, box]` and odd ones in `[0, box - 1]`, ordered by the
/// product order reversed on even coordinates.
#[derive(Debug, Clone)]
pub struct ExchangeLattice {
    pub points: Vec<CoordinateVector>,
    pub poset: FinitePoset,
}

pub fn exchange_lattice(s: &Subset) -> Result<ExchangeLattice> {
    check_flip_set(s)?;
    let b = boxes(s);
    let ranges: Vec<(usize, usize)> = b.iter().enumerate().map(|(i, &x)| if i % 2 == 0 { (1, x) } else { (0, x - 1) }).collect();
    let mut points = Vec::new();
    let mut cur: Vec<usize> = ranges.iter().map(|r| r.0).collect();
    if ranges.iter().all(|r| r.0 <= r.1) {
        'outer: loop {
            points.push(CoordinateVector { s: *s, coords: cur.clone() });
            let mut k = cur.len();
            loop {
                if k == 0 {
                    break 'outer;
                }
                k -= 1;
                if cur[k] < ranges[k].1 {
                    cur[k] += 1;
                    for j in k + 1..cur.len() {
                        cur[j] = ranges[j].0;
                    }
                    break;
                }
            }
        }
    }
    points.sort();
    let index: std::collections::HashMap<Vec<usize>, usize> =
        points.iter().enumerate().map(|(i, p)| (p.coords.clone(), i)).collect();
    let mut covers = Vec::new();
    for (i, p) in points.iter().enumerate() {
        for k in 0..p.coords.len() {
            let mut q = p.coords.clone();
            if k % 2 == 0 {
                if q[k] == 0 {
                    continue;
                }
                q[k] -= 1;
            } else {
                q[k] += 1;
            }
            if let Some(&j) = index.get(&q) {
                covers.push((i, j));
            }
        }
    }
    let keys = points.iter().map(|p| phi(p).label()).collect();
    let poset = FinitePoset::new(keys, covers)?;
    Ok(ExchangeLattice { points, poset })
}

impl ExchangeLattice {
    /// Linear extension taking the lexicographically least available
    /// coordinate vector at every step.
    pub fn linear_extension(&self) -> Vec<usize> {
        let len = self.points.len();
        let mut indeg: Vec<usize> = (0..len).map(|i| self.poset.lower_covers(i).len()).collect();
        let mut ready: BTreeSet<usize> = (0..len).filter(|&i| indeg[i] == 0).collect();
        let mut out = Vec::with_capacity(len);
        // points are sorted, so index order is lexicographic order
        while let Some(&v) = ready.iter().next() {
            ready.remove(&v);
            out.push(v);
            for &w in self.poset.upper_covers(v) {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    ready.insert(w);
                }
            }
        }
        out
    }
}

fn spectrum_hash(q: &Cubillage) -> String {
    let mut h = Sha256::new();
    for (k, x) in q.spectrum().iter().enumerate() {
        if k > 0 {
            h.update(b" ");
        }
        h.update(x.label().as_bytes());
    }
    hex::encode(h.finalize())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScheduleStep {
    pub from: Subset,
    pub to: Subset,
    pub coords: Vec<usize>,
    /// SHA-256 of the spectrum after this step.
    pub sha256: String,
}

/// A chain of increasing flips between two cubillages.
#[derive(Debug, Clone)]
pub struct ExchangeSchedule {
    pub flip_set: Subset,
    pub start: Cubillage,
    pub steps: Vec<ScheduleStep>,
    pub end: Cubillage,
}

impl ExchangeSchedule {
    /// Replays the steps from `start`, checking each is an increasing flip.
    pub fn replay(&self) -> Result<Vec<Cubillage>> {
        let mut cur = self.start.clone();
        let mut out = vec![cur.clone()];
        for (k, st) in self.steps.iter().enumerate() {
            let next = apply_exchange(&cur, &st.from, &st.to);
            if !cur.contains(&st.from) || exchange_between(&cur, &next).is_none() {
                return Err(Error::NotACover(format!("step {k}: {} -> {}", st.from, st.to)));
            }
            if let Some((a, b)) = crate::ground::first_interweaving_pair(next.spectrum(), cur.delta()) {
                return Err(Error::Internal(format!("step {k} leaves {a} and {b} interweaving")));
            }
            if spectrum_hash(&next) != st.sha256 {
                return Err(Error::Internal(format!("step {k} hash mismatch")));
            }
            cur = next;
            out.push(cur.clone());
        }
        if cur != self.end {
            return Err(Error::Internal("schedule does not end at the target".into()));
        }
        Ok(out)
    }
}

/// Chain `Q_T ⋖ .. ⋖ Q_T'` for an even-dimensional cover `T ⋖ T'`,
/// one exchange `φ(n) ⟿ φ(n + t)` per lattice element.
pub fn even_fullness_chain(t: &Triangulation, t2: &Triangulation) -> Result<ExchangeSchedule> {
    let d = even_half(t)?;
    if d == 0 {
        return Err(Error::OutOfDomain("δ must be positive".into()));
    }
    let fd = flip_between(t, t2).ok_or_else(|| Error::NotACover(format!("{t} ⋖ {t2} does not hold")))?;
    let start = build_q_t(t)?;
    let end = build_q_t(t2)?;
    let lattice = exchange_lattice(&fd.s)?;
    let delta = t.delta();
    let mut cur = start.clone();
    let mut steps = Vec::with_capacity(lattice.points.len());
    for (step, idx) in lattice.linear_extension().into_iter().enumerate() {
        let v = &lattice.points[idx];
        let a = phi(v);
        let w = v.shifted(1).ok_or_else(|| Error::Internal(format!("{} has no successor", v.label())))?;
        let b = phi(&w);
        let fail = |reason: String| Error::ScheduleFailed { step, from: a, to: b, reason };
        if !cur.contains(&a) {
            return Err(fail(format!("{a} is not in the current collection")));
        }
        if !tightly_interweaves(&a, &b, delta) {
            let reason = if tightly_interweaves(&b, &a, delta) {
                format!("{b} tightly interweaves {a}, so the exchange is decreasing")
            } else {
                format!("{a} does not tightly interweave {b}")
            };
            return Err(fail(reason));
        }
        if let Some(x) = cur.spectrum().iter().find(|x| **x != a && !separated_bits(x.bits(), b.bits(), delta)) {
            return Err(fail(format!("{b} is not separated from {x}")));
        }
        cur = apply_exchange(&cur, &a, &b);
        steps.push(ScheduleStep { from: a, to: b, coords: v.coords.clone(), sha256: spectrum_hash(&cur) });
    }
    if cur != end {
        return Err(Error::Internal("schedule does not reach Q_T'".into()));
    }
    Ok(ExchangeSchedule { flip_set: fd.s, start, steps, end })
}

/// Membranes of a cover chain under contraction of the last colour, with
/// consecutive duplicates removed. Consecutive outputs are downward covers:
/// going up in the input moves the membrane down.
pub fn membrane_chain(chain: &[Cubillage]) -> Result<Vec<Cubillage>> {
    for (k, w) in chain.windows(2).enumerate() {
        if exchange_between(&w[0], &w[1]).is_none() {
            return Err(Error::NotACover(format!("chain step {k} is not a cover")));
        }
    }
    let mut out: Vec<Cubillage> = Vec::new();
    for q in chain {
        let m = membrane_of_contraction(q)?;
        if out.last() != Some(&m) {
            if let Some(prev) = out.last() {
                if exchange_between(&m, prev).is_none() {
                    return Err(Error::Internal(format!("membranes {prev} and {m} are neither equal nor a cover")));
                }
            }
            out.push(m);
        }
    }
    Ok(out)
}

/// A cubillage `Q` of `Z(n, δ+1)` with `Sp(Q) ⊇ Σ(T)`, found by completing
/// the faces of `T` to a maximal separated collection.
pub fn preimage_by_completion(t: &Triangulation) -> Result<Cubillage> {
    let (n, delta) = (t.n(), t.delta());
    let dim = delta + 1;
    let target = crate::subset::binomial(n - 1, dim);
    let forced: Vec<Subset> = t.faces().into_iter().filter(|f| is_internal_point(f, delta)).collect();
    if let Some((a, b)) = crate::ground::first_interweaving_pair(&forced, delta) {
        return Err(Error::InvalidTriangulation(format!("faces {a} and {b} interweave")));
    }
    let forced_set: HashSet<u32> = forced.iter().map(|f| f.bits()).collect();
    let cands: Vec<u32> = all_subsets(n)
        .filter(|x| is_internal_point(x, delta) && !forced_set.contains(&x.bits()))
        .filter(|x| forced.iter().all(|f| separated_bits(f.bits(), x.bits(), delta)))
        .map(|x| x.bits())
        .collect();
    let mut chosen: Vec<u32> = Vec::new();
    let need = target
        .checked_sub(forced.len())
        .ok_or_else(|| Error::InvalidTriangulation("too many internal faces".into()))?;
    if !complete(&mut chosen, &cands, need, delta) {
        return Err(Error::SearchExhausted(format!("no cubillage of Z({n}, {dim}) contains the faces of {t}")));
    }
    let internal = forced.into_iter().chain(chosen.into_iter().map(|b| Subset::from_bits(n, b)));
    Cubillage::from_internal(n, dim, internal)
}

fn complete(chosen: &mut Vec<u32>, cands: &[u32], need: usize, delta: usize) -> bool {
    if chosen.len() == need {
        return true;
    }
    if chosen.len() + cands.len() < need {
        return false;
    }
    for (k, &c) in cands.iter().enumerate() {
        if chosen.len() + (cands.len() - k) < need {
            return false;
        }
        let rest: Vec<u32> = cands[k + 1..].iter().copied().filter(|&x| separated_bits(x, c, delta)).collect();
        chosen.push(c);
        if complete(chosen, &rest, need, delta) {
            return true;
        }
        chosen.pop();
    }
    false
}

/// [`preimage_by_completion`] restricted to odd `δ`.
pub fn odd_preimage(t: &Triangulation) -> Result<Cubillage> {
    if t.delta().is_multiple_of(2) {
        return Err(Error::OutOfDomain(format!("expected an odd-dimensional triangulation, got δ={}", t.delta())));
    }
    preimage_by_completion(t)
}
