//! Finite posets given by their cover relations, order-preserving maps
//! between them and the quotient construction for fibres of such maps.
//!
//! Elements are opaque string keys; nothing here looks at domain structure.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense bitset rows; row `i` holds everything `>= i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderRelation {
    len: usize,
    words: usize,
    rows: Vec<u64>,
}

impl OrderRelation {
    fn new(len: usize) -> Self {
        let words = len.div_ceil(64).max(1);
        OrderRelation { len, words, rows: vec![0; len * words] }
    }

    #[inline]
    fn row(&self, i: usize) -> &[u64] {
        &self.rows[i * self.words..(i + 1) * self.words]
    }

    #[inline]
    fn set(&mut self, i: usize, j: usize) {
        self.rows[i * self.words + j / 64] |= 1 << (j % 64);
    }

    fn or_row_into(&mut self, dst: usize, src: usize) {
        let w = self.words;
        for k in 0..w {
            let v = self.rows[src * w + k];
            self.rows[dst * w + k] |= v;
        }
    }

    /// `i <= j`.
    #[inline]
    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.rows[i * self.words + j / 64] & (1 << (j % 64)) != 0
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Number of elements `>= i`.
    pub fn up_count(&self, i: usize) -> usize {
        self.row(i).iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Elements `>= i`.
    pub fn up_set(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        let row = self.row(i);
        (0..self.len).filter(move |&j| row[j / 64] & (1 << (j % 64)) != 0)
    }
}

#[derive(Debug, Clone)]
pub struct FinitePoset {
    keys: Vec<String>,
    index: HashMap<String, usize>,
    covers: Vec<(usize, usize)>,
    up: Vec<Vec<usize>>,
    down: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetJson {
    pub elements: Vec<String>,
    pub covers: Vec<(usize, usize)>,
}

impl FinitePoset {
    /// Builds a poset from keys and cover pairs `(lower, upper)`.
    ///
    /// Keys must be distinct and the covers must be acyclic. Irreducibility
    /// of the cover pairs is not checked here; see [`FinitePoset::check_covers`].
    pub fn new(keys: Vec<String>, covers: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut index = HashMap::with_capacity(keys.len());
        for (i, k) in keys.iter().enumerate() {
            if index.insert(k.clone(), i).is_some() {
                return Err(Error::InvalidParameters(format!("duplicate poset key {k:?}")));
            }
        }
        let n = keys.len();
        let mut cv: Vec<(usize, usize)> = covers.into_iter().collect();
        for &(a, b) in &cv {
            if a >= n || b >= n {
                return Err(Error::InvalidParameters(format!("cover ({a}, {b}) out of range")));
            }
            if a == b {
                return Err(Error::Cyclic(a));
            }
        }
        cv.sort_unstable();
        cv.dedup();
        let mut up = vec![Vec::new(); n];
        let mut down = vec![Vec::new(); n];
        for &(a, b) in &cv {
            up[a].push(b);
            down[b].push(a);
        }
        let p = FinitePoset { keys, index, covers: cv, up, down };
        p.topological_order()?;
        Ok(p)
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn key(&self, i: usize) -> &str {
        &self.keys[i]
    }

    pub fn keys(&self) -> &[String] {
        &self.keys
    }

    pub fn index_of(&self, key: &str) -> Option<usize> {
        self.index.get(key).copied()
    }

    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn upper_covers(&self, i: usize) -> &[usize] {
        &self.up[i]
    }

    pub fn lower_covers(&self, i: usize) -> &[usize] {
        &self.down[i]
    }

    pub fn is_cover(&self, a: usize, b: usize) -> bool {
        self.up[a].contains(&b)
    }

    pub fn minimal_elements(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.down[i].is_empty()).collect()
    }

    pub fn maximal_elements(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.up[i].is_empty()).collect()
    }

    /// Kahn order (lower elements first); errors on a cycle.
    pub fn topological_order(&self) -> Result<Vec<usize>> {
        let n = self.len();
        let mut indeg: Vec<usize> = self.down.iter().map(Vec::len).collect();
        let mut stack: Vec<usize> = (0..n).rev().filter(|&i| indeg[i] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(v) = stack.pop() {
            order.push(v);
            for &w in self.up[v].iter().rev() {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    stack.push(w);
                }
            }
        }
        if order.len() != n {
            let stuck = (0..n).find(|&i| indeg[i] > 0).unwrap_or(0);
            return Err(Error::Cyclic(stuck));
        }
        Ok(order)
    }

    /// Reflexive-transitive closure of the covers.
    pub fn closure(&self) -> Result<OrderRelation> {
        let order = self.topological_order()?;
        let mut rel = OrderRelation::new(self.len());
        for &v in order.iter().rev() {
            rel.set(v, v);
            for &w in &self.up[v] {
                rel.or_row_into(v, w);
            }
        }
        Ok(rel)
    }

    /// Length of the longest chain from a minimal element.
    pub fn ranks(&self) -> Vec<usize> {
        let order = self.topological_order().expect("acyclic by construction");
        let mut rank = vec![0usize; self.len()];
        for v in order {
            for &w in &self.up[v] {
                rank[w] = rank[w].max(rank[v] + 1);
            }
        }
        rank
    }

    /// Verifies that every cover pair is irreducible (no element strictly
    /// between). Returns the first offending pair.
    pub fn check_covers(&self) -> Result<Option<(usize, usize)>> {
        let rel = self.closure()?;
        for &(a, b) in &self.covers {
            for &m in &self.up[a] {
                if m != b && rel.leq(m, b) {
                    return Ok(Some((a, b)));
                }
            }
        }
        Ok(None)
    }

    pub fn to_json(&self) -> PosetJson {
        PosetJson { elements: self.keys.clone(), covers: self.covers.clone() }
    }

    pub fn from_json(j: PosetJson) -> Result<Self> {
        FinitePoset::new(j.elements, j.covers)
    }

    /// Graphviz Hasse diagram, one `rank=same` group per level.
    pub fn to_dot(&self, name: &str, label: &dyn Fn(usize) -> String) -> String {
        let ranks = self.ranks();
        let mut levels: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, &r) in ranks.iter().enumerate() {
            levels.entry(r).or_default().push(i);
        }
        let mut out = String::new();
        let _ = writeln!(out, "digraph \"{}\" {{", escape(name));
        let _ = writeln!(out, "  rankdir=BT;");
        let _ = writeln!(out, "  node [shape=box, fontname=\"monospace\"];");
        for i in 0..self.len() {
            let _ = writeln!(out, "  n{} [label=\"{}\"];", i, escape(&label(i)));
        }
        for members in levels.values() {
            let ids: Vec<String> = members.iter().map(|i| format!("n{i}")).collect();
            let _ = writeln!(out, "  {{ rank=same; {}; }}", ids.join("; "));
        }
        for &(a, b) in &self.covers {
            let _ = writeln!(out, "  n{a} -> n{b};");
        }
        out.push_str("}\n");
        out
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// A map of posets given by an index assignment `source -> target`.
#[derive(Debug, Clone)]
pub struct PosetMap<'a> {
    pub source: &'a FinitePoset,
    pub target: &'a FinitePoset,
    pub assignment: Vec<usize>,
}

impl<'a> PosetMap<'a> {
    pub fn new(source: &'a FinitePoset, target: &'a FinitePoset, assignment: Vec<usize>) -> Result<Self> {
        if assignment.len() != source.len() {
            return Err(Error::Mismatch(format!(
                "assignment has {} entries for {} source elements",
                assignment.len(),
                source.len()
            )));
        }
        if let Some(&bad) = assignment.iter().find(|&&t| t >= target.len()) {
            return Err(Error::Mismatch(format!("target index {bad} out of range")));
        }
        Ok(PosetMap { source, target, assignment })
    }
}

/// Outcome of checking whether a map is a quotient map of posets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientReport {
    pub is_order_preserving: bool,
    pub is_surjective: bool,
    pub is_full: bool,
    /// Induced relation on fibres is antisymmetric.
    pub antisymmetry_ok: bool,
    /// Induced relation on fibres is transitive.
    pub transitivity_ok: bool,
    pub is_quotient_map: bool,
    /// Keys of source elements witnessing the first failure, if any.
    pub counterexample: Option<Vec<String>>,
    pub failure: Option<String>,
    pub source_size: usize,
    pub target_size: usize,
}

/// Relation induced on classes: `[a] R [b]` iff some `x ~ a`, `y ~ b` have
/// `x <= y`. Row `a` lists the classes reachable upward from class `a`.
/// Alongside, one representative pair `(x, y)` for each related pair.
struct ClassRelation {
    rel: OrderRelation,
}

fn class_relation(p: &FinitePoset, classes: &[usize], k: usize) -> Result<ClassRelation> {
    let order = p.topological_order()?;
    // per element: classes of everything above it
    let words = k.div_ceil(64).max(1);
    let mut above = vec![0u64; p.len() * words];
    for &v in order.iter().rev() {
        let c = classes[v];
        above[v * words + c / 64] |= 1 << (c % 64);
        for &w in p.upper_covers(v) {
            for t in 0..words {
                let bitsw = above[w * words + t];
                above[v * words + t] |= bitsw;
            }
        }
    }
    let mut rel = OrderRelation::new(k);
    for v in 0..p.len() {
        let c = classes[v];
        for t in 0..words {
            rel.rows[c * words + t] |= above[v * words + t];
        }
    }
    Ok(ClassRelation { rel })
}

/// First element in the fibre of `a` lying below some element of fibre `b`.
fn witness_pair(p: &FinitePoset, order: &OrderRelation, classes: &[usize], a: usize, b: usize) -> Option<(usize, usize)> {
    for x in (0..p.len()).filter(|&x| classes[x] == a) {
        if let Some(y) = order.up_set(x).find(|&y| classes[y] == b) {
            return Some((x, y));
        }
    }
    None
}

fn first_antisymmetry_failure(rel: &OrderRelation, live: &[usize]) -> Option<(usize, usize)> {
    for &a in live {
        for &b in live {
            if a < b && rel.leq(a, b) && rel.leq(b, a) {
                return Some((a, b));
            }
        }
    }
    None
}

fn first_transitivity_failure(rel: &OrderRelation, live: &[usize]) -> Option<(usize, usize, usize)> {
    for &a in live {
        for b in rel.up_set(a).collect::<Vec<_>>() {
            if b == a {
                continue;
            }
            for c in rel.up_set(b) {
                if !rel.leq(a, c) {
                    return Some((a, b, c));
                }
            }
        }
    }
    None
}

pub fn analyze_map(f: &PosetMap<'_>) -> Result<QuotientReport> {
    let src = f.source;
    let tgt = f.target;
    let tgt_order = tgt.closure()?;
    let k = tgt.len();
    let mut counterexample: Option<Vec<String>> = None;
    let mut failure: Option<String> = None;
    let note = |ce: &mut Option<Vec<String>>, fl: &mut Option<String>, keys: Vec<String>, msg: String| {
        if ce.is_none() {
            *ce = Some(keys);
            *fl = Some(msg);
        }
    };

    let mut is_order_preserving = true;
    for &(x, y) in src.covers() {
        if !tgt_order.leq(f.assignment[x], f.assignment[y]) {
            is_order_preserving = false;
            note(
                &mut counterexample,
                &mut failure,
                vec![src.key(x).to_string(), src.key(y).to_string()],
                "cover mapped to an incomparable or decreasing pair".into(),
            );
            break;
        }
    }

    let mut hit = vec![false; k];
    for &t in &f.assignment {
        hit[t] = true;
    }
    let is_surjective = hit.iter().all(|&h| h);
    if !is_surjective {
        let missing = hit.iter().position(|&h| !h).unwrap();
        note(
            &mut counterexample,
            &mut failure,
            vec![tgt.key(missing).to_string()],
            "target element has an empty fibre".into(),
        );
    }
    let live: Vec<usize> = (0..k).filter(|&t| hit[t]).collect();

    let cr = class_relation(src, &f.assignment, k)?;
    let rel = &cr.rel;

    let mut is_full = true;
    'full: for &a in &live {
        for &b in &live {
            if tgt_order.leq(a, b) && !rel.leq(a, b) {
                is_full = false;
                let xa = (0..src.len()).find(|&x| f.assignment[x] == a).unwrap();
                let xb = (0..src.len()).find(|&x| f.assignment[x] == b).unwrap();
                note(
                    &mut counterexample,
                    &mut failure,
                    vec![src.key(xa).to_string(), src.key(xb).to_string()],
                    format!(
                        "{} <= {} in the target but no pre-images are comparable",
                        tgt.key(a),
                        tgt.key(b)
                    ),
                );
                break 'full;
            }
        }
    }

    let antisym = first_antisymmetry_failure(rel, &live);
    let trans = first_transitivity_failure(rel, &live);
    if antisym.is_some() || trans.is_some() {
        let src_order = src.closure()?;
        if let Some((a, b)) = antisym {
            let (x1, y1) = witness_pair(src, &src_order, &f.assignment, a, b).unwrap();
            let (y2, x2) = witness_pair(src, &src_order, &f.assignment, b, a).unwrap();
            note(
                &mut counterexample,
                &mut failure,
                [x1, y1, y2, x2].iter().map(|&i| src.key(i).to_string()).collect(),
                "induced relation on fibres is not antisymmetric".into(),
            );
        }
        if let Some((a, b, c)) = trans {
            let (x, y) = witness_pair(src, &src_order, &f.assignment, a, b).unwrap();
            let (_, z) = witness_pair(src, &src_order, &f.assignment, b, c).unwrap();
            note(
                &mut counterexample,
                &mut failure,
                [x, y, z].iter().map(|&i| src.key(i).to_string()).collect(),
                "induced relation on fibres is not transitive".into(),
            );
        }
    }

    Ok(QuotientReport {
        is_order_preserving,
        is_surjective,
        is_full,
        antisymmetry_ok: antisym.is_none(),
        transitivity_ok: trans.is_none(),
        is_quotient_map: is_order_preserving && is_surjective && is_full,
        counterexample,
        failure,
        source_size: src.len(),
        target_size: tgt.len(),
    })
}

/// Why a partition failed to be a weak order congruence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuotientFailure {
    pub antisymmetry_ok: bool,
    pub transitivity_ok: bool,
    /// Class indices witnessing the first failure.
    pub classes: Vec<usize>,
}

/// Quotient of `p` by the partition `classes` (class labels `0..k`).
///
/// Succeeds iff the induced relation is antisymmetric and transitive; the
/// result has one element per class, keyed by the key of its first member.
pub fn quotient(p: &FinitePoset, classes: &[usize]) -> Result<std::result::Result<FinitePoset, QuotientFailure>> {
    if classes.len() != p.len() {
        return Err(Error::Mismatch("one class label per element required".into()));
    }
    let k = classes.iter().map(|&c| c + 1).max().unwrap_or(0);
    let mut first = vec![usize::MAX; k];
    for (x, &c) in classes.iter().enumerate() {
        if first[c] == usize::MAX {
            first[c] = x;
        }
    }
    if let Some(c) = first.iter().position(|&x| x == usize::MAX) {
        return Err(Error::InvalidParameters(format!("class label {c} is unused")));
    }
    let rel = class_relation(p, classes, k)?.rel;
    let live: Vec<usize> = (0..k).collect();
    let antisym = first_antisymmetry_failure(&rel, &live);
    let trans = first_transitivity_failure(&rel, &live);
    if antisym.is_some() || trans.is_some() {
        let witness = match (antisym, trans) {
            (Some((a, b)), _) => vec![a, b],
            (None, Some((a, b, c))) => vec![a, b, c],
            _ => unreachable!(),
        };
        return Ok(Err(QuotientFailure {
            antisymmetry_ok: antisym.is_none(),
            transitivity_ok: trans.is_none(),
            classes: witness,
        }));
    }
    // transitive reduction of the class order
    let mut covers = Vec::new();
    for a in 0..k {
        let above: Vec<usize> = rel.up_set(a).filter(|&b| b != a).collect();
        for &b in &above {
            let reducible = above.iter().any(|&m| m != b && rel.leq(m, b));
            if !reducible {
                covers.push((a, b));
            }
        }
    }
    let keys = first.iter().map(|&x| p.key(x).to_string()).collect();
    Ok(Ok(FinitePoset::new(keys, covers)?))
}

/// Per-element invariants refined by neighbourhood colours.
fn refined_colours(p: &FinitePoset, rel: &OrderRelation, rounds: usize) -> Vec<u64> {
    use std::collections::hash_map::DefaultHasher;
    use std::hash::{Hash, Hasher};
    let n = p.len();
    let ranks = p.ranks();
    let down_count: Vec<usize> = {
        let mut c = vec![0usize; n];
        for i in 0..n {
            for j in rel.up_set(i) {
                c[j] += 1;
            }
        }
        c
    };
    let mut colour: Vec<u64> = (0..n)
        .map(|i| {
            let mut h = DefaultHasher::new();
            (rel.up_count(i), down_count[i], p.upper_covers(i).len(), p.lower_covers(i).len(), ranks[i]).hash(&mut h);
            h.finish()
        })
        .collect();
    for _ in 0..rounds {
        colour = (0..n)
            .map(|i| {
                let mut ups: Vec<u64> = p.upper_covers(i).iter().map(|&j| colour[j]).collect();
                let mut downs: Vec<u64> = p.lower_covers(i).iter().map(|&j| colour[j]).collect();
                ups.sort_unstable();
                downs.sort_unstable();
                let mut h = DefaultHasher::new();
                (colour[i], ups, downs).hash(&mut h);
                h.finish()
            })
            .collect();
    }
    colour
}

/// Finds an order isomorphism `P -> Q` if one exists; `result[i]` is the
/// image of element `i` of `P`.
pub fn is_isomorphic(p: &FinitePoset, q: &FinitePoset) -> Result<Option<Vec<usize>>> {
    if p.len() != q.len() || p.covers().len() != q.covers().len() {
        return Ok(None);
    }
    let n = p.len();
    let rp = p.closure()?;
    let rq = q.closure()?;
    let rounds = 3;
    let cp = refined_colours(p, &rp, rounds);
    let cq = refined_colours(q, &rq, rounds);
    let mut sp = cp.clone();
    let mut sq = cq.clone();
    sp.sort_unstable();
    sq.sort_unstable();
    if sp != sq {
        return Ok(None);
    }
    let mut by_colour: HashMap<u64, Vec<usize>> = HashMap::new();
    for (j, &c) in cq.iter().enumerate() {
        by_colour.entry(c).or_default().push(j);
    }
    let order = p.topological_order()?;
    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];

    fn search(
        pos: usize,
        order: &[usize],
        cp: &[u64],
        by_colour: &HashMap<u64, Vec<usize>>,
        rp: &OrderRelation,
        rq: &OrderRelation,
        image: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        if pos == order.len() {
            return true;
        }
        let x = order[pos];
        for &y in &by_colour[&cp[x]] {
            if used[y] {
                continue;
            }
            let consistent = order[..pos].iter().all(|&x2| {
                let y2 = image[x2];
                rp.leq(x2, x) == rq.leq(y2, y) && rp.leq(x, x2) == rq.leq(y, y2)
            });
            if !consistent {
                continue;
            }
            image[x] = y;
            used[y] = true;
            if search(pos + 1, order, cp, by_colour, rp, rq, image, used) {
                return true;
            }
            used[y] = false;
            image[x] = usize::MAX;
        }
        false
    }

    if search(0, &order, &cp, &by_colour, &rp, &rq, &mut image, &mut used) {
        Ok(Some(image))
    } else {
        Ok(None)
    }
}
