//! Independent oracles. Nothing here calls the library's combinatorics.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

pub fn catalan(k: u64) -> u64 {
    let mut c = 1u64;
    for i in 0..k {
        c = c * 2 * (2 * i + 1) / (i + 2);
    }
    c
}

pub fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Commutation classes of reduced words of the longest permutation of `n` letters.
pub fn commutation_classes(n: usize) -> usize {
    let len = n * (n - 1) / 2;
    // all reduced words by DFS over permutations
    let mut words: Vec<Vec<u8>> = Vec::new();
    fn dfs(perm: &mut Vec<usize>, word: &mut Vec<u8>, len: usize, out: &mut Vec<Vec<u8>>) {
        if word.len() == len {
            out.push(word.clone());
            return;
        }
        for i in 0..perm.len() - 1 {
            if perm[i] < perm[i + 1] {
                perm.swap(i, i + 1);
                word.push(i as u8);
                dfs(perm, word, len, out);
                word.pop();
                perm.swap(i, i + 1);
            }
        }
    }
    dfs(&mut (0..n).collect(), &mut Vec::new(), len, &mut words);
    let index: HashMap<Vec<u8>, usize> = words.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
    let mut seen = vec![false; words.len()];
    let mut classes = 0;
    for s in 0..words.len() {
        if seen[s] {
            continue;
        }
        classes += 1;
        seen[s] = true;
        let mut q = VecDeque::from([s]);
        while let Some(v) = q.pop_front() {
            let w = &words[v];
            for i in 0..w.len().saturating_sub(1) {
                if w[i].abs_diff(w[i + 1]) >= 2 {
                    let mut x = w.clone();
                    x.swap(i, i + 1);
                    let j = index[&x];
                    if !seen[j] {
                        seen[j] = true;
                        q.push_back(j);
                    }
                }
            }
        }
    }
    classes
}

/// `a` δ-interweaves `b`: some δ+2 elements of the symmetric difference
/// alternate between `b∖a` and `a∖b`, the largest lying in `b∖a`.
pub fn interweaves(a: u32, b: u32, delta: usize) -> bool {
    let a_only = a & !b;
    let b_only = b & !a;
    let elems: Vec<u32> = (0..32).filter(|i| (a_only | b_only) >> i & 1 == 1).collect();
    let k = delta + 2;
    if elems.len() < k {
        return false;
    }
    // choose k elements; patterns are checked on the sorted choice
    let m = elems.len();
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        let ok = idx.iter().rev().enumerate().all(|(pos, &i)| {
            let in_b = b_only >> elems[i] & 1 == 1;
            in_b == (pos % 2 == 0)
        });
        if ok {
            return true;
        }
        let mut j = k;
        loop {
            if j == 0 {
                return false;
            }
            j -= 1;
            if idx[j] < m - k + j {
                idx[j] += 1;
                for t in j + 1..k {
                    idx[t] = idx[t - 1] + 1;
                }
                break;
            }
        }
    }
}

pub fn separated(a: u32, b: u32, delta: usize) -> bool {
    !interweaves(a, b, delta) && !interweaves(b, a, delta)
}

/// All maximal δ-separated collections of subsets of `[n]` (bitmask form,
/// sorted), by Bron–Kerbosch with pivoting on a 64-bit vertex set.
pub fn maximal_separated_collections(n: usize, delta: usize) -> Vec<Vec<u32>> {
    assert!(n <= 6);
    let m = 1usize << n;
    let mut adj = vec![0u64; m];
    for a in 0..m {
        for b in 0..m {
            if a != b && separated(a as u32, b as u32, delta) {
                adj[a] |= 1 << b;
            }
        }
    }
    let mut out = Vec::new();
    fn bk(r: u64, mut p: u64, mut x: u64, adj: &[u64], out: &mut Vec<Vec<u32>>) {
        if p == 0 && x == 0 {
            out.push((0..64).filter(|i| r >> i & 1 == 1).map(|i| i as u32).collect());
            return;
        }
        let pivot = (p | x).trailing_zeros() as usize;
        let mut cand = p & !adj[pivot];
        while cand != 0 {
            let v = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            bk(r | 1 << v, p & adj[v], x & adj[v], adj, out);
            p &= !(1 << v);
            x |= 1 << v;
        }
    }
    let all = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
    bk(0, all, 0, &adj, &mut out);
    out.sort();
    out
}

/// Directed cover pairs `(i, j)`: `C_j = C_i ∖ {A} ∪ {B}` with `A` interweaving `B`.
pub fn exchange_covers(colls: &[Vec<u32>], delta: usize) -> BTreeSet<(usize, usize)> {
    let sets: Vec<HashSet<u32>> = colls.iter().map(|c| c.iter().copied().collect()).collect();
    let mut out = BTreeSet::new();
    for i in 0..colls.len() {
        for j in 0..colls.len() {
            if i == j {
                continue;
            }
            let gone: Vec<u32> = colls[i].iter().copied().filter(|x| !sets[j].contains(x)).collect();
            let new: Vec<u32> = colls[j].iter().copied().filter(|x| !sets[i].contains(x)).collect();
            if gone.len() == 1 && new.len() == 1 && interweaves(gone[0], new[0], delta) {
                out.insert((i, j));
            }
        }
    }
    out
}

pub fn bits_of(elems: &[usize]) -> u32 {
    elems.iter().fold(0, |acc, &e| acc | 1 << (e - 1))
}

/// Binary trees with `k` internal nodes.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Tree {
    Leaf,
    Node(Box<Tree>, Box<Tree>),
}

pub fn trees(k: usize) -> Vec<Tree> {
    if k == 0 {
        return vec![Tree::Leaf];
    }
    let mut out = Vec::new();
    for l in 0..k {
        for a in trees(l) {
            for b in trees(k - 1 - l) {
                out.push(Tree::Node(Box::new(a.clone()), Box::new(b)));
            }
        }
    }
    out
}

/// All trees reachable by one right rotation anywhere in `t`.
pub fn right_rotations(t: &Tree) -> Vec<Tree> {
    let mut out = Vec::new();
    if let Tree::Node(l, r) = t {
        if let Tree::Node(a, b) = l.as_ref() {
            out.push(Tree::Node(a.clone(), Box::new(Tree::Node(b.clone(), r.clone()))));
        }
        for x in right_rotations(l) {
            out.push(Tree::Node(Box::new(x), r.clone()));
        }
        for x in right_rotations(r) {
            out.push(Tree::Node(l.clone(), Box::new(x)));
        }
    }
    out
}

/// Tamari lattice on `k`-node trees as (trees, right-rotation covers).
pub fn tamari(k: usize) -> (Vec<Tree>, Vec<(usize, usize)>) {
    let ts = trees(k);
    let index: HashMap<Tree, usize> = ts.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
    let mut covers = Vec::new();
    for (i, t) in ts.iter().enumerate() {
        for u in right_rotations(t) {
            covers.push((i, index[&u]));
        }
    }
    (ts, covers)
}
