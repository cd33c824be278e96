//! Breadth-first closure under a cover-generating move, shared by the
//! Bruhat and Stasheff-Tamari enumerations.

use std::collections::HashMap;
use std::hash::Hash;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::poset::FinitePoset;

/// Resource caps for enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_elements: Option<usize>,
    pub max_time: Option<Duration>,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_elements: Some(5_000_000), max_time: None }
    }
}

impl Limits {
    pub fn unlimited() -> Self {
        Limits { max_elements: None, max_time: None }
    }

    pub fn elements(max: usize) -> Self {
        Limits { max_elements: Some(max), max_time: None }
    }
}

/// Enumerated objects together with their cover poset; `poset` index `i`
/// refers to `elements[i]`.
#[derive(Debug, Clone)]
pub struct Enumeration<T> {
    pub elements: Vec<T>,
    pub poset: FinitePoset,
}

impl<T: Eq + Hash> Enumeration<T> {
    pub fn index_of(&self, x: &T) -> Option<usize>
    where
        T: Clone,
    {
        self.elements.iter().position(|e| e == x)
    }

    /// Index lookup table for repeated queries.
    pub fn lookup(&self) -> HashMap<&T, usize> {
        self.elements.iter().enumerate().map(|(i, e)| (e, i)).collect()
    }
}

/// Level-synchronous BFS. Expansion of a level runs in parallel; insertion
/// is sequential in frontier order, so indices and covers are deterministic.
pub(crate) fn bfs_closure<T, K, E>(start: T, key: K, expand: E, limits: &Limits) -> Result<Enumeration<T>>
where
    T: Clone + Eq + Hash + Send + Sync,
    K: Fn(&T) -> String,
    E: Fn(&T) -> Result<Vec<T>> + Sync,
{
    let started = Instant::now();
    let mut elements = vec![start.clone()];
    let mut seen: HashMap<T, usize> = HashMap::new();
    seen.insert(start, 0);
    let mut covers: Vec<(usize, usize)> = Vec::new();
    let mut frontier: Vec<usize> = vec![0];
    while !frontier.is_empty() {
        if let Some(t) = limits.max_time {
            if started.elapsed() > t {
                return Err(Error::LimitExceeded { limit: t.as_secs(), what: "seconds" });
            }
        }
        let expanded: Vec<Result<Vec<T>>> = frontier.par_iter().map(|&i| expand(&elements[i])).collect();
        let mut next = Vec::new();
        for (&parent, children) in frontier.iter().zip(expanded) {
            for child in children? {
                let idx = match seen.get(&child) {
                    Some(&j) => j,
                    None => {
                        let j = elements.len();
                        if let Some(max) = limits.max_elements {
                            if j >= max {
                                return Err(Error::LimitExceeded { limit: max as u64, what: "elements" });
                            }
                        }
                        seen.insert(child.clone(), j);
                        elements.push(child);
                        next.push(j);
                        j
                    }
                };
                covers.push((parent, idx));
            }
        }
        frontier = next;
    }
    let keys: Vec<String> = elements.iter().map(key).collect();
    let poset = FinitePoset::new(keys, covers)?;
    let minimal = poset.minimal_elements();
    if minimal != [0] {
        return Err(Error::Internal(format!("expected a unique minimum, found {}", minimal.len())));
    }
    if poset.maximal_elements().len() != 1 {
        return Err(Error::Internal(format!(
            "expected a unique maximum, found {}",
            poset.maximal_elements().len()
        )));
    }
    Ok(Enumeration { elements, poset })
}
