//! Breadth-first orbit enumeration under a group generated by reflections.

use std::collections::HashMap;
use std::fmt::Write as _;

use rayon::prelude::*;

use super::PackingError;
use crate::lorentz::{short_text, LatticeVector, LorentzSpace};
use crate::scalar::ExactScalar;

/// Stop after `max_depth` levels or once `max_elements` are stored.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_depth: usize,
    pub max_elements: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_depth: 6,
            max_elements: 200_000,
        }
    }
}

impl Budget {
    pub fn depth(max_depth: usize) -> Self {
        Budget {
            max_depth,
            ..Budget::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitElement {
    pub vector: LatticeVector,
    /// Generator indices, `word[0]` applied first.
    pub word: Vec<usize>,
    pub seed: usize,
    pub depth: usize,
}

/// Deduplicated orbit, ordered by depth and then by canonical coordinates.
#[derive(Debug, Clone)]
pub struct OrbitSet {
    pub generators: Vec<LatticeVector>,
    pub seeds: Vec<LatticeVector>,
    elements: Vec<OrbitElement>,
    index: HashMap<LatticeVector, usize>,
    /// Deepest level that was fully explored.
    pub depth: usize,
    /// True when the element budget cut the last level short.
    pub truncated: bool,
}

impl OrbitSet {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[OrbitElement] {
        &self.elements
    }

    pub fn vectors(&self) -> Vec<LatticeVector> {
        self.elements.iter().map(|e| e.vector.clone()).collect()
    }

    pub fn position(&self, v: &LatticeVector) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn contains(&self, v: &LatticeVector) -> bool {
        self.index.contains_key(v)
    }

    /// Replays every word on its seed and compares with the stored vector.
    pub fn verify_words(&self, space: &LorentzSpace) -> Result<bool, PackingError> {
        for e in &self.elements {
            let mut v = self.seeds[e.seed].clone();
            for &g in &e.word {
                v = space.reflect(&self.generators[g], &v)?;
            }
            if v.canonicalize()? != e.vector {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Tab-separated dump with columns `word`, `norm`, `coords`.
    pub fn to_tsv(&self, space: &LorentzSpace) -> String {
        let mut out = String::from("word\tnorm\tcoords\n");
        for e in &self.elements {
            let word: Vec<String> = e.word.iter().map(usize::to_string).collect();
            let word = if word.is_empty() {
                "-".to_string()
            } else {
                word.join(".")
            };
            let _ = writeln!(out, "{word}\t{}\t{}", short_text(&space.norm(&e.vector)), e.vector);
        }
        out
    }
}

/// Orbit on the global thread pool.
pub fn orbit(
    space: &LorentzSpace,
    generators: &[LatticeVector],
    seeds: &[LatticeVector],
    budget: Budget,
) -> Result<OrbitSet, PackingError> {
    enumerate(space, generators, seeds, budget)
}

/// Orbit on a dedicated pool of `threads` workers. The result does not
/// depend on the thread count.
pub fn orbit_with_threads(
    space: &LorentzSpace,
    generators: &[LatticeVector],
    seeds: &[LatticeVector],
    budget: Budget,
    threads: usize,
) -> Result<OrbitSet, PackingError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| PackingError::ThreadPool(e.to_string()))?;
    pool.install(|| enumerate(space, generators, seeds, budget))
}

fn enumerate(
    space: &LorentzSpace,
    generators: &[LatticeVector],
    seeds: &[LatticeVector],
    budget: Budget,
) -> Result<OrbitSet, PackingError> {
    if budget.max_elements == 0 {
        return Err(PackingError::BadBudget);
    }
    if seeds.is_empty() {
        return Err(PackingError::NoSeeds);
    }
    for (i, g) in generators.iter().enumerate() {
        space.check_dim(g)?;
        if !space.norm(g).is_negative() {
            return Err(PackingError::BadGenerator(i));
        }
    }
    let mut canon_seeds = Vec::new();
    for s in seeds {
        space.check_dim(s)?;
        let c = s.canonicalize()?;
        if !canon_seeds.contains(&c) {
            canon_seeds.push(c);
        }
    }
    let mut set = OrbitSet {
        generators: generators.to_vec(),
        seeds: canon_seeds.clone(),
        elements: Vec::new(),
        index: HashMap::new(),
        depth: 0,
        truncated: false,
    };
    let mut level: Vec<OrbitElement> = canon_seeds
        .iter()
        .enumerate()
        .map(|(i, v)| OrbitElement {
            vector: v.clone(),
            word: Vec::new(),
            seed: i,
            depth: 0,
        })
        .collect();
    level.sort_by(|a, b| a.vector.cmp(&b.vector));
    if !push_level(&mut set, level.clone(), budget.max_elements) {
        return Ok(set);
    }
    let gen_norms: Vec<ExactScalar> = generators.iter().map(|g| space.norm(g)).collect();
    let two = ExactScalar::from_integer(2);
    for depth in 1..=budget.max_depth {
        let children: Vec<Vec<(LatticeVector, usize)>> = level
            .par_iter()
            .map(|parent| {
                generators
                    .iter()
                    .enumerate()
                    .filter_map(|(gi, g)| {
                        let p = space.product(g, &parent.vector);
                        if p.is_zero() {
                            return None;
                        }
                        let c = -(&two * &p).div(&gen_norms[gi]);
                        let v = parent.vector.add_scaled(&c, g);
                        Some(v.canonicalize().map(|v| (v, gi)))
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<_, _>>()?;
        let mut fresh: Vec<(LatticeVector, usize, usize)> = Vec::new();
        for (pi, kids) in children.into_iter().enumerate() {
            for (v, gi) in kids {
                if !set.index.contains_key(&v) {
                    fresh.push((v, pi, gi));
                }
            }
        }
        fresh.sort();
        fresh.dedup_by(|a, b| a.0 == b.0);
        if fresh.is_empty() {
            set.depth = budget.max_depth;
            return Ok(set);
        }
        let next: Vec<OrbitElement> = fresh
            .into_iter()
            .map(|(v, pi, gi)| {
                let parent = &level[pi];
                let mut word = parent.word.clone();
                word.push(gi);
                OrbitElement {
                    vector: v,
                    word,
                    seed: parent.seed,
                    depth,
                }
            })
            .collect();
        if !push_level(&mut set, next.clone(), budget.max_elements) {
            return Ok(set);
        }
        set.depth = depth;
        level = next;
    }
    Ok(set)
}

/// Appends a sorted level; returns false when the element budget was hit.
fn push_level(set: &mut OrbitSet, level: Vec<OrbitElement>, max: usize) -> bool {
    for e in level {
        if set.elements.len() == max {
            set.truncated = true;
            return false;
        }
        set.index.insert(e.vector.clone(), set.elements.len());
        set.elements.push(e);
    }
    true
}
