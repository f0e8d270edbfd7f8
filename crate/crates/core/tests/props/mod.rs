//! Randomized invariants shared by the core test suite and the acceptance
//! harness. Each suite runs `cases` random cases and returns the first
//! counterexample as an error.

use num_bigint::BigInt;
use num_rational::BigRational;
use packlab::coxeter::weights;
use packlab::packing::{orbit_with_threads, seed_cluster, Budget};
use packlab::{bundled, CoxeterGraph, ExactScalar, LatticeVector, LorentzSpace};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

pub struct Fixture {
    pub graph: CoxeterGraph,
    pub space: LorentzSpace,
    pub gens: Vec<LatticeVector>,
}

pub fn fixture(name: &str) -> Fixture {
    let graph = CoxeterGraph::parse(bundled::graph(name).expect("bundled graph")).expect("valid graph");
    let space = graph.gram().expect("Lorentzian graph");
    let gens = graph.generators();
    Fixture { graph, space, gens }
}

fn runner(cases: u32) -> TestRunner {
    TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    })
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Scalars `a + b sqrt(d)` with small integer parts (`b = 0` when `d = 1`).
fn scalar(d: u64) -> impl Strategy<Value = ExactScalar> {
    (-6i64..=6, -6i64..=6).prop_map(move |(a, b)| {
        let b = if d == 1 { 0 } else { b };
        ExactScalar::new(rat(a, 1), rat(b, 1), d).expect("valid scalar")
    })
}

fn vector(n: usize, d: u64) -> impl Strategy<Value = LatticeVector> {
    proptest::collection::vec(scalar(d), n).prop_map(LatticeVector::new)
}

/// Nonzero vectors with rational and surd parts over small denominators.
fn rational_vector(n: usize, d: u64) -> impl Strategy<Value = LatticeVector> {
    let part = (-40i64..=40, 1i64..=12);
    proptest::collection::vec((part.clone(), part), n)
        .prop_map(move |cs| {
            LatticeVector::new(
                cs.into_iter()
                    .map(|((a, da), (b, db))| {
                        let b = if d == 1 { rat(0, 1) } else { rat(b, db) };
                        ExactScalar::new(rat(a, da), b, d).expect("valid scalar")
                    })
                    .collect(),
            )
        })
        .prop_filter("nonzero", |v| !v.is_zero())
}

fn apply_word(f: &Fixture, word: &[usize], v: &LatticeVector) -> LatticeVector {
    word.iter().fold(v.clone(), |x, &g| {
        f.space.reflect(&f.gens[g % f.gens.len()], &x).expect("reflection")
    })
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), TestCaseError> {
    if cond {
        Ok(())
    } else {
        Err(TestCaseError::fail(msg()))
    }
}

fn report<T: std::fmt::Debug>(r: Result<(), proptest::test_runner::TestError<T>>) -> Result<(), String> {
    r.map_err(|e| e.to_string())
}

/// `R_n` preserves products and is an involution, for random non-null `n`,
/// over the rational Reye space and the `sqrt(3)` space.
pub fn reflection(cases: u32) -> Result<(), String> {
    for name in ["c2", "coxmax"] {
        let f = fixture(name);
        let (n, d) = (f.space.dim(), f.space.surd_base());
        let mut r = runner(cases);
        report(r.run(&(vector(n, d), vector(n, d), vector(n, d)), |(m, x, y)| {
            prop_assume!(!f.space.norm(&m).is_zero());
            let rx = f.space.reflect(&m, &x).expect("reflection");
            let ry = f.space.reflect(&m, &y).expect("reflection");
            check(f.space.product(&rx, &ry) == f.space.product(&x, &y), || {
                format!("{name}: R_{m} changes {x} . {y}")
            })?;
            check(f.space.reflect(&m, &rx).expect("reflection") == x, || {
                format!("{name}: R_{m} is not an involution on {x}")
            })
        }))?;
    }
    Ok(())
}

/// The Bertini involution through the cusp `w8` and a random image of it
/// preserves products, fixes both cusps and squares to the identity.
pub fn bertini(cases: u32) -> Result<(), String> {
    let f = fixture("c2");
    let a = weights(&f.space).expect("weights").weights[8].clone();
    assert!(f.space.norm(&a).is_zero(), "w8 is a cusp");
    let n = f.space.dim();
    let word = proptest::collection::vec(0usize..n, 1..8);
    let mut r = runner(cases);
    report(r.run(&(word, vector(n, 1), vector(n, 1)), |(w, x, y)| {
        // b8 is the only mirror moving w8
        let b = apply_word(&f, &w, &f.space.reflect(&f.gens[8], &a).expect("reflection"));
        prop_assume!(!f.space.product(&a, &b).is_zero());
        let phi = |v: &LatticeVector| f.space.bertini(&a, &b, v).expect("bertini");
        check(f.space.product(&phi(&x), &phi(&y)) == f.space.product(&x, &y), || {
            format!("phi(w8, {b}) changes {x} . {y}")
        })?;
        check(phi(&a) == a && phi(&b) == b, || format!("phi(w8, {b}) moves a cusp"))?;
        check(phi(&phi(&x)) == x, || {
            format!("phi(w8, {b}) is not an involution on {x}")
        })
    }))
}

/// `canonicalize` is idempotent, returns a positive multiple and ignores
/// positive rescaling.
pub fn canonicalize(cases: u32) -> Result<(), String> {
    for d in [1u64, 2, 3] {
        let mut r = runner(cases);
        report(r.run(&(rational_vector(5, d), 1i64..=30, 1i64..=30), |(v, p, q)| {
            let c = v.canonicalize().expect("nonzero");
            check(c.canonicalize().expect("nonzero") == c, || {
                format!("not idempotent on {v}")
            })?;
            check(c.is_positive_multiple_of(&v), || {
                format!("{c} is not a positive multiple of {v}")
            })?;
            let scaled = v.scale_rational(&rat(p, q));
            check(scaled.canonicalize().expect("nonzero") == c, || {
                format!("rescaling {v} by {p}/{q} changes the canonical form")
            })
        }))?;
    }
    Ok(())
}

/// Orbits of random seed sets agree element by element, words included,
/// for one, three and eight worker threads.
pub fn orbit_determinism(cases: u32) -> Result<(), String> {
    let fixtures: Vec<(Fixture, LatticeVector)> = ["c2", "c3", "coxmax"]
        .into_iter()
        .map(|name| {
            let f = fixture(name);
            let tail = f.graph.find_tail_pattern().expect("tail pattern");
            let nu = f.graph.vector_of(&f.space, tail.nu).expect("nu vector");
            (f, nu)
        })
        .collect();
    let words = proptest::collection::vec(proptest::collection::vec(0usize..16, 0..5), 1..4);
    let mut r = runner(cases);
    report(
        r.run(&(0usize..fixtures.len(), words, 0usize..5), |(which, ws, depth)| {
            let (f, nu) = &fixtures[which];
            let seeds: Vec<LatticeVector> = ws.iter().map(|w| apply_word(f, w, nu)).collect();
            let budget = Budget {
                max_depth: depth,
                max_elements: 5_000,
            };
            let runs: Vec<_> = [1, 3, 8]
                .into_iter()
                .map(|t| orbit_with_threads(&f.space, &f.gens, &seeds, budget, t).expect("orbit"))
                .collect();
            for o in &runs[1..] {
                check(
                    o.elements() == runs[0].elements() && o.truncated == runs[0].truncated,
                    || {
                        format!(
                            "orbit of {} seeds at depth {depth} depends on the thread count",
                            seeds.len()
                        )
                    },
                )?;
            }
            Ok(())
        }),
    )
}

/// Graph name, fixture, chain and `nu` of a tail pattern.
type Tail = (String, Fixture, Vec<LatticeVector>, LatticeVector);

/// Every bundled tail pattern yields a cluster satisfying items (a) to (d),
/// also after moving the whole pattern by a random group element, and the
/// moved cluster is the image of the original one.
pub fn clusters(cases: u32) -> Result<(), String> {
    let tails: Vec<Tail> = bundled::GRAPHS
        .iter()
        .filter_map(|(name, text)| {
            let tail = CoxeterGraph::parse(text).ok()?.find_tail_pattern()?;
            let f = fixture(name);
            let chain = tail
                .chain
                .iter()
                .map(|&i| f.graph.vector_of(&f.space, i).expect("chain vector"))
                .collect();
            let nu = f.graph.vector_of(&f.space, tail.nu).expect("nu vector");
            Some((name.to_string(), f, chain, nu))
        })
        .collect();
    if tails.len() < 4 {
        return Err(format!("expected at least four bundled tails, found {}", tails.len()));
    }
    let word = proptest::collection::vec(0usize..16, 0..10);
    let mut r = runner(cases);
    report(r.run(&(0usize..tails.len(), word), |(which, w)| {
        let (name, f, chain, nu) = &tails[which];
        let base = seed_cluster(&f.space, chain, nu).map_err(|e| TestCaseError::fail(format!("{name}: {e}")))?;
        check(base.len() == chain.len() + 1, || {
            format!("{name}: cluster size {}", base.len())
        })?;
        let moved: Vec<LatticeVector> = chain.iter().map(|a| apply_word(f, &w, a)).collect();
        let got = seed_cluster(&f.space, &moved, &apply_word(f, &w, nu))
            .map_err(|e| TestCaseError::fail(format!("{name} moved by {w:?}: {e}")))?;
        let want: Vec<LatticeVector> = base.iter().map(|s| apply_word(f, &w, s)).collect();
        check(got == want, || {
            format!("{name}: cluster is not equivariant under {w:?}")
        })
    }))
}

pub type Suite = fn(u32) -> Result<(), String>;

// read by the acceptance harness
#[allow(dead_code)]
pub const SUITES: &[(&str, Suite)] = &[
    ("reflection", reflection),
    ("bertini", bertini),
    ("canonicalize", canonicalize),
    ("orbit-determinism", orbit_determinism),
    ("seed-cluster", clusters),
];
