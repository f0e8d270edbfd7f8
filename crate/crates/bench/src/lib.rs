//! Shared fixtures for the criterion benches.

use packlab::{bundled, CoxeterGraph, LatticeVector, LorentzSpace};

/// The Reye lattice space, its mirrors and the seed plane `nu`.
pub fn reye() -> (LorentzSpace, Vec<LatticeVector>, LatticeVector) {
    let graph = CoxeterGraph::parse(bundled::graph("c2").expect("bundled c2")).expect("valid c2");
    let space = graph.gram().expect("Lorentzian c2");
    let nu = graph
        .vector_of(&space, graph.node_index("nu").expect("nu node"))
        .expect("nu vector");
    (space, graph.generators(), nu)
}

/// The non-Soddy space over Q(sqrt(3)) with its mirrors and seed `s1`.
pub fn coxmax() -> (LorentzSpace, Vec<LatticeVector>, LatticeVector) {
    let graph = CoxeterGraph::parse(bundled::graph("coxmax").expect("bundled coxmax")).expect("valid coxmax");
    let space = graph.gram().expect("Lorentzian coxmax");
    let s1 = graph
        .vector_of(&space, graph.node_index("s1").expect("s1 node"))
        .expect("s1 vector");
    (space, graph.generators(), s1)
}
