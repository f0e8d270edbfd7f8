//! Coxeter graphs: parsing, Gram matrices, weights and tail patterns.
//!
//! Graph files are line oriented with `#` comments:
//!
//! ```text
//! d 3                      # surd base, omitted for rational graphs
//! node a1 -2               # mirror with its norm
//! extra s1 -2              # dependent plane, solved from its products
//! edge a1 a2 3             # order 3, 4, 6 or inf (bold)
//! gram a4 s1 sqrt(3)       # explicit entry (dotted edges)
//! ```
//!
//! Mirrors declared with `node` form the basis of the Lorentz space. An
//! `extra` node is not a basis vector; its coordinates are recovered from its
//! products with the basis and checked against its declared norm.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::lorentz::{LatticeVector, LorentzError, LorentzSpace, NormClass};
use crate::matrix::{Matrix, MatrixError, Signature};
use crate::scalar::{is_square_free, ExactScalar, ScalarError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CoxeterError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("graph has no nodes")]
    Empty,
    #[error("duplicate node `{0}`")]
    DuplicateNode(String),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(String, String),
    #[error("self edge on `{0}`")]
    SelfEdge(String),
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("node `{0}` must have negative norm")]
    NonNegativeNorm(String),
    #[error("unsupported edge order {0}")]
    BadOrder(u32),
    #[error("entry {0}-{1} is not representable with sqrt({2})")]
    NotRepresentable(String, String, u64),
    #[error("mirror vectors are linearly dependent")]
    DependentNodes,
    #[error("extra node `{name}` has norm {got}, declared {expected}")]
    ExtraNorm {
        name: String,
        expected: Box<ExactScalar>,
        got: Box<ExactScalar>,
    },
    #[error("extra node `{0}` and `{1}` have inconsistent product")]
    ExtraProduct(String, String),
    #[error("gram matrix is not Lorentzian: signature {0}")]
    Signature(Signature),
    #[error(transparent)]
    Lorentz(#[from] LorentzError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EdgeLabel {
    /// Mirrors meeting at angle pi/m, m in {3, 4, 6}.
    Order(u32),
    /// Parallel mirrors (bold edge).
    Infinite,
    /// Explicit Gram entry (dotted edge).
    Explicit(ExactScalar),
}

impl fmt::Display for EdgeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EdgeLabel::Order(m) => write!(f, "{m}"),
            EdgeLabel::Infinite => f.write_str("inf"),
            EdgeLabel::Explicit(g) => write!(f, "{g}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub name: String,
    pub norm: ExactScalar,
    pub extra: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub label: EdgeLabel,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoxeterGraph {
    d: u64,
    nodes: Vec<Node>,
    edges: Vec<Edge>,
}

/// A chain `alpha_1 ... alpha_k` of plain edges whose first node is joined
/// to `nu` by a bold edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TailPattern {
    pub nu: usize,
    pub chain: Vec<usize>,
}

/// Weights of a space: rows of `J^-1`, their canonical multiples and classes.
#[derive(Debug, Clone)]
pub struct WeightSet {
    pub raw: Vec<LatticeVector>,
    pub weights: Vec<LatticeVector>,
    pub classes: Vec<NormClass>,
}

impl CoxeterGraph {
    pub fn new(d: u64, nodes: Vec<Node>, edges: Vec<Edge>) -> Result<Self, CoxeterError> {
        let g = CoxeterGraph { d, nodes, edges };
        g.validate()?;
        Ok(g)
    }

    fn validate(&self) -> Result<(), CoxeterError> {
        if !is_square_free(self.d) {
            return Err(ScalarError::NotSquareFree(self.d).into());
        }
        if self.nodes.iter().all(|n| n.extra) {
            return Err(CoxeterError::Empty);
        }
        let mut names = HashSet::new();
        for n in &self.nodes {
            if !names.insert(n.name.as_str()) {
                return Err(CoxeterError::DuplicateNode(n.name.clone()));
            }
            if !n.norm.is_negative() {
                return Err(CoxeterError::NonNegativeNorm(n.name.clone()));
            }
        }
        let mut pairs = HashSet::new();
        for e in &self.edges {
            let (a, b) = (&self.nodes[e.a].name, &self.nodes[e.b].name);
            if e.a == e.b {
                return Err(CoxeterError::SelfEdge(a.clone()));
            }
            if !pairs.insert((e.a.min(e.b), e.a.max(e.b))) {
                return Err(CoxeterError::DuplicateEdge(a.clone(), b.clone()));
            }
            if let EdgeLabel::Order(m) = e.label {
                if ![3, 4, 6].contains(&m) {
                    return Err(CoxeterError::BadOrder(m));
                }
            }
            self.edge_entry(e)?;
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Self, CoxeterError> {
        let mut d = 1u64;
        let mut nodes: Vec<Node> = Vec::new();
        let mut raw_edges: Vec<(usize, String, String, EdgeLabel)> = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line_no = i + 1;
            let syntax = |msg: &str| CoxeterError::Syntax {
                line: line_no,
                msg: msg.to_string(),
            };
            let body = line.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let tok: Vec<&str> = body.split_whitespace().collect();
            match tok.as_slice() {
                ["d", v] => {
                    d = v.parse().map_err(|_| syntax("bad surd base"))?;
                }
                [kind @ ("node" | "extra"), name, norm] => {
                    let norm = ExactScalar::parse(norm).map_err(|_| syntax("bad norm"))?;
                    nodes.push(Node {
                        name: name.to_string(),
                        norm,
                        extra: *kind == "extra",
                    });
                }
                ["edge", a, b, label] => {
                    let label = match *label {
                        "inf" => EdgeLabel::Infinite,
                        m => EdgeLabel::Order(m.parse().map_err(|_| syntax("bad edge order"))?),
                    };
                    raw_edges.push((line_no, a.to_string(), b.to_string(), label));
                }
                ["gram", a, b, g] => {
                    let g = ExactScalar::parse(g).map_err(|_| syntax("bad gram entry"))?;
                    raw_edges.push((line_no, a.to_string(), b.to_string(), EdgeLabel::Explicit(g)));
                }
                _ => return Err(syntax("unrecognized line")),
            }
        }
        if nodes.is_empty() {
            return Err(CoxeterError::Empty);
        }
        let index: BTreeMap<&str, usize> = nodes.iter().enumerate().map(|(i, n)| (n.name.as_str(), i)).collect();
        let edges = raw_edges
            .into_iter()
            .map(|(_, a, b, label)| {
                let ia = *index.get(a.as_str()).ok_or(CoxeterError::UnknownNode(a.clone()))?;
                let ib = *index.get(b.as_str()).ok_or(CoxeterError::UnknownNode(b.clone()))?;
                Ok(Edge { a: ia, b: ib, label })
            })
            .collect::<Result<Vec<_>, CoxeterError>>()?;
        Self::new(d, nodes, edges)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if self.d != 1 {
            out.push_str(&format!("d {}\n", self.d));
        }
        for n in &self.nodes {
            let kind = if n.extra { "extra" } else { "node" };
            out.push_str(&format!("{kind} {} {}\n", n.name, crate::lorentz::short_text(&n.norm)));
        }
        for e in &self.edges {
            let (a, b) = (&self.nodes[e.a].name, &self.nodes[e.b].name);
            match &e.label {
                EdgeLabel::Explicit(g) => out.push_str(&format!("gram {a} {b} {g}\n")),
                l => out.push_str(&format!("edge {a} {b} {l}\n")),
            }
        }
        out
    }

    pub fn surd_base(&self) -> u64 {
        self.d
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn node_index(&self, name: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n.name == name)
    }

    /// Indices (into `nodes`) of the basis mirrors, in file order.
    pub fn basis(&self) -> Vec<usize> {
        (0..self.nodes.len()).filter(|&i| !self.nodes[i].extra).collect()
    }

    /// Position of a node within the basis, if it is a mirror.
    pub fn basis_position(&self, node: usize) -> Option<usize> {
        self.basis().iter().position(|&i| i == node)
    }

    pub fn edge_between(&self, i: usize, j: usize) -> Option<&Edge> {
        self.edges
            .iter()
            .find(|e| (e.a == i && e.b == j) || (e.a == j && e.b == i))
    }

    fn edge_entry(&self, e: &Edge) -> Result<ExactScalar, CoxeterError> {
        let (na, nb) = (&self.nodes[e.a], &self.nodes[e.b]);
        let quarter = |k: i64| BigRational::new(BigInt::from(k), BigInt::from(4));
        let factor = match &e.label {
            EdgeLabel::Explicit(g) => return Ok(g.clone()),
            EdgeLabel::Order(3) => quarter(1),
            EdgeLabel::Order(4) => quarter(2),
            EdgeLabel::Order(6) => quarter(3),
            EdgeLabel::Order(m) => return Err(CoxeterError::BadOrder(*m)),
            EdgeLabel::Infinite => quarter(4),
        };
        let square = na.norm.checked_mul(&nb.norm)?.scale_rational(&factor);
        square
            .sqrt_in(self.d)
            .ok_or_else(|| CoxeterError::NotRepresentable(na.name.clone(), nb.name.clone(), self.d))
    }

    /// Gram entry between two nodes (by node index).
    pub fn entry(&self, i: usize, j: usize) -> Result<ExactScalar, CoxeterError> {
        if i == j {
            return Ok(self.nodes[i].norm.clone());
        }
        match self.edge_between(i, j) {
            Some(e) => self.edge_entry(e),
            None => Ok(ExactScalar::zero()),
        }
    }

    /// Gram matrix of the basis mirrors, without any signature check.
    pub fn gram_matrix(&self) -> Result<Matrix, CoxeterError> {
        let basis = self.basis();
        let rows = basis
            .iter()
            .map(|&i| basis.iter().map(|&j| self.entry(i, j)).collect())
            .collect::<Result<Vec<Vec<_>>, _>>()?;
        Ok(Matrix::from_rows(rows)?)
    }

    /// Lorentz space spanned by the mirrors; the signature must be (1, N-1).
    pub fn gram(&self) -> Result<LorentzSpace, CoxeterError> {
        let j = self.gram_matrix()?;
        if j.det()?.is_zero() {
            return Err(CoxeterError::DependentNodes);
        }
        let space = match LorentzSpace::new(j.clone()) {
            Err(LorentzError::Signature(sig, _)) => return Err(CoxeterError::Signature(sig)),
            Err(LorentzError::BadSheet) => return Err(CoxeterError::Signature(j.signature()?)),
            other => other?,
        };
        self.extra_vectors(&space)?;
        Ok(space)
    }

    /// Coordinates of every extra node, checked against declared norms and
    /// against any declared products between extras.
    pub fn extra_vectors(&self, space: &LorentzSpace) -> Result<Vec<(usize, LatticeVector)>, CoxeterError> {
        let basis = self.basis();
        let inv = space.gram().inverse()?;
        let mut out = Vec::new();
        for (i, n) in self.nodes.iter().enumerate().filter(|(_, n)| n.extra) {
            let g = basis.iter().map(|&b| self.entry(i, b)).collect::<Result<Vec<_>, _>>()?;
            let v = LatticeVector::new(inv.mul_vec(&g)?);
            let got = space.norm(&v);
            if got != n.norm {
                return Err(CoxeterError::ExtraNorm {
                    name: n.name.clone(),
                    expected: Box::new(n.norm.clone()),
                    got: Box::new(got),
                });
            }
            out.push((i, v));
        }
        for (x, (i, vi)) in out.iter().enumerate() {
            for (j, vj) in &out[x + 1..] {
                if space.product(vi, vj) != self.entry(*i, *j)? {
                    return Err(CoxeterError::ExtraProduct(
                        self.nodes[*i].name.clone(),
                        self.nodes[*j].name.clone(),
                    ));
                }
            }
        }
        Ok(out)
    }

    /// Vector of any node: a unit vector for mirrors, solved for extras.
    pub fn vector_of(&self, space: &LorentzSpace, node: usize) -> Result<LatticeVector, CoxeterError> {
        match self.basis_position(node) {
            Some(p) => Ok(LatticeVector::unit(space.dim(), p)),
            None => self
                .extra_vectors(space)?
                .into_iter()
                .find(|(i, _)| *i == node)
                .map(|(_, v)| v)
                .ok_or_else(|| CoxeterError::UnknownNode(self.nodes[node].name.clone())),
        }
    }

    /// Mirror vectors of the basis, as unit coordinate vectors.
    pub fn generators(&self) -> Vec<LatticeVector> {
        let n = self.basis().len();
        (0..n).map(|i| LatticeVector::unit(n, i)).collect()
    }

    /// Induced subgraph on the given node indices, in the given order.
    pub fn subgraph(&self, keep: &[usize]) -> Result<CoxeterGraph, CoxeterError> {
        let mut map = BTreeMap::new();
        for (new, &old) in keep.iter().enumerate() {
            if old >= self.nodes.len() {
                return Err(CoxeterError::UnknownNode(format!("#{old}")));
            }
            if map.insert(old, new).is_some() {
                return Err(CoxeterError::DuplicateNode(self.nodes[old].name.clone()));
            }
        }
        let nodes = keep.iter().map(|&i| self.nodes[i].clone()).collect();
        let edges = self
            .edges
            .iter()
            .filter_map(|e| {
                Some(Edge {
                    a: *map.get(&e.a)?,
                    b: *map.get(&e.b)?,
                    label: e.label.clone(),
                })
            })
            .collect();
        CoxeterGraph::new(self.d, nodes, edges)
    }

    pub fn subgraph_by_names(&self, names: &[&str]) -> Result<CoxeterGraph, CoxeterError> {
        let idx = names
            .iter()
            .map(|n| {
                self.node_index(n)
                    .ok_or_else(|| CoxeterError::UnknownNode(n.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        self.subgraph(&idx)
    }

    /// True when some relabeling of nodes carries one full Gram table
    /// (norms and edge entries) onto the other.
    pub fn is_isomorphic(&self, other: &CoxeterGraph) -> bool {
        let n = self.nodes.len();
        if n != other.nodes.len() || self.edges.len() != other.edges.len() {
            return false;
        }
        let table = |g: &CoxeterGraph| -> Option<Vec<Vec<ExactScalar>>> {
            (0..n).map(|i| (0..n).map(|j| g.entry(i, j).ok()).collect()).collect()
        };
        let (Some(a), Some(b)) = (table(self), table(other)) else {
            return false;
        };
        let mut perm = vec![usize::MAX; n];
        let mut used = vec![false; n];
        fn extend(
            k: usize,
            a: &[Vec<ExactScalar>],
            b: &[Vec<ExactScalar>],
            perm: &mut [usize],
            used: &mut [bool],
        ) -> bool {
            if k == a.len() {
                return true;
            }
            for cand in 0..b.len() {
                if used[cand] {
                    continue;
                }
                let fits = a[k][k] == b[cand][cand] && (0..k).all(|j| a[k][j] == b[cand][perm[j]]);
                if fits {
                    perm[k] = cand;
                    used[cand] = true;
                    if extend(k + 1, a, b, perm, used) {
                        return true;
                    }
                    used[cand] = false;
                }
            }
            false
        }
        extend(0, &a, &b, &mut perm, &mut used)
    }

    /// Longest tail pattern: a bold edge `nu - alpha_1` followed by an induced
    /// path `alpha_1 ... alpha_k` of order-3 edges through basis mirrors, each
    /// orthogonal to `nu` except `alpha_1`. Ties prefer an extra node as
    /// `nu`, then the lexicographically smallest node indices.
    pub fn find_tail_pattern(&self) -> Option<TailPattern> {
        let mut best: Option<TailPattern> = None;
        for e in self.edges.iter().filter(|e| e.label == EdgeLabel::Infinite) {
            for (nu, start) in [(e.a, e.b), (e.b, e.a)] {
                if self.nodes[start].extra {
                    continue;
                }
                let mut chains = Vec::new();
                self.grow_chain(nu, vec![start], &mut chains);
                for chain in chains {
                    let cand = TailPattern { nu, chain };
                    if best.as_ref().is_none_or(|b| self.tail_better(&cand, b)) {
                        best = Some(cand);
                    }
                }
            }
        }
        best
    }

    fn tail_better(&self, a: &TailPattern, b: &TailPattern) -> bool {
        let key = |t: &TailPattern| {
            (
                std::cmp::Reverse(t.chain.len()),
                !self.nodes[t.nu].extra,
                t.nu,
                t.chain.clone(),
            )
        };
        key(a) < key(b)
    }

    fn grow_chain(&self, nu: usize, chain: Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let last = *chain.last().expect("non-empty chain");
        let mut extended = false;
        for next in 0..self.nodes.len() {
            if next == nu || self.nodes[next].extra || chain.contains(&next) {
                continue;
            }
            let plain = matches!(
                self.edge_between(last, next).map(|e| &e.label),
                Some(EdgeLabel::Order(3))
            );
            let induced = chain[..chain.len() - 1]
                .iter()
                .all(|&c| self.edge_between(c, next).is_none());
            if plain && induced && self.edge_between(nu, next).is_none() {
                let mut longer = chain.clone();
                longer.push(next);
                self.grow_chain(nu, longer, out);
                extended = true;
            }
        }
        if !extended {
            out.push(chain);
        }
    }
}

/// Weights of a space: rows of `J^-1`, canonical multiples, norm classes.
pub fn weights(space: &LorentzSpace) -> Result<WeightSet, CoxeterError> {
    let inv = inverse_gram(space)?;
    let raw: Vec<LatticeVector> = (0..inv.rows())
        .map(|i| LatticeVector::new(inv.row(i).to_vec()))
        .collect();
    let weights = raw
        .iter()
        .map(LatticeVector::canonicalize)
        .collect::<Result<Vec<_>, _>>()?;
    let classes = (0..inv.rows())
        .map(|i| match inv[(i, i)].sign() {
            1 => NormClass::Positive,
            0 => NormClass::Null,
            _ => NormClass::Negative,
        })
        .collect();
    Ok(WeightSet { raw, weights, classes })
}

pub fn inverse_gram(space: &LorentzSpace) -> Result<Matrix, CoxeterError> {
    match space.gram().inverse() {
        Err(MatrixError::Singular) => Err(CoxeterError::DependentNodes),
        other => Ok(other?),
    }
}
