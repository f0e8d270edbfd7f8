//! Maxwell's packing condition and tangency cliques.

use rayon::prelude::*;

use super::PackingError;
use crate::lorentz::{LatticeVector, LorentzSpace};
use crate::scalar::ExactScalar;

/// Pairwise product summary over a set of sphere vectors of norm `-k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PackingReport {
    pub elements: usize,
    pub k: ExactScalar,
    pub violations: usize,
    /// First few violating index pairs.
    pub violating_pairs: Vec<(usize, usize)>,
    pub tangent_pairs: usize,
    pub min_product: Option<ExactScalar>,
}

impl PackingReport {
    pub fn is_packing(&self) -> bool {
        self.violations == 0
    }
}

const KEPT_VIOLATIONS: usize = 100;

/// Pair statistics for one row `i` against all `j > i`.
struct RowStats {
    min: Option<ExactScalar>,
    tangent: usize,
    violating: Vec<usize>,
    violations: usize,
}

/// Checks `n.n = -k` for all elements and `n.n' >= k` for distinct pairs.
pub fn packing_check(space: &LorentzSpace, vectors: &[LatticeVector]) -> Result<PackingReport, PackingError> {
    let Some(first) = vectors.first() else {
        return Ok(PackingReport {
            elements: 0,
            k: ExactScalar::zero(),
            violations: 0,
            violating_pairs: Vec::new(),
            tangent_pairs: 0,
            min_product: None,
        });
    };
    let norm = space.norm(first);
    if !norm.is_negative() {
        return Err(PackingError::NotSpheres);
    }
    for v in vectors {
        space.check_dim(v)?;
        let n = space.norm(v);
        if n != norm {
            return Err(PackingError::MixedNorms(Box::new(norm), Box::new(n)));
        }
    }
    let k = -norm;
    let rows: Vec<RowStats> = match IntForm::new(space, vectors) {
        Some(f) => {
            let kk = k.rational_part().to_integer().try_into().ok();
            match kk {
                Some(kk) => (0..vectors.len()).into_par_iter().map(|i| f.row(i, kk)).collect(),
                None => exact_rows(space, vectors, &k),
            }
        }
        None => exact_rows(space, vectors, &k),
    };
    let mut report = PackingReport {
        elements: vectors.len(),
        k,
        violations: 0,
        violating_pairs: Vec::new(),
        tangent_pairs: 0,
        min_product: None,
    };
    for (i, r) in rows.into_iter().enumerate() {
        report.tangent_pairs += r.tangent;
        report.violations += r.violations;
        for j in r.violating {
            if report.violating_pairs.len() < KEPT_VIOLATIONS {
                report.violating_pairs.push((i, j));
            }
        }
        if let Some(m) = r.min {
            let better = report.min_product.as_ref().is_none_or(|cur| m.cmp_value(cur).is_lt());
            if better {
                report.min_product = Some(m);
            }
        }
    }
    Ok(report)
}

fn exact_rows(space: &LorentzSpace, vectors: &[LatticeVector], k: &ExactScalar) -> Vec<RowStats> {
    // J v for every vector, so each pair costs one coordinate dot product
    let jv: Vec<Vec<ExactScalar>> = vectors
        .par_iter()
        .map(|v| space.gram().mul_vec(v.coords()).expect("checked dimensions"))
        .collect();
    (0..vectors.len())
        .into_par_iter()
        .map(|i| {
            let mut st = RowStats {
                min: None,
                tangent: 0,
                violating: Vec::new(),
                violations: 0,
            };
            for (j, row) in jv.iter().enumerate().skip(i + 1) {
                let p: ExactScalar = vectors[i]
                    .coords()
                    .iter()
                    .zip(row)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .map(|(a, b)| a * b)
                    .sum();
                match p.cmp_value(k) {
                    std::cmp::Ordering::Less => {
                        st.violations += 1;
                        if st.violating.len() < KEPT_VIOLATIONS {
                            st.violating.push(j);
                        }
                    }
                    std::cmp::Ordering::Equal => st.tangent += 1,
                    std::cmp::Ordering::Greater => {}
                }
                if st.min.as_ref().is_none_or(|m| p.cmp_value(m).is_lt()) {
                    st.min = Some(p);
                }
            }
            st
        })
        .collect()
}

/// Machine-integer image of an integral configuration.
pub(crate) struct IntForm {
    coords: Vec<Vec<i64>>,
    jv: Vec<Vec<i128>>,
}

impl IntForm {
    const LIMIT: i64 = 1 << 40;

    pub(crate) fn new(space: &LorentzSpace, vectors: &[LatticeVector]) -> Option<Self> {
        let to_small = |x: &ExactScalar| -> Option<i64> {
            if !x.is_integer() {
                return None;
            }
            let v: i64 = x.rational_part().to_integer().try_into().ok()?;
            (v.abs() < Self::LIMIT).then_some(v)
        };
        let n = space.dim();
        let gram: Vec<Vec<i64>> = (0..n)
            .map(|i| space.gram().row(i).iter().map(to_small).collect::<Option<_>>())
            .collect::<Option<_>>()?;
        let coords: Vec<Vec<i64>> = vectors
            .iter()
            .map(|v| v.coords().iter().map(to_small).collect::<Option<_>>())
            .collect::<Option<_>>()?;
        let jv = coords
            .iter()
            .map(|c| {
                (0..n)
                    .map(|i| (0..n).map(|j| gram[i][j] as i128 * c[j] as i128).sum())
                    .collect()
            })
            .collect();
        Some(IntForm { coords, jv })
    }

    pub(crate) fn product(&self, i: usize, j: usize) -> i128 {
        self.coords[i]
            .iter()
            .zip(&self.jv[j])
            .map(|(&a, &b)| a as i128 * b)
            .sum()
    }

    fn row(&self, i: usize, k: i128) -> RowStats {
        let mut st = RowStats {
            min: None,
            tangent: 0,
            violating: Vec::new(),
            violations: 0,
        };
        let mut min: Option<i128> = None;
        for j in i + 1..self.coords.len() {
            let p = self.product(i, j);
            if p < k {
                st.violations += 1;
                if st.violating.len() < KEPT_VIOLATIONS {
                    st.violating.push(j);
                }
            } else if p == k {
                st.tangent += 1;
            }
            min = Some(min.map_or(p, |m| m.min(p)));
        }
        st.min = min.map(|m| ExactScalar::from_bigint(m.into()));
        st
    }
}

/// Outcome of the clique search around one element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueResult {
    pub element: usize,
    /// Indices of a mutually tangent cluster containing the element, or
    /// `None` when none was found inside the truncated set.
    pub clique: Option<Vec<usize>>,
}

const CLIQUE_STEPS: usize = 1_000_000;

/// For each sampled element, searches for `target` mutually tangent spheres
/// (pairwise product `k`) containing it. Neighbours are tried in input order,
/// which for orbits is canonical order.
pub fn tangency_clusters(
    space: &LorentzSpace,
    vectors: &[LatticeVector],
    target: usize,
    sample: &[usize],
) -> Result<Vec<CliqueResult>, PackingError> {
    let Some(first) = vectors.first() else {
        return Ok(Vec::new());
    };
    let k = -space.norm(first);
    let ints = IntForm::new(space, vectors);
    let kint: Option<i128> = if k.is_integer() {
        k.rational_part().to_integer().try_into().ok()
    } else {
        None
    };
    let tangent = |i: usize, j: usize| -> bool {
        match (&ints, kint) {
            (Some(f), Some(kk)) => f.product(i, j) == kk,
            _ => space.product(&vectors[i], &vectors[j]) == k,
        }
    };
    let results = sample
        .par_iter()
        .map(|&e| {
            let nbrs: Vec<usize> = (0..vectors.len()).filter(|&j| j != e && tangent(e, j)).collect();
            let mut clique = vec![e];
            let mut steps = 0;
            let found = target <= 1 || extend(&nbrs, 0, &mut clique, target, &tangent, &mut steps);
            CliqueResult {
                element: e,
                clique: (found && target >= 1).then_some(clique),
            }
        })
        .collect();
    Ok(results)
}

fn extend(
    nbrs: &[usize],
    from: usize,
    clique: &mut Vec<usize>,
    target: usize,
    tangent: &(dyn Fn(usize, usize) -> bool + Sync),
    steps: &mut usize,
) -> bool {
    if clique.len() == target {
        return true;
    }
    for (pos, &c) in nbrs.iter().enumerate().skip(from) {
        *steps += 1;
        if *steps > CLIQUE_STEPS {
            return false;
        }
        if nbrs.len() - pos < target - clique.len() {
            return false;
        }
        if clique[1..].iter().all(|&m| tangent(m, c)) {
            clique.push(c);
            if extend(nbrs, pos + 1, clique, target, tangent, steps) {
                return true;
            }
            clique.pop();
        }
    }
    false
}
