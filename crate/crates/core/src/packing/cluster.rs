//! Mutually tangent clusters grown along a tail pattern.

use super::PackingError;
use crate::lorentz::{LatticeVector, LorentzSpace};
use crate::scalar::ExactScalar;

/// `s_1 = nu`, `s_{i+1} = R_{alpha_i}(s_i)`.
///
/// The induction items are checked in scale-free form, with `k = -nu.nu`:
/// (a) `s_{i+1} - s_i = c alpha_i` with `c^2 (-alpha_i.alpha_i) = 4k`;
/// (b) `(alpha_i.s_i)^2 = k (-alpha_i.alpha_i)` with `alpha_i.s_i > 0`;
/// (c) `alpha_j.s_i = 0` for `j > i`;
/// (d) `s_i.s_j = k` for `i != j` and `s_i.s_i = -k`.
/// With all norms equal to -2 these read `s_{i+1} = s_i + 2 alpha_i`,
/// `alpha_i.s_i = 2` and `s_i.s_j = 2`.
pub fn seed_cluster(
    space: &LorentzSpace,
    chain: &[LatticeVector],
    nu: &LatticeVector,
) -> Result<Vec<LatticeVector>, PackingError> {
    let fail = |msg: String| Err(PackingError::ClusterCondition(msg));
    let k = -space.try_product(nu, nu)?;
    if !k.is_positive() {
        return fail("nu must have negative norm".into());
    }
    let four = ExactScalar::from_integer(4);
    let mut cluster = vec![nu.clone()];
    for (i, alpha) in chain.iter().enumerate() {
        let s = cluster.last().expect("non-empty").clone();
        let m = -space.try_product(alpha, alpha)?;
        if !m.is_positive() {
            return fail(format!("mirror {} must have negative norm", i + 1));
        }
        for (j, later) in chain.iter().enumerate().skip(i + 1) {
            if !space.product(later, &s).is_zero() {
                return fail(format!("item (c): alpha_{}.s_{} != 0", j + 1, i + 1));
            }
        }
        let p = space.product(alpha, &s);
        if !p.is_positive() || &p * &p != &k * &m {
            return fail(format!("item (b): alpha_{0}.s_{0} = {p}", i + 1));
        }
        let next = space.reflect(alpha, &s)?;
        // (a): the step is c alpha with c = 2p/m, so c^2 m = 4k iff p^2 = k m
        let c = (ExactScalar::from_integer(2) * &p).div(&m);
        if next != s.add_scaled(&c, alpha) || &(&c * &c) * &m != &four * &k {
            return fail(format!("item (a) at step {}", i + 1));
        }
        cluster.push(next);
    }
    for (i, a) in cluster.iter().enumerate() {
        for (j, b) in cluster.iter().enumerate().skip(i) {
            let p = space.product(a, b);
            let want = if i == j { -k.clone() } else { k.clone() };
            if p != want {
                return fail(format!("item (d): s_{}.s_{} = {p}", i + 1, j + 1));
            }
        }
    }
    Ok(cluster)
}
