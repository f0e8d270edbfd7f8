//! Codimension-one cross sections of a packing.

use super::PackingError;
use crate::lorentz::{LatticeVector, LorentzSpace};

/// Classification of spheres against the plane `H_h`. Entries index into
/// the input slice.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CrossSection {
    /// `v.h = 0`: the sphere meets `H_h` at a right angle and is kept as is.
    pub perpendicular: Vec<usize>,
    /// `(v.h)^2 = (v.v)(h.h)`: the sphere touches `H_h`.
    pub tangent: Vec<usize>,
    /// Spheres cutting `H_h` at another angle, with their canonical
    /// projections `v - (v.h)/(h.h) h`.
    pub transverse: Vec<(usize, LatticeVector)>,
    /// Spheres that miss `H_h`.
    pub missing: Vec<usize>,
}

pub fn cross_section(
    space: &LorentzSpace,
    vectors: &[LatticeVector],
    h: &LatticeVector,
) -> Result<CrossSection, PackingError> {
    let hh = space.try_product(h, h)?;
    if !hh.is_negative() {
        return Err(PackingError::NotPlane);
    }
    let mut out = CrossSection::default();
    for (i, v) in vectors.iter().enumerate() {
        let vh = space.try_product(v, h)?;
        if vh.is_zero() {
            out.perpendicular.push(i);
            continue;
        }
        let lhs = &vh * &vh;
        let rhs = &space.norm(v) * &hh;
        match lhs.cmp_value(&rhs) {
            std::cmp::Ordering::Equal => out.tangent.push(i),
            std::cmp::Ordering::Less => {
                let n = v.add_scaled(&-(vh.div(&hh)), h);
                out.transverse.push((i, n.canonicalize()?));
            }
            std::cmp::Ordering::Greater => out.missing.push(i),
        }
    }
    Ok(out)
}
