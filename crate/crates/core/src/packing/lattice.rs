//! Determinants of incidence matrices and sublattice indices.

use num_bigint::BigInt;

use super::PackingError;
use crate::lorentz::{LatticeVector, LorentzSpace};
use crate::scalar::ExactScalar;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeComparison {
    pub det_lattice: ExactScalar,
    pub det_sublattice: ExactScalar,
    /// `sqrt(det_sublattice / det_lattice)`.
    pub index: BigInt,
}

/// Incidence determinant of a basis.
pub fn determinant(space: &LorentzSpace, basis: &[LatticeVector]) -> Result<ExactScalar, PackingError> {
    Ok(space.gram_of(basis)?.det()?)
}

/// Compares a lattice with a full-rank sublattice through the incidence
/// determinants of their bases.
pub fn det_and_index(
    space: &LorentzSpace,
    lattice: &[LatticeVector],
    sublattice: &[LatticeVector],
) -> Result<LatticeComparison, PackingError> {
    let det_lattice = determinant(space, lattice)?;
    let det_sublattice = determinant(space, sublattice)?;
    let index = index_from_dets(&det_lattice, &det_sublattice)?;
    Ok(LatticeComparison {
        det_lattice,
        det_sublattice,
        index,
    })
}

/// Integer square root of a determinant ratio.
pub fn index_from_dets(lattice: &ExactScalar, sublattice: &ExactScalar) -> Result<BigInt, PackingError> {
    let ratio = sublattice
        .checked_div(lattice)
        .map_err(crate::lorentz::LorentzError::from)?;
    let bad = || PackingError::NonIntegralIndex(Box::new(ratio.clone()));
    let root = ratio.sqrt_in(1).ok_or_else(bad)?;
    if !root.is_integer() {
        return Err(bad());
    }
    Ok(root.rational_part().to_integer())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_needs_square_ratio() {
        let four = ExactScalar::from_integer(-4);
        assert_eq!(
            index_from_dets(&ExactScalar::from_integer(-1), &four).unwrap(),
            2.into()
        );
        assert!(index_from_dets(&ExactScalar::from_integer(-2), &four).is_err());
        assert!(index_from_dets(&ExactScalar::from_integer(-3), &four).is_err());
    }
}
