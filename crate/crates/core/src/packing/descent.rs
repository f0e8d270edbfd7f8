//! Greedy descent certifying that a reflection lies in a reflection group.

use super::PackingError;
use crate::lorentz::{LatticeVector, LorentzSpace};

pub const DESCENT_BOUND: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DescentOutcome {
    /// After applying `word` (first entry first) the vector became
    /// `generator` itself, or its negative when `negated` is set. Then
    /// `R_v` is conjugate to `R_generator` by the word, so it lies in the
    /// group.
    Reached {
        word: Vec<usize>,
        generator: usize,
        negated: bool,
    },
    /// No generator has negative product with the current vector.
    Stuck { word: Vec<usize>, vector: LatticeVector },
    /// The iteration bound was hit.
    BoundExceeded,
}

impl DescentOutcome {
    pub fn succeeded(&self) -> bool {
        matches!(self, DescentOutcome::Reached { .. })
    }
}

/// Reflects `v` in the first generator with `v.g < 0` until `v` is a
/// generator up to sign and positive scaling, or no such generator remains.
pub fn descent(
    space: &LorentzSpace,
    v: &LatticeVector,
    generators: &[LatticeVector],
    bound: usize,
) -> Result<DescentOutcome, PackingError> {
    space.check_dim(v)?;
    let canon: Vec<LatticeVector> = generators
        .iter()
        .map(LatticeVector::canonicalize)
        .collect::<Result<_, _>>()?;
    let mut cur = v.clone();
    let mut word = Vec::new();
    for _ in 0..=bound {
        let c = cur.canonicalize()?;
        let neg = (-&cur).canonicalize()?;
        for (i, g) in canon.iter().enumerate() {
            if &c == g || &neg == g {
                return Ok(DescentOutcome::Reached {
                    word,
                    generator: i,
                    negated: &neg == g,
                });
            }
        }
        if word.len() == bound {
            break;
        }
        let Some(j) = generators.iter().position(|g| space.product(&cur, g).is_negative()) else {
            return Ok(DescentOutcome::Stuck { word, vector: cur });
        };
        cur = space.reflect(&generators[j], &cur)?;
        word.push(j);
    }
    Ok(DescentOutcome::BoundExceeded)
}
