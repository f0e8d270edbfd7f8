//! Convex-hull witnesses and the cusp limit for the Reye lattice packing.
//!
//! Everything here assumes the basis `beta_0 ... beta_9` of the bundled
//! `c2` graph in file order; the identities are sensitive to that order.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::descent::{descent, DescentOutcome, DESCENT_BOUND};
use super::PackingError;
use crate::coxeter::inverse_gram;
use crate::lorentz::{LatticeVector, LorentzSpace};
use crate::scalar::ExactScalar;

/// Weights, mirrors and the tangent cluster of the Reye lattice packing.
#[derive(Debug, Clone)]
pub struct ReyeCluster {
    /// Rows of `J^-1`, unscaled.
    pub w: Vec<LatticeVector>,
    pub beta: Vec<LatticeVector>,
    pub nu: LatticeVector,
    /// `s_0 ... s_9` from the tail, then `s_10 = R_{b0}(s_6)` and
    /// `s_11 = R_{b0}(s_9)`.
    pub s: Vec<LatticeVector>,
}

impl ReyeCluster {
    pub fn new(space: &LorentzSpace) -> Result<Self, PackingError> {
        let n = space.dim();
        if n != 10 {
            return Err(crate::lorentz::LorentzError::Dimension { expected: 10, got: n }.into());
        }
        let inv = inverse_gram(space)?;
        let w: Vec<LatticeVector> = (0..n).map(|i| LatticeVector::new(inv.row(i).to_vec())).collect();
        let beta: Vec<LatticeVector> = (0..n).map(|i| LatticeVector::unit(n, i)).collect();
        let nu = w[9].scale(&ExactScalar::from_integer(2));
        let mut s = vec![nu.clone()];
        for i in 0..9 {
            let next = space.reflect(&beta[9 - i], &s[i])?;
            s.push(next);
        }
        s.push(space.reflect(&beta[0], &s[6])?);
        s.push(space.reflect(&beta[0], &s[9])?);
        Ok(ReyeCluster { w, beta, nu, s })
    }

    /// `R_{b_i} R_{b_{i+1}} ... R_{b_9} x` (the last mirror applied first).
    fn reflect_down(
        &self,
        space: &LorentzSpace,
        from: usize,
        x: &LatticeVector,
    ) -> Result<LatticeVector, PackingError> {
        let mut y = x.clone();
        for j in (from..10).rev() {
            y = space.reflect(&self.beta[j], &y)?;
        }
        Ok(y)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub holds: bool,
}

fn half_sum(vs: &[LatticeVector]) -> LatticeVector {
    let n = vs[0].dim();
    let sum = vs.iter().fold(LatticeVector::zero(n), |acc, v| &acc + v);
    sum.scale(&ExactScalar::ratio(1, 2))
}

/// Exact check of every convex-hull witness identity, comparing raw
/// `J^-1` rows on both sides. Any failure is an error.
pub fn witness_checks(space: &LorentzSpace) -> Result<Vec<Check>, PackingError> {
    let c = ReyeCluster::new(space)?;
    let (w, s, b) = (&c.w, &c.s, &c.beta);
    let mut checks = Vec::new();
    for i in 5..=9 {
        let step = &w[i] + &c.reflect_down(space, i, &w[9])?;
        checks.push(Check {
            name: format!("w{} = w{i} + R(b{i}..b9) w9", i - 1),
            holds: w[i - 1] == step,
        });
        checks.push(Check {
            name: format!("w{} = (s0+...+s{})/2", i - 1, 10 - i),
            holds: w[i - 1] == half_sum(&s[..=10 - i]),
        });
    }
    let r2s8 = space.reflect(&b[2], &s[8])?;
    checks.push(Check {
        name: "w2 = (s10 + R(b2) s8)/2".into(),
        holds: w[2] == half_sum(&[s[10].clone(), r2s8]),
    });
    checks.push(Check {
        name: "w0 = w1 + s9/2".into(),
        holds: w[0] == &w[1] + &s[9].scale(&ExactScalar::ratio(1, 2)),
    });
    let rhs = &space.reflect(&b[2], &w[2])? + &space.reflect(&b[1], &w[1])?;
    checks.push(Check {
        name: "w3 = R(b2) w2 + R(b1) w1".into(),
        holds: w[3] == rhs,
    });
    let failed: Vec<&str> = checks.iter().filter(|c| !c.holds).map(|c| c.name.as_str()).collect();
    if !failed.is_empty() {
        return Err(PackingError::WitnessFailed(failed.join("; ")));
    }
    Ok(checks)
}

/// Convergence data for `(1/k^2) T^k(w_9)` with `T = R_v R_{b9}`.
#[derive(Debug, Clone)]
pub struct LimitReport {
    /// Mirror `v = w_1 - b_9`, with `w_1` the primitive integral weight.
    pub mirror: LatticeVector,
    pub descent: DescentOutcome,
    /// The limit point: the primitive integral multiple of `w_1`.
    pub target: LatticeVector,
    /// `k * max_i |(T^k w_9)_i / k^2 - target_i|` for `k = 1..=K`.
    pub scaled_residuals: Vec<BigRational>,
}

impl LimitReport {
    pub fn max_scaled_residual(&self) -> BigRational {
        self.scaled_residuals
            .iter()
            .cloned()
            .fold(BigRational::zero(), |a, b| if b > a { b } else { a })
    }

    /// Unscaled residual at `k` (1-based).
    pub fn residual(&self, k: usize) -> BigRational {
        &self.scaled_residuals[k - 1] / BigRational::from_integer(k.into())
    }
}

pub fn limit_check(space: &LorentzSpace, iterations: usize) -> Result<LimitReport, PackingError> {
    let c = ReyeCluster::new(space)?;
    let target = c.w[1].canonicalize()?;
    let mirror = &target - &c.beta[9];
    let outcome = descent(space, &mirror, &c.beta, DESCENT_BOUND)?;
    let mut x = c.w[9].clone();
    let mut scaled = Vec::with_capacity(iterations);
    for k in 1..=iterations {
        x = space.reflect(&mirror, &space.reflect(&c.beta[9], &x)?)?;
        let kk = BigRational::from_integer(k.into());
        let k2 = &kk * &kk;
        let mut worst = BigRational::zero();
        for (xi, ti) in x.coords().iter().zip(target.coords()) {
            let xi = xi.as_rational().expect("rational lattice");
            let ti = ti.as_rational().expect("rational lattice");
            let r = (xi / &k2 - ti).abs();
            if r > worst {
                worst = r;
            }
        }
        scaled.push(worst * kk);
    }
    let report = LimitReport {
        mirror,
        descent: outcome,
        target,
        scaled_residuals: scaled,
    };
    if iterations >= 2 && report.residual(iterations) >= report.residual(1) {
        return Err(PackingError::Divergence);
    }
    Ok(report)
}
