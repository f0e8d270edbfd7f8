//! Euclidean realizations of sphere vectors for a chosen point at infinity.
//!
//! For a null vector `E` and a null `F` with `E.F = 1`, boundary points are
//! `X(y) = F + sum y_i b_i + |y|^2/2 E` where `b_i` is a basis of the
//! complement of `E`, `F` with `b_i.b_j = -delta_ij`. A sphere vector `n`
//! with `p = n.E != 0` and `q = -n.n` realizes as the sphere of center
//! `c_i = -(n.b_i)/p` and radius `sqrt(q)/|p|`; when `p = 0` it is the
//! hyperplane `u.y = (n.F)/sqrt(q)` with unit normal `u_i = -(n.b_i)/sqrt(q)`.
//! Curvatures are kept exactly as the pair `(p, q)`; coordinates are floats.

use std::cmp::Ordering;
use std::fmt;

use crate::lorentz::{LatticeVector, LorentzError, LorentzSpace};
use crate::scalar::ExactScalar;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EuclidError {
    #[error("point at infinity must be null")]
    NotNull,
    #[error("point at infinity must lie on the sheet boundary (E.D > 0)")]
    WrongSheet,
    #[error("vector pairs to zero with the point at infinity")]
    ZeroPairing,
    #[error("sphere vectors must have negative norm")]
    NotSphere,
    #[error("no vector pairs nontrivially with the point at infinity")]
    NoReference,
    #[error(transparent)]
    Lorentz(#[from] LorentzError),
}

/// Exact signed curvature `p / sqrt(q)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Curvature {
    pub p: ExactScalar,
    pub q: ExactScalar,
}

impl Curvature {
    pub fn to_f64(&self) -> f64 {
        self.p.to_f64() / self.q.to_f64().sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero()
    }

    /// `p^2 / q`, the squared curvature.
    pub fn squared(&self) -> ExactScalar {
        (&self.p * &self.p).div(&self.q)
    }

    /// Exact test of `p / sqrt(q) = t`.
    pub fn equals(&self, t: &ExactScalar) -> bool {
        self.p.sign() == t.sign() && &self.p * &self.p == &(t * t) * &self.q
    }

    /// Exact test of `self = t * other`.
    pub fn ratio_equals(&self, other: &Curvature, t: &ExactScalar) -> bool {
        let tp = t * &other.p;
        self.p.sign() == tp.sign() && &(&self.p * &self.p) * &other.q == &(&tp * &tp) * &self.q
    }

    /// Exact test of equal curvature.
    pub fn same_as(&self, other: &Curvature) -> bool {
        self.ratio_equals(other, &ExactScalar::one())
    }

    /// Exact comparison of two curvatures.
    pub fn cmp_value(&self, other: &Curvature) -> Ordering {
        let (a, b) = (self.p.sign(), other.p.sign());
        if a != b {
            return a.cmp(&b);
        }
        // same sign: compare p^2 q' with p'^2 q, reversed for negatives
        let lhs = &(&self.p * &self.p) * &other.q;
        let rhs = &(&other.p * &other.p) * &self.q;
        let ord = lhs.cmp_value(&rhs);
        if a < 0 {
            ord.reverse()
        } else {
            ord
        }
    }
}

impl fmt::Display for Curvature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{};{}", self.p, self.q)
    }
}

/// Exact curvature pair `(n.E, -n.n)`.
pub fn curvature(space: &LorentzSpace, n: &LatticeVector, e: &LatticeVector) -> Result<Curvature, EuclidError> {
    if !space.try_product(e, e)?.is_zero() {
        return Err(EuclidError::NotNull);
    }
    let q = -space.try_product(n, n)?;
    if !q.is_positive() {
        return Err(EuclidError::NotSphere);
    }
    Ok(Curvature {
        p: space.product(n, e),
        q,
    })
}

/// Boundary chart for the point at infinity `E`.
#[derive(Debug, Clone)]
pub struct Frame {
    pub e: LatticeVector,
    pub f: LatticeVector,
    /// Exact orthogonal complement basis (not normalized).
    pub basis: Vec<LatticeVector>,
    /// `sqrt(-b_i.b_i)` for each basis vector.
    pub scales: Vec<f64>,
    /// Coordinates subtracted from every realized point.
    pub origin: Vec<f64>,
}

impl Frame {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    fn raw_coords(&self, space: &LorentzSpace, n: &LatticeVector) -> Vec<f64> {
        self.basis
            .iter()
            .zip(&self.scales)
            .map(|(b, s)| space.product(n, b).to_f64() / s)
            .collect()
    }
}

/// First unit vector, then first row of `J^-1`, pairing nontrivially with `E`.
pub fn default_reference(space: &LorentzSpace, e: &LatticeVector) -> Result<LatticeVector, EuclidError> {
    let n = space.dim();
    let units = (0..n).map(|i| LatticeVector::unit(n, i));
    let inv = space.gram().inverse().map_err(LorentzError::from)?;
    let rows = (0..n).map(|i| LatticeVector::new(inv.row(i).to_vec()));
    units
        .chain(rows)
        .find(|v| !space.product(v, e).is_zero())
        .ok_or(EuclidError::NoReference)
}

/// Builds the chart for `E` from a reference vector `F0` with `E.F0 != 0`,
/// optionally translated so that `origin`'s center sits at zero.
pub fn make_frame(
    space: &LorentzSpace,
    e: &LatticeVector,
    f0: &LatticeVector,
    origin: Option<&LatticeVector>,
) -> Result<Frame, EuclidError> {
    if !space.try_product(e, e)?.is_zero() {
        return Err(EuclidError::NotNull);
    }
    if !space.product(e, space.sheet()).is_positive() {
        return Err(EuclidError::WrongSheet);
    }
    let ef0 = space.try_product(e, f0)?;
    if ef0.is_zero() {
        return Err(EuclidError::ZeroPairing);
    }
    // F = F0/(E.F0) - (F0.F0)/(2 (E.F0)^2) E
    let f0f0 = space.norm(f0);
    let a = ExactScalar::one().div(&ef0);
    let c = -f0f0.div(&(&ExactScalar::from_integer(2) * &(&ef0 * &ef0)));
    let f = LatticeVector::zero(space.dim()).add_scaled(&a, f0).add_scaled(&c, e);
    debug_assert!(space.norm(&f).is_zero());
    let mut basis: Vec<LatticeVector> = Vec::new();
    let mut norms: Vec<ExactScalar> = Vec::new();
    for j in 0..space.dim() {
        if basis.len() + 2 == space.dim() {
            break;
        }
        let u = LatticeVector::unit(space.dim(), j);
        let mut x = u
            .add_scaled(&-space.product(&u, &f), e)
            .add_scaled(&-space.product(&u, e), &f);
        for (b, bb) in basis.iter().zip(&norms) {
            let xb = space.product(&x, b);
            if !xb.is_zero() {
                x = x.add_scaled(&-xb.div(bb), b);
            }
        }
        if x.is_zero() {
            continue;
        }
        let xx = space.norm(&x);
        debug_assert!(xx.is_negative());
        norms.push(xx);
        basis.push(x.canonicalize()?);
        let last = basis.len() - 1;
        norms[last] = space.norm(&basis[last]);
    }
    let scales = norms.iter().map(|n| (-n.to_f64()).sqrt()).collect();
    let mut frame = Frame {
        e: e.clone(),
        f,
        basis,
        scales,
        origin: vec![0.0; space.dim() - 2],
    };
    if let Some(o) = origin {
        match realize(space, o, &frame)?.shape {
            Shape::Sphere { center, .. } => frame.origin = center,
            Shape::Hyperplane { .. } => return Err(EuclidError::ZeroPairing),
        }
    }
    Ok(frame)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    Sphere {
        center: Vec<f64>,
        radius: f64,
    },
    /// Points `y` with `normal . y = offset`.
    Hyperplane {
        normal: Vec<f64>,
        offset: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct EuclideanSphere {
    pub curvature: Curvature,
    pub curvature_f64: f64,
    pub shape: Shape,
}

impl EuclideanSphere {
    pub fn is_hyperplane(&self) -> bool {
        matches!(self.shape, Shape::Hyperplane { .. })
    }

    /// One tab-separated line: kind, exact curvature, float curvature,
    /// then center and radius (or normal and offset).
    pub fn tsv_line(&self) -> String {
        let nums = |v: &[f64]| v.iter().map(|x| format!("{x:.12}")).collect::<Vec<_>>().join("\t");
        match &self.shape {
            Shape::Sphere { center, radius } => format!(
                "sphere\t{}\t{:.12}\t{}\t{radius:.12}",
                self.curvature,
                self.curvature_f64,
                nums(center)
            ),
            Shape::Hyperplane { normal, offset } => format!(
                "plane\t{}\t{:.12}\t{}\t{offset:.12}",
                self.curvature,
                self.curvature_f64,
                nums(normal)
            ),
        }
    }
}

pub fn realize(space: &LorentzSpace, n: &LatticeVector, frame: &Frame) -> Result<EuclideanSphere, EuclidError> {
    let curvature = curvature(space, n, &frame.e)?;
    let nb = frame.raw_coords(space, n);
    let sq = curvature.q.to_f64().sqrt();
    let shape = if curvature.p.is_zero() {
        let normal: Vec<f64> = nb.iter().map(|x| -x / sq).collect();
        let shift: f64 = normal.iter().zip(&frame.origin).map(|(a, o)| a * o).sum();
        Shape::Hyperplane {
            offset: space.product(n, &frame.f).to_f64() / sq - shift,
            normal,
        }
    } else {
        let p = curvature.p.to_f64();
        Shape::Sphere {
            center: nb.iter().zip(&frame.origin).map(|(x, o)| -x / p - o).collect(),
            radius: sq / p.abs(),
        }
    };
    Ok(EuclideanSphere {
        curvature_f64: curvature.to_f64(),
        curvature,
        shape,
    })
}

/// `|AB|_E^2 = 2 A.B / ((A.E)(B.E))` for null `A`, `B`, `E`.
pub fn boundary_distance_sq(
    space: &LorentzSpace,
    a: &LatticeVector,
    b: &LatticeVector,
    e: &LatticeVector,
) -> Result<ExactScalar, EuclidError> {
    for v in [a, b, e] {
        if !space.try_product(v, v)?.is_zero() {
            return Err(EuclidError::NotNull);
        }
    }
    let (ae, be) = (space.product(a, e), space.product(b, e));
    if ae.is_zero() || be.is_zero() {
        return Err(EuclidError::ZeroPairing);
    }
    Ok((ExactScalar::from_integer(2) * space.product(a, b)).div(&(&ae * &be)))
}

/// Affine 2-plane `origin + x u + y v` with orthonormal `u`, `v`.
#[derive(Debug, Clone, PartialEq)]
pub struct Plane {
    pub origin: Vec<f64>,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
}

impl Plane {
    /// The plane of the first two coordinates through the origin.
    pub fn coordinate(dim: usize) -> Plane {
        let unit = |i: usize| (0..dim).map(|j| if i == j { 1.0 } else { 0.0 }).collect();
        Plane {
            origin: vec![0.0; dim],
            u: unit(0),
            v: unit(1),
        }
    }

    /// The hyperplane `normal . y = offset` of a 3-dimensional chart.
    pub fn from_hyperplane(normal: &[f64], offset: f64) -> Option<Plane> {
        if normal.len() != 3 {
            return None;
        }
        let origin = normal.iter().map(|a| a * offset).collect();
        let mut basis: Vec<Vec<f64>> = Vec::new();
        for i in 0..3 {
            let mut x: Vec<f64> = (0..3).map(|j| if i == j { 1.0 } else { 0.0 }).collect();
            for b in std::iter::once(&normal.to_vec()).chain(basis.iter()) {
                let d = dot(&x, b);
                x.iter_mut().zip(b).for_each(|(xi, bi)| *xi -= d * bi);
            }
            let len = dot(&x, &x).sqrt();
            if len > 1e-6 {
                basis.push(x.into_iter().map(|xi| xi / len).collect());
            }
            if basis.len() == 2 {
                break;
            }
        }
        let v = basis.pop()?;
        let u = basis.pop()?;
        Some(Plane { origin, u, v })
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub const RADIUS_FLOOR: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq)]
pub enum SliceItem {
    Circle {
        index: usize,
        center: [f64; 2],
        radius: f64,
        curvature: f64,
    },
    /// Points with `normal . (x, y) = offset`, `normal` a unit vector.
    Line {
        index: usize,
        normal: [f64; 2],
        offset: f64,
    },
}

/// Intersections of realized spheres with a plane, in input order.
pub fn slice(spheres: &[EuclideanSphere], plane: &Plane) -> Vec<SliceItem> {
    let mut out = Vec::new();
    for (index, s) in spheres.iter().enumerate() {
        match &s.shape {
            Shape::Sphere { center, radius } => {
                let w: Vec<f64> = center.iter().zip(&plane.origin).map(|(c, o)| c - o).collect();
                let (x, y) = (dot(&w, &plane.u), dot(&w, &plane.v));
                let dist2 = (dot(&w, &w) - x * x - y * y).max(0.0);
                let r2 = radius * radius - dist2;
                if r2 > RADIUS_FLOOR * RADIUS_FLOOR {
                    let r = r2.sqrt();
                    out.push(SliceItem::Circle {
                        index,
                        center: [x, y],
                        radius: r,
                        curvature: 1.0 / r,
                    });
                }
            }
            Shape::Hyperplane { normal, offset } => {
                let (a, b) = (dot(normal, &plane.u), dot(normal, &plane.v));
                let len = (a * a + b * b).sqrt();
                if len > 1e-12 {
                    out.push(SliceItem::Line {
                        index,
                        normal: [a / len, b / len],
                        offset: (offset - dot(normal, &plane.origin)) / len,
                    });
                }
            }
        }
    }
    out
}
