//! Lorentz spaces of signature (1, N-1), lattice vectors and isometries.

use std::fmt;
use std::ops::{Add, Index, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;

use crate::matrix::{Matrix, MatrixError, Signature};
use crate::scalar::{gcd_all, ExactScalar, ScalarError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LorentzError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("gram matrix has signature {0}, expected (1,{1})")]
    Signature(Signature, usize),
    #[error("gram matrix is not symmetric")]
    NotSymmetric,
    #[error("sheet vector must have positive norm")]
    BadSheet,
    #[error("reflection in a null vector")]
    NullMirror,
    #[error("bertini involution needs null A, B with A.B != 0")]
    BertiniPrecondition,
    #[error("zero vector cannot be canonicalized")]
    ZeroVector,
    #[error("matrix is not an isometry")]
    NotIsometry,
    #[error("cannot parse vector `{0}`")]
    Parse(String),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// Integers print bare, everything else in full scalar text.
pub fn short_text(x: &ExactScalar) -> String {
    if x.is_integer() {
        x.rational_part().numer().to_string()
    } else {
        x.to_string()
    }
}

/// Coordinate vector in the basis of some [`LorentzSpace`].
///
/// Ordering is lexicographic on the coordinates, using the structural order
/// of [`ExactScalar`] (numeric for rational coordinates).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeVector(Vec<ExactScalar>);

impl LatticeVector {
    pub fn new(coords: Vec<ExactScalar>) -> Self {
        LatticeVector(coords)
    }

    pub fn from_integers(coords: &[i64]) -> Self {
        LatticeVector(coords.iter().map(|&x| ExactScalar::from_integer(x)).collect())
    }

    pub fn zero(n: usize) -> Self {
        LatticeVector(vec![ExactScalar::zero(); n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = Self::zero(n);
        v.0[i] = ExactScalar::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[ExactScalar] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<ExactScalar> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(ExactScalar::is_zero)
    }

    pub fn scale(&self, c: &ExactScalar) -> Self {
        LatticeVector(self.0.iter().map(|x| x * c).collect())
    }

    pub fn scale_rational(&self, r: &BigRational) -> Self {
        LatticeVector(self.0.iter().map(|x| x.scale_rational(r)).collect())
    }

    /// `self + c * other`.
    pub fn add_scaled(&self, c: &ExactScalar, other: &Self) -> Self {
        LatticeVector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| if b.is_zero() { a.clone() } else { a + &(c * b) })
                .collect(),
        )
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(ExactScalar::is_integer)
    }

    /// Positive multiple with coprime integer rational and surd parts.
    ///
    /// Denominators of both parts are cleared by their least common
    /// multiple, then the content gcd of all numerators is divided out. The
    /// sign is never flipped.
    pub fn canonicalize(&self) -> Result<Self, LorentzError> {
        if self.is_zero() {
            return Err(LorentzError::ZeroVector);
        }
        let parts = || self.0.iter().flat_map(|x| [x.rational_part(), x.surd_part()]);
        let lcm = parts().fold(BigInt::one(), |l, r| l.lcm(r.denom()));
        let nums: Vec<BigInt> = parts().map(|r| (r * &lcm).to_integer()).collect();
        let g = gcd_all(nums.iter());
        let factor = BigRational::new(lcm, g);
        if factor.is_one() {
            return Ok(self.clone());
        }
        Ok(self.scale_rational(&factor))
    }

    /// True when `self = c * other` for some positive scalar `c`.
    pub fn is_positive_multiple_of(&self, other: &Self) -> bool {
        self.dim() == other.dim() && self.proportionality(other).is_some_and(|c| c.is_positive())
    }

    /// True when the two vectors are proportional (either sign).
    pub fn is_parallel_to(&self, other: &Self) -> bool {
        self.dim() == other.dim() && self.proportionality(other).is_some()
    }

    fn proportionality(&self, other: &Self) -> Option<ExactScalar> {
        let k = other.0.iter().position(|x| !x.is_zero())?;
        let c = self.0[k].checked_div(&other.0[k]).ok()?;
        if c.is_zero() {
            return None;
        }
        self.0.iter().zip(&other.0).all(|(a, b)| a == &(&c * b)).then_some(c)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(ExactScalar::to_f64).collect()
    }

    pub fn parse(s: &str) -> Result<Self, LorentzError> {
        let err = || LorentzError::Parse(s.to_string());
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(err)?;
        if inner.trim().is_empty() {
            return Err(err());
        }
        inner
            .split(',')
            .map(|t| ExactScalar::parse(t).map_err(|_| err()))
            .collect::<Result<Vec<_>, _>>()
            .map(LatticeVector)
    }
}

impl Index<usize> for LatticeVector {
    type Output = ExactScalar;
    fn index(&self, i: usize) -> &ExactScalar {
        &self.0[i]
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(short_text).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl fmt::Debug for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for LatticeVector {
    type Err = LorentzError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s)
    }
}

impl Add<&LatticeVector> for &LatticeVector {
    type Output = LatticeVector;
    fn add(self, rhs: &LatticeVector) -> LatticeVector {
        assert_eq!(self.dim(), rhs.dim(), "vector dimensions");
        LatticeVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub<&LatticeVector> for &LatticeVector {
    type Output = LatticeVector;
    fn sub(self, rhs: &LatticeVector) -> LatticeVector {
        assert_eq!(self.dim(), rhs.dim(), "vector dimensions");
        LatticeVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &LatticeVector {
    type Output = LatticeVector;
    fn neg(self) -> LatticeVector {
        LatticeVector(self.0.iter().map(|a| -a).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NormClass {
    /// Positive norm: a point of hyperbolic space up to scaling.
    Positive,
    /// Zero norm: a cusp on the boundary.
    Null,
    /// Negative norm: a plane, or a sphere on the boundary.
    Negative,
}

impl fmt::Display for NormClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NormClass::Positive => "point",
            NormClass::Null => "cusp",
            NormClass::Negative => "plane",
        })
    }
}

/// The space R^{1,N-1} with Gram matrix `J` and a sheet selector `D`.
#[derive(Clone, Debug)]
pub struct LorentzSpace {
    gram: Matrix,
    sheet: LatticeVector,
    d: u64,
    // sparse rows of J for fast products
    sparse: Vec<Vec<(usize, ExactScalar)>>,
}

impl LorentzSpace {
    /// Builds a space, verifying symmetry and signature (1, N-1), with the
    /// default sheet selector.
    pub fn new(gram: Matrix) -> Result<Self, LorentzError> {
        let sheet = Self::default_sheet(&gram)?;
        Self::with_sheet(gram, sheet)
    }

    pub fn with_sheet(gram: Matrix, sheet: LatticeVector) -> Result<Self, LorentzError> {
        if !gram.is_symmetric() {
            return Err(LorentzError::NotSymmetric);
        }
        let n = gram.rows();
        let sig = gram.signature()?;
        if sig.positive != 1 || sig.negative != n - 1 {
            return Err(LorentzError::Signature(sig, n - 1));
        }
        let d = gram.surd_base()?;
        let sparse = (0..n)
            .map(|i| {
                gram.row(i)
                    .iter()
                    .enumerate()
                    .filter(|(_, x)| !x.is_zero())
                    .map(|(j, x)| (j, x.clone()))
                    .collect()
            })
            .collect();
        let space = LorentzSpace {
            gram,
            sheet: LatticeVector::zero(n),
            d,
            sparse,
        };
        space.check_dim(&sheet)?;
        if !space.norm(&sheet).is_positive() {
            return Err(LorentzError::BadSheet);
        }
        Ok(LorentzSpace { sheet, ..space })
    }

    /// All-ones vector if it has positive norm, else the first row of `J^-1`
    /// with positive norm.
    fn default_sheet(gram: &Matrix) -> Result<LatticeVector, LorentzError> {
        let n = gram.rows();
        let ones = vec![ExactScalar::one(); n];
        let jo = gram.mul_vec(&ones)?;
        let norm: ExactScalar = ones.iter().zip(&jo).map(|(a, b)| a * b).sum();
        if norm.is_positive() {
            return Ok(LatticeVector::new(ones));
        }
        let inv = gram.inverse()?;
        (0..n)
            .find(|&i| inv[(i, i)].is_positive())
            .map(|i| LatticeVector::new(inv.row(i).to_vec()))
            .ok_or(LorentzError::BadSheet)
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn sheet(&self) -> &LatticeVector {
        &self.sheet
    }

    pub fn surd_base(&self) -> u64 {
        self.d
    }

    pub fn check_dim(&self, v: &LatticeVector) -> Result<(), LorentzError> {
        if v.dim() != self.dim() {
            return Err(LorentzError::Dimension {
                expected: self.dim(),
                got: v.dim(),
            });
        }
        Ok(())
    }

    /// `u^T J v`.
    pub fn product(&self, u: &LatticeVector, v: &LatticeVector) -> ExactScalar {
        self.try_product(u, v).expect("vectors of this space")
    }

    pub fn try_product(&self, u: &LatticeVector, v: &LatticeVector) -> Result<ExactScalar, LorentzError> {
        self.check_dim(u)?;
        self.check_dim(v)?;
        let mut acc = ExactScalar::zero();
        for (i, ui) in u.coords().iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            let mut row = ExactScalar::zero();
            for (j, g) in &self.sparse[i] {
                let vj = &v[*j];
                if !vj.is_zero() {
                    row = row.checked_add(&g.checked_mul(vj)?)?;
                }
            }
            if !row.is_zero() {
                acc = acc.checked_add(&ui.checked_mul(&row)?)?;
            }
        }
        Ok(acc)
    }

    pub fn norm(&self, v: &LatticeVector) -> ExactScalar {
        self.product(v, v)
    }

    pub fn norm_class(&self, v: &LatticeVector) -> NormClass {
        match self.norm(v).sign() {
            1 => NormClass::Positive,
            0 => NormClass::Null,
            _ => NormClass::Negative,
        }
    }

    /// Reflection `x - 2 (n.x)/(n.n) n` in the plane with normal `n`.
    pub fn reflect(&self, n: &LatticeVector, x: &LatticeVector) -> Result<LatticeVector, LorentzError> {
        let nn = self.try_product(n, n)?;
        if nn.is_zero() {
            return Err(LorentzError::NullMirror);
        }
        let nx = self.try_product(n, x)?;
        if nx.is_zero() {
            return Ok(x.clone());
        }
        let c = -(ExactScalar::from_integer(2) * nx).checked_div(&nn)?;
        Ok(x.add_scaled(&c, n))
    }

    /// Bertini involution `2((A.x)B + (B.x)A)/(A.B) - x` for null `A`, `B`.
    pub fn bertini(
        &self,
        a: &LatticeVector,
        b: &LatticeVector,
        x: &LatticeVector,
    ) -> Result<LatticeVector, LorentzError> {
        let ab = self.try_product(a, b)?;
        if !self.try_product(a, a)?.is_zero() || !self.try_product(b, b)?.is_zero() || ab.is_zero() {
            return Err(LorentzError::BertiniPrecondition);
        }
        let two = ExactScalar::from_integer(2);
        let ca = (&two * self.try_product(b, x)?).checked_div(&ab)?;
        let cb = (&two * self.try_product(a, x)?).checked_div(&ab)?;
        Ok((-x).add_scaled(&ca, a).add_scaled(&cb, b))
    }

    /// Matrix (acting on coordinate columns) of an arbitrary linear map.
    pub fn matrix_of(
        &self,
        f: impl Fn(&LatticeVector) -> Result<LatticeVector, LorentzError>,
    ) -> Result<Matrix, LorentzError> {
        let n = self.dim();
        let cols = (0..n)
            .map(|j| f(&LatticeVector::unit(n, j)))
            .collect::<Result<Vec<_>, _>>()?;
        let rows = (0..n).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect();
        Ok(Matrix::from_rows(rows)?)
    }

    pub fn reflection_matrix(&self, n: &LatticeVector) -> Result<Matrix, LorentzError> {
        self.matrix_of(|x| self.reflect(n, x))
    }

    /// True iff `M^T J M = J` and `M` maps the sheet to itself.
    pub fn is_isometry(&self, m: &Matrix) -> bool {
        if m.rows() != self.dim() || m.cols() != self.dim() {
            return false;
        }
        let Ok(jm) = self.gram.mul(m) else {
            return false;
        };
        let Ok(mtjm) = m.transpose().mul(&jm) else {
            return false;
        };
        if mtjm != self.gram {
            return false;
        }
        let Ok(md) = m.mul_vec(self.sheet.coords()) else {
            return false;
        };
        self.product(&LatticeVector::new(md), &self.sheet).is_positive()
    }

    pub fn apply(&self, m: &Matrix, v: &LatticeVector) -> Result<LatticeVector, LorentzError> {
        Ok(LatticeVector::new(m.mul_vec(v.coords())?))
    }

    /// Coordinates of `v` in a basis of vectors spanning a subspace that
    /// contains `v`, found from the products with the basis.
    pub fn coordinates_in(&self, basis: &[LatticeVector], v: &LatticeVector) -> Result<LatticeVector, LorentzError> {
        let g = self.gram_of(basis)?;
        let rhs: Vec<ExactScalar> = basis.iter().map(|b| self.product(b, v)).collect();
        let c = g.solve(&rhs)?;
        let back = combine(basis, &c);
        if &back != v {
            return Err(LorentzError::Dimension {
                expected: basis.len(),
                got: v.dim(),
            });
        }
        Ok(LatticeVector::new(c))
    }

    /// Incidence matrix `[v_i . v_j]`.
    pub fn gram_of(&self, vs: &[LatticeVector]) -> Result<Matrix, LorentzError> {
        let rows = vs
            .iter()
            .map(|a| vs.iter().map(|b| self.try_product(a, b)).collect())
            .collect::<Result<Vec<Vec<_>>, _>>()?;
        Ok(Matrix::from_rows(rows)?)
    }
}

/// `sum_i c_i v_i`.
pub fn combine(vs: &[LatticeVector], c: &[ExactScalar]) -> LatticeVector {
    let n = vs.first().map_or(0, LatticeVector::dim);
    vs.iter()
        .zip(c)
        .fold(LatticeVector::zero(n), |acc, (v, ci)| acc.add_scaled(ci, v))
}

/// A group element with its generating word.
#[derive(Clone, Debug)]
pub struct Isometry {
    pub matrix: Matrix,
    pub word: Vec<usize>,
}

impl Isometry {
    /// Product of generator reflections, `word[0]` applied first. The result
    /// is checked to satisfy `M^T J M = J`.
    pub fn from_word(space: &LorentzSpace, generators: &[LatticeVector], word: &[usize]) -> Result<Self, LorentzError> {
        let mut m = Matrix::identity(space.dim());
        for &g in word {
            let r = space.reflection_matrix(&generators[g])?;
            m = r.mul(&m)?;
        }
        if !space.is_isometry(&m) {
            return Err(LorentzError::NotIsometry);
        }
        Ok(Isometry {
            matrix: m,
            word: word.to_vec(),
        })
    }

    pub fn apply(&self, space: &LorentzSpace, v: &LatticeVector) -> Result<LatticeVector, LorentzError> {
        space.apply(&self.matrix, v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn j4() -> LorentzSpace {
        LorentzSpace::new(Matrix::from_integers(&[
            vec![-2, 2, 2, 2],
            vec![2, -2, 2, 2],
            vec![2, 2, -2, 2],
            vec![2, 2, 2, -2],
        ]))
        .unwrap()
    }

    fn v(x: &[i64]) -> LatticeVector {
        LatticeVector::from_integers(x)
    }

    #[test]
    fn apollonian_products() {
        let s = j4();
        assert_eq!(s.norm(&v(&[1, 0, 0, 0])), ExactScalar::from_integer(-2));
        assert_eq!(s.norm(&v(&[1, 1, 1, -1])), ExactScalar::from_integer(-8));
        assert!(s.product(&v(&[0, 0, 0, 0]), &v(&[1, 2, 3, 4])).is_zero());
        assert_eq!(s.norm_class(&v(&[1, 1, 0, 0])), NormClass::Null);
        assert_eq!(s.norm_class(s.sheet()), NormClass::Positive);
    }

    #[test]
    fn reflections() {
        let s = j4();
        let n = v(&[1, 1, 1, -1]);
        assert_eq!(s.reflect(&n, &n).unwrap(), -&n);
        let x = v(&[1, 0, 0, 0]);
        assert_eq!(s.reflect(&n, &x).unwrap(), x);
        assert_eq!(s.reflect(&v(&[1, 1, 0, 0]), &x), Err(LorentzError::NullMirror));
        let m = s.reflection_matrix(&n).unwrap();
        assert!(s.is_isometry(&m));
        assert!(s.is_isometry(&Matrix::identity(4)));
        assert!(!s.is_isometry(&Matrix::identity(4).scale(&ExactScalar::from_integer(2))));
    }

    #[test]
    fn canonical_forms() {
        let x = v(&[4, 2, 4, 6, 8, 6, 4, 2, 0, -2]);
        assert_eq!(x.canonicalize().unwrap(), v(&[2, 1, 2, 3, 4, 3, 2, 1, 0, -1]));
        assert_eq!(LatticeVector::zero(3).canonicalize(), Err(LorentzError::ZeroVector));
        let p = v(&[3, 0, -1]);
        assert_eq!(p.canonicalize().unwrap(), p);
        let neg = v(&[-2, -4]);
        assert_eq!(neg.canonicalize().unwrap(), v(&[-1, -2]));
        let surd: LatticeVector = "[-1,0,-1/2+1/2*sqrt(3)]".parse().unwrap();
        assert_eq!(surd.canonicalize().unwrap().to_string(), "[-2,0,-1/1+1/1*sqrt(3)]");
    }

    #[test]
    fn vector_text() {
        let x: LatticeVector = "[2,1,-1/2,0]".parse().unwrap();
        assert_eq!(x.to_string(), "[2,1,-1/2,0]");
        assert!("2,1".parse::<LatticeVector>().is_err());
        assert!("[]".parse::<LatticeVector>().is_err());
    }

    #[test]
    fn bertini_fixes_its_cusps() {
        let s = j4();
        let a = v(&[1, 1, 0, 0]);
        let b = v(&[0, 0, 1, 1]);
        assert_eq!(s.bertini(&a, &b, &a).unwrap(), a);
        assert_eq!(s.bertini(&a, &b, &b).unwrap(), b);
        let x = v(&[3, -1, 2, 5]);
        let y = s.bertini(&a, &b, &x).unwrap();
        assert_eq!(s.bertini(&a, &b, &y).unwrap(), x);
        assert!(s.bertini(&a, &v(&[1, 0, 0, 0]), &x).is_err());
    }

    #[test]
    fn rejects_wrong_signature() {
        let e8ish = Matrix::from_integers(&[vec![-2, 1], vec![1, -2]]);
        assert!(matches!(
            LorentzSpace::new(e8ish),
            Err(LorentzError::Signature(..)) | Err(LorentzError::BadSheet)
        ));
    }

    #[test]
    fn word_isometries() {
        let s = j4();
        let gens = [
            v(&[1, 1, 1, -1]),
            v(&[0, 0, -1, 1]),
            v(&[0, -1, 1, 0]),
            v(&[-1, 1, 0, 0]),
        ];
        let g = Isometry::from_word(&s, &gens, &[0, 3, 2, 1, 3]).unwrap();
        let x = v(&[1, 0, 0, 0]);
        let mut y = x.clone();
        for &i in &g.word {
            y = s.reflect(&gens[i], &y).unwrap();
        }
        assert_eq!(g.apply(&s, &x).unwrap(), y);
    }
}
