//! Exact arithmetic in the quadratic field Q(sqrt(d)).
//!
//! Every lattice computation in this crate runs over [`ExactScalar`]. A value
//! is `a + b*sqrt(d)` with arbitrary-precision rational `a`, `b` and a
//! square-free `d >= 1`. Purely rational values are normalized to `d = 1`, so
//! a rational constant mixes freely with elements of any field; two values
//! with `b != 0` and different `d` cannot be combined.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot combine sqrt({0}) with sqrt({1})")]
    MismatchedSurd(u64, u64),
    #[error("surd base {0} is not square-free")]
    NotSquareFree(u64),
    #[error("cannot parse scalar `{0}`")]
    Parse(String),
}

/// An element `a + b*sqrt(d)` of Q(sqrt(d)), kept in canonical form.
///
/// Equality and hashing are structural on the canonical form, which coincides
/// with numeric equality inside a single field. The derived `Ord` is the
/// structural order on `(a, b, d)`, used for deterministic sorting of lattice
/// vectors; use [`ExactScalar::cmp_value`] for numeric comparison.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExactScalar {
    a: BigRational,
    b: BigRational,
    d: u64,
}

pub fn is_square_free(d: u64) -> bool {
    if d == 0 {
        return false;
    }
    let mut n = d;
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return false;
            }
        }
        p += 1;
    }
    true
}

fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer();
    let m = r.denom();
    let sn = n.sqrt();
    let sm = m.sqrt();
    if &(&sn * &sn) == n && &(&sm * &sm) == m {
        Some(BigRational::new(sn, sm))
    } else {
        None
    }
}

impl ExactScalar {
    pub fn zero() -> Self {
        Self::from_rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Self::from_rational(BigRational::from_integer(n))
    }

    pub fn from_rational(a: BigRational) -> Self {
        ExactScalar {
            a,
            b: BigRational::zero(),
            d: 1,
        }
    }

    pub fn ratio(p: i64, q: i64) -> Self {
        Self::from_rational(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    /// Builds `a + b*sqrt(d)`. For `d = 1` the surd part folds into `a`.
    pub fn new(a: BigRational, b: BigRational, d: u64) -> Result<Self, ScalarError> {
        if !is_square_free(d) {
            return Err(ScalarError::NotSquareFree(d));
        }
        if d == 1 {
            return Ok(Self::from_rational(a + b));
        }
        Ok(Self::canonical(a, b, d))
    }

    /// `sqrt(d)` itself.
    pub fn surd(d: u64) -> Result<Self, ScalarError> {
        Self::new(BigRational::zero(), BigRational::one(), d)
    }

    fn canonical(a: BigRational, b: BigRational, d: u64) -> Self {
        if b.is_zero() {
            ExactScalar { a, b, d: 1 }
        } else {
            ExactScalar { a, b, d }
        }
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    pub fn surd_part(&self) -> &BigRational {
        &self.b
    }

    /// Surd base; 1 for rational values.
    pub fn surd_base(&self) -> u64 {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.b.is_zero() && self.a.is_integer()
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        self.is_rational().then_some(&self.a)
    }

    fn merge_base(&self, other: &Self) -> Result<u64, ScalarError> {
        match (self.d, other.d) {
            (1, d) | (d, 1) => Ok(d),
            (x, y) if x == y => Ok(x),
            (x, y) => Err(ScalarError::MismatchedSurd(x, y)),
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, ScalarError> {
        let d = self.merge_base(other)?;
        Ok(Self::canonical(&self.a + &other.a, &self.b + &other.b, d))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, ScalarError> {
        let d = self.merge_base(other)?;
        Ok(Self::canonical(&self.a - &other.a, &self.b - &other.b, d))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, ScalarError> {
        let d = self.merge_base(other)?;
        if self.b.is_zero() && other.b.is_zero() {
            return Ok(Self::from_rational(&self.a * &other.a));
        }
        let dd = BigRational::from_integer(BigInt::from(d));
        let a = &self.a * &other.a + &self.b * &other.b * dd;
        let b = &self.a * &other.b + &self.b * &other.a;
        Ok(Self::canonical(a, b, d))
    }

    /// Field norm `a^2 - d b^2`, zero only for zero.
    pub fn field_norm(&self) -> BigRational {
        let dd = BigRational::from_integer(BigInt::from(self.d));
        &self.a * &self.a - &self.b * &self.b * dd
    }

    pub fn conjugate(&self) -> Self {
        Self::canonical(self.a.clone(), -self.b.clone(), self.d)
    }

    pub fn checked_inv(&self) -> Result<Self, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        if self.b.is_zero() {
            return Ok(Self::from_rational(self.a.recip()));
        }
        let n = self.field_norm();
        Ok(Self::canonical(&self.a / &n, -(&self.b / &n), self.d))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, ScalarError> {
        self.checked_mul(&other.checked_inv()?)
    }

    /// Division that panics on a zero divisor or mismatched fields.
    pub fn div(&self, other: &Self) -> Self {
        self.checked_div(other).expect("exact division")
    }

    pub fn scale_rational(&self, r: &BigRational) -> Self {
        Self::canonical(&self.a * r, &self.b * r, self.d)
    }

    /// Exact sign of `a + b*sqrt(d)`.
    pub fn sign(&self) -> i32 {
        let sa = signum(&self.a);
        let sb = signum(&self.b);
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return sb;
        }
        // Opposite signs: compare a^2 with b^2 d.
        match self.field_norm().cmp(&BigRational::zero()) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0,
        }
    }

    pub fn is_positive(&self) -> bool {
        self.sign() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.sign() < 0
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// Numeric comparison; both values must live in compatible fields.
    pub fn cmp_value(&self, other: &Self) -> Ordering {
        match self.checked_sub(other).expect("comparable scalars").sign() {
            -1 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        }
    }

    pub fn to_f64(&self) -> f64 {
        let a = rat_to_f64(&self.a);
        if self.b.is_zero() {
            return a;
        }
        let b = rat_to_f64(&self.b);
        let s = (self.d as f64).sqrt();
        if signum(&self.a) * signum(&self.b) < 0 {
            // a + b sqrt(d) = (a^2 - b^2 d) / (a - b sqrt(d)) avoids cancellation
            rat_to_f64(&self.field_norm()) / (a - b * s)
        } else {
            a + b * s
        }
    }

    /// Exact square root inside Q(sqrt(d)) when one exists, taking the
    /// non-negative root. `d` selects the field for rational inputs.
    pub fn sqrt_in(&self, d: u64) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        if self.b.is_zero() {
            if let Some(r) = rational_sqrt(&self.a) {
                return Some(Self::from_rational(r));
            }
            if d > 1 {
                let dd = BigRational::from_integer(BigInt::from(d));
                if let Some(r) = rational_sqrt(&(&self.a / &dd)) {
                    return Some(Self::canonical(BigRational::zero(), r, d));
                }
            }
            return None;
        }
        if d != self.d && d != 1 {
            return None;
        }
        // (u + v sqrt(d))^2 = a + b sqrt(d): u^2 + d v^2 = a, 2uv = b.
        let t = rational_sqrt(&self.field_norm())?;
        let two = BigRational::from_integer(BigInt::from(2));
        for cand in [(&self.a + &t) / &two, (&self.a - &t) / &two] {
            if cand.is_zero() {
                continue;
            }
            if let Some(u) = rational_sqrt(&cand) {
                let v = &self.b / (&two * &u);
                let root = Self::canonical(u, v, self.d);
                if &(&root * &root) == self {
                    return Some(if root.is_negative() { -root } else { root });
                }
            }
        }
        None
    }

    /// Parses the text form `p/q` or `p/q+r/s*sqrt(D)`; integer shorthand is
    /// accepted for every rational, as are bare surd terms such as `sqrt(3)`.
    pub fn parse(s: &str) -> Result<Self, ScalarError> {
        let s = s.trim();
        let err = || ScalarError::Parse(s.to_string());
        if s.is_empty() {
            return Err(err());
        }
        if !s.contains("sqrt(") {
            return parse_rational(s).map(Self::from_rational).ok_or_else(err);
        }
        let split = s
            .char_indices()
            .skip(1)
            .find(|&(_, c)| c == '+' || c == '-')
            .map(|(i, _)| i);
        let (rat, surd) = match split {
            Some(i) if !s[..i].contains("sqrt(") => (&s[..i], &s[i..]),
            _ => ("0", s),
        };
        let a = parse_rational(rat).ok_or_else(err)?;
        let (b, d) = parse_surd_term(surd).ok_or_else(err)?;
        Self::new(a, b, d)
    }
}

fn parse_rational(s: &str) -> Option<BigRational> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let num = num.strip_prefix('+').unwrap_or(num);
    if num.is_empty() || den.is_empty() || den.starts_with(['+', '-']) {
        return None;
    }
    let n: BigInt = num.parse().ok()?;
    let d: BigInt = den.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(BigRational::new(n, d))
}

fn parse_surd_term(s: &str) -> Option<(BigRational, u64)> {
    let (sign, rest) = match s.as_bytes().first()? {
        b'+' => (1, &s[1..]),
        b'-' => (-1, &s[1..]),
        _ => (1, s),
    };
    let (coef, root) = match rest.split_once('*') {
        Some((c, r)) => (parse_rational(c)?, r),
        None => (BigRational::one(), rest),
    };
    let inner = root.strip_prefix("sqrt(")?.strip_suffix(')')?;
    let d: u64 = inner.parse().ok()?;
    let coef = if sign < 0 { -coef } else { coef };
    Some((coef, d))
}

fn signum(r: &BigRational) -> i32 {
    match r.numer().sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

fn rat_to_f64(r: &BigRational) -> f64 {
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    // Huge operands: shift both down to keep the quotient representable.
    let nb = r.numer().bits() as i64;
    let db = r.denom().bits() as i64;
    let shift_n = (nb - 60).max(0) as u64;
    let shift_d = (db - 60).max(0) as u64;
    let n = (r.numer() >> shift_n).to_f64().unwrap_or(0.0);
    let d = (r.denom() >> shift_d).to_f64().unwrap_or(1.0);
    n / d * 2f64.powi((shift_n as i64 - shift_d as i64) as i32)
}

fn write_rational(f: &mut fmt::Formatter<'_>, r: &BigRational) -> fmt::Result {
    write!(f, "{}/{}", r.numer(), r.denom())
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_rational(f, &self.a)?;
        if !self.b.is_zero() {
            if self.b.is_positive() {
                f.write_str("+")?;
            }
            write_rational(f, &self.b)?;
            write!(f, "*sqrt({})", self.d)?;
        }
        Ok(())
    }
}

impl fmt::Debug for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for ExactScalar {
    type Err = ScalarError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s)
    }
}

impl From<i64> for ExactScalar {
    fn from(n: i64) -> Self {
        Self::from_integer(n)
    }
}

impl From<BigRational> for ExactScalar {
    fn from(r: BigRational) -> Self {
        Self::from_rational(r)
    }
}

impl Default for ExactScalar {
    fn default() -> Self {
        Self::zero()
    }
}

// Operator impls panic on mixed surd bases; a LorentzSpace never mixes them.
macro_rules! binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&ExactScalar> for &ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: &ExactScalar) -> ExactScalar {
                self.$checked(rhs).expect("scalars from one field")
            }
        }
        impl $tr<ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: ExactScalar) -> ExactScalar {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: &ExactScalar) -> ExactScalar {
                (&self).$method(rhs)
            }
        }
        impl $tr<ExactScalar> for &ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: ExactScalar) -> ExactScalar {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl Neg for &ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar::canonical(-self.a.clone(), -self.b.clone(), self.d)
    }
}

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar::canonical(-self.a, -self.b, self.d)
    }
}

impl std::iter::Sum for ExactScalar {
    fn sum<I: Iterator<Item = ExactScalar>>(iter: I) -> Self {
        iter.fold(ExactScalar::zero(), |acc, x| acc + x)
    }
}

/// Greatest common divisor helper shared by canonicalization code.
pub(crate) fn gcd_all<'a>(it: impl Iterator<Item = &'a BigInt>) -> BigInt {
    it.fold(BigInt::zero(), |g, x| g.gcd(x))
}
