//! Exact arithmetic in the quadratic extension Q(sqrt(f)).
//!
//! Every scalar is `a + b*sqrt(f)` with arbitrary-precision rational `a`, `b`
//! and a shared positive integer `f`. All scalars combined inside one
//! computation must carry the same `f`; mixing rings is an error. When `f` is
//! a perfect square the root is rational and the radical part is folded into
//! the rational part, so equality of scalars is plain structural equality of
//! their canonical forms.

use num_bigint::BigInt;
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoeffError {
    #[error("ring mismatch: left scalar lives in Q(sqrt({left})), right in Q(sqrt({right}))")]
    RingMismatch { left: u64, right: u64 },
    #[error("division by zero in Q(sqrt({f}))")]
    DivisionByZero { f: u64 },
    #[error("cannot parse {input:?} as a scalar in Q(sqrt({f}))")]
    Parse { input: String, f: u64 },
}

/// Returns `r` with `r*r == f` when `f` is a perfect square.
fn exact_sqrt(f: u64) -> Option<u64> {
    let r = f.sqrt();
    (r * r == f).then_some(r)
}

/// An element `a + b*sqrt(f)` of Q(sqrt(f)), kept in canonical form:
/// zero is (0, 0), and for perfect-square `f` the radical part is zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QfScalar {
    a: BigRational,
    b: BigRational,
    f: u64,
}

impl QfScalar {
    pub fn new(a: BigRational, b: BigRational, f: u64) -> Self {
        assert!(f >= 1, "ring parameter f must be a positive integer");
        let mut s = QfScalar { a, b, f };
        if let Some(r) = exact_sqrt(f) {
            if !s.b.is_zero() {
                s.a += &s.b * BigRational::from_integer(BigInt::from(r));
                s.b = BigRational::zero();
            }
        }
        s
    }

    pub fn zero(f: u64) -> Self {
        Self::new(BigRational::zero(), BigRational::zero(), f)
    }

    pub fn one(f: u64) -> Self {
        Self::new(BigRational::one(), BigRational::zero(), f)
    }

    pub fn from_integer(n: i64, f: u64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)), f)
    }

    pub fn from_rational(r: BigRational, f: u64) -> Self {
        Self::new(r, BigRational::zero(), f)
    }

    /// The element `sqrt(f)` itself (collapses to an integer for square `f`).
    pub fn sqrt_f(f: u64) -> Self {
        Self::new(BigRational::zero(), BigRational::one(), f)
    }

    pub fn f(&self) -> u64 {
        self.f
    }

    /// Coefficient of 1.
    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    /// Coefficient of sqrt(f); zero whenever `f` is a perfect square.
    pub fn radical_part(&self) -> &BigRational {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    fn check_ring(&self, other: &Self) -> Result<(), CoeffError> {
        if self.f == other.f {
            Ok(())
        } else {
            Err(CoeffError::RingMismatch {
                left: self.f,
                right: other.f,
            })
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, CoeffError> {
        self.check_ring(other)?;
        Ok(Self::new(&self.a + &other.a, &self.b + &other.b, self.f))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, CoeffError> {
        self.check_ring(other)?;
        Ok(Self::new(&self.a - &other.a, &self.b - &other.b, self.f))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, CoeffError> {
        self.check_ring(other)?;
        let f = BigRational::from_integer(BigInt::from(self.f));
        let a = &self.a * &other.a + &self.b * &other.b * &f;
        let b = &self.a * &other.b + &self.b * &other.a;
        Ok(Self::new(a, b, self.f))
    }

    /// Multiplicative inverse `(a - b*sqrt(f)) / (a^2 - b^2 f)`.
    ///
    /// In canonical form the norm vanishes only for the zero element: for
    /// non-square `f` a rational relation `a^2 = b^2 f` would make sqrt(f)
    /// rational, and for square `f` the radical part is already folded away.
    pub fn checked_inv(&self) -> Result<Self, CoeffError> {
        if self.is_zero() {
            return Err(CoeffError::DivisionByZero { f: self.f });
        }
        let f = BigRational::from_integer(BigInt::from(self.f));
        let norm = &self.a * &self.a - &self.b * &self.b * &f;
        if norm.is_zero() {
            return Err(CoeffError::DivisionByZero { f: self.f });
        }
        Ok(Self::new(&self.a / &norm, -&self.b / &norm, self.f))
    }

    pub fn inv(&self) -> Self {
        self.checked_inv().unwrap_or_else(|e| panic!("{e}"))
    }

    pub fn pow(&self, mut exp: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.f);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            exp >>= 1;
        }
        acc
    }

    pub fn pow_i(&self, exp: i64) -> Result<Self, CoeffError> {
        if exp >= 0 {
            Ok(self.pow(exp as u64))
        } else {
            Ok(self.checked_inv()?.pow(exp.unsigned_abs()))
        }
    }

    /// Double-precision evaluation of `a + b*sqrt(f)`.
    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        a + b * (self.f as f64).sqrt()
    }

    /// Exact sign test, `a + b*sqrt(f) > 0`.
    pub fn is_positive(&self) -> bool {
        match (self.a.is_negative(), self.b.is_negative()) {
            _ if self.b.is_zero() => self.a.is_positive(),
            _ if self.a.is_zero() => self.b.is_positive(),
            (false, false) => true,
            (true, true) => false,
            (neg_a, _) => {
                // one positive, one negative: compare a^2 against b^2 f
                let f = BigRational::from_integer(BigInt::from(self.f));
                let lhs = &self.a * &self.a;
                let rhs = &self.b * &self.b * &f;
                if neg_a {
                    // b*sqrt(f) > -a > 0
                    rhs > lhs
                } else {
                    // a > -b*sqrt(f) > 0
                    lhs > rhs
                }
            }
        }
    }

    /// Parses the rendering produced by `Display`, given the ring parameter.
    /// Accepted forms: "p/q", "p", "r/s*sqrt(F)", "p/q + r/s*sqrt(F)",
    /// "p/q - r/s*sqrt(F)" (with `F == f`).
    pub fn parse(input: &str, f: u64) -> Result<Self, CoeffError> {
        let err = || CoeffError::Parse {
            input: input.to_string(),
            f,
        };
        let s = input.trim();
        let Some(head) = s.strip_suffix(&format!("*sqrt({f})")) else {
            let r = parse_rational(s).ok_or_else(err)?;
            return Ok(Self::from_rational(r, f));
        };
        let (a_str, b_str, negate_b) = if let Some(i) = head.rfind(" + ") {
            (&head[..i], &head[i + 3..], false)
        } else if let Some(i) = head.rfind(" - ") {
            (&head[..i], &head[i + 3..], true)
        } else {
            ("0", head, false)
        };
        let a = parse_rational(a_str).ok_or_else(err)?;
        let mut b = parse_rational(b_str).ok_or_else(err)?;
        if negate_b {
            b = -b;
        }
        Ok(Self::new(a, b, f))
    }
}

/// Parses "p/q" or "p" into an exact rational; rejects zero denominators.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((num, den)) => {
            let num: BigInt = num.trim().parse().ok()?;
            let den: BigInt = den.trim().parse().ok()?;
            if den.is_zero() {
                return None;
            }
            Some(BigRational::new(num, den))
        }
        None => {
            let num: BigInt = s.parse().ok()?;
            Some(BigRational::from_integer(num))
        }
    }
}

impl fmt::Display for QfScalar {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(out, "{}", self.a);
        }
        if self.a.is_zero() {
            return write!(out, "{}*sqrt({})", self.b, self.f);
        }
        if self.b.is_negative() {
            write!(out, "{} - {}*sqrt({})", self.a, -&self.b, self.f)
        } else {
            write!(out, "{} + {}*sqrt({})", self.a, self.b, self.f)
        }
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait for &QfScalar {
            type Output = QfScalar;
            fn $method(self, rhs: &QfScalar) -> QfScalar {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $trait for QfScalar {
            type Output = QfScalar;
            fn $method(self, rhs: QfScalar) -> QfScalar {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for &QfScalar {
    type Output = QfScalar;
    fn neg(self) -> QfScalar {
        QfScalar::new(-&self.a, -&self.b, self.f)
    }
}

impl Neg for QfScalar {
    type Output = QfScalar;
    fn neg(self) -> QfScalar {
        -&self
    }
}
