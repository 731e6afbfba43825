//! Model parameters: the physical couplings, the exact bond weights B, C,
//! D = 1 - C, and the derived skein parameters used by the diagram algebra.

use crate::qf::QfScalar;
use crate::tlb::LoopWeights;
use num_rational::BigRational;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("f must be a positive integer")]
    InvalidStateCount,
    #[error("boundary weight C must be nonzero (beta0 = D/(C c) is undefined otherwise)")]
    ZeroBoundaryWeight,
    #[error("gauge parameter must be nonzero")]
    ZeroGauge,
    #[error("kT must be positive (got {0})")]
    NonpositiveTemperature(f64),
}

/// Raw physical couplings; only used by the floating-point conversion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    /// Product of the Boltzmann constant and the temperature.
    pub kt: f64,
    /// Boundary coupling strength.
    pub kappa: f64,
}

/// Float-valued bond weights derived from physical couplings, for
/// exploration only; the exact pipeline takes rational B and C directly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FloatWeights {
    /// B = exp(-1/kT) - 1, always in (-1, 0).
    pub b: f64,
    /// C = exp(-kappa/kT), always positive.
    pub c: f64,
    /// D = 1 - C.
    pub d: f64,
}

pub fn physical_to_model(p: &PhysicalParams) -> Result<FloatWeights, ModelError> {
    if !(p.kt > 0.0) {
        return Err(ModelError::NonpositiveTemperature(p.kt));
    }
    let b = (-1.0 / p.kt).exp() - 1.0;
    let c = (-p.kappa / p.kt).exp();
    Ok(FloatWeights { b, c, d: 1.0 - c })
}

/// All exact parameters of one model instance.
///
/// Invariants maintained by `make_model`: `one_minus_c = 1 - c`, `alpha`
/// and `alpha0` are 1, `beta = b / sqrt(f)`, `beta0 = (1-c)/(c * c_loop)`
/// where `c_loop = gauge * sqrt(f)` and `c_prime = gauge`. The gauge only
/// fixes the ratio `c_loop = c_prime * sqrt(f)`; downstream results are
/// independent of it.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    f: u64,
    b: QfScalar,
    c: QfScalar,
    one_minus_c: QfScalar,
    weights: LoopWeights,
    alpha: QfScalar,
    beta: QfScalar,
    alpha0: QfScalar,
    beta0: QfScalar,
}

pub fn make_model(
    f: u64,
    b: BigRational,
    c: BigRational,
    c_gauge: BigRational,
) -> Result<ModelParams, ModelError> {
    use num_traits::Zero;
    if f == 0 {
        return Err(ModelError::InvalidStateCount);
    }
    if c.is_zero() {
        return Err(ModelError::ZeroBoundaryWeight);
    }
    if c_gauge.is_zero() {
        return Err(ModelError::ZeroGauge);
    }
    let b = QfScalar::from_rational(b, f);
    let c = QfScalar::from_rational(c, f);
    let one_minus_c = &QfScalar::one(f) - &c;
    let d = QfScalar::sqrt_f(f);
    let c_prime = QfScalar::from_rational(c_gauge, f);
    let c_loop = &c_prime * &d;
    let alpha = QfScalar::one(f);
    let alpha0 = QfScalar::one(f);
    let beta = &b * &d.inv();
    let beta0 = &(&one_minus_c * &c.inv()) * &c_loop.inv();
    let weights =
        LoopWeights::new(d, c_loop, c_prime).expect("sqrt(f) is nonzero for positive f");
    Ok(ModelParams {
        f,
        b,
        c,
        one_minus_c,
        weights,
        alpha,
        beta,
        alpha0,
        beta0,
    })
}

impl ModelParams {
    /// States per spin.
    pub fn f(&self) -> u64 {
        self.f
    }

    pub fn f_scalar(&self) -> QfScalar {
        QfScalar::from_integer(self.f as i64, self.f)
    }

    /// Inner-bond weight B.
    pub fn b(&self) -> &QfScalar {
        &self.b
    }

    /// Boundary-bond weight C.
    pub fn c(&self) -> &QfScalar {
        &self.c
    }

    /// D = 1 - C.
    pub fn one_minus_c(&self) -> &QfScalar {
        &self.one_minus_c
    }

    pub fn one_plus_b(&self) -> QfScalar {
        &QfScalar::one(self.f) + &self.b
    }

    /// sqrt(f), the weight of a plain closed loop.
    pub fn d(&self) -> &QfScalar {
        self.weights.d()
    }

    /// Loop weight c = c' * sqrt(f) of a blobbed closure loop.
    pub fn c_loop(&self) -> &QfScalar {
        self.weights.c()
    }

    /// Loop weight c' of a blobbed internal loop.
    pub fn c_prime(&self) -> &QfScalar {
        self.weights.c_prime()
    }

    pub fn loop_weights(&self) -> &LoopWeights {
        &self.weights
    }

    pub fn alpha(&self) -> &QfScalar {
        &self.alpha
    }

    pub fn beta(&self) -> &QfScalar {
        &self.beta
    }

    pub fn alpha0(&self) -> &QfScalar {
        &self.alpha0
    }

    pub fn beta0(&self) -> &QfScalar {
        &self.beta0
    }

    /// Replaces beta, leaving everything else untouched. Exists for the
    /// negative-control path of the verification suite.
    pub fn with_beta(mut self, beta: QfScalar) -> Self {
        self.beta = beta;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_traits::{One, Zero};

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn qf(a: (i64, i64), b: (i64, i64), f: u64) -> QfScalar {
        QfScalar::new(rat(a.0, a.1), rat(b.0, b.1), f)
    }

    #[test]
    fn standard_point_derived_values() {
        // f=2, B=-1/2, C=1/3, gauge 1: d = sqrt2, c = sqrt2, c' = 1,
        // beta = -(1/4) sqrt2, beta0 = 2/c = sqrt2.
        let m = make_model(2, rat(-1, 2), rat(1, 3), BigRational::one()).unwrap();
        assert_eq!(m.d(), &QfScalar::sqrt_f(2));
        assert_eq!(m.c_loop(), &QfScalar::sqrt_f(2));
        assert_eq!(m.c_prime(), &QfScalar::one(2));
        assert_eq!(m.beta(), &qf((0, 1), (-1, 4), 2));
        assert_eq!(m.beta0(), &qf((0, 1), (1, 1), 2));
        assert_eq!(m.alpha(), &QfScalar::one(2));
        assert_eq!(m.alpha0(), &QfScalar::one(2));
    }

    #[test]
    fn perfect_square_f_gives_rational_d() {
        let m = make_model(4, rat(1, 2), rat(1, 3), BigRational::one()).unwrap();
        assert_eq!(m.d(), &QfScalar::from_integer(2, 4));
        assert!(m.d().radical_part().is_zero());
    }

    #[test]
    fn zero_c_is_rejected() {
        let err = make_model(2, rat(1, 2), rat(0, 1), BigRational::one()).unwrap_err();
        assert_eq!(err, ModelError::ZeroBoundaryWeight);
    }

    #[test]
    fn complement_and_gauge_identities() {
        let m = make_model(3, rat(-1, 3), rat(2, 7), rat(5, 2)).unwrap();
        // D + C = 1
        assert!((&(m.one_minus_c() + m.c()) - &QfScalar::one(3)).is_zero());
        // c * d^{-1} = c'
        assert_eq!(&(m.c_loop() * &m.d().inv()), m.c_prime());
    }

    #[test]
    fn float_conversion() {
        // kT = 1, kappa = 1
        let w = physical_to_model(&PhysicalParams { kt: 1.0, kappa: 1.0 }).unwrap();
        assert!((w.b - (-0.6321205588285577)).abs() < 1e-15);
        assert!((w.c - 0.36787944117144233).abs() < 1e-15);
        // kappa = 0 gives C = 1
        let w0 = physical_to_model(&PhysicalParams { kt: 2.0, kappa: 0.0 }).unwrap();
        assert_eq!(w0.c, 1.0);
        // very large kT drives B toward 0
        let whot = physical_to_model(&PhysicalParams {
            kt: 1e12,
            kappa: 0.0,
        })
        .unwrap();
        assert!(whot.b.abs() < 1e-11);
        assert!(physical_to_model(&PhysicalParams { kt: 0.0, kappa: 1.0 }).is_err());
    }
}
