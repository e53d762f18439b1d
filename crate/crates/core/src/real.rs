//! Floating-point precision abstraction.
//!
//! Every algorithm in this crate is generic over [`Real`], which is
//! implemented for `f32` and `f64`. Running a pipeline with `f32` performs
//! every accumulation, factorization and solve in single precision.

use std::fmt;

use nalgebra::RealField;

/// Runtime tag for the two supported precisions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Precision {
    F32,
    #[default]
    F64,
}

impl fmt::Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Precision::F32 => f.write_str("f32"),
            Precision::F64 => f.write_str("f64"),
        }
    }
}

impl std::str::FromStr for Precision {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "f32" => Ok(Precision::F32),
            "f64" => Ok(Precision::F64),
            other => Err(format!("unknown precision `{other}` (expected f32 or f64)")),
        }
    }
}

pub trait Real: RealField + Copy + Default + fmt::Debug + fmt::Display + Send + Sync + 'static {
    const PRECISION: Precision;

    /// Machine epsilon.
    const EPS: Self;

    fn cast(v: f64) -> Self;

    fn as_f64(self) -> f64;

    /// Relative threshold under which a Caratheodory weight is treated as zero.
    fn weight_floor() -> Self;

    /// Largest condition number a least-squares design may have before it is
    /// reported as rank deficient.
    fn max_condition() -> f64;

    fn is_finite_value(self) -> bool {
        self.as_f64().is_finite()
    }
}

impl Real for f64 {
    const PRECISION: Precision = Precision::F64;
    const EPS: f64 = f64::EPSILON;

    #[inline]
    fn cast(v: f64) -> Self {
        v
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self
    }

    fn weight_floor() -> Self {
        1e-14
    }

    fn max_condition() -> f64 {
        1e12
    }
}

impl Real for f32 {
    const PRECISION: Precision = Precision::F32;
    const EPS: f32 = f32::EPSILON;

    #[inline]
    fn cast(v: f64) -> Self {
        v as f32
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self as f64
    }

    fn weight_floor() -> Self {
        // 1e-14 is below f32 resolution; scale the floor to the format.
        10.0 * f32::EPSILON
    }

    fn max_condition() -> f64 {
        1e6
    }
}
