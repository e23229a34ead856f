//! Scalar abstraction for the closed-form computations.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating-point scalar the bound formulas are evaluated in: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal or constant into `Self`.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64 is representable")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// `log2(1 + x)`, accurate for small `x`.
pub(crate) fn log2_1p<T: Real>(x: T) -> T {
    x.ln_1p() / T::LN_2()
}

/// `|a - b| / |b|`, falling back to the absolute difference when `b == 0`.
pub fn rel_diff<T: Real>(a: T, b: T) -> T {
    let d = (a - b).abs();
    if b == T::zero() {
        d
    } else {
        d / b.abs()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log2_1p_small_argument() {
        let x = 1e-18_f64;
        assert!((log2_1p(x) - x / std::f64::consts::LN_2).abs() < 1e-30);
        assert_eq!(log2_1p(1.0_f64), 1.0);
        assert_eq!(log2_1p(3.0_f32), 2.0);
    }

    #[test]
    fn rel_diff_zero_reference() {
        assert_eq!(rel_diff(0.5_f64, 0.0), 0.5);
        assert_eq!(rel_diff(1.5_f64, 1.0), 0.5);
    }
}
