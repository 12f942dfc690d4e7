//! Probability scalar abstraction.
//!
//! The transition-graph machinery runs over any scalar implementing [`Prob`]:
//! `BigRational` for exact stationarity and conductance arguments, `f64` for
//! long distribution evolutions where exact denominators would blow up.

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

/// Numeric type usable as a transition probability.
pub trait Prob: Clone + PartialOrd + Signed {
    /// The exact value `num / den`.
    fn from_ratio(num: u64, den: u64) -> Self;

    /// Lossy view for report output.
    fn to_f64_lossy(&self) -> f64;
}

impl Prob for f64 {
    fn from_ratio(num: u64, den: u64) -> Self {
        num as f64 / den as f64
    }

    fn to_f64_lossy(&self) -> f64 {
        *self
    }
}

impl Prob for BigRational {
    fn from_ratio(num: u64, den: u64) -> Self {
        BigRational::new(num.into(), den.into())
    }

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}
