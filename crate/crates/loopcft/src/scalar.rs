//! Scalar abstraction shared by the exact and floating computation paths.

use num::BigRational;
use num_traits::{One, Zero};
use std::fmt::Debug;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

/// Ring scalar for loop-model weight bookkeeping.
///
/// Implemented by `f64` (fast sweeps) and [`BigRational`] (exact oracle
/// runs). Everything a transfer matrix or a partition-sum enumeration
/// needs is plain ring arithmetic, so both backends share one code path.
pub trait LoopScalar:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + Send
    + Sync
    + 'static
{
    /// Lossy view used only for diagnostics and convergence checks.
    fn to_f64(&self) -> f64;
}

impl LoopScalar for f64 {
    fn to_f64(&self) -> f64 {
        *self
    }
}

impl LoopScalar for BigRational {
    fn to_f64(&self) -> f64 {
        num_traits::ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}
