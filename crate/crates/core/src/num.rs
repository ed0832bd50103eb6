use std::ops::{Add, Mul, Sub};

use num_bigint::BigUint;
use num_traits::{One, Zero};

/// Scalar a configuration count can be accumulated in.
///
/// Counting only ever adds, multiplies, and subtracts a smaller value from a
/// larger one, so any unsigned integer, float, or big integer works. Pick
/// [`BigUint`](crate::ConfigCount) for exact results on wide models, `u64`
/// when the model is known to be small, `f64` for a magnitude estimate.
pub trait Tally:
    Clone + Zero + One + Add<Output = Self> + Mul<Output = Self> + Sub<Output = Self> + PartialEq
{
}

impl<T> Tally for T where
    T: Clone + Zero + One + Add<Output = T> + Mul<Output = T> + Sub<Output = T> + PartialEq
{
}

pub(crate) fn from_bool<N: Tally>(b: bool) -> N {
    if b {
        N::one()
    } else {
        N::zero()
    }
}

/// Lossy conversion used by callers that want a plain number out of an
/// exact count.
pub fn count_to_f64(count: &BigUint) -> f64 {
    num_traits::ToPrimitive::to_f64(count).unwrap_or(f64::INFINITY)
}
