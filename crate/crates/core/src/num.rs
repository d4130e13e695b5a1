//! Scalar traits shared by the numeric modules.

use std::fmt::{Debug, Display};

use num_rational::Ratio;
use num_traits::{Float, FromPrimitive, Num, ToPrimitive};

/// Floating point scalar used by similarity, layout and export: `f32` or `f64`.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Lossy conversion from a literal. Panics only if `Self` cannot hold a
    /// finite `f64`, which never happens for `f32`/`f64`.
    fn lit(value: f64) -> Self {
        Self::from_f64(value).expect("finite literal")
    }

    fn from_count(count: u64) -> Self {
        Self::from_u64(count).expect("count representable")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Number type a citation share can be carried in.
///
/// Implemented for the floats and for exact integer ratios, so share
/// conservation can be checked without rounding.
pub trait Share: Num + PartialOrd + Clone + Debug + Send + Sync + 'static {
    fn from_count(count: u64) -> Self;
    fn to_f64_lossy(&self) -> f64;
}

impl Share for f64 {
    fn from_count(count: u64) -> Self {
        count as f64
    }
    fn to_f64_lossy(&self) -> f64 {
        *self
    }
}

impl Share for f32 {
    fn from_count(count: u64) -> Self {
        count as f32
    }
    fn to_f64_lossy(&self) -> f64 {
        f64::from(*self)
    }
}

macro_rules! ratio_share {
    ($($int:ty),*) => {$(
        impl Share for Ratio<$int> {
            fn from_count(count: u64) -> Self {
                Ratio::from_integer(<$int>::try_from(count).expect("count fits ratio integer"))
            }
            fn to_f64_lossy(&self) -> f64 {
                self.to_f64().unwrap_or(f64::NAN)
            }
        }
    )*};
}

ratio_share!(i64, i128, u64, u128);

/// Integer percentage of `part / whole`, rounded half-up. Zero when `whole` is 0.
pub fn percent_half_up(part: u64, whole: u64) -> u64 {
    if whole == 0 {
        return 0;
    }
    let (part, whole) = (u128::from(part), u128::from(whole));
    ((200 * part + whole) / (2 * whole)) as u64
}

/// Half-up integer percentage of a share already expressed as a fraction.
pub fn share_percent_half_up<T: Share>(share: &T) -> u64 {
    let scaled = share.to_f64_lossy() * 100.0;
    // Snap values within a few ulps of a .5 boundary so float drift cannot
    // flip the rounding direction of an exact half.
    let nudged = scaled + 1e-9;
    nudged.floor().max(0.0) as u64 + u64::from(nudged.fract() >= 0.5)
}
