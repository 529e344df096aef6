//! Real scalar abstraction for the coefficient field.

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive, NumAssign};

/// Real scalar type underlying form coefficients (`Complex<S>`) and chain
/// coefficients. Implemented for `f32` and `f64`.
pub trait Scalar:
    Float + FromPrimitive + NumAssign + Debug + Display + Copy + Send + Sync + 'static
{
    /// Lossless embedding of small integers (stencil and sign coefficients).
    fn from_int(v: i64) -> Self {
        Self::from_i64(v).expect("small integer must be representable")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
