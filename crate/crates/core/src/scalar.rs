//! Floating-point scalar abstraction.
//!
//! Everything numeric in this crate is generic over [`Real`], a thin alias
//! over the `num-traits` float stack. `f32` and `f64` both satisfy it; the
//! crate root exports `f64` aliases of the main types for callers that do
//! not care about genericity.

use num_traits::{Float, FromPrimitive, NumAssignOps};

/// Scalar type for all recurrence, pencil and quadrature arithmetic.
///
/// A blanket impl covers every type with the listed bounds, so downstream
/// code never has to implement this by hand.
pub trait Real: Float + FromPrimitive + NumAssignOps + std::fmt::Debug + 'static {
    /// Converts an exact `f64` constant (tolerances, node tables, rational
    /// literals) into `Self`.
    #[inline]
    fn of(v: f64) -> Self {
        Self::from_f64(v).expect("constant representable in scalar type")
    }

    /// Converts a count or index into `Self`.
    #[inline]
    fn of_usize(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar type")
    }
}

impl<T> Real for T where T: Float + FromPrimitive + NumAssignOps + std::fmt::Debug + 'static {}
