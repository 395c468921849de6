//! Scalar abstraction shared by the numeric kernels (linear algebra, PTDF, LP).

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive, NumAssign};

/// Floating point type the solvers can run on: `f32` or `f64`.
///
/// Each implementation carries the tolerances its precision supports. The
/// `f64` values are the ones every golden test is pinned against.
pub trait Real:
    Float + FromPrimitive + NumAssign + Debug + Display + Default + Send + Sync + 'static
{
    /// Primal feasibility tolerance.
    fn feasibility_tol() -> Self;
    /// Reduced-cost optimality tolerance.
    fn optimality_tol() -> Self;
    /// Smallest pivot magnitude accepted by eliminations and ratio tests.
    fn pivot_tol() -> Self;

    /// Lossy conversion from an `f64` literal or data value.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 is representable in every Real")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    fn feasibility_tol() -> Self {
        1e-7
    }
    fn optimality_tol() -> Self {
        1e-9
    }
    fn pivot_tol() -> Self {
        1e-10
    }
}

impl Real for f32 {
    fn feasibility_tol() -> Self {
        1e-3
    }
    fn optimality_tol() -> Self {
        1e-5
    }
    fn pivot_tol() -> Self {
        1e-6
    }
}
