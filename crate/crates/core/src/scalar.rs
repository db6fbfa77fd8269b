use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumAssign};

/// Real scalar the game, solver and divergence code is generic over.
pub trait Scalar:
    Float + FromPrimitive + NumAssign + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Feasibility/optimality tolerance used when the caller does not supply one.
    fn default_tol() -> Self;

    /// Clamp-to-zero threshold for round-off on probability vectors.
    fn simplex_slack() -> Self;

    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("literal representable in scalar type")
    }
}

impl Scalar for f64 {
    fn default_tol() -> Self {
        1e-9
    }

    fn simplex_slack() -> Self {
        1e-9
    }
}

impl Scalar for f32 {
    fn default_tol() -> Self {
        1e-5
    }

    fn simplex_slack() -> Self {
        1e-4
    }
}
