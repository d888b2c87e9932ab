//! Certified arbitrary-precision arithmetic.

mod ball;
mod elementary;
mod float;
mod mag;

pub use ball::{mag_to_float_up, ComplexBall, RealBall};
pub use elementary::{exp, exp_real, pi, sqrt_int};
pub use float::Float;
pub use mag::Mag;
