//! Complex polynomial and rational-function arithmetic.

mod elimination;
pub mod lens;
mod poly;
mod rational;
mod shifted;

pub use elimination::elimination_poly;
pub use lens::LensSpec;
pub use poly::ComplexPoly;
pub use rational::{Pole, RationalFn};
pub use shifted::ShiftedFunction;
