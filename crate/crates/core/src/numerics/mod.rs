//! Deterministic numerical kernels shared by the analytical engine.
//!
//! Everything here is pure and reentrant.

mod quadrature;
mod roots;
mod special;

pub use quadrature::{integrate, integrate_array, integrate_split, Estimate, QuadratureSpec};
pub use roots::{find_root_bracketed, RootSpec};
pub use special::{binomial, dawson, erfi, factorial, pochhammer};
