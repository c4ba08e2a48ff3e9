//! Shared numerical kernels: log-domain arithmetic, adaptive quadrature,
//! bracketed root finding, an adaptive Runge-Kutta step and a few special
//! functions.
//!
//! Everything here is deterministic and allocation-light; the domain modules
//! build on these primitives instead of re-rolling their own loops.

pub mod logspace;
pub mod ode;
pub mod quad;
pub mod roots;
pub mod special;

pub use logspace::{log_add_exp, log_sum_exp, NEG_INF};
pub use ode::{integrate_adaptive, OdeOptions};
pub use quad::{integrate, integrate_to_singularity, QuadOptions};
pub use roots::{find_root, golden_min};
pub use special::{gamma_q, ln_binomial, ln_gamma};
