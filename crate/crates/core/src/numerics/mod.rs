//! Special functions, quadrature and root finding.

mod quad;
mod solve;
mod special;

pub use quad::{quad_adaptive, Quad, QuadratureResult};
pub use solve::{solve_monotone, solve_monotone_upward};
pub use special::{erfc_scaled, exp_integral_e1, f_exp_e1};
