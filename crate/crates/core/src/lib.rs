//! Location-based optimum relay selection over random relay fields.
//!
//! Relays are points of a planar process; the source sits at (−d, 0) and the
//! destination at (d, 0). A relay's quality is ŝ(x), the larger of its two hop
//! distances, and the optimum relay minimizes ŝ.

pub mod analytic;
pub mod cli;
pub mod error;
pub mod metrics;
pub mod model;
pub mod montecarlo;
pub mod numerics;
pub mod policy;
pub mod process;

pub use error::{Error, Result};
