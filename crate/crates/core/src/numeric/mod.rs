//! Numerical building blocks: quadrature, root bracketing, streaming statistics.

pub mod quad;
pub mod roots;
pub mod stats;

pub use quad::{QuadOptions, QuadResult};
pub use stats::{Histogram, RunningStats, SampleStats};
