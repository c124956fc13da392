//! Exact computation of support hyperplanes, lexicographic triangulations,
//! Hilbert bases, multiplicities and Hilbert series of rational cones.

pub mod basis;
pub mod bundled;
pub mod error;
pub mod eval;
pub mod geometry;
pub mod input;
pub mod linalg;
pub mod matrix;
pub mod pipeline;
pub mod poly;
pub mod report;
pub mod scalar;
pub mod series;
pub mod triangulator;

pub use error::Error;
pub use input::{parse_input, ConeInput, InputKind};
pub use pipeline::{run, Options, TaskSet};
pub use report::RunReport;
