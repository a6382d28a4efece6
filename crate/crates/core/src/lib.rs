pub mod benchmarks;
pub mod bounds;
pub mod dataset;
pub mod decision;
pub mod doe;
pub mod error;
pub mod evaluator;
pub mod geometry;
pub mod multi;
pub mod report;
pub mod rng;
pub mod scenario;
pub mod single;
pub mod surrogate;
pub mod table;

pub use bounds::Bounds;
pub use error::{Error, ErrorKind, Result};
