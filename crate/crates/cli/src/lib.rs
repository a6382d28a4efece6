//! Command-line workflow around the `draftopt` library: configuration,
//! artifact lineage and the individual stages.

pub mod config;
pub mod error;
pub mod lineage;
pub mod stages;
