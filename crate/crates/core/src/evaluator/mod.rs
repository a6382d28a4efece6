//! Objectives of a design: coefficient definitions, the synthetic oracle,
//! external result ingestion and the grid convergence index.

pub mod coefficients;
pub mod gci;
pub mod ingest;
pub mod oracle;

pub use coefficients::{drag_coefficient, pressure_recovery, DragCoefficient, FlowProbe, ObjectivePair};
pub use ingest::{ingest_csv, write_dataset};
pub use gci::{gci, gci_from_solutions, gci_with_order, GciReport};
pub use oracle::{calibrate, synthetic_cfd, Oracle, OracleConstants, REFERENCE_OBJECTIVES};
