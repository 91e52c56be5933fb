//! Clique-subdivision certificates in C4-free and C6-free graphs.
//!
//! The crate builds `TK_ℓ` certificates (core vertices joined by internally disjoint paths),
//! validates them against the host graph, and ships the graph families, expander machinery and
//! embedders used to find them.

pub mod certify;
pub mod cycles;
pub mod densest;
pub mod drc;
pub mod engine;
pub mod error;
pub mod expander;
pub mod experiment;
pub mod field;
pub mod generators;
pub mod graph;
pub mod io;
pub mod ops;
pub mod params;
pub mod report;
pub mod small;

pub use certify::{validate, CertPath, Certificate, ValidationReport, Violation, ViolationKind};
pub use error::{Error, FailureReason, Result};
pub use graph::{Graph, Path, Side, Vertex, VertexSet};
pub use report::{RunReport, StageRecord};
