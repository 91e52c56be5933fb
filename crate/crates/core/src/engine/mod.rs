//! Subdivision embedders and the pipeline that chains them.

pub mod connect;
pub mod dense;
pub mod generic;
pub mod pipeline;
pub mod reduce;
pub mod sparse;

pub use connect::{CorePlan, PlanStatus};
pub use generic::generic_tk;
pub use pipeline::{find_subdivision, Mode, Outcome};
