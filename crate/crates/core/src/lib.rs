#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod applications;
pub mod error;
pub mod estimators;
pub mod hyperprior;
pub mod ingest;
pub mod measures;
pub mod optimizer;
pub mod simulation;
pub mod stats;

pub use error::{Error, Result};
pub use estimators::{Interval, MieFamily, RankScope};
pub use hyperprior::{ml2_estimate, Ml2Options, Ml2Result};
pub use measures::{GlobalMeasures, Prior, UnitSpec};
pub use optimizer::{find_c_star, optimize_levels, search_c_star, CStarResult, LengthLoss, LevelAllocation};
pub use simulation::{run_simulation, SimCell, SimConfig, SimOutput, TrueDist};
