//! Requirement checks, the pointer-walk oracle for stage 1, and the
//! exhaustive parameter sweep.

mod oracle;
mod requirements;
mod spread;
mod sweep;

pub use oracle::prose_oracle_stage1;
pub use requirements::{
    check_requirements, stage3_clauses, RequirementEntry, RequirementId, RequirementReport,
    Stage3Clauses, Status, Witness,
};
pub use spread::{classify_end_state, spread, window_occupancy, EndStateCase, ResidueHistogram};
pub use sweep::{
    sweep, RequirementSummary, Stage3Summary, SweepDomain, SweepError, SweepReport, Violation,
};
