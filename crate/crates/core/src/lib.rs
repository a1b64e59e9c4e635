//! Deterministic placement of `T` labelled tokens over a ring of `B`
//! buckets in three stages:
//!
//! 1. fill `C` consecutive buckets starting at `f` with two counter-rotating
//!    round-robin cycles,
//! 2. rebalance into all `B` buckets, moving each token at most once,
//! 3. re-shard into `B' > B` buckets by label.
//!
//! [`placement`] holds the closed-form maps and the stage-1 planner,
//! [`lifecycle`] runs all three stages, and [`verifier`] checks the
//! homogeneity requirements and sweeps small parameter spaces.

pub mod lifecycle;
pub mod params;
pub mod placement;
pub mod verifier;

pub use lifecycle::{
    end_state, run_lifecycle, LifecycleTrace, Stage1EndState, TokenPlacement, TraceError,
};
pub use params::{CycleClass, Label, ParamError, PlacementParams, TokenId};
pub use placement::{
    cycle_class, gap, label, plan_stage1, stage2_bucket, stage3_bucket, GapDescriptor,
    PlacementError, Stage1Planner,
};
pub use verifier::{
    check_requirements, prose_oracle_stage1, sweep, RequirementId, RequirementReport, SweepDomain,
    SweepReport,
};
