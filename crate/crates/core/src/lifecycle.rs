//! Full three-stage run of one instance, recorded per token so the move
//! budget and the occupancy of every stage can be checked as data.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::params::{CycleClass, Label, PlacementParams, TokenId};
use crate::placement::{class_of, label_of, Stage1Planner};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenPlacement {
    pub token: TokenId,
    pub label: Label,
    pub stage1_bucket: u64,
    pub stage2_bucket: u64,
    pub stage3_bucket: u64,
    pub moved_in_stage2: bool,
}

/// Every token's placement in `t` order plus per-stage bucket counts.
/// `occupancy1` and `occupancy2` are indexed by first-set bucket (length B),
/// `occupancy3` by second-set bucket (length B').
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LifecycleTrace {
    pub params: PlacementParams,
    pub placements: Vec<TokenPlacement>,
    pub occupancy1: Vec<u64>,
    pub occupancy2: Vec<u64>,
    pub occupancy3: Vec<u64>,
}

/// Structural problems in a trace that did not come from [`run_lifecycle`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TraceError {
    #[error("trace holds {found} placements but T = {expected}")]
    PlacementCount { expected: u64, found: usize },
    #[error("placement #{position} is for token {found}, expected {position}")]
    TokenOrder { position: usize, found: u64 },
    #[error("{which} has {found} buckets, expected {expected}")]
    HistogramLength {
        which: &'static str,
        expected: u64,
        found: usize,
    },
    #[error("token {token}: {which} bucket {bucket} outside [0, {modulus})")]
    BucketRange {
        token: u64,
        which: &'static str,
        bucket: u64,
        modulus: u64,
    },
    #[error("{which} does not match a tally of the placements")]
    HistogramMismatch { which: &'static str },
}

fn tally(modulus: u64, buckets: impl Iterator<Item = u64>) -> Vec<u64> {
    let mut counts = vec![0u64; modulus as usize];
    for b in buckets {
        counts[b as usize] += 1;
    }
    counts
}

pub fn run_lifecycle(params: &PlacementParams) -> LifecycleTrace {
    let b = params.first_set_size();
    let b2 = params.second_set_size();
    let placements: Vec<TokenPlacement> = Stage1Planner::new(*params)
        .map(|(token, stage1_bucket)| {
            let label = label_of(params, token.0);
            let stage2_bucket = label.bucket_in(b);
            TokenPlacement {
                token,
                label,
                stage1_bucket,
                stage2_bucket,
                stage3_bucket: label.bucket_in(b2),
                moved_in_stage2: stage1_bucket != stage2_bucket,
            }
        })
        .collect();
    let occupancy1 = tally(b, placements.iter().map(|p| p.stage1_bucket));
    let occupancy2 = tally(b, placements.iter().map(|p| p.stage2_bucket));
    let occupancy3 = tally(b2, placements.iter().map(|p| p.stage3_bucket));
    LifecycleTrace {
        params: *params,
        placements,
        occupancy1,
        occupancy2,
        occupancy3,
    }
}

impl LifecycleTrace {
    /// Checks shape and bookkeeping. Requirement checks assume this holds.
    pub fn validate(&self) -> Result<(), TraceError> {
        let p = &self.params;
        let (b, b2) = (p.first_set_size(), p.second_set_size());
        if self.placements.len() as u64 != p.token_count() {
            return Err(TraceError::PlacementCount {
                expected: p.token_count(),
                found: self.placements.len(),
            });
        }
        for (position, pl) in self.placements.iter().enumerate() {
            if pl.token.0 != position as u64 {
                return Err(TraceError::TokenOrder {
                    position,
                    found: pl.token.0,
                });
            }
            for (which, bucket, modulus) in [
                ("stage1", pl.stage1_bucket, b),
                ("stage2", pl.stage2_bucket, b),
                ("stage3", pl.stage3_bucket, b2),
            ] {
                if bucket >= modulus {
                    return Err(TraceError::BucketRange {
                        token: pl.token.0,
                        which,
                        bucket,
                        modulus,
                    });
                }
            }
        }
        for (which, hist, modulus) in [
            ("occupancy1", &self.occupancy1, b),
            ("occupancy2", &self.occupancy2, b),
            ("occupancy3", &self.occupancy3, b2),
        ] {
            if hist.len() as u64 != modulus {
                return Err(TraceError::HistogramLength {
                    which,
                    expected: modulus,
                    found: hist.len(),
                });
            }
        }
        let recount = [
            (
                "occupancy1",
                &self.occupancy1,
                tally(b, self.placements.iter().map(|p| p.stage1_bucket)),
            ),
            (
                "occupancy2",
                &self.occupancy2,
                tally(b, self.placements.iter().map(|p| p.stage2_bucket)),
            ),
            (
                "occupancy3",
                &self.occupancy3,
                tally(b2, self.placements.iter().map(|p| p.stage3_bucket)),
            ),
        ];
        for (which, stored, counted) in recount {
            if *stored != counted {
                return Err(TraceError::HistogramMismatch { which });
            }
        }
        Ok(())
    }
}

/// `z` and `y`: stage-1 buckets of the last second-cycle and last
/// first-cycle token.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Stage1EndState {
    pub last_second_cycle_bucket: Option<u64>,
    pub last_first_cycle_bucket: Option<u64>,
}

pub fn end_state(trace: &LifecycleTrace) -> Stage1EndState {
    let p = &trace.params;
    let last_of = |class| {
        trace
            .placements
            .iter()
            .rev()
            .find(|pl| class_of(p, pl.token.0) == class)
            .map(|pl| pl.stage1_bucket)
    };
    Stage1EndState {
        last_second_cycle_bucket: last_of(CycleClass::SecondCycle),
        last_first_cycle_bucket: last_of(CycleClass::FirstCycle),
    }
}
