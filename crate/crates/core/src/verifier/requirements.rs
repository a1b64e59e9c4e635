//! Requirement checks R1..R6 and the second-cycle direction constraint RC,
//! evaluated against a well-formed trace.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::lifecycle::LifecycleTrace;
use crate::params::{CycleClass, PlacementParams};
use crate::placement::class_of;
use crate::verifier::spread::{spread, ResidueHistogram};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RequirementId {
    R1,
    R2,
    R3,
    R4,
    R5,
    R6,
    RC,
}

impl RequirementId {
    pub const ALL: [RequirementId; 7] = [
        RequirementId::R1,
        RequirementId::R2,
        RequirementId::R3,
        RequirementId::R4,
        RequirementId::R5,
        RequirementId::R6,
        RequirementId::RC,
    ];

    pub fn describe(self) -> &'static str {
        match self {
            RequirementId::R1 => "labels are pairwise distinct",
            RequirementId::R2 => "stage-1 window counts differ by at most 1",
            RequirementId::R3 => "label residues mod B differ by at most 1",
            RequirementId::R4 => "each token moves at most once, never inside the window",
            RequirementId::R5 => "stage-2 buckets are label mod B with spread at most 1",
            RequirementId::R6 => "stage-3 buckets are label mod B' with spread at most 1",
            RequirementId::RC => "second cycle ascends through the window with increasing t",
        }
    }
}

impl fmt::Display for RequirementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// Enough to reproduce a failure: the instance plus the offending indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub params: PlacementParams,
    pub tokens: Vec<u64>,
    pub buckets: Vec<u64>,
    pub observed_spread: Option<u64>,
    pub histogram: Option<Vec<u64>>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RequirementEntry {
    pub id: RequirementId,
    pub status: Status,
    pub witness: Option<Witness>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RequirementReport {
    pub entries: Vec<RequirementEntry>,
}

impl RequirementReport {
    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.status == Status::Pass)
    }

    pub fn get(&self, id: RequirementId) -> Option<&RequirementEntry> {
        self.entries.iter().find(|e| e.id == id)
    }

    pub fn passed(&self, id: RequirementId) -> bool {
        self.get(id).is_some_and(|e| e.status == Status::Pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &RequirementEntry> {
        self.entries.iter().filter(|e| e.status == Status::Fail)
    }
}

/// The two halves of R6, kept apart because only the residue half holds
/// for every instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stage3Clauses {
    pub residue_correct: bool,
    pub count_spread: u64,
}

pub fn stage3_clauses(trace: &LifecycleTrace) -> Stage3Clauses {
    let modulus = trace.params.second_set_size();
    Stage3Clauses {
        residue_correct: trace
            .placements
            .iter()
            .all(|p| p.stage3_bucket == p.label.0 % modulus),
        count_spread: spread(&trace.occupancy3),
    }
}

struct Checker<'a> {
    trace: &'a LifecycleTrace,
    params: PlacementParams,
}

type Outcome = Result<(), Witness>;

// Witnesses are only built on failure.
#[allow(clippy::result_large_err)]
impl Checker<'_> {
    fn witness(&self, detail: impl Into<String>) -> Witness {
        Witness {
            params: self.params,
            tokens: Vec::new(),
            buckets: Vec::new(),
            observed_spread: None,
            histogram: None,
            detail: detail.into(),
        }
    }

    /// Buckets holding the extreme counts, as witness evidence.
    fn spread_witness(&self, buckets: &[u64], counts: &[u64], what: &str) -> Witness {
        let max = counts.iter().copied().max().unwrap_or(0);
        let min = counts.iter().copied().min().unwrap_or(0);
        let extremes = buckets
            .iter()
            .zip(counts)
            .filter(|(_, &c)| c == max || c == min)
            .map(|(&b, _)| b)
            .collect();
        Witness {
            buckets: extremes,
            observed_spread: Some(max - min),
            histogram: Some(counts.to_vec()),
            ..self.witness(format!(
                "{what} spread {} exceeds 1 (max {max}, min {min})",
                max - min
            ))
        }
    }

    fn r1(&self) -> Outcome {
        let mut first_owner: HashMap<u64, u64> =
            HashMap::with_capacity(self.trace.placements.len());
        for pl in &self.trace.placements {
            if let Some(&other) = first_owner.get(&pl.label.0) {
                return Err(Witness {
                    tokens: vec![other, pl.token.0],
                    ..self.witness(format!(
                        "label {} shared by tokens {other} and {}",
                        pl.label, pl.token.0
                    ))
                });
            }
            first_owner.insert(pl.label.0, pl.token.0);
        }
        Ok(())
    }

    fn r2(&self) -> Outcome {
        let p = &self.params;
        let outside: Vec<&_> = self
            .trace
            .placements
            .iter()
            .filter(|pl| !p.in_window(pl.stage1_bucket))
            .collect();
        if !outside.is_empty() {
            return Err(Witness {
                tokens: outside.iter().map(|pl| pl.token.0).collect(),
                buckets: outside.iter().map(|pl| pl.stage1_bucket).collect(),
                ..self.witness("stage-1 placement outside the fill window")
            });
        }
        let window: Vec<u64> = p.window().collect();
        let counts: Vec<u64> = window
            .iter()
            .map(|&b| self.trace.occupancy1[b as usize])
            .collect();
        if spread(&counts) > 1 {
            return Err(self.spread_witness(&window, &counts, "stage-1 window"));
        }
        Ok(())
    }

    fn r3(&self) -> Outcome {
        let b = self.params.first_set_size();
        let hist = ResidueHistogram::of_labels(b, self.trace.placements.iter().map(|pl| &pl.label));
        if hist.spread() > 1 {
            let residues: Vec<u64> = (0..b).collect();
            return Err(self.spread_witness(&residues, &hist.counts, "label residue mod B"));
        }
        Ok(())
    }

    fn r4(&self) -> Outcome {
        let p = &self.params;
        let mut bad_flag = Vec::new();
        let mut shuffled = Vec::new();
        for pl in &self.trace.placements {
            if pl.moved_in_stage2 != (pl.stage1_bucket != pl.stage2_bucket) {
                bad_flag.push(pl);
            }
            if p.in_window(pl.stage2_bucket) && pl.stage1_bucket != pl.stage2_bucket {
                shuffled.push(pl);
            }
        }
        if let Some(first) = shuffled.first() {
            return Err(Witness {
                tokens: shuffled.iter().map(|pl| pl.token.0).collect(),
                buckets: vec![first.stage1_bucket, first.stage2_bucket],
                ..self.witness(format!(
                    "token {} moved inside the window from bucket {} to {}",
                    first.token.0, first.stage1_bucket, first.stage2_bucket
                ))
            });
        }
        if !bad_flag.is_empty() {
            return Err(Witness {
                tokens: bad_flag.iter().map(|pl| pl.token.0).collect(),
                ..self.witness("move flag disagrees with stage-1/stage-2 buckets")
            });
        }
        Ok(())
    }

    fn residue_and_spread(
        &self,
        modulus: u64,
        bucket_of: impl Fn(&crate::lifecycle::TokenPlacement) -> u64,
        occupancy: &[u64],
        what: &str,
    ) -> Outcome {
        let wrong: Vec<_> = self
            .trace
            .placements
            .iter()
            .filter(|pl| bucket_of(pl) != pl.label.0 % modulus)
            .collect();
        if !wrong.is_empty() {
            return Err(Witness {
                tokens: wrong.iter().map(|pl| pl.token.0).collect(),
                buckets: wrong.iter().map(|pl| bucket_of(pl)).collect(),
                ..self.witness(format!("{what} bucket differs from label mod {modulus}"))
            });
        }
        if spread(occupancy) > 1 {
            let buckets: Vec<u64> = (0..modulus).collect();
            return Err(self.spread_witness(&buckets, occupancy, what));
        }
        Ok(())
    }

    fn r5(&self) -> Outcome {
        self.residue_and_spread(
            self.params.first_set_size(),
            |pl| pl.stage2_bucket,
            &self.trace.occupancy2,
            "stage-2",
        )
    }

    fn r6(&self) -> Outcome {
        self.residue_and_spread(
            self.params.second_set_size(),
            |pl| pl.stage3_bucket,
            &self.trace.occupancy3,
            "stage-3",
        )
    }

    fn rc(&self) -> Outcome {
        let p = &self.params;
        let mut expected = 0u64;
        for pl in &self.trace.placements {
            if class_of(p, pl.token.0) != CycleClass::SecondCycle {
                continue;
            }
            if p.window_offset(pl.stage1_bucket) != Some(expected) {
                return Err(Witness {
                    tokens: vec![pl.token.0],
                    buckets: vec![pl.stage1_bucket, p.window_bucket(expected)],
                    ..self.witness(format!(
                        "second-cycle token {} in bucket {}, expected bucket {}",
                        pl.token.0,
                        pl.stage1_bucket,
                        p.window_bucket(expected)
                    ))
                });
            }
            expected = (expected + 1) % p.fill_width();
        }
        Ok(())
    }
}

/// Evaluates every requirement. The trace should pass
/// [`LifecycleTrace::validate`] first.
pub fn check_requirements(trace: &LifecycleTrace) -> RequirementReport {
    let checker = Checker {
        trace,
        params: trace.params,
    };
    let entries = RequirementId::ALL
        .iter()
        .map(|&id| {
            let outcome = match id {
                RequirementId::R1 => checker.r1(),
                RequirementId::R2 => checker.r2(),
                RequirementId::R3 => checker.r3(),
                RequirementId::R4 => checker.r4(),
                RequirementId::R5 => checker.r5(),
                RequirementId::R6 => checker.r6(),
                RequirementId::RC => checker.rc(),
            };
            match outcome {
                Ok(()) => RequirementEntry {
                    id,
                    status: Status::Pass,
                    witness: None,
                },
                Err(w) => RequirementEntry {
                    id,
                    status: Status::Fail,
                    witness: Some(w),
                },
            }
        })
        .collect();
    RequirementReport { entries }
}
