use serde::{Deserialize, Serialize};

use crate::lifecycle::{end_state, LifecycleTrace};
use crate::params::{CycleClass, Label};
use crate::placement::class_of;

/// Count of values per residue class modulo `modulus`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueHistogram {
    pub modulus: u64,
    pub counts: Vec<u64>,
}

impl ResidueHistogram {
    pub fn of_labels<'a>(modulus: u64, labels: impl IntoIterator<Item = &'a Label>) -> Self {
        Self::of_values(modulus, labels.into_iter().map(|l| l.0))
    }

    pub fn of_values(modulus: u64, values: impl IntoIterator<Item = u64>) -> Self {
        assert!(modulus >= 1, "residue histogram needs modulus >= 1");
        let mut counts = vec![0u64; modulus as usize];
        for v in values {
            counts[(v % modulus) as usize] += 1;
        }
        Self { modulus, counts }
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn spread(&self) -> u64 {
        spread(&self.counts)
    }
}

/// `max - min` of a histogram; 0 for an empty slice.
pub fn spread(counts: &[u64]) -> u64 {
    match (counts.iter().max(), counts.iter().min()) {
        (Some(max), Some(min)) => max - min,
        _ => 0,
    }
}

/// Shape of the stage-1 window occupancy when a run stops inside a first
/// cycle away from bucket `f`. Offsets are window offsets, not ring buckets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "case")]
pub enum EndStateCase {
    /// `z + 1 = y`: every window bucket holds the same count.
    Equal,
    /// `z + 1 < y`: offsets strictly between `z` and `y` hold one less.
    Deficit { z: u64, y: u64 },
    /// `z + 1 > y`: offsets `y..=z` hold one more.
    Surplus { z: u64, y: u64 },
}

impl EndStateCase {
    /// Predicted window occupancy relative to the lowest count, per offset.
    pub fn predicted_excess(&self, width: u64) -> Vec<u64> {
        (0..width)
            .map(|o| match *self {
                EndStateCase::Equal => 0,
                EndStateCase::Deficit { z, y } => u64::from(!(z < o && o < y)),
                EndStateCase::Surplus { z, y } => u64::from(y <= o && o <= z),
            })
            .collect()
    }
}

/// Classifies the end of stage 1 from `z` and `y`. `None` unless the last
/// token is first-cycle, lands away from `f`, and some second-cycle token
/// exists.
pub fn classify_end_state(trace: &LifecycleTrace) -> Option<EndStateCase> {
    let p = &trace.params;
    let last = trace.placements.last()?;
    if class_of(p, last.token.0) != CycleClass::FirstCycle {
        return None;
    }
    let state = end_state(trace);
    let y = p.window_offset(state.last_first_cycle_bucket?)?;
    let z = p.window_offset(state.last_second_cycle_bucket?)?;
    if y == 0 {
        return None;
    }
    Some(match (z + 1).cmp(&y) {
        std::cmp::Ordering::Equal => EndStateCase::Equal,
        std::cmp::Ordering::Less => EndStateCase::Deficit { z, y },
        std::cmp::Ordering::Greater => EndStateCase::Surplus { z, y },
    })
}

/// Window occupancy in window order `f, f+1, ...`.
pub fn window_occupancy(trace: &LifecycleTrace) -> Vec<u64> {
    trace
        .params
        .window()
        .map(|b| trace.occupancy1[b as usize])
        .collect()
}
