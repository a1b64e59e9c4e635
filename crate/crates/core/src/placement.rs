//! Closed-form label map, the three bucket-selection maps, and the stage-1
//! planner with its round-robin counter.
//!
//! A token `t` with `t mod B < C` belongs to the first cycle and gets the
//! label `f + t + C - 1 - 2 (t mod B)`, which walks the window downwards
//! within each round. Every other token gets `f + t` and is parked in the
//! window by a counter that walks upwards from `f`. Stage 2 sends every
//! token to `label mod B`, stage 3 to `label mod B'`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::params::{CycleClass, Label, PlacementParams, TokenId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlacementError {
    #[error("token {token} out of range (T = {token_count})")]
    TokenOutOfRange { token: u64, token_count: u64 },
}

fn check_token(params: &PlacementParams, t: TokenId) -> Result<(), PlacementError> {
    if t.0 < params.token_count() {
        Ok(())
    } else {
        Err(PlacementError::TokenOutOfRange {
            token: t.0,
            token_count: params.token_count(),
        })
    }
}

pub(crate) fn class_of(params: &PlacementParams, t: u64) -> CycleClass {
    if t % params.first_set_size() < params.fill_width() {
        CycleClass::FirstCycle
    } else {
        CycleClass::SecondCycle
    }
}

pub(crate) fn label_of(params: &PlacementParams, t: u64) -> Label {
    let b = params.first_set_size();
    let c = params.fill_width();
    let f = params.first_bucket();
    let pos = t % b;
    if pos < c {
        // f + t + C - 1 - 2*pos, regrouped so no intermediate goes negative
        Label(f + (t - pos) + (c - 1 - pos))
    } else {
        Label(f + t)
    }
}

pub fn cycle_class(params: &PlacementParams, t: TokenId) -> Result<CycleClass, PlacementError> {
    check_token(params, t)?;
    Ok(class_of(params, t.0))
}

pub fn label(params: &PlacementParams, t: TokenId) -> Result<Label, PlacementError> {
    check_token(params, t)?;
    Ok(label_of(params, t.0))
}

/// Bucket in the first set after rebalancing. First-cycle tokens are already
/// there after stage 1.
pub fn stage2_bucket(params: &PlacementParams, t: TokenId) -> Result<u64, PlacementError> {
    Ok(label(params, t)?.bucket_in(params.first_set_size()))
}

/// Bucket in the second set of `B'` buckets.
pub fn stage3_bucket(params: &PlacementParams, t: TokenId) -> Result<u64, PlacementError> {
    Ok(label(params, t)?.bucket_in(params.second_set_size()))
}

/// Streaming stage-1 planner. Yields `(token, bucket)` in increasing `t`.
///
/// `counter` is a window offset in `[0, C)`: the next second-cycle token
/// goes to bucket `(f + counter) mod B`. It survives across rounds.
#[derive(Debug, Clone)]
pub struct Stage1Planner {
    params: PlacementParams,
    counter: u64,
    tokens_emitted: u64,
}

impl Stage1Planner {
    pub fn new(params: PlacementParams) -> Self {
        Self {
            params,
            counter: 0,
            tokens_emitted: 0,
        }
    }

    pub fn counter(&self) -> u64 {
        self.counter
    }

    pub fn tokens_emitted(&self) -> u64 {
        self.tokens_emitted
    }
}

impl Iterator for Stage1Planner {
    type Item = (TokenId, u64);

    fn next(&mut self) -> Option<Self::Item> {
        let p = &self.params;
        let t = self.tokens_emitted;
        if t >= p.token_count() {
            return None;
        }
        let bucket = match class_of(p, t) {
            CycleClass::FirstCycle => label_of(p, t).bucket_in(p.first_set_size()),
            CycleClass::SecondCycle => {
                let bucket = p.window_bucket(self.counter);
                self.counter = (self.counter + 1) % p.fill_width();
                bucket
            }
        };
        self.tokens_emitted += 1;
        Some((TokenId(t), bucket))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = self.params.token_count() - self.tokens_emitted;
        match usize::try_from(left) {
            Ok(n) => (n, Some(n)),
            Err(_) => (usize::MAX, None),
        }
    }
}

pub fn plan_stage1(params: &PlacementParams) -> Vec<(TokenId, u64)> {
    Stage1Planner::new(*params).collect()
}

/// The interval of labels skipped when a run stops part-way through a
/// round's first cycle before reaching bucket `f`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapDescriptor {
    pub present: bool,
    pub gap_start: u64,
    pub gap_length: u64,
    /// Round of the last token, `(T - 1) div B`.
    pub round: u64,
    /// Last label minus `f + round * B`.
    pub offset: u64,
}

impl GapDescriptor {
    pub fn none() -> Self {
        Self {
            present: false,
            gap_start: 0,
            gap_length: 0,
            round: 0,
            offset: 0,
        }
    }

    /// Missing labels, empty when no gap is present.
    pub fn labels(&self) -> std::ops::Range<u64> {
        if self.present {
            self.gap_start..self.gap_start + self.gap_length
        } else {
            0..0
        }
    }
}

pub fn gap(params: &PlacementParams) -> GapDescriptor {
    let t_count = params.token_count();
    if t_count == 0 {
        return GapDescriptor::none();
    }
    let b = params.first_set_size();
    let c = params.fill_width();
    let f = params.first_bucket();
    let last = t_count - 1;
    let pos = last % b;
    let round = last / b;
    let base = f + round * b;
    let offset = label_of(params, last).0 - base;
    if pos + 1 < c {
        GapDescriptor {
            present: true,
            gap_start: base,
            gap_length: c - 1 - pos,
            round,
            offset,
        }
    } else {
        GapDescriptor {
            present: false,
            gap_start: 0,
            gap_length: 0,
            round,
            offset,
        }
    }
}
