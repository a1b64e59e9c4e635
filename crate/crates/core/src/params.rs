//! Instance parameters and the small domain newtypes shared by every stage.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Reasons a parameter set is rejected.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParamError {
    #[error("first bucket set must not be empty (B = 0)")]
    EmptyFirstSet,
    #[error("fill width must be at least 1 (C = 0)")]
    EmptyWindow,
    #[error("fill width exceeds the first bucket set: C = {fill_width} > B = {first_set_size} (need C <= B)")]
    WindowTooWide {
        fill_width: u64,
        first_set_size: u64,
    },
    #[error("first bucket out of range: f = {first_bucket} >= B = {first_set_size} (need f < B)")]
    FirstBucketOutOfRange {
        first_bucket: u64,
        first_set_size: u64,
    },
    #[error("second bucket set must be larger than the first: B' = {second_set_size} <= B = {first_set_size} (need B < B')")]
    SecondSetTooSmall {
        second_set_size: u64,
        first_set_size: u64,
    },
    #[error("labels would overflow 64-bit arithmetic (f + T + C exceeds u64::MAX)")]
    LabelOverflow,
}

/// Index of a token, `0 <= t < T`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TokenId(pub u64);

impl fmt::Display for TokenId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t{}", self.0)
    }
}

/// Permanent integer label attached to a token. Labels are never reduced;
/// bucket choices reduce them modulo the size of the current bucket set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Label(pub u64);

impl Label {
    pub fn value(self) -> u64 {
        self.0
    }

    /// Bucket selected by this label in a set of `modulus` buckets.
    pub fn bucket_in(self, modulus: u64) -> u64 {
        self.0 % modulus
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Which of the two interleaved stage-1 round-robin streams a token joins.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CycleClass {
    /// `t mod B < C`: descends through the window and is already in its
    /// final first-set bucket.
    FirstCycle,
    /// `t mod B >= C`: ascends through the window via the counter and moves
    /// once in stage 2.
    SecondCycle,
}

/// One instance: `T` tokens, a ring of `B` buckets, a fill window of `C`
/// consecutive buckets starting at `f`, and a second set of `B' > B` buckets.
///
/// Construction validates every constraint, so a value of this type is
/// always a legal instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawParams")]
pub struct PlacementParams {
    token_count: u64,
    first_set_size: u64,
    fill_width: u64,
    first_bucket: u64,
    second_set_size: u64,
}

#[derive(Deserialize)]
struct RawParams {
    token_count: u64,
    first_set_size: u64,
    fill_width: u64,
    first_bucket: u64,
    second_set_size: u64,
}

impl TryFrom<RawParams> for PlacementParams {
    type Error = ParamError;

    fn try_from(raw: RawParams) -> Result<Self, Self::Error> {
        PlacementParams::new(
            raw.token_count,
            raw.first_set_size,
            raw.fill_width,
            raw.first_bucket,
            raw.second_set_size,
        )
    }
}

impl PlacementParams {
    /// Arguments in the order `(T, B, C, f, B')`.
    pub fn new(
        token_count: u64,
        first_set_size: u64,
        fill_width: u64,
        first_bucket: u64,
        second_set_size: u64,
    ) -> Result<Self, ParamError> {
        if first_set_size == 0 {
            return Err(ParamError::EmptyFirstSet);
        }
        if fill_width == 0 {
            return Err(ParamError::EmptyWindow);
        }
        if fill_width > first_set_size {
            return Err(ParamError::WindowTooWide {
                fill_width,
                first_set_size,
            });
        }
        if first_bucket >= first_set_size {
            return Err(ParamError::FirstBucketOutOfRange {
                first_bucket,
                first_set_size,
            });
        }
        if second_set_size <= first_set_size {
            return Err(ParamError::SecondSetTooSmall {
                second_set_size,
                first_set_size,
            });
        }
        // Every label is strictly below f + T + C.
        first_bucket
            .checked_add(token_count)
            .and_then(|v| v.checked_add(fill_width))
            .ok_or(ParamError::LabelOverflow)?;
        Ok(Self {
            token_count,
            first_set_size,
            fill_width,
            first_bucket,
            second_set_size,
        })
    }

    /// `T`
    pub fn token_count(&self) -> u64 {
        self.token_count
    }

    /// `B`
    pub fn first_set_size(&self) -> u64 {
        self.first_set_size
    }

    /// `C`
    pub fn fill_width(&self) -> u64 {
        self.fill_width
    }

    /// `f`
    pub fn first_bucket(&self) -> u64 {
        self.first_bucket
    }

    /// `B'`
    pub fn second_set_size(&self) -> u64 {
        self.second_set_size
    }

    /// Same instance with a different token count.
    pub fn with_token_count(&self, token_count: u64) -> Result<Self, ParamError> {
        Self::new(
            token_count,
            self.first_set_size,
            self.fill_width,
            self.first_bucket,
            self.second_set_size,
        )
    }

    /// Ordering key `(B, C, f, T, B')` used for deterministic sweeps.
    pub fn sort_key(&self) -> (u64, u64, u64, u64, u64) {
        (
            self.first_set_size,
            self.fill_width,
            self.first_bucket,
            self.token_count,
            self.second_set_size,
        )
    }

    /// Ring bucket at window offset `offset` (reduced mod B).
    pub fn window_bucket(&self, offset: u64) -> u64 {
        (self.first_bucket + offset % self.fill_width) % self.first_set_size
    }

    /// Window offset of a ring bucket, or `None` if it lies outside the window.
    pub fn window_offset(&self, bucket: u64) -> Option<u64> {
        if bucket >= self.first_set_size {
            return None;
        }
        let offset = (bucket + self.first_set_size - self.first_bucket) % self.first_set_size;
        (offset < self.fill_width).then_some(offset)
    }

    pub fn in_window(&self, bucket: u64) -> bool {
        self.window_offset(bucket).is_some()
    }

    /// Buckets of the fill window in window order `f, f+1, ...` (mod B).
    pub fn window(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.fill_width).map(move |i| self.window_bucket(i))
    }

    pub fn tokens(&self) -> impl Iterator<Item = TokenId> {
        (0..self.token_count).map(TokenId)
    }
}

impl PartialOrd for PlacementParams {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PlacementParams {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl fmt::Display for PlacementParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "B={} C={} f={} T={} B'={}",
            self.first_set_size,
            self.fill_width,
            self.first_bucket,
            self.token_count,
            self.second_set_size
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_each_constraint() {
        assert_eq!(
            PlacementParams::new(1, 0, 1, 0, 2),
            Err(ParamError::EmptyFirstSet)
        );
        assert_eq!(
            PlacementParams::new(1, 4, 0, 0, 5),
            Err(ParamError::EmptyWindow)
        );
        assert!(matches!(
            PlacementParams::new(5, 4, 5, 0, 5),
            Err(ParamError::WindowTooWide { .. })
        ));
        assert!(matches!(
            PlacementParams::new(5, 4, 2, 7, 5),
            Err(ParamError::FirstBucketOutOfRange { .. })
        ));
        assert!(matches!(
            PlacementParams::new(5, 4, 2, 0, 4),
            Err(ParamError::SecondSetTooSmall { .. })
        ));
        assert_eq!(
            PlacementParams::new(u64::MAX - 2, 4, 2, 3, 5),
            Err(ParamError::LabelOverflow)
        );
    }

    #[test]
    fn accepts_large_tokens_without_overflow() {
        let p = PlacementParams::new(i64::MAX as u64, 4, 2, 3, 5).unwrap();
        assert_eq!(p.token_count(), (1 << 63) - 1);
    }

    #[test]
    fn window_wraps_around_the_ring() {
        let p = PlacementParams::new(0, 5, 3, 3, 6).unwrap();
        assert_eq!(p.window().collect::<Vec<_>>(), vec![3, 4, 0]);
        assert_eq!(p.window_offset(0), Some(2));
        assert_eq!(p.window_offset(1), None);
        assert_eq!(p.window_offset(9), None);
    }

    #[test]
    fn deserialize_validates() {
        let ok = r#"{"token_count":3,"first_set_size":4,"fill_width":2,"first_bucket":1,"second_set_size":5}"#;
        let p: PlacementParams = serde_json::from_str(ok).unwrap();
        assert_eq!(p.first_bucket(), 1);
        let bad = r#"{"token_count":3,"first_set_size":4,"fill_width":5,"first_bucket":1,"second_set_size":5}"#;
        assert!(serde_json::from_str::<PlacementParams>(bad).is_err());
    }

    #[test]
    fn lexicographic_order_is_b_c_f_t_bprime() {
        let a = PlacementParams::new(9, 2, 1, 0, 3).unwrap();
        let b = PlacementParams::new(0, 3, 1, 0, 4).unwrap();
        assert!(a < b);
    }
}
