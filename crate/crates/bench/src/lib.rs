//! Fixture instances shared by the criterion benches.

use ringfill_core::PlacementParams;

/// A window covering most of a 64-bucket ring, `rounds` full rounds plus a
/// partial first cycle so the label gap path is exercised.
pub fn wide_window(rounds: u64) -> PlacementParams {
    PlacementParams::new(rounds * 64 + 17, 64, 48, 13, 97).expect("valid fixture")
}

/// A narrow window where most tokens take the second cycle.
pub fn narrow_window(rounds: u64) -> PlacementParams {
    PlacementParams::new(rounds * 64, 64, 3, 62, 65).expect("valid fixture")
}
