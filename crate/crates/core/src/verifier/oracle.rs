use crate::params::{PlacementParams, TokenId};

/// Stage-1 placement by walking two pointers over the window, without the
/// closed-form label map. The first pointer starts at offset `C-1` and steps
/// down, the second starts at offset `0` and steps up, both mod `C`. A token
/// goes to the first pointer when `(f + t) mod B` lies in the window.
pub fn prose_oracle_stage1(params: &PlacementParams) -> Vec<(TokenId, u64)> {
    let b = params.first_set_size();
    let c = params.fill_width();
    let f = params.first_bucket();
    let mut descending = c - 1;
    let mut ascending = 0;
    let mut out = Vec::with_capacity(params.token_count().min(1 << 20) as usize);
    for t in 0..params.token_count() {
        let probe = (f + t % b) % b;
        let offset = if params.in_window(probe) {
            let o = descending;
            descending = (descending + c - 1) % c;
            o
        } else {
            let o = ascending;
            ascending = (ascending + 1) % c;
            o
        };
        out.push((TokenId(t), (f + offset) % b));
    }
    out
}
