//! Deterministic seed derivation for multi-restart runs.

/// 64-bit finalizer (splitmix64). Good avalanche behavior on sequential
/// inputs.
pub fn mix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Seed of restart `index` under master seed `master`: the sum pushed
/// through the mixer. Fixed rule so runs are reproducible across processes
/// and thread schedules.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    mix64(master.wrapping_add(index))
}
