//! Power and ratio unit conversions.
//!
//! Internally everything is SI (watts, hertz, meters, webers); dBm and dB
//! appear only at interface boundaries — sweep grids, loss tables, emitted
//! CSV — so each conversion lives here and nowhere else.

/// Convert a power in dBm to watts: P[W] = 1 mW · 10^(P[dBm]/10).
pub fn dbm_to_watts(p_dbm: f64) -> f64 {
    1e-3 * 10f64.powf(p_dbm / 10.0)
}

/// Convert a power in watts to dBm. `p_w = 0` maps to `-inf`.
pub fn watts_to_dbm(p_w: f64) -> f64 {
    10.0 * (p_w / 1e-3).log10()
}

/// Express a power ratio in dB: 10·log10(ratio).
pub fn ratio_to_db(ratio: f64) -> f64 {
    10.0 * ratio.log10()
}

/// Invert [`ratio_to_db`].
pub fn db_to_ratio(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}
