//! Measured-data reduction: iso-power reconstruction and band smoothing.
//!
//! A swept-power VNA measurement holds the *room-temperature* source power
//! fixed per sweep, but the attenuation down the input line varies with
//! frequency, so one raw sweep does not probe the device at a single input
//! power. Reconstruction builds profiles at constant device-input power:
//!
//! 1. form the device-input power matrix P(P_RT, ω) = P_RT − A(ω);
//! 2. truncate to the power window covered at *every* frequency
//!    (P_min = the largest entry of the lowest-power row, P_max = the
//!    smallest entry of the highest-power row);
//! 3. label each surviving row by the frequency average (in dBm) of its
//!    in-window entries;
//! 4. per frequency, pick the raw sample whose device-input power is
//!    nearest that label, never leaving the window, ties resolved toward
//!    the lower power.
//!
//! The residual per-frequency scatter around the label stays within about
//! half the room-temperature power step.
//!
//! Smoothing uses a centered moving average with symmetric shrinking
//! windows at the edges, which preserves series length, leaves any linear
//! ramp exactly unchanged (including its endpoints), and never invents
//! data beyond the record. Band profiles drop the sample at the pump
//! frequency first — the pump leaks into that bin and the sample is
//! meaningless there. Complex transmissions are smoothed as dB magnitude
//! and unwrapped phase separately, then recombined.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// One raw VNA power-sweep block plus the input-line attenuation needed
/// to refer powers to the device input.
#[derive(Debug, Clone, PartialEq)]
pub struct RawVnaDataset {
    /// Source powers at room temperature, dBm, strictly increasing.
    pub room_temp_powers: Vec<f64>,
    /// Frequency axis, Hz, strictly increasing.
    pub frequencies: Vec<f64>,
    /// Complex transmission, indexed [power row][frequency column].
    pub complex_s21: Vec<Vec<Complex64>>,
    /// Input-line attenuation per frequency, dB (positive numbers mean
    /// the device sees less power than the source emitted).
    pub attenuation_db: Vec<f64>,
}

impl RawVnaDataset {
    /// Check axis ordering and matrix shape.
    pub fn validate(&self) -> Result<()> {
        if self.room_temp_powers.len() < 2 {
            return Err(Error::InvalidParameter(
                "need at least two power rows to reconstruct iso-power profiles".into(),
            ));
        }
        if !self.room_temp_powers.windows(2).all(|w| w[1] > w[0]) {
            return Err(Error::InvalidParameter(
                "room-temperature powers must be strictly increasing".into(),
            ));
        }
        if self.frequencies.is_empty() || !self.frequencies.windows(2).all(|w| w[1] > w[0]) {
            return Err(Error::InvalidParameter(
                "frequencies must be non-empty and strictly increasing".into(),
            ));
        }
        if self.attenuation_db.len() != self.frequencies.len() {
            return Err(Error::GridMismatch(format!(
                "attenuation has {} entries for {} frequencies",
                self.attenuation_db.len(),
                self.frequencies.len()
            )));
        }
        if self.attenuation_db.iter().any(|a| !a.is_finite()) {
            return Err(Error::InvalidParameter(
                "attenuation entries must be finite".into(),
            ));
        }
        if self.complex_s21.len() != self.room_temp_powers.len()
            || self
                .complex_s21
                .iter()
                .any(|row| row.len() != self.frequencies.len())
        {
            return Err(Error::GridMismatch(format!(
                "S21 matrix shape does not match {} powers × {} frequencies",
                self.room_temp_powers.len(),
                self.frequencies.len()
            )));
        }
        Ok(())
    }

    /// Device-input power of one sample, dBm.
    pub fn device_input_power(&self, row: usize, col: usize) -> f64 {
        self.room_temp_powers[row] - self.attenuation_db[col]
    }
}

/// One reconstructed constant-device-input-power profile.
#[derive(Debug, Clone, PartialEq)]
pub struct IsoPowerProfile {
    /// The profile's device-input power label (band average), dBm.
    pub device_input_power: f64,
    /// Room-temperature source power of the selected sample, per
    /// frequency, dBm.
    pub source_powers: Vec<f64>,
    /// Selected complex transmission per frequency.
    pub s21: Vec<Complex64>,
}

/// Rebuild constant-input-power profiles from a raw swept-power dataset.
///
/// Returns one profile per source-power row that still has entries inside
/// the truncation window, ordered by increasing power. Rows whose entries
/// all fall outside the window are skipped, never fabricated.
pub fn iso_power_reconstruct(raw: &RawVnaDataset) -> Result<Vec<IsoPowerProfile>> {
    raw.validate()?;
    let n_rows = raw.room_temp_powers.len();
    let n_cols = raw.frequencies.len();

    let p_min = (0..n_cols)
        .map(|j| raw.device_input_power(0, j))
        .fold(f64::NEG_INFINITY, f64::max);
    let p_max = (0..n_cols)
        .map(|j| raw.device_input_power(n_rows - 1, j))
        .fold(f64::INFINITY, f64::min);
    if p_min > p_max {
        return Err(Error::EmptyOverlap { p_min, p_max });
    }
    let in_window = |p: f64| (p_min..=p_max).contains(&p);

    let mut profiles = Vec::new();
    for row in 0..n_rows {
        // label: arithmetic dBm mean of this row's in-window entries
        let in_range: Vec<f64> = (0..n_cols)
            .map(|j| raw.device_input_power(row, j))
            .filter(|&p| in_window(p))
            .collect();
        if in_range.is_empty() {
            continue;
        }
        let p_sig = in_range.iter().sum::<f64>() / in_range.len() as f64;

        // per frequency: nearest in-window sample, ties toward lower power
        let mut source_powers = Vec::with_capacity(n_cols);
        let mut s21 = Vec::with_capacity(n_cols);
        for j in 0..n_cols {
            let mut best: Option<(usize, f64)> = None;
            for k in 0..n_rows {
                let p = raw.device_input_power(k, j);
                if !in_window(p) {
                    continue;
                }
                let d = (p - p_sig).abs();
                if best.map_or(true, |(_, bd)| d < bd) {
                    best = Some((k, d));
                }
            }
            let (k, _) = best.ok_or_else(|| {
                Error::InvalidParameter(format!(
                    "no sample inside the truncated power window [{p_min}, {p_max}] dBm \
                     at {} Hz (source power steps exceed the window width)",
                    raw.frequencies[j]
                ))
            })?;
            source_powers.push(raw.room_temp_powers[k]);
            s21.push(raw.complex_s21[k][j]);
        }
        profiles.push(IsoPowerProfile {
            device_input_power: p_sig,
            source_powers,
            s21,
        });
    }
    Ok(profiles)
}

/// Centered moving average with symmetric shrinking edge windows.
///
/// Interior points average `window` samples; within half a window of
/// either end the window shrinks symmetrically (the point at index i
/// averages 2·min(i, n−1−i, (window−1)/2) + 1 samples), so the output has
/// the same length as the input and a linear ramp passes through
/// unchanged.
pub fn moving_average(series: &[f64], window: usize) -> Result<Vec<f64>> {
    if window == 0 || window % 2 == 0 || window > series.len() {
        return Err(Error::BadWindow {
            window,
            len: series.len(),
        });
    }
    let n = series.len();
    let half = (window - 1) / 2;
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let h = half.min(i).min(n - 1 - i);
        let slice = &series[i - h..=i + h];
        out.push(slice.iter().sum::<f64>() / slice.len() as f64);
    }
    Ok(out)
}

/// Band profile smoothing: drop the sample at the pump frequency (the
/// pump leaks into that bin), then apply an 11-point moving average.
///
/// Returns the pruned frequency axis and the smoothed values.
pub fn band_average_profile(
    frequencies: &[f64],
    values: &[f64],
    pump_frequency: f64,
) -> Result<(Vec<f64>, Vec<f64>)> {
    if frequencies.len() != values.len() {
        return Err(Error::GridMismatch(format!(
            "{} frequencies for {} values",
            frequencies.len(),
            values.len()
        )));
    }
    if !frequencies.windows(2).all(|w| w[1] > w[0]) {
        return Err(Error::InvalidParameter(
            "band profile frequencies must be strictly increasing".into(),
        ));
    }
    let mut kept_f = Vec::with_capacity(frequencies.len());
    let mut kept_v = Vec::with_capacity(values.len());
    for (&f, &v) in frequencies.iter().zip(values) {
        if (f - pump_frequency).abs() > 1e-9 * pump_frequency {
            kept_f.push(f);
            kept_v.push(v);
        }
    }
    let smoothed = moving_average(&kept_v, 11)?;
    Ok((kept_f, smoothed))
}

/// Smooth a complex transmission profile: dB magnitude and unwrapped
/// phase are averaged independently, then recombined.
pub fn smooth_complex_s21(s21: &[Complex64], window: usize) -> Result<Vec<Complex64>> {
    if s21.iter().any(|s| s.norm_sqr() == 0.0 || !s.is_finite()) {
        return Err(Error::InvalidParameter(
            "complex smoothing needs finite, nonzero entries (dB magnitude undefined at 0)".into(),
        ));
    }
    let mag_db: Vec<f64> = s21.iter().map(|s| 20.0 * s.norm().log10()).collect();
    let phase =
        crate::calibration::unwrap_phase(&s21.iter().map(|s| s.arg()).collect::<Vec<_>>());
    let mag_sm = moving_average(&mag_db, window)?;
    let ph_sm = moving_average(&phase, window)?;
    Ok(mag_sm
        .iter()
        .zip(&ph_sm)
        .map(|(&m, &p)| Complex64::from_polar(10f64.powf(m / 20.0), p))
        .collect())
}
