//! # Iso-power profiles from a raw VNA dataset
//!
//! A VNA sweep records S21 on a grid of *source* powers × frequencies,
//! but the input line's attenuation depends on frequency — so one
//! source power illuminates different frequencies at different powers
//! at the device.  To plot gain at a fixed device-input power the rows
//! must be resampled: subtract the calibrated attenuation to get the
//! device-input power of every sample, truncate to the power range all
//! frequencies share, and per frequency pick the sample closest to
//! each target power.  The residual scatter stays below half the
//! source-power step.
//!
//! The example builds a raw dataset with a 3 dB attenuation tilt,
//! reconstructs the iso-power profiles, and band-averages one of them
//! for display.

use jtwpa::reduction::{band_average_profile, iso_power_reconstruct, RawVnaDataset};
use num_complex::Complex64;

fn main() -> jtwpa::Result<()> {
    let n_f = 41;
    let frequencies: Vec<f64> = (0..n_f).map(|j| 4.0e9 + 0.15e9 * j as f64).collect();
    // input-line attenuation tilts 3 dB across the band
    let attenuation_db: Vec<f64> = (0..n_f).map(|j| 70.0 + 3.0 * j as f64 / (n_f - 1) as f64).collect();
    let room_temp_powers: Vec<f64> = (0..9).map(|i| -42.0 + i as f64).collect();

    // transmission: a gentle gain lobe that compresses with power
    let complex_s21: Vec<Vec<Complex64>> = room_temp_powers
        .iter()
        .map(|&p_rt| {
            frequencies
                .iter()
                .enumerate()
                .map(|(j, &f)| {
                    let p_dev = p_rt - attenuation_db[j];
                    let lobe = 18.0 * (-(f / 1e9 - 6.0).powi(2) / 4.0).exp();
                    let compressed = lobe / (1.0 + 10f64.powf((p_dev + 108.0) / 10.0));
                    let mag = 10f64.powf(compressed / 20.0);
                    Complex64::from_polar(mag, 0.3 * j as f64)
                })
                .collect()
        })
        .collect();

    let raw = RawVnaDataset {
        room_temp_powers,
        frequencies: frequencies.clone(),
        complex_s21,
        attenuation_db,
    };

    let profiles = iso_power_reconstruct(&raw)?;
    let p_min = (0..n_f)
        .map(|j| raw.device_input_power(0, j))
        .fold(f64::NEG_INFINITY, f64::max);
    let p_max = (0..n_f)
        .map(|j| raw.device_input_power(raw.room_temp_powers.len() - 1, j))
        .fold(f64::INFINITY, f64::min);
    println!(
        "reconstructed {} iso-power profiles in the shared window [{p_min:.1}, {p_max:.1}] dBm:",
        profiles.len()
    );
    for prof in &profiles {
        // worst-case distance between a selected sample's true
        // device-input power and the profile label
        let scatter = prof
            .source_powers
            .iter()
            .enumerate()
            .map(|(j, &p_rt)| (p_rt - raw.attenuation_db[j] - prof.device_input_power).abs())
            .fold(0.0f64, f64::max);
        // profiles at least one source step inside the window get the
        // half-step guarantee; at the window edges the nearest raw
        // sample may sit just outside the truncation range, costing up
        // to a full step
        let interior =
            prof.device_input_power >= p_min + 1.0 && prof.device_input_power <= p_max - 1.0;
        println!(
            "  P_sig = {:>8.3} dBm   scatter {:>5.3} dB{}",
            prof.device_input_power,
            scatter,
            if interior { "" } else { "   (window edge)" }
        );
        let bound = if interior { 0.5 } else { 1.0 };
        assert!(scatter <= bound + 1e-12);
    }

    // display-side smoothing of the middle profile: drop the pump bin
    // (none present here) and run an 11-point moving average
    let mid = &profiles[profiles.len() / 2];
    let mag_db: Vec<f64> = mid.s21.iter().map(|s| 20.0 * s.norm().log10()).collect();
    let (f_sm, sm) = band_average_profile(&frequencies, &mag_db, 7.5e9)?;
    println!();
    println!("band-averaged |S21| of the {:.2} dBm profile:", mid.device_input_power);
    for (f, v) in f_sm.iter().zip(&sm).step_by(5) {
        let bar = "#".repeat((v.max(0.0) * 2.0) as usize);
        println!("  {:5.2} GHz {v:7.2} dB  {bar}", f / 1e9);
    }
    Ok(())
}
