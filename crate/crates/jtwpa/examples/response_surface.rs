//! # Gain and pump transmission over the (frequency, power) plane
//!
//! Driving the signal harder depletes the pump: every amplified signal
//! photon pair costs two pump photons, so as the input power rises the
//! pump amplitude sags along the line, the phase-matching condition
//! drifts, and the gain compresses.  Sweeping both signal frequency and
//! signal power maps the whole saturation landscape at once, and the
//! pump's own transmission — normalized to its small-signal value — is
//! recorded next to the gain as a direct witness of where the energy
//! went.
//!
//! The example runs a coarse surface, prints a gain map in the
//! terminal, and writes the exact data plus two SVG heatmaps.

use jtwpa::config::{linspace, RunConfig};
use jtwpa::device::DeviceModel;
use jtwpa::io::{canonical_frequency_hz, write_surface_csv};
use jtwpa::plot::heatmap;
use jtwpa::response::{sweep, SweepGrid};
use std::path::Path;

fn main() -> jtwpa::Result<()> {
    let cfg = RunConfig::default();
    let device = DeviceModel::new(cfg.device)?;

    let grid = SweepGrid {
        signal_frequencies: linspace(4.5e9, 10.5e9, 31)
            .into_iter()
            .map(canonical_frequency_hz)
            .collect(),
        signal_powers: linspace(-115.0, -92.0, 12),
        pump_frequency: cfg.sweep.pump_frequency,
        pump_power: cfg.sweep.pump_power,
    }
    .without_pump_bins();

    let surface = sweep(&grid, &device, &cfg.loss, &cfg.integrator)?;

    // terminal heat map: one row per power, one glyph per frequency
    let glyphs = [' ', '.', ':', '-', '=', '+', '*', '#', '%', '@'];
    println!("gain (dB) over frequency 4.5–10.5 GHz (left to right), power rising downwards:");
    for (i, row) in surface.gain_db.iter().enumerate() {
        let line: String = row
            .iter()
            .map(|g| {
                let idx = ((g / 2.5) as isize).clamp(0, 9) as usize;
                glyphs[idx]
            })
            .collect();
        println!("{:>7.1} dBm |{line}|", surface.grid.signal_powers[i]);
    }

    let out = Path::new("surface_example_out");
    std::fs::create_dir_all(out).expect("create output directory");
    write_surface_csv(&out.join("surface.csv"), &surface)?;
    let f_ghz: Vec<f64> = surface.grid.signal_frequencies.iter().map(|f| f / 1e9).collect();
    heatmap(
        &out.join("gain.svg"),
        "Signal gain",
        "signal frequency (GHz)",
        "signal power (dBm)",
        &f_ghz,
        &surface.grid.signal_powers,
        &surface.gain_db,
    )?;
    heatmap(
        &out.join("pump.svg"),
        "Pump transmission",
        "signal frequency (GHz)",
        "signal power (dBm)",
        &f_ghz,
        &surface.grid.signal_powers,
        &surface.pump_s21_db,
    )?;
    println!();
    println!("wrote surface.csv, gain.svg, pump.svg to {}", out.display());
    Ok(())
}
