//! # Configs and file formats that survive the round trip
//!
//! Reproducibility here is bit-level: a run configuration loads,
//! serializes, and reloads to the identical struct, and every emitted
//! CSV re-ingests to the identical in-memory object.  The subtle part
//! is the frequency axis — CSV stores frequencies in GHz for
//! readability, and `hz → GHz → hz` through decimal text is *not* the
//! identity for arbitrary doubles.  `canonical_frequency_hz` snaps a
//! frequency to the nearest fixed point of that conversion (within
//! ~10 µHz), after which the column round-trips exactly.
//!
//! The example exercises both: a config written with "friendly" unit
//! suffixes, and a response surface pushed through its CSV format.

use jtwpa::config::{load_config, parse_config, save_config, serialize_config, RunConfig};
use jtwpa::io::{canonical_frequency_hz, read_surface_csv, write_surface_csv};
use jtwpa::response::{ResponseSurface, SweepGrid};
use std::path::Path;

fn main() -> jtwpa::Result<()> {
    let dir = Path::new("config_example_out");
    std::fs::create_dir_all(dir).expect("create output directory");

    // a config in mixed, human-friendly units
    let text = "\
[device]
n_cells = 350
critical_current = 1.1 uA
external_flux = 0.5 Phi0

[pump]
frequency = 7.2 GHz
power = -79.0 dBm

[sweep]
signal_start = 5 GHz
signal_stop = 9 GHz
signal_points = 11
";
    let cfg = parse_config(text)?;
    println!("parsed config: {} cells, pump {:.1} GHz at {} dBm", cfg.device.n_cells, cfg.sweep.pump_frequency / 1e9, cfg.sweep.pump_power);
    println!("defaults filled in: Cg = {:.1} fF, rel_tol = {:.0e}", cfg.device.ground_capacitance * 1e15, cfg.integrator.rel_tol);

    // serialize → load is the identity (canonical SI units on disk)
    let path = dir.join("run.cfg");
    save_config(&path, &cfg)?;
    let reloaded = load_config(&path)?;
    assert_eq!(reloaded, cfg, "config round trip must be exact");
    println!("round trip through {} is bit-exact", path.display());
    println!();
    println!("canonical serialization:\n{}", serialize_config(&cfg));

    // the frequency axis: snap, write, read back, compare bitwise
    let grid = SweepGrid {
        signal_frequencies: vec![
            canonical_frequency_hz(5.123456789123456e9),
            canonical_frequency_hz(6.999999999999997e9),
        ],
        signal_powers: vec![-110.0, -100.0],
        pump_frequency: canonical_frequency_hz(7.2e9),
        pump_power: -79.0,
    };
    let surface = ResponseSurface {
        grid,
        gain_db: vec![vec![17.123456789012345, 16.2], vec![15.0, 14.111111111111111]],
        pump_s21_db: vec![vec![-0.25, -0.3], vec![-1.5, -1.75]],
    };
    let csv = dir.join("surface.csv");
    write_surface_csv(&csv, &surface)?;
    let back = read_surface_csv(&csv)?;
    assert_eq!(back, surface, "surface CSV round trip must be exact");
    println!("surface CSV round trip through {} is bit-exact", csv.display());

    // how far does canonicalization move a frequency? (sub-µHz here)
    let f = 5.123456789123456e9;
    let c = canonical_frequency_hz(f);
    println!();
    println!("canonical snap moved {f} Hz by {:.3e} Hz", (c - f).abs());

    // RunConfig::default is itself the bundled reference device
    let reference = RunConfig::default();
    println!(
        "reference device: {} cells of {:.1} um at Ic = {} uA",
        reference.device.n_cells,
        reference.device.cell_length * 1e6,
        reference.device.critical_current * 1e6
    );
    Ok(())
}
