//! # Where along the line does the gain live?
//!
//! Saturation is not uniform in space.  Near the band center the
//! signal grows monotonically from entrance to exit — a longer device
//! would simply amplify more.  Near the band edges the power-dependent
//! phase mismatch accumulates until the mixing reverses and the signal
//! hands energy *back* to the pump: the gain peaks somewhere inside
//! the line and then falls off.  Mapping dense integrator output onto
//! cell index makes that spatial story visible and tells a designer
//! whether the device length is matched to the drive.
//!
//! The example computes gain-versus-position at a moderately strong
//! signal power for three representative frequencies.

use jtwpa::compression::stability_map;
use jtwpa::config::RunConfig;
use jtwpa::device::DeviceModel;

fn main() -> jtwpa::Result<()> {
    let cfg = RunConfig::default();
    let device = DeviceModel::new(cfg.device)?;

    let frequencies = [5.0e9, 6.0e9, 9.9e9];
    let p_signal = -94.6;
    let map = stability_map(
        &frequencies,
        cfg.sweep.pump_frequency,
        p_signal,
        &device,
        &cfg.loss,
        &cfg.integrator,
    )?;

    println!(
        "gain vs cell index at {p_signal} dBm signal power (device has {} cells):",
        device.params.n_cells
    );
    println!();
    print!("{:>6}", "cell");
    for f in &frequencies {
        print!(" {:>11.1} GHz", f / 1e9);
    }
    println!();
    for (i, &pos) in map.positions.iter().enumerate().step_by(8) {
        print!("{pos:>6}");
        for j in 0..frequencies.len() {
            print!(" {:>15.3}", map.gain_db[i][j]);
        }
        println!();
    }

    // classify each column: monotone growth vs interior peak
    println!();
    for (j, f) in frequencies.iter().enumerate() {
        let column: Vec<f64> = map.gain_db.iter().map(|row| row[j]).collect();
        let exit = *column.last().unwrap();
        let (argmax, max) = column
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |a, (i, &g)| if g > a.1 { (i, g) } else { a });
        if max - exit > 0.05 {
            println!(
                "{:.1} GHz: interior peak of {max:.2} dB at cell {} — the line is 'too long' here",
                f / 1e9,
                map.positions[argmax]
            );
        } else {
            println!("{:.1} GHz: monotone growth to {exit:.2} dB at the exit", f / 1e9);
        }
    }
    Ok(())
}
