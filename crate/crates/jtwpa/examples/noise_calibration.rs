//! # System gain and noise from a thermal source sweep
//!
//! Point a matched load of known temperature T at the input line and
//! the power reaching the detector is P = (N_src(T) + N_sys)·G·kB·Δf,
//! where N_src(T,ω) = (ħω/2kB)·coth(ħω/2kBT) is the source's noise
//! temperature — thermal at high T, frozen at the half-photon vacuum
//! floor ħω/2kB as T → 0.  Because P is *linear* in N_src, sweeping
//! the source temperature and regressing per frequency yields the
//! system gain G (slope) and the system-added noise N_sys (intercept
//! over slope) simultaneously — the cryogenic version of a Y-factor
//! measurement with more than two hot/cold states.
//!
//! The example builds a synthetic three-temperature sweep and recovers
//! both calibration products across the band.

use jtwpa::calibration::{fit_noise_calibration, source_noise_temperature, NoisePowerTrace};
use jtwpa::constants::BOLTZMANN;
use jtwpa::units::db_to_ratio;

fn main() -> jtwpa::Result<()> {
    let g_sys_db = 95.0;
    let n_sys = 4.0; // kelvin, referred to the device input
    let bandwidth = 1.0e6;

    let frequencies: Vec<f64> = (0..8).map(|i| (4.0 + 0.5 * i as f64) * 1e9).collect();
    let temperatures = vec![0.03, 0.8, 4.2];

    // the vacuum floor matters: at 6 GHz and 30 mK the source still
    // radiates ħω/2kB ≈ 0.144 K worth of noise
    println!("source noise temperature N_src(T, f):");
    for &t in &temperatures {
        print!("  T = {t:>5.2} K:");
        for &f in &frequencies {
            print!(" {:6.3}", source_noise_temperature(f, t));
        }
        println!();
    }

    let g_lin = db_to_ratio(g_sys_db);
    let measured_power: Vec<Vec<f64>> = temperatures
        .iter()
        .map(|&t| {
            frequencies
                .iter()
                .map(|&f| (source_noise_temperature(f, t) + n_sys) * g_lin * BOLTZMANN * bandwidth)
                .collect()
        })
        .collect();

    let trace = NoisePowerTrace {
        frequencies: frequencies.clone(),
        source_temperatures: temperatures,
        measured_power,
        bandwidth,
    };
    let fits = fit_noise_calibration(&trace)?;

    println!();
    println!("per-frequency regression results:");
    println!("{:>8} {:>12} {:>12}", "f (GHz)", "G_sys (dB)", "N_sys (K)");
    for fit in &fits {
        println!(
            "{:>8.1} {:>12.4} {:>12.4}",
            fit.fixed_value("f").unwrap() / 1e9,
            fit.value("G_sys").unwrap(),
            fit.value("N_sys").unwrap()
        );
        assert!((fit.value("G_sys").unwrap() - g_sys_db).abs() < 1e-6);
        assert!((fit.value("N_sys").unwrap() - n_sys).abs() < 1e-6);
    }
    println!();
    println!("recovered G_sys = {g_sys_db} dB and N_sys = {n_sys} K at every frequency");
    Ok(())
}
