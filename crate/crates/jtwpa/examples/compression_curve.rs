//! # Gain compression and the 1-dB point
//!
//! The figure of merit for amplifier saturation is P1dB: the input
//! power at which the gain has fallen exactly 1 dB below its
//! small-signal value.  For a pump-depletion-limited parametric
//! amplifier an analytic law predicts where that happens —
//! G = g/(1 + 2 g P_sig/P_p) — i.e. the compression point moves *down*
//! by 10·log10 of the small-signal gain: a 20 dB amplifier saturates at
//! roughly P_p − 23 dB.
//!
//! This example integrates the full envelope model at the band center,
//! extracts P1dB from the simulated gain-versus-power record, and sets
//! the result against the closed-form depletion law.

use jtwpa::compression::{
    analytic_p1db, extract_p1db, AnalyticGainModel, POWER_SMOOTHING_WINDOW,
};
use jtwpa::config::{linspace, RunConfig};
use jtwpa::device::DeviceModel;
use jtwpa::response::{sweep, SweepGrid};
use jtwpa::units::watts_to_dbm;

fn main() -> jtwpa::Result<()> {
    let cfg = RunConfig::default();
    let device = DeviceModel::new(cfg.device)?;

    let powers = linspace(-120.0, -90.0, 40);
    let grid = SweepGrid {
        signal_frequencies: vec![6.0e9],
        signal_powers: powers.clone(),
        pump_frequency: cfg.sweep.pump_frequency,
        pump_power: cfg.sweep.pump_power,
    };
    let surface = sweep(&grid, &device, &cfg.loss, &cfg.integrator)?;

    let gains: Vec<f64> = surface.gain_db.iter().map(|row| row[0]).collect();
    println!("gain versus signal power at 6 GHz:");
    for (p, g) in powers.iter().zip(&gains).step_by(4) {
        println!("{p:>8.1} dBm  {g:6.2} dB");
    }

    let (p1db, g_lin) = extract_p1db(&powers, &gains, POWER_SMOOTHING_WINDOW)?;
    println!();
    println!("simulated small-signal gain  {g_lin:.2} dB");
    println!("simulated P1dB               {p1db:.2} dBm");

    // the depletion law with the same small-signal gain and pump power
    let pump_dbm = watts_to_dbm(device.params.pump_power);
    let model = AnalyticGainModel::from_db(g_lin, pump_dbm);
    let p1db_analytic = analytic_p1db(&model);
    println!("depletion-law P1dB           {p1db_analytic:.2} dBm");
    println!(
        "difference                   {:.2} dB (full model includes loss and phase dynamics)",
        p1db - p1db_analytic
    );

    // output power at compression: input + compressed gain
    println!("output power at P1dB         {:.2} dBm", p1db + g_lin - 1.0);
    Ok(())
}
