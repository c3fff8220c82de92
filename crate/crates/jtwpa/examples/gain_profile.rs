//! # Small-signal gain profile across the band
//!
//! A strong pump at 7.5 GHz converts pairs of its photons into
//! signal/idler pairs (2ω_p = ω_s + ω_i).  In the small-signal limit
//! the power gain at the device output depends on the phase mismatch
//! Δk(ω_s), which the negative Kerr constant of the flux-biased cells
//! pulls through zero at two frequencies placed symmetrically around
//! the pump — so the gain profile shows a characteristic double lobe
//! with a shallow dip at the pump itself.
//!
//! This example integrates the full three-wave envelope equations at a
//! single low probe power across 4–11 GHz and locates the two lobes.

use jtwpa::config::{linspace, RunConfig};
use jtwpa::device::DeviceModel;
use jtwpa::response::{sweep, SweepGrid};

fn main() -> jtwpa::Result<()> {
    let cfg = RunConfig::default();
    let device = DeviceModel::new(cfg.device)?;

    let grid = SweepGrid {
        signal_frequencies: linspace(4.0e9, 11.0e9, 141),
        signal_powers: vec![-120.0],
        pump_frequency: cfg.sweep.pump_frequency,
        pump_power: cfg.sweep.pump_power,
    }
    .without_pump_bins();

    let surface = sweep(&grid, &device, &cfg.loss, &cfg.integrator)?;
    let gains = &surface.gain_db[0];
    let freqs = &surface.grid.signal_frequencies;

    println!("small-signal gain at {} dBm probe power:", grid.signal_powers[0]);
    for (f, g) in freqs.iter().zip(gains).step_by(7) {
        let bar = "#".repeat((g.max(0.0) * 2.0) as usize);
        println!("{:6.2} GHz {g:7.2} dB  {bar}", f / 1e9);
    }

    // local maxima below and above the pump
    let pump = grid.pump_frequency;
    let peak = |pred: &dyn Fn(f64) -> bool| -> (f64, f64) {
        freqs
            .iter()
            .zip(gains)
            .filter(|(f, _)| pred(**f))
            .map(|(f, g)| (*f, *g))
            .fold((f64::NAN, f64::NEG_INFINITY), |acc, p| if p.1 > acc.1 { p } else { acc })
    };
    let (f_lo, g_lo) = peak(&|f| f < pump);
    let (f_hi, g_hi) = peak(&|f| f > pump);

    println!();
    println!("gain lobes flanking the {:.1} GHz pump:", pump / 1e9);
    println!("  lower  {:.2} GHz  {g_lo:.2} dB", f_lo / 1e9);
    println!("  upper  {:.2} GHz  {g_hi:.2} dB", f_hi / 1e9);
    assert!(f_lo < pump && pump < f_hi);
    Ok(())
}
