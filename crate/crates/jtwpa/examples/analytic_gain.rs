//! # The pump-depletion gain law by itself
//!
//! Energy conservation alone pins down how a parametric amplifier
//! saturates when pump depletion is the only mechanism: with g the
//! small-signal power gain and P_p the pump power, the compressed gain
//! is G(P_sig) = g / (1 + 2 g P_sig / P_p).  Two consequences follow
//! immediately:
//!
//! * P1dB = P_p + 10·log10((10^0.1 − 1)/(2g)) — every decibel of gain
//!   costs a decibel of compression headroom, and
//! * the *output* power at compression, P1dB + G − 1 dB, is nearly
//!   independent of gain: the amplifier always saturates when the
//!   output approaches a fixed fraction of the pump power.
//!
//! The example tabulates both for a family of small-signal gains.

use jtwpa::compression::{analytic_gain, analytic_p1db, AnalyticGainModel};
use jtwpa::units::{dbm_to_watts, ratio_to_db};

fn main() {
    let pump_dbm = -78.4;

    println!("depletion law at P_p = {pump_dbm} dBm:");
    println!();
    println!("{:>10} {:>12} {:>14}", "g (dB)", "P1dB (dBm)", "Pout@1dB (dBm)");
    for g_db in [10.0, 15.0, 20.0, 25.0, 30.0] {
        let model = AnalyticGainModel::from_db(g_db, pump_dbm);
        let p1 = analytic_p1db(&model);
        println!("{g_db:>10.0} {p1:>12.2} {:>14.2}", p1 + g_db - 1.0);
    }

    // a full compression curve for the 20 dB case
    let model = AnalyticGainModel::from_db(20.0, pump_dbm);
    println!();
    println!("gain curve for g = 20 dB:");
    for i in 0..=12 {
        let p_dbm = -120.0 + 3.0 * i as f64;
        let g = ratio_to_db(analytic_gain(&model, dbm_to_watts(p_dbm)));
        let bar = "#".repeat((g.max(0.0)) as usize);
        println!("{p_dbm:>8.0} dBm {g:6.2} dB  {bar}");
    }

    // closed form and curve agree on where the knee sits
    let p1 = analytic_p1db(&model);
    let g_at_p1 = ratio_to_db(analytic_gain(&model, dbm_to_watts(p1)));
    println!();
    println!("gain at the closed-form P1dB: {g_at_p1:.4} dB (expect 19.0000)");
    assert!((g_at_p1 - 19.0).abs() < 1e-9);
}
