//! # Flux tuning of the nonlinear unit cell
//!
//! Each cell of the amplifier is an asymmetric superconducting loop —
//! one small junction shunting three large ones — whose current-phase
//! relation is steered by an external magnetic flux.  Expanding that
//! relation around the zero-current bias point gives a linear stiffness
//! α̃ (setting the cell inductance L = φ0/(α̃·Ic)) and a cubic
//! coefficient γ̃ whose combination ξ = 6γ̃/α̃³ plays the role of a Kerr
//! constant: ξ < 0 means self- and cross-phase modulation *advance*
//! rather than retard the waves, which is exactly what lets four-wave
//! mixing phase-match on a dispersion-free line.
//!
//! This example sweeps the flux bias from 0 to half a flux quantum and
//! prints the operating point at each step: watch the inductance grow
//! and ξ change sign as the small junction starts to dominate.

use jtwpa::constants::FLUX_QUANTUM;
use jtwpa::device::{char_impedance, solve_operating_point, DeviceParams};

fn main() {
    let base = DeviceParams::default();

    println!("flux bias sweep of the reference cell (Ic = {:.2} uA, r = {}):", base.critical_current * 1e6, base.junction_ratio);
    println!();
    println!("{:>10} {:>12} {:>12} {:>12} {:>12}", "flux/Phi0", "alpha", "L (pH)", "xi", "Z0 (ohm)");

    for i in 0..=10 {
        let frac = 0.05 * i as f64;
        let params = DeviceParams {
            external_flux: frac * FLUX_QUANTUM,
            ..base
        };
        match solve_operating_point(&params) {
            Ok(op) => {
                let xi = 6.0 * op.gamma_tilde / op.alpha_tilde.powi(3);
                println!(
                    "{frac:>10.2} {:>12.5} {:>12.3} {:>12.5} {:>12.3}",
                    op.alpha_tilde,
                    op.inductance * 1e12,
                    xi,
                    char_impedance(&op, &params),
                );
            }
            Err(e) => println!("{frac:>10.2}  no stable bias point: {e}"),
        }
    }

    // the half-quantum point is where the amplifier is operated: the
    // Kerr constant is negative there, compensating the (positive)
    // linear phase mismatch of the mixing process
    let op = solve_operating_point(&base).expect("reference bias point");
    let xi = 6.0 * op.gamma_tilde / op.alpha_tilde.powi(3);
    println!();
    println!("at half a flux quantum:");
    println!("  phase bias     = {:.6} rad", op.phase_bias);
    println!("  cell inductance = {:.4} pH", op.inductance * 1e12);
    println!("  kerr constant  = {xi:.6}  (negative: phase-advancing)");
    assert!(xi < 0.0, "the reference bias must sit in the negative-Kerr regime");
}
