//! # Junction asymmetry and critical current from L(Φ)
//!
//! Once the dispersion fits have produced a cell inductance at every
//! flux bias, the curve L(Φ) itself becomes data: its shape is set by
//! the zero-current phase bias of the asymmetric loop, which depends
//! only on the small-to-large junction size ratio r, while its overall
//! scale is 1/Ic.  A two-parameter least-squares fit of the loop model
//! to L(Φ) therefore pins down both fabrication numbers — no direct
//! DC transport measurement needed.
//!
//! The example synthesizes an inductance-versus-flux curve from the
//! device model, perturbs it with 0.5 % multiplicative noise, and fits
//! (r, Ic) back out.

use jtwpa::calibration::fit_inductance_flux;
use jtwpa::constants::{FLUX_QUANTUM, REDUCED_FLUX_QUANTUM};
use jtwpa::device::{solve_operating_point, DeviceParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> jtwpa::Result<()> {
    let r_true = 0.062;
    let ic_true = 1.4e-6;

    let fluxes: Vec<f64> = (0..13)
        .map(|i| (0.25 + 0.019 * i as f64) * FLUX_QUANTUM)
        .collect();
    let mut model_l = Vec::new();
    for &flux in &fluxes {
        let params = DeviceParams {
            junction_ratio: r_true,
            critical_current: ic_true,
            external_flux: flux,
            ..DeviceParams::default()
        };
        let op = solve_operating_point(&params)?;
        model_l.push(REDUCED_FLUX_QUANTUM / (op.alpha_tilde * ic_true));
        // the two expressions for L agree by construction
        assert!((op.inductance - model_l.last().unwrap()).abs() < 1e-24);
    }

    // 0.5 % multiplicative noise, the level a two-stage dispersion fit
    // typically leaves on L
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let noisy: Vec<f64> = model_l
        .iter()
        .map(|l| {
            let u1: f64 = rng.random_range(1e-12..1.0);
            let u2: f64 = rng.random_range(0.0..std::f64::consts::TAU);
            let gauss = (-2.0 * u1.ln()).sqrt() * u2.cos();
            l * (1.0 + 0.005 * gauss)
        })
        .collect();

    println!("inductance vs flux (truth r = {r_true}, Ic = {:.2} uA):", ic_true * 1e6);
    for (f, (l, ln)) in fluxes.iter().zip(model_l.iter().zip(&noisy)) {
        println!(
            "  {:>6.3} Phi0   model {:8.2} pH   measured {:8.2} pH",
            f / FLUX_QUANTUM,
            l * 1e12,
            ln * 1e12
        );
    }

    let fit = fit_inductance_flux(&fluxes, &noisy)?;
    let r = fit.value("r").unwrap();
    let ic = fit.value("Ic").unwrap();
    println!();
    println!(
        "fitted r  = {r:.4} ± {:.4}      (truth {r_true})",
        fit.standard_error("r").unwrap()
    );
    println!(
        "fitted Ic = {:.4} ± {:.4} uA  (truth {:.4})",
        ic * 1e6,
        fit.standard_error("Ic").unwrap() * 1e6,
        ic_true * 1e6
    );
    println!("converged in {} iterations, residual {:.3e}", fit.iterations, fit.residual_norm);

    assert!((r - r_true).abs() < 0.01);
    assert!((ic - ic_true).abs() / ic_true < 0.03);
    Ok(())
}
