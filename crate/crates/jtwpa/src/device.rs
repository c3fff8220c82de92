//! SNAIL-chain device model: current-phase relation, flux-dependent
//! inductance, dispersion relation, characteristic impedance, and the
//! power-dependent dielectric loss model.
//!
//! The device is a chain of N identical cells, each a SNAIL (one small
//! junction shunting three large ones) with a ground capacitance Cg and a
//! junction capacitance CJ. With the external flux threading every loop
//! equally, the chain is characterized by the zero-current phase Φ* of
//!
//! ```text
//! I(Φ) = Ic·[ r·sin(Φ/φ0) + sin((Φ − Φext)/(3φ0)) ]
//! ```
//!
//! Expanding the SNAIL potential around Φ* gives the quadratic and quartic
//! stiffness weights
//!
//! ```text
//! α̃ = r·cos(Φ*/φ0) + (1/3)·cos((Φ* − Φext)/(3φ0))
//! γ̃ = (1/6)·[ r·cos(Φ*/φ0) + (1/27)·cos((Φ* − Φext)/(3φ0)) ]
//! ```
//!
//! from which the cell inductance L = φ0/(α̃·Ic) and the dimensionless
//! quartic scale ξ = 6γ̃/α̃³ follow. At Φext = Φ0/2 with a small junction
//! ratio r < 1/3 the quartic term is negative (ξ < 0): the Kerr
//! nonlinearity is reversed, which is what lets four-wave mixing phase
//! match without dispersion engineering.
//!
//! The linear wave physics of the loaded line is summarized by the
//! dispersion relation k(ω) = ω√(L·Cg) / (a·√(1 − L·CJ·ω²)) below the
//! plasma frequency 1/√(L·CJ), the characteristic impedance √(L/Cg), and
//! dielectric damping k'' = tanδ·k/2 with a power-dependent loss tangent.

use serde::{Deserialize, Serialize};

use crate::constants::{FLUX_QUANTUM, REDUCED_FLUX_QUANTUM};
use crate::error::{Error, Result};

/// Linear and nonlinear chain parameters. All SI.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeviceParams {
    /// Number of unit cells N.
    pub n_cells: u32,
    /// Cell length a, m.
    pub cell_length: f64,
    /// Small-to-large junction critical-current ratio r (dimensionless).
    pub junction_ratio: f64,
    /// Large-junction critical current Ic, A.
    pub critical_current: f64,
    /// Junction (plasma) capacitance CJ, F.
    pub snail_capacitance: f64,
    /// Cell ground capacitance Cg, F.
    pub ground_capacitance: f64,
    /// External flux bias Φext, Wb.
    pub external_flux: f64,
    /// Pump power at the device input, W.
    pub pump_power: f64,
}

impl DeviceParams {
    /// Total device length l = N·a, m.
    pub fn length(&self) -> f64 {
        f64::from(self.n_cells) * self.cell_length
    }

    /// Check the documented parameter ranges.
    pub fn validate(&self) -> Result<()> {
        if self.n_cells < 1 {
            return Err(Error::InvalidParameter("n_cells must be >= 1".into()));
        }
        if !(self.cell_length > 0.0) {
            return Err(Error::InvalidParameter("cell_length must be > 0".into()));
        }
        if !(self.critical_current > 0.0) {
            return Err(Error::InvalidParameter("critical_current must be > 0".into()));
        }
        if !(0.0..1.0).contains(&self.junction_ratio) {
            return Err(Error::InvalidParameter(
                "junction_ratio must satisfy 0 <= r < 1".into(),
            ));
        }
        if !(self.snail_capacitance > 0.0) {
            return Err(Error::InvalidParameter("snail_capacitance must be > 0".into()));
        }
        if !(self.ground_capacitance > 0.0) {
            return Err(Error::InvalidParameter("ground_capacitance must be > 0".into()));
        }
        if !(self.pump_power >= 0.0) {
            return Err(Error::InvalidParameter("pump_power must be >= 0".into()));
        }
        if !self.external_flux.is_finite() {
            return Err(Error::InvalidParameter("external_flux must be finite".into()));
        }
        Ok(())
    }
}

impl Default for DeviceParams {
    /// The bundled reference device: a 700-cell SNAIL chain biased at half
    /// a flux quantum, pumped at −78.4 dBm.
    fn default() -> Self {
        DeviceParams {
            n_cells: 700,
            cell_length: 8.7e-6,
            junction_ratio: 0.062,
            critical_current: 1.4e-6,
            snail_capacitance: 31e-15,
            ground_capacitance: 223.5e-15,
            external_flux: 0.5 * FLUX_QUANTUM,
            pump_power: crate::units::dbm_to_watts(-78.4),
        }
    }
}

/// Flux-dependent quantities evaluated at the zero-current phase Φ*.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SnailOperatingPoint {
    /// Zero-current phase Φ*, Wb.
    pub phase_bias: f64,
    /// Quadratic stiffness weight α̃ (dimensionless).
    pub alpha_tilde: f64,
    /// Quartic stiffness weight γ̃ (dimensionless).
    pub gamma_tilde: f64,
    /// Cell inductance L(Φext) = φ0/(α̃·Ic), H.
    pub inductance: f64,
    /// Dimensionless quartic scale ξ = 6γ̃/α̃³.
    pub kerr_scale: f64,
}

/// Which of the three tones a loss lookup refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tone {
    Pump,
    Signal,
    Idler,
}

/// Dielectric loss description: a single pump value plus a power-dependent
/// table for signal and idler.
///
/// The table holds (input power dBm, tanδ) nodes with strictly increasing
/// powers; lookups interpolate linearly in dBm and clamp beyond the ends.
/// The idler shares the signal table, evaluated at the signal's input
/// power (the idler starts from zero and tracks the signal).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LossModel {
    /// tanδ seen by the pump tone (fitted at the pump's own power).
    pub pump_tan_delta: f64,
    /// (power dBm, tanδ) nodes for signal/idler, powers strictly increasing.
    pub signal_tan_delta_table: Vec<(f64, f64)>,
}

impl LossModel {
    /// A lossless device (all tanδ zero, single table node).
    pub fn lossless() -> Self {
        LossModel {
            pump_tan_delta: 0.0,
            signal_tan_delta_table: vec![(-100.0, 0.0)],
        }
    }

    /// Check the documented invariants.
    pub fn validate(&self) -> Result<()> {
        if !(self.pump_tan_delta >= 0.0) {
            return Err(Error::InvalidParameter("pump_tan_delta must be >= 0".into()));
        }
        for w in self.signal_tan_delta_table.windows(2) {
            if !(w[1].0 > w[0].0) {
                return Err(Error::InvalidParameter(
                    "signal_tan_delta_table powers must be strictly increasing".into(),
                ));
            }
        }
        if self.signal_tan_delta_table.iter().any(|&(_, t)| !(t >= 0.0)) {
            return Err(Error::InvalidParameter(
                "signal_tan_delta_table tan deltas must be >= 0".into(),
            ));
        }
        Ok(())
    }
}

impl Default for LossModel {
    /// The bundled reference loss model: pump tanδ 2.19×10⁻³ and a
    /// saturable (decreasing-with-power) signal/idler table. The table
    /// values stay above the pump value — the pump, being the strongest
    /// tone, saturates the dielectric two-level systems hardest.
    fn default() -> Self {
        LossModel {
            pump_tan_delta: 2.19e-3,
            signal_tan_delta_table: vec![
                (-115.0, 2.80e-3),
                (-110.0, 2.65e-3),
                (-105.0, 2.50e-3),
                (-100.0, 2.40e-3),
                (-95.0, 2.30e-3),
            ],
        }
    }
}

/// Resolve the loss tangent for one tone.
///
/// The pump role returns the single fitted pump value regardless of
/// `power_dbm`; signal and idler interpolate the table at the given input
/// power (linearly in dBm), clamping beyond the table ends.
pub fn tan_delta_lookup(model: &LossModel, tone: Tone, power_dbm: f64) -> Result<f64> {
    match tone {
        Tone::Pump => Ok(model.pump_tan_delta),
        Tone::Signal | Tone::Idler => {
            let table = &model.signal_tan_delta_table;
            if table.is_empty() {
                return Err(Error::EmptyTable);
            }
            let first = table[0];
            let last = table[table.len() - 1];
            if power_dbm <= first.0 {
                return Ok(first.1);
            }
            if power_dbm >= last.0 {
                return Ok(last.1);
            }
            // power is strictly inside (first, last): find the bracketing pair
            let i = table.partition_point(|&(p, _)| p < power_dbm);
            let (p0, t0) = table[i - 1];
            let (p1, t1) = table[i];
            if power_dbm == p0 {
                return Ok(t0);
            }
            Ok(t0 + (t1 - t0) * (power_dbm - p0) / (p1 - p0))
        }
    }
}

/// Normalized current-phase relation I(Φ)/Ic.
fn current_over_ic(phi: f64, phi_ext: f64, r: f64) -> f64 {
    let p0 = REDUCED_FLUX_QUANTUM;
    r * (phi / p0).sin() + ((phi - phi_ext) / (3.0 * p0)).sin()
}

/// d(I/Ic)/dΦ, 1/Wb.
fn dcurrent_over_ic(phi: f64, phi_ext: f64, r: f64) -> f64 {
    let p0 = REDUCED_FLUX_QUANTUM;
    r * (phi / p0).cos() / p0 + ((phi - phi_ext) / (3.0 * p0)).cos() / (3.0 * p0)
}

/// Solve the zero-current phase Φ* and evaluate the stiffness weights.
///
/// The root is bracketed in [Φext − Φ0/2, Φext + Φ0/2] (for r < 1/3 a
/// single zero lies near Φext), narrowed by bisection, and polished with
/// safeguarded Newton steps until |I(Φ*)| < Ic·10⁻¹².
pub fn solve_operating_point(params: &DeviceParams) -> Result<SnailOperatingPoint> {
    params.validate()?;
    let r = params.junction_ratio;
    let phi_ext = params.external_flux;
    let p0 = REDUCED_FLUX_QUANTUM;

    let mut lo = phi_ext - 0.5 * FLUX_QUANTUM;
    let mut hi = phi_ext + 0.5 * FLUX_QUANTUM;
    let mut f_lo = current_over_ic(lo, phi_ext, r);
    let f_hi = current_over_ic(hi, phi_ext, r);
    if f_lo == 0.0 {
        hi = lo;
    } else if f_hi == 0.0 {
        lo = hi;
    } else if f_lo.signum() == f_hi.signum() {
        return Err(Error::NoRoot { lo, hi });
    }

    // Bisection down to ~1e-6 of the bracket, then Newton to machine level.
    let mut phi = 0.5 * (lo + hi);
    if lo != hi {
        for _ in 0..24 {
            phi = 0.5 * (lo + hi);
            let f_mid = current_over_ic(phi, phi_ext, r);
            if f_mid == 0.0 {
                break;
            }
            if f_mid.signum() == f_lo.signum() {
                lo = phi;
                f_lo = f_mid;
            } else {
                hi = phi;
            }
        }
        for _ in 0..60 {
            let f = current_over_ic(phi, phi_ext, r);
            if f.abs() < 1e-14 {
                break;
            }
            let df = dcurrent_over_ic(phi, phi_ext, r);
            let newton = if df != 0.0 { phi - f / df } else { f64::NAN };
            // fall back to bisection whenever Newton leaves the bracket
            let next = if newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
            if next == phi {
                break;
            }
            let f_next = current_over_ic(next, phi_ext, r);
            if f_next.signum() == f_lo.signum() {
                lo = next;
                f_lo = f_next;
            } else {
                hi = next;
            }
            phi = next;
        }
    } else {
        phi = lo;
    }

    if current_over_ic(phi, phi_ext, r).abs() >= 1e-12 {
        return Err(Error::NoRoot { lo, hi });
    }

    let c1 = (phi / p0).cos();
    let c3 = ((phi - phi_ext) / (3.0 * p0)).cos();
    let alpha_tilde = r * c1 + c3 / 3.0;
    if alpha_tilde <= 0.0 {
        return Err(Error::NonpositiveAlpha(alpha_tilde));
    }
    let gamma_tilde = (r * c1 + c3 / 27.0) / 6.0;
    let inductance = p0 / (alpha_tilde * params.critical_current);
    let kerr_scale = 6.0 * gamma_tilde / alpha_tilde.powi(3);

    Ok(SnailOperatingPoint {
        phase_bias: phi,
        alpha_tilde,
        gamma_tilde,
        inductance,
        kerr_scale,
    })
}

/// Wavevector of the loaded line, rad/m:
/// k = ω√(L·Cg) / (a·√(1 − L·CJ·ω²)), valid below the plasma frequency.
pub fn dispersion_k(omega: f64, op_point: &SnailOperatingPoint, params: &DeviceParams) -> Result<f64> {
    let l = op_point.inductance;
    let s = 1.0 - l * params.snail_capacitance * omega * omega;
    if s <= 0.0 {
        return Err(Error::AbovePlasmaFrequency {
            f_hz: omega / (2.0 * std::f64::consts::PI),
            f_plasma_hz: 1.0
                / (2.0 * std::f64::consts::PI * (l * params.snail_capacitance).sqrt()),
        });
    }
    Ok(omega * (l * params.ground_capacitance).sqrt() / (params.cell_length * s.sqrt()))
}

/// Imaginary wavevector (field damping rate) k'' = tanδ·k/2, Np/m.
pub fn loss_k_imag(k: f64, tan_delta: f64) -> f64 {
    tan_delta * k / 2.0
}

/// Characteristic impedance Z0 = √(L/Cg), Ω.
pub fn char_impedance(op_point: &SnailOperatingPoint, params: &DeviceParams) -> f64 {
    (op_point.inductance / params.ground_capacitance).sqrt()
}

/// A device with its operating point solved once and reused everywhere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeviceModel {
    pub params: DeviceParams,
    pub op_point: SnailOperatingPoint,
}

impl DeviceModel {
    /// Validate parameters and solve the operating point.
    pub fn new(params: DeviceParams) -> Result<Self> {
        let op_point = solve_operating_point(&params)?;
        Ok(DeviceModel { params, op_point })
    }

    /// Wavevector at ω, rad/m.
    pub fn dispersion_k(&self, omega: f64) -> Result<f64> {
        dispersion_k(omega, &self.op_point, &self.params)
    }

    /// Characteristic impedance, Ω.
    pub fn char_impedance(&self) -> f64 {
        char_impedance(&self.op_point, &self.params)
    }

    /// Device length l = N·a, m.
    pub fn length(&self) -> f64 {
        self.params.length()
    }

    /// Warn (once per call) when the per-cell phase advance k·a leaves the
    /// continuum regime the envelope equations are derived in.
    pub fn check_continuum_limit(&self, omega: f64) -> Result<f64> {
        let ka = self.dispersion_k(omega)? * self.params.cell_length;
        if ka > 0.5 {
            log::warn!(
                "k*a = {:.3} rad at f = {:.3} GHz exceeds 0.5: continuum-limit approximation is marginal",
                ka,
                omega / (2.0 * std::f64::consts::PI) / 1e9
            );
        }
        Ok(ka)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::{FLUX_QUANTUM as PHI0, REDUCED_FLUX_QUANTUM as P0};

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }

    /// Independent oracle: brute-force scan of the current-phase relation
    /// over Φ ∈ [Φext − Φ0/2, Φext + Φ0/2] at 10⁶ points, bisection-only
    /// refinement, then direct evaluation of the stiffness weights.
    fn brute_force_op(r: f64, phi_ext: f64, ic: f64) -> (f64, f64, f64, f64) {
        let i_of = |phi: f64| r * (phi / P0).sin() + ((phi - phi_ext) / (3.0 * P0)).sin();
        let n = 1_000_000;
        let lo0 = phi_ext - 0.5 * PHI0;
        let step = PHI0 / n as f64;
        // Evaluate each abscissa exactly once and carry the value forward:
        // re-deriving the same grid point through a different rounding path
        // can jitter the abscissa by an ulp, which near the root is enough
        // to hide the sign change.
        let mut bracket = None;
        let mut prev_x = lo0;
        let mut prev_f = i_of(lo0);
        for j in 1..=n {
            let x = lo0 + j as f64 * step;
            let f = i_of(x);
            if prev_f == 0.0 {
                bracket = Some((prev_x, prev_x));
                break;
            }
            if prev_f.signum() != f.signum() {
                bracket = Some((prev_x, x));
                break;
            }
            prev_x = x;
            prev_f = f;
        }
        let (mut lo, mut hi) = bracket.unwrap_or_else(|| {
            panic!(
                "oracle found no sign change at r={r}, phi_ext/PHI0={}",
                phi_ext / PHI0
            )
        });
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if i_of(mid) == 0.0 || (hi - lo) < f64::EPSILON * P0 {
                lo = mid;
                hi = mid;
                break;
            }
            if i_of(mid).signum() == i_of(lo).signum() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let phi = 0.5 * (lo + hi);
        let at = r * (phi / P0).cos() + ((phi - phi_ext) / (3.0 * P0)).cos() / 3.0;
        let gt = (r * (phi / P0).cos() + ((phi - phi_ext) / (3.0 * P0)).cos() / 27.0) / 6.0;
        (phi, at, gt, P0 / (at * ic))
    }

    fn device(r: f64, phi_ext: f64) -> DeviceParams {
        DeviceParams {
            junction_ratio: r,
            external_flux: phi_ext,
            ..DeviceParams::default()
        }
    }

    #[test]
    fn symmetric_small_junction_off() {
        // r = 0: the small-junction term vanishes, the root sits exactly at
        // Φext and the weights collapse to 1/3 and 1/162.
        for phi_ext in [0.0, 0.2 * PHI0, 0.5 * PHI0, 0.9 * PHI0] {
            let op = solve_operating_point(&device(0.0, phi_ext)).unwrap();
            assert!((op.phase_bias - phi_ext).abs() < 1e-9 * PHI0);
            assert!(rel(op.alpha_tilde, 1.0 / 3.0) < 1e-12);
            assert!(rel(op.gamma_tilde, 1.0 / 162.0) < 1e-9);
        }
    }

    #[test]
    fn reference_bias_point() {
        // At Φext = Φ0/2 the chain is symmetric: Φ* = Φ0/2 analytically,
        // so α̃ = 1/3 − r and γ̃ = (1/27 − r)/6 in closed form.
        let p = DeviceParams::default();
        let op = solve_operating_point(&p).unwrap();
        assert!((op.phase_bias - 0.5 * PHI0).abs() < 1e-9 * PHI0);
        assert!(rel(op.alpha_tilde, 1.0 / 3.0 - 0.062) < 1e-12);
        assert!(rel(op.gamma_tilde, (1.0 / 27.0 - 0.062) / 6.0) < 1e-12);
        assert!(op.gamma_tilde < 0.0, "reversed-Kerr regime requires γ̃ < 0");
        assert!(op.kerr_scale < 0.0);
        // Self-consistent inductance ~866.4 pH; the fitted 869.6 pH the
        // reference device reports agrees within 0.5%.
        assert!(rel(op.inductance, 866.372_354_708_985_65e-12) < 1e-9);
        assert!(rel(op.inductance, 869.6e-12) < 5e-3);
        // Exact identity, bit for bit.
        assert_eq!(op.inductance, P0 / (op.alpha_tilde * p.critical_current));
    }

    #[test]
    fn operating_point_matches_brute_force_oracle() {
        let ic = 1.4e-6;
        for r in [0.0, 0.05, 0.062, 0.2] {
            for i in 0..=10 {
                let phi_ext = i as f64 / 10.0 * PHI0;
                let op = solve_operating_point(&device(r, phi_ext)).unwrap();
                let (phi_o, at_o, gt_o, l_o) = brute_force_op(r, phi_ext, ic);
                assert!(
                    (op.phase_bias - phi_o).abs() < 1e-8 * PHI0,
                    "phase mismatch at r={r}, phi_ext={i}/10"
                );
                assert!(rel(op.alpha_tilde, at_o) < 1e-8);
                assert!((op.gamma_tilde - gt_o).abs() < 1e-8);
                assert!(rel(op.inductance, l_o) < 1e-8);
                // root consistency on re-substitution
                assert!(
                    current_over_ic(op.phase_bias, phi_ext, r).abs() < 1e-12,
                    "residual current at r={r}, phi_ext={i}/10"
                );
            }
        }
    }

    #[test]
    fn kerr_sign_flips_with_flux() {
        let op_half = solve_operating_point(&device(0.062, 0.5 * PHI0)).unwrap();
        let op_zero = solve_operating_point(&device(0.062, 0.0)).unwrap();
        assert!(op_half.kerr_scale < 0.0);
        assert!(op_zero.kerr_scale > 0.0);
    }

    #[test]
    fn dispersion_linear_limit_and_monotonicity() {
        let p = DeviceParams::default();
        let op = solve_operating_point(&p).unwrap();
        let w = 2.0 * std::f64::consts::PI * 1e6; // 1 MHz: deep linear regime
        let k = dispersion_k(w, &op, &p).unwrap();
        let k_lin = w * (op.inductance * p.ground_capacitance).sqrt() / p.cell_length;
        assert!(rel(k, k_lin) < 1e-9);

        let mut prev = 0.0;
        for f in (1..=30).map(|i| i as f64 * 1e9) {
            let k = dispersion_k(2.0 * std::f64::consts::PI * f, &op, &p).unwrap();
            assert!(k > prev, "dispersion must increase with frequency");
            prev = k;
        }
    }

    #[test]
    fn dispersion_reference_value() {
        // Frozen from an independent high-precision evaluation of the
        // dispersion formula at the reference device parameters.
        let p = DeviceParams::default();
        let op = solve_operating_point(&p).unwrap();
        let k = dispersion_k(2.0 * std::f64::consts::PI * 7.5e9, &op, &p).unwrap();
        assert!(rel(k, 7.772_598_027_614_249_4e4) < 1e-9);
        // The per-cell phase advance at this frequency is past the 0.5 rad
        // continuum comfort zone — the model is knowingly marginal there.
        assert!(k * p.cell_length > 0.5);
    }

    #[test]
    fn dispersion_rejects_plasma_frequency() {
        let p = DeviceParams::default();
        let op = solve_operating_point(&p).unwrap();
        let w_plasma = 1.0 / (op.inductance * p.snail_capacitance).sqrt();
        assert!(matches!(
            dispersion_k(w_plasma, &op, &p),
            Err(Error::AbovePlasmaFrequency { .. })
        ));
        // plasma frequency of the reference device ≈ 30.7 GHz
        let f_plasma = w_plasma / (2.0 * std::f64::consts::PI);
        assert!(rel(f_plasma, 30.710_507_391_587_52e9) < 1e-9);
    }

    #[test]
    fn loss_rate_basics() {
        assert_eq!(loss_k_imag(1234.5, 0.0), 0.0);
        assert!(rel(loss_k_imag(2000.0, 2.19e-3), 2.19) < 1e-12);
        // attenuation over a length l
        let k2 = loss_k_imag(2000.0, 2.19e-3);
        let l = 6.09e-3;
        assert!(rel((-k2 * l).exp(), (-2.19_f64 * 6.09e-3).exp()) < 1e-12);
    }

    #[test]
    fn impedance_values() {
        let p = DeviceParams::default();
        let op = solve_operating_point(&p).unwrap();
        assert!(rel(char_impedance(&op, &p), 62.260_632_622_362_976) < 1e-9);

        // synthetic L = Cg gives exactly 1 Ω; quadrupling L doubles Z0
        let mut op2 = op;
        op2.inductance = p.ground_capacitance;
        assert_eq!(char_impedance(&op2, &p), 1.0);
        let z1 = char_impedance(&op, &p);
        op2.inductance = 4.0 * op.inductance;
        assert!(rel(char_impedance(&op2, &p), 2.0 * z1) < 1e-12);
    }

    #[test]
    fn tan_delta_lookup_rules() {
        let m = LossModel::default();
        // pump role ignores power entirely
        assert_eq!(tan_delta_lookup(&m, Tone::Pump, -150.0).unwrap(), 2.19e-3);
        assert_eq!(tan_delta_lookup(&m, Tone::Pump, 0.0).unwrap(), 2.19e-3);
        // clamping below and above the table
        assert_eq!(tan_delta_lookup(&m, Tone::Signal, -200.0).unwrap(), 2.80e-3);
        assert_eq!(tan_delta_lookup(&m, Tone::Signal, -10.0).unwrap(), 2.30e-3);
        // node exactness
        assert_eq!(tan_delta_lookup(&m, Tone::Signal, -105.0).unwrap(), 2.50e-3);
        // linear interpolation at a midpoint
        let mid = tan_delta_lookup(&m, Tone::Idler, -107.5).unwrap();
        assert!(rel(mid, 0.5 * (2.65e-3 + 2.50e-3)) < 1e-12);

        let empty = LossModel {
            pump_tan_delta: 1e-3,
            signal_tan_delta_table: vec![],
        };
        assert!(matches!(
            tan_delta_lookup(&empty, Tone::Signal, -100.0),
            Err(Error::EmptyTable)
        ));
        // pump lookups do not touch the table
        assert!(tan_delta_lookup(&empty, Tone::Pump, -100.0).is_ok());
    }

    #[test]
    fn loss_model_validation() {
        let mut m = LossModel::default();
        assert!(m.validate().is_ok());
        m.signal_tan_delta_table[1].0 = -120.0; // out of order
        assert!(m.validate().is_err());

        let neg = LossModel {
            pump_tan_delta: -1e-3,
            signal_tan_delta_table: vec![(-100.0, 1e-3)],
        };
        assert!(neg.validate().is_err());
    }

    #[test]
    fn params_validation() {
        let mut p = DeviceParams::default();
        assert!(p.validate().is_ok());
        p.critical_current = -1.4e-6;
        assert!(p.validate().is_err());
        let mut p = DeviceParams::default();
        p.junction_ratio = 1.0;
        assert!(p.validate().is_err());
        let mut p = DeviceParams::default();
        p.n_cells = 0;
        assert!(p.validate().is_err());
    }

    #[test]
    fn bracket_is_robust_across_accepted_ratios() {
        // The bracket endpoints sit ±Φ0/2 from the bias, where the
        // large-junction term evaluates to ∓sin(π/3); since |r·sin| < 1 ≤
        // sin(π/3) only for r < sin(π/3) ≈ 0.866 is a sign change
        // guaranteed in the worst case. All physically relevant ratios are
        // far below that; spot-check the edges of the accepted range.
        for r in [0.0, 0.3, 0.6, 0.8] {
            for i in 0..=4 {
                let p = device(r, i as f64 / 4.0 * PHI0);
                assert!(solve_operating_point(&p).is_ok(), "r={r}, i={i}");
            }
        }
    }
}
