//! Four-wave-mixing coupled-mode engine.
//!
//! Three flux-amplitude envelopes ride the transmission line: a strong
//! pump at ω_p and a signal/idler pair tied to it by energy conservation,
//! ω_s + ω_i = 2ω_p. Expanding the junction nonlinearity to quartic order
//! and keeping only phase-matched products leaves three coupled first-order
//! equations in position x:
//!
//! ```text
//! dA_s/dx = i(α_sp|A_p|² + α_ss|A_s|² + α_si|A_i|²)·A_s
//!           + i·κ_si·A_p²·A_i*·e^{+iΔk_l·x}  −  k_s''·A_s
//! dA_i/dx = i(α_ip|A_p|² + α_ii|A_i|² + α_is|A_s|²)·A_i
//!           + i·κ_is·A_p²·A_s*·e^{+iΔk_l·x}  −  k_i''·A_i
//! dA_p/dx = i(α_pp|A_p|² + α_ps|A_s|² + α_pi|A_i|²)·A_p
//!           + i·κ_psi·A_s·A_i·A_p*·e^{−iΔk_l·x} − k_p''·A_p
//! ```
//!
//! with Δk_l = 2k_p − k_s − k_i the linear phase mismatch. The α terms are
//! self- and cross-Kerr phase rotations; the κ terms exchange photons
//! pairwise (two pump photons ↔ one signal + one idler); the k'' terms are
//! dielectric damping. All α and κ carry the sign of the quartic stiffness
//! ratio ξ = 6γ̃/α̃³, so a flux bias that reverses the Kerr (ξ < 0) flips
//! every nonlinear coefficient at once.
//!
//! The shared prefactor is ξ·a⁴/(C_g·I_c²·L³); each coefficient then
//! scales with powers of the participating wavevectors:
//!
//! ```text
//! α_jm  = pref·k_m²·k_j³ / (8·ω_j²)          (cross-Kerr, m ≠ j)
//! α_jj  = pref·k_j⁵      / (16·ω_j²)         (self-Kerr = half the m→j cross)
//! κ_si  = pref·k_s·k_i·k_p²·(2k_p − k_i) / (16·ω_s²)
//! κ_is  = pref·k_s·k_i·k_p²·(2k_p − k_s) / (16·ω_i²)
//! κ_psi = pref·k_s·k_i·k_p²·(k_s + k_i − k_p) / (8·ω_p²)
//! ```
//!
//! Sign conventions worth pinning: the mixing exponentials use the *linear*
//! mismatch Δk_l only — the power-dependent part of the mismatch emerges
//! dynamically from the α phase rotations rather than being folded into the
//! exponent. Losses damp each envelope independently and do not enter the
//! coupling products. Both injected tones start with zero phase; the idler
//! starts at exactly zero.
//!
//! Amplitudes are fluxes (weber): A_j(0) = √(P_j·Z0)/ω_j maps an injected
//! on-line power to a flux amplitude, which for picowatt pumps lands near
//! 10⁻¹⁶ Wb — hence the very small default absolute tolerance.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::device::{
    char_impedance, dispersion_k, loss_k_imag, tan_delta_lookup, DeviceModel, DeviceParams,
    LossModel, SnailOperatingPoint, Tone,
};
use crate::error::{Error, Result};
use crate::ode::{integrate_grid, Rk45Options};
use crate::units::watts_to_dbm;

/// Relative window around the pump inside which a signal frequency is
/// rejected as degenerate (the idler would coincide with the signal and
/// the three-wave description collapses).
const DEGENERACY_REL_WINDOW: f64 = 1e-9;

/// The three angular frequencies of one mixing process, rad/s.
///
/// Energy conservation fixes the idler: ω_i = 2ω_p − ω_s.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrequencyTriple {
    /// Pump angular frequency, rad/s.
    pub omega_p: f64,
    /// Signal angular frequency, rad/s.
    pub omega_s: f64,
    /// Idler angular frequency 2ω_p − ω_s, rad/s.
    pub omega_i: f64,
}

impl FrequencyTriple {
    /// Build the triple from signal and pump angular frequencies,
    /// deriving the idler from energy conservation.
    ///
    /// Rejects non-positive frequencies, a signal at or above 2ω_p (the
    /// idler would be non-positive), and a signal within a relative window
    /// of 10⁻⁹ of the pump (degenerate operation).
    pub fn new(omega_s: f64, omega_p: f64) -> Result<Self> {
        if !(omega_p > 0.0) || !omega_p.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "pump angular frequency must be positive and finite, got {omega_p}"
            )));
        }
        if !(omega_s > 0.0) || !omega_s.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "signal angular frequency must be positive and finite, got {omega_s}"
            )));
        }
        if omega_s >= 2.0 * omega_p {
            return Err(Error::InvalidParameter(format!(
                "signal angular frequency {omega_s} must lie below twice the pump {omega_p}"
            )));
        }
        if (omega_s - omega_p).abs() <= DEGENERACY_REL_WINDOW * omega_p {
            return Err(Error::DegenerateFrequency {
                f_hz: omega_s / (2.0 * std::f64::consts::PI),
            });
        }
        Ok(FrequencyTriple {
            omega_p,
            omega_s,
            omega_i: 2.0 * omega_p - omega_s,
        })
    }

    /// Convenience constructor from plain frequencies in Hz.
    pub fn from_hz(f_signal: f64, f_pump: f64) -> Result<Self> {
        let two_pi = 2.0 * std::f64::consts::PI;
        Self::new(two_pi * f_signal, two_pi * f_pump)
    }
}

/// Every coefficient of the three coupled-mode equations at one operating
/// point: Kerr rotations, mixing strengths, linear mismatch, and loss
/// rates. α and κ are in 1/(m·Wb²); Δk_l in rad/m; losses in Np/m.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonlinearCoefficients {
    /// Pump self-Kerr.
    pub alpha_pp: f64,
    /// Signal self-Kerr.
    pub alpha_ss: f64,
    /// Idler self-Kerr.
    pub alpha_ii: f64,
    /// Cross-Kerr of the signal from pump power.
    pub alpha_sp: f64,
    /// Cross-Kerr of the idler from pump power.
    pub alpha_ip: f64,
    /// Cross-Kerr of the signal from idler power.
    pub alpha_si: f64,
    /// Cross-Kerr of the idler from signal power.
    pub alpha_is: f64,
    /// Cross-Kerr of the pump from signal power.
    pub alpha_ps: f64,
    /// Cross-Kerr of the pump from idler power.
    pub alpha_pi: f64,
    /// Mixing strength feeding the signal (A_p²·A_i*).
    pub kappa_si: f64,
    /// Mixing strength feeding the idler (A_p²·A_s*).
    pub kappa_is: f64,
    /// Mixing strength depleting the pump (A_s·A_i·A_p*).
    pub kappa_psi: f64,
    /// Linear phase mismatch 2k_p − k_s − k_i, rad/m.
    pub delta_k_l: f64,
    /// Pump amplitude-loss rate k_p'', Np/m.
    pub loss_p: f64,
    /// Signal amplitude-loss rate k_s'', Np/m.
    pub loss_s: f64,
    /// Idler amplitude-loss rate k_i'', Np/m.
    pub loss_i: f64,
}

/// The three complex flux amplitudes at one position along the line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvelopeState {
    /// Position along the line, m.
    pub x: f64,
    /// Pump flux amplitude, Wb.
    pub a_p: Complex64,
    /// Signal flux amplitude, Wb.
    pub a_s: Complex64,
    /// Idler flux amplitude, Wb.
    pub a_i: Complex64,
}

/// Integration controls for one propagation run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    /// Relative tolerance of the embedded error estimate.
    pub rel_tol: f64,
    /// Absolute tolerance, Wb (amplitudes sit near 10⁻¹⁶ Wb).
    pub abs_tol: f64,
    /// Maximum step size, m; `INFINITY` disables the cap.
    pub max_step: f64,
    /// Number of recorded positions including both ends (≥ 2).
    pub dense_output_points: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            rel_tol: 1e-9,
            abs_tol: 1e-24,
            max_step: f64::INFINITY,
            dense_output_points: 2,
        }
    }
}

impl IntegratorConfig {
    /// Check the documented invariants.
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) || !(self.abs_tol > 0.0) {
            return Err(Error::InvalidParameter(
                "integrator tolerances must be positive".into(),
            ));
        }
        if !(self.max_step > 0.0) {
            return Err(Error::InvalidParameter(
                "integrator max_step must be positive".into(),
            ));
        }
        if self.dense_output_points < 2 {
            return Err(Error::InvalidParameter(
                "dense_output_points must be at least 2".into(),
            ));
        }
        Ok(())
    }
}

/// Evaluate all coupled-mode coefficients at one operating point.
///
/// The powers select the loss tangents: the pump uses its single fitted
/// value, while signal and idler resolve the power-dependent table at the
/// injected signal power (the idler grows from zero and tracks the
/// signal). Frequencies above the plasma cutoff propagate the dispersion
/// error.
pub fn nonlinear_coefficients(
    freqs: &FrequencyTriple,
    op_point: &SnailOperatingPoint,
    params: &DeviceParams,
    losses: &LossModel,
    p_signal: f64,
    p_pump: f64,
) -> Result<NonlinearCoefficients> {
    let k_s = dispersion_k(freqs.omega_s, op_point, params)?;
    let k_i = dispersion_k(freqs.omega_i, op_point, params)?;
    let k_p = dispersion_k(freqs.omega_p, op_point, params)?;
    let (w_s, w_i, w_p) = (freqs.omega_s, freqs.omega_i, freqs.omega_p);

    let a = params.cell_length;
    let l = op_point.inductance;
    let pref = op_point.kerr_scale * a.powi(4)
        / (params.ground_capacitance * params.critical_current.powi(2) * l.powi(3));

    let cross = |k_j: f64, k_m: f64, w_j: f64| pref * k_m * k_m * k_j.powi(3) / (8.0 * w_j * w_j);
    let slf = |k_j: f64, w_j: f64| pref * k_j.powi(5) / (16.0 * w_j * w_j);

    let tan_p = tan_delta_lookup(losses, Tone::Pump, watts_to_dbm(p_pump))?;
    let tan_s = tan_delta_lookup(losses, Tone::Signal, watts_to_dbm(p_signal))?;
    let tan_i = tan_delta_lookup(losses, Tone::Idler, watts_to_dbm(p_signal))?;

    Ok(NonlinearCoefficients {
        alpha_pp: slf(k_p, w_p),
        alpha_ss: slf(k_s, w_s),
        alpha_ii: slf(k_i, w_i),
        alpha_sp: cross(k_s, k_p, w_s),
        alpha_ip: cross(k_i, k_p, w_i),
        alpha_si: cross(k_s, k_i, w_s),
        alpha_is: cross(k_i, k_s, w_i),
        alpha_ps: cross(k_p, k_s, w_p),
        alpha_pi: cross(k_p, k_i, w_p),
        kappa_si: pref * k_s * k_i * k_p * k_p * (2.0 * k_p - k_i) / (16.0 * w_s * w_s),
        kappa_is: pref * k_s * k_i * k_p * k_p * (2.0 * k_p - k_s) / (16.0 * w_i * w_i),
        kappa_psi: pref * k_s * k_i * k_p * k_p * (k_s + k_i - k_p) / (8.0 * w_p * w_p),
        delta_k_l: 2.0 * k_p - k_s - k_i,
        loss_p: loss_k_imag(k_p, tan_p),
        loss_s: loss_k_imag(k_s, tan_s),
        loss_i: loss_k_imag(k_i, tan_i),
    })
}

/// Flux amplitudes at the input: A_{s,p}(0) = √(P·Z0)/ω with zero phase,
/// idler exactly zero.
pub fn initial_state(p_signal: f64, p_pump: f64, freqs: &FrequencyTriple, z0: f64) -> EnvelopeState {
    assert!(p_signal >= 0.0 && p_pump >= 0.0, "powers must be non-negative");
    EnvelopeState {
        x: 0.0,
        a_p: Complex64::new((p_pump * z0).sqrt() / freqs.omega_p, 0.0),
        a_s: Complex64::new((p_signal * z0).sqrt() / freqs.omega_s, 0.0),
        a_i: Complex64::new(0.0, 0.0),
    }
}

/// Propagate the three envelopes from `state0` (at x = 0) to x = `length`,
/// recording `cfg.dense_output_points` evenly spaced positions including
/// both ends.
pub fn integrate(
    state0: &EnvelopeState,
    coeffs: &NonlinearCoefficients,
    length: f64,
    cfg: &IntegratorConfig,
) -> Result<Vec<EnvelopeState>> {
    cfg.validate()?;
    if !(length > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "device length must be positive, got {length}"
        )));
    }
    if state0.x != 0.0 {
        return Err(Error::InvalidParameter(format!(
            "initial state must sit at x = 0, got {}",
            state0.x
        )));
    }

    let n = cfg.dense_output_points;
    let xs: Vec<f64> = (0..n)
        .map(|j| length * (j as f64 / (n - 1) as f64))
        .collect();

    let y0 = [
        state0.a_p.re,
        state0.a_p.im,
        state0.a_s.re,
        state0.a_s.im,
        state0.a_i.re,
        state0.a_i.im,
    ];
    let c = *coeffs;
    let rhs = move |x: f64, y: &[f64; 6], dy: &mut [f64; 6]| {
        let a_p = Complex64::new(y[0], y[1]);
        let a_s = Complex64::new(y[2], y[3]);
        let a_i = Complex64::new(y[4], y[5]);
        let np = a_p.norm_sqr();
        let ns = a_s.norm_sqr();
        let ni = a_i.norm_sqr();
        // e^{+iΔk_l·x} for the signal/idler mixing, conjugated for the pump
        let phase = Complex64::from_polar(1.0, c.delta_k_l * x);
        let i = Complex64::I;

        let d_p = i * (c.alpha_pp * np + c.alpha_ps * ns + c.alpha_pi * ni) * a_p
            + i * c.kappa_psi * a_s * a_i * a_p.conj() * phase.conj()
            - c.loss_p * a_p;
        let d_s = i * (c.alpha_sp * np + c.alpha_ss * ns + c.alpha_si * ni) * a_s
            + i * c.kappa_si * a_p * a_p * a_i.conj() * phase
            - c.loss_s * a_s;
        let d_i = i * (c.alpha_ip * np + c.alpha_ii * ni + c.alpha_is * ns) * a_i
            + i * c.kappa_is * a_p * a_p * a_s.conj() * phase
            - c.loss_i * a_i;

        dy[0] = d_p.re;
        dy[1] = d_p.im;
        dy[2] = d_s.re;
        dy[3] = d_s.im;
        dy[4] = d_i.re;
        dy[5] = d_i.im;
    };

    let opts = Rk45Options {
        rel_tol: cfg.rel_tol,
        abs_tol: cfg.abs_tol,
        max_step: cfg.max_step,
    };
    let ys = integrate_grid(rhs, y0, &xs, &opts)?;
    Ok(xs
        .iter()
        .zip(&ys)
        .map(|(&x, y)| EnvelopeState {
            x,
            a_p: Complex64::new(y[0], y[1]),
            a_s: Complex64::new(y[2], y[3]),
            a_i: Complex64::new(y[4], y[5]),
        })
        .collect())
}

/// Un-normalized power transmissions of signal and pump through the full
/// device: (|A_s(l)/A_s(0)|², |A_p(l)/A_p(0)|²).
///
/// When a tone is injected with zero power its ratio is *defined* as the
/// loss-only transmission e^{−2k''l}, so reference runs (pump off or
/// signal off) always produce a well-defined normalization.
pub fn raw_transmissions(
    p_signal: f64,
    p_pump: f64,
    freqs: &FrequencyTriple,
    device: &DeviceModel,
    losses: &LossModel,
    cfg: &IntegratorConfig,
) -> Result<(f64, f64)> {
    let coeffs = nonlinear_coefficients(
        freqs,
        &device.op_point,
        &device.params,
        losses,
        p_signal,
        p_pump,
    )?;
    let z0 = char_impedance(&device.op_point, &device.params);
    let state0 = initial_state(p_signal, p_pump, freqs, z0);
    let length = device.length();
    let states = integrate(&state0, &coeffs, length, cfg)?;
    let last = states.last().expect("integration returns at least two states");

    let ratio = |a_in: Complex64, a_out: Complex64, loss: f64| {
        if a_in.norm_sqr() > 0.0 {
            a_out.norm_sqr() / a_in.norm_sqr()
        } else {
            (-2.0 * loss * length).exp()
        }
    };
    Ok((
        ratio(state0.a_s, last.a_s, coeffs.loss_s),
        ratio(state0.a_p, last.a_p, coeffs.loss_p),
    ))
}
