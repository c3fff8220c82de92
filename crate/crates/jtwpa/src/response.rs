//! Normalized gain and pump-transmission surfaces.
//!
//! Raw transmissions out of the coupled-mode engine mix amplification with
//! plain dielectric loss. The measurement convention removes the loss
//! baseline by normalizing against reference runs:
//!
//! ```text
//! G        = S̄21^(s)(pump ON)   − S̄21^(s)(pump OFF)     [dB]
//! pump S21 = S̄21^(p)(signal ON) − S̄21^(p)(signal OFF)   [dB]
//! ```
//!
//! The pump-off reference re-propagates the signal alone at the same input
//! power (so the power-dependent loss tangent cancels exactly), and the
//! signal-off reference propagates the pump alone at its set power. A
//! pump-off reference therefore depends on (f_s, P_sig) and is cached per
//! pair; the signal-off reference depends only on the pump settings — with
//! the signal and idler envelopes identically zero, the pump's trajectory
//! is the same whatever signal frequency labels the run — so one cached
//! value serves the whole surface.
//!
//! Sweeps evaluate cells independently and are embarrassingly parallel;
//! results are assembled in grid order regardless of which worker finished
//! first, so a sweep is reproducible bit-for-bit at any worker count.

use std::collections::HashMap;
use std::sync::RwLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cme::{raw_transmissions, FrequencyTriple, IntegratorConfig};
use crate::device::{DeviceModel, LossModel};
use crate::error::{Error, Result};
use crate::units::{dbm_to_watts, ratio_to_db};

/// A rectangular sweep: signal frequency × signal power at one pump
/// setting. Powers are device-input referred, in dBm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepGrid {
    /// Signal frequencies, Hz, strictly increasing.
    pub signal_frequencies: Vec<f64>,
    /// Signal input powers, dBm, strictly increasing.
    pub signal_powers: Vec<f64>,
    /// Pump frequency, Hz.
    pub pump_frequency: f64,
    /// Pump input power, dBm.
    pub pump_power: f64,
}

impl SweepGrid {
    /// Check the documented invariants.
    pub fn validate(&self) -> Result<()> {
        if self.signal_frequencies.is_empty() || self.signal_powers.is_empty() {
            return Err(Error::InvalidParameter(
                "sweep grid needs at least one frequency and one power".into(),
            ));
        }
        if !(self.pump_frequency > 0.0) || !self.pump_frequency.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "pump frequency must be positive and finite, got {}",
                self.pump_frequency
            )));
        }
        if !self.pump_power.is_finite() {
            return Err(Error::InvalidParameter("pump power must be finite".into()));
        }
        for &f in &self.signal_frequencies {
            if !(f > 0.0) || !f.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "signal frequencies must be positive and finite, got {f}"
                )));
            }
            if (f - self.pump_frequency).abs() <= 1e-9 * self.pump_frequency {
                return Err(Error::DegenerateFrequency { f_hz: f });
            }
        }
        if !self
            .signal_frequencies
            .windows(2)
            .all(|w| w[1] > w[0])
        {
            return Err(Error::InvalidParameter(
                "signal frequencies must be strictly increasing".into(),
            ));
        }
        if self.signal_powers.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidParameter(
                "signal powers must be finite".into(),
            ));
        }
        if !self.signal_powers.windows(2).all(|w| w[1] > w[0]) {
            return Err(Error::InvalidParameter(
                "signal powers must be strictly increasing".into(),
            ));
        }
        Ok(())
    }

    /// A copy of this grid with any signal frequency within 1e-9
    /// relative of the pump removed.
    ///
    /// A signal at the pump frequency degenerates the three-tone
    /// bookkeeping (signal, idler, and pump coincide), so config-derived
    /// uniform grids that happen to sample the pump bin are pruned
    /// before a sweep rather than rejected.
    pub fn without_pump_bins(&self) -> SweepGrid {
        let mut pruned = self.clone();
        pruned.signal_frequencies.retain(|&f| {
            (f - self.pump_frequency).abs() > 1e-9 * self.pump_frequency
        });
        if pruned.signal_frequencies.len() != self.signal_frequencies.len() {
            log::info!(
                "dropped {} pump-degenerate signal bin(s) at {:.6e} Hz",
                self.signal_frequencies.len() - pruned.signal_frequencies.len(),
                self.pump_frequency
            );
        }
        pruned
    }
}

/// A completed sweep: matrices indexed [power row][frequency column].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResponseSurface {
    /// The grid the surface was evaluated on.
    pub grid: SweepGrid,
    /// Normalized signal gain, dB.
    pub gain_db: Vec<Vec<f64>>,
    /// Normalized pump transmission, dB.
    pub pump_s21_db: Vec<Vec<f64>>,
}

/// Evaluation context for one pump setting: device, losses, integration
/// controls, and the reference caches.
///
/// Caches hold raw (un-logged) power ratios keyed by the exact bit
/// patterns of the inputs, so a cached normalization is indistinguishable
/// from a freshly computed one. Reads are concurrent; writes take the
/// exclusive lock briefly. Racing workers may both compute the same
/// reference, but the value is a pure function of the key, so whichever
/// write lands is the same number.
pub struct ResponseContext<'a> {
    device: &'a DeviceModel,
    losses: &'a LossModel,
    cfg: IntegratorConfig,
    pump_frequency: f64,
    pump_power_dbm: f64,
    pump_off_refs: RwLock<HashMap<(u64, u64), f64>>,
    signal_off_ref: RwLock<Option<f64>>,
}

impl<'a> ResponseContext<'a> {
    /// Build a context for one pump setting (frequency in Hz, power in
    /// dBm at the device input).
    pub fn new(
        device: &'a DeviceModel,
        losses: &'a LossModel,
        pump_frequency_hz: f64,
        pump_power_dbm: f64,
        cfg: IntegratorConfig,
    ) -> Self {
        ResponseContext {
            device,
            losses,
            cfg,
            pump_frequency: pump_frequency_hz,
            pump_power_dbm,
            pump_off_refs: RwLock::new(HashMap::new()),
            signal_off_ref: RwLock::new(None),
        }
    }

    /// The pump-off signal transmission at (f_s, P_sig), cached.
    fn pump_off_reference(&self, f_signal_hz: f64, p_signal_dbm: f64) -> Result<f64> {
        let key = (f_signal_hz.to_bits(), p_signal_dbm.to_bits());
        if let Some(&v) = self.pump_off_refs.read().expect("cache poisoned").get(&key) {
            return Ok(v);
        }
        let triple = FrequencyTriple::from_hz(f_signal_hz, self.pump_frequency)?;
        let (s_ref, _) = raw_transmissions(
            dbm_to_watts(p_signal_dbm),
            0.0,
            &triple,
            self.device,
            self.losses,
            &self.cfg,
        )?;
        self.pump_off_refs
            .write()
            .expect("cache poisoned")
            .insert(key, s_ref);
        Ok(s_ref)
    }

    /// The signal-off pump transmission, cached once per context.
    ///
    /// The triple only labels the run: with both signal and idler
    /// identically zero their coefficients multiply zeros, so the pump
    /// trajectory — and the adaptive step sequence driving it — is
    /// bit-identical for any valid signal frequency.
    fn signal_off_reference(&self, triple: &FrequencyTriple) -> Result<f64> {
        if let Some(v) = *self.signal_off_ref.read().expect("cache poisoned") {
            return Ok(v);
        }
        let (_, p_ref) = raw_transmissions(
            0.0,
            dbm_to_watts(self.pump_power_dbm),
            triple,
            self.device,
            self.losses,
            &self.cfg,
        )?;
        *self.signal_off_ref.write().expect("cache poisoned") = Some(p_ref);
        Ok(p_ref)
    }

    /// Normalized (signal gain dB, pump transmission dB) at one cell.
    ///
    /// Runs the pump+signal integration plus the two reference runs
    /// (cached after first use) and subtracts in dB.
    pub fn gain_point(&self, f_signal_hz: f64, p_signal_dbm: f64) -> Result<(f64, f64)> {
        let triple = FrequencyTriple::from_hz(f_signal_hz, self.pump_frequency)?;
        let (s_on, p_on) = raw_transmissions(
            dbm_to_watts(p_signal_dbm),
            dbm_to_watts(self.pump_power_dbm),
            &triple,
            self.device,
            self.losses,
            &self.cfg,
        )?;
        let s_ref = self.pump_off_reference(f_signal_hz, p_signal_dbm)?;
        let p_ref = self.signal_off_reference(&triple)?;
        Ok((
            ratio_to_db(s_on) - ratio_to_db(s_ref),
            ratio_to_db(p_on) - ratio_to_db(p_ref),
        ))
    }
}

/// Evaluate a full response surface.
///
/// Cells are independent and evaluated in parallel on the ambient worker
/// pool; matrices are assembled in grid order, so the result does not
/// depend on scheduling. A failing cell aborts the sweep, tagged with its
/// coordinates.
pub fn sweep(
    grid: &SweepGrid,
    device: &DeviceModel,
    losses: &LossModel,
    cfg: &IntegratorConfig,
) -> Result<ResponseSurface> {
    grid.validate()?;
    let ctx = ResponseContext::new(device, losses, grid.pump_frequency, grid.pump_power, *cfg);
    let n_f = grid.signal_frequencies.len();
    let n_p = grid.signal_powers.len();

    let cells: Vec<(f64, f64)> = (0..n_p * n_f)
        .into_par_iter()
        .map(|idx| {
            let p = grid.signal_powers[idx / n_f];
            let f = grid.signal_frequencies[idx % n_f];
            ctx.gain_point(f, p).map_err(|e| Error::SweepCell {
                f_hz: f,
                p_dbm: p,
                source: Box::new(e),
            })
        })
        .collect::<Result<_>>()?;

    let mut gain_db = Vec::with_capacity(n_p);
    let mut pump_s21_db = Vec::with_capacity(n_p);
    for row in 0..n_p {
        let slice = &cells[row * n_f..(row + 1) * n_f];
        gain_db.push(slice.iter().map(|c| c.0).collect());
        pump_s21_db.push(slice.iter().map(|c| c.1).collect());
    }
    Ok(ResponseSurface {
        grid: grid.clone(),
        gain_db,
        pump_s21_db,
    })
}
