//! Command-line front end: argument parsing, artifact emission, and the
//! glue between configuration files and the physics modules.
//!
//! Every subcommand follows the same life cycle: load the run
//! configuration (or fall back to the built-in reference device), make
//! sure the output directory exists, compute, then write artifacts.
//! Data files (CSV/JSON) are deterministic — rerunning the same command
//! on the same config produces byte-identical bytes, which is why run
//! metadata (wall time, worker count) lives in a separate
//! `manifest.json` instead of being embedded in data headers.  If any
//! step fails, artifacts already written by the failing run are deleted
//! so a crash never leaves a half-populated output directory.
//!
//! Frequencies entering any simulation are first snapped to the nearest
//! double that survives the CSV GHz column unchanged (see
//! [`crate::io::canonical_frequency_hz`]); this is what makes emitted
//! files re-ingestable bit-for-bit.  Signal bins that coincide with the
//! pump are pruned before sweeping because the three-wave bookkeeping
//! is singular there (the idler lands on the signal).
//!
//! Exit codes: 0 success, 2 validation/parse errors, 3 numerical
//! failures, 4 I/O errors.  On failure the binary prints a single JSON
//! object to stderr with `kind`, `message`, and `exit_code` fields.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::calibration::{
    fit_dispersion, fit_inductance_flux, fit_loss_tangent, fit_noise_calibration,
    input_line_attenuation, CjTreatment, DispersionFitStage, MagnitudeTrace, NoisePowerTrace,
    PhaseTrace,
};
use crate::cme::{initial_state, integrate, nonlinear_coefficients, FrequencyTriple};
use crate::compression::{
    analytic_gain, analytic_p1db, compression_summary, stability_map, AnalyticGainModel,
    POWER_SMOOTHING_WINDOW,
};
use crate::config::{load_config, RunConfig};
use crate::constants::FLUX_QUANTUM;
use crate::device::DeviceModel;
use crate::error::{Error, Result};
use crate::io::{self, canonical_frequency_hz};
use crate::plot::{heatmap, line_plot, Series};
use crate::reduction::{band_average_profile, iso_power_reconstruct};
use crate::response::{self, SweepGrid};
use crate::units::{dbm_to_watts, ratio_to_db, watts_to_dbm};

/// Traveling-wave parametric amplifier simulation and calibration
/// toolkit.
#[derive(Debug, Parser)]
#[command(name = "jtwpa", version, about)]
pub struct Cli {
    /// Run configuration file; omitted → built-in reference device.
    #[arg(long, global = true, env = "JTWPA_CONFIG")]
    pub config: Option<PathBuf>,

    /// Worker threads for parallel sweeps; omitted → one per core.
    #[arg(long, global = true, env = "JTWPA_WORKERS")]
    pub workers: Option<usize>,

    /// Output directory; overrides the config's `[output] directory`.
    #[arg(long, global = true, env = "JTWPA_OUT")]
    pub out: Option<PathBuf>,

    /// Emit SVG plots alongside data files.
    #[arg(long, global = true, env = "JTWPA_PLOT")]
    pub plot: bool,

    /// RNG seed, used only by synthetic-data generators in the test
    /// suite; recorded in the manifest for provenance.
    #[arg(long, global = true, env = "JTWPA_SEED")]
    pub seed: Option<u64>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Integrate the three coupled envelopes at one (frequency, power)
    /// point and write the trajectory along the line.
    Simulate {
        /// Signal frequency, GHz.
        #[arg(long, default_value_t = 6.0)]
        signal_ghz: f64,
        /// Signal power at the device input, dBm.
        #[arg(long, default_value_t = -110.0, allow_negative_numbers = true)]
        power_dbm: f64,
        /// Number of positions sampled along the device.
        #[arg(long, default_value_t = 256)]
        points: usize,
    },
    /// Run the full gain/pump-transmission surface over the configured
    /// frequency × power grid.
    Sweep,
    /// Sweep, then extract the 1-dB compression summary per frequency.
    P1db {
        /// Odd smoothing window applied to gain-vs-power columns.
        #[arg(long)]
        window: Option<usize>,
    },
    /// Gain versus position along the line at one signal power, for
    /// every configured signal frequency.
    Stability {
        /// Signal power at the device input, dBm.
        #[arg(long, default_value_t = -94.6, allow_negative_numbers = true)]
        power_dbm: f64,
    },
    /// Closed-form pump-depletion gain law at a given small-signal
    /// gain, evaluated over the configured power axis.
    Analytic {
        /// Small-signal power gain, dB.
        #[arg(long, allow_negative_numbers = true)]
        gain_db: f64,
    },
    /// Fit calibration models to measured input tables.
    Fit {
        #[command(subcommand)]
        fit: FitCommand,
    },
    /// Reconstruct iso-power transmission profiles from a raw VNA
    /// power × frequency dataset.
    Reduce {
        /// Raw dataset CSV (P_RT_dBm,f_GHz,re_S21,im_S21,attenuation_dB).
        input: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum FitCommand {
    /// Fit the lattice dispersion model to an unwrapped phase trace
    /// (f_GHz,phase_rad).
    Dispersion {
        input: PathBuf,
        /// Number of unit cells; omitted → value from the config.
        #[arg(long)]
        cells: Option<u32>,
        /// Hold the junction capacitance fixed at this value, fF;
        /// omitted → fixed at the config's value.
        #[arg(long, conflicts_with = "cj_free_initial_ff")]
        cj_ff: Option<f64>,
        /// Float the junction capacitance from this initial guess, fF.
        /// Floating CJ leaves only the products L·Cg and L·CJ
        /// identifiable (the phase model is invariant under L → sL,
        /// C → C/s).
        #[arg(long)]
        cj_free_initial_ff: Option<f64>,
        /// Refit the inductance alone with the phase offset frozen at
        /// this value, rad (requires --cg-ff).
        #[arg(long, requires = "cg_ff", allow_negative_numbers = true)]
        theta0_rad: Option<f64>,
        /// Ground capacitance frozen during an inductance-only refit,
        /// fF (requires --theta0-rad).
        #[arg(long, requires = "theta0_rad")]
        cg_ff: Option<f64>,
        /// External flux the trace was taken at, Φ0.
        #[arg(long, default_value_t = 0.5)]
        flux_phi0: f64,
    },
    /// Fit (junction asymmetry, critical current) to cell inductance
    /// versus flux (flux_Phi0,L_pH).
    Inductance { input: PathBuf },
    /// Fit the dielectric loss tangent to transmission versus k·l
    /// (f_GHz,kl_rad,s21_dB).
    Loss {
        input: PathBuf,
        /// Input power the trace was taken at, dBm (recorded with the
        /// trace).
        #[arg(long, allow_negative_numbers = true)]
        power_dbm: f64,
    },
    /// Fit per-frequency system gain and noise to a thermal power
    /// sweep (f_GHz,T_K,P_W).
    Noise {
        input: PathBuf,
        /// Detection bandwidth Δf, Hz.
        #[arg(long)]
        bandwidth_hz: f64,
        /// Full-chain transmission spectrum (f_GHz,s21_dB); when
        /// given, the input-line attenuation is also written.
        #[arg(long)]
        full_s21: Option<PathBuf>,
    },
}

impl Command {
    /// Short name recorded in the manifest.
    fn name(&self) -> String {
        match self {
            Command::Simulate { .. } => "simulate".into(),
            Command::Sweep => "sweep".into(),
            Command::P1db { .. } => "p1db".into(),
            Command::Stability { .. } => "stability".into(),
            Command::Analytic { .. } => "analytic".into(),
            Command::Fit { fit } => match fit {
                FitCommand::Dispersion { .. } => "fit dispersion".into(),
                FitCommand::Inductance { .. } => "fit inductance".into(),
                FitCommand::Loss { .. } => "fit loss".into(),
                FitCommand::Noise { .. } => "fit noise".into(),
            },
            Command::Reduce { .. } => "reduce".into(),
        }
    }
}

/// Run metadata, segregated from data artifacts so that reruns produce
/// byte-identical data files.
#[derive(Debug, Serialize)]
struct Manifest {
    command: String,
    version: String,
    workers: Option<usize>,
    seed: Option<u64>,
    elapsed_seconds: f64,
    artifacts: Vec<String>,
}

/// Output-directory bookkeeping: records every file written so a
/// failing run can delete its partial products.
struct ArtifactSet {
    dir: PathBuf,
    written: Vec<PathBuf>,
}

impl ArtifactSet {
    fn new(dir: PathBuf) -> Self {
        ArtifactSet {
            dir,
            written: Vec::new(),
        }
    }

    /// Write one artifact through `writer` and record it on success.
    fn emit(&mut self, name: &str, writer: impl FnOnce(&Path) -> Result<()>) -> Result<()> {
        let path = self.dir.join(name);
        writer(&path)?;
        log::info!("wrote {}", path.display());
        self.written.push(path);
        Ok(())
    }

    /// Relative names of everything written, for the manifest.
    fn names(&self) -> Vec<String> {
        self.written
            .iter()
            .map(|p| {
                p.file_name()
                    .map(|n| n.to_string_lossy().into_owned())
                    .unwrap_or_else(|| p.display().to_string())
            })
            .collect()
    }

    /// Delete every artifact this run has produced (failure path).
    fn remove_all(&self) {
        for p in &self.written {
            if let Err(e) = std::fs::remove_file(p) {
                log::warn!("could not remove partial output {}: {e}", p.display());
            } else {
                log::info!("removed partial output {}", p.display());
            }
        }
    }
}

/// Formats enabled for this run.
#[derive(Clone, Copy)]
struct Formats {
    csv: bool,
    json: bool,
    svg: bool,
}

/// Top-level driver: resolve config and output directory, install the
/// worker pool, execute the subcommand, then write the manifest — or
/// clean up on failure.
pub fn run(cli: &Cli) -> Result<()> {
    let cfg = match &cli.config {
        Some(path) => load_config(path)?,
        None => {
            log::info!("no --config given; using the built-in reference device");
            let cfg = RunConfig::default();
            cfg.validate()?;
            cfg
        }
    };

    if let Some(n) = cli.workers {
        if n == 0 {
            return Err(Error::InvalidParameter("--workers must be ≥ 1".into()));
        }
        // The global pool can only be installed once per process; a
        // second call (e.g. library reuse) keeps the first pool.
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            log::warn!("worker pool already installed; --workers {n} ignored ({e})");
        }
    }
    if let Some(seed) = cli.seed {
        log::info!("seed {seed} recorded; only synthetic-data generators consume it");
    }

    let out_dir = cli
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from(&cfg.output.directory));
    std::fs::create_dir_all(&out_dir).map_err(|source| Error::Io {
        path: out_dir.display().to_string(),
        source,
    })?;

    let formats = Formats {
        csv: cfg.output.csv,
        json: cfg.output.json,
        svg: cfg.output.svg || cli.plot,
    };
    if !formats.csv {
        log::warn!("csv output disabled in config; CSV artifacts will be skipped");
    }

    let started = Instant::now();
    let mut artifacts = ArtifactSet::new(out_dir.clone());
    match execute(&cli.command, &cfg, formats, &mut artifacts) {
        Ok(()) => {
            let manifest = Manifest {
                command: cli.command.name(),
                version: env!("CARGO_PKG_VERSION").into(),
                workers: cli.workers,
                seed: cli.seed,
                elapsed_seconds: started.elapsed().as_secs_f64(),
                artifacts: artifacts.names(),
            };
            io::write_json(&out_dir.join("manifest.json"), &manifest)?;
            Ok(())
        }
        Err(e) => {
            artifacts.remove_all();
            Err(e)
        }
    }
}

/// The configured sweep grid with every frequency snapped to its
/// GHz-exact representative and pump-coincident bins removed.
fn prepared_grid(cfg: &RunConfig) -> SweepGrid {
    let grid = SweepGrid {
        signal_frequencies: cfg
            .sweep
            .signal_frequencies
            .iter()
            .map(|&f| canonical_frequency_hz(f))
            .collect(),
        signal_powers: cfg.sweep.signal_powers.clone(),
        pump_frequency: canonical_frequency_hz(cfg.sweep.pump_frequency),
        pump_power: cfg.sweep.pump_power,
    };
    grid.without_pump_bins()
}

fn execute(
    command: &Command,
    cfg: &RunConfig,
    formats: Formats,
    artifacts: &mut ArtifactSet,
) -> Result<()> {
    match command {
        Command::Simulate {
            signal_ghz,
            power_dbm,
            points,
        } => cmd_simulate(cfg, formats, artifacts, *signal_ghz, *power_dbm, *points),
        Command::Sweep => {
            cmd_sweep(cfg, formats, artifacts)?;
            Ok(())
        }
        Command::P1db { window } => cmd_p1db(cfg, formats, artifacts, *window),
        Command::Stability { power_dbm } => cmd_stability(cfg, formats, artifacts, *power_dbm),
        Command::Analytic { gain_db } => cmd_analytic(cfg, formats, artifacts, *gain_db),
        Command::Fit { fit } => cmd_fit(cfg, formats, artifacts, fit),
        Command::Reduce { input } => cmd_reduce(cfg, formats, artifacts, input),
    }
}

fn cmd_simulate(
    cfg: &RunConfig,
    formats: Formats,
    artifacts: &mut ArtifactSet,
    signal_ghz: f64,
    power_dbm: f64,
    points: usize,
) -> Result<()> {
    if points < 2 {
        return Err(Error::InvalidParameter(
            "--points must be at least 2 (entry and exit)".into(),
        ));
    }
    let device = DeviceModel::new(cfg.device)?;
    let f_signal = canonical_frequency_hz(signal_ghz * 1e9);
    let f_pump = canonical_frequency_hz(cfg.sweep.pump_frequency);
    let freqs = FrequencyTriple::from_hz(f_signal, f_pump)?;
    let p_signal = dbm_to_watts(power_dbm);
    let p_pump = device.params.pump_power;
    let coeffs = nonlinear_coefficients(
        &freqs,
        &device.op_point,
        &device.params,
        &cfg.loss,
        p_signal,
        p_pump,
    )?;
    let state0 = initial_state(p_signal, p_pump, &freqs, device.char_impedance());
    let mut icfg = cfg.integrator;
    icfg.dense_output_points = points;
    let states = integrate(&state0, &coeffs, device.length(), &icfg)?;

    if formats.csv {
        artifacts.emit("trajectory.csv", |p| {
            io::write_trajectory_csv(p, &states, device.params.cell_length)
        })?;
    }
    if formats.svg {
        // per-tone power in dBm along the line; the idler starts at
        // zero power, which plots as a gap until it grows
        let z0 = device.char_impedance();
        let tone = |a: num_complex::Complex64, omega: f64| -> f64 {
            watts_to_dbm(a.norm_sqr() * omega * omega / z0)
        };
        let pump: Vec<(f64, f64)> = states
            .iter()
            .map(|s| (s.x, tone(s.a_p, freqs.omega_p)))
            .collect();
        let signal: Vec<(f64, f64)> = states
            .iter()
            .map(|s| (s.x, tone(s.a_s, freqs.omega_s)))
            .collect();
        let idler: Vec<(f64, f64)> = states
            .iter()
            .map(|s| (s.x, tone(s.a_i, freqs.omega_i)))
            .collect();
        artifacts.emit("trajectory.svg", |p| {
            line_plot(
                p,
                "Envelope power along the line",
                "position (m)",
                "power (dBm)",
                &[
                    Series {
                        label: "pump",
                        points: &pump,
                    },
                    Series {
                        label: "signal",
                        points: &signal,
                    },
                    Series {
                        label: "idler",
                        points: &idler,
                    },
                ],
            )
        })?;
    }
    Ok(())
}

fn cmd_sweep(
    cfg: &RunConfig,
    formats: Formats,
    artifacts: &mut ArtifactSet,
) -> Result<crate::response::ResponseSurface> {
    let device = DeviceModel::new(cfg.device)?;
    let grid = prepared_grid(cfg);
    let surface = response::sweep(&grid, &device, &cfg.loss, &cfg.integrator)?;

    if formats.csv {
        artifacts.emit("sweep.csv", |p| io::write_surface_csv(p, &surface))?;
    }
    if formats.json {
        artifacts.emit("sweep.json", |p| io::write_json(p, &surface))?;
    }
    if formats.svg {
        let f_ghz: Vec<f64> = surface
            .grid
            .signal_frequencies
            .iter()
            .map(|f| f / 1e9)
            .collect();
        artifacts.emit("sweep_gain.svg", |p| {
            heatmap(
                p,
                "Signal gain",
                "signal frequency (GHz)",
                "signal power (dBm)",
                &f_ghz,
                &surface.grid.signal_powers,
                &surface.gain_db,
            )
        })?;
        artifacts.emit("sweep_pump.svg", |p| {
            heatmap(
                p,
                "Pump transmission",
                "signal frequency (GHz)",
                "signal power (dBm)",
                &f_ghz,
                &surface.grid.signal_powers,
                &surface.pump_s21_db,
            )
        })?;
    }
    Ok(surface)
}

fn cmd_p1db(
    cfg: &RunConfig,
    formats: Formats,
    artifacts: &mut ArtifactSet,
    window: Option<usize>,
) -> Result<()> {
    let surface = cmd_sweep(cfg, formats, artifacts)?;
    let summary = compression_summary(&surface, window.unwrap_or(POWER_SMOOTHING_WINDOW))?;

    if formats.csv {
        artifacts.emit("summary.csv", |p| io::write_summary_csv(p, &summary))?;
    }
    if formats.json {
        artifacts.emit("summary.json", |p| io::write_json(p, &summary))?;
    }
    if formats.svg {
        let mut p1db_pts = Vec::new();
        let mut pout_pts = Vec::new();
        let mut gain_pts = Vec::new();
        for (j, &f) in summary.frequencies.iter().enumerate() {
            let f_ghz = f / 1e9;
            if let Some(p1) = summary.p1db_dbm[j] {
                p1db_pts.push((f_ghz, p1));
            }
            if let Some(po) = summary.pout_at_p1db_dbm[j] {
                pout_pts.push((f_ghz, po));
            }
            gain_pts.push((f_ghz, summary.g_lin_db[j]));
        }
        artifacts.emit("summary.svg", |p| {
            line_plot(
                p,
                "1-dB compression across the band",
                "signal frequency (GHz)",
                "power (dBm)",
                &[
                    Series {
                        label: "P1dB (input)",
                        points: &p1db_pts,
                    },
                    Series {
                        label: "Pout at P1dB",
                        points: &pout_pts,
                    },
                ],
            )
        })?;
        artifacts.emit("small_signal_gain.svg", |p| {
            line_plot(
                p,
                "Small-signal gain",
                "signal frequency (GHz)",
                "gain (dB)",
                &[Series {
                    label: "G_lin",
                    points: &gain_pts,
                }],
            )
        })?;
    }
    Ok(())
}

fn cmd_stability(
    cfg: &RunConfig,
    formats: Formats,
    artifacts: &mut ArtifactSet,
    power_dbm: f64,
) -> Result<()> {
    let device = DeviceModel::new(cfg.device)?;
    let grid = prepared_grid(cfg);
    let map = stability_map(
        &grid.signal_frequencies,
        grid.pump_frequency,
        power_dbm,
        &device,
        &cfg.loss,
        &cfg.integrator,
    )?;

    if formats.csv {
        artifacts.emit("stability.csv", |p| io::write_stability_csv(p, &map))?;
    }
    if formats.svg {
        let f_ghz: Vec<f64> = map.frequencies.iter().map(|f| f / 1e9).collect();
        let cells: Vec<f64> = map.positions.iter().map(|&c| c as f64).collect();
        artifacts.emit("stability.svg", |p| {
            heatmap(
                p,
                "Gain versus position",
                "signal frequency (GHz)",
                "cell index",
                &f_ghz,
                &cells,
                &map.gain_db,
            )
        })?;
    }
    Ok(())
}

#[derive(Debug, Serialize)]
struct AnalyticReport {
    g_lin_db: f64,
    pump_power_dbm: f64,
    p1db_dbm: f64,
}

fn cmd_analytic(
    cfg: &RunConfig,
    formats: Formats,
    artifacts: &mut ArtifactSet,
    gain_db: f64,
) -> Result<()> {
    let model = AnalyticGainModel::from_db(gain_db, cfg.sweep.pump_power);
    let powers = &cfg.sweep.signal_powers;
    let gains: Vec<f64> = powers
        .iter()
        .map(|&p| ratio_to_db(analytic_gain(&model, dbm_to_watts(p))))
        .collect();
    let report = AnalyticReport {
        g_lin_db: gain_db,
        pump_power_dbm: cfg.sweep.pump_power,
        p1db_dbm: analytic_p1db(&model),
    };
    log::info!(
        "depletion-law 1-dB point at {:.3} dBm for {gain_db} dB small-signal gain",
        report.p1db_dbm
    );

    if formats.csv {
        artifacts.emit("analytic.csv", |p| {
            io::write_analytic_csv(p, powers, &gains)
        })?;
    }
    if formats.json {
        artifacts.emit("analytic.json", |p| io::write_json(p, &report))?;
    }
    if formats.svg {
        let pts: Vec<(f64, f64)> = powers.iter().copied().zip(gains.iter().copied()).collect();
        artifacts.emit("analytic.svg", |p| {
            line_plot(
                p,
                "Pump-depletion gain law",
                "signal power (dBm)",
                "gain (dB)",
                &[Series {
                    label: "analytic gain",
                    points: &pts,
                }],
            )
        })?;
    }
    Ok(())
}

fn cmd_fit(
    cfg: &RunConfig,
    formats: Formats,
    artifacts: &mut ArtifactSet,
    fit: &FitCommand,
) -> Result<()> {
    if !formats.json {
        log::warn!("json output disabled in config; fit results will not be written");
    }
    match fit {
        FitCommand::Dispersion {
            input,
            cells,
            cj_ff,
            cj_free_initial_ff,
            theta0_rad,
            cg_ff,
            flux_phi0,
        } => {
            let (frequencies, unwrapped_phase) = io::read_phase_csv(input)?;
            let trace = PhaseTrace {
                frequencies,
                unwrapped_phase,
                external_flux: flux_phi0 * FLUX_QUANTUM,
            };
            let cj = match (cj_ff, cj_free_initial_ff) {
                (Some(v), None) => CjTreatment::Fixed(v * 1e-15),
                (None, Some(v)) => CjTreatment::Free { initial: v * 1e-15 },
                (None, None) => CjTreatment::Fixed(cfg.device.snail_capacitance),
                (Some(_), Some(_)) => unreachable!("clap conflicts_with forbids this"),
            };
            let stage = match (theta0_rad, cg_ff) {
                (Some(t), Some(c)) => DispersionFitStage::InductanceOnly {
                    theta0: *t,
                    cg: c * 1e-15,
                },
                _ => DispersionFitStage::Joint,
            };
            let n_cells = cells.unwrap_or(cfg.device.n_cells);
            let result = fit_dispersion(&trace, n_cells, cj, stage)?;
            if formats.json {
                artifacts.emit("fit_dispersion.json", |p| io::write_json(p, &result))?;
            }
        }
        FitCommand::Inductance { input } => {
            let (fluxes, inductances) = io::read_inductance_csv(input)?;
            let result = fit_inductance_flux(&fluxes, &inductances)?;
            if formats.json {
                artifacts.emit("fit_inductance.json", |p| io::write_json(p, &result))?;
            }
        }
        FitCommand::Loss { input, power_dbm } => {
            let (frequencies, k_times_l, s21_db) = io::read_loss_fit_csv(input)?;
            let trace = MagnitudeTrace {
                frequencies,
                s21_db,
                input_power: *power_dbm,
            };
            let result = fit_loss_tangent(&trace, &k_times_l)?;
            if formats.json {
                artifacts.emit("fit_loss.json", |p| io::write_json(p, &result))?;
            }
        }
        FitCommand::Noise {
            input,
            bandwidth_hz,
            full_s21,
        } => {
            let (frequencies, source_temperatures, measured_power) = io::read_noise_csv(input)?;
            let trace = NoisePowerTrace {
                frequencies,
                source_temperatures,
                measured_power,
                bandwidth: *bandwidth_hz,
            };
            let results = fit_noise_calibration(&trace)?;
            if formats.json {
                artifacts.emit("fit_noise.json", |p| io::write_json(p, &results))?;
            }
            if let Some(full_path) = full_s21 {
                let (full_freqs, full_db) = io::read_spectrum_csv(full_path, "f_GHz,s21_dB")?;
                if full_freqs != trace.frequencies {
                    return Err(Error::GridMismatch(
                        "full-transmission frequency axis differs from the noise sweep".into(),
                    ));
                }
                let g_sys: Vec<f64> = results
                    .iter()
                    .map(|r| {
                        r.value("G_sys").ok_or_else(|| {
                            Error::InvalidParameter("noise fit is missing G_sys".into())
                        })
                    })
                    .collect::<Result<_>>()?;
                let attenuation = input_line_attenuation(&full_db, &g_sys)?;
                if formats.csv {
                    artifacts.emit("attenuation.csv", |p| {
                        io::write_spectrum_csv(p, "f_GHz,attenuation_dB", &full_freqs, &attenuation)
                    })?;
                }
            }
        }
    }
    Ok(())
}

fn cmd_reduce(
    cfg: &RunConfig,
    formats: Formats,
    artifacts: &mut ArtifactSet,
    input: &Path,
) -> Result<()> {
    let raw = io::read_raw_vna_csv(input)?;
    let profiles = iso_power_reconstruct(&raw)?;
    log::info!(
        "reconstructed {} iso-power profiles over {} frequencies",
        profiles.len(),
        raw.frequencies.len()
    );

    if formats.csv {
        artifacts.emit("reduced.csv", |p| {
            io::write_profiles_csv(p, &raw.frequencies, &profiles)
        })?;
    }
    if formats.svg {
        // display-side band averaging: pump bin removed, 11-point
        // moving average on the dB magnitude (the CSV stays exact)
        let pump_f = cfg.sweep.pump_frequency;
        let mut series_data: Vec<(String, Vec<(f64, f64)>)> = Vec::new();
        for prof in &profiles {
            let mag_db: Vec<f64> = prof.s21.iter().map(|s| ratio_to_db(s.norm_sqr())).collect();
            let (f, v) = if raw.frequencies.len() >= 12 {
                band_average_profile(&raw.frequencies, &mag_db, pump_f)?
            } else {
                log::warn!("too few frequency points for band averaging; plotting raw profiles");
                (raw.frequencies.clone(), mag_db)
            };
            let pts: Vec<(f64, f64)> = f.iter().map(|f| f / 1e9).zip(v).collect();
            series_data.push((format!("{:.1} dBm", prof.device_input_power), pts));
        }
        let series: Vec<Series<'_>> = series_data
            .iter()
            .map(|(label, pts)| Series {
                label,
                points: pts,
            })
            .collect();
        artifacts.emit("reduced.svg", |p| {
            line_plot(
                p,
                "Iso-power transmission profiles (band-averaged)",
                "frequency (GHz)",
                "|S21|² (dB)",
                &series,
            )
        })?;
    }
    Ok(())
}
