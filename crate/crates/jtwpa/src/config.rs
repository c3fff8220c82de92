//! Run configuration: a flat, sectioned key=value text format with
//! explicit unit suffixes.
//!
//! A config file describes one complete run — device geometry, loss
//! model, pump drive, sweep grid, integrator controls, and output
//! destinations — in a diff-friendly plain-text form:
//!
//! ```text
//! [device]
//! n_cells = 700
//! cell_length = 8.7 um
//! external_flux = 0.5 Phi0
//!
//! [pump]
//! frequency = 7.5 GHz
//! power = -78.4 dBm
//! ```
//!
//! Every dimensioned value carries an explicit unit suffix (`GHz`,
//! `dBm`, `fF`, `uA`, `um`, `Phi0`, …) and is converted to SI base units
//! at load time; a missing, unknown, or wrong-dimension suffix is a
//! [`Error::UnitError`] with the offending line. Unknown keys and
//! sections are rejected rather than ignored, so typos fail loudly.
//! Structural problems (no `=`, malformed numbers, duplicate keys)
//! surface as [`Error::ParseError`] with line and column.
//!
//! Omitted keys and whole omitted sections fall back to the documented
//! defaults — the bundled reference device (700-cell SNAIL chain at half
//! a flux quantum, 7.5 GHz / −78.4 dBm pump, the fitted loss table, a
//! 4–11 GHz × −115..−90 dBm sweep) — and every applied default is echoed
//! to the run log. [`serialize_config`] writes a loaded configuration
//! back out in SI base units with shortest-round-trip number formatting,
//! so load → serialize → load reproduces the exact same [`RunConfig`]
//! bit for bit.
//!
//! `#` starts a comment anywhere on a line. Sweep axes are uniform grids
//! given as start/stop/points; the loaded [`SweepGrid`] materializes
//! them into explicit sample vectors.

use crate::cme::IntegratorConfig;
use crate::constants::FLUX_QUANTUM;
use crate::device::{DeviceParams, LossModel};
use crate::error::{Error, Result};
use crate::response::SweepGrid;
use crate::units::dbm_to_watts;
use serde::{Deserialize, Serialize};
use std::path::Path;

/// Where and in which formats artifacts are written.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputConfig {
    /// Output directory; created on demand by the command runner.
    pub directory: String,
    /// Emit CSV tables.
    pub csv: bool,
    /// Emit JSON documents.
    pub json: bool,
    /// Emit SVG plots.
    pub svg: bool,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            directory: "out".into(),
            csv: true,
            json: true,
            svg: false,
        }
    }
}

/// One complete, validated run description.
///
/// The pump drive appears twice by construction: `sweep.pump_frequency`
/// and `sweep.pump_power` (dBm) hold the `[pump]` section, and
/// `device.pump_power` holds the same power converted to watts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub device: DeviceParams,
    pub loss: LossModel,
    pub sweep: SweepGrid,
    pub integrator: IntegratorConfig,
    pub output: OutputConfig,
}

impl Default for RunConfig {
    /// The bundled reference run (identical to `configs/reference.cfg`).
    fn default() -> Self {
        let pump_frequency = 7.5e9;
        let pump_power_dbm = -78.4;
        RunConfig {
            device: DeviceParams::default(),
            loss: LossModel::default(),
            sweep: SweepGrid {
                signal_frequencies: linspace(4.0e9, 11.0e9, 101),
                signal_powers: linspace(-115.0, -90.0, 20),
                pump_frequency,
                pump_power: pump_power_dbm,
            },
            integrator: IntegratorConfig::default(),
            output: OutputConfig::default(),
        }
    }
}

impl RunConfig {
    /// Check every block's documented invariants.
    ///
    /// The sweep grid is validated with pump-degenerate signal bins
    /// pruned: a uniform config grid may legitimately sample the pump
    /// frequency, and the sweep executor drops that bin rather than
    /// refusing the run.
    pub fn validate(&self) -> Result<()> {
        self.device.validate()?;
        self.loss.validate()?;
        self.sweep.without_pump_bins().validate()?;
        self.integrator.validate()?;
        if self.output.directory.is_empty() {
            return Err(Error::InvalidParameter(
                "output directory must not be empty".into(),
            ));
        }
        Ok(())
    }
}

/// Uniform grid of `n` samples from `a` to `b` inclusive (endpoints
/// exact; `n = 1` yields just `a`).
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..n)
            .map(|i| {
                if i == n - 1 {
                    b
                } else {
                    a + (b - a) * i as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}

/// Physical dimension a config key expects.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Dimension {
    Frequency,
    PowerDbm,
    Capacitance,
    Current,
    Length,
    Flux,
    Inductance,
    Dimensionless,
}

impl Dimension {
    fn describe(self) -> &'static str {
        match self {
            Dimension::Frequency => "a frequency (Hz, kHz, MHz, GHz)",
            Dimension::PowerDbm => "a power in dBm",
            Dimension::Capacitance => "a capacitance (F, pF, fF)",
            Dimension::Current => "a current (A, mA, uA, nA)",
            Dimension::Length => "a length (m, mm, um, nm)",
            Dimension::Flux => "a flux (Wb, Phi0)",
            Dimension::Inductance => "an inductance (H, nH, pH)",
            Dimension::Dimensionless => "a bare number",
        }
    }
}

/// (suffix, dimension, scale to SI base units).
const UNIT_TABLE: &[(&str, Dimension, f64)] = &[
    ("Hz", Dimension::Frequency, 1.0),
    ("kHz", Dimension::Frequency, 1e3),
    ("MHz", Dimension::Frequency, 1e6),
    ("GHz", Dimension::Frequency, 1e9),
    ("dBm", Dimension::PowerDbm, 1.0),
    ("F", Dimension::Capacitance, 1.0),
    ("pF", Dimension::Capacitance, 1e-12),
    ("fF", Dimension::Capacitance, 1e-15),
    ("A", Dimension::Current, 1.0),
    ("mA", Dimension::Current, 1e-3),
    ("uA", Dimension::Current, 1e-6),
    ("nA", Dimension::Current, 1e-9),
    ("m", Dimension::Length, 1.0),
    ("mm", Dimension::Length, 1e-3),
    ("um", Dimension::Length, 1e-6),
    ("nm", Dimension::Length, 1e-9),
    ("Wb", Dimension::Flux, 1.0),
    ("Phi0", Dimension::Flux, FLUX_QUANTUM),
    ("H", Dimension::Inductance, 1.0),
    ("nH", Dimension::Inductance, 1e-9),
    ("pH", Dimension::Inductance, 1e-12),
];

/// One `key = value` occurrence with its source location.
struct RawEntry {
    section: &'static str,
    key: String,
    value: String,
    line: usize,
    /// 1-based column where the value text starts.
    value_col: usize,
}

const SECTIONS: &[&str] = &["device", "pump", "loss", "sweep", "integrator", "output"];

const KEYS: &[(&str, &str)] = &[
    ("device", "n_cells"),
    ("device", "cell_length"),
    ("device", "junction_ratio"),
    ("device", "critical_current"),
    ("device", "snail_capacitance"),
    ("device", "ground_capacitance"),
    ("device", "external_flux"),
    ("pump", "frequency"),
    ("pump", "power"),
    ("loss", "pump_tan_delta"),
    ("loss", "signal_tan_delta"),
    ("sweep", "signal_start"),
    ("sweep", "signal_stop"),
    ("sweep", "signal_points"),
    ("sweep", "power_start"),
    ("sweep", "power_stop"),
    ("sweep", "power_points"),
    ("integrator", "rel_tol"),
    ("integrator", "abs_tol"),
    ("integrator", "max_step"),
    ("integrator", "dense_output_points"),
    ("output", "directory"),
    ("output", "csv"),
    ("output", "json"),
    ("output", "svg"),
];

/// Parse a dimensioned value "NUMBER SUFFIX" into SI base units.
fn parse_quantity(entry: &RawEntry, expect: Dimension) -> Result<f64> {
    let mut parts = entry.value.split_whitespace();
    let number = parts.next().unwrap_or("");
    let suffix = parts.next();
    if parts.next().is_some() {
        return Err(Error::ParseError {
            line: entry.line,
            col: entry.value_col,
            msg: format!("expected NUMBER UNIT, got '{}'", entry.value),
        });
    }
    let raw: f64 = number.parse().map_err(|_| Error::ParseError {
        line: entry.line,
        col: entry.value_col,
        msg: format!("'{number}' is not a number"),
    })?;
    if expect == Dimension::Dimensionless {
        return match suffix {
            None => Ok(raw),
            Some(s) => Err(Error::UnitError {
                line: entry.line,
                msg: format!("key '{}' takes a bare number, got suffix '{s}'", entry.key),
            }),
        };
    }
    let Some(suffix) = suffix else {
        return Err(Error::UnitError {
            line: entry.line,
            msg: format!(
                "key '{}' requires {} — write an explicit unit suffix",
                entry.key,
                expect.describe()
            ),
        });
    };
    match UNIT_TABLE.iter().find(|(s, _, _)| *s == suffix) {
        Some((_, dim, scale)) if *dim == expect => Ok(raw * scale),
        Some((_, dim, _)) => Err(Error::UnitError {
            line: entry.line,
            msg: format!(
                "key '{}' expects {}, but '{suffix}' is {}",
                entry.key,
                expect.describe(),
                dim.describe()
            ),
        }),
        None => Err(Error::UnitError {
            line: entry.line,
            msg: format!("unknown unit suffix '{suffix}'"),
        }),
    }
}

fn parse_count(entry: &RawEntry) -> Result<u64> {
    entry.value.parse().map_err(|_| Error::ParseError {
        line: entry.line,
        col: entry.value_col,
        msg: format!("'{}' is not a non-negative integer", entry.value),
    })
}

fn parse_bool(entry: &RawEntry) -> Result<bool> {
    match entry.value.as_str() {
        "true" => Ok(true),
        "false" => Ok(false),
        other => Err(Error::ParseError {
            line: entry.line,
            col: entry.value_col,
            msg: format!("'{other}' is not a boolean (true|false)"),
        }),
    }
}

/// Split the text into checked (section, key, value) entries.
fn tokenize(text: &str) -> Result<Vec<RawEntry>> {
    let mut entries = Vec::new();
    let mut section: Option<&'static str> = None;
    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw_line.find('#') {
            Some(pos) => &raw_line[..pos],
            None => raw_line,
        };
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(name) = trimmed.strip_prefix('[') {
            let Some(name) = name.strip_suffix(']') else {
                return Err(Error::ParseError {
                    line: line_no,
                    col: 1,
                    msg: format!("unterminated section header '{trimmed}'"),
                });
            };
            match SECTIONS.iter().find(|s| **s == name) {
                Some(s) => section = Some(s),
                None => {
                    return Err(Error::UnknownKey {
                        key: name.to_string(),
                        line: line_no,
                    })
                }
            }
            continue;
        }
        let Some(eq) = line.find('=') else {
            return Err(Error::ParseError {
                line: line_no,
                col: 1,
                msg: format!("expected 'key = value', got '{trimmed}'"),
            });
        };
        let key = line[..eq].trim();
        if key.is_empty() {
            return Err(Error::ParseError {
                line: line_no,
                col: 1,
                msg: "missing key before '='".into(),
            });
        }
        let Some(section) = section else {
            return Err(Error::ParseError {
                line: line_no,
                col: 1,
                msg: format!("key '{key}' appears before any [section] header"),
            });
        };
        if !KEYS.iter().any(|(s, k)| *s == section && *k == key) {
            return Err(Error::UnknownKey {
                key: format!("{section}.{key}"),
                line: line_no,
            });
        }
        let right = &line[eq + 1..];
        let value = right.trim();
        if value.is_empty() {
            return Err(Error::ParseError {
                line: line_no,
                col: eq + 2,
                msg: format!("key '{key}' has no value"),
            });
        }
        let value_col = eq + 2 + (right.len() - right.trim_start().len());
        entries.push(RawEntry {
            section,
            key: key.to_string(),
            value: value.to_string(),
            line: line_no,
            value_col,
        });
    }
    Ok(entries)
}

/// Parse and validate a configuration from text.
///
/// Applies the documented defaults for every omitted key (logging each
/// one) and runs the full cross-block validation before returning.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let entries = tokenize(text)?;

    // reject duplicate keys; the loss table is the one repeatable key
    for (i, e) in entries.iter().enumerate() {
        if e.key == "signal_tan_delta" {
            continue;
        }
        if let Some(first) = entries[..i]
            .iter()
            .find(|p| p.section == e.section && p.key == e.key)
        {
            return Err(Error::ParseError {
                line: e.line,
                col: 1,
                msg: format!(
                    "duplicate key '{}' in [{}] (first set on line {})",
                    e.key, e.section, first.line
                ),
            });
        }
    }

    let defaults = RunConfig::default();
    let mut cfg = defaults.clone();
    let mut loss_table: Vec<(f64, f64)> = Vec::new();
    let mut sweep_ranges = (
        (4.0e9, 11.0e9, 101usize),
        (-115.0f64, -90.0f64, 20usize),
    );

    for e in &entries {
        match (e.section, e.key.as_str()) {
            ("device", "n_cells") => {
                cfg.device.n_cells = u32::try_from(parse_count(e)?).map_err(|_| {
                    Error::ParseError {
                        line: e.line,
                        col: e.value_col,
                        msg: format!("n_cells {} does not fit in 32 bits", e.value),
                    }
                })?
            }
            ("device", "cell_length") => {
                cfg.device.cell_length = parse_quantity(e, Dimension::Length)?
            }
            ("device", "junction_ratio") => {
                cfg.device.junction_ratio = parse_quantity(e, Dimension::Dimensionless)?
            }
            ("device", "critical_current") => {
                cfg.device.critical_current = parse_quantity(e, Dimension::Current)?
            }
            ("device", "snail_capacitance") => {
                cfg.device.snail_capacitance = parse_quantity(e, Dimension::Capacitance)?
            }
            ("device", "ground_capacitance") => {
                cfg.device.ground_capacitance = parse_quantity(e, Dimension::Capacitance)?
            }
            ("device", "external_flux") => {
                cfg.device.external_flux = parse_quantity(e, Dimension::Flux)?
            }
            ("pump", "frequency") => {
                cfg.sweep.pump_frequency = parse_quantity(e, Dimension::Frequency)?
            }
            ("pump", "power") => cfg.sweep.pump_power = parse_quantity(e, Dimension::PowerDbm)?,
            ("loss", "pump_tan_delta") => {
                cfg.loss.pump_tan_delta = parse_quantity(e, Dimension::Dimensionless)?
            }
            ("loss", "signal_tan_delta") => {
                let Some((left, right)) = e.value.split_once(':') else {
                    return Err(Error::ParseError {
                        line: e.line,
                        col: e.value_col,
                        msg: "loss table entries are 'POWER dBm : TAN_DELTA'".into(),
                    });
                };
                let power_entry = RawEntry {
                    value: left.trim().to_string(),
                    ..RawEntry {
                        section: e.section,
                        key: e.key.clone(),
                        value: String::new(),
                        line: e.line,
                        value_col: e.value_col,
                    }
                };
                let power = parse_quantity(&power_entry, Dimension::PowerDbm)?;
                let tan: f64 = right.trim().parse().map_err(|_| Error::ParseError {
                    line: e.line,
                    col: e.value_col,
                    msg: format!("'{}' is not a number", right.trim()),
                })?;
                loss_table.push((power, tan));
            }
            ("sweep", "signal_start") => {
                sweep_ranges.0 .0 = parse_quantity(e, Dimension::Frequency)?
            }
            ("sweep", "signal_stop") => {
                sweep_ranges.0 .1 = parse_quantity(e, Dimension::Frequency)?
            }
            ("sweep", "signal_points") => {
                sweep_ranges.0 .2 = parse_count(e)? as usize;
            }
            ("sweep", "power_start") => {
                sweep_ranges.1 .0 = parse_quantity(e, Dimension::PowerDbm)?
            }
            ("sweep", "power_stop") => {
                sweep_ranges.1 .1 = parse_quantity(e, Dimension::PowerDbm)?
            }
            ("sweep", "power_points") => {
                sweep_ranges.1 .2 = parse_count(e)? as usize;
            }
            ("integrator", "rel_tol") => {
                cfg.integrator.rel_tol = parse_quantity(e, Dimension::Dimensionless)?
            }
            ("integrator", "abs_tol") => {
                cfg.integrator.abs_tol = parse_quantity(e, Dimension::Dimensionless)?
            }
            ("integrator", "max_step") => {
                cfg.integrator.max_step = parse_quantity(e, Dimension::Length)?
            }
            ("integrator", "dense_output_points") => {
                cfg.integrator.dense_output_points = parse_count(e)? as usize;
            }
            ("output", "directory") => cfg.output.directory = e.value.clone(),
            ("output", "csv") => cfg.output.csv = parse_bool(e)?,
            ("output", "json") => cfg.output.json = parse_bool(e)?,
            ("output", "svg") => cfg.output.svg = parse_bool(e)?,
            _ => unreachable!("tokenize admits only schema keys"),
        }
    }

    let loss_table_given = !loss_table.is_empty();
    if loss_table_given {
        cfg.loss.signal_tan_delta_table = loss_table;
    }
    let ((fa, fb, fn_), (pa, pb, pn)) = sweep_ranges;
    if fn_ == 0 || pn == 0 {
        return Err(Error::InvalidParameter(
            "sweep point counts must be at least 1".into(),
        ));
    }
    cfg.sweep.signal_frequencies = linspace(fa, fb, fn_);
    cfg.sweep.signal_powers = linspace(pa, pb, pn);
    cfg.device.pump_power = dbm_to_watts(cfg.sweep.pump_power);

    // echo every key left at its default into the run log
    for (section, key) in KEYS {
        if *key == "signal_tan_delta" {
            if !loss_table_given {
                log::info!("config: [loss] signal_tan_delta table defaulted (5 nodes)");
            }
            continue;
        }
        if !entries
            .iter()
            .any(|e| e.section == *section && e.key == *key)
        {
            log::info!("config: [{section}] {key} left at its default");
        }
    }

    cfg.validate()?;
    Ok(cfg)
}

/// Read and parse a configuration file.
pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_config(&text)
}

/// Serialize a configuration to the sectioned text format in SI base
/// units with shortest-round-trip number formatting, so loading the
/// output reproduces `cfg` exactly. Assumes the sweep axes are the
/// uniform grids a loaded config always carries.
pub fn serialize_config(cfg: &RunConfig) -> String {
    use std::fmt::Write;
    let mut s = String::new();
    let d = &cfg.device;
    writeln!(s, "[device]").unwrap();
    writeln!(s, "n_cells = {}", d.n_cells).unwrap();
    writeln!(s, "cell_length = {} m", d.cell_length).unwrap();
    writeln!(s, "junction_ratio = {}", d.junction_ratio).unwrap();
    writeln!(s, "critical_current = {} A", d.critical_current).unwrap();
    writeln!(s, "snail_capacitance = {} F", d.snail_capacitance).unwrap();
    writeln!(s, "ground_capacitance = {} F", d.ground_capacitance).unwrap();
    writeln!(s, "external_flux = {} Wb", d.external_flux).unwrap();
    writeln!(s).unwrap();
    writeln!(s, "[pump]").unwrap();
    writeln!(s, "frequency = {} Hz", cfg.sweep.pump_frequency).unwrap();
    writeln!(s, "power = {} dBm", cfg.sweep.pump_power).unwrap();
    writeln!(s).unwrap();
    writeln!(s, "[loss]").unwrap();
    writeln!(s, "pump_tan_delta = {}", cfg.loss.pump_tan_delta).unwrap();
    for (p, t) in &cfg.loss.signal_tan_delta_table {
        writeln!(s, "signal_tan_delta = {p} dBm : {t}").unwrap();
    }
    writeln!(s).unwrap();
    writeln!(s, "[sweep]").unwrap();
    let f = &cfg.sweep.signal_frequencies;
    let p = &cfg.sweep.signal_powers;
    writeln!(s, "signal_start = {} Hz", f.first().copied().unwrap_or(0.0)).unwrap();
    writeln!(s, "signal_stop = {} Hz", f.last().copied().unwrap_or(0.0)).unwrap();
    writeln!(s, "signal_points = {}", f.len()).unwrap();
    writeln!(s, "power_start = {} dBm", p.first().copied().unwrap_or(0.0)).unwrap();
    writeln!(s, "power_stop = {} dBm", p.last().copied().unwrap_or(0.0)).unwrap();
    writeln!(s, "power_points = {}", p.len()).unwrap();
    writeln!(s).unwrap();
    writeln!(s, "[integrator]").unwrap();
    writeln!(s, "rel_tol = {}", cfg.integrator.rel_tol).unwrap();
    writeln!(s, "abs_tol = {}", cfg.integrator.abs_tol).unwrap();
    writeln!(s, "max_step = {} m", cfg.integrator.max_step).unwrap();
    writeln!(
        s,
        "dense_output_points = {}",
        cfg.integrator.dense_output_points
    )
    .unwrap();
    writeln!(s).unwrap();
    writeln!(s, "[output]").unwrap();
    writeln!(s, "directory = {}", cfg.output.directory).unwrap();
    writeln!(s, "csv = {}", cfg.output.csv).unwrap();
    writeln!(s, "json = {}", cfg.output.json).unwrap();
    writeln!(s, "svg = {}", cfg.output.svg).unwrap();
    s
}

/// Serialize a configuration and write it to `path`.
pub fn save_config(path: &Path, cfg: &RunConfig) -> Result<()> {
    std::fs::write(path, serialize_config(cfg)).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const REFERENCE: &str = include_str!("../../../configs/reference.cfg");

    #[test]
    fn bundled_reference_config_loads() {
        let cfg = parse_config(REFERENCE).unwrap();
        assert_eq!(cfg.sweep.pump_frequency, 7.5e9);
        assert_eq!(cfg.sweep.pump_power, -78.4);
        assert_eq!(cfg.device.n_cells, 700);
        assert_eq!(cfg.device.pump_power, dbm_to_watts(-78.4));
        assert_eq!(cfg.loss.signal_tan_delta_table.len(), 5);
        assert_eq!(cfg.sweep.signal_frequencies.len(), 101);
        assert_eq!(cfg.sweep.signal_powers.len(), 20);
        assert_eq!(cfg.sweep.signal_frequencies[0], 4.0e9);
        assert_eq!(*cfg.sweep.signal_frequencies.last().unwrap(), 11.0e9);
        assert!(cfg.integrator.max_step.is_infinite());
        assert!(cfg.output.csv && cfg.output.json && !cfg.output.svg);
    }

    #[test]
    fn bundled_reference_config_is_the_default() {
        // every suffix scaling in the bundled file (8.7 × 1e-6, 31 ×
        // 1e-15, 7.5 × 1e9, 0.5 × Φ0, …) reproduces the default struct's
        // literals bit-exactly, so whole-struct equality is safe here
        let cfg = parse_config(REFERENCE).unwrap();
        assert_eq!(cfg, RunConfig::default());
        // and an empty file is all defaults by construction
        assert_eq!(parse_config("").unwrap(), RunConfig::default());
    }

    #[test]
    fn load_serialize_load_is_identity() {
        let cfg = parse_config(REFERENCE).unwrap();
        let text = serialize_config(&cfg);
        let cfg2 = parse_config(&text).unwrap();
        assert_eq!(cfg, cfg2);
        // serialization is stable once round-tripped
        assert_eq!(text, serialize_config(&cfg2));

        // a config exercising every suffix family round-trips too
        let odd = "\
[device]
cell_length = 8700 nm
critical_current = 0.0014 mA
snail_capacitance = 0.031 pF
ground_capacitance = 223.5 fF
external_flux = 1.033916924230965e-15 Wb

[pump]
frequency = 7500 MHz
power = -78.4 dBm

[sweep]
signal_start = 4000000 kHz
signal_stop = 11 GHz
signal_points = 7
";
        let a = parse_config(odd).unwrap();
        let b = parse_config(&serialize_config(&a)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn unknown_keys_and_sections_are_rejected() {
        let err = parse_config("[device]\nbogus = 3\n").unwrap_err();
        match err {
            Error::UnknownKey { key, line } => {
                assert_eq!(key, "device.bogus");
                assert_eq!(line, 2);
            }
            other => panic!("expected UnknownKey, got {other:?}"),
        }
        let err = parse_config("\n\n[turbo]\n").unwrap_err();
        match err {
            Error::UnknownKey { key, line } => {
                assert_eq!(key, "turbo");
                assert_eq!(line, 3);
            }
            other => panic!("expected UnknownKey, got {other:?}"),
        }
        // keys are namespaced per section: sweep keys in [device] are unknown
        assert!(matches!(
            parse_config("[device]\nsignal_points = 3\n"),
            Err(Error::UnknownKey { .. })
        ));
    }

    #[test]
    fn unit_errors_name_the_problem() {
        // missing suffix on a dimensioned key
        let err = parse_config("[pump]\nfrequency = 7.5e9\n").unwrap_err();
        match err {
            Error::UnitError { line, msg } => {
                assert_eq!(line, 2);
                assert!(msg.contains("frequency"), "{msg}");
            }
            other => panic!("expected UnitError, got {other:?}"),
        }
        // wrong dimension
        assert!(matches!(
            parse_config("[pump]\nfrequency = 7.5 uA\n"),
            Err(Error::UnitError { line: 2, .. })
        ));
        // unknown suffix
        assert!(matches!(
            parse_config("[pump]\nfrequency = 7.5 GHZ\n"),
            Err(Error::UnitError { line: 2, .. })
        ));
        // suffix on a dimensionless key
        assert!(matches!(
            parse_config("[device]\njunction_ratio = 0.062 GHz\n"),
            Err(Error::UnitError { line: 2, .. })
        ));
    }

    #[test]
    fn parse_errors_carry_line_and_column() {
        let err = parse_config("[device]\ncell_length 8.7 um\n").unwrap_err();
        assert!(matches!(err, Error::ParseError { line: 2, col: 1, .. }), "{err:?}");

        let err = parse_config("[pump]\nfrequency = abc GHz\n").unwrap_err();
        match err {
            Error::ParseError { line, col, .. } => {
                assert_eq!(line, 2);
                assert_eq!(col, 13); // "frequency = " is 12 characters
            }
            other => panic!("expected ParseError, got {other:?}"),
        }

        // duplicate key
        let err = parse_config("[pump]\npower = -78 dBm\npower = -79 dBm\n").unwrap_err();
        match err {
            Error::ParseError { line, msg, .. } => {
                assert_eq!(line, 3);
                assert!(msg.contains("duplicate"), "{msg}");
            }
            other => panic!("expected ParseError, got {other:?}"),
        }

        // key before any section
        assert!(matches!(
            parse_config("n_cells = 700\n"),
            Err(Error::ParseError { line: 1, .. })
        ));

        // unterminated section header
        assert!(matches!(
            parse_config("[device\n"),
            Err(Error::ParseError { line: 1, .. })
        ));
    }

    #[test]
    fn negative_critical_current_fails_validation() {
        let err = parse_config("[device]\ncritical_current = -1 uA\n").unwrap_err();
        assert!(matches!(err, Error::InvalidParameter(_)), "{err:?}");
    }

    #[test]
    fn comments_and_whitespace_are_ignored() {
        let cfg = parse_config(
            "# full-line comment\n\n  [pump]  \nfrequency = 6 GHz  # inline comment\n",
        )
        .unwrap();
        assert_eq!(cfg.sweep.pump_frequency, 6.0e9);
        // untouched blocks keep their defaults
        assert_eq!(cfg.device, {
            let mut d = DeviceParams::default();
            d.pump_power = dbm_to_watts(cfg.sweep.pump_power);
            d
        });
    }

    #[test]
    fn one_point_sweep_grids_are_allowed() {
        let cfg = parse_config(
            "[sweep]\nsignal_start = 6 GHz\nsignal_stop = 6 GHz\nsignal_points = 1\n\
             power_start = -100 dBm\npower_stop = -100 dBm\npower_points = 1\n",
        )
        .unwrap();
        assert_eq!(cfg.sweep.signal_frequencies, vec![6.0e9]);
        assert_eq!(cfg.sweep.signal_powers, vec![-100.0]);
        // zero points is rejected outright
        assert!(parse_config("[sweep]\nsignal_points = 0\n").is_err());
    }

    #[test]
    fn loss_table_replaces_the_default_wholesale() {
        let cfg = parse_config(
            "[loss]\nsignal_tan_delta = -120 dBm : 3.0e-3\nsignal_tan_delta = -90 dBm : 2.0e-3\n",
        )
        .unwrap();
        assert_eq!(
            cfg.loss.signal_tan_delta_table,
            vec![(-120.0, 3.0e-3), (-90.0, 2.0e-3)]
        );
        // decreasing powers fail the loss model's own validation
        assert!(parse_config(
            "[loss]\nsignal_tan_delta = -90 dBm : 2.0e-3\nsignal_tan_delta = -120 dBm : 3.0e-3\n"
        )
        .is_err());
        // malformed entry
        assert!(matches!(
            parse_config("[loss]\nsignal_tan_delta = -90 dBm 2.0e-3\n"),
            Err(Error::ParseError { line: 2, .. })
        ));
    }

    #[test]
    fn linspace_endpoints_are_exact() {
        let v = linspace(4.0e9, 11.0e9, 101);
        assert_eq!(v[0], 4.0e9);
        assert_eq!(v[100], 11.0e9);
        assert_eq!(v.len(), 101);
        assert!(v.windows(2).all(|w| w[1] > w[0]));
        assert_eq!(linspace(5.0, 9.0, 1), vec![5.0]);
        assert!(linspace(0.0, 1.0, 0).is_empty());
    }
}
