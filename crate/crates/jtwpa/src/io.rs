//! CSV and JSON artifact formats.
//!
//! Every emitted CSV starts with a header row naming each column and its
//! unit, and every reader reproduces the in-memory object **exactly** —
//! numbers are printed with Rust's shortest-round-trip formatting, so
//! parsing them back recovers the same 64-bit floats bit for bit.
//!
//! Frequency columns are written in GHz (the natural axis for these
//! devices) while objects store Hz. The pair hz → hz/10⁹ → ·10⁹ double-
//! rounds and is *not* the identity for every float, so all frequency
//! axes pass through [`canonical_frequency_hz`] — the fixed point of
//! that round trip — when grids are built. On canonical values the
//! write/read cycle is exact; the adjustment is at most a few ulp
//! (≈ 10⁻⁶ Hz on 10 GHz), far below any physical scale in the problem.
//!
//! Formats (column schemas):
//!
//! * response surface: `f_sig_GHz,P_sig_dBm,gain_dB,pump_s21_dB`,
//!   power-major rows, preceded by one `#` metadata line carrying the
//!   pump drive;
//! * envelope trajectory: `x_m,cell_index,re_A_p,im_A_p,re_A_s,im_A_s,
//!   re_A_i,im_A_i`;
//! * compression summary: `f_sig_GHz,P1dB_dBm,G_lin_dB,Pout_dBm,
//!   pump_s21_at_P1dB_dB` with empty cells where no 1-dB point exists;
//! * stability map: `cell_index,f_sig_GHz,gain_dB`, position-major;
//! * analytic depletion curve: `P_sig_dBm,gain_dB`;
//! * iso-power profiles: `P_sig_dBm,f_GHz,source_P_RT_dBm,re_S21,im_S21`;
//! * raw VNA dataset (ingested by the reducer): `P_RT_dBm,f_GHz,re_S21,
//!   im_S21,attenuation_dB` with the attenuation column constant per
//!   frequency.
//!
//! JSON artifacts are plain serde serializations of the public types;
//! serde_json's float formatting is also shortest-round-trip, so JSON
//! round trips are exact as well.

use crate::cme::EnvelopeState;
use crate::compression::CompressionSummary;
use crate::compression::StabilityMap;
use crate::error::{Error, Result};
use crate::reduction::{IsoPowerProfile, RawVnaDataset};
use crate::response::{ResponseSurface, SweepGrid};
use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde::Serialize;
use std::fmt::Write as _;
use std::path::Path;

/// The fixed point of hz → (hz/10⁹)·10⁹.
///
/// On such values, writing the GHz column and multiplying back on read
/// reproduces the Hz value bit for bit. One pass reaches the fixed point
/// in practice; the loop guards against platform oddities.
pub fn canonical_frequency_hz(f_hz: f64) -> f64 {
    let mut x = f_hz;
    for _ in 0..4 {
        let y = (x / 1e9) * 1e9;
        if y == x {
            return x;
        }
        x = y;
    }
    x
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

fn malformed(path: &Path, msg: impl Into<String>) -> Error {
    Error::MalformedInput {
        path: path.display().to_string(),
        msg: msg.into(),
    }
}

fn parse_cell(path: &Path, line_no: usize, cell: &str) -> Result<f64> {
    cell.trim()
        .parse()
        .map_err(|_| malformed(path, format!("line {line_no}: '{cell}' is not a number")))
}

/// Split CSV text into trimmed cell rows, checking the header line.
fn csv_rows<'a>(
    path: &Path,
    text: &'a str,
    header: &str,
    skip_comment_lines: bool,
) -> Result<Vec<(usize, Vec<&'a str>)>> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim().is_empty());
    let mut first = lines
        .next()
        .ok_or_else(|| malformed(path, "empty file"))?;
    if skip_comment_lines {
        while first.1.trim_start().starts_with('#') {
            first = lines
                .next()
                .ok_or_else(|| malformed(path, "no header row after comments"))?;
        }
    }
    if first.1.trim() != header {
        return Err(malformed(
            path,
            format!("expected header '{header}', got '{}'", first.1.trim()),
        ));
    }
    let n_cols = header.split(',').count();
    let mut rows = Vec::new();
    for (no, line) in lines {
        let cells: Vec<&str> = line.split(',').map(str::trim).collect();
        if cells.len() != n_cols {
            return Err(malformed(
                path,
                format!("line {no}: expected {n_cols} columns, got {}", cells.len()),
            ));
        }
        rows.push((no, cells));
    }
    Ok(rows)
}

const SURFACE_HEADER: &str = "f_sig_GHz,P_sig_dBm,gain_dB,pump_s21_dB";

/// Write a response surface in power-major long format, with the pump
/// drive on a leading `#` metadata line.
pub fn write_surface_csv(path: &Path, surface: &ResponseSurface) -> Result<()> {
    let g = &surface.grid;
    let mut s = String::new();
    writeln!(
        s,
        "# pump_frequency_GHz = {} ; pump_power_dBm = {}",
        g.pump_frequency / 1e9,
        g.pump_power
    )
    .unwrap();
    writeln!(s, "{SURFACE_HEADER}").unwrap();
    for (i, &p) in g.signal_powers.iter().enumerate() {
        for (j, &f) in g.signal_frequencies.iter().enumerate() {
            writeln!(
                s,
                "{},{p},{},{}",
                f / 1e9,
                surface.gain_db[i][j],
                surface.pump_s21_db[i][j]
            )
            .unwrap();
        }
    }
    write_file(path, &s)
}

/// Read a response surface written by [`write_surface_csv`].
pub fn read_surface_csv(path: &Path) -> Result<ResponseSurface> {
    let text = read_file(path)?;
    let meta = text
        .lines()
        .find(|l| l.trim_start().starts_with('#'))
        .ok_or_else(|| malformed(path, "missing '# pump_frequency_GHz = …' metadata line"))?;
    let mut pump_frequency = None;
    let mut pump_power = None;
    for part in meta.trim_start_matches(|c| c == '#' || c == ' ').split(';') {
        if let Some((k, v)) = part.split_once('=') {
            let v: f64 = v.trim().parse().map_err(|_| {
                malformed(path, format!("metadata value '{}' is not a number", v.trim()))
            })?;
            match k.trim() {
                "pump_frequency_GHz" => pump_frequency = Some(v * 1e9),
                "pump_power_dBm" => pump_power = Some(v),
                other => return Err(malformed(path, format!("unknown metadata key '{other}'"))),
            }
        }
    }
    let (Some(pump_frequency), Some(pump_power)) = (pump_frequency, pump_power) else {
        return Err(malformed(path, "metadata line must set pump frequency and power"));
    };

    let rows = csv_rows(path, &text, SURFACE_HEADER, true)?;
    if rows.is_empty() {
        return Err(malformed(path, "no data rows"));
    }
    let mut parsed = Vec::with_capacity(rows.len());
    for (no, cells) in &rows {
        parsed.push((
            parse_cell(path, *no, cells[0])? * 1e9,
            parse_cell(path, *no, cells[1])?,
            parse_cell(path, *no, cells[2])?,
            parse_cell(path, *no, cells[3])?,
        ));
    }
    // the first power block defines the frequency axis
    let p0 = parsed[0].1;
    let n_f = parsed.iter().take_while(|r| r.1 == p0).count();
    if parsed.len() % n_f != 0 {
        return Err(malformed(
            path,
            format!("{} rows do not tile {n_f} frequencies", parsed.len()),
        ));
    }
    let n_p = parsed.len() / n_f;
    let signal_frequencies: Vec<f64> = parsed[..n_f].iter().map(|r| r.0).collect();
    let mut signal_powers = Vec::with_capacity(n_p);
    let mut gain_db = Vec::with_capacity(n_p);
    let mut pump_s21_db = Vec::with_capacity(n_p);
    for block in parsed.chunks(n_f) {
        let p = block[0].1;
        for (k, r) in block.iter().enumerate() {
            if r.1 != p || r.0 != signal_frequencies[k] {
                return Err(malformed(path, "rows are not a power-major rectangular grid"));
            }
        }
        signal_powers.push(p);
        gain_db.push(block.iter().map(|r| r.2).collect());
        pump_s21_db.push(block.iter().map(|r| r.3).collect());
    }
    Ok(ResponseSurface {
        grid: SweepGrid {
            signal_frequencies,
            signal_powers,
            pump_frequency,
            pump_power,
        },
        gain_db,
        pump_s21_db,
    })
}

const TRAJECTORY_HEADER: &str = "x_m,cell_index,re_A_p,im_A_p,re_A_s,im_A_s,re_A_i,im_A_i";

/// Write dense-output envelope states; `cell_length` converts position
/// to the nearest cell index for the second column.
pub fn write_trajectory_csv(
    path: &Path,
    states: &[EnvelopeState],
    cell_length: f64,
) -> Result<()> {
    let mut s = String::new();
    writeln!(s, "{TRAJECTORY_HEADER}").unwrap();
    for st in states {
        writeln!(
            s,
            "{},{},{},{},{},{},{},{}",
            st.x,
            (st.x / cell_length).round() as i64,
            st.a_p.re,
            st.a_p.im,
            st.a_s.re,
            st.a_s.im,
            st.a_i.re,
            st.a_i.im
        )
        .unwrap();
    }
    write_file(path, &s)
}

/// Read a trajectory written by [`write_trajectory_csv`] (the derived
/// cell-index column is ignored).
pub fn read_trajectory_csv(path: &Path) -> Result<Vec<EnvelopeState>> {
    let text = read_file(path)?;
    let rows = csv_rows(path, &text, TRAJECTORY_HEADER, false)?;
    let mut states = Vec::with_capacity(rows.len());
    for (no, cells) in rows {
        states.push(EnvelopeState {
            x: parse_cell(path, no, cells[0])?,
            a_p: Complex64::new(parse_cell(path, no, cells[2])?, parse_cell(path, no, cells[3])?),
            a_s: Complex64::new(parse_cell(path, no, cells[4])?, parse_cell(path, no, cells[5])?),
            a_i: Complex64::new(parse_cell(path, no, cells[6])?, parse_cell(path, no, cells[7])?),
        });
    }
    Ok(states)
}

const SUMMARY_HEADER: &str = "f_sig_GHz,P1dB_dBm,G_lin_dB,Pout_dBm,pump_s21_at_P1dB_dB";

fn opt_cell(v: Option<f64>) -> String {
    match v {
        Some(v) => format!("{v}"),
        None => String::new(),
    }
}

fn parse_opt_cell(path: &Path, line_no: usize, cell: &str) -> Result<Option<f64>> {
    if cell.is_empty() {
        Ok(None)
    } else {
        parse_cell(path, line_no, cell).map(Some)
    }
}

/// Write a compression summary; frequencies without a 1-dB crossing get
/// empty P1dB/Pout/pump cells.
pub fn write_summary_csv(path: &Path, summary: &CompressionSummary) -> Result<()> {
    let mut s = String::new();
    writeln!(s, "{SUMMARY_HEADER}").unwrap();
    for (j, &f) in summary.frequencies.iter().enumerate() {
        writeln!(
            s,
            "{},{},{},{},{}",
            f / 1e9,
            opt_cell(summary.p1db_dbm[j]),
            summary.g_lin_db[j],
            opt_cell(summary.pout_at_p1db_dbm[j]),
            opt_cell(summary.pump_s21_at_p1db_db[j])
        )
        .unwrap();
    }
    write_file(path, &s)
}

/// Read a compression summary written by [`write_summary_csv`].
pub fn read_summary_csv(path: &Path) -> Result<CompressionSummary> {
    let text = read_file(path)?;
    let rows = csv_rows(path, &text, SUMMARY_HEADER, false)?;
    let mut summary = CompressionSummary {
        frequencies: Vec::with_capacity(rows.len()),
        p1db_dbm: Vec::with_capacity(rows.len()),
        pout_at_p1db_dbm: Vec::with_capacity(rows.len()),
        pump_s21_at_p1db_db: Vec::with_capacity(rows.len()),
        g_lin_db: Vec::with_capacity(rows.len()),
    };
    for (no, cells) in rows {
        summary.frequencies.push(parse_cell(path, no, cells[0])? * 1e9);
        summary.p1db_dbm.push(parse_opt_cell(path, no, cells[1])?);
        summary.g_lin_db.push(parse_cell(path, no, cells[2])?);
        summary
            .pout_at_p1db_dbm
            .push(parse_opt_cell(path, no, cells[3])?);
        summary
            .pump_s21_at_p1db_db
            .push(parse_opt_cell(path, no, cells[4])?);
    }
    Ok(summary)
}

const STABILITY_HEADER: &str = "cell_index,f_sig_GHz,gain_dB";

/// Write a gain-versus-position map in position-major long format.
pub fn write_stability_csv(path: &Path, map: &StabilityMap) -> Result<()> {
    let mut s = String::new();
    writeln!(s, "{STABILITY_HEADER}").unwrap();
    for (i, &pos) in map.positions.iter().enumerate() {
        for (j, &f) in map.frequencies.iter().enumerate() {
            writeln!(s, "{pos},{},{}", f / 1e9, map.gain_db[i][j]).unwrap();
        }
    }
    write_file(path, &s)
}

/// Read a stability map written by [`write_stability_csv`].
pub fn read_stability_csv(path: &Path) -> Result<StabilityMap> {
    let text = read_file(path)?;
    let rows = csv_rows(path, &text, STABILITY_HEADER, false)?;
    if rows.is_empty() {
        return Err(malformed(path, "no data rows"));
    }
    let mut parsed = Vec::with_capacity(rows.len());
    for (no, cells) in &rows {
        let pos: u32 = cells[0].parse().map_err(|_| {
            malformed(path, format!("line {no}: '{}' is not a cell index", cells[0]))
        })?;
        parsed.push((
            pos,
            parse_cell(path, *no, cells[1])? * 1e9,
            parse_cell(path, *no, cells[2])?,
        ));
    }
    let pos0 = parsed[0].0;
    let n_f = parsed.iter().take_while(|r| r.0 == pos0).count();
    if parsed.len() % n_f != 0 {
        return Err(malformed(
            path,
            format!("{} rows do not tile {n_f} frequencies", parsed.len()),
        ));
    }
    let frequencies: Vec<f64> = parsed[..n_f].iter().map(|r| r.1).collect();
    let mut positions = Vec::new();
    let mut gain_db = Vec::new();
    for block in parsed.chunks(n_f) {
        let pos = block[0].0;
        for (k, r) in block.iter().enumerate() {
            if r.0 != pos || r.1 != frequencies[k] {
                return Err(malformed(path, "rows are not a position-major rectangular grid"));
            }
        }
        positions.push(pos);
        gain_db.push(block.iter().map(|r| r.2).collect());
    }
    Ok(StabilityMap {
        positions,
        frequencies,
        gain_db,
    })
}

const ANALYTIC_HEADER: &str = "P_sig_dBm,gain_dB";

/// Write an analytic pump-depletion gain curve.
pub fn write_analytic_csv(path: &Path, powers_dbm: &[f64], gain_db: &[f64]) -> Result<()> {
    let mut s = String::new();
    writeln!(s, "{ANALYTIC_HEADER}").unwrap();
    for (p, g) in powers_dbm.iter().zip(gain_db) {
        writeln!(s, "{p},{g}").unwrap();
    }
    write_file(path, &s)
}

/// Read a curve written by [`write_analytic_csv`].
pub fn read_analytic_csv(path: &Path) -> Result<(Vec<f64>, Vec<f64>)> {
    let text = read_file(path)?;
    let rows = csv_rows(path, &text, ANALYTIC_HEADER, false)?;
    let mut powers = Vec::with_capacity(rows.len());
    let mut gains = Vec::with_capacity(rows.len());
    for (no, cells) in rows {
        powers.push(parse_cell(path, no, cells[0])?);
        gains.push(parse_cell(path, no, cells[1])?);
    }
    Ok((powers, gains))
}

const PROFILES_HEADER: &str = "P_sig_dBm,f_GHz,source_P_RT_dBm,re_S21,im_S21";

/// Write iso-power profiles (sharing one frequency axis) in
/// profile-major long format.
pub fn write_profiles_csv(
    path: &Path,
    frequencies: &[f64],
    profiles: &[IsoPowerProfile],
) -> Result<()> {
    let mut s = String::new();
    writeln!(s, "{PROFILES_HEADER}").unwrap();
    for prof in profiles {
        for (j, &f) in frequencies.iter().enumerate() {
            writeln!(
                s,
                "{},{},{},{},{}",
                prof.device_input_power,
                f / 1e9,
                prof.source_powers[j],
                prof.s21[j].re,
                prof.s21[j].im
            )
            .unwrap();
        }
    }
    write_file(path, &s)
}

/// Read profiles written by [`write_profiles_csv`]; returns the shared
/// frequency axis and the profiles.
pub fn read_profiles_csv(path: &Path) -> Result<(Vec<f64>, Vec<IsoPowerProfile>)> {
    let text = read_file(path)?;
    let rows = csv_rows(path, &text, PROFILES_HEADER, false)?;
    if rows.is_empty() {
        return Err(malformed(path, "no data rows"));
    }
    let mut parsed = Vec::with_capacity(rows.len());
    for (no, cells) in &rows {
        parsed.push((
            parse_cell(path, *no, cells[0])?,
            parse_cell(path, *no, cells[1])? * 1e9,
            parse_cell(path, *no, cells[2])?,
            Complex64::new(
                parse_cell(path, *no, cells[3])?,
                parse_cell(path, *no, cells[4])?,
            ),
        ));
    }
    let p0 = parsed[0].0;
    let n_f = parsed.iter().take_while(|r| r.0 == p0).count();
    if parsed.len() % n_f != 0 {
        return Err(malformed(
            path,
            format!("{} rows do not tile {n_f} frequencies", parsed.len()),
        ));
    }
    let frequencies: Vec<f64> = parsed[..n_f].iter().map(|r| r.1).collect();
    let mut profiles = Vec::new();
    for block in parsed.chunks(n_f) {
        let p = block[0].0;
        for (k, r) in block.iter().enumerate() {
            if r.0 != p || r.1 != frequencies[k] {
                return Err(malformed(path, "rows are not a profile-major rectangular grid"));
            }
        }
        profiles.push(IsoPowerProfile {
            device_input_power: p,
            source_powers: block.iter().map(|r| r.2).collect(),
            s21: block.iter().map(|r| r.3).collect(),
        });
    }
    Ok((frequencies, profiles))
}

const RAW_VNA_HEADER: &str = "P_RT_dBm,f_GHz,re_S21,im_S21,attenuation_dB";

/// Write a raw VNA dataset in power-major long format; the attenuation
/// column repeats its per-frequency value on every power row.
pub fn write_raw_vna_csv(path: &Path, raw: &RawVnaDataset) -> Result<()> {
    let mut s = String::new();
    writeln!(s, "{RAW_VNA_HEADER}").unwrap();
    for (i, &p) in raw.room_temp_powers.iter().enumerate() {
        for (j, &f) in raw.frequencies.iter().enumerate() {
            writeln!(
                s,
                "{p},{},{},{},{}",
                f / 1e9,
                raw.complex_s21[i][j].re,
                raw.complex_s21[i][j].im,
                raw.attenuation_db[j]
            )
            .unwrap();
        }
    }
    write_file(path, &s)
}

/// Read a dataset written by [`write_raw_vna_csv`], checking that the
/// attenuation column is consistent across power rows.
pub fn read_raw_vna_csv(path: &Path) -> Result<RawVnaDataset> {
    let text = read_file(path)?;
    let rows = csv_rows(path, &text, RAW_VNA_HEADER, false)?;
    if rows.is_empty() {
        return Err(malformed(path, "no data rows"));
    }
    let mut parsed = Vec::with_capacity(rows.len());
    for (no, cells) in &rows {
        parsed.push((
            parse_cell(path, *no, cells[0])?,
            parse_cell(path, *no, cells[1])? * 1e9,
            Complex64::new(
                parse_cell(path, *no, cells[2])?,
                parse_cell(path, *no, cells[3])?,
            ),
            parse_cell(path, *no, cells[4])?,
        ));
    }
    let p0 = parsed[0].0;
    let n_f = parsed.iter().take_while(|r| r.0 == p0).count();
    if parsed.len() % n_f != 0 {
        return Err(malformed(
            path,
            format!("{} rows do not tile {n_f} frequencies", parsed.len()),
        ));
    }
    let frequencies: Vec<f64> = parsed[..n_f].iter().map(|r| r.1).collect();
    let attenuation_db: Vec<f64> = parsed[..n_f].iter().map(|r| r.3).collect();
    let mut room_temp_powers = Vec::new();
    let mut complex_s21 = Vec::new();
    for block in parsed.chunks(n_f) {
        let p = block[0].0;
        for (k, r) in block.iter().enumerate() {
            if r.0 != p || r.1 != frequencies[k] {
                return Err(malformed(path, "rows are not a power-major rectangular grid"));
            }
            if r.3 != attenuation_db[k] {
                return Err(malformed(
                    path,
                    format!(
                        "attenuation at {} GHz changes between power rows ({} vs {})",
                        frequencies[k] / 1e9,
                        attenuation_db[k],
                        r.3
                    ),
                ));
            }
        }
        room_temp_powers.push(p);
        complex_s21.push(block.iter().map(|r| r.2).collect());
    }
    Ok(RawVnaDataset {
        room_temp_powers,
        frequencies,
        complex_s21,
        attenuation_db,
    })
}

const PHASE_HEADER: &str = "f_GHz,phase_rad";
const INDUCTANCE_HEADER: &str = "flux_Phi0,L_pH";
const LOSS_FIT_HEADER: &str = "f_GHz,kl_rad,s21_dB";
const NOISE_HEADER: &str = "f_GHz,T_K,P_W";

/// Write a phase-versus-frequency trace (dispersion-fit input).
pub fn write_phase_csv(path: &Path, freqs_hz: &[f64], phase_rad: &[f64]) -> Result<()> {
    let mut s = String::new();
    writeln!(s, "{PHASE_HEADER}").unwrap();
    for (f, p) in freqs_hz.iter().zip(phase_rad) {
        writeln!(s, "{},{p}", f / 1e9).unwrap();
    }
    write_file(path, &s)
}

/// Read a trace written by [`write_phase_csv`].
pub fn read_phase_csv(path: &Path) -> Result<(Vec<f64>, Vec<f64>)> {
    let text = read_file(path)?;
    let rows = csv_rows(path, &text, PHASE_HEADER, false)?;
    let mut freqs = Vec::with_capacity(rows.len());
    let mut phases = Vec::with_capacity(rows.len());
    for (no, cells) in rows {
        freqs.push(parse_cell(path, no, cells[0])? * 1e9);
        phases.push(parse_cell(path, no, cells[1])?);
    }
    Ok((freqs, phases))
}

/// Write measured cell inductance versus flux (inductance-fit input).
/// Values are stored in Φ0 and pH for readability.
pub fn write_inductance_csv(path: &Path, flux_wb: &[f64], inductance_h: &[f64]) -> Result<()> {
    let mut s = String::new();
    writeln!(s, "{INDUCTANCE_HEADER}").unwrap();
    for (f, l) in flux_wb.iter().zip(inductance_h) {
        writeln!(s, "{},{}", f / crate::constants::FLUX_QUANTUM, l / 1e-12).unwrap();
    }
    write_file(path, &s)
}

/// Read a table written by [`write_inductance_csv`]; returns (flux in
/// Wb, inductance in H).
pub fn read_inductance_csv(path: &Path) -> Result<(Vec<f64>, Vec<f64>)> {
    let text = read_file(path)?;
    let rows = csv_rows(path, &text, INDUCTANCE_HEADER, false)?;
    let mut fluxes = Vec::with_capacity(rows.len());
    let mut ls = Vec::with_capacity(rows.len());
    for (no, cells) in rows {
        fluxes.push(parse_cell(path, no, cells[0])? * crate::constants::FLUX_QUANTUM);
        ls.push(parse_cell(path, no, cells[1])? * 1e-12);
    }
    Ok((fluxes, ls))
}

/// Write transmission magnitude against k·l (loss-fit input).
pub fn write_loss_fit_csv(
    path: &Path,
    freqs_hz: &[f64],
    k_times_l: &[f64],
    s21_db: &[f64],
) -> Result<()> {
    let mut s = String::new();
    writeln!(s, "{LOSS_FIT_HEADER}").unwrap();
    for ((f, kl), v) in freqs_hz.iter().zip(k_times_l).zip(s21_db) {
        writeln!(s, "{},{kl},{v}", f / 1e9).unwrap();
    }
    write_file(path, &s)
}

/// Read a table written by [`write_loss_fit_csv`]; returns
/// (frequencies, k·l, S21 dB).
pub fn read_loss_fit_csv(path: &Path) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>)> {
    let text = read_file(path)?;
    let rows = csv_rows(path, &text, LOSS_FIT_HEADER, false)?;
    let mut freqs = Vec::with_capacity(rows.len());
    let mut kls = Vec::with_capacity(rows.len());
    let mut s21 = Vec::with_capacity(rows.len());
    for (no, cells) in rows {
        freqs.push(parse_cell(path, no, cells[0])? * 1e9);
        kls.push(parse_cell(path, no, cells[1])?);
        s21.push(parse_cell(path, no, cells[2])?);
    }
    Ok((freqs, kls, s21))
}

/// Write a thermal-sweep power table (noise-calibration input) in
/// temperature-major long format. The detection bandwidth travels as a
/// command parameter, not in the file.
pub fn write_noise_csv(
    path: &Path,
    frequencies_hz: &[f64],
    temperatures_k: &[f64],
    power_w: &[Vec<f64>],
) -> Result<()> {
    let mut s = String::new();
    writeln!(s, "{NOISE_HEADER}").unwrap();
    for (i, &t) in temperatures_k.iter().enumerate() {
        for (j, &f) in frequencies_hz.iter().enumerate() {
            writeln!(s, "{},{t},{}", f / 1e9, power_w[i][j]).unwrap();
        }
    }
    write_file(path, &s)
}

/// Read a table written by [`write_noise_csv`]; returns (frequencies,
/// temperatures, power matrix [temperature][frequency]).
#[allow(clippy::type_complexity)]
pub fn read_noise_csv(path: &Path) -> Result<(Vec<f64>, Vec<f64>, Vec<Vec<f64>>)> {
    let text = read_file(path)?;
    let rows = csv_rows(path, &text, NOISE_HEADER, false)?;
    if rows.is_empty() {
        return Err(malformed(path, "no data rows"));
    }
    let mut parsed = Vec::with_capacity(rows.len());
    for (no, cells) in &rows {
        parsed.push((
            parse_cell(path, *no, cells[0])? * 1e9,
            parse_cell(path, *no, cells[1])?,
            parse_cell(path, *no, cells[2])?,
        ));
    }
    let t0 = parsed[0].1;
    let n_f = parsed.iter().take_while(|r| r.1 == t0).count();
    if parsed.len() % n_f != 0 {
        return Err(malformed(
            path,
            format!("{} rows do not tile {n_f} frequencies", parsed.len()),
        ));
    }
    let frequencies: Vec<f64> = parsed[..n_f].iter().map(|r| r.0).collect();
    let mut temperatures = Vec::new();
    let mut power = Vec::new();
    for block in parsed.chunks(n_f) {
        let t = block[0].1;
        for (k, r) in block.iter().enumerate() {
            if r.1 != t || r.0 != frequencies[k] {
                return Err(malformed(
                    path,
                    "rows are not a temperature-major rectangular grid",
                ));
            }
        }
        temperatures.push(t);
        power.push(block.iter().map(|r| r.2).collect());
    }
    Ok((frequencies, temperatures, power))
}

/// Write a per-frequency scalar spectrum under a caller-chosen header
/// whose first column is `f_GHz` (used for full-transmission inputs and
/// attenuation outputs).
pub fn write_spectrum_csv(
    path: &Path,
    header: &str,
    freqs_hz: &[f64],
    values: &[f64],
) -> Result<()> {
    let mut s = String::new();
    writeln!(s, "{header}").unwrap();
    for (f, v) in freqs_hz.iter().zip(values) {
        writeln!(s, "{},{v}", f / 1e9).unwrap();
    }
    write_file(path, &s)
}

/// Read a spectrum written by [`write_spectrum_csv`] with the same
/// header.
pub fn read_spectrum_csv(path: &Path, header: &str) -> Result<(Vec<f64>, Vec<f64>)> {
    let text = read_file(path)?;
    let rows = csv_rows(path, &text, header, false)?;
    let mut freqs = Vec::with_capacity(rows.len());
    let mut values = Vec::with_capacity(rows.len());
    for (no, cells) in rows {
        freqs.push(parse_cell(path, no, cells[0])? * 1e9);
        values.push(parse_cell(path, no, cells[1])?);
    }
    Ok((freqs, values))
}

/// Serialize any public artifact type to pretty-printed JSON.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Error::MalformedInput {
        path: path.display().to_string(),
        msg: format!("serialization failed: {e}"),
    })?;
    text.push('\n');
    write_file(path, &text)
}

/// Read any public artifact type back from JSON.
pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = read_file(path)?;
    serde_json::from_str(&text).map_err(|e| malformed(path, format!("invalid JSON: {e}")))
}
