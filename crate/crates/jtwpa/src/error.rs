//! Crate-wide error taxonomy.
//!
//! Variants are grouped by origin (device model, integrator, response,
//! fitting, reduction, configuration, I/O). The CLI maps them onto process
//! exit codes: 2 for validation problems, 3 for numerical failures, 4 for
//! I/O — see [`Error::exit_code`].

use thiserror::Error;

/// All failure modes surfaced by the library.
#[derive(Debug, Error)]
pub enum Error {
    // --- device model ---
    /// The current-phase relation has no sign change in the search bracket.
    #[error("no root of the current-phase relation in the flux bracket [{lo:.4e}, {hi:.4e}] Wb")]
    NoRoot { lo: f64, hi: f64 },
    /// α̃ ≤ 0 at the operating point; the cell inductance is undefined.
    #[error("nonpositive alpha-tilde ({0:.6e}) at the operating point; inductance undefined")]
    NonpositiveAlpha(f64),
    /// ω at or above the plasma frequency 1/√(L·CJ); the dispersion relation diverges.
    #[error("frequency {f_hz:.6e} Hz at or above the plasma frequency {f_plasma_hz:.6e} Hz")]
    AbovePlasmaFrequency { f_hz: f64, f_plasma_hz: f64 },
    /// Signal/idler loss lookup on an empty tanδ table.
    #[error("loss-tangent table is empty; cannot resolve signal/idler tan delta")]
    EmptyTable,
    /// A parameter violates a documented range (negative Ic, zero cell count, ...).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    // --- integrator ---
    /// Adaptive step fell below the representable floor without meeting tolerance.
    #[error("step size underflow at x = {x:.6e} m (h = {h:.3e} m)")]
    StepSizeUnderflow { x: f64, h: f64 },
    /// A state component became NaN/∞ (blow-up, unphysical parameters).
    #[error("non-finite state at x = {x:.6e} m")]
    NonFiniteState { x: f64 },

    // --- response / compression ---
    /// Signal placed exactly on the pump; the three-tone model degenerates.
    #[error("signal frequency coincides with the pump ({f_hz:.6e} Hz); degenerate three-tone model")]
    DegenerateFrequency { f_hz: f64 },
    /// A sweep cell failed; coordinates identify the culprit.
    #[error("sweep cell failed at f_sig = {f_hz:.6e} Hz, P_sig = {p_dbm:.2} dBm: {source}")]
    SweepCell {
        f_hz: f64,
        p_dbm: f64,
        #[source]
        source: Box<Error>,
    },
    /// Gain curve never drops 1 dB below its small-signal value in the power range.
    #[error("gain curve never crosses G_lin - 1 dB inside the power range")]
    NoCrossing,

    // --- fitting ---
    /// Normal-equations matrix singular even under damping.
    #[error("singular Jacobian in {context}")]
    SingularJacobian { context: &'static str },
    /// Optimizer exhausted its iteration budget without meeting the step tolerance.
    #[error("no convergence in {context} after {iterations} iterations")]
    NoConvergence {
        context: &'static str,
        iterations: usize,
    },
    /// Fitted system gain came out ≤ 0.
    #[error("fitted system gain is nonpositive ({0:.6e})")]
    NegativeGain(f64),
    /// Regression abscissa has zero variance.
    #[error("degenerate abscissa: zero variance in the regressor")]
    DegenerateAbscissa,
    /// Two series that must share a frequency grid do not.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    // --- reduction ---
    /// Iso-power truncation window is empty (P_min > P_max).
    #[error("empty iso-power overlap: P_min = {p_min:.2} dBm > P_max = {p_max:.2} dBm")]
    EmptyOverlap { p_min: f64, p_max: f64 },
    /// Moving-average window is even, zero, or longer than the series.
    #[error("bad smoothing window {window} for series of length {len}")]
    BadWindow { window: usize, len: usize },

    // --- configuration ---
    /// Config text failed to parse.
    #[error("parse error at line {line}, column {col}: {msg}")]
    ParseError { line: usize, col: usize, msg: String },
    /// Config contains a key (or section) the schema does not define.
    #[error("unknown key `{key}` at line {line}")]
    UnknownKey { key: String, line: usize },
    /// A value carries a missing, unknown, or dimensionally wrong unit suffix.
    #[error("unit error at line {line}: {msg}")]
    UnitError { line: usize, msg: String },

    // --- I/O ---
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    /// An ingested CSV/JSON file does not match its documented schema.
    #[error("malformed input {path}: {msg}")]
    MalformedInput { path: String, msg: String },
}

impl Error {
    /// Process exit code the CLI reports for this error:
    /// 2 validation, 3 numerical, 4 I/O.
    pub fn exit_code(&self) -> i32 {
        use Error::*;
        match self {
            InvalidParameter(_) | EmptyTable | DegenerateFrequency { .. } | BadWindow { .. }
            | GridMismatch(_) | ParseError { .. } | UnknownKey { .. } | UnitError { .. } => 2,
            NoRoot { .. } | NonpositiveAlpha(_) | AbovePlasmaFrequency { .. }
            | StepSizeUnderflow { .. } | NonFiniteState { .. } | NoCrossing
            | SingularJacobian { .. } | NoConvergence { .. } | NegativeGain(_)
            | DegenerateAbscissa | EmptyOverlap { .. } => 3,
            SweepCell { source, .. } => source.exit_code(),
            Io { .. } | MalformedInput { .. } => 4,
        }
    }

    /// Stable machine-readable tag for the CLI error JSON.
    pub fn kind(&self) -> &'static str {
        use Error::*;
        match self {
            NoRoot { .. } => "no_root",
            NonpositiveAlpha(_) => "nonpositive_alpha",
            AbovePlasmaFrequency { .. } => "above_plasma_frequency",
            EmptyTable => "empty_table",
            InvalidParameter(_) => "invalid_parameter",
            StepSizeUnderflow { .. } => "step_size_underflow",
            NonFiniteState { .. } => "non_finite_state",
            DegenerateFrequency { .. } => "degenerate_frequency",
            SweepCell { .. } => "sweep_cell",
            NoCrossing => "no_crossing",
            SingularJacobian { .. } => "singular_jacobian",
            NoConvergence { .. } => "no_convergence",
            NegativeGain(_) => "negative_gain",
            DegenerateAbscissa => "degenerate_abscissa",
            GridMismatch(_) => "grid_mismatch",
            EmptyOverlap { .. } => "empty_overlap",
            BadWindow { .. } => "bad_window",
            ParseError { .. } => "parse_error",
            UnknownKey { .. } => "unknown_key",
            UnitError { .. } => "unit_error",
            Io { .. } => "io",
            MalformedInput { .. } => "malformed_input",
        }
    }
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
