//! Physical constants (CODATA 2018 exact values).
//!
//! Every module reads from this single table so that derived quantities
//! (flux quanta, thermal occupations, photon energies) are consistent to
//! the last bit across the crate.

/// Fundamental constants used throughout the crate, in SI units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// Reduced Planck constant, J·s.
    pub hbar: f64,
    /// Elementary charge, C.
    pub electron_charge: f64,
    /// Boltzmann constant, J/K.
    pub boltzmann: f64,
    /// Reduced flux quantum φ0 = ħ/(2e), Wb.
    pub reduced_flux_quantum: f64,
    /// Flux quantum Φ0 = 2π·φ0 = h/(2e), Wb.
    pub flux_quantum: f64,
}

/// Planck constant h, J·s (exact by SI definition).
pub const PLANCK: f64 = 6.626_070_15e-34;
/// Elementary charge e, C (exact by SI definition).
pub const ELECTRON_CHARGE: f64 = 1.602_176_634e-19;
/// Boltzmann constant k_B, J/K (exact by SI definition).
pub const BOLTZMANN: f64 = 1.380_649e-23;
/// Reduced Planck constant ħ = h/2π, J·s.
pub const HBAR: f64 = PLANCK / (2.0 * std::f64::consts::PI);
/// Flux quantum Φ0 = h/(2e), Wb.
pub const FLUX_QUANTUM: f64 = PLANCK / (2.0 * ELECTRON_CHARGE);
/// Reduced flux quantum φ0 = Φ0/2π = ħ/(2e), Wb. Derived from the flux
/// quantum so the Φ0 = 2π·φ0 identity holds bit-exactly.
pub const REDUCED_FLUX_QUANTUM: f64 = FLUX_QUANTUM / (2.0 * std::f64::consts::PI);

/// The constants table; all fields derive from the three exact SI values.
pub const CONSTANTS: PhysicalConstants = PhysicalConstants {
    hbar: HBAR,
    electron_charge: ELECTRON_CHARGE,
    boltzmann: BOLTZMANN,
    reduced_flux_quantum: REDUCED_FLUX_QUANTUM,
    flux_quantum: FLUX_QUANTUM,
};

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduced_flux_quantum_is_flux_quantum_over_two_pi() {
        // Exact identity, not approximate: both are h/(2e) scaled by 2π.
        assert_eq!(
            CONSTANTS.reduced_flux_quantum,
            CONSTANTS.flux_quantum / (2.0 * std::f64::consts::PI)
        );
    }

    #[test]
    fn flux_quantum_magnitude() {
        // Φ0 = 2.0678...e-15 Wb
        assert!((FLUX_QUANTUM - 2.067_833_848e-15).abs() < 1e-24);
    }
}
