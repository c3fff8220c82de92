//! Adaptive embedded Runge–Kutta 5(4) integration (Dormand–Prince pair).
//!
//! A deliberately small, deterministic kernel: fixed-dimension state via
//! const generics, the classic DOPRI5 tableau with its first-same-as-last
//! trick, a standard proportional step controller, and output produced by
//! stepping *exactly onto* each requested abscissa (no interpolation), so
//! recorded samples carry full integration accuracy. Identical inputs give
//! bit-identical results.

use crate::error::{Error, Result};

/// Tolerances and step limits for one integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rk45Options {
    /// Relative tolerance per component.
    pub rel_tol: f64,
    /// Absolute tolerance per component (same unit as the state).
    pub abs_tol: f64,
    /// Upper bound on the step size; `INFINITY` disables the cap.
    pub max_step: f64,
}

impl Default for Rk45Options {
    fn default() -> Self {
        Rk45Options {
            rel_tol: 1e-9,
            abs_tol: 1e-24,
            max_step: f64::INFINITY,
        }
    }
}

// Dormand–Prince 5(4) tableau.
const C: [f64; 6] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
// 5th-order solution weights (k2 drops out); FSAL: the 7th stage at x+h
// equals the next step's first stage.
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// Error weights: difference between the 5th- and embedded 4th-order solutions.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// Integrate `dy/dx = rhs(x, y)` from `xs[0]` and record the state at every
/// abscissa in `xs` (strictly increasing). The first entry of the result is
/// the initial state itself.
///
/// The controller limits each step so it lands exactly on the next
/// requested abscissa; between nodes the step adapts freely under the
/// embedded 4th-order error estimate with scale `abs_tol + rel_tol·|y|`.
pub fn integrate_grid<const N: usize, F>(
    rhs: F,
    y0: [f64; N],
    xs: &[f64],
    opt: &Rk45Options,
) -> Result<Vec<[f64; N]>>
where
    F: Fn(f64, &[f64; N], &mut [f64; N]),
{
    assert!(xs.len() >= 2, "need at least start and end abscissae");
    assert!(
        xs.windows(2).all(|w| w[1] > w[0]),
        "output abscissae must be strictly increasing"
    );
    assert!(opt.rel_tol > 0.0 && opt.abs_tol > 0.0 && opt.max_step > 0.0);

    let x0 = xs[0];
    let x_end = *xs.last().unwrap();
    let span = x_end - x0;

    let mut out = Vec::with_capacity(xs.len());
    out.push(y0);

    let mut x = x0;
    let mut y = y0;
    let mut k1 = [0.0; N];
    rhs(x, &y, &mut k1);

    let mut h = (span / 100.0).min(opt.max_step);
    let h_floor = 16.0 * f64::EPSILON * span.max(x_end.abs());

    let mut next_node = 1usize;
    let mut k = [[0.0; N]; 7];
    k[0] = k1;

    while next_node < xs.len() {
        let target = xs[next_node];
        // land exactly on the node when the step would reach past it
        let mut hitting_node = false;
        if x + h >= target {
            h = target - x;
            hitting_node = true;
        }
        if h < h_floor {
            return Err(Error::StepSizeUnderflow { x, h });
        }

        // the six internal stages
        let mut yt = [0.0; N];
        for i in 0..N {
            yt[i] = y[i] + h * A21 * k[0][i];
        }
        rhs(x + C[0] * h, &yt, &mut k[1]);
        for i in 0..N {
            yt[i] = y[i] + h * (A31 * k[0][i] + A32 * k[1][i]);
        }
        rhs(x + C[1] * h, &yt, &mut k[2]);
        for i in 0..N {
            yt[i] = y[i] + h * (A41 * k[0][i] + A42 * k[1][i] + A43 * k[2][i]);
        }
        rhs(x + C[2] * h, &yt, &mut k[3]);
        for i in 0..N {
            yt[i] = y[i] + h * (A51 * k[0][i] + A52 * k[1][i] + A53 * k[2][i] + A54 * k[3][i]);
        }
        rhs(x + C[3] * h, &yt, &mut k[4]);
        for i in 0..N {
            yt[i] = y[i]
                + h * (A61 * k[0][i] + A62 * k[1][i] + A63 * k[2][i] + A64 * k[3][i]
                    + A65 * k[4][i]);
        }
        rhs(x + C[4] * h, &yt, &mut k[5]);
        // 5th-order candidate
        let mut y_new = [0.0; N];
        for i in 0..N {
            y_new[i] = y[i]
                + h * (B1 * k[0][i] + B3 * k[2][i] + B4 * k[3][i] + B5 * k[4][i] + B6 * k[5][i]);
        }
        rhs(x + h, &y_new, &mut k[6]); // FSAL stage

        // embedded error estimate
        let mut err_sq = 0.0;
        for i in 0..N {
            let e = h
                * (E1 * k[0][i] + E3 * k[2][i] + E4 * k[3][i] + E5 * k[4][i] + E6 * k[5][i]
                    + E7 * k[6][i]);
            let scale = opt.abs_tol + opt.rel_tol * y[i].abs().max(y_new[i].abs());
            err_sq += (e / scale) * (e / scale);
        }
        let err = (err_sq / N as f64).sqrt();

        if err <= 1.0 {
            // accept
            x = if hitting_node { target } else { x + h };
            y = y_new;
            k[0] = k[6];
            if y.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFiniteState { x });
            }
            if hitting_node {
                out.push(y);
                next_node += 1;
            }
        }
        // proportional controller, classic safety factor and clamps
        let factor = if err == 0.0 {
            5.0
        } else {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        };
        h = (h * factor).min(opt.max_step);
    }

    Ok(out)
}
