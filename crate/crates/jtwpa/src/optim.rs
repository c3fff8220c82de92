//! Damped Gauss–Newton least squares with numeric Jacobians.
//!
//! The calibration fits are all small (2–4 parameters, tens to hundreds
//! of residuals) but badly scaled: inductances near 10⁻¹⁰ H share a
//! parameter vector with phase offsets near 1 rad, and forming JᵀJ in
//! raw units would square a dynamic range of 10¹⁰ — far beyond what f64
//! elimination survives. The engine therefore works throughout in scaled
//! coordinates q = p/s, where the caller supplies one typical magnitude
//! s_j per parameter, and maps back only at the boundary. In q-space the
//! Jacobian is O(1)-conditioned for any sane model, finite-difference
//! steps are simply √ε·max(|q|, 1), and the convergence test
//! max|δq| / max(|q|, 1) < tol really is a relative step.
//!
//! Damping follows the Levenberg–Marquardt pattern with multiplicative
//! scaling of the normal-matrix diagonal: solve
//! (JᵀJ + λ·diag(JᵀJ))·δ = −Jᵀr, accept the step only if the cost
//! decreased, shrink λ on success and grow it on rejection. Trial points
//! where the model returns non-finite residuals count as infinitely bad
//! and are rejected the same way, which lets model functions signal
//! "out of domain" by just returning NaN.
//!
//! Standard errors come from the linearized covariance at the optimum,
//! σ²·(JᵀJ)⁻¹ with σ² = ‖r‖²/(m−n). When the normal matrix is singular
//! there — a genuinely unidentifiable direction — the affected errors
//! are reported as infinite rather than failing the fit: the parameter
//! values are still the least-squares answer, the data just cannot
//! constrain them all.

use crate::error::{Error, Result};

/// Iteration controls for [`least_squares`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    /// Hard iteration budget (accepted or rejected steps both count).
    pub max_iterations: usize,
    /// Converged when the largest relative parameter step falls below this.
    pub step_tolerance: f64,
    /// Initial Levenberg–Marquardt damping λ.
    pub initial_damping: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            max_iterations: 200,
            step_tolerance: 1e-10,
            initial_damping: 1e-3,
        }
    }
}

/// A converged fit: parameters in caller units plus linearized statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct FitOutcome {
    /// Best-fit parameters, caller units.
    pub parameters: Vec<f64>,
    /// Euclidean norm of the residual vector at the optimum.
    pub residual_norm: f64,
    /// Per-parameter standard errors, caller units (∞ where the data do
    /// not constrain the parameter).
    pub standard_errors: Vec<f64>,
    /// Linearized parameter covariance, caller units.
    pub covariance: Vec<Vec<f64>>,
    /// Iterations consumed.
    pub iterations: usize,
}

/// Solve the n×n system `a·x = rhs` for several right-hand sides by
/// Gaussian elimination with partial pivoting. Returns `None` on a
/// (numerically) singular matrix. n stays ≤ 4 for every fit in this
/// crate.
fn gauss_solve(a: &[Vec<f64>], rhs: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let n = a.len();
    let k = rhs.len();
    // augmented working copy: rows of [a | rhs columns]
    let mut w: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let mut row = a[i].clone();
            for col in rhs {
                row.push(col[i]);
            }
            row
        })
        .collect();
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&i, &j| w[i][col].abs().partial_cmp(&w[j][col].abs()).unwrap())?;
        if !w[pivot_row][col].is_finite() || w[pivot_row][col].abs() < 1e-300 {
            return None;
        }
        w.swap(col, pivot_row);
        for row in 0..n {
            if row == col {
                continue;
            }
            let factor = w[row][col] / w[col][col];
            for idx in col..n + k {
                let sub = factor * w[col][idx];
                w[row][idx] -= sub;
            }
        }
    }
    let mut out = vec![vec![0.0; n]; k];
    for (j, col) in out.iter_mut().enumerate() {
        for i in 0..n {
            col[i] = w[i][n + j] / w[i][i];
            if !col[i].is_finite() {
                return None;
            }
        }
    }
    Some(out)
}

fn cost_of(r: &[f64]) -> f64 {
    let c: f64 = r.iter().map(|v| v * v).sum();
    if c.is_finite() {
        c
    } else {
        f64::INFINITY
    }
}

/// Minimize ‖r(p)‖² over p.
///
/// `residuals` fills a caller-sized buffer from a parameter vector in
/// caller units; `n_residuals` is that buffer's length; `initial` and
/// `scales` have one entry per parameter, scales strictly positive.
/// `context` names the fit in error messages.
pub fn least_squares<F>(
    residuals: F,
    n_residuals: usize,
    initial: &[f64],
    scales: &[f64],
    options: &FitOptions,
    context: &'static str,
) -> Result<FitOutcome>
where
    F: Fn(&[f64], &mut [f64]),
{
    let n_par = initial.len();
    if n_par == 0 || scales.len() != n_par {
        return Err(Error::InvalidParameter(
            "least squares needs matching, non-empty parameter and scale vectors".into(),
        ));
    }
    if scales.iter().any(|&s| !(s > 0.0) || !s.is_finite()) {
        return Err(Error::InvalidParameter(
            "parameter scales must be positive and finite".into(),
        ));
    }
    if n_residuals < n_par {
        return Err(Error::InvalidParameter(format!(
            "underdetermined fit: {n_residuals} residuals for {n_par} parameters"
        )));
    }

    let unscale = |q: &[f64]| -> Vec<f64> {
        q.iter().zip(scales).map(|(qi, si)| qi * si).collect()
    };
    let eval = |q: &[f64], r: &mut [f64]| residuals(&unscale(q), r);

    let mut q: Vec<f64> = initial.iter().zip(scales).map(|(p, s)| p / s).collect();
    let mut r = vec![0.0; n_residuals];
    eval(&q, &mut r);
    let mut cost = cost_of(&r);
    if !cost.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "{context}: residuals are non-finite at the initial guess"
        )));
    }

    let jacobian = |q: &[f64], r_base: &[f64]| -> Result<Vec<Vec<f64>>> {
        // column-major: j_cols[j][i] = ∂r_i/∂q_j, forward differences
        let mut j_cols = vec![vec![0.0; n_residuals]; n_par];
        let mut r_pert = vec![0.0; n_residuals];
        for (j, col) in j_cols.iter_mut().enumerate() {
            let h = f64::EPSILON.sqrt() * q[j].abs().max(1.0);
            let mut q_pert = q.to_vec();
            q_pert[j] += h;
            eval(&q_pert, &mut r_pert);
            for i in 0..n_residuals {
                col[i] = (r_pert[i] - r_base[i]) / h;
                if !col[i].is_finite() {
                    return Err(Error::SingularJacobian { context });
                }
            }
        }
        Ok(j_cols)
    };

    let normal_system = |j_cols: &[Vec<f64>], r: &[f64]| {
        let mut a = vec![vec![0.0; n_par]; n_par];
        let mut g = vec![0.0; n_par];
        for jj in 0..n_par {
            for kk in jj..n_par {
                let dot: f64 = j_cols[jj].iter().zip(&j_cols[kk]).map(|(x, y)| x * y).sum();
                a[jj][kk] = dot;
                a[kk][jj] = dot;
            }
            g[jj] = j_cols[jj].iter().zip(r).map(|(x, y)| x * y).sum();
        }
        (a, g)
    };

    let mut lambda = options.initial_damping;
    let mut iterations = 0;
    let mut converged = false;
    let mut r_try = vec![0.0; n_residuals];
    while iterations < options.max_iterations && !converged {
        let j_cols = jacobian(&q, &r)?;
        let (a, g) = normal_system(&j_cols, &r);
        if (0..n_par).any(|j| a[j][j] == 0.0) {
            // a whole Jacobian column is zero: the residuals ignore that
            // parameter entirely and no damping can fix it
            return Err(Error::SingularJacobian { context });
        }

        // retry with stronger damping until a step is accepted (each
        // attempt spends one iteration of the budget)
        loop {
            iterations += 1;
            let mut damped = a.clone();
            for j in 0..n_par {
                damped[j][j] += lambda * a[j][j];
            }
            let neg_g: Vec<f64> = g.iter().map(|v| -v).collect();
            let delta = match gauss_solve(&damped, std::slice::from_ref(&neg_g)) {
                Some(mut cols) => cols.pop().unwrap(),
                None => return Err(Error::SingularJacobian { context }),
            };

            let rel_step = delta
                .iter()
                .zip(&q)
                .map(|(d, qi)| d.abs() / qi.abs().max(1.0))
                .fold(0.0, f64::max);
            if rel_step < options.step_tolerance {
                // the damped model proposes no meaningful motion: optimum
                converged = true;
                break;
            }

            let q_try: Vec<f64> = q.iter().zip(&delta).map(|(qi, d)| qi + d).collect();
            eval(&q_try, &mut r_try);
            let cost_try = cost_of(&r_try);
            if cost_try <= cost {
                q = q_try;
                std::mem::swap(&mut r, &mut r_try);
                cost = cost_try;
                lambda = (lambda / 10.0).max(1e-14);
                if rel_step < options.step_tolerance {
                    converged = true;
                }
                break;
            }
            lambda *= 10.0;
            if iterations >= options.max_iterations || lambda > 1e15 {
                break;
            }
        }
        if !converged && lambda > 1e15 {
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence {
            context,
            iterations,
        });
    }

    // linearized statistics at the optimum
    let j_cols = jacobian(&q, &r)?;
    let (a, _) = normal_system(&j_cols, &r);
    let dof = n_residuals.saturating_sub(n_par);
    let sigma2 = if dof > 0 { cost / dof as f64 } else { 0.0 };
    let identity: Vec<Vec<f64>> = (0..n_par)
        .map(|j| {
            let mut e = vec![0.0; n_par];
            e[j] = 1.0;
            e
        })
        .collect();
    let (covariance, standard_errors) = match gauss_solve(&a, &identity) {
        Some(inv_cols) => {
            // covariance back in caller units: C_p = S·C_q·S
            let cov: Vec<Vec<f64>> = (0..n_par)
                .map(|i| {
                    (0..n_par)
                        .map(|j| inv_cols[j][i] * sigma2 * scales[i] * scales[j])
                        .collect()
                })
                .collect();
            let errs = (0..n_par).map(|j| cov[j][j].max(0.0).sqrt()).collect();
            (cov, errs)
        }
        None => (
            vec![vec![f64::INFINITY; n_par]; n_par],
            vec![f64::INFINITY; n_par],
        ),
    };

    Ok(FitOutcome {
        parameters: unscale(&q),
        residual_norm: cost.sqrt(),
        standard_errors,
        covariance,
        iterations,
    })
}
