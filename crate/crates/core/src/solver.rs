//! Constrained minimisation of E_* = D/2 + V/(2p) on the sphere ∫|u|^q = c
//! over radial functions.
//!
//! The iteration is a spectral projected gradient: descend along the
//! constraint-projected gradient, take |u| (a minimiser candidate may be
//! assumed nonnegative since |w| minimises whenever w does), renormalise to
//! the sphere (exact by homogeneity), and, off the critical exponent, apply
//! the closed-form optimal dilation. Internally the Dirichlet term uses the
//! cell-based discretisation whose gradient is exactly tridiagonal; reported
//! energies and residuals come from the `energy` module formulas, so the
//! Nehari/Pohožaev defects measure genuine discretisation error and shrink
//! under grid refinement.

use crate::energy::{self, Residuals};
use crate::error::{Error, Result};
use crate::grid::{dirichlet_energy_cell, dirichlet_grad_cell, RadialFunction, RadialGrid};
use crate::regime::{self, Classification, Params};
use crate::riesz::{coulomb_energy, riesz_apply, KernelMatrix};
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// Truncation guard: the solve errors out if |u(r_max)| exceeds this times
/// max|u|.
pub const BOUNDARY_MASS_LIMIT: f64 = 1e-6;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub enum InitProfile {
    Gaussian { width: f64 },
    Annular { center: f64, width: f64 },
    Custom(Vec<f64>),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Constraint value ∫|u|^q = c.
    pub c: f64,
    pub init: InitProfile,
    pub step0: f64,
    pub backtrack_factor: f64,
    /// Relative projected-gradient tolerance.
    pub tol_grad: f64,
    /// Relative energy-change tolerance.
    pub tol_energy: f64,
    pub max_iter: usize,
    pub seed: u64,
    /// Apply the closed-form optimal dilation after each accepted step
    /// (disabled automatically at q = q_cs).
    pub dilation_accel: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            c: 1.0,
            init: InitProfile::Gaussian { width: 1.0 },
            step0: 0.5,
            backtrack_factor: 0.5,
            tol_grad: 1e-6,
            tol_energy: 1e-10,
            max_iter: 20000,
            seed: 0,
            dilation_accel: true,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GroundstateResult {
    #[serde(skip)]
    pub u: RadialFunction,
    /// E_*(u) at the final iterate (module-formula value M_{c,rad}).
    pub m_c: f64,
    /// Best interpolation constant recovered through the scaling relation.
    pub s_estimate: Option<f64>,
    /// Lagrange multiplier in the single-μ convention.
    pub mu: f64,
    /// The same multiplier in the eigenvalue (qμ̃) convention.
    pub mu_eigen: f64,
    #[serde(skip)]
    pub rescaled: Option<RadialFunction>,
    pub residuals: Residuals,
    /// E_* after every accepted step (the solver's own discrete objective).
    pub trace: Vec<f64>,
    pub converged: bool,
    pub iterations: usize,
    pub warning: Option<String>,
    pub min_u: f64,
    pub zero_set_measure: f64,
    pub boundary_ratio: f64,
    /// Relative stationarity residual of the discrete Euler–Lagrange system
    /// at the final iterate (the smoothing-phase monitor).
    pub stationarity: f64,
}

struct Objective<'a> {
    kernel: &'a KernelMatrix,
    p: f64,
}

impl Objective<'_> {
    fn energy(&self, u: &RadialFunction) -> f64 {
        0.5 * dirichlet_energy_cell(u) + coulomb_energy(u, self.p, self.kernel) / (2.0 * self.p)
    }

    /// Exact gradient of the discrete E_* as a grid function.
    fn gradient(&self, u: &RadialFunction) -> RadialFunction {
        let p = self.p;
        let density = u.map(|v| v.abs().powf(p));
        let potential = riesz_apply(&density, self.kernel);
        let mut g = dirichlet_grad_cell(u);
        for j in 0..u.len() {
            let uj = u.values[j];
            g.values[j] += potential.values[j] * uj.abs().powf(p - 2.0) * uj;
        }
        g
    }
}

/// Sobolev-gradient preconditioner: solves (I - Δ_h) v = g with the
/// cell-based discrete Laplacian, by the Thomas algorithm.
///
/// The raw L² gradient flow is hopelessly stiff on a log grid (the smallest
/// cells near the origin impose a step bound ~ h² r_min²); descending in the
/// H¹ metric removes the stiffness and leaves O(1) steps.
struct Preconditioner {
    lower: Vec<f64>,
    diag: Vec<f64>,
    upper: Vec<f64>,
}

impl Preconditioner {
    /// (I + τ(-Δ_h))⁻¹ for the cell-based discrete Laplacian.
    fn new(grid: &RadialGrid, tau: f64) -> Self {
        let m = grid.len();
        let h = grid.h();
        let a = (grid.dim() as f64 - 2.0) * h;
        let psi = if a.abs() < 1e-9 {
            1.0 + a / 2.0
        } else {
            (a.exp() - 1.0) / a
        };
        let r = grid.r();
        let nm2 = grid.dim() as i32 - 2;
        let c = |j: usize| h * r[j].powi(nm2) * psi;
        let mut lower = vec![0.0; m];
        let mut diag = vec![0.0; m];
        let mut upper = vec![0.0; m];
        for k in 0..m {
            let mu = grid.measure()[k];
            let mut d = 1.0;
            if k > 0 {
                let ck = tau * c(k - 1) / (h * h * mu);
                d += ck;
                lower[k] = -ck;
            }
            if k + 1 < m {
                let ck = tau * c(k) / (h * h * mu);
                d += ck;
                upper[k] = -ck;
            }
            diag[k] = d;
        }
        Preconditioner { lower, diag, upper }
    }

    fn solve(&self, rhs: &RadialFunction) -> RadialFunction {
        let m = rhs.len();
        let mut cp = vec![0.0; m];
        let mut dp = vec![0.0; m];
        cp[0] = self.upper[0] / self.diag[0];
        dp[0] = rhs.values[0] / self.diag[0];
        for k in 1..m {
            let denom = self.diag[k] - self.lower[k] * cp[k - 1];
            cp[k] = self.upper[k] / denom;
            dp[k] = (rhs.values[k] - self.lower[k] * dp[k - 1]) / denom;
        }
        let mut out = vec![0.0; m];
        out[m - 1] = dp[m - 1];
        for k in (0..m - 1).rev() {
            out[k] = dp[k] - cp[k] * out[k + 1];
        }
        RadialFunction {
            grid: rhs.grid.clone(),
            values: out,
        }
    }
}

fn renormalize(u: &RadialFunction, q: f64, c: f64) -> RadialFunction {
    let lq = u.lq_integral(q);
    u.scale((c / lq).powf(1.0 / q))
}

fn init_profile(grid: &Arc<RadialGrid>, init: &InitProfile) -> Result<RadialFunction> {
    Ok(match init {
        InitProfile::Gaussian { width } => {
            let w = *width;
            RadialFunction::from_fn(grid, move |r| (-(r / w) * (r / w)).exp())
        }
        InitProfile::Annular { center, width } => {
            let (c0, w) = (*center, *width);
            RadialFunction::from_fn(grid, move |r| {
                let x = (r - c0) / w;
                if x.abs() < 1.0 {
                    (1.0 - x * x).powi(3)
                } else {
                    0.0
                }
            })
        }
        InitProfile::Custom(values) => RadialFunction::new(grid.clone(), values.clone())?,
    })
}

/// Dilation exponents of E_* along the sphere-preserving orbit
/// u_λ = λ^{-N/q} u(·/λ): D scales as λ^a, V as λ^b.
fn dilation_exponents(params: &Params) -> (f64, f64) {
    let n = params.n as f64;
    let q = params.q_f();
    let p = params.p_f();
    (
        n - 2.0 - 2.0 * n / q,
        n + params.alpha_f() - 2.0 * p * n / q,
    )
}

#[derive(Clone, Debug)]
pub struct DilationResult {
    /// Continuous optimum of E_* along the dilation orbit.
    pub lambda_star: f64,
    /// Integer grid shift actually applied.
    pub shift: i64,
    pub u: RadialFunction,
    /// Set when the dilation was skipped (critical exponent, double-critical
    /// degeneracy, or no interior optimum).
    pub skipped: Option<&'static str>,
}

/// Closed-form optimal dilation on the constraint sphere: minimises
/// E_*(λ^{-N/q} u(·/λ)) = λ^a D/2 + λ^b V/(2p) over λ, then applies the
/// nearest grid shift with the exact value correction λ^{-N/q} that
/// preserves ∫|u|^q.
pub fn optimal_dilation(
    u: &RadialFunction,
    params: &Params,
    kernel: &KernelMatrix,
) -> Result<DilationResult> {
    let identity = |reason: &'static str| DilationResult {
        lambda_star: 1.0,
        shift: 0,
        u: u.clone(),
        skipped: Some(reason),
    };
    if params.q.eq3(regime::q_cs(params)) {
        return Ok(identity("q = q_cs: the quotient is dilation-invariant"));
    }
    if params.is_double_critical() {
        return Ok(identity("double-critical case"));
    }
    let d = u.dirichlet_energy();
    let v = coulomb_energy(u, params.p_f(), kernel);
    if d <= 0.0 || v <= 0.0 {
        return Ok(identity("degenerate energies"));
    }
    let (a, b) = dilation_exponents(params);
    if a * b >= 0.0 {
        return Ok(identity("no interior dilation optimum"));
    }
    let p = params.p_f();
    let lambda_star = (-a * p * d / (b * v)).powf(1.0 / (b - a));
    let h = u.grid.h();
    let k = (lambda_star.ln() / h).round() as i64;
    let (k, u_new) = apply_best_shift(u, params, d, v, k);
    Ok(DilationResult {
        lambda_star,
        shift: k,
        u: u_new,
        skipped: None,
    })
}

/// Evaluate E_* along integer shifts near k0 using the exact power laws and
/// apply the best one (including k = 0, so the energy never increases).
fn apply_best_shift(
    u: &RadialFunction,
    params: &Params,
    d: f64,
    v: f64,
    k0: i64,
) -> (i64, RadialFunction) {
    let (a, b) = dilation_exponents(params);
    let p = params.p_f();
    let h = u.grid.h();
    let m = u.len() as i64;
    // keep the support safely inside the grid
    let tol = 1e-13 * u.max_abs();
    let first = u.values.iter().position(|x| x.abs() > tol).unwrap_or(0) as i64;
    let last = u.values.iter().rposition(|x| x.abs() > tol).unwrap_or(0) as i64;
    let k_min = 4 - first;
    let k_max = m - 5 - last;
    let energy_at = |k: i64| -> f64 {
        let lam_pow = (k as f64 * h * a).exp();
        let lam_pow_b = (k as f64 * h * b).exp();
        0.5 * lam_pow * d + lam_pow_b * v / (2.0 * p)
    };
    let mut best_k = 0;
    let mut best_e = energy_at(0);
    for k in [k0 - 1, k0, k0 + 1] {
        if k == 0 || k < k_min || k > k_max {
            continue;
        }
        let e = energy_at(k);
        if e < best_e {
            best_e = e;
            best_k = k;
        }
    }
    if best_k == 0 {
        (0, u.clone())
    } else {
        let n = params.n as f64;
        let q = params.q_f();
        let corr = (-(best_k as f64) * h * n / q).exp();
        (best_k, u.dilate(best_k).scale(corr))
    }
}

/// Strip the Lagrange multiplier: writing w(x) = γ u(δx) with
/// γ^{2p-2} δ^{-α-2} = 1 and μ γ^{q-2} δ^{-2} = 1 turns a solution of the
/// μ-equation into a solution with unit coefficients. The 2×2 log-linear
/// system is exactly solvable off the critical exponent.
pub fn rescale_to_groundstate(
    w: &RadialFunction,
    mu: f64,
    params: &Params,
) -> Result<RadialFunction> {
    if params.q.eq3(regime::q_cs(params)) {
        return Err(Error::EigenvalueCritical(
            "at q = q_cs the multiplier cannot be scaled out; the problem is an eigenvalue problem rather than an equation".into(),
        ));
    }
    if mu <= 0.0 {
        return Err(Error::InvalidParams(format!(
            "multiplier must be positive, got {mu}"
        )));
    }
    let p = params.p_f();
    let a = params.alpha_f();
    let q = params.q_f();
    // (2p-2) x - (α+2) y = 0 ;  (q-2) x - 2 y = -ln μ
    let det = -2.0 * (2.0 * p - 2.0) + (a + 2.0) * (q - 2.0);
    let rhs = -mu.ln();
    let x = (a + 2.0) * rhs / det;
    let y = (2.0 * p - 2.0) * rhs / det;
    let gamma = x.exp();
    let delta = y.exp();
    // u(y) = γ^{-1} w(y/δ): a dilation by ln δ / h grid steps
    let steps = delta.ln() / w.grid.h();
    Ok(w.dilate_fractional(steps).scale(1.0 / gamma))
}

/// Projected-gradient minimisation of E_* on the L^q sphere.
pub fn minimize(
    params: &Params,
    grid: &Arc<RadialGrid>,
    kernel: &KernelMatrix,
    config: &SolverConfig,
) -> Result<GroundstateResult> {
    if config.c <= 0.0 {
        return Err(Error::InvalidParams(
            "constraint value c must be positive".into(),
        ));
    }
    let report = regime::classify(params);
    let warning = match report.classification {
        Classification::ExistenceGeneral
        | Classification::ExistenceRadialOnly
        | Classification::EigenvalueCritical => None,
        other => Some(format!(
            "NONCONVERGENCE_EXPECTED: classification {other} does not guarantee a minimiser"
        )),
    };

    let q = params.q_f();
    let p = params.p_f();
    let at_q_cs = params.q.eq3(regime::q_cs(params));
    let obj = Objective { kernel, p };

    let mut u = init_profile(grid, &config.init)?.map(f64::abs);
    if u.lq_integral(q) <= 0.0 {
        return Err(Error::InvalidParams(
            "initial profile is identically zero".into(),
        ));
    }
    u = renormalize(&u, q, config.c);

    let precond = Preconditioner::new(grid, 1.0);
    let mut e = obj.energy(&u);
    let mut trace = vec![e];
    let mut tau = config.step0;
    let mut converged = false;
    let mut iterations = 0;
    let mut mu_pg = 0.0;
    let mut prev_u: Option<RadialFunction> = None;
    let mut prev_d: Option<RadialFunction> = None;
    let mut plateau = 0usize;

    for it in 0..config.max_iter {
        iterations = it + 1;
        let g = obj.gradient(&u);
        let psi = u.map(|x| x.abs().powf(q - 2.0) * x);
        let psi_sq = psi.dot_w(&psi);
        mu_pg = if psi_sq > 0.0 {
            g.dot_w(&psi) / psi_sq
        } else {
            0.0
        };
        let pg = RadialFunction {
            grid: u.grid.clone(),
            values: g
                .values
                .iter()
                .zip(&psi.values)
                .map(|(&gv, &pv)| gv - mu_pg * pv)
                .collect(),
        };
        // H¹ (Sobolev) descent direction; convergence is judged in the same
        // metric (the raw L² ratio is dominated by stiff components near
        // r_min that carry no energy)
        let dir = precond.solve(&pg);
        let dir_g_norm = precond.solve(&g).norm_w();
        let pg_rel = if dir_g_norm > 0.0 {
            dir.norm_w() / dir_g_norm
        } else {
            0.0
        };

        // Barzilai-Borwein step proposal, safeguarded by the backtracking
        if let (Some(pu), Some(pd)) = (&prev_u, &prev_d) {
            let du = u.sub(pu);
            let dd = dir.sub(pd);
            let num = du.dot_w(&du);
            let den = du.dot_w(&dd);
            if den > 0.0 && num > 0.0 {
                tau = (num / den).clamp(1e-8, 1e3);
            }
        }
        prev_u = Some(u.clone());
        prev_d = Some(dir.clone());

        // Armijo backtracking on the projected path
        let mut accepted = false;
        let mut bt = 0;
        while bt < 40 {
            let cand = RadialFunction {
                grid: u.grid.clone(),
                values: u
                    .values
                    .iter()
                    .zip(&dir.values)
                    .map(|(&uv, &gv)| (uv - tau * gv).abs())
                    .collect(),
            };
            let cand = renormalize(&cand, q, config.c);
            let e_cand = obj.energy(&cand);
            let diff = cand.sub(&u);
            let dist_sq = diff.dot_w(&diff);
            if e_cand <= e - 1e-4 / tau.max(1e-300) * dist_sq {
                u = cand;
                let e_prev = e;
                e = e_cand;
                accepted = true;
                // dilation accelerator: the exact power laws pick the shift,
                // and the move is kept only if the realised energy (which
                // includes truncation effects) does not go up
                if config.dilation_accel && !at_q_cs && !params.is_double_critical() {
                    let d_now = dirichlet_energy_cell(&u);
                    let v_now = coulomb_energy(&u, p, kernel);
                    let (a, b) = dilation_exponents(params);
                    let k0 = if a * b < 0.0 && d_now > 0.0 && v_now > 0.0 {
                        let lam = (-a * p * d_now / (b * v_now)).powf(1.0 / (b - a));
                        Some((lam.ln() / grid.h()).round() as i64)
                    } else if a * b > 0.0 {
                        // noncoercive direction: drift one step downhill so a
                        // vanishing/escaping trace shows itself
                        Some(if a > 0.0 { -1 } else { 1 })
                    } else {
                        None
                    };
                    if let Some(k0) = k0 {
                        let (k, u_shift) = apply_best_shift(&u, params, d_now, v_now, k0);
                        if k != 0 {
                            let cand = renormalize(&u_shift, q, config.c);
                            let e_shift = obj.energy(&cand);
                            if e_shift <= e {
                                u = cand;
                                e = e_shift;
                                // the secant memory does not survive a shift
                                prev_u = None;
                                prev_d = None;
                            }
                        }
                    }
                }
                trace.push(e);
                let e_change = (e_prev - e).abs() / e_prev.abs().max(f64::MIN_POSITIVE);
                if pg_rel <= config.tol_grad && e_change <= config.tol_energy {
                    converged = true;
                }
                // a long energy plateau means the remaining error is in the
                // stiff components; hand over to the smoothing sweeps
                plateau = if e_change <= config.tol_energy {
                    plateau + 1
                } else {
                    0
                };
                break;
            }
            tau *= config.backtrack_factor;
            bt += 1;
        }

        if !accepted {
            // the line search stalled at the resolution of the discrete
            // energy; treat a tiny projected gradient as convergence
            converged = pg_rel <= config.tol_grad * 10.0;
            break;
        }
        if converged || plateau >= 40 {
            break;
        }
        if it % 128 == 0 {
            let ratio = u.boundary_mass_ratio();
            if ratio > BOUNDARY_MASS_LIMIT {
                return Err(Error::BoundaryMass {
                    boundary: ratio,
                    limit: BOUNDARY_MASS_LIMIT,
                });
            }
        }
    }

    let mut stationarity = f64::NAN;
    // Semi-implicit smoothing sweeps: the backward-Euler flow
    //   u ← (I + τ(-Δ_h))⁻¹ (u - τ[(I_α∗|u|^p)|u|^{p-2}u - μ|u|^{q-2}u])
    // has the discrete Euler–Lagrange equation as its fixed point and damps
    // the stiff components that plain descent leaves at floating-point
    // energy resolution. Run only when the descent reached a basin.
    if converged || warning.is_none() {
        let tau_p = 0.5;
        let smoother = Preconditioner::new(grid, tau_p);
        let e_budget = e * (1.0 + 1e-12);
        let mut best: Option<(f64, RadialFunction, f64)> = None;
        let mut stall = 0;
        for _sweep in 0..300 {
            let density = u.map(|v| v.abs().powf(p));
            let potential = riesz_apply(&density, kernel);
            let psi_q = u.map(|x| x.abs().powf(q - 2.0) * x);
            let t_u = dirichlet_grad_cell(&u);
            let mut local = vec![0.0; u.len()];
            let mut g_full = t_u.clone();
            for j in 0..u.len() {
                let uj = u.values[j];
                local[j] = potential.values[j] * uj.abs().powf(p - 2.0) * uj;
                g_full.values[j] += local[j];
            }
            let psi_sq = psi_q.dot_w(&psi_q);
            let mu_now = if psi_sq > 0.0 {
                g_full.dot_w(&psi_q) / psi_sq
            } else {
                0.0
            };
            let resid_fn = RadialFunction {
                grid: u.grid.clone(),
                values: g_full
                    .values
                    .iter()
                    .zip(&psi_q.values)
                    .map(|(&gv, &pv)| gv - mu_now * pv)
                    .collect(),
            };
            let denom = t_u.norm_w();
            let resid = if denom > 0.0 {
                resid_fn.norm_w() / denom
            } else {
                0.0
            };
            match &best {
                Some((r, _, _)) if resid >= r * 0.9999 => {
                    stall += 1;
                    if stall > 15 {
                        break;
                    }
                }
                _ => stall = 0,
            }
            if best.as_ref().map_or(true, |(r, _, _)| resid < *r) {
                best = Some((resid, u.clone(), mu_now));
            }
            if resid < 1e-11 {
                break;
            }
            let mut rhs = u.clone();
            for j in 0..u.len() {
                rhs.values[j] -= tau_p * (local[j] - mu_now * psi_q.values[j]);
            }
            let cand = renormalize(&smoother.solve(&rhs).map(f64::abs), q, config.c);
            let e_cand = obj.energy(&cand);
            // the sweeps live at floating-point energy resolution; bound the
            // drift instead of demanding strict descent
            if e_cand > e_budget {
                break;
            }
            u = cand;
        }
        if let Some((resid, u_best, mu_best)) = best {
            u = u_best;
            mu_pg = mu_best;
            stationarity = resid;
            if resid <= (config.tol_grad * 10.0).max(1e-6) {
                converged = true;
            }
        }
    }

    let ratio = u.boundary_mass_ratio();
    if ratio > BOUNDARY_MASS_LIMIT && warning.is_none() {
        return Err(Error::BoundaryMass {
            boundary: ratio,
            limit: BOUNDARY_MASS_LIMIT,
        });
    }

    let bd = energy::breakdown(&u, params, kernel);
    let mu = mu_pg;
    let residuals = Residuals {
        el: energy::el_residual(&u, mu, params, kernel).value,
        nehari: energy::nehari_residual(&u, mu, params, kernel).value,
        pohozaev: energy::pohozaev_residual(&u, mu, params, kernel).value,
    };
    let s_estimate = s_from_m(bd.e_star, params, config.c).ok();
    let rescaled = if converged && !at_q_cs {
        rescale_to_groundstate(&u, mu, params).ok()
    } else {
        None
    };
    let (min_u, zero_set_measure) = u.min_and_zero_set(1e-8);
    Ok(GroundstateResult {
        m_c: bd.e_star,
        s_estimate,
        mu,
        mu_eigen: energy::mu_eigen_from_single(mu, q),
        rescaled,
        residuals,
        trace,
        converged,
        iterations,
        warning,
        min_u,
        zero_set_measure,
        boundary_ratio: ratio,
        stationarity,
        u,
    })
}

/// Invert M_c = C_* (c^{1/q} S)^{2σ} to report the best constant S.
pub fn s_from_m(m_c: f64, params: &Params, c: f64) -> Result<f64> {
    let sigma = regime::sigma_of(params)?.to_f64();
    let c_star = regime::c_star_of(params)?;
    if m_c <= 0.0 {
        return Err(Error::InvalidParams(
            "minimum value must be positive".into(),
        ));
    }
    Ok((m_c / c_star).powf(1.0 / (2.0 * sigma)) / c.powf(1.0 / params.q_f()))
}

#[derive(Clone, Debug, Serialize)]
pub struct ScalingMember {
    pub c: f64,
    pub m_c: f64,
    pub converged: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScalingReport {
    pub members: Vec<ScalingMember>,
    pub fitted_slope: f64,
    /// 2σ/q from the scaling relation.
    pub predicted_slope: f64,
    pub s_estimates: Vec<f64>,
    pub complete: bool,
}

/// Solve M_c for each c and fit log M_c against log c; the slope must match
/// 2σ/q.
pub fn scaling_law_check(
    params: &Params,
    grid: &Arc<RadialGrid>,
    kernel: &KernelMatrix,
    base: &SolverConfig,
    c_values: &[f64],
) -> Result<ScalingReport> {
    if c_values.len() < 2 {
        return Err(Error::InvalidParams(
            "scaling check needs at least two c values".into(),
        ));
    }
    let sigma = regime::sigma_of(params)?.to_f64();
    let predicted = 2.0 * sigma / params.q_f();
    let mut members = Vec::new();
    let mut s_estimates = Vec::new();
    for &c in c_values {
        let mut cfg = base.clone();
        cfg.c = c;
        let res = minimize(params, grid, kernel, &cfg)?;
        if let Some(s) = res.s_estimate {
            s_estimates.push(s);
        }
        members.push(ScalingMember {
            c,
            m_c: res.m_c,
            converged: res.converged,
        });
    }
    let complete = members.iter().all(|m| m.converged);
    let xs: Vec<f64> = members.iter().map(|m| m.c.ln()).collect();
    let ys: Vec<f64> = members.iter().map(|m| m.m_c.ln()).collect();
    Ok(ScalingReport {
        fitted_slope: crate::quad::fit_slope(&xs, &ys),
        predicted_slope: predicted,
        members,
        s_estimates,
        complete,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct MuBoundReport {
    pub mu_eigen: f64,
    pub m1_rad: f64,
    pub bound_holds: bool,
    /// C_* 2(2p+α)/(2+α) θ^{α/(2+α)} (1-θ)^{2/(2+α)} at θ = α/(2p+α); equals 1.
    pub identity_value: f64,
}

/// Universal lower bound μ̃ >= M_{1,rad} for the eigenvalue problem at
/// q = q_cs, plus the algebraic identity behind it.
pub fn mu_lower_bound_check(
    result: &GroundstateResult,
    params: &Params,
    c: f64,
) -> Result<MuBoundReport> {
    if !params.q.eq3(regime::q_cs(params)) {
        return Err(Error::Hypothesis(
            "the universal multiplier bound applies only at q = q_cs".into(),
        ));
    }
    if !result.converged {
        return Err(Error::Nonconvergence(
            "mu bound check needs a converged result".into(),
        ));
    }
    // M_c = c M_1 at the critical exponent (2σ/q = 1)
    let m1 = result.m_c / c;
    let mu_eigen = result.mu_eigen;
    Ok(MuBoundReport {
        mu_eigen,
        m1_rad: m1,
        bound_holds: mu_eigen >= m1 * (1.0 - 1e-3),
        identity_value: regime::universal_mu_identity(params.alpha_f(), params.p_f()),
    })
}

/// Sphere-constrained quotient minimum via direct evaluation: the smallest
/// R(u) over the trace of a solve equals (M_1/C_*)^{1/2σ}; exposed for tests.
pub fn quotient_of(u: &RadialFunction, params: &Params, kernel: &KernelMatrix) -> Option<f64> {
    energy::breakdown(u, params, kernel).quotient
}

pub use crate::energy::Residuals as SolverResiduals;
