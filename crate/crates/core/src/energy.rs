//! Energy functionals and integral identities.
//!
//! Conventions: D = ∫|Du|², V = ∫|I_{α/2} ∗ |u|^p|², L = (∫|u|^q)^{1/q},
//!
//!   E_*(u) = D/2 + V/(2p),          J_*(u) = E_*(u) - L^q/q,
//!   R(u)   = D^{θ/2} V^{(1-θ)/2p} / L.
//!
//! Multiplier conventions: the Euler–Lagrange equation of the constrained
//! problem is written here as
//!
//!   -Δu + (I_α ∗ |u|^p)|u|^{p-2}u = μ |u|^{q-2}u            (single-μ form)
//!
//! while the eigenvalue form of the radial theorem carries qμ̃ on the right;
//! the two are related by μ = q μ̃. Both are exposed, nothing is converted
//! silently: see [`mu_eigen_from_single`] / [`mu_single_from_eigen`].

use crate::error::{Error, Result};
use crate::grid::RadialFunction;
use crate::regime::{self, Params};
use crate::riesz::{coulomb_energy, riesz_apply, KernelMatrix};
use crate::scalar::Scalar;
use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct EnergyBreakdown {
    pub dirichlet: f64,
    pub coulomb: f64,
    pub lq: f64,
    pub e_star: f64,
    pub j_star: f64,
    /// R(u); `None` when L = 0 or θ is undefined for these parameters.
    pub quotient: Option<f64>,
}

pub fn breakdown(u: &RadialFunction, params: &Params, kernel: &KernelMatrix) -> EnergyBreakdown {
    let p = params.p_f();
    let q = params.q_f();
    let d = u.dirichlet_energy();
    let v = coulomb_energy(u, p, kernel);
    let lq_int = u.lq_integral(q);
    let lq = lq_int.powf(1.0 / q);
    let e_star = 0.5 * d + v / (2.0 * p);
    let j_star = e_star - lq_int / q;
    let quotient = match (regime::theta_of(params), lq > 0.0) {
        (Ok(theta), true) => {
            let th = theta.to_f64();
            Some(d.powf(th / 2.0) * v.powf((1.0 - th) / (2.0 * p)) / lq)
        }
        _ => None,
    };
    EnergyBreakdown {
        dirichlet: d,
        coulomb: v,
        lq,
        e_star,
        j_star,
        quotient,
    }
}

/// Convert the single-μ form multiplier to the eigenvalue (qμ̃) convention.
pub fn mu_eigen_from_single(mu: f64, q: f64) -> f64 {
    mu / q
}

/// Convert an eigenvalue-form multiplier to the single-μ convention.
pub fn mu_single_from_eigen(mu_eigen: f64, q: f64) -> f64 {
    mu_eigen * q
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ResidualReport {
    pub value: f64,
    /// Set when u ≡ 0 and the residual is 0 by convention.
    pub trivial: bool,
}

/// Identity defects of a computed minimiser.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Residuals {
    pub el: f64,
    pub nehari: f64,
    pub pohozaev: f64,
}

/// Strong-form Euler–Lagrange field -Δu + (I_α ∗ |u|^p)|u|^{p-2}u - μ|u|^{q-2}u
/// evaluated on the grid; also returns the leading term -Δu for normalisation.
fn el_field(
    u: &RadialFunction,
    mu: f64,
    params: &Params,
    kernel: &KernelMatrix,
) -> (RadialFunction, RadialFunction) {
    let p = params.p_f();
    let q = params.q_f();
    let lap = u.radial_laplacian();
    let density = u.map(|v| v.abs().powf(p));
    let potential = riesz_apply(&density, kernel);
    let mut res = Vec::with_capacity(u.len());
    let mut lead = Vec::with_capacity(u.len());
    for j in 0..u.len() {
        let uj = u.values[j];
        let nonlocal = potential.values[j] * uj.abs().powf(p - 2.0) * uj;
        let local = mu * uj.abs().powf(q - 2.0) * uj;
        lead.push(-lap.values[j]);
        res.push(-lap.values[j] + nonlocal - local);
    }
    (
        RadialFunction {
            grid: u.grid.clone(),
            values: res,
        },
        RadialFunction {
            grid: u.grid.clone(),
            values: lead,
        },
    )
}

/// Relative weighted-L² residual of the Euler–Lagrange equation in the
/// single-μ convention, normalised by ‖Δu‖.
pub fn el_residual(
    u: &RadialFunction,
    mu: f64,
    params: &Params,
    kernel: &KernelMatrix,
) -> ResidualReport {
    if u.max_abs() == 0.0 {
        return ResidualReport {
            value: 0.0,
            trivial: true,
        };
    }
    let (res, lead) = el_field(u, mu, params, kernel);
    let denom = lead.norm_w();
    ResidualReport {
        value: if denom > 0.0 {
            res.norm_w() / denom
        } else {
            res.norm_w()
        },
        trivial: false,
    }
}

/// Least-squares multiplier: argmin over μ of ‖F₀ - μ |u|^{q-2}u‖_w.
pub fn el_mu_least_squares(
    u: &RadialFunction,
    params: &Params,
    kernel: &KernelMatrix,
) -> Result<f64> {
    let (f0, _) = el_field(u, 0.0, params, kernel);
    let q = params.q_f();
    let g = u.map(|v| v.abs().powf(q - 2.0) * v);
    let gg = g.dot_w(&g);
    if gg == 0.0 {
        return Err(Error::InvalidParams(
            "trivial function has no multiplier".into(),
        ));
    }
    Ok(f0.dot_w(&g) / gg)
}

/// Nehari multiplier μ = (D + V)/∫|u|^q of the single-μ form.
pub fn nehari_mu(u: &RadialFunction, params: &Params, kernel: &KernelMatrix) -> Result<f64> {
    let lq_int = u.lq_integral(params.q_f());
    if lq_int <= 0.0 {
        return Err(Error::InvalidParams(
            "Nehari multiplier needs ∫|u|^q > 0".into(),
        ));
    }
    let d = u.dirichlet_energy();
    let v = coulomb_energy(u, params.p_f(), kernel);
    Ok((d + v) / lq_int)
}

/// Relative Nehari defect |D + V - μ ∫|u|^q| / (D + V).
pub fn nehari_residual(
    u: &RadialFunction,
    mu: f64,
    params: &Params,
    kernel: &KernelMatrix,
) -> ResidualReport {
    let d = u.dirichlet_energy();
    let v = coulomb_energy(u, params.p_f(), kernel);
    let lq_int = u.lq_integral(params.q_f());
    if d + v == 0.0 {
        return ResidualReport {
            value: 0.0,
            trivial: true,
        };
    }
    ResidualReport {
        value: (d + v - mu * lq_int).abs() / (d + v),
        trivial: false,
    }
}

/// Relative Pohožaev defect of
/// (N-2)/2 D + (N+α)/2p V = (Nμ/q) ∫|u|^q  (single-μ convention).
pub fn pohozaev_residual(
    u: &RadialFunction,
    mu: f64,
    params: &Params,
    kernel: &KernelMatrix,
) -> ResidualReport {
    if u.max_abs() == 0.0 {
        return ResidualReport {
            value: 0.0,
            trivial: true,
        };
    }
    let n = params.n as f64;
    let p = params.p_f();
    let q = params.q_f();
    let d = u.dirichlet_energy();
    let v = coulomb_energy(u, p, kernel);
    let lq_int = u.lq_integral(q);
    let lhs = 0.5 * (n - 2.0) * d + (n + params.alpha_f()) / (2.0 * p) * v;
    let rhs = n * mu / q * lq_int;
    let denom = lhs.abs();
    ResidualReport {
        value: if denom > 0.0 {
            (lhs - rhs).abs() / denom
        } else {
            (lhs - rhs).abs()
        },
        trivial: false,
    }
}

/// Pohožaev ratios (D/∫|u|^q, V/∫|u|^q) forced on μ = 1 solutions:
/// first = ((2N/q) - (N+α)/p) / ((N-2) - (N+α)/p), second = 1 - first.
pub fn pohozaev_ratios(params: &Params) -> Result<(Scalar, Scalar)> {
    let n = params.n_scalar();
    let na = n.add(params.alpha);
    let den = Scalar::int(params.n as i128 - 2).sub(na.div(params.p));
    if den.is_zero() {
        return Err(Error::DoubleCritical(
            "Pohožaev ratios degenerate at (N-2) = (N+alpha)/p".into(),
        ));
    }
    let num = Scalar::int(2).mul(n).div(params.q).sub(na.div(params.p));
    let first = num.div(den);
    Ok((first, Scalar::int(1).sub(first)))
}

/// Multiplier of the constrained minimiser predicted by combining the Nehari
/// and Pohožaev identities with E_*(u) = M_c (single-μ convention):
/// μ = (q/c) · 2 M_c ((N-2)p - (N+α)) / (2N(p-1) - q(2+α)).
pub fn predicted_multiplier(params: &Params, m_c: f64, c: f64) -> Option<f64> {
    let n = params.n as f64;
    let (a, p, q) = (params.alpha_f(), params.p_f(), params.q_f());
    let den = 2.0 * n * (p - 1.0) - q * (2.0 + a);
    if den.abs() < 1e-14 {
        return None;
    }
    Some(q / c * 2.0 * m_c * ((n - 2.0) * p - (n + a)) / den)
}
