//! Radial reduction of Riesz-potential bilinear forms.
//!
//! The double integral ∬ f(|x|) I_α(x-y) f(|y|) dx dy over R^N × R^N reduces
//! to ∫∫ f(r) A_α K^R_{α,N}(r,s) f(s) r^{N-1} s^{N-1} dr ds with the radial
//! kernel
//!
//!   K^R_{α,N}(r,s) = C_N ∫₀¹ z^{(N-3)/2} (1-z)^{(N-3)/2}
//!                           ((r+s)² - 4rs z)^{-(N-α)/2} dz,
//!   C_N = 2^{N-2} |S^{N-1}| |S^{N-2}|.
//!
//! For N = 3 the z-integral collapses to elementary closed forms (three
//! branches in α); for general N >= 2 it is evaluated by tanh-sinh
//! quadrature, which resolves both the Jacobi endpoint weight and the
//! near-diagonal boundary layer. For α <= 1 the kernel is singular on the
//! diagonal; assembled matrices carry a product-integration correction on
//! the band |i-j| <= 2 that integrates the leading |r-s|^{α-1} (or log)
//! singularity exactly against piecewise-linear data.

use crate::error::{Error, Result};
use crate::grid::{sphere_area, RadialFunction, RadialGrid};
use crate::quad::{gauss_on, tanh_sinh};
use rayon::prelude::*;
use statrs::function::gamma::gamma;
use std::sync::Arc;

/// Default cap on dense kernel size.
pub const KERNEL_SIZE_CAP: usize = 8192;

/// Normalisation and majorant constants for one (N, α).
#[derive(Clone, Debug)]
pub struct RieszConstants {
    pub n: u32,
    pub alpha: f64,
    /// A_α = Γ((N-α)/2) / (Γ(α/2) π^{N/2} 2^α).
    pub a_alpha: f64,
    /// C_N = 2^{N-2} |S^{N-1}| |S^{N-2}|.
    pub c_n: f64,
    /// Fitted constant M of the bound K^R <= M H_α.
    pub h_bound_const: f64,
}

impl RieszConstants {
    pub fn new(n: u32, alpha: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::DimensionOne);
        }
        if !(alpha > 0.0 && alpha < n as f64) {
            return Err(Error::InvalidParams(format!(
                "alpha = {alpha} outside (0, {n})"
            )));
        }
        let mut c = RieszConstants {
            n,
            alpha,
            a_alpha: a_alpha(n, alpha),
            c_n: c_n(n),
            h_bound_const: 0.0,
        };
        c.h_bound_const = c.fit_h_bound();
        Ok(c)
    }

    /// K^R and H_α are both homogeneous of degree α - N, so the ratio
    /// depends only on s/r; M is the supremum of the ratio over s/r <= 1.
    fn fit_h_bound(&self) -> f64 {
        let mut m: f64 = 0.0;
        for k in 0..400 {
            // log-spaced from 1e-4 up to 1 - 2^-40 via two ranges
            let tau = if k < 200 {
                1e-4f64.powf(1.0 - k as f64 / 199.0)
            } else {
                1.0 - 0.5f64.powf(1.0 + 39.0 * (k - 200) as f64 / 199.0)
            };
            if tau >= 1.0 {
                continue;
            }
            let kv = match kernel_value(self.n, self.alpha, 1.0, tau) {
                Ok(v) => v,
                Err(_) => continue,
            };
            m = m.max(kv / h_majorant(self.n, self.alpha, 1.0, tau));
        }
        if self.alpha > 1.0 {
            if let Ok(diag) = kernel_value(self.n, self.alpha, 1.0, 1.0) {
                m = m.max(diag / h_majorant(self.n, self.alpha, 1.0, 1.0));
            }
        }
        m
    }
}

pub fn a_alpha(n: u32, alpha: f64) -> f64 {
    let nf = n as f64;
    gamma((nf - alpha) / 2.0)
        / (gamma(alpha / 2.0) * std::f64::consts::PI.powf(nf / 2.0) * 2f64.powf(alpha))
}

pub fn c_n(n: u32) -> f64 {
    2f64.powi(n as i32 - 2) * sphere_area(n) * sphere_area(n - 1)
}

/// The majorant H_α of the kernel bound K^R <= M H_α.
pub fn h_majorant(n: u32, alpha: f64, r: f64, s: f64) -> f64 {
    let nf = n as f64;
    if alpha < 1.0 {
        (r * s).powf(-(nf - 1.0) / 2.0) * (r - s).abs().powf(alpha - 1.0)
    } else if alpha == 1.0 {
        (r * s).powf(-(nf - 1.0) / 2.0) * (2.0 * (r + s) / (r - s).abs()).ln()
    } else {
        (r * s).powf(-(nf - alpha) / 2.0)
    }
}

const ALPHA_LOG_BRANCH: f64 = 1e-8;

/// K^R_{α,N}(r, s) without the A_α normalisation (applied at matrix level).
pub fn kernel_value(n: u32, alpha: f64, r: f64, s: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::DimensionOne);
    }
    if !(r > 0.0 && s > 0.0) {
        return Err(Error::InvalidParams("kernel radii must be positive".into()));
    }
    if r == s && alpha <= 1.0 {
        return Err(Error::SingularDiagonal);
    }
    if n == 3 {
        return Ok(kernel_closed_n3(alpha, r, s));
    }
    Ok(kernel_zint(n, alpha, r, s, 1e-11, 9))
}

/// N = 3 closed forms: K = C₃/(2rs) · branch(α).
pub fn kernel_closed_n3(alpha: f64, r: f64, s: f64) -> f64 {
    let c3 = c_n(3);
    let pre = c3 / (2.0 * r * s);
    let sum = r + s;
    let diff = (r - s).abs();
    if (alpha - 1.0).abs() < ALPHA_LOG_BRANCH {
        pre * (sum / diff).ln()
    } else if alpha > 1.0 {
        pre * (sum.powf(alpha - 1.0) - diff.powf(alpha - 1.0)) / (alpha - 1.0)
    } else {
        pre * (diff.powf(alpha - 1.0) - sum.powf(alpha - 1.0)) / (1.0 - alpha)
    }
}

/// General-N kernel via tanh-sinh quadrature of the z-integral. The factor
/// (r+s)² - 4rs z is evaluated as (r-s)² + 4rs(1-z) to keep the boundary
/// layer at z = 1 accurate near the diagonal.
pub fn kernel_zint(n: u32, alpha: f64, r: f64, s: f64, tol: f64, max_level: u32) -> f64 {
    let lam = (n as f64 - 3.0) / 2.0;
    let gam = (n as f64 - alpha) / 2.0;
    let d2 = (r - s) * (r - s);
    let m2 = 4.0 * r * s;
    let integral = tanh_sinh(
        |z, omz| {
            let jac = if lam == 0.0 { 1.0 } else { (z * omz).powf(lam) };
            jac * (d2 + m2 * omz).powf(-gam)
        },
        tol,
        max_level,
    );
    c_n(n) * integral
}

/// Dense A_α K^R matrix on a grid with quadrature-aware diagonal band.
#[derive(Clone, Debug)]
pub struct KernelMatrix {
    grid: Arc<RadialGrid>,
    alpha: f64,
    a_alpha: f64,
    entries: Vec<f64>,
}

impl KernelMatrix {
    pub fn grid(&self) -> &Arc<RadialGrid> {
        &self.grid
    }
    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn a_alpha(&self) -> f64 {
        self.a_alpha
    }
    pub fn size(&self) -> usize {
        self.grid.len()
    }
    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.size() + j]
    }
    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub(crate) fn from_raw(grid: Arc<RadialGrid>, alpha: f64, entries: Vec<f64>) -> Result<Self> {
        if entries.len() != grid.len() * grid.len() {
            return Err(Error::Format("kernel entry count mismatch".into()));
        }
        Ok(KernelMatrix {
            a_alpha: a_alpha(grid.dim(), alpha),
            grid,
            alpha,
            entries,
        })
    }
}

pub fn assemble_kernel(grid: &Arc<RadialGrid>, alpha: f64) -> Result<KernelMatrix> {
    assemble_kernel_with_cap(grid, alpha, KERNEL_SIZE_CAP)
}

pub fn assemble_kernel_with_cap(
    grid: &Arc<RadialGrid>,
    alpha: f64,
    cap: usize,
) -> Result<KernelMatrix> {
    let n = grid.dim();
    if n < 2 {
        return Err(Error::DimensionOne);
    }
    if !(alpha > 0.0 && alpha < n as f64) {
        return Err(Error::InvalidParams(format!(
            "alpha = {alpha} outside (0, {n})"
        )));
    }
    let m = grid.len();
    if m > cap {
        return Err(Error::KernelTooLarge { m, cap });
    }
    let aa = a_alpha(n, alpha);
    let r = grid.r();
    let singular = alpha <= 1.0;

    let mut entries = vec![0.0; m * m];
    // upper triangle (plus diagonal for α > 1), mirrored for exact symmetry
    let bw = band_width(n);
    let rows: Vec<Vec<f64>> = (0..m)
        .into_par_iter()
        .map(|i| {
            let mut row = vec![0.0; m];
            let j0 = if singular { i + bw + 1 } else { i };
            for j in j0..m {
                row[j] = if n == 3 {
                    kernel_closed_n3(alpha, r[i], r[j])
                } else {
                    let lvl = if j <= i + 4 { 9 } else { 7 };
                    kernel_zint(n, alpha, r[i], r[j], 1e-11, lvl)
                };
            }
            row
        })
        .collect();
    for (i, row) in rows.iter().enumerate() {
        let j0 = if singular { i + bw + 1 } else { i };
        for j in j0..m {
            entries[i * m + j] = aa * row[j];
            entries[j * m + i] = aa * row[j];
        }
    }

    if singular {
        let band = band_width(n);
        let bands: Vec<(usize, Vec<(usize, f64)>)> = (0..m)
            .into_par_iter()
            .map(|i| (i, singular_band_row(grid, alpha, i, band)))
            .collect();
        for (i, band) in bands {
            for (j, v) in band {
                entries[i * m + j] = aa * v;
            }
        }
        // the band construction is row-oriented; restore exact symmetry
        for i in 0..m {
            for j in i + 1..m.min(i + band + 1) {
                let avg = 0.5 * (entries[i * m + j] + entries[j * m + i]);
                entries[i * m + j] = avg;
                entries[j * m + i] = avg;
            }
        }
    }

    Ok(KernelMatrix {
        grid: grid.clone(),
        alpha,
        a_alpha: aa,
        entries,
    })
}

/// Leading singular coefficient: K(r,s) ~ S(r,s) σ(|r-s|) near the diagonal,
/// σ = d^{α-1} for α < 1 and σ = ln(1/d) for α = 1.
fn singular_coeff(n: u32, alpha: f64, r: f64, s: f64) -> f64 {
    let nf = n as f64;
    if n == 3 {
        if (alpha - 1.0).abs() < ALPHA_LOG_BRANCH {
            c_n(3) / (2.0 * r * s)
        } else {
            c_n(3) / (2.0 * r * s * (1.0 - alpha))
        }
    } else if (alpha - 1.0).abs() < ALPHA_LOG_BRANCH {
        sphere_area(n) * sphere_area(n - 1) * (r * s).powf(-(nf - 1.0) / 2.0)
    } else {
        let ij =
            0.5 * gamma((nf - 1.0) / 2.0) * gamma((1.0 - alpha) / 2.0) / gamma((nf - alpha) / 2.0);
        sphere_area(n) * sphere_area(n - 1) * ij * (r * s).powf(-(nf - 1.0) / 2.0)
    }
}

fn sigma_sing(alpha: f64, d: f64) -> f64 {
    if (alpha - 1.0).abs() < ALPHA_LOG_BRANCH {
        -(d.ln())
    } else {
        d.powf(alpha - 1.0)
    }
}

/// Smooth remainder R = K - S σ at a node pair (off the diagonal).
fn smooth_remainder(n: u32, alpha: f64, r: f64, s: f64) -> f64 {
    if n == 3 {
        // exact: closed forms minus the singular piece
        let pre = c_n(3) / (2.0 * r * s);
        if (alpha - 1.0).abs() < ALPHA_LOG_BRANCH {
            pre * (r + s).ln()
        } else {
            -pre * (r + s).powf(alpha - 1.0) / (1.0 - alpha)
        }
    } else {
        let k = kernel_zint(n, alpha, r, s, 1e-11, 9);
        k - singular_coeff(n, alpha, r, s) * sigma_sing(alpha, (r - s).abs())
    }
}

/// Width of the product-integration band for α <= 1 (closed forms at N = 3
/// are cheap enough for a wide band; the z-integral path uses a narrower one).
fn band_width(n: u32) -> usize {
    if n == 3 {
        32
    } else {
        6
    }
}

/// Product-integration entries for row i, nodes |i-j| <= band (α <= 1 only).
///
/// The returned coefficients c satisfy
///   Σ_j c_j measure_j f_j ≈ ∫_{band} K(r_i, s) f(s) s^{N-1} ds
/// with f replaced by its piecewise-linear interpolant: on the two cells
/// touching r_i the leading singularity S σ(|r_i - s|) is integrated by
/// tanh-sinh against the hats (remainder linearised from neighbouring
/// nodes), on the other band cells the full kernel is integrated against
/// the hats by Gauss quadrature. Hats sticking out of the band are
/// completed with the plain node rule.
fn singular_band_row(
    grid: &Arc<RadialGrid>,
    alpha: f64,
    i: usize,
    band: usize,
) -> Vec<(usize, f64)> {
    let m = grid.len();
    let n = grid.dim();
    let r = grid.r();
    let lo = i.saturating_sub(band);
    let hi = (i + band).min(m - 1);
    let ri = r[i];
    let nf = n as f64;

    // smooth remainder R = K - Sσ at i±1, i±2; diagonal value by Richardson
    let rem_near = |j: isize| -> Option<f64> {
        if j < 0 || j as usize >= m || j == i as isize {
            None
        } else {
            Some(smooth_remainder(n, alpha, ri, r[j as usize]))
        }
    };
    let r1: Vec<f64> = [i as isize - 1, i as isize + 1]
        .iter()
        .filter_map(|&j| rem_near(j))
        .collect();
    let r2: Vec<f64> = [i as isize - 2, i as isize + 2]
        .iter()
        .filter_map(|&j| rem_near(j))
        .collect();
    let m1 = r1.iter().sum::<f64>() / r1.len().max(1) as f64;
    let m2 = r2.iter().sum::<f64>() / r2.len().max(1) as f64;
    let rem_diag = if r1.is_empty() {
        m2
    } else if r2.is_empty() {
        m1
    } else {
        (4.0 * m1 - m2) / 3.0
    };
    let rem_at = |j: usize| -> f64 {
        if j == i {
            rem_diag
        } else {
            smooth_remainder(n, alpha, ri, r[j])
        }
    };

    // accumulate ∫ φ_j(s) K(r_i, s) s^{N-1} ds over the band cells
    let mut acc = vec![0.0; hi - lo + 1];
    for cell in lo..hi {
        let (a, b) = (r[cell], r[cell + 1]);
        let width = b - a;
        if cell == i || cell + 1 == i {
            // singularity at a cell endpoint: Sσ by tanh-sinh (z = 0 at the
            // singular node), remainder linearised between the cell nodes
            let from_left = cell == i;
            let rem_a = rem_at(cell);
            let rem_b = rem_at(cell + 1);
            let integrand = |z: f64, with_t: bool| -> f64 {
                let (s, d) = if from_left {
                    (ri + width * z, width * z)
                } else {
                    (b - width * z, width * z)
                };
                let t = (s - a) / width;
                let sing = singular_coeff(n, alpha, ri, s) * sigma_sing(alpha, d);
                let smooth = rem_a * (1.0 - t) + rem_b * t;
                let v = (sing + smooth) * s.powf(nf - 1.0);
                if with_t {
                    v * t
                } else {
                    v
                }
            };
            let total = tanh_sinh(|z, _| integrand(z, false), 1e-12, 10) * width;
            let moment = tanh_sinh(|z, _| integrand(z, true), 1e-12, 10) * width;
            acc[cell - lo] += total - moment;
            acc[cell + 1 - lo] += moment;
        } else {
            let (xs, ws) = gauss_on(a, b, 12);
            for (&s, &w) in xs.iter().zip(&ws) {
                let t = (s - a) / width;
                let val = w * kernel_plain(n, alpha, ri, s) * s.powf(nf - 1.0);
                acc[cell - lo] += val * (1.0 - t);
                acc[cell + 1 - lo] += val * t;
            }
        }
    }

    // convert to kernel-matrix coefficients; complete boundary hats with the
    // plain rule over the out-of-band cell
    let h = grid.h();
    let a_n = nf * h;
    let phi0 = (a_n.exp() - 1.0 - a_n) / (a_n * a_n);
    let phi1 = (1.0 + (a_n - 1.0) * a_n.exp()) / (a_n * a_n);
    let mut out = Vec::with_capacity(hi - lo + 1);
    for j in lo..=hi {
        let mut val = acc[j - lo];
        if j == lo && j > 0 {
            // hat mass from the cell [r_{j-1}, r_j]
            let outer = h * r[j - 1].powi(n as i32) * phi1;
            val += outer * kernel_plain(n, alpha, ri, r[j]);
        }
        if j == hi && j + 1 < m {
            let outer = h * r[j].powi(n as i32) * phi0;
            val += outer * kernel_plain(n, alpha, ri, r[j]);
        }
        out.push((j, val / grid.measure()[j]));
    }
    out
}

fn kernel_plain(n: u32, alpha: f64, r: f64, s: f64) -> f64 {
    if n == 3 {
        kernel_closed_n3(alpha, r, s)
    } else {
        kernel_zint(n, alpha, r, s, 1e-11, 9)
    }
}

/// Coulomb energy ∫ |I_{α/2} ∗ |u|^p|² = ∬ |u|^p I_α |u|^p via the radial
/// kernel quadrature.
pub fn coulomb_energy(u: &RadialFunction, p: f64, kernel: &KernelMatrix) -> f64 {
    let m = kernel.size();
    assert_eq!(u.len(), m, "function and kernel live on different grids");
    let measure = u.grid.measure();
    let f: Vec<f64> = u
        .values
        .iter()
        .zip(measure)
        .map(|(&v, &mu)| mu * v.abs().powf(p))
        .collect();
    let partial: Vec<f64> = kernel
        .entries
        .par_chunks(m)
        .zip(&f)
        .map(|(row, &fi)| {
            if fi == 0.0 {
                return 0.0;
            }
            let dot: f64 = row.iter().zip(&f).map(|(&k, &fj)| k * fj).sum();
            fi * dot
        })
        .collect();
    partial.iter().sum()
}

/// Riesz potential of a radial density: (I_α ∗ f)(r_i).
pub fn riesz_apply(f: &RadialFunction, kernel: &KernelMatrix) -> RadialFunction {
    let m = kernel.size();
    assert_eq!(f.len(), m);
    let measure = f.grid.measure();
    let g: Vec<f64> = f
        .values
        .iter()
        .zip(measure)
        .map(|(&v, &mu)| mu * v)
        .collect();
    let inv_omega = 1.0 / f.grid.surface_const();
    let values: Vec<f64> = kernel
        .entries
        .par_chunks(m)
        .map(|row| inv_omega * row.iter().zip(&g).map(|(&k, &gj)| k * gj).sum::<f64>())
        .collect();
    RadialFunction {
        grid: f.grid.clone(),
        values,
    }
}

/// Coulomb (Q^{α,p}) norm: (∫ |I_{α/2} ∗ |u|^p|²)^{1/2p}.
pub fn q_norm(u: &RadialFunction, p: f64, kernel: &KernelMatrix) -> f64 {
    coulomb_energy(u, p, kernel).powf(1.0 / (2.0 * p))
}
