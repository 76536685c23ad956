//! Logarithmic radial grids and radial functions on R^N.
//!
//! Nodes are r_j = r_min e^{jh}. Quadrature weights integrate the
//! piecewise-linear interpolant (in log r) exactly against the Jacobian
//! r^{N-1} dr, so the measure of the truncated domain is reproduced to
//! machine precision and every dilation by an integer number of grid steps
//! transforms the standard functionals by exact power laws.

use crate::error::{Error, Result};
use std::sync::Arc;

/// ω_{N-1} = 2 π^{N/2} / Γ(N/2), the surface measure of the unit sphere.
pub fn sphere_area(n: u32) -> f64 {
    let nf = n as f64;
    2.0 * std::f64::consts::PI.powf(nf / 2.0) / statrs::function::gamma::gamma(nf / 2.0)
}

/// Volume of the unit ball in R^N.
pub fn ball_volume(n: u32) -> f64 {
    sphere_area(n) / n as f64
}

#[derive(Debug)]
pub struct RadialGrid {
    n: u32,
    h: f64,
    r: Vec<f64>,
    /// measure_j = w_j r_j^{N-1}: node mass of ∫ f(r) r^{N-1} dr.
    measure: Vec<f64>,
    surface_const: f64,
}

fn phi0(a: f64) -> f64 {
    if a.abs() < 1e-6 {
        0.5 + a / 6.0 + a * a / 24.0
    } else {
        (a.exp() - 1.0 - a) / (a * a)
    }
}

fn phi1(a: f64) -> f64 {
    if a.abs() < 1e-6 {
        0.5 + a / 3.0 + a * a / 8.0
    } else {
        (1.0 + (a - 1.0) * a.exp()) / (a * a)
    }
}

impl RadialGrid {
    pub fn new(r_min: f64, r_max: f64, m: usize, n: u32) -> Result<Arc<Self>> {
        if !(r_min > 0.0 && r_max > r_min) {
            return Err(Error::InvalidGrid(format!(
                "need 0 < r_min < r_max, got [{r_min}, {r_max}]"
            )));
        }
        if m < 16 {
            return Err(Error::InvalidGrid(format!(
                "need at least 16 nodes, got {m}"
            )));
        }
        if n == 0 {
            return Err(Error::InvalidGrid("dimension must be positive".into()));
        }
        let h = (r_max / r_min).ln() / (m - 1) as f64;
        let r: Vec<f64> = (0..m).map(|j| r_min * (j as f64 * h).exp()).collect();
        let a = n as f64 * h;
        let (f0, f1) = (phi0(a), phi1(a));
        let mut measure = vec![0.0; m];
        for j in 0..m - 1 {
            let base = h * r[j].powi(n as i32);
            measure[j] += base * f0;
            measure[j + 1] += base * f1;
        }
        Ok(Arc::new(RadialGrid {
            n,
            h,
            r,
            measure,
            surface_const: sphere_area(n),
        }))
    }

    /// Default grid used across the crate: [1e-3, 1e3] with 2048 nodes.
    pub fn default_grid(n: u32) -> Arc<Self> {
        RadialGrid::new(1e-3, 1e3, 2048, n).expect("default grid parameters are valid")
    }

    pub fn len(&self) -> usize {
        self.r.len()
    }
    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }
    pub fn dim(&self) -> u32 {
        self.n
    }
    pub fn h(&self) -> f64 {
        self.h
    }
    pub fn r(&self) -> &[f64] {
        &self.r
    }
    pub fn r_min(&self) -> f64 {
        self.r[0]
    }
    pub fn r_max(&self) -> f64 {
        *self.r.last().unwrap()
    }
    /// Node mass of the radial measure r^{N-1} dr.
    pub fn measure(&self) -> &[f64] {
        &self.measure
    }
    /// ω_{N-1}.
    pub fn surface_const(&self) -> f64 {
        self.surface_const
    }
    /// Quadrature weight w_j (measure with the Jacobian divided out).
    pub fn weight(&self, j: usize) -> f64 {
        self.measure[j] / self.r[j].powi(self.n as i32 - 1)
    }

    /// ∫ f(r) r^{N-1} dr over the truncated domain from node samples.
    pub fn integrate(&self, f: &[f64]) -> f64 {
        assert_eq!(f.len(), self.len());
        self.measure.iter().zip(f).map(|(&m, &v)| m * v).sum()
    }

    /// Full integral over R^N of a radial profile (includes ω_{N-1}).
    pub fn integrate_rn(&self, f: &[f64]) -> f64 {
        self.surface_const * self.integrate(f)
    }

    /// A 64-bit fingerprint of (N, r_min, r_max, m); keys the kernel cache.
    pub fn fingerprint(&self) -> u64 {
        let mut hash = 0xcbf29ce484222325u64;
        let mut mix = |bits: u64| {
            hash ^= bits;
            hash = hash.wrapping_mul(0x100000001b3);
        };
        mix(self.n as u64);
        mix(self.r[0].to_bits());
        mix(self.r_max().to_bits());
        mix(self.len() as u64);
        hash
    }
}

/// A radial function sampled on a [`RadialGrid`].
#[derive(Clone, Debug)]
pub struct RadialFunction {
    pub grid: Arc<RadialGrid>,
    pub values: Vec<f64>,
}

impl RadialFunction {
    pub fn new(grid: Arc<RadialGrid>, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidGrid(format!(
                "value count {} does not match grid size {}",
                values.len(),
                grid.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidGrid("non-finite sample".into()));
        }
        Ok(RadialFunction { grid, values })
    }

    pub fn from_fn(grid: &Arc<RadialGrid>, f: impl Fn(f64) -> f64) -> Self {
        let values = grid.r().iter().map(|&r| f(r)).collect();
        RadialFunction {
            grid: grid.clone(),
            values,
        }
    }

    pub fn zeros(grid: &Arc<RadialGrid>) -> Self {
        RadialFunction {
            grid: grid.clone(),
            values: vec![0.0; grid.len()],
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// ∫_{R^N} |u|^q.
    pub fn lq_integral(&self, q: f64) -> f64 {
        assert!(q >= 1.0, "L^q requires q >= 1");
        let acc: f64 = self
            .grid
            .measure()
            .iter()
            .zip(&self.values)
            .map(|(&m, &v)| m * v.abs().powf(q))
            .sum();
        self.grid.surface_const() * acc
    }

    /// (∫ |u|^q)^{1/q}.
    pub fn lq_norm(&self, q: f64) -> f64 {
        self.lq_integral(q).powf(1.0 / q)
    }

    /// du/d(log r) by centered differences, one-sided at the boundary nodes.
    pub fn log_derivative(&self) -> Vec<f64> {
        let m = self.len();
        let h = self.grid.h();
        let u = &self.values;
        let mut du = vec![0.0; m];
        du[0] = (u[1] - u[0]) / h;
        du[m - 1] = (u[m - 1] - u[m - 2]) / h;
        for j in 1..m - 1 {
            du[j] = (u[j + 1] - u[j - 1]) / (2.0 * h);
        }
        du
    }

    /// Dirichlet energy ∫ |Du|² with u'(r) = (du/d log r)/r.
    pub fn dirichlet_energy(&self) -> f64 {
        let du = self.log_derivative();
        let r = self.grid.r();
        let acc: f64 = self
            .grid
            .measure()
            .iter()
            .zip(du.iter().zip(r))
            .map(|(&m, (&d, &rj))| m * (d / rj).powi(2))
            .sum();
        self.grid.surface_const() * acc
    }

    /// Radial Laplacian u'' + (N-1)u'/r on the log grid. Inner boundary uses
    /// the symmetry ghost u_{-1} = u_0 (u'(0) = 0), outer boundary a
    /// homogeneous Dirichlet ghost u_m = 0.
    pub fn radial_laplacian(&self) -> RadialFunction {
        let m = self.len();
        let h = self.grid.h();
        let nm2 = self.grid.dim() as f64 - 2.0;
        let u = &self.values;
        let r = self.grid.r();
        let at = |j: isize| -> f64 {
            if j < 0 {
                u[0]
            } else if j as usize >= m {
                0.0
            } else {
                u[j as usize]
            }
        };
        let mut out = vec![0.0; m];
        for j in 0..m {
            let ji = j as isize;
            let upp = (at(ji + 1) - 2.0 * u[j] + at(ji - 1)) / (h * h);
            let up = (at(ji + 1) - at(ji - 1)) / (2.0 * h);
            out[j] = (upp + nm2 * up) / (r[j] * r[j]);
        }
        RadialFunction {
            grid: self.grid.clone(),
            values: out,
        }
    }

    /// Exact dilation by λ = e^{kh}: index shift with zero fill,
    /// dilate(u,k)(r) = u(r e^{-kh}).
    pub fn dilate(&self, k: i64) -> RadialFunction {
        let m = self.len() as i64;
        let mut values = vec![0.0; self.len()];
        for j in 0..m {
            let src = j - k;
            if (0..m).contains(&src) {
                values[j as usize] = self.values[src as usize];
            }
        }
        RadialFunction {
            grid: self.grid.clone(),
            values,
        }
    }

    /// Dilation by a non-integer number of grid steps, via 4-point Lagrange
    /// interpolation in the log variable. Used where an exact algebraic
    /// relation pins λ that is not a grid power.
    pub fn dilate_fractional(&self, steps: f64) -> RadialFunction {
        let m = self.len() as isize;
        let u = &self.values;
        let sample = |idx: isize| -> f64 {
            if idx < 0 || idx >= m {
                0.0
            } else {
                u[idx as usize]
            }
        };
        let mut values = vec![0.0; self.len()];
        for j in 0..self.len() {
            let x = j as f64 - steps;
            let base = x.floor() as isize;
            let t = x - base as f64;
            // cubic through base-1 .. base+2
            let (a, b, c, d) = (
                sample(base - 1),
                sample(base),
                sample(base + 1),
                sample(base + 2),
            );
            let w0 = -t * (t - 1.0) * (t - 2.0) / 6.0;
            let w1 = (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0;
            let w2 = -(t + 1.0) * t * (t - 2.0) / 2.0;
            let w3 = (t + 1.0) * t * (t - 1.0) / 6.0;
            values[j] = w0 * a + w1 * b + w2 * c + w3 * d;
        }
        RadialFunction {
            grid: self.grid.clone(),
            values,
        }
    }

    pub fn scale(&self, c: f64) -> RadialFunction {
        RadialFunction {
            grid: self.grid.clone(),
            values: self.values.iter().map(|&v| c * v).collect(),
        }
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> RadialFunction {
        RadialFunction {
            grid: self.grid.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn add(&self, other: &RadialFunction) -> RadialFunction {
        assert!(Arc::ptr_eq(&self.grid, &other.grid) || self.grid.len() == other.grid.len());
        RadialFunction {
            grid: self.grid.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &RadialFunction) -> RadialFunction {
        RadialFunction {
            grid: self.grid.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| a - b)
                .collect(),
        }
    }

    /// Weighted inner product ⟨a, b⟩ = ω Σ measure_j a_j b_j (the L² pairing).
    pub fn dot_w(&self, other: &RadialFunction) -> f64 {
        let acc: f64 = self
            .grid
            .measure()
            .iter()
            .zip(self.values.iter().zip(&other.values))
            .map(|(&m, (&a, &b))| m * a * b)
            .sum();
        self.grid.surface_const() * acc
    }

    pub fn norm_w(&self) -> f64 {
        self.dot_w(self).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    /// |u(r_max)| / max|u|; the truncation monitor.
    pub fn boundary_mass_ratio(&self) -> f64 {
        let m = self.max_abs();
        if m == 0.0 {
            0.0
        } else {
            self.values.last().unwrap().abs() / m
        }
    }

    /// Resample onto another grid by cubic interpolation in log r
    /// (zero outside the source domain). Used to seed refined solves.
    pub fn resample(&self, target: &Arc<RadialGrid>) -> RadialFunction {
        let h = self.grid.h();
        let r_min = self.grid.r_min();
        let steps: Vec<f64> = target.r().iter().map(|&r| (r / r_min).ln() / h).collect();
        let m = self.len() as isize;
        let u = &self.values;
        let sample = |idx: isize| -> f64 {
            if idx < 0 || idx >= m {
                0.0
            } else {
                u[idx as usize]
            }
        };
        let values = steps
            .iter()
            .map(|&x| {
                let base = x.floor() as isize;
                let t = x - base as f64;
                let (a, b, c, d) = (
                    sample(base - 1),
                    sample(base),
                    sample(base + 1),
                    sample(base + 2),
                );
                let w0 = -t * (t - 1.0) * (t - 2.0) / 6.0;
                let w1 = (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0;
                let w2 = -(t + 1.0) * t * (t - 2.0) / 2.0;
                let w3 = (t + 1.0) * t * (t - 1.0) / 6.0;
                w0 * a + w1 * b + w2 * c + w3 * d
            })
            .collect();
        RadialFunction {
            grid: target.clone(),
            values,
        }
    }

    /// Smallest sample and the measure of the zero set {u <= tol·max|u|};
    /// reported (never asserted) for p < 2 where dead cores are open.
    pub fn min_and_zero_set(&self, tol: f64) -> (f64, f64) {
        let scale = self.max_abs();
        let min = self.values.iter().cloned().fold(f64::INFINITY, f64::min);
        let mut meas = 0.0;
        for (j, &v) in self.values.iter().enumerate() {
            if v.abs() <= tol * scale {
                meas += self.grid.measure()[j];
            }
        }
        (min, self.grid.surface_const() * meas)
    }
}

/// Cell-based Dirichlet energy: ω Σ_cells (∫_cell e^{(N-2)t} dt) ((u_{j+1}-u_j)/h)².
/// Exact for piecewise-linear u in log r; its gradient is the compact
/// tridiagonal operator used by the descent solver (no checkerboard null mode).
pub fn dirichlet_energy_cell(u: &RadialFunction) -> f64 {
    let grid = &u.grid;
    let h = grid.h();
    let a = (grid.dim() as f64 - 2.0) * h;
    let psi = if a.abs() < 1e-9 {
        1.0 + a / 2.0
    } else {
        (a.exp() - 1.0) / a
    };
    let r = grid.r();
    let nm2 = grid.dim() as i32 - 2;
    let mut acc = 0.0;
    for j in 0..u.len() - 1 {
        let c = h * r[j].powi(nm2) * psi;
        let d = (u.values[j + 1] - u.values[j]) / h;
        acc += c * d * d;
    }
    grid.surface_const() * acc
}

/// Gradient of [`dirichlet_energy_cell`]/2 with respect to u, expressed as a
/// grid function in the weighted L² pairing (a discrete -Δ).
pub fn dirichlet_grad_cell(u: &RadialFunction) -> RadialFunction {
    let grid = &u.grid;
    let m = u.len();
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
    let mut out = vec![0.0; m];
    for k in 0..m {
        let mut g = 0.0;
        if k > 0 {
            g += c(k - 1) * (u.values[k] - u.values[k - 1]);
        }
        if k + 1 < m {
            g += c(k) * (u.values[k] - u.values[k + 1]);
        }
        out[k] = g / (h * h * grid.measure()[k]);
    }
    RadialFunction {
        grid: grid.clone(),
        values: out,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn rejects_bad_construction() {
        assert!(RadialGrid::new(1.0, 1.0, 64, 3).is_err());
        assert!(RadialGrid::new(0.0, 1.0, 64, 3).is_err());
        assert!(RadialGrid::new(1e-3, 1e3, 8, 3).is_err());
    }

    #[test]
    fn log_step_definition() {
        let g = RadialGrid::new(1e-3, 1e3, 2048, 3).unwrap();
        assert_relative_eq!(g.h(), (1e6f64).ln() / 2047.0, max_relative = 1e-15);
    }

    #[test]
    fn volume_reproduced_to_machine_precision() {
        // Σ w_j r_j^{N-1} must reproduce ∫ r^{N-1} dr exactly (PL weights)
        for n in [2u32, 3, 4] {
            let g = RadialGrid::new(1e-3, 1e3, 512, n).unwrap();
            let ones = vec![1.0; g.len()];
            let exact = (g.r_max().powi(n as i32) - g.r_min().powi(n as i32)) / n as f64;
            assert_relative_eq!(g.integrate(&ones), exact, max_relative = 1e-13);
        }
        // ball volume over [1e-3, 1] in N=3: (4π/3)(1 - 1e-9)
        let g = RadialGrid::new(1e-3, 1.0, 700, 3).unwrap();
        let ones = vec![1.0; g.len()];
        let expected = 4.0 * std::f64::consts::PI / 3.0 * (1.0 - 1e-9);
        assert_relative_eq!(g.integrate_rn(&ones), expected, max_relative = 1e-11);
    }

    #[test]
    fn quadrature_exact_for_linear_in_log() {
        let g = RadialGrid::new(0.1, 10.0, 200, 3).unwrap();
        let f: Vec<f64> = g.r().iter().map(|&r| 2.0 + 0.5 * r.ln()).collect();
        // ∫ (2 + ln(r)/2) r² dr = [2r³/3] + (1/2)[r³ ln r/3 - r³/9]
        let prim =
            |r: f64| 2.0 * r.powi(3) / 3.0 + 0.5 * (r.powi(3) * r.ln() / 3.0 - r.powi(3) / 9.0);
        let exact = prim(10.0) - prim(0.1);
        assert_relative_eq!(g.integrate(&f), exact, max_relative = 1e-12);
    }

    #[test]
    fn gaussian_l2_norm() {
        let g = RadialGrid::default_grid(3);
        let u = RadialFunction::from_fn(&g, |r| (-r * r).exp());
        // ‖e^{-r²}‖₂² = (π/2)^{3/2}; quadrature is O(h²), h ≈ 6.7e-3
        let exact = (std::f64::consts::PI / 2.0).powf(1.5);
        assert_relative_eq!(u.lq_integral(2.0), exact, max_relative = 1e-4);
    }

    #[test]
    fn gaussian_dirichlet_energy() {
        let g = RadialGrid::default_grid(3);
        let u = RadialFunction::from_fn(&g, |r| (-r * r).exp());
        // ∫ |∇ e^{-r²}|² = (3/2) π^{3/2} / √2
        let exact = 1.5 * std::f64::consts::PI.powf(1.5) / 2f64.sqrt();
        assert_relative_eq!(u.dirichlet_energy(), exact, max_relative = 5e-4);
        assert_relative_eq!(dirichlet_energy_cell(&u), exact, max_relative = 5e-4);
        let z = RadialFunction::zeros(&g);
        assert_eq!(z.dirichlet_energy(), 0.0);
    }

    #[test]
    fn dirichlet_converges_at_second_order() {
        // Richardson: error ratio between m and 2m should approach 4
        let exact = 1.5 * std::f64::consts::PI.powf(1.5) / 2f64.sqrt();
        let mut errs = vec![];
        for m in [512, 1024, 2048] {
            let g = RadialGrid::new(1e-3, 1e3, m, 3).unwrap();
            let u = RadialFunction::from_fn(&g, |r| (-r * r).exp());
            errs.push((u.dirichlet_energy() - exact).abs());
        }
        assert!(errs[0] / errs[1] > 3.0, "ratios {errs:?}");
        assert!(errs[1] / errs[2] > 3.0, "ratios {errs:?}");
    }

    #[test]
    fn dilation_is_exact_power_law() {
        let g = RadialGrid::default_grid(3);
        let u = RadialFunction::from_fn(&g, |r| {
            let x: f64 = (r - 1.0) / 0.5;
            if x.abs() < 1.0 {
                (1.0 - x * x).powi(3)
            } else {
                0.0
            }
        });
        let k = 137i64;
        let lam = (k as f64 * g.h()).exp();
        let v = u.dilate(k);
        assert_relative_eq!(
            v.lq_integral(2.5),
            lam.powi(3) * u.lq_integral(2.5),
            max_relative = 1e-12
        );
        assert_relative_eq!(
            v.dirichlet_energy(),
            lam * u.dirichlet_energy(),
            max_relative = 1e-10
        );
        // identity dilation
        let w = u.dilate(0);
        assert_eq!(w.values, u.values);
    }

    #[test]
    fn fractional_dilation_matches_integer_shift() {
        let g = RadialGrid::default_grid(3);
        let u = RadialFunction::from_fn(&g, |r| (-(r - 2.0) * (r - 2.0) / 0.3).exp());
        let a = u.dilate(5);
        let b = u.dilate_fractional(5.0);
        for (x, y) in a.values.iter().zip(&b.values) {
            assert!((x - y).abs() < 1e-12);
        }
        // smooth profile: half-step dilation close to the analytic dilation
        let lam = (0.5 * g.h()).exp();
        let c = u.dilate_fractional(0.5);
        let exact =
            RadialFunction::from_fn(&g, |r| (-(r / lam - 2.0) * (r / lam - 2.0) / 0.3).exp());
        let err = c.sub(&exact).max_abs();
        assert!(err < 1e-6, "err = {err}");
    }

    #[test]
    fn cell_gradient_is_exact_for_the_cell_energy() {
        let g = RadialGrid::new(1e-2, 1e2, 128, 3).unwrap();
        let u = RadialFunction::from_fn(&g, |r| (-r).exp() * r);
        let grad = dirichlet_grad_cell(&u);
        // directional derivative against a random-ish perturbation
        let v = RadialFunction::from_fn(&g, |r| (r.sin() / (1.0 + r)).cos());
        let eps = 1e-6;
        let up = RadialFunction::new(
            g.clone(),
            u.values
                .iter()
                .zip(&v.values)
                .map(|(&a, &b)| a + eps * b)
                .collect(),
        )
        .unwrap();
        let um = RadialFunction::new(
            g.clone(),
            u.values
                .iter()
                .zip(&v.values)
                .map(|(&a, &b)| a - eps * b)
                .collect(),
        )
        .unwrap();
        let fd = (dirichlet_energy_cell(&up) - dirichlet_energy_cell(&um)) / (2.0 * eps) / 2.0;
        let lin = grad.dot_w(&v);
        assert_relative_eq!(fd, lin, max_relative = 1e-7);
    }
}
