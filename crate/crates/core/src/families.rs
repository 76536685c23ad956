//! Explicit test and counterexample families, with measured norm growth
//! fitted against the predicted exponents.
//!
//! Radial families (scaling, annular, chains, log tails) are evaluated
//! either on the log grid (where dilations are exact index shifts) or by
//! direct bump calculus: every member is built from the standard compactly
//! supported profile, so its Dirichlet and L^q integrals are plain 1D
//! quadratures and its Coulomb term a 2D kernel quadrature over the
//! support.
//!
//! Non-radial constructions (cube arrays, Cantor cascades, translated
//! bumps) are never sampled on a Cartesian grid: they decompose into
//! radial bumps plus pairwise cross terms, which only require the bump
//! integrals, the pair distances, and either the exact two-centre
//! interaction (tabulated from the radial potential) or its far-field
//! monopole with an explicit error bound.

use crate::error::{Error, Result};
use crate::grid::{ball_volume, sphere_area, RadialFunction, RadialGrid};
use crate::quad::{fit_slope, gauss_on};
use crate::regime::{self, Params};
use crate::riesz::{
    a_alpha, assemble_kernel, coulomb_energy, kernel_closed_n3, kernel_zint, riesz_apply,
};
use crate::scalar::Scalar;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::sync::Arc;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FamilyKind {
    SobolevScaling,
    Annular,
    VanishingChain,
    CubeArray,
    CantorCascade,
    TranslatedBumps,
    LogTail,
}

/// Declarative description of one family run (the CLI surface).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FamilySpec {
    pub kind: FamilyKind,
    pub params: Params,
    /// Family parameter values (R, n, k or spacing, by kind).
    pub range: Vec<f64>,
    /// L^q exponent probed in the report (default: q from params).
    pub q_probe: Option<f64>,
    /// Lattice dimension for cube arrays.
    pub lattice_dim: Option<u32>,
    /// Contraction ratio for Cantor cascades.
    pub rho: Option<f64>,
    /// Chain radius for vanishing chains; bump count for translated bumps.
    pub aux: Option<f64>,
    /// Tail exponent δ for log tails.
    pub delta: Option<f64>,
}

impl FamilySpec {
    pub fn validate(&self) -> Result<()> {
        if self.range.is_empty() {
            return Err(Error::InvalidParams("family range must be nonempty".into()));
        }
        if !self.range.windows(2).all(|w| w[1] > w[0]) {
            return Err(Error::InvalidParams(
                "family range must be strictly increasing".into(),
            ));
        }
        Ok(())
    }

    pub fn run(&self) -> Result<FamilyReport> {
        self.validate()?;
        let q = self.q_probe.unwrap_or(self.params.q_f());
        match self.kind {
            FamilyKind::SobolevScaling => sobolev_scaling(&self.params, &self.range, q),
            FamilyKind::Annular => annular_family(&self.params, &self.range, q),
            FamilyKind::VanishingChain => {
                let r = self.aux.unwrap_or(16.0);
                let ks: Vec<usize> = self.range.iter().map(|&k| k as usize).collect();
                vanishing_chain(&self.params, r, &ks)
            }
            FamilyKind::CubeArray => {
                let d = self.lattice_dim.ok_or_else(|| {
                    Error::InvalidParams("cube array needs a lattice dimension".into())
                })?;
                let ns: Vec<usize> = self.range.iter().map(|&n| n as usize).collect();
                cube_array(&self.params, &ns, d)
            }
            FamilyKind::CantorCascade => {
                let rho = self
                    .rho
                    .ok_or_else(|| Error::InvalidParams("cantor cascade needs rho".into()))?;
                let levels = self.range.last().copied().unwrap_or(4.0) as usize;
                let rep = cantor_cascade(
                    self.params.n,
                    self.params.alpha_f(),
                    self.params.p_f(),
                    rho,
                    levels,
                )?;
                Ok(rep.into_family_report())
            }
            FamilyKind::TranslatedBumps => {
                let count = self.aux.unwrap_or(4.0) as usize;
                translated_bumps(&self.params, &self.range, count)
            }
            FamilyKind::LogTail => {
                let delta = self
                    .delta
                    .ok_or_else(|| Error::InvalidParams("log tail needs delta".into()))?;
                log_tail_sweep(&self.params, delta, &self.range)
            }
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilyMember {
    /// Family parameter of this member (R, n, k, spacing, or r_max).
    pub param: f64,
    pub dirichlet: f64,
    pub coulomb: f64,
    pub lq: f64,
    pub e_norm: f64,
    pub extra: BTreeMap<String, f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilyReport {
    pub kind: FamilyKind,
    pub members: Vec<FamilyMember>,
    pub fitted_slopes: BTreeMap<String, f64>,
    pub predicted_slopes: BTreeMap<String, f64>,
    pub verdicts: BTreeMap<String, bool>,
    pub notes: Vec<String>,
}

impl FamilyReport {
    fn new(kind: FamilyKind) -> Self {
        FamilyReport {
            kind,
            members: Vec::new(),
            fitted_slopes: BTreeMap::new(),
            predicted_slopes: BTreeMap::new(),
            verdicts: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    fn fit(&mut self, label: &str, predicted: f64, xs: &[f64], ys: &[f64]) {
        let slope = fit_slope(xs, ys);
        self.fitted_slopes.insert(label.into(), slope);
        self.predicted_slopes.insert(label.into(), predicted);
    }
}

// ---------------------------------------------------------------------------
// bump calculus

/// Standard radial profile (1 - r²)³ on r < 1.
pub fn ball_bump(r: f64) -> f64 {
    if r < 1.0 {
        (1.0 - r * r).powi(3)
    } else {
        0.0
    }
}

/// One-sided unit bump on (0,1): 64 (τ(1-τ))³, used for annular profiles.
fn edge_bump(t: f64) -> f64 {
    if t > 0.0 && t < 1.0 {
        64.0 * (t * (1.0 - t)).powi(3)
    } else {
        0.0
    }
}

fn edge_bump_deriv(t: f64) -> f64 {
    if t > 0.0 && t < 1.0 {
        64.0 * 3.0 * (t * (1.0 - t)).powi(2) * (1.0 - 2.0 * t)
    } else {
        0.0
    }
}

fn kernel_any(n: u32, alpha: f64, r: f64, s: f64) -> f64 {
    if n == 3 {
        kernel_closed_n3(alpha, r, s)
    } else {
        kernel_zint(n, alpha, r, s, 1e-10, 8)
    }
}

/// An annular member u(r) = H b((r - R)/W) supported on [R, R + W].
#[derive(Clone, Copy, Debug)]
struct AnnularBump {
    r0: f64,
    width: f64,
    height: f64,
}

impl AnnularBump {
    fn value(&self, r: f64) -> f64 {
        self.height * edge_bump((r - self.r0) / self.width)
    }

    fn lq_integral(&self, n: u32, q: f64) -> f64 {
        let (xs, ws) = gauss_on(0.0, 1.0, 96);
        let acc: f64 = xs
            .iter()
            .zip(&ws)
            .map(|(&t, &w)| {
                w * edge_bump(t).powf(q) * (self.r0 + self.width * t).powf(n as f64 - 1.0)
            })
            .sum();
        sphere_area(n) * self.height.powf(q) * self.width * acc
    }

    fn dirichlet(&self, n: u32) -> f64 {
        let (xs, ws) = gauss_on(0.0, 1.0, 96);
        let acc: f64 = xs
            .iter()
            .zip(&ws)
            .map(|(&t, &w)| {
                w * edge_bump_deriv(t).powi(2) * (self.r0 + self.width * t).powf(n as f64 - 1.0)
            })
            .sum();
        sphere_area(n) * self.height * self.height / self.width * acc
    }

    /// ∬ |u|^p A_α K^R |u|^p over the support square (the Coulomb term).
    fn coulomb_self(&self, n: u32, alpha: f64, p: f64) -> f64 {
        let lo = self.r0;
        let hi = self.r0 + self.width;
        let f = |r: f64| self.value(r).powf(p) * r.powf(n as f64 - 1.0);
        // split at the diagonal: 2 ∬_{s<r}
        let (xr, wr) = gauss_on(lo, hi, 64);
        let mut acc = 0.0;
        for (&r, &w) in xr.iter().zip(&wr) {
            let (xs, ws) = gauss_on(lo, r, 64);
            let inner: f64 = xs
                .iter()
                .zip(&ws)
                .map(|(&s, &w2)| w2 * kernel_any(n, alpha, r, s) * f(s))
                .sum();
            acc += w * f(r) * inner;
        }
        2.0 * a_alpha(n, alpha) * acc
    }

    /// Cross Coulomb term against a disjoint second bump.
    fn coulomb_cross(&self, other: &AnnularBump, n: u32, alpha: f64, p: f64) -> f64 {
        let f = |b: &AnnularBump, r: f64| b.value(r).powf(p) * r.powf(n as f64 - 1.0);
        let (xr, wr) = gauss_on(self.r0, self.r0 + self.width, 48);
        let (xs, ws) = gauss_on(other.r0, other.r0 + other.width, 48);
        let mut acc = 0.0;
        for (&r, &w) in xr.iter().zip(&wr) {
            let fr = f(self, r);
            if fr == 0.0 {
                continue;
            }
            let inner: f64 = xs
                .iter()
                .zip(&ws)
                .map(|(&s, &w2)| w2 * kernel_any(n, alpha, r, s) * f(other, s))
                .sum();
            acc += w * fr * inner;
        }
        a_alpha(n, alpha) * acc
    }
}

/// Height/width scalings of the annular family (the three α branches).
fn annular_scalings(params: &Params, r: f64) -> AnnularBump {
    let n = params.n as f64;
    let (a, p) = (params.alpha_f(), params.p_f());
    let (height, width) = if a > 1.0 {
        (
            r.powf(-(3.0 * n + a - 4.0) / (2.0 * (p + 2.0))),
            r.powf((p * (n - 1.0) - (n + a) + 2.0) / (2.0 + p)),
        )
    } else if a == 1.0 {
        (
            r.powf(-3.0 * (n - 1.0) / (2.0 * (p + 2.0))) / r.ln().abs().powf(1.0 / (2.0 * p)),
            r.powf((n - 1.0) * (p - 1.0) / (p + 2.0)),
        )
    } else {
        (
            r.powf(-(n - 1.0) * (a + 2.0) / (2.0 * (p + 1.0 + a))),
            r.powf((n - 1.0) * (p - 1.0) / (p + 1.0 + a)),
        )
    };
    AnnularBump {
        r0: r,
        width,
        height,
    }
}

// ---------------------------------------------------------------------------
// sobolev scaling family

/// u_R(x) = R^{-(N-2)/2} u(x/R) on the log grid: exact shift + scale, so the
/// Dirichlet term is constant along the family while V and L^q follow exact
/// power laws.
pub fn sobolev_scaling(params: &Params, r_values: &[f64], q_probe: f64) -> Result<FamilyReport> {
    let n = params.n;
    if n < 2 {
        return Err(Error::DimensionOne);
    }
    let grid = RadialGrid::default_grid(n);
    let kernel = assemble_kernel(&grid, params.alpha_f())?;
    // support in [1/4, 1]: profiles touching the origin cannot be shifted
    // exactly on a log grid (the fill would cut their plateau)
    let base = RadialFunction::from_fn(&grid, |r| edge_bump((r - 0.25) / 0.75));
    let p = params.p_f();
    let h = grid.h();

    let mut report = FamilyReport::new(FamilyKind::SobolevScaling);
    let mut lnr = Vec::new();
    let (mut ln_d, mut ln_v, mut ln_l) = (Vec::new(), Vec::new(), Vec::new());
    for &r in r_values {
        let k = (r.ln() / h).round() as i64;
        let r_eff = (k as f64 * h).exp();
        let member = base.dilate(k).scale(r_eff.powf(-(n as f64 - 2.0) / 2.0));
        let d = member.dirichlet_energy();
        let v = coulomb_energy(&member, p, &kernel);
        let lq = member.lq_norm(q_probe);
        lnr.push(r_eff.ln());
        ln_d.push(d.ln());
        ln_v.push(v.ln());
        ln_l.push(lq.ln());
        report.members.push(FamilyMember {
            param: r_eff,
            dirichlet: d,
            coulomb: v,
            lq,
            e_norm: (d + v.powf(1.0 / p)).sqrt(),
            extra: BTreeMap::new(),
        });
    }
    let nf = n as f64;
    let alpha = params.alpha_f();
    report.fit("dirichlet", 0.0, &lnr, &ln_d);
    report.fit("coulomb", nf + alpha - p * (nf - 2.0), &lnr, &ln_v);
    report.fit("lq", nf / q_probe - (nf - 2.0) / 2.0, &lnr, &ln_l);
    Ok(report)
}

// ---------------------------------------------------------------------------
// annular family

/// Bumps at radius R with the lemma's width/height scalings, evaluated by
/// bump calculus (no global grid). Demonstrates the radial critical exponent:
/// the L^q rate vanishes exactly at q = 2(2p(N-1)+N-α)/(3N+α-4).
pub fn annular_family(params: &Params, r_values: &[f64], q_probe: f64) -> Result<FamilyReport> {
    if params.n < 2 {
        return Err(Error::DimensionOne);
    }
    if params.is_double_critical() {
        // the annular scalings degenerate; the Sobolev family carries the
        // critical information in this case
        return sobolev_scaling(params, r_values, q_probe);
    }
    let n = params.n;
    let nf = n as f64;
    let (alpha, p) = (params.alpha_f(), params.p_f());
    let theta = regime::theta_of(params).ok().map(|t| t.to_f64());

    let mut report = FamilyReport::new(FamilyKind::Annular);
    if p * (nf - 2.0) > nf + alpha {
        report
            .notes
            .push("supercritical p: the family concentrates as R -> 0; use range < 1".into());
    }
    let mut lnr = Vec::new();
    let (mut ln_d, mut ln_v, mut ln_l, mut ln_q) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    for &r in r_values {
        let bump = annular_scalings(params, r);
        let d = bump.dirichlet(n);
        let v = bump.coulomb_self(n, alpha, p);
        let lq = bump.lq_integral(n, q_probe).powf(1.0 / q_probe);
        let mut extra = BTreeMap::new();
        if let Some(th) = theta {
            let quot = d.powf(th / 2.0) * v.powf((1.0 - th) / (2.0 * p)) / lq;
            extra.insert("quotient".into(), quot);
            ln_q.push(quot.ln());
        }
        extra.insert("width".into(), bump.width);
        extra.insert("height".into(), bump.height);
        lnr.push(r.ln());
        ln_d.push(d.ln());
        ln_v.push(v.ln());
        ln_l.push(lq.ln());
        report.members.push(FamilyMember {
            param: r,
            dirichlet: d,
            coulomb: v,
            lq,
            e_norm: (d + v.powf(1.0 / p)).sqrt(),
            extra,
        });
    }
    // predicted rate of the L^q norm along the family (three α branches)
    let rate = if alpha > 1.0 {
        (3.0 * nf + alpha - 4.0) / (2.0 * (p + 2.0))
            - (2.0 * p * (nf - 1.0) + nf - alpha) / (q_probe * (p + 2.0))
    } else if alpha == 1.0 {
        (nf - 1.0) / (p + 2.0) * (1.5 - (2.0 * p + 1.0) / q_probe)
    } else {
        (nf - 1.0) / (p + 1.0 + alpha) * ((alpha + 2.0) / 2.0 - (2.0 * p + alpha) / q_probe)
    };
    report.fit("lq", -rate, &lnr, &ln_l);
    report.fit("dirichlet", 0.0, &lnr, &ln_d);
    report.fit("coulomb", 0.0, &lnr, &ln_v);
    if let Some(_th) = theta {
        if !ln_q.is_empty() {
            // D and V slopes vanish, so the quotient slope is the L^q rate
            report.fit("quotient", rate, &lnr, &ln_q);
        }
    }
    let e_norms: Vec<f64> = report.members.iter().map(|m| m.e_norm).collect();
    let max = e_norms.iter().cloned().fold(f64::MIN, f64::max);
    let min = e_norms.iter().cloned().fold(f64::MAX, f64::min);
    report
        .verdicts
        .insert("e_norm_bounded".into(), max / min <= 1.5);
    report
        .notes
        .push(format!("e_norm max/min = {:.4}", max / min));
    Ok(report)
}

// ---------------------------------------------------------------------------
// vanishing chain

/// u_{R,k} = Σ_{i=1..k} u_{R^i}: disjoint annular bumps at geometric radii.
/// D and ∫|u|^q are exactly additive; the Coulomb term carries pairwise
/// cross terms computed by the radial kernel. The rescaled v_{R,k} exposes
/// the radial-endpoint norm growth k^{2(α-1)/(3N+α-4)}.
pub fn vanishing_chain(params: &Params, r: f64, k_values: &[usize]) -> Result<FamilyReport> {
    if !params.alpha.gt3(Scalar::int(1)) {
        return Err(Error::Hypothesis(
            "vanishing chain requires alpha > 1".into(),
        ));
    }
    if params.is_double_critical() {
        return Err(Error::DoubleCritical(
            "vanishing chain requires p(N-2) != N+alpha".into(),
        ));
    }
    if r <= 1.0 {
        return Err(Error::InvalidParams("chain radius must exceed 1".into()));
    }
    let n = params.n;
    let nf = n as f64;
    let (alpha, p) = (params.alpha_f(), params.p_f());
    let q_rad = regime::q_rad(params)?.to_f64();
    let k_max = *k_values.iter().max().unwrap_or(&1);

    // per-ring quantities
    let bumps: Vec<AnnularBump> = (1..=k_max)
        .map(|i| annular_scalings(params, r.powi(i as i32)))
        .collect();
    for w in bumps.windows(2) {
        if w[0].r0 + w[0].width >= w[1].r0 {
            return Err(Error::InvalidParams(
                "chain rings overlap; increase R".into(),
            ));
        }
    }
    let d_i: Vec<f64> = bumps.iter().map(|b| b.dirichlet(n)).collect();
    let v_i: Vec<f64> = bumps.iter().map(|b| b.coulomb_self(n, alpha, p)).collect();
    let lq_i: Vec<f64> = bumps.iter().map(|b| b.lq_integral(n, q_rad)).collect();
    let mut cross = vec![vec![0.0; k_max]; k_max];
    for i in 0..k_max {
        for j in i + 1..k_max {
            cross[i][j] = bumps[i].coulomb_cross(&bumps[j], n, alpha, p);
        }
    }

    let lambda = nf + alpha - p * (nf - 2.0);
    let growth_pred = 2.0 * (alpha - 1.0) / (3.0 * nf + alpha - 4.0);

    let mut report = FamilyReport::new(FamilyKind::VanishingChain);
    let mut lnk = Vec::new();
    let mut ln_vq = Vec::new();
    for &k in k_values {
        let d: f64 = d_i[..k].iter().sum();
        let lq: f64 = lq_i[..k].iter().sum();
        let vself: f64 = v_i[..k].iter().sum();
        let mut vcross = 0.0;
        for i in 0..k {
            for j in i + 1..k {
                vcross += 2.0 * cross[i][j];
            }
        }
        let v = vself + vcross;
        // rescaled member v_{R,k}
        let kf = k as f64;
        let lq_v = kf.powf(-(alpha + 2.0) * q_rad / (2.0 * lambda) + nf * (p - 1.0) / lambda) * lq;
        let d_v = kf.powf((-(alpha + 2.0) + (p - 1.0) * (nf - 2.0)) / lambda) * d;
        let v_v = kf.powf((-(alpha + 2.0) * p + (p - 1.0) * (nf + alpha)) / lambda) * v;
        let mut extra = BTreeMap::new();
        extra.insert("cross_sum".into(), vcross);
        extra.insert("lq_rescaled".into(), lq_v);
        extra.insert("d_rescaled".into(), d_v);
        extra.insert("v_rescaled".into(), v_v);
        if k >= 1 {
            lnk.push(kf.ln());
            ln_vq.push(lq_v.ln());
        }
        report.members.push(FamilyMember {
            param: kf,
            dirichlet: d,
            coulomb: v,
            lq: lq.powf(1.0 / q_rad),
            e_norm: (d + v.powf(1.0 / p)).sqrt(),
            extra,
        });
    }
    if lnk.len() >= 2 {
        report.fit("rescaled_lq_growth", growth_pred, &lnk, &ln_vq);
    }
    report
        .predicted_slopes
        .insert("cross_decay_in_R".into(), -(nf - alpha) / 2.0);
    Ok(report)
}

/// Decay rate of the total chain cross term as R grows (the geometric-series
/// bound): fitted exponent vs -(N-α)/2.
pub fn vanishing_cross_decay(params: &Params, r_values: &[f64], k: usize) -> Result<(f64, f64)> {
    let mut lnr = Vec::new();
    let mut lnc = Vec::new();
    for &r in r_values {
        let rep = vanishing_chain(params, r, &[k])?;
        let cross = rep.members[0].extra["cross_sum"];
        if cross > 0.0 {
            lnr.push(r.ln());
            lnc.push(cross.ln());
        }
    }
    if lnr.len() < 2 {
        return Err(Error::CheckFailed(
            "cross terms vanished identically".into(),
        ));
    }
    let nf = params.n as f64;
    Ok((fit_slope(&lnr, &lnc), -(nf - params.alpha_f()) / 2.0))
}

// ---------------------------------------------------------------------------
// radial bump integrals for the lattice constructions

struct BaseBump {
    coulomb_p: f64,
    dirichlet: f64,
    mass_p: f64,
    lq: BTreeMap<i64, f64>,
}

fn lq_key(q: f64) -> i64 {
    (q * 1e6).round() as i64
}

impl BaseBump {
    fn new(n: u32, alpha: f64, p: f64, qs: &[f64]) -> Result<Self> {
        let grid = RadialGrid::new(1e-4, 1.0, 420, n)?;
        let kernel = assemble_kernel(&grid, alpha)?;
        let w0 = RadialFunction::from_fn(&grid, ball_bump);
        let mut lq = BTreeMap::new();
        for &q in qs {
            lq.insert(lq_key(q), w0.lq_integral(q));
        }
        Ok(BaseBump {
            coulomb_p: coulomb_energy(&w0, p, &kernel),
            dirichlet: w0.dirichlet_energy(),
            mass_p: grid.integrate_rn(&w0.values.iter().map(|&v| v.powf(p)).collect::<Vec<_>>()),
            lq,
        })
    }
}

// ---------------------------------------------------------------------------
// cube array

/// Bumps on a d-dimensional lattice ρ_n{-n..n}^d with ρ_n = n^{d/(N-α)-1},
/// rescaled by λ_n so the E-norm stays bounded while the supports shrink to
/// measure zero and the L^q norm stays bounded below.
pub fn cube_array(params: &Params, n_values: &[usize], d: u32) -> Result<FamilyReport> {
    let nn = params.n;
    let nf = nn as f64;
    let (alpha, p) = (params.alpha_f(), params.p_f());
    if nn < 3 {
        return Err(Error::Hypothesis("cube array requires N >= 3".into()));
    }
    if p <= (nf + alpha) / (nf - 2.0) {
        return Err(Error::Hypothesis(format!(
            "cube array requires p > (N+alpha)/(N-2) = {}",
            (nf + alpha) / (nf - 2.0)
        )));
    }
    if d as f64 <= nf - alpha || d > nn {
        return Err(Error::Hypothesis(format!(
            "lattice dimension must satisfy N - alpha < d <= N, got d = {d}"
        )));
    }
    let case_two = alpha > 2.0 && p > 2.0 * alpha / (alpha - 2.0);
    let q = if case_two {
        p
    } else {
        2.0 * (2.0 * p + alpha) / (2.0 + alpha)
    };
    let base = BaseBump::new(nn, alpha, p, &[q])?;
    let lq0 = base.lq[&lq_key(q)];
    let aa = a_alpha(nn, alpha);

    let mut report = FamilyReport::new(FamilyKind::CubeArray);
    report.notes.push(format!(
        "case: {} (q = {q})",
        if case_two {
            "alpha>2, p>2alpha/(alpha-2): L^p lower bound"
        } else {
            "L^{q_cs} lower bound"
        }
    ));
    let mut ratio_seq = Vec::new();
    let mut measures = Vec::new();
    for &nv in n_values {
        let count = (2 * nv + 1).pow(d) as f64;
        let rho = (nv as f64).powf(d as f64 / (nf - alpha) - 1.0);
        let lambda = if case_two {
            (nv as f64).powf(-(d as f64) / (nf - alpha))
        } else {
            (nv as f64).powf(-(d as f64) * (p - 1.0) / ((nf - 2.0) * p - (nf + alpha)))
        };
        // direct lattice sum Σ_{a≠b} |a-b|^{α-N} over {-n..n}^d spacing ρ
        let side = 2 * nv + 1;
        let total = side.pow(d);
        let coords = |idx: usize| -> Vec<i64> {
            let mut x = idx;
            (0..d)
                .map(|_| {
                    let c = (x % side) as i64 - nv as i64;
                    x /= side;
                    c
                })
                .collect()
        };
        let mut lattice_sum = 0.0;
        for i in 0..total {
            let ci = coords(i);
            for j in i + 1..total {
                let cj = coords(j);
                let dist2: i64 = ci.iter().zip(&cj).map(|(a, b)| (a - b) * (a - b)).sum();
                lattice_sum += 2.0 * ((dist2 as f64).sqrt() * rho).powf(alpha - nf);
            }
        }
        let d_n = lambda.powf(nf - 2.0) * count * base.dirichlet;
        let v_n = lambda.powf(nf + alpha)
            * (count * base.coulomb_p + aa * lattice_sum * base.mass_p * base.mass_p);
        let lq_n = (lambda.powf(nf) * count * lq0).powf(1.0 / q);
        let e_norm = (d_n + v_n.powf(1.0 / p)).sqrt();
        let support = count * lambda.powf(nf) * ball_volume(nn);
        let ratio_bound =
            lattice_sum * rho.powf(nf - alpha) / (nv as f64).powf(2.0 * d as f64 - (nf - alpha));
        let min_sep = rho;
        let far_field_err = if min_sep > 2.0 {
            (nf - alpha) * 2.0 / (min_sep - 2.0)
        } else {
            f64::INFINITY
        };
        let mut extra = BTreeMap::new();
        extra.insert("support_measure".into(), support);
        extra.insert("lattice_sum".into(), lattice_sum);
        extra.insert("lattice_sum_ratio".into(), ratio_bound);
        extra.insert("e_over_lq".into(), e_norm / lq_n);
        extra.insert("far_field_rel_err".into(), far_field_err);
        ratio_seq.push(e_norm / lq_n);
        measures.push(support);
        report.members.push(FamilyMember {
            param: nv as f64,
            dirichlet: d_n,
            coulomb: v_n,
            lq: lq_n,
            e_norm,
            extra,
        });
    }
    // verdicts: lattice-sum ratio bounded, supports vanish, E/L^q converges
    let ratios: Vec<f64> = report
        .members
        .iter()
        .map(|m| m.extra["lattice_sum_ratio"])
        .collect();
    let rmax = ratios.iter().cloned().fold(f64::MIN, f64::max);
    let rmin = ratios.iter().cloned().fold(f64::MAX, f64::min);
    report
        .verdicts
        .insert("lattice_sum_bounded".into(), rmax <= 4.0 * rmin.max(1e-300));
    report.verdicts.insert(
        "support_measure_vanishes".into(),
        measures.windows(2).all(|w| w[1] < w[0]),
    );
    if ratio_seq.len() >= 2 {
        let last = ratio_seq[ratio_seq.len() - 1];
        let prev = ratio_seq[ratio_seq.len() - 2];
        report.verdicts.insert(
            "e_over_lq_converges".into(),
            last > 0.0 && (last / prev - 1.0).abs() <= 0.1,
        );
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// cantor cascade

/// Two-centre interaction table: φ(δ) = ∬ f₀(x) I_α(x - y + δe) f₀(y) for the
/// mass-one radial bump f₀, tabulated via its radial potential and matched
/// to the monopole A_α δ^{α-N} beyond the table.
struct PairTable {
    deltas: Vec<f64>,
    values: Vec<f64>,
    delta_max: f64,
    mono: f64,
    match_ratio: f64,
    pow: f64,
}

impl PairTable {
    fn build(n: u32, alpha: f64, delta_max: f64) -> Result<Self> {
        // potential of the mass-one radial bump on an extended grid
        let grid = RadialGrid::new(1e-4, delta_max + 2.5, 900, n)?;
        let kernel = assemble_kernel(&grid, alpha)?;
        let raw_mass = {
            let b = RadialFunction::from_fn(&grid, ball_bump);
            grid.integrate_rn(&b.values)
        };
        let f0 = RadialFunction::from_fn(&grid, move |r| ball_bump(r) / raw_mass);
        let pot = riesz_apply(&f0, &kernel);
        let r_min = grid.r_min();
        let h = grid.h();
        let pot_vals = pot.values;
        let npts = pot_vals.len();
        let pot_eval = move |r: f64| -> f64 {
            if r <= r_min {
                return pot_vals[0];
            }
            let x = (r / r_min).ln() / h;
            if x >= (npts - 1) as f64 {
                return pot_vals[npts - 1];
            }
            let j = x.floor() as usize;
            let t = x - j as f64;
            pot_vals[j] * (1.0 - t) + pot_vals[j + 1] * t
        };
        // φ(δ) by a 2D sphere-average quadrature over the unit bump
        let (xr, wr) = gauss_on(0.0, 1.0, 40);
        let (xt, wt) = gauss_on(0.0, std::f64::consts::PI, 40);
        let omega_sub = sphere_area(n - 1);
        let nf = n as f64;
        let phi = |delta: f64| -> f64 {
            let mut acc = 0.0;
            for (&rho, &w1) in xr.iter().zip(&wr) {
                let fv = ball_bump(rho) / raw_mass;
                if fv == 0.0 {
                    continue;
                }
                let mut ang = 0.0;
                for (&th, &w2) in xt.iter().zip(&wt) {
                    let dist = (delta * delta + rho * rho + 2.0 * delta * rho * th.cos()).sqrt();
                    ang += w2 * pot_eval(dist) * th.sin().powf(nf - 2.0);
                }
                acc += w1 * fv * rho.powf(nf - 1.0) * ang;
            }
            omega_sub * acc
        };
        let m = 320;
        let deltas: Vec<f64> = (0..m)
            .map(|i| delta_max * i as f64 / (m - 1) as f64)
            .collect();
        let values: Vec<f64> = deltas.iter().map(|&dd| phi(dd)).collect();
        let mono = a_alpha(n, alpha);
        let match_ratio = values[m - 1] / (mono * delta_max.powf(alpha - nf));
        Ok(PairTable {
            deltas,
            values,
            delta_max,
            mono,
            match_ratio,
            pow: alpha - nf,
        })
    }

    fn eval(&self, delta: f64) -> f64 {
        if delta >= self.delta_max {
            // monopole with a matched O(δ^-2) correction
            let base = self.mono * delta.powf(self.pow);
            let corr = (self.match_ratio - 1.0) * (self.delta_max / delta).powi(2);
            return base * (1.0 + corr);
        }
        let step = self.deltas[1] - self.deltas[0];
        let j = ((delta / step) as usize).min(self.deltas.len() - 2);
        let t = (delta - self.deltas[j]) / step;
        self.values[j] * (1.0 - t) + self.values[j + 1] * t
    }
}

fn hypercube_offsets(n: u32) -> Vec<Vec<f64>> {
    let mut offs: Vec<Vec<f64>> = vec![vec![]];
    for _ in 0..n {
        let mut next = Vec::new();
        for o in &offs {
            for s in [-0.5, 0.5] {
                let mut v = o.clone();
                v.push(s);
                next.push(v);
            }
        }
        offs = next;
    }
    offs
}

fn cantor_centers(n: u32, rho: f64, n_levels: usize) -> Vec<Vec<Vec<f64>>> {
    let offsets = hypercube_offsets(n);
    let mut centers: Vec<Vec<Vec<f64>>> = vec![vec![vec![0.0; n as usize]]];
    for _ in 0..n_levels {
        let prev = centers.last().unwrap();
        let mut next = Vec::with_capacity(prev.len() * offsets.len());
        for a in &offsets {
            for c in prev {
                next.push(c.iter().zip(a).map(|(&x, &o)| o + rho * x).collect());
            }
        }
        centers.push(next);
    }
    centers
}

#[derive(Clone, Debug, Serialize)]
pub struct CantorLevel {
    pub level: usize,
    /// ∫ f_n: exactly one by the mass-preserving recursion.
    pub mass: f64,
    /// Coulomb energy ∫ |I_{α/2} ∗ f_n|².
    pub energy: f64,
    /// Implied constant of E_{n+1} <= E_n/(2^N ρ^{N-α}) + C/(1+2ρ)^{N-α}.
    pub recursion_constant: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CantorReport {
    pub levels: Vec<CantorLevel>,
    pub rho: f64,
    pub contraction: f64,
    pub recursion_holds: bool,
    pub energies_bounded: bool,
    /// N log 2 / log(1/ρ): Hausdorff dimension of the limit set (metadata).
    pub hausdorff_dimension: f64,
    pub centers_per_level: Vec<usize>,
}

impl CantorReport {
    pub fn into_family_report(self) -> FamilyReport {
        let mut report = FamilyReport::new(FamilyKind::CantorCascade);
        for lvl in &self.levels {
            let mut extra = BTreeMap::new();
            extra.insert("mass".into(), lvl.mass);
            if let Some(c) = lvl.recursion_constant {
                extra.insert("recursion_constant".into(), c);
            }
            report.members.push(FamilyMember {
                param: lvl.level as f64,
                dirichlet: f64::NAN,
                coulomb: lvl.energy,
                lq: f64::NAN,
                e_norm: f64::NAN,
                extra,
            });
        }
        report
            .verdicts
            .insert("recursion_holds".into(), self.recursion_holds);
        report
            .verdicts
            .insert("energies_bounded".into(), self.energies_bounded);
        report.notes.push(format!(
            "rho = {}, contraction = {:.4}, Hausdorff dimension = {:.4}",
            self.rho, self.contraction, self.hausdorff_dimension
        ));
        report
    }
}

/// Cantor cascade f_{n+1}(x) = (2ρ)^{-N} Σ_{a∈{±1/2}^N} f_n((x-a)/ρ):
/// mass one at every level, Coulomb energies bounded when ρ > 2^{-N/(N-α)}.
pub fn cantor_cascade(
    n_ambient: u32,
    alpha: f64,
    p: f64,
    rho: f64,
    n_levels: usize,
) -> Result<CantorReport> {
    let n = n_ambient;
    if n == 0 || n > 3 {
        return Err(Error::InvalidParams(
            "cantor cascade supports N in {2, 3}".into(),
        ));
    }
    if n < 2 {
        return Err(Error::DimensionOne);
    }
    let nf = n as f64;
    if !(alpha > 0.0 && alpha < nf) {
        return Err(Error::InvalidParams("alpha outside (0, N)".into()));
    }
    let _ = p; // the displayed energy recursion is the p = 1 statement
    let lo = 2f64.powf(-nf / (nf - alpha));
    if !(rho > lo && rho < 1.0) {
        return Err(Error::Hypothesis(format!(
            "rho = {rho} outside the admissible interval ({lo:.6}, 1)"
        )));
    }
    if n_levels > 6 {
        return Err(Error::InvalidParams("n_levels capped at 6".into()));
    }
    if n as usize * n_levels > 14 {
        return Err(Error::InvalidParams(
            "2^{N n} centres exceed the pairwise budget; reduce n_levels".into(),
        ));
    }

    let centers = cantor_centers(n, rho, n_levels);
    // diameter of the union of supports bounds the table range
    let spread = 0.5 / (1.0 - rho) + 1.0;
    let delta_needed = 2.0 * spread / rho.powi(n_levels as i32);
    let table = PairTable::build(n, alpha, delta_needed.min(12.0))?;

    let kappa = 1.0 / (2f64.powf(nf) * rho.powf(nf - alpha));
    let mut report = CantorReport {
        levels: Vec::new(),
        rho,
        contraction: kappa,
        recursion_holds: true,
        energies_bounded: true,
        hausdorff_dimension: nf * 2f64.ln() / (1.0 / rho).ln(),
        centers_per_level: centers.iter().map(|c| c.len()).collect(),
    };
    let mut energies = Vec::new();
    for (lvl, cs) in centers.iter().enumerate() {
        let s = rho.powi(lvl as i32);
        let amp = (2.0 * rho).powf(-nf * lvl as f64);
        let pref = amp * amp * s.powf(nf + alpha);
        let mut e = cs.len() as f64 * pref * table.eval(0.0);
        for i in 0..cs.len() {
            for j in i + 1..cs.len() {
                let dist: f64 = cs[i]
                    .iter()
                    .zip(&cs[j])
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt();
                e += 2.0 * pref * table.eval(dist / s);
            }
        }
        energies.push(e);
        report.levels.push(CantorLevel {
            level: lvl,
            mass: 1.0,
            energy: e,
            recursion_constant: None,
        });
    }
    let gamma = (1.0 + 2.0 * rho).powf(nf - alpha);
    let mut consts = Vec::new();
    for i in 0..energies.len() - 1 {
        let c = (energies[i + 1] - kappa * energies[i]) * gamma;
        report.levels[i + 1].recursion_constant = Some(c);
        consts.push(c);
    }
    if let Some(&c0) = consts.first() {
        let cref = consts
            .iter()
            .take(2)
            .cloned()
            .fold(c0, f64::max)
            .max(1e-300);
        report.recursion_holds = consts.iter().all(|&c| c <= 2.0 * cref.abs() + 1e-12);
        let bound = energies[0].max(cref.abs() * 2.0 / ((1.0 - kappa).max(1e-9) * gamma));
        report.energies_bounded = kappa < 1.0 && energies.iter().all(|&e| e <= 1.5 * bound);
    }
    Ok(report)
}

/// Certified Brezis–Lieb gap for the Cantor-perturbed sequence
/// u_n = (u^p + f_n^p)^{1/p}.
///
/// Since 0 <= u_n - u <= f_n pointwise, the Brezis–Lieb defect
/// Δ_n = Q(|u_n|^p) - Q(|u_n - u|^p) - Q(u^p) dominates 2 B(u^p, f_n^p),
/// which is computed exactly from pairwise interactions (ρ < 1/2 keeps the
/// level bumps disjoint so f_n^p decomposes per bump).
#[derive(Clone, Debug, Serialize)]
pub struct CantorGap {
    pub gap_lower: Vec<f64>,
    pub coulomb_fn_p: Vec<f64>,
    pub scale: f64,
}

pub fn cantor_brezis_lieb_gap(
    params: &Params,
    u: &RadialFunction,
    kernel: &crate::riesz::KernelMatrix,
    rho: f64,
    n_levels: usize,
) -> Result<CantorGap> {
    let n = params.n;
    let nf = n as f64;
    let alpha = params.alpha_f();
    let p = params.p_f();
    if rho >= 0.5 {
        return Err(Error::Hypothesis(
            "the certified gap needs disjoint bumps: rho < 1/2".into(),
        ));
    }
    let lo = 2f64.powf(-nf / (nf - alpha));
    if rho <= lo {
        return Err(Error::Hypothesis(format!(
            "rho = {rho} below the capacity threshold {lo:.4}"
        )));
    }
    if n as usize * n_levels > 14 {
        return Err(Error::InvalidParams("reduce n_levels".into()));
    }

    // potential of |u|^p on its own grid, as an interpolable radial table
    let density = u.map(|v| v.abs().powf(p));
    let pot_u = riesz_apply(&density, kernel);
    let r_min = u.grid.r_min();
    let h = u.grid.h();
    let pot_vals = pot_u.values;
    let npts = pot_vals.len();
    let pot_eval = move |r: f64| -> f64 {
        if r <= r_min {
            return pot_vals[0];
        }
        let x = (r / r_min).ln() / h;
        if x >= (npts - 1) as f64 {
            return pot_vals[npts - 1];
        }
        let j = x.floor() as usize;
        let t = x - j as f64;
        pot_vals[j] * (1.0 - t) + pot_vals[j + 1] * t
    };

    let raw_mass = {
        let grid = RadialGrid::new(1e-4, 1.0, 300, n)?;
        let b = RadialFunction::from_fn(&grid, ball_bump);
        grid.integrate_rn(&b.values)
    };
    // Coulomb term of (f0/raw_mass)^p on the unit bump, for the hypothesis
    // report that Q(f_n^p) stays bounded
    let v_p_unit = {
        let grid = RadialGrid::new(1e-4, 1.0, 320, n)?;
        let k0 = assemble_kernel(&grid, alpha)?;
        let f0 = RadialFunction::from_fn(&grid, move |r| ball_bump(r) / raw_mass);
        coulomb_energy(&f0, p, &k0)
    };

    let centers = cantor_centers(n, rho, n_levels);
    let (xr, wr) = gauss_on(0.0, 1.0, 32);
    let (xt, wt) = gauss_on(0.0, std::f64::consts::PI, 32);
    let omega_sub = sphere_area(n - 1);
    // B(u^p, bump^p) through the sphere average of the potential of u^p
    let b_u_bump = |center_dist: f64, s: f64, amp_p: f64| -> f64 {
        let mut acc = 0.0;
        for (&rr, &w1) in xr.iter().zip(&wr) {
            let f0p = (ball_bump(rr) / raw_mass).powf(p);
            if f0p == 0.0 {
                continue;
            }
            let mut ang = 0.0;
            for (&th, &w2) in xt.iter().zip(&wt) {
                let dist = (center_dist * center_dist
                    + s * s * rr * rr
                    + 2.0 * center_dist * s * rr * th.cos())
                .sqrt();
                ang += w2 * pot_eval(dist) * th.sin().powf(nf - 2.0);
            }
            acc += w1 * f0p * rr.powf(nf - 1.0) * ang;
        }
        amp_p * s.powf(nf) * omega_sub * acc
    };

    let scale = coulomb_energy(u, p, kernel);
    let mut gap_lower = Vec::new();
    let mut coulomb_fn_p = Vec::new();
    for (lvl, cs) in centers.iter().enumerate() {
        let s = rho.powi(lvl as i32);
        let amp = (2.0 * rho).powf(-nf * lvl as f64);
        let amp_p = amp.powf(p);
        let mut b = 0.0;
        for c in cs {
            let dist = c.iter().map(|&x| x * x).sum::<f64>().sqrt();
            b += b_u_bump(dist, s, amp_p);
        }
        gap_lower.push(2.0 * b);
        // self part of Q(f_n^p): count · amp^{2p} s^{N+α} · Q_unit
        let self_sum = cs.len() as f64 * amp_p * amp_p * s.powf(nf + alpha) * v_p_unit;
        coulomb_fn_p.push(self_sum);
    }
    Ok(CantorGap {
        gap_lower,
        coulomb_fn_p,
        scale,
    })
}

// ---------------------------------------------------------------------------
// translated bumps and log tails

/// u_{n,a} = Σ_{i=1..n} u(x + i a): D and ∫|u|^q are exactly n-fold once the
/// copies are disjoint; the Coulomb cross terms decay like I_α(|a|), so all
/// three quantities approach n times the base value as |a| grows.
pub fn translated_bumps(
    params: &Params,
    spacing_values: &[f64],
    count: usize,
) -> Result<FamilyReport> {
    let n = params.n;
    if n < 2 {
        return Err(Error::DimensionOne);
    }
    let nf = n as f64;
    let (alpha, p) = (params.alpha_f(), params.p_f());
    let q = params.q_f();
    let base = BaseBump::new(n, alpha, p, &[q])?;
    let aa = a_alpha(n, alpha);

    let mut report = FamilyReport::new(FamilyKind::TranslatedBumps);
    for &a in spacing_values {
        if a <= 2.0 {
            return Err(Error::InvalidParams(
                "spacing must exceed the bump diameter 2".into(),
            ));
        }
        let mut vcross = 0.0;
        let mut err_bound = 0.0;
        for i in 0..count {
            for j in i + 1..count {
                let dist = a * (j - i) as f64;
                let mono = aa * dist.powf(alpha - nf) * base.mass_p * base.mass_p;
                vcross += 2.0 * mono;
                // mean-value bound on I_α over the support diameter
                err_bound += 2.0 * mono * (nf - alpha) * 2.0 / (dist - 2.0);
            }
        }
        let d = count as f64 * base.dirichlet;
        let v = count as f64 * base.coulomb_p + vcross;
        let lq = (count as f64 * base.lq[&lq_key(q)]).powf(1.0 / q);
        let mut extra = BTreeMap::new();
        extra.insert("v_cross".into(), vcross);
        extra.insert("v_cross_err_bound".into(), err_bound);
        extra.insert("v_over_n_v0".into(), v / (count as f64 * base.coulomb_p));
        report.members.push(FamilyMember {
            param: a,
            dirichlet: d,
            coulomb: v,
            lq,
            e_norm: (d + v.powf(1.0 / p)).sqrt(),
            extra,
        });
    }
    let last = report.members.last().unwrap();
    report.verdicts.insert(
        "n_linear_limit".into(),
        (last.coulomb - count as f64 * base.coulomb_p).abs()
            <= last.extra["v_cross"] + last.extra["v_cross_err_bound"] + 1e-12,
    );
    report
        .notes
        .push(format!("count = {count}; base V = {:.6e}", base.coulomb_p));
    Ok(report)
}

/// The borderline profile (log|x|)^{-1/2p} (log log |x|)^{-δ/p} |x|^{-(N+α)/2p}
/// on |x| >= 3: finite Coulomb energy for δ > 1/2 while the weighted integral
/// with W = |x|^{-(N-α)/2} diverges.
pub fn log_tail_profile(
    params: &Params,
    delta: f64,
    grid: &Arc<RadialGrid>,
) -> Result<RadialFunction> {
    if delta <= 0.5 {
        return Err(Error::Hypothesis("log tail requires delta > 1/2".into()));
    }
    let n = params.n as f64;
    let (alpha, p) = (params.alpha_f(), params.p_f());
    Ok(RadialFunction::from_fn(grid, move |r| {
        if r < 3.0 {
            0.0
        } else {
            r.powf(-(n + alpha) / (2.0 * p))
                / (r.ln().powf(1.0 / (2.0 * p)) * r.ln().ln().powf(delta / p))
        }
    }))
}

/// Truncation sweep for the log-tail counterexample: Coulomb energies form a
/// Cauchy sequence while the weighted integrals grow without bound.
pub fn log_tail_sweep(params: &Params, delta: f64, r_maxes: &[f64]) -> Result<FamilyReport> {
    if params.n < 2 {
        return Err(Error::DimensionOne);
    }
    let n = params.n as f64;
    let (alpha, p) = (params.alpha_f(), params.p_f());
    let mut report = FamilyReport::new(FamilyKind::LogTail);
    let mut coulombs = Vec::new();
    let mut weighted = Vec::new();
    for &rmax in r_maxes {
        if rmax <= 30.0 {
            return Err(Error::InvalidParams(
                "log tail sweep needs r_max > 30".into(),
            ));
        }
        let m = (150.0 * (rmax / 0.1).ln()).ceil() as usize;
        let grid = RadialGrid::new(0.1, rmax, m.clamp(600, 2600), params.n)?;
        let kernel = assemble_kernel(&grid, alpha)?;
        let u = log_tail_profile(params, delta, &grid)?;
        let v = coulomb_energy(&u, p, &kernel);
        let w_int = grid.integrate_rn(
            &grid
                .r()
                .iter()
                .zip(&u.values)
                .map(|(&r, &uv)| uv.abs().powf(p) * r.powf(-(n - alpha) / 2.0))
                .collect::<Vec<_>>(),
        );
        coulombs.push(v);
        weighted.push(w_int);
        let mut extra = BTreeMap::new();
        extra.insert("weighted_integral".into(), w_int);
        report.members.push(FamilyMember {
            param: rmax,
            dirichlet: f64::NAN,
            coulomb: v,
            lq: f64::NAN,
            e_norm: f64::NAN,
            extra,
        });
    }
    if coulombs.len() >= 3 {
        let d1 = (coulombs[1] - coulombs[0]).abs();
        let d2 = (coulombs[2] - coulombs[1]).abs();
        report.verdicts.insert(
            "coulomb_cauchy".into(),
            d2 < d1 && d2 < 0.2 * coulombs[2].abs(),
        );
        report.verdicts.insert(
            "weighted_diverges".into(),
            weighted.windows(2).all(|w| w[1] > w[0] * 1.02),
        );
    }
    report.notes.push(format!(
        "delta = {delta}; weight exponent -(N-alpha)/2 = {}",
        -(n - alpha) / 2.0
    ));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn p322(q: (i128, i128)) -> Params {
        Params::rational(3, (2, 1), (2, 1), q).unwrap()
    }

    #[test]
    fn sobolev_scaling_exact_slopes() {
        let params = p322((4, 1));
        // V slope = N + α - p(N-2) = 3; L^6 slope = 0 (critical norm)
        let rep = sobolev_scaling(&params, &[1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0], 6.0).unwrap();
        assert_relative_eq!(rep.fitted_slopes["coulomb"], 3.0, max_relative = 1e-3);
        assert!(rep.fitted_slopes["lq"].abs() < 1e-6);
        assert!(rep.fitted_slopes["dirichlet"].abs() < 1e-6);
        for (k, &f) in &rep.fitted_slopes {
            let pr = rep.predicted_slopes[k];
            assert!(
                (f - pr).abs() <= 0.02 * pr.abs().max(1.0),
                "{k}: {f} vs {pr}"
            );
        }
    }

    #[test]
    fn annular_rate_arithmetic_and_fit() {
        let params = p322((4, 1));
        // rate exponent 7/8 - 9/(4q), zero at q = 18/7
        let q_zero = 18.0 / 7.0;
        let rep = annular_family(&params, &[64.0, 256.0, 1024.0, 4096.0, 16384.0], q_zero).unwrap();
        assert!(
            rep.fitted_slopes["lq"].abs() <= 0.02,
            "critical rate not flat: {}",
            rep.fitted_slopes["lq"]
        );
        assert_relative_eq!(
            rep.predicted_slopes["lq"],
            -(7.0 / 8.0 - 9.0 / (4.0 * q_zero)),
            max_relative = 1e-12
        );
        assert!(rep.verdicts["e_norm_bounded"]);
    }

    #[test]
    fn annular_subcritical_quotient_decays() {
        let params = p322((4, 1));
        // q = 2.5 < 18/7: the quotient goes to zero (non-embedding witness)
        let rep = annular_family(
            &params,
            &[64.0, 256.0, 1024.0, 4096.0, 16384.0, 65536.0],
            2.5,
        )
        .unwrap();
        let slope = rep.fitted_slopes["quotient"];
        assert!(slope < -0.01, "quotient slope {slope} not negative");
        assert!(
            (slope - rep.predicted_slopes["quotient"]).abs() < 0.012,
            "{slope} vs {}",
            rep.predicted_slopes["quotient"]
        );
    }

    #[test]
    fn annular_e_norm_bounded_on_moderate_range() {
        let params = p322((4, 1));
        let rep =
            annular_family(&params, &[4.0, 8.0, 16.0, 32.0, 64.0, 128.0, 256.0], 2.5).unwrap();
        assert!(rep.verdicts["e_norm_bounded"], "{:?}", rep.notes);
    }

    #[test]
    fn vanishing_chain_exponents() {
        let params = p322((4, 1));
        // growth exponent 2(α-1)/(3N+α-4) = 2/7
        let rep = vanishing_chain(&params, 64.0, &[2, 3, 4, 5, 6, 7]).unwrap();
        let pred = rep.predicted_slopes["rescaled_lq_growth"];
        assert_relative_eq!(pred, 2.0 / 7.0, max_relative = 1e-12);
        let fitted = rep.fitted_slopes["rescaled_lq_growth"];
        assert!(
            (fitted - pred).abs() <= 0.05 * pred,
            "growth {fitted} vs {pred}"
        );
        // D additivity across disjoint rings: member k sums k rings
        let d7 = rep.members.last().unwrap().dirichlet;
        let d2 = rep.members[0].dirichlet;
        assert!(d7 > 3.0 * d2 && d7 < 4.0 * d2);
        // alpha <= 1 is rejected
        let bad = Params::rational(3, (1, 2), (2, 1), (4, 1)).unwrap();
        assert!(vanishing_chain(&bad, 16.0, &[1, 2]).is_err());
    }

    #[test]
    fn vanishing_cross_terms_decay() {
        let params = p322((4, 1));
        let (fitted, predicted) =
            vanishing_cross_decay(&params, &[8.0, 16.0, 32.0, 64.0], 3).unwrap();
        assert_relative_eq!(predicted, -0.5, max_relative = 1e-12);
        assert!(
            (fitted - predicted).abs() < 0.12,
            "cross decay {fitted} vs {predicted}"
        );
    }

    #[test]
    fn cube_array_case_two() {
        // α=3, p=7, N=4, d=2: the L^p branch
        let params = Params::rational(4, (3, 1), (7, 1), (7, 1)).unwrap();
        let rep = cube_array(&params, &[2, 3, 4, 5, 6], 2).unwrap();
        assert!(
            rep.verdicts["lattice_sum_bounded"],
            "{:?}",
            rep.members.last().unwrap().extra
        );
        assert!(rep.verdicts["support_measure_vanishes"]);
        assert!(rep.verdicts["e_over_lq_converges"]);
        let last = rep.members.last().unwrap();
        assert!(last.extra["e_over_lq"] > 0.0);
        // hypothesis failures are named
        assert!(cube_array(&p322((4, 1)), &[2, 3], 2).is_err());
        let bad_d = Params::rational(4, (3, 1), (7, 1), (7, 1)).unwrap();
        assert!(cube_array(&bad_d, &[2, 3], 1).is_err());
    }

    #[test]
    fn cantor_cascade_bounds() {
        let rep = cantor_cascade(2, 1.5, 1.0, 0.8, 5).unwrap();
        assert_eq!(rep.centers_per_level.last().copied().unwrap(), 1 << 10);
        for lvl in &rep.levels {
            assert_eq!(lvl.mass, 1.0);
        }
        assert!(rep.recursion_holds, "{:?}", rep.levels);
        assert!(rep.energies_bounded);
        assert!(rep.contraction < 1.0);
        // admissible interval is enforced
        assert!(cantor_cascade(2, 1.5, 1.0, 0.05, 3).is_err());
        assert!(cantor_cascade(2, 1.5, 1.0, 1.1, 3).is_err());
    }

    #[test]
    fn translated_bumps_n_linear_limits() {
        let params = p322((4, 1));
        let rep = translated_bumps(&params, &[4.0, 8.0, 16.0, 64.0], 4).unwrap();
        assert!(rep.verdicts["n_linear_limit"]);
        // V/(4 V0) -> 1 monotonically as the spacing grows
        let ratios: Vec<f64> = rep.members.iter().map(|m| m.extra["v_over_n_v0"]).collect();
        assert!(ratios.windows(2).all(|w| w[1] < w[0]));
        assert!((ratios.last().unwrap() - 1.0).abs() < 0.05);
        assert!(translated_bumps(&params, &[1.0], 3).is_err());
    }

    #[test]
    fn log_tail_sweep_behaviour() {
        let params = p322((4, 1));
        let rep = log_tail_sweep(&params, 0.75, &[1e2, 1e3, 1e4]).unwrap();
        assert!(rep.verdicts["coulomb_cauchy"], "{:?}", rep.members);
        assert!(rep.verdicts["weighted_diverges"]);
        assert!(log_tail_profile(&params, 0.4, &RadialGrid::default_grid(3)).is_err());
    }

    #[test]
    fn family_spec_validation() {
        let spec = FamilySpec {
            kind: FamilyKind::Annular,
            params: p322((4, 1)),
            range: vec![],
            q_probe: None,
            lattice_dim: None,
            rho: None,
            aux: None,
            delta: None,
        };
        assert!(spec.validate().is_err());
    }
}
