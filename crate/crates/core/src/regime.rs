//! Exponent formulas and parameter-regime classification on (N, α, p, q).
//!
//! Everything here is pure arithmetic on [`Scalar`]s, so rational inputs are
//! classified exactly and regime boundaries (q = 2N/(N-2), q = 2(2p+α)/(2+α),
//! q = 2(2p(N-1)+N-α)/(3N+α-4), …) cannot be misjudged by rounding.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use serde::{Deserialize, Serialize};

/// The quadruple (N, α, p, q) defining one instance of the problem.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Params {
    pub n: u32,
    pub alpha: Scalar,
    pub p: Scalar,
    pub q: Scalar,
}

impl Params {
    pub fn new(n: u32, alpha: Scalar, p: Scalar, q: Scalar) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParams("N must be a positive integer".into()));
        }
        if !alpha.gt3(Scalar::int(0)) || !alpha.lt3(Scalar::int(n as i128)) {
            return Err(Error::InvalidParams(format!(
                "alpha = {alpha} outside (0, {n})"
            )));
        }
        if !p.ge3(Scalar::int(1)) {
            return Err(Error::InvalidParams(format!("p = {p} violates p >= 1")));
        }
        if !q.ge3(Scalar::int(1)) {
            return Err(Error::InvalidParams(format!("q = {q} violates q >= 1")));
        }
        Ok(Params { n, alpha, p, q })
    }

    pub fn from_f64(n: u32, alpha: f64, p: f64, q: f64) -> Result<Self> {
        Params::new(n, Scalar::float(alpha), Scalar::float(p), Scalar::float(q))
    }

    pub fn rational(n: u32, alpha: (i128, i128), p: (i128, i128), q: (i128, i128)) -> Result<Self> {
        Params::new(
            n,
            Scalar::ratio(alpha.0, alpha.1),
            Scalar::ratio(p.0, p.1),
            Scalar::ratio(q.0, q.1),
        )
    }

    pub fn n_scalar(&self) -> Scalar {
        Scalar::int(self.n as i128)
    }

    /// (N - 2)_+ per the subscript-plus convention.
    pub fn n_minus_2_plus(&self) -> Scalar {
        Scalar::int((self.n as i128 - 2).max(0))
    }

    /// True exactly at p(N-2) = N + α.
    pub fn is_double_critical(&self) -> bool {
        let lhs = self.p.mul(Scalar::int(self.n as i128 - 2));
        lhs.eq3(self.n_scalar().add(self.alpha))
    }

    pub fn alpha_f(&self) -> f64 {
        self.alpha.to_f64()
    }
    pub fn p_f(&self) -> f64 {
        self.p.to_f64()
    }
    pub fn q_f(&self) -> f64 {
        self.q.to_f64()
    }
}

/// Sobolev critical exponent 2N/(N-2), infinite for N <= 2.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub enum QSobolev {
    Finite(Scalar),
    Infinite,
}

impl PartialEq for QSobolev {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (QSobolev::Finite(a), QSobolev::Finite(b)) => a.eq3(*b),
            (QSobolev::Infinite, QSobolev::Infinite) => true,
            _ => false,
        }
    }
}

impl QSobolev {
    pub fn to_f64(self) -> f64 {
        match self {
            QSobolev::Finite(s) => s.to_f64(),
            QSobolev::Infinite => f64::INFINITY,
        }
    }
}

/// Interpolation weight θ of the Coulomb–Sobolev estimate,
/// θ = (N + α - 2pN/q) / ((N + α) - p(N - 2)).
pub fn theta_of(params: &Params) -> Result<Scalar> {
    if params.n < 2 {
        return Err(Error::DimensionOne);
    }
    let n = params.n_scalar();
    let na = n.add(params.alpha);
    let den = na.sub(params.p.mul(Scalar::int(params.n as i128 - 2)));
    if den.is_zero() {
        return Err(Error::DoubleCritical(
            "theta is undefined at (N+alpha) = p(N-2)".into(),
        ));
    }
    let num = na.sub(Scalar::int(2).mul(params.p).mul(n).div(params.q));
    Ok(num.div(den))
}

/// Residual of the defining identity 1/q = θ(1/2 - 1/N) + (1-θ)(N+α)/(2Np).
pub fn theta_identity_residual(params: &Params, theta: f64) -> f64 {
    let n = params.n as f64;
    let (a, p, q) = (params.alpha_f(), params.p_f(), params.q_f());
    (1.0 / q - theta * (0.5 - 1.0 / n) - (1.0 - theta) * (n + a) / (2.0 * n * p)).abs()
}

/// Coulomb–Sobolev critical exponent 2(2p+α)/(2+α).
pub fn q_cs(params: &Params) -> Scalar {
    let two = Scalar::int(2);
    two.mul(two.mul(params.p).add(params.alpha))
        .div(two.add(params.alpha))
}

/// Radial critical exponent 2(2p(N-1)+N-α)/(3N+α-4); requires N >= 2.
pub fn q_rad(params: &Params) -> Result<Scalar> {
    if params.n < 2 {
        return Err(Error::DimensionOne);
    }
    let n = params.n as i128;
    let num = Scalar::int(2).mul(
        Scalar::int(2 * (n - 1))
            .mul(params.p)
            .add(Scalar::int(n))
            .sub(params.alpha),
    );
    let den = Scalar::int(3 * n - 4).add(params.alpha);
    Ok(num.div(den))
}

pub fn q_sobolev(n: u32) -> QSobolev {
    if n <= 2 {
        QSobolev::Infinite
    } else {
        QSobolev::Finite(Scalar::ratio(2 * n as i128, n as i128 - 2))
    }
}

/// Scaling exponent σ = ((N+α) - p(N-2)) / ((α+2) - (2N/q)(p-1)) of the
/// relation M_c = c^{2σ/q} M_1.
pub fn sigma_of(params: &Params) -> Result<Scalar> {
    if params.p.eq3(Scalar::int(1)) && params.q.eq3(q_cs(params)) {
        return Err(Error::Hypothesis(
            "sigma is undefined at q = q_cs with p = 1".into(),
        ));
    }
    let n = params.n_scalar();
    let num = n
        .add(params.alpha)
        .sub(params.p.mul(Scalar::int(params.n as i128 - 2)));
    let den = params.alpha.add(Scalar::int(2)).sub(
        Scalar::int(2)
            .mul(n)
            .div(params.q)
            .mul(params.p.sub(Scalar::int(1))),
    );
    if den.is_zero() {
        return Err(Error::Hypothesis(
            "sigma denominator (alpha+2) - (2N/q)(p-1) vanishes".into(),
        ));
    }
    Ok(num.div(den))
}

/// Constant C_* of the additive/multiplicative rescaling,
/// C_* = (x^{σθ} + x^{-σ(1-θ)/p}) (2^θ (2p)^{(1-θ)/p})^{-σ} with x = (1-θ)/(pθ).
pub fn c_star_of(params: &Params) -> Result<f64> {
    let theta = theta_of(params)?.to_f64();
    let sigma = sigma_of(params)?.to_f64();
    if !(theta > 0.0 && theta <= 1.0) {
        return Err(Error::Hypothesis(format!(
            "theta = {theta} outside (0, 1]; C_* needs an admissible interpolation weight"
        )));
    }
    let p = params.p_f();
    let x = (1.0 - theta) / (p * theta);
    let bracket = x.powf(sigma * theta) + x.powf(-sigma * (1.0 - theta) / p);
    let scale = (2f64.powf(theta) * (2.0 * p).powf((1.0 - theta) / p)).powf(-sigma);
    Ok(bracket * scale)
}

/// Product C_* · 2(2p+α)/(2+α) · θ^{α/(2+α)} (1-θ)^{2/(2+α)} at θ = α/(2p+α),
/// which equals 1 identically; exposed for the eigenvalue-bound check.
pub fn universal_mu_identity(alpha: f64, p: f64) -> f64 {
    let theta = alpha / (2.0 * p + alpha);
    let c_star = ((2.0 / alpha).powf(alpha / (alpha + 2.0))
        + (2.0 / alpha).powf(-2.0 / (alpha + 2.0)))
        / (2.0 * p.powf(2.0 / (alpha + 2.0)));
    c_star * 2.0 * (2.0 * p + alpha) / (2.0 + alpha)
        * theta.powf(alpha / (2.0 + alpha))
        * (1.0 - theta).powf(2.0 / (2.0 + alpha))
}

/// Admissible radial decay rates [β_min, β_max] of the uniform estimate
/// |u(x)| <= C |x|^{-β} D^{θ/2} V^{(1-θ)/2p}.
pub fn beta_interval(params: &Params) -> Result<(f64, f64)> {
    if params.n < 2 {
        return Err(Error::DimensionOne);
    }
    let n = params.n as f64;
    let (a, p) = (params.alpha_f(), params.p_f());
    let mina = a.min(1.0);
    // endpoint at θ = 1/(1 + p/(1+min(1,α))) and at θ = 1
    let b_low_theta = if a >= 1.0 {
        (3.0 * n + a - 4.0) / (2.0 * (p + 2.0))
    } else {
        (n - 1.0) * (a + 2.0) / (2.0 * (p + 1.0 + a))
    };
    let _ = mina;
    if params.n == 2 {
        return Ok((0.0, b_low_theta));
    }
    let b_ni = (n - 2.0) / 2.0;
    Ok((b_ni.min(b_low_theta), b_ni.max(b_low_theta)))
}

/// All exponents attached to one parameter point.
#[derive(Clone, Debug, Serialize)]
pub struct Exponents {
    pub theta: Option<Scalar>,
    pub sigma: Option<Scalar>,
    pub q_sobolev: QSobolev,
    pub q_cs: Scalar,
    pub q_rad: Option<Scalar>,
    pub c_star: Option<f64>,
    pub beta_interval: Option<(f64, f64)>,
}

pub fn critical_exponents(params: &Params) -> Exponents {
    Exponents {
        theta: theta_of(params).ok(),
        sigma: sigma_of(params).ok(),
        q_sobolev: q_sobolev(params.n),
        q_cs: q_cs(params),
        q_rad: q_rad(params).ok(),
        c_star: c_star_of(params).ok(),
        beta_interval: beta_interval(params).ok(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Classification {
    NoEmbedding,
    CriticalEndpoint,
    ExistenceGeneral,
    ExistenceRadialOnly,
    EigenvalueCritical,
    Nonexistence,
    DoubleCriticalOpen,
}

impl std::fmt::Display for Classification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Classification::NoEmbedding => "NO_EMBEDDING",
            Classification::CriticalEndpoint => "CRITICAL_ENDPOINT",
            Classification::ExistenceGeneral => "EXISTENCE_GENERAL",
            Classification::ExistenceRadialOnly => "EXISTENCE_RADIAL_ONLY",
            Classification::EigenvalueCritical => "EIGENVALUE_CRITICAL",
            Classification::Nonexistence => "NONEXISTENCE",
            Classification::DoubleCriticalOpen => "DOUBLE_CRITICAL_OPEN",
        };
        f.write_str(s)
    }
}

/// Literal truth values of the displayed hypothesis systems plus the
/// resulting classification.
#[derive(Clone, Debug, Serialize)]
pub struct RegimeReport {
    pub q_cond: bool,
    pub q0_cond: bool,
    pub qrad_cond: bool,
    pub qrad0_cond: bool,
    pub qrad3_cond: bool,
    pub p_cond: bool,
    pub classification: Classification,
    pub annotation: Option<String>,
}

struct Thresholds {
    inv_p: Scalar,
    p_thresh: Scalar, // (N-2)_+ / (N+α)
    inv_q: Scalar,
    sob: Scalar,       // 1/2 - 1/N
    inv_q_cs: Scalar,  // 1/2 - (p-1)/(α+2p)
    inv_q_rad: Scalar, // (3N+α-4) / (2(2p(N-1)+N-α))
    poh: Scalar,       // (N+α)/(2Np) = 1/2p + α/2Np
}

fn thresholds(params: &Params) -> Thresholds {
    let n = params.n_scalar();
    let one = Scalar::int(1);
    let two = Scalar::int(2);
    let na = n.add(params.alpha);
    Thresholds {
        inv_p: one.div(params.p),
        p_thresh: params.n_minus_2_plus().div(na),
        inv_q: one.div(params.q),
        sob: Scalar::ratio(1, 2).sub(one.div(n)),
        inv_q_cs: Scalar::ratio(1, 2)
            .sub(params.p.sub(one).div(params.alpha.add(two.mul(params.p)))),
        inv_q_rad: Scalar::int(3 * params.n as i128 - 4).add(params.alpha).div(
            two.mul(
                two.mul(params.p)
                    .mul(Scalar::int(params.n as i128 - 1))
                    .add(n)
                    .sub(params.alpha),
            ),
        ),
        poh: na.div(two.mul(n).mul(params.p)),
    }
}

/// Condition (Q): continuous embedding E^{α,p} ⊂ L^q.
pub fn cond_q(params: &Params) -> bool {
    let t = thresholds(params);
    (t.inv_p.ge3(t.p_thresh) && t.sob.le3(t.inv_q) && t.inv_q.le3(t.inv_q_cs))
        || (t.inv_p.lt3(t.p_thresh) && t.sob.ge3(t.inv_q) && t.inv_q.ge3(t.inv_q_cs))
}

/// Condition (Q'): strict interior, existence of optimizers.
pub fn cond_q0(params: &Params) -> bool {
    let t = thresholds(params);
    (t.inv_p.gt3(t.p_thresh) && t.sob.lt3(t.inv_q) && t.inv_q.lt3(t.inv_q_cs))
        || (t.inv_p.lt3(t.p_thresh) && t.sob.gt3(t.inv_q) && t.inv_q.gt3(t.inv_q_cs))
}

/// Condition (Q_rad): radial embedding for α > 1.
pub fn cond_qrad(params: &Params) -> bool {
    if params.n < 2 {
        return false;
    }
    let t = thresholds(params);
    (t.inv_p.ge3(t.p_thresh) && t.sob.le3(t.inv_q) && t.inv_q.lt3(t.inv_q_rad))
        || (t.inv_p.le3(t.p_thresh) && t.sob.ge3(t.inv_q) && t.inv_q.gt3(t.inv_q_rad))
}

/// Condition (Q'_rad): compact radial embedding / radial existence for α > 1.
pub fn cond_qrad0(params: &Params) -> bool {
    if params.n < 2 {
        return false;
    }
    let t = thresholds(params);
    (t.inv_p.gt3(t.p_thresh) && t.sob.lt3(t.inv_q) && t.inv_q.lt3(t.inv_q_rad))
        || (t.inv_p.lt3(t.p_thresh) && t.sob.gt3(t.inv_q) && t.inv_q.gt3(t.inv_q_rad))
}

/// Condition (Q''): coercivity window of J_* on the radial space (α > 1).
pub fn cond_qrad3(params: &Params) -> bool {
    if params.n < 2 {
        return false;
    }
    let t = thresholds(params);
    (t.inv_p.gt3(t.p_thresh) && t.inv_q_cs.lt3(t.inv_q) && t.inv_q.lt3(t.inv_q_rad))
        || (t.inv_p.lt3(t.p_thresh) && t.inv_q_cs.gt3(t.inv_q) && t.inv_q.gt3(t.inv_q_rad))
}

/// Condition (P): Pohožaev nonexistence window.
pub fn cond_p(params: &Params) -> bool {
    let t = thresholds(params);
    let inside_first = t.sob.lt3(t.inv_q) && t.inv_q.lt3(t.poh);
    let inside_second = t.poh.lt3(t.inv_q) && t.inv_q.lt3(t.sob);
    (t.inv_p.gt3(t.p_thresh) && !inside_first) || (t.inv_p.lt3(t.p_thresh) && !inside_second)
}

pub fn classify(params: &Params) -> RegimeReport {
    let q = cond_q(params);
    let q0 = cond_q0(params);
    let qrad = cond_qrad(params);
    let qrad0 = cond_qrad0(params);
    let qrad3 = cond_qrad3(params);
    let p_flag = cond_p(params);
    let alpha_gt1 = params.alpha.gt3(Scalar::int(1));
    let at_q_cs = params.q.eq3(q_cs(params));

    let mut annotation = None;
    let classification = if params.is_double_critical() && at_q_cs {
        Classification::DoubleCriticalOpen
    } else if q0 {
        Classification::ExistenceGeneral
    } else if alpha_gt1 && qrad0 {
        if at_q_cs {
            Classification::EigenvalueCritical
        } else {
            Classification::ExistenceRadialOnly
        }
    } else if p_flag {
        Classification::Nonexistence
    } else if q {
        if params.alpha.eq3(Scalar::int(1))
            && q_rad(params).map(|qr| params.q.eq3(qr)).unwrap_or(false)
        {
            annotation = Some(
                "alpha = 1 radial endpoint q = (2/3)(2p+1): compactness of the embedding is open"
                    .into(),
            );
        }
        Classification::CriticalEndpoint
    } else {
        Classification::NoEmbedding
    };

    RegimeReport {
        q_cond: q,
        q0_cond: q0,
        qrad_cond: qrad,
        qrad0_cond: qrad0,
        qrad3_cond: qrad3,
        p_cond: p_flag,
        classification,
        annotation,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(n: u32, a: (i128, i128), p: (i128, i128), q: (i128, i128)) -> Params {
        Params::rational(n, a, p, q).unwrap()
    }

    #[test]
    fn theta_printed_examples() {
        // Sobolev-critical substitution: theta = 1
        let t = theta_of(&params(3, (2, 1), (2, 1), (6, 1))).unwrap();
        assert!(t.eq3(Scalar::int(1)));
        // Coulomb-Sobolev-critical substitution: theta = alpha/(2p+alpha) = 1/3
        let t = theta_of(&params(3, (2, 1), (2, 1), (3, 1))).unwrap();
        assert!(t.eq3(Scalar::ratio(1, 3)));
        // direct substitution at q = 4
        let t = theta_of(&params(3, (2, 1), (2, 1), (4, 1))).unwrap();
        assert!(t.eq3(Scalar::ratio(2, 3)));
    }

    #[test]
    fn theta_errors() {
        assert!(matches!(
            theta_of(&params(1, (1, 2), (2, 1), (4, 1))),
            Err(Error::DimensionOne)
        ));
        // p(N-2) = N+alpha at N=3, alpha=2, p=5
        assert!(matches!(
            theta_of(&params(3, (2, 1), (5, 1), (6, 1))),
            Err(Error::DoubleCritical(_))
        ));
    }

    #[test]
    fn critical_exponents_at_322() {
        let pr = params(3, (2, 1), (2, 1), (4, 1));
        let e = critical_exponents(&pr);
        assert!(e.q_cs.eq3(Scalar::int(3)));
        assert!(e.q_rad.unwrap().eq3(Scalar::ratio(18, 7)));
        assert_eq!(e.q_sobolev, QSobolev::Finite(Scalar::int(6)));
        assert_eq!(q_sobolev(2), QSobolev::Infinite);
        assert_eq!(q_sobolev(1), QSobolev::Infinite);
    }

    #[test]
    fn sigma_printed_examples() {
        // q = q_cs forces 2sigma/q = 1
        let pr = params(3, (2, 1), (2, 1), (3, 1));
        let s = sigma_of(&pr).unwrap();
        assert!(Scalar::int(2).mul(s).div(pr.q).eq3(Scalar::int(1)));
        // q = 4: sigma = 6/5
        let s = sigma_of(&params(3, (2, 1), (2, 1), (4, 1))).unwrap();
        assert!(s.eq3(Scalar::ratio(6, 5)));
        // q = 6: sigma = 1
        let s = sigma_of(&params(3, (2, 1), (2, 1), (6, 1))).unwrap();
        assert!(s.eq3(Scalar::int(1)));
        // q = q_cs with p = 1 signals explicitly; q_cs(p=1) = 2
        assert!(sigma_of(&params(3, (2, 1), (1, 1), (2, 1))).is_err());
    }

    #[test]
    fn classify_printed_examples() {
        let r = classify(&params(3, (2, 1), (2, 1), (14, 5)));
        assert!(r.qrad0_cond && !r.q0_cond);
        assert_eq!(r.classification, Classification::ExistenceRadialOnly);

        let r = classify(&params(3, (2, 1), (2, 1), (7, 1)));
        assert!(r.p_cond);
        assert_eq!(r.classification, Classification::Nonexistence);

        let r = classify(&params(3, (2, 1), (2, 1), (3, 1)));
        assert_eq!(r.classification, Classification::EigenvalueCritical);

        let r = classify(&params(3, (2, 1), (2, 1), (4, 1)));
        assert_eq!(r.classification, Classification::ExistenceGeneral);

        // exactly at the radial critical exponent there is no embedding
        let r = classify(&params(3, (2, 1), (2, 1), (18, 7)));
        assert_eq!(r.classification, Classification::NoEmbedding);

        // Sobolev endpoint: q = 2N/(N-2) sits on the closed boundary of the
        // Pohožaev window, so nonexistence wins over the embedding endpoint
        let r = classify(&params(3, (2, 1), (2, 1), (6, 1)));
        assert!(r.q_cond && r.p_cond);
        assert_eq!(r.classification, Classification::Nonexistence);

        // Coulomb-Sobolev endpoint with alpha <= 1 has no radial rescue:
        // q_cs(alpha=1/2, p=2) = 18/5
        let r = classify(&params(3, (1, 2), (2, 1), (18, 5)));
        assert!(r.q_cond && !r.q0_cond && !r.p_cond);
        assert_eq!(r.classification, Classification::CriticalEndpoint);
    }

    #[test]
    fn flag_implications() {
        // Q0 => Q and Qrad0 => Qrad on a rational sweep
        for n in 2..=5u32 {
            for ai in 1..(4 * n as i128) {
                for pi in [(1, 1), (3, 2), (2, 1), (7, 2), (5, 1), (7, 1)] {
                    for qi in 2..40i128 {
                        let pr = match Params::rational(n, (ai, 4), pi, (qi, 3)) {
                            Ok(p) => p,
                            Err(_) => continue,
                        };
                        let r = classify(&pr);
                        if r.q0_cond {
                            assert!(r.q_cond, "Q0 => Q failed at {pr:?}");
                        }
                        if r.qrad0_cond {
                            assert!(r.qrad_cond, "Qrad0 => Qrad failed at {pr:?}");
                        }
                        assert!(!(r.p_cond && r.q0_cond), "P and Q0 both true at {pr:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn alpha_one_radial_endpoint_is_annotated() {
        // alpha = 1, q = (2/3)(2p+1): p = 2 gives q = 10/3
        let pr = params(3, (1, 1), (2, 1), (10, 3));
        let r = classify(&pr);
        assert_eq!(r.classification, Classification::CriticalEndpoint);
        assert!(r.annotation.is_some());
    }

    #[test]
    fn double_critical_open() {
        // N=3, alpha=2 => p = 5, q_cs = q_sobolev = 6
        let pr = params(3, (2, 1), (5, 1), (6, 1));
        assert!(pr.is_double_critical());
        let r = classify(&pr);
        assert_eq!(r.classification, Classification::DoubleCriticalOpen);
    }

    #[test]
    fn theta_monotone_in_inv_q() {
        let mut prev = f64::INFINITY;
        for qi in 20..60 {
            let pr = params(3, (2, 1), (2, 1), (qi, 10));
            let t = theta_of(&pr).unwrap().to_f64();
            // 1/q decreasing along the loop, theta decreasing in 1/q => increasing here
            assert!(t > prev - 1e-15 || prev == f64::INFINITY);
            if prev.is_finite() {
                assert!(t > prev);
            }
            prev = t;
        }
    }

    #[test]
    fn theta_identity_holds() {
        for (n, a, p, q) in [
            (3u32, 2.0, 2.0, 4.0),
            (4, 1.3, 1.7, 3.1),
            (2, 0.7, 2.2, 5.0),
        ] {
            let pr = Params::from_f64(n, a, p, q).unwrap();
            let t = theta_of(&pr).unwrap().to_f64();
            assert!(theta_identity_residual(&pr, t) < 1e-15);
        }
    }

    #[test]
    fn universal_mu_identity_is_one() {
        for (a, p) in [(2.0, 2.0), (1.5, 3.0), (0.5, 1.2), (2.9, 7.0)] {
            assert!((universal_mu_identity(a, p) - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn c_star_matches_eigenvalue_form_at_q_cs() {
        // general C_* formula specialises to ((2/α)^{α/(α+2)} + (2/α)^{-2/(α+2)}) / (2 p^{2/(α+2)})
        for (a, p) in [(2.0, 2.0), (1.5, 2.5)] {
            let q = 2.0 * (2.0 * p + a) / (2.0 + a);
            let pr = Params::from_f64(3, a, p, q).unwrap();
            let c = c_star_of(&pr).unwrap();
            let reference = ((2.0 / a).powf(a / (a + 2.0)) + (2.0 / a).powf(-2.0 / (a + 2.0)))
                / (2.0 * p.powf(2.0 / (a + 2.0)));
            assert!((c - reference).abs() < 1e-12 * reference);
        }
    }
}
