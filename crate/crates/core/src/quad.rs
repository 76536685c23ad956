//! Small quadrature toolbox: Gauss–Legendre rules and tanh-sinh (double
//! exponential) integration on (0,1) for endpoint-singular integrands.

/// Gauss–Legendre nodes and weights on [-1, 1], by Newton iteration on the
/// Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi initial guess
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-15 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// Gauss–Legendre rule mapped to [a, b].
pub fn gauss_on(a: f64, b: f64, n: usize) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(n);
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    (
        x.iter().map(|&t| mid + half * t).collect(),
        w.iter().map(|&v| v * half).collect(),
    )
}

/// ∫₀¹ f(z) dz by tanh-sinh quadrature. The integrand receives (z, 1-z) so
/// that endpoint-singular factors can be evaluated without cancellation.
/// Handles algebraic endpoint singularities z^λ (1-z)^λ with λ > -1.
pub fn tanh_sinh<F: Fn(f64, f64) -> f64>(f: F, rel_tol: f64, max_level: u32) -> f64 {
    let t_max = 4.0;
    let eval = |t: f64| -> f64 {
        let s = std::f64::consts::FRAC_PI_2 * t.sinh();
        // z = (1 + tanh s)/2 and 1-z, both to full precision
        let e2 = (-2.0 * s).exp();
        let z = 1.0 / (1.0 + e2);
        let omz = e2 / (1.0 + e2);
        let dz = std::f64::consts::FRAC_PI_2 * t.cosh() / (2.0 * s.cosh().powi(2));
        if dz == 0.0 || !dz.is_finite() {
            return 0.0;
        }
        let v = f(z, omz);
        if v.is_finite() {
            v * dz
        } else {
            0.0
        }
    };

    let mut tau = 1.0;
    let mut sum = eval(0.0);
    let mut k = 1;
    loop {
        let t = k as f64 * tau;
        if t > t_max {
            break;
        }
        sum += eval(t) + eval(-t);
        k += 1;
    }
    let mut value = tau * sum;

    for _level in 1..=max_level {
        tau *= 0.5;
        // refine with the new midpoints only
        let mut extra = 0.0;
        let mut j = 1;
        loop {
            let t = j as f64 * tau;
            if t > t_max {
                break;
            }
            extra += eval(t) + eval(-t);
            j += 2;
        }
        let new_value = 0.5 * value + tau * extra;
        let err = (new_value - value).abs();
        value = new_value;
        if err <= rel_tol * value.abs().max(f64::MIN_POSITIVE) {
            break;
        }
    }
    value
}

/// Least-squares slope of y against x.
pub fn fit_slope(x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len());
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (&a, &b) in x.iter().zip(y) {
        num += (a - mx) * (b - my);
        den += (a - mx) * (a - mx);
    }
    num / den
}
