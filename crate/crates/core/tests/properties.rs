//! Property tests: regime flags against an independently coded float
//! oracle, scalar parsing, and grid quadrature invariants.

use proptest::prelude::*;
use spslab::regime::{self, Classification};
use spslab::scalar::Scalar;
use spslab::Params;

/// Independent re-evaluation of the displayed inequality systems in plain
/// floating point. Deliberately written from the displayed formulas, not
/// shared with the library implementation.
mod oracle {
    pub struct Flags {
        pub q: bool,
        pub q0: bool,
        pub qrad: bool,
        pub qrad0: bool,
        pub p: bool,
    }

    pub fn flags(n: f64, a: f64, p: f64, q: f64) -> Flags {
        let np = (n - 2.0).max(0.0);
        let inv_p = 1.0 / p;
        let thresh = np / (n + a);
        let inv_q = 1.0 / q;
        let sob = 0.5 - 1.0 / n;
        let cs = 0.5 - (p - 1.0) / (a + 2.0 * p);
        let rad = (3.0 * n + a - 4.0) / (2.0 * (2.0 * p * (n - 1.0) + n - a));
        let poh = (n + a) / (2.0 * n * p);
        Flags {
            q: (inv_p >= thresh && sob <= inv_q && inv_q <= cs)
                || (inv_p < thresh && sob >= inv_q && inv_q >= cs),
            q0: (inv_p > thresh && sob < inv_q && inv_q < cs)
                || (inv_p < thresh && sob > inv_q && inv_q > cs),
            qrad: n >= 2.0
                && ((inv_p >= thresh && sob <= inv_q && inv_q < rad)
                    || (inv_p <= thresh && sob >= inv_q && inv_q > rad)),
            qrad0: n >= 2.0
                && ((inv_p > thresh && sob < inv_q && inv_q < rad)
                    || (inv_p < thresh && sob > inv_q && inv_q > rad)),
            p: (inv_p > thresh && !(sob < inv_q && inv_q < poh))
                || (inv_p < thresh && !(poh < inv_q && inv_q < sob)),
        }
    }

    /// Distance to the nearest decision boundary; points too close are
    /// skipped (the float oracle cannot decide them, the exact path can).
    pub fn boundary_margin(n: f64, a: f64, p: f64, q: f64) -> f64 {
        let np = (n - 2.0).max(0.0);
        let inv_p = 1.0 / p;
        let thresh = np / (n + a);
        let inv_q = 1.0 / q;
        let sob = 0.5 - 1.0 / n;
        let cs = 0.5 - (p - 1.0) / (a + 2.0 * p);
        let rad = (3.0 * n + a - 4.0) / (2.0 * (2.0 * p * (n - 1.0) + n - a));
        let poh = (n + a) / (2.0 * n * p);
        [
            (inv_p - thresh).abs(),
            (inv_q - sob).abs(),
            (inv_q - cs).abs(),
            (inv_q - rad).abs(),
            (inv_q - poh).abs(),
        ]
        .into_iter()
        .fold(f64::INFINITY, f64::min)
    }
}

fn check_point(n: u32, a: f64, p: f64, q: f64) {
    if oracle::boundary_margin(n as f64, a, p, q) < 1e-9 {
        return;
    }
    let params = match Params::from_f64(n, a, p, q) {
        Ok(pr) => pr,
        Err(_) => return,
    };
    let rep = regime::classify(&params);
    let orc = oracle::flags(n as f64, a, p, q);
    assert_eq!(rep.q_cond, orc.q, "Q mismatch at {params:?}");
    assert_eq!(rep.q0_cond, orc.q0, "Q0 mismatch at {params:?}");
    assert_eq!(rep.qrad_cond, orc.qrad, "Qrad mismatch at {params:?}");
    assert_eq!(rep.qrad0_cond, orc.qrad0, "Qrad0 mismatch at {params:?}");
    assert_eq!(rep.p_cond, orc.p, "P mismatch at {params:?}");
    // implications and exclusions
    if rep.q0_cond {
        assert!(rep.q_cond);
        assert!(!rep.p_cond);
    }
    if rep.qrad0_cond {
        assert!(rep.qrad_cond);
    }
    if rep.classification == Classification::ExistenceRadialOnly {
        assert!(rep.qrad0_cond && !rep.q0_cond);
    }
}

#[test]
fn flag_consistency_ten_thousand_point_sweep() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
    for _ in 0..10_000 {
        let n = rng.gen_range(1u32..=6);
        let a = rng.gen_range(0.02..n as f64 - 0.02);
        let p = rng.gen_range(1.0..9.0);
        let q = rng.gen_range(1.0..15.0);
        check_point(n, a, p, q);
    }
}

proptest! {
    #[test]
    fn flag_consistency_shrinkable(
        n in 1u32..=6,
        a_frac in 0.01f64..0.99,
        p in 1.0f64..9.0,
        q in 1.0f64..15.0,
    ) {
        let a = a_frac * n as f64;
        check_point(n, a, p, q);
    }

    #[test]
    fn theta_strictly_decreasing_in_inv_q(
        a in 0.1f64..2.9,
        p in 1.0f64..4.0,
        q1 in 2.0f64..12.0,
        dq in 0.1f64..3.0,
    ) {
        // fixed (N, alpha, p) subcritical: theta decreasing in 1/q
        let n = 3u32;
        prop_assume!(p * (n as f64 - 2.0) < n as f64 + a);
        let q2 = q1 + dq;
        let t1 = regime::theta_of(&Params::from_f64(n, a, p, q1).unwrap()).unwrap().to_f64();
        let t2 = regime::theta_of(&Params::from_f64(n, a, p, q2).unwrap()).unwrap().to_f64();
        // 1/q2 < 1/q1 so theta(q2) > theta(q1)
        prop_assert!(t2 > t1);
    }

    #[test]
    fn scalar_decimal_roundtrip(int_part in 0i64..1000, frac in 0u32..1_000_000) {
        let text = format!("{int_part}.{frac:06}");
        let s: Scalar = text.parse().unwrap();
        prop_assert!(s.is_rational());
        let expected = Scalar::ratio(int_part as i128 * 1_000_000 + frac as i128, 1_000_000);
        prop_assert!(s.eq3(expected));
    }

    #[test]
    fn quadrature_volume_on_random_grids(
        lo_exp in -4.0f64..0.0,
        span in 1.0f64..6.0,
        m in 32usize..400,
        n in 2u32..5,
    ) {
        use spslab::grid::RadialGrid;
        let r_min = 10f64.powf(lo_exp);
        let r_max = r_min * 10f64.powf(span);
        let grid = RadialGrid::new(r_min, r_max, m, n).unwrap();
        let ones = vec![1.0; grid.len()];
        let exact = (r_max.powi(n as i32) - r_min.powi(n as i32)) / n as f64;
        let got = grid.integrate(&ones);
        prop_assert!(((got - exact) / exact).abs() < 1e-10);
    }
}
