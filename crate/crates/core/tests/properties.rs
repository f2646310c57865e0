use std::f64::consts::{PI, TAU};

use proptest::prelude::*;
use twisted_emission::coincidence::{allowed_kappa_p, ring_geometry, sample_ring};
use twisted_emission::emission::{
    master_integral_exact, twisted_pair_weight, EmissionProblem, MasterIntegralMode,
};
use twisted_emission::kinematics::{recoil_kappa_sq, BeamState, TransitionLine};
use twisted_emission::quadrature::{integrate, QuadratureConfig};
use twisted_emission::{
    bessel_j, make_triangle, triple_bessel_closed, twisted_density, GaussianDelta,
};

fn heron(a: f64, b: f64, c: f64) -> f64 {
    let s = 0.5 * (a + b + c);
    (s * (s - a) * (s - b) * (s - c)).max(0.0).sqrt()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn bessel_three_term_recurrence(m in -64i32..=64, x in 1e-3f64..100.0) {
        let r = bessel_j(m - 1, x).unwrap() + bessel_j(m + 1, x).unwrap()
            - 2.0 * f64::from(m) / x * bessel_j(m, x).unwrap();
        prop_assert!(r.abs() < 1e-10, "m={m} x={x} residual {r:e}");
    }

    #[test]
    fn bessel_bounded(m in -200i32..=200, x in -500f64..500.0) {
        prop_assert!(bessel_j(m, x).unwrap().abs() <= 1.0);
    }

    #[test]
    fn triangle_area_matches_heron(a in 0.01f64..10.0, b in 0.01f64..10.0, c in 0.01f64..10.0) {
        let t = make_triangle(a, b, c).unwrap();
        let h = heron(a, b, c);
        match t.shape {
            Some(s) => {
                let scale = (a + b + c).powi(2);
                prop_assert!((s.area - h).abs() <= 1e-12 * scale, "{} vs {h}", s.area);
                prop_assert!((0.0..=PI).contains(&s.delta_b) && (0.0..=PI).contains(&s.delta_x));
            }
            None => prop_assert!(a > b + c || b > a + c || c > a + b),
        }
    }

    #[test]
    fn closed_form_bounded_and_symmetric(
        m_a in -20i32..=20, m_b in -20i32..=20,
        a in 0.1f64..5.0, b in 0.1f64..5.0, c in 0.1f64..5.0,
    ) {
        let t = make_triangle(a, b, c).unwrap();
        prop_assume!(t.shape.map_or(true, |s| s.area > 1e-9));
        let v = triple_bessel_closed(m_a, m_b, &t).unwrap();
        let w = triple_bessel_closed(-m_a, -m_b, &t).unwrap();
        prop_assert_eq!(v, w);
        if let Some(s) = t.shape {
            prop_assert!(v.abs() <= 1.0 / (TAU * s.area) * (1.0 + 1e-15));
            let pw = twisted_pair_weight(m_a, m_b, &t).unwrap();
            prop_assert!(pw >= 0.0);
        } else {
            prop_assert_eq!(v, 0.0);
        }
    }

    #[test]
    fn roots_land_on_the_ring(ka in 0.01f64..5.0, kb in 0.0f64..5.0, phi in 0.0f64..TAU) {
        let ring = ring_geometry(ka, kb).unwrap();
        let roots = allowed_kappa_p(ka, kb, phi);
        prop_assert!(roots.len() <= 2);
        prop_assert!(roots.windows(2).all(|w| w[0] < w[1]));
        for kp in roots {
            prop_assert!(kp >= 0.0);
            let r = ring.residual(kp * phi.cos(), kp * phi.sin());
            prop_assert!(r.abs() <= 1e-10 * (ka + kb).powi(2).max(1.0), "{r:e}");
        }
    }

    #[test]
    fn ring_samples_on_circle(ka in 0.01f64..5.0, kb in 0.0f64..5.0, n in 1usize..500) {
        let ring = ring_geometry(ka, kb).unwrap();
        for (x, y) in sample_ring(&ring, n).unwrap() {
            prop_assert!(ring.residual(x, y).abs() <= 1e-12 * (ka + kb).powi(2).max(1.0));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn triangle_gate(
        p in 0.2f64..3.0, theta_a in 0.01f64..1.4, omega in 0.01f64..0.5,
        detuning in -1e-2f64..1e-2, theta in 0.0f64..PI,
    ) {
        let beam = BeamState::twisted(1.0, p, theta_a, 0).unwrap();
        let line = TransitionLine::from_detuning(detuning, omega, 1.0).unwrap();
        let delta = GaussianDelta::new(5e-4).unwrap();
        let Ok(prob) = EmissionProblem::new(beam, line, omega, delta) else { return Ok(()); };
        let ka = beam.transverse_momentum();
        let kp = omega * theta.sin();
        let k2 = recoil_kappa_sq(&beam, &line, omega, theta);
        if k2 < (ka - kp).powi(2) * (1.0 - 1e-9) || k2 > (ka + kp).powi(2) * (1.0 + 1e-9) {
            prop_assert_eq!(master_integral_exact(&prob, theta).unwrap(), 0.0);
            prop_assert_eq!(twisted_density(&prob, theta, MasterIntegralMode::Exact).unwrap(), 0.0);
        }
    }
}

struct Case {
    f: fn(f64) -> f64,
    a: f64,
    b: f64,
}

const SMOOTH: [Case; 4] = [
    Case {
        f: |x| x.sin() * x.exp(),
        a: 0.0,
        b: 2.0,
    },
    Case {
        f: |x| 1.0 / (1.0 + x * x),
        a: -3.0,
        b: 4.0,
    },
    Case {
        f: |x| (5.0 * x).cos() + x * x,
        a: -1.0,
        b: 1.5,
    },
    Case {
        f: |x| 1.0 / x.sqrt(),
        a: 0.0,
        b: 3.0,
    },
];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn quadrature_is_additive(i in 0usize..4, split in 0.05f64..0.95) {
        let c = &SMOOTH[i];
        let cfg = QuadratureConfig { rel_tol: 1e-11, ..QuadratureConfig::default() };
        let mid = c.a + split * (c.b - c.a);
        let whole = integrate(c.f, c.a, c.b, &cfg).unwrap().value;
        let parts = integrate(c.f, c.a, mid, &cfg).unwrap().value + integrate(c.f, mid, c.b, &cfg).unwrap().value;
        prop_assert!((whole - parts).abs() <= 1e-9 * whole.abs().max(1.0));
    }

    #[test]
    fn quadrature_is_linear(i in 0usize..4, j in 0usize..4, alpha in -3.0f64..3.0, beta in -3.0f64..3.0) {
        let cfg = QuadratureConfig { rel_tol: 1e-11, ..QuadratureConfig::default() };
        let (a, b) = (SMOOTH[i].a.max(SMOOTH[j].a), SMOOTH[i].b.min(SMOOTH[j].b));
        prop_assume!(b > a);
        let (f, g) = (SMOOTH[i].f, SMOOTH[j].f);
        let combined = integrate(|x| alpha * f(x) + beta * g(x), a, b, &cfg).unwrap().value;
        let separate = alpha * integrate(f, a, b, &cfg).unwrap().value + beta * integrate(g, a, b, &cfg).unwrap().value;
        let scale = alpha.abs() + beta.abs() + 1.0;
        prop_assert!((combined - separate).abs() <= 1e-8 * scale * separate.abs().max(1.0));
    }
}

#[test]
fn quadrature_honest_on_analytic_suite() {
    let (ratio, worst) = twisted_emission::verify::quadrature_honesty().unwrap();
    assert!(
        ratio < 1.0,
        "{worst}: true error is {ratio} x ten estimates"
    );
}
