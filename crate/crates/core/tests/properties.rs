use std::f64::consts::PI;

use proptest::prelude::*;
use stirling_resurgence::borelplane::path::distance_to_singular;
use stirling_resurgence::borelplane::{
    branch_gap, minor_chi, minor_lambda32, minor_mu, BorelFunction, BorelKind,
};
use stirling_resurgence::cli::parse_complex;
use stirling_resurgence::laplace::{
    laplace_hankel, laplace_ray, major_monomial, minor_monomial, Direction, HankelForm,
};
use stirling_resurgence::quadrature::{integrate, QuadratureSpec};
use stirling_resurgence::realmajor::{p_of, rho_lambda_c, CIndex};
use stirling_resurgence::{Complex64, SurfacePoint};

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn variation_of_major_is_minor(r in 0.05f64..8.0, u in -1.4f64..1.4) {
        for (major, minor) in [(BorelKind::MajorLambda32, BorelKind::MinorLambda32), (BorelKind::MajorChi, BorelKind::MinorChi)] {
            let xi = SurfacePoint::new(r, major.anchor() + u);
            let f = BorelFunction::new(major);
            let var = f.eval(xi).unwrap() - f.eval(xi.rotate(-2.0 * PI)).unwrap();
            let m = BorelFunction::new(minor).eval(xi).unwrap();
            prop_assert!((var - m).norm() <= 1e-12 * m.norm().max(1.0));
        }
    }

    #[test]
    fn chi_is_rotated_lambda(r in 0.1f64..8.0, theta in (-PI + 0.05)..-0.05) {
        let xi = SurfacePoint::new(r, theta);
        prop_assume!(distance_to_singular(xi.rotate(PI).to_complex()).1 > 0.05);
        prop_assume!(distance_to_singular(xi.rotate(-PI).to_complex()).1 > 0.05);
        let chi = minor_chi(xi).unwrap();
        let below = Complex64::i() * minor_lambda32(xi.rotate(-PI)).unwrap();
        prop_assert!((chi - below).norm() <= 1e-12 * chi.norm().max(1.0));
    }

    #[test]
    fn majors_are_integrable_at_the_origin(theta in -3.0f64..3.0) {
        for kind in [BorelKind::MajorLambda32, BorelKind::MajorChi] {
            let f = BorelFunction::new(kind);
            let at = |r: f64| {
                let xi = SurfacePoint::new(r, kind.anchor() + theta);
                (f.eval(xi).unwrap() * xi.to_complex()).norm()
            };
            prop_assert!(at(1e-8) < at(1e-4));
            prop_assert!(at(1e-8) < 1e-3);
        }
    }

    #[test]
    fn branches_collide_only_on_2pi_i_z(re in -6.0f64..6.0, im in -20.0f64..20.0) {
        let xi = Complex64::new(re, im);
        prop_assume!(distance_to_singular(xi).1 > 0.1);
        prop_assert!(branch_gap(xi).unwrap() > 1e-6);
    }

    #[test]
    fn stirling_minor_is_even(re in -5.0f64..5.0, im in -15.0f64..15.0) {
        let xi = Complex64::new(re, im);
        prop_assume!(distance_to_singular(xi).1 > 0.05 && xi.norm() > 1e-3);
        let (a, b) = (minor_mu(xi).unwrap(), minor_mu(-xi).unwrap());
        prop_assert!((a - b).norm() <= 1e-13 * a.norm().max(1.0));
    }

    #[test]
    fn laplace_of_monomials(c in 0.5f64..2.0, re in 1.0f64..5.0, im in -3.0f64..3.0) {
        let z = Complex64::new(re, im);
        let c = Complex64::new(c, 0.0);
        let v = laplace_ray(minor_monomial(c), (1.2, 1.2), Direction::new(0.0), z, &QuadratureSpec::default()).unwrap();
        prop_assert!(rel(v.value, z.powc(-c)) <= 1e-10);
    }

    #[test]
    fn hankel_equals_ray_for_monomials(c in 0.6f64..2.4, re in 1.0f64..5.0, im in -3.0f64..3.0) {
        let z = Complex64::new(re, im);
        let c = Complex64::new(c, 0.0);
        let spec = QuadratureSpec::default();
        let ray = laplace_ray(minor_monomial(c), (2.0, 2.0), Direction::new(0.0), z, &spec).unwrap().value;
        let h = laplace_hankel(major_monomial(c), (2.0, 2.0), Direction::new(0.0), z, &spec, HankelForm::FullContour).unwrap().value;
        prop_assert!(rel(h, ray) <= 1e-9);
    }

    #[test]
    fn p_is_nonnegative_on_the_real_line(q in -30.0f64..30.0) {
        let p = p_of(Complex64::new(q, 0.0));
        prop_assert!(p.im == 0.0 && p.re >= 0.0);
        prop_assert!(q == 0.0 || p.re > 0.0);
    }

    #[test]
    fn real_major_is_bounded(r in 1.0f64..12.0, theta in (-PI + 0.2)..(PI - 0.2)) {
        let xi = Complex64::from_polar(r, theta);
        prop_assume!(distance_to_singular(xi).1 > 0.2);
        let v = rho_lambda_c(CIndex::real(0.0), xi, &QuadratureSpec::default()).unwrap().value;
        prop_assert!(v.norm() < 2.0, "|rho({xi})| = {}", v.norm());
    }

    #[test]
    fn quadrature_is_thread_count_independent(w in 0.0f64..30.0, s in 0.0f64..3.0) {
        let f = |t: f64| Complex64::new(0.0, w * t).exp() * (1.0 + s * t * t).recip();
        let spec = QuadratureSpec::default();
        let a = integrate(f, &[0.0, 1.0, 4.0], &spec).unwrap();
        let b = integrate(f, &[0.0, 1.0, 4.0], &spec.sequential()).unwrap();
        prop_assert_eq!(a.value, b.value);
        prop_assert_eq!(a.panels, b.panels);
    }

    #[test]
    fn complex_parsing_round_trips(re in -1e6f64..1e6, im in -1e6f64..1e6) {
        let z = parse_complex(&format!("{re}{im:+}j")).unwrap();
        prop_assert_eq!(z, Complex64::new(re, im));
        let w = Complex64::new(re, im);
        let p = parse_complex(&format!("{}@{}", w.norm(), w.arg())).unwrap();
        prop_assert!((p - w).norm() <= 1e-9 * w.norm().max(1.0));
    }
}
