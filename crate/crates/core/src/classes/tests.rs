use num_complex::Complex64 as C;
use proptest::prelude::*;

use super::*;
use crate::univalence::{Curve, Status};

fn series(c: &[(f64, f64)]) -> AnalyticSeries<f64> {
    AnalyticSeries::new(c.iter().map(|&(re, im)| C::new(re, im)).collect()).unwrap()
}

/// `z − conj(z)²/6`
fn example() -> HarmonicMap<f64> {
    HarmonicMap::new(
        series(&[(0.0, 0.0), (1.0, 0.0)]),
        series(&[(0.0, 0.0), (0.0, 0.0), (-1.0 / 6.0, 0.0)]),
    )
}

fn identity() -> HarmonicMap<f64> {
    HarmonicMap::identity()
}

fn default_radii() -> Vec<f64> {
    let mut r: Vec<f64> = (1..100).map(|k| k as f64 / 100.0).collect();
    r.push(0.995);
    r
}

#[test]
fn kh_sum_of_example() {
    let report = kh_coefficient_test(&example());
    assert!((report.sum_value - 2.0 / 3.0).abs() < 1e-15);
    assert!(report.normalized && report.passes);
}

#[test]
fn kh_identity_and_failure() {
    let id = kh_coefficient_test(&identity());
    assert_eq!(id.sum_value, 0.0);
    assert!(id.passes);

    let f = HarmonicMap::new(
        series(&[(0.0, 0.0), (1.0, 0.0)]),
        series(&[(0.0, 0.0), (0.0, 0.0), (0.3, 0.0)]),
    );
    let r = kh_coefficient_test(&f);
    assert!((r.sum_value - 1.2).abs() < 1e-15);
    assert!(!r.passes);
}

#[test]
fn kh_requires_normalization() {
    let shifted = HarmonicMap::analytic(series(&[(0.1, 0.0), (1.0, 0.0)]));
    let r = kh_coefficient_test(&shifted);
    assert!(!r.normalized && !r.passes);
    let scaled = HarmonicMap::analytic(series(&[(0.0, 0.0), (2.0, 0.0)]));
    assert!(!kh_coefficient_test(&scaled).passes);
}

#[test]
fn kh_boundary_of_strict_inequality() {
    // 4·|b_2| = 1 exactly
    let f = HarmonicMap::new(
        series(&[(0.0, 0.0), (1.0, 0.0)]),
        series(&[(0.0, 0.0), (0.0, 0.0), (0.25, 0.0)]),
    );
    let r = kh_coefficient_test(&f);
    assert_eq!(r.sum_value, 1.0);
    assert!(!r.passes);
}

#[test]
fn construction_transfers_coefficients() {
    let f = build_ctc_biharmonic(&example());
    assert_eq!(f.order(), 2);
    assert_eq!(f.component(0).unwrap().h, example().h);
    assert!(f.component(0).unwrap().g.is_zero());
    assert!(f.component(1).unwrap().h.is_zero());
    assert_eq!(f.component(1).unwrap().g, example().g);

    for z in [C::new(0.3, 0.4), C::new(-0.7, 0.1), C::new(0.05, -0.9)] {
        let expected = z - z.norm_sqr() * z.conj().powu(2) / 6.0;
        assert!((f.eval(z).unwrap() - expected).norm() < 1e-15);
    }
}

#[test]
fn slice_of_construction_is_h_plus_rho_squared_g() {
    let f = build_ctc_biharmonic(&example());
    for rho in [0.2, 0.5, 0.95] {
        let s = f.slice(rho).unwrap();
        assert_eq!(s.h, example().h);
        for (a, b) in s.g.coeffs().iter().zip(example().g.coeffs()) {
            assert!((a - b * rho * rho).norm() < 1e-16);
        }
    }
}

#[test]
fn zero_g_gives_analytic_map() {
    let f = build_ctc_biharmonic(&identity());
    let z = C::new(0.2, -0.6);
    assert!((f.eval(z).unwrap() - z).norm() < 1e-16);
}

#[test]
fn example_is_fully_close_to_convex() {
    let cert = certify_ctc(&example(), &GridSpec::default(), &default_radii()).unwrap();
    assert_eq!(cert.conclusion, Conclusion::FullyCloseToConvex);
    assert!(cert.local_univalence.passed());
    assert!(cert.slice.passed());
    assert!(
        (0.55..=0.60).contains(&cert.sup_dilatation),
        "{}",
        cert.sup_dilatation
    );
}

#[test]
fn identity_is_fully_close_to_convex() {
    let grid = GridSpec::new(16, 32, 0.99).unwrap();
    let cert = certify_ctc(&identity(), &grid, &[0.3, 0.6, 0.9]).unwrap();
    assert_eq!(cert.conclusion, Conclusion::FullyCloseToConvex);
    assert_eq!(cert.sup_dilatation, 0.0);
}

#[test]
fn coanalytic_equal_to_analytic_fails() {
    let f = HarmonicMap::new(AnalyticSeries::identity(), AnalyticSeries::identity());
    let cert = certify_ctc(&f, &GridSpec::default(), &default_radii()).unwrap();
    assert_eq!(cert.conclusion, Conclusion::Failed);
    assert!(cert.local_univalence.failed());
    assert!(!cert.local_univalence.witnesses.is_empty());
}

#[test]
fn unverified_hypothesis_is_inconclusive() {
    // Σ n²|a_n| = 1.2, yet f = z + 0.3|z|²z² stays locally univalent
    let f = HarmonicMap::analytic(series(&[(0.0, 0.0), (1.0, 0.0), (0.3, 0.0)]));
    let cert = certify_ctc(&f, &GridSpec::default(), &default_radii()).unwrap();
    assert!(!cert.kh.passes);
    assert!(cert.local_univalence.passed());
    assert_eq!(cert.conclusion, Conclusion::Inconclusive);
}

#[test]
fn refuted_local_univalence_overrides_hypothesis() {
    // |a_f| = 0.9|z|³/|1 + 0.3 z̄³| exceeds one near the boundary
    let f = HarmonicMap::new(
        series(&[(0.0, 0.0), (1.0, 0.0)]),
        series(&[(0.0, 0.0), (0.0, 0.0), (0.3, 0.0)]),
    );
    let cert = certify_ctc(&f, &GridSpec::default(), &default_radii()).unwrap();
    assert!(!cert.kh.passes);
    assert!(cert.sup_dilatation > 1.0);
    assert_eq!(cert.conclusion, Conclusion::Failed);
}

#[test]
fn certificate_round_trips_through_json() {
    let grid = GridSpec::new(8, 32, 0.9).unwrap();
    let cert = certify_ctc(&example(), &grid, &[0.5, 0.9]).unwrap();
    let json = serde_json::to_string(&cert).unwrap();
    assert!(json.contains("\"fully_close_to_convex\""));
    let back: CTCCertificate = serde_json::from_str(&json).unwrap();
    assert_eq!(back, cert);
}

#[test]
fn epsilon_probe_identity() {
    let grid = GridSpec::new(16, 64, 0.9).unwrap();
    let v = epsilon_family_probe(
        &AnalyticSeries::identity(),
        &AnalyticSeries::zero(),
        &default_epsilon_samples(),
        0.9,
        &grid,
    )
    .unwrap();
    assert!(v.passed(), "{}", v.notes);
}

#[test]
fn epsilon_probe_example() {
    let f = example();
    let eps = [
        C::new(1.0, 0.0),
        C::new(0.0, 1.0),
        C::new(-1.0, 0.0),
        C::new(0.0, -1.0),
    ];
    let grid = GridSpec::new(32, 128, 0.9).unwrap();
    let v = epsilon_family_probe(&f.h, &f.g, &eps, 0.9, &grid).unwrap();
    assert!(v.passed(), "{}", v.notes);
    let v = epsilon_family_probe(&f.h, &f.g, &default_epsilon_samples(), 0.9, &grid).unwrap();
    assert!(v.passed(), "{}", v.notes);
}

#[test]
fn epsilon_probe_square_fails() {
    let grid = GridSpec::new(16, 64, 0.9).unwrap();
    let h = series(&[(0.0, 0.0), (0.0, 0.0), (1.0, 0.0)]);
    let v =
        epsilon_family_probe(&h, &AnalyticSeries::zero(), &[C::new(0.0, 0.0)], 0.9, &grid).unwrap();
    assert_eq!(v.status, Status::CertifiedFail);
    assert_eq!(v.witnesses[0].label, "epsilon");
}

#[test]
fn epsilon_probe_rejects_bad_input() {
    let grid = GridSpec::default();
    let id = AnalyticSeries::<f64>::identity();
    let zero = AnalyticSeries::zero();
    assert!(epsilon_family_probe(&id, &zero, &[C::new(1.5, 0.0)], 0.9, &grid).is_err());
    assert!(epsilon_family_probe(&id, &zero, &[], 0.9, &grid).is_err());
    assert!(epsilon_family_probe(&id, &zero, &[C::new(0.0, 0.0)], 1.0, &grid).is_err());
}

#[test]
fn ray_probe_blocks_hidden_pocket() {
    let pts = vec![
        C::new(0.0, 0.0),
        C::new(4.0, 0.0),
        C::new(4.0, 4.0),
        C::new(2.5, 4.0),
        C::new(2.5, 1.0),
        C::new(1.5, 1.0),
        C::new(1.5, 4.0),
        C::new(0.0, 4.0),
    ];
    let params: Vec<f64> = (0..pts.len()).map(|i| i as f64).collect();
    let curve = Curve::new(params.clone(), pts.clone(), true).unwrap();
    // the slot is straight so it still escapes upward
    assert!(ray_accessibility(&curve).is_none());

    // bend the slot into an L so its end is hidden
    let hooked = vec![
        C::new(0.0, 0.0),
        C::new(4.0, 0.0),
        C::new(4.0, 4.0),
        C::new(2.5, 4.0),
        C::new(2.5, 1.5),
        C::new(3.5, 1.5),
        C::new(3.5, 0.5),
        C::new(1.5, 0.5),
        C::new(1.5, 4.0),
        C::new(0.0, 4.0),
    ];
    let params: Vec<f64> = (0..hooked.len()).map(|i| i as f64).collect();
    let curve = Curve::new(params, hooked, true).unwrap();
    let w = ray_accessibility(&curve).expect("hidden slot end");
    assert_eq!(w.label, "ray_blocked");
}

proptest! {
    #[test]
    fn kh_monotone_in_coanalytic_moduli(
        b in proptest::collection::vec(-0.3f64..0.3, 1..6),
        scale in 1.0f64..4.0,
    ) {
        let mut g = vec![C::new(0.0, 0.0)];
        g.extend(b.iter().map(|&x| C::new(x, 0.5 * x)));
        let h = series(&[(0.0, 0.0), (1.0, 0.0)]);
        let base = HarmonicMap::new(h.clone(), AnalyticSeries::new(g.clone()).unwrap());
        let bigger = HarmonicMap::new(h, AnalyticSeries::new(g.iter().map(|c| c * scale).collect()).unwrap());
        let (a, b) = (kh_coefficient_test(&base), kh_coefficient_test(&bigger));
        prop_assert!(b.sum_value >= a.sum_value);
        prop_assert!(!( !a.passes && b.passes));
    }

    #[test]
    fn dilatation_bound_implies_positive_jacobian(re in -0.95f64..0.95, im in -0.95f64..0.95) {
        let z = C::new(re, im);
        prop_assume!(z.norm() < 0.99);
        let f = build_ctc_biharmonic(&example());
        let a = f.dilatation(z).unwrap().norm();
        prop_assert!(a < 1.0);
        prop_assert!(f.jacobian(z).unwrap() > 0.0);
    }
}
