use mannheim_core::curves::{arc_length_map, make_catalog_curve, reparametrize};
use mannheim_core::frames::modified_frame;
use mannheim_core::mannheim::*;
use mannheim_core::numeric::ode::StepPolicy;
use mannheim_core::synthesis::{integrate_frame, kappa_from_mannheim_condition, partner_torsion_closed_form, Branch, CurvatureProfile, FramePose, ScalarFn};
use mannheim_core::{CurveKind, Error, Interval, ParamCurve, Vec3};

fn unit(kind: CurveKind, params: &[f64]) -> ParamCurve {
    let c = make_catalog_curve(kind, params).unwrap();
    reparametrize(&c, &arc_length_map(&c, 1e-13).unwrap())
}

fn helix() -> ParamCurve {
    unit(CurveKind::CircularHelix, &[2.0, 1.0])
}

fn mannheim_base(c: f64, tau: ScalarFn, branch: Branch, lo: f64, hi: f64) -> ParamCurve {
    let dom = Interval::new(lo, hi);
    let kappa = kappa_from_mannheim_condition(c, &tau, branch, dom).unwrap();
    integrate_frame(&CurvatureProfile::new(kappa, tau, dom), &FramePose::canonical(), &StepPolicy::with_tol(1e-12)).unwrap().curve
}

fn check(report: &PairReport, name: &str) -> f64 {
    report.checks.iter().find(|c| c.name == name).unwrap_or_else(|| panic!("no check {name}")).value
}

#[test]
fn helix_partner_is_its_axis() {
    let pair = construct_partner(&helix(), 2.0).unwrap();
    for s in pair.partner.domain().grid(50) {
        let p = pair.partner.point(s).unwrap();
        assert!(p.xy().norm() < 1e-9, "{p}");
        let f = modified_frame(&pair.partner, s).unwrap();
        assert!(f.kappa_sq < 1e-9 && f.tau.abs() < 1e-9);
    }
    let r = verify_pair(&pair, 512, 1e-5).unwrap();
    assert!((r.distance_mean - 2.0).abs() < 1e-9);
    assert!(r.distance_std < 1e-9);
    assert_eq!(r.colinearity_samples, 0);
    assert_eq!(r.degenerate_set.len(), 512);
    assert!(r.partner_is_line);
    assert!((r.distance_kappa_claim_mean - 0.8).abs() < 1e-9);
    assert!(r.distance_kappa_claim_flag);
    for v in r.fm_relation_residuals.unwrap() {
        assert!(v < 1e-5);
    }
    assert!(r.passed, "{:?}", r.checks);
}

#[test]
fn helix_line_partner_fm_relations_by_hand() {
    // a = -2, τ_P = 1, cos²θ = 1/5 for the helix(2,1)/axis configuration.
    let pair = construct_partner(&helix(), 2.0).unwrap();
    assert_eq!(pair.epsilon, 1.0);
    assert_eq!(pair.a(), -2.0);
    let smp = pair.sample(1.3).unwrap();
    assert!((smp.speed_ratio - 1.0 / 5f64.sqrt()).abs() < 1e-12);
    let cos = smp.base.d1.dot(&smp.partner.d1);
    assert!((cos * cos - 0.2).abs() < 1e-12);
}

#[test]
fn kappa_scaled_distance_claim_is_flagged_not_adopted() {
    let base = mannheim_base(2.0, ScalarFn::Poly(vec![0.1, 0.05]), Branch::Plus, -1.0, 2.0);
    let r = verify_pair(&construct_partner(&base, 2.0).unwrap(), 512, 1e-5).unwrap();
    assert!((r.distance_mean - 2.0).abs() < 1e-9);
    assert!(r.distance_std / r.distance_mean < 1e-8);
    assert!(r.distance_kappa_claim_flag);
}

#[test]
fn synthesized_pairs_satisfy_every_relation() {
    let cases = [
        (vec![0.1, 0.05], Branch::Plus, -1.0, 2.0),
        (vec![0.1, 0.05], Branch::Minus, -1.0, 2.0),
        (vec![0.06, 0.04], Branch::Plus, 0.0, 4.0),
        (vec![0.05, 0.0, 0.02], Branch::Minus, 0.0, 3.0),
    ];
    for (coeffs, branch, lo, hi) in cases {
        let base = mannheim_base(2.0, ScalarFn::Poly(coeffs.clone()), branch, lo, hi);
        let (c_fit, res) = mannheim_residual(&base, None, 512).unwrap();
        assert!((c_fit - 2.0).abs() < 1e-8 && res < 1e-8, "{coeffs:?}: c={c_fit} res={res}");
        let pair = construct_partner(&base, 2.0).unwrap();
        let r = verify_pair(&pair, 512, 1e-5).unwrap();
        assert!(r.colinearity_max < 1e-6, "{coeffs:?} {branch:?}: {}", r.colinearity_max);
        assert!(r.distance_std / r.distance_mean < 1e-8);
        let ang = r.angle_residuals;
        for v in [ang.cos_speed, ang.tan_torsion, ang.theta_rate] {
            assert!(v.unwrap() < 1e-5, "{coeffs:?} {branch:?}: {ang:?}");
        }
        assert!(r.passed, "{coeffs:?} {branch:?}: {:?}", r.checks);
        let expected_eps = match branch {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        };
        assert_eq!(r.epsilon, expected_eps);
        assert_eq!(r.a, -r.epsilon * 2.0);
    }
}

#[test]
fn conjugate_of_tangent_torsion_partner_is_mannheim() {
    let dom = Interval::new(-1.2, 1.2);
    let tau = partner_torsion_closed_form(1.0, &ScalarFn::Const(1.0), 0.0, 0.0, dom, 1e-3).unwrap();
    let psi = integrate_frame(&CurvatureProfile::new(ScalarFn::Const(1.0), tau, dom), &FramePose::canonical(), &StepPolicy::with_tol(1e-12))
        .unwrap()
        .curve;
    assert!(partner_residual(&psi, 1.0, 512).unwrap() < 1e-5);
    let pair = construct_conjugate(&psi, 1.0).unwrap();
    let (c, res) = mannheim_residual(&pair.base, None, 512).unwrap();
    assert!(res < 1e-5, "{res}");
    assert!((c - pair.c()).abs() < 1e-6, "{c} vs {}", pair.c());
    let r = verify_pair(&pair, 512, 1e-5).unwrap();
    assert!(r.passed, "{:?}", r.checks);
    assert!((r.distance_mean - 1.0).abs() < 1e-9);
    assert!(check(&r, "angle_theta_rate") < 1e-5);
    assert!(check(&r, "partner_condition") < 1e-5);
}

#[test]
fn binormal_offset_of_helix_is_coaxial_helix() {
    let pair = construct_conjugate(&helix(), -2.0).unwrap();
    let radius = (4.0f64 + 4.0 / 5.0).sqrt();
    for s in pair.base.domain().grid(20) {
        assert!((pair.base.point(s).unwrap().xy().norm() - radius).abs() < 1e-9);
    }
    let r = verify_pair(&pair, 256, 1e-5).unwrap();
    assert!(!r.passed);
}

#[test]
fn non_normal_shift_fails_colinearity() {
    let h = helix();
    let shifted = h.transformed(nalgebra::Matrix3::identity(), Vec3::new(0.5, -0.3, 1.0));
    let pair = MannheimPair::from_curves(h, shifted, Vec3::new(0.5, -0.3, 1.0).norm(), 1.0);
    let r = verify_pair(&pair, 256, 1e-5).unwrap();
    assert!(r.colinearity_max > 0.5);
    assert!(!check_passed(&r, "colinearity"));
    assert!(!r.passed);
}

fn check_passed(r: &PairReport, name: &str) -> bool {
    r.checks.iter().find(|c| c.name == name).unwrap().passed
}

#[test]
fn residual_formulas_on_helix() {
    let (c, res) = mannheim_residual(&helix(), None, 512).unwrap();
    assert!((c - 2.0).abs() < 1e-10 && res < 1e-10);
    for a in [0.5f64, 1.0, -2.0] {
        let expected = (0.4 / a).abs() * (1.0 + a * a * 0.04);
        let got = partner_residual(&helix(), a, 512).unwrap();
        assert!((got - expected).abs() < 1e-8, "a={a}: {got} vs {expected}");
    }
    let (_, res) = mannheim_residual(&unit(CurveKind::TwistedCubic, &[]), None, 512).unwrap();
    assert!(res > 0.1);
    assert!(matches!(mannheim_residual(&unit(CurveKind::Line, &[]), None, 128), Err(Error::Unfittable)));
}

#[test]
fn construction_preconditions() {
    assert!(matches!(construct_partner(&helix(), 0.0), Err(Error::InvalidParams { .. })));
    let raw = make_catalog_curve(CurveKind::CircularHelix, &[2.0, 1.0]).unwrap();
    assert!(matches!(construct_partner(&raw, 2.0), Err(Error::NotUnitSpeed { .. })));
    let cubic = unit(CurveKind::PlanarCubic, &[]);
    assert!(matches!(construct_partner(&cubic, 0.5), Err(Error::CurvatureDegenerate { .. })));
    match construct_conjugate(&unit(CurveKind::Line, &[]), 1.0) {
        Err(Error::ConjugateUndefined { s_star }) => assert!(!s_star.is_empty()),
        other => panic!("{other:?}"),
    }
}

#[test]
fn scaling_maps_constant_c_to_lambda_c() {
    let base = mannheim_base(2.0, ScalarFn::Poly(vec![0.1, 0.05]), Branch::Plus, -1.0, 2.0);
    let lambda = 1.5;
    let scaled = base.scaled(lambda).unwrap();
    let (c, res) = mannheim_residual(&scaled, None, 512).unwrap();
    assert!((c - 2.0 * lambda).abs() < 1e-8 && res < 1e-8);
    let r0 = verify_pair(&construct_partner(&base, 2.0).unwrap(), 256, 1e-5).unwrap();
    let r1 = verify_pair(&construct_partner(&scaled, 2.0 * lambda).unwrap(), 256, 1e-5).unwrap();
    assert!(r1.passed, "{:?}", r1.checks);
    assert!((r1.distance_mean - lambda * r0.distance_mean).abs() < 1e-9);
    assert!((r1.theta.unwrap() - r0.theta.unwrap()).abs() < 1e-8);
}

#[test]
fn report_round_trips_through_json() {
    let r = verify_pair(&construct_partner(&helix(), 2.0).unwrap(), 64, 1e-5).unwrap();
    let back: PairReport = serde_json::from_str(&r.to_json().unwrap()).unwrap();
    assert_eq!(back, r);
}

#[test]
fn classification_of_random_helices() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    for _ in 0..15 {
        let r: f64 = rng.random_range(0.5..5.0);
        let b: f64 = rng.random_range(0.1..3.0);
        match classify_fm(&unit(CurveKind::CircularHelix, &[r, b]), 1e-8).unwrap() {
            FmClass::CircularHelix { r: r2, b: b2 } => assert!((r2 - r).abs() < 1e-9 && (b2 - b).abs() < 1e-9, "{r},{b}"),
            other => panic!("{r},{b}: {other:?}"),
        }
    }
    let others = [
        unit(CurveKind::Circle, &[1.0]),
        unit(CurveKind::TwistedCubic, &[]),
        unit(CurveKind::PlanarCubic, &[]),
        unit(CurveKind::Ellipse, &[2.0, 1.0]),
        unit(CurveKind::Circle, &[3.0]),
    ];
    for c in &others {
        assert_eq!(classify_fm(c, 1e-8).unwrap(), FmClass::NotFM, "{:?}", c.kind());
    }
}
