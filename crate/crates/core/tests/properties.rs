use proptest::prelude::*;

use mannheim_core::curves::{arc_length_map, make_catalog_curve, reparametrize};
use mannheim_core::frames::{gram_residuals, modified_frame, torsion};
use mannheim_core::mannheim::{classify_fm, construct_partner, mannheim_residual, verify_pair, FmClass};
use mannheim_core::numeric::ode::StepPolicy;
use mannheim_core::synthesis::{integrate_frame, kappa_from_mannheim_condition, rigid_align, Branch, CurvatureProfile, FramePose, ScalarFn};
use mannheim_core::{CurveKind, Interval, ParamCurve, Vec3};
use nalgebra::{Rotation3, Unit};

fn unit(kind: CurveKind, params: &[f64]) -> ParamCurve {
    let c = make_catalog_curve(kind, params).unwrap();
    reparametrize(&c, &arc_length_map(&c, 1e-13).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn helix_frames_are_modified_orthogonal(r in 0.5f64..5.0, b in -3.0f64..3.0, u in 0.0f64..1.0) {
        let h = unit(CurveKind::CircularHelix, &[r, b]);
        let s = h.domain().lo + u * h.domain().len();
        let f = modified_frame(&h, s).unwrap();
        for v in gram_residuals(&f) {
            prop_assert!(v < 1e-9);
        }
        let q = r * r + b * b;
        prop_assert!((f.kappa() - r / q).abs() < 1e-9);
        prop_assert!((f.tau - b / q).abs() < 1e-9);
    }

    #[test]
    fn planar_curves_have_zero_torsion(a in 0.5f64..3.0, b in 0.5f64..3.0, u in 0.0f64..1.0) {
        let e = unit(CurveKind::Ellipse, &[a, b]);
        let s = e.domain().lo + u * e.domain().len();
        prop_assert!(torsion(&e, s).unwrap().value.abs() < 1e-9);
    }

    #[test]
    fn arc_length_inverse_undoes_forward(t in -1.0f64..1.0) {
        let c = make_catalog_curve(CurveKind::TwistedCubic, &[]).unwrap();
        let m = arc_length_map(&c, 1e-12).unwrap();
        prop_assert!((m.inverse(m.forward(t)) - t).abs() < 1e-10);
    }

    #[test]
    fn helix_axis_partner_keeps_distance(r in 0.5f64..5.0, b in 0.1f64..3.0) {
        let h = unit(CurveKind::CircularHelix, &[r, b]);
        let pair = construct_partner(&h, r).unwrap();
        let rep = verify_pair(&pair, 128, 1e-5).unwrap();
        prop_assert!((rep.distance_mean - r).abs() < 1e-8 * r);
        prop_assert!(rep.distance_std / rep.distance_mean < 1e-8);
        prop_assert!(rep.partner_is_line);
    }

    #[test]
    fn classify_recovers_helix_parameters(r in 0.5f64..5.0, b in 0.1f64..3.0) {
        match classify_fm(&unit(CurveKind::CircularHelix, &[r, b]), 1e-8).unwrap() {
            FmClass::CircularHelix { r: r2, b: b2 } => {
                prop_assert!((r2 - r).abs() < 1e-9 && (b2 - b).abs() < 1e-9);
            }
            other => prop_assert!(false, "{:?}", other),
        }
    }

    #[test]
    fn alignment_recovers_rigid_motions(ax in -1.0f64..1.0, ay in -1.0f64..1.0, angle in -3.0f64..3.0, tx in -5.0f64..5.0) {
        let axis = Vec3::new(ax, ay, 1.0);
        let rot = Rotation3::from_axis_angle(&Unit::new_normalize(axis), angle);
        let pts = make_catalog_curve(CurveKind::TwistedCubic, &[]).unwrap().sample_points(50).unwrap();
        let moved: Vec<Vec3> = pts.iter().map(|p| rot * p + Vec3::new(tx, 1.0, -2.0)).collect();
        let al = rigid_align(&pts, &moved).unwrap();
        prop_assert!(al.rmse < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 10, ..ProptestConfig::default() })]

    #[test]
    fn mannheim_pipeline_closes(tau0 in 0.05f64..0.15, slope in 0.01f64..0.03, plus in any::<bool>()) {
        let c = 2.0;
        let dom = Interval::new(0.0, 3.0);
        let tau = ScalarFn::Poly(vec![tau0, slope]);
        let branch = if plus { Branch::Plus } else { Branch::Minus };
        let kappa = kappa_from_mannheim_condition(c, &tau, branch, dom).unwrap();
        let base = integrate_frame(&CurvatureProfile::new(kappa, tau, dom), &FramePose::canonical(), &StepPolicy::with_tol(1e-12)).unwrap().curve;
        let (c_fit, res) = mannheim_residual(&base, None, 256).unwrap();
        prop_assert!((c_fit - c).abs() < 1e-8 && res < 1e-8);
        let rep = verify_pair(&construct_partner(&base, c).unwrap(), 256, 1e-5).unwrap();
        prop_assert!(rep.colinearity_max < 1e-6);
        prop_assert!(rep.distance_std / rep.distance_mean < 1e-8);
        prop_assert!(rep.passed, "{:?}", rep.checks);
    }
}
