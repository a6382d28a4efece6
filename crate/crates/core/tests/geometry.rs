use draftopt::geometry::bspline::clamped_uniform_knots;
use draftopt::geometry::{basis, builtin_reference, fit_curve, BSplineCurve, DesignVector, FitOptions, Parameterization, Point2};
use draftopt::scenario::Scenario;
use draftopt::Bounds;
use proptest::prelude::*;

fn curve_strategy() -> impl Strategy<Value = BSplineCurve> {
    (2usize..=5, 0usize..6).prop_flat_map(|(order, extra)| {
        let n = order + extra;
        prop::collection::vec((-5.0..5.0f64, -5.0..5.0f64), n)
            .prop_map(move |pts| BSplineCurve::clamped_uniform(order, pts.into_iter().map(|(a, b)| [a, b]).collect()).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn basis_partition_of_unity(c in curve_strategy(), t in 0.0..=1.0f64) {
        let sum: f64 = c.basis_row(t).unwrap().iter().sum();
        prop_assert!((sum - 1.0).abs() < 1e-12, "{sum}");
        prop_assert!(c.basis_row(t).unwrap().iter().all(|&b| b >= 0.0));
    }

    #[test]
    fn basis_local_support(order in 2usize..=5, extra in 0usize..6, t in 0.0..1.0f64) {
        let n = order + extra;
        let knots = clamped_uniform_knots(n, order);
        for i in 0..n {
            let b = basis(i, order, t, &knots).unwrap();
            if t < knots[i] || t >= knots[i + order] {
                prop_assert_eq!(b, 0.0, "i {} t {}", i, t);
            }
        }
    }

    #[test]
    fn point_inside_active_hull(c in curve_strategy(), t in 0.0..=1.0f64) {
        let p = c.eval(t).unwrap();
        let row = c.basis_row(t).unwrap();
        let active: Vec<Point2> = row.iter().zip(c.control_points()).filter(|(w, _)| **w > 0.0).map(|(_, q)| *q).collect();
        for k in 0..2 {
            let lo = active.iter().map(|q| q[k]).fold(f64::INFINITY, f64::min);
            let hi = active.iter().map(|q| q[k]).fold(f64::NEG_INFINITY, f64::max);
            prop_assert!(p[k] >= lo - 1e-12 && p[k] <= hi + 1e-12);
        }
    }

    #[test]
    fn fit_recovers_control_points(c in curve_strategy()) {
        let n = c.control_points().len();
        let ts: Vec<f64> = (0..4 * n + 8).map(|j| j as f64 / (4 * n + 7) as f64).collect();
        let pts: Vec<Point2> = ts.iter().map(|&t| c.eval(t).unwrap()).collect();
        let opts = FitOptions { parameterization: Parameterization::Given(ts), pinned: vec![] };
        let fit = fit_curve(&pts, n, c.order(), &opts).unwrap();
        for (a, b) in fit.curve.control_points().iter().zip(c.control_points()) {
            prop_assert!((a[0] - b[0]).abs() < 1e-8 && (a[1] - b[1]).abs() < 1e-8, "{a:?} vs {b:?}");
        }
        prop_assert!(fit.rms < 1e-9);
    }

    #[test]
    fn synthesis_is_affine_in_offsets(
        x in prop::collection::vec(-0.25..0.25f64, 18),
        y in prop::collection::vec(-0.25..0.25f64, 18),
        a in 0.0..=1.0f64,
        t in 0.0..=1.0f64,
    ) {
        let reference = builtin_reference();
        let b = Bounds::uniform(18, -0.25, 0.25).unwrap();
        let z: Vec<f64> = x.iter().zip(&y).map(|(p, q)| a * p + (1.0 - a) * q).collect();
        let dx = reference.synthesize(&DesignVector::new(x, b.clone()).unwrap()).unwrap();
        let dy = reference.synthesize(&DesignVector::new(y, b.clone()).unwrap()).unwrap();
        let dz = reference.synthesize(&DesignVector::new(z, b).unwrap()).unwrap();
        for (cz, cx, cy) in [(&dz.roof, &dx.roof, &dy.roof), (&dz.floor, &dx.floor, &dy.floor), (&dz.width, &dx.width, &dy.width)] {
            let (pz, px, py) = (cz.eval(t).unwrap(), cx.eval(t).unwrap(), cy.eval(t).unwrap());
            for k in 0..2 {
                prop_assert!((pz[k] - (a * px[k] + (1.0 - a) * py[k])).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn inward_scenarios_stay_inside_reference(
        u in prop::collection::vec(0.0..=1.0f64, 18),
        free in any::<bool>(),
    ) {
        let scenario = if free { Scenario::IIb } else { Scenario::Ib };
        let b = scenario.bounds();
        let x: Vec<f64> = (0..b.dim()).map(|i| b.lower()[i] + u[i] * (b.upper()[i] - b.lower()[i])).collect();
        let reference = builtin_reference();
        let d = reference.synthesize(&DesignVector::new(x, b).unwrap()).unwrap();
        for j in 0..=200 {
            let t = j as f64 / 200.0;
            prop_assert!(d.roof.eval(t).unwrap()[1] <= reference.roof().eval(t).unwrap()[1] + 1e-12);
            prop_assert!(d.floor.eval(t).unwrap()[1] >= reference.floor().eval(t).unwrap()[1] - 1e-12);
            prop_assert!(d.width.eval(t).unwrap()[1] <= reference.width().eval(t).unwrap()[1] + 1e-12);
        }
    }
}
