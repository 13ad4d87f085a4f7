use proptest::prelude::*;

use super::arcs::xi_segments;
use super::*;
use crate::curves::ParamCurve;
use crate::projgeom::dir_from_slope;
use crate::tail::upper_envelope;
use crate::verdict::Status;

fn r() -> ResolutionParams {
    ResolutionParams::default()
}

fn sequence(n: usize, point: impl Fn(f64) -> Point2, slope: impl Fn(f64) -> f64) -> DirectionSequence {
    let entries = (1..=n)
        .map(|k| {
            let k = k as f64;
            PTPoint::new(point(k), dir_from_slope(slope(k)))
        })
        .collect();
    DirectionSequence::new(entries, Point2::ORIGIN, ProjDir::HORIZONTAL).unwrap()
}

fn parabola() -> DirectionSequence {
    sequence(40, |n| Point2::new(1.0 / n, 1.0 / (n * n)), |n| 2.0 / n)
}

#[test]
fn gamma_segment_endpoints_are_exact() {
    let a = Knot::new(0.5, 0.25, 1.0);
    let b = Knot::new(1.0 / 3.0, 1.0 / 9.0, 2.0 / 3.0);
    let g = GammaSegment::new(a, b);
    assert_eq!(g.value(a.x), a.y);
    assert_eq!(g.value(b.x), b.y);
    assert_eq!(g.slope(a.x), a.slope);
    assert_eq!(g.slope(b.x), b.slope);
    let mid = 0.5 * (a.x + b.x);
    assert!((g.value(mid) - 0.5 * (a.y + b.y)).abs() < 1e-15);
    assert!((g.slope(mid) - 2.0 * (a.y - b.y) / (a.x - b.x)).abs() < 1e-14);

    let c = gamma_segment(a, b);
    assert_eq!(c.domain(), (b.x, a.x));
    assert_eq!(c.derivative(a.x).unwrap(), Point2::new(1.0, a.slope));
}

#[test]
fn gamma_slope_matches_difference_quotient() {
    let g = GammaSegment::new(Knot::new(2.0, 0.3, -0.4), Knot::new(1.2, 0.9, 1.7));
    for i in 1..40 {
        let t = 1.2 + 0.8 * (i as f64 + 0.37) / 41.0;
        let h = 1e-6;
        let fd = (g.value(t + h) - g.value(t - h)) / (2.0 * h);
        assert!((fd - g.slope(t)).abs() < 1e-7, "t = {t}: {fd} vs {}", g.slope(t));
    }
}

#[test]
fn axis_sequence_is_already_normalized() {
    let seq = sequence(40, |n| Point2::new(1.0 / n, 0.0), |n| 1.0 / n);
    let ns = normalize_and_extract(&seq, 6, &r()).unwrap();
    assert_eq!(ns.knots.len(), 6);
    for (i, k) in ns.knots.iter().enumerate() {
        let n = (i + 1) as f64;
        assert_eq!(k.y, 0.0);
        assert!((k.x - 1.0 / n).abs() < 1e-15);
        assert!((k.slope - 1.0 / n).abs() < 1e-12);
    }
}

#[test]
fn alternating_sides_select_one() {
    let seq = sequence(40, |n| Point2::new(1.0 / n, if n as u32 % 2 == 0 { 1.0 } else { -1.0 } / (n * n)), |n| {
        if n as u32 % 2 == 0 { 2.0 / n } else { -2.0 / n }
    });
    let ns = normalize_and_extract(&seq, 20, &r()).unwrap();
    assert!(ns.knots.iter().all(|k| k.y > 0.0));
    assert!(matches!(
        normalize_and_extract(&seq, 21, &r()),
        Err(Error::InsufficientPoints { found: 20, want: 21 })
    ));
}

#[test]
fn reflections_are_recorded() {
    let seq = sequence(40, |n| Point2::new(-1.0 / n, -1.0 / (n * n)), |n| 2.0 / n);
    let ns = normalize_and_extract(&seq, 8, &r()).unwrap();
    assert!(ns.frame.flip_x && ns.frame.flip_y);
    for (k, src) in ns.knots.iter().zip(&ns.sources) {
        assert!(ns.frame.to_world(Point2::new(k.x, k.y)).dist(src.p) < 1e-15);
    }
}

#[test]
fn transverse_input_is_rejected() {
    let fig = sequence(40, |n| Point2::new(1.0 / ((2.0 * n + 1.0) * std::f64::consts::PI), 0.0), |_| 1.0);
    assert!(matches!(construct_closed_c1(&fig, 8, &r()), Err(Error::NotConvergent(_))));
}

#[test]
fn too_few_points() {
    let seq = sequence(3, |n| Point2::new(1.0 / n, 1.0 / (n * n)), |n| 2.0 / n);
    assert!(matches!(
        construct_closed_c1(&seq, 8, &r()),
        Err(Error::InsufficientPoints { found: 3, want: 8 })
    ));
}

#[test]
fn parabola_construction_validates() {
    let cc = construct_closed_c1(&parabola(), 8, &r()).unwrap();
    let curve = cc.curve().unwrap();
    assert!(curve.is_closed());
    for n in 1..=8 {
        let n = n as f64;
        let t = cc.knot_parameter(n as usize - 1);
        assert!(curve.eval(t).dist(Point2::new(1.0 / n, 1.0 / (n * n))) < 1e-9);
    }
    let v = validate_construction(&cc, &r());
    assert_eq!(v.status, Status::Pass, "{v}");
    assert!(v.residual("position_error").unwrap() <= 1e-9);
    assert!(v.residual("tangent_error").unwrap() <= 1e-6);
    assert!(v.residual("junction_mismatch").unwrap() <= 1e-12);
    assert!(v.residual("closure_slope").unwrap() <= 1e-9);
    assert_eq!(v.residual("crossings"), Some(0.0));
}

#[test]
fn closure_endpoints() {
    let cc = construct_closed_c1(&parabola(), 8, &r()).unwrap();
    let (y_max, x0) = (cc.closure.y_max, cc.x0());
    let y0 = cc.ns.knots[0].y;
    let close = |a: Point2, b: Point2| a.dist(b) < 1e-12;
    assert!(close(cc.closure.alpha.eval(1.0), Point2::ORIGIN));
    assert!(close(cc.closure.alpha.eval(0.0), Point2::new(0.0, 2.0 * y_max - y0)));
    assert!(close(cc.closure.beta.eval(0.0), Point2::new(x0, 2.0 * y_max - y0)));
    assert!(close(cc.closure.delta.eval(0.0), Point2::new(x0, y0)));
    assert!(close(cc.xi.eval(x0), Point2::new(x0, y0)));
    assert_eq!(cc.xi.eval(0.0), Point2::ORIGIN);
}

#[test]
fn zero_data_gives_flat_xi() {
    let seq = sequence(40, |n| Point2::new(1.0 / n, 0.0), |_| 0.0);
    let cc = construct_closed_c1(&seq, 8, &r()).unwrap();
    for i in 0..=1000 {
        let t = cc.x0() * i as f64 / 1000.0;
        assert_eq!(cc.xi.eval(t).y, 0.0);
    }
    assert!(validate_construction(&cc, &r()).is_pass());
}

#[test]
fn corrupted_slope_fails_tangent_matching() {
    let mut ns = normalize_and_extract(&parabola(), 8, &r()).unwrap();
    ns.knots[3].slope += 0.5;
    let v = validate_construction(&ClosedConstruction::from_normalized(ns), &r());
    assert_eq!(v.status, Status::Fail);
    assert_eq!(v.witness.as_deref(), Some("tangent"));
}

#[test]
fn lowered_band_fails_region_containment() {
    let mut cc = construct_closed_c1(&parabola(), 8, &r()).unwrap();
    let (x0, y_max) = (cc.x0(), cc.closure.y_max);
    cc.closure.beta = ParamCurve::new((0.0, 1.0), move |t| Point2::new(x0 * (1.0 - t), y_max - 0.5))
        .with_derivative(move |_| Point2::new(-x0, 0.0));
    let v = validate_construction(&cc, &r());
    assert_eq!(v.status, Status::Fail);
    assert!(v.has_flag("failed:region"));
    assert_eq!(v.witness.as_deref(), Some("region"));
}

#[test]
fn segment_slopes_decay() {
    let ns = normalize_and_extract(&parabola(), 24, &r()).unwrap();
    let peaks: Vec<f64> = xi_segments(&ns)
        .iter()
        .map(|g| {
            (0..=256)
                .map(|i| g.slope(g.lower.x + (g.upper.x - g.lower.x) * i as f64 / 256.0).abs())
                .fold(0.0, f64::max)
        })
        .collect();
    let env = upper_envelope(&peaks[1..]);
    assert!(env[env.len() - 1] < 0.25 * env[0], "{env:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn rigid_motions_preserve_the_verdict(deg in -180.0..180.0f64, tx in -2.0..2.0f64, ty in -2.0..2.0f64) {
        let a = deg.to_radians();
        let shift = Point2::new(tx, ty);
        let base = parabola();
        let entries = base
            .entries
            .iter()
            .map(|e| PTPoint::new(e.p.rotate(a) + shift, e.dir.rotate(a)))
            .collect();
        let moved = DirectionSequence::new(entries, shift, ProjDir::HORIZONTAL.rotate(a)).unwrap();
        let cc = construct_closed_c1(&moved, 8, &r()).unwrap();
        let v = validate_construction(&cc, &r());
        prop_assert_eq!(v.status, Status::Pass, "{}", v);
    }
}
