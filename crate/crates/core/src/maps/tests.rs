use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use approx::assert_abs_diff_eq;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::bumps::bump_g;
use super::*;

fn catalog() -> Vec<PlaneMap> {
    [
        "identity",
        "rot:30",
        "rot:-75.5",
        "G",
        "H",
        "Hinv",
        "Q",
        "W",
        "P:1",
        "P:8",
        "P:40",
        "corner_shear",
    ]
    .iter()
    .map(|n| by_name(n).unwrap())
    .collect()
}

fn working_disk(rng: &mut ChaCha8Rng) -> Point2 {
    loop {
        let p = Point2::new(rng.gen_range(-4.0..4.0), rng.gen_range(-4.0..4.0));
        if p.norm() <= 4.0 {
            return p;
        }
    }
}

/// Points concentrated where the maps act nontrivially.
fn near_features(rng: &mut ChaCha8Rng) -> Point2 {
    match rng.gen_range(0..3) {
        0 => Point2::polar(rng.gen_range(0.0..1.2), rng.gen_range(0.0..2.0 * PI)),
        1 => {
            let n = rng.gen_range(1..9);
            let c = 0.5f64.powi(n);
            Point2::new(c, 0.0) + Point2::polar(c * 0.25 * rng.gen::<f64>(), rng.gen_range(0.0..2.0 * PI))
        }
        _ => working_disk(rng),
    }
}

#[test]
fn round_trips_on_working_disk() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let pts: Vec<Point2> = (0..1000)
        .map(|i| if i % 2 == 0 { working_disk(&mut rng) } else { near_features(&mut rng) })
        .collect();
    for f in catalog() {
        for &p in &pts {
            let a = f.inverse(f.forward(p));
            let b = f.forward(f.inverse(p));
            assert!(a.dist(p) < 1e-9, "{}: inverse∘forward at {p} gave {a}", f.name());
            assert!(b.dist(p) < 1e-9, "{}: forward∘inverse at {p} gave {b}", f.name());
        }
    }
}

#[test]
fn g_examples() {
    let g = map_g();
    let g1 = bump_g().value(1.0);
    assert_eq!(g.forward(Point2::new(0.0, 2.0)), Point2::new(0.0, 2.0));
    assert_eq!(g.forward(Point2::new(1.0, 0.0)), Point2::new(1.0, 0.0));
    let p = g.forward(Point2::new(1.0, 1.0));
    assert_abs_diff_eq!(p.x, g1, epsilon = 1e-15);
    assert_abs_diff_eq!(p.y, 1.4412, epsilon = 1e-3);
}

#[test]
fn h_examples() {
    let h = map_h();
    assert_eq!(h.forward(Point2::ORIGIN), Point2::ORIGIN);
    let theta = 1.1;
    let p = h.forward(Point2::polar(0.5, theta));
    assert_abs_diff_eq!(p.norm(), 0.25, epsilon = 1e-15);
    assert_abs_diff_eq!(p.y.atan2(p.x), theta, epsilon = 1e-15);
    let q = map_hinv().forward(Point2::polar(0.25, theta));
    assert_abs_diff_eq!(q.norm(), 0.5, epsilon = 1e-15);
}

#[test]
fn q_examples() {
    let q = map_q().unwrap();
    assert_eq!(q.forward(Point2::new(3.0, 0.0)), Point2::new(3.0, 0.0));
    assert_eq!(q.forward(Point2::new(0.0, 0.5)), Point2::new(0.0, 0.5));
    let p = Point2::new(0.3, 0.7);
    assert!(q.inverse(q.forward(p)).dist(p) < 1e-9);
    assert!(q_inverse(q.forward(p)).unwrap().dist(p) < 1e-9);
}

#[test]
fn w_examples() {
    let w = map_w();
    for theta in [0.0, 0.4, 2.0, 3.0] {
        let p = Point2::polar(1.5, theta);
        assert_eq!(w.forward(p), p);
    }
    let on_axis = w.forward(Point2::new(0.5, 0.0));
    assert_eq!(on_axis, Point2::new(0.5, 0.0));
    let p = w.forward(Point2::polar(0.5, FRAC_PI_2));
    assert_abs_diff_eq!(p.y.atan2(p.x), FRAC_PI_2, epsilon = 1e-14);
    // Near the origin the angle is compressed toward π w(θ/π).
    let p = w.forward(Point2::polar(1e-4, FRAC_PI_4));
    assert_abs_diff_eq!(p.y.atan2(p.x), PI * 0.15625, epsilon = 1e-6);
}

#[test]
fn p_examples() {
    let p = map_p(8).unwrap();
    assert_eq!(p.forward(Point2::new(5.0, 5.0)), Point2::new(5.0, 5.0));
    for n in 1..=4 {
        let c = Point2::new(0.5f64.powi(n), 0.0);
        assert_eq!(p.forward(c), c);
    }
    let balls = p_support_balls(2);
    assert!(balls[0].0.x - balls[0].1 > balls[1].0.x + balls[1].1);
    assert!(map_p(0).is_err());
    assert!(map_p(41).is_err());
}

#[test]
fn p_moves_points_on_the_vertical_pencil() {
    let p = map_p(3).unwrap();
    let c = Point2::new(0.25, 0.0);
    let q = c + Point2::new(0.0, 0.02);
    let moved = p.forward(q);
    assert!(moved.dist(q) > 1e-3);
    let flat = c + Point2::new(0.02, 0.01);
    assert_eq!(p.forward(flat), flat);
}

#[test]
fn composition_and_inversion() {
    let h = map_h();
    let inv = invert(&h);
    let id = identity();
    let comp = compose(&id, &h);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..100 {
        let p = working_disk(&mut rng);
        assert!(inv.forward(inv.inverse(p)).dist(p) < 1e-9);
        assert_eq!(comp.forward(p), h.forward(p));
    }
}

#[test]
fn corner_shear_bends_axis() {
    let f = corner_shear();
    assert_eq!(f.forward(Point2::new(-2.0, 0.0)), Point2::new(-2.0, 2.0));
}

#[test]
fn unknown_names_are_rejected() {
    for name in ["nosuch", "rot:", "rot:abc", "P:x", "P:0", "P:-1", "g"] {
        assert!(by_name(name).is_err(), "{name}");
    }
}

fn disk_point() -> impl Strategy<Value = Point2> {
    (0.0..4.0f64, 0.0..(2.0 * PI)).prop_map(|(r, a)| Point2::polar(r, a))
}

proptest! {
    #[test]
    fn g_preserves_polar_angle(p in disk_point()) {
        prop_assume!(p.x != 0.0);
        let q = map_g().forward(p);
        prop_assert!((q.y.atan2(q.x) - p.y.atan2(p.x)).abs() < 1e-12);
    }

    #[test]
    fn h_squares_radius(p in disk_point()) {
        let q = map_h().forward(p);
        prop_assert!((q.norm() - p.norm() * p.norm()).abs() <= 1e-12 * (1.0 + p.norm() * p.norm()));
        if p.norm() > 0.0 {
            prop_assert!((q.y.atan2(q.x) - p.y.atan2(p.x)).abs() < 1e-12);
        }
    }

    #[test]
    fn q_fixes_x_and_axis(p in disk_point(), x in -4.0..4.0f64) {
        let q = map_q().unwrap();
        prop_assert_eq!(q.forward(p).x, p.x);
        prop_assert_eq!(q.forward(Point2::new(x, 0.0)), Point2::new(x, 0.0));
    }

    #[test]
    fn w_fixes_radius(p in disk_point()) {
        let q = map_w().forward(p);
        prop_assert!((q.norm() - p.norm()).abs() < 1e-12);
        if p.norm() >= 1.0 {
            prop_assert_eq!(q, p);
        }
    }

    #[test]
    fn p_is_identity_off_supports(p in disk_point()) {
        let balls = p_support_balls(8);
        prop_assume!(balls.iter().all(|(c, r)| p.dist(*c) >= *r));
        prop_assert_eq!(map_p(8).unwrap().forward(p), p);
    }
}
