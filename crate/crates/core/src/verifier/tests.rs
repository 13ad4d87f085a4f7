use approx::assert_relative_eq;
use proptest::prelude::*;

use super::*;
use crate::curves::c1_surrogate;
use crate::maps::{self, by_name};
use crate::sequences::is_transverse;

fn linear_map(a: [f64; 4]) -> PlaneMap {
    let det = a[0] * a[3] - a[1] * a[2];
    PlaneMap::new(
        "linear",
        move |p| Point2::new(a[0] * p.x + a[1] * p.y, a[2] * p.x + a[3] * p.y),
        move |p| Point2::new((a[3] * p.x - a[1] * p.y) / det, (-a[2] * p.x + a[0] * p.y) / det),
    )
}

#[test]
fn default_battery_meets_its_invariants() {
    let b = Battery::default_battery();
    let r = ResolutionParams::default();
    assert_eq!(b.curves.len(), 12);
    assert_eq!(b.sequences.len(), 8);
    assert_eq!(b.directions, DEFAULT_DIRECTIONS);
    for c in &b.curves {
        for &t in &c.probes {
            let v = c1_surrogate(&c.curve, t, &r);
            assert!(v.is_pass(), "{} at {t}: {v:?}", c.name);
        }
    }
    for (name, seq) in &b.sequences {
        assert!(is_transverse(seq, &r).unwrap().is_pass(), "{name}");
    }
}

#[test]
fn battery_spec_json_round_trip() {
    let spec = BatterySpec::default();
    let back = BatterySpec::from_json(&spec.to_json()).unwrap();
    assert_eq!(back, spec);
    assert!(spec.to_json().contains("\"kind\": \"figure1\""));
}

#[test]
fn battery_spec_rejects_bad_input() {
    assert!(matches!(BatterySpec::from_json("{\"curves\": 3}"), Err(Error::Parse(_))));
    let mut spec = BatterySpec::default();
    spec.curves[0].probes.push(50.0);
    assert!(matches!(spec.build(), Err(Error::InvalidArgument(_))));
    let spec = BatterySpec { directions: 2, ..BatterySpec::default() };
    assert!(spec.build().is_err());
}

#[test]
fn explicit_sequence_spec_builds() {
    let spec = SequenceSpec::Explicit { entries: vec![[1.0, 0.0, 0.5], [0.5, 0.0, 0.5]], limit: [0.0, 0.0, 0.0] };
    let seq = spec.build().unwrap();
    assert_eq!(seq.entries.len(), 2);
    assert_relative_eq!(seq.entries[1].dir.theta(), 0.5, epsilon = 1e-15);
}

#[test]
fn figure1_points_follow_the_odd_multiples_of_pi() {
    let seq = figure1_sequence(0.0, std::f64::consts::FRAC_PI_4, 5).unwrap();
    for (k, e) in seq.entries.iter().enumerate() {
        let expected = 1.0 / ((2 * (k + 1) + 1) as f64 * std::f64::consts::PI);
        assert_relative_eq!(e.p.x, expected, epsilon = 1e-15);
        assert_eq!(e.p.y, 0.0);
        assert_relative_eq!(e.dir.slope(), 1.0, epsilon = 1e-12);
    }
}

#[test]
fn number_rounds_to_twelve_significant_digits() {
    assert_eq!(number(1.0 / 3.0), json!(0.333333333333));
    assert_eq!(number(123456.7890123456), json!(123456.789012));
    assert_eq!(number(f64::INFINITY), json!("inf"));
    assert_eq!(number(f64::NEG_INFINITY), json!("-inf"));
    assert_eq!(number(f64::NAN), json!("nan"));
    assert_eq!(number(0.0), json!(0.0));
}

#[test]
fn identity_is_differentiable_with_identity_fit() {
    let r = ResolutionParams::default();
    let v = differentiability_probe(&maps::identity(), Point2::new(0.4, -1.3), &r);
    assert!(v.is_pass());
    assert_relative_eq!(v.residual("a11").unwrap(), 1.0, epsilon = 1e-9);
    assert_relative_eq!(v.residual("a12").unwrap(), 0.0, epsilon = 1e-9);
    assert_relative_eq!(v.residual("a21").unwrap(), 0.0, epsilon = 1e-9);
    assert_relative_eq!(v.residual("a22").unwrap(), 1.0, epsilon = 1e-9);
}

#[test]
fn pushforwards_at_the_origin_of_h_and_hinv() {
    let r = ResolutionParams::default();
    for v in unit_directions(16) {
        let h = pushforward_vector(&maps::map_h(), Point2::ORIGIN, v, &r);
        assert!(h.zero && !h.infinite && h.value.norm() <= ZERO_MAGNITUDE);
        let hinv = pushforward_vector(&maps::map_hinv(), Point2::ORIGIN, v, &r);
        assert!(hinv.infinite, "{v}: {hinv:?}");
        assert_relative_eq!(hinv.growth_exponent, -0.5, epsilon = 1e-6);
    }
}

#[test]
fn p_is_not_differentiable_at_bump_centers() {
    let r = ResolutionParams::default();
    let p = maps::map_p(8).unwrap();
    assert!(differentiability_probe(&p, Point2::new(0.125, 0.0), &r).is_fail());
    assert!(differentiability_probe(&p, Point2::new(0.3, 0.1), &r).is_pass());
}

#[test]
fn corner_shear_fails_property_a_on_the_x_axis() {
    let r = ResolutionParams::default();
    let v = check_property_a(&maps::corner_shear(), &Battery::default_battery(), &r);
    assert!(v.is_fail());
    assert_eq!(v.witness.as_deref(), Some("x-axis"));
}

#[test]
fn classify_identity_passes_everything() {
    let r = ResolutionParams::default();
    let rep = classify(&maps::identity(), &Battery::default_battery(), &r);
    assert_eq!(rep.overall(), Status::Pass);
    assert!(rep.probes.iter().all(|p| p.verdict.is_pass()));
}

#[test]
fn classify_w_fails_only_property_c() {
    let r = ResolutionParams::default();
    let rep = classify(&maps::map_w(), &Battery::default_battery(), &r);
    assert!(rep.a.is_pass() && rep.b.is_pass());
    assert!(rep.c.is_fail());
    assert_eq!(rep.c.witness.as_deref(), Some("figure1"));
    assert_eq!(rep.overall(), Status::Fail);
}

#[test]
fn classify_q_passes_with_a_discontinuous_bundle_map() {
    let r = ResolutionParams::default();
    let rep = classify(&by_name("Q").unwrap(), &Battery::default_battery(), &r);
    assert_eq!(rep.overall(), Status::Pass);
    assert!(rep.probe("bundle_continuity@y-axis").unwrap().is_fail());
}

#[test]
fn report_json_is_deterministic_and_parses() {
    let r = ResolutionParams::default();
    let b = Battery::default_battery();
    let f = maps::map_w();
    let first = classify(&f, &b, &r).to_json();
    let second = classify(&f, &b, &r).to_json();
    assert_eq!(first, second);
    let summary = parse_report(&first).unwrap();
    assert_eq!(summary.map, "W");
    assert_eq!(summary.overall, Status::Fail);
    assert_eq!(summary.properties["c"].witness.as_deref(), Some("figure1"));
    assert_eq!(summary.properties["a"].status, Status::Pass);
    let value: Value = serde_json::from_str(&first).unwrap();
    let keys: Vec<&String> = value.as_object().unwrap().keys().collect();
    assert_eq!(keys, ["map", "overall", "probes", "properties", "resolution"]);
}

#[test]
fn parse_report_rejects_garbage() {
    assert!(matches!(parse_report("{\"map\": 1}"), Err(Error::Parse(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn linear_maps_are_recovered_exactly(
        a in prop::array::uniform4(-3.0f64..3.0),
        x in -2.0f64..2.0,
        y in -2.0f64..2.0,
    ) {
        prop_assume!((a[0] * a[3] - a[1] * a[2]).abs() > 0.1);
        let r = ResolutionParams::default();
        let v = differentiability_probe(&linear_map(a), Point2::new(x, y), &r);
        prop_assert!(v.is_pass(), "{v:?}");
        for (key, expected) in ["a11", "a12", "a21", "a22"].iter().zip(a) {
            prop_assert!((v.residual(key).unwrap() - expected).abs() < 1e-8);
        }
    }

    #[test]
    fn pushforward_is_linear_in_the_vector(scale in 0.1f64..5.0, angle in 0.0f64..std::f64::consts::TAU) {
        let r = ResolutionParams::default();
        let f = maps::rotation(30.0);
        let p = Point2::new(0.2, 0.7);
        let v = Point2::polar(1.0, angle);
        let one = pushforward_vector(&f, p, v, &r).value;
        let many = pushforward_vector(&f, p, v * scale, &r).value;
        prop_assert!(many.dist(one * scale) < 1e-8 * scale.max(1.0));
    }
}
