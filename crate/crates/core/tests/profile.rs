mod common;

use common::{model, sign_changes, solution};
use monopole::branch::Branch;
use monopole::constants;
use monopole::profile::{self, ProfileError, RadialProfile, ZeroSource};
use monopole::verify;
use proptest::prelude::*;

#[test]
fn boundary_values() {
    let m = model();
    let a = solution().a_star;
    let s = m.evaluate(0.0);
    assert_eq!(s.y, 0.0);
    assert!((s.dy - a).abs() < 1e-15);
    let b = m.constants().coeff_b;
    assert!((m.evaluate_y(30.0) - (1.0 - b * (-30.0f64).exp())).abs() < 1e-12);
}

#[test]
fn far_left_is_tail() {
    let m = model();
    let c = m.constants();
    let y = m.evaluate_y(-50.0);
    let expect = c.amplitude * (-25.0f64).exp() * (-25.0 * 3f64.sqrt() + c.phase_phi).sin();
    assert_eq!(y, expect);
    assert!(y.abs() < 1e-11 * c.amplitude);
}

#[test]
fn stitching_at_origin() {
    let m = model();
    let l = m.evaluate(-1e-9);
    let r = m.evaluate(1e-9);
    assert!((l.y - r.y).abs() < 1e-8);
    assert!((l.dy - r.dy).abs() < 1e-8);
}

#[test]
fn linear_near_origin() {
    let m = model();
    let x = 1e-4;
    assert!((m.evaluate_y(x) / x - solution().a_star).abs() <= 1e-3);
}

#[test]
fn switch_continuity() {
    let m = model();
    let c = m.constants();
    let (xl, xr) = m.switch_points();
    let l = m.left().eval(xl).unwrap().y;
    assert!((l - c.left_tail(xl).y).abs() < profile::SWITCH_TOLERANCE);
    let r = m.right().eval(xr).unwrap().y;
    assert!((r - c.right_tail(xr).y).abs() < profile::SWITCH_TOLERANCE);
}

#[test]
fn bounds_on_both_sides() {
    let m = model();
    for i in 1..=2500 {
        let x = i as f64 * 0.01;
        let y = m.evaluate_y(x);
        assert!(y > 0.0 && y < 1.0, "x={x}");
        let y = m.evaluate_y(-x);
        assert!(y.abs() <= 0.5, "x={}", -x);
    }
}

#[test]
fn core_defect() {
    let m = model();
    let d = verify::defect(m.left(), -20.0, 0.0, 500).max(verify::defect(m.right(), 0.0, 25.0, 500));
    assert!(d <= 1e-8, "{d}");
}

#[test]
fn inconsistent_slopes_rejected() {
    let s = solution();
    let mut c = s.constants;
    c.a_star += 1e-6;
    let err = profile::build_profile(c, s.left.clone(), s.right.clone()).unwrap_err();
    assert!(matches!(err, ProfileError::InconsistentInputs { .. }));
}

#[test]
fn bad_switch_rejected() {
    let s = solution();
    let err = profile::build_profile_with_switches(s.constants, s.left.clone(), s.right.clone(), -50.0, 25.0).unwrap_err();
    assert!(matches!(err, ProfileError::InvalidSwitch { .. }));
    let err = profile::build_profile_with_switches(s.constants, s.left.clone(), s.right.clone(), -2.0, 25.0).unwrap_err();
    assert!(matches!(err, ProfileError::SwitchMismatch { .. }));
}

#[test]
fn zeros_structure() {
    let m = model();
    let zeros = m.find_zeros(12).unwrap();
    assert_eq!(zeros.len(), 13);
    assert_eq!(zeros[0].x, 0.0);
    assert_eq!(zeros[0].source, ZeroSource::Boundary);
    assert!(zeros.windows(2).all(|w| w[0].x > w[1].x));
    for z in &zeros[1..] {
        let expect = if z.x >= -m.left().horizon() {
            ZeroSource::Bisected
        } else {
            ZeroSource::Asymptotic
        };
        assert_eq!(z.source, expect);
    }
    let c = m.constants();
    let x1_tail = -(2.0 / 3f64.sqrt()) * (std::f64::consts::PI + c.phase_phi);
    assert!((zeros[1].x - x1_tail).abs() < 1e-2);
    assert!((zeros[1].x + 3.64048).abs() < 1e-4);
    let period = 2.0 * std::f64::consts::PI / 3f64.sqrt();
    for w in zeros[5..].windows(2) {
        assert!((w[0].x - w[1].x - period).abs() < 1e-3);
    }
}

#[test]
fn bisected_zeros_match_tail_prediction() {
    let m = model();
    let c = m.constants();
    let zeros = m.find_zeros(8).unwrap();
    for z in &zeros[4..] {
        let k = z.index;
        assert!((z.x - c.tail_zero(k)).abs() < 1e-6, "{z:?} vs {}", c.tail_zero(k));
    }
}

#[test]
fn coverage_exceeded() {
    let m = model();
    assert!(matches!(m.find_zeros(500), Err(ProfileError::CoverageExceeded { .. })));
}

#[test]
fn shifted_solutions_have_n_zeros() {
    let m = model();
    for n in 0..=5 {
        let s = m.shifted_solution(n).unwrap();
        let count = sign_changes(|x| s.eval(x), 1e-6, 40.0, 1e-3);
        assert_eq!(count, n, "n={n}");
        assert!((s.eval(60.0) - 1.0).abs() < 1e-20_f64.max(1e-12));
    }
    assert_eq!(m.shifted_solution(0).unwrap().shift(), 0.0);
}

#[test]
fn largest_zero_of_profile_itself() {
    let m = model();
    let tau = m.largest_zero_shift(|x| m.evaluate_y(x), -10.0, 20.0).unwrap();
    assert!(tau.abs() < 1e-12, "{tau}");
}

#[test]
fn largest_zero_of_translate() {
    let m = model();
    let tau = m.largest_zero_shift(|x| m.evaluate_y(x - 2.5), -10.0, 20.0).unwrap();
    assert!((tau - 2.5).abs() < 1e-9, "{tau}");
    for n in 1..=3 {
        let s = m.shifted_solution(n).unwrap();
        let tau = m.largest_zero_shift(|x| s.eval(x), -10.0, 40.0).unwrap();
        assert!((tau + s.shift()).abs() < 1e-9);
    }
}

#[test]
fn largest_zero_errors() {
    let m = model();
    assert!(matches!(
        m.largest_zero_shift(|_| 1.0, -10.0, 10.0),
        Err(ProfileError::NoZeroFound { .. })
    ));
    // a zero, but not a translate of y*
    assert!(matches!(
        m.largest_zero_shift(|x| x.tanh(), -10.0, 10.0),
        Err(ProfileError::RepresentationMismatch { .. })
    ));
}

#[test]
fn radial_profile() {
    let m = model().clone();
    let c = *m.constants();
    assert!(matches!(
        RadialProfile::new(m.clone(), 0.0),
        Err(ProfileError::NonpositiveRadius(_))
    ));
    let r0 = 1.7;
    let f = RadialProfile::new(m, r0).unwrap();
    assert_eq!(f.evaluate_f(r0).unwrap(), 0.0);
    assert!(matches!(f.evaluate_f(-1.0), Err(ProfileError::NonpositiveRadius(_))));
    assert!(matches!(f.evaluate_f(0.0), Err(ProfileError::NonpositiveRadius(_))));
    let big = [1e4, 1e6, 1e8].map(|r| r * (1.0 - f.evaluate_f(r).unwrap()) / r0);
    // B carries the O(e^-15) truncation of d*, about 7e-6
    assert!((big[2] - c.coeff_b).abs() < 2e-5);
    assert!((big[0] - c.coeff_b).abs() > (big[2] - c.coeff_b).abs());
    assert!((c.coeff_b - 4.90).abs() < 1e-2);
    for r in [r0 * 1e-6, r0 * 1e-8] {
        let v = f.evaluate_f(r).unwrap();
        assert!((v - f.small_r(r)).abs() < 1e-6 * (r / r0).sqrt());
    }
    let near: Vec<f64> = [1e-2, 1e-3, 1e-4]
        .iter()
        .map(|d| (f.evaluate_f(r0 * (1.0 + d)).unwrap() / (1.0 + d).ln() - c.a_star).abs())
        .collect();
    assert!(near[0] > near[1] && near[1] > near[2]);
}

#[test]
fn left_tail_constants_are_consistent() {
    let s = solution();
    let rep = constants::verify_left_asymptotic(&s.left, s.constants.amplitude, s.constants.phase_phi).unwrap();
    assert!((1.4..=1.6).contains(&rep.slope));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scale_covariance(r in 1e-3f64..1e3) {
        let m = model().clone();
        let f1 = RadialProfile::new(m.clone(), 1.3).unwrap();
        let f2 = RadialProfile::new(m, 2.6).unwrap();
        let a = f2.evaluate_f(r).unwrap();
        let b = f1.evaluate_f(r / 2.0).unwrap();
        prop_assert!((a - b).abs() < 1e-14);
    }

    #[test]
    fn translate_zero_count(n in 0usize..=5) {
        let s = model().shifted_solution(n).unwrap();
        prop_assert_eq!(sign_changes(|x| s.eval(x), 1e-6, 40.0, 2e-3), n);
    }
}
