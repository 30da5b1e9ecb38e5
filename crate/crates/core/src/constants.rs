//! Connection constants of `y*` and checks of its asymptotic expansions.
//!
//! ```text
//! b* = ∫_{-∞}^0 e^{-s/2} cos(ωs) y*(s)^3 ds
//! c* = ∫_{-∞}^0 e^{-s/2} sin(ωs) y*(s)^3 ds
//! d* = ∫_0^∞ e^{s} ((1-y*)^2 - (1-y*)^3/3) ds
//! ```
//!
//! and from them `y* ~ A e^{x/2} sin(ωx + φ)` at `-∞`, `y* ~ 1 - B e^{-x}` at `+∞`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::branch::Branch;
use crate::ivp::State;
use crate::picard::OMEGA;
use crate::quadrature::simpson;

pub const DEFAULT_TRUNC_BC: f64 = 30.0;
pub const DEFAULT_TRUNC_D: f64 = 15.0;
pub const QUADRATURE_STEP: f64 = 1e-3;
const TWO_OVER_SQRT3: f64 = 1.154_700_538_379_251_5;

/// Fit window for the left remainder.
pub const LEFT_FIT: (f64, f64) = (-20.0, -8.0);
/// Fit window for the right remainder.
pub const RIGHT_FIT: (f64, f64) = (6.0, 14.0);

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConstantsError {
    #[error("branch covers [{have_lo}, {have_hi}], need [{need_lo}, {need_hi}]")]
    InsufficientDomain {
        need_lo: f64,
        need_hi: f64,
        have_lo: f64,
        have_hi: f64,
    },
    #[error("a* - b* = {0} is not positive")]
    PhaseQuadrant(f64),
    #[error("invalid truncation depth or step {0}")]
    InvalidTruncation(f64),
    #[error("too few extrema ({0}) to fit an envelope")]
    TooFewPoints(usize),
}

type Result<T> = std::result::Result<T, ConstantsError>;

fn require<B: Branch + ?Sized>(branch: &B, lo: f64, hi: f64) -> Result<()> {
    if branch.covers(lo, hi) {
        Ok(())
    } else {
        let (have_lo, have_hi) = branch.domain();
        Err(ConstantsError::InsufficientDomain {
            need_lo: lo,
            need_hi: hi,
            have_lo,
            have_hi,
        })
    }
}

fn positive(v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(ConstantsError::InvalidTruncation(v))
    }
}

fn y_at<B: Branch + ?Sized>(b: &B, x: f64) -> f64 {
    b.eval(x).map(|s| s.y).unwrap_or(f64::NAN)
}

fn left_integral<B, K>(left: &B, depth: f64, step: f64, kernel: K) -> Result<f64>
where
    B: Branch + ?Sized,
    K: Fn(f64) -> f64,
{
    positive(depth)?;
    positive(step)?;
    require(left, -depth, 0.0)?;
    Ok(simpson(
        |s| {
            let y = y_at(left, s);
            (-0.5 * s).exp() * kernel(OMEGA * s) * y * y * y
        },
        -depth,
        0.0,
        step,
    ))
}

pub fn compute_b_star<B: Branch + ?Sized>(left: &B, depth: f64) -> Result<f64> {
    compute_b_star_with_step(left, depth, QUADRATURE_STEP)
}

pub fn compute_b_star_with_step<B: Branch + ?Sized>(left: &B, depth: f64, step: f64) -> Result<f64> {
    left_integral(left, depth, step, f64::cos)
}

pub fn compute_c_star<B: Branch + ?Sized>(left: &B, depth: f64) -> Result<f64> {
    compute_c_star_with_step(left, depth, QUADRATURE_STEP)
}

pub fn compute_c_star_with_step<B: Branch + ?Sized>(left: &B, depth: f64, step: f64) -> Result<f64> {
    left_integral(left, depth, step, f64::sin)
}

pub fn compute_d_star<B: Branch + ?Sized>(right: &B, depth: f64) -> Result<f64> {
    compute_d_star_with_step(right, depth, QUADRATURE_STEP)
}

pub fn compute_d_star_with_step<B: Branch + ?Sized>(right: &B, depth: f64, step: f64) -> Result<f64> {
    positive(depth)?;
    positive(step)?;
    require(right, 0.0, depth)?;
    Ok(simpson(
        |s| {
            let z = 1.0 - y_at(right, s);
            s.exp() * (z * z - z * z * z / 3.0)
        },
        0.0,
        depth,
        step,
    ))
}

/// `(a*, b*, c*, d*)` and the asymptotic parameters derived from them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConnectionConstants {
    pub a_star: f64,
    pub b_star: f64,
    pub c_star: f64,
    pub d_star: f64,
    #[serde(rename = "amplitude_A")]
    pub amplitude: f64,
    pub phase_phi: f64,
    #[serde(rename = "coeff_B")]
    pub coeff_b: f64,
}

pub fn assemble(a_star: f64, b_star: f64, c_star: f64, d_star: f64) -> Result<ConnectionConstants> {
    let cos_part = a_star - b_star;
    if !(cos_part > 0.0) {
        return Err(ConstantsError::PhaseQuadrant(cos_part));
    }
    Ok(ConnectionConstants {
        a_star,
        b_star,
        c_star,
        d_star,
        amplitude: TWO_OVER_SQRT3 * cos_part.hypot(c_star),
        phase_phi: c_star.atan2(cos_part),
        coeff_b: (2.0 + a_star) / 3.0 + d_star,
    })
}

impl ConnectionConstants {
    pub fn phase_over_pi(&self) -> f64 {
        self.phase_phi / std::f64::consts::PI
    }

    /// `A e^{x/2} sin(ωx + φ)` and its derivative.
    pub fn left_tail(&self, x: f64) -> State {
        let e = (0.5 * x).exp();
        let (s, c) = (OMEGA * x + self.phase_phi).sin_cos();
        State::new(x, self.amplitude * e * s, self.amplitude * e * (0.5 * s + OMEGA * c))
    }

    /// `1 - B e^{-x}` and its derivative.
    pub fn right_tail(&self, x: f64) -> State {
        let e = self.coeff_b * (-x).exp();
        State::new(x, 1.0 - e, e)
    }

    /// Zeros of the left tail, `x_k = -(kπ + φ)/ω` for `k ≥ 1`.
    pub fn tail_zero(&self, k: usize) -> f64 {
        -(k as f64 * std::f64::consts::PI + self.phase_phi) / OMEGA
    }
}

/// Least-squares line through `log |R|` against `x`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderReport {
    pub slope: f64,
    pub intercept: f64,
    /// `(x, |R(x)|)` used in the fit.
    pub points: Vec<(f64, f64)>,
}

impl OrderReport {
    /// `K` in `|R| ≈ K e^{slope·x}`.
    pub fn prefactor(&self) -> f64 {
        self.intercept.exp()
    }
}

fn fit_log_line(points: Vec<(f64, f64)>) -> Result<OrderReport> {
    let pts: Vec<(f64, f64)> = points.into_iter().filter(|p| p.1 > 0.0 && p.1.is_finite()).collect();
    if pts.len() < 3 {
        return Err(ConstantsError::TooFewPoints(pts.len()));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1.ln()).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1.ln() - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let slope = sxy / sxx;
    Ok(OrderReport {
        slope,
        intercept: my - slope * mx,
        points: pts,
    })
}

/// Remainder `R = y* - A e^{x/2} sin(ωx + φ)`, fitted through the local
/// maxima of `|R|` on [`LEFT_FIT`].
pub fn verify_left_asymptotic<B: Branch + ?Sized>(left: &B, amplitude: f64, phase: f64) -> Result<OrderReport> {
    let (lo, hi) = LEFT_FIT;
    require(left, lo, hi)?;
    let n = ((hi - lo) / QUADRATURE_STEP).round() as usize;
    let r: Vec<(f64, f64)> = (0..=n)
        .map(|i| {
            let x = lo + i as f64 * QUADRATURE_STEP;
            let tail = amplitude * (0.5 * x).exp() * (OMEGA * x + phase).sin();
            (x, (y_at(left, x) - tail).abs())
        })
        .collect();
    let peaks = r
        .windows(3)
        .filter(|w| w[1].1 >= w[0].1 && w[1].1 >= w[2].1)
        .map(|w| w[1])
        .collect();
    fit_log_line(peaks)
}

/// Remainder `Q = 1 - y* - B e^{-x}` fitted on [`RIGHT_FIT`].
pub fn verify_right_asymptotic<B: Branch + ?Sized>(right: &B, coeff_b: f64) -> Result<OrderReport> {
    let (lo, hi) = RIGHT_FIT;
    require(right, lo, hi)?;
    let points = (0..=80)
        .map(|i| {
            let x = lo + (hi - lo) * i as f64 / 80.0;
            (x, (1.0 - y_at(right, x) - coeff_b * (-x).exp()).abs())
        })
        .collect();
    fit_log_line(points)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub integral: f64,
    pub target: f64,
    pub residual: f64,
}

/// `∫_0^S e^{-2s}(-3z^2 + z^3) ds` with `z = 1 - y*`, against `a* - 1`.
pub fn integral_identity_check<B: Branch + ?Sized>(right: &B, a_star: f64, depth: f64) -> Result<IdentityCheck> {
    positive(depth)?;
    require(right, 0.0, depth)?;
    let integral = simpson(
        |s| {
            let z = 1.0 - y_at(right, s);
            (-2.0 * s).exp() * (-3.0 * z * z + z * z * z)
        },
        0.0,
        depth,
        QUADRATURE_STEP,
    );
    let target = a_star - 1.0;
    Ok(IdentityCheck {
        integral,
        target,
        residual: (integral - target).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ivp::IntegratorConfig;
    use crate::manifold::RightBranch;
    use crate::picard::{extend_left, LeftBranch, PicardOperator};
    use std::sync::OnceLock;

    struct Constant {
        value: f64,
        lo: f64,
        hi: f64,
    }

    impl Branch for Constant {
        fn domain(&self) -> (f64, f64) {
            (self.lo, self.hi)
        }
        fn eval(&self, x: f64) -> Option<State> {
            (self.lo <= x && x <= self.hi).then(|| State::new(x, self.value, 0.0))
        }
    }

    struct Fixture {
        left: LeftBranch,
        right: RightBranch,
        a: f64,
    }

    fn fixture() -> &'static Fixture {
        static F: OnceLock<Fixture> = OnceLock::new();
        F.get_or_init(|| {
            let right = RightBranch::build(&IntegratorConfig::default()).unwrap();
            let a = right.slope_at_origin();
            let op = PicardOperator::new(a, 32.0, 32_001).unwrap();
            let (u, _) = op.solve(1e-12, 500).unwrap();
            Fixture {
                left: extend_left(&op, &u).unwrap(),
                right,
                a,
            }
        })
    }

    fn constants() -> ConnectionConstants {
        let f = fixture();
        assemble(
            f.a,
            compute_b_star(&f.left, 30.0).unwrap(),
            compute_c_star(&f.left, 30.0).unwrap(),
            compute_d_star(&f.right, 15.0).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn zero_profile_gives_zero_integrals() {
        let z = Constant {
            value: 0.0,
            lo: -40.0,
            hi: 0.0,
        };
        assert_eq!(compute_b_star(&z, 30.0).unwrap(), 0.0);
        assert_eq!(compute_c_star(&z, 30.0).unwrap(), 0.0);
        let one = Constant {
            value: 1.0,
            lo: 0.0,
            hi: 20.0,
        };
        assert_eq!(compute_d_star(&one, 15.0).unwrap(), 0.0);
        let id = integral_identity_check(&one, 0.1687122, 15.0).unwrap();
        assert_eq!(id.integral, 0.0);
        assert!((id.residual - 0.8312878).abs() < 1e-12);
    }

    #[test]
    fn insufficient_domain() {
        let f = fixture();
        assert!(matches!(
            compute_b_star(&f.left, 40.0),
            Err(ConstantsError::InsufficientDomain { .. })
        ));
        assert!(matches!(
            compute_d_star(&f.right, 100.0),
            Err(ConstantsError::InsufficientDomain { .. })
        ));
        assert!(matches!(compute_d_star(&f.right, -1.0), Err(ConstantsError::InvalidTruncation(_))));
    }

    #[test]
    fn integrals_near_reference_values() {
        let c = constants();
        assert!((c.b_star + 0.0005497).abs() < 5e-7, "{}", c.b_star);
        assert!((c.c_star - 0.001939).abs() < 2e-6, "{}", c.c_star);
        assert!(c.c_star > 0.0);
        assert!((c.d_star - 4.1728).abs() < 5e-3, "{}", c.d_star);
    }

    #[test]
    fn truncation_tails() {
        let f = fixture();
        let b30 = compute_b_star(&f.left, 30.0).unwrap();
        let b25 = compute_b_star(&f.left, 25.0).unwrap();
        assert!((b30 - b25).abs() <= 1e-8);
        let d15 = compute_d_star(&f.right, 15.0).unwrap();
        let d13 = compute_d_star(&f.right, 13.0).unwrap();
        assert!((d15 - d13).abs() <= 1e-4);
    }

    #[test]
    fn refinement_stability() {
        let f = fixture();
        let pairs = [
            (
                compute_b_star_with_step(&f.left, 30.0, 2e-3).unwrap(),
                compute_b_star(&f.left, 30.0).unwrap(),
                1e-8,
            ),
            (
                compute_c_star_with_step(&f.left, 30.0, 2e-3).unwrap(),
                compute_c_star(&f.left, 30.0).unwrap(),
                1e-8,
            ),
            (
                compute_d_star_with_step(&f.right, 15.0, 2e-3).unwrap(),
                compute_d_star(&f.right, 15.0).unwrap(),
                1e-6,
            ),
        ];
        for (coarse, fine, bound) in pairs {
            assert!((coarse - fine).abs() < bound, "{coarse} {fine}");
        }
    }

    #[test]
    fn integrals_match_running_integrals() {
        // b* = I_c(S), c* = -I_s(S) in the Picard variables
        let f = fixture();
        let (ic, is) = f.left.running_integrals(30.0).unwrap();
        assert!((compute_b_star(&f.left, 30.0).unwrap() - ic).abs() < 1e-11);
        assert!((compute_c_star(&f.left, 30.0).unwrap() + is).abs() < 1e-11);
    }

    #[test]
    fn assembled_formulas() {
        let c = assemble(0.1687122, -0.0005497, 0.001939, 4.1728).unwrap();
        assert!((c.amplitude - 0.19546).abs() < 1e-5, "{}", c.amplitude);
        assert!((c.phase_phi - 0.011455).abs() < 1e-5, "{}", c.phase_phi);
        assert!((c.coeff_b - 4.8957).abs() < 1e-4, "{}", c.coeff_b);
        let again = assemble(c.a_star, c.b_star, c.c_star, c.d_star).unwrap();
        assert_eq!(again, c);
        assert_eq!(c.coeff_b, (2.0 + c.a_star) / 3.0 + c.d_star);
        assert!(c.phase_phi > 0.0 && c.phase_phi < std::f64::consts::FRAC_PI_2);
    }

    #[test]
    fn trivial_specialisation() {
        let a = 0.17;
        let c = assemble(a, 0.0, 0.0, 0.0).unwrap();
        assert!((c.amplitude - 2.0 * a / 3f64.sqrt()).abs() < 1e-16);
        assert_eq!(c.phase_phi, 0.0);
        assert_eq!(c.coeff_b, (2.0 + a) / 3.0);
    }

    #[test]
    fn phase_quadrant_refused() {
        assert_eq!(assemble(0.1, 0.1, 0.01, 1.0), Err(ConstantsError::PhaseQuadrant(0.0)));
        assert!(assemble(0.1, 0.2, 0.01, 1.0).is_err());
    }

    #[test]
    fn serde_field_names() {
        let c = assemble(0.1687122, -0.0005497, 0.001939, 4.1728).unwrap();
        let v = serde_json::to_value(c).unwrap();
        for k in ["a_star", "b_star", "c_star", "d_star", "amplitude_A", "phase_phi", "coeff_B"] {
            assert!(v.get(k).is_some(), "{k}");
        }
        let back: ConnectionConstants = serde_json::from_value(v).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn left_remainder_order() {
        let f = fixture();
        let c = constants();
        let rep = verify_left_asymptotic(&f.left, c.amplitude, c.phase_phi).unwrap();
        assert!((1.4..=1.6).contains(&rep.slope), "{}", rep.slope);
        let scaled: Vec<f64> = [-10.0, -15.0, -20.0]
            .iter()
            .map(|&x| ((f.left.eval(x).unwrap().y - c.left_tail(x).y) / (0.5 * x).exp()).abs())
            .collect();
        assert!(scaled[0] > scaled[1] && scaled[1] > scaled[2], "{scaled:?}");
    }

    #[test]
    fn leading_reconstruction() {
        let f = fixture();
        let c = constants();
        let w = OMEGA;
        for x in [-6.0, -9.0, -12.0] {
            let lead = TWO_OVER_SQRT3 * ((c.a_star - c.b_star) * (w * x).sin() + c.c_star * (w * x).cos()) * (0.5 * x).exp();
            let y = f.left.eval(x).unwrap().y;
            assert!((y - lead).abs() < 5.0 * (1.5 * x).exp(), "x={x}");
        }
    }

    #[test]
    fn right_remainder_order() {
        let f = fixture();
        let c = constants();
        let rep = verify_right_asymptotic(&f.right, c.coeff_b).unwrap();
        assert!((-2.2..=-1.8).contains(&rep.slope), "{}", rep.slope);
        let scaled: Vec<f64> = [8.0f64, 10.0, 12.0]
            .iter()
            .map(|&x| x.exp() * (1.0 - f.right.eval(x).unwrap().y))
            .collect();
        assert!(scaled[0] < scaled[1] && scaled[1] < scaled[2] && scaled[2] < c.coeff_b + 1e-4);
        let q5 = (1.0 - f.right.eval(5.0).unwrap().y - c.coeff_b * (-5.0f64).exp()).abs();
        assert!(q5 <= 2.0 * rep.prefactor() * (-10.0f64).exp(), "{q5} {}", rep.prefactor());
    }

    #[test]
    fn identity_residuals() {
        let f = fixture();
        let id = integral_identity_check(&f.right, f.a, 15.0).unwrap();
        assert!(id.residual <= 1e-6, "{id:?}");
        let r20 = integral_identity_check(&f.right, f.a, 20.0).unwrap().residual;
        let r10 = integral_identity_check(&f.right, f.a, 10.0).unwrap().residual;
        assert!(r20 <= r10);
    }
}
