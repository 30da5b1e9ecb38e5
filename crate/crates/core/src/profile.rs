//! The global profile `y*` on the whole real line, its zeros and translates,
//! and the radial form `f(r) = y*(ln(r/r0))`.

use serde::Serialize;
use thiserror::Error;

use crate::branch::Branch;
use crate::constants::ConnectionConstants;
use crate::ivp::State;
use crate::manifold::RightBranch;
use crate::picard::LeftBranch;
use crate::roots::bisect;

pub const DEFAULT_X_LEFT: f64 = -20.0;
pub const DEFAULT_X_RIGHT: f64 = 25.0;
/// Largest allowed disagreement of the slope seen by different pieces.
pub const SLOPE_CONSISTENCY: f64 = 1e-9;
/// Largest allowed jump between core and tail at a switch point.
pub const SWITCH_TOLERANCE: f64 = 1e-8;
pub const ZERO_TOL: f64 = 1e-10;
/// Beyond this depth `e^{x/2}` underflows and zeros stop being meaningful.
pub const MAX_TAIL_DEPTH: f64 = 1400.0;

const SCAN_STEP: f64 = 0.01;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProfileError {
    #[error("inconsistent inputs: {what} slope {found} differs from a* = {expected}")]
    InconsistentInputs { what: &'static str, expected: f64, found: f64 },
    #[error("switch at x = {x}: core and tail differ by {gap:e}")]
    SwitchMismatch { x: f64, gap: f64 },
    #[error("switch points [{x_left}, {x_right}] not covered by the core")]
    InvalidSwitch { x_left: f64, x_right: f64 },
    #[error("zero {index} lies beyond the model's coverage")]
    CoverageExceeded { index: usize },
    #[error("no zero found on [{lo}, {hi}]")]
    NoZeroFound { lo: f64, hi: f64 },
    #[error("candidate differs from the shifted profile by {gap:e} at x = {x}")]
    RepresentationMismatch { x: f64, gap: f64 },
    #[error("radius must be positive, got {0}")]
    NonpositiveRadius(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ZeroSource {
    /// `x_0 = 0`.
    Boundary,
    /// Located by bisection on the numerical core.
    Bisected,
    /// Taken from the tail formula beyond the numerical core.
    Asymptotic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Zero {
    pub index: usize,
    pub x: f64,
    pub source: ZeroSource,
}

/// `y*` stitched from the left tail, the Picard branch, the manifold branch
/// and the right tail.
#[derive(Debug, Clone)]
pub struct ProfileModel {
    constants: ConnectionConstants,
    left: LeftBranch,
    right: RightBranch,
    x_left: f64,
    x_right: f64,
}

pub fn build_profile(constants: ConnectionConstants, left: LeftBranch, right: RightBranch) -> Result<ProfileModel, ProfileError> {
    build_profile_with_switches(constants, left, right, DEFAULT_X_LEFT, DEFAULT_X_RIGHT)
}

pub fn build_profile_with_switches(
    constants: ConnectionConstants,
    left: LeftBranch,
    right: RightBranch,
    x_left: f64,
    x_right: f64,
) -> Result<ProfileModel, ProfileError> {
    let a = constants.a_star;
    for (what, found) in [("left branch", left.a_star()), ("right branch", right.slope_at_origin())] {
        if !((found - a).abs() <= SLOPE_CONSISTENCY) {
            return Err(ProfileError::InconsistentInputs { what, expected: a, found });
        }
    }
    if !(left.covers(x_left, 0.0) && right.covers(0.0, x_right)) {
        return Err(ProfileError::InvalidSwitch { x_left, x_right });
    }
    let model = ProfileModel {
        constants,
        left,
        right,
        x_left,
        x_right,
    };
    let gap_l = (model.left.eval(x_left).map(|s| s.y).unwrap_or(f64::NAN) - constants.left_tail(x_left).y).abs();
    if !(gap_l <= SWITCH_TOLERANCE) {
        return Err(ProfileError::SwitchMismatch { x: x_left, gap: gap_l });
    }
    let z = model.right.eval_z(x_right).map(|s| s.y).unwrap_or(f64::NAN);
    let gap_r = (z - constants.coeff_b * (-x_right).exp()).abs();
    if !(gap_r <= SWITCH_TOLERANCE) {
        return Err(ProfileError::SwitchMismatch { x: x_right, gap: gap_r });
    }
    Ok(model)
}

impl ProfileModel {
    pub fn constants(&self) -> &ConnectionConstants {
        &self.constants
    }

    pub fn switch_points(&self) -> (f64, f64) {
        (self.x_left, self.x_right)
    }

    pub fn left(&self) -> &LeftBranch {
        &self.left
    }

    pub fn right(&self) -> &RightBranch {
        &self.right
    }

    /// Right end of the numerical core.
    pub fn x_max(&self) -> f64 {
        self.x_right
    }

    /// `(y*, y*')` at any real `x`.
    pub fn evaluate(&self, x: f64) -> State {
        let core = if x < self.x_left {
            None
        } else if x <= 0.0 {
            self.left.eval(x)
        } else if x <= self.x_right {
            self.right.eval(x)
        } else {
            None
        };
        core.unwrap_or_else(|| {
            if x < 0.0 {
                self.constants.left_tail(x)
            } else {
                self.constants.right_tail(x)
            }
        })
    }

    pub fn evaluate_y(&self, x: f64) -> f64 {
        self.evaluate(x).y
    }

    /// `x_0 = 0 > x_1 > … > x_n`.
    ///
    /// Zeros within the Picard horizon are bisected on the core; deeper
    /// ones come from the tail formula and are flagged as such.
    pub fn find_zeros(&self, n: usize) -> Result<Vec<Zero>, ProfileError> {
        let mut zeros = vec![Zero {
            index: 0,
            x: 0.0,
            source: ZeroSource::Boundary,
        }];
        let (depth, _) = self.left.domain();
        let y = |x: f64| self.left.eval(x).map(|s| s.y).unwrap_or(f64::NAN);
        // skip the boundary zero itself
        let mut hi = -SCAN_STEP;
        let mut y_hi = y(hi);
        while zeros.len() <= n {
            let lo = hi - SCAN_STEP;
            if lo < depth {
                break;
            }
            let y_lo = y(lo);
            if y_lo == 0.0 || y_lo.signum() != y_hi.signum() {
                let x = bisect(y, lo, hi, ZERO_TOL).map_err(|_| ProfileError::CoverageExceeded { index: zeros.len() })?;
                zeros.push(Zero {
                    index: zeros.len(),
                    x,
                    source: ZeroSource::Bisected,
                });
            }
            hi = lo;
            y_hi = y_lo;
        }
        while zeros.len() <= n {
            let index = zeros.len();
            let last = zeros[index - 1].x;
            // first tail zero strictly left of the last located one
            let mut k = ((-last * crate::picard::OMEGA - self.constants.phase_phi) / std::f64::consts::PI).floor() as usize;
            let mut x = self.constants.tail_zero(k);
            while x >= last - 0.5 {
                k += 1;
                x = self.constants.tail_zero(k);
            }
            if x < -MAX_TAIL_DEPTH {
                return Err(ProfileError::CoverageExceeded { index });
            }
            zeros.push(Zero {
                index,
                x,
                source: ZeroSource::Asymptotic,
            });
        }
        Ok(zeros)
    }

    /// `x ↦ y*(x + x_n)`, the solution with exactly `n` zeros on `(0, ∞)`.
    pub fn shifted_solution(&self, n: usize) -> Result<Shifted<'_>, ProfileError> {
        let zeros = self.find_zeros(n)?;
        Ok(Shifted {
            model: self,
            shift: zeros[n].x,
        })
    }

    /// `τ` with `candidate(x) = y*(x - τ)`, found from the candidate's largest
    /// zero on `[lo, hi]` and then checked at 100 points.
    pub fn largest_zero_shift<F>(&self, candidate: F, lo: f64, hi: f64) -> Result<f64, ProfileError>
    where
        F: Fn(f64) -> f64,
    {
        let none = ProfileError::NoZeroFound { lo, hi };
        if !(lo < hi) || !(candidate(hi) > 0.0) {
            return Err(none);
        }
        let mut b = hi;
        let mut fb = candidate(b);
        let tau = loop {
            let a = (b - SCAN_STEP).max(lo);
            let fa = candidate(a);
            if fa <= 0.0 && fb > 0.0 {
                break bisect(&candidate, a, b, 1e-13).map_err(|_| none.clone())?;
            }
            if a <= lo {
                return Err(none);
            }
            b = a;
            fb = fa;
        };
        for i in 0..100 {
            let x = tau - 10.0 + 20.0 * i as f64 / 99.0;
            let gap = (candidate(x) - self.evaluate_y(x - tau)).abs();
            if !(gap <= 1e-6) {
                return Err(ProfileError::RepresentationMismatch { x, gap });
            }
        }
        Ok(tau)
    }
}

impl Branch for ProfileModel {
    fn domain(&self) -> (f64, f64) {
        (f64::NEG_INFINITY, f64::INFINITY)
    }

    fn eval(&self, x: f64) -> Option<State> {
        x.is_finite().then(|| self.evaluate(x))
    }
}

/// A translate of `y*`.
#[derive(Debug, Clone, Copy)]
pub struct Shifted<'a> {
    model: &'a ProfileModel,
    shift: f64,
}

impl Shifted<'_> {
    pub fn shift(&self) -> f64 {
        self.shift
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.model.evaluate_y(x + self.shift)
    }
}

/// Asymptotic regime of a radius relative to `r0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    SmallR,
    NearR0,
    Core,
    LargeR,
}

impl Regime {
    pub fn of(log_ratio: f64) -> Self {
        if log_ratio <= -5.0 {
            Self::SmallR
        } else if log_ratio.abs() <= 0.05 {
            Self::NearR0
        } else if log_ratio >= 5.0 {
            Self::LargeR
        } else {
            Self::Core
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Self::SmallR => "small_r",
            Self::NearR0 => "near_r0",
            Self::Core => "core",
            Self::LargeR => "large_r",
        }
    }
}

/// `f(r) = y*(ln(r/r0))`.
#[derive(Debug, Clone)]
pub struct RadialProfile {
    r0: f64,
    model: ProfileModel,
}

impl RadialProfile {
    pub fn new(model: ProfileModel, r0: f64) -> Result<Self, ProfileError> {
        if !(r0.is_finite() && r0 > 0.0) {
            return Err(ProfileError::NonpositiveRadius(r0));
        }
        Ok(Self { r0, model })
    }

    pub fn r0(&self) -> f64 {
        self.r0
    }

    pub fn model(&self) -> &ProfileModel {
        &self.model
    }

    pub fn evaluate_f(&self, r: f64) -> Result<f64, ProfileError> {
        if !(r.is_finite() && r > 0.0) {
            return Err(ProfileError::NonpositiveRadius(r));
        }
        Ok(self.model.evaluate_y((r / self.r0).ln()))
    }

    /// `A (r/r0)^{1/2} sin(ω ln(r/r0) + φ)`, valid as `r → 0`.
    pub fn small_r(&self, r: f64) -> f64 {
        self.model.constants.left_tail((r / self.r0).ln()).y
    }

    /// `a* ln(r/r0)`, valid as `r → r0`.
    pub fn near_r0(&self, r: f64) -> f64 {
        self.model.constants.a_star * (r / self.r0).ln()
    }

    /// `1 - B r0/r`, valid as `r → ∞`.
    pub fn large_r(&self, r: f64) -> f64 {
        1.0 - self.model.constants.coeff_b * self.r0 / r
    }
}
