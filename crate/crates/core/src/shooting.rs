//! Critical slope `a* = y'(0)` by bisection on the shooting dichotomy.
//!
//! A shot starts at `(0, 0, a)` and is classified by the first event along
//! the trajectory: the slope turning over below `y = 1` (undershoot) or `y`
//! crossing just above `1` (overshoot). The saddle at `y = 1` has unstable
//! eigenvalue `2`, so any offset from `a*` grows like `e^{2x}` and the
//! classification is a clean step function of `a`.

use thiserror::Error;

use crate::ivp::{integrate_until, rhs_forward, IntegratorConfig, IvpError, State, Termination};

/// Margin above `y = 1` that counts as an overshoot.
pub const OVERSHOOT_MARGIN: f64 = 1e-9;
/// Half-width of the neighbourhood of the saddle `(1, 0)` that counts as converged.
pub const CONVERGED_BAND: f64 = 1e-6;
pub const DEFAULT_WINDOW: f64 = 40.0;
pub const DEFAULT_BRACKET: (f64, f64) = (0.01, 0.25);
pub const DEFAULT_SLOPE_TOL: f64 = 1e-11;

const MAX_BISECTIONS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShotKind {
    Undershoot,
    Overshoot,
    Converged,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShotOutcome {
    pub kind: ShotKind,
    /// Abscissa of the classifying event (or the window end).
    pub witness_x: f64,
    pub final_state: State,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalSlope {
    pub value: f64,
    pub bracket_lo: f64,
    pub bracket_hi: f64,
    pub iterations: usize,
}

impl CriticalSlope {
    pub fn width(&self) -> f64 {
        self.bracket_hi - self.bracket_lo
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ShootingError {
    #[error("slope {0} outside the sanity range (0, 1)")]
    SlopeOutOfRange(f64),
    #[error("shooting window must be positive, got {0}")]
    InvalidWindow(f64),
    #[error("bisection tolerance must be positive, got {0}")]
    InvalidTolerance(f64),
    #[error("shot with slope {slope} is indeterminate at x = {}: enlarge the window", .state.x)]
    IndeterminateShot { slope: f64, state: State },
    #[error("invalid bracket: lo = {lo} classifies {lo_kind:?}, hi = {hi} classifies {hi_kind:?}")]
    InvalidBracket {
        lo: f64,
        hi: f64,
        lo_kind: ShotKind,
        hi_kind: ShotKind,
    },
    #[error(transparent)]
    Integration(#[from] IvpError),
}

/// Integrate `y'' - y' + y = y^3` from `(0, 0, a)` up to `window` and
/// classify the shot.
pub fn classify_shot(a: f64, window: f64, cfg: &IntegratorConfig) -> Result<ShotOutcome, ShootingError> {
    if !(a > 0.0 && a < 1.0) {
        return Err(ShootingError::SlopeOutOfRange(a));
    }
    classify_from(State::new(0.0, 0.0, a), window, cfg)
}

/// Classification of an arbitrary starting state; `classify_shot` is the
/// `(0, 0, a)` case.
pub(crate) fn classify_from(init: State, window: f64, cfg: &IntegratorConfig) -> Result<ShotOutcome, ShootingError> {
    if !(window > init.x) || !window.is_finite() {
        return Err(ShootingError::InvalidWindow(window));
    }
    let over = 1.0 + OVERSHOOT_MARGIN;
    let traj = integrate_until(rhs_forward, init, window, cfg, |step| step.end.dy < 0.0 || step.end.y >= over)?;

    // events at the very start are not classifying
    let turn = first_event_after(&traj, init.x, |s| s.dy);
    let cross = first_event_after(&traj, init.x, |s| s.y - over);

    let outcome = match (turn, cross) {
        (Some(xt), Some(xc)) if xc <= xt => overshoot(&traj, xc),
        (None, Some(xc)) => overshoot(&traj, xc),
        (Some(xt), _) => {
            let s = traj.eval(xt).expect("event inside trajectory");
            let kind = if (s.y - 1.0).abs() <= CONVERGED_BAND {
                ShotKind::Converged
            } else {
                ShotKind::Undershoot
            };
            ShotOutcome {
                kind,
                witness_x: xt,
                final_state: s,
            }
        }
        (None, None) => {
            let end = traj.end();
            let near_saddle = (end.y - 1.0).abs() <= CONVERGED_BAND && end.dy.abs() <= CONVERGED_BAND;
            if traj.termination() == Termination::Reached && near_saddle {
                ShotOutcome {
                    kind: ShotKind::Converged,
                    witness_x: end.x,
                    final_state: end,
                }
            } else {
                return Err(ShootingError::IndeterminateShot {
                    slope: init.dy,
                    state: end,
                });
            }
        }
    };
    Ok(outcome)
}

fn overshoot(traj: &crate::ivp::Trajectory, x: f64) -> ShotOutcome {
    ShotOutcome {
        kind: ShotKind::Overshoot,
        witness_x: x,
        final_state: traj.eval(x).expect("event inside trajectory"),
    }
}

fn first_event_after<P>(traj: &crate::ivp::Trajectory, x0: f64, predicate: P) -> Option<f64>
where
    P: Fn(&State) -> f64,
{
    if predicate(&traj.start()) == 0.0 {
        // a zero at the start would be reported as the event; skip past it
        return None;
    }
    traj.find_event(predicate).ok().filter(|&x| x > x0)
}

/// Bisection on the shooting classification.
///
/// `lo` must undershoot and `hi` overshoot; the bracket keeps that property
/// at every step until it is narrower than `tol`.
pub fn find_critical_slope(lo: f64, hi: f64, tol: f64, window: f64, cfg: &IntegratorConfig) -> Result<CriticalSlope, ShootingError> {
    if !(tol > 0.0) {
        return Err(ShootingError::InvalidTolerance(tol));
    }
    let lo_kind = classify_shot(lo, window, cfg)?.kind;
    let hi_kind = classify_shot(hi, window, cfg)?.kind;
    if !(lo < hi && lo_kind == ShotKind::Undershoot && hi_kind == ShotKind::Overshoot) {
        return Err(ShootingError::InvalidBracket { lo, hi, lo_kind, hi_kind });
    }

    let (mut lo, mut hi) = (lo, hi);
    let mut iterations = 0;
    while hi - lo > tol && iterations < MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        iterations += 1;
        match classify_shot(mid, window, cfg)?.kind {
            ShotKind::Undershoot => lo = mid,
            ShotKind::Overshoot => hi = mid,
            ShotKind::Converged => {
                // retest both quarter points and keep whichever sub-bracket
                // still straddles the dichotomy
                let quarter = 0.25 * (hi - lo);
                let (l2, h2) = (mid - quarter, mid + quarter);
                let k_l = classify_shot(l2, window, cfg)?.kind;
                let k_h = classify_shot(h2, window, cfg)?.kind;
                match k_l {
                    ShotKind::Undershoot => lo = l2,
                    ShotKind::Overshoot => hi = l2,
                    ShotKind::Converged => {}
                }
                match k_h {
                    ShotKind::Overshoot if h2 < hi => hi = h2,
                    ShotKind::Undershoot if h2 > lo => lo = h2,
                    _ => {}
                }
                if k_l == ShotKind::Converged && k_h == ShotKind::Converged {
                    // the whole middle half sits on the manifold to within
                    // the thresholds; nothing left to resolve
                    break;
                }
            }
        }
    }
    Ok(CriticalSlope {
        value: 0.5 * (lo + hi),
        bracket_lo: lo,
        bracket_hi: hi,
        iterations,
    })
}
