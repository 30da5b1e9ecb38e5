//! The branch of `y*` on `x ≥ 0`, traced along the stable manifold of the
//! saddle at `y = 1`.
//!
//! Forward shooting from `x = 0` loses the manifold after `x ≈ 10` because
//! any slope error grows like `e^{2x}`. Running the `z = 1 - y` equation
//! backward from a point very close to the saddle is stable instead: the
//! unstable direction decays and the orbit converges onto the manifold. The
//! abscissa is then fixed by the condition `z = 1`, i.e. `y(0) = 0`.

use thiserror::Error;

use crate::branch::Branch;
use crate::ivp::{self, IntegratorConfig, IvpError, State, Termination, Trajectory};

/// Starting distance from the saddle.
pub const MANIFOLD_SEED: f64 = 1e-12;

const SEARCH_DEPTH: f64 = -80.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ManifoldError {
    #[error("seed {0} must lie in (0, 0.1)")]
    InvalidSeed(f64),
    #[error("orbit never reached z = 1 (ended at x = {x}, z = {z})")]
    NoCrossing { x: f64, z: f64 },
    #[error(transparent)]
    Integration(#[from] IvpError),
}

/// `y*` on `[0, X]` with `X` the distance from the seed to `y = 0`.
#[derive(Debug, Clone)]
pub struct RightBranch {
    traj: Trajectory,
    anchor: f64,
    seed: f64,
}

impl RightBranch {
    pub fn build(cfg: &IntegratorConfig) -> Result<Self, ManifoldError> {
        Self::build_with_seed(MANIFOLD_SEED, cfg)
    }

    pub fn build_with_seed(seed: f64, cfg: &IntegratorConfig) -> Result<Self, ManifoldError> {
        if !(seed > 0.0 && seed < 0.1) {
            return Err(ManifoldError::InvalidSeed(seed));
        }
        // z' = -z + 3z^2/4 + O(z^3) on the stable manifold
        let init = State::new(0.0, seed, -seed + 0.75 * seed * seed);
        // z is tiny near the seed, so the absolute tolerance must follow it
        let local = IntegratorConfig {
            abs_tol: cfg.abs_tol.min(seed * 1e-12),
            ..*cfg
        };
        let traj = ivp::integrate_until(ivp::rhs_z, init, SEARCH_DEPTH, &local, |s| s.end.y >= 1.0)?;
        if traj.termination() != Termination::Halted {
            let end = traj.end();
            return Err(ManifoldError::NoCrossing { x: end.x, z: end.y });
        }
        let anchor = traj.find_event_with_tol(|s| s.y - 1.0, 0.0)?;
        Ok(Self { traj, anchor, seed })
    }

    pub fn seed(&self) -> f64 {
        self.seed
    }

    /// Right end of the branch, where `1 - y` equals the seed.
    pub fn x_max(&self) -> f64 {
        -self.anchor
    }

    /// `(z, z')` with `z = 1 - y`, accurate when `z` is tiny.
    pub fn eval_z(&self, x: f64) -> Option<State> {
        if !(0.0..=self.x_max()).contains(&x) {
            return None;
        }
        let s = self.traj.eval(x + self.anchor)?;
        Some(State::new(x, s.y, s.dy))
    }

    /// `y'(0)`, an independent estimate of the critical slope.
    pub fn slope_at_origin(&self) -> f64 {
        -self.traj.eval(self.anchor).map(|s| s.dy).unwrap_or(f64::NAN)
    }
}

impl Branch for RightBranch {
    fn domain(&self) -> (f64, f64) {
        (0.0, self.x_max())
    }

    fn eval(&self, x: f64) -> Option<State> {
        self.eval_z(x).map(|s| State::new(x, 1.0 - s.y, -s.dy))
    }
}
