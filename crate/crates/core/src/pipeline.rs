//! End-to-end construction of `y*` and its constants.

use crate::constants::{self, ConnectionConstants, DEFAULT_TRUNC_BC, DEFAULT_TRUNC_D};
use crate::error::Error;
use crate::ivp::IntegratorConfig;
use crate::manifold::RightBranch;
use crate::picard::{self, FixedPointReport, GridFunction, LeftBranch, PicardOperator};
use crate::profile::{self, ProfileModel};
use crate::shooting::{self, CriticalSlope};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub integrator: IntegratorConfig,
    /// Shooting window.
    pub window: f64,
    pub bracket: (f64, f64),
    /// Width of the final bisection bracket for `a*`.
    pub slope_tol: f64,
    /// Picard horizon `T`.
    pub horizon: f64,
    pub grid_step: f64,
    pub picard_tol: f64,
    pub max_iter: usize,
    pub trunc_bc: f64,
    pub trunc_d: f64,
    /// Use this slope instead of shooting for it.
    pub a_star: Option<f64>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            integrator: IntegratorConfig::default(),
            window: shooting::DEFAULT_WINDOW,
            bracket: shooting::DEFAULT_BRACKET,
            slope_tol: shooting::DEFAULT_SLOPE_TOL,
            horizon: picard::DEFAULT_HORIZON,
            grid_step: 1e-3,
            picard_tol: picard::DEFAULT_TOL,
            max_iter: picard::DEFAULT_MAX_ITER,
            trunc_bc: DEFAULT_TRUNC_BC,
            trunc_d: DEFAULT_TRUNC_D,
            a_star: None,
        }
    }
}

fn positive(name: &str, v: f64) -> Result<(), Error> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::Config(format!("{name} must be positive, got {v}")))
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<(), Error> {
        self.integrator.validate()?;
        for (name, v) in [
            ("window", self.window),
            ("tol", self.slope_tol),
            ("horizon", self.horizon),
            ("grid step", self.grid_step),
            ("picard tolerance", self.picard_tol),
            ("trunc-bc", self.trunc_bc),
            ("trunc-d", self.trunc_d),
        ] {
            positive(name, v)?;
        }
        if let Some(a) = self.a_star {
            positive("a-star", a)?;
        }
        if self.max_iter == 0 {
            return Err(Error::Config("max_iter must be at least 1".into()));
        }
        Ok(())
    }

    pub fn grid_points(&self) -> usize {
        (self.horizon / self.grid_step).ceil() as usize + 1
    }
}

/// Every computed piece of `y*`.
#[derive(Debug, Clone)]
pub struct Solution {
    pub config: SolverConfig,
    /// `None` when the slope was supplied.
    pub critical: Option<CriticalSlope>,
    pub a_star: f64,
    pub right: RightBranch,
    pub operator: PicardOperator,
    pub fixed_point: GridFunction,
    pub picard: FixedPointReport,
    pub left: LeftBranch,
    pub constants: ConnectionConstants,
}

impl Solution {
    pub fn compute(config: &SolverConfig) -> Result<Self, Error> {
        config.validate()?;
        let cfg = &config.integrator;
        let (critical, right) = std::thread::scope(|s| {
            let shoot = s.spawn(|| match config.a_star {
                Some(_) => Ok(None),
                None => {
                    let (lo, hi) = config.bracket;
                    shooting::find_critical_slope(lo, hi, config.slope_tol, config.window, cfg).map(Some)
                }
            });
            let right = RightBranch::build(cfg);
            (shoot.join().expect("shooting thread panicked"), right)
        });
        let critical = critical?;
        let right = right?;
        let a_star = match (config.a_star, &critical) {
            (Some(a), _) => a,
            (None, Some(c)) => c.value,
            (None, None) => unreachable!(),
        };
        let operator = PicardOperator::new(a_star, config.horizon, config.grid_points())?;
        let (fixed_point, picard) = operator.solve(config.picard_tol, config.max_iter)?;
        let left = picard::extend_left(&operator, &fixed_point)?;
        let b = constants::compute_b_star(&left, config.trunc_bc)?;
        let c = constants::compute_c_star(&left, config.trunc_bc)?;
        let d = constants::compute_d_star(&right, config.trunc_d)?;
        let constants = constants::assemble(a_star, b, c, d)?;
        Ok(Self {
            config: *config,
            critical,
            a_star,
            right,
            operator,
            fixed_point,
            picard,
            left,
            constants,
        })
    }

    pub fn profile(&self) -> Result<ProfileModel, Error> {
        Ok(profile::build_profile(self.constants, self.left.clone(), self.right.clone())?)
    }
}
