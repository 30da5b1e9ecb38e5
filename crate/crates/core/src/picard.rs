//! `y*` on `x ≤ 0` as the fixed point of an integral operator.
//!
//! With `t = -x` and `u(t) = e^{t/2} y(-t)` the left boundary value problem
//! becomes
//!
//! ```text
//! u(t) = -(2/√3) a sin(ωt) + (2/√3) ∫_0^t e^{-s} sin(ω(t-s)) u(s)^3 ds,   ω = √3/2
//! ```
//!
//! On the ball `|u| ≤ 1/2` the right-hand side `T` is a contraction with
//! ratio `√3/2` in the sup metric. Splitting the kernel with the
//! angle-difference identity turns each sweep into two running integrals
//! `I_c(t) = ∫ e^{-s} cos(ωs) u^3` and `I_s(t) = ∫ e^{-s} sin(ωs) u^3`.

use rand::Rng;
use thiserror::Error;

use crate::branch::Branch;
use crate::ivp::State;
use crate::quadrature::cumulative_cubic;

/// `√3/2`, both the kernel frequency and the contraction ratio.
pub const OMEGA: f64 = 0.866_025_403_784_438_6;
pub const CONTRACTION_RATIO: f64 = OMEGA;
const TWO_OVER_SQRT3: f64 = 1.154_700_538_379_251_5;

/// Radius of the ball the operator maps into itself.
pub const BALL_RADIUS: f64 = 0.5;

pub const DEFAULT_HORIZON: f64 = 30.0;
pub const DEFAULT_POINTS: usize = 30_001;
pub const DEFAULT_TOL: f64 = 1e-12;
pub const DEFAULT_MAX_ITER: usize = 500;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PicardError {
    #[error("u({t}) = {value} leaves the ball |u| <= 1/2")]
    DomainViolation { t: f64, value: f64 },
    #[error("grid functions must start at u(0) = 0, got {0}")]
    NonzeroOrigin(f64),
    #[error("invalid grid: horizon {horizon}, {n} points")]
    InvalidGrid { horizon: f64, n: usize },
    #[error("grids differ")]
    GridMismatch,
    #[error("invalid slope {0}")]
    InvalidSlope(f64),
    #[error("invalid tolerance {0}")]
    InvalidTolerance(f64),
    #[error("no convergence after {iterations} iterations (last step {last_step:e})")]
    NoConvergence { iterations: usize, last_step: f64 },
}

/// Uniform samples of `u` on `[0, T]`, constrained to the ball `|u| ≤ 1/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    horizon: f64,
    values: Vec<f64>,
}

fn check_grid(horizon: f64, n: usize) -> Result<(), PicardError> {
    if !(horizon.is_finite() && horizon > 0.0) || n < 4 {
        return Err(PicardError::InvalidGrid { horizon, n });
    }
    Ok(())
}

impl GridFunction {
    pub fn new(horizon: f64, values: Vec<f64>) -> Result<Self, PicardError> {
        check_grid(horizon, values.len())?;
        if values[0] != 0.0 {
            return Err(PicardError::NonzeroOrigin(values[0]));
        }
        let h = horizon / (values.len() - 1) as f64;
        for (i, &v) in values.iter().enumerate() {
            if !(v.abs() <= BALL_RADIUS) {
                return Err(PicardError::DomainViolation { t: i as f64 * h, value: v });
            }
        }
        Ok(Self { horizon, values })
    }

    pub fn zero(horizon: f64, n: usize) -> Result<Self, PicardError> {
        Self::new(horizon, vec![0.0; n])
    }

    pub fn from_fn<F>(horizon: f64, n: usize, f: F) -> Result<Self, PicardError>
    where
        F: Fn(f64) -> f64,
    {
        check_grid(horizon, n)?;
        let h = horizon / (n - 1) as f64;
        Self::new(horizon, (0..n).map(|i| f(i as f64 * h)).collect())
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn n_points(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn step(&self) -> f64 {
        self.horizon / (self.values.len() - 1) as f64
    }

    pub fn t(&self, i: usize) -> f64 {
        i as f64 * self.step()
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// The sup metric.
    pub fn distance(&self, other: &Self) -> Result<f64, PicardError> {
        if self.horizon != other.horizon || self.values.len() != other.values.len() {
            return Err(PicardError::GridMismatch);
        }
        Ok(self.values.iter().zip(&other.values).fold(0.0, |m, (a, b)| m.max((a - b).abs())))
    }

    /// Strict sign changes, skipping exact zeros.
    pub fn sign_changes(&self) -> usize {
        let mut count = 0;
        let mut prev = 0.0f64;
        for &v in &self.values {
            if v == 0.0 {
                continue;
            }
            if prev != 0.0 && v.signum() != prev.signum() {
                count += 1;
            }
            prev = v;
        }
        count
    }
}

/// One application of `T`: values, derivative and the two running integrals.
#[derive(Debug, Clone)]
struct Sweep {
    values: Vec<f64>,
    ic: Vec<f64>,
    is: Vec<f64>,
}

/// `T` for a given slope on a given grid, with the kernel tabulated once.
#[derive(Debug, Clone)]
pub struct PicardOperator {
    a_star: f64,
    horizon: f64,
    n: usize,
    sin: Vec<f64>,
    cos: Vec<f64>,
    decay_cos: Vec<f64>,
    decay_sin: Vec<f64>,
}

impl PicardOperator {
    pub fn new(a_star: f64, horizon: f64, n: usize) -> Result<Self, PicardError> {
        if !a_star.is_finite() {
            return Err(PicardError::InvalidSlope(a_star));
        }
        check_grid(horizon, n)?;
        let h = horizon / (n - 1) as f64;
        let mut op = Self {
            a_star,
            horizon,
            n,
            sin: Vec::with_capacity(n),
            cos: Vec::with_capacity(n),
            decay_cos: Vec::with_capacity(n),
            decay_sin: Vec::with_capacity(n),
        };
        for i in 0..n {
            let t = i as f64 * h;
            let (s, c) = (OMEGA * t).sin_cos();
            let e = (-t).exp();
            op.sin.push(s);
            op.cos.push(c);
            op.decay_cos.push(e * c);
            op.decay_sin.push(e * s);
        }
        Ok(op)
    }

    pub fn a_star(&self) -> f64 {
        self.a_star
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn n_points(&self) -> usize {
        self.n
    }

    fn step(&self) -> f64 {
        self.horizon / (self.n - 1) as f64
    }

    fn sweep(&self, u: &GridFunction) -> Result<Sweep, PicardError> {
        if u.horizon != self.horizon || u.values.len() != self.n {
            return Err(PicardError::GridMismatch);
        }
        let h = self.step();
        let cube: Vec<f64> = u.values.iter().map(|v| v * v * v).collect();
        let fc: Vec<f64> = cube.iter().zip(&self.decay_cos).map(|(c, k)| c * k).collect();
        let fs: Vec<f64> = cube.iter().zip(&self.decay_sin).map(|(c, k)| c * k).collect();
        let ic = cumulative_cubic(&fc, h);
        let is = cumulative_cubic(&fs, h);
        let values = (0..self.n)
            .map(|i| TWO_OVER_SQRT3 * (self.sin[i] * (ic[i] - self.a_star) - self.cos[i] * is[i]))
            .collect();
        Ok(Sweep { values, ic, is })
    }

    /// `T(u)` on the grid of `u`.
    pub fn apply(&self, u: &GridFunction) -> Result<GridFunction, PicardError> {
        let sweep = self.sweep(u)?;
        GridFunction::new(self.horizon, sweep.values)
    }

    /// Iterate from `u ≡ 0` until the a priori bound guarantees the last
    /// iterate lies within `tol` of the fixed point.
    pub fn solve(&self, tol: f64, max_iter: usize) -> Result<(GridFunction, FixedPointReport), PicardError> {
        if !(tol.is_finite() && tol > 0.0) {
            return Err(PicardError::InvalidTolerance(tol));
        }
        let threshold = tol * (1.0 - CONTRACTION_RATIO);
        let mut u = GridFunction::zero(self.horizon, self.n)?;
        let mut prev_step = f64::NAN;
        let mut ratio = 0.0;
        let mut last_step = f64::INFINITY;
        for k in 1..=max_iter {
            let next = self.apply(&u)?;
            let d = next.distance(&u)?;
            if prev_step > 0.0 {
                ratio = d / prev_step;
            }
            prev_step = d;
            last_step = d;
            u = next;
            if d <= threshold {
                let residual = self.apply(&u)?.distance(&u)?;
                let report = FixedPointReport {
                    iterations: k,
                    final_residual: residual,
                    contraction_estimate: ratio,
                };
                return Ok((u, report));
            }
        }
        Err(PicardError::NoConvergence {
            iterations: max_iter,
            last_step,
        })
    }
}

/// Outcome of [`PicardOperator::solve`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPointReport {
    pub iterations: usize,
    /// `sup |T(u) - u|` at the returned iterate.
    pub final_residual: f64,
    /// Ratio of the last two successive differences.
    pub contraction_estimate: f64,
}

/// Upper bound on the number of iterations [`PicardOperator::solve`] may need,
/// given the size of the first step.
pub fn iteration_bound(tol: f64, first_step: f64) -> usize {
    if first_step <= tol * (1.0 - CONTRACTION_RATIO) {
        return 1;
    }
    ((tol * (1.0 - CONTRACTION_RATIO) / first_step).ln() / CONTRACTION_RATIO.ln()).ceil() as usize + 1
}

/// `y*(x) = e^{x/2} u*(-x)` on `[-T, 0]`.
///
/// Between grid nodes the running integrals are interpolated by cubics and
/// the operator formula is evaluated directly, which also yields `u'`.
#[derive(Debug, Clone)]
pub struct LeftBranch {
    a_star: f64,
    horizon: f64,
    h: f64,
    ic: Vec<f64>,
    is: Vec<f64>,
}

/// Wrap a converged fixed point as a dense branch of `y*`.
pub fn extend_left(op: &PicardOperator, u_star: &GridFunction) -> Result<LeftBranch, PicardError> {
    let sweep = op.sweep(u_star)?;
    Ok(LeftBranch {
        a_star: op.a_star,
        horizon: op.horizon,
        h: op.step(),
        ic: sweep.ic,
        is: sweep.is,
    })
}

fn lagrange4(f: &[f64], i0: usize, s: f64) -> f64 {
    // nodes at s = 0, 1, 2, 3 relative to i0
    let (a, b, c, d) = (f[i0], f[i0 + 1], f[i0 + 2], f[i0 + 3]);
    let l0 = -(s - 1.0) * (s - 2.0) * (s - 3.0) / 6.0;
    let l1 = s * (s - 2.0) * (s - 3.0) / 2.0;
    let l2 = -s * (s - 1.0) * (s - 3.0) / 2.0;
    let l3 = s * (s - 1.0) * (s - 2.0) / 6.0;
    a * l0 + b * l1 + c * l2 + d * l3
}

impl LeftBranch {
    pub fn a_star(&self) -> f64 {
        self.a_star
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    fn integrals(&self, t: f64) -> (f64, f64) {
        let n = self.ic.len();
        let pos = t / self.h;
        let cell = (pos.floor() as usize).min(n - 2);
        let i0 = cell.saturating_sub(1).min(n - 4);
        let s = pos - i0 as f64;
        (lagrange4(&self.ic, i0, s), lagrange4(&self.is, i0, s))
    }

    /// `(u(t), u'(t))`.
    pub fn eval_u(&self, t: f64) -> Option<(f64, f64)> {
        if !(0.0..=self.horizon).contains(&t) {
            return None;
        }
        let (ic, is) = self.integrals(t);
        let (s, c) = (OMEGA * t).sin_cos();
        let u = TWO_OVER_SQRT3 * (s * (ic - self.a_star) - c * is);
        let du = c * (ic - self.a_star) + s * is;
        Some((u, du))
    }

    /// `I_c(t)` and `I_s(t)`.
    pub fn running_integrals(&self, t: f64) -> Option<(f64, f64)> {
        (0.0..=self.horizon).contains(&t).then(|| self.integrals(t))
    }
}

impl Branch for LeftBranch {
    fn domain(&self) -> (f64, f64) {
        (-self.horizon, 0.0)
    }

    fn eval(&self, x: f64) -> Option<State> {
        let t = -x;
        let (u, du) = self.eval_u(t)?;
        let e = (-0.5 * t).exp();
        Some(State::new(x, e * u, e * (0.5 * u - du)))
    }
}

/// A random member of the ball: a clipped sum of sines vanishing at `t = 0`.
pub fn random_member<R: Rng + ?Sized>(rng: &mut R, horizon: f64, n: usize) -> Result<GridFunction, PicardError> {
    let terms: Vec<(f64, f64)> = (0..rng.gen_range(1..=5))
        .map(|_| (rng.gen_range(-0.6..0.6), rng.gen_range(0.05..3.0)))
        .collect();
    GridFunction::from_fn(horizon, n, |t| {
        let v: f64 = terms.iter().map(|(c, k)| c * (k * t).sin()).sum();
        v.clamp(-BALL_RADIUS, BALL_RADIUS)
    })
}
