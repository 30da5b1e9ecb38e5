//! The first integral `P(z)` with `P P' - P = z(z-1)(z-2)`, `P(z) ~ -z` at 0.
//!
//! Along `y*` one has `y' = -P(1 - y)`. Starting the curve at `z_0 = 1e-40`
//! is only practical in logarithmic variables, so the integrator runs in
//! `w = ln z` on the ratio `p = P/z`:
//!
//! ```text
//! dp/dw = ((z-1)(z-2) + p)/p - p
//! ```
//!
//! which has the regular start `p = -1` and is attracting there.

use thiserror::Error;

use crate::branch::Branch;
use crate::ivp::{self, IntegratorConfig, IvpError, State, Termination, Trajectory};

pub const DEFAULT_Z0: f64 = 1e-40;
const ENDPOINT_SLACK: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PhaseError {
    #[error("start z0 = {0} must lie in (0, 1)")]
    InvalidStart(f64),
    #[error("P reached zero near z = {z}")]
    SingularP { z: f64 },
    #[error("z = {z} outside the curve's range [{lo}, 1]")]
    DomainMismatch { z: f64, lo: f64 },
    #[error(transparent)]
    Integration(#[from] IvpError),
}

/// Vector field in `w`; the state carries `p` in the `y` slot and `P` in
/// the `dy` slot.
fn rhs_log(s: &State) -> [f64; 2] {
    let z = s.x.exp();
    let p = s.y;
    let dp = ((z - 1.0) * (z - 2.0) + p) / p - p;
    [dp, z * (p + dp)]
}

#[derive(Debug, Clone)]
pub struct PhaseCurve {
    z0: f64,
    traj: Trajectory,
}

pub fn solve_p(z0: f64, cfg: &IntegratorConfig) -> Result<PhaseCurve, PhaseError> {
    if !(z0 > 0.0 && z0 < 1.0) {
        return Err(PhaseError::InvalidStart(z0));
    }
    let w0 = z0.ln();
    let init = State::new(w0, -1.0, -z0);
    let traj = ivp::integrate_until(rhs_log, init, 0.0, cfg, |s| s.end.y >= 0.0)?;
    match traj.termination() {
        Termination::Reached => Ok(PhaseCurve { z0, traj }),
        _ => Err(PhaseError::SingularP { z: traj.end().x.exp() }),
    }
}

impl PhaseCurve {
    pub fn z0(&self) -> f64 {
        self.z0
    }

    /// `P(z)` by dense interpolation in `ln z`. Rounding just above
    /// `z = 1` is accepted and clamped.
    pub fn p_at(&self, z: f64) -> Result<f64, PhaseError> {
        if !(self.z0 <= z && z <= 1.0 + ENDPOINT_SLACK) {
            return Err(PhaseError::DomainMismatch { z, lo: self.z0 });
        }
        let w = z.ln().clamp(self.traj.start().x, 0.0);
        let s = self.traj.eval(w).ok_or(PhaseError::DomainMismatch { z, lo: self.z0 })?;
        Ok(z.min(1.0) * s.y)
    }

    /// `P(1)`, which equals `-a*`.
    pub fn endpoint(&self) -> f64 {
        self.traj.end().y
    }

    /// `n` samples `(z, P(z))` log-spaced on `[z0, 1]`, last one at `z = 1`.
    pub fn samples(&self, n: usize) -> Vec<(f64, f64)> {
        let w0 = self.traj.start().x;
        (0..n)
            .map(|i| {
                let w = if i + 1 == n {
                    0.0
                } else if n == 1 {
                    w0
                } else {
                    w0 * (1.0 - i as f64 / (n - 1) as f64)
                };
                let z = if i == 0 { self.z0 } else { w.exp() };
                let p = self.traj.eval(w).map(|s| s.y).unwrap_or(f64::NAN);
                (z, z * p)
            })
            .collect()
    }

    /// Accepted integrator nodes as `(z, P, dP/dz)`, the slope taken from
    /// the vector field.
    pub fn nodes(&self) -> Vec<(f64, f64, f64)> {
        let mut out = vec![node(&self.traj.start())];
        out.extend(self.traj.steps().iter().map(|s| node(&s.end)));
        out
    }

    /// `max |P P' - P - z(z-1)(z-2)|` over the nodes.
    pub fn defect(&self) -> f64 {
        self.nodes()
            .iter()
            .map(|&(z, p, dp)| (p * dp - p - z * (z - 1.0) * (z - 2.0)).abs())
            .fold(0.0, f64::max)
    }
}

fn node(s: &State) -> (f64, f64, f64) {
    let z = s.x.exp();
    let [dp, _] = rhs_log(s);
    // dP/dz = p + dp/dw
    (z, z * s.y, s.y + dp)
}

/// `max |y'(x) + P(1 - y(x))|` over `x ∈ [0, x_max]`.
pub fn check_p_relation<B: Branch + ?Sized>(branch: &B, curve: &PhaseCurve, x_max: f64, samples: usize) -> Result<f64, PhaseError> {
    let samples = samples.max(2);
    let mut worst: f64 = 0.0;
    for i in 0..samples {
        let x = x_max * i as f64 / (samples - 1) as f64;
        let s = branch.eval(x).ok_or(PhaseError::DomainMismatch { z: f64::NAN, lo: curve.z0 })?;
        let p = curve.p_at(1.0 - s.y)?;
        worst = worst.max((s.dy + p).abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifold::RightBranch;

    fn curve() -> PhaseCurve {
        solve_p(DEFAULT_Z0, &IntegratorConfig::default()).unwrap()
    }

    #[test]
    fn endpoint_is_minus_critical_slope() {
        let c = curve();
        assert!((c.endpoint() + 0.1687).abs() < 5e-4);
        let a = RightBranch::build(&IntegratorConfig::default()).unwrap().slope_at_origin();
        assert!((c.endpoint() + a).abs() < 1e-9, "{} {a}", c.endpoint());
        assert_eq!(c.p_at(1.0).unwrap(), c.endpoint());
    }

    #[test]
    fn start_behaviour() {
        let c = curve();
        for z in [1e-40, 1e-30, 1e-12, 1e-6, 1e-4, 1e-3] {
            let p = c.p_at(z).unwrap();
            assert!((p + z).abs() <= 10.0 * z * z, "z={z} P={p}");
        }
        let nodes = c.nodes();
        assert!((nodes[0].2 + 1.0).abs() < 1e-30);
    }

    #[test]
    fn stays_negative() {
        let c = curve();
        for (z, p) in c.samples(401).into_iter().skip(1) {
            assert!(p < 0.0, "z={z}");
        }
    }

    #[test]
    fn node_defect() {
        let c = curve();
        let cfg = IntegratorConfig::default();
        assert!(c.defect() <= 10.0 * (cfg.rel_tol + cfg.abs_tol), "{}", c.defect());
    }

    #[test]
    fn samples_layout() {
        let s = curve().samples(401);
        assert_eq!(s.len(), 401);
        assert_eq!(s[0].0, DEFAULT_Z0);
        assert_eq!(s[400].0, 1.0);
        assert!(s.windows(2).all(|w| w[0].0 < w[1].0));
    }

    #[test]
    fn relation_with_right_branch() {
        let c = curve();
        let b = RightBranch::build(&IntegratorConfig::default()).unwrap();
        let r = check_p_relation(&b, &c, 10.0, 1001).unwrap();
        assert!(r <= 1e-6, "{r}");
    }

    #[test]
    fn errors() {
        let cfg = IntegratorConfig::default();
        assert!(matches!(solve_p(0.0, &cfg), Err(PhaseError::InvalidStart(_))));
        assert!(matches!(solve_p(1.5, &cfg), Err(PhaseError::InvalidStart(_))));
        let c = curve();
        assert!(matches!(c.p_at(2.0), Err(PhaseError::DomainMismatch { .. })));
        assert!(matches!(c.p_at(1e-50), Err(PhaseError::DomainMismatch { .. })));
    }
}
