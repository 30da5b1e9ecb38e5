//! The invariant suite run by `monopole verify`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::branch::Branch;
use crate::constants;
use crate::error::Error;
use crate::ivp::{self, State};
use crate::phase::{self, PhaseCurve};
use crate::picard::{self, CONTRACTION_RATIO};
use crate::pipeline::Solution;

pub const CONTRACTION_PAIRS: usize = 50;
const RNG_SEED: u64 = 0x6d6f_6e6f;
const FD_STEP: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub measured: f64,
    pub bound: f64,
    pub passed: bool,
}

impl Check {
    /// Passes when `measured ≤ bound`.
    pub fn at_most(name: &'static str, measured: f64, bound: f64) -> Self {
        Self {
            name,
            measured,
            bound,
            passed: measured <= bound,
        }
    }
}

/// Largest ratio `d(Tu1, Tu2) / d(u1, u2)` and largest `sup |Tu|` over
/// `pairs` seeded random pairs in the ball.
pub fn contraction_sample(op: &picard::PicardOperator, pairs: usize, seed: u64) -> Result<(f64, f64), Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ratio: f64 = 0.0;
    let mut image: f64 = 0.0;
    for _ in 0..pairs {
        let u1 = picard::random_member(&mut rng, op.horizon(), op.n_points())?;
        let u2 = picard::random_member(&mut rng, op.horizon(), op.n_points())?;
        let t1 = op.apply(&u1)?;
        let t2 = op.apply(&u2)?;
        let d = u1.distance(&u2)?;
        if d > 0.0 {
            ratio = ratio.max(t1.distance(&t2)? / d);
        }
        image = image.max(t1.sup_norm()).max(t2.sup_norm());
    }
    Ok((ratio, image))
}

/// `max |y'' - y' + y - y^3|` on `n` points of `[lo, hi]`, with `y''` from
/// central differences of the dense `y'`.
pub fn defect<B: Branch + ?Sized>(branch: &B, lo: f64, hi: f64, n: usize) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..n {
        let x = lo + (hi - lo) * i as f64 / (n - 1).max(1) as f64;
        let x = x.clamp(lo + FD_STEP, hi - FD_STEP);
        let (Some(s), Some(a), Some(b)) = (branch.eval(x), branch.eval(x - FD_STEP), branch.eval(x + FD_STEP)) else {
            return f64::INFINITY;
        };
        let ddy = (b.dy - a.dy) / (2.0 * FD_STEP);
        worst = worst.max((ddy - s.dy + s.y - s.y.powi(3)).abs());
    }
    worst
}

/// `max |y_picard - y_ode|` on `[x_min, 0]` against backward integration.
pub fn cross_validation(solution: &Solution, x_min: f64) -> Result<f64, Error> {
    let back = ivp::integrate(
        ivp::rhs_forward,
        State::new(0.0, 0.0, solution.a_star),
        x_min,
        &solution.config.integrator,
    )?;
    let mut worst: f64 = 0.0;
    for i in 0..=2000 {
        let x = x_min * i as f64 / 2000.0;
        let p = solution.left.eval(x).map(|s| s.y).unwrap_or(f64::NAN);
        let o = back.eval(x).map(|s| s.y).unwrap_or(f64::NAN);
        worst = worst.max((p - o).abs());
    }
    Ok(worst)
}

pub fn run_checks(solution: &Solution, curve: &PhaseCurve) -> Result<Vec<Check>, Error> {
    let c = &solution.constants;
    let mut out = Vec::new();

    let manifold_slope = solution.right.slope_at_origin();
    out.push(Check::at_most("slope_consistency", (solution.a_star - manifold_slope).abs(), 1e-9));

    let (ratio, image) = contraction_sample(&solution.operator, CONTRACTION_PAIRS, RNG_SEED)?;
    out.push(Check::at_most("contraction_ratio", ratio, CONTRACTION_RATIO + 1e-4));
    out.push(Check::at_most("self_map", image, 3f64.sqrt() / 4.0));
    out.push(Check::at_most("fixed_point_residual", solution.picard.final_residual, 1e-10));
    out.push(Check::at_most("cross_validation", cross_validation(solution, -10.0)?, 1e-8));

    let left_defect = defect(&solution.left, -20.0, 0.0, 500);
    let right_defect = defect(&solution.right, 0.0, 25.0, 500);
    out.push(Check::at_most("core_defect", left_defect.max(right_defect), 1e-8));

    let depth = solution.config.trunc_d.max(15.0);
    let id = constants::integral_identity_check(&solution.right, solution.a_star, depth)?;
    out.push(Check::at_most("integral_identity", id.residual, 1e-6));

    let left = constants::verify_left_asymptotic(&solution.left, c.amplitude, c.phase_phi)?;
    out.push(Check::at_most("left_order", (left.slope - 1.5).abs(), 0.1));
    let right = constants::verify_right_asymptotic(&solution.right, c.coeff_b)?;
    out.push(Check::at_most("right_order", (right.slope + 2.0).abs(), 0.2));

    out.push(Check::at_most("phase_endpoint", (curve.endpoint() + solution.a_star).abs(), 1e-4));
    out.push(Check::at_most(
        "phase_relation",
        phase::check_p_relation(&solution.right, curve, 10.0, 1001)?,
        1e-6,
    ));
    Ok(out)
}
