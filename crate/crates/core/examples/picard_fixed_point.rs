// The left half of y* as the fixed point of the contraction T.

use std::error::Error;

use monopole::branch::Branch;
use monopole::ivp::{self, IntegratorConfig, State};
use monopole::picard::{self, PicardOperator, DEFAULT_HORIZON, DEFAULT_POINTS, DEFAULT_TOL};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const A_STAR: f64 = 0.168_712_215_768;

pub fn run() -> Result<(), Box<dyn Error>> {
    let op = PicardOperator::new(A_STAR, DEFAULT_HORIZON, DEFAULT_POINTS)?;
    let (u, report) = op.solve(DEFAULT_TOL, picard::DEFAULT_MAX_ITER)?;
    println!(
        "{} iterations, residual {:.2e}, observed ratio {:.4}, {} sign changes on [0, {}]",
        report.iterations,
        report.final_residual,
        report.contraction_estimate,
        u.sign_changes(),
        op.horizon()
    );

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let u1 = picard::random_member(&mut rng, op.horizon(), op.n_points())?;
    let u2 = picard::random_member(&mut rng, op.horizon(), op.n_points())?;
    let ratio = op.apply(&u1)?.distance(&op.apply(&u2)?)? / u1.distance(&u2)?;
    println!(
        "random pair: d(Tu1, Tu2) / d(u1, u2) = {ratio:.4} <= {:.4}",
        picard::CONTRACTION_RATIO
    );

    let left = picard::extend_left(&op, &u)?;
    let ode = ivp::integrate(ivp::rhs_forward, State::new(0.0, 0.0, A_STAR), -10.0, &IntegratorConfig::default())?;
    for x in [-1.0, -3.64, -5.0, -10.0] {
        let p = left.eval(x).ok_or("outside branch")?.y;
        let o = ode.eval(x).ok_or("outside trajectory")?.y;
        println!("  y*({x}) = {p:+.12e}  (ode {o:+.12e})");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
