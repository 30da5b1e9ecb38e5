// The phase curve P(z) from z0 = 1e-40 and its relation y' = -P(1 - y).

use std::error::Error;

use monopole::ivp::IntegratorConfig;
use monopole::manifold::RightBranch;
use monopole::phase::{self, DEFAULT_Z0};

pub fn run() -> Result<(), Box<dyn Error>> {
    let cfg = IntegratorConfig::default();
    let curve = phase::solve_p(DEFAULT_Z0, &cfg)?;
    for (z, p) in curve.samples(9) {
        println!("  P({z:.3e}) = {p:+.12e}");
    }
    println!("P(1) = {:.14}", curve.endpoint());

    let right = RightBranch::build(&cfg)?;
    let worst = phase::check_p_relation(&right, &curve, 10.0, 1001)?;
    println!("max |y' + P(1 - y)| on [0, 10] = {worst:.2e}");
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
