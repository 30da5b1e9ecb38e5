// The full invariant suite, as run by `monopole verify`.

use std::error::Error;

use monopole::phase;
use monopole::pipeline::{Solution, SolverConfig};
use monopole::verify;

pub fn run() -> Result<(), Box<dyn Error>> {
    let s = Solution::compute(&SolverConfig::default())?;
    let curve = phase::solve_p(phase::DEFAULT_Z0, &s.config.integrator)?;
    let checks = verify::run_checks(&s, &curve)?;
    for c in &checks {
        println!(
            "{} {:<22} {:.3e} <= {:.3e}",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.measured,
            c.bound
        );
    }
    if checks.iter().all(|c| c.passed) {
        Ok(())
    } else {
        Err("some checks failed".into())
    }
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
