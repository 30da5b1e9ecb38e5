// Remainder orders of both tails and the integral identity for a*.

use std::error::Error;

use monopole::constants;
use monopole::pipeline::{Solution, SolverConfig};

pub fn run() -> Result<(), Box<dyn Error>> {
    let s = Solution::compute(&SolverConfig::default())?;
    let c = s.constants;

    let left = constants::verify_left_asymptotic(&s.left, c.amplitude, c.phase_phi)?;
    println!(
        "y* - A e^(x/2) sin(wx + phi) ~ e^({:.4} x), fitted on {} extrema",
        left.slope,
        left.points.len()
    );
    let right = constants::verify_right_asymptotic(&s.right, c.coeff_b)?;
    println!("1 - y* - B e^(-x)          ~ e^({:.4} x)", right.slope);

    for depth in [3.0, 6.0, 15.0] {
        let id = constants::integral_identity_check(&s.right, s.a_star, depth)?;
        println!("identity to S = {depth}: {:.15} vs a* - 1 = {:.15}", id.integral, id.target);
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
