// b*, c*, d* by quadrature and the connection formulas for A, phi and B.

use std::error::Error;

use monopole::constants;
use monopole::pipeline::{Solution, SolverConfig};

pub fn run() -> Result<(), Box<dyn Error>> {
    let s = Solution::compute(&SolverConfig::default())?;
    let c = s.constants;
    println!("{}", serde_json::to_string_pretty(&c)?);
    println!("phi / pi = {:.6}", c.phase_over_pi());

    let b25 = constants::compute_b_star(&s.left, 25.0)?;
    let d13 = constants::compute_d_star(&s.right, 13.0)?;
    println!("truncation: b*(30) - b*(25) = {:.2e}", c.b_star - b25);
    println!("            d*(15) - d*(13) = {:.2e}", c.d_star - d13);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
