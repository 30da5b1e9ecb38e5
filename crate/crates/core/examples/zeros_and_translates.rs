// Zeros of y*, its translates with n positive zeros, and recovery of a shift.

use std::error::Error;

use monopole::pipeline::{Solution, SolverConfig};

pub fn run() -> Result<(), Box<dyn Error>> {
    let model = Solution::compute(&SolverConfig::default())?.profile()?;
    let zeros = model.find_zeros(10)?;
    for w in zeros.windows(2) {
        println!(
            "  x_{:<2} = {:+.10} ({:?}), gap {:.10}",
            w[1].index,
            w[1].x,
            w[1].source,
            w[0].x - w[1].x
        );
    }
    println!("limit gap 2 pi / sqrt 3 = {:.10}", 2.0 * std::f64::consts::PI / 3f64.sqrt());

    for n in [1, 3] {
        let shifted = model.shifted_solution(n)?;
        let tau = model.largest_zero_shift(|x| shifted.eval(x), -10.0, 40.0)?;
        println!("translate n = {n}: largest zero at {tau:.10} (= -x_{n})");
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
