// The critical slope a* by shooting and bisection.

use std::error::Error;

use monopole::ivp::IntegratorConfig;
use monopole::shooting::{self, DEFAULT_BRACKET, DEFAULT_SLOPE_TOL, DEFAULT_WINDOW};

pub fn run() -> Result<(), Box<dyn Error>> {
    let cfg = IntegratorConfig::default();
    for a in [0.10, 0.16, 0.17, 0.24] {
        let shot = shooting::classify_shot(a, DEFAULT_WINDOW, &cfg)?;
        println!("a = {a:.2}: {:?} at x = {:.4}", shot.kind, shot.witness_x);
    }

    let (lo, hi) = DEFAULT_BRACKET;
    let c = shooting::find_critical_slope(lo, hi, DEFAULT_SLOPE_TOL, DEFAULT_WINDOW, &cfg)?;
    println!(
        "a* = {:.14} in [{:.14}, {:.14}] after {} bisections",
        c.value, c.bracket_lo, c.bracket_hi, c.iterations
    );
    assert!(c.value > 0.0 && c.value < 0.25);

    match shooting::find_critical_slope(0.24, 0.25, 1e-6, DEFAULT_WINDOW, &cfg) {
        Err(e) => println!("[0.24, 0.25]: {e}"),
        Ok(_) => return Err("expected an invalid bracket".into()),
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
