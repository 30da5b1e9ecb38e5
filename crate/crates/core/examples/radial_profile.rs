// The monopole profile f(r) = y*(ln(r/r0)) and its three asymptotic regimes.

use std::error::Error;

use monopole::pipeline::{Solution, SolverConfig};
use monopole::profile::{RadialProfile, Regime};

pub fn run() -> Result<(), Box<dyn Error>> {
    let model = Solution::compute(&SolverConfig::default())?.profile()?;
    let b = model.constants().coeff_b;
    let f = RadialProfile::new(model, 1.0)?;
    println!("{:>12} {:>16} {:>8} {:>16}", "r", "f(r)", "regime", "asymptotic");
    for x in [-12.0f64, -6.0, -0.01, 0.0, 0.01, 2.0, 6.0, 12.0] {
        let r = x.exp() * f.r0();
        let regime = Regime::of(x);
        let approx = match regime {
            Regime::SmallR => f.small_r(r),
            Regime::NearR0 => f.near_r0(r),
            Regime::LargeR => f.large_r(r),
            Regime::Core => f64::NAN,
        };
        println!("{r:>12.4e} {:>16.9e} {:>8} {approx:>16.9e}", f.evaluate_f(r)?, regime.label());
    }
    let r = 1e5;
    println!(
        "r (1 - f) / r0 at r = 1e5: {:.6} (B = {b:.6})",
        r * (1.0 - f.evaluate_f(r)?) / f.r0()
    );
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
