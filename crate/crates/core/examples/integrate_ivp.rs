// Dense-output integration of the planar system and event location.

use std::error::Error;

use monopole::ivp::{self, IntegratorConfig, State};

pub fn run() -> Result<(), Box<dyn Error>> {
    let cfg = IntegratorConfig::default();

    // the linearisation y'' - y' + y = 0 has a closed form
    let linear = |s: &State| [s.dy, s.dy - s.y];
    let traj = ivp::integrate(linear, State::new(0.0, 0.0, 1.0), 1.0, &cfg)?;
    let w = 3f64.sqrt() / 2.0;
    let exact = (1.0 / w) * 0.5f64.exp() * w.sin();
    let y1 = traj.end().y;
    println!("linear test: y(1) = {y1:.15} (exact {exact:.15}), {} steps", traj.steps().len());
    assert!((y1 - exact).abs() < 1e-11);

    // an undershooting slope: the first turning point lies below y = 1
    let under = ivp::integrate(ivp::rhs_forward, State::new(0.0, 0.0, 0.1), 4.0, &cfg)?;
    let x_turn = under.find_event(|s| s.dy)?;
    let turn = under.eval(x_turn).ok_or("event outside trajectory")?;
    println!("a = 0.10: y' = 0 at x = {x_turn:.10}, y = {:.10}", turn.y);

    // an overshooting slope crosses y = 1
    let over = ivp::integrate(ivp::rhs_forward, State::new(0.0, 0.0, 0.24), 3.0, &cfg)?;
    let x_cross = over.find_event(|s| s.y - 1.0)?;
    println!("a = 0.24: y = 1 at x = {x_cross:.10}");

    // interpolated values between steps
    for x in [0.37, 1.234, 2.5] {
        let s = over.eval(x).ok_or("outside domain")?;
        println!("  dense y({x}) = {:.12}, y' = {:.12}", s.y, s.dy);
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
