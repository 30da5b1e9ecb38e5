// The right half of y* traced backward along the stable manifold of y = 1.

use std::error::Error;

use monopole::branch::Branch;
use monopole::ivp::IntegratorConfig;
use monopole::manifold::RightBranch;

pub fn run() -> Result<(), Box<dyn Error>> {
    let right = RightBranch::build(&IntegratorConfig::default())?;
    println!("covers [0, {:.4}], y'(0) = {:.14}", right.x_max(), right.slope_at_origin());
    for x in [0.0, 1.0, 2.0, 5.0, 10.0, 20.0] {
        let s = right.eval(x).ok_or("outside branch")?;
        let z = right.eval_z(x).ok_or("outside branch")?.y;
        println!("  x = {x:>4}: y = {:.12}, y' = {:.3e}, e^x (1 - y) = {:.8}", s.y, s.dy, x.exp() * z);
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
