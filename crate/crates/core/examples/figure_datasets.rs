// Writing the profile and P(z) tables through the command-line entry point.

use std::error::Error;

use monopole::cli;

pub fn run() -> Result<(), Box<dyn Error>> {
    for args in [
        &["monopole", "profile", "--range", "-8", "4", "--step", "2"][..],
        &["monopole", "pz", "--samples", "5", "--json"],
    ] {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = cli::run(args.iter().copied(), &mut out, &mut err);
        if code != cli::EXIT_OK {
            return Err(String::from_utf8_lossy(&err).into_owned().into());
        }
        print!("{}", String::from_utf8(out)?);
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
