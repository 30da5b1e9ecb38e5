#![allow(dead_code)]

use std::sync::OnceLock;

use monopole::pipeline::{Solution, SolverConfig};
use monopole::profile::ProfileModel;

pub fn solution() -> &'static Solution {
    static S: OnceLock<Solution> = OnceLock::new();
    S.get_or_init(|| Solution::compute(&SolverConfig::default()).expect("default pipeline"))
}

pub fn model() -> &'static ProfileModel {
    static M: OnceLock<ProfileModel> = OnceLock::new();
    M.get_or_init(|| solution().profile().expect("profile builds"))
}

/// Sign changes of `f` sampled every `step` on `[lo, hi]`, exact zeros skipped.
pub fn sign_changes<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, step: f64) -> usize {
    let n = ((hi - lo) / step).ceil() as usize;
    let mut prev = 0.0f64;
    let mut count = 0;
    for i in 0..=n {
        let v = f(lo + i as f64 * step);
        if v == 0.0 {
            continue;
        }
        if prev != 0.0 && v.signum() != prev.signum() {
            count += 1;
        }
        prev = v;
    }
    count
}
