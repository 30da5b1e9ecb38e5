//! Dense evaluation shared by every representation of `y*`.

use crate::ivp::{State, Trajectory};

/// Something that can report `(y, y')` anywhere on a closed interval.
pub trait Branch {
    /// `(min, max)` of the covered abscissas.
    fn domain(&self) -> (f64, f64);

    /// `None` outside [`Branch::domain`].
    fn eval(&self, x: f64) -> Option<State>;

    fn covers(&self, lo: f64, hi: f64) -> bool {
        let (a, b) = self.domain();
        a <= lo && hi <= b
    }
}

impl Branch for Trajectory {
    fn domain(&self) -> (f64, f64) {
        Trajectory::domain(self)
    }

    fn eval(&self, x: f64) -> Option<State> {
        Trajectory::eval(self, x)
    }
}

impl<B: Branch + ?Sized> Branch for &B {
    fn domain(&self) -> (f64, f64) {
        (**self).domain()
    }

    fn eval(&self, x: f64) -> Option<State> {
        (**self).eval(x)
    }
}
