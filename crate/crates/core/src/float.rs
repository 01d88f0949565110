//! Small floating-point helpers for the `no_std` build.
//!
//! The transcendental functions come from `libm` so the crate does not
//! depend on `std`; everything here is a thin convenience on top of it.

/// Integer power by binary exponentiation (exact sequence of products,
/// `x^0 == 1` including `x == 0`).
pub fn powi(x: f64, n: i32) -> f64 {
    let mut base = if n < 0 { 1.0 / x } else { x };
    let mut e = n.unsigned_abs();
    let mut acc = 1.0;
    while e > 0 {
        if e & 1 == 1 {
            acc *= base;
        }
        base *= base;
        e >>= 1;
    }
    acc
}

/// `x^p` for `x >= 0`, routed through square-root chains when `4p` is a
/// small integer. Pair potentials in the sweeps use exponents like 1/2 or
/// -3/4, and `sqrt` is an order of magnitude cheaper than `pow`.
#[derive(Debug, Clone, Copy)]
pub enum FastPow {
    /// `x^(q/4)` via `(x^(1/4))^q`.
    QuarterChain(i32),
    /// General exponent through `libm::pow`.
    General(f64),
}

impl FastPow {
    pub fn new(p: f64) -> Self {
        let q4 = 4.0 * p;
        let rounded = libm::round(q4);
        if (q4 - rounded).abs() < 1e-12 && rounded.abs() <= 64.0 {
            FastPow::QuarterChain(rounded as i32)
        } else {
            FastPow::General(p)
        }
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            FastPow::QuarterChain(q) => {
                if q % 4 == 0 {
                    powi(x, q / 4)
                } else {
                    powi(libm::sqrt(libm::sqrt(x)), q)
                }
            }
            FastPow::General(p) => libm::pow(x, p),
        }
    }
}

/// Relative difference of `x` against a reference `y`, with an absolute
/// floor so comparisons near zero stay meaningful.
pub fn rel_diff(x: f64, y: f64) -> f64 {
    let scale = y.abs().max(crate::tol::ABS_FLOOR);
    (x - y).abs() / scale
}
