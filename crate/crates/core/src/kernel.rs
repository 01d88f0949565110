//! The attractive-repulsive power-law interaction kernel.

use crate::error::Error;
use crate::Result;

/// `K(x) = |x|^a/a - |x|^b/b` in dimension `d`, with total mass `M0`
/// attached so that a kernel value fully determines an interaction energy
/// scale. An exponent equal to zero stands for `log|x|` (the limit of
/// `(|x|^p - 1)/p`, whose additive constant is absorbed by the potential
/// level).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLawKernel {
    a: f64,
    b: f64,
    d: u32,
    mass: f64,
}

impl PowerLawKernel {
    /// Requires `a > b > -d`, `d >= 1` and positive mass.
    pub fn new(a: f64, b: f64, d: u32, mass: f64) -> Result<Self> {
        if d == 0 {
            return Err(Error::Domain("dimension must be >= 1"));
        }
        if !(a.is_finite() && b.is_finite() && a > b && b > -(d as f64)) {
            return Err(Error::Domain("kernel exponents must satisfy a > b > -d"));
        }
        if !(mass > 0.0) || !mass.is_finite() {
            return Err(Error::Domain("kernel mass must be positive"));
        }
        Ok(PowerLawKernel { a, b, d, mass })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn dim(&self) -> u32 {
        self.d
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// Whether the attractive or repulsive term is the logarithmic limit.
    pub fn has_log_term(&self) -> bool {
        self.a == 0.0 || self.b == 0.0
    }

    /// One power term `|x|^p / p`, with the `p = 0` log convention.
    fn term(p: f64, r: f64) -> f64 {
        if p == 0.0 {
            libm::log(r)
        } else {
            libm::pow(r, p) / p
        }
    }

    /// Kernel value at separation `r > 0`; at `r = 0` the value is 0 for
    /// purely positive exponents and +infinity otherwise.
    pub fn eval(&self, r: f64) -> f64 {
        if r == 0.0 {
            return if self.b > 0.0 { 0.0 } else { f64::INFINITY };
        }
        Self::term(self.a, r) - Self::term(self.b, r)
    }

    /// Radial derivative `K'(r) = r^(a-1) - r^(b-1)`; the formula includes
    /// the log case since `d/dr log r = r^(b-1)` at `b = 0`.
    pub fn derivative(&self, r: f64) -> f64 {
        libm::pow(r, self.a - 1.0) - libm::pow(r, self.b - 1.0)
    }
}
