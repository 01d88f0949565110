//! Tanh-sinh (double-exponential) quadrature on a finite interval.
//!
//! The substitution `t = tanh((pi/2) sinh(tau))` pushes the endpoints to
//! infinity and makes the transformed integrand decay double-exponentially,
//! so any integrable algebraic endpoint singularity is handled without
//! knowing its exponent. Used as the fallback engine where the Gauss-Jacobi
//! weight form does not apply (principal values, convolution panels with a
//! branch point at an interior split).
//!
//! Integrands receive the abscissa together with its distances to both
//! panel endpoints. The distances are computed from the exponential form of
//! `1 - tanh`, so they stay accurate down to about `1e-280` where naive
//! subtraction would round to zero; singular factors like `(hi - x)^e`
//! must be built from them.

use crate::error::Error;
use crate::Result;

/// Evaluation point of a panel integrand.
#[derive(Debug, Clone, Copy)]
pub struct PanelPoint {
    /// The abscissa itself.
    pub x: f64,
    /// Distance `x - lo`, exact near the lower endpoint.
    pub from_lo: f64,
    /// Distance `hi - x`, exact near the upper endpoint.
    pub from_hi: f64,
}

/// Truncation of the tau axis. At 6.0 the node weights have decayed to
/// roughly 1e-270, enough for endpoint exponents down to about -0.9.
const TAU_MAX: f64 = 6.0;
const H0: f64 = 0.5;
const MAX_LEVEL: u32 = 8;

/// Weight below which a non-finite integrand value is treated as a
/// harmless endpoint overflow and dropped.
const NEGLIGIBLE_W: f64 = 1e-200;

struct Node {
    /// Distance from the nearer endpoint, in [-1, 1] coordinates.
    delta: f64,
    /// Transformed quadrature weight (without the step size h).
    weight: f64,
}

fn node_at(tau: f64) -> Node {
    let z = core::f64::consts::FRAC_PI_2 * libm::sinh(tau);
    // 1 - tanh(z) = 2 / (1 + e^(2z)) for z >= 0.
    let delta = 2.0 / (1.0 + libm::exp(2.0 * z));
    let ch = libm::cosh(z);
    let weight = core::f64::consts::FRAC_PI_2 * libm::cosh(tau) / (ch * ch);
    Node { delta, weight }
}

/// Integrate `f` over `[lo, hi]` to the requested relative tolerance.
pub fn integrate<F: Fn(&PanelPoint) -> f64>(f: F, lo: f64, hi: f64, rel_tol: f64) -> Result<f64> {
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::Domain("tanh-sinh needs a finite interval lo < hi"));
    }
    let half = 0.5 * (hi - lo);
    let width = hi - lo;

    let eval = |tau: f64| -> Result<f64> {
        let node = if tau >= 0.0 {
            node_at(tau)
        } else {
            node_at(-tau)
        };
        let d = half * node.delta;
        let p = if tau >= 0.0 {
            PanelPoint {
                x: hi - d,
                from_lo: width - d,
                from_hi: d,
            }
        } else {
            PanelPoint {
                x: lo + d,
                from_lo: d,
                from_hi: width - d,
            }
        };
        let v = f(&p);
        if v.is_finite() {
            Ok(v * node.weight * half)
        } else if node.weight * half < NEGLIGIBLE_W {
            Ok(0.0)
        } else {
            Err(Error::Domain("integrand not finite away from the endpoints"))
        }
    };

    // Level 0: trapezoid in tau with step H0.
    let mut h = H0;
    let mut sum = eval(0.0)?;
    let mut k = 1;
    while (k as f64) * h <= TAU_MAX {
        let tau = k as f64 * h;
        sum += eval(tau)? + eval(-tau)?;
        k += 1;
    }
    let mut value = sum * h;

    // Refine by halving h; old nodes are reused, only odd multiples are new.
    for _level in 1..=MAX_LEVEL {
        h *= 0.5;
        let mut extra = 0.0;
        let mut k = 1;
        while (k as f64) * h <= TAU_MAX {
            let tau = k as f64 * h;
            extra += eval(tau)? + eval(-tau)?;
            k += 2;
        }
        sum += extra;
        let new_value = sum * h;
        let err = (new_value - value).abs();
        value = new_value;
        if err <= rel_tol * value.abs().max(crate::tol::ABS_FLOOR) {
            return Ok(value);
        }
    }
    Err(Error::NoConvergence("tanh-sinh level budget exhausted"))
}

/// Convenience wrapper for integrands that are cheap to state in terms of
/// the plain abscissa.
pub fn integrate_plain<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, rel_tol: f64) -> Result<f64> {
    integrate(|p: &PanelPoint| f(p.x), lo, hi, rel_tol)
}

/// Best-effort evaluation used as the inner rule of nested integrals.
///
/// Unlike [`integrate`] it never fails: non-finite integrand values at
/// negligible weight are dropped; one at a weight that matters promotes
/// the result to infinity so the enclosing adaptive rule can discard (or
/// reject) the evaluation point by its own weight; and if the level
/// budget runs out the deepest value is returned as it stands -- the
/// enclosing rule owns the overall error control.
pub(crate) fn integrate_lenient<F: Fn(&PanelPoint) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    rel_tol: f64,
    max_level: u32,
) -> f64 {
    let half = 0.5 * (hi - lo);
    let width = hi - lo;

    let eval = |tau: f64| -> f64 {
        let node = node_at(tau.abs());
        let d = half * node.delta;
        let p = if tau >= 0.0 {
            PanelPoint {
                x: hi - d,
                from_lo: width - d,
                from_hi: d,
            }
        } else {
            PanelPoint {
                x: lo + d,
                from_lo: d,
                from_hi: width - d,
            }
        };
        let v = f(&p);
        if v.is_finite() {
            v * node.weight
        } else if node.weight * half < NEGLIGIBLE_W {
            0.0
        } else {
            f64::INFINITY
        }
    };

    let mut h = H0;
    let mut sum = eval(0.0);
    let mut k = 1;
    while (k as f64) * h <= TAU_MAX {
        let tau = k as f64 * h;
        sum += eval(tau) + eval(-tau);
        k += 1;
    }
    let mut value = sum * h * half;

    for _level in 1..=max_level {
        if !value.is_finite() {
            return value;
        }
        h *= 0.5;
        let mut extra = 0.0;
        let mut k = 1;
        while (k as f64) * h <= TAU_MAX {
            let tau = k as f64 * h;
            extra += eval(tau) + eval(-tau);
            k += 2;
        }
        sum += extra;
        let new_value = sum * h * half;
        let err = (new_value - value).abs();
        value = new_value;
        if err <= rel_tol * value.abs().max(crate::tol::ABS_FLOOR) {
            return value;
        }
    }
    value
}
