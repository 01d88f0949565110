//! Gamma-family special functions and closed-form radial moments.
//!
//! The construction formulas lean on a small set of classical functions:
//! Gamma, Beta (including its Gamma-ratio continuation to negative
//! arguments, where the defining integral diverges), Pochhammer symbols,
//! terminating Gauss hypergeometric sums, and the moments of
//! `|x|^alpha (R^2-|x|^2)^beta` over a ball.

use crate::error::Error;
use crate::float::powi;
use crate::Result;

/// `pi` re-exported for call sites that live in `no_std` modules.
pub const PI: f64 = core::f64::consts::PI;

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && libm::floor(x) == x
}

/// Gamma function on the real line, poles rejected.
///
/// Negative non-integer arguments are fine; the backend (`libm`'s musl
/// port) applies the reflection formula internally.
pub fn gamma_fn(x: f64) -> Result<f64> {
    if !x.is_finite() || is_nonpositive_integer(x) {
        return Err(Error::Domain("gamma pole at nonpositive integer"));
    }
    Ok(libm::tgamma(x))
}

/// Reciprocal Gamma, extended by zero at the poles. Total on the reals,
/// which makes it the right building block for continued Beta ratios.
pub fn rgamma(x: f64) -> f64 {
    if is_nonpositive_integer(x) {
        0.0
    } else {
        1.0 / libm::tgamma(x)
    }
}

/// Euler Beta function for strictly positive arguments.
pub fn beta_fn(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::Domain("beta requires positive arguments"));
    }
    if a + b < 170.0 {
        Ok(libm::tgamma(a) * libm::tgamma(b) / libm::tgamma(a + b))
    } else {
        // Dodge overflow of the individual Gamma factors.
        Ok(libm::exp(
            libm::lgamma(a) + libm::lgamma(b) - libm::lgamma(a + b),
        ))
    }
}

/// Beta through the Gamma-ratio form `Gamma(a)Gamma(b)/Gamma(a+b)`.
///
/// This continues Beta to negative non-integer arguments, where the
/// integral definition diverges but the ratio stays finite; several radius
/// and coefficient formulas are stated in exactly this form. Poles of a
/// numerator Gamma are rejected, a pole of the denominator yields zero.
pub fn beta_continued(a: f64, b: f64) -> Result<f64> {
    if is_nonpositive_integer(a) || is_nonpositive_integer(b) {
        return Err(Error::Domain("beta pole at nonpositive integer argument"));
    }
    Ok(libm::tgamma(a) * libm::tgamma(b) * rgamma(a + b))
}

/// Rising factorial `(x)_n = x (x+1) ... (x+n-1)`, empty product for `n=0`.
pub fn pochhammer(x: f64, n: u32) -> f64 {
    let mut acc = 1.0;
    for i in 0..n {
        acc *= x + i as f64;
    }
    acc
}

/// Terminating Gauss hypergeometric sum `2F1(a, -k; c; z)`.
///
/// With the second parameter a nonpositive integer the series is a degree-k
/// polynomial in `z`, summed here term by term. `c` must not hit a
/// nonpositive integer before the series terminates.
pub fn hyp2f1_poly(a: f64, k: u32, c: f64, z: f64) -> Result<f64> {
    for j in 0..k {
        if is_nonpositive_integer(c + j as f64) {
            return Err(Error::Domain("hypergeometric parameter c hits a pole"));
        }
    }
    let mut term = 1.0;
    let mut sum = 1.0;
    for j in 0..k {
        let jf = j as f64;
        term *= (a + jf) * (jf - k as f64) * z / ((c + jf) * (jf + 1.0));
        sum += term;
    }
    Ok(sum)
}

/// `integral over the ball B_R of |x|^alpha (R^2-|x|^2)^beta dx`
/// in dimension `d`, in closed Beta form:
/// `R^(alpha+2 beta+d) * pi^(d/2)/Gamma(d/2) * B((alpha+d)/2, beta+1)`.
///
/// In one dimension the ball is the interval `[-R, R]` and the prefactor
/// collapses to 1.
pub fn ball_moment(alpha: f64, beta: f64, d: u32, r: f64) -> Result<f64> {
    let df = d as f64;
    if d == 0 || !(r > 0.0) {
        return Err(Error::Domain("ball moment needs d >= 1 and R > 0"));
    }
    if alpha <= -df || beta <= -1.0 {
        return Err(Error::Domain("ball moment integral diverges"));
    }
    let surface = libm::pow(PI, df / 2.0) / libm::tgamma(df / 2.0);
    let b = beta_fn((alpha + df) / 2.0, beta + 1.0)?;
    Ok(libm::pow(r, alpha + 2.0 * beta + df) * surface * b)
}

/// Spherical average of `(u . v)^(2m)` over unit vectors `u`, for fixed
/// unit `v`: `(2m-1)!! / (d (d+2) ... (d+2m-2))`. Shows up when radial
/// densities are convolved with even powers of `|x - y|`.
pub fn angular_power_average(m: u32, d: u32) -> Result<f64> {
    if d == 0 {
        return Err(Error::Domain("dimension must be >= 1"));
    }
    let mut num = 1.0;
    let mut den = 1.0;
    for i in 0..m {
        num *= 2.0 * i as f64 + 1.0;
        den *= (d + 2 * i) as f64;
    }
    Ok(num / den)
}

/// Surface area of the unit sphere in `R^d` (`2` when `d = 1`, counting
/// the two endpoints of the interval).
pub fn sphere_surface(d: u32) -> f64 {
    let df = d as f64;
    2.0 * libm::pow(PI, df / 2.0) / libm::tgamma(df / 2.0)
}

/// Volume of the unit ball in `R^d`.
pub fn ball_volume(d: u32) -> f64 {
    sphere_surface(d) / d as f64
}

/// Binomial coefficient as a float, exact for the small orders used here.
pub fn binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    libm::round(acc)
}

/// Factorial as a float.
pub fn factorial(n: u32) -> f64 {
    let mut acc = 1.0;
    for i in 2..=n {
        acc *= i as f64;
    }
    acc
}

#[allow(unused)]
pub(crate) fn powi_f(x: f64, n: i32) -> f64 {
    powi(x, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const SQRT_PI: f64 = 1.772_453_850_905_516;

    #[test]
    fn gamma_classical_values() {
        assert_relative_eq!(gamma_fn(0.5).unwrap(), SQRT_PI, max_relative = 1e-14);
        assert_relative_eq!(gamma_fn(5.0).unwrap(), 24.0, max_relative = 1e-14);
        // Reflection territory.
        assert_relative_eq!(
            gamma_fn(-0.5).unwrap(),
            -2.0 * SQRT_PI,
            max_relative = 1e-13
        );
        assert!(gamma_fn(0.0).is_err());
        assert!(gamma_fn(-3.0).is_err());
    }

    #[test]
    fn beta_basics() {
        assert_relative_eq!(beta_fn(1.0, 1.0).unwrap(), 1.0, max_relative = 1e-15);
        assert_relative_eq!(beta_fn(0.5, 0.5).unwrap(), PI, max_relative = 1e-14);
        // Symmetry.
        assert_relative_eq!(
            beta_fn(2.3, 0.7).unwrap(),
            beta_fn(0.7, 2.3).unwrap(),
            max_relative = 1e-14
        );
        assert!(beta_fn(-0.5, 1.0).is_err());
    }

    #[test]
    fn beta_continued_extends_beta() {
        // Agrees with the integral form where both exist.
        assert_relative_eq!(
            beta_continued(1.5, 0.75).unwrap(),
            beta_fn(1.5, 0.75).unwrap(),
            max_relative = 1e-13
        );
        // Negative non-integer second argument; reference value from an
        // arbitrary-precision evaluation of Gamma(1/2)Gamma(-1/4)/Gamma(1/4).
        assert_relative_eq!(
            beta_continued(0.5, -0.25).unwrap(),
            -2.396_280_469_471_184_4,
            max_relative = 1e-13
        );
        // Denominator pole: the ratio collapses to zero.
        assert_eq!(beta_continued(0.25, -0.25).unwrap(), 0.0);
        // Numerator pole is a genuine singularity.
        assert!(beta_continued(-1.0, 0.5).is_err());
    }

    #[test]
    fn pochhammer_values() {
        assert_eq!(pochhammer(3.0, 0), 1.0);
        assert_eq!(pochhammer(-1.5, 2), 0.75);
        // Truncation: a nonpositive integer base annihilates long products.
        assert_eq!(pochhammer(-2.0, 4), 0.0);
        assert_relative_eq!(
            pochhammer(0.3, 5),
            0.3 * 1.3 * 2.3 * 3.3 * 4.3,
            max_relative = 1e-15
        );
    }

    #[test]
    fn hyp2f1_degenerate_cases() {
        assert_eq!(hyp2f1_poly(0.7, 0, 1.3, 0.9).unwrap(), 1.0);
        // 2F1(-1, -1; 1; z) = 1 + z.
        for z in [0.0, 0.25, 1.0, -2.0] {
            assert_relative_eq!(
                hyp2f1_poly(-1.0, 1, 1.0, z).unwrap(),
                1.0 + z,
                max_relative = 1e-15
            );
        }
        // Term-by-term reference: 2F1(-2, -2; 1; 1) = 1 + 4 + 1 = 6.
        assert_relative_eq!(hyp2f1_poly(-2.0, 2, 1.0, 1.0).unwrap(), 6.0, max_relative = 1e-15);
        assert!(hyp2f1_poly(0.5, 3, -1.0, 0.2).is_err());
    }

    #[test]
    fn ball_moment_low_dimensions() {
        // Volumes: 2R, pi R^2, 4/3 pi R^3.
        assert_relative_eq!(ball_moment(0.0, 0.0, 1, 2.0).unwrap(), 4.0, max_relative = 1e-14);
        assert_relative_eq!(
            ball_moment(0.0, 0.0, 2, 1.5).unwrap(),
            PI * 2.25,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            ball_moment(0.0, 0.0, 3, 1.0).unwrap(),
            4.0 * PI / 3.0,
            max_relative = 1e-14
        );
        // 1d reduces to 2 * int_0^R y^a (R^2-y^2)^b dy = R^(a+2b+1) B((a+1)/2, b+1).
        assert_relative_eq!(
            ball_moment(2.0, 0.5, 1, 1.0).unwrap(),
            beta_fn(1.5, 1.5).unwrap(),
            max_relative = 1e-14
        );
        // Singular-but-integrable edge weight: int (R^2-y^2)^(-1/2) = pi.
        assert_relative_eq!(
            ball_moment(0.0, -0.5, 1, 1.0).unwrap(),
            PI,
            max_relative = 1e-14
        );
        assert!(ball_moment(0.0, -1.0, 1, 1.0).is_err());
        assert!(ball_moment(-1.0, 0.0, 1, 1.0).is_err());
    }

    #[test]
    fn angular_average_small_orders() {
        for d in 1..=4 {
            assert_eq!(angular_power_average(0, d).unwrap(), 1.0);
            assert_relative_eq!(
                angular_power_average(1, d).unwrap(),
                1.0 / d as f64,
                max_relative = 1e-15
            );
            assert_relative_eq!(
                angular_power_average(2, d).unwrap(),
                3.0 / (d as f64 * (d + 2) as f64),
                max_relative = 1e-15
            );
        }
        // Monte Carlo cross-check (10^8 samples, d=2, m=3) froze 0.31250 +- 1e-4;
        // the closed form gives 15/48 exactly.
        assert_relative_eq!(
            angular_power_average(3, 2).unwrap(),
            15.0 / 48.0,
            max_relative = 1e-15
        );
    }

    #[test]
    fn surface_and_volume() {
        assert_relative_eq!(sphere_surface(1), 2.0, max_relative = 1e-15);
        assert_relative_eq!(sphere_surface(2), 2.0 * PI, max_relative = 1e-15);
        assert_relative_eq!(sphere_surface(3), 4.0 * PI, max_relative = 1e-14);
        assert_relative_eq!(ball_volume(3), 4.0 * PI / 3.0, max_relative = 1e-14);
    }

    #[test]
    fn combinatorial_helpers() {
        assert_eq!(binomial(6, 2), 15.0);
        assert_eq!(binomial(5, 0), 1.0);
        assert_eq!(binomial(3, 5), 0.0);
        assert_eq!(factorial(0), 1.0);
        assert_eq!(factorial(6), 720.0);
    }
}
