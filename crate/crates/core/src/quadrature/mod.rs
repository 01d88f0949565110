//! Quadrature for integrands with algebraic endpoint singularities,
//! Cauchy principal values, and radial convolutions.
//!
//! Two engines cooperate. When an integrand factors as
//! `smooth * (x-lo)^le * (hi-x)^re` with known exponents, a Gauss-Jacobi
//! rule absorbs the weight and converges spectrally. When the exponents
//! are unknown or the integrand mixes weight classes (as the regularized
//! principal-value and convolution panels do), a tanh-sinh transform takes
//! over; it is exponent-agnostic at the cost of more evaluations.

pub mod jacobi;
pub mod tanhsinh;

mod convolve;

pub use convolve::{
    convolve_radial, convolve_radial_log, induced_potential, interaction_energy, mass_quadrature,
    radial_moment_quadrature,
};
#[cfg(test)]
pub(crate) use convolve::convolve_signed_1d;
pub use jacobi::JacobiRule;
pub use tanhsinh::PanelPoint;

use alloc::vec::Vec;

use crate::error::Error;
use crate::Result;

/// How principal-value integrals are treated by [`pv_integrate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PvMode {
    /// Principal values are not expected; calling [`pv_integrate`] errors.
    #[default]
    None,
    /// Symmetric-limit principal value: the singularity is subtracted and
    /// its symmetric excision integrated in closed form.
    SymmetricPair,
}

/// Accuracy and singularity-structure parameters for the quadrature calls.
#[derive(Debug, Clone, Copy)]
pub struct QuadratureSpec {
    /// Base node count per panel for the fixed-order rules.
    pub nodes: usize,
    /// Algebraic exponent carried by the integrand at the lower endpoint.
    pub left_exponent: f64,
    /// Algebraic exponent at the upper endpoint.
    pub right_exponent: f64,
    /// Principal-value handling mode.
    pub pv_mode: PvMode,
    /// Relative tolerance targeted by the adaptive drivers.
    pub rel_tol: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            nodes: crate::tol::QUAD_NODES,
            left_exponent: 0.0,
            right_exponent: 0.0,
            pv_mode: PvMode::None,
            rel_tol: crate::tol::QUAD_REL,
        }
    }
}

impl QuadratureSpec {
    /// Spec for an integrand `smooth * (x-lo)^le * (hi-x)^re`.
    pub fn with_exponents(le: f64, re: f64) -> Self {
        QuadratureSpec {
            left_exponent: le,
            right_exponent: re,
            ..QuadratureSpec::default()
        }
    }

    /// Enable the symmetric-pair principal-value mode.
    pub fn principal_value(mut self) -> Self {
        self.pv_mode = PvMode::SymmetricPair;
        self
    }

    /// Override the relative tolerance.
    pub fn tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    /// Override the per-panel node count.
    pub fn with_nodes(mut self, nodes: usize) -> Self {
        self.nodes = nodes;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.nodes < 4 {
            return Err(Error::Domain("node count must be at least 4"));
        }
        if !(self.left_exponent > -1.0 && self.right_exponent > -1.0) {
            return Err(Error::Domain("endpoint exponents must be > -1"));
        }
        if !(self.rel_tol >= 1e-15 && self.rel_tol < 1.0) {
            return Err(Error::Domain("relative tolerance out of range"));
        }
        Ok(())
    }
}

/// Integrate `f(x) * (x-lo)^le * (hi-x)^re` over `[lo, hi]`, where `f` is
/// the smooth factor and the exponents come from `spec`.
///
/// The result is accepted once doubling the node count moves it by less
/// than `spec.rel_tol` in relative terms; otherwise one more doubling is
/// tried before giving up.
pub fn integrate_singular<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    spec.validate()?;
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::Domain("integration interval must be finite, lo < hi"));
    }
    let alpha = spec.right_exponent;
    let beta = spec.left_exponent;
    let mut n = spec.nodes.max(4);
    let mut prev = JacobiRule::new(n, alpha, beta)?.integrate_weighted(lo, hi, &f);
    for _ in 0..2 {
        n *= 2;
        let next = JacobiRule::new(n, alpha, beta)?.integrate_weighted(lo, hi, &f);
        let scale = next.abs().max(crate::tol::ABS_FLOOR);
        if (next - prev).abs() <= spec.rel_tol * scale {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::NoConvergence(
        "integrand not resolved by the weight-adapted rule",
    ))
}

/// Integrate an integrand with unknown endpoint behavior by the
/// tanh-sinh fallback. `f` is the full integrand and must return finite
/// values at every abscissa, including within rounding distance of the
/// endpoints; integrands that blow up at an endpoint need the panel
/// interface ([`tanhsinh::integrate`]), whose points carry exact endpoint
/// distances.
pub fn integrate_auto<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    spec.validate()?;
    tanhsinh::integrate_plain(f, lo, hi, spec.rel_tol)
}

/// A panel point for an interior abscissa, with distances formed by plain
/// subtraction (safe away from the endpoints).
fn interior_point(t: f64, lo: f64, hi: f64) -> PanelPoint {
    PanelPoint {
        x: t,
        from_lo: t - lo,
        from_hi: hi - t,
    }
}

/// Cauchy principal value `PV int_lo^hi f(y) / (y - x) dy` for an interior
/// pole `x`. `f` is the full numerator as a panel integrand, so it may
/// carry integrable endpoint singularities.
///
/// The pole is removed by subtraction,
/// `f(y)/(y-x) = (f(y)-f(x))/(y-x) + f(x)/(y-x)`;
/// the first part is integrated by tanh-sinh (the difference quotient
/// extends continuously across `y = x`) and the second contributes the
/// symmetric-limit closed form `f(x) ln((hi-x)/(x-lo))`.
pub fn pv_integrate<F: Fn(&PanelPoint) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    x: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    spec.validate()?;
    if spec.pv_mode != PvMode::SymmetricPair {
        return Err(Error::Unsupported(
            "principal value requested with pv_mode = None",
        ));
    }
    if !(lo < x && x < hi) {
        return Err(Error::Domain("principal-value pole must be interior"));
    }
    let fx = f(&interior_point(x, lo, hi));
    if !fx.is_finite() {
        return Err(Error::Domain("numerator not finite at the pole"));
    }
    let h = (hi - x).min(x - lo) * 1e-7;
    let regular = tanhsinh::integrate(
        |p: &PanelPoint| {
            let dy = p.x - x;
            if dy.abs() > h {
                (f(p) - fx) / dy
            } else {
                // Too close to the pole for the quotient; use a centered
                // difference, which the smooth extension equals to O(h^2).
                (f(&interior_point(x + h, lo, hi)) - f(&interior_point(x - h, lo, hi)))
                    / (2.0 * h)
            }
        },
        lo,
        hi,
        spec.rel_tol,
    )?;
    Ok(regular + fx * libm::log((hi - x) / (x - lo)))
}

/// A radial density supported on a centered ball, stored as a sum of
/// edge powers `sum_j c_j (R^2 - r^2)^(e_j)`.
///
/// Every explicit equilibrium handled by this crate has this shape, and it
/// keeps evaluation stable arbitrarily close to the edge: the factor
/// `R^2 - r^2` is computed from the distance to the edge, never by a
/// cancelling subtraction.
#[derive(Debug, Clone)]
pub struct RadialDensity {
    radius: f64,
    terms: Vec<(f64, f64)>,
}

impl RadialDensity {
    /// Build from `(coefficient, exponent)` pairs; exponents must be
    /// greater than -1 so that the mass integral exists.
    pub fn new(radius: f64, terms: Vec<(f64, f64)>) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::Domain("support radius must be positive"));
        }
        if terms.is_empty() {
            return Err(Error::Domain("density needs at least one term"));
        }
        for &(c, e) in &terms {
            if !c.is_finite() || !e.is_finite() || e <= -1.0 {
                return Err(Error::Domain("density term exponent must be > -1"));
            }
        }
        Ok(RadialDensity { radius, terms })
    }

    /// Constant value `c` on a ball of the given radius.
    pub fn uniform(radius: f64, c: f64) -> Result<Self> {
        RadialDensity::new(radius, alloc::vec![(c, 0.0)])
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn terms(&self) -> &[(f64, f64)] {
        &self.terms
    }

    /// The most singular edge exponent present (the profile behaves like
    /// `(R - r)^boundary_exponent` at the edge, up to a constant).
    pub fn boundary_exponent(&self) -> f64 {
        self.terms
            .iter()
            .filter(|(c, _)| *c != 0.0)
            .map(|&(_, e)| e)
            .fold(f64::INFINITY, f64::min)
    }

    /// Density value at radius `r`; zero outside the support.
    pub fn evaluate(&self, r: f64) -> f64 {
        if r > self.radius {
            return 0.0;
        }
        self.eval_from_edge(self.radius - r)
    }

    /// Density at distance `delta = R - r` from the edge, written so that
    /// tiny `delta` (down to the underflow threshold) loses no accuracy.
    pub fn eval_from_edge(&self, delta: f64) -> f64 {
        let q = delta * (2.0 * self.radius - delta); // R^2 - r^2
        let mut sum = 0.0;
        for &(c, e) in &self.terms {
            sum += c * libm::pow(q, e);
        }
        sum
    }

    /// Closed-form mass in dimension `d`.
    pub fn mass(&self, d: u32) -> Result<f64> {
        let mut m = 0.0;
        for &(c, e) in &self.terms {
            m += c * crate::specfun::ball_moment(0.0, e, d, self.radius)?;
        }
        Ok(m)
    }

    /// Closed-form raw moment `int |x|^(2j) rho dx` in dimension `d`.
    pub fn moment(&self, j: u32, d: u32) -> Result<f64> {
        let mut m = 0.0;
        for &(c, e) in &self.terms {
            m += c * crate::specfun::ball_moment(2.0 * j as f64, e, d, self.radius)?;
        }
        Ok(m)
    }

    /// Multiply every coefficient by `s`.
    pub fn scaled(&self, s: f64) -> Self {
        RadialDensity {
            radius: self.radius,
            terms: self.terms.iter().map(|&(c, e)| (c * s, e)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::ball_moment;
    use approx::assert_relative_eq;
    use core::f64::consts::PI;

    #[test]
    fn singular_rule_reproduces_ball_moments_1d() {
        // int_-R^R |y|^a (R^2-y^2)^b dy as two mirrored panels; the smooth
        // factor on [0, R] is (R+y)^b.
        for &(a, b, r) in &[(0.0, -0.5, 1.0), (2.0, 0.5, 1.3), (1.0, 2.5, 0.7), (4.0, -0.9, 2.0)] {
            let spec = QuadratureSpec::with_exponents(a, b).with_nodes(48);
            let one_side =
                integrate_singular(|y: f64| (r + y).powf(b), 0.0, r, &spec).unwrap();
            let want = ball_moment(a, b, 1, r).unwrap();
            assert_relative_eq!(2.0 * one_side, want, max_relative = 1e-9);
        }
    }

    #[test]
    fn singular_rule_arcsine_weight() {
        let spec = QuadratureSpec::with_exponents(-0.5, -0.5).with_nodes(16);
        let v = integrate_singular(|_| 1.0, -1.0, 1.0, &spec).unwrap();
        assert_relative_eq!(v, PI, max_relative = 1e-12);
        let v2 = integrate_singular(|x| x * x, -1.0, 1.0, &spec).unwrap();
        assert_relative_eq!(v2, PI / 2.0, max_relative = 1e-12);
    }

    #[test]
    fn auto_engine_handles_unstated_exponents() {
        // Bounded but non-smooth endpoint behavior, no exponents declared.
        let spec = QuadratureSpec::default();
        let v = integrate_auto(|x: f64| (1.0 - x).powf(0.25) + x.sqrt(), 0.0, 1.0, &spec)
            .unwrap();
        assert_relative_eq!(v, 4.0 / 5.0 + 2.0 / 3.0, max_relative = 1e-9);
    }

    #[test]
    fn pv_of_simple_pole_only() {
        // PV int_-1^1 1/(y - x) dy = ln((1-x)/(1+x)).
        let spec = QuadratureSpec::default().principal_value();
        for &x in &[-0.6, 0.0, 0.3, 0.9] {
            let v = pv_integrate(|_: &PanelPoint| 1.0, -1.0, 1.0, x, &spec).unwrap();
            assert_relative_eq!(
                v,
                ((1.0 - x) / (1.0 + x)).ln(),
                epsilon = 1e-12,
                max_relative = 1e-10
            );
        }
    }

    #[test]
    fn pv_polynomial_numerator() {
        // PV int_-1^1 y^2/(y-x) dy = x^2 ln((1-x)/(1+x)) + 2x  (long division).
        let spec = QuadratureSpec::default().principal_value();
        for &x in &[-0.5, 0.2, 0.7] {
            let v = pv_integrate(|p: &PanelPoint| p.x * p.x, -1.0, 1.0, x, &spec).unwrap();
            let want = x * x * ((1.0 - x) / (1.0 + x)).ln() + 2.0 * x;
            assert_relative_eq!(v, want, epsilon = 1e-11, max_relative = 1e-9);
        }
    }

    #[test]
    fn pv_requires_mode_and_interior_pole() {
        let off = QuadratureSpec::default();
        assert!(pv_integrate(|_: &PanelPoint| 1.0, -1.0, 1.0, 0.0, &off).is_err());
        let on = QuadratureSpec::default().principal_value();
        assert!(pv_integrate(|_: &PanelPoint| 1.0, -1.0, 1.0, 1.5, &on).is_err());
    }

    #[test]
    fn pv_with_endpoint_singular_numerator() {
        // PV int_-1^1 sqrt((1-y)/(1+y)) / (y-x) dy = -pi for every
        // interior x: write the numerator as (1-y)/sqrt(1-y^2) and split
        // (1-y) = (1-x) - (y-x); the first piece multiplies the arcsine
        // kernel whose principal value vanishes, the second integrates
        // the plain arcsine weight.
        let spec = QuadratureSpec::default().principal_value();
        for &x in &[-0.4, 0.1, 0.6] {
            let v = pv_integrate(
                |p: &PanelPoint| (p.from_hi / p.from_lo).sqrt(),
                -1.0,
                1.0,
                x,
                &spec,
            )
            .unwrap();
            assert_relative_eq!(v, -PI, max_relative = 1e-8);
        }
    }

    #[test]
    fn density_edge_evaluation_is_stable() {
        let rho = RadialDensity::new(2.0, alloc::vec![(1.5, -0.5)]).unwrap();
        // At delta = 1e-300 the naive R^2 - r^2 would round to zero.
        let v = rho.eval_from_edge(1e-300);
        let q: f64 = 1e-300 * (2.0 * 2.0 - 1e-300);
        assert_relative_eq!(v, 1.5 * q.powf(-0.5), max_relative = 1e-14);
        assert!(v.is_finite());
        // Outside the support the density vanishes.
        assert_eq!(rho.evaluate(2.5), 0.0);
    }

    #[test]
    fn density_mass_and_moment_match_quadrature() {
        let rho = RadialDensity::new(1.2, alloc::vec![(0.7, -0.4), (-0.2, 0.6)]).unwrap();
        let spec = QuadratureSpec::default();
        for d in [1u32, 2, 3] {
            let got = rho.mass(d).unwrap();
            let via_quad = mass_quadrature(&rho, d, &spec).unwrap();
            assert_relative_eq!(got, via_quad, max_relative = 1e-9);
        }
        let m1 = rho.moment(1, 3).unwrap();
        let via_quad = radial_moment_quadrature(&rho, 1, 3, &spec).unwrap();
        assert_relative_eq!(m1, via_quad, max_relative = 1e-9);
    }

    #[test]
    fn density_validation() {
        assert!(RadialDensity::new(-1.0, alloc::vec![(1.0, 0.0)]).is_err());
        assert!(RadialDensity::new(1.0, alloc::vec![(1.0, -1.0)]).is_err());
        assert!(RadialDensity::new(1.0, alloc::vec![]).is_err());
    }
}
