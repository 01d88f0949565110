//! Closed-form equilibrium profiles on an interval for the kernel
//! `K(x) = |x|^a/a - |x|^b/b` when one of the exponents equals 2.
//!
//! Two explicit branches exist:
//!
//! * quadratic repulsion (`b = 2`, `a` in `(2,3)`): a single edge-singular
//!   profile `(R^2-x^2)^((1-a)/2)`;
//! * quadratic attraction (`a = 2`, `b` in `(-1,2)`): a regular profile
//!   `(R^2-x^2)^((1-b)/2)`, plus — for `b < 1` — a one-parameter family
//!   with an extra edge-divergent component weighted by `c >= 0`. The
//!   family's energy is minimized at `c = 0`, which this module exposes
//!   through closed-form energy and slope evaluations.
//!
//! Radii come from mass self-consistency, energies from the constant value
//! of `K * rho` on the support. The two-point competitor (all mass in a
//! symmetric pair of atoms) is provided for energy comparisons.

use crate::error::Error;
use crate::kernel::PowerLawKernel;
use crate::quadrature::{radial_moment_quadrature, QuadratureSpec, RadialDensity};
use crate::specfun::beta_fn;
use crate::Result;

use alloc::vec;

const PI: f64 = core::f64::consts::PI;

/// Offset used when an exponent sits exactly on a removable singularity of
/// the closed forms (`b = 0` or `b = 1`): the state is built at `b - EPS`
/// and `b + EPS` and averaged, which cancels the leading odd error term.
const LIMIT_EPS: f64 = 1e-8;

/// Which explicit interval branch a state belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch1D {
    /// `b = 2`, `a` in `(2,3)`.
    QuadraticRepulsion,
    /// `a = 2`, `b` in `(-1,2)`, no singular component (`c = 0`).
    QuadraticAttractionRegular,
    /// `a = 2`, `b` in `(-1,1)`, singular family member (`c > 0`).
    QuadraticAttractionFamily,
}

/// A constructed interval equilibrium: profile, support radius, energy per
/// unit mass, and the parameters that produced it.
#[derive(Debug, Clone)]
pub struct SteadyState1D {
    branch: Branch1D,
    a: f64,
    b: f64,
    c: f64,
    m0: f64,
    radius: f64,
    energy: f64,
    density: RadialDensity,
    limit_case: bool,
}

impl SteadyState1D {
    pub fn branch(&self) -> Branch1D {
        self.branch
    }

    pub fn attraction_exponent(&self) -> f64 {
        self.a
    }

    pub fn repulsion_exponent(&self) -> f64 {
        self.b
    }

    /// Weight of the singular family component (zero on regular branches).
    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn mass(&self) -> f64 {
        self.m0
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// The constant value of `K * rho` on the support, per unit mass times
    /// mass — i.e. the Lagrange multiplier of the fixed-mass problem.
    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn density(&self) -> &RadialDensity {
        &self.density
    }

    /// True when the state was obtained by two-sided evaluation around a
    /// removable parameter singularity rather than by direct formulas.
    pub fn is_numerical_limit(&self) -> bool {
        self.limit_case
    }

    /// The interaction kernel this state equilibrates.
    pub fn kernel(&self) -> Result<PowerLawKernel> {
        PowerLawKernel::new(self.a, self.b, 1, self.m0)
    }
}

/// Quadratic-repulsion branch: `b = 2`, `a` in `(2,3)`.
///
/// The profile is `rho(x) = -(M0/(a-1)) (cos(a pi/2)/pi)
/// (R^2-x^2)^((1-a)/2)` — positive because the cosine is negative on this
/// range — with the radius fixed by mass and the requirement that the
/// quadratic part of `K * rho` cancels.
pub fn construct_b2(a: f64, m0: f64) -> Result<SteadyState1D> {
    if !(a > 2.0 && a < 3.0) {
        return Err(Error::Unsupported(
            "attraction exponent must lie in (2,3); outside, no spread-out interval profile exists",
        ));
    }
    if !(m0 > 0.0) || !m0.is_finite() {
        return Err(Error::Domain("mass must be positive and finite"));
    }
    let cosa = libm::cos(a * PI / 2.0);
    let radius = libm::pow(
        -cosa / ((a - 1.0) * PI) * beta_fn(0.5, (3.0 - a) / 2.0)?,
        1.0 / (a - 2.0),
    );
    let coeff = -(m0 / (a - 1.0)) * cosa / PI;
    let density = RadialDensity::new(radius, vec![(coeff, (1.0 - a) / 2.0)])?;
    let energy = (2.0 - a) / (a * (4.0 - a)) * m0 * radius * radius;
    Ok(SteadyState1D {
        branch: Branch1D::QuadraticRepulsion,
        a,
        b: 2.0,
        c: 0.0,
        m0,
        radius,
        energy,
        density,
        limit_case: false,
    })
}

/// Quadratic-attraction branch: `a = 2`, `b` in `(-1,2)`, family weight
/// `c >= 0` (nonzero only allowed for `b < 1`, where the singular
/// component exists).
///
/// At `b = 0` and `b = 1` the closed forms have removable singularities;
/// the state is then assembled by averaging the two-sided evaluations at
/// `b -/+ 1e-8` and flagged via [`SteadyState1D::is_numerical_limit`].
pub fn construct_a2(b: f64, c: f64, m0: f64) -> Result<SteadyState1D> {
    if !(b > -1.0 && b < 2.0) {
        return Err(Error::Unsupported(
            "repulsion exponent must lie in (-1,2) for an interval profile",
        ));
    }
    if !(m0 > 0.0) || !m0.is_finite() {
        return Err(Error::Domain("mass must be positive and finite"));
    }
    if !(c >= 0.0) || !c.is_finite() {
        return Err(Error::Domain(
            "family weight must be finite and nonnegative (negative density otherwise)",
        ));
    }
    if c > 0.0 && b >= 1.0 {
        return Err(Error::Unsupported(
            "the singular family component exists only for repulsion exponents below 1",
        ));
    }
    if b == 0.0 || b == 1.0 {
        let lo = construct_a2_exact(b - LIMIT_EPS, c, m0)?;
        let hi = construct_a2_exact(b + LIMIT_EPS, c, m0)?;
        // Componentwise average; the 1/b pole of the energy is odd around
        // b = 0 and cancels, everything else is smooth so the average is
        // second-order accurate.
        let radius = 0.5 * (lo.radius + hi.radius);
        let energy = 0.5 * (lo.energy + hi.energy);
        let terms: vec::Vec<(f64, f64)> = lo
            .density
            .terms()
            .iter()
            .zip(hi.density.terms())
            .map(|(&(c1, e1), &(c2, e2))| (0.5 * (c1 + c2), 0.5 * (e1 + e2)))
            .collect();
        let density = RadialDensity::new(radius, terms)?;
        return Ok(SteadyState1D {
            branch: lo.branch,
            a: 2.0,
            b,
            c,
            m0,
            radius,
            energy,
            density,
            limit_case: true,
        });
    }
    construct_a2_exact(b, c, m0)
}

/// Direct closed-form assembly away from `b` in `{0, 1}`.
fn construct_a2_exact(b: f64, c: f64, m0: f64) -> Result<SteadyState1D> {
    let cosb = libm::cos(PI * b / 2.0);
    // Mass self-consistency fixes the radius; the singular component adds
    // its own Beta term when present.
    let mut beta_sum = beta_fn(0.5, (3.0 - b) / 2.0)?;
    if c > 0.0 {
        beta_sum += c * beta_fn(0.5, (1.0 - b) / 2.0)?;
    }
    let radius = libm::pow((1.0 - b) * PI / (cosb * beta_sum), 1.0 / (2.0 - b));
    let k0 = m0 * cosb / ((1.0 - b) * PI);
    let r2 = radius * radius;
    let terms = if c > 0.0 {
        vec![((k0, (1.0 - b) / 2.0)), (k0 * c * r2, -(1.0 + b) / 2.0)]
    } else {
        vec![(k0, (1.0 - b) / 2.0)]
    };
    let density = RadialDensity::new(radius, terms)?;
    // Constant value of K * rho on the support, from the closed form of
    // the family energy (valid at c = 0 too).
    let energy = m0
        * (0.5 * ((1.0 - b) / (4.0 - b) + c) / ((1.0 - b) + (2.0 - b) * c)
            - c / (b * (1.0 - b))
            - 0.5 / b)
        * r2;
    Ok(SteadyState1D {
        branch: if c > 0.0 {
            Branch1D::QuadraticAttractionFamily
        } else {
            Branch1D::QuadraticAttractionRegular
        },
        a: 2.0,
        b,
        c,
        m0,
        radius,
        energy,
        density,
        limit_case: false,
    })
}

/// Energy of the quadratic-attraction family member with weight `c`, with
/// the radius eliminated through the mass constraint. Valid for `b` in
/// `(-1,1)` away from 0 (the singular component's range); at `c = 0` it
/// agrees with the regular branch for every admissible `b`.
pub fn energy_of_family(b: f64, c: f64, m0: f64) -> Result<f64> {
    Ok(construct_a2(b, c, m0)?.energy())
}

/// Total derivative `dE/dc` of the family energy along the mass
/// constraint, in closed form: `M0 (2-b) R^2 c^2 / ((1-b)(1-b+(2-b)c)^2)`.
/// Nonnegative, vanishing only at `c = 0`: the regular profile is the
/// family's energy minimizer.
pub fn energy_family_slope(b: f64, c: f64, m0: f64) -> Result<f64> {
    let state = construct_a2(b, c, m0)?;
    let r2 = state.radius() * state.radius();
    let denom = (1.0 - b) + (2.0 - b) * c;
    Ok(m0 * (2.0 - b) * r2 * c * c / ((1.0 - b) * denom * denom))
}

/// Rescaled even moment `R^(-order) int |y|^order rho(y) dy`, evaluated in
/// closed form and confirmed against quadrature at the spec's tolerance.
pub fn rescaled_moment(state: &SteadyState1D, order: u32, spec: &QuadratureSpec) -> Result<f64> {
    if order % 2 != 0 {
        return Err(Error::Domain(
            "only even moments are defined for the symmetric profile",
        ));
    }
    let j = order / 2;
    let closed = state.density.moment(j, 1)? * libm::pow(state.radius, -(order as f64));
    let quad = radial_moment_quadrature(&state.density, j, 1, spec)?
        * libm::pow(state.radius, -(order as f64));
    let scale = closed.abs().max(crate::tol::ABS_FLOOR);
    if (closed - quad).abs() > 1e-6 * scale {
        return Err(Error::NoConvergence(
            "closed-form moment and quadrature disagree",
        ));
    }
    Ok(closed)
}

/// All mass split into two equal atoms at `x = -R0` and `x = +R0`.
#[derive(Debug, Clone, Copy)]
pub struct DeltaPair {
    r0: f64,
    m0: f64,
}

impl DeltaPair {
    /// The energy-optimal pair: separation `2 R0 = 1`, where the kernel's
    /// derivative `r^(a-1) - r^(b-1)` vanishes for every exponent pair.
    pub fn optimal(m0: f64) -> Result<DeltaPair> {
        if !(m0 > 0.0) || !m0.is_finite() {
            return Err(Error::Domain("mass must be positive and finite"));
        }
        Ok(DeltaPair { r0: 0.5, m0 })
    }

    pub fn half_separation(&self) -> f64 {
        self.r0
    }

    pub fn mass(&self) -> f64 {
        self.m0
    }

    /// Energy per unit mass, `(M0/2) K(2 R0)`. The atoms' self-energy
    /// vanishes for `b > 0` and diverges otherwise, in which case the pair
    /// is not energy-comparable to spread-out states.
    pub fn energy(&self, kernel: &PowerLawKernel) -> Result<f64> {
        if kernel.b() <= 0.0 {
            return Err(Error::Degenerate(
                "point masses carry infinite self-energy for repulsion exponents <= 0",
            ));
        }
        Ok(self.m0 / 2.0 * kernel.eval(2.0 * self.r0))
    }
}

/// The optimal two-atom competitor and its energy under the given kernel.
pub fn delta_pair_optimal(kernel: &PowerLawKernel) -> Result<(DeltaPair, f64)> {
    let pair = DeltaPair::optimal(kernel.mass())?;
    let energy = pair.energy(kernel)?;
    Ok((pair, energy))
}
