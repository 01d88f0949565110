//! Convolution of a compactly supported radial density with power-law and
//! logarithmic kernels, and the quadratures built on top of it: induced
//! potential, mass, raw moments, and total interaction energy.
//!
//! Everything reduces to one radial integral over the support, with the
//! evaluation radius placed at a panel boundary so the kernel singularity
//! sits at a panel endpoint, where the tanh-sinh rule absorbs it. The
//! angular average of the kernel over a sphere of radius `s` has an
//! elementary form in one and three dimensions and for the planar
//! logarithm; every other dimension uses a fixed-depth inner rule in the
//! direction cosine. Inside that inner rule the power of the squared
//! chord length `q = (r-s)^2 + 2rs(1-u)` and the angular weight
//! `(1-u^2)^((d-3)/2)` are combined into a single exponential, because
//! near the panel ends the factors can overflow individually while their
//! product, the only thing that matters, stays representable.

use core::iter;

use crate::error::Error;
use crate::kernel::PowerLawKernel;
use crate::quadrature::jacobi::JacobiRule;
use crate::quadrature::tanhsinh::{self, PanelPoint};
use crate::quadrature::{QuadratureSpec, RadialDensity};
use crate::specfun;
use crate::Result;

const PI: f64 = core::f64::consts::PI;

/// Level cap of the inner rule for the angular factor (1537 nodes per
/// half-range at the deepest); typical evaluations stop much earlier.
const ANGULAR_MAX_LEVEL: u32 = 6;

/// Radial kernel selector: `|x|^p` or `ln |x|`.
#[derive(Debug, Clone, Copy)]
pub(crate) enum KernelKind {
    Power(f64),
    Log,
}

impl KernelKind {
    fn order(self) -> f64 {
        match self {
            KernelKind::Power(p) => p,
            KernelKind::Log => 0.0,
        }
    }
}

/// `int_{|y| <= R} |x - y|^p rho(|y|) dy` at `|x| = r` in dimension `d`.
///
/// `p` must exceed `-d` so the integral exists; `r` may lie inside or
/// outside the support.
pub fn convolve_radial(
    rho: &RadialDensity,
    p: f64,
    r: f64,
    d: u32,
    spec: &QuadratureSpec,
) -> Result<f64> {
    spec.validate()?;
    convolve_kind(rho, KernelKind::Power(p), r, d, spec.rel_tol)
}

/// `int_{|y| <= R} ln|x - y| rho(|y|) dy` at `|x| = r` in dimension `d`.
pub fn convolve_radial_log(
    rho: &RadialDensity,
    r: f64,
    d: u32,
    spec: &QuadratureSpec,
) -> Result<f64> {
    spec.validate()?;
    convolve_kind(rho, KernelKind::Log, r, d, spec.rel_tol)
}

fn convolve_kind(
    rho: &RadialDensity,
    kind: KernelKind,
    r: f64,
    d: u32,
    rel_tol: f64,
) -> Result<f64> {
    if d == 0 {
        return Err(Error::Domain("dimension must be >= 1"));
    }
    if !(kind.order() > -(d as f64)) {
        return Err(Error::Domain(
            "kernel power must exceed -d for local integrability",
        ));
    }
    if !r.is_finite() || r < 0.0 {
        return Err(Error::Domain("evaluation radius must be finite and >= 0"));
    }
    match (d, kind) {
        (1, _) => convolve_1d(rho, kind, r, rel_tol),
        (2, KernelKind::Log) => convolve_disk_log(rho, r, rel_tol),
        (3, _) => convolve_3d(rho, kind, r, rel_tol),
        _ => convolve_angular(rho, kind, r, d, rel_tol),
    }
}

/// Panels covering the radial support `[0, R]`, split at the evaluation
/// radius when it falls strictly inside, so that the kernel's branch
/// point is always a panel endpoint.
fn support_panels(r: f64, radius: f64) -> ((f64, f64), Option<(f64, f64)>) {
    if r > 0.0 && r < radius {
        ((0.0, r), Some((r, radius)))
    } else {
        ((0.0, radius), None)
    }
}

/// `|r - s|` at a panel point, built from the endpoint distances so it
/// stays exact when `s` approaches the kernel radius at a panel edge.
/// The panels are arranged so `r` is never interior to one.
fn distance_to(r: f64, lo: f64, hi: f64, pt: &PanelPoint) -> f64 {
    if r <= lo {
        (lo - r) + pt.from_lo
    } else {
        (r - hi) + pt.from_hi
    }
}

/// Density value at a panel point, using the edge-distance form when the
/// panel's upper end touches the support boundary.
fn density_at(rho: &RadialDensity, hi: f64, pt: &PanelPoint) -> f64 {
    if hi == rho.radius() {
        rho.eval_from_edge(pt.from_hi)
    } else {
        rho.evaluate(pt.x)
    }
}

fn convolve_1d(rho: &RadialDensity, kind: KernelKind, r: f64, rel_tol: f64) -> Result<f64> {
    let radius = rho.radius();
    let (first, second) = support_panels(r, radius);
    let mut total = 0.0;
    for (lo, hi) in iter::once(first).chain(second) {
        total += tanhsinh::integrate(
            |pt| {
                let near = distance_to(r, lo, hi, pt);
                let far = r + pt.x;
                let k = match kind {
                    KernelKind::Power(p) => libm::pow(near, p) + libm::pow(far, p),
                    // Separate logs: the product can underflow near the
                    // center while each factor is representable.
                    KernelKind::Log => libm::log(near) + libm::log(far),
                };
                k * density_at(rho, hi, pt)
            },
            lo,
            hi,
            rel_tol,
        )?;
    }
    Ok(total)
}

/// Three dimensions: the angular average collapses to the chord variable,
/// `mean = [(r+s)^(p+2) - |r-s|^(p+2)] / (2rs (p+2))`, with a log limit
/// at `p = -2` and an elementary antiderivative for the log kernel.
fn convolve_3d(rho: &RadialDensity, kind: KernelKind, r: f64, rel_tol: f64) -> Result<f64> {
    let radius = rho.radius();
    if r == 0.0 {
        return central_value(rho, kind, 3, rel_tol);
    }

    #[derive(Clone, Copy)]
    enum Mode {
        Power(f64),
        PowerLogLimit,
        Log,
    }
    let mode = match kind {
        KernelKind::Power(p) if (p + 2.0).abs() > 1e-12 => Mode::Power(p + 2.0),
        KernelKind::Power(_) => Mode::PowerLogLimit,
        KernelKind::Log => Mode::Log,
    };
    let pre = match mode {
        Mode::Power(q) => 2.0 * PI / (q * r),
        Mode::PowerLogLimit => 2.0 * PI / r,
        Mode::Log => 0.5 * PI / r,
    };

    let (first, second) = support_panels(r, radius);
    let mut total = 0.0;
    for (lo, hi) in iter::once(first).chain(second) {
        total += tanhsinh::integrate(
            |pt| {
                let s = pt.x;
                let near = distance_to(r, lo, hi, pt);
                let far = r + s;
                let chord = match mode {
                    Mode::Power(q) => libm::pow(far, q) - libm::pow(near, q),
                    Mode::PowerLogLimit => libm::log(far) - libm::log(near),
                    Mode::Log => {
                        far * far * (2.0 * libm::log(far) - 1.0)
                            - near * near * (2.0 * libm::log(near) - 1.0)
                    }
                };
                s * chord * density_at(rho, hi, pt)
            },
            lo,
            hi,
            rel_tol,
        )?;
    }
    Ok(pre * total)
}

/// Planar logarithm: the mean of `ln|x - y|` over a circle of radius `s`
/// is `ln(max(r, s))`, so no angular quadrature is needed.
fn convolve_disk_log(rho: &RadialDensity, r: f64, rel_tol: f64) -> Result<f64> {
    let radius = rho.radius();
    let (first, second) = support_panels(r, radius);
    let mut total = 0.0;
    for (lo, hi) in iter::once(first).chain(second) {
        total += tanhsinh::integrate(
            |pt| {
                let s = pt.x;
                let k = if s <= r { libm::log(r) } else { libm::log(s) };
                s * k * density_at(rho, hi, pt)
            },
            lo,
            hi,
            rel_tol,
        )?;
    }
    Ok(2.0 * PI * total)
}

/// Central value `r = 0`: the kernel is constant on each sphere, so the
/// convolution is a single weighted radial moment.
fn central_value(rho: &RadialDensity, kind: KernelKind, d: u32, rel_tol: f64) -> Result<f64> {
    let radius = rho.radius();
    let dm1 = (d - 1) as f64;
    let v = tanhsinh::integrate(
        |pt| {
            let s = pt.x;
            let k = match kind {
                KernelKind::Power(p) => libm::pow(s, p + dm1),
                KernelKind::Log => libm::pow(s, dm1) * libm::log(s),
            };
            k * density_at(rho, radius, pt)
        },
        0.0,
        radius,
        rel_tol,
    )?;
    Ok(specfun::sphere_surface(d) * v)
}

/// General dimension: outer adaptive integral in `s`, inner fixed-depth
/// integral of the kernel over the direction cosine.
pub(crate) fn convolve_angular(
    rho: &RadialDensity,
    kind: KernelKind,
    r: f64,
    d: u32,
    rel_tol: f64,
) -> Result<f64> {
    debug_assert!(d >= 2);
    let radius = rho.radius();
    if r == 0.0 {
        return central_value(rho, kind, d, rel_tol);
    }
    let ring = specfun::sphere_surface(d - 1);
    let e = 0.5 * (d as f64 - 3.0);
    let dm1 = (d - 1) as f64;

    let (first, second) = support_panels(r, radius);
    let mut total = 0.0;
    for (lo, hi) in iter::once(first).chain(second) {
        total += tanhsinh::integrate(
            |pt| {
                let s = pt.x;
                let near = distance_to(r, lo, hi, pt);
                let ln_near2 = 2.0 * libm::log(near);
                let ln_rs2 = libm::log(2.0 * r * s);
                let j = angular_factor(kind, ln_near2, ln_rs2, e, 0.1 * rel_tol);
                ring * libm::pow(s, dm1) * density_at(rho, hi, pt) * j
            },
            lo,
            hi,
            rel_tol,
        )?;
    }
    Ok(total)
}

/// `log(e^a + e^b)` without overflow or underflow.
fn log_sum_exp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + libm::log1p(libm::exp(lo - hi))
}

/// `int_-1^1 k(q(u)) (1-u^2)^e du` with `q(u) = dr2 + rs2 (1-u)`, the
/// squared chord length, supplied through the logs of its two terms.
fn angular_factor(kind: KernelKind, ln_dr2: f64, ln_rs2: f64, e: f64, rel_tol: f64) -> f64 {
    // om = 1 - u, op = 1 + u, both taken from the endpoint distances.
    let value = |om: f64, op: f64| -> f64 {
        let ln_q = log_sum_exp(ln_dr2, ln_rs2 + libm::log(om));
        match kind {
            KernelKind::Power(p) => libm::exp(0.5 * p * ln_q + e * libm::log(om * op)),
            KernelKind::Log => 0.5 * ln_q * libm::pow(om * op, e),
        }
    };
    let upper = tanhsinh::integrate_lenient(
        |pt| value(pt.from_hi, 2.0 - pt.from_hi),
        0.0,
        1.0,
        rel_tol,
        ANGULAR_MAX_LEVEL,
    );
    let lower = tanhsinh::integrate_lenient(
        |pt| value(2.0 - pt.from_lo, pt.from_lo),
        -1.0,
        0.0,
        rel_tol,
        ANGULAR_MAX_LEVEL,
    );
    upper + lower
}

/// Signed one-dimensional convolution
/// `int_-R^R sign(x - y) |x - y|^(-nu) rho(|y|) dy`,
/// the derivative-side kernel of the interval equation. Requires `nu < 1`.
#[cfg(test)]
pub(crate) fn convolve_signed_1d(
    rho: &RadialDensity,
    nu: f64,
    x: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    spec.validate()?;
    if !(nu < 1.0) {
        return Err(Error::Domain("signed kernel needs nu < 1"));
    }
    if !x.is_finite() {
        return Err(Error::Domain("evaluation point must be finite"));
    }
    let rad = rho.radius();

    let piece = |lo: f64, hi: f64| -> Result<f64> {
        tanhsinh::integrate(
            |pt| {
                // rho(|y|) with edge-stable distances on either side.
                let rho_v = if pt.x >= 0.0 {
                    if hi == rad {
                        rho.eval_from_edge(pt.from_hi)
                    } else {
                        rho.evaluate(pt.x)
                    }
                } else if lo == -rad {
                    rho.eval_from_edge(pt.from_lo)
                } else {
                    rho.evaluate(-pt.x)
                };
                rho_v * libm::pow(distance_to(x, lo, hi, pt), -nu)
            },
            lo,
            hi,
            spec.rel_tol,
        )
    };

    if x > -rad && x < rad {
        Ok(piece(-rad, x)? - piece(x, rad)?)
    } else if x >= rad {
        piece(-rad, rad)
    } else {
        Ok(-piece(-rad, rad)?)
    }
}

/// Potential `(K * rho)(r)` induced by the density under the kernel,
/// assembled as `C_a/a - C_b/b` with `C_p` the plain convolution and the
/// zero-exponent terms replaced by their logarithmic limits.
pub fn induced_potential(
    rho: &RadialDensity,
    kernel: &PowerLawKernel,
    r: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    spec.validate()?;
    let d = kernel.dim();
    let term = |p: f64| -> Result<f64> {
        if p == 0.0 {
            convolve_kind(rho, KernelKind::Log, r, d, spec.rel_tol)
        } else {
            Ok(convolve_kind(rho, KernelKind::Power(p), r, d, spec.rel_tol)? / p)
        }
    };
    Ok(term(kernel.a())? - term(kernel.b())?)
}

/// Total mass `int rho` in dimension `d`, by quadrature (the closed-form
/// counterpart is [`RadialDensity::mass`]).
pub fn mass_quadrature(rho: &RadialDensity, d: u32, spec: &QuadratureSpec) -> Result<f64> {
    radial_moment_quadrature(rho, 0, d, spec)
}

/// Raw moment `int |x|^(2j) rho dx` in dimension `d`, by quadrature.
pub fn radial_moment_quadrature(
    rho: &RadialDensity,
    j: u32,
    d: u32,
    spec: &QuadratureSpec,
) -> Result<f64> {
    spec.validate()?;
    if d == 0 {
        return Err(Error::Domain("dimension must be >= 1"));
    }
    let radius = rho.radius();
    let expn = (2 * j + d - 1) as f64;
    let v = tanhsinh::integrate(
        |pt| libm::pow(pt.x, expn) * density_at(rho, radius, pt),
        0.0,
        radius,
        spec.rel_tol,
    )?;
    Ok(specfun::sphere_surface(d) * v)
}

/// Reduced form `rho(s) / (R-s)^e0` with `e0` the boundary exponent: the
/// smooth factor handed to the weight-adapted energy rule.
fn edge_reduced_density(rho: &RadialDensity, s: f64) -> f64 {
    let e0 = rho.boundary_exponent();
    let rad = rho.radius();
    let (dm, dp) = (rad - s, rad + s);
    let mut sum = 0.0;
    for &(c, e) in rho.terms() {
        sum += c * libm::pow(dm, e - e0) * libm::pow(dp, e);
    }
    sum
}

fn energy_pass(
    rho: &RadialDensity,
    kernel: &PowerLawKernel,
    spec: &QuadratureSpec,
    n: usize,
) -> Result<(f64, f64)> {
    let d = kernel.dim();
    let radius = rho.radius();
    let e_min = rho.boundary_exponent();
    let rule = JacobiRule::new(n, e_min, 0.0)?;
    let half = 0.5 * radius;
    let scale = libm::pow(half, e_min + 1.0);
    let pre = specfun::sphere_surface(d) * scale;
    let dm1 = (d - 1) as f64;
    let mut acc = 0.0;
    let mut mag = 0.0;
    for (t, w) in rule.nodes().iter().zip(rule.weights()) {
        let s = half + half * t;
        let phi = induced_potential(rho, kernel, s, spec)?;
        let g = libm::pow(s, dm1) * edge_reduced_density(rho, s) * phi;
        acc += w * g;
        mag += w * g.abs();
    }
    Ok((pre * acc, (pre * mag).abs()))
}

/// Total interaction energy `int rho (K * rho) dx` (no factor 1/2).
///
/// A weight-adapted fixed rule is tried first; it converges immediately
/// whenever the potential is constant on the support, which is the case
/// for every equilibrium profile. If node doubling does not settle --
/// the potential of a non-equilibrium density carries an edge class the
/// weight cannot absorb -- the exponent-agnostic engine takes over.
pub fn interaction_energy(
    rho: &RadialDensity,
    kernel: &PowerLawKernel,
    spec: &QuadratureSpec,
) -> Result<f64> {
    spec.validate()?;
    let d = kernel.dim();
    let radius = rho.radius();
    let tol = (spec.rel_tol * 20.0).clamp(1e-12, 1e-6);

    let mut n = (spec.nodes / 16).clamp(8, 64);
    let (mut prev, mut prev_scale) = energy_pass(rho, kernel, spec, n)?;
    for _ in 0..2 {
        n *= 2;
        let (next, scale) = energy_pass(rho, kernel, spec, n)?;
        let floor = scale.max(prev_scale).max(crate::tol::ABS_FLOOR);
        if (next - prev).abs() <= tol * floor {
            return Ok(next);
        }
        prev = next;
        prev_scale = scale;
    }

    let failed = core::cell::Cell::new(None);
    let dm1 = (d - 1) as f64;
    let v = tanhsinh::integrate(
        |pt| {
            let s = pt.x;
            match induced_potential(rho, kernel, s, spec) {
                Ok(phi) => libm::pow(s, dm1) * density_at(rho, radius, pt) * phi,
                Err(e) => {
                    if failed.get().is_none() {
                        failed.set(Some(e));
                    }
                    0.0
                }
            }
        },
        0.0,
        radius,
        tol,
    )?;
    if let Some(e) = failed.take() {
        return Err(e);
    }
    Ok(specfun::sphere_surface(d) * v)
}
