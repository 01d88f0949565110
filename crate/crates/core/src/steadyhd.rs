//! Ball-supported equilibria in any dimension for even attraction
//! exponents.
//!
//! When the attraction exponent is an even integer `a = 2k`, the
//! attractive part of the induced potential of a radial density is an even
//! polynomial of degree `2k` whose coefficients are moments of the
//! density. The equilibrium condition therefore closes after finitely many
//! steps: the profile must be a combination of the edge powers
//! `(R^2-|x|^2)^(k'-(b+d)/2)`, `k' = 1..k`, whose convolutions with
//! `|x|^b` are themselves even polynomials with classical closed-form
//! coefficients ([`identity_coefficient`]); matching polynomial
//! coefficients fixes the combination in terms of the moments
//! ([`solve_coefficients`]); and requiring the profile to reproduce those
//! moments is a positive eigenvalue problem whose eigenvalue fixes the
//! support radius ([`moment_eigenproblem`]).
//!
//! The leading edge power `(R^2-|x|^2)^(-(b+d)/2)` never participates: for
//! `b > 2-d` it is not integrable, and for `b < 2-d` the minimizing
//! profile vanishes on its boundary instead of jumping. Profiles past
//! [`b_max_threshold`] concentrate on a sphere and are out of scope; well
//! before that, past a smaller threshold, the constructed profile turns
//! negative at the origin and is flagged not valid while still being
//! returned, so parameter sweeps can chart the transition.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;
use crate::float::powi;
use crate::kernel::PowerLawKernel;
use crate::quadrature::{convolve_radial, QuadratureSpec, RadialDensity};
use crate::specfun::{angular_power_average, beta_continued, factorial, gamma_fn, pochhammer, PI};
use crate::Result;

/// Probe offset for the Lagrange constant at exactly zero repulsion
/// exponent (logarithmic repulsion). The kernel normalization `|x|^b/b`
/// carries a constant `1/b` that shifts the multiplier by `-M_0/b`; the
/// shift is odd in `b`, so averaging the constants of the states at
/// `b = +-ENERGY_PROBE` cancels it to second order in the probe size.
const ENERGY_PROBE: f64 = 1e-6;

/// Coefficient `C_{kj}` of `R^(2(k-j)) |x|^(2j)` in the closed-form
/// convolution
///
/// `int_{B_R} (R^2-|y|^2)^(k-(b+d)/2) |x-y|^b dy
///     = sum_{j=0..k} C_{kj} R^(2(k-j)) |x|^(2j)`,
///
/// namely `pi^(d/2)/Gamma(d/2) * B((b+d)/2, k+1-(b+d)/2) *
/// (-b/2)_j (-k)_j / (j! (d/2)_j)` with the Beta factor in Gamma-ratio
/// form and `(r)_n` the rising factorial.
///
/// Requires `b` strictly inside `(-d, 2+2k-d)`, exactly the window where
/// both factors of the integrand are integrable; the endpoints diverge.
/// `j > k` yields zero because `(-k)_j` truncates.
pub fn identity_coefficient(k: u32, j: u32, b: f64, d: u32) -> Result<f64> {
    if d == 0 {
        return Err(Error::Domain("dimension must be >= 1"));
    }
    let df = d as f64;
    if !b.is_finite() || b <= -df || b >= 2.0 + 2.0 * k as f64 - df {
        return Err(Error::Domain(
            "kernel exponent outside the integrable window (-d, 2+2k-d)",
        ));
    }
    if j > k {
        return Ok(0.0);
    }
    let s = 0.5 * (b + df);
    let prefactor = libm::pow(PI, 0.5 * df) / gamma_fn(0.5 * df)?
        * beta_continued(s, k as f64 + 1.0 - s)?;
    let ratio = pochhammer(-0.5 * b, j) * pochhammer(-(k as f64), j)
        / (factorial(j) * pochhammer(0.5 * df, j));
    Ok(prefactor * ratio)
}

/// `C_{kj}` for `j >= 1` with the common factor `-b/2` of the first
/// Pochhammer divided out, via `(-b/2)_j = (-b/2) (1-b/2)_(j-1)`.
///
/// Both sides of the coefficient-matching system vanish linearly in `b`;
/// working with the reduced coefficients removes that common factor
/// analytically, so the solve stays regular at `b = 0` (logarithmic
/// repulsion) instead of computing `0/0`.
fn reduced_identity_coefficient(k: u32, j: u32, b: f64, d: u32) -> Result<f64> {
    debug_assert!(j >= 1 && j <= k);
    let df = d as f64;
    let s = 0.5 * (b + df);
    let prefactor = libm::pow(PI, 0.5 * df) / gamma_fn(0.5 * df)?
        * beta_continued(s, k as f64 + 1.0 - s)?;
    let ratio = pochhammer(1.0 - 0.5 * b, j - 1) * pochhammer(-(k as f64), j)
        / (factorial(j) * pochhammer(0.5 * df, j));
    Ok(prefactor * ratio)
}

/// Outcome of [`fundamental_identity_check`].
#[derive(Debug, Clone)]
pub struct FundamentalIdentityReport {
    /// The predicted constant `pi^(d/2+1) / (Gamma(d/2) sin((b+d)pi/2))`.
    pub expected: f64,
    /// Quadrature value of the convolution at each requested radius.
    pub observed: Vec<f64>,
    /// Largest relative deviation of the observations from the constant.
    pub max_rel_error: f64,
}

/// Verify by quadrature that
/// `int_{B_R} (R^2-|y|^2)^(-(b+d)/2) |x-y|^b dy` equals the constant
/// `pi^(d/2+1) / (Gamma(d/2) sin((b+d)pi/2))` at every sample radius —
/// independently of both the evaluation point and the support radius.
///
/// This is the seed from which every [`identity_coefficient`] follows by
/// repeated integration; checking it numerically validates the whole
/// family at its base. Requires `b` strictly in `(-d, 2-d)` (so the weight
/// is integrable but genuinely singular at the edge) and sample radii in
/// `[0, R)`.
pub fn fundamental_identity_check(
    b: f64,
    d: u32,
    r: f64,
    x_samples: &[f64],
    spec: &QuadratureSpec,
) -> Result<FundamentalIdentityReport> {
    if d == 0 {
        return Err(Error::Domain("dimension must be >= 1"));
    }
    let df = d as f64;
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::Domain("support radius must be positive"));
    }
    if !b.is_finite() || b <= -df || b >= 2.0 - df {
        return Err(Error::Domain("kernel exponent must lie in (-d, 2-d)"));
    }
    if x_samples.is_empty() {
        return Err(Error::Domain("need at least one sample radius"));
    }
    let expected = libm::pow(PI, 0.5 * df + 1.0)
        / (gamma_fn(0.5 * df)? * libm::sin(0.5 * (b + df) * PI));
    let weight = RadialDensity::new(r, vec![(1.0, -0.5 * (b + df))])?;
    let mut observed = Vec::with_capacity(x_samples.len());
    let mut max_rel_error = 0.0f64;
    for &x in x_samples {
        if !(x >= 0.0 && x < r) {
            return Err(Error::Domain("sample radii must lie in [0, R)"));
        }
        let v = convolve_radial(&weight, b, x, d, spec)?;
        max_rel_error = max_rel_error.max((v - expected).abs() / expected.abs());
        observed.push(v);
    }
    Ok(FundamentalIdentityReport {
        expected,
        observed,
        max_rel_error,
    })
}

/// Weight `g_j` of `M_{2(k-j)} R^(2(k-j)) |x|^(2j)` in the expansion of
/// `int |x-y|^(2k) rho(y) dy` for a radial density: the multinomial
/// expansion of `(|x|^2 - 2 x.y + |y|^2)^k`, with odd directional powers
/// dropped by symmetry and even ones averaged over the sphere.
fn even_power_expansion_weight(k: u32, j: u32, d: u32) -> Result<f64> {
    debug_assert!(j <= k);
    let mut g = 0.0;
    for m in 0..=j.min(k - j) {
        let direct = j - m; // power of |x|^2 taken without a dot product
        let inner = k - j - m; // power of |y|^2
        let ways = factorial(k) / (factorial(direct) * factorial(2 * m) * factorial(inner));
        g += ways * powi(4.0, m as i32) * angular_power_average(m, d)?;
    }
    Ok(g)
}

/// Expand the attraction side of the equilibrium condition,
/// `b [ (1/2k) int |x-y|^(2k) rho dy - E ]`, as the even polynomial
/// `sum_{j=0..k} F_j R^(2k-2j) |x|^(2j)`.
///
/// `moments` are the rescaled even moments `M_{2j} = R^(-2j) int |x|^(2j)
/// rho dx` for `j = 0..k` — one more entry than the radius eigenproblem
/// carries, because the constant term sees the top moment `M_{2k}` — and
/// `scaled_energy` is the Lagrange constant divided by `R^(2k)`, which
/// enters only `F_0`. Each `F_j` with `j >= 1` involves only the moments
/// up to `M_{2(k-j)}`.
pub fn governing_rhs_coefficients(
    k: u32,
    b: f64,
    d: u32,
    moments: &[f64],
    scaled_energy: f64,
) -> Result<Vec<f64>> {
    if k == 0 || d == 0 {
        return Err(Error::Domain("attraction order and dimension must be >= 1"));
    }
    if moments.len() != k as usize + 1 {
        return Err(Error::Domain(
            "need the rescaled moments M_0..M_{2k}: k+1 entries",
        ));
    }
    if !b.is_finite()
        || !scaled_energy.is_finite()
        || moments.iter().any(|m| !m.is_finite())
    {
        return Err(Error::Domain("exponent, energy, and moments must be finite"));
    }
    let two_k = 2.0 * k as f64;
    let mut coeffs = Vec::with_capacity(k as usize + 1);
    for j in 0..=k {
        let g = even_power_expansion_weight(k, j, d)?;
        let mut f = b / two_k * g * moments[(k - j) as usize];
        if j == 0 {
            f -= b * scaled_energy;
        }
        coeffs.push(f);
    }
    Ok(coeffs)
}

/// Shared validation for the assembly routines, which are meaningful (by
/// analytic continuation of the Beta factors) for any `b` in `(-d, 2)` —
/// wider than the range where a physical state exists, so the structure of
/// the moment matrix can be examined beyond [`b_max_threshold`].
fn validate_assembly_range(k: u32, b: f64, d: u32) -> Result<()> {
    if k == 0 || d == 0 {
        return Err(Error::Domain("attraction order and dimension must be >= 1"));
    }
    if !b.is_finite() || b <= -(d as f64) || b >= 2.0 {
        return Err(Error::Domain("repulsion exponent must lie in (-d, 2)"));
    }
    Ok(())
}

/// Combination weights `A_1..A_k` of the edge powers, from matching the
/// coefficients of `|x|^2, ..., |x|^(2k)` between the convolved profile
/// and [`governing_rhs_coefficients`].
///
/// The system is upper triangular — the `|x|^(2j)` row involves only
/// `A_j..A_k` — and both sides carry a common factor of `b`, which is
/// divided out analytically (see [`reduced_identity_coefficient`]), so
/// the weights vary smoothly through `b = 0`. The constant-term row is
/// excluded: it determines the Lagrange constant, not the profile.
///
/// `moments` needs the rescaled `M_0..M_{2(k-1)}`; extra entries are
/// ignored. The weights do not depend on the top moment or the radius.
pub fn solve_coefficients(k: u32, b: f64, d: u32, moments: &[f64]) -> Result<Vec<f64>> {
    validate_assembly_range(k, b, d)?;
    if moments.len() < k as usize {
        return Err(Error::Domain(
            "need the rescaled moments M_0..M_{2(k-1)}: k entries",
        ));
    }
    if moments.iter().take(k as usize).any(|m| !m.is_finite()) {
        return Err(Error::Domain("moments must be finite"));
    }
    let mut weights = vec![0.0; k as usize];
    for j in (1..=k).rev() {
        let g = even_power_expansion_weight(k, j, d)?;
        let mut rhs = -g * moments[(k - j) as usize] / k as f64;
        for kp in (j + 1)..=k {
            rhs -= reduced_identity_coefficient(kp, j, b, d)? * weights[kp as usize - 1];
        }
        let diag = reduced_identity_coefficient(j, j, b, d)?;
        let value = rhs / diag;
        if !value.is_finite() {
            return Err(Error::Degenerate("coefficient system is singular"));
        }
        weights[j as usize - 1] = value;
    }
    Ok(weights)
}

/// Rescaled moment `M_{2j}` of the unit basis profile
/// `(R^2-|x|^2)^(k'-(b+d)/2)`, with the common power `R^(2k'-b+...)`
/// factored out so the entry is radius-free:
/// `pi^(d/2)/Gamma(d/2) * B(j+d/2, k'+1-(b+d)/2)`.
fn basis_moment_entry(j: u32, kp: u32, b: f64, d: u32) -> Result<f64> {
    let df = d as f64;
    let s = 0.5 * (b + df);
    Ok(libm::pow(PI, 0.5 * df) / gamma_fn(0.5 * df)?
        * beta_continued(j as f64 + 0.5 * df, kp as f64 + 1.0 - s)?)
}

/// The `k x k` matrix `D` of the radius eigenproblem `R^(b-2k) M = D M`:
/// the composition "moments -> combination weights -> moments of the
/// combined profile", with all powers of `R` factored out. Throughout the
/// admissible parameter range every entry is strictly positive, which is
/// what guarantees a unique positive eigenpair.
pub(crate) fn assemble_moment_matrix(k: u32, b: f64, d: u32) -> Result<Vec<Vec<f64>>> {
    validate_assembly_range(k, b, d)?;
    let n = k as usize;
    let mut weight_columns = Vec::with_capacity(n);
    for i in 0..n {
        let mut unit = vec![0.0; n];
        unit[i] = 1.0;
        weight_columns.push(solve_coefficients(k, b, d, &unit)?);
    }
    let mut matrix = vec![vec![0.0; n]; n];
    for (j, row) in matrix.iter_mut().enumerate() {
        for i in 0..n {
            let mut acc = 0.0;
            for kp in 1..=k {
                acc += basis_moment_entry(j as u32, kp, b, d)?
                    * weight_columns[i][kp as usize - 1];
            }
            row[i] = acc;
        }
    }
    Ok(matrix)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn mat_vec(m: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    m.iter().map(|row| dot(row, v)).collect()
}

fn mat_vec_transposed(m: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    let n = m.len();
    (0..n).map(|i| (0..n).map(|j| m[j][i] * v[j]).sum()).collect()
}

/// Flip the sign so the component sum is nonnegative; `Some` only when
/// every component then ends strictly positive.
fn positivized(v: &[f64]) -> Option<Vec<f64>> {
    let sum: f64 = v.iter().sum();
    let sign = if sum >= 0.0 { 1.0 } else { -1.0 };
    let w: Vec<f64> = v.iter().map(|&x| sign * x).collect();
    if w.iter().all(|&x| x > 0.0) {
        Some(w)
    } else {
        None
    }
}

/// Real roots of `x^3 - t x^2 + p x - q` (the characteristic polynomial of
/// a 3x3 matrix with trace `t`, second invariant `p`, determinant `q`),
/// via the depressed form and either the three-real-root trigonometric
/// branch or the one-real-root radical branch.
fn cubic_real_roots(t: f64, p: f64, q: f64) -> Vec<f64> {
    let pp = p - t * t / 3.0;
    let qq = -2.0 * t * t * t / 27.0 + t * p / 3.0 - q;
    let shift = t / 3.0;
    let mut roots = Vec::new();
    if pp == 0.0 && qq == 0.0 {
        roots.push(shift);
    } else if -4.0 * pp * pp * pp - 27.0 * qq * qq >= 0.0 {
        // Three real roots; this branch requires pp < 0.
        let m = 2.0 * libm::sqrt(-pp / 3.0);
        let theta = libm::acos((-4.0 * qq / (m * m * m)).clamp(-1.0, 1.0)) / 3.0;
        for i in 0..3 {
            roots.push(shift + m * libm::cos(theta - 2.0 * PI * i as f64 / 3.0));
        }
    } else {
        let half = 0.5 * qq;
        let rad = libm::sqrt(half * half + pp * pp * pp / 27.0);
        roots.push(shift + libm::cbrt(-half + rad) + libm::cbrt(-half - rad));
    }
    // Newton polish against the undepressed polynomial.
    for root in roots.iter_mut() {
        for _ in 0..3 {
            let f = ((*root - t) * *root + p) * *root - q;
            let df = (3.0 * *root - 2.0 * t) * *root + p;
            if df != 0.0 {
                *root -= f / df;
            }
        }
    }
    roots.sort_by(|a, c| a.partial_cmp(c).unwrap());
    roots.dedup_by(|a, c| (*a - *c).abs() <= 1e-9 * a.abs().max(c.abs()).max(1.0));
    roots
}

/// All real eigenvalues of a matrix of side at most 3, by its
/// characteristic polynomial.
fn characteristic_real_eigenvalues(m: &[Vec<f64>]) -> Vec<f64> {
    match m.len() {
        1 => vec![m[0][0]],
        2 => {
            let tr = m[0][0] + m[1][1];
            let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
            let disc = tr * tr - 4.0 * det;
            if disc < 0.0 {
                Vec::new()
            } else {
                // Larger root by the stable formula, companion via the
                // product, so neither suffers cancellation.
                let big = 0.5 * (tr + libm::sqrt(disc));
                if big == 0.0 {
                    vec![0.0]
                } else {
                    vec![big, det / big]
                }
            }
        }
        3 => {
            let t = m[0][0] + m[1][1] + m[2][2];
            let p = m[0][0] * m[1][1] - m[0][1] * m[1][0]
                + m[0][0] * m[2][2]
                - m[0][2] * m[2][0]
                + m[1][1] * m[2][2]
                - m[1][2] * m[2][1];
            let q = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
            cubic_real_roots(t, p, q)
        }
        _ => unreachable!("direct eigen solve is limited to 3x3"),
    }
}

/// A null vector of `M - lambda I` for side <= 3, or `None` when the
/// eigenvalue is defective at working precision.
fn eigenvector_small(m: &[Vec<f64>], lambda: f64) -> Option<Vec<f64>> {
    match m.len() {
        1 => Some(vec![1.0]),
        2 => {
            let from_top = [m[0][1], lambda - m[0][0]];
            let from_bottom = [lambda - m[1][1], m[1][0]];
            let n1 = from_top[0] * from_top[0] + from_top[1] * from_top[1];
            let n2 = from_bottom[0] * from_bottom[0] + from_bottom[1] * from_bottom[1];
            let best = if n1 >= n2 { from_top } else { from_bottom };
            let scale = m.iter().flatten().fold(0.0f64, |a, &x| a.max(x.abs())) + lambda.abs();
            if n1.max(n2) <= (1e-14 * scale) * (1e-14 * scale) {
                None
            } else {
                Some(vec![best[0], best[1]])
            }
        }
        3 => {
            let rows: Vec<[f64; 3]> = (0..3)
                .map(|i| {
                    let mut r = [m[i][0], m[i][1], m[i][2]];
                    r[i] -= lambda;
                    r
                })
                .collect();
            let cross = |a: &[f64; 3], b: &[f64; 3]| -> [f64; 3] {
                [
                    a[1] * b[2] - a[2] * b[1],
                    a[2] * b[0] - a[0] * b[2],
                    a[0] * b[1] - a[1] * b[0],
                ]
            };
            let candidates = [
                cross(&rows[0], &rows[1]),
                cross(&rows[1], &rows[2]),
                cross(&rows[0], &rows[2]),
            ];
            let norm = |v: &[f64; 3]| v.iter().map(|x| x * x).sum::<f64>();
            let best = candidates
                .iter()
                .max_by(|a, b| norm(a).partial_cmp(&norm(b)).unwrap())?;
            let scale = m.iter().flatten().fold(0.0f64, |a, &x| a.max(x.abs())) + lambda.abs();
            if norm(best) <= (1e-13 * scale * scale) * (1e-13 * scale * scale) {
                None
            } else {
                Some(best.to_vec())
            }
        }
        _ => None,
    }
}

/// Power iteration for the dominant eigenpair of a linear map given as a
/// closure; converges when the Rayleigh quotient settles.
fn power_pair<F: Fn(&[f64]) -> Vec<f64>>(apply: F, n: usize) -> Result<(f64, Vec<f64>)> {
    let mut v = vec![1.0; n];
    let mut lambda = f64::NAN;
    for iteration in 0..1000 {
        let w = apply(&v);
        let next = dot(&w, &v) / dot(&v, &v);
        let norm = w.iter().fold(0.0f64, |a, &x| a.max(x.abs()));
        if norm == 0.0 || !norm.is_finite() {
            return Ok((0.0, v));
        }
        v = w.iter().map(|&x| x / norm).collect();
        if iteration > 3 && (next - lambda).abs() <= 1e-14 * next.abs().max(1e-300) {
            return Ok((next, v));
        }
        lambda = next;
    }
    Err(Error::NoConvergence("power iteration did not settle"))
}

/// Dominant eigenpair by power iteration, with a single deflation pass to
/// confirm the dominant eigenvalue is isolated (so the positive eigenpair
/// is the unique one).
fn power_iteration_eigenpair(m: &[Vec<f64>]) -> Result<(f64, Vec<f64>)> {
    let n = m.len();
    let (lambda, raw) = power_pair(|v| mat_vec(m, v), n)?;
    let vector = positivized(&raw)
        .ok_or(Error::Degenerate("dominant eigenvector is not positive"))?;
    if !(lambda > 0.0) {
        return Err(Error::Degenerate("dominant eigenvalue is not positive"));
    }
    let (_, left_raw) = power_pair(|v| mat_vec_transposed(m, v), n)?;
    let left = positivized(&left_raw)
        .ok_or(Error::Degenerate("left eigenvector is not positive"))?;
    let overlap = dot(&left, &vector);
    let deflated = power_pair(
        |v| {
            let mut w = mat_vec(m, v);
            let proj = dot(&left, v) / overlap;
            for (wi, vi) in w.iter_mut().zip(&vector) {
                *wi -= lambda * vi * proj;
            }
            w
        },
        n,
    );
    // Non-convergence here means a complex subdominant pair, which cannot
    // compete with the positive eigenpair; only a converged real value of
    // comparable size indicates trouble.
    if let Ok((sub, _)) = deflated {
        if sub.abs() >= lambda * (1.0 - 1e-9) {
            return Err(Error::Degenerate("dominant eigenvalue is not isolated"));
        }
    }
    Ok((lambda, vector))
}

/// The unique eigenpair with a strictly positive eigenvector.
///
/// For side at most 3 every real eigenvalue is extracted directly from the
/// characteristic polynomial and the positive one is selected — erroring
/// if none or several qualify, which would indicate an assembly bug since
/// a matrix with positive entries has exactly one positive eigenvector.
/// Larger matrices use power iteration with a deflation check.
fn positive_eigenpair(m: &[Vec<f64>]) -> Result<(f64, Vec<f64>)> {
    if m.len() > 3 {
        return power_iteration_eigenpair(m);
    }
    let lambdas = characteristic_real_eigenvalues(m);
    if lambdas.is_empty() {
        return Err(Error::Degenerate(
            "complex dominant eigenvalue: parameters outside the admissible range",
        ));
    }
    let mut found: Option<(f64, Vec<f64>)> = None;
    let mut count = 0;
    for &lambda in &lambdas {
        if let Some(candidate) = eigenvector_small(m, lambda).as_deref().and_then(positivized) {
            count += 1;
            found = Some((lambda, candidate));
        }
    }
    match (count, found) {
        (1, Some((lambda, vector))) => {
            if lambda > 0.0 {
                Ok((lambda, vector))
            } else {
                Err(Error::Degenerate("positive eigenvector has a nonpositive eigenvalue"))
            }
        }
        (0, _) => Err(Error::Degenerate(
            "no positive eigenvector: moment matrix assembly is inconsistent",
        )),
        _ => Err(Error::Degenerate("positive eigenvector is not unique")),
    }
}

/// Support radius and rescaled moments of the equilibrium.
///
/// The self-consistency `R^(b-2k) M = D M` (with `D` from
/// [`assemble_moment_matrix`]) is solved for the unique eigenpair with a
/// strictly positive eigenvector; the eigenvalue fixes
/// `R = lambda^(1/(b-2k))` and the eigenvector — determined up to scale —
/// is normalized so `M_0` equals the requested total mass `m0`.
pub fn moment_eigenproblem(k: u32, b: f64, d: u32, m0: f64) -> Result<(f64, Vec<f64>)> {
    if !(m0 > 0.0) || !m0.is_finite() {
        return Err(Error::Domain("total mass must be positive"));
    }
    let matrix = assemble_moment_matrix(k, b, d)?;
    let (lambda, vector) = positive_eigenpair(&matrix)?;
    let radius = libm::pow(lambda, 1.0 / (b - 2.0 * k as f64));
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(Error::Degenerate("eigenvalue does not yield a radius"));
    }
    let scale = m0 / vector[0];
    Ok((radius, vector.iter().map(|&x| x * scale).collect()))
}

/// Largest repulsion exponent admitting ball-supported equilibria for
/// attraction exponent `a` in dimension `d`:
/// `b_max = ((3-d) a - 10 + 7d - d^2) / (a + d - 3)`, defined for
/// `a + d > 3`.
///
/// Equivalently `3-d + (d-1)/(a+d-3)`: the value decreases from `4-d`
/// (attained only at `a = 2`) toward `3-d` as the attraction exponent
/// grows, and sits at the constant 2 in one dimension. Past the threshold
/// the preferred configuration concentrates on a sphere rather than a
/// ball.
pub fn b_max_threshold(a: f64, d: u32) -> Result<f64> {
    if d == 0 || !a.is_finite() {
        return Err(Error::Domain("dimension must be >= 1 and a finite"));
    }
    let df = d as f64;
    if !(a + df > 3.0) {
        return Err(Error::Domain("threshold is defined only for a + d > 3"));
    }
    let value = ((3.0 - df) * a - 10.0 + 7.0 * df - df * df) / (a + df - 3.0);
    debug_assert!(value > 3.0 - df - 1e-12 && value <= 4.0 - df + 1e-12);
    Ok(value)
}

/// Upper limit on `b` for constructing a state with attraction order `k`
/// in dimension `d`. The threshold formula needs `2k + d > 3`; the one
/// remaining case (`k = 1` in one dimension) has limit 2, the continuity
/// value of the formula, coinciding with the kernel ordering bound.
fn construction_upper_bound(k: u32, d: u32) -> Result<f64> {
    if 2 * k + d > 3 {
        b_max_threshold(2.0 * k as f64, d)
    } else {
        Ok(2.0)
    }
}

/// A ball-supported radial equilibrium for attraction exponent `a = 2k`
/// and repulsion exponent `b` in dimension `d`:
///
/// `rho(x) = sum_{k'=1..k} A_{k'} R^(2(k-k')) (R^2-|x|^2)^(k'-(b+d)/2)`.
#[derive(Debug, Clone)]
pub struct SteadyStateHD {
    d: u32,
    k: u32,
    b: f64,
    m0: f64,
    radius: f64,
    coefficients: Vec<f64>,
    moments: Vec<f64>,
    energy: f64,
    density: RadialDensity,
    valid: bool,
}

impl SteadyStateHD {
    /// Space dimension.
    pub fn dim(&self) -> u32 {
        self.d
    }

    /// Half the attraction exponent.
    pub fn attraction_order(&self) -> u32 {
        self.k
    }

    /// Attraction exponent `a = 2k`.
    pub fn attraction_exponent(&self) -> f64 {
        2.0 * self.k as f64
    }

    /// Repulsion exponent `b`; zero denotes logarithmic repulsion.
    pub fn repulsion_exponent(&self) -> f64 {
        self.b
    }

    /// Total mass.
    pub fn mass(&self) -> f64 {
        self.m0
    }

    /// Support radius.
    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Combination weights `A_1..A_k` of the edge powers.
    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    /// Rescaled even moments `M_0, M_2, ..., M_{2k-2}`.
    pub fn moments(&self) -> &[f64] {
        &self.moments
    }

    /// Lagrange constant: the value of `K * rho` on the support.
    pub fn energy(&self) -> f64 {
        self.energy
    }

    /// Radial profile.
    pub fn density(&self) -> &RadialDensity {
        &self.density
    }

    /// Whether the profile is nonnegative over its support. Strongly
    /// repulsive parameters below [`b_max_threshold`] can still produce a
    /// profile that dips negative at the origin; such states are returned
    /// with this flag cleared rather than rejected, so sweeps can chart
    /// where physical profiles end.
    pub fn is_valid(&self) -> bool {
        self.valid
    }

    /// The interaction kernel this state equilibrates.
    pub fn kernel(&self) -> Result<PowerLawKernel> {
        PowerLawKernel::new(2.0 * self.k as f64, self.b, self.d, self.m0)
    }
}

/// Lagrange constant from the constant-term row of the coefficient match:
/// `E = R^(2k) [ M_{2k}/(2k) - (1/b) sum_{k'} C_{k'0} A_{k'} ]`.
///
/// Unlike the profile, the constant genuinely diverges as `b -> 0` — the
/// kernel normalization `|x|^b/b` contributes a constant `1/b` — so this
/// form requires `b != 0`; the logarithmic case is handled by probe
/// averaging in [`construct_hd`].
fn lagrange_energy(
    k: u32,
    b: f64,
    d: u32,
    radius: f64,
    density: &RadialDensity,
    coefficients: &[f64],
) -> Result<f64> {
    debug_assert!(b != 0.0);
    let r2k = powi(radius, 2 * k as i32);
    let top_moment = density.moment(k, d)? / r2k;
    let mut row0 = 0.0;
    for kp in 1..=k {
        row0 += identity_coefficient(kp, 0, b, d)? * coefficients[kp as usize - 1];
    }
    Ok(r2k * (top_moment / (2.0 * k as f64) - row0 / b))
}

/// Scan the profile on a uniform radial grid; nonnegative up to a small
/// relative slack of the scan maximum counts as physical.
fn density_nonnegative(density: &RadialDensity) -> bool {
    let n = crate::tol::DENSITY_SCAN;
    let radius = density.radius();
    let mut min_value = f64::INFINITY;
    let mut max_value = f64::NEG_INFINITY;
    for i in 0..n {
        let v = density.evaluate(radius * (i as f64 + 0.5) / n as f64);
        min_value = min_value.min(v);
        max_value = max_value.max(v);
    }
    min_value >= -crate::tol::DENSITY_NEG * max_value.max(crate::tol::ABS_FLOOR)
}

/// Construct the ball-supported equilibrium with attraction exponent `2k`,
/// repulsion exponent `b`, dimension `d`, and total mass `m0`.
///
/// Requires `-d < b < min(2k, b_max)`; at or beyond the threshold the
/// equilibrium is no longer supported on a ball and an unsupported-regime
/// error is returned. `b = 0` (logarithmic repulsion — in the plane this
/// is the Newtonian potential) is fully supported: radius, moments, and
/// profile come from the same smooth formulas, and only the Lagrange
/// constant needs its symmetric probe limit.
pub fn construct_hd(k: u32, b: f64, d: u32, m0: f64) -> Result<SteadyStateHD> {
    if k == 0 || d == 0 {
        return Err(Error::Domain("attraction order and dimension must be >= 1"));
    }
    let df = d as f64;
    if !(m0 > 0.0) || !m0.is_finite() {
        return Err(Error::Domain("total mass must be positive"));
    }
    if !b.is_finite() || b <= -df {
        return Err(Error::Domain("repulsion exponent must exceed -d"));
    }
    if b >= 2.0 * k as f64 {
        return Err(Error::Domain("attraction must dominate at range: b < 2k"));
    }
    if b >= construction_upper_bound(k, d)? {
        return Err(Error::Unsupported(
            "repulsion too strong for a ball-supported equilibrium; the preferred \
             configuration concentrates on a sphere",
        ));
    }
    let (radius, moments) = moment_eigenproblem(k, b, d, m0)?;
    let coefficients = solve_coefficients(k, b, d, &moments)?;
    let s = 0.5 * (b + df);
    let mut terms = Vec::with_capacity(k as usize);
    for kp in 1..=k {
        terms.push((
            coefficients[kp as usize - 1] * powi(radius, 2 * (k - kp) as i32),
            kp as f64 - s,
        ));
    }
    let density = RadialDensity::new(radius, terms)?;
    let energy = if b == 0.0 {
        let above = construct_hd(k, ENERGY_PROBE, d, m0)?.energy;
        let below = construct_hd(k, -ENERGY_PROBE, d, m0)?.energy;
        0.5 * (above + below)
    } else {
        lagrange_energy(k, b, d, radius, &density, &coefficients)?
    };
    let valid = density_nonnegative(&density);
    Ok(SteadyStateHD {
        d,
        k,
        b,
        m0,
        radius,
        coefficients,
        moments,
        energy,
        density,
        valid,
    })
}
