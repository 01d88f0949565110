//! Gauss-Jacobi rules for weights `(1-t)^alpha (1+t)^beta` on `[-1, 1]`.
//!
//! Nodes and weights come from the Golub-Welsch connection: the nodes are
//! the eigenvalues of the symmetric tridiagonal recurrence matrix and the
//! weights are proportional to the squared first components of its
//! eigenvectors. The QL sweep below rotates a single vector along with the
//! matrix instead of accumulating the full eigenbasis, which keeps rule
//! construction at `O(n^2)`.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;
use crate::specfun::beta_fn;
use crate::Result;

/// A fixed-order Gauss-Jacobi quadrature rule.
#[derive(Debug, Clone)]
pub struct JacobiRule {
    alpha: f64,
    beta: f64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl JacobiRule {
    /// Build an `n`-point rule for exponents `alpha, beta > -1`.
    pub fn new(n: usize, alpha: f64, beta: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("quadrature rule needs at least one node"));
        }
        if !(alpha > -1.0 && beta > -1.0) || !alpha.is_finite() || !beta.is_finite() {
            return Err(Error::Domain("Jacobi exponents must be > -1"));
        }

        // Total weight integral and three-term recurrence coefficients of
        // the (normalized) Jacobi polynomials.
        let mu0 = libm::pow(2.0, alpha + beta + 1.0) * beta_fn(alpha + 1.0, beta + 1.0)?;
        let mut diag = vec![0.0; n];
        let mut sub = vec![0.0; n];
        diag[0] = (beta - alpha) / (alpha + beta + 2.0);
        for k in 1..n {
            let kf = k as f64;
            let denom = 2.0 * kf + alpha + beta;
            diag[k] = (beta * beta - alpha * alpha) / (denom * (denom + 2.0));
            // Off-diagonal b_k^2; at k = 1 the (k + alpha + beta) factor
            // cancels against (2k + alpha + beta - 1), and keeping the
            // cancelled form avoids 0/0 at alpha + beta = -1.
            let b2 = if k == 1 {
                4.0 * (1.0 + alpha) * (1.0 + beta)
                    / ((2.0 + alpha + beta) * (2.0 + alpha + beta) * (3.0 + alpha + beta))
            } else {
                4.0 * kf * (kf + alpha) * (kf + beta) * (kf + alpha + beta)
                    / (denom * denom * (denom + 1.0) * (denom - 1.0))
            };
            sub[k - 1] = libm::sqrt(b2);
        }

        let mut z = vec![0.0; n];
        z[0] = 1.0;
        ql_implicit(&mut diag, &mut sub, &mut z)?;

        // Eigenvalues arrive unordered; sort nodes and carry the vector.
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).unwrap());
        let nodes: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
        let weights: Vec<f64> = order.iter().map(|&i| mu0 * z[i] * z[i]).collect();

        Ok(JacobiRule {
            alpha,
            beta,
            nodes,
            weights,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Integrate `(x-lo)^beta (hi-x)^alpha f(x)` over `[lo, hi]`, where `f`
    /// is the smooth factor of the integrand. The weight itself is never
    /// evaluated; it is absorbed by the rule.
    pub fn integrate_weighted<F: Fn(f64) -> f64>(&self, lo: f64, hi: f64, f: F) -> f64 {
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (lo + hi);
        let scale = libm::pow(half, self.alpha + self.beta + 1.0);
        let mut sum = 0.0;
        for (t, w) in self.nodes.iter().zip(&self.weights) {
            sum += w * f(mid + half * t);
        }
        scale * sum
    }
}

/// Implicit-shift QL iteration on a symmetric tridiagonal matrix that
/// applies every rotation to the vector `z` as well. On exit `diag` holds
/// the eigenvalues (unsorted) and `z` the transformed vector.
fn ql_implicit(diag: &mut [f64], sub: &mut [f64], z: &mut [f64]) -> Result<()> {
    let n = diag.len();
    if n == 1 {
        return Ok(());
    }
    sub[n - 1] = 0.0;
    let eps = f64::EPSILON;

    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m < n - 1 {
                if sub[m].abs() <= eps * (diag[m].abs() + diag[m + 1].abs()) {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::NoConvergence("QL iteration stalled"));
            }

            let mut g = (diag[l + 1] - diag[l]) / (2.0 * sub[l]);
            let mut r = libm::hypot(g, 1.0);
            g = diag[m] - diag[l] + sub[l] / (g + libm::copysign(r, g));
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            let mut underflowed = false;

            for i in (l..m).rev() {
                let mut f = s * sub[i];
                let b = c * sub[i];
                r = libm::hypot(f, g);
                sub[i + 1] = r;
                if r == 0.0 {
                    // Rotation annihilated early; deflate and restart.
                    diag[i + 1] -= p;
                    sub[m] = 0.0;
                    underflowed = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + 2.0 * c * b;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - b;

                f = z[i + 1];
                z[i + 1] = s * z[i] + c * f;
                z[i] = c * z[i] - s * f;
            }
            if underflowed {
                continue;
            }
            diag[l] -= p;
            sub[l] = g;
            sub[m] = 0.0;
        }
    }
    Ok(())
}
