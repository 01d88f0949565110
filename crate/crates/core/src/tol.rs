//! Central home for the numeric tolerances used across the crate.
//!
//! Everything is double precision. Routines that take a [`crate::QuadratureSpec`]
//! read their target accuracy from it; these constants supply the defaults
//! and all fixed acceptance thresholds, so a change here propagates
//! everywhere.

/// Default relative tolerance of adaptive quadrature.
pub const QUAD_REL: f64 = 1e-9;

/// Default number of quadrature nodes per panel for the fixed-order rules.
pub const QUAD_NODES: usize = 256;

/// Absolute floor used when turning a relative tolerance into an acceptance
/// band around values that may legitimately be zero.
pub const ABS_FLOOR: f64 = 1e-14;

/// Allowed relative spread of the potential over the support of an
/// equilibrium profile.
pub const EL_INTERIOR_SPREAD: f64 = 1e-6;

/// How far below the interior level the exterior potential may dip before
/// the state is declared invalid (pure round-off allowance).
pub const EL_EXTERIOR_SLACK: f64 = 1e-8;

/// Relative mass defect tolerated when a profile is re-integrated.
pub const MASS_REL: f64 = 1e-8;

/// A profile counts as nonnegative when no sample is below
/// `-DENSITY_NEG * max(profile)`.
pub const DENSITY_NEG: f64 = 1e-10;

/// Number of radial samples in the nonnegativity scan.
pub const DENSITY_SCAN: usize = 512;

/// Force threshold at which a particle configuration counts as settled.
pub const PARTICLE_FORCE: f64 = 1e-9;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tolerances_are_ordered_sanely() {
        assert!(ABS_FLOOR < QUAD_REL);
        assert!(QUAD_REL < EL_EXTERIOR_SLACK);
        assert!(EL_EXTERIOR_SLACK < EL_INTERIOR_SPREAD);
        assert!(DENSITY_NEG < MASS_REL);
        for t in [QUAD_REL, EL_INTERIOR_SPREAD, MASS_REL, PARTICLE_FORCE] {
            assert!(t > 0.0 && t < 1.0);
        }
    }
}
