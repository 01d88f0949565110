//! Parameter routing, the profile file schema, and its reader/writer.
//!
//! A profile file is either CSV — a `#`-prefixed JSON header line, a
//! `r,rho` column header, and one row per grid point — or a single JSON
//! document `{"header": .., "r": [..], "rho": [..]}`. The header carries
//! everything needed to reconstruct the state exactly, so `verify` does
//! not depend on the sampled rows.

use aggsteady::{steady1d, steadyhd, Error, PowerLawKernel, RadialDensity};
use serde::{Deserialize, Serialize};

use crate::Failure;

/// A constructed equilibrium state in a routing-independent form.
pub struct StateData {
    pub a: f64,
    pub b: f64,
    pub d: u32,
    pub mass: f64,
    pub c: f64,
    pub radius: f64,
    /// Polynomial coefficients of the regular part, lowest order first.
    pub coefficients: Vec<f64>,
    /// Radial moments, zeroth first.
    pub moments: Vec<f64>,
    pub energy: f64,
    pub valid: bool,
    pub density: RadialDensity,
}

/// Metadata header written in front of every profile. `R` and `E` are
/// options so a file whose energy failed to evaluate still round-trips.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProfileHeader {
    pub a: f64,
    pub b: f64,
    pub d: u32,
    #[serde(rename = "R")]
    pub radius: Option<f64>,
    #[serde(rename = "A")]
    pub coefficients: Vec<f64>,
    #[serde(rename = "M")]
    pub moments: Vec<f64>,
    #[serde(rename = "E")]
    pub energy: Option<f64>,
    pub valid: bool,
    pub mass: f64,
    pub c: f64,
    pub samples: u32,
    pub rel_tol: f64,
    /// Exact `(coefficient, exponent)` terms of the density in the
    /// scaled variable, sufficient to rebuild it bit-for-bit.
    pub terms: Vec<(f64, f64)>,
}

impl StateData {
    pub fn header(&self, samples: u32, rel_tol: f64) -> ProfileHeader {
        ProfileHeader {
            a: self.a,
            b: self.b,
            d: self.d,
            radius: Some(self.radius),
            coefficients: self.coefficients.clone(),
            moments: self.moments.clone(),
            energy: Some(self.energy),
            valid: self.valid,
            mass: self.mass,
            c: self.c,
            samples,
            rel_tol,
            terms: self.density.terms().to_vec(),
        }
    }
}

/// Route the kernel parameters to the matching construction.
///
/// Supported regions: quadratic attraction (`a = 2`) with `-d < b < 2`
/// in any dimension, with the `c` family available on the line for
/// `b < 1`; even attraction exponents `a = 2k` with `b` below the
/// concentration threshold; and on the line `b = 2` with `a` in (2, 3).
pub fn build_state(a: f64, b: f64, d: u32, c: f64, mass: f64) -> Result<StateData, Error> {
    if d == 0 {
        return Err(Error::Domain("dimension must be at least 1"));
    }
    if !(mass.is_finite() && mass > 0.0) {
        return Err(Error::Domain("mass must be positive and finite"));
    }
    if c != 0.0 && !(a == 2.0 && d == 1) {
        return Err(Error::Unsupported(
            "the family weight applies only to quadratic attraction on the line",
        ));
    }
    if a == 2.0 && d == 1 {
        let state = steady1d::construct_a2(b, c, mass)?;
        // Interval profiles are nonnegative everywhere inside their
        // admitted parameter range, so they carry no validity flag.
        return Ok(StateData {
            a,
            b,
            d,
            mass,
            c,
            radius: state.radius(),
            coefficients: state
                .density()
                .terms()
                .iter()
                .map(|&(coeff, _)| coeff)
                .collect(),
            moments: vec![mass],
            energy: state.energy(),
            valid: true,
            density: state.density().clone(),
        });
    }
    let half = a / 2.0;
    if a > 0.0 && half.fract() == 0.0 {
        let k = half as u32;
        let state = steadyhd::construct_hd(k, b, d, mass)?;
        return Ok(StateData {
            a,
            b,
            d,
            mass,
            c,
            radius: state.radius(),
            coefficients: state.coefficients().to_vec(),
            moments: state.moments().to_vec(),
            energy: state.energy(),
            valid: state.is_valid(),
            density: state.density().clone(),
        });
    }
    if d == 1 && b == 2.0 && a > 2.0 && a < 3.0 {
        let state = steady1d::construct_b2(a, mass)?;
        return Ok(StateData {
            a,
            b,
            d,
            mass,
            c,
            radius: state.radius(),
            coefficients: state
                .density()
                .terms()
                .iter()
                .map(|&(coeff, _)| coeff)
                .collect(),
            moments: vec![mass],
            energy: state.energy(),
            valid: true,
            density: state.density().clone(),
        });
    }
    Err(Error::Unsupported(
        "no construction for these exponents; supported: a=2 with -d<b<2 (the c family on the line for b<1), even a=2k with b below the concentration threshold, and d=1, b=2 with 2<a<3",
    ))
}

/// Serialize the profile in the requested format.
pub fn render_profile(
    header: &ProfileHeader,
    radii: &[f64],
    values: &[f64],
    format: crate::Format,
) -> Result<String, Failure> {
    let header_json = serde_json::to_string(header)
        .map_err(|e| Failure::new(1, format!("serialization failed: {e}")))?;
    match format {
        crate::Format::Csv => {
            let mut out = String::new();
            out.push_str("# ");
            out.push_str(&header_json);
            out.push_str("\nr,rho\n");
            for (r, v) in radii.iter().zip(values) {
                out.push_str(&format!("{r},{v}\n"));
            }
            Ok(out)
        }
        crate::Format::Json => {
            let doc = serde_json::json!({
                "header": header,
                "r": radii,
                "rho": values,
            });
            let mut text = serde_json::to_string_pretty(&doc)
                .map_err(|e| Failure::new(1, format!("serialization failed: {e}")))?;
            text.push('\n');
            Ok(text)
        }
    }
}

/// Read back the header of a profile file in either format.
pub fn read_header(path: &std::path::Path) -> Result<ProfileHeader, Failure> {
    let text = std::fs::read_to_string(path).map_err(Failure::from_io)?;
    let trimmed = text.trim_start();
    if let Some(first) = trimmed.lines().next() {
        if let Some(stripped) = first.strip_prefix('#') {
            return serde_json::from_str(stripped.trim()).map_err(|e| {
                Failure::new(2, format!("malformed profile header in {}: {e}", path.display()))
            });
        }
    }
    if trimmed.starts_with('{') {
        let doc: serde_json::Value = serde_json::from_str(trimmed).map_err(|e| {
            Failure::new(2, format!("malformed profile file {}: {e}", path.display()))
        })?;
        let header = doc.get("header").cloned().ok_or_else(|| {
            Failure::new(2, format!("profile file {} has no header object", path.display()))
        })?;
        return serde_json::from_value(header).map_err(|e| {
            Failure::new(2, format!("malformed profile header in {}: {e}", path.display()))
        });
    }
    Err(Failure::new(
        2,
        format!("{} is not a profile file (expected '#' header line or JSON document)", path.display()),
    ))
}

/// Rebuild the density and kernel described by a header.
pub fn restore(header: &ProfileHeader) -> Result<(RadialDensity, PowerLawKernel), Failure> {
    let radius = header
        .radius
        .ok_or_else(|| Failure::new(2, "profile header lacks a support radius"))?;
    let density = RadialDensity::new(radius, header.terms.clone()).map_err(Failure::from_core)?;
    let kernel =
        PowerLawKernel::new(header.a, header.b, header.d, header.mass).map_err(Failure::from_core)?;
    Ok((density, kernel))
}
