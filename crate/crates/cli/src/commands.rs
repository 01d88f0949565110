//! Implementations of the six subcommands. Each returns the process
//! exit code on success and a [`Failure`] (message plus exit code) on
//! error, so `main` stays a thin dispatcher.

use aggsteady::fredholm1d::{
    check_identity_1d, finite_hilbert_reference, weight_family_exponents, IdentityOrder,
    WeightFamily,
};
use aggsteady::quadrature::{pv_integrate, PvMode};
use aggsteady::steady1d::{delta_pair_optimal, DeltaPair};
use aggsteady::steadyhd::fundamental_identity_check;
use aggsteady::verify::{energy_compare, euler_lagrange_report, particle_descent, Candidate};
use aggsteady::{PowerLawKernel, QuadratureSpec};
use serde::Serialize;

use crate::profile::{build_state, read_header, render_profile, restore};
use crate::{
    ConstructArgs, EnergyArgs, Failure, Format, IdentitiesArgs, ParticlesArgs, SweepArgs,
    VerifyArgs,
};

fn to_json<T: Serialize>(value: &T) -> Result<String, Failure> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| Failure::new(1, format!("serialization failed: {e}")))?;
    text.push('\n');
    Ok(text)
}

/// Format an optional float for a CSV cell: empty when absent.
fn csv_opt(value: Option<f64>) -> String {
    value.map(|v| v.to_string()).unwrap_or_default()
}

pub fn construct(args: &ConstructArgs) -> Result<u8, Failure> {
    let spec = crate::quadrature_spec()?;
    if args.samples < 2 {
        return Err(Failure::new(2, "--samples must be at least 2"));
    }
    let k = &args.kernel;
    let state = build_state(k.a, k.b, k.d, args.c, k.mass).map_err(Failure::from_core)?;
    let header = state.header(args.samples, spec.rel_tol);
    let n = args.samples as usize;
    let radii: Vec<f64> = (0..n)
        .map(|i| state.radius * i as f64 / (n - 1) as f64)
        .collect();
    let values: Vec<f64> = radii.iter().map(|&r| state.density.evaluate(r)).collect();
    let text = render_profile(&header, &radii, &values, args.format)?;
    crate::emit(&args.out, &text)?;
    Ok(0)
}

pub fn verify(args: &VerifyArgs) -> Result<u8, Failure> {
    let spec = crate::quadrature_spec()?;
    let header = read_header(&args.input)?;
    let (density, kernel) = restore(&header)?;
    let report =
        euler_lagrange_report(&density, &kernel, &spec).map_err(Failure::from_core)?;

    #[derive(Serialize)]
    struct ReportDoc {
        interior_constancy: f64,
        exterior_min_gap: f64,
        mass_error: f64,
        energy: f64,
        #[serde(rename = "lagrange_E")]
        lagrange_e: f64,
        min_density: f64,
        valid: bool,
    }
    let doc = ReportDoc {
        interior_constancy: report.interior_constancy,
        exterior_min_gap: report.exterior_min_gap,
        mass_error: report.mass_error,
        energy: report.energy,
        lagrange_e: report.lagrange_e,
        min_density: report.min_density,
        valid: report.valid,
    };
    crate::emit(&args.out, &to_json(&doc)?)?;
    Ok(if report.valid { 0 } else { 1 })
}

pub fn energy(args: &EnergyArgs) -> Result<u8, Failure> {
    let spec = crate::quadrature_spec()?;
    let k = &args.kernel;
    let state = build_state(k.a, k.b, k.d, args.c, k.mass).map_err(Failure::from_core)?;
    let kernel = PowerLawKernel::new(k.a, k.b, k.d, k.mass).map_err(Failure::from_core)?;
    let pair = DeltaPair::optimal(k.mass).map_err(Failure::from_core)?;
    let candidates = [
        Candidate::Profile("profile".into(), state.density.clone()),
        Candidate::PointPair("point-pair".into(), pair),
    ];
    let ranking = energy_compare(&kernel, &candidates, &spec).map_err(Failure::from_core)?;

    #[derive(Serialize)]
    struct EntryDoc {
        label: String,
        /// Interaction energy per unit mass; null when divergent.
        energy_per_mass: Option<f64>,
    }
    #[derive(Serialize)]
    struct EnergyDoc {
        a: f64,
        b: f64,
        d: u32,
        mass: f64,
        c: f64,
        entries: Vec<EntryDoc>,
    }
    let doc = EnergyDoc {
        a: k.a,
        b: k.b,
        d: k.d,
        mass: k.mass,
        c: args.c,
        entries: ranking
            .entries
            .into_iter()
            .map(|e| EntryDoc {
                label: e.label,
                energy_per_mass: e.energy,
            })
            .collect(),
    };
    crate::emit(&args.out, &to_json(&doc)?)?;
    Ok(0)
}

#[derive(Serialize)]
struct SweepRow {
    #[serde(skip_serializing_if = "Option::is_none")]
    a: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    b: Option<f64>,
    #[serde(rename = "R")]
    radius: Option<f64>,
    #[serde(rename = "E")]
    energy: Option<f64>,
    #[serde(rename = "E_delta")]
    e_delta: Option<f64>,
    rho_at_0: Option<f64>,
    valid: Option<bool>,
    status: String,
}

pub fn sweep(args: &SweepArgs) -> Result<u8, Failure> {
    let k = &args.kernel;
    let b_range = match (args.b_min, args.b_max) {
        (Some(lo), Some(hi)) => Some((lo, hi)),
        (None, None) => None,
        _ => return Err(Failure::new(2, "--b-min and --b-max must be given together")),
    };
    let a_range = match (args.a_min, args.a_max) {
        (Some(lo), Some(hi)) => Some((lo, hi)),
        (None, None) => None,
        _ => return Err(Failure::new(2, "--a-min and --a-max must be given together")),
    };
    let (sweep_b, (lo, hi)) = match (b_range, a_range) {
        (Some(_), Some(_)) => {
            return Err(Failure::new(2, "sweep either b or a, not both"));
        }
        (None, None) => {
            return Err(Failure::new(
                2,
                "give a sweep range: --b-min/--b-max or --a-min/--a-max",
            ));
        }
        (Some(range), None) => (true, range),
        (None, Some(range)) => (false, range),
    };

    let grid: Vec<f64> = match args.steps {
        0 => Vec::new(),
        1 => vec![lo],
        s => (0..s)
            .map(|i| lo + (hi - lo) * i as f64 / (s - 1) as f64)
            .collect(),
    };

    let mut rows = Vec::with_capacity(grid.len());
    for &v in &grid {
        let (a, b) = if sweep_b { (k.a, v) } else { (v, k.b) };
        let swept = |value: f64| -> (Option<f64>, Option<f64>) {
            if sweep_b {
                (None, Some(value))
            } else {
                (Some(value), None)
            }
        };
        let (col_a, col_b) = swept(v);
        // The closed-form two-atom energy, which diverges for b <= 0.
        let e_delta = if b > 0.0 {
            PowerLawKernel::new(a, b, k.d, k.mass)
                .ok()
                .and_then(|kernel| delta_pair_optimal(&kernel).ok())
                .map(|(_, e)| e)
        } else {
            None
        };
        match build_state(a, b, k.d, args.c, k.mass) {
            Ok(state) => rows.push(SweepRow {
                a: col_a,
                b: col_b,
                radius: Some(state.radius),
                energy: Some(state.energy),
                e_delta,
                rho_at_0: Some(state.density.evaluate(0.0)),
                valid: Some(state.valid),
                status: "ok".into(),
            }),
            Err(err) => rows.push(SweepRow {
                a: col_a,
                b: col_b,
                radius: None,
                energy: None,
                e_delta,
                rho_at_0: None,
                valid: None,
                status: err.to_string(),
            }),
        }
    }

    let text = match args.format {
        Format::Csv => {
            let mut out = String::new();
            out.push_str(if sweep_b {
                "b,R,E,E_delta,rho_at_0,valid,status\n"
            } else {
                "a,R,E,E_delta,rho_at_0,valid,status\n"
            });
            for row in &rows {
                let swept = row.b.or(row.a).unwrap_or(f64::NAN);
                out.push_str(&format!(
                    "{},{},{},{},{},{},{}\n",
                    swept,
                    csv_opt(row.radius),
                    csv_opt(row.energy),
                    csv_opt(row.e_delta),
                    csv_opt(row.rho_at_0),
                    row.valid.map(|v| v.to_string()).unwrap_or_default(),
                    row.status,
                ));
            }
            out
        }
        Format::Json => {
            #[derive(Serialize)]
            struct SweepDoc {
                #[serde(skip_serializing_if = "Option::is_none")]
                a: Option<f64>,
                #[serde(skip_serializing_if = "Option::is_none")]
                b: Option<f64>,
                d: u32,
                mass: f64,
                c: f64,
                steps: u32,
                rows: Vec<SweepRow>,
            }
            let doc = SweepDoc {
                // Echo the parameter held fixed; the swept one is in the rows.
                a: if sweep_b { Some(k.a) } else { None },
                b: if sweep_b { None } else { Some(k.b) },
                d: k.d,
                mass: k.mass,
                c: args.c,
                steps: args.steps,
                rows,
            };
            to_json(&doc)?
        }
    };
    crate::emit(&args.out, &text)?;
    Ok(0)
}

pub fn particles(args: &ParticlesArgs) -> Result<u8, Failure> {
    let k = &args.kernel;
    let kernel = PowerLawKernel::new(k.a, k.b, k.d, k.mass).map_err(Failure::from_core)?;
    let config =
        particle_descent(&kernel, args.n, args.seed, 0.5, args.steps).map_err(Failure::from_core)?;
    let continuum = build_state(k.a, k.b, k.d, 0.0, k.mass)
        .ok()
        .map(|state| state.radius);
    let empirical = config.empirical_radius();

    #[derive(Serialize)]
    struct ParticleDoc {
        #[serde(rename = "N")]
        n: u32,
        empirical_radius: f64,
        #[serde(rename = "continuum_R")]
        continuum_r: Option<f64>,
        relative_error: Option<f64>,
        iterations: u32,
        final_max_force: f64,
        converged: bool,
        seed: u64,
        a: f64,
        b: f64,
        d: u32,
        mass: f64,
    }
    let doc = ParticleDoc {
        n: args.n,
        empirical_radius: empirical,
        continuum_r: continuum,
        relative_error: continuum.map(|r| (empirical - r).abs() / r),
        iterations: config.iterations(),
        final_max_force: config.final_max_force(),
        converged: config.converged(),
        seed: args.seed,
        a: k.a,
        b: k.b,
        d: k.d,
        mass: k.mass,
    };
    crate::emit(&args.out, &to_json(&doc)?)?;
    Ok(if config.converged() { 0 } else { 1 })
}

/// Outcome of one identity evaluated over its sample grid.
#[derive(Serialize)]
struct IdentityLine {
    name: String,
    params: String,
    /// Closed-form value at the grid's reference point.
    expected: f64,
    max_rel_error: f64,
    pass: bool,
}

const IDENTITY_TOL: f64 = 1e-7;

fn rel_error(observed: f64, expected: f64) -> f64 {
    (observed - expected).abs() / expected.abs().max(f64::MIN_POSITIVE)
}

/// Evaluate one interval identity over a set of interior points; the
/// reported closed-form value is the one at the center.
fn interval_line(
    order: IdentityOrder,
    nu: f64,
    r: f64,
    spec: &QuadratureSpec,
    inject: bool,
) -> Result<IdentityLine, Failure> {
    let order_name = match order {
        IdentityOrder::Zeroth => 0,
        IdentityOrder::Second => 2,
    };
    let mut max_rel: f64 = 0.0;
    let mut center_value = f64::NAN;
    for &frac in &[-0.5, 0.0, 0.6] {
        let x = frac * r;
        let (value, mut rhs) =
            check_identity_1d(nu, r, x, order, spec).map_err(Failure::from_core)?;
        if inject {
            rhs = -rhs;
        }
        if frac == 0.0 {
            center_value = rhs;
        }
        max_rel = max_rel.max(rel_error(value, rhs));
    }
    Ok(IdentityLine {
        name: format!("interval kernel identity (order {order_name})"),
        params: format!("nu={nu}, R={r}"),
        expected: center_value,
        max_rel_error: max_rel,
        pass: max_rel < IDENTITY_TOL,
    })
}

/// Evaluate the constant ball-weight convolution identity in dimension d.
fn ball_line(b: f64, d: u32, spec: &QuadratureSpec) -> Result<IdentityLine, Failure> {
    let r = 1.3;
    let samples = [0.2 * r, 0.5 * r, 0.85 * r];
    let report = fundamental_identity_check(b, d, r, &samples, spec).map_err(Failure::from_core)?;
    Ok(IdentityLine {
        name: "ball weight identity".into(),
        params: format!("b={b}, d={d}"),
        expected: report.expected,
        max_rel_error: report.max_rel_error,
        pass: report.max_rel_error < IDENTITY_TOL,
    })
}

/// Compare one tabulated finite Hilbert transform against the numerical
/// principal-value integral of the same weight.
fn transform_line(
    family: WeightFamily,
    n: u32,
    nu: f64,
    r: f64,
    x: f64,
    spec: &QuadratureSpec,
) -> Result<IdentityLine, Failure> {
    let closed = finite_hilbert_reference(family, n, nu, r, x).map_err(Failure::from_core)?;
    let mut pv_spec = *spec;
    pv_spec.pv_mode = PvMode::SymmetricPair;
    let (lo_e, hi_e) = weight_family_exponents(family, n, nu);
    let numeric = pv_integrate(
        |p| p.from_lo.powf(lo_e) * p.from_hi.powf(hi_e),
        -r,
        r,
        x,
        &pv_spec,
    )
    .map_err(Failure::from_core)?;
    let rel = rel_error(numeric, closed);
    let family_name = match family {
        WeightFamily::EdgeRatio => "edge-ratio",
        WeightFamily::ShiftedEdge => "shifted-edge",
    };
    Ok(IdentityLine {
        name: format!("principal-value transform ({family_name}, order {n})"),
        params: format!("nu={nu}, R={r}, x={x}"),
        expected: closed,
        max_rel_error: rel,
        pass: rel < IDENTITY_TOL,
    })
}

fn full_identity_suite(spec: &QuadratureSpec, inject: bool) -> Result<Vec<IdentityLine>, Failure> {
    let mut lines = Vec::new();
    for &nu in &[-0.75, -0.25, 0.3, 0.8] {
        for &r in &[1.0, 1.4] {
            lines.push(interval_line(IdentityOrder::Zeroth, nu, r, spec, inject)?);
        }
    }
    for &nu in &[-2.4, -1.6, -0.5, 0.5] {
        for &r in &[1.0, 1.4] {
            lines.push(interval_line(IdentityOrder::Second, nu, r, spec, false)?);
        }
    }
    for d in 1..=3u32 {
        // The constant-convolution identity holds for b in (-d, 2-d);
        // probe near both ends.
        let lo = -(d as f64) + 0.25;
        let hi = 2.0 - d as f64 - 0.25;
        for &b in &[lo, hi] {
            lines.push(ball_line(b, d, spec)?);
        }
    }
    for family in [WeightFamily::EdgeRatio, WeightFamily::ShiftedEdge] {
        for n in 0..=2u32 {
            for &(nu, r, x) in &[(0.4, 1.3, 0.5), (0.7, 0.8, -0.3)] {
                lines.push(transform_line(family, n, nu, r, x, spec)?);
            }
        }
    }
    Ok(lines)
}

/// The reduced run behind `--nu`: just the interval identities whose
/// domain admits the requested exponent.
fn subset_identity_suite(
    nu: f64,
    r: f64,
    spec: &QuadratureSpec,
    inject: bool,
) -> Result<Vec<IdentityLine>, Failure> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Failure::new(2, "--r must be positive and finite"));
    }
    let mut lines = Vec::new();
    if nu > -1.0 && nu < 1.0 {
        lines.push(interval_line(IdentityOrder::Zeroth, nu, r, spec, inject)?);
    }
    if nu > -3.0 && nu < 1.0 && (core::f64::consts::PI * nu / 2.0).cos().abs() > 1e-12 {
        lines.push(interval_line(IdentityOrder::Second, nu, r, spec, false)?);
    }
    if lines.is_empty() {
        return Err(Failure::new(
            2,
            "no interval identity covers this nu; order 0 needs (-1,1), order 2 needs (-3,1)",
        ));
    }
    Ok(lines)
}

pub fn identities(args: &IdentitiesArgs) -> Result<u8, Failure> {
    let spec = crate::quadrature_spec()?;
    let lines = match args.nu {
        Some(nu) => subset_identity_suite(nu, args.r, &spec, args.inject_error)?,
        None => full_identity_suite(&spec, args.inject_error)?,
    };
    let failed = lines.iter().filter(|line| !line.pass).count();

    let text = match args.format {
        Format::Json => {
            #[derive(Serialize)]
            struct IdentityDoc {
                results: Vec<IdentityLine>,
                all_pass: bool,
            }
            to_json(&IdentityDoc {
                all_pass: failed == 0,
                results: lines,
            })?
        }
        Format::Csv => {
            let mut out = String::new();
            for line in &lines {
                out.push_str(&format!(
                    "{} {} [{}] expected={} max_rel_error={:.3e}\n",
                    if line.pass { "PASS" } else { "FAIL" },
                    line.name,
                    line.params,
                    line.expected,
                    line.max_rel_error,
                ));
            }
            out.push_str(&format!(
                "{} identities checked, {} failed\n",
                lines.len(),
                failed
            ));
            out
        }
    };
    crate::emit(&args.out, &text)?;
    Ok(if failed == 0 { 0 } else { 1 })
}
