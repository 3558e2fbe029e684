use std::f64::consts::TAU;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use log::info;
use qshear_core::suite::{self, SuiteConfig};
use qshear_core::verify::boundary_polyline;
use qshear_core::{
    check_cdr_criterion, check_convex_real_direction, check_half_plane_range, check_qth, check_sense_preserving,
    check_th1, check_univalence_boundary, combine, preset, q_shear, CombinationSpec, Complex64, HarmonicMap, Preset,
    ShearConvention, TruncatedSeries, VerificationReport,
};
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::args::{
    CombineArgs, CombineCheck, ConstructArgs, MapSource, RenderArgs, RenderFormat, ReportArgs, VerifyArgs, VerifyCheck,
};
use crate::config::{validate_t, RunConfig};
use crate::error::{CliError, CliResult};
use crate::output::{emit, to_json, Curve, Drawing, Sample};

fn read_json<T: DeserializeOwned>(path: &Path, what: &str) -> CliResult<T> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Config(format!("invalid {what} in {}: {e}", path.display())))
}

fn parse_preset(name: &str) -> CliResult<Preset> {
    Ok(Preset::from_str(name.trim())?)
}

fn load_map(source: &MapSource, cfg: &RunConfig) -> CliResult<HarmonicMap> {
    match (&source.preset, &source.map) {
        (Some(name), _) => Ok(preset(parse_preset(name)?, cfg.q, cfg.order)?),
        (None, Some(path)) => read_json(path, "map"),
        (None, None) => Err(CliError::Config("give --preset or --map".into())),
    }
}

fn fail_on(reports: &[&VerificationReport]) -> CliResult<()> {
    match reports.iter().find(|r| !r.pass) {
        Some(r) => Err(CliError::CheckFailed(r.check.clone())),
        None => Ok(()),
    }
}

pub fn construct(args: &ConstructArgs) -> CliResult<()> {
    let cfg = RunConfig::from_common("construct", &args.common)?;
    let map = match (&args.preset, &args.source, &args.dilatation) {
        (Some(name), _, _) => preset(parse_preset(name)?, cfg.q, cfg.order)?,
        (None, Some(src), Some(dil)) => {
            let convention = ShearConvention::from_str(&args.convention).map_err(CliError::Config)?;
            let mut f: TruncatedSeries = read_json(src, "series")?;
            let mut omega: TruncatedSeries = read_json(dil, "series")?;
            if args.common.order.is_some() {
                f = f.resized(cfg.order);
                omega = omega.resized(cfg.order);
            }
            let sheared = q_shear(&f, &omega, cfg.q, convention)?;
            eprintln!("max |omega| on the default grid: {:.6}", sheared.max_abs_omega);
            sheared.map
        }
        _ => return Err(CliError::Config("give --preset, or both --source and --dilatation".into())),
    };
    eprintln!("normalization: h(0) = {}, g(0) = {}, h'(0) = {}", map.h().coeff(0), map.g().coeff(0), map.h().coeff(1));
    emit(cfg.out.as_deref(), cfg.command, "json", &to_json(&map)?)
}

#[derive(Serialize)]
struct CombineRun {
    t: Option<f64>,
    weights: Vec<f64>,
    map: HarmonicMap,
    reports: Vec<VerificationReport>,
}

#[derive(Serialize)]
struct CombineDoc {
    runs: Vec<CombineRun>,
}

pub fn combine_cmd(args: &CombineArgs) -> CliResult<()> {
    let cfg = RunConfig::from_common("combine", &args.common)?;
    let maps: Vec<HarmonicMap> = if args.presets.is_empty() {
        args.maps.iter().map(|p| read_json(p, "map")).collect::<CliResult<_>>()?
    } else {
        args.presets.iter().map(|name| Ok(preset(parse_preset(name)?, cfg.q, cfg.order)?)).collect::<CliResult<_>>()?
    };
    if maps.len() < 2 {
        return Err(CliError::Config(format!("combine needs at least two maps, got {}", maps.len())));
    }

    // (t, weights) for every run
    let plan: Vec<(Option<f64>, Vec<f64>)> = if !args.weights.is_empty() {
        vec![(None, args.weights.clone())]
    } else {
        if maps.len() != 2 {
            return Err(CliError::Config("--t and --t-sweep combine exactly two maps; use --weights".into()));
        }
        let ts = match args.t_sweep {
            Some(n) if n > 0 => suite::t_sweep(n),
            Some(_) => return Err(CliError::Config("--t-sweep needs at least one value".into())),
            None if args.t.is_empty() => vec![0.5],
            None => args.t.clone(),
        };
        validate_t(&ts)?;
        ts.into_iter().map(|t| (Some(t), vec![t, 1.0 - t])).collect()
    };
    if args.check == CombineCheck::Qth && maps.len() != 2 {
        return Err(CliError::Config("--check qth applies to exactly two maps".into()));
    }

    let grid = cfg.grid()?;
    let mut runs = Vec::with_capacity(plan.len());
    for (t, weights) in plan {
        let spec = CombinationSpec::new(maps.clone(), weights.clone())?;
        let map = combine(&spec)?;
        let reports = match args.check {
            CombineCheck::Th1 => vec![check_th1(&spec, cfg.theta, &grid, cfg.tol)?],
            CombineCheck::Qth => vec![check_qth(&maps[0], &maps[1], weights[0], &grid, cfg.tol)?],
            CombineCheck::None => Vec::new(),
        };
        let label = t.map_or_else(|| format!("weights={weights:?}"), |t| format!("t={t}"));
        match reports.first() {
            Some(r) => eprintln!("{label} {} pass={} value={:e}", r.check, r.pass, r.extremal.value),
            None => eprintln!("{label} combined"),
        }
        runs.push(CombineRun { t, weights, map, reports });
    }
    let doc = CombineDoc { runs };
    emit(cfg.out.as_deref(), cfg.command, "json", &to_json(&doc)?)?;
    fail_on(&doc.runs.iter().flat_map(|r| &r.reports).collect::<Vec<_>>())
}

#[derive(Serialize)]
struct ReportsDoc<'a> {
    map: &'a str,
    reports: Vec<VerificationReport>,
}

pub fn verify(args: &VerifyArgs) -> CliResult<()> {
    let cfg = RunConfig::from_common("verify", &args.common)?;
    let map = load_map(&args.source, &cfg)?;
    let grid = cfg.grid()?;
    let mut reports = Vec::new();
    for check in &args.checks {
        let report = match check {
            VerifyCheck::Sense => check_sense_preserving(&map, &grid, cfg.tol),
            VerifyCheck::Univalence => check_univalence_boundary(&map, cfg.radius, cfg.samples, cfg.tol)?,
            VerifyCheck::Convexity => check_convex_real_direction(&map, cfg.radius, cfg.samples, args.levels, cfg.tol)?,
            VerifyCheck::Range => check_half_plane_range(&map, &grid, cfg.tol),
            VerifyCheck::Cdr => check_cdr_criterion(&map.analytic_difference(), map.q(), cfg.theta, &grid, cfg.tol)?,
        };
        eprintln!("{} pass={} value={:e}", report.check, report.pass, report.extremal.value);
        reports.push(report);
    }
    let doc = ReportsDoc { map: map.provenance(), reports };
    emit(cfg.out.as_deref(), cfg.command, "json", &to_json(&doc)?)?;
    fail_on(&doc.reports.iter().collect::<Vec<_>>())
}

/// Sample the images of `circles` circles and `radials` radial segments.
pub fn drawing(
    map: &HarmonicMap,
    radius: f64,
    samples: usize,
    circles: usize,
    radials: usize,
    radial_samples: usize,
) -> Drawing {
    let sample = |z: Complex64| {
        let w = map.eval(z);
        Sample { r: z.norm(), theta: z.arg().rem_euclid(TAU), re: w.re, im: w.im }
    };
    let circles = (1..=circles)
        .map(|i| {
            let r = radius * i as f64 / circles as f64;
            // the same points as the boundary polyline used by the checks
            let points = boundary_polyline(map, r, samples)
                .into_iter()
                .enumerate()
                .map(|(k, w)| Sample { r, theta: TAU * k as f64 / samples as f64, re: w.re, im: w.im })
                .collect();
            Curve { param: r, points }
        })
        .collect();
    let radials = (0..radials)
        .map(|j| {
            let theta = TAU * j as f64 / radials as f64;
            let points = (0..radial_samples)
                .map(|k| {
                    let r = radius * k as f64 / (radial_samples - 1).max(1) as f64;
                    Sample { theta, ..sample(Complex64::from_polar(r, theta)) }
                })
                .collect();
            Curve { param: theta, points }
        })
        .collect();
    Drawing { circles, radials }
}

pub fn render(args: &RenderArgs) -> CliResult<()> {
    let cfg = RunConfig::from_common("render", &args.common)?;
    if args.circles == 0 || cfg.samples < 3 {
        return Err(CliError::Config("--circles must be positive and --samples at least 3".into()));
    }
    if args.radials > 0 && args.radial_samples < 2 {
        return Err(CliError::Config("--radial-samples must be at least 2".into()));
    }
    let map = load_map(&args.source, &cfg)?;
    let d = drawing(&map, cfg.radius, cfg.samples, args.circles, args.radials, args.radial_samples);
    let body = match args.format {
        RenderFormat::Svg => d.to_svg(),
        RenderFormat::Csv => d.to_csv(),
        RenderFormat::Json => to_json(&d)?,
    };
    info!("rendered {} circles and {} radial segments", d.circles.len(), d.radials.len());
    emit(cfg.out.as_deref(), cfg.command, args.format.extension(), &body)
}

pub fn report(args: &ReportArgs) -> CliResult<()> {
    let cfg = RunConfig::from_common("report", &args.common)?;
    let t_values = if args.t.is_empty() { suite::t_sweep(args.t_sweep) } else { args.t.clone() };
    validate_t(&t_values)?;
    let config = SuiteConfig {
        t_values,
        theta: cfg.theta,
        order: cfg.order,
        grid: cfg.grid()?,
        tol: cfg.tol,
        ..SuiteConfig::new(cfg.q)
    };
    let report = suite::run(&config)?;
    emit(cfg.out.as_deref(), cfg.command, "json", &to_json(&report)?)?;
    let claims = report.checks.iter().filter(|e| e.claim).count();
    let failed = report.checks.iter().filter(|e| e.claim && !e.report.pass).count();
    eprintln!("{} claim checks, {} failed", claims, failed);
    match report.first_failure {
        Some(check) => Err(CliError::CheckFailed(check)),
        None => Ok(()),
    }
}
