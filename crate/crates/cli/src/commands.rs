use std::io::Write;

use fracml::dynamics::{
    classify_trajectory, find_homogeneous_equilibrium, linearize_at, simulate, sweep,
    write_sweep_csv, Axis, Coupling, EmpiricalVerdict, InitialCondition, MapTriple, SweepFamily,
    SweepGrid, SweepMode, SweepOptions, SystemSpec, DEFAULT_AMPLITUDE, DEFAULT_SEED,
    DEFAULT_WINDOW,
};
use fracml::spectra::{circulant_eigenvalues, dense_eigenvalues, DEFAULT_DENSE_TOL};
use fracml::stability::{
    asymmetric_region, boundary_beta, boundary_gamma, boundary_gamma_infinity,
    innermost_cardioid_index, symmetric_region, thermodynamic_region, AsymmetricRegion,
    BoundaryCurve, Quadrilateral, StabilityRegion, ThermoMode, ThermoRegion, DEFAULT_SAMPLES,
};
use fracml::{format_real, CirculantSpec, DenseMatrix, Spectrum, Status};

use crate::config::RunConfig;
use crate::{CliError, Exit};

const DEFAULT_BOUNDARY_SAMPLES: usize = 1024;
const DEFAULT_HORIZON: usize = 2000;

fn exit_for(status: Status) -> Exit {
    match status {
        Status::Stable => Exit::Stable,
        Status::Unstable => Exit::Unstable,
        Status::Marginal => Exit::Undecided,
    }
}

fn io(e: std::io::Error) -> CliError {
    CliError::runtime(format!("write failed: {e}"))
}

/// Reads a square matrix from CSV: one row per line, blank lines and lines
/// starting with `#` ignored.
pub fn read_matrix(path: &str) -> Result<DenseMatrix, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::usage(format!("cannot read matrix {path}: {e}")))?;
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let row = line
            .split(',')
            .map(|v| v.trim().parse::<f64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| CliError::usage(format!("matrix {path} line {}: {e}", i + 1)))?;
        rows.push(row);
    }
    DenseMatrix::from_rows(rows).map_err(|e| CliError::usage(format!("matrix {path}: {e}")))
}

/// Lattice described by the configuration, as either a linear coupling or a
/// map triple.
enum Lattice {
    Linear(Coupling),
    Maps(MapTriple),
}

fn lattice(cfg: &RunConfig, n: usize) -> Result<Lattice, CliError> {
    if let Some(path) = &cfg.matrix {
        let m = read_matrix(path)?;
        if cfg.n.is_some_and(|n| n != m.dim()) {
            return Err(CliError::usage(format!("--n {} does not match the {}x{} matrix", n, m.dim(), m.dim())));
        }
        return Ok(Lattice::Linear(Coupling::Matrix(m)));
    }
    let circ = |a0: f64, a1: f64, a2: f64| {
        CirculantSpec::new(a0, a1, a2, n)
            .map(|c| Lattice::Linear(Coupling::Circulant(c)))
            .map_err(|e| CliError::usage(e.to_string()))
    };
    match cfg.mode_or("circulant").as_str() {
        "circulant" => circ(
            cfg.value(cfg.a0, "a0")?,
            cfg.value(cfg.a1, "a1")?,
            cfg.value(cfg.a2, "a2")?,
        ),
        "symmetric" => {
            let a2 = cfg.value(cfg.a2, "a2")?;
            circ(a2, cfg.value(cfg.a1, "a1")?, a2)
        }
        "asymmetric" => {
            let a2 = cfg.value(cfg.a2, "a2")?;
            circ(-a2, cfg.value(cfg.a1, "a1")?, a2)
        }
        "logistic-cubic" => Ok(Lattice::Maps(MapTriple::logistic_cubic(
            cfg.value(cfg.mu, "mu")?,
            cfg.value(cfg.delta, "delta")?,
        ))),
        "logistic-circle" => Ok(Lattice::Maps(MapTriple::logistic_circle(
            cfg.value(cfg.mu, "mu")?,
            cfg.value(cfg.delta, "delta")?,
        ))),
        "coupled-logistic" => Ok(Lattice::Maps(MapTriple::coupled_logistic(
            cfg.value(cfg.mu, "mu")?,
            cfg.value(cfg.eps, "eps")?,
        ))),
        "maps" => cfg
            .maps
            .clone()
            .map(Lattice::Maps)
            .ok_or_else(|| CliError::usage("mode 'maps' needs a \"maps\" object in the config")),
        other => Err(CliError::usage(format!(
            "unknown mode '{other}': expected circulant, symmetric, asymmetric, logistic-cubic, logistic-circle, coupled-logistic or maps"
        ))),
    }
}

fn lattice_size(cfg: &RunConfig) -> Result<usize, CliError> {
    match &cfg.matrix {
        Some(path) => Ok(read_matrix(path)?.dim()),
        None => cfg.n(),
    }
}

pub fn classify(cfg: &RunConfig, out: &mut dyn Write, log: &mut dyn Write) -> Result<Exit, CliError> {
    let alpha = cfg.alpha()?;
    let n = lattice_size(cfg)?;
    let spectrum: Spectrum = match lattice(cfg, n)? {
        Lattice::Linear(Coupling::Circulant(c)) => circulant_eigenvalues(&c),
        Lattice::Linear(Coupling::Matrix(m)) => {
            dense_eigenvalues(&m, DEFAULT_DENSE_TOL).map_err(|e| CliError::runtime(e.to_string()))?
        }
        Lattice::Linear(Coupling::Maps(_)) => unreachable!("maps are handled below"),
        Lattice::Maps(maps) => {
            let guess = cfg.guess.unwrap_or(0.0);
            let eq = find_homogeneous_equilibrium(&maps, guess, 1e-12).map_err(|e| CliError::runtime(e.to_string()))?;
            let w = linearize_at(&maps, eq.x_star);
            writeln!(log, "equilibrium x*={} residual={:.1e} a0={} a1={} a2={}", eq.x_star, eq.residual, w.a0, w.a1, w.a2)
                .map_err(io)?;
            circulant_eigenvalues(&w.on_lattice(n).map_err(|e| CliError::usage(e.to_string()))?)
        }
    };
    let region = StabilityRegion::with_samples(alpha, cfg.samples.unwrap_or(DEFAULT_SAMPLES));
    let verdict = region.classify_spectrum(&spectrum).map_err(|e| CliError::runtime(e.to_string()))?;
    writeln!(out, "index,re,im,status,margin").map_err(io)?;
    for (i, z) in spectrum.canonical().iter().enumerate() {
        let v = region.classify(*z);
        writeln!(out, "{i},{},{},{},{}", format_real(z.re), format_real(z.im), v.status, format_real(v.margin)).map_err(io)?;
    }
    let witness = verdict.witness.map_or("none".to_string(), |w| {
        let sign = if w.im < 0.0 { '-' } else { '+' };
        format!("{:.7}{sign}{:.7}i", w.re + 0.0, w.im.abs())
    });
    writeln!(log, "verdict={} witness={} margin={:.3e}", verdict.status, witness, verdict.margin).map_err(io)?;
    Ok(exit_for(verdict.status))
}

fn write_curve(out: &mut dyn Write, curve: &BoundaryCurve) -> Result<(), CliError> {
    writeln!(out, "t,x,y").map_err(io)?;
    for (t, (x, y)) in curve.t.iter().zip(&curve.points) {
        writeln!(out, "{},{},{}", format_real(*t), format_real(*x), format_real(*y)).map_err(io)?;
    }
    Ok(())
}

pub fn boundary(cfg: &RunConfig, out: &mut dyn Write) -> Result<Exit, CliError> {
    let alpha = cfg.alpha()?;
    let m = cfg.samples.unwrap_or(DEFAULT_BOUNDARY_SAMPLES);
    let curve = if cfg.gamma.unwrap_or(false) {
        match cfg.n {
            None => boundary_gamma_infinity(alpha, m),
            Some(n) => {
                let j = match cfg.j {
                    Some(j) => j,
                    None => innermost_cardioid_index(n).map_err(|e| CliError::usage(e.to_string()))?,
                };
                boundary_gamma(alpha, n, j, m)
            }
        }
    } else {
        boundary_beta(alpha, m)
    }
    .map_err(|e| CliError::usage(e.to_string()))?;
    write_curve(out, &curve)?;
    Ok(Exit::Stable)
}

fn write_quadrilateral(out: &mut dyn Write, q: &Quadrilateral) -> Result<(), CliError> {
    writeln!(out, "kind,label,a2,a1").map_err(io)?;
    for (label, (a2, a1)) in q.labels().iter().zip(q.vertices()) {
        writeln!(out, "vertex,{label},{},{}", format_real(a2), format_real(a1)).map_err(io)?;
    }
    Ok(())
}

fn write_asymmetric(out: &mut dyn Write, r: &AsymmetricRegion, samples: usize) -> Result<(), CliError> {
    writeln!(out, "kind,label,a1,a2").map_err(io)?;
    let iv = r.interval();
    writeln!(out, "interval,lo,{},{}", format_real(iv.lo), format_real(0.0)).map_err(io)?;
    writeln!(out, "interval,hi,{},{}", format_real(iv.hi), format_real(0.0)).map_err(io)?;
    if let Some(((x0, y0), (x1, y1))) = r.line_segment() {
        writeln!(out, "segment,start,{},{}", format_real(x0), format_real(y0)).map_err(io)?;
        writeln!(out, "segment,end,{},{}", format_real(x1), format_real(y1)).map_err(io)?;
    }
    if let Some(curve) = r.boundary(samples) {
        let curve = curve.map_err(|e| CliError::usage(e.to_string()))?;
        // only the part left of a1 = 1 bounds the region
        for (i, (x, y)) in curve.points.iter().enumerate().filter(|(_, p)| p.0 <= 1.0) {
            writeln!(out, "cardioid,{i},{},{}", format_real(*x), format_real(*y)).map_err(io)?;
        }
    }
    Ok(())
}

pub fn region(cfg: &RunConfig, out: &mut dyn Write) -> Result<Exit, CliError> {
    let alpha = cfg.alpha()?;
    let samples = cfg.samples.unwrap_or(DEFAULT_BOUNDARY_SAMPLES);
    match cfg.mode_or("symmetric").as_str() {
        "symmetric" => {
            let r = symmetric_region(alpha, cfg.n()?).map_err(|e| CliError::usage(e.to_string()))?;
            write_quadrilateral(out, r.quadrilateral())?;
        }
        "asymmetric" => {
            let r = asymmetric_region(alpha, cfg.n()?).map_err(|e| CliError::usage(e.to_string()))?;
            write_asymmetric(out, &r, samples)?;
        }
        "thermo-symmetric" => match thermodynamic_region(alpha, ThermoMode::Symmetric) {
            ThermoRegion::Symmetric(r) => write_quadrilateral(out, r.quadrilateral())?,
            ThermoRegion::Asymmetric(_) => unreachable!(),
        },
        "thermo-asymmetric" => match thermodynamic_region(alpha, ThermoMode::Asymmetric) {
            ThermoRegion::Asymmetric(r) => write_asymmetric(out, &r, samples)?,
            ThermoRegion::Symmetric(_) => unreachable!(),
        },
        other => {
            return Err(CliError::usage(format!(
                "unknown region mode '{other}': expected symmetric, asymmetric, thermo-symmetric or thermo-asymmetric"
            )))
        }
    }
    Ok(Exit::Stable)
}

pub fn simulate_cmd(cfg: &RunConfig, out: &mut dyn Write, log: &mut dyn Write) -> Result<Exit, CliError> {
    let alpha = cfg.alpha()?;
    let n = lattice_size(cfg)?;
    let coupling = match lattice(cfg, n)? {
        Lattice::Linear(c) => c,
        Lattice::Maps(m) => Coupling::Maps(m),
    };
    let target = cfg.target.unwrap_or(0.0);
    let initial = match &cfg.initial {
        Some(values) => InitialCondition::Explicit { values: values.clone() },
        None => InitialCondition::Perturbation {
            base: cfg.base.unwrap_or(target),
            amplitude: cfg.amplitude.unwrap_or(DEFAULT_AMPLITUDE),
            seed: cfg.seed.unwrap_or(DEFAULT_SEED),
        },
    };
    let mut spec = SystemSpec::new(alpha, n, coupling, initial, cfg.horizon.unwrap_or(DEFAULT_HORIZON));
    if let Some(c) = cfg.cutoff {
        spec.cutoff = c;
    }
    let traj = simulate(&spec).map_err(|e| CliError::usage(e.to_string()))?;
    traj.write_csv(&mut *out).map_err(io)?;

    let reference = vec![target; n];
    let window = cfg.window.unwrap_or(DEFAULT_WINDOW).min(traj.horizon() / 4);
    let verdict = if traj.diverged() {
        EmpiricalVerdict::Diverged
    } else if window == 0 {
        EmpiricalVerdict::Inconclusive
    } else {
        classify_trajectory(&traj, window, Some(&reference)).map_err(|e| CliError::runtime(e.to_string()))?
    };
    let amplitude = traj.last().iter().map(|x| (x - target).abs()).fold(0.0f64, f64::max);
    writeln!(
        log,
        "verdict={verdict} final_amplitude={amplitude:.6e} steps={} diverged={}",
        traj.horizon(),
        traj.diverged()
    )
    .map_err(io)?;
    Ok(match verdict {
        EmpiricalVerdict::Decaying => Exit::Stable,
        EmpiricalVerdict::Growing | EmpiricalVerdict::Diverged => Exit::Unstable,
        EmpiricalVerdict::Inconclusive => Exit::Undecided,
    })
}

fn axis(a: Option<Axis>, flag: &str) -> Result<Axis, CliError> {
    let a = a.ok_or_else(|| CliError::usage(format!("--{flag} lo:hi:count is required")))?;
    Axis::new(a.lo, a.hi, a.count).map_err(|e| CliError::usage(format!("--{flag}: {e}")))
}

fn thread_cap() -> Result<Option<usize>, CliError> {
    match std::env::var("FRACML_THREADS") {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(0) | Err(_) => Err(CliError::usage(format!("FRACML_THREADS must be a positive integer, got '{v}'"))),
            Ok(k) => Ok(Some(k)),
        },
    }
}

pub fn sweep_cmd(cfg: &RunConfig, out: &mut dyn Write, log: &mut dyn Write) -> Result<Exit, CliError> {
    let alpha = cfg.alpha()?;
    let n = cfg.n()?;
    let family = match cfg.mode_or("symmetric").as_str() {
        "symmetric" => SweepFamily::Symmetric,
        "asymmetric" => SweepFamily::Asymmetric,
        "logistic-cubic" => SweepFamily::LogisticCubic,
        "logistic-circle" => SweepFamily::LogisticCircle,
        "coupled-logistic" => SweepFamily::CoupledLogistic,
        other => {
            return Err(CliError::usage(format!(
                "unknown sweep mode '{other}': expected symmetric, asymmetric, logistic-cubic, logistic-circle or coupled-logistic"
            )))
        }
    };
    let grid = SweepGrid {
        p1: axis(cfg.p1, "p1")?,
        p2: axis(cfg.p2, "p2")?,
    };
    let mode = if cfg.simulate.unwrap_or(false) {
        SweepMode::Both
    } else {
        SweepMode::Analytic
    };
    let mut opts = SweepOptions::new(alpha, n, family, mode);
    opts.horizon = cfg.horizon.unwrap_or(opts.horizon);
    opts.window = cfg.window.unwrap_or(opts.window);
    opts.amplitude = cfg.amplitude.unwrap_or(opts.amplitude);
    opts.seed = cfg.seed.unwrap_or(opts.seed);
    opts.samples = cfg.samples.unwrap_or(opts.samples);

    let pool = {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(k) = thread_cap()? {
            b = b.num_threads(k);
        }
        b.build().map_err(|e| CliError::runtime(e.to_string()))?
    };
    let cells = pool
        .install(|| sweep(&grid, &opts))
        .map_err(|e| CliError::usage(e.to_string()))?;
    write_sweep_csv(&mut *out, &cells).map_err(io)?;
    let stable = cells
        .iter()
        .filter(|c| c.analytic.is_some_and(|v| v.status == Status::Stable))
        .count();
    let (x, y) = family.axis_names();
    writeln!(log, "cells={} stable={stable} p1={x} p2={y}", cells.len()).map_err(io)?;
    Ok(Exit::Stable)
}
