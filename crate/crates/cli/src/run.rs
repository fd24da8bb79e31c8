//! One function per subcommand. Each validates its inputs, computes, and
//! writes its files into the configured output directory.

use std::path::PathBuf;

use qprot_core::classical::{
    lowest_elliptic, phase_portrait, reduce_to_resonance, separatrix_energy, PortraitGrid, ResonantModel,
};
use qprot_core::protection::{compact_phase_space, ProtectionMeasurements};
use qprot_core::rmt::{analyze, spacings_and_ratios, Histogram, ReferenceLaw, SpectralStatsReport};
use qprot_core::semiclassics::{
    solve_resonant_states, tunneling_curve, tunneling_floor, wkb_tunneling_with, ResonantStates, StateBoundary,
    StateGrid, TunnelingCurve,
};
use qprot_core::spectrum::{certified_spectrum, unfold};
use qprot_core::{Error, ProtectionReport, Spectrum};
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::error::{CliError, Result, Stage};
use crate::output::{Cell, Csv, OutputDir, SCHEMA_VERSION};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Spectrum,
    Stats,
    Portrait,
    Tunneling,
    States,
    Protect,
}

impl Command {
    pub const ALL: [Command; 6] = [
        Command::Spectrum,
        Command::Stats,
        Command::Portrait,
        Command::Tunneling,
        Command::States,
        Command::Protect,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Spectrum => "spectrum",
            Command::Stats => "stats",
            Command::Portrait => "portrait",
            Command::Tunneling => "tunneling",
            Command::States => "states",
            Command::Protect => "protect",
        }
    }
}

/// Runs `cmd` and returns the files it wrote. An incomplete protection
/// report is written first and then surfaces as [`CliError::Incomplete`].
pub fn run(cmd: Command, cfg: &RunConfig) -> Result<Vec<PathBuf>> {
    match cmd {
        Command::Spectrum => run_spectrum(cfg).map(|r| r.files),
        Command::Stats => run_stats(cfg).map(|r| r.files),
        Command::Portrait => run_portrait(cfg),
        Command::Tunneling => run_tunneling(cfg),
        Command::States => run_states(cfg),
        Command::Protect => {
            let (report, files) = run_protect(cfg)?;
            if report.complete {
                Ok(files)
            } else {
                Err(CliError::Incomplete(report.errors))
            }
        }
    }
}

fn header(cmd: Command, cfg: &RunConfig) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert("schema_version".into(), json!(SCHEMA_VERSION));
    m.insert("tool_version".into(), json!(TOOL_VERSION));
    m.insert("command".into(), json!(cmd.name()));
    m.insert("seed".into(), json!(cfg.seed()));
    m
}

// ---------------------------------------------------------------- spectrum

pub struct SpectrumRun {
    pub spectrum: Spectrum,
    pub warnings: Vec<String>,
    pub files: Vec<PathBuf>,
}

/// Identifies the inputs a stored spectrum was computed from.
fn spectrum_key(cfg: &RunConfig) -> Value {
    json!({
        "circuit": cfg.circuit,
        "basis": cfg.basis(),
        "convergence_tol": cfg.spectrum.convergence_tol,
        "max_levels": cfg.spectrum.max_levels,
    })
}

pub fn compute_spectrum(cfg: &RunConfig) -> Result<Spectrum> {
    let k = cfg.spectrum.max_levels.unwrap_or(usize::MAX);
    certified_spectrum(&cfg.circuit, &cfg.basis(), k, cfg.spectrum.convergence_tol, false).stage("spectrum")
}

fn level_warnings(cfg: &RunConfig, spectrum: &Spectrum) -> Vec<String> {
    let (have, want) = (spectrum.converged_count(), cfg.stats.level_count);
    if have < want {
        vec![format!("only {have} converged levels, fewer than stats.level_count = {want}")]
    } else {
        Vec::new()
    }
}

pub fn run_spectrum(cfg: &RunConfig) -> Result<SpectrumRun> {
    let out = OutputDir::prepare(&cfg.output_dir)?;
    let spectrum = compute_spectrum(cfg)?;
    let warnings = level_warnings(cfg, &spectrum);

    let mut csv = Csv::new(&["index", "energy_ghz", "converged"]);
    for (i, &e) in spectrum.levels().iter().enumerate() {
        csv.row(&[Cell::U(i), Cell::F(e), Cell::B(i < spectrum.converged_count())]);
    }
    let mut meta = header(Command::Spectrum, cfg);
    // Echo without the output location, so the files do not depend on where they are written.
    let mut echo = serde_json::to_value(cfg).expect("config serializes");
    echo.as_object_mut().expect("struct").remove("output_dir");
    meta.insert("config".into(), echo);
    meta.insert("spectrum_key".into(), spectrum_key(cfg));
    meta.insert("dimension".into(), json!(spectrum.dim()));
    meta.insert("level_count".into(), json!(spectrum.len()));
    meta.insert("converged_count".into(), json!(spectrum.converged_count()));
    meta.insert("warnings".into(), json!(warnings));

    let files = vec![out.write_csv("spectrum.csv", &csv)?, out.write_json("meta.json", &Value::Object(meta))?];
    Ok(SpectrumRun { spectrum, warnings, files })
}

/// A spectrum previously written to `out` by the same inputs, if any.
fn stored_spectrum(out: &OutputDir, cfg: &RunConfig) -> Option<Spectrum> {
    let meta: Value = serde_json::from_str(&std::fs::read_to_string(out.file("meta.json")).ok()?).ok()?;
    if meta.get("spectrum_key")? != &spectrum_key(cfg) {
        return None;
    }
    let text = std::fs::read_to_string(out.file("spectrum.csv")).ok()?;
    let mut levels = Vec::new();
    let mut converged = 0;
    for line in text.lines().skip(1) {
        let mut cells = line.split(',');
        let (_, e, flag) = (cells.next()?, cells.next()?, cells.next()?);
        levels.push(e.parse::<f64>().ok()?);
        if flag.parse::<bool>().ok()? {
            if converged + 1 != levels.len() {
                return None;
            }
            converged += 1;
        }
    }
    let mut s = Spectrum::from_levels(levels).ok()?;
    s.set_converged_count(converged);
    Some(s)
}

// ------------------------------------------------------------------- stats

pub struct StatsRun {
    pub report: SpectralStatsReport,
    pub converged_count: usize,
    pub levels_used: usize,
    pub unfolded_count: usize,
    pub warnings: Vec<String>,
    pub files: Vec<PathBuf>,
}

/// Spacing statistics of the lowest `stats.level_count` converged levels.
pub fn spectral_statistics(cfg: &RunConfig, spectrum: &Spectrum) -> Result<(SpectralStatsReport, usize, usize)> {
    let used = cfg.stats.level_count.min(spectrum.converged_count());
    let window = spectrum.truncated(used);
    let u = unfold(&window, cfg.stats.poly_degree, cfg.stats.trim_fraction).stage("stats")?;
    let ensemble = spacings_and_ratios(&u).stage("stats")?;
    let report = analyze(ensemble, cfg.stats.bins).stage("stats")?;
    Ok((report, used, u.len()))
}

fn histogram_csv(h: &Histogram) -> Csv {
    let mut csv = Csv::new(&["bin_lo", "bin_hi", "count", "density"]);
    for k in 0..h.bins() {
        csv.row(&[Cell::F(h.edges[k]), Cell::F(h.edges[k + 1]), Cell::U(h.counts[k] as usize), Cell::F(h.densities[k])]);
    }
    csv
}

fn histogram_json(h: &Histogram) -> Value {
    json!({
        "bins": h.bins(),
        "range": [h.edges[0], h.edges[h.bins()]],
        "in_range": h.counts.iter().sum::<u64>(),
        "outside": h.outside,
    })
}

fn reference_laws(q: f64) -> Value {
    let laws = [
        ReferenceLaw::PoissonSpacing,
        ReferenceLaw::WignerSpacing,
        ReferenceLaw::Brody(q),
        ReferenceLaw::PoissonRatioK1,
        ReferenceLaw::GoeRatioK1,
        ReferenceLaw::PoissonRatioK2,
        ReferenceLaw::GoeRatioK2,
    ];
    Value::Object(laws.iter().map(|l| (l.name().to_string(), json!(l.formula()))).collect())
}

pub fn run_stats(cfg: &RunConfig) -> Result<StatsRun> {
    let out = OutputDir::prepare(&cfg.output_dir)?;
    let spectrum = match stored_spectrum(&out, cfg) {
        Some(s) => s,
        None => compute_spectrum(cfg)?,
    };
    let warnings = level_warnings(cfg, &spectrum);
    let (r, used, unfolded) = spectral_statistics(cfg, &spectrum)?;

    let mut doc = header(Command::Stats, cfg);
    let e = &r.ensemble;
    let fields = json!({
        "source": "circuit",
        "converged_count": spectrum.converged_count(),
        "level_count": cfg.stats.level_count,
        "levels_used": used,
        "unfolding": {
            "poly_degree": cfg.stats.poly_degree,
            "trim_fraction": cfg.stats.trim_fraction,
            "unfolded_count": unfolded,
        },
        "spacing_count": e.spacings.len(),
        "degeneracies": e.degeneracies,
        "mean_spacing": e.mean_spacing(),
        "brody": { "q": r.brody.q, "nu": r.brody.nu, "residual": r.brody.residual, "bins": r.brody.bins },
        "ks_poisson": r.ks_poisson,
        "ks_wigner": r.ks_wigner,
        "ks_ratio_k1_poisson": r.ks_ratio_k1_poisson,
        "ks_ratio_k1_goe": r.ks_ratio_k1_goe,
        "mean_ratio_tilde": r.mean_ratio_tilde,
        "mean_ratio_tilde_k2": r.mean_ratio_tilde_k2,
        "histograms": {
            "spacing": histogram_json(&r.hist_spacing),
            "ratio_k1": histogram_json(&r.hist_ratio_k1),
            "ratio_k2": histogram_json(&r.hist_ratio_k2),
        },
        "reference_laws": reference_laws(r.brody.q),
        "warnings": warnings,
    });
    doc.extend(fields.as_object().expect("object literal").clone());

    let files = vec![
        out.write_json("stats.json", &Value::Object(doc))?,
        out.write_csv("hist_spacing.csv", &histogram_csv(&r.hist_spacing))?,
        out.write_csv("hist_ratio_k1.csv", &histogram_csv(&r.hist_ratio_k1))?,
        out.write_csv("hist_ratio_k2.csv", &histogram_csv(&r.hist_ratio_k2))?,
    ];
    Ok(StatsRun {
        converged_count: spectrum.converged_count(),
        levels_used: used,
        unfolded_count: unfolded,
        report: r,
        warnings,
        files,
    })
}

// -------------------------------------------------------------- semiclassics

pub fn reduce(cfg: &RunConfig) -> Result<ResonantModel> {
    reduce_to_resonance(&cfg.circuit, &cfg.selector, cfg.semiclassics.j).stage("reduction")
}

/// Elliptic energy and separatrix energy; the latter is `None` without a
/// hyperbolic point.
fn island(model: &ResonantModel) -> Result<(Option<f64>, Option<f64>)> {
    let ell = match lowest_elliptic(model) {
        Ok(p) => Some(p.energy),
        Err(Error::InvalidArgument(_)) => None,
        Err(e) => return Err(e).stage("fixed points"),
    };
    let sx = match separatrix_energy(model) {
        Ok(e) => Some(e),
        Err(Error::NoSeparatrix(_)) => None,
        Err(e) => return Err(e).stage("fixed points"),
    };
    Ok((ell, sx))
}

fn default_contour_energies(model: &ResonantModel, grid: &PortraitGrid) -> Result<Vec<f64>> {
    if let (Some(ell), Some(sx)) = island(model)? {
        let d = sx - ell;
        if d > 0.0 {
            return Ok(vec![ell + 0.25 * d, ell + 0.5 * d, ell + 0.75 * d, sx, sx + 0.5 * d]);
        }
    }
    let (lo, hi) = grid.phi_range;
    let v: Vec<f64> = (0..=256).map(|i| model.rest_energy(lo + (hi - lo) * i as f64 / 256.0)).collect();
    let vmin = v.iter().copied().fold(f64::INFINITY, f64::min);
    let vmax = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let span = vmax - vmin + model.alpha * grid.p_max * grid.p_max;
    Ok([0.1, 0.3, 0.5, 0.7, 0.9].iter().map(|f| vmin + f * span).collect())
}

pub fn run_portrait(cfg: &RunConfig) -> Result<Vec<PathBuf>> {
    let out = OutputDir::prepare(&cfg.output_dir)?;
    let model = reduce(cfg)?;
    let mut grid = PortraitGrid::default_for(&model);
    if let Some(n) = cfg.portrait.phi_points {
        grid.phi_points = n;
    }
    if let Some(n) = cfg.portrait.p_points {
        grid.p_points = n;
    }
    let energies = match &cfg.portrait.energies {
        Some(e) => e.clone(),
        None => default_contour_energies(&model, &grid)?,
    };
    let pp = phase_portrait(&model, grid, &energies).stage("portrait")?;
    let (ell, sx) = island(&model)?;

    let mut csv = Csv::new(&["contour", "energy", "polyline", "closed", "point", "phi", "p"]);
    let mut contours = Vec::new();
    for (ci, c) in pp.contours.iter().enumerate() {
        let mut lines = Vec::new();
        for (li, line) in c.polylines.iter().enumerate() {
            let closed = line.len() > 2 && line.first() == line.last();
            for (k, &(x, y)) in line.iter().enumerate() {
                csv.row(&[Cell::U(ci), Cell::F(c.energy), Cell::U(li), Cell::B(closed), Cell::U(k), Cell::F(x), Cell::F(y)]);
            }
            lines.push(json!({ "points": line.len(), "closed": closed }));
        }
        contours.push(json!({ "energy": c.energy, "polylines": lines }));
    }

    let mut doc = header(Command::Portrait, cfg);
    doc.extend(
        json!({
            "model": model,
            "grid": {
                "phi_range": [grid.phi_range.0, grid.phi_range.1],
                "p_max": grid.p_max,
                "phi_points": grid.phi_points,
                "p_points": grid.p_points,
            },
            "elliptic_energy": ell,
            "separatrix_energy": sx,
            "fixed_points": pp.fixed_points,
            "contours": contours,
        })
        .as_object()
        .expect("object literal")
        .clone(),
    );
    Ok(vec![
        out.write_csv("portrait_contours.csv", &csv)?,
        out.write_json("portrait.json", &Value::Object(doc))?,
    ])
}

pub fn compute_tunneling(cfg: &RunConfig, model: &ResonantModel) -> Result<TunnelingCurve> {
    let s = &cfg.semiclassics;
    tunneling_curve(model, s.tunneling_points, s.hbar_eff, s.formula).stage("tunneling")
}

pub fn run_tunneling(cfg: &RunConfig) -> Result<Vec<PathBuf>> {
    let out = OutputDir::prepare(&cfg.output_dir)?;
    let model = reduce(cfg)?;
    let curve = compute_tunneling(cfg, &model)?;
    let (ell, sx) = island(&model)?;

    let mut csv = Csv::new(&["energy", "probability"]);
    for (&e, &p) in curve.energies.iter().zip(&curve.probabilities) {
        csv.row(&[Cell::F(e), Cell::F(p)]);
    }
    let mut doc = header(Command::Tunneling, cfg);
    doc.extend(
        json!({
            "model": model,
            "hbar_eff": curve.hbar_eff,
            "formula": curve.formula,
            "points": curve.energies.len(),
            "floor_energy": tunneling_floor(&model).stage("tunneling")?,
            "elliptic_energy": ell,
            "separatrix_energy": sx,
        })
        .as_object()
        .expect("object literal")
        .clone(),
    );
    Ok(vec![out.write_csv("tunneling.csv", &csv)?, out.write_json("tunneling.json", &Value::Object(doc))?])
}

pub fn compute_states(cfg: &RunConfig, model: &ResonantModel) -> Result<ResonantStates> {
    let s = &cfg.semiclassics;
    let mut grid = StateGrid::default_for(model);
    if let Some(n) = s.state_points {
        grid.points = n;
    }
    if let (Some(h), StateBoundary::Box { .. }) = (s.state_halfwidth, grid.boundary) {
        grid.boundary = StateBoundary::Box { halfwidth: h };
    }
    solve_resonant_states(model, grid, s.state_count, s.hbar_eff).stage("states")
}

pub fn run_states(cfg: &RunConfig) -> Result<Vec<PathBuf>> {
    let out = OutputDir::prepare(&cfg.output_dir)?;
    let model = reduce(cfg)?;
    let st = compute_states(cfg, &model)?;

    let mut cols = vec!["phi".to_string(), "potential".to_string()];
    cols.extend((0..st.energies.len()).map(|k| format!("psi2_{k}")));
    let mut csv = Csv::new(&cols);
    let densities: Vec<Vec<f64>> = (0..st.energies.len()).map(|k| st.density(k)).collect();
    for (i, &x) in st.nodes.iter().enumerate() {
        let mut row = vec![Cell::F(x), Cell::F(st.potential[i])];
        row.extend(densities.iter().map(|d| Cell::F(d[i])));
        csv.row(&row);
    }
    let mut doc = header(Command::States, cfg);
    doc.extend(
        json!({
            "model": model,
            "hbar_eff": st.hbar_eff,
            "grid": st.grid,
            "spacing": st.spacing,
            "normalization": "spacing * sum(psi2) = 1",
            "energies": st.energies,
            "resolution_shift": st.resolution_shift,
        })
        .as_object()
        .expect("object literal")
        .clone(),
    );
    Ok(vec![out.write_csv("states.csv", &csv)?, out.write_json("states.json", &Value::Object(doc))?])
}

// -------------------------------------------------------------- protection

/// Island and tunneling measurements of the resonant model.
fn island_measurements(cfg: &RunConfig, m: &mut ProtectionMeasurements) -> Result<()> {
    let model = reduce(cfg)?;
    let (ell, sx) = island(&model)?;
    m.elliptic_energy = ell;
    let (Some(ell), Some(sx)) = (ell, sx) else {
        return Ok(());
    };
    m.island_depth = (sx - ell).max(0.0);
    let op = cfg.protection.operating_energy.unwrap_or(ell + cfg.protection.operating_fraction * m.island_depth);
    m.operating_energy = Some(op);
    let s = &cfg.semiclassics;
    let t = wkb_tunneling_with(&model, op, s.hbar_eff, s.formula).stage("tunneling")?;
    m.tunneling_at_operating_energy = Some(t.probability);
    Ok(())
}

pub fn protection_report(cfg: &RunConfig) -> ProtectionReport {
    let mut errors = Vec::new();
    let mut m = ProtectionMeasurements {
        brody_q: None,
        ks_poisson: None,
        island_depth: 0.0,
        elliptic_energy: None,
        operating_energy: None,
        tunneling_at_operating_energy: None,
        compact_phase_space: compact_phase_space(&cfg.circuit),
    };
    match compute_spectrum(cfg).and_then(|s| spectral_statistics(cfg, &s)) {
        Ok((r, _, _)) => {
            m.brody_q = Some(r.brody.q);
            m.ks_poisson = Some(r.ks_poisson);
        }
        Err(e) => errors.push(e.to_string()),
    }
    if let Err(e) = island_measurements(cfg, &mut m) {
        errors.push(e.to_string());
    }
    ProtectionReport::new(m, cfg.protection.thresholds, errors)
}

pub fn run_protect(cfg: &RunConfig) -> Result<(ProtectionReport, Vec<PathBuf>)> {
    let out = OutputDir::prepare(&cfg.output_dir)?;
    let report = protection_report(cfg);
    let mut doc = header(Command::Protect, cfg);
    doc.extend(serde_json::to_value(&report).expect("report serializes").as_object().expect("struct").clone());
    doc.insert("hbar_eff".into(), json!(cfg.semiclassics.hbar_eff));
    doc.insert("operating_fraction".into(), json!(cfg.protection.operating_fraction));
    let path = out.write_json("protection.json", &Value::Object(doc))?;
    Ok((report, vec![path]))
}
