//! Subcommand implementations. Each returns the files it wrote and any
//! non-fatal warnings; failures carry their exit code in [`CliError`].

use crate::config::{LyapunovSection, RunConfig, WindingSection};
use crate::format::{csv_f, csv_opt, csv_text, json_f};
use crate::manifest::RunManifest;
use crate::svg::{boundary_overlays, render_heatmap, QUANTITIES};
use crate::CliError;
use fqc_core::{Boundary, DriveConfig, LatticeConfig, ModelId, ModelSpec, Warning, C64};
use fqc_floquet_validate::{minimum_steps, unitarity_defect, validate_high_frequency};
use fqc_hamiltonian::{build_real_space, HamiltonianError};
use fqc_observables::{
    classify_phase, lyapunov_analytic, lyapunov_transfer_matrix, mobility_edge_m5, spectrum_report, ObservablesError,
};
use fqc_scan::{run_scan, PhaseGrid};
use fqc_winding::{default_m5_offset, m4_bases, winding_numbers, WindingOptions};
use serde_json::{json, Value};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

/// Output encoding for single-point subcommands.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

/// What a successful subcommand produced.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Outcome {
    pub outputs: Vec<PathBuf>,
    pub warnings: Vec<String>,
}

/// Shared inputs of every subcommand.
#[derive(Debug, Clone)]
pub struct Request {
    pub config_path: PathBuf,
    /// Output file (or directory for `scan`); standard output when absent.
    pub out: Option<PathBuf>,
}

struct Loaded {
    cfg: RunConfig,
    text: String,
    started: Instant,
}

fn load(req: &Request) -> Result<Loaded, CliError> {
    let started = Instant::now();
    let (cfg, text) = RunConfig::load(&req.config_path)?;
    Ok(Loaded { cfg, text, started })
}

fn resolve(cfg: &RunConfig) -> Result<(ModelSpec, LatticeConfig, DriveConfig, Vec<String>), CliError> {
    let spec = cfg.model_spec()?;
    let lattice = cfg.lattice_config()?;
    let drive = cfg.drive_config()?;
    let warnings = spec
        .validate()?
        .into_iter()
        .map(|w| match w {
            Warning::ZeroHopping => "J = 0: the Hamiltonian is diagonal".to_string(),
        })
        .collect();
    Ok((spec, lattice, drive, warnings))
}

fn boundary_text(b: Boundary) -> String {
    match b {
        Boundary::Open => "open".into(),
        Boundary::Periodic => "periodic".into(),
        Boundary::Twisted(theta) => format!("twisted({})", csv_f(theta)),
    }
}

fn header_lines(spec: &ModelSpec, lattice: &LatticeConfig, drive: &DriveConfig) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "# model = {}, J = {}, V = {}, gamma = {}, eta = {}",
        spec.model,
        csv_f(spec.j),
        csv_f(spec.v),
        csv_f(spec.gamma),
        csv_f(spec.eta)
    );
    let _ = writeln!(
        s,
        "# lattice: L = {}, alpha = {}/{}, boundary = {}",
        lattice.l,
        lattice.alpha_num,
        lattice.alpha_den,
        boundary_text(lattice.boundary)
    );
    let _ = writeln!(
        s,
        "# drive: K/omega = {}, dressed hopping J*J0(K/omega) = {}",
        csv_f(drive.k_over_omega),
        csv_f(spec.dressed_hopping(drive.k_over_omega))
    );
    s
}

fn params_json(spec: &ModelSpec, lattice: &LatticeConfig, drive: &DriveConfig) -> Value {
    json!({
        "model": spec.model.to_string(),
        "J": json_f(spec.j),
        "V": json_f(spec.v),
        "gamma": json_f(spec.gamma),
        "eta": json_f(spec.eta),
        "L": lattice.l,
        "alpha": format!("{}/{}", lattice.alpha_num, lattice.alpha_den),
        "boundary": boundary_text(lattice.boundary),
        "K_over_omega": json_f(drive.k_over_omega),
        "omega": drive.omega.map_or(Value::Null, json_f),
        "dressed_hopping": json_f(spec.dressed_hopping(drive.k_over_omega)),
    })
}

/// Writes `text` to `out`, or to standard output when `out` is absent.
fn emit(out: Option<&Path>, text: &str) -> Result<Option<PathBuf>, CliError> {
    match out {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir.display(), e))?;
            }
            std::fs::write(path, text).map_err(|e| CliError::io(path.display(), e))?;
            Ok(Some(path.to_path_buf()))
        }
        None => {
            print!("{text}");
            Ok(None)
        }
    }
}

fn json_text(value: &Value) -> String {
    serde_json::to_string_pretty(value).expect("JSON values always serialize") + "\n"
}

/// Writes the output and, next to it, a manifest `<stem>.manifest.json`.
fn finish(
    subcommand: &str,
    loaded: &Loaded,
    out: Option<&Path>,
    text: &str,
    warnings: Vec<String>,
) -> Result<Outcome, CliError> {
    let written = emit(out, text)?;
    let mut outcome = Outcome { outputs: written.into_iter().collect(), warnings };
    if let Some(path) = out {
        let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "output".into());
        let manifest_path = path.with_file_name(format!("{stem}.manifest.json"));
        let mut manifest = RunManifest::new(subcommand, &loaded.text, loaded.cfg.to_toml());
        manifest.outputs = outcome.outputs.clone();
        manifest.warnings = outcome.warnings.clone();
        manifest.wall_time_s = loaded.started.elapsed().as_secs_f64();
        manifest.write(&manifest_path)?;
        outcome.outputs.push(manifest_path);
    }
    Ok(outcome)
}

/// Eigenvalues, IPRs and summary statistics of the effective Hamiltonian.
pub fn cmd_spectrum(req: &Request, format: OutputFormat) -> Result<Outcome, CliError> {
    let loaded = load(req)?;
    let (spec, lattice, drive, warnings) = resolve(&loaded.cfg)?;
    let h = build_real_space(&spec, &lattice, &drive).map_err(|e| CliError::numerical("spectrum: building H_F", e))?;
    let report = spectrum_report(&h.matrix, true).map_err(|e| CliError::numerical("spectrum: diagonalizing H_F", e))?;
    let phase = classify_phase(&spec, &drive, &report);
    let text = match format {
        OutputFormat::Csv => {
            let mut s = String::from("# floquet-qc spectrum\n");
            s += &header_lines(&spec, &lattice, &drive);
            let _ = writeln!(
                s,
                "# max_abs_im = {}, min_ipr = {}, max_ipr = {}, phase = {}",
                csv_f(report.max_abs_im),
                csv_opt(report.min_ipr),
                csv_opt(report.max_ipr),
                phase.phase
            );
            s += "index,re_E,im_E,ipr\n";
            for (k, e) in report.eigenvalues.iter().enumerate() {
                let _ = writeln!(s, "{k},{},{},{}", csv_f(e.re), csv_f(e.im), csv_opt(report.iprs.get(k).copied()));
            }
            s
        }
        OutputFormat::Json => {
            let eigenvalues: Vec<Value> = report
                .eigenvalues
                .iter()
                .enumerate()
                .map(|(k, e)| {
                    json!({"index": k, "re": json_f(e.re), "im": json_f(e.im), "ipr": report.iprs.get(k).map_or(Value::Null, |&p| json_f(p))})
                })
                .collect();
            json_text(&json!({
                "schema_version": 1,
                "kind": "spectrum",
                "parameters": params_json(&spec, &lattice, &drive),
                "summary": {
                    "max_abs_im": json_f(report.max_abs_im),
                    "min_ipr": report.min_ipr.map_or(Value::Null, json_f),
                    "max_ipr": report.max_ipr.map_or(Value::Null, json_f),
                    "phase": phase.phase.to_string(),
                    "sign_sum": phase.sign_sum,
                },
                "eigenvalues": eigenvalues,
            }))
        }
    };
    finish("spectrum", &loaded, req.out.as_deref(), &text, warnings)
}

/// CSV rendering of a phase grid (one row per cell, row-major order).
pub fn grid_csv(grid: &PhaseGrid) -> String {
    let cfg = &grid.config;
    let (p1, p2) = (cfg.axis1.parameter.name(), cfg.axis2.parameter.name());
    let mut s = String::from("# floquet-qc scan\n");
    s += &header_lines(&cfg.spec, &cfg.lattice, &cfg.drive);
    for (name, a) in [("axis1", &cfg.axis1), ("axis2", &cfg.axis2)] {
        let _ = writeln!(s, "# {name}: {} from {} to {} in {} points", a.parameter, csv_f(a.min), csv_f(a.max), a.n_points);
    }
    let _ = writeln!(s, "# columns:");
    let _ = writeln!(s, "#   i1, i2: axis indices (rows are ordered by i1, then i2)");
    let _ = writeln!(s, "#   {p1}, {p2}: parameter values of the cell");
    let _ = writeln!(s, "#   max_abs_im: largest |Im E| of the spectrum");
    let _ = writeln!(s, "#   min_re, max_re: smallest and largest Re E");
    let _ = writeln!(s, "#   min_ipr, max_ipr: extreme inverse participation ratios (empty without eigenvectors)");
    let _ = writeln!(s, "#   lyapunov_sign: sign of the closed-form Lyapunov exponent (+1 localized; empty for M5)");
    let _ = writeln!(s, "#   phase: extended, mobility_edge or localized");
    let _ = writeln!(s, "#   sign_sum: M5 only, sign(E_c - max Re E) + sign(E_c - min Re E)");
    let _ = writeln!(s, "#   windings: winding numbers separated by ';' (M4: w1;w2), empty unless requested");
    let _ = writeln!(s, "#   ipr_phase: phase read from the IPRs where it disagrees with the phase column");
    let _ = writeln!(s, "#   error: failure message; a non-empty value flags the row");
    let _ = writeln!(
        s,
        "i1,i2,{p1},{p2},max_abs_im,min_re,max_re,min_ipr,max_ipr,lyapunov_sign,phase,sign_sum,windings,ipr_phase,error"
    );
    for c in &grid.cells {
        let windings =
            c.windings.as_ref().map(|w| w.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(";")).unwrap_or_default();
        let error = match (&c.error, &c.winding_error) {
            (Some(e), _) => e.clone(),
            (None, Some(e)) => format!("winding: {e}"),
            (None, None) => String::new(),
        };
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            c.index1,
            c.index2,
            csv_f(c.param1),
            csv_f(c.param2),
            csv_opt(c.max_abs_im),
            csv_opt(c.min_re),
            csv_opt(c.max_re),
            csv_opt(c.min_ipr),
            csv_opt(c.max_ipr),
            c.lyapunov_sign.map(|x| x.to_string()).unwrap_or_default(),
            c.phase_label.map(|p| p.to_string()).unwrap_or_default(),
            c.sign_sum.map(|x| x.to_string()).unwrap_or_default(),
            windings,
            c.conflict.map(|k| k.from_iprs.to_string()).unwrap_or_default(),
            csv_text(&error),
        );
    }
    s
}

/// Two-parameter sweep into `out/grid.csv`, `out/grid.json`, optional SVG
/// heatmaps and `out/manifest.json`.
pub fn cmd_scan(req: &Request, emit_svg: bool, workers: usize) -> Result<Outcome, CliError> {
    let loaded = load(req)?;
    let cfg = loaded.cfg.scan_config()?;
    let quantities = loaded.cfg.scan.as_ref().map(|s| s.quantities.clone()).unwrap_or_default();
    if let Some(bad) = quantities.iter().find(|q| !QUANTITIES.contains(&q.as_str())) {
        return Err(CliError::Config(format!("scan.quantities: unknown quantity {bad:?} (expected one of {QUANTITIES:?})")));
    }
    let dir = req.out.clone().unwrap_or_else(|| PathBuf::from("scan-output"));
    std::fs::create_dir_all(&dir).map_err(|e| CliError::io(dir.display(), e))?;

    let grid = run_scan(&cfg, workers).map_err(|e| CliError::numerical("scan", e))?;
    let mut outputs = Vec::new();
    let csv_path = dir.join("grid.csv");
    std::fs::write(&csv_path, grid_csv(&grid)).map_err(|e| CliError::io(csv_path.display(), e))?;
    outputs.push(csv_path);
    let json_path = dir.join("grid.json");
    let json = json!({"schema_version": 1, "kind": "scan", "grid": grid});
    std::fs::write(&json_path, json_text(&json)).map_err(|e| CliError::io(json_path.display(), e))?;
    outputs.push(json_path);
    if emit_svg {
        let overlays = boundary_overlays(&grid);
        for q in &quantities {
            let path = dir.join(format!("heatmap_{q}.svg"));
            std::fs::write(&path, render_heatmap(&grid, q, &overlays)).map_err(|e| CliError::io(path.display(), e))?;
            outputs.push(path);
        }
    }

    let mut warnings = Vec::new();
    let failed = grid.cells.iter().filter(|c| c.error.is_some()).count();
    if failed > 0 {
        warnings.push(format!("{failed} of {} cells failed (rows flagged in the error column)", grid.cells.len()));
    }
    let winding_failed = grid.cells.iter().filter(|c| c.winding_error.is_some()).count();
    if winding_failed > 0 {
        warnings.push(format!("{winding_failed} cells have no winding number (see the error column)"));
    }
    let conflicts = grid.cells.iter().filter(|c| c.conflict.is_some()).count();
    if conflicts > 0 {
        warnings.push(format!("{conflicts} cells have an IPR reading that disagrees with the analytic phase"));
    }

    let manifest_path = dir.join("manifest.json");
    let mut manifest = RunManifest::new("scan", &loaded.text, loaded.cfg.to_toml());
    manifest.outputs = outputs.clone();
    manifest.warnings = warnings.clone();
    manifest.wall_time_s = loaded.started.elapsed().as_secs_f64();
    manifest.write(&manifest_path)?;
    outputs.push(manifest_path);
    Ok(Outcome { outputs, warnings })
}

/// Winding number(s) of the model's twist loop.
pub fn cmd_winding(req: &Request, base_re: Option<f64>, base_im: Option<f64>) -> Result<Outcome, CliError> {
    let loaded = load(req)?;
    let (spec, lattice, drive, warnings) = resolve(&loaded.cfg)?;
    let section = loaded.cfg.winding.clone().unwrap_or_default();
    let WindingSection { n_theta, m5_offset_im, m1_real_space_twist, .. } = section;
    let mut opts = WindingOptions::default().with_n_theta(n_theta);
    opts.m1_real_space_twist = m1_real_space_twist;
    let requested = C64::new(base_re.unwrap_or(section.base_re), base_im.unwrap_or(section.base_im));

    let bases: Vec<C64> = match spec.model {
        ModelId::M4 => m4_bases(&spec, &drive).to_vec(),
        ModelId::M5 => {
            let e_c = mobility_edge_m5(&spec, &drive).map_err(|e| CliError::numerical("winding: mobility edge", e))?;
            let offset = m5_offset_im.unwrap_or_else(|| default_m5_offset(e_c));
            if !(offset > 0.0) {
                return Err(CliError::Config(format!("winding.m5_offset_im must be > 0, got {offset}")));
            }
            vec![C64::new(e_c, offset)]
        }
        _ => vec![requested],
    };
    let result =
        winding_numbers(&spec, &lattice, &drive, &bases, &opts).map_err(|e| CliError::numerical("winding", e))?;
    let mut body = serde_json::Map::new();
    body.insert("schema_version".into(), json!(1));
    body.insert("kind".into(), json!("winding"));
    if spec.model == ModelId::M4 {
        body.insert("w1".into(), json!(result.windings[0]));
        body.insert("w2".into(), json!(result.windings[1]));
    } else {
        body.insert("w".into(), json!(result.windings[0]));
    }
    let base_json: Vec<Value> = result.base_energies.iter().map(|b| json!({"re": json_f(b.re), "im": json_f(b.im)})).collect();
    body.insert("base_energies".into(), Value::Array(base_json));
    body.insert("n_theta".into(), json!(result.n_theta));
    body.insert("max_phase_step".into(), json_f(result.max_phase_step));
    body.insert("parameters".into(), params_json(&spec, &lattice, &drive));
    let text = json_text(&Value::Object(body));
    finish("winding", &loaded, req.out.as_deref(), &text, warnings)
}

/// One-period propagator versus the effective Hamiltonian.
pub fn cmd_validate(req: &Request, steps: Option<usize>) -> Result<Outcome, CliError> {
    let loaded = load(req)?;
    let (spec, lattice, drive, warnings) = resolve(&loaded.cfg)?;
    if drive.omega.is_none() {
        return Err(CliError::Config(format!("validate: {} (set drive.omega)", HamiltonianError::MissingOmega)));
    }
    let n_steps = match steps.or(loaded.cfg.validate.as_ref().and_then(|v| v.n_steps)) {
        Some(n) => n,
        None => minimum_steps(&spec, &lattice, &drive).map_err(|e| CliError::numerical("validate: step count", e))?,
    };
    let report = validate_high_frequency(&spec, &lattice, &drive, n_steps).map_err(|e| match e {
        fqc_floquet_validate::FloquetError::TooFewSteps { .. } => CliError::Numerical(format!("validate: {e}")),
        other => CliError::numerical("validate: one-period propagator", other),
    })?;
    let states: Vec<Value> = report
        .quasienergies
        .iter()
        .zip(&report.matched)
        .zip(&report.distances)
        .map(|((q, &j), &d)| {
            let e = report.effective[j];
            json!({"re": json_f(q.re), "im": json_f(q.im), "matched_re": json_f(e.re), "matched_im": json_f(e.im), "distance": json_f(d)})
        })
        .collect();
    let text = json_text(&json!({
        "schema_version": 1,
        "kind": "validate",
        "n_steps": report.n_steps,
        "period": json_f(report.period),
        "max_quasienergy_distance": json_f(report.max_distance),
        "unitarity_defect": json_f(unitarity_defect(&report.u)),
        "parameters": params_json(&spec, &lattice, &drive),
        "states": states,
    }));
    finish("validate", &loaded, req.out.as_deref(), &text, warnings)
}

/// Fibonacci approximant `F_{k-1}/F_k` with `F_k >= n`, when `lattice`
/// itself uses a Fibonacci ratio; otherwise the configured ratio.
fn transfer_lattice(lattice: &LatticeConfig, n_sites: usize) -> LatticeConfig {
    let (p, q) = (lattice.alpha_num, lattice.alpha_den);
    let (mut a, mut b) = (1_u64, 2_u64);
    let mut fibonacci = false;
    loop {
        fibonacci |= (a, b) == (p, q);
        if b >= q && b >= n_sites as u64 {
            break;
        }
        (a, b) = (b, a + b);
    }
    if fibonacci {
        LatticeConfig { l: b as usize, alpha_num: a, alpha_den: b, boundary: Boundary::Open }
    } else {
        lattice.with_boundary(Boundary::Open)
    }
}

/// Closed-form and transfer-matrix Lyapunov exponents side by side.
pub fn cmd_lyapunov(req: &Request, format: OutputFormat, energy: (Option<f64>, Option<f64>)) -> Result<Outcome, CliError> {
    let loaded = load(req)?;
    let (spec, lattice, drive, warnings) = resolve(&loaded.cfg)?;
    let section = loaded.cfg.lyapunov.clone().unwrap_or_else(LyapunovSection::default);
    let re = energy.0.or(section.energy_re);
    let im = energy.1.or(section.energy_im);
    let (e, energy_source) = match (re, im) {
        (None, None) => {
            // Default: an eigenvalue of H_F a third of the way through the
            // sorted spectrum.
            let h = build_real_space(&spec, &lattice, &drive)
                .map_err(|e| CliError::numerical("lyapunov: building H_F", e))?;
            let report =
                spectrum_report(&h.matrix, false).map_err(|e| CliError::numerical("lyapunov: diagonalizing H_F", e))?;
            (report.eigenvalues[report.eigenvalues.len() / 3], "eigenvalue of H_F")
        }
        (r, i) => (C64::new(r.unwrap_or(0.0), i.unwrap_or(0.0)), "configured"),
    };
    let (analytic, analytic_note) = match lyapunov_analytic(&spec, &drive, Some(e)) {
        Ok(l) => (Some(l), None),
        Err(ObservablesError::HoppingZero { saturated }) => {
            (Some(saturated), Some("dressed hopping vanishes: lambda is infinite, saturated value reported".to_string()))
        }
        Err(ObservablesError::UnsupportedModel(_)) => (None, Some("no closed form for this model".to_string())),
        Err(other) => return Err(CliError::numerical("lyapunov: closed form", other)),
    };
    let tm_lattice = transfer_lattice(&lattice, section.n_sites);
    let (transfer, transfer_note) = match lyapunov_transfer_matrix(&spec, &tm_lattice, &drive, e, section.n_sites) {
        Ok(l) => (Some(l), None),
        Err(ObservablesError::HoppingZero { saturated }) => {
            (Some(saturated), Some("dressed hopping vanishes: lambda is infinite, saturated value reported".to_string()))
        }
        Err(other) => return Err(CliError::numerical("lyapunov: transfer matrix", other)),
    };
    let tm_alpha = format!("{}/{}", tm_lattice.alpha_num, tm_lattice.alpha_den);
    let text = match format {
        OutputFormat::Csv => {
            let mut s = String::from("# floquet-qc lyapunov (natural log, per site)\n");
            s += &header_lines(&spec, &lattice, &drive);
            let _ = writeln!(s, "# energy source: {energy_source}; transfer matrix over {} sites at alpha = {tm_alpha}", section.n_sites);
            for note in [&analytic_note, &transfer_note].into_iter().flatten() {
                let _ = writeln!(s, "# note: {note}");
            }
            s += "re_E,im_E,lambda_analytic,lambda_transfer_matrix\n";
            let _ = writeln!(s, "{},{},{},{}", csv_f(e.re), csv_f(e.im), csv_opt(analytic), csv_opt(transfer));
            s
        }
        OutputFormat::Json => json_text(&json!({
            "schema_version": 1,
            "kind": "lyapunov",
            "energy": {"re": json_f(e.re), "im": json_f(e.im), "source": energy_source},
            "lambda_analytic": analytic.map_or(Value::Null, json_f),
            "lambda_analytic_note": analytic_note,
            "lambda_transfer_matrix": transfer.map_or(Value::Null, json_f),
            "lambda_transfer_matrix_note": transfer_note,
            "transfer_matrix_sites": section.n_sites,
            "transfer_matrix_alpha": tm_alpha,
            "parameters": params_json(&spec, &lattice, &drive),
        })),
    };
    finish("lyapunov", &loaded, req.out.as_deref(), &text, warnings)
}
