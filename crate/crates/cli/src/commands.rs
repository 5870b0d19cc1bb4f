//! One function per subcommand. Each writes its CSV files and `run.json`
//! into the configured output directory.

use std::io::Write;
use std::path::PathBuf;

use qbcharge::metrics::MetricsSeries;
use qbcharge::oracle::{self, CertificationCase, CertificationReport, CERTIFICATION_TOL, ORACLE_TOL};
use qbcharge::sweep::{self, figure_pipeline, format_float, FigureId, SweepResult, SweepRow, SweepSpec};
use qbcharge::{dynamics, Engine};
use serde_json::{json, Map};

use crate::config::RunConfig;
use crate::output::{ensure_dir, write_file, RunRecord};
use crate::CliError;

pub const TIMESERIES_FILE: &str = "timeseries.csv";
pub const TIMESERIES_COLUMNS: [&str; 8] = ["t", "re_C1", "im_C1", "re_C2", "im_C2", "E_B", "P_B", "W_B"];
pub const MAXIMA_FILE: &str = "maxima.csv";
pub const SWEEP_FILE: &str = "sweep.csv";
pub const ORACLE_FILE: &str = "oracle_check.csv";

/// Files written and lines worth echoing to the terminal.
#[derive(Debug, Default)]
pub struct Outcome {
    pub dir: PathBuf,
    pub files: Vec<PathBuf>,
    pub report: Vec<String>,
}

fn finish(
    command: &str,
    cfg: &RunConfig,
    mut files: Vec<PathBuf>,
    extra: Map<String, serde_json::Value>,
    report: Vec<String>,
) -> Result<Outcome, CliError> {
    let dir = cfg.out_dir();
    let record = RunRecord {
        command,
        config: cfg,
        files: &files,
        extra,
    };
    files.push(record.write(&dir)?);
    Ok(Outcome { dir, files, report })
}

fn frame_entry(cfg: &RunConfig) -> Map<String, serde_json::Value> {
    let mut extra = Map::new();
    extra.insert("dressed_frame".into(), json!(cfg.params.dressed_frame()));
    extra
}

pub fn timeseries(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let grid = cfg.time_grid()?;
    let traj = dynamics::trajectory(cfg.engine, &cfg.params, &grid, cfg.tol)?;
    let metrics = MetricsSeries::from_trajectory(&traj, cfg.params.dressed_frame().chi_b());
    let dir = cfg.out_dir();
    ensure_dir(&dir)?;
    let path = write_file(&dir, TIMESERIES_FILE, |out| {
        writeln!(out, "{}", TIMESERIES_COLUMNS.join(","))?;
        for i in 0..grid.len() {
            let row = [
                grid.samples()[i],
                traj.c1[i].re,
                traj.c1[i].im,
                traj.c2[i].re,
                traj.c2[i].im,
                metrics.energy[i],
                metrics.power[i],
                metrics.ergotropy[i],
            ];
            let fields: Vec<String> = row.into_iter().map(format_float).collect();
            writeln!(out, "{}", fields.join(","))?;
        }
        Ok(())
    })?;
    let report = vec![format!("{} samples on [0, {}]", grid.len(), grid.t_max())];
    finish("timeseries", cfg, vec![path], frame_entry(cfg), report)
}

/// Single-row, axis-free table of the maxima of `metrics`.
pub fn maxima_table(metrics: &MetricsSeries) -> SweepResult {
    SweepResult {
        axes: Vec::new(),
        rows: vec![SweepRow {
            point: Vec::new(),
            max_energy: metrics.max_energy,
            max_power: metrics.max_power,
            max_ergotropy: metrics.max_ergotropy,
        }],
        series: None,
    }
}

fn peak_lines(row: &SweepRow) -> Vec<String> {
    vec![
        format!("E_max = {:.6e} at t = {:.6}", row.max_energy.value, row.max_energy.time),
        format!("P_max = {:.6e} at t = {:.6}", row.max_power.value, row.max_power.time),
        format!("W_max = {:.6e} at t = {:.6}", row.max_ergotropy.value, row.max_ergotropy.time),
    ]
}

pub fn maxima(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let grid = cfg.time_grid()?;
    let metrics = sweep::evaluate_point(&cfg.params, &grid, cfg.engine, cfg.tol)?;
    let table = maxima_table(&metrics);
    let dir = cfg.out_dir();
    ensure_dir(&dir)?;
    let path = write_file(&dir, MAXIMA_FILE, |out| table.write_csv(out))?;
    let report = peak_lines(&table.rows[0]);
    finish("maxima", cfg, vec![path], frame_entry(cfg), report)
}

pub fn sweep_spec(cfg: &RunConfig) -> Result<SweepSpec, CliError> {
    Ok(SweepSpec {
        tol: cfg.tol,
        ..SweepSpec::new(cfg.params, cfg.sweep.axes.clone(), cfg.time_grid()?, cfg.engine)
    })
}

pub fn sweep(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let spec = sweep_spec(cfg)?;
    let result = sweep::run_sweep(&spec, cfg.threads)?;
    let dir = cfg.out_dir();
    ensure_dir(&dir)?;
    let path = write_file(&dir, SWEEP_FILE, |out| result.write_csv(out))?;
    let report = vec![format!("{} points", result.rows.len())];
    finish("sweep", cfg, vec![path], Map::new(), report)
}

pub fn reproduce(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let figure = cfg
        .figure
        .as_deref()
        .ok_or_else(|| CliError::Config("reproduce needs --figure or `figure` in the config".into()))?;
    let id: FigureId = figure.parse()?;
    let fig = figure_pipeline(id, cfg.engine, cfg.tol, cfg.threads)?;
    let dir = cfg.out_dir();
    ensure_dir(&dir)?;
    let mut files = Vec::new();
    let mut report = Vec::new();
    for panel in &fig.panels {
        files.push(write_file(&dir, &panel.file_name(), |out| panel.write_csv(out))?);
        report.push(format!("{} ({} rows)", panel.file_name(), panel.columns[0].len()));
    }
    let mut extra = Map::new();
    extra.insert("figure".into(), json!(fig.spec));
    // The figure fixes its own parameters and window; record them as the
    // effective config so the file describes what was run.
    let effective = RunConfig {
        params: fig.spec.base,
        grid: crate::config::GridConfig {
            t_max: Some(fig.spec.t_max),
            n_points: fig.spec.n_points,
        },
        ..cfg.clone()
    };
    finish("reproduce", &effective, files, extra, report)
}

/// Certification cases plus, when asked, the configured point with the
/// configured engine.
pub fn oracle_cases(cfg: &RunConfig, include_config: bool) -> Vec<CertificationCase> {
    let mut cases = oracle::certification_cases();
    if include_config {
        let engine = if cfg.engine == Engine::ClosedForm && !cfg.params.has_equal_detunings() {
            Engine::Pseudomode
        } else {
            cfg.engine
        };
        cases.push(CertificationCase {
            label: "config".into(),
            params: cfg.params,
            engine,
            t_max: cfg.t_max(),
            n_points: cfg.grid.n_points,
        });
    }
    cases
}

pub const ORACLE_COLUMNS: [&str; 9] = [
    "case",
    "engine",
    "n_modes",
    "span",
    "t_max",
    "gap",
    "tolerance",
    "max_norm_deviation",
    "passed",
];

pub fn oracle_check(cfg: &RunConfig, include_config: bool) -> Result<Outcome, CliError> {
    let reports: Vec<CertificationReport> = oracle_cases(cfg, include_config)
        .iter()
        .map(|case| oracle::certify(case, cfg.oracle.n_modes, cfg.oracle.span, cfg.tol))
        .collect::<Result<_, _>>()?;
    let dir = cfg.out_dir();
    ensure_dir(&dir)?;
    let path = write_file(&dir, ORACLE_FILE, |out| {
        writeln!(out, "{}", ORACLE_COLUMNS.join(","))?;
        for r in &reports {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                r.label,
                r.engine,
                r.n_modes,
                format_float(r.span),
                format_float(r.t_max),
                format_float(r.gap),
                format_float(r.tolerance),
                format_float(r.max_norm_deviation),
                r.passed
            )?;
        }
        Ok(())
    })?;
    let report: Vec<String> = reports
        .iter()
        .map(|r| {
            format!(
                "{} {} ({}): gap {:.3e} vs {:.0e}",
                if r.passed { "PASS" } else { "FAIL" },
                r.label,
                r.engine,
                r.gap,
                r.tolerance
            )
        })
        .collect();
    let mut extra = Map::new();
    extra.insert(
        "oracle".into(),
        json!({
            "n_modes": cfg.oracle.n_modes,
            "span": cfg.oracle.span,
            "oracle_rtol": ORACLE_TOL,
            "certification_tol": CERTIFICATION_TOL,
            "reports": reports,
        }),
    );
    let outcome = finish("oracle-check", cfg, vec![path], extra, report)?;
    let failed: Vec<&str> = reports.iter().filter(|r| !r.passed).map(|r| r.label.as_str()).collect();
    if failed.is_empty() {
        Ok(outcome)
    } else {
        for line in &outcome.report {
            eprintln!("{line}");
        }
        Err(CliError::OracleTolerance(format!(
            "{} exceeded {CERTIFICATION_TOL:e}",
            failed.join(", ")
        )))
    }
}
