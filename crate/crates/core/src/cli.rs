//! Command dispatch and table output behind the `qinv` binary.

use crate::config::RunConfig;
use crate::error::Error;
use crate::fpt::{laplace_fpt, FptProcess, FptQuery};
use crate::gamma_transform::{apply, GammaTransformSpec};
use crate::levy::ExponentKind;
use crate::series::SeriesSpec;
use crate::simulator::{laplace_from_samples, sample_many, write_samples_csv};
use crate::stable_wh::{ou_fpt_double_laplace, psi_minus, psi_plus, PassageSide};
use crate::validate::{self, Status, Suite, SuiteOptions};
use num_complex::Complex64;
use rayon::prelude::*;
use std::io::Write;
use std::path::PathBuf;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    EvalSeries,
    GammaTransform,
    WienerHopf,
    Fpt,
    Simulate,
    Validate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Why a run stopped; each maps to one exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Numerical(String),
    #[error("{failed} validation check(s) failed")]
    Validation { failed: usize },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation { .. } => 1,
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(_)
            | Error::Domain(_)
            | Error::UnsupportedExponent(_)
            | Error::ClassMismatch { .. }
            | Error::MeaninglessQuery(_)
            | Error::PoleParameter { .. } => CliError::Config(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Config(format!("output: {e}"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
}

impl Cell {
    fn csv_field(&self) -> String {
        match self {
            // shortest round-trip form, exponent notation for very small or large values
            Cell::Num(v) => format!("{v:?}"),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> serde_json::Value {
        match self {
            // NaN and infinities have no JSON form
            Cell::Num(v) => serde_json::Number::from_f64(*v).map_or(serde_json::Value::Null, serde_json::Value::Number),
            Cell::Int(v) => (*v).into(),
            Cell::Text(s) => s.clone().into(),
        }
    }
}

/// Header plus rows, in grid order.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn write(&self, out: impl Write, format: Format) -> Result<(), CliError> {
        match format {
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                let io = |e: csv::Error| CliError::Config(format!("output: {e}"));
                w.write_record(&self.columns).map_err(io)?;
                for row in &self.rows {
                    w.write_record(row.iter().map(Cell::csv_field)).map_err(io)?;
                }
                w.flush()?;
            }
            Format::Json => {
                let rows: Vec<serde_json::Value> =
                    self.rows.iter().map(|r| serde_json::Value::Array(r.iter().map(Cell::json).collect())).collect();
                let doc = serde_json::json!({ "columns": self.columns, "rows": rows });
                let mut out = out;
                serde_json::to_writer_pretty(&mut out, &doc).map_err(|e| CliError::Config(format!("output: {e}")))?;
                writeln!(out)?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct RunOptions {
    pub seed: u64,
    pub paths: usize,
    pub suite: Suite,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { seed: 1, paths: 20_000, suite: Suite::All }
    }
}

/// A finished command: its table and, for `validate`, the number of failed rows.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub table: Table,
    pub failures: usize,
}

type Rows = Result<Vec<Vec<Cell>>, CliError>;

fn product<'a>(a: &'a [f64], b: &'a [f64]) -> Vec<(f64, f64)> {
    a.iter().flat_map(|&x| b.iter().map(move |&y| (x, y))).collect()
}

fn nums(v: &[f64]) -> Vec<Cell> {
    v.iter().map(|&x| Cell::Num(x)).collect()
}

fn eval_series(cfg: &RunConfig) -> Result<Table, CliError> {
    let base = SeriesSpec::new(cfg.alpha()?, cfg.exponent()?, None, cfg.truncation()?)?;
    let z = cfg.axis("z", &cfg.grid.z)?;
    let with_q = !cfg.grid.q.is_empty();
    let qs: Vec<Option<f64>> = if with_q { cfg.grid.q.iter().map(|&q| Some(q)).collect() } else { vec![None] };
    base.coeff(0)?;
    let pts: Vec<(Option<f64>, f64)> = qs.iter().flat_map(|&q| z.iter().map(move |&z| (q, z))).collect();
    let rows: Rows = pts
        .par_iter()
        .map(|&(q, z)| {
            let v = base.with_q(q)?.eval_real(z)?;
            let mut row = q.map(|q| vec![Cell::Num(q)]).unwrap_or_default();
            row.extend([Cell::Num(z), Cell::Num(v.value), Cell::Int(v.terms_used as u64), Cell::Num(v.tail_bound)]);
            Ok(row)
        })
        .collect();
    let mut columns = if with_q { vec!["q"] } else { vec![] };
    columns.extend(["z", "value", "terms_used", "tail_bound"]);
    Ok(Table { columns, rows: rows? })
}

/// The transform of y ↦ I_{α,ψ}(y^α) by quadrature, next to its series form.
fn gamma_transform(cfg: &RunConfig) -> Result<Table, CliError> {
    let (alpha, chi) = (cfg.alpha()?, cfg.alpha()? * cfg.lambda()?);
    let base = SeriesSpec::new(alpha, cfg.exponent()?, None, cfg.truncation()?)?;
    base.coeff(0)?;
    let pts = product(cfg.axis("q", &cfg.grid.q)?, cfg.axis("x", &cfg.grid.x)?);
    let rows: Rows = pts
        .par_iter()
        .map(|&(q, x)| {
            let spec = GammaTransformSpec::new(q, chi, alpha)?;
            let f = |y: f64| base.eval_real(y.powf(alpha)).map_or(f64::NAN, |v| v.value);
            let quad = apply(&spec, f, x)?;
            let series = spec.prefactor() * base.with_q(Some(q / chi))?.eval_real(chi * x.powf(alpha))?.value;
            Ok(nums(&[q, x, quad, series, (quad - series).abs() / series.abs()]))
        })
        .collect();
    Ok(Table { columns: vec!["q", "x", "quadrature", "series", "rel_diff"], rows: rows? })
}

/// Ψ± on the imaginary axis at u ∈ grid.x, or, when the stable block carries
/// `delta` and `p`, the double-Laplace passage transform for q ∈ grid.q.
fn wiener_hopf(cfg: &RunConfig) -> Result<Table, CliError> {
    let st = cfg.stable()?;
    let p = st.params()?;
    if let (Some(delta), Some(pv)) = (st.delta, st.p) {
        let side: PassageSide = cfg.side.ok_or_else(|| CliError::Config("config needs `side`".into()))?.into();
        let chi = cfg.alpha.unwrap_or(p.alpha) * cfg.lambda()?;
        let rows: Rows = cfg
            .axis("q", &cfg.grid.q)?
            .par_iter()
            .map(|&q| Ok(nums(&[q, delta, pv, ou_fpt_double_laplace(&p, side, q, delta, pv, chi)?])))
            .collect();
        return Ok(Table { columns: vec!["q", "delta", "p", "value"], rows: rows? });
    }
    let rows: Rows = cfg
        .axis("x", &cfg.grid.x)?
        .par_iter()
        .map(|&u| {
            let z = Complex64::new(0.0, u);
            let (pp, pm) = (psi_plus(&p, z)?, psi_minus(&p, z)?);
            let want = 1.0 / (1.0 - p.char_exponent_imag_axis(u));
            Ok(nums(&[u, pp.re, pp.im, pm.re, pm.im, (pm * pp - want).norm() / want.norm()]))
        })
        .collect();
    Ok(Table {
        columns: vec!["u", "psi_plus_re", "psi_plus_im", "psi_minus_re", "psi_minus_im", "factorization_residual"],
        rows: rows?,
    })
}

/// Barrier grid; the passage to 0 has none.
fn barriers(cfg: &RunConfig, process: FptProcess) -> Result<Vec<f64>, CliError> {
    if process == FptProcess::UToZero {
        return Ok(vec![0.0]);
    }
    Ok(cfg.axis("a", &cfg.grid.a)?.to_vec())
}

fn fpt(cfg: &RunConfig) -> Result<Table, CliError> {
    let (psi, alpha, lambda, process) = (cfg.exponent()?, cfg.alpha()?, cfg.lambda()?, cfg.process()?);
    let trunc = cfg.truncation()?;
    let a = barriers(cfg, process)?;
    let xa = product(cfg.axis("x", &cfg.grid.x)?, &a);
    let pts: Vec<(f64, f64, f64)> = cfg.axis("q", &cfg.grid.q)?.iter().flat_map(|&q| xa.iter().map(move |&(x, a)| (q, x, a))).collect();
    let rows: Rows = pts
        .par_iter()
        .map(|&(q, x, a)| {
            let query = FptQuery::new(process, psi.clone(), alpha, lambda, q, x, a)?.with_truncation(trunc);
            Ok(nums(&[q, x, a, laplace_fpt(&query)?]))
        })
        .collect();
    Ok(Table { columns: vec!["q", "x", "a", "value"], rows: rows? })
}

/// Monte Carlo passage transforms: one sample set per (x, a), reused for every q.
fn simulate(cfg: &RunConfig, opts: &RunOptions) -> Result<Table, CliError> {
    let process = cfg.process()?;
    let paths_cfg = cfg.path_config(opts.seed)?;
    let (psi, alpha, lambda) = (cfg.exponent()?, cfg.alpha()?, cfg.lambda()?);
    let xa = product(cfg.axis("x", &cfg.grid.x)?, &barriers(cfg, process)?);
    let qs = cfg.axis("q", &cfg.grid.q)?;
    let samples_csv = cfg.simulation.as_ref().and_then(|s| s.samples_csv.clone()).map(PathBuf::from);
    if samples_csv.is_some() && xa.len() != 1 {
        return Err(CliError::Config("samples_csv needs a single (x, a) pair".into()));
    }
    // one sample per (x, a), reused across q; rows come out in the fpt order
    let mut rows = Vec::new();
    for (j, &(x, a)) in xa.iter().enumerate() {
        let samples = sample_many(&paths_cfg, process, x, a, opts.paths)?;
        if let Some(path) = &samples_csv {
            let f = std::fs::File::create(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            write_samples_csv(std::io::BufWriter::new(f), &samples)?;
        }
        for (i, &q) in qs.iter().enumerate() {
            let est = laplace_from_samples(&samples, process, q, alpha * lambda)?;
            let formula = FptQuery::new(process, psi.clone(), alpha, lambda, q, x, a)
                .and_then(|qu| laplace_fpt(&qu))
                .unwrap_or(f64::NAN);
            let mut row = nums(&[q, x, a, est.estimate, est.std_error, formula]);
            row.push(Cell::Int(est.hits as u64));
            rows.push(((i, j), row));
        }
    }
    rows.sort_by_key(|(k, _)| *k);
    let rows = rows.into_iter().map(|(_, r)| r).collect();
    Ok(Table { columns: vec!["q", "x", "a", "estimate", "std_error", "formula", "hits"], rows })
}

fn validate_suites(cfg: &RunConfig, opts: &RunOptions) -> Result<Outcome, CliError> {
    let mut so = SuiteOptions { seed: opts.seed, paths: opts.paths, ..SuiteOptions::default() };
    if !cfg.nu.is_empty() {
        so.nu = cfg.nu.clone();
    } else if let Some(psi) = cfg.exponent.as_ref().map(|e| e.build()).transpose()? {
        if let ExponentKind::BrownianDrift { b, .. } = psi.kind() {
            if *b < 0.0 {
                so.nu = vec![-b];
            }
        }
    }
    let checks = validate::run_suite(opts.suite, &so);
    let status = |s: Status| match s {
        Status::Pass => "pass",
        Status::Fail => "FAIL",
        Status::Info => "info",
    };
    let rows = checks
        .iter()
        .map(|r| {
            vec![
                Cell::Text(r.suite.to_string()),
                Cell::Text(r.identity.clone()),
                Cell::Text(r.parameters.clone()),
                Cell::Num(r.observed),
                Cell::Num(r.tolerance),
                Cell::Text(status(r.status).into()),
            ]
        })
        .collect();
    Ok(Outcome {
        table: Table { columns: vec!["suite", "identity", "parameters", "observed", "tolerance", "status"], rows },
        failures: validate::failures(&checks),
    })
}

pub fn run(command: Command, cfg: &RunConfig, opts: &RunOptions) -> Result<Outcome, CliError> {
    let table = match command {
        Command::EvalSeries => eval_series(cfg)?,
        Command::GammaTransform => gamma_transform(cfg)?,
        Command::WienerHopf => wiener_hopf(cfg)?,
        Command::Fpt => fpt(cfg)?,
        Command::Simulate => simulate(cfg, opts)?,
        Command::Validate => return validate_suites(cfg, opts),
    };
    Ok(Outcome { table, failures: 0 })
}
