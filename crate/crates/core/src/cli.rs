//! Command-line front end.
//!
//! Exit codes: 0 certified (or suite passed), 2 not certified, 1 usage or
//! input error, 3 verification failure.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{RunConfig, SweepConfig, SweepParam};
use crate::error::{Error, Result};
use crate::forces::{
    drag_lift_bound_general, force_certificate, psi_bound, q_norm_bounds, require_cube_conda,
};
use crate::inflow::{InflowDatum, SampledInflow};
use crate::oracle::{run_suite, SuiteOptions};
use crate::report::{dec17, CertificateReport, ForcesJson, InflowSource};
use crate::wellposedness::{certify, FluidParams, GradBoundChoice, Status};

pub const EXIT_CERTIFIED: i32 = 0;
pub const EXIT_INPUT_ERROR: i32 = 1;
pub const EXIT_NOT_CERTIFIED: i32 = 2;
pub const EXIT_ORACLE_FAILURE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "nsbounds", version, about = "Certified bounds for steady channel flow past an obstacle")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GradBound {
    Rough,
    Sharp,
}

impl From<GradBound> for GradBoundChoice {
    fn from(g: GradBound) -> Self {
        match g {
            GradBound::Rough => Self::Rough,
            GradBound::Sharp => Self::Sharp,
        }
    }
}

#[derive(Debug, clap::Args)]
struct Common {
    /// Run configuration (flat `key = value` file).
    #[arg(long)]
    config: PathBuf,
    /// Output file; overrides `output.path`. Defaults to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Existence/uniqueness certificate as JSON.
    Certify {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Drag and lift bounds for a cubic obstacle box and analytic inflow.
    Forces {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long, value_enum, default_value = "rough")]
        grad_bound: GradBound,
    },
    /// One row per value of the configured sweep parameter.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long, value_enum, default_value = "rough")]
        grad_bound: GradBound,
    },
    /// Runs the numerical verification suite.
    Verify {
        /// Accepted for symmetry with the other subcommands; the suite does not read it.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// JSON report instead of the text table.
        #[arg(long, value_enum)]
        format: Option<Format>,
        /// Smaller samples and grids.
        #[arg(long)]
        quick: bool,
        #[arg(long, default_value_t = SuiteOptions::default().seed)]
        seed: u64,
    },
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT_ERROR } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INPUT_ERROR
        }
    }
}

fn status_code(s: Status) -> i32 {
    match s {
        Status::Certified => EXIT_CERTIFIED,
        Status::NotCertified => EXIT_NOT_CERTIFIED,
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| io_error(p, e)),
        None => {
            let mut so = std::io::stdout().lock();
            so.write_all(text.as_bytes()).and_then(|_| so.flush()).map_err(|e| io_error(Path::new("<stdout>"), e))
        }
    }
}

fn io_error(p: &Path, e: std::io::Error) -> Error {
    Error::Config {
        line: 0,
        key: String::new(),
        message: format!("cannot write {}: {e}", p.display()),
    }
}

fn json_only(format: Format, command: &str) -> Result<()> {
    match format {
        Format::Json => Ok(()),
        Format::Csv => Err(Error::Config {
            line: 0,
            key: "--format".into(),
            message: format!("`{command}` writes JSON only; csv is for `sweep`"),
        }),
    }
}

fn dispatch(command: Command) -> Result<i32> {
    match command {
        Command::Certify { common, format } => {
            json_only(format, "certify")?;
            let cfg = RunConfig::from_path(&common.config)?;
            let report = CertificateReport::evaluate(&cfg.geometry()?, &cfg.fluid()?, &cfg.inflow, cfg.compat_tol)?;
            emit(common.out.as_deref().or(cfg.output.as_deref()), &(report.to_json() + "\n"))?;
            Ok(status_code(report.status))
        }
        Command::Forces { common, format, grad_bound } => {
            json_only(format, "forces")?;
            let cfg = RunConfig::from_path(&common.config)?;
            let amplitude = match cfg.inflow {
                InflowSource::Analytic(a) => a,
                InflowSource::Sampled { .. } => {
                    return Err(Error::Config {
                        line: 0,
                        key: "inflow.type".into(),
                        message: "forces needs inflow.type = analytic".into(),
                    })
                }
            };
            let (geom, fluid) = (cfg.geometry()?, cfg.fluid()?);
            let r = force_certificate(&geom, &fluid, amplitude, grad_bound.into())?;
            let json = ForcesJson::new(&r, &geom, &fluid, amplitude);
            let text = serde_json::to_string_pretty(&json).expect("report serialization cannot fail");
            emit(common.out.as_deref().or(cfg.output.as_deref()), &(text + "\n"))?;
            Ok(status_code(json.status))
        }
        Command::Sweep { common, format, grad_bound } => {
            let cfg = RunConfig::from_path(&common.config)?;
            let rows = sweep(&cfg, grad_bound.into())?;
            let text = match format {
                Format::Csv => sweep_csv(&rows),
                Format::Json => serde_json::to_string_pretty(&rows).expect("report serialization cannot fail") + "\n",
            };
            emit(common.out.as_deref().or(cfg.output.as_deref()), &text)?;
            Ok(EXIT_CERTIFIED)
        }
        Command::Verify { config: _, out, format, quick, seed } => {
            let opts = SuiteOptions { seed, quick };
            let table = format.is_none();
            let report = run_suite(&opts, |r| {
                if table && out.is_none() {
                    println!("{r}");
                }
            });
            let text = match format {
                None => {
                    let mut t: String = report.rows.iter().map(|r| format!("{r}\n")).collect();
                    let failed = report.rows.iter().filter(|r| !r.passed).count();
                    t += &format!("{} of {} checks passed\n", report.rows.len() - failed, report.rows.len());
                    t
                }
                Some(Format::Json) => serde_json::to_string_pretty(&report).expect("report serialization cannot fail") + "\n",
                Some(Format::Csv) => {
                    let mut w = csv::Writer::from_writer(Vec::new());
                    w.write_record(["id", "passed", "observed", "expected", "seconds"]).expect("in-memory write");
                    for r in &report.rows {
                        w.write_record([r.id, &r.passed.to_string(), &r.observed, &r.expected, &format!("{:.3}", r.seconds)])
                            .expect("in-memory write");
                    }
                    String::from_utf8(w.into_inner().expect("in-memory write")).expect("utf-8 input")
                }
            };
            match (&out, table) {
                (None, true) => println!("{}", text.lines().last().unwrap_or_default()),
                _ => emit(out.as_deref(), &text)?,
            }
            Ok(if report.all_passed() { EXIT_CERTIFIED } else { EXIT_ORACLE_FAILURE })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepStatus {
    Certified,
    NotCertified,
    Invalid,
}

impl SweepStatus {
    fn as_str(self) -> &'static str {
        match self {
            Self::Certified => "certified",
            Self::NotCertified => "not_certified",
            Self::Invalid => "invalid",
        }
    }
}

/// One sweep row. Numbers are `None` for invalid rows and for bounds that
/// do not apply (the sharp gradient bound beyond its range).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    #[serde(with = "dec17")]
    pub param: f64,
    #[serde(with = "dec17::option")]
    pub phi: Option<f64>,
    #[serde(with = "dec17::option")]
    pub threshold: Option<f64>,
    #[serde(with = "dec17::option")]
    pub margin: Option<f64>,
    #[serde(with = "dec17::option")]
    pub beta: Option<f64>,
    #[serde(with = "dec17::option")]
    pub grad_bound_rough: Option<f64>,
    #[serde(with = "dec17::option")]
    pub grad_bound_sharp: Option<f64>,
    #[serde(with = "dec17::option")]
    pub drag_bound: Option<f64>,
    #[serde(with = "dec17::option")]
    pub lift_bound: Option<f64>,
    pub status: SweepStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl SweepRow {
    fn invalid(param: f64, e: Error) -> Self {
        Self {
            param,
            phi: None,
            threshold: None,
            margin: None,
            beta: None,
            grad_bound_rough: None,
            grad_bound_sharp: None,
            drag_bound: None,
            lift_bound: None,
            status: SweepStatus::Invalid,
            error: Some(e.to_string()),
        }
    }
}

/// Evaluates every value of the sweep block. Values that violate an input
/// invariant give `invalid` rows; rows are evaluated concurrently and
/// returned in parameter order.
pub fn sweep(cfg: &RunConfig, choice: GradBoundChoice) -> Result<Vec<SweepRow>> {
    let sw: SweepConfig = cfg.sweep.ok_or_else(|| Error::Config {
        line: 0,
        key: "sweep.parameter".into(),
        message: "the sweep subcommand needs a sweep block".into(),
    })?;
    // the channel width is never swept, so a sampled grid is read once
    let sampled = match &cfg.inflow {
        InflowSource::Sampled { grid_file } => Some(SampledInflow::from_csv_path(grid_file, cfg.geometry.half_width)?),
        InflowSource::Analytic(_) => None,
    };
    Ok(sw
        .values()
        .into_par_iter()
        .map(|v| sweep_point(cfg, sw.param, v, sampled.as_ref(), choice).unwrap_or_else(|e| SweepRow::invalid(v, e)))
        .collect())
}

fn sweep_point(
    cfg: &RunConfig,
    param: SweepParam,
    v: f64,
    sampled: Option<&SampledInflow>,
    choice: GradBoundChoice,
) -> Result<SweepRow> {
    let mut gp = cfg.geometry;
    let mut eta = cfg.viscosity;
    let mut amplitude = match cfg.inflow {
        InflowSource::Analytic(a) => Some(a),
        InflowSource::Sampled { .. } => None,
    };
    match param {
        SweepParam::Amplitude => amplitude = Some(v),
        SweepParam::Viscosity => eta = v,
        SweepParam::ObstacleVolume => gp.obstacle_volume = v,
        SweepParam::BoxA => gp.a = v,
    }
    let geom = gp.build()?;
    let fluid = FluidParams::new(eta)?;
    let datum = match (amplitude, sampled) {
        (Some(a), _) => InflowDatum::analytic(a)?,
        (None, Some(s)) => InflowDatum::Sampled(s.clone()),
        (None, None) => unreachable!("sampled inflow is loaded before the sweep"),
    };
    let c = certify(&geom, &fluid, &datum, cfg.compat_tol)?;
    let (drag, lift) = match c.grad_bound(choice) {
        None => (None, None),
        Some(g) => {
            if require_cube_conda(&geom).is_ok() {
                let psi = psi_bound(&geom, eta, g)?;
                (Some(psi), Some(psi))
            } else {
                let q = q_norm_bounds(&geom);
                let j6 = c.embedding.j6_lb;
                (
                    Some(drag_lift_bound_general(eta, j6, g, q.q1_l3, q.q1_h1)),
                    Some(drag_lift_bound_general(eta, j6, g, q.q3_l3, q.q3_h1)),
                )
            }
        }
    };
    Ok(SweepRow {
        param: v,
        phi: Some(c.phi),
        threshold: Some(c.threshold),
        margin: Some(c.margin),
        beta: Some(c.beta),
        grad_bound_rough: Some(c.grad_bound_rough),
        grad_bound_sharp: c.grad_bound_sharp,
        drag_bound: drag,
        lift_bound: lift,
        status: match c.status {
            Status::Certified => SweepStatus::Certified,
            Status::NotCertified => SweepStatus::NotCertified,
        },
        error: None,
    })
}

pub const SWEEP_COLUMNS: [&str; 10] = [
    "param",
    "phi",
    "threshold",
    "margin",
    "beta",
    "grad_bound_rough",
    "grad_bound_sharp",
    "drag_bound",
    "lift_bound",
    "status",
];

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(SWEEP_COLUMNS).expect("in-memory write");
    let f = |x: Option<f64>| x.map(dec17::format).unwrap_or_default();
    for r in rows {
        w.write_record([
            dec17::format(r.param),
            f(r.phi),
            f(r.threshold),
            f(r.margin),
            f(r.beta),
            f(r.grad_bound_rough),
            f(r.grad_bound_sharp),
            f(r.drag_bound),
            f(r.lift_bound),
            r.status.as_str().to_string(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory write")).expect("utf-8 input")
}
