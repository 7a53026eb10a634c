//! Command-line front end for `mmtv-core`.

pub mod error;
pub mod problem;
pub mod report;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use mmtv_core::effnull::{
    default_cap_schedule, in_effective_null_dom, in_effective_null_polar, make_powered_e_variable_with, SubProbability,
};
use mmtv_core::experiments::{refinement_sweep_with, run_example_with, Params};
use mmtv_core::measures::Pmf;
use mmtv_core::minimax::{check_saddle_certificate_with, closest_pair, minimax_risk_with, GapTolerance};
use mmtv_core::{Mode, Rational, Scalar};

pub use error::CliError;
use problem::{from_json, parse_problem, CertificateFile, MeasureFile};
pub use report::{CommandEcho, ReportFile, ResultBody};

#[derive(Debug, Parser)]
#[command(
    name = "mmtv",
    version,
    about = "Minimax tests and TV-closest pairs on finite sample spaces"
)]
pub struct Cli {
    /// Arithmetic backend.
    #[arg(long, global = true, default_value = "rational")]
    pub mode: Mode,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Duality-gap tolerance (float mode only).
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Minimax risk, optimal test and closest pair.
    Risk { problem: PathBuf },
    /// Total-variation distance between the two hulls.
    Tvdist { problem: PathBuf },
    /// Audit a claimed saddle point `{phi, mu, nu}`.
    Certify { problem: PathBuf, certificate: PathBuf },
    /// Effective-null membership of `{mu}` for the null hypothesis.
    Effnull { problem: PathBuf, measure: PathBuf },
    /// Bounded e-variable uniformly powered against the alternative.
    Evariable { problem: PathBuf },
    /// Run a built-in example: `demo escaping-mass --N 8`.
    Demo {
        name: String,
        #[arg(trailing_var_arg = true, allow_hyphen_values = true, value_name = "--KEY VALUE")]
        params: Vec<String>,
    },
    /// Run a built-in example over several sizes: `sweep escaping-mass --sizes 2,4,8`.
    Sweep {
        name: String,
        #[arg(trailing_var_arg = true, allow_hyphen_values = true, value_name = "--KEY VALUE")]
        params: Vec<String>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Risk { .. } => "risk",
            Command::Tvdist { .. } => "tvdist",
            Command::Certify { .. } => "certify",
            Command::Effnull { .. } => "effnull",
            Command::Evariable { .. } => "evariable",
            Command::Demo { .. } => "demo",
            Command::Sweep { .. } => "sweep",
        }
    }
}

/// Parses `--key value` and `--key=value` pairs.
pub fn parse_params(args: &[String]) -> Result<Params, CliError> {
    let mut out = Params::new();
    let mut it = args.iter();
    while let Some(arg) = it.next() {
        let Some(key) = arg.strip_prefix("--") else {
            return Err(CliError::Usage(format!("expected `--key value`, found `{arg}`")));
        };
        let (key, value) = match key.split_once('=') {
            Some((k, v)) => (k.to_string(), v.to_string()),
            None => {
                let v = it
                    .next()
                    .ok_or_else(|| CliError::Usage(format!("missing value for `--{key}`")))?;
                (key.to_string(), v.clone())
            }
        };
        if key.is_empty() {
            return Err(CliError::Usage("empty parameter name".into()));
        }
        if out.insert(key.clone(), value).is_some() {
            return Err(CliError::Usage(format!("parameter `--{key}` given twice")));
        }
    }
    Ok(out)
}

fn parse_sizes(s: &str) -> Result<Vec<usize>, CliError> {
    s.split(',')
        .map(|x| {
            x.trim().parse().map_err(|_| {
                CliError::Usage(format!(
                    "`--sizes` must be a comma-separated list of integers, got `{s}`"
                ))
            })
        })
        .collect()
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn display(path: &Path) -> String {
    path.display().to_string()
}

/// Executes one command and returns its report.
pub fn run(cli: &Cli) -> Result<ReportFile, CliError> {
    let tolerance = match (cli.mode, cli.tolerance) {
        (_, None) => GapTolerance::default(),
        (Mode::Rational, Some(_)) => {
            return Err(CliError::Usage("`--tolerance` only applies in float mode".into()));
        }
        (Mode::Float, Some(t)) if t.is_finite() && t >= 0.0 => GapTolerance(t),
        (Mode::Float, Some(t)) => {
            return Err(CliError::Usage(format!(
                "`--tolerance` must be finite and nonnegative, got {t}"
            )));
        }
    };
    match cli.mode {
        Mode::Rational => dispatch::<Rational>(cli, tolerance),
        Mode::Float => dispatch::<f64>(cli, tolerance),
    }
}

fn dispatch<T: Scalar>(cli: &Cli, tolerance: GapTolerance) -> Result<ReportFile, CliError> {
    let mut arguments = BTreeMap::new();
    if let Some(t) = cli.tolerance {
        arguments.insert("tolerance".to_string(), t.to_string());
    }
    let mut warnings = Vec::new();

    let result = match &cli.command {
        Command::Risk { problem } => {
            arguments.insert("problem".into(), display(problem));
            let (_, prob) = parse_problem::<T>(&read(problem)?)?;
            let r = minimax_risk_with(prob.null_set(), prob.alternative_set(), tolerance)?;
            ResultBody::risk(&r)
        }
        Command::Tvdist { problem } => {
            arguments.insert("problem".into(), display(problem));
            let (_, prob) = parse_problem::<T>(&read(problem)?)?;
            ResultBody::tv_distance(&closest_pair(prob.null_set(), prob.alternative_set())?)
        }
        Command::Certify { problem, certificate } => {
            arguments.insert("problem".into(), display(problem));
            arguments.insert("certificate".into(), display(certificate));
            let (_, prob) = parse_problem::<T>(&read(problem)?)?;
            let cert: CertificateFile = from_json(&read(certificate)?)?;
            let phi = prob.test_fn(&cert.phi, "phi")?;
            let mu = prob.pmf(&cert.mu, "mu")?;
            let nu = prob.pmf(&cert.nu, "nu")?;
            let v = check_saddle_certificate_with(&phi, &mu, &nu, prob.null_set(), prob.alternative_set(), tolerance)?;
            if !v.valid {
                warnings.push("certificate is not a saddle point".into());
            }
            ResultBody::certificate(&v)
        }
        Command::Effnull { problem, measure } => {
            arguments.insert("problem".into(), display(problem));
            arguments.insert("measure".into(), display(measure));
            let (_, prob) = parse_problem::<T>(&read(problem)?)?;
            let file: MeasureFile = from_json(&read(measure)?)?;
            let mass = prob.vector(&file.mu, "mu")?;
            let p = prob.null_set();
            let sub = SubProbability::new(prob.space.clone(), mass.clone()).map_err(|e| CliError::Validation {
                path: "mu".into(),
                message: e.to_string(),
            })?;
            let total = sub.total_mass();
            let in_hull = if total == T::one() {
                Some(p.contains(&Pmf::new(prob.space.clone(), mass)?)?)
            } else {
                None
            };
            let dominated = in_effective_null_dom(&sub, p)?;
            let polar = in_effective_null_polar(&sub, p, &default_cap_schedule::<T>())?;
            if polar.exhausted {
                warnings.push(format!(
                    "polar optimum still increasing at cap {}; membership is provisional",
                    polar.cap
                ));
            }
            if dominated != polar.member {
                warnings.push("domination and polar routes disagree".into());
            }
            if in_hull.is_some_and(|h| h != dominated) {
                warnings.push("hull membership and effective-null membership disagree".into());
            }
            ResultBody::effective_null(&total, in_hull, dominated, &polar)
        }
        Command::Evariable { problem } => {
            arguments.insert("problem".into(), display(problem));
            let (_, prob) = parse_problem::<T>(&read(problem)?)?;
            let e = make_powered_e_variable_with(prob.null_set(), prob.alternative_set(), tolerance)?;
            ResultBody::e_variable(&e)
        }
        Command::Demo { name, params } => {
            arguments.insert("example".into(), name.clone());
            let params = parse_params(params)?;
            for (k, v) in &params {
                arguments.insert(format!("--{k}"), v.clone());
            }
            let r = run_example_with::<T>(name, &params, tolerance)?;
            if !r.pass {
                warnings.push("example did not reproduce its expected values".into());
            }
            ResultBody::experiment(&r)
        }
        Command::Sweep { name, params } => {
            arguments.insert("example".into(), name.clone());
            let mut params = parse_params(params)?;
            for (k, v) in &params {
                arguments.insert(format!("--{k}"), v.clone());
            }
            let sizes = params
                .remove("sizes")
                .ok_or_else(|| CliError::Usage("`sweep` requires `--sizes a,b,c`".into()))?;
            let sizes = parse_sizes(&sizes)?;
            let r = refinement_sweep_with::<T>(name, &sizes, &params, tolerance)?;
            if !r.pass {
                warnings.push("sweep did not reproduce its expected values".into());
            }
            ResultBody::experiment(&r)
        }
    };

    let command = CommandEcho {
        name: cli.command.name().to_string(),
        arguments,
    };
    Ok(ReportFile::new(command, T::MODE, result, warnings))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strings(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn params_accept_both_spellings() {
        let p = parse_params(&strings(&["--N", "8", "--m1=0.3"])).unwrap();
        assert_eq!(p["N"], "8");
        assert_eq!(p["m1"], "0.3");
    }

    #[test]
    fn params_reject_malformed_input() {
        assert!(parse_params(&strings(&["N", "8"])).is_err());
        assert!(parse_params(&strings(&["--N"])).is_err());
        assert!(parse_params(&strings(&["--N", "1", "--N", "2"])).is_err());
    }

    #[test]
    fn demo_report_round_trips() {
        let cli = Cli::parse_from(["mmtv", "demo", "escaping-mass", "--N", "8"]);
        let report = run(&cli).unwrap();
        match &report.result {
            ResultBody::Experiment { steps, .. } => assert_eq!(steps[0].tv, mmtv_core::Num::Exact("5/8".into())),
            r => panic!("unexpected {r:?}"),
        }
        assert_eq!(ReportFile::from_json(&report.to_json()).unwrap(), report);
    }

    #[test]
    fn tolerance_requires_float_mode() {
        let cli = Cli::parse_from(["mmtv", "--tolerance", "1e-3", "demo", "half-split"]);
        assert_eq!(run(&cli).unwrap_err().exit_code(), 1);
        let cli = Cli::parse_from(["mmtv", "--mode", "float", "--tolerance", "1e-3", "demo", "half-split"]);
        assert_eq!(run(&cli).unwrap().mode, Mode::Float);
    }
}
