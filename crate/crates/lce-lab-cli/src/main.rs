use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lce_lab::cme::KernelSpec;
use lce_lab::gaussian::CovRegime;
use lce_lab::lce::Regime;
use lce_lab::linalg::Tolerance;
use lce_lab_cli::run::{self, Format, Series};
use lce_lab_cli::{resolve_seed, CliError};

/// Linear conditional expectations, conditional covariances, kernel
/// conditional mean embeddings, and Gaussian conditioning on finite data.
#[derive(Parser)]
#[command(name = "lce-lab", version, about, max_term_width = 100)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Fit or evaluate a linear conditional expectation
    Lce {
        #[command(subcommand)]
        cmd: LceCmd,
    },
    /// Linear conditional covariance field of a data set
    Lcc(LccArgs),
    /// Kernel conditional mean embeddings
    Cme {
        #[command(subcommand)]
        cmd: CmeCmd,
    },
    /// Conditioning and sampling of Gaussian measures
    Gaussian {
        #[command(subcommand)]
        cmd: GaussianCmd,
    },
    /// Reproduce the built-in exactly-solvable fixtures
    PaperExamples(PaperArgs),
    /// Emit plot-ready data series (no rendering)
    Plotdata(PlotArgs),
}

#[derive(Args)]
struct ToleranceArgs {
    /// Relative singular/eigenvalue cutoff
    #[arg(long, value_name = "REL")]
    tol_rank: Option<f64>,
    /// Absolute residual/symmetry tolerance
    #[arg(long, value_name = "ABS")]
    tol_res: Option<f64>,
}

impl ToleranceArgs {
    fn resolve(&self) -> Result<Tolerance, CliError> {
        let d = Tolerance::default();
        Tolerance::new(
            self.tol_rank.unwrap_or(d.rank_rel),
            self.tol_res.unwrap_or(d.residual_abs),
        )
        .map_err(CliError::from)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum RegimeArg {
    Compatible,
    Truncated,
    Regularized,
}

#[derive(Args)]
struct RegimeArgs {
    /// Estimator regime
    #[arg(long, value_enum, default_value = "compatible")]
    regime: RegimeArg,
    /// Truncation order (requires --regime truncated)
    #[arg(long, value_name = "N")]
    rank: Option<usize>,
    /// Regularisation strength (requires --regime regularized)
    #[arg(long, value_name = "EPS")]
    eps: Option<f64>,
}

impl RegimeArgs {
    fn resolve(&self) -> Result<Regime, CliError> {
        match self.regime {
            RegimeArg::Compatible => Ok(Regime::Compatible),
            RegimeArg::Truncated => self
                .rank
                .map(Regime::Truncated)
                .ok_or_else(|| CliError::parse(None, "--regime truncated requires --rank")),
            RegimeArg::Regularized => self
                .eps
                .map(Regime::Regularized)
                .ok_or_else(|| CliError::parse(None, "--regime regularized requires --eps")),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Format {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        }
    }
}

#[derive(Subcommand)]
enum LceCmd {
    /// Fit the conditioning operator to a v..,u..[,w] CSV
    Fit {
        #[arg(long, value_name = "CSV")]
        input: PathBuf,
        #[arg(long, value_name = "JSON")]
        output: Option<PathBuf>,
        #[command(flatten)]
        regime: RegimeArgs,
        #[command(flatten)]
        tol: ToleranceArgs,
    },
    /// Apply a fitted operator to v.. query rows
    Eval {
        /// Operator JSON written by `lce fit`
        #[arg(long, value_name = "JSON")]
        operator: PathBuf,
        #[arg(long, value_name = "CSV")]
        input: PathBuf,
        #[arg(long, value_name = "FILE")]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: FormatArg,
    },
}

#[derive(Args)]
struct LccArgs {
    #[arg(long, value_name = "CSV")]
    input: PathBuf,
    #[arg(long, value_name = "JSON")]
    output: Option<PathBuf>,
    #[command(flatten)]
    regime: RegimeArgs,
    #[command(flatten)]
    tol: ToleranceArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum KernelArg {
    GaussianRbf,
    Linear,
    Polynomial,
}

fn kernel_from_args(
    family: KernelArg,
    lengthscale: Option<f64>,
    degree: Option<u32>,
    offset: Option<f64>,
    side: &str,
) -> Result<KernelSpec, CliError> {
    let spec = match family {
        KernelArg::GaussianRbf => KernelSpec::GaussianRbf {
            lengthscale: lengthscale.ok_or_else(|| {
                CliError::parse(None, format!("gaussian-rbf kernel needs --lengthscale-{side}"))
            })?,
        },
        KernelArg::Linear => KernelSpec::Linear,
        KernelArg::Polynomial => KernelSpec::Polynomial {
            degree: degree.ok_or_else(|| {
                CliError::parse(None, format!("polynomial kernel needs --degree-{side}"))
            })?,
            offset: offset.unwrap_or(0.0),
        },
    };
    spec.validate()?;
    Ok(spec)
}

#[derive(Subcommand)]
enum CmeCmd {
    /// Fit a conditional mean embedding to x..,y..[,w] pairs
    Fit {
        #[arg(long, value_name = "CSV")]
        input: PathBuf,
        #[arg(long, value_name = "JSON")]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "gaussian-rbf")]
        kernel_x: KernelArg,
        #[arg(long, value_name = "L")]
        lengthscale_x: Option<f64>,
        #[arg(long, value_name = "D")]
        degree_x: Option<u32>,
        #[arg(long, value_name = "C")]
        offset_x: Option<f64>,
        #[arg(long, value_enum, default_value = "gaussian-rbf")]
        kernel_y: KernelArg,
        #[arg(long, value_name = "L")]
        lengthscale_y: Option<f64>,
        #[arg(long, value_name = "D")]
        degree_y: Option<u32>,
        #[arg(long, value_name = "C")]
        offset_y: Option<f64>,
        /// Regularisation strength; 0 selects the pseudo-inverse path
        #[arg(long, default_value_t = 0.0)]
        eps: f64,
        #[command(flatten)]
        tol: ToleranceArgs,
    },
    /// Predict embedding coefficients at x.. query rows
    Predict {
        #[arg(long, value_name = "JSON")]
        model: PathBuf,
        #[arg(long, value_name = "CSV")]
        input: PathBuf,
        #[arg(long, value_name = "FILE")]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: FormatArg,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum CovRegimeArg {
    Invertible,
    Compatible,
    Incompatible,
}

impl From<CovRegimeArg> for CovRegime {
    fn from(r: CovRegimeArg) -> CovRegime {
        match r {
            CovRegimeArg::Invertible => CovRegime::Invertible,
            CovRegimeArg::Compatible => CovRegime::Compatible,
            CovRegimeArg::Incompatible => CovRegime::Incompatible,
        }
    }
}

#[derive(Subcommand)]
enum GaussianCmd {
    /// Condition a joint measure {mean, cov, u_dim} on its V block
    Condition {
        #[arg(long, value_name = "JSON")]
        input: PathBuf,
        #[arg(long, value_name = "JSON")]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "compatible")]
        regime: CovRegimeArg,
        #[command(flatten)]
        tol: ToleranceArgs,
    },
    /// Draw seeded samples from a measure {mean, cov}
    Sample {
        #[arg(long, value_name = "JSON")]
        input: PathBuf,
        #[arg(long, value_name = "CSV")]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = 1000)]
        count: usize,
        /// RNG seed (falls back to LCE_LAB_SEED, then a fixed constant)
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        tol: ToleranceArgs,
    },
}

#[derive(Args)]
struct PaperArgs {
    /// Run a single fixture by name
    #[arg(long, value_name = "NAME")]
    only: Option<String>,
    /// Override a fixture parameter, e.g. N=3 (requires --only)
    #[arg(long, value_name = "KEY=VALUE")]
    param: Vec<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SeriesArg {
    Contractivity,
    DctSlope,
    Scatter,
}

#[derive(Args)]
struct PlotArgs {
    #[arg(long, value_enum)]
    series: SeriesArg,
    #[arg(long, value_name = "FILE")]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
    /// Lᵖ exponents for the contractivity series
    #[arg(long, value_delimiter = ',', default_values_t = vec![1.0, 1.5, 3.0, 4.0])]
    p: Vec<f64>,
    /// Largest ε on the contractivity grid
    #[arg(long, default_value_t = 0.5)]
    eps_max: f64,
    /// Number of ε grid points
    #[arg(long, default_value_t = 51)]
    points: usize,
    /// Band parameter ε for the slope-growth series
    #[arg(long, default_value_t = 0.01)]
    eps: f64,
    /// Largest k for the slope-growth series
    #[arg(long, default_value_t = 100)]
    k_max: u32,
    /// Data CSV for the scatter series
    #[arg(long, value_name = "CSV")]
    input: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "compatible")]
    regime: RegimeArg,
    #[arg(long, value_name = "N")]
    rank: Option<usize>,
    /// Regularisation strength for the scatter series fit
    #[arg(long, value_name = "EPS")]
    fit_eps: Option<f64>,
    #[command(flatten)]
    tol: ToleranceArgs,
}

fn emit(text: &str, output: Option<&PathBuf>) -> Result<(), CliError> {
    match output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Other(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read_to_string(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::parse(None, format!("cannot read {}: {e}", path.display())))
}

fn parse_params(raw: &[String]) -> Result<Vec<(String, f64)>, CliError> {
    raw.iter()
        .map(|s| {
            let (k, v) = s
                .split_once('=')
                .ok_or_else(|| CliError::parse(None, format!("--param expects KEY=VALUE, got {s:?}")))?;
            let value = v
                .parse::<f64>()
                .map_err(|_| CliError::parse(None, format!("--param {k}: not a number: {v:?}")))?;
            Ok((k.to_string(), value))
        })
        .collect()
}

fn dispatch(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.cmd {
        Cmd::Lce { cmd } => match cmd {
            LceCmd::Fit {
                input,
                output,
                regime,
                tol,
            } => {
                let text = run::lce_fit(&input, regime.resolve()?, &tol.resolve()?)?;
                emit(&text, output.as_ref())?;
            }
            LceCmd::Eval {
                operator,
                input,
                output,
                format,
            } => {
                let text = run::lce_eval(&read_to_string(&operator)?, &input, format.into())?;
                emit(&text, output.as_ref())?;
            }
        },
        Cmd::Lcc(args) => {
            let text = run::lcc_run(&args.input, args.regime.resolve()?, &args.tol.resolve()?)?;
            emit(&text, args.output.as_ref())?;
        }
        Cmd::Cme { cmd } => match cmd {
            CmeCmd::Fit {
                input,
                output,
                kernel_x,
                lengthscale_x,
                degree_x,
                offset_x,
                kernel_y,
                lengthscale_y,
                degree_y,
                offset_y,
                eps,
                tol,
            } => {
                let kx = kernel_from_args(kernel_x, lengthscale_x, degree_x, offset_x, "x")?;
                let ky = kernel_from_args(kernel_y, lengthscale_y, degree_y, offset_y, "y")?;
                let text = run::cme_fit_run(&input, &kx, &ky, eps, &tol.resolve()?)?;
                emit(&text, output.as_ref())?;
            }
            CmeCmd::Predict {
                model,
                input,
                output,
                format,
            } => {
                let text = run::cme_predict_run(&read_to_string(&model)?, &input, format.into())?;
                emit(&text, output.as_ref())?;
            }
        },
        Cmd::Gaussian { cmd } => match cmd {
            GaussianCmd::Condition {
                input,
                output,
                regime,
                tol,
            } => {
                let text = run::gaussian_condition_run(
                    &read_to_string(&input)?,
                    regime.into(),
                    &tol.resolve()?,
                )?;
                emit(&text, output.as_ref())?;
            }
            GaussianCmd::Sample {
                input,
                output,
                count,
                seed,
                tol,
            } => {
                let text = run::gaussian_sample_run(
                    &read_to_string(&input)?,
                    count,
                    resolve_seed(seed)?,
                    &tol.resolve()?,
                )?;
                emit(&text, output.as_ref())?;
            }
        },
        Cmd::PaperExamples(args) => {
            let params = parse_params(&args.param)?;
            let (report, all_passed) = run::paper_examples(args.only.as_deref(), &params)?;
            print!("{report}");
            if !all_passed {
                return Ok(ExitCode::FAILURE);
            }
        }
        Cmd::Plotdata(args) => {
            let series = match args.series {
                SeriesArg::Contractivity => Series::Contractivity {
                    p: args.p.clone(),
                    eps_max: args.eps_max,
                    points: args.points,
                },
                SeriesArg::DctSlope => Series::DctSlope {
                    eps: args.eps,
                    k_max: args.k_max,
                },
                SeriesArg::Scatter => Series::Scatter {
                    regime: RegimeArgs {
                        regime: args.regime,
                        rank: args.rank,
                        eps: args.fit_eps,
                    }
                    .resolve()?,
                },
            };
            let text = run::plotdata(
                &series,
                args.input.as_deref(),
                &args.tol.resolve()?,
                args.format.into(),
            )?;
            emit(&text, args.output.as_ref())?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
