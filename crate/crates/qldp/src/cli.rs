//! Argument parsing and the subcommands.
//!
//! Every command builds its whole output in memory and writes it once at
//! the end, to `--output` or stdout.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qldp_core::composition::{bell_demo, verify_additivity};
use qldp_core::noise::make_noise;
use qldp_core::privacy::{
    check_finite, closed_form_epsilon, epsilon_star, epsilon_star_1qubit, measurement_ldp,
    DEFAULT_MAX_OUTCOMES,
};
use qldp_core::utility::{closed_form_utility, make_optimal_mechanism, utility_report};
use qldp_core::{
    AdditivityOutcome, EpsilonStar, KrausChannel, Leakage, NoiseSpec, OptimizerOpts, QldpError,
};

use crate::error::CliError;
use crate::experiments::Figure;
use crate::format::{channel_to_json, read_channel, read_povm};
use crate::spec::parse_noise_spec;
use crate::table::{to_csv, to_json, Cell, Record};

pub const THREADS_ENV: &str = "QLDP_THREADS";

#[derive(Debug, Parser)]
#[command(name = "qldp", version, about = "Quantum local differential privacy analysis")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Channel JSON file.
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Output file (a directory for `experiment all`); stdout when omitted.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, global = true, default_value_t = 64)]
    pub restarts: usize,
    #[arg(long, global = true, default_value_t = 1e-8)]
    pub tol: f64,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Multi-start search over pure states.
    Auto,
    /// Bloch-sphere grid plus refinement (1-qubit unital channels).
    Bloch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FigureArg {
    Fig2,
    Fig3,
    Fig4,
    All,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Finiteness verdict and ε* of a channel.
    Analyze {
        /// Catalog noise instead of --input, e.g. "Dep:p=0.5".
        #[arg(long, conflicts_with = "input")]
        noise: Option<String>,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
    },
    /// Closed-form ε*, F and T̂ of a catalog noise with optimizer cross-checks.
    Noise { spec: String },
    /// Leakage of a channel followed by a POVM.
    Ldp {
        #[arg(long, conflicts_with = "input")]
        noise: Option<String>,
        /// POVM JSON file.
        #[arg(long)]
        povm: PathBuf,
        #[arg(long, default_value_t = DEFAULT_MAX_OUTCOMES)]
        max_outcomes: usize,
    },
    /// Additivity of ε* for the product of two catalog noises.
    Compose {
        a: String,
        b: String,
        /// Also send a Bell pair through A on each half.
        #[arg(long)]
        bell: bool,
    },
    /// Write the utility-optimal n-qubit mechanism for a budget ε as channel JSON.
    Optimal {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        epsilon: f64,
    },
    /// Regenerate a figure table.
    Experiment {
        #[arg(value_enum)]
        figure: FigureArg,
    },
}

fn threads_from_env() -> Result<usize, CliError> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(0),
        Ok(v) if v.trim().is_empty() => Ok(0),
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{THREADS_ENV}={v} is not a thread count"))),
    }
}

impl GlobalOpts {
    pub fn optimizer(&self) -> Result<OptimizerOpts, CliError> {
        let opts = OptimizerOpts {
            restarts: self.restarts,
            tol: self.tol,
            seed: self.seed,
            threads: threads_from_env()?,
            ..OptimizerOpts::default()
        };
        opts.validate().map_err(CliError::Argument)?;
        Ok(opts)
    }

    fn render(&self, records: &[Record]) -> String {
        match self.format {
            OutputFormat::Csv => to_csv(records),
            OutputFormat::Json => to_json(records),
        }
    }
}

fn write_output(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|source| CliError::Output {
            path: p.to_path_buf(),
            source,
        }),
        None => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|source| CliError::Output {
                    path: PathBuf::from("<stdout>"),
                    source,
                })
        }
    }
}

fn load_channel(global: &GlobalOpts, noise: Option<&str>) -> Result<KrausChannel, CliError> {
    match (noise, &global.input) {
        (Some(s), _) => Ok(make_noise(&parse_noise_spec(s)?)?),
        (None, Some(path)) => Ok(read_channel(path)?),
        (None, None) => Err(CliError::Usage("a channel is required: pass --input or --noise".into())),
    }
}

fn eps_cells(r: &mut Record, e: &EpsilonStar) {
    r.push("eps_star", e.leakage());
    r.push("reason", e.reason().map(|x| x.as_str()));
    r.push(
        "witness",
        e.witness()
            .map_or(Cell::Empty, |w| Cell::Amplitudes(w.amplitudes().to_vec())),
    );
}

pub fn analyze(global: &GlobalOpts, noise: Option<&str>, method: Method) -> Result<Vec<Record>, CliError> {
    let channel = load_channel(global, noise)?;
    let opts = global.optimizer()?;
    let start = Instant::now();
    let report = check_finite(&channel)?;
    let eps = match method {
        Method::Auto => epsilon_star(&channel, &opts)?,
        Method::Bloch => epsilon_star_1qubit(&channel, &opts).map_err(|e| match e {
            QldpError::DimensionMismatch { .. } | QldpError::NonUnital { .. } => CliError::Argument(e),
            other => CliError::Compute(other),
        })?,
    };
    let elapsed = start.elapsed().as_secs_f64();

    let mut r = Record::new();
    r.push("label", channel.label().map(str::to_string));
    r.push("dim", channel.dim());
    r.push("kraus_count", channel.kraus_count());
    r.push("short_circuit", report.short_circuit);
    r.push("choi_min_eig", report.choi_min_eig);
    r.push("span_rank", report.span_rank);
    r.push("finite", eps.is_finite());
    eps_cells(&mut r, &eps);
    r.push("wall_time_s", elapsed);
    Ok(vec![r])
}

fn delta(a: Leakage, b: Leakage) -> Cell {
    match (a, b) {
        (Leakage::Finite(x), Leakage::Finite(y)) => Cell::Num((x - y).abs()),
        (Leakage::Infinite, Leakage::Infinite) => Cell::Num(0.0),
        _ => Cell::Num(f64::INFINITY),
    }
}

pub fn noise(global: &GlobalOpts, text: &str) -> Result<Vec<Record>, CliError> {
    let spec = parse_noise_spec(text)?;
    let opts = global.optimizer()?;
    let channel = make_noise(&spec)?;
    let closed_eps = closed_form_epsilon(&spec)?.leakage();
    let (closed_f, closed_t) = closed_form_utility(&spec)?;
    let eps = epsilon_star(&channel, &opts)?.leakage();
    let util = utility_report(&channel, &opts)?;

    let r = Record::new()
        .with("spec", spec.to_spec_string())
        .with("eps_star", closed_eps)
        .with("fidelity", closed_f)
        .with("anti_trace", closed_t)
        .with("eps_star_opt", eps)
        .with("fidelity_opt", util.fidelity_utility)
        .with("anti_trace_opt", util.anti_trace_utility)
        .with("delta_eps", delta(closed_eps, eps))
        .with("delta_fidelity", (closed_f - util.fidelity_utility).abs())
        .with("delta_anti_trace", (closed_t - util.anti_trace_utility).abs());
    Ok(vec![r])
}

pub fn ldp(
    global: &GlobalOpts,
    noise: Option<&str>,
    povm: &Path,
    max_outcomes: usize,
) -> Result<Vec<Record>, CliError> {
    let channel = load_channel(global, noise)?;
    let povm = read_povm(povm)?;
    if povm.dim() != channel.dim() {
        return Err(CliError::Usage(format!(
            "POVM acts on dimension {} but the channel on {}",
            povm.dim(),
            channel.dim()
        )));
    }
    let opts = global.optimizer()?;
    let leak = measurement_ldp(&channel, &povm, max_outcomes).map_err(|e| match e {
        QldpError::TooManyOutcomes { .. } => CliError::Argument(e),
        other => CliError::Compute(other),
    })?;
    let eps = epsilon_star(&channel, &opts)?.leakage();
    let within = match (leak, eps) {
        (_, Leakage::Infinite) => true,
        (Leakage::Infinite, _) => false,
        (Leakage::Finite(l), Leakage::Finite(e)) => l <= e + 1e-6,
    };
    Ok(vec![Record::new()
        .with("label", channel.label().map(str::to_string))
        .with("outcomes", povm.len())
        .with("measurement_eps", leak)
        .with("eps_star", eps)
        .with("within_eps_star", within)])
}

pub fn compose(global: &GlobalOpts, a: &str, b: &str, bell: bool) -> Result<Vec<Record>, CliError> {
    let specs = [parse_noise_spec(a)?, parse_noise_spec(b)?];
    let opts = global.optimizer()?;
    let ca = make_noise(&specs[0])?;
    let cb = make_noise(&specs[1])?;
    let mut r = Record::new()
        .with("a", specs[0].to_spec_string())
        .with("b", specs[1].to_spec_string());
    match verify_additivity(&ca, &cb, &opts)? {
        AdditivityOutcome::Measured(rep) => {
            r.push("eps_a", rep.per_party_eps[0]);
            r.push("eps_b", rep.per_party_eps[1]);
            r.push("sum_eps", rep.sum_eps);
            r.push("measured_eps", rep.measured_eps);
            r.push("gap", rep.gap);
            r.push("infinite_party", Cell::Empty);
            r.push("reason", Cell::Empty);
        }
        AdditivityOutcome::Infinite { party, reason } => {
            for k in ["eps_a", "eps_b", "sum_eps", "measured_eps"] {
                r.push(k, f64::INFINITY);
            }
            r.push("gap", Cell::Empty);
            r.push("infinite_party", party.map(|p| if p == 0 { "a" } else { "b" }));
            r.push("reason", reason.as_str());
        }
    }
    if bell {
        bell_cells(&mut r, &specs[0])?;
    }
    Ok(vec![r])
}

fn bell_cells(r: &mut Record, spec: &NoiseSpec) -> Result<(), CliError> {
    let demo = bell_demo(spec).map_err(|e| match e {
        QldpError::InvalidParameter { .. } => CliError::Argument(e),
        other => CliError::Compute(other),
    })?;
    r.push("bell_p0_before", demo.outcome_probs_before.0);
    r.push("bell_p0_after", demo.outcome_probs_after.0);
    r.push("bell_ppt_before", demo.ppt_before);
    r.push("bell_ppt_after", demo.ppt_after);
    r.push("bell_pt_min_eig_before", demo.pt_min_eig_before);
    r.push("bell_pt_min_eig_after", demo.pt_min_eig_after);
    Ok(())
}

pub fn optimal(n: u32, epsilon: f64) -> Result<String, CliError> {
    let channel = make_optimal_mechanism(n, epsilon).map_err(CliError::Argument)?;
    Ok(channel_to_json(&channel))
}

fn figure_text(global: &GlobalOpts, fig: Figure) -> String {
    global.render(&fig.records())
}

pub fn experiment(global: &GlobalOpts, figure: FigureArg) -> Result<(), CliError> {
    let single = match figure {
        FigureArg::Fig2 => Some(Figure::Fig2),
        FigureArg::Fig3 => Some(Figure::Fig3),
        FigureArg::Fig4 => Some(Figure::Fig4),
        FigureArg::All => None,
    };
    if let Some(fig) = single {
        return write_output(global.output.as_deref(), &figure_text(global, fig));
    }
    let dir = global
        .output
        .as_deref()
        .ok_or_else(|| CliError::Usage("`experiment all` needs --output DIR".into()))?;
    let ext = match global.format {
        OutputFormat::Csv => "csv",
        OutputFormat::Json => "json",
    };
    let files: Vec<(PathBuf, String)> = Figure::ALL
        .iter()
        .map(|&f| (dir.join(format!("{}.{ext}", f.name())), figure_text(global, f)))
        .collect();
    std::fs::create_dir_all(dir).map_err(|source| CliError::Output {
        path: dir.to_path_buf(),
        source,
    })?;
    for (path, text) in &files {
        write_output(Some(path), text)?;
    }
    Ok(())
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    let g = &cli.global;
    let records = match &cli.command {
        Command::Analyze { noise, method } => analyze(g, noise.as_deref(), *method)?,
        Command::Noise { spec } => noise(g, spec)?,
        Command::Ldp {
            noise,
            povm,
            max_outcomes,
        } => ldp(g, noise.as_deref(), povm, *max_outcomes)?,
        Command::Compose { a, b, bell } => compose(g, a, b, *bell)?,
        Command::Optimal { n, epsilon } => {
            return write_output(g.output.as_deref(), &optimal(*n, *epsilon)?);
        }
        Command::Experiment { figure } => return experiment(g, *figure),
    };
    write_output(g.output.as_deref(), &g.render(&records))
}
