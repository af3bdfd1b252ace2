//! `mlsr`: generate synthetic data, split it, train, evaluate and benchmark.
//!
//! Exit codes: 0 success, 2 usage error, 1 runtime or data error.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use mlsr::data::{self, generate_synthetic};
use mlsr::metrics::{accuracy, auc};
use mlsr::model::{margins, objective};
use mlsr::solver::{init_sparse_gaussian, run, write_trace_csv};
use mlsr::{Dataset, ExtReal, ProblemSpec, Schedule, SolverConfig, SyntheticConfig};
use serde::{Deserialize, Serialize};

#[derive(Parser)]
#[command(name = "mlsr", version, about = "Sparse multilinear logistic regression with an adaptive-momentum block solver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a two-class synthetic matrix dataset with a planted block.
    Gen(GenArgs),
    /// Split a dataset into stratified train and test files.
    Split(SplitArgs),
    /// Train a model and write it with its trace.
    Train(TrainArgs),
    /// Evaluate a model on a dataset; prints JSON metrics.
    Eval(EvalArgs),
    /// Repeat training over seeds for several schedules; writes a CSV report.
    Bench(BenchArgs),
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, default_value_t = 200)]
    rows: usize,
    #[arg(long, default_value_t = 200)]
    cols: usize,
    /// Side of the planted upper-left block.
    #[arg(long, default_value_t = 20)]
    block: usize,
    #[arg(long, default_value_t = 500)]
    per_class: usize,
    #[arg(long, default_value_t = 0.5)]
    margin: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output dataset path; a JSON sidecar is written next to it.
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args)]
struct SplitArgs {
    #[arg(short, long)]
    input: PathBuf,
    #[arg(long, default_value_t = 0.8)]
    train_frac: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    train_out: PathBuf,
    #[arg(long)]
    test_out: PathBuf,
}

/// Problem and solver flags shared by `train` and `bench`.
#[derive(Args, Clone)]
struct SolveArgs {
    /// apalm+ (adaptive momentum), apalm (Nesterov momentum) or bpgd (none).
    #[arg(long, default_value = "apalm+")]
    schedule: Schedule,
    #[arg(long, default_value_t = 1.3)]
    t: f64,
    #[arg(long, default_value_t = 0.6)]
    beta1: f64,
    #[arg(long, default_value_t = 0.9999)]
    beta_max: f64,
    #[arg(long, default_value_t = 1.5)]
    gamma: f64,
    /// Ridge weight; give once for all blocks or once per block.
    #[arg(long = "lambda", default_values_t = [2e-4])]
    lambda: Vec<f64>,
    /// Sparsity per block as a fraction of its length, rounded up.
    #[arg(long, default_value_t = 0.3)]
    sparsity_frac: f64,
    #[arg(long, default_value_t = 1e-5)]
    tol_obj: f64,
    #[arg(long, default_value_t = 1e-4)]
    tol_grad: f64,
    #[arg(long, default_value_t = 2000)]
    max_iters: usize,
    #[arg(long, default_value_t = 400.0)]
    max_seconds: f64,
    /// Seed for the random sparse initial point.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Record wall-clock time; otherwise time columns are 0 and output is
    /// byte-reproducible.
    #[arg(long)]
    timing: bool,
}

impl SolveArgs {
    fn problem(&self, dims: &[usize]) -> Result<ProblemSpec> {
        let lambda = match self.lambda.len() {
            1 => vec![self.lambda[0]; dims.len()],
            n if n == dims.len() => self.lambda.clone(),
            n => bail!("got {n} --lambda values for {} blocks", dims.len()),
        };
        Ok(ProblemSpec::from_fraction(lambda, self.sparsity_frac, self.gamma, dims)?)
    }

    fn config(&self, schedule: Schedule, seed: u64) -> SolverConfig {
        SolverConfig {
            schedule,
            t: self.t,
            beta1: self.beta1,
            beta_max: self.beta_max,
            gamma: self.gamma,
            tol_obj: self.tol_obj,
            tol_grad: self.tol_grad,
            max_iters: self.max_iters,
            max_seconds: self.max_seconds,
            seed,
            record_time: self.timing,
            ..SolverConfig::default()
        }
    }
}

#[derive(Args)]
struct TrainArgs {
    /// Training dataset.
    #[arg(short, long)]
    input: PathBuf,
    /// Output model path; a JSON sidecar is written next to it.
    #[arg(short, long)]
    output: PathBuf,
    /// Trace CSV path.
    #[arg(long)]
    trace: Option<PathBuf>,
    #[command(flatten)]
    solve: SolveArgs,
}

#[derive(Args)]
struct EvalArgs {
    /// Model file; its JSON sidecar supplies lambda and sparsity.
    #[arg(short, long)]
    model: PathBuf,
    #[arg(short, long)]
    data: PathBuf,
    /// Also write the JSON here.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Dataset to split into train and test once.
    #[arg(short, long)]
    input: PathBuf,
    /// Comma-separated schedules.
    #[arg(long, value_delimiter = ',', default_value = "apalm+,bpgd")]
    schedules: Vec<Schedule>,
    /// Runs per schedule, seeded seed..seed+runs-1.
    #[arg(long, default_value_t = 10)]
    runs: usize,
    #[arg(long, default_value_t = 0.8)]
    train_frac: f64,
    #[arg(long, default_value_t = 0)]
    split_seed: u64,
    /// Report path; stdout when omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[command(flatten)]
    solve: SolveArgs,
}

fn sidecar_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn load_dataset(path: &Path) -> Result<Dataset> {
    data::load(path).with_context(|| format!("reading dataset {}", path.display()))
}

#[derive(Serialize)]
struct GenSidecar<'a> {
    generator: &'a SyntheticConfig,
    n_samples: usize,
    v1: &'a [f64],
    v2: &'a [f64],
}

fn cmd_gen(a: GenArgs) -> Result<()> {
    let cfg = SyntheticConfig {
        rows: a.rows,
        cols: a.cols,
        block: a.block,
        per_class: a.per_class,
        margin: a.margin,
        seed: a.seed,
    };
    let (ds, truth) = generate_synthetic(&cfg)?;
    data::save(&ds, &a.output).with_context(|| format!("writing {}", a.output.display()))?;
    write_json(
        &sidecar_path(&a.output),
        &GenSidecar { generator: &cfg, n_samples: ds.len(), v1: &truth.v1, v2: &truth.v2 },
    )?;
    println!("wrote {} samples of shape {:?} to {}", ds.len(), ds.feature_dims(), a.output.display());
    Ok(())
}

#[derive(Serialize)]
struct SplitSidecar<'a> {
    source: &'a Path,
    role: &'static str,
    train_frac: f64,
    seed: u64,
    n_samples: usize,
}

fn cmd_split(a: SplitArgs) -> Result<()> {
    let ds = load_dataset(&a.input)?;
    let (train, test) = data::split(&ds, a.train_frac, a.seed)?;
    for (part, path, role) in [(&train, &a.train_out, "train"), (&test, &a.test_out, "test")] {
        data::save(part, path).with_context(|| format!("writing {}", path.display()))?;
        write_json(
            &sidecar_path(path),
            &SplitSidecar { source: &a.input, role, train_frac: a.train_frac, seed: a.seed, n_samples: part.len() },
        )?;
    }
    println!("train {} samples, test {} samples", train.len(), test.len());
    Ok(())
}

#[derive(Serialize, Deserialize)]
struct ModelSidecar {
    dataset: PathBuf,
    dims: Vec<usize>,
    lambda: Vec<f64>,
    sparsity: Vec<usize>,
    sparsity_frac: f64,
    solver: SolverConfig,
    iterations: usize,
    final_objective: f64,
    stop_reason: String,
}

fn cmd_train(a: TrainArgs) -> Result<()> {
    let ds = load_dataset(&a.input)?;
    let dims = ds.feature_dims().to_vec();
    let spec = a.solve.problem(&dims)?;
    let config = a.solve.config(a.solve.schedule, a.solve.seed);
    println!(
        "schedule={} sparsity={:?} lambda={:?} gamma={}",
        config.schedule,
        spec.sparsity(),
        spec.lambda(),
        config.gamma
    );
    let init = init_sparse_gaussian(&dims, spec.sparsity(), a.solve.seed)?;
    let result = run(&spec, &ds, &init, &config)?;

    data::save_model(&result.params, &a.output).with_context(|| format!("writing {}", a.output.display()))?;
    write_json(
        &sidecar_path(&a.output),
        &ModelSidecar {
            dataset: a.input.clone(),
            dims,
            lambda: spec.lambda().to_vec(),
            sparsity: spec.sparsity().to_vec(),
            sparsity_frac: a.solve.sparsity_frac,
            solver: config,
            iterations: result.iterations(),
            final_objective: result.final_objective(),
            stop_reason: result.stop_reason.to_string(),
        },
    )?;
    if let Some(path) = &a.trace {
        let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
        write_trace_csv(&result.trace, BufWriter::new(file))?;
    }
    println!(
        "objective={:.16e} iterations={} stop_reason={}",
        result.final_objective(),
        result.iterations(),
        result.stop_reason
    );
    Ok(())
}

#[derive(Serialize)]
struct Metrics {
    accuracy: f64,
    auc: f64,
    n: usize,
    /// `null` when the model violates its sparsity levels.
    objective: Option<f64>,
}

fn cmd_eval(a: EvalArgs) -> Result<()> {
    let params = data::load_model(&a.model).with_context(|| format!("reading model {}", a.model.display()))?;
    let side_path = sidecar_path(&a.model);
    let side: ModelSidecar = serde_json::from_str(
        &fs::read_to_string(&side_path).with_context(|| format!("reading {}", side_path.display()))?,
    )
    .with_context(|| format!("parsing {}", side_path.display()))?;
    let ds = load_dataset(&a.data)?;
    let spec = ProblemSpec::new(side.lambda, side.sparsity, side.solver.gamma, &params.dims())?;
    let m = margins(&params, &ds)?;
    let objective = match objective(&params, &ds, &spec)? {
        ExtReal::Finite(v) => Some(v),
        ExtReal::PosInf => None,
    };
    let metrics = Metrics {
        accuracy: accuracy(&m, ds.labels())?,
        auc: auc(&m, ds.labels())?,
        n: ds.len(),
        objective,
    };
    let text = serde_json::to_string(&metrics)?;
    println!("{text}");
    if let Some(path) = &a.output {
        fs::write(path, format!("{text}\n")).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

const BENCH_COLUMNS: [&str; 5] = ["objective", "iterations", "seconds", "accuracy", "auc"];

fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
    (mean, var.sqrt())
}

fn cmd_bench(a: BenchArgs) -> Result<()> {
    if a.runs == 0 {
        bail!("--runs must be at least 1");
    }
    if a.runs < 2 {
        eprintln!("warning: fewer than 2 runs, std is reported as 0");
    }
    let ds = load_dataset(&a.input)?;
    let (train, test) = data::split(&ds, a.train_frac, a.split_seed)?;
    let dims = train.feature_dims().to_vec();
    let spec = a.solve.problem(&dims)?;

    let mut out = String::new();
    out.push_str(&format!("row,schedule,seed,{}\n", BENCH_COLUMNS.join(",")));
    let mut summaries = Vec::new();
    for &schedule in &a.schedules {
        let mut cols: Vec<Vec<f64>> = vec![Vec::new(); BENCH_COLUMNS.len()];
        for r in 0..a.runs {
            let seed = a.solve.seed + r as u64;
            let config = a.solve.config(schedule, seed);
            let init = init_sparse_gaussian(&dims, spec.sparsity(), seed)?;
            let start = Instant::now();
            let result = run(&spec, &train, &init, &config)?;
            let seconds = if a.solve.timing { start.elapsed().as_secs_f64() } else { 0.0 };
            let m = margins(&result.params, &test)?;
            let row = [
                result.final_objective(),
                result.iterations() as f64,
                seconds,
                accuracy(&m, test.labels())?,
                auc(&m, test.labels())?,
            ];
            out.push_str(&format!("run,{schedule},{seed}"));
            for (col, v) in cols.iter_mut().zip(row) {
                col.push(v);
                out.push_str(&format!(",{v}"));
            }
            out.push('\n');
        }
        summaries.push((schedule, cols));
    }
    for (schedule, cols) in &summaries {
        out.push_str(&format!("summary,{schedule},"));
        for col in cols {
            let (mean, std) = mean_std(col);
            out.push_str(&format!(",{mean}±{std}"));
        }
        out.push('\n');
    }

    match &a.output {
        Some(path) => fs::write(path, &out).with_context(|| format!("writing {}", path.display()))?,
        None => std::io::stdout().lock().write_all(out.as_bytes())?,
    }
    Ok(())
}

fn main() -> ExitCode {
    // clap exits with status 2 on usage errors.
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Split(a) => cmd_split(a),
        Command::Train(a) => cmd_train(a),
        Command::Eval(a) => cmd_eval(a),
        Command::Bench(a) => cmd_bench(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
