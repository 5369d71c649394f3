//! `modphi` command-line front end.

use std::io::Write as _;
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use modphi::models::{LeadingTerm, ModelParams};
use modphi_cli::{
    bound_for_model, emit_constants_table, predict_for_model, predict_raw, rows_to_csv, rows_to_json,
    run_experiment, write_plot_files, LambdaConvention, OutputFormat, Prediction, SpecBuilder,
};

#[derive(Parser, Debug)]
#[command(name = "modphi", version, about = "Exact distances, predictions and bounds for mod-phi approximation schemes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a model over an n grid and scheme orders.
    Experiment(ExperimentArgs),
    /// Print the table of Hermite constants r, z_{r+1}, M_r, V_r.
    Constants,
    /// Print leading-order distance predictions.
    Predict(PredictArgs),
    /// Print rigorous total variation bounds.
    Bound(BoundArgs),
}

#[derive(Args, Debug)]
struct ExperimentArgs {
    /// Registered model name.
    #[arg(long)]
    model: Option<String>,
    /// Model parameter `key=value` (repeatable).
    #[arg(long = "param")]
    params: Vec<String>,
    /// Comma list or `a:b:step` range of n values.
    #[arg(long)]
    n: Option<String>,
    /// Scheme orders, same syntax as --n.
    #[arg(long)]
    order: Option<String>,
    /// Distances: comma list of local, kolmogorov, tv (or `all`).
    #[arg(long)]
    dist: Option<String>,
    /// `theorem` or `exact-sum`.
    #[arg(long = "lambda-convention")]
    lambda_convention: Option<String>,
    /// Truncation tolerance of the scheme measures.
    #[arg(long)]
    tol: Option<f64>,
    /// Window half-width of the norm estimate.
    #[arg(long)]
    eps: Option<f64>,
    /// Output file (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Directory receiving gnuplot data files.
    #[arg(long = "plot-dir")]
    plot_dir: Option<PathBuf>,
    /// `csv` or `json`.
    #[arg(long)]
    format: Option<String>,
    /// Line-oriented `key=value` file with the same keys; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ModelCellArgs {
    #[arg(long)]
    model: Option<String>,
    #[arg(long = "param")]
    params: Vec<String>,
    #[arg(long)]
    n: Option<u64>,
    #[arg(long, default_value_t = 0)]
    order: usize,
    #[arg(long = "lambda-convention", default_value = "theorem")]
    lambda_convention: String,
}

#[derive(Args, Debug)]
struct PredictArgs {
    #[command(flatten)]
    cell: ModelCellArgs,
    /// Leading coefficient, for a prediction without a model.
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    sigma2: f64,
    #[arg(long)]
    lambda: Option<f64>,
}

#[derive(Args, Debug)]
struct BoundArgs {
    #[command(flatten)]
    cell: ModelCellArgs,
    #[arg(long, default_value_t = modphi_cli::spec::DEFAULT_EPS)]
    eps: f64,
}

fn experiment(args: ExperimentArgs) -> Result<()> {
    let flags = SpecBuilder {
        model: args.model,
        params: args.params,
        n: args.n,
        order: args.order,
        dist: args.dist,
        lambda_convention: args.lambda_convention,
        tol: args.tol,
        eps: args.eps,
        out: args.out,
        plot_dir: args.plot_dir,
        format: args.format,
    };
    let builder = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let file = SpecBuilder::from_config(&text).with_context(|| format!("parsing {}", path.display()))?;
            flags.or(file)
        }
        None => flags,
    };
    let spec = builder.build()?;
    let rows = run_experiment(&spec)?;
    let text = match spec.format {
        OutputFormat::Csv => rows_to_csv(&rows),
        OutputFormat::Json => rows_to_json(&rows)?,
    };
    match &spec.out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    if let Some(dir) = &spec.plot_dir {
        for p in write_plot_files(&rows, dir)? {
            eprintln!("wrote {}", p.display());
        }
    }
    Ok(())
}

fn cell_inputs(c: &ModelCellArgs) -> Result<(String, ModelParams, u64, LambdaConvention)> {
    let model = c.model.clone().context("--model is required")?;
    let n = c.n.context("--n is required")?;
    Ok((model, ModelParams::parse(&c.params)?, n, c.lambda_convention.parse()?))
}

fn show(v: Option<f64>) -> String {
    v.map_or_else(|| "n/a".into(), |x| x.to_string())
}

fn print_prediction(p: &Prediction) {
    println!("lambda={}", p.lambda);
    match &p.leading {
        LeadingTerm::OneD { s, beta } => println!("s={s}\nbeta={beta}"),
        LeadingTerm::TwoD { s, beta } => {
            println!("s={s}");
            for (a, v) in beta {
                println!("beta[{},{}]={v}", a[0], a[1]);
            }
        }
        LeadingTerm::None => println!("s=n/a"),
    }
    println!("local={}\nkolmogorov={}\ntv={}", show(p.local), show(p.kolmogorov), show(p.tv));
}

fn predict(args: PredictArgs) -> Result<()> {
    let p = match (args.beta, args.lambda) {
        (Some(beta), Some(lambda)) => predict_raw(beta, args.sigma2, lambda, args.cell.order)?,
        (Some(_), None) | (None, Some(_)) => anyhow::bail!("--beta and --lambda must be given together"),
        (None, None) => {
            let (model, params, n, conv) = cell_inputs(&args.cell)?;
            predict_for_model(&model, &params, n, args.cell.order, conv)?
        }
    };
    print_prediction(&p);
    Ok(())
}

fn bound(args: BoundArgs) -> Result<()> {
    let (model, params, n, conv) = cell_inputs(&args.cell)?;
    let (lambda, b) = bound_for_model(&model, &params, n, args.cell.order, conv, args.eps)?;
    println!("lambda={lambda}");
    println!("norm_bound={}", show(b.norm));
    println!("norm_bound_order={}", b.norm_r.map_or_else(|| "n/a".into(), |r| r.to_string()));
    println!("chen_steele={}", show(b.chen_steele));
    println!("le_cam={}", show(b.le_cam));
    println!("prohorov={}", show(b.prohorov));
    println!("best_tv={}", show(b.best_tv()));
    Ok(())
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Experiment(a) => experiment(a),
        Command::Constants => {
            print!("{}", emit_constants_table());
            Ok(())
        }
        Command::Predict(a) => predict(a),
        Command::Bound(a) => bound(a),
    }
}
