use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use anyhow::{anyhow, bail, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use spinhl_core::bijection::bijection_pairs;
use spinhl_core::pfaffian::pfaffian;
use spinhl_core::robbins::{damts, monotone_triangles, robbins_star_bialternant, robbins_star_enum};
use spinhl_core::series::f_lambda_series;
use spinhl_core::symfun::f_lambda;
use spinhl_core::vertex::{ensembles, f_lambda_vertex};
use spinhl_core::{ParamPoint, Rat, SpinParams};

use crate::config::Config;
use crate::exec::Pool;
use crate::json;
use crate::verify::{self, Settings, Target};

const DEFAULT_SEED: u64 = 7;

/// Exit status of a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass = 0,
    Failed = 1,
    Usage = 2,
}

#[derive(Debug, Parser)]
#[command(
    name = "spinhl",
    version,
    about = "Spin Hall-Littlewood functions, Robbins polynomials and Littlewood identities"
)]
struct Cli {
    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// TOML file presetting seed, jobs, n, p and D.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate F_λ at a point, or as a truncated series in x.
    EvalF(EvalF),
    /// Evaluate the modified Robbins polynomial R*_k(x; u, v, w).
    EvalRobbins(EvalRobbins),
    /// List path ensembles, monotone triangles or DAMTs.
    Enumerate(Enumerate),
    /// Pair admissible ensembles with monotone triangles and compare weights.
    Bijection(Bijection),
    /// Run identity checks and print a JSON report.
    Verify(Verify),
    /// Pfaffian of a skew-symmetric matrix stored as JSON.
    Pfaffian(PfaffianArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Route {
    Symmetrizer,
    Vertex,
}

#[derive(Debug, Args)]
struct EvalF {
    #[arg(long)]
    lambda: String,
    /// Expected length of λ.
    #[arg(long)]
    n: Option<usize>,
    /// Expected number of free spins before the constant tail.
    #[arg(long)]
    p: Option<usize>,
    /// Spins s_0, ..., s_{p-1} followed by the constant tail s.
    #[arg(long, allow_hyphen_values = true)]
    spin: String,
    #[arg(long, allow_hyphen_values = true)]
    u: Option<String>,
    /// Square root of q.
    #[arg(long, allow_hyphen_values = true)]
    t: String,
    /// Expand in x with u_i = (s + x_i)/(1 + s x_i) instead of evaluating.
    #[arg(long)]
    series: bool,
    #[arg(long = "D", default_value_t = 4)]
    d: usize,
    #[arg(long, value_enum, default_value = "symmetrizer")]
    route: Route,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum RobbinsMode {
    Enum,
    Bialternant,
}

#[derive(Debug, Args)]
struct EvalRobbins {
    #[arg(long, allow_hyphen_values = true)]
    bottom: String,
    #[arg(long, value_enum, default_value = "bialternant")]
    mode: RobbinsMode,
    #[arg(long, allow_hyphen_values = true)]
    x: String,
    #[arg(long, allow_hyphen_values = true)]
    u: String,
    #[arg(long, allow_hyphen_values = true)]
    v: String,
    #[arg(long, allow_hyphen_values = true)]
    w: String,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Kind {
    Ensembles,
    Triangles,
    Damts,
}

#[derive(Debug, Args)]
struct Enumerate {
    #[arg(value_enum)]
    kind: Kind,
    /// Top boundary, for ensembles.
    #[arg(long)]
    lambda: Option<String>,
    /// Bottom row, for triangles and DAMTs.
    #[arg(long, allow_hyphen_values = true)]
    bottom: Option<String>,
}

#[derive(Debug, Args)]
struct Bijection {
    #[arg(long)]
    lambda: String,
    #[arg(long, allow_hyphen_values = true)]
    t: String,
    #[arg(long, allow_hyphen_values = true)]
    x: String,
}

#[derive(Debug, Args)]
struct Verify {
    #[arg(value_enum)]
    target: Target,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    p: Option<usize>,
    #[arg(long = "D")]
    d: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Args)]
struct PfaffianArgs {
    #[arg(long)]
    file: PathBuf,
}

fn core<T>(r: spinhl_core::Result<T>) -> Result<T> {
    r.map_err(|e| anyhow!("{e}"))
}

fn spin_params(text: &str, p: Option<usize>) -> Result<SpinParams> {
    let mut all = json::parse_rats(text)?;
    let Some(tail) = all.pop() else { bail!("--spin needs at least the constant tail") };
    if let Some(p) = p {
        if all.len() != p {
            bail!("--p {p} but --spin gives {} free spins", all.len());
        }
    }
    Ok(SpinParams::new(all, tail))
}

fn eval_f(a: &EvalF) -> Result<Value> {
    let lambda = json::parse_partition(&a.lambda)?;
    if let Some(n) = a.n {
        if n != lambda.len() {
            bail!("--n {n} but λ has {} parts", lambda.len());
        }
    }
    let spin = spin_params(&a.spin, a.p)?;
    let t = json::parse_rat(&a.t)?;
    if a.series {
        let s = core(f_lambda_series(&lambda, &spin, &t, a.d))?;
        return Ok(json!({ "lambda": lambda.to_string(), "series": json::series(&s) }));
    }
    let Some(u) = &a.u else { bail!("--u is required unless --series is given") };
    let u = json::parse_rats(u)?;
    if u.len() != lambda.len() {
        bail!("{} values of u for {} parts", u.len(), lambda.len());
    }
    let point = ParamPoint::new(t, Rat::from_integer(1.into()), spin, u);
    let value = match a.route {
        Route::Symmetrizer => core(f_lambda(&lambda, &point))?,
        Route::Vertex => core(f_lambda_vertex(&lambda, &point, lambda.largest()))?,
    };
    Ok(json!({ "lambda": lambda.to_string(), "value": json::rat(&value) }))
}

fn eval_robbins(a: &EvalRobbins) -> Result<Value> {
    let k = json::parse_ints(&a.bottom)?;
    let x = json::parse_rats(&a.x)?;
    let (u, v, w) = (json::parse_rat(&a.u)?, json::parse_rat(&a.v)?, json::parse_rat(&a.w)?);
    let value = match a.mode {
        RobbinsMode::Enum => core(robbins_star_enum(&k, &x, &u, &v, &w))?,
        RobbinsMode::Bialternant => core(robbins_star_bialternant(&k, &x, &u, &v, &w))?,
    };
    Ok(json!({ "bottom": k, "value": json::rat(&value) }))
}

fn enumerate(a: &Enumerate) -> Result<Value> {
    let items: Vec<Value> = match a.kind {
        Kind::Ensembles => {
            let Some(l) = &a.lambda else { bail!("ensembles need --lambda") };
            let lambda = json::parse_partition(l)?;
            core(ensembles(&lambda, lambda.largest()))?.iter().map(json::ensemble).collect()
        }
        Kind::Triangles | Kind::Damts => {
            let Some(b) = &a.bottom else { bail!("triangles and DAMTs need --bottom") };
            let k = json::parse_ints(b)?;
            match a.kind {
                Kind::Triangles => core(monotone_triangles(&k))?.iter().map(json::triangle).collect(),
                _ => core(damts(&k))?.iter().map(json::damt).collect(),
            }
        }
    };
    Ok(json!({ "count": items.len(), "items": items }))
}

fn bijection(a: &Bijection) -> Result<(Value, bool)> {
    let lambda = json::parse_partition(&a.lambda)?;
    let t = json::parse_rat(&a.t)?;
    let x = json::parse_rats(&a.x)?;
    if x.len() != lambda.len() {
        bail!("{} values of x for {} parts", x.len(), lambda.len());
    }
    let pairs = core(bijection_pairs(&lambda, &t, &x))?;
    let all_equal = pairs.iter().all(|p| p.ensemble_weight == p.triangle_weight);
    let items: Vec<Value> = pairs
        .iter()
        .map(|p| {
            json!({
                "ensemble": json::ensemble(&p.ensemble),
                "triangle": json::triangle(&p.triangle),
                "ensemble_weight": json::rat(&p.ensemble_weight),
                "triangle_weight": json::rat(&p.triangle_weight),
            })
        })
        .collect();
    Ok((json!({ "lambda": lambda.to_string(), "pairs": items, "weights_agree": all_equal }), all_equal))
}

fn verify_cmd(a: &Verify, config: &Config, env_seed: Option<&str>, pool: &Pool) -> Result<(Value, bool)> {
    let settings = Settings {
        n: a.n.or(config.n).unwrap_or(2),
        p: a.p.or(config.p).unwrap_or(1),
        d: a.d.or(config.d).unwrap_or(4),
        seed: config.seed(a.seed, env_seed, DEFAULT_SEED)?,
    };
    let (draw, reports) = verify::run(a.target, &settings, pool)?;
    let passed = reports.iter().all(|r| r.passed());
    let value = json!({
        "target": verify::target_name(a.target),
        "settings": { "n": settings.n, "p": settings.p, "D": settings.d, "seed": settings.seed },
        "parameters": draw.to_json(),
        "status": if passed { "pass" } else { "fail" },
        "reports": reports.iter().map(json::report).collect::<Vec<_>>(),
    });
    Ok((value, passed))
}

fn dispatch(cli: &Cli, env_seed: Option<&str>) -> Result<(Value, bool)> {
    let config = match &cli.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    let pool = Pool::new(cli.jobs.or(config.jobs))?;
    match &cli.command {
        Command::EvalF(a) => Ok((eval_f(a)?, true)),
        Command::EvalRobbins(a) => Ok((eval_robbins(a)?, true)),
        Command::Enumerate(a) => Ok((enumerate(a)?, true)),
        Command::Bijection(a) => bijection(a),
        Command::Verify(a) => verify_cmd(a, &config, env_seed, &pool),
        Command::Pfaffian(a) => {
            let m = json::read_matrix(&a.file)?;
            let value = core(pfaffian(&m))?;
            Ok((json!({ "dim": m.dim(), "value": json::rat(&value) }), true))
        }
    }
}

/// Parse `args` (program name first), run the command and write its JSON
/// result to `out`. Diagnostics go to `err`.
pub fn run<I, T>(args: I, env_seed: Option<&str>, out: &mut dyn Write, err: &mut dyn Write) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                Outcome::Usage
            } else {
                let _ = write!(out, "{text}");
                Outcome::Pass
            };
        }
    };
    match dispatch(&cli, env_seed) {
        Ok((value, passed)) => {
            let text = serde_json::to_string_pretty(&value).expect("JSON values serialize");
            if writeln!(out, "{text}").is_err() {
                return Outcome::Usage;
            }
            if passed {
                Outcome::Pass
            } else {
                Outcome::Failed
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            Outcome::Usage
        }
    }
}
