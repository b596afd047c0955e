//! The `lpbp` command line.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::error::{invalid, Error, Result};
use crate::geometry::SphereGrid;
use crate::io::{moment_body_to_json, read_body, read_input, Input};
use crate::mixed::mixed_volume_r;
use crate::moment::{centroid_body, domain_centroid_body, domain_moment_body, field_moment_body, moment_body};
use crate::params::{c1, c1_pow_r_closed_form, layer_constant, layer_constant_oracle, ConstantBundle, ParamSet};
use crate::verify::{default_lambda_grid, run_batch, write_csv, write_jsonl, CheckId, DeficitReport, Generator, Sizes};

/// Environment variable naming the default config file.
pub const CONFIG_ENV: &str = "LPBP_CONFIG";

#[derive(Parser, Debug)]
#[command(name = "lpbp", version, about = "L_p moment bodies, mixed volumes and numerical checks of their inequalities")]
struct Cli {
    /// Config file of key=value lines (defaults to $LPBP_CONFIG).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print every constant for one parameter set as JSON.
    Constants(ParamArgs),
    /// Compute the L_p moment (or centroid) body of a body, domain or field.
    MomentBody(MomentBodyArgs),
    /// Compute V_r(K, L) of two bodies.
    MixedVolume(MixedVolumeArgs),
    /// Check one inequality on a batch of random instances.
    Verify(VerifyArgs),
    /// Check one inequality across a grid of lambda values.
    Sweep(SweepArgs),
    /// Compare closed forms with their independent numerical oracles.
    Oracle(OracleArgs),
}

#[derive(Args, Debug, Clone)]
struct ParamArgs {
    #[arg(long, default_value_t = 2)]
    n: usize,
    #[arg(long, default_value_t = 2.0)]
    p: f64,
    #[arg(long, default_value_t = 1.0)]
    r: f64,
    #[arg(long, default_value_t = 2.0)]
    lambda: f64,
}

impl ParamArgs {
    fn params(&self) -> Result<ParamSet> {
        ParamSet::new(self.n, self.p, self.r, self.lambda)
    }
}

#[derive(Args, Debug)]
struct MomentBodyArgs {
    /// JSON body, domain, radial field or grid-field header.
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    p: f64,
    /// Normalize to the centroid body (bodies and domains only).
    #[arg(long)]
    centroid: bool,
    /// Sphere grid resolution (circle nodes, or m_theta in 3D).
    #[arg(long)]
    sphere: Option<usize>,
    /// Write the JSON here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct MixedVolumeArgs {
    #[arg(long)]
    k: PathBuf,
    #[arg(long)]
    l: PathBuf,
    #[arg(long, default_value_t = 1.0)]
    r: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug)]
struct BatchArgs {
    /// Instance generator; each inequality has its own default.
    #[arg(long)]
    generator: Option<String>,
    /// Number of seeds.
    #[arg(long, default_value_t = 10)]
    seeds: u64,
    /// First seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Also write the full reports as JSON lines to this file.
    #[arg(long)]
    jsonl: Option<PathBuf>,
    /// Primary output file (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Primary output format.
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Record wall-clock times in the output.
    #[arg(long)]
    timing: bool,
    /// Nodes per axis of generated grid fields.
    #[arg(long)]
    field_grid: Option<usize>,
    /// Sphere grid resolution.
    #[arg(long)]
    sphere: Option<usize>,
    /// Cut extremal profiles off at this radius.
    #[arg(long = "R")]
    truncation: Option<f64>,
    /// Override the slack of the one-sided test.
    #[arg(long)]
    slack: Option<f64>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Inequality id (bp, bp-domain, bathtub, mixed, pp, bmvm, t1vmv, taux, lnf, lvnp, main, chain, remark).
    #[arg(long)]
    id: String,
    #[command(flatten)]
    params: ParamArgs,
    #[command(flatten)]
    batch: BatchArgs,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long, default_value = "main")]
    id: String,
    /// Comma-separated lambda values; ten per branch when absent.
    #[arg(long, value_delimiter = ',')]
    lambda_grid: Option<Vec<f64>>,
    #[command(flatten)]
    params: ParamArgs,
    #[command(flatten)]
    batch: BatchArgs,
}

#[derive(Args, Debug)]
struct OracleArgs {
    /// What to compare; only `constants` exists.
    #[arg(value_parser = ["constants"])]
    what: String,
}

/// Settings merged from the config file; flags override them.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RunConfig {
    pub sphere: Option<usize>,
    pub field_grid: Option<usize>,
    pub truncation: Option<f64>,
    pub slack: Option<f64>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub format: Option<String>,
}

impl RunConfig {
    /// Parses `key = value` lines; `#` starts a comment. Unknown keys and
    /// nonpositive sizes are rejected.
    pub fn parse(text: &str) -> Result<Self> {
        let mut c = RunConfig::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::InvalidArgument(format!("config line {}: expected key=value", i + 1)))?;
            let (k, v) = (k.trim(), v.trim());
            let bad = |what: &str| Error::InvalidArgument(format!("config line {}: {what} '{v}' for {k}", i + 1));
            let size = || -> Result<usize> {
                match v.parse::<usize>() {
                    Ok(s) if s > 0 => Ok(s),
                    _ => Err(bad("expected a positive integer, got")),
                }
            };
            let positive = || -> Result<f64> {
                match v.parse::<f64>() {
                    Ok(s) if s > 0.0 && s.is_finite() => Ok(s),
                    _ => Err(bad("expected a positive number, got")),
                }
            };
            match k {
                "sphere" => c.sphere = Some(size()?),
                "field_grid" => c.field_grid = Some(size()?),
                "R" | "truncation" => c.truncation = Some(positive()?),
                "slack" => c.slack = Some(positive()?),
                "seed" => c.seed = Some(v.parse().map_err(|_| bad("expected an integer, got"))?),
                "out" => c.out = Some(PathBuf::from(v)),
                "format" => match v {
                    "csv" | "json" => c.format = Some(v.to_string()),
                    _ => return Err(bad("expected csv or json, got")),
                },
                other => return invalid(format!("config line {}: unknown key '{other}'", i + 1)),
            }
        }
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NumericFailure(_) | Error::DegenerateSource(_) | Error::DegenerateField(_) => 1,
        _ => 2,
    }
}

/// Runs the command line and returns the exit status.
pub fn execute<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    execute_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// As [`execute`], with explicit output streams.
pub fn execute_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    match run(cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn load_config(cli_path: &Option<PathBuf>) -> Result<RunConfig> {
    if let Some(p) = cli_path {
        return RunConfig::load(p);
    }
    match std::env::var_os(CONFIG_ENV) {
        Some(p) if !p.is_empty() => RunConfig::load(Path::new(&p)),
        _ => Ok(RunConfig::default()),
    }
}

fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let config = load_config(&cli.config)?;
    match cli.command {
        Command::Constants(a) => {
            let bundle = ConstantBundle::compute(&a.params()?)?;
            writeln!(out, "{}", serde_json::to_string_pretty(&bundle)?)?;
            Ok(0)
        }
        Command::MomentBody(a) => moment_body_cmd(a, &config, out),
        Command::MixedVolume(a) => {
            let k = read_body(&a.k)?;
            let l = read_body(&a.l)?;
            let v = mixed_volume_r(&k, &l, a.r)?;
            writeln!(out, "{}", serde_json::to_string_pretty(&v)?)?;
            Ok(0)
        }
        Command::Verify(a) => {
            let id = CheckId::parse(&a.id)?;
            let params = a.params.params()?;
            let setup = BatchSetup::new(id, &a.batch, &config, params.n)?;
            let results = run_batch(id, setup.generator, &params, setup.sizes, setup.first_seed, a.batch.seeds);
            setup.finish(results.into_iter().collect(), out, err)
        }
        Command::Sweep(a) => {
            let id = CheckId::parse(&a.id)?;
            let base = a.params.params()?;
            let setup = BatchSetup::new(id, &a.batch, &config, base.n)?;
            let grid = a.lambda_grid.clone().unwrap_or_else(|| default_lambda_grid(base.n, base.p));
            let mut results = Vec::new();
            for lambda in grid {
                let params = ParamSet::new(base.n, base.p, base.r, lambda)?;
                results.extend(run_batch(id, setup.generator, &params, setup.sizes, setup.first_seed, a.batch.seeds));
            }
            setup.finish(results, out, err)
        }
        Command::Oracle(_) => oracle_constants(out),
    }
}

fn moment_body_cmd(a: MomentBodyArgs, config: &RunConfig, out: &mut dyn Write) -> Result<i32> {
    let input = read_input(&a.input)?;
    let dim = match &input {
        Input::Body(k) => k.dim(),
        Input::Domain(m) => m.dim(),
        Input::Field(f) => f.dim(),
    };
    let grid = match a.sphere.or(config.sphere) {
        Some(s) => SphereGrid::with_resolution(dim, s)?,
        None => SphereGrid::default_for(dim)?,
    };
    let m = match (&input, a.centroid) {
        (Input::Body(k), false) => moment_body(k, a.p, grid)?,
        (Input::Body(k), true) => centroid_body(k, a.p, grid)?,
        (Input::Domain(d), false) => domain_moment_body(d, a.p)?,
        (Input::Domain(d), true) => domain_centroid_body(d, a.p)?,
        (Input::Field(f), false) => field_moment_body(f, a.p, grid)?,
        (Input::Field(_), true) => return invalid("centroid bodies are defined for bodies and domains"),
    };
    let mut v = moment_body_to_json(&m);
    v["volume"] = json!(m.volume());
    let text = serde_json::to_string_pretty(&v)?;
    match a.out.or(config.out.clone()) {
        Some(path) => std::fs::write(path, text + "\n")?,
        None => writeln!(out, "{text}")?,
    }
    Ok(0)
}

struct BatchSetup {
    id: CheckId,
    generator: Generator,
    sizes: Sizes,
    first_seed: u64,
    slack: Option<f64>,
    timing: bool,
    format: Format,
    out: Option<PathBuf>,
    jsonl: Option<PathBuf>,
}

impl BatchSetup {
    fn new(id: CheckId, b: &BatchArgs, config: &RunConfig, n: usize) -> Result<Self> {
        let generator = match &b.generator {
            Some(g) => Generator::parse(g)?,
            None => id.default_generator(),
        };
        let mut sizes = Sizes::default_for(n);
        if let Some(s) = b.sphere.or(config.sphere) {
            sizes.sphere = s;
        }
        if let Some(s) = b.field_grid.or(config.field_grid) {
            sizes.field_grid = s;
        }
        sizes.truncation = b.truncation.or(config.truncation);
        if sizes.sphere == 0 || sizes.field_grid < 3 {
            return invalid("grid sizes must be positive (field grids need at least 3 nodes)");
        }
        if let Some(r) = sizes.truncation {
            if !(r > 0.0) {
                return invalid("truncation radius must be positive");
            }
        }
        let format = match (b.format, config.format.as_deref()) {
            (Some(f), _) => f,
            (None, Some("json")) => Format::Json,
            _ => Format::Csv,
        };
        Ok(BatchSetup {
            id,
            generator,
            sizes,
            first_seed: b.seed.or(config.seed).unwrap_or(0),
            slack: b.slack.or(config.slack),
            timing: b.timing,
            format,
            out: b.out.clone().or(config.out.clone()),
            jsonl: b.jsonl.clone(),
        })
    }

    fn finish(&self, results: Vec<Result<DeficitReport>>, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
        let mut reports = Vec::with_capacity(results.len());
        let mut code = 0;
        for (i, r) in results.into_iter().enumerate() {
            match r {
                Ok(mut rep) => {
                    if let Some(s) = self.slack {
                        rep.slack = s;
                        let links_ok = rep.details.get("links_ordered").and_then(|v| v.as_bool()).unwrap_or(true);
                        rep.pass = rep.deficit >= 1.0 - s && links_ok;
                    }
                    if !self.timing {
                        rep.time_ms = 0;
                    }
                    if !rep.ok() {
                        code = 1;
                        writeln!(err, "{}", serde_json::to_string(&rep)?)?;
                    }
                    reports.push(rep);
                }
                Err(e) => {
                    let c = exit_code(&e);
                    if c == 2 {
                        return Err(e);
                    }
                    code = 1;
                    let failure = json!({"id": self.id.name(), "index": i, "generator": self.generator.name(), "error": e.to_string()});
                    writeln!(err, "{failure}")?;
                }
            }
        }
        let mut primary: Box<dyn Write> = match &self.out {
            Some(p) => Box::new(BufWriter::new(File::create(p)?)),
            None => Box::new(&mut *out),
        };
        match self.format {
            Format::Csv => write_csv(&mut primary, &reports)?,
            Format::Json => write_jsonl(&mut primary, &reports)?,
        }
        primary.flush()?;
        if let Some(p) = &self.jsonl {
            let mut f = BufWriter::new(File::create(p)?);
            write_jsonl(&mut f, &reports)?;
            f.flush()?;
        }
        Ok(code)
    }
}

/// Parameter sets on which the closed forms are compared with their oracles.
pub fn oracle_grid() -> Vec<ParamSet> {
    let mut out = Vec::new();
    for n in [2usize, 3] {
        for p in [1.0, 2.0, 3.0] {
            let low = n as f64 / (n as f64 + p);
            for lambda in [low + 0.05, 0.9, 1.5, 2.0, 3.0] {
                for r in [1.0, 1.5] {
                    if let Ok(ps) = ParamSet::new(n, p, r, lambda) {
                        out.push(ps);
                    }
                }
            }
        }
    }
    out
}

fn oracle_constants(out: &mut dyn Write) -> Result<i32> {
    let mut max_layer: f64 = 0.0;
    let mut max_c1: f64 = 0.0;
    let mut rows = Vec::new();
    for ps in oracle_grid() {
        let a = layer_constant(&ps)?.a;
        let oracle = layer_constant_oracle(&ps)?;
        let d_layer = (a - oracle).abs() / oracle;
        max_layer = max_layer.max(d_layer);
        let mut row = BTreeMap::new();
        row.insert("n", json!(ps.n));
        row.insert("p", json!(ps.p));
        row.insert("r", json!(ps.r));
        row.insert("lambda", json!(ps.lambda));
        row.insert("a", json!(a));
        row.insert("a_oracle", json!(oracle));
        if ps.r > 1.0 && ps.r < ps.nf() {
            let c = c1(&ps)?.powf(ps.r);
            let closed = c1_pow_r_closed_form(&ps)?;
            let d = (c - closed).abs() / closed;
            max_c1 = max_c1.max(d);
            row.insert("c1_pow_r", json!(c));
            row.insert("c1_pow_r_closed_form", json!(closed));
        }
        rows.push(row);
    }
    let ok = max_layer <= 1e-8 && max_c1 <= 1e-8;
    let report = json!({
        "max_rel_discrepancy_a": max_layer,
        "max_rel_discrepancy_c1": max_c1,
        "max_rel_discrepancy": max_layer.max(max_c1),
        "pass": ok,
        "cases": rows,
    });
    writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
    Ok(if ok { 0 } else { 1 })
}
