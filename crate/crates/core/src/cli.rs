//! The `qshuffle` command line tool.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::algebra::AlgebraKind;
use crate::braided::BraidedVectorSpace;
use crate::error::{invalid, Error, Result};
use crate::filtration::{
    bound_constants, concentration_report, weight_filtration_A, weight_filtration_T, weighted_wordlength_filtration,
    wordlength_filtration, BoundConstants, FiltrationKind, FiltrationTable, WeightStatistic,
};
use crate::homology::{default_mode, tor_dims, RankMode};
use crate::hurwitz::{hurwitz_report, is_s3_transpositions, nichols_profile, NICHOLS_SEARCH_BOUND};
use crate::input::{validate_text, BraidingSpec};
use crate::scalar::Q;

#[derive(Parser, Debug)]
#[command(name = "qshuffle", version, about = "Filtrations and homology of quantum shuffle algebras")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Opts,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Validate a braiding spec (rack axioms, class closure, Yang-Baxter)
    Check,
    /// Graded dimensions of a filtration, one row per Gr index
    Table,
    /// Hurwitz-space Betti numbers, weights and bound verdicts
    Hurwitz,
    /// Average weight a(n) of the weight filtration on T(V)
    Stats,
    /// Nichols algebra dimensions
    Nichols,
    /// Tor of a tensor, shuffle or Nichols algebra
    Homology,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeArg {
    Exact,
    Modular,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Tsv,
    Json,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum SideArg {
    A,
    T,
}

#[derive(clap::Args, Debug, Clone, Default)]
pub struct Opts {
    /// Braiding spec file, or inline JSON starting with '{'
    #[arg(long, global = true)]
    pub spec: Option<String>,
    /// key=value file supplying defaults; flags win
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub nmax: Option<usize>,
    /// wordlen | weight | weighted:f1,f2,...
    #[arg(long, global = true)]
    pub filtration: Option<String>,
    /// tensor | shuffle | nichols
    #[arg(long, global = true)]
    pub algebra: Option<String>,
    /// Rank arithmetic; unset means exact up to degree 5, modular beyond
    #[arg(long, global = true, value_enum)]
    pub mode: Option<ModeArg>,
    #[arg(long, global = true)]
    pub primes: Option<usize>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Table side for the weight filtration
    #[arg(long, global = true, value_enum)]
    pub side: Option<SideArg>,
    /// Run past the chain-size guard
    #[arg(long, global = true)]
    pub force: bool,
    /// Print rationals as decimals with 6 significant digits
    #[arg(long, global = true)]
    pub decimal: bool,
    /// Top degree m of the Nichols algebra, for the weight bound
    #[arg(long, global = true)]
    pub nichols_top: Option<usize>,
    /// Ext generator bidegrees hom:n, comma separated (e.g. 1:1,4:6)
    #[arg(long, global = true)]
    pub ext_gens: Option<String>,
}

/// Fully resolved settings for one run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub spec: BraidingSpec,
    pub nmax: usize,
    pub filtration: FiltrationKind,
    pub algebra: AlgebraKind,
    pub mode: Option<ModeArg>,
    pub primes: usize,
    pub seed: u64,
    pub format: Format,
    pub side: SideArg,
    pub force: bool,
    pub decimal: bool,
    pub nichols_top: Option<usize>,
    pub ext_gens: Option<Vec<(usize, usize)>>,
}

impl RunConfig {
    pub fn rank_mode(&self, n: usize) -> RankMode {
        match self.mode {
            Some(ModeArg::Exact) => RankMode::Exact,
            Some(ModeArg::Modular) => RankMode::Modular { primes: self.primes, seed: self.seed },
            None => default_mode(n, self.primes, self.seed),
        }
    }

    fn q(&self, x: &Q) -> Value {
        render_q(x, self.decimal)
    }

    fn q_text(&self, x: &Q) -> String {
        match self.q(x) {
            Value::String(s) => s,
            v => v.as_f64().map(|f| f.to_string()).unwrap_or_default(),
        }
    }
}

/// Fraction string, or a 6-significant-digit number with `decimal`.
pub fn render_q(x: &Q, decimal: bool) -> Value {
    if !decimal {
        return Value::String(x.to_string());
    }
    let v = x.to_f64();
    if v == 0.0 {
        return json!(0.0);
    }
    let digits = (5 - v.abs().log10().floor() as i32).max(0) as usize;
    let s = format!("{v:.digits$}");
    json!(s.parse::<f64>().unwrap_or(v))
}

fn parse_config_file(path: &PathBuf) -> Result<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path)?;
    let mut out = BTreeMap::new();
    for (k, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return invalid(format!("{}:{}: expected key=value", path.display(), k + 1));
        };
        out.insert(key.trim().replace('_', "-"), value.trim().to_string());
    }
    Ok(out)
}

fn parse_gens(s: &str) -> Result<Vec<(usize, usize)>> {
    s.split(',')
        .map(|t| {
            let (a, b) = t.trim().split_once(':').ok_or_else(|| Error::InvalidInput(format!("bad bidegree {t:?}")))?;
            let p = |x: &str| x.trim().parse::<usize>().map_err(|_| Error::InvalidInput(format!("bad bidegree {t:?}")));
            Ok((p(a)?, p(b)?))
        })
        .collect()
}

fn value_enum<T: ValueEnum>(s: &str) -> Result<T> {
    T::from_str(s, true).map_err(|_| Error::InvalidInput(format!("bad value {s:?}")))
}

fn parse_num<T: std::str::FromStr>(key: &str, s: &str) -> Result<T> {
    s.parse().map_err(|_| Error::InvalidInput(format!("bad value for {key}: {s:?}")))
}

fn load_spec(s: &str) -> Result<BraidingSpec> {
    read_spec_text(s)?.parse()
}

fn read_spec_text(s: &str) -> Result<String> {
    if s.trim_start().starts_with('{') {
        Ok(s.to_string())
    } else {
        Ok(std::fs::read_to_string(s)?)
    }
}

/// Merges flags over the optional config file and fills defaults.
pub fn resolve(cmd: Command, opts: &Opts) -> Result<RunConfig> {
    let file = match &opts.config {
        Some(p) => parse_config_file(p)?,
        None => BTreeMap::new(),
    };
    let known = [
        "spec", "nmax", "filtration", "algebra", "mode", "primes", "seed", "format", "out", "jobs", "side", "force",
        "decimal", "nichols-top", "ext-gens",
    ];
    if let Some(k) = file.keys().find(|k| !known.contains(&k.as_str())) {
        return invalid(format!("unknown config key {k:?}"));
    }
    let get = |k: &str| file.get(k).map(String::as_str);
    let flag = |k: &str| get(k).map(|v| matches!(v, "1" | "true" | "yes")).unwrap_or(false);

    let spec_src = opts.spec.clone().or(get("spec").map(String::from));
    let spec = match spec_src {
        Some(s) => load_spec(&s)?,
        None => return invalid("--spec is required"),
    };
    let nmax = match (opts.nmax, get("nmax")) {
        (Some(n), _) => n,
        (None, Some(s)) => parse_num("nmax", s)?,
        (None, None) if cmd == Command::Nichols => NICHOLS_SEARCH_BOUND,
        (None, None) => 5,
    };
    let filtration = opts.filtration.as_deref().or(get("filtration")).unwrap_or("wordlen").parse()?;
    let algebra = opts.algebra.as_deref().or(get("algebra")).unwrap_or("shuffle").parse()?;
    let mode = match (opts.mode, get("mode")) {
        (Some(m), _) => Some(m),
        (None, Some(s)) => Some(value_enum(s)?),
        (None, None) => None,
    };
    let primes = match (opts.primes, get("primes")) {
        (Some(p), _) => p,
        (None, Some(s)) => parse_num("primes", s)?,
        (None, None) => 3,
    };
    if primes == 0 {
        return invalid("--primes must be positive");
    }
    let seed = match (opts.seed, get("seed")) {
        (Some(p), _) => p,
        (None, Some(s)) => parse_num("seed", s)?,
        (None, None) => 1,
    };
    let format = match (opts.format, get("format")) {
        (Some(f), _) => f,
        (None, Some(s)) => value_enum(s)?,
        (None, None) if matches!(cmd, Command::Table | Command::Check) => Format::Tsv,
        (None, None) => Format::Json,
    };
    let side = match (opts.side, get("side")) {
        (Some(f), _) => f,
        (None, Some(s)) => value_enum(s)?,
        (None, None) => SideArg::A,
    };
    let nichols_top = match (opts.nichols_top, get("nichols-top")) {
        (Some(m), _) => Some(m),
        (None, Some(s)) => Some(parse_num("nichols-top", s)?),
        (None, None) => None,
    };
    let ext_gens = opts.ext_gens.as_deref().or(get("ext-gens")).map(parse_gens).transpose()?;
    Ok(RunConfig {
        spec,
        nmax,
        filtration,
        algebra,
        mode,
        primes,
        seed,
        format,
        side,
        force: opts.force || flag("force"),
        decimal: opts.decimal || flag("decimal"),
        nichols_top,
        ext_gens,
    })
}

fn config_jobs_out(opts: &Opts) -> Result<(Option<usize>, Option<PathBuf>)> {
    let file = match &opts.config {
        Some(p) => parse_config_file(p)?,
        None => BTreeMap::new(),
    };
    let jobs = match (opts.jobs, file.get("jobs")) {
        (Some(j), _) => Some(j),
        (None, Some(s)) => Some(parse_num("jobs", s)?),
        (None, None) => None,
    };
    let out = opts.out.clone().or(file.get("out").map(PathBuf::from));
    Ok((jobs, out))
}

pub fn build_table(bvs: &BraidedVectorSpace, cfg: &RunConfig) -> Result<FiltrationTable> {
    let t = match (&cfg.filtration, cfg.side) {
        (FiltrationKind::WordLength, SideArg::A) => wordlength_filtration(bvs, cfg.nmax)?,
        (FiltrationKind::WeightedWordLength(f), SideArg::A) => weighted_wordlength_filtration(bvs, f, cfg.nmax)?,
        (FiltrationKind::Weight, SideArg::A) => weight_filtration_A(bvs, cfg.nmax)?,
        (FiltrationKind::Weight, SideArg::T) => weight_filtration_T(bvs, cfg.nmax)?,
        (_, SideArg::T) => return invalid("only the weight filtration has a T side"),
    };
    t.check()?;
    Ok(t)
}

/// Output of one subcommand.
pub struct Output {
    pub text: String,
    /// validation failures still print their report
    pub exit_code: i32,
}

impl Output {
    fn ok(text: String) -> Output {
        Output { text, exit_code: 0 }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values always serialize");
    s.push('\n');
    s
}

pub fn cmd_check(text: &str, format: Format) -> Output {
    let rep = validate_text(text);
    let body = match format {
        Format::Tsv => rep.to_tsv(),
        Format::Json => pretty(&serde_json::to_value(&rep).expect("report serializes")),
    };
    Output { text: body, exit_code: if rep.pass { 0 } else { 2 } }
}

pub fn cmd_table(cfg: &RunConfig) -> Result<Output> {
    let bvs = cfg.spec.build()?;
    let t = build_table(&bvs, cfg)?;
    Ok(Output::ok(match cfg.format {
        Format::Tsv => t.to_tsv(),
        Format::Json => pretty(&t.to_json()),
    }))
}

fn stats_json(s: &WeightStatistic, cfg: &RunConfig) -> Value {
    let rows: Vec<Value> = (1..s.a.len())
        .map(|n| json!({"n": n, "a": cfg.q(&s.a[n]), "a_over_n": cfg.q(&s.a_over_n[n]), "running_inf": cfg.q(&s.running_inf[n])}))
        .collect();
    json!({
        "nmax": s.a.len() - 1,
        "rows": rows,
        "superadditive_ok": s.superadditive_ok,
        "monotone_ok": s.monotone_ok,
        "violations": s.violations,
        "c_estimate": cfg.q(&s.c_estimate),
    })
}

pub fn cmd_stats(cfg: &RunConfig) -> Result<Output> {
    let bvs = cfg.spec.build()?;
    let s = concentration_report(&bvs, cfg.nmax)?;
    Ok(Output::ok(match cfg.format {
        Format::Json => pretty(&stats_json(&s, cfg)),
        Format::Tsv => {
            let mut out = String::from("n\ta(n)\ta(n)/n\tinf\n");
            for n in 1..s.a.len() {
                out.push_str(&format!(
                    "{n}\t{}\t{}\t{}\n",
                    cfg.q_text(&s.a[n]),
                    cfg.q_text(&s.a_over_n[n]),
                    cfg.q_text(&s.running_inf[n])
                ));
            }
            out.push_str(&format!("# superadditive\t{}\n", s.superadditive_ok));
            out.push_str(&format!("# monotone\t{}\n", s.monotone_ok));
            out.push_str(&format!("# c_estimate\t{}\n", cfg.q_text(&s.c_estimate)));
            out
        }
    }))
}

pub fn cmd_nichols(cfg: &RunConfig) -> Result<Output> {
    let bvs = cfg.spec.build()?;
    let p = nichols_profile(&bvs, cfg.nmax)?;
    Ok(Output::ok(match cfg.format {
        Format::Json => pretty(&serde_json::to_value(&p)?),
        Format::Tsv => {
            let mut out = String::from("n\tdim\n");
            for (n, d) in p.dims.iter().enumerate() {
                out.push_str(&format!("{n}\t{d}\n"));
            }
            let top = p.max_degree.map(|m| m.to_string()).unwrap_or_else(|| format!("> {}", cfg.nmax));
            out.push_str(&format!("# top_degree\t{top}\n# total\t{}\n", p.total));
            out
        }
    }))
}

pub fn cmd_homology(cfg: &RunConfig) -> Result<Output> {
    let bvs = cfg.spec.build()?;
    let t = tor_dims(&bvs, cfg.algebra, cfg.nmax, |n| cfg.rank_mode(n), cfg.force)?;
    Ok(Output::ok(match cfg.format {
        Format::Json => pretty(&t.to_json()),
        Format::Tsv => {
            let mut out = String::from("m\tn\tdim\n");
            for (&(m, n, _), &d) in &t.entries {
                out.push_str(&format!("{m}\t{n}\t{d}\n"));
            }
            out.push_str(&format!("# verified\t{}\n", t.verified));
            out
        }
    }))
}

/// Ext generators of FK3, used when the input is S3 with its transpositions
/// and no bidegrees are given on the command line.
pub const FK3_EXT_GENERATORS: [(usize, usize); 4] = [(1, 1), (1, 1), (1, 1), (4, 6)];

fn hurwitz_constants(cfg: &RunConfig, s3: bool) -> Result<Option<BoundConstants>> {
    let gens = match (&cfg.ext_gens, s3) {
        (Some(g), _) => g.clone(),
        (None, true) => FK3_EXT_GENERATORS.to_vec(),
        (None, false) => return Ok(None),
    };
    let m = match cfg.nichols_top {
        Some(m) => m,
        None => {
            let p = nichols_profile(&cfg.spec.build()?, NICHOLS_SEARCH_BOUND)?;
            match p.max_degree {
                Some(m) => m,
                None => return invalid(format!("Nichols algebra is nonzero through degree {NICHOLS_SEARCH_BOUND}; pass --nichols-top")),
            }
        }
    };
    bound_constants(m, &gens).map(Some)
}

pub fn cmd_hurwitz(cfg: &RunConfig) -> Result<Output> {
    let gd = cfg.spec.group_data()?;
    let s3 = is_s3_transpositions(&gd);
    let constants = hurwitz_constants(cfg, s3)?;
    let rep = hurwitz_report(&gd, cfg.nmax, |n| cfg.rank_mode(n), constants, cfg.force)?;
    if !rep.orbit_check() {
        return Err(Error::Gate("Tor_{n,n} disagrees with the braid orbit count".into()));
    }
    if !rep.convergence_check() {
        return Err(Error::Gate("weight decomposition does not sum to the Betti numbers".into()));
    }
    Ok(Output::ok(match cfg.format {
        Format::Json => pretty(&rep.to_json(|x| cfg.q(x))),
        Format::Tsv => {
            let mut out = String::from("n\ti\tm\tw\tfrob_weight\tdim\tbound\n");
            for r in &rep.rows {
                let v = serde_json::to_value(r.bound)?;
                out.push_str(&format!(
                    "{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
                    r.n,
                    r.i,
                    r.m,
                    r.w,
                    r.frob_weight,
                    r.dim,
                    v.as_str().unwrap_or("")
                ));
            }
            out
        }
    }))
}

fn run_command(cli: &Cli) -> Result<Output> {
    let (jobs, _) = config_jobs_out(&cli.opts)?;
    if let Some(j) = jobs {
        set_jobs(j)?;
    }
    if cli.command == Command::Check {
        let file = match &cli.opts.config {
            Some(p) => parse_config_file(p)?,
            None => BTreeMap::new(),
        };
        let src = cli
            .opts
            .spec
            .clone()
            .or(file.get("spec").cloned())
            .ok_or_else(|| Error::InvalidInput("--spec is required".into()))?;
        let format = match (cli.opts.format, file.get("format")) {
            (Some(f), _) => f,
            (None, Some(s)) => value_enum(s)?,
            (None, None) => Format::Tsv,
        };
        return Ok(cmd_check(&read_spec_text(&src)?, format));
    }
    let cfg = resolve(cli.command, &cli.opts)?;
    match cli.command {
        Command::Check => unreachable!(),
        Command::Table => cmd_table(&cfg),
        Command::Hurwitz => cmd_hurwitz(&cfg),
        Command::Stats => cmd_stats(&cfg),
        Command::Nichols => cmd_nichols(&cfg),
        Command::Homology => cmd_homology(&cfg),
    }
}

#[cfg(feature = "parallel")]
fn set_jobs(j: usize) -> Result<()> {
    if j == 0 {
        return invalid("--jobs must be positive");
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(j)
        .build_global()
        .map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))
}

#[cfg(not(feature = "parallel"))]
fn set_jobs(_: usize) -> Result<()> {
    Ok(())
}

/// Parses arguments, runs, writes output; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = run_command(&cli).and_then(|out| {
        let (_, path) = config_jobs_out(&cli.opts)?;
        match path {
            Some(p) => std::fs::write(p, &out.text)?,
            None => std::io::stdout().write_all(out.text.as_bytes())?,
        }
        Ok(out.exit_code)
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn main() -> i32 {
    main_with_args(std::env::args_os())
}
