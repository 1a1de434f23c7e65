//! Command-line front end.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{verify_net, VerificationReport};
use crate::dyadic::DyadicRational;
use crate::error::Error;
use crate::f2::{enumerate_subspaces, Limits, Subspace};
use crate::merit::{wafom, wafom_exact_auto, Method};
use crate::netfile::{read_net_file, write_net_file};
use crate::qmc::{
    batch_rng, qmc_integrate, random_net_with, spearman, to_points, FunctionKind, TestFunction,
};
use crate::report::{render, ser_f64, Format};
use crate::weights::weight_distribution;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_PARSE: i32 = 3;
pub const EXIT_CAP: i32 = 4;
pub const EXIT_VERIFY: i32 = 5;

#[derive(Debug, Parser)]
#[command(
    name = "wafom",
    version,
    about = "Walsh figure of merit of digital nets over F2"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// WAFOM of each net.
    Wafom(WafomArgs),
    /// Check each net against the minimum-weight and WAFOM lower bounds.
    Verify(VerifyArgs),
    /// Random search for the net with the smallest WAFOM.
    Search(SearchArgs),
    /// QMC integration error of a test function on each net.
    Integrate(IntegrateArgs),
    /// Points of one net as CSV with exact decimal coordinates.
    Points(SingleNetArgs),
    /// Dick weight distribution of the dual space of one net, as CSV.
    Weights(SingleNetArgs),
}

/// `s,n,m[,count]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenSpec {
    pub s: usize,
    pub n: usize,
    pub m: usize,
    pub count: Option<usize>,
}

impl FromStr for GenSpec {
    type Err = String;

    fn from_str(text: &str) -> Result<Self, String> {
        let parts: Vec<&str> = text.split(',').map(str::trim).collect();
        if !(3..=4).contains(&parts.len()) {
            return Err(format!("expected s,n,m[,count], got {text:?}"));
        }
        let nums: Vec<usize> = parts
            .iter()
            .map(|p| {
                p.parse::<usize>()
                    .map_err(|_| format!("not a nonnegative integer: {p:?}"))
            })
            .collect::<Result<_, _>>()?;
        if nums[0] == 0 || nums[1] == 0 {
            return Err("s and n must be positive".into());
        }
        Ok(GenSpec {
            s: nums[0],
            n: nums[1],
            m: nums[2],
            count: nums.get(3).copied(),
        })
    }
}

#[derive(Debug, Clone, Args)]
pub struct NetSource {
    /// Net file (repeatable).
    #[arg(long = "net", value_name = "FILE")]
    pub nets: Vec<PathBuf>,
    /// Generate nets: `s,n,m,count` random nets, or `s,n,m` with --exhaustive.
    #[arg(long = "gen", value_name = "S,N,M[,COUNT]")]
    pub generate: Option<GenSpec>,
    /// Enumerate every m-dimensional subspace for the --gen shape.
    #[arg(long)]
    pub exhaustive: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output file; stdout when omitted.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Largest space dimension that may be enumerated.
    #[arg(long, default_value_t = Limits::DEFAULT.max_enum_dim)]
    pub cap_dim: usize,
    /// Largest s*n for --exhaustive.
    #[arg(long, default_value_t = Limits::DEFAULT.max_subspace_sn)]
    pub cap_sn: usize,
}

impl OutputArgs {
    fn limits(&self) -> Result<Limits, CliError> {
        if self.cap_dim == 0 || self.cap_sn == 0 {
            return Err(CliError::usage("caps must be positive"));
        }
        Ok(Limits {
            max_enum_dim: self.cap_dim,
            max_subspace_sn: self.cap_sn,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Dual,
    Points,
    Exact,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::Dual => Method::DualEnum,
            MethodArg::Points => Method::PointSum,
            MethodArg::Exact => Method::Exact,
        }
    }
}

#[derive(Debug, Args)]
pub struct WafomArgs {
    #[command(flatten)]
    pub source: NetSource,
    #[command(flatten)]
    pub output: OutputArgs,
    #[arg(long, value_enum, default_value_t = MethodArg::Exact)]
    pub method: MethodArg,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub source: NetSource,
    #[command(flatten)]
    pub output: OutputArgs,
    /// The constant C' > 1/2 of the bound 2^(-C' m^2 / s).
    #[arg(long = "cprime", default_value_t = 1.0)]
    pub c_prime: f64,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    /// `s,n,m,count`.
    #[arg(long = "gen", value_name = "S,N,M,COUNT")]
    pub generate: GenSpec,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
    /// Where to write the best net.
    #[arg(long, value_name = "FILE", default_value = "best_net.txt")]
    pub net_out: PathBuf,
}

#[derive(Debug, Args)]
pub struct IntegrateArgs {
    #[command(flatten)]
    pub source: NetSource,
    #[command(flatten)]
    pub output: OutputArgs,
    /// One of const1, linear, product, exp.
    #[arg(long)]
    pub function: String,
}

#[derive(Debug, Args)]
pub struct SingleNetArgs {
    #[arg(long = "net", value_name = "FILE")]
    pub net: PathBuf,
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = Limits::DEFAULT.max_enum_dim)]
    pub cap_dim: usize,
}

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn usage(msg: impl Into<String>) -> Self {
        CliError {
            code: EXIT_USAGE,
            message: msg.into(),
        }
    }

    fn from_lib(err: Error, context: Option<&str>) -> Self {
        let code = match &err {
            Error::Parse { .. } => EXIT_PARSE,
            Error::EnumerationCap { .. } | Error::SubspaceCap { .. } => EXIT_CAP,
            Error::Io(_) => EXIT_IO,
            _ => EXIT_USAGE,
        };
        let message = match context {
            Some(c) => format!("{c}: {err}"),
            None => err.to_string(),
        };
        CliError { code, message }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

/// A net with the label used in report rows.
#[derive(Clone, Debug)]
pub struct NamedNet {
    pub id: String,
    pub net: Subspace,
}

fn lib_err(id: &str) -> impl Fn(Error) -> CliError + '_ {
    move |e| CliError::from_lib(e, Some(id))
}

pub fn load_nets(source: &NetSource, limits: Limits) -> Result<Vec<NamedNet>, CliError> {
    let mut out = Vec::new();
    for path in &source.nets {
        let id = path.display().to_string();
        let net = read_net_file(path).map_err(lib_err(&id))?;
        out.push(NamedNet { id, net });
    }
    if let Some(spec) = source.generate {
        if source.exhaustive {
            let all = enumerate_subspaces(spec.s, spec.n, spec.m, limits)
                .map_err(|e| CliError::from_lib(e, Some("--gen")))?;
            out.extend(all.enumerate().map(|(i, net)| NamedNet {
                id: format!("exhaustive:{i}"),
                net,
            }));
        } else {
            let count = spec.count.ok_or_else(|| {
                CliError::usage("--gen needs s,n,m,count unless --exhaustive is set")
            })?;
            out.extend(generate(spec, count, source.seed)?);
        }
    } else if source.exhaustive {
        return Err(CliError::usage("--exhaustive needs --gen s,n,m"));
    }
    if out.is_empty() {
        return Err(CliError::usage(
            "no nets given; use --net FILE or --gen s,n,m,count",
        ));
    }
    Ok(out)
}

fn generate(spec: GenSpec, count: usize, seed: u64) -> Result<Vec<NamedNet>, CliError> {
    (0..count)
        .into_par_iter()
        .map(|i| {
            let net = random_net_with(spec.s, spec.n, spec.m, &mut batch_rng(seed, i as u64))
                .map_err(|e| CliError::from_lib(e, Some("--gen")))?;
            Ok(NamedNet {
                id: format!("random:{i}"),
                net,
            })
        })
        .collect()
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError {
            code: EXIT_IO,
            message: format!("{}: {e}", path.display()),
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

#[derive(Debug, Serialize)]
pub struct WafomRow {
    pub net: String,
    pub s: usize,
    pub n: usize,
    pub m: usize,
    pub method: &'static str,
    #[serde(serialize_with = "ser_f64")]
    pub wafom: f64,
    #[serde(serialize_with = "ser_f64")]
    pub wafom_log2: f64,
    pub exact: String,
}

pub fn cmd_wafom(args: &WafomArgs) -> Result<i32, CliError> {
    let limits = args.output.limits()?;
    let nets = load_nets(&args.source, limits)?;
    let method = Method::from(args.method);
    let rows: Vec<WafomRow> = nets
        .par_iter()
        .map(|nn| {
            let v = wafom(&nn.net, method, limits).map_err(lib_err(&nn.id))?;
            Ok(WafomRow {
                net: nn.id.clone(),
                s: nn.net.s(),
                n: nn.net.n(),
                m: nn.net.dim(),
                method: method.as_str(),
                wafom: v.float_value,
                wafom_log2: v.log2_value,
                exact: v.exact.map(|e| e.to_string()).unwrap_or_default(),
            })
        })
        .collect::<Result<_, CliError>>()?;
    let text = render(&rows, args.output.format).map_err(|e| CliError::from_lib(e, None))?;
    emit(args.output.out.as_deref(), &text)?;
    Ok(EXIT_OK)
}

#[derive(Debug, Serialize)]
pub struct VerifyRow {
    pub net: String,
    pub s: usize,
    pub n: usize,
    pub m: usize,
    pub c_prime: f64,
    pub delta: u64,
    pub delta_bound: u64,
    #[serde(serialize_with = "ser_f64")]
    pub wafom: f64,
    #[serde(serialize_with = "ser_f64")]
    pub wafom_log2: f64,
    pub wafom_exact: DyadicRational,
    pub lower_bound_log2: f64,
    pub threshold_ok: bool,
    pub wfdelta_ok: bool,
    pub lemma_ok: bool,
    pub theorem_ok: bool,
}

impl VerifyRow {
    fn new(net: String, r: VerificationReport) -> Self {
        VerifyRow {
            net,
            s: r.s,
            n: r.n,
            m: r.m,
            c_prime: r.c_prime,
            delta: r.delta,
            delta_bound: r.delta_bound,
            wafom: r.wafom,
            wafom_log2: r.wafom_log2,
            wafom_exact: r.wafom_exact,
            lower_bound_log2: r.lower_bound_log2,
            threshold_ok: r.threshold_ok,
            wfdelta_ok: r.wfdelta_ok,
            lemma_ok: r.lemma_ok,
            theorem_ok: r.theorem_ok,
        }
    }

    fn is_violation(&self) -> bool {
        self.threshold_ok && !self.theorem_ok
    }
}

fn check_c_prime(c: f64) -> Result<(), CliError> {
    if !(c.is_finite() && c > 0.5) {
        return Err(CliError::usage(format!(
            "--cprime must be a real number > 1/2, got {c}"
        )));
    }
    Ok(())
}

pub fn cmd_verify(args: &VerifyArgs) -> Result<i32, CliError> {
    check_c_prime(args.c_prime)?;
    let limits = args.output.limits()?;
    let nets = load_nets(&args.source, limits)?;
    let rows: Vec<VerifyRow> = nets
        .par_iter()
        .map(|nn| {
            let r = verify_net(&nn.net, args.c_prime, limits).map_err(lib_err(&nn.id))?;
            Ok(VerifyRow::new(nn.id.clone(), r))
        })
        .collect::<Result<_, CliError>>()?;
    let text = render(&rows, args.output.format).map_err(|e| CliError::from_lib(e, None))?;
    emit(args.output.out.as_deref(), &text)?;
    let violations: Vec<&str> = rows
        .iter()
        .filter(|r| r.is_violation())
        .map(|r| r.net.as_str())
        .collect();
    if !violations.is_empty() {
        return Err(CliError {
            code: EXIT_VERIFY,
            message: format!(
                "lower bound violated by {} net(s): {}",
                violations.len(),
                violations.join(", ")
            ),
        });
    }
    Ok(EXIT_OK)
}

#[derive(Debug, Serialize)]
pub struct SearchRow {
    pub s: usize,
    pub n: usize,
    pub m: usize,
    pub count: usize,
    pub seed: u64,
    pub best_index: usize,
    #[serde(serialize_with = "ser_f64")]
    pub wafom: f64,
    #[serde(serialize_with = "ser_f64")]
    pub wafom_log2: f64,
    pub wafom_exact: DyadicRational,
    /// `wafom_log2 / (-m^2 / s)`: the constant `C` with `WAFOM = 2^(-C m^2 / s)`.
    #[serde(serialize_with = "ser_f64")]
    pub ratio: f64,
}

pub fn cmd_search(args: &SearchArgs) -> Result<i32, CliError> {
    let limits = args.output.limits()?;
    let spec = args.generate;
    let count = spec
        .count
        .ok_or_else(|| CliError::usage("search needs --gen s,n,m,count"))?;
    if count == 0 {
        return Err(CliError::usage("count must be positive"));
    }
    if spec.m == 0 {
        return Err(CliError::usage("search needs m >= 1"));
    }
    let nets = generate(spec, count, args.seed)?;
    let values: Vec<DyadicRational> = nets
        .par_iter()
        .map(|nn| wafom_exact_auto(&nn.net, limits).map_err(lib_err(&nn.id)))
        .collect::<Result<_, CliError>>()?;
    let (best_index, best) = values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.cmp(b.1).then(a.0.cmp(&b.0)))
        .expect("count is positive");
    let log2 = best.log2();
    let scale = (spec.m * spec.m) as f64 / spec.s as f64;
    let row = SearchRow {
        s: spec.s,
        n: spec.n,
        m: spec.m,
        count,
        seed: args.seed,
        best_index,
        wafom: best.to_f64(),
        wafom_log2: log2,
        wafom_exact: best.clone(),
        ratio: log2 / -scale,
    };
    let text = render(&[row], args.output.format).map_err(|e| CliError::from_lib(e, None))?;
    write_net_file(&args.net_out, &nets[best_index].net)
        .map_err(|e| CliError::from_lib(e, Some(&args.net_out.display().to_string())))?;
    emit(args.output.out.as_deref(), &text)?;
    Ok(EXIT_OK)
}

#[derive(Debug, Serialize)]
pub struct IntegrateRow {
    pub net: String,
    pub s: usize,
    pub n: usize,
    pub m: usize,
    pub function: &'static str,
    #[serde(serialize_with = "ser_f64")]
    pub wafom_log2: f64,
    pub estimate: f64,
    pub exact_integral: f64,
    pub error: f64,
}

pub fn cmd_integrate(args: &IntegrateArgs) -> Result<i32, CliError> {
    let kind = FunctionKind::from_name(&args.function)
        .map_err(|e| CliError::from_lib(e, Some("--function")))?;
    let limits = args.output.limits()?;
    let nets = load_nets(&args.source, limits)?;
    let rows: Vec<IntegrateRow> = nets
        .par_iter()
        .map(|nn| {
            let f = TestFunction::new(kind, nn.net.s());
            let points = to_points(&nn.net, limits).map_err(lib_err(&nn.id))?;
            let estimate = qmc_integrate(&points, &f).map_err(lib_err(&nn.id))?;
            let w = wafom_exact_auto(&nn.net, limits).map_err(lib_err(&nn.id))?;
            Ok(IntegrateRow {
                net: nn.id.clone(),
                s: nn.net.s(),
                n: nn.net.n(),
                m: nn.net.dim(),
                function: kind.name(),
                wafom_log2: w.log2(),
                estimate,
                exact_integral: f.exact_integral(),
                error: (estimate - f.exact_integral()).abs(),
            })
        })
        .collect::<Result<_, CliError>>()?;
    let text = render(&rows, args.output.format).map_err(|e| CliError::from_lib(e, None))?;
    emit(args.output.out.as_deref(), &text)?;
    if rows.len() >= 2 {
        let w: Vec<f64> = rows.iter().map(|r| r.wafom_log2).collect();
        let e: Vec<f64> = rows.iter().map(|r| r.error).collect();
        eprintln!("spearman(wafom, error) = {}", spearman(&w, &e));
    }
    Ok(EXIT_OK)
}

fn single_net(args: &SingleNetArgs) -> Result<(Subspace, Limits), CliError> {
    let id = args.net.display().to_string();
    let net = read_net_file(&args.net).map_err(lib_err(&id))?;
    if args.cap_dim == 0 {
        return Err(CliError::usage("caps must be positive"));
    }
    Ok((net, Limits::with_enum_dim(args.cap_dim)))
}

pub fn cmd_points(args: &SingleNetArgs) -> Result<i32, CliError> {
    let (net, limits) = single_net(args)?;
    let points = to_points(&net, limits).map_err(|e| CliError::from_lib(e, None))?;
    emit(args.out.as_deref(), &points.to_csv())?;
    Ok(EXIT_OK)
}

pub fn cmd_weights(args: &SingleNetArgs) -> Result<i32, CliError> {
    let (net, limits) = single_net(args)?;
    let dist = weight_distribution(&net.dual(), limits).map_err(|e| CliError::from_lib(e, None))?;
    emit(args.out.as_deref(), &dist.to_csv())?;
    Ok(EXIT_OK)
}

pub fn run(cli: &Cli) -> Result<i32, CliError> {
    match &cli.command {
        Command::Wafom(a) => cmd_wafom(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Search(a) => cmd_search(a),
        Command::Integrate(a) => cmd_integrate(a),
        Command::Points(a) => cmd_points(a),
        Command::Weights(a) => cmd_weights(a),
    }
}
