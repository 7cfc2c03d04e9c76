//! Command-line front end.
//!
//! Every option may also come from a JSON object passed with `--config`;
//! keys are the long flag names with `-` replaced by `_`. Flags given on the
//! command line win over the file, the file over built-in defaults.

use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::baseline::BaselineCdf;
use crate::data::DataMatrix;
use crate::error::{Error, Result};
use crate::estimate::fit_profile_likelihood;
use crate::gof::{
    conditional_gof_test, conditional_p_values, gof_power, GofTestSpec, StatisticOptions, TieHandling,
};
use crate::mc::{self, McPlan};
use crate::model::{static_gamma, ModelParams};
use crate::param_test::{power_curve, simulate_statistics, test_parameter, ParamStatistic, ParamTestSpec};
use crate::plot::{line_chart, Chart, Series};
use crate::ranks::{RankStructure, TiePolicy};
use crate::reliasoft;
use crate::sampling::sample;

#[derive(Parser, Debug)]
#[command(name = "loadshare", version, about = "Exact inference for load-sharing systems")]
pub struct Cli {
    /// JSON file with option values (flags take precedence).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Simulate M systems and write the failure times as CSV.
    Simulate(SimulateArgs),
    /// Profile-likelihood estimate of the load-sharing parameters.
    Fit(FitArgs),
    /// Exact Monte Carlo test of the rate vector (default: static intensities).
    TestParam(TestParamArgs),
    /// Conditional exact goodness-of-fit test of a baseline distribution.
    TestGof(TestGofArgs),
    /// Simulated critical values of the LR and Wald statistics.
    Tables(TablesArgs),
    /// Power of the parameter tests or the goodness-of-fit tests.
    Power(PowerArgs),
    /// Full analysis of the embedded two-motor data set.
    ExampleReliasoft(ExampleArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct Common {
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    pub threads: Option<usize>,
    /// Output file (default: stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Args, Debug, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct Ties {
    /// Break tied observations by adding k*1e-9*scale to the k-th entry.
    #[arg(long)]
    pub perturb_ties: bool,
    /// Let tied failures share the risk set just before the tie.
    #[arg(long)]
    pub shared_risk_set: bool,
}

impl Ties {
    fn policy(&self) -> Result<TiePolicy> {
        match (self.perturb_ties, self.shared_risk_set) {
            (true, true) => Err(Error::Config("choose one of --perturb-ties and --shared-risk-set".into())),
            (_, true) => Ok(TiePolicy::SharedRiskSet),
            _ => Ok(TiePolicy::Reject),
        }
    }

    fn read(&self, path: &Option<PathBuf>) -> Result<DataMatrix> {
        let path = path.as_ref().ok_or_else(|| Error::Config("a data file is required".into()))?;
        DataMatrix::read_csv_path(path, self.perturb_ties)
    }
}

#[derive(Args, Debug, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct SimulateArgs {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub r: Option<usize>,
    #[arg(long = "M")]
    #[serde(alias = "M")]
    pub m: Option<usize>,
    /// Load-sharing parameters, comma separated.
    #[arg(long, value_delimiter = ',', conflicts_with = "gamma")]
    pub alpha: Option<Vec<f64>>,
    /// Stage rates gamma_j = (n-j+1) alpha_j, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub gamma: Option<Vec<f64>>,
    /// Baseline as name:param,param (uniform, exp:mu,sigma, weibull:k,s, gamma:k,s).
    #[arg(long)]
    pub baseline: Option<String>,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct FitArgs {
    /// CSV file, one system per row.
    pub data: Option<PathBuf>,
    #[arg(long)]
    pub n: Option<usize>,
    #[command(flatten)]
    #[serde(flatten)]
    pub ties: Ties,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct TestParamArgs {
    pub data: Option<PathBuf>,
    #[arg(long)]
    pub n: Option<usize>,
    /// lr or w. Degenerate fits enter as their limits: a vanishing rate adds
    /// 1 to W, a diverging rate makes W infinite.
    #[arg(long)]
    pub stat: Option<String>,
    /// Hypothesized rates (default: static intensities n, n-1, ...).
    #[arg(long, value_delimiter = ',')]
    pub gamma0: Option<Vec<f64>>,
    #[arg(long)]
    pub level: Option<f64>,
    #[arg(long)]
    pub reps: Option<usize>,
    #[command(flatten)]
    #[serde(flatten)]
    pub ties: Ties,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct TestGofArgs {
    pub data: Option<PathBuf>,
    #[arg(long)]
    pub n: Option<usize>,
    /// Null baseline, e.g. exp:50,300.
    #[arg(long)]
    pub null: Option<String>,
    /// K, Kw or Z.
    #[arg(long)]
    pub stat: Option<String>,
    #[arg(long)]
    pub rho: Option<f64>,
    #[arg(long)]
    pub q: Option<f64>,
    #[arg(long)]
    pub level: Option<f64>,
    #[arg(long)]
    pub inner_reps: Option<usize>,
    #[command(flatten)]
    #[serde(flatten)]
    pub ties: Ties,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct TablesArgs {
    /// Range lo..hi (inclusive) or list of n.
    #[arg(long)]
    pub n: Option<String>,
    /// Range or list of r; values above n are skipped.
    #[arg(long)]
    pub r: Option<String>,
    #[arg(long = "M", value_delimiter = ',')]
    #[serde(alias = "M")]
    pub m: Option<Vec<usize>>,
    /// lr, w or both.
    #[arg(long)]
    pub stat: Option<String>,
    #[arg(long, value_delimiter = ',')]
    pub levels: Option<Vec<f64>>,
    #[arg(long)]
    pub reps: Option<usize>,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PowerKind {
    /// LR and W tests against an alternative alpha, as a function of the level.
    Param,
    /// Conditional K, Kw, Z tests against a family of baselines, by shape.
    Gof,
}

#[derive(Args, Debug, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct PowerArgs {
    #[arg(long, value_enum)]
    pub kind: Option<PowerKind>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub r: Option<usize>,
    #[arg(long = "M")]
    #[serde(alias = "M")]
    pub m: Option<usize>,
    /// Alternative (param) or true (gof) load-sharing parameters.
    #[arg(long, value_delimiter = ',')]
    pub alpha: Option<Vec<f64>>,
    /// Levels for param power; the first one is used for gof power.
    #[arg(long, value_delimiter = ',')]
    pub levels: Option<Vec<f64>>,
    /// weibull or gamma (gof power).
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long, value_delimiter = ',')]
    pub shapes: Option<Vec<f64>>,
    /// Null baseline of the gof tests.
    #[arg(long)]
    pub null: Option<String>,
    #[arg(long)]
    pub rho: Option<f64>,
    /// Null replicates (param) or outer replicates (gof).
    #[arg(long)]
    pub reps: Option<usize>,
    #[arg(long)]
    pub inner_reps: Option<usize>,
    /// Write an SVG line chart here.
    #[arg(long)]
    pub svg: Option<PathBuf>,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct ExampleArgs {
    /// Replicates of the parameter tests.
    #[arg(long)]
    pub reps: Option<usize>,
    /// Conditional replicates per scale value in the sweep.
    #[arg(long)]
    pub inner_reps: Option<usize>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

/// Process exit code for an error: 2 configuration, 3 data, 4 numerical.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_) | Error::InvalidParams(_) => 2,
        Error::Degenerate(_) => 4,
        _ => 3,
    }
}

pub fn main() -> i32 {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

/// Runs a parsed command line; returns the exit code on success (4 when an
/// estimate did not converge).
pub fn run(cli: Cli) -> Result<i32> {
    let config = match &cli.config {
        Some(path) => Some(serde_json::from_reader::<_, Value>(File::open(path)?)?),
        None => None,
    };
    let config = config.as_ref();
    match cli.command {
        Command::Simulate(a) => cmd_simulate(merge(&a, config)?),
        Command::Fit(a) => cmd_fit(merge(&a, config)?),
        Command::TestParam(a) => cmd_test_param(merge(&a, config)?),
        Command::TestGof(a) => cmd_test_gof(merge(&a, config)?),
        Command::Tables(a) => cmd_tables(merge(&a, config)?),
        Command::Power(a) => cmd_power(merge(&a, config)?),
        Command::ExampleReliasoft(a) => cmd_example_reliasoft(merge(&a, config)?),
    }
}

/// Overlays the options set on the command line onto the config object.
fn merge<T: Serialize + DeserializeOwned>(cli: &T, config: Option<&Value>) -> Result<T> {
    let mut base = match config {
        Some(Value::Object(map)) => map.clone(),
        Some(_) => return Err(Error::Config("config file must hold a JSON object".into())),
        None => Default::default(),
    };
    if let Value::Object(flags) = serde_json::to_value(cli)? {
        for (k, v) in flags {
            if !(v.is_null() || v == Value::Bool(false)) {
                base.insert(k, v);
            }
        }
    }
    serde_json::from_value(Value::Object(base)).map_err(|e| Error::Config(format!("config: {e}")))
}

fn required<T: Copy>(v: Option<T>, name: &str) -> Result<T> {
    v.ok_or_else(|| Error::Config(format!("--{name} is required")))
}

fn parse<T: std::str::FromStr>(s: &str, what: &str) -> Result<T> {
    s.parse().map_err(|_| Error::Config(format!("invalid {what} '{s}'")))
}

fn baseline(spec: &str) -> Result<BaselineCdf> {
    spec.parse::<BaselineCdf>().map_err(|e| Error::Config(e.to_string()))
}

/// `3..10` (inclusive) or `3,5,7`.
fn int_list(s: &str) -> Result<Vec<usize>> {
    if let Some((a, b)) = s.split_once("..") {
        let (a, b): (usize, usize) = (parse(a.trim(), "range")?, parse(b.trim(), "range")?);
        if a > b {
            return Err(Error::Config(format!("empty range '{s}'")));
        }
        return Ok((a..=b).collect());
    }
    s.split(',').map(|x| parse(x.trim(), "integer")).collect()
}

fn sink(out: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(File::create(p)?),
        None => Box::new(io::stdout().lock()),
    })
}

fn write_records<T: Serialize>(records: &[T], format: Format, out: &Option<PathBuf>) -> Result<()> {
    let mut w = sink(out)?;
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut w, records)?;
            writeln!(w)?;
        }
        Format::Csv => {
            let mut c = csv::Writer::from_writer(w);
            for r in records {
                c.serialize(r)?;
            }
            c.flush()?;
        }
    }
    Ok(())
}

fn flat(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(a) => a.iter().map(flat).collect::<Vec<_>>().join(";"),
        Value::Null => "inf".into(),
        other => other.to_string(),
    }
}

/// JSON, or a two-column `field,value` CSV with arrays joined by `;`.
fn write_report<T: Serialize>(report: &T, format: Format, out: &Option<PathBuf>) -> Result<()> {
    let mut w = sink(out)?;
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut w, report)?;
            writeln!(w)?;
        }
        Format::Csv => {
            let mut c = csv::Writer::from_writer(w);
            c.write_record(["field", "value"])?;
            if let Value::Object(map) = serde_json::to_value(report)? {
                for (k, v) in map {
                    c.write_record([k, flat(&v)])?;
                }
            }
            c.flush()?;
        }
    }
    Ok(())
}

fn write_svg(path: &Path, chart: &Chart, series: &[Series]) -> Result<()> {
    std::fs::write(path, line_chart(chart, series))?;
    Ok(())
}

pub fn cmd_simulate(a: SimulateArgs) -> Result<i32> {
    let (n, r, m) = (required(a.n, "n")?, required(a.r, "r")?, required(a.m, "M")?);
    let params = match (&a.alpha, &a.gamma) {
        (Some(alpha), None) => ModelParams::from_alpha(n, r, m, alpha)?,
        (None, Some(gamma)) => ModelParams::from_gamma(n, r, m, gamma)?,
        (None, None) => ModelParams::static_intensities(n, r, m)?,
        _ => return Err(Error::Config("give either --alpha or --gamma".into())),
    };
    let base = baseline(a.baseline.as_deref().unwrap_or("uniform"))?;
    let seed = a.common.seed.unwrap_or(1);
    let data = sample(&params, &base, &mut mc::stream(seed, 0));
    eprintln!("seed {seed}");
    data.write_csv(sink(&a.common.out)?)?;
    Ok(0)
}

#[derive(Serialize)]
struct FitRow {
    stage: usize,
    gamma_hat: f64,
    alpha_hat: f64,
    degeneracy: String,
}

pub fn cmd_fit(a: FitArgs) -> Result<i32> {
    let data = a.ties.read(&a.data)?;
    let n = a.n.unwrap_or(data.r());
    let ranks = RankStructure::with_policy(&data, a.ties.policy()?)?;
    let fit = fit_profile_likelihood(&ranks, n)?;
    match a.common.format.unwrap_or(Format::Json) {
        Format::Json => write_report(&fit, Format::Json, &a.common.out)?,
        Format::Csv => {
            let rows: Vec<FitRow> = (0..fit.gamma_hat.len())
                .map(|j| FitRow {
                    stage: j + 1,
                    gamma_hat: fit.gamma_hat[j],
                    alpha_hat: fit.alpha_hat[j],
                    degeneracy: format!("{:?}", fit.degeneracy[j]).to_lowercase(),
                })
                .collect();
            write_records(&rows, Format::Csv, &a.common.out)?;
        }
    }
    if !fit.converged {
        eprintln!("warning: profile fit stopped after {} iterations", fit.iterations);
        return Ok(4);
    }
    Ok(0)
}

pub fn cmd_test_param(a: TestParamArgs) -> Result<i32> {
    let data = a.ties.read(&a.data)?;
    let n = a.n.unwrap_or(data.r());
    let statistic: ParamStatistic = parse(a.stat.as_deref().unwrap_or("lr"), "statistic")?;
    let gamma0 = a.gamma0.clone().unwrap_or_else(|| static_gamma(n, data.r()));
    let spec = ParamTestSpec::new(gamma0, statistic)
        .level(a.level.unwrap_or(0.05))
        .replications(a.reps.unwrap_or(10_000))
        .seed(a.common.seed.unwrap_or(1))
        .threads(a.common.threads);
    let report = test_parameter(&data, n, &spec, a.ties.policy()?)?;
    write_report(&report, a.common.format.unwrap_or(Format::Json), &a.common.out)?;
    Ok(0)
}

pub fn cmd_test_gof(a: TestGofArgs) -> Result<i32> {
    let data = a.ties.read(&a.data)?;
    let n = a.n.unwrap_or(data.r());
    let null = baseline(a.null.as_deref().ok_or_else(|| Error::Config("--null is required".into()))?)?;
    let mut spec = GofTestSpec::new(null, parse(a.stat.as_deref().unwrap_or("Z"), "statistic")?);
    spec.rho = a.rho.unwrap_or(spec.rho);
    spec.q = a.q.unwrap_or(spec.q);
    spec.level = a.level.unwrap_or(spec.level);
    spec.inner_replications = a.inner_reps.unwrap_or(10_000);
    spec.seed = a.common.seed.unwrap_or(1);
    spec.threads = a.common.threads;
    spec.ties = if a.ties.policy()? == TiePolicy::SharedRiskSet {
        TieHandling::SharedRiskSet
    } else {
        TieHandling::Reject
    };
    let report = conditional_gof_test(&data, n, &spec)?;
    write_report(&report, a.common.format.unwrap_or(Format::Json), &a.common.out)?;
    Ok(0)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TableRow {
    pub n: usize,
    pub r: usize,
    #[serde(rename = "M")]
    pub m: usize,
    pub level: f64,
    pub statistic: String,
    pub critical_value: f64,
    pub mc_se: f64,
    pub replications: usize,
    pub seed: u64,
}

/// Critical values (empirical `1 - level` quantiles of the null law under
/// static intensities) for every cell `(n, r, M)` with `r <= n`.
pub fn critical_value_table(
    ns: &[usize],
    rs: &[usize],
    ms: &[usize],
    statistics: &[ParamStatistic],
    levels: &[f64],
    plan: &McPlan,
) -> Result<Vec<TableRow>> {
    let mut rows = Vec::new();
    for &n in ns {
        for &r in rs.iter().filter(|&&r| r <= n) {
            for &m in ms {
                let gamma0 = static_gamma(n, r);
                let null = simulate_statistics(&gamma0, &gamma0, n, m, plan)?;
                for &s in statistics {
                    let values: Vec<f64> = null.values.iter().map(|x| x.get(s)).collect();
                    for &level in levels {
                        let q = mc::quantile(&values, 1.0 - level)?;
                        rows.push(TableRow {
                            n,
                            r,
                            m,
                            level,
                            statistic: s.to_string(),
                            critical_value: q.value,
                            mc_se: q.se,
                            replications: plan.replications,
                            seed: plan.seed,
                        });
                    }
                }
            }
        }
    }
    Ok(rows)
}

pub fn cmd_tables(a: TablesArgs) -> Result<i32> {
    let ns = int_list(a.n.as_deref().unwrap_or("3..10"))?;
    let rs = int_list(a.r.as_deref().unwrap_or("3..10"))?;
    let ms = a.m.clone().unwrap_or_else(|| vec![5, 10]);
    if ms.iter().any(|&m| m < 2) || ns.contains(&0) || rs.contains(&0) {
        return Err(Error::Config("n, r >= 1 and M >= 2 required".into()));
    }
    let statistics = match a.stat.as_deref().unwrap_or("both") {
        "both" => vec![ParamStatistic::Lr, ParamStatistic::Wald],
        s => vec![parse::<ParamStatistic>(s, "statistic")?],
    };
    let levels = a.levels.clone().unwrap_or_else(|| vec![0.1, 0.05]);
    let plan = McPlan::new(a.common.seed.unwrap_or(1), a.reps.unwrap_or(100_000)).threads(a.common.threads);
    let rows = critical_value_table(&ns, &rs, &ms, &statistics, &levels, &plan)?;
    if rows.is_empty() {
        return Err(Error::Config("no cell with r <= n in the requested ranges".into()));
    }
    write_records(&rows, a.common.format.unwrap_or(Format::Csv), &a.common.out)?;
    Ok(0)
}

#[derive(Serialize)]
struct GofPowerRow {
    family: String,
    shape: f64,
    level: f64,
    k: f64,
    k_weighted: f64,
    z: f64,
    outer: usize,
    inner: usize,
}

pub fn cmd_power(a: PowerArgs) -> Result<i32> {
    let n = a.n.unwrap_or(4);
    let r = a.r.unwrap_or(n);
    let m = a.m.unwrap_or(10);
    let seed = a.common.seed.unwrap_or(1);
    let format = a.common.format.unwrap_or(Format::Csv);
    match a.kind.unwrap_or(PowerKind::Param) {
        PowerKind::Param => {
            let alpha = a.alpha.clone().unwrap_or_else(|| {
                let mut v = vec![1.0, 1.4, 1.8, 2.2];
                v.resize(r, 2.2);
                v
            });
            let alt = ModelParams::from_alpha(n, r, m, &alpha)?;
            let levels = a
                .levels
                .clone()
                .unwrap_or_else(|| vec![0.001, 0.002, 0.005, 0.01, 0.02, 0.05, 0.1, 0.2, 0.5]);
            let spec = ParamTestSpec::new(static_gamma(n, r), ParamStatistic::Lr)
                .replications(a.reps.unwrap_or(10_000))
                .seed(seed)
                .threads(a.common.threads);
            let points = power_curve(alt.gamma(), n, m, &spec, a.reps.unwrap_or(10_000), &levels)?;
            write_records(&points, format, &a.common.out)?;
            if let Some(svg) = &a.svg {
                let chart = Chart {
                    title: format!("power at alpha = {alpha:?}, n={n}, r={r}, M={m}"),
                    x_label: "level".into(),
                    y_label: "power".into(),
                    log_x: true,
                    log_y: true,
                    reference: None,
                };
                let series = [
                    Series::new("LR", points.iter().map(|p| (p.level, p.lr)).collect()),
                    Series::new("W", points.iter().map(|p| (p.level, p.wald)).collect()),
                    Series::new("level", points.iter().map(|p| (p.level, p.level)).collect()),
                ];
                write_svg(svg, &chart, &series)?;
            }
        }
        PowerKind::Gof => {
            let alpha = a.alpha.clone().unwrap_or_else(|| vec![1.0; r]);
            let params = ModelParams::from_alpha(n, r, m, &alpha)?;
            let family = a.family.clone().unwrap_or_else(|| "weibull".into());
            let shapes = a.shapes.clone().unwrap_or_else(|| vec![0.5, 0.8, 1.0, 1.5, 2.0]);
            let null = baseline(a.null.as_deref().unwrap_or("exp"))?;
            let level = a.levels.as_ref().and_then(|l| l.first().copied()).unwrap_or(0.05);
            let opts = StatisticOptions::new(a.rho.unwrap_or(0.5), 1.0)?;
            let (outer, inner) = (a.reps.unwrap_or(10_000), a.inner_reps.unwrap_or(100));
            let mut rows = Vec::new();
            for (i, &shape) in shapes.iter().enumerate() {
                let truth = baseline(&format!("{family}:{shape},1"))?;
                let p = gof_power(
                    &params,
                    &truth,
                    &null,
                    &opts,
                    level,
                    outer,
                    inner,
                    mc::derive_seed(seed, i as u64),
                    a.common.threads,
                )?;
                rows.push(GofPowerRow {
                    family: family.clone(),
                    shape,
                    level,
                    k: p.k,
                    k_weighted: p.k_weighted,
                    z: p.z,
                    outer,
                    inner,
                });
            }
            write_records(&rows, format, &a.common.out)?;
            if let Some(svg) = &a.svg {
                let chart = Chart {
                    title: format!("power against {family} baselines, null {null}"),
                    x_label: "shape".into(),
                    y_label: "power".into(),
                    reference: Some(level),
                    ..Default::default()
                };
                let series = [
                    Series::new("K", rows.iter().map(|p| (p.shape, p.k)).collect()),
                    Series::new("Kw", rows.iter().map(|p| (p.shape, p.k_weighted)).collect()),
                    Series::new("Z", rows.iter().map(|p| (p.shape, p.z)).collect()),
                ];
                write_svg(svg, &chart, &series)?;
            }
        }
    }
    Ok(0)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub sigma: f64,
    pub p_k: f64,
    pub p_k_weighted: f64,
    pub p_z: f64,
}

/// p-values of the three conditional tests of `exp(50, sigma)` on the motor
/// data for `sigma = 25, 50, ..., 800`.
pub fn reliasoft_sweep(inner: usize, seed: u64, threads: Option<usize>) -> Result<Vec<SweepRow>> {
    let data = reliasoft::motor_data();
    let opts = StatisticOptions::default();
    (1..=32)
        .map(|i| {
            let sigma = 25.0 * i as f64;
            let null = BaselineCdf::exponential(reliasoft::NULL_LOCATION, sigma)?;
            let p = conditional_p_values(
                &data,
                reliasoft::N,
                &null,
                &opts,
                inner,
                seed,
                threads,
                TiePolicy::SharedRiskSet,
            )?;
            Ok(SweepRow {
                sigma,
                p_k: p.p_k,
                p_k_weighted: p.p_k_weighted,
                p_z: p.p_z,
            })
        })
        .collect()
}

pub fn cmd_example_reliasoft(a: ExampleArgs) -> Result<i32> {
    eprintln!("note: tied failure times share the risk set just before the tie");
    let data = reliasoft::motor_data();
    let ties = TiePolicy::SharedRiskSet;
    let ranks = RankStructure::with_policy(&data, ties)?;
    let fit = fit_profile_likelihood(&ranks, reliasoft::N)?;
    let seed = a.common.seed.unwrap_or(1);
    let reps = a.reps.unwrap_or(10_000);
    let test = |s: ParamStatistic| {
        let spec = ParamTestSpec::new(static_gamma(reliasoft::N, data.r()), s)
            .replications(reps)
            .seed(seed)
            .threads(a.common.threads);
        test_parameter(&data, reliasoft::N, &spec, ties)
    };
    let (lr, wald) = (test(ParamStatistic::Lr)?, test(ParamStatistic::Wald)?);
    let sweep = reliasoft_sweep(a.inner_reps.unwrap_or(10_000), seed, a.common.threads)?;
    match a.common.format.unwrap_or(Format::Json) {
        Format::Json => {
            let report = serde_json::json!({
                "fit": fit,
                "lr_test": lr,
                "wald_test": wald,
                "gof_sweep": sweep,
            });
            write_report(&report, Format::Json, &a.common.out)?;
        }
        Format::Csv => write_records(&sweep, Format::Csv, &a.common.out)?,
    }
    if let Some(svg) = &a.svg {
        let chart = Chart {
            title: "conditional tests of exp(50, sigma)".into(),
            x_label: "sigma".into(),
            y_label: "p-value".into(),
            reference: Some(0.05),
            ..Default::default()
        };
        let series = [
            Series::new("K", sweep.iter().map(|s| (s.sigma, s.p_k)).collect()),
            Series::new("Kw", sweep.iter().map(|s| (s.sigma, s.p_k_weighted)).collect()),
            Series::new("Z", sweep.iter().map(|s| (s.sigma, s.p_z)).collect()),
        ];
        write_svg(svg, &chart, &series)?;
    }
    Ok(if fit.converged { 0 } else { 4 })
}
