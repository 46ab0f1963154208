//! The `depspec` command line.
//!
//! Every subcommand takes `--out-dir`. With it, data files and a
//! `manifest.json` are written there; without it, the main data file goes to
//! standard output and the manifest to standard error. Data files never carry
//! timestamps, so reruns with the same flags are byte-identical.
//!
//! Exit codes: 0 success, 1 other failure, 2 usage or parse error (including
//! an out-of-range `eps`), 3 dimension cap exceeded, 4 dimension mismatch,
//! 5 `--assert` trend failure.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::bitlattice::{CorrelatedPairSource, Permutation, ProductSource};
use crate::corrbounds::{CorrelationReport, MAX_EXACT_DIM};
use crate::decomposition::{center, BooleanFunction, DependencySpectrum};
use crate::error::{Error, Result};
use crate::experiments::{
    run_collapse, run_concentration, run_iccs_comparison, to_csv, trends, CollapseParams, ConcentrationParams,
    EncoderFamily, IccsParams, IccsScheme, RunManifest,
};
use crate::slcs::{
    build_encoder, check_pairwise_independence, check_permutation_invariance, single_letter_gap,
    single_letter_marginal, single_letter_marginal_enumerated, CodebookMode, SlcsConfig,
};

/// Environment variable holding the default worker-thread count.
pub const THREADS_ENV: &str = "DEPSPEC_THREADS";

pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAP: i32 = 3;
pub const EXIT_MISMATCH: i32 = 4;
pub const EXIT_ASSERT: i32 = 5;

const MAX_MARGINAL_TABLE_DIM: usize = 12;
const SINGLE_LETTER_GRID: [usize; 5] = [4, 6, 8, 10, 12];

#[derive(Debug, Parser)]
#[command(name = "depspec", version, about = "Dependency spectra, correlation bounds and typicality-coding experiments")]
struct Cli {
    /// Worker threads; defaults to $DEPSPEC_THREADS, then to the number of CPUs.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Dependency spectrum of a Boolean function.
    Spectrum(SpectrumArgs),
    /// Spectral bounds on the disagreement of two functions fed correlated inputs.
    Bound(BoundArgs),
    /// Typicality-encoding random codes.
    Slcs {
        #[command(subcommand)]
        action: SlcsAction,
    },
    /// Seeded experiment sweeps.
    Experiment {
        #[command(subcommand)]
        name: ExperimentName,
    },
}

#[derive(Debug, Args, Serialize)]
struct OutArgs {
    /// Directory for data files and the run manifest.
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
#[group(required = true, multiple = false)]
struct FunctionSource {
    /// Truth-table file: header `n=<k>`, then one 0/1 line per input.
    #[arg(long)]
    truth_table: Option<PathBuf>,
    /// dictator[-k], parity, and, majority or threshold-k.
    #[arg(long)]
    builtin: Option<String>,
}

#[derive(Debug, Args, Serialize)]
struct SpectrumArgs {
    #[command(flatten)]
    function: FunctionSource,
    /// Number of inputs of a builtin.
    #[arg(long)]
    n: Option<usize>,
    /// P(X = 1) of the product source.
    #[arg(long, default_value_t = 0.5)]
    p: f64,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Debug, Args, Serialize)]
#[group(required = true, multiple = false)]
struct PairSource {
    /// Two spectrum CSV files (the second taken under Y's marginal).
    #[arg(long, num_args = 2, value_names = ["P", "Q"])]
    spectra: Option<Vec<PathBuf>>,
    /// Two truth-table files.
    #[arg(long, num_args = 2, value_names = ["E", "F"])]
    truth_tables: Option<Vec<PathBuf>>,
    /// Two builtin function names.
    #[arg(long, num_args = 2, value_names = ["E", "F"])]
    builtins: Option<Vec<String>>,
}

#[derive(Debug, Args, Serialize)]
struct BoundArgs {
    #[command(flatten)]
    pair: PairSource,
    /// Per-coordinate flip probability between X and Y, in [0, 1/2].
    #[arg(long)]
    eps: f64,
    /// Number of inputs of builtins.
    #[arg(long)]
    n: Option<usize>,
    /// P(X = 1).
    #[arg(long, default_value_t = 0.5)]
    p: f64,
    /// Monte-Carlo trials when n is above the exact-summation cap.
    #[arg(long, default_value_t = 1 << 20)]
    mc_trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum ModeArg {
    UniformTypical,
    IidProduct,
}

/// Parameters of the typicality-encoding scheme.
#[derive(Debug, Args, Serialize)]
struct SchemeArgs {
    /// Bits per symbol.
    #[arg(long, default_value_t = 0.5)]
    rate: f64,
    /// Test channel U = X xor Bernoulli(crossover).
    #[arg(long, default_value_t = 0.1)]
    crossover: f64,
    /// General test channel as `P(U=1|X=0),P(U=1|X=1)`; overrides --crossover.
    #[arg(long, value_delimiter = ',', num_args = 2)]
    channel: Option<Vec<f64>>,
    /// P(X = 1).
    #[arg(long, default_value_t = 0.5)]
    p_x: f64,
    /// Typicality slack.
    #[arg(long, default_value_t = 0.2)]
    eps_typ: f64,
    #[arg(long, value_enum, default_value_t = ModeArg::UniformTypical)]
    mode: ModeArg,
}

impl SchemeArgs {
    fn config(&self, n: usize, seed: u64) -> Result<SlcsConfig> {
        let cfg = match &self.channel {
            Some(c) => SlcsConfig::new(n, self.rate, [[1.0 - c[0], c[0]], [1.0 - c[1], c[1]]], self.p_x, self.eps_typ)?,
            None => SlcsConfig::binary_symmetric(n, self.rate, self.crossover, self.p_x, self.eps_typ)?,
        };
        let mode = match self.mode {
            ModeArg::UniformTypical => CodebookMode::UniformTypical,
            ModeArg::IidProduct => CodebookMode::IidProduct,
        };
        Ok(cfg.with_mode(mode).with_seed(seed))
    }
}

#[derive(Debug, Subcommand)]
enum SlcsAction {
    /// Tabulate one encoder draw.
    DumpEncoder(SlcsDumpArgs),
    /// Single-letter law of a codeword uniform over the conditional typical set, by counting and by enumeration.
    Marginal(SlcsMarginalArgs),
    /// Monte-Carlo and exact checks of the scheme's structural properties.
    CheckProps(SlcsPropsArgs),
}

#[derive(Debug, Args, Serialize)]
struct SlcsDumpArgs {
    #[command(flatten)]
    scheme: SchemeArgs,
    #[arg(long, default_value_t = 8)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Debug, Args, Serialize)]
struct SlcsMarginalArgs {
    #[command(flatten)]
    scheme: SchemeArgs,
    /// Blocklength.
    #[arg(long, default_value_t = 6)]
    m: usize,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Debug, Args, Serialize)]
struct SlcsPropsArgs {
    #[command(flatten)]
    scheme: SchemeArgs,
    #[arg(long, default_value_t = 8)]
    n: usize,
    /// Encoder draws for the Monte-Carlo checks.
    #[arg(long, default_value_t = 10_000)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum FamilyArg {
    Slcs,
    Uncoded,
    Constant,
}

#[derive(Debug, Args, Serialize)]
struct ExperimentCommon {
    #[command(flatten)]
    scheme: SchemeArgs,
    /// Encoder draws per grid cell.
    #[arg(long, default_value_t = crate::experiments::DEFAULT_DRAWS)]
    draws: usize,
    /// Master seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Exit with code 5 if the expected trends do not hold.
    #[arg(long)]
    assert: bool,
    #[command(flatten)]
    out: OutArgs,
}

impl ExperimentCommon {
    fn family(&self, kind: FamilyArg) -> Result<EncoderFamily> {
        Ok(match kind {
            FamilyArg::Slcs => EncoderFamily::Slcs(self.scheme.config(crate::experiments::DEFAULT_NS[0], 0)?),
            FamilyArg::Uncoded => EncoderFamily::Uncoded,
            FamilyArg::Constant => EncoderFamily::Constant,
        })
    }
}

#[derive(Debug, Subcommand)]
enum ExperimentName {
    /// Low-weight spectral mass of a coordinate function across encoder draws.
    Concentration(ConcentrationArgs),
    /// Disagreement of encoders fed correlated inputs against the collapse threshold.
    Collapse(CollapseArgs),
    /// Encoder agreement and erasures on the gated interference channel.
    Iccs(IccsArgs),
}

#[derive(Debug, Args, Serialize)]
struct ConcentrationArgs {
    #[command(flatten)]
    common: ExperimentCommon,
    #[arg(long, value_enum, default_value_t = FamilyArg::Slcs)]
    family: FamilyArg,
    #[arg(long, value_delimiter = ',', default_value = "4,6,8,10")]
    ns: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
    ms: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "0.02,0.05,0.1")]
    gammas: Vec<f64>,
    /// Output coordinate (1-based).
    #[arg(long, default_value_t = 1)]
    k: usize,
}

#[derive(Debug, Args, Serialize)]
struct CollapseArgs {
    #[command(flatten)]
    common: ExperimentCommon,
    #[arg(long, value_enum, default_value_t = FamilyArg::Slcs)]
    family: FamilyArg,
    #[arg(long, value_delimiter = ',', default_value = "4,6,8,10")]
    ns: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "0,0.05,0.1,0.2")]
    eps: Vec<f64>,
    /// Slack subtracted inside the threshold.
    #[arg(long, default_value_t = crate::experiments::DEFAULT_DELTA)]
    delta: f64,
    /// Draw the two encoders independently instead of sharing one.
    #[arg(long)]
    independent: bool,
    /// Source pairs per draw above the exact-summation cap.
    #[arg(long, default_value_t = 1 << 16)]
    mc_trials: u64,
}

#[derive(Debug, Args, Serialize)]
struct IccsArgs {
    #[command(flatten)]
    common: ExperimentCommon,
    #[arg(long, value_delimiter = ',', default_value = "6,8,10")]
    ns: Vec<usize>,
    #[arg(long, default_value_t = 0.1)]
    eps: f64,
    /// Crossover of the first link.
    #[arg(long, default_value_t = 0.1)]
    channel_delta: f64,
    /// Alphabet size of the gated symbol.
    #[arg(long, default_value_t = 4)]
    q: u32,
    #[arg(long, default_value_t = 0.5)]
    alpha_x: f64,
    /// Any of uncoded, constant, slcs, slcs-shared.
    #[arg(long, value_delimiter = ',', default_value = "uncoded,slcs,slcs-shared,constant")]
    schemes: Vec<String>,
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    configure_threads(cli.threads);
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::DimensionTooLarge { .. } => EXIT_CAP,
        Error::DimensionMismatch { .. } => EXIT_MISMATCH,
        Error::Parse(_)
        | Error::Json(_)
        | Error::Csv(_)
        | Error::InvalidParameter(_)
        | Error::InvalidProbability { .. }
        | Error::EpsOutOfRange(_)
        | Error::InvalidDimension(_)
        | Error::MaskOutOfRange { .. }
        | Error::AssignmentMismatch { .. } => EXIT_USAGE,
        _ => EXIT_FAILURE,
    }
}

fn configure_threads(flag: Option<usize>) {
    let n = flag.or_else(|| std::env::var(THREADS_ENV).ok().and_then(|v| v.parse().ok()));
    if let Some(n) = n.filter(|&n| n > 0) {
        // fails only if the pool was already built, e.g. by an earlier call in-process
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

fn dispatch(command: Command) -> Result<i32> {
    match command {
        Command::Spectrum(a) => cmd_spectrum(&a),
        Command::Bound(a) => cmd_bound(&a),
        Command::Slcs { action } => match action {
            SlcsAction::DumpEncoder(a) => cmd_slcs_dump(&a),
            SlcsAction::Marginal(a) => cmd_slcs_marginal(&a),
            SlcsAction::CheckProps(a) => cmd_slcs_props(&a),
        },
        Command::Experiment { name } => match name {
            ExperimentName::Concentration(a) => cmd_concentration(&a),
            ExperimentName::Collapse(a) => cmd_collapse(&a),
            ExperimentName::Iccs(a) => cmd_iccs(&a),
        },
    }
}

/// Writes `files` and the manifest under `out_dir`, or prints the first file
/// to stdout and everything else to stderr.
fn emit(out_dir: Option<&Path>, files: &[(&str, String)], mut manifest: RunManifest) -> Result<()> {
    manifest.finish();
    match out_dir {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            for (name, contents) in files {
                let path = dir.join(name);
                fs::write(&path, contents)?;
                manifest.outputs.push(path.display().to_string());
            }
            fs::write(dir.join("manifest.json"), serde_json::to_string_pretty(&manifest)? + "\n")?;
        }
        None => {
            if let Some((_, first)) = files.first() {
                print!("{first}");
            }
            for (name, contents) in &files[1.min(files.len())..] {
                eprintln!("--- {name}\n{contents}");
            }
            manifest.outputs.push("<stdout>".into());
            eprintln!("{}", serde_json::to_string_pretty(&manifest)?);
        }
    }
    Ok(())
}

fn begin<A: Serialize>(subcommand: &str, args: &A, seed: Option<u64>) -> Result<RunManifest> {
    Ok(RunManifest::begin(subcommand, serde_json::to_value(args)?, seed))
}

fn pretty<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

/// Resolves a builtin name such as `parity` or `threshold-3`.
pub fn builtin_function(name: &str, n: usize) -> Result<BooleanFunction> {
    let (base, arg) = match name.split_once('-') {
        Some((b, k)) => (b, Some(k.parse::<usize>().map_err(|_| Error::Parse(format!("bad builtin {name:?}")))?)),
        None => (name, None),
    };
    match (base, arg) {
        ("parity", None) => BooleanFunction::parity(n),
        ("and", None) => BooleanFunction::and(n),
        ("majority", None) => BooleanFunction::majority(n),
        ("dictator", k) => BooleanFunction::dictator(n, k.unwrap_or(1)),
        ("threshold", Some(k)) => BooleanFunction::threshold(n, k),
        _ => Err(Error::Parse(format!("unknown builtin {name:?}; expected dictator[-k], parity, and, majority or threshold-k"))),
    }
}

fn require_n(n: Option<usize>) -> Result<usize> {
    n.ok_or_else(|| Error::InvalidParameter("--n is required for builtin functions".into()))
}

fn cmd_spectrum(a: &SpectrumArgs) -> Result<i32> {
    let manifest = begin("spectrum", a, None)?;
    let f = match (&a.function.truth_table, &a.function.builtin) {
        (Some(path), _) => BooleanFunction::read_truth_table(path)?,
        (None, Some(name)) => builtin_function(name, require_n(a.n)?)?,
        (None, None) => unreachable!("clap requires one function source"),
    };
    let src = ProductSource::new(f.dim(), a.p)?;
    let centered = center(&f, &src)?;
    let spectrum = centered.spectrum()?;
    let profile = spectrum.weight_profile();
    let cumulative: Vec<f64> = profile.iter().scan(0.0, |acc, v| Some(*acc + v).inspect(|s| *acc = *s)).collect();
    let summary = json!({
        "n": f.dim(),
        "p": a.p,
        "q": centered.q(),
        "total_variance": spectrum.total(),
        "weight_profile": profile,
        "cumulative_level_mass": cumulative,
    });
    emit(a.out.out_dir.as_deref(), &[("spectrum.csv", spectrum.to_csv()), ("summary.json", pretty(&summary)?)], manifest)?;
    Ok(0)
}

#[derive(Serialize)]
struct BoundOutput {
    #[serde(flatten)]
    report: CorrelationReport,
    verdict: Option<&'static str>,
}

fn check_eps(eps: f64) -> Result<()> {
    if !(0.0..=0.5).contains(&eps) {
        return Err(Error::EpsOutOfRange(eps));
    }
    Ok(())
}

fn cmd_bound(a: &BoundArgs) -> Result<i32> {
    check_eps(a.eps)?;
    let manifest = begin("bound", a, Some(a.seed))?;
    let functions = match (&a.pair.spectra, &a.pair.truth_tables, &a.pair.builtins) {
        (Some(paths), _, _) => {
            let p = DependencySpectrum::from_csv(&fs::read_to_string(&paths[0])?)?;
            let q = DependencySpectrum::from_csv(&fs::read_to_string(&paths[1])?)?;
            if p.dim() != q.dim() {
                return Err(Error::DimensionMismatch { left: p.dim(), right: q.dim() });
            }
            let out = BoundOutput { report: CorrelationReport::from_spectra(&p, &q, a.eps)?, verdict: None };
            emit(a.out.out_dir.as_deref(), &[("report.json", pretty(&out)?)], manifest)?;
            return Ok(0);
        }
        (None, Some(paths), _) => {
            (BooleanFunction::read_truth_table(&paths[0])?, BooleanFunction::read_truth_table(&paths[1])?)
        }
        (None, None, Some(names)) => {
            let n = require_n(a.n)?;
            (builtin_function(&names[0], n)?, builtin_function(&names[1], n)?)
        }
        _ => unreachable!("clap requires one pair source"),
    };
    let (e, f) = functions;
    if e.dim() != f.dim() {
        return Err(Error::DimensionMismatch { left: e.dim(), right: f.dim() });
    }
    let src = CorrelatedPairSource::new(e.dim(), a.p, a.eps)?;
    let report = if e.dim() <= MAX_EXACT_DIM {
        CorrelationReport::exact(&e, &f, &src)?
    } else {
        CorrelationReport::monte_carlo(&e, &f, &src, a.mc_trials, a.seed)?
    };
    let verdict = report.sandwich_holds().map(|ok| if ok { "pass" } else { "fail" });
    emit(a.out.out_dir.as_deref(), &[("report.json", pretty(&BoundOutput { report, verdict })?)], manifest)?;
    Ok(0)
}

fn cmd_slcs_dump(a: &SlcsDumpArgs) -> Result<i32> {
    let manifest = begin("slcs dump-encoder", a, Some(a.seed))?;
    let config = a.scheme.config(a.n, a.seed)?;
    let encoder = build_encoder(&config)?;
    emit(a.out.out_dir.as_deref(), &[("encoder.txt", encoder.to_dump(Some(&config))?)], manifest)?;
    Ok(0)
}

#[derive(Serialize)]
struct MarginalRow {
    x: String,
    coordinate: usize,
    p_one_counting: Option<f64>,
    p_one_enumerated: Option<f64>,
    abs_diff: Option<f64>,
}

fn cmd_slcs_marginal(a: &SlcsMarginalArgs) -> Result<i32> {
    if a.m > MAX_MARGINAL_TABLE_DIM {
        return Err(Error::DimensionTooLarge { n: a.m, max: MAX_MARGINAL_TABLE_DIM, what: "marginal tables" });
    }
    let manifest = begin("slcs marginal", a, None)?;
    let config = a.scheme.config(a.m, 0)?;
    let mut rows = Vec::new();
    for x in 0..1u32 << a.m {
        for i in 1..=a.m {
            let counting = optional(single_letter_marginal(&config, x, i, true))?;
            let enumerated = optional(single_letter_marginal_enumerated(&config, x, i, true))?;
            rows.push(MarginalRow {
                x: crate::bitlattice::bit_string(x, a.m),
                coordinate: i,
                p_one_counting: counting,
                p_one_enumerated: enumerated,
                abs_diff: counting.zip(enumerated).map(|(c, e)| (c - e).abs()),
            });
        }
    }
    emit(a.out.out_dir.as_deref(), &[("marginal.csv", to_csv(&rows)?)], manifest)?;
    Ok(0)
}

/// Maps an empty conditional typical set to `None`.
fn optional(r: Result<f64>) -> Result<Option<f64>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::EmptyConditionalTypicalSet) => Ok(None),
        Err(e) => Err(e),
    }
}

fn cmd_slcs_props(a: &SlcsPropsArgs) -> Result<i32> {
    let manifest = begin("slcs check-props", a, Some(a.seed))?;
    let config = a.scheme.config(a.n, a.seed)?;
    let pairwise = check_pairwise_independence(&config, a.trials, a.seed)?;
    let permutation = if a.n >= 2 && a.n <= 8 {
        Some(check_permutation_invariance(&config, &Permutation::swap(a.n, 1, 2)?, a.trials, a.seed)?)
    } else {
        None
    };
    let gaps = SINGLE_LETTER_GRID
        .iter()
        .map(|&m| single_letter_gap(&config.clone().with_n(m)))
        .collect::<Result<Vec<_>>>()?;
    let shrinking = gaps.windows(2).all(|w| w[1].mean_gap <= w[0].mean_gap);
    let out = json!({
        "config": config,
        "pairwise_independence": pairwise,
        "single_letter": gaps,
        "permutation_invariance": permutation,
        "verdicts": {
            "pairwise_independence": (!pairwise.degenerate).then_some(pairwise.within_tolerance),
            "single_letter_mean_gap_shrinking": shrinking,
            "permutation_invariance": permutation.as_ref().map(|p| p.within_tolerance),
        },
    });
    emit(a.out.out_dir.as_deref(), &[("props.json", pretty(&out)?)], manifest)?;
    Ok(0)
}

fn report_violations(violations: &[String], assert: bool) -> i32 {
    for v in violations {
        eprintln!("trend violated: {v}");
    }
    if assert && !violations.is_empty() {
        EXIT_ASSERT
    } else {
        0
    }
}

fn cmd_concentration(a: &ConcentrationArgs) -> Result<i32> {
    let params = ConcentrationParams {
        family: a.common.family(a.family)?,
        p: a.common.scheme.p_x,
        ns: a.ns.clone(),
        ms: a.ms.clone(),
        gammas: a.gammas.clone(),
        k: a.k,
        draws: a.common.draws,
        seed: a.common.seed,
    };
    let manifest = begin("experiment concentration", &params, Some(a.common.seed))?;
    let rows = run_concentration(&params)?;
    emit(a.common.out.out_dir.as_deref(), &[("concentration.csv", to_csv(&rows)?)], manifest)?;
    Ok(report_violations(&trends::check_concentration(&rows), a.common.assert))
}

fn cmd_collapse(a: &CollapseArgs) -> Result<i32> {
    for &eps in &a.eps {
        check_eps(eps)?;
    }
    let params = CollapseParams {
        family: a.common.family(a.family)?,
        p: a.common.scheme.p_x,
        ns: a.ns.clone(),
        eps: a.eps.clone(),
        delta: a.delta,
        draws: a.common.draws,
        shared: !a.independent,
        seed: a.common.seed,
        mc_trials: a.mc_trials,
    };
    let manifest = begin("experiment collapse", &params, Some(a.common.seed))?;
    let rows = run_collapse(&params)?;
    emit(a.common.out.out_dir.as_deref(), &[("collapse.csv", to_csv(&rows)?)], manifest)?;
    let mut violations = trends::check_collapse_discontinuity(&rows);
    violations.extend(trends::check_collapse_trend(&rows));
    Ok(report_violations(&violations, a.common.assert))
}

fn cmd_iccs(a: &IccsArgs) -> Result<i32> {
    check_eps(a.eps)?;
    let config = a.common.scheme.config(crate::experiments::DEFAULT_NS[0], 0)?;
    let schemes = a
        .schemes
        .iter()
        .map(|s| match s.as_str() {
            "uncoded" => Ok(IccsScheme::uncoded()),
            "constant" => Ok(IccsScheme::constant()),
            "slcs" => Ok(IccsScheme::slcs(config.clone(), false)),
            "slcs-shared" => Ok(IccsScheme::slcs(config.clone(), true)),
            other => Err(Error::Parse(format!("unknown scheme {other:?}"))),
        })
        .collect::<Result<Vec<_>>>()?;
    let manifest = begin("experiment iccs", &json!({ "args": a, "schemes": schemes }), Some(a.common.seed))?;
    let mut reports = Vec::new();
    for &n in &a.ns {
        let params = IccsParams::new(n, a.eps, a.alpha_x, a.channel_delta, a.q)?;
        reports.extend(run_iccs_comparison(&params, &schemes, a.common.draws, a.common.seed)?);
    }
    emit(a.common.out.out_dir.as_deref(), &[("iccs.csv", to_csv(&reports)?)], manifest)?;
    Ok(report_violations(&trends::check_iccs(&reports), a.common.assert))
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn command_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn builtins() {
        assert_eq!(builtin_function("parity", 3).unwrap(), BooleanFunction::parity(3).unwrap());
        assert_eq!(builtin_function("dictator-2", 3).unwrap(), BooleanFunction::dictator(3, 2).unwrap());
        assert_eq!(builtin_function("threshold-2", 3).unwrap(), BooleanFunction::threshold(3, 2).unwrap());
        assert!(matches!(builtin_function("threshold", 3), Err(Error::Parse(_))));
        assert!(matches!(builtin_function("xor-2", 3), Err(Error::Parse(_))));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::EpsOutOfRange(0.7)), EXIT_USAGE);
        assert_eq!(exit_code(&Error::DimensionTooLarge { n: 17, max: 16, what: "x" }), EXIT_CAP);
        assert_eq!(exit_code(&Error::DimensionMismatch { left: 3, right: 4 }), EXIT_MISMATCH);
        assert_eq!(exit_code(&Error::EmptyCodebook), EXIT_FAILURE);
        assert_eq!(run(["depspec", "experiment", "nonsense"]), EXIT_USAGE);
        assert_eq!(run(["depspec", "bound", "--builtins", "parity", "parity", "--n", "3", "--eps", "0.7"]), EXIT_USAGE);
    }
}
