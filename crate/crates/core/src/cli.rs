//! Command-line front end. Records go to stdout as JSON lines or CSV;
//! errors go to stderr.

use std::ffi::OsString;
use std::io::{self, Write};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arc::{arc_measure, autocorrelation_arc, cdf, ArcOptions, CircleArc, LimitMethod, SeriesResult};
use crate::cantor::{cantor_exact, cantor_series};
use crate::coefficients::{CoefficientProvider, MeasureSpec};
use crate::dsl::{parse_measure, parse_number};
use crate::error::Error;
use crate::fejer::fejer_kernel;
use crate::local_dim::local_dimension;
use crate::oracle::{oracle_arc, oracle_atom, oracle_cdf, STANDARD_FIXTURES};
use crate::series::Smoothing;
use crate::wiener::{atom_mass, Window};

pub const EXIT_OK: i32 = 0;
pub const EXIT_SELFTEST_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_CERTIFICATE: i32 = 3;
pub const EXIT_DEGENERATE: i32 = 4;

/// Process exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Certificate(_) => EXIT_CERTIFICATE,
        Error::DegenerateSignal { .. } => EXIT_DEGENERATE,
        Error::InvalidSpec(_) | Error::Parse(_) | Error::InvalidInput(_) | Error::Unsupported(_) => EXIT_INPUT,
    }
}

#[derive(Debug, Parser)]
#[command(name = "arcmeasure", version, about = "Reconstruct circle measures from their Fourier coefficients")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Measure of the arc [a, b).
    Arc(ArcArgs),
    /// Distribution function μ[0, x), at a point or on a grid.
    Cdf(CdfArgs),
    /// Point mass μ{x} by Wiener averaging.
    Atom(AtomArgs),
    /// Arc measure of the autocorrelation μ ∗ μ̄ of a continuous measure.
    Autocorr(AutocorrArgs),
    /// Fourier partial sums of the Cantor function.
    Cantor(CantorArgs),
    /// Local dimension from a log-log fit of ball measures.
    Localdim(LocalDimArgs),
    /// Fejér kernel, in trigonometric-sum and closed forms.
    Fejer(FejerArgs),
    /// Oracle-equivalence sweep over the reference measures.
    Selftest(SelftestArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum LimitArg {
    Atoms,
    Cesaro,
    Continuous,
}

impl From<LimitArg> for LimitMethod {
    fn from(l: LimitArg) -> Self {
        match l {
            LimitArg::Atoms => LimitMethod::AtomDecomposition,
            LimitArg::Cesaro => LimitMethod::DirectCesaro,
            LimitArg::Continuous => LimitMethod::SkippedContinuous,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum WindowArg {
    Symmetric,
    OneSided,
}

#[derive(Debug, Args)]
struct Output {
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Debug, Args)]
struct SeriesOpts {
    #[arg(long, value_enum, default_value = "atoms")]
    limit_method: LimitArg,
    /// `none` or `block:<k>`; defaults to block:N/10.
    #[arg(long, value_parser = parse_smoothing)]
    smooth: Option<Smoothing>,
}

impl SeriesOpts {
    fn options(&self) -> ArcOptions {
        ArcOptions { limit_method: self.limit_method.into(), smoothing: self.smooth }
    }
}

#[derive(Debug, Args)]
struct ArcArgs {
    #[arg(long, value_name = "DSL", value_parser = parse_spec)]
    measure: MeasureSpec,
    #[arg(long, value_parser = parse_num, allow_hyphen_values = true)]
    a: f64,
    #[arg(long, value_parser = parse_num, allow_hyphen_values = true)]
    b: f64,
    #[arg(long, value_parser = parse_count)]
    terms: usize,
    #[command(flatten)]
    series: SeriesOpts,
    /// Also report the exact value where available.
    #[arg(long)]
    check: bool,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct CdfArgs {
    #[arg(long, value_name = "DSL", value_parser = parse_spec)]
    measure: MeasureSpec,
    #[arg(long, value_parser = parse_num, allow_hyphen_values = true, conflicts_with = "grid", required_unless_present = "grid")]
    x: Option<f64>,
    /// Evaluate at i/M for i = 0..=M.
    #[arg(long, value_name = "M", value_parser = parse_count)]
    grid: Option<usize>,
    #[arg(long, value_parser = parse_count)]
    terms: usize,
    #[command(flatten)]
    series: SeriesOpts,
    #[arg(long)]
    check: bool,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct AtomArgs {
    #[arg(long, value_name = "DSL", value_parser = parse_spec)]
    measure: MeasureSpec,
    #[arg(long, value_parser = parse_num, allow_hyphen_values = true)]
    x: f64,
    #[arg(long, value_parser = parse_count)]
    terms: usize,
    #[arg(long, value_enum, default_value = "symmetric")]
    window: WindowArg,
    #[arg(long)]
    check: bool,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct AutocorrArgs {
    #[arg(long, value_name = "DSL", value_parser = parse_spec)]
    measure: MeasureSpec,
    #[arg(long, value_parser = parse_num, allow_hyphen_values = true)]
    a: f64,
    #[arg(long, value_parser = parse_num, allow_hyphen_values = true)]
    b: f64,
    #[arg(long, value_parser = parse_count)]
    terms: usize,
    #[arg(long)]
    check: bool,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct CantorArgs {
    #[arg(long, value_parser = parse_num, allow_hyphen_values = true, conflicts_with = "grid", required_unless_present = "grid")]
    x: Option<f64>,
    /// Evaluate at i/(M+1) for i = 1..=M.
    #[arg(long, value_name = "M", value_parser = parse_count)]
    grid: Option<usize>,
    #[arg(long, value_parser = parse_count)]
    terms: usize,
    #[arg(long)]
    check: bool,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct LocalDimArgs {
    #[arg(long, value_name = "DSL", value_parser = parse_spec)]
    measure: MeasureSpec,
    #[arg(long, value_parser = parse_num, allow_hyphen_values = true)]
    x: f64,
    #[arg(long, value_parser = parse_num, allow_hyphen_values = true)]
    rmax: f64,
    #[arg(long, value_parser = parse_num, allow_hyphen_values = true)]
    rmin: f64,
    #[arg(long, value_parser = parse_count, default_value = "10")]
    points: usize,
    #[arg(long, value_parser = parse_count)]
    terms: usize,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct FejerArgs {
    #[arg(long, value_parser = parse_count)]
    n: usize,
    #[arg(long, value_parser = parse_num, allow_hyphen_values = true, conflicts_with = "grid", required_unless_present = "grid")]
    t: Option<f64>,
    /// Evaluate at i/M for i = 0..M.
    #[arg(long, value_name = "M", value_parser = parse_count)]
    grid: Option<usize>,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct SelftestArgs {
    #[arg(long, default_value_t = 20_240_601)]
    seed: u64,
    /// Random arcs per measure.
    #[arg(long, value_parser = parse_count, default_value = "20")]
    arcs: usize,
    #[arg(long, value_parser = parse_count, default_value = "10000")]
    terms: usize,
    /// Allowed excess over the tail estimate.
    #[arg(long, value_parser = parse_num, default_value = "5e-3")]
    slack: f64,
}

fn parse_spec(s: &str) -> Result<MeasureSpec, String> {
    parse_measure(s).map_err(|d| {
        let caret = " ".repeat(d.offset);
        format!("{}\n  {s}\n  {caret}^", d)
    })
}

fn parse_num(s: &str) -> Result<f64, String> {
    parse_number(s).map_err(|d| d.to_string())
}

fn parse_count(s: &str) -> Result<usize, String> {
    let v = parse_num(s)?;
    if v < 0.0 || v.fract() != 0.0 || v > i32::MAX as f64 {
        return Err(format!("expected a non-negative integer, got {s}"));
    }
    Ok(v as usize)
}

fn parse_smoothing(s: &str) -> Result<Smoothing, String> {
    if s == "none" {
        return Ok(Smoothing::None);
    }
    let k = s
        .strip_prefix("block:")
        .ok_or_else(|| format!("expected `none` or `block:<k>`, got {s}"))?;
    let block = parse_count(k)?;
    if block == 0 {
        return Err("block size must be at least 1".into());
    }
    Ok(Smoothing::BlockCesaro { block })
}

fn limit_name(m: LimitMethod) -> &'static str {
    match m {
        LimitMethod::AtomDecomposition => "atoms",
        LimitMethod::DirectCesaro => "cesaro",
        LimitMethod::SkippedContinuous => "continuous",
    }
}

fn smoothing_name(s: Smoothing) -> String {
    match s {
        Smoothing::None => "none".into(),
        Smoothing::BlockCesaro { block } => format!("block:{block}"),
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Val {
    Num(f64),
    Int(u64),
    Text(String),
    Bool(bool),
    Nums(Vec<f64>),
    Null,
}

impl Val {
    fn opt_text(s: Option<String>) -> Self {
        s.map_or(Val::Null, Val::Text)
    }
}

/// 17 significant digits; non-finite values have no JSON representation.
fn num(x: f64) -> Option<String> {
    x.is_finite().then(|| format!("{x:.16e}"))
}

impl Val {
    fn json(&self) -> String {
        match self {
            Val::Num(x) => num(*x).unwrap_or_else(|| "null".into()),
            Val::Int(n) => n.to_string(),
            Val::Text(s) => serde_json::to_string(s).expect("string serializes"),
            Val::Bool(b) => b.to_string(),
            Val::Nums(v) => {
                let items: Vec<String> = v.iter().map(|x| Val::Num(*x).json()).collect();
                format!("[{}]", items.join(","))
            }
            Val::Null => "null".into(),
        }
    }

    fn csv(&self) -> String {
        let plain = |x: f64| num(x).unwrap_or_else(|| x.to_string());
        match self {
            Val::Num(x) => plain(*x),
            Val::Int(n) => n.to_string(),
            Val::Text(s) => csv_field(s),
            Val::Bool(b) => b.to_string(),
            Val::Nums(v) => v.iter().map(|x| plain(*x)).collect::<Vec<_>>().join(";"),
            Val::Null => String::new(),
        }
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

type Fields = Vec<(&'static str, Val)>;

#[derive(Debug, Clone)]
struct Record {
    command: &'static str,
    inputs: Fields,
    values: Fields,
    diagnostics: Fields,
    oracle: Val,
}

fn json_object(fields: &Fields) -> String {
    let items: Vec<String> = fields.iter().map(|(k, v)| format!("\"{k}\":{}", v.json())).collect();
    format!("{{{}}}", items.join(","))
}

impl Record {
    fn json(&self) -> String {
        format!(
            "{{\"command\":\"{}\",\"inputs\":{},\"values\":{},\"diagnostics\":{},\"oracle\":{}}}",
            self.command,
            json_object(&self.inputs),
            json_object(&self.values),
            json_object(&self.diagnostics),
            self.oracle.json()
        )
    }

    fn csv_header(&self) -> String {
        let mut cols = vec!["command".to_string()];
        for (section, fields) in [("inputs", &self.inputs), ("values", &self.values), ("diagnostics", &self.diagnostics)] {
            cols.extend(fields.iter().map(|(k, _)| format!("{section}.{k}")));
        }
        cols.push("oracle".into());
        cols.join(",")
    }

    fn csv_row(&self) -> String {
        let mut cols = vec![self.command.to_string()];
        for fields in [&self.inputs, &self.values, &self.diagnostics] {
            cols.extend(fields.iter().map(|(_, v)| v.csv()));
        }
        cols.push(self.oracle.csv());
        cols.join(",")
    }
}

struct Emitter<'w> {
    out: &'w mut dyn Write,
    format: Format,
    header_done: bool,
}

impl<'w> Emitter<'w> {
    fn new(out: &'w mut dyn Write, format: Format) -> Self {
        Self { out, format, header_done: false }
    }

    fn emit(&mut self, r: &Record) -> io::Result<()> {
        match self.format {
            Format::Json => writeln!(self.out, "{}", r.json()),
            Format::Csv => {
                if !self.header_done {
                    writeln!(self.out, "{}", r.csv_header())?;
                    self.header_done = true;
                }
                writeln!(self.out, "{}", r.csv_row())
            }
        }
    }
}

#[derive(Debug)]
enum Failure {
    Lib(Error),
    Io(io::Error),
    Selftest,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

type Outcome = std::result::Result<(), Failure>;

/// Runs the command line `args` (including the program name) and returns the
/// process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                EXIT_INPUT
            } else {
                let _ = write!(stdout, "{text}");
                EXIT_OK
            };
        }
    };
    let outcome = match cli.command {
        Command::Arc(a) => cmd_arc(a, stdout),
        Command::Cdf(a) => cmd_cdf(a, stdout),
        Command::Atom(a) => cmd_atom(a, stdout),
        Command::Autocorr(a) => cmd_autocorr(a, stdout),
        Command::Cantor(a) => cmd_cantor(a, stdout),
        Command::Localdim(a) => cmd_localdim(a, stdout),
        Command::Fejer(a) => cmd_fejer(a, stdout),
        Command::Selftest(a) => cmd_selftest(a, stdout),
    };
    let _ = stdout.flush();
    match outcome {
        Ok(()) => EXIT_OK,
        Err(Failure::Lib(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
        Err(Failure::Io(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_INPUT
        }
        Err(Failure::Selftest) => {
            let _ = writeln!(stderr, "selftest failed");
            EXIT_SELFTEST_FAILED
        }
    }
}

/// Oracle column and note. Unsupported measures are reported, not fatal.
fn oracle_field(check: bool, f: impl FnOnce() -> crate::Result<f64>) -> crate::Result<(Val, Val)> {
    if !check {
        return Ok((Val::Null, Val::Null));
    }
    match f() {
        Ok(v) => Ok((Val::Num(v), Val::Null)),
        Err(Error::Unsupported(reason)) => Ok((Val::Null, Val::Text(reason))),
        Err(e) => Err(e),
    }
}

fn series_diagnostics(r: &SeriesResult, note: Val) -> Fields {
    vec![
        ("terms_used", Val::Int(r.terms_used as u64)),
        ("tail_estimate", Val::Num(r.tail_estimate)),
        ("limit_method", Val::Text(limit_name(r.limit_method).into())),
        ("limit_term", Val::Num(r.limit_term)),
        ("oscillation", Val::Num(r.oscillation)),
        ("series_part", Val::Num(r.series_part)),
        ("smoothing", Val::Text(smoothing_name(r.smoothing))),
        ("oracle_note", note),
    ]
}

fn requested_smoothing(s: Option<Smoothing>) -> Val {
    Val::Text(s.map_or_else(|| "default".into(), smoothing_name))
}

fn cmd_arc(args: ArcArgs, out: &mut dyn Write) -> Outcome {
    let arc = CircleArc::new(args.a, args.b)?;
    let provider = CoefficientProvider::new(args.measure)?;
    let r = arc_measure(&provider, arc, args.terms, args.series.options())?;
    let (oracle, note) = oracle_field(args.check, || oracle_arc(provider.spec(), arc))?;
    let record = Record {
        command: "arc",
        inputs: vec![
            ("measure", Val::Text(provider.spec().to_string())),
            ("a", Val::Num(args.a)),
            ("b", Val::Num(args.b)),
            ("terms", Val::Int(args.terms as u64)),
            ("limit_method", Val::Text(limit_name(args.series.limit_method.into()).into())),
            ("smoothing", requested_smoothing(args.series.smooth)),
        ],
        values: vec![("value", Val::Num(r.value))],
        diagnostics: series_diagnostics(&r, note),
        oracle,
    };
    Emitter::new(out, args.output.format).emit(&record)?;
    Ok(())
}

fn cmd_cdf(args: CdfArgs, out: &mut dyn Write) -> Outcome {
    let provider = CoefficientProvider::new(args.measure)?;
    let points: Vec<f64> = match (args.x, args.grid) {
        (Some(x), _) => vec![x],
        (None, Some(0)) => return Err(Error::InvalidInput("grid needs at least one interval".into()).into()),
        (None, Some(m)) => (0..=m).map(|i| i as f64 / m as f64).collect(),
        (None, None) => unreachable!("clap requires --x or --grid"),
    };
    let opts = args.series.options();
    let mut emitter = Emitter::new(out, args.output.format);
    for x in points {
        let r = cdf(&provider, x, args.terms, opts)?;
        let (oracle, note) = oracle_field(args.check, || oracle_cdf(provider.spec(), x))?;
        emitter.emit(&Record {
            command: "cdf",
            inputs: vec![
                ("measure", Val::Text(provider.spec().to_string())),
                ("x", Val::Num(x)),
                ("terms", Val::Int(args.terms as u64)),
                ("limit_method", Val::Text(limit_name(opts.limit_method).into())),
                ("smoothing", requested_smoothing(opts.smoothing)),
            ],
            values: vec![("value", Val::Num(r.value))],
            diagnostics: series_diagnostics(&r, note),
            oracle,
        })?;
    }
    Ok(())
}

fn cmd_atom(args: AtomArgs, out: &mut dyn Write) -> Outcome {
    let provider = CoefficientProvider::new(args.measure)?;
    let window = match args.window {
        WindowArg::Symmetric => Window::Symmetric,
        WindowArg::OneSided => Window::OneSided,
    };
    let est = atom_mass(&provider, args.x, window, args.terms)?;
    let (oracle, note) = oracle_field(args.check, || oracle_atom(provider.spec(), args.x))?;
    let window_name = match window {
        Window::Symmetric => "symmetric",
        Window::OneSided => "one-sided",
    };
    let record = Record {
        command: "atom",
        inputs: vec![
            ("measure", Val::Text(provider.spec().to_string())),
            ("x", Val::Num(args.x)),
            ("terms", Val::Int(args.terms as u64)),
            ("window", Val::Text(window_name.into())),
        ],
        values: vec![("value", Val::Num(est.value))],
        diagnostics: vec![
            ("terms_used", Val::Int(est.terms as u64)),
            ("oscillation", Val::Num(est.oscillation)),
            ("oracle_note", note),
        ],
        oracle,
    };
    Emitter::new(out, args.output.format).emit(&record)?;
    Ok(())
}

fn cmd_autocorr(args: AutocorrArgs, out: &mut dyn Write) -> Outcome {
    let arc = CircleArc::new(args.a, args.b)?;
    let provider = CoefficientProvider::new(args.measure)?;
    let r = autocorrelation_arc(&provider, arc, args.terms)?;
    let auto = MeasureSpec::autocorrelation(provider.spec().clone());
    let (oracle, note) = oracle_field(args.check, || oracle_arc(&auto, arc))?;
    let record = Record {
        command: "autocorr",
        inputs: vec![
            ("measure", Val::Text(provider.spec().to_string())),
            ("a", Val::Num(args.a)),
            ("b", Val::Num(args.b)),
            ("terms", Val::Int(args.terms as u64)),
        ],
        values: vec![("value", Val::Num(r.value))],
        diagnostics: series_diagnostics(&r, note),
        oracle,
    };
    Emitter::new(out, args.output.format).emit(&record)?;
    Ok(())
}

fn cmd_cantor(args: CantorArgs, out: &mut dyn Write) -> Outcome {
    let points: Vec<f64> = match (args.x, args.grid) {
        (Some(x), _) => vec![x],
        (None, Some(m)) => (1..=m).map(|i| i as f64 / (m + 1) as f64).collect(),
        (None, None) => unreachable!("clap requires --x or --grid"),
    };
    let mut emitter = Emitter::new(out, args.output.format);
    for x in points {
        let p = cantor_series(x, args.terms)?;
        let oracle = if args.check { Val::Num(cantor_exact(x)) } else { Val::Null };
        emitter.emit(&Record {
            command: "cantor",
            inputs: vec![("x", Val::Num(x)), ("terms", Val::Int(args.terms as u64))],
            values: vec![
                ("partial_sum", Val::Num(p.partial_sum)),
                ("exact", Val::Num(p.exact)),
                ("error", Val::Num(p.error())),
            ],
            diagnostics: vec![
                ("terms_used", Val::Int(p.terms as u64)),
                ("tail_estimate", Val::Num(p.tail_estimate)),
            ],
            oracle,
        })?;
    }
    Ok(())
}

fn cmd_localdim(args: LocalDimArgs, out: &mut dyn Write) -> Outcome {
    let provider = CoefficientProvider::new(args.measure)?;
    let fit = local_dimension(&provider, args.x, args.rmax, args.rmin, args.points, args.terms)?;
    let note = (!fit.hypothesis_exact)
        .then(|| format!("hypothesis sum truncated after {} terms", fit.hypothesis_terms));
    let record = Record {
        command: "localdim",
        inputs: vec![
            ("measure", Val::Text(provider.spec().to_string())),
            ("x", Val::Num(args.x)),
            ("rmax", Val::Num(args.rmax)),
            ("rmin", Val::Num(args.rmin)),
            ("points", Val::Int(args.points as u64)),
            ("terms", Val::Int(args.terms as u64)),
        ],
        values: vec![
            ("slope", Val::Num(fit.slope)),
            ("intercept", Val::Num(fit.intercept)),
            ("residual", Val::Num(fit.residual)),
            ("radii", Val::Nums(fit.radii)),
            ("log_measures", Val::Nums(fit.log_measures)),
        ],
        diagnostics: vec![
            ("tails", Val::Nums(fit.tails)),
            ("correction_ratios", Val::Nums(fit.correction_ratios)),
            ("hypothesis_sum", Val::Num(fit.hypothesis_sum)),
            ("hypothesis_terms", Val::Int(fit.hypothesis_terms as u64)),
            ("hypothesis_exact", Val::Bool(fit.hypothesis_exact)),
            ("hypothesis_met", Val::Bool(fit.hypothesis_met)),
            ("hypothesis_note", Val::opt_text(note)),
        ],
        oracle: Val::Null,
    };
    Emitter::new(out, args.output.format).emit(&record)?;
    Ok(())
}

fn cmd_fejer(args: FejerArgs, out: &mut dyn Write) -> Outcome {
    let points: Vec<f64> = match (args.t, args.grid) {
        (Some(t), _) => vec![t],
        (None, Some(m)) => (0..m).map(|i| i as f64 / m as f64).collect(),
        (None, None) => unreachable!("clap requires --t or --grid"),
    };
    let mut emitter = Emitter::new(out, args.output.format);
    for t in points {
        let k = fejer_kernel(args.n, t);
        emitter.emit(&Record {
            command: "fejer",
            inputs: vec![("n", Val::Int(args.n as u64)), ("t", Val::Num(t))],
            values: vec![("value_sum", Val::Num(k.value_sum)), ("value_closed", Val::Num(k.value_closed))],
            diagnostics: vec![("reduced_t", Val::Num(k.t))],
            oracle: Val::Null,
        })?;
    }
    Ok(())
}

fn cmd_selftest(args: SelftestArgs, out: &mut dyn Write) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    writeln!(out, "{:<40} {:>5} {:>12} {:>12}  result", "measure", "arcs", "max_error", "max_excess")?;
    let mut all_ok = true;
    for src in STANDARD_FIXTURES {
        let spec = parse_measure(src).map_err(Error::from)?;
        let provider = CoefficientProvider::new(spec.clone())?;
        let mut max_error: f64 = 0.0;
        let mut max_excess = f64::NEG_INFINITY;
        for _ in 0..args.arcs {
            let (u, v): (f64, f64) = (rng.gen(), rng.gen());
            let (a, b) = if u < v { (u, v) } else { (v, u) };
            let Ok(arc) = CircleArc::new(a, b) else { continue };
            let r = arc_measure(&provider, arc, args.terms, ArcOptions::default())?;
            let error = (r.value - oracle_arc(&spec, arc)?).abs();
            max_error = max_error.max(error);
            max_excess = max_excess.max(error - r.tail_estimate);
        }
        let ok = max_excess <= args.slack;
        all_ok &= ok;
        writeln!(
            out,
            "{:<40} {:>5} {:>12.3e} {:>12.3e}  {}",
            src,
            args.arcs,
            max_error,
            max_excess,
            if ok { "PASS" } else { "FAIL" }
        )?;
    }
    if all_ok {
        Ok(())
    } else {
        Err(Failure::Selftest)
    }
}
