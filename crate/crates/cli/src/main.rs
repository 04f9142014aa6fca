mod error;
mod svg;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::{json, Value};

use polygeo_core::cfrac;
use polygeo_core::exact::{format_rational, parse_rational, QuadraticIrrational as Quad, Rational};
use polygeo_core::flow::{self, Start};
use polygeo_core::rotation::{self, Lemma1Counter, UnitInterval};
use polygeo_core::sampling::{grid_point, random_window, seeded_rng};
use polygeo_core::surface::PolysquareSurface;
use polygeo_core::uniformity::{self, CaseLabel, EdgeHeights, Lemma3Context};

use error::{CliError, CliResult};

const DECIMALS: u32 = 40;

#[derive(Parser, Debug)]
#[command(name = "polygeo", version, about = "Exact geodesic flow on square-tiled surfaces")]
struct Cli {
    /// Worker threads for parallel sweeps (default: all cores).
    #[arg(long, global = true, env = "POLYGEO_THREADS")]
    threads: Option<usize>,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Continued fraction digits and convergent denominators.
    Cf {
        #[arg(long)]
        alpha: String,
        #[arg(long, default_value_t = 20)]
        digits: usize,
    },
    /// Ostrowski digits of N in the base of convergent denominators.
    Ostrowski {
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        n: u64,
    },
    /// The orbit {kα}, k = 1..n, optionally restricted to an interval.
    Rotate {
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        n: u64,
        /// `lower,upper` as rationals; counts points in [lower, upper).
        #[arg(long)]
        interval: Option<String>,
    },
    /// Solutions β of ℓ(k) − kα = β in closed intervals of a given length.
    Lemma1 {
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        h: usize,
        /// Interval length: a rational, or a multiple of 1/q such as `1/q`, `3/q`.
        #[arg(long, default_value = "1/q")]
        len: String,
        /// Count a single interval starting here instead of sampling.
        #[arg(long)]
        lower: Option<String>,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Uniformity threshold for the rotation orbit.
    ThresholdA {
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        eps: String,
    },
    /// Vertical-edge crossings of a geodesic.
    Trace {
        #[command(flatten)]
        flow: FlowArgs,
        #[arg(long)]
        n: u64,
    },
    /// Covering length T(m) for m = 1, 2, 4, ..., mmax.
    Superdensity {
        #[command(flatten)]
        flow: FlowArgs,
        #[arg(long, default_value_t = 32)]
        mmax: u64,
    },
    /// Extreme visiting numbers over windows of length C/n.
    Uniformity {
        #[command(flatten)]
        flow: FlowArgs,
        #[arg(long)]
        n: u64,
        #[arg(long = "C")]
        c: String,
        #[arg(long)]
        eps: Option<String>,
    },
    /// Uniformity threshold for the crossing set of a surface.
    Threshold {
        #[command(flatten)]
        flow: FlowArgs,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        eps: String,
    },
    /// Long windows against the short-window extremes at a Case-A scale.
    Lemma3 {
        #[command(flatten)]
        flow: FlowArgs,
        #[arg(long)]
        n: u64,
        #[arg(long = "C")]
        c: String,
        #[arg(long)]
        eps: String,
        /// Window length; defaults to 3C/(εn).
        #[arg(long)]
        len: Option<String>,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args, Debug)]
struct FlowArgs {
    /// A JSON file, or a fixture name (`torus`, `L3`).
    #[arg(long)]
    surface: String,
    #[arg(long)]
    alpha: String,
    #[arg(long, default_value = "1/2")]
    y0: String,
    #[arg(long, default_value_t = 0)]
    square: usize,
}

impl FlowArgs {
    fn resolve(&self) -> CliResult<(PolysquareSurface, Quad, Start)> {
        let surface = load_surface(&self.surface)?;
        let alpha = parse_alpha(&self.alpha)?;
        let start = Start {
            square: self.square,
            y0: parse_rational(&self.y0)?,
        };
        Ok((surface, alpha, start))
    }
}

fn load_surface(spec: &str) -> CliResult<PolysquareSurface> {
    if !Path::new(spec).exists() {
        if let Some(s) = PolysquareSurface::fixture(spec) {
            return Ok(s);
        }
    }
    Ok(PolysquareSurface::load(spec)?)
}

fn parse_alpha(text: &str) -> CliResult<Quad> {
    Ok(text.parse::<Quad>()?)
}

fn parse_eps(text: &str) -> CliResult<Rational> {
    Ok(parse_rational(text)?)
}

/// A finished artifact.
struct Output {
    text: String,
}

fn emit(out: Option<&Path>, o: Output) -> CliResult<()> {
    match out {
        Some(path) => std::fs::write(path, o.text).map_err(|source| CliError::Write {
            path: path.to_path_buf(),
            source,
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(o.text.as_bytes())
                .map_err(|source| CliError::Write {
                    path: PathBuf::from("<stdout>"),
                    source,
                })
        }
    }
}

fn json_output(v: &impl Serialize) -> Output {
    Output {
        text: serde_json::to_string_pretty(v).expect("serializable") + "\n",
    }
}

fn unsupported(format: Format, command: &str) -> CliError {
    CliError::BadArgs(format!("format {format:?} is not available for {command}").to_lowercase())
}

/// Big integers as JSON numbers while they fit, strings beyond.
fn int_value(n: &BigInt) -> Value {
    n.to_u64().map_or_else(|| Value::String(n.to_string()), Value::from)
}

fn rf(r: &Rational) -> f64 {
    r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
}

fn run(cli: Cli) -> CliResult<()> {
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(CliError::BadArgs("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| CliError::BadArgs(e.to_string()))?;
    }
    let out = cli.out.as_deref();
    let output = match cli.command {
        Command::Cf { alpha, digits } => cmd_cf(&parse_alpha(&alpha)?, digits, cli.format)?,
        Command::Ostrowski { alpha, n } => cmd_ostrowski(&parse_alpha(&alpha)?, n, cli.format)?,
        Command::Rotate { alpha, n, interval } => {
            cmd_rotate(&parse_alpha(&alpha)?, n, interval.as_deref(), cli.format)?
        }
        Command::Lemma1 {
            alpha,
            h,
            len,
            lower,
            samples,
            seed,
        } => cmd_lemma1(&parse_alpha(&alpha)?, h, &len, lower.as_deref(), samples, seed, cli.format)?,
        Command::ThresholdA { alpha, n, eps } => {
            cmd_threshold_a(&parse_alpha(&alpha)?, n, &parse_eps(&eps)?, cli.format)?
        }
        Command::Trace { flow, n } => {
            let (s, a, st) = flow.resolve()?;
            cmd_trace(&s, &a, &st, n, cli.format)?
        }
        Command::Superdensity { flow, mmax } => {
            let (s, a, st) = flow.resolve()?;
            cmd_superdensity(&s, &a, &st, mmax, cli.format)?
        }
        Command::Uniformity { flow, n, c, eps } => {
            let (s, a, st) = flow.resolve()?;
            let eps = eps.as_deref().map(parse_eps).transpose()?;
            cmd_uniformity(&s, &a, &st, n, &parse_rational(&c)?, eps.as_ref(), cli.format)?
        }
        Command::Threshold { flow, n, eps } => {
            let (s, a, st) = flow.resolve()?;
            cmd_threshold(&s, &a, &st, n, &parse_eps(&eps)?, cli.format)?
        }
        Command::Lemma3 {
            flow,
            n,
            c,
            eps,
            len,
            samples,
            seed,
        } => {
            let (s, a, st) = flow.resolve()?;
            let params = Lemma3Params {
                n,
                c: parse_rational(&c)?,
                eps: parse_eps(&eps)?,
                len: len.as_deref().map(parse_rational).transpose()?,
                samples,
                seed,
            };
            cmd_lemma3(&s, &a, &st, &params, cli.format)?
        }
    };
    emit(out, output)
}

fn cmd_cf(alpha: &Quad, digits: usize, format: Option<Format>) -> CliResult<Output> {
    let cf = cfrac::expand(alpha, cfrac::DEFAULT_MAX_DIGITS)?;
    let conv = cfrac::convergents(&cf, digits);
    match format.unwrap_or(Format::Json) {
        Format::Json => Ok(json_output(&json!({
            "alpha": alpha.to_string(),
            "digits": cf.digits(digits),
            "q": conv.iter().map(|c| int_value(&c.q)).collect::<Vec<_>>(),
            "p": conv.iter().map(|c| int_value(&c.p)).collect::<Vec<_>>(),
            "preperiod": cf.preperiod(),
            "period": cf.period(),
            "digit_bound": cf.digit_bound(),
        }))),
        Format::Csv => {
            let mut text = String::from("m,a,p,q\n");
            for (c, a) in conv.iter().zip(cf.digits(digits)) {
                let _ = writeln!(text, "{},{a},{},{}", c.index, c.p, c.q);
            }
            Ok(Output { text })
        }
        f => Err(unsupported(f, "cf")),
    }
}

fn cmd_ostrowski(alpha: &Quad, n: u64, format: Option<Format>) -> CliResult<Output> {
    let cf = cfrac::expand(alpha, cfrac::DEFAULT_MAX_DIGITS)?;
    let d = cfrac::ostrowski_decompose(n, &cf);
    let conv = cfrac::convergents(&cf, d.digits.len());
    match format.unwrap_or(Format::Json) {
        Format::Json => Ok(json_output(&json!({
            "n": n,
            "digits": d.digits,
            "q": conv.iter().map(|c| int_value(&c.q)).collect::<Vec<_>>(),
            "valid": cfrac::ostrowski_validate(&d, &cf),
        }))),
        Format::Csv => {
            let mut text = String::from("i,q,digit\n");
            for (c, b) in conv.iter().zip(&d.digits) {
                let _ = writeln!(text, "{},{},{b}", c.index, c.q);
            }
            Ok(Output { text })
        }
        f => Err(unsupported(f, "ostrowski")),
    }
}

fn parse_interval(text: &str) -> CliResult<UnitInterval> {
    let (a, b) = text
        .split_once(',')
        .ok_or_else(|| CliError::BadArgs(format!("interval must be `lower,upper`, got {text:?}")))?;
    Ok(UnitInterval::from_rationals(&parse_rational(a)?, &parse_rational(b)?)?)
}

fn cmd_rotate(alpha: &Quad, n: u64, interval: Option<&str>, format: Option<Format>) -> CliResult<Output> {
    let o = rotation::orbit(alpha, n)?;
    let interval = interval.map(parse_interval).transpose()?;
    let keep = |p: &Quad| interval.as_ref().map_or(true, |i| i.contains(p));
    match format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut text = String::from("k,frac_decimal_40\n");
            for (k, p) in o.points().iter().enumerate() {
                if keep(p) {
                    let _ = writeln!(text, "{},{}", k + 1, p.to_decimal(DECIMALS));
                }
            }
            Ok(Output { text })
        }
        Format::Json => {
            let mut v = json!({ "alpha": alpha.to_string(), "n": n });
            if let Some(i) = &interval {
                let visits = rotation::visiting_number(&o, i);
                let expected = i.length().mul_integer(&n.into());
                v["interval"] = json!([i.lower().to_string(), i.upper().to_string()]);
                v["visits"] = json!(visits);
                v["expected"] = json!(expected.to_decimal(DECIMALS));
            } else {
                v["points"] = json!(o
                    .points()
                    .iter()
                    .map(|p| p.to_decimal(DECIMALS))
                    .collect::<Vec<_>>());
            }
            Ok(json_output(&v))
        }
        Format::Svg => {
            let values: Vec<f64> = o.points().iter().filter(|p| keep(p)).map(Quad::to_f64).collect();
            Ok(Output {
                text: svg::histogram(&format!("{{kα}}, α = {alpha}, n = {n}"), &[("orbit".into(), values)], 50),
            })
        }
    }
}

fn parse_len(text: &str, q: u64) -> CliResult<Rational> {
    let t = text.trim();
    if let Some(mult) = t.strip_suffix("/q") {
        let mult = if mult.is_empty() { Rational::from_integer(1.into()) } else { parse_rational(mult)? };
        return Ok(mult / Rational::from_integer(q.into()));
    }
    Ok(parse_rational(t)?)
}

fn cmd_lemma1(
    alpha: &Quad,
    h: usize,
    len: &str,
    lower: Option<&str>,
    samples: usize,
    seed: u64,
    format: Option<Format>,
) -> CliResult<Output> {
    let counter = Lemma1Counter::new(alpha, h)?;
    let len = parse_len(len, counter.q())?;
    let rows: Vec<(Rational, Rational, u64)> = match lower {
        Some(l) => {
            let l = parse_rational(l)?;
            let u = &l + &len;
            let c = counter.count(&l, &u);
            vec![(l, u, c)]
        }
        None => {
            let mut rng = seeded_rng(seed);
            (0..samples)
                .map(|_| {
                    let l = grid_point(&mut rng, &Rational::from_integer(1.into()));
                    let u = &l + &len;
                    let c = counter.count(&l, &u);
                    (l, u, c)
                })
                .collect()
        }
    };
    match format.unwrap_or(Format::Json) {
        Format::Json => {
            let mut histogram: BTreeMap<u64, u64> = BTreeMap::new();
            for r in &rows {
                *histogram.entry(r.2).or_default() += 1;
            }
            Ok(json_output(&json!({
                "alpha": alpha.to_string(),
                "h": h,
                "q": counter.q(),
                "len": format_rational(&len),
                "samples": rows.len(),
                "seed": seed,
                "min_count": rows.iter().map(|r| r.2).min(),
                "max_count": rows.iter().map(|r| r.2).max(),
                "histogram": histogram,
            })))
        }
        Format::Csv => {
            let mut text = String::from("lower,upper,count\n");
            for (l, u, c) in &rows {
                let _ = writeln!(text, "{},{},{c}", format_rational(l), format_rational(u));
            }
            Ok(Output { text })
        }
        f => Err(unsupported(f, "lemma1")),
    }
}

fn cmd_threshold_a(alpha: &Quad, n: u64, eps: &Rational, format: Option<Format>) -> CliResult<Output> {
    let bracket = rotation::theorem_a_threshold(alpha, n, eps)?;
    match format.unwrap_or(Format::Json) {
        Format::Json => Ok(json_output(&bracket)),
        Format::Csv => {
            let mut text = String::from("C,passed\n");
            for p in &bracket.probes {
                let _ = writeln!(text, "{},{}", format_rational(&p.c), p.passed);
            }
            Ok(Output { text })
        }
        f => Err(unsupported(f, "threshold-a")),
    }
}

fn cmd_trace(s: &PolysquareSurface, alpha: &Quad, start: &Start, n: u64, format: Option<Format>) -> CliResult<Output> {
    let set = flow::trace_crossings(s, alpha, start, n)?;
    match format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut text = String::from("k,edge,height_decimal_40\n");
            for c in &set.crossings {
                let _ = writeln!(text, "{},{},{}", c.k, c.edge, c.height.to_decimal(DECIMALS));
            }
            Ok(Output { text })
        }
        Format::Json => {
            let crossings: Vec<Value> = set
                .crossings
                .iter()
                .map(|c| json!({ "k": c.k, "edge": c.edge, "height": c.height.to_string() }))
                .collect();
            Ok(json_output(&json!({
                "alpha": alpha.to_string(),
                "start": start,
                "surface": s,
                "crossings": crossings,
            })))
        }
        Format::Svg => {
            let series: Vec<(String, Vec<f64>)> = (0..s.squares())
                .map(|e| {
                    let v = set.crossings.iter().filter(|c| c.edge == e).map(|c| c.height.to_f64()).collect();
                    (format!("edge {e}"), v)
                })
                .collect();
            Ok(Output {
                text: svg::histogram(&format!("crossing heights, α = {alpha}, n = {n}"), &series, 50),
            })
        }
    }
}

fn cmd_superdensity(
    s: &PolysquareSurface,
    alpha: &Quad,
    start: &Start,
    mmax: u64,
    format: Option<Format>,
) -> CliResult<Output> {
    let profile = flow::superdensity_profile(s, alpha, start, mmax)?;
    match format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut text = String::from("m,crossings,first_cover_extent,arc_length,arc_length_per_m\n");
            for e in &profile {
                let _ = writeln!(
                    text,
                    "{},{},{},{},{}",
                    e.m, e.crossings, e.first_cover_extent, e.arc_length, e.arc_length_per_m
                );
            }
            Ok(Output { text })
        }
        Format::Json => Ok(json_output(&profile)),
        Format::Svg => {
            let points: Vec<(f64, f64)> = profile.iter().map(|e| (e.m as f64, e.arc_length_per_m)).collect();
            let spec = svg::LinePlot {
                title: &format!("covering length per m, α = {alpha}"),
                xlabel: "m",
                ylabel: "T(m)/m",
                log_x: true,
                reference: None,
            };
            Ok(Output {
                text: svg::line_plot(&spec, &[("T(m)/m".into(), points)]),
            })
        }
    }
}

fn heights_for(s: &PolysquareSurface, alpha: &Quad, start: &Start, n: u64) -> CliResult<EdgeHeights> {
    Ok(flow::trace_crossings(s, alpha, start, n)?.edge_heights())
}

fn cmd_uniformity(
    s: &PolysquareSurface,
    alpha: &Quad,
    start: &Start,
    n: u64,
    c: &Rational,
    eps: Option<&Rational>,
    format: Option<Format>,
) -> CliResult<Output> {
    let h = heights_for(s, alpha, start, n)?;
    let mut report = uniformity::family_extremes(&h, c)?;
    if let Some(eps) = eps {
        report.classify(eps)?;
    }
    match format.unwrap_or(Format::Json) {
        Format::Json => Ok(json_output(&report)),
        Format::Csv => {
            let mut text = String::from("C,min,max,ratio,case\n");
            let _ = writeln!(text, "{}", sweep_row(c, &report));
            Ok(Output { text })
        }
        f => Err(unsupported(f, "uniformity")),
    }
}

fn sweep_row(c: &Rational, r: &uniformity::UniformityReport) -> String {
    let case = match r.case_label {
        Some(CaseLabel::A) => "A",
        Some(CaseLabel::B) => "B",
        None => "",
    };
    format!(
        "{},{},{},{},{case}",
        format_rational(c),
        r.min_visit,
        r.max_visit,
        format_rational(&r.ratio)
    )
}

fn cmd_threshold(
    s: &PolysquareSurface,
    alpha: &Quad,
    start: &Start,
    n: u64,
    eps: &Rational,
    format: Option<Format>,
) -> CliResult<Output> {
    let h = heights_for(s, alpha, start, n)?;
    let bracket = uniformity::theorem1_threshold(&h, eps)?;
    // every probed scale, plus 2·C_hi, in increasing order
    let mut scales: Vec<Rational> = bracket.probes.iter().map(|p| p.c.clone()).collect();
    scales.push(&bracket.hi * Rational::from_integer(2.into()));
    scales.sort();
    scales.dedup();
    let n_rat = Rational::from_integer(n.into());
    let one = Rational::from_integer(1.into());
    let mut sweep = Vec::new();
    for c in scales.iter().filter(|c| **c > one && **c < n_rat) {
        let mut r = uniformity::family_extremes(&h, c)?;
        r.classify(eps)?;
        sweep.push((c.clone(), r));
    }
    match format.unwrap_or(Format::Json) {
        Format::Json => {
            let rows: Vec<Value> = sweep
                .iter()
                .map(|(c, r)| {
                    json!({
                        "C": format_rational(c),
                        "min": r.min_visit,
                        "max": r.max_visit,
                        "ratio": format_rational(&r.ratio),
                        "case": r.case_label,
                    })
                })
                .collect();
            Ok(json_output(&json!({
                "alpha": alpha.to_string(),
                "surface": s,
                "start": start,
                "bracket": bracket,
                "sweep": rows,
            })))
        }
        Format::Csv => {
            let mut text = String::from("C,min,max,ratio,case\n");
            for (c, r) in &sweep {
                let _ = writeln!(text, "{}", sweep_row(c, r));
            }
            Ok(Output { text })
        }
        Format::Svg => {
            let points: Vec<(f64, f64)> = sweep.iter().map(|(c, r)| (rf(c), rf(&r.ratio))).collect();
            let cut = 1.0 - rf(eps);
            let spec = svg::LinePlot {
                title: &format!("min/max visiting ratio, α = {alpha}, n = {n}"),
                xlabel: "C",
                ylabel: "min / max",
                log_x: true,
                reference: Some((cut, "1 - ε")),
            };
            Ok(Output {
                text: svg::line_plot(&spec, &[("ratio".into(), points)]),
            })
        }
    }
}

struct Lemma3Params {
    n: u64,
    c: Rational,
    eps: Rational,
    len: Option<Rational>,
    samples: usize,
    seed: u64,
}

fn cmd_lemma3(
    s: &PolysquareSurface,
    alpha: &Quad,
    start: &Start,
    p: &Lemma3Params,
    format: Option<Format>,
) -> CliResult<Output> {
    let h = heights_for(s, alpha, start, p.n)?;
    let ctx = Lemma3Context::new(&h, &p.c, &p.eps)?;
    let n_rat = Rational::from_integer(p.n.into());
    let len = p
        .len
        .clone()
        .unwrap_or_else(|| Rational::from_integer(3.into()) * &p.c / (&p.eps * &n_rat));
    let mut rng = seeded_rng(p.seed);
    let mut rows = Vec::with_capacity(p.samples);
    for _ in 0..p.samples {
        let j = random_window(&mut rng, h.edge_count(), &len)?;
        let outcome = ctx.check(&j)?;
        let relative = ctx.relative_error_bound_holds(&j);
        rows.push((j, outcome, relative));
    }
    match format.unwrap_or(Format::Json) {
        Format::Json => Ok(json_output(&json!({
            "alpha": alpha.to_string(),
            "n": p.n,
            "C": format_rational(&p.c),
            "eps": format_rational(&p.eps),
            "len": format_rational(&len),
            "samples": rows.len(),
            "seed": p.seed,
            "two_sided_held": rows.iter().filter(|r| r.1.holds).count(),
            "relative_bound_held": rows.iter().filter(|r| r.2).count(),
            "report": ctx.report(),
        }))),
        Format::Csv => {
            let mut text = String::from("edge,lower,upper,visits,lower_bound,upper_bound,two_sided,relative\n");
            for (j, o, rel) in &rows {
                let _ = writeln!(
                    text,
                    "{},{},{},{},{},{},{},{rel}",
                    j.edge,
                    j.lower,
                    j.upper,
                    o.visits,
                    o.lower_bound.to_decimal(12),
                    o.upper_bound.to_decimal(12),
                    o.holds
                );
            }
            Ok(Output { text })
        }
        f => Err(unsupported(f, "lemma3")),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion)
                || e.kind() == ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand
            {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let err = CliError::BadArgs(e.to_string().trim().to_string());
            eprintln!("{}", err.to_json());
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(1)
        }
    }
}
