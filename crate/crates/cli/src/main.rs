//! `motivic`: command-line front end for the motivic-core library.

mod checks;
mod error;
mod json;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use motivic_core::input::{parse_divisor_document, parse_series_point, DivisorDocument};
use motivic_core::presburger::{
    eliminate_quantifiers, evaluate, generating_function, parse_formula, parse_linear_forms,
    GfOptions,
};
use motivic_core::semialg_eval::{evaluate_condition, parse_condition};
use motivic_core::snc_zeta::{zeta_at_point_closed_form, zeta_closed_form};
use motivic_core::specialization::{
    motivic_volume_integral, rational, total_volume, zeta_f, zeta_two_variable, VolumeExponent,
};
use serde_json::{json, Value};

use checks::Outcome;
use error::CliError;

#[derive(Parser)]
#[command(
    name = "motivic",
    version,
    about = "Exact motivic zeta functions and volumes"
)]
struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed form of the multivariable zeta function of an SNC divisor.
    ZetaSnc { file: String },
    /// Closed form of the zeta function at the point stratum given in the file.
    ZetaPoint { file: String },
    /// Motivic Igusa zeta function Z_f(T) from resolution data.
    ZetaResolve {
        file: String,
        /// Also print the two-variable function Z(T, U).
        #[arg(long)]
        two_variable: bool,
    },
    /// Motivic volume of the cylinder family given by `a` and `b`.
    Volume {
        file: String,
        #[command(flatten)]
        volume: VolumeArgs,
        /// Also specialize to a point count at L = q using `counts`.
        #[arg(long)]
        q: Option<i64>,
    },
    /// Volume of the special fiber for the canonical form (needs ell = 0).
    TotalVolume {
        file: String,
        #[command(flatten)]
        volume: VolumeArgs,
        #[arg(long)]
        q: Option<i64>,
    },
    /// Presburger formulas: quantifier elimination and generating functions.
    #[command(subcommand)]
    Presburger(PresburgerCommand),
    /// Semi-algebraic conditions on truncated power series.
    #[command(subcommand)]
    Semialg(SemialgCommand),
    /// Compare a closed form against an independent direct computation.
    Check {
        #[command(subcommand)]
        what: CheckCommand,
    },
}

#[derive(Args, Clone, Copy)]
struct VolumeArgs {
    /// Exponent convention for T_i: times-d uses d*b_i, plain uses b_i.
    #[arg(long, default_value = "times-d")]
    volume_exponent: VolumeExponent,
}

#[derive(Subcommand)]
enum PresburgerCommand {
    /// Eliminate all quantifiers.
    Qe { formula: String },
    /// Generating function of the set weighted by the given affine maps.
    Gf {
        formula: String,
        /// Comma-separated affine forms in l1, l2, ...
        #[arg(long)]
        phi: String,
        /// Number of free variables (defaults to the largest index used).
        #[arg(long)]
        vars: Option<usize>,
        /// Do not intersect the set with the nonnegative orthant.
        #[arg(long)]
        allow_negative: bool,
    },
    /// Compare the eliminated formula with direct evaluation on a box.
    Check {
        formula: String,
        /// Half-width of the box [-B, B]^r.
        #[arg(long = "box", default_value_t = 6)]
        half_width: i64,
        #[arg(long)]
        vars: Option<usize>,
    },
}

#[derive(Subcommand)]
enum SemialgCommand {
    /// Evaluate a condition at a point to TRUE, FALSE or INDETERMINATE.
    Eval {
        /// File containing the condition text.
        #[arg(long)]
        condition: String,
        /// JSON file with the point coordinates.
        #[arg(long)]
        point: String,
        /// Comma-separated integer parameters l1, l2, ...
        #[arg(long, default_value = "")]
        ell: String,
        /// Truncation order of coordinates not flagged as exact zero.
        #[arg(long)]
        trunc: u32,
    },
}

#[derive(Args)]
struct CheckArgs {
    file: String,
    /// Truncation degree for series comparisons.
    #[arg(long, default_value_t = 8)]
    degree: u32,
}

#[derive(Args)]
struct VolumeCheckArgs {
    file: String,
    #[arg(long, default_value_t = 8)]
    degree: u32,
    #[command(flatten)]
    volume: VolumeArgs,
    /// Comma-separated values of q for point-count comparisons.
    #[arg(long, default_value = "2,3,5")]
    q: String,
}

#[derive(Subcommand)]
enum CheckCommand {
    /// Closed form against summation of cylinder classes
    ZetaSnc(CheckArgs),
    /// Pointed closed form against summation over arcs through the point
    ZetaPoint(CheckArgs),
    /// Both specialization routes against enumeration of fibers
    ZetaResolve(CheckArgs),
    /// Volume closed form against partial sums and point counts
    Volume(VolumeCheckArgs),
    /// Total volume against the volume with a = 1, b = nu - 1
    TotalVolume(VolumeCheckArgs),
}

fn read(path: &str) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_string(),
        source,
    })
}

fn load(path: &str) -> Result<DivisorDocument, CliError> {
    Ok(parse_divisor_document(&read(path)?)?)
}

fn int_list(what: &str, text: &str) -> Result<Vec<i64>, CliError> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse()
                .map_err(|_| CliError::Usage(format!("{what}: \"{s}\" is not an integer")))
        })
        .collect()
}

/// What a command produced: text for the terminal, JSON for `--json`, and
/// whether every check passed.
struct Report {
    text: String,
    json: Value,
    ok: bool,
}

impl Report {
    fn plain(text: String, json: Value) -> Self {
        Report {
            text,
            json,
            ok: true,
        }
    }
}

fn checks_report(outcomes: Vec<Outcome>) -> Report {
    let mut text = Vec::new();
    let mut items = Vec::new();
    for o in &outcomes {
        match &o.detail {
            None => text.push(format!("PASS {}", o.name)),
            Some(d) => text.push(format!("FAIL {}: {d}", o.name)),
        }
        items.push(json!({"name": o.name, "pass": o.passed(), "detail": o.detail}));
    }
    Report {
        text: text.join("\n"),
        json: json!({"checks": items}),
        ok: outcomes.iter().all(Outcome::passed),
    }
}

fn warn(doc: &DivisorDocument) {
    if let Ok(res) = doc.resolution() {
        for w in res.warnings() {
            eprintln!("warning: {w}");
        }
    }
}

fn volume_report(
    v: motivic_core::grothendieck_ring::LocalizedMotivicElement,
    doc: &DivisorDocument,
    q: Option<i64>,
) -> Result<Report, CliError> {
    let mut text = v.to_string();
    let mut out = json!({"volume": json::localized(&v)});
    if let Some(q) = q {
        let count = v.specialize_counts(&rational(q), &doc.counts()?)?;
        text.push_str(&format!("\nat q = {q}: {count}"));
        out["q"] = json!(q);
        out["count"] = json!(count.to_string());
    }
    Ok(Report::plain(text, out))
}

fn presburger_check(
    formula: &str,
    half_width: i64,
    vars: Option<usize>,
) -> Result<Report, CliError> {
    if half_width < 0 {
        return Err(CliError::Usage("--box must be nonnegative".into()));
    }
    let f = parse_formula(formula)?;
    let qf = eliminate_quantifiers(&f)?;
    let r = vars.unwrap_or_else(|| f.free_vars().iter().next_back().map_or(0, |v| v + 1));
    let width = usize::try_from(2 * half_width + 1).unwrap_or(usize::MAX);
    let total = width
        .checked_pow(r as u32)
        .filter(|&n| n <= 1 << 22)
        .ok_or_else(|| {
            CliError::Usage(format!(
                "box [-{half_width}, {half_width}]^{r} is too large"
            ))
        })?;
    let mut point = vec![-half_width; r];
    for _ in 0..total {
        let direct = evaluate(&f, &point)?;
        let reduced = evaluate(&qf, &point)?;
        if direct != reduced {
            return Ok(Report {
                text: format!("{qf}\nFAIL at {point:?}: direct {direct}, eliminated {reduced}"),
                json: json!({"formula": qf.to_string(), "pass": false, "point": point}),
                ok: false,
            });
        }
        for x in point.iter_mut() {
            if *x < half_width {
                *x += 1;
                break;
            }
            *x = -half_width;
        }
    }
    Ok(Report::plain(
        format!("{qf}\nPASS agrees with direct evaluation on {total} points"),
        json!({"formula": qf.to_string(), "pass": true, "points": total}),
    ))
}

fn run(cli: &Cli) -> Result<Report, CliError> {
    match &cli.command {
        Command::ZetaSnc { file } => {
            let f = zeta_closed_form(&load(file)?.data)?;
            Ok(Report::plain(f.to_string(), json::rational_function(&f)))
        }
        Command::ZetaPoint { file } => {
            let doc = load(file)?;
            let f = zeta_at_point_closed_form(&doc.data, &doc.point()?)?;
            Ok(Report::plain(f.to_string(), json::rational_function(&f)))
        }
        Command::ZetaResolve { file, two_variable } => {
            let doc = load(file)?;
            warn(&doc);
            let res = doc.resolution()?;
            let zf = zeta_f(&res)?;
            if *two_variable {
                let two = zeta_two_variable(&res)?;
                Ok(Report::plain(
                    format!("Z_f(T) = {zf}\nZ(T, U) = {two}"),
                    json!({"zeta_f": json::rational_function(&zf),
                           "two_variable": json::rational_function(&two)}),
                ))
            } else {
                Ok(Report::plain(zf.to_string(), json::rational_function(&zf)))
            }
        }
        Command::Volume { file, volume, q } => {
            let doc = load(file)?;
            let v = motivic_volume_integral(&doc.volume()?, volume.volume_exponent)?;
            volume_report(v, &doc, *q)
        }
        Command::TotalVolume { file, volume, q } => {
            let doc = load(file)?;
            warn(&doc);
            let v = total_volume(&doc.resolution()?, volume.volume_exponent)?;
            volume_report(v, &doc, *q)
        }
        Command::Presburger(PresburgerCommand::Qe { formula }) => {
            let f = eliminate_quantifiers(&parse_formula(formula)?)?;
            Ok(Report::plain(
                f.to_string(),
                json!({"formula": f.to_string()}),
            ))
        }
        Command::Presburger(PresburgerCommand::Gf {
            formula,
            phi,
            vars,
            allow_negative,
        }) => {
            let f = parse_formula(formula)?;
            let phi = parse_linear_forms(phi)?;
            let nvars = vars.unwrap_or_else(|| {
                let from_f = f.free_vars().iter().next_back().map_or(0, |v| v + 1);
                phi.iter().map(|l| l.var_bound()).fold(from_f, usize::max)
            });
            let opts = GfOptions {
                nonnegative: !allow_negative,
            };
            let g = generating_function(&f, nvars, &phi, opts)?;
            Ok(Report::plain(
                g.to_string(),
                json::integer_rational_function(&g),
            ))
        }
        Command::Presburger(PresburgerCommand::Check {
            formula,
            half_width,
            vars,
        }) => presburger_check(formula, *half_width, *vars),
        Command::Semialg(SemialgCommand::Eval {
            condition,
            point,
            ell,
            trunc,
        }) => {
            let c = parse_condition(read(condition)?.trim())?;
            let pt = parse_series_point(&read(point)?, *trunc)?;
            let ell = int_list("--ell", ell)?;
            let t = evaluate_condition(&c, &pt, &ell)?;
            Ok(Report::plain(
                t.to_string(),
                json!({"condition": c.to_string(), "value": t.to_string()}),
            ))
        }
        Command::Check { what } => {
            let outcomes = match what {
                CheckCommand::ZetaSnc(a) => checks::zeta_snc(&load(&a.file)?, a.degree)?,
                CheckCommand::ZetaPoint(a) => checks::zeta_point(&load(&a.file)?, a.degree)?,
                CheckCommand::ZetaResolve(a) => {
                    let doc = load(&a.file)?;
                    warn(&doc);
                    checks::zeta_resolve(&doc, a.degree)?
                }
                CheckCommand::Volume(a) => checks::volume(
                    &load(&a.file)?,
                    a.volume.volume_exponent,
                    a.degree,
                    &int_list("--q", &a.q)?,
                )?,
                CheckCommand::TotalVolume(a) => checks::total_volume(
                    &load(&a.file)?,
                    a.volume.volume_exponent,
                    a.degree,
                    &int_list("--q", &a.q)?,
                )?,
            };
            Ok(checks_report(outcomes))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            if cli.json {
                println!("{}", report.json);
            } else {
                println!("{}", report.text);
            }
            if report.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            if cli.json {
                println!(
                    "{}",
                    json!({"error": e.to_string(), "exit_code": e.exit_code()})
                );
            }
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
