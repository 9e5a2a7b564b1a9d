//! `dynnikov`: command-line front end for Dynnikov coordinates, braid
//! actions and dilatation estimates.
//!
//! Exit codes: 0 on success, 1 when the computation itself fails or reports
//! a negative result (e.g. invalid triangle coordinates), 2 for bad usage.

use std::fmt::Display;
use std::process::ExitCode;

use anyhow::anyhow;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use dynnikov::analysis::{
    analyze_pa, entropy_estimate, verify_family, Family, PaOptions, PaReport,
};
use dynnikov::{
    apply_word, apply_word_projective, component_counts, dynnikov_from_triangle,
    triangle_from_dynnikov, validate_triangle, BraidWord, DynnikovCoords, IntCoords, IntTriangle,
    RealCoords, RealTriangle, Scalar, TriangleCoords,
};

#[derive(Parser)]
#[command(
    name = "dynnikov",
    version,
    about = "Dynnikov coordinates and braid dynamics"
)]
struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Convert, count and validate lamination coordinates.
    #[command(subcommand)]
    Coords(CoordsCommand),
    /// Apply a braid word to Dynnikov coordinates.
    Act(ActArgs),
    /// Look for a pseudo-Anosov fixed point and its Dynnikov matrices.
    Pa(PaArgs),
    /// Growth-rate estimate of the topological entropy.
    Entropy(EntropyArgs),
    /// Check a closed-form braid family against the pipeline.
    Family(FamilyArgs),
}

#[derive(Subcommand)]
enum CoordsCommand {
    /// Dynnikov coordinates to triangle coordinates.
    Invert(AbArgs),
    /// Triangle coordinates to Dynnikov coordinates.
    Forward(TriangleArgs),
    /// Per-region component counts of an integral lamination.
    Counts(AbArgs),
    /// Check triangle coordinates for consistency.
    Validate(TriangleArgs),
}

#[derive(Args)]
struct AbArgs {
    /// Number of punctures.
    #[arg(short)]
    n: usize,
    /// Dynnikov coordinates as "a_1,..,a_{n-2};b_1,..,b_{n-2}".
    #[arg(long, allow_hyphen_values = true)]
    ab: String,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct TriangleArgs {
    /// Number of punctures.
    #[arg(short)]
    n: usize,
    /// Triangle coordinates as "α_1,..,α_{2n-4};β_1,..,β_{n-1}".
    #[arg(long, allow_hyphen_values = true)]
    triangle: String,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ActArgs {
    #[arg(short)]
    n: usize,
    /// Braid word, e.g. "1 -2" for σ_1σ_2^{-1}; the leftmost letter acts first.
    #[arg(short, long, allow_hyphen_values = true)]
    word: String,
    #[arg(long, allow_hyphen_values = true)]
    ab: String,
    /// Number of times to apply the word.
    #[arg(long, default_value_t = 1)]
    iters: usize,
    /// Rescale to sup-norm 1 after every application and print the trajectory.
    #[arg(long)]
    projective: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct PaArgs {
    #[arg(short)]
    n: usize,
    #[arg(short, long, allow_hyphen_values = true)]
    word: String,
    #[command(flatten)]
    search: SearchArgs,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct SearchArgs {
    /// Random starting points.
    #[arg(long, default_value_t = 8)]
    restarts: usize,
    /// Maximum word applications per start.
    #[arg(long, default_value_t = 10_000)]
    max_iter: usize,
    /// Consecutive equal signatures needed to accept a region.
    #[arg(long, default_value_t = 5)]
    stable_window: usize,
    #[arg(long, default_value_t = 1e-9)]
    tie_tolerance: f64,
}

impl SearchArgs {
    fn options(&self, seed: u64) -> PaOptions {
        PaOptions {
            restarts: self.restarts,
            max_iter: self.max_iter,
            stable_window: self.stable_window,
            tie_tolerance: self.tie_tolerance,
            seed,
            ..PaOptions::default()
        }
    }
}

#[derive(Args)]
struct EntropyArgs {
    #[arg(short)]
    n: usize,
    #[arg(short, long, allow_hyphen_values = true)]
    word: String,
    /// Integer start coordinates; defaults to all ones.
    #[arg(long, allow_hyphen_values = true)]
    ab: Option<String>,
    #[arg(long, default_value_t = 200)]
    iters: usize,
    /// Print every c_m as CSV.
    #[arg(long, conflicts_with = "json")]
    csv: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Beta,
    Sigma,
    Tau,
}

#[derive(Args)]
struct FamilyArgs {
    kind: Kind,
    /// First family parameter (beta, sigma).
    #[arg(short)]
    m: Option<usize>,
    /// Second family parameter, or the strand count for tau.
    #[arg(short)]
    n: usize,
    #[command(flatten)]
    search: SearchArgs,
    #[arg(long)]
    json: bool,
}

enum Failure {
    Usage(anyhow::Error),
    Domain(anyhow::Error),
    /// Output already printed; exit with this code.
    Quiet(u8),
}

impl From<dynnikov::Error> for Failure {
    fn from(e: dynnikov::Error) -> Self {
        Failure::Domain(e.into())
    }
}

type CmdResult = Result<(), Failure>;

fn usage<E: Into<anyhow::Error>>(what: &str) -> impl FnOnce(E) -> Failure + '_ {
    move |e| Failure::Usage(e.into().context(format!("invalid {what}")))
}

fn print_json(v: &Value) {
    println!(
        "{}",
        serde_json::to_string_pretty(v).expect("JSON values serialize")
    );
}

fn parse_word(text: &str, n: usize) -> Result<BraidWord, Failure> {
    BraidWord::parse(text, n).map_err(usage("braid word"))
}

enum Coords {
    Int(IntCoords),
    Real(RealCoords),
}

/// Integer coordinates when every entry is an integer, reals otherwise.
fn parse_ab(text: &str, n: usize) -> Result<Coords, Failure> {
    match IntCoords::parse(text, n) {
        Ok(c) => Ok(Coords::Int(c)),
        Err(dynnikov::Error::BadNumber(_)) => RealCoords::parse(text, n)
            .map(Coords::Real)
            .map_err(usage("coordinates")),
        Err(e) => Err(usage("coordinates")(e)),
    }
}

enum Triangle {
    Int(IntTriangle),
    Real(RealTriangle),
}

fn parse_triangle(text: &str, n: usize) -> Result<Triangle, Failure> {
    match IntTriangle::parse(text, n) {
        Ok(c) => Ok(Triangle::Int(c)),
        Err(dynnikov::Error::BadNumber(_)) => RealTriangle::parse(text, n)
            .map(Triangle::Real)
            .map_err(usage("triangle coordinates")),
        Err(e) => Err(usage("triangle coordinates")(e)),
    }
}

fn invert<S: Scalar>(dc: &DynnikovCoords<S>, json: bool) -> CmdResult {
    let tc = triangle_from_dynnikov(dc)?;
    if json {
        print_json(&tc.to_json());
    } else {
        println!("{tc}");
    }
    Ok(())
}

fn forward<S: Scalar>(tc: &TriangleCoords<S>, json: bool) -> CmdResult {
    let dc = dynnikov_from_triangle(tc)?;
    if json {
        print_json(&dc.to_json());
    } else {
        println!("{dc}");
    }
    Ok(())
}

fn validate<S: Scalar>(tc: &TriangleCoords<S>, json: bool) -> CmdResult {
    let report = validate_triangle(tc);
    if json {
        print_json(&json!({
            "ok": report.is_ok(),
            "violations": report.violations.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
        }));
    } else {
        println!("{report}");
    }
    if report.is_ok() {
        Ok(())
    } else {
        Err(Failure::Quiet(1))
    }
}

fn run_coords(cmd: CoordsCommand) -> CmdResult {
    match cmd {
        CoordsCommand::Invert(a) => match parse_ab(&a.ab, a.n)? {
            Coords::Int(c) => invert(&c, a.json),
            Coords::Real(c) => invert(&c, a.json),
        },
        CoordsCommand::Counts(a) => {
            let Coords::Int(c) = parse_ab(&a.ab, a.n)? else {
                return Err(Failure::Usage(anyhow!(
                    "component counts need integer coordinates"
                )));
            };
            let counts = component_counts(&c)?;
            if a.json {
                print_json(&counts.to_json());
            } else {
                println!("{counts}");
            }
            Ok(())
        }
        CoordsCommand::Forward(t) => match parse_triangle(&t.triangle, t.n)? {
            Triangle::Int(c) => forward(&c, t.json),
            Triangle::Real(c) => forward(&c, t.json),
        },
        CoordsCommand::Validate(t) => match parse_triangle(&t.triangle, t.n)? {
            Triangle::Int(c) => validate(&c, t.json),
            Triangle::Real(c) => validate(&c, t.json),
        },
    }
}

fn iterate<S: Scalar>(x: &DynnikovCoords<S>, w: &BraidWord, iters: usize, json: bool) -> CmdResult {
    let mut y = x.clone();
    for _ in 0..iters {
        y = apply_word(&y, w)?;
    }
    if json {
        print_json(&json!({
            "word": w.letters(),
            "n": w.n(),
            "iters": iters,
            "coords": y.to_json(),
        }));
    } else {
        println!("{y}");
    }
    Ok(())
}

fn run_act(a: ActArgs) -> CmdResult {
    let w = parse_word(&a.word, a.n)?;
    let x = parse_ab(&a.ab, a.n)?;
    if a.projective {
        let x = match x {
            Coords::Int(c) => c.to_real(),
            Coords::Real(c) => c,
        };
        let run = apply_word_projective(&x, &w, a.iters)?;
        if a.json {
            print_json(&json!({
                "word": w.letters(),
                "n": w.n(),
                "trajectory": run.trajectory.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
                "signature": run.signature,
            }));
        } else {
            for (k, c) in run.trajectory.iter().enumerate() {
                println!("{:>6}  {c}", k + 1);
            }
        }
        return Ok(());
    }
    match x {
        Coords::Int(c) => iterate(&c, &w, a.iters, a.json),
        Coords::Real(c) => iterate(&c, &w, a.iters, a.json),
    }
}

fn row<V: Display>(label: &str, v: V) {
    println!("{label:<14}{v}");
}

fn print_report(r: &PaReport) {
    row("word", format!("{} in B_{}", r.word, r.word.n()));
    row("status", r.status);
    if let (Some(lambda), Some(h)) = (r.lambda, r.entropy) {
        row("dilatation", lambda);
        row("entropy", h);
    }
    if let Some(v) = &r.eigenvector {
        row("eigenvector", v);
        if let Ok(tc) = triangle_from_dynnikov(&v.l2_normalized()) {
            let fmt = |xs: &[f64]| {
                xs.iter()
                    .map(|x| format!("{x:.4}"))
                    .collect::<Vec<_>>()
                    .join(", ")
            };
            row(
                "arc measures",
                format!("α = ({}), β = ({})", fmt(tc.alpha()), fmt(tc.beta())),
            );
        }
    }
    row("matrices", r.matrices.len());
    for (k, m) in r.matrices.iter().enumerate() {
        println!("\nD{}  (det {})", k + 1, m.det());
        println!("{m}");
    }
    if !r.diagnostics.tie_nodes.is_empty() {
        println!();
        row("tie nodes", r.diagnostics.tie_nodes.len());
    }
    for note in &r.diagnostics.notes {
        row("note", note);
    }
    for (k, d) in r.diagnostics.restarts.iter().enumerate() {
        if let Some(note) = &d.note {
            row(&format!("restart {k}"), note);
        }
    }
}

fn run_pa(a: PaArgs, seed: u64) -> CmdResult {
    let w = parse_word(&a.word, a.n)?;
    let report = analyze_pa(&w, &a.search.options(seed))?;
    if a.json {
        print_json(&report.to_json());
    } else {
        print_report(&report);
    }
    Ok(())
}

fn run_entropy(a: EntropyArgs) -> CmdResult {
    let w = parse_word(&a.word, a.n)?;
    let start = match &a.ab {
        Some(text) => match parse_ab(text, a.n)? {
            Coords::Int(c) => c,
            Coords::Real(_) => {
                return Err(Failure::Usage(anyhow!(
                    "entropy iteration needs integer start coordinates"
                )))
            }
        },
        None => {
            let ones = vec![1; a.n.saturating_sub(2)];
            IntCoords::parse(&format!("{};{}", join(&ones), join(&ones)), a.n)
                .map_err(usage("puncture count"))?
        }
    };
    let est = entropy_estimate(&w, &start, a.iters)?;
    if a.json {
        print_json(&est.to_json());
    } else if a.csv {
        print!("{}", est.to_csv());
    } else {
        row("word", format!("{} in B_{}", w, w.n()));
        row("start", &start);
        row(&format!("c_{}", a.iters), est.final_value());
    }
    Ok(())
}

fn join(xs: &[i32]) -> String {
    xs.iter().map(i32::to_string).collect::<Vec<_>>().join(",")
}

fn run_family(a: FamilyArgs, seed: u64) -> CmdResult {
    let need_m = || {
        a.m.ok_or_else(|| Failure::Usage(anyhow!("-m is required for this family")))
    };
    let family = match a.kind {
        Kind::Beta => Family::Beta {
            m: need_m()?,
            n: a.n,
        },
        Kind::Sigma => Family::Sigma {
            m: need_m()?,
            n: a.n,
        },
        Kind::Tau => Family::Tau { n: a.n },
    };
    let report = verify_family(&family, &a.search.options(seed))?;
    if a.json {
        print_json(&report.to_json());
        return Ok(());
    }
    row("family", family);
    let opt = |x: Option<f64>| x.map_or("-".to_string(), |v| format!("{v:e}"));
    if !report.closed_form_available {
        row("closed form", "not available for these parameters");
    }
    row(
        "λ root",
        report.lambda_root.map_or("-".into(), |v| v.to_string()),
    );
    row("|λ - root|", opt(report.lambda_error));
    row("angle", opt(report.eigenvector_angle));
    row("max residual", opt(report.max_relative_residual));
    println!();
    print_report(&report.pa);
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let result = match cli.command {
        Command::Coords(c) => run_coords(c),
        Command::Act(a) => run_act(a),
        Command::Pa(a) => run_pa(a, cli.seed),
        Command::Entropy(a) => run_entropy(a),
        Command::Family(a) => run_family(a, cli.seed),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Quiet(code)) => ExitCode::from(code),
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
