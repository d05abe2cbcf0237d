use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use cosmetic_core::cosmetic::{scan, unknot_classify, Equivalence};
use cosmetic_core::exact_arith::cs_set;
use cosmetic_core::invariants::{contact_coefficient, d3_table};
use cosmetic_core::verification::verify;
use cosmetic_core::{Error, LegendrianData, Rational, Slope};
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "cosmetic", version, about = "Exact d3 invariants and cosmetic contact surgery checks")]
struct Cli {
    /// Emit a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// d3 of every contact structure from one contact surgery.
    D3(D3Args),
    /// Slopes on the unknot giving the same lens space as -p/q.
    CsSet(CsSetArgs),
    /// Closed forms, worked values, signatures and the obstruction scan.
    Verify(VerifyArgs),
    /// Classify a contact surgery on a Legendrian unknot.
    Unknot(UnknotArgs),
    /// Obstruction verdict for every (tb, rot, slope pair) cell.
    Scan(ScanArgs),
}

#[derive(Args, Serialize)]
#[group(id = "surgery", required = true, multiple = false, args = ["slope", "coeff"])]
struct SlopeArgs {
    /// Smooth surgery slope "p/q" or "p".
    #[arg(long, allow_hyphen_values = true)]
    slope: Option<String>,
    /// Contact surgery coefficient "p/q" or "p".
    #[arg(long, allow_hyphen_values = true)]
    coeff: Option<String>,
}

#[derive(Args, Serialize)]
struct D3Args {
    #[arg(long, allow_hyphen_values = true)]
    tb: i64,
    #[arg(long, allow_hyphen_values = true)]
    rot: i64,
    #[command(flatten)]
    #[serde(flatten)]
    surgery: SlopeArgs,
    /// Stabilization signs, one comma-separated group of + and - per
    /// component, to select a single presentation.
    #[arg(long, allow_hyphen_values = true)]
    signs: Option<String>,
}

#[derive(Args, Serialize)]
struct CsSetArgs {
    p: String,
    q: String,
    /// Largest |q'| listed.
    #[arg(long, default_value_t = 10)]
    bound: i64,
}

#[derive(Args, Serialize)]
struct VerifyArgs {
    #[arg(long, default_value_t = 20)]
    k_max: i64,
    #[arg(long, default_value_t = 20)]
    n_max: i64,
    /// Seed for the random signature matrices.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads; defaults to the number of cores.
    #[arg(long)]
    jobs: Option<usize>,
    /// Perturb one closed-form family (negative control).
    #[arg(long, hide = true)]
    corrupt: Option<String>,
}

#[derive(Args, Serialize)]
struct UnknotArgs {
    #[arg(long, allow_hyphen_values = true)]
    tb: i64,
    #[arg(long, allow_hyphen_values = true)]
    rot: i64,
    #[command(flatten)]
    #[serde(flatten)]
    surgery: SlopeArgs,
    /// Largest |q'| among the other slopes compared.
    #[arg(long, default_value_t = 12)]
    bound: i64,
}

#[derive(Args, Serialize)]
struct ScanArgs {
    #[arg(long, allow_hyphen_values = true, default_value_t = -3)]
    tb_min: i64,
    #[arg(long, allow_hyphen_values = true, default_value_t = -1)]
    tb_max: i64,
    #[arg(long, default_value_t = 10)]
    n_max: i64,
}

enum Failure {
    Mismatch(String),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Consistency(_) => Failure::Mismatch(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

struct Output {
    results: Value,
    text: String,
    failure: Option<String>,
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn parse_rational(s: &str) -> Result<Rational, Failure> {
    let slope: Slope = s.parse().map_err(Failure::from)?;
    slope.to_rational().ok_or_else(|| Failure::Usage(format!("slope {s} must be finite")))
}

/// Contact coefficient from either frame.
fn contact_coeff(tb: i64, s: &SlopeArgs) -> Result<Rational, Failure> {
    match (&s.slope, &s.coeff) {
        (Some(x), None) => Ok(contact_coefficient(tb, &parse_rational(x)?)?),
        (None, Some(c)) => Ok(parse_rational(c)?),
        _ => Err(Failure::Usage("give exactly one of --slope and --coeff".into())),
    }
}

fn cmd_d3(a: &D3Args) -> Result<Output, Failure> {
    let knot = LegendrianData::new(a.tb, a.rot, None)?;
    let coeff = contact_coeff(a.tb, &a.surgery)?;
    if coeff == Rational::from_integer(0.into()) {
        return Err(Error::ContactZero.into());
    }
    let smooth = &coeff + Rational::from_integer(a.tb.into());
    let mut table = d3_table(&knot, &smooth)?;
    if let Some(signs) = &a.signs {
        let groups: Vec<&str> = signs.split(',').collect();
        let rot = table.diagram.rotation_from_signs(a.rot, &groups)?;
        table.entries.retain(|e| e.rot == rot);
    }
    let spectrum: Vec<String> = table.spectrum().iter().map(|r| r.to_string()).collect();
    let mut text = String::new();
    writeln!(text, "contact {coeff} surgery on tb={} rot={} (smooth {smooth})", a.tb, a.rot).unwrap();
    for c in &table.diagram.components {
        writeln!(
            text,
            "  {:?} tb={} stabilizations={} contact {:+}",
            c.role, c.tb, c.stabilizations, c.sign
        )
        .unwrap();
    }
    writeln!(text, "intersection form:\n{}", table.matrix).unwrap();
    for e in &table.entries {
        let r = &e.result;
        writeln!(
            text,
            "  rot {:?}: chi={} sigma={} c^2={} l={} d3={}",
            e.rot, r.chi, r.sigma, r.c_squared, r.l, r.d3
        )
        .unwrap();
    }
    writeln!(text, "d3 spectrum: {{{}}}", spectrum.join(", ")).unwrap();
    let results = json!({
        "contact_coeff": coeff.to_string(),
        "smooth_slope": smooth.to_string(),
        "table": to_value(&table),
        "spectrum": spectrum,
    });
    Ok(Output { results, text, failure: None })
}

fn cmd_cs_set(a: &CsSetArgs) -> Result<Output, Failure> {
    let parse = |s: &str| s.parse::<i64>().map_err(|_| Failure::Usage(format!("{s} is not an integer")));
    let (p, q) = (parse(&a.p)?, parse(&a.q)?);
    let set = cs_set(&p.into(), &q.into(), &a.bound.into())?;
    let strings: Vec<String> = set.iter().map(|s| s.to_string()).collect();
    let text = format!("CS(-{p}/{q}), |q'| <= {}: {} slopes\n  {}\n", a.bound, set.len(), strings.join(" "));
    Ok(Output { results: json!({ "slopes": strings, "count": set.len() }), text, failure: None })
}

fn cmd_verify(a: &VerifyArgs) -> Result<Output, Failure> {
    let run = || verify(a.k_max, a.n_max, a.seed, a.corrupt.as_deref());
    let report = match a.jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build()
            .map_err(|e| Failure::Usage(e.to_string()))?
            .install(run)?,
        None => run()?,
    };
    let failure = report.first_failure();
    let mut text = String::new();
    let ap = &report.appendix;
    writeln!(text, "closed forms: {} checks, {} mismatches", ap.checks, ap.mismatches.len()).unwrap();
    for e in &ap.errata {
        writeln!(text, "  printed {} disagrees in {}/{} cases: {}", e.family, e.disagreements, e.checked, e.description)
            .unwrap();
    }
    let worked_ok = report.worked.iter().filter(|w| w.ok).count();
    writeln!(text, "worked d3 values: {worked_ok}/{} match", report.worked.len()).unwrap();
    writeln!(
        text,
        "signatures: {} matrices, {} disagreements",
        report.signatures.checked,
        report.signatures.disagreements.len()
    )
    .unwrap();
    let sc = &report.scan;
    writeln!(
        text,
        "scan: {} cells, {} obstructed, {} contact-0 (not well-defined), unobstructed {:?}",
        sc.cells,
        sc.obstructed,
        sc.contact_zero.len(),
        sc.not_obstructed
    )
    .unwrap();
    let solutions: usize = sc.solver.iter().map(|s| s.solutions.len()).sum();
    let agree = sc.solver.iter().all(|s| s.agree);
    writeln!(text, "d3 equations: {} systems, {solutions} solutions, spectra agree: {agree}", sc.solver.len()).unwrap();
    writeln!(text, "{}", if failure.is_none() { "PASS" } else { "FAIL" }).unwrap();
    Ok(Output { results: to_value(&report), text, failure })
}

fn cmd_unknot(a: &UnknotArgs) -> Result<Output, Failure> {
    let knot = LegendrianData::unknot(a.tb, a.rot)?;
    let coeff = contact_coeff(a.tb, &a.surgery)?;
    let class = unknot_classify(&knot, &coeff, a.bound)?;
    let mut text = String::new();
    writeln!(
        text,
        "contact {} surgery on the tb={} rot={} unknot: smooth {}, L({}, {}), {:?}, {:?}",
        class.contact_coeff,
        a.tb,
        a.rot,
        class.smooth_slope,
        class.canonical_class.0,
        class.canonical_class.1,
        class.regime,
        class.tightness
    )
    .unwrap();
    match &class.equivalence {
        Equivalence::Unique => writeln!(text, "unique: no other slope gives a contactomorphic surgery").unwrap(),
        Equivalence::Overtwisted { targets } => {
            let t: Vec<String> = targets.iter().map(|s| s.to_string()).collect();
            writeln!(text, "overtwisted; contactomorphic surgeries at {}", t.join(" ")).unwrap()
        }
        Equivalence::Counts { targets } => {
            for t in targets {
                writeln!(text, "  smooth {}: {:?}", t.target, t.counts).unwrap();
            }
        }
    }
    Ok(Output { results: to_value(&class), text, failure: None })
}

fn cmd_scan(a: &ScanArgs) -> Result<Output, Failure> {
    let report = scan(a.tb_min, a.tb_max, a.n_max)?;
    let mut text = String::new();
    for c in &report.cells {
        writeln!(text, "tb={} rot={} {}: {:?}", c.tb, c.rot, c.pair.label(), c.status).unwrap();
    }
    for s in &report.solver {
        writeln!(text, "tb={} {:?}: {} solutions", s.tb, s.family, s.solutions.len()).unwrap();
    }
    let failure = (!report.only_expected_exception)
        .then(|| format!("unexpected unobstructed cells {:?}", report.not_obstructed));
    Ok(Output { results: to_value(&report), text, failure })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, inputs, out) = match &cli.command {
        Command::D3(a) => ("d3", to_value(a), cmd_d3(a)),
        Command::CsSet(a) => ("cs-set", to_value(a), cmd_cs_set(a)),
        Command::Verify(a) => ("verify", to_value(a), cmd_verify(a)),
        Command::Unknot(a) => ("unknot", to_value(a), cmd_unknot(a)),
        Command::Scan(a) => ("scan", to_value(a), cmd_scan(a)),
    };
    let out = match out {
        Ok(o) => o,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            return ExitCode::from(2);
        }
        Err(Failure::Mismatch(m)) => {
            eprintln!("mismatch: {m}");
            return ExitCode::from(1);
        }
    };
    if cli.json {
        let envelope = json!({
            "command": name,
            "inputs": inputs,
            "results": out.results,
            "version": env!("CARGO_PKG_VERSION"),
        });
        println!("{}", serde_json::to_string_pretty(&envelope).expect("json"));
    } else {
        print!("{}", out.text);
    }
    match out.failure {
        Some(m) => {
            eprintln!("mismatch: {m}");
            ExitCode::from(1)
        }
        None => ExitCode::SUCCESS,
    }
}
