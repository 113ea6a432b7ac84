//! Command-line surface for the kloo library: enumerate the monomial basis,
//! compute Hodge polygons, check ordinarity criteria, brute-force Newton
//! polygons, and compare the two, with machine-readable JSON output and
//! optional SVG plots.
//!
//! Exit codes: 0 success, 1 internal invariant violation, 2 invalid input,
//! 3 I/O failure, 4 evaluation budget exceeded.

use clap::{Parser, Subcommand};
use kloo::lfunc;
use kloo::ordinarity;
use kloo::polygon::{self, Comparison, Polygon};
use kloo::{Error, KloostermanFamily, Rat};
use serde_json::{json, Value};
use std::path::PathBuf;
use std::time::Instant;

#[derive(Parser)]
#[command(
    name = "kloo",
    about = "Hodge and Newton polygons for one-parameter deformed Kloosterman sums",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate the monomial basis 𝓑 with exact weights
    Basis {
        /// Exponents a₁,…,aₙ of the diagonal part
        #[arg(long, value_delimiter = ',', required = true)]
        a: Vec<i64>,
        /// Exponents d₁,…,dₙ of the twisted monomial
        #[arg(long, value_delimiter = ',', required = true)]
        d: Vec<i64>,
        /// Emit JSON instead of text
        #[arg(long)]
        json: bool,
    },
    /// Compute the Hodge polygon of the family
    Hodge {
        #[arg(long, value_delimiter = ',', required = true)]
        a: Vec<i64>,
        #[arg(long, value_delimiter = ',', required = true)]
        d: Vec<i64>,
        /// Write an SVG rendering of the polygon to this path
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Evaluate the sufficient ordinarity criteria at a prime
    Ordinary {
        #[arg(long, value_delimiter = ',', required = true)]
        a: Vec<i64>,
        #[arg(long, value_delimiter = ',', required = true)]
        d: Vec<i64>,
        /// Odd prime p
        #[arg(long)]
        p: u64,
    },
    /// Brute-force the Newton polygon from exponential sums
    Newton {
        #[arg(long, value_delimiter = ',', required = true)]
        a: Vec<i64>,
        #[arg(long, value_delimiter = ',', required = true)]
        d: Vec<i64>,
        #[arg(long)]
        p: u64,
        /// Deformation parameter λ̄ ∈ F_p* (default 1)
        #[arg(long, conflicts_with = "all_lambda")]
        lambda: Option<u64>,
        /// Run every λ̄ ∈ F_p*
        #[arg(long)]
        all_lambda: bool,
        #[arg(long)]
        json: bool,
    },
    /// Compare the Newton polygon against the Hodge polygon
    Verify {
        #[arg(long, value_delimiter = ',', required = true)]
        a: Vec<i64>,
        #[arg(long, value_delimiter = ',', required = true)]
        d: Vec<i64>,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        all_lambda: bool,
        #[arg(long)]
        json: bool,
    },
    /// Reduce a monomial to the basis, printing the rewrite chain
    Reduce {
        #[arg(long, value_delimiter = ',', required = true)]
        a: Vec<i64>,
        #[arg(long, value_delimiter = ',', required = true)]
        d: Vec<i64>,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        lambda: u64,
        /// Exponent vector of the monomial to reduce
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        v: Vec<i64>,
    },
}

enum CliError {
    Lib(Error),
    Io(std::io::Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> CliError {
        CliError::Lib(e)
    }
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Lib(Error::InvalidInput(_)) | CliError::Lib(Error::Degenerate(_)) => 2,
            CliError::Lib(Error::Internal(_)) => 1,
            CliError::Lib(Error::BudgetExceeded { .. }) => 4,
            CliError::Io(_) => 3,
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Lib(e) => e.to_string(),
            CliError::Io(e) => format!("I/O error: {e}"),
        }
    }
}

fn main() {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => {}
        Err(e) => {
            eprintln!("error: {}", e.message());
            std::process::exit(e.exit_code());
        }
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Basis { a, d, json } => cmd_basis(a, d, json),
        Command::Hodge { a, d, svg, json } => cmd_hodge(a, d, svg, json),
        Command::Ordinary { a, d, p } => cmd_ordinary(a, d, p),
        Command::Newton { a, d, p, lambda, all_lambda, json } => {
            cmd_newton(a, d, p, lambda, all_lambda, json)
        }
        Command::Verify { a, d, p, all_lambda, json } => cmd_verify(a, d, p, all_lambda, json),
        Command::Reduce { a, d, p, lambda, v } => cmd_reduce(a, d, p, lambda, v),
    }
}

/// Evaluation budget: KLOO_BUDGET if set, otherwise 10⁸ point evaluations.
fn budget() -> Result<u128, CliError> {
    match std::env::var("KLOO_BUDGET") {
        Err(std::env::VarError::NotPresent) => Ok(lfunc::DEFAULT_BUDGET),
        Err(e) => Err(CliError::Lib(Error::InvalidInput(format!("KLOO_BUDGET unreadable: {e}")))),
        Ok(s) => s.trim().parse::<u128>().map_err(|_| {
            CliError::Lib(Error::InvalidInput(format!(
                "KLOO_BUDGET must be a nonnegative integer, got {s:?}"
            )))
        }),
    }
}

fn lambda_values(p: u64, lambda: Option<u64>, all: bool) -> Result<Vec<u64>, CliError> {
    kloo::ffield::validate_odd_prime(p)?;
    if all {
        Ok((1..p).collect())
    } else {
        let l = lambda.unwrap_or(1);
        if l % p == 0 {
            return Err(CliError::Lib(Error::InvalidInput(format!(
                "λ̄ = {l} is 0 in F_{p}"
            ))));
        }
        Ok(vec![l])
    }
}

fn render_point(v: &[i64]) -> String {
    let mut s = String::from("(");
    for (i, x) in v.iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        s.push_str(&x.to_string());
    }
    s.push(')');
    s
}

fn render_vertex((x, y): &(Rat, Rat)) -> String {
    format!("({x},{y})")
}

fn render_combination(combination: &[(u64, Vec<i64>)]) -> String {
    if combination.is_empty() {
        return "0".into();
    }
    combination
        .iter()
        .map(|(c, v)| format!("{c}·x^{}", render_point(v)))
        .collect::<Vec<_>>()
        .join(" + ")
}

fn print_polygon_text(poly: &Polygon) {
    let vertices: Vec<String> = poly.vertices().iter().map(render_vertex).collect();
    println!("vertices: {}", vertices.join(" "));
    println!("slopes: {}", poly.slope_sequence());
}

// ---------------------------------------------------------------------------
// basis
// ---------------------------------------------------------------------------

fn cmd_basis(a: Vec<i64>, d: Vec<i64>, json: bool) -> Result<(), CliError> {
    let family = KloostermanFamily::new(a, d)?;
    let basis = family.enumerate_basis();
    let formula = family.basis_cardinality_formula();
    if basis.len() as u64 != formula {
        return Err(CliError::Lib(Error::Internal(format!(
            "enumerated {} basis points but the closed formula gives {formula}",
            basis.len()
        ))));
    }
    if json {
        let points: Vec<Value> = basis
            .points
            .iter()
            .zip(&basis.weights)
            .map(|(v, w)| json!({"v": v, "weight": [*w.numer(), *w.denom()]}))
            .collect();
        let report = json!({
            "a": family.a(),
            "d": family.d(),
            "count": basis.len(),
            "points": points,
        });
        println!("{report}");
    } else {
        for (v, w) in basis.points.iter().zip(&basis.weights) {
            println!("{}  weight {w}", render_point(v));
        }
        println!("count: {} enumerated = {formula} by the closed formula (ok)", basis.len());
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// hodge
// ---------------------------------------------------------------------------

fn cmd_hodge(a: Vec<i64>, d: Vec<i64>, svg: Option<PathBuf>, json: bool) -> Result<(), CliError> {
    let family = KloostermanFamily::new(a, d)?;
    let basis = family.enumerate_basis();
    let hp = polygon::hodge_polygon(&basis);
    if let Some(path) = svg {
        let rendered = render_svg(&hp);
        std::fs::write(&path, rendered).map_err(CliError::Io)?;
        eprintln!("svg written to {}", path.display());
    }
    if json {
        println!("{}", hp.to_json());
    } else {
        print_polygon_text(&hp);
        println!("degree: {}", basis.len());
    }
    Ok(())
}

/// Presentation-only SVG rendering; the only place floats appear.
fn render_svg(poly: &Polygon) -> String {
    const W: f64 = 480.0;
    const H: f64 = 360.0;
    const M: f64 = 40.0;
    let to_f = |r: &Rat| *r.numer() as f64 / *r.denom() as f64;
    let pts: Vec<(f64, f64)> = poly.vertices().iter().map(|(x, y)| (to_f(x), to_f(y))).collect();
    let xmax = pts.last().map(|p| p.0).unwrap_or(1.0).max(1.0);
    let ymax = pts.iter().map(|p| p.1).fold(1.0f64, f64::max);
    let sx = |x: f64| M + x / xmax * (W - 2.0 * M);
    let sy = |y: f64| H - M - y / ymax * (H - 2.0 * M);
    let mut s = String::new();
    s.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" \
         viewBox=\"0 0 {W} {H}\">\n"
    ));
    s.push_str(&format!(
        "  <line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"#888\"/>\n",
        sx(0.0),
        sy(0.0),
        sx(xmax),
        sy(0.0)
    ));
    s.push_str(&format!(
        "  <line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"#888\"/>\n",
        sx(0.0),
        sy(0.0),
        sx(0.0),
        sy(ymax)
    ));
    let path: Vec<String> =
        pts.iter().map(|(x, y)| format!("{:.2},{:.2}", sx(*x), sy(*y))).collect();
    s.push_str(&format!(
        "  <polyline points=\"{}\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\"/>\n",
        path.join(" ")
    ));
    for (x, y) in &pts {
        s.push_str(&format!(
            "  <circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\" fill=\"#1f77b4\"/>\n",
            sx(*x),
            sy(*y)
        ));
    }
    s.push_str("</svg>\n");
    s
}

// ---------------------------------------------------------------------------
// ordinary
// ---------------------------------------------------------------------------

fn cmd_ordinary(a: Vec<i64>, d: Vec<i64>, p: u64) -> Result<(), CliError> {
    let family = KloostermanFamily::new(a, d)?;
    kloo::ffield::validate_odd_prime(p)?;
    if !ordinarity::is_nondegenerate(&family, p)? {
        return Err(CliError::Lib(Error::Degenerate(format!(
            "p = {p} divides some aᵢ or dᵢ; the family is degenerate"
        ))));
    }
    println!("nondegenerate: yes");
    let estar = family.e_star();
    println!("e* = {estar}");
    println!("p mod e* = {}", p % estar as u64);
    let invariants = ordinarity::face_last_invariants(&family);
    for (j, s) in invariants.iter().enumerate() {
        println!("s_n(Δ_{j}) = {s}");
    }
    let estar_ok = ordinarity::ordinary_sufficient_estar(&family, p)?;
    let faces_ok = ordinarity::ordinary_sufficient_faces(&family, p)?;
    let verdict = if estar_ok {
        "guaranteed-ordinary(e*)"
    } else if faces_ok {
        "guaranteed-ordinary(faces)"
    } else {
        "unknown"
    };
    println!("verdict: {verdict}");
    Ok(())
}

// ---------------------------------------------------------------------------
// newton
// ---------------------------------------------------------------------------

fn cmd_newton(
    a: Vec<i64>,
    d: Vec<i64>,
    p: u64,
    lambda: Option<u64>,
    all_lambda: bool,
    json: bool,
) -> Result<(), CliError> {
    let family = KloostermanFamily::new(a, d)?;
    let budget = budget()?;
    let lambdas = lambda_values(p, lambda, all_lambda)?;
    let mut results: Vec<(u64, Polygon)> = Vec::new();
    for &l in &lambdas {
        let np = lfunc::newton_polygon_bruteforce(&family, p, l, budget)?;
        results.push((l, np));
    }
    if json {
        let entries: Vec<Value> =
            results.iter().map(|(l, np)| json!({"lambda": l, "newton": np.to_json()})).collect();
        let report = json!({
            "a": family.a(),
            "d": family.d(),
            "p": p,
            "results": entries,
        });
        println!("{report}");
    } else {
        for (l, np) in &results {
            println!("λ̄ = {l}");
            print_polygon_text(np);
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

fn cmd_verify(
    a: Vec<i64>,
    d: Vec<i64>,
    p: u64,
    all_lambda: bool,
    json: bool,
) -> Result<(), CliError> {
    let start = Instant::now();
    let family = KloostermanFamily::new(a, d)?;
    let budget = budget()?;
    // The theorems quantify over every λ̄, so verify always sweeps F_p*;
    // --all-lambda is accepted as the explicit spelling of the default.
    let _ = all_lambda;
    let lambdas = lambda_values(p, None, true)?;
    if !ordinarity::is_nondegenerate(&family, p)? {
        return Err(CliError::Lib(Error::Degenerate(format!(
            "p = {p} divides some aᵢ or dᵢ; the family is degenerate"
        ))));
    }
    let estar = family.e_star();
    let estar_ok = ordinarity::ordinary_sufficient_estar(&family, p)?;
    let faces_ok = ordinarity::ordinary_sufficient_faces(&family, p)?;
    let sufficient = estar_ok || faces_ok;
    let invariants = ordinarity::face_last_invariants(&family);

    let basis = family.enumerate_basis();
    let hp = polygon::hodge_polygon(&basis);
    let degree = lfunc::l_degree(&family)?;
    // The rationality cross-check needs one extra sum S_{D+1}; skip it (with
    // a note) when that single sum would blow the budget the polygon itself
    // fits in.
    let consistency_affordable = match lfunc::points_needed(p, degree + 1, family.n()) {
        Some(needed) => needed <= budget,
        None => false,
    };

    let mut results: Vec<(u64, Polygon, Comparison, Option<bool>)> = Vec::new();
    let mut all_equal = true;
    let mut violation = false;
    let mut consistency_failed = false;
    for &l in &lambdas {
        let np = lfunc::newton_polygon_bruteforce(&family, p, l, budget)?;
        let cmp = polygon::compare(&np, &hp)?;
        match cmp {
            Comparison::Equal => {}
            Comparison::NpStrictlyAbove => all_equal = false,
            Comparison::IncomparableViolation => {
                all_equal = false;
                violation = true;
            }
        }
        let consistency = if consistency_affordable {
            let ok = lfunc::consistency_check_extra_sum(&family, p, l, budget)?;
            if !ok {
                consistency_failed = true;
            }
            Some(ok)
        } else {
            None
        };
        results.push((l, np, cmp, consistency));
    }
    let overall = if all_equal { "equal" } else { "above-or-equal" };
    let elapsed_ms = start.elapsed().as_millis() as u64;

    if json {
        let entries: Vec<Value> = results
            .iter()
            .map(|(l, np, cmp, consistency)| {
                json!({
                    "lambda": l,
                    "newton": np.to_json(),
                    "verdict": cmp.to_string(),
                    "consistency": consistency,
                })
            })
            .collect();
        let report = json!({
            "a": family.a(),
            "d": family.d(),
            "p": p,
            "lambdas": lambdas,
            "hodge": hp.to_json(),
            "results": entries,
            "criteria": {
                "estar": estar,
                "p_mod_estar": p % estar as u64,
                "estar_holds": estar_ok,
                "face_invariants": invariants,
                "faces_hold": faces_ok,
            },
            "overall": overall,
            "elapsed_ms": elapsed_ms,
        });
        println!("{report}");
    } else {
        println!(
            "family: a={} d={}  p={p}",
            render_point(family.a()),
            render_point(family.d())
        );
        println!("hodge slopes: {}", hp.slope_sequence());
        println!(
            "criteria: e*={estar}, p mod e*={}, e* criterion {}, faces criterion {}",
            p % estar as u64,
            if estar_ok { "holds" } else { "fails" },
            if faces_ok { "holds" } else { "fails" },
        );
        for (l, np, cmp, consistency) in &results {
            let consistency_note = match consistency {
                Some(true) => "consistency ok",
                Some(false) => "consistency FAILED",
                None => "consistency skipped (extra sum over budget)",
            };
            println!("λ̄ = {l}: NP slopes {}; verdict {cmp}; {consistency_note}", np.slope_sequence());
        }
        println!("overall: {overall}");
        println!("elapsed: {elapsed_ms} ms");
    }

    if violation {
        return Err(CliError::Lib(Error::Internal(
            "Newton polygon fell below the Hodge polygon".into(),
        )));
    }
    if consistency_failed {
        return Err(CliError::Lib(Error::Internal(
            "power-sum consistency check failed".into(),
        )));
    }
    if sufficient && !all_equal {
        return Err(CliError::Lib(Error::Internal(
            "a sufficient ordinarity criterion holds but NP ≠ HP".into(),
        )));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// reduce
// ---------------------------------------------------------------------------

fn cmd_reduce(a: Vec<i64>, d: Vec<i64>, p: u64, lambda: u64, v: Vec<i64>) -> Result<(), CliError> {
    let family = KloostermanFamily::new(a, d)?;
    let result = kloo::graded::reduce_monomial(&family, p, lambda, &v)?;
    for line in &result.log {
        println!("{line}");
    }
    println!("steps: {}", result.steps);
    println!("result: {}", render_combination(&result.combination));
    Ok(())
}
