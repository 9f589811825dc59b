use std::fs;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use lieforge::coadjoint::{num_invariants_bb, residuals};
use lieforge::exterior::{contact_check, contact_search, j0_of_algebra, num_invariants_rc, ContactSearch};
use lieforge::families::{build, FamilySpec, ParamValue};
use lieforge::io::{AlgebraFile, ExprFile};
use lieforge::liealg::LieAlgebra;
use lieforge::ring::{parse_poly, parse_rat, RankStrategy};
use lieforge::structure::derivation_space;
use lieforge::suite::paper_suite;
use lieforge::Error;

#[derive(Parser)]
#[command(name = "lieforge", version, about = "Exact analysis of Lie algebras given by structure constants")]
struct Cli {
    /// Seed for randomized rank and search paths (overrides LIEFORGE_SEED).
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a builtin family as an algebra file.
    Family {
        /// One of abelian, heisenberg, n-n1, q2n, a622, r-lambda, r-eps, r-tail, r-max, k-sub.
        id: String,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        /// Rational value; symbolic when omitted.
        #[arg(long, allow_hyphen_values = true)]
        lambda2: Option<String>,
        /// Rational value; symbolic when omitted.
        #[arg(long, allow_hyphen_values = true)]
        eps: Option<String>,
        /// Comma-separated tail values; symbolic when omitted.
        #[arg(long, allow_hyphen_values = true)]
        tail: Option<String>,
        #[arg(long)]
        out: Option<String>,
    },
    /// Report Jacobi, series, invariant counts and derivations.
    Analyze {
        file: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        report: Format,
    },
    /// Apply every coadjoint field to an expression.
    VerifyInvariant { algebra: String, expr: String },
    /// Check or search for a contact form.
    Contact {
        file: String,
        /// Coefficients of the 1-form in generator order.
        #[arg(long, allow_hyphen_values = true)]
        form: Option<String>,
    },
    /// Run the reproduction checks for Q_{2n} and its extensions.
    PaperSuite {
        #[arg(long, value_delimiter = ',', default_value = "3,4")]
        n: Vec<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

/// Outcome of a command that ran to completion.
enum Verdict {
    Ok,
    Negative,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let seed = match cli.seed {
        Some(s) => s,
        None => match std::env::var("LIEFORGE_SEED") {
            Ok(v) => match v.parse() {
                Ok(s) => s,
                Err(_) => {
                    eprintln!("error: LIEFORGE_SEED must be a non-negative integer, got `{v}`");
                    return ExitCode::from(2);
                }
            },
            Err(_) => 0,
        },
    };
    match run(cli.command, seed) {
        Ok(Verdict::Ok) => ExitCode::SUCCESS,
        Ok(Verdict::Negative) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cmd: Command, seed: u64) -> Result<Verdict, String> {
    match cmd {
        Command::Family { id, m, n, dim, k, lambda2, eps, tail, out } => {
            let spec = family_spec(&id, m, n, dim, k, lambda2, eps, tail)?;
            let g = build(&spec).map_err(|e| e.to_string())?;
            let text = AlgebraFile::from_algebra(&g).to_json();
            match out {
                Some(path) => fs::write(&path, text + "\n").map_err(|e| format!("{path}: {e}"))?,
                None => println!("{text}"),
            }
            Ok(Verdict::Ok)
        }
        Command::Analyze { file, report } => analyze(&load_algebra(&file)?, report, seed),
        Command::VerifyInvariant { algebra, expr } => verify_invariant(&load_algebra(&algebra)?, &expr),
        Command::Contact { file, form } => contact(&load_algebra(&file)?, form.as_deref(), seed),
        Command::PaperSuite { n } => {
            let checks = paper_suite(&n, seed).map_err(|e| e.to_string())?;
            let failed = checks.iter().filter(|c| !c.passed).count();
            for c in &checks {
                println!("{c}");
            }
            println!("{} checks, {failed} failed", checks.len());
            Ok(if failed == 0 { Verdict::Ok } else { Verdict::Negative })
        }
    }
}

fn param(v: Option<String>) -> Result<ParamValue, String> {
    match v {
        None => Ok(ParamValue::Symbolic),
        Some(s) => parse_rat(s.trim()).map(ParamValue::Value).map_err(|e| e.to_string()),
    }
}

fn need(flag: &str, v: Option<usize>, id: &str) -> Result<usize, String> {
    v.ok_or_else(|| format!("family {id} requires --{flag}"))
}

#[allow(clippy::too_many_arguments)]
fn family_spec(
    id: &str,
    m: Option<usize>,
    n: Option<usize>,
    dim: Option<usize>,
    k: Option<usize>,
    lambda2: Option<String>,
    eps: Option<String>,
    tail: Option<String>,
) -> Result<FamilySpec, String> {
    let spec = match id {
        "abelian" => FamilySpec::Abelian { dim: need("dim", dim, id)? },
        "heisenberg" => FamilySpec::Heisenberg { k: need("k", k, id)? },
        "n-n1" => FamilySpec::NN1 { dim: need("dim", dim, id)? },
        "q2n" => FamilySpec::Q { m: need("m", m, id)? },
        "a622" => FamilySpec::A622,
        "r-lambda" => FamilySpec::RLambda { n: need("n", n, id)?, lambda2: param(lambda2)? },
        "r-eps" => FamilySpec::REps { n: need("n", n, id)?, eps: param(eps)? },
        "r-tail" => {
            let n = need("n", n, id)?;
            match tail {
                None => FamilySpec::tail_symbolic(n),
                Some(s) => FamilySpec::RTail {
                    n,
                    tail: s
                        .split(',')
                        .map(|v| param(Some(v.to_string())))
                        .collect::<Result<_, _>>()?,
                },
            }
        }
        "r-max" => FamilySpec::RMax { n: need("n", n, id)? },
        "k-sub" => FamilySpec::KSub { n: need("n", n, id)? },
        other => return Err(format!("unknown family `{other}`")),
    };
    spec.validate().map_err(|e| e.to_string())?;
    Ok(spec)
}

fn load_algebra(path: &str) -> Result<LieAlgebra, String> {
    let src = fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))?;
    AlgebraFile::from_json(&src)
        .and_then(|f| f.to_algebra())
        .map_err(|e| format!("{path}: {e}"))
}

fn analyze(g: &LieAlgebra, format: Format, seed: u64) -> Result<Verdict, String> {
    let e = |e: Error| e.to_string();
    let jacobi = g.jacobi_check().passed();
    let strategy = if g.is_numeric() {
        RankStrategy::Random { seed, trials: 5 }
    } else {
        RankStrategy::Symbolic
    };
    let bb = num_invariants_bb(g, strategy).map_err(e)?;
    let rc = num_invariants_rc(g).map_err(e)?;
    let mut report = json!({
        "jacobi": jacobi,
        "N_bb": bb,
        "N_rc": rc,
        "j0": j0_of_algebra(g).map_err(e)?,
    });
    // Series and center depend on parameter values, so they are reported
    // only for numeric algebras.
    let numeric_fields = ["DS", "CDS", "nilpotent", "solvable", "center_dim"];
    if g.is_numeric() {
        report["DS"] = json!(g.derived_series().map_err(e)?.dims());
        report["CDS"] = json!(g.lower_central_series().map_err(e)?.dims());
        report["nilpotent"] = json!(g.is_nilpotent().map_err(e)?);
        report["solvable"] = json!(g.is_solvable().map_err(e)?);
        report["center_dim"] = json!(g.center().map_err(e)?.dim());
    } else {
        for k in numeric_fields {
            report[k] = Value::Null;
        }
    }
    if g.is_numeric() {
        let ds = derivation_space(g).map_err(e)?;
        report["der_dim"] = json!(ds.total_dim);
        report["inner_dim"] = json!(ds.inner_dim);
    }
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&report).expect("serializable")),
        Format::Text => {
            if let Value::Object(map) = &report {
                for (k, v) in map {
                    println!("{k}: {v}");
                }
            }
        }
    }
    Ok(if jacobi && bb == rc { Verdict::Ok } else { Verdict::Negative })
}

fn verify_invariant(g: &LieAlgebra, path: &str) -> Result<Verdict, String> {
    let src = fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))?;
    let expr = ExprFile::from_json(&src)
        .and_then(|f| f.to_genexpr(g))
        .map_err(|e| format!("{path}: {e}"))?;
    let mut all_zero = true;
    for (i, r) in residuals(g, &expr) {
        let label = &g.labels()[i];
        if r.is_zero() {
            println!("{label}: 0");
        } else {
            all_zero = false;
            println!("{label}: {r}");
        }
    }
    Ok(if all_zero { Verdict::Ok } else { Verdict::Negative })
}

fn contact(g: &LieAlgebra, form: Option<&str>, seed: u64) -> Result<Verdict, String> {
    if g.dim().is_multiple_of(2) {
        return Err(Error::EvenDimension(g.dim()).to_string());
    }
    match form {
        Some(s) => {
            let coeffs = s
                .split(',')
                .map(|c| parse_poly(c.trim(), g.registry()))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| e.to_string())?;
            let v = contact_check(g, &coeffs).map_err(|e| e.to_string())?;
            println!("volume coefficient: {v}");
            Ok(if v.is_zero() { Verdict::Negative } else { Verdict::Ok })
        }
        None => match contact_search(g, seed).map_err(|e| e.to_string())? {
            ContactSearch::Witness { coeffs, volume } => {
                let c: Vec<String> = coeffs.iter().map(ToString::to_string).collect();
                println!("witness: {}", c.join(","));
                println!("volume coefficient: {volume}");
                Ok(Verdict::Ok)
            }
            ContactSearch::NoneExists => {
                println!("proof of none: volume coefficient vanishes for generic coefficients");
                Ok(Verdict::Negative)
            }
        },
    }
}
