//! `tropflag`: tropical critical points, string polytopes, canonical sections
//! and the comparison of their valuations from the command line.
//!
//! Exit codes: 0 on success, 1 on a domain error (an error object is printed
//! as JSON on stdout), 2 on a usage error.

use std::fmt::Display;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use tropflag::crit::{expand_critical_point, residual_report, ExpansionOptions, DEFAULT_K, DEFAULT_NEWTON_TOL};
use tropflag::sections::{conjecture_check_with, nu, omega_inv, sweep, ConjectureReport};
use tropflag::superpot::{nu_vee_report, string_polytope, NumericOptions};
use tropflag::tropsolve::{chain_decomposition, ffl_check, ideal_filling, solve_tropical};
use tropflag::weights::{reduced_words, weyl_dim, DominantWeight, ReducedWord};
use tropflag::Error;
use tropflag_arith::recognize;

const ENV_K: &str = "TROPFLAG_K";
const ENV_TOL: &str = "TROPFLAG_TOL";

#[derive(Parser)]
#[command(name = "tropflag", version, about = "Tropical critical points and valuations for type A flag varieties")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args, Clone)]
struct WeightArgs {
    /// Rank: the group is GL_n.
    #[arg(long)]
    n: usize,
    /// A lift "7,5,0", fundamental coefficients "2w1+5w2", or "0".
    #[arg(long)]
    weight: String,
}

#[derive(Args, Clone)]
struct WordArgs {
    #[command(flatten)]
    weight: WeightArgs,
    /// Reduced word for w_0, e.g. "212" or "2,1,2", or "all".
    #[arg(long, default_value = "all")]
    word: String,
}

#[derive(Args, Clone)]
struct PrecisionArgs {
    /// Truncation order K (overrides TROPFLAG_K).
    #[arg(long)]
    k: Option<usize>,
    /// Newton tolerance (overrides TROPFLAG_TOL).
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Tropical critical point: arrow and vertex valuations.
    Tropical(WeightArgs),
    /// Ideal filling of the critical point.
    Filling(WeightArgs),
    /// Chain decomposition lambda = sum c_P lambda_P.
    Chain(WeightArgs),
    /// Whether the tropical critical point is integral.
    Integral(WeightArgs),
    /// Puiseux expansion of the critical point.
    Puiseux {
        #[command(flatten)]
        weight: WeightArgs,
        #[command(flatten)]
        precision: PrecisionArgs,
    },
    /// String polytope: inequalities and lattice points.
    StringPolytope(WordArgs),
    /// Valuation nu^v of the critical point in the chart of a word.
    NuVee {
        #[command(flatten)]
        word: WordArgs,
        #[command(flatten)]
        precision: PrecisionArgs,
    },
    /// The section omega_lambda^{-1} and its valuation nu.
    Nu(WordArgs),
    /// Compare nu(omega_lambda^{-1}) with nu^v(p_lambda).
    Conjecture {
        #[command(flatten)]
        word: WordArgs,
        #[command(flatten)]
        precision: PrecisionArgs,
    },
    /// Membership of the ideal filling in the FFL polytope.
    Ffl(WeightArgs),
    /// Conjecture check over all integral weights up to a bound.
    Sweep {
        /// Rank: the group is GL_n.
        #[arg(long)]
        n: usize,
        /// Largest fundamental coefficient.
        #[arg(long, default_value_t = 2)]
        bound: u32,
        /// Reduced word for w_0, or "all".
        #[arg(long, default_value = "all")]
        word: String,
    },
}

/// What a command prints: text, and one JSON value per output line.
struct Output {
    text: String,
    json: Vec<Value>,
}

fn usage(msg: String) -> ! {
    Cli::command().error(ErrorKind::InvalidValue, msg).exit()
}

fn parse_weight(a: &WeightArgs) -> DominantWeight {
    DominantWeight::parse(a.n, &a.weight).unwrap_or_else(|e| usage(format!("invalid value '{}' for '--weight': {e}", a.weight)))
}

fn parse_words(n: usize, s: &str) -> Vec<ReducedWord> {
    if s == "all" {
        return reduced_words(n).unwrap_or_else(|e| usage(format!("invalid value '{n}' for '--n': {e}")));
    }
    vec![ReducedWord::parse(n, s).unwrap_or_else(|e| usage(format!("invalid value '{s}' for '--word': {e}")))]
}

fn env_or<T: std::str::FromStr>(flag: Option<T>, var: &str, default: T) -> T {
    if let Some(v) = flag {
        return v;
    }
    match std::env::var(var) {
        Ok(s) => s.parse().unwrap_or_else(|_| usage(format!("invalid value '{s}' for environment variable {var}"))),
        Err(_) => default,
    }
}

fn tuple<T: Display>(v: &[T]) -> String {
    format!("({})", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
}

fn strings<T: Display>(v: &[T]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

fn run(cli: &Cli) -> Result<Output, Error> {
    match &cli.command {
        Command::Tropical(a) => {
            let lambda = parse_weight(a);
            let p = solve_tropical(&lambda)?;
            p.verify()?;
            let text = format!("lambda = {lambda}\narrow  tail -> head  sigma\n{}", p.sigma_table());
            Ok(Output { text, json: vec![serde_json::to_value(p.report()).expect("serializable")] })
        }
        Command::Filling(a) => {
            let lambda = parse_weight(a);
            let f = ideal_filling(&lambda)?;
            let text = format!("{f}\nfirst diagonal: {}\nintegral: {}\n", tuple(&f.first_diagonal()), f.is_integral());
            let json = json!({
                "n": a.n, "lambda": strings(lambda.lift()), "rows": f.rows().iter().map(|r| strings(r)).collect::<Vec<_>>(),
                "first_diagonal": strings(&f.first_diagonal()), "integral": f.is_integral(),
            });
            Ok(Output { text, json: vec![json] })
        }
        Command::Chain(a) => {
            let lambda = parse_weight(a);
            let c = chain_decomposition(&lambda)?;
            let terms: Vec<Value> = c
                .terms
                .iter()
                .map(|(p, x)| json!({"ip": p.ip().iter().collect::<Vec<_>>(), "coefficient": x.to_string()}))
                .collect();
            let text = format!("lambda = {lambda} = {c}\nintegral: {}\n", c.is_integral());
            Ok(Output { text, json: vec![json!({"n": a.n, "lambda": strings(lambda.lift()), "terms": terms, "integral": c.is_integral()})] })
        }
        Command::Integral(a) => {
            let lambda = parse_weight(a);
            let f = ideal_filling(&lambda)?;
            let text = format!("integral: {}\nfirst diagonal: {}\n{f}\n", f.is_integral(), tuple(&f.first_diagonal()));
            let json = json!({
                "n": a.n, "lambda": strings(lambda.lift()), "integral": f.is_integral(),
                "first_diagonal": strings(&f.first_diagonal()), "rows": f.rows().iter().map(|r| strings(r)).collect::<Vec<_>>(),
            });
            Ok(Output { text, json: vec![json] })
        }
        Command::Puiseux { weight, precision } => {
            let lambda = parse_weight(weight);
            let order = env_or(precision.k, ENV_K, DEFAULT_K);
            let tol = env_or(precision.tol, ENV_TOL, DEFAULT_NEWTON_TOL);
            let e = expand_critical_point(&lambda, ExpansionOptions { order, tol, ..Default::default() })?;
            let residual = residual_report(&e)?;
            let mut text = format!("lambda = {lambda}, grid 1/{}, K = {order}\n", e.grid);
            let mut arrows = serde_json::Map::new();
            for (a, ar) in e.quiver().arrows().iter().enumerate() {
                let s = e.arrow_series(a);
                let val = s.val()?;
                let rec: Option<Vec<String>> =
                    s.coefficients().iter().map(|&c| recognize(c, 1 << 12, 1e-9).map(|r| r.to_string())).collect();
                let shown = match &rec {
                    Some(r) => r.join(", "),
                    None => s.coefficients().iter().map(|c| format!("{c:.12}")).collect::<Vec<_>>().join(", "),
                };
                text.push_str(&format!("{}: t^({val}) * [{shown}] in steps of t^(1/{})\n", ar.label, e.grid));
                arrows.insert(
                    ar.label.clone(),
                    json!({"val": val.to_string(), "coefficients": s.coefficients(), "recognized": rec}),
                );
            }
            text.push_str(&format!("residual: {residual:.3e}\n"));
            let json = json!({"n": weight.n, "lambda": strings(lambda.lift()), "grid": e.grid, "order": order, "arrows": arrows, "residual": residual});
            Ok(Output { text, json: vec![json] })
        }
        Command::StringPolytope(w) => {
            let lambda = parse_weight(&w.weight);
            let mut out = Output { text: String::new(), json: Vec::new() };
            for word in parse_words(w.weight.n, &w.word) {
                let sp = string_polytope(&lambda, &word)?;
                let dim = weyl_dim(&lambda).ok();
                out.text.push_str(&format!("word {word}, lambda = {lambda}\n"));
                for f in &sp.forms {
                    out.text.push_str(&format!("  {f} >= 0\n"));
                }
                out.text.push_str(&format!("lattice points ({}):\n", sp.lattice_points.len()));
                for p in &sp.lattice_points {
                    out.text.push_str(&format!("  {}\n", tuple(p)));
                }
                if let Some(d) = dim {
                    out.text.push_str(&format!("weyl_dim: {d}\n"));
                }
                let mut v = serde_json::to_value(&sp).expect("serializable");
                v["weyl_dim"] = json!(dim);
                out.json.push(v);
            }
            Ok(out)
        }
        Command::NuVee { word: w, precision } => {
            let lambda = parse_weight(&w.weight);
            let opts = NumericOptions {
                start_order: env_or(precision.k, ENV_K, DEFAULT_K),
                newton_tol: env_or(precision.tol, ENV_TOL, DEFAULT_NEWTON_TOL),
                ..Default::default()
            };
            let mut out = Output { text: String::new(), json: Vec::new() };
            for word in parse_words(w.weight.n, &w.word) {
                let r = nu_vee_report(&lambda, &word, opts)?;
                let value = r.value()?;
                let show = |v: &Option<Vec<_>>, e: &Option<String>| match (v, e) {
                    (Some(v), _) => tuple(v),
                    (None, Some(e)) => format!("unavailable ({e})"),
                    (None, None) => "unavailable".into(),
                };
                out.text.push_str(&format!(
                    "word {word}: nu_vee = {}\n  symbolic: {}\n  numeric:  {}{}\n",
                    tuple(&value),
                    show(&r.symbolic, &r.symbolic_error),
                    show(&r.numeric, &r.numeric_error),
                    r.order.map(|k| format!(" [K = {k}]")).unwrap_or_default()
                ));
                let mut v = serde_json::to_value(&r).expect("serializable");
                v["word"] = json!(word.to_string());
                v["nu_vee"] = json!(strings(&value));
                out.json.push(v);
            }
            Ok(out)
        }
        Command::Nu(w) => {
            let lambda = parse_weight(&w.weight);
            let mut out = Output { text: String::new(), json: Vec::new() };
            for word in parse_words(w.weight.n, &w.word) {
                let s = omega_inv(&lambda, &word)?;
                let v = nu(&s)?;
                out.text.push_str(&format!("word {word}: omega_inv = {s}\n  nu = {}\n", tuple(&v)));
                out.json.push(json!({"word": word.to_string(), "omega_inv": s.to_string(), "nu": v}));
            }
            Ok(out)
        }
        Command::Conjecture { word: w, precision } => {
            let lambda = parse_weight(&w.weight);
            let opts = NumericOptions {
                start_order: env_or(precision.k, ENV_K, DEFAULT_K),
                newton_tol: env_or(precision.tol, ENV_TOL, DEFAULT_NEWTON_TOL),
                ..Default::default()
            };
            let mut out = Output { text: String::new(), json: Vec::new() };
            for word in parse_words(w.weight.n, &w.word) {
                let r = conjecture_check_with(&lambda, &word, opts)?;
                out.text.push_str(&case_line(&r));
                out.json.push(serde_json::to_value(&r).expect("serializable"));
            }
            Ok(out)
        }
        Command::Ffl(a) => {
            let lambda = parse_weight(a);
            let f = ideal_filling(&lambda)?;
            let r = ffl_check(&lambda, &f.root_vector())?;
            let mut text = format!("point: {}\ninside: {}\n", tuple(&f.root_vector()), r.inside);
            for v in &r.violations {
                text.push_str(&format!("  violated: {v}\n"));
            }
            let json = json!({"n": a.n, "lambda": strings(lambda.lift()), "point": strings(&f.root_vector()), "inside": r.inside, "violations": r.violations});
            Ok(Output { text, json: vec![json] })
        }
        Command::Sweep { n, bound, word } => {
            let words = if word == "all" { None } else { Some(parse_words(*n, word)) };
            let r = sweep(*n, *bound, words)?;
            let mut out = Output { text: String::new(), json: Vec::new() };
            for c in &r.cases {
                out.text.push_str(&case_line(c));
                out.json.push(serde_json::to_value(c).expect("serializable"));
            }
            for f in &r.failures {
                out.text.push_str(&format!("lambda {} word {}: unsupported ({}: {})\n", f.lambda, f.word, f.kind, f.message));
                out.json.push(json!({"n": n, "lambda": f.lambda, "word": f.word, "error": {"kind": f.kind, "message": f.message}}));
            }
            out.text.push_str(&format!("summary: {}\n", r.summary()));
            out.json.push(json!({
                "summary": {"cases": r.cases.len() + r.failures.len(), "equal": r.equal(), "unequal": r.cases.len() - r.equal(),
                            "unsupported": r.failures.len(), "skipped": r.skipped}
            }));
            Ok(out)
        }
    }
}

fn case_line(c: &ConjectureReport) -> String {
    format!("lambda {} word {}: nu = {}, nu_vee = {}, equal = {}\n", c.lambda, c.word, tuple(&c.nu), tuple(&c.nu_vee), c.equal)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            match cli.format {
                Format::Text => print!("{}", out.text),
                Format::Json => {
                    for v in &out.json {
                        println!("{v}");
                    }
                }
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            println!("{}", json!({"error": {"kind": e.kind(), "message": e.to_string()}}));
            if cli.format == Format::Text {
                eprintln!("error: {e}");
            }
            ExitCode::from(1)
        }
    }
}
