//! `qnull`: evaluate quaternion polynomials, compute central presentations,
//! blow-ups and cutting ideals, and run the verification pipelines.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use qnull::central::{blow_up, central_presentation, MultiSphere};
use qnull::ideal::{q_grid, verify_blowup_theorem, verify_central_zeros};
use qnull::msphere::{cutting_generators, restrict, verify_cut};
use qnull::parse::{format_point, parse_point, parse_poly, parse_scalar};
use qnull::poly::QPoly;
use qnull::qform::verify_counterexample;
use qnull::quat::{QuatAlgebra, Quaternion};
use qnull::report::Report;
use qnull::scalar::{Field, Rat, RatFunc, Real, F64};

#[derive(Parser)]
#[command(name = "qnull", version, about = "Zero sets of left ideals over quaternion algebras")]
struct Cli {
    /// Structure constants `a,b` of the algebra (i^2 = a, j^2 = b).
    #[arg(long, global = true, default_value = "-1,-1", allow_hyphen_values = true)]
    algebra: String,

    #[arg(long, global = true, value_enum, default_value_t = FieldKind::Rat)]
    field: FieldKind,

    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Emit a JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FieldKind {
    Rat,
    F64,
    Func,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a polynomial at a point.
    Eval(PolyAt),
    /// Central presentation of a point.
    Present { point: String },
    /// The blow-up B(v) as a multisphere.
    Blowup { point: String },
    /// Multi-affine restriction of a polynomial to B(v).
    Restrict(PolyAt),
    /// Whether a polynomial vanishes on all of B(v).
    Vanish(PolyAt),
    /// Generators of the left ideal whose zero set is B(v).
    CutIdeal { point: String },
    /// The 2^r central grid points of B(v).
    Grid { point: String },
    #[command(subcommand)]
    Verify(Verify),
}

#[derive(Args)]
struct PolyAt {
    poly: String,
    #[arg(long)]
    at: String,
}

#[derive(Subcommand)]
enum Verify {
    /// Sampled members of the cutting ideal vanish on sampled points of B(v).
    Blowup { point: String },
    /// Central-grid chain for one polynomial at v.
    CentralZeros(PolyAt),
    /// The cutting generators against the multisphere B(v).
    Cut { point: String },
    /// The chain for x^2 - al + t(y^2 - be) at (I, J).
    Counterexample,
}

enum Failure {
    Usage(String),
    Check(Output),
}

struct Output {
    text: String,
    json: Value,
}

impl Output {
    fn new(text: impl Into<String>, json: Value) -> Self {
        Output { text: text.into(), json }
    }
}

type Outcome = Result<Output, Failure>;

fn usage<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Usage(e.to_string())
}

fn report_outcome(r: Report) -> Outcome {
    let out = Output::new(r.to_string().trim_end(), json!({"passed": r.all_passed(), "checks": r.to_json()["checks"]}));
    if r.all_passed() {
        Ok(out)
    } else {
        Err(Failure::Check(out))
    }
}

fn parse_algebra<F: Field>(text: &str) -> Result<QuatAlgebra<F>, Failure> {
    let (a, b) = text
        .split_once(',')
        .ok_or_else(|| usage(format!("--algebra expects `a,b`, got `{text}`")))?;
    // constants are parsed before the algebra exists; the product is not used
    let scratch = QuatAlgebra::<F>::hamilton();
    let a = parse_scalar(a.trim(), &scratch).map_err(usage)?;
    let b = parse_scalar(b.trim(), &scratch).map_err(usage)?;
    QuatAlgebra::new(a, b).map_err(usage)
}

fn quat_json<F: Field>(q: &Quaternion<F>) -> Value {
    json!({"x0": q.x0.to_string(), "x1": q.x1.to_string(), "x2": q.x2.to_string(), "x3": q.x3.to_string()})
}

fn point_json<F: Field>(v: &[Quaternion<F>]) -> Value {
    Value::Array(v.iter().map(quat_json).collect())
}

fn poly_and_point<F: Field>(pa: &PolyAt, alg: &QuatAlgebra<F>) -> Result<(QPoly<F>, Vec<Quaternion<F>>), Failure> {
    let v = parse_point(&pa.at, alg).map_err(usage)?;
    let p = parse_poly(&pa.poly, v.len(), alg).map_err(usage)?;
    Ok((p, v))
}

fn eval_cmd<F: Field>(pa: &PolyAt, alg: &QuatAlgebra<F>) -> Outcome {
    let (p, v) = poly_and_point(pa, alg)?;
    let value = p.eval(&v, alg).map_err(usage)?;
    Ok(Output::new(value.to_expr(), json!({"value": quat_json(&value), "expr": value.to_expr()})))
}

fn sphere_text<F: Real>(s: &MultiSphere<F>) -> String {
    let mut out = format!("v0 = {}", format_point(&s.v0));
    for (i, b) in s.blocks.iter().enumerate() {
        let show = |xs: &[F]| xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ");
        out.push_str(&format!(
            "\nblock {}: A = ({}), lambda = ({}), rho = {}, witness = {}",
            i + 1,
            show(&b.a),
            show(&b.lambda),
            b.rho,
            format_point(&b.reference())
        ));
    }
    out
}

fn run_real<F: Real>(cmd: &Command, alg: &QuatAlgebra<F>, seed: u64) -> Outcome {
    let point = |s: &str| parse_point(s, alg).map_err(usage);
    match cmd {
        Command::Eval(pa) => eval_cmd(pa, alg),
        Command::Present { point: src } => {
            let v = point(src)?;
            let pres = central_presentation(alg, &v);
            let blocks: Vec<String> = pres.blocks.iter().map(|b| format_point(b)).collect();
            let text = format!(
                "v0 = {}\nblocks = [{}]\nr = {}",
                format_point(&pres.v0),
                blocks.join(", "),
                pres.r()
            );
            Ok(Output::new(text, pres.to_json()))
        }
        Command::Blowup { point: src } => {
            let s = blow_up(alg, &point(src)?);
            Ok(Output::new(sphere_text(&s), s.to_json()))
        }
        Command::Restrict(pa) => {
            let (p, v) = poly_and_point(pa, alg)?;
            let s = blow_up(alg, &v);
            let q = restrict(alg, &p, &s).map_err(usage)?;
            Ok(Output::new(q.to_expr(), json!({"r": q.r, "restriction": q.to_expr(), "poly": q.to_qpoly().to_json()})))
        }
        Command::Vanish(pa) => {
            let (p, v) = poly_and_point(pa, alg)?;
            let s = blow_up(alg, &v);
            let q = restrict(alg, &p, &s).map_err(usage)?;
            Ok(Output::new(q.is_zero().to_string(), json!({"vanishes": q.is_zero(), "restriction": q.to_expr()})))
        }
        Command::CutIdeal { point: src } => {
            let s = blow_up(alg, &point(src)?);
            let gens = cutting_generators(alg, &s).map_err(usage)?;
            let text: Vec<String> = gens.iter().map(QPoly::to_expr).collect();
            Ok(Output::new(text.join("\n"), json!({"generators": gens.iter().map(QPoly::to_json).collect::<Vec<_>>()})))
        }
        Command::Grid { point: src } => {
            let g = q_grid(alg, &point(src)?).map_err(usage)?;
            let text: Vec<String> = g.points.iter().map(|p| format_point(p)).collect();
            Ok(Output::new(
                text.join("\n"),
                json!({"direction": quat_json(&g.direction), "points": g.points.iter().map(|p| point_json(p)).collect::<Vec<_>>()}),
            ))
        }
        Command::Verify(Verify::Blowup { point: src }) => report_outcome(verify_blowup_theorem(alg, &point(src)?, seed)),
        Command::Verify(Verify::CentralZeros(pa)) => {
            let (f, v) = poly_and_point(pa, alg)?;
            report_outcome(verify_central_zeros(alg, &f, &v, seed).map_err(usage)?)
        }
        Command::Verify(Verify::Cut { point: src }) => {
            let s = blow_up(alg, &point(src)?);
            let gens = cutting_generators(alg, &s).map_err(usage)?;
            report_outcome(verify_cut(alg, &s, &gens, seed))
        }
        Command::Verify(Verify::Counterexample) => report_outcome(verify_counterexample(seed)),
    }
}

fn run(cli: &Cli) -> Outcome {
    if let Command::Verify(Verify::Counterexample) = cli.command {
        return report_outcome(verify_counterexample(cli.seed));
    }
    match cli.field {
        FieldKind::Rat => run_real(&cli.command, &parse_algebra::<Rat>(&cli.algebra)?, cli.seed),
        FieldKind::F64 => run_real(&cli.command, &parse_algebra::<F64>(&cli.algebra)?, cli.seed),
        FieldKind::Func => {
            let alg = parse_algebra::<RatFunc>(&cli.algebra)?;
            match &cli.command {
                Command::Eval(pa) => eval_cmd(pa, &alg),
                _ => Err(usage("--field func supports `eval` and `verify counterexample` only")),
            }
        }
    }
}

fn emit(out: &Output, json_mode: bool) {
    if json_mode {
        let mut doc = Map::new();
        doc.insert("schema".into(), json!(1));
        match &out.json {
            Value::Object(m) => doc.extend(m.clone()),
            other => {
                doc.insert("result".into(), other.clone());
            }
        }
        println!("{}", Value::Object(doc));
    } else {
        println!("{}", out.text);
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            emit(&out, cli.json);
            ExitCode::SUCCESS
        }
        Err(Failure::Check(out)) => {
            emit(&out, cli.json);
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            if cli.json {
                println!("{}", json!({"schema": 1, "error": msg}));
            } else {
                eprintln!("error: {msg}");
            }
            ExitCode::from(2)
        }
    }
}
