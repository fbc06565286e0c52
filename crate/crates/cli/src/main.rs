use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context as _};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use tschirnhaus::error::Error;
use tschirnhaus::numeric::PrecisionConfig;
use tschirnhaus::obliteration::{line_bound, point_bound, DegreeProfile};
use tschirnhaus::pipeline::{
    quintic_solve_demo, remove4_chain, remove5, remove_terms_generic, verify_certificate,
    with_escalation, Certificate, Variant,
};
use tschirnhaus::transform::{relative_residuals, transform, MonicPoly, Transformation};

/// Tschirnhaus transformations that remove leading intermediate terms.
#[derive(Parser)]
#[command(name = "tschirnhaus", version)]
struct Cli {
    /// Working precision in bits.
    #[arg(long, global = true, default_value_t = 256)]
    precision: usize,
    /// Relative tolerance; defaults to 2^(-3·bits/8).
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Ambient dimension needed for a system of the given profile, e.g. "3:1,2:0,1:0".
    Bound {
        #[arg(long)]
        profile: String,
        #[arg(long, value_enum, default_value_t = Mode::Line)]
        mode: Mode,
    },
    /// Applies a transformation to a polynomial and prints the result.
    Transform { poly: PathBuf, transformation: PathBuf },
    /// Removes the first k intermediate terms and writes a certificate.
    Reduce {
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value_t = VariantArg::Generic)]
        variant: VariantArg,
        poly: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Rechecks a certificate; exits with 4 if any check fails.
    Verify { certificate: PathBuf },
    /// Solves a quintic through its Bring form.
    DemoQuintic { poly: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Line,
    Point,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum VariantArg {
    Generic,
    Strict,
    Segre,
    /// The k = 4 chain through a line on a cubic (n ≥ 13).
    Chain,
}

#[derive(Debug)]
struct VerificationFailed;

impl std::fmt::Display for VerificationFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("certificate failed verification")
    }
}

impl std::error::Error for VerificationFailed {}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    if e.downcast_ref::<VerificationFailed>().is_some() {
        return 4;
    }
    match e.downcast_ref::<Error>() {
        Some(Error::AmbientTooSmall { .. }) => 2,
        Some(Error::GenericityFailure(_)) => 3,
        _ => 1,
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let mut cfg = PrecisionConfig::with_bits(cli.precision).seed(cli.seed);
    if let Some(t) = cli.tol {
        cfg = cfg.tol(t);
    }
    cfg.validate()?;
    match cli.command {
        Command::Bound { profile, mode } => {
            let profile: DegreeProfile = profile.parse()?;
            let n = match mode {
                Mode::Line => line_bound(&profile),
                Mode::Point => point_bound(&profile),
            };
            println!("{n}");
        }
        Command::Transform { poly, transformation } => {
            let p = read_poly(&poly, cfg.bits)?;
            let t = read_transformation(&transformation, cfg.bits)?;
            if t.n() != p.n() {
                bail!("transformation has {} coefficients, the polynomial degree is {}", t.n(), p.n());
            }
            println!("{}", serde_json::to_string_pretty(&transform(&p, &t))?);
        }
        Command::Reduce { k, variant, poly, output } => {
            let p = read_poly(&poly, cfg.bits)?;
            let cert = with_escalation(&cfg, |cfg| match (variant, k) {
                (VariantArg::Generic, _) => remove_terms_generic(&p, k, cfg),
                (VariantArg::Chain, 4) => remove4_chain(&p, cfg),
                (VariantArg::Segre, 5) => remove5(&p, Variant::Segre, cfg),
                (VariantArg::Strict, 5) => remove5(&p, Variant::Strict, cfg),
                (VariantArg::Chain, _) => Err(Error::DomainError("the chain variant removes exactly 4 terms".into())),
                _ => Err(Error::DomainError("strict and segre remove exactly 5 terms".into())),
            })?;
            let text = cert.to_json();
            match output {
                Some(path) => {
                    fs::write(&path, text + "\n").with_context(|| format!("writing {}", path.display()))?;
                    eprintln!(
                        "removed {k} terms; max residual {:.3e}; max solve degree {}",
                        cert.residuals.iter().cloned().fold(0.0, f64::max),
                        cert.solve_log.max_degree()
                    );
                }
                None => println!("{text}"),
            }
        }
        Command::Verify { certificate } => {
            let text = read(&certificate)?;
            let cert = Certificate::from_json(&text)?;
            let report = verify_certificate(&cert, &cert.precision);
            print!("{report}");
            if !report.passed() {
                return Err(VerificationFailed.into());
            }
        }
        Command::DemoQuintic { poly } => {
            let p = read_poly(&poly, cfg.bits)?;
            let sol = quintic_solve_demo(&p, &cfg)?;
            let out = json!({
                "roots": sol.roots,
                "bring": sol.bring,
                "transformation": sol.certificate.transformation,
                "residuals": relative_residuals(&sol.certificate.transformed, 3),
                "max_degree": sol.certificate.solve_log.max_degree(),
            });
            println!("{}", serde_json::to_string_pretty(&out)?);
        }
    }
    Ok(())
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_json(path: &Path) -> anyhow::Result<Value> {
    serde_json::from_str(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

/// `{"n", "a"}`, or a bare list `[a_1, …, a_n]` for `xⁿ + a_1 xⁿ⁻¹ + … + a_n`.
fn read_poly(path: &Path, bits: usize) -> anyhow::Result<MonicPoly> {
    let v = match read_json(path)? {
        Value::Array(a) => json!({ "n": a.len(), "a": scalars(a)? }),
        v => v,
    };
    let p: MonicPoly = serde_json::from_value(v).with_context(|| format!("{} is not a monic polynomial", path.display()))?;
    Ok(p.with_bits(bits))
}

/// `{"b"}`, or a bare list `[b_0, …, b_{n−1}]`, lowest degree first.
fn read_transformation(path: &Path, bits: usize) -> anyhow::Result<Transformation> {
    let v = match read_json(path)? {
        Value::Array(b) => json!({ "b": scalars(b)? }),
        v => v,
    };
    let t: Transformation =
        serde_json::from_value(v).with_context(|| format!("{} is not a transformation", path.display()))?;
    Ok(t.with_bits(bits))
}

/// Numbers, decimal strings and `[re, im]` pairs, all as `[re, im]` strings.
fn scalars(items: Vec<Value>) -> anyhow::Result<Vec<Value>> {
    items
        .into_iter()
        .map(|v| match v {
            Value::Array(pair) if pair.len() == 2 => Ok(json!([text(&pair[0])?, text(&pair[1])?])),
            other => Ok(json!([text(&other)?, "0"])),
        })
        .collect()
}

fn text(v: &Value) -> anyhow::Result<String> {
    match v {
        Value::Number(x) => Ok(x.to_string()),
        Value::String(s) => Ok(s.clone()),
        other => bail!("expected a number, got {other}"),
    }
}
