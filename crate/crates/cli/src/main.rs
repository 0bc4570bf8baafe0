use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use kloos_core::characters::{
    additive_characters, frobenius_verdict, multiplicative_characters,
    primitive_additive_character, AdditiveCharacter, MultiplicativeCharacter,
};
use kloos_core::identities::{
    registry, twist_index, Bindings, CheckReport, Session, Status, SuiteOptions,
};
use kloos_core::ring::DEFAULT_SIZE_CAP;
use kloos_core::sums::{self, SumValue};
use kloos_core::{make_ring, Elem, Error, Ring, RingSpec};

#[derive(Parser)]
#[command(
    name = "kloos",
    version,
    about = "Exact Kloosterman, Gauss and Jacobi sums over finite rings"
)]
struct Cli {
    /// Refuse rings with more elements than this.
    #[arg(long, global = true, default_value_t = DEFAULT_SIZE_CAP)]
    max_size: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Inspect a ring.
    #[command(subcommand)]
    Ring(RingCommand),
    /// Evaluate a character sum.
    #[command(subcommand)]
    Sum(SumCommand),
    /// Run identity checks on a ring.
    Verify(VerifyArgs),
    /// List the registered identity checks.
    ListChecks {
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct RingArg {
    /// Ring expression, e.g. "Z/25", "GF(3,2)", "Fp[3;0,0,1]", "Z/4 x GF(3)".
    #[arg(long)]
    ring: String,
}

#[derive(Subcommand)]
enum RingCommand {
    /// Size, characteristic, units, local factors, Frobenius verdict, minimal ideals, canonical ψ.
    Info {
        #[command(flatten)]
        ring: RingArg,
        #[arg(long)]
        json: bool,
    },
    /// Enumerate characters in index order.
    Characters {
        #[command(flatten)]
        ring: RingArg,
        #[arg(long, value_enum, default_value_t = Kind::Multiplicative)]
        kind: Kind,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Additive,
    Multiplicative,
}

#[derive(Subcommand)]
enum SumCommand {
    /// K(φ,ψ) by additive character index, or K(ψ, a.ψ) with the canonical ψ.
    Kloosterman {
        #[command(flatten)]
        ring: RingArg,
        #[arg(long, requires = "psi", conflicts_with = "a")]
        phi: Option<usize>,
        #[arg(long, requires = "phi")]
        psi: Option<usize>,
        #[arg(long)]
        a: Option<Elem>,
        #[arg(long)]
        json: bool,
    },
    /// K_τ(a) with the canonical ψ.
    Twisted {
        #[command(flatten)]
        ring: RingArg,
        #[arg(long, default_value = "trivial")]
        twist: String,
        #[arg(long, default_value_t = 1)]
        a: Elem,
        #[arg(long)]
        json: bool,
    },
    /// G(χ) with the canonical ψ, or with additive character `--psi`.
    Gauss {
        #[command(flatten)]
        ring: RingArg,
        #[arg(long, default_value = "trivial")]
        chi: String,
        #[arg(long)]
        psi: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// J_a(χ,η).
    Jacobi {
        #[command(flatten)]
        ring: RingArg,
        #[arg(long, default_value = "trivial")]
        chi: String,
        #[arg(long, default_value = "trivial")]
        eta: String,
        #[arg(long)]
        a: Option<Elem>,
        #[arg(long)]
        json: bool,
    },
    /// S(m,n;q) over Z/q.
    Classical {
        #[arg(long, allow_negative_numbers = true)]
        m: i64,
        #[arg(long, allow_negative_numbers = true)]
        n: i64,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, required_unless_present = "all", conflicts_with = "all")]
    check: Vec<String>,
    #[arg(long)]
    all: bool,
    #[command(flatten)]
    ring: RingArg,
    /// trivial, quadratic or index:k
    #[arg(long)]
    twist: Option<String>,
    /// Weight character, same syntax as --twist.
    #[arg(long)]
    chi: Option<String>,
    #[arg(long)]
    a: Option<Elem>,
    #[arg(long)]
    b: Option<Elem>,
    #[arg(long)]
    json: bool,
}

enum Failure {
    Input(Error),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Internal(msg) => Failure::Internal(msg),
            other => Failure::Input(other),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(Failure::Input(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn load(arg: &RingArg, cap: usize) -> Result<Ring, Failure> {
    let spec: RingSpec = arg.ring.parse()?;
    Ok(make_ring(&spec, cap)?)
}

fn run(cli: &Cli) -> Result<ExitCode, Failure> {
    let cap = cli.max_size;
    match &cli.command {
        Command::Ring(RingCommand::Info { ring, json }) => ring_info(&load(ring, cap)?, *json),
        Command::Ring(RingCommand::Characters { ring, kind }) => {
            let r = load(ring, cap)?;
            let lines: Vec<Value> = match kind {
                Kind::Additive => additive_characters(&r)
                    .iter()
                    .map(AdditiveCharacter::to_json)
                    .collect(),
                Kind::Multiplicative => multiplicative_characters(&r)
                    .iter()
                    .map(MultiplicativeCharacter::to_json)
                    .collect(),
            };
            for (k, line) in lines.iter().enumerate() {
                println!("{}", json!({"index": k, "character": line}));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Sum(cmd) => sum(cmd, cap),
        Command::Verify(args) => verify(args, cap),
        Command::ListChecks { json } => {
            for e in registry() {
                if *json {
                    println!(
                        "{}",
                        json!({"id": e.id, "statement": e.statement, "applicability": e.applicability, "reference": e.reference})
                    );
                } else {
                    println!(
                        "{}  {}\n     applies to: {}",
                        e.id, e.statement, e.applicability
                    );
                }
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn ring_info(r: &Ring, as_json: bool) -> Result<ExitCode, Failure> {
    if r.is_zero_ring() {
        return Err(Error::ZeroRing.into());
    }
    let verdict = frobenius_verdict(r)?;
    let factors: Vec<String> = r
        .local_decomposition()
        .iter()
        .map(|f| format!("{} (size {})", f.ring.descriptor(), f.ring.size()))
        .collect();
    let minimal: Vec<String> = r
        .minimal_ideals()
        .iter()
        .map(|i| r.describe_ideal(i))
        .collect();
    let psi = primitive_additive_character(r).map(|p| p.exponents().to_vec());
    let info = json!({
        "ring": r.descriptor(),
        "size": r.size(),
        "characteristic": r.characteristic(),
        "units": r.units().len(),
        "local_factors": factors,
        "frobenius": verdict.frobenius,
        "minimal_ideals": minimal,
        "canonical_psi": psi,
    });
    if as_json {
        println!("{info}");
    } else {
        println!("ring: {}", r.descriptor());
        println!("size: {}", r.size());
        println!("characteristic: {}", r.characteristic());
        println!("units: {}", r.units().len());
        println!("local factors: {}", factors.join("; "));
        println!("Frobenius: {}", verdict.frobenius);
        println!("minimal ideals: {}", minimal.join(", "));
        match psi {
            Some(e) => println!("canonical psi: {e:?}"),
            None => println!("canonical psi: none"),
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn canonical(r: &Ring) -> Result<AdditiveCharacter, Failure> {
    primitive_additive_character(r)
        .ok_or_else(|| Error::NotFrobenius(r.descriptor().to_string()).into())
}

fn multiplicative(r: &Ring, name: &str) -> Result<MultiplicativeCharacter, Failure> {
    Ok(MultiplicativeCharacter::from_index(
        r,
        twist_index(r, name)?,
    )?)
}

fn sum(cmd: &SumCommand, cap: usize) -> Result<ExitCode, Failure> {
    let (value, as_json) = match cmd {
        SumCommand::Kloosterman {
            ring,
            phi,
            psi,
            a,
            json,
        } => {
            let r = load(ring, cap)?;
            let v = match (phi, psi) {
                (Some(i), Some(j)) => sums::kloosterman(
                    &AdditiveCharacter::from_index(&r, *i)?,
                    &AdditiveCharacter::from_index(&r, *j)?,
                )?,
                _ => sums::kloosterman_param(&r, a.unwrap_or_else(|| r.one()))?,
            };
            (v, *json)
        }
        SumCommand::Twisted {
            ring,
            twist,
            a,
            json,
        } => {
            let r = load(ring, cap)?;
            (
                sums::twisted_kloosterman(&r, &multiplicative(&r, twist)?, *a)?,
                *json,
            )
        }
        SumCommand::Gauss {
            ring,
            chi,
            psi,
            json,
        } => {
            let r = load(ring, cap)?;
            let psi = match psi {
                Some(k) => AdditiveCharacter::from_index(&r, *k)?,
                None => canonical(&r)?,
            };
            (sums::gauss(&psi, &multiplicative(&r, chi)?)?, *json)
        }
        SumCommand::Jacobi {
            ring,
            chi,
            eta,
            a,
            json,
        } => {
            let r = load(ring, cap)?;
            let a = a.unwrap_or_else(|| r.one());
            (
                sums::jacobi_generalized(a, &multiplicative(&r, chi)?, &multiplicative(&r, eta)?)?,
                *json,
            )
        }
        SumCommand::Classical { m, n, q, json } => {
            (sums::classical_kloosterman(*m, *n, *q)?, *json)
        }
    };
    print_sum(&value, as_json);
    Ok(ExitCode::SUCCESS)
}

fn print_sum(v: &SumValue, as_json: bool) {
    if as_json {
        println!("{}", v.to_json());
        return;
    }
    let z = v.approx();
    match v.value.as_integer() {
        Some(i) => println!("{i}"),
        None => println!("{}", v.value.to_json()),
    }
    println!("approx: {:.9} {:+.9}i", z.re, z.im);
}

fn verify(args: &VerifyArgs, cap: usize) -> Result<ExitCode, Failure> {
    let r = load(&args.ring, cap)?;
    let index = |name: &Option<String>| name.as_deref().map(|n| twist_index(&r, n)).transpose();
    let bindings = Bindings {
        tau: index(&args.twist)?,
        chi: index(&args.chi)?,
        a: args.a,
        b: args.b,
    };
    let ids: Vec<&str> = args.check.iter().map(String::as_str).collect();
    let filter = (!args.all).then_some(ids.as_slice());
    let reports = Session::new(&r, SuiteOptions::default()).run_all(filter, &bindings)?;
    for report in &reports {
        if args.json {
            println!("{}", report.to_json());
        } else {
            println!("{}", summary(report));
        }
    }
    let failed = reports.iter().any(|r| r.status == Status::Fail);
    Ok(if failed {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    })
}

fn summary(r: &CheckReport) -> String {
    let show = |v: &Option<kloos_core::Cyc>| match v {
        Some(c) => match c.as_integer() {
            Some(i) => i.to_string(),
            None => c.to_json().to_string(),
        },
        None => "-".into(),
    };
    match r.status {
        Status::NotApplicable => format!(
            "{} {} {}: {}",
            r.check,
            r.ring,
            r.status.as_str(),
            r.reason.as_deref().unwrap_or("")
        ),
        _ => format!(
            "{} {} {} points={} expected={} actual={}",
            r.check,
            r.ring,
            r.status.as_str(),
            r.points,
            show(&r.expected),
            show(&r.actual)
        ),
    }
}
