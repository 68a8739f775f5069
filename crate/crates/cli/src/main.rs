mod source;

use std::io::Write;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use toric_kstab::catalog::catalog_get;
use toric_kstab::filtration::{beta_exact_general, beta_sweep};
use toric_kstab::kstability::{vojta_certificate, CertificateRequest, Route};
use toric_kstab::position::general_position_report;
use toric_kstab::{Fan, KStabilityReport, Rational, ToricDivisor, ToricFano};

#[derive(Parser, Debug)]
#[command(
    name = "toric-kstab",
    version,
    about = "K-stability invariants of toric Q-Fano varieties"
)]
struct Cli {
    /// Output format. JSON is the stable machine-readable contract.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum RouteArg {
    B,
    C,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Barycenter, β per ray, δ and the K-stability verdict.
    Analyze {
        /// Fan JSON file, catalog name, or "-" for stdin.
        fan: String,
    },
    /// Exact β(-K_X, D) for an effective divisor D.
    Beta {
        fan: String,
        /// Comma-separated coefficients, one per ray (integers or p/q).
        #[arg(long, value_delimiter = ',', required = true)]
        divisor: Vec<String>,
    },
    /// Lattice-count estimates of β(-K_X, D_i) for N = 1..=max-N, as CSV.
    Sweep {
        fan: String,
        #[arg(long)]
        ray: usize,
        #[arg(long = "max-N", default_value_t = 40)]
        max_n: u32,
    },
    /// Proper intersection and general position of torus-invariant divisors.
    Position {
        fan: String,
        #[arg(long, value_delimiter = ',', required = true)]
        rays: Vec<usize>,
    },
    /// Check the hypotheses of a Vojta-type theorem for chosen divisors.
    Certify {
        fan: String,
        #[arg(long, value_enum, ignore_case = true)]
        route: RouteArg,
        #[arg(long, value_delimiter = ',', required = true)]
        rays: Vec<usize>,
        /// Reference ray E (route B).
        #[arg(long)]
        reference: Option<usize>,
    },
    /// List catalog entries, or show or export one.
    Catalog {
        name: Option<String>,
        /// Print only the fan JSON, suitable for piping into other commands.
        #[arg(long, requires = "name")]
        export: bool,
    },
}

enum Outcome {
    Success,
    InvalidCertificate,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Outcome::Success) => ExitCode::SUCCESS,
        Ok(Outcome::InvalidCertificate) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn emit_json<T: Serialize>(value: &T) -> Result<()> {
    let mut out = std::io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn fano(fan_arg: &str) -> Result<ToricFano> {
    let fan = source::load(fan_arg)?;
    ToricFano::new(fan).with_context(|| format!("{fan_arg} is not a usable toric Q-Fano fan"))
}

fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Analyze { fan } => {
            let report = fano(fan)?.analyze();
            match cli.format {
                Format::Json => emit_json(&report)?,
                Format::Text => print_report(&report),
            }
        }
        Command::Beta { fan, divisor } => {
            let tf = fano(fan)?;
            let coefficients = divisor
                .iter()
                .map(|c| c.parse::<Rational>())
                .collect::<Result<Vec<_>, _>>()?;
            let divisor = ToricDivisor::new(coefficients);
            let beta = beta_exact_general(&tf, &divisor)?;
            match cli.format {
                Format::Json => emit_json(&json!({ "divisor": divisor, "beta": beta }))?,
                Format::Text => println!("beta = {beta}"),
            }
        }
        Command::Sweep { fan, ray, max_n } => {
            let tf = fano(fan)?;
            let rows = beta_sweep(&tf, *ray, *max_n)?;
            let mut writer = csv::Writer::from_writer(std::io::stdout().lock());
            for row in &rows {
                writer.serialize(row)?;
            }
            writer.flush()?;
        }
        Command::Position { fan, rays } => {
            let fan = source::load(fan)?;
            ensure_complete(&fan)?;
            let report = general_position_report(&fan, rays)?;
            match cli.format {
                Format::Json => emit_json(&report)?,
                Format::Text => {
                    println!("rays: {:?}", report.rays);
                    println!("intersect properly: {}", report.intersect_properly);
                    println!(
                        "general position (strict): {}",
                        report.general_position_strict
                    );
                    println!(
                        "general position (lenient): {}",
                        report.general_position_lenient
                    );
                }
            }
        }
        Command::Certify {
            fan,
            route,
            rays,
            reference,
        } => {
            let tf = fano(fan)?;
            let request = CertificateRequest {
                route: match route {
                    RouteArg::B => Route::TheoremB,
                    RouteArg::C => Route::TheoremC,
                },
                chosen_rays: rays.clone(),
                reference_ray: *reference,
            };
            let cert = vojta_certificate(&tf, &request)?;
            match cli.format {
                Format::Json => emit_json(&cert)?,
                Format::Text => {
                    println!(
                        "route {}: {}",
                        cert.route,
                        if cert.valid { "VALID" } else { "INVALID" }
                    );
                    for check in &cert.checks {
                        let mark = if check.passed { "pass" } else { "FAIL" };
                        println!("  [{mark}] {} {}: {}", check.id, check.name, check.detail);
                    }
                }
            }
            if !cert.valid {
                return Ok(Outcome::InvalidCertificate);
            }
        }
        Command::Catalog { name, export } => match name {
            None => {
                let names = source::all_names()?;
                match cli.format {
                    Format::Json => emit_json(&names)?,
                    Format::Text => names.iter().for_each(|n| println!("{n}")),
                }
            }
            Some(name) => {
                let (fan, entry) = match catalog_get(name) {
                    Ok(entry) => (entry.fan.clone(), serde_json::to_value(&entry)?),
                    Err(_) => {
                        let fan = source::load(name)?;
                        let value = json!({ "name": name, "fan": fan, "expected_verdict": null });
                        (fan, value)
                    }
                };
                if *export {
                    emit_json(&fan)?;
                } else {
                    match cli.format {
                        Format::Json => emit_json(&entry)?,
                        Format::Text => println!(
                            "{name}: {} rays in dimension {}",
                            fan.ray_count(),
                            fan.dim()
                        ),
                    }
                }
            }
        },
    }
    Ok(Outcome::Success)
}

fn ensure_complete(fan: &Fan) -> Result<()> {
    let diag = toric_kstab::fan::validate_fan(fan);
    if !diag.is_complete_fan() {
        bail!("fan is not complete: {}", diag.failures.join("; "));
    }
    Ok(())
}

fn print_report(r: &KStabilityReport) {
    println!("verdict: {}", r.verdict);
    println!("delta: {} (~{:.6})", r.delta, r.delta.to_f64());
    println!("barycenter: {}", r.barycenter);
    for (i, b) in r.betas.iter().enumerate() {
        println!("  beta[{i}] = {b}");
    }
    println!("minimizing rays: {:?}", r.minimizing_rays);
    println!("eligible rays: {:?}", r.eligible_rays);
    println!("(-K)^n: {}", r.anticanonical_volume);
}
