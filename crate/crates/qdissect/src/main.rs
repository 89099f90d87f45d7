//! qdissect: exact q-series products, dissection, and vanishing-coefficient
//! certificates from the command line.

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use qdissect::families;
use qdissect::parser::parse_product;
use qdissect::report::{ClaimJson, FindingJson, RunReportJson, SeriesJson};
use qdissect_core::series::{product_expand, ProductSpec};
use qdissect_core::verify::{
    builtin_catalog, prove_claim, scan, verify_claim, Claim, ProofReport, ProofStatus,
};

#[derive(Parser)]
#[command(
    name = "qdissect",
    version,
    about = "Exact q-series products, arithmetic-progression dissection, and vanishing-coefficient certificates"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Expand a product spec and print its nonzero coefficients.
    Expand {
        /// Product spec, e.g. "(q,q^4;q^5) (q^6,q^9;q^15)^2".
        spec: String,
        /// Truncation order (default 1000, or QDISSECT_ORDER).
        #[arg(long)]
        order: Option<i64>,
        #[arg(long)]
        json: bool,
    },
    /// Check that coefficients vanish on t*n + r, coefficient by coefficient.
    Verify {
        spec: String,
        /// Progression modulus t.
        #[arg(long = "mod")]
        modulus: i64,
        /// Progression residue r, 0 <= r < t.
        #[arg(long)]
        residue: i64,
        #[arg(long)]
        order: Option<i64>,
        #[arg(long)]
        json: bool,
    },
    /// Certify that coefficients vanish on t*n + r at every order.
    Prove {
        spec: String,
        #[arg(long = "mod")]
        modulus: i64,
        #[arg(long)]
        residue: i64,
        /// Order for the truncated cross-checks inside the proof.
        #[arg(long)]
        order: Option<i64>,
        #[arg(long)]
        json: bool,
    },
    /// Run the built-in claim catalog: prover first, verifier fallback.
    Catalog {
        #[arg(long)]
        order: Option<i64>,
        #[arg(long)]
        json: bool,
    },
    /// Scan a product family for vanishing progressions.
    Scan {
        /// Built-in family name (b, c, e, f, g, h, i, j) or a JSON template
        /// file path.
        #[arg(long)]
        family: String,
        /// Overrides the template's own scan order.
        #[arg(long)]
        order: Option<i64>,
        #[arg(long)]
        json: bool,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

/// Writes one data line to stdout. A closed reader (`qdissect ... | head`)
/// is not an error: terminate with the conventional SIGPIPE code instead of
/// panicking mid-report.
fn outln(args: std::fmt::Arguments<'_>) {
    let mut stdout = std::io::stdout().lock();
    let ok = stdout
        .write_fmt(args)
        .and_then(|()| stdout.write_all(b"\n"))
        .is_ok();
    if !ok {
        std::process::exit(141);
    }
}

macro_rules! outln {
    ($($arg:tt)*) => { outln(format_args!($($arg)*)) };
}

/// `--order` beats `QDISSECT_ORDER` beats the built-in default.
fn resolve_order(flag: Option<i64>, default: i64) -> Result<i64, String> {
    let order = match flag {
        Some(n) => n,
        None => match std::env::var("QDISSECT_ORDER") {
            Ok(v) => v
                .trim()
                .parse::<i64>()
                .map_err(|_| format!("QDISSECT_ORDER: not an integer: {v:?}"))?,
            Err(_) => default,
        },
    };
    if order < 0 {
        return Err(format!("order must be nonnegative, got {order}"));
    }
    Ok(order)
}

fn build_claim(spec_text: &str, t: i64, r: i64) -> Result<(ProductSpec, Claim), String> {
    let spec = parse_product(spec_text).map_err(|e| e.to_string())?;
    if t < 1 || r < 0 || r >= t {
        return Err(format!("residue must satisfy 0 <= r < t, got r={r} t={t}"));
    }
    let claim = Claim {
        id: spec.to_string(),
        spec: spec.clone(),
        t,
        r,
        source: "command line".to_string(),
    };
    Ok((spec, claim))
}

fn print_claim_text(report: &ProofReport, spec: &ProductSpec, t: i64, r: i64) {
    outln!("spec: {spec}");
    outln!("progression: {t}n+{r}");
    outln!("order: {}", report.order);
    outln!("status: {}", report.status.as_str());
    if let Some(ce) = &report.first_counterexample {
        outln!("first counterexample: n={}, coefficient {}", ce.n, ce.coeff);
    }
    if let Some(reason) = &report.reason {
        outln!("reason: {reason}");
    }
    if let Some(groups) = &report.groups {
        for (i, g) in groups.iter().enumerate() {
            let mode = match g.mode {
                qdissect_core::lattice::CancelMode::Certified => "certified",
                qdissect_core::lattice::CancelMode::Truncated => "truncated",
            };
            let status = match g.status {
                qdissect_core::lattice::CancelStatus::Cancelled => "cancelled",
                qdissect_core::lattice::CancelStatus::Residual => "residual",
            };
            let mut line = format!(
                "group {}: mode={} status={} pairs={}",
                i + 1,
                mode,
                status,
                g.pairing.len()
            );
            if let Some(e) = g.residual_first_exponent {
                line.push_str(&format!(" residual_first_exponent={e}"));
            }
            outln!("{line}");
        }
    }
}

fn status_exit(status: ProofStatus) -> ExitCode {
    match status {
        ProofStatus::Certified | ProofStatus::Verified => ExitCode::SUCCESS,
        ProofStatus::Refuted => ExitCode::from(1),
        ProofStatus::Inapplicable => ExitCode::from(3),
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.cmd {
        Cmd::Expand { spec, order, json } => {
            let order = resolve_order(order, 1000)?;
            let spec = parse_product(&spec).map_err(|e| e.to_string())?;
            let series = product_expand(&spec, order).map_err(|e| e.to_string())?;
            if json {
                let s = SeriesJson::from(&series);
                outln!("{}", serde_json::to_string_pretty(&s).expect("serialize"));
            } else {
                for (e, c) in series.nonzero_terms() {
                    outln!("{e} {c}");
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Verify {
            spec,
            modulus,
            residue,
            order,
            json,
        } => {
            let order = resolve_order(order, 1000)?;
            let (spec, claim) = build_claim(&spec, modulus, residue)?;
            let report = verify_claim(&claim, order);
            if json {
                let c = ClaimJson::from_report(&report);
                outln!("{}", serde_json::to_string_pretty(&c).expect("serialize"));
            } else {
                print_claim_text(&report, &spec, modulus, residue);
            }
            Ok(status_exit(report.status))
        }
        Cmd::Prove {
            spec,
            modulus,
            residue,
            order,
            json,
        } => {
            let order = resolve_order(order, 1000)?;
            let (spec, claim) = build_claim(&spec, modulus, residue)?;
            let report = prove_claim(&claim, order);
            if json {
                let c = ClaimJson::from_report(&report);
                outln!("{}", serde_json::to_string_pretty(&c).expect("serialize"));
            } else {
                print_claim_text(&report, &spec, modulus, residue);
            }
            Ok(status_exit(report.status))
        }
        Cmd::Catalog { order, json } => {
            let order = resolve_order(order, 1000)?;
            let mut claims = Vec::new();
            for claim in builtin_catalog() {
                let proof = prove_claim(&claim, order);
                let cj = if proof.status == ProofStatus::Inapplicable {
                    // Outside the prover's rules: fall back to coefficients.
                    let check = verify_claim(&claim, order);
                    let mut cj = ClaimJson::from_report(&check);
                    cj.prover = Some("inapplicable");
                    cj.reason = proof.reason.clone();
                    cj
                } else {
                    ClaimJson::from_report(&proof)
                };
                claims.push(cj);
            }
            let report = RunReportJson::new(claims);
            if json {
                outln!("{}", serde_json::to_string_pretty(&report).expect("serialize"));
            } else {
                for c in &report.claims {
                    let mut line = format!("{}: {}", c.id, c.status);
                    if c.prover.is_some() {
                        line.push_str(" (prover inapplicable)");
                    }
                    outln!("{line}");
                }
                outln!(
                    "summary: certified={} verified={} refuted={} inapplicable={}",
                    report.summary.certified,
                    report.summary.verified,
                    report.summary.refuted,
                    report.summary.inapplicable
                );
            }
            Ok(if report.summary.refuted > 0 {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            })
        }
        Cmd::Scan {
            family,
            order,
            json,
        } => {
            let mut tmpl = families::resolve(&family)?;
            if let Some(n) = order {
                tmpl.order = resolve_order(Some(n), tmpl.order)?;
            } else if std::env::var("QDISSECT_ORDER").is_ok() {
                tmpl.order = resolve_order(None, tmpl.order)?;
            }
            let findings = scan(&tmpl);
            let rows: Vec<FindingJson> = findings.iter().map(FindingJson::from).collect();
            if json {
                outln!("{}", serde_json::to_string_pretty(&rows).expect("serialize"));
            } else {
                for f in &rows {
                    outln!(
                        "{}: {} vanishes on {}n+{} [{}] [{}]",
                        f.family, f.spec, f.t, f.r, f.status, f.novelty
                    );
                }
                outln!("findings: {}", rows.len());
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}
