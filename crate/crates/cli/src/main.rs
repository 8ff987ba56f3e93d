//! Command-line surface for the just-finite presentation toolkit.
//!
//! Exit codes: 0 for a definitive result (including finiteness
//! refutations and not-just-finite summaries), 1 for input errors, 2 when
//! the result is unknown or inconclusive within the budget.

use clap::{Parser, Subcommand, ValueEnum};
use jfp_core::certify::{
    certify_infinite, just_finite_report, verify_presents_same_group, Budget, Certificate,
    SameGroupVerdict, Summary,
};
use jfp_core::coset::{group_order, is_cyclic, regular_table, GroupOrder};
use jfp_core::abelian::abelian_invariants;
use jfp_core::presentation::Presentation;
use jfp_core::subgroup::low_index_subgroups;
use jfp_core::syntax::{parse_presentation, print_presentation};
use jfp_core::transform::just_finite_transform;
use serde_json::json;
use std::io::Read;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "jfp", version, about = "Just-finite presentation toolkit")]
struct Cli {
    /// Coset budget for enumerations.
    #[arg(long, global = true, default_value_t = 100_000)]
    max_cosets: usize,
    /// Index bound for subgroup searches.
    #[arg(long, global = true, default_value_t = 8)]
    max_index: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// On `transform`: emit < x | x^n > for finite cyclic inputs instead
    /// of applying the construction.
    #[arg(long, global = true)]
    cyclic_shortcut: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Replace each relator r by the pair r⁻¹·b·r = b², b⁻¹·r·b = r² over
    /// a fresh generator b.
    Transform { file: String },
    /// Order of the presented group, by coset enumeration.
    Order { file: String },
    /// Abelianization invariant factors and free rank.
    Abelian { file: String },
    /// Conjugacy classes of subgroups of index at most --max-index.
    LowIndex { file: String },
    /// Certify the presented group infinite, or refute by enumeration.
    CertifyInfinite { file: String },
    /// Verify that the second presentation presents the same group as the
    /// first (its generator list must extend the first's).
    VerifySame { first: String, second: String },
    /// Per-relator-removal infiniteness report with summary.
    Report {
        file: String,
        /// Apply the transform first and report on its output, using the
        /// construction's structural certificates.
        #[arg(long)]
        transform: bool,
    },
}

fn read_input(path: &str) -> Result<String, String> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| format!("stdin: {e}"))?;
        Ok(buf)
    } else {
        std::fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))
    }
}

fn load(path: &str) -> Result<Presentation, String> {
    let text = read_input(path)?;
    parse_presentation(&text).map_err(|e| format!("{path}: {e}"))
}

fn run(cli: &Cli) -> Result<u8, String> {
    let budget = Budget { max_cosets: cli.max_cosets, max_index: cli.max_index };
    if cli.max_cosets == 0 || cli.max_index == 0 {
        return Err("budgets must be positive".into());
    }
    let json_out = cli.format == Format::Json;
    match &cli.command {
        Command::Transform { file } => {
            let p = load(file)?;
            if cli.cyclic_shortcut {
                if let Some(table) = regular_table(&p, budget.max_cosets) {
                    if is_cyclic(&table) {
                        let n = table.live_count();
                        let out = parse_presentation(&format!("< x | x^{n} >")).unwrap();
                        if json_out {
                            println!(
                                "{}",
                                serde_json::to_string_pretty(&json!({
                                    "presentation": print_presentation(&out),
                                    "cyclic_shortcut": true,
                                    "order": n,
                                }))
                                .unwrap()
                            );
                        } else {
                            println!("{}", print_presentation(&out));
                            println!("cyclic of order {n}: emitted the balanced presentation");
                        }
                        return Ok(0);
                    }
                }
            }
            let rec = just_finite_transform(&p);
            if json_out {
                let pairs: Vec<_> = rec
                    .pairs
                    .iter()
                    .map(|pair| {
                        json!({
                            "input_relator": pair.input_relator,
                            "fresh_generator": rec.output.generators()[pair.fresh_generator].name,
                            "output_relators": [pair.output_relators.0, pair.output_relators.1],
                        })
                    })
                    .collect();
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "presentation": print_presentation(&rec.output),
                        "pairs": pairs,
                    }))
                    .unwrap()
                );
            } else {
                println!("{}", print_presentation(&rec.output));
                for pair in &rec.pairs {
                    println!(
                        "pair {}: input relator {} -> output relators {}, {} (fresh generator {})",
                        pair.input_relator,
                        pair.input_relator,
                        pair.output_relators.0,
                        pair.output_relators.1,
                        rec.output.generators()[pair.fresh_generator].name
                    );
                }
            }
            Ok(0)
        }
        Command::Order { file } => {
            let p = load(file)?;
            match group_order(&p, budget.max_cosets) {
                GroupOrder::Finite(order) => {
                    if json_out {
                        println!("{}", json!({ "order": order }));
                    } else {
                        println!("{order}");
                    }
                    Ok(0)
                }
                GroupOrder::Overflow { max_cosets } => {
                    if json_out {
                        println!("{}", json!({ "overflow": { "max_cosets": max_cosets } }));
                    } else {
                        println!("unknown: enumeration exceeded {max_cosets} cosets");
                    }
                    Ok(2)
                }
            }
        }
        Command::Abelian { file } => {
            let p = load(file)?;
            let inv = abelian_invariants(&p);
            if json_out {
                let torsion: Vec<String> = inv.torsion.iter().map(|t| t.to_string()).collect();
                println!("{}", json!({ "torsion": torsion, "free_rank": inv.free_rank }));
            } else {
                let mut parts: Vec<String> =
                    inv.torsion.iter().map(|t| format!("Z/{t}")).collect();
                parts.extend(std::iter::repeat("Z".to_string()).take(inv.free_rank));
                if parts.is_empty() {
                    println!("trivial");
                } else {
                    println!("{}", parts.join(" x "));
                }
            }
            Ok(0)
        }
        Command::LowIndex { file } => {
            let p = load(file)?;
            let records = low_index_subgroups(&p, budget.max_index);
            if json_out {
                let list: Vec<_> = records
                    .iter()
                    .map(|rec| {
                        let inv = abelian_invariants(&rec.presentation);
                        let torsion: Vec<String> =
                            inv.torsion.iter().map(|t| t.to_string()).collect();
                        json!({
                            "index": rec.index,
                            "presentation": print_presentation(&rec.presentation),
                            "abelianization": { "torsion": torsion, "free_rank": inv.free_rank },
                        })
                    })
                    .collect();
                println!("{}", serde_json::to_string_pretty(&json!({ "subgroups": list })).unwrap());
            } else {
                for rec in &records {
                    let inv = abelian_invariants(&rec.presentation);
                    println!(
                        "index {}: {} (free rank {})",
                        rec.index,
                        print_presentation(&rec.presentation),
                        inv.free_rank
                    );
                }
                println!("{} conjugacy classes of index <= {}", records.len(), budget.max_index);
            }
            Ok(0)
        }
        Command::CertifyInfinite { file } => {
            let p = load(file)?;
            let cert = certify_infinite(&p, budget);
            if json_out {
                println!(
                    "{}",
                    json!({ "certificate_kind": cert.kind(), "witness": cert.witness_json() })
                );
            } else {
                println!("{cert}");
            }
            Ok(if matches!(cert, Certificate::Unknown { .. }) { 2 } else { 0 })
        }
        Command::VerifySame { first, second } => {
            let p = load(first)?;
            let q = load(second)?;
            match verify_presents_same_group(&p, &q, budget).map_err(|e| e.to_string())? {
                SameGroupVerdict::Same => {
                    if json_out {
                        println!("{}", json!({ "same": true }));
                    } else {
                        println!("true");
                    }
                    Ok(0)
                }
                SameGroupVerdict::Different { reason } => {
                    if json_out {
                        println!("{}", json!({ "same": false, "reason": reason }));
                    } else {
                        println!("false: {reason}");
                    }
                    Ok(0)
                }
                SameGroupVerdict::Unknown { max_cosets } => {
                    if json_out {
                        println!("{}", json!({ "same": null, "max_cosets": max_cosets }));
                    } else {
                        println!("unknown: enumeration exceeded {max_cosets} cosets");
                    }
                    Ok(2)
                }
            }
        }
        Command::Report { file, transform } => {
            let p = load(file)?;
            let report = if *transform {
                let rec = just_finite_transform(&p);
                just_finite_report(&rec.output, Some(&rec), budget)
            } else {
                just_finite_report(&p, None, budget)
            };
            if json_out {
                println!("{}", serde_json::to_string_pretty(&report.to_json()).unwrap());
            } else {
                println!("{report}");
            }
            Ok(match report.summary {
                Summary::JustFinite | Summary::NotJustFinite { .. } => 0,
                Summary::Inconclusive { .. } => 2,
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
