//! The `ncproof` command-line interface. Batch, file-driven, exit status
//! 0 for accepted/success, 1 for rejected verdicts, 2 for malformed
//! input. `NCPROOF_EXPAND_CAP` overrides the expansion term cap.

use std::fs;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Parser, Subcommand};

use crate::check::{check, CheckOptions};
use crate::cpoly::embed;
use crate::error::ParseError;
use crate::field::FieldSpec;
use crate::formula::{parse_formula, Formula, DEFAULT_EXPAND_CAP};
use crate::instances::{gen_fphp, gen_fphp_lowdeg, gen_subst_instance, gen_tseitin, Graph, Instance};
use crate::order::Order;
use crate::ordered::{ordered_sum_of_monomials, recognize, OrderedVerdict};
use crate::pit::{self, PitBackend};
use crate::proof::{parse_proof, parse_proof_document, Proof, ProofSystem};
use crate::rank::{hard_poly, nisan_bound, permutation_submatrix};
use crate::translate::{fpc_to_nfpc, pcr_to_ofpc, PCR_TO_OFPC_SIZE_CONSTANT};

const DEFAULT_MATRIX_SEED: u64 = 0x6e63_7072;

#[derive(Parser)]
#[command(
    name = "ncproof",
    about = "Workbench for proof systems over noncommutative and ordered formulas",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a proof file; exit 0 accepted, 1 rejected, 2 malformed
    Check {
        proof: PathBuf,
        /// additionally require the final line to compute the constant 1
        #[arg(long)]
        refutation: bool,
    },
    /// Decide whether two formula files compute the same polynomial
    Pit {
        a: PathBuf,
        b: PathBuf,
        /// expand (exact) or matrix (probabilistic, seeded)
        #[arg(long, default_value = "expand")]
        backend: String,
        #[arg(long, default_value = "Q")]
        field: String,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Canonicalize a formula into syntactic ordered form
    Canon {
        formula: PathBuf,
        /// `default` or space-separated positions of x_1..x_n
        #[arg(long, default_value = "default")]
        order: String,
        #[arg(long, default_value = "Q")]
        field: String,
    },
    /// Nisan partial-derivative-matrix ranks of a homogeneous polynomial
    Rank {
        formula: Option<PathBuf>,
        /// use ⟦HARD_d⟧ instead of a formula file
        #[arg(long)]
        hard: Option<u32>,
        #[arg(long, default_value = "Q")]
        field: String,
        /// machine-readable `k,rank` rows
        #[arg(long)]
        csv: bool,
        /// with --hard: also print the per-k permutation-submatrix ranks
        #[arg(long)]
        submatrix: bool,
    },
    /// Generate benchmark axiom families as proof-file preambles
    Gen {
        #[command(subcommand)]
        family: GenFamily,
    },
    /// Translate a proof between systems (PCR→OFPC, FPC→NFPC)
    Translate {
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        input: PathBuf,
        output: PathBuf,
    },
    /// Expand a formula file to its canonical polynomial listing
    Expand {
        formula: PathBuf,
        /// term cap (default 10^6 or NCPROOF_EXPAND_CAP)
        #[arg(long)]
        cap: Option<usize>,
        #[arg(long, default_value = "Q")]
        field: String,
    },
}

#[derive(Subcommand)]
enum GenFamily {
    /// Functional pigeonhole principle, m pigeons into n holes
    Fphp {
        m: u32,
        n: u32,
        #[arg(long)]
        raw: bool,
    },
    /// FPHP with linear pigeon axioms
    FphpLowdeg {
        m: u32,
        n: u32,
        #[arg(long)]
        raw: bool,
    },
    /// Tseitin mod-p constraints over an edge-list graph file
    Tseitin {
        graph: PathBuf,
        #[arg(long)]
        p: u64,
        /// comma- or space-separated vertex charges
        #[arg(long)]
        charge: String,
        #[arg(long, default_value = "Q")]
        field: String,
        #[arg(long)]
        raw: bool,
    },
    /// Substitute x_i -> Π_j (y_ij + z_ij) into an axiom file's inputs
    Subst {
        axioms: PathBuf,
        /// degree of each substituted factor product
        #[arg(long, default_value_t = 1)]
        deg: u32,
        #[arg(long)]
        raw: bool,
    },
}

pub fn expand_cap_from_env() -> usize {
    std::env::var("NCPROOF_EXPAND_CAP")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_EXPAND_CAP)
}

fn parse_field_flag(s: &str) -> Result<FieldSpec, String> {
    if s == "Q" {
        return Ok(FieldSpec::Rationals);
    }
    if let Some(p) = s.strip_prefix("GF:") {
        let p: u64 = p.parse().map_err(|_| format!("bad modulus in `{s}`"))?;
        return FieldSpec::prime(p).map_err(|e| e.to_string());
    }
    Err(format!("unknown field `{s}` (use Q or GF:<p>)"))
}

fn parse_order_flag(s: &str) -> Result<Order, String> {
    if s == "default" {
        return Ok(Order::default_order());
    }
    let positions: Option<Vec<u32>> = s
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().ok())
        .collect();
    positions
        .and_then(Order::from_positions)
        .ok_or_else(|| format!("`{s}` is not a permutation of positions"))
}

fn read_file(path: &PathBuf) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn read_formula(path: &PathBuf, field: FieldSpec) -> Result<Arc<Formula>, String> {
    let src = read_file(path)?;
    parse_formula(src.trim(), field, None)
        .map_err(|e: ParseError| format!("{}: {e}", path.display()))
}

fn read_proof(path: &PathBuf) -> Result<Proof, String> {
    let src = read_file(path)?;
    parse_proof(&src).map_err(|e| format!("{}: {e}", path.display()))
}

/// Runs the CLI; returns the process exit status.
pub fn run(cli: Cli) -> i32 {
    match dispatch(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            2
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32, String> {
    let cap = expand_cap_from_env();
    let opts = CheckOptions { expand_cap: cap };
    match cli.command {
        Command::Check { proof, refutation } => {
            let proof = read_proof(&proof)?;
            let report = check(&proof, &opts)?;
            for f in &report.failures {
                println!("{}: {}", f.loc, f.reason);
            }
            let verdict_ok = report.accepted && (!refutation || report.is_refutation);
            if report.accepted && refutation && !report.is_refutation {
                println!("final line does not compute the constant 1");
            }
            println!(
                "{}{}",
                if verdict_ok { "ACCEPTED" } else { "REJECTED" },
                if verdict_ok && report.is_refutation {
                    " (refutation)"
                } else {
                    ""
                }
            );
            println!("size {}", report.size);
            if let Some(d) = report.degree {
                println!("degree {d}");
            }
            Ok(if verdict_ok { 0 } else { 1 })
        }
        Command::Pit {
            a,
            b,
            backend,
            field,
            seed,
        } => {
            let field = parse_field_flag(&field)?;
            let fa = read_formula(&a, field)?;
            let fb = read_formula(&b, field)?;
            let backend = match backend.as_str() {
                "expand" => PitBackend::Expand,
                "matrix" => PitBackend::RandomMatrix {
                    seed: seed.unwrap_or(DEFAULT_MATRIX_SEED),
                },
                other => return Err(format!("unknown backend `{other}`")),
            };
            let equal = pit::equal(&fa, &fb, field, backend, cap).map_err(|e| e.to_string())?;
            println!("{}", if equal { "EQUAL" } else { "NOT-EQUAL" });
            Ok(if equal { 0 } else { 1 })
        }
        Command::Canon {
            formula,
            order,
            field,
        } => {
            let field = parse_field_flag(&field)?;
            let ord = parse_order_flag(&order)?;
            let f = read_formula(&formula, field)?;
            match recognize(&f, field, &ord, cap).map_err(|e| e.to_string())? {
                OrderedVerdict::Canonical(g) => {
                    println!("{g}");
                    Ok(0)
                }
                OrderedVerdict::NotOrdered(w) => {
                    println!(
                        "NOT-ORDERED: x{} ≻ x{} at gate {}; both occur in the gate's polynomials",
                        w.left_var,
                        w.right_var,
                        crate::formula::path_to_string(&w.path)
                    );
                    Ok(1)
                }
            }
        }
        Command::Rank {
            formula,
            hard,
            field,
            csv,
            submatrix,
        } => {
            let field = parse_field_flag(&field)?;
            let ord = Order::default_order();
            let (nc, hard_d) = match (hard, formula) {
                (Some(d), None) => {
                    let h = hard_poly(d, 2 * d, &ord).map_err(|e| e.to_string())?;
                    (embed(&h, &ord).map_err(|e| e.to_string())?, Some(d))
                }
                (None, Some(path)) => {
                    let f = read_formula(&path, field)?;
                    let nc = f
                        .expand_capped(field, cap)
                        .map_err(|e| e.to_string())?;
                    (nc, None)
                }
                _ => return Err("pass a formula file or --hard <d>, not both".into()),
            };
            if submatrix && hard_d.is_none() {
                return Err("--submatrix needs --hard".into());
            }
            let report = nisan_bound(&nc).map_err(|e| e.to_string())?;
            let sub_ranks: Option<Vec<u64>> = hard_d.map(|d| {
                (0..=d as usize)
                    .map(|k| {
                        permutation_submatrix(d, k, &ord)
                            .map(|m| m.rank())
                            .expect("k <= d")
                    })
                    .collect()
            });
            if csv {
                for (k, r) in report.per_k.iter().enumerate() {
                    if submatrix {
                        println!("{k},{r},{}", sub_ranks.as_ref().unwrap()[k]);
                    } else {
                        println!("{k},{r}");
                    }
                }
            } else {
                println!("{}", if submatrix { "k rank submatrix" } else { "k rank" });
                for (k, r) in report.per_k.iter().enumerate() {
                    if submatrix {
                        println!("{k} {r} {}", sub_ranks.as_ref().unwrap()[k]);
                    } else {
                        println!("{k} {r}");
                    }
                }
                println!("full total {}", report.total);
                if let Some(subs) = &sub_ranks {
                    println!("submatrix total {}", subs.iter().sum::<u64>());
                }
            }
            Ok(0)
        }
        Command::Gen { family } => {
            let (inst, label, raw) = match family {
                GenFamily::Fphp { m, n, raw } => (
                    gen_fphp(m, n).map_err(|e| e.to_string())?,
                    format!("fphp m={m} n={n}"),
                    raw,
                ),
                GenFamily::FphpLowdeg { m, n, raw } => (
                    gen_fphp_lowdeg(m, n).map_err(|e| e.to_string())?,
                    format!("fphp-lowdeg m={m} n={n}"),
                    raw,
                ),
                GenFamily::Tseitin {
                    graph,
                    p,
                    charge,
                    field,
                    raw,
                } => {
                    let field = parse_field_flag(&field)?;
                    let g = Graph::parse(&read_file(&graph)?).map_err(|e| e.to_string())?;
                    let charges: Option<Vec<u64>> = charge
                        .split(|c: char| c.is_whitespace() || c == ',')
                        .filter(|t| !t.is_empty())
                        .map(|t| t.parse().ok())
                        .collect();
                    let charges = charges.ok_or_else(|| format!("bad charges `{charge}`"))?;
                    (
                        gen_tseitin(&g, p, &charges, field).map_err(|e| e.to_string())?,
                        format!("tseitin p={p}"),
                        raw,
                    )
                }
                GenFamily::Subst { axioms, deg, raw } => {
                    let src = read_file(&axioms)?;
                    let base = parse_proof_document(&src)
                        .map_err(|e| format!("{}: {e}", axioms.display()))?;
                    let polys: Vec<_> = base
                        .inputs
                        .iter()
                        .map(|f| {
                            f.expand_capped(base.field, cap)
                                .map(|p| p.erase_order())
                                .map_err(|e| e.to_string())
                        })
                        .collect::<Result<_, _>>()?;
                    (
                        gen_subst_instance(&polys, deg).map_err(|e| e.to_string())?,
                        format!("subst deg={deg} of {}", axioms.display()),
                        raw,
                    )
                }
            };
            if let Some(w) = &inst.warning {
                eprintln!("warning: {w}");
            }
            print!("{}", render_instance(&inst, &label, raw)?);
            Ok(0)
        }
        Command::Translate {
            from,
            to,
            input,
            output,
        } => {
            let from_sys = ProofSystem::from_str_opt(&from)
                .ok_or_else(|| format!("unknown system `{from}`"))?;
            let to_sys =
                ProofSystem::from_str_opt(&to).ok_or_else(|| format!("unknown system `{to}`"))?;
            let proof = read_proof(&input)?;
            let report = match (from_sys, to_sys) {
                (ProofSystem::PCR, ProofSystem::OFPC) => {
                    pcr_to_ofpc(&proof, &opts).map_err(|e| e.to_string())?
                }
                (ProofSystem::FPC, ProofSystem::NFPC) => {
                    fpc_to_nfpc(&proof, &opts).map_err(|e| e.to_string())?
                }
                _ => return Err(format!("no translation {from} -> {to}")),
            };
            fs::write(&output, report.output.to_text())
                .map_err(|e| format!("{}: {e}", output.display()))?;
            println!("size_in {}", report.size_in);
            println!("size_out {}", report.size_out);
            if from_sys == ProofSystem::PCR {
                let n = proof.nvars as u64;
                let bound = PCR_TO_OFPC_SIZE_CONSTANT * n * report.size_in;
                println!(
                    "size law: {} <= {}*{}*{} = {} : {}",
                    report.size_out,
                    PCR_TO_OFPC_SIZE_CONSTANT,
                    n,
                    report.size_in,
                    bound,
                    if report.size_out <= bound { "ok" } else { "VIOLATED" }
                );
            }
            Ok(0)
        }
        Command::Expand {
            formula,
            cap: cap_flag,
            field,
        } => {
            let field = parse_field_flag(&field)?;
            let f = read_formula(&formula, field)?;
            let cap = cap_flag.unwrap_or(cap);
            let poly = f.expand_capped(field, cap).map_err(|e| e.to_string())?;
            for (w, c) in poly.terms() {
                println!("{c} : {w}");
            }
            Ok(0)
        }
    }
}

fn render_instance(inst: &Instance, label: &str, raw: bool) -> Result<String, String> {
    let mut out = String::new();
    out.push_str(&format!("# generated: {label}\n"));
    for note in &inst.notes {
        out.push_str(&format!("# {note}\n"));
    }
    if raw {
        for p in &inst.polys {
            out.push_str(&format!("{p}\n"));
        }
        return Ok(out);
    }
    let field = inst
        .polys
        .first()
        .map(|p| p.field())
        .unwrap_or(FieldSpec::Rationals);
    out.push_str("system: PC\n");
    out.push_str(&format!("field: {field}\n"));
    out.push_str(&format!("vars: {}\n", inst.nvars));
    out.push_str("order: default\n");
    let ord = Order::default_order();
    for (i, p) in inst.polys.iter().enumerate() {
        let f = ordered_sum_of_monomials(p, &ord).map_err(|e| e.to_string())?;
        out.push_str(&format!("input {}: {}\n", i + 1, f));
    }
    Ok(out)
}
