//! Command-line surface: admissibility tables, construction, search,
//! verification, and derived-design utilities, all exchanging designs as
//! JSON files.
//!
//! Exit codes: 0 success, 1 domain failure (inadmissible parameters, failed
//! verification, nothing found), 2 usage or parse errors.

use std::fmt::Display;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;

use qgdd::construct::{build_fat_design, coset_labels, fat_design_lambda, OrbitSelection};
use qgdd::design::{DesignFile, GroupSection};
use qgdd::field::Field;
use qgdd::gdd::{lambda_max_bruteforce, supplementary, GddInstance};
use qgdd::km_search::{
    build_km_system, expand_selection, frobenius_generator, singer_generator,
    solve_lambda_cover, MatrixGroup, DEFAULT_NODE_BUDGET,
};
use qgdd::params::{admissible_table, check_conditions, lambda_max_known};
use qgdd::spread::subfield_spread;

const EXIT_OK: u8 = 0;
const EXIT_DOMAIN: u8 = 1;
const EXIT_PARSE: u8 = 2;

/// Enumeration guard shared by the commands that expand block candidates.
const ENUM_LIMIT: u64 = 1 << 23;

#[derive(Parser)]
#[command(name = "qgdd", version, about = "q-analog group divisible designs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Default, ValueEnum)]
enum Format {
    #[default]
    Table,
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Print the admissible (v, g, k, lambda_delta) table for one field size
    Admissible {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        vmax: u16,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        /// Also list k > v/2 (block sizes the spread-based bound excludes)
        #[arg(long)]
        uncapped: bool,
    },
    /// Build the fat-subspace design over the Desarguesian spread
    Construct {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        g: u32,
        #[arg(long)]
        s: u16,
        #[arg(long)]
        k: u16,
        /// Determinant classes for k = s, e.g. "1" or "a,a+1" or "3,4"
        #[arg(long)]
        classes: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check a design file and report the observed index
    Verify { file: PathBuf },
    /// Kramer-Mesner search under a prescribed group
    Search {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        v: u16,
        #[arg(long)]
        g: u16,
        #[arg(long)]
        k: u16,
        #[arg(long)]
        lambda: u64,
        /// One of: trivial, sigma, sigma^N, sigma,phi, sigma^N,phi
        #[arg(long)]
        group: String,
        #[arg(long)]
        out: PathBuf,
        /// Search even when the necessary conditions fail
        #[arg(long)]
        allow_inadmissible: bool,
        /// Stop after this many solutions (the first is written out)
        #[arg(long, default_value_t = 1)]
        limit: usize,
        /// Backtracking node budget
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        budget: u64,
    },
    /// Largest admissible index for given parameters
    LambdaMax {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        v: u16,
        #[arg(long)]
        g: u16,
        #[arg(long)]
        k: u16,
        /// Also measure it by enumerating all scattered k-subspaces
        #[arg(long)]
        brute_force: bool,
        /// Enumeration guard for --brute-force
        #[arg(long)]
        limit: Option<u64>,
    },
    /// Complement a design inside the complete one and write the result
    Supplementary {
        file: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    configure_threads();
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Admissible { q, vmax, format, uncapped } => {
            cmd_admissible(q, vmax, format, uncapped)
        }
        Command::Construct { q, g, s, k, classes, out } => {
            cmd_construct(q, g, s, k, classes.as_deref(), &out)
        }
        Command::Verify { file } => cmd_verify(&file),
        Command::Search { q, v, g, k, lambda, group, out, allow_inadmissible, limit, budget } => {
            cmd_search(q, v, g, k, lambda, &group, &out, allow_inadmissible, limit, budget)
        }
        Command::LambdaMax { q, v, g, k, brute_force, limit } => {
            cmd_lambda_max(q, v, g, k, brute_force, limit)
        }
        Command::Supplementary { file, out } => cmd_supplementary(&file, &out),
    };
    ExitCode::from(code)
}

/// QGDD_THREADS caps the rayon pool; unset or invalid means default.
fn configure_threads() {
    if let Ok(text) = std::env::var("QGDD_THREADS") {
        if let Ok(n) = text.parse::<usize>() {
            if n > 0 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }
}

fn fail(code: u8, message: impl Display) -> u8 {
    eprintln!("{message}");
    code
}

fn cmd_admissible(q: u32, vmax: u16, format: Format, uncapped: bool) -> u8 {
    let rows = admissible_table(q, vmax, !uncapped);
    let lambda_max_text = |row: &qgdd::params::ParamReport| -> (String, bool) {
        match &row.lambda_max_known {
            Some(m) => (m.value.to_string(), m.desarguesian_only),
            None => (String::new(), false),
        }
    };
    match format {
        Format::Table => {
            println!(
                "{:>4} {:>3} {:>3} {:>12} {:>14} {:>8}  {}",
                "v", "g", "k", "lambda", "blocks", "groups", "lambda_max"
            );
            for row in &rows {
                let (lm, desarguesian) = lambda_max_text(row);
                let lm = match (lm.is_empty(), desarguesian) {
                    (true, _) => "-".to_string(),
                    (false, true) => format!("{lm}*"),
                    (false, false) => lm,
                };
                println!(
                    "{:>4} {:>3} {:>3} {:>12} {:>14} {:>8}  {}",
                    row.v,
                    row.g,
                    row.k,
                    row.lambda.to_string(),
                    row.block_count.as_ref().map(|b| b.to_string()).unwrap_or_default(),
                    row.group_count.to_string(),
                    lm
                );
            }
            eprintln!("{} admissible parameter sets (* = Desarguesian spread only)", rows.len());
        }
        Format::Csv => {
            println!("v,g,k,lambda,blocks,groups,lambda_max,lambda_max_desarguesian_only");
            for row in &rows {
                let (lm, desarguesian) = lambda_max_text(row);
                println!(
                    "{},{},{},{},{},{},{},{}",
                    row.v,
                    row.g,
                    row.k,
                    row.lambda,
                    row.block_count.as_ref().map(|b| b.to_string()).unwrap_or_default(),
                    row.group_count,
                    lm,
                    if lm.is_empty() { "" } else if desarguesian { "true" } else { "false" },
                );
            }
        }
        Format::Json => {
            let items: Vec<serde_json::Value> = rows
                .iter()
                .map(|row| {
                    let (lm, desarguesian) = lambda_max_text(row);
                    serde_json::json!({
                        "v": row.v,
                        "g": row.g,
                        "k": row.k,
                        "lambda": row.lambda.to_string(),
                        "blocks": row.block_count.as_ref().map(|b| b.to_string()),
                        "groups": row.group_count.to_string(),
                        "lambda_max": if lm.is_empty() { None } else { Some(lm) },
                        "lambda_max_desarguesian_only":
                            if row.lambda_max_known.is_some() { Some(desarguesian) } else { None },
                    })
                })
                .collect();
            println!("{}", serde_json::to_string_pretty(&items).expect("table serialization"));
        }
    }
    EXIT_OK
}

/// Parses one determinant-class token: either a plain integer encoding or a
/// polynomial in `a` like "a+1", "2a", "a^2+2".
fn parse_class_token(token: &str, q: u32, g: u32) -> Result<u32, String> {
    let token = token.trim();
    if token.is_empty() {
        return Err("empty class entry".into());
    }
    if token.chars().all(|c| c.is_ascii_digit()) {
        return token.parse::<u32>().map_err(|_| format!("integer out of range: {token}"));
    }
    let mut encoding = 0u64;
    for term in token.split('+') {
        let term = term.trim();
        let (coeff, exponent) = match term.find('a') {
            None => {
                let c = term
                    .parse::<u64>()
                    .map_err(|_| format!("bad constant term {term:?} in {token:?}"))?;
                (c, 0u32)
            }
            Some(pos) => {
                let coeff_text = &term[..pos];
                let coeff = if coeff_text.is_empty() {
                    1
                } else {
                    coeff_text
                        .parse::<u64>()
                        .map_err(|_| format!("bad coefficient {coeff_text:?} in {token:?}"))?
                };
                let rest = &term[pos + 1..];
                let exponent = if rest.is_empty() {
                    1
                } else if let Some(e) = rest.strip_prefix('^') {
                    e.parse::<u32>().map_err(|_| format!("bad exponent {e:?} in {token:?}"))?
                } else {
                    return Err(format!("cannot parse term {term:?} in {token:?}"));
                };
                (coeff, exponent)
            }
        };
        if coeff >= q as u64 {
            return Err(format!("coefficient {coeff} in {token:?} is not reduced mod {q}"));
        }
        if exponent >= g {
            return Err(format!("exponent {exponent} in {token:?} exceeds degree {} elements", g - 1));
        }
        encoding += coeff * (q as u64).pow(exponent);
    }
    u32::try_from(encoding).map_err(|_| format!("encoding overflow in {token:?}"))
}

fn parse_classes(text: &str, q: u32, g: u32) -> Result<Vec<u32>, String> {
    text.split(',').map(|t| parse_class_token(t, q, g)).collect()
}

fn cmd_construct(q: u32, g: u32, s: u16, k: u16, classes: Option<&str>, out: &PathBuf) -> u8 {
    if g < 2 || s < 3 || k < 3 || k > s {
        return fail(
            EXIT_DOMAIN,
            format!("need g >= 2, s >= 3, 3 <= k <= s; got g={g}, s={s}, k={k}"),
        );
    }
    let ext = match Field::with_default_poly(q, g) {
        Ok(f) => f,
        Err(e) => return fail(EXIT_DOMAIN, e),
    };
    let selection = match (k == s, classes) {
        (true, Some(text)) => {
            let encodings = match parse_classes(text, q, g) {
                Ok(encs) => encs,
                Err(msg) => return fail(EXIT_PARSE, msg),
            };
            match OrbitSelection::new(&ext, &encodings) {
                Ok(sel) => Some(sel),
                Err(e) => return fail(EXIT_PARSE, e),
            }
        }
        (true, None) => {
            return fail(
                EXIT_PARSE,
                format!(
                    "k = s requires --classes; available determinant classes over GF({q}^{g}): {}",
                    join(&coset_labels(&ext))
                ),
            )
        }
        (false, Some(_)) => {
            return fail(EXIT_PARSE, "--classes applies only when k = s".to_string())
        }
        (false, None) => None,
    };
    let alpha = selection.as_ref().map(|sel| sel.alpha()).unwrap_or(1);
    let predicted = fat_design_lambda(q, g, s as u32, k as u32, alpha);
    println!("predicted lambda: {predicted}");
    let instance = match build_fat_design(q, g, s, k, selection.as_ref()) {
        Ok(inst) => inst,
        Err(e) => return fail(EXIT_DOMAIN, e),
    };
    println!("blocks: {}", instance.blocks().len());
    let report = match instance.verify() {
        Ok(r) => r,
        Err(e) => return fail(EXIT_DOMAIN, format!("internal error: verification crashed: {e}")),
    };
    match report.lambda_observed {
        Some(observed) => println!("observed lambda: {observed}"),
        None => println!("observed lambda: not constant"),
    }
    if !report.is_gdd {
        return fail(EXIT_DOMAIN, "internal error: constructed design failed verification");
    }
    write_design(&DesignFile::from_instance(&instance), out)
}

fn join<T: Display>(items: &[T]) -> String {
    items.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

fn write_design(file: &DesignFile, out: &PathBuf) -> u8 {
    match std::fs::write(out, file.to_json()) {
        Ok(()) => {
            println!("wrote {}", out.display());
            EXIT_OK
        }
        Err(e) => fail(EXIT_DOMAIN, format!("cannot write {}: {e}", out.display())),
    }
}

fn load_design(path: &PathBuf) -> Result<(DesignFile, GddInstance), u8> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| fail(EXIT_PARSE, format!("cannot read {}: {e}", path.display())))?;
    let file = DesignFile::from_json(&text).map_err(|e| fail(EXIT_PARSE, e))?;
    let instance = file.to_instance().map_err(|e| fail(EXIT_PARSE, e))?;
    Ok((file, instance))
}

fn cmd_verify(path: &PathBuf) -> u8 {
    let (_, instance) = match load_design(path) {
        Ok(x) => x,
        Err(code) => return code,
    };
    let report = match instance.verify() {
        Ok(r) => r,
        Err(e) => return fail(EXIT_DOMAIN, format!("INVALID: {e}")),
    };
    let p = &report.params;
    println!(
        "parameters: ({}, {}, {}, {})_{}; {} groups, {} blocks",
        p.v,
        p.g,
        p.k,
        p.lambda,
        p.q,
        instance.spread().len(),
        instance.blocks().len()
    );
    match report.lambda_observed {
        Some(observed) => println!("observed lambda: {observed}"),
        None => println!("observed lambda: not constant"),
    }
    println!("line coverage histogram:");
    for (coverage, count) in &report.line_histogram {
        println!("  coverage {coverage}: {count} lines");
    }
    println!(
        "block count matches the counting identity: {}",
        if report.block_count_matches { "yes" } else { "no" }
    );
    println!(
        "replication number is constant: {}",
        if report.replication_constant { "yes" } else { "no" }
    );
    if !report.offending_lines.is_empty() {
        println!("sample lines at the wrong coverage:");
        for (w1, w2) in &report.offending_lines {
            println!("  [{w1}, {w2}]");
        }
    }
    if report.is_gdd {
        println!("VALID");
        EXIT_OK
    } else {
        println!("INVALID");
        EXIT_DOMAIN
    }
}

fn parse_group(spec: &str, field: &Field) -> Result<MatrixGroup, String> {
    if spec == "trivial" {
        return MatrixGroup::trivial(field.q(), field.g() as u16).map_err(|e| e.to_string());
    }
    let mut generators = Vec::new();
    for part in spec.split(',') {
        let part = part.trim();
        if part == "phi" {
            generators.push(frobenius_generator(field).map_err(|e| e.to_string())?);
        } else if part == "sigma" {
            generators.push(singer_generator(field).map_err(|e| e.to_string())?);
        } else if let Some(exp) = part.strip_prefix("sigma^") {
            let e: u64 = exp.parse().map_err(|_| format!("bad exponent in {part:?}"))?;
            let sigma = singer_generator(field).map_err(|e| e.to_string())?;
            generators.push(sigma.pow(e).map_err(|e| e.to_string())?);
        } else {
            return Err(format!(
                "unknown group component {part:?}; use trivial, sigma, sigma^N, or phi"
            ));
        }
    }
    MatrixGroup::new(generators).map_err(|e| e.to_string())
}

#[allow(clippy::too_many_arguments)]
fn cmd_search(
    q: u32,
    v: u16,
    g: u16,
    k: u16,
    lambda: u64,
    group_spec: &str,
    out: &PathBuf,
    allow_inadmissible: bool,
    limit: usize,
    budget: u64,
) -> u8 {
    let report = check_conditions(q, v, g, k, &BigUint::from(lambda));
    if !report.admissible {
        let reasons: Vec<String> =
            report.failed_conditions.iter().map(|c| c.to_string()).collect();
        eprintln!("inadmissible: {}", reasons.join("; "));
        if !allow_inadmissible {
            return EXIT_DOMAIN;
        }
    }
    let field = match Field::with_default_poly(q, v as u32) {
        Ok(f) => f,
        Err(e) => return fail(EXIT_DOMAIN, e),
    };
    let spread = match subfield_spread(&field, g as u32) {
        Ok(s) => s,
        Err(e) => return fail(EXIT_DOMAIN, e),
    };
    let group = match parse_group(group_spec, &field) {
        Ok(gr) => gr,
        Err(msg) => return fail(EXIT_PARSE, msg),
    };
    println!("group order: {}", group.order());
    let system = match build_km_system(&group, &spread, k, ENUM_LIMIT) {
        Ok(sys) => sys,
        Err(e) => return fail(EXIT_DOMAIN, e),
    };
    println!(
        "selection system: {} line orbits x {} block orbits",
        system.line_orbits.len(),
        system.block_orbits.len()
    );
    let outcome = solve_lambda_cover(&system, lambda, limit.max(1), budget, None);
    println!(
        "search: {} solutions, {} nodes, {}",
        outcome.solutions.len(),
        outcome.nodes,
        if outcome.complete { "exhausted" } else { "stopped early" }
    );
    let Some(selection) = outcome.solutions.first() else {
        return fail(
            EXIT_DOMAIN,
            if outcome.complete {
                "no solution exists for this group and lambda"
            } else {
                "no solution found within the node budget"
            },
        );
    };
    let blocks = expand_selection(&system, selection);
    let instance = match GddInstance::new(spread.clone(), k, lambda, blocks) {
        Ok(inst) => inst,
        Err(e) => return fail(EXIT_DOMAIN, format!("internal error: {e}")),
    };
    let verification = match instance.verify() {
        Ok(r) => r,
        Err(e) => return fail(EXIT_DOMAIN, format!("internal error: verification crashed: {e}")),
    };
    if !verification.is_gdd {
        return fail(EXIT_DOMAIN, "internal error: solver output failed verification");
    }
    println!("blocks: {}", instance.blocks().len());
    println!("observed lambda: {lambda}");
    let mut file = DesignFile::from_instance(&instance);
    file.group = Some(GroupSection {
        generators: group.generators().iter().map(|m| m.rows().to_vec()).collect(),
        order: group.order(),
    });
    file.orbit_generators = Some(
        selection
            .iter()
            .map(|&j| system.block_orbits[j].representative().row_encodings().to_vec())
            .collect(),
    );
    write_design(&file, out)
}

fn cmd_lambda_max(q: u32, v: u16, g: u16, k: u16, brute_force: bool, limit: Option<u64>) -> u8 {
    let known = lambda_max_known(q, v, g, k);
    match &known {
        Some(m) => println!(
            "lambda_max = {}{}",
            m.value,
            if m.desarguesian_only { " (Desarguesian spread)" } else { " (any spread)" }
        ),
        None => println!("no closed form known for these parameters"),
    }
    if !brute_force {
        return if known.is_some() {
            EXIT_OK
        } else {
            fail(EXIT_DOMAIN, "rerun with --brute-force to measure it by enumeration")
        };
    }
    let field = match Field::with_default_poly(q, v as u32) {
        Ok(f) => f,
        Err(e) => return fail(EXIT_DOMAIN, e),
    };
    let spread = match subfield_spread(&field, g as u32) {
        Ok(s) => s,
        Err(e) => return fail(EXIT_DOMAIN, e),
    };
    match lambda_max_bruteforce(&spread, k, limit.unwrap_or(ENUM_LIMIT)) {
        Ok(Some(measured)) => {
            println!("brute force over the subfield spread: {measured}");
            if let Some(m) = &known {
                if m.value != BigUint::from(measured) {
                    return fail(EXIT_DOMAIN, "internal error: closed form and enumeration differ");
                }
                println!("closed form and enumeration agree");
            }
            EXIT_OK
        }
        Ok(None) => fail(
            EXIT_DOMAIN,
            "scattered subspaces do not cover the uncovered lines at a constant rate",
        ),
        Err(e) => fail(EXIT_DOMAIN, e),
    }
}

fn cmd_supplementary(path: &PathBuf, out: &PathBuf) -> u8 {
    let (_, instance) = match load_design(path) {
        Ok(x) => x,
        Err(code) => return code,
    };
    let complement = match supplementary(&instance, ENUM_LIMIT) {
        Ok(c) => c,
        Err(e) => return fail(EXIT_DOMAIN, e),
    };
    let report = match complement.verify() {
        Ok(r) => r,
        Err(e) => return fail(EXIT_DOMAIN, format!("internal error: verification crashed: {e}")),
    };
    if !report.is_gdd {
        return fail(EXIT_DOMAIN, "internal error: supplementary design failed verification");
    }
    println!("supplementary lambda: {}", complement.params().lambda);
    println!("blocks: {}", complement.blocks().len());
    write_design(&DesignFile::from_instance(&complement), out)
}
