use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use arith_core::codec::{decode_formula, decode_proof, encode_formula, encode_proof, CodecError, SymbolTable};
use arith_core::formula::gen::FormulaGen;
use arith_core::formula::{parse, parse_in, print, CompactDisplay, Formula, ParseError};
use arith_core::kernel::{check, search, Proof, ProofFormatError, SearchConfig, System};
use arith_core::primrec::{library, PrfFn, ProvabilityLimits};
use arith_core::representation::{represent, Condition, Half, RepresentError, Verifier, Hints};
use arith_core::self_reference::{diagonalize, gus_case_report, register_q, QPredicate, Q};
use num_bigint::BigUint;
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::report::{Exit, Outcome};

const SHOW_LIMIT: u64 = 64;
const DIFF_LISTING: usize = 20;
pub const FAULT_VAR: &str = "ARITH_INJECT_FAULT";

pub fn load_table(config: &RunConfig) -> Result<SymbolTable, Outcome> {
    match &config.table {
        Some(path) => SymbolTable::load(path).map_err(|e| Outcome::fail(Exit::Codec, format!("symbol table: {e}"))),
        None => Ok(SymbolTable::new()),
    }
}

/// A path to an existing file is read; anything else is taken literally.
fn read_input(input: &str) -> String {
    let path = Path::new(input);
    if path.is_file() {
        fs::read_to_string(path).unwrap_or_default().trim().to_string()
    } else {
        input.trim().to_string()
    }
}

fn parse_formula(text: &str, table: &SymbolTable, scoped: bool) -> Result<Formula, Outcome> {
    let parsed: Result<Formula, ParseError> = if scoped { parse_in(text, table) } else { parse(text) };
    parsed.map_err(|e| Outcome::fail(Exit::Parse, format!("syntax: {e}")))
}

fn codec_failure(e: CodecError) -> Outcome {
    let exit = match e {
        CodecError::Parse(_) => Exit::Parse,
        _ => Exit::Codec,
    };
    Outcome::fail(exit, format!("codec: {e}"))
}

fn read_proof(file: &Path, system: System, table: &SymbolTable) -> Result<Proof, Outcome> {
    let text = fs::read_to_string(file).map_err(|e| Outcome::fail(Exit::Parse, format!("{}: {e}", file.display())))?;
    Proof::parse(&text, system, Some(table)).map_err(|e| match e {
        ProofFormatError::Empty => Outcome::fail(Exit::Parse, "proof file has no lines"),
        other => Outcome::fail(Exit::Parse, format!("proof file: {other}")),
    })
}

fn compact(f: &Formula) -> String {
    CompactDisplay { formula: f, limit: SHOW_LIMIT }.to_string()
}

pub fn cmd_parse(config: &RunConfig, input: &str) -> Result<Outcome, Outcome> {
    let table = load_table(config)?;
    let f = parse_formula(&read_input(input), &table, config.table.is_some())?;
    let free: Vec<String> = f.free_vars().into_iter().collect();
    Ok(Outcome::new(
        Exit::Ok,
        json!({
            "canonical": compact(&f),
            "wff": true,
            "pp_wff": f.is_pp_wff(),
            "free_vars": free,
            "proposition": f.is_proposition(),
            "quantifier_free": f.is_quantifier_free(),
            "size": f.size(),
        }),
    ))
}

pub fn cmd_encode(config: &RunConfig, input: &str, proof: bool) -> Result<Outcome, Outcome> {
    let table = load_table(config)?;
    if proof {
        let p = read_proof(Path::new(input), config.system, &table)?;
        let code = encode_proof(&p.formulas(), &table).map_err(codec_failure)?;
        return Ok(Outcome::new(
            Exit::Ok,
            json!({ "lines": p.lines.len(), "code": code.to_string(), "bits": code.bits() }),
        ));
    }
    let f = parse_formula(&read_input(input), &table, config.table.is_some())?;
    let code = encode_formula(&f, &table).map_err(codec_failure)?;
    Ok(Outcome::new(Exit::Ok, json!({ "formula": compact(&f), "code": code.to_string(), "bits": code.bits() })))
}

pub fn cmd_decode(config: &RunConfig, code: &str, proof: bool) -> Result<Outcome, Outcome> {
    let table = load_table(config)?;
    let text = read_input(code);
    let n: BigUint = text.parse().map_err(|_| Outcome::fail(Exit::Parse, format!("`{text}` is not a decimal number")))?;
    if proof {
        let lines = decode_proof(&n, &table).map_err(codec_failure)?;
        let shown: Vec<String> = lines.iter().map(compact).collect();
        return Ok(Outcome::new(Exit::Ok, json!({ "lines": shown })));
    }
    let f = decode_formula(&n, &table).map_err(codec_failure)?;
    Ok(Outcome::new(Exit::Ok, json!({ "formula": compact(&f) })))
}

pub fn cmd_check_proof(config: &RunConfig, file: &Path) -> Result<Outcome, Outcome> {
    let table = load_table(config)?;
    let proof = read_proof(file, config.system, &table)?;
    let verdict = check(&proof);
    let exit = if verdict.accepted { Exit::Ok } else { Exit::Rejected };
    let mut out = Outcome::new(
        exit,
        json!({
            "accepted": verdict.accepted,
            "lines": proof.lines.len(),
            "conclusion": proof.conclusion().map(compact),
            "line_diagnostics": verdict.diagnostics,
        }),
    );
    if let Some(bad) = verdict.first_error() {
        out = out.note(format!("line {}: {}", bad.line, bad.reason));
    }
    Ok(out)
}

fn read_seeds(path: &Path, table: &SymbolTable) -> Result<Vec<Formula>, Outcome> {
    let text = fs::read_to_string(path).map_err(|e| Outcome::fail(Exit::Parse, format!("{}: {e}", path.display())))?;
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| parse_formula(l, table, true))
        .collect()
}

/// Seeds that are lines of `system`; the rest are reported as skipped.
fn seeds_for(system: System, seeds: &[Formula]) -> (Vec<Formula>, Vec<String>) {
    let (ok, skipped): (Vec<_>, Vec<_>) =
        seeds.iter().cloned().partition(|s| if system.is_pp() { s.is_pp_wff() } else { !s.contains_turnstile() });
    (ok, skipped.iter().map(print).collect())
}

pub fn cmd_diff_systems(config: &RunConfig, seed_file: Option<&Path>) -> Result<Outcome, Outcome> {
    let table = load_table(config)?;
    let seeds = match seed_file {
        Some(p) => read_seeds(p, &table)?,
        None => {
            let mut g = FormulaGen::new(config.seed);
            g.term_depth = 2;
            (0..2).map(|_| g.closed_equation()).collect()
        }
    };
    let cfg = SearchConfig { depth: config.depth as usize, numeral_cap: config.numeral_cap, ..SearchConfig::default() };
    let mut sets = Vec::new();
    let mut per_system = serde_json::Map::new();
    for system in [System::Pp, System::PpPlus, System::Pa] {
        let (usable, skipped) = seeds_for(system, &seeds);
        let found = search(system, &usable, &cfg).map_err(|e| Outcome::fail(Exit::Invariant, e.to_string()))?;
        let set: BTreeSet<String> = found.iter().map(print).collect();
        per_system.insert(
            system.name().to_string(),
            json!({ "derived": set.len(), "seeds_used": usable.len(), "seeds_skipped": skipped }),
        );
        sets.push((found, set));
    }
    let (pp, plus, pa) = (&sets[0].1, &sets[1].1, &sets[2].1);
    let subset = pp.is_subset(plus);
    let plus_only: Vec<&String> = plus.difference(pp).take(DIFF_LISTING).collect();
    let generalized: Vec<String> = sets[2]
        .0
        .iter()
        .filter(|f| matches!(f, Formula::ForAll(..)) && !f.contains_turnstile())
        .map(print)
        .filter(|s| !pp.contains(s))
        .collect();
    let result = json!({
        "seeds": seeds.iter().map(print).collect::<Vec<_>>(),
        "systems": per_system,
        "pp_subset_of_pp_plus": subset,
        "pp_plus_only": plus_only,
        "pa_generalized_absent_from_pp": generalized.len(),
        "pa_generalized_examples": generalized.iter().take(DIFF_LISTING).collect::<Vec<_>>(),
        "shared_pp_pa": pp.intersection(pa).count(),
        "semantic_effectiveness": "whether the axioms and rules give every well-formed proposition a unique formal truth value; a bounded search cannot settle it",
        "syntactic_effectiveness": "whether every formally true proposition can be constructively shown provable; the sets above are only what each rule set reaches within the depth",
    });
    let exit = if subset { Exit::Ok } else { Exit::Invariant };
    let out = Outcome::new(exit, result);
    Ok(if subset { out } else { out.note("PP-derived set is not contained in the PP+ set") })
}

pub fn cmd_build_gus(config: &RunConfig) -> Result<Outcome, Outcome> {
    let mut table = load_table(config)?;
    let limits = ProvabilityLimits::default();
    let q = if table.predicates().iter().any(|n| n == Q) {
        QPredicate::for_table(config.system, &table, limits)
    } else {
        register_q(config.system, &mut table, limits)
    }
    .map_err(|e| Outcome::fail(Exit::Codec, e.to_string()))?;
    let mut d = diagonalize(config.system, &table).map_err(|e| Outcome::fail(Exit::Invariant, e.to_string()))?;
    // test hook: a perturbed code must be caught by the invariant checks
    if std::env::var(FAULT_VAR).is_ok_and(|v| v == "diagonal") {
        d.p += 1u32;
    }
    let failures = d.invariant_failures(&table);
    let report =
        gus_case_report(&d, &q, &table, config.sample_bound).map_err(|e| Outcome::fail(Exit::Invariant, e.to_string()))?;
    let mut diagnostics: Vec<String> = failures.iter().map(|f| format!("invariant violated: {f}")).collect();
    for r in &report.proofs_found {
        diagnostics.push(format!("q(p, {r}) = 1: sampled code is a checked proof of the diagonal sentence"));
    }
    let exit = if diagnostics.is_empty() { Exit::Ok } else { Exit::Invariant };
    let mut out = Outcome::new(
        exit,
        json!({
            "diagonal": d.summary(),
            "invariants_hold": failures.is_empty(),
            "case_report": report,
        }),
    );
    out.diagnostics = diagnostics;
    Ok(out)
}

pub fn library_function(name: &str) -> Option<PrfFn> {
    let lib = library();
    let f = match name {
        "succ" | "successor" => return Some(PrfFn::succ()),
        "pred" => &lib.pred,
        "add" => &lib.add,
        "mul" => &lib.mul,
        "monus" => &lib.monus,
        "sg" => &lib.sg,
        "nsg" => &lib.nsg,
        "eq" => &lib.eq,
        "lt" => &lib.lt,
        "min" => &lib.min,
        "factorial" => &lib.factorial,
        "exp" => &lib.exp,
        "rem" => &lib.rem,
        "quotient" => &lib.quotient,
        "divides" => &lib.divides,
        "is_prime" => &lib.is_prime,
        _ => return None,
    };
    Some(f.clone())
}

fn half_exit(h: &Half) -> Option<Exit> {
    match h {
        Half::Failed { .. } => Some(Exit::Rejected),
        Half::Undetermined { .. } => Some(Exit::Undetermined),
        _ => None,
    }
}

pub fn cmd_verify_representation(config: &RunConfig, function: &str, args: &[u64], expected: u64) -> Result<Outcome, Outcome> {
    let f = library_function(function).ok_or_else(|| Outcome::fail(Exit::Parse, format!("unknown function `{function}`")))?;
    let rep = represent(&f).map_err(|e| match e {
        RepresentError::SizeExceeded { .. } => Outcome::fail(Exit::Undetermined, e.to_string()),
        other => Outcome::fail(Exit::Parse, other.to_string()),
    })?;
    let hints = Hints::new(&rep);
    let verifier = Verifier::new(&rep, &hints, config.witness_bound);
    let v = verifier.verify(args, expected).map_err(|e| match e {
        RepresentError::Arity { .. } => Outcome::fail(Exit::Parse, e.to_string()),
        other => Outcome::fail(Exit::Undetermined, other.to_string()),
    })?;
    // a failed half outranks an undetermined one
    let exit = [half_exit(&v.semantic), half_exit(&v.syntactic)]
        .into_iter()
        .flatten()
        .min_by_key(|e| if *e == Exit::Rejected { 0 } else { 1 })
        .unwrap_or(if v.condition == Condition::Undetermined { Exit::Undetermined } else { Exit::Ok });
    let result: Value = json!({
        "function": function,
        "formula_size": rep.formula.size(),
        "quantifier_free": rep.formula.is_quantifier_free(),
        "formula": if rep.formula.size() <= 200 { Value::String(print(&rep.formula)) } else { Value::Null },
        "verdict": v,
    });
    Ok(Outcome::new(exit, result))
}
