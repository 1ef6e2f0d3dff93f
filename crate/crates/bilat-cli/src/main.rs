//! `bilat`: command-line front end for the bilateral proof/refutation engine.
//!
//! Exit codes are a total function of the verdict: 0 for success (checked,
//! derivable, valid, holds, consistent), 1 for a failed check (refuted,
//! underivable, countermodel found, clause violated), 2 for an undecided
//! support verdict, 3 for unusable input.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Deserialize;
use serde_json::{json, Value};

use bilat_core::atomic::{check_atomic, derive_witness, AtomicDeduction, AtomicSequent};
use bilat_core::base::{dual_base, Base};
use bilat_core::formula::{dual_formula, print_formula, Atom, Formula, Polarity};
use bilat_core::kripke::{countermodel_search, forces, model_valid, validate_model, RawModel};
use bilat_core::nd::{check_nd, NdJudgment, NdProof};
use bilat_core::simulation::{
    build_mapping, build_simulation_base, translate_atomic_to_nd, translate_nd_to_atomic,
    SimulationSpec,
};
use bilat_core::support::{
    harmony_check, strong_harmony_check, support, ClauseSet, ExtensionBudget, HarmonyReport,
    SupportQuery, SupportVerdict,
};

const EXIT_OK: u8 = 0;
const EXIT_FAILED: u8 = 1;
const EXIT_UNKNOWN: u8 = 2;
const EXIT_INPUT: u8 = 3;

#[derive(Parser)]
#[command(name = "bilat")]
#[command(about = "Bilateral proofs and refutations for 2Int: atomic bases, natural deduction, \
Kripke countermodels, simulation bases, and base-extension support")]
#[command(version)]
struct Cli {
    /// Print the result as a single JSON document
    #[arg(long, global = true)]
    json: bool,

    /// Write the result to this file instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Echoed into JSON output for scripting; every command is deterministic
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check an atomic deduction against a base and print its sequent
    CheckAtomic {
        #[arg(long)]
        base: PathBuf,
        #[arg(long)]
        deduction: PathBuf,
    },
    /// Decide atomic derivability and print a witness deduction
    Derive {
        #[arg(long)]
        base: PathBuf,
        /// Conclusion atom
        #[arg(long)]
        goal: String,
        #[arg(long)]
        polarity: String,
        /// Proof assumptions, comma-separated atoms
        #[arg(long)]
        proofs: Option<String>,
        /// Refutation assumptions, comma-separated atoms
        #[arg(long)]
        refutations: Option<String>,
    },
    /// Check a natural deduction proof and print its judgment
    CheckNd {
        #[arg(long)]
        proof: PathBuf,
    },
    /// Dualize a base, a formula, or an atomic deduction
    Dual {
        #[arg(long)]
        base: Option<PathBuf>,
        #[arg(long)]
        formula: Option<String>,
        #[arg(long)]
        deduction: Option<PathBuf>,
    },
    /// Validate a Kripke model; optionally test a formula at every world
    KripkeCheck {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        formula: Option<String>,
        #[arg(long)]
        polarity: Option<String>,
    },
    /// Search for a countermodel to a formula at a polarity
    KripkeCountermodel {
        #[arg(long)]
        formula: String,
        #[arg(long)]
        polarity: String,
        #[arg(long, default_value_t = 3)]
        max_worlds: usize,
        /// Atom universe, comma-separated (default: the formula's atoms)
        #[arg(long)]
        atoms: Option<String>,
    },
    /// Build the simulation base and formula-to-atom mapping for a formula set
    SimulateBuild {
        /// Target formula; repeat the flag to add more
        #[arg(long = "formula", required = true)]
        formulas: Vec<String>,
        /// Query-atom universe override, comma-separated
        #[arg(long)]
        atoms: Option<String>,
    },
    /// Translate proofs between natural deduction and the simulation base
    SimulateTranslate {
        /// Formula set the simulation base is built for; repeatable. With
        /// --proof the proof's own vocabulary is included automatically.
        #[arg(long = "formula")]
        formulas: Vec<String>,
        /// Natural deduction proof to turn into an atomic deduction
        #[arg(long)]
        proof: Option<PathBuf>,
        /// Atomic deduction to turn back into a natural deduction proof
        #[arg(long)]
        deduction: Option<PathBuf>,
        /// Query-atom universe override, comma-separated
        #[arg(long)]
        atoms: Option<String>,
    },
    /// Three-valued support check for a formula over a base
    BesSupport {
        #[arg(long)]
        base: PathBuf,
        #[arg(long)]
        formula: String,
        #[arg(long)]
        polarity: String,
        /// Proof-side assumptions, comma-separated formulas
        #[arg(long)]
        proofs: Option<String>,
        /// Refutation-side assumptions, comma-separated formulas
        #[arg(long)]
        refutations: Option<String>,
        /// extra-atoms,max-extra-rules,max-premises,max-discharge[,cap]
        #[arg(long)]
        budget: Option<String>,
        /// Use the naive clause variants
        #[arg(long)]
        naive: bool,
    },
    /// Compare a support query against its dual over the dual base
    Harmony {
        #[arg(long)]
        base: PathBuf,
        #[arg(long)]
        formula: String,
        #[arg(long)]
        polarity: String,
        /// Proof-side assumptions for the strong (inference-level) check
        #[arg(long)]
        proofs: Option<String>,
        /// Refutation-side assumptions for the strong check
        #[arg(long)]
        refutations: Option<String>,
        #[arg(long)]
        budget: Option<String>,
    },
    /// Check every proof in a directory against its expectation sidecar
    CorpusRun {
        /// Directory of `<name>.json` proofs with `<name>.expect.json` sidecars
        dir: PathBuf,
    },
}

struct CliError(String);

fn fail<T>(msg: impl Into<String>) -> Result<T, CliError> {
    Err(CliError(msg.into()))
}

struct Outcome {
    code: u8,
    human: String,
    json: Value,
    /// Set when the handler already wrote its own output files.
    handled_out: bool,
}

impl Outcome {
    fn new(code: u8, human: String, json: Value) -> Outcome {
        Outcome {
            code,
            human,
            json,
            handled_out: false,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_INPUT,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(outcome) => {
            let document = if cli.json {
                let mut pretty =
                    serde_json::to_string_pretty(&outcome.json).expect("verdicts serialize");
                pretty.push('\n');
                pretty
            } else {
                outcome.human.clone()
            };
            if outcome.handled_out {
                print!("{document}");
            } else if let Some(path) = &cli.out {
                if let Err(e) = fs::write(path, document) {
                    eprintln!("error: {}: {e}", path.display());
                    return ExitCode::from(EXIT_INPUT);
                }
            } else {
                print!("{document}");
            }
            ExitCode::from(outcome.code)
        }
        Err(e) => {
            eprintln!("error: {}", e.0);
            ExitCode::from(EXIT_INPUT)
        }
    }
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let mut outcome = match &cli.command {
        Command::CheckAtomic { base, deduction } => cmd_check_atomic(base, deduction),
        Command::Derive {
            base,
            goal,
            polarity,
            proofs,
            refutations,
        } => cmd_derive(base, goal, polarity, proofs.as_deref(), refutations.as_deref()),
        Command::CheckNd { proof } => cmd_check_nd(proof),
        Command::Dual {
            base,
            formula,
            deduction,
        } => cmd_dual(base.as_deref(), formula.as_deref(), deduction.as_deref()),
        Command::KripkeCheck {
            model,
            formula,
            polarity,
        } => cmd_kripke_check(model, formula.as_deref(), polarity.as_deref()),
        Command::KripkeCountermodel {
            formula,
            polarity,
            max_worlds,
            atoms,
        } => cmd_kripke_countermodel(formula, polarity, *max_worlds, atoms.as_deref()),
        Command::SimulateBuild { formulas, atoms } => {
            cmd_simulate_build(formulas, atoms.as_deref(), cli.out.as_deref())
        }
        Command::SimulateTranslate {
            formulas,
            proof,
            deduction,
            atoms,
        } => cmd_simulate_translate(formulas, proof.as_deref(), deduction.as_deref(), atoms.as_deref()),
        Command::BesSupport {
            base,
            formula,
            polarity,
            proofs,
            refutations,
            budget,
            naive,
        } => cmd_bes_support(
            base,
            formula,
            polarity,
            proofs.as_deref(),
            refutations.as_deref(),
            budget.as_deref(),
            *naive,
        ),
        Command::Harmony {
            base,
            formula,
            polarity,
            proofs,
            refutations,
            budget,
        } => cmd_harmony(
            base,
            formula,
            polarity,
            proofs.as_deref(),
            refutations.as_deref(),
            budget.as_deref(),
        ),
        Command::CorpusRun { dir } => cmd_corpus_run(dir),
    }?;
    if let Value::Object(map) = &mut outcome.json {
        map.insert("command".into(), json!(command_name(&cli.command)));
        if let Some(seed) = cli.seed {
            map.insert("seed".into(), json!(seed));
        }
    }
    Ok(outcome)
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::CheckAtomic { .. } => "check-atomic",
        Command::Derive { .. } => "derive",
        Command::CheckNd { .. } => "check-nd",
        Command::Dual { .. } => "dual",
        Command::KripkeCheck { .. } => "kripke-check",
        Command::KripkeCountermodel { .. } => "kripke-countermodel",
        Command::SimulateBuild { .. } => "simulate-build",
        Command::SimulateTranslate { .. } => "simulate-translate",
        Command::BesSupport { .. } => "bes-support",
        Command::Harmony { .. } => "harmony",
        Command::CorpusRun { .. } => "corpus-run",
    }
}

// ---------------------------------------------------------------------------
// Input helpers

fn load_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError(format!("{}: {e}", path.display())))
}

fn parse_polarity(s: &str) -> Result<Polarity, CliError> {
    match s {
        "+" | "plus" => Ok(Polarity::Plus),
        "-" | "minus" => Ok(Polarity::Minus),
        other => fail(format!("--polarity must be '+' or '-', got {other:?}")),
    }
}

fn parse_formula_arg(flag: &str, s: &str) -> Result<Formula, CliError> {
    s.parse::<Formula>()
        .map_err(|e| CliError(format!("{flag} {s:?}: {e}")))
}

fn parse_atom_arg(flag: &str, s: &str) -> Result<Atom, CliError> {
    Atom::new(s.trim()).map_err(|e| CliError(format!("{flag} {s:?}: {e}")))
}

fn parse_atom_csv(flag: &str, s: Option<&str>) -> Result<Vec<Atom>, CliError> {
    let mut out = Vec::new();
    if let Some(s) = s {
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            out.push(parse_atom_arg(flag, part)?);
        }
    }
    Ok(out)
}

fn parse_formula_csv(flag: &str, s: Option<&str>) -> Result<BTreeSet<Formula>, CliError> {
    let mut out = BTreeSet::new();
    if let Some(s) = s {
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            out.insert(parse_formula_arg(flag, part)?);
        }
    }
    Ok(out)
}

/// `a,r,p,d` or `a,r,p,d,cap`: extra atoms, extra rules, premises per rule,
/// discharges per premise, and optionally the candidate cap.
fn parse_budget(s: Option<&str>) -> Result<ExtensionBudget, CliError> {
    let mut budget = ExtensionBudget::default();
    let Some(s) = s else { return Ok(budget) };
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 4 && parts.len() != 5 {
        return fail(format!(
            "--budget expects a,r,p,d or a,r,p,d,cap, got {s:?}"
        ));
    }
    let nums: Result<Vec<u64>, _> = parts.iter().map(|p| p.parse::<u64>()).collect();
    let nums = nums.map_err(|e| CliError(format!("--budget {s:?}: {e}")))?;
    budget.extra_atoms = nums[0] as usize;
    budget.max_extra_rules = nums[1] as usize;
    budget.max_premises = nums[2] as usize;
    budget.max_discharge = nums[3] as usize;
    if let Some(&cap) = nums.get(4) {
        budget.cap = cap;
    }
    Ok(budget)
}

// ---------------------------------------------------------------------------
// Rendering

fn render_deduction(d: &AtomicDeduction, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match d {
        AtomicDeduction::Assume { atom, polarity } => {
            out.push_str(&format!("{pad}assume {atom} {polarity}\n"));
        }
        AtomicDeduction::Rule { rule, children } => {
            out.push_str(&format!("{pad}rule {rule}\n"));
            for c in children {
                render_deduction(c, indent + 1, out);
            }
        }
    }
}

fn verdict_label(v: &SupportVerdict) -> String {
    match v {
        SupportVerdict::Holds { .. } => "HOLDS".into(),
        SupportVerdict::Fails { witness } => match &witness.atom {
            Some(a) => format!("FAILS (clause {}, atom {a})", witness.clause),
            None => format!("FAILS (clause {})", witness.clause),
        },
        SupportVerdict::Unknown { exhausted, .. } => {
            if *exhausted {
                "UNKNOWN (bounded search exhausted, no violation found)".into()
            } else {
                "UNKNOWN (search cap reached)".into()
            }
        }
    }
}

fn verdict_detail(v: &SupportVerdict, base_rules: usize) -> String {
    let mut out = String::new();
    match v {
        SupportVerdict::Holds { justification } => {
            let seqs = justification.sequents();
            if !seqs.is_empty() {
                out.push_str("justified by:\n");
                for s in seqs {
                    out.push_str(&format!("  {s}\n"));
                }
            }
        }
        SupportVerdict::Fails { witness } => {
            let extra = witness.extension.rules.len().saturating_sub(base_rules);
            out.push_str(&format!("extension adds {extra} rule(s)\n"));
            if !witness.holding.is_empty() {
                out.push_str("holding at the extension:\n");
                for s in &witness.holding {
                    out.push_str(&format!("  {s}\n"));
                }
            }
            if !witness.failing.is_empty() {
                out.push_str("failing at the extension:\n");
                for s in &witness.failing {
                    out.push_str(&format!("  {s}\n"));
                }
            }
        }
        SupportVerdict::Unknown { .. } => {}
    }
    out
}

fn verdict_exit(v: &SupportVerdict) -> u8 {
    match v {
        SupportVerdict::Holds { .. } => EXIT_OK,
        SupportVerdict::Fails { .. } => EXIT_FAILED,
        SupportVerdict::Unknown { .. } => EXIT_UNKNOWN,
    }
}

// ---------------------------------------------------------------------------
// Commands

fn cmd_check_atomic(base_path: &Path, deduction_path: &Path) -> Result<Outcome, CliError> {
    let base: Base = load_json(base_path)?;
    let deduction: AtomicDeduction = load_json(deduction_path)?;
    match check_atomic(&base, &deduction) {
        Ok(sequent) => Ok(Outcome::new(
            EXIT_OK,
            format!("checked: {sequent}\n"),
            json!({"ok": true, "sequent": sequent}),
        )),
        Err(e) => Ok(Outcome::new(
            EXIT_FAILED,
            format!("check failed: {e}\n"),
            json!({"ok": false, "error": e.to_string()}),
        )),
    }
}

fn cmd_derive(
    base_path: &Path,
    goal: &str,
    polarity: &str,
    proofs: Option<&str>,
    refutations: Option<&str>,
) -> Result<Outcome, CliError> {
    let base: Base = load_json(base_path)?;
    let sequent = AtomicSequent::new(
        parse_atom_csv("--proofs", proofs)?,
        parse_atom_csv("--refutations", refutations)?,
        parse_polarity(polarity)?,
        parse_atom_arg("--goal", goal)?,
    );
    match derive_witness(&base, &sequent) {
        Some(witness) => {
            let mut human = format!("derivable: {sequent}\nwitness:\n");
            render_deduction(&witness, 1, &mut human);
            Ok(Outcome::new(
                EXIT_OK,
                human,
                json!({"derivable": true, "sequent": sequent, "witness": witness}),
            ))
        }
        None => Ok(Outcome::new(
            EXIT_FAILED,
            format!("not derivable: {sequent}\n"),
            json!({"derivable": false, "sequent": sequent, "witness": null}),
        )),
    }
}

fn cmd_check_nd(proof_path: &Path) -> Result<Outcome, CliError> {
    let proof: NdProof = load_json(proof_path)?;
    match check_nd(&proof) {
        Ok(judgment) => Ok(Outcome::new(
            EXIT_OK,
            format!("checked: {}\n", judgment),
            json!({"ok": true, "judgment": judgment}),
        )),
        Err(e) => Ok(Outcome::new(
            EXIT_FAILED,
            format!("check failed: {e}\n"),
            json!({"ok": false, "error": e.to_string()}),
        )),
    }
}

fn cmd_dual(
    base_path: Option<&Path>,
    formula: Option<&str>,
    deduction_path: Option<&Path>,
) -> Result<Outcome, CliError> {
    let given = [base_path.is_some(), formula.is_some(), deduction_path.is_some()]
        .iter()
        .filter(|b| **b)
        .count();
    if given != 1 {
        return fail("dual needs exactly one of --base, --formula, --deduction");
    }
    if let Some(path) = base_path {
        let base: Base = load_json(path)?;
        let dual = dual_base(&base);
        let mut human = serde_json::to_string_pretty(&dual).expect("bases serialize");
        human.push('\n');
        return Ok(Outcome::new(EXIT_OK, human, json!({"kind": "base", "result": dual})));
    }
    if let Some(src) = formula {
        let f = parse_formula_arg("--formula", src)?;
        let dual = dual_formula(&f);
        return Ok(Outcome::new(
            EXIT_OK,
            format!("{}\n", print_formula(&dual)),
            json!({"kind": "formula", "result": print_formula(&dual)}),
        ));
    }
    let path = deduction_path.expect("counted above");
    let deduction: AtomicDeduction = load_json(path)?;
    let dual = bilat_core::atomic::dual_deduction(&deduction);
    let mut human = String::new();
    render_deduction(&dual, 0, &mut human);
    Ok(Outcome::new(EXIT_OK, human, json!({"kind": "deduction", "result": dual})))
}

fn cmd_kripke_check(
    model_path: &Path,
    formula: Option<&str>,
    polarity: Option<&str>,
) -> Result<Outcome, CliError> {
    let raw: RawModel = load_json(model_path)?;
    let model = match validate_model(&raw) {
        Ok(m) => m,
        Err(e) => {
            return Ok(Outcome::new(
                EXIT_FAILED,
                format!("invalid model: {e}\n"),
                json!({"valid": false, "error": e.to_string()}),
            ))
        }
    };
    let worlds = model.worlds().len();
    match (formula, polarity) {
        (None, None) => Ok(Outcome::new(
            EXIT_OK,
            format!("model ok: {worlds} world(s)\n"),
            json!({"valid": true, "worlds": worlds}),
        )),
        (Some(f), Some(p)) => {
            let f = parse_formula_arg("--formula", f)?;
            let pol = parse_polarity(p)?;
            if model_valid(&model, pol, &f) {
                Ok(Outcome::new(
                    EXIT_OK,
                    format!("forced at every world: {} ({pol})\n", print_formula(&f)),
                    json!({"valid": true, "worlds": worlds, "forced": true}),
                ))
            } else {
                let failing = model
                    .worlds()
                    .iter()
                    .find(|w| !forces(&model, w, pol, &f).expect("world comes from the model"))
                    .cloned()
                    .expect("some world fails");
                Ok(Outcome::new(
                    EXIT_FAILED,
                    format!(
                        "not forced at world {failing}: {} ({pol})\n",
                        print_formula(&f)
                    ),
                    json!({"valid": true, "worlds": worlds, "forced": false, "failingWorld": failing}),
                ))
            }
        }
        _ => fail("kripke-check needs --formula and --polarity together"),
    }
}

fn cmd_kripke_countermodel(
    formula: &str,
    polarity: &str,
    max_worlds: usize,
    atoms: Option<&str>,
) -> Result<Outcome, CliError> {
    let f = parse_formula_arg("--formula", formula)?;
    let pol = parse_polarity(polarity)?;
    let universe: BTreeSet<Atom> = match atoms {
        Some(_) => parse_atom_csv("--atoms", atoms)?.into_iter().collect(),
        None => f.atoms(),
    };
    let empty = BTreeSet::new();
    match countermodel_search(&empty, &empty, pol, &f, max_worlds, &universe) {
        Ok(Some((model, witness))) => {
            let raw = model.to_raw();
            let mut human = format!(
                "countermodel found, {} not forced at world {witness}:\n",
                print_formula(&f)
            );
            human.push_str(&serde_json::to_string_pretty(&raw).expect("models serialize"));
            human.push('\n');
            Ok(Outcome::new(
                EXIT_FAILED,
                human,
                json!({"found": true, "model": raw, "witnessWorld": witness}),
            ))
        }
        Ok(None) => Ok(Outcome::new(
            EXIT_OK,
            format!(
                "no countermodel with up to {max_worlds} world(s) over {} atom(s)\n",
                universe.len()
            ),
            json!({"found": false, "model": null}),
        )),
        Err(e) => fail(format!("countermodel search: {e}")),
    }
}

fn parse_theta(formulas: &[String]) -> Result<BTreeSet<Formula>, CliError> {
    formulas
        .iter()
        .map(|s| parse_formula_arg("--formula", s))
        .collect()
}

fn spec_from(
    theta: BTreeSet<Formula>,
    atoms: Option<&str>,
) -> Result<SimulationSpec, CliError> {
    match atoms {
        Some(_) => Ok(SimulationSpec::with_universe(
            theta,
            parse_atom_csv("--atoms", atoms)?,
        )),
        None => SimulationSpec::new(theta).map_err(|e| CliError(e.to_string())),
    }
}

fn cmd_simulate_build(
    formulas: &[String],
    atoms: Option<&str>,
    out: Option<&Path>,
) -> Result<Outcome, CliError> {
    let spec = spec_from(parse_theta(formulas)?, atoms)?;
    let mapping = build_mapping(&spec.theta).map_err(|e| CliError(e.to_string()))?;
    let base = build_simulation_base(&spec).map_err(|e| CliError(e.to_string()))?;
    let combined = json!({"base": base, "mapping": mapping});
    // With --out the base goes to the named file and the mapping to a
    // `.mapping.json` sidecar next to it.
    if let Some(path) = out {
        let sidecar = sidecar_path(path);
        let base_doc = serde_json::to_string_pretty(&base).expect("bases serialize");
        let map_doc = serde_json::to_string_pretty(&mapping).expect("mappings serialize");
        fs::write(path, base_doc.clone() + "\n")
            .map_err(|e| CliError(format!("{}: {e}", path.display())))?;
        fs::write(&sidecar, map_doc + "\n")
            .map_err(|e| CliError(format!("{}: {e}", sidecar.display())))?;
        let mut outcome = Outcome::new(
            EXIT_OK,
            format!(
                "wrote {} ({} rules) and {}\n",
                path.display(),
                base.rules.len(),
                sidecar.display()
            ),
            json!({"base": path.display().to_string(), "mapping": sidecar.display().to_string(), "rules": base.rules.len()}),
        );
        outcome.handled_out = true;
        return Ok(outcome);
    }
    let mut human = serde_json::to_string_pretty(&combined).expect("serializes");
    human.push('\n');
    Ok(Outcome::new(EXIT_OK, human, combined))
}

fn sidecar_path(path: &Path) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "base".into());
    path.with_file_name(format!("{stem}.mapping.json"))
}

fn cmd_simulate_translate(
    formulas: &[String],
    proof: Option<&Path>,
    deduction: Option<&Path>,
    atoms: Option<&str>,
) -> Result<Outcome, CliError> {
    if proof.is_some() == deduction.is_some() {
        return fail("simulate-translate needs exactly one of --proof, --deduction");
    }
    let mut theta = parse_theta(formulas)?;
    if let Some(path) = proof {
        let nd: NdProof = load_json(path)?;
        if let Err(e) = check_nd(&nd) {
            return Ok(Outcome::new(
                EXIT_FAILED,
                format!("proof does not check: {e}\n"),
                json!({"ok": false, "error": e.to_string()}),
            ));
        }
        // The base must cover every formula the proof writes down, not just
        // the ones named on the command line.
        theta.extend(nd.formulas());
        let spec = spec_from(theta, atoms)?;
        let mapping = build_mapping(&spec.theta).map_err(|e| CliError(e.to_string()))?;
        let base = build_simulation_base(&spec).map_err(|e| CliError(e.to_string()))?;
        let translated =
            translate_nd_to_atomic(&nd, &mapping, &spec).map_err(|e| CliError(e.to_string()))?;
        let sequent = check_atomic(&base, &translated)
            .map_err(|e| CliError(format!("translated deduction failed to check: {e}")))?;
        let mut human = format!("atomic sequent: {sequent}\n");
        render_deduction(&translated, 0, &mut human);
        Ok(Outcome::new(
            EXIT_OK,
            human,
            json!({"direction": "nd-to-atomic", "result": translated, "sequent": sequent}),
        ))
    } else {
        if theta.is_empty() {
            return fail("simulate-translate --deduction needs at least one --formula");
        }
        let spec = spec_from(theta, atoms)?;
        let mapping = build_mapping(&spec.theta).map_err(|e| CliError(e.to_string()))?;
        let base = build_simulation_base(&spec).map_err(|e| CliError(e.to_string()))?;
        let path = deduction.expect("checked above");
        let atomic: AtomicDeduction = load_json(path)?;
        if let Err(e) = check_atomic(&base, &atomic) {
            return Ok(Outcome::new(
                EXIT_FAILED,
                format!("deduction does not check against the simulation base: {e}\n"),
                json!({"ok": false, "error": e.to_string()}),
            ));
        }
        let translated =
            translate_atomic_to_nd(&atomic, &mapping, &spec).map_err(|e| CliError(e.to_string()))?;
        let judgment = check_nd(&translated)
            .map_err(|e| CliError(format!("translated proof failed to check: {e}")))?;
        Ok(Outcome::new(
            EXIT_OK,
            format!("judgment: {}\n", judgment),
            json!({"direction": "atomic-to-nd", "result": translated, "judgment": judgment}),
        ))
    }
}

fn cmd_bes_support(
    base_path: &Path,
    formula: &str,
    polarity: &str,
    proofs: Option<&str>,
    refutations: Option<&str>,
    budget: Option<&str>,
    naive: bool,
) -> Result<Outcome, CliError> {
    let base: Base = load_json(base_path)?;
    let base_rules = base.rules.len();
    let query = SupportQuery {
        base,
        gamma: parse_formula_csv("--proofs", proofs)?,
        delta: parse_formula_csv("--refutations", refutations)?,
        polarity: parse_polarity(polarity)?,
        formula: parse_formula_arg("--formula", formula)?,
    };
    let budget = parse_budget(budget)?;
    let clauses = if naive {
        ClauseSet::Naive
    } else {
        ClauseSet::Standard
    };
    let verdict = support(&query, &budget, clauses);
    let mut human = format!("{}\n", verdict_label(&verdict));
    human.push_str(&verdict_detail(&verdict, base_rules));
    Ok(Outcome::new(
        verdict_exit(&verdict),
        human,
        json!({"verdict": verdict}),
    ))
}

fn harmony_label(r: &HarmonyReport) -> &'static str {
    if r.violation {
        "HARMONY-VIOLATION"
    } else {
        "CONSISTENT"
    }
}

fn cmd_harmony(
    base_path: &Path,
    formula: &str,
    polarity: &str,
    proofs: Option<&str>,
    refutations: Option<&str>,
    budget: Option<&str>,
) -> Result<Outcome, CliError> {
    let base: Base = load_json(base_path)?;
    let f = parse_formula_arg("--formula", formula)?;
    let pol = parse_polarity(polarity)?;
    let gamma = parse_formula_csv("--proofs", proofs)?;
    let delta = parse_formula_csv("--refutations", refutations)?;
    let budget = parse_budget(budget)?;
    let report = if gamma.is_empty() && delta.is_empty() {
        harmony_check(&base, pol, &f, &budget)
    } else {
        strong_harmony_check(&base, &gamma, &delta, pol, &f, &budget)
    };
    let human = format!(
        "{}\nprimal: {}\ndual:   {}\n",
        harmony_label(&report),
        verdict_label(&report.primal),
        verdict_label(&report.dual),
    );
    let code = if report.violation { EXIT_FAILED } else { EXIT_OK };
    Ok(Outcome::new(code, human, json!({"report": report})))
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase")]
struct Expectation {
    #[serde(default)]
    gamma: Vec<String>,
    #[serde(default)]
    delta: Vec<String>,
    polarity: Polarity,
    conclusion: String,
}

fn expectation_judgment(e: &Expectation) -> Result<NdJudgment, String> {
    let parse = |s: &String| s.parse::<Formula>().map_err(|err| format!("{s:?}: {err}"));
    let gamma: Result<BTreeSet<Formula>, String> = e.gamma.iter().map(parse).collect();
    let delta: Result<BTreeSet<Formula>, String> = e.delta.iter().map(parse).collect();
    Ok(NdJudgment {
        gamma: gamma?,
        delta: delta?,
        polarity: e.polarity,
        conclusion: parse(&e.conclusion)?,
    })
}

fn cmd_corpus_run(dir: &Path) -> Result<Outcome, CliError> {
    let entries = fs::read_dir(dir).map_err(|e| CliError(format!("{}: {e}", dir.display())))?;
    let mut files: Vec<PathBuf> = Vec::new();
    for entry in entries {
        let path = entry
            .map_err(|e| CliError(format!("{}: {e}", dir.display())))?
            .path();
        let name = path.file_name().map(|n| n.to_string_lossy().into_owned());
        if let Some(name) = name {
            if name.ends_with(".json") && !name.ends_with(".expect.json") {
                files.push(path);
            }
        }
    }
    files.sort();

    struct Row {
        file: String,
        status: Result<String, String>,
    }
    let mut rows: Vec<Row> = Vec::new();
    for path in &files {
        let file = path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default();
        let status = check_corpus_entry(path);
        rows.push(Row { file, status });
    }

    let checked = rows.len();
    let passed = rows.iter().filter(|r| r.status.is_ok()).count();
    let width = rows.iter().map(|r| r.file.len()).max().unwrap_or(4).max(4);
    let mut human = String::new();
    human.push_str(&format!("{:<width$}  {:<6}  detail\n", "file", "status"));
    for row in &rows {
        match &row.status {
            Ok(judgment) => {
                human.push_str(&format!("{:<width$}  {:<6}  {}\n", row.file, "pass", judgment));
            }
            Err(reason) => {
                human.push_str(&format!("{:<width$}  {:<6}  {}\n", row.file, "FAIL", reason));
            }
        }
    }
    human.push_str(&format!(
        "checked {checked}, passed {passed}, failed {}\n",
        checked - passed
    ));
    let failures: Vec<Value> = rows
        .iter()
        .filter_map(|r| {
            r.status
                .as_ref()
                .err()
                .map(|reason| json!({"file": r.file, "reason": reason}))
        })
        .collect();
    let code = if failures.is_empty() { EXIT_OK } else { EXIT_FAILED };
    Ok(Outcome::new(
        code,
        human,
        json!({"checked": checked, "passed": passed, "failures": failures}),
    ))
}

fn check_corpus_entry(path: &Path) -> Result<String, String> {
    let sidecar = {
        let name = path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default();
        let stem = name.trim_end_matches(".json");
        path.with_file_name(format!("{stem}.expect.json"))
    };
    if !sidecar.exists() {
        return Err(format!("missing sidecar {}", sidecar.display()));
    }
    let proof_text =
        fs::read_to_string(path).map_err(|e| format!("unreadable proof: {e}"))?;
    let proof: NdProof =
        serde_json::from_str(&proof_text).map_err(|e| format!("bad proof JSON: {e}"))?;
    let expect_text =
        fs::read_to_string(&sidecar).map_err(|e| format!("unreadable sidecar: {e}"))?;
    let expectation: Expectation =
        serde_json::from_str(&expect_text).map_err(|e| format!("bad sidecar JSON: {e}"))?;
    let expected = expectation_judgment(&expectation).map_err(|e| format!("bad sidecar: {e}"))?;
    let judgment = check_nd(&proof).map_err(|e| format!("check failed: {e}"))?;
    if judgment != expected {
        return Err(format!(
            "judgment mismatch: got {judgment}, expected {expected}"
        ));
    }
    Ok(judgment.to_string())
}
