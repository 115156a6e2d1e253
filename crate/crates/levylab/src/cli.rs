//! The command-line interface.
//!
//! Exit codes: 0 on success, 1 on analysis rejection (an `--expect`
//! mismatch, corpus drift, or suite violations), 2 on input errors.
//! Malformed input is reported with positions on stderr, never a panic.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::json;

use crate::ast::Formula;
use crate::classify::{classify, is_ordinal_bounded_only, RuleSet};
use crate::corpus::{
    check_corpus_expectations, corpus, corpus_entry, corpus_registry, evaluable_formulas,
    render_formula_file, render_manifest,
};
use crate::hf::{absoluteness_suite, build_v, eval_with_budget, Assignment, HfSet, DEFAULT_EVAL_BUDGET};
use crate::parser::parse;
use crate::printer::print;
use crate::registry::Registry;
use crate::report::Report;
use crate::transfer::{check_transfer, ParameterDeclaration, TransferOutcome};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ANALYSIS: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

/// Work-budget override for formula evaluation.
pub const BUDGET_ENV_VAR: &str = "LEVYLAB_BUDGET";

#[derive(Parser)]
#[command(
    name = "levylab",
    version,
    about = "Classify set-theory formulas in the Levy hierarchy, gate them for choice elimination, and check them over finite transitive models"
)]
struct Cli {
    /// Emit one machine-readable JSON report on stdout.
    #[arg(long, global = true)]
    json: bool,
    /// Merge a predicate registry file over the built-ins.
    #[arg(long, global = true, value_name = "FILE")]
    registry: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a formula and echo its canonical form.
    Parse {
        /// Formula file path, or corpus:<id>.
        source: String,
    },
    /// Compute the Levy-hierarchy upper bound.
    Classify {
        source: String,
        /// Bounded-quantifier rules: zf or minimal.
        #[arg(long, default_value = "zf")]
        rules: String,
        /// Print the derivation trace.
        #[arg(long)]
        trace: bool,
    },
    /// Decide the choice-elimination transfer gate.
    Transfer {
        source: String,
        /// Parameter declarations, e.g. k:ordinal,s:ordinal-tuple-set.
        #[arg(long, value_name = "DECLS")]
        params: Option<String>,
        /// Fail (exit 1) unless the verdict matches: eliminable or not-applicable.
        #[arg(long, value_name = "VERDICT")]
        expect: Option<String>,
    },
    /// Evaluate a formula by brute force over a cumulative stage.
    Eval {
        source: String,
        /// Stage model, v0 through v5.
        #[arg(long, value_name = "v<k>")]
        model: String,
        /// Assignment for free variables as Ackermann codes, e.g. x=3,y=0.
        #[arg(long, value_name = "VAR=CODE,...")]
        assign: Option<String>,
    },
    /// Run the absoluteness suite over the evaluable corpus.
    Suite {
        /// Universe stage, v0 through v5.
        #[arg(long, value_name = "v<k>")]
        universe: String,
        /// Maximum number of sampled transitive pairs.
        #[arg(long)]
        budget: usize,
    },
    /// Inspect or verify the statement corpus.
    Corpus {
        #[command(subcommand)]
        action: CorpusCmd,
    },
}

#[derive(Subcommand)]
enum CorpusCmd {
    /// List entry ids with their golden expectations.
    List,
    /// Print one entry in full.
    Show { id: String },
    /// Verify corpus files, manifest, and golden expectations.
    Check {
        /// Regenerate the files and manifest instead of checking.
        #[arg(long)]
        bless: bool,
        /// Corpus directory.
        #[arg(long, default_value = "corpus")]
        dir: PathBuf,
    },
}

/// Runs the CLI on the given argv (including the program name) and returns
/// the process exit code.
pub fn run_cli<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{e}");
                    EXIT_OK
                }
                _ => {
                    eprint!("{e}");
                    EXIT_INPUT
                }
            };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            EXIT_INPUT
        }
    }
}

// A loaded formula with the registry and declarations that govern it.
struct Source {
    formula: Formula,
    registry: Registry,
    params: Vec<ParameterDeclaration>,
    label: String,
}

fn load_registry(extra: Option<&Path>, base: Registry) -> Result<Registry, String> {
    let mut registry = base;
    if let Some(path) = extra {
        let text = fs::read_to_string(path)
            .map_err(|e| format!("cannot read registry {}: {e}", path.display()))?;
        registry
            .load_str(&text)
            .map_err(|e| format!("{}: {e}", path.display()))?;
    }
    Ok(registry)
}

fn load_source(source: &str, extra_registry: Option<&Path>) -> Result<Source, String> {
    if let Some(id) = source.strip_prefix("corpus:") {
        let entry =
            corpus_entry(id).ok_or_else(|| format!("no corpus entry with id `{id}`"))?;
        let registry = load_registry(extra_registry, corpus_registry())?;
        return Ok(Source {
            formula: entry.formula,
            registry,
            params: entry.params,
            label: source.to_string(),
        });
    }
    let text = fs::read_to_string(source).map_err(|e| format!("cannot read {source}: {e}"))?;
    let registry = load_registry(extra_registry, Registry::with_builtins())?;
    let mut params = Vec::new();
    for line in text.lines() {
        if let Some(decls) = line.trim().strip_prefix("# params:") {
            params = ParameterDeclaration::parse_list(decls).map_err(|e| format!("{source}: {e}"))?;
        }
    }
    let formula = parse(&text, &registry).map_err(|e| format!("{source}:{e}"))?;
    Ok(Source {
        formula,
        registry,
        params,
        label: source.to_string(),
    })
}

fn parse_model(spec: &str) -> Result<crate::hf::TransitiveModel, String> {
    let rank: u32 = spec
        .strip_prefix('v')
        .and_then(|r| r.parse().ok())
        .ok_or_else(|| format!("malformed model `{spec}` (expected v0..v5)"))?;
    build_v(rank).map_err(|e| e.to_string())
}

fn parse_assignment(
    text: &str,
    model: &crate::hf::TransitiveModel,
) -> Result<Assignment, String> {
    let mut assignment = Assignment::new();
    for piece in text.split(',') {
        let piece = piece.trim();
        if piece.is_empty() {
            continue;
        }
        let (name, code) = piece
            .split_once('=')
            .ok_or_else(|| format!("malformed assignment `{piece}`"))?;
        if !crate::ast::is_identifier(name.trim()) {
            return Err(format!("invalid variable `{}`", name.trim()));
        }
        let code: u64 = code
            .trim()
            .parse()
            .map_err(|_| format!("malformed code in `{piece}`"))?;
        let value = HfSet::from_code(code);
        if !model.contains(&value) {
            return Err(format!("code {code} is not an element of the model"));
        }
        assignment.insert(crate::ast::Variable::new(name.trim()), value);
    }
    Ok(assignment)
}

fn eval_budget() -> Result<u64, String> {
    match std::env::var(BUDGET_ENV_VAR) {
        Ok(value) => value
            .parse()
            .map_err(|_| format!("{BUDGET_ENV_VAR} must be a positive integer, got `{value}`")),
        Err(_) => Ok(DEFAULT_EVAL_BUDGET),
    }
}

fn run(cli: Cli) -> Result<i32, String> {
    let registry_path = cli.registry.as_deref();
    match cli.command {
        Command::Parse { source } => {
            let loaded = load_source(&source, registry_path)?;
            let canonical = print(&loaded.formula);
            if cli.json {
                let report = Report::new("parse")
                    .input("source", &loaded.label)
                    .results(json!({ "canonical": canonical }));
                print!("{}", report.render());
            } else {
                println!("{canonical}");
            }
            Ok(EXIT_OK)
        }
        Command::Classify {
            source,
            rules,
            trace,
        } => {
            let rule_set: RuleSet = rules.parse()?;
            let loaded = load_source(&source, registry_path)?;
            let (class, derivation) = classify(&loaded.formula, rule_set, &loaded.registry)
                .map_err(|e| format!("{}: {e}", loaded.label))?;
            let trace_lines = if trace {
                derivation.render_lines()
            } else {
                Vec::new()
            };
            if cli.json {
                let report = Report::new("classify")
                    .input("source", &loaded.label)
                    .input("rules", rule_set.name())
                    .results(json!({
                        "class": class.to_string(),
                        "ordinal_bounded_only": is_ordinal_bounded_only(&loaded.formula),
                    }))
                    .traces(trace_lines);
                print!("{}", report.render());
            } else {
                println!("{class}");
                for line in &trace_lines {
                    println!("{line}");
                }
            }
            Ok(EXIT_OK)
        }
        Command::Transfer {
            source,
            params,
            expect,
        } => {
            let expected: Option<TransferOutcome> = match expect.as_deref() {
                Some(text) => Some(text.parse()?),
                None => None,
            };
            let loaded = load_source(&source, registry_path)?;
            let params = match params.as_deref() {
                Some(decls) => ParameterDeclaration::parse_list(decls)?,
                None => loaded.params.clone(),
            };
            let verdict = check_transfer(&loaded.formula, &params, &loaded.registry)
                .map_err(|e| format!("{}: {e}", loaded.label))?;
            if cli.json {
                let report = Report::new("transfer")
                    .input("source", &loaded.label)
                    .input(
                        "params",
                        params
                            .iter()
                            .map(|p| format!("{}:{}", p.variable, p.sort.name()))
                            .collect::<Vec<_>>()
                            .join(","),
                    )
                    .results(json!({
                        "outcome": verdict.outcome.to_string(),
                        "reason": verdict.reason,
                        "stripped_prefix": verdict
                            .stripped_prefix
                            .iter()
                            .map(ToString::to_string)
                            .collect::<Vec<_>>(),
                        "matrix_class": verdict.matrix_class.to_string(),
                    }))
                    .traces(verdict.absoluteness_trace.clone());
                print!("{}", report.render());
            } else {
                match &verdict.reason {
                    Some(reason) => println!("{}: {reason}", verdict.outcome),
                    None => println!("{}", verdict.outcome),
                }
                println!(
                    "stripped prefix: [{}]",
                    verdict
                        .stripped_prefix
                        .iter()
                        .map(ToString::to_string)
                        .collect::<Vec<_>>()
                        .join(", ")
                );
                println!("matrix class: {}", verdict.matrix_class);
                for line in &verdict.absoluteness_trace {
                    println!("{line}");
                }
            }
            match expected {
                Some(want) if want != verdict.outcome => Ok(EXIT_ANALYSIS),
                _ => Ok(EXIT_OK),
            }
        }
        Command::Eval {
            source,
            model,
            assign,
        } => {
            let loaded = load_source(&source, registry_path)?;
            let model = parse_model(&model)?;
            let assignment = match assign.as_deref() {
                Some(text) => parse_assignment(text, &model)?,
                None => Assignment::new(),
            };
            let budget = eval_budget()?;
            let truth = eval_with_budget(&model, &loaded.formula, &assignment, &loaded.registry, budget)
                .map_err(|e| format!("{}: {e}", loaded.label))?;
            if cli.json {
                let report = Report::new("eval")
                    .input("source", &loaded.label)
                    .input("model_size", model.len().to_string())
                    .results(json!({ "truth": truth }));
                print!("{}", report.render());
            } else {
                println!("{truth}");
            }
            Ok(EXIT_OK)
        }
        Command::Suite { universe, budget } => {
            let model = parse_model(&universe)?;
            let registry = load_registry(registry_path, corpus_registry())?;
            let formulas = evaluable_formulas();
            let report = absoluteness_suite(&model, &formulas, budget, &registry)
                .map_err(|e| e.to_string())?;
            let violations = report.violation_count();
            if cli.json {
                let records: Vec<_> = report
                    .records
                    .iter()
                    .map(|r| {
                        json!({
                            "formula": r.formula_id,
                            "pair": r.pair_id,
                            "class": r.class.to_string(),
                            "direction": format!("{:?}", r.direction),
                            "inner": r.inner_truth,
                            "outer": r.outer_truth,
                            "violation": r.violation,
                        })
                    })
                    .collect();
                let doc = Report::new("suite")
                    .input("universe", &universe)
                    .input("budget", budget.to_string())
                    .results(json!({
                        "pairs": report.pair_count,
                        "checks": report.records.len(),
                        "violations": violations,
                        "records": records,
                    }));
                print!("{}", doc.render());
            } else {
                println!(
                    "pairs={} checks={} violations={}",
                    report.pair_count,
                    report.records.len(),
                    violations
                );
                for record in report.violations() {
                    println!(
                        "violation: {} on {} ({} {:?}): inner={} outer={}",
                        record.formula_id,
                        record.pair_id,
                        record.class,
                        record.direction,
                        record.inner_truth,
                        record.outer_truth
                    );
                }
            }
            Ok(if violations == 0 { EXIT_OK } else { EXIT_ANALYSIS })
        }
        Command::Corpus { action } => run_corpus(action, cli.json),
    }
}

fn run_corpus(action: CorpusCmd, json: bool) -> Result<i32, String> {
    match action {
        CorpusCmd::List => {
            let entries = corpus();
            if json {
                let list: Vec<_> = entries
                    .iter()
                    .map(|e| {
                        json!({
                            "id": e.id,
                            "class": e.expected_class.to_string(),
                            "ordinal_bounded_only": e.expected_ord_bounded_only,
                            "transfer": e.expected_transfer.to_string(),
                            "evaluable": e.evaluable,
                            "provenance": e.provenance,
                        })
                    })
                    .collect();
                let report = Report::new("corpus-list").results(json!({ "entries": list }));
                print!("{}", report.render());
            } else {
                for e in &entries {
                    println!(
                        "{}\t{}\t{}\t{}\t{}",
                        e.id,
                        e.expected_class,
                        e.expected_ord_bounded_only,
                        e.expected_transfer,
                        e.evaluable
                    );
                }
            }
            Ok(EXIT_OK)
        }
        CorpusCmd::Show { id } => {
            let entry = corpus_entry(&id).ok_or_else(|| format!("no corpus entry `{id}`"))?;
            if json {
                let report = Report::new("corpus-show")
                    .input("id", entry.id)
                    .results(json!({
                        "id": entry.id,
                        "formula": print(&entry.formula),
                        "params": entry
                            .params
                            .iter()
                            .map(|p| format!("{}:{}", p.variable, p.sort.name()))
                            .collect::<Vec<_>>(),
                        "class": entry.expected_class.to_string(),
                        "ordinal_bounded_only": entry.expected_ord_bounded_only,
                        "transfer": entry.expected_transfer.to_string(),
                        "evaluable": entry.evaluable,
                        "provenance": entry.provenance,
                    }));
                print!("{}", report.render());
            } else {
                println!("id: {}", entry.id);
                println!("provenance: {}", entry.provenance);
                println!("class: {}", entry.expected_class);
                println!("ordinal-bounded only: {}", entry.expected_ord_bounded_only);
                println!("transfer: {}", entry.expected_transfer);
                println!("evaluable: {}", entry.evaluable);
                if !entry.params.is_empty() {
                    println!(
                        "params: {}",
                        entry
                            .params
                            .iter()
                            .map(|p| format!("{}:{}", p.variable, p.sort.name()))
                            .collect::<Vec<_>>()
                            .join(",")
                    );
                }
                println!("{}", print(&entry.formula));
            }
            Ok(EXIT_OK)
        }
        CorpusCmd::Check { bless, dir } => {
            let entries = corpus();
            if bless {
                fs::create_dir_all(&dir)
                    .map_err(|e| format!("cannot create {}: {e}", dir.display()))?;
                for entry in &entries {
                    let path = dir.join(format!("{}.fml", entry.id));
                    fs::write(&path, render_formula_file(entry))
                        .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
                }
                let manifest = dir.join("manifest.tsv");
                fs::write(&manifest, render_manifest(&entries))
                    .map_err(|e| format!("cannot write {}: {e}", manifest.display()))?;
                if json {
                    let report = Report::new("corpus-bless")
                        .input("dir", dir.display().to_string())
                        .results(json!({ "entries": entries.len() }));
                    print!("{}", report.render());
                } else {
                    println!("blessed {} entries into {}", entries.len(), dir.display());
                }
                return Ok(EXIT_OK);
            }

            let mut problems: Vec<String> = Vec::new();
            for mismatch in check_corpus_expectations() {
                problems.push(format!(
                    "{}: {} expected {}, computed {}",
                    mismatch.id, mismatch.field, mismatch.expected, mismatch.actual
                ));
            }
            let manifest_path = dir.join("manifest.tsv");
            match fs::read_to_string(&manifest_path) {
                Ok(on_disk) if on_disk == render_manifest(&entries) => {}
                Ok(_) => problems.push(format!("{} differs; re-bless", manifest_path.display())),
                Err(e) => problems.push(format!("cannot read {}: {e}", manifest_path.display())),
            }
            for entry in &entries {
                let path = dir.join(format!("{}.fml", entry.id));
                match fs::read_to_string(&path) {
                    Ok(on_disk) if on_disk == render_formula_file(entry) => {}
                    Ok(_) => problems.push(format!("{} differs; re-bless", path.display())),
                    Err(e) => problems.push(format!("cannot read {}: {e}", path.display())),
                }
            }
            if json {
                let report = Report::new("corpus-check")
                    .input("dir", dir.display().to_string())
                    .results(json!({
                        "entries": entries.len(),
                        "ok": problems.is_empty(),
                        "problems": problems,
                    }));
                print!("{}", report.render());
            } else if problems.is_empty() {
                println!("ok ({} entries)", entries.len());
            } else {
                for problem in &problems {
                    println!("mismatch: {problem}");
                }
            }
            Ok(if problems.is_empty() {
                EXIT_OK
            } else {
                EXIT_ANALYSIS
            })
        }
    }
}

