//! The `okwa` command line: machine-readable JSON on stdout, a short human
//! summary on stderr. Exit codes: 0 on success, 1 on a domain error, 2 on a
//! usage error.
//!
//! Every positional document accepts either a path or inline JSON (anything
//! starting with `{` or `[`). Automaton documents may carry their field
//! inline or as a path under the `"field"` key; subcommands that also take a
//! field argument use that argument instead.

use crate::fixtures;
use crate::ideals::{self, Ideal};
use crate::json::{self, FieldSource};
use crate::learn::{self, LearnOptions, SimulatedTeacher};
use crate::numfield::FieldRef;
use crate::okmodules;
use crate::transform::{transform, TransformOutcome};
use crate::wautomata::{self, WeightedAutomaton};
use crate::zlattice;
use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "okwa",
    about = "Exact weighted automata over rings of algebraic integers",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Column Hermite normal form of an integer matrix
    Hnf {
        /// Matrix document: array of rows of integer strings
        matrix: String,
        /// Also print the unimodular transform U with A·U = [0 | H]
        #[arg(long)]
        transform: bool,
    },
    /// Fractional ideal arithmetic
    Ideal {
        /// One of: add, mul, inv, norm, contains, refine, two-element, crt
        op: String,
        /// Field document
        field: String,
        /// Ideal/element documents, as required by the operation
        args: Vec<String>,
    },
    /// Pseudo-Hermite normal form of a pseudo-matrix
    Phnf {
        field: String,
        pseudo_matrix: String,
    },
    /// Value of an automaton on a word
    Eval {
        automaton: String,
        /// Word over the automaton alphabet, e.g. "abba" (empty for ε)
        #[arg(default_value = "")]
        word: String,
        #[arg(long)]
        field: Option<String>,
    },
    /// Minimal automaton over the field
    Minimize {
        automaton: String,
        #[arg(long)]
        field: Option<String>,
    },
    /// Equivalence of two automata, with the least counterexample
    Equiv {
        left: String,
        right: String,
        #[arg(long)]
        field: Option<String>,
    },
    /// Equivalent integral automaton or a non-integral witness word
    Transform {
        field: String,
        automaton: String,
    },
    /// Learn an integral automaton from a simulated teacher
    Learn {
        field: String,
        /// Target automaton the simulated teacher answers from
        #[arg(long)]
        target: String,
        #[arg(long, default_value_t = 64)]
        max_dim: usize,
        /// Also write the statistics JSON to this path
        #[arg(long)]
        stats: Option<String>,
    },
    /// Reference and random automata
    Fixture {
        #[command(subcommand)]
        which: FixtureCommand,
    },
}

#[derive(Subcommand)]
enum FixtureCommand {
    /// The worked example: K = Q(i√5), the ideal (3, 2 − i√5)
    Example1,
    /// Ideal-encoding automaton for an integral ideal
    PipIdeal { field: String, ideal: String },
    /// Seeded random integral automaton
    Random {
        field: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        states: usize,
        #[arg(long, default_value = "ab")]
        alphabet: String,
        #[arg(long, default_value_t = 3)]
        coeff_bound: i64,
    },
    /// Brute-force single-generator search (test oracle)
    PrincipalBruteforce {
        field: String,
        ideal: String,
        #[arg(long, default_value_t = 10)]
        coeff_bound: i64,
    },
}

#[derive(Debug)]
struct CliError(String);

impl<E: std::fmt::Display> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError(e.to_string())
    }
}

/// Runs the command line; returns the process exit code.
pub fn run_cli(argv: Vec<String>) -> i32 {
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(out) => {
            println!("{}", serde_json::to_string_pretty(&out).unwrap());
            0
        }
        Err(CliError(msg)) => {
            eprintln!("error: {msg}");
            1
        }
    }
}

/// Reads a document argument: inline JSON or a file path.
fn load_doc(arg: &str) -> Result<Value, CliError> {
    let text = if arg.trim_start().starts_with(['{', '[']) {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|e| CliError(format!("{arg}: {e}")))?
    };
    Ok(serde_json::from_str(&text)?)
}

fn load_field(arg: &str) -> Result<FieldRef, CliError> {
    Ok(json::field_from_json(&load_doc(arg)?)?)
}

/// Resolves an automaton document against an optional explicit field.
fn load_automaton(arg: &str, field: Option<&FieldRef>) -> Result<WeightedAutomaton, CliError> {
    let doc = load_doc(arg)?;
    let field = match field {
        Some(f) => f.clone(),
        None => match json::automaton_field_source(&doc) {
            FieldSource::Inline(v) => json::field_from_json(&v)?,
            FieldSource::Path(p) => load_field(&p)?,
            FieldSource::Absent => {
                return Err(CliError(
                    "automaton document has no field; pass one explicitly".into(),
                ))
            }
        },
    };
    Ok(json::automaton_from_json(&doc, &field)?)
}

fn stats_json(stats: &crate::transform::TransformStats) -> Value {
    json!({
        "schema": "okwa-transform-stats-v1",
        "rank": stats.rank,
        "phase2_iters": stats.phase2_iters,
        "chain_bound": stats.chain_bound,
        "extra_state": stats.extra_state,
    })
}

fn learn_stats_json(stats: &learn::LearnStats) -> Value {
    json!({
        "schema": "okwa-learn-stats-v1",
        "value_queries": stats.value_queries,
        "equivalence_queries": stats.equivalence_queries,
        "teacher_equivalence_queries": stats.teacher_equivalence_queries,
        "counterexample_lengths": stats.counterexample_lengths,
        "max_counterexample_len": stats.max_counterexample_len(),
        "rank": stats.rank,
        "phase2_total": stats.phase2_total,
        "chain_bound_total": stats.chain_bound_total,
    })
}

fn dispatch(cmd: Command) -> Result<Value, CliError> {
    match cmd {
        Command::Hnf { matrix, transform: want_u } => {
            let m = json::intmatrix_from_json(&load_doc(&matrix)?)?;
            let r = zlattice::hnf(&m, want_u);
            eprintln!("hnf: rank {}", r.rank());
            let mut out = json!({
                "h": json::intmatrix_to_json(&r.h),
                "pivots": r.pivot_map,
            });
            if let Some(u) = &r.transform {
                out["transform"] = json::intmatrix_to_json(u);
            }
            Ok(out)
        }
        Command::Ideal { op, field, args } => ideal_command(&op, &field, &args),
        Command::Phnf { field, pseudo_matrix } => {
            let f = load_field(&field)?;
            let m = json::pseudomatrix_from_json(&f, &load_doc(&pseudo_matrix)?)?;
            let basis = okmodules::pseudo_hnf(&m)?;
            let det = okmodules::determinantal_ideal(&m)?;
            eprintln!(
                "pseudo-hnf: rank {}, determinantal ideal of norm {}",
                basis.elems.len(),
                json::format_rational(&det.norm())
            );
            Ok(json!({
                "basis": json::pseudomatrix_to_json(&basis),
                "determinantal_ideal": json::ideal_to_json(&det),
            }))
        }
        Command::Eval { automaton, word, field } => {
            let f = field.as_deref().map(load_field).transpose()?;
            let a = load_automaton(&automaton, f.as_ref())?;
            let w = wautomata::parse_word(&a.alphabet, &word)?;
            let v = a.eval(&w)?;
            eprintln!("eval: |w| = {}", w.len());
            Ok(json!({ "value": json::algnum_to_json(&v) }))
        }
        Command::Minimize { automaton, field } => {
            let f = field.as_deref().map(load_field).transpose()?;
            let a = load_automaton(&automaton, f.as_ref())?;
            let m = wautomata::minimize_k(&a)?;
            eprintln!("minimize: {} -> {} states", a.n_states, m.n_states);
            Ok(json::automaton_to_json(&m))
        }
        Command::Equiv { left, right, field } => {
            let f = field.as_deref().map(load_field).transpose()?;
            let a = load_automaton(&left, f.as_ref())?;
            let b = load_automaton(&right, f.as_ref())?;
            match wautomata::equiv_counterexample(&a, &b)? {
                None => {
                    eprintln!("equiv: equivalent");
                    Ok(json!({ "equivalent": true }))
                }
                Some(w) => {
                    eprintln!("equiv: differ on a word of length {}", w.len());
                    Ok(json!({
                        "equivalent": false,
                        "counterexample": wautomata::word_to_string(&a.alphabet, &w),
                    }))
                }
            }
        }
        Command::Transform { field, automaton } => {
            let f = load_field(&field)?;
            let a = load_automaton(&automaton, Some(&f))?;
            match transform(&a)? {
                TransformOutcome::Counterexample(w) => {
                    eprintln!("transform: non-integral value at a word of length {}", w.len());
                    Ok(json!({
                        "counterexample": wautomata::word_to_string(&a.alphabet, &w),
                    }))
                }
                TransformOutcome::Automaton { automaton, stats } => {
                    eprintln!(
                        "transform: {} states (rank {}, extra state: {})",
                        automaton.n_states, stats.rank, stats.extra_state
                    );
                    Ok(json!({
                        "automaton": json::automaton_to_json(&automaton),
                        "stats": stats_json(&stats),
                    }))
                }
            }
        }
        Command::Learn { field, target, max_dim, stats } => {
            let f = load_field(&field)?;
            let target = load_automaton(&target, Some(&f))?;
            let mut teacher = SimulatedTeacher::new(target);
            let opts = LearnOptions { max_dim, ..LearnOptions::default() };
            let out = learn::learn_ok(&mut teacher, &opts)?;
            eprintln!(
                "learn: {} states, {} value queries, {} equivalence queries",
                out.automaton.n_states, out.stats.value_queries, out.stats.equivalence_queries
            );
            let sj = learn_stats_json(&out.stats);
            if let Some(path) = stats {
                std::fs::write(&path, serde_json::to_string_pretty(&sj).unwrap())
                    .map_err(|e| CliError(format!("{path}: {e}")))?;
            }
            Ok(json!({
                "automaton": json::automaton_to_json(&out.automaton),
                "stats": sj,
            }))
        }
        Command::Fixture { which } => fixture_command(which),
    }
}

fn ideal_command(op: &str, field: &str, args: &[String]) -> Result<Value, CliError> {
    let f = load_field(field)?;
    let ideal_arg = |i: usize| -> Result<Ideal, CliError> {
        let arg = args.get(i).ok_or_else(|| CliError(format!("missing argument {}", i + 1)))?;
        Ok(json::ideal_from_json(&f, &load_doc(arg)?)?)
    };
    let element_arg = |i: usize| -> Result<crate::numfield::AlgNum, CliError> {
        let arg = args.get(i).ok_or_else(|| CliError(format!("missing argument {}", i + 1)))?;
        Ok(json::algnum_from_json(&f, &load_doc(arg)?)?)
    };
    let summarize = |what: &str, r: &Ideal| {
        eprintln!("ideal {what}: norm {}", json::format_rational(&r.norm()));
    };
    match op {
        "add" => {
            let r = ideal_arg(0)?.add(&ideal_arg(1)?);
            summarize("add", &r);
            Ok(json::ideal_to_json(&r))
        }
        "mul" => {
            let r = ideal_arg(0)?.mul(&ideal_arg(1)?);
            summarize("mul", &r);
            Ok(json::ideal_to_json(&r))
        }
        "inv" => {
            let r = ideal_arg(0)?.inverse();
            summarize("inv", &r);
            Ok(json::ideal_to_json(&r))
        }
        "norm" => {
            let n = ideal_arg(0)?.norm();
            Ok(json!({ "norm": json::format_rational(&n) }))
        }
        "contains" => {
            let a = ideal_arg(0)?;
            let x = element_arg(1)?;
            Ok(json!({ "contains": a.contains(&x) }))
        }
        "refine" => {
            let inputs = (0..args.len())
                .map(ideal_arg)
                .collect::<Result<Vec<_>, _>>()?;
            let (basis, exps) = ideals::factor_refine(&inputs)?;
            eprintln!("ideal refine: {} inputs into {} coprime factors", inputs.len(), basis.len());
            Ok(json!({
                "basis": basis.iter().map(json::ideal_to_json).collect::<Vec<_>>(),
                "exponents": exps,
            }))
        }
        "two-element" => {
            let (x1, x2) = ideals::two_element(&ideal_arg(0)?)?;
            Ok(json!({ "x1": json::algnum_to_json(&x1), "x2": json::algnum_to_json(&x2) }))
        }
        "crt" => {
            if args.len() % 2 != 0 || args.is_empty() {
                return Err(CliError("crt expects pairs: modulus residue …".into()));
            }
            let half = args.len() / 2;
            let moduli = (0..half).map(ideal_arg).collect::<Result<Vec<_>, _>>()?;
            let residues =
                (half..args.len()).map(element_arg).collect::<Result<Vec<_>, _>>()?;
            let x = ideals::ideal_crt(&moduli, &residues)?;
            Ok(json!({ "x": json::algnum_to_json(&x) }))
        }
        other => Err(CliError(format!(
            "unknown ideal operation `{other}` (expected add|mul|inv|norm|contains|refine|two-element|crt)"
        ))),
    }
}

fn fixture_command(which: FixtureCommand) -> Result<Value, CliError> {
    match which {
        FixtureCommand::Example1 => {
            let wa = fixtures::example1_automaton();
            eprintln!("fixture: worked example over Q(i√5), 3 states");
            Ok(json::automaton_to_json(&wa))
        }
        FixtureCommand::PipIdeal { field, ideal } => {
            let f = load_field(&field)?;
            let a = json::ideal_from_json(&f, &load_doc(&ideal)?)?;
            let wa = fixtures::pip_automaton(&a)?;
            eprintln!("fixture: ideal encoding, norm {}", json::format_rational(&a.norm()));
            Ok(json::automaton_to_json(&wa))
        }
        FixtureCommand::Random { field, seed, states, alphabet, coeff_bound } => {
            let f = load_field(&field)?;
            let letters: Vec<char> = alphabet.chars().collect();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let wa = fixtures::random_okwa(&f, &letters, states, coeff_bound, &mut rng);
            eprintln!("fixture: random, seed {seed}, {states} states");
            Ok(json::automaton_to_json(&wa))
        }
        FixtureCommand::PrincipalBruteforce { field, ideal, coeff_bound } => {
            let f = load_field(&field)?;
            let a = json::ideal_from_json(&f, &load_doc(&ideal)?)?;
            if !a.is_integral() {
                return Err(CliError("brute-force scan expects an integral ideal".into()));
            }
            match fixtures::principal_bruteforce(&a, coeff_bound) {
                Some(g) => Ok(json!({ "generator": json::algnum_to_json(&g) })),
                None => Ok(json!({ "generator": Value::Null })),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> i32 {
        let mut argv = vec!["okwa".to_string()];
        argv.extend(args.iter().map(|s| s.to_string()));
        run_cli(argv)
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run(&["frobnicate"]), 2);
        assert_eq!(run(&[]), 2);
    }

    #[test]
    fn domain_errors_exit_1() {
        // Valid JSON, but x² is not squarefree.
        assert_eq!(
            run(&["ideal", "norm", r#"{"min_poly":["0","0","1"],"integral_basis":[["1","0"],["0","1"]]}"#]),
            1
        );
    }

    #[test]
    fn hnf_smoke() {
        assert_eq!(run(&["hnf", r#"[["3","0","2","5"],["0","3","-1","2"]]"#, "--transform"]), 0);
    }

    #[test]
    fn ideal_and_fixture_smoke() {
        let field = r#"{"min_poly":["5","0","1"],"integral_basis":[["1","0"],["0","1"]]}"#;
        let ideal = r#"{"gens":[["3","0"],["2","-1"]]}"#;
        assert_eq!(run(&["ideal", "norm", field, ideal]), 0);
        assert_eq!(run(&["ideal", "inv", field, ideal]), 0);
        assert_eq!(run(&["ideal", "two-element", field, ideal]), 0);
        assert_eq!(run(&["fixture", "example1"]), 0);
        assert_eq!(run(&["fixture", "pip-ideal", field, ideal]), 0);
    }
}
