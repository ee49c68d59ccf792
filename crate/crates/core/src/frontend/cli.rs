//! The `eqlogic` command line driver.
//!
//! Exit codes: 0 success, 1 the checked claim does not hold (rejected proof,
//! failed model check, exhausted search budget), 2 unreadable, unparsable or
//! invalid input. With `--json`, standard output carries exactly one object
//! whose `status` is `ok`, `proof-error` or `input-error`.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use super::{parse_equation, parse_model, parse_proof, parse_term, parse_theory, print_model, print_proof, ProofScript};
use crate::birkhoff::completeness;
use crate::calculus::{check_derivation, sound_check, Judgment, SoundError};
use crate::model::{search_countermodel, Environment, Model, Theory, TheoryVerdict, DEFAULT_BUDGET};
use crate::signature::Sort;
use crate::term::{Context, Term};

#[derive(Debug, Parser)]
#[command(name = "eqlogic", version, about = "Multi-sorted equational logic toolkit")]
struct Cli {
    /// Emit a single JSON object on standard output.
    #[arg(long, global = true)]
    json: bool,
    /// Accepted for compatibility; output is never colored.
    #[arg(long, global = true)]
    no_color: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a proof script and print its conclusion.
    Check { theory: PathBuf, proof: PathBuf },
    /// Evaluate a term in a finite model.
    Eval {
        theory: PathBuf,
        model: PathBuf,
        term: String,
        /// Bindings `x=0,y=1`; `x:S=0` fixes the sort explicitly.
        #[arg(long, default_value = "")]
        env: String,
    },
    /// Check that a model satisfies every equation of a theory.
    Satisfies { theory: PathBuf, model: PathBuf },
    /// Check a proof, then evaluate its conclusion in a model of the theory.
    Sound {
        theory: PathBuf,
        model: PathBuf,
        proof: PathBuf,
    },
    /// Rebuild a proof from term-model evidence and re-check it.
    Complete { theory: PathBuf, proof: PathBuf },
    /// Search for a finite model of the theory refuting an equation.
    Countermodel {
        theory: PathBuf,
        equation: String,
        #[arg(long)]
        max_size: usize,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Failure {
    code: i32,
    message: String,
    extra: Value,
}

fn input(message: impl ToString) -> Failure {
    Failure {
        code: 2,
        message: message.to_string(),
        extra: json!({}),
    }
}

fn refuted(message: impl ToString, extra: Value) -> Failure {
    Failure {
        code: 1,
        message: message.to_string(),
        extra,
    }
}

struct Success {
    text: String,
    data: Value,
}

/// Runs the driver on `argv` (including the program name).
pub fn run<I, T>(argv: I) -> Report
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let (stdout, stderr) = if code == 0 {
                (text, String::new())
            } else {
                (String::new(), text)
            };
            return Report {
                code,
                stdout,
                stderr,
            };
        }
    };
    let outcome = dispatch(&cli.command);
    match (outcome, cli.json) {
        (Ok(s), false) => Report {
            code: 0,
            stdout: s.text,
            stderr: String::new(),
        },
        (Ok(s), true) => {
            let mut obj = json!({ "status": "ok" });
            merge(&mut obj, s.data);
            Report {
                code: 0,
                stdout: format!("{obj}\n"),
                stderr: String::new(),
            }
        }
        (Err(f), json_mode) => {
            let label = if f.code == 1 { "proof error" } else { "input error" };
            let stderr = format!("{label}: {}\n", f.message);
            let stdout = if json_mode {
                let status = if f.code == 1 { "proof-error" } else { "input-error" };
                let mut obj = json!({ "status": status, "error": f.message });
                merge(&mut obj, f.extra);
                format!("{obj}\n")
            } else {
                String::new()
            };
            Report {
                code: f.code,
                stdout,
                stderr,
            }
        }
    }
}

fn merge(into: &mut Value, from: Value) {
    if let (Value::Object(a), Value::Object(b)) = (into, from) {
        a.extend(b);
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn load_theory(path: &Path) -> Result<Theory, Failure> {
    parse_theory(&read(path)?).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn load_model(path: &Path, theory: &Theory) -> Result<Model, Failure> {
    parse_model(&read(path)?, theory.signature())
        .map_err(|e| input(format!("{}: {e}", path.display())))
}

fn load_proof(path: &Path, theory: &Theory) -> Result<ProofScript, Failure> {
    parse_proof(&read(path)?, theory).map_err(|e| input(format!("{}: {e}", path.display())))
}

/// Checks the script and confirms the claimed judgment.
fn confirm(theory: &Theory, script: &ProofScript) -> Result<Judgment, Failure> {
    let j = check_derivation(theory, &script.derivation, &script.claim.ctx)
        .map_err(|e| refuted(e, json!({})))?;
    if j != script.claim {
        return Err(refuted(
            format!("derivation concludes {j}, but the script claims {}", script.claim),
            json!({ "judgment": j.to_string() }),
        ));
    }
    Ok(j)
}

fn dispatch(cmd: &Command) -> Result<Success, Failure> {
    match cmd {
        Command::Check { theory, proof } => {
            let th = load_theory(theory)?;
            let script = load_proof(proof, &th)?;
            let j = confirm(&th, &script)?;
            Ok(Success {
                text: format!("{j}\n"),
                data: json!({ "judgment": j.to_string() }),
            })
        }
        Command::Eval {
            theory,
            model,
            term,
            env,
        } => {
            let th = load_theory(theory)?;
            let m = load_model(model, &th)?;
            let (t, env) = eval_input(&m, term, env)?;
            let value = m.eval(&t, &env).map_err(input)?;
            let sort = t.sort_of(m.signature(), env.context()).map_err(input)?;
            let label = m.label(&sort, value).to_string();
            Ok(Success {
                text: format!("{label}\n"),
                data: json!({ "value": label, "sort": sort.to_string() }),
            })
        }
        Command::Satisfies { theory, model } => {
            let th = load_theory(theory)?;
            let m = load_model(model, &th)?;
            match m.satisfies_theory(&th).map_err(input)? {
                TheoryVerdict::Holds => Ok(Success {
                    text: format!("satisfied: {} equation(s)\n", th.len()),
                    data: json!({ "equations": th.len() }),
                }),
                TheoryVerdict::Fails { equation, witness } => Err(refuted(
                    format!("equation {equation} fails at {}", m.show_env(&witness)),
                    json!({ "equation": equation, "witness": witness_json(&m, &witness) }),
                )),
            }
        }
        Command::Sound {
            theory,
            model,
            proof,
        } => {
            let th = load_theory(theory)?;
            let m = load_model(model, &th)?;
            let script = load_proof(proof, &th)?;
            let j = confirm(&th, &script)?;
            match sound_check(&th, &m, &script.derivation, &script.claim.ctx) {
                Ok(true) => Ok(Success {
                    text: format!("sound: {j}\n"),
                    data: json!({ "judgment": j.to_string() }),
                }),
                Ok(false) => Err(refuted(
                    format!("conclusion {j} does not hold in the model"),
                    json!({ "judgment": j.to_string() }),
                )),
                Err(SoundError::PreconditionFailed { equation, witness }) => Err(refuted(
                    format!("model does not satisfy equation {equation} (counterexample {witness})"),
                    json!({ "equation": equation }),
                )),
                Err(SoundError::Check(e)) => Err(refuted(e, json!({}))),
                Err(SoundError::Model(e)) => Err(input(e)),
            }
        }
        Command::Complete { theory, proof } => {
            let th = load_theory(theory)?;
            let script = load_proof(proof, &th)?;
            let goal = script.claim.to_equation();
            let built = completeness(&th, &goal, &script.derivation)
                .map_err(|e| refuted(e, json!({})))?;
            let out = ProofScript {
                theory: script.theory.clone(),
                claim: script.claim.clone(),
                derivation: built,
            };
            let j = confirm(&th, &out)?;
            let text = print_proof(&out);
            Ok(Success {
                data: json!({ "judgment": j.to_string(), "proof": text }),
                text,
            })
        }
        Command::Countermodel {
            theory,
            equation,
            max_size,
            budget,
        } => {
            let th = load_theory(theory)?;
            let goal = parse_equation(equation, th.signature()).map_err(input)?;
            match search_countermodel(&th, &goal, *max_size, *budget) {
                Ok(Some(found)) => {
                    let printed = print_model(&found.model);
                    Ok(Success {
                        text: format!(
                            "{printed}# witness {}\n",
                            found.model.show_env(&found.witness)
                        ),
                        data: json!({
                            "model": printed,
                            "witness": witness_json(&found.model, &found.witness),
                        }),
                    })
                }
                Ok(None) => Ok(Success {
                    text: format!("none up to {max_size}\n"),
                    data: json!({ "model": Value::Null, "max_size": max_size }),
                }),
                Err(e @ crate::model::ModelError::BudgetExceeded(_)) => {
                    Err(refuted(e, json!({ "model": Value::Null })))
                }
                Err(e) => Err(input(e)),
            }
        }
    }
}

fn witness_json(m: &Model, env: &Environment) -> Value {
    let map: serde_json::Map<String, Value> = m
        .env_labels(env)
        .into_iter()
        .map(|(x, l)| (x, Value::String(l)))
        .collect();
    Value::Object(map)
}

/// Parses `--env` and the term.
fn eval_input(m: &Model, term: &str, env: &str) -> Result<(Term, Environment), Failure> {
    let mut bindings = Vec::new();
    for item in env.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (lhs, label) = item
            .split_once('=')
            .ok_or_else(|| input(format!("--env: expected `x=elem`, found `{item}`")))?;
        let (x, sort) = match lhs.split_once(':') {
            Some((x, s)) => (x.trim(), Some(s.trim())),
            None => (lhs.trim(), None),
        };
        bindings.push((x, sort, label.trim()));
    }
    bind_term(m, term, &bindings).map_err(input)
}

/// Parses `term` and builds the environment for `(var, sort, label)` bindings.
/// A binding without a sort takes the sort whose carrier contains the label;
/// labels present in several carriers are settled by how the term uses them.
pub fn bind_term(
    m: &Model,
    term: &str,
    bindings: &[(&str, Option<&str>, &str)],
) -> Result<(Term, Environment), String> {
    let sig = m.signature();
    let mut candidates: Vec<Context> = vec![Context::new()];
    for (i, &(x, sort, label)) in bindings.iter().enumerate() {
        if bindings[..i].iter().any(|b| b.0 == x) {
            return Err(format!("`{x}` bound twice"));
        }
        let sorts: Vec<Sort> = match sort {
            Some(s) => vec![Sort::from(s)],
            None => m
                .carriers()
                .filter(|(_, c)| c.lookup(label).is_some())
                .map(|(s, _)| s.clone())
                .collect(),
        };
        if sorts.is_empty() {
            return Err(format!("no carrier contains `{label}`"));
        }
        candidates = candidates
            .into_iter()
            .flat_map(|ctx| sorts.iter().map(move |s| ctx.clone().with(x, s.as_str())))
            .collect();
    }
    let mut parsed: Vec<(Context, Term)> = Vec::new();
    let mut last_err = None;
    for ctx in candidates {
        match parse_term(term, sig, &ctx) {
            Ok(t) => parsed.push((ctx, t)),
            Err(e) => last_err = Some(e),
        }
    }
    let (ctx, t) = match parsed.len() {
        1 => parsed.pop().unwrap(),
        0 => return Err(last_err.expect("at least one candidate").to_string()),
        _ => return Err("variable sorts are ambiguous; annotate them as `x:S=elem`".into()),
    };
    let env = m
        .environment(&ctx, bindings.iter().map(|&(x, _, l)| (x, l)))
        .map_err(|e| e.to_string())?;
    Ok((t, env))
}
