use std::process::Command;

use eqlogic::frontend::cli::{run, Report};
use serde_json::Value;

fn data(name: &str) -> String {
    format!("{}/../../data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn eqlogic(args: &[&str]) -> Report {
    let mut argv = vec!["eqlogic".to_string()];
    for a in args {
        argv.push(if a.contains('.') && !a.contains(' ') && !a.contains('(') {
            data(a)
        } else {
            a.to_string()
        });
    }
    run(argv)
}

fn json(r: &Report) -> Value {
    serde_json::from_str(&r.stdout).unwrap()
}

#[test]
fn check_prints_the_conclusion() {
    let r = eqlogic(&["check", "monoid.eq", "unitL_inst.prf"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.stdout, "{x:M} ⊢ plus(e(),x) ≡ x : M\n");
    assert!(r.stderr.is_empty());
}

#[test]
fn check_rejects_a_wrong_claim() {
    let r = eqlogic(&["check", "monoid.eq", "invalid/bad_claim.prf"]);
    assert_eq!(r.code, 1);
    assert!(r.stdout.is_empty());
    assert!(r.stderr.starts_with("proof error: derivation concludes"));
    let j = json(&eqlogic(&["--json", "check", "monoid.eq", "invalid/bad_claim.prf"]));
    assert_eq!(j["status"], "proof-error");
    assert_eq!(j["judgment"], "{x:M} ⊢ plus(e(),x) ≡ x : M");
}

#[test]
fn input_errors_exit_with_two() {
    let r = eqlogic(&["check", "invalid/undeclared.eq", "unitL_inst.prf"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("line 2"), "{}", r.stderr);
    let r = eqlogic(&["satisfies", "monoid.eq", "invalid/partial.mdl"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("`plus` has no row for (1,0)"), "{}", r.stderr);
    let r = eqlogic(&["check", "monoid.eq", "missing.prf"]);
    assert_eq!(r.code, 2);
    let j = json(&eqlogic(&["--json", "check", "monoid.eq", "missing.prf"]));
    assert_eq!(j["status"], "input-error");
    assert_eq!(eqlogic(&["frobnicate"]).code, 2);
}

#[test]
fn eval_xor() {
    let r = eqlogic(&["eval", "monoid.eq", "z2.mdl", "plus(x,y)", "--env", "x=1,y=1"]);
    assert_eq!((r.code, r.stdout.as_str()), (0, "0\n"));
    let r = eqlogic(&["eval", "monoid.eq", "z3.mdl", "plus(x,plus(x,e))", "--env", "x:M=2"]);
    assert_eq!(r.stdout, "1\n");
    let r = eqlogic(&["eval", "action.eq", "flip.mdl", "act(g,x)", "--env", "g=1,x=p"]);
    assert_eq!(r.stdout, "q\n");
    let r = eqlogic(&["eval", "monoid.eq", "z2.mdl", "plus(x,y)", "--env", "x=1"]);
    assert_eq!(r.code, 2);
}

#[test]
fn satisfies_reports_a_counterexample() {
    let r = eqlogic(&["satisfies", "monoid.eq", "z2_setoid.mdl"]);
    assert_eq!((r.code, r.stdout.as_str()), (0, "satisfied: 3 equation(s)\n"));
    let r = eqlogic(&["satisfies", "monoid.eq", "right_proj.mdl"]);
    assert_eq!(r.code, 1);
    assert_eq!(r.stderr, "proof error: equation unitR fails at {x↦1}\n");
    let j = json(&eqlogic(&["--json", "satisfies", "monoid.eq", "right_proj.mdl"]));
    assert_eq!(j["witness"]["x"], "1");
}

#[test]
fn sound_needs_a_model_of_the_theory() {
    let r = eqlogic(&["sound", "semilattice.eq", "meet3.mdl", "absorb.prf"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let r = eqlogic(&["sound", "monoid.eq", "right_proj.mdl", "cong.prf"]);
    assert_eq!(r.code, 1);
}

#[test]
fn complete_rechecks_its_output() {
    let r = eqlogic(&["complete", "monoid.eq", "units.prf"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.starts_with("theory monoid.eq\nprove [x:M] : plus(e(),x) = plus(x,e())\n(trans\n"));
    let th = eqlogic::parse_theory(&std::fs::read_to_string(data("monoid.eq")).unwrap()).unwrap();
    let back = eqlogic::parse_proof(&r.stdout, &th).unwrap();
    assert_eq!(back.claim.to_string(), "{x:M} ⊢ plus(e(),x) ≡ plus(x,e()) : M");
}

#[test]
fn countermodel_to_commutativity() {
    let goal = "[x,y:M] plus(x,y) = plus(y,x)";
    let r = eqlogic(&["countermodel", "monoid.eq", goal, "--max-size", "2"]);
    assert_eq!((r.code, r.stdout.as_str()), (0, "none up to 2\n"));
    let r = eqlogic(&["countermodel", "monoid.eq", goal, "--max-size", "3"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.ends_with("# witness {x↦1, y↦2}\n"), "{}", r.stdout);
    let j = json(&eqlogic(&["--json", "countermodel", "monoid.eq", goal, "--max-size", "2"]));
    assert_eq!(j["status"], "ok");
    assert!(j["model"].is_null());
    let r = eqlogic(&["countermodel", "monoid.eq", goal, "--max-size", "3", "--budget", "5"]);
    assert_eq!(r.code, 1);
}

#[test]
fn reports_are_deterministic() {
    let args = ["--json", "countermodel", "semilattice.eq", "[x,y:L] meet(x,y) = x", "--max-size", "3"];
    assert_eq!(eqlogic(&args), eqlogic(&args));
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_eqlogic");
    let ok = Command::new(bin)
        .args(["check", &data("monoid.eq"), &data("unitL_inst.prf")])
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(String::from_utf8(ok.stdout).unwrap(), "{x:M} ⊢ plus(e(),x) ≡ x : M\n");
    let bad = Command::new(bin)
        .args(["check", &data("monoid.eq"), &data("invalid/bad_claim.prf")])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(1));
    assert!(bad.stdout.is_empty());
}
