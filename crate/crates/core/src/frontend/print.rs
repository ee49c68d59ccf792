use std::collections::BTreeMap;
use std::fmt::Write;

use super::ProofScript;
use crate::calculus::Derivation;
use crate::model::{Model, Theory};
use crate::signature::Var;
use crate::term::{Context, Term};

const WIDTH: usize = 80;

/// `[x:M, y:M]`
pub fn print_context(ctx: &Context) -> String {
    let parts: Vec<String> = ctx.iter().map(|(x, s)| format!("{x}:{s}")).collect();
    format!("[{}]", parts.join(", "))
}

pub fn print_theory(theory: &Theory) -> String {
    let mut out = String::new();
    let sig = theory.signature();
    for s in sig.sorts() {
        writeln!(out, "sort {s}").unwrap();
    }
    for d in sig.ops() {
        writeln!(out, "op {d}").unwrap();
    }
    for (name, eq) in theory.equations() {
        writeln!(
            out,
            "eq {name} {} : {} = {}",
            print_context(&eq.ctx),
            eq.lhs,
            eq.rhs
        )
        .unwrap();
    }
    out
}

pub fn print_model(model: &Model) -> String {
    let raw = model.to_raw();
    let mut out = String::new();
    for (sort, elems) in &raw.carriers {
        writeln!(out, "carrier {sort} = {}", elems.join(", ")).unwrap();
    }
    for (sort, from, to) in &raw.reprs {
        writeln!(out, "repr {sort}: {from} -> {to}").unwrap();
    }
    for (op, args, value) in &raw.rows {
        writeln!(out, "table {op}({}) = {value}", args.join(",")).unwrap();
    }
    out
}

fn print_bindings(bindings: &BTreeMap<Var, Term>) -> String {
    let parts: Vec<String> = bindings
        .iter()
        .map(|(x, t)| format!("({x} := {t})"))
        .collect();
    format!("({})", parts.join(" "))
}

/// Single-line s-expression.
pub fn print_derivation_flat(d: &Derivation) -> String {
    match d {
        Derivation::Hyp(n) => format!("(hyp {n})"),
        Derivation::Base(x) => format!("(base {x})"),
        Derivation::Refl(t) => format!("(refl {t})"),
        Derivation::App(op, ds) => {
            let mut s = format!("(app {op}");
            for d in ds {
                s.push(' ');
                s.push_str(&print_derivation_flat(d));
            }
            s.push(')');
            s
        }
        Derivation::Sub(d, b) => {
            format!("(sub {} {})", print_derivation_flat(d), print_bindings(b))
        }
        Derivation::Sym(d) => format!("(sym {})", print_derivation_flat(d)),
        Derivation::Trans(l, r) => format!(
            "(trans {} {})",
            print_derivation_flat(l),
            print_derivation_flat(r)
        ),
    }
}

/// Indented s-expression; nodes that fit in the line width stay on one line.
pub fn print_derivation(d: &Derivation) -> String {
    let mut out = String::new();
    pretty(d, 0, &mut out);
    out
}

fn pretty(d: &Derivation, indent: usize, out: &mut String) {
    let flat = print_derivation_flat(d);
    if indent + flat.len() <= WIDTH {
        out.push_str(&flat);
        return;
    }
    let pad = " ".repeat(indent + 2);
    let child = |d: &Derivation, out: &mut String| {
        out.push('\n');
        out.push_str(&pad);
        pretty(d, indent + 2, out);
    };
    match d {
        Derivation::App(op, ds) => {
            write!(out, "(app {op}").unwrap();
            ds.iter().for_each(|d| child(d, out));
        }
        Derivation::Sub(d, b) => {
            out.push_str("(sub");
            child(d, out);
            write!(out, "\n{pad}{}", print_bindings(b)).unwrap();
        }
        Derivation::Sym(d) => {
            out.push_str("(sym");
            child(d, out);
        }
        Derivation::Trans(l, r) => {
            out.push_str("(trans");
            child(l, out);
            child(r, out);
        }
        leaf => {
            out.push_str(&print_derivation_flat(leaf));
            return;
        }
    }
    out.push(')');
}

pub fn print_proof(script: &ProofScript) -> String {
    let mut out = String::new();
    if let Some(name) = &script.theory {
        writeln!(out, "theory {name}").unwrap();
    }
    writeln!(
        out,
        "prove {} : {} = {}",
        print_context(&script.claim.ctx),
        script.claim.lhs,
        script.claim.rhs
    )
    .unwrap();
    out.push_str(&print_derivation(&script.derivation));
    out.push('\n');
    out
}
