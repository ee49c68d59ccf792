//! Proof objects for `E ⊢ Γ ▷ t ≡ t'` and their checker.
//!
//! A [`Derivation`] carries no conclusion of its own; [`check_derivation`]
//! recomputes it bottom-up against an expected context. Premises are checked
//! left to right and the first failure is reported together with the path of
//! child indices leading to the offending node.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::model::{Equation, Model, ModelError, Theory, TheoryVerdict, Validity};
use crate::signature::{Op, Sort, Var};
use crate::term::{Context, SortError, Substitution, Term};

/// The seven inference rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rule {
    Hyp,
    Base,
    App,
    Sub,
    Refl,
    Sym,
    Trans,
}

impl Rule {
    pub const ALL: [Rule; 7] = [
        Rule::Hyp,
        Rule::Base,
        Rule::App,
        Rule::Sub,
        Rule::Refl,
        Rule::Sym,
        Rule::Trans,
    ];

    pub fn keyword(self) -> &'static str {
        match self {
            Rule::Hyp => "hyp",
            Rule::Base => "base",
            Rule::App => "app",
            Rule::Sub => "sub",
            Rule::Refl => "refl",
            Rule::Sym => "sym",
            Rule::Trans => "trans",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

/// A derivation tree.
///
/// `Sub` stores only the bindings; its source context is read off the
/// bindings (each variable gets the sort of its image) and its target is the
/// context the node is checked in.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Derivation {
    Hyp(String),
    Base(Var),
    App(Op, Vec<Derivation>),
    Sub(Box<Derivation>, BTreeMap<Var, Term>),
    Refl(Term),
    Sym(Box<Derivation>),
    Trans(Box<Derivation>, Box<Derivation>),
}

impl Derivation {
    pub fn hyp(name: &str) -> Self {
        Derivation::Hyp(name.to_string())
    }

    pub fn base(x: &str) -> Self {
        Derivation::Base(x.into())
    }

    pub fn app(op: &str, premises: Vec<Derivation>) -> Self {
        Derivation::App(op.into(), premises)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn sub(premise: Derivation, bindings: BTreeMap<Var, Term>) -> Self {
        Derivation::Sub(Box::new(premise), bindings)
    }

    pub fn refl(t: Term) -> Self {
        Derivation::Refl(t)
    }

    pub fn sym(premise: Derivation) -> Self {
        Derivation::Sym(Box::new(premise))
    }

    pub fn trans(left: Derivation, right: Derivation) -> Self {
        Derivation::Trans(Box::new(left), Box::new(right))
    }

    pub fn rule(&self) -> Rule {
        match self {
            Derivation::Hyp(_) => Rule::Hyp,
            Derivation::Base(_) => Rule::Base,
            Derivation::App(..) => Rule::App,
            Derivation::Sub(..) => Rule::Sub,
            Derivation::Refl(_) => Rule::Refl,
            Derivation::Sym(_) => Rule::Sym,
            Derivation::Trans(..) => Rule::Trans,
        }
    }

    pub fn premises(&self) -> Vec<&Derivation> {
        match self {
            Derivation::Hyp(_) | Derivation::Base(_) | Derivation::Refl(_) => Vec::new(),
            Derivation::App(_, ds) => ds.iter().collect(),
            Derivation::Sub(d, _) | Derivation::Sym(d) => vec![d],
            Derivation::Trans(l, r) => vec![l, r],
        }
    }

    /// Node count.
    pub fn size(&self) -> usize {
        1 + self.premises().into_iter().map(Derivation::size).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self
            .premises()
            .into_iter()
            .map(Derivation::depth)
            .max()
            .unwrap_or(0)
    }

    /// Counts of each rule occurring in the tree.
    pub fn rule_counts(&self) -> BTreeMap<Rule, usize> {
        let mut out = BTreeMap::new();
        let mut stack = vec![self];
        while let Some(d) = stack.pop() {
            *out.entry(d.rule()).or_insert(0) += 1;
            stack.extend(d.premises());
        }
        out
    }
}

pub fn derivation_size(d: &Derivation) -> usize {
    d.size()
}

/// `Γ ⊢ lhs ≡ rhs : sort`
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Judgment {
    pub ctx: Context,
    pub sort: Sort,
    pub lhs: Term,
    pub rhs: Term,
}

impl Judgment {
    pub fn to_equation(&self) -> Equation {
        Equation {
            ctx: self.ctx.clone(),
            sort: self.sort.clone(),
            lhs: self.lhs.clone(),
            rhs: self.rhs.clone(),
        }
    }

    pub fn from_equation(eq: &Equation) -> Self {
        Judgment {
            ctx: eq.ctx.clone(),
            sort: eq.sort.clone(),
            lhs: eq.lhs.clone(),
            rhs: eq.rhs.clone(),
        }
    }

    fn swapped(self) -> Self {
        Judgment {
            lhs: self.rhs,
            rhs: self.lhs,
            ..self
        }
    }
}

impl fmt::Display for Judgment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ⊢ {} ≡ {} : {}", self.ctx, self.lhs, self.rhs, self.sort)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckErrorKind {
    #[error("unknown hypothesis `{0}`")]
    UnknownHypothesis(String),
    #[error("{rule} node is checked in {found}, but requires {expected}")]
    ContextMismatch {
        rule: Rule,
        expected: Context,
        found: Context,
    },
    #[error("trans: left premise ends in {left}, right premise starts with {right}")]
    MiddleTermMismatch { left: Term, right: Term },
    #[error("unknown operator `{0}`")]
    UnknownOperator(Op),
    #[error("app {op}: {got} premise(s) for an operator of arity {expected}")]
    ArityMismatch { op: Op, expected: usize, got: usize },
    #[error("app {op}: premise {position} concludes at sort {got}, expected {expected}")]
    SortMismatch {
        op: Op,
        position: usize,
        expected: Sort,
        got: Sort,
    },
    #[error(transparent)]
    IllSorted(#[from] SortError),
}

/// A rejected derivation: the error and the child-index path to the failing node.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} (at {})", display_path(.path))]
pub struct CheckError {
    pub path: Vec<usize>,
    pub kind: CheckErrorKind,
}

fn display_path(path: &[usize]) -> String {
    if path.is_empty() {
        "root".to_string()
    } else {
        let parts: Vec<String> = path.iter().map(usize::to_string).collect();
        format!("root/{}", parts.join("/"))
    }
}

/// Checks `d` in context `ctx` and returns its unique conclusion.
pub fn check_derivation(
    theory: &Theory,
    d: &Derivation,
    ctx: &Context,
) -> Result<Judgment, CheckError> {
    let mut path = Vec::new();
    check_at(theory, d, ctx, &mut path).map_err(|kind| CheckError { path, kind })
}

fn check_at(
    theory: &Theory,
    d: &Derivation,
    ctx: &Context,
    path: &mut Vec<usize>,
) -> Result<Judgment, CheckErrorKind> {
    let sig = theory.signature();
    let premise = |i: usize, d: &Derivation, ctx: &Context, path: &mut Vec<usize>| {
        path.push(i);
        let j = check_at(theory, d, ctx, path)?;
        path.pop();
        Ok::<_, CheckErrorKind>(j)
    };
    match d {
        Derivation::Hyp(name) => {
            let eq = theory
                .equation(name)
                .ok_or_else(|| CheckErrorKind::UnknownHypothesis(name.clone()))?;
            if &eq.ctx != ctx {
                return Err(CheckErrorKind::ContextMismatch {
                    rule: Rule::Hyp,
                    expected: eq.ctx.clone(),
                    found: ctx.clone(),
                });
            }
            Ok(Judgment::from_equation(eq))
        }
        Derivation::Base(x) => {
            let sort = ctx
                .get(x.as_str())
                .ok_or_else(|| SortError::UnboundVariable(x.clone()))?;
            Ok(Judgment {
                ctx: ctx.clone(),
                sort: sort.clone(),
                lhs: Term::Var(x.clone()),
                rhs: Term::Var(x.clone()),
            })
        }
        Derivation::App(op, premises) => {
            let decl = sig
                .lookup(op.as_str())
                .ok_or_else(|| CheckErrorKind::UnknownOperator(op.clone()))?;
            if decl.arity() != premises.len() {
                return Err(CheckErrorKind::ArityMismatch {
                    op: op.clone(),
                    expected: decl.arity(),
                    got: premises.len(),
                });
            }
            let mut lhs = Vec::with_capacity(premises.len());
            let mut rhs = Vec::with_capacity(premises.len());
            for (position, (p, expected)) in premises.iter().zip(&decl.arg_sorts).enumerate() {
                let j = premise(position, p, ctx, path)?;
                if &j.sort != expected {
                    path.push(position);
                    return Err(CheckErrorKind::SortMismatch {
                        op: op.clone(),
                        position,
                        expected: expected.clone(),
                        got: j.sort,
                    });
                }
                lhs.push(j.lhs);
                rhs.push(j.rhs);
            }
            Ok(Judgment {
                ctx: ctx.clone(),
                sort: decl.result_sort.clone(),
                lhs: Term::App(op.clone(), lhs),
                rhs: Term::App(op.clone(), rhs),
            })
        }
        Derivation::Sub(p, bindings) => {
            let sigma = Substitution::infer(sig, ctx.clone(), bindings.clone())?;
            let j = premise(0, p, sigma.source(), path)?;
            Ok(Judgment {
                ctx: ctx.clone(),
                sort: j.sort,
                lhs: sigma.apply(&j.lhs)?,
                rhs: sigma.apply(&j.rhs)?,
            })
        }
        Derivation::Refl(t) => {
            let sort = t.sort_of(sig, ctx)?;
            Ok(Judgment {
                ctx: ctx.clone(),
                sort,
                lhs: t.clone(),
                rhs: t.clone(),
            })
        }
        Derivation::Sym(p) => Ok(premise(0, p, ctx, path)?.swapped()),
        Derivation::Trans(l, r) => {
            let left = premise(0, l, ctx, path)?;
            let right = premise(1, r, ctx, path)?;
            if left.rhs != right.lhs {
                return Err(CheckErrorKind::MiddleTermMismatch {
                    left: left.rhs,
                    right: right.lhs,
                });
            }
            Ok(Judgment {
                rhs: right.rhs,
                ..left
            })
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SoundError {
    #[error("model does not satisfy equation `{equation}` (counterexample {witness})")]
    PreconditionFailed { equation: String, witness: String },
    #[error(transparent)]
    Check(#[from] CheckError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Checks `d` and evaluates its conclusion in `model`, which must satisfy `theory`.
///
/// Returns `Ok(false)` only if the implementation is broken: every accepted
/// derivation denotes a true equation in every model of the theory.
pub fn sound_check(
    theory: &Theory,
    model: &Model,
    d: &Derivation,
    ctx: &Context,
) -> Result<bool, SoundError> {
    if let TheoryVerdict::Fails { equation, witness } = model.satisfies_theory(theory)? {
        return Err(SoundError::PreconditionFailed {
            equation,
            witness: model.show_env(&witness),
        });
    }
    let j = check_derivation(theory, d, ctx)?;
    Ok(matches!(
        model.equal_in_model(&j.to_equation())?,
        Validity::Holds
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixtures::*;
    use crate::model::RawModel;
    use crate::signature::monoid_signature;

    fn x_ctx() -> Context {
        Context::new().with("x", "M")
    }

    #[test]
    fn hyp_concludes_equation() {
        let j = check_derivation(&monoid(), &Derivation::hyp("unitL"), &x_ctx()).unwrap();
        assert_eq!(j.lhs, plus(e(), v("x")));
        assert_eq!(j.rhs, v("x"));
        assert_eq!(j.to_string(), "{x:M} ⊢ plus(e(),x) ≡ x : M");
    }

    #[test]
    fn hyp_requires_own_context() {
        let ctx = Context::new().with("x", "M").with("y", "M");
        let err = check_derivation(&monoid(), &Derivation::hyp("unitL"), &ctx).unwrap_err();
        assert!(matches!(
            err.kind,
            CheckErrorKind::ContextMismatch { rule: Rule::Hyp, .. }
        ));
        let err = check_derivation(&monoid(), &Derivation::hyp("comm"), &ctx).unwrap_err();
        assert_eq!(err.kind, CheckErrorKind::UnknownHypothesis("comm".into()));
    }

    #[test]
    fn refl_and_base() {
        let t = plus(v("x"), e());
        let j = check_derivation(&monoid(), &Derivation::refl(t.clone()), &x_ctx()).unwrap();
        assert_eq!((j.lhs, j.rhs), (t.clone(), t));
        let j = check_derivation(&monoid(), &Derivation::base("x"), &x_ctx()).unwrap();
        assert_eq!((j.lhs, j.rhs), (v("x"), v("x")));
        let err = check_derivation(&monoid(), &Derivation::base("y"), &x_ctx()).unwrap_err();
        assert_eq!(
            err.kind,
            CheckErrorKind::IllSorted(SortError::UnboundVariable("y".into()))
        );
    }

    #[test]
    fn trans_requires_structural_middle() {
        // unitL: plus(e(),x) ≡ x ; unitR: plus(x,e()) ≡ x
        let d = Derivation::trans(Derivation::hyp("unitL"), Derivation::hyp("unitR"));
        let err = check_derivation(&monoid(), &d, &x_ctx()).unwrap_err();
        assert_eq!(
            err.kind,
            CheckErrorKind::MiddleTermMismatch {
                left: v("x"),
                right: plus(v("x"), e())
            }
        );
        assert!(err.path.is_empty());

        let d = Derivation::trans(
            Derivation::hyp("unitL"),
            Derivation::sym(Derivation::hyp("unitR")),
        );
        let j = check_derivation(&monoid(), &d, &x_ctx()).unwrap();
        assert_eq!((j.lhs, j.rhs), (plus(e(), v("x")), plus(v("x"), e())));
    }

    #[test]
    fn sub_instantiates_hypothesis() {
        let yz = Context::new().with("y", "M").with("z", "M");
        let d = Derivation::sub(
            Derivation::hyp("unitL"),
            [("x".into(), plus(v("y"), v("z")))].into(),
        );
        let j = check_derivation(&monoid(), &d, &yz).unwrap();
        assert_eq!(j.lhs, plus(e(), plus(v("y"), v("z"))));
        assert_eq!(j.rhs, plus(v("y"), v("z")));
        assert_eq!(j.ctx, yz);
    }

    #[test]
    fn sub_with_incomplete_bindings_mismatches_context() {
        let d = Derivation::sub(
            Derivation::hyp("assoc"),
            [("x".into(), e()), ("y".into(), e())].into(),
        );
        let err = check_derivation(&monoid(), &d, &Context::new()).unwrap_err();
        assert!(matches!(
            err.kind,
            CheckErrorKind::ContextMismatch { rule: Rule::Hyp, .. }
        ));
        assert_eq!(err.path, vec![0]);
    }

    #[test]
    fn app_checks_arity_and_congruence() {
        let d = Derivation::app("plus", vec![Derivation::hyp("unitL")]);
        let err = check_derivation(&monoid(), &d, &x_ctx()).unwrap_err();
        assert_eq!(
            err.kind,
            CheckErrorKind::ArityMismatch {
                op: "plus".into(),
                expected: 2,
                got: 1
            }
        );
        let d = Derivation::app(
            "plus",
            vec![Derivation::hyp("unitL"), Derivation::refl(v("x"))],
        );
        let j = check_derivation(&monoid(), &d, &x_ctx()).unwrap();
        assert_eq!(j.lhs, plus(plus(e(), v("x")), v("x")));
        assert_eq!(j.rhs, plus(v("x"), v("x")));
    }

    #[test]
    fn error_path_points_at_failing_premise() {
        let d = Derivation::trans(
            Derivation::refl(v("x")),
            Derivation::sym(Derivation::app("plus", vec![])),
        );
        let err = check_derivation(&monoid(), &d, &x_ctx()).unwrap_err();
        assert_eq!(err.path, vec![1, 0]);
        assert_eq!(err.to_string(), "app plus: 0 premise(s) for an operator of arity 2 (at root/1/0)");
    }

    #[test]
    fn sizes() {
        let t = e();
        assert_eq!(derivation_size(&Derivation::refl(t.clone())), 1);
        assert_eq!(derivation_size(&Derivation::sym(Derivation::refl(t.clone()))), 2);
        assert_eq!(
            derivation_size(&Derivation::trans(
                Derivation::refl(t.clone()),
                Derivation::refl(t)
            )),
            3
        );
    }

    #[test]
    fn soundness_harness() {
        let theory = monoid();
        let ctx = theory.equation("assoc").unwrap().ctx.clone();
        assert!(sound_check(&theory, &z2(), &Derivation::hyp("assoc"), &ctx).unwrap());

        let zero = RawModel::new()
            .carrier("M", &["0", "1"])
            .row("plus", &["0", "0"], "0")
            .row("plus", &["0", "1"], "0")
            .row("plus", &["1", "0"], "0")
            .row("plus", &["1", "1"], "0")
            .row("e", &[], "0")
            .validate(&monoid_signature())
            .unwrap();
        let err = sound_check(&theory, &zero, &Derivation::hyp("assoc"), &ctx).unwrap_err();
        assert!(matches!(err, SoundError::PreconditionFailed { .. }));
    }
}
