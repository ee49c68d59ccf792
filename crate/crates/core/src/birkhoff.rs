//! The term model of a theory and the derivations behind completeness.
//!
//! The term model over a context Γ interprets each sort by the terms of that
//! sort over Γ, each operator by itself, and equality by derivability. Its
//! equality is only semi-decidable, so it is not a [`crate::model::Model`];
//! instead every fact about it is witnessed by a [`Derivation`] that
//! [`check_derivation`] accepts:
//!
//! * [`identity_derivation`]: `t[σ0] ≡ t`
//! * [`evaluation_derivation`]: evaluating `t` under σ in the term model is `t[σ]`
//! * [`satisfies_derivation`]: every axiom holds in the term model
//! * [`completeness`]: evidence at the term model under σ0 becomes a derivation of the goal

use thiserror::Error;

use crate::calculus::{check_derivation, CheckError, Derivation, Judgment};
use crate::model::{Equation, Theory};
use crate::term::{Context, SortError, Substitution, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BirkhoffError {
    #[error("unknown hypothesis `{0}`")]
    UnknownHypothesis(String),
    #[error("substitution goes from {found}, expected {expected}")]
    ContextMismatch { expected: Context, found: Context },
    #[error("evidence concludes {found}, expected {expected}")]
    EvidenceMismatch {
        expected: Box<Judgment>,
        found: Box<Judgment>,
    },
    #[error(transparent)]
    Sort(#[from] SortError),
    #[error(transparent)]
    Check(#[from] CheckError),
}

/// The term model of `theory` over `ctx`.
#[derive(Debug, Clone)]
pub struct TermModel<'a> {
    theory: &'a Theory,
    ctx: Context,
}

impl<'a> TermModel<'a> {
    pub fn new(theory: &'a Theory, ctx: Context) -> Result<Self, SortError> {
        ctx.validate(theory.signature())?;
        Ok(TermModel { theory, ctx })
    }

    pub fn theory(&self) -> &Theory {
        self.theory
    }

    pub fn context(&self) -> &Context {
        &self.ctx
    }

    /// Value of `t` in the term model under the environment `sigma`.
    pub fn eval(&self, t: &Term, sigma: &Substitution) -> Result<Term, BirkhoffError> {
        tm_eval(self, t, sigma)
    }
}

/// σ0: each variable of `ctx` to itself.
pub fn identity_subst(ctx: &Context) -> Substitution {
    Substitution::identity(ctx)
}

/// Evaluation in the term model: variables are looked up in `sigma`, and
/// every operator is interpreted by itself.
pub fn tm_eval(model: &TermModel<'_>, t: &Term, sigma: &Substitution) -> Result<Term, BirkhoffError> {
    if sigma.target() != model.context() {
        return Err(BirkhoffError::ContextMismatch {
            expected: model.context().clone(),
            found: sigma.target().clone(),
        });
    }
    t.sort_of(model.theory().signature(), sigma.source())?;
    Ok(t.fold(
        &mut |x| sigma.get(x.as_str()).cloned().expect("checked against source"),
        &mut |op, args| Term::App(op.clone(), args),
    ))
}

/// `Γ ⊢ t[σ0] ≡ t`, by `base` at variables and `app` at applications.
pub fn identity_derivation(
    theory: &Theory,
    ctx: &Context,
    t: &Term,
) -> Result<Derivation, BirkhoffError> {
    t.sort_of(theory.signature(), ctx)?;
    Ok(identity_of(t))
}

fn identity_of(t: &Term) -> Derivation {
    match t {
        Term::Var(x) => Derivation::Base(x.clone()),
        Term::App(op, args) => Derivation::App(op.clone(), args.iter().map(identity_of).collect()),
    }
}

/// `Γ ⊢ tm_eval(t, σ) ≡ t[σ]`, by `refl (σ x)` at variables and `app` at applications.
///
/// Both sides coincide structurally; the derivation still follows the term.
pub fn evaluation_derivation(
    theory: &Theory,
    t: &Term,
    sigma: &Substitution,
) -> Result<Derivation, BirkhoffError> {
    t.sort_of(theory.signature(), sigma.source())?;
    Ok(evaluation_of(t, sigma))
}

fn evaluation_of(t: &Term, sigma: &Substitution) -> Derivation {
    match t {
        Term::Var(x) => Derivation::Refl(sigma.get(x.as_str()).cloned().expect("sorted over source")),
        Term::App(op, args) => Derivation::App(
            op.clone(),
            args.iter().map(|a| evaluation_of(a, sigma)).collect(),
        ),
    }
}

/// The term model satisfies axiom `name` under `sigma`:
/// `tm_eval(lhs, σ) ≡ lhs[σ] ≡ rhs[σ] ≡ tm_eval(rhs, σ)`.
pub fn satisfies_derivation(
    theory: &Theory,
    name: &str,
    sigma: &Substitution,
) -> Result<Derivation, BirkhoffError> {
    let eq = theory
        .equation(name)
        .ok_or_else(|| BirkhoffError::UnknownHypothesis(name.to_string()))?;
    if sigma.source() != &eq.ctx {
        return Err(BirkhoffError::ContextMismatch {
            expected: eq.ctx.clone(),
            found: sigma.source().clone(),
        });
    }
    Ok(Derivation::trans(
        evaluation_derivation(theory, &eq.lhs, sigma)?,
        Derivation::trans(
            Derivation::sub(Derivation::hyp(name), sigma.map().clone()),
            Derivation::sym(evaluation_derivation(theory, &eq.rhs, sigma)?),
        ),
    ))
}

/// The judgment that term-model evidence for `goal` must conclude:
/// `Γ ⊢ tm_eval(lhs, σ0) ≡ tm_eval(rhs, σ0)`.
pub fn required_evidence(theory: &Theory, goal: &Equation) -> Result<Judgment, BirkhoffError> {
    goal.check(theory.signature())?;
    let model = TermModel::new(theory, goal.ctx.clone())?;
    let sigma0 = identity_subst(&goal.ctx);
    Ok(Judgment {
        ctx: goal.ctx.clone(),
        sort: goal.sort.clone(),
        lhs: tm_eval(&model, &goal.lhs, &sigma0)?,
        rhs: tm_eval(&model, &goal.rhs, &sigma0)?,
    })
}

/// Turns term-model evidence into a derivation of `goal`, via the chain
/// `lhs ≡ lhs[σ0] ≡ tm_eval(lhs) ≡ tm_eval(rhs) ≡ rhs[σ0] ≡ rhs`.
pub fn completeness(
    theory: &Theory,
    goal: &Equation,
    evidence: &Derivation,
) -> Result<Derivation, BirkhoffError> {
    let expected = required_evidence(theory, goal)?;
    let found = check_derivation(theory, evidence, &goal.ctx)?;
    if found != expected {
        return Err(BirkhoffError::EvidenceMismatch {
            expected: Box::new(expected),
            found: Box::new(found),
        });
    }
    let sigma0 = identity_subst(&goal.ctx);
    let steps = [
        Derivation::sym(identity_derivation(theory, &goal.ctx, &goal.lhs)?),
        Derivation::sym(evaluation_derivation(theory, &goal.lhs, &sigma0)?),
        evidence.clone(),
        evaluation_derivation(theory, &goal.rhs, &sigma0)?,
        identity_derivation(theory, &goal.ctx, &goal.rhs)?,
    ];
    Ok(steps
        .into_iter()
        .rev()
        .reduce(|acc, step| Derivation::trans(step, acc))
        .expect("five steps"))
}

/// Conjugates a derivation `d` of `lhs ≡ rhs` into term-model evidence:
/// `tm_eval(lhs, σ0) ≡ lhs ≡ rhs ≡ tm_eval(rhs, σ0)`.
pub fn evidence_from_derivation(
    theory: &Theory,
    d: &Derivation,
    ctx: &Context,
) -> Result<(Equation, Derivation), BirkhoffError> {
    let j = check_derivation(theory, d, ctx)?;
    let sigma0 = identity_subst(ctx);
    let evidence = Derivation::trans(
        evaluation_derivation(theory, &j.lhs, &sigma0)?,
        Derivation::trans(
            d.clone(),
            Derivation::sym(evaluation_derivation(theory, &j.rhs, &sigma0)?),
        ),
    );
    Ok((j.to_equation(), evidence))
}
