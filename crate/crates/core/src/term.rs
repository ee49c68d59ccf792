//! Sorted terms over named variable contexts, and parallel substitution.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::signature::{is_identifier, Op, Signature, Sort, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SortError {
    #[error("unbound variable `{0}`")]
    UnboundVariable(Var),
    #[error("unknown operator `{0}`")]
    UnknownOperator(Op),
    #[error("operator `{op}` expects {expected} argument(s), got {got}")]
    ArityMismatch { op: Op, expected: usize, got: usize },
    #[error("argument {position} of `{op}` has sort {got}, expected {expected}")]
    SortMismatch {
        op: Op,
        position: usize,
        expected: Sort,
        got: Sort,
    },
    #[error("term has sort {got}, expected {expected}")]
    WrongSort { expected: Sort, got: Sort },
    #[error("undeclared sort `{0}`")]
    UndeclaredSort(Sort),
    #[error("`{0}` is not a valid identifier")]
    InvalidIdentifier(String),
    #[error("duplicate variable `{0}` in context")]
    DuplicateVariable(Var),
    #[error("substitution has no binding for `{0}`")]
    MissingBinding(Var),
    #[error("substitution binds `{0}`, which is not in its source context")]
    ExtraBinding(Var),
    #[error("substitution maps `{var}` of sort {expected} to a term of sort {got}")]
    BindingSortMismatch { var: Var, expected: Sort, got: Sort },
}

/// A finite assignment of sorts to variable names.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Context(BTreeMap<Var, Sort>);

impl Context {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a context from `(name, sort)` pairs, rejecting duplicates.
    pub fn from_pairs<V, S>(pairs: impl IntoIterator<Item = (V, S)>) -> Result<Self, SortError>
    where
        V: Into<Var>,
        S: Into<Sort>,
    {
        let mut map = BTreeMap::new();
        for (v, s) in pairs {
            let v = v.into();
            if map.contains_key(&v) {
                return Err(SortError::DuplicateVariable(v));
            }
            map.insert(v, s.into());
        }
        Ok(Context(map))
    }

    /// Adds or replaces a binding.
    pub fn with(mut self, var: &str, sort: &str) -> Self {
        self.0.insert(var.into(), sort.into());
        self
    }

    pub fn insert(&mut self, var: Var, sort: Sort) -> Option<Sort> {
        self.0.insert(var, sort)
    }

    pub fn get(&self, var: &str) -> Option<&Sort> {
        self.0.get(var)
    }

    pub fn contains(&self, var: &str) -> bool {
        self.0.contains_key(var)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Bindings in lexicographic variable order.
    pub fn iter(&self) -> impl Iterator<Item = (&Var, &Sort)> {
        self.0.iter()
    }

    pub fn vars(&self) -> impl Iterator<Item = &Var> {
        self.0.keys()
    }

    pub fn vars_of_sort<'a>(&'a self, sort: &'a Sort) -> impl Iterator<Item = &'a Var> + 'a {
        self.0.iter().filter(move |(_, s)| *s == sort).map(|(v, _)| v)
    }

    /// Checks that every variable name is an identifier and every sort is declared.
    pub fn validate(&self, sig: &Signature) -> Result<(), SortError> {
        for (v, s) in &self.0 {
            if !is_identifier(v.as_str()) {
                return Err(SortError::InvalidIdentifier(v.to_string()));
            }
            if !sig.has_sort(s.as_str()) {
                return Err(SortError::UndeclaredSort(s.clone()));
            }
        }
        Ok(())
    }
}

impl fmt::Display for Context {
    /// `{x:M, y:M}`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (v, s)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}:{s}")?;
        }
        f.write_str("}")
    }
}

/// A variable or an operator applied to an ordered argument list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(Var),
    App(Op, Vec<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.into())
    }

    pub fn app(op: &str, args: Vec<Term>) -> Term {
        Term::App(op.into(), args)
    }

    pub fn constant(op: &str) -> Term {
        Term::App(op.into(), Vec::new())
    }

    /// Syntax-directed sort inference; the first error in left-to-right order wins.
    pub fn sort_of(&self, sig: &Signature, ctx: &Context) -> Result<Sort, SortError> {
        match self {
            Term::Var(x) => ctx
                .get(x.as_str())
                .cloned()
                .ok_or_else(|| SortError::UnboundVariable(x.clone())),
            Term::App(op, args) => {
                let decl = sig
                    .lookup(op.as_str())
                    .ok_or_else(|| SortError::UnknownOperator(op.clone()))?;
                if decl.arity() != args.len() {
                    return Err(SortError::ArityMismatch {
                        op: op.clone(),
                        expected: decl.arity(),
                        got: args.len(),
                    });
                }
                for (position, (arg, expected)) in args.iter().zip(&decl.arg_sorts).enumerate() {
                    let got = arg.sort_of(sig, ctx)?;
                    if &got != expected {
                        return Err(SortError::SortMismatch {
                            op: op.clone(),
                            position,
                            expected: expected.clone(),
                            got,
                        });
                    }
                }
                Ok(decl.result_sort.clone())
            }
        }
    }

    /// Checks that the term is well-sorted at `sort`.
    pub fn check_sort(&self, sig: &Signature, ctx: &Context, sort: &Sort) -> Result<(), SortError> {
        let got = self.sort_of(sig, ctx)?;
        if &got == sort {
            Ok(())
        } else {
            Err(SortError::WrongSort {
                expected: sort.clone(),
                got,
            })
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            Term::Var(x) => {
                out.insert(x.clone());
            }
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    /// Replaces every variable by its image under `map`, simultaneously.
    pub fn subst(&self, map: &BTreeMap<Var, Term>) -> Result<Term, SortError> {
        match self {
            Term::Var(x) => map
                .get(x)
                .cloned()
                .ok_or_else(|| SortError::MissingBinding(x.clone())),
            Term::App(op, args) => Ok(Term::App(
                op.clone(),
                args.iter().map(|a| a.subst(map)).collect::<Result<_, _>>()?,
            )),
        }
    }

    /// Syntactic matching: extends `bindings` so that `self[bindings] == t`.
    /// Variables of the pattern may be bound only once, consistently.
    pub fn match_onto(&self, t: &Term, bindings: &mut BTreeMap<Var, Term>) -> bool {
        match (self, t) {
            (Term::Var(x), _) => match bindings.get(x) {
                Some(bound) => bound == t,
                None => {
                    bindings.insert(x.clone(), t.clone());
                    true
                }
            },
            (Term::App(f, ps), Term::App(g, ts)) => {
                f == g
                    && ps.len() == ts.len()
                    && ps.iter().zip(ts).all(|(p, a)| p.match_onto(a, bindings))
            }
            _ => false,
        }
    }

    /// Structural recursion: `var` at variables, `app` at applications.
    pub fn fold<A>(
        &self,
        var: &mut impl FnMut(&Var) -> A,
        app: &mut impl FnMut(&Op, Vec<A>) -> A,
    ) -> A {
        match self {
            Term::Var(x) => var(x),
            Term::App(op, args) => {
                let vals = args.iter().map(|a| a.fold(var, app)).collect();
                app(op, vals)
            }
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::App(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
        }
    }
}

impl fmt::Display for Term {
    /// Canonical form: nullary applications always carry `()`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(x) => write!(f, "{x}"),
            Term::App(op, args) => {
                write!(f, "{op}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

/// A parallel substitution from `source` (Δ) to `target` (Γ): a term over Γ
/// for every variable of Δ, of the same sort.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Substitution {
    source: Context,
    target: Context,
    map: BTreeMap<Var, Term>,
}

impl Substitution {
    /// Validates totality on `source`, absence of extra bindings, and sort preservation.
    pub fn new(
        sig: &Signature,
        source: Context,
        target: Context,
        map: BTreeMap<Var, Term>,
    ) -> Result<Self, SortError> {
        for (x, expected) in source.iter() {
            let t = map
                .get(x)
                .ok_or_else(|| SortError::MissingBinding(x.clone()))?;
            let got = t.sort_of(sig, &target)?;
            if &got != expected {
                return Err(SortError::BindingSortMismatch {
                    var: x.clone(),
                    expected: expected.clone(),
                    got,
                });
            }
        }
        if let Some(x) = map.keys().find(|x| !source.contains(x.as_str())) {
            return Err(SortError::ExtraBinding(x.clone()));
        }
        Ok(Substitution {
            source,
            target,
            map,
        })
    }

    /// Builds the substitution whose source is inferred from the bindings:
    /// each bound variable gets the sort of its image over `target`.
    pub fn infer(
        sig: &Signature,
        target: Context,
        map: BTreeMap<Var, Term>,
    ) -> Result<Self, SortError> {
        let mut source = Context::new();
        for (x, t) in &map {
            source.insert(x.clone(), t.sort_of(sig, &target)?);
        }
        Ok(Substitution {
            source,
            target,
            map,
        })
    }

    /// σ0: every variable of `ctx` maps to itself.
    pub fn identity(ctx: &Context) -> Self {
        Substitution {
            source: ctx.clone(),
            target: ctx.clone(),
            map: ctx.vars().map(|x| (x.clone(), Term::Var(x.clone()))).collect(),
        }
    }

    pub fn source(&self) -> &Context {
        &self.source
    }

    pub fn target(&self) -> &Context {
        &self.target
    }

    pub fn map(&self) -> &BTreeMap<Var, Term> {
        &self.map
    }

    pub fn into_map(self) -> BTreeMap<Var, Term> {
        self.map
    }

    pub fn get(&self, x: &str) -> Option<&Term> {
        self.map.get(x)
    }

    /// `t[σ]` without re-checking `t`; fails only on a missing binding.
    pub fn apply(&self, t: &Term) -> Result<Term, SortError> {
        t.subst(&self.map)
    }

    /// `t[σ]` after checking that `t` is well-sorted over the source context.
    pub fn apply_checked(&self, sig: &Signature, t: &Term) -> Result<Term, SortError> {
        t.sort_of(sig, &self.source)?;
        self.apply(t)
    }

    /// The substitution `x ↦ σ(x)[τ]`, from this source to τ's target.
    pub fn then(&self, tau: &Substitution) -> Result<Substitution, SortError> {
        let map = self
            .map
            .iter()
            .map(|(x, t)| Ok((x.clone(), tau.apply(t)?)))
            .collect::<Result<_, SortError>>()?;
        Ok(Substitution {
            source: self.source.clone(),
            target: tau.target.clone(),
            map,
        })
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (x, t)) in self.map.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x} ↦ {t}")?;
        }
        f.write_str("}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signature::monoid_signature;

    fn x() -> Term {
        Term::var("x")
    }
    fn y() -> Term {
        Term::var("y")
    }
    fn e() -> Term {
        Term::constant("e")
    }
    fn plus(a: Term, b: Term) -> Term {
        Term::app("plus", vec![a, b])
    }

    #[test]
    fn sort_inference() {
        let sig = monoid_signature();
        let ctx = Context::new().with("x", "M");
        assert_eq!(plus(x(), e()).sort_of(&sig, &ctx).unwrap(), Sort::from("M"));
        assert_eq!(
            x().sort_of(&sig, &Context::new()).unwrap_err(),
            SortError::UnboundVariable("x".into())
        );
        assert_eq!(
            Term::app("plus", vec![x()]).sort_of(&sig, &ctx).unwrap_err(),
            SortError::ArityMismatch {
                op: "plus".into(),
                expected: 2,
                got: 1
            }
        );
        assert_eq!(
            Term::constant("mul").sort_of(&sig, &ctx).unwrap_err(),
            SortError::UnknownOperator("mul".into())
        );
    }

    #[test]
    fn sort_mismatch_position() {
        let sig = crate::signature::RawSignature::new()
            .sort("A")
            .sort("B")
            .op("f", &["A", "B"], "A")
            .op("a", &[], "A")
            .validate()
            .unwrap();
        let t = Term::app("f", vec![Term::constant("a"), Term::constant("a")]);
        assert_eq!(
            t.sort_of(&sig, &Context::new()).unwrap_err(),
            SortError::SortMismatch {
                op: "f".into(),
                position: 1,
                expected: "B".into(),
                got: "A".into()
            }
        );
    }

    #[test]
    fn subst_variable_and_app() {
        let sig = monoid_signature();
        let one = Context::new().with("x", "M");
        let src = Context::new().with("x", "M");
        let s = Substitution::new(&sig, src, Context::new(), [("x".into(), e())].into()).unwrap();
        assert_eq!(s.apply(&x()).unwrap(), e());

        let src = Context::new().with("x", "M").with("y", "M");
        let s = Substitution::new(
            &sig,
            src,
            one,
            [("x".into(), e()), ("y".into(), plus(x(), x()))].into(),
        )
        .unwrap();
        assert_eq!(
            s.apply(&plus(x(), y())).unwrap(),
            plus(e(), plus(x(), x()))
        );
    }

    #[test]
    fn identity_is_structural() {
        let ctx = Context::new().with("x", "M").with("y", "M");
        let s = Substitution::identity(&ctx);
        let t = plus(x(), plus(e(), y()));
        assert_eq!(s.apply(&t).unwrap(), t);
        assert!(Substitution::identity(&Context::new()).map().is_empty());
    }

    #[test]
    fn substitution_validation() {
        let sig = monoid_signature();
        let src = Context::new().with("x", "M").with("y", "M");
        let err =
            Substitution::new(&sig, src.clone(), Context::new(), [("x".into(), e())].into())
                .unwrap_err();
        assert_eq!(err, SortError::MissingBinding("y".into()));
        let err = Substitution::new(
            &sig,
            Context::new(),
            Context::new(),
            [("x".into(), e())].into(),
        )
        .unwrap_err();
        assert_eq!(err, SortError::ExtraBinding("x".into()));
        let err = Substitution::new(
            &sig,
            src,
            Context::new(),
            [("x".into(), e()), ("y".into(), x())].into(),
        )
        .unwrap_err();
        assert_eq!(err, SortError::UnboundVariable("x".into()));
        assert_eq!(
            Term::var("z").subst(&BTreeMap::new()).unwrap_err(),
            SortError::MissingBinding("z".into())
        );
    }

    #[test]
    fn free_vars_examples() {
        assert!(e().free_vars().is_empty());
        assert_eq!(
            plus(x(), plus(y(), x())).free_vars(),
            ["x".into(), "y".into()].into()
        );
        assert_eq!(Term::var("z").free_vars(), ["z".into()].into());
    }

    #[test]
    fn display() {
        assert_eq!(plus(e(), x()).to_string(), "plus(e(),x)");
        let ctx = Context::new().with("y", "M").with("x", "M");
        assert_eq!(ctx.to_string(), "{x:M, y:M}");
    }
}
