//! Random generators for signatures, terms, substitutions, finite models and
//! derivations. Every generator is driven by a caller-supplied [`Rng`], so a
//! seeded generator reproduces the same values.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::calculus::Derivation;
use crate::model::{Environment, Model, Odometer, RawModel, Theory};
use crate::signature::{OpDecl, RawSignature, Signature, Sort, Var};
use crate::term::{Context, Substitution, Term};

const VAR_NAMES: [&str; 6] = ["x", "y", "z", "u", "v", "w"];

/// Shape limits for [`signature`].
#[derive(Debug, Clone, Copy)]
pub struct SigShape {
    pub min_sorts: usize,
    pub max_sorts: usize,
    pub max_arity: usize,
    pub max_ops_per_sort: usize,
}

impl Default for SigShape {
    fn default() -> Self {
        SigShape {
            min_sorts: 2,
            max_sorts: 3,
            max_arity: 3,
            max_ops_per_sort: 3,
        }
    }
}

/// Sorts `A`, `B`, ...; each sort gets one constant `cA`, ... and up to
/// `max_ops_per_sort` further operators `f0`, `f1`, ... with random arities.
pub fn signature<R: Rng + ?Sized>(rng: &mut R, shape: SigShape) -> Signature {
    let n = rng.gen_range(shape.min_sorts..=shape.max_sorts);
    let sorts: Vec<String> = (0..n).map(|i| ((b'A' + i as u8) as char).to_string()).collect();
    let mut raw = RawSignature::new();
    for s in &sorts {
        raw = raw.sort(s);
    }
    let mut next = 0;
    for s in &sorts {
        raw = raw.op(&format!("c{s}"), &[], s);
        for _ in 0..rng.gen_range(0..=shape.max_ops_per_sort) {
            let arity = rng.gen_range(1..=shape.max_arity);
            let args: Vec<&str> = (0..arity)
                .map(|_| sorts.choose(rng).unwrap().as_str())
                .collect();
            raw = raw.op(&format!("f{next}"), &args, s);
            next += 1;
        }
    }
    raw.validate().expect("generated signature is valid")
}

/// One to `max_per_sort` variables of every sort, with distinct names.
pub fn context<R: Rng + ?Sized>(rng: &mut R, sig: &Signature, max_per_sort: usize) -> Context {
    let mut ctx = Context::new();
    let mut names = (0..).map(|i| {
        let base = VAR_NAMES[i % VAR_NAMES.len()];
        match i / VAR_NAMES.len() {
            0 => base.to_string(),
            k => format!("{base}{k}"),
        }
    });
    for s in sig.sorts() {
        for _ in 0..rng.gen_range(1..=max_per_sort.max(1)) {
            ctx.insert(Var::new(names.next().unwrap()), s.clone());
        }
    }
    ctx
}

/// A random term of `sort` over `ctx` with [`Term::depth`] at most `depth`, or `None`
/// if no such term exists along the random choices made.
pub fn term<R: Rng + ?Sized>(
    rng: &mut R,
    sig: &Signature,
    ctx: &Context,
    sort: &Sort,
    depth: usize,
) -> Option<Term> {
    let leaves: Vec<Term> = ctx
        .vars_of_sort(sort)
        .map(|x| Term::Var(x.clone()))
        .chain(
            sig.ops_with_result(sort)
                .filter(|d| d.arity() == 0 && depth > 0)
                .map(|d| Term::App(d.name.clone(), Vec::new())),
        )
        .collect();
    let compound: Vec<&OpDecl> = sig
        .ops_with_result(sort)
        .filter(|d| d.arity() > 0)
        .collect();
    if depth > 0 && !compound.is_empty() && (leaves.is_empty() || rng.gen_bool(0.6)) {
        let d = compound.choose(rng).unwrap();
        let args: Option<Vec<Term>> = d
            .arg_sorts
            .iter()
            .map(|s| term(rng, sig, ctx, s, depth - 1))
            .collect();
        if let Some(args) = args {
            return Some(Term::App(d.name.clone(), args));
        }
    }
    leaves.choose(rng).cloned()
}

/// A random substitution from `source` to `target` with images of depth at
/// most `depth`.
pub fn substitution<R: Rng + ?Sized>(
    rng: &mut R,
    sig: &Signature,
    source: &Context,
    target: &Context,
    depth: usize,
) -> Option<Substitution> {
    let map: Option<BTreeMap<Var, Term>> = source
        .iter()
        .map(|(x, s)| Some((x.clone(), term(rng, sig, target, s, depth)?)))
        .collect();
    Substitution::new(sig, source.clone(), target.clone(), map?).ok()
}

/// A random finite model with carriers of size 1 to `max_size` labelled
/// `0`, `1`, ... When `setoid` is set, some elements are identified with
/// earlier ones and the tables respect the identification.
pub fn model<R: Rng + ?Sized>(rng: &mut R, sig: &Signature, max_size: usize, setoid: bool) -> Model {
    let mut raw = RawModel::new();
    let mut classes: BTreeMap<Sort, Vec<usize>> = BTreeMap::new();
    for s in sig.sorts() {
        let n = rng.gen_range(1..=max_size);
        let mut repr = Vec::with_capacity(n);
        for i in 0..n {
            let roots: Vec<usize> = (0..i).filter(|&j| repr[j] == j).collect();
            if setoid && !roots.is_empty() && rng.gen_bool(0.4) {
                repr.push(*roots.choose(rng).unwrap());
            } else {
                repr.push(i);
            }
        }
        raw.carriers
            .push((s.clone(), (0..n).map(|i| i.to_string()).collect()));
        for (i, &r) in repr.iter().enumerate() {
            if i != r {
                raw.reprs.push((s.clone(), i.to_string(), r.to_string()));
            }
        }
        classes.insert(s.clone(), repr);
    }
    for d in sig.ops() {
        let arg_reprs: Vec<&Vec<usize>> = d.arg_sorts.iter().map(|s| &classes[s]).collect();
        let out = &classes[&d.result_sort];
        let radices: Vec<usize> = arg_reprs.iter().map(|r| r.len()).collect();
        let mut at_roots: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        for tuple in Odometer::new(radices) {
            let root: Vec<usize> = tuple.iter().zip(&arg_reprs).map(|(&a, r)| r[a]).collect();
            let class = *at_roots
                .entry(root)
                .or_insert_with(|| out[rng.gen_range(0..out.len())]);
            let members: Vec<usize> = (0..out.len()).filter(|&j| out[j] == class).collect();
            let value = *members.choose(rng).unwrap();
            raw.rows.push((
                d.name.clone(),
                tuple.iter().map(usize::to_string).collect(),
                value.to_string(),
            ));
        }
    }
    Model::validate(sig, raw).expect("generated model is valid")
}

/// Uniformly random values for every variable of `ctx`.
pub fn environment<R: Rng + ?Sized>(rng: &mut R, model: &Model, ctx: &Context) -> Environment {
    let labels: Vec<(String, String)> = ctx
        .iter()
        .map(|(x, s)| {
            let c = model.carrier(s.as_str()).expect("sort has a carrier");
            (x.to_string(), c.labels().choose(rng).unwrap().clone())
        })
        .collect();
    model
        .environment(ctx, labels.iter().map(|(x, l)| (x.as_str(), l.as_str())))
        .expect("labels come from the model")
}

/// Random derivations over a fixed theory, using every rule of the calculus.
/// Rewrite steps are found by matching equation sides against the current
/// term, so `trans` chains line up by construction.
#[derive(Debug, Clone, Copy)]
pub struct DerivationGen<'t> {
    pub theory: &'t Theory,
    /// Bound on [`Derivation::depth`].
    pub max_depth: usize,
    /// Bound on the depth of freshly generated terms.
    pub term_depth: usize,
}

type Step = (Derivation, Term, Term);

impl<'t> DerivationGen<'t> {
    pub fn new(theory: &'t Theory) -> Self {
        DerivationGen {
            theory,
            max_depth: 6,
            term_depth: 2,
        }
    }

    /// A derivation checked in `ctx` concluding at a random sort.
    pub fn derivation<R: Rng + ?Sized>(&self, rng: &mut R, ctx: &Context) -> Option<Derivation> {
        let sorts: Vec<&Sort> = self.theory.signature().sorts().collect();
        let sort = (*sorts.choose(rng)?).clone();
        self.derivation_of_sort(rng, ctx, &sort)
    }

    pub fn derivation_of_sort<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        ctx: &Context,
        sort: &Sort,
    ) -> Option<Derivation> {
        self.any(rng, ctx, sort, self.max_depth).map(|(d, _, _)| d)
    }

    fn sig(&self) -> &Signature {
        self.theory.signature()
    }

    fn hyps<'a>(&'a self, ctx: &'a Context, sort: &'a Sort) -> impl Iterator<Item = Step> + 'a {
        self.theory
            .equations()
            .filter(move |(_, e)| &e.ctx == ctx && &e.sort == sort)
            .map(|(n, e)| (Derivation::hyp(n), e.lhs.clone(), e.rhs.clone()))
    }

    fn leaf<R: Rng + ?Sized>(&self, rng: &mut R, ctx: &Context, sort: &Sort) -> Option<Step> {
        let mut options: Vec<Step> = self.hyps(ctx, sort).collect();
        if let Some(x) = ctx.vars_of_sort(sort).collect::<Vec<_>>().choose(rng) {
            let t = Term::Var((*x).clone());
            options.push((Derivation::Base((*x).clone()), t.clone(), t));
        }
        if let Some(t) = term(rng, self.sig(), ctx, sort, self.term_depth) {
            options.push((Derivation::Refl(t.clone()), t.clone(), t));
        }
        options.choose(rng).cloned()
    }

    fn any<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        ctx: &Context,
        sort: &Sort,
        depth: usize,
    ) -> Option<Step> {
        if depth <= 1 {
            return self.leaf(rng, ctx, sort);
        }
        for _ in 0..8 {
            let step = match rng.gen_range(0..6) {
                0 => self.leaf(rng, ctx, sort),
                1 => term(rng, self.sig(), ctx, sort, self.term_depth)
                    .and_then(|t| self.from(rng, ctx, &t, depth)),
                2 => self
                    .any(rng, ctx, sort, depth - 1)
                    .map(|(d, l, r)| (Derivation::sym(d), r, l)),
                3 => self.any(rng, ctx, sort, depth - 1).and_then(|(d1, a, b)| {
                    let (d2, _, c) = self.from(rng, ctx, &b, depth - 1)?;
                    Some((Derivation::trans(d1, d2), a, c))
                }),
                4 => self.sub(rng, ctx, sort, depth),
                _ => self.app(rng, ctx, sort, depth),
            };
            if step.is_some() {
                return step;
            }
        }
        self.leaf(rng, ctx, sort)
    }

    /// `sub` over a premise in an equation's context or a fresh context.
    fn sub<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        ctx: &Context,
        sort: &Sort,
        depth: usize,
    ) -> Option<Step> {
        let own: Vec<&Context> = self
            .theory
            .equations()
            .filter(|(_, e)| &e.sort == sort)
            .map(|(_, e)| &e.ctx)
            .collect();
        let delta = match own.choose(rng) {
            Some(c) if rng.gen_bool(0.6) => (*c).clone(),
            _ => context(rng, self.sig(), 2),
        };
        let (d, l, r) = self.any(rng, &delta, sort, depth - 1)?;
        let sigma = substitution(rng, self.sig(), &delta, ctx, self.term_depth)?;
        Some((
            Derivation::Sub(Box::new(d), sigma.map().clone()),
            sigma.apply(&l).ok()?,
            sigma.apply(&r).ok()?,
        ))
    }

    fn app<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        ctx: &Context,
        sort: &Sort,
        depth: usize,
    ) -> Option<Step> {
        let ops: Vec<&OpDecl> = self.sig().ops_with_result(sort).collect();
        let op = ops.choose(rng)?;
        let mut premises = Vec::new();
        let (mut ls, mut rs) = (Vec::new(), Vec::new());
        for s in &op.arg_sorts {
            let (d, l, r) = self.any(rng, ctx, s, depth - 1)?;
            premises.push(d);
            ls.push(l);
            rs.push(r);
        }
        Some((
            Derivation::App(op.name.clone(), premises),
            Term::App(op.name.clone(), ls),
            Term::App(op.name.clone(), rs),
        ))
    }

    /// A derivation whose left-hand side is exactly `t`.
    fn from<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        ctx: &Context,
        t: &Term,
        depth: usize,
    ) -> Option<Step> {
        let refl = || (Derivation::Refl(t.clone()), t.clone(), t.clone());
        if depth == 0 {
            return None;
        }
        let mut options: Vec<Step> = vec![refl()];
        if let Term::Var(x) = t {
            options.push((Derivation::Base(x.clone()), t.clone(), t.clone()));
        }
        if depth >= 2 {
            options.extend(self.rewrites(rng, ctx, t, depth));
            if let Term::App(op, args) = t {
                let premises: Option<Vec<Step>> = args
                    .iter()
                    .map(|a| self.from(rng, ctx, a, depth - 1))
                    .collect();
                if let Some(ps) = premises {
                    let rhs = Term::App(op.clone(), ps.iter().map(|p| p.2.clone()).collect());
                    let ds = ps.into_iter().map(|p| p.0).collect();
                    options.push((Derivation::App(op.clone(), ds), t.clone(), rhs));
                }
            }
            if depth >= 3 && rng.gen_bool(0.3) {
                if let Some((d1, _, b)) = self.from(rng, ctx, t, depth - 1) {
                    if let Some((d2, _, c)) = self.from(rng, ctx, &b, depth - 1) {
                        options.push((Derivation::trans(d1, d2), t.clone(), c));
                    }
                }
            }
        }
        options.choose(rng).cloned()
    }

    /// Root rewrites of `t` by an equation, oriented either way.
    fn rewrites<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        ctx: &Context,
        t: &Term,
        depth: usize,
    ) -> Vec<Step> {
        let sig = self.sig();
        let Ok(sort) = t.sort_of(sig, ctx) else {
            return Vec::new();
        };
        let mut out = Vec::new();
        for (name, e) in self.theory.equations() {
            if e.sort != sort {
                continue;
            }
            for flip in [false, true] {
                let (from, to) = if flip { (&e.rhs, &e.lhs) } else { (&e.lhs, &e.rhs) };
                let mut theta = BTreeMap::new();
                if !from.match_onto(t, &mut theta) {
                    continue;
                }
                let mut complete = true;
                for (x, s) in e.ctx.iter() {
                    if !theta.contains_key(x) {
                        match term(rng, sig, ctx, s, self.term_depth) {
                            Some(u) => {
                                theta.insert(x.clone(), u);
                            }
                            None => complete = false,
                        }
                    }
                }
                if !complete {
                    continue;
                }
                let identity = &e.ctx == ctx
                    && theta.iter().all(|(x, u)| u == &Term::Var(x.clone()));
                let base = if identity && rng.gen_bool(0.5) {
                    Derivation::hyp(name)
                } else {
                    Derivation::Sub(Box::new(Derivation::hyp(name)), theta.clone())
                };
                let needed = if flip { 3 } else { 2 };
                if depth < needed {
                    continue;
                }
                let d = if flip { Derivation::sym(base) } else { base };
                let Ok(rhs) = to.subst(&theta) else { continue };
                out.push((d, t.clone(), rhs));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::check_derivation;
    use crate::model::fixtures::monoid;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    #[test]
    fn generated_models_validate() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..50 {
            let sig = signature(&mut rng, SigShape::default());
            let m = model(&mut rng, &sig, 4, true);
            let raw = m.to_raw();
            assert_eq!(Model::validate(&sig, raw).unwrap(), m);
        }
    }

    #[test]
    fn generated_terms_are_well_sorted() {
        let mut rng = StdRng::seed_from_u64(8);
        for _ in 0..200 {
            let sig = signature(&mut rng, SigShape::default());
            let ctx = context(&mut rng, &sig, 2);
            for s in sig.sorts() {
                let t = term(&mut rng, &sig, &ctx, s, 3).unwrap();
                assert_eq!(&t.sort_of(&sig, &ctx).unwrap(), s);
                assert!(t.depth() <= 3);
            }
        }
    }

    #[test]
    fn generated_derivations_check_with_tracked_conclusion() {
        let th = monoid();
        let gen = DerivationGen::new(&th);
        let mut rng = StdRng::seed_from_u64(9);
        let mut seen = BTreeMap::new();
        for _ in 0..300 {
            let ctx = context(&mut rng, th.signature(), 3);
            let sort = Sort::from("M");
            let (d, l, r) = gen.any(&mut rng, &ctx, &sort, gen.max_depth).unwrap();
            assert!(d.depth() <= gen.max_depth);
            let j = check_derivation(&th, &d, &ctx).unwrap();
            assert_eq!((j.lhs, j.rhs), (l, r));
            for (rule, n) in d.rule_counts() {
                *seen.entry(rule).or_insert(0) += n;
            }
        }
        assert_eq!(seen.len(), 7, "{seen:?}");
    }
}
