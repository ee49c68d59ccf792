//! Finite setoid models.
//!
//! Each sort is interpreted by a nonempty list of element labels together with
//! a canonical-representative function; two elements are equal in the model
//! iff they have the same representative. Every operator is interpreted by a
//! total table, and tables must be congruent: equal arguments give equal
//! results.

mod search;
mod theory;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use thiserror::Error;

use crate::signature::{Op, Signature, Sort, Var};
use crate::term::{Context, SortError, Substitution, Term};

pub use search::{search_countermodel, Countermodel, DEFAULT_BUDGET};
pub use theory::{Equation, Theory, TheoryError};

/// Index of an element in the carrier of its sort.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Elem(pub usize);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("no carrier given for sort `{0}`")]
    MissingCarrier(Sort),
    #[error("carrier given for undeclared sort `{0}`")]
    UndeclaredSort(Sort),
    #[error("carrier for sort `{0}` given twice")]
    DuplicateCarrier(Sort),
    #[error("carrier of sort `{0}` is empty")]
    EmptyCarrier(Sort),
    #[error("element `{elem}` listed twice in carrier of `{sort}`")]
    DuplicateElement { sort: Sort, elem: String },
    #[error("`{elem}` is not an element of the carrier of `{sort}`")]
    UnknownElement { sort: Sort, elem: String },
    #[error("representative of `{elem}` given twice in sort `{sort}`")]
    DuplicateRepr { sort: Sort, elem: String },
    #[error("representative function of `{sort}` is not idempotent at `{elem}`")]
    NonIdempotentRepr { sort: Sort, elem: String },
    #[error("unknown operator `{0}`")]
    UnknownOperator(Op),
    #[error("row for `{op}` has {got} argument(s), expected {expected}")]
    RowArity { op: Op, expected: usize, got: usize },
    #[error("duplicate row {op}({})", .tuple.join(","))]
    DuplicateRow { op: Op, tuple: Vec<String> },
    #[error("table of `{op}` has no row for ({})", .tuple.join(","))]
    PartialTable { op: Op, tuple: Vec<String> },
    #[error("`{op}` is not congruent: ({}) and ({}) have equal arguments but unequal results", .tuple.join(","), .other.join(","))]
    NonCongruentOp {
        op: Op,
        tuple: Vec<String>,
        other: Vec<String>,
    },
    #[error("environment is for {found}, expected {expected}")]
    ContextMismatch { expected: Context, found: Context },
    #[error("model and theory have different signatures")]
    SignatureMismatch,
    #[error("maximum carrier size must be at least 1")]
    InvalidSize,
    #[error("enumeration budget of {0} exhausted")]
    BudgetExceeded(u64),
    #[error(transparent)]
    Sort(#[from] SortError),
}

/// Unvalidated model description with element labels.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RawModel {
    pub carriers: Vec<(Sort, Vec<String>)>,
    /// `(sort, element, representative)`; elements not listed are their own representative.
    pub reprs: Vec<(Sort, String, String)>,
    /// `(op, argument labels, result label)`.
    pub rows: Vec<(Op, Vec<String>, String)>,
}

impl RawModel {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn carrier(mut self, sort: &str, elems: &[&str]) -> Self {
        self.carriers
            .push((sort.into(), elems.iter().map(|s| s.to_string()).collect()));
        self
    }

    pub fn repr(mut self, sort: &str, elem: &str, to: &str) -> Self {
        self.reprs.push((sort.into(), elem.into(), to.into()));
        self
    }

    pub fn row(mut self, op: &str, args: &[&str], value: &str) -> Self {
        self.rows.push((
            op.into(),
            args.iter().map(|s| s.to_string()).collect(),
            value.into(),
        ));
        self
    }

    pub fn validate(self, sig: &Signature) -> Result<Model, ModelError> {
        Model::validate(sig, self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Carrier {
    elems: Vec<String>,
    repr: Vec<usize>,
    index: HashMap<String, usize>,
}

impl Carrier {
    pub(crate) fn discrete(size: usize) -> Self {
        let elems: Vec<String> = (0..size).map(|i| i.to_string()).collect();
        let index = elems.iter().cloned().zip(0..).collect();
        Carrier {
            elems,
            repr: (0..size).collect(),
            index,
        }
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn label(&self, e: Elem) -> &str {
        &self.elems[e.0]
    }

    pub fn labels(&self) -> &[String] {
        &self.elems
    }

    pub fn lookup(&self, label: &str) -> Option<Elem> {
        self.index.get(label).copied().map(Elem)
    }

    pub fn repr(&self, e: Elem) -> Elem {
        Elem(self.repr[e.0])
    }

    pub fn is_discrete(&self) -> bool {
        self.repr.iter().enumerate().all(|(i, &r)| i == r)
    }

    pub fn elems(&self) -> impl Iterator<Item = Elem> {
        (0..self.elems.len()).map(Elem)
    }
}

/// A total table, row-major with the first argument most significant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpTable {
    strides: Vec<usize>,
    values: Vec<usize>,
}

impl OpTable {
    pub(crate) fn new(radices: &[usize], values: Vec<usize>) -> Self {
        let mut strides = vec![1; radices.len()];
        for i in (0..radices.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * radices[i + 1];
        }
        debug_assert_eq!(values.len(), radices.iter().product::<usize>());
        OpTable { strides, values }
    }

    pub fn get(&self, args: &[Elem]) -> Elem {
        let idx: usize = args.iter().zip(&self.strides).map(|(a, s)| a.0 * s).sum();
        Elem(self.values[idx])
    }
}

/// A validated finite setoid model of a signature.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Model {
    sig: Signature,
    carriers: BTreeMap<Sort, Carrier>,
    tables: BTreeMap<Op, OpTable>,
}

impl Model {
    /// Checks carriers, representatives, totality, and congruence of every table.
    pub fn validate(sig: &Signature, raw: RawModel) -> Result<Model, ModelError> {
        let mut carriers = BTreeMap::new();
        for (sort, elems) in raw.carriers {
            if !sig.has_sort(sort.as_str()) {
                return Err(ModelError::UndeclaredSort(sort));
            }
            if carriers.contains_key(&sort) {
                return Err(ModelError::DuplicateCarrier(sort));
            }
            if elems.is_empty() {
                return Err(ModelError::EmptyCarrier(sort));
            }
            let mut index = HashMap::new();
            for (i, e) in elems.iter().enumerate() {
                if index.insert(e.clone(), i).is_some() {
                    return Err(ModelError::DuplicateElement {
                        sort,
                        elem: e.clone(),
                    });
                }
            }
            let repr = (0..elems.len()).collect();
            carriers.insert(sort, Carrier { elems, repr, index });
        }
        if let Some(s) = sig.sorts().find(|s| !carriers.contains_key(*s)) {
            return Err(ModelError::MissingCarrier(s.clone()));
        }

        let mut repr_given: BTreeMap<Sort, Vec<bool>> = BTreeMap::new();
        for (sort, elem, to) in raw.reprs {
            let carrier = carriers
                .get_mut(&sort)
                .ok_or_else(|| ModelError::UndeclaredSort(sort.clone()))?;
            let unknown = |elem: &str| ModelError::UnknownElement {
                sort: sort.clone(),
                elem: elem.to_string(),
            };
            let from = carrier.lookup(&elem).ok_or_else(|| unknown(&elem))?;
            let to = carrier.lookup(&to).ok_or_else(|| unknown(&to))?;
            let given = repr_given
                .entry(sort.clone())
                .or_insert_with(|| vec![false; carrier.len()]);
            if std::mem::replace(&mut given[from.0], true) {
                return Err(ModelError::DuplicateRepr { sort, elem });
            }
            carrier.repr[from.0] = to.0;
        }
        for (sort, carrier) in &carriers {
            for i in 0..carrier.len() {
                let r = carrier.repr[i];
                if carrier.repr[r] != r {
                    return Err(ModelError::NonIdempotentRepr {
                        sort: sort.clone(),
                        elem: carrier.elems[i].clone(),
                    });
                }
            }
        }

        let mut cells: BTreeMap<Op, Vec<Option<usize>>> = sig
            .ops()
            .map(|d| {
                let n = d.arg_sorts.iter().map(|s| carriers[s].len()).product();
                (d.name.clone(), vec![None; n])
            })
            .collect();
        for (op, args, value) in raw.rows {
            let decl = sig
                .lookup(op.as_str())
                .ok_or_else(|| ModelError::UnknownOperator(op.clone()))?;
            if args.len() != decl.arity() {
                return Err(ModelError::RowArity {
                    op,
                    expected: decl.arity(),
                    got: args.len(),
                });
            }
            let mut idx = 0;
            for (a, s) in args.iter().zip(&decl.arg_sorts) {
                let c = &carriers[s];
                let e = c.lookup(a).ok_or_else(|| ModelError::UnknownElement {
                    sort: s.clone(),
                    elem: a.clone(),
                })?;
                idx = idx * c.len() + e.0;
            }
            let rc = &carriers[&decl.result_sort];
            let v = rc.lookup(&value).ok_or_else(|| ModelError::UnknownElement {
                sort: decl.result_sort.clone(),
                elem: value.clone(),
            })?;
            let cell = &mut cells.get_mut(&op).expect("declared op")[idx];
            if cell.is_some() {
                return Err(ModelError::DuplicateRow { op, tuple: args });
            }
            *cell = Some(v.0);
        }

        let mut tables = BTreeMap::new();
        for decl in sig.ops() {
            let radices: Vec<usize> = decl.arg_sorts.iter().map(|s| carriers[s].len()).collect();
            let column = cells.remove(&decl.name).expect("declared op");
            let mut values = Vec::with_capacity(column.len());
            for (i, cell) in column.into_iter().enumerate() {
                match cell {
                    Some(v) => values.push(v),
                    None => {
                        let tuple = decode(i, &radices);
                        return Err(ModelError::PartialTable {
                            op: decl.name.clone(),
                            tuple: label_tuple(&carriers, &decl.arg_sorts, &tuple),
                        });
                    }
                }
            }
            tables.insert(decl.name.clone(), OpTable::new(&radices, values));
        }

        let model = Model {
            sig: sig.clone(),
            carriers,
            tables,
        };
        model.check_congruence()?;
        Ok(model)
    }

    /// Every tuple is compared against its tuple of representatives, which
    /// together with transitivity covers every pair of equal argument tuples.
    fn check_congruence(&self) -> Result<(), ModelError> {
        for decl in self.sig.ops() {
            let table = &self.tables[&decl.name];
            let result = &self.carriers[&decl.result_sort];
            let radices: Vec<usize> = decl
                .arg_sorts
                .iter()
                .map(|s| self.carriers[s].len())
                .collect();
            for tuple in Odometer::new(radices) {
                let args: Vec<Elem> = tuple.iter().map(|&i| Elem(i)).collect();
                let canon: Vec<Elem> = args
                    .iter()
                    .zip(&decl.arg_sorts)
                    .map(|(&a, s)| self.carriers[s].repr(a))
                    .collect();
                if result.repr(table.get(&args)) != result.repr(table.get(&canon)) {
                    return Err(ModelError::NonCongruentOp {
                        op: decl.name.clone(),
                        tuple: self.labels(&decl.arg_sorts, &canon),
                        other: self.labels(&decl.arg_sorts, &args),
                    });
                }
            }
        }
        Ok(())
    }

    /// Builds a discrete model directly from index tables (no congruence to check).
    pub(crate) fn from_parts(
        sig: &Signature,
        carriers: BTreeMap<Sort, Carrier>,
        tables: BTreeMap<Op, OpTable>,
    ) -> Model {
        Model {
            sig: sig.clone(),
            carriers,
            tables,
        }
    }

    /// The raw description of this model: all carriers, non-trivial representatives, all rows.
    pub fn to_raw(&self) -> RawModel {
        let mut raw = RawModel::new();
        for (sort, c) in &self.carriers {
            raw.carriers.push((sort.clone(), c.elems.clone()));
            for (i, &r) in c.repr.iter().enumerate() {
                if i != r {
                    raw.reprs
                        .push((sort.clone(), c.elems[i].clone(), c.elems[r].clone()));
                }
            }
        }
        for decl in self.sig.ops() {
            let table = &self.tables[&decl.name];
            let radices: Vec<usize> = decl
                .arg_sorts
                .iter()
                .map(|s| self.carriers[s].len())
                .collect();
            for tuple in Odometer::new(radices) {
                let args: Vec<Elem> = tuple.iter().map(|&i| Elem(i)).collect();
                let v = table.get(&args);
                raw.rows.push((
                    decl.name.clone(),
                    self.labels(&decl.arg_sorts, &args),
                    self.carriers[&decl.result_sort].label(v).to_string(),
                ));
            }
        }
        raw
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn carrier(&self, sort: &str) -> Option<&Carrier> {
        self.carriers.get(sort)
    }

    pub fn carriers(&self) -> impl Iterator<Item = (&Sort, &Carrier)> {
        self.carriers.iter()
    }

    pub fn table(&self, op: &str) -> Option<&OpTable> {
        self.tables.get(op)
    }

    fn labels(&self, sorts: &[Sort], elems: &[Elem]) -> Vec<String> {
        sorts
            .iter()
            .zip(elems)
            .map(|(s, &e)| self.carriers[s].label(e).to_string())
            .collect()
    }

    /// Applies the table of `op` to `args`; the caller guarantees sorts and arity.
    pub fn apply(&self, op: &str, args: &[Elem]) -> Elem {
        self.tables[op].get(args)
    }

    pub fn same(&self, sort: &Sort, a: Elem, b: Elem) -> bool {
        let c = &self.carriers[sort];
        c.repr(a) == c.repr(b)
    }

    /// Value of `t` under `env`, after checking `t` over the environment's context.
    pub fn eval(&self, t: &Term, env: &Environment) -> Result<Elem, ModelError> {
        t.sort_of(&self.sig, &env.ctx)?;
        Ok(self.eval_unchecked(t, env))
    }

    fn eval_unchecked(&self, t: &Term, env: &Environment) -> Elem {
        match t {
            Term::Var(x) => env.values[x],
            Term::App(op, args) => {
                let vals: Vec<Elem> = args.iter().map(|a| self.eval_unchecked(a, env)).collect();
                self.tables[op].get(&vals)
            }
        }
    }

    /// The environment over σ's source sending `x` to the value of `σ(x)` under `env`.
    pub fn eval_env(
        &self,
        sigma: &Substitution,
        env: &Environment,
    ) -> Result<Environment, ModelError> {
        if sigma.target() != &env.ctx {
            return Err(ModelError::ContextMismatch {
                expected: sigma.target().clone(),
                found: env.ctx.clone(),
            });
        }
        let mut values = BTreeMap::new();
        for (x, _) in sigma.source().iter() {
            let t = sigma
                .get(x.as_str())
                .ok_or_else(|| SortError::MissingBinding(x.clone()))?;
            values.insert(x.clone(), self.eval(t, env)?);
        }
        Ok(Environment {
            ctx: sigma.source().clone(),
            values,
        })
    }

    /// All environments over `ctx`, odometer order: variables by name with the
    /// first variable most significant, elements in carrier-list order.
    pub fn environments<'a>(
        &'a self,
        ctx: &'a Context,
    ) -> Result<impl Iterator<Item = Environment> + 'a, ModelError> {
        let radices = self.radices(ctx)?;
        Ok(Odometer::new(radices).map(move |slots| Environment::from_slots(ctx, &slots)))
    }

    fn radices(&self, ctx: &Context) -> Result<Vec<usize>, ModelError> {
        ctx.iter()
            .map(|(_, s)| {
                self.carriers
                    .get(s)
                    .map(Carrier::len)
                    .ok_or_else(|| SortError::UndeclaredSort(s.clone()).into())
            })
            .collect()
    }

    /// Decides `M ⊨ eq` by enumerating every environment over the equation's context.
    pub fn equal_in_model(&self, eq: &Equation) -> Result<Validity, ModelError> {
        eq.check(&self.sig)?;
        let slots: BTreeMap<&Var, usize> = eq.ctx.vars().zip(0..).collect();
        let lhs = self.compile(&eq.lhs, &slots);
        let rhs = self.compile(&eq.rhs, &slots);
        let result = &self.carriers[&eq.sort];
        for vals in Odometer::new(self.radices(&eq.ctx)?) {
            let a = Elem(lhs.run(&vals));
            let b = Elem(rhs.run(&vals));
            if result.repr(a) != result.repr(b) {
                return Ok(Validity::Refuted(Environment::from_slots(&eq.ctx, &vals)));
            }
        }
        Ok(Validity::Holds)
    }

    /// Checks every equation of `theory`, in name order, stopping at the first failure.
    pub fn satisfies_theory(&self, theory: &Theory) -> Result<TheoryVerdict, ModelError> {
        if theory.signature() != &self.sig {
            return Err(ModelError::SignatureMismatch);
        }
        for (name, eq) in theory.equations() {
            if let Validity::Refuted(witness) = self.equal_in_model(eq)? {
                return Ok(TheoryVerdict::Fails {
                    equation: name.to_string(),
                    witness,
                });
            }
        }
        Ok(TheoryVerdict::Holds)
    }

    fn compile<'m>(&'m self, t: &Term, slots: &BTreeMap<&Var, usize>) -> Compiled<'m> {
        match t {
            Term::Var(x) => Compiled::Slot(slots[x]),
            Term::App(op, args) => Compiled::App(
                &self.tables[op],
                args.iter().map(|a| self.compile(a, slots)).collect(),
            ),
        }
    }

    /// Builds an environment from element labels.
    pub fn environment<'a>(
        &self,
        ctx: &Context,
        bindings: impl IntoIterator<Item = (&'a str, &'a str)>,
    ) -> Result<Environment, ModelError> {
        ctx.validate(&self.sig)?;
        let mut values = BTreeMap::new();
        for (x, label) in bindings {
            let sort = ctx
                .get(x)
                .ok_or_else(|| SortError::UnboundVariable(x.into()))?;
            let e = self.carriers[sort]
                .lookup(label)
                .ok_or_else(|| ModelError::UnknownElement {
                    sort: sort.clone(),
                    elem: label.to_string(),
                })?;
            values.insert(Var::from(x), e);
        }
        if let Some(x) = ctx.vars().find(|x| !values.contains_key(*x)) {
            return Err(SortError::MissingBinding(x.clone()).into());
        }
        Ok(Environment {
            ctx: ctx.clone(),
            values,
        })
    }

    pub fn label(&self, sort: &Sort, e: Elem) -> &str {
        self.carriers[sort].label(e)
    }

    /// `{x↦1, y↦0}`
    pub fn show_env(&self, env: &Environment) -> String {
        let parts: Vec<String> = env
            .iter()
            .map(|(x, e)| format!("{x}↦{}", self.label(env.ctx.get(x.as_str()).unwrap(), e)))
            .collect();
        format!("{{{}}}", parts.join(", "))
    }

    /// Element labels of an environment, in variable order.
    pub fn env_labels(&self, env: &Environment) -> Vec<(String, String)> {
        env.iter()
            .map(|(x, e)| {
                let s = env.ctx.get(x.as_str()).unwrap();
                (x.to_string(), self.label(s, e).to_string())
            })
            .collect()
    }
}

enum Compiled<'m> {
    Slot(usize),
    App(&'m OpTable, Vec<Compiled<'m>>),
}

impl Compiled<'_> {
    fn run(&self, vals: &[usize]) -> usize {
        match self {
            Compiled::Slot(i) => vals[*i],
            Compiled::App(table, args) => {
                let idx: usize = args
                    .iter()
                    .zip(&table.strides)
                    .map(|(a, s)| a.run(vals) * s)
                    .sum();
                table.values[idx]
            }
        }
    }
}

/// Outcome of checking one equation in a model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Validity {
    Holds,
    Refuted(Environment),
}

impl Validity {
    pub fn holds(&self) -> bool {
        matches!(self, Validity::Holds)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TheoryVerdict {
    Holds,
    Fails { equation: String, witness: Environment },
}

impl TheoryVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, TheoryVerdict::Holds)
    }
}

/// An assignment of carrier elements to the variables of a context.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Environment {
    ctx: Context,
    values: BTreeMap<Var, Elem>,
}

impl Environment {
    fn from_slots(ctx: &Context, slots: &[usize]) -> Self {
        Environment {
            ctx: ctx.clone(),
            values: ctx.vars().cloned().zip(slots.iter().map(|&i| Elem(i))).collect(),
        }
    }

    pub fn empty() -> Self {
        Environment {
            ctx: Context::new(),
            values: BTreeMap::new(),
        }
    }

    pub fn context(&self) -> &Context {
        &self.ctx
    }

    pub fn get(&self, x: &str) -> Option<Elem> {
        self.values.get(x).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Var, Elem)> {
        self.values.iter().map(|(x, &e)| (x, e))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Pointwise equality up to representatives.
    pub fn equivalent(&self, other: &Environment, model: &Model) -> bool {
        self.ctx == other.ctx
            && self.iter().all(|(x, e)| {
                let sort = self.ctx.get(x.as_str()).unwrap();
                model.same(sort, e, other.values[x])
            })
    }
}

impl fmt::Display for Environment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (x, e)) in self.values.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x}↦#{}", e.0)?;
        }
        f.write_str("}")
    }
}

/// Mixed-radix counter, last position fastest.
pub(crate) struct Odometer {
    radices: Vec<usize>,
    current: Vec<usize>,
    done: bool,
}

impl Odometer {
    pub(crate) fn new(radices: Vec<usize>) -> Self {
        let done = radices.contains(&0);
        Odometer {
            current: vec![0; radices.len()],
            radices,
            done,
        }
    }
}

impl Iterator for Odometer {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.current.clone();
        let mut i = self.radices.len();
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            self.current[i] += 1;
            if self.current[i] < self.radices[i] {
                break;
            }
            self.current[i] = 0;
        }
        Some(out)
    }
}

fn decode(mut idx: usize, radices: &[usize]) -> Vec<usize> {
    let mut out = vec![0; radices.len()];
    for i in (0..radices.len()).rev() {
        out[i] = idx % radices[i];
        idx /= radices[i];
    }
    out
}

fn label_tuple(carriers: &BTreeMap<Sort, Carrier>, sorts: &[Sort], tuple: &[usize]) -> Vec<String> {
    sorts
        .iter()
        .zip(tuple)
        .map(|(s, &i)| carriers[s].elems[i].clone())
        .collect()
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;
    use crate::signature::monoid_signature;

    pub fn z2() -> Model {
        RawModel::new()
            .carrier("M", &["0", "1"])
            .row("plus", &["0", "0"], "0")
            .row("plus", &["0", "1"], "1")
            .row("plus", &["1", "0"], "1")
            .row("plus", &["1", "1"], "0")
            .row("e", &[], "0")
            .validate(&monoid_signature())
            .unwrap()
    }

    pub fn plus(a: Term, b: Term) -> Term {
        Term::app("plus", vec![a, b])
    }

    pub fn e() -> Term {
        Term::constant("e")
    }

    pub fn v(x: &str) -> Term {
        Term::var(x)
    }

    pub fn monoid() -> Theory {
        let sig = monoid_signature();
        let x = Context::new().with("x", "M");
        let xyz = Context::new().with("x", "M").with("y", "M").with("z", "M");
        Theory::new(
            sig.clone(),
            [
                (
                    "assoc".to_string(),
                    Equation::new(
                        &sig,
                        xyz,
                        plus(plus(v("x"), v("y")), v("z")),
                        plus(v("x"), plus(v("y"), v("z"))),
                    )
                    .unwrap(),
                ),
                (
                    "unitL".to_string(),
                    Equation::new(&sig, x.clone(), plus(e(), v("x")), v("x")).unwrap(),
                ),
                (
                    "unitR".to_string(),
                    Equation::new(&sig, x, plus(v("x"), e()), v("x")).unwrap(),
                ),
            ],
        )
        .unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::signature::{monoid_signature, RawSignature};

    #[test]
    fn z2_is_valid() {
        let m = z2();
        assert_eq!(m.carrier("M").unwrap().len(), 2);
        assert_eq!(m.apply("plus", &[Elem(1), Elem(1)]), Elem(0));
    }

    #[test]
    fn non_congruent_table() {
        let sig = RawSignature::new()
            .sort("S")
            .op("f", &["S"], "S")
            .validate()
            .unwrap();
        // With a single class every table is congruent, so a third element
        // is needed to separate f(a) from f(b).
        assert!(RawModel::new()
            .carrier("S", &["a", "b"])
            .repr("S", "b", "a")
            .row("f", &["a"], "a")
            .row("f", &["b"], "b")
            .validate(&sig)
            .is_ok());
        let err = RawModel::new()
            .carrier("S", &["a", "b", "c"])
            .repr("S", "b", "a")
            .row("f", &["a"], "a")
            .row("f", &["b"], "c")
            .row("f", &["c"], "c")
            .validate(&sig)
            .unwrap_err();
        assert_eq!(
            err,
            ModelError::NonCongruentOp {
                op: "f".into(),
                tuple: vec!["a".into()],
                other: vec!["b".into()],
            }
        );
    }

    #[test]
    fn empty_carrier_and_partial_table() {
        let sig = monoid_signature();
        let err = RawModel::new().carrier("M", &[]).validate(&sig).unwrap_err();
        assert_eq!(err, ModelError::EmptyCarrier("M".into()));

        let err = RawModel::new()
            .carrier("M", &["0", "1"])
            .row("plus", &["0", "0"], "0")
            .row("plus", &["1", "0"], "1")
            .row("plus", &["1", "1"], "0")
            .row("e", &[], "0")
            .validate(&sig)
            .unwrap_err();
        assert_eq!(
            err,
            ModelError::PartialTable {
                op: "plus".into(),
                tuple: vec!["0".into(), "1".into()]
            }
        );
    }

    #[test]
    fn repr_must_be_idempotent() {
        let sig = RawSignature::new().sort("S").validate().unwrap();
        let err = RawModel::new()
            .carrier("S", &["a", "b", "c"])
            .repr("S", "a", "b")
            .repr("S", "b", "c")
            .validate(&sig)
            .unwrap_err();
        assert_eq!(
            err,
            ModelError::NonIdempotentRepr {
                sort: "S".into(),
                elem: "a".into()
            }
        );
        let err = RawModel::new()
            .carrier("S", &["a"])
            .repr("S", "a", "z")
            .validate(&sig)
            .unwrap_err();
        assert!(matches!(err, ModelError::UnknownElement { .. }));
    }

    #[test]
    fn eval_examples() {
        let m = z2();
        let ctx = Context::new().with("x", "M").with("y", "M");
        let env = m.environment(&ctx, [("x", "1"), ("y", "1")]).unwrap();
        assert_eq!(m.eval(&v("x"), &env).unwrap(), Elem(1));
        assert_eq!(m.eval(&plus(v("x"), v("y")), &env).unwrap(), Elem(0));
        assert_eq!(m.eval(&plus(e(), v("x")), &env).unwrap(), Elem(1));
        assert!(matches!(
            m.eval(&v("z"), &env),
            Err(ModelError::Sort(SortError::UnboundVariable(_)))
        ));
    }

    #[test]
    fn eval_env_examples() {
        let m = z2();
        let sig = monoid_signature();
        let y = Context::new().with("y", "M");
        let rho = m.environment(&y, [("y", "1")]).unwrap();
        assert_eq!(m.eval_env(&Substitution::identity(&y), &rho).unwrap(), rho);

        let sigma = Substitution::new(
            &sig,
            Context::new().with("x", "M"),
            y.clone(),
            [("x".into(), plus(v("y"), v("y")))].into(),
        )
        .unwrap();
        let out = m.eval_env(&sigma, &rho).unwrap();
        assert_eq!(out.get("x"), Some(Elem(0)));
        assert_eq!(out.len(), 1);

        let empty = Substitution::new(&sig, Context::new(), y, BTreeMap::new()).unwrap();
        assert!(m.eval_env(&empty, &rho).unwrap().is_empty());
    }

    #[test]
    fn equal_in_z2() {
        let m = z2();
        let sig = monoid_signature();
        let x = Context::new().with("x", "M");
        let eq = Equation::new(&sig, x.clone(), plus(v("x"), v("x")), e()).unwrap();
        assert!(m.equal_in_model(&eq).unwrap().holds());
        let eq = Equation::new(&sig, x.clone(), v("x"), e()).unwrap();
        let Validity::Refuted(w) = m.equal_in_model(&eq).unwrap() else {
            panic!("x = e holds in Z2")
        };
        assert_eq!(m.show_env(&w), "{x↦1}");
        let t = plus(e(), e());
        let eq = Equation::new(&sig, Context::new(), t.clone(), t).unwrap();
        assert!(m.equal_in_model(&eq).unwrap().holds());
    }

    #[test]
    fn satisfies_monoid() {
        let m = z2();
        assert!(m.satisfies_theory(&monoid()).unwrap().holds());
        let empty = Theory::new(monoid_signature(), []).unwrap();
        assert!(m.satisfies_theory(&empty).unwrap().holds());

        let zero = RawModel::new()
            .carrier("M", &["0", "1"])
            .row("plus", &["0", "0"], "0")
            .row("plus", &["0", "1"], "0")
            .row("plus", &["1", "0"], "0")
            .row("plus", &["1", "1"], "0")
            .row("e", &[], "0")
            .validate(&monoid_signature())
            .unwrap();
        match zero.satisfies_theory(&monoid()).unwrap() {
            TheoryVerdict::Fails { equation, witness } => {
                assert_eq!(equation, "unitL");
                assert_eq!(zero.show_env(&witness), "{x↦1}");
            }
            TheoryVerdict::Holds => panic!("constant-0 plus is not a monoid"),
        }
    }

    #[test]
    fn environment_order() {
        let m = z2();
        let ctx = Context::new().with("y", "M").with("x", "M");
        let envs: Vec<String> = m.environments(&ctx).unwrap().map(|e| m.show_env(&e)).collect();
        assert_eq!(
            envs,
            ["{x↦0, y↦0}", "{x↦0, y↦1}", "{x↦1, y↦0}", "{x↦1, y↦1}"]
        );
        assert_eq!(m.environments(&Context::new()).unwrap().count(), 1);
    }

    #[test]
    fn raw_round_trip() {
        let m = z2();
        assert_eq!(m.to_raw().validate(m.signature()).unwrap(), m);
    }
}
