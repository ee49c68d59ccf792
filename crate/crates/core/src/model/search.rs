//! Bounded countermodel search over discrete finite models.
//!
//! Size vectors (one carrier size per sort, sorts by name) are tried by
//! increasing total size, then lexicographically. For each size vector the
//! operator tables are enumerated in odometer order: operators by name, rows
//! in row-major order, the first row most significant. The search fills cells
//! depth-first and abandons a prefix as soon as some equation of the theory is
//! already violated by the defined cells, so the first model reached is the
//! first one in odometer order.

use std::collections::BTreeMap;

use super::{Carrier, Environment, Equation, Model, ModelError, OpTable, Theory, Validity};
use crate::signature::{Op, Sort, Var};
use crate::term::Term;

/// Default cap on visited search nodes.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// A model satisfying the theory together with an environment refuting the goal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Countermodel {
    pub model: Model,
    pub witness: Environment,
}

/// Finds the first discrete model with carriers of size at most `max_size`
/// that satisfies `theory` and refutes `goal`. `budget` bounds the number of
/// table cells assigned over the whole search.
pub fn search_countermodel(
    theory: &Theory,
    goal: &Equation,
    max_size: usize,
    budget: u64,
) -> Result<Option<Countermodel>, ModelError> {
    if max_size == 0 {
        return Err(ModelError::InvalidSize);
    }
    let sig = theory.signature();
    goal.check(sig)?;
    let sorts: Vec<Sort> = sig.sorts().cloned().collect();
    let mut spent = 0u64;
    for sizes in size_vectors(sorts.len(), max_size) {
        let sizes: BTreeMap<Sort, usize> = sorts.iter().cloned().zip(sizes).collect();
        let mut search = Search::new(theory, goal, &sizes);
        if let Some(found) = search.run(&mut spent, budget)? {
            return Ok(Some(found));
        }
    }
    Ok(None)
}

/// All vectors in `1..=max` of length `n`, by sum then lexicographically.
fn size_vectors(n: usize, max: usize) -> Vec<Vec<usize>> {
    let mut all: Vec<Vec<usize>> = super::Odometer::new(vec![max; n])
        .map(|v| v.into_iter().map(|i| i + 1).collect())
        .collect();
    all.sort_by_key(|v| (v.iter().sum::<usize>(), v.clone()));
    all
}

enum Node {
    Slot(usize),
    App(usize, Vec<Node>),
}

struct Compiled {
    ctx_radices: Vec<usize>,
    lhs: Node,
    rhs: Node,
    /// Operators occurring in either side.
    ops: Vec<bool>,
}

struct TableShape {
    name: Op,
    radices: Vec<usize>,
    strides: Vec<usize>,
    result_size: usize,
}

struct Search<'a> {
    theory: &'a Theory,
    goal: &'a Equation,
    sizes: &'a BTreeMap<Sort, usize>,
    shapes: Vec<TableShape>,
    axioms: Vec<Compiled>,
    cells: Vec<Vec<Option<usize>>>,
    /// `(op index, cell index)` in odometer significance order.
    order: Vec<(usize, usize)>,
}

impl<'a> Search<'a> {
    fn new(theory: &'a Theory, goal: &'a Equation, sizes: &'a BTreeMap<Sort, usize>) -> Self {
        let sig = theory.signature();
        let shapes: Vec<TableShape> = sig
            .ops()
            .map(|d| {
                let radices: Vec<usize> = d.arg_sorts.iter().map(|s| sizes[s]).collect();
                let mut strides = vec![1; radices.len()];
                for i in (0..radices.len().saturating_sub(1)).rev() {
                    strides[i] = strides[i + 1] * radices[i + 1];
                }
                TableShape {
                    name: d.name.clone(),
                    result_size: sizes[&d.result_sort],
                    radices,
                    strides,
                }
            })
            .collect();
        let index: BTreeMap<&Op, usize> = shapes.iter().map(|s| &s.name).zip(0..).collect();
        let axioms = theory
            .equations()
            .map(|(_, eq)| {
                let slots: BTreeMap<&Var, usize> = eq.ctx.vars().zip(0..).collect();
                let mut ops = vec![false; shapes.len()];
                let lhs = compile(&eq.lhs, &slots, &index, &mut ops);
                let rhs = compile(&eq.rhs, &slots, &index, &mut ops);
                Compiled {
                    ctx_radices: eq.ctx.iter().map(|(_, s)| sizes[s]).collect(),
                    lhs,
                    rhs,
                    ops,
                }
            })
            .collect();
        let cells: Vec<Vec<Option<usize>>> = shapes
            .iter()
            .map(|s| vec![None; s.radices.iter().product()])
            .collect();
        let order = cells
            .iter()
            .enumerate()
            .flat_map(|(op, c)| (0..c.len()).map(move |i| (op, i)))
            .collect();
        Search {
            theory,
            goal,
            sizes,
            shapes,
            axioms,
            cells,
            order,
        }
    }

    fn run(&mut self, spent: &mut u64, budget: u64) -> Result<Option<Countermodel>, ModelError> {
        // Axioms without operators, such as `x = y`, fail before any cell is set.
        if self.violated(None) {
            return Ok(None);
        }
        self.descend(0, spent, budget)
    }

    fn descend(
        &mut self,
        depth: usize,
        spent: &mut u64,
        budget: u64,
    ) -> Result<Option<Countermodel>, ModelError> {
        if depth == self.order.len() {
            return self.refute_goal();
        }
        let (op, cell) = self.order[depth];
        for v in 0..self.shapes[op].result_size {
            *spent += 1;
            if *spent > budget {
                return Err(ModelError::BudgetExceeded(budget));
            }
            self.cells[op][cell] = Some(v);
            if !self.violated(Some(op)) {
                if let Some(found) = self.descend(depth + 1, spent, budget)? {
                    return Ok(Some(found));
                }
            }
        }
        self.cells[op][cell] = None;
        Ok(None)
    }

    /// True if some axiom mentioning `changed` has a defined, unequal instance.
    fn violated(&self, changed: Option<usize>) -> bool {
        self.axioms.iter().any(|ax| {
            if let Some(op) = changed {
                if !ax.ops[op] {
                    return false;
                }
            }
            super::Odometer::new(ax.ctx_radices.clone()).any(|vals| {
                match (self.eval(&ax.lhs, &vals), self.eval(&ax.rhs, &vals)) {
                    (Some(a), Some(b)) => a != b,
                    _ => false,
                }
            })
        })
    }

    fn eval(&self, node: &Node, vals: &[usize]) -> Option<usize> {
        match node {
            Node::Slot(i) => Some(vals[*i]),
            Node::App(op, args) => {
                let shape = &self.shapes[*op];
                let mut idx = 0;
                for (a, s) in args.iter().zip(&shape.strides) {
                    idx += self.eval(a, vals)? * s;
                }
                self.cells[*op][idx]
            }
        }
    }

    fn refute_goal(&self) -> Result<Option<Countermodel>, ModelError> {
        let sig = self.theory.signature();
        let carriers: BTreeMap<Sort, Carrier> = self
            .sizes
            .iter()
            .map(|(s, &n)| (s.clone(), Carrier::discrete(n)))
            .collect();
        let tables: BTreeMap<Op, OpTable> = self
            .shapes
            .iter()
            .zip(&self.cells)
            .map(|(shape, cells)| {
                let values = cells.iter().map(|c| c.expect("complete table")).collect();
                (shape.name.clone(), OpTable::new(&shape.radices, values))
            })
            .collect();
        let model = Model::from_parts(sig, carriers, tables);
        match model.equal_in_model(self.goal)? {
            Validity::Holds => Ok(None),
            Validity::Refuted(witness) => Ok(Some(Countermodel { model, witness })),
        }
    }
}

fn compile(
    t: &Term,
    slots: &BTreeMap<&Var, usize>,
    index: &BTreeMap<&Op, usize>,
    ops: &mut Vec<bool>,
) -> Node {
    match t {
        Term::Var(x) => Node::Slot(slots[x]),
        Term::App(op, args) => {
            let i = index[op];
            ops[i] = true;
            Node::App(i, args.iter().map(|a| compile(a, slots, index, ops)).collect())
        }
    }
}
