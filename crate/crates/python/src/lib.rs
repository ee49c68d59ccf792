use std::collections::BTreeMap;

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use eqlogic::birkhoff::completeness as build_completeness;
use eqlogic::calculus::sound_check;
use eqlogic::frontend::cli::{bind_term, run};
use eqlogic::frontend::{parse_equation, parse_model, parse_proof, parse_theory, print_model, print_proof, print_theory};
use eqlogic::model::{search_countermodel, Environment, TheoryVerdict, Validity, DEFAULT_BUDGET};
use eqlogic::{check_derivation, Model, ProofScript, Theory};

create_exception!(pyeqlogic, ParseError, PyValueError, "Malformed or ill-sorted input text.");
create_exception!(pyeqlogic, ProofError, PyValueError, "A proof that the checker rejects.");

fn parse_err(e: impl ToString) -> PyErr {
    ParseError::new_err(e.to_string())
}

fn proof_err(e: impl ToString) -> PyErr {
    ProofError::new_err(e.to_string())
}

fn value_err(e: impl ToString) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn labels(m: &Model, env: &Environment) -> BTreeMap<String, String> {
    m.env_labels(env).into_iter().collect()
}

/// An equational theory parsed from `.eq` text.
#[pyclass(name = "Theory", module = "pyeqlogic", frozen)]
struct PyTheory {
    inner: Theory,
}

impl PyTheory {
    fn script(&self, proof: &str) -> PyResult<ProofScript> {
        parse_proof(proof, &self.inner).map_err(parse_err)
    }

    fn confirm(&self, script: &ProofScript) -> PyResult<String> {
        let j = check_derivation(&self.inner, &script.derivation, &script.claim.ctx).map_err(proof_err)?;
        if j != script.claim {
            return Err(proof_err(format!(
                "derivation concludes {j}, but the script claims {}",
                script.claim
            )));
        }
        Ok(j.to_string())
    }
}

#[pymethods]
impl PyTheory {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        Ok(PyTheory {
            inner: parse_theory(text).map_err(parse_err)?,
        })
    }

    fn sorts(&self) -> Vec<String> {
        self.inner.signature().sorts().map(|s| s.to_string()).collect()
    }

    fn operators(&self) -> Vec<String> {
        self.inner.signature().ops().map(|d| d.to_string()).collect()
    }

    /// `(name, "lhs = rhs")` pairs in name order.
    fn equations(&self) -> Vec<(String, String)> {
        self.inner
            .equations()
            .map(|(n, e)| (n.to_string(), format!("{} = {}", e.lhs, e.rhs)))
            .collect()
    }

    /// Checks a `.prf` script and returns its conclusion.
    fn check(&self, proof: &str) -> PyResult<String> {
        let script = self.script(proof)?;
        self.confirm(&script)
    }

    /// Rebuilds a proof through the term model and returns the new script.
    fn complete(&self, proof: &str) -> PyResult<String> {
        let script = self.script(proof)?;
        let goal = script.claim.to_equation();
        let built = build_completeness(&self.inner, &goal, &script.derivation).map_err(proof_err)?;
        let out = ProofScript {
            derivation: built,
            ..script
        };
        self.confirm(&out)?;
        Ok(print_proof(&out))
    }

    /// The first model refuting `equation` up to `max_size`, with the witness, or None.
    #[pyo3(signature = (equation, max_size, budget = DEFAULT_BUDGET))]
    fn countermodel(
        &self,
        equation: &str,
        max_size: usize,
        budget: u64,
    ) -> PyResult<Option<(PyModel, BTreeMap<String, String>)>> {
        let goal = parse_equation(equation, self.inner.signature()).map_err(parse_err)?;
        let found = search_countermodel(&self.inner, &goal, max_size, budget).map_err(value_err)?;
        Ok(found.map(|c| {
            let w = labels(&c.model, &c.witness);
            (PyModel { inner: c.model }, w)
        }))
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __str__(&self) -> String {
        print_theory(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!(
            "<Theory sorts={:?} equations={}>",
            self.sorts(),
            self.inner.len()
        )
    }
}

/// A finite model parsed from `.mdl` text against a theory's signature.
#[pyclass(name = "Model", module = "pyeqlogic", frozen)]
struct PyModel {
    inner: Model,
}

#[pymethods]
impl PyModel {
    #[new]
    fn new(theory: &PyTheory, text: &str) -> PyResult<Self> {
        Ok(PyModel {
            inner: parse_model(text, theory.inner.signature()).map_err(parse_err)?,
        })
    }

    fn carrier(&self, sort: &str) -> PyResult<Vec<String>> {
        self.inner
            .carrier(sort)
            .map(|c| c.labels().to_vec())
            .ok_or_else(|| value_err(format!("no carrier for sort `{sort}`")))
    }

    /// Value of `term` with variables bound to element labels.
    #[pyo3(signature = (term, env = BTreeMap::new()))]
    fn eval(&self, term: &str, env: BTreeMap<String, String>) -> PyResult<String> {
        let bindings: Vec<(&str, Option<&str>, &str)> = env
            .iter()
            .map(|(x, l)| (x.as_str(), None, l.as_str()))
            .collect();
        let (t, env) = bind_term(&self.inner, term, &bindings).map_err(parse_err)?;
        let value = self.inner.eval(&t, &env).map_err(value_err)?;
        let sort = t.sort_of(self.inner.signature(), env.context()).map_err(value_err)?;
        Ok(self.inner.label(&sort, value).to_string())
    }

    /// None if the equation holds, otherwise a refuting environment.
    fn equal_in_model(&self, equation: &str) -> PyResult<Option<BTreeMap<String, String>>> {
        let eq = parse_equation(equation, self.inner.signature()).map_err(parse_err)?;
        Ok(match self.inner.equal_in_model(&eq).map_err(value_err)? {
            Validity::Holds => None,
            Validity::Refuted(env) => Some(labels(&self.inner, &env)),
        })
    }

    /// None if every equation holds, otherwise `(name, witness)`.
    fn satisfies(&self, theory: &PyTheory) -> PyResult<Option<(String, BTreeMap<String, String>)>> {
        Ok(match self.inner.satisfies_theory(&theory.inner).map_err(value_err)? {
            TheoryVerdict::Holds => None,
            TheoryVerdict::Fails { equation, witness } => Some((equation, labels(&self.inner, &witness))),
        })
    }

    /// Checks the proof, then evaluates its conclusion here.
    fn sound(&self, theory: &PyTheory, proof: &str) -> PyResult<bool> {
        let script = theory.script(proof)?;
        sound_check(&theory.inner, &self.inner, &script.derivation, &script.claim.ctx).map_err(proof_err)
    }

    fn __str__(&self) -> String {
        print_model(&self.inner)
    }

    fn __repr__(&self) -> String {
        let sizes: Vec<String> = self
            .inner
            .carriers()
            .map(|(s, c)| format!("{s}:{}", c.len()))
            .collect();
        format!("<Model {}>", sizes.join(" "))
    }
}

#[pyfunction]
fn parse(theory: &str) -> PyResult<PyTheory> {
    PyTheory::new(theory)
}

#[pyfunction]
#[pyo3(signature = (model, term, env = BTreeMap::new()))]
fn eval(model: &PyModel, term: &str, env: BTreeMap<String, String>) -> PyResult<String> {
    model.eval(term, env)
}

#[pyfunction]
fn equal_in_model(model: &PyModel, equation: &str) -> PyResult<Option<BTreeMap<String, String>>> {
    model.equal_in_model(equation)
}

#[pyfunction]
fn satisfies(model: &PyModel, theory: &PyTheory) -> PyResult<Option<(String, BTreeMap<String, String>)>> {
    model.satisfies(theory)
}

#[pyfunction]
fn check_proof(theory: &PyTheory, proof: &str) -> PyResult<String> {
    theory.check(proof)
}

#[pyfunction]
fn completeness(theory: &PyTheory, proof: &str) -> PyResult<String> {
    theory.complete(proof)
}

#[pyfunction]
#[pyo3(signature = (theory, equation, max_size, budget = DEFAULT_BUDGET))]
fn countermodel(
    theory: &PyTheory,
    equation: &str,
    max_size: usize,
    budget: u64,
) -> PyResult<Option<(PyModel, BTreeMap<String, String>)>> {
    theory.countermodel(equation, max_size, budget)
}

/// Runs the command line driver; returns `(exit code, stdout, stderr)`.
#[pyfunction]
fn run_cli(args: Vec<String>) -> (i32, String, String) {
    let argv = std::iter::once("eqlogic".to_string()).chain(args);
    let r = run(argv);
    (r.code, r.stdout, r.stderr)
}

#[pymodule]
fn pyeqlogic(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyTheory>()?;
    m.add_class::<PyModel>()?;
    m.add("ParseError", m.py().get_type::<ParseError>())?;
    m.add("ProofError", m.py().get_type::<ProofError>())?;
    m.add_function(wrap_pyfunction!(parse, m)?)?;
    m.add_function(wrap_pyfunction!(eval, m)?)?;
    m.add_function(wrap_pyfunction!(equal_in_model, m)?)?;
    m.add_function(wrap_pyfunction!(satisfies, m)?)?;
    m.add_function(wrap_pyfunction!(check_proof, m)?)?;
    m.add_function(wrap_pyfunction!(completeness, m)?)?;
    m.add_function(wrap_pyfunction!(countermodel, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    Ok(())
}
