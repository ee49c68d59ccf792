//! Multi-sorted equational logic.
//!
//! Signatures and sorted terms ([`signature`], [`term`]), finite setoid
//! models and satisfaction ([`model`]), proof objects of the equational
//! calculus with a checker ([`calculus`]), the term-model constructions that
//! turn semantic evidence into derivations ([`birkhoff`]), and the file
//! formats and command line ([`frontend`]).

pub mod birkhoff;
pub mod calculus;
pub mod frontend;
pub mod model;
pub mod random;
pub mod signature;
pub mod term;

pub use calculus::{check_derivation, CheckError, CheckErrorKind, Derivation, Judgment, Rule};
pub use frontend::{parse_model, parse_proof, parse_theory, FrontendError, ProofScript};
pub use model::{Environment, Equation, Model, RawModel, Theory};
pub use signature::{Op, OpDecl, RawSignature, Signature, Sort, Var};
pub use term::{Context, SortError, Substitution, Term};
