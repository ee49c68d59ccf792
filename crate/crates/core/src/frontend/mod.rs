//! Concrete syntax for theories (`.eq`), models (`.mdl`) and proof scripts
//! (`.prf`), their printers, and the command line driver.
//!
//! Theory files are line oriented:
//!
//! ```text
//! sort M
//! op plus : M M -> M
//! op e : -> M
//! eq unitL [x:M] : plus(e(),x) = x
//! ```
//!
//! Model files list carriers, optional representatives and exhaustive table rows:
//!
//! ```text
//! carrier M = 0, 1
//! repr M: 1 -> 0
//! table plus(0,1) = 1
//! ```
//!
//! Proof scripts are a `prove` header followed by one s-expression:
//!
//! ```text
//! prove [x:M] : plus(e(),x) = x
//! (hyp unitL)
//! ```
//!
//! In terms, a bare name denotes a nullary operator if one is declared with
//! that name and a variable otherwise; context entries may not reuse operator
//! names. The printers always write nullary applications as `e()`.

pub mod cli;
mod lexer;
mod parse;
mod print;

use std::fmt;

use thiserror::Error;

use crate::calculus::{Derivation, Judgment};
use crate::model::{ModelError, TheoryError};
use crate::signature::SignatureError;
use crate::term::SortError;

pub use parse::{
    parse_derivation, parse_equation, parse_model, parse_proof, parse_term, parse_theory,
    MAX_DEPTH,
};
pub use print::{
    print_context, print_derivation, print_derivation_flat, print_model, print_proof,
    print_theory,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: expected {expected}, found {found}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub expected: String,
    pub found: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrontendError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("line {line}: {error}")]
    Signature { line: usize, error: SignatureError },
    #[error("line {line}, column {column}: {error}")]
    Sort {
        line: usize,
        column: usize,
        error: SortError,
    },
    #[error("line {line}: {error}")]
    Theory { line: usize, error: TheoryError },
    #[error("{}{error}", line_prefix(*.line))]
    Model {
        line: Option<usize>,
        error: ModelError,
    },
}

fn line_prefix(line: Option<usize>) -> String {
    line.map(|l| format!("line {l}: ")).unwrap_or_default()
}

/// A parsed `.prf` file: optional theory name, claimed judgment, derivation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofScript {
    pub theory: Option<String>,
    pub claim: Judgment,
    pub derivation: Derivation,
}

impl fmt::Display for ProofScript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_proof(self))
    }
}
