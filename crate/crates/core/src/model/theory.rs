use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::signature::{is_identifier, Signature, Sort};
use crate::term::{Context, SortError, Term};

/// `Γ ⊢ lhs ≐ rhs : sort`, both sides well-sorted at `sort` over `ctx`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Equation {
    pub ctx: Context,
    pub sort: Sort,
    pub lhs: Term,
    pub rhs: Term,
}

impl Equation {
    /// Infers the sort from `lhs` and checks `rhs` against it.
    pub fn new(sig: &Signature, ctx: Context, lhs: Term, rhs: Term) -> Result<Self, SortError> {
        ctx.validate(sig)?;
        let sort = lhs.sort_of(sig, &ctx)?;
        rhs.check_sort(sig, &ctx, &sort)?;
        Ok(Equation {
            ctx,
            sort,
            lhs,
            rhs,
        })
    }

    pub fn check(&self, sig: &Signature) -> Result<(), SortError> {
        self.ctx.validate(sig)?;
        self.lhs.check_sort(sig, &self.ctx, &self.sort)?;
        self.rhs.check_sort(sig, &self.ctx, &self.sort)
    }

    pub fn flipped(&self) -> Equation {
        Equation {
            ctx: self.ctx.clone(),
            sort: self.sort.clone(),
            lhs: self.rhs.clone(),
            rhs: self.lhs.clone(),
        }
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ⊢ {} ≐ {} : {}", self.ctx, self.lhs, self.rhs, self.sort)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TheoryError {
    #[error("duplicate equation `{0}`")]
    DuplicateEquation(String),
    #[error("`{0}` is not a valid equation name")]
    InvalidName(String),
    #[error("equation `{name}`: {error}")]
    IllSorted { name: String, error: SortError },
}

/// A signature with a finite family of named equations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Theory {
    sig: Signature,
    equations: BTreeMap<String, Equation>,
}

impl Theory {
    pub fn new(
        sig: Signature,
        equations: impl IntoIterator<Item = (String, Equation)>,
    ) -> Result<Self, TheoryError> {
        let mut map = BTreeMap::new();
        for (name, eq) in equations {
            if !is_identifier(&name) {
                return Err(TheoryError::InvalidName(name));
            }
            if map.contains_key(&name) {
                return Err(TheoryError::DuplicateEquation(name));
            }
            eq.check(&sig).map_err(|error| TheoryError::IllSorted {
                name: name.clone(),
                error,
            })?;
            map.insert(name, eq);
        }
        Ok(Theory {
            sig,
            equations: map,
        })
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn equation(&self, name: &str) -> Option<&Equation> {
        self.equations.get(name)
    }

    /// Equations in lexicographic name order.
    pub fn equations(&self) -> impl Iterator<Item = (&str, &Equation)> {
        self.equations.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.equations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.equations.is_empty()
    }
}
