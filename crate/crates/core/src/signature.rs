//! Sorts and operator declarations.
//!
//! A [`Signature`] is the closed, validated form: every sort mentioned by an
//! operator is declared and operator names are unique across all sorts. An
//! operator's arity is an ordered list of argument sorts, so argument
//! position `i` carries sort `arity[i]`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

/// Returns true if `s` matches `[A-Za-z_][A-Za-z0-9_'-]*`.
pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '\'' | '-'))
}

macro_rules! name_type {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(String);

        impl $name {
            pub fn new(name: impl Into<String>) -> Self {
                $name(name.into())
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl From<&str> for $name {
            fn from(s: &str) -> Self {
                $name(s.to_owned())
            }
        }

        impl From<String> for $name {
            fn from(s: String) -> Self {
                $name(s)
            }
        }

        impl std::borrow::Borrow<str> for $name {
            fn borrow(&self) -> &str {
                &self.0
            }
        }
    };
}

name_type!(
    /// A sort symbol.
    Sort
);
name_type!(
    /// An operator symbol.
    Op
);
name_type!(
    /// A variable name.
    Var
);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SignatureError {
    #[error("duplicate sort `{0}`")]
    DuplicateSort(Sort),
    #[error("duplicate operator `{0}`")]
    DuplicateOperator(Op),
    #[error("undeclared sort `{sort}` in {at}")]
    UndeclaredSort { sort: Sort, at: String },
    #[error("unknown operator `{0}`")]
    UnknownOperator(Op),
    #[error("`{0}` is not a valid identifier")]
    InvalidIdentifier(String),
}

/// An operator declaration `name : arg_sorts -> result_sort`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpDecl {
    pub name: Op,
    pub arg_sorts: Vec<Sort>,
    pub result_sort: Sort,
}

impl OpDecl {
    pub fn new(name: impl Into<Op>, arg_sorts: &[&str], result_sort: &str) -> Self {
        OpDecl {
            name: name.into(),
            arg_sorts: arg_sorts.iter().map(|s| Sort::from(*s)).collect(),
            result_sort: result_sort.into(),
        }
    }

    pub fn arity(&self) -> usize {
        self.arg_sorts.len()
    }
}

impl fmt::Display for OpDecl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} :", self.name)?;
        for s in &self.arg_sorts {
            write!(f, " {s}")?;
        }
        write!(f, " -> {}", self.result_sort)
    }
}

/// Unvalidated signature description, in declaration order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RawSignature {
    pub sorts: Vec<Sort>,
    pub ops: Vec<OpDecl>,
}

impl RawSignature {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn sort(mut self, name: &str) -> Self {
        self.sorts.push(name.into());
        self
    }

    pub fn op(mut self, name: &str, args: &[&str], result: &str) -> Self {
        self.ops.push(OpDecl::new(name, args, result));
        self
    }

    pub fn validate(self) -> Result<Signature, SignatureError> {
        Signature::validate(self)
    }
}

/// A closed signature: declared sorts plus uniquely named operators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Signature {
    sorts: BTreeSet<Sort>,
    ops: BTreeMap<Op, OpDecl>,
}

impl Signature {
    /// Checks identifiers, uniqueness and closure, in declaration order.
    pub fn validate(raw: RawSignature) -> Result<Signature, SignatureError> {
        let mut sorts = BTreeSet::new();
        for s in raw.sorts {
            if !is_identifier(s.as_str()) {
                return Err(SignatureError::InvalidIdentifier(s.0));
            }
            if sorts.contains(&s) {
                return Err(SignatureError::DuplicateSort(s));
            }
            sorts.insert(s);
        }
        let mut ops = BTreeMap::new();
        for decl in raw.ops {
            if !is_identifier(decl.name.as_str()) {
                return Err(SignatureError::InvalidIdentifier(decl.name.0));
            }
            if ops.contains_key(&decl.name) {
                return Err(SignatureError::DuplicateOperator(decl.name));
            }
            for s in decl.arg_sorts.iter().chain(std::iter::once(&decl.result_sort)) {
                if !sorts.contains(s) {
                    return Err(SignatureError::UndeclaredSort {
                        sort: s.clone(),
                        at: decl.name.to_string(),
                    });
                }
            }
            ops.insert(decl.name.clone(), decl);
        }
        Ok(Signature { sorts, ops })
    }

    /// The raw description this signature validates from (sorted by name).
    pub fn to_raw(&self) -> RawSignature {
        RawSignature {
            sorts: self.sorts.iter().cloned().collect(),
            ops: self.ops.values().cloned().collect(),
        }
    }

    pub fn sorts(&self) -> impl Iterator<Item = &Sort> {
        self.sorts.iter()
    }

    pub fn has_sort(&self, sort: &str) -> bool {
        self.sorts.contains(sort)
    }

    pub fn ops(&self) -> impl Iterator<Item = &OpDecl> {
        self.ops.values()
    }

    pub fn op(&self, op: &str) -> Result<&OpDecl, SignatureError> {
        self.ops
            .get(op)
            .ok_or_else(|| SignatureError::UnknownOperator(op.into()))
    }

    pub fn lookup(&self, op: &str) -> Option<&OpDecl> {
        self.ops.get(op)
    }

    /// Argument sorts of `op`; position `i` is the sort of argument `i`.
    pub fn arity(&self, op: &str) -> Result<&[Sort], SignatureError> {
        self.op(op).map(|d| d.arg_sorts.as_slice())
    }

    /// Operators whose result sort is `sort`, in name order.
    pub fn ops_with_result<'a>(&'a self, sort: &'a Sort) -> impl Iterator<Item = &'a OpDecl> + 'a {
        self.ops.values().filter(move |d| &d.result_sort == sort)
    }
}

#[cfg(test)]
pub(crate) fn monoid_signature() -> Signature {
    RawSignature::new()
        .sort("M")
        .op("plus", &["M", "M"], "M")
        .op("e", &[], "M")
        .validate()
        .unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_monoid() {
        let sig = monoid_signature();
        assert_eq!(sig.sorts().count(), 1);
        assert_eq!(sig.ops().count(), 2);
    }

    #[test]
    fn undeclared_sort() {
        let err = RawSignature::new()
            .sort("M")
            .op("f", &["N"], "M")
            .validate()
            .unwrap_err();
        assert_eq!(
            err,
            SignatureError::UndeclaredSort {
                sort: "N".into(),
                at: "f".into()
            }
        );
    }

    #[test]
    fn duplicate_operator() {
        let err = RawSignature::new()
            .sort("M")
            .op("f", &[], "M")
            .op("f", &["M"], "M")
            .validate()
            .unwrap_err();
        assert_eq!(err, SignatureError::DuplicateOperator("f".into()));
    }

    #[test]
    fn duplicate_sort_and_bad_identifier() {
        let err = RawSignature::new().sort("M").sort("M").validate().unwrap_err();
        assert_eq!(err, SignatureError::DuplicateSort("M".into()));
        let err = RawSignature::new().sort("1M").validate().unwrap_err();
        assert!(matches!(err, SignatureError::InvalidIdentifier(_)));
    }

    #[test]
    fn arity_lookup() {
        let sig = monoid_signature();
        assert_eq!(sig.arity("plus").unwrap(), &[Sort::from("M"), Sort::from("M")]);
        assert!(sig.arity("e").unwrap().is_empty());
        assert_eq!(
            sig.arity("mul").unwrap_err(),
            SignatureError::UnknownOperator("mul".into())
        );
    }

    #[test]
    fn validate_is_idempotent() {
        let sig = monoid_signature();
        assert_eq!(sig.to_raw().validate().unwrap(), sig);
    }

    #[test]
    fn identifiers() {
        for ok in ["x", "_", "x'", "a-b", "M2", "plus_1"] {
            assert!(is_identifier(ok), "{ok}");
        }
        for bad in ["", "1x", "'x", "-", "a b", "a(b"] {
            assert!(!is_identifier(bad), "{bad}");
        }
    }
}
