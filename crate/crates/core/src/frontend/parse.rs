use std::collections::{BTreeMap, HashMap};

use super::lexer::{tokenize, Tok, Token};
use super::{FrontendError, ParseError, ProofScript};
use crate::calculus::{Derivation, Judgment};
use crate::model::{Equation, Model, ModelError, RawModel, Theory, TheoryError};
use crate::signature::{is_identifier, OpDecl, RawSignature, Signature, SignatureError, Sort, Var};
use crate::term::{Context, SortError, Term};

/// Nesting limit for terms and derivations.
pub const MAX_DEPTH: usize = 256;

struct Cursor<'a> {
    toks: &'a [Token],
    pos: usize,
    end: (usize, usize),
    depth: usize,
}

impl<'a> Cursor<'a> {
    fn new(toks: &'a [Token], end: (usize, usize)) -> Self {
        Cursor {
            toks,
            pos: 0,
            end,
            depth: 0,
        }
    }

    fn peek(&self) -> Option<&'a Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .map(|t| (t.line, t.column))
            .unwrap_or(self.end)
    }

    fn err(&self, expected: &str) -> ParseError {
        let (line, column) = self.here();
        ParseError {
            line,
            column,
            expected: expected.to_string(),
            found: self
                .peek()
                .map(|t| t.to_string())
                .unwrap_or_else(|| "end of input".into()),
        }
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if self.eat(&tok) {
            Ok(())
        } else {
            Err(self.err(&tok.to_string()))
        }
    }

    fn word(&mut self, what: &str) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Word(w)) => {
                self.pos += 1;
                Ok(w.clone())
            }
            _ => Err(self.err(what)),
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Word(w)) if is_identifier(w) => {
                self.pos += 1;
                Ok(w.clone())
            }
            _ => Err(self.err(what)),
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.err("end of line"))
        }
    }

    fn enter(&mut self) -> Result<(), ParseError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            Err(self.err(&format!("nesting of at most {MAX_DEPTH} levels")))
        } else {
            Ok(())
        }
    }

    fn leave(&mut self) {
        self.depth -= 1;
    }
}

/// Splits a token stream into lines.
fn lines(toks: &[Token]) -> Vec<&[Token]> {
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=toks.len() {
        if i == toks.len() || toks[i].line != toks[start].line {
            if start < i {
                out.push(&toks[start..i]);
            }
            start = i;
        }
    }
    out
}

fn line_cursor(line: &[Token]) -> Cursor<'_> {
    let last = line.last().expect("nonempty line");
    let width = match &last.tok {
        Tok::Word(w) => w.chars().count(),
        Tok::Arrow | Tok::Assign => 2,
        _ => 1,
    };
    Cursor::new(line, (last.line, last.column + width))
}

/// A term before operator/variable resolution.
#[derive(Debug, Clone)]
enum RawTerm {
    Name(String),
    Call(String, Vec<RawTerm>),
}

fn raw_term(c: &mut Cursor<'_>) -> Result<RawTerm, ParseError> {
    c.enter()?;
    let name = c.ident("a term")?;
    let t = if c.eat(&Tok::LParen) {
        let mut args = Vec::new();
        if !c.eat(&Tok::RParen) {
            loop {
                args.push(raw_term(c)?);
                if c.eat(&Tok::RParen) {
                    break;
                }
                if !c.eat(&Tok::Comma) {
                    return Err(c.err("`,` or `)`"));
                }
            }
        }
        RawTerm::Call(name, args)
    } else {
        RawTerm::Name(name)
    };
    c.leave();
    Ok(t)
}

/// A bare name is a nullary application iff it names a declared operator.
fn resolve(t: &RawTerm, sig: &Signature) -> Term {
    match t {
        RawTerm::Name(n) if sig.lookup(n).is_some() => Term::App(n.as_str().into(), Vec::new()),
        RawTerm::Name(n) => Term::Var(n.as_str().into()),
        RawTerm::Call(op, args) => Term::App(
            op.as_str().into(),
            args.iter().map(|a| resolve(a, sig)).collect(),
        ),
    }
}

fn term(c: &mut Cursor<'_>, sig: &Signature) -> Result<Term, ParseError> {
    Ok(resolve(&raw_term(c)?, sig))
}

/// `[x, y:M, z:N]`: a run of unannotated names takes the next annotation.
fn context(c: &mut Cursor<'_>, sig: &Signature) -> Result<Context, FrontendError> {
    c.expect(Tok::LBracket)?;
    let mut ctx = Context::new();
    let mut pending: Vec<(String, (usize, usize))> = Vec::new();
    if c.eat(&Tok::RBracket) {
        return Ok(ctx);
    }
    loop {
        let at = c.here();
        let name = c.ident("a variable name")?;
        pending.push((name, at));
        if c.eat(&Tok::Colon) {
            let sort_at = c.here();
            let sort = c.ident("a sort")?;
            if !sig.has_sort(&sort) {
                return Err(FrontendError::Sort {
                    line: sort_at.0,
                    column: sort_at.1,
                    error: SortError::UndeclaredSort(sort.into()),
                });
            }
            for (name, (line, column)) in pending.drain(..) {
                if sig.lookup(&name).is_some() {
                    return Err(ParseError {
                        line,
                        column,
                        expected: "a variable name that is not an operator".into(),
                        found: format!("`{name}`"),
                    }
                    .into());
                }
                if ctx.insert(name.as_str().into(), sort.as_str().into()).is_some() {
                    return Err(FrontendError::Sort {
                        line,
                        column,
                        error: SortError::DuplicateVariable(name.into()),
                    });
                }
            }
        }
        if c.eat(&Tok::RBracket) {
            break;
        }
        if !c.eat(&Tok::Comma) {
            let expected = if pending.is_empty() { "`,` or `]`" } else { "`:`, `,` or `]`" };
            return Err(c.err(expected).into());
        }
    }
    if !pending.is_empty() {
        return Err(c.err("a sort annotation `:<Sort>` before `]`").into());
    }
    Ok(ctx)
}

/// `[ctx] [:] lhs = rhs`, both sides checked over the context.
fn equation(c: &mut Cursor<'_>, sig: &Signature) -> Result<Equation, FrontendError> {
    let ctx = context(c, sig)?;
    c.eat(&Tok::Colon);
    let lhs_at = c.here();
    let lhs = term(c, sig)?;
    c.expect(Tok::Equals)?;
    let rhs_at = c.here();
    let rhs = term(c, sig)?;
    let sort_err = |(line, column): (usize, usize), error| FrontendError::Sort {
        line,
        column,
        error,
    };
    let sort = lhs.sort_of(sig, &ctx).map_err(|e| sort_err(lhs_at, e))?;
    rhs.check_sort(sig, &ctx, &sort)
        .map_err(|e| sort_err(rhs_at, e))?;
    Ok(Equation {
        ctx,
        sort,
        lhs,
        rhs,
    })
}

pub fn parse_theory(text: &str) -> Result<Theory, FrontendError> {
    let toks = tokenize(text)?;
    let mut raw = RawSignature::new();
    let mut sort_lines = Vec::new();
    let mut op_lines = Vec::new();
    let mut eq_lines = Vec::new();
    for line in lines(&toks) {
        let mut c = line_cursor(line);
        let at = c.here().0;
        match c.word("`sort`, `op` or `eq`")?.as_str() {
            "sort" => {
                let name = c.ident("a sort name")?;
                c.finish()?;
                raw.sorts.push(name.into());
                sort_lines.push(at);
            }
            "op" => {
                let name = c.ident("an operator name")?;
                c.expect(Tok::Colon)?;
                let mut args = Vec::new();
                while let Some(Tok::Word(_)) = c.peek() {
                    args.push(Sort::from(c.ident("a sort")?));
                }
                c.expect(Tok::Arrow)?;
                let result = c.ident("a result sort")?;
                c.finish()?;
                raw.ops.push(OpDecl {
                    name: name.into(),
                    arg_sorts: args,
                    result_sort: result.into(),
                });
                op_lines.push(at);
            }
            "eq" => {
                let name = c.ident("an equation name")?;
                eq_lines.push((at, name, line));
            }
            _ => {
                c.pos -= 1;
                return Err(c.err("`sort`, `op` or `eq`").into());
            }
        }
    }

    let sig = Signature::validate(raw.clone()).map_err(|error| {
        let line = match &error {
            SignatureError::DuplicateSort(s) => {
                let i = raw.sorts.iter().rposition(|x| x == s).unwrap_or(0);
                sort_lines[i]
            }
            SignatureError::InvalidIdentifier(n) => raw
                .sorts
                .iter()
                .position(|x| x.as_str() == n)
                .map(|i| sort_lines[i])
                .or_else(|| {
                    raw.ops
                        .iter()
                        .position(|d| d.name.as_str() == n)
                        .map(|i| op_lines[i])
                })
                .unwrap_or(0),
            SignatureError::DuplicateOperator(op) => {
                let i = raw.ops.iter().rposition(|d| &d.name == op).unwrap_or(0);
                op_lines[i]
            }
            SignatureError::UndeclaredSort { at, .. } => {
                let i = raw.ops.iter().position(|d| d.name.as_str() == at).unwrap_or(0);
                op_lines[i]
            }
            SignatureError::UnknownOperator(_) => 0,
        };
        FrontendError::Signature { line, error }
    })?;

    let mut equations = Vec::new();
    let mut seen = HashMap::new();
    for (line_no, name, line) in eq_lines {
        let mut c = line_cursor(line);
        c.pos = 2;
        let eq = equation(&mut c, &sig)?;
        c.finish()?;
        if seen.insert(name.clone(), line_no).is_some() {
            return Err(FrontendError::Theory {
                line: line_no,
                error: TheoryError::DuplicateEquation(name),
            });
        }
        equations.push((name, eq));
    }
    Theory::new(sig, equations).map_err(|error| FrontendError::Theory { line: 0, error })
}

pub fn parse_model(text: &str, sig: &Signature) -> Result<Model, FrontendError> {
    let toks = tokenize(text)?;
    let all = lines(&toks);
    let mut raw = RawModel::new();
    let mut carriers: BTreeMap<String, Vec<String>> = BTreeMap::new();
    let mut rest = Vec::new();
    for line in &all {
        let mut c = line_cursor(line);
        match c.word("`carrier`, `repr` or `table`")?.as_str() {
            "carrier" => {
                let sort_at = c.here();
                let sort = c.ident("a sort")?;
                c.expect(Tok::Equals)?;
                let mut elems = vec![c.word("an element")?];
                while c.eat(&Tok::Comma) {
                    elems.push(c.word("an element")?);
                }
                c.finish()?;
                if carriers.contains_key(&sort) || !sig.has_sort(&sort) {
                    let error = if sig.has_sort(&sort) {
                        ModelError::DuplicateCarrier(sort.into())
                    } else {
                        ModelError::UndeclaredSort(sort.into())
                    };
                    return Err(FrontendError::Model {
                        line: Some(sort_at.0),
                        error,
                    });
                }
                carriers.insert(sort.clone(), elems.clone());
                raw.carriers.push((sort.into(), elems));
            }
            "repr" | "table" => rest.push(*line),
            _ => {
                c.pos -= 1;
                return Err(c.err("`carrier`, `repr` or `table`").into());
            }
        }
    }
    let element = |c: &mut Cursor<'_>, sort: &Sort| -> Result<String, FrontendError> {
        let (line, _) = c.here();
        let e = c.word("an element")?;
        match carriers.get(sort.as_str()) {
            Some(elems) if elems.contains(&e) => Ok(e),
            _ => Err(FrontendError::Model {
                line: Some(line),
                error: ModelError::UnknownElement {
                    sort: sort.clone(),
                    elem: e,
                },
            }),
        }
    };
    let mut row_lines = HashMap::new();
    for line in rest {
        let mut c = line_cursor(line);
        let line_no = c.here().0;
        match c.word("keyword")?.as_str() {
            "repr" => {
                let sort = Sort::from(c.ident("a sort")?);
                c.expect(Tok::Colon)?;
                let from = element(&mut c, &sort)?;
                c.expect(Tok::Arrow)?;
                let to = element(&mut c, &sort)?;
                c.finish()?;
                raw.reprs.push((sort, from, to));
            }
            _ => {
                let op_at = c.here();
                let op = c.ident("an operator")?;
                let decl = sig.lookup(&op).ok_or_else(|| FrontendError::Model {
                    line: Some(op_at.0),
                    error: ModelError::UnknownOperator(op.as_str().into()),
                })?;
                let mut args = Vec::new();
                if c.eat(&Tok::LParen) && !c.eat(&Tok::RParen) {
                    loop {
                        let sort = match decl.arg_sorts.get(args.len()) {
                            Some(s) => s.clone(),
                            None => {
                                return Err(FrontendError::Model {
                                    line: Some(line_no),
                                    error: ModelError::RowArity {
                                        op: decl.name.clone(),
                                        expected: decl.arity(),
                                        got: args.len() + 1,
                                    },
                                })
                            }
                        };
                        args.push(element(&mut c, &sort)?);
                        if c.eat(&Tok::RParen) {
                            break;
                        }
                        c.expect(Tok::Comma)?;
                    }
                }
                if args.len() != decl.arity() {
                    return Err(FrontendError::Model {
                        line: Some(line_no),
                        error: ModelError::RowArity {
                            op: decl.name.clone(),
                            expected: decl.arity(),
                            got: args.len(),
                        },
                    });
                }
                c.expect(Tok::Equals)?;
                let value = element(&mut c, &decl.result_sort)?;
                c.finish()?;
                if row_lines.insert((op.clone(), args.clone()), line_no).is_some() {
                    return Err(FrontendError::Model {
                        line: Some(line_no),
                        error: ModelError::DuplicateRow {
                            op: op.into(),
                            tuple: args,
                        },
                    });
                }
                raw.rows.push((op.into(), args, value));
            }
        }
    }
    Model::validate(sig, raw).map_err(|error| FrontendError::Model { line: None, error })
}

/// Parses `[ctx] [:] lhs = rhs` on its own, as used on the command line.
pub fn parse_equation(text: &str, sig: &Signature) -> Result<Equation, FrontendError> {
    let toks = tokenize(text)?;
    if toks.is_empty() {
        return Err(Cursor::new(&toks, (1, 1)).err("an equation").into());
    }
    let mut c = line_cursor(&toks);
    let eq = equation(&mut c, sig)?;
    c.finish()?;
    Ok(eq)
}

/// Parses a term, resolving bare names against `sig`, and checks it over `ctx`.
pub fn parse_term(text: &str, sig: &Signature, ctx: &Context) -> Result<Term, FrontendError> {
    let toks = tokenize(text)?;
    let mut c = Cursor::new(&toks, (1, text.chars().count() + 1));
    let t = term(&mut c, sig)?;
    c.finish()?;
    t.sort_of(sig, ctx).map_err(|error| FrontendError::Sort {
        line: 1,
        column: 1,
        error,
    })?;
    Ok(t)
}

pub fn parse_proof(text: &str, theory: &Theory) -> Result<ProofScript, FrontendError> {
    let sig = theory.signature();
    let toks = tokenize(text)?;
    let end = toks
        .last()
        .map(|t| (t.line + 1, 1))
        .unwrap_or((1, 1));
    let mut c = Cursor::new(&toks, end);
    let mut theory_name = None;
    if c.peek() == Some(&Tok::Word("theory".into())) {
        let line = toks[0].line;
        c.pos += 1;
        theory_name = Some(c.word("a theory name")?);
        if c.toks.get(c.pos).is_some_and(|t| t.line == line) {
            return Err(c.err("end of line").into());
        }
    }
    if c.peek() != Some(&Tok::Word("prove".into())) {
        return Err(c.err("`prove`").into());
    }
    let header_line = toks[c.pos].line;
    let header_end = toks[c.pos..]
        .iter()
        .position(|t| t.line != header_line)
        .map(|i| c.pos + i)
        .unwrap_or(toks.len());
    let mut h = line_cursor(&toks[c.pos..header_end]);
    h.pos = 1;
    let claim = equation(&mut h, sig)?;
    h.finish()?;

    let mut c = Cursor::new(&toks[header_end..], end);
    let derivation = derivation(&mut c, sig)?;
    if !c.at_end() {
        return Err(c.err("end of input").into());
    }
    Ok(ProofScript {
        theory: theory_name,
        claim: Judgment::from_equation(&claim),
        derivation,
    })
}

/// Parses a lone s-expression derivation.
pub fn parse_derivation(text: &str, sig: &Signature) -> Result<Derivation, FrontendError> {
    let toks = tokenize(text)?;
    let end = toks.last().map(|t| (t.line + 1, 1)).unwrap_or((1, 1));
    let mut c = Cursor::new(&toks, end);
    let d = derivation(&mut c, sig)?;
    if !c.at_end() {
        return Err(c.err("end of input").into());
    }
    Ok(d)
}

const RULES: &str = "a rule (hyp, base, app, sub, refl, sym, trans)";

fn derivation(c: &mut Cursor<'_>, sig: &Signature) -> Result<Derivation, ParseError> {
    c.enter()?;
    c.expect(Tok::LParen)?;
    let keyword_at = c.pos;
    let d = match c.word(RULES)?.as_str() {
        "hyp" => Derivation::Hyp(c.ident("an equation name")?),
        "base" => Derivation::Base(c.ident("a variable")?.into()),
        "app" => {
            let op = c.ident("an operator")?;
            let mut premises = Vec::new();
            while c.peek() == Some(&Tok::LParen) {
                premises.push(derivation(c, sig)?);
            }
            Derivation::App(op.into(), premises)
        }
        "sub" => {
            let premise = derivation(c, sig)?;
            c.expect(Tok::LParen)?;
            let mut bindings = BTreeMap::new();
            while c.eat(&Tok::LParen) {
                let at = c.here();
                let x: Var = c.ident("a variable")?.into();
                c.expect(Tok::Assign)?;
                let t = term(c, sig)?;
                c.expect(Tok::RParen)?;
                if bindings.insert(x.clone(), t).is_some() {
                    return Err(ParseError {
                        line: at.0,
                        column: at.1,
                        expected: "each variable bound once".into(),
                        found: format!("`{x}` bound twice"),
                    });
                }
            }
            c.expect(Tok::RParen)?;
            Derivation::Sub(Box::new(premise), bindings)
        }
        "refl" => Derivation::Refl(term(c, sig)?),
        "sym" => Derivation::Sym(Box::new(derivation(c, sig)?)),
        "trans" => {
            let l = derivation(c, sig)?;
            let r = derivation(c, sig)?;
            Derivation::Trans(Box::new(l), Box::new(r))
        }
        _ => {
            c.pos = keyword_at;
            return Err(c.err(RULES));
        }
    };
    c.expect(Tok::RParen)?;
    c.leave();
    Ok(d)
}
