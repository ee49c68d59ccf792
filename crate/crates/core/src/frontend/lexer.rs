use std::fmt;

use super::ParseError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    /// `[A-Za-z0-9_'./-]+`; identifiers, element labels, keywords and file names.
    Word(String),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Colon,
    Equals,
    Arrow,
    Assign,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Word(w) => write!(f, "`{w}`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::LBracket => f.write_str("`[`"),
            Tok::RBracket => f.write_str("`]`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Colon => f.write_str("`:`"),
            Tok::Equals => f.write_str("`=`"),
            Tok::Arrow => f.write_str("`->`"),
            Tok::Assign => f.write_str("`:=`"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub column: usize,
}

fn is_word_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '_' | '\'' | '-' | '.' | '/')
}

/// Splits `text` into tokens with 1-based line and column (in characters).
/// `#` starts a comment running to the end of the line.
pub fn tokenize(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    for (li, line) in text.lines().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let column = i + 1;
            let push = |out: &mut Vec<Token>, tok| {
                out.push(Token {
                    tok,
                    line: li + 1,
                    column,
                })
            };
            match c {
                '#' => break,
                c if c.is_whitespace() => i += 1,
                '(' => {
                    push(&mut out, Tok::LParen);
                    i += 1;
                }
                ')' => {
                    push(&mut out, Tok::RParen);
                    i += 1;
                }
                '[' => {
                    push(&mut out, Tok::LBracket);
                    i += 1;
                }
                ']' => {
                    push(&mut out, Tok::RBracket);
                    i += 1;
                }
                ',' => {
                    push(&mut out, Tok::Comma);
                    i += 1;
                }
                '=' => {
                    push(&mut out, Tok::Equals);
                    i += 1;
                }
                ':' if chars.get(i + 1) == Some(&'=') => {
                    push(&mut out, Tok::Assign);
                    i += 2;
                }
                ':' => {
                    push(&mut out, Tok::Colon);
                    i += 1;
                }
                '-' if chars.get(i + 1) == Some(&'>') => {
                    push(&mut out, Tok::Arrow);
                    i += 2;
                }
                c if is_word_char(c) => {
                    let start = i;
                    while i < chars.len()
                        && is_word_char(chars[i])
                        && !(chars[i] == '-' && chars.get(i + 1) == Some(&'>'))
                    {
                        i += 1;
                    }
                    push(&mut out, Tok::Word(chars[start..i].iter().collect()));
                }
                other => {
                    return Err(ParseError {
                        line: li + 1,
                        column,
                        expected: "a token".into(),
                        found: format!("{other:?}"),
                    })
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        tokenize(s).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn arrows_and_words() {
        assert_eq!(
            toks("op plus : M M->M # comment"),
            vec![
                Tok::Word("op".into()),
                Tok::Word("plus".into()),
                Tok::Colon,
                Tok::Word("M".into()),
                Tok::Word("M".into()),
                Tok::Arrow,
                Tok::Word("M".into()),
            ]
        );
        assert_eq!(
            toks("(x := a-b)"),
            vec![
                Tok::LParen,
                Tok::Word("x".into()),
                Tok::Assign,
                Tok::Word("a-b".into()),
                Tok::RParen
            ]
        );
    }

    #[test]
    fn positions_and_errors() {
        let t = tokenize("sort M\n  op e : -> M").unwrap();
        assert_eq!((t[2].line, t[2].column), (2, 3));
        let err = tokenize("sort M\nop % : M").unwrap_err();
        assert_eq!((err.line, err.column), (2, 4));
    }
}
