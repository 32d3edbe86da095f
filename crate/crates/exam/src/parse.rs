//! Concrete syntax for terms.
//!
//! Variables are identifiers (letters, optional `#` digit suffix),
//! abstraction is `\x. t` or `λx. t` with the body extending maximally to
//! the right, application is left-associative juxtaposition, parentheses
//! group, and `--` starts a line comment.

use std::fmt;

use crate::syntax::{Name, Term};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at {}:{}: {}", self.line, self.col, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Lambda,
    Dot,
    LParen,
    RParen,
    Ident(Name),
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(input: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = input.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (tline, tcol) = (line, col);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next().unwrap();
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            c
        };
        match c {
            ' ' | '\t' | '\r' | '\n' => {
                bump(&mut chars);
            }
            '-' => {
                bump(&mut chars);
                if chars.peek() == Some(&'-') {
                    while let Some(&d) = chars.peek() {
                        if d == '\n' {
                            break;
                        }
                        bump(&mut chars);
                    }
                } else {
                    return Err(ParseError {
                        line: tline,
                        col: tcol,
                        message: "expected `--` to start a comment".into(),
                    });
                }
            }
            '\\' | 'λ' => {
                bump(&mut chars);
                out.push(Spanned { tok: Tok::Lambda, line: tline, col: tcol });
            }
            '.' => {
                bump(&mut chars);
                out.push(Spanned { tok: Tok::Dot, line: tline, col: tcol });
            }
            '(' => {
                bump(&mut chars);
                out.push(Spanned { tok: Tok::LParen, line: tline, col: tcol });
            }
            ')' => {
                bump(&mut chars);
                out.push(Spanned { tok: Tok::RParen, line: tline, col: tcol });
            }
            c if c.is_ascii_alphabetic() => {
                let mut base = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_alphabetic() {
                        base.push(bump(&mut chars));
                    } else {
                        break;
                    }
                }
                let mut index = 0u64;
                if chars.peek() == Some(&'#') {
                    bump(&mut chars);
                    let mut digits = String::new();
                    while let Some(&d) = chars.peek() {
                        if d.is_ascii_digit() {
                            digits.push(bump(&mut chars));
                        } else {
                            break;
                        }
                    }
                    if digits.is_empty() {
                        return Err(ParseError {
                            line: tline,
                            col: tcol,
                            message: format!("`{base}#` must be followed by digits"),
                        });
                    }
                    index = digits.parse().map_err(|_| ParseError {
                        line: tline,
                        col: tcol,
                        message: format!("name index out of range in `{base}#{digits}`"),
                    })?;
                }
                out.push(Spanned {
                    tok: Tok::Ident(Name { base, index }),
                    line: tline,
                    col: tcol,
                });
            }
            other => {
                return Err(ParseError {
                    line: tline,
                    col: tcol,
                    message: format!("unexpected character {other:?}"),
                });
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Spanned> {
        self.toks.get(self.pos)
    }

    fn err_here(&self, message: String) -> ParseError {
        match self.peek() {
            Some(s) => ParseError { line: s.line, col: s.col, message },
            None => {
                let (line, col) = self
                    .toks
                    .last()
                    .map(|s| (s.line, s.col + 1))
                    .unwrap_or((1, 1));
                ParseError { line, col, message }
            }
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        if let Some(Spanned { tok: Tok::Lambda, .. }) = self.peek() {
            self.pos += 1;
            let binder = match self.peek() {
                Some(Spanned { tok: Tok::Ident(n), .. }) => {
                    let n = n.clone();
                    self.pos += 1;
                    n
                }
                _ => return Err(self.err_here("expected binder after lambda".into())),
            };
            match self.peek() {
                Some(Spanned { tok: Tok::Dot, .. }) => self.pos += 1,
                _ => return Err(self.err_here("expected `.` after binder".into())),
            }
            let body = self.term()?;
            return Ok(Term::Lam(binder, Box::new(body)));
        }
        self.application()
    }

    fn application(&mut self) -> Result<Term, ParseError> {
        let mut acc = self
            .atom()?
            .ok_or_else(|| self.err_here("expected a term".into()))?;
        loop {
            match self.peek() {
                Some(Spanned { tok: Tok::Lambda, .. }) => {
                    // lambda in argument position extends maximally right
                    let arg = self.term()?;
                    acc = Term::app(acc, arg);
                    return Ok(acc);
                }
                _ => match self.atom()? {
                    Some(arg) => acc = Term::app(acc, arg),
                    None => return Ok(acc),
                },
            }
        }
    }

    fn atom(&mut self) -> Result<Option<Term>, ParseError> {
        match self.peek() {
            Some(Spanned { tok: Tok::Ident(n), .. }) => {
                let t = Term::Var(n.clone());
                self.pos += 1;
                Ok(Some(t))
            }
            Some(Spanned { tok: Tok::LParen, .. }) => {
                self.pos += 1;
                let t = self.term()?;
                match self.peek() {
                    Some(Spanned { tok: Tok::RParen, .. }) => {
                        self.pos += 1;
                        Ok(Some(t))
                    }
                    _ => Err(self.err_here("expected `)`".into())),
                }
            }
            _ => Ok(None),
        }
    }
}

/// Parse a single term. `parse(print(t))` is structurally `t`.
pub fn parse(input: &str) -> Result<Term, ParseError> {
    let toks = lex(input)?;
    let mut p = Parser { toks, pos: 0 };
    let t = p.term()?;
    if let Some(s) = p.peek() {
        return Err(ParseError {
            line: s.line,
            col: s.col,
            message: format!("unexpected trailing input `{:?}`", s.tok),
        });
    }
    Ok(t)
}
