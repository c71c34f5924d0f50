//! Recursive-descent parser for the line-oriented formula syntax.
//!
//! ```text
//! iff   := imp ("<->" imp)*
//! imp   := or ("->" imp)?
//! or    := and ("|" and)*
//! and   := unary ("&" unary)*
//! unary := "!" unary | atom | "(" iff ")"
//! atom  := [a-z][a-zA-Z0-9_]*
//! ```
//!
//! `¬ ∧ ∨ → ↔` are accepted as aliases. Names starting with `_` are
//! reserved for generated variables and rejected here.

use super::Formula;
use crate::error::ParseError;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Atom(String),
    Not,
    And,
    Or,
    Implies,
    Iff,
    LParen,
    RParen,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Atom(a) => format!("`{a}`"),
            Tok::Not => "`!`".into(),
            Tok::And => "`&`".into(),
            Tok::Or => "`|`".into(),
            Tok::Implies => "`->`".into(),
            Tok::Iff => "`<->`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
        }
    }
}

struct Lexed {
    toks: Vec<(Tok, usize)>,
    end_col: usize,
}

fn lex(src: &str, line: usize) -> Result<Lexed, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let err = |col: usize, msg: String| ParseError {
        line,
        column: col,
        message: msg,
    };
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '!' | '¬' => toks.push((Tok::Not, col)),
            '&' | '∧' => toks.push((Tok::And, col)),
            '|' | '∨' => toks.push((Tok::Or, col)),
            '→' => toks.push((Tok::Implies, col)),
            '↔' => toks.push((Tok::Iff, col)),
            '(' => toks.push((Tok::LParen, col)),
            ')' => toks.push((Tok::RParen, col)),
            '-' => {
                if chars.get(i + 1) == Some(&'>') {
                    toks.push((Tok::Implies, col));
                    i += 2;
                    continue;
                }
                return Err(err(col, "expected `->`".into()));
            }
            '<' => {
                if chars.get(i + 1) == Some(&'-') && chars.get(i + 2) == Some(&'>') {
                    toks.push((Tok::Iff, col));
                    i += 3;
                    continue;
                }
                return Err(err(col, "expected `<->`".into()));
            }
            'a'..='z' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                toks.push((Tok::Atom(chars[start..i].iter().collect()), col));
                continue;
            }
            '_' => return Err(err(col, "names starting with `_` are reserved".into())),
            other => return Err(err(col, format!("unexpected character `{other}`"))),
        }
        i += 1;
    }
    Ok(Lexed {
        toks,
        end_col: chars.len() + 1,
    })
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    line: usize,
    end_col: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |(_, c)| *c)
    }

    fn error(&self, message: String) -> ParseError {
        ParseError {
            line: self.line,
            column: self.col(),
            message,
        }
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn iff(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.imp()?;
        while self.eat(&Tok::Iff) {
            lhs = Formula::iff(lhs, self.imp()?);
        }
        Ok(lhs)
    }

    fn imp(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if self.eat(&Tok::Implies) {
            return Ok(Formula::implies(lhs, self.imp()?));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and()?;
        while self.eat(&Tok::Or) {
            lhs = Formula::or(lhs, self.and()?);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while self.eat(&Tok::And) {
            lhs = Formula::and(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Not) => {
                self.pos += 1;
                Ok(Formula::not(self.unary()?))
            }
            Some(Tok::Atom(a)) => {
                self.pos += 1;
                Ok(Formula::Var(a))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.iff()?;
                if !self.eat(&Tok::RParen) {
                    return Err(self.error("expected `)`".into()));
                }
                Ok(inner)
            }
            Some(t) => Err(self.error(format!("unexpected {}", t.describe()))),
            None => Err(self.error("unexpected end of formula".into())),
        }
    }
}

fn parse_at(src: &str, line: usize) -> Result<Formula, ParseError> {
    let Lexed { toks, end_col } = lex(src, line)?;
    let mut p = Parser {
        toks,
        pos: 0,
        line,
        end_col,
    };
    let f = p.iff()?;
    if let Some(t) = p.peek() {
        return Err(p.error(format!("unexpected {} after formula", t.describe())));
    }
    Ok(f)
}

/// Parses a single surface formula.
pub fn parse_formula(src: &str) -> Result<Formula, ParseError> {
    parse_at(src, 1)
}

/// Parses one formula per line. `#` starts a comment; blank lines are
/// skipped. Returned formulas are in surface form.
pub fn parse_lines(text: &str) -> Result<Vec<Formula>, ParseError> {
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let body = raw.split('#').next().unwrap_or("");
        if body.trim().is_empty() {
            continue;
        }
        out.push(parse_at(body, n + 1)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> Formula {
        Formula::var(s)
    }

    #[test]
    fn precedence() {
        assert_eq!(
            parse_formula("!p & q | r").unwrap(),
            Formula::or(Formula::and(Formula::not(v("p")), v("q")), v("r"))
        );
        assert_eq!(
            parse_formula("p -> q -> r").unwrap(),
            Formula::implies(v("p"), Formula::implies(v("q"), v("r")))
        );
        assert_eq!(
            parse_formula("p <-> q -> r").unwrap(),
            Formula::iff(v("p"), Formula::implies(v("q"), v("r")))
        );
        assert_eq!(
            parse_formula("p & q & r").unwrap(),
            Formula::and(Formula::and(v("p"), v("q")), v("r"))
        );
    }

    #[test]
    fn unicode_aliases() {
        assert_eq!(
            parse_formula("¬p ∧ q ∨ r → s ↔ t").unwrap(),
            parse_formula("!p & q | r -> s <-> t").unwrap()
        );
    }

    #[test]
    fn atom_lexing() {
        assert_eq!(parse_formula("fooBar_9").unwrap(), v("fooBar_9"));
        assert!(parse_formula("_o1").is_err());
        assert!(parse_formula("Pq").is_err());
    }

    #[test]
    fn errors_carry_position() {
        let e = parse_lines("p & q\n\n(p | q").unwrap_err();
        assert_eq!((e.line, e.column), (3, 7));
        let e = parse_formula("p & & q").unwrap_err();
        assert_eq!(e.column, 5);
        let e = parse_formula("p q").unwrap_err();
        assert_eq!(e.column, 3);
        let e = parse_formula("p - q").unwrap_err();
        assert_eq!(e.column, 3);
    }

    #[test]
    fn comments_and_blank_lines() {
        let fs = parse_lines("# header\np & q   # trailing\n\n  \n!p\n").unwrap();
        assert_eq!(fs.len(), 2);
        assert!(parse_lines("").unwrap().is_empty());
        assert!(parse_lines("# only\n").unwrap().is_empty());
    }
}
