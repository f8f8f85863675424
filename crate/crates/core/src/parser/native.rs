use std::fmt::Write;

use super::ParseError;
use crate::concept::Concept;
use crate::symbols::{is_fresh_name, SymbolTable, FRESH_PREFIX};
use crate::tbox::{Gci, TBox};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Name(String),
    Top,
    Bot,
    All,
    And,
    Sub,
    Dot,
    Open,
    Close,
}

#[derive(Debug)]
struct Spanned {
    tok: Tok,
    column: usize,
}

fn describe(tok: &Tok) -> String {
    match tok {
        Tok::Name(n) => format!("name `{n}`"),
        Tok::Top => "`top`".into(),
        Tok::Bot => "`bot`".into(),
        Tok::All => "`all`".into(),
        Tok::And => "`&`".into(),
        Tok::Sub => "`[=`".into(),
        Tok::Dot => "`.`".into(),
        Tok::Open => "`(`".into(),
        Tok::Close => "`)`".into(),
    }
}

fn lex_line(line: &str, line_no: usize) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = line.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let column = i + 1;
        let single = match c {
            '&' => Some(Tok::And),
            '.' => Some(Tok::Dot),
            '(' => Some(Tok::Open),
            ')' => Some(Tok::Close),
            _ => None,
        };
        if let Some(tok) = single {
            out.push(Spanned { tok, column });
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
        } else if c == '#' {
            break;
        } else if c == '[' {
            if chars.get(i + 1) != Some(&'=') {
                return Err(ParseError::new(line_no, column, "expected `[=`"));
            }
            out.push(Spanned { tok: Tok::Sub, column });
            i += 2;
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let mut word: String = chars[start..i].iter().collect();
            // `_fresh#<digits>` is a single token.
            if word == FRESH_PREFIX.trim_end_matches('#')
                && chars.get(i) == Some(&'#')
                && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())
            {
                i += 1;
                word.push('#');
                while i < chars.len() && chars[i].is_ascii_digit() {
                    word.push(chars[i]);
                    i += 1;
                }
            }
            let tok = match word.as_str() {
                "top" => Tok::Top,
                "bot" => Tok::Bot,
                "all" => Tok::All,
                _ => Tok::Name(word),
            };
            out.push(Spanned { tok, column: start + 1 });
        } else {
            return Err(ParseError::new(line_no, column, format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: &'a [Spanned],
    pos: usize,
    line: usize,
    end_column: usize,
    symbols: &'a mut SymbolTable,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn column(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_column, |s| s.column)
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError::new(self.line, self.column(), message)
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        match self.peek() {
            Some(tok) => self.error(format!("expected {wanted}, found {}", describe(tok))),
            None => self.error(format!("expected {wanted}, found end of line")),
        }
    }

    fn concept(&mut self) -> Result<Concept, ParseError> {
        let mut parts = vec![self.unary()?];
        while self.peek() == Some(&Tok::And) {
            self.pos += 1;
            parts.push(self.unary()?);
        }
        Ok(Concept::and(parts))
    }

    fn unary(&mut self) -> Result<Concept, ParseError> {
        match self.peek().cloned() {
            Some(Tok::All) => {
                self.pos += 1;
                let Some(Tok::Name(role)) = self.peek().cloned() else {
                    return Err(self.unexpected("a role name"));
                };
                if is_fresh_name(&role) {
                    return Err(self.error("fresh names cannot be roles"));
                }
                let role = self.symbols.intern_role(&role).map_err(|e| self.error(e.to_string()))?;
                self.pos += 1;
                if self.peek() != Some(&Tok::Dot) {
                    return Err(self.unexpected("`.`"));
                }
                self.pos += 1;
                Ok(Concept::forall(role, self.unary()?))
            }
            Some(Tok::Top) => {
                self.pos += 1;
                Ok(Concept::Top)
            }
            Some(Tok::Bot) => {
                self.pos += 1;
                Ok(Concept::Bottom)
            }
            Some(Tok::Name(name)) => {
                let id = self
                    .symbols
                    .intern_concept(&name)
                    .map_err(|e| self.error(e.to_string()))?;
                self.pos += 1;
                Ok(Concept::Name(id))
            }
            Some(Tok::Open) => {
                self.pos += 1;
                let inner = self.concept()?;
                if self.peek() != Some(&Tok::Close) {
                    return Err(self.unexpected("`)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            _ => Err(self.unexpected("a concept")),
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(_) => Err(self.unexpected("end of line")),
        }
    }
}

/// Parses a single concept, registering new names in `symbols`.
pub fn parse_concept(text: &str, symbols: &mut SymbolTable) -> Result<Concept, ParseError> {
    let toks = lex_line(text, 1)?;
    let mut p = Parser {
        toks: &toks,
        pos: 0,
        line: 1,
        end_column: text.chars().count() + 1,
        symbols,
    };
    let c = p.concept()?;
    p.finish()?;
    Ok(c)
}

/// Parses a `.flo` document: one axiom per non-blank, non-comment line.
pub fn parse_tbox(text: &str) -> Result<TBox, ParseError> {
    let mut symbols = SymbolTable::new();
    let mut axioms = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let toks = lex_line(line, line_no)?;
        if toks.is_empty() {
            continue;
        }
        let mut p = Parser {
            toks: &toks,
            pos: 0,
            line: line_no,
            end_column: line.chars().count() + 1,
            symbols: &mut symbols,
        };
        let lhs = p.concept()?;
        if p.peek() != Some(&Tok::Sub) {
            return Err(p.unexpected("`[=`"));
        }
        p.pos += 1;
        let rhs = p.concept()?;
        p.finish()?;
        axioms.push(Gci::new(lhs, rhs));
    }
    Ok(TBox::new(symbols, axioms))
}

/// Renders a concept in native syntax.
pub fn serialize_concept(c: &Concept, symbols: &SymbolTable) -> String {
    let mut out = String::new();
    write_concept(&mut out, c, symbols);
    out
}

fn write_concept(out: &mut String, c: &Concept, symbols: &SymbolTable) {
    match c {
        Concept::Top => out.push_str("top"),
        Concept::Bottom => out.push_str("bot"),
        Concept::Name(a) => out.push_str(symbols.concept_name(*a)),
        Concept::Conj(parts) => {
            for (i, p) in parts.iter().enumerate() {
                if i > 0 {
                    out.push_str(" & ");
                }
                if matches!(p, Concept::Conj(_)) {
                    out.push('(');
                    write_concept(out, p, symbols);
                    out.push(')');
                } else {
                    write_concept(out, p, symbols);
                }
            }
        }
        Concept::Forall(r, filler) => {
            let _ = write!(out, "all {}.", symbols.role_name(*r));
            if matches!(**filler, Concept::Conj(_)) {
                out.push('(');
                write_concept(out, filler, symbols);
                out.push(')');
            } else {
                write_concept(out, filler, symbols);
            }
        }
    }
}

/// Renders a TBox in native syntax, one axiom per line in stored order.
pub fn serialize_tbox(tbox: &TBox) -> String {
    let mut out = String::new();
    for g in &tbox.axioms {
        write_concept(&mut out, &g.lhs, &tbox.symbols);
        out.push_str(" [= ");
        write_concept(&mut out, &g.rhs, &tbox.symbols);
        out.push('\n');
    }
    out
}
