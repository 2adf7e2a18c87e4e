//! Recursive-descent parser for the concrete term syntax.
//!
//! The grammar is documented in `docs/term-grammar.md`. Keywords `new`,
//! `tau`, `if`, `then`, `else` and `group` are reserved; identifiers may
//! contain `#`, `^` and `'` so canonical forms round-trip.

use thiserror::Error;

use super::{Group, Name, Process, PrivType, System, Term};

#[derive(Debug, Error, PartialEq, Eq)]
#[error("syntax error at byte {pos}: {msg}")]
pub struct SyntaxError {
    pub pos: usize,
    pub msg: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Number(u32),
    Tilde,
    LParen,
    RParen,
    Bang,
    Lt,
    Gt,
    Dot,
    Pipe,
    PipePipe,
    Plus,
    Eq,
    Colon,
    Comma,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
}

impl std::fmt::Display for Tok {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Tok::Ident(i) => return write!(f, "`{i}`"),
            Tok::Number(n) => return write!(f, "`{n}`"),
            Tok::Tilde => "`~`",
            Tok::LParen => "`(`",
            Tok::RParen => "`)`",
            Tok::Bang => "`!`",
            Tok::Lt => "`<`",
            Tok::Gt => "`>`",
            Tok::Dot => "`.`",
            Tok::Pipe => "`|`",
            Tok::PipePipe => "`||`",
            Tok::Plus => "`+`",
            Tok::Eq => "`=`",
            Tok::Colon => "`:`",
            Tok::Comma => "`,`",
            Tok::LBracket => "`[`",
            Tok::RBracket => "`]`",
            Tok::LBrace => "`{`",
            Tok::RBrace => "`}`",
        };
        write!(f, "{s}")
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || matches!(c, '_' | '#' | '^' | '\'')
}

fn is_ident_continue(c: char) -> bool {
    is_ident_start(c) || c.is_ascii_digit()
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, SyntaxError> {
    let mut toks = Vec::new();
    let bytes: Vec<(usize, char)> = text.char_indices().collect();
    let mut i = 0;
    while i < bytes.len() {
        let (pos, c) = bytes[i];
        match c {
            c if c.is_whitespace() => {
                i += 1;
            }
            c if is_ident_start(c) => {
                let mut ident = String::new();
                while i < bytes.len() && is_ident_continue(bytes[i].1) {
                    ident.push(bytes[i].1);
                    i += 1;
                }
                toks.push((pos, Tok::Ident(ident)));
            }
            c if c.is_ascii_digit() => {
                let mut n = String::new();
                while i < bytes.len() && bytes[i].1.is_ascii_digit() {
                    n.push(bytes[i].1);
                    i += 1;
                }
                let value = n.parse::<u32>().map_err(|_| SyntaxError {
                    pos,
                    msg: format!("number `{n}` out of range"),
                })?;
                toks.push((pos, Tok::Number(value)));
            }
            '~' => {
                toks.push((pos, Tok::Tilde));
                i += 1;
            }
            '(' => {
                toks.push((pos, Tok::LParen));
                i += 1;
            }
            ')' => {
                toks.push((pos, Tok::RParen));
                i += 1;
            }
            '!' => {
                toks.push((pos, Tok::Bang));
                i += 1;
            }
            '<' => {
                toks.push((pos, Tok::Lt));
                i += 1;
            }
            '>' => {
                toks.push((pos, Tok::Gt));
                i += 1;
            }
            '.' => {
                toks.push((pos, Tok::Dot));
                i += 1;
            }
            '|' => {
                if i + 1 < bytes.len() && bytes[i + 1].1 == '|' {
                    toks.push((pos, Tok::PipePipe));
                    i += 2;
                } else {
                    toks.push((pos, Tok::Pipe));
                    i += 1;
                }
            }
            '+' => {
                toks.push((pos, Tok::Plus));
                i += 1;
            }
            '=' => {
                toks.push((pos, Tok::Eq));
                i += 1;
            }
            ':' => {
                toks.push((pos, Tok::Colon));
                i += 1;
            }
            ',' => {
                toks.push((pos, Tok::Comma));
                i += 1;
            }
            '[' => {
                toks.push((pos, Tok::LBracket));
                i += 1;
            }
            ']' => {
                toks.push((pos, Tok::RBracket));
                i += 1;
            }
            '{' => {
                toks.push((pos, Tok::LBrace));
                i += 1;
            }
            '}' => {
                toks.push((pos, Tok::RBrace));
                i += 1;
            }
            other => {
                return Err(SyntaxError { pos, msg: format!("unexpected character `{other}`") })
            }
        }
    }
    Ok(toks)
}

const KEYWORDS: &[&str] = &["new", "tau", "if", "then", "else", "group"];

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Self, SyntaxError> {
        Ok(Parser { toks: lex(text)?, pos: 0, end: text.len() })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn peek2(&self) -> Option<&Tok> {
        self.toks.get(self.pos + 1).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, SyntaxError> {
        Err(SyntaxError { pos: self.here(), msg: msg.into() })
    }

    fn expect(&mut self, tok: Tok) -> Result<(), SyntaxError> {
        match self.peek() {
            Some(t) if *t == tok => {
                self.pos += 1;
                Ok(())
            }
            Some(t) => {
                let t = t.clone();
                self.err(format!("expected {tok}, found {t}"))
            }
            None => self.err(format!("expected {tok}, found end of input")),
        }
    }

    fn ident(&mut self) -> Result<String, SyntaxError> {
        match self.peek() {
            Some(Tok::Ident(i)) if !KEYWORDS.contains(&i.as_str()) => {
                let i = i.clone();
                self.pos += 1;
                Ok(i)
            }
            Some(t) => {
                let t = t.clone();
                self.err(format!("expected identifier, found {t}"))
            }
            None => self.err("expected identifier, found end of input"),
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<(), SyntaxError> {
        match self.peek() {
            Some(Tok::Ident(i)) if i == kw => {
                self.pos += 1;
                Ok(())
            }
            _ => self.err(format!("expected keyword `{kw}`")),
        }
    }

    fn name(&mut self) -> Result<Name, SyntaxError> {
        let base = self.ident()?;
        if self.peek() == Some(&Tok::Tilde) {
            self.pos += 1;
            match self.bump() {
                Some(Tok::Number(n)) => Ok(Name::new(base, n)),
                _ => self.err("expected index after `~`"),
            }
        } else {
            Ok(Name::new(base, 0))
        }
    }

    fn group(&mut self) -> Result<Group, SyntaxError> {
        let first = self.ident()?;
        let mut g = Group::role(first);
        while self.peek() == Some(&Tok::Plus) {
            self.pos += 1;
            let next = self.ident()?;
            g = Group::union(g, Group::role(next));
        }
        Ok(g)
    }

    fn privtype(&mut self) -> Result<PrivType, SyntaxError> {
        if self.peek() == Some(&Tok::LParen) {
            self.pos += 1;
            let group = self.group()?;
            self.expect(Tok::RParen)?;
            self.expect(Tok::LBracket)?;
            let inner = self.privtype()?;
            self.expect(Tok::RBracket)?;
            return Ok(PrivType::group(group, inner));
        }
        let id = self.ident()?;
        match self.peek() {
            Some(Tok::LBracket) => {
                self.pos += 1;
                let inner = self.privtype()?;
                self.expect(Tok::RBracket)?;
                Ok(PrivType::group(Group::role(id), inner))
            }
            Some(Tok::LBrace) => {
                self.pos += 1;
                let mut domain = vec![self.ident()?];
                while self.peek() == Some(&Tok::Comma) {
                    self.pos += 1;
                    domain.push(self.ident()?);
                }
                self.expect(Tok::RBrace)?;
                if domain.iter().collect::<std::collections::BTreeSet<_>>().len() != domain.len() {
                    return self.err("duplicate value in context-variable domain");
                }
                Ok(PrivType::ContextVar { id, domain })
            }
            _ => Ok(PrivType::basic(id)),
        }
    }

    fn process_expr(&mut self) -> Result<Process, SyntaxError> {
        let first = self.process_term()?;
        match self.peek() {
            Some(Tok::Pipe) => {
                let mut ops = vec![first];
                while self.peek() == Some(&Tok::Pipe) {
                    self.pos += 1;
                    ops.push(self.process_term()?);
                }
                if self.peek() == Some(&Tok::Plus) {
                    return self.err("mixed `|` and `+` require parentheses");
                }
                Ok(Process::par_all(ops))
            }
            Some(Tok::Plus) => {
                let mut ops = vec![first];
                while self.peek() == Some(&Tok::Plus) {
                    self.pos += 1;
                    ops.push(self.process_term()?);
                }
                if self.peek() == Some(&Tok::Pipe) {
                    return self.err("mixed `|` and `+` require parentheses");
                }
                Ok(Process::choice_all(ops))
            }
            _ => Ok(first),
        }
    }

    fn process_term(&mut self) -> Result<Process, SyntaxError> {
        match self.peek() {
            Some(Tok::Bang) => {
                self.pos += 1;
                Ok(Process::repl(self.process_term()?))
            }
            Some(Tok::Number(0)) => {
                self.pos += 1;
                Ok(Process::Empty)
            }
            Some(Tok::LParen) => {
                if self.peek2() == Some(&Tok::Ident("new".to_string())) {
                    self.pos += 2;
                    let base = self.ident()?;
                    self.expect(Tok::Colon)?;
                    let ty = self.privtype()?;
                    self.expect(Tok::RParen)?;
                    let cont = self.process_term()?;
                    Ok(Process::new_name(base, ty, cont))
                } else {
                    self.pos += 1;
                    let inner = self.process_expr()?;
                    self.expect(Tok::RParen)?;
                    Ok(inner)
                }
            }
            Some(Tok::Ident(i)) if i == "tau" => {
                self.pos += 1;
                self.expect(Tok::Dot)?;
                Ok(Process::silent(self.process_term()?))
            }
            Some(Tok::Ident(i)) if i == "if" => {
                self.pos += 1;
                let scrutinee = self.name()?;
                self.expect(Tok::Eq)?;
                let value = self.name()?;
                self.keyword("then")?;
                let then_p = self.process_term()?;
                self.keyword("else")?;
                let else_p = self.process_term()?;
                Ok(Process::cond(scrutinee, value, then_p, else_p))
            }
            Some(Tok::Ident(_)) => {
                let subject = self.name()?;
                match self.peek() {
                    Some(Tok::Bang) => {
                        self.pos += 1;
                        self.expect(Tok::Lt)?;
                        let object = self.name()?;
                        self.expect(Tok::Gt)?;
                        self.expect(Tok::Dot)?;
                        Ok(Process::output(subject, object, self.process_term()?))
                    }
                    Some(Tok::LParen) => {
                        self.pos += 1;
                        let binder = self.ident()?;
                        self.expect(Tok::Colon)?;
                        let ty = self.privtype()?;
                        self.expect(Tok::RParen)?;
                        self.expect(Tok::Dot)?;
                        Ok(Process::input(subject, binder, ty, self.process_term()?))
                    }
                    _ if subject.index == 0 => Ok(Process::Var { id: subject.base }),
                    _ => self.err("a process variable cannot carry an index"),
                }
            }
            Some(t) => {
                let t = t.clone();
                self.err(format!("expected a process, found {t}"))
            }
            None => self.err("expected a process, found end of input"),
        }
    }

    fn system_expr(&mut self) -> Result<System, SyntaxError> {
        let mut ops = vec![self.system_term()?];
        while self.peek() == Some(&Tok::PipePipe) {
            self.pos += 1;
            ops.push(self.system_term()?);
        }
        Ok(System::par_all(ops))
    }

    fn system_term(&mut self) -> Result<System, SyntaxError> {
        match self.peek() {
            Some(Tok::Number(0)) => {
                self.pos += 1;
                Ok(System::Empty)
            }
            Some(Tok::LParen) => {
                if self.peek2() == Some(&Tok::Ident("new".to_string())) {
                    self.pos += 2;
                    let base = self.ident()?;
                    self.expect(Tok::Colon)?;
                    let ty = self.privtype()?;
                    self.expect(Tok::RParen)?;
                    Ok(System::new_name(base, ty, self.system_term()?))
                } else if self.peek2() == Some(&Tok::Ident("group".to_string())) {
                    self.pos += 2;
                    let role = self.group()?;
                    self.expect(Tok::RParen)?;
                    Ok(System::group_bind(role, self.system_term()?))
                } else {
                    self.pos += 1;
                    let inner = self.system_expr()?;
                    self.expect(Tok::RParen)?;
                    Ok(inner)
                }
            }
            Some(Tok::LBracket) => {
                self.pos += 1;
                let group = self.group()?;
                self.expect(Tok::Comma)?;
                let purpose = self.ident()?;
                self.expect(Tok::RBracket)?;
                self.expect(Tok::LBrace)?;
                let body = self.process_expr()?;
                self.expect(Tok::RBrace)?;
                Ok(System::lift(group, purpose, body))
            }
            Some(t) => {
                let t = t.clone();
                self.err(format!("expected a system, found {t}"))
            }
            None => self.err("expected a system, found end of input"),
        }
    }

    fn finish(&self) -> Result<(), SyntaxError> {
        if self.pos == self.toks.len() {
            Ok(())
        } else {
            self.err("trailing input after term")
        }
    }
}

/// Parses a standalone type: basic, `id{v1,v2}` or `G[T]`.
pub fn parse_type(text: &str) -> Result<PrivType, SyntaxError> {
    let mut p = Parser::new(text)?;
    let ty = p.privtype()?;
    p.finish()?;
    Ok(ty)
}

pub fn parse_process(text: &str) -> Result<Process, SyntaxError> {
    let mut p = Parser::new(text)?;
    let term = p.process_expr()?;
    p.finish()?;
    Ok(term)
}

pub fn parse_system(text: &str) -> Result<System, SyntaxError> {
    let mut p = Parser::new(text)?;
    let term = p.system_expr()?;
    p.finish()?;
    Ok(term)
}

/// Parses text at either level: process syntax is tried first, then
/// system syntax. `0` parses as the empty process.
pub fn parse_term(text: &str) -> Result<Term, SyntaxError> {
    match parse_process(text) {
        Ok(p) => Ok(Term::Process(p)),
        Err(perr) => match parse_system(text) {
            Ok(s) => Ok(Term::System(s)),
            Err(serr) => Err(if serr.pos > perr.pos { serr } else { perr }),
        },
    }
}
