//! Recursive-descent parser for the function language.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := '-' factor | atom ('^' integer)?
//! atom   := 'x' | 'g' ('^' integer)? | integer
//!         | 'Tr' '[' integer ']' '(' expr ')'
//!         | 'L' '{' elemlist (';' integer)? '}' '(' expr ')'
//!         | '(' expr ')' | parameter
//! ```
//!
//! A leading `-` on a factor is accepted in addition to binary subtraction.

use super::ast::FuncExpr;
use crate::error::{Error, Result};
use crate::gfpn::{Elem, FieldCtx};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Sym(char),
    End,
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
}

impl Lexer {
    fn new(src: &str) -> Result<Lexer> {
        let chars: Vec<(usize, char)> = src.char_indices().collect();
        let mut toks = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            let (pos, c) = chars[i];
            if c.is_whitespace() {
                i += 1;
            } else if c.is_ascii_digit() {
                let mut s = String::new();
                while i < chars.len() && chars[i].1.is_ascii_digit() {
                    s.push(chars[i].1);
                    i += 1;
                }
                toks.push((Tok::Num(s), pos));
            } else if c.is_ascii_alphabetic() || c == '_' {
                let mut s = String::new();
                while i < chars.len() && (chars[i].1.is_ascii_alphanumeric() || chars[i].1 == '_') {
                    s.push(chars[i].1);
                    i += 1;
                }
                toks.push((Tok::Ident(s), pos));
            } else if "+-*^()[]{},;".contains(c) {
                toks.push((Tok::Sym(c), pos));
                i += 1;
            } else {
                return Err(Error::Syntax {
                    pos,
                    msg: format!("unexpected character `{c}`"),
                });
            }
        }
        toks.push((Tok::End, src.len()));
        Ok(Lexer { toks })
    }
}

/// Reduces `x^e` to an equivalent exponent in `[0, q - 1]`, keeping `0^0 = 1`
/// and `0^e = 0` for `e > 0`.
pub fn reduce_exponent(e: u64, order: u32) -> u64 {
    if e == 0 {
        0
    } else {
        (e - 1) % (order as u64 - 1) + 1
    }
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    at: usize,
    field: &'a FieldCtx,
    params: &'a [(&'a str, Elem)],
}

pub fn parse(source: &str, field: &FieldCtx) -> Result<FuncExpr> {
    parse_with_params(source, field, &[])
}

/// Parses with extra named constants (used by parameter scans). A constant
/// named `g` overrides the primitive element.
pub fn parse_with_params(source: &str, field: &FieldCtx, params: &[(&str, Elem)]) -> Result<FuncExpr> {
    let lexer = Lexer::new(source)?;
    let mut p = Parser {
        toks: lexer.toks,
        at: 0,
        field,
        params,
    };
    let e = p.expr()?;
    match p.peek() {
        Tok::End => Ok(e),
        t => Err(p.error(format!("unexpected {}", describe(t)))),
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Num(s) => format!("number `{s}`"),
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Sym(c) => format!("`{c}`"),
        Tok::End => "end of input".into(),
    }
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn error(&self, msg: String) -> Error {
        Error::Syntax { pos: self.pos(), msg }
    }

    fn eat(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{c}`, found {}", describe(self.peek()))))
        }
    }

    fn integer(&mut self) -> Result<u64> {
        match self.bump() {
            Tok::Num(s) => s.parse::<u64>().map_err(|_| Error::ExponentOutOfRange(s)),
            t => {
                self.at -= 1;
                Err(self.error(format!("expected an integer, found {}", describe(&t))))
            }
        }
    }

    fn expr(&mut self) -> Result<FuncExpr> {
        let mut acc = self.term()?;
        let mut run: Option<(char, Vec<FuncExpr>)> = None;
        loop {
            let op = match self.peek() {
                Tok::Sym(c @ ('+' | '-')) => *c,
                _ => break,
            };
            self.bump();
            let rhs = self.term()?;
            run = match run.take() {
                Some((cur, mut items)) if cur == op => {
                    items.push(rhs);
                    Some((cur, items))
                }
                Some((cur, items)) => {
                    acc = close_run(cur, items);
                    Some((op, vec![acc.clone(), rhs]))
                }
                None => Some((op, vec![acc.clone(), rhs])),
            };
        }
        if let Some((cur, items)) = run {
            acc = close_run(cur, items);
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<FuncExpr> {
        let mut items = vec![self.factor()?];
        while self.eat('*') {
            items.push(self.factor()?);
        }
        Ok(FuncExpr::mul(items))
    }

    fn factor(&mut self) -> Result<FuncExpr> {
        if self.eat('-') {
            return Ok(self.factor()?.neg());
        }
        let atom = self.atom()?;
        if self.eat('^') {
            let e = self.integer()?;
            return Ok(atom.pow(reduce_exponent(e, self.field.order())));
        }
        Ok(atom)
    }

    fn elem_literal(&mut self) -> Result<Elem> {
        if self.eat('-') {
            return Ok(self.field.neg(self.elem_literal()?));
        }
        let pos = self.pos();
        match self.bump() {
            Tok::Num(s) => {
                let k = s.parse::<u64>().map_err(|_| Error::ExponentOutOfRange(s.clone()))?;
                Ok(self.field.from_int((k % self.field.characteristic() as u64) as i64))
            }
            Tok::Ident(s) if s == "g" => {
                // a parameter named `g` replaces the field's primitive element
                let custom = self.params.iter().find(|(n, _)| *n == "g").map(|&(_, v)| v);
                let k = if self.eat('^') { self.integer()? } else { 1 };
                Ok(match custom {
                    Some(g) => self.field.pow_u(g, k),
                    None => self.field.gen_pow((k % (self.field.order() as u64 - 1).max(1)) as i64),
                })
            }
            Tok::Ident(s) => match self.params.iter().find(|(n, _)| *n == s) {
                Some(&(_, v)) => Ok(v),
                None => Err(Error::UnknownSymbol { pos, name: s }),
            },
            t => Err(Error::Syntax {
                pos,
                msg: format!("expected an element literal, found {}", describe(&t)),
            }),
        }
    }

    fn check_divisor(&self, m: u64, pos: usize) -> Result<u32> {
        let n = self.field.degree();
        if m == 0 || m > n as u64 || !(n as u64).is_multiple_of(m) {
            return Err(Error::Syntax {
                pos,
                msg: format!("{m} does not divide the extension degree {n}"),
            });
        }
        Ok(m as u32)
    }

    fn atom(&mut self) -> Result<FuncExpr> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Sym('(') => {
                self.bump();
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Num(_) | Tok::Ident(_) if self.is_elem_start() => Ok(FuncExpr::Const(self.elem_literal()?)),
            Tok::Ident(s) if s == "x" => {
                self.bump();
                Ok(FuncExpr::Var)
            }
            Tok::Ident(s) if s == "Tr" => {
                self.bump();
                self.expect('[')?;
                let mpos = self.pos();
                let m = self.integer()?;
                let m = self.check_divisor(m, mpos)?;
                self.expect(']')?;
                self.expect('(')?;
                let inner = self.expr()?;
                self.expect(')')?;
                Ok(inner.trace_to(m))
            }
            Tok::Ident(s) if s == "L" => {
                self.bump();
                self.expect('{')?;
                let mut coeffs = vec![self.elem_literal()?];
                while self.eat(',') {
                    coeffs.push(self.elem_literal()?);
                }
                let t = if self.eat(';') {
                    let tpos = self.pos();
                    let t = self.integer()?;
                    self.check_divisor(t, tpos)?
                } else {
                    1
                };
                if coeffs.len() as u32 > self.field.degree() / t {
                    return Err(Error::Syntax {
                        pos,
                        msg: format!("at most {} coefficients allowed for q = p^{t}", self.field.degree() / t),
                    });
                }
                self.expect('}')?;
                self.expect('(')?;
                let arg = self.expr()?;
                self.expect(')')?;
                Ok(FuncExpr::Linearized {
                    coeffs,
                    t,
                    arg: Box::new(arg),
                })
            }
            Tok::Ident(s) => Err(Error::UnknownSymbol { pos, name: s }),
            t => Err(self.error(format!("expected an operand, found {}", describe(&t)))),
        }
    }

    fn is_elem_start(&self) -> bool {
        match self.peek() {
            Tok::Num(_) => true,
            Tok::Ident(s) => s == "g" || self.params.iter().any(|(n, _)| n == s),
            _ => false,
        }
    }
}

fn close_run(op: char, items: Vec<FuncExpr>) -> FuncExpr {
    if op == '+' {
        FuncExpr::add(items)
    } else {
        FuncExpr::sub(items)
    }
}
