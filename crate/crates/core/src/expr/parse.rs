//! Recursive descent over the token stream.
//!
//! ```text
//! expr     := term (('+' | '-') term)*
//! term     := unary (('*' | '/') unary)*
//! unary    := '-' unary | power
//! power    := atom ('^' exponent)?
//! exponent := int | ident | '-' exponent | '(' expr ')'
//! atom     := int | 'q' ('^' exponent)? | 'qint' '(' expr ')' | 'phi' '(' expr ')'
//!           | 'poch' '(' expr ';' 'q' ('^' exponent)? ';' expr ')'
//!           | 'sum' '(' ident ',' expr ',' expr ',' expr ')'
//!           | ident | '(' expr ')'
//! ```

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;

use super::lex::{tokenize, Tok, Token};
use super::{Expr, ExprError, KEYWORDS};
use crate::arith::BigRat;

pub(crate) struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    pub(crate) fn new(src: &str, line: usize, first_col: usize) -> Result<Parser, ExprError> {
        Ok(Parser { toks: tokenize(src, line, first_col)?, pos: 0 })
    }

    pub(crate) fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    pub(crate) fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    pub(crate) fn error(&self, expected: &str) -> ExprError {
        let t = &self.toks[self.pos];
        ExprError::Syntax {
            line: t.line,
            col: t.col,
            expected: alloc::format!("{expected}, found {}", t.tok.describe()),
        }
    }

    /// Like [`Parser::error`] but pointing at the token just consumed.
    pub(crate) fn error_before(&self, expected: &str) -> ExprError {
        let t = &self.toks[self.pos.saturating_sub(1)];
        ExprError::Syntax { line: t.line, col: t.col, expected: expected.into() }
    }

    pub(crate) fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    pub(crate) fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ExprError> {
        if self.eat(&tok) {
            Ok(())
        } else {
            Err(self.error(what))
        }
    }

    pub(crate) fn at_keyword(&self, word: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == word)
    }

    pub(crate) fn ident(&mut self) -> Result<String, ExprError> {
        match self.peek() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                let s = s.clone();
                self.bump();
                Ok(s)
            }
            _ => Err(self.error("an identifier")),
        }
    }

    pub(crate) fn finish(&self) -> Result<(), ExprError> {
        if *self.peek() == Tok::End {
            Ok(())
        } else {
            Err(self.error("an operator or end of input"))
        }
    }

    pub(crate) fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(&Tok::Plus) {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(&Tok::Minus) {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat(&Tok::Star) {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat(&Tok::Slash) {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        if self.eat(&Tok::Minus) {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        let base = self.atom()?;
        if self.eat(&Tok::Caret) {
            return Ok(Expr::Pow(Box::new(base), Box::new(self.exponent()?)));
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<Expr, ExprError> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(Expr::Rational(BigRat::from_integer(n)))
            }
            Tok::Minus => {
                self.bump();
                Ok(Expr::Neg(Box::new(self.exponent()?)))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Tok::Ident(_) => Ok(Expr::Symbol(self.ident()?)),
            _ => Err(self.error("an exponent")),
        }
    }

    /// `q` or `q^e`; returns the exponent.
    fn q_power(&mut self) -> Result<Expr, ExprError> {
        if !self.at_keyword("q") {
            return Err(self.error("`q`"));
        }
        self.bump();
        if self.eat(&Tok::Caret) {
            self.exponent()
        } else {
            Ok(Expr::int(1))
        }
    }

    fn call_arg(&mut self) -> Result<Expr, ExprError> {
        self.expect(Tok::LParen, "`(`")?;
        let e = self.expr()?;
        self.expect(Tok::RParen, "`)`")?;
        Ok(e)
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(Expr::Rational(BigRat::from_integer(n)))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Tok::Ident(name) => match name.as_str() {
                "q" => Ok(Expr::QPow(Box::new(self.q_power()?))),
                "qint" => {
                    self.bump();
                    Ok(Expr::QInt(Box::new(self.call_arg()?)))
                }
                "phi" => {
                    self.bump();
                    Ok(Expr::Phi(Box::new(self.call_arg()?)))
                }
                "poch" => {
                    self.bump();
                    self.expect(Tok::LParen, "`(`")?;
                    let arg = self.expr()?;
                    self.expect(Tok::Semi, "`;`")?;
                    let step = self.q_power()?;
                    self.expect(Tok::Semi, "`;`")?;
                    let len = self.expr()?;
                    self.expect(Tok::RParen, "`)`")?;
                    Ok(Expr::Poch { arg: Box::new(arg), step: Box::new(step), len: Box::new(len) })
                }
                "sum" => {
                    self.bump();
                    self.expect(Tok::LParen, "`(`")?;
                    let index = self.ident()?;
                    self.expect(Tok::Comma, "`,`")?;
                    let lo = self.expr()?;
                    self.expect(Tok::Comma, "`,`")?;
                    let hi = self.expr()?;
                    self.expect(Tok::Comma, "`,`")?;
                    let body = self.expr()?;
                    self.expect(Tok::RParen, "`)`")?;
                    Ok(Expr::Sum { index, lo: Box::new(lo), hi: Box::new(hi), body: Box::new(body) })
                }
                _ => Ok(Expr::Symbol(self.ident()?)),
            },
            _ => Err(self.error("an expression")),
        }
    }
}

/// Parse a complete expression.
pub fn parse_expr(src: &str) -> Result<Expr, ExprError> {
    let mut p = Parser::new(src, 1, 1)?;
    let e = p.expr()?;
    p.finish()?;
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence_and_associativity() {
        let e = parse_expr("1 - 2 - 3").unwrap();
        assert_eq!(
            e,
            Expr::Sub(
                Box::new(Expr::Sub(Box::new(Expr::int(1)), Box::new(Expr::int(2)))),
                Box::new(Expr::int(3))
            )
        );
        let e = parse_expr("-q^2").unwrap();
        assert_eq!(e, Expr::Neg(Box::new(Expr::QPow(Box::new(Expr::int(2))))));
        let e = parse_expr("a*b^2").unwrap();
        assert!(matches!(e, Expr::Mul(_, ref y) if matches!(**y, Expr::Pow(..))));
    }

    #[test]
    fn errors_carry_positions() {
        match parse_expr("qint(3") {
            Err(ExprError::Syntax { line: 1, col: 7, expected }) => assert!(expected.starts_with("`)`")),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_expr("poch(q; 3; 1)"), Err(ExprError::Syntax { col: 9, .. })));
        assert!(matches!(parse_expr("1 2"), Err(ExprError::Syntax { col: 3, .. })));
        assert!(matches!(parse_expr("sum(q, 1, 2, q)"), Err(ExprError::Syntax { col: 5, .. })));
    }
}
