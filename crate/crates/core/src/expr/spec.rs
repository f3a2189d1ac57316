//! Line-oriented congruence specs.
//!
//! ```text
//! # n = 1 (mod 3) branch
//! id = MY_CHECK
//! for n in 1..13 step 3
//! let m = (n-1)/3
//! assume n mod 3 = 1
//! sample a, b
//! lhs = sum(k, 0, m, qint(6*k+1) * poch(q; q^3; k)^6 / poch(q^3; q^3; k)^6 * q^(3*k))
//! rhs = qint(n) * poch(q^2; q^3; m)^3 / poch(q^3; q^3; m)^3
//! modulus = qint(n)
//! ```
//!
//! `let` and `for` lines bind names for the lines after them, in order.
//! `sample` names are generic rational parameters drawn by the caller.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_integer::Integer;

use super::eval::{eval_int, eval_scalar};
use super::lex::Tok;
use super::parse::Parser;
use super::{Bindings, Expr, ExprError};
use crate::arith::BigRat;

/// Upper bound on the number of parameter assignments a spec may expand to.
const MAX_INSTANCES: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Binder {
    Let { name: String, value: Expr },
    For { var: String, lo: Expr, hi: Expr, step: Expr },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl Relation {
    fn holds(self, x: &BigRat, y: &BigRat) -> bool {
        match self {
            Relation::Eq => x == y,
            Relation::Ne => x != y,
            Relation::Lt => x < y,
            Relation::Le => x <= y,
            Relation::Gt => x > y,
            Relation::Ge => x >= y,
        }
    }
}

/// `lhs [mod m] REL rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assumption {
    pub lhs: Expr,
    pub modulus: Option<Expr>,
    pub rel: Relation,
    pub rhs: Expr,
    pub line: usize,
    pub text: String,
}

impl Assumption {
    pub fn holds(&self, b: &Bindings) -> Result<bool, ExprError> {
        match &self.modulus {
            Some(m) => {
                let x = eval_int(&self.lhs, b)?;
                let m = eval_int(m, b)?;
                if m == 0 {
                    return Err(ExprError::DivisionByZero(self.text.clone()));
                }
                let y = eval_int(&self.rhs, b)?;
                let (x, y) = (x.mod_floor(&m), y.mod_floor(&m));
                Ok(self.rel.holds(&BigRat::from_integer(x.into()), &BigRat::from_integer(y.into())))
            }
            None => Ok(self.rel.holds(&eval_scalar(&self.lhs, b)?, &eval_scalar(&self.rhs, b)?)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CongruenceSpec {
    pub id: String,
    pub binders: Vec<Binder>,
    pub assumptions: Vec<Assumption>,
    pub sample: Vec<String>,
    pub lhs: Expr,
    pub rhs: Expr,
    pub modulus: Expr,
}

/// One parameter assignment; `skipped` names the first assumption it fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecInstance {
    pub bindings: Bindings,
    pub skipped: Option<String>,
}

impl CongruenceSpec {
    /// Every assignment of the `for` variables, in loop order.
    pub fn instances(&self) -> Result<Vec<SpecInstance>, ExprError> {
        let mut out = Vec::new();
        self.expand(0, &mut Bindings::new(), &mut out)?;
        Ok(out)
    }

    fn expand(&self, i: usize, b: &mut Bindings, out: &mut Vec<SpecInstance>) -> Result<(), ExprError> {
        let Some(binder) = self.binders.get(i) else {
            let mut skipped = None;
            for a in &self.assumptions {
                if !a.holds(b)? {
                    skipped = Some(a.text.clone());
                    break;
                }
            }
            if out.len() == MAX_INSTANCES {
                return Err(ExprError::OutOfRange(alloc::format!("more than {MAX_INSTANCES} instances")));
            }
            out.push(SpecInstance { bindings: b.clone(), skipped });
            return Ok(());
        };
        match binder {
            Binder::Let { name, value } => {
                let v = eval_scalar(value, b)?;
                let mut inner = b.clone();
                inner.set(name, v);
                self.expand(i + 1, &mut inner, out)
            }
            Binder::For { var, lo, hi, step } => {
                let (lo, hi) = (eval_int(lo, b)?, eval_int(hi, b)?);
                let s = eval_int(step, b)?;
                if s <= 0 {
                    return Err(ExprError::OutOfRange(step.to_string()));
                }
                let mut v = lo;
                while v <= hi {
                    let mut inner = b.clone();
                    inner.set_int(var, v);
                    self.expand(i + 1, &mut inner, out)?;
                    v += s;
                }
                Ok(())
            }
        }
    }
}

fn unbound(defined: &BTreeSet<String>, exprs: &[&Expr], line: usize) -> Result<(), ExprError> {
    for e in exprs {
        if let Some(name) = e.free_symbols().into_iter().find(|s| !defined.contains(s)) {
            return Err(ExprError::UnboundSymbol { name, line: Some(line) });
        }
    }
    Ok(())
}

fn relation(p: &mut Parser) -> Result<Relation, ExprError> {
    let rel = match p.peek() {
        Tok::Eq => Relation::Eq,
        Tok::Ne => Relation::Ne,
        Tok::Lt => Relation::Lt,
        Tok::Le => Relation::Le,
        Tok::Gt => Relation::Gt,
        Tok::Ge => Relation::Ge,
        _ => return Err(p.error("a comparison")),
    };
    p.bump();
    Ok(rel)
}

fn fresh(p: &Parser, defined: &BTreeSet<String>, name: &str) -> Result<(), ExprError> {
    if defined.contains(name) {
        Err(p.error_before(&alloc::format!("a name not already bound (`{name}` is)")))
    } else {
        Ok(())
    }
}

/// Parse a `.qcs` spec file.
pub fn parse_spec(text: &str) -> Result<CongruenceSpec, ExprError> {
    let mut id = None;
    let mut binders = Vec::new();
    let mut assumptions = Vec::new();
    let mut sample: Vec<String> = Vec::new();
    let (mut lhs, mut rhs, mut modulus) = (None, None, None);
    let mut defined = BTreeSet::new();
    let mut pending = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let mut p = Parser::new(raw, line, 1)?;
        if *p.peek() == Tok::End {
            continue;
        }
        let Tok::Ident(head) = p.peek().clone() else {
            return Err(p.error("a declaration"));
        };
        p.bump();
        match head.as_str() {
            "id" => {
                p.expect(Tok::Eq, "`=`")?;
                id = Some(p.ident()?);
                p.finish()?;
            }
            "let" => {
                let name = p.ident()?;
                fresh(&p, &defined, &name)?;
                p.expect(Tok::Eq, "`=`")?;
                let value = p.expr()?;
                p.finish()?;
                unbound(&defined, &[&value], line)?;
                defined.insert(name.clone());
                binders.push(Binder::Let { name, value });
            }
            "for" => {
                let var = p.ident()?;
                fresh(&p, &defined, &var)?;
                if !p.at_keyword("in") {
                    return Err(p.error("`in`"));
                }
                p.bump();
                let lo = p.expr()?;
                p.expect(Tok::DotDot, "`..`")?;
                let hi = p.expr()?;
                let step = if p.at_keyword("step") {
                    p.bump();
                    p.expr()?
                } else {
                    Expr::int(1)
                };
                p.finish()?;
                unbound(&defined, &[&lo, &hi, &step], line)?;
                defined.insert(var.clone());
                binders.push(Binder::For { var, lo, hi, step });
            }
            "assume" => {
                let start = raw.find("assume").unwrap() + "assume".len();
                let lhs_e = p.expr()?;
                let modulus_e = if p.at_keyword("mod") {
                    p.bump();
                    Some(p.expr()?)
                } else {
                    None
                };
                let rel = relation(&mut p)?;
                let rhs_e = p.expr()?;
                p.finish()?;
                let mut exprs = alloc::vec![&lhs_e, &rhs_e];
                exprs.extend(modulus_e.as_ref());
                unbound(&defined, &exprs, line)?;
                assumptions.push(Assumption {
                    lhs: lhs_e,
                    modulus: modulus_e,
                    rel,
                    rhs: rhs_e,
                    line,
                    text: raw[start..].split('#').next().unwrap_or("").trim().to_string(),
                });
            }
            "sample" => {
                loop {
                    let name = p.ident()?;
                    if !matches!(name.as_str(), "a" | "b" | "c") {
                        return Err(p.error_before("one of `a`, `b`, `c`"));
                    }
                    fresh(&p, &defined, &name)?;
                    if sample.contains(&name) {
                        return Err(p.error_before("each sampled name once"));
                    }
                    sample.push(name);
                    if !p.eat(&Tok::Comma) {
                        break;
                    }
                }
                p.finish()?;
            }
            "lhs" | "rhs" | "modulus" => {
                p.expect(Tok::Eq, "`=`")?;
                let e = p.expr()?;
                p.finish()?;
                let slot = match head.as_str() {
                    "lhs" => &mut lhs,
                    "rhs" => &mut rhs,
                    _ => &mut modulus,
                };
                if slot.is_some() {
                    return Err(ExprError::Syntax { line, col: 1, expected: alloc::format!("a single `{head}` line") });
                }
                pending.push((line, e.clone(), defined.clone()));
                *slot = Some(e);
            }
            _ => {
                return Err(ExprError::Syntax {
                    line,
                    col: 1,
                    expected: "one of id, let, for, assume, sample, lhs, rhs, modulus".into(),
                })
            }
        }
    }

    for (line, e, mut scope) in pending {
        scope.extend(sample.iter().cloned());
        unbound(&scope, &[&e], line)?;
    }
    let end = text.lines().count() + 1;
    let missing = |what: &str| ExprError::Syntax { line: end, col: 1, expected: alloc::format!("a `{what}` line") };
    Ok(CongruenceSpec {
        id: id.ok_or_else(|| missing("id"))?,
        binders,
        assumptions,
        sample,
        lhs: lhs.ok_or_else(|| missing("lhs"))?,
        rhs: rhs.ok_or_else(|| missing("rhs"))?,
        modulus: modulus.ok_or_else(|| missing("modulus"))?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const SPEC: &str = "\
# a comment line
id = SAMPLE_SPEC
for n in 1..7 step 3   # n = 1, 4, 7
let m = (n-1)/3
assume n mod 3 = 1
sample a, b
lhs = sum(k, 0, m, qint(6*k+1) * poch(q; q^3; k)^6 / poch(q^3; q^3; k)^6 * q^(3*k))
rhs = qint(n) * a / a
modulus = qint(n)
";

    #[test]
    fn parses_and_expands() {
        let s = parse_spec(SPEC).unwrap();
        assert_eq!(s.id, "SAMPLE_SPEC");
        assert_eq!(s.sample, ["a", "b"]);
        let inst = s.instances().unwrap();
        let ns: Vec<i64> = inst.iter().map(|i| i.bindings.get_int("n").unwrap()).collect();
        assert_eq!(ns, [1, 4, 7]);
        assert_eq!(inst[1].bindings.get_int("m"), Some(1));
        assert!(inst.iter().all(|i| i.skipped.is_none()));
    }

    #[test]
    fn failed_assumptions_mark_skips() {
        let s = parse_spec(&SPEC.replace("step 3", "step 1").replace("let m = (n-1)/3", "let m = 0")).unwrap();
        let inst = s.instances().unwrap();
        assert_eq!(inst.len(), 7);
        assert_eq!(inst[1].skipped.as_deref(), Some("n mod 3 = 1"));
    }

    #[test]
    fn scope_errors() {
        let e = parse_spec("id = X\nlhs = n\nrhs = 0\nmodulus = 1\n").unwrap_err();
        assert_eq!(e, ExprError::UnboundSymbol { name: "n".into(), line: Some(2) });
        let e = parse_spec("id = X\nlet m = n\nfor n in 1..2\n").unwrap_err();
        assert_eq!(e, ExprError::UnboundSymbol { name: "n".into(), line: Some(2) });
        assert!(matches!(parse_spec("id = X\nsample d\n"), Err(ExprError::Syntax { line: 2, .. })));
        assert!(matches!(parse_spec("id = X\nbogus = 1\n"), Err(ExprError::Syntax { line: 2, col: 1, .. })));
        assert!(matches!(parse_spec("id = X\nlhs = 1\nrhs = 1\n"), Err(ExprError::Syntax { line: 4, .. })));
    }
}
