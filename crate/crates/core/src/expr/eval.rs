use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_traits::Zero;

use super::{check_i64, Bindings, Expr, ExprError};
use crate::arith::{rat_pow, BigRat};
use crate::poly::factored::FactoredRat;
use crate::poly::QRat;
use crate::qseries::{pochhammer_factored, QMonomialArg};

/// Exponents beyond this are rejected rather than expanded.
const MAX_EXPONENT: i64 = 1 << 20;

struct Scope<'a> {
    bindings: &'a Bindings,
    locals: Vec<(String, BigRat)>,
}

impl Scope<'_> {
    fn lookup(&self, name: &str) -> Result<&BigRat, ExprError> {
        self.locals
            .iter()
            .rev()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v)
            .or_else(|| self.bindings.get(name))
            .ok_or_else(|| ExprError::UnboundSymbol { name: name.to_string(), line: None })
    }

    fn int(&mut self, e: &Expr) -> Result<i64, ExprError> {
        let v = self.scalar(e)?;
        check_i64(&v, e)
    }

    fn exponent(&mut self, e: &Expr) -> Result<i64, ExprError> {
        let k = self.int(e)?;
        if k.abs() > MAX_EXPONENT {
            return Err(ExprError::OutOfRange(e.to_string()));
        }
        Ok(k)
    }

    fn scalar(&mut self, e: &Expr) -> Result<BigRat, ExprError> {
        Ok(match e {
            Expr::Rational(r) => r.clone(),
            Expr::Symbol(s) => self.lookup(s)?.clone(),
            Expr::Neg(x) => -self.scalar(x)?,
            Expr::Add(x, y) => self.scalar(x)? + self.scalar(y)?,
            Expr::Sub(x, y) => self.scalar(x)? - self.scalar(y)?,
            Expr::Mul(x, y) => self.scalar(x)? * self.scalar(y)?,
            Expr::Div(x, y) => {
                let d = self.scalar(y)?;
                if d.is_zero() {
                    return Err(ExprError::DivisionByZero(e.to_string()));
                }
                self.scalar(x)? / d
            }
            Expr::Pow(x, k) => {
                let base = self.scalar(x)?;
                let k = self.exponent(k)?;
                if k < 0 && base.is_zero() {
                    return Err(ExprError::DivisionByZero(e.to_string()));
                }
                rat_pow(&base, k)
            }
            Expr::Sum { index, lo, hi, body } => {
                let (lo, hi) = (self.int(lo)?, self.int(hi)?);
                let mut acc = BigRat::zero();
                for k in lo..=hi {
                    self.locals.push((index.clone(), BigRat::from_integer(k.into())));
                    let v = self.scalar(body);
                    self.locals.pop();
                    acc += v?;
                }
                acc
            }
            _ => return Err(ExprError::NotScalar(e.to_string())),
        })
    }

    fn factored(&mut self, e: &Expr) -> Result<FactoredRat, ExprError> {
        Ok(match e {
            Expr::Rational(r) => FactoredRat::constant(r.clone()),
            Expr::Symbol(s) => FactoredRat::constant(self.lookup(s)?.clone()),
            Expr::QPow(k) => FactoredRat::monomial(BigRat::from_integer(1.into()), self.exponent(k)?),
            Expr::QInt(m) => FactoredRat::q_int(self.int(m)?),
            Expr::Phi(m) => {
                let m = self.int(m)?;
                if !(1..=MAX_EXPONENT).contains(&m) {
                    return Err(ExprError::OutOfRange(e.to_string()));
                }
                FactoredRat::cyclo(m as u64)
            }
            Expr::Poch { arg, step, len } => {
                let a = self.factored(arg)?;
                let step = self.int(step)?;
                let len = self.int(len)?;
                if a.is_zero() {
                    return Ok(FactoredRat::one());
                }
                let (c, k) = a.as_monomial().ok_or_else(|| ExprError::NotMonomial(arg.to_string()))?;
                pochhammer_factored(&QMonomialArg::new(c, k), step, len)?
            }
            Expr::Sum { index, lo, hi, body } => {
                let (lo, hi) = (self.int(lo)?, self.int(hi)?);
                let mut acc = FactoredRat::zero();
                for k in lo..=hi {
                    self.locals.push((index.clone(), BigRat::from_integer(k.into())));
                    let v = self.factored(body);
                    self.locals.pop();
                    acc = acc.add(&v?);
                    acc.reduce_atoms();
                }
                acc
            }
            Expr::Neg(x) => self.factored(x)?.neg(),
            Expr::Add(x, y) => {
                let mut v = self.factored(x)?.add(&self.factored(y)?);
                v.reduce_atoms();
                v
            }
            Expr::Sub(x, y) => {
                let mut v = self.factored(x)?.sub(&self.factored(y)?);
                v.reduce_atoms();
                v
            }
            Expr::Mul(x, y) => self.factored(x)?.mul(&self.factored(y)?),
            Expr::Div(x, y) => {
                let d = self.factored(y)?;
                self.factored(x)?.div(&d).map_err(|_| ExprError::DivisionByZero(e.to_string()))?
            }
            Expr::Pow(x, k) => {
                let k = self.exponent(k)?;
                self.factored(x)?.pow(k).map_err(|_| ExprError::DivisionByZero(e.to_string()))?
            }
        })
    }
}

/// Evaluate to a factored rational function of `q`.
pub fn eval_factored(e: &Expr, b: &Bindings) -> Result<FactoredRat, ExprError> {
    Scope { bindings: b, locals: Vec::new() }.factored(e)
}

/// Evaluate to a reduced rational function of `q`.
pub fn eval_expr(e: &Expr, b: &Bindings) -> Result<QRat, ExprError> {
    Ok(eval_factored(e, b)?.to_qrat())
}

/// Evaluate an expression that does not involve `q`.
pub fn eval_scalar(e: &Expr, b: &Bindings) -> Result<BigRat, ExprError> {
    Scope { bindings: b, locals: Vec::new() }.scalar(e)
}

/// Evaluate an integer expression; a fractional value is an error.
pub fn eval_int(e: &Expr, b: &Bindings) -> Result<i64, ExprError> {
    Scope { bindings: b, locals: Vec::new() }.int(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::expr::parse_expr;

    #[test]
    fn integer_contexts() {
        let b = Bindings::new().with_int("n", 7).with("a", rat(1, 2));
        assert_eq!(eval_int(&parse_expr("(2*n+1)/3 - 1").unwrap(), &b).unwrap(), 4);
        assert!(matches!(
            eval_int(&parse_expr("n/2").unwrap(), &b),
            Err(ExprError::NonIntegerBound(_))
        ));
        assert!(matches!(eval_int(&parse_expr("a").unwrap(), &b), Err(ExprError::NonIntegerBound(_))));
        assert_eq!(eval_scalar(&parse_expr("sum(j, 1, 3, 1/j^2)").unwrap(), &b).unwrap(), rat(49, 36));
        assert!(matches!(eval_scalar(&parse_expr("qint(2)").unwrap(), &b), Err(ExprError::NotScalar(_))));
    }

    #[test]
    fn pochhammer_arguments_must_be_monomials() {
        let b = Bindings::new().with("b", rat(5, 2));
        let ok = parse_expr("poch(q^2/b; q^4; 2)").unwrap();
        assert!(eval_expr(&ok, &b).is_ok());
        let bad = parse_expr("poch(1 + q; q; 2)").unwrap();
        assert!(matches!(eval_expr(&bad, &b), Err(ExprError::NotMonomial(_))));
        let neg = parse_expr("poch(q; q; -1)").unwrap();
        assert!(matches!(eval_expr(&neg, &b), Err(ExprError::QSeries(_))));
        assert!(eval_expr(&parse_expr("poch(q; q; 0)").unwrap(), &b).unwrap().is_one());
    }

    #[test]
    fn sum_indices_shadow_bindings() {
        let b = Bindings::new().with_int("j", 100);
        let v = eval_scalar(&parse_expr("sum(j, 1, 2, j) + j").unwrap(), &b).unwrap();
        assert_eq!(v, rat(103, 1));
    }
}
