//! Expression trees for closed forms, a small text syntax for them, and the
//! `.qcs` congruence spec format built on top.
//!
//! ```text
//! poch(q^2; q^3; (n-1)/3)^3 / poch(q^3; q^3; (n-1)/3)^3
//! sum(j, 1, (n-1)/2, (-1)^(j+1) * q^(2*j-n) / qint(2*j)^2)
//! ```

mod eval;
mod lex;
mod parse;
mod spec;

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use core::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::BigRat;
use crate::qseries::QSeriesError;

pub use eval::{eval_expr, eval_factored, eval_int, eval_scalar};
pub use parse::parse_expr;
pub use spec::{parse_spec, Assumption, Binder, CongruenceSpec, Relation, SpecInstance};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExprError {
    #[error("syntax error at {line}:{col}: expected {expected}")]
    Syntax { line: usize, col: usize, expected: String },
    #[error("unbound symbol `{name}`{}", line.map(|l| alloc::format!(" on line {l}")).unwrap_or_default())]
    UnboundSymbol { name: String, line: Option<usize> },
    #[error("`{0}` must be an integer")]
    NonIntegerBound(String),
    #[error("division by zero in `{0}`")]
    DivisionByZero(String),
    #[error("Pochhammer argument `{0}` is not of the form c*q^e")]
    NotMonomial(String),
    #[error("`{0}` does not reduce to a constant")]
    NotScalar(String),
    #[error("integer `{0}` is out of range")]
    OutOfRange(String),
    #[error(transparent)]
    QSeries(#[from] QSeriesError),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Rational(BigRat),
    /// `q^e`.
    QPow(Box<Expr>),
    /// The q-integer `[e]`.
    QInt(Box<Expr>),
    /// The cyclotomic polynomial `Phi_e(q)`.
    Phi(Box<Expr>),
    /// `(arg; q^step)_len`.
    Poch { arg: Box<Expr>, step: Box<Expr>, len: Box<Expr> },
    /// `sum_{index = lo}^{hi} body`; empty when `hi < lo`.
    Sum { index: String, lo: Box<Expr>, hi: Box<Expr>, body: Box<Expr> },
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    /// Integer power; the exponent is an integer expression.
    Pow(Box<Expr>, Box<Expr>),
    Symbol(String),
}

pub const KEYWORDS: [&str; 5] = ["q", "qint", "phi", "poch", "sum"];

impl Expr {
    pub fn int(n: i64) -> Expr {
        Expr::Rational(BigRat::from_integer(n.into()))
    }

    pub fn sym(name: &str) -> Expr {
        Expr::Symbol(name.to_string())
    }

    /// Symbols not bound by an enclosing `sum`.
    pub fn free_symbols(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut alloc::vec::Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut alloc::vec::Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Expr::Rational(_) => {}
            Expr::Symbol(s) => {
                if !bound.contains(s) {
                    out.insert(s.clone());
                }
            }
            Expr::QPow(e) | Expr::QInt(e) | Expr::Phi(e) | Expr::Neg(e) => e.collect_free(bound, out),
            Expr::Poch { arg, step, len } => {
                arg.collect_free(bound, out);
                step.collect_free(bound, out);
                len.collect_free(bound, out);
            }
            Expr::Sum { index, lo, hi, body } => {
                lo.collect_free(bound, out);
                hi.collect_free(bound, out);
                bound.push(index.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
            Expr::Add(x, y) | Expr::Sub(x, y) | Expr::Mul(x, y) | Expr::Div(x, y) | Expr::Pow(x, y) => {
                x.collect_free(bound, out);
                y.collect_free(bound, out);
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(_) => 3,
            Expr::Pow(..) => 4,
            Expr::Rational(r) if !r.is_integer() || r.is_negative() => 0,
            _ => 5,
        }
    }
}

/// Values for the free symbols of an expression.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Bindings {
    values: BTreeMap<String, BigRat>,
}

impl Bindings {
    pub fn new() -> Bindings {
        Bindings::default()
    }

    pub fn set(&mut self, name: &str, value: BigRat) -> &mut Bindings {
        self.values.insert(name.to_string(), value);
        self
    }

    pub fn set_int(&mut self, name: &str, value: i64) -> &mut Bindings {
        self.set(name, BigRat::from_integer(value.into()))
    }

    pub fn with(mut self, name: &str, value: BigRat) -> Bindings {
        self.set(name, value);
        self
    }

    pub fn with_int(mut self, name: &str, value: i64) -> Bindings {
        self.set_int(name, value);
        self
    }

    pub fn get(&self, name: &str) -> Option<&BigRat> {
        self.values.get(name)
    }

    pub fn get_int(&self, name: &str) -> Option<i64> {
        self.values.get(name).filter(|v| v.is_integer()).and_then(|v| v.to_integer().to_i64())
    }

    pub fn contains(&self, name: &str) -> bool {
        self.values.contains_key(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &BigRat)> {
        self.values.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn extend(&mut self, other: &Bindings) {
        for (k, v) in &other.values {
            self.values.insert(k.clone(), v.clone());
        }
    }
}

struct Child<'a>(&'a Expr, u8);

impl fmt::Display for Child<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.precedence() < self.1 {
            write!(f, "({})", self.0)
        } else {
            write!(f, "{}", self.0)
        }
    }
}

/// Exponents print bare only when they are a literal or a symbol.
struct Exponent<'a>(&'a Expr);

impl fmt::Display for Exponent<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Expr::Rational(r) if r.is_integer() && !r.is_negative() => write!(f, "{r}"),
            Expr::Symbol(s) => f.write_str(s),
            e => write!(f, "({e})"),
        }
    }
}

fn is_one_literal(e: &Expr) -> bool {
    matches!(e, Expr::Rational(r) if r.is_one())
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Rational(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Expr::Symbol(s) => f.write_str(s),
            Expr::QPow(e) if is_one_literal(e) => f.write_str("q"),
            Expr::QPow(e) => write!(f, "q^{}", Exponent(e)),
            Expr::QInt(e) => write!(f, "qint({e})"),
            Expr::Phi(e) => write!(f, "phi({e})"),
            Expr::Poch { arg, step, len } => {
                if is_one_literal(step) {
                    write!(f, "poch({arg}; q; {len})")
                } else {
                    write!(f, "poch({arg}; q^{}; {len})", Exponent(step))
                }
            }
            Expr::Sum { index, lo, hi, body } => write!(f, "sum({index}, {lo}, {hi}, {body})"),
            Expr::Neg(e) => write!(f, "-{}", Child(e, 3)),
            Expr::Add(x, y) => write!(f, "{} + {}", Child(x, 1), Child(y, 2)),
            Expr::Sub(x, y) => write!(f, "{} - {}", Child(x, 1), Child(y, 2)),
            Expr::Mul(x, y) => write!(f, "{}*{}", Child(x, 2), Child(y, 3)),
            Expr::Div(x, y) => write!(f, "{}/{}", Child(x, 2), Child(y, 3)),
            Expr::Pow(x, e) => write!(f, "{}^{}", Child(x, 5), Exponent(e)),
        }
    }
}

fn check_i64(x: &BigRat, what: &Expr) -> Result<i64, ExprError> {
    if !x.is_integer() {
        return Err(ExprError::NonIntegerBound(what.to_string()));
    }
    x.to_integer().to_i64().ok_or_else(|| ExprError::OutOfRange(what.to_string()))
}

/// Exact integer quotient, used by callers that build bounds by hand.
pub fn exact_quotient(a: i64, b: i64) -> Option<i64> {
    if b == 0 {
        return None;
    }
    let (q, r) = a.div_rem(&b);
    (r.is_zero()).then_some(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};
    use crate::poly::{q_integer, QPoly, QRat};

    #[test]
    fn examples_from_the_format_description() {
        assert_eq!(parse_expr("qint(3)").unwrap(), Expr::QInt(Box::new(Expr::int(3))));
        let b = Bindings::new().with_int("n", 6);
        assert_eq!(
            eval_expr(&parse_expr("qint(n)").unwrap(), &b).unwrap(),
            QRat::from_poly(QPoly::from_ints(&[1, 1, 1, 1, 1, 1]))
        );
        let empty = parse_expr("sum(j, 3, 2, q^j)").unwrap();
        assert!(eval_expr(&empty, &Bindings::new()).unwrap().is_zero());
    }

    #[test]
    fn ratio_and_sum_shapes() {
        let e = parse_expr("poch(q^2; q^3; (n-1)/3)^3 / poch(q^3; q^3; (n-1)/3)^3").unwrap();
        assert!(matches!(e, Expr::Div(..)));
        let s = parse_expr("sum(j, 1, (n-1)/2, (-1)^(j+1) * q^(2*j-n) / qint(2*j)^2)").unwrap();
        match &s {
            Expr::Sum { index, .. } => assert_eq!(index, "j"),
            _ => panic!("expected a sum"),
        }
        assert_eq!(s.free_symbols().into_iter().collect::<alloc::vec::Vec<_>>(), ["n"]);
        // n = 5: 1/[2]^2 q^-3 - 1/[4]^2 q^-1
        let v = eval_expr(&s, &Bindings::new().with_int("n", 5)).unwrap();
        let two = q_integer(2);
        let four = q_integer(4);
        let q = QRat::from_poly(QPoly::q());
        let expect = &(&q.pow(-3).unwrap() / &(&two * &two)) - &(&q.pow(-1).unwrap() / &(&four * &four));
        assert_eq!(v, expect);
    }

    #[test]
    fn thm_b_right_side_at_four() {
        let rhs = parse_expr(
            "qint(n) * poch(q^2; q^3; (n-1)/3)^3 / poch(q^3; q^3; (n-1)/3)^3 \
             * (1 + qint(n)^2 * (2 - q^n) * sum(j, 1, (n-1)/3, q^(3*j-1)/qint(3*j-1)^2 - q^(3*j)/qint(3*j)^2))",
        )
        .unwrap();
        let v = eval_expr(&rhs, &Bindings::new().with_int("n", 4)).unwrap();
        // [4] (1-q^2)^3/(1-q^3)^3 (1 + [4]^2 (2-q^4)(q^2/[2]^2 - q^3/[3]^2))
        let p = |c: &[i64]| QRat::from_poly(QPoly::from_ints(c));
        let four = q_integer(4);
        let ratio = (&p(&[1, 0, -1]) / &p(&[1, 0, 0, -1])).pow(3).unwrap();
        let inner = &(&p(&[0, 0, 1]) / &q_integer(2).pow(2).unwrap()) - &(&p(&[0, 0, 0, 1]) / &q_integer(3).pow(2).unwrap());
        let brace = &QRat::one() + &(&(&four * &four) * &(&p(&[2, 0, 0, 0, -1]) * &inner));
        assert_eq!(v, &(&four * &ratio) * &brace);
    }

    #[test]
    fn fractional_bounds_are_errors() {
        let e = parse_expr("poch(q; q^3; (n-1)/3)").unwrap();
        assert!(matches!(
            eval_expr(&e, &Bindings::new().with_int("n", 5)),
            Err(ExprError::NonIntegerBound(_))
        ));
        assert!(matches!(
            eval_expr(&e, &Bindings::new()),
            Err(ExprError::UnboundSymbol { .. })
        ));
    }

    #[test]
    fn parameters_and_division_by_zero() {
        let omega = parse_expr("qint(n) * (-a*q^(-n)) * (1 - b*q^n) * (b - q^n) / ((a - b) * (1 - a*b))").unwrap();
        let ok = Bindings::new().with_int("n", 2).with("a", rat(2, 3)).with("b", int(5));
        assert!(eval_expr(&omega, &ok).is_ok());
        let bad = Bindings::new().with_int("n", 2).with("a", int(5)).with("b", int(5));
        assert!(matches!(eval_expr(&omega, &bad), Err(ExprError::DivisionByZero(_))));
    }

    #[test]
    fn printing_round_trips() {
        for s in [
            "qint(3)",
            "-q^2 + 3*q - 1/2",
            "(1 - q)^3/(1 + q)",
            "poch(b*q^2; q^4; (n-1)/4)*poch(q^2/b; q; 2)",
            "sum(j, 1, k, q^(d*j)/qint(d*j)^2 + q^(d*j-d+r)/qint(d*j-d+r)^2)",
            "(c*q^r)^((r-n)/d)",
            "--a - -b",
            "2^(-1)*phi(n)^4",
            "a - (b - c) - d/(e/f)",
        ] {
            let e = parse_expr(s).unwrap();
            let printed = e.to_string();
            assert_eq!(parse_expr(&printed).unwrap(), e, "{s} -> {printed}");
        }
    }
}
