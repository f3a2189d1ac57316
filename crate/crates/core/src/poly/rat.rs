//! Reduced rational functions and the Chinese remainder theorem.

use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::{PolyError, QPoly};
use crate::arith::BigRat;

/// `num/den` with `gcd(num, den) = 1` and `den` monic; zero is `0/1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QRat {
    num: QPoly,
    den: QPoly,
}

impl QRat {
    pub fn zero() -> QRat {
        QRat::from_poly(QPoly::zero())
    }

    pub fn one() -> QRat {
        QRat::from_poly(QPoly::one())
    }

    pub fn from_poly(p: QPoly) -> QRat {
        QRat {
            num: p,
            den: QPoly::one(),
        }
    }

    pub fn from_int(c: i64) -> QRat {
        QRat::from_poly(QPoly::from_int(c))
    }

    pub fn constant(c: BigRat) -> QRat {
        QRat::from_poly(QPoly::constant(c))
    }

    /// Reduce `num/den` to lowest terms with a monic denominator.
    pub fn new(num: QPoly, den: QPoly) -> Result<QRat, PolyError> {
        if den.is_zero() {
            return Err(PolyError::DivisionByZeroPoly);
        }
        if num.is_zero() {
            return Ok(QRat::zero());
        }
        let (num, den) = if den.is_constant() {
            (num, den)
        } else {
            let g = num.gcd(&den);
            if g.is_one() {
                (num, den)
            } else {
                (num.exact_div(&g).unwrap(), den.exact_div(&g).unwrap())
            }
        };
        let lc = den.leading_coeff().recip();
        Ok(QRat {
            num: num.scale(&lc),
            den: den.scale(&lc),
        })
    }

    /// Caller guarantees the pair is already reduced with a monic denominator.
    pub(crate) fn from_parts_unchecked(num: QPoly, den: QPoly) -> QRat {
        debug_assert!(den.leading_coeff().is_one());
        QRat { num, den }
    }

    pub fn num(&self) -> &QPoly {
        &self.num
    }

    pub fn den(&self) -> &QPoly {
        &self.den
    }

    pub fn into_parts(self) -> (QPoly, QPoly) {
        (self.num, self.den)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn inv(&self) -> Result<QRat, PolyError> {
        if self.is_zero() {
            return Err(PolyError::DivisionByZeroPoly);
        }
        QRat::new(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, e: i64) -> Result<QRat, PolyError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let e = e.unsigned_abs() as u32;
        Ok(QRat {
            num: base.num.pow(e),
            den: base.den.pow(e),
        })
    }

    /// Value at `q = x`; `None` when the reduced denominator vanishes there.
    pub fn eval(&self, x: &BigRat) -> Option<BigRat> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(x) / d)
    }

    pub fn checked_div(&self, rhs: &QRat) -> Result<QRat, PolyError> {
        Ok(self * &rhs.inv()?)
    }

    /// The unique polynomial of degree below `deg m` congruent to `self`.
    pub fn residue_mod(&self, m: &QPoly) -> Result<QPoly, PolyError> {
        if m.is_zero() {
            return Err(PolyError::DivisionByZeroPoly);
        }
        let inv = self.den.inverse_mod(m).ok_or(PolyError::DenominatorNotUnit)?;
        (&self.num * &inv).rem(m)
    }
}

pub fn ratfun_normalize(num: &QPoly, den: &QPoly) -> Result<QRat, PolyError> {
    QRat::new(num.clone(), den.clone())
}

/// The `x` with `x = r1 (mod m1)`, `x = r2 (mod m2)` and `deg x < deg(m1 m2)`.
pub fn crt_combine(r1: &QRat, m1: &QPoly, r2: &QRat, m2: &QPoly) -> Result<QRat, PolyError> {
    let (g, u, v) = m1.gcd_ext(m2);
    if !g.is_one() {
        return Err(PolyError::ModuliNotCoprime);
    }
    let s1 = r1.residue_mod(m1)?;
    let s2 = r2.residue_mod(m2)?;
    let m = m1 * m2;
    let x = &(&(&s1 * &v) * m2) + &(&(&s2 * &u) * m1);
    Ok(QRat::from_poly(x.rem(&m)?))
}

impl Add for &QRat {
    type Output = QRat;
    fn add(self, rhs: &QRat) -> QRat {
        if self.den == rhs.den {
            return QRat::new(&self.num + &rhs.num, self.den.clone()).unwrap();
        }
        QRat::new(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
        .unwrap()
    }
}

impl Sub for &QRat {
    type Output = QRat;
    fn sub(self, rhs: &QRat) -> QRat {
        self + &(-rhs)
    }
}

impl Mul for &QRat {
    type Output = QRat;
    fn mul(self, rhs: &QRat) -> QRat {
        QRat::new(&self.num * &rhs.num, &self.den * &rhs.den).unwrap()
    }
}

/// Panics on division by zero; see [`QRat::checked_div`].
impl Div for &QRat {
    type Output = QRat;
    fn div(self, rhs: &QRat) -> QRat {
        self.checked_div(rhs).expect("division by zero rational function")
    }
}

impl Neg for &QRat {
    type Output = QRat;
    fn neg(self) -> QRat {
        QRat {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Neg for QRat {
    type Output = QRat;
    fn neg(self) -> QRat {
        -&self
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for QRat {
            type Output = QRat;
            fn $m(self, rhs: QRat) -> QRat { (&self).$m(&rhs) }
        }
        impl $tr<&QRat> for QRat {
            type Output = QRat;
            fn $m(self, rhs: &QRat) -> QRat { (&self).$m(rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl From<QPoly> for QRat {
    fn from(p: QPoly) -> QRat {
        QRat::from_poly(p)
    }
}

impl fmt::Debug for QRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QRat({self})")
    }
}

impl fmt::Display for QRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl Default for QRat {
    fn default() -> QRat {
        QRat::zero()
    }
}

impl Zero for QRat {
    fn zero() -> QRat {
        QRat::zero()
    }
    fn is_zero(&self) -> bool {
        QRat::is_zero(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};
    use crate::poly::cyclotomic;

    fn p(cs: &[i64]) -> QPoly {
        QPoly::from_ints(cs)
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(
            ratfun_normalize(&p(&[-1, 0, 1]), &p(&[-1, 1])).unwrap(),
            QRat::from_poly(p(&[1, 1]))
        );
        assert_eq!(ratfun_normalize(&p(&[0, 2]), &p(&[2])).unwrap(), QRat::from_poly(p(&[0, 1])));
        let r = ratfun_normalize(&p(&[1, -1]).pow(6), &p(&[1, 0, 0, -1]).pow(6)).unwrap();
        assert!(r.num().is_one());
        assert_eq!(r.den(), &p(&[1, 1, 1]).pow(6));
        assert_eq!(
            ratfun_normalize(&p(&[1]), &QPoly::zero()),
            Err(PolyError::DivisionByZeroPoly)
        );
    }

    #[test]
    fn denominator_is_monic() {
        let r = QRat::new(p(&[3]), p(&[0, 6])).unwrap();
        assert_eq!(r.num(), &QPoly::constant(rat(1, 2)));
        assert_eq!(r.den(), &QPoly::q());
    }

    #[test]
    fn crt_examples() {
        let x = crt_combine(&QRat::one(), &p(&[-1, 1]), &QRat::zero(), &p(&[1, 1])).unwrap();
        assert_eq!(x, QRat::from_poly(QPoly::from_rats(&[rat(1, 2), rat(1, 2)])));
        let c = QRat::constant(rat(7, 3));
        assert_eq!(crt_combine(&c, &cyclotomic(3), &c, &cyclotomic(5)).unwrap(), c);
        assert!(crt_combine(&QRat::zero(), &cyclotomic(3), &QRat::zero(), &cyclotomic(4))
            .unwrap()
            .is_zero());
        assert_eq!(
            crt_combine(&QRat::one(), &p(&[-1, 0, 1]), &QRat::zero(), &p(&[1, 1])),
            Err(PolyError::ModuliNotCoprime)
        );
        let bad = QRat::new(QPoly::one(), p(&[-1, 1])).unwrap();
        assert_eq!(
            crt_combine(&bad, &p(&[-1, 1]), &QRat::zero(), &p(&[1, 1])),
            Err(PolyError::DenominatorNotUnit)
        );
    }

    #[test]
    fn arithmetic_and_eval() {
        let a = QRat::new(p(&[1, 1]), p(&[-1, 1])).unwrap();
        let b = QRat::new(p(&[1]), p(&[1, 1])).unwrap();
        let s = &a + &b;
        assert_eq!(s.eval(&int(2)), Some(int(3) + rat(1, 3)));
        assert_eq!((&a / &a), QRat::one());
        assert_eq!(a.eval(&int(1)), None);
        let expect = QRat::new(p(&[-1, 1]).pow(2), p(&[1, 1]).pow(2)).unwrap();
        assert_eq!(a.pow(-2).unwrap(), expect);
    }
}
