//! Dense univariate polynomials and rational functions in `q` over the rationals.

mod cyclo;
pub mod factored;
mod ints;
mod rat;

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::BigRat;

pub use cyclo::{cyclotomic, divisors, q_integer, q_integer_poly};
pub(crate) use cyclo::cyclotomic_ref;
pub use rat::{crt_combine, ratfun_normalize, QRat};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("division by the zero polynomial")]
    DivisionByZeroPoly,
    #[error("moduli are not coprime")]
    ModuliNotCoprime,
    #[error("denominator shares a factor with the modulus")]
    DenominatorNotUnit,
}

/// A polynomial in `q` with rational coefficients.
///
/// Stored as integer coefficients over one positive common denominator, kept
/// in lowest terms, so structural equality is value equality.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QPoly {
    coeffs: Vec<BigInt>,
    den: BigInt,
}

impl QPoly {
    pub fn zero() -> QPoly {
        QPoly {
            coeffs: Vec::new(),
            den: BigInt::one(),
        }
    }

    pub fn one() -> QPoly {
        QPoly::from_int(1)
    }

    /// The variable `q`.
    pub fn q() -> QPoly {
        QPoly::monomial(BigRat::one(), 1)
    }

    pub fn from_int(c: i64) -> QPoly {
        QPoly::from_int_coeffs(vec![BigInt::from(c)])
    }

    pub fn constant(c: BigRat) -> QPoly {
        QPoly::monomial(c, 0)
    }

    pub fn monomial(c: BigRat, e: usize) -> QPoly {
        if c.is_zero() {
            return QPoly::zero();
        }
        let (n, d) = c.into_raw();
        let mut coeffs = vec![BigInt::zero(); e + 1];
        coeffs[e] = n;
        QPoly::from_parts(coeffs, d)
    }

    /// Coefficients listed from the constant term up.
    pub fn from_ints(cs: &[i64]) -> QPoly {
        QPoly::from_int_coeffs(cs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn from_int_coeffs(coeffs: Vec<BigInt>) -> QPoly {
        QPoly::from_parts(coeffs, BigInt::one())
    }

    pub fn from_rats(cs: &[BigRat]) -> QPoly {
        let den = cs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let coeffs = cs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        QPoly::from_parts(coeffs, den)
    }

    /// Build `coeffs / den` and normalize.
    pub fn from_parts(mut coeffs: Vec<BigInt>, mut den: BigInt) -> QPoly {
        assert!(!den.is_zero(), "zero denominator");
        ints::trim(&mut coeffs);
        if coeffs.is_empty() {
            return QPoly::zero();
        }
        if den.is_negative() {
            den = -den;
            for c in coeffs.iter_mut() {
                *c = -core::mem::take(c);
            }
        }
        if !den.is_one() {
            let mut g = den.clone();
            for c in &coeffs {
                if g.is_one() {
                    break;
                }
                g = g.gcd(c);
            }
            if !g.is_one() {
                for c in coeffs.iter_mut() {
                    *c /= &g;
                }
                den /= &g;
            }
        }
        QPoly { coeffs, den }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.den.is_one() && self.coeffs[0].is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Number of stored coefficients (degree + 1, or 0 for zero).
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, i: usize) -> BigRat {
        match self.coeffs.get(i) {
            Some(c) => BigRat::new(c.clone(), self.den.clone()),
            None => BigRat::zero(),
        }
    }

    pub fn coeffs(&self) -> Vec<BigRat> {
        (0..self.coeffs.len()).map(|i| self.coeff(i)).collect()
    }

    pub fn leading_coeff(&self) -> BigRat {
        match self.degree() {
            Some(d) => self.coeff(d),
            None => BigRat::zero(),
        }
    }

    /// Integer numerator coefficients and the common denominator.
    pub fn int_parts(&self) -> (&[BigInt], &BigInt) {
        (&self.coeffs, &self.den)
    }

    /// Number of nonzero coefficients.
    pub fn term_count(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    /// Smallest exponent with a nonzero coefficient.
    pub fn low_degree(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn eval(&self, x: &BigRat) -> BigRat {
        let mut acc = BigRat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRat::from_integer(c.clone());
        }
        acc / BigRat::from_integer(self.den.clone())
    }

    pub fn scale(&self, c: &BigRat) -> QPoly {
        if c.is_zero() {
            return QPoly::zero();
        }
        let coeffs = self.coeffs.iter().map(|x| x * c.numer()).collect();
        QPoly::from_parts(coeffs, &self.den * c.denom())
    }

    /// Multiply by `q^k`.
    pub fn shift(&self, k: usize) -> QPoly {
        if self.is_zero() || k == 0 {
            return self.clone();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        QPoly {
            coeffs,
            den: self.den.clone(),
        }
    }

    /// Divide by `q^k`; the low `k` coefficients must be zero.
    pub fn unshift(&self, k: usize) -> QPoly {
        if k == 0 || self.is_zero() {
            return self.clone();
        }
        assert!(self.coeffs[..k].iter().all(|c| c.is_zero()), "not divisible by q^{k}");
        QPoly {
            coeffs: self.coeffs[k..].to_vec(),
            den: self.den.clone(),
        }
    }

    pub fn pow(&self, e: u32) -> QPoly {
        let mut acc = QPoly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Rescale so the leading coefficient is 1; zero stays zero.
    pub fn monic(&self) -> QPoly {
        if self.is_zero() {
            return QPoly::zero();
        }
        let lc = self.coeffs.last().unwrap();
        QPoly::from_parts(self.coeffs.clone(), lc.clone())
    }

    /// Split into a rational content and a primitive integer polynomial with
    /// positive leading coefficient.
    pub fn primitive(&self) -> (BigRat, Vec<BigInt>) {
        if self.is_zero() {
            return (BigRat::zero(), Vec::new());
        }
        let mut g = ints::content(&self.coeffs);
        if self.coeffs.last().unwrap().is_negative() {
            g = -g;
        }
        let prim = self.coeffs.iter().map(|c| c / &g).collect();
        (BigRat::new(g, self.den.clone()), prim)
    }

    /// The primitive integer polynomial associated with `self`.
    pub fn primitive_part(&self) -> QPoly {
        QPoly::from_int_coeffs(self.primitive().1)
    }

    /// Euclidean division over the rationals.
    pub fn divrem(&self, g: &QPoly) -> Result<(QPoly, QPoly), PolyError> {
        if g.is_zero() {
            return Err(PolyError::DivisionByZeroPoly);
        }
        let (q, r, scale) = ints::divrem(&self.coeffs, &g.coeffs);
        // self = F/df, g = G/dg and F = G*q + r/scale (q already rational).
        let quot = q.scale(&BigRat::new(g.den.clone(), self.den.clone()));
        let rem = QPoly::from_parts(r, &self.den * scale);
        Ok((quot, rem))
    }

    pub fn rem(&self, g: &QPoly) -> Result<QPoly, PolyError> {
        Ok(self.divrem(g)?.1)
    }

    /// `self / g` when `g` divides `self` exactly.
    pub fn exact_div(&self, g: &QPoly) -> Option<QPoly> {
        if g.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(QPoly::zero());
        }
        let (cg, pg) = g.primitive();
        let q = ints::exact_div(&self.coeffs, &pg)?;
        // self/g = (F/df) / (cg*G) = (F/G) / (df*cg)
        let scale = (BigRat::from_integer(self.den.clone()) * cg).recip();
        Some(QPoly::from_int_coeffs(q).scale(&scale))
    }

    /// Like [`QPoly::exact_div`] with a divisor already split into primitive
    /// integer form; avoids recomputing the content in hot loops.
    pub(crate) fn exact_div_primitive(&self, prim: &[BigInt]) -> Option<QPoly> {
        let q = ints::exact_div(&self.coeffs, prim)?;
        Some(QPoly::from_parts(q, self.den.clone()))
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, g: &QPoly) -> QPoly {
        let (mut a, mut b) = (self.primitive_part(), g.primitive_part());
        if a.len() < b.len() {
            core::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r.primitive_part();
        }
        a.monic()
    }

    /// Extended Euclid: `(g, u, v)` with `u*self + v*other = g`, `g` monic.
    pub fn gcd_ext(&self, other: &QPoly) -> (QPoly, QPoly, QPoly) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (QPoly::one(), QPoly::zero());
        let (mut t0, mut t1) = (QPoly::zero(), QPoly::one());
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1).expect("nonzero divisor");
            let s = &s0 - &(&q * &s1);
            let t = &t0 - &(&q * &t1);
            r0 = core::mem::replace(&mut r1, r);
            s0 = core::mem::replace(&mut s1, s);
            t0 = core::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = r0.leading_coeff().recip();
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    /// Inverse of `self` modulo `m`, if it exists.
    pub fn inverse_mod(&self, m: &QPoly) -> Option<QPoly> {
        let (g, u, _) = self.gcd_ext(m);
        if !g.is_one() {
            return None;
        }
        Some(u.rem(m).expect("nonzero modulus"))
    }
}

pub fn poly_divrem(f: &QPoly, g: &QPoly) -> Result<(QPoly, QPoly), PolyError> {
    f.divrem(g)
}

pub fn poly_gcd_ext(f: &QPoly, g: &QPoly) -> (QPoly, QPoly, QPoly) {
    f.gcd_ext(g)
}

impl From<i64> for QPoly {
    fn from(c: i64) -> QPoly {
        QPoly::from_int(c)
    }
}

impl From<BigRat> for QPoly {
    fn from(c: BigRat) -> QPoly {
        QPoly::constant(c)
    }
}

fn add_polys(a: &QPoly, b: &QPoly, negate_b: bool) -> QPoly {
    if b.is_zero() {
        return a.clone();
    }
    if a.is_zero() {
        return if negate_b { -b } else { b.clone() };
    }
    let g = a.den.gcd(&b.den);
    let fa = &b.den / &g;
    let fb = &a.den / &g;
    let n = a.coeffs.len().max(b.coeffs.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let x = a.coeffs.get(i).map(|c| c * &fa).unwrap_or_default();
        let y = b.coeffs.get(i).map(|c| c * &fb).unwrap_or_default();
        out.push(if negate_b { x - y } else { x + y });
    }
    QPoly::from_parts(out, fa * &a.den)
}

impl Add for &QPoly {
    type Output = QPoly;
    fn add(self, rhs: &QPoly) -> QPoly {
        add_polys(self, rhs, false)
    }
}

impl Sub for &QPoly {
    type Output = QPoly;
    fn sub(self, rhs: &QPoly) -> QPoly {
        add_polys(self, rhs, true)
    }
}

impl Mul for &QPoly {
    type Output = QPoly;
    fn mul(self, rhs: &QPoly) -> QPoly {
        if self.is_zero() || rhs.is_zero() {
            return QPoly::zero();
        }
        QPoly::from_parts(ints::mul(&self.coeffs, &rhs.coeffs), &self.den * &rhs.den)
    }
}

impl Neg for &QPoly {
    type Output = QPoly;
    fn neg(self) -> QPoly {
        QPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for QPoly {
            type Output = QPoly;
            fn $m(self, rhs: QPoly) -> QPoly { (&self).$m(&rhs) }
        }
        impl $tr<&QPoly> for QPoly {
            type Output = QPoly;
            fn $m(self, rhs: &QPoly) -> QPoly { (&self).$m(rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for QPoly {
    type Output = QPoly;
    fn neg(self) -> QPoly {
        -&self
    }
}

impl fmt::Debug for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QPoly({self})")
    }
}

/// Descending powers, e.g. `q^2 - q + 1` or `2/3*q - 5`.
impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let c = BigRat::new(c.clone(), self.den.clone());
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            match (i, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (_, true) => {}
                (_, false) => write!(f, "{mag}*")?,
            }
            match i {
                0 => {}
                1 => f.write_str("q")?,
                _ => write!(f, "q^{i}")?,
            }
        }
        Ok(())
    }
}
