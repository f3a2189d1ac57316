//! Rational functions kept as products of known irreducible factors.
//!
//! Truncated q-hypergeometric sums have denominators that are products of
//! many small binomials `1 - c q^e`. Keeping those factors symbolic makes
//! multiplication and valuation at a cyclotomic factor cheap; the dense
//! expansion is only formed where addition forces it.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{cyclotomic_ref, divisors, PolyError, QPoly, QRat};
use crate::arith::{rat_pow, BigRat};

/// A monic factor of a rational function.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    /// The variable `q`.
    Q,
    /// The cyclotomic polynomial `Phi_d`.
    Cyclo(u64),
    /// `q^exp - root`, irreducible over the rationals.
    Binom { exp: u64, root: BigRat },
    /// A monic polynomial whose factorization is not tracked.
    Dense(QPoly),
}

impl Atom {
    pub fn poly(&self) -> QPoly {
        match self {
            Atom::Q => QPoly::q(),
            Atom::Cyclo(d) => cyclotomic_ref(*d).into_owned(),
            Atom::Binom { exp, root } => binomial_poly(*exp, root),
            Atom::Dense(p) => p.clone(),
        }
    }

    pub fn is_irreducible(&self) -> bool {
        !matches!(self, Atom::Dense(_))
    }

    pub fn degree(&self) -> usize {
        match self {
            Atom::Q => 1,
            Atom::Cyclo(d) => euler_phi(*d) as usize,
            Atom::Binom { exp, .. } => *exp as usize,
            Atom::Dense(p) => p.degree().unwrap_or(0),
        }
    }

    /// Multiplicity of this (irreducible) atom in a nonzero polynomial,
    /// stopping once `cap` is reached.
    pub fn multiplicity_in(&self, p: &QPoly, cap: u32) -> u32 {
        debug_assert!(!p.is_zero());
        if let Atom::Q = self {
            return (p.low_degree().unwrap_or(0) as u32).min(cap);
        }
        let prim = self.poly().primitive().1;
        let mut cur = p.clone();
        let mut v = 0;
        while v < cap {
            match cur.exact_div_primitive(&prim) {
                Some(next) => {
                    cur = next;
                    v += 1;
                }
                None => break,
            }
        }
        v
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Q => f.write_str("q"),
            Atom::Cyclo(d) => write!(f, "Phi({d})"),
            Atom::Binom { .. } | Atom::Dense(_) => write!(f, "({})", self.poly()),
        }
    }
}

pub fn euler_phi(mut n: u64) -> u64 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

fn binomial_poly(exp: u64, root: &BigRat) -> QPoly {
    let mut cs = alloc::vec![BigRat::zero(); exp as usize + 1];
    cs[0] = -root.clone();
    cs[exp as usize] = BigRat::one();
    QPoly::from_rats(&cs)
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn is_rational_power(x: &BigRat, k: u32) -> bool {
    if x.is_negative() {
        return k % 2 == 1 && is_rational_power(&-x, k);
    }
    let root_is_exact = |n: &BigInt| num_traits::pow(n.nth_root(k), k as usize) == *n;
    root_is_exact(x.numer()) && root_is_exact(x.denom())
}

/// Capelli's criterion for `q^e - w` over the rationals.
pub fn binomial_is_irreducible(e: u64, w: &BigRat) -> bool {
    if e == 0 || w.is_zero() {
        return e == 1;
    }
    for p in prime_factors(e) {
        if is_rational_power(w, p as u32) {
            return false;
        }
    }
    if e % 4 == 0 {
        let t = -w / BigRat::from_integer(BigInt::from(4));
        if t.is_positive() && is_rational_power(&t, 4) {
            return false;
        }
    }
    true
}

/// Factor `q^e - w` (`e >= 1`) into atoms.
pub fn binomial_atoms(e: u64, w: &BigRat) -> Vec<Atom> {
    assert!(e >= 1);
    if w.is_zero() {
        return alloc::vec![Atom::Q; e as usize];
    }
    if w.is_one() {
        return divisors(e).into_iter().map(Atom::Cyclo).collect();
    }
    if (-w).is_one() {
        return divisors(2 * e)
            .into_iter()
            .filter(|d| e % d != 0)
            .map(Atom::Cyclo)
            .collect();
    }
    if binomial_is_irreducible(e, w) {
        return alloc::vec![Atom::Binom { exp: e, root: w.clone() }];
    }
    alloc::vec![Atom::Dense(binomial_poly(e, w))]
}

type Atoms = BTreeMap<Atom, u32>;

fn add_atom(map: &mut Atoms, a: Atom, m: u32) {
    if m > 0 {
        *map.entry(a).or_insert(0) += m;
    }
}

fn expand(atoms: &Atoms) -> QPoly {
    let mut acc = QPoly::one();
    let mut q_power = 0usize;
    for (a, &m) in atoms {
        if let Atom::Q = a {
            q_power += m as usize;
            continue;
        }
        let p = a.poly();
        for _ in 0..m {
            acc = &acc * &p;
        }
    }
    acc.shift(q_power)
}

/// `scalar * num * prod(num_atoms) / prod(den_atoms)`, not necessarily reduced.
#[derive(Clone, Debug)]
pub struct FactoredRat {
    scalar: BigRat,
    num: QPoly,
    num_atoms: Atoms,
    den_atoms: Atoms,
}

impl FactoredRat {
    pub fn zero() -> FactoredRat {
        FactoredRat {
            scalar: BigRat::zero(),
            num: QPoly::one(),
            num_atoms: Atoms::new(),
            den_atoms: Atoms::new(),
        }
    }

    pub fn one() -> FactoredRat {
        FactoredRat::constant(BigRat::one())
    }

    pub fn constant(c: BigRat) -> FactoredRat {
        FactoredRat {
            scalar: c,
            ..FactoredRat::zero()
        }
    }

    pub fn from_int(c: i64) -> FactoredRat {
        FactoredRat::constant(BigRat::from_integer(BigInt::from(c)))
    }

    pub fn from_poly(p: QPoly) -> FactoredRat {
        let mut out = FactoredRat {
            scalar: BigRat::one(),
            num: p,
            num_atoms: Atoms::new(),
            den_atoms: Atoms::new(),
        };
        out.normalize();
        out
    }

    pub fn from_qrat(r: &QRat) -> FactoredRat {
        let num = FactoredRat::from_poly(r.num().clone());
        if r.den().is_one() {
            return num;
        }
        let mut den = Atoms::new();
        let d = FactoredRat::from_poly(r.den().clone());
        debug_assert!(d.den_atoms.is_empty());
        for (a, m) in d.num_atoms {
            add_atom(&mut den, a, m);
        }
        if !d.num.is_one() {
            add_atom(&mut den, Atom::Dense(d.num), 1);
        }
        let mut out = FactoredRat {
            scalar: num.scalar / d.scalar,
            num: num.num,
            num_atoms: num.num_atoms,
            den_atoms: den,
        };
        out.cancel_atoms();
        out
    }

    /// `num / prod(den)` for a dense numerator and denominator atoms.
    pub fn from_num_and_den_atoms(
        num: QPoly,
        den: impl IntoIterator<Item = (Atom, u32)>,
    ) -> FactoredRat {
        let mut out = FactoredRat::from_poly(num);
        if out.is_zero() {
            return out;
        }
        for (a, m) in den {
            add_atom(&mut out.den_atoms, a, m);
        }
        out.cancel_atoms();
        out
    }

    pub fn from_atoms(atoms: impl IntoIterator<Item = Atom>) -> FactoredRat {
        let mut out = FactoredRat::one();
        for a in atoms {
            add_atom(&mut out.num_atoms, a, 1);
        }
        out
    }

    /// `c q^e`.
    pub fn monomial(c: BigRat, e: i64) -> FactoredRat {
        let mut out = FactoredRat::constant(c);
        if out.is_zero() {
            return out;
        }
        if e > 0 {
            add_atom(&mut out.num_atoms, Atom::Q, e as u32);
        } else if e < 0 {
            add_atom(&mut out.den_atoms, Atom::Q, e.unsigned_abs() as u32);
        }
        out
    }

    /// `1 - c q^e`.
    pub fn one_minus(c: &BigRat, e: i64) -> FactoredRat {
        if c.is_zero() {
            return FactoredRat::one();
        }
        if e == 0 {
            return FactoredRat::constant(BigRat::one() - c);
        }
        if e > 0 {
            // 1 - c q^e = -c (q^e - 1/c)
            let mut out = FactoredRat::from_atoms(binomial_atoms(e as u64, &c.recip()));
            out.scalar = -c.clone();
            out
        } else {
            // 1 - c q^-m = q^-m (q^m - c)
            let m = e.unsigned_abs();
            let mut out = FactoredRat::from_atoms(binomial_atoms(m, c));
            add_atom(&mut out.den_atoms, Atom::Q, m as u32);
            out
        }
    }

    /// The q-integer `[m] = (1 - q^m)/(1 - q)`.
    pub fn q_int(m: i64) -> FactoredRat {
        if m == 0 {
            return FactoredRat::zero();
        }
        let k = m.unsigned_abs();
        let mut out = FactoredRat::from_atoms(divisors(k).into_iter().skip(1).map(Atom::Cyclo));
        if m < 0 {
            // [-k] = -q^-k [k]
            out.scalar = -BigRat::one();
            add_atom(&mut out.den_atoms, Atom::Q, k as u32);
        }
        out
    }

    pub fn cyclo(d: u64) -> FactoredRat {
        FactoredRat::from_atoms([Atom::Cyclo(d)])
    }

    pub fn is_zero(&self) -> bool {
        self.scalar.is_zero()
    }

    pub fn scalar(&self) -> &BigRat {
        &self.scalar
    }

    pub fn dense_num(&self) -> &QPoly {
        &self.num
    }

    pub fn num_atoms(&self) -> impl Iterator<Item = (&Atom, u32)> {
        self.num_atoms.iter().map(|(a, &m)| (a, m))
    }

    pub fn den_atoms(&self) -> impl Iterator<Item = (&Atom, u32)> {
        self.den_atoms.iter().map(|(a, &m)| (a, m))
    }

    /// `Some(c)` when the value is the constant `c`.
    pub fn as_constant(&self) -> Option<BigRat> {
        if self.is_zero() {
            return Some(BigRat::zero());
        }
        if self.num.is_one() && self.num_atoms.is_empty() && self.den_atoms.is_empty() {
            return Some(self.scalar.clone());
        }
        None
    }

    /// `Some((c, e))` when the value is `c q^e`.
    pub fn as_monomial(&self) -> Option<(BigRat, i64)> {
        if self.is_zero() || !self.num.is_one() {
            return None;
        }
        let only_q = |m: &Atoms| m.keys().all(|a| *a == Atom::Q);
        if !only_q(&self.num_atoms) || !only_q(&self.den_atoms) {
            return None;
        }
        let up = self.num_atoms.get(&Atom::Q).copied().unwrap_or(0) as i64;
        let down = self.den_atoms.get(&Atom::Q).copied().unwrap_or(0) as i64;
        Some((self.scalar.clone(), up - down))
    }

    fn normalize(&mut self) {
        if self.scalar.is_zero() || self.num.is_zero() {
            *self = FactoredRat::zero();
            return;
        }
        if !self.num.is_one() {
            let lc = self.num.leading_coeff();
            self.scalar = &self.scalar * &lc;
            let low = self.num.low_degree().unwrap_or(0);
            if !lc.is_one() {
                self.num = self.num.scale(&lc.recip());
            }
            if low > 0 {
                self.num = self.num.unshift(low);
                add_atom(&mut self.num_atoms, Atom::Q, low as u32);
            }
        }
        self.cancel_atoms();
    }

    fn cancel_atoms(&mut self) {
        let common: Vec<(Atom, u32)> = self
            .den_atoms
            .iter()
            .filter_map(|(a, &m)| self.num_atoms.get(a).map(|&n| (a.clone(), n.min(m))))
            .collect();
        for (a, m) in common {
            for map in [&mut self.num_atoms, &mut self.den_atoms] {
                let e = map.get_mut(&a).unwrap();
                *e -= m;
                if *e == 0 {
                    map.remove(&a);
                }
            }
        }
    }

    /// Divide irreducible denominator atoms out of the dense numerator where
    /// they divide it.
    pub fn reduce_atoms(&mut self) {
        if self.num.is_constant() {
            return;
        }
        let atoms: Vec<(Atom, u32)> = self
            .den_atoms
            .iter()
            .filter(|(a, _)| a.is_irreducible() && **a != Atom::Q)
            .map(|(a, &m)| (a.clone(), m))
            .collect();
        for (a, m) in atoms {
            if a.degree() > self.num.degree().unwrap_or(0) {
                continue;
            }
            let prim = a.poly().primitive().1;
            let mut k = 0;
            while k < m {
                match self.num.exact_div_primitive(&prim) {
                    Some(next) => {
                        self.num = next;
                        k += 1;
                    }
                    None => break,
                }
            }
            if k > 0 {
                let e = self.den_atoms.get_mut(&a).unwrap();
                *e -= k;
                if *e == 0 {
                    self.den_atoms.remove(&a);
                }
            }
        }
        self.normalize();
    }

    pub fn neg(&self) -> FactoredRat {
        let mut out = self.clone();
        out.scalar = -out.scalar;
        out
    }

    pub fn mul(&self, other: &FactoredRat) -> FactoredRat {
        if self.is_zero() || other.is_zero() {
            return FactoredRat::zero();
        }
        let mut out = self.clone();
        out.scalar = &self.scalar * &other.scalar;
        if !other.num.is_one() {
            out.num = &out.num * &other.num;
        }
        for (a, &m) in &other.num_atoms {
            add_atom(&mut out.num_atoms, a.clone(), m);
        }
        for (a, &m) in &other.den_atoms {
            add_atom(&mut out.den_atoms, a.clone(), m);
        }
        out.cancel_atoms();
        out
    }

    pub fn scale(&self, c: &BigRat) -> FactoredRat {
        if c.is_zero() {
            return FactoredRat::zero();
        }
        let mut out = self.clone();
        out.scalar *= c;
        out
    }

    pub fn inv(&self) -> Result<FactoredRat, PolyError> {
        if self.is_zero() {
            return Err(PolyError::DivisionByZeroPoly);
        }
        let mut out = FactoredRat {
            scalar: self.scalar.recip(),
            num: QPoly::one(),
            num_atoms: self.den_atoms.clone(),
            den_atoms: self.num_atoms.clone(),
        };
        if !self.num.is_one() {
            // The dense numerator is monic with nonzero constant term.
            add_atom(&mut out.den_atoms, Atom::Dense(self.num.clone()), 1);
        }
        out.cancel_atoms();
        Ok(out)
    }

    pub fn div(&self, other: &FactoredRat) -> Result<FactoredRat, PolyError> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: i64) -> Result<FactoredRat, PolyError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let k = e.unsigned_abs() as u32;
        if k == 0 {
            return Ok(FactoredRat::one());
        }
        if base.is_zero() {
            return Ok(base);
        }
        let scale = |m: &Atoms| m.iter().map(|(a, &v)| (a.clone(), v * k)).collect();
        Ok(FactoredRat {
            scalar: rat_pow(&base.scalar, k as i64),
            num: base.num.pow(k),
            num_atoms: scale(&base.num_atoms),
            den_atoms: scale(&base.den_atoms),
        })
    }

    pub fn add(&self, other: &FactoredRat) -> FactoredRat {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let mut common = Atoms::new();
        for (a, &m) in &self.num_atoms {
            if let Some(&n) = other.num_atoms.get(a) {
                common.insert(a.clone(), m.min(n));
            }
        }
        let mut den = self.den_atoms.clone();
        for (a, &m) in &other.den_atoms {
            let e = den.entry(a.clone()).or_insert(0);
            *e = (*e).max(m);
        }
        let term = |x: &FactoredRat| -> QPoly {
            let mut extra = Atoms::new();
            for (a, &m) in &x.num_atoms {
                add_atom(&mut extra, a.clone(), m - common.get(a).copied().unwrap_or(0));
            }
            for (a, &m) in &den {
                add_atom(&mut extra, a.clone(), m - x.den_atoms.get(a).copied().unwrap_or(0));
            }
            (&x.num * &expand(&extra)).scale(&x.scalar)
        };
        let mut out = FactoredRat {
            scalar: BigRat::one(),
            num: &term(self) + &term(other),
            num_atoms: common,
            den_atoms: den,
        };
        out.normalize();
        out
    }

    pub fn sub(&self, other: &FactoredRat) -> FactoredRat {
        self.add(&other.neg())
    }

    /// Unreduced dense numerator and (monic) denominator.
    pub fn expand(&self) -> (QPoly, QPoly) {
        if self.is_zero() {
            return (QPoly::zero(), QPoly::one());
        }
        let num = (&self.num * &expand(&self.num_atoms)).scale(&self.scalar);
        (num, expand(&self.den_atoms))
    }

    /// Expanded numerator together with the denominator atoms.
    pub fn num_and_den_atoms(&self) -> (QPoly, Vec<(Atom, u32)>) {
        let den = self.den_atoms.iter().map(|(a, &m)| (a.clone(), m)).collect();
        (self.expand_num(), den)
    }

    fn expand_num(&self) -> QPoly {
        if self.is_zero() {
            return QPoly::zero();
        }
        (&self.num * &expand(&self.num_atoms)).scale(&self.scalar)
    }

    /// Reduced form. Irreducible denominator atoms are cancelled by exact
    /// division, so a gcd is only needed for untracked dense factors.
    pub fn to_qrat(&self) -> QRat {
        if self.is_zero() {
            return QRat::zero();
        }
        let (mut num, _) = self.expand();
        let mut rest = Atoms::new();
        let mut q_den = 0u32;
        for (a, &m) in &self.den_atoms {
            match a {
                Atom::Q => {
                    let k = a.multiplicity_in(&num, m);
                    num = num.unshift(k as usize);
                    q_den = m - k;
                }
                Atom::Dense(_) => add_atom(&mut rest, a.clone(), m),
                _ => {
                    let prim = a.poly().primitive().1;
                    let mut left = m;
                    while left > 0 {
                        match num.exact_div_primitive(&prim) {
                            Some(next) => {
                                num = next;
                                left -= 1;
                            }
                            None => break,
                        }
                    }
                    add_atom(&mut rest, a.clone(), left);
                }
            }
        }
        let mut dense_den = QPoly::one();
        let mut irreducible_den = QPoly::one();
        for (a, &m) in &rest {
            let target = if a.is_irreducible() { &mut irreducible_den } else { &mut dense_den };
            let p = a.poly();
            for _ in 0..m {
                *target = &*target * &p;
            }
        }
        if !dense_den.is_one() {
            let g = num.gcd(&dense_den);
            if !g.is_one() {
                num = num.exact_div(&g).unwrap();
                dense_den = dense_den.exact_div(&g).unwrap();
            }
        }
        let den = (&dense_den * &irreducible_den).shift(q_den as usize);
        let lc = den.leading_coeff().recip();
        QRat::from_parts_unchecked(num.scale(&lc), den.scale(&lc))
    }

    /// Valuation at an irreducible atom; `None` for zero.
    ///
    /// `cap` bounds the work spent on the numerator: the returned value is
    /// exact whenever it is below `cap`.
    pub fn valuation(&self, pi: &Atom, cap: i64) -> Option<i64> {
        debug_assert!(pi.is_irreducible());
        if self.is_zero() {
            return None;
        }
        let mut down = self.den_atoms.get(pi).copied().unwrap_or(0) as i64;
        for (a, &m) in &self.den_atoms {
            if let Atom::Dense(p) = a {
                down += m as i64 * pi.multiplicity_in(p, u32::MAX) as i64;
            }
        }
        let mut up = self.num_atoms.get(pi).copied().unwrap_or(0) as i64;
        for (a, &m) in &self.num_atoms {
            if let Atom::Dense(p) = a {
                up += m as i64 * pi.multiplicity_in(p, u32::MAX) as i64;
            }
        }
        let need = (cap + down - up).max(0) as u32;
        up += pi.multiplicity_in(&self.num, need) as i64;
        Some(up - down)
    }

    /// Denominator atoms that are not irreducible, with multiplicity.
    pub fn dense_den_atoms(&self) -> Vec<(QPoly, u32)> {
        self.den_atoms
            .iter()
            .filter_map(|(a, &m)| match a {
                Atom::Dense(p) => Some((p.clone(), m)),
                _ => None,
            })
            .collect()
    }

    pub fn eval(&self, x: &BigRat) -> Option<BigRat> {
        let (n, d) = self.expand();
        let dv = d.eval(x);
        if dv.is_zero() {
            return None;
        }
        Some(n.eval(x) / dv)
    }
}

impl From<QPoly> for FactoredRat {
    fn from(p: QPoly) -> FactoredRat {
        FactoredRat::from_poly(p)
    }
}

impl From<&QRat> for FactoredRat {
    fn from(r: &QRat) -> FactoredRat {
        FactoredRat::from_qrat(r)
    }
}

impl PartialEq for FactoredRat {
    fn eq(&self, other: &FactoredRat) -> bool {
        self.sub(other).is_zero()
    }
}

impl fmt::Display for FactoredRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_qrat())
    }
}

/// Short product notation for a multiset of atoms, e.g. `Phi(3)^2*q`.
pub fn atoms_label<'a>(atoms: impl Iterator<Item = (&'a Atom, u32)>) -> String {
    use core::fmt::Write;
    let mut out = String::new();
    for (a, m) in atoms {
        if !out.is_empty() {
            out.push('*');
        }
        let _ = write!(out, "{a}");
        if m > 1 {
            let _ = write!(out, "^{m}");
        }
    }
    if out.is_empty() {
        out.push('1');
    }
    out
}
