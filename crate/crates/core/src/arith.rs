//! Big rationals, p-adic valuations and residues modulo prime powers.

use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Reduced rational with positive denominator.
pub type BigRat = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ArithError {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("value is not {p}-integral")]
    NotPIntegral { p: u64 },
    #[error("value is divisible by {p}")]
    NotAUnit { p: u64 },
    #[error("{p}^{precision} does not fit in 64 bits")]
    PrecisionOverflow { p: u64, precision: u32 },
}

/// A p-adic valuation; zero has infinite valuation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    /// True when the valuation is at least `k`.
    pub fn at_least(self, k: i64) -> bool {
        match self {
            Valuation::Finite(v) => v >= k,
            Valuation::Infinite => true,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

pub fn rat(n: i64, d: i64) -> BigRat {
    BigRat::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigRat {
    BigRat::from_integer(BigInt::from(n))
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub fn check_odd_prime(p: u64) -> Result<(), ArithError> {
    if p % 2 == 1 && is_prime(p) {
        Ok(())
    } else {
        Err(ArithError::NotOddPrime(p))
    }
}

/// Exponent of `p` in a nonzero integer.
pub fn int_valuation(x: &BigInt, p: u64) -> u64 {
    debug_assert!(!x.is_zero());
    let p = BigInt::from(p);
    let mut x = x.clone();
    let mut v = 0;
    loop {
        let (q, r) = x.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        x = q;
        v += 1;
    }
}

pub fn padic_valuation(x: &BigRat, p: u64) -> Valuation {
    if x.is_zero() {
        return Valuation::Infinite;
    }
    let up = int_valuation(x.numer(), p) as i64;
    let down = int_valuation(x.denom(), p) as i64;
    Valuation::Finite(up - down)
}

pub fn prime_power(p: u64, precision: u32) -> Result<u64, ArithError> {
    p.checked_pow(precision)
        .ok_or(ArithError::PrecisionOverflow { p, precision })
}

fn mod_big(x: &BigInt, m: u64) -> u64 {
    x.mod_floor(&BigInt::from(m)).to_u64().expect("reduced below a u64 modulus")
}

fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, a as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if r0 != 1 {
        return None;
    }
    Some(s0.rem_euclid(m as i128) as u64)
}

pub fn inv_mod_prime_power(a: &BigInt, p: u64, precision: u32) -> Result<u64, ArithError> {
    check_odd_prime(p)?;
    let m = prime_power(p, precision)?;
    let r = mod_big(a, m);
    if r % p == 0 {
        return Err(ArithError::NotAUnit { p });
    }
    Ok(mod_inverse(r, m).expect("units are invertible"))
}

pub fn residue_of_rational(x: &BigRat, p: u64, precision: u32) -> Result<PadicInt, ArithError> {
    check_odd_prime(p)?;
    let m = prime_power(p, precision)?;
    let d = mod_big(x.denom(), m);
    if d % p == 0 {
        return Err(ArithError::NotPIntegral { p });
    }
    let n = mod_big(x.numer(), m);
    let inv = mod_inverse(d, m).expect("units are invertible");
    Ok(PadicInt::new(p, precision, mul_mod(n, inv, m)))
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// An element of `Z/p^N`, the precision-`N` model of the p-adic integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PadicInt {
    p: u64,
    precision: u32,
    modulus: u64,
    residue: u64,
}

impl PadicInt {
    /// Panics if `p^precision` overflows `u64`.
    pub fn new(p: u64, precision: u32, residue: u64) -> PadicInt {
        let modulus = prime_power(p, precision).expect("modulus fits in u64");
        PadicInt {
            p,
            precision,
            modulus,
            residue: residue % modulus,
        }
    }

    pub fn from_i64(p: u64, precision: u32, x: i64) -> PadicInt {
        let modulus = prime_power(p, precision).expect("modulus fits in u64");
        PadicInt {
            p,
            precision,
            modulus,
            residue: (x as i128).rem_euclid(modulus as i128) as u64,
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn residue(&self) -> u64 {
        self.residue
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.residue == 0
    }

    /// Valuation of the residue, capped at the precision.
    pub fn valuation(&self) -> u32 {
        let mut v = 0;
        let mut r = self.residue;
        while r != 0 && r % self.p == 0 && v < self.precision {
            r /= self.p;
            v += 1;
        }
        if r == 0 {
            self.precision
        } else {
            v
        }
    }

    pub fn inverse(&self) -> Result<PadicInt, ArithError> {
        if self.residue % self.p == 0 {
            return Err(ArithError::NotAUnit { p: self.p });
        }
        let inv = mod_inverse(self.residue, self.modulus).expect("units are invertible");
        Ok(PadicInt { residue: inv, ..*self })
    }

    pub fn pow(&self, mut e: u64) -> PadicInt {
        let mut base = self.residue;
        let mut acc = 1 % self.modulus;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul_mod(acc, base, self.modulus);
            }
            base = mul_mod(base, base, self.modulus);
            e >>= 1;
        }
        PadicInt { residue: acc, ..*self }
    }

    /// Reduce to a lower precision.
    pub fn truncate(&self, precision: u32) -> PadicInt {
        assert!(precision <= self.precision, "cannot raise precision by truncation");
        PadicInt::new(self.p, precision, self.residue)
    }

    fn check_compatible(&self, other: &PadicInt) {
        assert!(
            self.p == other.p && self.precision == other.precision,
            "p-adic operands disagree: {}^{} vs {}^{}",
            self.p,
            self.precision,
            other.p,
            other.precision
        );
    }
}

impl fmt::Display for PadicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {}^{})", self.residue, self.p, self.precision)
    }
}

impl Add for PadicInt {
    type Output = PadicInt;
    fn add(self, rhs: PadicInt) -> PadicInt {
        self.check_compatible(&rhs);
        let s = (self.residue as u128 + rhs.residue as u128) % self.modulus as u128;
        PadicInt { residue: s as u64, ..self }
    }
}

impl Sub for PadicInt {
    type Output = PadicInt;
    fn sub(self, rhs: PadicInt) -> PadicInt {
        self.check_compatible(&rhs);
        let s = (self.residue as u128 + self.modulus as u128 - rhs.residue as u128)
            % self.modulus as u128;
        PadicInt { residue: s as u64, ..self }
    }
}

impl Mul for PadicInt {
    type Output = PadicInt;
    fn mul(self, rhs: PadicInt) -> PadicInt {
        self.check_compatible(&rhs);
        PadicInt {
            residue: mul_mod(self.residue, rhs.residue, self.modulus),
            ..self
        }
    }
}

impl Neg for PadicInt {
    type Output = PadicInt;
    fn neg(self) -> PadicInt {
        PadicInt {
            residue: (self.modulus - self.residue) % self.modulus,
            ..self
        }
    }
}

/// `x^e` for a possibly negative exponent.
pub fn rat_pow(x: &BigRat, e: i64) -> BigRat {
    if e >= 0 {
        num_traits::pow(x.clone(), e as usize)
    } else {
        num_traits::pow(x.recip(), e.unsigned_abs() as usize)
    }
}

/// True when `x` is `y^k` for some rational `y` and some `k >= 2`.
pub fn is_perfect_power(x: &BigRat) -> bool {
    if x.is_zero() || x.abs().is_one() {
        return true;
    }
    let n = x.numer().abs();
    let d = x.denom().clone();
    let bits = n.bits().max(d.bits());
    for k in 2..=bits.max(2) as u32 {
        if x.is_negative() && k % 2 == 0 {
            continue;
        }
        if is_kth_power(&n, k) && is_kth_power(&d, k) {
            return true;
        }
    }
    false
}

fn is_kth_power(n: &BigInt, k: u32) -> bool {
    let r = n.nth_root(k);
    num_traits::pow(r, k as usize) == *n
}

/// Mix a base seed with labels (statement id, trial index, ...) into an
/// independent stream seed: FNV-1a over the labels, then SplitMix64.
pub fn derive_seed(seed: u64, labels: &[&str]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for label in labels {
        for b in label.bytes().chain(core::iter::once(0xff)) {
            h ^= b as u64;
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }
    let mut z = seed ^ h;
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// A rational `u/v` with `1 <= |u| <= 9` and `1 <= v <= 9`.
pub fn sample_small_rational<R: rand::Rng + ?Sized>(rng: &mut R) -> BigRat {
    let u: i64 = rng.gen_range(1..=9) * if rng.gen_bool(0.5) { 1 } else { -1 };
    let v: i64 = rng.gen_range(1..=9);
    rat(u, v)
}
