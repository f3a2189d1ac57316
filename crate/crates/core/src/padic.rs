//! Morita's p-adic Gamma function, harmonic and Bernoulli numbers, and the
//! classical supercongruences obtained from the q-statements at `q = 1`.
//!
//! A congruence `A = B (mod p^k)` between rationals means `v_p(A - B) >= k`.
//! When `B` involves `Gamma_p`, the rational side is mapped to a residue mod
//! `p^k` and compared there; a stated power of `p` in front of the Gamma term
//! is first divided out of the rational side.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::{
    check_odd_prime, int, padic_valuation, prime_power, rat, residue_of_rational, ArithError, BigRat,
    PadicInt, Valuation,
};
use crate::MChoice;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PadicError {
    #[error("{x} is not {p}-integral")]
    NotPIntegral { x: String, p: u64 },
    #[error("{p}^{precision} exceeds the precision budget {budget}")]
    PrecisionBudgetExceeded { p: u64, precision: u32, budget: u64 },
    #[error("right-hand side carries {have} digits but {need} are needed")]
    InsufficientPrecision { have: u32, need: u32 },
    #[error("unknown classical statement `{0}`")]
    UnknownId(String),
    #[error("side condition violated: {0}")]
    SideConditionViolated(String),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// Largest `p^N` the Gamma product loop will run to.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// `Gamma_p(argument)` to the precision carried by `value`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaPValue {
    pub argument: BigRat,
    pub value: PadicInt,
}

impl GammaPValue {
    pub fn new(x: &BigRat, p: u64, precision: u32) -> Result<GammaPValue, PadicError> {
        Ok(GammaPValue { argument: x.clone(), value: gamma_p(x, p, precision)? })
    }
}

fn require_integral(x: &BigRat, p: u64) -> Result<(), PadicError> {
    if padic_valuation(x, p).at_least(0) {
        Ok(())
    } else {
        Err(PadicError::NotPIntegral { x: x.to_string(), p })
    }
}

/// `Gamma_p(x) mod p^precision` under the default budget.
pub fn gamma_p(x: &BigRat, p: u64, precision: u32) -> Result<PadicInt, PadicError> {
    gamma_p_with_budget(x, p, precision, DEFAULT_BUDGET)
}

/// `Gamma_p(x) mod p^N` via `Gamma_p(r)` for the representative
/// `r = x mod p^N` in `[1, p^N]`.
pub fn gamma_p_with_budget(x: &BigRat, p: u64, precision: u32, budget: u64) -> Result<PadicInt, PadicError> {
    check_odd_prime(p)?;
    require_integral(x, p)?;
    let modulus = prime_power(p, precision)?;
    if modulus > budget {
        return Err(PadicError::PrecisionBudgetExceeded { p, precision, budget });
    }
    let mut r = residue_of_rational(x, p, precision)?.residue();
    if r == 0 {
        r = modulus;
    }
    Ok(PadicInt::new(p, precision, gamma_p_at_integer(r, p, modulus)))
}

/// `(-1)^r prod_{1 <= k < r, p does not divide k} k  mod m`.
fn gamma_p_at_integer(r: u64, p: u64, m: u64) -> u64 {
    let mut acc: u64 = 1 % m;
    for k in 1..r {
        if k % p != 0 {
            acc = ((acc as u128 * k as u128) % m as u128) as u64;
        }
    }
    if r % 2 == 1 && acc != 0 {
        acc = m - acc;
    }
    acc
}

/// `H_m^(ell) = sum_{k=1}^m 1/k^ell`.
pub fn harmonic(m: u64, ell: u32) -> BigRat {
    let mut acc = BigRat::zero();
    for k in 1..=m {
        acc += BigRat::new(BigInt::one(), num_traits::pow(BigInt::from(k), ell as usize));
    }
    acc
}

/// Bernoulli numbers from `sum_{k<n} C(n, k) B_k = 0`, so `B_1 = -1/2`.
#[derive(Debug, Clone)]
pub struct BernoulliCache {
    values: Vec<BigRat>,
}

impl Default for BernoulliCache {
    fn default() -> Self {
        BernoulliCache::new()
    }
}

impl BernoulliCache {
    pub fn new() -> BernoulliCache {
        BernoulliCache { values: alloc::vec![BigRat::one()] }
    }

    pub fn get(&mut self, n: usize) -> BigRat {
        while self.values.len() <= n {
            let m = self.values.len();
            let row = binomial_row(m + 1);
            let s: BigRat = self
                .values
                .iter()
                .zip(&row)
                .map(|(b, c)| b * BigRat::from_integer(c.clone()))
                .sum();
            self.values.push(-s / BigRat::from_integer(BigInt::from(m + 1)));
        }
        self.values[n].clone()
    }

    pub fn values(&self) -> &[BigRat] {
        &self.values
    }

    /// Check the defining recurrence for every cached index.
    pub fn satisfies_recurrence(&self) -> bool {
        (2..=self.values.len()).all(|n| {
            let row = binomial_row(n);
            let s: BigRat = self.values[..n]
                .iter()
                .zip(&row)
                .map(|(b, c)| b * BigRat::from_integer(c.clone()))
                .sum();
            s.is_zero()
        })
    }
}

/// `C(n, 0), ..., C(n, n)`.
fn binomial_row(n: usize) -> Vec<BigInt> {
    let mut row = alloc::vec![BigInt::one()];
    for k in 0..n {
        let next = row[k].clone() * BigInt::from(n - k) / BigInt::from(k + 1);
        row.push(next);
    }
    row
}

pub fn bernoulli(n: usize) -> BigRat {
    BernoulliCache::new().get(n)
}

/// Outcome of a p-adic comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PadicVerdict {
    pub required: u32,
    /// `v_p(lhs - rhs)`, or a lower bound for it when `lower_bound` is set
    /// (a Gamma_p side is only known to finite precision).
    pub achieved: Valuation,
    pub lower_bound: bool,
}

impl PadicVerdict {
    pub fn is_verified(&self) -> bool {
        self.achieved.at_least(self.required as i64)
    }
}

/// `lhs = rhs (mod p^k)` for p-integral rationals.
pub fn rational_congruent(lhs: &BigRat, rhs: &BigRat, p: u64, k: u32) -> Result<PadicVerdict, PadicError> {
    check_odd_prime(p)?;
    require_integral(lhs, p)?;
    require_integral(rhs, p)?;
    Ok(PadicVerdict { required: k, achieved: padic_valuation(&(lhs - rhs), p), lower_bound: false })
}

/// `lhs = rhs (mod p^k)` where `rhs` is a residue carrying at least `k`
/// digits.
pub fn padic_congruent(lhs: &BigRat, rhs: &PadicInt, k: u32) -> Result<PadicVerdict, PadicError> {
    let p = rhs.p();
    if rhs.precision() < k {
        return Err(PadicError::InsufficientPrecision { have: rhs.precision(), need: k });
    }
    require_integral(lhs, p)?;
    let rhs = rhs.truncate(k);
    let diff = residue_of_rational(lhs, p, k)? - rhs;
    let exact = diff.is_zero();
    Ok(PadicVerdict { required: k, achieved: Valuation::Finite(diff.valuation() as i64), lower_bound: exact })
}

/// `lhs = coeff p^e G (mod p^k)`, where `gamma(N)` yields the unit `G`
/// to `N` digits. Only `k - e` digits of `G` are needed.
fn congruent_with_offset(
    lhs: &BigRat,
    coeff: &BigRat,
    e: u32,
    p: u64,
    k: u32,
    gamma: impl FnOnce(u32) -> Result<PadicInt, PadicError>,
) -> Result<PadicVerdict, PadicError> {
    require_integral(lhs, p)?;
    let v = padic_valuation(lhs, p);
    if !v.at_least(e as i64) {
        return Ok(PadicVerdict { required: k, achieved: v, lower_bound: false });
    }
    if k <= e {
        return Ok(PadicVerdict { required: k, achieved: Valuation::Finite(e as i64), lower_bound: true });
    }
    let digits = k - e;
    let shifted = lhs / BigRat::from_integer(num_traits::pow(BigInt::from(p), e as usize));
    let rhs = residue_of_rational(coeff, p, digits)? * gamma(digits)?.truncate(digits);
    let inner = padic_congruent(&shifted, &rhs, digits)?;
    let achieved = match inner.achieved {
        Valuation::Finite(w) => Valuation::Finite(w + e as i64),
        Valuation::Infinite => Valuation::Infinite,
    };
    Ok(PadicVerdict { required: k, achieved, lower_bound: inner.lower_bound })
}

/// Classical statement ids handled here.
pub const CLASSICAL_IDS: [&str; 15] = [
    "COR_1_4",
    "COR_1_5",
    "COR_1_6",
    "PROP_1_7",
    "PROP_1_8",
    "VH_A2",
    "VH_D2",
    "LIU",
    "LR",
    "COR_5_E",
    "COR_5_G",
    "COR_5_H",
    "SUN_H2",
    "SUN_H2HALF",
    "SUN_H3",
];

/// Whether the statement's sum has two admissible truncations.
pub fn has_m_choice(id: &str) -> bool {
    matches!(id, "COR_1_4" | "COR_1_5" | "COR_1_6" | "COR_5_E" | "COR_5_G" | "COR_5_H")
}

/// Whether the statement takes `d` and `r`.
pub fn takes_d_r(id: &str) -> bool {
    matches!(id, "COR_5_E" | "COR_5_G" | "COR_5_H")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassicalParams {
    pub p: u64,
    pub s: u32,
    pub d: Option<i64>,
    pub r: Option<i64>,
    pub m_choice: MChoice,
    pub budget: u64,
}

impl ClassicalParams {
    pub fn new(p: u64, s: u32) -> ClassicalParams {
        ClassicalParams { p, s, d: None, r: None, m_choice: MChoice::First, budget: DEFAULT_BUDGET }
    }

    pub fn with_d_r(mut self, d: i64, r: i64) -> ClassicalParams {
        self.d = Some(d);
        self.r = Some(r);
        self
    }

    pub fn with_m_choice(mut self, m: MChoice) -> ClassicalParams {
        self.m_choice = m;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassicalOutcome {
    pub id: &'static str,
    /// The truncation point used, for statements with a choice.
    pub m: Option<i64>,
    /// `p^k` as text.
    pub modulus: String,
    /// Which case of the statement applied, e.g. `p = 3 mod 4`.
    pub branch: String,
    pub verdict: PadicVerdict,
}

fn violated(msg: String) -> PadicError {
    PadicError::SideConditionViolated(msg)
}

/// `(x)_k`.
pub fn shifted_factorial(x: &BigRat, k: u64) -> BigRat {
    let mut acc = BigRat::one();
    let mut y = x.clone();
    for _ in 0..k {
        acc *= &y;
        y += BigRat::one();
    }
    acc
}

/// `sum_{k=0}^m (+-1)^k (a k + b) ((x)_k / k!)^power`.
fn ramanujan_sum(m: i64, x: &BigRat, power: usize, alternating: bool, a: i64, b: i64) -> BigRat {
    let mut acc = BigRat::zero();
    let mut ratio = BigRat::one();
    for k in 0..=m {
        if k > 0 {
            ratio = ratio * (x + int(k - 1)) / int(k);
        }
        let mut term = num_traits::pow(ratio.clone(), power) * int(a * k + b);
        if alternating && k % 2 == 1 {
            term = -term;
        }
        acc += term;
    }
    acc
}

/// `sum_{j=1}^k 1/(dj)^2 + 1/(dj - d + r)^2`.
fn double_harmonic(d: i64, r: i64, k: i64) -> Result<BigRat, PadicError> {
    let mut acc = BigRat::zero();
    for j in 1..=k {
        let u = d * j - d + r;
        if u == 0 {
            return Err(violated(format!("dj - d + r vanishes at j = {j}")));
        }
        acc += rat(1, (d * j) * (d * j)) + rat(1, u * u);
    }
    Ok(acc)
}

fn nonzero(x: BigRat, what: &str) -> Result<BigRat, PadicError> {
    if x.is_zero() {
        Err(violated(format!("{what} vanishes")))
    } else {
        Ok(x)
    }
}

/// The double-series right-hand side shared by COR_5_E, COR_5_G and COR_5_H.
///
/// `head * sum_{k<=len} (x)_k^a (1-x)_k / (k!^3 (2x)_k^c) {u - w^3 u^3 S_k}`
/// with `S_k` from [`double_harmonic`].
fn double_series(
    d: i64,
    r: i64,
    len: i64,
    x_power: usize,
    with_2x: bool,
    u: &BigRat,
    w: i64,
) -> Result<BigRat, PadicError> {
    let x = rat(r, d);
    let one = BigRat::one();
    let mut acc = BigRat::zero();
    for k in 0..=len {
        let k_u = k as u64;
        let mut term = num_traits::pow(shifted_factorial(&x, k_u), x_power) * shifted_factorial(&(&one - &x), k_u);
        let mut den = num_traits::pow(shifted_factorial(&one, k_u), 3);
        if with_2x {
            den *= shifted_factorial(&(&x + &x), k_u);
        }
        term /= nonzero(den, "(2r/d)_k")?;
        let w3 = int(w * w * w);
        let brace = u - w3 * num_traits::pow(u.clone(), 3) * double_harmonic(d, r, k)?;
        acc += term * brace;
    }
    Ok(acc)
}

/// Verify one classical congruence at `(p, s)`.
pub fn verify_classical(id: &str, params: &ClassicalParams) -> Result<ClassicalOutcome, PadicError> {
    let id: &'static str =
        CLASSICAL_IDS.iter().copied().find(|x| *x == id).ok_or_else(|| PadicError::UnknownId(id.to_string()))?;
    let p = params.p;
    check_odd_prime(p)?;
    let s = params.s;
    if s == 0 {
        return Err(violated("s must be positive".into()));
    }
    let big_p = p
        .checked_pow(s)
        .filter(|&q| q <= params.budget && q <= i64::MAX as u64)
        .ok_or(PadicError::PrecisionBudgetExceeded { p, precision: s, budget: params.budget })?
        as i64;
    let pp = int(big_p);
    let second = params.m_choice == MChoice::Second;
    let pick = |first: i64| if second { big_p - 1 } else { first };
    let gamma = |x: BigRat, e: u64| {
        move |digits: u32| -> Result<PadicInt, PadicError> {
            Ok(gamma_p_with_budget(&x, p, digits, params.budget)?.pow(e))
        }
    };
    let needs_s1 = || if s == 1 { Ok(()) } else { Err(violated(format!("{id} is stated for s = 1"))) };
    let half = rat(1, 2);
    let third = rat(1, 3);
    let one = BigRat::one();

    let (m, k, branch, verdict): (Option<i64>, u32, String, PadicVerdict) = match id {
        "COR_1_4" => {
            let m = pick((big_p - 1) / 2);
            let lhs = ramanujan_sum(m, &half, 5, true, 4, 1);
            let k = s + 4;
            let (branch, rhs) = if big_p % 4 == 1 {
                let l = (big_p - 1) / 4;
                let lead = num_traits::pow(shifted_factorial(&half, l as u64) / shifted_factorial(&one, l as u64), 2);
                let p3 = num_traits::pow(pp.clone(), 3);
                let brace = &pp + &p3 / int(4) * harmonic(((big_p - 1) / 2) as u64, 2)
                    - &p3 / int(8) * harmonic(l as u64, 2);
                ("p^s = 1 mod 4", lead * brace)
            } else {
                let l = ((big_p - 1) / 2) as u64;
                let rhs = &pp * &pp * shifted_factorial(&rat(3, 4), l) / shifted_factorial(&rat(5, 4), l);
                ("p^s = 3 mod 4", rhs)
            };
            (Some(m), k, branch.into(), rational_congruent(&lhs, &rhs, p, k)?)
        }
        "COR_1_5" => {
            if big_p % 3 != 1 {
                return Err(violated("COR_1_5 needs p^s = 1 mod 3".into()));
            }
            let l = (big_p - 1) / 3;
            let m = pick(l);
            let lhs = ramanujan_sum(m, &third, 6, false, 6, 1);
            let lead = num_traits::pow(
                shifted_factorial(&rat(2, 3), l as u64) / shifted_factorial(&one, l as u64),
                3,
            );
            let inner: BigRat = (1..=l).map(|j| rat(1, (3 * j - 1) * (3 * j - 1)) - rat(1, 9 * j * j)).sum();
            let rhs = lead * (&pp + num_traits::pow(pp.clone(), 3) * inner);
            let k = s + 4;
            (Some(m), k, "p^s = 1 mod 3".into(), rational_congruent(&lhs, &rhs, p, k)?)
        }
        "COR_1_6" => {
            if big_p % 3 != 2 {
                return Err(violated("COR_1_6 needs p^s = 2 mod 3".into()));
            }
            let l = (2 * big_p - 1) / 3;
            let m = pick(l);
            let lhs = ramanujan_sum(m, &third, 6, false, 6, 1);
            let lead = num_traits::pow(
                shifted_factorial(&rat(2, 3), l as u64) / shifted_factorial(&one, l as u64),
                3,
            );
            let rhs = int(10) * &pp * lead;
            let k = s + 5;
            (Some(m), k, "p^s = 2 mod 3".into(), rational_congruent(&lhs, &rhs, p, k)?)
        }
        "PROP_1_7" => {
            needs_s1()?;
            if p <= 5 {
                return Err(violated("PROP_1_7 needs p > 5".into()));
            }
            let pi = p as i64;
            if p % 4 == 1 {
                let l = (pi - 1) / 4;
                let lead = num_traits::pow(shifted_factorial(&half, l as u64) / shifted_factorial(&one, l as u64), 2);
                let p2 = &pp * &pp;
                let brace = &one + &p2 / int(4) * harmonic(((pi - 1) / 2) as u64, 2) - &p2 / int(8) * harmonic(l as u64, 2);
                let lhs = lead * brace;
                let v = congruent_with_offset(&lhs, &int(-1), 0, p, 4, gamma(rat(1, 4), 4))?;
                (None, 4, "p = 1 mod 4".into(), v)
            } else {
                let l = ((pi - 1) / 2) as u64;
                let lhs = shifted_factorial(&rat(3, 4), l) / shifted_factorial(&rat(5, 4), l);
                let v = congruent_with_offset(&lhs, &rat(-1, 16), 1, p, 3, gamma(rat(1, 4), 4))?;
                (None, 3, "p = 3 mod 4".into(), v)
            }
        }
        "PROP_1_8" => {
            needs_s1()?;
            let pi = p as i64;
            match p % 6 {
                1 => {
                    let l = (pi - 1) / 3;
                    let lead = num_traits::pow(
                        shifted_factorial(&rat(2, 3), l as u64) / shifted_factorial(&one, l as u64),
                        3,
                    );
                    let inner: BigRat =
                        (1..=l).map(|j| rat(1, (3 * j - 1) * (3 * j - 1)) - rat(1, 9 * j * j)).sum();
                    let lhs = lead * (&one + &pp * &pp * inner);
                    let v = congruent_with_offset(&lhs, &int(-1), 0, p, 4, gamma(third.clone(), 9))?;
                    (None, 4, "p = 1 mod 6".into(), v)
                }
                5 => {
                    let l = (2 * pi - 1) / 3;
                    let lhs = num_traits::pow(
                        shifted_factorial(&rat(2, 3), l as u64) / shifted_factorial(&one, l as u64),
                        3,
                    );
                    let v = congruent_with_offset(&lhs, &rat(-1, 27), 3, p, 5, gamma(third.clone(), 9))?;
                    (None, 5, "p = 5 mod 6".into(), v)
                }
                _ => return Err(violated("PROP_1_8 needs p > 3".into())),
            }
        }
        "VH_A2" => {
            needs_s1()?;
            let lhs = ramanujan_sum((p as i64 - 1) / 2, &half, 5, true, 4, 1);
            if p % 4 == 1 {
                let g = move |digits: u32| -> Result<PadicInt, PadicError> {
                    Ok(gamma_p_with_budget(&rat(3, 4), p, digits, params.budget)?.pow(4).inverse()?)
                };
                (None, 3, "p = 1 mod 4".into(), congruent_with_offset(&lhs, &int(-1), 1, p, 3, g)?)
            } else {
                (None, 3, "p = 3 mod 4".into(), rational_congruent(&lhs, &BigRat::zero(), p, 3)?)
            }
        }
        "VH_D2" => {
            needs_s1()?;
            if p % 6 != 1 {
                return Err(violated("VH_D2 needs p = 1 mod 6".into()));
            }
            let lhs = ramanujan_sum((p as i64 - 1) / 3, &third, 6, false, 6, 1);
            (None, 4, "p = 1 mod 6".into(), congruent_with_offset(&lhs, &int(-1), 1, p, 4, gamma(third.clone(), 9))?)
        }
        "LIU" => {
            needs_s1()?;
            if p <= 5 || p % 4 != 3 {
                return Err(violated("LIU needs p > 5 and p = 3 mod 4".into()));
            }
            let lhs = ramanujan_sum((p as i64 - 1) / 2, &half, 5, true, 4, 1);
            let v = congruent_with_offset(&lhs, &rat(-1, 16), 3, p, 4, gamma(rat(1, 4), 4))?;
            (None, 4, "p = 3 mod 4".into(), v)
        }
        "LR" => {
            needs_s1()?;
            let lhs = ramanujan_sum(p as i64 - 1, &third, 6, false, 6, 1);
            match p % 6 {
                1 => {
                    let v = congruent_with_offset(&lhs, &int(-1), 1, p, 6, gamma(third.clone(), 9))?;
                    (None, 6, "p = 1 mod 6".into(), v)
                }
                5 => {
                    let v = congruent_with_offset(&lhs, &rat(-10, 27), 4, p, 6, gamma(third.clone(), 9))?;
                    (None, 6, "p = 5 mod 6".into(), v)
                }
                _ => return Err(violated("LR needs p > 3".into())),
            }
        }
        "COR_5_E" | "COR_5_G" | "COR_5_H" => {
            let d = params.d.ok_or_else(|| violated(format!("{id} needs d")))?;
            let r = params.r.ok_or_else(|| violated(format!("{id} needs r")))?;
            if d < 1 || (p as i64).gcd(&d) != 1 {
                return Err(violated(format!("{id} needs d >= 1 and gcd(p, d) = 1")));
            }
            let x = rat(r, d);
            if id == "COR_5_H" {
                if d < 3 || r.abs() != 1 || big_p + r < d || (big_p + r) % d != 0 {
                    return Err(violated("COR_5_H needs d >= 3, r = +-1, p^s + r >= d, p^s = -r mod d".into()));
                }
                let l = (d * big_p - big_p - r) / d;
                let m = pick(l);
                let lhs = ramanujan_sum(m, &x, 6, false, 2 * d, r);
                let lead = shifted_factorial(&(&x + &x), l as u64) / shifted_factorial(&one, l as u64);
                let rhs = lead * double_series(d, r, l, 3, true, &(int(d - 1) * &pp), 1)?;
                let k = s + 5;
                (Some(m), k, format!("d = {d}, r = {r}"), rational_congruent(&lhs, &rhs, p, k)?)
            } else {
                if r < d + big_p - d * big_p || r > big_p || (big_p - r) % d != 0 {
                    return Err(violated(format!(
                        "{id} needs d + p^s - d p^s <= r <= p^s and p^s = r mod d"
                    )));
                }
                let l = (big_p - r) / d;
                let m = pick(l);
                let k = s + 4;
                let (lhs, rhs) = if id == "COR_5_E" {
                    let lhs = ramanujan_sum(m, &x, 6, false, 2 * d, r);
                    let lead = nonzero(shifted_factorial(&(&x + &x), l as u64), "(2r/d)_L")?
                        / shifted_factorial(&one, l as u64);
                    (lhs, lead * double_series(d, r, l, 3, true, &pp, 1)?)
                } else {
                    let lhs = ramanujan_sum(m, &x, 5, true, 2 * d, r);
                    let sign = if ((r - big_p) / d) % 2 == 0 { one.clone() } else { -one.clone() };
                    (lhs, sign * double_series(d, r, l, 2, false, &pp, 1)?)
                };
                (Some(m), k, format!("d = {d}, r = {r}"), rational_congruent(&lhs, &rhs, p, k)?)
            }
        }
        "SUN_H2" | "SUN_H2HALF" | "SUN_H3" => {
            needs_s1()?;
            let min = if id == "SUN_H3" { 7 } else { 5 };
            if p < min {
                return Err(violated(format!("{id} needs p >= {min}")));
            }
            let b = bernoulli(p as usize - 3);
            let pi = p as i64;
            let (lhs, rhs, k) = match id {
                "SUN_H2" => (harmonic(p - 1, 2), rat(2 * pi, 3) * b, 2),
                "SUN_H2HALF" => (harmonic((p - 1) / 2, 2), rat(7 * pi, 3) * b, 2),
                _ => (harmonic(p / 4, 3), int(-9) * b, 1),
            };
            (None, k, String::new(), rational_congruent(&lhs, &rhs, p, k)?)
        }
        _ => unreachable!("id checked against CLASSICAL_IDS"),
    };
    Ok(ClassicalOutcome { id, m, modulus: format!("{p}^{k}"), branch, verdict })
}
