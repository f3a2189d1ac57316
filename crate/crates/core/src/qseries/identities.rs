//! Exact checks of terminating summation and transformation formulas.
//!
//! Each identity is the finite form used in a proof step: both sides are
//! rational functions in `q` once the free parameters are specialized.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};

use num_integer::Integer;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{pochhammer_factored, truncated_sum_factored, QMonomialArg, QSeriesError, TermSpec};
use crate::arith::{derive_seed, rat_pow, sample_small_rational, BigRat};
use crate::poly::factored::FactoredRat;

pub const IDENTITY_IDS: [&str; 4] = ["QCHU", "JACKSON_SPEC", "WHIPPLE_SPEC", "WATSON_SPEC"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IdentityId {
    /// q-Chu-Vandermonde: `2phi1(q^-n, b; c; q, c q^n / b) = (c/b;q)_n / (c;q)_n`.
    QChu,
    /// Jackson's 8phi7 sum at `a = q^-tn`, base `q^3`.
    JacksonSpec,
    /// The q-Whipple sum at `a = q^-n`, base `q^2`, both residue branches.
    WhippleSpec,
    /// Watson's 8phi7 transformation at `a = q^-tn`, base `q^d`.
    WatsonSpec,
}

impl IdentityId {
    pub fn parse(s: &str) -> Option<IdentityId> {
        match s {
            "QCHU" => Some(IdentityId::QChu),
            "JACKSON_SPEC" => Some(IdentityId::JacksonSpec),
            "WHIPPLE_SPEC" => Some(IdentityId::WhippleSpec),
            "WATSON_SPEC" => Some(IdentityId::WatsonSpec),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            IdentityId::QChu => "QCHU",
            IdentityId::JacksonSpec => "JACKSON_SPEC",
            IdentityId::WhippleSpec => "WHIPPLE_SPEC",
            IdentityId::WatsonSpec => "WATSON_SPEC",
        }
    }
}

/// Parameters left as `None` are drawn from the seed.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IdentityParams {
    pub n: Option<i64>,
    pub t: Option<i64>,
    pub d: Option<i64>,
    pub r: Option<i64>,
    pub b: Option<BigRat>,
    pub c: Option<BigRat>,
}

#[derive(Debug, Clone)]
pub struct IdentityOutcome {
    pub id: IdentityId,
    /// The fully resolved parameters, as printable strings.
    pub params: BTreeMap<String, String>,
    pub equal: bool,
    pub lhs: FactoredRat,
    pub rhs: FactoredRat,
}

fn poch(coeff: BigRat, exp: i64, step: i64, k: i64) -> Result<FactoredRat, QSeriesError> {
    pochhammer_factored(&QMonomialArg::new(coeff, exp), step, k)
}

fn one() -> BigRat {
    BigRat::one()
}

fn generic_rational(rng: &mut ChaCha8Rng, avoid: &[BigRat]) -> BigRat {
    loop {
        let x = sample_small_rational(rng);
        if !x.is_one() && !(-x.clone()).is_one() && !avoid.contains(&x) {
            return x;
        }
    }
}

fn bad(msg: &str) -> QSeriesError {
    QSeriesError::DegenerateParameters(msg.to_string())
}

fn non_terminating(msg: String) -> QSeriesError {
    QSeriesError::NonTerminating(msg)
}

/// Check one identity exactly; the seed fixes every unspecified parameter.
pub fn check_terminating_identity(
    id: IdentityId,
    params: &IdentityParams,
    seed: u64,
) -> Result<IdentityOutcome, QSeriesError> {
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, &[id.name()]));
    let mut shown = BTreeMap::new();
    let (lhs, rhs) = match id {
        IdentityId::QChu => {
            let n = params.n.unwrap_or_else(|| rng.gen_range(0..=8));
            if n < 0 {
                return Err(non_terminating(format!("n = {n} must be nonnegative")));
            }
            let b = params.b.clone().unwrap_or_else(|| generic_rational(&mut rng, &[]));
            let c = params.c.clone().unwrap_or_else(|| generic_rational(&mut rng, &[b.clone()]));
            if b.is_zero() || c.is_zero() || c.is_one() {
                return Err(bad("QCHU needs b != 0 and c not in {0, 1}"));
            }
            shown.insert("n".into(), n.to_string());
            shown.insert("b".into(), b.to_string());
            shown.insert("c".into(), c.to_string());
            let spec = TermSpec::new(1, 0)
                .num(one(), -n, 1, 1)
                .num(b.clone(), 0, 1, 1)
                .den(one(), 1, 1, 1)
                .den(c.clone(), 0, 1, 1)
                .z(&c / &b, n);
            let lhs = truncated_sum_factored(&spec, n)?;
            let rhs = poch(&c / &b, 0, 1, n)?.div(&poch(c, 0, 1, n)?)?;
            (lhs, rhs)
        }
        IdentityId::JacksonSpec => {
            let t = params.t.unwrap_or_else(|| *[1, 2].choose(&mut rng).unwrap());
            let n = match params.n {
                Some(n) => n,
                None => {
                    let choices: alloc::vec::Vec<i64> =
                        (1..=10).filter(|n| (t * n).mod_floor(&3) == 1).collect();
                    *choices.choose(&mut rng).unwrap()
                }
            };
            if !(t == 1 || t == 2) || n < 1 || (t * n).mod_floor(&3) != 1 {
                return Err(non_terminating(format!("need t in {{1,2}}, n >= 1, tn = 1 mod 3 (t={t}, n={n})")));
            }
            let b = params.b.clone().unwrap_or_else(|| generic_rational(&mut rng, &[]));
            if b.is_zero() {
                return Err(bad("JACKSON_SPEC needs b != 0"));
            }
            shown.insert("t".into(), t.to_string());
            shown.insert("n".into(), n.to_string());
            shown.insert("b".into(), b.to_string());
            let tn = t * n;
            let l = (tn - 1) / 3;
            let spec = TermSpec::new(3, 1)
                .with_linear_factor()
                .num(one(), 1 - tn, 3, 1)
                .num(one(), 1 + tn, 3, 1)
                .num(b.clone(), 1, 3, 1)
                .num(b.recip(), 1, 3, 1)
                .num(one(), 1, 3, 2)
                .den(one(), 3 + tn, 3, 1)
                .den(one(), 3 - tn, 3, 1)
                .den(b.recip(), 3, 3, 1)
                .den(b.clone(), 3, 3, 1)
                .den(one(), 3, 3, 2)
                .z(one(), 3);
            let lhs = truncated_sum_factored(&spec, l)?;
            let num = poch(b.clone(), 2, 3, l)?
                .mul(&poch(b.recip(), 2, 3, l)?)
                .mul(&poch(one(), 2, 3, l)?);
            let den = poch(b.recip(), 3, 3, l)?
                .mul(&poch(b.clone(), 3, 3, l)?)
                .mul(&poch(one(), 3, 3, l)?);
            let rhs = FactoredRat::q_int(tn).mul(&num).div(&den)?;
            (lhs, rhs)
        }
        IdentityId::WhippleSpec => {
            let n = params.n.unwrap_or_else(|| 2 * rng.gen_range(0..=5) + 1);
            if n < 1 || n % 2 == 0 {
                return Err(non_terminating(format!("n = {n} must be odd and positive")));
            }
            let b = params.b.clone().unwrap_or_else(|| generic_rational(&mut rng, &[]));
            if b.is_zero() || b.is_one() || (-b.clone()).is_one() {
                return Err(bad("WHIPPLE_SPEC needs b not in {0, 1, -1}"));
            }
            shown.insert("n".into(), n.to_string());
            shown.insert("b".into(), b.to_string());
            let spec = TermSpec::new(2, 1)
                .with_linear_factor()
                .alternating()
                .num(one(), 1 - n, 2, 1)
                .num(one(), 1 + n, 2, 1)
                .num(b.clone(), 1, 2, 1)
                .num(b.recip(), 1, 2, 1)
                .num(one(), 2, 4, 1)
                .den(one(), 2 + n, 2, 1)
                .den(one(), 2 - n, 2, 1)
                .den(b.recip(), 2, 2, 1)
                .den(b.clone(), 2, 2, 1)
                .den(one(), 4, 4, 1)
                .z(one(), 1);
            let lhs = truncated_sum_factored(&spec, (n - 1) / 2)?;
            let rhs = if n % 4 == 1 {
                let l = (n - 1) / 4;
                let num = poch(b.clone(), 2, 4, l)?.mul(&poch(b.recip(), 2, 4, l)?);
                let den = poch(b.recip(), 4, 4, l)?.mul(&poch(b.clone(), 4, 4, l)?);
                FactoredRat::q_int(n).mul(&num).div(&den)?
            } else {
                let l = (n + 1) / 4;
                let num = poch(b.clone(), 0, 4, l)?.mul(&poch(b.recip(), 0, 4, l)?);
                let den = poch(b.recip(), 2, 4, l)?.mul(&poch(b.clone(), 2, 4, l)?);
                FactoredRat::q_int(n)
                    .mul(&FactoredRat::monomial(-one(), 1))
                    .mul(&num)
                    .div(&den)?
            };
            (lhs, rhs)
        }
        IdentityId::WatsonSpec => {
            let d = params.d.unwrap_or_else(|| rng.gen_range(3..=5));
            let t = params.t.unwrap_or_else(|| *[1, d - 1].choose(&mut rng).unwrap());
            let n = match params.n {
                Some(n) => n,
                None => {
                    let choices: alloc::vec::Vec<i64> = (1..=8).filter(|n| n.gcd(&d) == 1).collect();
                    *choices.choose(&mut rng).unwrap()
                }
            };
            if d < 2 || n < 1 || n.gcd(&d) != 1 || !(t == 1 || t == d - 1) {
                return Err(non_terminating(format!(
                    "need d >= 2, n >= 1, gcd(n, d) = 1, t in {{1, d-1}} (d={d}, n={n}, t={t})"
                )));
            }
            let tn = t * n;
            let r = match params.r {
                Some(r) => r,
                None => {
                    let choices: alloc::vec::Vec<i64> = (d + tn - d * n..=tn)
                        .filter(|r| (tn - r).mod_floor(&d) == 0)
                        .collect();
                    *choices.choose(&mut rng).unwrap()
                }
            };
            if r < d + tn - d * n || r > tn || (tn - r).mod_floor(&d) != 0 {
                return Err(non_terminating(format!(
                    "need d + tn - dn <= r <= tn and tn = r mod d (r={r})"
                )));
            }
            let b = params.b.clone().unwrap_or_else(|| generic_rational(&mut rng, &[]));
            let c = params.c.clone().unwrap_or_else(|| generic_rational(&mut rng, &[b.clone()]));
            if b.is_zero() || c.is_zero() || c.is_one() {
                return Err(bad("WATSON_SPEC needs b != 0 and c not in {0, 1}"));
            }
            for (k, v) in [("d", d), ("t", t), ("n", n), ("r", r)] {
                shown.insert(k.into(), v.to_string());
            }
            shown.insert("b".into(), b.to_string());
            shown.insert("c".into(), c.to_string());
            let l = (tn - r) / d;
            let spec = TermSpec::new(d, r)
                .with_linear_factor()
                .num(one(), r - tn, d, 1)
                .num(one(), r + tn, d, 1)
                .num(b.clone(), r, d, 1)
                .num(b.recip(), r, d, 1)
                .num(c.clone(), r, d, 1)
                .num(one(), r, d, 1)
                .den(one(), d + tn, d, 1)
                .den(one(), d - tn, d, 1)
                .den(b.recip(), d, d, 1)
                .den(b.clone(), d, d, 1)
                .den(c.recip(), d, d, 1)
                .den(one(), d, d, 1)
                .z(c.recip(), 2 * d - 3 * r);
            let lhs = truncated_sum_factored(&spec, l)?;
            let inner = TermSpec::new(d, r)
                .num(one(), d - r, d, 1)
                .num(c.clone(), r, d, 1)
                .num(one(), r + tn, d, 1)
                .num(one(), r - tn, d, 1)
                .den(one(), d, d, 1)
                .den(b.recip(), d, d, 1)
                .den(b.clone(), d, d, 1)
                .den(c.clone(), 2 * r, d, 1)
                .z(one(), d);
            let e = (r - tn) / d;
            let prefactor = FactoredRat::q_int(tn)
                .mul(&FactoredRat::monomial(rat_pow(&c, e), r * e))
                .mul(&poch(c.clone(), 2 * r, d, l)?)
                .div(&poch(c.recip(), d, d, l)?)?;
            let rhs = prefactor.mul(&truncated_sum_factored(&inner, l)?);
            (lhs, rhs)
        }
    };
    let equal = lhs.sub(&rhs).is_zero();
    Ok(IdentityOutcome {
        id,
        params: shown,
        equal,
        lhs,
        rhs,
    })
}
