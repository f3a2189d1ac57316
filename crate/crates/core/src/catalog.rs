//! The inventory of checkable statements and the runner that verifies them.
//!
//! A q-series entry pairs a summand shape (or a closed-form left side) with a
//! right side written in the expression syntax, a modulus shape and integer
//! side conditions. The generic parameters `a`, `b`, `c` are replaced by
//! seeded rationals; a parametric statement passes only if every trial does.
//! The `q -> 1` statements are delegated to [`crate::padic`].

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::{ArithError, BigRat};
use crate::congruence::{
    build_modulus, congruent_factored, sample_params_with, CongruenceError, Modulus, ModulusKind,
    ModulusTerm, ParamSample, Verdict,
};
use crate::expr::{eval_factored, parse_expr, Bindings, CongruenceSpec, ExprError, SpecInstance};
use crate::padic::{self, ClassicalParams, PadicError, DEFAULT_BUDGET};
use crate::poly::factored::FactoredRat;
use crate::qseries::{q_binomial, truncated_sum_factored, QSeriesError, TermSpec};
use crate::{MChoice, Valuation};

/// Seeded specializations per parametric statement.
pub const DEFAULT_TRIALS: u32 = 3;
/// Fresh samples drawn when a denominator meets the modulus.
pub const MAX_RESAMPLES: u32 = 5;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CatalogError {
    #[error("unknown statement `{0}`")]
    UnknownId(String),
    #[error("`{id}` needs a value for `{name}`")]
    MissingParameter { id: &'static str, name: &'static str },
    #[error("side condition violated: {0}")]
    SideConditionViolated(String),
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    QSeries(#[from] QSeriesError),
    #[error(transparent)]
    Congruence(#[from] CongruenceError),
    #[error(transparent)]
    Padic(#[from] PadicError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    /// A truncated sum against a closed form, no free parameters.
    Sum,
    /// A truncated sum with generic parameters `a`, `b`, `c`.
    Parametric,
    /// A congruence between closed forms.
    Lemma,
    /// An identity of rational functions.
    Exact,
    /// A rational congruence modulo a prime power.
    Classical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Statement {
    pub id: &'static str,
    pub description: &'static str,
    /// Integer parameters supplied by the caller.
    pub params: &'static [&'static str],
    /// Parameters drawn by the sampler.
    pub sampled: &'static [&'static str],
    pub conditions: &'static str,
    pub kind: Kind,
    /// Whether the sum may be cut at either of two points.
    pub two_truncations: bool,
}

const fn entry(
    id: &'static str,
    description: &'static str,
    params: &'static [&'static str],
    sampled: &'static [&'static str],
    conditions: &'static str,
    kind: Kind,
    two_truncations: bool,
) -> Statement {
    Statement { id, description, params, sampled, conditions, kind, two_truncations }
}

use Kind::*;

const STATEMENTS: [Statement; 39] = [
    entry(
        "THM_A",
        "alternating [4k+1] (q;q^2)^4 (q^2;q^4) sum modulo [n]Phi_n^4",
        &["n"],
        &[],
        "n odd; separate closed forms for n = 1 and n = 3 mod 4; M = (n-1)/2 or n-1",
        Sum,
        true,
    ),
    entry(
        "THM_B",
        "[6k+1] (q;q^3)^6 sum modulo [n]Phi_n^4, double-sum closed form",
        &["n"],
        &[],
        "n = 1 mod 3; M = (n-1)/3 or n-1",
        Sum,
        true,
    ),
    entry(
        "THM_C",
        "[6k+1] (q;q^3)^6 sum = 5[2n](q^2;q^3)^3/(q^3;q^3)^3 modulo [n]Phi_n^5",
        &["n"],
        &[],
        "n = 2 mod 3; M = (2n-1)/3 or n-1",
        Sum,
        true,
    ),
    entry(
        "GS_16",
        "[6k+1] (q;q^3)^6 sum to n-1 vanishes modulo [n] or [n]Phi_n",
        &["n"],
        &[],
        "n = 1 mod 3 (modulo [n]) or n = 2 mod 3 (modulo [n]Phi_n)",
        Sum,
        false,
    ),
    entry(
        "GWY",
        "the THM_A sum modulo [n]Phi_n^2",
        &["n"],
        &[],
        "n odd; M = (n-1)/2 or n-1",
        Sum,
        true,
    ),
    entry(
        "PROP_2_1",
        "parametric THM_A sum modulo (1-aq^n)(a-q^n)(1-bq^n)(b-q^n)",
        &["n"],
        &["a", "b"],
        "n odd; M = (n-1)/2 or n-1",
        Parametric,
        true,
    ),
    entry(
        "THM_2_2",
        "parametric THM_A sum modulo [n](1-aq^n)(a-q^n)(1-bq^n)(b-q^n)",
        &["n"],
        &["a", "b"],
        "n odd; M = (n-1)/2 or n-1",
        Parametric,
        true,
    ),
    entry(
        "NW_A",
        "six-parameter [2dk+r] sum to mu vanishes modulo [n]",
        &["n", "d", "r"],
        &["a", "b", "c"],
        "n, d >= 1; gcd(n, d) = 1; d mu = -r mod n with 0 <= mu <= n-1",
        Parametric,
        false,
    ),
    entry(
        "NW_B",
        "six-parameter [2dk+r] sum to n-1 vanishes modulo [n]",
        &["n", "d", "r"],
        &["a", "b", "c"],
        "n, d >= 1; gcd(n, d) = 1",
        Parametric,
        false,
    ),
    entry(
        "LEM_REL",
        "(q;q^2)_n/(q^2;q^2)_n = [2n choose n]/(-q;q)_n^2",
        &["n"],
        &[],
        "n >= 0",
        Exact,
        false,
    ),
    entry(
        "LEM_WEI_K",
        "-[n]^3 q^(1-n)/(1+q)^2 (q^4;q^4)^2/(q^6;q^4)^2 vanishes modulo [n]",
        &["n"],
        &[],
        "n = 3 mod 4",
        Lemma,
        false,
    ),
    entry(
        "LEM_WEI_M",
        "[n]^2 (q^3;q^4)/(q^5;q^4) vanishes modulo [n]",
        &["n"],
        &[],
        "n odd",
        Lemma,
        false,
    ),
    entry(
        "LEM_WEI_N",
        "the LEM_WEI_K form equals [n]^2 q^((1-n)/2)(q^3;q^4)/(q^5;q^4) modulo [n]Phi_n^4",
        &["n"],
        &[],
        "n = 3 mod 4",
        Lemma,
        false,
    ),
    entry(
        "PROP_3_1",
        "parametric [6k+1] sum modulo (1-aq^tn)(a-q^tn)(1-bq^tn)(b-q^tn)",
        &["n", "t"],
        &["a", "b"],
        "t in {1, 2}; n = t mod 3; T = (tn-1)/3 or n-1",
        Parametric,
        true,
    ),
    entry(
        "THM_3_2",
        "parametric [6k+1] sum modulo [n](1-aq^n)(a-q^n)(1-bq^n)(b-q^n)",
        &["n"],
        &["a", "b"],
        "n = 1 mod 3; M = (n-1)/3 or n-1",
        Parametric,
        true,
    ),
    entry(
        "THM_3_3",
        "parametric [6k+1] sum modulo [n]Phi_n(1-aq^2n)(a-q^2n)(1-bq^2n)(b-q^2n)",
        &["n"],
        &["a", "b"],
        "n = 2 mod 3; M = (2n-1)/3 or n-1",
        Parametric,
        true,
    ),
    entry(
        "NW_23",
        "four-parameter [2dk+r] sum vanishes modulo [n]Phi_n",
        &["n", "d", "r"],
        &["a", "b"],
        "n > 1; d >= 3; r = +-1; n >= d-r; gcd(n, d) = 1; n = -r mod d; nu = (dn-n-r)/d or n-1",
        Parametric,
        true,
    ),
    entry(
        "LEM_OO",
        "the THM_C sum against the double-sum form in [2n] modulo [n]Phi_n^5",
        &["n"],
        &[],
        "n = 2 mod 3; M = (2n-1)/3 or n-1",
        Sum,
        true,
    ),
    entry(
        "LEM_PP",
        "1 + [2n]^2(2-q^2n) sum_j (q^(3j-1)/[3j-1]^2 - q^3j/[3j]^2) = 5 modulo Phi_n^2",
        &["n"],
        &[],
        "n = 2 mod 3",
        Lemma,
        false,
    ),
    entry(
        "THM_D",
        "[2dk+r] (q^r;q^d)^5 (cq^r;q^d) sum modulo [n]Phi_n^4, double-series form",
        &["n", "d", "r"],
        &["c"],
        "d + n - dn <= r <= n; gcd(n, d) = 1; n = r mod d; M = (n-r)/d or n-1",
        Parametric,
        true,
    ),
    entry(
        "THM_E",
        "[2dk+r] (q^r;q^d)^6 sum modulo [n]Phi_n^5, double-series form",
        &["n", "d", "r"],
        &[],
        "r = +-1; n + r >= d >= 3; gcd(n, d) = 1; n = -r mod d; M = (dn-n-r)/d or n-1",
        Sum,
        true,
    ),
    entry(
        "PROP_5_3",
        "parametric [2dk+r] sum modulo (1-aq^tn)(a-q^tn)(1-bq^tn)(b-q^tn)",
        &["n", "d", "r", "t"],
        &["a", "b", "c"],
        "t in {1, d-1}; d + tn - dn <= r <= tn; gcd(n, d) = 1; tn = r mod d; T = (tn-r)/d or n-1",
        Parametric,
        true,
    ),
    entry(
        "THM_5_4",
        "parametric [2dk+r] sum modulo [n](1-aq^n)(a-q^n)(1-bq^n)(b-q^n)",
        &["n", "d", "r"],
        &["a", "b", "c"],
        "d + n - dn <= r <= n; gcd(n, d) = 1; n = r mod d; M = (n-r)/d or n-1",
        Parametric,
        true,
    ),
    entry(
        "THM_5_5",
        "parametric [2dk+r] sum modulo [n]Phi_n(1-aq^(dn-n))(a-q^(dn-n))(1-bq^(dn-n))(b-q^(dn-n))",
        &["n", "d", "r"],
        &["a", "b"],
        "r = +-1; n + r >= d >= 3; gcd(n, d) = 1; n = -r mod d; M = (dn-n-r)/d or n-1",
        Parametric,
        true,
    ),
    entry(
        "COR_1_4",
        "alternating (4k+1)(1/2)_k^5/k!^5 sum modulo p^(s+4)",
        &["p", "s"],
        &[],
        "p odd prime; m = (p^s-1)/2 or p^s-1",
        Classical,
        true,
    ),
    entry(
        "COR_1_5",
        "(6k+1)(1/3)_k^6/k!^6 sum modulo p^(s+4)",
        &["p", "s"],
        &[],
        "p^s = 1 mod 3; m = (p^s-1)/3 or p^s-1",
        Classical,
        true,
    ),
    entry(
        "COR_1_6",
        "(6k+1)(1/3)_k^6/k!^6 sum = 10p^s (2/3)^3/(1)^3 modulo p^(s+5)",
        &["p", "s"],
        &[],
        "p^s = 2 mod 3; m = (2p^s-1)/3 or p^s-1",
        Classical,
        true,
    ),
    entry(
        "PROP_1_7",
        "alternating (4k+1) sum against Gamma_p(1/4)^4",
        &["p"],
        &[],
        "p > 5; modulo p^4 for p = 1 mod 4, p^3 for p = 3 mod 4",
        Classical,
        false,
    ),
    entry(
        "PROP_1_8",
        "(6k+1)(1/3)_k^6/k!^6 sum against Gamma_p(1/3)^9",
        &["p"],
        &[],
        "modulo p^4 for p = 1 mod 3, p^5 for p = 2 mod 3",
        Classical,
        false,
    ),
    entry(
        "VH_A2",
        "alternating (4k+1)(1/2)_k^5/k!^5 sum to (p-1)/2 modulo p^3",
        &["p"],
        &[],
        "p odd prime",
        Classical,
        false,
    ),
    entry(
        "VH_D2",
        "(6k+1)(1/3)_k^6/k!^6 sum to (p-1)/3 = -p Gamma_p(1/3)^9 modulo p^4",
        &["p"],
        &[],
        "p = 1 mod 6",
        Classical,
        false,
    ),
    entry(
        "LIU",
        "alternating (4k+1) sum = -p^3/16 Gamma_p(1/4)^4 modulo p^4",
        &["p"],
        &[],
        "p > 5; p = 3 mod 4",
        Classical,
        false,
    ),
    entry(
        "LR",
        "(6k+1)(1/3)_k^6/k!^6 sum to p-1 modulo p^6",
        &["p"],
        &[],
        "p > 3",
        Classical,
        false,
    ),
    entry(
        "COR_5_E",
        "(2dk+r)(r/d)_k^6/k!^6 sum, double-series form, modulo p^(s+4)",
        &["p", "s", "d", "r"],
        &[],
        "see THM_D at n = p^s, c = 1",
        Classical,
        true,
    ),
    entry(
        "COR_5_G",
        "(2dk+1)(1/d)_k^6/k!^6 sum, double-series form, modulo p^(s+4)",
        &["p", "s", "d", "r"],
        &[],
        "see THM_D at n = p^s, c = 1, r = 1",
        Classical,
        true,
    ),
    entry(
        "COR_5_H",
        "(2dk+r)(r/d)_k^6/k!^6 sum, double-series form, modulo p^(s+5)",
        &["p", "s", "d", "r"],
        &[],
        "see THM_E at n = p^s",
        Classical,
        true,
    ),
    entry(
        "SUN_H2",
        "H_(p-1)^(2) against B_(p-3) modulo p^2",
        &["p"],
        &[],
        "p > 3",
        Classical,
        false,
    ),
    entry(
        "SUN_H2HALF",
        "H_((p-1)/2)^(2) against B_(p-3) modulo p^2",
        &["p"],
        &[],
        "p > 3",
        Classical,
        false,
    ),
    entry(
        "SUN_H3",
        "H_(floor(p/4))^(3) against B_(p-3) modulo p",
        &["p"],
        &[],
        "p > 5",
        Classical,
        false,
    ),
];

pub fn list_statements() -> &'static [Statement] {
    &STATEMENTS
}

pub fn statement(id: &str) -> Option<&'static Statement> {
    STATEMENTS.iter().find(|s| s.id == id)
}

/// What to verify: a statement id with its parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Request {
    pub id: String,
    pub n: Option<i64>,
    pub d: Option<i64>,
    pub r: Option<i64>,
    pub t: Option<i64>,
    pub p: Option<u64>,
    pub s: Option<u32>,
    /// Fixes `c` instead of sampling it.
    pub c: Option<BigRat>,
    pub m_choice: MChoice,
    pub seed: u64,
    pub trials: u32,
    pub budget: u64,
    /// Multiply the right side by `q`. A negative control: it must fail.
    pub corrupt: bool,
}

impl Request {
    pub fn new(id: &str) -> Request {
        Request {
            id: id.to_string(),
            n: None,
            d: None,
            r: None,
            t: None,
            p: None,
            s: None,
            c: None,
            m_choice: MChoice::First,
            seed: 0,
            trials: DEFAULT_TRIALS,
            budget: DEFAULT_BUDGET,
            corrupt: false,
        }
    }

    pub fn n(mut self, n: i64) -> Request {
        self.n = Some(n);
        self
    }

    pub fn d(mut self, d: i64) -> Request {
        self.d = Some(d);
        self
    }

    pub fn r(mut self, r: i64) -> Request {
        self.r = Some(r);
        self
    }

    pub fn t(mut self, t: i64) -> Request {
        self.t = Some(t);
        self
    }

    pub fn p(mut self, p: u64) -> Request {
        self.p = Some(p);
        self
    }

    pub fn s(mut self, s: u32) -> Request {
        self.s = Some(s);
        self
    }

    pub fn c(mut self, c: BigRat) -> Request {
        self.c = Some(c);
        self
    }

    pub fn m_choice(mut self, m: MChoice) -> Request {
        self.m_choice = m;
        self
    }

    pub fn seed(mut self, seed: u64) -> Request {
        self.seed = seed;
        self
    }

    pub fn trials(mut self, trials: u32) -> Request {
        self.trials = trials;
        self
    }

    pub fn corrupted(mut self) -> Request {
        self.corrupt = true;
        self
    }
}

/// Integer data of a request after its side conditions have been checked.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Resolved {
    pub statement: &'static Statement,
    pub n: i64,
    pub d: Option<i64>,
    pub r: Option<i64>,
    pub t: Option<i64>,
    pub branch: &'static str,
    /// The truncation point of the sum, if there is one.
    pub m: Option<i64>,
    /// Set when the statement offers two truncation points.
    pub m_choice: Option<MChoice>,
    lets: Vec<(&'static str, i64)>,
    /// Parameters still to be drawn.
    sampled: Vec<&'static str>,
    fixed: BTreeMap<String, BigRat>,
    sample_t: i64,
}

fn violated(msg: String) -> CatalogError {
    CatalogError::SideConditionViolated(msg)
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), CatalogError> {
    if ok {
        Ok(())
    } else {
        Err(violated(msg()))
    }
}

/// `x` with `d x = -r (mod n)`, `0 <= x < n`.
fn solve_mu(n: i64, d: i64, r: i64) -> Option<i64> {
    let g = d.extended_gcd(&n);
    if g.gcd != 1 {
        return None;
    }
    Some((-r * g.x).mod_floor(&n))
}

/// Check the side conditions of a q-series statement.
pub fn resolve(req: &Request) -> Result<Resolved, CatalogError> {
    let st = statement(&req.id).ok_or_else(|| CatalogError::UnknownId(req.id.clone()))?;
    if st.kind == Classical {
        return Err(CatalogError::UnknownId(req.id.clone()));
    }
    let need = |name: &'static str, v: Option<i64>| v.ok_or(CatalogError::MissingParameter { id: st.id, name });
    let n = need("n", req.n)?;
    let takes = |name: &str| st.params.contains(&name);
    let d = if takes("d") { Some(need("d", req.d)?) } else { None };
    let r = if takes("r") { Some(need("r", req.r)?) } else { None };
    let t = if takes("t") { Some(need("t", req.t)?) } else { None };
    if st.id == "LEM_REL" {
        ensure(n >= 0, || format!("n = {n} must be nonnegative"))?;
    } else {
        ensure(n >= 1, || format!("n = {n} must be positive"))?;
    }
    let second = st.two_truncations && req.m_choice == MChoice::Second;
    let pick = |first: i64| if second { n - 1 } else { first };
    let mut branch = "";
    let mut m = None;
    let mut lets: Vec<(&'static str, i64)> = Vec::new();
    let mut fixed = BTreeMap::new();
    let mut sample_t = 1;
    let odd = || ensure(n % 2 == 1, || format!("n = {n} is even"));
    let residue = |modulus: i64, want: i64| {
        ensure(n.mod_floor(&modulus) == want.mod_floor(&modulus), || {
            format!("n = {n} is not {} mod {modulus}", want.mod_floor(&modulus))
        })
    };
    let coprime = |d: i64| ensure(d >= 1 && n.gcd(&d) == 1, || format!("gcd(n, d) = gcd({n}, {d}) must be 1"));
    let plus_minus_one = |r: i64| ensure(r == 1 || r == -1, || format!("r = {r} must be 1 or -1"));

    match st.id {
        "THM_A" | "GWY" | "PROP_2_1" | "THM_2_2" => {
            odd()?;
            branch = if n % 4 == 1 { "n = 1 mod 4" } else { "n = 3 mod 4" };
            m = Some(pick((n - 1) / 2));
        }
        "THM_B" | "THM_3_2" => {
            residue(3, 1)?;
            branch = "n = 1 mod 3";
            lets.push(("L", (n - 1) / 3));
            m = Some(pick((n - 1) / 3));
        }
        "THM_C" | "THM_3_3" | "LEM_OO" => {
            residue(3, 2)?;
            branch = "n = 2 mod 3";
            lets.push(("L", (2 * n - 1) / 3));
            m = Some(pick((2 * n - 1) / 3));
            if st.id == "THM_3_3" {
                sample_t = 2;
            }
        }
        "LEM_PP" => {
            residue(3, 2)?;
            branch = "n = 2 mod 3";
        }
        "GS_16" => {
            branch = match n % 3 {
                1 => "n = 1 mod 3",
                2 => "n = 2 mod 3",
                _ => return Err(violated(format!("n = {n} is divisible by 3"))),
            };
            m = Some(n - 1);
        }
        "NW_A" | "NW_B" => {
            let (d, r) = (d.unwrap(), r.unwrap());
            coprime(d)?;
            m = Some(if st.id == "NW_A" { solve_mu(n, d, r).expect("coprime") } else { n - 1 });
        }
        "LEM_REL" => {}
        "LEM_WEI_K" | "LEM_WEI_N" => residue(4, 3)?,
        "LEM_WEI_M" => odd()?,
        "PROP_3_1" => {
            let t = t.unwrap();
            ensure(t == 1 || t == 2, || format!("t = {t} must be 1 or 2"))?;
            residue(3, t)?;
            branch = if t == 1 { "t = 1" } else { "t = 2" };
            lets.push(("L", (t * n - 1) / 3));
            m = Some(pick((t * n - 1) / 3));
            sample_t = t;
        }
        "NW_23" | "THM_E" | "THM_5_5" => {
            let (d, r) = (d.unwrap(), r.unwrap());
            plus_minus_one(r)?;
            ensure(d >= 3, || format!("d = {d} must be at least 3"))?;
            if st.id == "NW_23" {
                ensure(n > 1, || "n must exceed 1".into())?;
            }
            ensure(n + r >= d, || format!("n + r = {} must be at least d = {d}", n + r))?;
            coprime(d)?;
            residue(d, -r)?;
            let e = d * n - n;
            lets.push(("m", e));
            lets.push(("L", (e - r) / d));
            m = Some(pick((e - r) / d));
            sample_t = d - 1;
            if st.id != "NW_23" {
                fixed.insert("c".to_string(), BigRat::one());
            }
        }
        "THM_D" | "THM_5_4" | "PROP_5_3" => {
            let (d, r) = (d.unwrap(), r.unwrap());
            let t = match t {
                Some(t) => {
                    ensure(t == 1 || t == d - 1, || format!("t = {t} must be 1 or d - 1 = {}", d - 1))?;
                    t
                }
                None => 1,
            };
            coprime(d)?;
            let tn = t * n;
            ensure(d + tn - d * n <= r && r <= tn, || {
                format!("r = {r} must lie in [{}, {tn}]", d + tn - d * n)
            })?;
            ensure((tn - r).mod_floor(&d) == 0, || format!("tn - r = {} is not divisible by d = {d}", tn - r))?;
            lets.push(("m", tn));
            lets.push(("L", (tn - r) / d));
            m = Some(pick((tn - r) / d));
            sample_t = t;
        }
        _ => unreachable!("every q-series id has side conditions"),
    }

    if let Some(c) = &req.c {
        if st.sampled.contains(&"c") {
            if c.is_zero() {
                return Err(violated("c must be nonzero".into()));
            }
            fixed.insert("c".to_string(), c.clone());
        }
    }
    let sampled = st.sampled.iter().copied().filter(|s| !fixed.contains_key(*s)).collect();
    Ok(Resolved {
        statement: st,
        n,
        d,
        r,
        t,
        branch,
        m,
        m_choice: st.two_truncations.then_some(req.m_choice),
        lets,
        sampled,
        fixed,
        sample_t,
    })
}

/// A fully evaluated statement instance.
#[derive(Debug, Clone, PartialEq)]
pub struct CongruenceInstance {
    pub id: String,
    pub n: i64,
    pub d: Option<i64>,
    pub r: Option<i64>,
    pub t: Option<i64>,
    pub branch: &'static str,
    pub m: Option<i64>,
    pub m_choice: Option<MChoice>,
    pub params: Option<ParamSample>,
    pub lhs: FactoredRat,
    pub rhs: FactoredRat,
    /// `None` for identities, which must hold exactly.
    pub modulus: Option<Modulus>,
    /// Further congruences implied by the statement, checked alongside it.
    pub checks: Vec<SideCheck>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SideCheck {
    pub label: String,
    pub lhs: FactoredRat,
    pub rhs: FactoredRat,
    pub modulus: Modulus,
}

const THM_A_1: &str = "qint(n)*poch(q^2; q^4; (n-1)/4)^2/poch(q^4; q^4; (n-1)/4)^2\
    *(1 + qint(n)^2*sum(j, 1, (n-1)/2, (-1)^(j+1)*q^(2*j-n)/qint(2*j)^2))";
const THM_A_3: &str = "qint(n)^2*q^((1-n)/2)*poch(q^3; q^4; (n-1)/2)/poch(q^5; q^4; (n-1)/2)";
/// The earlier form modulo `[n]Phi_n^3`, with `q^((1+n)/2)`.
const THM_A_3_CUBIC: &str = "qint(n)^2*q^((1+n)/2)*poch(q^3; q^4; (n-1)/2)/poch(q^5; q^4; (n-1)/2)";
const GWY_1: &str = "qint(n)*poch(q^2; q^4; (n-1)/4)^2/poch(q^4; q^4; (n-1)/4)^2";
const THM_B: &str = "qint(n)*poch(q^2; q^3; L)^3/poch(q^3; q^3; L)^3\
    *(1 + qint(n)^2*(2 - q^n)*sum(j, 1, L, q^(3*j-1)/qint(3*j-1)^2 - q^(3*j)/qint(3*j)^2))";
const THM_C: &str = "5*qint(2*n)*poch(q^2; q^3; L)^3/poch(q^3; q^3; L)^3";
const LEM_OO: &str = "qint(2*n)*poch(q^2; q^3; L)^3/poch(q^3; q^3; L)^3\
    *(1 + qint(2*n)^2*(2 - q^(2*n))*sum(j, 1, L, q^(3*j-1)/qint(3*j-1)^2 - q^(3*j)/qint(3*j)^2))";
const LEM_PP: &str = "1 + qint(2*n)^2*(2 - q^(2*n))\
    *sum(j, 1, (2*n-1)/3, q^(3*j-1)/qint(3*j-1)^2 - q^(3*j)/qint(3*j)^2)";
const WEI_K: &str = "-qint(n)^3*q^(1-n)/(1 + q)^2*poch(q^4; q^4; (n-3)/4)^2/poch(q^6; q^4; (n-3)/4)^2";
const WEI_M: &str = "qint(n)^2*poch(q^3; q^4; (n-1)/2)/poch(q^5; q^4; (n-1)/2)";
const REL_LHS: &str = "poch(q; q^2; n)/poch(q^2; q^2; n)";
/// Shared by THM_D (`m = n`) and THM_E (`m = dn - n`, `c = 1`).
const DOUBLE_SERIES: &str = "qint(m)*(c*q^r)^((r-m)/d)*poch(c*q^(2*r); q^d; L)/poch(q^d/c; q^d; L)\
    *sum(k, 0, L, poch(q^r; q^d; k)^2*poch(q^(d-r); q^d; k)*poch(c*q^r; q^d; k)*q^(d*k)\
    /(poch(q^d; q^d; k)^3*poch(c*q^(2*r); q^d; k))\
    *(1 - qint(m)^2*(2 - q^m)*sum(j, 1, k, q^(d*j)/qint(d*j)^2 + q^(d*j-d+r)/qint(d*j-d+r)^2)))";

/// `(1 - y q^m)(y - q^m)(-1 - x^2 + x q^m) / ((x - y)(1 - xy))`.
fn theta(x: &str, y: &str) -> String {
    format!("(1 - {y}*q^m)*({y} - q^m)*(-1 - {x}^2 + {x}*q^m)/(({x} - {y})*(1 - {x}*{y}))")
}

/// `[n](-x q^-n)(1 - y q^n)(y - q^n) / ((x - y)(1 - xy))`.
fn omega(x: &str, y: &str) -> String {
    format!("qint(n)*(-{x}*q^(-n))*(1 - {y}*q^n)*({y} - q^n)/(({x} - {y})*(1 - {x}*{y}))")
}

fn symmetrized(f: impl Fn(&str, &str) -> String) -> String {
    format!("{} + {}", f("a", "b"), f("b", "a"))
}

fn parametric_quartic_rhs(n: i64) -> String {
    if n % 4 == 1 {
        symmetrized(|x, y| {
            format!(
                "{}*poch({y}*q^2; q^4; (n-1)/4)*poch(q^2/{y}; q^4; (n-1)/4)\
                 /(poch(q^4/{y}; q^4; (n-1)/4)*poch({y}*q^4; q^4; (n-1)/4))",
                omega(x, y)
            )
        })
    } else {
        symmetrized(|x, y| {
            format!(
                "{}*(-q)*poch({y}; q^4; (n+1)/4)*poch(1/{y}; q^4; (n+1)/4)\
                 /(poch(q^2/{y}; q^4; (n+1)/4)*poch({y}*q^2; q^4; (n+1)/4))",
                omega(x, y)
            )
        })
    }
}

/// The right side shared by the parametric `[6k+1]` statements, at `m = tn`.
fn parametric_sextic_rhs() -> String {
    let inner = symmetrized(|x, y| {
        format!(
            "{}*poch({y}*q^2; q^3; L)*poch(q^2/{y}; q^3; L)*poch(q^2; q^3; L)\
             /(poch(q^3/{y}; q^3; L)*poch({y}*q^3; q^3; L)*poch(q^3; q^3; L))",
            theta(x, y)
        )
    });
    format!("qint(m)*({inner})")
}

/// The right side shared by the parametric `[2dk+r]` statements, at `m = tn`.
fn parametric_general_rhs() -> String {
    let inner = symmetrized(|x, y| {
        format!(
            "{}*sum(k, 0, L, poch({x}*q^r; q^d; k)*poch(q^r/{x}; q^d; k)*poch(c*q^r; q^d; k)*poch(q^(d-r); q^d; k)\
             /(poch({y}*q^d; q^d; k)*poch(q^d/{y}; q^d; k)*poch(c*q^(2*r); q^d; k)*poch(q^d; q^d; k))*q^(d*k))",
            theta(x, y)
        )
    });
    format!("qint(m)*(c*q^r)^((r-m)/d)*poch(c*q^(2*r); q^d; L)/poch(q^d/c; q^d; L)*({inner})")
}

/// `[2dk+r] (x q^r, q^r/x; q^d)_k / (q^d/x, x q^d; q^d)_k` over `pairs`,
/// times `(q^r; q^d)_k^plain / (q^d; q^d)_k^plain`.
fn well_poised(d: i64, r: i64, pairs: &[&BigRat], plain: u32) -> TermSpec {
    let one = BigRat::one();
    let mut s = TermSpec::new(d, r).with_linear_factor();
    for x in pairs {
        let inv = x.recip();
        s = s
            .num((*x).clone(), r, d, 1)
            .num(inv.clone(), r, d, 1)
            .den(inv, d, d, 1)
            .den((*x).clone(), d, d, 1);
    }
    if plain > 0 {
        s = s.num(one.clone(), r, d, plain).den(one, d, d, plain);
    }
    s
}

fn quartic_sum(pairs: &[&BigRat]) -> TermSpec {
    let one = BigRat::one();
    let mut s = TermSpec::new(2, 1).with_linear_factor().alternating();
    if pairs.is_empty() {
        s = s.num(one.clone(), 1, 2, 4).den(one.clone(), 2, 2, 4);
    }
    for x in pairs {
        let inv = x.recip();
        s = s.num((*x).clone(), 1, 2, 1).num(inv.clone(), 1, 2, 1).den(inv, 2, 2, 1).den((*x).clone(), 2, 2, 1);
    }
    s.num(one.clone(), 2, 4, 1).den(one.clone(), 4, 4, 1).z(one, 1)
}

fn sextic_sum() -> TermSpec {
    well_poised(3, 1, &[], 6).z(BigRat::one(), 3)
}

fn eval_str(src: &str, b: &Bindings) -> Result<FactoredRat, CatalogError> {
    Ok(eval_factored(&parse_expr(src)?, b)?)
}

fn kind_qint_phi(k: u32) -> ModulusKind {
    if k == 0 {
        ModulusKind::qint()
    } else {
        ModulusKind::qint_phi(k)
    }
}

/// Evaluate both sides and the modulus of a resolved statement at the
/// parameter values `vals`.
pub fn build(
    res: &Resolved,
    vals: &BTreeMap<String, BigRat>,
    corrupt: bool,
) -> Result<CongruenceInstance, CatalogError> {
    let id = res.statement.id;
    let n = res.n;
    let mut b = Bindings::new().with_int("n", n);
    for (name, v) in [("d", res.d), ("r", res.r), ("t", res.t)] {
        if let Some(v) = v {
            b.set_int(name, v);
        }
    }
    for (name, v) in &res.lets {
        b.set_int(name, *v);
    }
    for (name, v) in vals {
        b.set(name, v.clone());
    }
    let get = |s: &str| vals.get(s).expect("sampled parameter");
    let m = res.m.unwrap_or(0);
    let (d, r) = (res.d.unwrap_or(0), res.r.unwrap_or(0));
    let zero = FactoredRat::zero;
    let one = BigRat::one();
    let sum = |spec: TermSpec| truncated_sum_factored(&spec, m);
    let mut checks = Vec::new();
    let none = BTreeMap::new();
    let modulus_at = |kind: ModulusKind| build_modulus(&kind, n, vals);

    let (lhs, rhs, kind): (FactoredRat, FactoredRat, Option<ModulusKind>) = match id {
        "THM_A" | "GWY" => {
            let lhs = sum(quartic_sum(&[]))?;
            let one_mod_4 = n % 4 == 1;
            if id == "GWY" {
                let rhs = if one_mod_4 { eval_str(GWY_1, &b)? } else { zero() };
                (lhs, rhs, Some(ModulusKind::qint_phi(2)))
            } else {
                let rhs = eval_str(if one_mod_4 { THM_A_1 } else { THM_A_3 }, &b)?;
                // the statement contains the weaker ones it generalizes
                let weaker: Vec<(FactoredRat, u32)> = if one_mod_4 {
                    vec![(eval_str(GWY_1, &b)?, 2)]
                } else {
                    vec![(eval_str(THM_A_3_CUBIC, &b)?, 3), (zero(), 2)]
                };
                for (w, k) in weaker {
                    let modulus = build_modulus(&ModulusKind::qint_phi(k), n, &none)?;
                    checks.push(SideCheck {
                        label: format!("earlier form modulo {}", modulus.label()),
                        lhs: lhs.clone(),
                        rhs: w,
                        modulus,
                    });
                }
                (lhs, rhs, Some(ModulusKind::qint_phi(4)))
            }
        }
        "THM_B" => (sum(sextic_sum())?, eval_str(THM_B, &b)?, Some(ModulusKind::qint_phi(4))),
        "THM_C" => (sum(sextic_sum())?, eval_str(THM_C, &b)?, Some(ModulusKind::qint_phi(5))),
        "LEM_OO" => (sum(sextic_sum())?, eval_str(LEM_OO, &b)?, Some(ModulusKind::qint_phi(5))),
        "GS_16" => {
            let k = if n % 3 == 1 { 0 } else { 1 };
            (sum(sextic_sum())?, zero(), Some(kind_qint_phi(k)))
        }
        "PROP_2_1" | "THM_2_2" => {
            let lhs = sum(quartic_sum(&[get("a"), get("b")]))?;
            let rhs = eval_str(&parametric_quartic_rhs(n), &b)?;
            let mut kind = ModulusKind::specialized(1);
            if id == "THM_2_2" {
                kind = ModulusKind::qint().times(kind);
            }
            (lhs, rhs, Some(kind))
        }
        "NW_A" | "NW_B" => {
            let c = get("c");
            let spec = well_poised(d, r, &[get("a"), get("b")], 1)
                .num(c.recip(), r, d, 1)
                .den(c.clone(), d, d, 1)
                .z(c.clone(), 2 * d - 3 * r);
            (sum(spec)?, zero(), Some(ModulusKind::qint()))
        }
        "NW_23" => {
            let spec = well_poised(d, r, &[get("a"), get("b")], 2).z(one, 2 * d - 3 * r);
            (sum(spec)?, zero(), Some(ModulusKind::qint_phi(1)))
        }
        "PROP_3_1" | "THM_3_2" | "THM_3_3" => {
            let t = match id {
                "PROP_3_1" => res.t.unwrap(),
                "THM_3_2" => 1,
                _ => 2,
            };
            b.set_int("m", t * n);
            let spec = well_poised(3, 1, &[get("a"), get("b")], 2).z(one, 3);
            let kind = match id {
                "PROP_3_1" => ModulusKind::specialized(t),
                "THM_3_2" => ModulusKind::qint().times(ModulusKind::specialized(1)),
                _ => ModulusKind::qint_phi(1).times(ModulusKind::specialized(2)),
            };
            (sum(spec)?, eval_str(&parametric_sextic_rhs(), &b)?, Some(kind))
        }
        "THM_D" | "THM_E" => {
            let spec = if id == "THM_D" {
                let c = get("c");
                well_poised(d, r, &[], 5).num(c.clone(), r, d, 1).den(c.recip(), d, d, 1).z(c.recip(), 2 * d - 3 * r)
            } else {
                well_poised(d, r, &[], 6).z(one, 2 * d - 3 * r)
            };
            let k = if id == "THM_D" { 4 } else { 5 };
            (sum(spec)?, eval_str(DOUBLE_SERIES, &b)?, Some(ModulusKind::qint_phi(k)))
        }
        "PROP_5_3" | "THM_5_4" | "THM_5_5" => {
            let c = get("c");
            let spec = well_poised(d, r, &[get("a"), get("b")], 1)
                .num(c.clone(), r, d, 1)
                .den(c.recip(), d, d, 1)
                .z(c.recip(), 2 * d - 3 * r);
            let kind = match id {
                "PROP_5_3" => ModulusKind::specialized(res.t.unwrap()),
                "THM_5_4" => ModulusKind::qint().times(ModulusKind::specialized(1)),
                _ => ModulusKind::qint_phi(1).times(ModulusKind::specialized(d - 1)),
            };
            (sum(spec)?, eval_str(&parametric_general_rhs(), &b)?, Some(kind))
        }
        "LEM_REL" => {
            let lhs = eval_str(REL_LHS, &b)?;
            let binom = FactoredRat::from_poly(q_binomial(2 * n, n)?);
            let rhs = binom.div(&eval_str("poch(-q; q; n)^2", &b)?).map_err(CongruenceError::from)?;
            (lhs, rhs, None)
        }
        "LEM_WEI_K" => (eval_str(WEI_K, &b)?, zero(), Some(ModulusKind::qint())),
        "LEM_WEI_M" => (eval_str(WEI_M, &b)?, zero(), Some(ModulusKind::qint())),
        "LEM_WEI_N" => (eval_str(WEI_K, &b)?, eval_str(THM_A_3, &b)?, Some(ModulusKind::qint_phi(4))),
        "LEM_PP" => (eval_str(LEM_PP, &b)?, FactoredRat::from_int(5), Some(ModulusKind::phi(2))),
        _ => unreachable!("resolved ids are q-series statements"),
    };
    let rhs = if corrupt { rhs.mul(&FactoredRat::monomial(BigRat::one(), 1)) } else { rhs };
    let modulus = kind.map(modulus_at).transpose()?;
    let params = (!vals.is_empty()).then(|| ParamSample {
        seed: 0,
        assignments: vals.clone(),
        rejection_count: 0,
    });
    Ok(CongruenceInstance {
        id: id.to_string(),
        n,
        d: res.d,
        r: res.r,
        t: res.t,
        branch: res.branch,
        m: res.m,
        m_choice: res.m_choice,
        params,
        lhs,
        rhs,
        modulus,
        checks,
    })
}

/// Draw the generic parameters for one trial and build the instance.
pub fn instantiate(req: &Request, trial: u32, attempt: u32) -> Result<CongruenceInstance, CatalogError> {
    let res = resolve(req)?;
    instantiate_resolved(&res, req, trial, attempt)
}

fn instantiate_resolved(
    res: &Resolved,
    req: &Request,
    trial: u32,
    attempt: u32,
) -> Result<CongruenceInstance, CatalogError> {
    let mut vals = res.fixed.clone();
    let mut sample = None;
    if !res.sampled.is_empty() {
        let labels = [
            format!("id={}", res.statement.id),
            format!("d={:?}", res.d),
            format!("r={:?}", res.r),
            format!("trial={trial}"),
            format!("attempt={attempt}"),
        ];
        let labels: Vec<&str> = labels.iter().map(String::as_str).collect();
        let s = sample_params_with(&res.sampled, res.n, res.sample_t, req.seed, &labels, |_| true)?;
        vals.extend(s.assignments.iter().map(|(k, v)| (k.clone(), v.clone())));
        sample = Some(s);
    }
    let mut inst = build(res, &vals, req.corrupt)?;
    if let (Some(s), Some(p)) = (sample, inst.params.as_mut()) {
        p.seed = s.seed;
        p.rejection_count = s.rejection_count;
    }
    Ok(inst)
}

/// The verdicts for one instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceOutcome {
    pub verdict: Verdict,
    /// The same congruence modulo the modulus with one factor removed.
    pub weaker: Option<(String, Verdict)>,
    pub checks: Vec<(String, String, Verdict)>,
}

impl InstanceOutcome {
    pub fn is_verified(&self) -> bool {
        self.verdict.is_verified()
            && self.weaker.as_ref().map_or(true, |(_, v)| v.is_verified())
            && self.checks.iter().all(|(_, _, v)| v.is_verified())
    }
}

fn exact_verdict(lhs: &FactoredRat, rhs: &FactoredRat) -> Verdict {
    let diff = lhs.sub(rhs).to_qrat();
    if diff.is_zero() {
        return Verdict::Verified { quotient_degree: None, valuations: Vec::new() };
    }
    Verdict::Failed {
        factor: "exact".into(),
        required: 0,
        achieved: 0,
        remainder_degree: diff.num().degree().unwrap_or(0),
        remainder_leading: diff.num().leading_coeff(),
        valuations: Vec::new(),
    }
}

pub fn verify_instance(inst: &CongruenceInstance) -> Result<InstanceOutcome, CatalogError> {
    let Some(m) = &inst.modulus else {
        return Ok(InstanceOutcome { verdict: exact_verdict(&inst.lhs, &inst.rhs), weaker: None, checks: Vec::new() });
    };
    let verdict = congruent_factored(&inst.lhs, &inst.rhs, m)?;
    let weaker = match (verdict.is_verified(), m.weaker()) {
        (true, Some(w)) => Some((w.label().to_string(), congruent_factored(&inst.lhs, &inst.rhs, &w)?)),
        _ => None,
    };
    let mut checks = Vec::new();
    for c in &inst.checks {
        let v = congruent_factored(&c.lhs, &c.rhs, &c.modulus)?;
        checks.push((c.label.clone(), c.modulus.label().to_string(), v));
    }
    Ok(InstanceOutcome { verdict, weaker, checks })
}

/// Compare the right side of THM_D (`d = 3, r = 1, c = 1`) with that of
/// THM_B, or of THM_E (`d = 3, r = 1`) with that of THM_C, modulo the
/// stronger statement's modulus.
pub fn cross_consistency(id: &str, n: i64) -> Result<Verdict, CatalogError> {
    let (base, general) = match id {
        "THM_D" => ("THM_B", Request::new("THM_D").n(n).d(3).r(1).c(BigRat::one())),
        "THM_E" => ("THM_C", Request::new("THM_E").n(n).d(3).r(1)),
        _ => return Err(CatalogError::UnknownId(id.to_string())),
    };
    let general = instantiate(&general, 0, 0)?;
    let base = instantiate(&Request::new(base).n(n), 0, 0)?;
    let m = base.modulus.as_ref().expect("congruence statement");
    Ok(congruent_factored(&general.rhs, &base.rhs, m)?)
}

/// A JSON-shaped value for report witnesses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Null,
    Bool(bool),
    Int(i64),
    Str(String),
    List(Vec<Value>),
    Map(Vec<(String, Value)>),
}

impl Value {
    fn map(entries: Vec<(&str, Value)>) -> Value {
        Value::Map(entries.into_iter().map(|(k, v)| (k.to_string(), v)).collect())
    }

    fn str(s: impl fmt::Display) -> Value {
        Value::Str(s.to_string())
    }

    fn opt_int(v: Option<i64>) -> Value {
        v.map_or(Value::Null, Value::Int)
    }

    /// The entry under `key`, for maps.
    pub fn get(&self, key: &str) -> Option<&Value> {
        match self {
            Value::Map(m) => m.iter().find(|(k, _)| k == key).map(|(_, v)| v),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Status {
    Verified,
    Failed,
    Skipped,
    Error,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Verified => "verified",
            Status::Failed => "failed",
            Status::Skipped => "skipped",
            Status::Error => "error",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One line of a report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationRecord {
    pub id: String,
    pub params: Vec<(String, Value)>,
    pub modulus: String,
    pub m_choice: Option<MChoice>,
    pub status: Status,
    pub witness: Value,
    /// Filled in by callers that time the run.
    pub elapsed_ms: Option<u64>,
    pub seed: u64,
}

fn verdict_fields(v: &Verdict, out: &mut Vec<(&str, Value)>) {
    let vals = |vals: &[crate::congruence::FactorValuation]| {
        Value::Map(
            vals.iter()
                .map(|f| {
                    let achieved = f.achieved.map_or(Value::str("inf"), Value::Int);
                    (f.factor.clone(), Value::List(vec![achieved, Value::Int(f.required as i64)]))
                })
                .collect(),
        )
    };
    match v {
        Verdict::Verified { quotient_degree, valuations } => {
            out.push(("status", Value::str("verified")));
            out.push(("quotient_degree", Value::opt_int(*quotient_degree)));
            out.push(("valuations", vals(valuations)));
        }
        Verdict::Failed { factor, required, achieved, remainder_degree, remainder_leading, valuations } => {
            out.push(("status", Value::str("failed")));
            out.push(("factor", Value::str(factor)));
            out.push(("required", Value::Int(*required as i64)));
            out.push(("achieved", Value::Int(*achieved)));
            out.push(("remainder_degree", Value::Int(*remainder_degree as i64)));
            out.push(("remainder_leading", Value::str(remainder_leading)));
            out.push(("valuations", vals(valuations)));
        }
    }
}

fn short_verdict(v: &Verdict) -> Value {
    Value::str(if v.is_verified() { "verified" } else { "failed" })
}

/// `[n]*Phi(n)^4`-style label of a modulus shape.
pub fn modulus_shape(kind: &ModulusKind) -> String {
    if kind.0.is_empty() {
        return "1".into();
    }
    let parts: Vec<String> = kind
        .0
        .iter()
        .map(|t| match t {
            ModulusTerm::QInt => "[n]".to_string(),
            ModulusTerm::Phi(1) => "Phi(n)".to_string(),
            ModulusTerm::Phi(k) => format!("Phi(n)^{k}"),
            ModulusTerm::Pair { symbol, t: 1 } => format!("(1-{symbol}*q^n)*({symbol}-q^n)"),
            ModulusTerm::Pair { symbol, t } => format!("(1-{symbol}*q^({t}n))*({symbol}-q^({t}n))"),
        })
        .collect();
    parts.join("*")
}

fn shape_of(id: &str, n: Option<i64>, d: Option<i64>, t: Option<i64>) -> String {
    let kind = match id {
        "THM_A" | "LEM_WEI_N" | "THM_B" | "THM_D" => ModulusKind::qint_phi(4),
        "THM_C" | "LEM_OO" | "THM_E" => ModulusKind::qint_phi(5),
        "GWY" => ModulusKind::qint_phi(2),
        "GS_16" if n.unwrap_or(1) % 3 == 1 => ModulusKind::qint(),
        "GS_16" | "NW_23" => ModulusKind::qint_phi(1),
        "NW_A" | "NW_B" | "LEM_WEI_K" | "LEM_WEI_M" => ModulusKind::qint(),
        "LEM_PP" => ModulusKind::phi(2),
        "LEM_REL" => return "exact".into(),
        "PROP_2_1" => ModulusKind::specialized(1),
        "THM_2_2" | "THM_3_2" | "THM_5_4" => ModulusKind::qint().times(ModulusKind::specialized(1)),
        "PROP_3_1" | "PROP_5_3" => ModulusKind::specialized(t.unwrap_or(1)),
        "THM_3_3" => ModulusKind::qint_phi(1).times(ModulusKind::specialized(2)),
        "THM_5_5" => ModulusKind::qint_phi(1).times(ModulusKind::specialized(d.unwrap_or(3) - 1)),
        _ => ModulusKind::default(),
    };
    modulus_shape(&kind)
}

fn request_params(req: &Request, st: &Statement) -> Vec<(String, Value)> {
    let mut out = Vec::new();
    let mut push = |name: &str, v: Option<Value>| {
        if st.params.contains(&name) {
            if let Some(v) = v {
                out.push((name.to_string(), v));
            }
        }
    };
    push("n", req.n.map(Value::Int));
    push("p", req.p.map(|p| Value::Int(p as i64)));
    push("s", Some(Value::Int(req.s.unwrap_or(1) as i64)));
    push("d", req.d.map(Value::Int));
    push("r", req.r.map(Value::Int));
    push("t", req.t.map(Value::Int));
    if st.sampled.contains(&"c") {
        if let Some(c) = &req.c {
            out.push(("c".to_string(), Value::str(c)));
        }
    }
    out
}

/// Whether a fresh parameter sample might avoid the error.
fn sample_dependent(e: &CatalogError) -> bool {
    matches!(
        e,
        CatalogError::Congruence(CongruenceError::DenominatorNotUnit { .. })
            | CatalogError::Expr(ExprError::DivisionByZero(_))
            | CatalogError::Expr(ExprError::QSeries(QSeriesError::ZeroDenominatorFactor { .. }))
            | CatalogError::QSeries(QSeriesError::ZeroDenominatorFactor { .. })
    )
}

/// Run `trials` instances, redrawing parameters when `resample` is set and a
/// denominator meets the modulus. Returns the overall status and the
/// `trials`, `weaker` and `checks` witness entries.
fn run_trials(
    trials: u32,
    resample: bool,
    make: impl Fn(u32, u32) -> Result<CongruenceInstance, CatalogError>,
) -> (Status, Vec<(&'static str, Value)>) {
    let mut status = Status::Verified;
    let mut trial_values = Vec::new();
    let mut weaker_value = Value::Null;
    let mut check_values = Vec::new();
    for trial in 0..trials {
        let mut attempt = 0;
        let outcome = loop {
            let result = make(trial, attempt)
                .and_then(|inst| verify_instance(&inst).map(|o| (inst, o)));
            match result {
                Err(e) if sample_dependent(&e) && resample && attempt < MAX_RESAMPLES => attempt += 1,
                other => break other,
            }
        };
        let mut fields: Vec<(&str, Value)> = Vec::new();
        match outcome {
            Ok((inst, out)) => {
                let sample = inst.params.as_ref().map_or(Value::Null, |p| {
                    Value::Map(p.assignments.iter().map(|(k, v)| (k.clone(), Value::str(v))).collect())
                });
                fields.push(("sample", sample));
                if let Some(p) = &inst.params {
                    fields.push(("rejections", Value::Int(p.rejection_count as i64)));
                }
                fields.push(("resamples", Value::Int(attempt as i64)));
                fields.push(("modulus", Value::str(inst.modulus.as_ref().map_or("exact", |m| m.label()))));
                verdict_fields(&out.verdict, &mut fields);
                if let Some((label, v)) = &out.weaker {
                    if !v.is_verified() {
                        // dividing by P but not by a factor of P is impossible
                        status = Status::Error;
                    }
                    weaker_value =
                        Value::map(vec![("modulus", Value::str(label)), ("status", short_verdict(v))]);
                }
                for (label, modulus, v) in &out.checks {
                    if trial == 0 {
                        check_values.push(Value::map(vec![
                            ("label", Value::str(label)),
                            ("modulus", Value::str(modulus)),
                            ("status", short_verdict(v)),
                        ]));
                    }
                }
                if !out.is_verified() && status != Status::Error {
                    status = Status::Failed;
                }
            }
            Err(CatalogError::Congruence(CongruenceError::DenominatorNotUnit { factor })) => {
                fields.push(("resamples", Value::Int(attempt as i64)));
                fields.push(("status", Value::str("failed")));
                fields.push(("reason", Value::Str(format!("denominator is not a unit modulo {factor}"))));
                if status != Status::Error {
                    status = Status::Failed;
                }
            }
            Err(e) => {
                fields.push(("status", Value::str("error")));
                fields.push(("error", Value::str(&e)));
                status = Status::Error;
            }
        }
        trial_values.push(Value::map(fields));
    }
    let mut tail = vec![("trials", Value::List(trial_values))];
    if weaker_value != Value::Null {
        tail.push(("weaker", weaker_value));
    }
    if !check_values.is_empty() {
        tail.push(("checks", Value::List(check_values)));
    }
    (status, tail)
}

/// Verify one request and describe the result as a report record.
///
/// Only usage errors (an unknown id or a missing parameter) are returned as
/// `Err`; side-condition misses become `skipped` records and every other
/// problem an `error` record.
pub fn run(req: &Request) -> Result<VerificationRecord, CatalogError> {
    let st = statement(&req.id).ok_or_else(|| CatalogError::UnknownId(req.id.clone()))?;
    let params = request_params(req, st);
    let record = |modulus: String, m_choice, status, witness| VerificationRecord {
        id: st.id.to_string(),
        params: params.clone(),
        modulus,
        m_choice,
        status,
        witness,
        elapsed_ms: None,
        seed: req.seed,
    };
    let m_choice = st.two_truncations.then_some(req.m_choice);
    let skipped = |msg: String| Value::map(vec![("reason", Value::Str(msg))]);
    let errored = |e: &dyn fmt::Display| Value::map(vec![("error", Value::str(e))]);

    if st.kind == Classical {
        let p = req.p.ok_or(CatalogError::MissingParameter { id: st.id, name: "p" })?;
        let mut cp = ClassicalParams::new(p, req.s.unwrap_or(1)).with_m_choice(req.m_choice);
        cp.budget = req.budget;
        if padic::takes_d_r(st.id) {
            let d = req.d.ok_or(CatalogError::MissingParameter { id: st.id, name: "d" })?;
            let r = req.r.ok_or(CatalogError::MissingParameter { id: st.id, name: "r" })?;
            cp = cp.with_d_r(d, r);
        }
        return Ok(match padic::verify_classical(st.id, &cp) {
            Ok(out) => {
                let v = out.verdict;
                let achieved = match v.achieved {
                    Valuation::Finite(k) => Value::Int(k),
                    Valuation::Infinite => Value::str("inf"),
                };
                let status = if v.is_verified() { Status::Verified } else { Status::Failed };
                let witness = Value::map(vec![
                    ("branch", Value::Str(out.branch)),
                    ("m", Value::opt_int(out.m)),
                    ("required", Value::Int(v.required as i64)),
                    ("achieved", achieved),
                    ("lower_bound", Value::Bool(v.lower_bound)),
                ]);
                record(out.modulus, m_choice, status, witness)
            }
            Err(PadicError::SideConditionViolated(msg)) => record("p^k".into(), m_choice, Status::Skipped, skipped(msg)),
            Err(e @ PadicError::Arith(ArithError::NotOddPrime(_))) => {
                record("p^k".into(), m_choice, Status::Skipped, skipped(e.to_string()))
            }
            Err(e) => record("p^k".into(), m_choice, Status::Error, errored(&e)),
        });
    }

    let res = match resolve(req) {
        Ok(res) => res,
        Err(CatalogError::SideConditionViolated(msg)) => {
            return Ok(record(shape_of(st.id, req.n, req.d, req.t), m_choice, Status::Skipped, skipped(msg)))
        }
        Err(e) => return Err(e),
    };
    let shape = shape_of(st.id, Some(res.n), res.d, res.t);
    let trials = if res.sampled.is_empty() { 1 } else { req.trials.max(1) };
    let (status, mut tail) =
        run_trials(trials, !res.sampled.is_empty(), |trial, attempt| instantiate_resolved(&res, req, trial, attempt));
    let mut witness = vec![("branch", Value::str(res.branch)), ("m", Value::opt_int(res.m))];
    witness.append(&mut tail);
    Ok(record(shape, res.m_choice, status, Value::map(witness)))
}

fn param_value(v: &BigRat) -> Value {
    match v.is_integer().then(|| v.to_integer().to_i64()).flatten() {
        Some(k) => Value::Int(k),
        None => Value::str(v),
    }
}

/// Verify every instance of a user spec, in loop order.
pub fn run_spec(spec: &CongruenceSpec, seed: u64, trials: u32) -> Result<Vec<VerificationRecord>, CatalogError> {
    Ok(spec.instances()?.iter().map(|inst| run_spec_instance(spec, inst, seed, trials)).collect())
}

/// Verify one instance of a user spec.
pub fn run_spec_instance(spec: &CongruenceSpec, inst: &SpecInstance, seed: u64, trials: u32) -> VerificationRecord {
    let sampled: Vec<&str> = spec.sample.iter().map(String::as_str).collect();
    let params: Vec<(String, Value)> = inst.bindings.iter().map(|(k, v)| (k.to_string(), param_value(v))).collect();
    let (status, witness) = match &inst.skipped {
        Some(a) => (Status::Skipped, Value::map(vec![("reason", Value::Str(format!("assumption `{a}` fails")))])),
        None => {
            let n = inst.bindings.get_int("n").unwrap_or(1).max(1);
            let key: String = params.iter().map(|(k, v)| format!("{k}={v:?};")).collect();
            let make = |trial: u32, attempt: u32| {
                let mut b = inst.bindings.clone();
                let mut sample = None;
                if !sampled.is_empty() {
                    let labels = [spec.id.clone(), key.clone(), format!("trial={trial}"), format!("attempt={attempt}")];
                    let labels: Vec<&str> = labels.iter().map(String::as_str).collect();
                    let s = sample_params_with(&sampled, n, 1, seed, &labels, |_| true)?;
                    for (k, v) in &s.assignments {
                        b.set(k, v.clone());
                    }
                    sample = Some(s);
                }
                let modulus = Modulus::from_factored(&eval_factored(&spec.modulus, &b)?)?;
                Ok(CongruenceInstance {
                    id: spec.id.clone(),
                    n,
                    d: None,
                    r: None,
                    t: None,
                    branch: "",
                    m: None,
                    m_choice: None,
                    params: sample,
                    lhs: eval_factored(&spec.lhs, &b)?,
                    rhs: eval_factored(&spec.rhs, &b)?,
                    modulus: Some(modulus),
                    checks: Vec::new(),
                })
            };
            let trials = if sampled.is_empty() { 1 } else { trials.max(1) };
            let (status, tail) = run_trials(trials, !sampled.is_empty(), make);
            (status, Value::map(tail))
        }
    };
    VerificationRecord {
        id: spec.id.clone(),
        params,
        modulus: spec.modulus.to_string(),
        m_choice: None,
        status,
        witness,
        elapsed_ms: None,
        seed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;
    use crate::expr::eval_expr;

    fn verified(req: Request) -> VerificationRecord {
        let rec = run(&req).unwrap();
        assert_eq!(rec.status, Status::Verified, "{req:?}: {rec:?}");
        rec
    }

    #[test]
    fn inventory() {
        let ids: Vec<&str> = list_statements().iter().map(|s| s.id).collect();
        for id in ["THM_A", "COR_1_6", "LEM_WEI_M", "THM_5_5", "SUN_H3"] {
            assert!(ids.contains(&id), "{id}");
        }
        let mut sorted = ids.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), ids.len());
        for id in padic::CLASSICAL_IDS {
            assert_eq!(statement(id).unwrap().kind, Classical);
            assert_eq!(statement(id).unwrap().two_truncations, padic::has_m_choice(id));
        }
    }

    #[test]
    fn cubic_instance_at_two() {
        let inst = instantiate(&Request::new("THM_C").n(2), 0, 0).unwrap();
        assert_eq!(inst.m, Some(1));
        let m = inst.modulus.as_ref().unwrap();
        assert_eq!(m.label(), "[2]*Phi(2)^5");
        let expect = eval_expr(&parse_expr("5*qint(4)*poch(q^2; q^3; 1)^3/poch(q^3; q^3; 1)^3").unwrap(), &Bindings::new())
            .unwrap();
        assert_eq!(inst.rhs.to_qrat(), expect);
        assert!(verify_instance(&inst).unwrap().is_verified());
    }

    #[test]
    fn side_conditions() {
        assert!(matches!(resolve(&Request::new("THM_B").n(5)), Err(CatalogError::SideConditionViolated(_))));
        let rec = run(&Request::new("THM_B").n(5)).unwrap();
        assert_eq!(rec.status, Status::Skipped);
        assert!(matches!(run(&Request::new("NO_SUCH").n(1)), Err(CatalogError::UnknownId(_))));
        assert!(matches!(
            run(&Request::new("THM_D").n(7)),
            Err(CatalogError::MissingParameter { name: "d", .. })
        ));
        assert!(matches!(
            resolve(&Request::new("THM_D").n(7).d(3).r(2)),
            Err(CatalogError::SideConditionViolated(_))
        ));
        assert_eq!(run(&Request::new("SUN_H3").p(5)).unwrap().status, Status::Skipped);
    }

    #[test]
    fn quartic_both_truncations() {
        for m in MChoice::BOTH {
            let rec = verified(Request::new("THM_A").n(3).m_choice(m));
            assert_eq!(rec.modulus, "[n]*Phi(n)^4");
            assert_eq!(rec.m_choice, Some(m));
            let checks = rec.witness.get("checks").unwrap();
            assert!(matches!(checks, Value::List(c) if c.len() == 2));
        }
        verified(Request::new("THM_A").n(5).m_choice(MChoice::Second));
        verified(Request::new("THM_A").n(1));
    }

    #[test]
    fn truncated_at_n_minus_one() {
        let rec = verified(Request::new("GS_16").n(4));
        assert_eq!(rec.modulus, "[n]");
        assert_eq!(rec.m_choice, None);
        assert_eq!(rec.witness.get("m"), Some(&Value::Int(3)));
        verified(Request::new("GS_16").n(5));
    }

    #[test]
    fn corrupted_right_side_fails() {
        let rec = run(&Request::new("THM_B").n(4).corrupted()).unwrap();
        assert_eq!(rec.status, Status::Failed);
        let Value::List(trials) = rec.witness.get("trials").unwrap() else { panic!() };
        assert_eq!(trials[0].get("status"), Some(&Value::str("failed")));
        assert!(matches!(trials[0].get("remainder_leading"), Some(Value::Str(s)) if s != "0"));
    }

    #[test]
    fn double_series_instance() {
        let req = Request::new("THM_D").n(7).d(3).r(1).c(int(1));
        let inst = instantiate(&req, 0, 0).unwrap();
        assert_eq!(inst.m, Some(2));
        assert!(verify_instance(&inst).unwrap().is_verified());
        verified(Request::new("THM_E").n(5).d(3).r(1));
        assert!(cross_consistency("THM_D", 4).unwrap().is_verified());
        assert!(cross_consistency("THM_E", 2).unwrap().is_verified());
    }

    #[test]
    fn parametric_trials() {
        let rec = verified(Request::new("PROP_2_1").n(3).seed(42));
        let Value::List(trials) = rec.witness.get("trials").unwrap() else { panic!() };
        assert_eq!(trials.len(), 3);
        assert_ne!(trials[0].get("sample"), trials[1].get("sample"));
        assert_eq!(rec, run(&Request::new("PROP_2_1").n(3).seed(42)).unwrap());
        verified(Request::new("THM_3_3").n(2).seed(1));
        verified(Request::new("NW_A").n(5).d(3).r(1).seed(3));
    }

    #[test]
    fn lemmas() {
        verified(Request::new("LEM_REL").n(4));
        verified(Request::new("LEM_WEI_K").n(7));
        verified(Request::new("LEM_WEI_M").n(5));
        verified(Request::new("LEM_WEI_N").n(3));
        verified(Request::new("LEM_PP").n(5));
    }

    #[test]
    fn classical_delegation() {
        let rec = verified(Request::new("COR_1_6").p(5));
        assert_eq!(rec.modulus, "5^6");
        assert!(matches!(run(&Request::new("VH_A2")), Err(CatalogError::MissingParameter { name: "p", .. })));
    }

    #[test]
    fn user_spec() {
        let text = "id = MINE\nfor n in 1..8\nassume n mod 3 = 1\nsample a\n\
                    lhs = sum(k, 0, n-1, qint(6*k+1)*poch(q; q^3; k)^6/poch(q^3; q^3; k)^6*q^(3*k))\n\
                    rhs = 0*a\nmodulus = qint(n)\n";
        let spec = crate::expr::parse_spec(text).unwrap();
        let recs = run_spec(&spec, 5, 2).unwrap();
        let statuses: Vec<Status> = recs.iter().map(|r| r.status).collect();
        use Status::{Skipped as S, Verified as V};
        assert_eq!(statuses, [V, S, S, V, S, S, V, S]);
        assert_eq!(recs[3].params, [("n".to_string(), Value::Int(4))]);
        assert_eq!(recs[0].modulus, "qint(n)");
    }

    #[test]
    fn mu_solves_linear_congruence() {
        assert_eq!(solve_mu(7, 3, 1), Some(2));
        assert_eq!(solve_mu(1, 4, 1), Some(0));
        assert_eq!(solve_mu(6, 3, 1), None);
        for n in 1..20i64 {
            for d in 1..6i64 {
                if let Some(mu) = solve_mu(n, d, -2) {
                    assert_eq!((d * mu - 2).mod_floor(&n), 0);
                }
            }
        }
    }
}
