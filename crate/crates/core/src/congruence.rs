//! Congruences between rational functions of `q` modulo a polynomial.
//!
//! `A = B (mod P)` means: writing `A - B = N/D` in lowest terms, `D` is
//! coprime to `P` and `P` divides `N`. The modulus is kept factored into
//! irreducible atoms, so the check is a valuation count per atom and the
//! dense difference is only expanded for witnesses.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::arith::{derive_seed, is_perfect_power, sample_small_rational, BigRat};
use crate::poly::factored::{binomial_atoms, binomial_is_irreducible, Atom, FactoredRat};
use crate::poly::{cyclotomic, divisors, PolyError, QPoly, QRat};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CongruenceError {
    #[error("unknown modulus kind `{0}`")]
    UnknownKind(String),
    #[error("modulus needs a value for `{0}`")]
    MissingParameter(String),
    #[error("modulus must be nonzero")]
    ZeroModulus,
    #[error("modulus must be a polynomial, got {0}")]
    NotPolynomial(String),
    #[error("n must be positive, got {0}")]
    BadLength(i64),
    #[error("denominator is not a unit modulo {factor}")]
    DenominatorNotUnit { factor: String },
    #[error("parameter sampling gave up after {rejections} rejections")]
    SamplingExhausted { rejections: u32 },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// One multiplicative piece of a modulus kind.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModulusTerm {
    /// `[n]`.
    QInt,
    /// `Phi_n^power`.
    Phi(u32),
    /// `(1 - x q^(t n)) (x - q^(t n))` for the parameter `x`.
    Pair { symbol: String, t: i64 },
}

/// A modulus shape such as `[n]*Phi^4` or `pair(a,1)*pair(b,1)`, instantiated
/// by [`build_modulus`].
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ModulusKind(pub Vec<ModulusTerm>);

impl ModulusKind {
    pub fn qint() -> ModulusKind {
        ModulusKind(alloc::vec![ModulusTerm::QInt])
    }

    /// `[n] Phi_n^k`.
    pub fn qint_phi(k: u32) -> ModulusKind {
        let mut v = alloc::vec![ModulusTerm::QInt];
        if k > 0 {
            v.push(ModulusTerm::Phi(k));
        }
        ModulusKind(v)
    }

    pub fn phi(k: u32) -> ModulusKind {
        ModulusKind(alloc::vec![ModulusTerm::Phi(k)])
    }

    /// `(1 - a q^(tn))(a - q^(tn))(1 - b q^(tn))(b - q^(tn))`.
    pub fn specialized(t: i64) -> ModulusKind {
        ModulusKind(alloc::vec![
            ModulusTerm::Pair { symbol: "a".into(), t },
            ModulusTerm::Pair { symbol: "b".into(), t },
        ])
    }

    pub fn times(mut self, other: ModulusKind) -> ModulusKind {
        self.0.extend(other.0);
        self
    }

    /// Parse the notation produced by `Display`: terms `[n]`, `Phi`, `Phi^k`
    /// and `pair(x,t)` joined by `*`. The names `QINT`, `PHI_POW:k`,
    /// `QINT_PHI_POW:k` and `SPECIALIZED:t` are accepted as well.
    pub fn parse(s: &str) -> Result<ModulusKind, CongruenceError> {
        let unknown = || CongruenceError::UnknownKind(s.to_string());
        let s = s.trim();
        if let Some((name, arg)) = s.split_once(':') {
            let k: i64 = arg.trim().parse().map_err(|_| unknown())?;
            let pow = || u32::try_from(k).map_err(|_| unknown());
            return match name.trim() {
                "PHI_POW" => Ok(ModulusKind::phi(pow()?)),
                "QINT_PHI_POW" => Ok(ModulusKind::qint_phi(pow()?)),
                "SPECIALIZED" if k >= 1 => Ok(ModulusKind::specialized(k)),
                _ => Err(unknown()),
            };
        }
        if s == "QINT" {
            return Ok(ModulusKind::qint());
        }
        if s == "1" {
            return Ok(ModulusKind::default());
        }
        let mut terms = Vec::new();
        for part in s.split('*') {
            let part = part.trim();
            let term = if part == "[n]" {
                ModulusTerm::QInt
            } else if part == "Phi" {
                ModulusTerm::Phi(1)
            } else if let Some(k) = part.strip_prefix("Phi^") {
                ModulusTerm::Phi(k.parse().map_err(|_| unknown())?)
            } else if let Some(inner) = part.strip_prefix("pair(").and_then(|r| r.strip_suffix(')')) {
                let (x, t) = inner.split_once(',').ok_or_else(unknown)?;
                let x = x.trim();
                if !matches!(x, "a" | "b" | "c") {
                    return Err(unknown());
                }
                let t: i64 = t.trim().parse().map_err(|_| unknown())?;
                if t < 1 {
                    return Err(unknown());
                }
                ModulusTerm::Pair { symbol: x.into(), t }
            } else {
                return Err(unknown());
            };
            terms.push(term);
        }
        Ok(ModulusKind(terms))
    }
}

impl fmt::Display for ModulusKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (i, t) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            match t {
                ModulusTerm::QInt => f.write_str("[n]")?,
                ModulusTerm::Phi(1) => f.write_str("Phi")?,
                ModulusTerm::Phi(k) => write!(f, "Phi^{k}")?,
                ModulusTerm::Pair { symbol, t } => write!(f, "pair({symbol},{t})")?,
            }
        }
        Ok(())
    }
}

/// A nonzero polynomial modulus, kept as the product of its stated factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Modulus {
    factors: Vec<(QPoly, u32)>,
    product: QPoly,
    /// Irreducible (or untracked dense) atoms with merged multiplicities,
    /// smallest degree first.
    atoms: Vec<(Atom, u32)>,
    label: String,
}

impl Modulus {
    pub fn one() -> Modulus {
        Modulus { factors: Vec::new(), product: QPoly::one(), atoms: Vec::new(), label: "1".into() }
    }

    fn push(&mut self, poly: QPoly, atoms: Vec<Atom>, mult: u32) {
        if mult == 0 || poly.is_constant() {
            return;
        }
        self.product = &self.product * &poly.pow(mult);
        self.factors.push((poly, mult));
        let mut merged: BTreeMap<Atom, u32> = self.atoms.drain(..).collect();
        for a in atoms {
            *merged.entry(a).or_insert(0) += mult;
        }
        self.atoms = merged.into_iter().collect();
        self.atoms.sort_by(|(x, _), (y, _)| x.degree().cmp(&y.degree()).then_with(|| x.cmp(y)));
    }

    /// A modulus from an evaluated expression; every factor it carries in
    /// factored form is kept as a separate factor.
    pub fn from_factored(f: &FactoredRat) -> Result<Modulus, CongruenceError> {
        if f.is_zero() {
            return Err(CongruenceError::ZeroModulus);
        }
        if f.den_atoms().next().is_some() {
            return Err(CongruenceError::NotPolynomial(f.to_string()));
        }
        let mut m = Modulus::one();
        for (a, k) in f.num_atoms() {
            m.push(a.poly(), alloc::vec![a.clone()], k);
        }
        let (cyclos, rest) = split_cyclotomic(f.dense_num());
        for (d, k) in cyclos {
            m.push(cyclotomic(d), alloc::vec![Atom::Cyclo(d)], k);
        }
        if !rest.is_constant() {
            let monic = rest.monic();
            m.push(monic.clone(), alloc::vec![Atom::Dense(monic)], 1);
        }
        m.label = crate::poly::factored::atoms_label(m.atoms.iter().map(|(a, k)| (a, *k)));
        Ok(m)
    }

    pub fn from_poly(p: QPoly) -> Result<Modulus, CongruenceError> {
        Modulus::from_factored(&FactoredRat::from_poly(p))
    }

    pub fn factors(&self) -> &[(QPoly, u32)] {
        &self.factors
    }

    pub fn product(&self) -> &QPoly {
        &self.product
    }

    pub fn atoms(&self) -> &[(Atom, u32)] {
        &self.atoms
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.product.degree().unwrap_or(0)
    }

    /// The modulus with one power of its most repeated atom removed; `None`
    /// for the trivial modulus.
    pub fn weaker(&self) -> Option<Modulus> {
        let (i, _) = self.atoms.iter().enumerate().max_by_key(|(i, (_, k))| (*k, usize::MAX - i))?;
        let mut atoms = self.atoms.clone();
        let p = atoms[i].0.poly();
        atoms[i].1 -= 1;
        atoms.retain(|(_, k)| *k > 0);
        let label = crate::poly::factored::atoms_label(atoms.iter().map(|(a, k)| (a, *k)));
        let product = self.product.exact_div(&p).expect("atom divides its modulus");
        let factors = atoms.iter().map(|(a, k)| (a.poly(), *k)).collect();
        Some(Modulus { factors, product, atoms, label })
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

/// Divide out every cyclotomic factor of `p`, returning `(d, multiplicity)`
/// pairs and the cofactor.
fn split_cyclotomic(p: &QPoly) -> (Vec<(u64, u32)>, QPoly) {
    let mut rest = p.clone();
    let mut found = Vec::new();
    let deg = p.degree().unwrap_or(0) as u64;
    // phi(d) >= sqrt(d / 2), so no larger d can have degree <= deg
    let bound = (2 * deg * deg).max(2);
    for d in 1..=bound {
        let Some(rd) = rest.degree() else { break };
        if rd == 0 {
            break;
        }
        if crate::poly::factored::euler_phi(d) as usize > rd {
            continue;
        }
        let atom = Atom::Cyclo(d);
        let k = atom.multiplicity_in(&rest, u32::MAX);
        if k > 0 {
            rest = rest.exact_div(&cyclotomic(d).pow(k)).expect("multiplicity divides");
            found.push((d, k));
        }
    }
    (found, rest)
}

/// Instantiate a modulus kind at `n` with parameter values from `bindings`.
pub fn build_modulus(
    kind: &ModulusKind,
    n: i64,
    bindings: &BTreeMap<String, BigRat>,
) -> Result<Modulus, CongruenceError> {
    if n < 1 {
        return Err(CongruenceError::BadLength(n));
    }
    let nu = n as u64;
    let mut m = Modulus::one();
    let mut label = Vec::new();
    for term in &kind.0 {
        match term {
            ModulusTerm::QInt => {
                let atoms: Vec<Atom> = divisors(nu).into_iter().filter(|&d| d > 1).map(Atom::Cyclo).collect();
                let poly = crate::poly::q_integer_poly(nu);
                m.push(poly, atoms, 1);
                label.push(format!("[{n}]"));
            }
            ModulusTerm::Phi(k) => {
                m.push(cyclotomic(nu), alloc::vec![Atom::Cyclo(nu)], *k);
                label.push(match k {
                    0 => continue,
                    1 => format!("Phi({n})"),
                    k => format!("Phi({n})^{k}"),
                });
            }
            ModulusTerm::Pair { symbol, t } => {
                let x = bindings
                    .get(symbol)
                    .ok_or_else(|| CongruenceError::MissingParameter(symbol.clone()))?;
                if x.is_zero() {
                    return Err(CongruenceError::ZeroModulus);
                }
                let e = (t * n) as u64;
                let qe = QPoly::monomial(BigRat::one(), e as usize);
                // 1 - x q^e = -x (q^e - 1/x) and x - q^e = -(q^e - x)
                let first = &QPoly::one() - &qe.scale(x);
                let second = &QPoly::constant(x.clone()) - &qe;
                m.push(first, binomial_atoms(e, &x.recip()), 1);
                m.push(second, binomial_atoms(e, x), 1);
                label.push(format!("(1-{x}*q^{e})*({x}-q^{e})"));
            }
        }
    }
    m.label = if label.is_empty() { "1".into() } else { label.join("*") };
    Ok(m)
}

/// Valuation of the difference at one atom of the modulus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorValuation {
    pub factor: String,
    pub required: u32,
    /// `None` when the difference is zero.
    pub achieved: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Verified {
        /// `deg N - deg P` for the reduced numerator `N`; `None` when the
        /// two sides are equal.
        quotient_degree: Option<i64>,
        valuations: Vec<FactorValuation>,
    },
    Failed {
        /// The smallest atom of the modulus whose power does not divide.
        factor: String,
        required: u32,
        achieved: i64,
        /// `(A - B) mod P`.
        remainder_degree: usize,
        remainder_leading: BigRat,
        valuations: Vec<FactorValuation>,
    },
}

impl Verdict {
    pub fn is_verified(&self) -> bool {
        matches!(self, Verdict::Verified { .. })
    }
}

/// Per-atom valuations of `diff`, or the first atom at which the
/// denominator is not a unit.
fn valuations(diff: &FactoredRat, m: &Modulus) -> Result<Vec<FactorValuation>, CongruenceError> {
    let mut out = Vec::with_capacity(m.atoms.len());
    let mut reduced: Option<QRat> = None;
    for (atom, k) in &m.atoms {
        let achieved = if diff.is_zero() {
            None
        } else if atom.is_irreducible() {
            diff.valuation(atom, *k as i64)
        } else {
            let r = reduced.get_or_insert_with(|| diff.to_qrat());
            let p = atom.poly();
            if !r.den().gcd(&p).is_one() {
                -1i64
            } else {
                let mut num = r.num().clone();
                let mut v = 0i64;
                while v < *k as i64 {
                    match num.exact_div(&p) {
                        Some(next) => {
                            num = next;
                            v += 1;
                        }
                        None => break,
                    }
                }
                v
            }
            .into()
        };
        if let Some(v) = achieved {
            if v < 0 {
                return Err(CongruenceError::DenominatorNotUnit { factor: atom.to_string() });
            }
        }
        out.push(FactorValuation { factor: atom.to_string(), required: *k, achieved });
    }
    Ok(out)
}

/// True when every atom divides to its required power. Cheaper than
/// [`congruent_factored`] since no witness is formed.
pub fn divides(diff: &FactoredRat, m: &Modulus) -> Result<bool, CongruenceError> {
    Ok(valuations(diff, m)?
        .iter()
        .all(|v| v.achieved.map_or(true, |a| a >= v.required as i64)))
}

/// Decide `lhs = rhs (mod m)`.
pub fn congruent_factored(
    lhs: &FactoredRat,
    rhs: &FactoredRat,
    m: &Modulus,
) -> Result<Verdict, CongruenceError> {
    let mut diff = lhs.sub(rhs);
    diff.reduce_atoms();
    let vals = valuations(&diff, m)?;
    let failing = vals
        .iter()
        .find(|v| v.achieved.map_or(false, |a| a < v.required as i64));
    if let Some(f) = failing {
        let r = diff.to_qrat();
        let rem = r.residue_mod(&m.product)?;
        return Ok(Verdict::Failed {
            factor: f.factor.clone(),
            required: f.required,
            achieved: f.achieved.unwrap_or(0),
            remainder_degree: rem.degree().unwrap_or(0),
            remainder_leading: rem.leading_coeff(),
            valuations: vals,
        });
    }
    let quotient_degree = if diff.is_zero() {
        None
    } else {
        // after reduce_atoms only untracked dense factors can still cancel
        let deg = if diff.dense_den_atoms().is_empty() {
            diff.num_and_den_atoms().0.degree().unwrap_or(0)
        } else {
            diff.to_qrat().num().degree().unwrap_or(0)
        } as i64;
        Some(deg - m.degree() as i64)
    };
    Ok(Verdict::Verified { quotient_degree, valuations: vals })
}

/// Decide `lhs = rhs (mod m)` for reduced rational functions.
pub fn congruent(lhs: &QRat, rhs: &QRat, m: &Modulus) -> Result<Verdict, CongruenceError> {
    congruent_factored(&FactoredRat::from_qrat(lhs), &FactoredRat::from_qrat(rhs), m)
}

/// Seeded values for the free parameters of a statement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamSample {
    pub seed: u64,
    pub assignments: BTreeMap<String, BigRat>,
    pub rejection_count: u32,
}

/// Rejections tolerated before giving up.
pub const MAX_REJECTIONS: u32 = 1000;

/// A value for which `q^e - x` and `q^e - 1/x` are irreducible for every `e`
/// and which cannot collide with a root of unity.
fn generic_value(x: &BigRat) -> bool {
    !x.is_zero()
        && !x.abs().is_one()
        && !is_perfect_power(x)
        && binomial_is_irreducible(4, x)
        && binomial_is_irreducible(4, &x.recip())
}

fn generic_pair(x: &BigRat, y: &BigRat) -> bool {
    x != y && !(x * y).is_one()
}

/// Sample `symbols` (a subset of `a`, `b`, `c`) for a statement at `n`, `t`.
pub fn sample_params(symbols: &[&str], n: i64, t: i64, seed: u64) -> Result<ParamSample, CongruenceError> {
    sample_params_with(symbols, n, t, seed, &[], |_| true)
}

/// Like [`sample_params`], with extra stream labels and a caller constraint
/// that every accepted sample must also satisfy.
pub fn sample_params_with(
    symbols: &[&str],
    n: i64,
    t: i64,
    seed: u64,
    labels: &[&str],
    accept: impl Fn(&BTreeMap<String, BigRat>) -> bool,
) -> Result<ParamSample, CongruenceError> {
    let n_label = format!("n={n}");
    let t_label = format!("t={t}");
    let mut all: Vec<&str> = labels.to_vec();
    all.push(&n_label);
    all.push(&t_label);
    all.push("params");
    let stream = derive_seed(seed, &all);
    let mut rng = ChaCha8Rng::seed_from_u64(stream);
    let mut rejections = 0;
    loop {
        let mut values: BTreeMap<String, BigRat> = BTreeMap::new();
        let mut ok = true;
        for s in symbols {
            let x = sample_small_rational(&mut rng);
            ok &= generic_value(&x) && values.values().all(|y| generic_pair(&x, y));
            values.insert((*s).to_string(), x);
        }
        if ok && accept(&values) {
            return Ok(ParamSample { seed: stream, assignments: values, rejection_count: rejections });
        }
        rejections += 1;
        if rejections >= MAX_REJECTIONS {
            return Err(CongruenceError::SamplingExhausted { rejections });
        }
    }
}
