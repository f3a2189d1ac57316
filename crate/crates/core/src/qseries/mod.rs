//! q-shifted factorials, q-binomials and truncated q-hypergeometric sums.

mod identities;

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::BigRat;
use crate::poly::factored::{Atom, FactoredRat};
use crate::poly::{PolyError, QPoly, QRat};

pub use identities::{
    check_terminating_identity, IdentityId, IdentityOutcome, IdentityParams, IDENTITY_IDS,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QSeriesError {
    #[error("negative Pochhammer length {0}")]
    NegativeLength(i64),
    #[error("q-binomial index out of range: ({t}, {s})")]
    OutOfRange { t: i64, s: i64 },
    #[error("denominator factor vanishes in term {k}")]
    ZeroDenominatorFactor { k: i64 },
    #[error("series does not terminate: {0}")]
    NonTerminating(alloc::string::String),
    #[error("degenerate parameters: {0}")]
    DegenerateParameters(alloc::string::String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// `coeff * q^exp`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QMonomialArg {
    pub coeff: BigRat,
    pub exp: i64,
}

impl QMonomialArg {
    pub fn new(coeff: BigRat, exp: i64) -> QMonomialArg {
        assert!(!coeff.is_zero(), "monomial argument needs a nonzero coefficient");
        QMonomialArg { coeff, exp }
    }

    /// `q^exp`.
    pub fn q_pow(exp: i64) -> QMonomialArg {
        QMonomialArg::new(BigRat::one(), exp)
    }

    pub fn to_factored(&self) -> FactoredRat {
        FactoredRat::monomial(self.coeff.clone(), self.exp)
    }

    /// `1 - coeff q^(exp + shift)`.
    fn one_minus_shifted(&self, shift: i64) -> FactoredRat {
        FactoredRat::one_minus(&self.coeff, self.exp + shift)
    }

    /// True when `1 - coeff q^(exp + shift)` is identically zero.
    fn vanishes_at(&self, shift: i64) -> bool {
        self.coeff.is_one() && self.exp + shift == 0
    }
}

/// `(arg; q^step)_k^power` as a factor of a summand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PochFactor {
    pub arg: QMonomialArg,
    pub step: i64,
    pub power: u32,
}

/// Shape of the summand
/// `sign^k [2dk + r] prod(numer)_k / prod(denom)_k z^k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TermSpec {
    pub d: i64,
    pub r: i64,
    pub linear_factor: bool,
    pub alternating: bool,
    pub numer: Vec<PochFactor>,
    pub denom: Vec<PochFactor>,
    pub z: QMonomialArg,
}

impl TermSpec {
    /// A summand with no factors yet: constant 1 for every `k`.
    pub fn new(d: i64, r: i64) -> TermSpec {
        TermSpec {
            d,
            r,
            linear_factor: false,
            alternating: false,
            numer: Vec::new(),
            denom: Vec::new(),
            z: QMonomialArg::q_pow(0),
        }
    }

    /// Include the factor `[2dk + r]`.
    pub fn with_linear_factor(mut self) -> TermSpec {
        self.linear_factor = true;
        self
    }

    pub fn alternating(mut self) -> TermSpec {
        self.alternating = true;
        self
    }

    /// Add `(coeff q^exp; q^step)_k^power` to the numerator.
    pub fn num(mut self, coeff: BigRat, exp: i64, step: i64, power: u32) -> TermSpec {
        self.numer.push(PochFactor {
            arg: QMonomialArg::new(coeff, exp),
            step,
            power,
        });
        self
    }

    /// Add `(coeff q^exp; q^step)_k^power` to the denominator.
    pub fn den(mut self, coeff: BigRat, exp: i64, step: i64, power: u32) -> TermSpec {
        self.denom.push(PochFactor {
            arg: QMonomialArg::new(coeff, exp),
            step,
            power,
        });
        self
    }

    pub fn z(mut self, coeff: BigRat, exp: i64) -> TermSpec {
        self.z = QMonomialArg::new(coeff, exp);
        self
    }

    fn linear(&self, k: i64) -> FactoredRat {
        if self.linear_factor {
            FactoredRat::q_int(2 * self.d * k + self.r)
        } else {
            FactoredRat::one()
        }
    }

    /// `term(k+1) / term(k)` without the linear factor, or `None` when the
    /// numerator vanishes (all later terms are zero).
    fn ratio(&self, k: i64) -> Result<Option<FactoredRat>, QSeriesError> {
        for f in &self.denom {
            if f.arg.vanishes_at(f.step * k) {
                return Err(QSeriesError::ZeroDenominatorFactor { k: k + 1 });
            }
        }
        if self.numer.iter().any(|f| f.arg.vanishes_at(f.step * k)) {
            return Ok(None);
        }
        let mut acc = self.z.to_factored();
        if self.alternating {
            acc = acc.neg();
        }
        for f in &self.numer {
            acc = acc.mul(&f.arg.one_minus_shifted(f.step * k).pow(f.power as i64)?);
        }
        for f in &self.denom {
            acc = acc.div(&f.arg.one_minus_shifted(f.step * k).pow(f.power as i64)?)?;
        }
        Ok(Some(acc))
    }
}

/// `(arg; q^step)_k` in factored form.
pub fn pochhammer_factored(arg: &QMonomialArg, step: i64, k: i64) -> Result<FactoredRat, QSeriesError> {
    if k < 0 {
        return Err(QSeriesError::NegativeLength(k));
    }
    let mut acc = FactoredRat::one();
    for i in 0..k {
        acc = acc.mul(&arg.one_minus_shifted(step * i));
    }
    Ok(acc)
}

/// `(arg; q^step)_k = prod_{i<k} (1 - coeff q^(exp + step i))`.
///
/// A negative exponent makes this a Laurent polynomial, hence the `QRat`.
pub fn pochhammer(arg: &QMonomialArg, step: i64, k: i64) -> Result<QRat, QSeriesError> {
    Ok(pochhammer_factored(arg, step, k)?.to_qrat())
}

/// The Gaussian binomial `(q;q)_t / ((q;q)_s (q;q)_{t-s})`.
pub fn q_binomial(t: i64, s: i64) -> Result<QPoly, QSeriesError> {
    if s < 0 || s > t {
        return Err(QSeriesError::OutOfRange { t, s });
    }
    let s = s.min(t - s);
    let mut num = QPoly::one();
    let mut den = QPoly::one();
    for i in 1..=s {
        num = &num * &one_minus_q_pow(t - s + i);
        den = &den * &one_minus_q_pow(i);
    }
    Ok(num.exact_div(&den).expect("Gaussian binomials are polynomials"))
}

fn one_minus_q_pow(e: i64) -> QPoly {
    let mut cs = alloc::vec![BigInt::zero(); e as usize + 1];
    cs[0] = BigInt::one();
    cs[e as usize] = -BigInt::one();
    QPoly::from_int_coeffs(cs)
}

/// The `k`-th summand, computed directly as a product.
pub fn hyper_term_factored(spec: &TermSpec, k: i64) -> Result<FactoredRat, QSeriesError> {
    if k < 0 {
        return Err(QSeriesError::NegativeLength(k));
    }
    let mut acc = FactoredRat::one();
    for i in 0..k {
        match spec.ratio(i)? {
            Some(r) => acc = acc.mul(&r),
            None => return Ok(FactoredRat::zero()),
        }
    }
    Ok(acc.mul(&spec.linear(k)))
}

pub fn hyper_term(spec: &TermSpec, k: i64) -> Result<QRat, QSeriesError> {
    Ok(hyper_term_factored(spec, k)?.to_qrat())
}

/// `sum_{k=0}^{m} term(k)`, unreduced.
///
/// Evaluated by Horner's rule on the term ratios: with `u_{k+1} = rho_k u_k`
/// and linear factors `L_k`, the sum is `X_0` where `X_m = L_m` and
/// `X_k = L_k + rho_k X_{k+1}`. Each ratio is a short product of binomials,
/// so the running denominator stays a product of known atoms and only one
/// dense numerator is carried.
pub fn truncated_sum_factored(spec: &TermSpec, m: i64) -> Result<FactoredRat, QSeriesError> {
    if m < 0 {
        return Err(QSeriesError::NegativeLength(m));
    }
    let mut ratios = Vec::new();
    for k in 0..m {
        match spec.ratio(k)? {
            Some(r) => ratios.push(r),
            None => break,
        }
    }
    let last = ratios.len() as i64;

    let split = |f: &FactoredRat| f.num_and_den_atoms();
    let (mut num, first_den) = split(&spec.linear(last));
    let mut den_atoms: Vec<(Atom, u32)> = first_den;
    let mut den_dense = dense_product(&den_atoms);
    for k in (0..last).rev() {
        let (lnum, lden) = split(&spec.linear(k));
        let (alpha, beta) = split(&ratios[k as usize]);
        let beta_dense = dense_product(&beta);
        let lden_dense = dense_product(&lden);
        let beta_e = &beta_dense * &den_dense;
        num = &(&lnum * &beta_e) + &(&(&lden_dense * &alpha) * &num);
        den_dense = &lden_dense * &beta_e;
        den_atoms.extend(lden);
        den_atoms.extend(beta);
    }
    Ok(FactoredRat::from_num_and_den_atoms(num, den_atoms))
}

fn dense_product(atoms: &[(Atom, u32)]) -> QPoly {
    let mut acc = QPoly::one();
    let mut shift = 0;
    for (a, m) in atoms {
        if *a == Atom::Q {
            shift += *m as usize;
            continue;
        }
        let p = a.poly();
        for _ in 0..*m {
            acc = &acc * &p;
        }
    }
    acc.shift(shift)
}

pub fn truncated_sum(spec: &TermSpec, m: i64) -> Result<QRat, QSeriesError> {
    Ok(truncated_sum_factored(spec, m)?.to_qrat())
}
