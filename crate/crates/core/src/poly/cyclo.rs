//! Cyclotomic polynomials and q-integers.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use once_cell::race::OnceBox;

use super::{QPoly, QRat};

const CACHED: usize = 1024;

static TABLE: [OnceBox<QPoly>; CACHED] = [const { OnceBox::new() }; CACHED];

pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

fn compute(n: u64) -> QPoly {
    let mut coeffs = vec![BigInt::zero(); n as usize + 1];
    coeffs[0] = -BigInt::one();
    coeffs[n as usize] = BigInt::one();
    let mut acc = QPoly::from_int_coeffs(coeffs);
    for d in divisors(n) {
        if d == n {
            continue;
        }
        let phi = cyclotomic_ref(d);
        acc = acc
            .exact_div_primitive(phi.int_parts().0)
            .expect("q^n - 1 is divisible by every Phi_d with d | n");
    }
    acc
}

/// Shared, lazily filled table entry for small `n`; computed fresh above the
/// cache size. Concurrent first access at worst computes an entry twice.
pub(crate) fn cyclotomic_ref(n: u64) -> alloc::borrow::Cow<'static, QPoly> {
    assert!(n >= 1, "cyclotomic index must be positive");
    match TABLE.get(n as usize) {
        Some(cell) => {
            alloc::borrow::Cow::Borrowed(cell.get_or_init(|| alloc::boxed::Box::new(compute(n))))
        }
        None => alloc::borrow::Cow::Owned(compute(n)),
    }
}

/// The n-th cyclotomic polynomial, by exact division of `q^n - 1` by the
/// cyclotomic polynomials of the proper divisors of `n`.
pub fn cyclotomic(n: u64) -> QPoly {
    cyclotomic_ref(n).into_owned()
}

/// `[r] = 1 + q + ... + q^(r-1)` for `r >= 0`.
pub fn q_integer_poly(r: u64) -> QPoly {
    QPoly::from_int_coeffs(vec![BigInt::one(); r as usize])
}

/// `[r] = (1 - q^r)/(1 - q)`; for negative `r` this is `-[-r]/q^(-r)`.
pub fn q_integer(r: i64) -> QRat {
    if r >= 0 {
        QRat::from_poly(q_integer_poly(r as u64))
    } else {
        let m = r.unsigned_abs();
        QRat::from_parts_unchecked(-q_integer_poly(m), QPoly::q().pow(m as u32))
    }
}
