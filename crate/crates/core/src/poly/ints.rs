//! Kernels on integer coefficient vectors (lowest degree first).

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::QPoly;
use crate::arith::BigRat;

const KARATSUBA_THRESHOLD: usize = 32;

pub(super) fn trim(v: &mut Vec<BigInt>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

/// Positive gcd of the coefficients; 0 for an empty vector.
pub(super) fn content(v: &[BigInt]) -> BigInt {
    let mut g = BigInt::zero();
    for c in v {
        if c.is_zero() {
            continue;
        }
        g = g.gcd(c);
        if g.is_one() {
            break;
        }
    }
    g
}

fn nonzero_count(v: &[BigInt]) -> usize {
    v.iter().filter(|c| !c.is_zero()).count()
}

pub(super) fn mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    if nonzero_count(a).min(nonzero_count(b)) < KARATSUBA_THRESHOLD {
        return schoolbook(a, b);
    }
    karatsuba(a, b)
}

fn schoolbook(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let (a, b) = if nonzero_count(a) <= nonzero_count(b) { (a, b) } else { (b, a) };
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        if x.is_one() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] += y;
            }
        } else if (-x).is_one() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] -= y;
            }
        } else {
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    out[i + j] += x * y;
                }
            }
        }
    }
    out
}

fn add_into(acc: &mut Vec<BigInt>, v: &[BigInt], offset: usize) {
    if acc.len() < offset + v.len() {
        acc.resize(offset + v.len(), BigInt::zero());
    }
    for (i, c) in v.iter().enumerate() {
        acc[offset + i] += c;
    }
}

fn sum(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = a.to_vec();
    add_into(&mut out, b, 0);
    out
}

fn karatsuba(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.len().min(b.len()) < KARATSUBA_THRESHOLD {
        return schoolbook(a, b);
    }
    let m = a.len().max(b.len()) / 2;
    let (a0, a1) = a.split_at(m.min(a.len()));
    let (b0, b1) = b.split_at(m.min(b.len()));
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    if a1.is_empty() || b1.is_empty() {
        // Unbalanced: split only the longer operand.
        let (long0, long1, short) = if a1.is_empty() { (b0, b1, a) } else { (a0, a1, b) };
        add_into(&mut out, &karatsuba(long0, short), 0);
        add_into(&mut out, &karatsuba(long1, short), m);
        return out;
    }
    let z0 = karatsuba(a0, b0);
    let z2 = karatsuba(a1, b1);
    let mut z1 = karatsuba(&sum(a0, a1), &sum(b0, b1));
    for (i, c) in z0.iter().enumerate() {
        z1[i] -= c;
    }
    for (i, c) in z2.iter().enumerate() {
        z1[i] -= c;
    }
    add_into(&mut out, &z0, 0);
    add_into(&mut out, &z1, m);
    add_into(&mut out, &z2, 2 * m);
    out.truncate(a.len() + b.len() - 1);
    out
}

/// `f / g` over the integers when `g` (primitive) divides `f`, else `None`.
///
/// By Gauss's lemma a primitive divisor leaves an integral quotient, so a
/// leading coefficient not divisible by `lc(g)` refutes divisibility early.
pub(super) fn exact_div(f: &[BigInt], g: &[BigInt]) -> Option<Vec<BigInt>> {
    let dg = g.len().checked_sub(1)?;
    if f.is_empty() {
        return Some(Vec::new());
    }
    if f.len() < g.len() {
        return None;
    }
    let lc = &g[dg];
    let unit_lc = lc.is_one();
    let tail: Vec<(usize, &BigInt)> = g[..dg]
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .collect();
    let mut r = f.to_vec();
    let mut q = vec![BigInt::zero(); f.len() - dg];
    for i in (0..q.len()).rev() {
        let top = core::mem::take(&mut r[i + dg]);
        if top.is_zero() {
            continue;
        }
        let c = if unit_lc {
            top
        } else {
            let (c, rem) = top.div_rem(lc);
            if !rem.is_zero() {
                return None;
            }
            c
        };
        for &(j, gj) in &tail {
            if gj.is_one() {
                r[i + j] -= &c;
            } else if (-gj).is_one() {
                r[i + j] += &c;
            } else {
                r[i + j] -= &c * gj;
            }
        }
        q[i] = c;
    }
    if r[..dg].iter().any(|c| !c.is_zero()) {
        return None;
    }
    Some(q)
}

/// Division of integer vectors over the rationals.
///
/// Returns `(quot, r, scale)` with `F = G*quot + r/scale`, where `quot` is a
/// rational polynomial and `deg r < deg G`.
pub(super) fn divrem(f: &[BigInt], g: &[BigInt]) -> (QPoly, Vec<BigInt>, BigInt) {
    let dg = g.len() - 1;
    if f.len() < g.len() {
        return (QPoly::zero(), f.to_vec(), BigInt::one());
    }
    let lc = &g[dg];
    let mut r = f.to_vec();
    let mut scale = BigInt::one();
    let mut quot = vec![BigRat::zero(); f.len() - dg];
    for i in (0..quot.len()).rev() {
        let top = core::mem::take(&mut r[i + dg]);
        if top.is_zero() {
            continue;
        }
        let g1 = top.gcd(lc);
        let mut mult = lc / &g1;
        let mut c = &top / &g1;
        if mult.is_negative() {
            mult = -mult;
            c = -c;
        }
        quot[i] = BigRat::new(top.clone(), lc * &scale);
        if !mult.is_one() {
            for x in r[..i + dg].iter_mut() {
                *x *= &mult;
            }
            scale *= &mult;
        }
        for (j, gj) in g[..dg].iter().enumerate() {
            if !gj.is_zero() {
                r[i + j] -= &c * gj;
            }
        }
        if !scale.is_one() && i % 8 == 0 {
            let cont = content(&r[..i + dg]).gcd(&scale);
            if !cont.is_one() && !cont.is_zero() {
                for x in r[..i + dg].iter_mut() {
                    *x /= &cont;
                }
                scale /= &cont;
            }
        }
    }
    r.truncate(dg);
    trim(&mut r);
    (QPoly::from_rats(&quot), r, scale)
}
