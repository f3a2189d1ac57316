use std::collections::BTreeMap;

use qsc_core::arith::rat;
use qsc_core::congruence::{build_modulus, congruent, sample_params, Modulus, ModulusKind};
use qsc_core::expr::{eval_expr, parse_expr, Bindings};
use qsc_core::{BigRat, QPoly, QRat};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_poly(rng: &mut ChaCha8Rng, max_deg: usize) -> QPoly {
    let len = rng.gen_range(1..=max_deg + 1);
    let cs: Vec<BigRat> = (0..len).map(|_| rat(rng.gen_range(-9..=9), rng.gen_range(1..=3))).collect();
    QPoly::from_rats(&cs)
}

/// A rational function with denominator `c (q^j + 2)`, resampled until it is a unit modulo `m`.
fn unit_ratfun(rng: &mut ChaCha8Rng, m: &QPoly) -> QRat {
    loop {
        let j = rng.gen_range(1..=3);
        let mut den = vec![0i64; j + 1];
        den[0] = 2;
        den[j] = 1;
        let den = QPoly::from_ints(&den).scale(&rat(rng.gen_range(1..=5), 1));
        if den.gcd(m).is_constant() {
            return QRat::new(random_poly(rng, 6), den).unwrap();
        }
    }
}

fn random_modulus(rng: &mut ChaCha8Rng, case: u64) -> (Modulus, QPoly) {
    let n = rng.gen_range(2..=7);
    let kind = match rng.gen_range(0..3) {
        0 => ModulusKind::qint(),
        1 => ModulusKind::qint_phi(rng.gen_range(1..=3)),
        _ => ModulusKind::specialized(1),
    };
    let params = sample_params(&["a", "b"], n, 1, case).unwrap().assignments;
    let m = build_modulus(&kind, n, &params).unwrap();
    let product = m.product().clone();
    (m, product)
}

/// `a + m x` for a random unit rational function `x`.
fn shifted(a: &QRat, m: &QPoly, rng: &mut ChaCha8Rng) -> QRat {
    a + &(&QRat::from_poly(m.clone()) * &unit_ratfun(rng, m))
}

fn holds(a: &QRat, b: &QRat, m: &Modulus) -> bool {
    congruent(a, b, m).unwrap().is_verified()
}

#[test]
fn equivalence_relation() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for case in 0..100 {
        let (m, prod) = random_modulus(&mut rng, case);
        let a = unit_ratfun(&mut rng, &prod);
        let b = shifted(&a, &prod, &mut rng);
        let c = shifted(&b, &prod, &mut rng);
        assert!(holds(&a, &a, &m), "reflexive, case {case}");
        assert!(holds(&a, &b, &m) && holds(&b, &a, &m), "symmetric, case {case}");
        assert!(holds(&b, &c, &m) && holds(&a, &c, &m), "transitive, case {case}");
        let off = &a + &QRat::from_int(1);
        assert!(!holds(&a, &off, &m), "distinct residues, case {case}");
        if let Some(w) = m.weaker() {
            assert!(holds(&a, &b, &w), "weaker modulus, case {case}");
        }
    }
}

#[test]
fn compatibility() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for case in 0..100 {
        let (m, prod) = random_modulus(&mut rng, case);
        let a = unit_ratfun(&mut rng, &prod);
        let c = unit_ratfun(&mut rng, &prod);
        let b = shifted(&a, &prod, &mut rng);
        let d = shifted(&c, &prod, &mut rng);
        assert!(holds(&(&a + &c), &(&b + &d), &m), "sum, case {case}");
        assert!(holds(&(&a * &c), &(&b * &d), &m), "product, case {case}");
    }
}

#[test]
fn theta_is_one_at_its_own_pair() {
    let theta = parse_expr("(1 - b*q^n)*(b - q^n)*(-1 - a^2 + a*q^n)/((a - b)*(1 - a*b))").unwrap();
    let swapped = parse_expr("(1 - a*q^n)*(a - q^n)*(-1 - b^2 + b*q^n)/((b - a)*(1 - b*a))").unwrap();
    for n in 1..=8 {
        for seed in 0..5 {
            let s = sample_params(&["a", "b"], n, 1, seed).unwrap().assignments;
            let b = Bindings::new().with_int("n", n).with("a", s["a"].clone()).with("b", s["b"].clone());
            let one = QRat::from_int(1);
            for (expr, x) in [(&theta, "a"), (&swapped, "b")] {
                let kind = ModulusKind(vec![qsc_core::congruence::ModulusTerm::Pair { symbol: x.into(), t: 1 }]);
                let m = build_modulus(&kind, n, &s).unwrap();
                let value = eval_expr(expr, &b).unwrap();
                assert!(holds(&value, &one, &m), "n = {n}, seed {seed}, pair {x}");
            }
        }
    }
}

#[test]
fn frozen_sampler_values() {
    let s = sample_params(&["a", "b"], 2, 1, 42).unwrap();
    let got: BTreeMap<String, String> = s.assignments.iter().map(|(k, v)| (k.clone(), v.to_string())).collect();
    assert_eq!(got, BTreeMap::from([("a".into(), "5/6".into()), ("b".into(), "-2".into())]));
    assert_eq!(s.rejection_count, 0);
    assert!(sample_params(&[], 2, 1, 42).unwrap().assignments.is_empty());
}
