use std::time::{Duration, Instant};

use num_traits::{One, Zero};
use qsc::cli::negative_r;
use qsc_core::arith::{derive_seed, int, rat, residue_of_rational};
use qsc_core::catalog::{cross_consistency, instantiate, run, statement, Request, Status, Value, VerificationRecord};
use qsc_core::congruence::{build_modulus, congruent, sample_params, Modulus, ModulusKind, ModulusTerm};
use qsc_core::expr::{eval_expr, parse_expr, Bindings};
use qsc_core::padic::{gamma_p, shifted_factorial, verify_classical, ClassicalParams, PadicError};
use qsc_core::poly::{crt_combine, divisors};
use qsc_core::qseries::{check_terminating_identity, IdentityId, IdentityParams, IDENTITY_IDS};
use qsc_core::{cyclotomic, q_integer, BigRat, MChoice, PadicInt, QPoly, QRat};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

const SEED: u64 = 42;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn describe(rec: &VerificationRecord) -> String {
    let params: Vec<String> = rec.params.iter().map(|(k, v)| format!("{k}={v:?}")).collect();
    format!("{} {} {:?}: {}", rec.id, params.join(" "), rec.m_choice, rec.status.name())
}

/// Runs every request; all must be Verified or Skipped, and at least one Verified.
fn sweep(reqs: Vec<Request>, shape: Option<&str>) -> Outcome {
    let recs: Vec<VerificationRecord> =
        reqs.par_iter().map(|r| run(r).map_err(|e| format!("{}: {e}", r.id))).collect::<Result<_, _>>()?;
    let mut verified = 0;
    let mut skipped = 0;
    for rec in &recs {
        match rec.status {
            Status::Verified => verified += 1,
            Status::Skipped => skipped += 1,
            _ => return Err(describe(rec)),
        }
        if let (Some(s), Status::Verified) = (shape, rec.status) {
            ensure(rec.modulus == s, || format!("{}: modulus {}", describe(rec), rec.modulus))?;
        }
    }
    ensure(verified > 0, || "nothing verified".into())?;
    Ok(format!("{verified} verified, {skipped} skipped"))
}

fn both_m(id: &str, ns: &[i64]) -> Vec<Request> {
    ns.iter().flat_map(|&n| MChoice::BOTH.map(|m| Request::new(id).n(n).m_choice(m).seed(SEED))).collect()
}

fn all_verified(id: &str, ns: &[i64], shape: &str) -> Outcome {
    let reqs = both_m(id, ns);
    let want = reqs.len();
    let got = sweep(reqs, Some(shape))?;
    ensure(got.starts_with(&format!("{want} verified")), || got.clone())?;
    Ok(got)
}

fn thm_a() -> Outcome {
    all_verified("THM_A", &[1, 3, 5, 7, 9, 11, 13, 15], "[n]*Phi(n)^4")
}

fn thm_b() -> Outcome {
    all_verified("THM_B", &[1, 4, 7, 10, 13], "[n]*Phi(n)^4")
}

fn thm_c() -> Outcome {
    all_verified("THM_C", &[2, 5, 8, 11], "[n]*Phi(n)^5")
}

const PARAMETRIC: [&str; 11] = [
    "PROP_2_1", "THM_2_2", "PROP_3_1", "THM_3_2", "THM_3_3", "PROP_5_3", "THM_5_4", "THM_5_5", "NW_A", "NW_B", "NW_23",
];

fn parametric() -> Outcome {
    let mut total = 0;
    for id in PARAMETRIC {
        let st = statement(id).ok_or_else(|| format!("{id} missing"))?;
        let mut reqs = Vec::new();
        for n in 2..=8 {
            let ds: Vec<Option<i64>> = if st.params.contains(&"d") { (3..=5).map(Some).collect() } else { vec![None] };
            for d in ds {
                let ts: Vec<Option<i64>> = match (st.params.contains(&"t"), d) {
                    (false, _) => vec![None],
                    (true, Some(d)) if id == "PROP_5_3" => vec![Some(1), Some(d - 1)],
                    (true, _) => vec![Some(1), Some(2)],
                };
                for t in ts {
                    let mut rs = vec![None];
                    if st.params.contains(&"r") {
                        let d = d.unwrap_or(3);
                        rs = vec![Some(1), Some(-1)];
                        rs.extend(negative_r(id, n, d, t).map(Some));
                    }
                    for r in rs {
                        let ms: &[MChoice] = if st.two_truncations { &MChoice::BOTH } else { &[MChoice::First] };
                        for &m in ms {
                            let mut req = Request::new(id).n(n).m_choice(m).seed(SEED).trials(3);
                            req.d = d;
                            req.t = t;
                            req.r = r;
                            reqs.push(req);
                        }
                    }
                }
            }
        }
        let recs: Vec<VerificationRecord> =
            reqs.par_iter().map(|r| run(r).map_err(|e| format!("{id}: {e}"))).collect::<Result<_, _>>()?;
        let mut verified = 0;
        for rec in &recs {
            match rec.status {
                Status::Skipped => {}
                Status::Verified => {
                    let Some(Value::List(trials)) = rec.witness.get("trials") else {
                        return Err(format!("{}: no trials witness", describe(rec)));
                    };
                    ensure(trials.len() >= 3, || format!("{}: {} trials", describe(rec), trials.len()))?;
                    verified += 1;
                }
                _ => return Err(describe(rec)),
            }
        }
        ensure(verified > 0, || format!("{id}: nothing verified"))?;
        total += verified;
    }
    Ok(format!("{total} parameter points verified, 3 trials each"))
}

fn double_series() -> Outcome {
    let mut reqs = Vec::new();
    for (id, d, r) in
        [("THM_D", 3, 1), ("THM_D", 4, 1), ("THM_D", 5, 1), ("THM_E", 3, 1), ("THM_E", 4, 1), ("THM_E", 5, 1), ("THM_E", 3, -1)]
    {
        let group: Vec<Request> = (1..=10).map(|n| Request::new(id).n(n).d(d).r(r).seed(SEED)).collect();
        sweep(group.clone(), None).map_err(|e| format!("{id} d={d} r={r}: {e}"))?;
        reqs.extend(group);
    }
    let summary = sweep(reqs, None)?;
    let mut cross = 0;
    for (id, residue) in [("THM_D", 1), ("THM_E", 2)] {
        for n in (1..=8).filter(|n| n % 3 == residue) {
            let v = cross_consistency(id, n).map_err(|e| format!("{id} cross n={n}: {e}"))?;
            ensure(v.is_verified(), || format!("{id} cross-consistency fails at n={n}"))?;
            cross += 1;
        }
    }
    Ok(format!("{summary}, {cross} cross-consistency checks"))
}

fn classical_check(id: &str, params: ClassicalParams, k: Option<u32>, branch: Option<&str>) -> Result<(), String> {
    let tag = format!("{id} p={} s={} d={:?} r={:?} {:?}", params.p, params.s, params.d, params.r, params.m_choice);
    let o = verify_classical(id, &params).map_err(|e| format!("{tag}: {e}"))?;
    ensure(o.verdict.is_verified(), || format!("{tag}: {:?}", o.verdict))?;
    if let Some(k) = k {
        let want = format!("{}^{k}", params.p);
        ensure(o.modulus == want, || format!("{tag}: modulus {} (want {want})", o.modulus))?;
    }
    if let Some(b) = branch {
        ensure(o.branch.contains(b), || format!("{tag}: branch {}", o.branch))?;
    }
    Ok(())
}

fn at(p: u64) -> ClassicalParams {
    ClassicalParams { budget: 10_000_000, ..ClassicalParams::new(p, 1) }
}

fn classical() -> Outcome {
    let mut n = 0;
    let mut check = |id: &str, params: ClassicalParams, k: Option<u32>, branch: Option<&str>| {
        n += 1;
        classical_check(id, params, k, branch)
    };
    for p in [5, 13] {
        check("VH_A2", at(p), Some(3), None)?;
    }
    for p in [7, 11] {
        check("VH_A2", at(p), None, Some("3 mod 4"))?;
    }
    for p in [7, 13] {
        check("VH_D2", at(p), Some(4), None)?;
    }
    for p in [7, 11] {
        check("LIU", at(p), Some(4), None)?;
    }
    for p in [7, 11, 13] {
        let branch = if p % 6 == 1 { "1 mod 6" } else { "5 mod 6" };
        check("LR", at(p), Some(6), Some(branch))?;
    }
    for m in MChoice::BOTH {
        for p in [5, 7, 11, 13] {
            check("COR_1_4", at(p).with_m_choice(m), None, None)?;
        }
        let mut p5s2 = at(5).with_m_choice(m);
        p5s2.s = 2;
        check("COR_1_4", p5s2, Some(6), None)?;
        for p in [7, 13] {
            check("COR_1_5", at(p).with_m_choice(m), None, None)?;
        }
        for p in [5, 11] {
            check("COR_1_6", at(p).with_m_choice(m), Some(6), None)?;
        }
    }
    for id in ["COR_5_E", "COR_5_G", "COR_5_H"] {
        for d in [3, 4] {
            let mut hits = 0;
            for p in [5, 7, 11, 13] {
                for r in [1, -1] {
                    for m in MChoice::BOTH {
                        let params = at(p).with_d_r(d, r).with_m_choice(m);
                        match verify_classical(id, &params) {
                            Err(PadicError::SideConditionViolated(_)) => {}
                            _ => {
                                check(id, params, None, None)?;
                                hits += 1;
                            }
                        }
                    }
                }
            }
            ensure(hits > 0, || format!("{id} d={d}: no admissible prime"))?;
        }
    }
    Ok(format!("{n} instances verified"))
}

fn props_1_7_1_8() -> Outcome {
    for (p, k) in [(13, 4), (17, 4), (7, 3), (11, 3)] {
        classical_check("PROP_1_7", at(p), Some(k), None)?;
    }
    for (p, k) in [(7, 4), (13, 4), (5, 5), (11, 5)] {
        classical_check("PROP_1_8", at(p), Some(k), None)?;
    }
    Ok("8 instances verified".into())
}

fn harmonic_sums() -> Outcome {
    for p in [5, 7, 11, 13] {
        classical_check("SUN_H2", at(p), Some(2), None)?;
        classical_check("SUN_H2HALF", at(p), Some(2), None)?;
    }
    for p in [7, 11, 13] {
        classical_check("SUN_H3", at(p), Some(1), None)?;
    }
    let h: BigRat = (1..=6).map(|k| rat(1, k * k)).sum();
    let diff = h - rat(14, 3) * qsc_core::padic::bernoulli(4);
    ensure(diff == rat(5929, 3600), || format!("SUN_H2 at 7: difference {diff}"))?;
    Ok("11 instances verified, p = 7 difference 5929/3600".into())
}

fn identities() -> Outcome {
    for name in IDENTITY_IDS {
        let id = IdentityId::parse(name).ok_or_else(|| format!("{name} unknown"))?;
        let results: Vec<Result<(), String>> = (0..25)
            .into_par_iter()
            .map(|i| {
                let seed = derive_seed(SEED, &[&format!("check={i}")]);
                let o = check_terminating_identity(id, &IdentityParams::default(), seed)
                    .map_err(|e| format!("{name} check {i}: {e}"))?;
                ensure(o.equal, || format!("{name} check {i}: {:?}", o.params))
            })
            .collect();
        results.into_iter().collect::<Result<Vec<()>, String>>()?;
    }
    Ok("4 x 25 exact checks".into())
}

fn random_poly(rng: &mut ChaCha8Rng, max_deg: usize) -> QPoly {
    let len = rng.gen_range(1..=max_deg + 1);
    let cs: Vec<BigRat> = (0..len).map(|_| rat(rng.gen_range(-9..=9), rng.gen_range(1..=4))).collect();
    QPoly::from_rats(&cs)
}

fn random_nonzero(rng: &mut ChaCha8Rng, max_deg: usize) -> QPoly {
    loop {
        let p = random_poly(rng, max_deg);
        if !p.is_zero() {
            return p;
        }
    }
}

fn ring_laws(rng: &mut ChaCha8Rng) -> Result<(), String> {
    for case in 0..200 {
        let (a, b, c) = (random_poly(rng, 5), random_poly(rng, 5), random_poly(rng, 5));
        let ok = &a + &b == &b + &a
            && &a * &b == &b * &a
            && &(&a * &b) * &c == &a * &(&b * &c)
            && &a * &(&b + &c) == &(&a * &b) + &(&a * &c)
            && &a + &(-&a) == QPoly::zero();
        ensure(ok, || format!("ring laws, case {case}"))?;
        let d = random_nonzero(rng, 4);
        let (q, r) = a.divrem(&d).map_err(|e| e.to_string())?;
        ensure(&(&q * &d) + &r == a && (r.is_zero() || r.degree() < d.degree()), || format!("division, case {case}"))?;
        let x = QRat::new(a.clone(), d.clone()).map_err(|e| e.to_string())?;
        let y = QRat::new(b.clone(), random_nonzero(rng, 3)).map_err(|e| e.to_string())?;
        let field = x.is_zero() || ((&x * &x.inv().map_err(|e| e.to_string())?).is_one() && &(&y / &x) * &x == y);
        ensure(field && &x + &y == &y + &x, || format!("field laws, case {case}"))?;
    }
    Ok(())
}

fn cyclotomic_laws() -> Result<(), String> {
    for n in 1..=60u64 {
        let prod = divisors(n).into_iter().fold(QPoly::one(), |acc, d| &acc * &cyclotomic(d));
        let qn = &QPoly::monomial(BigRat::one(), n as usize) - &QPoly::one();
        ensure(prod == qn, || format!("q^{n} - 1"))?;
        let inner = divisors(n).into_iter().filter(|&d| d > 1).fold(QPoly::one(), |acc, d| &acc * &cyclotomic(d));
        ensure(QRat::from_poly(inner) == q_integer(n as i64), || format!("[{n}]"))?;
    }
    Ok(())
}

fn crt_laws(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let mut done = 0;
    while done < 100 {
        let m1 = cyclotomic(rng.gen_range(1..=12));
        let m2 = random_poly(rng, 3);
        if m2.is_constant() || !m1.gcd(&m2).is_constant() {
            continue;
        }
        let r1 = QRat::from_poly(random_poly(rng, 4));
        let r2 = QRat::from_poly(random_poly(rng, 3));
        let x = crt_combine(&r1, &m1, &r2, &m2).map_err(|e| e.to_string())?;
        let back = |r: &QRat, m: &QPoly| r.residue_mod(m).map_err(|e| e.to_string());
        ensure(back(&x, &m1)? == back(&r1, &m1)? && back(&x, &m2)? == back(&r2, &m2)?, || format!("CRT case {done}"))?;
        done += 1;
    }
    Ok(())
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
            return QRat::new(random_poly(rng, 6), den).expect("nonzero denominator");
        }
    }
}

/// `x + m y` for a random unit rational function `y`.
fn shifted(x: &QRat, m: &QPoly, rng: &mut ChaCha8Rng) -> QRat {
    x + &(&QRat::from_poly(m.clone()) * &unit_ratfun(rng, m))
}

fn congruence_laws(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let holds = |a: &QRat, b: &QRat, m: &Modulus| congruent(a, b, m).map(|v| v.is_verified()).unwrap_or(false);
    for case in 0..100 {
        let n = rng.gen_range(2..=7);
        let kind = match rng.gen_range(0..3) {
            0 => ModulusKind::qint(),
            1 => ModulusKind::qint_phi(rng.gen_range(1..=3)),
            _ => ModulusKind::specialized(1),
        };
        let vals = sample_params(&["a", "b"], n, 1, case).map_err(|e| e.to_string())?.assignments;
        let m = build_modulus(&kind, n, &vals).map_err(|e| e.to_string())?;
        let prod = m.product().clone();
        let (a, c) = (unit_ratfun(rng, &prod), unit_ratfun(rng, &prod));
        let (b, d) = (shifted(&a, &prod, rng), shifted(&c, &prod, rng));
        let e = shifted(&b, &prod, rng);
        let ok = holds(&a, &a, &m)
            && holds(&a, &b, &m)
            && holds(&b, &a, &m)
            && holds(&a, &e, &m)
            && !holds(&a, &(&a + &QRat::from_int(1)), &m)
            && holds(&(&a + &c), &(&b + &d), &m)
            && holds(&(&a * &c), &(&b * &d), &m);
        ensure(ok, || format!("congruence laws, case {case}"))?;
    }
    Ok(())
}

fn gamma_laws() -> Result<(), String> {
    const N: u32 = 4;
    for p in [5u64, 7, 11, 13] {
        let g = |x: &BigRat| gamma_p(x, p, N).map_err(|e| format!("Gamma_{p}({x}): {e}"));
        for x in [rat(1, 4), rat(1, 3), rat(1, 2), rat(2, 3), rat(3, 4)] {
            if (x.denom() % p).is_zero() {
                continue;
            }
            let prod = g(&x)? * g(&(BigRat::one() - &x))?;
            let r = residue_of_rational(&-x.clone(), p, 1).map_err(|e| e.to_string())?.residue();
            let want = PadicInt::from_i64(p, N, if r % 2 == 0 { -1 } else { 1 });
            ensure(prod == want, || format!("reflection at x = {x}, p = {p}"))?;
        }
        for x in (1..=2 * p as i64).map(int).chain([rat(1, 2), rat(-7, 3), rat(5, 4)]) {
            if (x.denom() % p).is_zero() {
                continue;
            }
            let divisible = (x.numer() % p).is_zero();
            let factor = if divisible {
                PadicInt::from_i64(p, N, -1)
            } else {
                -residue_of_rational(&x, p, N).map_err(|e| e.to_string())?
            };
            ensure(g(&(&x + BigRat::one()))? == factor * g(&x)?, || format!("functional equation at x = {x}, p = {p}"))?;
        }
    }
    Ok(())
}

fn classical_sum(m: u64, a: i64, x: &BigRat, power: usize, alternating: bool) -> BigRat {
    (0..=m)
        .map(|k| {
            let ratio = shifted_factorial(x, k) / shifted_factorial(&BigRat::one(), k);
            let sign = if alternating && k % 2 == 1 { -1 } else { 1 };
            int(sign * (a * k as i64 + 1)) * num_traits::pow(ratio, power)
        })
        .sum()
}

fn bridge() -> Result<(), String> {
    let at_one = |req: Request| -> Result<Option<BigRat>, String> {
        let inst = instantiate(&req, 0, 0).map_err(|e| e.to_string())?;
        Ok(inst.lhs.to_qrat().eval(&BigRat::one()))
    };
    let b = classical_sum(1, 6, &rat(1, 3), 6, false);
    ensure(b == rat(736, 729), || format!("classical THM_B sum {b}"))?;
    ensure(at_one(Request::new("THM_B").n(4))? == Some(b), || "THM_B at q = 1".into())?;
    let a = classical_sum(2, 4, &rat(1, 2), 5, true);
    ensure(at_one(Request::new("THM_A").n(5))? == Some(a), || "THM_A at q = 1".into())?;
    let c = classical_sum(4, 6, &rat(1, 3), 6, false);
    ensure(at_one(Request::new("THM_C").n(5).m_choice(MChoice::Second))? == Some(c), || "THM_C at q = 1".into())
}

fn pair_relations() -> Result<(), String> {
    let theta = parse_expr("(1 - b*q^n)*(b - q^n)*(-1 - a^2 + a*q^n)/((a - b)*(1 - a*b))").map_err(|e| e.to_string())?;
    let swapped = parse_expr("(1 - a*q^n)*(a - q^n)*(-1 - b^2 + b*q^n)/((b - a)*(1 - b*a))").map_err(|e| e.to_string())?;
    for n in 1..=8 {
        for seed in 0..5 {
            let s = sample_params(&["a", "b"], n, 1, seed).map_err(|e| e.to_string())?.assignments;
            let b = Bindings::new().with_int("n", n).with("a", s["a"].clone()).with("b", s["b"].clone());
            for (expr, x) in [(&theta, "a"), (&swapped, "b")] {
                let kind = ModulusKind(vec![ModulusTerm::Pair { symbol: x.into(), t: 1 }]);
                let m = build_modulus(&kind, n, &s).map_err(|e| e.to_string())?;
                let value = eval_expr(expr, &b).map_err(|e| e.to_string())?;
                let ok = congruent(&value, &QRat::from_int(1), &m).map_err(|e| e.to_string())?.is_verified();
                ensure(ok, || format!("relation-{x}{x} at n = {n}, seed {seed}"))?;
            }
        }
    }
    Ok(())
}

fn lemmas() -> Result<(), String> {
    let mut reqs = Vec::new();
    for n in (3..=23).step_by(4) {
        reqs.push(Request::new("LEM_WEI_K").n(n));
        reqs.push(Request::new("LEM_WEI_N").n(n));
    }
    reqs.extend((1..=21).step_by(2).map(|n| Request::new("LEM_WEI_M").n(n)));
    reqs.extend((2..=14).step_by(3).map(|n| Request::new("LEM_PP").n(n)));
    for req in reqs {
        let rec = run(&req).map_err(|e| e.to_string())?;
        ensure(rec.status == Status::Verified, || describe(&rec))?;
    }
    Ok(())
}

fn properties() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let suites: [(&str, &dyn Fn(&mut ChaCha8Rng) -> Result<(), String>); 9] = [
        ("ring/field", &ring_laws),
        ("cyclotomic", &|_| cyclotomic_laws()),
        ("crt", &crt_laws),
        ("congruence", &congruence_laws),
        ("gamma_p", &|_| gamma_laws()),
        ("bridge", &|_| bridge()),
        ("relation-aa/bb", &|_| pair_relations()),
        ("lemmas", &|_| lemmas()),
        ("bernoulli", &|_| {
            let mut cache = qsc_core::padic::BernoulliCache::new();
            ensure(cache.get(12) == rat(-691, 2730) && cache.satisfies_recurrence(), || "B_12".into())
        }),
    ];
    let mut names = Vec::new();
    for (name, suite) in suites {
        suite(&mut rng).map_err(|e| format!("{name}: {e}"))?;
        names.push(name);
    }
    Ok(names.join(", "))
}

fn negative_controls() -> Outcome {
    let mut n = 0;
    for (id, ns) in [("THM_A", &[3, 5, 7][..]), ("THM_B", &[4, 7][..]), ("THM_C", &[5, 8][..])] {
        for req in both_m(id, ns) {
            let rec = run(&req.corrupted()).map_err(|e| e.to_string())?;
            ensure(rec.status == Status::Failed, || describe(&rec))?;
            let Some(Value::List(trials)) = rec.witness.get("trials") else {
                return Err(format!("{}: no witness", describe(&rec)));
            };
            let degree = trials.first().and_then(|t| t.get("remainder_degree"));
            ensure(matches!(degree, Some(Value::Int(_))), || format!("{}: remainder {degree:?}", describe(&rec)))?;
            n += 1;
        }
    }
    Ok(format!("{n} corrupted instances failed with a remainder"))
}

struct Criterion {
    name: &'static str,
    budget: Duration,
    check: fn() -> Outcome,
}

fn main() {
    let secs = Duration::from_secs;
    let criteria = [
        Criterion { name: "THM_A n in {1,3,..,15}, both M", budget: secs(60), check: thm_a },
        Criterion { name: "THM_B n in {1,4,7,10,13}, both M", budget: secs(60), check: thm_b },
        Criterion { name: "THM_C n in {2,5,8,11}, both M", budget: secs(120), check: thm_c },
        Criterion { name: "parametric statements, n 2..8, d 3..5", budget: secs(600), check: parametric },
        Criterion { name: "THM_D / THM_E double series", budget: secs(300), check: double_series },
        Criterion { name: "classical p-adic congruences", budget: secs(300), check: classical },
        Criterion { name: "PROP_1_7 / PROP_1_8", budget: secs(60), check: props_1_7_1_8 },
        Criterion { name: "harmonic sums", budget: secs(60), check: harmonic_sums },
        Criterion { name: "terminating identities", budget: secs(60), check: identities },
        Criterion { name: "property suites", budget: secs(300), check: properties },
        Criterion { name: "negative controls", budget: secs(120), check: negative_controls },
    ];
    let mut failures = 0;
    for (i, c) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = (c.check)();
        let elapsed = start.elapsed();
        let (ok, detail) = match result {
            Ok(d) if elapsed <= c.budget => (true, d),
            Ok(d) => (false, format!("{d}; over budget")),
            Err(e) => (false, e),
        };
        if !ok {
            failures += 1;
        }
        println!(
            "{} {:>2} {}: {} ({:.2}s / {}s)",
            if ok { "PASS" } else { "FAIL" },
            i + 1,
            c.name,
            detail,
            elapsed.as_secs_f64(),
            c.budget.as_secs()
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
