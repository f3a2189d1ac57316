use num_traits::One;
use qsc_core::arith::{int, rat};
use qsc_core::catalog::{cross_consistency, instantiate, list_statements, run, Kind, Request, Status, Value};
use qsc_core::padic::shifted_factorial;
use qsc_core::{BigRat, MChoice};

fn status(req: Request) -> Status {
    run(&req).unwrap().status
}

/// `sum_{k<=m} sign^k (a k + 1) ((x)_k / k!)^power`.
fn classical_sum(m: u64, a: i64, x: &BigRat, power: i32, alternating: bool) -> BigRat {
    (0..=m)
        .map(|k| {
            let ratio = shifted_factorial(x, k) / shifted_factorial(&BigRat::one(), k);
            let sign = if alternating && k % 2 == 1 { -1 } else { 1 };
            int(sign * (a * k as i64 + 1)) * num_traits::pow(ratio, power as usize)
        })
        .sum()
}

#[test]
fn sums_at_q_equal_one() {
    let lhs = instantiate(&Request::new("THM_B").n(4), 0, 0).unwrap().lhs.to_qrat();
    let want = classical_sum(1, 6, &rat(1, 3), 6, false);
    assert_eq!(want, rat(736, 729));
    assert_eq!(lhs.eval(&BigRat::one()), Some(want));

    let lhs = instantiate(&Request::new("THM_A").n(5), 0, 0).unwrap().lhs.to_qrat();
    assert_eq!(lhs.eval(&BigRat::one()), Some(classical_sum(2, 4, &rat(1, 2), 5, true)));

    let lhs = instantiate(&Request::new("THM_C").n(5).m_choice(MChoice::Second), 0, 0).unwrap().lhs.to_qrat();
    assert_eq!(lhs.eval(&BigRat::one()), Some(classical_sum(4, 6, &rat(1, 3), 6, false)));
}

#[test]
fn lemmas_over_ranges() {
    for n in (3..=23).step_by(4) {
        assert_eq!(status(Request::new("LEM_WEI_K").n(n)), Status::Verified, "K, n = {n}");
        assert_eq!(status(Request::new("LEM_WEI_N").n(n)), Status::Verified, "N, n = {n}");
    }
    for n in (1..=21).step_by(2) {
        assert_eq!(status(Request::new("LEM_WEI_M").n(n)), Status::Verified, "M, n = {n}");
    }
    for n in (2..=14).step_by(3) {
        assert_eq!(status(Request::new("LEM_PP").n(n)), Status::Verified, "PP, n = {n}");
        for m in MChoice::BOTH {
            assert_eq!(status(Request::new("LEM_OO").n(n).m_choice(m)), Status::Verified, "OO, n = {n}");
        }
    }
    for n in 0..=10 {
        assert_eq!(status(Request::new("LEM_REL").n(n)), Status::Verified, "REL, n = {n}");
    }
    assert_eq!(status(Request::new("LEM_WEI_K").n(5)), Status::Skipped);
}

#[test]
fn double_series_against_special_cases() {
    for n in (1..=8).filter(|n| n % 3 == 1) {
        assert!(cross_consistency("THM_D", n).unwrap().is_verified(), "n = {n}");
    }
    for n in (2..=8).filter(|n| n % 3 == 2) {
        assert!(cross_consistency("THM_E", n).unwrap().is_verified(), "n = {n}");
    }
}

#[test]
fn corrupted_right_sides_fail() {
    for (id, n) in [("THM_A", 5), ("THM_A", 7), ("THM_B", 7), ("THM_C", 5), ("THM_D", 4)] {
        let mut req = Request::new(id).n(n).corrupted();
        if id == "THM_D" {
            req = req.d(3).r(1);
        }
        let rec = run(&req).unwrap();
        assert_eq!(rec.status, Status::Failed, "{id} n = {n}");
        let Some(Value::List(trials)) = rec.witness.get("trials") else { panic!("{rec:?}") };
        assert!(matches!(trials[0].get("remainder_degree"), Some(Value::Int(_))));
    }
}

#[test]
fn every_statement_runs() {
    for st in list_statements() {
        let req = match st.kind {
            Kind::Classical => {
                let mut r = Request::new(st.id).p(7).s(1);
                if st.params.contains(&"d") {
                    r = r.d(3).r(-1);
                }
                r
            }
            _ => {
                let mut r = Request::new(st.id).n(5).d(3).r(1).t(2);
                r.d = st.params.contains(&"d").then_some(3);
                r.r = st.params.contains(&"r").then_some(if st.id == "THM_D" { -1 } else { 1 });
                r.t = st.params.contains(&"t").then_some(if st.id == "PROP_5_3" { 1 } else { 2 });
                r
            }
        };
        let rec = run(&req).unwrap();
        assert!(matches!(rec.status, Status::Verified | Status::Skipped), "{}: {rec:?}", st.id);
        assert_eq!(rec.m_choice.is_some(), st.two_truncations, "{}", st.id);
    }
}

#[test]
fn reruns_are_identical() {
    let req = Request::new("THM_5_4").n(5).d(4).r(1).seed(9);
    assert_eq!(run(&req).unwrap(), run(&req).unwrap());
    let other = run(&req.clone().seed(10)).unwrap();
    assert_ne!(run(&req).unwrap().witness, other.witness);
}
