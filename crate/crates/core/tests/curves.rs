use picard_ff::character::Character;
use picard_ff::curve::{
    admissible_pairs, count_bruteforce, count_charsum, count_charsum_with, hasse_weil_bound,
    hasse_weil_ok, koike_check, picard_report, trace_frobenius, trace_via_theorem,
    trace_via_theorem_with, CurveError, CurveParams, Family,
};
use picard_ff::verify::{verify_count_formula, verify_theorem};
use picard_ff::{Cyclotomic, Field};
use proptest::prelude::*;

fn theorem_primes() -> Vec<u64> {
    (7..=103).filter(|&p| picard_ff::field::is_prime(p) && p % 3 == 1).collect()
}

#[test]
fn theorem_holds_exhaustively_on_small_fields() {
    let fields: Vec<Field> = [7u64, 13, 25].iter().map(|&q| Field::with_order(q).unwrap()).collect();
    let s = verify_theorem(&fields, 1).unwrap();
    assert!(s.passed(), "{:?}", s.mismatches.first());
    assert_eq!(s.cases, 20 + 110 + 506);
}

#[test]
fn count_formula_holds_exhaustively() {
    for q in [7u64, 13, 25] {
        let f = Field::with_order(q).unwrap();
        let s = verify_count_formula(&f).unwrap();
        assert!(s.passed(), "q={q}: {:?}", s.mismatches.first());
    }
}

#[test]
fn terms_form_a_conjugate_pair_and_cubic_choice_is_irrelevant() {
    for q in [7u64, 13, 19, 25] {
        let f = Field::with_order(q).unwrap();
        let chi = Character::cubic(&f).unwrap();
        for (l, m) in admissible_pairs(&f) {
            let params = CurveParams::picard(&f, l, m).unwrap();
            let v = trace_via_theorem(&params).unwrap();
            assert_eq!(v.terms[1], v.terms[0].conj());
            let w = trace_via_theorem_with(&params, chi.conj()).unwrap();
            assert_eq!(w.total, v.total);
            assert_eq!(w.terms[0], v.terms[1]);
            assert_eq!(count_charsum_with(&params, chi.conj()).unwrap(), count_charsum(&params).unwrap());
        }
    }
}

#[test]
fn legendre_family_traces() {
    // y^2 = x(x-1)(x+1) over F_5 has 8 points
    let f = Field::with_order(5).unwrap();
    let params = CurveParams::legendre(&f, f.elem(4).unwrap()).unwrap();
    assert_eq!(count_bruteforce(&params), 8);
    assert_eq!(trace_frobenius(&params), -2);
    let report = koike_check(&params).unwrap();
    assert!(report.matches);
    assert_eq!(report.family, Family::Legendre);
    assert!(hasse_weil_ok(&report));
}

#[test]
fn invalid_parameters_are_rejected() {
    let f7 = Field::with_order(7).unwrap();
    let e = |k| f7.elem(k).unwrap();
    assert!(matches!(CurveParams::picard(&f7, e(2), e(2)), Err(CurveError::CoincidentRoots)));
    assert!(matches!(CurveParams::picard(&f7, e(1), e(2)), Err(CurveError::DegenerateParameter(_))));
    assert!(matches!(CurveParams::picard(&f7, e(3), e(0)), Err(CurveError::DegenerateParameter(_))));
    let f11 = Field::with_order(11).unwrap();
    assert!(matches!(
        CurveParams::picard(&f11, f11.elem(2).unwrap(), f11.elem(3).unwrap()),
        Err(CurveError::NotOneModThree(11))
    ));
    let f4 = Field::with_order(4).unwrap();
    assert!(CurveParams::picard(&f4, f4.elem(2).unwrap(), f4.elem(3).unwrap()).is_err());
    let f8 = Field::with_order(8).unwrap();
    assert!(CurveParams::legendre(&f8, f8.elem(2).unwrap()).is_err());
    let f9 = Field::with_order(9).unwrap();
    assert!(CurveParams::picard_any_q(&f9, f9.elem(2).unwrap(), f9.elem(3).unwrap()).is_err());
}

#[test]
fn hasse_weil_bounds() {
    // floor(2g sqrt(q))
    assert_eq!(hasse_weil_bound(Family::Picard, 7), 15);
    assert_eq!(hasse_weil_bound(Family::Legendre, 7), 5);
    assert_eq!(hasse_weil_bound(Family::Picard, 25), 30);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn theorem_at_random_primes(p in prop::sample::select(theorem_primes()), l in 2u64..200, m in 2u64..200) {
        let f = Field::new(p, 1).unwrap();
        let (l, m) = (l % (p - 2) + 2, m % (p - 2) + 2);
        prop_assume!(l != m);
        let params = CurveParams::picard(&f, f.elem(l).unwrap(), f.elem(m).unwrap()).unwrap();
        let report = picard_report(&params).unwrap();
        prop_assert!(report.matches);
        prop_assert!(hasse_weil_ok(&report));
        prop_assert_eq!(report.rhs.clone(), Cyclotomic::from_int(report.trace));
        let swapped = CurveParams::picard(&f, params.mu().unwrap(), params.lambda()).unwrap();
        prop_assert_eq!(trace_frobenius(&swapped), report.trace);
    }

    #[test]
    fn brute_force_count_any_q(
        q in prop::sample::select(vec![5u64, 11, 17, 23, 25, 29, 49, 125]),
        l in 2u64..200,
        m in 2u64..200,
    ) {
        let f = Field::with_order(q).unwrap();
        let (l, m) = (l % (q - 2) + 2, m % (q - 2) + 2);
        prop_assume!(l != m);
        let params = CurveParams::picard_any_q(&f, f.elem(l).unwrap(), f.elem(m).unwrap()).unwrap();
        // cubing is a bijection when q = 2 (mod 3): exactly one y per x
        if q % 3 == 2 {
            prop_assert_eq!(count_bruteforce(&params), q + 1);
        }
        let t = trace_frobenius(&params);
        prop_assert!(t * t <= 36 * q as i64);
    }
}
