use num_complex::Complex64;
use picard_ff::character::{
    jacobi_sum, lemma21_expand, lemma21_lhs, norm_binomial, Character, ZeroConvention,
};
use picard_ff::field::prime_power;
use picard_ff::verify::verify_lemma21;
use picard_ff::{Cyclotomic, Elem, Field};
use proptest::prelude::*;

const CONV: ZeroConvention = ZeroConvention::GreeneAllZero;

fn small_orders() -> Vec<u64> {
    (3..=49).filter(|&q| prime_power(q).is_some()).collect()
}

#[test]
fn multiplicativity_is_exhaustive_up_to_49() {
    for q in small_orders() {
        let f = Field::with_order(q).unwrap();
        for chi in Character::all(&f) {
            for x in f.nonzero() {
                let cx = chi.eval(&f, x, CONV);
                for y in f.nonzero() {
                    assert_eq!(
                        chi.eval(&f, f.mul(x, y), CONV),
                        &cx * &chi.eval(&f, y, CONV),
                        "q={q} m={} x={x} y={y}",
                        chi.exponent()
                    );
                }
            }
        }
    }
}

#[test]
fn second_orthogonality() {
    for q in small_orders() {
        let f = Field::with_order(q).unwrap();
        for t in f.nonzero() {
            let s: Cyclotomic = Character::all(&f).map(|chi| chi.eval(&f, t, CONV)).sum();
            let expected = if t == Elem::ONE { q as i64 - 1 } else { 0 };
            assert_eq!(s, Cyclotomic::from_int(expected), "q={q} t={t}");
        }
    }
}

#[test]
fn jacobi_sums_are_symmetric() {
    for q in [7u64, 9, 13, 16, 25] {
        let f = Field::with_order(q).unwrap();
        for a in Character::all(&f) {
            for b in Character::all(&f) {
                assert_eq!(jacobi_sum(&f, a, b, CONV), jacobi_sum(&f, b, a, CONV));
            }
        }
    }
}

#[test]
fn jacobi_sum_of_inverse_pair() {
    // J(A, Ā) = -A(-1) for A nontrivial
    for q in [7u64, 8, 13, 25, 27] {
        let f = Field::with_order(q).unwrap();
        for a in Character::all(&f).filter(|a| !a.is_trivial()) {
            let expected = -a.eval(&f, f.minus_one(), CONV);
            assert_eq!(jacobi_sum(&f, a, a.conj(), CONV), expected, "q={q} m={}", a.exponent());
        }
    }
}

#[test]
fn jacobi_sums_match_complex_gauss_sum_ratio() {
    // J(A, B) = g(A) g(B) / g(AB) for A, B, AB nontrivial, with additive
    // character ψ(x) = exp(2πi x / p) on F_p.
    for p in [7u64, 11, 13] {
        let f = Field::new(p, 1).unwrap();
        let gauss = |chi: Character| -> Complex64 {
            f.nonzero()
                .map(|x| {
                    let psi = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * x.code() as f64 / p as f64);
                    chi.eval(&f, x, CONV).to_complex() * psi
                })
                .sum()
        };
        for a in Character::all(&f) {
            for b in Character::all(&f) {
                if a.is_trivial() || b.is_trivial() || a.mul(b).is_trivial() {
                    continue;
                }
                let expected = gauss(a) * gauss(b) / gauss(a.mul(b));
                let got = jacobi_sum(&f, a, b, CONV).to_complex();
                assert!((got - expected).norm() < 1e-9, "p={p}");
            }
        }
    }
}

#[test]
fn binomial_identities_hold_under_all_zero_convention() {
    for q in [7u64, 13, 16, 25] {
        let f = Field::with_order(q).unwrap();
        let s = verify_lemma21(&f, CONV);
        assert!(s.passed(), "q={q}: {:?}", s.mismatches.first());
        assert!(s.cases > 0);
    }
}

#[test]
fn expansion_identity_fails_with_trivial_character_one_at_zero() {
    let f = Field::with_order(7).unwrap();
    let eps = Character::trivial(&f);
    let conv = ZeroConvention::PaperTrivialOne;
    let lhs = lemma21_lhs(&f, eps, Elem::ONE, conv);
    let rhs = lemma21_expand(&f, eps, Elem::ONE, conv);
    assert_eq!(lhs, Cyclotomic::from_int(1));
    assert_ne!(lhs, rhs);
    // and the same point is fine under the all-zero convention
    assert_eq!(lemma21_lhs(&f, eps, Elem::ONE, CONV), lemma21_expand(&f, eps, Elem::ONE, CONV));
}

#[test]
fn binomial_of_trivial_characters() {
    // (ε over ε) = J(ε, ε)/q = (q - 2)/q
    for q in [5u64, 7, 9, 16] {
        let f = Field::with_order(q).unwrap();
        let e = Character::trivial(&f);
        let v = norm_binomial(&f, e, e, CONV);
        assert_eq!(v, Cyclotomic::from_int(q as i64 - 2).scale(&num_rational::BigRational::new(1.into(), (q as i64).into())));
    }
}

proptest! {
    #[test]
    fn character_values_are_roots_of_unity(q in prop::sample::select(small_orders()), m in 0u32..1000, x in 1u64..1000) {
        let f = Field::with_order(q).unwrap();
        let chi = Character::new(&f, m % (q as u32 - 1)).unwrap();
        let x = f.elem(x % (q - 1) + 1).unwrap();
        let v = chi.eval(&f, x, CONV);
        prop_assert!((v.to_complex().norm() - 1.0).abs() < 1e-12);
        let k = chi.order() as i64;
        prop_assert_eq!(chi.pow(k).eval(&f, x, CONV), Cyclotomic::one());
        prop_assert_eq!(chi.conj().eval(&f, x, CONV), v.conj());
    }

    #[test]
    fn jacobi_norm_is_q(q in prop::sample::select(small_orders()), ma in 1u32..1000, mb in 1u32..1000) {
        let f = Field::with_order(q).unwrap();
        let n = q as u32 - 1;
        let a = Character::new(&f, ma % n).unwrap();
        let b = Character::new(&f, mb % n).unwrap();
        prop_assume!(!a.is_trivial() && !b.is_trivial() && !a.mul(b).is_trivial());
        let j = jacobi_sum(&f, a, b, CONV);
        prop_assert_eq!(&j * &j.conj(), Cyclotomic::from_int(q as i64));
        prop_assert!((j.to_complex().norm() - (q as f64).sqrt()).abs() < 1e-9);
    }
}
