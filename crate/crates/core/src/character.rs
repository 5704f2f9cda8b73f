//! Multiplicative characters of `F_q^×`, Jacobi sums, and Greene's
//! normalized binomial coefficients.
//!
//! A character is identified by its exponent `m` on the field's fixed
//! generator `g`: `χ_m(g) = ζ_{q-1}^m`. How a character is extended to `0` is
//! an explicit [`ZeroConvention`] everywhere it matters.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use serde::Serialize;
use thiserror::Error;

use crate::cyclotomic::{Cyclotomic, GroupRing};
use crate::field::{Elem, Field};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CharacterError {
    #[error("no character of order {order} exists over F_{q} (need {order} | q - 1)")]
    NoSuchOrder { order: u32, q: u32 },
    #[error("character exponent {m} is out of range for F_{q}")]
    ExponentOutOfRange { m: u32, q: u32 },
    #[error("character belongs to a group of order {got}, field has q - 1 = {expected}")]
    WrongField { got: u32, expected: u32 },
    #[error("unknown zero convention `{0}` (expected greene-all-zero or paper-trivial-one)")]
    UnknownConvention(String),
}

/// How characters are extended from `F_q^×` to `F_q`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ZeroConvention {
    /// `χ(0) = 0` for every `χ`, including the trivial character.
    #[default]
    GreeneAllZero,
    /// `χ(0) = 0` for `χ ≠ ε` and `ε(0) = 1`.
    PaperTrivialOne,
}

impl ZeroConvention {
    #[inline]
    pub fn value_at_zero(self, chi: Character) -> bool {
        self == ZeroConvention::PaperTrivialOne && chi.is_trivial()
    }
}

impl FromStr for ZeroConvention {
    type Err = CharacterError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "greene-all-zero" | "greene" => Ok(ZeroConvention::GreeneAllZero),
            "paper-trivial-one" | "paper" => Ok(ZeroConvention::PaperTrivialOne),
            other => Err(CharacterError::UnknownConvention(other.to_string())),
        }
    }
}

impl fmt::Display for ZeroConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ZeroConvention::GreeneAllZero => "greene-all-zero",
            ZeroConvention::PaperTrivialOne => "paper-trivial-one",
        })
    }
}

/// A multiplicative character of `F_q^×`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Character {
    exponent: u32,
    /// `q - 1`
    group_order: u32,
}

impl Character {
    pub fn new(field: &Field, m: u32) -> Result<Self, CharacterError> {
        let n = field.order() - 1;
        if m >= n.max(1) {
            return Err(CharacterError::ExponentOutOfRange { m, q: field.order() });
        }
        Ok(Character { exponent: m, group_order: n })
    }

    pub fn trivial(field: &Field) -> Self {
        Character { exponent: 0, group_order: field.order() - 1 }
    }

    /// The canonical character of exact order `k`: exponent `(q-1)/k`.
    pub fn of_order(field: &Field, k: u32) -> Result<Self, CharacterError> {
        let n = field.order() - 1;
        if k == 0 || n % k != 0 {
            return Err(CharacterError::NoSuchOrder { order: k, q: field.order() });
        }
        Ok(Character { exponent: (n / k) % n.max(1), group_order: n })
    }

    pub fn cubic(field: &Field) -> Result<Self, CharacterError> {
        Character::of_order(field, 3)
    }

    pub fn quadratic(field: &Field) -> Result<Self, CharacterError> {
        Character::of_order(field, 2)
    }

    pub fn exponent(self) -> u32 {
        self.exponent
    }

    /// `q - 1` for the field this character lives on.
    pub fn group_order(self) -> u32 {
        self.group_order
    }

    pub fn order(self) -> u32 {
        self.group_order / self.exponent.gcd(&self.group_order)
    }

    pub fn is_trivial(self) -> bool {
        self.exponent == 0
    }

    /// The inverse (complex conjugate) character.
    pub fn conj(self) -> Self {
        let n = self.group_order;
        Character { exponent: (n - self.exponent) % n, group_order: n }
    }

    pub fn mul(self, other: Character) -> Self {
        debug_assert_eq!(self.group_order, other.group_order);
        let n = self.group_order;
        Character { exponent: (self.exponent + other.exponent) % n, group_order: n }
    }

    pub fn pow(self, k: i64) -> Self {
        let n = self.group_order as i64;
        let m = (self.exponent as i64 * k.rem_euclid(n)).rem_euclid(n);
        Character { exponent: m as u32, group_order: self.group_order }
    }

    /// Every character of the group, in exponent order.
    pub fn all(field: &Field) -> impl Iterator<Item = Character> {
        let n = field.order() - 1;
        (0..n).map(move |m| Character { exponent: m, group_order: n })
    }

    pub fn check_field(self, field: &Field) -> Result<(), CharacterError> {
        let expected = field.order() - 1;
        if self.group_order == expected {
            Ok(())
        } else {
            Err(CharacterError::WrongField { got: self.group_order, expected })
        }
    }

    /// Exponent `k` with `χ(x) = ζ_{q-1}^k`, or `None` when `χ(x) = 0`.
    #[inline]
    pub fn exponent_at(self, field: &Field, x: Elem, conv: ZeroConvention) -> Option<u32> {
        if x.is_zero() {
            return conv.value_at_zero(self).then_some(0);
        }
        let n = self.group_order as u64;
        Some((self.exponent as u64 * field.log_unchecked(x) as u64 % n) as u32)
    }

    /// `χ(x)` as an exact value, in `Q(ζ_{ord χ})`.
    pub fn eval(self, field: &Field, x: Elem, conv: ZeroConvention) -> Cyclotomic {
        match self.exponent_at(field, x, conv) {
            None => Cyclotomic::zero(),
            Some(k) => GroupRing::monomial(self.group_order, k, 1).to_cyclotomic(),
        }
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "chi[m={}, order={}]", self.exponent, self.order())
    }
}

/// `δ(t)`: 1 at `t = 0`, else 0.
pub fn delta(t: Elem) -> Cyclotomic {
    Cyclotomic::from_int(t.is_zero() as i64)
}

fn one_over(k: u32) -> BigRational {
    BigRational::new(BigInt::from(1), BigInt::from(k))
}

/// `J(A, B) = Σ_t A(t) B(1 - t)` as an accumulator of order `q - 1`.
pub fn jacobi_sum_ring(field: &Field, a: Character, b: Character, conv: ZeroConvention) -> GroupRing {
    let mut acc = GroupRing::zero(field.order() - 1);
    for t in field.elements() {
        let Some(ka) = a.exponent_at(field, t, conv) else { continue };
        let Some(kb) = b.exponent_at(field, field.sub(Elem::ONE, t), conv) else { continue };
        let k = (ka + kb) % acc.order();
        acc.add_monomial(k, 1);
    }
    acc
}

pub fn jacobi_sum(field: &Field, a: Character, b: Character, conv: ZeroConvention) -> Cyclotomic {
    jacobi_sum_ring(field, a, b, conv).to_cyclotomic()
}

/// `q · (A over B) = B(-1) J(A, B̄)`, integral, as an accumulator of order `q - 1`.
pub fn scaled_binomial_ring(
    field: &Field,
    a: Character,
    b: Character,
    conv: ZeroConvention,
) -> GroupRing {
    let sign = b
        .exponent_at(field, field.minus_one(), conv)
        .expect("-1 is a unit");
    jacobi_sum_ring(field, a, b.conj(), conv).rotated(sign)
}

/// Greene's normalized binomial `(A over B) = B(-1)/q · J(A, B̄)`.
pub fn norm_binomial(field: &Field, a: Character, b: Character, conv: ZeroConvention) -> Cyclotomic {
    scaled_binomial_ring(field, a, b, conv).to_cyclotomic_scaled(&one_over(field.order()))
}

/// `Ā(1 - t)`, the left side of the expansion identity.
pub fn lemma21_lhs(field: &Field, a: Character, t: Elem, conv: ZeroConvention) -> Cyclotomic {
    a.conj().eval(field, field.sub(Elem::ONE, t), conv)
}

/// Right side of the expansion identity:
/// `δ(t) + q/(q-1) · Σ_χ (Aχ over χ) χ(t)`, summed over all `q - 1` characters.
pub fn lemma21_expand(field: &Field, a: Character, t: Elem, conv: ZeroConvention) -> Cyclotomic {
    let n = field.order() - 1;
    let mut acc = GroupRing::zero(n);
    for chi in Character::all(field) {
        let Some(k) = chi.exponent_at(field, t, conv) else { continue };
        acc.add_rotated(&scaled_binomial_ring(field, a.mul(chi), chi, conv), k);
    }
    // q/(q-1) · (1/q) · Σ q·binomial
    &acc.to_cyclotomic_scaled(&one_over(n)) + &delta(t)
}

/// Both sides of `J(A, B) = q B(-1) (A over B̄)`.
pub fn lemma21_jacobi_binomial(
    field: &Field,
    a: Character,
    b: Character,
    conv: ZeroConvention,
) -> (Cyclotomic, Cyclotomic) {
    let lhs = jacobi_sum(field, a, b, conv);
    let rhs = &(&b.eval(field, field.minus_one(), conv) * &norm_binomial(field, a, b.conj(), conv))
        * &Cyclotomic::from_int(field.order() as i64);
    (lhs, rhs)
}

/// Both sides of `(A over B) = (A over A B̄)`.
pub fn lemma21_reflection(
    field: &Field,
    a: Character,
    b: Character,
    conv: ZeroConvention,
) -> (Cyclotomic, Cyclotomic) {
    (
        norm_binomial(field, a, b, conv),
        norm_binomial(field, a, a.mul(b.conj()), conv),
    )
}
