//! Greene's `2F1` and Ghosh's Appell `F1` over `F_q`.
//!
//! Everything here uses [`ZeroConvention::GreeneAllZero`]. The Appell
//! function has three evaluators:
//!
//! - [`ghosh_f1_def`]: the `(q-1)^2`-term double character sum
//! - [`ghosh_f1_single`]: the `q`-term sum over `t`
//! - [`ghosh_f1_inverted`]: the same sum after `s = 1/t`
//!
//! The single-sum forms carry an `ε(xy)` prefactor, read as the indicator
//! `[xy ≠ 0]`; they report [`HypergeomError::OutOfDomain`] on the axes,
//! where only the double sum applies. With every `χ(0) = 0` the double sums
//! vanish on the axes as well; the tables' `eval_with` takes a separate
//! convention for the argument factors to get the `ε(0) = 1` reading, under
//! which only the trivial-character terms survive there.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use serde::Serialize;
use thiserror::Error;

use crate::character::{scaled_binomial_ring, Character, CharacterError, ZeroConvention};
use crate::cyclotomic::{Cyclotomic, GroupRing};
use crate::field::{Elem, Field};

const CONV: ZeroConvention = ZeroConvention::GreeneAllZero;

/// Largest field order accepted by the double-sum evaluators. Their tables
/// hold `(q-1)^3` integers.
pub const MAX_DOUBLE_SUM_ORDER: u32 = 128;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HypergeomError {
    #[error("single-sum form requires xy != 0 (got x = {x}, y = {y})")]
    OutOfDomain { x: u32, y: u32 },
    #[error("double-sum form is limited to q <= {max}, got q = {q}")]
    TooLarge { q: u32, max: u32 },
    #[error("unknown F1 form `{0}` (expected def, single or inverted)")]
    UnknownForm(String),
    #[error(transparent)]
    Character(#[from] CharacterError),
}

/// Arguments of `2F1(A, B; C | x)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Gauss2F1Spec {
    pub a: Character,
    pub b: Character,
    pub c: Character,
    pub x: Elem,
}

/// Arguments of `F1(A; B1, B2; C | x, y)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct F1Spec {
    pub a: Character,
    pub b1: Character,
    pub b2: Character,
    pub c: Character,
    pub x: Elem,
    pub y: Elem,
}

impl F1Spec {
    /// Swaps `(B1, x)` with `(B2, y)`.
    pub fn swapped(self) -> Self {
        F1Spec { b1: self.b2, b2: self.b1, x: self.y, y: self.x, ..self }
    }

    /// All four characters conjugated, arguments unchanged.
    pub fn conjugated(self) -> Self {
        F1Spec {
            a: self.a.conj(),
            b1: self.b1.conj(),
            b2: self.b2.conj(),
            c: self.c.conj(),
            ..self
        }
    }

    fn check(&self, field: &Field) -> Result<(), HypergeomError> {
        for chi in [self.a, self.b1, self.b2, self.c] {
            chi.check_field(field)?;
        }
        Ok(())
    }
}

/// Which evaluator to use for `F1`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum F1Form {
    #[serde(rename = "def")]
    Definition,
    #[default]
    Single,
    Inverted,
}

impl FromStr for F1Form {
    type Err = HypergeomError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "def" | "definition" => Ok(F1Form::Definition),
            "single" => Ok(F1Form::Single),
            "inverted" => Ok(F1Form::Inverted),
            other => Err(HypergeomError::UnknownForm(other.to_string())),
        }
    }
}

impl fmt::Display for F1Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            F1Form::Definition => "def",
            F1Form::Single => "single",
            F1Form::Inverted => "inverted",
        })
    }
}

/// First binomial in the `F1` double sum.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FirstBinomial {
    /// `(Aχ over Cχ)`, the defining form. This is the one that agrees with
    /// the single sum.
    Definition,
    /// `(Aχ over ĀC)`, the form reached by re-expanding the single sum
    /// through the Jacobi-sum identity. Kept to demonstrate that it does
    /// not agree.
    Expanded,
}

fn ratio(num: u64, den: u64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn check_double_sum_size(field: &Field) -> Result<(), HypergeomError> {
    if field.order() > MAX_DOUBLE_SUM_ORDER {
        Err(HypergeomError::TooLarge { q: field.order(), max: MAX_DOUBLE_SUM_ORDER })
    } else {
        Ok(())
    }
}

/// Precomputed `2F1(A, B; C | ·)` for one character triple.
pub struct Greene2F1Table<'f> {
    field: &'f Field,
    /// `q^2 (Aχ_m over χ_m)(Bχ_m over Cχ_m)` for each `m`.
    terms: Vec<GroupRing>,
}

impl<'f> Greene2F1Table<'f> {
    pub fn new(
        field: &'f Field,
        a: Character,
        b: Character,
        c: Character,
    ) -> Result<Self, HypergeomError> {
        for chi in [a, b, c] {
            chi.check_field(field)?;
        }
        let terms = Character::all(field)
            .map(|chi| {
                let first = scaled_binomial_ring(field, a.mul(chi), chi, CONV);
                let second = scaled_binomial_ring(field, b.mul(chi), c.mul(chi), CONV);
                first.mul(&second)
            })
            .collect();
        Ok(Greene2F1Table { field, terms })
    }

    pub fn eval(&self, x: Elem) -> Cyclotomic {
        self.eval_with(x, CONV)
    }

    /// Evaluates with `conv` applied to the argument factor `χ(x)` only.
    pub fn eval_with(&self, x: Elem, arg: ZeroConvention) -> Cyclotomic {
        let field = self.field;
        let n = field.order() - 1;
        let mut acc = GroupRing::zero(n);
        for (chi, term) in Character::all(field).zip(&self.terms) {
            if let Some(k) = chi.exponent_at(field, x, arg) {
                acc.add_rotated(term, k);
            }
        }
        // q/(q-1) · q^{-2}
        acc.to_cyclotomic_scaled(&ratio(1, field.order() as u64 * n as u64))
    }
}

/// Greene's `2F1(A, B; C | x) = q/(q-1) Σ_χ (Aχ over χ)(Bχ over Cχ) χ(x)`.
pub fn greene_2f1(field: &Field, spec: &Gauss2F1Spec) -> Result<Cyclotomic, HypergeomError> {
    Ok(Greene2F1Table::new(field, spec.a, spec.b, spec.c)?.eval(spec.x))
}

/// Precomputed double-sum `F1(A; B1, B2; C | ·, ·)` for one quadruple.
pub struct F1DefTable<'f> {
    field: &'f Field,
    /// `q^3` times the product of the three binomials, indexed by `m1 * n + m2`.
    terms: Vec<GroupRing>,
}

impl<'f> F1DefTable<'f> {
    pub fn new(
        field: &'f Field,
        a: Character,
        b1: Character,
        b2: Character,
        c: Character,
        first: FirstBinomial,
    ) -> Result<Self, HypergeomError> {
        for chi in [a, b1, b2, c] {
            chi.check_field(field)?;
        }
        check_double_sum_size(field)?;
        let chars: Vec<Character> = Character::all(field).collect();
        let firsts: Vec<GroupRing> = chars
            .iter()
            .map(|&chi| match first {
                FirstBinomial::Definition => scaled_binomial_ring(field, a.mul(chi), c.mul(chi), CONV),
                FirstBinomial::Expanded => scaled_binomial_ring(field, a.mul(chi), a.conj().mul(c), CONV),
            })
            .collect();
        let second: Vec<GroupRing> = chars
            .iter()
            .map(|&chi| scaled_binomial_ring(field, b1.mul(chi), chi, CONV))
            .collect();
        let third: Vec<GroupRing> = chars
            .iter()
            .map(|&chi| scaled_binomial_ring(field, b2.mul(chi), chi, CONV))
            .collect();
        let n = chars.len();
        let mut terms = Vec::with_capacity(n * n);
        for m1 in 0..n {
            for m2 in 0..n {
                let m = (m1 + m2) % n;
                terms.push(firsts[m].mul(&second[m1]).mul(&third[m2]));
            }
        }
        Ok(F1DefTable { field, terms })
    }

    pub fn eval(&self, x: Elem, y: Elem) -> Cyclotomic {
        self.eval_with(x, y, CONV)
    }

    /// Evaluates with `conv` applied to the argument factors `χ1(x) χ2(y)` only.
    pub fn eval_with(&self, x: Elem, y: Elem, arg: ZeroConvention) -> Cyclotomic {
        let field = self.field;
        let n = field.order() - 1;
        let mut acc = GroupRing::zero(n);
        for (m1, chi1) in Character::all(field).enumerate() {
            let Some(k1) = chi1.exponent_at(field, x, arg) else { continue };
            for (m2, chi2) in Character::all(field).enumerate() {
                let Some(k2) = chi2.exponent_at(field, y, arg) else { continue };
                acc.add_rotated(&self.terms[m1 * n as usize + m2], (k1 + k2) % n);
            }
        }
        // q^2/(q-1)^2 · q^{-3}
        let q = field.order() as u64;
        acc.to_cyclotomic_scaled(&ratio(1, q * n as u64 * n as u64))
    }
}

/// `F1` from its defining double sum
/// `q^2/(q-1)^2 Σ_{χ1,χ2} (Aχ over Cχ)(B1χ1 over χ1)(B2χ2 over χ2) χ1(x) χ2(y)`, `χ = χ1χ2`.
pub fn ghosh_f1_def(field: &Field, spec: &F1Spec) -> Result<Cyclotomic, HypergeomError> {
    ghosh_f1_def_with(field, spec, FirstBinomial::Definition)
}

pub fn ghosh_f1_def_with(
    field: &Field,
    spec: &F1Spec,
    first: FirstBinomial,
) -> Result<Cyclotomic, HypergeomError> {
    let table = F1DefTable::new(field, spec.a, spec.b1, spec.b2, spec.c, first)?;
    Ok(table.eval(spec.x, spec.y))
}

/// Characters sharing one small accumulator order: the lcm of their orders.
struct SharedOrder {
    d: u32,
    /// `(q-1)/d`; a character exponent divided by this is its exponent mod `d`.
    stride: u32,
}

impl SharedOrder {
    fn new(chars: &[Character]) -> Self {
        let n = chars[0].group_order();
        let d = chars.iter().fold(1u32, |acc, c| acc.lcm(&c.order()));
        SharedOrder { d, stride: n / d }
    }

    #[inline]
    fn exp(&self, chi: Character, field: &Field, x: Elem) -> Option<u32> {
        if x.is_zero() {
            return None;
        }
        let m = (chi.exponent() / self.stride) as u64;
        Some((m * field.dlog(x).expect("nonzero") as u64 % self.d as u64) as u32)
    }
}

fn single_prefactor(field: &Field, spec: &F1Spec, shared: &SharedOrder) -> u32 {
    shared
        .exp(spec.a.mul(spec.c), field, field.minus_one())
        .expect("-1 is a unit")
}

/// `F1` from the single sum
/// `AC(-1)/q · Σ_{t ∈ F_q} A(t) ĀC(1-t) B̄1(1-xt) B̄2(1-yt)`, for `xy ≠ 0`.
pub fn ghosh_f1_single(field: &Field, spec: &F1Spec) -> Result<Cyclotomic, HypergeomError> {
    spec.check(field)?;
    if spec.x.is_zero() || spec.y.is_zero() {
        return Err(HypergeomError::OutOfDomain { x: spec.x.code(), y: spec.y.code() });
    }
    let ac_bar = spec.a.conj().mul(spec.c);
    let (b1_bar, b2_bar) = (spec.b1.conj(), spec.b2.conj());
    let shared = SharedOrder::new(&[spec.a, ac_bar, b1_bar, b2_bar, spec.a.mul(spec.c)]);
    let mut acc = GroupRing::zero(shared.d);
    for t in field.elements() {
        let Some(k0) = shared.exp(spec.a, field, t) else { continue };
        let Some(k1) = shared.exp(ac_bar, field, field.sub(Elem::ONE, t)) else { continue };
        let xt = field.mul(spec.x, t);
        let Some(k2) = shared.exp(b1_bar, field, field.sub(Elem::ONE, xt)) else { continue };
        let yt = field.mul(spec.y, t);
        let Some(k3) = shared.exp(b2_bar, field, field.sub(Elem::ONE, yt)) else { continue };
        acc.add_monomial((k0 + k1 + k2 + k3) % shared.d, 1);
    }
    let sign = single_prefactor(field, spec, &shared);
    Ok(acc.rotated(sign).to_cyclotomic_scaled(&ratio(1, field.order() as u64)))
}

/// `F1` after substituting `s = 1/t`:
/// `AC(-1)/q · Σ_{s ≠ 0} B1B2C̄(s) ĀC(s-1) B̄1(s-x) B̄2(s-y)`, for `xy ≠ 0`.
pub fn ghosh_f1_inverted(field: &Field, spec: &F1Spec) -> Result<Cyclotomic, HypergeomError> {
    spec.check(field)?;
    if spec.x.is_zero() || spec.y.is_zero() {
        return Err(HypergeomError::OutOfDomain { x: spec.x.code(), y: spec.y.code() });
    }
    let lead = spec.b1.mul(spec.b2).mul(spec.c.conj());
    let ac_bar = spec.a.conj().mul(spec.c);
    let (b1_bar, b2_bar) = (spec.b1.conj(), spec.b2.conj());
    let shared = SharedOrder::new(&[lead, ac_bar, b1_bar, b2_bar, spec.a.mul(spec.c)]);
    let mut acc = GroupRing::zero(shared.d);
    for s in field.nonzero() {
        let k0 = shared.exp(lead, field, s).expect("s != 0");
        let Some(k1) = shared.exp(ac_bar, field, field.sub(s, Elem::ONE)) else { continue };
        let Some(k2) = shared.exp(b1_bar, field, field.sub(s, spec.x)) else { continue };
        let Some(k3) = shared.exp(b2_bar, field, field.sub(s, spec.y)) else { continue };
        acc.add_monomial((k0 + k1 + k2 + k3) % shared.d, 1);
    }
    let sign = single_prefactor(field, spec, &shared);
    Ok(acc.rotated(sign).to_cyclotomic_scaled(&ratio(1, field.order() as u64)))
}

pub fn ghosh_f1(field: &Field, spec: &F1Spec, form: F1Form) -> Result<Cyclotomic, HypergeomError> {
    match form {
        F1Form::Definition => ghosh_f1_def(field, spec),
        F1Form::Single => ghosh_f1_single(field, spec),
        F1Form::Inverted => ghosh_f1_inverted(field, spec),
    }
}
