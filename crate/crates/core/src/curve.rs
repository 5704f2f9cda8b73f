//! Point counts and traces of Frobenius for the Picard family
//! `y^3 = x(x-1)(x-λ)(x-μ)` and the Legendre family `y^2 = x(x-1)(x-λ)`.
//!
//! Both smooth projective models have exactly one point at infinity. The
//! brute-force counter never touches characters: it tabulates how many `y`
//! have `y^k = v` for each `v` and sums that over `x`. Everything else is
//! checked against it.

use num_integer::Roots;
use serde::Serialize;
use thiserror::Error;

use crate::character::{Character, CharacterError, ZeroConvention};
use crate::cyclotomic::{Cyclotomic, GroupRing};
use crate::field::{Elem, Field};
use crate::hypergeom::{self, F1Spec, Greene2F1Table, HypergeomError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CurveError {
    #[error("lambda and mu coincide, the quartic has a repeated root")]
    CoincidentRoots,
    #[error("parameter {0} must avoid 0 and 1")]
    DegenerateParameter(&'static str),
    #[error("q = {0} is not 1 mod 3, so no cubic character exists")]
    NotOneModThree(u32),
    #[error("Picard curves need characteristic p > 3, got p = {0}")]
    SmallCharacteristic(u32),
    #[error("the Legendre family needs odd q, got q = {0}")]
    EvenCharacteristic(u32),
    #[error("expected a rational integer, got {0}")]
    NonIntegral(String),
    #[error("chi^(2j)(-1) = {0}, expected 1")]
    UnexpectedSign(String),
    #[error("operation is not defined for the {0:?} family")]
    WrongFamily(Family),
    #[error(transparent)]
    Character(#[from] CharacterError),
    #[error(transparent)]
    Hypergeom(#[from] HypergeomError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Picard,
    Legendre,
}

impl Family {
    pub fn genus(self) -> u32 {
        match self {
            Family::Picard => 3,
            Family::Legendre => 1,
        }
    }

    /// Exponent `k` in `y^k = f(x)`.
    fn power(self) -> u32 {
        match self {
            Family::Picard => 3,
            Family::Legendre => 2,
        }
    }
}

/// One curve in the Picard or Legendre family.
#[derive(Clone, Copy, Debug)]
pub struct CurveParams<'f> {
    field: &'f Field,
    family: Family,
    lambda: Elem,
    mu: Elem,
}

impl<'f> CurveParams<'f> {
    /// A Picard curve satisfying every hypothesis of the trace formula.
    pub fn picard(field: &'f Field, lambda: Elem, mu: Elem) -> Result<Self, CurveError> {
        let params = CurveParams::picard_any_q(field, lambda, mu)?;
        if field.order() % 3 != 1 {
            return Err(CurveError::NotOneModThree(field.order()));
        }
        Ok(params)
    }

    /// A Picard curve without the `q ≡ 1 (mod 3)` requirement. Only the
    /// brute-force counter accepts these when `q ≢ 1 (mod 3)`.
    pub fn picard_any_q(field: &'f Field, lambda: Elem, mu: Elem) -> Result<Self, CurveError> {
        if field.characteristic() <= 3 {
            return Err(CurveError::SmallCharacteristic(field.characteristic()));
        }
        if lambda.is_zero() || lambda == Elem::ONE {
            return Err(CurveError::DegenerateParameter("lambda"));
        }
        if mu.is_zero() || mu == Elem::ONE {
            return Err(CurveError::DegenerateParameter("mu"));
        }
        if lambda == mu {
            return Err(CurveError::CoincidentRoots);
        }
        Ok(CurveParams { field, family: Family::Picard, lambda, mu })
    }

    pub fn legendre(field: &'f Field, lambda: Elem) -> Result<Self, CurveError> {
        if field.characteristic() == 2 {
            return Err(CurveError::EvenCharacteristic(field.order()));
        }
        if lambda.is_zero() || lambda == Elem::ONE {
            return Err(CurveError::DegenerateParameter("lambda"));
        }
        Ok(CurveParams { field, family: Family::Legendre, lambda, mu: Elem::ZERO })
    }

    pub fn field(&self) -> &'f Field {
        self.field
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn lambda(&self) -> Elem {
        self.lambda
    }

    /// `None` for the Legendre family.
    pub fn mu(&self) -> Option<Elem> {
        (self.family == Family::Picard).then_some(self.mu)
    }

    /// The right-hand side polynomial `f(x)`.
    pub fn rhs_poly(&self, x: Elem) -> Elem {
        let f = self.field;
        let mut v = f.mul(x, f.sub(x, Elem::ONE));
        v = f.mul(v, f.sub(x, self.lambda));
        if self.family == Family::Picard {
            v = f.mul(v, f.sub(x, self.mu));
        }
        v
    }

    fn require_picard(&self) -> Result<(), CurveError> {
        if self.family != Family::Picard {
            return Err(CurveError::WrongFamily(self.family));
        }
        if self.field.order() % 3 != 1 {
            return Err(CurveError::NotOneModThree(self.field.order()));
        }
        Ok(())
    }
}

/// Number of `k`-th roots of every field element, found by enumerating `y`.
#[derive(Clone, Debug)]
pub struct RootCounts {
    power: u32,
    counts: Vec<u32>,
}

impl RootCounts {
    pub fn new(field: &Field, power: u32) -> Self {
        let mut counts = vec![0u32; field.order() as usize];
        for y in field.elements() {
            let v = field.pow(y, power as i64).expect("nonnegative power");
            counts[v.code() as usize] += 1;
        }
        RootCounts { power, counts }
    }

    #[inline]
    pub fn roots_of(&self, v: Elem) -> u32 {
        self.counts[v.code() as usize]
    }

    pub fn power(&self) -> u32 {
        self.power
    }
}

/// Number of points over `F_q`, the single point at infinity included.
pub fn count_with(params: &CurveParams<'_>, roots: &RootCounts) -> u64 {
    assert_eq!(roots.power(), params.family.power());
    let affine: u64 = params
        .field
        .elements()
        .map(|x| roots.roots_of(params.rhs_poly(x)) as u64)
        .sum();
    affine + 1
}

/// `#C(F_q)` by direct enumeration.
pub fn count_bruteforce(params: &CurveParams<'_>) -> u64 {
    count_with(params, &RootCounts::new(params.field, params.family.power()))
}

/// `a_q = 1 + q - #C(F_q)`, from the brute-force count.
pub fn trace_frobenius(params: &CurveParams<'_>) -> i64 {
    1 + params.field.order() as i64 - count_bruteforce(params) as i64
}

fn to_integer(value: &Cyclotomic) -> Result<i64, CurveError> {
    value.as_i64().ok_or_else(|| CurveError::NonIntegral(value.to_text()))
}

/// `1 + q + Σ_x Σ_{j=1,2} χ3^j(f(x))` for the canonical cubic character.
pub fn count_charsum(params: &CurveParams<'_>) -> Result<u64, CurveError> {
    count_charsum_with(params, Character::cubic(params.field)?)
}

/// [`count_charsum`] with an explicit character of order 3.
pub fn count_charsum_with(params: &CurveParams<'_>, cubic: Character) -> Result<u64, CurveError> {
    params.require_picard()?;
    let field = params.field;
    let n = field.order() - 1;
    let mut acc = GroupRing::zero(n);
    for x in field.elements() {
        let v = params.rhs_poly(x);
        for j in 1..=2 {
            if let Some(k) = cubic.pow(j).exponent_at(field, v, ZeroConvention::GreeneAllZero) {
                acc.add_monomial(k, 1);
            }
        }
    }
    let total = &acc.to_cyclotomic() + &Cyclotomic::from_int(1 + field.order() as i64);
    Ok(to_integer(&total)? as u64)
}

/// Both summands of the trace formula and their total.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TheoremValue {
    /// `-q χ3^{2j}(-1) F1(χ3^j; χ3^j, χ3^j; ε | λ, μ)` for `j = 1, 2`.
    pub terms: [Cyclotomic; 2],
    pub total: Cyclotomic,
    pub integer: Option<i64>,
}

/// `-q Σ_{j=1,2} χ3^{2j}(-1) F1(χ3^j; χ3^j, χ3^j; ε | λ, μ)`.
pub fn trace_via_theorem(params: &CurveParams<'_>) -> Result<TheoremValue, CurveError> {
    trace_via_theorem_with(params, Character::cubic(params.field)?)
}

pub fn trace_via_theorem_with(
    params: &CurveParams<'_>,
    cubic: Character,
) -> Result<TheoremValue, CurveError> {
    params.require_picard()?;
    let field = params.field;
    let eps = Character::trivial(field);
    let minus_q = Cyclotomic::from_int(-(field.order() as i64));
    let mut terms = Vec::with_capacity(2);
    for j in 1..=2 {
        let chi = cubic.pow(j);
        let sign = cubic.pow(2 * j).eval(field, field.minus_one(), ZeroConvention::GreeneAllZero);
        if sign != Cyclotomic::one() {
            return Err(CurveError::UnexpectedSign(sign.to_text()));
        }
        let spec = F1Spec { a: chi, b1: chi, b2: chi, c: eps, x: params.lambda, y: params.mu };
        let f1 = hypergeom::ghosh_f1_single(field, &spec)?;
        terms.push(&(&minus_q * &sign) * &f1);
    }
    let total = &terms[0] + &terms[1];
    let integer = total.as_i64();
    let terms: [Cyclotomic; 2] = terms.try_into().expect("two terms");
    Ok(TheoremValue { terms, total, integer })
}

/// One row of a verification table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceReport {
    pub family: Family,
    pub q: u32,
    pub lambda: u32,
    pub mu: Option<u32>,
    pub count: u64,
    pub trace: i64,
    pub rhs: Cyclotomic,
    pub rhs_trace: Option<i64>,
    #[serde(rename = "match")]
    pub matches: bool,
}

impl TraceReport {
    fn new(params: &CurveParams<'_>, count: u64, rhs: Cyclotomic) -> Self {
        let q = params.field.order();
        let trace = 1 + q as i64 - count as i64;
        let rhs_trace = rhs.as_i64();
        TraceReport {
            family: params.family,
            q,
            lambda: params.lambda.code(),
            mu: params.mu().map(Elem::code),
            count,
            trace,
            rhs,
            rhs_trace,
            matches: rhs_trace == Some(trace),
        }
    }
}

/// Shared per-field state for evaluating many Picard curves.
pub struct PicardEvaluator<'f> {
    field: &'f Field,
    roots: RootCounts,
}

impl<'f> PicardEvaluator<'f> {
    pub fn new(field: &'f Field) -> Result<Self, CurveError> {
        Character::cubic(field)?;
        Ok(PicardEvaluator { field, roots: RootCounts::new(field, 3) })
    }

    pub fn report(&self, lambda: Elem, mu: Elem) -> Result<TraceReport, CurveError> {
        let params = CurveParams::picard(self.field, lambda, mu)?;
        let count = count_with(&params, &self.roots);
        let theorem = trace_via_theorem(&params)?;
        Ok(TraceReport::new(&params, count, theorem.total))
    }
}

/// Brute-force count against the trace formula for one Picard curve.
pub fn picard_report(params: &CurveParams<'_>) -> Result<TraceReport, CurveError> {
    params.require_picard()?;
    let count = count_bruteforce(params);
    let theorem = trace_via_theorem(params)?;
    Ok(TraceReport::new(params, count, theorem.total))
}

/// Shared per-field state for checking Koike's identity at many `λ`.
pub struct KoikeEvaluator<'f> {
    field: &'f Field,
    roots: RootCounts,
    table: Greene2F1Table<'f>,
    sign: Cyclotomic,
}

impl<'f> KoikeEvaluator<'f> {
    pub fn new(field: &'f Field) -> Result<Self, CurveError> {
        let phi = Character::quadratic(field)?;
        let eps = Character::trivial(field);
        let table = Greene2F1Table::new(field, phi, phi, eps)?;
        let sign = phi.eval(field, field.minus_one(), ZeroConvention::GreeneAllZero);
        Ok(KoikeEvaluator { field, roots: RootCounts::new(field, 2), table, sign })
    }

    /// `-q φ(-1) 2F1(φ, φ; ε | λ)`.
    pub fn rhs(&self, lambda: Elem) -> Cyclotomic {
        let q = Cyclotomic::from_int(-(self.field.order() as i64));
        &(&q * &self.sign) * &self.table.eval(lambda)
    }

    pub fn report(&self, lambda: Elem) -> Result<TraceReport, CurveError> {
        let params = CurveParams::legendre(self.field, lambda)?;
        let count = count_with(&params, &self.roots);
        Ok(TraceReport::new(&params, count, self.rhs(lambda)))
    }
}

/// Brute-force trace of a Legendre curve against `-q φ(-1) 2F1(φ, φ; ε | λ)`.
pub fn koike_check(params: &CurveParams<'_>) -> Result<TraceReport, CurveError> {
    if params.family != Family::Legendre {
        return Err(CurveError::WrongFamily(params.family));
    }
    let report = KoikeEvaluator::new(params.field)?.report(params.lambda)?;
    if report.rhs_trace.is_none() {
        return Err(CurveError::NonIntegral(report.rhs.to_text()));
    }
    Ok(report)
}

/// `|a_q| ≤ 2g√q`, checked exactly as `a_q^2 ≤ 4 g^2 q`.
pub fn hasse_weil_ok(report: &TraceReport) -> bool {
    let g = report.family.genus() as i128;
    let t = report.trace as i128;
    t * t <= 4 * g * g * report.q as i128
}

/// Every admissible `(λ, μ)` for the Picard family, ordered by code.
pub fn admissible_pairs(field: &Field) -> Vec<(Elem, Elem)> {
    let mut out = Vec::new();
    for l in field.elements().filter(|&l| !l.is_zero() && l != Elem::ONE) {
        for m in field.elements().filter(|&m| !m.is_zero() && m != Elem::ONE && m != l) {
            out.push((l, m));
        }
    }
    out
}

/// Upper end of the Hasse–Weil interval, `floor(2g√q)`.
pub fn hasse_weil_bound(family: Family, q: u32) -> i64 {
    let g = family.genus() as u64;
    (4 * g * g * q as u64).sqrt() as i64
}
