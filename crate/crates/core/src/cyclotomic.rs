//! Exact arithmetic in cyclotomic fields `Q(ζ_n)`.
//!
//! A [`Cyclotomic`] is stored in the power basis `1, ζ, …, ζ^{φ(n)-1}` with
//! rational coefficients, always reduced modulo the cyclotomic polynomial
//! `Φ_n`. Values of different orders compare and combine by lifting both to
//! the least common multiple of the orders. Every value is kept in the
//! smallest `Q(ζ_n)` containing it, with `n ≢ 2 (mod 4)` since
//! `Q(ζ_n) = Q(ζ_{n/2})` there, so equal values print identically.
//!
//! Character sums are accumulated in a [`GroupRing`] first: an integer vector
//! indexed by exponents modulo `n`, i.e. an element of `Z[x]/(x^n - 1)`.
//! Reduction to the canonical form happens once per sum, and the accumulator
//! drops to the smallest order its support allows, so sums of cubic
//! characters land in `Q(ζ_3)` no matter how large `q` is.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CyclotomicError {
    #[error("root-of-unity order must be at least 1")]
    ZeroOrder,
    #[error("malformed cyclotomic term `{0}`")]
    Parse(String),
    #[error("expected {expected} coefficients for order {order}, got {got}")]
    Length { order: u32, expected: usize, got: usize },
    #[error("zero denominator in coefficient")]
    ZeroDenominator,
}

/// Euler's totient.
pub fn totient(n: u32) -> u32 {
    let mut n = n;
    let mut result = n;
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            while n % d == 0 {
                n /= d;
            }
            result -= result / d;
        }
        d += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

fn squarefree_divisors_with_sign(n: u32) -> Vec<(u32, bool)> {
    let primes: Vec<u32> = crate::field::prime_factors(n as u64)
        .into_iter()
        .map(|p| p as u32)
        .collect();
    let mut out = Vec::with_capacity(1 << primes.len());
    for mask in 0u32..(1 << primes.len()) {
        let mut d = 1;
        for (i, p) in primes.iter().enumerate() {
            if mask >> i & 1 == 1 {
                d *= p;
            }
        }
        out.push((d, mask.count_ones() % 2 == 0));
    }
    out
}

fn compute_cyclotomic_poly(n: u32) -> Vec<i64> {
    // Φ_n(x) = Π_{d | n} (x^{n/d} - 1)^{μ(d)}; multiply first so every
    // intermediate is a polynomial.
    let terms = squarefree_divisors_with_sign(n);
    let mut poly: Vec<i128> = vec![1];
    for &(d, positive) in &terms {
        if positive {
            let k = (n / d) as usize;
            let mut next = vec![0i128; poly.len() + k];
            for (i, &c) in poly.iter().enumerate() {
                next[i + k] += c;
                next[i] -= c;
            }
            poly = next;
        }
    }
    for &(d, positive) in &terms {
        if !positive {
            let k = (n / d) as usize;
            // divide by x^k - 1: quotient coefficients from the top
            let deg = poly.len() - 1;
            let mut quot = vec![0i128; deg - k + 1];
            let mut rem = poly.clone();
            for i in (k..=deg).rev() {
                let c = rem[i];
                quot[i - k] = c;
                rem[i] = 0;
                rem[i - k] += c;
            }
            debug_assert!(rem.iter().all(|&c| c == 0));
            poly = quot;
        }
    }
    poly.into_iter()
        .map(|c| i64::try_from(c).expect("cyclotomic coefficient fits in i64"))
        .collect()
}

/// Coefficients of `Φ_n`, low-to-high, cached per order.
pub fn cyclotomic_poly(n: u32) -> Arc<Vec<i64>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<i64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return p.clone();
    }
    let p = Arc::new(compute_cyclotomic_poly(n));
    cache.lock().unwrap().entry(n).or_insert(p).clone()
}

fn reduce_i128(mut v: Vec<i128>, phi: &[i64]) -> Option<Vec<i128>> {
    let deg = phi.len() - 1;
    for k in (deg..v.len()).rev() {
        let c = v[k];
        if c == 0 {
            continue;
        }
        v[k] = 0;
        for (i, &f) in phi[..deg].iter().enumerate() {
            let t = c.checked_mul(f as i128)?;
            v[k - deg + i] = v[k - deg + i].checked_sub(t)?;
        }
    }
    v.truncate(deg);
    v.resize(deg, 0);
    Some(v)
}

fn reduce_big<T>(mut v: Vec<T>, phi: &[i64]) -> Vec<T>
where
    T: Clone + Zero + for<'a> std::ops::SubAssign<&'a T> + Mul<BigInt, Output = T>,
{
    let deg = phi.len() - 1;
    for k in (deg..v.len()).rev() {
        if v[k].is_zero() {
            continue;
        }
        let c = std::mem::replace(&mut v[k], T::zero());
        for (i, &f) in phi[..deg].iter().enumerate() {
            if f != 0 {
                let t = c.clone() * BigInt::from(f);
                v[k - deg + i] -= &t;
            }
        }
    }
    v.truncate(deg);
    v.resize(deg, T::zero());
    v
}

/// Reduces a polynomial in `ζ_n` modulo `x^n - 1` and then `Φ_n`.
fn reduce_poly(n: u32, mut poly: Vec<BigRational>) -> Vec<BigRational> {
    let phi = cyclotomic_poly(n);
    let deg = phi.len() - 1;
    if poly.len() > n as usize {
        let mut folded = vec![BigRational::zero(); n as usize];
        for (i, c) in poly.into_iter().enumerate() {
            folded[i % n as usize] += c;
        }
        poly = folded;
    }
    if poly.len() < deg {
        poly.resize(deg, BigRational::zero());
    }
    reduce_big(poly, &phi)
}

fn distinct_primes(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Embedding data for `Q(ζ_t) ⊂ Q(ζ_n)`: the images of `1, ζ_t, …` and a
/// left inverse built from `φ(t)` independent rows.
struct Descent {
    /// `lift[i][j]`: coefficient of `ζ_n^i` in `ζ_t^j`.
    lift: Vec<Vec<i64>>,
    rows: Vec<usize>,
    inv: Vec<Vec<BigRational>>,
    /// `inv` times `den`, when that fits.
    inv_int: Option<(Vec<Vec<i128>>, i128)>,
}

fn compute_descent(n: u32, t: u32) -> Descent {
    let step = (n / t) as usize;
    let big_r = totient(n) as usize;
    let r = totient(t) as usize;
    let phi = cyclotomic_poly(n);
    let cols: Vec<Vec<i128>> = (0..r)
        .map(|j| {
            let mut v = vec![0i128; (j * step + 1).max(big_r)];
            v[j * step] = 1;
            reduce_i128(v, &phi).expect("monomial reduction fits")
        })
        .collect();
    let lift: Vec<Vec<i64>> = (0..big_r).map(|i| cols.iter().map(|c| c[i] as i64).collect()).collect();
    let q = |k: i64| BigRational::from_integer(k.into());

    // pick independent rows by elimination, remembering where each came from
    let mut work: Vec<(usize, Vec<BigRational>)> =
        lift.iter().enumerate().map(|(i, row)| (i, row.iter().map(|&k| q(k)).collect())).collect();
    let mut rows = Vec::with_capacity(r);
    for c in 0..r {
        let p = (c..work.len()).find(|&i| !work[i].1[c].is_zero()).expect("embedding is injective");
        work.swap(c, p);
        let pivot = work[c].1.clone();
        for row in work[c + 1..].iter_mut() {
            if !row.1[c].is_zero() {
                let f = &row.1[c] / &pivot[c];
                for (x, y) in row.1.iter_mut().zip(&pivot) {
                    *x -= &f * y;
                }
            }
        }
        rows.push(work[c].0);
    }

    // invert the selected r x r block by Gauss-Jordan
    let mut m: Vec<Vec<BigRational>> = rows
        .iter()
        .enumerate()
        .map(|(k, &i)| {
            let mut row: Vec<BigRational> = lift[i].iter().map(|&x| q(x)).collect();
            row.extend((0..r).map(|j| q((j == k) as i64)));
            row
        })
        .collect();
    for c in 0..r {
        let p = (c..r).find(|&i| !m[i][c].is_zero()).expect("invertible block");
        m.swap(c, p);
        let inv = m[c][c].recip();
        for x in m[c].iter_mut() {
            *x *= &inv;
        }
        let pivot = m[c].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != c && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x -= &f * y;
                }
            }
        }
    }
    let inv: Vec<Vec<BigRational>> = m.into_iter().map(|row| row[r..].to_vec()).collect();
    let den = inv.iter().flatten().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let inv_int = den.to_i128().and_then(|d| {
        let rows = inv
            .iter()
            .map(|row| row.iter().map(|x| (x * BigRational::from_integer(den.clone())).to_integer().to_i128()).collect())
            .collect::<Option<Vec<Vec<i128>>>>()?;
        Some((rows, d))
    });
    Descent { lift, rows, inv, inv_int }
}

fn descent(n: u32, t: u32) -> Arc<Descent> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, u32), Arc<Descent>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(d) = cache.lock().unwrap().get(&(n, t)) {
        return d.clone();
    }
    let d = Arc::new(compute_descent(n, t));
    cache.lock().unwrap().entry((n, t)).or_insert(d).clone()
}

/// Coefficient types the canonical form is computed over. `i128` reports
/// overflow as `Err(())`.
trait Coeff: Clone + Zero + PartialEq {
    fn fold_reduce(n: u32, v: Vec<Self>) -> Result<Vec<Self>, ()>;
    fn reduce_monomial(n: u32, k: usize, c: Self) -> Result<Vec<Self>, ()>;
    /// Coordinates in the subfield, `None` if `v` is not in it.
    fn solve(v: &[Self], d: &Descent) -> Result<Option<Vec<Self>>, ()>;
}

impl Coeff for BigRational {
    fn fold_reduce(n: u32, v: Vec<Self>) -> Result<Vec<Self>, ()> {
        Ok(reduce_big(fold_half(n, v), &cyclotomic_poly(n / 2)))
    }

    fn reduce_monomial(n: u32, k: usize, c: Self) -> Result<Vec<Self>, ()> {
        let mut poly = vec![BigRational::zero(); k + 1];
        poly[k] = c;
        Ok(reduce_poly(n, poly))
    }

    fn solve(v: &[Self], d: &Descent) -> Result<Option<Vec<Self>>, ()> {
        let u: Vec<BigRational> = d
            .inv
            .iter()
            .map(|row| row.iter().zip(&d.rows).map(|(a, &i)| a * &v[i]).sum())
            .collect();
        let fits = d.lift.iter().zip(v).all(|(row, vi)| {
            let s: BigRational = row
                .iter()
                .zip(&u)
                .filter(|(&a, _)| a != 0)
                .map(|(&a, uj)| uj * BigRational::from_integer(a.into()))
                .sum();
            &s == vi
        });
        Ok(fits.then_some(u))
    }
}

impl Coeff for i128 {
    fn fold_reduce(n: u32, v: Vec<Self>) -> Result<Vec<Self>, ()> {
        reduce_i128(fold_half(n, v), &cyclotomic_poly(n / 2)).ok_or(())
    }

    fn reduce_monomial(n: u32, k: usize, c: Self) -> Result<Vec<Self>, ()> {
        let mut poly = vec![0i128; (k + 1).max(totient(n) as usize)];
        poly[k] = c;
        reduce_i128(poly, &cyclotomic_poly(n)).ok_or(())
    }

    fn solve(v: &[Self], d: &Descent) -> Result<Option<Vec<Self>>, ()> {
        let (inv, den) = d.inv_int.as_ref().ok_or(())?;
        let mut u = Vec::with_capacity(inv.len());
        for row in inv {
            let mut s = 0i128;
            for (a, &i) in row.iter().zip(&d.rows) {
                s = s.checked_add(a.checked_mul(v[i]).ok_or(())?).ok_or(())?;
            }
            // an algebraic integer of the subfield has integral coordinates
            if s % den != 0 {
                return Ok(None);
            }
            u.push(s / den);
        }
        for (row, &vi) in d.lift.iter().zip(v) {
            let mut s = 0i128;
            for (&a, &uj) in row.iter().zip(&u) {
                s = s.checked_add((a as i128).checked_mul(uj).ok_or(())?).ok_or(())?;
            }
            if s != vi {
                return Ok(None);
            }
        }
        Ok(Some(u))
    }
}

/// The smallest `(t, coordinates in Q(ζ_t))` holding a reduced value of `Q(ζ_n)`.
fn canonical_coeffs<T: Coeff>(n: u32, v: Vec<T>) -> Result<(u32, Vec<T>), ()> {
    let (mut n, mut v) = if n % 4 == 2 { (n / 2, T::fold_reduce(n, v)?) } else { (n, v) };
    'descend: loop {
        if v[1..].iter().all(Zero::is_zero) {
            v.truncate(1);
            return Ok((1, v));
        }
        let mut support = v.iter().enumerate().filter(|(_, c)| !c.is_zero());
        if let (Some((k, _)), None) = (support.next(), support.next()) {
            // c·ζ_n^k is c times a primitive (n / gcd(n, k))-th root of unity
            let g = n.gcd(&(k as u32));
            if g == 1 {
                return Ok((n, v));
            }
            let reduced = T::reduce_monomial(n / g, k / g as usize, v.swap_remove(k))?;
            return canonical_coeffs(n / g, reduced);
        }
        for l in distinct_primes(n) {
            let t = if l == 2 && n % 8 != 0 { n / 4 } else { n / l };
            if t == 1 {
                continue;
            }
            let step = (n / t) as usize;
            let u = if distinct_primes(step as u32).iter().all(|p| t % p == 0) {
                // Φ_n(x) = Φ_t(x^step): the subfield is spanned by 1, x^step, x^2step, …
                let on_grid = v.iter().enumerate().all(|(i, c)| i % step == 0 || c.is_zero());
                on_grid.then(|| (0..totient(t) as usize).map(|j| v[j * step].clone()).collect())
            } else {
                T::solve(&v, &descent(n, t))?
            };
            if let Some(u) = u {
                n = t;
                v = u;
                continue 'descend;
            }
        }
        return Ok((n, v));
    }
}

/// An exact element of `Q(ζ_n)` in canonical form.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(into = "CyclotomicRepr", try_from = "CyclotomicRepr")]
pub struct Cyclotomic {
    order: u32,
    coeffs: Vec<BigRational>,
}

/// Rewrites a polynomial in `ζ_n` (`n = 2 mod 4`) as one in `ζ_{n/2}`,
/// using `ζ_n^i = -ζ_n^{i + n/2}` to make every exponent even.
fn fold_half<T>(n: u32, v: Vec<T>) -> Vec<T>
where
    T: Clone + Zero + std::ops::AddAssign + std::ops::SubAssign,
{
    debug_assert_eq!(n % 4, 2);
    let n = n as usize;
    let half = n / 2;
    let mut out = vec![T::zero(); half];
    for (i, c) in v.into_iter().enumerate() {
        let i = i % n;
        if i % 2 == 0 {
            out[i / 2] += c;
        } else {
            out[((i + half) % n) / 2] -= c;
        }
    }
    out
}

impl Cyclotomic {
    pub fn zero() -> Self {
        Cyclotomic::from_rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Cyclotomic::from_int(1)
    }

    pub fn from_int(k: i64) -> Self {
        Cyclotomic::from_rational(BigRational::from_integer(k.into()))
    }

    pub fn from_rational(r: BigRational) -> Self {
        Cyclotomic { order: 1, coeffs: vec![r] }
    }

    /// `ζ_n^k` as an element of `Q(ζ_n)`; the exponent is taken mod `n`.
    pub fn root_of_unity(n: u32, k: i64) -> Result<Self, CyclotomicError> {
        if n == 0 {
            return Err(CyclotomicError::ZeroOrder);
        }
        let k = k.rem_euclid(n as i64) as u32;
        let mut poly = vec![BigRational::zero(); k as usize + 1];
        poly[k as usize] = BigRational::one();
        Cyclotomic::from_poly(n, poly)
    }

    /// Builds a value from a (not necessarily reduced) polynomial in `ζ_n`.
    pub fn from_poly(n: u32, poly: Vec<BigRational>) -> Result<Self, CyclotomicError> {
        if n == 0 {
            return Err(CyclotomicError::ZeroOrder);
        }
        Ok(Cyclotomic::canonical(n, reduce_poly(n, poly)))
    }

    /// Canonical form of reduced coefficients in `Q(ζ_n)`: the smallest
    /// cyclotomic field containing the value, with order `≢ 2 (mod 4)`.
    fn canonical(n: u32, coeffs: Vec<BigRational>) -> Self {
        let (order, coeffs) = canonical_coeffs(n, coeffs).expect("exact arithmetic");
        Cyclotomic { order, coeffs }
    }

    /// Builds a value from canonical coefficients (length `φ(n)`).
    pub fn from_coeffs(n: u32, coeffs: Vec<BigRational>) -> Result<Self, CyclotomicError> {
        if n == 0 {
            return Err(CyclotomicError::ZeroOrder);
        }
        let expected = totient(n) as usize;
        if coeffs.len() != expected {
            return Err(CyclotomicError::Length { order: n, expected, got: coeffs.len() });
        }
        Ok(Cyclotomic::canonical(n, coeffs))
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The same value written in `Q(ζ_m)`, not canonicalized; `m` must be a
    /// multiple of the order and `≢ 2 (mod 4)`.
    pub fn lift(&self, m: u32) -> Self {
        assert!(m % self.order == 0, "cannot lift order {} to {}", self.order, m);
        assert!(m % 4 != 2, "order {m} is not a canonical order");
        if m == self.order {
            return self.clone();
        }
        let step = (m / self.order) as usize;
        let len = (self.coeffs.len().saturating_sub(1)) * step + 1;
        let mut poly = vec![BigRational::zero(); len];
        for (i, c) in self.coeffs.iter().enumerate() {
            poly[i * step] = c.clone();
        }
        Cyclotomic { order: m, coeffs: reduce_poly(m, poly) }
    }

    fn common(a: &Self, b: &Self) -> (Self, Self) {
        if a.order == b.order {
            return (a.clone(), b.clone());
        }
        let m = a.order.lcm(&b.order);
        (a.lift(m), b.lift(m))
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        if r.is_zero() {
            return Cyclotomic::zero();
        }
        Cyclotomic { order: self.order, coeffs: self.coeffs.iter().map(|c| c * r).collect() }
    }

    /// Complex conjugation `ζ ↦ ζ^{-1}`.
    pub fn conj(&self) -> Self {
        let n = self.order as usize;
        if n == 1 {
            return self.clone();
        }
        let mut poly = vec![BigRational::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            poly[(n - i) % n] += c;
        }
        Cyclotomic::from_poly(self.order, poly).expect("nonzero order")
    }

    /// The Galois automorphism `ζ ↦ ζ^k`; `k` must be coprime to the order.
    pub fn galois(&self, k: u32) -> Self {
        let n = self.order as usize;
        assert_eq!((k as usize).gcd(&n), 1, "exponent must be a unit mod the order");
        let mut poly = vec![BigRational::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            poly[i * k as usize % n] += c;
        }
        Cyclotomic::from_poly(self.order, poly).expect("nonzero order")
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// `Some(k)` iff the value is the rational integer `k`.
    pub fn as_rational_integer(&self) -> Option<BigInt> {
        self.as_rational().filter(|r| r.is_integer()).map(|r| r.to_integer())
    }

    /// Like [`as_rational_integer`](Self::as_rational_integer) but narrowed to `i64`.
    pub fn as_i64(&self) -> Option<i64> {
        self.as_rational_integer().and_then(|k| k.to_i64())
    }

    /// Least common denominator of the coefficients.
    pub fn denominator(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    /// Embedding under `ζ_n ↦ e^{2πi/n}`. For diagnostics only.
    pub fn to_complex(&self) -> Complex64 {
        let n = self.order as f64;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                let theta = 2.0 * std::f64::consts::PI * i as f64 / n;
                Complex64::from_polar(c.to_f64().unwrap_or(f64::NAN), theta)
            })
            .sum()
    }

    /// Polynomial text in the symbol `z`, e.g. `1/7 - 2/7*z`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = match i {
                0 => String::new(),
                1 => "z".to_string(),
                _ => format!("z^{i}"),
            };
            if i == 0 {
                out.push_str(&mag.to_string());
            } else if mag.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{mag}*{mono}"));
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }

    /// Parses the text form of [`to_text`](Self::to_text) as an element of
    /// `Q(ζ_n)`. Powers of `z` beyond `φ(n) - 1` are accepted and reduced.
    pub fn parse(n: u32, text: &str) -> Result<Self, CyclotomicError> {
        if n == 0 {
            return Err(CyclotomicError::ZeroOrder);
        }
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(CyclotomicError::Parse(text.to_string()));
        }
        let mut terms = Vec::new();
        let mut start = 0;
        for (i, ch) in s.char_indices() {
            if (ch == '+' || ch == '-') && i > start {
                terms.push(&s[start..i]);
                start = i;
            }
        }
        terms.push(&s[start..]);

        let mut poly: Vec<BigRational> = Vec::new();
        for term in terms {
            let bad = || CyclotomicError::Parse(term.to_string());
            let (sign, body) = match term.as_bytes().first() {
                Some(b'-') => (-1, &term[1..]),
                Some(b'+') => (1, &term[1..]),
                _ => (1, term),
            };
            if body.is_empty() {
                return Err(bad());
            }
            let (coeff_text, power) = match body.find('z') {
                None => (body, 0usize),
                Some(pos) => {
                    let coeff = body[..pos].strip_suffix('*').unwrap_or(&body[..pos]);
                    if pos > 0 && coeff.len() == body[..pos].len() {
                        return Err(bad());
                    }
                    let rest = &body[pos + 1..];
                    let power = if rest.is_empty() {
                        1
                    } else {
                        rest.strip_prefix('^')
                            .ok_or_else(bad)?
                            .parse::<usize>()
                            .map_err(|_| bad())?
                    };
                    (if coeff.is_empty() { "1" } else { coeff }, power)
                }
            };
            let coeff = parse_rational(coeff_text).ok_or_else(bad)?;
            if poly.len() <= power {
                poly.resize(power + 1, BigRational::zero());
            }
            poly[power] += coeff * BigRational::from_integer(sign.into());
        }
        Cyclotomic::from_poly(n, poly)
    }
}

fn parse_rational(s: &str) -> Option<BigRational> {
    match s.split_once('/') {
        None => BigInt::from_str(s).ok().map(BigRational::from_integer),
        Some((a, b)) => {
            let a = BigInt::from_str(a).ok()?;
            let b = BigInt::from_str(b).ok()?;
            (!b.is_zero()).then(|| BigRational::new(a, b))
        }
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}  [z = zeta_{}]", self.to_text(), self.order)
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            return self.coeffs == other.coeffs;
        }
        let (a, b) = Cyclotomic::common(self, other);
        a.coeffs == b.coeffs
    }
}

impl Eq for Cyclotomic {}

impl Add for &Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        let (a, b) = Cyclotomic::common(self, rhs);
        let coeffs = a.coeffs.into_iter().zip(b.coeffs).map(|(x, y)| x + y).collect();
        Cyclotomic::canonical(a.order, coeffs)
    }
}

impl Sub for &Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        let (a, b) = Cyclotomic::common(self, rhs);
        let coeffs = a.coeffs.into_iter().zip(b.coeffs).map(|(x, y)| x - y).collect();
        Cyclotomic::canonical(a.order, coeffs)
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic { order: self.order, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Mul for &Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        let (a, b) = Cyclotomic::common(self, rhs);
        let mut prod = vec![BigRational::zero(); a.coeffs.len() + b.coeffs.len() - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        Cyclotomic::from_poly(a.order, prod).expect("nonzero order")
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for Cyclotomic {
            type Output = Cyclotomic;
            fn $m(self, rhs: Cyclotomic) -> Cyclotomic {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Cyclotomic> for Cyclotomic {
            type Output = Cyclotomic;
            fn $m(self, rhs: &Cyclotomic) -> Cyclotomic {
                (&self).$m(rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        -&self
    }
}

impl std::iter::Sum for Cyclotomic {
    fn sum<I: Iterator<Item = Cyclotomic>>(iter: I) -> Cyclotomic {
        iter.fold(Cyclotomic::zero(), |acc, x| acc + x)
    }
}

/// JSON form: `{"order": n, "coefficients": [["num", "den"], ...]}`.
#[derive(Serialize, Deserialize)]
struct CyclotomicRepr {
    order: u32,
    coefficients: Vec<[String; 2]>,
}

impl From<Cyclotomic> for CyclotomicRepr {
    fn from(c: Cyclotomic) -> Self {
        CyclotomicRepr {
            order: c.order,
            coefficients: c
                .coeffs
                .iter()
                .map(|r| [r.numer().to_string(), r.denom().to_string()])
                .collect(),
        }
    }
}

impl TryFrom<CyclotomicRepr> for Cyclotomic {
    type Error = CyclotomicError;
    fn try_from(r: CyclotomicRepr) -> Result<Self, Self::Error> {
        let coeffs = r
            .coefficients
            .iter()
            .map(|[a, b]| {
                let a = BigInt::from_str(a).map_err(|_| CyclotomicError::Parse(a.clone()))?;
                let b = BigInt::from_str(b).map_err(|_| CyclotomicError::Parse(b.clone()))?;
                if b.is_zero() {
                    return Err(CyclotomicError::ZeroDenominator);
                }
                Ok(BigRational::new(a, b))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Cyclotomic::from_coeffs(r.order, coeffs)
    }
}

/// Integer accumulator in `Z[x]/(x^n - 1)`, i.e. formal sums of powers of `ζ_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupRing {
    n: u32,
    c: Vec<i64>,
}

impl GroupRing {
    pub fn zero(n: u32) -> Self {
        assert!(n > 0);
        GroupRing { n, c: vec![0; n as usize] }
    }

    pub fn monomial(n: u32, k: u32, coeff: i64) -> Self {
        let mut g = GroupRing::zero(n);
        g.c[(k % n) as usize] = coeff;
        g
    }

    pub fn order(&self) -> u32 {
        self.n
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.c
    }

    /// Sum of absolute coefficient values.
    pub fn l1_norm(&self) -> i64 {
        self.c.iter().map(|c| c.abs()).sum()
    }

    #[inline]
    pub fn add_monomial(&mut self, k: u32, coeff: i64) {
        self.c[k as usize] += coeff;
    }

    /// `self += ζ^shift · other`.
    pub fn add_rotated(&mut self, other: &GroupRing, shift: u32) {
        debug_assert_eq!(self.n, other.n);
        let n = self.n as usize;
        let s = shift as usize % n;
        let (head, tail) = other.c.split_at(n - s);
        for (dst, src) in self.c[s..].iter_mut().zip(head) {
            *dst += src;
        }
        for (dst, src) in self.c[..s].iter_mut().zip(tail) {
            *dst += src;
        }
    }

    pub fn rotated(&self, shift: u32) -> GroupRing {
        let mut g = GroupRing::zero(self.n);
        g.add_rotated(self, shift);
        g
    }

    pub fn add_assign(&mut self, other: &GroupRing) {
        self.add_rotated(other, 0);
    }

    pub fn mul(&self, other: &GroupRing) -> GroupRing {
        debug_assert_eq!(self.n, other.n);
        let n = self.n as usize;
        let mut out = GroupRing::zero(self.n);
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.c.iter().enumerate() {
                if b != 0 {
                    let k = if i + j >= n { i + j - n } else { i + j };
                    out.c[k] += a * b;
                }
            }
        }
        out
    }

    /// `ζ ↦ ζ^{-1}`.
    pub fn conj(&self) -> GroupRing {
        let n = self.n as usize;
        let mut out = GroupRing::zero(self.n);
        for (i, &a) in self.c.iter().enumerate() {
            out.c[(n - i) % n] = a;
        }
        out
    }

    fn to_reduced_i128(&self) -> (u32, Vec<i128>) {
        // Shrink to the smallest order whose exponents cover the support.
        let mut s = self.n;
        for (i, &a) in self.c.iter().enumerate() {
            if a != 0 {
                s = s.gcd(&(i as u32));
            }
        }
        if s == self.n {
            // zero, or supported on the exponent 0 only
            return (1, vec![self.c[0] as i128]);
        }
        let m = self.n / s;
        let v: Vec<i128> = (0..m).map(|i| self.c[(i * s) as usize] as i128).collect();
        if m % 4 == 2 {
            return (m / 2, fold_half(m, v));
        }
        (m, v)
    }

    /// Canonical value, shrunk to the smallest order the support allows.
    pub fn to_cyclotomic(&self) -> Cyclotomic {
        self.to_cyclotomic_scaled(&BigRational::one())
    }

    /// `scale · self` in canonical form.
    pub fn to_cyclotomic_scaled(&self, scale: &BigRational) -> Cyclotomic {
        let (m, v) = self.to_reduced_i128();
        let phi = cyclotomic_poly(m);
        let scaled = |ints: Vec<i128>| -> Vec<BigRational> {
            ints.into_iter().map(|k| BigRational::from_integer(k.into()) * scale).collect()
        };
        if let Some(r) = reduce_i128(v.clone(), &phi) {
            if let Ok((order, u)) = canonical_coeffs(m, r) {
                return Cyclotomic { order, coeffs: scaled(u) };
            }
        }
        let ints = reduce_big(v.into_iter().map(BigInt::from).collect(), &phi);
        let coeffs = ints.into_iter().map(|k| BigRational::from_integer(k) * scale).collect();
        Cyclotomic::canonical(m, coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u32, k: i64) -> Cyclotomic {
        Cyclotomic::root_of_unity(n, k).unwrap()
    }

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(*cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(*cyclotomic_poly(2), vec![1, 1]);
        assert_eq!(*cyclotomic_poly(3), vec![1, 1, 1]);
        assert_eq!(*cyclotomic_poly(4), vec![1, 0, 1]);
        assert_eq!(*cyclotomic_poly(6), vec![1, -1, 1]);
        assert_eq!(*cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
        // Φ_105 is the first with a coefficient of absolute value 2
        let p105 = cyclotomic_poly(105);
        assert_eq!(p105.len() as u32 - 1, totient(105));
        assert!(p105.contains(&-2));
        for n in 1..200 {
            assert_eq!(cyclotomic_poly(n).len() as u32 - 1, totient(n));
        }
    }

    #[test]
    fn roots_of_unity() {
        assert_eq!(z(3, 0), Cyclotomic::one());
        assert_eq!(&z(3, 1) + &z(3, 2), Cyclotomic::from_int(-1));
        assert_eq!(z(4, 2), Cyclotomic::from_int(-1));
        assert_eq!(z(5, 7), z(5, 2));
        assert_eq!(Cyclotomic::root_of_unity(0, 1), Err(CyclotomicError::ZeroOrder));
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(&z(3, 1) * &z(3, 2), Cyclotomic::one());
        let seven_z = z(3, 1).scale(&q(7, 1));
        assert_eq!(seven_z.scale(&q(1, 7)), z(3, 1));
        // ζ_3 ζ_4 = ζ_12^4 ζ_12^3 = ζ_12^7
        let prod = &z(3, 1) * &z(4, 1);
        assert_eq!(prod.order(), 12);
        assert_eq!(prod, z(12, 7));
    }

    #[test]
    fn conjugation() {
        assert_eq!(z(3, 1).conj(), z(3, 2));
        let r = Cyclotomic::from_rational(q(-3, 5));
        assert_eq!(r.conj(), r);
        let a = &z(7, 2).scale(&q(2, 3)) - &z(7, 5);
        assert_eq!(a.conj().conj(), a);
    }

    #[test]
    fn rational_integer_detection() {
        let s = &(&Cyclotomic::one() + &z(3, 1)) + &z(3, 2);
        assert_eq!(s.as_rational_integer(), Some(BigInt::zero()));
        assert_eq!(z(3, 1).as_rational_integer(), None);
        let seven_z = z(3, 1).scale(&q(7, 1));
        let v = &(&seven_z - &seven_z) + &Cyclotomic::from_int(3);
        assert_eq!(v.as_i64(), Some(3));
        assert_eq!(Cyclotomic::from_rational(q(1, 2)).as_rational_integer(), None);
    }

    #[test]
    fn complex_embedding() {
        let i = z(4, 1).to_complex();
        assert!((i - Complex64::new(0.0, 1.0)).norm() < 1e-12);
        let m1 = Cyclotomic::from_int(-1).to_complex();
        assert!((m1 - Complex64::new(-1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn text_round_trip() {
        let a = Cyclotomic::parse(3, "1/7 - 2/7*z").unwrap();
        assert_eq!(a.to_text(), "1/7 - 2/7*z");
        assert_eq!(Cyclotomic::parse(3, "z^2").unwrap(), z(3, 2));
        assert_eq!(Cyclotomic::parse(3, "1 + z + z^2").unwrap(), Cyclotomic::zero());
        // -ζ_12^3 = -i lives in Q(ζ_4)
        let v = Cyclotomic::parse(12, "-z^3").unwrap();
        assert_eq!((v.order(), v.to_text().as_str()), (4, "-z"));
        assert_eq!(Cyclotomic::zero().to_text(), "0");
        assert!(Cyclotomic::parse(3, "1 +").is_err());
        assert!(Cyclotomic::parse(3, "2z").is_err());
        assert!(Cyclotomic::parse(3, "1/0").is_err());
    }

    #[test]
    fn json_form() {
        let a = Cyclotomic::parse(3, "1/7 - 2/7*z").unwrap();
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, r#"{"order":3,"coefficients":[["1","7"],["-2","7"]]}"#);
        let back: Cyclotomic = serde_json::from_str(&s).unwrap();
        assert_eq!(back, a);
        assert!(serde_json::from_str::<Cyclotomic>(r#"{"order":3,"coefficients":[["1","1"]]}"#)
            .is_err());
    }

    #[test]
    fn orders_two_mod_four_fold() {
        // ζ_6 = 1 + ζ_3
        let z6 = z(6, 1);
        assert_eq!(z6.order(), 3);
        assert_eq!(z6, Cyclotomic::one() + z(3, 1));
        let g = GroupRing::monomial(6, 1, 1).to_cyclotomic();
        assert_eq!(g.order(), 3);
        assert_eq!(g.coeffs(), z6.coeffs());
        assert_eq!(z(10, 5), Cyclotomic::from_int(-1));
        assert_eq!(z(10, 3).order(), 5);
        assert!((z(10, 3).to_complex() - Complex64::from_polar(1.0, 0.6 * std::f64::consts::PI)).norm() < 1e-12);
    }

    #[test]
    fn values_descend_to_their_smallest_field() {
        // ζ_12 + ζ_12^{-1} = √3 stays at order 12
        let sqrt3 = &z(12, 1) + &z(12, 11);
        assert_eq!(sqrt3.order(), 12);
        // ζ_12^4 = ζ_3, ζ_12^3 = i, ζ_15^5 = ζ_3
        assert_eq!(z(12, 4).order(), 3);
        assert_eq!(z(12, 3).order(), 4);
        assert_eq!(z(15, 5).order(), 3);
        // i√3 = 2ζ_3 + 1 is in Q(ζ_3) even though both factors need order 12
        let i_sqrt3 = &z(4, 1) * &sqrt3;
        assert_eq!(i_sqrt3.order(), 3);
        assert_eq!(i_sqrt3, &z(3, 1).scale(&BigRational::from_integer(2.into())) + &Cyclotomic::one());
        // (ζ_4 + ζ_3) - ζ_4 comes back to order 3
        let back = &(&z(4, 1) + &z(3, 1)) - &z(4, 1);
        assert_eq!((back.order(), back.coeffs()), (3, z(3, 1).coeffs()));
        // √5 = 1 + 2(ζ_5 + ζ_5^4) in Q(ζ_5) reached from order 20
        let s5 = GroupRing::monomial(20, 4, 2).to_cyclotomic() + GroupRing::monomial(20, 16, 2).to_cyclotomic();
        assert_eq!(s5.order(), 5);
    }

    #[test]
    fn group_ring_shrinks_order() {
        // 1 + x^2 + x^4 in Z[x]/(x^6 - 1) is 1 + ζ_3 + ζ_3^2 = 0
        let mut g = GroupRing::zero(6);
        for k in [0, 2, 4] {
            g.add_monomial(k, 1);
        }
        let v = g.to_cyclotomic();
        assert!(v.is_zero());
        assert_eq!(v.order(), 1);
        let h = GroupRing::monomial(12, 4, 5).to_cyclotomic();
        assert_eq!(h.order(), 3);
        assert_eq!(h, z(3, 1).scale(&q(5, 1)));
    }

    #[test]
    fn group_ring_matches_field_arithmetic() {
        let a = GroupRing::monomial(10, 3, 2);
        let mut b = GroupRing::monomial(10, 9, -1);
        b.add_monomial(4, 3);
        let lhs = a.mul(&b).to_cyclotomic();
        let rhs = &a.to_cyclotomic() * &b.to_cyclotomic();
        assert_eq!(lhs, rhs);
        assert_eq!(b.conj().to_cyclotomic(), b.to_cyclotomic().conj());
        assert_eq!(b.rotated(3).to_cyclotomic(), &b.to_cyclotomic() * &z(10, 3));
    }
}
