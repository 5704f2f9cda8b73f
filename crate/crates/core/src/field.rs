//! Finite fields `F_{p^e}` with table-driven multiplication.
//!
//! Elements are encoded as integers in `[0, q)`: the base-`p` digits of the
//! code, read low-to-high, are the coefficients of the representative
//! polynomial modulo the field's defining polynomial. Code `0` is zero and
//! code `1` is one in every field.
//!
//! Construction is deterministic. The defining polynomial is the
//! lexicographically smallest monic irreducible of degree `e` (coefficients
//! compared from the constant term upwards) and the generator is the element
//! of order `q - 1` with the smallest code. Full exponential and discrete-log
//! tables are built once so that multiplication and `dlog` are table lookups.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("characteristic {0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {0} exceeds the supported limit of 2^20")]
    TooLarge(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("element code {code} is out of range for a field of order {q}")]
    OutOfRange { code: u64, q: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("discrete logarithm of zero is undefined")]
    LogOfZero,
}

/// An element of a [`Field`], stored as its canonical code.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Elem(u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    #[inline]
    pub fn code(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A concrete finite field together with its generator and log tables.
#[derive(Clone)]
pub struct Field {
    p: u32,
    e: u32,
    q: u32,
    modulus: Vec<u32>,
    generator: Elem,
    /// `exp[k] = g^k` for `k` in `[0, 2(q-1))`; doubled so products need no reduction.
    exp: Vec<u32>,
    /// `log[x]` for `x != 0`; `log[0]` is unused.
    log: Vec<u32>,
    /// `p^i` for `i` in `[0, e)`.
    place: Vec<u32>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("p", &self.p)
            .field("e", &self.e)
            .field("q", &self.q)
            .field("modulus", &self.modulus)
            .field("generator", &self.generator)
            .finish()
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.e == other.e && self.modulus == other.modulus
    }
}

impl Eq for Field {}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime factors of `n`, ascending.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Splits `q` as `p^e`, if it is a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    let factors = prime_factors(q);
    if factors.len() != 1 {
        return None;
    }
    let p = factors[0];
    let mut e = 0;
    let mut r = q;
    while r > 1 {
        r /= p;
        e += 1;
    }
    Some((p, e))
}

// Dense polynomials over F_p, coefficients low-to-high, no trailing zeros.
mod poly {
    pub(super) fn trim(a: &mut Vec<u32>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    fn inv_mod(a: u32, p: u32) -> u32 {
        pow_mod(a as u64, p as u64 - 2, p as u64) as u32
    }

    pub(super) fn pow_mod(mut b: u64, mut k: u64, m: u64) -> u64 {
        let mut r = 1 % m;
        b %= m;
        while k > 0 {
            if k & 1 == 1 {
                r = r * b % m;
            }
            b = b * b % m;
            k >>= 1;
        }
        r
    }

    /// Remainder of `a` modulo `m` (any nonzero `m`).
    pub(super) fn rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        let mut r = a.to_vec();
        trim(&mut r);
        let dm = m.len() - 1;
        let lead_inv = inv_mod(m[dm], p) as u64;
        while r.len() > dm {
            let dr = r.len() - 1;
            let c = r[dr] as u64 * lead_inv % p as u64;
            let shift = dr - dm;
            for (i, &mi) in m.iter().enumerate() {
                let sub = c * mi as u64 % p as u64;
                let v = &mut r[shift + i];
                *v = ((*v as u64 + p as u64 - sub) % p as u64) as u32;
            }
            trim(&mut r);
        }
        r
    }

    pub(super) fn mul_mod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut prod = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p as u64;
            }
        }
        let prod: Vec<u32> = prod.into_iter().map(|v| v as u32).collect();
        rem(&prod, m, p)
    }

    pub(super) fn pow_poly_mod(base: &[u32], mut k: u64, m: &[u32], p: u32) -> Vec<u32> {
        let mut result = rem(&[1], m, p);
        let mut b = rem(base, m, p);
        while k > 0 {
            if k & 1 == 1 {
                result = mul_mod(&result, &b, m, p);
            }
            b = mul_mod(&b, &b, m, p);
            k >>= 1;
        }
        result
    }

    pub(super) fn gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let mut a = a.to_vec();
        let mut b = b.to_vec();
        trim(&mut a);
        trim(&mut b);
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    /// Ben-Or irreducibility test for a monic `f` of degree `e >= 1`.
    pub(super) fn is_irreducible(f: &[u32], p: u32) -> bool {
        let e = f.len() - 1;
        let x = vec![0, 1];
        let mut h = rem(&x, f, p);
        for _ in 0..e / 2 {
            h = pow_poly_mod(&h, p as u64, f, p);
            // h - x
            let mut d = h.clone();
            d.resize(d.len().max(2), 0);
            d[1] = (d[1] + p - 1) % p;
            trim(&mut d);
            let g = gcd(f, &d, p);
            if g.len() != 1 {
                return false;
            }
        }
        true
    }
}

impl Field {
    /// Builds `F_{p^e}`.
    pub fn new(p: u64, e: u32) -> Result<Field, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if e == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let q = p
            .checked_pow(e)
            .filter(|&q| q <= MAX_ORDER)
            .ok_or_else(|| FieldError::TooLarge(p.saturating_pow(e)))?;
        let p32 = p as u32;
        let q32 = q as u32;

        let modulus = if e == 1 {
            vec![0, 1]
        } else {
            smallest_irreducible(p32, e)
        };
        let place: Vec<u32> = (0..e).map(|i| p32.pow(i)).collect();

        let to_poly = |code: u32| -> Vec<u32> {
            let mut c = code;
            let mut v = Vec::with_capacity(e as usize);
            for _ in 0..e {
                v.push(c % p32);
                c /= p32;
            }
            poly::trim(&mut v);
            v
        };
        let to_code = |v: &[u32]| -> u32 { v.iter().zip(&place).map(|(c, w)| c * w).sum() };

        let order = q - 1;
        let factors = prime_factors(order);
        let generator = if e == 1 {
            (1..q)
                .find(|&g| {
                    factors
                        .iter()
                        .all(|&r| poly::pow_mod(g, order / r, q) != 1)
                })
                .map(|g| g as u32)
        } else {
            (1..q32).find(|&g| {
                let gp = to_poly(g);
                factors
                    .iter()
                    .all(|&r| poly::pow_poly_mod(&gp, order / r, &modulus, p32) != [1])
            })
        }
        .expect("multiplicative group of a finite field is cyclic");

        let n = (q - 1) as usize;
        let mut exp = vec![0u32; 2 * n];
        let mut log = vec![0u32; q as usize];
        let mut cur = 1u32;
        let gpoly = to_poly(generator);
        for k in 0..n {
            exp[k] = cur;
            exp[k + n] = cur;
            log[cur as usize] = k as u32;
            cur = if e == 1 {
                ((cur as u64 * generator as u64) % q) as u32
            } else {
                to_code(&poly::mul_mod(&to_poly(cur), &gpoly, &modulus, p32))
            };
        }
        debug_assert_eq!(cur, 1);

        Ok(Field {
            p: p32,
            e,
            q: q32,
            modulus,
            generator: Elem(generator),
            exp,
            log,
            place,
        })
    }

    /// Builds the field of order `q`, which must be a prime power.
    pub fn with_order(q: u64) -> Result<Field, FieldError> {
        let (p, e) = prime_power(q).ok_or(FieldError::NotPrimePower(q))?;
        Field::new(p, e)
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.e
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    /// Coefficients of the defining polynomial, low-to-high. For prime
    /// fields this is the degenerate `x`.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn generator(&self) -> Elem {
        self.generator
    }

    pub fn elem(&self, code: u64) -> Result<Elem, FieldError> {
        if code < self.q as u64 {
            Ok(Elem(code as u32))
        } else {
            Err(FieldError::OutOfRange { code, q: self.q })
        }
    }

    /// Image of an integer under `Z -> F_p ⊂ F_q`.
    pub fn from_int(&self, n: i64) -> Elem {
        Elem(n.rem_euclid(self.p as i64) as u32)
    }

    pub fn minus_one(&self) -> Elem {
        Elem(self.p - 1)
    }

    /// All elements in code order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.q).map(Elem)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = Elem> {
        (1..self.q).map(Elem)
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.e == 1 {
            let s = a.0 + b.0;
            return Elem(if s >= self.p { s - self.p } else { s });
        }
        if self.p == 2 {
            return Elem(a.0 ^ b.0);
        }
        let (mut x, mut y, mut out) = (a.0, b.0, 0);
        for &w in &self.place {
            let mut d = x % self.p + y % self.p;
            if d >= self.p {
                d -= self.p;
            }
            out += d * w;
            x /= self.p;
            y /= self.p;
        }
        Elem(out)
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        if self.e == 1 {
            return Elem(if a.0 == 0 { 0 } else { self.p - a.0 });
        }
        if self.p == 2 {
            return a;
        }
        let (mut x, mut out) = (a.0, 0);
        for &w in &self.place {
            let d = x % self.p;
            out += if d == 0 { 0 } else { (self.p - d) * w };
            x /= self.p;
        }
        Elem(out)
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        if self.e == 1 {
            return Elem(if a.0 >= b.0 { a.0 - b.0 } else { a.0 + self.p - b.0 });
        }
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.0 == 0 || b.0 == 0 {
            return Elem::ZERO;
        }
        let k = self.log[a.0 as usize] + self.log[b.0 as usize];
        Elem(self.exp[k as usize])
    }

    pub fn inv(&self, a: Elem) -> Result<Elem, FieldError> {
        if a.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let n = self.q - 1;
        let k = (n - self.log[a.0 as usize]) % n;
        Ok(Elem(self.exp[k as usize]))
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^k`; negative exponents require a nonzero base. `0^0 = 1`.
    pub fn pow(&self, a: Elem, k: i64) -> Result<Elem, FieldError> {
        if a.is_zero() {
            return match k {
                0 => Ok(Elem::ONE),
                k if k > 0 => Ok(Elem::ZERO),
                _ => Err(FieldError::DivisionByZero),
            };
        }
        let n = (self.q - 1) as i64;
        let k = (self.log[a.0 as usize] as i64 * k.rem_euclid(n)).rem_euclid(n);
        Ok(Elem(self.exp[k as usize]))
    }

    /// Exponent `k` in `[0, q-2]` with `g^k = x`.
    pub fn dlog(&self, x: Elem) -> Result<u32, FieldError> {
        if x.is_zero() {
            Err(FieldError::LogOfZero)
        } else {
            Ok(self.log[x.0 as usize])
        }
    }

    /// Unchecked discrete log for hot loops; `x` must be nonzero.
    #[inline]
    pub(crate) fn log_unchecked(&self, x: Elem) -> u32 {
        debug_assert!(!x.is_zero());
        self.log[x.0 as usize]
    }

    /// Human-readable defining polynomial, e.g. `x^2 + x + 1`.
    pub fn modulus_string(&self) -> String {
        let mut terms = Vec::new();
        for (i, &c) in self.modulus.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            };
            terms.push(match (c, i) {
                (_, 0) => c.to_string(),
                (1, _) => mono,
                _ => format!("{c}*{mono}"),
            });
        }
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }
}

fn smallest_irreducible(p: u32, e: u32) -> Vec<u32> {
    let total = (p as u64).pow(e);
    // Enumerate (c_0, ..., c_{e-1}) lexicographically with c_0 most significant.
    for k in 0..total {
        let mut f = vec![0u32; e as usize + 1];
        let mut r = k;
        for i in (0..e as usize).rev() {
            f[i] = (r % p as u64) as u32;
            r /= p as u64;
        }
        f[e as usize] = 1;
        if f[0] == 0 {
            continue;
        }
        if poly::is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_seven() {
        let f = Field::new(7, 1).unwrap();
        assert_eq!(f.order(), 7);
        assert_eq!(f.generator(), Elem(3));
        assert_eq!(f.mul(Elem(3), Elem(5)), Elem(1));
        assert_eq!(f.dlog(Elem(2)).unwrap(), 2);
        assert_eq!(f.dlog(Elem::ONE).unwrap(), 0);
        assert_eq!(f.dlog(f.generator()).unwrap(), 1);
    }

    #[test]
    fn four_element_field() {
        let f = Field::new(2, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 1]);
        assert_eq!(f.mul(Elem(2), Elem(2)), Elem(3));
        assert_eq!(f.modulus_string(), "x^2 + x + 1");
    }

    #[test]
    fn twenty_five() {
        let f = Field::new(5, 2).unwrap();
        assert_eq!(f.order(), 25);
        assert_eq!(f.order() % 3, 1);
        // no roots in F_5 means irreducible for a quadratic
        let m = f.modulus();
        let p = 5u32;
        for r in 0..p {
            let v = (m[0] + m[1] * r + r * r) % p;
            assert_ne!(v, 0);
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(Field::new(6, 1), Err(FieldError::NotPrime(6)));
        assert_eq!(Field::new(7, 0), Err(FieldError::ZeroDegree));
        assert!(matches!(Field::new(2, 21), Err(FieldError::TooLarge(_))));
        assert!(matches!(Field::with_order(12), Err(FieldError::NotPrimePower(12))));
        let f = Field::new(7, 1).unwrap();
        assert_eq!(f.inv(Elem::ZERO), Err(FieldError::DivisionByZero));
        assert_eq!(f.dlog(Elem::ZERO), Err(FieldError::LogOfZero));
        assert!(f.elem(7).is_err());
    }

    #[test]
    fn inverse_of_one() {
        for (p, e) in [(2, 3), (3, 2), (7, 1), (5, 2)] {
            let f = Field::new(p, e).unwrap();
            assert_eq!(f.inv(Elem::ONE).unwrap(), Elem::ONE);
        }
    }

    #[test]
    fn dlog_is_bijective() {
        for (p, e) in [(2, 1), (2, 4), (3, 3), (5, 2), (7, 2), (13, 1), (2, 10), (3, 7), (2, 12)] {
            let f = Field::new(p, e).unwrap();
            let n = f.order() - 1;
            let mut seen = vec![false; n as usize];
            for x in f.nonzero() {
                let k = f.dlog(x).unwrap();
                assert!(k < n);
                assert!(!seen[k as usize]);
                seen[k as usize] = true;
                assert_eq!(f.pow(f.generator(), k as i64).unwrap(), x);
            }
        }
    }

    #[test]
    fn field_axioms_small() {
        for (p, e) in [(2, 3), (3, 2), (7, 1), (5, 2)] {
            let f = Field::new(p, e).unwrap();
            for a in f.elements() {
                assert_eq!(f.add(a, f.neg(a)), Elem::ZERO);
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), Elem::ONE);
                }
                for b in f.elements() {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.sub(f.add(a, b), b), a);
                    for c in f.elements() {
                        assert_eq!(
                            f.mul(a, f.add(b, c)),
                            f.add(f.mul(a, b), f.mul(a, c))
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn frobenius_is_additive() {
        for (p, e) in [(2, 10), (3, 6), (5, 4), (31, 2)] {
            let f = Field::new(p, e).unwrap();
            assert!(f.order() <= 1 << 10);
            let fr = |x| f.pow(x, p as i64).unwrap();
            for a in f.elements() {
                for b in f.elements() {
                    assert_eq!(fr(f.add(a, b)), f.add(fr(a), fr(b)));
                }
            }
        }
    }

    #[test]
    fn construction_is_deterministic() {
        let a = Field::new(3, 5).unwrap();
        let b = Field::new(3, 5).unwrap();
        assert_eq!(a.modulus(), b.modulus());
        assert_eq!(a.generator(), b.generator());
        assert_eq!(a.exp, b.exp);
        assert_eq!(a.log, b.log);
    }

    #[test]
    fn from_int_embeds_prime_subfield() {
        let f = Field::new(5, 2).unwrap();
        assert_eq!(f.from_int(-1), f.minus_one());
        assert_eq!(f.add(f.minus_one(), Elem::ONE), Elem::ZERO);
    }
}
