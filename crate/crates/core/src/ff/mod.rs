//! Arithmetic in `F_q = F_p[x]/(f)` for odd primes `p`.
//!
//! Elements are stored by their canonical encoding `sum c_i p^i` (constant
//! coefficient first), which is a bijection onto `[0, q)`. The coefficient
//! vector is always recoverable through [`FieldCtx::coeffs`].
//!
//! Contexts with `q <= TABLE_LIMIT` carry exponent/logarithm tables and a
//! digit table, so multiplication is two lookups and addition never divides.
//! Larger contexts (up to `MAX_ORDER`) fall back to polynomial arithmetic.

pub mod numtheory;
mod poly;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use numtheory::{factorize, is_prime, mul_mod};

/// Largest field order for which lookup tables are built.
pub const TABLE_LIMIT: u64 = 1 << 21;
/// Largest field order a context can be built for.
pub const MAX_ORDER: u64 = 1 << 62;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NonPrime(u64),
    #[error("characteristic {0} is even; only odd characteristic is supported")]
    EvenCharacteristic(u64),
    #[error("extension degree must be at least 1")]
    DegreeZero,
    #[error("field of order {p}^{d} exceeds the supported size")]
    FieldTooLarge { p: u64, d: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("zero raised to a negative power")]
    ZeroToNegativePower,
    #[error("element is not a square")]
    NotASquare,
    #[error("the zero element has no multiplicative order")]
    ZeroElement,
    #[error("{m} does not divide {order}")]
    NotDividing { m: u64, order: u64 },
    #[error("F_{sub_q} is not a subfield of F_{q}")]
    NotASubfield { sub_q: u64, q: u64 },
    #[error("value {value} is not an element of F_{q}")]
    NotAnElement { value: u64, q: u64 },
}

/// One element of a finite field, held as its canonical integer encoding.
///
/// Elements do not remember their context; every operation goes through a
/// [`FieldCtx`].
#[derive(
    Copy, Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct FieldElement(u64);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    /// Canonical encoding `sum c_i p^i`.
    #[inline]
    pub fn value(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

struct Tables {
    /// `exp[i] = g^i` for `0 <= i < q-1`.
    exp: Vec<u32>,
    /// `log[a]` for nonzero `a`; entry 0 unused.
    log: Vec<u32>,
    /// Flattened `q x d` coefficient table.
    digits: Vec<u32>,
}

struct Inner {
    p: u64,
    d: u32,
    q: u64,
    modulus: Vec<u64>,
    generator: FieldElement,
    pow_p: Vec<u64>,
    qm1_factors: Vec<(u64, u32)>,
    tables: Option<Tables>,
}

/// Immutable description of `F_{p^d}` with a fixed modulus and primitive element.
#[derive(Clone)]
pub struct FieldCtx(Arc<Inner>);

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p
                && self.0.d == other.0.d
                && self.0.modulus == other.0.modulus
                && self.0.generator == other.0.generator)
    }
}

impl Eq for FieldCtx {}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.0.p)
            .field("d", &self.0.d)
            .field("modulus", &self.format_poly(&self.0.modulus))
            .field("g", &self.format(self.0.generator))
            .finish()
    }
}

/// `p^d` when it stays within `limit`.
pub fn checked_order(p: u64, d: u32, limit: u64) -> Option<u64> {
    let q = p.checked_pow(d)?;
    (q <= limit).then_some(q)
}

/// Build `F_{p^d}`. The modulus is the value-smallest monic irreducible of
/// degree `d`; the generator is the value-smallest element of order `q-1`.
pub fn make_field(p: u64, d: u32) -> Result<FieldCtx, FieldError> {
    if p == 2 {
        return Err(FieldError::EvenCharacteristic(p));
    }
    if !is_prime(p) {
        return Err(FieldError::NonPrime(p));
    }
    if d == 0 {
        return Err(FieldError::DegreeZero);
    }
    let q = checked_order(p, d, MAX_ORDER).ok_or(FieldError::FieldTooLarge { p, d })?;
    let pow_p: Vec<u64> = (0..=d).map(|i| p.pow(i)).collect();
    let modulus = find_modulus(p, d as usize);
    let qm1_factors = factorize(q - 1);
    let mut inner = Inner {
        p,
        d,
        q,
        modulus,
        generator: FieldElement::ONE,
        pow_p,
        qm1_factors,
        tables: None,
    };
    inner.generator = find_generator(&inner);
    if q <= TABLE_LIMIT {
        inner.tables = Some(build_tables(&inner));
    }
    Ok(FieldCtx(Arc::new(inner)))
}

fn find_modulus(p: u64, d: usize) -> Vec<u64> {
    let span = p.pow(d as u32);
    for v in 0..span {
        let mut f: Vec<u64> = Vec::with_capacity(d + 1);
        let mut rest = v;
        for _ in 0..d {
            f.push(rest % p);
            rest /= p;
        }
        f.push(1);
        if poly::is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("an irreducible polynomial of every degree exists over F_p")
}

fn find_generator(inner: &Inner) -> FieldElement {
    let q = inner.q;
    for v in 1..q {
        let a = FieldElement(v);
        if order_via_factors(inner, a) == q - 1 {
            return a;
        }
    }
    unreachable!("the multiplicative group of a finite field is cyclic")
}

fn order_via_factors(inner: &Inner, a: FieldElement) -> u64 {
    let mut order = inner.q - 1;
    for &(prime, exp) in &inner.qm1_factors {
        for _ in 0..exp {
            if slow_pow(inner, a, order / prime) == FieldElement::ONE {
                order /= prime;
            } else {
                break;
            }
        }
    }
    order
}

fn build_tables(inner: &Inner) -> Tables {
    let q = inner.q as usize;
    let d = inner.d as usize;
    let mut exp = Vec::with_capacity(q - 1);
    let mut log = vec![0u32; q];
    let mut cur = FieldElement::ONE;
    for i in 0..q - 1 {
        exp.push(cur.0 as u32);
        log[cur.0 as usize] = i as u32;
        cur = slow_mul(inner, cur, inner.generator);
    }
    let mut digits = vec![0u32; q * d];
    for v in 0..q {
        let mut rest = v as u64;
        for i in 0..d {
            digits[v * d + i] = (rest % inner.p) as u32;
            rest /= inner.p;
        }
    }
    Tables { exp, log, digits }
}

fn to_coeffs(inner: &Inner, a: FieldElement) -> Vec<u64> {
    let mut rest = a.0;
    (0..inner.d)
        .map(|_| {
            let c = rest % inner.p;
            rest /= inner.p;
            c
        })
        .collect()
}

fn from_coeffs(inner: &Inner, c: &[u64]) -> FieldElement {
    FieldElement(c.iter().zip(&inner.pow_p).map(|(&ci, &pp)| ci * pp).sum())
}

fn slow_mul(inner: &Inner, a: FieldElement, b: FieldElement) -> FieldElement {
    if inner.d == 1 {
        return FieldElement(mul_mod(a.0, b.0, inner.p));
    }
    let ca = to_coeffs(inner, a);
    let cb = to_coeffs(inner, b);
    let r = poly::mul_rem(&ca, &cb, &inner.modulus, inner.p);
    from_coeffs(inner, &r)
}

fn slow_pow(inner: &Inner, a: FieldElement, mut e: u64) -> FieldElement {
    let mut acc = FieldElement::ONE;
    let mut b = a;
    while e > 0 {
        if e & 1 == 1 {
            acc = slow_mul(inner, acc, b);
        }
        b = slow_mul(inner, b, b);
        e >>= 1;
    }
    acc
}

impl FieldCtx {
    #[inline]
    pub fn characteristic(&self) -> u64 {
        self.0.p
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.0.d
    }

    /// Field order `q = p^d`.
    #[inline]
    pub fn order(&self) -> u64 {
        self.0.q
    }

    /// Modulus coefficients, constant term first, monic.
    pub fn modulus(&self) -> &[u64] {
        &self.0.modulus
    }

    /// The fixed primitive element `g`.
    #[inline]
    pub fn generator(&self) -> FieldElement {
        self.0.generator
    }

    /// `r` with `q = r^2`, when the degree is even.
    pub fn sqrt_order(&self) -> Option<u64> {
        (self.0.d % 2 == 0).then(|| self.0.p.pow(self.0.d / 2))
    }

    /// Factorization of `q - 1`.
    pub fn order_factors(&self) -> &[(u64, u32)] {
        &self.0.qm1_factors
    }

    pub fn element(&self, value: u64) -> Result<FieldElement, FieldError> {
        if value < self.0.q {
            Ok(FieldElement(value))
        } else {
            Err(FieldError::NotAnElement { value, q: self.0.q })
        }
    }

    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<FieldElement, FieldError> {
        if coeffs.len() > self.0.d as usize || coeffs.iter().any(|&c| c >= self.0.p) {
            return Err(FieldError::NotAnElement {
                value: u64::MAX,
                q: self.0.q,
            });
        }
        Ok(from_coeffs(&self.0, coeffs))
    }

    /// Coefficient vector of length `d`, constant term first.
    pub fn coeffs(&self, a: FieldElement) -> Vec<u64> {
        to_coeffs(&self.0, a)
    }

    /// Image of an integer under `Z -> F_p -> F_q`.
    pub fn from_int(&self, n: i64) -> FieldElement {
        FieldElement(n.rem_euclid(self.0.p as i64) as u64)
    }

    /// Iterate over all elements in encoding order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.0.q).map(FieldElement)
    }

    pub fn has_tables(&self) -> bool {
        self.0.tables.is_some()
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let inner = &*self.0;
        let p = inner.p;
        if inner.d == 1 {
            let s = a.0 + b.0;
            return FieldElement(if s >= p { s - p } else { s });
        }
        if let Some(t) = &inner.tables {
            let d = inner.d as usize;
            let da = &t.digits[a.0 as usize * d..][..d];
            let db = &t.digits[b.0 as usize * d..][..d];
            let mut v = 0u64;
            for i in 0..d {
                let s = (da[i] + db[i]) as u64;
                v += if s >= p { s - p } else { s } * inner.pow_p[i];
            }
            return FieldElement(v);
        }
        let (mut x, mut y, mut v) = (a.0, b.0, 0u64);
        for i in 0..inner.d as usize {
            let s = x % p + y % p;
            x /= p;
            y /= p;
            v += if s >= p { s - p } else { s } * inner.pow_p[i];
        }
        FieldElement(v)
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        let inner = &*self.0;
        let p = inner.p;
        if inner.d == 1 {
            return FieldElement(if a.0 == 0 { 0 } else { p - a.0 });
        }
        let mut v = 0u64;
        let mut x = a.0;
        for i in 0..inner.d as usize {
            let c = x % p;
            x /= p;
            v += if c == 0 { 0 } else { p - c } * inner.pow_p[i];
        }
        FieldElement(v)
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let inner = &*self.0;
        if inner.d == 1 {
            let p = inner.p;
            return FieldElement(if a.0 >= b.0 { a.0 - b.0 } else { a.0 + p - b.0 });
        }
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.0 == 0 || b.0 == 0 {
            return FieldElement::ZERO;
        }
        let inner = &*self.0;
        if let Some(t) = &inner.tables {
            let qm1 = (inner.q - 1) as u32;
            let mut s = t.log[a.0 as usize] + t.log[b.0 as usize];
            if s >= qm1 {
                s -= qm1;
            }
            return FieldElement(t.exp[s as usize] as u64);
        }
        slow_mul(inner, a, b)
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement, FieldError> {
        if a.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let inner = &*self.0;
        if let Some(t) = &inner.tables {
            let qm1 = (inner.q - 1) as u32;
            let l = t.log[a.0 as usize];
            return Ok(FieldElement(t.exp[((qm1 - l) % qm1) as usize] as u64));
        }
        Ok(slow_pow(inner, a, inner.q - 2))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn arith(
        &self,
        a: FieldElement,
        b: FieldElement,
        op: ArithOp,
    ) -> Result<FieldElement, FieldError> {
        match op {
            ArithOp::Add => Ok(self.add(a, b)),
            ArithOp::Sub => Ok(self.sub(a, b)),
            ArithOp::Mul => Ok(self.mul(a, b)),
            ArithOp::Div => self.div(a, b),
        }
    }

    /// `a^e` for a non-negative exponent.
    pub fn pow_u(&self, a: FieldElement, e: u64) -> FieldElement {
        if e == 0 {
            return FieldElement::ONE;
        }
        if a.is_zero() {
            return FieldElement::ZERO;
        }
        let inner = &*self.0;
        let qm1 = inner.q - 1;
        if let Some(t) = &inner.tables {
            let l = t.log[a.0 as usize] as u64;
            return FieldElement(t.exp[mul_mod(l, e % qm1, qm1) as usize] as u64);
        }
        slow_pow(inner, a, e % qm1)
    }

    /// `a^e` for any integer exponent; reduced modulo `q - 1` for nonzero `a`.
    pub fn pow(&self, a: FieldElement, e: i128) -> Result<FieldElement, FieldError> {
        if a.is_zero() {
            return match e {
                0 => Ok(FieldElement::ONE),
                e if e > 0 => Ok(FieldElement::ZERO),
                _ => Err(FieldError::ZeroToNegativePower),
            };
        }
        let qm1 = (self.0.q - 1) as i128;
        Ok(self.pow_u(a, e.rem_euclid(qm1) as u64))
    }

    /// `g^e` for the fixed primitive element.
    pub fn gpow(&self, e: i128) -> FieldElement {
        let qm1 = (self.0.q - 1) as i128;
        let e = e.rem_euclid(qm1) as u64;
        if let Some(t) = &self.0.tables {
            return FieldElement(t.exp[e as usize] as u64);
        }
        slow_pow(&self.0, self.0.generator, e)
    }

    /// Quadratic character `a^((q-1)/2)` as `1`, `-1` or `0`.
    pub fn quadratic_character(&self, a: FieldElement) -> i8 {
        if a.is_zero() {
            return 0;
        }
        let inner = &*self.0;
        if let Some(t) = &inner.tables {
            return if t.log[a.0 as usize] % 2 == 0 { 1 } else { -1 };
        }
        if slow_pow(inner, a, (inner.q - 1) / 2) == FieldElement::ONE {
            1
        } else {
            -1
        }
    }

    pub fn is_square(&self, a: FieldElement) -> bool {
        self.quadratic_character(a) == 1
    }

    /// Tonelli-Shanks square root, returning the root with the smaller encoding.
    pub fn sqrt(&self, a: FieldElement) -> Result<FieldElement, FieldError> {
        match self.quadratic_character(a) {
            0 => return Ok(FieldElement::ZERO),
            -1 => return Err(FieldError::NotASquare),
            _ => {}
        }
        let qm1 = self.0.q - 1;
        let s = qm1.trailing_zeros();
        let odd = qm1 >> s;
        // g is a non-residue, so c generates the 2-Sylow subgroup.
        let mut c = self.pow_u(self.generator(), odd);
        let mut x = self.pow_u(a, (odd + 1) / 2);
        let mut b = self.pow_u(a, odd);
        let mut m = s;
        while b != FieldElement::ONE {
            let mut i = 0;
            let mut b2 = b;
            while b2 != FieldElement::ONE {
                b2 = self.mul(b2, b2);
                i += 1;
            }
            let mut w = c;
            for _ in 0..(m - i - 1) {
                w = self.mul(w, w);
            }
            x = self.mul(x, w);
            c = self.mul(w, w);
            b = self.mul(b, c);
            m = i;
        }
        let other = self.neg(x);
        Ok(x.min(other))
    }

    /// Multiplicative order, computed from the factorization of `q - 1`.
    pub fn element_order(&self, a: FieldElement) -> Result<u64, FieldError> {
        if a.is_zero() {
            return Err(FieldError::ZeroElement);
        }
        let mut order = self.0.q - 1;
        for &(prime, exp) in &self.0.qm1_factors {
            for _ in 0..exp {
                if self.pow_u(a, order / prime) == FieldElement::ONE {
                    order /= prime;
                } else {
                    break;
                }
            }
        }
        Ok(order)
    }

    /// `g^((q-1)/m)`, a primitive `m`-th root of unity.
    pub fn root_of_unity(&self, m: u64) -> Result<FieldElement, FieldError> {
        let qm1 = self.0.q - 1;
        if m == 0 || qm1 % m != 0 {
            return Err(FieldError::NotDividing { m, order: qm1 });
        }
        Ok(self.gpow((qm1 / m) as i128))
    }

    fn subfield_degree(&self, sub_q: u64) -> Result<u32, FieldError> {
        let err = FieldError::NotASubfield { sub_q, q: self.0.q };
        let mut e = 0u32;
        let mut v = 1u64;
        while v < sub_q {
            v = v.checked_mul(self.0.p).ok_or_else(|| err.clone())?;
            e += 1;
        }
        if v != sub_q || e == 0 || self.0.d % e != 0 {
            return Err(err);
        }
        Ok(e)
    }

    /// Generator of the multiplicative group of the subfield of order `sub_q`.
    pub fn subfield_generator(&self, sub_q: u64) -> Result<FieldElement, FieldError> {
        self.subfield_degree(sub_q)?;
        Ok(self.gpow(((self.0.q - 1) / (sub_q - 1)) as i128))
    }

    /// `a in F_{sub_q}`, tested as `a^{sub_q} = a`.
    pub fn in_subfield(&self, a: FieldElement, sub_q: u64) -> Result<bool, FieldError> {
        self.subfield_degree(sub_q)?;
        Ok(self.pow_u(a, sub_q) == a)
    }

    /// Inner product `sum x_i y_i`. Accumulates per-coefficient and reduces once.
    pub fn dot(&self, xs: &[FieldElement], ys: &[FieldElement]) -> FieldElement {
        let inner = &*self.0;
        let Some(t) = &inner.tables else {
            return xs.iter().zip(ys).fold(FieldElement::ZERO, |acc, (&x, &y)| {
                self.add(acc, self.mul(x, y))
            });
        };
        let d = inner.d as usize;
        let qm1 = (inner.q - 1) as u32;
        let mut acc = [0u64; 64];
        let acc = &mut acc[..d];
        // Flush before the u64 lanes could overflow.
        let flush_every = (u64::MAX / inner.p).min(1 << 40);
        let mut pending = 0u64;
        for (&x, &y) in xs.iter().zip(ys) {
            if x.0 == 0 || y.0 == 0 {
                continue;
            }
            let mut s = t.log[x.0 as usize] + t.log[y.0 as usize];
            if s >= qm1 {
                s -= qm1;
            }
            let prod = t.exp[s as usize] as usize;
            for (slot, &dg) in acc.iter_mut().zip(&t.digits[prod * d..][..d]) {
                *slot += dg as u64;
            }
            pending += 1;
            if pending == flush_every {
                for slot in acc.iter_mut() {
                    *slot %= inner.p;
                }
                pending = 0;
            }
        }
        FieldElement(
            acc.iter()
                .zip(&inner.pow_p)
                .map(|(&c, &pp)| (c % inner.p) * pp)
                .sum(),
        )
    }

    /// Human-readable polynomial form, highest degree first (`x^2+1`, `2x+1`).
    pub fn format(&self, a: FieldElement) -> String {
        self.format_poly(&self.coeffs(a))
    }

    /// Render a constant-first coefficient list as a polynomial in `x`.
    pub fn format_poly(&self, coeffs: &[u64]) -> String {
        let mut terms = Vec::new();
        for (i, &c) in coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let coef = if c == 1 && i > 0 {
                String::new()
            } else {
                c.to_string()
            };
            terms.push(match i {
                0 => coef,
                1 => format!("{coef}x"),
                _ => format!("{coef}x^{i}"),
            });
        }
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join("+")
        }
    }
}
