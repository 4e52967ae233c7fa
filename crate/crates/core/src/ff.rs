//! Exact arithmetic in prime fields `F_p` and their extensions `F_{p^k}`, `k <= 3`.
//!
//! Elements are stored as compact codes `c_0 + c_1 p + c_2 p^2` where `c_i` are the
//! coefficients of the reduced representative in `F_p[x] / (modulus)`. Codes are
//! canonical, so structural equality is field equality and codes hash directly.
//!
//! Hot loops (matrices, polynomials) work on raw codes through [`Field`] methods;
//! [`FieldElement`] is the checked wrapper that carries its parent field.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Largest supported characteristic.
pub const MAX_PRIME: u32 = 251;
/// Largest supported extension degree.
pub const MAX_DEGREE: u32 = 3;
/// Fields up to this size get exp/log tables for multiplication.
const TABLE_LIMIT: u32 = 1 << 16;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum FfError {
    #[error("{0} is not a prime")]
    NotPrime(u32),
    #[error("prime {0} is out of range (2..={MAX_PRIME})")]
    PrimeOutOfRange(u32),
    #[error("extension degree {0} out of range (1..={MAX_DEGREE})")]
    DegreeOutOfRange(u32),
    #[error("zero has no multiplicative inverse")]
    InverseOfZero,
    #[error("operands belong to different fields ({0} vs {1})")]
    MixedFields(String, String),
    #[error("coefficient vector has {got} entries, field needs {want}")]
    BadCoefficients { got: usize, want: usize },
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

struct Inner {
    p: u32,
    k: u32,
    q: u32,
    /// Monic modulus, coefficients low to high, length k + 1.
    modulus: Vec<u32>,
    /// `exp[i] = g^i` for a primitive element g (only when q <= TABLE_LIMIT).
    exp: Vec<u32>,
    log: Vec<u32>,
}

/// A finite field `F_q`, `q = p^k`. Cheap to clone, immutable, `Send + Sync`.
#[derive(Clone)]
pub struct Field(Arc<Inner>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.k == other.0.k && self.0.modulus == other.0.modulus)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.k == 1 {
            write!(f, "F_{}", self.0.p)
        } else {
            write!(f, "F_{}^{}", self.0.p, self.0.k)
        }
    }
}

/// Builds `F_{p^k}` with the least irreducible monic modulus.
///
/// Candidate moduli `x^k + c_{k-1} x^{k-1} + ... + c_0` are scanned in increasing
/// order of the code `c_0 + c_1 p + ...`; for `k = 1` the modulus is `x`.
pub fn make_field(p: u32, k: u32) -> Result<Field, FfError> {
    if !is_prime(p) {
        return Err(FfError::NotPrime(p));
    }
    if p > MAX_PRIME {
        return Err(FfError::PrimeOutOfRange(p));
    }
    if !(1..=MAX_DEGREE).contains(&k) {
        return Err(FfError::DegreeOutOfRange(k));
    }
    let q = p.pow(k);
    let modulus = if k == 1 {
        vec![0, 1]
    } else {
        (0..p.pow(k))
            .map(|code| {
                let mut m = digits(code, p, k as usize);
                m.push(1);
                m
            })
            .find(|m| is_irreducible_small(m, p))
            .expect("an irreducible polynomial of every degree exists")
    };
    let mut inner = Inner { p, k, q, modulus, exp: Vec::new(), log: Vec::new() };
    if q <= TABLE_LIMIT && k > 1 {
        build_tables(&mut inner);
    }
    Ok(Field(Arc::new(inner)))
}

/// Prime field shortcut.
pub fn prime_field(p: u32) -> Result<Field, FfError> {
    make_field(p, 1)
}

fn digits(mut code: u32, p: u32, k: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(k);
    for _ in 0..k {
        out.push(code % p);
        code /= p;
    }
    out
}

/// Degree <= 3: irreducible iff it has no root in `F_p`.
fn is_irreducible_small(m: &[u32], p: u32) -> bool {
    debug_assert!(m.len() <= 4);
    (0..p).all(|x| {
        let mut acc = 0u64;
        for &c in m.iter().rev() {
            acc = (acc * x as u64 + c as u64) % p as u64;
        }
        acc != 0
    })
}

fn build_tables(inner: &mut Inner) {
    let q = inner.q;
    let slow = |a: u32, b: u32| poly_mul_mod(a, b, inner.p, inner.k, &inner.modulus);
    for g in 2..q {
        let mut exp = Vec::with_capacity((q - 1) as usize);
        let mut x = 1u32;
        let mut primitive = true;
        for i in 0..(q - 1) {
            if i > 0 && x == 1 {
                primitive = false;
                break;
            }
            exp.push(x);
            x = slow(x, g);
        }
        if primitive && x == 1 {
            let mut log = vec![0u32; q as usize];
            for (i, &e) in exp.iter().enumerate() {
                log[e as usize] = i as u32;
            }
            inner.exp = exp;
            inner.log = log;
            return;
        }
    }
    unreachable!("multiplicative group of a finite field is cyclic");
}

fn poly_mul_mod(a: u32, b: u32, p: u32, k: u32, modulus: &[u32]) -> u32 {
    let k = k as usize;
    let a = digits(a, p, k);
    let b = digits(b, p, k);
    let mut prod = vec![0u64; 2 * k - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    for deg in (k..prod.len()).rev() {
        let c = prod[deg];
        if c == 0 {
            continue;
        }
        prod[deg] = 0;
        for (i, &m) in modulus[..k].iter().enumerate() {
            let idx = deg - k + i;
            prod[idx] = (prod[idx] + (p as u64 - c) * m as u64) % p as u64;
        }
    }
    prod[..k].iter().rev().fold(0u32, |acc, &c| acc * p + c as u32)
}

impl Field {
    pub fn characteristic(&self) -> u32 {
        self.0.p
    }

    pub fn degree(&self) -> u32 {
        self.0.k
    }

    /// Number of elements `q = p^k`.
    pub fn order(&self) -> u32 {
        self.0.q
    }

    /// Monic modulus, low-degree coefficient first.
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    #[inline]
    pub fn zero(&self) -> u32 {
        0
    }

    #[inline]
    pub fn one(&self) -> u32 {
        1
    }

    /// All element codes `0..q`.
    pub fn elements(&self) -> std::ops::Range<u32> {
        0..self.0.q
    }

    /// Image of an integer under `Z -> F_p -> F_q`.
    pub fn from_int(&self, n: i64) -> u32 {
        n.rem_euclid(self.0.p as i64) as u32
    }

    /// Code of the element `x` (the class of the polynomial variable).
    pub fn generator_x(&self) -> u32 {
        if self.0.k == 1 {
            // x mod x is 0
            0
        } else {
            self.0.p
        }
    }

    pub fn coeffs(&self, a: u32) -> Vec<u32> {
        digits(a, self.0.p, self.0.k as usize)
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<u32, FfError> {
        if coeffs.len() != self.0.k as usize {
            return Err(FfError::BadCoefficients { got: coeffs.len(), want: self.0.k as usize });
        }
        Ok(coeffs.iter().rev().fold(0, |acc, &c| acc * self.0.p + c % self.0.p))
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let p = self.0.p;
        if self.0.k == 1 {
            let s = a + b;
            return if s >= p { s - p } else { s };
        }
        let (mut a, mut b) = (a, b);
        let (mut out, mut scale) = (0, 1);
        for _ in 0..self.0.k {
            let s = (a % p + b % p) % p;
            out += s * scale;
            scale *= p;
            a /= p;
            b /= p;
        }
        out
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        let p = self.0.p;
        if self.0.k == 1 {
            return if a == 0 { 0 } else { p - a };
        }
        let mut a = a;
        let (mut out, mut scale) = (0, 1);
        for _ in 0..self.0.k {
            let c = a % p;
            out += ((p - c) % p) * scale;
            scale *= p;
            a /= p;
        }
        out
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let inner = &*self.0;
        if inner.k == 1 {
            return ((a as u64 * b as u64) % inner.p as u64) as u32;
        }
        if !inner.exp.is_empty() {
            let s = inner.log[a as usize] + inner.log[b as usize];
            let n = inner.q - 1;
            return inner.exp[(if s >= n { s - n } else { s }) as usize];
        }
        poly_mul_mod(a, b, inner.p, inner.k, &inner.modulus)
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u32) -> Result<u32, FfError> {
        if a == 0 {
            return Err(FfError::InverseOfZero);
        }
        let inner = &*self.0;
        if !inner.exp.is_empty() {
            let n = inner.q - 1;
            return Ok(inner.exp[((n - inner.log[a as usize]) % n) as usize]);
        }
        Ok(self.pow(a, inner.q as u64 - 2))
    }

    pub fn div(&self, a: u32, b: u32) -> Result<u32, FfError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a -> a^p`.
    pub fn frobenius(&self, a: u32) -> u32 {
        if self.0.k == 1 {
            a
        } else {
            self.pow(a, self.0.p as u64)
        }
    }

    /// A generator of the multiplicative group.
    pub fn primitive_element(&self) -> u32 {
        let inner = &*self.0;
        if !inner.exp.is_empty() {
            return inner.exp[1 % inner.exp.len()];
        }
        let n = (inner.q - 1) as u64;
        let factors: Vec<u64> = (2..=n).filter(|d| n.is_multiple_of(*d) && is_prime(*d as u32)).collect();
        (1..inner.q).find(|&g| factors.iter().all(|f| self.pow(g, n / f) != 1)).unwrap_or(1)
    }

    /// True when `a` lies in the prime subfield.
    pub fn is_prime_subfield(&self, a: u32) -> bool {
        a < self.0.p
    }

    pub fn element(&self, code: u32) -> FieldElement {
        FieldElement { field: self.clone(), code: code % self.0.q }
    }

    pub fn format(&self, a: u32) -> String {
        if self.0.k == 1 {
            return a.to_string();
        }
        let c = self.coeffs(a);
        let mut parts = Vec::new();
        for (i, &ci) in c.iter().enumerate().rev() {
            if ci == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "a".to_string(),
                _ => format!("a^{i}"),
            };
            parts.push(match (ci, i) {
                (_, 0) => ci.to_string(),
                (1, _) => mono,
                _ => format!("{ci}*{mono}"),
            });
        }
        if parts.is_empty() {
            "0".into()
        } else {
            format!("({})", parts.join("+"))
        }
    }
}

/// A field element together with its parent field.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    field: Field,
    code: u32,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {}", self.field.format(self.code), self.field)
    }
}

impl FieldElement {
    pub fn from_coeffs(field: &Field, coeffs: &[u32]) -> Result<Self, FfError> {
        Ok(FieldElement { field: field.clone(), code: field.from_coeffs(coeffs)? })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn code(&self) -> u32 {
        self.code
    }

    pub fn coeffs(&self) -> Vec<u32> {
        self.field.coeffs(self.code)
    }

    pub fn is_zero(&self) -> bool {
        self.code == 0
    }

    fn same_field(&self, other: &Self) -> Result<(), FfError> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(FfError::MixedFields(self.field.to_string(), other.field.to_string()))
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, FfError> {
        self.same_field(other)?;
        Ok(self.field.element(self.field.add(self.code, other.code)))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, FfError> {
        self.same_field(other)?;
        Ok(self.field.element(self.field.sub(self.code, other.code)))
    }

    pub fn mul(&self, other: &Self) -> Result<Self, FfError> {
        self.same_field(other)?;
        Ok(self.field.element(self.field.mul(self.code, other.code)))
    }

    pub fn neg(&self) -> Self {
        self.field.element(self.field.neg(self.code))
    }

    pub fn inv(&self) -> Result<Self, FfError> {
        Ok(self.field.element(self.field.inv(self.code)?))
    }

    pub fn pow(&self, e: u64) -> Self {
        self.field.element(self.field.pow(self.code, e))
    }

    pub fn frobenius(&self) -> Self {
        self.field.element(self.field.frobenius(self.code))
    }
}
