//! Exact arithmetic in GF(p^n) built on fixed Conway polynomials.
//!
//! A [`Field`] is shared behind an [`Arc`]; elements are stored as packed
//! integers `Σ cᵢ pⁱ` over the polynomial basis `1, x, x², …`, so the packed
//! value of an element and its little-endian coefficient vector are the same
//! data. Every `(p, n)` pair maps to exactly one modulus, so two fields with
//! equal characteristic and degree are interchangeable.

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use rand::Rng;

use crate::error::{Error, Result};

pub const SUPPORTED_PRIMES: [u32; 6] = [2, 3, 5, 7, 11, 13];
pub const MAX_DEGREE: u32 = 8;

/// Fields up to this order get exp/log tables.
const TABLE_LIMIT: u32 = 1 << 16;
/// Fields up to this order also get a full addition table.
const ADD_TABLE_LIMIT: u32 = 256;

/// Conway polynomials, coefficients low degree first (monic).
const CONWAY: &[(u32, u32, &[u32])] = &[
    (2, 1, &[1, 1]),
    (2, 2, &[1, 1, 1]),
    (2, 3, &[1, 1, 0, 1]),
    (2, 4, &[1, 1, 0, 0, 1]),
    (2, 5, &[1, 0, 1, 0, 0, 1]),
    (2, 6, &[1, 1, 0, 1, 1, 0, 1]),
    (2, 7, &[1, 1, 0, 0, 0, 0, 0, 1]),
    (2, 8, &[1, 0, 1, 1, 1, 0, 0, 0, 1]),
    (3, 1, &[1, 1]),
    (3, 2, &[2, 2, 1]),
    (3, 3, &[1, 2, 0, 1]),
    (3, 4, &[2, 0, 0, 2, 1]),
    (3, 5, &[1, 2, 0, 0, 0, 1]),
    (3, 6, &[2, 2, 1, 0, 2, 0, 1]),
    (3, 7, &[1, 0, 2, 0, 0, 0, 0, 1]),
    (3, 8, &[2, 2, 2, 0, 1, 2, 0, 0, 1]),
    (5, 1, &[3, 1]),
    (5, 2, &[2, 4, 1]),
    (5, 3, &[3, 3, 0, 1]),
    (5, 4, &[2, 4, 4, 0, 1]),
    (5, 5, &[3, 4, 0, 0, 0, 1]),
    (5, 6, &[2, 0, 1, 4, 1, 0, 1]),
    (5, 7, &[3, 3, 0, 0, 0, 0, 0, 1]),
    (5, 8, &[2, 4, 3, 0, 1, 0, 0, 0, 1]),
    (7, 1, &[4, 1]),
    (7, 2, &[3, 6, 1]),
    (7, 3, &[4, 0, 6, 1]),
    (7, 4, &[3, 4, 5, 0, 1]),
    (7, 5, &[4, 1, 0, 0, 0, 1]),
    (7, 6, &[3, 6, 4, 5, 1, 0, 1]),
    (7, 7, &[4, 6, 0, 0, 0, 0, 0, 1]),
    (7, 8, &[3, 2, 6, 4, 0, 0, 0, 0, 1]),
    (11, 1, &[9, 1]),
    (11, 2, &[2, 7, 1]),
    (11, 3, &[9, 2, 0, 1]),
    (11, 4, &[2, 10, 8, 0, 1]),
    (11, 5, &[9, 0, 10, 0, 0, 1]),
    (11, 6, &[2, 7, 6, 4, 3, 0, 1]),
    (11, 7, &[9, 4, 0, 0, 0, 0, 0, 1]),
    (11, 8, &[2, 7, 1, 7, 7, 0, 0, 0, 1]),
    (13, 1, &[11, 1]),
    (13, 2, &[2, 12, 1]),
    (13, 3, &[11, 2, 0, 1]),
    (13, 4, &[2, 12, 3, 0, 1]),
    (13, 5, &[11, 4, 0, 0, 0, 1]),
    (13, 6, &[2, 11, 11, 10, 0, 0, 1]),
    (13, 7, &[11, 3, 0, 0, 0, 0, 0, 1]),
    (13, 8, &[2, 3, 2, 12, 8, 0, 0, 0, 1]),
];

/// The Conway polynomial for `(p, n)`, low degree first.
pub fn conway_polynomial(p: u32, n: u32) -> Option<&'static [u32]> {
    CONWAY
        .iter()
        .find(|(cp, cn, _)| *cp == p && *cn == n)
        .map(|(_, _, c)| *c)
}

pub type FieldRef = Arc<Field>;

pub struct Field {
    p: u32,
    n: u32,
    q: u32,
    modulus: Vec<u32>,
    primitive: u32,
    /// `exp[i] = g^i` for `0 <= i < 2(q-1)`.
    exp: Vec<u32>,
    log: Vec<u32>,
    add_table: Vec<u8>,
    neg_table: Vec<u8>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.p, self.n)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.n == 1 {
            write!(f, "GF({})", self.p)
        } else {
            write!(f, "GF({}^{})", self.p, self.n)
        }
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.n == other.n
    }
}

impl Eq for Field {}

fn field_cache() -> &'static Mutex<HashMap<(u32, u32), FieldRef>> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, u32), FieldRef>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn least_primitive_root(p: u32) -> u32 {
    let order = p - 1;
    let factors = prime_factors(order as u64);
    (2..p)
        .find(|&g| {
            factors
                .iter()
                .all(|&f| pow_mod(g as u64, order as u64 / f, p as u64) != 1)
        })
        .unwrap_or(1)
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

pub(crate) fn prime_factors(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= m {
        if m.is_multiple_of(d) {
            out.push(d);
            while m.is_multiple_of(d) {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

impl Field {
    /// Returns the shared field GF(p^n).
    ///
    /// For `n = 1` the stored modulus is `x`, so the residues are the constants
    /// `0..p`; for `n > 1` it is the Conway polynomial.
    pub fn new(p: u32, n: u32) -> Result<FieldRef> {
        if !SUPPORTED_PRIMES.contains(&p) || n == 0 || n > MAX_DEGREE {
            return Err(Error::UnsupportedField { p, n });
        }
        let mut cache = field_cache().lock().expect("field cache poisoned");
        if let Some(f) = cache.get(&(p, n)) {
            return Ok(f.clone());
        }
        let field = Arc::new(Self::build(p, n));
        cache.insert((p, n), field.clone());
        Ok(field)
    }

    fn build(p: u32, n: u32) -> Field {
        let q = p.pow(n);
        let modulus = if n == 1 {
            vec![0, 1]
        } else {
            conway_polynomial(p, n).expect("table covers every supported pair").to_vec()
        };
        let primitive = if n == 1 { least_primitive_root(p) } else { p };
        let mut field = Field {
            p,
            n,
            q,
            modulus,
            primitive,
            exp: Vec::new(),
            log: Vec::new(),
            add_table: Vec::new(),
            neg_table: Vec::new(),
        };
        if q <= TABLE_LIMIT {
            let m = (q - 1) as usize;
            let mut exp = vec![0u32; 2 * m];
            let mut log = vec![0u32; q as usize];
            let mut cur = 1u32;
            for i in 0..m {
                exp[i] = cur;
                log[cur as usize] = i as u32;
                cur = field.poly_mul(cur, primitive);
            }
            for i in m..2 * m {
                exp[i] = exp[i - m];
            }
            field.exp = exp;
            field.log = log;
        }
        if q <= ADD_TABLE_LIMIT {
            let qs = q as usize;
            let mut add = vec![0u8; qs * qs];
            let mut neg = vec![0u8; qs];
            for a in 0..q {
                neg[a as usize] = field.digit_neg(a) as u8;
                for b in 0..q {
                    add[a as usize * qs + b as usize] = field.digit_add(a, b) as u8;
                }
            }
            field.add_table = add;
            field.neg_table = neg;
        }
        field
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Number of elements.
    pub fn order(&self) -> u32 {
        self.q
    }

    /// Monic modulus, coefficients low degree first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// Packed value of the fixed primitive element (a root of the Conway
    /// polynomial, or the least primitive root mod p when `n = 1`).
    pub fn primitive_raw(&self) -> u32 {
        self.primitive
    }

    pub fn has_tables(&self) -> bool {
        !self.exp.is_empty()
    }

    // ---- raw arithmetic on packed values -------------------------------

    fn digits(&self, mut a: u32) -> [u32; 8] {
        let mut d = [0u32; 8];
        for slot in d.iter_mut().take(self.n as usize) {
            *slot = a % self.p;
            a /= self.p;
        }
        d
    }

    fn pack(&self, d: &[u32]) -> u32 {
        d.iter()
            .take(self.n as usize)
            .rev()
            .fold(0, |acc, &c| acc * self.p + c)
    }

    fn digit_add(&self, a: u32, b: u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        if self.n == 1 {
            return (a + b) % self.p;
        }
        let (da, db) = (self.digits(a), self.digits(b));
        let mut r = [0u32; 8];
        for i in 0..self.n as usize {
            r[i] = (da[i] + db[i]) % self.p;
        }
        self.pack(&r)
    }

    fn digit_neg(&self, a: u32) -> u32 {
        if self.p == 2 {
            return a;
        }
        let d = self.digits(a);
        let mut r = [0u32; 8];
        for i in 0..self.n as usize {
            r[i] = (self.p - d[i]) % self.p;
        }
        self.pack(&r)
    }

    fn poly_mul(&self, a: u32, b: u32) -> u32 {
        if self.n == 1 {
            return ((a as u64 * b as u64) % self.p as u64) as u32;
        }
        let n = self.n as usize;
        let p = self.p as u64;
        let (da, db) = (self.digits(a), self.digits(b));
        let mut prod = [0u64; 16];
        for i in 0..n {
            if da[i] == 0 {
                continue;
            }
            for j in 0..n {
                prod[i + j] += da[i] as u64 * db[j] as u64;
            }
        }
        for c in prod.iter_mut() {
            *c %= p;
        }
        for i in (n..2 * n - 1).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            prod[i] = 0;
            for j in 0..n {
                let sub = c * self.modulus[j] as u64 % p;
                prod[i - n + j] = (prod[i - n + j] + p - sub) % p;
            }
        }
        let r: Vec<u32> = prod[..n].iter().map(|&c| c as u32).collect();
        self.pack(&r)
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        if !self.add_table.is_empty() {
            return self.add_table[a as usize * self.q as usize + b as usize] as u32;
        }
        self.digit_add(a, b)
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if !self.neg_table.is_empty() {
            return self.neg_table[a as usize] as u32;
        }
        self.digit_neg(a)
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
        if !self.exp.is_empty() {
            return self.exp[(self.log[a as usize] + self.log[b as usize]) as usize];
        }
        self.poly_mul(a, b)
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        if !self.exp.is_empty() {
            let m = (self.q - 1) as u64;
            let k = (self.log[a as usize] as u64 * (e % m)) % m;
            return self.exp[k as usize];
        }
        let (mut base, mut e, mut r) = (a, e, 1);
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        r
    }

    /// Signed integer exponent; negative powers need `a != 0`.
    pub fn pow_i(&self, a: u32, e: i64) -> Result<u32> {
        if e >= 0 {
            Ok(self.pow(a, e as u64))
        } else {
            Ok(self.pow(self.inv(a)?, e.unsigned_abs()))
        }
    }

    pub fn inv(&self, a: u32) -> Result<u32> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        if !self.exp.is_empty() {
            let m = self.q - 1;
            return Ok(self.exp[((m - self.log[a as usize]) % m) as usize]);
        }
        Ok(self.pow(a, self.q as u64 - 2))
    }

    /// `a^(p^r)`.
    pub fn frobenius(&self, a: u32, r: u32) -> u32 {
        let r = r % self.n;
        let mut x = a;
        for _ in 0..r {
            x = self.pow(x, self.p as u64);
        }
        x
    }

    /// Discrete logarithm to the primitive element (table fields only).
    pub fn log(&self, a: u32) -> Option<u32> {
        if a == 0 || self.exp.is_empty() {
            None
        } else {
            Some(self.log[a as usize])
        }
    }

    /// `g^k` for the fixed primitive element `g`.
    pub fn exp(&self, k: u64) -> u32 {
        self.pow(self.primitive, k % (self.q as u64 - 1))
    }

    /// A cube root of `a`, if one exists in this field.
    pub fn cube_root(&self, a: u32) -> Result<u32> {
        if a == 0 {
            return Ok(0);
        }
        let m = self.q as u64 - 1;
        if !m.is_multiple_of(3) {
            // 3 is invertible mod q-1, so cubing is a bijection
            let d = inv_mod(3, m).expect("coprime");
            return Ok(self.pow(a, d));
        }
        if self.pow(a, m / 3) != 1 {
            return Err(Error::NoCubeRoot);
        }
        if let Some(k) = self.log(a) {
            // k is divisible by 3 exactly when a is a cube
            return Ok(self.exp(k as u64 / 3));
        }
        Ok(self.cube_root_sylow(a))
    }

    /// Adleman–Manders–Miller style cube root for fields without tables.
    fn cube_root_sylow(&self, a: u32) -> u32 {
        let m = self.q as u64 - 1;
        let mut s = 0;
        let mut t = m;
        while t.is_multiple_of(3) {
            t /= 3;
            s += 1;
        }
        let u = match inv_mod(3, t).unwrap_or(0) {
            0 => t,
            u => u,
        };
        let x = self.pow(a, u);
        // x^3 = a * (a^t)^j where 3u = 1 + j t
        let j = (3 * u - 1) / t;
        let b = self.pow(self.pow(a, t), j);
        let c = self.pow(self.primitive, t);
        let target = self.inv(b).expect("nonzero");
        let e = self.sylow_log(c, target, s);
        let y = self.pow(c, e / 3);
        self.mul(x, y)
    }

    /// log of `beta` to base `c`, where `c` has order `3^s`.
    fn sylow_log(&self, c: u32, beta: u32, s: u32) -> u64 {
        let order_three = self.pow(c, 3u64.pow(s - 1));
        let c_inv = self.inv(c).expect("nonzero");
        let mut e = 0u64;
        for i in 0..s {
            let cur = self.mul(beta, self.pow(c_inv, e));
            let probe = self.pow(cur, 3u64.pow(s - 1 - i));
            let digit = if probe == 1 {
                0
            } else if probe == order_three {
                1
            } else {
                2
            };
            e += digit * 3u64.pow(i);
        }
        e
    }

    /// Packed value of an integer constant.
    pub fn from_int(&self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }

    pub fn from_coeffs_raw(&self, coeffs: &[u32]) -> Result<u32> {
        if coeffs.len() > self.n as usize || coeffs.iter().any(|&c| c >= self.p) {
            return Err(Error::Parse(format!(
                "coefficient vector {coeffs:?} is not an element of {self}"
            )));
        }
        let mut padded = [0u32; 8];
        padded[..coeffs.len()].copy_from_slice(coeffs);
        Ok(self.pack(&padded))
    }

    pub fn coeffs_raw(&self, a: u32) -> Vec<u32> {
        self.digits(a)[..self.n as usize].to_vec()
    }

    pub fn random_raw<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        rng.gen_range(0..self.q)
    }

    pub fn random_nonzero_raw<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        rng.gen_range(1..self.q)
    }

    /// An additive basis `1, g, …, g^(n-1)` over the prime field.
    pub fn prime_basis_raw(&self) -> Vec<u32> {
        if self.n == 1 {
            vec![1]
        } else {
            (0..self.n).map(|i| self.p.pow(i)).collect()
        }
    }
}

fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

/// Shorthand for [`Field::new`].
pub fn field_make(p: u32, n: u32) -> Result<FieldRef> {
    Field::new(p, n)
}

/// Image of `a ∈ sub` under the Conway-compatible embedding `sub → field`.
pub fn embed(sub: &FieldRef, field: &FieldRef, a: u32) -> Result<u32> {
    if sub.p != field.p || !field.n.is_multiple_of(sub.n) {
        return Err(Error::FieldMismatch);
    }
    if sub.n == 1 {
        return Ok(a);
    }
    let gamma = field.pow(
        field.primitive,
        (field.q as u64 - 1) / (sub.q as u64 - 1),
    );
    let coeffs = sub.coeffs_raw(a);
    Ok(coeffs
        .iter()
        .rev()
        .fold(0, |acc, &c| field.add(field.mul(acc, gamma), c)))
}

/// An element of GF(p^n) together with its field.
#[derive(Clone)]
pub struct FieldElement {
    field: FieldRef,
    value: u32,
}

impl FieldElement {
    pub fn from_raw(field: &FieldRef, value: u32) -> Self {
        debug_assert!(value < field.q);
        FieldElement {
            field: field.clone(),
            value,
        }
    }

    pub fn zero(field: &FieldRef) -> Self {
        Self::from_raw(field, 0)
    }

    pub fn one(field: &FieldRef) -> Self {
        Self::from_raw(field, 1)
    }

    pub fn from_int(field: &FieldRef, v: i64) -> Self {
        Self::from_raw(field, field.from_int(v))
    }

    pub fn primitive(field: &FieldRef) -> Self {
        Self::from_raw(field, field.primitive)
    }

    pub fn from_coeffs(field: &FieldRef, coeffs: &[u32]) -> Result<Self> {
        Ok(Self::from_raw(field, field.from_coeffs_raw(coeffs)?))
    }

    pub fn random<R: Rng + ?Sized>(field: &FieldRef, rng: &mut R) -> Self {
        Self::from_raw(field, field.random_raw(rng))
    }

    /// Every element of the field, zero first.
    pub fn all(field: &FieldRef) -> impl Iterator<Item = FieldElement> + '_ {
        (0..field.q).map(move |v| Self::from_raw(field, v))
    }

    pub fn field(&self) -> &FieldRef {
        &self.field
    }

    pub fn raw(&self) -> u32 {
        self.value
    }

    /// Little-endian coefficients in the polynomial basis.
    pub fn coeffs(&self) -> Vec<u32> {
        self.field.coeffs_raw(self.value)
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn is_one(&self) -> bool {
        self.value == 1
    }

    fn check(&self, other: &Self) -> Result<()> {
        if *self.field == *other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.with(self.field.add(self.value, other.value)))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.with(self.field.sub(self.value, other.value)))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.with(self.field.mul(self.value, other.value)))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let inv = self.field.inv(other.value)?;
        Ok(self.with(self.field.mul(self.value, inv)))
    }

    pub fn inv(&self) -> Result<Self> {
        Ok(self.with(self.field.inv(self.value)?))
    }

    pub fn pow(&self, e: u64) -> Self {
        self.with(self.field.pow(self.value, e))
    }

    pub fn pow_i(&self, e: i64) -> Result<Self> {
        Ok(self.with(self.field.pow_i(self.value, e)?))
    }

    /// `a^(p^r)`.
    pub fn frobenius(&self, r: u32) -> Self {
        self.with(self.field.frobenius(self.value, r))
    }

    pub fn cube_root(&self) -> Result<Self> {
        Ok(self.with(self.field.cube_root(self.value)?))
    }

    /// Multiplicative order (`None` for zero).
    pub fn multiplicative_order(&self) -> Option<u64> {
        if self.value == 0 {
            return None;
        }
        let m = self.field.q as u64 - 1;
        let mut order = m;
        for f in prime_factors(m) {
            while order.is_multiple_of(f) && self.field.pow(self.value, order / f) == 1 {
                order /= f;
            }
        }
        Some(order)
    }

    /// Image in a larger field of the same characteristic.
    pub fn embed_into(&self, field: &FieldRef) -> Result<Self> {
        Ok(Self::from_raw(field, embed(&self.field, field, self.value)?))
    }

    fn with(&self, value: u32) -> Self {
        FieldElement {
            field: self.field.clone(),
            value,
        }
    }
}

impl FieldElement {
    /// Parses the display form: an integer, or `+`-separated terms such as
    /// `x^2+2x+1` in the polynomial basis.
    pub fn parse(field: &FieldRef, s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::Parse(format!("field element {s:?}"));
        if let Ok(v) = s.parse::<i64>() {
            return Ok(FieldElement::from_int(field, v));
        }
        let mut coeffs = vec![0u32; field.n() as usize];
        for term in s.split('+') {
            let (c, e) = match term.split_once('x') {
                None => (term.parse::<i64>().map_err(|_| bad())?, 0usize),
                Some((c, rest)) => {
                    let c = if c.is_empty() { 1 } else { c.parse::<i64>().map_err(|_| bad())? };
                    let e = match rest.strip_prefix('^') {
                        Some(e) => e.parse::<usize>().map_err(|_| bad())?,
                        None if rest.is_empty() => 1,
                        None => return Err(bad()),
                    };
                    (c, e)
                }
            };
            let slot = coeffs.get_mut(e).ok_or_else(bad)?;
            *slot = field.add(*slot, field.from_int(c));
        }
        FieldElement::from_coeffs(field, &coeffs)
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        *self.field == *other.field && self.value == other.value
    }
}

impl Eq for FieldElement {}

impl Hash for FieldElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        (self.field.p, self.field.n, self.value).hash(state);
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}@{}", self.coeffs(), self.field)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.n == 1 {
            return write!(f, "{}", self.value);
        }
        let terms: Vec<String> = self
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => "x".into(),
                (1, c) => format!("{c}x"),
                (i, 1) => format!("x^{i}"),
                (i, c) => format!("{c}x^{i}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join("+"))
        }
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&FieldElement> for &FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                self.$checked(rhs).expect("arithmetic across different fields")
            }
        }
        impl $trait<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                (&self).$method(rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);
binop!(Div, div, checked_div);

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        self.with(self.field.neg(self.value))
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

#[cfg(test)]
mod tests {
    #[test]
    fn parse_round_trips_display() {
        for (p, n) in [(2, 1), (5, 1), (2, 3), (3, 2), (13, 2)] {
            let f = Field::new(p, n).unwrap();
            for a in FieldElement::all(&f) {
                assert_eq!(FieldElement::parse(&f, &a.to_string()).unwrap(), a);
            }
        }
        let f = Field::new(7, 1).unwrap();
        assert_eq!(FieldElement::parse(&f, "-1").unwrap(), FieldElement::from_int(&f, 6));
        assert!(FieldElement::parse(&f, "x").is_err());
        assert!(FieldElement::parse(&f, "y").is_err());
    }

    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn gf(p: u32, n: u32) -> FieldRef {
        Field::new(p, n).unwrap()
    }

    #[test]
    fn small_moduli() {
        assert_eq!(gf(2, 2).modulus(), &[1, 1, 1]);
        assert_eq!(gf(3, 2).modulus(), &[2, 2, 1]);
        assert_eq!(gf(2, 1).modulus(), &[0, 1]);
        assert_eq!(gf(2, 1).order(), 2);
    }

    #[test]
    fn unsupported_fields_are_rejected() {
        assert!(matches!(Field::new(17, 1), Err(Error::UnsupportedField { .. })));
        assert!(matches!(Field::new(2, 9), Err(Error::UnsupportedField { .. })));
        assert!(matches!(Field::new(2, 0), Err(Error::UnsupportedField { .. })));
    }

    #[test]
    fn same_pair_same_field() {
        let a = gf(5, 3);
        let b = gf(5, 3);
        assert!(Arc::ptr_eq(&a, &b));
    }

    #[test]
    fn gf4_generator_inverse_is_square() {
        let f = gf(2, 2);
        let g = FieldElement::primitive(&f);
        assert_eq!(g.coeffs(), vec![0, 1]);
        assert_eq!(g.inv().unwrap(), g.pow(2));
        assert_eq!(g.pow(3), FieldElement::one(&f));
    }

    #[test]
    fn gf8_cube_roots_are_total() {
        let f = gf(2, 3);
        for a in FieldElement::all(&f) {
            let c = a.cube_root().unwrap();
            assert_eq!(c.pow(3), a);
        }
    }

    #[test]
    fn gf4_only_one_is_a_nonzero_cube() {
        let f = gf(2, 2);
        let cubes: Vec<_> = FieldElement::all(&f)
            .skip(1)
            .filter(|a| a.cube_root().is_ok())
            .collect();
        assert_eq!(cubes, vec![FieldElement::one(&f)]);
        let g = FieldElement::primitive(&f);
        assert!(matches!(g.cube_root(), Err(Error::NoCubeRoot)));
    }

    #[test]
    fn gf9_frobenius_is_cubing_of_order_two() {
        let f = gf(3, 2);
        let mut moved = false;
        for a in FieldElement::all(&f) {
            assert_eq!(a.frobenius(1), a.pow(3));
            assert_eq!(a.frobenius(1).frobenius(1), a);
            moved |= a.frobenius(1) != a;
        }
        assert!(moved);
    }

    #[test]
    fn zero_has_no_inverse() {
        let f = gf(7, 1);
        assert!(matches!(FieldElement::zero(&f).inv(), Err(Error::DivisionByZero)));
    }

    #[test]
    fn mixed_fields_are_an_error() {
        let a = FieldElement::one(&gf(2, 2));
        let b = FieldElement::one(&gf(2, 3));
        assert!(matches!(a.checked_add(&b), Err(Error::FieldMismatch)));
        assert!(matches!(a.checked_mul(&b), Err(Error::FieldMismatch)));
    }

    #[test]
    fn coefficient_serialization() {
        let f = gf(2, 2);
        let g = FieldElement::from_coeffs(&f, &[0, 1]).unwrap();
        assert_eq!(g, FieldElement::primitive(&f));
        assert!(FieldElement::from_coeffs(&f, &[0, 2]).is_err());
        assert!(FieldElement::from_coeffs(&f, &[0, 0, 1]).is_err());
    }

    #[test]
    fn primitive_element_has_full_order() {
        for &p in &SUPPORTED_PRIMES {
            for n in 1..=MAX_DEGREE {
                let f = gf(p, n);
                let g = FieldElement::primitive(&f);
                assert_eq!(
                    g.multiplicative_order(),
                    Some(f.order() as u64 - 1),
                    "GF({p}^{n})"
                );
            }
        }
    }

    #[test]
    fn frobenius_of_full_degree_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for &p in &SUPPORTED_PRIMES {
            for n in 1..=MAX_DEGREE {
                let f = gf(p, n);
                for _ in 0..5 {
                    let a = FieldElement::random(&f, &mut rng);
                    assert_eq!(a.frobenius(n), a);
                    assert_eq!(
                        a.frobenius(1),
                        a.pow(p as u64),
                        "frobenius matches p-th power"
                    );
                }
            }
        }
    }

    #[test]
    fn cube_roots_in_large_fields() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        // GF(13^8) has no tables and 3 | q - 1
        let f = gf(13, 8);
        assert!(!f.has_tables());
        for _ in 0..10 {
            let a = FieldElement::random(&f, &mut rng);
            let c = a.pow(3);
            let r = c.cube_root().unwrap();
            assert_eq!(r.pow(3), c);
        }
        let g = FieldElement::primitive(&f);
        assert!(g.cube_root().is_err());
    }

    #[test]
    fn subfield_embedding_is_a_ring_map() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (p, m, n) in [(2, 2, 4), (2, 2, 6), (2, 3, 6), (3, 2, 4), (2, 4, 8), (5, 1, 3)] {
            let sub = gf(p, m);
            let big = gf(p, n);
            for _ in 0..20 {
                let a = FieldElement::random(&sub, &mut rng);
                let b = FieldElement::random(&sub, &mut rng);
                let ea = a.embed_into(&big).unwrap();
                let eb = b.embed_into(&big).unwrap();
                assert_eq!((&a + &b).embed_into(&big).unwrap(), &ea + &eb);
                assert_eq!((&a * &b).embed_into(&big).unwrap(), &ea * &eb);
            }
        }
        assert!(FieldElement::one(&gf(2, 3)).embed_into(&gf(2, 4)).is_err());
    }

    /// Polynomial helpers used only to certify the Conway table.
    mod poly {
        pub fn trim(mut a: Vec<u64>) -> Vec<u64> {
            while a.len() > 1 && *a.last().unwrap() == 0 {
                a.pop();
            }
            a
        }

        pub fn mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
            let mut prod = vec![0u64; a.len() + b.len()];
            for (i, &x) in a.iter().enumerate() {
                for (j, &y) in b.iter().enumerate() {
                    prod[i + j] = (prod[i + j] + x * y) % p;
                }
            }
            rem(&prod, m, p)
        }

        pub fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
            let mut r = trim(a.to_vec());
            let dm = m.len() - 1;
            let lead_inv = super::super::inv_mod(m[dm], p).unwrap();
            while r.len() > dm && !(r.len() == 1 && r[0] == 0) {
                let dr = r.len() - 1;
                let c = r[dr] * lead_inv % p;
                for j in 0..=dm {
                    let idx = dr - dm + j;
                    r[idx] = (r[idx] + p * p - c * m[j] % p) % p;
                }
                r = trim(r);
                if r.len() - 1 < dm {
                    break;
                }
            }
            r
        }

        pub fn powmod(base: &[u64], mut e: u128, m: &[u64], p: u64) -> Vec<u64> {
            let mut result = vec![1u64];
            let mut b = rem(base, m, p);
            while e > 0 {
                if e & 1 == 1 {
                    result = mulmod(&result, &b, m, p);
                }
                b = mulmod(&b, &b, m, p);
                e >>= 1;
            }
            result
        }

        pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
            let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
            while !(b.len() == 1 && b[0] == 0) {
                let r = rem(&a, &b, p);
                a = b;
                b = r;
            }
            a
        }

        pub fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
            let len = a.len().max(b.len());
            let mut out = vec![0u64; len];
            for i in 0..len {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                out[i] = (x + p - y) % p;
            }
            trim(out)
        }
    }

    /// Rabin's irreducibility test plus primitivity and subfield
    /// compatibility of the root, all by direct polynomial arithmetic.
    #[test]
    fn conway_table_is_irreducible_primitive_and_compatible() {
        for &(p, n, c) in CONWAY {
            let p64 = p as u64;
            let m: Vec<u64> = c.iter().map(|&x| x as u64).collect();
            let x = vec![0u64, 1];
            let q = (p as u128).pow(n);
            // x^(p^n) = x mod m
            assert_eq!(poly::powmod(&x, q, &m, p64), poly::rem(&x, &m, p64), "{p},{n}");
            for d in prime_factors(n as u64) {
                let k = (p as u128).pow(n / d as u32);
                let xk = poly::powmod(&x, k, &m, p64);
                let g = poly::gcd(&m, &poly::sub(&xk, &x, p64), p64);
                assert_eq!(g.len(), 1, "({p},{n}) has a factor of degree dividing {}", n / d as u32);
            }
            let order = q - 1;
            for f in prime_factors(order as u64) {
                let r = poly::powmod(&x, order / f as u128, &m, p64);
                assert_ne!(r, vec![1], "({p},{n}) root is not primitive");
            }
            // the norm-like power of the root is a root of each subfield polynomial
            for d in 1..n {
                if n % d != 0 {
                    continue;
                }
                let sub = conway_polynomial(p, d).unwrap();
                let e = order / ((p as u128).pow(d) - 1);
                let y = poly::powmod(&x, e, &m, p64);
                let mut acc = vec![0u64];
                for &coef in sub.iter().rev() {
                    acc = poly::mulmod(&acc, &y, &m, p64);
                    acc[0] = (acc[0] + coef as u64) % p64;
                    acc = poly::trim(acc);
                }
                assert_eq!(acc, vec![0], "({p},{n}) incompatible with degree {d}");
            }
        }
    }
}
