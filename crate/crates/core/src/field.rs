//! Exact arithmetic in GF(p^m) for odd primes p.
//!
//! Elements are packed as base-p integers: the coefficient vector
//! `(c_0, ..., c_{m-1})` of `c_0 + c_1 t + ... + c_{m-1} t^{m-1}` is stored as
//! `c_0 + c_1 p + ... + c_{m-1} p^{m-1}`. Algebra types hold a single
//! [`FieldConfig`] handle and store bare [`Fe`] values, so the hot loops never
//! touch reference counts. [`FieldElement`] pairs the two for checked,
//! standalone arithmetic.

use std::fmt;
use std::sync::Arc;

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest field size for which full addition/multiplication tables are built.
const TABLE_LIMIT: u32 = 1024;

/// A packed field element. Only meaningful together with the [`FieldConfig`]
/// that produced it.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Fe(pub(crate) u32);

impl Fe {
    pub const ZERO: Fe = Fe(0);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// The packed base-p index of this element, in `0..q`.
    pub fn index(self) -> u32 {
        self.0
    }
}

struct Tables {
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
}

struct Inner {
    p: u32,
    m: usize,
    /// Monic modulus, low degree first, length `m + 1`.
    modulus: Vec<u32>,
    q: u32,
    tables: Option<Tables>,
}

/// GF(p^m) with a fixed monic irreducible modulus. Cheap to clone.
#[derive(Clone)]
pub struct FieldConfig(Arc<Inner>);

impl PartialEq for FieldConfig {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.modulus == other.0.modulus)
    }
}

impl Eq for FieldConfig {}

impl fmt::Debug for FieldConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{}) mod {:?}", self.0.p, self.0.m, self.0.modulus)
    }
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

// Dense polynomial helpers over GF(p), low degree first.

fn poly_trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r: Vec<u32> = a.to_vec();
    poly_trim(&mut r);
    let db = b.len() - 1;
    let lead_inv = pow_mod(b[db], p - 2, p);
    while r.len() > db {
        let dr = r.len() - 1;
        let factor = (r[dr] as u64 * lead_inv as u64 % p as u64) as u32;
        let shift = dr - db;
        for (i, &bi) in b.iter().enumerate() {
            let sub = (factor as u64 * bi as u64 % p as u64) as u32;
            r[shift + i] = (r[shift + i] + p - sub) % p;
        }
        poly_trim(&mut r);
    }
    r
}

fn pow_mod(base: u32, mut exp: u32, p: u32) -> u32 {
    let mut acc = 1u64;
    let mut b = base as u64 % p as u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % p as u64;
        }
        b = b * b % p as u64;
        exp >>= 1;
    }
    acc as u32
}

/// Monic polynomials of degree `d` over GF(p), enumerated with the
/// non-leading coefficients in lexicographic order `(c_{d-1}, ..., c_0)`.
fn monic_polys(p: u32, d: usize) -> impl Iterator<Item = Vec<u32>> {
    let count = (p as u64).pow(d as u32);
    (0..count).map(move |mut code| {
        let mut coeffs = vec![0u32; d + 1];
        coeffs[d] = 1;
        // code's most significant digit is c_{d-1}
        for i in 0..d {
            coeffs[i] = (code % p as u64) as u32;
            code /= p as u64;
        }
        coeffs
    })
}

pub(crate) fn is_irreducible(f: &[u32], p: u32) -> bool {
    let deg = f.len() - 1;
    if deg == 0 {
        return false;
    }
    for d in 1..=deg / 2 {
        for g in monic_polys(p, d) {
            if poly_rem(f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

impl FieldConfig {
    /// Builds GF(p^m) with the lexicographically smallest monic irreducible
    /// modulus of degree m.
    pub fn new(p: u32, m: usize) -> Result<Self> {
        if p == 2 {
            return Err(Error::Field("characteristic 2 is not supported".into()));
        }
        if !is_prime(p) {
            return Err(Error::Field(format!("{p} is not prime")));
        }
        if m < 1 {
            return Err(Error::Field("extension degree must be at least 1".into()));
        }
        let q = (p as u64)
            .checked_pow(m as u32)
            .filter(|&q| q <= u32::MAX as u64 / 2)
            .ok_or_else(|| Error::Field(format!("GF({p}^{m}) is too large")))? as u32;
        let modulus = monic_polys(p, m)
            .find(|f| is_irreducible(f, p))
            .expect("irreducible polynomials exist in every degree");
        Ok(Self::assemble(p, m, modulus, q))
    }

    /// Builds GF(p^m) with an explicit modulus (low degree first, monic).
    pub fn with_modulus(p: u32, modulus: Vec<u32>) -> Result<Self> {
        if p == 2 || !is_prime(p) {
            return Err(Error::Field(format!("{p} is not an odd prime")));
        }
        let m = modulus.len().saturating_sub(1);
        if m < 1 || modulus[m] != 1 || modulus.iter().any(|&c| c >= p) {
            return Err(Error::Field("modulus must be monic of degree >= 1".into()));
        }
        if !is_irreducible(&modulus, p) {
            return Err(Error::Field(format!("{modulus:?} is reducible over GF({p})")));
        }
        let q = (p as u64)
            .checked_pow(m as u32)
            .filter(|&q| q <= u32::MAX as u64 / 2)
            .ok_or_else(|| Error::Field(format!("GF({p}^{m}) is too large")))? as u32;
        Ok(Self::assemble(p, m, modulus, q))
    }

    fn assemble(p: u32, m: usize, modulus: Vec<u32>, q: u32) -> Self {
        let mut inner = Inner { p, m, modulus, q, tables: None };
        if m > 1 && q <= TABLE_LIMIT {
            let tmp = FieldConfig(Arc::new(Inner { tables: None, ..inner_clone(&inner) }));
            let qs = q as usize;
            let mut add = vec![0u32; qs * qs];
            let mut mul = vec![0u32; qs * qs];
            let mut neg = vec![0u32; qs];
            for a in 0..q {
                neg[a as usize] = tmp.neg_slow(Fe(a)).0;
                for b in 0..q {
                    add[a as usize * qs + b as usize] = tmp.add_slow(Fe(a), Fe(b)).0;
                    mul[a as usize * qs + b as usize] = tmp.mul_slow(Fe(a), Fe(b)).0;
                }
            }
            inner.tables = Some(Tables { add, mul, neg });
        }
        FieldConfig(Arc::new(inner))
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }

    pub fn m(&self) -> usize {
        self.0.m
    }

    pub fn q(&self) -> u32 {
        self.0.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn zero(&self) -> Fe {
        Fe(0)
    }

    pub fn one(&self) -> Fe {
        Fe(1)
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> Fe {
        Fe(n.rem_euclid(self.0.p as i64) as u32)
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<Fe> {
        if coeffs.len() > self.0.m {
            return Err(Error::Field(format!(
                "{} coefficients given for a degree-{} extension",
                coeffs.len(),
                self.0.m
            )));
        }
        let mut packed = 0u32;
        for &c in coeffs.iter().rev() {
            if c >= self.0.p {
                return Err(Error::Field(format!("coefficient {c} is not reduced mod {}", self.0.p)));
            }
            packed = packed * self.0.p + c;
        }
        Ok(Fe(packed))
    }

    pub fn coeffs(&self, a: Fe) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.0.m);
        let mut v = a.0;
        for _ in 0..self.0.m {
            out.push(v % self.0.p);
            v /= self.0.p;
        }
        out
    }

    /// All q elements in packed order (0, 1, ..., q-1).
    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        (0..self.0.q).map(Fe)
    }

    /// The residue if `a` lies in the prime subfield.
    pub fn as_prime(&self, a: Fe) -> Option<u32> {
        (a.0 < self.0.p).then_some(a.0)
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        if self.0.m == 1 {
            let s = a.0 + b.0;
            return Fe(if s >= self.0.p { s - self.0.p } else { s });
        }
        match &self.0.tables {
            Some(t) => Fe(t.add[a.0 as usize * self.0.q as usize + b.0 as usize]),
            None => self.add_slow(a, b),
        }
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        if self.0.m == 1 {
            return Fe(if a.0 == 0 { 0 } else { self.0.p - a.0 });
        }
        match &self.0.tables {
            Some(t) => Fe(t.neg[a.0 as usize]),
            None => self.neg_slow(a),
        }
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if self.0.m == 1 {
            return Fe((a.0 as u64 * b.0 as u64 % self.0.p as u64) as u32);
        }
        match &self.0.tables {
            Some(t) => Fe(t.mul[a.0 as usize * self.0.q as usize + b.0 as usize]),
            None => self.mul_slow(a, b),
        }
    }

    /// Square-and-multiply exponentiation; `a^0 = 1` including `0^0`.
    pub fn pow(&self, a: Fe, mut exp: u64) -> Fe {
        let mut acc = self.one();
        let mut base = a;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: Fe) -> Result<Fe> {
        if a.is_zero() {
            return Err(Error::Field("inverse of zero".into()));
        }
        Ok(self.pow(a, self.0.q as u64 - 2))
    }

    /// Scalar multiple by an integer (reduced mod p).
    pub fn mul_int(&self, a: Fe, n: i64) -> Fe {
        self.mul(a, self.from_int(n))
    }

    pub fn element(&self, a: Fe) -> FieldElement {
        FieldElement { field: self.clone(), value: a }
    }

    /// Coefficient text for polynomial printing: a signed integer for prime
    /// subfield elements, otherwise the coefficient list.
    pub(crate) fn signed_repr(&self, a: Fe) -> (bool, String) {
        match self.as_prime(a) {
            Some(r) if r > self.0.p / 2 => (true, (self.0.p - r).to_string()),
            Some(r) => (false, r.to_string()),
            None => (false, self.list_repr(a)),
        }
    }

    pub(crate) fn list_repr(&self, a: Fe) -> String {
        let parts: Vec<String> = self.coeffs(a).iter().map(|c| c.to_string()).collect();
        format!("[{}]", parts.join(","))
    }

    fn add_slow(&self, a: Fe, b: Fe) -> Fe {
        let (ca, cb) = (self.coeffs(a), self.coeffs(b));
        let sum: Vec<u32> = ca.iter().zip(&cb).map(|(x, y)| (x + y) % self.0.p).collect();
        self.from_coeffs(&sum).expect("reduced")
    }

    fn neg_slow(&self, a: Fe) -> Fe {
        let c: Vec<u32> = self.coeffs(a).iter().map(|&x| (self.0.p - x) % self.0.p).collect();
        self.from_coeffs(&c).expect("reduced")
    }

    fn mul_slow(&self, a: Fe, b: Fe) -> Fe {
        let p = self.0.p as u64;
        let (ca, cb) = (self.coeffs(a), self.coeffs(b));
        let mut prod = vec![0u32; 2 * self.0.m];
        for (i, &x) in ca.iter().enumerate() {
            for (j, &y) in cb.iter().enumerate() {
                prod[i + j] = ((prod[i + j] as u64 + x as u64 * y as u64) % p) as u32;
            }
        }
        let mut r = poly_rem(&prod, &self.0.modulus, self.0.p);
        r.resize(self.0.m, 0);
        self.from_coeffs(&r).expect("reduced")
    }
}

fn inner_clone(inner: &Inner) -> Inner {
    Inner {
        p: inner.p,
        m: inner.m,
        modulus: inner.modulus.clone(),
        q: inner.q,
        tables: None,
    }
}

/// A field element bundled with its field, for checked arithmetic.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    pub field: FieldConfig,
    pub value: Fe,
}

impl FieldElement {
    fn same_field(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::Mismatch("field elements from different fields".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(self.field.element(self.field.add(self.value, other.value)))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(self.field.element(self.field.sub(self.value, other.value)))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(self.field.element(self.field.mul(self.value, other.value)))
    }

    pub fn neg(&self) -> Self {
        self.field.element(self.field.neg(self.value))
    }

    pub fn inv(&self) -> Result<Self> {
        Ok(self.field.element(self.field.inv(self.value)?))
    }

    pub fn pow(&self, exp: u64) -> Self {
        self.field.element(self.field.pow(self.value, exp))
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn coeffs(&self) -> Vec<u32> {
        self.field.coeffs(self.value)
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.field.list_repr(self.value))
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.field.list_repr(self.value))
    }
}

impl Serialize for FieldElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let coeffs = self.coeffs();
        let mut seq = serializer.serialize_seq(Some(coeffs.len()))?;
        for c in coeffs {
            seq.serialize_element(&c)?;
        }
        seq.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u32, m: usize) -> FieldConfig {
        FieldConfig::new(p, m).unwrap()
    }

    #[test]
    fn prime_field_defaults() {
        let f = gf(3, 1);
        assert_eq!(f.q(), 3);
        assert_eq!(f.modulus(), &[0, 1]);
        assert_eq!(f.add(Fe(2), Fe(2)), Fe(1));
        assert_eq!(f.inv(Fe(2)).unwrap(), Fe(2));
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(FieldConfig::new(2, 1).is_err());
        assert!(FieldConfig::new(9, 1).is_err());
        assert!(FieldConfig::new(3, 0).is_err());
        assert!(gf(5, 1).inv(Fe(0)).is_err());
    }

    #[test]
    fn gf9_modulus_is_smallest_irreducible() {
        // Oracle: scan monic quadratics t^2 + a t + b in (a, b) order and
        // keep the first one without a root in GF(3).
        let mut oracle = None;
        'scan: for a in 0..3u32 {
            for b in 0..3u32 {
                if (0..3u32).all(|x| (x * x + a * x + b) % 3 != 0) {
                    oracle = Some(vec![b, a, 1]);
                    break 'scan;
                }
            }
        }
        assert_eq!(oracle.as_deref(), Some(&[1, 0, 1][..]));
        assert_eq!(gf(3, 2).modulus(), oracle.unwrap().as_slice());
    }

    #[test]
    fn frobenius_fixes_every_element() {
        for (p, m) in [(3, 1), (3, 2), (5, 1), (3, 3), (3, 4), (5, 2), (7, 2)] {
            let f = gf(p, m);
            for a in f.elements() {
                assert_eq!(f.pow(a, f.q() as u64), a, "GF({p}^{m}) element {a:?}");
            }
        }
    }

    #[test]
    fn frobenius_is_additive() {
        for (p, m) in [(3, 1), (3, 2), (3, 3), (5, 2)] {
            let f = gf(p, m);
            for a in f.elements() {
                for b in f.elements() {
                    let lhs = f.pow(f.add(a, b), p as u64);
                    let rhs = f.add(f.pow(a, p as u64), f.pow(b, p as u64));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn field_axioms_exhaustive_gf9() {
        let f = gf(3, 2);
        for a in f.elements() {
            assert_eq!(f.add(a, f.neg(a)), Fe(0));
            if !a.is_zero() {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
            }
            for b in f.elements() {
                assert_eq!(f.mul(a, b), f.mul(b, a));
                for c in f.elements() {
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                }
            }
        }
    }

    #[test]
    fn table_and_direct_paths_agree() {
        let f = gf(3, 3);
        for a in f.elements() {
            for b in f.elements() {
                assert_eq!(f.mul(a, b), f.mul_slow(a, b));
                assert_eq!(f.add(a, b), f.add_slow(a, b));
            }
        }
    }

    #[test]
    fn checked_elements_reject_mixed_fields() {
        let a = gf(3, 1).element(Fe(1));
        let b = gf(5, 1).element(Fe(1));
        assert!(a.add(&b).is_err());
        assert_eq!(a.add(&a).unwrap().coeffs(), vec![2]);
    }

    #[test]
    fn coefficient_lists_round_trip() {
        let f = gf(3, 2);
        let a = f.from_coeffs(&[2, 1]).unwrap();
        assert_eq!(f.coeffs(a), vec![2, 1]);
        assert_eq!(f.element(a).to_string(), "[2,1]");
        assert_eq!(serde_json::to_string(&f.element(a)).unwrap(), "[2,1]");
        assert!(f.from_coeffs(&[3]).is_err());
    }
}
