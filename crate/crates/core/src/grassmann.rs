//! Truncated unitary Grassmann algebra `E_n` over a finite field.
//!
//! A basis blade `e_{i_1} ... e_{i_r}` (`i_1 < ... < i_r`) is stored as a
//! bitmask with bit `i - 1` standing for `e_i`, so truncations up to 64
//! generators are supported.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::field::{Fe, FieldConfig};
use crate::text;

pub const MAX_GENERATORS: u32 = 64;

/// Parity in Z2, stored as 0 or 1.
pub type Parity = u8;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Blade(u64);

impl Blade {
    pub const ONE: Blade = Blade(0);

    pub fn from_mask(mask: u64) -> Self {
        Blade(mask)
    }

    /// Blade from strictly increasing indices in `1..=64`.
    pub fn from_indices(indices: &[u32]) -> Result<Self> {
        let mut mask = 0u64;
        let mut last = 0u32;
        for &i in indices {
            if i == 0 || i > MAX_GENERATORS {
                return Err(Error::Invalid(format!("generator index {i} out of range 1..=64")));
            }
            if i <= last {
                return Err(Error::Invalid("blade indices must be strictly increasing".into()));
            }
            last = i;
            mask |= 1u64 << (i - 1);
        }
        Ok(Blade(mask))
    }

    pub fn generator(i: u32) -> Self {
        assert!((1..=MAX_GENERATORS).contains(&i), "generator index {i} out of range");
        Blade(1u64 << (i - 1))
    }

    pub fn mask(self) -> u64 {
        self.0
    }

    pub fn indices(self) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.0.count_ones() as usize);
        let mut m = self.0;
        while m != 0 {
            out.push(m.trailing_zeros() + 1);
            m &= m - 1;
        }
        out
    }

    /// Support length `l(b)`.
    pub fn len(self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_one(self) -> bool {
        self.0 == 0
    }

    pub fn max_index(self) -> u32 {
        64 - self.0.leading_zeros()
    }

    pub fn is_disjoint(self, other: Blade) -> bool {
        self.0 & other.0 == 0
    }

    pub fn canonical_parity(self) -> Parity {
        (self.0.count_ones() & 1) as Parity
    }

    /// Parity under `||.||_{k*}`: the number of indices in `1..=k`, mod 2.
    pub fn kstar_parity(self, k: u32) -> Parity {
        let low = if k >= 64 { u64::MAX } else { (1u64 << k) - 1 };
        ((self.0 & low).count_ones() & 1) as Parity
    }

    /// Product of two blades: `None` if they share a generator, otherwise the
    /// merged blade and whether the sign is negative.
    #[inline]
    pub fn mul(self, other: Blade) -> Option<(Blade, bool)> {
        if self.0 & other.0 != 0 {
            return None;
        }
        // count pairs (i in self, j in other) with i > j
        let mut inversions = 0u32;
        let mut rest = other.0;
        while rest != 0 {
            let j = rest.trailing_zeros();
            let above = if j >= 63 { 0 } else { !((1u64 << (j + 1)) - 1) };
            inversions += (self.0 & above).count_ones();
            rest &= rest - 1;
        }
        Some((Blade(self.0 | other.0), inversions & 1 == 1))
    }
}

impl Ord for Blade {
    /// Shorter blades first, then lexicographic on the sorted index list.
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| {
            let diff = self.0 ^ other.0;
            if diff == 0 {
                Ordering::Equal
            } else if self.0 & (diff & diff.wrapping_neg()) != 0 {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        })
    }
}

impl PartialOrd for Blade {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Blade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        for i in self.indices() {
            write!(f, "e{i}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Blade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Blade {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "1" {
            return Ok(Blade::ONE);
        }
        let mut indices = Vec::new();
        for (n, part) in s.split('e').enumerate() {
            if n == 0 {
                if !part.is_empty() {
                    return Err(Error::Parse { pos: 0, msg: format!("bad blade {s:?}") });
                }
                continue;
            }
            let i: u32 = part
                .parse()
                .map_err(|_| Error::Parse { pos: 0, msg: format!("bad blade {s:?}") })?;
            indices.push(i);
        }
        if indices.is_empty() {
            return Err(Error::Parse { pos: 0, msg: format!("bad blade {s:?}") });
        }
        Blade::from_indices(&indices)
    }
}

/// Which Z2-grading of `E` to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Grading {
    Canonical,
    KStar(u32),
}

impl Grading {
    pub fn parity(self, b: Blade) -> Parity {
        match self {
            Grading::Canonical => b.canonical_parity(),
            Grading::KStar(k) => b.kstar_parity(k),
        }
    }
}

/// Sparse element of `E_n`.
#[derive(Clone, PartialEq, Eq)]
pub struct Multivector {
    field: FieldConfig,
    n: u32,
    terms: BTreeMap<Blade, Fe>,
}

impl Multivector {
    pub fn zero(field: &FieldConfig, n: u32) -> Self {
        assert!(n <= MAX_GENERATORS, "truncation {n} exceeds {MAX_GENERATORS}");
        Multivector { field: field.clone(), n, terms: BTreeMap::new() }
    }

    pub fn scalar(field: &FieldConfig, n: u32, c: Fe) -> Self {
        let mut out = Self::zero(field, n);
        out.add_term(Blade::ONE, c);
        out
    }

    pub fn one(field: &FieldConfig, n: u32) -> Self {
        Self::scalar(field, n, field.one())
    }

    pub fn from_terms(
        field: &FieldConfig,
        n: u32,
        terms: impl IntoIterator<Item = (Blade, Fe)>,
    ) -> Result<Self> {
        let mut out = Self::zero(field, n);
        for (b, c) in terms {
            if b.max_index() > n {
                return Err(Error::Invalid(format!("blade {b} exceeds truncation {n}")));
            }
            out.add_term(b, c);
        }
        Ok(out)
    }

    pub fn parse(field: &FieldConfig, n: u32, s: &str) -> Result<Self> {
        let terms = text::parse_linear(field, s, Blade::ONE, |b, _| b.parse())?;
        Self::from_terms(field, n, terms)
    }

    pub fn field(&self) -> &FieldConfig {
        &self.field
    }

    pub fn truncation(&self) -> u32 {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<Blade, Fe> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, b: Blade) -> Fe {
        self.terms.get(&b).copied().unwrap_or(Fe::ZERO)
    }

    /// Coefficient of `1_E`; zero exactly when the element lies in `E*`.
    pub fn scalar_part(&self) -> Fe {
        self.coeff(Blade::ONE)
    }

    pub(crate) fn add_term(&mut self, b: Blade, c: Fe) {
        if c.is_zero() {
            return;
        }
        let f = &self.field;
        match self.terms.entry(b) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = f.add(*e.get(), c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::Mismatch(format!("truncations {} and {}", self.n, other.n)));
        }
        if self.field != other.field {
            return Err(Error::Mismatch("multivectors over different fields".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (&b, &c) in &other.terms {
            out.add_term(b, c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(self.field.neg(self.field.one()))
    }

    pub fn scale(&self, c: Fe) -> Self {
        let mut out = Self::zero(&self.field, self.n);
        for (&b, &x) in &self.terms {
            out.add_term(b, self.field.mul(x, c));
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let f = &self.field;
        let mut out = Self::zero(f, self.n);
        for (&a, &x) in &self.terms {
            for (&b, &y) in &other.terms {
                if let Some((ab, neg)) = a.mul(b) {
                    let c = f.mul(x, y);
                    out.add_term(ab, if neg { f.neg(c) } else { c });
                }
            }
        }
        Ok(out)
    }

    /// `a^e` by repeated squaring; `a^0 = 1`.
    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self::one(&self.field, self.n);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).expect("same algebra");
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).expect("same algebra");
            }
        }
        acc
    }

    /// Ordinary commutator `ab - ba`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    /// Projection onto the `parity` component of `grading`.
    pub fn homogeneous_component(&self, parity: Parity, grading: Grading) -> Self {
        let mut out = Self::zero(&self.field, self.n);
        for (&b, &c) in &self.terms {
            if grading.parity(b) == parity {
                out.add_term(b, c);
            }
        }
        out
    }
}

impl fmt::Display for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = text::format_linear(
            &self.field,
            self.terms.iter().map(|(b, &c)| (b.to_string(), c, b.is_one())),
        );
        f.write_str(&s)
    }
}

impl fmt::Debug for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
