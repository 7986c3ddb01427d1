//! The algebra `E_{k*} ⊗ E` with its Z2×Z2-grading.
//!
//! The tensor product is the ordinary one: `(a⊗b)(c⊗d) = ac⊗bd` with no
//! Koszul sign. The bidegree of `a⊗b` is `(||a||_{k*}, |b|)`; the Z2 parity
//! driving supercommutators is the second component.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Fe, FieldConfig};
use crate::grassmann::{Blade, Parity, MAX_GENERATORS};
use crate::text;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct TensorBlade {
    pub left: Blade,
    pub right: Blade,
}

impl TensorBlade {
    pub const ONE: TensorBlade = TensorBlade { left: Blade::ONE, right: Blade::ONE };

    pub fn new(left: Blade, right: Blade) -> Self {
        TensorBlade { left, right }
    }

    pub fn bidegree(self, k: u32) -> Bidegree {
        Bidegree::new(self.left.kstar_parity(k), self.right.canonical_parity())
    }

    pub fn z2_parity(self) -> Parity {
        self.right.canonical_parity()
    }

    /// Support length `l(a⊗b) = l(a) + l(b)`.
    pub fn len(self) -> u32 {
        self.left.len() + self.right.len()
    }

    #[inline]
    pub fn mul(self, other: TensorBlade) -> Option<(TensorBlade, bool)> {
        let (l, s1) = self.left.mul(other.left)?;
        let (r, s2) = self.right.mul(other.right)?;
        Some((TensorBlade { left: l, right: r }, s1 ^ s2))
    }
}

impl fmt::Display for TensorBlade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{}", self.left, self.right)
    }
}

impl fmt::Debug for TensorBlade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for TensorBlade {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (l, r) = s
            .split_once('|')
            .ok_or_else(|| Error::Parse { pos: 0, msg: format!("expected left|right, got {s:?}") })?;
        Ok(TensorBlade { left: l.parse()?, right: r.parse()? })
    }
}

/// An element of Z2×Z2.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default, Serialize)]
pub struct Bidegree(pub Parity, pub Parity);

impl Bidegree {
    pub const ALL: [Bidegree; 4] = [Bidegree(0, 0), Bidegree(1, 0), Bidegree(0, 1), Bidegree(1, 1)];

    pub fn new(a: Parity, b: Parity) -> Self {
        Bidegree(a & 1, b & 1)
    }

    pub fn add(self, other: Bidegree) -> Bidegree {
        Bidegree(self.0 ^ other.0, self.1 ^ other.1)
    }

    /// The Z2 parity used by graded commutators.
    pub fn z2(self) -> Parity {
        self.1
    }
}

impl fmt::Display for Bidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.0, self.1)
    }
}

/// Truncations and grading parameter shared by compatible tensor elements.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct TensorShape {
    pub n_left: u32,
    pub n_right: u32,
    pub k: u32,
}

impl TensorShape {
    pub fn new(n_left: u32, n_right: u32, k: u32) -> Result<Self> {
        if n_left > MAX_GENERATORS || n_right > MAX_GENERATORS {
            return Err(Error::Invalid(format!(
                "truncations ({n_left}, {n_right}) exceed {MAX_GENERATORS}"
            )));
        }
        if k > n_left {
            return Err(Error::Invalid(format!("k = {k} exceeds left truncation {n_left}")));
        }
        Ok(TensorShape { n_left, n_right, k })
    }

    pub fn admits(&self, b: TensorBlade) -> bool {
        b.left.max_index() <= self.n_left && b.right.max_index() <= self.n_right
    }
}

/// Sparse element of `E_{k*,n_L} ⊗ E_{n_R}`.
#[derive(Clone, PartialEq, Eq)]
pub struct TensorElement {
    field: FieldConfig,
    shape: TensorShape,
    terms: BTreeMap<TensorBlade, Fe>,
}

/// Support statistics of a nonzero element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuppStats {
    /// Union of left supports and union of right supports.
    pub union: (Blade, Blade),
    pub max_l: u32,
    pub max_ind: Vec<TensorBlade>,
}

impl TensorElement {
    pub fn zero(field: &FieldConfig, shape: TensorShape) -> Self {
        TensorElement { field: field.clone(), shape, terms: BTreeMap::new() }
    }

    pub fn scalar(field: &FieldConfig, shape: TensorShape, c: Fe) -> Self {
        let mut out = Self::zero(field, shape);
        out.add_term(TensorBlade::ONE, c);
        out
    }

    pub fn one(field: &FieldConfig, shape: TensorShape) -> Self {
        Self::scalar(field, shape, field.one())
    }

    pub fn from_terms(
        field: &FieldConfig,
        shape: TensorShape,
        terms: impl IntoIterator<Item = (TensorBlade, Fe)>,
    ) -> Result<Self> {
        let mut out = Self::zero(field, shape);
        for (b, c) in terms {
            if !shape.admits(b) {
                return Err(Error::Invalid(format!(
                    "{b} exceeds truncations ({}, {})",
                    shape.n_left, shape.n_right
                )));
            }
            out.add_term(b, c);
        }
        Ok(out)
    }

    /// Parses `2*e1e2|e3 + 1|1`.
    pub fn parse(field: &FieldConfig, shape: TensorShape, s: &str) -> Result<Self> {
        let terms = text::parse_linear(field, s, TensorBlade::ONE, |b, _| b.parse())?;
        Self::from_terms(field, shape, terms)
    }

    pub fn field(&self) -> &FieldConfig {
        &self.field
    }

    pub fn shape(&self) -> TensorShape {
        self.shape
    }

    pub fn terms(&self) -> &BTreeMap<TensorBlade, Fe> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, b: TensorBlade) -> Fe {
        self.terms.get(&b).copied().unwrap_or(Fe::ZERO)
    }

    /// The single `(coefficient, blade)` pair if this is a nonzero monomial.
    pub fn single_term(&self) -> Option<(Fe, TensorBlade)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(&b, &c)| (c, b))
        } else {
            None
        }
    }

    #[inline]
    pub(crate) fn add_term(&mut self, b: TensorBlade, c: Fe) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(b) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let s = self.field.add(*e.get(), c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn compatible(&self, other: &Self) -> Result<()> {
        if self.shape != other.shape {
            return Err(Error::Mismatch(format!("shapes {:?} and {:?}", self.shape, other.shape)));
        }
        if self.field != other.field {
            return Err(Error::Mismatch("tensor elements over different fields".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let mut out = self.clone();
        for (&b, &c) in &other.terms {
            out.add_term(b, c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let mut out = self.clone();
        for (&b, &c) in &other.terms {
            out.add_term(b, self.field.neg(c));
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        self.scale(self.field.neg(self.field.one()))
    }

    pub fn scale(&self, c: Fe) -> Self {
        let mut out = Self::zero(&self.field, self.shape);
        if c.is_zero() {
            return out;
        }
        for (&b, &x) in &self.terms {
            out.terms.insert(b, self.field.mul(x, c));
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        let f = &self.field;
        let mut out = Self::zero(f, self.shape);
        for (&a, &x) in &self.terms {
            for (&b, &y) in &other.terms {
                if let Some((ab, neg)) = a.mul(b) {
                    let c = f.mul(x, y);
                    out.add_term(ab, if neg { f.neg(c) } else { c });
                }
            }
        }
        out
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self::one(&self.field, self.shape);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        acc
    }

    /// Component of the given Z2 parity (right-factor canonical parity).
    pub fn parity_component(&self, parity: Parity) -> Self {
        let mut out = Self::zero(&self.field, self.shape);
        for (&b, &c) in &self.terms {
            if b.z2_parity() == parity {
                out.terms.insert(b, c);
            }
        }
        out
    }

    pub fn bidegree_component(&self, d: Bidegree) -> Self {
        let mut out = Self::zero(&self.field, self.shape);
        for (&b, &c) in &self.terms {
            if b.bidegree(self.shape.k) == d {
                out.terms.insert(b, c);
            }
        }
        out
    }

    /// True if every term has bidegree `d` (the zero element qualifies).
    pub fn is_homogeneous_of(&self, d: Bidegree) -> bool {
        self.terms.keys().all(|b| b.bidegree(self.shape.k) == d)
    }

    /// The common bidegree of all terms, if there is one and the element is
    /// nonzero.
    pub fn bidegree(&self) -> Option<Bidegree> {
        let mut it = self.terms.keys().map(|b| b.bidegree(self.shape.k));
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    /// `[a, b]_{Z2}`, split into parity components when needed.
    pub fn supercommutator(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let f = &self.field;
        let mut out = Self::zero(f, self.shape);
        for pa in 0..2u8 {
            let a = self.parity_component(pa);
            if a.is_zero() {
                continue;
            }
            for pb in 0..2u8 {
                let b = other.parity_component(pb);
                if b.is_zero() {
                    continue;
                }
                let ab = a.mul_unchecked(&b);
                let ba = b.mul_unchecked(&a);
                let term = if pa & pb == 1 { ab.add(&ba)? } else { ab.sub(&ba)? };
                out = out.add(&term)?;
            }
        }
        Ok(out)
    }

    /// Left-normed `[a_1, ..., a_n]_{Z2}`.
    pub fn left_normed(items: &[TensorElement]) -> Result<Self> {
        let (first, rest) = items
            .split_first()
            .ok_or_else(|| Error::Invalid("empty commutator".into()))?;
        rest.iter().try_fold(first.clone(), |acc, x| acc.supercommutator(x))
    }

    /// Union of the left supports and of the right supports; `(1, 1)` for 0.
    pub fn supp_union(&self) -> (Blade, Blade) {
        let (mut l, mut r) = (0u64, 0u64);
        for b in self.terms.keys() {
            l |= b.left.mask();
            r |= b.right.mask();
        }
        (Blade::from_mask(l), Blade::from_mask(r))
    }

    pub fn max_l(&self) -> Result<u32> {
        self.terms
            .keys()
            .map(|b| b.len())
            .max()
            .ok_or_else(|| Error::Invalid("max-l of the zero element".into()))
    }

    pub fn supp_stats(&self) -> Result<SuppStats> {
        let max_l = self.max_l()?;
        let max_ind = self.terms.keys().filter(|b| b.len() == max_l).copied().collect();
        Ok(SuppStats { union: self.supp_union(), max_l, max_ind })
    }

    /// The sub-sum of maximal support length terms.
    pub fn g_sum(&self) -> Result<Self> {
        let max_l = self.max_l()?;
        let mut out = Self::zero(&self.field, self.shape);
        for (&b, &c) in &self.terms {
            if b.len() == max_l {
                out.terms.insert(b, c);
            }
        }
        Ok(out)
    }

    /// Same terms viewed in a larger (or equal) shape.
    pub fn reshape(&self, shape: TensorShape) -> Result<Self> {
        Self::from_terms(&self.field, shape, self.terms.iter().map(|(&b, &c)| (b, c)))
    }
}

impl fmt::Display for TensorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = text::format_linear(
            &self.field,
            self.terms.iter().map(|(b, &c)| (b.to_string(), c, false)),
        );
        f.write_str(&s)
    }
}

impl fmt::Debug for TensorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grassmann::Multivector;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn setup() -> (FieldConfig, TensorShape) {
        (FieldConfig::new(3, 1).unwrap(), TensorShape::new(10, 10, 2).unwrap())
    }

    fn t(f: &FieldConfig, s: TensorShape, text: &str) -> TensorElement {
        TensorElement::parse(f, s, text).unwrap()
    }

    #[test]
    fn products() {
        let (f, s) = setup();
        assert_eq!(t(&f, s, "e1|1").mul(&t(&f, s, "1|e1")).unwrap(), t(&f, s, "e1|e1"));
        assert!(t(&f, s, "e1|e2").mul(&t(&f, s, "e1|e3")).unwrap().is_zero());
        assert_eq!(t(&f, s, "e1|e2").mul(&t(&f, s, "e2|e1")).unwrap(), t(&f, s, "-e1e2|e1e2"));
    }

    #[test]
    fn bidegrees() {
        let k = 2;
        let tb = |s: &str| s.parse::<TensorBlade>().unwrap();
        assert_eq!(tb("e1|1").bidegree(k), Bidegree(1, 0));
        assert_eq!(tb("e1|1").z2_parity(), 0);
        assert_eq!(tb("e3|e1").bidegree(k), Bidegree(0, 1));
        assert_eq!(tb("e3|e1").z2_parity(), 1);
        assert_eq!(tb("e1|e1").bidegree(k), Bidegree(1, 1));
    }

    #[test]
    fn supercommutator_examples() {
        let (f, s) = setup();
        let c = t(&f, s, "e1|e1").supercommutator(&t(&f, s, "e2|e2")).unwrap();
        assert_eq!(c, t(&f, s, "2*e1e2|e1e2"));
        let a = t(&f, s, "e1e3|e2e4 + e5|1");
        assert!(a.supercommutator(&a).unwrap().is_zero());
    }

    #[test]
    fn text_round_trip() {
        let (f, s) = setup();
        let a = t(&f, s, "2*e1e2|e3 + 1|1 - e4|e5e6");
        assert_eq!(t(&f, s, &a.to_string()), a);
        assert_eq!(t(&f, s, "1|1").to_string(), "1|1");
        assert!(TensorElement::parse(&f, s, "e11|1").is_err());
    }

    #[test]
    fn supp_statistics() {
        let (f, s) = setup();
        let c = t(&f, s, "e1|1 + e1e2|e3");
        let st = c.supp_stats().unwrap();
        assert_eq!(st.max_l, 3);
        assert_eq!(c.g_sum().unwrap(), t(&f, s, "e1e2|e3"));
        assert_eq!(st.union, ("e1e2".parse().unwrap(), "e3".parse().unwrap()));
        let d = t(&f, s, "2*e1|e2 + e3|e4");
        assert_eq!(d.g_sum().unwrap(), d);
        let z = TensorElement::zero(&f, s);
        assert!(z.g_sum().is_err());
        assert!(z.max_l().is_err());
        assert_eq!(z.supp_union(), (Blade::ONE, Blade::ONE));
    }

    fn random_blade(rng: &mut ChaCha8Rng, n: u32) -> Blade {
        // short blades so that products are frequently nonzero
        let mut mask = 0u64;
        for _ in 0..rng.gen_range(0..=3) {
            mask |= 1u64 << rng.gen_range(0..n);
        }
        Blade::from_mask(mask)
    }

    fn random_homogeneous(
        rng: &mut ChaCha8Rng,
        f: &FieldConfig,
        s: TensorShape,
        d: Bidegree,
    ) -> TensorElement {
        let mut out = TensorElement::zero(f, s);
        let want = rng.gen_range(1..=3);
        while out.len() < want {
            let b = TensorBlade::new(random_blade(rng, s.n_left), random_blade(rng, s.n_right));
            if b.bidegree(s.k) == d {
                out.add_term(b, Fe(rng.gen_range(1..f.q())));
            }
        }
        out
    }

    #[test]
    fn supersymmetry_on_random_pairs() {
        let (f, s) = setup();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..1000 {
            let da = Bidegree::ALL[rng.gen_range(0..4)];
            let db = Bidegree::ALL[rng.gen_range(0..4)];
            let a = random_homogeneous(&mut rng, &f, s, da);
            let b = random_homogeneous(&mut rng, &f, s, db);
            let ab = a.supercommutator(&b).unwrap();
            let ba = b.supercommutator(&a).unwrap();
            let expected = if da.z2() & db.z2() == 1 { ba.neg() } else { ba };
            assert_eq!(ab, expected.neg());
        }
    }

    #[test]
    fn triple_supercommutators_vanish() {
        let (f, s) = setup();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..200 {
            let xs: Vec<TensorElement> = (0..3)
                .map(|_| {
                    let d = Bidegree::ALL[rng.gen_range(0..4)];
                    random_homogeneous(&mut rng, &f, s, d)
                })
                .collect();
            assert!(TensorElement::left_normed(&xs).unwrap().is_zero());
        }
    }

    #[test]
    fn basis_supercommutator_matches_factorwise_formula() {
        // [a1⊗b1, a2⊗b2]_{Z2} = [a1, a2] ⊗ b1 b2 for all basis pairs, n = 4
        let f = FieldConfig::new(3, 1).unwrap();
        let n = 4;
        let s = TensorShape::new(n, n, 2).unwrap();
        let blades: Vec<Blade> = (0..(1u64 << n)).map(Blade::from_mask).collect();
        let mv = |b: Blade| Multivector::from_terms(&f, n, [(b, f.one())]).unwrap();
        for &a1 in &blades {
            for &b1 in &blades {
                for &a2 in &blades {
                    for &b2 in &blades {
                        let x = TensorElement::from_terms(&f, s, [(TensorBlade::new(a1, b1), f.one())]).unwrap();
                        let y = TensorElement::from_terms(&f, s, [(TensorBlade::new(a2, b2), f.one())]).unwrap();
                        let lhs = x.supercommutator(&y).unwrap();
                        let comm = mv(a1).commutator(&mv(a2)).unwrap();
                        let right = mv(b1).mul(&mv(b2)).unwrap();
                        let mut rhs = TensorElement::zero(&f, s);
                        for (&l, &c) in comm.terms() {
                            for (&r, &d) in right.terms() {
                                rhs.add_term(TensorBlade::new(l, r), f.mul(c, d));
                            }
                        }
                        assert_eq!(lhs, rhs, "{a1}⊗{b1}, {a2}⊗{b2}");
                    }
                }
            }
        }
    }

    #[test]
    fn product_nonzero_iff_supports_disjoint() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..2000 {
            let x = TensorBlade::new(random_blade(&mut rng, 6), random_blade(&mut rng, 6));
            let y = TensorBlade::new(random_blade(&mut rng, 6), random_blade(&mut rng, 6));
            let disjoint = x.left.is_disjoint(y.left) && x.right.is_disjoint(y.right);
            assert_eq!(x.mul(y).is_some(), disjoint);
        }
    }

    #[test]
    fn bidegree_is_additive() {
        let (f, s) = setup();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..500 {
            let da = Bidegree::ALL[rng.gen_range(0..4)];
            let db = Bidegree::ALL[rng.gen_range(0..4)];
            let a = random_homogeneous(&mut rng, &f, s, da);
            let b = random_homogeneous(&mut rng, &f, s, db);
            let ab = a.mul(&b).unwrap();
            assert!(ab.is_homogeneous_of(da.add(db)));
        }
    }

    #[test]
    fn g_sum_is_idempotent() {
        let (f, s) = setup();
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        for _ in 0..100 {
            let d = Bidegree::ALL[rng.gen_range(0..4)];
            let c = random_homogeneous(&mut rng, &f, s, d);
            let g = c.g_sum().unwrap();
            assert_eq!(g.g_sum().unwrap(), g);
        }
    }
}
