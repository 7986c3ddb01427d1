//! The free Z2×Z2-graded algebra `F<Z>` on variables of kinds V, W, X, Y.
//!
//! Polynomial text syntax:
//!
//! ```text
//! poly   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor (['*'] factor)*
//! factor := (int | [c0,c1,..] | var | '(' poly ')' | '[' poly (',' poly)+ ']') ['^' int]
//! var    := ('v'|'w'|'x'|'y') int
//! ```
//!
//! Brackets are left-normed graded commutators. A bracket containing only
//! integers, such as `[1,2]`, is a field element given by its coefficient list.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::field::{Fe, FieldConfig};
use crate::grassmann::Parity;
use crate::tensor::{Bidegree, TensorElement, TensorShape};
use crate::text;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
pub enum VarKind {
    V,
    W,
    X,
    Y,
}

impl VarKind {
    pub const ALL: [VarKind; 4] = [VarKind::V, VarKind::W, VarKind::X, VarKind::Y];

    pub fn bidegree(self) -> Bidegree {
        match self {
            VarKind::V => Bidegree(0, 0),
            VarKind::W => Bidegree(1, 0),
            VarKind::X => Bidegree(0, 1),
            VarKind::Y => Bidegree(1, 1),
        }
    }

    pub fn z2_parity(self) -> Parity {
        self.bidegree().z2()
    }

    pub fn letter(self) -> char {
        match self {
            VarKind::V => 'v',
            VarKind::W => 'w',
            VarKind::X => 'x',
            VarKind::Y => 'y',
        }
    }

    pub fn from_letter(c: char) -> Option<Self> {
        match c {
            'v' => Some(VarKind::V),
            'w' => Some(VarKind::W),
            'x' => Some(VarKind::X),
            'y' => Some(VarKind::Y),
            _ => None,
        }
    }
}

/// A graded variable. The derived order is `v1 < v2 < ... < w1 < ... < x1 <
/// ... < y1 < ...`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GVariable {
    pub kind: VarKind,
    pub index: u32,
}

impl GVariable {
    pub fn new(kind: VarKind, index: u32) -> Self {
        assert!(index >= 1, "variable indices start at 1");
        GVariable { kind, index }
    }

    pub fn v(i: u32) -> Self {
        Self::new(VarKind::V, i)
    }

    pub fn w(i: u32) -> Self {
        Self::new(VarKind::W, i)
    }

    pub fn x(i: u32) -> Self {
        Self::new(VarKind::X, i)
    }

    pub fn y(i: u32) -> Self {
        Self::new(VarKind::Y, i)
    }

    pub fn bidegree(self) -> Bidegree {
        self.kind.bidegree()
    }

    pub fn z2_parity(self) -> Parity {
        self.kind.z2_parity()
    }
}

impl fmt::Display for GVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.kind.letter(), self.index)
    }
}

impl fmt::Debug for GVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for GVariable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut chars = s.chars();
        let kind = chars
            .next()
            .and_then(VarKind::from_letter)
            .ok_or_else(|| Error::Parse { pos: 0, msg: format!("unknown variable {s:?}") })?;
        let index: u32 = chars
            .as_str()
            .parse()
            .ok()
            .filter(|&i| i >= 1)
            .ok_or_else(|| Error::Parse { pos: 1, msg: format!("bad variable index in {s:?}") })?;
        Ok(GVariable { kind, index })
    }
}

impl Serialize for GVariable {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A word in the free algebra; the empty word is the unit. Words are ordered
/// by length, then letter by letter.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GWord(pub Vec<GVariable>);

impl GWord {
    pub fn unit() -> Self {
        GWord(Vec::new())
    }

    pub fn letters(&self) -> &[GVariable] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bidegree(&self) -> Bidegree {
        self.0.iter().fold(Bidegree(0, 0), |acc, v| acc.add(v.bidegree()))
    }

    pub fn deg(&self, z: GVariable) -> u32 {
        self.0.iter().filter(|&&v| v == z).count() as u32
    }

    /// Occurrence count of every variable in the word.
    pub fn multidegree(&self) -> BTreeMap<GVariable, u32> {
        let mut out = BTreeMap::new();
        for &v in &self.0 {
            *out.entry(v).or_insert(0) += 1;
        }
        out
    }

    pub fn concat(&self, other: &GWord) -> GWord {
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.0);
        letters.extend_from_slice(&other.0);
        GWord(letters)
    }

    /// Maximal runs of equal letters as `(variable, exponent)` pairs.
    pub fn runs(&self) -> Vec<(GVariable, u32)> {
        let mut out: Vec<(GVariable, u32)> = Vec::new();
        for &v in &self.0 {
            match out.last_mut() {
                Some((last, e)) if *last == v => *e += 1,
                _ => out.push((v, 1)),
            }
        }
        out
    }
}

impl Ord for GWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for GWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for GWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (i, (v, e)) in self.runs().into_iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            if e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for GWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A polynomial in the free graded algebra.
#[derive(Clone, PartialEq, Eq)]
pub struct GPolynomial {
    field: FieldConfig,
    terms: BTreeMap<GWord, Fe>,
}

impl GPolynomial {
    pub fn zero(field: &FieldConfig) -> Self {
        GPolynomial { field: field.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(field: &FieldConfig, c: Fe) -> Self {
        Self::monomial(field, c, GWord::unit())
    }

    pub fn one(field: &FieldConfig) -> Self {
        Self::constant(field, field.one())
    }

    pub fn monomial(field: &FieldConfig, c: Fe, w: GWord) -> Self {
        let mut out = Self::zero(field);
        out.add_term(w, c);
        out
    }

    pub fn var(field: &FieldConfig, v: GVariable) -> Self {
        Self::monomial(field, field.one(), GWord(vec![v]))
    }

    pub fn parse(field: &FieldConfig, s: &str) -> Result<Self> {
        let mut p = Parser { s: s.as_bytes(), pos: 0, field };
        p.skip_ws();
        if p.pos == p.s.len() {
            return Err(Error::Parse { pos: 0, msg: "empty polynomial".into() });
        }
        let out = p.poly()?;
        p.skip_ws();
        if p.pos != p.s.len() {
            return Err(p.error(format!("unexpected {:?}", p.s[p.pos] as char)));
        }
        Ok(out)
    }

    pub fn field(&self) -> &FieldConfig {
        &self.field
    }

    pub fn terms(&self) -> &BTreeMap<GWord, Fe> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &GWord) -> Fe {
        self.terms.get(w).copied().unwrap_or(Fe::ZERO)
    }

    pub fn add_term(&mut self, w: GWord, c: Fe) {
        if c.is_zero() {
            return;
        }
        let f = &self.field;
        match self.terms.get_mut(&w) {
            Some(x) => {
                *x = f.add(*x, c);
                if x.is_zero() {
                    self.terms.remove(&w);
                }
            }
            None => {
                self.terms.insert(w, c);
            }
        }
    }

    fn check_field(&self, other: &Self) {
        assert!(self.field == other.field, "polynomials over different fields");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_field(other);
        let mut out = self.clone();
        for (w, &c) in &other.terms {
            out.add_term(w.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(self.field.neg(self.field.one()))
    }

    pub fn scale(&self, c: Fe) -> Self {
        let mut out = Self::zero(&self.field);
        if c.is_zero() {
            return out;
        }
        for (w, &x) in &self.terms {
            out.terms.insert(w.clone(), self.field.mul(x, c));
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_field(other);
        let f = &self.field;
        let mut out = Self::zero(f);
        for (a, &x) in &self.terms {
            for (b, &y) in &other.terms {
                out.add_term(a.concat(b), f.mul(x, y));
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(&self.field);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Component of the given Z2 parity.
    pub fn parity_component(&self, parity: Parity) -> Self {
        let mut out = Self::zero(&self.field);
        for (w, &c) in &self.terms {
            if w.bidegree().z2() == parity {
                out.terms.insert(w.clone(), c);
            }
        }
        out
    }

    /// `[f, g]_{Z2}`, split into Z2 parity components.
    pub fn graded_commutator(&self, other: &Self) -> Self {
        let mut out = Self::zero(&self.field);
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
                let ab = a.mul(&b);
                let ba = b.mul(&a);
                out = out.add(&if pa & pb == 1 { ab.add(&ba) } else { ab.sub(&ba) });
            }
        }
        out
    }

    /// Left-normed `[f_1, ..., f_n]_{Z2}`.
    pub fn left_normed(items: &[GPolynomial]) -> Result<Self> {
        let (first, rest) = items
            .split_first()
            .ok_or_else(|| Error::Invalid("empty commutator".into()))?;
        Ok(rest.iter().fold(first.clone(), |acc, x| acc.graded_commutator(x)))
    }

    pub fn variables(&self) -> BTreeSet<GVariable> {
        self.terms.keys().flat_map(|w| w.0.iter().copied()).collect()
    }

    /// Maximal occurrence count of `z` over the monomials.
    pub fn deg_z(&self, z: GVariable) -> u32 {
        self.terms.keys().map(|w| w.deg(z)).max().unwrap_or(0)
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(GWord::len).max().unwrap_or(0)
    }

    /// The common bidegree of all monomials, if any.
    pub fn bidegree(&self) -> Option<Bidegree> {
        let mut it = self.terms.keys().map(GWord::bidegree);
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }
}

impl fmt::Display for GPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = text::format_linear(
            &self.field,
            self.terms.iter().map(|(w, &c)| (w.to_string(), c, w.is_empty())),
        );
        f.write_str(&s)
    }
}

impl fmt::Debug for GPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    field: &'a FieldConfig,
}

impl Parser<'_> {
    fn error(&self, msg: impl Into<String>) -> Error {
        Error::Parse { pos: self.pos, msg: msg.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected {:?}", c as char)))
        }
    }

    fn int(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an integer"));
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| Error::Parse { pos: start, msg: "integer too large".into() })
    }

    fn poly(&mut self) -> Result<GPolynomial> {
        let mut negative = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        let mut acc = GPolynomial::zero(self.field);
        loop {
            let t = self.term()?;
            acc = if negative { acc.sub(&t) } else { acc.add(&t) };
            match self.peek() {
                Some(b'+') => negative = false,
                Some(b'-') => negative = true,
                _ => return Ok(acc),
            }
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<GPolynomial> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                }
                Some(b'v' | b'w' | b'x' | b'y' | b'(' | b'[') => {}
                _ => return Ok(acc),
            }
            let f = self.factor()?;
            acc = acc.mul(&f);
        }
    }

    /// Recognizes `[int, int, ...]` at the current position.
    fn field_literal(&mut self) -> Result<Option<Fe>> {
        let rest = &self.s[self.pos..];
        let Some(close) = rest.iter().position(|&c| c == b']') else {
            return Ok(None);
        };
        let inner = &rest[1..close];
        let is_literal = !inner.is_empty()
            && inner
                .iter()
                .all(|&c| c.is_ascii_digit() || c == b',' || c.is_ascii_whitespace())
            && inner.iter().any(u8::is_ascii_digit);
        if !is_literal {
            return Ok(None);
        }
        let text = std::str::from_utf8(&rest[..=close]).unwrap();
        let c = text::parse_coeff(self.field, text, self.pos)?;
        self.pos += close + 1;
        Ok(Some(c))
    }

    fn factor(&mut self) -> Result<GPolynomial> {
        let base = match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let n = self.int()?;
                let n = (n % self.field.p() as u64) as i64;
                GPolynomial::constant(self.field, self.field.from_int(n))
            }
            Some(c @ (b'v' | b'w' | b'x' | b'y')) => {
                let start = self.pos;
                self.pos += 1;
                if !self.s.get(self.pos).is_some_and(u8::is_ascii_digit) {
                    return Err(self.error("expected a variable index"));
                }
                let index = self.int()?;
                if index == 0 || index > u32::MAX as u64 {
                    return Err(Error::Parse { pos: start, msg: "variable index out of range".into() });
                }
                let kind = VarKind::from_letter(c as char).unwrap();
                GPolynomial::var(self.field, GVariable::new(kind, index as u32))
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.poly()?;
                self.expect(b')')?;
                inner
            }
            Some(b'[') => {
                if let Some(c) = self.field_literal()? {
                    GPolynomial::constant(self.field, c)
                } else {
                    self.pos += 1;
                    let mut items = vec![self.poly()?];
                    while self.peek() == Some(b',') {
                        self.pos += 1;
                        items.push(self.poly()?);
                    }
                    self.expect(b']')?;
                    if items.len() < 2 {
                        return Err(self.error("a commutator needs at least two entries"));
                    }
                    GPolynomial::left_normed(&items)?
                }
            }
            Some(c) if c.is_ascii_alphabetic() => {
                return Err(self.error(format!("unknown variable letter {:?}", c as char)));
            }
            Some(c) => return Err(self.error(format!("unexpected {:?}", c as char))),
            None => return Err(self.error("unexpected end of input")),
        };
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let e = self.int()?;
            if e > 10_000 {
                return Err(self.error("exponent too large"));
            }
            return Ok(base.pow(e as u32));
        }
        Ok(base)
    }
}

/// Counts `(n1, n2, n3, n4)` of V, W, X and Y variables.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, Serialize)]
pub struct VariableSet {
    pub n1: u32,
    pub n2: u32,
    pub n3: u32,
    pub n4: u32,
}

impl VariableSet {
    pub fn new(n1: u32, n2: u32, n3: u32, n4: u32) -> Self {
        VariableSet { n1, n2, n3, n4 }
    }

    pub fn count(&self, kind: VarKind) -> u32 {
        match kind {
            VarKind::V => self.n1,
            VarKind::W => self.n2,
            VarKind::X => self.n3,
            VarKind::Y => self.n4,
        }
    }

    /// All variables in increasing order.
    pub fn variables(&self) -> Vec<GVariable> {
        VarKind::ALL
            .iter()
            .flat_map(|&kind| (1..=self.count(kind)).map(move |i| GVariable::new(kind, i)))
            .collect()
    }

    pub fn contains(&self, v: GVariable) -> bool {
        v.index <= self.count(v.kind)
    }
}

/// A graded substitution: each variable maps to an element of the matching
/// homogeneous component of `E_{k*} ⊗ E`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EvaluationMap {
    field: FieldConfig,
    shape: TensorShape,
    images: BTreeMap<GVariable, TensorElement>,
}

impl EvaluationMap {
    pub fn new(field: &FieldConfig, shape: TensorShape) -> Self {
        EvaluationMap { field: field.clone(), shape, images: BTreeMap::new() }
    }

    pub fn insert(&mut self, v: GVariable, image: TensorElement) -> Result<()> {
        if image.shape() != self.shape || image.field() != &self.field {
            return Err(Error::Mismatch(format!("image of {v} has a different shape or field")));
        }
        if !image.is_homogeneous_of(v.bidegree()) {
            return Err(Error::Evaluation(format!(
                "image {image} of {v} is not homogeneous of bidegree {}",
                v.bidegree()
            )));
        }
        self.images.insert(v, image);
        Ok(())
    }

    pub fn get(&self, v: GVariable) -> Option<&TensorElement> {
        self.images.get(&v)
    }

    pub fn images(&self) -> &BTreeMap<GVariable, TensorElement> {
        &self.images
    }

    pub fn field(&self) -> &FieldConfig {
        &self.field
    }

    pub fn shape(&self) -> TensorShape {
        self.shape
    }
}

impl Serialize for EvaluationMap {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.images.len()))?;
        for (v, img) in &self.images {
            map.serialize_entry(&v.to_string(), &img.to_string())?;
        }
        map.end()
    }
}

/// Evaluates `f` under the graded substitution `e`.
pub fn substitute(f: &GPolynomial, e: &EvaluationMap) -> Result<TensorElement> {
    if f.field() != e.field() {
        return Err(Error::Mismatch("polynomial and substitution over different fields".into()));
    }
    let mut powers: HashMap<(GVariable, u32), TensorElement> = HashMap::new();
    let mut out = TensorElement::zero(e.field(), e.shape());
    for (w, &c) in f.terms() {
        let mut acc = TensorElement::scalar(e.field(), e.shape(), c);
        for (v, k) in w.runs() {
            if !powers.contains_key(&(v, k)) {
                let img = e
                    .get(v)
                    .ok_or_else(|| Error::Evaluation(format!("no image assigned to {v}")))?;
                powers.insert((v, k), img.pow(k as u64));
            }
            acc = acc.mul_unchecked(&powers[&(v, k)]);
            if acc.is_zero() {
                break;
            }
        }
        out = out.add(&acc)?;
    }
    Ok(out)
}
