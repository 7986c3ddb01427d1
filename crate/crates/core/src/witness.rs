//! The evaluations of Types 1 to 10, their closed-form calculations, suitable
//! and associated homomorphisms, and the separation argument on finite data.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Fe, FieldConfig};
use crate::free::{substitute, EvaluationMap, GVariable, VarKind, VariableSet};
use crate::grassmann::{Blade, MAX_GENERATORS};
use crate::rewrite::{sse_compare, PPolynomial, SseMonomial};
use crate::tensor::{TensorBlade, TensorElement, TensorShape};

/// Largest number of tuples tried by [`ppoly_scalar_witness`].
pub const WITNESS_BUDGET: u64 = 1 << 20;

/// Parameters of one evaluation type. `low` shifts the block of
/// `e_1, ..., e_k` used by Types 3, 4, 7 and 8.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct TypeDescriptor {
    pub type_id: u8,
    pub j: u32,
    pub n: u32,
    pub t: u32,
    pub k: u32,
    pub low: u32,
    #[serde(skip)]
    pub alpha: Fe,
}

impl TypeDescriptor {
    pub fn new(type_id: u8, j: u32, n: u32, t: u32, k: u32) -> Self {
        TypeDescriptor { type_id, j, n, t, k, low: 0, alpha: Fe::ZERO }
    }

    pub fn with_alpha(self, alpha: Fe) -> Self {
        TypeDescriptor { alpha, ..self }
    }

    pub fn with_low(self, low: u32) -> Self {
        TypeDescriptor { low, ..self }
    }

    fn validate(&self) -> Result<()> {
        if !(1..=10).contains(&self.type_id) {
            return Err(Error::Invalid(format!("no evaluation type {}", self.type_id)));
        }
        if self.t == 0 {
            return Err(Error::Invalid("t must be positive".into()));
        }
        if matches!(self.type_id, 3 | 4 | 7 | 8) && self.low + self.t > self.k {
            return Err(Error::Invalid(format!(
                "type {} needs t <= k (t = {}, k = {}, offset {})",
                self.type_id, self.t, self.k, self.low
            )));
        }
        Ok(())
    }

    /// The displayed terms as ordered index lists `(left, right)`, unit
    /// coefficients.
    fn index_terms(&self) -> Vec<(Vec<u32>, Vec<u32>)> {
        let (t, n, o) = (self.t, self.n, self.low);
        let h = self.j + self.k;
        match self.type_id {
            1 | 9 => (1..=t).map(|i| (vec![h + 2 * i - 1, h + 2 * i], vec![n + 2 * i - 1, n + 2 * i])).collect(),
            2 | 10 => std::iter::once((vec![h + 1], vec![n + 1, n + 2]))
                .chain((1..t).map(|i| (vec![h + 2 * i, h + 2 * i + 1], vec![n + 2 * i + 1, n + 2 * i + 2])))
                .collect(),
            3 => (1..=t).map(|i| (vec![o + i, h + i], vec![n + 2 * i - 1, n + 2 * i])).collect(),
            4 => std::iter::once((vec![o + 1], vec![n + 1, n + 2]))
                .chain((1..t).map(|i| (vec![o + i + 1, h + i], vec![n + 2 * i + 1, n + 2 * i + 2])))
                .collect(),
            5 => (1..=t).map(|i| (vec![h + i], vec![n + i])).collect(),
            6 => std::iter::once((vec![h + 1, h + 2], vec![n + 1]))
                .chain((1..t).map(|i| (vec![h + i + 2], vec![n + i + 1])))
                .collect(),
            7 => (1..=t).map(|i| (vec![o + i], vec![n + i])).collect(),
            _ => std::iter::once((vec![o + 1, self.k + 1 + self.j], vec![n + 1]))
                .chain((1..t).map(|i| (vec![o + i + 1], vec![n + i + 1])))
                .collect(),
        }
    }

    /// Largest left and right generator indices used.
    pub fn extent(&self) -> (u32, u32) {
        self.index_terms().iter().fold((0, 0), |(l, r), (a, b)| {
            (l.max(a.iter().copied().max().unwrap_or(0)), r.max(b.iter().copied().max().unwrap_or(0)))
        })
    }

    /// Left, right and low indices consumed, in that order.
    pub fn footprint(type_id: u8, t: u32) -> (u32, u32, u32) {
        match type_id {
            1 => (2 * t, 2 * t, 0),
            2 => (2 * t - 1, 2 * t, 0),
            3 => (t, 2 * t, t),
            4 => (t - 1, 2 * t, t),
            5 => (t, t, 0),
            6 => (t + 1, t, 0),
            7 => (0, t, t),
            _ => (1, t, t),
        }
    }
}

impl fmt::Display for TypeDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "type {} (j={}, n={}, t={}", self.type_id, self.j, self.n, self.t)?;
        if matches!(self.type_id, 3 | 4 | 7 | 8) {
            write!(f, ", low={}", self.low)?;
        }
        f.write_str(")")
    }
}

/// Product `e_{i_1} e_{i_2} ...` in the given order, with its sign.
fn ordered(indices: &[u32]) -> Result<(Blade, bool)> {
    let mut acc = (Blade::ONE, false);
    for &i in indices {
        if i == 0 || i > MAX_GENERATORS {
            return Err(Error::Invalid(format!("generator index {i} out of range")));
        }
        match acc.0.mul(Blade::generator(i)) {
            Some((b, neg)) => acc = (b, acc.1 ^ neg),
            None => return Err(Error::Invalid(format!("repeated generator e{i}"))),
        }
    }
    Ok(acc)
}

fn signed(field: &FieldConfig, c: Fe, neg: bool) -> Fe {
    if neg {
        field.neg(c)
    } else {
        c
    }
}

/// The displayed value of a type in `shape`.
pub fn build_type(field: &FieldConfig, d: &TypeDescriptor, shape: TensorShape) -> Result<TensorElement> {
    d.validate()?;
    if shape.k != d.k {
        return Err(Error::Mismatch(format!("shape has k = {}, descriptor k = {}", shape.k, d.k)));
    }
    let (l, r) = d.extent();
    if l > shape.n_left || r > shape.n_right {
        return Err(Error::Invalid(format!(
            "{d} needs truncations ({l}, {r}), have ({}, {})",
            shape.n_left, shape.n_right
        )));
    }
    let mut out = TensorElement::zero(field, shape);
    for (a, b) in d.index_terms() {
        let (la, na) = ordered(&a)?;
        let (lb, nb) = ordered(&b)?;
        out.add_term(TensorBlade::new(la, lb), signed(field, field.one(), na ^ nb));
    }
    if matches!(d.type_id, 9 | 10) {
        out.add_term(TensorBlade::ONE, d.alpha);
    }
    Ok(out)
}

/// Smallest shape holding a descriptor, with `spare` extra left and right
/// generators.
pub fn shape_for(d: &TypeDescriptor, spare: u32) -> Result<TensorShape> {
    let (l, r) = d.extent();
    TensorShape::new(l.max(d.k) + spare, r + spare, d.k)
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum CalcItem {
    I1_1,
    I2_1,
    I3_1,
    I4_1,
    I5_1,
    I5_2,
    I6_1,
    I6_2,
    I7_1,
    I7_2,
    I8_1,
    I8_2,
    I9_1,
    I10_1,
}

impl CalcItem {
    pub const ALL: [CalcItem; 14] = [
        CalcItem::I1_1,
        CalcItem::I2_1,
        CalcItem::I3_1,
        CalcItem::I4_1,
        CalcItem::I5_1,
        CalcItem::I5_2,
        CalcItem::I6_1,
        CalcItem::I6_2,
        CalcItem::I7_1,
        CalcItem::I7_2,
        CalcItem::I8_1,
        CalcItem::I8_2,
        CalcItem::I9_1,
        CalcItem::I10_1,
    ];

    pub fn name(self) -> &'static str {
        const NAMES: [&str; 14] =
            ["1.1", "2.1", "3.1", "4.1", "5.1", "5.2", "6.1", "6.2", "7.1", "7.2", "8.1", "8.2", "9.1", "10.1"];
        NAMES[self as usize]
    }

    /// The evaluation type the item is about.
    pub fn type_id(self) -> u8 {
        const TYPES: [u8; 14] = [1, 2, 3, 4, 5, 5, 6, 6, 7, 7, 8, 8, 9, 10];
        TYPES[self as usize]
    }

    /// Items of the form `a^{t-1} [a, z]`.
    pub fn uses_aux(self) -> bool {
        matches!(
            self,
            CalcItem::I2_1 | CalcItem::I4_1 | CalcItem::I5_2 | CalcItem::I6_2 | CalcItem::I7_2 | CalcItem::I8_2 | CalcItem::I10_1
        )
    }
}

impl fmt::Display for CalcItem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CalcItem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CalcItem::ALL
            .into_iter()
            .find(|i| i.name() == s.trim())
            .ok_or_else(|| Error::Invalid(format!("unknown calculation item '{s}'")))
    }
}

impl Serialize for CalcItem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct CalcParams {
    pub j: u32,
    pub n: u32,
    pub t: u32,
    pub k: u32,
    #[serde(skip)]
    pub alpha: Fe,
    /// Auxiliary `c ⊗ d`; `e_L ⊗ 1` with a fresh `L` when absent.
    #[serde(skip)]
    pub aux: Option<TensorBlade>,
}

impl CalcParams {
    pub fn new(j: u32, n: u32, t: u32, k: u32) -> Self {
        CalcParams { j, n, t, k, alpha: Fe::ZERO, aux: None }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CalcReport {
    pub item: CalcItem,
    pub params: CalcParams,
    pub aux: String,
    pub lhs: String,
    pub rhs: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
}

fn factorial(field: &FieldConfig, t: u32) -> Fe {
    (1..=t as i64).fold(field.one(), |acc, i| field.mul_int(acc, i))
}

fn single(field: &FieldConfig, shape: TensorShape, c: Fe, left: &[u32], right: &[u32], aux: TensorBlade) -> Result<TensorElement> {
    let (l, nl) = ordered(left)?;
    let (r, nr) = ordered(right)?;
    let blade = TensorBlade::new(l, r);
    let Some((b, na)) = blade.mul(aux) else {
        return Ok(TensorElement::zero(field, shape));
    };
    TensorElement::from_terms(field, shape, [(b, signed(field, c, nl ^ nr ^ na))])
}

/// Computes both sides of a calculation item exactly.
pub fn verify_calculus(field: &FieldConfig, item: CalcItem, params: CalcParams) -> Result<CalcReport> {
    let CalcParams { j, n, t, k, alpha, .. } = params;
    let d = TypeDescriptor::new(item.type_id(), j, n, t, k).with_alpha(alpha);
    d.validate()?;
    let (l_used, r_used) = d.extent();
    let aux = match params.aux {
        Some(z) => z,
        None => TensorBlade::new(Blade::generator(l_used.max(k) + 1), Blade::ONE),
    };
    if item.uses_aux() {
        if aux.left.len() % 2 == 0 {
            return Err(Error::Invalid(format!("auxiliary {aux} needs a left factor of odd length")));
        }
        let window = TensorBlade::new(
            Blade::from_mask(d.index_terms().iter().flat_map(|(a, _)| a.clone()).fold(0, |m, i| m | 1 << (i - 1))),
            Blade::from_mask(d.index_terms().iter().flat_map(|(_, b)| b.clone()).fold(0, |m, i| m | 1 << (i - 1))),
        );
        if !window.left.is_disjoint(aux.left) || !window.right.is_disjoint(aux.right) {
            return Err(Error::Invalid(format!("auxiliary {aux} meets the support of the type")));
        }
    }
    let shape = TensorShape::new(
        l_used.max(k).max(aux.left.max_index()),
        r_used.max(aux.right.max_index()),
        k,
    )?;
    let a = build_type(field, &d, shape)?;
    let z = TensorElement::from_terms(field, shape, [(aux, field.one())])?;
    let bracket = |x: &TensorElement| -> Result<TensorElement> { x.pow(t as u64 - 1).mul(&x.supercommutator(&z)?) };
    let h = j + k;
    let two = field.from_int(2);
    let fact = |s| factorial(field, s);
    let unit = TensorBlade::ONE;
    let zero = TensorElement::zero(field, shape);
    let range = |f: &dyn Fn(u32) -> Vec<u32>, from: u32, to: u32| -> Vec<u32> { (from..=to).flat_map(f).collect() };
    let pairs_right = range(&|i| vec![n + 2 * i - 1, n + 2 * i], 1, t);
    let plain_right = range(&|i| vec![n + i], 1, t);
    let mut skipped = None;
    let (lhs, rhs) = match item {
        CalcItem::I1_1 => (a.pow(t as u64), single(field, shape, fact(t), &range(&|i| vec![h + 2 * i - 1, h + 2 * i], 1, t), &pairs_right, unit)?),
        CalcItem::I2_1 => {
            let left: Vec<u32> = std::iter::once(h + 1).chain(range(&|i| vec![h + 2 * i, h + 2 * i + 1], 1, t - 1)).collect();
            (bracket(&a)?, single(field, shape, field.mul(two, fact(t - 1)), &left, &pairs_right, aux)?)
        }
        CalcItem::I3_1 => (a.pow(t as u64), single(field, shape, fact(t), &range(&|i| vec![i, h + i], 1, t), &pairs_right, unit)?),
        CalcItem::I4_1 => {
            let left: Vec<u32> = std::iter::once(1).chain(range(&|i| vec![i + 1, h + i], 1, t - 1)).collect();
            (bracket(&a)?, single(field, shape, field.mul(two, fact(t - 1)), &left, &pairs_right, aux)?)
        }
        CalcItem::I5_1 => (a.pow(t as u64), single(field, shape, fact(t), &range(&|i| vec![h + i], 1, t), &plain_right, unit)?),
        CalcItem::I5_2 => (bracket(&a)?, single(field, shape, field.mul(two, fact(t)), &range(&|i| vec![h + i], 1, t), &plain_right, aux)?),
        CalcItem::I6_1 => {
            let rhs = if t % 2 == 1 {
                single(field, shape, fact(t - 1), &range(&|i| vec![h + i], 1, t + 1), &plain_right, unit)?
            } else {
                zero.clone()
            };
            (a.pow(t as u64), rhs)
        }
        CalcItem::I6_2 => {
            let rhs = if t % 2 == 0 {
                single(field, shape, field.mul(two, fact(t - 1)), &range(&|i| vec![h + i], 1, t + 1), &plain_right, aux)?
            } else {
                zero.clone()
            };
            (bracket(&a)?, rhs)
        }
        CalcItem::I7_1 => (a.pow(t as u64), single(field, shape, fact(t), &range(&|i| vec![i], 1, t), &plain_right, unit)?),
        CalcItem::I7_2 => (bracket(&a)?, single(field, shape, field.mul(two, fact(t)), &range(&|i| vec![i], 1, t), &plain_right, aux)?),
        CalcItem::I8_1 | CalcItem::I8_2 => {
            let left: Vec<u32> = [1, k + 1 + j].into_iter().chain(range(&|i| vec![i + 1], 1, t - 1)).collect();
            if item == CalcItem::I8_1 {
                let rhs = if t % 2 == 1 { single(field, shape, fact(t - 1), &left, &plain_right, unit)? } else { zero.clone() };
                (a.pow(t as u64), rhs)
            } else {
                let rhs = if t % 2 == 0 {
                    single(field, shape, field.mul(two, fact(t - 1)), &left, &plain_right, aux)?
                } else {
                    zero.clone()
                };
                (bracket(&a)?, rhs)
            }
        }
        CalcItem::I9_1 | CalcItem::I10_1 => {
            let base = build_type(field, &TypeDescriptor { type_id: d.type_id - 8, ..d }, shape)?;
            let (top, rhs) = if item == CalcItem::I9_1 {
                (a.pow(t as u64), base.pow(t as u64))
            } else {
                (bracket(&a)?, bracket(&base)?)
            };
            let p = field.p();
            let in_domain = if item == CalcItem::I9_1 { t < p } else { t <= p };
            if !in_domain || top.is_zero() {
                skipped = Some(format!("outside domain: needs t {} p", if item == CalcItem::I9_1 { "<" } else { "<=" }));
                (top, rhs)
            } else {
                (top.g_sum()?, rhs)
            }
        }
    };
    let pass = skipped.is_none() && lhs == rhs;
    Ok(CalcReport {
        item,
        params,
        aux: aux.to_string(),
        lhs: lhs.to_string(),
        rhs: rhs.to_string(),
        pass,
        skipped,
    })
}

/// A suitable homomorphism for one SSE monomial: a type per variable on
/// pairwise disjoint windows.
#[derive(Clone, Debug, Serialize)]
pub struct SuitableAssignment {
    pub k: u32,
    pub shape: TensorShape,
    pub types: BTreeMap<GVariable, TypeDescriptor>,
}

/// The type prescribed for `z` in `u`.
pub fn suitable_type(u: &SseMonomial, z: GVariable) -> u8 {
    let t = u.deg_z(z);
    let in_end = u.in_end(z);
    let odd = t % 2 == 1;
    match z.kind {
        VarKind::V => 1 + in_end as u8,
        VarKind::W => 3 + in_end as u8,
        VarKind::X => {
            if odd != in_end {
                6
            } else {
                5
            }
        }
        VarKind::Y => {
            if odd != in_end {
                8
            } else {
                7
            }
        }
    }
}

pub fn build_suitable(u: &SseMonomial, p: u32, k: u32) -> Result<SuitableAssignment> {
    if !u.is_sse(p, k) || u.total_wy_degree() > k {
        return Err(Error::Invalid(format!("{u} is not an SSE monomial with at most {k} letters from W and Y")));
    }
    let (mut high, mut right, mut low) = (0, 0, 0);
    let mut types = BTreeMap::new();
    for z in u.variables() {
        let t = u.deg_z(z);
        let id = suitable_type(u, z);
        types.insert(z, TypeDescriptor::new(id, high, right, t, k).with_low(low));
        let (h, r, l) = TypeDescriptor::footprint(id, t);
        high += h;
        right += r;
        low += l;
    }
    let shape = TensorShape::new(k + high, right, k)?;
    Ok(SuitableAssignment { k, shape, types })
}

impl SuitableAssignment {
    pub fn phi(&self, field: &FieldConfig) -> Result<EvaluationMap> {
        let mut e = EvaluationMap::new(field, self.shape);
        for (&z, d) in &self.types {
            e.insert(z, build_type(field, d, self.shape)?)?;
        }
        Ok(e)
    }

    /// Union of the supports of all assigned values.
    pub fn supp_union(&self, field: &FieldConfig) -> Result<TensorBlade> {
        let (mut l, mut r) = (0u64, 0u64);
        for img in self.phi(field)?.images().values() {
            let (a, b) = img.supp_union();
            if a.mask() & l != 0 || b.mask() & r != 0 {
                return Err(Error::Invalid("assigned values overlap".into()));
            }
            l |= a.mask();
            r |= b.mask();
        }
        Ok(TensorBlade::new(Blade::from_mask(l), Blade::from_mask(r)))
    }

    pub fn describe(&self) -> BTreeMap<String, String> {
        self.types.iter().map(|(z, d)| (z.to_string(), d.to_string())).collect()
    }
}

#[derive(Clone, Debug)]
pub struct AdequacyReport {
    pub u: SseMonomial,
    pub assignment: BTreeMap<String, String>,
    pub value: TensorElement,
    /// `phi(u) = alpha a` when the value is a single term.
    pub single: Option<(Fe, TensorBlade)>,
    pub complete: bool,
}

impl AdequacyReport {
    pub fn pass(&self) -> bool {
        self.single.is_some() && self.complete
    }

    pub fn to_json(&self) -> serde_json::Value {
        let field = self.value.field();
        serde_json::json!({
            "schema": crate::verifier::SCHEMA,
            "u": self.u.to_string(),
            "assignment": self.assignment,
            "alpha": self.single.map(|(c, _)| field.element(c).to_string()),
            "blade": self.single.map(|(_, b)| b.to_string()),
            "complete": self.complete,
            "pass": self.pass(),
        })
    }
}

/// Evaluates `u` under `s` and checks that the value is `alpha a` with `a`
/// complete.
pub fn apply_suitable(field: &FieldConfig, u: &SseMonomial, s: &SuitableAssignment) -> Result<AdequacyReport> {
    let value = substitute(&u.to_polynomial(field), &s.phi(field)?)?;
    let single = value.single_term().filter(|(c, _)| !c.is_zero());
    let union = s.supp_union(field)?;
    let complete = single.is_some_and(|(_, b)| b == union);
    Ok(AdequacyReport { u: u.clone(), assignment: s.describe(), value, single, complete })
}

/// `psi(z) = phi(z)` off V and `alpha_z 1⊗1 + phi(z)` on V.
pub fn associated_hom(field: &FieldConfig, s: &SuitableAssignment, scalars: &BTreeMap<GVariable, Fe>) -> Result<EvaluationMap> {
    let phi = s.phi(field)?;
    let mut psi = EvaluationMap::new(field, s.shape);
    for (&z, img) in phi.images() {
        let mut img = img.clone();
        if z.kind == VarKind::V {
            let c = scalars.get(&z).copied().unwrap_or(Fe::ZERO);
            img = img.add(&TensorElement::scalar(field, s.shape, c))?;
        }
        psi.insert(z, img)?;
    }
    Ok(psi)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalarWitness {
    pub alphas: BTreeMap<GVariable, Fe>,
    pub value: Fe,
}

/// The first tuple, in lexicographic order of packed field elements, at
/// which `f` does not vanish.
pub fn ppoly_scalar_witness(f: &PPolynomial) -> Result<Option<ScalarWitness>> {
    let field = f.field();
    let vars = f.variables();
    let q = field.q() as u64;
    let total = q.checked_pow(vars.len() as u32).filter(|&n| n <= WITNESS_BUDGET);
    let Some(total) = total else {
        return Err(Error::TooLarge(WITNESS_BUDGET as usize));
    };
    let elements: Vec<Fe> = field.elements().collect();
    for code in 0..total {
        let mut digits = vec![Fe::ZERO; vars.len()];
        let mut c = code;
        for d in digits.iter_mut().rev() {
            *d = elements[(c % q) as usize];
            c /= q;
        }
        let alphas: BTreeMap<u32, Fe> = vars.iter().copied().zip(digits.iter().copied()).collect();
        let value = f.eval_scalar(|i| alphas.get(&i).copied().unwrap_or(Fe::ZERO));
        if !value.is_zero() {
            let alphas = alphas.into_iter().map(|(i, a)| (GVariable::v(i), a)).collect();
            return Ok(Some(ScalarWitness { alphas, value }));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug)]
pub struct GsumReport {
    pub witness: Option<ScalarWitness>,
    pub adequacy: AdequacyReport,
    /// `g-sum(psi(u))`.
    pub gsum: Option<TensorElement>,
    /// `g-sum(psi(f u)) = f(alpha) g-sum(psi(u))`.
    pub product_ok: bool,
}

impl GsumReport {
    pub fn pass(&self) -> bool {
        let Some(g) = &self.gsum else { return false };
        self.witness.is_some()
            && self.adequacy.pass()
            && self.product_ok
            && g.single_term().map(|(_, b)| b) == self.adequacy.single.map(|(_, b)| b)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let field = self.adequacy.value.field();
        serde_json::json!({
            "schema": crate::verifier::SCHEMA,
            "u": self.adequacy.u.to_string(),
            "assignment": self.adequacy.assignment,
            "scalars": self.witness.as_ref().map(|w| w.alphas.iter().map(|(v, &a)| (v.to_string(), field.element(a).to_string())).collect::<BTreeMap<_, _>>()),
            "f_value": self.witness.as_ref().map(|w| field.element(w.value).to_string()),
            "gsum": self.gsum.as_ref().map(ToString::to_string),
            "complete": self.adequacy.complete,
            "pass": self.pass(),
        })
    }
}

/// Finds scalars for `f`, then checks that `g-sum(psi(u))` is a nonzero
/// multiple of the complete blade of `phi(u)`.
pub fn gsum_check(u: &SseMonomial, f: &PPolynomial, k: u32) -> Result<GsumReport> {
    let field = f.field();
    let s = build_suitable(u, field.p(), k)?;
    let adequacy = apply_suitable(field, u, &s)?;
    let witness = ppoly_scalar_witness(f)?;
    let scalars = witness.as_ref().map(|w| w.alphas.clone()).unwrap_or_default();
    let mut psi = associated_hom(field, &s, &scalars)?;
    for v in f.variables() {
        let v = GVariable::v(v);
        if psi.get(v).is_none() {
            psi.insert(v, TensorElement::scalar(field, s.shape, scalars.get(&v).copied().unwrap_or(Fe::ZERO)))?;
        }
    }
    let up = u.to_polynomial(field);
    let value = substitute(&up, &psi)?;
    let gsum = (!value.is_zero()).then(|| value.g_sum()).transpose()?;
    let product_ok = match (&gsum, &witness) {
        (Some(g), Some(w)) => {
            let fu = substitute(&f.to_polynomial().mul(&up), &psi)?;
            !fu.is_zero() && fu.g_sum()? == g.scale(w.value)
        }
        _ => false,
    };
    Ok(GsumReport { witness, adequacy, gsum, product_ok })
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum SeparationCase {
    LowerDegree,
    NotMultihomogeneous,
    BegVW,
    ExpXY,
}

impl SeparationCase {
    pub fn label(self) -> &'static str {
        match self {
            SeparationCase::LowerDegree => "1",
            SeparationCase::NotMultihomogeneous => "2",
            SeparationCase::BegVW => "3.1",
            SeparationCase::ExpXY => "3.2.1",
        }
    }
}

impl Serialize for SeparationCase {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.label())
    }
}

fn multidegree(u: &SseMonomial) -> BTreeMap<GVariable, u32> {
    u.variables().into_iter().map(|z| (z, u.deg_z(z))).collect()
}

/// Which case of the argument separates `ui` from `u1`.
pub fn separation_case(u1: &SseMonomial, ui: &SseMonomial) -> Result<SeparationCase> {
    if ui.deg() != u1.deg() {
        Ok(SeparationCase::LowerDegree)
    } else if multidegree(ui) != multidegree(u1) {
        Ok(SeparationCase::NotMultihomogeneous)
    } else if ui.beg_vw() != u1.beg_vw() {
        Ok(SeparationCase::BegVW)
    } else if ui.beg_xy() != u1.beg_xy() {
        Ok(SeparationCase::ExpXY)
    } else {
        Err(Error::Invalid(format!("{ui} and {u1} have the same beginning")))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SeparationReport {
    pub u1: String,
    pub ui: String,
    pub case: SeparationCase,
    pub l_a: u32,
    /// Longest summand of `psi(ui)`, `None` when it vanishes.
    pub max_len: Option<u32>,
    pub pass: bool,
}

/// Evaluates `ui` under the homomorphism associated with `s` and checks that
/// all of its summands are shorter than the blade of `phi(u1)`.
pub fn separation_check(
    field: &FieldConfig,
    u1: &SseMonomial,
    ui: &SseMonomial,
    s: &SuitableAssignment,
    scalars: &BTreeMap<GVariable, Fe>,
) -> Result<SeparationReport> {
    if sse_compare(ui, u1) != std::cmp::Ordering::Less {
        return Err(Error::Invalid(format!("{ui} is not below {u1}")));
    }
    let universe: BTreeSet<GVariable> = u1.variables().into_iter().collect();
    if !ui.variables().iter().all(|z| universe.contains(z)) {
        return Err(Error::Invalid(format!("{ui} has variables outside {u1}")));
    }
    let case = separation_case(u1, ui)?;
    let a = apply_suitable(field, u1, s)?;
    let (_, blade) = a.single.ok_or_else(|| Error::Evaluation(format!("phi({u1}) is not a single blade")))?;
    let psi = associated_hom(field, s, scalars)?;
    let value = substitute(&ui.to_polynomial(field), &psi)?;
    let max_len = value.max_l().ok();
    let l_a = blade.len();
    Ok(SeparationReport {
        u1: u1.to_string(),
        ui: ui.to_string(),
        case,
        l_a,
        max_len,
        pass: max_len.is_none_or(|m| m < l_a),
    })
}

/// A random SSE monomial in the variables of `vs` of degree at most
/// `max_deg`, with at most `k` letters from W and Y and no bracketed `x` or
/// `y` of exponent `p - 1` or more.
pub fn random_sse_monomial(rng: &mut impl Rng, vs: VariableSet, max_deg: u32, p: u32, k: u32) -> SseMonomial {
    let vars = vs.variables();
    loop {
        let mut beg = Vec::new();
        let mut end = Vec::new();
        for &z in &vars {
            if rng.gen_bool(0.5) {
                continue;
            }
            let cap = match z.kind {
                VarKind::V | VarKind::W => p - 1,
                VarKind::X | VarKind::Y => p,
            };
            let e = rng.gen_range(0..=cap);
            let bracketed = rng.gen_bool(0.3) && !(matches!(z.kind, VarKind::X | VarKind::Y) && e + 1 >= p);
            beg.push((z, e));
            if bracketed {
                end.push(z);
            }
        }
        if end.len() % 2 == 1 {
            end.pop();
        }
        let u = SseMonomial::new(beg, end);
        if u.deg() <= max_deg && u.is_reduced(p, k) {
            return u;
        }
    }
}
