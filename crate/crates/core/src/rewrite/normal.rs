//! SSE monomials, p-polynomials and the reduction `f = f_0 + sum f_i u_i`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::order::sort_ascending;
use super::straighten::{straighten, DEFAULT_MAX_STEPS};
use crate::error::{Error, Result};
use crate::field::{Fe, FieldConfig};
use crate::free::{GPolynomial, GVariable, GWord, VarKind};

/// A monomial `v_{i_1}^{e_1} ... v_{i_n}^{e_n}` stored as sorted
/// `(index, exponent)` pairs with positive exponents.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct PMonomial(pub Vec<(u32, u32)>);

impl PMonomial {
    pub fn one() -> Self {
        PMonomial(Vec::new())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponent(&self, index: u32) -> u32 {
        self.0.iter().find(|(i, _)| *i == index).map_or(0, |&(_, e)| e)
    }

    pub fn to_word(&self) -> GWord {
        GWord(
            self.0
                .iter()
                .flat_map(|&(i, e)| std::iter::repeat_n(GVariable::v(i), e as usize))
                .collect(),
        )
    }
}

impl fmt::Display for PMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.to_word(), f)
    }
}

/// A p-polynomial: every exponent is a multiple of p below pq.
#[derive(Clone, PartialEq, Eq)]
pub struct PPolynomial {
    field: FieldConfig,
    terms: BTreeMap<PMonomial, Fe>,
}

impl PPolynomial {
    pub fn zero(field: &FieldConfig) -> Self {
        PPolynomial { field: field.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(field: &FieldConfig, c: Fe) -> Self {
        let mut out = Self::zero(field);
        out.add_term(PMonomial::one(), c);
        out
    }

    /// Validates a V-only polynomial with exponents `0 mod p` and `< pq`.
    pub fn from_polynomial(f: &GPolynomial) -> Result<Self> {
        let field = f.field();
        let (p, pq) = (field.p(), field.p() * field.q());
        let mut out = Self::zero(field);
        for (w, &c) in f.terms() {
            let mut mono = Vec::new();
            for (v, e) in w.multidegree() {
                if v.kind != VarKind::V {
                    return Err(Error::Invalid(format!("{v} is not a V-variable")));
                }
                if e % p != 0 || e >= pq {
                    return Err(Error::Invalid(format!(
                        "exponent {e} of {v} is not a multiple of {p} below {pq}"
                    )));
                }
                mono.push((v.index, e));
            }
            out.add_term(PMonomial(mono), c);
        }
        Ok(out)
    }

    pub fn field(&self) -> &FieldConfig {
        &self.field
    }

    pub fn terms(&self) -> &BTreeMap<PMonomial, Fe> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: PMonomial, c: Fe) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m.clone()).or_insert(Fe::ZERO);
        *slot = self.field.add(*slot, c);
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    /// V-indices occurring in the polynomial.
    pub fn variables(&self) -> Vec<u32> {
        let mut out: Vec<u32> = self.terms.keys().flat_map(|m| m.0.iter().map(|&(i, _)| i)).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn to_polynomial(&self) -> GPolynomial {
        let mut out = GPolynomial::zero(&self.field);
        for (m, &c) in &self.terms {
            out.add_term(m.to_word(), c);
        }
        out
    }

    /// Evaluates at scalars `v_i = alpha(i)`.
    pub fn eval_scalar(&self, alpha: impl Fn(u32) -> Fe) -> Fe {
        let f = &self.field;
        self.terms.iter().fold(f.zero(), |acc, (m, &c)| {
            let term = m.0.iter().fold(c, |t, &(i, e)| f.mul(t, f.pow(alpha(i), e as u64)));
            f.add(acc, term)
        })
    }
}

impl fmt::Display for PPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.to_polynomial(), f)
    }
}

impl fmt::Debug for PPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `h_1 h_2 h_3 h_4 [z_1,z_2] ... [z_{2n-1},z_{2n}]`: `beg` holds the sorted
/// variable powers, `end` the bracket entries.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct SseMonomial {
    pub beg: BTreeMap<GVariable, u32>,
    pub end: Vec<GVariable>,
}

impl SseMonomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn new(beg: impl IntoIterator<Item = (GVariable, u32)>, end: Vec<GVariable>) -> Self {
        SseMonomial { beg: beg.into_iter().filter(|&(_, e)| e > 0).collect(), end }
    }

    pub fn is_one(&self) -> bool {
        self.beg.is_empty() && self.end.is_empty()
    }

    pub fn beg_exp(&self, z: GVariable) -> u32 {
        self.beg.get(&z).copied().unwrap_or(0)
    }

    pub fn in_end(&self, z: GVariable) -> bool {
        self.end.contains(&z)
    }

    pub fn deg_z(&self, z: GVariable) -> u32 {
        self.beg_exp(z) + self.in_end(z) as u32
    }

    pub fn deg(&self) -> u32 {
        self.beg.values().sum::<u32>() + self.end.len() as u32
    }

    /// All variables of the monomial in increasing order.
    pub fn variables(&self) -> Vec<GVariable> {
        let mut out: Vec<GVariable> = self.beg.keys().copied().chain(self.end.iter().copied()).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    fn word_of(&self, kinds: &[VarKind]) -> Vec<GVariable> {
        self.beg
            .iter()
            .filter(|(v, _)| kinds.contains(&v.kind))
            .flat_map(|(&v, &e)| std::iter::repeat_n(v, e as usize))
            .collect()
    }

    pub fn beg_word(&self) -> Vec<GVariable> {
        self.word_of(&VarKind::ALL)
    }

    pub fn beg_vw(&self) -> Vec<GVariable> {
        self.word_of(&[VarKind::V, VarKind::W])
    }

    pub fn beg_xy(&self) -> Vec<GVariable> {
        self.word_of(&[VarKind::X, VarKind::Y])
    }

    /// Count of W and Y letters in `beg`.
    pub fn beg_wy_degree(&self) -> u32 {
        self.beg
            .iter()
            .filter(|(v, _)| matches!(v.kind, VarKind::W | VarKind::Y))
            .map(|(_, &e)| e)
            .sum()
    }

    /// Count of W and Y letters in `beg` and `end` together.
    pub fn total_wy_degree(&self) -> u32 {
        self.beg_wy_degree()
            + self.end.iter().filter(|v| matches!(v.kind, VarKind::W | VarKind::Y)).count() as u32
    }

    /// Violations of the SE shape and the three SSE side conditions.
    pub fn sse_violations(&self, p: u32, k: u32) -> Vec<String> {
        let mut out = Vec::new();
        for (&v, &e) in &self.beg {
            let cap = match v.kind {
                VarKind::V | VarKind::W => p - 1,
                VarKind::X | VarKind::Y => p,
            };
            if e > cap {
                out.push(format!("exponent {e} of {v} exceeds {cap}"));
            }
            if e == p && matches!(v.kind, VarKind::X | VarKind::Y) && self.in_end(v) {
                out.push(format!("{v}^{p} with {v} in a bracket"));
            }
        }
        if !self.end.len().is_multiple_of(2) {
            out.push("odd number of bracket entries".into());
        }
        if !self.end.windows(2).all(|w| w[0] < w[1]) {
            out.push("bracket entries not strictly increasing".into());
        }
        if self.beg_wy_degree() > k {
            out.push(format!("W and Y degree of beg exceeds k = {k}"));
        }
        out
    }

    pub fn is_sse(&self, p: u32, k: u32) -> bool {
        self.sse_violations(p, k).is_empty()
    }

    /// SSE monomials that are not killed by the identities
    /// `x^{p-1}[x,z]`, `y^{p-1}[y,z]` and `z_1 ... z_{k+1}` (with the brackets
    /// counted).
    pub fn is_reduced(&self, p: u32, k: u32) -> bool {
        self.is_sse(p, k)
            && self.total_wy_degree() <= k
            && self.beg.iter().all(|(&v, &e)| {
                !(matches!(v.kind, VarKind::X | VarKind::Y) && e + 1 >= p && self.in_end(v))
            })
    }

    pub fn to_polynomial(&self, field: &FieldConfig) -> GPolynomial {
        let mut out = GPolynomial::monomial(field, field.one(), GWord(self.beg_word()));
        for pair in self.end.chunks(2) {
            let a = GPolynomial::var(field, pair[0]);
            let b = GPolynomial::var(field, pair[1]);
            out = out.mul(&a.graded_commutator(&b));
        }
        out
    }
}

impl fmt::Display for SseMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self
            .beg
            .iter()
            .map(|(v, &e)| if e == 1 { v.to_string() } else { format!("{v}^{e}") })
            .collect();
        parts.extend(self.end.chunks(2).map(|c| match c {
            [a, b] => format!("[{a},{b}]"),
            _ => format!("[{}]", c[0]),
        }));
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join("*"))
        }
    }
}

impl fmt::Debug for SseMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for SseMonomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Parses `v1^2*x1*[v2,y1]`. Letters must already be sorted and bracket
/// entries strictly increasing; the result is not checked against SSE bounds.
impl FromStr for SseMonomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut out = SseMonomial::one();
        if s == "1" {
            return Ok(out);
        }
        let mut last: Option<GVariable> = None;
        for (pos, part) in split_factors(s)? {
            if let Some(inner) = part.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
                let (a, b) = inner
                    .split_once(',')
                    .ok_or_else(|| Error::Parse { pos, msg: format!("bad bracket {part:?}") })?;
                out.end.push(a.trim().parse()?);
                out.end.push(b.trim().parse()?);
                continue;
            }
            if !out.end.is_empty() {
                return Err(Error::Parse { pos, msg: "letters must precede brackets".into() });
            }
            let (v, e) = match part.split_once('^') {
                Some((v, e)) => (
                    v.trim().parse::<GVariable>()?,
                    e.trim()
                        .parse::<u32>()
                        .map_err(|_| Error::Parse { pos, msg: format!("bad exponent in {part:?}") })?,
                ),
                None => (part.parse::<GVariable>()?, 1),
            };
            if last.is_some_and(|l| l >= v) {
                return Err(Error::Parse { pos, msg: format!("{v} out of order") });
            }
            last = Some(v);
            if e > 0 {
                out.beg.insert(v, e);
            }
        }
        if !out.end.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::Parse { pos: 0, msg: "bracket entries must increase".into() });
        }
        Ok(out)
    }
}

fn split_factors(s: &str) -> Result<Vec<(usize, &str)>> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '[' => depth += 1,
            ']' => depth -= 1,
            '*' if depth == 0 => {
                out.push((start, s[start..i].trim()));
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push((start, s[start..].trim()));
    if depth != 0 || out.iter().any(|(_, p)| p.is_empty()) {
        return Err(Error::Parse { pos: start, msg: format!("malformed monomial {s:?}") });
    }
    Ok(out)
}

/// Splits an exponent into its p-part (reduced with `v^{pq} = v^p`) and its
/// residue in `[0, p-1]`.
pub fn split_exponent(e: u32, p: u32, q: u32) -> (u32, u32) {
    let mut pp = e - e % p;
    let pq = p * q;
    while pp >= pq {
        pp -= pq - p;
    }
    (pp, e % p)
}

/// Splits a V-word `v_1^{a_1} ... v_n^{a_n}` (any letter order) into a
/// p-monomial and residual exponents in `[0, p-1]`.
pub fn extract_p_part(m: &GWord, p: u32, q: u32) -> Result<(PMonomial, BTreeMap<GVariable, u32>)> {
    let mut pmono = Vec::new();
    let mut residual = BTreeMap::new();
    for (v, e) in m.multidegree() {
        if v.kind != VarKind::V {
            return Err(Error::Invalid(format!("{v} is not a V-variable")));
        }
        let (pp, r) = split_exponent(e, p, q);
        if pp > 0 {
            pmono.push((v.index, pp));
        }
        if r > 0 {
            residual.insert(v, r);
        }
    }
    Ok((PMonomial(pmono), residual))
}

/// `f_0 + sum f_i u_i` with nonzero p-polynomials `f_i` and pairwise distinct
/// SSE monomials `u_i`, sorted descending in SSE order.
#[derive(Clone, PartialEq, Eq)]
pub struct NormalForm {
    field: FieldConfig,
    f0: PPolynomial,
    summands: Vec<(PPolynomial, SseMonomial)>,
}

impl NormalForm {
    pub fn from_parts(field: &FieldConfig, parts: BTreeMap<SseMonomial, PPolynomial>) -> Self {
        let mut f0 = PPolynomial::zero(field);
        let mut summands = Vec::new();
        for (u, f) in parts {
            if f.is_zero() {
                continue;
            }
            if u.is_one() {
                f0 = f;
            } else {
                summands.push((f, u));
            }
        }
        let mut order: Vec<SseMonomial> = summands.iter().map(|(_, u)| u.clone()).collect();
        sort_ascending(&mut order);
        let mut by_key: BTreeMap<SseMonomial, PPolynomial> =
            summands.into_iter().map(|(f, u)| (u, f)).collect();
        let summands = order
            .into_iter()
            .rev()
            .map(|u| {
                let f = by_key.remove(&u).unwrap();
                (f, u)
            })
            .collect();
        NormalForm { field: field.clone(), f0, summands }
    }

    pub fn field(&self) -> &FieldConfig {
        &self.field
    }

    pub fn f0(&self) -> &PPolynomial {
        &self.f0
    }

    pub fn summands(&self) -> &[(PPolynomial, SseMonomial)] {
        &self.summands
    }

    pub fn is_zero(&self) -> bool {
        self.f0.is_zero() && self.summands.is_empty()
    }

    pub fn expand(&self) -> GPolynomial {
        let mut out = self.f0.to_polynomial();
        for (f, u) in &self.summands {
            out = out.add(&f.to_polynomial().mul(&u.to_polynomial(&self.field)));
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let summands: Vec<_> = self
            .summands
            .iter()
            .map(|(f, u)| serde_json::json!({ "coeff": f.to_string(), "monomial": u.to_string() }))
            .collect();
        serde_json::json!({
            "f0": self.f0.to_string(),
            "summands": summands,
            "text": self.to_string(),
        })
    }
}

impl fmt::Display for NormalForm {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let field = &self.field;
        let mut pieces: Vec<(bool, String)> = Vec::new();
        for (m, &c) in self.f0.terms() {
            let (neg, mag) = field.signed_repr(c);
            let body = match (m.is_one(), mag.as_str()) {
                (true, _) => mag,
                (false, "1") => m.to_string(),
                (false, _) => format!("{mag}*{m}"),
            };
            pieces.push((neg, body));
        }
        for (f, u) in &self.summands {
            if f.terms().len() == 1 {
                let (m, &c) = f.terms().iter().next().unwrap();
                let (neg, mag) = field.signed_repr(c);
                let mut factors = Vec::new();
                if mag != "1" {
                    factors.push(mag);
                }
                if !m.is_one() {
                    factors.push(m.to_string());
                }
                factors.push(u.to_string());
                pieces.push((neg, factors.join("*")));
            } else {
                pieces.push((false, format!("({f})*{u}")));
            }
        }
        if pieces.is_empty() {
            return out.write_str("0");
        }
        for (i, (neg, body)) in pieces.iter().enumerate() {
            match (i, neg) {
                (0, true) => write!(out, "-{body}")?,
                (0, false) => write!(out, "{body}")?,
                (_, true) => write!(out, " - {body}")?,
                (_, false) => write!(out, " + {body}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Parameters of a reduction.
#[derive(Clone, Copy, Debug)]
pub struct ReduceConfig {
    pub k: u32,
    pub max_steps: usize,
}

impl ReduceConfig {
    pub fn new(k: u32) -> Self {
        ReduceConfig { k, max_steps: DEFAULT_MAX_STEPS }
    }
}

/// Reduces `f` to `f_0 + sum f_i u_i` modulo the generating identities.
///
/// After straightening, a term is dropped when it has more than k letters
/// from W and Y (brackets included), `w^p`, `x^{p+1}` or `y^{p+1}`, or
/// `x^{p-1}`/`y^{p-1}` together with the same variable inside a bracket. V
/// exponents are split into p-parts, which are reduced with `v^{pq} = v^p`.
pub fn sse_reduce(f: &GPolynomial, cfg: ReduceConfig) -> Result<NormalForm> {
    let field = f.field();
    let (p, q) = (field.p(), field.q());
    let straight = straighten(f, cfg.max_steps)?;
    let mut parts: BTreeMap<SseMonomial, PPolynomial> = BTreeMap::new();
    'terms: for (t, &c) in straight.terms() {
        let wy_end = t.end.iter().filter(|v| matches!(v.kind, VarKind::W | VarKind::Y)).count() as u32;
        let wy_beg = t.letters.iter().filter(|v| matches!(v.kind, VarKind::W | VarKind::Y)).count() as u32;
        if wy_beg + wy_end > cfg.k {
            continue;
        }
        let mut pmono = Vec::new();
        let mut beg = BTreeMap::new();
        for (v, e) in GWord(t.letters.clone()).multidegree() {
            match v.kind {
                VarKind::V => {
                    let (pp, r) = split_exponent(e, p, q);
                    if pp > 0 {
                        pmono.push((v.index, pp));
                    }
                    if r > 0 {
                        beg.insert(v, r);
                    }
                    continue;
                }
                VarKind::W if e >= p => continue 'terms,
                VarKind::X | VarKind::Y if e > p || (e + 1 >= p && t.end.contains(&v)) => {
                    continue 'terms
                }
                _ => {}
            }
            beg.insert(v, e);
        }
        let u = SseMonomial { beg, end: t.end.clone() };
        debug_assert!(u.is_reduced(p, cfg.k), "{u}");
        parts.entry(u).or_insert_with(|| PPolynomial::zero(field)).add_term(PMonomial(pmono), c);
    }
    Ok(NormalForm::from_parts(field, parts))
}
