//! Straightening modulo the ideal of triple supercommutators.
//!
//! Modulo that ideal every bracket `[a,b]` is supercentral, and a product of
//! brackets is graded-alternating in its entries: swapping two adjacent
//! entries `x, y` multiplies it by `-(-1)^{|x||y|}`. Every word is therefore a
//! combination of terms `z_{i_1} ... z_{i_r} [z_{j_1}, z_{j_2}] ... [z_{j_{t-1}}, z_{j_t}]`
//! with sorted letters and strictly increasing bracket entries.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Fe, FieldConfig};
use crate::free::{GPolynomial, GVariable, GWord};

pub const DEFAULT_MAX_STEPS: usize = 1_000_000;

/// A straightened term: sorted letters followed by the bracket product
/// `[end_0, end_1][end_2, end_3]...` with strictly increasing entries.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct StraightTerm {
    pub letters: Vec<GVariable>,
    pub end: Vec<GVariable>,
}

impl StraightTerm {
    pub fn to_polynomial(&self, field: &FieldConfig) -> GPolynomial {
        let mut out = GPolynomial::monomial(field, field.one(), GWord(self.letters.clone()));
        for pair in self.end.chunks(2) {
            let a = GPolynomial::var(field, pair[0]);
            let b = GPolynomial::var(field, pair[1]);
            out = out.mul(&a.graded_commutator(&b));
        }
        out
    }
}

impl fmt::Display for StraightTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = GWord(self.letters.clone())
            .runs()
            .into_iter()
            .map(|(v, e)| if e == 1 { v.to_string() } else { format!("{v}^{e}") })
            .collect();
        parts.extend(self.end.chunks(2).map(|c| format!("[{},{}]", c[0], c[1])));
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join("*"))
        }
    }
}

/// A linear combination of straightened terms.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Straightened {
    field: FieldConfig,
    terms: BTreeMap<StraightTerm, Fe>,
}

impl Straightened {
    pub fn field(&self) -> &FieldConfig {
        &self.field
    }

    pub fn terms(&self) -> &BTreeMap<StraightTerm, Fe> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Expands brackets back into words.
    pub fn to_polynomial(&self) -> GPolynomial {
        let mut out = GPolynomial::zero(&self.field);
        for (t, &c) in &self.terms {
            out = out.add(&t.to_polynomial(&self.field).scale(c));
        }
        out
    }
}

impl fmt::Display for Straightened {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by_key(|(t, _)| (t.letters.len() + t.end.len(), t.end.len()));
        let s = crate::text::format_linear(
            &self.field,
            terms.into_iter().map(|(t, &c)| (t.to_string(), c, t.letters.is_empty() && t.end.is_empty())),
        );
        f.write_str(&s)
    }
}

struct Work {
    coeff: Fe,
    letters: Vec<GVariable>,
    end: Vec<GVariable>,
}

fn odd(v: GVariable) -> bool {
    v.z2_parity() == 1
}

enum EndShape {
    Zero,
    Sorted { negate: bool },
    /// Two equal odd entries: `[x,x] = 2x^2`, removed from `end`.
    Square { negate: bool, x: GVariable },
}

/// Sorts bracket entries using graded alternation.
fn normalize_end(end: &mut [GVariable]) -> EndShape {
    let mut negate = false;
    for i in 1..end.len() {
        let mut j = i;
        while j > 0 && end[j - 1] > end[j] {
            // -(-1)^{|x||y|}: a sign change unless both entries are odd
            if !(odd(end[j - 1]) && odd(end[j])) {
                negate = !negate;
            }
            end.swap(j - 1, j);
            j -= 1;
        }
    }
    for i in 1..end.len() {
        if end[i - 1] == end[i] {
            if !odd(end[i]) {
                return EndShape::Zero;
            }
            return EndShape::Square { negate, x: end[i] };
        }
    }
    EndShape::Sorted { negate }
}

/// Rewrites `f` modulo triple supercommutators into straightened terms.
pub fn straighten(f: &GPolynomial, max_steps: usize) -> Result<Straightened> {
    let field = f.field().clone();
    let minus = |c: Fe| field.neg(c);
    let mut stack: Vec<Work> = f
        .terms()
        .iter()
        .map(|(w, &c)| Work { coeff: c, letters: w.0.clone(), end: Vec::new() })
        .collect();
    let mut out: BTreeMap<StraightTerm, Fe> = BTreeMap::new();
    let mut steps = 0usize;
    while let Some(mut w) = stack.pop() {
        steps += 1;
        if steps > max_steps {
            let term = StraightTerm { letters: w.letters, end: w.end };
            return Err(Error::StepBudget { budget: max_steps, term: term.to_string() });
        }
        if let Some(i) = (1..w.letters.len()).find(|&i| w.letters[i - 1] > w.letters[i]) {
            let (a, b) = (w.letters[i - 1], w.letters[i]);
            // ab = (-1)^{|a||b|} ba + [a,b]; the bracket then moves to the end
            let after: u8 = w.letters[i + 1..].iter().map(|v| v.z2_parity()).sum::<u8>() & 1;
            let bracket_negate = (a.z2_parity() ^ b.z2_parity()) & after == 1;
            let mut rest = w.letters.clone();
            rest.drain(i - 1..=i);
            let mut end = vec![a, b];
            end.extend_from_slice(&w.end);
            stack.push(Work {
                coeff: if bracket_negate { minus(w.coeff) } else { w.coeff },
                letters: rest,
                end,
            });
            w.letters.swap(i - 1, i);
            if odd(a) && odd(b) {
                w.coeff = minus(w.coeff);
            }
            stack.push(w);
            continue;
        }
        match normalize_end(&mut w.end) {
            EndShape::Zero => {}
            EndShape::Sorted { negate } => {
                let c = if negate { minus(w.coeff) } else { w.coeff };
                let key = StraightTerm { letters: w.letters, end: w.end };
                let slot = out.entry(key).or_insert(Fe::ZERO);
                *slot = field.add(*slot, c);
            }
            EndShape::Square { negate, x } => {
                // move the pair to the front (no sign), then [x,x] = 2x^2 is central
                let pos = w.end.iter().position(|&v| v == x).unwrap();
                w.end.drain(pos..pos + 2);
                let at = w.letters.partition_point(|&v| v <= x);
                w.letters.splice(at..at, [x, x]);
                let c = field.mul_int(w.coeff, 2);
                w.coeff = if negate { minus(c) } else { c };
                stack.push(w);
            }
        }
    }
    out.retain(|_, c| !c.is_zero());
    Ok(Straightened { field, terms: out })
}
