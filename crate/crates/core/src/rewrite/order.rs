//! The SSE order and leading terms.

use std::cmp::Ordering;
use std::sync::atomic::{AtomicUsize, Ordering as AtomicOrdering};

use serde::Serialize;

use super::normal::{NormalForm, SseMonomial};
use crate::error::{Error, Result};
use crate::free::{GVariable, VarKind};

/// Finite view of `ext(A)`: entries past the end read as 0.
pub fn ext(a: &[u32], i: usize) -> u32 {
    a.get(i).copied().unwrap_or(0)
}

/// `ext(A) ≡_{(0,1)} ext(A')`: all entrywise differences are 0 or 1.
pub fn equiv01(a: &[u32], b: &[u32]) -> bool {
    (0..a.len().max(b.len())).all(|i| ext(a, i).abs_diff(ext(b, i)) <= 1)
}

/// `ext(A) <_{≡(0,1)} ext(A')`: at the first index where the parities differ,
/// `a_i` is odd.
pub fn less01(a: &[u32], b: &[u32]) -> Result<bool> {
    if !equiv01(a, b) {
        return Err(Error::Invalid(format!("{a:?} and {b:?} are not (0,1)-equivalent")));
    }
    for i in 0..a.len().max(b.len()) {
        let (x, y) = (ext(a, i), ext(b, i));
        if x % 2 != y % 2 {
            return Ok(x % 2 == 1);
        }
    }
    Ok(false)
}

/// Which clause of the order decided a comparison.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum CompareCase {
    Degree,
    BegVW,
    BegXY,
    ExpXY,
    End,
    Equal,
    Fallback,
}

static FALLBACK_EVENTS: AtomicUsize = AtomicUsize::new(0);

/// Number of comparisons so far that no clause of the order decided.
pub fn fallback_events() -> usize {
    FALLBACK_EVENTS.load(AtomicOrdering::Relaxed)
}

/// `beg` exponents of both monomials over the variables of the given kinds
/// occurring in either `beg` (absent variables have exponent 0).
fn aligned_exp(m1: &SseMonomial, m2: &SseMonomial, kinds: &[VarKind]) -> (Vec<u32>, Vec<u32>) {
    let mut universe: Vec<GVariable> =
        m1.beg.keys().chain(m2.beg.keys()).filter(|v| kinds.contains(&v.kind)).copied().collect();
    universe.sort_unstable();
    universe.dedup();
    (
        universe.iter().map(|&v| m1.beg_exp(v)).collect(),
        universe.iter().map(|&v| m2.beg_exp(v)).collect(),
    )
}

/// `exp_XY` of both monomials, aligned over the X and Y variables occurring in
/// either `beg`.
pub fn aligned_exp_xy(m1: &SseMonomial, m2: &SseMonomial) -> (Vec<u32>, Vec<u32>) {
    aligned_exp(m1, m2, &[VarKind::X, VarKind::Y])
}

/// Compares two SSE monomials and reports the deciding clause.
///
/// `beg_VW` is compared through its exponent tuple in variable order. When
/// the `exp_XY` tuples are (0,1)-equivalent, the monomial holding the odd
/// entry at the first parity difference is the greater one.
pub fn sse_compare_case(m1: &SseMonomial, m2: &SseMonomial) -> (Ordering, CompareCase) {
    let d = m1.deg().cmp(&m2.deg());
    if d != Ordering::Equal {
        return (d, CompareCase::Degree);
    }
    let (vw1, vw2) = aligned_exp(m1, m2, &[VarKind::V, VarKind::W]);
    let vw = vw1.cmp(&vw2);
    if vw != Ordering::Equal {
        return (vw, CompareCase::BegVW);
    }
    let (xy1, xy2) = (m1.beg_xy(), m2.beg_xy());
    let (a1, a2) = aligned_exp_xy(m1, m2);
    if !equiv01(&a1, &a2) {
        return (xy1.cmp(&xy2), CompareCase::BegXY);
    }
    if xy1 != xy2 {
        if less01(&a2, &a1).unwrap_or(false) {
            return (Ordering::Less, CompareCase::ExpXY);
        }
        if less01(&a1, &a2).unwrap_or(false) {
            return (Ordering::Greater, CompareCase::ExpXY);
        }
        FALLBACK_EVENTS.fetch_add(1, AtomicOrdering::Relaxed);
        return (m1.cmp(m2), CompareCase::Fallback);
    }
    match m1.end.cmp(&m2.end) {
        Ordering::Equal => (Ordering::Equal, CompareCase::Equal),
        o => (o, CompareCase::End),
    }
}

pub fn sse_compare(m1: &SseMonomial, m2: &SseMonomial) -> Ordering {
    sse_compare_case(m1, m2).0
}

/// Stable merge sort by [`sse_compare`]; unlike the standard sorts it stays
/// well defined if the comparison is not transitive.
pub fn sort_ascending(v: &mut Vec<SseMonomial>) {
    if v.len() < 2 {
        return;
    }
    let right = v.split_off(v.len() / 2);
    let mut left = std::mem::take(v);
    let mut right = right;
    sort_ascending(&mut left);
    sort_ascending(&mut right);
    let mut r = right.into_iter().peekable();
    for a in left {
        while let Some(b) = r.next_if(|b| sse_compare(b, &a) == Ordering::Less) {
            v.push(b);
        }
        v.push(a);
    }
    v.extend(r);
}

/// `LT(f)`: the greatest `u_i` of a normal form.
pub fn leading_term(nf: &NormalForm) -> Result<&SseMonomial> {
    nf.summands()
        .iter()
        .map(|(_, u)| u)
        .max_by(|a, b| sse_compare(a, b))
        .ok_or_else(|| Error::Invalid("normal form has no SSE summands".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldConfig;
    use crate::free::GPolynomial;
    use crate::rewrite::normal::{sse_reduce, ReduceConfig};
    use proptest::prelude::*;

    fn m(s: &str) -> SseMonomial {
        s.parse().unwrap()
    }

    #[test]
    fn ext_relations() {
        assert!(equiv01(&[1, 2], &[2, 2]));
        assert!(less01(&[1, 2], &[2, 2]).unwrap());
        assert!(!equiv01(&[2, 2], &[2, 4]));
        assert!(less01(&[2, 2], &[2, 4]).is_err());
        assert!(equiv01(&[1], &[1, 1, 0]));
        assert!(!less01(&[1], &[1, 1]).unwrap());
        assert!(less01(&[1, 1], &[1]).unwrap());
    }

    #[test]
    fn compare_examples() {
        assert_eq!(sse_compare(&m("v1"), &m("v1*v2")), Ordering::Less);
        assert_eq!(sse_compare_case(&m("x1^2*x2"), &m("x1*x2^2")), (Ordering::Less, CompareCase::ExpXY));
        assert_eq!(sse_compare_case(&m("[x1,y2]"), &m("x1*y2")), (Ordering::Less, CompareCase::ExpXY));
        assert_eq!(sse_compare_case(&m("v1*v2*w1*w2*y1"), &m("w1*w2*y1*[v1,v2]")), (Ordering::Greater, CompareCase::BegVW));
        assert_eq!(sse_compare(&m("x1^2*[v1,y1]"), &m("x1^2*[v1,y1]")), Ordering::Equal);
        assert_eq!(sse_compare_case(&m("[v1,v2]"), &m("v1*v2")), (Ordering::Less, CompareCase::BegVW));
        assert_eq!(sse_compare_case(&m("x1^3"), &m("x1*x2^2")).1, CompareCase::BegXY);
        assert_eq!(sse_compare_case(&m("v1*[x1,y1]"), &m("v1*[x1,y2]")), (Ordering::Less, CompareCase::End));
    }

    #[test]
    fn leading_terms() {
        let f = FieldConfig::new(3, 1).unwrap();
        let nf = |s| sse_reduce(&GPolynomial::parse(&f, s).unwrap(), ReduceConfig::new(2)).unwrap();
        assert_eq!(leading_term(&nf("2*v1")).unwrap().to_string(), "v1");
        assert_eq!(leading_term(&nf("v1 + v1*v2")).unwrap().to_string(), "v1*v2");
        assert_eq!(leading_term(&nf("v2*v1")).unwrap().to_string(), "v1*v2");
        assert!(leading_term(&nf("v1^3")).is_err());
    }

    fn arb_monomial() -> impl Strategy<Value = SseMonomial> {
        const VARS: [&str; 8] = ["v1", "v2", "w1", "w2", "x1", "x2", "y1", "y2"];
        (prop::collection::vec(0u32..4, 8), prop::collection::vec(any::<bool>(), 8)).prop_map(
            |(exps, ends)| {
                let vars: Vec<GVariable> = VARS.iter().map(|s| s.parse().unwrap()).collect();
                let mut end: Vec<GVariable> =
                    vars.iter().zip(&ends).filter(|(_, &b)| b).map(|(&v, _)| v).collect();
                if end.len() % 2 == 1 {
                    end.pop();
                }
                SseMonomial::new(vars.iter().copied().zip(exps), end)
            },
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]
        #[test]
        fn antisymmetric_and_total(a in arb_monomial(), b in arb_monomial()) {
            let (ab, case) = sse_compare_case(&a, &b);
            prop_assert_ne!(case, CompareCase::Fallback);
            prop_assert_eq!(ab, sse_compare(&b, &a).reverse());
            prop_assert_eq!(ab == Ordering::Equal, a == b);
        }

        #[test]
        fn transitive(a in arb_monomial(), b in arb_monomial(), c in arb_monomial()) {
            let v = [&a, &b, &c];
            for i in 0..3 {
                for j in 0..3 {
                    for l in 0..3 {
                        if sse_compare(v[i], v[j]) == Ordering::Less
                            && sse_compare(v[j], v[l]) == Ordering::Less
                        {
                            prop_assert_eq!(sse_compare(v[i], v[l]), Ordering::Less);
                        }
                    }
                }
            }
        }
    }
}
