//! Finite enumeration of SSE monomials.

use super::normal::SseMonomial;
use crate::error::{Error, Result};
use crate::free::{GVariable, VarKind, VariableSet};

/// Upper bound on the number of partial monomials visited.
pub const ENUMERATION_LIMIT: usize = 5_000_000;

struct Search<'a> {
    vars: &'a [GVariable],
    p: u32,
    k: u32,
    bound: u32,
    visited: usize,
    beg: Vec<(GVariable, u32)>,
    end: Vec<GVariable>,
    out: Vec<SseMonomial>,
}

impl Search<'_> {
    fn run(&mut self, i: usize, deg: u32, wy: u32) -> Result<()> {
        self.visited += 1;
        if self.visited > ENUMERATION_LIMIT {
            return Err(Error::TooLarge(ENUMERATION_LIMIT));
        }
        let Some(&v) = self.vars.get(i) else {
            if self.end.len().is_multiple_of(2) {
                self.out.push(SseMonomial::new(self.beg.iter().copied(), self.end.clone()));
            }
            return Ok(());
        };
        let (cap, counts_wy) = match v.kind {
            VarKind::V => (self.p - 1, false),
            VarKind::W => (self.p - 1, true),
            VarKind::X => (self.p, false),
            VarKind::Y => (self.p, true),
        };
        for e in 0..=cap {
            let wy_e = if counts_wy { wy + e } else { wy };
            if deg + e > self.bound || wy_e > self.k {
                break;
            }
            self.beg.push((v, e));
            self.run(i + 1, deg + e, wy_e)?;
            let may_bracket = !(e == self.p && matches!(v.kind, VarKind::X | VarKind::Y));
            if may_bracket && deg + e < self.bound {
                self.end.push(v);
                self.run(i + 1, deg + e + 1, wy_e)?;
                self.end.pop();
            }
            self.beg.pop();
        }
        Ok(())
    }
}

/// All SSE monomials in the variables of `vs` of degree at most
/// `degree_bound` (unbounded when `None`), sorted increasingly in SSE order.
pub fn sse_enumerate(vs: VariableSet, degree_bound: Option<u32>, p: u32, k: u32) -> Result<Vec<SseMonomial>> {
    let vars = vs.variables();
    let mut search = Search {
        vars: &vars,
        p,
        k,
        bound: degree_bound.unwrap_or(u32::MAX),
        visited: 0,
        beg: Vec::new(),
        end: Vec::new(),
        out: Vec::new(),
    };
    search.run(0, 0, 0)?;
    let mut out = search.out;
    super::order::sort_ascending(&mut out);
    Ok(out)
}

/// Upper bound on the dimension of the relatively free algebra in
/// `Z_{m,m,m,m}`: `q^m` p-monomials times the number of SSE monomials.
pub fn sse_dimension(m: u32, p: u32, q: u32, k: u32) -> Result<u128> {
    let count = sse_enumerate(VariableSet::new(m, m, m, m), None, p, k)?.len() as u128;
    Ok((q as u128).pow(m) * count)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(v: &[SseMonomial]) -> Vec<String> {
        v.iter().map(ToString::to_string).collect()
    }

    #[test]
    fn single_w_variable() {
        let out = sse_enumerate(VariableSet::new(0, 1, 0, 0), None, 3, 1).unwrap();
        assert_eq!(names(&out), ["1", "w1"]);
        let out = sse_enumerate(VariableSet::new(0, 1, 0, 0), None, 3, 2).unwrap();
        assert_eq!(names(&out), ["1", "w1", "w1^2"]);
    }

    #[test]
    fn wy_cap_excludes_y_products() {
        let out = sse_enumerate(VariableSet::new(0, 0, 0, 2), Some(2), 3, 1).unwrap();
        assert!(!names(&out).contains(&"y1*y2".to_string()));
        assert!(names(&out).contains(&"[y1,y2]".to_string()));
        assert!(out.iter().all(|m| m.is_sse(3, 1) && m.deg() <= 2));
    }

    #[test]
    fn guard_trips_on_large_sets() {
        let err = sse_enumerate(VariableSet::new(6, 6, 6, 6), None, 5, 6).unwrap_err();
        assert!(matches!(err, Error::TooLarge(_)));
    }
}
