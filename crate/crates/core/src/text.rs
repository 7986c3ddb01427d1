//! Shared text helpers for the `coeff*basis + ...` syntax of multivectors and
//! tensor elements.

use crate::error::{Error, Result};
use crate::field::{Fe, FieldConfig};

/// Parses a coefficient: a (possibly signless) integer reduced mod p, or a
/// coefficient list `[c0,c1,...]`.
pub(crate) fn parse_coeff(field: &FieldConfig, s: &str, pos: usize) -> Result<Fe> {
    let s = s.trim();
    if let Some(inner) = s.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
        let mut coeffs = Vec::new();
        for part in inner.split(',') {
            let c: u32 = part.trim().parse().map_err(|_| Error::Parse {
                pos,
                msg: format!("bad coefficient entry {part:?}"),
            })?;
            coeffs.push(c);
        }
        return field
            .from_coeffs(&coeffs)
            .map_err(|e| Error::Parse { pos, msg: e.to_string() });
    }
    let n: i64 = s.parse().map_err(|_| Error::Parse {
        pos,
        msg: format!("bad coefficient {s:?}"),
    })?;
    Ok(field.from_int(n))
}

/// Splits `a + b - c` into signed terms at bracket depth zero.
fn split_terms(s: &str) -> Result<Vec<(bool, usize, &str)>> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0usize;
    let mut negative = false;
    let bytes = s.as_bytes();
    for (i, &c) in bytes.iter().enumerate() {
        match c {
            b'[' => depth += 1,
            b']' => depth -= 1,
            b'+' | b'-' if depth == 0 => {
                let piece = s[start..i].trim();
                if !piece.is_empty() {
                    out.push((negative, start, piece));
                } else if i > 0 && !s[..i].trim().is_empty() {
                    return Err(Error::Parse { pos: i, msg: "empty term".into() });
                }
                negative = c == b'-';
                start = i + 1;
            }
            _ => {}
        }
        if depth < 0 {
            return Err(Error::Parse { pos: i, msg: "unbalanced ']'".into() });
        }
    }
    let piece = s[start..].trim();
    if piece.is_empty() {
        return Err(Error::Parse { pos: s.len(), msg: "expected a term".into() });
    }
    out.push((negative, start, piece));
    Ok(out)
}

/// Parses `coeff*basis` terms. `unit` is the basis element used for bare
/// coefficients.
pub(crate) fn parse_linear<T: Copy>(
    field: &FieldConfig,
    s: &str,
    unit: T,
    parse_basis: impl Fn(&str, usize) -> Result<T>,
) -> Result<Vec<(T, Fe)>> {
    if s.trim() == "0" {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for (negative, pos, term) in split_terms(s)? {
        let (coeff, basis) = match term.split_once('*') {
            Some((c, b)) => (parse_coeff(field, c, pos)?, parse_basis(b.trim(), pos)?),
            None if term.starts_with('e') || term.contains('|') => {
                (field.one(), parse_basis(term, pos)?)
            }
            None => (parse_coeff(field, term, pos)?, unit),
        };
        let coeff = if negative { field.neg(coeff) } else { coeff };
        out.push((basis, coeff));
    }
    Ok(out)
}

/// Formats `coeff*basis` terms with signed prime-field coefficients.
pub(crate) fn format_linear<'a>(
    field: &FieldConfig,
    terms: impl Iterator<Item = (String, Fe, bool)> + 'a,
) -> String {
    let mut out = String::new();
    for (basis, c, is_unit) in terms {
        let (neg, mag) = field.signed_repr(c);
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if is_unit {
            out.push_str(&mag);
        } else {
            if mag != "1" {
                out.push_str(&mag);
                out.push('*');
            }
            out.push_str(&basis);
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}
