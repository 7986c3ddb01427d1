//! The generating identities and the derived rewriting rules, each as a
//! `lhs -> rhs` pair that can be certified by sampling.

use serde::Serialize;

use crate::error::Result;
use crate::field::FieldConfig;
use crate::free::{GPolynomial, GVariable, VarKind};
use crate::parallel::Execution;
use crate::verifier::{check_identity_with, SamplerConfig, VerdictReport};

#[derive(Clone, Debug, Serialize)]
pub struct Rule {
    pub name: String,
    pub family: &'static str,
    #[serde(serialize_with = "display")]
    pub lhs: GPolynomial,
    #[serde(serialize_with = "display")]
    pub rhs: GPolynomial,
    /// Inactive rules are kept for reference but never applied.
    pub active: bool,
}

fn display<S: serde::Serializer>(p: &GPolynomial, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(p)
}

impl Rule {
    pub fn identity(&self) -> GPolynomial {
        self.lhs.sub(&self.rhs)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RuleSet {
    pub k: u32,
    pub rules: Vec<Rule>,
}

fn kind_sign(a: VarKind, b: VarKind) -> i64 {
    if a.z2_parity() & b.z2_parity() == 1 {
        -1
    } else {
        1
    }
}

impl RuleSet {
    pub fn standard(field: &FieldConfig, k: u32) -> Result<Self> {
        let (p, q) = (field.p(), field.q());
        let z = |kind, i| GPolynomial::var(field, GVariable::new(kind, i));
        let zero = GPolynomial::zero(field);
        let kinds = VarKind::ALL;
        let mut rules = Vec::new();
        let mut push = |name: String, family, lhs: GPolynomial, rhs: GPolynomial, active| {
            rules.push(Rule { name, family, lhs, rhs, active })
        };
        push("w1^p".into(), "power", z(VarKind::W, 1).pow(p), zero.clone(), true);
        for &c in &kinds {
            let zc = z(c, 2);
            let lhs = z(VarKind::X, 1).pow(p).mul(&zc).mul(&z(VarKind::W, 3));
            push(format!("x1^p*{}2*w3", c.letter()), "split", lhs, zero.clone(), false);
            let lhs = z(VarKind::Y, 1).pow(p).mul(&zc).mul(&z(VarKind::Y, 3));
            push(format!("y1^p*{}2*y3", c.letter()), "split", lhs, zero.clone(), false);
            for a in [VarKind::X, VarKind::Y] {
                let lhs = z(a, 1).pow(p - 1).mul(&z(a, 1).graded_commutator(&zc));
                push(format!("{}1^(p-1)*[{0}1,{}2]", a.letter(), c.letter()), "bracket-power", lhs, zero.clone(), true);
            }
        }
        for &a in &kinds {
            for &b in &kinds {
                for &c in &kinds {
                    let lhs = GPolynomial::left_normed(&[z(a, 1), z(b, 2), z(c, 3)])?;
                    let name = format!("[{}1,{}2,{}3]", a.letter(), b.letter(), c.letter());
                    push(name, "centrality", lhs, zero.clone(), true);
                }
            }
        }
        for mask in 0..(1u32 << (k + 1)) {
            let mut w = GPolynomial::one(field);
            for i in 0..=k {
                w = w.mul(&z(if mask & (1 << i) == 0 { VarKind::W } else { VarKind::Y }, i + 1));
            }
            push(w.to_string(), "wy-product", w, zero.clone(), true);
        }
        push("v1^(pq)".into(), "frobenius", z(VarKind::V, 1).pow(p * q), z(VarKind::V, 1).pow(p), true);
        push("x1^(p+1)".into(), "power", z(VarKind::X, 1).pow(p + 1), zero.clone(), true);
        push("y1^(p+1)".into(), "power", z(VarKind::Y, 1).pow(p + 1), zero.clone(), true);
        for &a in &kinds {
            for &b in &kinds {
                let (za, zb) = (z(a, 1), z(b, 2));
                let sign = field.from_int(kind_sign(a, b));
                let swap = za.mul(&zb);
                let rhs = zb.mul(&za).scale(sign).add(&za.graded_commutator(&zb));
                push(format!("{}1*{}2", a.letter(), b.letter()), "swap", swap, rhs, true);
                let lhs = zb.graded_commutator(&za);
                let rhs = za.graded_commutator(&zb).scale(field.neg(sign));
                push(format!("[{}2,{}1]", b.letter(), a.letter()), "bracket-sort", lhs, rhs, true);
            }
            let za = z(a, 1);
            let (lhs, rhs) = if a.z2_parity() == 0 {
                (za.graded_commutator(&za), zero.clone())
            } else {
                (za.graded_commutator(&za), za.pow(2).scale(field.from_int(2)))
            };
            push(format!("[{0}1,{0}1]", a.letter()), "bracket-duplicate", lhs, rhs, true);
        }
        Ok(RuleSet { k, rules })
    }

    pub fn active(&self) -> impl Iterator<Item = &Rule> {
        self.rules.iter().filter(|r| r.active)
    }

    /// Samples `lhs - rhs` of every rule, active or not.
    pub fn certify(&self, cfg: &SamplerConfig, exec: Execution) -> Result<Vec<(&Rule, VerdictReport)>> {
        let cfg = SamplerConfig { k: self.k, ..*cfg };
        self.rules.iter().map(|r| Ok((r, check_identity_with(&r.identity(), &cfg, exec)?))).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::free::{substitute, EvaluationMap};
    use crate::tensor::{TensorElement, TensorShape};

    #[test]
    fn active_rules_are_sound() {
        let f = FieldConfig::new(3, 1).unwrap();
        let rs = RuleSet::standard(&f, 2).unwrap();
        assert_eq!(rs.rules.iter().filter(|r| r.family == "centrality").count(), 64);
        let cfg = SamplerConfig { trials: 100, ..SamplerConfig::default() };
        for (r, rep) in rs.certify(&cfg, Execution::default()).unwrap() {
            if r.active {
                assert!(!rep.is_counterexample(), "{} falsified: {:?}", r.name, rep.witness);
            }
        }
    }

    #[test]
    fn split_rule_with_w_fails_on_a_constructed_map() {
        let f = FieldConfig::new(3, 1).unwrap();
        let rs = RuleSet::standard(&f, 2).unwrap();
        let r = rs.rules.iter().find(|r| r.name == "x1^p*v2*w3").unwrap();
        assert!(!r.active);
        let shape = TensorShape::new(10, 10, 2).unwrap();
        let mut e = EvaluationMap::new(&f, shape);
        for (v, img) in [("x1", "e3e4|e1 + e5|e2 + e6|e3"), ("v2", "1|1"), ("w3", "e1|1")] {
            e.insert(v.parse().unwrap(), TensorElement::parse(&f, shape, img).unwrap()).unwrap();
        }
        let value = substitute(&r.identity(), &e).unwrap();
        assert_eq!(value.to_string(), "-e1e3e4e5e6|e1e2e3");
    }
}
