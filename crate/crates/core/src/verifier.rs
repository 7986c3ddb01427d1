//! Sampled-substitution verification and falsification of graded identities.
//!
//! A "no-counterexample" verdict is evidence at the sampled truncation, not a
//! proof.

use std::collections::BTreeMap;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Fe, FieldConfig};
use crate::free::{substitute, EvaluationMap, GPolynomial, GVariable, VarKind};
use crate::grassmann::{Blade, Multivector};
use crate::parallel::{first_hit, map_all, trial_rng, Execution};
use crate::tensor::{Bidegree, TensorBlade, TensorElement, TensorShape};

pub const SCHEMA: &str = "1";

/// Longest sampled blade component; short blades keep products nonzero.
const MAX_PIECE: u32 = 3;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct SamplerConfig {
    pub k: u32,
    pub trunc_left: u32,
    pub trunc_right: u32,
    /// Maximal number of basis blades in a sampled element.
    pub richness: usize,
    pub trials: usize,
    pub seed: u64,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig { k: 2, trunc_left: 10, trunc_right: 10, richness: 4, trials: 500, seed: 1 }
    }
}

impl SamplerConfig {
    pub fn shape(&self) -> Result<TensorShape> {
        if self.richness == 0 || self.trials == 0 {
            return Err(Error::Invalid("richness and trials must be positive".into()));
        }
        TensorShape::new(self.trunc_left, self.trunc_right, self.k)
    }
}

fn random_nonzero(field: &FieldConfig, rng: &mut impl Rng) -> Fe {
    Fe(rng.gen_range(1..field.q()))
}

/// `count` distinct random indices from `lo..=hi`.
fn random_subset(rng: &mut impl Rng, lo: u32, hi: u32, count: u32) -> u64 {
    let mut mask = 0u64;
    let mut chosen = 0;
    while chosen < count {
        let i = rng.gen_range(lo..=hi);
        if mask & (1 << (i - 1)) == 0 {
            mask |= 1 << (i - 1);
            chosen += 1;
        }
    }
    mask
}

/// A length drawn uniformly from `0..=max` with the given parity.
fn random_length(rng: &mut impl Rng, max: u32, parity: u32) -> Option<u32> {
    let choices: Vec<u32> = (0..=max).filter(|l| l % 2 == parity).collect();
    (!choices.is_empty()).then(|| choices[rng.gen_range(0..choices.len())])
}

/// A random sum of at most `richness` basis blades of bidegree `d`.
pub fn sample_homogeneous(
    field: &FieldConfig,
    d: Bidegree,
    cfg: &SamplerConfig,
    rng: &mut impl Rng,
) -> Result<TensorElement> {
    let shape = cfg.shape()?;
    let high = shape.n_left - shape.k;
    let low_max = shape.k.min(MAX_PIECE);
    let no_blades = || Error::Sampling(format!("no basis blades of bidegree {d} at {shape:?}"));
    if (d.0 == 1 && low_max == 0) || (d.1 == 1 && shape.n_right == 0) {
        return Err(no_blades());
    }
    let n = rng.gen_range(1..=cfg.richness);
    let mut out = TensorElement::zero(field, shape);
    for _ in 0..n {
        let low = random_length(rng, low_max, d.0 as u32).ok_or_else(no_blades)?;
        let hi = rng.gen_range(0..=high.min(MAX_PIECE));
        let r = random_length(rng, shape.n_right.min(MAX_PIECE), d.1 as u32).ok_or_else(no_blades)?;
        let left = random_subset(rng, 1, shape.k.max(1), low)
            | if high > 0 { random_subset(rng, shape.k + 1, shape.n_left, hi) } else { 0 };
        let right = if shape.n_right > 0 { random_subset(rng, 1, shape.n_right, r) } else { 0 };
        let b = TensorBlade::new(Blade::from_mask(left), Blade::from_mask(right));
        out.add_term(b, random_nonzero(field, rng));
    }
    Ok(out)
}

/// A random graded substitution for `vars`.
pub fn sample_map(
    field: &FieldConfig,
    cfg: &SamplerConfig,
    vars: &[GVariable],
    rng: &mut impl Rng,
) -> Result<EvaluationMap> {
    let mut e = EvaluationMap::new(field, cfg.shape()?);
    for &v in vars {
        e.insert(v, sample_homogeneous(field, v.bidegree(), cfg, rng)?)?;
    }
    Ok(e)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    NoCounterexample,
    Counterexample,
}

#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    pub trial: usize,
    pub assignment: BTreeMap<String, String>,
    pub value: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerdictReport {
    pub schema: &'static str,
    pub poly: String,
    pub p: u32,
    pub q: u32,
    pub k: u32,
    pub trunc: [u32; 2],
    pub trials: usize,
    pub seed: u64,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    pub note: String,
    #[serde(skip)]
    pub witness_map: Option<EvaluationMap>,
}

impl VerdictReport {
    pub fn is_counterexample(&self) -> bool {
        self.verdict == Verdict::Counterexample
    }

    /// Re-evaluates `f` at the stored witness; true if it is nonzero.
    pub fn recheck(&self, f: &GPolynomial) -> Result<bool> {
        match &self.witness_map {
            Some(e) => Ok(!substitute(f, e)?.is_zero()),
            None => Ok(false),
        }
    }
}

fn caveat(trials: usize, cfg: &SamplerConfig) -> String {
    format!(
        "sampled {trials} substitutions at truncation ({}, {}), not a proof",
        cfg.trunc_left, cfg.trunc_right
    )
}

pub fn check_identity(f: &GPolynomial, cfg: &SamplerConfig) -> Result<VerdictReport> {
    check_identity_with(f, cfg, Execution::default())
}

/// Evaluates `f` on `cfg.trials` sampled substitutions and reports the first
/// nonzero value.
pub fn check_identity_with(f: &GPolynomial, cfg: &SamplerConfig, exec: Execution) -> Result<VerdictReport> {
    let field = f.field();
    cfg.shape()?;
    let vars: Vec<GVariable> = f.variables().into_iter().collect();
    let hit = first_hit(cfg.trials, exec, |trial| {
        let mut rng = trial_rng(cfg.seed, trial as u64);
        let e = sample_map(field, cfg, &vars, &mut rng)?;
        let value = substitute(f, &e)?;
        Ok((!value.is_zero()).then_some((e, value)))
    })?;
    let trials = hit.as_ref().map_or(cfg.trials, |(i, _)| i + 1);
    let mut report = VerdictReport {
        schema: SCHEMA,
        poly: f.to_string(),
        p: field.p(),
        q: field.q(),
        k: cfg.k,
        trunc: [cfg.trunc_left, cfg.trunc_right],
        trials,
        seed: cfg.seed,
        verdict: Verdict::NoCounterexample,
        witness: None,
        note: caveat(trials, cfg),
        witness_map: None,
    };
    if let Some((trial, (e, value))) = hit {
        report.verdict = Verdict::Counterexample;
        report.witness = Some(Witness {
            trial,
            assignment: e.images().iter().map(|(v, x)| (v.to_string(), x.to_string())).collect(),
            value: value.to_string(),
        });
        report.witness_map = Some(e);
    }
    Ok(report)
}

#[derive(Clone, Debug, Serialize)]
pub struct CorpusEntry {
    pub family: String,
    #[serde(serialize_with = "serialize_display")]
    pub poly: GPolynomial,
}

fn serialize_display<S: serde::Serializer>(p: &GPolynomial, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(p)
}

fn var(field: &FieldConfig, kind: VarKind, i: u32) -> GPolynomial {
    GPolynomial::var(field, GVariable::new(kind, i))
}

/// The generating identities instantiated over all kind combinations, at most
/// `breadth` instances per family.
pub fn corpus_builtin(field: &FieldConfig, k: u32, breadth: usize) -> Result<Vec<CorpusEntry>> {
    if breadth == 0 {
        return Err(Error::Invalid("corpus breadth must be positive".into()));
    }
    let (p, q) = (field.p(), field.q());
    let v = |kind, i| var(field, kind, i);
    let mut families: Vec<(String, Vec<GPolynomial>)> = Vec::new();
    families.push(("(w1)^p".into(), vec![v(VarKind::W, 1).pow(p)]));
    let kinds = VarKind::ALL;
    families.push((
        "(x1)^p z2 w3".into(),
        kinds.iter().map(|&z| v(VarKind::X, 1).pow(p).mul(&v(z, 2)).mul(&v(VarKind::W, 3))).collect(),
    ));
    families.push((
        "(y1)^p z2 y3".into(),
        kinds.iter().map(|&z| v(VarKind::Y, 1).pow(p).mul(&v(z, 2)).mul(&v(VarKind::Y, 3))).collect(),
    ));
    for (name, kind) in [("(x1)^(p-1) [x1,z2]", VarKind::X), ("(y1)^(p-1) [y1,z2]", VarKind::Y)] {
        families.push((
            name.into(),
            kinds
                .iter()
                .map(|&z| v(kind, 1).pow(p - 1).mul(&v(kind, 1).graded_commutator(&v(z, 2))))
                .collect(),
        ));
    }
    let mut triples = Vec::new();
    for &a in &kinds {
        for &b in &kinds {
            for &c in &kinds {
                triples.push(GPolynomial::left_normed(&[v(a, 1), v(b, 2), v(c, 3)])?);
            }
        }
    }
    families.push(("[z1,z2,z3]".into(), triples));
    let mut products = Vec::new();
    for mask in 0..(1u32 << (k + 1)) {
        let mut w = GPolynomial::one(field);
        for i in 0..=k {
            let kind = if mask & (1 << i) == 0 { VarKind::W } else { VarKind::Y };
            w = w.mul(&v(kind, i + 1));
        }
        products.push(w);
    }
    families.push(("z1...z(k+1) in W and Y".into(), products));
    families.push(("v1^(pq) - v1^p".into(), vec![v(VarKind::V, 1).pow(p * q).sub(&v(VarKind::V, 1).pow(p))]));
    families.push(("(x1)^(p+1)".into(), vec![v(VarKind::X, 1).pow(p + 1)]));
    families.push(("(y1)^(p+1)".into(), vec![v(VarKind::Y, 1).pow(p + 1)]));
    Ok(families
        .into_iter()
        .flat_map(|(family, polys)| {
            polys.into_iter().take(breadth).map(move |poly| CorpusEntry { family: family.clone(), poly })
        })
        .collect())
}

/// Checks every corpus entry; entries run one after another, trials in
/// parallel.
pub fn check_corpus(entries: &[CorpusEntry], cfg: &SamplerConfig, exec: Execution) -> Result<Vec<VerdictReport>> {
    entries.iter().map(|e| check_identity_with(&e.poly, cfg, exec)).collect()
}

/// Reads a corpus file: one polynomial per line, `#` comments, blank lines
/// ignored.
pub fn parse_corpus_file(field: &FieldConfig, text: &str) -> Result<Vec<CorpusEntry>> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let poly = GPolynomial::parse(field, line).map_err(|e| match e {
            Error::Parse { pos, msg } => Error::Parse { pos, msg: format!("line {}: {msg}", n + 1) },
            other => other,
        })?;
        out.push(CorpusEntry { family: format!("line {}", n + 1), poly });
    }
    Ok(out)
}

fn random_multivector(field: &FieldConfig, n: u32, richness: usize, with_scalar: bool, rng: &mut impl Rng) -> Multivector {
    let mut terms = Vec::new();
    for _ in 0..rng.gen_range(1..=richness) {
        let len = rng.gen_range(if with_scalar { 0 } else { 1 }..=MAX_PIECE.min(n));
        terms.push((Blade::from_mask(random_subset(rng, 1, n, len)), random_nonzero(field, rng)));
    }
    Multivector::from_terms(field, n, terms).expect("blades respect the truncation")
}

/// Single-factor power laws of the Grassmann algebra, plus the non-identity
/// `t^2` as a control.
pub fn check_grassmann_props(field: &FieldConfig, cfg: &SamplerConfig) -> Result<Vec<VerdictReport>> {
    let n = cfg.trunc_left;
    if n == 0 {
        return Err(Error::Invalid("truncation must be positive".into()));
    }
    let (p, q) = (field.p() as u64, field.q() as u64);
    type Law = fn(&FieldConfig, &Multivector, u64, u64) -> Multivector;
    let laws: [(&str, bool, Law); 4] = [
        ("t^p on E*", false, |_, t, p, _| t.pow(p)),
        ("(alpha + b)^p - alpha^p on alpha + E*", true, |f, t, p, _| {
            let alpha = t.scalar_part();
            t.pow(p).sub(&Multivector::scalar(f, t.truncation(), f.pow(alpha, p))).unwrap()
        }),
        ("t^(pq) - t^p on E", true, |_, t, p, q| t.pow(p * q).sub(&t.pow(p)).unwrap()),
        ("t^2 on E", true, |_, t, _, _| t.pow(2)),
    ];
    let reports = map_all(&laws, Execution::Sequential, |&(name, with_scalar, law)| {
        let hit = first_hit(cfg.trials, Execution::default(), |trial| {
            let mut rng = trial_rng(cfg.seed, trial as u64);
            let t = random_multivector(field, n, cfg.richness.max(1), with_scalar, &mut rng);
            let value = law(field, &t, p, q);
            Ok((!value.is_zero()).then(|| (t.to_string(), value.to_string())))
        })?;
        let trials = hit.as_ref().map_or(cfg.trials, |(i, _)| i + 1);
        Ok(VerdictReport {
            schema: SCHEMA,
            poly: name.to_string(),
            p: field.p(),
            q: field.q(),
            k: 0,
            trunc: [n, 0],
            trials,
            seed: cfg.seed,
            verdict: if hit.is_some() { Verdict::Counterexample } else { Verdict::NoCounterexample },
            witness: hit.map(|(trial, (t, value))| Witness {
                trial,
                assignment: BTreeMap::from([("t".to_string(), t)]),
                value,
            }),
            note: format!("sampled {trials} elements of E_{n}, not a proof"),
            witness_map: None,
        })
    });
    reports.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn gf3() -> FieldConfig {
        FieldConfig::new(3, 1).unwrap()
    }

    fn poly(s: &str) -> GPolynomial {
        GPolynomial::parse(&gf3(), s).unwrap()
    }

    #[test]
    fn sampling_respects_bidegree_and_seed() {
        let f = gf3();
        let cfg = SamplerConfig::default();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            for d in Bidegree::ALL {
                let x = sample_homogeneous(&f, d, &cfg, &mut rng).unwrap();
                assert!(x.is_homogeneous_of(d));
                assert!(x.len() <= cfg.richness);
            }
        }
        let a = sample_homogeneous(&f, Bidegree(1, 1), &cfg, &mut trial_rng(9, 0)).unwrap();
        let b = sample_homogeneous(&f, Bidegree(1, 1), &cfg, &mut trial_rng(9, 0)).unwrap();
        assert_eq!(a, b);
        let k0 = SamplerConfig { k: 0, ..cfg };
        assert!(matches!(
            sample_homogeneous(&f, Bidegree(1, 0), &k0, &mut rng),
            Err(Error::Sampling(_))
        ));
    }

    #[test]
    fn identity_examples() {
        let cfg = SamplerConfig::default();
        assert!(!check_identity(&poly("w1^3"), &cfg).unwrap().is_counterexample());
        assert!(!check_identity(&poly("v1^9 - v1^3"), &cfg).unwrap().is_counterexample());
        let r = check_identity(&poly("[w1,w2]"), &cfg).unwrap();
        assert!(r.is_counterexample());
        assert!(r.recheck(&poly("[w1,w2]")).unwrap());
    }

    #[test]
    fn reports_are_deterministic_across_strategies() {
        let cfg = SamplerConfig { trials: 50, ..SamplerConfig::default() };
        let f = poly("x1*y1 - y1*x1");
        let a = check_identity_with(&f, &cfg, Execution::Sequential).unwrap();
        let b = check_identity_with(&f, &cfg, Execution::default()).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }

    #[test]
    fn corpus_shape() {
        let f = gf3();
        let c = corpus_builtin(&f, 2, usize::MAX).unwrap();
        assert_eq!(c.iter().filter(|e| e.family == "[z1,z2,z3]").count(), 64);
        assert_eq!(c.iter().filter(|e| e.family.starts_with("z1...")).count(), 8);
        assert!(c.iter().any(|e| e.poly == poly("w1*w2*y3")));
        assert!(c.iter().any(|e| e.poly == poly("x1^2*[x1,v2]")));
        assert_eq!(corpus_builtin(&f, 2, 1).unwrap().len(), 10);
        assert!(corpus_builtin(&f, 2, 0).is_err());
    }

    #[test]
    fn corpus_files() {
        let f = gf3();
        let c = parse_corpus_file(&f, "# comment\n\nw1^3\n[x1,x2,x3]  # triple\n").unwrap();
        assert_eq!(c.len(), 2);
        assert!(parse_corpus_file(&f, "v1*(\n").is_err());
    }

    #[test]
    fn grassmann_power_laws() {
        let cfg = SamplerConfig { trials: 200, ..SamplerConfig::default() };
        let r = check_grassmann_props(&gf3(), &cfg).unwrap();
        let verdicts: Vec<bool> = r.iter().map(VerdictReport::is_counterexample).collect();
        assert_eq!(verdicts, [false, false, false, true]);
        assert!(r[3].trials <= 10);
    }
}
