//! Acceptance criteria 1 to 10. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use grassmann_pi::field::{Fe, FieldConfig};
use grassmann_pi::free::{substitute, GPolynomial, GVariable, GWord, VarKind, VariableSet};
use grassmann_pi::parallel::{trial_rng, Execution};
use grassmann_pi::rewrite::{
    fallback_events, sse_compare, sse_dimension, sse_enumerate, sse_reduce, PMonomial, PPolynomial, ReduceConfig,
    SseMonomial,
};
use grassmann_pi::verifier::{check_corpus, check_grassmann_props, check_identity, corpus_builtin, sample_map, SamplerConfig};
use grassmann_pi::witness::{
    apply_suitable, build_suitable, gsum_check, ppoly_scalar_witness, random_sse_monomial, separation_check,
    verify_calculus, CalcItem, CalcParams, SeparationCase,
};
use rand::seq::SliceRandom;
use rand::Rng;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn corpus_soundness() -> Outcome {
    let mut notes = Vec::new();
    let mut failures = Vec::new();
    for (m, trials, limit) in [(1, 500, Some(Duration::from_secs(120))), (2, 100, None)] {
        let field = FieldConfig::new(3, m).map_err(|e| e.to_string())?;
        let cfg = SamplerConfig { k: 2, trunc_left: 10, trunc_right: 10, richness: 4, trials, seed: 2024 };
        let start = Instant::now();
        let corpus = corpus_builtin(&field, 2, usize::MAX).map_err(|e| e.to_string())?;
        let reports = check_corpus(&corpus, &cfg, Execution::default()).map_err(|e| e.to_string())?;
        let elapsed = start.elapsed();
        let mut bad = Vec::new();
        for (entry, r) in corpus.iter().zip(&reports) {
            if r.is_counterexample() {
                let confirmed = r.recheck(&entry.poly).unwrap_or(false);
                bad.push(format!("{} [{}]", r.poly, if confirmed { "rechecked" } else { "NOT rechecked" }));
            }
        }
        if !bad.is_empty() {
            failures.push(format!("q={}: counterexamples to {}", field.q(), bad.join(", ")));
        }
        if limit.is_some_and(|l| elapsed > l) {
            failures.push(format!("q={} took {elapsed:.1?}", field.q()));
        }
        notes.push(format!("q={}: {} identities x {trials} trials in {elapsed:.1?}", field.q(), reports.len()));
    }
    if failures.is_empty() {
        Ok(notes.join("; "))
    } else {
        Err(format!("{}; {}", failures.join("; "), notes.join("; ")))
    }
}

fn power_laws() -> Outcome {
    let field = FieldConfig::new(3, 1).unwrap();
    let cfg = SamplerConfig { trials: 200, trunc_left: 10, ..SamplerConfig::default() };
    let reports = check_grassmann_props(&field, &cfg).map_err(|e| e.to_string())?;
    for r in &reports[..3] {
        ensure(!r.is_counterexample() && r.trials == 200, || format!("{} falsified", r.poly))?;
    }
    let t2 = &reports[3];
    ensure(t2.is_counterexample() && t2.trials <= 10, || format!("t^2 not falsified within 10 trials ({})", t2.trials))?;
    Ok(format!("3 laws x 200 trials, t^2 falsified at trial {}", t2.trials))
}

fn calculus_grid() -> Outcome {
    let (mut passed, mut skipped) = (0, 0);
    for p in [3, 5] {
        let field = FieldConfig::new(p, 1).unwrap();
        for item in CalcItem::ALL {
            for t in 1..=4 {
                for j in [0, 3] {
                    for n in [0, 3] {
                        let params = CalcParams { alpha: field.one(), ..CalcParams::new(j, n, t, 4) };
                        let r = verify_calculus(&field, item, params).map_err(|e| e.to_string())?;
                        if r.skipped.is_some() {
                            skipped += 1;
                            continue;
                        }
                        ensure(r.pass, || format!("item {item} p={p} t={t} j={j} n={n}: {} != {}", r.lhs, r.rhs))?;
                        passed += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{passed} exact equalities, {skipped} outside the domain of 9.1/10.1"))
}

const LETTERS: [&str; 8] = ["v1", "v2", "w1", "w2", "x1", "x2", "y1", "y2"];

fn random_polynomial(field: &FieldConfig, rng: &mut impl Rng) -> GPolynomial {
    let vars: Vec<GVariable> = LETTERS.iter().map(|s| s.parse().unwrap()).collect();
    let mut f = GPolynomial::zero(field);
    for _ in 0..rng.gen_range(1..=4) {
        let len = rng.gen_range(0..=6);
        let w = GWord((0..len).map(|_| *vars.choose(rng).unwrap()).collect());
        f.add_term(w, field.from_int(rng.gen_range(1..3)));
    }
    f
}

fn normal_form_soundness() -> Outcome {
    let field = FieldConfig::new(3, 1).unwrap();
    let cfg = SamplerConfig { k: 2, trunc_left: 12, trunc_right: 12, ..SamplerConfig::default() };
    let mut summands = 0;
    for i in 0..200u64 {
        let mut rng = trial_rng(77, i);
        let f = random_polynomial(&field, &mut rng);
        let nf = sse_reduce(&f, ReduceConfig::new(2)).map_err(|e| format!("{f}: {e}"))?;
        for (_, u) in nf.summands() {
            ensure(u.is_sse(3, 2) && u.is_reduced(3, 2), || format!("{f}: {u} is not SSE"))?;
        }
        summands += nf.summands().len();
        let diff = f.sub(&nf.expand());
        let vars: Vec<GVariable> = diff.variables().into_iter().collect();
        for _ in 0..100 {
            let e = sample_map(&field, &cfg, &vars, &mut rng).map_err(|e| e.to_string())?;
            let v = substitute(&diff, &e).map_err(|e| e.to_string())?;
            ensure(v.is_zero(), || format!("{f} vs {nf}: difference evaluates to {v}"))?;
        }
    }
    Ok(format!("200 polynomials, {summands} SSE summands, 20000 substitutions"))
}

fn random_ppolynomial(field: &FieldConfig, rng: &mut impl Rng, vars: &[u32]) -> PPolynomial {
    let (p, q) = (field.p(), field.q());
    loop {
        let mut f = PPolynomial::zero(field);
        for _ in 0..rng.gen_range(1..=3) {
            let mono: Vec<(u32, u32)> =
                vars.iter().map(|&i| (i, p * rng.gen_range(0..q))).filter(|&(_, e)| e > 0).collect();
            f.add_term(PMonomial(mono), field.from_int(rng.gen_range(1..p as i64)));
        }
        if !f.is_zero() {
            return f;
        }
    }
}

fn witness_suite() -> Outcome {
    let field = FieldConfig::new(3, 1).unwrap();
    let k = 3;
    let mut rng = trial_rng(5, 0);
    let vs = VariableSet::new(2, 2, 2, 2);
    for _ in 0..100 {
        let u = random_sse_monomial(&mut rng, vs, 6, 3, k);
        let s = build_suitable(&u, 3, k).map_err(|e| e.to_string())?;
        let r = apply_suitable(&field, &u, &s).map_err(|e| e.to_string())?;
        ensure(r.pass(), || format!("{u}: phi(u) = {}, complete {}", r.value, r.complete))?;
        let vars: Vec<u32> = match u.variables().iter().filter(|z| z.kind == VarKind::V).map(|z| z.index).collect::<Vec<_>>() {
            v if v.is_empty() => vec![1],
            v => v,
        };
        let f = random_ppolynomial(&field, &mut rng, &vars);
        let g = gsum_check(&u, &f, k).map_err(|e| e.to_string())?;
        ensure(g.pass(), || format!("{u} with {f}: g-sum {:?}", g.gsum.map(|x| x.to_string())))?;
    }
    Ok("100 monomials adequate and complete, 100 g-sum checks".into())
}

fn separation() -> Outcome {
    let field = FieldConfig::new(3, 1).unwrap();
    let k = 3;
    let pool: Vec<SseMonomial> = sse_enumerate(VariableSet::new(2, 2, 2, 2), Some(5), 3, k)
        .map_err(|e| e.to_string())?
        .into_iter()
        .filter(|u| u.is_reduced(3, k))
        .collect();
    let before = fallback_events();
    let mut rng = trial_rng(6, 0);
    let mut counts: BTreeMap<SeparationCase, usize> = BTreeMap::new();
    let mut total = 0;
    while counts.len() < 4 || counts.values().any(|&c| c < 25) {
        let (a, b) = (pool.choose(&mut rng).unwrap(), pool.choose(&mut rng).unwrap());
        if a == b {
            continue;
        }
        let (u1, ui) = if sse_compare(a, b).is_gt() { (a, b) } else { (b, a) };
        let universe = u1.variables();
        if !ui.variables().iter().all(|z| universe.contains(z)) {
            continue;
        }
        let s = build_suitable(u1, 3, k).map_err(|e| e.to_string())?;
        let scalars: BTreeMap<GVariable, Fe> =
            universe.iter().filter(|z| z.kind == VarKind::V).map(|&z| (z, field.from_int(rng.gen_range(0..3)))).collect();
        let r = separation_check(&field, u1, ui, &s, &scalars).map_err(|e| e.to_string())?;
        ensure(r.pass, || format!("case {}: {} > {} has a summand of length {:?} >= {}", r.case.label(), r.u1, r.ui, r.max_len, r.l_a))?;
        *counts.entry(r.case).or_default() += 1;
        total += 1;
    }
    let fired = fallback_events() - before;
    ensure(fired == 0, || format!("order fallback fired {fired} times"))?;
    let by_case: Vec<String> = counts.iter().map(|(c, n)| format!("{}: {n}", c.label())).collect();
    Ok(format!("{total} pairs ({}), fallback events 0", by_case.join(", ")))
}

fn order_laws() -> Outcome {
    let mut rng = trial_rng(7, 0);
    let vs = VariableSet::new(2, 2, 2, 2);
    let mut by_degree: BTreeMap<u32, Vec<SseMonomial>> = BTreeMap::new();
    while by_degree.values().filter(|v| v.len() >= 30).count() < 4 {
        let u = random_sse_monomial(&mut rng, vs, 8, 3, 3);
        by_degree.entry(u.deg()).or_default().push(u);
    }
    let buckets: Vec<&Vec<SseMonomial>> = by_degree.values().filter(|v| v.len() >= 30).collect();
    let before = fallback_events();
    for _ in 0..300 {
        let b = buckets.choose(&mut rng).unwrap();
        let (x, y) = (b.choose(&mut rng).unwrap(), b.choose(&mut rng).unwrap());
        let (xy, yx) = (sse_compare(x, y), sse_compare(y, x));
        ensure(xy == yx.reverse(), || format!("{x} vs {y} not antisymmetric"))?;
        ensure(xy.is_eq() == (x == y), || format!("{x} vs {y}: Equal iff identical fails"))?;
        ensure(sse_compare(x, x).is_eq(), || format!("{x} not reflexively equal"))?;
    }
    for _ in 0..100 {
        let b = buckets.choose(&mut rng).unwrap();
        let mut t: Vec<&SseMonomial> = (0..3).map(|_| b.choose(&mut rng).unwrap()).collect();
        t.sort_by(|a, b| sse_compare(a, b));
        ensure(sse_compare(t[0], t[1]).is_le() && sse_compare(t[1], t[2]).is_le() && sse_compare(t[0], t[2]).is_le(), || {
            format!("{} <= {} <= {} not transitive", t[0], t[1], t[2])
        })?;
    }
    let fired = fallback_events() - before;
    ensure(fired == 0, || format!("fallback fired {fired} times"))?;
    Ok("300 pairs, 100 triples, fallback events 0".into())
}

fn ppoly_witnesses() -> Outcome {
    let field = FieldConfig::new(3, 1).unwrap();
    let mut rng = trial_rng(8, 0);
    for _ in 0..20 {
        let vars: &[u32] = if rng.gen_bool(0.5) { &[1] } else { &[1, 2] };
        let f = random_ppolynomial(&field, &mut rng, vars);
        let w = ppoly_scalar_witness(&f).map_err(|e| e.to_string())?.ok_or_else(|| format!("no witness for {f}"))?;
        let direct = f.eval_scalar(|i| w.alphas.get(&GVariable::v(i)).copied().unwrap_or(Fe::ZERO));
        ensure(!w.value.is_zero() && direct == w.value, || format!("{f}: bad witness"))?;
    }
    let cube = PPolynomial::from_polynomial(&GPolynomial::parse(&field, "v1^3").unwrap()).unwrap();
    let w = ppoly_scalar_witness(&cube).unwrap().unwrap();
    ensure(w.alphas[&GVariable::v(1)] == field.one() && w.value == field.one(), || "v1^3 witness is not (1) -> 1".into())?;
    Ok("20 random p-polynomials, v1^3 -> alpha = (1), value 1".into())
}

/// Independent count of SSE monomials in one variable of each kind, straight
/// from the defining conditions.
fn brute_force_sse_count(p: u32, k: u32) -> u64 {
    let mut count = 0;
    for _v in 0..p {
        for b in 0..p {
            for c in 0..=p {
                for d in 0..=p {
                    for end in 0u32..16 {
                        if end.count_ones() % 2 == 1 || b + d > k {
                            continue;
                        }
                        let (x_end, y_end) = (end & 4 != 0, end & 8 != 0);
                        if (c == p && x_end) || (d == p && y_end) {
                            continue;
                        }
                        count += 1;
                    }
                }
            }
        }
    }
    count
}

fn finiteness() -> Outcome {
    let brute = 3 * brute_force_sse_count(3, 1) as u128;
    let dim = sse_dimension(1, 3, 3, 1).map_err(|e| e.to_string())?;
    ensure(dim == brute, || format!("sse_dimension(1) = {dim}, brute force {brute}"))?;
    Ok(format!("sse_dimension(1) = {dim} = brute force"))
}

fn falsification() -> Outcome {
    let field = FieldConfig::new(3, 1).unwrap();
    let cfg = SamplerConfig { k: 2, trials: 10, ..SamplerConfig::default() };
    let mut notes = Vec::new();
    for s in ["[w1,w2]", "w1"] {
        let f = GPolynomial::parse(&field, s).unwrap();
        let r = check_identity(&f, &cfg).map_err(|e| e.to_string())?;
        ensure(r.is_counterexample(), || format!("{s} not falsified within 10 trials"))?;
        ensure(r.recheck(&f).unwrap_or(false), || format!("{s}: witness does not recheck"))?;
        notes.push(format!("{s} at trial {}", r.witness.as_ref().unwrap().trial));
    }
    Ok(notes.join(", "))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("corpus soundness", corpus_soundness),
        ("single-factor power laws", power_laws),
        ("calculus grid", calculus_grid),
        ("normal-form soundness", normal_form_soundness),
        ("witness suite", witness_suite),
        ("separation", separation),
        ("order laws", order_laws),
        ("p-polynomial witnesses", ppoly_witnesses),
        ("finiteness evidence", finiteness),
        ("falsification sanity", falsification),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let took = start.elapsed();
        match outcome {
            Ok(note) => println!("criterion {:>2} {name}: PASS ({note}; {took:.1?})", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} {name}: FAIL ({why}; {took:.1?})", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
