//! Command-line frontend.
//!
//! Exit codes: 0 when everything checked passes, 1 when a counterexample or
//! failed check was found, 2 on usage, parse or configuration errors.

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::error::{Error, Result};
use crate::field::FieldConfig;
use crate::free::GPolynomial;
use crate::parallel::Execution;
use crate::rewrite::{leading_term, sse_compare_case, sse_dimension, sse_reduce, PPolynomial, ReduceConfig, SseMonomial};
use crate::verifier::{
    check_corpus, check_grassmann_props, check_identity, corpus_builtin, parse_corpus_file, SamplerConfig, VerdictReport,
};
use crate::witness::{apply_suitable, build_suitable, gsum_check, verify_calculus, CalcItem, CalcParams};

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

/// Shared run configuration.
#[derive(Args, Clone, Debug)]
pub struct RunConfig {
    #[arg(long, default_value_t = 3, global = true)]
    pub p: u32,
    #[arg(long, default_value_t = 1, global = true)]
    pub m: usize,
    #[arg(long, default_value_t = 2, global = true)]
    pub k: u32,
    #[arg(long, default_value_t = 10, global = true)]
    pub trunc_left: u32,
    #[arg(long, default_value_t = 10, global = true)]
    pub trunc_right: u32,
    #[arg(long, default_value_t = 1, global = true)]
    pub seed: u64,
    #[arg(long, default_value_t = 500, global = true)]
    pub trials: usize,
    #[arg(long, default_value_t = 4, global = true)]
    pub richness: usize,
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    #[arg(long, default_value_t = crate::rewrite::DEFAULT_MAX_STEPS, global = true)]
    pub max_steps: usize,
}

impl RunConfig {
    fn field(&self) -> Result<FieldConfig> {
        FieldConfig::new(self.p, self.m)
    }

    fn sampler(&self) -> SamplerConfig {
        SamplerConfig {
            k: self.k,
            trunc_left: self.trunc_left,
            trunc_right: self.trunc_right,
            richness: self.richness,
            trials: self.trials,
            seed: self.seed,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "grassmann-pi", version, about = "Graded identities of E_{k*} ⊗ E over GF(p^m)")]
pub struct Cli {
    #[command(flatten)]
    pub run: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Search for a counterexample to a polynomial identity.
    Verify {
        #[arg(long, conflicts_with = "file")]
        poly: Option<String>,
        /// Corpus file: one polynomial per line, `#` comments.
        #[arg(long)]
        file: Option<std::path::PathBuf>,
    },
    /// Normal form modulo the identities, with its leading term.
    Nf {
        #[arg(long)]
        poly: String,
    },
    /// Check a calculation item (all items when omitted).
    Calculus {
        #[arg(long)]
        item: Option<String>,
        #[arg(long, default_value_t = 1)]
        t: u32,
        #[arg(long, default_value_t = 0)]
        j: u32,
        #[arg(long, default_value_t = 0)]
        n: u32,
        /// Scalar of Types 9 and 10.
        #[arg(long, default_value_t = 1)]
        alpha: i64,
    },
    /// Suitable homomorphism for an SSE monomial.
    Witness {
        #[arg(long)]
        poly: String,
        /// Optional p-polynomial coefficient for the g-sum check.
        #[arg(long)]
        coeff: Option<String>,
    },
    /// Check the built-in identity corpus.
    Corpus {
        #[arg(long)]
        file: Option<std::path::PathBuf>,
        /// Instances per identity family.
        #[arg(long, default_value_t = usize::MAX, hide_default_value = true)]
        breadth: usize,
    },
    /// Power laws of the Grassmann algebra.
    Powers,
    /// Upper bound on the dimension of the relatively free algebra in n
    /// variables of each kind.
    Dim {
        #[arg(long = "n", default_value_t = 1)]
        vars: u32,
    },
    /// Compare two SSE monomials.
    Compare {
        #[arg(long)]
        m1: String,
        #[arg(long)]
        m2: String,
    },
}

fn emit(out: &mut dyn Write, format: Format, text: &str, value: serde_json::Value) -> Result<()> {
    let s = match format {
        Format::Text => text.to_string(),
        Format::Json => serde_json::to_string_pretty(&value).map_err(|e| Error::Invalid(e.to_string()))?,
    };
    writeln!(out, "{s}").map_err(|e| Error::Invalid(e.to_string()))
}

fn verdict_line(r: &VerdictReport) -> String {
    let mut s = format!("{}: {:?} after {} trials", r.poly, r.verdict, r.trials);
    if let Some(w) = &r.witness {
        let assignment: Vec<String> = w.assignment.iter().map(|(v, x)| format!("{v} -> {x}")).collect();
        s.push_str(&format!("\n  trial {}: {}\n  value {}", w.trial, assignment.join(", "), w.value));
    }
    s
}

fn report_all(out: &mut dyn Write, format: Format, reports: &[VerdictReport]) -> Result<i32> {
    let text: Vec<String> = reports.iter().map(verdict_line).collect();
    let falsified = reports.iter().filter(|r| r.is_counterexample()).count();
    let summary = format!("{} checked, {falsified} falsified", reports.len());
    let value = if reports.len() == 1 {
        serde_json::to_value(&reports[0]).map_err(|e| Error::Invalid(e.to_string()))?
    } else {
        json!({ "schema": crate::verifier::SCHEMA, "reports": reports, "falsified": falsified })
    };
    let text = if reports.len() == 1 { text[0].clone() } else { format!("{}\n{summary}", text.join("\n")) };
    emit(out, format, &text, value)?;
    Ok((falsified > 0) as i32)
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<i32> {
    let run = &cli.run;
    let field = run.field()?;
    let cfg = run.sampler();
    cfg.shape()?;
    let fmt = run.format;
    match cli.command {
        Command::Verify { poly, file } => {
            let polys = match (poly, file) {
                (Some(s), None) => vec![GPolynomial::parse(&field, &s)?],
                (None, Some(path)) => {
                    let text = std::fs::read_to_string(&path).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?;
                    parse_corpus_file(&field, &text)?.into_iter().map(|e| e.poly).collect()
                }
                _ => return Err(Error::Invalid("give exactly one of --poly and --file".into())),
            };
            let reports = polys.iter().map(|f| check_identity(f, &cfg)).collect::<Result<Vec<_>>>()?;
            report_all(out, fmt, &reports)
        }
        Command::Nf { poly } => {
            let f = GPolynomial::parse(&field, &poly)?;
            let nf = sse_reduce(&f, ReduceConfig { k: run.k, max_steps: run.max_steps })?;
            let lt = leading_term(&nf).ok().map(ToString::to_string);
            let mut value = nf.to_json();
            value["lt"] = json!(lt);
            let text = match &lt {
                Some(lt) => format!("{nf}\nLT = {lt}"),
                None => nf.to_string(),
            };
            emit(out, fmt, &text, value)?;
            Ok(0)
        }
        Command::Calculus { item, t, j, n, alpha } => {
            let items = match item {
                Some(s) => vec![s.parse::<CalcItem>()?],
                None => CalcItem::ALL.to_vec(),
            };
            let params = CalcParams { alpha: field.from_int(alpha), ..CalcParams::new(j, n, t, run.k) };
            let reports = items.iter().map(|&i| verify_calculus(&field, i, params)).collect::<Result<Vec<_>>>()?;
            let text: Vec<String> = reports
                .iter()
                .map(|r| {
                    let verdict = match &r.skipped {
                        Some(why) => format!("skipped ({why})"),
                        None if r.pass => "pass".into(),
                        None => "FAIL".into(),
                    };
                    format!("{} t={} j={} n={}: {verdict}\n  lhs {}\n  rhs {}", r.item, t, j, n, r.lhs, r.rhs)
                })
                .collect();
            let failed = reports.iter().any(|r| !r.pass && r.skipped.is_none());
            let value = if reports.len() == 1 { json!(reports[0]) } else { json!(reports) };
            emit(out, fmt, &text.join("\n"), value)?;
            Ok(failed as i32)
        }
        Command::Witness { poly, coeff } => {
            let u: SseMonomial = poly.parse()?;
            let (text, value, pass) = match coeff {
                None => {
                    let s = build_suitable(&u, field.p(), run.k)?;
                    let r = apply_suitable(&field, &u, &s)?;
                    let assignment: Vec<String> = r.assignment.iter().map(|(z, d)| format!("  {z}: {d}")).collect();
                    let result = match r.single {
                        Some((c, b)) => format!("{} * {b}", field.element(c)),
                        None => format!("not a single blade: {}", r.value),
                    };
                    let text = format!("{}\n{}\nphi(u) = {result}, complete: {}", u, assignment.join("\n"), r.complete);
                    (text, r.to_json(), r.pass())
                }
                Some(c) => {
                    let f = PPolynomial::from_polynomial(&GPolynomial::parse(&field, &c)?)?;
                    let r = gsum_check(&u, &f, run.k)?;
                    let g = r.gsum.as_ref().map_or("0".to_string(), ToString::to_string);
                    let text = format!("{u} with coefficient {c}\ng-sum(psi(u)) = {g}\npass: {}", r.pass());
                    (text, r.to_json(), r.pass())
                }
            };
            emit(out, fmt, &text, value)?;
            Ok(!pass as i32)
        }
        Command::Corpus { file, breadth } => {
            let entries = match file {
                Some(path) => {
                    let text = std::fs::read_to_string(&path).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?;
                    parse_corpus_file(&field, &text)?
                }
                None => corpus_builtin(&field, run.k, breadth)?,
            };
            let reports = check_corpus(&entries, &cfg, Execution::default())?;
            report_all(out, fmt, &reports)
        }
        Command::Powers => {
            let reports = check_grassmann_props(&field, &cfg)?;
            let expected = [false, false, false, true];
            let ok = reports.iter().zip(expected).all(|(r, e)| r.is_counterexample() == e);
            let text: Vec<String> = reports.iter().map(verdict_line).collect();
            emit(out, fmt, &text.join("\n"), json!(reports))?;
            Ok(!ok as i32)
        }
        Command::Dim { vars } => {
            let d = sse_dimension(vars, field.p(), field.q(), run.k)?;
            let value = json!({ "schema": crate::verifier::SCHEMA, "m": vars, "p": field.p(), "q": field.q(), "k": run.k, "dimension_bound": d.to_string() });
            emit(out, fmt, &format!("dimension bound, n = {vars}: {d}"), value)?;
            Ok(0)
        }
        Command::Compare { m1, m2 } => {
            let (a, b): (SseMonomial, SseMonomial) = (m1.parse()?, m2.parse()?);
            let (ord, case) = sse_compare_case(&a, &b);
            let value = json!({ "schema": crate::verifier::SCHEMA, "m1": a, "m2": b, "order": format!("{ord:?}"), "case": case });
            emit(out, fmt, &format!("{ord:?}"), value)?;
            Ok(0)
        }
    }
}

/// Parses `args` and runs the command, writing reports to `out` and
/// diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("grassmann-pi").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap() + &String::from_utf8(err).unwrap())
    }

    #[test]
    fn verify_exit_codes() {
        assert_eq!(call(&["verify", "--poly", "w1^3", "--p", "3", "--k", "2"]).0, 0);
        assert_eq!(call(&["verify", "--poly", "[w1,w2]"]).0, 1);
        assert_eq!(call(&["verify", "--poly", "v1*("]).0, 2);
        assert_eq!(call(&["verify"]).0, 2);
        assert_eq!(call(&["frobnicate"]).0, 2);
    }

    #[test]
    fn normal_forms() {
        let (code, out) = call(&["nf", "--poly", "v2*v1"]);
        assert_eq!(code, 0);
        assert_eq!(out, "v1*v2 - [v1,v2]\nLT = v1*v2\n");
        assert_eq!(call(&["nf", "--poly", "w1^3"]).1, "0\n");
        assert_eq!(call(&["nf", "--poly", "0"]).1, "0\n");
        let (_, out) = call(&["nf", "--poly", "v2*v1", "--format", "json"]);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["lt"], "v1*v2");
    }

    #[test]
    fn other_commands() {
        assert_eq!(call(&["calculus", "--item", "5.1", "--t", "2"]).0, 0);
        assert_eq!(call(&["calculus", "--item", "8.1", "--t", "3", "--k", "4"]).0, 0);
        assert_eq!(call(&["calculus", "--item", "12.1"]).0, 2);
        assert_eq!(call(&["compare", "--m1", "v1", "--m2", "v1*v2"]).1, "Less\n");
        let (code, out) = call(&["witness", "--poly", "x1", "--format", "json"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["blade"], "e3e4|e1");
        assert_eq!(call(&["witness", "--poly", "v1*[v2,x1]", "--coeff", "v1^3 - v2^3"]).0, 0);
        let (code, out) = call(&["dim", "--n", "1", "--k", "1"]);
        assert_eq!(code, 0);
        assert!(out.contains("dimension bound"));
        assert_eq!(call(&["powers", "--trials", "50"]).0, 0);
    }

    #[test]
    fn corpus_runs() {
        let (code, out) = call(&["corpus", "--breadth", "1", "--trials", "50"]);
        assert_eq!(code, 0, "{out}");
        assert!(out.ends_with("10 checked, 0 falsified\n"));
    }
}
