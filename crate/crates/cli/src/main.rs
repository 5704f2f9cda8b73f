//! Command-line front end: evaluate, count, tabulate and verify.
//!
//! Exit codes: 0 when everything checked out, 1 when a mathematical
//! mismatch was found, 2 on invalid input.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use picard_ff::character::{Character, ZeroConvention};
use picard_ff::curve::{self, CurveParams};
use picard_ff::hypergeom::{self, F1Form, F1Spec, Gauss2F1Spec};
use picard_ff::verify::{self, FormSet, SuiteSummary};
use picard_ff::{Cyclotomic, Field};
use serde_json::json;

#[derive(Parser)]
#[command(name = "picard-ff", version, about = "Finite-field hypergeometric functions and Picard curve traces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct FieldArgs {
    /// Field order (a prime power)
    #[arg(long, conflicts_with_all = ["p", "e"])]
    q: Option<u64>,
    /// Characteristic
    #[arg(long, requires = "e")]
    p: Option<u64>,
    /// Extension degree
    #[arg(long, requires = "p")]
    e: Option<u32>,
}

impl FieldArgs {
    fn build(&self) -> Result<Field> {
        let field = match (self.q, self.p, self.e) {
            (Some(q), _, _) => Field::with_order(q)?,
            (None, Some(p), Some(e)) => Field::new(p, e)?,
            _ => bail!("specify the field with --q or with --p and --e"),
        };
        Ok(field)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print the field's modulus and generator
    Field {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        json: bool,
    },
    /// Count points on a Picard curve and compare with the trace formula
    Count {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        lambda: u64,
        #[arg(long)]
        mu: u64,
        /// Only run the brute-force counter (allowed for any q)
        #[arg(long)]
        brute_force_only: bool,
        #[arg(long)]
        json: bool,
    },
    /// Evaluate Ghosh's Appell F1 over the field
    F1 {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long = "A")]
        a: u32,
        #[arg(long = "B1")]
        b1: u32,
        #[arg(long = "B2")]
        b2: u32,
        #[arg(long = "C")]
        c: u32,
        #[arg(long)]
        x: u64,
        #[arg(long)]
        y: u64,
        #[arg(long, default_value = "single")]
        form: F1Form,
        #[arg(long)]
        json: bool,
    },
    /// Evaluate Greene's 2F1 over the field
    #[command(name = "2f1")]
    Greene {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long = "A")]
        a: u32,
        #[arg(long = "B")]
        b: u32,
        #[arg(long = "C")]
        c: u32,
        #[arg(long)]
        x: u64,
        #[arg(long)]
        json: bool,
    },
    /// One report row per admissible (lambda, mu)
    Table {
        #[command(flatten)]
        field: FieldArgs,
        /// Write to this file instead of standard output
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Run a verification suite
    Verify {
        #[command(subcommand)]
        target: VerifyTarget,
    },
}

#[derive(Args)]
struct SuiteArgs {
    /// Field orders to check (repeatable)
    #[arg(long)]
    q: Vec<u64>,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Print the summary as JSON
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum VerifyTarget {
    /// Trace formula against brute force for every admissible (lambda, mu)
    Theorem {
        #[command(flatten)]
        suite: SuiteArgs,
        /// Check every prime p = 1 (mod 3) with 7 <= p <= pmax (default 103 when no --q)
        #[arg(long)]
        pmax: Option<u64>,
    },
    /// Koike's identity for the Legendre family
    Koike {
        #[command(flatten)]
        suite: SuiteArgs,
        #[arg(long, default_value_t = 5)]
        pmin: u64,
        #[arg(long, default_value_t = 97)]
        pmax: u64,
    },
    /// Normalized binomial identities (default q = 7, 13, 16, 25)
    Lemma21 {
        #[command(flatten)]
        suite: SuiteArgs,
        #[arg(long, default_value = "greene-all-zero")]
        convention: ZeroConvention,
    },
    /// F1 double sum against the single sum (default q = 7, 13)
    Lemma22 {
        #[command(flatten)]
        suite: SuiteArgs,
    },
    /// All three F1 forms (default q = 7, 13 plus random characters at q = 31)
    F1Forms {
        #[command(flatten)]
        suite: SuiteArgs,
        /// Random character quadruples per field (default 100 at q = 31 when no --q)
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    // exit quietly when the reader closes the pipe (e.g. `| head`)
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn verdict(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn print_value(label: &str, v: &Cyclotomic) {
    let z = v.to_complex();
    println!("{label} = {v}");
    println!("{label} ~= {:.12} {:+.12}i", z.re, z.im);
}

fn value_json(v: &Cyclotomic) -> serde_json::Value {
    let z = v.to_complex();
    json!({ "value": v, "text": v.to_text(), "re": z.re, "im": z.im })
}

fn describe_field(field: &Field) -> String {
    format!(
        "F_{} (p = {}, e = {}, modulus {}, generator {})",
        field.order(),
        field.characteristic(),
        field.degree(),
        field.modulus_string(),
        field.generator()
    )
}

fn character(field: &Field, m: u32, name: &str) -> Result<Character> {
    Character::new(field, m).with_context(|| format!("character --{name}"))
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Field { field, json } => {
            let f = field.build()?;
            if json {
                let doc = json!({
                    "p": f.characteristic(),
                    "e": f.degree(),
                    "q": f.order(),
                    "modulus": f.modulus(),
                    "generator": f.generator(),
                });
                println!("{}", serde_json::to_string_pretty(&doc)?);
            } else {
                println!("p = {}", f.characteristic());
                println!("e = {}", f.degree());
                println!("q = {}", f.order());
                println!("modulus = {}  {:?}", f.modulus_string(), f.modulus());
                println!("generator = {}", f.generator());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Count { field, lambda, mu, brute_force_only, json } => {
            let f = field.build()?;
            let (l, m) = (f.elem(lambda)?, f.elem(mu)?);
            if brute_force_only {
                let params = CurveParams::picard_any_q(&f, l, m)?;
                let count = curve::count_bruteforce(&params);
                let trace = curve::trace_frobenius(&params);
                if json {
                    println!("{}", json!({ "q": f.order(), "lambda": lambda, "mu": mu, "count": count, "trace": trace }));
                } else {
                    println!("field: {}", describe_field(&f));
                    println!("count = {count}");
                    println!("trace = {trace}");
                }
                return Ok(ExitCode::SUCCESS);
            }
            let params = CurveParams::picard(&f, l, m)?;
            let report = curve::picard_report(&params)?;
            let charsum = curve::count_charsum(&params)?;
            let hw = curve::hasse_weil_ok(&report);
            if json {
                let mut doc = serde_json::to_value(&report)?;
                doc["count_charsum"] = json!(charsum);
                doc["hasse_weil"] = json!(hw);
                println!("{}", serde_json::to_string_pretty(&doc)?);
            } else {
                println!("field: {}", describe_field(&f));
                println!("curve: y^3 = x(x-1)(x-{lambda})(x-{mu})");
                println!("count (brute force) = {}", report.count);
                println!("count (character sum) = {charsum}");
                println!("trace (1 + q - count) = {}", report.trace);
                print_value("trace formula", &report.rhs);
                match report.rhs_trace {
                    Some(t) => println!("trace formula as integer = {t}"),
                    None => println!("trace formula as integer = (not an integer)"),
                }
                println!("hasse-weil = {hw}");
                println!("match = {}", report.matches);
            }
            Ok(verdict(report.matches && charsum == report.count && hw))
        }
        Command::F1 { field, a, b1, b2, c, x, y, form, json } => {
            let f = field.build()?;
            let spec = F1Spec {
                a: character(&f, a, "A")?,
                b1: character(&f, b1, "B1")?,
                b2: character(&f, b2, "B2")?,
                c: character(&f, c, "C")?,
                x: f.elem(x)?,
                y: f.elem(y)?,
            };
            let v = hypergeom::ghosh_f1(&f, &spec, form)?;
            if json {
                let mut doc = value_json(&v);
                doc["form"] = json!(form);
                println!("{}", serde_json::to_string_pretty(&doc)?);
            } else {
                println!("field: {}", describe_field(&f));
                println!("A = {}, B1 = {}, B2 = {}, C = {}", spec.a, spec.b1, spec.b2, spec.c);
                println!("x = {}, y = {}", spec.x, spec.y);
                print_value(&format!("F1[{form}]"), &v);
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Greene { field, a, b, c, x, json } => {
            let f = field.build()?;
            let spec = Gauss2F1Spec {
                a: character(&f, a, "A")?,
                b: character(&f, b, "B")?,
                c: character(&f, c, "C")?,
                x: f.elem(x)?,
            };
            let v = hypergeom::greene_2f1(&f, &spec)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&value_json(&v))?);
            } else {
                println!("field: {}", describe_field(&f));
                println!("A = {}, B = {}, C = {}", spec.a, spec.b, spec.c);
                println!("x = {}", spec.x);
                print_value("2F1", &v);
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Table { field, out, json, jobs } => {
            let f = field.build()?;
            let rows = verify::picard_table(&f, jobs)?;
            let text = if json {
                verify::reports_to_json(&rows)
            } else {
                verify::reports_to_csv(&rows)
            };
            match out {
                Some(path) => {
                    fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
                    eprintln!("wrote {} rows to {}", rows.len(), path.display());
                }
                None => print!("{text}"),
            }
            Ok(verdict(rows.iter().all(|r| r.matches)))
        }
        Command::Verify { target } => run_verify(target),
    }
}

fn fields(qs: &[u64]) -> Result<Vec<Field>> {
    qs.iter()
        .map(|&q| Field::with_order(q).map_err(Into::into))
        .collect()
}

const MAX_LISTED: usize = 20;

fn report(summaries: &[SuiteSummary], json: bool) -> Result<ExitCode> {
    if json {
        println!("{}", serde_json::to_string_pretty(summaries)?);
    } else {
        println!("{:<20} {:>10} {:>11}", "suite", "cases", "mismatches");
        for s in summaries {
            println!("{:<20} {:>10} {:>11}", s.suite, s.cases, s.mismatches.len());
        }
        for s in summaries {
            for m in s.mismatches.iter().take(MAX_LISTED) {
                println!("MISMATCH [{}] {}: {}", s.suite, m.case, m.detail);
            }
            if s.mismatches.len() > MAX_LISTED {
                println!("MISMATCH [{}] ... {} more (use --json for all)", s.suite, s.mismatches.len() - MAX_LISTED);
            }
        }
    }
    Ok(verdict(summaries.iter().all(SuiteSummary::passed)))
}

fn run_verify(target: VerifyTarget) -> Result<ExitCode> {
    match target {
        VerifyTarget::Theorem { suite, pmax } => {
            let mut qs = suite.q.clone();
            let pmax = pmax.or(if qs.is_empty() { Some(103) } else { None });
            if let Some(pmax) = pmax {
                qs.extend(verify::theorem_primes(pmax));
            }
            let fs = fields(&qs)?;
            eprintln!("checking {} field(s): {:?}", fs.len(), qs);
            let summary = verify::verify_theorem(&fs, suite.jobs)?;
            report(&[summary], suite.json)
        }
        VerifyTarget::Koike { suite, pmin, pmax } => {
            if !suite.q.is_empty() {
                bail!("koike takes --pmin/--pmax, not --q");
            }
            eprintln!("checking odd primes {pmin}..={pmax}");
            let summary = verify::verify_koike(pmin, pmax, suite.jobs)?;
            report(&[summary], suite.json)
        }
        VerifyTarget::Lemma21 { suite, convention } => {
            let qs = if suite.q.is_empty() { vec![7, 13, 16, 25] } else { suite.q.clone() };
            let summaries: Vec<SuiteSummary> = fields(&qs)?
                .iter()
                .map(|f| {
                    eprintln!("lemma21 q={} convention={convention}", f.order());
                    let mut s = verify::verify_lemma21(f, convention);
                    s.suite = format!("lemma21 q={}", f.order());
                    s
                })
                .collect();
            report(&summaries, suite.json)
        }
        VerifyTarget::Lemma22 { suite } => {
            let qs = if suite.q.is_empty() { vec![7, 13] } else { suite.q.clone() };
            let mut summaries = Vec::new();
            for f in fields(&qs)? {
                eprintln!("lemma22 q={}", f.order());
                let quads = verify::standard_quadruples(&f)?;
                let mut s = verify::verify_f1_forms(&f, &quads, FormSet::DefVsSingle, suite.jobs)?;
                s.suite = format!("lemma22 q={}", f.order());
                summaries.push(s);
            }
            report(&summaries, suite.json)
        }
        VerifyTarget::F1Forms { suite, samples, seed } => {
            // (q, use the standard quadruples, random samples)
            let plan: Vec<(u64, bool, usize)> = if suite.q.is_empty() {
                vec![(7, true, 0), (13, true, 0), (31, false, samples.unwrap_or(100))]
            } else {
                suite.q.iter().map(|&q| (q, true, samples.unwrap_or(0))).collect()
            };
            let mut summaries = Vec::new();
            for (q, standard, n) in plan {
                let f = Field::with_order(q)?;
                let mut quads = Vec::new();
                if standard {
                    match verify::standard_quadruples(&f) {
                        Ok(s) => quads.extend(s),
                        Err(e) if n > 0 => eprintln!("q={q}: skipping standard quadruples ({e})"),
                        Err(e) => return Err(e.into()),
                    }
                }
                quads.extend(verify::random_quadruples(&f, n, seed));
                eprintln!("f1-forms q={q}: {} quadruple(s)", quads.len());
                let mut s = verify::verify_f1_forms(&f, &quads, FormSet::All, suite.jobs)?;
                s.suite = format!("f1-forms q={q}");
                summaries.push(s);
            }
            report(&summaries, suite.json)
        }
    }
}
