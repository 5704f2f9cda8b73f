//! Exhaustive and sampled verification suites, and report tables.
//!
//! Each suite returns a [`SuiteSummary`] listing how many cases ran and the
//! full exact values of every case that failed. Work is spread over a rayon
//! pool of the requested size; results are always merged in input order so
//! output does not depend on the worker count.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::character::{
    lemma21_expand, lemma21_jacobi_binomial, lemma21_lhs, lemma21_reflection, Character,
    ZeroConvention,
};
use crate::curve::{
    self, admissible_pairs, hasse_weil_ok, CurveError, CurveParams, KoikeEvaluator,
    PicardEvaluator, TraceReport,
};
use crate::field::{is_prime, Elem, Field};
use crate::hypergeom::{self, F1DefTable, F1Spec, FirstBinomial};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub case: String,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteSummary {
    pub suite: String,
    pub cases: u64,
    pub mismatches: Vec<Mismatch>,
}

impl SuiteSummary {
    pub fn new(suite: impl Into<String>) -> Self {
        SuiteSummary { suite: suite.into(), cases: 0, mismatches: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }

    fn record(&mut self, ok: bool, case: impl FnOnce() -> String, detail: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.mismatches.push(Mismatch { case: case(), detail: detail() });
        }
    }

    fn absorb(&mut self, other: SuiteSummary) {
        self.cases += other.cases;
        self.mismatches.extend(other.mismatches);
    }
}

/// A rayon pool with `jobs` workers (`0` means rayon's default).
pub fn pool(jobs: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .expect("thread pool")
}

/// Primes `p ≡ 1 (mod 3)` with `7 ≤ p ≤ pmax`.
pub fn theorem_primes(pmax: u64) -> Vec<u64> {
    (7..=pmax).filter(|&p| p % 3 == 1 && is_prime(p)).collect()
}

/// One report per admissible `(λ, μ)`, ordered by `(code(λ), code(μ))`.
pub fn picard_table(field: &Field, jobs: usize) -> Result<Vec<TraceReport>, CurveError> {
    let eval = PicardEvaluator::new(field)?;
    let pairs = admissible_pairs(field);
    pool(jobs).install(|| {
        pairs
            .par_iter()
            .map(|&(l, m)| eval.report(l, m))
            .collect::<Result<Vec<_>, _>>()
    })
}

/// Trace formula against brute force, plus the Hasse–Weil bound, over every
/// admissible pair of each field.
pub fn verify_theorem(fields: &[Field], jobs: usize) -> Result<SuiteSummary, CurveError> {
    let mut summary = SuiteSummary::new("theorem");
    for field in fields {
        for r in picard_table(field, jobs)? {
            let hw = hasse_weil_ok(&r);
            summary.record(
                r.matches && hw,
                || format!("q={} lambda={} mu={}", r.q, r.lambda, r.mu.unwrap_or(0)),
                || {
                    format!(
                        "count={} trace={} rhs={} hasse_weil={hw}",
                        r.count,
                        r.trace,
                        r.rhs.to_text()
                    )
                },
            );
        }
    }
    Ok(summary)
}

/// Character-sum point count against brute force over every admissible pair.
pub fn verify_count_formula(field: &Field) -> Result<SuiteSummary, CurveError> {
    let mut summary = SuiteSummary::new("count-formula");
    for (l, m) in admissible_pairs(field) {
        let params = CurveParams::picard(field, l, m)?;
        let brute = curve::count_bruteforce(&params);
        let charsum = curve::count_charsum(&params);
        summary.record(
            charsum.as_ref() == Ok(&brute),
            || format!("q={} lambda={} mu={}", field.order(), l, m),
            || format!("brute={brute} charsum={charsum:?}"),
        );
    }
    Ok(summary)
}

/// Koike's identity for every odd prime in `[pmin, pmax]` and every `λ ∉ {0, 1}`.
pub fn verify_koike(pmin: u64, pmax: u64, jobs: usize) -> Result<SuiteSummary, CurveError> {
    let primes: Vec<u64> = (pmin.max(3)..=pmax).filter(|&p| is_prime(p)).collect();
    let fields: Vec<Field> = primes.iter().map(|&p| Field::new(p, 1).expect("prime")).collect();
    let per_field = pool(jobs).install(|| {
        fields
            .par_iter()
            .map(|field| {
                let eval = KoikeEvaluator::new(field)?;
                field
                    .elements()
                    .skip(2)
                    .map(|l| eval.report(l))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, CurveError>>()
    })?;
    let mut summary = SuiteSummary::new("koike");
    for r in per_field.into_iter().flatten() {
        summary.record(
            r.matches && hasse_weil_ok(&r),
            || format!("p={} lambda={}", r.q, r.lambda),
            || format!("count={} trace={} rhs={}", r.count, r.trace, r.rhs.to_text()),
        );
    }
    Ok(summary)
}

/// All three parts of the binomial identities, exhaustively over one field.
pub fn verify_lemma21(field: &Field, conv: ZeroConvention) -> SuiteSummary {
    let q = field.order();
    let chars: Vec<Character> = Character::all(field).collect();

    let mut part1 = SuiteSummary::new("lemma21-expansion");
    for &a in &chars {
        for t in field.elements() {
            let lhs = lemma21_lhs(field, a, t, conv);
            let rhs = lemma21_expand(field, a, t, conv);
            part1.record(
                lhs == rhs,
                || format!("(1) q={q} A=m{} t={t} conv={conv}", a.exponent()),
                || format!("lhs={} rhs={}", lhs.to_text(), rhs.to_text()),
            );
        }
    }

    let mut summary = SuiteSummary::new("lemma21");
    summary.absorb(part1);
    for &a in &chars {
        for &b in &chars {
            let (l, r) = lemma21_jacobi_binomial(field, a, b, conv);
            summary.record(
                l == r,
                || format!("(2) q={q} A=m{} B=m{} conv={conv}", a.exponent(), b.exponent()),
                || format!("lhs={} rhs={}", l.to_text(), r.to_text()),
            );
            let (l, r) = lemma21_reflection(field, a, b, conv);
            summary.record(
                l == r,
                || format!("(3) q={q} A=m{} B=m{} conv={conv}", a.exponent(), b.exponent()),
                || format!("lhs={} rhs={}", l.to_text(), r.to_text()),
            );
        }
    }
    summary
}

/// Every quadruple `(A, B1, B2, C)` over `{ε, χ3, χ3², φ}`.
pub fn standard_quadruples(field: &Field) -> Result<Vec<[Character; 4]>, CurveError> {
    let eps = Character::trivial(field);
    let chi3 = Character::cubic(field)?;
    let phi = Character::quadratic(field)?;
    let set = [eps, chi3, chi3.pow(2), phi];
    let mut out = Vec::with_capacity(256);
    for a in set {
        for b1 in set {
            for b2 in set {
                for c in set {
                    out.push([a, b1, b2, c]);
                }
            }
        }
    }
    Ok(out)
}

/// `count` quadruples of uniformly random characters, reproducible from `seed`.
pub fn random_quadruples(field: &Field, count: usize, seed: u64) -> Vec<[Character; 4]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = field.order() - 1;
    (0..count)
        .map(|_| {
            std::array::from_fn(|_| Character::new(field, rng.gen_range(0..n)).expect("in range"))
        })
        .collect()
}

/// Which single-sum forms to compare against the double sum.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormSet {
    /// Double sum against the `t`-sum only.
    DefVsSingle,
    /// Double sum, `t`-sum and `s`-sum all equal.
    All,
}

/// Compares the `F1` evaluators at every `(x, y)` with `xy ≠ 0`.
pub fn verify_f1_forms(
    field: &Field,
    quadruples: &[[Character; 4]],
    forms: FormSet,
    jobs: usize,
) -> Result<SuiteSummary, hypergeom::HypergeomError> {
    let nonzero: Vec<Elem> = field.nonzero().collect();
    let parts = pool(jobs).install(|| {
        quadruples
            .par_iter()
            .map(|&[a, b1, b2, c]| {
                let table = F1DefTable::new(field, a, b1, b2, c, FirstBinomial::Definition)?;
                let mut part = SuiteSummary::new("f1-forms");
                for &x in &nonzero {
                    for &y in &nonzero {
                        let spec = F1Spec { a, b1, b2, c, x, y };
                        let def = table.eval(x, y);
                        let single = hypergeom::ghosh_f1_single(field, &spec)?;
                        let inverted = match forms {
                            FormSet::All => Some(hypergeom::ghosh_f1_inverted(field, &spec)?),
                            FormSet::DefVsSingle => None,
                        };
                        let ok = def == single && inverted.as_ref().is_none_or(|v| *v == single);
                        part.record(
                            ok,
                            || {
                                format!(
                                    "q={} A=m{} B1=m{} B2=m{} C=m{} x={x} y={y}",
                                    field.order(),
                                    a.exponent(),
                                    b1.exponent(),
                                    b2.exponent(),
                                    c.exponent()
                                )
                            },
                            || {
                                let mut s = format!("def={} single={}", def.to_text(), single.to_text());
                                if let Some(v) = &inverted {
                                    let _ = write!(s, " inverted={}", v.to_text());
                                }
                                s
                            },
                        );
                    }
                }
                Ok::<_, hypergeom::HypergeomError>(part)
            })
            .collect::<Result<Vec<_>, _>>()
    })?;
    let mut summary = SuiteSummary::new(match forms {
        FormSet::DefVsSingle => "lemma22",
        FormSet::All => "f1-forms",
    });
    for p in parts {
        summary.absorb(p);
    }
    Ok(summary)
}

pub const CSV_HEADER: &str = "q,lambda,mu,count,trace,rhs_trace,match";

pub fn reports_to_csv(reports: &[TraceReport]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in reports {
        let mu = r.mu.map(|m| m.to_string()).unwrap_or_default();
        let rhs = r.rhs_trace.map(|t| t.to_string()).unwrap_or_default();
        let _ = writeln!(out, "{},{},{},{},{},{},{}", r.q, r.lambda, mu, r.count, r.trace, rhs, r.matches);
    }
    out
}

pub fn reports_to_json(reports: &[TraceReport]) -> String {
    let mut s = serde_json::to_string_pretty(reports).expect("reports serialize");
    s.push('\n');
    s
}
