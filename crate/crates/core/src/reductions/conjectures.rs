//! Empirical checks of the six conjectured constructions one order up:
//!
//! | id | source          | candidate            | target            |
//! |----|-----------------|----------------------|-------------------|
//! | 1  | 2n-gon          | `(a_n, T(a))`        | (2n+1)-gon        |
//! | 2  | 2n-gon          | `(u, T(a))`          | (2n+1)-gon        |
//! | 3  | (2n+1)-gon      | `(T(a), a_1)`        | dual (2n+2)-gon   |
//! | 4  | (2n+1)-gon      | `(T(a), u)`          | dual (2n+2)-gon   |
//! | 5  | dual (2n+1)-gon | `(a_n, T(a))`        | dual (2n+2)-gon   |
//! | 6  | dual (2n+1)-gon | `(u, T(a))`          | dual (2n+2)-gon   |
//!
//! The constant forms are claimed to work exactly when `T(u, …, u) = (u, …, u)`;
//! both directions are tested.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{append_output, extend_degenerate, fixed_point, prepend_output, Construction, End, Extension, Filler};
use crate::engine::FiniteMap;
use crate::error::{Error, Result};
use crate::search::{enumerate, SearchSpec};
use crate::verifier::{check_single, Counterexample};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FirstFailure {
    pub source: FiniteMap,
    pub candidate: FiniteMap,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u: Option<u32>,
    /// Absent when the candidate unexpectedly solves the target equation
    /// although the fixed-point condition fails.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample<u32>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjectureReport {
    pub id: u8,
    pub n: usize,
    pub target: String,
    pub q: u32,
    pub population: String,
    pub sources: usize,
    /// The case is a proven statement, so the run validates the harness.
    pub proven: bool,
    pub passed: u64,
    pub failed: u64,
    /// Constant forms: `(source, u)` pairs violating `T(u, …, u) = (u, …, u)`.
    pub fixed_point_violations: u64,
    /// Violating pairs whose candidate was checked against the target.
    pub reverse_checked: u64,
    /// Violating pairs whose candidate nevertheless solves the target.
    pub reverse_failed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<FirstFailure>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl ConjectureReport {
    /// Any counterexample, in either direction.
    pub fn has_failure(&self) -> bool {
        self.failed > 0 || self.reverse_failed > 0
    }
}

fn gon(n: usize, dual: bool) -> String {
    if dual {
        format!("dual {n}-gon")
    } else {
        format!("{n}-gon")
    }
}

/// `(source order, source dual, target order, target dual)` for conjecture `id` at `n`.
fn orders(id: u8, n: usize) -> (usize, bool, usize, bool) {
    match id {
        1 | 2 => (2 * n, false, 2 * n + 1, false),
        3 | 4 => (2 * n + 1, false, 2 * n + 2, true),
        _ => (2 * n + 1, true, 2 * n + 2, true),
    }
}

fn candidate(id: u8, t: &FiniteMap, u: Option<u32>) -> Result<FiniteMap> {
    let f = u.map_or(if id <= 2 || id >= 5 { Filler::Arg(End::Last) } else { Filler::Arg(End::First) }, Filler::Const);
    match id {
        3 | 4 => append_output(t, f),
        _ => prepend_output(t, f),
    }
}

/// Source solutions of order `n` over carrier size `q`, sorted, with a
/// description of where they came from.
struct Population {
    description: String,
    maps: Vec<FiniteMap>,
}

fn enumerated(n: usize, dual: bool, q: u32) -> Result<Vec<FiniteMap>> {
    Ok(enumerate(&SearchSpec::new(n, dual, q))?.solutions)
}

fn finish(description: String, mut maps: Vec<FiniteMap>, n: usize, dual: bool) -> Result<Population> {
    maps.sort();
    maps.dedup();
    // Generated sources are re-verified so that the population is exactly
    // a set of solutions.
    let ok: Vec<bool> = maps.par_iter().map(|t| check_single(n, dual, t).map(|v| v.holds)).collect::<Result<_>>()?;
    let dropped = ok.iter().filter(|&&ok| !ok).count();
    let maps = maps.into_iter().zip(ok).filter_map(|(t, ok)| ok.then_some(t)).collect();
    let description =
        if dropped == 0 { description } else { format!("{description}; {dropped} generated maps failed verification") };
    Ok(Population { description, maps })
}

fn dual_octagons(q: u32) -> Result<Vec<FiniteMap>> {
    let mut out = Vec::new();
    for (c, dual) in [(Construction::DualOctagonFromHeptagon, false), (Construction::DualOctagonFromDualHeptagon, true)] {
        for t in enumerated(7, dual, q)? {
            out.push(c.build(&t)?);
            for u in 0..q {
                if let Ok(m) = c.build_const(&t, u) {
                    out.push(m);
                }
            }
        }
    }
    Ok(out)
}

fn population(n: usize, dual: bool, q: u32) -> Result<Population> {
    let name = gon(n, dual);
    match (n, dual) {
        (3..=7, _) => {
            let maps = enumerated(n, dual, q)?;
            Ok(Population { description: format!("all {name} solutions at q={q} (exhaustive search)"), maps })
        }
        (8, false) => {
            let mut maps = Vec::new();
            for t in enumerated(7, false, q)? {
                maps.push(extend_degenerate(&t, 7, Extension::OddGonLast)?);
            }
            for t in enumerated(7, true, q)? {
                maps.push(extend_degenerate(&t, 7, Extension::OddDualFirst)?);
            }
            let description = format!(
                "8-gon solutions at q={q} generated by ignoring a new last argument of every 7-gon solution \
                 and a new first argument of every dual 7-gon solution"
            );
            finish(description, maps, n, dual)
        }
        (9, _) => {
            let kind = if dual { Extension::EvenDualLast } else { Extension::EvenDualFirst };
            let maps = dual_octagons(q)?.iter().map(|t| extend_degenerate(t, 8, kind)).collect::<Result<_>>()?;
            let end = if dual { "last" } else { "first" };
            let description = format!(
                "{name} solutions at q={q} generated by ignoring a new {end} argument of the dual 8-gon maps \
                 (T(a,b,c), a), (T(a,b,c), u), (c, S(a,b,c)), (u, S(a,b,c)) over all 7-gon T and dual 7-gon S"
            );
            finish(description, maps, n, dual)
        }
        _ => Err(Error::Parse(format!("no source population for the {name} equation"))),
    }
}

fn run(id: u8, n: usize, q: u32, pop: &Population) -> Result<ConjectureReport> {
    let (_, _, m, target_dual) = orders(id, n);
    let constant = id % 2 == 0;
    // (passed, failed, violations, reverse_checked, reverse_failed, failure)
    type Tally = (u64, u64, u64, u64, u64, Option<(bool, FirstFailure)>);
    let per_source: Vec<Tally> = pop
        .maps
        .par_iter()
        .map(|t| -> Result<Tally> {
            let mut tally: Tally = (0, 0, 0, 0, 0, None);
            let us: Vec<Option<u32>> = if constant { (0..q).map(Some).collect() } else { vec![None] };
            for u in us {
                let cand = candidate(id, t, u)?;
                let verdict = check_single(m, target_dual, &cand)?;
                let fixed = u.map_or(true, |u| fixed_point(t, u).is_ok());
                let fail = |counterexample| FirstFailure { source: t.clone(), candidate: cand.clone(), u, counterexample };
                if fixed {
                    if verdict.holds {
                        tally.0 += 1;
                    } else {
                        tally.1 += 1;
                        if tally.5.as_ref().map_or(true, |(fwd, _)| !fwd) {
                            tally.5 = Some((true, fail(verdict.counterexample.clone())));
                        }
                    }
                } else {
                    tally.2 += 1;
                    tally.3 += 1;
                    if verdict.holds {
                        tally.4 += 1;
                        if tally.5.is_none() {
                            tally.5 = Some((false, fail(None)));
                        }
                    }
                }
            }
            Ok(tally)
        })
        .collect::<Result<_>>()?;
    let mut report = ConjectureReport {
        id,
        n,
        target: gon(m, target_dual),
        q,
        population: pop.description.clone(),
        sources: pop.maps.len(),
        proven: n <= 3,
        passed: 0,
        failed: 0,
        fixed_point_violations: 0,
        reverse_checked: 0,
        reverse_failed: 0,
        first_failure: None,
        error: None,
    };
    let mut reverse_failure = None;
    for (p, f, v, rc, rf, failure) in per_source {
        report.passed += p;
        report.failed += f;
        report.fixed_point_violations += v;
        report.reverse_checked += rc;
        report.reverse_failed += rf;
        match failure {
            Some((true, ff)) if report.first_failure.is_none() => report.first_failure = Some(ff),
            Some((false, ff)) if reverse_failure.is_none() => reverse_failure = Some(ff),
            _ => {}
        }
    }
    if report.first_failure.is_none() {
        report.first_failure = reverse_failure;
    }
    Ok(report)
}

/// Runs conjectures 1–6 for every `n` whose target order is at most
/// `max_n`. Populations that cannot be built (e.g. over budget) yield a
/// report with `error` set; the other reports are unaffected.
pub fn check_conjectures(q: u32, max_n: usize) -> Result<Vec<ConjectureReport>> {
    if q == 0 {
        return Err(Error::InvalidMap("carrier size must be at least 1".into()));
    }
    let mut cache: Vec<((usize, bool), std::result::Result<Population, Error>)> = Vec::new();
    let mut reports = Vec::new();
    for id in 1..=6u8 {
        let first_n = if id <= 2 { 2 } else { 1 };
        for n in first_n.. {
            let (s, s_dual, m, m_dual) = orders(id, n);
            if m > max_n {
                break;
            }
            if !cache.iter().any(|(key, _)| *key == (s, s_dual)) {
                cache.push(((s, s_dual), population(s, s_dual, q)));
            }
            let pop = &cache.iter().find(|(key, _)| *key == (s, s_dual)).expect("cached").1;
            let report = match pop {
                Ok(pop) => run(id, n, q, pop)?,
                Err(e) => ConjectureReport {
                    id,
                    n,
                    target: gon(m, m_dual),
                    q,
                    population: format!("{} solutions at q={q}", gon(s, s_dual)),
                    sources: 0,
                    proven: n <= 3,
                    passed: 0,
                    failed: 0,
                    fixed_point_violations: 0,
                    reverse_checked: 0,
                    reverse_failed: 0,
                    first_failure: None,
                    error: Some(e.to_string()),
                },
            };
            reports.push(report);
        }
    }
    Ok(reports)
}
