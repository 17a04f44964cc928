//! Guess descent, confidence amplification and advice doubling.
//!
//! The single-guess estimators need a guess that is not far above the true
//! value. [`search`] walks the guesses `U, U/2, U/4, …` and at each one runs
//! the estimator `k_j` times, accepting the smallest output once it clears
//! `(1 − ε)·t̃_j`. An estimator run whose guess overshoots the truth returns a
//! small value with noticeable probability, so the minimum over `k_j` runs
//! keeps the descent going until the guess is close.
//!
//! One search succeeds with probability at least 4/5; the `testable_*`
//! drivers repeat it `⌈20·log₂(1/δ)⌉` times and take a majority vote on
//! rejection and the median of the values. The `adaptive_*` drivers double
//! the advice until it is accepted.

use alloc::vec::Vec;

use crate::edges::{approx_edges_with_advice, EdgeRunConfig};
use crate::math::{ceil_count, ln, log2, pow};
use crate::oracle::{Oracle, QueryLedger};
use crate::triangles::{approx_triangles_with_advice, TriangleRunConfig};
use crate::{param, EstimateOutcome, EstimatorError, Rejection};

/// Result of a search or of an amplified estimator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SearchResult {
    BadAdvice(Rejection),
    Value(f64),
}

impl SearchResult {
    pub fn value(self) -> Option<f64> {
        match self {
            SearchResult::Value(v) => Some(v),
            SearchResult::BadAdvice(_) => None,
        }
    }

    pub fn is_bad_advice(self) -> bool {
        matches!(self, SearchResult::BadAdvice(_))
    }
}

impl<S> From<EstimateOutcome<S>> for SearchResult {
    fn from(o: EstimateOutcome<S>) -> SearchResult {
        match o {
            EstimateOutcome::BadAdvice(r) => SearchResult::BadAdvice(r),
            EstimateOutcome::Estimate { value, .. } => SearchResult::Value(value),
        }
    }
}

/// One guess of the descent.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchStep {
    pub guess: f64,
    /// Failure parameter handed to every run at this guess.
    pub delta: f64,
    /// Scheduled run count `k_j`.
    pub planned: u64,
    /// Outputs of the runs actually made, in order.
    pub values: Vec<f64>,
    pub accepted: bool,
}

impl SearchStep {
    pub fn min_value(&self) -> Option<f64> {
        self.values.iter().copied().reduce(f64::min)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SearchTrace {
    pub steps: Vec<SearchStep>,
    /// Index of the accepted step, if any.
    pub accepted: Option<usize>,
    pub output: Option<SearchResult>,
}

impl SearchTrace {
    /// `Σ_j k_j·δ_j` over the steps taken.
    pub fn failure_mass(&self) -> f64 {
        self.steps.iter().map(|s| s.planned as f64 * s.delta).sum()
    }
}

/// Run count and failure parameter at step `j`: the least fixed point of
/// `k = ⌈8·ln(1/δ)/ε⌉` with `δ = 1/(40·(j+1)²·k)`.
///
/// Every step then contributes `k_j·δ_j = 1/(40·(j+1)²)`, so a whole trace
/// stays below `π²/240 < 1/5`.
pub fn step_schedule(j: u32, eps: f64) -> (u64, f64) {
    let base = 40.0 * pow(j as f64 + 1.0, 2.0);
    let mut k = 1u64;
    loop {
        let next = ceil_count(8.0 * ln(base * k as f64) / eps).max(1);
        if next == k {
            return (k, 1.0 / (base * k as f64));
        }
        k = next;
    }
}

/// Guess descent from `upper` down to 1.
///
/// `run(guess, delta)` is one call of the single-guess estimator. A
/// `BadAdvice` from any call ends the search with that result. Runs at a
/// guess stop as soon as one output falls below the acceptance threshold,
/// since the minimum is then already known to fail. Returns 0 when every
/// guess down to 1 is rejected.
pub fn search<F>(upper: f64, eps: f64, mut run: F) -> Result<(SearchResult, SearchTrace), EstimatorError>
where
    F: FnMut(f64, f64) -> Result<SearchResult, EstimatorError>,
{
    if !(upper.is_finite() && upper >= 0.0) {
        return Err(param("upper", "must be finite and non-negative"));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(param("eps", "must lie in (0, 1)"));
    }
    let mut trace = SearchTrace::default();
    let mut guess = upper;
    let mut j = 0u32;
    while guess >= 1.0 {
        let (planned, delta) = step_schedule(j, eps);
        let bar = (1.0 - eps) * guess;
        let mut step = SearchStep {
            guess,
            delta,
            planned,
            values: Vec::new(),
            accepted: false,
        };
        let mut below = false;
        for _ in 0..planned {
            match run(guess, delta)? {
                SearchResult::BadAdvice(r) => {
                    trace.steps.push(step);
                    let out = SearchResult::BadAdvice(r);
                    trace.output = Some(out);
                    return Ok((out, trace));
                }
                SearchResult::Value(v) => {
                    step.values.push(v);
                    if v < bar {
                        below = true;
                        break;
                    }
                }
            }
        }
        if !below {
            let x = step.min_value().unwrap_or(0.0);
            step.accepted = true;
            trace.steps.push(step);
            trace.accepted = Some(trace.steps.len() - 1);
            let out = SearchResult::Value(x);
            trace.output = Some(out);
            return Ok((out, trace));
        }
        trace.steps.push(step);
        guess /= 2.0;
        j += 1;
    }
    trace.output = Some(SearchResult::Value(0.0));
    Ok((SearchResult::Value(0.0), trace))
}

/// Outcome of an amplified (testable) estimator.
#[derive(Debug, Clone, PartialEq)]
pub struct TestableOutcome {
    pub result: SearchResult,
    /// Searches run, `⌈20·log₂(1/δ)⌉`.
    pub repetitions: u64,
    /// Searches that ended in `BadAdvice`.
    pub rejections: u64,
    pub traces: Vec<SearchTrace>,
    /// Queries issued by all searches.
    pub ledger: QueryLedger,
}

/// Outcome of an advice-doubling driver.
#[derive(Debug, Clone, PartialEq)]
pub struct AdaptiveOutcome {
    pub value: f64,
    /// The advice that was accepted.
    pub advice: u32,
    /// Advice values tried, including the accepted one.
    pub attempts: u32,
    pub ledger: QueryLedger,
}

/// Amplification count `⌈20·log₂(1/δ)⌉`.
pub fn amplification_count(delta: f64) -> u64 {
    ceil_count(20.0 * log2(1.0 / delta)).max(1)
}

fn check_common(eps: f64, delta: f64, advice: u32) -> Result<(), EstimatorError> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(param("eps", "must lie in (0, 1)"));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(param("delta", "must lie in (0, 1)"));
    }
    if advice == 0 {
        return Err(param("advice", "must be a positive integer"));
    }
    Ok(())
}

/// Runs `k` searches and combines them: `BadAdvice` when a strict majority
/// rejects, otherwise the lower median of the returned values.
fn amplify<F>(oracle: &mut Oracle<'_>, delta: f64, mut one: F) -> Result<TestableOutcome, EstimatorError>
where
    F: FnMut(&mut Oracle<'_>) -> Result<(SearchResult, SearchTrace), EstimatorError>,
{
    let before = oracle.ledger();
    let k = amplification_count(delta);
    let mut values = Vec::new();
    let mut traces = Vec::new();
    let mut first_rejection = None;
    let mut rejections = 0;
    for _ in 0..k {
        let (res, trace) = one(oracle)?;
        traces.push(trace);
        match res {
            SearchResult::Value(v) => values.push(v),
            SearchResult::BadAdvice(r) => {
                rejections += 1;
                first_rejection.get_or_insert(r);
            }
        }
    }
    let result = match first_rejection {
        Some(r) if 2 * rejections > k => SearchResult::BadAdvice(r),
        _ => {
            values.sort_by(f64::total_cmp);
            SearchResult::Value(values[(values.len() - 1) / 2])
        }
    };
    Ok(TestableOutcome {
        result,
        repetitions: k,
        rejections,
        traces,
        ledger: oracle.ledger() - before,
    })
}

/// Testable triangle estimator: `BadAdvice`, or an estimate within
/// `(1 ± ε)·t` with probability at least `1 − δ`.
pub fn testable_triangles(
    oracle: &mut Oracle<'_>,
    m: u64,
    eps: f64,
    delta: f64,
    advice: u32,
) -> Result<TestableOutcome, EstimatorError> {
    check_common(eps, delta, advice)?;
    if m == 0 {
        return Err(param("m", "edge count must be positive"));
    }
    amplify(oracle, delta, |oracle| triangle_search(oracle, m, eps, advice))
}

/// One guess descent for the triangle count from `U = m^{3/2}`, with the
/// single-guess estimator run at accuracy `ε/20`. Succeeds with probability
/// at least 4/5.
pub fn triangle_search(
    oracle: &mut Oracle<'_>,
    m: u64,
    eps: f64,
    advice: u32,
) -> Result<(SearchResult, SearchTrace), EstimatorError> {
    if m == 0 {
        return Err(param("m", "edge count must be positive"));
    }
    search(pow(m as f64, 1.5), eps, |guess, delta| {
        let cfg = TriangleRunConfig {
            guess,
            eps: eps / 20.0,
            delta,
            advice,
            m,
        };
        Ok(approx_triangles_with_advice(oracle, &cfg)?.into())
    })
}

/// Testable edge estimator: `BadAdvice`, or an estimate within `(1 ± ε)·m`
/// with probability at least `1 − δ`.
pub fn testable_edges(
    oracle: &mut Oracle<'_>,
    n: u64,
    eps: f64,
    delta: f64,
    advice: u32,
) -> Result<TestableOutcome, EstimatorError> {
    check_common(eps, delta, advice)?;
    if n == 0 {
        return Err(param("n", "vertex count must be positive"));
    }
    amplify(oracle, delta, |oracle| edge_search(oracle, n, eps, advice))
}

/// One guess descent for the edge count from `U = n²`, with the single-guess
/// estimator run at accuracy `ε/10`.
pub fn edge_search(
    oracle: &mut Oracle<'_>,
    n: u64,
    eps: f64,
    advice: u32,
) -> Result<(SearchResult, SearchTrace), EstimatorError> {
    if n == 0 {
        return Err(param("n", "vertex count must be positive"));
    }
    search(n as f64 * n as f64, eps, |guess, delta| {
        let cfg = EdgeRunConfig {
            guess,
            eps: eps / 10.0,
            delta,
            advice,
            n,
        };
        Ok(approx_edges_with_advice(oracle, &cfg)?.into())
    })
}

fn ceil_log2(x: u64) -> u32 {
    if x <= 1 {
        0
    } else {
        64 - (x - 1).leading_zeros()
    }
}

fn adaptive<F>(oracle: &mut Oracle<'_>, size: u64, delta: f64, mut one: F) -> Result<AdaptiveOutcome, EstimatorError>
where
    F: FnMut(&mut Oracle<'_>, f64, u32) -> Result<TestableOutcome, EstimatorError>,
{
    let before = oracle.ledger();
    let rounds = ceil_log2(size).max(1);
    let per_call = delta / (10.0 * rounds as f64);
    for j in 1..=rounds {
        let advice = 1u32 << j.min(31);
        let out = one(oracle, per_call, advice)?;
        if let SearchResult::Value(value) = out.result {
            return Ok(AdaptiveOutcome {
                value,
                advice,
                attempts: j,
                ledger: oracle.ledger() - before,
            });
        }
    }
    Err(EstimatorError::AllAdviceRejected)
}

/// Triangle estimate without advice: tries `α̃ = 2, 4, …, 2^⌈log₂ m⌉` and
/// returns the first accepted estimate.
pub fn adaptive_triangles(
    oracle: &mut Oracle<'_>,
    m: u64,
    eps: f64,
    delta: f64,
) -> Result<AdaptiveOutcome, EstimatorError> {
    check_common(eps, delta, 1)?;
    adaptive(oracle, m, delta, |o, d, a| testable_triangles(o, m, eps, d, a))
}

/// Edge estimate without advice: tries `ᾱ = 2, 4, …, 2^⌈log₂ n⌉`.
pub fn adaptive_edges(
    oracle: &mut Oracle<'_>,
    n: u64,
    eps: f64,
    delta: f64,
) -> Result<AdaptiveOutcome, EstimatorError> {
    check_common(eps, delta, 1)?;
    adaptive(oracle, n, delta, |o, d, a| testable_edges(o, n, eps, d, a))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schedule_is_a_fixed_point() {
        for j in 0..30 {
            for eps in [0.05, 0.2, 0.5] {
                let (k, d) = step_schedule(j, eps);
                assert_eq!(k, ceil_count(8.0 * ln(1.0 / d) / eps));
                let mass = k as f64 * d;
                let want = 1.0 / (40.0 * ((j + 1) as f64).powi(2));
                assert!((mass - want).abs() < 1e-12);
            }
        }
        let (k, _) = step_schedule(0, 0.2);
        // 40·ln(40·386) = 385.7.
        assert_eq!(k, 386);
    }

    #[test]
    fn exact_estimator_is_found() {
        for v in [1.0, 7.0, 100.0, 12345.0] {
            let (res, trace) = search(16.0 * v, 0.2, |_, _| Ok(SearchResult::Value(v))).unwrap();
            assert_eq!(res, SearchResult::Value(v));
            let acc = &trace.steps[trace.accepted.unwrap()];
            assert!(acc.guess <= v / 0.8);
            assert!(trace.steps[..trace.steps.len() - 1].iter().all(|s| s.guess > v / 0.8));
            assert!(trace.failure_mass() <= 0.2);
        }
    }

    #[test]
    fn bad_advice_aborts_at_first_run() {
        let mut calls = 0;
        let (res, trace) = search(1e6, 0.2, |_, _| {
            calls += 1;
            Ok(SearchResult::BadAdvice(Rejection::DegreeSumReject))
        })
        .unwrap();
        assert_eq!(res, SearchResult::BadAdvice(Rejection::DegreeSumReject));
        assert_eq!(calls, 1);
        assert_eq!(trace.steps.len(), 1);
    }

    #[test]
    fn zero_truth_bottoms_out() {
        let (res, trace) = search(1024.0, 0.2, |_, _| Ok(SearchResult::Value(0.0))).unwrap();
        assert_eq!(res, SearchResult::Value(0.0));
        assert_eq!(trace.accepted, None);
        assert_eq!(trace.steps.len(), 11);
        for w in trace.steps.windows(2) {
            assert_eq!(w[1].guess, w[0].guess / 2.0);
        }
    }

    #[test]
    fn amplification_counts() {
        assert_eq!(amplification_count(0.1), 67);
        assert_eq!(amplification_count(0.5), 20);
        assert_eq!(ceil_log2(1), 0);
        assert_eq!(ceil_log2(2), 1);
        assert_eq!(ceil_log2(5), 3);
        assert_eq!(ceil_log2(1024), 10);
    }
}
