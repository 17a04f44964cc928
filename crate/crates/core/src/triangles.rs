//! Single-guess triangle estimator with arboricity advice.
//!
//! Given a guess `t̃` for the triangle count and advice `α̃`, the estimator
//! samples a multiset `R` of uniform edges, rejects the advice when `R`
//! carries too much degree mass or too many heavy edges, and otherwise
//! estimates the number of triangles assigned to light edges by sampling
//! edges of `R` proportionally to their degree and a random neighbor of each.
//!
//! Edge heaviness is decided by [`is_heavy`] and memoized in a
//! [`HeavinessCache`] for the whole run, so every edge gets one verdict and
//! the verdicts induce one partition `(E₀, E₁)` of the edges. A triangle is
//! credited to its first `E₀` edge in edge order ([`is_assigned`]).

use alloc::vec::Vec;

use hashbrown::HashMap;

use crate::graph::{Edge, EdgeDegree, Vertex};
use crate::math::{cbrt, ceil_count, ln, pow};
use crate::oracle::{Oracle, OracleError, QueryLedger};
use crate::sampling::CumulativeSampler;
use crate::{param, EstimateOutcome, EstimatorError, Rejection};

/// Largest accuracy parameter the estimator runs with; larger inputs are
/// clamped down to it.
pub const MAX_EPSILON: f64 = 1.0 / 20.0;

/// Degree and triangle thresholds of one run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    /// `γ = max(α̃, t̃^{1/3})`.
    pub gamma: f64,
    /// `τ_d = 8·m·γ² / (ε·t̃)`.
    pub degree: f64,
    /// `τ_t = 12·γ / ε`.
    pub triangles: f64,
    pub m: u64,
    pub eps: f64,
    pub advice: u32,
    pub guess: f64,
}

pub fn compute_thresholds(
    m: u64,
    eps: f64,
    advice: u32,
    guess: f64,
) -> Result<Thresholds, EstimatorError> {
    if m == 0 {
        return Err(param("m", "edge count must be positive"));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(param("eps", "must lie in (0, 1)"));
    }
    if advice == 0 {
        return Err(param("advice", "must be a positive integer"));
    }
    if !(guess > 0.0 && guess.is_finite()) {
        return Err(param("guess", "must be positive and finite"));
    }
    let gamma = (advice as f64).max(cbrt(guess));
    Ok(Thresholds {
        gamma,
        degree: 8.0 * m as f64 * gamma * gamma / (eps * guess),
        triangles: 12.0 * gamma / eps,
        m,
        eps,
        advice,
        guess,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Heavy,
    NotHeavy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CacheEntry {
    pub verdict: Verdict,
    /// Neighbor samples spent deciding the verdict.
    pub samples: u64,
    /// Samples that closed a triangle.
    pub witnessed: u64,
}

/// Per-run memo of heaviness verdicts. A verdict, once stored, is final.
#[derive(Debug, Clone, Default)]
pub struct HeavinessCache {
    entries: HashMap<Edge, CacheEntry>,
}

impl HeavinessCache {
    pub fn new() -> HeavinessCache {
        HeavinessCache::default()
    }

    pub fn get(&self, e: Edge) -> Option<&CacheEntry> {
        self.entries.get(&e)
    }

    pub fn verdict(&self, e: Edge) -> Option<Verdict> {
        self.entries.get(&e).map(|c| c.verdict)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// All stored verdicts in edge order.
    pub fn entries(&self) -> Vec<(Edge, CacheEntry)> {
        let mut out: Vec<_> = self.entries.iter().map(|(&e, &c)| (e, c)).collect();
        out.sort_unstable_by_key(|p| p.0);
        out
    }
}

/// Neighbor samples used to test an edge of degree `d`:
/// `⌈18·(d/τ_t)·ln(10m/δ)⌉`.
pub fn heaviness_samples(degree: u32, th: &Thresholds, delta: f64, m: u64) -> u64 {
    ceil_count(18.0 * degree as f64 / th.triangles * ln(10.0 * m as f64 / delta))
}

/// Heaviness test for one edge, memoized in `cache`.
///
/// Degree-heavy edges (`d(e) > τ_d`) are heavy outright. Otherwise `k`
/// uniform neighbors of the anchor endpoint are tested against the other
/// endpoint, and the edge is heavy iff more than `1.5·k·τ_t/d(e)` of them
/// close a triangle. When `d(e) ≤ 1.5·τ_t` that bound is at least `k`, the
/// verdict is forced, and no samples are drawn.
pub fn is_heavy(
    oracle: &mut Oracle<'_>,
    e: Edge,
    th: &Thresholds,
    delta: f64,
    m: u64,
    cache: &mut HeavinessCache,
) -> Result<Verdict, OracleError> {
    if let Some(v) = cache.verdict(e) {
        return Ok(v);
    }
    let du = oracle.degree(e.u())?;
    let dv = oracle.degree(e.v())?;
    decide(oracle, e, EdgeDegree::from_degrees(e.u(), du, e.v(), dv), th, delta, m, cache)
}

fn decide(
    oracle: &mut Oracle<'_>,
    e: Edge,
    ed: EdgeDegree,
    th: &Thresholds,
    delta: f64,
    m: u64,
    cache: &mut HeavinessCache,
) -> Result<Verdict, OracleError> {
    if let Some(v) = cache.verdict(e) {
        return Ok(v);
    }
    let entry = if ed.degree as f64 > th.degree {
        CacheEntry {
            verdict: Verdict::Heavy,
            samples: 0,
            witnessed: 0,
        }
    } else if 1.5 * th.triangles >= ed.degree as f64 {
        CacheEntry {
            verdict: Verdict::NotHeavy,
            samples: 0,
            witnessed: 0,
        }
    } else {
        let k = heaviness_samples(ed.degree, th, delta, m);
        let bar = 1.5 * k as f64 * th.triangles / ed.degree as f64;
        let y = oracle.count_closing_neighbors(ed.anchor, ed.other, k)?;
        CacheEntry {
            verdict: if y as f64 > bar {
                Verdict::Heavy
            } else {
                Verdict::NotHeavy
            },
            samples: k,
            witnessed: y,
        }
    };
    cache.entries.insert(e, entry);
    Ok(entry.verdict)
}

/// Whether the triangle `{e.u, e.v, w}` is assigned to `e`: `e` is not heavy
/// and precedes every other non-heavy edge of the triangle in edge order.
///
/// The caller must already know that `w` closes a triangle with `e`.
pub fn is_assigned(
    oracle: &mut Oracle<'_>,
    e: Edge,
    w: Vertex,
    th: &Thresholds,
    delta: f64,
    m: u64,
    cache: &mut HeavinessCache,
) -> Result<bool, OracleError> {
    let (Some(a), Some(b)) = (Edge::new(e.u(), w), Edge::new(e.v(), w)) else {
        return Ok(false);
    };
    let mut first_light: Option<Edge> = None;
    for edge in [e, a, b] {
        if is_heavy(oracle, edge, th, delta, m, cache)? == Verdict::NotHeavy
            && first_light.map_or(true, |f| edge < f)
        {
            first_light = Some(edge);
        }
    }
    Ok(first_light == Some(e))
}

/// Inputs of one single-guess run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriangleRunConfig {
    /// Guess `t̃` for the triangle count.
    pub guess: f64,
    /// Accuracy; clamped to at most [`MAX_EPSILON`].
    pub eps: f64,
    /// Failure probability.
    pub delta: f64,
    /// Arboricity advice `α̃`.
    pub advice: u32,
    /// Edge count of the graph behind the oracle.
    pub m: u64,
}

impl TriangleRunConfig {
    pub fn validate(&self) -> Result<(), EstimatorError> {
        if self.m == 0 {
            return Err(param("m", "edge count must be positive"));
        }
        if !(self.guess > 0.0 && self.guess.is_finite()) {
            return Err(param("guess", "must be positive and finite"));
        }
        if !(self.eps > 0.0 && self.eps < 1.0) {
            return Err(param("eps", "must lie in (0, 1)"));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(param("delta", "must lie in (0, 1)"));
        }
        if self.advice == 0 {
            return Err(param("advice", "must be a positive integer"));
        }
        Ok(())
    }

    /// The accuracy actually used.
    pub fn effective_eps(&self) -> f64 {
        self.eps.min(MAX_EPSILON)
    }

    pub fn thresholds(&self) -> Result<Thresholds, EstimatorError> {
        compute_thresholds(self.m, self.effective_eps(), self.advice, self.guess)
    }

    /// `|R| = ⌈max(16·m·τ_t·ln(4/δ)/(ε²·t̃), 30·m·ln(4/δ)/(ε·t̃)^{2/3})⌉`.
    pub fn sample_size(&self, th: &Thresholds) -> u64 {
        let eps = self.effective_eps();
        let m = self.m as f64;
        let l = ln(4.0 / self.delta);
        let first = 16.0 * m * th.triangles * l / (eps * eps * self.guess);
        let second = 30.0 * m * l / pow(eps * self.guess, 2.0 / 3.0);
        ceil_count(first.max(second))
    }

    /// Main-loop length `s = ⌈(d(R)/(|R|·t̃/m))·10·ln(8/δ)/ε²⌉`.
    pub fn loop_count(&self, degree_sum: u128, sample_size: u64) -> u64 {
        let eps = self.effective_eps();
        let per_edge = degree_sum as f64 / sample_size as f64;
        ceil_count(per_edge * self.m as f64 / self.guess * 10.0 * ln(8.0 / self.delta) / (eps * eps))
    }

    /// Rejection bound on `d(R)`: `|R|·α̃·4/δ`.
    pub fn degree_sum_bound(&self, sample_size: u64) -> f64 {
        sample_size as f64 * self.advice as f64 * 4.0 / self.delta
    }

    /// Rejection bound on the heavy fraction of `R`: `(5/2)·(ε·t̃)^{2/3}/m`.
    pub fn heavy_fraction_bound(&self) -> f64 {
        2.5 * pow(self.effective_eps() * self.guess, 2.0 / 3.0) / self.m as f64
    }
}

/// One distinct edge of the sample `R`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SampledEdge {
    pub edge: Edge,
    pub degree: EdgeDegree,
    /// Times the edge was drawn.
    pub multiplicity: u64,
}

/// The multiset `R` with its degree-proportional sampler.
#[derive(Debug, Clone)]
pub struct SampleSet {
    entries: Vec<SampledEdge>,
    size: u64,
    degree_sum: u128,
    sampler: CumulativeSampler,
}

impl SampleSet {
    fn new(entries: Vec<SampledEdge>) -> SampleSet {
        let size = entries.iter().map(|s| s.multiplicity).sum();
        let weights = entries
            .iter()
            .map(|s| s.multiplicity as u128 * s.degree.degree as u128);
        let sampler = CumulativeSampler::new(weights);
        SampleSet {
            degree_sum: sampler.total(),
            entries,
            size,
            sampler,
        }
    }

    pub fn entries(&self) -> &[SampledEdge] {
        &self.entries
    }

    /// `|R|`, counting multiplicity.
    pub fn size(&self) -> u64 {
        self.size
    }

    /// `d(R) = Σ_{e∈R} d(e)`.
    pub fn degree_sum(&self) -> u128 {
        self.degree_sum
    }

    /// Probability that the weighted sampler returns entry `i`.
    pub fn probability(&self, i: usize) -> f64 {
        self.sampler.probability(i)
    }
}

/// Statistics of one run.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TrialStats {
    /// `|R|`.
    pub sample_size: u64,
    pub distinct_sampled: u64,
    /// `d(R)`.
    pub degree_sum: u128,
    /// Members of `R` judged heavy, with multiplicity.
    pub heavy_sampled: u64,
    /// Main-loop length `s`.
    pub loops: u64,
    /// Trials with `χ_i = 1`.
    pub hits: u64,
    /// Trials that found a triangle and invoked the assignment test.
    pub assigned_invocations: u64,
    /// `χ = hits / s`.
    pub chi: f64,
    /// `t̂ = (d(R)·m/|R|)·χ`.
    pub estimate: f64,
}

/// A run evaluated to the end regardless of rejections.
#[derive(Debug, Clone)]
pub struct TriangleRun {
    /// First rejection test that fired, if any.
    pub rejection: Option<Rejection>,
    pub stats: TrialStats,
    pub ledger: QueryLedger,
    pub cache: HeavinessCache,
}

/// Single-guess testable triangle estimator.
pub fn approx_triangles_with_advice(
    oracle: &mut Oracle<'_>,
    cfg: &TriangleRunConfig,
) -> Result<EstimateOutcome<TrialStats>, EstimatorError> {
    let run = run(oracle, cfg, true)?;
    Ok(match run.rejection {
        Some(r) => EstimateOutcome::BadAdvice(r),
        None => EstimateOutcome::Estimate {
            value: run.stats.estimate,
            stats: run.stats,
            ledger: run.ledger,
        },
    })
}

/// Like [`approx_triangles_with_advice`], but keeps going after a rejection
/// test fires so the estimate is defined on every run.
pub fn approx_triangles_unconditional(
    oracle: &mut Oracle<'_>,
    cfg: &TriangleRunConfig,
) -> Result<TriangleRun, EstimatorError> {
    run(oracle, cfg, false)
}

fn run(
    oracle: &mut Oracle<'_>,
    cfg: &TriangleRunConfig,
    stop_on_reject: bool,
) -> Result<TriangleRun, EstimatorError> {
    cfg.validate()?;
    let before = oracle.ledger();
    let th = cfg.thresholds()?;
    let (m, delta) = (cfg.m, cfg.delta);
    let mut cache = HeavinessCache::new();
    let mut stats = TrialStats::default();
    let mut rejection = None;
    let finish = |oracle: &Oracle<'_>, rejection, stats, cache| TriangleRun {
        rejection,
        stats,
        ledger: oracle.ledger() - before,
        cache,
    };

    let r = cfg.sample_size(&th);
    let mut entries = Vec::new();
    for (edge, multiplicity) in oracle.uniform_edges(r)? {
        let du = oracle.degree(edge.u())?;
        let dv = oracle.degree(edge.v())?;
        entries.push(SampledEdge {
            edge,
            degree: EdgeDegree::from_degrees(edge.u(), du, edge.v(), dv),
            multiplicity,
        });
    }
    let set = SampleSet::new(entries);
    cache.entries.reserve(2 * set.entries().len());
    stats.sample_size = set.size();
    stats.distinct_sampled = set.entries().len() as u64;
    stats.degree_sum = set.degree_sum();

    if set.degree_sum() as f64 > cfg.degree_sum_bound(set.size()) {
        rejection = Some(Rejection::DegreeSumReject);
        if stop_on_reject {
            return Ok(finish(oracle, rejection, stats, cache));
        }
    }

    for s in set.entries() {
        if decide(oracle, s.edge, s.degree, &th, delta, m, &mut cache)? == Verdict::Heavy {
            stats.heavy_sampled += s.multiplicity;
        }
    }
    if stats.heavy_sampled as f64 / set.size() as f64 > cfg.heavy_fraction_bound() {
        rejection.get_or_insert(Rejection::HeavyFractionReject);
        if stop_on_reject {
            return Ok(finish(oracle, rejection, stats, cache));
        }
    }

    let loops = cfg.loop_count(set.degree_sum(), set.size());
    stats.loops = loops;
    let draws = set.sampler.counts(oracle.rng(), loops);
    for (s, &count) in set.entries().iter().zip(&draws) {
        if count == 0 {
            continue;
        }
        for (w, hits) in oracle.closing_neighbors(s.degree.anchor, s.degree.other, count)? {
            stats.assigned_invocations += hits;
            if is_assigned(oracle, s.edge, w, &th, delta, m, &mut cache)? {
                stats.hits += hits;
            }
        }
    }
    stats.chi = stats.hits as f64 / loops as f64;
    stats.estimate = set.degree_sum() as f64 * m as f64 / set.size() as f64 * stats.chi;
    Ok(finish(oracle, rejection, stats, cache))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::triangle_counts;
    use crate::generators::{gen_clique, gen_forest_union};
    use crate::graph::Graph;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-9 * b.abs().max(1.0)
    }

    #[test]
    fn thresholds_formula_examples() {
        let t = compute_thresholds(10_000, 0.1, 5, 8000.0).unwrap();
        assert!(close(t.gamma, 20.0));
        assert!(close(t.degree, 40_000.0));
        assert!(close(t.triangles, 2400.0));
        let t = compute_thresholds(10_000, 0.1, 100, 1000.0).unwrap();
        assert_eq!(t.gamma, 100.0);
        let t = compute_thresholds(100, 0.5, 1, 1.0).unwrap();
        assert_eq!((t.gamma, t.degree, t.triangles), (1.0, 1600.0, 24.0));
    }

    #[test]
    fn thresholds_reject_bad_inputs() {
        assert!(compute_thresholds(0, 0.1, 1, 1.0).is_err());
        assert!(compute_thresholds(10, 0.0, 1, 1.0).is_err());
        assert!(compute_thresholds(10, 1.0, 1, 1.0).is_err());
        assert!(compute_thresholds(10, 0.1, 0, 1.0).is_err());
        assert!(compute_thresholds(10, 0.1, 1, 0.0).is_err());
        assert!(compute_thresholds(10, 0.1, 1, -3.0).is_err());
    }

    #[test]
    fn degree_heavy_edge_needs_no_samples() {
        let g = gen_clique(20);
        let m = g.m() as u64;
        // Huge guess drives τ_d below the clique degree.
        let th = compute_thresholds(m, 0.05, 1, 1e12).unwrap();
        assert!(th.degree < 19.0);
        let mut o = Oracle::new(&g, 1);
        let mut cache = HeavinessCache::new();
        let e = Edge::new(0, 1).unwrap();
        assert_eq!(is_heavy(&mut o, e, &th, 0.1, m, &mut cache).unwrap(), Verdict::Heavy);
        assert_eq!(o.ledger().neighbor, 0);
        assert_eq!(cache.get(e).unwrap().samples, 0);
    }

    #[test]
    fn low_degree_edge_is_never_heavy() {
        let g = gen_clique(6);
        let m = g.m() as u64;
        let th = compute_thresholds(m, 0.5, 1, 1.0).unwrap();
        assert!(th.triangles >= 5.0);
        for seed in 0..50 {
            let mut o = Oracle::new(&g, seed);
            let mut cache = HeavinessCache::new();
            let v = is_heavy(&mut o, Edge::new(2, 3).unwrap(), &th, 0.1, m, &mut cache).unwrap();
            assert_eq!(v, Verdict::NotHeavy);
            assert_eq!(o.ledger().neighbor, 0);
        }
    }

    #[test]
    fn memoized_verdict_costs_no_samples() {
        let g = gen_clique(60);
        let m = g.m() as u64;
        let th = compute_thresholds(m, 0.9, 1, 1.0).unwrap();
        let mut o = Oracle::new(&g, 3);
        let mut cache = HeavinessCache::new();
        let e = Edge::new(4, 9).unwrap();
        let first = is_heavy(&mut o, e, &th, 0.1, m, &mut cache).unwrap();
        assert!(o.ledger().neighbor > 0);
        let after = o.ledger();
        let second = is_heavy(&mut o, e, &th, 0.1, m, &mut cache).unwrap();
        assert_eq!(first, second);
        assert_eq!(o.ledger(), after);
    }

    #[test]
    fn assignment_rules() {
        let g = gen_clique(3);
        let m = 3;
        let th = compute_thresholds(m, 0.5, 1, 1.0).unwrap();
        let e01 = Edge::new(0, 1).unwrap();
        let e02 = Edge::new(0, 2).unwrap();
        let e12 = Edge::new(1, 2).unwrap();
        let mut o = Oracle::new(&g, 0);

        let mut cache = HeavinessCache::new();
        assert!(is_assigned(&mut o, e01, 2, &th, 0.1, m, &mut cache).unwrap());
        assert!(!is_assigned(&mut o, e12, 0, &th, 0.1, m, &mut cache).unwrap());

        let heavy = CacheEntry {
            verdict: Verdict::Heavy,
            samples: 0,
            witnessed: 0,
        };
        let mut all_heavy = HeavinessCache::new();
        for e in [e01, e02, e12] {
            all_heavy.entries.insert(e, heavy);
        }
        for (e, w) in [(e01, 2), (e02, 1), (e12, 0)] {
            assert!(!is_assigned(&mut o, e, w, &th, 0.1, m, &mut all_heavy).unwrap());
        }

        // e01 heavy: the triangle falls to e02, the next light edge.
        let mut one_heavy = HeavinessCache::new();
        one_heavy.entries.insert(e01, heavy);
        assert!(is_assigned(&mut o, e02, 1, &th, 0.1, m, &mut one_heavy).unwrap());
        assert!(!is_assigned(&mut o, e12, 0, &th, 0.1, m, &mut one_heavy).unwrap());
    }

    #[test]
    fn forest_estimate_is_zero() {
        let g = gen_forest_union(200, 1, 4).unwrap();
        let cfg = TriangleRunConfig {
            guess: 10.0,
            eps: 0.05,
            delta: 0.1,
            advice: 1,
            m: g.m() as u64,
        };
        for seed in 0..5 {
            let mut o = Oracle::new(&g, seed);
            match approx_triangles_with_advice(&mut o, &cfg).unwrap() {
                EstimateOutcome::Estimate { value, stats, .. } => {
                    assert_eq!(value, 0.0);
                    assert_eq!(stats.assigned_invocations, 0);
                }
                EstimateOutcome::BadAdvice(r) => panic!("unexpected rejection {r:?}"),
            }
        }
    }

    #[test]
    fn estimate_identity_and_ledger() {
        let g = gen_clique(8);
        let m = g.m() as u64;
        let t = triangle_counts(&g).total as f64;
        let cfg = TriangleRunConfig {
            guess: t,
            eps: 0.05,
            delta: 0.1,
            advice: 7,
            m,
        };
        let mut o = Oracle::new(&g, 11);
        let run = approx_triangles_unconditional(&mut o, &cfg).unwrap();
        let s = run.stats;
        assert_eq!(run.rejection, None);
        assert_eq!(
            s.estimate,
            s.degree_sum as f64 * m as f64 / s.sample_size as f64 * s.chi
        );
        assert!((0.0..=1.0).contains(&s.chi));
        assert_eq!(run.ledger, o.ledger());
        assert_eq!(run.ledger.uniform_edge, s.sample_size);
        let th = cfg.thresholds().unwrap();
        assert_eq!(s.sample_size, cfg.sample_size(&th));
        assert!((s.estimate - t).abs() < 0.05 * t, "estimate {} vs {t}", s.estimate);
    }

    #[test]
    fn eps_is_clamped() {
        let cfg = TriangleRunConfig {
            guess: 1.0,
            eps: 0.5,
            delta: 0.1,
            advice: 1,
            m: 10,
        };
        assert_eq!(cfg.effective_eps(), MAX_EPSILON);
        assert_eq!(cfg.thresholds().unwrap().eps, MAX_EPSILON);
    }

    #[test]
    fn invalid_config_is_rejected_before_queries() {
        let g = gen_clique(4);
        let mut o = Oracle::new(&g, 0);
        let mut cfg = TriangleRunConfig {
            guess: 4.0,
            eps: 0.05,
            delta: 0.1,
            advice: 1,
            m: 0,
        };
        assert!(approx_triangles_with_advice(&mut o, &cfg).is_err());
        cfg.m = 6;
        cfg.guess = 0.0;
        assert!(approx_triangles_with_advice(&mut o, &cfg).is_err());
        assert_eq!(o.ledger().total(), 0);
    }

    #[test]
    fn degree_sum_gate_fires_on_dense_graph_with_tiny_advice() {
        // K40: every edge has degree 39 > 4·α̃/δ = 4·1/0.5 = 8.
        let g = gen_clique(40);
        let cfg = TriangleRunConfig {
            guess: 9880.0,
            eps: 0.05,
            delta: 0.5,
            advice: 1,
            m: g.m() as u64,
        };
        let mut o = Oracle::new(&g, 0);
        let out = approx_triangles_with_advice(&mut o, &cfg).unwrap();
        assert_eq!(out, EstimateOutcome::BadAdvice(Rejection::DegreeSumReject));
    }

    #[test]
    fn budget_exhaustion_propagates() {
        let g = gen_clique(10);
        let cfg = TriangleRunConfig {
            guess: 120.0,
            eps: 0.05,
            delta: 0.1,
            advice: 9,
            m: g.m() as u64,
        };
        let mut o = Oracle::new(&g, 0).with_budget(1000);
        let err = approx_triangles_with_advice(&mut o, &cfg).unwrap_err();
        assert_eq!(err, EstimatorError::Oracle(OracleError::BudgetExhausted { budget: 1000 }));
    }

    #[test]
    fn sample_set_sampler_is_degree_proportional() {
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (2, 3), (1, 3), (3, 4)]).unwrap();
        let entries: Vec<SampledEdge> = g
            .edges()
            .iter()
            .enumerate()
            .map(|(i, &e)| SampledEdge {
                edge: e,
                degree: g.edge_degree(e).unwrap(),
                multiplicity: i as u64 + 1,
            })
            .collect();
        let set = SampleSet::new(entries.clone());
        let total: u128 = entries
            .iter()
            .map(|s| s.multiplicity as u128 * s.degree.degree as u128)
            .sum();
        assert_eq!(set.degree_sum(), total);
        assert_eq!(set.size(), 15);
        let mut sum = 0.0;
        for (i, s) in entries.iter().enumerate() {
            let p = set.probability(i);
            assert!(close(p, (s.multiplicity * s.degree.degree as u64) as f64 / total as f64));
            sum += p;
        }
        assert!(close(sum, 1.0));
    }
}
