//! The acceptance suite: ten statistical and structural checks with fixed
//! seeds, tolerances and runtime limits.
//!
//! Every check is deterministic given its seeds; report lines carry counts
//! and measured statistics but no timings, so two runs print the same bytes.

use std::collections::BTreeSet;
use std::fmt;
use std::time::{Duration, Instant};

use arbor_core::exact::{brute_force_triangle_count, degeneracy, triangle_count, triangle_counts};
use arbor_core::generators::{
    gen_clique, gen_er, gen_forest_union, gen_lower_bound_family, gen_planted_clique, CliquePlacement,
    LowerBoundKind,
};
use arbor_core::search::{testable_triangles, triangle_search, SearchResult};
use arbor_core::{
    approx_edges_with_advice, approx_triangles_unconditional, approx_triangles_with_advice, compute_thresholds,
    is_heavy, EdgeRunConfig, EstimateOutcome, EstimatorError, Graph, HeavinessCache, Oracle, OracleError,
    Rejection, TriangleRunConfig, Verdict, Vertex,
};

use crate::experiment::{run_on_graph_with, write_csv, Algorithm, ExperimentConfig, ExperimentError};
use crate::sweep::{run_scaling_sweep, SweepConfig, SweepFamily};
use crate::source::Generator;

pub const CRITERIA: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct CriterionOutcome {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub limit: Duration,
}

impl fmt::Display for CriterionOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{status}] {:>2} {:<22} {}", self.id, self.name, self.detail)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct AcceptanceReport {
    pub outcomes: Vec<CriterionOutcome>,
}

impl AcceptanceReport {
    pub fn all_passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.passed)
    }
}

impl fmt::Display for AcceptanceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for o in &self.outcomes {
            writeln!(f, "{o}")?;
        }
        let passed = self.outcomes.iter().filter(|o| o.passed).count();
        writeln!(f, "{passed}/{} criteria passed", self.outcomes.len())
    }
}

type Check = Result<(bool, String), ExperimentError>;

const SPECS: [(&str, u64, fn() -> Check); CRITERIA] = [
    ("exact-oracles", 5, exact_oracles),
    ("partition-goodness", 60, partition_goodness),
    ("completeness", 600, completeness),
    ("soundness", 600, soundness),
    ("adversarial-family", 600, adversarial_family),
    ("upper-bias", 300, upper_bias),
    ("edge-estimator", 300, edge_estimator),
    ("search-contract", 900, search_contract),
    ("scaling-shape", 900, scaling_shape),
    ("determinism-metering", 300, determinism_metering),
];

/// Runs criterion `id` (1-based).
pub fn run_criterion(id: usize) -> CriterionOutcome {
    assert!((1..=CRITERIA).contains(&id), "criterion {id} does not exist");
    let (name, secs, check) = SPECS[id - 1];
    let limit = Duration::from_secs(secs);
    let start = Instant::now();
    let result = check();
    let elapsed = start.elapsed();
    let (mut passed, mut detail) = match result {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    if elapsed > limit {
        passed = false;
        detail.push_str(&format!("; runtime limit {secs} s exceeded"));
    }
    CriterionOutcome {
        id,
        name,
        passed,
        detail,
        elapsed,
        limit,
    }
}

pub fn run_acceptance() -> AcceptanceReport {
    AcceptanceReport {
        outcomes: (1..=CRITERIA).map(run_criterion).collect(),
    }
}

fn par<T: Send>(count: u64, f: impl Fn(u64) -> T + Sync) -> Result<Vec<T>, ExperimentError> {
    Ok(crate::experiment::par_map(count, f)?)
}

fn collect<T>(v: Vec<Result<T, EstimatorError>>) -> Result<Vec<T>, ExperimentError> {
    Ok(v.into_iter().collect::<Result<_, _>>()?)
}

fn within(value: f64, target: f64, eps: f64) -> bool {
    value >= (1.0 - eps) * target && value <= (1.0 + eps) * target
}

fn build(g: Result<Graph, arbor_core::GraphError>) -> Result<Graph, ExperimentError> {
    g.map_err(|e| ExperimentError::Config {
        field: "graph",
        reason: e.to_string(),
    })
}

fn plant(base: &Graph, k: usize, seed: u64) -> Result<Graph, ExperimentError> {
    build(gen_planted_clique(base, k, CliquePlacement::Random, seed).map(|p| p.graph))
}

fn exact_oracles() -> Check {
    let mut mismatched = 0;
    let mut max_n = 0;
    for i in 0..50u64 {
        let n = 20 + (i as usize * 41) / 50;
        let p = if i % 2 == 0 { 0.1 } else { 0.3 };
        let g = build(gen_er(n, p, 1000 + i))?;
        max_n = max_n.max(n);
        let fast = triangle_count(&g);
        let per_edge: u64 = triangle_counts(&g).per_edge.iter().sum();
        if fast != brute_force_triangle_count(&g) || per_edge != 3 * fast {
            mismatched += 1;
        }
    }
    Ok((
        mismatched == 0 && max_n <= 60,
        format!("50 graphs (n <= {max_n}): {mismatched} mismatches against brute force or sum t(e) = 3t"),
    ))
}

/// `forest_union(200, 2)` with cliques of 40, 22 and 10 planted on random
/// vertices and two adjacent hubs of degree about 50 sharing 12 neighbors.
fn goodness_graph() -> Result<Graph, ExperimentError> {
    let mut g = build(gen_forest_union(200, 2, 11))?;
    for (k, seed) in [(40, 1), (22, 2), (10, 3)] {
        g = plant(&g, k, seed)?;
    }
    let mut pairs: BTreeSet<(Vertex, Vertex)> = g.edges().iter().map(|e| e.endpoints()).collect();
    let (h1, h2) = (198, 199);
    pairs.insert((h1, h2));
    for v in 100..150 {
        pairs.insert((v, h1));
    }
    for v in 138..188 {
        pairs.insert((v, h2));
    }
    build(Graph::from_edges(200, pairs))
}

fn partition_goodness() -> Check {
    let g = goodness_graph()?;
    let m = g.m() as u64;
    let (eps, advice, guess, delta) = (0.9, 1u32, 1.0f64, 0.1);
    // Thresholds recomputed here from their definitions, independent of the estimator.
    let gamma = (advice as f64).max(guess.cbrt());
    let tau_d = 8.0 * m as f64 * gamma * gamma / (eps * guess);
    let tau_t = 12.0 * gamma / eps;
    let th = compute_thresholds(m, eps, advice, guess)?;
    let counts = triangle_counts(&g);
    let edges = g.edges();
    let replays = 500u64;
    let bad = par(replays, |r| -> Result<bool, EstimatorError> {
        let mut oracle = Oracle::new(&g, 50_000 + r);
        let mut cache = HeavinessCache::new();
        let mut violated = false;
        for (i, &e) in edges.iter().enumerate() {
            let heavy = is_heavy(&mut oracle, e, &th, delta, m, &mut cache)? == Verdict::Heavy;
            let d = g.degree(e.u()).min(g.degree(e.v())) as f64;
            let t = counts.per_edge[i] as f64;
            let must_light = d <= tau_d && t <= tau_t;
            let must_heavy = d > tau_d || t > 2.0 * tau_t;
            violated |= (heavy && must_light) || (!heavy && must_heavy);
        }
        Ok(violated)
    })?;
    let bad = collect(bad)?.into_iter().filter(|&b| b).count();
    let frac = bad as f64 / replays as f64;
    Ok((
        frac <= 0.12,
        format!("n = 200, m = {m}, tau_t = {tau_t:.2}: {bad}/{replays} replays violate goodness ({frac:.3} <= 0.12)"),
    ))
}

fn completeness() -> Check {
    let (eps, delta, runs) = (0.2, 0.1, 100u64);
    let mut ok = true;
    let mut parts = Vec::new();
    for (n, alpha, seed) in [(16usize, 2u32, 21u64), (14, 4, 22), (16, 8, 23)] {
        let g = build(gen_forest_union(n, alpha, seed))?;
        let m = g.m() as u64;
        let rejected = par(runs, |i| -> Result<bool, EstimatorError> {
            let mut oracle = Oracle::new(&g, 100_000 * alpha as u64 + i);
            Ok(testable_triangles(&mut oracle, m, eps, delta, alpha)?.result.is_bad_advice())
        })?;
        let rejected = collect(rejected)?.into_iter().filter(|&b| b).count();
        let frac = rejected as f64 / runs as f64;
        ok &= frac <= 0.20;
        parts.push(format!("advice {alpha}: {rejected}/{runs}"));
    }
    Ok((ok, format!("bad-advice frequency <= 0.20; {}", parts.join(", "))))
}

fn soundness() -> Check {
    let (eps, delta) = (0.2, 0.1);
    let g1 = plant(&build(gen_forest_union(16, 2, 31))?, 6, 32)?;
    let g2 = plant(&build(gen_forest_union(14, 3, 33))?, 8, 34)?;
    let pool: [(&Graph, u32); 4] = [(&g1, 1), (&g1, 2), (&g2, 1), (&g2, 4)];
    let per = 25u64;
    let outcomes = par(pool.len() as u64 * per, |i| -> Result<Option<bool>, EstimatorError> {
        let (g, advice) = pool[(i / per) as usize];
        let t = triangle_count(g) as f64;
        let mut oracle = Oracle::new(g, 200_000 + i);
        let out = testable_triangles(&mut oracle, g.m() as u64, eps, delta, advice)?;
        Ok(out.result.value().map(|v| within(v, t, eps)))
    })?;
    let outcomes = collect(outcomes)?;
    let answered: Vec<bool> = outcomes.iter().flatten().copied().collect();
    let good = answered.iter().filter(|&&b| b).count();
    let frac = good as f64 / answered.len().max(1) as f64;
    Ok((
        !answered.is_empty() && frac >= 0.85,
        format!(
            "{} runs, {} bad-advice; {good}/{} answers within (1 +- 0.2)t ({frac:.3} >= 0.85)",
            outcomes.len(),
            outcomes.len() - answered.len(),
            answered.len()
        ),
    ))
}

fn adversarial_family() -> Check {
    let (eps, delta) = (0.2, 0.1);
    let mut ok = true;
    let mut parts = Vec::new();
    for (advice, t_target, seed) in [(3u32, 216u64, 41u64), (4, 729, 42)] {
        for kind in [LowerBoundKind::Two, LowerBoundKind::One] {
            let inst = gen_lower_bound_family(kind, 40, advice, t_target, seed).map_err(|e| {
                ExperimentError::Config {
                    field: "graph",
                    reason: e.to_string(),
                }
            })?;
            let g = &inst.graph;
            let m = g.m() as u64;
            let c = inst.clique_size as u64;
            let clique_triangles = (c * (c - 1) * (c - 2) / 6) as f64;
            let runs = if kind == LowerBoundKind::Two { 25 } else { 10 };
            let results = par(runs, |i| -> Result<SearchResult, EstimatorError> {
                let mut oracle = Oracle::new(g, 300_000 + seed * 1000 + i);
                Ok(testable_triangles(&mut oracle, m, eps, delta, advice)?.result)
            })?;
            let results = collect(results)?;
            match kind {
                LowerBoundKind::Two => {
                    let bad = results
                        .iter()
                        .filter(|r| !matches!(r, SearchResult::BadAdvice(_)))
                        .filter(|r| !within(r.value().unwrap_or(0.0), clique_triangles, eps))
                        .count();
                    let rejected = results.iter().filter(|r| r.is_bad_advice()).count();
                    ok &= bad == 0;
                    parts.push(format!(
                        "two(c={c}, advice {advice}): {rejected} bad-advice, {bad} outside (1 +- 0.2){clique_triangles}"
                    ));
                }
                LowerBoundKind::One => {
                    let cap = eps * (m as f64).powf(1.5);
                    let over = results.iter().filter(|r| r.value().is_some_and(|v| v > cap)).count();
                    ok &= over == 0;
                    parts.push(format!("one(advice {advice}): {over}/{runs} above eps*m^1.5"));
                }
            }
        }
    }
    Ok((ok, parts.join("; ")))
}

fn upper_bias() -> Check {
    let g = build(gen_er(30, 0.3, 61))?;
    let t = triangle_count(&g);
    let cfg = TriangleRunConfig {
        guess: 2.0 * t as f64,
        eps: 0.05,
        delta: 0.1,
        advice: degeneracy(&g),
        m: g.m() as u64,
    };
    let runs = 10_000u64;
    let values = par(runs, |i| -> Result<f64, EstimatorError> {
        let mut oracle = Oracle::new(&g, 400_000 + i);
        Ok(approx_triangles_unconditional(&mut oracle, &cfg)?.stats.estimate)
    })?;
    let values = collect(values)?;
    let mean = values.iter().sum::<f64>() / runs as f64;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (runs - 1) as f64;
    let sd = var.sqrt();
    let bound = t as f64 + 3.0 * sd / 100.0;
    Ok((
        mean <= bound,
        format!("t = {t}, guess = 2t, 10^4 runs: mean {mean:.3} <= t + 3 sd/100 = {bound:.3} (sd {sd:.3})"),
    ))
}

fn edge_estimator() -> Check {
    let (eps, delta, runs) = (0.5, 0.1, 200u64);
    let slack = 3.0 * (delta * (1.0 - delta) / runs as f64).sqrt();

    let g = build(gen_forest_union(2000, 2, 71))?;
    let gate = par(runs, |i| -> Result<bool, EstimatorError> {
        let cfg = EdgeRunConfig {
            guess: g.m() as f64 / 2.0,
            eps,
            delta,
            advice: 2,
            n: g.n() as u64,
        };
        Ok(approx_edges_with_advice(&mut Oracle::new(&g, 500_000 + i), &cfg)?.is_bad_advice())
    })?;
    let gate_rejected = collect(gate)?.into_iter().filter(|&b| b).count();
    let gate_ok = gate_rejected as f64 / runs as f64 <= delta + slack;

    let big = build(gen_forest_union(400_000, 2, 72))?;
    let m = big.m() as f64;
    let envelope = 10.0 * eps / 6.0;
    let accurate = par(runs, |i| -> Result<(bool, bool), EstimatorError> {
        let cfg = EdgeRunConfig {
            guess: m * (0.25 + 0.75 * i as f64 / (runs - 1) as f64),
            eps,
            delta,
            advice: 2,
            n: big.n() as u64,
        };
        let out = approx_edges_with_advice(&mut Oracle::new(&big, 600_000 + i), &cfg)?;
        let sampled = matches!(&out, EstimateOutcome::Estimate { stats, .. } if !stats.exact_branch);
        Ok((out.value().is_some_and(|v| within(v, m, envelope)), sampled))
    })?;
    let accurate = collect(accurate)?;
    let all_sampled = accurate.iter().all(|&(_, s)| s);
    let hits = accurate.iter().filter(|&&(a, _)| a).count();
    let acc_ok = all_sampled && hits as f64 / runs as f64 >= 1.0 - delta - slack;

    let k = gen_clique(30);
    let reject = par(runs, |i| -> Result<bool, EstimatorError> {
        let cfg = EdgeRunConfig {
            guess: k.m() as f64,
            eps,
            delta,
            advice: 1,
            n: k.n() as u64,
        };
        let out = approx_edges_with_advice(&mut Oracle::new(&k, 700_000 + i), &cfg)?;
        Ok(out == EstimateOutcome::BadAdvice(Rejection::HighDegreeEdgeReject))
    })?;
    let rejected = collect(reject)?.into_iter().filter(|&b| b).count();
    let rej_ok = rejected as f64 / runs as f64 >= 1.0 - delta - slack;

    Ok((
        gate_ok && acc_ok && rej_ok,
        format!(
            "gate {gate_rejected}/{runs} rejected on forest(2000, 2); {hits}/{runs} within (1 +- 10 eps/6)m on forest(400000, 2); K30 with advice 1 rejected {rejected}/{runs}"
        ),
    ))
}

fn search_contract() -> Check {
    let eps = 0.2;
    let graphs = [
        ("er(40, 0.3)", build(gen_er(40, 0.3, 81))?),
        ("forest(60, 3)+K10", plant(&build(gen_forest_union(60, 3, 82))?, 10, 83)?),
        ("K12", gen_clique(12)),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (gi, (label, g)) in graphs.iter().enumerate() {
        let t = triangle_count(g) as f64;
        let advice = degeneracy(g);
        let runs = 100u64;
        let hits = par(runs, |i| -> Result<bool, EstimatorError> {
            let mut oracle = Oracle::new(g, 800_000 + 1000 * gi as u64 + i);
            let (res, _) = triangle_search(&mut oracle, g.m() as u64, eps, advice)?;
            Ok(res.value().is_some_and(|v| within(v, t, eps)))
        })?;
        let hits = collect(hits)?.into_iter().filter(|&b| b).count();
        ok &= hits >= 75;
        parts.push(format!("{label}: {hits}/{runs}"));
    }
    Ok((ok, format!("successes >= 75 of 100; {}", parts.join(", "))))
}

fn scaling_shape() -> Check {
    let triangles = run_scaling_sweep(&SweepConfig {
        family: SweepFamily::PlantedCliques {
            base: Generator::Forest { n: 60, alpha: 2, seed: 91 },
            sizes: vec![15, 20, 25, 30],
        },
        advice: None,
        eps: 0.5,
        delta: 0.5,
        seeds: 11,
        base_seed: 92,
    })?;
    let edges = run_scaling_sweep(&SweepConfig {
        family: SweepFamily::ForestEdges {
            n: 500,
            alphas: vec![1, 2, 4, 8],
            seed: 93,
        },
        advice: None,
        eps: 0.5,
        delta: 0.5,
        seeds: 11,
        base_seed: 94,
    })?;
    Ok((
        triangles.spread <= 10.0 && edges.spread <= 10.0,
        format!(
            "measured/curve spread: triangles {:.2} (K15..K30), edges {:.2} (alpha 1..8); both <= 10",
            triangles.spread, edges.spread
        ),
    ))
}

fn determinism_metering() -> Check {
    let mut notes = Vec::new();

    let source = "forest:n=30,alpha=2,seed=1+plant:k=6,seed=2";
    let cfg = ExperimentConfig {
        source: source.parse()?,
        algorithm: Algorithm::TrianglesTestable,
        eps: 0.5,
        delta: 0.5,
        advice: 5,
        guess: None,
        replicas: 6,
        seed: 7,
        budget: None,
        timing: false,
        out: None,
    };
    let g = cfg.source.build()?;
    let t = triangle_count(&g);
    let csv_for = |threads| -> Result<Vec<u8>, ExperimentError> {
        let rows = run_on_graph_with(threads, &cfg, &g, source, t)?;
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf)?;
        Ok(buf)
    };
    let reference = csv_for(Some(1))?;
    let identical = [Some(1), Some(2), Some(4), None]
        .into_iter()
        .map(csv_for)
        .collect::<Result<Vec<_>, _>>()?
        .iter()
        .all(|b| *b == reference);
    notes.push(format!("csv identical across 1/2/4/default threads: {identical}"));

    let k = gen_clique(30);
    let th = compute_thresholds(k.m() as u64, 0.9, 1, 1.0)?;
    let e = k.edges()[0];
    let mut oracle = Oracle::new(&k, 3);
    let mut cache = HeavinessCache::new();
    let first = is_heavy(&mut oracle, e, &th, 0.1, k.m() as u64, &mut cache).map_err(EstimatorError::from)?;
    let after_first = oracle.ledger();
    let second = is_heavy(&mut oracle, e, &th, 0.1, k.m() as u64, &mut cache).map_err(EstimatorError::from)?;
    let extra = oracle.ledger() - after_first;
    let memo_ok = after_first.pair > 0 && extra.total() == 0 && first == second;
    notes.push(format!(
        "memoized is_heavy: first call {} queries, second call {}",
        after_first.total(),
        extra.total()
    ));

    let budget = 10u64;
    let mut o = Oracle::new(&k, 4).with_budget(budget);
    let mut fired_at = None;
    for q in 1..=budget + 1 {
        if let Err(OracleError::BudgetExhausted { .. }) = o.degree(0) {
            fired_at = Some(q);
            break;
        }
    }
    let single_ok = fired_at == Some(budget + 1) && o.ledger().total() == budget;
    notes.push(format!("budget {budget} fired at query {fired_at:?}"));

    let run = TriangleRunConfig {
        guess: t as f64,
        eps: 0.5,
        delta: 0.5,
        advice: 5,
        m: g.m() as u64,
    };
    let free = approx_triangles_with_advice(&mut Oracle::new(&g, 9), &run)?;
    let total = match &free {
        EstimateOutcome::Estimate { ledger, .. } => ledger.total(),
        EstimateOutcome::BadAdvice(r) => return Ok((false, format!("reference run rejected: {r:?}"))),
    };
    let exact_budget = approx_triangles_with_advice(&mut Oracle::new(&g, 9).with_budget(total), &run);
    let short_budget = approx_triangles_with_advice(&mut Oracle::new(&g, 9).with_budget(total - 1), &run);
    let batched_ok = exact_budget.as_ref() == Ok(&free)
        && matches!(short_budget, Err(EstimatorError::Oracle(OracleError::BudgetExhausted { .. })));
    notes.push(format!("batched run of {total} queries: budget {total} ok, budget {} exhausted: {batched_ok}", total - 1));

    Ok((identical && memo_ok && single_ok && batched_ok, notes.join("; ")))
}
