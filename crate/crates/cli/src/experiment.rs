//! Seeded, replicated estimator runs and their CSV rows.
//!
//! Replica `i` of an experiment with base seed `s` runs on an oracle seeded
//! with `s + i`, so results do not depend on how replicas are scheduled over
//! worker threads. Rows are always emitted in replica order.

use std::collections::HashMap;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use arbor_core::exact::triangle_count;
use arbor_core::search::{adaptive_edges, adaptive_triangles, testable_edges, testable_triangles, SearchResult};
use arbor_core::{
    approx_triangles_with_advice, EstimateOutcome, EstimatorError, Graph, Oracle, OracleError, QueryLedger,
    TriangleRunConfig,
};
use clap::ValueEnum;
use rayon::prelude::*;
use thiserror::Error;

use crate::source::{GraphSource, SourceError};

/// Fixed CSV header of [`ResultRow`]s.
pub const CSV_HEADER: [&str; 12] = [
    "seed", "graph_id", "exact", "kind", "estimate", "rel_err", "q_degree", "q_neighbor", "q_pair", "q_edge",
    "q_vertex", "ms",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, ValueEnum)]
pub enum Algorithm {
    /// Amplified triangle estimator with fixed advice.
    TrianglesTestable,
    /// Triangle estimator doubling its advice until accepted.
    TrianglesAdaptive,
    /// Amplified edge estimator with fixed advice.
    EdgesTestable,
    /// Edge estimator doubling its advice until accepted.
    EdgesAdaptive,
    /// One triangle estimator run at a fixed guess.
    SingleGuess,
}

impl Algorithm {
    pub fn counts_edges(self) -> bool {
        matches!(self, Algorithm::EdgesTestable | Algorithm::EdgesAdaptive)
    }

    fn uses_advice(self) -> bool {
        !matches!(self, Algorithm::TrianglesAdaptive | Algorithm::EdgesAdaptive)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub source: GraphSource,
    pub algorithm: Algorithm,
    pub eps: f64,
    pub delta: f64,
    pub advice: u32,
    /// Guess `t̃`; required by [`Algorithm::SingleGuess`] only.
    pub guess: Option<f64>,
    pub replicas: u64,
    pub seed: u64,
    /// Per-replica query budget.
    pub budget: Option<u64>,
    /// Fill the `ms` column with wall time instead of 0.
    pub timing: bool,
    /// CSV destination; standard output when absent.
    pub out: Option<PathBuf>,
}

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("invalid parameter `{field}`: {reason}")]
    Config { field: &'static str, reason: String },
    #[error(transparent)]
    Source(#[from] SourceError),
    #[error(transparent)]
    Estimator(#[from] EstimatorError),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
    #[error("cannot write output: {0}")]
    Csv(#[from] csv::Error),
    #[error("cannot start worker pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

impl ExperimentError {
    pub fn exit_code(&self) -> i32 {
        match self {
            ExperimentError::Config { .. } | ExperimentError::Estimator(_) => 3,
            ExperimentError::Source(e) => e.exit_code(),
            ExperimentError::Io(_) | ExperimentError::Csv(_) | ExperimentError::Pool(_) => 1,
        }
    }
}

fn config_err(field: &'static str, reason: impl Into<String>) -> ExperimentError {
    ExperimentError::Config {
        field,
        reason: reason.into(),
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), ExperimentError> {
        if !(self.eps > 0.0 && self.eps < 1.0) {
            return Err(config_err("eps", format!("{} is not in (0, 1)", self.eps)));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(config_err("delta", format!("{} is not in (0, 1)", self.delta)));
        }
        if self.algorithm.uses_advice() && self.advice == 0 {
            return Err(config_err("advice", "must be at least 1"));
        }
        if self.replicas == 0 {
            return Err(config_err("replicas", "must be at least 1"));
        }
        if self.seed.checked_add(self.replicas - 1).is_none() {
            return Err(config_err("seed", "seed + replicas overflows"));
        }
        match (self.algorithm, self.guess) {
            (Algorithm::SingleGuess, None) => return Err(config_err("guess", "required by single-guess")),
            (_, Some(g)) if !(g > 0.0 && g.is_finite()) => {
                return Err(config_err("guess", format!("{g} is not positive and finite")))
            }
            _ => {}
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowKind {
    Estimate,
    BadAdvice,
    AllRejected,
    BudgetExhausted,
}

impl RowKind {
    pub fn as_str(self) -> &'static str {
        match self {
            RowKind::Estimate => "estimate",
            RowKind::BadAdvice => "bad-advice",
            RowKind::AllRejected => "all-rejected",
            RowKind::BudgetExhausted => "budget-exhausted",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub seed: u64,
    pub graph_id: String,
    pub exact: u64,
    pub kind: RowKind,
    pub estimate: Option<f64>,
    /// `|estimate − exact| / max(exact, 1)`; present iff `kind` is `Estimate`.
    pub rel_err: Option<f64>,
    pub ledger: QueryLedger,
    pub ms: u64,
}

impl ResultRow {
    pub fn record(&self) -> [String; 12] {
        let opt = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
        let l = &self.ledger;
        [
            self.seed.to_string(),
            self.graph_id.clone(),
            self.exact.to_string(),
            self.kind.as_str().to_string(),
            opt(self.estimate),
            opt(self.rel_err),
            l.degree.to_string(),
            l.neighbor.to_string(),
            l.pair.to_string(),
            l.uniform_edge.to_string(),
            l.uniform_vertex.to_string(),
            self.ms.to_string(),
        ]
    }
}

pub fn relative_error(estimate: f64, exact: u64) -> f64 {
    (estimate - exact as f64).abs() / exact.max(1) as f64
}

/// Exact targets keyed by graph id, so each graph is counted once.
#[derive(Debug, Default)]
pub struct ExactCache(HashMap<(String, bool), u64>);

impl ExactCache {
    pub fn get(&mut self, graph_id: &str, g: &Graph, edges: bool) -> u64 {
        *self
            .0
            .entry((graph_id.to_string(), edges))
            .or_insert_with(|| if edges { g.m() as u64 } else { triangle_count(g) })
    }
}

/// Worker count from `SC_THREADS`, if set to a positive integer.
pub fn thread_cap() -> Option<usize> {
    std::env::var("SC_THREADS").ok()?.trim().parse().ok().filter(|&n| n > 0)
}

/// Runs `f(0..count)` on a pool capped by `SC_THREADS`, collecting in index order.
pub fn par_map<T, F>(count: u64, f: F) -> Result<Vec<T>, rayon::ThreadPoolBuildError>
where
    T: Send,
    F: Fn(u64) -> T + Sync,
{
    par_map_with(thread_cap(), count, f)
}

/// [`par_map`] with an explicit worker count; `None` lets rayon decide.
pub fn par_map_with<T, F>(threads: Option<usize>, count: u64, f: F) -> Result<Vec<T>, rayon::ThreadPoolBuildError>
where
    T: Send,
    F: Fn(u64) -> T + Sync,
{
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = builder.build()?;
    Ok(pool.install(|| (0..count).into_par_iter().map(&f).collect()))
}

enum Raw {
    Value(f64),
    BadAdvice,
    AllRejected,
}

fn run_algorithm(cfg: &ExperimentConfig, g: &Graph, oracle: &mut Oracle<'_>) -> Result<Raw, EstimatorError> {
    let (n, m) = (g.n() as u64, g.m() as u64);
    let searched = |r: SearchResult| match r {
        SearchResult::Value(v) => Raw::Value(v),
        SearchResult::BadAdvice(_) => Raw::BadAdvice,
    };
    let adaptive = |r: Result<arbor_core::AdaptiveOutcome, EstimatorError>| match r {
        Ok(out) => Ok(Raw::Value(out.value)),
        Err(EstimatorError::AllAdviceRejected) => Ok(Raw::AllRejected),
        Err(e) => Err(e),
    };
    Ok(match cfg.algorithm {
        Algorithm::TrianglesTestable => searched(testable_triangles(oracle, m, cfg.eps, cfg.delta, cfg.advice)?.result),
        Algorithm::EdgesTestable => searched(testable_edges(oracle, n, cfg.eps, cfg.delta, cfg.advice)?.result),
        Algorithm::TrianglesAdaptive => adaptive(adaptive_triangles(oracle, m, cfg.eps, cfg.delta))?,
        Algorithm::EdgesAdaptive => adaptive(adaptive_edges(oracle, n, cfg.eps, cfg.delta))?,
        Algorithm::SingleGuess => {
            let run = TriangleRunConfig {
                guess: cfg.guess.unwrap_or(1.0),
                eps: cfg.eps,
                delta: cfg.delta,
                advice: cfg.advice,
                m,
            };
            match approx_triangles_with_advice(oracle, &run)? {
                EstimateOutcome::Estimate { value, .. } => Raw::Value(value),
                EstimateOutcome::BadAdvice(_) => Raw::BadAdvice,
            }
        }
    })
}

/// Runs one replica with its own oracle seeded by `seed`.
pub fn run_replica(
    cfg: &ExperimentConfig,
    g: &Graph,
    graph_id: &str,
    exact: u64,
    seed: u64,
) -> Result<ResultRow, EstimatorError> {
    let start = Instant::now();
    let mut oracle = Oracle::new(g, seed);
    if let Some(b) = cfg.budget {
        oracle = oracle.with_budget(b);
    }
    let (kind, estimate) = match run_algorithm(cfg, g, &mut oracle) {
        Ok(Raw::Value(v)) => (RowKind::Estimate, Some(v)),
        Ok(Raw::BadAdvice) => (RowKind::BadAdvice, None),
        Ok(Raw::AllRejected) => (RowKind::AllRejected, None),
        Err(EstimatorError::Oracle(OracleError::BudgetExhausted { .. })) => (RowKind::BudgetExhausted, None),
        Err(e) => return Err(e),
    };
    Ok(ResultRow {
        seed,
        graph_id: graph_id.to_string(),
        exact,
        kind,
        estimate,
        rel_err: estimate.map(|v| relative_error(v, exact)),
        ledger: oracle.ledger(),
        ms: if cfg.timing { start.elapsed().as_millis() as u64 } else { 0 },
    })
}

/// Runs every replica of `cfg` on an already built graph.
pub fn run_on_graph(
    cfg: &ExperimentConfig,
    g: &Graph,
    graph_id: &str,
    exact: u64,
) -> Result<Vec<ResultRow>, ExperimentError> {
    run_on_graph_with(thread_cap(), cfg, g, graph_id, exact)
}

/// [`run_on_graph`] with an explicit worker count.
pub fn run_on_graph_with(
    threads: Option<usize>,
    cfg: &ExperimentConfig,
    g: &Graph,
    graph_id: &str,
    exact: u64,
) -> Result<Vec<ResultRow>, ExperimentError> {
    cfg.validate()?;
    let rows = par_map_with(threads, cfg.replicas, |i| run_replica(cfg, g, graph_id, exact, cfg.seed + i))?;
    Ok(rows.into_iter().collect::<Result<_, _>>()?)
}

/// Validates `cfg`, builds its graph, and runs every replica.
pub fn run_experiment(cfg: &ExperimentConfig, cache: &mut ExactCache) -> Result<Vec<ResultRow>, ExperimentError> {
    cfg.validate()?;
    let g = cfg.source.build()?;
    let graph_id = cfg.source.to_string();
    if g.m() == 0 {
        return Err(config_err("graph", format!("`{graph_id}` has no edges")));
    }
    let exact = cache.get(&graph_id, &g, cfg.algorithm.counts_edges());
    run_on_graph(cfg, &g, &graph_id, exact)
}

pub fn write_csv<W: Write>(rows: &[ResultRow], w: W) -> Result<(), csv::Error> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(CSV_HEADER)?;
    for row in rows {
        out.write_record(row.record())?;
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(spec: &str, algorithm: Algorithm) -> ExperimentConfig {
        ExperimentConfig {
            source: spec.parse().unwrap(),
            algorithm,
            eps: 0.5,
            delta: 0.5,
            advice: 2,
            guess: None,
            replicas: 3,
            seed: 10,
            budget: None,
            timing: false,
            out: None,
        }
    }

    #[test]
    fn validation_names_the_field() {
        let base = config("clique:k=5", Algorithm::TrianglesTestable);
        let cases: [(ExperimentConfig, &str); 5] = [
            (ExperimentConfig { eps: 0.0, ..base.clone() }, "eps"),
            (ExperimentConfig { delta: 1.0, ..base.clone() }, "delta"),
            (ExperimentConfig { advice: 0, ..base.clone() }, "advice"),
            (ExperimentConfig { replicas: 0, ..base.clone() }, "replicas"),
            (ExperimentConfig { algorithm: Algorithm::SingleGuess, ..base.clone() }, "guess"),
        ];
        for (cfg, field) in cases {
            match cfg.validate() {
                Err(ExperimentError::Config { field: f, .. }) => assert_eq!(f, field),
                other => panic!("{field}: {other:?}"),
            }
        }
        assert!(ExperimentConfig { advice: 0, algorithm: Algorithm::EdgesAdaptive, ..base }.validate().is_ok());
    }

    #[test]
    fn rows_follow_seed_rule_and_exact_value() {
        let cfg = config("path:n=40", Algorithm::EdgesTestable);
        let rows = run_experiment(&cfg, &mut ExactCache::default()).unwrap();
        assert_eq!(rows.iter().map(|r| r.seed).collect::<Vec<_>>(), [10, 11, 12]);
        for r in &rows {
            assert_eq!(r.exact, 39);
            assert_eq!(r.kind, RowKind::Estimate);
            assert_eq!(r.estimate, Some(39.0));
            assert_eq!(r.rel_err, Some(0.0));
            assert_eq!(r.ms, 0);
        }
    }

    #[test]
    fn budget_rows_report_spent_queries() {
        let cfg = ExperimentConfig {
            budget: Some(50),
            replicas: 1,
            ..config("path:n=40", Algorithm::EdgesTestable)
        };
        let rows = run_experiment(&cfg, &mut ExactCache::default()).unwrap();
        assert_eq!(rows[0].kind, RowKind::BudgetExhausted);
        assert_eq!(rows[0].rel_err, None);
        assert!(rows[0].ledger.total() <= 50);
    }

    #[test]
    fn csv_has_fixed_header() {
        let mut buf = Vec::new();
        write_csv(&[], &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "seed,graph_id,exact,kind,estimate,rel_err,q_degree,q_neighbor,q_pair,q_edge,q_vertex,ms\n"
        );
    }
}
