//! Query-cost sweeps over graph families.
//!
//! Each instance is run with `seeds` independent seeds; the median total
//! query count is compared against the cost curve of the estimator
//! (`m·α̃/t + m/t^{2/3}` for triangles, `n·ᾱ/m` for edges). A family whose
//! measured-to-curve ratio stays within a constant band tracks the curve.

use std::io::Write;

use arbor_core::exact::{degeneracy, triangle_count};
use arbor_core::generators::{gen_forest_union, gen_planted_clique, CliquePlacement};
use arbor_core::search::{testable_edges, testable_triangles};
use arbor_core::{EstimatorError, Graph, Oracle};

use crate::experiment::{par_map, ExperimentError};
use crate::source::Generator;

#[derive(Debug, Clone, PartialEq)]
pub enum SweepFamily {
    /// A fixed base graph with one clique of each size planted on fresh vertices.
    PlantedCliques { base: Generator, sizes: Vec<usize> },
    /// Unions of `alpha` random forests on `n` vertices, one per `alpha`.
    ForestEdges { n: usize, alphas: Vec<u32>, seed: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub family: SweepFamily,
    /// Advice for every instance; `None` uses each instance's degeneracy
    /// (triangles) or forest count (edges).
    pub advice: Option<u32>,
    pub eps: f64,
    pub delta: f64,
    /// Seeds per instance; at least 11.
    pub seeds: u64,
    pub base_seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub instance: String,
    pub n: usize,
    pub m: usize,
    /// Exact target: `t` for triangles, `m` for edges.
    pub exact: u64,
    pub advice: u32,
    pub median_queries: f64,
    pub curve: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
    /// `max ratio / min ratio` across the family.
    pub spread: f64,
}

pub const SWEEP_HEADER: [&str; 8] = ["instance", "n", "m", "exact", "advice", "median_queries", "curve", "ratio"];

/// Median of a sample; the mean of the two middle values for even sizes.
pub fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let k = values.len();
    if k % 2 == 1 {
        values[k / 2]
    } else {
        (values[k / 2 - 1] + values[k / 2]) / 2.0
    }
}

/// `m·α̃/t + m/t^{2/3}`.
pub fn triangle_curve(m: usize, advice: u32, t: u64) -> f64 {
    let (m, t) = (m as f64, t as f64);
    m * advice as f64 / t + m / t.powf(2.0 / 3.0)
}

/// `n·ᾱ/m`.
pub fn edge_curve(n: usize, advice: u32, m: usize) -> f64 {
    n as f64 * advice as f64 / m as f64
}

struct Instance {
    label: String,
    graph: Graph,
    advice: u32,
    exact: u64,
    curve: f64,
}

fn bad(field: &'static str, reason: impl Into<String>) -> ExperimentError {
    ExperimentError::Config {
        field,
        reason: reason.into(),
    }
}

fn instances(cfg: &SweepConfig) -> Result<Vec<Instance>, ExperimentError> {
    let mut out = Vec::new();
    match &cfg.family {
        SweepFamily::PlantedCliques { base, sizes } => {
            let g0 = base.build().map_err(|r| bad("base", r))?;
            for &k in sizes {
                let planted = gen_planted_clique(&g0, k, CliquePlacement::Fresh, cfg.base_seed)
                    .map_err(|e| bad("sizes", e.to_string()))?;
                let g = planted.graph;
                let t = triangle_count(&g);
                if t == 0 {
                    return Err(bad("sizes", format!("instance with k = {k} has no triangles")));
                }
                let advice = cfg.advice.unwrap_or_else(|| degeneracy(&g).max(1));
                out.push(Instance {
                    label: format!("{base}+K{k}"),
                    curve: triangle_curve(g.m(), advice, t),
                    advice,
                    exact: t,
                    graph: g,
                });
            }
        }
        SweepFamily::ForestEdges { n, alphas, seed } => {
            for &a in alphas {
                let g = gen_forest_union(*n, a, *seed).map_err(|e| bad("alphas", e.to_string()))?;
                if g.m() == 0 {
                    return Err(bad("n", "forest unions need at least two vertices"));
                }
                let advice = cfg.advice.unwrap_or(a);
                out.push(Instance {
                    label: format!("forest:n={n},alpha={a},seed={seed}"),
                    curve: edge_curve(g.n(), advice, g.m()),
                    advice,
                    exact: g.m() as u64,
                    graph: g,
                });
            }
        }
    }
    Ok(out)
}

pub fn run_scaling_sweep(cfg: &SweepConfig) -> Result<SweepReport, ExperimentError> {
    if !(cfg.eps > 0.0 && cfg.eps < 1.0) {
        return Err(bad("eps", format!("{} is not in (0, 1)", cfg.eps)));
    }
    if !(cfg.delta > 0.0 && cfg.delta < 1.0) {
        return Err(bad("delta", format!("{} is not in (0, 1)", cfg.delta)));
    }
    if cfg.seeds < 11 {
        return Err(bad("seeds", "at least 11 seeds per instance"));
    }
    if cfg.advice == Some(0) {
        return Err(bad("advice", "must be at least 1"));
    }
    let edges = matches!(cfg.family, SweepFamily::ForestEdges { .. });
    let mut rows = Vec::new();
    for inst in instances(cfg)? {
        let g = &inst.graph;
        let totals = par_map(cfg.seeds, |i| -> Result<f64, EstimatorError> {
            let mut oracle = Oracle::new(g, cfg.base_seed + i);
            if edges {
                testable_edges(&mut oracle, g.n() as u64, cfg.eps, cfg.delta, inst.advice)?;
            } else {
                testable_triangles(&mut oracle, g.m() as u64, cfg.eps, cfg.delta, inst.advice)?;
            }
            Ok(oracle.ledger().total() as f64)
        })?;
        let mut totals = totals.into_iter().collect::<Result<Vec<_>, _>>()?;
        let median_queries = median(&mut totals);
        rows.push(SweepRow {
            instance: inst.label,
            n: g.n(),
            m: g.m(),
            exact: inst.exact,
            advice: inst.advice,
            median_queries,
            curve: inst.curve,
            ratio: median_queries / inst.curve,
        });
    }
    let (lo, hi) = rows
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), r| (lo.min(r.ratio), hi.max(r.ratio)));
    Ok(SweepReport { rows, spread: hi / lo })
}

/// Writes the rows and a final `summary` row whose `ratio` column holds the spread.
pub fn write_sweep_csv<W: Write>(report: &SweepReport, w: W) -> Result<(), csv::Error> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(SWEEP_HEADER)?;
    for r in &report.rows {
        out.write_record([
            r.instance.clone(),
            r.n.to_string(),
            r.m.to_string(),
            r.exact.to_string(),
            r.advice.to_string(),
            r.median_queries.to_string(),
            r.curve.to_string(),
            r.ratio.to_string(),
        ])?;
    }
    out.write_record(["summary", "", "", "", "", "", "", &report.spread.to_string()])?;
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn median_of_odd_and_even() {
        assert_eq!(median(&mut [3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&mut [4.0, 1.0, 3.0, 2.0]), 2.5);
    }

    #[test]
    fn curves() {
        assert!((triangle_curve(100, 2, 8) - (25.0 + 25.0)).abs() < 1e-9);
        assert_eq!(edge_curve(10, 2, 5), 4.0);
    }

    #[test]
    fn rejects_too_few_seeds() {
        let cfg = SweepConfig {
            family: SweepFamily::ForestEdges { n: 10, alphas: vec![1], seed: 0 },
            advice: None,
            eps: 0.5,
            delta: 0.5,
            seeds: 5,
            base_seed: 0,
        };
        assert!(matches!(run_scaling_sweep(&cfg), Err(ExperimentError::Config { field: "seeds", .. })));
    }

    #[test]
    fn small_edge_sweep_has_summary() {
        let cfg = SweepConfig {
            family: SweepFamily::ForestEdges { n: 40, alphas: vec![1, 2], seed: 3 },
            advice: None,
            eps: 0.5,
            delta: 0.5,
            seeds: 11,
            base_seed: 0,
        };
        let report = run_scaling_sweep(&cfg).unwrap();
        assert_eq!(report.rows.len(), 2);
        assert!(report.spread >= 1.0);
        let mut buf = Vec::new();
        write_sweep_csv(&report, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 4);
        assert!(text.lines().last().unwrap().starts_with("summary,"));
    }
}
