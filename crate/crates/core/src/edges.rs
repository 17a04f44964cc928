//! Single-guess edge estimator with arboricity advice.
//!
//! A gate on uniform edge samples rejects advice under which too many edges
//! have both endpoints of high degree. Past the gate, edges are counted by
//! orienting each edge towards its higher endpoint in the vertex order and
//! estimating the out-degree mass of low-degree vertices from uniform vertex
//! and neighbor samples.

use alloc::collections::BTreeMap;

use crate::graph::{vertex_precedes, Vertex};
use crate::math::{ceil_count, ln};
use crate::oracle::{Oracle, OracleError};
use crate::{param, EstimateOutcome, EstimatorError, Rejection};

/// Inputs of one single-guess run. `eps` and `delta` are the caller's
/// values; the run works with `eps/6` and `delta/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeRunConfig {
    /// Guess `m̃` for the edge count.
    pub guess: f64,
    pub eps: f64,
    pub delta: f64,
    /// Arboricity advice `ᾱ`.
    pub advice: u32,
    /// Vertex count of the graph behind the oracle.
    pub n: u64,
}

impl EdgeRunConfig {
    pub fn validate(&self) -> Result<(), EstimatorError> {
        if self.n == 0 {
            return Err(param("n", "vertex count must be positive"));
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

    /// Accuracy after rescaling, `ε/6`.
    pub fn inner_eps(&self) -> f64 {
        self.eps / 6.0
    }

    /// Failure probability after rescaling, `δ/2`.
    pub fn inner_delta(&self) -> f64 {
        self.delta / 2.0
    }

    /// Degree cap `2ᾱ/ε` at the rescaled `ε`.
    pub fn degree_cap(&self) -> f64 {
        2.0 * self.advice as f64 / self.inner_eps()
    }

    /// Gate sample count `r = ⌈12·ln(1/δ)/ε²⌉`.
    pub fn gate_samples(&self) -> u64 {
        let eps = self.inner_eps();
        ceil_count(12.0 * ln(1.0 / self.inner_delta()) / (eps * eps))
    }

    /// Main sample count `q = ⌈(n·ᾱ/m̃)·12·ln(2/δ)/ε³⌉`.
    pub fn main_samples(&self) -> u64 {
        let eps = self.inner_eps();
        let scale = self.n as f64 * self.advice as f64 / self.guess;
        ceil_count(scale * 12.0 * ln(2.0 / self.inner_delta()) / (eps * eps * eps))
    }
}

/// Statistics of one run.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EdgeTrialStats {
    /// Gate sample count `r`.
    pub gate_samples: u64,
    /// `Σ x_e` over the gate samples.
    pub gate_high: u64,
    /// Main sample count `q`; zero when the gate rejected.
    pub main_samples: u64,
    /// Whether `q ≥ n` sent the run to the full degree scan.
    pub exact_branch: bool,
    /// `Σ χ_i`, or `Σ d(v)` on the exact branch.
    pub chi_sum: u128,
    pub estimate: f64,
}

/// Single-guess testable edge estimator.
pub fn approx_edges_with_advice(
    oracle: &mut Oracle<'_>,
    cfg: &EdgeRunConfig,
) -> Result<EstimateOutcome<EdgeTrialStats>, EstimatorError> {
    cfg.validate()?;
    let before = oracle.ledger();
    let cap = cfg.degree_cap();
    let mut stats = EdgeTrialStats::default();
    let mut degrees = DegreeMemo::default();

    let r = cfg.gate_samples();
    stats.gate_samples = r;
    for (e, hits) in oracle.uniform_edges(r)? {
        let d = degrees.get(oracle, e.u())?.min(degrees.get(oracle, e.v())?);
        if d as f64 > cap {
            stats.gate_high += hits;
        }
    }
    if stats.gate_high as f64 / r as f64 > 2.0 * cfg.inner_eps() {
        return Ok(EstimateOutcome::BadAdvice(Rejection::HighDegreeEdgeReject));
    }

    let n = cfg.n;
    let q = cfg.main_samples();
    stats.main_samples = q;
    if q >= n {
        stats.exact_branch = true;
        for v in 0..n {
            stats.chi_sum += degrees.get(oracle, v as Vertex)? as u128;
        }
        stats.estimate = stats.chi_sum as f64 / 2.0;
    } else {
        for (u, hits) in oracle.uniform_vertices(q)? {
            let du = degrees.get(oracle, u)?;
            let sampled = oracle.random_neighbors(u, hits)?;
            if du as f64 > cap {
                continue;
            }
            for (v, c) in sampled {
                let dv = degrees.get(oracle, v)?;
                if vertex_precedes(u, du, v, dv) {
                    stats.chi_sum += c as u128 * du as u128;
                }
            }
        }
        stats.estimate = n as f64 / q as f64 * stats.chi_sum as f64;
    }
    Ok(EstimateOutcome::Estimate {
        value: stats.estimate,
        stats,
        ledger: oracle.ledger() - before,
    })
}

/// Degree answers already paid for in this run.
#[derive(Default)]
struct DegreeMemo(BTreeMap<Vertex, u32>);

impl DegreeMemo {
    fn get(&mut self, oracle: &mut Oracle<'_>, v: Vertex) -> Result<u32, OracleError> {
        if let Some(&d) = self.0.get(&v) {
            return Ok(d);
        }
        let d = oracle.degree(v)?;
        self.0.insert(v, d);
        Ok(d)
    }
}
