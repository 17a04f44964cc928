//! Metered simulation of the augmented query model.
//!
//! An [`Oracle`] wraps an immutable [`Graph`] and answers five kinds of
//! queries: degree, i-th neighbor, vertex pair, uniform vertex and uniform
//! edge. Each answered query increments one counter of the handle's
//! [`QueryLedger`]. The graph itself is never handed out.
//!
//! Besides the single-query methods there are batched forms that answer a
//! whole multiset of identical random queries at once (for example "`k`
//! uniform edges") and charge one unit per query in the batch. They return
//! hit counts instead of sequences, which is all the estimators need, and
//! keep the simulation cheap when sample sizes run into the billions.
//!
//! # Randomness
//!
//! Each handle owns a ChaCha8 stream derived from `(seed, stream)`: the
//! generator is keyed by `seed` and the 64-bit ChaCha stream id is set to
//! `stream`. Harnesses use the run seed as `seed` and the worker or replica
//! index as `stream`, so results never depend on scheduling.

use alloc::vec::Vec;
use core::ops::{Add, AddAssign, Sub};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{Edge, Graph, Vertex};
use crate::sampling::{binomial, uniform_histogram};

/// Query kinds of the augmented model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QueryKind {
    Degree,
    Neighbor,
    Pair,
    UniformEdge,
    UniformVertex,
}

/// Per-kind query counters.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct QueryLedger {
    pub degree: u64,
    pub neighbor: u64,
    pub pair: u64,
    pub uniform_edge: u64,
    pub uniform_vertex: u64,
}

impl QueryLedger {
    pub fn total(&self) -> u64 {
        self.degree + self.neighbor + self.pair + self.uniform_edge + self.uniform_vertex
    }

    pub fn get(&self, kind: QueryKind) -> u64 {
        match kind {
            QueryKind::Degree => self.degree,
            QueryKind::Neighbor => self.neighbor,
            QueryKind::Pair => self.pair,
            QueryKind::UniformEdge => self.uniform_edge,
            QueryKind::UniformVertex => self.uniform_vertex,
        }
    }

    fn slot(&mut self, kind: QueryKind) -> &mut u64 {
        match kind {
            QueryKind::Degree => &mut self.degree,
            QueryKind::Neighbor => &mut self.neighbor,
            QueryKind::Pair => &mut self.pair,
            QueryKind::UniformEdge => &mut self.uniform_edge,
            QueryKind::UniformVertex => &mut self.uniform_vertex,
        }
    }
}

impl Add for QueryLedger {
    type Output = QueryLedger;

    fn add(mut self, rhs: QueryLedger) -> QueryLedger {
        self += rhs;
        self
    }
}

impl AddAssign for QueryLedger {
    fn add_assign(&mut self, rhs: QueryLedger) {
        self.degree += rhs.degree;
        self.neighbor += rhs.neighbor;
        self.pair += rhs.pair;
        self.uniform_edge += rhs.uniform_edge;
        self.uniform_vertex += rhs.uniform_vertex;
    }
}

/// Component-wise difference; `self` must dominate `rhs`.
impl Sub for QueryLedger {
    type Output = QueryLedger;

    fn sub(self, rhs: QueryLedger) -> QueryLedger {
        QueryLedger {
            degree: self.degree - rhs.degree,
            neighbor: self.neighbor - rhs.neighbor,
            pair: self.pair - rhs.pair,
            uniform_edge: self.uniform_edge - rhs.uniform_edge,
            uniform_vertex: self.uniform_vertex - rhs.uniform_vertex,
        }
    }
}

impl core::iter::Sum for QueryLedger {
    fn sum<I: Iterator<Item = QueryLedger>>(iter: I) -> QueryLedger {
        iter.fold(QueryLedger::default(), Add::add)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("query budget of {budget} exhausted")]
    BudgetExhausted { budget: u64 },
    #[error("vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { vertex: Vertex, n: usize },
    #[error("uniform edge query on a graph without edges")]
    NoEdges,
    #[error("uniform vertex query on a graph without vertices")]
    NoVertices,
}

/// Seeds the handle generator: ChaCha8 keyed by `seed`, stream id `stream`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Query handle over one graph. Not shared between workers; create one per
/// worker and merge the ledgers afterwards.
#[derive(Debug, Clone)]
pub struct Oracle<'g> {
    graph: &'g Graph,
    rng: ChaCha8Rng,
    ledger: QueryLedger,
    budget: Option<u64>,
}

impl<'g> Oracle<'g> {
    pub fn new(graph: &'g Graph, seed: u64) -> Oracle<'g> {
        Self::with_stream(graph, seed, 0)
    }

    pub fn with_stream(graph: &'g Graph, seed: u64, stream: u64) -> Oracle<'g> {
        Oracle {
            graph,
            rng: stream_rng(seed, stream),
            ledger: QueryLedger::default(),
            budget: None,
        }
    }

    /// Caps the total number of queries; the first query beyond the cap
    /// fails with [`OracleError::BudgetExhausted`] and changes nothing.
    pub fn with_budget(mut self, budget: u64) -> Oracle<'g> {
        self.budget = Some(budget);
        self
    }

    pub fn ledger(&self) -> QueryLedger {
        self.ledger
    }

    pub fn budget(&self) -> Option<u64> {
        self.budget
    }

    /// The handle's random stream, for the algorithm's own coin flips.
    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// Independent handle on the same graph, keyed by a fresh draw from this
    /// handle's stream, with an empty ledger and the same budget.
    pub fn split(&mut self, stream: u64) -> Oracle<'g> {
        let seed = self.rng.random::<u64>();
        let mut child = Self::with_stream(self.graph, seed, stream);
        child.budget = self.budget;
        child
    }

    fn charge(&mut self, kind: QueryKind, count: u64) -> Result<(), OracleError> {
        if let Some(budget) = self.budget {
            let used = self.ledger.total();
            if count > budget.saturating_sub(used) {
                return Err(OracleError::BudgetExhausted { budget });
            }
        }
        *self.ledger.slot(kind) += count;
        Ok(())
    }

    fn check(&self, v: Vertex) -> Result<(), OracleError> {
        if (v as usize) < self.graph.n() {
            Ok(())
        } else {
            Err(OracleError::VertexOutOfRange {
                vertex: v,
                n: self.graph.n(),
            })
        }
    }

    pub fn degree(&mut self, v: Vertex) -> Result<u32, OracleError> {
        self.check(v)?;
        self.charge(QueryKind::Degree, 1)?;
        Ok(self.graph.degree(v))
    }

    /// The `i`-th neighbor of `v` (1-based) in ascending id order, or `None`
    /// when `i` is outside `1..=d(v)`.
    pub fn neighbor(&mut self, v: Vertex, i: u64) -> Result<Option<Vertex>, OracleError> {
        self.check(v)?;
        self.charge(QueryKind::Neighbor, 1)?;
        let nb = self.graph.neighbors(v);
        Ok(match i {
            0 => None,
            i => nb.get((i - 1) as usize).copied(),
        })
    }

    pub fn pair(&mut self, u: Vertex, v: Vertex) -> Result<bool, OracleError> {
        self.check(u)?;
        self.check(v)?;
        self.charge(QueryKind::Pair, 1)?;
        Ok(self.graph.has_edge(u, v))
    }

    pub fn uniform_edge(&mut self) -> Result<Edge, OracleError> {
        let m = self.graph.m();
        if m == 0 {
            return Err(OracleError::NoEdges);
        }
        self.charge(QueryKind::UniformEdge, 1)?;
        let i = self.rng.random_range(0..m);
        Ok(self.graph.edges()[i])
    }

    pub fn uniform_vertex(&mut self) -> Result<Vertex, OracleError> {
        let n = self.graph.n();
        if n == 0 {
            return Err(OracleError::NoVertices);
        }
        self.charge(QueryKind::UniformVertex, 1)?;
        Ok(self.rng.random_range(0..n) as Vertex)
    }

    /// `count` uniform edge queries, returned as `(edge, hits)` in edge order.
    pub fn uniform_edges(&mut self, count: u64) -> Result<Vec<(Edge, u64)>, OracleError> {
        if count == 0 {
            return Ok(Vec::new());
        }
        let m = self.graph.m();
        if m == 0 {
            return Err(OracleError::NoEdges);
        }
        self.charge(QueryKind::UniformEdge, count)?;
        let edges = self.graph.edges();
        Ok(uniform_histogram(&mut self.rng, count, m)
            .into_iter()
            .map(|(i, c)| (edges[i], c))
            .collect())
    }

    /// `count` uniform vertex queries, returned as `(vertex, hits)` by id.
    pub fn uniform_vertices(&mut self, count: u64) -> Result<Vec<(Vertex, u64)>, OracleError> {
        if count == 0 {
            return Ok(Vec::new());
        }
        let n = self.graph.n();
        if n == 0 {
            return Err(OracleError::NoVertices);
        }
        self.charge(QueryKind::UniformVertex, count)?;
        Ok(uniform_histogram(&mut self.rng, count, n)
            .into_iter()
            .map(|(i, c)| (i as Vertex, c))
            .collect())
    }

    /// `count` neighbor queries of `v` at independent uniform indices in
    /// `1..=d(v)`, returned as `(neighbor, hits)`. All answers are null when
    /// `v` is isolated, so the result is empty.
    pub fn random_neighbors(
        &mut self,
        v: Vertex,
        count: u64,
    ) -> Result<Vec<(Vertex, u64)>, OracleError> {
        self.check(v)?;
        self.charge(QueryKind::Neighbor, count)?;
        let nb = self.graph.neighbors(v);
        if nb.is_empty() || count == 0 {
            return Ok(Vec::new());
        }
        Ok(uniform_histogram(&mut self.rng, count, nb.len())
            .into_iter()
            .map(|(i, c)| (nb[i], c))
            .collect())
    }

    /// `count` rounds of "uniform neighbor `w` of `anchor`, then pair query
    /// `{other, w}`". Charges `count` neighbor and `count` pair queries and
    /// returns the `w` that closed a triangle, with hit counts.
    pub fn closing_neighbors(
        &mut self,
        anchor: Vertex,
        other: Vertex,
        count: u64,
    ) -> Result<Vec<(Vertex, u64)>, OracleError> {
        let (hits, common) = self.closing_rounds(anchor, other, count)?;
        if hits == 0 {
            return Ok(Vec::new());
        }
        Ok(uniform_histogram(&mut self.rng, hits, common.len())
            .into_iter()
            .map(|(i, c)| (common[i], c))
            .collect())
    }

    /// Like [`Oracle::closing_neighbors`] but only reports how many rounds
    /// closed a triangle.
    pub fn count_closing_neighbors(
        &mut self,
        anchor: Vertex,
        other: Vertex,
        count: u64,
    ) -> Result<u64, OracleError> {
        self.charge_rounds(anchor, other, count)?;
        let na = self.graph.neighbors(anchor);
        if na.is_empty() || count == 0 {
            return Ok(0);
        }
        let common = count_common(na, self.graph.neighbors(other));
        Ok(binomial(&mut self.rng, count, common as f64 / na.len() as f64))
    }

    fn charge_rounds(&mut self, anchor: Vertex, other: Vertex, count: u64) -> Result<(), OracleError> {
        self.check(anchor)?;
        self.check(other)?;
        if let Some(budget) = self.budget {
            let doubled = count.saturating_mul(2);
            if doubled > budget.saturating_sub(self.ledger.total()) {
                return Err(OracleError::BudgetExhausted { budget });
            }
        }
        self.charge(QueryKind::Neighbor, count)?;
        self.charge(QueryKind::Pair, count)
    }

    fn closing_rounds(
        &mut self,
        anchor: Vertex,
        other: Vertex,
        count: u64,
    ) -> Result<(u64, Vec<Vertex>), OracleError> {
        self.charge_rounds(anchor, other, count)?;
        let na = self.graph.neighbors(anchor);
        if na.is_empty() || count == 0 {
            return Ok((0, Vec::new()));
        }
        let common = intersect_sorted(na, self.graph.neighbors(other));
        if common.is_empty() {
            return Ok((0, common));
        }
        // Each round closes independently with probability |common| / d(anchor).
        let p = common.len() as f64 / na.len() as f64;
        let hits = binomial(&mut self.rng, count, p);
        Ok((hits, common))
    }
}

fn count_common(a: &[Vertex], b: &[Vertex]) -> usize {
    let (mut i, mut j, mut c) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            core::cmp::Ordering::Less => i += 1,
            core::cmp::Ordering::Greater => j += 1,
            core::cmp::Ordering::Equal => {
                c += 1;
                i += 1;
                j += 1;
            }
        }
    }
    c
}

fn intersect_sorted(a: &[Vertex], b: &[Vertex]) -> Vec<Vertex> {
    let mut out = Vec::with_capacity(a.len().min(b.len()));
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            core::cmp::Ordering::Less => i += 1,
            core::cmp::Ordering::Greater => j += 1,
            core::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_clique, gen_path};
    use alloc::vec;

    #[test]
    fn degree_queries_and_metering() {
        let g = gen_clique(4);
        let mut o = Oracle::new(&g, 0);
        for v in 0..4 {
            assert_eq!(o.degree(v).unwrap(), 3);
        }
        assert_eq!(o.ledger().degree, 4);
        assert_eq!(o.ledger().total(), 4);
        let iso = Graph::empty(2);
        assert_eq!(Oracle::new(&iso, 0).degree(1).unwrap(), 0);
    }

    #[test]
    fn out_of_range_vertex_is_error() {
        let g = gen_path(3);
        let mut o = Oracle::new(&g, 0);
        assert_eq!(
            o.degree(3),
            Err(OracleError::VertexOutOfRange { vertex: 3, n: 3 })
        );
        assert_eq!(o.ledger().total(), 0);
    }

    #[test]
    fn neighbor_queries_follow_fixed_order() {
        let g = gen_path(3);
        let mut o = Oracle::new(&g, 0);
        assert_eq!(o.neighbor(1, 1).unwrap(), Some(0));
        assert_eq!(o.neighbor(1, 2).unwrap(), Some(2));
        assert_eq!(o.neighbor(1, 3).unwrap(), None);
        assert_eq!(o.neighbor(1, 0).unwrap(), None);
        assert_eq!(o.neighbor(1, 1).unwrap(), Some(0));
        assert_eq!(o.ledger().neighbor, 5);
    }

    #[test]
    fn pair_queries() {
        let g = gen_clique(4);
        let mut o = Oracle::new(&g, 0);
        assert!(!o.pair(2, 2).unwrap());
        assert!(o.pair(0, 3).unwrap());
        let e = Graph::empty(4);
        assert!(!Oracle::new(&e, 0).pair(0, 1).unwrap());
    }

    #[test]
    fn uniform_edge_on_single_edge_and_empty_graphs() {
        let g = Graph::from_edges(3, vec![(2, 1)]).unwrap();
        let mut o = Oracle::new(&g, 5);
        for _ in 0..10 {
            assert_eq!(o.uniform_edge().unwrap(), Edge::new(1, 2).unwrap());
        }
        let e = Graph::empty(3);
        assert_eq!(Oracle::new(&e, 0).uniform_edge(), Err(OracleError::NoEdges));
        assert_eq!(Oracle::new(&e, 0).uniform_edges(3), Err(OracleError::NoEdges));
    }

    #[test]
    fn uniform_vertex_single_vertex() {
        let g = Graph::empty(1);
        let mut o = Oracle::new(&g, 0);
        for _ in 0..5 {
            assert_eq!(o.uniform_vertex().unwrap(), 0);
        }
        assert_eq!(o.ledger().uniform_vertex, 5);
        assert_eq!(
            Oracle::new(&Graph::empty(0), 0).uniform_vertex(),
            Err(OracleError::NoVertices)
        );
    }

    #[test]
    fn batched_queries_charge_per_query() {
        let g = gen_clique(5);
        let mut o = Oracle::new(&g, 1);
        let h = o.uniform_edges(1000).unwrap();
        assert_eq!(h.iter().map(|p| p.1).sum::<u64>(), 1000);
        let h = o.uniform_vertices(30).unwrap();
        assert_eq!(h.iter().map(|p| p.1).sum::<u64>(), 30);
        let h = o.random_neighbors(0, 12).unwrap();
        assert_eq!(h.iter().map(|p| p.1).sum::<u64>(), 12);
        // In K5 every other neighbor closes a triangle with edge (0, 1).
        let h = o.closing_neighbors(0, 1, 40).unwrap();
        assert!(h.iter().all(|&(w, _)| w >= 2));
        assert_eq!(h.iter().map(|p| p.1).sum::<u64>() <= 40, true);
        let l = o.ledger();
        assert_eq!(
            (l.uniform_edge, l.uniform_vertex, l.neighbor, l.pair),
            (1000, 30, 52, 40)
        );
    }

    #[test]
    fn budget_fails_exactly_past_the_cap() {
        let g = gen_clique(4);
        let mut o = Oracle::new(&g, 0).with_budget(3);
        for _ in 0..3 {
            o.degree(0).unwrap();
        }
        assert_eq!(o.degree(0), Err(OracleError::BudgetExhausted { budget: 3 }));
        assert_eq!(o.pair(0, 1), Err(OracleError::BudgetExhausted { budget: 3 }));
        assert_eq!(o.ledger().total(), 3);
    }

    #[test]
    fn oversized_batch_changes_nothing() {
        let g = gen_clique(4);
        let mut o = Oracle::new(&g, 0).with_budget(10);
        let before = o.clone();
        assert!(o.uniform_edges(11).is_err());
        assert!(o.closing_neighbors(0, 1, 6).is_err());
        assert_eq!(o.ledger().total(), 0);
        assert_eq!(o.uniform_edge().unwrap(), before.clone().uniform_edge().unwrap());
    }

    #[test]
    fn identical_seeds_reproduce_ledger_and_answers() {
        let g = gen_clique(6);
        let run = |seed| {
            let mut o = Oracle::with_stream(&g, seed, 3);
            let a: Vec<_> = (0..20).map(|_| o.uniform_edge().unwrap()).collect();
            let b = o.closing_neighbors(0, 1, 100).unwrap();
            (a, b, o.ledger())
        };
        assert_eq!(run(7), run(7));
        assert_ne!(run(7).0, run(8).0);
    }

    #[test]
    fn ledger_merge_is_componentwise() {
        let a = QueryLedger {
            degree: 1,
            neighbor: 2,
            pair: 3,
            uniform_edge: 4,
            uniform_vertex: 5,
        };
        let s = a + a;
        assert_eq!(s.pair, 6);
        assert_eq!(s.total(), 30);
        assert_eq!(s - a, a);
        assert_eq!([a, a, a].into_iter().sum::<QueryLedger>().total(), 45);
    }
}
