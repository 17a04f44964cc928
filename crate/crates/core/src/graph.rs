//! Immutable undirected simple graphs with a fixed neighbor order.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use thiserror::Error;

/// Vertex identifier in `0..n`.
pub type Vertex = u32;

/// An undirected edge in canonical form `u < v`.
///
/// The derived ordering is lexicographic on `(u, v)` and is the fixed edge
/// order used to assign triangles to edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    u: Vertex,
    v: Vertex,
}

impl Edge {
    /// Canonicalizes `{a, b}`. Returns `None` for a self-loop.
    pub fn new(a: Vertex, b: Vertex) -> Option<Edge> {
        match a.cmp(&b) {
            Ordering::Less => Some(Edge { u: a, v: b }),
            Ordering::Greater => Some(Edge { u: b, v: a }),
            Ordering::Equal => None,
        }
    }

    /// Smaller endpoint.
    pub fn u(self) -> Vertex {
        self.u
    }

    /// Larger endpoint.
    pub fn v(self) -> Vertex {
        self.v
    }

    pub fn endpoints(self) -> (Vertex, Vertex) {
        (self.u, self.v)
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.u, self.v)
    }
}

/// Degree of an edge together with the endpoint whose neighbor list defines
/// the edge's neighbors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeDegree {
    /// `min(d(u), d(v))`.
    pub degree: u32,
    /// Endpoint attaining the minimum; ties go to the smaller id.
    pub anchor: Vertex,
    /// The other endpoint.
    pub other: Vertex,
}

impl EdgeDegree {
    /// Applies the min-degree rule to two endpoints with known degrees.
    pub fn from_degrees(a: Vertex, da: u32, b: Vertex, db: u32) -> EdgeDegree {
        if (da, a) < (db, b) {
            EdgeDegree {
                degree: da,
                anchor: a,
                other: b,
            }
        } else {
            EdgeDegree {
                degree: db,
                anchor: b,
                other: a,
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { vertex: u64, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),
    #[error("edge {0} is not in the graph")]
    EdgeNotFound(Edge),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
}

/// Undirected simple graph on `0..n` in compressed adjacency form.
///
/// Neighbor lists are sorted ascending by id, so the i-th neighbor of a
/// vertex is reproducible across runs. The canonical edge list is sorted in
/// edge order.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    offsets: Vec<usize>,
    targets: Vec<Vertex>,
    edges: Vec<Edge>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("m", &self.m())
            .finish()
    }
}

impl Graph {
    /// Builds a graph from arbitrary vertex pairs. Pairs are canonicalized and
    /// duplicates dropped; self-loops and out-of-range ids are errors.
    pub fn from_edges<I>(n: usize, pairs: I) -> Result<Graph, GraphError>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        if n > Vertex::MAX as usize {
            return Err(GraphError::InvalidParameter(alloc::format!(
                "n = {n} exceeds the vertex id range"
            )));
        }
        let mut edges = Vec::new();
        for (a, b) in pairs {
            for x in [a, b] {
                if x as usize >= n {
                    return Err(GraphError::VertexOutOfRange {
                        vertex: x as u64,
                        n,
                    });
                }
            }
            edges.push(Edge::new(a, b).ok_or(GraphError::SelfLoop(a))?);
        }
        edges.sort_unstable();
        edges.dedup();
        Ok(Self::from_canonical(n, edges))
    }

    /// `edges` must be canonical, sorted and deduplicated with ids below `n`.
    fn from_canonical(n: usize, edges: Vec<Edge>) -> Graph {
        let mut offsets = alloc::vec![0usize; n + 1];
        for e in &edges {
            offsets[e.u as usize + 1] += 1;
            offsets[e.v as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut fill = offsets.clone();
        let mut targets = alloc::vec![0 as Vertex; 2 * edges.len()];
        for e in &edges {
            targets[fill[e.u as usize]] = e.v;
            fill[e.u as usize] += 1;
            targets[fill[e.v as usize]] = e.u;
            fill[e.v as usize] += 1;
        }
        for v in 0..n {
            targets[offsets[v]..offsets[v + 1]].sort_unstable();
        }
        Graph {
            n,
            offsets,
            targets,
            edges,
        }
    }

    /// The edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Graph {
        Self::from_canonical(n, Vec::new())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn degree(&self, v: Vertex) -> u32 {
        let v = v as usize;
        (self.offsets[v + 1] - self.offsets[v]) as u32
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        let v = v as usize;
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> {
        0..self.n as Vertex
    }

    /// Canonical edges in edge order.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Position of `e` in [`Graph::edges`].
    pub fn edge_index(&self, e: Edge) -> Option<usize> {
        self.edges.binary_search(&e).ok()
    }

    /// Membership test by binary search in the shorter neighbor list.
    pub fn has_edge(&self, a: Vertex, b: Vertex) -> bool {
        if a == b || a as usize >= self.n || b as usize >= self.n {
            return false;
        }
        let (x, y) = if self.degree(a) <= self.degree(b) {
            (a, b)
        } else {
            (b, a)
        };
        self.neighbors(x).binary_search(&y).is_ok()
    }

    /// Degree of an edge and its anchor endpoint.
    pub fn edge_degree(&self, e: Edge) -> Result<EdgeDegree, GraphError> {
        if !self.has_edge(e.u, e.v) {
            return Err(GraphError::EdgeNotFound(e));
        }
        Ok(EdgeDegree::from_degrees(
            e.u,
            self.degree(e.u),
            e.v,
            self.degree(e.v),
        ))
    }

    /// `u ≺ v`: smaller degree first, ties broken by smaller id.
    pub fn precedes(&self, u: Vertex, v: Vertex) -> bool {
        vertex_precedes(u, self.degree(u), v, self.degree(v))
    }

    /// Checks symmetry, simplicity, sortedness and the handshake identity.
    pub fn validate(&self) -> Result<(), GraphError> {
        let violation = |s: String| Err(GraphError::InvariantViolation(s));
        if self.offsets.len() != self.n + 1 || self.targets.len() != 2 * self.edges.len() {
            return violation("adjacency arrays have inconsistent lengths".into());
        }
        let degree_sum: usize = self.vertices().map(|v| self.degree(v) as usize).sum();
        if degree_sum != 2 * self.m() {
            return violation(alloc::format!(
                "degree sum {degree_sum} != 2m = {}",
                2 * self.m()
            ));
        }
        for v in self.vertices() {
            let nb = self.neighbors(v);
            for w in nb.windows(2) {
                if w[0] >= w[1] {
                    return violation(alloc::format!(
                        "neighbors of {v} not strictly ascending"
                    ));
                }
            }
            for &w in nb {
                if w == v {
                    return violation(alloc::format!("self-loop at {v}"));
                }
                if w as usize >= self.n {
                    return violation(alloc::format!("neighbor {w} of {v} out of range"));
                }
                if self.neighbors(w).binary_search(&v).is_err() {
                    return violation(alloc::format!("{v} -> {w} has no reverse entry"));
                }
            }
        }
        for w in self.edges.windows(2) {
            if w[0] >= w[1] {
                return violation("edge list not strictly sorted".into());
            }
        }
        for e in &self.edges {
            if e.u >= e.v || !self.has_edge(e.u, e.v) {
                return violation(alloc::format!("edge {e} missing from adjacency"));
            }
        }
        Ok(())
    }

    /// Disjoint union: `other`'s vertices are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let shift = self.n as Vertex;
        let mut edges = self.edges.clone();
        edges.extend(other.edges.iter().map(|e| Edge {
            u: e.u + shift,
            v: e.v + shift,
        }));
        Self::from_canonical(self.n + other.n, edges)
    }

    /// Same graph with vertex `v` renamed to `perm[v]`.
    pub fn relabel(&self, perm: &[Vertex]) -> Result<Graph, GraphError> {
        if perm.len() != self.n {
            return Err(GraphError::InvalidParameter(
                "permutation length differs from n".into(),
            ));
        }
        Graph::from_edges(
            self.n,
            self.edges
                .iter()
                .map(|e| (perm[e.u as usize], perm[e.v as usize])),
        )
    }
}

/// Vertex order on explicit degrees: `(d(u), u) < (d(v), v)`.
#[inline]
pub fn vertex_precedes(u: Vertex, du: u32, v: Vertex, dv: u32) -> bool {
    (du, u) < (dv, v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn path3() -> Graph {
        Graph::from_edges(3, vec![(1, 0), (2, 1)]).unwrap()
    }

    #[test]
    fn canonical_edges_and_sorted_neighbors() {
        let g = Graph::from_edges(4, vec![(3, 0), (0, 1), (1, 0), (2, 0)]).unwrap();
        assert_eq!(g.m(), 3);
        assert_eq!(g.neighbors(0), &[1, 2, 3]);
        assert_eq!(g.edges()[0], Edge::new(0, 1).unwrap());
        g.validate().unwrap();
    }

    #[test]
    fn rejects_self_loops_and_bad_ids() {
        assert_eq!(
            Graph::from_edges(3, vec![(1, 1)]),
            Err(GraphError::SelfLoop(1))
        );
        assert!(matches!(
            Graph::from_edges(3, vec![(0, 3)]),
            Err(GraphError::VertexOutOfRange { vertex: 3, n: 3 })
        ));
    }

    #[test]
    fn edge_degree_uses_min_endpoint() {
        // d(0)=1, d(1)=2
        let g = path3();
        let d = g.edge_degree(Edge::new(0, 1).unwrap()).unwrap();
        assert_eq!((d.degree, d.anchor, d.other), (1, 0, 1));
    }

    #[test]
    fn edge_degree_ties_go_to_smaller_id() {
        let g = Graph::from_edges(4, vec![(0, 1), (0, 2), (1, 3)]).unwrap();
        let d = g.edge_degree(Edge::new(0, 1).unwrap()).unwrap();
        assert_eq!((d.degree, d.anchor), (2, 0));
        let d = EdgeDegree::from_degrees(7, 4, 3, 4);
        assert_eq!((d.degree, d.anchor, d.other), (4, 3, 7));
        let d = EdgeDegree::from_degrees(7, 3, 3, 5);
        assert_eq!((d.degree, d.anchor), (3, 7));
    }

    #[test]
    fn edge_degree_on_missing_edge_is_error() {
        let g = path3();
        let e = Edge::new(0, 2).unwrap();
        assert_eq!(g.edge_degree(e), Err(GraphError::EdgeNotFound(e)));
    }

    #[test]
    fn star_edge_anchors_at_leaf() {
        let g = Graph::from_edges(10, (1..10).map(|v| (0, v))).unwrap();
        let d = g.edge_degree(Edge::new(0, 5).unwrap()).unwrap();
        assert_eq!((d.degree, d.anchor), (1, 5));
    }

    #[test]
    fn vertex_order_is_degree_then_id() {
        let g = path3();
        assert!(g.precedes(0, 1));
        assert!(g.precedes(0, 2));
        assert!(g.precedes(2, 1));
        assert!(!g.precedes(1, 1));
    }

    #[test]
    fn has_edge_handles_degenerate_queries() {
        let g = path3();
        assert!(g.has_edge(1, 0));
        assert!(!g.has_edge(1, 1));
        assert!(!g.has_edge(0, 2));
        assert!(!g.has_edge(0, 99));
    }

    #[test]
    fn union_and_relabel_preserve_invariants() {
        let g = path3().disjoint_union(&path3());
        assert_eq!((g.n(), g.m()), (6, 4));
        assert!(g.has_edge(4, 5));
        let r = g.relabel(&[5, 4, 3, 2, 1, 0]).unwrap();
        assert!(r.has_edge(0, 1) && r.has_edge(5, 4));
        r.validate().unwrap();
    }
}
