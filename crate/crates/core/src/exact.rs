//! Exact counting oracles used as ground truth by tests and harnesses.

use alloc::vec;
use alloc::vec::Vec;

use crate::graph::{Edge, Graph, Vertex};

/// Exact triangle statistics of a graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriangleCounts {
    pub total: u64,
    /// `t(e)` indexed like [`Graph::edges`].
    pub per_edge: Vec<u64>,
}

impl TriangleCounts {
    pub fn of_edge(&self, g: &Graph, e: Edge) -> Option<u64> {
        g.edge_index(e).map(|i| self.per_edge[i])
    }
}

/// Out-neighbors under the vertex order, each list sorted by id.
fn forward_lists(g: &Graph) -> Vec<Vec<Vertex>> {
    g.vertices()
        .map(|u| {
            g.neighbors(u)
                .iter()
                .copied()
                .filter(|&w| g.precedes(u, w))
                .collect()
        })
        .collect()
}

/// Calls `f(a, b, c)` once per triangle.
///
/// Each edge is oriented from the lower to the higher endpoint in the vertex
/// order; a triangle is found exactly once at its lowest vertex. Out-degrees
/// are bounded by `O(√m)` so the cost is `O(m·√m)` in the worst case and
/// `O(m·α)` on graphs of arboricity `α`.
pub fn for_each_triangle<F: FnMut(Vertex, Vertex, Vertex)>(g: &Graph, mut f: F) {
    let fwd = forward_lists(g);
    for u in g.vertices() {
        let out_u = &fwd[u as usize];
        for &v in out_u {
            let out_v = &fwd[v as usize];
            let (mut i, mut j) = (0, 0);
            while i < out_u.len() && j < out_v.len() {
                match out_u[i].cmp(&out_v[j]) {
                    core::cmp::Ordering::Less => i += 1,
                    core::cmp::Ordering::Greater => j += 1,
                    core::cmp::Ordering::Equal => {
                        f(u, v, out_u[i]);
                        i += 1;
                        j += 1;
                    }
                }
            }
        }
    }
}

pub fn triangle_count(g: &Graph) -> u64 {
    let mut t = 0;
    for_each_triangle(g, |_, _, _| t += 1);
    t
}

/// Total count plus `t(e)` for every edge.
pub fn triangle_counts(g: &Graph) -> TriangleCounts {
    let mut per_edge = vec![0u64; g.m()];
    let mut total = 0;
    let mut bump = |a: Vertex, b: Vertex| {
        let e = Edge::new(a, b).expect("triangle edges are proper");
        let i = g.edge_index(e).expect("triangle edge exists");
        per_edge[i] += 1;
    };
    for_each_triangle(g, |a, b, c| {
        total += 1;
        bump(a, b);
        bump(a, c);
        bump(b, c);
    });
    TriangleCounts { total, per_edge }
}

/// All triangles as sorted vertex triples, in lexicographic order.
pub fn triangles(g: &Graph) -> Vec<[Vertex; 3]> {
    let mut out = Vec::new();
    for_each_triangle(g, |a, b, c| {
        let mut t = [a, b, c];
        t.sort_unstable();
        out.push(t);
    });
    out.sort_unstable();
    out
}

/// Triple loop over all vertex triples. Only for cross-checking small graphs.
pub fn brute_force_triangle_count(g: &Graph) -> u64 {
    let n = g.n() as Vertex;
    let mut t = 0;
    for a in 0..n {
        for b in a + 1..n {
            if !g.has_edge(a, b) {
                continue;
            }
            for c in b + 1..n {
                if g.has_edge(a, c) && g.has_edge(b, c) {
                    t += 1;
                }
            }
        }
    }
    t
}

/// Largest minimum degree met while peeling minimum-degree vertices.
///
/// Bucket queue, `O(n + m)`. Satisfies `α(G) ≤ degeneracy ≤ 2α(G) − 1` for
/// graphs with at least one edge.
pub fn degeneracy(g: &Graph) -> u32 {
    let n = g.n();
    if n == 0 {
        return 0;
    }
    let mut deg: Vec<usize> = g.vertices().map(|v| g.degree(v) as usize).collect();
    let max_deg = deg.iter().copied().max().unwrap_or(0);
    // Batagelj–Zaversnik: vertices sorted by degree with bucket starts.
    let mut bin = vec![0usize; max_deg + 1];
    for &d in &deg {
        bin[d] += 1;
    }
    let mut start = 0;
    for b in bin.iter_mut() {
        let c = *b;
        *b = start;
        start += c;
    }
    let mut pos = vec![0usize; n];
    let mut order = vec![0 as Vertex; n];
    for v in 0..n {
        pos[v] = bin[deg[v]];
        order[pos[v]] = v as Vertex;
        bin[deg[v]] += 1;
    }
    for d in (1..=max_deg).rev() {
        bin[d] = bin[d - 1];
    }
    bin[0] = 0;
    let mut core = 0;
    for i in 0..n {
        let v = order[i] as usize;
        core = core.max(deg[v]);
        for &w in g.neighbors(v as Vertex) {
            let w = w as usize;
            if deg[w] > deg[v] {
                let dw = deg[w];
                let pw = pos[w];
                let ps = bin[dw];
                let u = order[ps] as usize;
                if u != w {
                    order.swap(pw, ps);
                    pos[u] = pw;
                    pos[w] = ps;
                }
                bin[dw] += 1;
                deg[w] -= 1;
            }
        }
    }
    core as u32
}

/// `d⁺(v)`: neighbors `w` with `v ≺ w`.
pub fn oriented_out_degree(g: &Graph, v: Vertex) -> u32 {
    g.neighbors(v).iter().filter(|&&w| g.precedes(v, w)).count() as u32
}

/// `Σ_e d(e)` over all edges.
pub fn edge_degree_sum(g: &Graph) -> u64 {
    g.edges()
        .iter()
        .map(|e| g.degree(e.u()).min(g.degree(e.v())) as u64)
        .sum()
}
