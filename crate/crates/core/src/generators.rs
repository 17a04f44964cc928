//! Seeded graph generators, including the two lower-bound families.
//!
//! All generators are deterministic functions of their arguments.

use alloc::format;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exact;
use crate::graph::{Graph, GraphError, Vertex};

fn invalid(msg: alloc::string::String) -> GraphError {
    GraphError::InvalidParameter(msg)
}

/// `K_k`.
pub fn gen_clique(k: usize) -> Graph {
    let k32 = k as Vertex;
    Graph::from_edges(k, (0..k32).flat_map(|a| (a + 1..k32).map(move |b| (a, b))))
        .expect("clique edges are valid")
}

/// Path `0 – 1 – … – (n−1)`.
pub fn gen_path(n: usize) -> Graph {
    Graph::from_edges(n, (1..n as Vertex).map(|v| (v - 1, v))).expect("path edges are valid")
}

/// Star `K_{1,n−1}` centred at vertex 0.
pub fn gen_star(n: usize) -> Graph {
    Graph::from_edges(n, (1..n as Vertex).map(|v| (0, v))).expect("star edges are valid")
}

/// Erdős–Rényi `G(n, p)`.
pub fn gen_er(n: usize, p: f64, seed: u64) -> Result<Graph, GraphError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(invalid(format!("edge probability {p} not in [0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n32 = n as Vertex;
    let mut pairs = Vec::new();
    for a in 0..n32 {
        for b in a + 1..n32 {
            if rng.random_bool(p) {
                pairs.push((a, b));
            }
        }
    }
    Graph::from_edges(n, pairs)
}

/// Uniform random labeled spanning tree of `K_n`, decoded from a random
/// Prüfer sequence in linear time.
fn random_spanning_tree<R: Rng>(n: usize, rng: &mut R, out: &mut Vec<(Vertex, Vertex)>) {
    if n < 2 {
        return;
    }
    let seq: Vec<usize> = (0..n - 2).map(|_| rng.random_range(0..n)).collect();
    let mut degree = alloc::vec![1usize; n];
    for &x in &seq {
        degree[x] += 1;
    }
    let mut ptr = 0;
    while degree[ptr] != 1 {
        ptr += 1;
    }
    let mut leaf = ptr;
    for &x in &seq {
        out.push((leaf as Vertex, x as Vertex));
        degree[x] -= 1;
        if degree[x] == 1 && x < ptr {
            leaf = x;
        } else {
            ptr += 1;
            while degree[ptr] != 1 {
                ptr += 1;
            }
            leaf = ptr;
        }
    }
    out.push((leaf as Vertex, (n - 1) as Vertex));
}

/// Union of `forests` independent uniform spanning trees on `0..n`, with
/// duplicate edges dropped. Arboricity is at most `forests` by construction.
pub fn gen_forest_union(n: usize, forests: u32, seed: u64) -> Result<Graph, GraphError> {
    if forests < 1 {
        return Err(invalid("forest count must be at least 1".into()));
    }
    if n < 2 {
        return Err(invalid(format!("forest union needs n >= 2, got {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = Vec::with_capacity(forests as usize * (n - 1));
    for _ in 0..forests {
        random_spanning_tree(n, &mut rng, &mut pairs);
    }
    Graph::from_edges(n, pairs)
}

/// Where a planted clique goes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CliquePlacement {
    /// On `k` new vertices appended after the base graph's.
    Fresh,
    /// On `k` distinct vertices of the base graph chosen uniformly.
    Random,
}

#[derive(Debug, Clone)]
pub struct PlantedClique {
    pub graph: Graph,
    pub members: Vec<Vertex>,
    /// Exact triangle count of the resulting graph.
    pub triangles: u64,
}

/// Adds a `k`-clique to `base` and recounts triangles exactly.
pub fn gen_planted_clique(
    base: &Graph,
    k: usize,
    placement: CliquePlacement,
    seed: u64,
) -> Result<PlantedClique, GraphError> {
    let (graph, members) = match placement {
        CliquePlacement::Fresh => {
            let g = base.disjoint_union(&gen_clique(k));
            let first = base.n() as Vertex;
            (g, (first..first + k as Vertex).collect::<Vec<_>>())
        }
        CliquePlacement::Random => {
            if k > base.n() {
                return Err(invalid(format!(
                    "clique of size {k} does not fit in {} vertices",
                    base.n()
                )));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut ids: Vec<Vertex> = base.vertices().collect();
            let (chosen, _) = ids.partial_shuffle(&mut rng, k);
            let mut members = chosen.to_vec();
            members.sort_unstable();
            let extra = members
                .iter()
                .enumerate()
                .flat_map(|(i, &a)| members[i + 1..].iter().map(move |&b| (a, b)));
            let pairs = base
                .edges()
                .iter()
                .map(|e| e.endpoints())
                .chain(extra)
                .collect::<Vec<_>>();
            (Graph::from_edges(base.n(), pairs)?, members)
        }
    };
    let triangles = exact::triangle_count(&graph);
    Ok(PlantedClique {
        graph,
        members,
        triangles,
    })
}

/// Which lower-bound family to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LowerBoundKind {
    /// Two regular bipartite parts; triangle-free.
    One,
    /// Regular bipartite part, a clique and isolated padding.
    Two,
}

#[derive(Debug, Clone)]
pub struct LowerBoundInstance {
    pub graph: Graph,
    pub kind: LowerBoundKind,
    /// Clique side `c = ⌈t^{1/3}⌉`.
    pub clique_size: usize,
    /// Vertex count `r` of the second gadget.
    pub gadget_vertices: usize,
    pub n_total: usize,
    pub m_total: usize,
    pub t_total: u64,
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Smallest `c` with `c³ ≥ t`.
fn ceil_cube_root(t: u64) -> u64 {
    let mut c = libm::cbrt(t as f64) as u64;
    while c.saturating_mul(c).saturating_mul(c) < t {
        c += 1;
    }
    while c > 0 && (c - 1) * (c - 1) * (c - 1) >= t {
        c -= 1;
    }
    c
}

/// `degree`-regular bipartite graph with `side` vertices per part.
fn regular_bipartite(side: usize, degree: usize) -> Graph {
    let s = side as Vertex;
    Graph::from_edges(
        2 * side,
        (0..s).flat_map(|i| (0..degree as Vertex).map(move |j| (i, s + (i + j) % s))),
    )
    .expect("circulant bipartite edges are valid")
}

/// Builds a member of a lower-bound family.
///
/// Both kinds share `A₁`, an `advice`-regular bipartite graph on `n`
/// vertices. Kind One adds `A₂`, an `advice`-regular bipartite graph on
/// `r = 2·C(c,2)/advice` vertices holding exactly `C(c,2)` edges; kind Two
/// instead adds a clique on `c = ⌈t^{1/3}⌉` vertices and `r − c` isolated
/// vertices, so both kinds have identical vertex and edge counts. Vertex
/// labels are shuffled with `seed`.
pub fn gen_lower_bound_family(
    kind: LowerBoundKind,
    n: usize,
    advice: u32,
    t: u64,
    seed: u64,
) -> Result<LowerBoundInstance, GraphError> {
    if advice == 0 {
        return Err(invalid("advice must be positive".into()));
    }
    if t == 0 {
        return Err(invalid("triangle target t must be positive".into()));
    }
    let a = advice as usize;
    let c = ceil_cube_root(t) as usize;
    if a >= c {
        return Err(invalid(format!(
            "advice {advice} must be below the clique size ⌈t^(1/3)⌉ = {c}"
        )));
    }
    let pairs = binomial(c as u64, 2) as usize;
    if pairs % a != 0 {
        return Err(invalid(format!(
            "divisibility: advice {advice} must divide C({c},2) = {pairs}"
        )));
    }
    let side = pairs / a;
    if side < a {
        return Err(invalid(format!(
            "gadget part size C({c},2)/advice = {side} is below the degree {advice}"
        )));
    }
    let r = 2 * side;
    if n % 2 != 0 {
        return Err(invalid(format!("parity: n = {n} must be even")));
    }
    if n / 2 < a {
        return Err(invalid(format!(
            "n/2 = {} is below the degree {advice}",
            n / 2
        )));
    }
    let a1 = regular_bipartite(n / 2, a);
    let (second, t_total) = match kind {
        LowerBoundKind::One => (regular_bipartite(side, a), 0),
        LowerBoundKind::Two => (
            gen_clique(c).disjoint_union(&Graph::empty(r - c)),
            binomial(c as u64, 3),
        ),
    };
    let g = a1.disjoint_union(&second);
    let mut perm: Vec<Vertex> = g.vertices().collect();
    perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let graph = g.relabel(&perm)?;
    let n_total = graph.n();
    let m_total = graph.m();
    Ok(LowerBoundInstance {
        graph,
        kind,
        clique_size: c,
        gadget_vertices: r,
        n_total,
        m_total,
        t_total,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{degeneracy, triangle_count};

    #[test]
    fn single_forest_is_a_spanning_tree() {
        for seed in 0..20 {
            let g = gen_forest_union(50, 1, seed).unwrap();
            g.validate().unwrap();
            assert_eq!(g.m(), 49);
            assert_eq!(triangle_count(&g), 0);
            assert_eq!(degeneracy(&g), 1);
        }
    }

    #[test]
    fn forest_union_degeneracy_within_sandwich() {
        let g = gen_forest_union(1000, 3, 5).unwrap();
        let d = degeneracy(&g);
        assert!((1..=5).contains(&d), "degeneracy {d}");
    }

    #[test]
    fn forest_union_is_deterministic() {
        assert_eq!(
            gen_forest_union(500, 2, 9).unwrap(),
            gen_forest_union(500, 2, 9).unwrap()
        );
        assert_ne!(
            gen_forest_union(500, 2, 9).unwrap(),
            gen_forest_union(500, 2, 10).unwrap()
        );
    }

    #[test]
    fn forest_union_rejects_bad_parameters() {
        assert!(gen_forest_union(1, 1, 0).is_err());
        assert!(gen_forest_union(10, 0, 0).is_err());
    }

    #[test]
    fn planted_clique_counts() {
        let base = gen_path(30);
        let p = gen_planted_clique(&base, 6, CliquePlacement::Fresh, 0).unwrap();
        assert_eq!(p.graph.n(), 36);
        assert_eq!(p.triangles, 20);
        let q = gen_planted_clique(&base, 6, CliquePlacement::Random, 3).unwrap();
        assert_eq!(q.graph.n(), 30);
        assert!(q.triangles >= 20);
        assert_eq!(q.triangles, triangle_count(&q.graph));
        for (i, &a) in q.members.iter().enumerate() {
            for &b in &q.members[i + 1..] {
                assert!(q.graph.has_edge(a, b));
            }
        }
    }

    #[test]
    fn cube_root_rounds_up() {
        assert_eq!(ceil_cube_root(1), 1);
        assert_eq!(ceil_cube_root(8), 2);
        assert_eq!(ceil_cube_root(9), 3);
        assert_eq!(ceil_cube_root(1728), 12);
        assert_eq!(ceil_cube_root(1729), 13);
    }

    #[test]
    fn lower_bound_kind_one_is_triangle_free() {
        let g = gen_lower_bound_family(LowerBoundKind::One, 40, 3, 216, 1).unwrap();
        g.graph.validate().unwrap();
        assert_eq!(triangle_count(&g.graph), 0);
        assert_eq!(g.t_total, 0);
    }

    #[test]
    fn lower_bound_kind_two_clique_of_twelve() {
        let g = gen_lower_bound_family(LowerBoundKind::Two, 40, 6, 1728, 1).unwrap();
        assert_eq!(g.clique_size, 12);
        assert_eq!(g.t_total, 220);
        assert_eq!(triangle_count(&g.graph), 220);
    }

    #[test]
    fn lower_bound_kinds_share_sizes() {
        for (n, a, t) in [(40, 3, 216), (60, 6, 1728), (20, 2, 125), (100, 4, 729)] {
            let one = gen_lower_bound_family(LowerBoundKind::One, n, a, t, 2).unwrap();
            let two = gen_lower_bound_family(LowerBoundKind::Two, n, a, t, 2).unwrap();
            assert_eq!((one.n_total, one.m_total), (two.n_total, two.m_total));
            assert_eq!(one.m_total, n * a as usize / 2 + one.clique_size * (one.clique_size - 1) / 2);
        }
    }

    #[test]
    fn lower_bound_infeasible_parameters_name_the_constraint() {
        let e = gen_lower_bound_family(LowerBoundKind::One, 40, 4, 216, 0).unwrap_err();
        assert!(format!("{e}").contains("divisibility"));
        let e = gen_lower_bound_family(LowerBoundKind::One, 41, 3, 216, 0).unwrap_err();
        assert!(format!("{e}").contains("parity"));
        let e = gen_lower_bound_family(LowerBoundKind::Two, 40, 6, 216, 0).unwrap_err();
        assert!(format!("{e}").contains("below the clique size"));
    }
}
