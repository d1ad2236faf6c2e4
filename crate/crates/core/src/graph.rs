//! Erdős–Rényi graph realizations: generation, distance decomposition,
//! degree diagnostics, and edge-list serialization.

use crate::bits::{BitMatrix, BitSet};
use crate::error::{Error, Result};
use rand::distributions::{Bernoulli, Distribution};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::io::{BufRead, Write};
use std::sync::OnceLock;

/// One realization of G(n, p): a simple undirected graph with cached
/// degrees and edge count.
///
/// Immutable after construction and safe to share across threads.
/// Generation is deterministic: ChaCha8 keyed by `seed`, one 64-bit draw
/// per unordered pair (i, j) with i < j in lexicographic order, so an
/// (n, p, seed) triple pins the realization within this implementation.
/// Cross-implementation bit-identity is not promised, only the sampling
/// distribution.
#[derive(Debug)]
pub struct ErGraph {
    n: usize,
    p: f64,
    seed: u64,
    adjacency: BitMatrix,
    degrees: Vec<u32>,
    edge_count: usize,
    neighbor_lists: OnceLock<Vec<Vec<u32>>>,
}

impl ErGraph {
    /// Vertex count.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Nominal edge probability used at generation time.
    pub fn p(&self) -> f64 {
        self.p
    }

    /// Seed used at generation time.
    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Number of edges |E|.
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn degree(&self, v: usize) -> usize {
        self.degrees[v] as usize
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency.get(u, v)
    }

    /// Neighbors of `v` in ascending order.
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adjacency.iter_row(v)
    }

    pub(crate) fn adjacency_row(&self, v: usize) -> &[u64] {
        self.adjacency.row(v)
    }

    /// Per-vertex neighbor arrays, built once on first use. Walk samplers
    /// need O(1) uniform neighbor draws; everything else reads bit rows.
    pub(crate) fn neighbor_lists(&self) -> &[Vec<u32>] {
        self.neighbor_lists.get_or_init(|| {
            (0..self.n)
                .map(|v| self.neighbors(v).map(|u| u as u32).collect())
                .collect()
        })
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.n {
            return Err(Error::InvalidParameter(format!(
                "vertex {v} out of range for n = {}",
                self.n
            )));
        }
        Ok(())
    }

    /// Builds a graph from an explicit edge set. `p` and `seed` become the
    /// stored labels; the adjacency is exactly the given edges.
    pub fn from_edges(n: usize, p: f64, seed: u64, edges: &[(usize, usize)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("vertex count must be positive".into()));
        }
        validate_p(p)?;
        let mut adjacency = BitMatrix::new(n);
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidParameter(format!(
                    "edge ({u}, {v}) out of range for n = {n}"
                )));
            }
            if u == v {
                return Err(Error::InvalidParameter(format!("self-loop at vertex {u}")));
            }
            if adjacency.get(u, v) {
                return Err(Error::InvalidParameter(format!("duplicate edge ({u}, {v})")));
            }
            adjacency.set_sym(u, v);
        }
        Ok(Self::from_adjacency(n, p, seed, adjacency))
    }

    fn from_adjacency(n: usize, p: f64, seed: u64, adjacency: BitMatrix) -> Self {
        let degrees: Vec<u32> = (0..n).map(|v| adjacency.row_count(v) as u32).collect();
        let edge_count = degrees.iter().map(|&d| d as usize).sum::<usize>() / 2;
        ErGraph {
            n,
            p,
            seed,
            adjacency,
            degrees,
            edge_count,
            neighbor_lists: OnceLock::new(),
        }
    }

    /// Set of vertices reachable from `v`, including `v` itself.
    pub(crate) fn reachable_from(&self, v: usize) -> BitSet {
        let mut seen = BitSet::new(self.n);
        seen.insert(v);
        let mut frontier = vec![v];
        while let Some(w) = frontier.pop() {
            for u in self.neighbors(w) {
                if !seen.contains(u) {
                    seen.insert(u);
                    frontier.push(u);
                }
            }
        }
        seen
    }

    /// First vertex (lowest id) not reachable from `v`, if any.
    pub(crate) fn first_unreachable(&self, v: usize) -> Option<usize> {
        let seen = self.reachable_from(v);
        (0..self.n).find(|&w| !seen.contains(w))
    }

    pub fn is_connected(&self) -> bool {
        self.first_unreachable(0).is_none()
    }

    /// Writes the edge-list text format: a header line `n p seed`, then one
    /// `u v` line per edge with u < v in lexicographic order. Round-trips
    /// exactly through [`ErGraph::read_edge_list`].
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "{} {} {}", self.n, self.p, self.seed)?;
        for u in 0..self.n {
            for v in self.neighbors(u) {
                if v > u {
                    writeln!(out, "{u} {v}")?;
                }
            }
        }
        Ok(())
    }

    /// Parses the edge-list text format produced by [`ErGraph::write_edge_list`].
    pub fn read_edge_list<R: BufRead>(input: R) -> Result<Self> {
        let mut lines = input.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Format("missing header line".into()))??;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(Error::Format(format!(
                "header must be `n p seed`, got {header:?}"
            )));
        }
        let n: usize = fields[0]
            .parse()
            .map_err(|_| Error::Format(format!("bad vertex count {:?}", fields[0])))?;
        let p: f64 = fields[1]
            .parse()
            .map_err(|_| Error::Format(format!("bad edge probability {:?}", fields[1])))?;
        let seed: u64 = fields[2]
            .parse()
            .map_err(|_| Error::Format(format!("bad seed {:?}", fields[2])))?;
        let mut edges = Vec::new();
        for line in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let pair: Vec<&str> = line.split_whitespace().collect();
            if pair.len() != 2 {
                return Err(Error::Format(format!("bad edge line {line:?}")));
            }
            let u: usize = pair[0]
                .parse()
                .map_err(|_| Error::Format(format!("bad vertex id {:?}", pair[0])))?;
            let v: usize = pair[1]
                .parse()
                .map_err(|_| Error::Format(format!("bad vertex id {:?}", pair[1])))?;
            edges.push((u, v));
        }
        Self::from_edges(n, p, seed, &edges).map_err(|e| match e {
            Error::InvalidParameter(msg) => Error::Format(msg),
            other => other,
        })
    }
}

fn validate_p(p: f64) -> Result<()> {
    if !p.is_finite() || p <= 0.0 || p > 1.0 {
        return Err(Error::InvalidParameter(format!(
            "edge probability must lie in (0, 1], got {p}"
        )));
    }
    Ok(())
}

/// Samples a G(n, p) realization deterministically from `seed`.
pub fn generate_er(n: usize, p: f64, seed: u64) -> Result<ErGraph> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "vertex count must be at least 2, got {n}"
        )));
    }
    validate_p(p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coin = Bernoulli::new(p).expect("validated probability");
    let mut adjacency = BitMatrix::new(n);
    for i in 0..n {
        for j in (i + 1)..n {
            if coin.sample(&mut rng) {
                adjacency.set_sym(i, j);
            }
        }
    }
    Ok(ErGraph::from_adjacency(n, p, seed, adjacency))
}

/// Vertices of a graph split by BFS distance from a fixed target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TargetDecomposition {
    /// The target vertex v.
    pub target: usize,
    /// Vertices at distance exactly 1 (the neighbors of v).
    pub set_a: Vec<usize>,
    /// Vertices at distance exactly 2.
    pub set_b: Vec<usize>,
    /// Vertices at distance >= 3 or unreachable.
    pub beyond: Vec<usize>,
}

/// Classifies every vertex by its distance to `v`.
pub fn decompose(g: &ErGraph, v: usize) -> Result<TargetDecomposition> {
    g.check_vertex(v)?;
    let mut in_a = BitSet::new(g.n());
    in_a.union_row(g.adjacency_row(v));
    let mut in_b = BitSet::new(g.n());
    for a in in_a.iter() {
        in_b.union_row(g.adjacency_row(a));
    }
    in_b.subtract(&in_a);
    in_b.remove(v);

    let set_a: Vec<usize> = in_a.iter().collect();
    let set_b: Vec<usize> = in_b.iter().collect();
    let beyond: Vec<usize> = (0..g.n())
        .filter(|&w| w != v && !in_a.contains(w) && !in_b.contains(w))
        .collect();
    Ok(TargetDecomposition {
        target: v,
        set_a,
        set_b,
        beyond,
    })
}

/// Worst-case degree deviation from the mean n·p, raw and scaled by
/// sqrt(n log n).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DegreeStats {
    pub max_abs_deviation: f64,
    pub normalized: f64,
}

pub fn degree_stats(g: &ErGraph) -> DegreeStats {
    let np = g.n() as f64 * g.p();
    let max_abs_deviation = g
        .degrees()
        .iter()
        .map(|&d| (d as f64 - np).abs())
        .fold(0.0, f64::max);
    let scale = (g.n() as f64 * (g.n() as f64).ln()).sqrt();
    DegreeStats {
        max_abs_deviation,
        normalized: max_abs_deviation / scale,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn adjacency_words(g: &ErGraph) -> Vec<u64> {
        (0..g.n()).flat_map(|v| g.adjacency_row(v).to_vec()).collect()
    }

    #[test]
    fn p_one_gives_complete_graph() {
        let g = generate_er(5, 1.0, 42).unwrap();
        assert_eq!(g.edge_count(), 10);
        assert!(g.degrees().iter().all(|&d| d == 4));
    }

    #[test]
    fn same_triple_same_graph() {
        let a = generate_er(100, 0.5, 7).unwrap();
        let b = generate_er(100, 0.5, 7).unwrap();
        assert_eq!(adjacency_words(&a), adjacency_words(&b));
        let c = generate_er(100, 0.5, 8).unwrap();
        assert_ne!(adjacency_words(&a), adjacency_words(&c));
    }

    #[test]
    fn edge_count_is_binomial_scale() {
        // mean C(4000,2)*0.2 = 1_599_600, sd = sqrt(C(4000,2)*0.2*0.8) ~ 1131.2
        let g = generate_er(4000, 0.2, 20260811).unwrap();
        let mean = 1_599_600.0;
        let sd = 1131.2;
        assert!((g.edge_count() as f64 - mean).abs() <= 4.0 * sd);
        // cached count agrees with a direct recount of the bit rows
        let direct: usize = (0..g.n())
            .map(|v| g.neighbors(v).filter(|&u| u > v).count())
            .sum();
        assert_eq!(direct, g.edge_count());
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(generate_er(1, 0.5, 0).is_err());
        assert!(generate_er(10, 0.0, 0).is_err());
        assert!(generate_er(10, 1.5, 0).is_err());
        assert!(generate_er(10, f64::NAN, 0).is_err());
    }

    #[test]
    fn decompose_complete_graph() {
        let g = generate_er(5, 1.0, 0).unwrap();
        let d = decompose(&g, 2).unwrap();
        assert_eq!(d.set_a, vec![0, 1, 3, 4]);
        assert!(d.set_b.is_empty());
        assert!(d.beyond.is_empty());
    }

    #[test]
    fn decompose_path() {
        let g = ErGraph::from_edges(3, 0.5, 0, &[(0, 1), (1, 2)]).unwrap();
        let d = decompose(&g, 0).unwrap();
        assert_eq!(d.set_a, vec![1]);
        assert_eq!(d.set_b, vec![2]);
        assert!(d.beyond.is_empty());
    }

    #[test]
    fn decompose_isolated_and_far() {
        // 0-1-2-3 path plus isolated vertex 4: for v=0, vertex 3 is at
        // distance 3 and vertex 4 unreachable
        let g = ErGraph::from_edges(5, 0.5, 0, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let d = decompose(&g, 0).unwrap();
        assert_eq!(d.set_a, vec![1]);
        assert_eq!(d.set_b, vec![2]);
        assert_eq!(d.beyond, vec![3, 4]);
    }

    #[test]
    fn dense_realization_has_diameter_two() {
        let g = generate_er(1000, 0.5, 3).unwrap();
        for v in 0..g.n() {
            let d = decompose(&g, v).unwrap();
            assert!(d.beyond.is_empty(), "vertex {v} has beyond set");
        }
    }

    #[test]
    fn degree_stats_fixtures() {
        let g = generate_er(5, 1.0, 0).unwrap();
        assert_eq!(degree_stats(&g).max_abs_deviation, 1.0);
        let e = generate_er(2, 1.0, 0).unwrap();
        assert_eq!(degree_stats(&e).max_abs_deviation, 1.0);
    }

    #[test]
    fn degree_concentration_at_desk_scale() {
        let g = generate_er(2000, 0.5, 11).unwrap();
        assert!(degree_stats(&g).normalized <= 2.0);
    }

    #[test]
    fn mean_edge_count_matches_binomial() {
        // 100 seeds at n=200, p=0.3: mean within 3 standard errors of
        // C(200,2)*0.3 = 5970, se = sqrt(C(200,2)*0.3*0.7)/sqrt(100)
        let m = 100;
        let mean_expected = 19900.0 * 0.3;
        let se = (19900.0f64 * 0.3 * 0.7).sqrt() / (m as f64).sqrt();
        let total: usize = (0..m)
            .map(|s| generate_er(200, 0.3, s as u64).unwrap().edge_count())
            .sum();
        let mean = total as f64 / m as f64;
        assert!(
            (mean - mean_expected).abs() <= 3.0 * se,
            "mean {mean} vs expected {mean_expected} (se {se})"
        );
    }

    #[test]
    fn edge_list_round_trip() {
        let g = generate_er(40, 0.35, 99).unwrap();
        let mut buf = Vec::new();
        g.write_edge_list(&mut buf).unwrap();
        let h = ErGraph::read_edge_list(buf.as_slice()).unwrap();
        assert_eq!(h.n(), g.n());
        assert_eq!(h.p(), g.p());
        assert_eq!(h.seed(), g.seed());
        assert_eq!(adjacency_words(&h), adjacency_words(&g));
        let mut buf2 = Vec::new();
        h.write_edge_list(&mut buf2).unwrap();
        assert_eq!(buf, buf2);
    }

    #[test]
    fn edge_list_rejects_garbage() {
        assert!(ErGraph::read_edge_list("".as_bytes()).is_err());
        assert!(ErGraph::read_edge_list("3 0.5\n".as_bytes()).is_err());
        assert!(ErGraph::read_edge_list("3 0.5 0\n0 0\n".as_bytes()).is_err());
        assert!(ErGraph::read_edge_list("3 0.5 0\n0 7\n".as_bytes()).is_err());
        assert!(ErGraph::read_edge_list("3 0.5 0\n0 1\n1 0\n".as_bytes()).is_err());
    }

    proptest! {
        #[test]
        fn decomposition_partitions_vertices(
            n in 2usize..50,
            p in 0.05f64..=1.0,
            seed in 0u64..5000,
        ) {
            let g = generate_er(n, p, seed).unwrap();
            let v = seed as usize % n;
            let d = decompose(&g, v).unwrap();
            let mut all: Vec<usize> = vec![v];
            all.extend(&d.set_a);
            all.extend(&d.set_b);
            all.extend(&d.beyond);
            all.sort_unstable();
            prop_assert_eq!(all, (0..n).collect::<Vec<_>>());
            for &a in &d.set_a {
                prop_assert!(g.has_edge(a, v));
            }
            for &b in &d.set_b {
                prop_assert!(!g.has_edge(b, v));
            }
        }

        #[test]
        fn adjacency_is_symmetric_and_consistent(
            n in 2usize..40,
            p in 0.05f64..=1.0,
            seed in 0u64..5000,
        ) {
            let g = generate_er(n, p, seed).unwrap();
            let mut twice_edges = 0usize;
            for u in 0..n {
                prop_assert!(!g.has_edge(u, u));
                let mut deg = 0;
                for w in 0..n {
                    if g.has_edge(u, w) {
                        prop_assert!(g.has_edge(w, u));
                        deg += 1;
                    }
                }
                prop_assert_eq!(deg, g.degree(u));
                twice_edges += deg;
            }
            prop_assert_eq!(twice_edges, 2 * g.edge_count());
        }
    }
}
