//! Graphs with a total vertex order, multigraph edge multisets, and the
//! structural operations (contraction, coning, Henneberg extension) used by
//! the rigidity pipeline. Also holds the named fixtures and the `.grf`
//! edge-list serialization.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use thiserror::Error;

/// Dense vertex identifier; the total order on vertices is numeric order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub usize);

impl std::fmt::Display for VertexId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Undirected edge, stored with `u < v`. No loops.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub u: VertexId,
    pub v: VertexId,
}

impl Edge {
    /// Normalizes endpoint order. Panics on a loop; loops are never stored.
    pub fn new(a: usize, b: usize) -> Self {
        assert_ne!(a, b, "loops are not representable");
        let (u, v) = if a < b { (a, b) } else { (b, a) };
        Edge {
            u: VertexId(u),
            v: VertexId(v),
        }
    }

    pub fn endpoints(&self) -> (usize, usize) {
        (self.u.0, self.v.0)
    }

    pub fn touches(&self, w: VertexId) -> bool {
        self.u == w || self.v == w
    }

    /// The endpoint other than `w`. Panics if `w` is not an endpoint.
    pub fn other(&self, w: VertexId) -> VertexId {
        if self.u == w {
            self.v
        } else {
            assert_eq!(self.v, w);
            self.u
        }
    }
}

impl std::fmt::Display for Edge {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}-{}", self.u, self.v)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("edge {0} is not present in the graph")]
    EdgeNotPresent(Edge),
    #[error("bad neighbor set: {0}")]
    BadNeighbors(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// A multigraph on vertices `0..n`. Edges are kept sorted, so a `Graph`
/// value is a canonical representative of its edge multiset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
}

impl Graph {
    pub fn new(n: usize, mut edges: Vec<Edge>) -> Self {
        for e in &edges {
            assert!(e.v.0 < n, "edge {e} out of range for {n} vertices");
        }
        edges.sort();
        Graph { n, edges }
    }

    pub fn empty(n: usize) -> Self {
        Graph { n, edges: Vec::new() }
    }

    pub fn complete(n: usize) -> Self {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in (u + 1)..n {
                edges.push(Edge::new(u, v));
            }
        }
        Graph::new(n, edges)
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn has_edge(&self, e: Edge) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    pub fn add_edge(&mut self, e: Edge) {
        assert!(e.v.0 < self.n);
        let pos = self.edges.partition_point(|x| x <= &e);
        self.edges.insert(pos, e);
    }

    /// Removes one copy of `e` if present.
    pub fn remove_edge(&mut self, e: Edge) -> bool {
        match self.edges.binary_search(&e) {
            Ok(i) => {
                self.edges.remove(i);
                true
            }
            Err(_) => false,
        }
    }

    /// True when no edge occurs twice.
    pub fn is_simple(&self) -> bool {
        self.edges.windows(2).all(|w| w[0] != w[1])
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.edges.iter().filter(|e| e.touches(v)).count()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (0..self.n).map(VertexId)
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut uf = UnionFind::new(self.n);
        for e in &self.edges {
            uf.union(e.u.0, e.v.0);
        }
        (1..self.n).all(|v| uf.find(v) == uf.find(0))
    }

    /// True when `f` is the edge set of a spanning tree of the vertex set.
    pub fn is_spanning_tree(&self, f: &BTreeSet<Edge>) -> bool {
        if self.n == 0 || f.len() != self.n - 1 {
            return false;
        }
        let mut uf = UnionFind::new(self.n);
        for e in f {
            if !self.has_edge(*e) || !uf.union(e.u.0, e.v.0) {
                return false;
            }
        }
        true
    }

    /// Contracts `e`: the endpoints merge into the smaller id, the contracted
    /// copy of `e` and any loops created are dropped, parallel edges are kept.
    /// Remaining ids shift down to stay dense; the relabeling is returned in
    /// the output's `vertex_map`.
    pub fn contract_edge(&self, e: Edge) -> Result<Contraction, GraphError> {
        if !self.has_edge(e) {
            return Err(GraphError::EdgeNotPresent(e));
        }
        let (keep, gone) = (e.u.0, e.v.0);
        let map: Vec<usize> = (0..self.n)
            .map(|w| {
                if w == gone {
                    keep
                } else if w > gone {
                    w - 1
                } else {
                    w
                }
            })
            .collect();
        let mut removed_contracted = false;
        let mut edges = Vec::new();
        for old in &self.edges {
            if *old == e && !removed_contracted {
                removed_contracted = true;
                continue;
            }
            let (a, b) = (map[old.u.0], map[old.v.0]);
            if a == b {
                continue; // loop created by the merge
            }
            edges.push(Edge::new(a, b));
        }
        Ok(Contraction {
            graph: Graph::new(self.n - 1, edges),
            vertex_map: map.into_iter().map(VertexId).collect(),
        })
    }

    /// Adds a vertex adjacent to all existing vertices.
    pub fn cone(&self) -> Graph {
        let apex = self.n;
        let mut edges = self.edges.clone();
        for v in 0..self.n {
            edges.push(Edge::new(v, apex));
        }
        Graph::new(self.n + 1, edges)
    }

    /// Henneberg 0-extension: a new vertex joined to three existing vertices.
    pub fn henneberg_0_extend(&self, neighbors: [VertexId; 3]) -> Result<Graph, GraphError> {
        if !self.is_simple() {
            return Err(GraphError::BadNeighbors("graph must be simple".into()));
        }
        let [a, b, c] = neighbors;
        if a == b || a == c || b == c {
            return Err(GraphError::BadNeighbors(format!(
                "neighbors {a},{b},{c} are not distinct"
            )));
        }
        if c.0 >= self.n || b.0 >= self.n || a.0 >= self.n {
            return Err(GraphError::BadNeighbors(format!(
                "neighbor out of range for {} vertices",
                self.n
            )));
        }
        let w = self.n;
        let mut edges = self.edges.clone();
        for x in neighbors {
            edges.push(Edge::new(x.0, w));
        }
        Ok(Graph::new(self.n + 1, edges))
    }

    /// Induced edge count on a vertex subset (with multiplicity).
    pub fn induced_edge_count(&self, verts: &BTreeSet<VertexId>) -> usize {
        self.edges
            .iter()
            .filter(|e| verts.contains(&e.u) && verts.contains(&e.v))
            .count()
    }
}

/// Result of a contraction: the new graph and the old-id to new-id map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Contraction {
    pub graph: Graph,
    pub vertex_map: Vec<VertexId>,
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false when both are already in the same component.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}

/// The partition triple (S1, S2, S3) of the edge set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgePartition {
    pub s1: BTreeSet<Edge>,
    pub s2: BTreeSet<Edge>,
    pub s3: BTreeSet<Edge>,
}

impl EdgePartition {
    pub fn new(s1: BTreeSet<Edge>, s2: BTreeSet<Edge>, s3: BTreeSet<Edge>) -> Self {
        EdgePartition { s1, s2, s3 }
    }

    pub fn parts(&self) -> [&BTreeSet<Edge>; 3] {
        [&self.s1, &self.s2, &self.s3]
    }

    pub fn sizes(&self) -> (usize, usize, usize) {
        (self.s1.len(), self.s2.len(), self.s3.len())
    }
}

// Fixture vertex labels for the double banana: r1=0, r2=1, a1=2, b1=3, c1=4,
// a2=5, b2=6, c2=7.
pub const R1: usize = 0;
pub const R2: usize = 1;
pub const A1: usize = 2;
pub const B1: usize = 3;
pub const C1: usize = 4;
pub const A2: usize = 5;
pub const B2: usize = 6;
pub const C2: usize = 7;

/// Two copies of K5 minus an edge, glued along the missing-edge pair
/// {r1, r2}. (3,6)-tight but not 3-rigid.
pub fn double_banana() -> Graph {
    let mut edges = Vec::new();
    for v in [A1, B1, C1, A2, B2, C2] {
        edges.push(Edge::new(R1, v));
        edges.push(Edge::new(R2, v));
    }
    for (a, b, c) in [(A1, B1, C1), (A2, B2, C2)] {
        edges.push(Edge::new(a, b));
        edges.push(Edge::new(a, c));
        edges.push(Edge::new(b, c));
    }
    Graph::new(8, edges)
}

/// The two hand-checked edge tripartitions of the double banana, keyed by
/// the distinguished edge they contain in S1.
pub fn banana_fixture_partitions() -> Vec<(Edge, EdgePartition)> {
    let set = |pairs: &[(usize, usize)]| -> BTreeSet<Edge> {
        pairs.iter().map(|&(a, b)| Edge::new(a, b)).collect()
    };
    let fixture_a = (
        Edge::new(R1, B1),
        EdgePartition::new(
            set(&[
                (R1, A1),
                (R1, B1),
                (R1, C1),
                (R1, A2),
                (R1, C2),
                (R2, B1),
                (R2, B2),
            ]),
            set(&[(R1, B2), (R2, A1), (A1, B1), (B1, C1), (A2, B2), (A2, C2)]),
            set(&[(R2, C1), (R2, A2), (R2, C2), (A1, C1), (B2, C2)]),
        ),
    );
    let fixture_b = (
        Edge::new(A1, B1),
        EdgePartition::new(
            set(&[
                (R1, B1),
                (R1, A2),
                (R2, B1),
                (R2, B2),
                (A1, B1),
                (B1, C1),
                (A2, C2),
            ]),
            set(&[(R1, A1), (R1, B2), (R1, C2), (R2, A1), (A1, C1), (A2, B2)]),
            set(&[(R1, C1), (R2, C1), (R2, A2), (R2, C2), (B2, C2)]),
        ),
    );
    vec![fixture_a, fixture_b]
}

/// Parses the `.grf` edge-list format: first non-comment line is the vertex
/// count, each following line is "u v"; `#` starts a comment; duplicate
/// lines are multi-edges.
pub fn parse_graph(text: &str) -> Result<Graph, GraphError> {
    let mut n: Option<usize> = None;
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        match n {
            None => {
                n = Some(body.parse().map_err(|_| GraphError::Parse {
                    line,
                    msg: format!("expected vertex count, got {body:?}"),
                })?);
            }
            Some(count) => {
                let mut it = body.split_whitespace();
                let parse_id = |tok: Option<&str>| -> Result<usize, GraphError> {
                    let tok = tok.ok_or(GraphError::Parse {
                        line,
                        msg: "expected \"u v\"".into(),
                    })?;
                    tok.parse().map_err(|_| GraphError::Parse {
                        line,
                        msg: format!("bad vertex id {tok:?}"),
                    })
                };
                let u = parse_id(it.next())?;
                let v = parse_id(it.next())?;
                if it.next().is_some() {
                    return Err(GraphError::Parse {
                        line,
                        msg: "trailing tokens after edge".into(),
                    });
                }
                if u == v {
                    return Err(GraphError::Parse {
                        line,
                        msg: format!("loop {u} {v} is not allowed"),
                    });
                }
                if u >= count || v >= count {
                    return Err(GraphError::Parse {
                        line,
                        msg: format!("vertex id out of range (n = {count})"),
                    });
                }
                edges.push(Edge::new(u, v));
            }
        }
    }
    let n = n.ok_or(GraphError::Parse {
        line: 0,
        msg: "empty input".into(),
    })?;
    Ok(Graph::new(n, edges))
}

/// Canonical text form: vertex count, then sorted "u v" lines.
pub fn serialize_graph(g: &Graph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}", g.num_vertices());
    for e in g.edges() {
        let _ = writeln!(out, "{} {}", e.u, e.v);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> Graph {
        Graph::new(3, vec![Edge::new(0, 1), Edge::new(0, 2), Edge::new(1, 2)])
    }

    #[test]
    fn contract_triangle_gives_double_edge() {
        let c = triangle().contract_edge(Edge::new(0, 1)).unwrap();
        assert_eq!(c.graph.num_vertices(), 2);
        assert_eq!(c.graph.edges(), &[Edge::new(0, 1), Edge::new(0, 1)]);
    }

    #[test]
    fn contract_path_gives_single_edge() {
        let path = Graph::new(3, vec![Edge::new(0, 1), Edge::new(1, 2)]);
        let c = path.contract_edge(Edge::new(0, 1)).unwrap();
        assert_eq!(c.graph.num_vertices(), 2);
        assert_eq!(c.graph.edges(), &[Edge::new(0, 1)]);
    }

    #[test]
    fn contract_k4_keeps_parallel_pairs() {
        // Hand enumeration: 01 contracted; 02/12 and 03/13 become parallel
        // pairs at the merged vertex; 23 survives.
        let c = Graph::complete(4).contract_edge(Edge::new(0, 1)).unwrap();
        assert_eq!(c.graph.num_vertices(), 3);
        assert_eq!(c.graph.num_edges(), 5);
        assert_eq!(
            c.graph.edges(),
            &[
                Edge::new(0, 1),
                Edge::new(0, 1),
                Edge::new(0, 2),
                Edge::new(0, 2),
                Edge::new(1, 2),
            ]
        );
    }

    #[test]
    fn contract_missing_edge_errors() {
        let path = Graph::new(3, vec![Edge::new(0, 1), Edge::new(1, 2)]);
        assert_eq!(
            path.contract_edge(Edge::new(0, 2)),
            Err(GraphError::EdgeNotPresent(Edge::new(0, 2)))
        );
    }

    #[test]
    fn cone_k3_is_k4() {
        assert_eq!(triangle().cone(), Graph::complete(4));
        assert_eq!(Graph::empty(1).cone(), Graph::complete(2));
    }

    #[test]
    fn cone_counts_and_simplicity() {
        let g = double_banana();
        let coned = g.cone();
        assert_eq!(coned.num_vertices(), 9);
        assert_eq!(coned.num_edges(), 26);
        assert!(coned.is_simple());
    }

    #[test]
    fn double_banana_shape() {
        let g = double_banana();
        assert_eq!(g.num_vertices(), 8);
        assert_eq!(g.num_edges(), 18);
        assert!(g.is_simple());
        assert_eq!(g.degree(VertexId(R1)), 6);
        assert_eq!(g.degree(VertexId(R2)), 6);
        assert!(!g.has_edge(Edge::new(R1, R2)));
        for v in g.vertices() {
            assert!(g.degree(v) >= 3);
        }
        // Removing {r1, r2} separates the halves.
        let mut uf = UnionFind::new(8);
        for e in g.edges() {
            if !e.touches(VertexId(R1)) && !e.touches(VertexId(R2)) {
                uf.union(e.u.0, e.v.0);
            }
        }
        assert_ne!(uf.find(A1), uf.find(A2));
        // Each half is K5 minus the r1r2 edge.
        for half in [[A1, B1, C1], [A2, B2, C2]] {
            let verts: BTreeSet<VertexId> =
                [R1, R2].iter().chain(half.iter()).map(|&v| VertexId(v)).collect();
            assert_eq!(g.induced_edge_count(&verts), 9);
        }
    }

    #[test]
    fn banana_fixtures_are_partitions() {
        let g = double_banana();
        let fixtures = banana_fixture_partitions();
        assert_eq!(fixtures.len(), 2);
        assert_eq!(fixtures[0].1.sizes(), (7, 6, 5));
        assert_eq!(fixtures[1].1.sizes(), (7, 6, 5));
        assert!(fixtures[1].1.s1.contains(&Edge::new(A1, B1)));
        for (e, part) in &fixtures {
            assert!(part.s1.contains(e));
            let mut all: Vec<Edge> = Vec::new();
            for p in part.parts() {
                all.extend(p.iter().copied());
            }
            all.sort();
            assert_eq!(all, g.edges());
        }
    }

    #[test]
    fn henneberg_extension_counts() {
        let g = Graph::complete(4)
            .henneberg_0_extend([VertexId(0), VertexId(1), VertexId(2)])
            .unwrap();
        assert_eq!(g.num_vertices(), 5);
        assert_eq!(g.num_edges(), 9);
        assert!(g.is_simple());

        let mut g = Graph::complete(4);
        for i in 0..8 {
            g = g
                .henneberg_0_extend([VertexId(i % 3), VertexId(i % 3 + 1), VertexId(i % 3 + 2)])
                .unwrap();
        }
        assert_eq!(g.num_vertices(), 12);
        assert_eq!(g.num_edges(), 30);
        assert!(g.is_simple());
    }

    #[test]
    fn henneberg_rejects_bad_neighbors() {
        let g = Graph::complete(4);
        assert!(g
            .henneberg_0_extend([VertexId(0), VertexId(0), VertexId(1)])
            .is_err());
        assert!(g
            .henneberg_0_extend([VertexId(0), VertexId(1), VertexId(7)])
            .is_err());
    }

    #[test]
    fn parse_basic() {
        let g = parse_graph("4\n0 1\n0 2\n").unwrap();
        assert_eq!(g.num_vertices(), 4);
        assert_eq!(g.edges(), &[Edge::new(0, 1), Edge::new(0, 2)]);
    }

    #[test]
    fn parse_rejects_loop() {
        match parse_graph("3\n0 0\n") {
            Err(GraphError::Parse { line: 2, .. }) => {}
            other => panic!("expected loop rejection, got {other:?}"),
        }
    }

    #[test]
    fn parse_comments_and_multiedges() {
        let g = parse_graph("# header\n3 # three vertices\n0 1\n0 1\n# done\n").unwrap();
        assert_eq!(g.num_edges(), 2);
        assert!(!g.is_simple());
    }

    #[test]
    fn serialize_round_trip_is_canonical() {
        let text = "4\n1 0\n0 2\n";
        let canonical = "4\n0 1\n0 2\n";
        assert_eq!(serialize_graph(&parse_graph(text).unwrap()), canonical);
        let again = parse_graph(canonical).unwrap();
        assert_eq!(serialize_graph(&again), canonical);
    }

    #[test]
    fn spanning_tree_check() {
        let g = Graph::complete(4);
        let tree: BTreeSet<Edge> = [Edge::new(0, 1), Edge::new(0, 2), Edge::new(0, 3)]
            .into_iter()
            .collect();
        assert!(g.is_spanning_tree(&tree));
        let cycle: BTreeSet<Edge> = [Edge::new(0, 1), Edge::new(1, 2), Edge::new(0, 2)]
            .into_iter()
            .collect();
        assert!(!g.is_spanning_tree(&cycle));
    }
}
