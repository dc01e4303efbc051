//! Weighted simple graphs and the combinatorial routines built on them.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An undirected weighted edge with `u < v`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub w: f64,
}

impl Edge {
    /// The endpoint opposite to `x`.
    pub fn other(&self, x: usize) -> usize {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }

    pub fn touches(&self, x: usize) -> bool {
        self.u == x || self.v == x
    }
}

/// Simple undirected graph with nonnegative edge weights.
///
/// Edges are stored in canonical `u < v` form in insertion order; an edge's
/// position in [`WeightedGraph::edges`] is its index everywhere else in the
/// crate. Instances are immutable after construction.
#[derive(Clone, Debug)]
pub struct WeightedGraph {
    n: usize,
    edges: Vec<Edge>,
    degree: Vec<usize>,
    /// `adjacency[v]` holds `(neighbor, edge index)` sorted by neighbor.
    adjacency: Vec<Vec<(usize, usize)>>,
    index: HashMap<(usize, usize), usize>,
    total_weight: f64,
}

impl WeightedGraph {
    pub fn new<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        let mut out = Vec::new();
        let mut index = HashMap::new();
        for (a, b, w) in edges {
            if a >= n || b >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({a}, {b}) has a vertex outside [0, {n})"
                )));
            }
            if a == b {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {a}")));
            }
            if !w.is_finite() || w < 0.0 {
                return Err(Error::InvalidGraph(format!(
                    "edge ({a}, {b}) has invalid weight {w}"
                )));
            }
            let (u, v) = (a.min(b), a.max(b));
            if index.insert((u, v), out.len()).is_some() {
                return Err(Error::InvalidGraph(format!("duplicate edge ({u}, {v})")));
            }
            out.push(Edge { u, v, w });
        }

        let mut degree = vec![0; n];
        let mut adjacency = vec![Vec::new(); n];
        for (k, e) in out.iter().enumerate() {
            degree[e.u] += 1;
            degree[e.v] += 1;
            adjacency[e.u].push((e.v, k));
            adjacency[e.v].push((e.u, k));
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        let total_weight = out.iter().map(|e| e.w).sum();
        Ok(Self {
            n,
            edges: out,
            degree,
            adjacency,
            index,
            total_weight,
        })
    }

    /// All edges with weight one.
    pub fn unweighted<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        Self::new(n, edges.into_iter().map(|(u, v)| (u, v, 1.0)))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, k: usize) -> &Edge {
        &self.edges[k]
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.degree[v]
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degree
    }

    pub fn max_degree(&self) -> usize {
        self.degree.iter().copied().max().unwrap_or(0)
    }

    /// `Some(d)` when every vertex has degree `d`.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = *self.degree.first()?;
        self.degree.iter().all(|&x| x == d).then_some(d)
    }

    pub fn total_weight(&self) -> f64 {
        self.total_weight
    }

    /// `(neighbor, edge index)` pairs sorted by neighbor.
    pub fn neighbors(&self, v: usize) -> &[(usize, usize)] {
        &self.adjacency[v]
    }

    pub fn edge_index(&self, a: usize, b: usize) -> Option<usize> {
        self.index.get(&(a.min(b), a.max(b))).copied()
    }

    pub fn is_uniform(&self) -> bool {
        self.edges.windows(2).all(|p| p[0].w == p[1].w)
    }

    /// Vertex sets of the connected components, each sorted, ordered by
    /// smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut queue = VecDeque::from([s]);
            while let Some(x) = queue.pop_front() {
                for &(y, _) in &self.adjacency[x] {
                    if !seen[y] {
                        seen[y] = true;
                        comp.push(y);
                        queue.push_back(y);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.components().len() == 1
    }

    /// Serializes to the edge-list text format read by [`parse_graph`].
    pub fn to_edge_list(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# vertices: {}", self.n);
        for e in &self.edges {
            let _ = writeln!(s, "{} {} {}", e.u, e.v, e.w);
        }
        s
    }

    fn check_bits(&self, z: &[u8]) -> Result<()> {
        if z.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                got: z.len(),
            });
        }
        Ok(())
    }
}

/// Parses an edge list.
///
/// Each non-blank, non-comment line is `u v [w]` with `w` defaulting to 1.
/// The vertex count is one more than the largest id, unless a
/// `# vertices: N` comment raises it (isolated trailing vertices).
pub fn parse_graph(text: &str) -> Result<WeightedGraph> {
    let mut edges = Vec::new();
    let mut seen = HashMap::new();
    let mut n = 0usize;
    let mut declared = 0usize;
    for (k, raw) in text.lines().enumerate() {
        let line_no = k + 1;
        let err = |message: String| Error::Parse {
            line: line_no,
            message,
        };
        let line = raw.trim();
        if let Some(comment) = line.strip_prefix('#') {
            if let Some(rest) = comment.trim().strip_prefix("vertices:") {
                declared = rest
                    .trim()
                    .parse()
                    .map_err(|_| err(format!("bad vertex count {:?}", rest.trim())))?;
            }
            continue;
        }
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 && fields.len() != 3 {
            return Err(err(format!("expected \"u v [w]\", got {line:?}")));
        }
        let id = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| err(format!("bad vertex id {s:?}")))
        };
        let (u, v) = (id(fields[0])?, id(fields[1])?);
        let w = match fields.get(2) {
            Some(s) => s
                .parse::<f64>()
                .map_err(|_| err(format!("bad weight {s:?}")))?,
            None => 1.0,
        };
        if u == v {
            return Err(err(format!("self-loop at vertex {u}")));
        }
        if !w.is_finite() || w < 0.0 {
            return Err(err(format!("negative or non-finite weight {w}")));
        }
        let key = (u.min(v), u.max(v));
        if let Some(first) = seen.insert(key, line_no) {
            return Err(err(format!(
                "duplicate edge ({}, {}) first seen on line {first}",
                key.0, key.1
            )));
        }
        n = n.max(u + 1).max(v + 1);
        edges.push((u, v, w));
    }
    WeightedGraph::new(n.max(declared), edges)
}

/// Number of triangles containing each edge, indexed by edge.
pub fn triangles_per_edge(g: &WeightedGraph) -> Vec<usize> {
    g.edges()
        .iter()
        .map(|e| common_neighbors(g.neighbors(e.u), g.neighbors(e.v)))
        .collect()
}

fn common_neighbors(a: &[(usize, usize)], b: &[(usize, usize)]) -> usize {
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

/// BFS spanning forest, one tree per component rooted at its smallest vertex.
pub fn spanning_forest(g: &WeightedGraph) -> Vec<usize> {
    let mut seen = vec![false; g.n()];
    let mut forest = Vec::with_capacity(g.n().saturating_sub(1));
    let mut queue = VecDeque::new();
    for root in 0..g.n() {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        queue.push_back(root);
        while let Some(x) = queue.pop_front() {
            for &(y, k) in g.neighbors(x) {
                if !seen[y] {
                    seen[y] = true;
                    forest.push(k);
                    queue.push_back(y);
                }
            }
        }
    }
    forest
}

/// BFS spanning tree rooted at vertex 0, as edge indices.
pub fn spanning_tree(g: &WeightedGraph) -> Result<Vec<usize>> {
    let tree = spanning_forest(g);
    if g.n() > 0 && tree.len() + 1 != g.n() {
        return Err(Error::Disconnected);
    }
    Ok(tree)
}

/// Proper 2-coloring of an acyclic edge subset.
///
/// Every edge of `forest` gets endpoints of different colors. The smallest
/// vertex of each tree is colored 0; vertices touched by no edge get 0.
pub fn two_color_forest(g: &WeightedGraph, forest: &[usize]) -> Result<Vec<u8>> {
    let n = g.n();
    let mut dsu = DisjointSets::new(n);
    let mut adj = vec![Vec::new(); n];
    for &k in forest {
        let e = g.edge(k);
        if !dsu.union(e.u, e.v) {
            return Err(Error::Cycle(e.u));
        }
        adj[e.u].push(e.v);
        adj[e.v].push(e.u);
    }
    let mut color = vec![0u8; n];
    let mut seen = vec![false; n];
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    color[y] = 1 - color[x];
                    queue.push_back(y);
                }
            }
        }
    }
    Ok(color)
}

/// Union-find with path halving and union by size.
struct DisjointSets {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false if `a` and `b` were already joined.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        true
    }
}

/// Proper edge coloring with at most `Δ + 1` colors (Misra–Gries).
///
/// Returns one color per edge, indexed by edge.
pub fn proper_edge_coloring(g: &WeightedGraph) -> Vec<usize> {
    let palette = g.max_degree() + 1;
    let mut state = EdgeColoring {
        g,
        color: vec![None; g.num_edges()],
        at: vec![vec![None; palette]; g.n()],
    };
    for k in 0..g.num_edges() {
        state.color_edge(k);
    }
    state
        .color
        .into_iter()
        .map(|c| c.expect("every edge is colored"))
        .collect()
}

struct EdgeColoring<'a> {
    g: &'a WeightedGraph,
    color: Vec<Option<usize>>,
    /// `at[v][c]` is the edge of color `c` at `v`.
    at: Vec<Vec<Option<usize>>>,
}

impl EdgeColoring<'_> {
    fn is_free(&self, v: usize, c: usize) -> bool {
        self.at[v][c].is_none()
    }

    fn free_color(&self, v: usize) -> usize {
        self.at[v]
            .iter()
            .position(Option::is_none)
            .expect("a vertex with an uncolored edge has a free color")
    }

    fn assign(&mut self, k: usize, c: usize) {
        let e = *self.g.edge(k);
        self.color[k] = Some(c);
        self.at[e.u][c] = Some(k);
        self.at[e.v][c] = Some(k);
    }

    fn unassign(&mut self, k: usize) {
        if let Some(c) = self.color[k].take() {
            let e = *self.g.edge(k);
            self.at[e.u][c] = None;
            self.at[e.v][c] = None;
        }
    }

    fn color_edge(&mut self, k: usize) {
        let e = *self.g.edge(k);
        let u = e.u;

        // Maximal fan of u starting at the uncolored edge's far end.
        let mut fan = vec![e.v];
        let mut in_fan = vec![false; self.g.n()];
        in_fan[e.v] = true;
        loop {
            let last = *fan.last().unwrap();
            let next = (0..self.at[u].len()).find_map(|c| {
                let edge = self.at[u][c]?;
                let x = self.g.edge(edge).other(u);
                (!in_fan[x] && self.is_free(last, c)).then_some(x)
            });
            match next {
                Some(x) => {
                    in_fan[x] = true;
                    fan.push(x);
                }
                None => break,
            }
        }

        let c = self.free_color(u);
        let d = self.free_color(*fan.last().unwrap());

        // Invert the cd-path starting at u.
        if c != d {
            let mut path = Vec::new();
            let (mut cur, mut want) = (u, d);
            while let Some(edge) = self.at[cur][want] {
                path.push(edge);
                cur = self.g.edge(edge).other(cur);
                want = if want == d { c } else { d };
            }
            let swapped: Vec<(usize, usize)> = path
                .iter()
                .map(|&p| (p, if self.color[p] == Some(c) { d } else { c }))
                .collect();
            for &p in &path {
                self.unassign(p);
            }
            for (p, col) in swapped {
                self.assign(p, col);
            }
        }

        // First fan vertex w with d free such that fan[..=w] is still a fan.
        let edge_to = |x: usize| self.g.edge_index(u, x).unwrap();
        let mut stop = None;
        for i in 0..fan.len() {
            if i > 0 {
                let col = self.color[edge_to(fan[i])];
                match col {
                    Some(col) if self.is_free(fan[i - 1], col) => {}
                    _ => break,
                }
            }
            if self.is_free(fan[i], d) {
                stop = Some(i);
                break;
            }
        }
        let w = stop.expect("Misra-Gries always finds a rotation vertex");

        // Rotate the fan prefix and close it with d.
        let shifted: Vec<(usize, usize)> = (0..w)
            .map(|i| {
                let next = edge_to(fan[i + 1]);
                (edge_to(fan[i]), self.color[next].unwrap())
            })
            .collect();
        for &x in &fan[1..=w] {
            self.unassign(edge_to(x));
        }
        for (edge, col) in shifted {
            self.assign(edge, col);
        }
        self.assign(edge_to(fan[w]), d);
    }
}

/// Partition of the edges by a bit string into cut and uncut edges.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutPartition {
    pub z: Vec<u8>,
    pub sat_edges: Vec<usize>,
    pub unsat_edges: Vec<usize>,
}

impl CutPartition {
    pub fn new(g: &WeightedGraph, z: &[u8]) -> Result<Self> {
        g.check_bits(z)?;
        let (sat_edges, unsat_edges) = (0..g.num_edges()).partition(|&k| {
            let e = g.edge(k);
            z[e.u] != z[e.v]
        });
        Ok(Self {
            z: z.to_vec(),
            sat_edges,
            unsat_edges,
        })
    }

    pub fn is_sat(&self, g: &WeightedGraph, k: usize) -> bool {
        let e = g.edge(k);
        self.z[e.u] != self.z[e.v]
    }
}

/// A matching `M` and forest `F` built from each vertex's heaviest edge.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatchForestDecomposition {
    /// Edge indices of the matching, ascending.
    pub matching: Vec<usize>,
    /// Edge indices of the forest, ascending.
    pub forest: Vec<usize>,
    /// Total weight of `matching`.
    pub m: f64,
    /// Total weight of `forest`.
    pub f: f64,
    /// Vertices not covered by the matching.
    pub unmatched: Vec<usize>,
}

/// The heaviest edge at every vertex under the order `(weight, edge index)`;
/// `None` for isolated vertices.
pub fn heaviest_incident_edges(g: &WeightedGraph) -> Vec<Option<usize>> {
    (0..g.n())
        .map(|v| {
            g.neighbors(v)
                .iter()
                .map(|&(_, k)| k)
                .max_by(|&a, &b| g.edge(a).w.total_cmp(&g.edge(b).w).then(a.cmp(&b)))
        })
        .collect()
}

/// Splits `{I(v)}` into a forest `F` and the matching `M` of edges chosen by
/// both endpoints, so that `Σ_v max_{e∼v} w_e = m + f`.
///
/// Weight ties are broken by edge index (lower index is smaller). Isolated
/// vertices contribute nothing.
pub fn match_forest_decompose(g: &WeightedGraph) -> MatchForestDecomposition {
    let chosen = heaviest_incident_edges(g);
    let mut picks = vec![0u8; g.num_edges()];
    for k in chosen.iter().flatten() {
        picks[*k] += 1;
    }
    let forest: Vec<usize> = (0..g.num_edges()).filter(|&k| picks[k] > 0).collect();
    let matching: Vec<usize> = (0..g.num_edges()).filter(|&k| picks[k] == 2).collect();
    let mut covered = vec![false; g.n()];
    for &k in &matching {
        covered[g.edge(k).u] = true;
        covered[g.edge(k).v] = true;
    }
    MatchForestDecomposition {
        m: matching.iter().map(|&k| g.edge(k).w).sum(),
        f: forest.iter().map(|&k| g.edge(k).w).sum(),
        unmatched: (0..g.n()).filter(|&v| !covered[v]).collect(),
        matching,
        forest,
    }
}

/// `Σ_v max_{e∼v} w_e`.
pub fn sum_of_max_incident_weights(g: &WeightedGraph) -> f64 {
    (0..g.n())
        .filter_map(|v| {
            g.neighbors(v)
                .iter()
                .map(|&(_, k)| g.edge(k).w)
                .max_by(f64::total_cmp)
        })
        .sum()
}

/// True when no edge subset contains a cycle.
pub fn is_forest(g: &WeightedGraph, edges: &[usize]) -> bool {
    let mut dsu = DisjointSets::new(g.n());
    edges.iter().all(|&k| dsu.union(g.edge(k).u, g.edge(k).v))
}

/// True when no two edges of the subset share a vertex.
pub fn is_matching(g: &WeightedGraph, edges: &[usize]) -> bool {
    let mut used = vec![false; g.n()];
    edges.iter().all(|&k| {
        let e = g.edge(k);
        let fresh = !used[e.u] && !used[e.v];
        used[e.u] = true;
        used[e.v] = true;
        fresh
    })
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parse_single_edge() {
        let g = parse_graph("0 1 1.0").unwrap();
        assert_eq!(g.n(), 2);
        assert_eq!(g.edges(), &[Edge { u: 0, v: 1, w: 1.0 }]);
    }

    #[test]
    fn parse_defaults_weight_and_canonicalizes() {
        let g = parse_graph("# triangle\n0 1\n\n1 2\n2 0\n").unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.num_edges(), 3);
        assert!(g.edges().iter().all(|e| e.w == 1.0 && e.u < e.v));
        assert_eq!(g.degrees(), &[2, 2, 2]);
        assert_eq!(g.edge(2), &Edge { u: 0, v: 2, w: 1.0 });
    }

    #[test]
    fn parse_errors_name_the_line() {
        let cases = [
            ("0 1 -2", 1, "negative"),
            ("0 1\n2 2", 2, "self-loop"),
            ("0 1\n# c\n1 0 3", 3, "duplicate"),
            ("0 x", 1, "vertex id"),
            ("0 1 2 3", 1, "expected"),
            ("0 1 abc", 1, "weight"),
        ];
        for (text, line, needle) in cases {
            match parse_graph(text) {
                Err(Error::Parse { line: l, message }) => {
                    assert_eq!(l, line, "{text:?}");
                    assert!(message.contains(needle), "{message}");
                }
                other => panic!("{text:?} gave {other:?}"),
            }
        }
    }

    #[test]
    fn vertex_directive_keeps_isolated_vertices() {
        let g = parse_graph("# vertices: 5\n0 1\n").unwrap();
        assert_eq!(g.n(), 5);
        let back = parse_graph(&g.to_edge_list()).unwrap();
        assert_eq!(back.n(), 5);
        assert_eq!(back.edges(), g.edges());
    }

    #[test]
    fn triangle_counts() {
        assert_eq!(triangles_per_edge(&complete(4)), vec![2; 6]);
        assert_eq!(triangles_per_edge(&triangle()), vec![1; 3]);
        let tree = WeightedGraph::unweighted(5, [(0, 1), (0, 2), (2, 3), (2, 4)]).unwrap();
        assert_eq!(triangles_per_edge(&tree), vec![0; 4]);
    }

    #[test]
    fn spanning_tree_cases() {
        let p = path3(1.0, 1.0);
        assert_eq!(spanning_tree(&p).unwrap(), vec![0, 1]);
        let t = spanning_tree(&triangle()).unwrap();
        assert_eq!(t.len(), 2);
        assert!(is_forest(&triangle(), &t));
        let split = WeightedGraph::new(2, []).unwrap();
        assert!(matches!(spanning_tree(&split), Err(Error::Disconnected)));
    }

    #[test]
    fn two_coloring_cases() {
        let p = path3(1.0, 1.0);
        assert_eq!(two_color_forest(&p, &[0, 1]).unwrap(), vec![0, 1, 0]);
        let s = star(&[1.0; 4]);
        let all: Vec<usize> = (0..4).collect();
        let c = two_color_forest(&s, &all).unwrap();
        assert!(c[1..].iter().all(|&b| b != c[0]));
        assert!(matches!(
            two_color_forest(&triangle(), &[0, 1, 2]),
            Err(Error::Cycle(_))
        ));
        // untouched vertices default to 0
        assert_eq!(two_color_forest(&p, &[1]).unwrap(), vec![0, 0, 1]);
    }

    fn assert_proper(g: &WeightedGraph, colors: &[usize]) {
        for v in 0..g.n() {
            let mut seen: Vec<usize> = g.neighbors(v).iter().map(|&(_, k)| colors[k]).collect();
            seen.sort_unstable();
            let len = seen.len();
            seen.dedup();
            assert_eq!(seen.len(), len, "two edges at {v} share a color");
        }
        assert!(colors.iter().all(|&c| c <= g.max_degree()));
    }

    #[test]
    fn edge_coloring_cases() {
        let p = path3(1.0, 1.0);
        let c = proper_edge_coloring(&p);
        assert_proper(&p, &c);
        assert_ne!(c[0], c[1]);

        let t = triangle();
        let c = proper_edge_coloring(&t);
        assert_proper(&t, &c);
        let mut distinct = c.clone();
        distinct.sort_unstable();
        distinct.dedup();
        assert_eq!(distinct.len(), 3);

        let m = WeightedGraph::unweighted(6, [(0, 1), (2, 3), (4, 5)]).unwrap();
        assert_eq!(proper_edge_coloring(&m), vec![0, 0, 0]);

        for n in 2..9 {
            let k = complete(n);
            assert_proper(&k, &proper_edge_coloring(&k));
        }
    }

    #[test]
    fn decompose_weighted_path() {
        let g = path3(1.0, 2.0);
        let d = match_forest_decompose(&g);
        assert_eq!(d.forest, vec![0, 1]);
        assert_eq!(d.matching, vec![1]);
        assert_eq!((d.m, d.f), (2.0, 3.0));
        assert_eq!(d.unmatched, vec![0]);
        assert_eq!(sum_of_max_incident_weights(&g), 5.0);
    }

    #[test]
    fn decompose_single_edge() {
        let d = match_forest_decompose(&single_edge(3.0));
        assert_eq!(d.matching, vec![0]);
        assert_eq!(d.forest, vec![0]);
        assert_eq!((d.m, d.f), (3.0, 3.0));
        assert_eq!(sum_of_max_incident_weights(&single_edge(3.0)), 6.0);
    }

    #[test]
    fn decompose_uniform_star_breaks_ties_by_index() {
        let g = star(&[1.0; 4]);
        let d = match_forest_decompose(&g);
        // center picks the highest-index edge; each leaf picks its only edge
        assert_eq!(d.matching, vec![3]);
        assert_eq!(d.forest, vec![0, 1, 2, 3]);
        assert_eq!(d.m + d.f, sum_of_max_incident_weights(&g));
    }

    #[test]
    fn isolated_vertices_contribute_nothing() {
        let g = WeightedGraph::new(4, [(0, 1, 2.0)]).unwrap();
        let d = match_forest_decompose(&g);
        assert_eq!(d.m + d.f, 4.0);
        assert_eq!(d.unmatched, vec![2, 3]);
    }

    pub(crate) fn arb_graph(max_n: usize) -> impl Strategy<Value = WeightedGraph> {
        (1..=max_n)
            .prop_flat_map(|n| {
                let pairs: Vec<(usize, usize)> = (0..n)
                    .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
                    .collect();
                let m = pairs.len();
                (
                    Just(n),
                    Just(pairs),
                    proptest::collection::vec(proptest::option::weighted(0.4, 0u32..5), m),
                )
            })
            .prop_map(|(n, pairs, ws)| {
                let edges = pairs
                    .into_iter()
                    .zip(ws)
                    .filter_map(|((a, b), w)| w.map(|w| (a, b, w as f64)));
                WeightedGraph::new(n, edges).unwrap()
            })
    }

    proptest! {
        #[test]
        fn decomposition_invariants(g in arb_graph(14)) {
            let d = match_forest_decompose(&g);
            prop_assert!(is_matching(&g, &d.matching));
            prop_assert!(is_forest(&g, &d.forest));
            prop_assert!(d.matching.iter().all(|k| d.forest.contains(k)));
            prop_assert_eq!(d.m + d.f, sum_of_max_incident_weights(&g));
        }

        #[test]
        fn coloring_is_proper_with_delta_plus_one(g in arb_graph(14)) {
            let c = proper_edge_coloring(&g);
            assert_proper(&g, &c);
        }

        #[test]
        fn tree_coloring_cuts_every_tree_edge(g in arb_graph(12)) {
            if let Ok(t) = spanning_tree(&g) {
                prop_assert_eq!(t.len() + 1, g.n());
                let s = two_color_forest(&g, &t).unwrap();
                prop_assert!(t.iter().all(|&k| s[g.edge(k).u] != s[g.edge(k).v]));
            }
        }

        #[test]
        fn edge_list_round_trip(g in arb_graph(10)) {
            let back = parse_graph(&g.to_edge_list()).unwrap();
            prop_assert_eq!(back.n(), g.n());
            prop_assert_eq!(back.edges(), g.edges());
        }
    }
}
