//! Finite simple undirected graphs with a canonical edge order.
//!
//! Vertices are dense integers `0..n`. The edge list is kept sorted
//! lexicographically by `(min, max)` endpoint; the position of an edge in
//! that list is its canonical edge index, which every [`crate::gf2::EdgeVector`]
//! refers to.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

/// Errors raised by graph construction and surgery.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("edge #{index} ({u}, {v}) has an endpoint outside 0..{n}")]
    EndpointOutOfRange { index: usize, u: usize, v: usize, n: usize },
    #[error("edge #{index} is a self-loop at vertex {v}")]
    SelfLoop { index: usize, v: usize },
    #[error("edge #{index} ({u}, {v}) duplicates an earlier edge")]
    DuplicateEdge { index: usize, u: usize, v: usize },
    #[error("edge ({0}, {1}) already present")]
    EdgeAlreadyPresent(usize, usize),
    #[error("edge ({0}, {1}) not present")]
    EdgeAbsent(usize, usize),
    #[error("degree undefined on the empty graph")]
    EmptyGraph,
    #[error("connectivity order {0} outside the supported range 1..=4")]
    ConnectivityOrder(usize),
    #[error("graph has {0} vertices, above the isomorphism-search cap of 64")]
    IsomorphismCap(usize),
    #[error("malformed graph text: {0}")]
    Parse(String),
}

/// A finite simple undirected graph.
///
/// Immutable after construction; all operations producing a modified graph
/// return a new value.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

/// A total vertex map between two graphs, stored as `image[v]`.
///
/// Used as an isomorphism or embedding witness, in which case it must be
/// injective.
pub type VertexMap = Vec<usize>;

impl Graph {
    /// Builds a graph from a vertex count and an edge list.
    ///
    /// Endpoints may come in either order; the stored edge list is sorted
    /// into canonical order. Out-of-range endpoints, self-loops and
    /// duplicate edges are rejected with the index of the offending pair.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Graph, GraphError> {
        let mut sorted = Vec::with_capacity(edges.len());
        for (index, &(a, b)) in edges.iter().enumerate() {
            if a >= n || b >= n {
                return Err(GraphError::EndpointOutOfRange { index, u: a, v: b, n });
            }
            if a == b {
                return Err(GraphError::SelfLoop { index, v: a });
            }
            sorted.push((a.min(b), a.max(b)));
        }
        sorted.sort_unstable();
        for (index, w) in sorted.windows(2).enumerate() {
            if w[0] == w[1] {
                return Err(GraphError::DuplicateEdge { index: index + 1, u: w[0].0, v: w[0].1 });
            }
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &sorted {
            adj[u].push(v);
            adj[v].push(u);
        }
        for nb in &mut adj {
            nb.sort_unstable();
        }
        Ok(Graph { n, edges: sorted, adj })
    }

    /// Number of vertices, written f0 in reports.
    pub fn f0(&self) -> usize {
        self.n
    }

    /// Number of edges, written f1 in reports.
    pub fn f1(&self) -> usize {
        self.edges.len()
    }

    /// The canonical sorted edge list.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Neighbors of `v` in increasing order.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    /// Degree of `v`.
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Whether `{u, v}` is an edge.
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edge_index(u, v).is_some()
    }

    /// Canonical index of edge `{u, v}`, if present.
    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        let key = (u.min(v), u.max(v));
        self.edges.binary_search(&key).ok()
    }

    /// Minimum degree. Errors on the empty graph.
    pub fn min_degree(&self) -> Result<usize, GraphError> {
        self.adj.iter().map(Vec::len).min().ok_or(GraphError::EmptyGraph)
    }

    /// Maximum degree. Errors on the empty graph.
    pub fn max_degree(&self) -> Result<usize, GraphError> {
        self.adj.iter().map(Vec::len).max().ok_or(GraphError::EmptyGraph)
    }

    /// Returns the graph with edge `e` added. The edge must be absent.
    pub fn add_edge(&self, e: (usize, usize)) -> Result<Graph, GraphError> {
        if self.has_edge(e.0, e.1) {
            return Err(GraphError::EdgeAlreadyPresent(e.0.min(e.1), e.0.max(e.1)));
        }
        let mut edges = self.edges.clone();
        edges.push(e);
        Graph::new(self.n, &edges)
    }

    /// Returns the graph with edge `e` removed. The edge must be present.
    pub fn delete_edge(&self, e: (usize, usize)) -> Result<Graph, GraphError> {
        let idx = self
            .edge_index(e.0, e.1)
            .ok_or(GraphError::EdgeAbsent(e.0.min(e.1), e.0.max(e.1)))?;
        let mut edges = self.edges.clone();
        edges.remove(idx);
        Graph::new(self.n, &edges)
    }

    /// Deletes the vertices in `s` together with all incident edges.
    ///
    /// The surviving vertices are relabelled to `0..k` preserving their
    /// order; the returned vector lists, for each new index, the old index
    /// it came from.
    pub fn delete_vertices(&self, s: &[usize]) -> (Graph, Vec<usize>) {
        let doomed: BTreeSet<usize> = s.iter().copied().collect();
        let kept: Vec<usize> = (0..self.n).filter(|v| !doomed.contains(v)).collect();
        let mut new_index = vec![usize::MAX; self.n];
        for (i, &v) in kept.iter().enumerate() {
            new_index[v] = i;
        }
        let edges: Vec<(usize, usize)> = self
            .edges
            .iter()
            .filter(|&&(u, v)| !doomed.contains(&u) && !doomed.contains(&v))
            .map(|&(u, v)| (new_index[u], new_index[v]))
            .collect();
        let g = Graph::new(kept.len(), &edges).expect("surgery preserves validity");
        (g, kept)
    }

    /// Number of connected components.
    pub fn component_count(&self) -> usize {
        let mut seen = vec![false; self.n];
        let mut count = 0;
        let mut stack = Vec::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            count += 1;
            seen[start] = true;
            stack.push(start);
            while let Some(v) = stack.pop() {
                for &w in &self.adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
        count
    }

    /// Whether the graph is connected. The empty and one-vertex graphs
    /// count as connected, so that `X - C` is well-defined as connected
    /// when a circuit `C` is spanning.
    pub fn is_connected(&self) -> bool {
        self.component_count() <= 1
    }

    /// Whether the graph is vertex-`k`-connected, for `k` in `1..=4`.
    ///
    /// True iff `f0 > k` and no vertex set of size below `k` disconnects
    /// the graph; checked by exhaustive removal of all such subsets.
    pub fn is_k_connected(&self, k: usize) -> Result<bool, GraphError> {
        if !(1..=4).contains(&k) {
            return Err(GraphError::ConnectivityOrder(k));
        }
        if self.n <= k {
            return Ok(false);
        }
        for size in 0..k {
            let mut subset = Vec::with_capacity(size);
            if !self.no_cut_of_size(size, 0, &mut subset) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn no_cut_of_size(&self, size: usize, from: usize, subset: &mut Vec<usize>) -> bool {
        if subset.len() == size {
            let (rest, _) = self.delete_vertices(subset);
            return rest.f0() == 0 || rest.is_connected();
        }
        for v in from..self.n {
            subset.push(v);
            if !self.no_cut_of_size(size, v + 1, subset) {
                subset.pop();
                return false;
            }
            subset.pop();
        }
        true
    }

    /// Two-colours the graph by BFS.
    ///
    /// Returns the two colour classes with `min(first) < min(second)`
    /// (so vertex 0, when present, is in the first class), or `None` when
    /// an odd cycle exists.
    pub fn bipartition(&self) -> Option<(Vec<usize>, Vec<usize>)> {
        let mut colour = vec![u8::MAX; self.n];
        let mut queue = std::collections::VecDeque::new();
        for start in 0..self.n {
            if colour[start] != u8::MAX {
                continue;
            }
            colour[start] = 0;
            queue.push_back(start);
            while let Some(v) = queue.pop_front() {
                for &w in &self.adj[v] {
                    if colour[w] == u8::MAX {
                        colour[w] = 1 - colour[v];
                        queue.push_back(w);
                    } else if colour[w] == colour[v] {
                        return None;
                    }
                }
            }
        }
        let a: Vec<usize> = (0..self.n).filter(|&v| colour[v] == 0).collect();
        let b: Vec<usize> = (0..self.n).filter(|&v| colour[v] == 1).collect();
        Some((a, b))
    }

    /// Whether the graph is bipartite with equal class sizes.
    pub fn is_square_bipartite(&self) -> bool {
        match self.bipartition() {
            Some((a, b)) => a.len() == b.len(),
            None => false,
        }
    }

    /// Searches for a graph isomorphism onto `h` by backtracking with
    /// degree pruning. Capped at 64 vertices.
    pub fn find_isomorphism(&self, h: &Graph) -> Result<Option<VertexMap>, GraphError> {
        if self.n > 64 {
            return Err(GraphError::IsomorphismCap(self.n));
        }
        if h.n > 64 {
            return Err(GraphError::IsomorphismCap(h.n));
        }
        if self.n != h.n || self.f1() != h.f1() {
            return Ok(None);
        }
        let mut deg_g: Vec<usize> = (0..self.n).map(|v| self.degree(v)).collect();
        let mut deg_h: Vec<usize> = (0..h.n).map(|v| h.degree(v)).collect();
        deg_g.sort_unstable();
        deg_h.sort_unstable();
        if deg_g != deg_h {
            return Ok(None);
        }
        // Map vertices in decreasing-degree order so the most constrained
        // choices come first; ties broken by index for determinism.
        let mut order: Vec<usize> = (0..self.n).collect();
        order.sort_by_key(|&v| (std::cmp::Reverse(self.degree(v)), v));
        let mut image = vec![usize::MAX; self.n];
        let mut used = vec![false; h.n];
        if self.extend_isomorphism(h, &order, 0, &mut image, &mut used) {
            Ok(Some(image))
        } else {
            Ok(None)
        }
    }

    fn extend_isomorphism(
        &self,
        h: &Graph,
        order: &[usize],
        depth: usize,
        image: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        if depth == order.len() {
            return true;
        }
        let v = order[depth];
        'candidates: for w in 0..h.n {
            if used[w] || h.degree(w) != self.degree(v) {
                continue;
            }
            for &u in &order[..depth] {
                if self.has_edge(v, u) != h.has_edge(w, image[u]) {
                    continue 'candidates;
                }
            }
            image[v] = w;
            used[w] = true;
            if self.extend_isomorphism(h, order, depth + 1, image, used) {
                return true;
            }
            image[v] = usize::MAX;
            used[w] = false;
        }
        false
    }

    /// Whether `m` is an automorphism: a bijection on the vertex set
    /// preserving both adjacency and non-adjacency.
    pub fn verify_automorphism(&self, m: &VertexMap) -> bool {
        if m.len() != self.n {
            return false;
        }
        let mut seen = vec![false; self.n];
        for &w in m {
            if w >= self.n || seen[w] {
                return false;
            }
            seen[w] = true;
        }
        for u in 0..self.n {
            for v in (u + 1)..self.n {
                if self.has_edge(u, v) != self.has_edge(m[u], m[v]) {
                    return false;
                }
            }
        }
        true
    }

    /// Serializes to the text graph format: `"n m"` on the first line,
    /// then one `"u v"` line per edge in canonical order.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.edges.len());
        for &(u, v) in &self.edges {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    /// Parses the text graph format. Lines starting with `#` are comments.
    pub fn from_text(text: &str) -> Result<Graph, GraphError> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| GraphError::Parse("missing header line".into()))?;
        let mut parts = header.split_whitespace();
        let n: usize = parts
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| GraphError::Parse("bad vertex count".into()))?;
        let m: usize = parts
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| GraphError::Parse("bad edge count".into()))?;
        let mut edges = Vec::with_capacity(m);
        for line in lines {
            let mut parts = line.split_whitespace();
            let u: usize = parts
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| GraphError::Parse(format!("bad edge line {line:?}")))?;
            let v: usize = parts
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| GraphError::Parse(format!("bad edge line {line:?}")))?;
            edges.push((u, v));
        }
        if edges.len() != m {
            return Err(GraphError::Parse(format!(
                "header promises {m} edges, found {}",
                edges.len()
            )));
        }
        Graph::new(n, &edges)
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

/// Builds the complete graph on `n` vertices.
pub fn complete_graph(n: usize) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            edges.push((u, v));
        }
    }
    Graph::new(n, &edges).expect("complete graph is valid")
}

/// Builds the cycle graph on `n >= 3` vertices.
pub fn cycle_graph(n: usize) -> Graph {
    assert!(n >= 3);
    let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Graph::new(n, &edges).expect("cycle graph is valid")
}

/// Builds the path graph on `n` vertices (`n - 1` edges).
pub fn path_graph(n: usize) -> Graph {
    let edges: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
    Graph::new(n, &edges).expect("path graph is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn new_graph_canonicalizes_and_rejects() {
        let g = Graph::new(3, &[(2, 0), (1, 2), (0, 1)]).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (0, 2), (1, 2)]);
        assert_eq!(g.f0(), 3);
        assert_eq!(g.f1(), 3);

        assert!(matches!(
            Graph::new(3, &[(0, 3)]),
            Err(GraphError::EndpointOutOfRange { .. })
        ));
        assert!(matches!(Graph::new(3, &[(1, 1)]), Err(GraphError::SelfLoop { .. })));
        assert!(matches!(
            Graph::new(3, &[(0, 1), (1, 0)]),
            Err(GraphError::DuplicateEdge { .. })
        ));
    }

    #[test]
    fn empty_graph() {
        let g = Graph::new(0, &[]).unwrap();
        assert_eq!(g.f0(), 0);
        assert_eq!(g.f1(), 0);
        assert!(g.is_connected());
        assert!(g.min_degree().is_err());
    }

    #[test]
    fn degrees() {
        let k4 = complete_graph(4);
        assert_eq!(k4.min_degree().unwrap(), 3);
        assert_eq!(k4.max_degree().unwrap(), 3);
    }

    #[test]
    fn surgery() {
        let tri = complete_graph(3);
        let p2 = tri.delete_edge((0, 2)).unwrap();
        assert_eq!(p2.edges(), &[(0, 1), (1, 2)]);
        assert!(tri.add_edge((0, 1)).is_err());
        assert!(tri.delete_edge((0, 3)).is_err());

        let (rest, kept) = complete_graph(4).delete_vertices(&[1]);
        assert_eq!(rest.f0(), 3);
        assert_eq!(rest.f1(), 3);
        assert_eq!(kept, vec![0, 2, 3]);
    }

    #[test]
    fn connectivity() {
        let p3 = path_graph(3);
        assert!(p3.is_connected());
        assert!(p3.is_k_connected(1).unwrap());
        assert!(!p3.is_k_connected(2).unwrap());
        let k4 = complete_graph(4);
        assert!(k4.is_k_connected(3).unwrap());
        assert!(!k4.is_k_connected(4).unwrap());
        assert!(k4.is_k_connected(5).is_err());
    }

    #[test]
    fn k_connectivity_is_monotone() {
        let g = cycle_graph(6);
        for k in 2..=4 {
            if g.is_k_connected(k).unwrap() {
                assert!(g.is_k_connected(k - 1).unwrap());
            }
        }
    }

    #[test]
    fn bipartition_of_c4() {
        let c4 = cycle_graph(4);
        let (a, b) = c4.bipartition().unwrap();
        assert_eq!(a, vec![0, 2]);
        assert_eq!(b, vec![1, 3]);
        assert!(c4.is_square_bipartite());
        assert!(cycle_graph(5).bipartition().is_none());
    }

    #[test]
    fn isomorphism_witness() {
        let k4 = complete_graph(4);
        let iso = k4.find_isomorphism(&k4).unwrap().unwrap();
        assert!(k4.verify_automorphism(&iso));

        let c6 = cycle_graph(6);
        let p6 = path_graph(6);
        assert!(c6.find_isomorphism(&p6).unwrap().is_none());
    }

    #[test]
    fn automorphism_check() {
        let c4 = cycle_graph(4);
        assert!(c4.verify_automorphism(&vec![0, 1, 2, 3]));
        assert!(c4.verify_automorphism(&vec![1, 2, 3, 0]));
        assert!(!c4.verify_automorphism(&vec![0, 2, 1, 3]));
        assert!(!c4.verify_automorphism(&vec![0, 0, 1, 2]));
    }

    #[test]
    fn text_round_trip() {
        let g = cycle_graph(5);
        let text = g.to_text();
        let back = Graph::from_text(&text).unwrap();
        assert_eq!(g, back);
        assert_eq!(back.to_text(), text);
        let commented = format!("# a five-cycle\n{text}");
        assert_eq!(Graph::from_text(&commented).unwrap(), g);
    }
}
