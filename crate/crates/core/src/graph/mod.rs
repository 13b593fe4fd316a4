//! Finite simple undirected graphs: ingestion, serialization, connectivity
//! and bipartition.
//!
//! Vertices keep the order in which they first appear in the input. Views
//! that need the odd-block-first ordering build it from a [`Bipartition`]
//! without touching the graph.

mod smith;
mod spectral;
mod star_shape;

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use smith::{
    recognize_ade, smith_classify, DynkinName, SmithClass, SmithTag, DEFAULT_CLASSIFY_TOL,
};
pub use spectral::{
    full_spectrum, index_and_principal, symmetric_eigenvalues, PowerOptions, SpectralResult,
    DEFAULT_JACOBI_TOL, DEFAULT_MAX_ITER, DEFAULT_POWER_TOL, MAX_DENSE_VERTICES,
};
pub use star_shape::{make_star, star_branches, CENTER_LABEL};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GraphError {
    #[error("line {line}: loop at vertex {label:?}")]
    Loop { line: usize, label: String },
    #[error("line {line}: expected `u v`, got {content:?}")]
    Malformed { line: usize, content: String },
    #[error("edge references unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("duplicate vertex {0:?}")]
    DuplicateVertex(String),
    #[error("invalid graph JSON: {0}")]
    Json(String),
    #[error("graph is not bipartite: odd cycle {}", .0.join(" - "))]
    NotBipartite(Vec<String>),
    #[error("bipartition does not match the graph: edge {0:?} - {1:?} joins equal parities")]
    InconsistentBipartition(String, String),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("operation needs at least {0} vertices")]
    TooSmall(usize),
    #[error("graph has {0} vertices; dense routines accept at most {MAX_DENSE_VERTICES}")]
    TooLarge(usize),
    #[error("power iteration did not converge in {iterations} iterations (residual {residual:e})")]
    NotConverged { iterations: usize, residual: f64 },
    #[error("principal eigenvector has a non-positive coordinate at {0:?}")]
    NonPositivePrincipal(String),
    #[error("not star-shaped: {0}")]
    NotStarShaped(String),
    #[error("classifier disagreement: index {index} gives {tag} but structure gives {structure}")]
    ClassifierDisagreement {
        index: f64,
        tag: SmithTag,
        structure: String,
    },
}

/// An undirected graph without loops or multiple edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    neighbors: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct GraphDocument {
    vertices: Vec<String>,
    edges: Vec<[String; 2]>,
}

impl Graph {
    fn empty() -> Self {
        Graph {
            labels: Vec::new(),
            index: HashMap::new(),
            neighbors: Vec::new(),
        }
    }

    fn intern(&mut self, label: &str) -> usize {
        if let Some(&i) = self.index.get(label) {
            return i;
        }
        let i = self.labels.len();
        self.labels.push(label.to_string());
        self.index.insert(label.to_string(), i);
        self.neighbors.push(Vec::new());
        i
    }

    fn connect(&mut self, a: usize, b: usize) {
        if let Err(pos) = self.neighbors[a].binary_search(&b) {
            self.neighbors[a].insert(pos, b);
        }
        if let Err(pos) = self.neighbors[b].binary_search(&a) {
            self.neighbors[b].insert(pos, a);
        }
    }

    /// Builds a graph from an explicit vertex list and label pairs.
    pub fn from_edges<S: AsRef<str>>(vertices: &[S], edges: &[(S, S)]) -> Result<Self, GraphError> {
        let mut g = Graph::empty();
        for v in vertices {
            let v = v.as_ref();
            if g.index.contains_key(v) {
                return Err(GraphError::DuplicateVertex(v.to_string()));
            }
            g.intern(v);
        }
        for (line, (a, b)) in edges.iter().enumerate() {
            let (a, b) = (a.as_ref(), b.as_ref());
            if a == b {
                return Err(GraphError::Loop {
                    line: line + 1,
                    label: a.to_string(),
                });
            }
            let ia = *g
                .index
                .get(a)
                .ok_or_else(|| GraphError::UnknownVertex(a.to_string()))?;
            let ib = *g
                .index
                .get(b)
                .ok_or_else(|| GraphError::UnknownVertex(b.to_string()))?;
            g.connect(ia, ib);
        }
        Ok(g)
    }

    /// Builds a graph on `n` vertices labelled `0..n` from index pairs.
    pub fn from_index_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let labels: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let pairs: Vec<(String, String)> = edges
            .iter()
            .map(|&(a, b)| (a.to_string(), b.to_string()))
            .collect();
        Graph::from_edges(&labels, &pairs)
    }

    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::from_index_edges(n, &edges).expect("valid path")
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "a simple cycle needs three vertices");
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_index_edges(n, &edges).expect("valid cycle")
    }

    pub fn complete(n: usize) -> Self {
        let edges: Vec<_> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .collect();
        Graph::from_index_edges(n, &edges).expect("valid complete graph")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, vertex: usize) -> &str {
        &self.labels[vertex]
    }

    pub fn vertex(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    /// Neighbors of `vertex` in increasing index order.
    pub fn neighbors(&self, vertex: usize) -> &[usize] {
        &self.neighbors[vertex]
    }

    pub fn degree(&self, vertex: usize) -> usize {
        self.neighbors[vertex].len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.neighbors[a].binary_search(&b).is_ok()
    }

    /// Edges as `(i, j)` with `i < j`, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.neighbors
            .iter()
            .enumerate()
            .flat_map(|(i, ns)| ns.iter().filter(move |&&j| j > i).map(move |&j| (i, j)))
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Row-major symmetric 0/1 matrix in vertex order.
    pub fn adjacency_matrix(&self) -> Vec<f64> {
        let n = self.len();
        let mut a = vec![0.0; n * n];
        for (i, j) in self.edges() {
            a[i * n + j] = 1.0;
            a[j * n + i] = 1.0;
        }
        a
    }

    /// Component id per vertex, numbered in order of first vertex.
    pub fn components(&self) -> Vec<usize> {
        let mut comp = vec![usize::MAX; self.len()];
        let mut next = 0;
        for start in 0..self.len() {
            if comp[start] != usize::MAX {
                continue;
            }
            comp[start] = next;
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                for &w in &self.neighbors[u] {
                    if comp[w] == usize::MAX {
                        comp[w] = next;
                        queue.push_back(w);
                    }
                }
            }
            next += 1;
        }
        comp
    }

    pub fn is_connected(&self) -> bool {
        self.components().iter().all(|&c| c == 0)
    }

    pub fn is_tree(&self) -> bool {
        !self.is_empty() && self.edge_count() + 1 == self.len() && self.is_connected()
    }

    /// Edge-list text in an order whose first-appearance order reproduces the
    /// vertex order, so parsing the output gives back an identical graph.
    /// A vertex with no earlier neighbour is introduced by a one-token line.
    pub fn to_edge_list(&self) -> String {
        let n = self.len();
        let mut out = String::new();
        let mut emitted: BTreeSet<(usize, usize)> = BTreeSet::new();
        let mut seen = vec![false; n];
        let line = |out: &mut String, a: usize, b: Option<usize>| {
            out.push_str(&self.labels[a]);
            if let Some(b) = b {
                out.push(' ');
                out.push_str(&self.labels[b]);
            }
            out.push('\n');
        };
        for j in 0..n {
            if seen[j] {
                continue;
            }
            if let Some(&i) = self.neighbors[j].iter().find(|&&i| i < j) {
                line(&mut out, i, Some(j));
                emitted.insert((i, j));
                seen[j] = true;
            } else if j + 1 < n && self.has_edge(j, j + 1) {
                line(&mut out, j, Some(j + 1));
                emitted.insert((j, j + 1));
                seen[j] = true;
                seen[j + 1] = true;
            } else {
                line(&mut out, j, None);
                seen[j] = true;
            }
        }
        for e in self.edges() {
            if !emitted.contains(&e) {
                line(&mut out, e.0, Some(e.1));
            }
        }
        out
    }

    /// `{"vertices": [...], "edges": [[u, v], ...]}` with edges sorted by
    /// vertex index.
    pub fn to_json(&self) -> String {
        let doc = GraphDocument {
            vertices: self.labels.clone(),
            edges: self
                .edges()
                .map(|(i, j)| [self.labels[i].clone(), self.labels[j].clone()])
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("graph documents serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, GraphError> {
        let doc: GraphDocument =
            serde_json::from_str(text).map_err(|e| GraphError::Json(e.to_string()))?;
        let pairs: Vec<(String, String)> = doc.edges.into_iter().map(|[a, b]| (a, b)).collect();
        Graph::from_edges(&doc.vertices, &pairs)
    }
}

/// Parses whitespace-separated `u v` lines; `#` starts a comment line and
/// blank lines are skipped. A line holding a single label declares an
/// isolated vertex.
pub fn parse_graph(text: &str) -> Result<Graph, GraphError> {
    let mut g = Graph::empty();
    for (k, raw) in text.lines().enumerate() {
        let line_no = k + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens.as_slice() {
            [a] => {
                g.intern(a);
            }
            [a, b] => {
                if a == b {
                    return Err(GraphError::Loop {
                        line: line_no,
                        label: a.to_string(),
                    });
                }
                let ia = g.intern(a);
                let ib = g.intern(b);
                g.connect(ia, ib);
            }
            _ => {
                return Err(GraphError::Malformed {
                    line: line_no,
                    content: raw.to_string(),
                })
            }
        }
    }
    Ok(g)
}

/// Parses either format, choosing JSON when the first non-blank character is
/// `{`.
pub fn parse_graph_any(text: &str) -> Result<Graph, GraphError> {
    if text.trim_start().starts_with('{') {
        Graph::from_json(text)
    } else {
        parse_graph(text)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Odd,
    Even,
}

impl Parity {
    pub fn flip(self) -> Self {
        match self {
            Parity::Odd => Parity::Even,
            Parity::Even => Parity::Odd,
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Odd => "odd",
            Parity::Even => "even",
        })
    }
}

/// Two-colouring of a bipartite graph into odd and even vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartition {
    parity: Vec<Parity>,
}

impl Bipartition {
    pub fn from_parities(parity: Vec<Parity>) -> Self {
        Bipartition { parity }
    }

    pub fn parity(&self, vertex: usize) -> Parity {
        self.parity[vertex]
    }

    pub fn parities(&self) -> &[Parity] {
        &self.parity
    }

    pub fn vertices_of(&self, parity: Parity) -> Vec<usize> {
        (0..self.parity.len())
            .filter(|&i| self.parity[i] == parity)
            .collect()
    }

    /// Odd vertices first, then even, each in graph order.
    pub fn block_order(&self) -> Vec<usize> {
        let mut order = self.vertices_of(Parity::Odd);
        order.extend(self.vertices_of(Parity::Even));
        order
    }

    /// The off-diagonal block `B` (odd rows, even columns) of the adjacency
    /// matrix in block order.
    pub fn biadjacency(&self, g: &Graph) -> Vec<Vec<u8>> {
        let odd = self.vertices_of(Parity::Odd);
        let even = self.vertices_of(Parity::Even);
        odd.iter()
            .map(|&i| even.iter().map(|&j| u8::from(g.has_edge(i, j))).collect())
            .collect()
    }

    /// Checks that every edge joins opposite parities.
    pub fn validate(&self, g: &Graph) -> Result<(), GraphError> {
        if self.parity.len() != g.len() {
            return Err(GraphError::InconsistentBipartition(
                String::new(),
                String::new(),
            ));
        }
        for (i, j) in g.edges() {
            if self.parity[i] == self.parity[j] {
                return Err(GraphError::InconsistentBipartition(
                    g.label(i).into(),
                    g.label(j).into(),
                ));
            }
        }
        Ok(())
    }
}

/// Breadth-first two-colouring; the first vertex of every component is odd.
pub fn bipartition(g: &Graph) -> Result<Bipartition, GraphError> {
    let n = g.len();
    let mut parity: Vec<Option<Parity>> = vec![None; n];
    let mut parent = vec![usize::MAX; n];
    for start in 0..n {
        if parity[start].is_some() {
            continue;
        }
        parity[start] = Some(Parity::Odd);
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            let pu = parity[u].expect("queued vertices are coloured");
            for &w in g.neighbors(u) {
                match parity[w] {
                    None => {
                        parity[w] = Some(pu.flip());
                        parent[w] = u;
                        queue.push_back(w);
                    }
                    Some(pw) if pw == pu => {
                        return Err(GraphError::NotBipartite(odd_cycle(g, &parent, u, w)))
                    }
                    Some(_) => {}
                }
            }
        }
    }
    Ok(Bipartition {
        parity: parity
            .into_iter()
            .map(|p| p.expect("all coloured"))
            .collect(),
    })
}

fn odd_cycle(g: &Graph, parent: &[usize], u: usize, w: usize) -> Vec<String> {
    let ancestors = |mut v: usize| {
        let mut chain = vec![v];
        while parent[v] != usize::MAX {
            v = parent[v];
            chain.push(v);
        }
        chain
    };
    let (au, aw) = (ancestors(u), ancestors(w));
    let lca = *au.iter().find(|v| aw.contains(v)).expect("same BFS tree");
    let mut cycle: Vec<usize> = au.iter().take_while(|&&v| v != lca).copied().collect();
    cycle.push(lca);
    let tail: Vec<usize> = aw.iter().take_while(|&&v| v != lca).copied().collect();
    cycle.extend(tail.into_iter().rev());
    cycle.into_iter().map(|v| g.label(v).to_string()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_path() {
        let g = parse_graph("a b\nb c").unwrap();
        assert_eq!(g.labels(), &["a", "b", "c"]);
        assert_eq!(g.edge_count(), 2);
        assert!(g.has_edge(0, 1) && g.has_edge(1, 2) && !g.has_edge(0, 2));
    }

    #[test]
    fn parse_rejects_loops_and_garbage() {
        assert!(matches!(
            parse_graph("a a"),
            Err(GraphError::Loop { line: 1, .. })
        ));
        assert!(matches!(
            parse_graph("a b\n\nx y z"),
            Err(GraphError::Malformed { line: 3, .. })
        ));
    }

    #[test]
    fn duplicate_edges_collapse() {
        let g = parse_graph("# comment\na b\nb a\n  a   b  ").unwrap();
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn adjacency_is_symmetric_with_zero_diagonal() {
        let g = Graph::cycle(5);
        let a = g.adjacency_matrix();
        for i in 0..5 {
            assert_eq!(a[i * 5 + i], 0.0);
            for j in 0..5 {
                assert_eq!(a[i * 5 + j], a[j * 5 + i]);
            }
        }
    }

    #[test]
    fn edge_list_round_trip_is_byte_stable() {
        for text in [
            "a b\nc d\nb c\n",
            "x y\nq\nz x\n",
            "1 2\n3 4\n4 5\n2 5\n1 3\n",
        ] {
            let g = parse_graph(text).unwrap();
            let emitted = g.to_edge_list();
            let back = parse_graph(&emitted).unwrap();
            assert_eq!(back, g, "{text:?}");
            assert_eq!(back.to_edge_list(), emitted);
        }
    }

    #[test]
    fn json_round_trip() {
        let g = parse_graph("a b\nb c\nc a\nd").unwrap();
        let json = g.to_json();
        let back = Graph::from_json(&json).unwrap();
        assert_eq!(back, g);
        assert_eq!(back.to_json(), json);
        assert!(matches!(
            Graph::from_json(r#"{"vertices":["a"],"edges":[["a","b"]]}"#),
            Err(GraphError::UnknownVertex(_))
        ));
        assert!(matches!(Graph::from_json("{"), Err(GraphError::Json(_))));
        assert_eq!(parse_graph_any(&json).unwrap(), g);
    }

    #[test]
    fn bipartition_of_path() {
        let b = bipartition(&Graph::path(3)).unwrap();
        assert_eq!(b.parities(), &[Parity::Odd, Parity::Even, Parity::Odd]);
        assert_eq!(b.block_order(), vec![0, 2, 1]);
        assert_eq!(b.biadjacency(&Graph::path(3)), vec![vec![1], vec![1]]);
    }

    #[test]
    fn triangle_is_not_bipartite() {
        match bipartition(&Graph::cycle(3)) {
            Err(GraphError::NotBipartite(cycle)) => assert_eq!(cycle.len(), 3),
            other => panic!("unexpected {other:?}"),
        }
        match bipartition(&Graph::cycle(7)) {
            Err(GraphError::NotBipartite(cycle)) => assert_eq!(cycle.len(), 7),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn validate_detects_bad_parities() {
        let g = Graph::path(2);
        let bad = Bipartition::from_parities(vec![Parity::Odd, Parity::Odd]);
        assert!(bad.validate(&g).is_err());
        assert!(bipartition(&g).unwrap().validate(&g).is_ok());
    }

    #[test]
    fn connectivity() {
        assert!(Graph::path(4).is_connected());
        assert!(!parse_graph("a b\nc d").unwrap().is_connected());
        assert!(Graph::path(4).is_tree());
        assert!(!Graph::cycle(4).is_tree());
    }
}
