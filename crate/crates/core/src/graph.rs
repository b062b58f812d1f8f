//! Finite constraint graphs and the structural predicates the other modules query.
//!
//! Vertices are opaque string labels. Internally every vertex is addressed by its
//! position in declaration order, which is also the tie-breaking order used by
//! every deterministic choice in the crate.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Index of a vertex in declaration order.
pub type Vertex = usize;

/// A finite undirected graph without multiple edges. Self-loops are allowed.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    labels: Vec<String>,
    index: HashMap<String, Vertex>,
    adj: Vec<Vec<bool>>,
    neighbors: Vec<Vec<Vertex>>,
    edges: Vec<(Vertex, Vertex)>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges: Vec<String> = self
            .edges
            .iter()
            .map(|&(u, v)| format!("{}-{}", self.labels[u], self.labels[v]))
            .collect();
        f.debug_struct("Graph")
            .field("vertices", &self.labels)
            .field("edges", &edges)
            .finish()
    }
}

impl Graph {
    /// Builds a graph from labels and label pairs.
    ///
    /// Rejects duplicate labels and edges with an unknown endpoint. An edge may not be
    /// listed twice, in either orientation.
    pub fn new<S, E>(vertices: impl IntoIterator<Item = S>, edges: impl IntoIterator<Item = (E, E)>) -> Result<Self>
    where
        S: Into<String>,
        E: AsRef<str>,
    {
        let labels: Vec<String> = vertices.into_iter().map(Into::into).collect();
        let mut index = HashMap::with_capacity(labels.len());
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::invalid(format!("duplicate vertex label {l:?}")));
            }
        }
        let mut pairs = Vec::new();
        for (a, b) in edges {
            let (a, b) = (a.as_ref(), b.as_ref());
            let u = *index
                .get(a)
                .ok_or_else(|| Error::invalid(format!("edge endpoint {a:?} is not a declared vertex")))?;
            let v = *index
                .get(b)
                .ok_or_else(|| Error::invalid(format!("edge endpoint {b:?} is not a declared vertex")))?;
            pairs.push((u, v));
        }
        Self::from_indices(labels, index, pairs)
    }

    /// Builds a graph whose vertices are labelled `0..n` (as strings).
    pub fn from_edge_list(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let labels: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let index = labels.iter().cloned().enumerate().map(|(i, l)| (l, i)).collect();
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::invalid(format!("edge ({u},{v}) out of range for {n} vertices")));
            }
        }
        Self::from_indices(labels, index, edges.to_vec())
    }

    fn from_indices(labels: Vec<String>, index: HashMap<String, Vertex>, pairs: Vec<(Vertex, Vertex)>) -> Result<Self> {
        let n = labels.len();
        let mut adj = vec![vec![false; n]; n];
        let mut edges = Vec::with_capacity(pairs.len());
        for (u, v) in pairs {
            if adj[u][v] {
                return Err(Error::invalid(format!(
                    "duplicate edge {{{}, {}}}",
                    labels[u], labels[v]
                )));
            }
            adj[u][v] = true;
            adj[v][u] = true;
            edges.push((u.min(v), u.max(v)));
        }
        let neighbors = adj
            .iter()
            .map(|row| row.iter().enumerate().filter(|(_, &a)| a).map(|(w, _)| w).collect())
            .collect();
        Ok(Graph {
            labels,
            index,
            adj,
            neighbors,
            edges,
        })
    }

    /// Path `0 - 1 - ... - (n-1)`.
    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::from_edge_list(n, &edges).expect("path is well formed")
    }

    /// Cycle `0 - 1 - ... - (n-1) - 0` for `n >= 3`.
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycles need at least three vertices");
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Self::from_edge_list(n, &edges).expect("cycle is well formed")
    }

    /// Complete graph on vertices labelled `1..=n`.
    pub fn complete(n: usize) -> Self {
        let labels: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                edges.push((labels[i].clone(), labels[j].clone()));
            }
        }
        Self::new(labels.clone(), edges).expect("complete graph is well formed")
    }

    /// Star with centre `z` and leaves `a, b, c, ...`.
    pub fn star(leaves: usize) -> Self {
        assert!(leaves <= 25);
        let mut labels: Vec<String> = (0..leaves).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
        labels.insert(0, "z".to_string());
        let edges: Vec<_> = labels[1..].iter().map(|l| ("z".to_string(), l.clone())).collect();
        Self::new(labels, edges).expect("star is well formed")
    }

    /// A single edge `a - b`.
    pub fn edge() -> Self {
        Self::new(["a", "b"], [("a", "b")]).expect("edge is well formed")
    }

    /// The hard-square constraint graph: `0` carries a loop and `0 - 1`.
    pub fn hard_square() -> Self {
        Self::new(["0", "1"], [("0", "0"), ("0", "1")]).expect("hard square is well formed")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn vertices(&self) -> std::ops::Range<Vertex> {
        0..self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: Vertex) -> &str {
        &self.labels[v]
    }

    pub fn vertex(&self, label: &str) -> Option<Vertex> {
        self.index.get(label).copied()
    }

    /// Looks up a label, failing with an invalid-input error.
    pub fn require(&self, label: &str) -> Result<Vertex> {
        self.vertex(label)
            .ok_or_else(|| Error::invalid(format!("label {label:?} is not a vertex of the graph")))
    }

    #[inline]
    pub fn adjacent(&self, u: Vertex, v: Vertex) -> bool {
        self.adj[u][v]
    }

    /// Neighbours in ascending vertex order; includes `v` itself when it carries a loop.
    #[inline]
    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.neighbors[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.neighbors[v].len()
    }

    pub fn has_loop(&self, v: Vertex) -> bool {
        self.adj[v][v]
    }

    pub fn has_self_loop(&self) -> bool {
        self.vertices().any(|v| self.has_loop(v))
    }

    /// Edges as `(min, max)` index pairs in insertion order.
    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    /// `N(v) ⊆ N(w)`.
    pub fn neighborhood_contained(&self, v: Vertex, w: Vertex) -> bool {
        self.neighbors[v].iter().all(|&u| self.adj[w][u])
    }

    /// Induced subgraph on `keep`, preserving declaration order of the kept vertices.
    pub fn induced(&self, keep: &[Vertex]) -> Graph {
        let mut keep = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let labels: Vec<String> = keep.iter().map(|&v| self.labels[v].clone()).collect();
        let mut pos = vec![usize::MAX; self.len()];
        for (i, &v) in keep.iter().enumerate() {
            pos[v] = i;
        }
        let pairs: Vec<_> = self
            .edges
            .iter()
            .filter(|&&(u, v)| pos[u] != usize::MAX && pos[v] != usize::MAX)
            .map(|&(u, v)| (pos[u], pos[v]))
            .collect();
        let index = labels.iter().cloned().enumerate().map(|(i, l)| (l, i)).collect();
        Self::from_indices(labels, index, pairs).expect("induced subgraph of a valid graph")
    }

    /// Disjoint union; labels of `other` must not collide with ours.
    pub fn disjoint_union(&self, other: &Graph) -> Result<Graph> {
        let labels: Vec<String> = self.labels.iter().chain(other.labels.iter()).cloned().collect();
        let edges: Vec<(String, String)> = self
            .edges
            .iter()
            .map(|&(u, v)| (self.labels[u].clone(), self.labels[v].clone()))
            .chain(other.edges.iter().map(|&(u, v)| (other.labels[u].clone(), other.labels[v].clone())))
            .collect();
        Graph::new(labels, edges)
    }

    /// Copy of the graph with one more edge.
    pub fn with_edge(&self, u: Vertex, v: Vertex) -> Result<Graph> {
        let mut pairs = self.edges.clone();
        pairs.push((u, v));
        Self::from_indices(self.labels.clone(), self.index.clone(), pairs)
    }

    /// Connected components, each listed in ascending order, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<Vertex>> {
        let mut comp = vec![usize::MAX; self.len()];
        let mut out = Vec::new();
        for s in self.vertices() {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![s];
            comp[s] = id;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &w in self.neighbors(u) {
                    if comp[w] == usize::MAX {
                        comp[w] = id;
                        members.push(w);
                        queue.push_back(w);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        !self.is_empty() && self.components().len() == 1
    }

    /// BFS distances from `s`; `None` for unreachable vertices.
    pub fn distances_from(&self, s: Vertex) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.len()];
        dist[s] = Some(0);
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for &w in self.neighbors(u) {
                if dist[w].is_none() {
                    dist[w] = Some(du + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Shortest path from `s` to `t`, choosing the smallest-index predecessor at every level.
    pub fn shortest_path(&self, s: Vertex, t: Vertex) -> Option<Vec<Vertex>> {
        let dist = self.distances_from(t);
        dist[s]?;
        let mut path = vec![s];
        let mut cur = s;
        while cur != t {
            let d = dist[cur].unwrap();
            cur = *self
                .neighbors(cur)
                .iter()
                .find(|&&w| dist[w] == Some(d - 1))
                .expect("BFS layers are consistent");
            path.push(cur);
        }
        Some(path)
    }

    /// Proper 2-colouring, if one exists.
    pub fn two_coloring(&self) -> Option<Vec<u8>> {
        let mut color = vec![u8::MAX; self.len()];
        for s in self.vertices() {
            if color[s] != u8::MAX {
                continue;
            }
            color[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &w in self.neighbors(u) {
                    if color[w] == u8::MAX {
                        color[w] = 1 - color[u];
                        queue.push_back(w);
                    } else if color[w] == color[u] {
                        return None;
                    }
                }
            }
        }
        Some(color)
    }

    /// A 4-cycle `a - b - c - d - a` on distinct vertices, if any.
    pub fn find_four_cycle(&self) -> Option<[Vertex; 4]> {
        let n = self.len();
        for a in 0..n {
            for c in a + 1..n {
                let common: Vec<Vertex> = self
                    .neighbors(a)
                    .iter()
                    .copied()
                    .filter(|&b| b != a && b != c && self.adj[c][b])
                    .collect();
                if common.len() >= 2 {
                    return Some([a, common[0], c, common[1]]);
                }
            }
        }
        None
    }

    /// Loop-free with no `C_4` subgraph.
    pub fn is_four_cycle_free(&self) -> bool {
        !self.has_self_loop() && self.find_four_cycle().is_none()
    }

    /// Three distinct vertices `a ~ b ~ c`, if any.
    pub fn find_three_path(&self) -> Option<[Vertex; 3]> {
        for b in self.vertices() {
            let others: Vec<Vertex> = self.neighbors(b).iter().copied().filter(|&w| w != b).collect();
            if others.len() >= 2 {
                return Some([others[0], b, others[1]]);
            }
        }
        None
    }

    pub(crate) fn ensure_four_cycle_free(&self) -> Result<()> {
        if self.has_self_loop() {
            return Err(Error::UnsupportedGraph("not four-cycle free (self-loop present)".into()));
        }
        if let Some(c) = self.find_four_cycle() {
            return Err(Error::UnsupportedGraph(format!(
                "not four-cycle free (contains {}-{}-{}-{})",
                self.label(c[0]),
                self.label(c[1]),
                self.label(c[2]),
                self.label(c[3])
            )));
        }
        Ok(())
    }

    /// Whether a bijection `f` (by index) maps this graph isomorphically onto `other`.
    pub fn is_isomorphism(&self, other: &Graph, f: &[Vertex]) -> bool {
        if self.len() != other.len() || self.edges.len() != other.edges.len() || f.len() != self.len() {
            return false;
        }
        let image: HashSet<_> = f.iter().collect();
        if image.len() != f.len() {
            return false;
        }
        self.vertices()
            .all(|u| self.vertices().all(|v| self.adj[u][v] == other.adj[f[u]][f[v]]))
    }

    /// Brute-force isomorphism test. Intended for graphs with at most ~8 vertices.
    pub fn is_isomorphic(&self, other: &Graph) -> bool {
        if self.len() != other.len() || self.edges.len() != other.edges.len() {
            return false;
        }
        let mut deg_a: Vec<usize> = self.vertices().map(|v| self.degree(v)).collect();
        let mut deg_b: Vec<usize> = other.vertices().map(|v| other.degree(v)).collect();
        deg_a.sort_unstable();
        deg_b.sort_unstable();
        if deg_a != deg_b {
            return false;
        }
        let n = self.len();
        let mut map = vec![usize::MAX; n];
        let mut used = vec![false; n];
        fn extend(a: &Graph, b: &Graph, i: usize, map: &mut [usize], used: &mut [bool]) -> bool {
            if i == a.len() {
                return true;
            }
            for cand in 0..b.len() {
                if used[cand] || a.degree(i) != b.degree(cand) || a.adj[i][i] != b.adj[cand][cand] {
                    continue;
                }
                if (0..i).all(|j| a.adj[i][j] == b.adj[cand][map[j]]) {
                    map[i] = cand;
                    used[cand] = true;
                    if extend(a, b, i + 1, map, used) {
                        return true;
                    }
                    used[cand] = false;
                }
            }
            false
        }
        extend(self, other, 0, &mut map, &mut used)
    }
}

#[derive(Serialize, Deserialize)]
struct GraphFile {
    vertices: Vec<String>,
    edges: Vec<[String; 2]>,
}

impl Serialize for Graph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GraphFile {
            vertices: self.labels.clone(),
            edges: self
                .edges
                .iter()
                .map(|&(u, v)| [self.labels[u].clone(), self.labels[v].clone()])
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let file = GraphFile::deserialize(d)?;
        Graph::new(file.vertices, file.edges.into_iter().map(|[a, b]| (a, b))).map_err(serde::de::Error::custom)
    }
}

/// Structural summary produced by [`analyze_graph`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphReport {
    pub connected: bool,
    pub components: Vec<Vec<String>>,
    pub bipartite: bool,
    /// Colour (0 or 1) of every vertex in declaration order, present when bipartite.
    pub two_coloring: Option<Vec<u8>>,
    pub has_self_loop: bool,
    pub four_cycle_free: bool,
    /// A 4-cycle `a-b-c-d` when the graph is loop-free but not four-cycle free.
    pub four_cycle: Option<[String; 4]>,
    pub is_tree: bool,
    /// Diameter of each component, in component order.
    pub component_diameters: Vec<usize>,
    /// Diameter of the whole graph; `None` stands for infinity (disconnected graph).
    pub diameter: Option<usize>,
}

pub fn analyze_graph(g: &Graph) -> Result<GraphReport> {
    if g.is_empty() {
        return Err(Error::invalid("graph has no vertices"));
    }
    let comps = g.components();
    let connected = comps.len() == 1;
    let coloring = g.two_coloring();
    let has_self_loop = g.has_self_loop();
    let c4 = g.find_four_cycle();
    let four_cycle_free = !has_self_loop && c4.is_none();
    let is_tree = connected && !has_self_loop && g.edges().len() + 1 == g.len();
    let component_diameters: Vec<usize> = comps
        .iter()
        .map(|c| {
            c.iter()
                .map(|&s| g.distances_from(s).into_iter().flatten().max().unwrap_or(0))
                .max()
                .unwrap_or(0)
        })
        .collect();
    Ok(GraphReport {
        connected,
        components: comps
            .iter()
            .map(|c| c.iter().map(|&v| g.label(v).to_string()).collect())
            .collect(),
        bipartite: coloring.is_some(),
        two_coloring: coloring,
        has_self_loop,
        four_cycle_free,
        four_cycle: c4.map(|c| c.map(|v| g.label(v).to_string())),
        is_tree,
        diameter: if connected { Some(component_diameters[0]) } else { None },
        component_diameters,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c4_brute_force(g: &Graph) -> bool {
        let n = g.len();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let distinct = [a, b, c, d].iter().collect::<HashSet<_>>().len() == 4;
                        if distinct && g.adjacent(a, b) && g.adjacent(b, c) && g.adjacent(c, d) && g.adjacent(d, a) {
                            return true;
                        }
                    }
                }
            }
        }
        false
    }

    #[test]
    fn k4_is_not_four_cycle_free() {
        let r = analyze_graph(&Graph::complete(4)).unwrap();
        assert!(!r.four_cycle_free);
        assert!(r.four_cycle.is_some());
    }

    #[test]
    fn path_report() {
        let g = Graph::new(["a", "b", "c"], [("a", "b"), ("b", "c")]).unwrap();
        let r = analyze_graph(&g).unwrap();
        assert!(r.is_tree && r.bipartite && r.four_cycle_free && r.connected);
        assert_eq!(r.diameter, Some(2));
        let col = r.two_coloring.unwrap();
        assert_ne!(col[0], col[1]);
    }

    #[test]
    fn c5_report() {
        let g = Graph::cycle(5);
        let r = analyze_graph(&g).unwrap();
        assert!(r.connected && !r.bipartite && r.four_cycle_free && !r.is_tree);
        assert!(!c4_brute_force(&g));
        assert_eq!(r.diameter, Some(2));
    }

    #[test]
    fn self_loop_is_never_four_cycle_free() {
        let r = analyze_graph(&Graph::hard_square()).unwrap();
        assert!(r.has_self_loop && !r.four_cycle_free && !r.bipartite);
    }

    #[test]
    fn disconnected_diameter_is_infinite() {
        let g = Graph::edge().disjoint_union(&Graph::path(3)).unwrap();
        let r = analyze_graph(&g).unwrap();
        assert_eq!(r.diameter, None);
        assert_eq!(r.component_diameters, vec![1, 2]);
    }

    #[test]
    fn empty_graph_rejected() {
        let g = Graph::from_edge_list(0, &[]).unwrap();
        assert!(matches!(analyze_graph(&g), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn duplicate_edges_rejected() {
        assert!(Graph::new(["a", "b"], [("a", "b"), ("b", "a")]).is_err());
        assert!(Graph::new(["a"], [("a", "x")]).is_err());
        assert!(Graph::new(["a", "a"], Vec::<(&str, &str)>::new()).is_err());
    }

    #[test]
    fn json_round_trip() {
        let g = Graph::hard_square();
        let s = serde_json::to_string(&g).unwrap();
        assert_eq!(s, r#"{"vertices":["0","1"],"edges":[["0","0"],["0","1"]]}"#);
        let back: Graph = serde_json::from_str(&s).unwrap();
        assert_eq!(back, g);
        assert!(serde_json::from_str::<Graph>(r#"{"vertices":["a","b"],"edges":[["a","b"],["b","a"]]}"#).is_err());
    }

    #[test]
    fn four_cycle_detection_matches_brute_force_on_all_5_vertex_graphs() {
        let pairs: Vec<(usize, usize)> = (0..5).flat_map(|i| (i + 1..5).map(move |j| (i, j))).collect();
        for mask in 0u32..(1 << pairs.len()) {
            let edges: Vec<_> = pairs.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &e)| e).collect();
            let g = Graph::from_edge_list(5, &edges).unwrap();
            assert_eq!(g.is_four_cycle_free(), !c4_brute_force(&g), "{g:?}");
            let r = analyze_graph(&g).unwrap();
            if r.is_tree {
                assert!(r.bipartite && r.four_cycle_free);
            }
            if let Some(col) = r.two_coloring {
                assert!(g.edges().iter().all(|&(u, v)| col[u] != col[v]));
            }
            for (ci, comp) in g.components().iter().enumerate() {
                let mut diam = 0;
                for &s in comp {
                    for &t in comp {
                        diam = diam.max(g.distances_from(s)[t].unwrap());
                    }
                }
                assert_eq!(r.component_diameters[ci], diam);
            }
        }
    }
}
