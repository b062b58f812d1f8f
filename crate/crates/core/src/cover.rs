//! The universal cover of a graph as the tree of reduced non-backtracking walks
//! from a base vertex. The covering map sends a walk to its last vertex.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};

/// A vertex of the universal cover: a non-backtracking walk starting at the base.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoverVertex {
    walk: Vec<Vertex>,
}

impl CoverVertex {
    /// The root `[base]`.
    pub fn root(base: Vertex) -> Self {
        CoverVertex { walk: vec![base] }
    }

    /// Checks that `walk` is a non-empty non-backtracking walk in `g`.
    pub fn new(g: &Graph, walk: Vec<Vertex>) -> Result<Self> {
        if walk.is_empty() {
            return Err(Error::invalid("a cover vertex needs a non-empty walk"));
        }
        if walk.iter().any(|&v| v >= g.len()) {
            return Err(Error::invalid("walk uses a vertex outside the graph"));
        }
        for w in walk.windows(2) {
            if !g.adjacent(w[0], w[1]) {
                return Err(Error::invalid(format!(
                    "walk steps between non-adjacent vertices {} and {}",
                    g.label(w[0]),
                    g.label(w[1])
                )));
            }
        }
        if walk.windows(3).any(|w| w[0] == w[2]) {
            return Err(Error::invalid("walk backtracks"));
        }
        Ok(CoverVertex { walk })
    }

    pub fn from_labels<S: AsRef<str>>(g: &Graph, labels: &[S]) -> Result<Self> {
        let walk = labels.iter().map(|l| g.require(l.as_ref())).collect::<Result<Vec<_>>>()?;
        Self::new(g, walk)
    }

    pub fn base(&self) -> Vertex {
        self.walk[0]
    }

    /// The covering map `π`.
    pub fn head(&self) -> Vertex {
        *self.walk.last().unwrap()
    }

    pub fn walk(&self) -> &[Vertex] {
        &self.walk
    }

    /// Number of edges of the walk, i.e. the distance to the root.
    pub fn depth(&self) -> usize {
        self.walk.len() - 1
    }

    pub fn parent(&self) -> Option<CoverVertex> {
        (self.walk.len() > 1).then(|| CoverVertex {
            walk: self.walk[..self.walk.len() - 1].to_vec(),
        })
    }

    /// The cover neighbour projecting to `u`, where `u` must be adjacent to the head.
    pub fn step(&self, u: Vertex) -> CoverVertex {
        let n = self.walk.len();
        if n >= 2 && self.walk[n - 2] == u {
            CoverVertex {
                walk: self.walk[..n - 1].to_vec(),
            }
        } else {
            let mut walk = self.walk.clone();
            walk.push(u);
            CoverVertex { walk }
        }
    }

    pub fn labels(&self, g: &Graph) -> Vec<String> {
        self.walk.iter().map(|&v| g.label(v).to_string()).collect()
    }

    /// A single string naming the walk, unique among walks of the same graph.
    pub fn key(&self, g: &Graph) -> String {
        serde_json::to_string(&self.labels(g)).expect("labels serialize")
    }

    fn common_prefix(&self, other: &CoverVertex) -> usize {
        self.walk.iter().zip(&other.walk).take_while(|(a, b)| a == b).count()
    }

    /// Vertex after `self` on the geodesic to `target` (`self` itself if equal).
    pub fn toward(&self, target: &CoverVertex) -> CoverVertex {
        let l = self.common_prefix(target);
        if l == self.walk.len() {
            if l == target.walk.len() {
                self.clone()
            } else {
                CoverVertex {
                    walk: target.walk[..l + 1].to_vec(),
                }
            }
        } else {
            self.parent().expect("non-root vertex")
        }
    }

    /// The vertices of the geodesic from `self` to `target`, both ends included.
    pub fn geodesic(&self, target: &CoverVertex) -> Vec<CoverVertex> {
        let mut out = vec![self.clone()];
        while out.last().unwrap() != target {
            let next = out.last().unwrap().toward(target);
            out.push(next);
        }
        out
    }
}

/// Every cover neighbour of `v`: its parent (if any) then its extensions in vertex order.
pub fn cover_neighbors(g: &Graph, v: &CoverVertex) -> Vec<CoverVertex> {
    let mut out = Vec::with_capacity(g.degree(v.head()));
    out.extend(v.parent());
    let back = (v.walk.len() >= 2).then(|| v.walk[v.walk.len() - 2]);
    for &u in g.neighbors(v.head()) {
        if Some(u) != back {
            let mut walk = v.walk.clone();
            walk.push(u);
            out.push(CoverVertex { walk });
        }
    }
    out
}

fn check_walk(g: &Graph, w: &[Vertex]) -> Result<()> {
    if w.is_empty() {
        return Err(Error::invalid("empty walk"));
    }
    if w.iter().any(|&v| v >= g.len()) {
        return Err(Error::invalid("walk uses a vertex outside the graph"));
    }
    if let Some(p) = w.windows(2).find(|p| !g.adjacent(p[0], p[1])) {
        return Err(Error::invalid(format!(
            "walk steps between non-adjacent vertices {} and {}",
            g.label(p[0]),
            g.label(p[1])
        )));
    }
    Ok(())
}

/// Reduction of the walk `w`: backtracking segments are erased.
pub fn reduce(w: &[Vertex]) -> Vec<Vertex> {
    let mut out: Vec<Vertex> = Vec::with_capacity(w.len());
    for &u in w {
        let n = out.len();
        if n >= 2 && out[n - 2] == u {
            out.pop();
        } else {
            out.push(u);
        }
    }
    out
}

/// `[p ⋆ q]`: the reduced concatenation of two walks, `p` ending where `q` starts.
pub fn reduce_concat(g: &Graph, p: &[Vertex], q: &[Vertex]) -> Result<Vec<Vertex>> {
    check_walk(g, p)?;
    check_walk(g, q)?;
    if p.last() != q.first() {
        return Err(Error::invalid(format!(
            "walks do not meet: first ends at {}, second starts at {}",
            g.label(*p.last().unwrap()),
            g.label(q[0])
        )));
    }
    let mut joined = p.to_vec();
    joined.extend_from_slice(&q[1..]);
    Ok(reduce(&joined))
}

/// Tree distance: `|p| + |q| - 2·|common prefix|`, counted in edges.
pub fn cover_distance(p: &CoverVertex, q: &CoverVertex) -> Result<usize> {
    if p.base() != q.base() {
        return Err(Error::invalid("cover vertices have different bases"));
    }
    Ok(distance_same_base(p, q))
}

#[inline]
pub(crate) fn distance_same_base(p: &CoverVertex, q: &CoverVertex) -> usize {
    let l = p.common_prefix(q);
    p.walk.len() + q.walk.len() - 2 * l
}

/// `φ_c(v) = [c ⋆ v]` for a closed walk `c` at the base.
pub fn deck_transform(g: &Graph, c: &[Vertex], v: &CoverVertex) -> Result<CoverVertex> {
    if c.first() != c.last() || c.first() != Some(&v.base()) {
        return Err(Error::invalid("deck transformation needs a closed walk at the base"));
    }
    Ok(CoverVertex {
        walk: reduce_concat(g, c, &v.walk)?,
    })
}

/// The deck transformation sending `from` to `to` (same base and same head):
/// the closed walk `[to ⋆ reverse(from)]`.
pub fn deck_between(g: &Graph, from: &CoverVertex, to: &CoverVertex) -> Result<Vec<Vertex>> {
    if from.head() != to.head() || from.base() != to.base() {
        return Err(Error::invalid("deck transformations preserve base and projection"));
    }
    let rev: Vec<Vertex> = from.walk.iter().rev().copied().collect();
    reduce_concat(g, &to.walk, &rev)
}

/// The universal cover of a graph based at one vertex.
#[derive(Debug, Clone)]
pub struct Cover {
    graph: Arc<Graph>,
    base: Vertex,
}

impl Cover {
    pub fn new(graph: Arc<Graph>, base: Vertex) -> Result<Self> {
        if base >= graph.len() {
            return Err(Error::invalid("cover base is not a vertex of the graph"));
        }
        Ok(Cover { graph, base })
    }

    /// Cover based at the first declared vertex.
    pub fn default_for(graph: Arc<Graph>) -> Result<Self> {
        if graph.is_empty() {
            return Err(Error::invalid("the empty graph has no universal cover"));
        }
        Ok(Cover { graph, base: 0 })
    }

    pub fn graph(&self) -> &Arc<Graph> {
        &self.graph
    }

    pub fn base(&self) -> Vertex {
        self.base
    }

    pub fn root(&self) -> CoverVertex {
        CoverVertex::root(self.base)
    }

    pub fn neighbors(&self, v: &CoverVertex) -> Vec<CoverVertex> {
        cover_neighbors(&self.graph, v)
    }

    /// The cover is finite exactly when the base's component is a tree.
    pub fn is_finite(&self) -> bool {
        let comp = self
            .graph
            .components()
            .into_iter()
            .find(|c| c.contains(&self.base))
            .unwrap();
        let edges = self
            .graph
            .edges()
            .iter()
            .filter(|&&(u, _)| comp.binary_search(&u).is_ok())
            .count();
        !comp.iter().any(|&v| self.graph.has_loop(v)) && edges + 1 == comp.len()
    }

    /// All cover vertices within `radius` of the root, in breadth-first order.
    pub fn ball(&self, radius: usize) -> Vec<CoverVertex> {
        let mut out = vec![self.root()];
        let mut frontier = 0;
        while frontier < out.len() {
            let v = out[frontier].clone();
            frontier += 1;
            if v.depth() == radius {
                continue;
            }
            for u in self.neighbors(&v) {
                if u.depth() > v.depth() {
                    out.push(u);
                }
            }
        }
        out
    }

    /// Every cover vertex when the cover is finite.
    pub fn all_vertices(&self) -> Result<Vec<CoverVertex>> {
        if !self.is_finite() {
            return Err(Error::invalid("the universal cover is infinite"));
        }
        Ok(self.ball(self.graph.len()))
    }
}

/// A finite piece of a universal cover materialized as an ordinary graph: the given
/// cover vertices with cover adjacency. Labels are the walks' JSON label lists.
#[derive(Debug, Clone)]
pub struct CoverPiece {
    pub graph: Arc<Graph>,
    pub vertices: Vec<CoverVertex>,
    index: HashMap<CoverVertex, Vertex>,
}

impl CoverPiece {
    pub fn new(h: &Graph, mut vertices: Vec<CoverVertex>) -> Self {
        vertices.sort_by(|a, b| a.depth().cmp(&b.depth()).then_with(|| a.cmp(b)));
        vertices.dedup();
        let index: HashMap<CoverVertex, Vertex> =
            vertices.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect();
        let labels: Vec<String> = vertices.iter().map(|v| v.key(h)).collect();
        let mut edges = Vec::new();
        for (i, v) in vertices.iter().enumerate() {
            if let Some(p) = v.parent() {
                if let Some(&j) = index.get(&p) {
                    edges.push((labels[j].clone(), labels[i].clone()));
                }
            }
        }
        let graph = Arc::new(Graph::new(labels, edges).expect("cover piece is a simple graph"));
        CoverPiece { graph, vertices, index }
    }

    pub fn index_of(&self, v: &CoverVertex) -> Option<Vertex> {
        self.index.get(v).copied()
    }

    /// Vertices of the smallest subtree containing `of`; requires the piece to be
    /// closed under taking geodesics between the given vertices.
    pub fn spanning_subtree(&self, of: &[Vertex]) -> Vec<Vertex> {
        let mut keep = vec![false; self.vertices.len()];
        if let Some(&first) = of.first() {
            keep[first] = true;
            for &o in of {
                for v in self.vertices[first].geodesic(&self.vertices[o]) {
                    if let Some(i) = self.index_of(&v) {
                        keep[i] = true;
                    }
                }
            }
        }
        (0..keep.len()).filter(|&i| keep[i]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p3() -> Graph {
        Graph::new(["a", "b", "c"], [("a", "b"), ("b", "c")]).unwrap()
    }

    fn cv(g: &Graph, labels: &[&str]) -> CoverVertex {
        CoverVertex::from_labels(g, labels).unwrap()
    }

    #[test]
    fn neighbor_examples() {
        let g = p3();
        let n: Vec<_> = cover_neighbors(&g, &cv(&g, &["a"]));
        assert_eq!(n, vec![cv(&g, &["a", "b"])]);
        let n = cover_neighbors(&g, &cv(&g, &["a", "b"]));
        assert_eq!(n, vec![cv(&g, &["a"]), cv(&g, &["a", "b", "c"])]);
        let c5 = Graph::cycle(5);
        let n = cover_neighbors(&c5, &cv(&c5, &["0", "1"]));
        assert_eq!(n, vec![cv(&c5, &["0"]), cv(&c5, &["0", "1", "2"])]);
    }

    #[test]
    fn rejects_malformed_walks() {
        let g = p3();
        assert!(CoverVertex::from_labels(&g, &["a", "b", "a"]).is_err());
        assert!(CoverVertex::from_labels(&g, &["a", "c"]).is_err());
        assert!(CoverVertex::from_labels(&g, &[] as &[&str]).is_err());
    }

    #[test]
    fn reduction_examples() {
        let g = p3();
        let w = |l: &[&str]| l.iter().map(|x| g.require(x).unwrap()).collect::<Vec<_>>();
        assert_eq!(reduce_concat(&g, &w(&["a", "b"]), &w(&["b", "a"])).unwrap(), w(&["a"]));
        assert_eq!(reduce_concat(&g, &w(&["a", "b", "c"]), &w(&["c", "b"])).unwrap(), w(&["a", "b"]));
        assert!(reduce_concat(&g, &w(&["a", "b"]), &w(&["c", "b"])).is_err());
        let c5 = Graph::cycle(5);
        assert_eq!(reduce_concat(&c5, &[0, 1, 2], &[2, 3, 4]).unwrap(), vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn distance_examples() {
        let g = p3();
        let x = cv(&g, &["a", "b", "c"]);
        assert_eq!(cover_distance(&x, &x).unwrap(), 0);
        assert_eq!(cover_distance(&x, &cv(&g, &["a", "b"])).unwrap(), 1);
        let c5 = Graph::cycle(5);
        assert_eq!(
            cover_distance(&cv(&c5, &["0", "1", "2"]), &cv(&c5, &["0", "4", "3"])).unwrap(),
            4
        );
        assert!(cover_distance(&cv(&g, &["a"]), &cv(&g, &["b"])).is_err());
    }

    #[test]
    fn deck_examples() {
        let c5 = Graph::cycle(5);
        let root = CoverVertex::root(0);
        assert_eq!(deck_transform(&c5, &[0], &root).unwrap(), root);
        let c = [0, 1, 2, 3, 4, 0];
        let moved = deck_transform(&c5, &c, &root).unwrap();
        assert_eq!(moved.walk(), &c);
        let back: Vec<Vertex> = c.iter().rev().copied().collect();
        assert_eq!(deck_transform(&c5, &back, &moved).unwrap(), root);
        assert!(deck_transform(&c5, &[0, 1], &root).is_err());
        assert_eq!(deck_between(&c5, &root, &moved).unwrap(), c.to_vec());
    }

    #[test]
    fn c4_cover_is_a_line() {
        let cover = Cover::new(Arc::new(Graph::cycle(4)), 0).unwrap();
        let ball = cover.ball(10);
        assert_eq!(ball.len(), 21);
        assert!(!cover.is_finite());
        for v in &ball {
            let k = v.depth();
            let dir = if k == 0 { 1 } else { v.walk()[1] };
            let expect = if dir == 1 { k % 4 } else { (4 - k % 4) % 4 };
            assert_eq!(v.head(), expect);
        }
    }

    #[test]
    fn tree_cover_is_the_tree() {
        let g = Graph::star(3);
        let cover = Cover::new(Arc::new(g.clone()), 1).unwrap();
        let all = cover.all_vertices().unwrap();
        assert_eq!(all.len(), 4);
        let piece = CoverPiece::new(&g, all.clone());
        let f: Vec<Vertex> = piece.vertices.iter().map(|v| v.head()).collect();
        assert!(piece.graph.is_isomorphism(&g, &f));
    }

    #[test]
    fn geodesic_and_toward() {
        let c5 = Graph::cycle(5);
        let p = cv(&c5, &["0", "1", "2"]);
        let q = cv(&c5, &["0", "4", "3"]);
        let geo = p.geodesic(&q);
        assert_eq!(geo.len(), 5);
        assert_eq!(geo[2], CoverVertex::root(0));
        for w in geo.windows(2) {
            assert_eq!(cover_distance(&w[0], &w[1]).unwrap(), 1);
        }
    }

    fn random_vertex(g: &Graph, choices: &[usize]) -> CoverVertex {
        let mut v = CoverVertex::root(0);
        for &c in choices {
            let nb = cover_neighbors(g, &v);
            v = nb[c % nb.len()].clone();
        }
        v
    }

    proptest! {
        #[test]
        fn distance_is_a_metric_and_deck_invariant(
            a in proptest::collection::vec(0usize..4, 0..12),
            b in proptest::collection::vec(0usize..4, 0..12),
            c in proptest::collection::vec(0usize..4, 0..12),
            loop_choice in proptest::collection::vec(0usize..4, 0..10),
        ) {
            let g = Graph::new(
                ["0", "1", "2", "3", "4", "5"],
                [("0", "1"), ("1", "2"), ("2", "0"), ("2", "3"), ("3", "4"), ("4", "5"), ("5", "3")],
            ).unwrap();
            let (x, y, z) = (random_vertex(&g, &a), random_vertex(&g, &b), random_vertex(&g, &c));
            let d = |p: &CoverVertex, q: &CoverVertex| cover_distance(p, q).unwrap();
            prop_assert_eq!(d(&x, &y), d(&y, &x));
            prop_assert!(d(&x, &z) <= d(&x, &y) + d(&y, &z));
            prop_assert_eq!(d(&x, &y) == 0, x == y);
            // deck transformation from a closed walk at the base
            let w = random_vertex(&g, &loop_choice);
            let back = g.shortest_path(w.head(), 0).unwrap();
            let closed = reduce_concat(&g, w.walk(), &back).unwrap();
            if closed.first() == closed.last() {
                let fx = deck_transform(&g, &closed, &x).unwrap();
                let fy = deck_transform(&g, &closed, &y).unwrap();
                prop_assert_eq!(d(&fx, &fy), d(&x, &y));
                prop_assert_eq!(fx.head(), x.head());
            }
        }
    }
}
