//! Patterns on finite regions, validity, enumeration and the reflection
//! construction that extends any valid box pattern to a periodic configuration.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::region::{Region, RegionKind, Site};

/// An assignment of graph vertices to every site of a region.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pattern {
    graph: Arc<Graph>,
    region: Arc<Region>,
    cells: Vec<Vertex>,
}

/// An adjacent pair of sites whose symbols are not adjacent in the graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub a: Site,
    pub b: Site,
    pub symbols: [String; 2],
}

impl Pattern {
    pub fn new(graph: Arc<Graph>, region: Arc<Region>, cells: Vec<Vertex>) -> Result<Self> {
        if cells.len() != region.len() {
            return Err(Error::invalid(format!(
                "pattern has {} cells but region has {} sites",
                cells.len(),
                region.len()
            )));
        }
        if let Some(&bad) = cells.iter().find(|&&v| v >= graph.len()) {
            return Err(Error::invalid(format!("vertex index {bad} is not in the graph")));
        }
        Ok(Pattern { graph, region, cells })
    }

    /// Builds a pattern from a function of the site.
    pub fn from_fn(graph: Arc<Graph>, region: Arc<Region>, f: impl Fn(&Site) -> Vertex) -> Result<Self> {
        let cells = region.sites().iter().map(f).collect();
        Self::new(graph, region, cells)
    }

    /// Builds a pattern from labels in canonical site order.
    pub fn from_labels<S: AsRef<str>>(graph: Arc<Graph>, region: Arc<Region>, labels: &[S]) -> Result<Self> {
        let cells = labels.iter().map(|l| graph.require(l.as_ref())).collect::<Result<Vec<_>>>()?;
        Self::new(graph, region, cells)
    }

    pub fn graph(&self) -> &Arc<Graph> {
        &self.graph
    }

    pub fn region(&self) -> &Arc<Region> {
        &self.region
    }

    pub fn cells(&self) -> &[Vertex] {
        &self.cells
    }

    #[inline]
    pub fn get(&self, i: usize) -> Vertex {
        self.cells[i]
    }

    pub fn at(&self, s: &[i64]) -> Option<Vertex> {
        self.region.index_of(s).map(|i| self.cells[i])
    }

    pub fn label_at(&self, i: usize) -> &str {
        self.graph.label(self.cells[i])
    }

    pub fn set(&mut self, i: usize, v: Vertex) {
        assert!(v < self.graph.len());
        self.cells[i] = v;
    }

    /// Set of symbols used, ascending.
    pub fn image(&self) -> Vec<Vertex> {
        let mut seen = vec![false; self.graph.len()];
        for &v in &self.cells {
            seen[v] = true;
        }
        (0..seen.len()).filter(|&v| seen[v]).collect()
    }

    /// Every adjacent pair carrying non-adjacent symbols.
    pub fn violations(&self) -> Vec<Violation> {
        self.region
            .edges()
            .filter(|&(i, j)| !self.graph.adjacent(self.cells[i], self.cells[j]))
            .map(|(i, j)| Violation {
                a: self.region.site(i).clone(),
                b: self.region.site(j).clone(),
                symbols: [self.label_at(i).to_string(), self.label_at(j).to_string()],
            })
            .collect()
    }

    pub fn is_valid(&self) -> bool {
        self.region
            .edges()
            .all(|(i, j)| self.graph.adjacent(self.cells[i], self.cells[j]))
    }

    pub(crate) fn ensure_valid(&self, what: &str) -> Result<()> {
        let v = self.violations();
        if let Some(first) = v.first() {
            return Err(Error::Precondition(format!(
                "{what} is not a valid pattern: {} violation(s), first at {:?}-{:?} ({}, {})",
                v.len(),
                first.a,
                first.b,
                first.symbols[0],
                first.symbols[1]
            )));
        }
        Ok(())
    }

    /// Restriction to a sub-region (every site of `sub` must be in this pattern's region).
    pub fn restrict(&self, sub: Arc<Region>) -> Result<Pattern> {
        let cells = sub
            .sites()
            .iter()
            .map(|s| {
                self.at(s)
                    .ok_or_else(|| Error::invalid(format!("site {s:?} is outside the pattern's region")))
            })
            .collect::<Result<Vec<_>>>()?;
        Pattern::new(self.graph.clone(), sub, cells)
    }

    /// Re-expresses the pattern over a graph containing all of its labels.
    pub fn rebind(&self, graph: Arc<Graph>) -> Result<Pattern> {
        let cells = self
            .cells
            .iter()
            .map(|&v| graph.require(self.graph.label(v)))
            .collect::<Result<Vec<_>>>()?;
        Pattern::new(graph, self.region.clone(), cells)
    }

    /// Sites where two patterns on the same region differ.
    pub fn diff(&self, other: &Pattern) -> Vec<usize> {
        assert_eq!(self.region.len(), other.region.len());
        (0..self.cells.len()).filter(|&i| self.cells[i] != other.cells[i]).collect()
    }

    /// Fixes the sites of the outermost `layers` layers, leaving the rest free.
    pub fn outer_layers(&self, layers: usize) -> PartialPattern {
        let depth = self.region.depths();
        PartialPattern {
            graph: self.graph.clone(),
            region: self.region.clone(),
            cells: self
                .cells
                .iter()
                .zip(&depth)
                .map(|(&v, &d)| (d < layers).then_some(v))
                .collect(),
        }
    }

    pub fn to_partial(&self) -> PartialPattern {
        PartialPattern {
            graph: self.graph.clone(),
            region: self.region.clone(),
            cells: self.cells.iter().map(|&v| Some(v)).collect(),
        }
    }
}

/// A pattern with some sites left unassigned, used for boundary conditions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialPattern {
    graph: Arc<Graph>,
    region: Arc<Region>,
    cells: Vec<Option<Vertex>>,
}

impl PartialPattern {
    pub fn new(graph: Arc<Graph>, region: Arc<Region>, cells: Vec<Option<Vertex>>) -> Result<Self> {
        if cells.len() != region.len() {
            return Err(Error::invalid("partial pattern size does not match its region"));
        }
        if cells.iter().flatten().any(|&v| v >= graph.len()) {
            return Err(Error::invalid("partial pattern uses a vertex outside the graph"));
        }
        Ok(PartialPattern { graph, region, cells })
    }

    /// No site fixed.
    pub fn free(graph: Arc<Graph>, region: Arc<Region>) -> Self {
        let n = region.len();
        PartialPattern {
            graph,
            region,
            cells: vec![None; n],
        }
    }

    pub fn graph(&self) -> &Arc<Graph> {
        &self.graph
    }

    pub fn region(&self) -> &Arc<Region> {
        &self.region
    }

    pub fn cells(&self) -> &[Option<Vertex>] {
        &self.cells
    }

    pub fn get(&self, i: usize) -> Option<Vertex> {
        self.cells[i]
    }

    pub fn free_sites(&self) -> Vec<usize> {
        (0..self.cells.len()).filter(|&i| self.cells[i].is_none()).collect()
    }

    /// Completes the free sites with `values` (in ascending free-site order).
    pub fn complete(&self, values: &[Vertex]) -> Result<Pattern> {
        let mut it = values.iter();
        let cells = self
            .cells
            .iter()
            .map(|c| c.or_else(|| it.next().copied()))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::invalid("too few values to complete the partial pattern"))?;
        Pattern::new(self.graph.clone(), self.region.clone(), cells)
    }
}

/// Every adjacent pair `(i, j)` of `p` with `p_i ≁ p_j`; empty iff `p` is locally valid.
pub fn validate_pattern(p: &Pattern) -> Vec<Violation> {
    p.violations()
}

/// Per-axis reflection of a box coordinate offset into `[0, e)` with period `2(e-1)`.
fn reflect_offset(t: i64, e: usize) -> i64 {
    if e == 1 {
        return 0;
    }
    let period = 2 * (e as i64 - 1);
    let t = t.rem_euclid(period);
    if t < e as i64 {
        t
    } else {
        period - t
    }
}

/// Extends a valid box pattern to a torus by reflecting every axis.
///
/// A box of extent `e` along an axis becomes a torus of extent `2(e-1)` along that
/// axis; for `B_n` this is the `4n`-periodic configuration folded back onto
/// `[-n, n]`. Torus site `t` carries the box cell at offset `reflect(t)`, so the box
/// embeds at torus sites with `t_a < e_a`, and the image is unchanged.
pub fn reflect_periodize(p: &Pattern) -> Result<Pattern> {
    let (origin, extents) = match p.region().kind() {
        RegionKind::Box { origin, extents } => (origin.clone(), extents.clone()),
        _ => return Err(Error::UnsupportedRegion("reflect_periodize needs a box region".into())),
    };
    if extents.iter().any(|&e| e < 2) {
        return Err(Error::UnsupportedRegion(
            "reflect_periodize needs every box extent to be at least 2".into(),
        ));
    }
    p.ensure_valid("input to reflect_periodize")?;
    let torus_ext: Vec<usize> = extents.iter().map(|&e| 2 * (e - 1)).collect();
    let torus = Arc::new(Region::torus(&torus_ext)?);
    Pattern::from_fn(p.graph().clone(), torus, |t| {
        let s: Site = t
            .iter()
            .zip(&extents)
            .zip(&origin)
            .map(|((&c, &e), &o)| o + reflect_offset(c, e))
            .collect();
        p.at(&s).expect("reflected site lies in the box")
    })
}

/// Whether a box pattern extends to a configuration of the whole lattice.
///
/// Validity is decided by building an explicit periodic witness: the reflection
/// torus when every extent is at least 2, otherwise a sheared reflection that
/// borrows an axis of extent at least 2 for the thin axes.
pub fn is_globally_allowed(p: &Pattern) -> Result<bool> {
    let (origin, extents) = match p.region().kind() {
        RegionKind::Box { origin, extents } => (origin.clone(), extents.clone()),
        _ => {
            return Err(Error::UnsupportedRegion(
                "global allowedness is decided for box regions only".into(),
            ))
        }
    };
    if !p.is_valid() {
        return Ok(false);
    }
    if extents.iter().all(|&e| e >= 2) {
        return Ok(reflect_periodize(p)?.is_valid());
    }
    let g = p.graph();
    let Some(wide) = extents.iter().position(|&e| e >= 2) else {
        let v = p.get(0);
        return Ok(g.degree(v) > 0);
    };
    // Witness on a box two sites larger on every side.
    let big_origin: Vec<i64> = origin.iter().map(|o| o - 2).collect();
    let big_ext: Vec<usize> = extents.iter().map(|e| e + 4).collect();
    let witness_region = Arc::new(Region::boxed(big_origin, big_ext)?);
    let witness = Pattern::from_fn(g.clone(), witness_region, |s| {
        let shear: i64 = s
            .iter()
            .zip(&origin)
            .zip(&extents)
            .filter(|(_, &e)| e == 1)
            .map(|((&c, &o), _)| c - o)
            .sum();
        let t: Site = (0..s.len())
            .map(|a| {
                let off = s[a] - origin[a];
                if extents[a] == 1 {
                    origin[a]
                } else if a == wide {
                    origin[a] + reflect_offset(off + shear, extents[a])
                } else {
                    origin[a] + reflect_offset(off, extents[a])
                }
            })
            .collect();
        p.at(&t).expect("witness site maps into the box")
    })?;
    debug_assert!(p
        .region()
        .sites()
        .iter()
        .all(|s| witness.at(s) == p.at(s)));
    Ok(witness.is_valid())
}

/// Streaming enumeration of the valid patterns on a region that agree with a
/// (possibly empty) boundary condition. Free sites are filled in canonical order.
pub struct PatternEnumerator {
    graph: Arc<Graph>,
    region: Arc<Region>,
    cells: Vec<Vertex>,
    free: Vec<usize>,
    /// Candidate symbols per free site after filtering by fixed neighbours.
    domains: Vec<Vec<Vertex>>,
    /// Earlier free neighbours (positions in `free`) per free site.
    back: Vec<Vec<usize>>,
    cursor: Vec<usize>,
    state: EnumState,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum EnumState {
    Fresh,
    Running,
    Done,
}

impl PatternEnumerator {
    pub fn new(graph: Arc<Graph>, region: Arc<Region>, boundary: Option<&PartialPattern>) -> Result<Self> {
        let fixed: Vec<Option<Vertex>> = match boundary {
            Some(b) => {
                if **b.region() != *region {
                    return Err(Error::invalid("boundary pattern lives on a different region"));
                }
                b.cells()
                    .iter()
                    .map(|c| c.map(|v| graph.require(b.graph().label(v))).transpose())
                    .collect::<Result<Vec<_>>>()?
            }
            None => vec![None; region.len()],
        };
        let free: Vec<usize> = (0..region.len()).filter(|&i| fixed[i].is_none()).collect();
        let mut pos = vec![usize::MAX; region.len()];
        for (k, &i) in free.iter().enumerate() {
            pos[i] = k;
        }
        let mut consistent = region
            .edges()
            .filter_map(|(i, j)| Some((fixed[i]?, fixed[j]?)))
            .all(|(a, b)| graph.adjacent(a, b));
        let mut domains = Vec::with_capacity(free.len());
        let mut back = Vec::with_capacity(free.len());
        for (k, &i) in free.iter().enumerate() {
            let fixed_nb: Vec<Vertex> = region.neighbors(i).iter().filter_map(|&j| fixed[j]).collect();
            let dom: Vec<Vertex> = graph
                .vertices()
                .filter(|&v| fixed_nb.iter().all(|&u| graph.adjacent(u, v)))
                .filter(|&v| !region.neighbors(i).contains(&i) || graph.has_loop(v))
                .collect();
            if dom.is_empty() {
                consistent = false;
            }
            domains.push(dom);
            back.push(
                region
                    .neighbors(i)
                    .iter()
                    .filter(|&&j| pos[j] < k)
                    .map(|&j| pos[j])
                    .collect(),
            );
        }
        let cells = fixed.iter().map(|c| c.unwrap_or(0)).collect();
        let n_free = free.len();
        Ok(PatternEnumerator {
            graph,
            region,
            cells,
            free,
            domains,
            back,
            cursor: vec![0; n_free],
            state: if consistent { EnumState::Fresh } else { EnumState::Done },
        })
    }

    pub fn free_sites(&self) -> &[usize] {
        &self.free
    }

    fn fits(&self, k: usize, v: Vertex) -> bool {
        self.back[k]
            .iter()
            .all(|&b| self.graph.adjacent(self.cells[self.free[b]], v))
    }

    /// Advances to the next full assignment; returns false when exhausted.
    fn advance(&mut self) -> bool {
        let n = self.free.len();
        let mut k: usize;
        match self.state {
            EnumState::Done => return false,
            EnumState::Fresh => {
                self.state = EnumState::Running;
                if n == 0 {
                    self.state = EnumState::Done;
                    return true;
                }
                k = 0;
                self.cursor[0] = 0;
            }
            EnumState::Running => {
                k = n - 1;
                self.cursor[k] += 1;
            }
        }
        loop {
            // find a fitting candidate at depth k starting from cursor[k]
            let mut found = false;
            while self.cursor[k] < self.domains[k].len() {
                let v = self.domains[k][self.cursor[k]];
                if self.fits(k, v) {
                    self.cells[self.free[k]] = v;
                    found = true;
                    break;
                }
                self.cursor[k] += 1;
            }
            if found {
                if k + 1 == n {
                    return true;
                }
                k += 1;
                self.cursor[k] = 0;
            } else {
                if k == 0 {
                    self.state = EnumState::Done;
                    return false;
                }
                k -= 1;
                self.cursor[k] += 1;
            }
        }
    }

    /// Values of the free sites in the current assignment (valid after `advance`).
    fn current_free_values(&self) -> Vec<Vertex> {
        self.free.iter().map(|&i| self.cells[i]).collect()
    }

    /// Iterates over the free-site values only; cheaper than materializing patterns.
    pub fn for_each_free(mut self, mut f: impl FnMut(&[Vertex])) {
        while self.advance() {
            let vals = self.current_free_values();
            f(&vals);
        }
    }

    pub fn count(mut self) -> u64 {
        let mut c = 0;
        while self.advance() {
            c += 1;
        }
        c
    }
}

impl Iterator for PatternEnumerator {
    type Item = Pattern;

    fn next(&mut self) -> Option<Pattern> {
        if self.advance() {
            Some(Pattern {
                graph: self.graph.clone(),
                region: self.region.clone(),
                cells: self.cells.clone(),
            })
        } else {
            None
        }
    }
}

/// Valid patterns on `region` agreeing with `boundary`, as a streaming iterator.
pub fn enumerate_patterns(
    graph: &Arc<Graph>,
    region: &Arc<Region>,
    boundary: Option<&PartialPattern>,
) -> Result<PatternEnumerator> {
    PatternEnumerator::new(graph.clone(), region.clone(), boundary)
}

/// Number of valid patterns on `region` agreeing with `boundary`.
pub fn count_patterns(graph: &Arc<Graph>, region: &Arc<Region>, boundary: Option<&PartialPattern>) -> Result<u64> {
    Ok(enumerate_patterns(graph, region, boundary)?.count())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arc<T>(t: T) -> Arc<T> {
        Arc::new(t)
    }

    /// Brute force over all |H|^|region| assignments.
    fn brute_count(g: &Graph, r: &Region) -> u64 {
        let n = r.len();
        let k = g.len();
        let mut cells = vec![0usize; n];
        let mut count = 0;
        loop {
            if r.edges().all(|(i, j)| g.adjacent(cells[i], cells[j])) {
                count += 1;
            }
            let mut a = 0;
            loop {
                if a == n {
                    return count;
                }
                cells[a] += 1;
                if cells[a] < k {
                    break;
                }
                cells[a] = 0;
                a += 1;
            }
        }
    }

    #[test]
    fn checkerboard_is_valid() {
        let g = arc(Graph::edge());
        let r = arc(Region::rect(&[2, 2]));
        let p = Pattern::from_labels(g, r, &["a", "b", "b", "a"]).unwrap();
        assert!(validate_pattern(&p).is_empty());
    }

    #[test]
    fn constant_edge_pattern_has_four_violations() {
        let g = arc(Graph::edge());
        let r = arc(Region::rect(&[2, 2]));
        let p = Pattern::from_labels(g, r, &["a"; 4]).unwrap();
        assert_eq!(validate_pattern(&p).len(), 4);
    }

    #[test]
    fn hard_square_zeros_are_valid() {
        let g = arc(Graph::hard_square());
        let r = arc(Region::rect(&[2, 2]));
        let p = Pattern::from_labels(g, r, &["0"; 4]).unwrap();
        assert!(validate_pattern(&p).is_empty());
    }

    #[test]
    fn unknown_label_rejected() {
        let g = arc(Graph::edge());
        let r = arc(Region::rect(&[1, 2]));
        assert!(matches!(
            Pattern::from_labels(g, r, &["a", "q"]),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn reflect_path_1d() {
        let g = arc(Graph::edge());
        let r = arc(Region::cube(1, 1));
        let p = Pattern::from_labels(g, r, &["a", "b", "a"]).unwrap();
        let t = reflect_periodize(&p).unwrap();
        assert!(t.region().is_torus());
        let labels: Vec<&str> = (0..4).map(|i| t.label_at(i)).collect();
        assert_eq!(labels, ["a", "b", "a", "b"]);
        assert!(t.is_valid());
    }

    #[test]
    fn reflect_k3_2d() {
        let g = arc(Graph::complete(3));
        let r = arc(Region::cube(1, 2));
        let p = Pattern::from_labels(g, r, &["1", "2", "3", "2", "3", "1", "1", "2", "3"]).unwrap();
        assert!(p.is_valid());
        let t = reflect_periodize(&p).unwrap();
        assert_eq!(t.region().len(), 16);
        assert!(validate_pattern(&t).is_empty());
        for (i, s) in p.region().sites().iter().enumerate() {
            let ts: Site = s.iter().map(|c| c + 1).collect();
            assert_eq!(t.at(&ts), Some(p.get(i)));
        }
        assert_eq!(t.image(), p.image());
    }

    #[test]
    fn reflect_rejects_invalid_input() {
        let g = arc(Graph::edge());
        let r = arc(Region::cube(1, 1));
        let p = Pattern::from_labels(g, r, &["a", "a", "b"]).unwrap();
        assert!(matches!(reflect_periodize(&p), Err(Error::Precondition(_))));
    }

    #[test]
    fn globally_allowed_cases() {
        let k3 = arc(Graph::complete(3));
        let r = arc(Region::cube(1, 2));
        let p = Pattern::from_labels(k3.clone(), r.clone(), &["1", "2", "3", "2", "3", "1", "1", "2", "3"]).unwrap();
        assert!(is_globally_allowed(&p).unwrap());
        let q = Pattern::from_labels(k3, r, &["1", "1", "3", "2", "3", "1", "1", "2", "3"]).unwrap();
        assert!(!is_globally_allowed(&q).unwrap());
        let hs = arc(Graph::hard_square());
        let ones = Pattern::from_labels(hs, arc(Region::rect(&[2, 2])), &["1"; 4]).unwrap();
        assert!(!is_globally_allowed(&ones).unwrap());
        let diamond = Pattern::from_fn(arc(Graph::edge()), arc(Region::diamond(1, 2)), |_| 0).unwrap();
        assert!(matches!(is_globally_allowed(&diamond), Err(Error::UnsupportedRegion(_))));
    }

    #[test]
    fn thin_boxes_are_decided() {
        let g = arc(Graph::path(3));
        let row = Pattern::from_labels(g.clone(), arc(Region::rect(&[1, 4])), &["0", "1", "2", "1"]).unwrap();
        assert!(is_globally_allowed(&row).unwrap());
        let single = Pattern::from_labels(g, arc(Region::rect(&[1, 1])), &["2"]).unwrap();
        assert!(is_globally_allowed(&single).unwrap());
        let isolated = arc(Graph::from_edge_list(2, &[(0, 0)]).unwrap());
        let lonely = Pattern::from_labels(isolated, arc(Region::rect(&[1, 1])), &["1"]).unwrap();
        assert!(!is_globally_allowed(&lonely).unwrap());
    }

    #[test]
    fn enumeration_examples() {
        let edge = arc(Graph::edge());
        let pats: Vec<Pattern> = enumerate_patterns(&edge, &arc(Region::rect(&[1, 2])), None).unwrap().collect();
        let words: Vec<String> = pats.iter().map(|p| format!("{}{}", p.label_at(0), p.label_at(1))).collect();
        assert_eq!(words, ["ab", "ba"]);
        let path = arc(Graph::new(["a", "b", "c"], [("a", "b"), ("b", "c")]).unwrap());
        assert_eq!(count_patterns(&path, &arc(Region::rect(&[3, 3])), None).unwrap(), 48);
        let hs = arc(Graph::hard_square());
        assert_eq!(count_patterns(&hs, &arc(Region::rect(&[2, 2])), None).unwrap(), 7);
    }

    #[test]
    fn enumeration_matches_brute_force() {
        let graphs = [Graph::edge(), Graph::path(3), Graph::hard_square(), Graph::complete(3), Graph::cycle(4)];
        let regions = [
            Region::rect(&[2, 3]),
            Region::rect(&[3, 3]),
            Region::diamond(1, 2),
            Region::torus(&[2, 3]).unwrap(),
            Region::torus(&[3, 3]).unwrap(),
            Region::torus(&[1, 2]).unwrap(),
            Region::rect(&[2, 2, 2]),
        ];
        for g in &graphs {
            for r in &regions {
                let ga = arc(g.clone());
                let ra = arc(r.clone());
                let n = count_patterns(&ga, &ra, None).unwrap();
                assert_eq!(n, brute_count(g, r), "{g:?} on {:?}", r.kind());
                for p in enumerate_patterns(&ga, &ra, None).unwrap() {
                    assert!(p.is_valid());
                }
            }
        }
    }

    #[test]
    fn odd_torus_is_empty_for_an_edge() {
        let g = arc(Graph::edge());
        assert_eq!(count_patterns(&g, &arc(Region::torus(&[3, 2]).unwrap()), None).unwrap(), 0);
        assert_eq!(count_patterns(&g, &arc(Region::torus(&[4, 2]).unwrap()), None).unwrap(), 2);
    }

    #[test]
    fn boundary_constrains_enumeration() {
        let g = arc(Graph::edge());
        let r = arc(Region::rect(&[3, 3]));
        let cb = Pattern::from_fn(g.clone(), r.clone(), |s| ((s[0] + s[1]) % 2) as usize).unwrap();
        let boundary = cb.outer_layers(1);
        let all: Vec<Pattern> = enumerate_patterns(&g, &r, Some(&boundary)).unwrap().collect();
        assert_eq!(all, vec![cb.clone()]);
        let other = arc(Region::rect(&[2, 2]));
        assert!(enumerate_patterns(&g, &other, Some(&boundary)).is_err());
    }
}
