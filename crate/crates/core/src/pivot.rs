//! Pivot chains between patterns with a common boundary, and brute-force
//! reconfiguration components for single-site and ball-sized moves.

use std::collections::HashSet;
use std::sync::Arc;

use serde::Serialize;

use crate::cover::{distance_same_base, CoverVertex};
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::height::lift;
use crate::pattern::{PartialPattern, Pattern, PatternEnumerator};
use crate::region::{Region, Site};

/// One pivot: the symbol at `site` changes from `old` to `new`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PivotDelta {
    pub site: Site,
    pub old: String,
    pub new: String,
}

/// A sequence of patterns, each differing from the previous one at exactly one site,
/// stored as the first pattern plus the changes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PivotChain {
    pub initial: Pattern,
    pub deltas: Vec<PivotDelta>,
}

impl PivotChain {
    /// Number of pivots.
    pub fn len(&self) -> usize {
        self.deltas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.deltas.is_empty()
    }

    /// Every pattern of the chain, the initial one included.
    pub fn patterns(&self) -> Result<Vec<Pattern>> {
        let mut cur = self.initial.clone();
        let mut out = vec![cur.clone()];
        let g = self.initial.graph().clone();
        for d in &self.deltas {
            let i = cur
                .region()
                .index_of(&d.site)
                .ok_or_else(|| Error::invalid(format!("delta site {:?} is outside the region", d.site)))?;
            if cur.label_at(i) != d.old {
                return Err(Error::invalid(format!(
                    "delta at {:?} expects {} but finds {}",
                    d.site,
                    d.old,
                    cur.label_at(i)
                )));
            }
            cur.set(i, g.require(&d.new)?);
            out.push(cur.clone());
        }
        Ok(out)
    }

    pub fn last(&self) -> Result<Pattern> {
        Ok(self.patterns()?.pop().unwrap())
    }

    /// Checks the chain invariants: every pattern valid, every step a single-site
    /// change, and the region's boundary layer untouched.
    pub fn verify(&self) -> Result<()> {
        let depth = self.initial.region().depths();
        let pats = self.patterns()?;
        for (k, p) in pats.iter().enumerate() {
            if !p.is_valid() {
                return Err(Error::Precondition(format!("pattern {k} of the chain is invalid")));
            }
        }
        for (k, w) in pats.windows(2).enumerate() {
            let diff = w[0].diff(&w[1]);
            if diff.len() != 1 {
                return Err(Error::Precondition(format!("step {k} changes {} sites", diff.len())));
            }
            if depth[diff[0]] == 0 {
                return Err(Error::Precondition(format!("step {k} changes a boundary site")));
            }
        }
        Ok(())
    }
}

fn replace_toward(cur: &mut CoverVertex, target: &CoverVertex) {
    let one = cur.toward(target);
    *cur = one.toward(target);
}

/// A chain of pivots from `x` to `y`.
///
/// Both patterns are lifted with the same anchor at the first boundary site. While
/// the lifts differ, the side whose disagreement set reaches farther from the anchor
/// value moves its farthest site (smallest site on ties) two steps along the tree
/// geodesic toward the other lift. Each move is a pivot and shortens the summed tree
/// distance by two, so the chain has exactly half that sum as length.
pub fn pivot_chain(x: &Pattern, y: &Pattern) -> Result<PivotChain> {
    x.graph().ensure_four_cycle_free()?;
    if x.graph() != y.graph() {
        return Err(Error::invalid("patterns use different graphs"));
    }
    if x.region() != y.region() {
        return Err(Error::invalid("patterns live on different regions"));
    }
    if !x.region().is_box() {
        return Err(Error::UnsupportedRegion("pivot chains are built on box regions".into()));
    }
    x.ensure_valid("x")?;
    y.ensure_valid("y")?;
    let region = x.region();
    let depth = region.depths();
    if let Some(i) = (0..region.len()).find(|&i| depth[i] < 2 && x.get(i) != y.get(i)) {
        return Err(Error::invalid(format!(
            "x and y differ at {:?}, inside the two outer boundary layers",
            region.site(i)
        )));
    }
    let anchor_site = region.site(0).clone();
    let root = CoverVertex::root(x.get(0));
    let mut xt = lift(x, &anchor_site, root.clone())?.cells().to_vec();
    let mut yt = lift(y, &anchor_site, root.clone())?.cells().to_vec();

    let mut x_steps: Vec<(usize, Vertex, Vertex)> = Vec::new();
    let mut y_steps: Vec<(usize, Vertex, Vertex)> = Vec::new();
    let mut disagree: Vec<usize> = (0..region.len()).filter(|&i| xt[i] != yt[i]).collect();
    while !disagree.is_empty() {
        let far = |t: &[CoverVertex]| {
            disagree
                .iter()
                .map(|&i| (t[i].depth(), std::cmp::Reverse(i)))
                .max()
                .unwrap()
        };
        let (mx, ix) = far(&xt);
        let (my, iy) = far(&yt);
        let (moving, other, steps, i0) = if mx >= my {
            (&mut xt, &yt, &mut x_steps, ix.0)
        } else {
            (&mut yt, &xt, &mut y_steps, iy.0)
        };
        let old = moving[i0].head();
        replace_toward(&mut moving[i0], &other[i0]);
        if let Some(&j) = region
            .neighbors(i0)
            .iter()
            .find(|&&j| distance_same_base(&moving[i0], &moving[j]) != 1)
        {
            return Err(Error::Precondition(format!(
                "pivot at {:?} breaks adjacency with {:?}",
                region.site(i0),
                region.site(j)
            )));
        }
        steps.push((i0, old, moving[i0].head()));
        if xt[i0] == yt[i0] {
            disagree.retain(|&i| i != i0);
        }
    }
    let g = x.graph();
    let delta = |&(i, a, b): &(usize, Vertex, Vertex)| PivotDelta {
        site: region.site(i).clone(),
        old: g.label(a).to_string(),
        new: g.label(b).to_string(),
    };
    let mut deltas: Vec<PivotDelta> = x_steps.iter().map(delta).collect();
    deltas.extend(y_steps.iter().rev().map(|&(i, a, b)| delta(&(i, b, a))));
    Ok(PivotChain {
        initial: x.clone(),
        deltas,
    })
}

/// Summed tree distance between common-anchor lifts; twice the length of the chain
/// [`pivot_chain`] returns.
pub fn lift_distance_sum(x: &Pattern, y: &Pattern) -> Result<usize> {
    let anchor_site = x.region().site(0).clone();
    let root = CoverVertex::root(x.get(0));
    let lx = lift(x, &anchor_site, root.clone())?;
    let ly = lift(y, &anchor_site, root)?;
    Ok((0..x.region().len())
        .map(|i| distance_same_base(lx.get(i), ly.get(i)))
        .sum())
}

/// Connected components of the move graph on the valid completions of a boundary.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReconfigReport {
    pub component_count: usize,
    /// Sizes in descending order.
    pub component_sizes: Vec<usize>,
    pub total: usize,
    pub witness_pair: Option<(Pattern, Pattern)>,
    pub moves_radius: usize,
}

/// All valid completions and their component labels.
#[derive(Debug, Clone)]
pub struct Reconfig {
    boundary: PartialPattern,
    free: Vec<usize>,
    states: Vec<u128>,
    bits: u32,
    component: Vec<usize>,
    moves_radius: usize,
}

/// Default cap on the number of completions explored.
pub const DEFAULT_STATE_LIMIT: usize = 4_000_000;

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, mut a: usize) -> usize {
        while self.0[a] != a {
            self.0[a] = self.0[self.0[a]];
            a = self.0[a];
        }
        a
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Free-site positions moved together by each allowed move.
fn move_masks(region: &Region, free: &[usize], radius: usize) -> Vec<Vec<usize>> {
    let mut pos = vec![usize::MAX; region.len()];
    for (k, &i) in free.iter().enumerate() {
        pos[i] = k;
    }
    if radius <= 1 {
        return (0..free.len()).map(|k| vec![k]).collect();
    }
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut out = Vec::new();
    for c in 0..region.len() {
        let mut dist = vec![usize::MAX; region.len()];
        dist[c] = 0;
        let mut queue = std::collections::VecDeque::from([c]);
        let mut mask = Vec::new();
        while let Some(i) = queue.pop_front() {
            if pos[i] != usize::MAX {
                mask.push(pos[i]);
            }
            if dist[i] == radius {
                continue;
            }
            for &j in region.neighbors(i) {
                if dist[j] == usize::MAX {
                    dist[j] = dist[i] + 1;
                    queue.push_back(j);
                }
            }
        }
        mask.sort_unstable();
        if !mask.is_empty() && seen.insert(mask.clone()) {
            out.push(mask);
        }
    }
    out
}

/// Enumerates the completions of `boundary` and groups them by the moves of the
/// given radius: one site at radius 1, a translate of `D_radius` above that.
pub fn reconfig_components(boundary: &PartialPattern, moves_radius: usize, state_limit: usize) -> Result<Reconfig> {
    let g = boundary.graph().clone();
    let region = boundary.region().clone();
    let en = PatternEnumerator::new(g.clone(), region.clone(), Some(boundary))?;
    let free = en.free_sites().to_vec();
    let bits = usize::BITS - (g.len().max(2) - 1).leading_zeros();
    if free.len() as u32 * bits > 128 {
        return Err(Error::ResourceLimit {
            what: "free sites times bits per symbol".into(),
            limit: 128,
            reached: free.len() * bits as usize,
        });
    }
    let mut states: Vec<u128> = Vec::new();
    let mut overflow = false;
    en.for_each_free(|vals| {
        if states.len() >= state_limit {
            overflow = true;
            return;
        }
        let mut key = 0u128;
        for (k, &v) in vals.iter().enumerate() {
            key |= (v as u128) << (k as u32 * bits);
        }
        states.push(key);
    });
    if overflow {
        return Err(Error::ResourceLimit {
            what: "valid completions".into(),
            limit: state_limit,
            reached: state_limit,
        });
    }
    let mut uf = UnionFind((0..states.len()).collect());
    let mut keyed: Vec<(u128, usize)> = Vec::with_capacity(states.len());
    for mask in move_masks(&region, &free, moves_radius) {
        let mut m = 0u128;
        for &k in &mask {
            m |= ((1u128 << bits) - 1) << (k as u32 * bits);
        }
        keyed.clear();
        keyed.extend(states.iter().enumerate().map(|(i, &s)| (s & !m, i)));
        keyed.sort_unstable();
        for w in keyed.windows(2) {
            if w[0].0 == w[1].0 {
                uf.union(w[0].1, w[1].1);
            }
        }
    }
    let mut label = vec![usize::MAX; states.len()];
    let mut next = 0;
    let component = (0..states.len())
        .map(|i| {
            let r = uf.find(i);
            if label[r] == usize::MAX {
                label[r] = next;
                next += 1;
            }
            label[r]
        })
        .collect();
    Ok(Reconfig {
        boundary: boundary.clone(),
        free,
        states,
        bits,
        component,
        moves_radius,
    })
}

impl Reconfig {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn component_count(&self) -> usize {
        self.component.iter().copied().max().map_or(0, |m| m + 1)
    }

    /// The `i`-th completion in enumeration order.
    pub fn pattern(&self, i: usize) -> Pattern {
        let mask = (1u128 << self.bits) - 1;
        let vals: Vec<Vertex> = (0..self.free.len())
            .map(|k| ((self.states[i] >> (k as u32 * self.bits)) & mask) as Vertex)
            .collect();
        self.boundary.complete(&vals).expect("completion fills every free site")
    }

    pub fn component(&self, i: usize) -> usize {
        self.component[i]
    }

    /// Component of a completion given as a pattern, if it is one of the completions.
    pub fn component_of(&self, p: &Pattern) -> Option<usize> {
        let mut key = 0u128;
        for (k, &i) in self.free.iter().enumerate() {
            key |= (p.get(i) as u128) << (k as u32 * self.bits);
        }
        let fixed_ok = self
            .boundary
            .cells()
            .iter()
            .enumerate()
            .all(|(i, c)| c.is_none_or(|v| v == p.get(i)));
        if !fixed_ok {
            return None;
        }
        self.states.iter().position(|&s| s == key).map(|i| self.component[i])
    }

    pub fn report(&self) -> ReconfigReport {
        let count = self.component_count();
        let mut sizes = vec![0usize; count];
        let mut first = vec![usize::MAX; count];
        for (i, &c) in self.component.iter().enumerate() {
            sizes[c] += 1;
            if first[c] == usize::MAX {
                first[c] = i;
            }
        }
        let witness_pair = (count >= 2).then(|| (self.pattern(first[0]), self.pattern(first[1])));
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        ReconfigReport {
            component_count: count,
            component_sizes: sizes,
            total: self.states.len(),
            witness_pair,
            moves_radius: self.moves_radius,
        }
    }
}

/// Components of the move graph on the completions of `boundary`.
pub fn pivot_components(
    g: &Arc<Graph>,
    region: &Arc<Region>,
    boundary: &PartialPattern,
    moves_radius: usize,
) -> Result<ReconfigReport> {
    let b = if boundary.graph() == g && boundary.region() == region {
        boundary.clone()
    } else {
        return Err(Error::invalid("boundary does not match the graph and region"));
    };
    Ok(reconfig_components(&b, moves_radius, DEFAULT_STATE_LIMIT)?.report())
}

/// True when no site whose lattice neighbours all lie in the region can change its
/// symbol on its own.
pub fn is_frozen_window(p: &Pattern) -> Result<bool> {
    p.ensure_valid("window")?;
    let g = p.graph();
    let region = p.region();
    for i in (0..region.len()).filter(|&i| region.is_interior(i)) {
        let nb = region.neighbors(i);
        let alternative = g
            .vertices()
            .filter(|&v| v != p.get(i))
            .any(|v| nb.iter().all(|&j| g.adjacent(v, p.get(j))));
        if alternative {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arc<T>(t: T) -> Arc<T> {
        Arc::new(t)
    }

    /// The frozen K_5 window: `(i + 2j) mod 5` with the two middle cells swapped or not.
    fn k5_window() -> (Pattern, PartialPattern) {
        let g = arc(Graph::complete(5));
        let r = arc(Region::rect(&[4, 3]));
        let p = Pattern::from_fn(g, r, |s| ((s[0] + 2 * s[1]) % 5) as usize).unwrap();
        let b = p.outer_layers(1);
        (p, b)
    }

    #[test]
    fn k5_obstruction() {
        let (p, b) = k5_window();
        assert!(p.is_valid());
        let rc = reconfig_components(&b, 1, 1000).unwrap();
        assert_eq!(rc.len(), 2);
        assert_eq!(rc.component_count(), 2);
        let swapped = if rc.pattern(0) == p { rc.pattern(1) } else { rc.pattern(0) };
        assert_eq!(p.diff(&swapped).len(), 2);
        assert_ne!(rc.component_of(&p), rc.component_of(&swapped));
        let rep = pivot_components(p.graph(), p.region(), &b, 2).unwrap();
        assert_eq!(rep.component_count, 1);
        assert_eq!(rep.component_sizes, vec![2]);
    }

    #[test]
    fn checkerboard_boundary_is_forced() {
        let g = arc(Graph::edge());
        let r = arc(Region::rect(&[4, 4]));
        let cb = Pattern::from_fn(g.clone(), r.clone(), |s| ((s[0] + s[1]) % 2) as usize).unwrap();
        let rep = pivot_components(&g, &r, &cb.outer_layers(1), 1).unwrap();
        assert_eq!((rep.component_count, rep.total), (1, 1));
        assert!(rep.witness_pair.is_none());
    }

    #[test]
    fn sizes_sum_to_completion_count() {
        let g = arc(Graph::complete(3));
        let r = arc(Region::rect(&[4, 4]));
        let p = Pattern::from_fn(g.clone(), r.clone(), |s| ((s[0] + 2 * s[1]) % 3) as usize).unwrap();
        let b = p.outer_layers(1);
        let rep = pivot_components(&g, &r, &b, 1).unwrap();
        let n = crate::pattern::enumerate_patterns(&g, &r, Some(&b)).unwrap().count();
        assert_eq!(rep.component_sizes.iter().sum::<usize>() as u64, n);
        let free = PartialPattern::free(g.clone(), arc(Region::rect(&[2, 2])));
        let rep = reconfig_components(&free, 1, 10).unwrap_err();
        assert!(rep.is_resource_limit());
    }

    #[test]
    fn trivial_chains() {
        let g = arc(Graph::complete(3));
        let r = arc(Region::rect(&[5, 5]));
        let x = Pattern::from_fn(g.clone(), r.clone(), |s| ((s[0] + s[1]) % 2) as usize).unwrap();
        assert!(pivot_chain(&x, &x).unwrap().is_empty());
        let mut y = x.clone();
        y.set(r.index_of(&[2, 2]).unwrap(), 2);
        let c = pivot_chain(&x, &y).unwrap();
        assert_eq!(c.len(), 1);
        c.verify().unwrap();
        assert_eq!(c.last().unwrap(), y);
    }

    #[test]
    fn chain_between_completions() {
        let g = arc(Graph::complete(3));
        let r = arc(Region::rect(&[6, 6]));
        let base = Pattern::from_fn(g.clone(), r.clone(), |s| ((s[0] + s[1]) % 2) as usize).unwrap();
        let b = base.outer_layers(2);
        let rc = reconfig_components(&b, 1, 100_000).unwrap();
        assert_eq!(rc.component_count(), 1);
        let x = rc.pattern(0);
        let y = rc.pattern(rc.len() - 1);
        let chain = pivot_chain(&x, &y).unwrap();
        chain.verify().unwrap();
        assert_eq!(chain.last().unwrap(), y);
        assert_eq!(2 * chain.len(), lift_distance_sum(&x, &y).unwrap());
        let back = pivot_chain(&y, &x).unwrap();
        assert_eq!(back.len(), chain.len());
    }

    #[test]
    fn chain_refusals() {
        let c4 = arc(Graph::cycle(4));
        let r = arc(Region::rect(&[4, 4]));
        let x = Pattern::from_fn(c4, r, |s| ((s[0] + s[1]) % 2) as usize).unwrap();
        assert!(matches!(pivot_chain(&x, &x), Err(Error::UnsupportedGraph(_))));
        let g = arc(Graph::complete(3));
        let r = arc(Region::rect(&[5, 5]));
        let x = Pattern::from_fn(g.clone(), r.clone(), |s| ((s[0] + 2 * s[1]) % 3) as usize).unwrap();
        let y = Pattern::from_fn(g, r, |s| ((s[0] + 2 * s[1] + 1) % 3) as usize).unwrap();
        assert!(matches!(pivot_chain(&x, &y), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn frozen_windows() {
        let c5 = arc(Graph::cycle(5));
        let st = Pattern::from_fn(c5, arc(Region::rect(&[5, 5])), |s| ((s[0] + s[1]) % 5) as usize).unwrap();
        assert!(is_frozen_window(&st).unwrap());
        let edge = arc(Graph::edge());
        let cb = Pattern::from_fn(edge, arc(Region::rect(&[4, 4])), |s| ((s[0] + s[1]) % 2) as usize).unwrap();
        assert!(is_frozen_window(&cb).unwrap());
        let k3 = arc(Graph::complete(3));
        let p = Pattern::from_fn(k3, arc(Region::rect(&[4, 4])), |s| ((s[0] + s[1]) % 2) as usize).unwrap();
        assert!(!is_frozen_window(&p).unwrap());
    }
}
