//! Finite regions of `Z^d`: boxes, `l1` diamonds, tori and arbitrary site sets.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A lattice point of `Z^d`.
pub type Site = Vec<i64>;

pub fn l1_norm(s: &[i64]) -> i64 {
    s.iter().map(|c| c.abs()).sum()
}

pub fn l1_distance(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}

/// Shape of a region, as it appears in pattern files.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum RegionKind {
    Box { origin: Vec<i64>, extents: Vec<usize> },
    Diamond { center: Vec<i64>, radius: usize },
    Torus { extents: Vec<usize> },
    Sites { d: usize, sites: Vec<Site> },
}

/// A finite region with its sites in canonical (lexicographic) order and
/// precomputed nearest-neighbour adjacency.
#[derive(Debug, Clone)]
pub struct Region {
    kind: RegionKind,
    dim: usize,
    sites: Vec<Site>,
    index: HashMap<Site, usize>,
    adjacency: Vec<Vec<usize>>,
}

impl PartialEq for Region {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.sites == other.sites && self.is_torus() == other.is_torus() && self.kind_eq(other)
    }
}

impl Eq for Region {}

impl Region {
    fn kind_eq(&self, other: &Self) -> bool {
        match (&self.kind, &other.kind) {
            (RegionKind::Torus { extents: a }, RegionKind::Torus { extents: b }) => a == b,
            (RegionKind::Torus { .. }, _) | (_, RegionKind::Torus { .. }) => false,
            _ => true,
        }
    }

    pub fn new(kind: RegionKind) -> Result<Self> {
        match &kind {
            RegionKind::Box { origin, extents } => {
                if origin.len() != extents.len() || origin.is_empty() {
                    return Err(Error::invalid("box origin and extents must have the same positive length"));
                }
                if extents.contains(&0) {
                    return Err(Error::invalid("box extents must be positive"));
                }
            }
            RegionKind::Diamond { center, .. } => {
                if center.is_empty() {
                    return Err(Error::invalid("diamond centre must have positive dimension"));
                }
            }
            RegionKind::Torus { extents } => {
                if extents.is_empty() || extents.contains(&0) {
                    return Err(Error::invalid("torus extents must be positive"));
                }
            }
            RegionKind::Sites { d, sites } => {
                if *d == 0 || sites.iter().any(|s| s.len() != *d) {
                    return Err(Error::invalid("all sites must have dimension d >= 1"));
                }
            }
        }
        let dim = match &kind {
            RegionKind::Box { origin, .. } => origin.len(),
            RegionKind::Diamond { center, .. } => center.len(),
            RegionKind::Torus { extents } => extents.len(),
            RegionKind::Sites { d, .. } => *d,
        };
        let mut sites: Vec<Site> = match &kind {
            RegionKind::Box { origin, extents } => box_sites(origin, extents),
            RegionKind::Torus { extents } => box_sites(&vec![0; extents.len()], extents),
            RegionKind::Diamond { center, radius } => {
                let r = *radius as i64;
                let origin: Vec<i64> = center.iter().map(|c| c - r).collect();
                let extents = vec![2 * *radius + 1; center.len()];
                box_sites(&origin, &extents)
                    .into_iter()
                    .filter(|s| l1_distance(s, center) <= r)
                    .collect()
            }
            RegionKind::Sites { sites, .. } => sites.clone(),
        };
        sites.sort();
        sites.dedup();
        let index: HashMap<Site, usize> = sites.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        let adjacency = sites
            .iter()
            .map(|s| {
                let mut nb: Vec<usize> = lattice_neighbors(s)
                    .into_iter()
                    .filter_map(|t| {
                        let t = match &kind {
                            RegionKind::Torus { extents } => wrap(&t, extents),
                            _ => t,
                        };
                        index.get(&t).copied()
                    })
                    .collect();
                nb.sort_unstable();
                nb.dedup();
                nb
            })
            .collect();
        Ok(Region {
            kind,
            dim,
            sites,
            index,
            adjacency,
        })
    }

    /// Box `[origin, origin + extents)`.
    pub fn boxed(origin: Vec<i64>, extents: Vec<usize>) -> Result<Self> {
        Self::new(RegionKind::Box { origin, extents })
    }

    /// The `l∞` ball `B_n = [-n, n]^d`.
    pub fn cube(n: usize, d: usize) -> Self {
        Self::boxed(vec![-(n as i64); d], vec![2 * n + 1; d]).expect("cube is well formed")
    }

    /// Box `[0, extents)`.
    pub fn rect(extents: &[usize]) -> Self {
        Self::boxed(vec![0; extents.len()], extents.to_vec()).expect("rect is well formed")
    }

    /// The `l1` ball `D_n` around the origin.
    pub fn diamond(n: usize, d: usize) -> Self {
        Self::new(RegionKind::Diamond {
            center: vec![0; d],
            radius: n,
        })
        .expect("diamond is well formed")
    }

    pub fn torus(extents: &[usize]) -> Result<Self> {
        Self::new(RegionKind::Torus {
            extents: extents.to_vec(),
        })
    }

    pub fn from_sites(d: usize, sites: Vec<Site>) -> Result<Self> {
        Self::new(RegionKind::Sites { d, sites })
    }

    pub fn kind(&self) -> &RegionKind {
        &self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn sites(&self) -> &[Site] {
        &self.sites
    }

    pub fn site(&self, i: usize) -> &Site {
        &self.sites[i]
    }

    pub fn index_of(&self, s: &[i64]) -> Option<usize> {
        self.index.get(s).copied()
    }

    pub fn contains(&self, s: &[i64]) -> bool {
        self.index.contains_key(s)
    }

    /// Region neighbours of site `i` (torus adjacency wraps).
    #[inline]
    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adjacency[i]
    }

    pub fn is_torus(&self) -> bool {
        matches!(self.kind, RegionKind::Torus { .. })
    }

    pub fn is_box(&self) -> bool {
        matches!(self.kind, RegionKind::Box { .. })
    }

    /// `(origin, extents)` for boxes and tori.
    pub fn box_dims(&self) -> Option<(Vec<i64>, Vec<usize>)> {
        match &self.kind {
            RegionKind::Box { origin, extents } => Some((origin.clone(), extents.clone())),
            RegionKind::Torus { extents } => Some((vec![0; extents.len()], extents.clone())),
            _ => None,
        }
    }

    /// Unordered adjacent pairs `(i, j)` with `i <= j`, each listed once.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(i, nb)| nb.iter().filter(move |&&j| j >= i).map(move |&j| (i, j)))
    }

    /// Sites all of whose `2d` lattice neighbours lie in the region.
    pub fn is_interior(&self, i: usize) -> bool {
        self.is_torus() || lattice_neighbors(&self.sites[i]).iter().all(|t| self.contains(t))
    }

    /// Lattice distance from each site to the complement of the region, minus one:
    /// sites with a neighbour outside have depth 0. Tori have no boundary and get `usize::MAX`.
    pub fn depths(&self) -> Vec<usize> {
        let mut depth = vec![usize::MAX; self.len()];
        if self.is_torus() {
            return depth;
        }
        let mut queue = VecDeque::new();
        for (i, d) in depth.iter_mut().enumerate() {
            if !self.is_interior(i) {
                *d = 0;
                queue.push_back(i);
            }
        }
        while let Some(i) = queue.pop_front() {
            for &j in self.neighbors(i) {
                if depth[j] == usize::MAX {
                    depth[j] = depth[i] + 1;
                    queue.push_back(j);
                }
            }
        }
        depth
    }

    /// Whether the region's adjacency graph is connected.
    pub fn is_connected(&self) -> bool {
        if self.is_empty() {
            return true;
        }
        self.component_of(0, |_| true).len() == self.len()
    }

    /// Sites reachable from `start` through sites satisfying `keep` (`start` must satisfy it).
    pub fn component_of(&self, start: usize, keep: impl Fn(usize) -> bool) -> Vec<usize> {
        let mut seen = vec![false; self.len()];
        seen[start] = true;
        let mut out = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            for &j in self.neighbors(i) {
                if !seen[j] && keep(j) {
                    seen[j] = true;
                    out.push(j);
                    queue.push_back(j);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Whether every site of `D_n` (around the origin) lies in the region.
    pub fn contains_diamond(&self, n: usize) -> bool {
        if self.is_torus() {
            return false;
        }
        Region::diamond(n, self.dim).sites().iter().all(|s| self.contains(s))
    }
}

fn box_sites(origin: &[i64], extents: &[usize]) -> Vec<Site> {
    let total: usize = extents.iter().product();
    let mut out = Vec::with_capacity(total);
    let mut cur: Vec<i64> = origin.to_vec();
    if total == 0 {
        return out;
    }
    loop {
        out.push(cur.clone());
        let mut axis = extents.len();
        loop {
            if axis == 0 {
                return out;
            }
            axis -= 1;
            cur[axis] += 1;
            if cur[axis] < origin[axis] + extents[axis] as i64 {
                break;
            }
            cur[axis] = origin[axis];
        }
    }
}

/// The `2d` nearest neighbours of `s` in `Z^d`.
pub fn lattice_neighbors(s: &[i64]) -> Vec<Site> {
    let mut out = Vec::with_capacity(2 * s.len());
    for a in 0..s.len() {
        for delta in [-1, 1] {
            let mut t = s.to_vec();
            t[a] += delta;
            out.push(t);
        }
    }
    out
}

fn wrap(s: &[i64], extents: &[usize]) -> Site {
    s.iter().zip(extents).map(|(&c, &e)| c.rem_euclid(e as i64)).collect()
}
