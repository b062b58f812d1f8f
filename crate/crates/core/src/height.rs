//! Lifts of patterns to the universal cover, height functions, ranges and slopes of
//! periodic patterns.

use std::collections::VecDeque;
use std::fmt::Write as _;

use rand::Rng;
use serde::Serialize;

use crate::cover::{distance_same_base, CoverPiece, CoverVertex};
use crate::error::{Error, Result};
use crate::pattern::Pattern;
use crate::region::{l1_distance, l1_norm, RegionKind, Site};

/// A pattern together with a lift of every cell to the universal cover.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftPattern {
    pattern: Pattern,
    anchor_site: usize,
    anchor: CoverVertex,
    cells: Vec<CoverVertex>,
}

impl LiftPattern {
    pub fn pattern(&self) -> &Pattern {
        &self.pattern
    }

    /// Canonical index of the anchor site.
    pub fn anchor_site(&self) -> usize {
        self.anchor_site
    }

    pub fn anchor(&self) -> &CoverVertex {
        &self.anchor
    }

    pub fn cells(&self) -> &[CoverVertex] {
        &self.cells
    }

    pub fn get(&self, i: usize) -> &CoverVertex {
        &self.cells[i]
    }

    pub fn at(&self, s: &[i64]) -> Option<&CoverVertex> {
        self.pattern.region().index_of(s).map(|i| &self.cells[i])
    }

    /// `h(i, j)` for canonical site indices.
    pub fn height(&self, i: usize, j: usize) -> usize {
        distance_same_base(&self.cells[i], &self.cells[j])
    }

    /// Diameter of the lifted image of the given sites.
    ///
    /// Two sweeps suffice in a tree: the farthest point from any point is an end of
    /// a diameter.
    pub fn range_of(&self, sites: &[usize]) -> usize {
        let Some(&first) = sites.first() else {
            return 0;
        };
        let far = |from: usize| {
            sites
                .iter()
                .copied()
                .max_by_key(|&j| (self.height(from, j), std::cmp::Reverse(j)))
                .unwrap()
        };
        let a = far(first);
        let b = far(a);
        self.height(a, b)
    }

    /// Range over the sites satisfying `keep`.
    pub fn range_where(&self, keep: impl Fn(&Site) -> bool) -> usize {
        let idx: Vec<usize> = (0..self.cells.len())
            .filter(|&i| keep(self.pattern.region().site(i)))
            .collect();
        self.range_of(&idx)
    }

    /// The distinct lifted values as a finite tree.
    pub fn image_piece(&self) -> CoverPiece {
        CoverPiece::new(self.pattern.graph(), self.cells.clone())
    }
}

fn check_liftable(p: &Pattern) -> Result<()> {
    p.graph().ensure_four_cycle_free()?;
    if p.region().is_torus() {
        return Err(Error::UnsupportedRegion(
            "lifts are computed on finite lattice regions; unroll tori with slope_estimate".into(),
        ));
    }
    if !p.region().is_connected() {
        return Err(Error::invalid("lift needs a connected region"));
    }
    p.ensure_valid("pattern to lift")
}

fn anchor_index(p: &Pattern, anchor_site: &[i64], anchor: &CoverVertex) -> Result<usize> {
    let i = p
        .region()
        .index_of(anchor_site)
        .ok_or_else(|| Error::invalid(format!("anchor site {anchor_site:?} is outside the region")))?;
    if anchor.head() != p.get(i) {
        return Err(Error::invalid(format!(
            "anchor vertex projects to {} but the pattern has {} at {anchor_site:?}",
            p.graph().label(anchor.head()),
            p.label_at(i)
        )));
    }
    if anchor.walk().iter().any(|&v| v >= p.graph().len()) {
        return Err(Error::invalid("anchor walk uses a vertex outside the graph"));
    }
    Ok(i)
}

/// Grows the lift from the anchor. With `pick`, the frontier entry to expand next
/// is `pick(len)`; without it the frontier is first-in first-out.
fn grow(
    p: &Pattern,
    start: usize,
    anchor: CoverVertex,
    mut pick: Option<&mut dyn FnMut(usize) -> usize>,
) -> Result<LiftPattern> {
    let region = p.region();
    let mut cells: Vec<Option<CoverVertex>> = vec![None; region.len()];
    cells[start] = Some(anchor.clone());
    let mut frontier = VecDeque::from([start]);
    while !frontier.is_empty() {
        let i = match pick.as_mut() {
            Some(f) => {
                let k = f(frontier.len());
                frontier.swap_remove_back(k).unwrap()
            }
            None => frontier.pop_front().unwrap(),
        };
        let here = cells[i].clone().unwrap();
        for &j in region.neighbors(i) {
            if cells[j].is_none() {
                cells[j] = Some(here.step(p.get(j)));
                frontier.push_back(j);
            }
        }
    }
    let cells: Vec<CoverVertex> = cells.into_iter().map(|c| c.expect("connected region")).collect();
    if let Some((i, j)) = region.edges().find(|&(i, j)| distance_same_base(&cells[i], &cells[j]) != 1) {
        return Err(Error::UnsupportedGraph(format!(
            "lift is inconsistent between {:?} and {:?}",
            region.site(i),
            region.site(j)
        )));
    }
    Ok(LiftPattern {
        pattern: p.clone(),
        anchor_site: start,
        anchor,
        cells,
    })
}

/// The unique lift of `p` taking the value `anchor` at `anchor_site`, by breadth-first search.
pub fn lift(p: &Pattern, anchor_site: &[i64], anchor: CoverVertex) -> Result<LiftPattern> {
    check_liftable(p)?;
    let i = anchor_index(p, anchor_site, &anchor)?;
    grow(p, i, anchor, None)
}

/// Same lift, built by expanding the frontier in a random order.
pub fn lift_with_order<R: Rng + ?Sized>(
    p: &Pattern,
    anchor_site: &[i64],
    anchor: CoverVertex,
    rng: &mut R,
) -> Result<LiftPattern> {
    check_liftable(p)?;
    let i = anchor_index(p, anchor_site, &anchor)?;
    let mut pick = |len: usize| rng.gen_range(0..len);
    grow(p, i, anchor, Some(&mut pick))
}

/// Lift anchored at the cover root over the symbol at `site`.
pub fn lift_at(p: &Pattern, site: &[i64]) -> Result<LiftPattern> {
    let i = p
        .region()
        .index_of(site)
        .ok_or_else(|| Error::invalid(format!("site {site:?} is outside the region")))?;
    lift(p, site, CoverVertex::root(p.get(i)))
}

/// `h_x(i, j)`: tree distance between the lifted values at `i` and `j`.
pub fn height(p: &Pattern, i: &[i64], j: &[i64]) -> Result<usize> {
    let l = lift_at(p, i)?;
    let jj = p
        .region()
        .index_of(j)
        .ok_or_else(|| Error::invalid(format!("site {j:?} is outside the region")))?;
    Ok(l.height(l.anchor_site(), jj))
}

/// `Range_A(x)`: the largest height between two sites of `a`.
pub fn range(p: &Pattern, a: &[Site]) -> Result<usize> {
    let idx = a
        .iter()
        .map(|s| {
            p.region()
                .index_of(s)
                .ok_or_else(|| Error::invalid(format!("site {s:?} is outside the region")))
        })
        .collect::<Result<Vec<_>>>()?;
    let Some(&first) = idx.first() else {
        return Ok(0);
    };
    let l = lift_at(p, p.region().site(first))?;
    Ok(l.range_of(&idx))
}

/// Height matrix from one site as CSV, for two-dimensional boxes: one line per value
/// of the first coordinate.
pub fn height_csv(l: &LiftPattern, from: &[i64]) -> Result<String> {
    let region = l.pattern().region();
    let RegionKind::Box { origin, extents } = region.kind() else {
        return Err(Error::UnsupportedRegion("height matrices are exported for boxes".into()));
    };
    if extents.len() != 2 {
        return Err(Error::UnsupportedRegion("height matrices are exported for d = 2".into()));
    }
    let f = region
        .index_of(from)
        .ok_or_else(|| Error::invalid(format!("site {from:?} is outside the region")))?;
    let mut out = String::new();
    for a in 0..extents[0] as i64 {
        let row: Vec<String> = (0..extents[1] as i64)
            .map(|b| {
                let i = region.index_of(&[origin[0] + a, origin[1] + b]).unwrap();
                l.height(f, i).to_string()
            })
            .collect();
        writeln!(out, "{}", row.join(",")).unwrap();
    }
    Ok(out)
}

/// Ranges of the lift on the balls `D_m` and spheres `∂D_{m-1}` inside the region, as
/// CSV with header `radius,ball_range,sphere_range`.
pub fn range_table_csv(l: &LiftPattern, max_radius: usize) -> String {
    let mut out = String::from("radius,ball_range,sphere_range\n");
    for m in 0..=max_radius as i64 {
        let ball = l.range_where(|s| l1_norm(s) <= m);
        let sphere = l.range_where(|s| l1_norm(s) == m);
        writeln!(out, "{m},{ball},{sphere}").unwrap();
    }
    out
}

/// Fekete-type bounds on the slope of a periodic pattern in one direction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlopeEstimate {
    pub direction: Vec<i64>,
    pub period: usize,
    /// `h(0, mN·direction)` for `m = 1..=depth`.
    pub heights: Vec<usize>,
    /// `heights[m-1] / (mN)`.
    pub values: Vec<f64>,
    pub upper_bound: f64,
    pub converged: bool,
    pub note: String,
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Slope bounds of the periodic configuration defined by a torus pattern.
///
/// The torus is unrolled along a monotone lattice path from the origin, so the lift
/// is the lift of the periodic configuration on `Z^d`. `N` is the least positive
/// integer with `N·direction` a period of the torus.
pub fn slope_estimate(p: &Pattern, direction: &[i64], depth: usize) -> Result<SlopeEstimate> {
    let RegionKind::Torus { extents } = p.region().kind() else {
        return Err(Error::UnsupportedRegion("slopes are defined for torus patterns".into()));
    };
    if direction.len() != extents.len() {
        return Err(Error::invalid("direction has the wrong dimension"));
    }
    if direction.iter().all(|&c| c == 0) {
        return Err(Error::invalid("direction must be non-zero"));
    }
    if depth == 0 {
        return Err(Error::InvalidParameter("depth must be at least 1".into()));
    }
    p.graph().ensure_four_cycle_free()?;
    p.ensure_valid("periodic pattern")?;
    let period = direction
        .iter()
        .zip(extents)
        .filter(|(&c, _)| c != 0)
        .map(|(&c, &e)| e / gcd(e, c.unsigned_abs() as usize))
        .fold(1, |acc, q| acc / gcd(acc, q) * q);
    let d = extents.len();
    let mut site: Site = vec![0; d];
    let mut cur = CoverVertex::root(p.at(&site).unwrap());
    let mut heights = Vec::with_capacity(depth);
    for _ in 0..depth {
        for _ in 0..period {
            for a in 0..d {
                let sign = direction[a].signum();
                for _ in 0..direction[a].unsigned_abs() {
                    site[a] = (site[a] + sign).rem_euclid(extents[a] as i64);
                    cur = cur.step(p.at(&site).unwrap());
                }
            }
        }
        heights.push(cur.depth());
    }
    let values: Vec<f64> = heights
        .iter()
        .enumerate()
        .map(|(m, &h)| h as f64 / ((m + 1) * period) as f64)
        .collect();
    let upper_bound = values.iter().copied().fold(f64::INFINITY, f64::min);
    let converged = values.windows(2).any(|w| (w[0] - w[1]).abs() < 1e-12);
    let note = if converged {
        "two successive values coincide".to_string()
    } else {
        "no two successive values coincide; the bound may still decrease".to_string()
    };
    Ok(SlopeEstimate {
        direction: direction.to_vec(),
        period,
        heights,
        values,
        upper_bound,
        converged,
        note,
    })
}

/// Whether `h(i, i + k·e_axis) = k` for every pair of sites in the region on a common
/// axis-parallel line: the lift is a geodesic along every such line.
pub fn has_maximal_slope(l: &LiftPattern, axis: usize) -> bool {
    let region = l.pattern().region();
    (0..region.len()).all(|i| {
        (0..region.len()).all(|j| {
            let (a, b) = (region.site(i), region.site(j));
            let same_line = (0..a.len()).all(|c| c == axis || a[c] == b[c]);
            !same_line || l.height(i, j) as i64 == l1_distance(a, b)
        })
    })
}
