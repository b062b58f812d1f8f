//! Gluing the centre of one pattern into the outside of another.
//!
//! With `r = |H|` and `R = (d+1)n + 3r + k`, the output agrees with `x` on `D_n` and
//! with `y` outside `D_R`, provided the range of `y` on the sphere `∂D_R` is at most
//! `2k`. Three stages build it:
//!
//! 1. Lift `y`, retract the image of `D_{R+1}` onto the smallest subtree holding the
//!    sphere's image, then fold outward from `R`. The sphere of radius
//!    `(d+1)n + 3r + 1` becomes constant in the cover, with projection `v1`.
//! 2. Lift `x` on `B_n`, extend by reflection to the whole window, then fold inward
//!    from `n`. The sphere of radius `(d+1)n` becomes constant, with projection `w1`.
//! 3. Fill the `3r` spheres in between with the vertices of a walk of length `3r + 1`
//!    from `w1` to `v1`.
//!
//! For bipartite `H` the walk exists only when `x_0` and `y_0` lie in the same
//! colour class; otherwise `x` shifted by `e_1` is used (see [`PatchOptions`]).

use std::sync::Arc;

use serde::Serialize;

use crate::cover::{CoverPiece, CoverVertex};
use crate::error::{Error, Result};
use crate::folding::{fold_to_stiff, onion_fix_with, Direction};
use crate::graph::{Graph, Vertex};
use crate::height::lift;
use crate::pattern::Pattern;
use crate::region::{l1_norm, Region, Site};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PatchOptions {
    /// Use `x` shifted by `e_1` when the colour classes of `x_0` and `y_0` differ.
    pub allow_shift: bool,
}

impl Default for PatchOptions {
    fn default() -> Self {
        PatchOptions { allow_shift: true }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PatchResult {
    pub z: Pattern,
    /// Whether the centre is `x` shifted by `e_1`.
    pub shifted: bool,
    pub n: usize,
    pub k: usize,
    /// `(d+1)n`.
    pub inner_radius: usize,
    /// `R = (d+1)n + 3|H| + k`.
    pub outer_radius: usize,
    /// Range of `y` on the sphere of radius `R + 1`.
    pub sphere_range: usize,
    /// Symbols placed on the spheres of radius `(d+1)n ..= (d+1)n + 3|H| + 1`.
    pub ring_walk: Vec<String>,
}

fn sphere_range(y: &Pattern, radius: usize) -> Result<usize> {
    let origin: Site = vec![0; y.region().dim()];
    let l = lift(y, &origin, CoverVertex::root(y.at(&origin).unwrap()))?;
    Ok(l.range_where(|s| l1_norm(s) as usize == radius))
}

fn outer(d: usize, n: usize, r: usize, k: usize) -> usize {
    (d + 1) * n + 3 * r + k
}

/// Smallest `k` meeting the range condition for `y`, among those whose ball
/// `D_{R+1}` fits in `y`'s region.
pub fn minimal_k(y: &Pattern, n: usize) -> Result<usize> {
    let d = y.region().dim();
    let r = y.graph().len();
    let mut best_range = None;
    for k in 0.. {
        let big_r = outer(d, n, r, k);
        if !y.region().contains_diamond(big_r + 1) {
            break;
        }
        let range = sphere_range(y, big_r + 1)?;
        if range <= 2 * k {
            return Ok(k);
        }
        best_range = Some((range, k));
    }
    match best_range {
        Some((range, k)) => Err(Error::RangeTooLarge { range, bound: 2 * k }),
        None => Err(Error::invalid("the region is too small for any k")),
    }
}

/// Glues `x` on `D_n` to `y` outside `D_R`; see the module documentation.
pub fn patch(x: &Pattern, y: &Pattern, n: usize, k: usize) -> Result<PatchResult> {
    patch_with(x, y, n, k, PatchOptions::default())
}

pub fn patch_with(x: &Pattern, y: &Pattern, n: usize, k: usize, opts: PatchOptions) -> Result<PatchResult> {
    let g = x.graph().clone();
    if y.graph() != &g {
        return Err(Error::invalid("x and y use different graphs"));
    }
    if x.region() != y.region() {
        return Err(Error::invalid("x and y live on different regions"));
    }
    let window = x.region().clone();
    if !window.is_box() {
        return Err(Error::UnsupportedRegion("patching works on box windows".into()));
    }
    g.ensure_four_cycle_free()?;
    if !g.is_connected() {
        return Err(Error::UnsupportedGraph("patching needs a connected graph".into()));
    }
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let d = window.dim();
    let r = g.len();
    let big_r = outer(d, n, r, k);
    let inner = (d + 1) * n;
    if !window.contains_diamond(big_r + 1) {
        return Err(Error::invalid(format!(
            "the window must contain D_{} (R = {big_r})",
            big_r + 1
        )));
    }
    x.ensure_valid("x")?;
    y.ensure_valid("y")?;
    let origin: Site = vec![0; d];
    let x0 = x.at(&origin).unwrap();
    let y0 = y.at(&origin).unwrap();

    let shifted = match g.two_coloring() {
        Some(col) if col[x0] != col[y0] => {
            if !opts.allow_shift {
                return Err(Error::Parity(format!(
                    "x_0 = {} and y_0 = {} lie in different colour classes",
                    g.label(x0),
                    g.label(y0)
                )));
            }
            true
        }
        _ => false,
    };

    // Stage 1: outside.
    let ly = lift(y, &origin, CoverVertex::root(y0))?;
    let range = ly.range_where(|s| l1_norm(s) as usize == big_r + 1);
    if range > 2 * k {
        return Err(Error::RangeTooLarge { range, bound: 2 * k });
    }
    let piece = ly.image_piece();
    let norms: Vec<usize> = window.sites().iter().map(|s| l1_norm(s) as usize).collect();
    let mut cells: Vec<Vertex> = ly.cells().iter().map(|c| piece.index_of(c).unwrap()).collect();
    let sphere_vals: Vec<Vertex> = dedup((0..cells.len()).filter(|&i| norms[i] == big_r + 1).map(|i| cells[i]));
    let ball_vals: Vec<Vertex> = dedup((0..cells.len()).filter(|&i| norms[i] <= big_r + 1).map(|i| cells[i]));
    let mut tree = piece.spanning_subtree(&sphere_vals);
    if tree.len() == 1 {
        let extra = piece
            .graph
            .neighbors(tree[0])
            .iter()
            .copied()
            .find(|v| ball_vals.contains(v))
            .expect("the image of a ball has an edge");
        tree.push(extra);
        tree.sort_unstable();
    }
    let retract = retraction(&piece, &ball_vals, &tree);
    for i in 0..cells.len() {
        if norms[i] <= big_r + 1 {
            cells[i] = retract[cells[i]];
        }
    }
    let y_lifted = Pattern::new(piece.graph.clone(), window.clone(), cells)?;
    let seq = fold_to_stiff(&piece.graph.induced(&tree));
    let y_folded = onion_fix_with(&y_lifted, &seq, big_r, Direction::Outward)?;
    let v1_sphere = big_r - k + 1;
    let v1_cover = constant_on_sphere(&y_folded, &norms, v1_sphere, "y")?;
    let v1 = piece.vertices[v1_cover].head();
    let y_prime: Vec<Vertex> = y_folded.cells().iter().map(|&c| piece.vertices[c].head()).collect();

    // Stage 2: centre.
    let ball_n = Arc::new(Region::cube(n, d));
    let offset: i64 = if shifted { 1 } else { 0 };
    let xs = Pattern::from_fn(g.clone(), ball_n, |s| {
        let mut t = s.clone();
        t[0] += offset;
        x.at(&t).expect("the shifted centre lies in the window")
    })?;
    let lx = lift(&xs, &origin, CoverVertex::root(xs.at(&origin).unwrap()))?;
    let xpiece = lx.image_piece();
    let period = 4 * n as i64;
    let reflect = |c: i64| {
        let t = (c + n as i64).rem_euclid(period);
        if t <= 2 * n as i64 {
            t - n as i64
        } else {
            3 * n as i64 - t
        }
    };
    let x_ext = Pattern::from_fn(xpiece.graph.clone(), window.clone(), |s| {
        let t: Site = s.iter().map(|&c| reflect(c)).collect();
        xpiece.index_of(lx.at(&t).unwrap()).unwrap()
    })?;
    let xseq = fold_to_stiff(&xpiece.graph);
    let x_folded = onion_fix_with(&x_ext, &xseq, n, Direction::Inward)?;
    let w1_cover = constant_on_sphere(&x_folded, &norms, inner, "x")?;
    let w1 = xpiece.vertices[w1_cover].head();
    let x_prime: Vec<Vertex> = x_folded.cells().iter().map(|&c| xpiece.vertices[c].head()).collect();

    // Stage 3: the annulus.
    let walk = ring_walk(&g, w1, v1, 3 * r + 1)?;
    let z_cells: Vec<Vertex> = (0..window.len())
        .map(|i| {
            let m = norms[i];
            if m <= inner {
                x_prime[i]
            } else if m > inner + 3 * r {
                y_prime[i]
            } else {
                walk[m - inner]
            }
        })
        .collect();
    let z = Pattern::new(g.clone(), window.clone(), z_cells)?;
    z.ensure_valid("patched pattern")?;
    for (i, s) in window.sites().iter().enumerate() {
        if norms[i] <= n && Some(z.get(i)) != xs.at(s) {
            return Err(Error::Precondition(format!("patched pattern leaves the centre at {s:?}")));
        }
        if norms[i] > big_r && z.get(i) != y.get(i) {
            return Err(Error::Precondition(format!("patched pattern leaves y at {s:?}")));
        }
    }
    Ok(PatchResult {
        z,
        shifted,
        n,
        k,
        inner_radius: inner,
        outer_radius: big_r,
        sphere_range: range,
        ring_walk: walk.iter().map(|&v| g.label(v).to_string()).collect(),
    })
}

fn dedup(it: impl Iterator<Item = Vertex>) -> Vec<Vertex> {
    let mut v: Vec<Vertex> = it.collect();
    v.sort_unstable();
    v.dedup();
    v
}

fn constant_on_sphere(p: &Pattern, norms: &[usize], radius: usize, which: &str) -> Result<Vertex> {
    let vals = dedup((0..norms.len()).filter(|&i| norms[i] == radius).map(|i| p.get(i)));
    match vals.as_slice() {
        [v] => Ok(*v),
        _ => Err(Error::Precondition(format!(
            "folding {which} left {} symbols on the sphere of radius {radius}",
            vals.len()
        ))),
    }
}

/// A retraction of the subtree `within` onto the subtree `onto`: repeatedly fold the
/// leaf outside `onto` whose label is smallest into another neighbour of its parent.
fn retraction(piece: &CoverPiece, within: &[Vertex], onto: &[Vertex]) -> Vec<Vertex> {
    let g = &piece.graph;
    let mut alive = vec![false; g.len()];
    for &v in within.iter().chain(onto) {
        alive[v] = true;
    }
    let mut image: Vec<Vertex> = g.vertices().collect();
    let in_target: Vec<bool> = g.vertices().map(|v| onto.contains(&v)).collect();
    loop {
        let alive_nb = |v: Vertex, alive: &[bool]| -> Vec<Vertex> {
            g.neighbors(v).iter().copied().filter(|&u| alive[u]).collect()
        };
        let leaf = g
            .vertices()
            .filter(|&v| alive[v] && !in_target[v] && alive_nb(v, &alive).len() == 1)
            .min_by(|&a, &b| g.label(a).cmp(g.label(b)));
        let Some(leaf) = leaf else { break };
        let parent = alive_nb(leaf, &alive)[0];
        let to = alive_nb(parent, &alive)
            .into_iter()
            .find(|&u| u != leaf)
            .expect("the target subtree has an edge");
        for im in image.iter_mut() {
            if *im == leaf {
                *im = to;
            }
        }
        alive[leaf] = false;
    }
    image
}

/// A walk of exactly `len` steps from `from` to `to`: a shortest walk of the right
/// parity, padded by stepping back and forth at `to`.
pub fn ring_walk(g: &Graph, from: Vertex, to: Vertex, len: usize) -> Result<Vec<Vertex>> {
    let mut walk = shortest_walk_with_parity(g, from, to, len % 2).ok_or_else(|| {
        Error::Parity(format!(
            "no walk of length {len} from {} to {}",
            g.label(from),
            g.label(to)
        ))
    })?;
    if walk.len() > len + 1 {
        return Err(Error::Precondition(format!(
            "shortest suitable walk has {} steps, more than {len}",
            walk.len() - 1
        )));
    }
    let back = g.neighbors(to).first().copied().ok_or_else(|| {
        Error::UnsupportedGraph(format!("{} has no neighbour", g.label(to)))
    })?;
    while walk.len() < len + 1 {
        walk.push(back);
        walk.push(to);
    }
    Ok(walk)
}

/// Shortest closed walk of odd length at `v`.
pub fn shortest_odd_closed_walk(g: &Graph, v: Vertex) -> Option<Vec<Vertex>> {
    shortest_walk_with_parity(g, v, v, 1)
}

/// Shortest walk from `from` to `to` whose length has the given parity, found by
/// breadth-first search on the bipartite double cover.
pub fn shortest_walk_with_parity(g: &Graph, from: Vertex, to: Vertex, parity: usize) -> Option<Vec<Vertex>> {
    let n = g.len();
    let mut prev: Vec<Option<usize>> = vec![None; 2 * n];
    let start = 2 * from;
    let goal = 2 * to + parity % 2;
    let mut seen = vec![false; 2 * n];
    seen[start] = true;
    let mut queue = std::collections::VecDeque::from([start]);
    while let Some(s) = queue.pop_front() {
        if s == goal {
            break;
        }
        let (u, side) = (s / 2, s % 2);
        for &w in g.neighbors(u) {
            let t = 2 * w + (1 - side);
            if !seen[t] {
                seen[t] = true;
                prev[t] = Some(s);
                queue.push_back(t);
            }
        }
    }
    if !seen[goal] {
        return None;
    }
    let mut out = vec![to];
    let mut s = goal;
    while let Some(p) = prev[s] {
        out.push(p / 2);
        s = p;
    }
    out.reverse();
    Some(out)
}
