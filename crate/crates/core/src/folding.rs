//! Folds, full config-folds, fold sequences and the onion-peeling fixing maps.
//!
//! A vertex `v` folds into `w` when `N(v) ⊆ N(w)`; loops count, so a looped vertex
//! lies in its own neighbourhood. For hom-shifts config-folds are exactly graph folds.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::pattern::Pattern;
use crate::region::l1_norm;

/// Ordered pairs `(v, w)`, `v ≠ w`, with `N(v) ⊆ N(w)`, in declaration order.
pub fn fold_candidates(g: &Graph) -> Vec<(Vertex, Vertex)> {
    let mut out = Vec::new();
    for v in g.vertices() {
        for w in g.vertices() {
            if v != w && g.neighborhood_contained(v, w) {
                out.push((v, w));
            }
        }
    }
    out
}

/// Same as [`fold_candidates`] with labels.
pub fn fold_candidate_labels(g: &Graph) -> Vec<(String, String)> {
    fold_candidates(g)
        .into_iter()
        .map(|(v, w)| (g.label(v).to_string(), g.label(w).to_string()))
        .collect()
}

pub fn is_stiff(g: &Graph) -> bool {
    fold_candidates(g).is_empty()
}

/// One full config-fold: a maximal set of symbols folded disjointly.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldStep {
    pub removed: Vec<String>,
    pub target: BTreeMap<String, String>,
    pub remaining: Graph,
}

impl FoldStep {
    /// The step as a self-map of `g`'s vertices; symbols it does not remove are fixed.
    pub fn map_on(&self, g: &Graph) -> Result<Vec<Vertex>> {
        let mut f: Vec<Vertex> = g.vertices().collect();
        for (from, to) in &self.target {
            if let Some(v) = g.vertex(from) {
                f[v] = g.require(to)?;
            }
        }
        Ok(f)
    }
}

/// The canonical full config-fold of `g`.
///
/// `M` is the set of vertices that fold only into vertices folding back into them;
/// its fold-equivalence classes keep their earliest member. Every vertex outside
/// `M`, and every other class member, is removed and sent to the earliest kept
/// vertex whose neighbourhood contains its own.
pub fn full_config_fold(g: &Graph) -> Result<FoldStep> {
    let n = g.len();
    let folds = |v: Vertex, w: Vertex| v != w && g.neighborhood_contained(v, w);
    if !g.vertices().any(|v| g.vertices().any(|w| folds(v, w))) {
        return Err(Error::NothingToFold);
    }
    let in_m: Vec<bool> = g
        .vertices()
        .map(|v| g.vertices().all(|w| !folds(v, w) || folds(w, v)))
        .collect();
    let mut kept = vec![false; n];
    let mut target: Vec<Option<Vertex>> = vec![None; n];
    for v in g.vertices().filter(|&v| in_m[v]) {
        match (0..v).find(|&u| in_m[u] && kept[u] && folds(v, u)) {
            Some(rep) => target[v] = Some(rep),
            None => kept[v] = true,
        }
    }
    for v in g.vertices().filter(|&v| !in_m[v]) {
        let w = g
            .vertices()
            .find(|&w| kept[w] && folds(v, w))
            .ok_or_else(|| Error::Precondition(format!("no kept fold target for {:?}", g.label(v))))?;
        target[v] = Some(w);
    }
    let removed: Vec<Vertex> = g.vertices().filter(|&v| !kept[v]).collect();
    let keep: Vec<Vertex> = g.vertices().filter(|&v| kept[v]).collect();
    Ok(FoldStep {
        removed: removed.iter().map(|&v| g.label(v).to_string()).collect(),
        target: removed
            .iter()
            .map(|&v| (g.label(v).to_string(), g.label(target[v].unwrap()).to_string()))
            .collect(),
        remaining: g.induced(&keep),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StiffClass {
    Edge,
    LoopedVertex,
    Other,
}

/// The record of full config-folds from a graph down to a stiff graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldSequence {
    pub steps: Vec<FoldStep>,
    pub stiff: Graph,
    pub fold_radius: usize,
    pub classification: StiffClass,
}

impl FoldSequence {
    /// Composite map from `g`'s vertices to the stiff graph's symbols (as `g` vertices).
    pub fn retraction_on(&self, g: &Graph) -> Result<Vec<Vertex>> {
        let mut f: Vec<Vertex> = g.vertices().collect();
        for step in &self.steps {
            let m = step.map_on(g)?;
            for v in f.iter_mut() {
                *v = m[*v];
            }
        }
        Ok(f)
    }

    /// Human-readable trace, one line per step.
    pub fn trace(&self) -> String {
        let mut s = String::new();
        for (i, step) in self.steps.iter().enumerate() {
            let moves: Vec<String> = step.target.iter().map(|(a, b)| format!("{a}->{b}")).collect();
            s.push_str(&format!(
                "step {}: fold {} ; {} vertices remain\n",
                i + 1,
                moves.join(", "),
                step.remaining.len()
            ));
        }
        let edges: Vec<String> = self
            .stiff
            .edges()
            .iter()
            .map(|&(u, v)| format!("{}-{}", self.stiff.label(u), self.stiff.label(v)))
            .collect();
        s.push_str(&format!(
            "stiff graph: vertices [{}], edges [{}] ; fold radius {} ; classification {:?}",
            self.stiff.labels().join(", "),
            edges.join(", "),
            self.fold_radius,
            self.classification
        ));
        s
    }
}

fn classify(g: &Graph) -> StiffClass {
    if g.len() == 2 && g.edges().len() == 1 && !g.has_self_loop() {
        StiffClass::Edge
    } else if g.len() == 1 && g.has_loop(0) {
        StiffClass::LoopedVertex
    } else {
        StiffClass::Other
    }
}

/// Iterates [`full_config_fold`] until the graph is stiff.
pub fn fold_to_stiff(g: &Graph) -> FoldSequence {
    let mut steps = Vec::new();
    let mut cur = g.clone();
    while let Ok(step) = full_config_fold(&cur) {
        cur = step.remaining.clone();
        steps.push(step);
    }
    FoldSequence {
        fold_radius: steps.len(),
        classification: classify(&cur),
        stiff: cur,
        steps,
    }
}

fn check_validity_on(p: &Pattern, outside: &[bool]) -> Result<()> {
    let bad = p
        .region()
        .edges()
        .filter(|&(i, j)| outside[i] || outside[j])
        .find(|&(i, j)| !p.graph().adjacent(p.get(i), p.get(j)));
    if let Some((i, j)) = bad {
        return Err(Error::Precondition(format!(
            "pattern is not valid near the folded sites: {:?} ({}) and {:?} ({})",
            p.region().site(i),
            p.label_at(i),
            p.region().site(j),
            p.label_at(j)
        )));
    }
    Ok(())
}

fn apply_on_mask(p: &Pattern, step: &FoldStep, apply: &[bool]) -> Result<Pattern> {
    check_validity_on(p, apply)?;
    let f = step.map_on(p.graph())?;
    let cells = p
        .cells()
        .iter()
        .zip(apply)
        .map(|(&v, &a)| if a { f[v] } else { v })
        .collect();
    let out = Pattern::new(p.graph().clone(), p.region().clone(), cells)?;
    check_validity_on(&out, apply)?;
    Ok(out)
}

/// The map `f_{X,A}`: identity on the fixed sites, the step's fold everywhere else.
///
/// `fixed[i]` marks site `i` (canonical order) as part of `A`.
pub fn apply_fold_outside(p: &Pattern, step: &FoldStep, fixed: &[bool]) -> Result<Pattern> {
    if fixed.len() != p.region().len() {
        return Err(Error::invalid("fixed-site mask does not match the region"));
    }
    let apply: Vec<bool> = fixed.iter().map(|&f| !f).collect();
    apply_on_mask(p, step, &apply)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Inward,
    Outward,
}

/// Onion peeling with the fold sequence of the pattern's own graph.
pub fn onion_fix(p: &Pattern, n: usize, direction: Direction) -> Result<Pattern> {
    let seq = fold_to_stiff(p.graph());
    onion_fix_with(p, &seq, n, direction)
}

/// Onion peeling with an explicit fold sequence, around the origin.
///
/// Inward: step `i` acts on the sites outside `D_{n+i}`. Outward (needs `n > r`):
/// step `i` acts on `D_{n-i}`.
pub fn onion_fix_with(p: &Pattern, seq: &FoldSequence, n: usize, direction: Direction) -> Result<Pattern> {
    let r = seq.fold_radius;
    if direction == Direction::Outward && n <= r {
        return Err(Error::InvalidParameter(format!(
            "outward fixing needs n > fold radius (n = {n}, r = {r})"
        )));
    }
    if !p.region().contains_diamond(n) {
        return Err(Error::invalid(format!("region does not contain D_{n}")));
    }
    let norms: Vec<usize> = p.region().sites().iter().map(|s| l1_norm(s) as usize).collect();
    let mut cur = p.clone();
    for (i, step) in seq.steps.iter().enumerate() {
        let apply: Vec<bool> = match direction {
            Direction::Inward => norms.iter().map(|&m| m > n + i).collect(),
            Direction::Outward => norms.iter().map(|&m| m <= n - i).collect(),
        };
        cur = apply_on_mask(&cur, step, &apply)?;
    }
    Ok(cur)
}
