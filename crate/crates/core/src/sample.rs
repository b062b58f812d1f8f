//! Random valid patterns, used as inputs by the test suites and `sample-pattern`.
//!
//! These utilities are not part of any construction; they only generate inputs.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::pattern::Pattern;
use crate::region::Region;

/// Fills the sites in canonical order, each uniformly among the symbols compatible
/// with the neighbours already filled, restarting from scratch on a dead end.
///
/// On boxes of dimension two or less this never restarts when no vertex is isolated:
/// the neighbours above and to the left of a site share the symbol of the diagonal
/// site as a neighbour.
pub fn random_pattern<R: Rng + ?Sized>(
    g: &Arc<Graph>,
    region: &Arc<Region>,
    rng: &mut R,
    max_restarts: usize,
) -> Result<Pattern> {
    let n = region.len();
    let mut cells: Vec<Vertex> = vec![0; n];
    let mut options: Vec<Vertex> = Vec::with_capacity(g.len());
    for attempt in 0..=max_restarts {
        let mut ok = true;
        for i in 0..n {
            options.clear();
            let earlier: Vec<Vertex> = region.neighbors(i).iter().filter(|&&j| j < i).map(|&j| cells[j]).collect();
            let self_loop = region.neighbors(i).contains(&i);
            options.extend(
                g.vertices()
                    .filter(|&v| earlier.iter().all(|&u| g.adjacent(u, v)) && (!self_loop || g.has_loop(v))),
            );
            match options.choose(rng) {
                Some(&v) => cells[i] = v,
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            return Pattern::new(g.clone(), region.clone(), cells);
        }
        if attempt == max_restarts {
            break;
        }
    }
    Err(Error::ResourceLimit {
        what: "restarts of the site-by-site sampler".into(),
        limit: max_restarts,
        reached: max_restarts,
    })
}
