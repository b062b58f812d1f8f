//! Exact box counts, strip transfer-operator estimates, periodic counts and
//! single-site fillability.

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigUint;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::pattern::PatternEnumerator;
use crate::region::Region;

/// Cap on the number of live boundary profiles in [`count_box_patterns`].
pub const DEFAULT_PROFILE_LIMIT: usize = 1 << 21;

/// Exact number of valid patterns on a box with the given extents.
pub fn count_box_patterns(g: &Graph, extents: &[usize]) -> Result<BigUint> {
    count_box_patterns_with_limit(g, extents, DEFAULT_PROFILE_LIMIT)
}

/// Broken-profile dynamic programming over the sites in row-major order.
///
/// The longest axis is scanned slowest, so the profile holds the last
/// `W = ∏ (other extents)` symbols, encoded as base-`|H|` digits with the most
/// recent symbol lowest.
pub fn count_box_patterns_with_limit(g: &Graph, extents: &[usize], profile_limit: usize) -> Result<BigUint> {
    if extents.is_empty() {
        return Err(Error::invalid("a box needs at least one axis"));
    }
    if extents.contains(&0) {
        return Ok(BigUint::from(1u32));
    }
    let q = g.len();
    if q == 0 {
        return Ok(BigUint::from(0u32));
    }
    let mut ext = extents.to_vec();
    ext.sort_unstable_by(|a, b| b.cmp(a));
    let d = ext.len();
    let mut stride = vec![1usize; d];
    for a in (0..d - 1).rev() {
        stride[a] = stride[a + 1] * ext[a + 1];
    }
    let w = stride[0];
    let q128 = q as u128;
    let fits = (0..w).try_fold(1u128, |acc, _| acc.checked_mul(q128)).filter(|&m| m < u128::MAX / q128);
    let Some(modulus) = fits else {
        return Err(Error::ResourceLimit {
            what: format!("profile of {w} symbols over {q} letters does not fit in 128 bits"),
            limit: 127,
            reached: (w as f64 * (q as f64).log2()).ceil() as usize,
        });
    };
    let pow: Vec<u128> = (0..w).scan(1u128, |acc, _| {
        let v = *acc;
        *acc *= q128;
        Some(v)
    }).collect();
    let total: usize = ext.iter().product();
    let mut layer: HashMap<u128, BigUint> = HashMap::from([(0u128, BigUint::from(1u32))]);
    let mut coord = vec![0usize; d];
    for _ in 0..total {
        let back: Vec<usize> = (0..d).filter(|&a| coord[a] > 0).map(|a| stride[a]).collect();
        let mut next: HashMap<u128, BigUint> = HashMap::with_capacity(layer.len());
        for (state, count) in layer {
            let nb: Vec<Vertex> = back.iter().map(|&s| ((state / pow[s - 1]) % q128) as Vertex).collect();
            let shifted = (state * q128) % modulus;
            for v in 0..q {
                if nb.iter().all(|&u| g.adjacent(u, v)) {
                    *next.entry(shifted + v as u128).or_default() += &count;
                }
            }
        }
        if next.len() > profile_limit {
            return Err(Error::ResourceLimit {
                what: "live boundary profiles".into(),
                limit: profile_limit,
                reached: next.len(),
            });
        }
        layer = next;
        for a in (0..d).rev() {
            coord[a] += 1;
            if coord[a] < ext[a] {
                break;
            }
            coord[a] = 0;
        }
    }
    Ok(layer.into_values().sum())
}

/// Number of valid patterns on the unit cube `{0,1}^d`, i.e. homomorphisms from the
/// `d`-dimensional hypercube graph. These are the configurations invariant under
/// every doubled shift.
pub fn periodic_count(g: &Graph, d: usize) -> Result<BigUint> {
    if d == 0 {
        return Err(Error::invalid("dimension must be at least 1"));
    }
    count_box_patterns(g, &vec![2; d])
}

/// Outcome of the fillability scan.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Fillability {
    pub fillable: bool,
    /// A `2d`-tuple with no common neighbour, when not fillable.
    pub witness: Option<Vec<String>>,
}

/// Whether every `2d`-tuple of vertices has a common neighbour.
///
/// Tuples are scanned as vertex sets of size at most `2d`, smallest first, so the
/// witness is a smallest obstruction padded to `2d` entries by repeating its last vertex.
pub fn single_site_fillable(g: &Graph, d: usize) -> Fillability {
    let n = g.len();
    let k_max = (2 * d).min(n);
    for k in 1..=k_max {
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            let common = g.vertices().any(|v| idx.iter().all(|&u| g.adjacent(u, v)));
            if !common {
                let mut w: Vec<String> = idx.iter().map(|&u| g.label(u).to_string()).collect();
                while w.len() < 2 * d {
                    w.push(w.last().unwrap().clone());
                }
                return Fillability {
                    fillable: false,
                    witness: Some(w),
                };
            }
            // next k-combination of 0..n
            let mut i = k;
            while i > 0 && idx[i - 1] == n - k + i - 1 {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            idx[i - 1] += 1;
            for j in i..k {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    Fillability {
        fillable: true,
        witness: None,
    }
}

/// Per-site growth rate estimate for strips of one width.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StripEstimate {
    pub width: usize,
    /// Number of valid columns.
    pub columns: usize,
    /// `log(λ_w) / w` with `λ_w` the dominant eigenvalue of the column transfer
    /// operator; `None` when there are no bi-infinite strips.
    pub estimate: Option<f64>,
    pub converged: bool,
    pub iterations: usize,
}

/// Cap on the number of columns of a strip transfer operator.
pub const DEFAULT_COLUMN_LIMIT: usize = 200_000;

/// Transfer-operator estimate for strips of width `w` with free top and bottom rows.
///
/// The operator is symmetric, so power iteration runs on its square, which has a
/// non-negative spectrum, from the all-ones vector until the relative change of the
/// eigenvalue estimate falls below `1e-10`.
pub fn strip_estimate(g: &Graph, w: usize) -> Result<StripEstimate> {
    if w == 0 {
        return Err(Error::InvalidParameter("strip width must be positive".into()));
    }
    let gg = Arc::new(g.clone());
    let region = Arc::new(Region::rect(&[w]));
    let mut columns: Vec<Vec<Vertex>> = Vec::new();
    let mut overflow = false;
    PatternEnumerator::new(gg, region, None)?.for_each_free(|c| {
        if columns.len() >= DEFAULT_COLUMN_LIMIT {
            overflow = true;
        } else {
            columns.push(c.to_vec());
        }
    });
    if overflow {
        return Err(Error::ResourceLimit {
            what: format!("valid columns of height {w}"),
            limit: DEFAULT_COLUMN_LIMIT,
            reached: DEFAULT_COLUMN_LIMIT,
        });
    }
    let index: HashMap<&[Vertex], usize> = columns.iter().enumerate().map(|(i, c)| (c.as_slice(), i)).collect();
    let adj: Vec<Vec<usize>> = columns
        .iter()
        .map(|c| {
            let mut out = Vec::new();
            let mut cur = Vec::with_capacity(w);
            compatible(g, c, &mut cur, &index, &mut out);
            out
        })
        .collect();
    let n = columns.len();
    if n == 0 || adj.iter().all(|a| a.is_empty()) {
        return Ok(StripEstimate {
            width: w,
            columns: n,
            estimate: None,
            converged: true,
            iterations: 0,
        });
    }
    let apply = |v: &[f64]| -> Vec<f64> { adj.iter().map(|nb| nb.iter().map(|&j| v[j]).sum()).collect() };
    let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let mut v = vec![1.0 / (n as f64).sqrt(); n];
    let mut lambda2 = 0.0;
    let mut converged = false;
    let mut iterations = 0;
    while iterations < 100_000 {
        iterations += 1;
        let u = apply(&apply(&v));
        let r = norm(&u);
        if r == 0.0 {
            break;
        }
        v = u.into_iter().map(|x| x / r).collect();
        if (r - lambda2).abs() <= 1e-10 * r {
            lambda2 = r;
            converged = true;
            break;
        }
        lambda2 = r;
    }
    let estimate = (lambda2 > 0.0).then(|| 0.5 * lambda2.ln() / w as f64);
    Ok(StripEstimate {
        width: w,
        columns: n,
        estimate,
        converged,
        iterations,
    })
}

fn compatible(g: &Graph, col: &[Vertex], cur: &mut Vec<Vertex>, index: &HashMap<&[Vertex], usize>, out: &mut Vec<usize>) {
    let k = cur.len();
    if k == col.len() {
        if let Some(&i) = index.get(cur.as_slice()) {
            out.push(i);
        }
        return;
    }
    for &u in g.neighbors(col[k]) {
        if k == 0 || g.adjacent(cur[k - 1], u) {
            cur.push(u);
            compatible(g, col, cur, index, out);
            cur.pop();
        }
    }
}

/// Exact count for one box.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoxCount {
    pub extents: Vec<usize>,
    /// Decimal digits of the count.
    pub count: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntropyReport {
    pub graph: Graph,
    pub box_counts: Vec<BoxCount>,
    /// `log(count) / area` per box; `None` for an empty count.
    pub per_site_log: Vec<Option<f64>>,
    pub strip_estimates: Vec<StripEstimate>,
    /// `(log 2) / 2` when the graph contains a path on three distinct vertices.
    pub lower_bound_path2: Option<f64>,
    /// Best strip estimate of each connected component, in component order.
    pub component_estimates: Vec<Option<f64>>,
    /// Largest component estimate.
    pub component_rule: Option<f64>,
    /// Computations skipped because of resource limits.
    pub notes: Vec<String>,
}

fn ln_big(n: &BigUint) -> Option<f64> {
    if n.bits() == 0 {
        return None;
    }
    let bits = n.bits();
    let shift = bits.saturating_sub(60);
    let top = (n >> shift).to_u64_digits().first().copied().unwrap_or(0) as f64;
    Some(top.ln() + shift as f64 * std::f64::consts::LN_2)
}

fn best_strip(g: &Graph, max_width: usize, notes: &mut Vec<String>) -> (Vec<StripEstimate>, Option<f64>) {
    let mut out = Vec::new();
    for w in 1..=max_width {
        match strip_estimate(g, w) {
            Ok(s) => out.push(s),
            Err(e) => {
                notes.push(format!("strip width {w}: {e}"));
                break;
            }
        }
    }
    let best = out.last().and_then(|s| s.estimate);
    (out, best)
}

/// Box counts on squares and strip estimates up to `max_width`, with the component rule.
pub fn entropy_report(g: &Graph, max_width: usize) -> EntropyReport {
    let mut notes = Vec::new();
    let mut box_counts = Vec::new();
    let mut per_site_log = Vec::new();
    for n in 1..=max_width {
        match count_box_patterns(g, &[n, n]) {
            Ok(c) => {
                per_site_log.push(ln_big(&c).map(|l| l / (n * n) as f64));
                box_counts.push(BoxCount {
                    extents: vec![n, n],
                    count: c.to_string(),
                });
            }
            Err(e) => {
                notes.push(format!("box {n}x{n}: {e}"));
                break;
            }
        }
    }
    let (strip_estimates, whole) = best_strip(g, max_width, &mut notes);
    let comps = g.components();
    let component_estimates: Vec<Option<f64>> = if comps.len() == 1 {
        vec![whole]
    } else {
        comps
            .iter()
            .map(|c| best_strip(&g.induced(c), max_width, &mut notes).1)
            .collect()
    };
    let component_rule = component_estimates.iter().flatten().copied().reduce(f64::max);
    EntropyReport {
        graph: g.clone(),
        box_counts,
        per_site_log,
        strip_estimates,
        lower_bound_path2: g.find_three_path().map(|_| std::f64::consts::LN_2 / 2.0),
        component_estimates,
        component_rule,
        notes,
    }
}

impl EntropyReport {
    /// Plain-text table.
    pub fn table(&self) -> String {
        let mut s = String::from("box        count                    log(count)/area\n");
        for (b, l) in self.box_counts.iter().zip(&self.per_site_log) {
            let ext: Vec<String> = b.extents.iter().map(|e| e.to_string()).collect();
            let l = l.map_or("-".to_string(), |x| format!("{x:.6}"));
            s.push_str(&format!("{:<10} {:<24} {l}\n", ext.join("x"), b.count));
        }
        s.push_str("\nwidth  columns  strip estimate\n");
        for e in &self.strip_estimates {
            let v = e.estimate.map_or("-".to_string(), |x| format!("{x:.6}"));
            s.push_str(&format!("{:<6} {:<8} {v}\n", e.width, e.columns));
        }
        if let Some(b) = self.lower_bound_path2 {
            s.push_str(&format!("\nlower bound (log 2)/2 = {b:.6}\n"));
        }
        if let Some(r) = self.component_rule {
            s.push_str(&format!("component rule (max over components) = {r:.6}\n"));
        }
        for n in &self.notes {
            s.push_str(&format!("note: {n}\n"));
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(g: &Graph, extents: &[usize]) -> u64 {
        let r = Region::rect(extents);
        let n = r.len();
        let mut cells = vec![0usize; n];
        let mut count = 0;
        'outer: loop {
            if r.edges().all(|(i, j)| g.adjacent(cells[i], cells[j])) {
                count += 1;
            }
            for c in cells.iter_mut() {
                *c += 1;
                if *c < g.len() {
                    continue 'outer;
                }
                *c = 0;
            }
            return count;
        }
    }

    fn p3() -> Graph {
        Graph::new(["a", "b", "c"], [("a", "b"), ("b", "c")]).unwrap()
    }

    #[test]
    fn count_examples() {
        assert_eq!(count_box_patterns(&p3(), &[3, 3]).unwrap(), BigUint::from(48u32));
        for (m, n) in [(1, 1), (2, 5), (4, 3), (6, 6)] {
            assert_eq!(count_box_patterns(&Graph::edge(), &[m, n]).unwrap(), BigUint::from(2u32));
        }
        assert_eq!(count_box_patterns(&Graph::hard_square(), &[2, 2]).unwrap(), BigUint::from(7u32));
        assert_eq!(count_box_patterns(&p3(), &[0, 4]).unwrap(), BigUint::from(1u32));
    }

    #[test]
    fn counts_match_brute_force() {
        for g in [p3(), Graph::hard_square(), Graph::complete(3), Graph::cycle(4), Graph::star(3)] {
            for ext in [vec![3], vec![2, 3], vec![3, 2], vec![1, 4], vec![2, 2, 2], vec![3, 3]] {
                assert_eq!(
                    count_box_patterns(&g, &ext).unwrap(),
                    BigUint::from(brute(&g, &ext)),
                    "{g:?} {ext:?}"
                );
            }
        }
    }

    #[test]
    fn profile_limit_is_reported() {
        let e = count_box_patterns_with_limit(&Graph::complete(4), &[6, 6], 10).unwrap_err();
        assert!(e.is_resource_limit());
        let e = count_box_patterns(&Graph::complete(4), &[200, 200]).unwrap_err();
        assert!(e.is_resource_limit());
    }

    #[test]
    fn periodic_examples() {
        assert_eq!(periodic_count(&Graph::edge(), 2).unwrap(), BigUint::from(2u32));
        assert_eq!(periodic_count(&Graph::complete(3), 2).unwrap(), BigUint::from(18u32));
        assert_eq!(periodic_count(&Graph::hard_square(), 2).unwrap(), BigUint::from(7u32));
        assert_eq!(periodic_count(&Graph::edge(), 3).unwrap(), BigUint::from(2u32));
    }

    #[test]
    fn fillability_examples() {
        assert!(single_site_fillable(&Graph::complete(5), 2).fillable);
        let k4 = single_site_fillable(&Graph::complete(4), 2);
        assert!(!k4.fillable);
        let mut w = k4.witness.unwrap();
        w.sort();
        assert_eq!(w, ["1", "2", "3", "4"]);
        let looped = Graph::from_edge_list(1, &[(0, 0)]).unwrap();
        for d in 1..4 {
            assert!(single_site_fillable(&looped, d).fillable);
        }
        let edge = single_site_fillable(&Graph::edge(), 1);
        assert_eq!(edge.witness.unwrap().len(), 2);
    }

    #[test]
    fn strip_examples() {
        let e = strip_estimate(&Graph::edge(), 3).unwrap();
        assert!(e.estimate.unwrap().abs() < 1e-9);
        for w in 1..=4 {
            let s = strip_estimate(&p3(), w).unwrap();
            assert!(s.converged);
            assert!((s.estimate.unwrap() - std::f64::consts::LN_2 / 2.0).abs() < 1e-8, "{s:?}");
        }
        let single = Graph::from_edge_list(1, &[]).unwrap();
        assert_eq!(strip_estimate(&single, 2).unwrap().estimate, None);
    }

    #[test]
    fn report_examples() {
        let r = entropy_report(&Graph::edge(), 4);
        assert!(r.per_site_log.last().unwrap().unwrap() < 0.05);
        assert!(r.lower_bound_path2.is_none());
        let r = entropy_report(&p3(), 4);
        assert!(r.lower_bound_path2.is_some());
        assert!((r.component_rule.unwrap() - 0.3466).abs() < 1e-3);
        let union = Graph::edge()
            .disjoint_union(&Graph::new(["x", "y", "z"], [("x", "y"), ("y", "z")]).unwrap())
            .unwrap();
        let r = entropy_report(&union, 4);
        assert_eq!(r.component_estimates.len(), 2);
        let max = r.component_estimates.iter().flatten().copied().fold(f64::MIN, f64::max);
        assert_eq!(r.component_rule, Some(max));
        assert!(r.table().contains("component rule"));
        assert!(serde_json::to_string(&r).is_ok());
    }

    #[test]
    fn big_log_is_accurate() {
        let n = BigUint::from(3u32).pow(200);
        assert!((ln_big(&n).unwrap() - 200.0 * 3f64.ln()).abs() < 1e-9);
        assert_eq!(ln_big(&BigUint::from(0u32)), None);
    }
}
