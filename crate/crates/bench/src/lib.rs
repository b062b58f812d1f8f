//! Criterion benchmarks for the library's inner loops, on fixed inputs.

use std::hint::black_box;
use std::sync::Arc;

use criterion::Criterion;
use homshift::{
    count_box_patterns, fold_to_stiff, lift, patch, pivot_chain, reconfig_components, strip_estimate, CoverVertex,
    Graph, Pattern, Region,
};

/// The staircase `(i + j) mod 5` on C5 over the cube of radius `n`.
pub fn staircase(n: usize) -> Pattern {
    Pattern::from_fn(Arc::new(Graph::cycle(5)), Arc::new(Region::cube(n, 2)), |s| {
        (s[0] + s[1]).rem_euclid(5) as usize
    })
    .unwrap()
}

/// Two path-3 patterns with `b` on even sites. They agree on the two outer layers
/// and differ on every odd interior site, where one has `a` and the other `c`.
pub fn path3_pair(side: usize) -> (Pattern, Pattern) {
    let g = Arc::new(Graph::path(3));
    let region = Arc::new(Region::rect(&[side, side]));
    let depth = region.depths();
    let make = |inner: usize| {
        Pattern::from_fn(g.clone(), region.clone(), |s| {
            let i = region.index_of(s).unwrap();
            match ((s[0] + s[1]) % 2, depth[i] >= 2) {
                (0, _) => 1,
                (_, true) => inner,
                _ => 0,
            }
        })
        .unwrap()
    };
    (make(0), make(2))
}

pub fn benchmarks(c: &mut Criterion) {
    let k3 = Graph::complete(3);
    c.bench_function("count_box_patterns K3 8x8", |b| {
        b.iter(|| count_box_patterns(black_box(&k3), &[8, 8]).unwrap())
    });
    let hs = Graph::hard_square();
    c.bench_function("strip_estimate hard square w=10", |b| {
        b.iter(|| strip_estimate(black_box(&hs), 10).unwrap())
    });
    let long_path = Graph::path(60);
    c.bench_function("fold_to_stiff path-60", |b| b.iter(|| fold_to_stiff(black_box(&long_path))));

    let stair = staircase(20);
    c.bench_function("lift C5 staircase 41x41", |b| {
        b.iter(|| lift(black_box(&stair), &[0, 0], CoverVertex::root(0)).unwrap())
    });

    let (x, y) = path3_pair(12);
    c.bench_function("pivot_chain path-3 12x12", |b| b.iter(|| pivot_chain(black_box(&x), &y).unwrap()));

    let k3 = Arc::new(k3);
    let window = Arc::new(Region::rect(&[7, 7]));
    let outer = Pattern::from_fn(k3, window, |s| ((s[0] + s[1]) % 2) as usize).unwrap();
    let boundary = outer.outer_layers(1);
    c.bench_function("reconfig_components K3 5x5 interior", |b| {
        b.iter(|| reconfig_components(black_box(&boundary), 1, 1 << 22).unwrap())
    });

    let p3 = Arc::new(Graph::path(3));
    let big = Arc::new(Region::cube(14, 2));
    let cb = Pattern::from_fn(p3, big, |s| if (s[0] + s[1]).rem_euclid(2) == 0 { 1 } else { 0 }).unwrap();
    c.bench_function("patch path-3 29x29", |b| b.iter(|| patch(black_box(&cb), &cb, 1, 0).unwrap()));
}
