use std::sync::Arc;

use homshift::cover::{deck_transform, reduce};
use homshift::io::{parse_pattern, GraphSource};
use homshift::pivot::lift_distance_sum;
use homshift::region::{l1_distance, l1_norm};
use homshift::{
    count_box_patterns, count_patterns, cover_distance, fold_to_stiff, lift, onion_fix, pivot_chain, random_pattern,
    reconfig_components, Cover, CoverVertex, Direction, Graph, Pattern, Region,
};
use num_bigint::BigUint;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn graph_from_mask(n: usize, mask: u32) -> Graph {
    let mut edges = Vec::new();
    let mut bit = 0;
    for i in 0..n {
        for j in i..n {
            if mask >> bit & 1 == 1 {
                edges.push((i, j));
            }
            bit += 1;
        }
    }
    Graph::from_edge_list(n, &edges).unwrap()
}

fn any_graph() -> impl Strategy<Value = Graph> {
    (1usize..=5, any::<u32>()).prop_map(|(n, m)| graph_from_mask(n, m))
}

fn tree_like_graph() -> impl Strategy<Value = Graph> {
    any_graph().prop_filter("connected, four-cycle-free, with an edge", |g| {
        !g.edges().is_empty() && g.is_connected() && g.is_four_cycle_free()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn retraction_is_an_idempotent_homomorphism(g in any_graph()) {
        let seq = fold_to_stiff(&g);
        let f = seq.retraction_on(&g).unwrap();
        for &(u, v) in g.edges() {
            prop_assert!(g.adjacent(f[u], f[v]));
        }
        for v in g.vertices() {
            prop_assert_eq!(f[f[v]], f[v]);
        }
        prop_assert_eq!(seq.stiff.len(), f.iter().collect::<std::collections::BTreeSet<_>>().len());
    }

    #[test]
    fn fold_steps_shrink_by_neighbourhood_inclusion(g in any_graph()) {
        let seq = fold_to_stiff(&g);
        let mut cur = g.clone();
        for step in &seq.steps {
            for (from, to) in &step.target {
                let a = cur.require(from).unwrap();
                let b = cur.require(to).unwrap();
                prop_assert!(cur.neighborhood_contained(a, b));
            }
            prop_assert!(step.remaining.len() < cur.len());
            cur = step.remaining.clone();
        }
        prop_assert_eq!(cur.len(), seq.stiff.len());
    }

    #[test]
    fn lifts_are_cover_homomorphisms(g in tree_like_graph(), seed in any::<u64>(), w in 1usize..6, h in 1usize..6) {
        let g = Arc::new(g);
        let region = Arc::new(Region::rect(&[w, h]));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_pattern(&g, &region, &mut rng, 0).unwrap();
        let l = lift(&x, region.site(0), CoverVertex::root(x.get(0))).unwrap();
        for i in 0..region.len() {
            prop_assert_eq!(l.get(i).head(), x.get(i));
            for &j in region.neighbors(i) {
                prop_assert_eq!(cover_distance(l.get(i), l.get(j)).unwrap(), 1);
            }
            for j in 0..region.len() {
                let hij = l.height(i, j);
                prop_assert_eq!(hij, l.height(j, i));
                prop_assert!(hij as i64 <= l1_distance(region.site(i), region.site(j)));
            }
        }
    }

    #[test]
    fn deck_transformations_are_isometries(n in 3usize..7, seed in any::<u64>(), turns in 1usize..4) {
        let g = Arc::new(Graph::cycle(n));
        let cover = Cover::new(g.clone(), 0).unwrap();
        let ball = cover.ball(6);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c: Vec<usize> = (0..=n * turns).map(|i| i % n).collect();
        for _ in 0..20 {
            let a = &ball[rng.gen_range(0..ball.len())];
            let b = &ball[rng.gen_range(0..ball.len())];
            let ta = deck_transform(&g, &c, a).unwrap();
            let tb = deck_transform(&g, &c, b).unwrap();
            prop_assert_eq!(cover_distance(a, b).unwrap(), cover_distance(&ta, &tb).unwrap());
            prop_assert_eq!(ta.head(), a.head());
            let back: Vec<usize> = c.iter().rev().copied().collect();
            prop_assert_eq!(&deck_transform(&g, &back, &ta).unwrap(), a);
        }
    }

    #[test]
    fn reduction_is_idempotent(walk in proptest::collection::vec(0usize..4, 1..30)) {
        let r = reduce(&walk);
        prop_assert_eq!(reduce(&r), r.clone());
        prop_assert!(r.windows(3).all(|w| w[0] != w[2]));
        prop_assert_eq!(r.len() % 2, walk.len() % 2);
    }

    #[test]
    fn inward_onion_keeps_the_centre(g in tree_like_graph(), seed in any::<u64>(), n in 1usize..3) {
        let g = Arc::new(g);
        let region = Arc::new(Region::cube(6, 2));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_pattern(&g, &region, &mut rng, 0).unwrap();
        let seq = fold_to_stiff(&g);
        let y = onion_fix(&x, n, Direction::Inward).unwrap();
        prop_assert!(y.is_valid());
        let core: Vec<usize> = seq.stiff.labels().iter().map(|l| g.require(l).unwrap()).collect();
        for (i, s) in region.sites().iter().enumerate() {
            let m = l1_norm(s) as usize;
            if m <= n {
                prop_assert_eq!(y.get(i), x.get(i));
            }
            if m > n + seq.steps.len() {
                prop_assert!(core.contains(&y.get(i)));
            }
        }
    }

    #[test]
    fn box_counts_match_enumeration_and_symmetry(g in any_graph(), a in 1usize..4, b in 1usize..4) {
        let ab = count_box_patterns(&g, &[a, b]).unwrap();
        let ba = count_box_patterns(&g, &[b, a]).unwrap();
        prop_assert_eq!(&ab, &ba);
        let arc = Arc::new(g);
        let region = Arc::new(Region::rect(&[a, b]));
        prop_assert_eq!(ab, BigUint::from(count_patterns(&arc, &region, None).unwrap()));
    }

    #[test]
    fn json_round_trip(g in any_graph(), seed in any::<u64>(), w in 1usize..5, h in 1usize..5) {
        prop_assume!(g.vertices().all(|v| g.degree(v) > 0));
        let g = Arc::new(g);
        let region = Arc::new(Region::rect(&[w, h]));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_pattern(&g, &region, &mut rng, 0).unwrap();
        let text = serde_json::to_string(&x).unwrap();
        let back = parse_pattern(&text, GraphSource::default()).unwrap();
        prop_assert_eq!(back, x);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn pivot_chains_have_half_the_distance_sum(g in tree_like_graph(), seed in any::<u64>()) {
        let g = Arc::new(g);
        let region = Arc::new(Region::rect(&[7, 7]));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let outer: Pattern = random_pattern(&g, &region, &mut rng, 0).unwrap();
        let rc = reconfig_components(&outer.outer_layers(2), 1, 1_000_000).unwrap();
        prop_assert_eq!(rc.component_count(), 1);
        let x = rc.pattern(rng.gen_range(0..rc.len()));
        let y = rc.pattern(rng.gen_range(0..rc.len()));
        let chain = pivot_chain(&x, &y).unwrap();
        chain.verify().unwrap();
        prop_assert_eq!(chain.last().unwrap(), y.clone());
        prop_assert_eq!(2 * chain.len(), lift_distance_sum(&x, &y).unwrap());
    }
}
