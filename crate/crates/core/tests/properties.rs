//! Cross-module properties checked against small brute-force references.

use proptest::prelude::*;

use toughham::canon::canonical_key;
use toughham::generators::{
    certify_brute_force, complete_multipartite, multipartite_toughness_formula, random_free_graph,
};
use toughham::invariants::{connectivity, independence_number, toughness};
use toughham::io::{parse_graph6, to_graph6};
use toughham::oracle::{
    hamiltonian_cycle_oracle, hamiltonian_cycle_with, min_path_cover_oracle, validate_cycle, validate_path_cover,
    Strategy as Method,
};
use toughham::paths::min_path_cover_p32p1free;
use toughham::patterns::{find_induced, is_p3_kp1_free, p3_union_kp1};
use toughham::{Graph, Rational, INFINITY};

fn graph_strategy(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        proptest::collection::vec(any::<bool>(), pairs).prop_map(move |bits| {
            let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
            Graph::new(n, edges.zip(bits).filter(|(_, b)| *b).map(|(e, _)| e)).unwrap()
        })
    })
}

/// Components of `G - removed` by repeated neighbourhood expansion.
fn components_without(g: &Graph, removed: u32) -> usize {
    let n = g.n();
    let mut seen = removed;
    let mut count = 0;
    for s in 0..n {
        if seen >> s & 1 == 1 {
            continue;
        }
        count += 1;
        let mut stack = vec![s];
        seen |= 1 << s;
        while let Some(u) = stack.pop() {
            for v in 0..n {
                if g.has_edge(u, v) && seen >> v & 1 == 0 {
                    seen |= 1 << v;
                    stack.push(v);
                }
            }
        }
    }
    count
}

fn reference_toughness(g: &Graph) -> Rational {
    if components_without(g, 0) > 1 {
        return Rational::ZERO;
    }
    (0u32..1 << g.n())
        .filter_map(|m| {
            let w = components_without(g, m);
            (w >= 2).then(|| Rational::frac(m.count_ones() as i64, w as i64))
        })
        .min()
        .unwrap_or(INFINITY)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

fn naive_hamiltonian(g: &Graph) -> bool {
    let n = g.n();
    n >= 3
        && permutations(n - 1).into_iter().any(|p| {
            let order: Vec<usize> = std::iter::once(n - 1).chain(p).collect();
            (0..n).all(|i| g.has_edge(order[i], order[(i + 1) % n]))
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn toughness_matches_subset_enumeration(g in graph_strategy(9)) {
        let cert = toughness(&g);
        prop_assert_eq!(cert.value, reference_toughness(&g));
        if !cert.tough_set.is_empty() {
            let w = g.component_count(&cert.tough_set);
            prop_assert_eq!(Rational::frac(cert.tough_set.len() as i64, w as i64), cert.value);
        }
    }

    #[test]
    fn connectivity_dominates_twice_toughness(g in graph_strategy(9)) {
        prop_assume!(g.is_connected() && !g.is_complete_graph());
        let tau = toughness(&g).value;
        prop_assert!(connectivity(&g).0 as i64 >= tau.add(tau).ceil().unwrap());
        // Removing the complement of a maximum independent set leaves alpha components.
        let alpha = independence_number(&g).0;
        prop_assert!(tau <= Rational::frac((g.n() - alpha) as i64, alpha as i64));
    }

    #[test]
    fn oracle_agrees_with_permutations(g in graph_strategy(8)) {
        prop_assume!(g.n() >= 3);
        let ans = hamiltonian_cycle_oracle(&g).unwrap();
        prop_assert_eq!(ans.is_yes(), naive_hamiltonian(&g));
        if let Some(c) = ans.witness() {
            prop_assert!(validate_cycle(&g, c));
            prop_assert!(toughness(&g).value >= Rational::ONE);
        }
    }

    #[test]
    fn oracle_methods_agree(g in graph_strategy(12)) {
        prop_assume!(g.n() >= 3);
        let dp = hamiltonian_cycle_with(&g, Method::Dp).unwrap();
        let bt = hamiltonian_cycle_with(&g, Method::Backtrack).unwrap();
        prop_assert_eq!(dp.is_yes(), bt.is_yes());
    }

    #[test]
    fn constructive_path_cover_validates_and_bounds_the_optimum(g in graph_strategy(10)) {
        prop_assume!(is_p3_kp1_free(&g, 2).0);
        let r = min_path_cover_p32p1free(&g).unwrap();
        prop_assert!(validate_path_cover(&g, &r.cover));
        let (opt, cover) = min_path_cover_oracle(&g).unwrap();
        prop_assert!(validate_path_cover(&g, &cover));
        prop_assert!(opt <= r.cover.len());
        if r.tau >= Rational::ONE {
            prop_assert!(r.cover.len() <= 2);
        }
    }

    #[test]
    fn freeness_agrees_with_induced_search(g in graph_strategy(9), k in 1usize..=3) {
        let (free, w) = is_p3_kp1_free(&g, k);
        let pattern = p3_union_kp1(k);
        let found = find_induced(&g, &pattern).unwrap();
        prop_assert_eq!(free, found.is_none());
        if let Some(w) = w {
            prop_assert!(w.realizes(&g, &pattern));
        }
    }

    #[test]
    fn random_free_graphs_are_free_and_reproducible(n in 1usize..14, p in 0.0f64..=1.0, k in 1usize..=3, seed in any::<u64>()) {
        let g = random_free_graph(n, p, k, seed).unwrap();
        prop_assert!(is_p3_kp1_free(&g, k).0);
        prop_assert_eq!(to_graph6(&g), to_graph6(&random_free_graph(n, p, k, seed).unwrap()));
    }

    #[test]
    fn canonical_key_ignores_labels(g in graph_strategy(8), seed in any::<u64>()) {
        let n = g.n();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut state = seed;
        for i in (1..n).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
            perm.swap(i, (state >> 33) as usize % (i + 1));
        }
        let h = Graph::new(n, g.edges().map(|(u, v)| (perm[u], perm[v]))).unwrap();
        prop_assert_eq!(canonical_key(&g), canonical_key(&h));
    }

    #[test]
    fn graph6_round_trips(g in graph_strategy(30)) {
        prop_assert_eq!(parse_graph6(&to_graph6(&g)).unwrap(), g);
    }

    #[test]
    fn multipartite_formula_matches_brute_force(parts in proptest::collection::vec(1usize..=4, 1..=4)) {
        prop_assume!(parts.iter().sum::<usize>() <= 12);
        let c = complete_multipartite(&parts).unwrap();
        prop_assert_eq!(multipartite_toughness_formula(&parts), toughness(&c.graph).value);
        prop_assert_eq!(certify_brute_force(&c.graph).unwrap().toughness_bound, c.toughness_bound);
    }
}

#[test]
fn petersen_is_not_hamiltonian_but_every_vertex_deletion_is() {
    let p = Graph::petersen();
    assert!(!hamiltonian_cycle_oracle(&p).unwrap().is_yes());
    for v in 0..10 {
        let keep = p.vertices().difference(&p.set_of([v]));
        let h = p.induced(&keep).graph;
        assert!(hamiltonian_cycle_oracle(&h).unwrap().is_yes());
    }
    assert_eq!(toughness(&p).value, Rational::frac(4, 3));
}
