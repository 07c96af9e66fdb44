use proptest::prelude::*;

use toughham::generators::{clique_join, complete_multipartite, planted_lemma_instance, PlantSpec};
use toughham::invariants::min_degree_sum_pair;
use toughham::oracle::validate_cycle;
use toughham::pipeline::{
    assemble_lemma27, construct_hamiltonian_cycle, decompose, decompose_at, BranchTag, DecomposeOutcome,
    HypothesisError, PipelineOptions, TheoremInstance, ToughnessEvidence,
};
use toughham::{Graph, Rational};

fn fifteen() -> Rational {
    Rational::int(15)
}

fn run(inst: &TheoremInstance) -> BranchTag {
    let trace = construct_hamiltonian_cycle(inst);
    let cycle = trace.result.as_ref().expect("a cycle");
    assert!(trace.validated);
    assert!(validate_cycle(&inst.g, cycle));
    assert_eq!(trace.branch_log.iter().filter(|t| t.is_terminal()).count(), 1, "{:?}", trace.branch_log);
    assert_eq!(trace.branch_log.last().copied(), Some(trace.terminal()));
    trace.terminal()
}

#[test]
fn complete_graph_takes_the_shortcut() {
    let inst = TheoremInstance::verify(Graph::complete(40), fifteen(), None).unwrap();
    assert!(matches!(inst.toughness, ToughnessEvidence::Computed(_)));
    assert_eq!(run(&inst), BranchTag::DegreeSumShortcut);
}

#[test]
fn multipartite_with_pairs_is_a_shortcut() {
    let c = complete_multipartite(&[2; 32]).unwrap();
    assert_eq!(c.toughness_bound, Rational::int(31));
    let inst = TheoremInstance::from_certified(&c, fifteen()).unwrap();
    assert!(matches!(decompose(&inst), Ok(DecomposeOutcome::Shortcut(_))));
    assert_eq!(run(&inst), BranchTag::DegreeSumShortcut);
}

#[test]
fn family_is_recognised_from_the_bare_graph() {
    let g = complete_multipartite(&[2; 32]).unwrap().graph;
    let inst = TheoremInstance::verify(g, fifteen(), None).unwrap();
    assert!(matches!(inst.toughness, ToughnessEvidence::Analytic { .. }));
}

#[test]
fn planted_components_use_the_assembly() {
    let p = planted_lemma_instance(&PlantSpec::Components { s: 75, nontrivial: vec![8, 9, 10], trivial: 2 }).unwrap();
    let inst = TheoremInstance::from_certified(&p.certified, fifteen()).unwrap();
    // Every degree sum is large at this order, so decompose at the least pair of minimum sum.
    assert!(matches!(decompose(&inst), Ok(DecomposeOutcome::Shortcut(_))));
    let (u, v, _) = min_degree_sum_pair(&inst.g).unwrap();
    let d = decompose_at(&inst.g, u, v).unwrap();
    assert!(inst.g.is_cutset(&d.s));
    assert_eq!(d.s, p.cut);
    assert_eq!(d.components.len(), 5);
    assert_eq!(run(&inst), BranchTag::Lemma27Assembly);
}

#[test]
fn three_components_are_glued() {
    let p = planted_lemma_instance(&PlantSpec::ThreeComponents { s: 45, big: 95, small: 3 }).unwrap();
    let inst = TheoremInstance::from_certified(&p.certified, fifteen()).unwrap();
    assert_eq!(run(&inst), BranchTag::Claim1Glue);
}

#[test]
fn assembly_needs_five_components() {
    let p = planted_lemma_instance(&PlantSpec::Components { s: 60, nontrivial: vec![4, 4, 4], trivial: 1 }).unwrap();
    let r = assemble_lemma27(&p.certified.graph, &p.cut, fifteen(), &PipelineOptions::default());
    assert!(matches!(r, Err(HypothesisError::Cutset(_))), "{r:?}");
}

#[test]
fn hypotheses_are_enforced() {
    let p3_and_isolated = Graph::new(7, [(0, 1), (1, 2)]).unwrap();
    assert!(matches!(TheoremInstance::verify(Graph::complete(2), fifteen(), None), Err(HypothesisError::TooSmall(2))));
    assert!(matches!(
        TheoremInstance::verify(Graph::complete(40), Rational::int(3), None),
        Err(HypothesisError::TooWeak(_))
    ));
    assert!(matches!(TheoremInstance::verify(p3_and_isolated, fifteen(), None), Err(HypothesisError::NotTough { .. })));
    let c = clique_join(30, &[10, 10, 10]).unwrap();
    assert!(matches!(TheoremInstance::from_certified(&c, fifteen()), Err(HypothesisError::NotTough { .. })));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn multipartite_families_always_yield_a_cycle(max_part in 1usize..=4, extra in 0usize..40, seed in any::<u64>()) {
        // Parts of size at most `max_part`, at least 16 times as many vertices as the largest.
        let mut parts = vec![max_part];
        let mut state = seed;
        while parts.iter().sum::<usize>() < 16 * max_part + extra {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            parts.push(1 + (state >> 33) as usize % max_part);
        }
        let c = complete_multipartite(&parts).unwrap();
        prop_assume!(c.graph.n() >= 31);
        let inst = TheoremInstance::from_certified(&c, fifteen()).unwrap();
        let tag = run(&inst);
        prop_assert!(tag.is_constructive());
    }

    #[test]
    fn clique_joins_always_yield_a_cycle(s in 45usize..=60, sizes in proptest::collection::vec(1usize..20, 3)) {
        let c = clique_join(s, &sizes).unwrap();
        let inst = TheoremInstance::from_certified(&c, fifteen()).unwrap();
        run(&inst);
    }
}
