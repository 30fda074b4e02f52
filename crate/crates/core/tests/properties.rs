use std::collections::HashSet;

use connfair::generators::{gen_random, gen_random_with_types, GraphFamily};
use connfair::graph::{classify, enumerate_connected_sets, is_connected_set, root_tree};
use connfair::io::{instance_to_json, parse_instance};
use connfair::mms_tree::{allocate_with_quotas, solve_mms_tree_traced};
use connfair::model::{
    bundle_value, compute_type_partition, is_complete, is_envy_free, is_mms_allocation,
    is_proportional, AgentSpec,
};
use connfair::oracle::{
    enumerate_valid_allocations, oracle_ef_complete, oracle_mms_exists, oracle_mms_values,
    oracle_prop,
};
use connfair::rational::fair_share;
use connfair::solvers::{
    dispatch, ef_path_typed_with_guess, path_dp_table, prop_path_typed, prop_star, prop_tree_fpt,
    solve_with,
};
use connfair::{Instance, ItemGraph, Method, OracleBudget, Problem, Rational, VertexSet};
use num_traits::Zero;
use proptest::prelude::*;

const FAMILIES: [GraphFamily; 5] = [
    GraphFamily::Path,
    GraphFamily::Star,
    GraphFamily::Tree,
    GraphFamily::Cycle,
    GraphFamily::Connected,
];

fn small_instance() -> impl Strategy<Value = Instance> {
    (any::<u64>(), 0..FAMILIES.len(), 3usize..=6, 1usize..=3, 1u32..=6).prop_filter_map(
        "m >= n",
        |(seed, f, m, n, bound)| (m >= n).then(|| gen_random(seed, FAMILIES[f], m, n, bound).unwrap()),
    )
}

fn typed_instance(family: GraphFamily, max_m: usize) -> impl Strategy<Value = Instance> {
    (any::<u64>(), 1usize..=max_m, 1usize..=4, 1usize..=4, 1u32..=6).prop_filter_map(
        "m >= n and p <= n",
        move |(seed, m, n, p, bound)| {
            (m >= n && p <= n).then(|| gen_random_with_types(seed, family, m, n, p, bound).unwrap())
        },
    )
}

/// Same instance with vertices renamed by `perm` and agents listed in reverse.
fn relabel(inst: &Instance, perm: &[usize]) -> Instance {
    let g = inst.graph();
    let mut labels = vec![String::new(); g.vertex_count()];
    for (v, label) in g.labels().iter().enumerate() {
        labels[perm[v]] = label.clone();
    }
    let edges = g.edges().iter().map(|&(a, b)| (perm[a], perm[b]));
    let graph = ItemGraph::new(labels, edges).unwrap();
    let agents = inst
        .agents()
        .iter()
        .rev()
        .map(|a| {
            let mut u = vec![Rational::zero(); g.vertex_count()];
            for (v, x) in a.utilities.iter().enumerate() {
                u[perm[v]] = x.clone();
            }
            AgentSpec::new(a.name.clone(), u)
        })
        .collect();
    Instance::new(graph, agents).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ef_complete_implies_proportional_and_prop_implies_mms(inst in small_instance()) {
        let budget = OracleBudget::default();
        let mms = oracle_mms_values(&inst, &budget).unwrap();
        let share = fair_share(inst.agent_count());
        prop_assert!(mms.iter().all(|v| v <= &share));
        for alloc in enumerate_valid_allocations(&inst, &budget).unwrap() {
            if is_complete(&inst, &alloc).unwrap() && is_envy_free(&inst, &alloc).unwrap() {
                prop_assert!(is_proportional(&inst, &alloc).unwrap());
            }
            if is_proportional(&inst, &alloc).unwrap() {
                prop_assert!(is_mms_allocation(&inst, &alloc, &mms).unwrap());
            }
        }
    }

    #[test]
    fn oracle_decisions_are_consistent(inst in small_instance()) {
        let budget = OracleBudget::default();
        let prop = oracle_prop(&inst, &budget).unwrap();
        let mms = oracle_mms_exists(&inst, &budget).unwrap();
        if prop.decision {
            prop_assert!(mms.decision);
            let w = prop.witness.as_ref().unwrap();
            prop_assert!(is_mms_allocation(&inst, w, mms.quotas.as_ref().unwrap()).unwrap());
        }
        let ef = oracle_ef_complete(&inst, &budget).unwrap();
        if let Some(w) = &ef.witness {
            prop_assert!(is_proportional(&inst, w).unwrap());
        }
    }

    #[test]
    fn oracle_is_invariant_under_relabeling(inst in small_instance(), shuffle in any::<u64>()) {
        let m = inst.vertex_count();
        let mut perm: Vec<usize> = (0..m).collect();
        // Deterministic Fisher-Yates driven by the generated word.
        let mut state = shuffle;
        for i in (1..m).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (state >> 33) as usize % (i + 1));
        }
        let other = relabel(&inst, &perm);
        let budget = OracleBudget::default();
        prop_assert_eq!(oracle_prop(&inst, &budget).unwrap().decision, oracle_prop(&other, &budget).unwrap().decision);
        prop_assert_eq!(
            oracle_ef_complete(&inst, &budget).unwrap().decision,
            oracle_ef_complete(&other, &budget).unwrap().decision
        );
        let mut mms = oracle_mms_values(&inst, &budget).unwrap();
        mms.reverse();
        prop_assert_eq!(mms, oracle_mms_values(&other, &budget).unwrap());
    }

    #[test]
    fn bundle_value_is_additive(inst in small_instance(), split in any::<u64>(), agent in 0usize..3) {
        let agent = agent % inst.agent_count();
        let m = inst.vertex_count();
        let a: VertexSet = (0..m).filter(|v| split >> v & 1 == 1).collect();
        let b: VertexSet = (0..m).filter(|v| split >> (v + 16) & 1 == 1 && !a.contains(v)).collect();
        let union: VertexSet = a.union(&b).copied().collect();
        prop_assert_eq!(
            bundle_value(&inst, agent, &union).unwrap(),
            bundle_value(&inst, agent, &a).unwrap() + bundle_value(&inst, agent, &b).unwrap()
        );
    }

    #[test]
    fn path_table_is_monotone(inst in typed_instance(GraphFamily::Path, 7)) {
        let table = path_dp_table(&inst).unwrap();
        for i in 0..table.prefix_count() {
            for code in 0..table.state_count() {
                let counts = table.decode(code);
                if !table.is_reachable(i, &counts) {
                    continue;
                }
                for t in 0..counts.len() {
                    if counts[t] > 0 {
                        let mut lower = counts.clone();
                        lower[t] -= 1;
                        prop_assert!(table.is_reachable(i, &lower));
                    }
                }
                if i + 1 < table.prefix_count() {
                    prop_assert!(table.is_reachable(i + 1, &counts));
                }
            }
        }
    }

    #[test]
    fn ef_witness_matches_guess(inst in typed_instance(GraphFamily::Path, 7)) {
        let (report, guess) = ef_path_typed_with_guess(&inst).unwrap();
        prop_assert_eq!(report.decision, guess.is_some());
        if let Some(guess) = guess {
            let types = compute_type_partition(&inst);
            for (i, value) in report.achieved.iter().enumerate() {
                prop_assert_eq!(value, &guess.targets[types.type_of_agent[i]]);
            }
        }
    }

    #[test]
    fn zero_quotas_never_fail(inst in typed_instance(GraphFamily::Tree, 9)) {
        let n = inst.agent_count();
        let (alloc, trace) = allocate_with_quotas(&inst, &vec![Rational::zero(); n]).unwrap().unwrap();
        prop_assert_eq!(trace.steps.len(), n);
        let last = trace.steps.last().unwrap();
        prop_assert_eq!(last.vertex, None);
        prop_assert!(last.residual.is_empty());
        prop_assert!(is_complete(&inst, &alloc).unwrap());
    }

    #[test]
    fn awarded_subtrees_are_minimal(inst in typed_instance(GraphFamily::Tree, 9)) {
        let (report, trace) = solve_mms_tree_traced(&inst).unwrap();
        let quotas = report.quotas.unwrap();
        let mut active: Vec<usize> = (0..inst.agent_count()).collect();
        let mut residual: VertexSet = (0..inst.vertex_count()).collect();
        let mut awarded_so_far = VertexSet::new();
        for step in &trace.steps {
            prop_assert!(step.awarded.is_disjoint(&awarded_so_far));
            awarded_so_far.extend(step.awarded.iter().copied());
            if let Some(v) = step.vertex {
                let root = *residual.first().unwrap();
                let view = connfair::RootedTreeView::over(inst.graph(), &residual, root).unwrap();
                prop_assert_eq!(&view.descendants[v], &step.awarded);
                prop_assert!(bundle_value(&inst, step.agent, &step.awarded).unwrap() >= quotas[step.agent]);
                for &w in &view.children[v] {
                    for &j in &active {
                        prop_assert!(bundle_value(&inst, j, &view.descendants[w]).unwrap() < quotas[j]);
                    }
                }
            }
            prop_assert!(is_connected_set(inst.graph(), &step.residual));
            active.retain(|&j| j != step.agent);
            residual = step.residual.clone();
        }
    }

    #[test]
    fn auto_and_oracle_agree(inst in small_instance(), problem in 0usize..3) {
        let problem = [Problem::Prop, Problem::EfComplete, Problem::Mms][problem];
        let budget = OracleBudget::default();
        let auto = dispatch(&inst, problem, &budget).unwrap();
        let oracle = solve_with(&inst, problem, Some(Method::Oracle), &budget).unwrap();
        prop_assert_eq!(auto.decision, oracle.decision);
    }

    #[test]
    fn json_round_trip(seed in any::<u64>(), f in 0..FAMILIES.len(), m in 3usize..12, n in 1usize..5) {
        let inst = gen_random(seed, FAMILIES[f], m, n, 30).unwrap();
        prop_assert_eq!(parse_instance(&instance_to_json(&inst), false).unwrap(), inst);
    }

    #[test]
    fn classify_matches_definitions(m in 1usize..=12, bits in any::<u64>()) {
        let pairs: Vec<(usize, usize)> = (0..m).flat_map(|a| (a + 1..m).map(move |b| (a, b))).collect();
        let edges: Vec<(usize, usize)> = pairs.iter().enumerate()
            .filter(|(k, _)| bits.rotate_left(*k as u32 * 7) % 3 == 0)
            .map(|(_, &e)| e)
            .collect();
        let g = ItemGraph::with_default_labels(m, edges.iter().copied()).unwrap();
        let class = classify(&g);
        let degrees: Vec<usize> = (0..m).map(|v| g.degree(v)).collect();
        let e = edges.len();
        let connected = is_connected_set(&g, &(0..m).collect());
        prop_assert_eq!(class.is_connected, connected);
        prop_assert_eq!(class.is_tree, connected && e + 1 == m);
        prop_assert_eq!(class.is_cycle, connected && m >= 3 && degrees.iter().all(|&d| d == 2));
        prop_assert_eq!(class.is_path, class.is_tree && degrees.iter().all(|&d| d <= 2));
        prop_assert_eq!(
            class.is_star,
            class.is_tree && (m <= 2 || degrees.iter().filter(|&&d| d > 1).count() <= 1)
        );
        // Two-colour by brute force.
        let bipartite = (0..1u32 << m).any(|c| edges.iter().all(|&(a, b)| (c >> a & 1) != (c >> b & 1)));
        prop_assert_eq!(class.is_bipartite, bipartite);
    }
}

#[test]
fn connected_sets_are_distinct_and_connected() {
    for (seed, family) in FAMILIES.iter().enumerate() {
        let inst = gen_random(seed as u64, *family, 8, 1, 5).unwrap();
        let sets: Vec<VertexSet> = enumerate_connected_sets(inst.graph()).unwrap().collect();
        let distinct: HashSet<&VertexSet> = sets.iter().collect();
        assert_eq!(distinct.len(), sets.len());
        assert!(sets.iter().all(|s| !s.is_empty() && is_connected_set(inst.graph(), s)));
    }
}

#[test]
fn tree_fpt_agrees_with_star_and_path_solvers() {
    for seed in 0..200u64 {
        let n = 1 + (seed % 4) as usize;
        let m = n + (seed / 4) as usize % (9 - n);
        let star = gen_random(seed, GraphFamily::Star, m, n, 8).unwrap();
        assert_eq!(prop_tree_fpt(&star).unwrap().decision, prop_star(&star).unwrap().decision, "star seed {seed}");
        let path = gen_random_with_types(seed, GraphFamily::Path, m, n, 1 + (seed as usize / 3) % n, 8).unwrap();
        assert_eq!(
            prop_tree_fpt(&path).unwrap().decision,
            prop_path_typed(&path).unwrap().decision,
            "path seed {seed}"
        );
    }
}

#[test]
fn rooted_views_cover_every_vertex() {
    for seed in 0..30 {
        let inst = gen_random(seed, GraphFamily::Tree, 9, 1, 3).unwrap();
        let view = root_tree(inst.graph(), 0).unwrap();
        assert_eq!(view.descendants[0].len(), 9);
        assert_eq!(view.postorder.len(), 9);
        assert_eq!(view.postorder.last(), Some(&0));
        for v in 1..9 {
            let p = view.parent[v].unwrap();
            assert!(view.children[p].contains(&v));
            assert!(view.descendants[p].is_superset(&view.descendants[v]));
        }
    }
}
