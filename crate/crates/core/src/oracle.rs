//! Exhaustive ground truth for small instances.
//!
//! Every decision here comes from enumerating connected bundles or connected partitions.
//! Utilities are rescaled per agent to `i128` integers (by the lcm of that agent's
//! denominators) so the inner loops never touch big rationals.

use std::ops::ControlFlow;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::graph::{classify, mask, mask::Mask};
use crate::model::{compute_type_partition, Allocation, Instance, VertexSet};
use crate::rational::{self, fair_share, Rational};
use crate::report::{Method, SolveReport};

/// Size limits for the oracle. Inputs beyond them are refused with [`Error::Budget`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleBudget {
    pub max_items: usize,
    pub max_agents: usize,
    /// Cap on search nodes (bundles tried, partitions visited).
    pub max_enumerated: u64,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            max_items: 10,
            max_agents: 5,
            max_enumerated: 50_000_000,
        }
    }
}

impl OracleBudget {
    pub fn with_limits(max_items: usize, max_agents: usize) -> Self {
        OracleBudget {
            max_items,
            max_agents,
            ..Default::default()
        }
    }

    fn admit(&self, inst: &Instance) -> Result<Meter> {
        if inst.vertex_count() > self.max_items {
            return Err(Error::Budget(format!(
                "{} items exceed the oracle limit of {}",
                inst.vertex_count(),
                self.max_items
            )));
        }
        if inst.agent_count() > self.max_agents {
            return Err(Error::Budget(format!(
                "{} agents exceed the oracle limit of {}",
                inst.agent_count(),
                self.max_agents
            )));
        }
        Ok(Meter {
            used: 0,
            cap: self.max_enumerated,
        })
    }
}

struct Meter {
    used: u64,
    cap: u64,
}

impl Meter {
    fn tick(&mut self) -> Result<()> {
        self.used += 1;
        if self.used > self.cap {
            return Err(Error::Budget(format!(
                "search explored more than {} nodes",
                self.cap
            )));
        }
        Ok(())
    }
}

/// Per-agent integer utilities: `values[i][v] = u_i(v) * scale[i]`.
struct Scaled {
    values: Vec<Vec<i128>>,
    scale: Vec<i128>,
}

impl Scaled {
    fn new(inst: &Instance) -> Result<Self> {
        let mut values = Vec::with_capacity(inst.agent_count());
        let mut scale = Vec::with_capacity(inst.agent_count());
        for i in 0..inst.agent_count() {
            let utilities = inst.utilities(i);
            let lcm = rational::lcm_of_denominators(utilities);
            let s = to_i128(&lcm)?;
            let row = utilities
                .iter()
                .map(|u| to_i128(&(u * Rational::from_integer(lcm.clone())).to_integer()))
                .collect::<Result<Vec<_>>>()?;
            // Keep every subset sum representable.
            row.iter()
                .try_fold(0i128, |acc, &x| acc.checked_add(x))
                .and_then(|t| t.checked_mul(inst.agent_count() as i128 + 1))
                .ok_or_else(|| Error::Budget("utility denominators too large for the oracle".into()))?;
            values.push(row);
            scale.push(s);
        }
        Ok(Scaled { values, scale })
    }

    fn value(&self, agent: usize, set: Mask) -> i128 {
        mask::iter(set).map(|v| self.values[agent][v]).sum()
    }

    /// Smallest scaled value that is `>= threshold`.
    fn threshold(&self, agent: usize, threshold: &Rational) -> Result<i128> {
        let scaled = threshold * Rational::from_integer(BigInt::from(self.scale[agent]));
        to_i128(&scaled.ceil().to_integer())
    }

    fn unscale(&self, agent: usize, value: i128) -> Rational {
        Rational::new(BigInt::from(value), BigInt::from(self.scale[agent]))
    }
}

fn to_i128(x: &BigInt) -> Result<i128> {
    x.to_i128()
        .ok_or_else(|| Error::Budget("utility denominators too large for the oracle".into()))
}

fn to_allocation(bundles: &[Mask]) -> Allocation {
    Allocation::new(bundles.iter().map(|&b| mask::to_set(b)).collect())
}

/// Connected sets `C` with `value(C) >= threshold` such that no connected proper subset
/// reaches the threshold. A connected proper subset exists iff one exists of the form
/// `C \ {x}`, so checking single-vertex removals suffices.
fn minimal_bundles(adj: &[Mask], sets: &[Mask], value: impl Fn(Mask) -> i128, threshold: i128) -> Vec<Mask> {
    if threshold <= 0 {
        return vec![0];
    }
    sets.iter()
        .copied()
        .filter(|&c| value(c) >= threshold)
        .filter(|&c| {
            mask::iter(c).all(|x| {
                let rest = c & !mask::bit(x);
                rest == 0 || !mask::is_connected(adj, rest) || value(rest) < threshold
            })
        })
        .collect()
}

/// Searches for pairwise disjoint bundles, one per agent in index order, drawn from
/// `candidates[i]`. With `symmetric = Some(types)`, agents of the same type must take
/// strictly increasing candidate indices, except that the empty bundle may repeat.
fn assign_disjoint(
    candidates: &[Vec<Mask>],
    symmetric: Option<&[usize]>,
    meter: &mut Meter,
) -> Result<Option<Vec<Mask>>> {
    fn go(
        agent: usize,
        used: Mask,
        candidates: &[Vec<Mask>],
        symmetric: Option<&[usize]>,
        chosen: &mut Vec<(Mask, usize)>,
        meter: &mut Meter,
    ) -> Result<bool> {
        if agent == candidates.len() {
            return Ok(true);
        }
        let start = symmetric
            .and_then(|types| {
                (0..agent)
                    .rev()
                    .find(|&j| types[j] == types[agent])
                    .map(|j| chosen[j].1 + usize::from(chosen[j].0 != 0))
            })
            .unwrap_or(0);
        for (idx, &bundle) in candidates[agent].iter().enumerate().skip(start) {
            if bundle & used != 0 {
                continue;
            }
            meter.tick()?;
            chosen.push((bundle, idx));
            if go(agent + 1, used | bundle, candidates, symmetric, chosen, meter)? {
                return Ok(true);
            }
            chosen.pop();
        }
        Ok(false)
    }
    let mut chosen = Vec::with_capacity(candidates.len());
    if go(0, 0, candidates, symmetric, &mut chosen, meter)? {
        Ok(Some(chosen.into_iter().map(|(b, _)| b).collect()))
    } else {
        Ok(None)
    }
}

/// Does a proportional valid allocation exist?
///
/// Each agent only considers inclusion-minimal connected bundles worth at least `1/n`
/// to her, and same-type agents are symmetry-reduced. Neither pruning changes the
/// answer: shrinking a bundle keeps disjointness, and same-type agents can swap.
pub fn oracle_prop(inst: &Instance, budget: &OracleBudget) -> Result<SolveReport> {
    let mut meter = budget.admit(inst)?;
    let adj = mask::adjacency(inst.graph())?;
    let scaled = Scaled::new(inst)?;
    let sets = mask::connected_sets(&adj, mask::full(inst.vertex_count()));
    let share = fair_share(inst.agent_count());
    let types = compute_type_partition(inst);
    let mut per_type: Vec<Option<Vec<Mask>>> = vec![None; types.type_count];
    let mut candidates = Vec::with_capacity(inst.agent_count());
    for i in 0..inst.agent_count() {
        let t = types.type_of_agent[i];
        if per_type[t].is_none() {
            let thr = scaled.threshold(i, &share)?;
            per_type[t] = Some(minimal_bundles(&adj, &sets, |c| scaled.value(i, c), thr));
        }
        candidates.push(per_type[t].clone().unwrap());
    }
    match assign_disjoint(&candidates, Some(&types.type_of_agent), &mut meter)? {
        Some(bundles) => SolveReport::yes(inst, to_allocation(&bundles), Method::Oracle),
        None => Ok(SolveReport::no(Method::Oracle)),
    }
}

/// [`oracle_prop`] without bundle minimality or symmetry reduction: every agent may take
/// any connected bundle or nothing. Only for cross-checking the pruned search.
pub fn oracle_prop_unpruned(inst: &Instance, budget: &OracleBudget) -> Result<SolveReport> {
    let mut meter = budget.admit(inst)?;
    let adj = mask::adjacency(inst.graph())?;
    let scaled = Scaled::new(inst)?;
    let share = fair_share(inst.agent_count());
    let mut all = vec![0];
    all.extend(mask::connected_sets(&adj, mask::full(inst.vertex_count())));
    let thresholds = (0..inst.agent_count())
        .map(|i| scaled.threshold(i, &share))
        .collect::<Result<Vec<_>>>()?;
    let candidates: Vec<Vec<Mask>> = (0..inst.agent_count())
        .map(|i| {
            all.iter()
                .copied()
                .filter(|&c| scaled.value(i, c) >= thresholds[i])
                .collect()
        })
        .collect();
    match assign_disjoint(&candidates, None, &mut meter)? {
        Some(bundles) => SolveReport::yes(inst, to_allocation(&bundles), Method::Oracle),
        None => Ok(SolveReport::no(Method::Oracle)),
    }
}

/// Does a complete envy-free valid allocation exist?
///
/// Enumerates connected partitions into `k <= n` nonempty parts and assigns parts to
/// distinct agents; leftover agents get empty bundles.
pub fn oracle_ef_complete(inst: &Instance, budget: &OracleBudget) -> Result<SolveReport> {
    ef_search(inst, budget, true)
}

/// [`oracle_ef_complete`] trying every injective assignment, without the argmax and
/// symmetry filters.
pub fn oracle_ef_complete_unpruned(inst: &Instance, budget: &OracleBudget) -> Result<SolveReport> {
    ef_search(inst, budget, false)
}

fn ef_search(inst: &Instance, budget: &OracleBudget, pruned: bool) -> Result<SolveReport> {
    let mut meter = budget.admit(inst)?;
    let scaled = Scaled::new(inst)?;
    let types = compute_type_partition(inst);
    let n = inst.agent_count();
    let m = inst.vertex_count();
    for k in 1..=n.min(m) {
        let mut error = None;
        let found = mask::for_each_connected_partition(inst.graph(), k, |parts| {
            if let Err(e) = meter.tick() {
                error = Some(e);
                return ControlFlow::Break(None);
            }
            let values: Vec<Vec<i128>> = (0..n)
                .map(|i| parts.iter().map(|&p| scaled.value(i, p)).collect())
                .collect();
            let owner = if pruned {
                ef_assign_pruned(&values, &types.type_of_agent)
            } else {
                ef_assign_exhaustive(&values)
            };
            match owner {
                Some(owner) => {
                    let mut bundles = vec![0; n];
                    for (p, &i) in owner.iter().enumerate() {
                        bundles[i] = parts[p];
                    }
                    ControlFlow::Break(Some(bundles))
                }
                None => ControlFlow::Continue(()),
            }
        })?;
        if let Some(e) = error {
            return Err(e);
        }
        if let Some(Some(bundles)) = found {
            return SolveReport::yes(inst, to_allocation(&bundles), Method::Oracle);
        }
    }
    Ok(SolveReport::no(Method::Oracle))
}

/// Assigns parts to agents so that each owner values her part maximally among all parts
/// and every agent left without a part values every part at 0. Returns `owner[part]`.
fn ef_assign_pruned(values: &[Vec<i128>], type_of_agent: &[usize]) -> Option<Vec<usize>> {
    let n = values.len();
    let k = values[0].len();
    let best: Vec<i128> = values.iter().map(|row| *row.iter().max().unwrap()).collect();
    if best.iter().filter(|&&b| b > 0).count() > k {
        return None;
    }
    fn go(
        part: usize,
        values: &[Vec<i128>],
        best: &[i128],
        types: &[usize],
        taken: &mut Vec<bool>,
        owner: &mut Vec<usize>,
    ) -> bool {
        let n = values.len();
        if part == values[0].len() {
            return (0..n).all(|i| taken[i] || best[i] == 0);
        }
        let mut tried_types = Vec::new();
        for i in 0..n {
            if taken[i] || values[i][part] != best[i] || tried_types.contains(&types[i]) {
                continue;
            }
            tried_types.push(types[i]);
            taken[i] = true;
            owner.push(i);
            if go(part + 1, values, best, types, taken, owner) {
                return true;
            }
            owner.pop();
            taken[i] = false;
        }
        false
    }
    let mut taken = vec![false; n];
    let mut owner = Vec::with_capacity(k);
    go(0, values, &best, type_of_agent, &mut taken, &mut owner).then_some(owner)
}

fn ef_assign_exhaustive(values: &[Vec<i128>]) -> Option<Vec<usize>> {
    use itertools::Itertools;
    let n = values.len();
    let k = values[0].len();
    (0..n).permutations(k).find(|owner| {
        (0..n).all(|i| {
            let own = owner.iter().position(|&o| o == i).map_or(0, |p| values[i][p]);
            values[i].iter().all(|&v| v <= own)
        })
    })
}

fn require_partitionable(inst: &Instance) -> Result<()> {
    if !classify(inst.graph()).is_connected {
        return Err(Error::Input(
            "maximin shares are undefined on a disconnected item graph".into(),
        ));
    }
    if inst.vertex_count() < inst.agent_count() {
        return Err(Error::Input(format!(
            "maximin shares need at least as many items ({}) as agents ({})",
            inst.vertex_count(),
            inst.agent_count()
        )));
    }
    Ok(())
}

/// Exact `mms_i` for every agent, by enumerating connected `n`-partitions of the graph.
pub fn oracle_mms_values(inst: &Instance, budget: &OracleBudget) -> Result<Vec<Rational>> {
    let mut meter = budget.admit(inst)?;
    require_partitionable(inst)?;
    let scaled = Scaled::new(inst)?;
    let n = inst.agent_count();
    let mut best: Vec<Option<i128>> = vec![None; n];
    let mut error = None;
    mask::for_each_connected_partition(inst.graph(), n, |parts| {
        if let Err(e) = meter.tick() {
            error = Some(e);
            return ControlFlow::Break(());
        }
        for (i, slot) in best.iter_mut().enumerate() {
            let worst = parts.iter().map(|&p| scaled.value(i, p)).min().unwrap();
            if slot.is_none_or(|b| worst > b) {
                *slot = Some(worst);
            }
        }
        ControlFlow::Continue(())
    })?;
    if let Some(e) = error {
        return Err(e);
    }
    let share = fair_share(n);
    let values: Vec<Rational> = best
        .into_iter()
        .enumerate()
        .map(|(i, b)| scaled.unscale(i, b.expect("at least one partition exists")))
        .collect();
    if let Some(i) = values.iter().position(|v| *v > share) {
        return Err(Error::Internal(format!(
            "maximin share of agent {i} exceeds 1/n"
        )));
    }
    Ok(values)
}

/// `agent`'s maximin share on the subgraph induced by `vertices`, split into `parts`
/// connected pieces. Utilities are used as given (they need not sum to 1 there).
pub fn mms_on_subgraph(
    inst: &Instance,
    agent: usize,
    vertices: &VertexSet,
    parts: usize,
    budget: &OracleBudget,
) -> Result<Rational> {
    let mut meter = budget.admit(inst)?;
    if agent >= inst.agent_count() {
        return Err(Error::Input(format!("agent index {agent} out of range")));
    }
    let adj = mask::adjacency(inst.graph())?;
    let allowed = mask::from_set(vertices);
    if parts == 0 || parts > vertices.len() || !mask::is_connected(&adj, allowed) {
        return Err(Error::Input(format!(
            "cannot split {} connected vertices into {parts} parts",
            vertices.len()
        )));
    }
    let scaled = Scaled::new(inst)?;
    let mut best: Option<i128> = None;
    let mut error = None;
    let _ = mask::for_each_partition_within(&adj, allowed, parts, |split| {
        if let Err(e) = meter.tick() {
            error = Some(e);
            return ControlFlow::Break(());
        }
        let worst = split.iter().map(|&p| scaled.value(agent, p)).min().unwrap();
        if best.is_none_or(|b| worst > b) {
            best = Some(worst);
        }
        ControlFlow::Continue(())
    });
    if let Some(e) = error {
        return Err(e);
    }
    Ok(scaled.unscale(agent, best.expect("a connected set splits into parts <= size pieces")))
}

/// Does an MMS allocation exist? Quotas in the report are the oracle's maximin shares.
pub fn oracle_mms_exists(inst: &Instance, budget: &OracleBudget) -> Result<SolveReport> {
    let mms = oracle_mms_values(inst, budget)?;
    let mut meter = budget.admit(inst)?;
    let adj = mask::adjacency(inst.graph())?;
    let scaled = Scaled::new(inst)?;
    let sets = mask::connected_sets(&adj, mask::full(inst.vertex_count()));
    let types = compute_type_partition(inst);
    let candidates = (0..inst.agent_count())
        .map(|i| {
            let thr = scaled.threshold(i, &mms[i])?;
            Ok(minimal_bundles(&adj, &sets, |c| scaled.value(i, c), thr))
        })
        .collect::<Result<Vec<_>>>()?;
    let report = match assign_disjoint(&candidates, Some(&types.type_of_agent), &mut meter)? {
        Some(bundles) => SolveReport::yes(inst, to_allocation(&bundles), Method::Oracle)?,
        None => SolveReport::no(Method::Oracle),
    };
    Ok(report.with_quotas(mms))
}

/// [`oracle_mms_exists`] over all connected bundles (and the empty bundle) per agent.
pub fn oracle_mms_exists_unpruned(inst: &Instance, budget: &OracleBudget) -> Result<SolveReport> {
    let mms = oracle_mms_values(inst, budget)?;
    let mut meter = budget.admit(inst)?;
    let adj = mask::adjacency(inst.graph())?;
    let scaled = Scaled::new(inst)?;
    let mut all = vec![0];
    all.extend(mask::connected_sets(&adj, mask::full(inst.vertex_count())));
    let candidates = (0..inst.agent_count())
        .map(|i| {
            let thr = scaled.threshold(i, &mms[i])?;
            Ok(all.iter().copied().filter(|&c| scaled.value(i, c) >= thr).collect())
        })
        .collect::<Result<Vec<Vec<Mask>>>>()?;
    let report = match assign_disjoint(&candidates, None, &mut meter)? {
        Some(bundles) => SolveReport::yes(inst, to_allocation(&bundles), Method::Oracle)?,
        None => SolveReport::no(Method::Oracle),
    };
    Ok(report.with_quotas(mms))
}

/// Every valid allocation in which each agent holds a connected bundle or nothing.
/// Exponential; intended for exhaustive property checks on tiny instances.
pub fn enumerate_valid_allocations(inst: &Instance, budget: &OracleBudget) -> Result<Vec<Allocation>> {
    let mut meter = budget.admit(inst)?;
    let adj = mask::adjacency(inst.graph())?;
    let mut options = vec![0];
    options.extend(mask::connected_sets(&adj, mask::full(inst.vertex_count())));
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(inst.agent_count());
    fn go(
        n: usize,
        used: Mask,
        options: &[Mask],
        current: &mut Vec<Mask>,
        out: &mut Vec<Allocation>,
        meter: &mut Meter,
    ) -> Result<()> {
        if current.len() == n {
            meter.tick()?;
            out.push(to_allocation(current));
            return Ok(());
        }
        for &b in options {
            if b & used == 0 {
                current.push(b);
                go(n, used | b, options, current, out, meter)?;
                current.pop();
            }
        }
        Ok(())
    }
    go(inst.agent_count(), 0, &options, &mut current, &mut out, &mut meter)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{fixture_cycle8, gen_random, GraphFamily};
    use crate::graph::ItemGraph;
    use crate::model::{is_envy_free, is_complete, is_mms_allocation, is_proportional, is_valid, AgentSpec};
    use crate::rational::{int, ratio};

    fn uniform_path(m: usize, n: usize) -> Instance {
        let agents = (0..n)
            .map(|i| AgentSpec::new(format!("a{i}"), vec![ratio(1, m as i64); m]))
            .collect();
        Instance::new(ItemGraph::path(m), agents).unwrap()
    }

    fn path2(u: [Rational; 2]) -> Instance {
        let agents = vec![AgentSpec::new("a", u.to_vec()), AgentSpec::new("b", u.to_vec())];
        Instance::new(ItemGraph::path(2), agents).unwrap()
    }

    #[test]
    fn same_type_agents_share_the_empty_bundle() {
        let half = [int(0), ratio(1, 2), ratio(1, 2), int(0)];
        let agents = vec![
            AgentSpec::new("a1", half.to_vec()),
            AgentSpec::new("a2", half.to_vec()),
            AgentSpec::new("a3", vec![int(0), ratio(1, 3), ratio(1, 3), ratio(1, 3)]),
        ];
        let inst = Instance::new(ItemGraph::path(4), agents).unwrap();
        let budget = OracleBudget::default();
        assert_eq!(oracle_mms_values(&inst, &budget).unwrap(), vec![int(0), int(0), ratio(1, 3)]);
        assert!(oracle_mms_exists(&inst, &budget).unwrap().decision);
        assert!(oracle_mms_exists_unpruned(&inst, &budget).unwrap().decision);
    }

    #[test]
    fn prop_examples() {
        let budget = OracleBudget::default();
        assert!(!oracle_prop(&fixture_cycle8(), &budget).unwrap().decision);
        let single = uniform_path(4, 1);
        let report = oracle_prop(&single, &budget).unwrap();
        assert!(report.decision);
        assert!(is_proportional(&single, report.witness.as_ref().unwrap()).unwrap());
    }

    #[test]
    fn ef_examples() {
        let budget = OracleBudget::default();
        assert!(!oracle_ef_complete(&path2([int(1), int(0)]), &budget).unwrap().decision);
        let half = path2([ratio(1, 2), ratio(1, 2)]);
        let report = oracle_ef_complete(&half, &budget).unwrap();
        assert!(report.decision);
        let w = report.witness.unwrap();
        assert!(is_complete(&half, &w).unwrap() && is_envy_free(&half, &w).unwrap());
    }

    #[test]
    fn mms_examples() {
        let budget = OracleBudget::default();
        let quarter = vec![ratio(1, 4); 4];
        assert_eq!(oracle_mms_values(&fixture_cycle8(), &budget).unwrap(), quarter);
        let third = uniform_path(3, 2);
        assert_eq!(oracle_mms_values(&third, &budget).unwrap(), vec![ratio(1, 3); 2]);
        assert_eq!(oracle_mms_values(&uniform_path(3, 1), &budget).unwrap(), vec![int(1)]);

        let report = oracle_mms_exists(&fixture_cycle8(), &budget).unwrap();
        assert!(!report.decision);
        assert_eq!(report.quotas, Some(quarter));
        assert!(oracle_mms_exists(&uniform_path(3, 1), &budget).unwrap().decision);
    }

    #[test]
    fn mms_rejects_undefined_cases() {
        let budget = OracleBudget::default();
        assert!(matches!(oracle_mms_values(&uniform_path(2, 3), &budget), Err(Error::Input(_))));
        let g = ItemGraph::with_default_labels(3, [(0, 1)]).unwrap();
        let inst = Instance::new(g, vec![AgentSpec::new("a", vec![ratio(1, 3); 3])]).unwrap();
        assert!(matches!(oracle_mms_values(&inst, &budget), Err(Error::Input(_))));
    }

    #[test]
    fn budget_is_enforced() {
        let inst = uniform_path(11, 2);
        assert!(matches!(oracle_prop(&inst, &OracleBudget::default()), Err(Error::Budget(_))));
        let tight = OracleBudget { max_enumerated: 3, ..OracleBudget::default() };
        assert!(matches!(oracle_mms_values(&fixture_cycle8(), &tight), Err(Error::Budget(_))));
    }

    #[test]
    fn subgraph_mms_matches_whole_graph() {
        let budget = OracleBudget::default();
        let inst = fixture_cycle8();
        let all: VertexSet = (0..8).collect();
        for i in 0..4 {
            assert_eq!(mms_on_subgraph(&inst, i, &all, 4, &budget).unwrap(), ratio(1, 4));
        }
        let arc: VertexSet = (0..4).collect();
        // Arc v1..v4 for agent 1 is worth (1,4,4,1)/20; best 2-split is {v1,v2}|{v3,v4}.
        assert_eq!(mms_on_subgraph(&inst, 0, &arc, 2, &budget).unwrap(), ratio(1, 4));
        assert!(mms_on_subgraph(&inst, 0, &arc, 5, &budget).is_err());
    }

    #[test]
    fn pruning_preserves_decisions() {
        let budget = OracleBudget::default();
        for seed in 0..60u64 {
            let family = [GraphFamily::Path, GraphFamily::Star, GraphFamily::Cycle, GraphFamily::Connected][seed as usize % 4];
            let m = 3 + (seed as usize % 3);
            let n = 1 + (seed as usize % 3);
            let inst = gen_random(seed, family, m, n, 4).unwrap();
            let a = oracle_prop(&inst, &budget).unwrap();
            let b = oracle_prop_unpruned(&inst, &budget).unwrap();
            assert_eq!(a.decision, b.decision, "prop seed {seed}");
            let a = oracle_ef_complete(&inst, &budget).unwrap();
            let b = oracle_ef_complete_unpruned(&inst, &budget).unwrap();
            assert_eq!(a.decision, b.decision, "ef seed {seed}");
            if n <= m {
                let a = oracle_mms_exists(&inst, &budget).unwrap();
                let b = oracle_mms_exists_unpruned(&inst, &budget).unwrap();
                assert_eq!(a.decision, b.decision, "mms seed {seed}");
            }
        }
    }

    #[test]
    fn witnesses_pass_verifiers() {
        let budget = OracleBudget::default();
        for seed in 0..40u64 {
            let inst = gen_random(seed, GraphFamily::Tree, 6, 1 + seed as usize % 4, 5).unwrap();
            let mms = oracle_mms_values(&inst, &budget).unwrap();
            let prop = oracle_prop(&inst, &budget).unwrap();
            if let Some(w) = &prop.witness {
                assert!(is_valid(&inst, w).unwrap() && is_proportional(&inst, w).unwrap());
                assert!(is_mms_allocation(&inst, w, &mms).unwrap());
                assert!(oracle_mms_exists(&inst, &budget).unwrap().decision);
            }
            let ef = oracle_ef_complete(&inst, &budget).unwrap();
            if let Some(w) = &ef.witness {
                assert!(is_valid(&inst, w).unwrap() && is_complete(&inst, w).unwrap());
                assert!(is_envy_free(&inst, w).unwrap() && is_proportional(&inst, w).unwrap());
            }
        }
    }

    #[test]
    fn enumerates_all_valid_allocations() {
        // Path of 2, two agents: each bundle in {∅, {v1}, {v2}, {v1,v2}}, disjoint.
        let inst = path2([ratio(1, 2), ratio(1, 2)]);
        let all = enumerate_valid_allocations(&inst, &OracleBudget::default()).unwrap();
        assert_eq!(all.len(), 9);
    }
}
