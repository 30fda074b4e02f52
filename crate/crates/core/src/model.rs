//! Instances, allocations and the polynomial-time verifiers for every solution concept.

use std::collections::{BTreeSet, HashMap, HashSet};

use num_traits::{One, Zero};

use crate::error::{input_err, Result};
use crate::graph::{is_connected_set, ItemGraph};
use crate::rational::{self, fair_share, Rational};

/// A set of vertex indices.
pub type VertexSet = BTreeSet<usize>;

/// One agent: a display name plus a utility per vertex, indexed like the graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AgentSpec {
    pub name: String,
    pub utilities: Vec<Rational>,
}

impl AgentSpec {
    pub fn new(name: impl Into<String>, utilities: Vec<Rational>) -> Self {
        AgentSpec {
            name: name.into(),
            utilities,
        }
    }
}

/// An item graph together with agents whose nonnegative utilities each sum to exactly 1.
///
/// Immutable once built; every constructor validates the invariants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    graph: ItemGraph,
    agents: Vec<AgentSpec>,
}

impl Instance {
    pub fn new(graph: ItemGraph, agents: Vec<AgentSpec>) -> Result<Self> {
        validate_agents(&graph, &agents, true)?;
        Ok(Instance { graph, agents })
    }

    /// Divides each agent's utilities by their sum before validating.
    ///
    /// This is the only place rescaling happens; [`Instance::new`] never normalizes.
    pub fn normalized(graph: ItemGraph, mut agents: Vec<AgentSpec>) -> Result<Self> {
        validate_agents(&graph, &agents, false)?;
        for agent in &mut agents {
            let total = rational::sum(&agent.utilities);
            if total.is_zero() {
                return input_err(format!("agent {:?} values every item at 0", agent.name));
            }
            for u in &mut agent.utilities {
                *u = &*u / &total;
            }
        }
        Instance::new(graph, agents)
    }

    pub fn graph(&self) -> &ItemGraph {
        &self.graph
    }

    pub fn agents(&self) -> &[AgentSpec] {
        &self.agents
    }

    pub fn agent_count(&self) -> usize {
        self.agents.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn utilities(&self, agent: usize) -> &[Rational] {
        &self.agents[agent].utilities
    }

    pub fn utility(&self, agent: usize, vertex: usize) -> &Rational {
        &self.agents[agent].utilities[vertex]
    }

    pub fn agent_index(&self, name: &str) -> Option<usize> {
        self.agents.iter().position(|a| a.name == name)
    }

    /// Unchecked sum of `agent`'s utilities over `items`.
    pub(crate) fn value_of<'a>(
        &self,
        agent: usize,
        items: impl IntoIterator<Item = &'a usize>,
    ) -> Rational {
        let u = self.utilities(agent);
        items.into_iter().fold(Rational::zero(), |acc, &v| acc + &u[v])
    }

    /// Same graph, agents replaced by `copies` clones of `agent` (named `"<name>#k"`).
    pub fn clone_agent(&self, agent: usize, copies: usize) -> Result<Instance> {
        if agent >= self.agent_count() {
            return input_err(format!("agent index {agent} out of range"));
        }
        let spec = &self.agents[agent];
        let agents = (0..copies)
            .map(|k| AgentSpec::new(format!("{}#{}", spec.name, k + 1), spec.utilities.clone()))
            .collect();
        Instance::new(self.graph.clone(), agents)
    }
}

fn validate_agents(graph: &ItemGraph, agents: &[AgentSpec], require_unit_sum: bool) -> Result<()> {
    if agents.is_empty() {
        return input_err("an instance needs at least one agent");
    }
    let m = graph.vertex_count();
    let mut names = HashSet::new();
    for agent in agents {
        if !names.insert(agent.name.as_str()) {
            return input_err(format!("duplicate agent name {:?}", agent.name));
        }
        if agent.utilities.len() != m {
            return input_err(format!(
                "agent {:?} has {} utilities for {} vertices",
                agent.name,
                agent.utilities.len(),
                m
            ));
        }
        if let Some(v) = agent.utilities.iter().position(rational::is_negative) {
            return input_err(format!(
                "agent {:?} has negative utility for vertex {:?}",
                agent.name,
                graph.label(v)
            ));
        }
        if require_unit_sum {
            let total = rational::sum(&agent.utilities);
            if !total.is_one() {
                return input_err(format!(
                    "utilities of agent {:?} sum to {}, expected 1",
                    agent.name,
                    rational::format(&total)
                ));
            }
        }
    }
    Ok(())
}

/// Per-agent bundles. Bundles may be empty; validity is checked by [`is_valid`], not here.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Allocation {
    pub bundles: Vec<VertexSet>,
}

impl Allocation {
    pub fn new(bundles: Vec<VertexSet>) -> Self {
        Allocation { bundles }
    }

    /// Every agent gets nothing.
    pub fn empty(agents: usize) -> Self {
        Allocation {
            bundles: vec![VertexSet::new(); agents],
        }
    }

    pub fn bundle(&self, agent: usize) -> &VertexSet {
        &self.bundles[agent]
    }

    pub fn agent_count(&self) -> usize {
        self.bundles.len()
    }
}

/// Grouping of agents by identical utility vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AgentTypePartition {
    pub type_of_agent: Vec<usize>,
    pub type_count: usize,
    pub agents_per_type: Vec<usize>,
}

impl AgentTypePartition {
    /// Agents of type `t`, ascending.
    pub fn members(&self, t: usize) -> Vec<usize> {
        (0..self.type_of_agent.len())
            .filter(|&i| self.type_of_agent[i] == t)
            .collect()
    }

    /// Lowest-index agent of each type, in type order.
    pub fn representatives(&self) -> Vec<usize> {
        (0..self.type_count)
            .map(|t| self.type_of_agent.iter().position(|&x| x == t).unwrap())
            .collect()
    }
}

/// Types are numbered by first occurrence in agent order.
pub fn compute_type_partition(inst: &Instance) -> AgentTypePartition {
    let mut seen: HashMap<&[Rational], usize> = HashMap::new();
    let mut type_of_agent = Vec::with_capacity(inst.agent_count());
    let mut agents_per_type = Vec::new();
    for agent in inst.agents() {
        let next = seen.len();
        let t = *seen.entry(agent.utilities.as_slice()).or_insert(next);
        if t == agents_per_type.len() {
            agents_per_type.push(0);
        }
        agents_per_type[t] += 1;
        type_of_agent.push(t);
    }
    AgentTypePartition {
        type_of_agent,
        type_count: agents_per_type.len(),
        agents_per_type,
    }
}

fn check_agent(inst: &Instance, agent: usize) -> Result<()> {
    if agent >= inst.agent_count() {
        return input_err(format!(
            "agent index {agent} out of range (n = {})",
            inst.agent_count()
        ));
    }
    Ok(())
}

fn check_items(inst: &Instance, items: &VertexSet) -> Result<()> {
    match items.iter().next_back() {
        Some(&v) if v >= inst.vertex_count() => input_err(format!(
            "vertex index {v} out of range (m = {})",
            inst.vertex_count()
        )),
        _ => Ok(()),
    }
}

fn check_shape(inst: &Instance, alloc: &Allocation) -> Result<()> {
    if alloc.agent_count() != inst.agent_count() {
        return input_err(format!(
            "allocation has {} bundles for {} agents",
            alloc.agent_count(),
            inst.agent_count()
        ));
    }
    alloc.bundles.iter().try_for_each(|b| check_items(inst, b))
}

/// Exact additive value of `items` to `agent`.
pub fn bundle_value(inst: &Instance, agent: usize, items: &VertexSet) -> Result<Rational> {
    check_agent(inst, agent)?;
    check_items(inst, items)?;
    Ok(inst.value_of(agent, items))
}

/// Each agent's value for her own bundle.
pub fn achieved_values(inst: &Instance, alloc: &Allocation) -> Result<Vec<Rational>> {
    check_shape(inst, alloc)?;
    Ok((0..inst.agent_count())
        .map(|i| inst.value_of(i, alloc.bundle(i)))
        .collect())
}

/// Pairwise disjoint bundles, each connected. Empty bundles count as connected.
pub fn is_valid(inst: &Instance, alloc: &Allocation) -> Result<bool> {
    check_shape(inst, alloc)?;
    let mut owner = vec![false; inst.vertex_count()];
    for bundle in &alloc.bundles {
        for &v in bundle {
            if std::mem::replace(&mut owner[v], true) {
                return Ok(false);
            }
        }
        if !is_connected_set(inst.graph(), bundle) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Every agent's own bundle is worth at least `1/n` to her.
pub fn is_proportional(inst: &Instance, alloc: &Allocation) -> Result<bool> {
    let threshold = fair_share(inst.agent_count());
    Ok(achieved_values(inst, alloc)?
        .iter()
        .all(|value| *value >= threshold))
}

/// No agent values another bundle strictly above her own.
pub fn is_envy_free(inst: &Instance, alloc: &Allocation) -> Result<bool> {
    check_shape(inst, alloc)?;
    let n = inst.agent_count();
    for i in 0..n {
        let own = inst.value_of(i, alloc.bundle(i));
        for j in (0..n).filter(|&j| j != i) {
            if inst.value_of(i, alloc.bundle(j)) > own {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The bundles cover every vertex.
pub fn is_complete(inst: &Instance, alloc: &Allocation) -> Result<bool> {
    check_shape(inst, alloc)?;
    let covered: VertexSet = alloc.bundles.iter().flatten().copied().collect();
    Ok(covered.len() == inst.vertex_count())
}

/// Valid, and every agent reaches her entry in `mms`.
pub fn is_mms_allocation(inst: &Instance, alloc: &Allocation, mms: &[Rational]) -> Result<bool> {
    if mms.len() != inst.agent_count() {
        return input_err(format!(
            "{} maximin shares for {} agents",
            mms.len(),
            inst.agent_count()
        ));
    }
    if !is_valid(inst, alloc)? {
        return Ok(false);
    }
    Ok(achieved_values(inst, alloc)?
        .iter()
        .zip(mms)
        .all(|(value, share)| value >= share))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::fixture_cycle8;
    use crate::rational::{int, ratio};

    fn set(items: &[usize]) -> VertexSet {
        items.iter().copied().collect()
    }

    fn p1() -> Allocation {
        Allocation::new(vec![set(&[0, 1]), set(&[2, 3]), set(&[4, 5]), set(&[6, 7])])
    }

    fn path3(utils: [Rational; 3], agents: usize) -> Instance {
        let g = ItemGraph::path(3);
        let specs = (0..agents)
            .map(|i| AgentSpec::new(format!("a{}", i + 1), utils.to_vec()))
            .collect();
        Instance::new(g, specs).unwrap()
    }

    #[test]
    fn bundle_values_on_cycle8() {
        let inst = fixture_cycle8();
        assert_eq!(bundle_value(&inst, 0, &set(&[0, 1])).unwrap(), ratio(1, 4));
        assert_eq!(bundle_value(&inst, 2, &set(&[4, 5])).unwrap(), ratio(1, 5));
        assert_eq!(bundle_value(&inst, 3, &set(&[])).unwrap(), int(0));
        assert!(bundle_value(&inst, 4, &set(&[])).is_err());
        assert!(bundle_value(&inst, 0, &set(&[8])).is_err());
    }

    #[test]
    fn validity() {
        let inst = fixture_cycle8();
        assert!(is_valid(&inst, &p1()).unwrap());
        assert!(is_valid(&inst, &Allocation::empty(4)).unwrap());
        let overlapping = Allocation::new(vec![set(&[0, 1]), set(&[1, 2]), set(&[]), set(&[])]);
        assert!(!is_valid(&inst, &overlapping).unwrap());
        assert!(is_valid(&inst, &Allocation::empty(3)).is_err());

        let path = path3([ratio(1, 3), ratio(1, 3), ratio(1, 3)], 1);
        assert!(!is_valid(&path, &Allocation::new(vec![set(&[0, 2])])).unwrap());
    }

    #[test]
    fn proportionality() {
        let inst = fixture_cycle8();
        assert!(!is_proportional(&inst, &p1()).unwrap());

        let single = path3([ratio(1, 3), ratio(1, 3), ratio(1, 3)], 1);
        assert!(is_proportional(&single, &Allocation::new(vec![set(&[0, 1, 2])])).unwrap());

        let pair = path3([ratio(1, 2), int(0), ratio(1, 2)], 2);
        let alloc = Allocation::new(vec![set(&[0]), set(&[1, 2])]);
        assert!(is_proportional(&pair, &alloc).unwrap());
    }

    #[test]
    fn envy_freeness() {
        let inst = fixture_cycle8();
        assert!(is_envy_free(&inst, &Allocation::empty(4)).unwrap());

        let g = ItemGraph::path(2);
        let agents = vec![
            AgentSpec::new("a", vec![int(1), int(0)]),
            AgentSpec::new("b", vec![int(1), int(0)]),
        ];
        let inst = Instance::new(g, agents).unwrap();
        let alloc = Allocation::new(vec![set(&[0]), set(&[1])]);
        assert!(!is_envy_free(&inst, &alloc).unwrap());

        let single = path3([ratio(1, 3), ratio(1, 3), ratio(1, 3)], 1);
        assert!(is_envy_free(&single, &Allocation::new(vec![set(&[1])])).unwrap());
    }

    #[test]
    fn completeness() {
        let inst = fixture_cycle8();
        assert!(is_complete(&inst, &p1()).unwrap());
        assert!(!is_complete(&inst, &Allocation::empty(4)).unwrap());
        let g = ItemGraph::path(2);
        let agents = vec![
            AgentSpec::new("a", vec![ratio(1, 2), ratio(1, 2)]),
            AgentSpec::new("b", vec![ratio(1, 2), ratio(1, 2)]),
        ];
        let inst = Instance::new(g, agents).unwrap();
        assert!(is_complete(&inst, &Allocation::new(vec![set(&[0]), set(&[1])])).unwrap());
    }

    #[test]
    fn mms_allocation_check() {
        let inst = fixture_cycle8();
        let quarter = vec![ratio(1, 4); 4];
        assert!(!is_mms_allocation(&inst, &p1(), &quarter).unwrap());
        assert!(is_mms_allocation(&inst, &Allocation::empty(4), &vec![int(0); 4]).unwrap());
        assert!(is_mms_allocation(&inst, &p1(), &quarter[..3]).is_err());

        let path = path3([ratio(1, 3), ratio(1, 3), ratio(1, 3)], 2);
        let alloc = Allocation::new(vec![set(&[0]), set(&[1, 2])]);
        assert!(is_mms_allocation(&path, &alloc, &[ratio(1, 3), ratio(1, 3)]).unwrap());
    }

    #[test]
    fn type_partition() {
        let types = compute_type_partition(&fixture_cycle8());
        assert_eq!(types.type_count, 2);
        assert_eq!(types.type_of_agent, vec![0, 0, 1, 1]);
        assert_eq!(types.agents_per_type, vec![2, 2]);
        assert_eq!(types.members(1), vec![2, 3]);
        assert_eq!(types.representatives(), vec![0, 2]);

        let single = path3([ratio(1, 3), ratio(1, 3), ratio(1, 3)], 1);
        assert_eq!(compute_type_partition(&single).type_count, 1);

        let g = ItemGraph::path(2);
        let agents = vec![
            AgentSpec::new("a", vec![int(1), int(0)]),
            AgentSpec::new("b", vec![int(0), int(1)]),
            AgentSpec::new("c", vec![ratio(1, 2), ratio(1, 2)]),
        ];
        let inst = Instance::new(g, agents).unwrap();
        assert_eq!(compute_type_partition(&inst).type_count, 3);
    }

    #[test]
    fn ingestion_rejects_bad_utilities() {
        let g = ItemGraph::path(2);
        let not_unit = vec![AgentSpec::new("a", vec![ratio(1, 2), ratio(1, 3)])];
        assert!(Instance::new(g.clone(), not_unit.clone()).is_err());
        assert!(Instance::normalized(g.clone(), not_unit).is_ok());

        let zero = vec![AgentSpec::new("a", vec![int(0), int(0)])];
        assert!(Instance::new(g.clone(), zero.clone()).is_err());
        assert!(Instance::normalized(g.clone(), zero).is_err());

        let negative = vec![AgentSpec::new("a", vec![int(2), int(-1)])];
        assert!(Instance::new(g.clone(), negative).is_err());

        let short = vec![AgentSpec::new("a", vec![int(1)])];
        assert!(Instance::new(g.clone(), short).is_err());

        let dup = vec![
            AgentSpec::new("a", vec![int(1), int(0)]),
            AgentSpec::new("a", vec![int(1), int(0)]),
        ];
        assert!(Instance::new(g.clone(), dup).is_err());
        assert!(Instance::new(g, vec![]).is_err());
    }

    #[test]
    fn normalize_divides_by_sum() {
        let g = ItemGraph::path(2);
        let inst =
            Instance::normalized(g, vec![AgentSpec::new("a", vec![int(3), int(1)])]).unwrap();
        assert_eq!(inst.utilities(0), &[ratio(3, 4), ratio(1, 4)]);
    }
}
