use num_traits::Zero;

use crate::error::{input_err, Error, Result};
use crate::graph::{root_tree, RootedTreeView};
use crate::matching::{solve_matching, MatchingProblem, Objective};
use crate::model::{Allocation, Instance, VertexSet};
use crate::rational::{fair_share, Rational};
use crate::report::{Method, SolveReport};

/// Agent sets are bitmasks; the table has `m * n * 2^n` slots.
const MAX_AGENTS: usize = 16;

type AgentMask = u32;

/// What a child subtree contributes to an optimal entry.
#[derive(Debug, Clone, PartialEq, Eq)]
enum ChildUse {
    /// The whole subtree joins `i`'s bundle.
    Whole,
    /// The subtree hosts the agents in the mask; `i`'s bundle may continue into it.
    Hosts(AgentMask),
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Entry {
    value: Rational,
    /// One slot per child of the vertex; empty when `i` takes the whole subtree.
    children: Vec<ChildUse>,
}

/// `A_v[i, S]`: the best value for `i` over valid allocations of `D(v)` to `S + {i}`
/// in which `i` holds `v` and everyone in `S` gets at least `1/n`. `None` is minus infinity.
pub struct TreeDpTable {
    view: RootedTreeView,
    n: usize,
    share: Rational,
    entries: Vec<Option<Entry>>,
}

impl TreeDpTable {
    fn slot(&self, v: usize, i: usize, s: AgentMask) -> usize {
        (v * self.n + i) << self.n | s as usize
    }

    /// `A_v[i, S]` with `S` given as a bitmask over agents (must not contain `i`).
    pub fn value(&self, v: usize, i: usize, s: AgentMask) -> Option<&Rational> {
        self.entries[self.slot(v, i, s)].as_ref().map(|e| &e.value)
    }

    pub fn root(&self) -> usize {
        self.view.root
    }

    fn build(inst: &Instance) -> Result<Self> {
        let n = inst.agent_count();
        if n > MAX_AGENTS {
            return input_err(format!(
                "prop_tree_fpt handles at most {MAX_AGENTS} agents, got {n}"
            ));
        }
        let view = root_tree(inst.graph(), 0)?;
        let m = inst.vertex_count();
        let mut table = TreeDpTable {
            view,
            n,
            share: fair_share(n),
            entries: vec![None; (m * n) << n],
        };
        let postorder = table.view.postorder.clone();
        for v in postorder {
            for i in 0..n {
                for s in 0..(1 as AgentMask) << n {
                    if s & (1 << i) != 0 {
                        continue;
                    }
                    let entry = table.compute(inst, v, i, s)?;
                    let slot = table.slot(v, i, s);
                    table.entries[slot] = entry;
                }
            }
        }
        Ok(table)
    }

    fn subtree_value(&self, inst: &Instance, agent: usize, v: usize) -> Rational {
        inst.value_of(agent, &self.view.descendants[v])
    }

    fn compute(&self, inst: &Instance, v: usize, i: usize, s: AgentMask) -> Result<Option<Entry>> {
        let children = &self.view.children[v];
        if s == 0 {
            return Ok(Some(Entry {
                value: self.subtree_value(inst, i, v),
                children: Vec::new(),
            }));
        }
        if children.is_empty() {
            return Ok(None);
        }
        let members: Vec<usize> = (0..self.n).filter(|&j| s & (1 << j) != 0).collect();
        let mut best: Option<Entry> = None;
        for blocks in set_partitions(&members, children.len()) {
            let dummy_count = children.len() - blocks.len();
            let mut weights: Vec<Vec<Option<Rational>>> = blocks
                .iter()
                .map(|&p| children.iter().map(|&z| self.block_weight(z, i, p)).collect())
                .collect();
            for _ in 0..dummy_count {
                weights.push(
                    children
                        .iter()
                        .map(|&z| Some(self.subtree_value(inst, i, z)))
                        .collect(),
                );
            }
            let problem = MatchingProblem::new(weights, children.len(), Objective::Maximize);
            let Some(matching) = solve_matching(&problem)? else {
                continue;
            };
            let value = inst.utility(i, v) + &matching.total;
            if best.as_ref().is_some_and(|b| b.value >= value) {
                continue;
            }
            let mut uses = vec![ChildUse::Whole; children.len()];
            for (row, &col) in matching.assignment.iter().enumerate() {
                if row < blocks.len() {
                    uses[col] = ChildUse::Hosts(blocks[row]);
                }
            }
            best = Some(Entry {
                value,
                children: uses,
            });
        }
        Ok(best)
    }

    /// `w(P, z)`, or `None` when the agents of `P` cannot all be served inside `D(z)`.
    fn block_weight(&self, z: usize, i: usize, p: AgentMask) -> Option<Rational> {
        if let Some(v) = self.value(z, i, p) {
            return Some(v.clone());
        }
        self.host(z, p).map(|_| Rational::zero())
    }

    /// Lowest `j` in `p` that can hold `z` while the rest of `p` is served below.
    fn host(&self, z: usize, p: AgentMask) -> Option<usize> {
        (0..self.n)
            .filter(|&j| p & (1 << j) != 0)
            .find(|&j| self.value(z, j, p & !(1 << j)).is_some_and(|x| x >= &self.share))
    }

    /// Materializes the allocation behind `A_v[i, S]` into `bundles`.
    fn unfold(&self, v: usize, i: usize, s: AgentMask, bundles: &mut [VertexSet]) -> Result<()> {
        let entry = self.entries[self.slot(v, i, s)]
            .as_ref()
            .ok_or_else(|| Error::Internal("tree DP backtracked into an empty entry".into()))?;
        if s == 0 {
            bundles[i].extend(self.view.descendants[v].iter().copied());
            return Ok(());
        }
        bundles[i].insert(v);
        for (k, &z) in self.view.children[v].iter().enumerate() {
            match entry.children[k] {
                ChildUse::Whole => bundles[i].extend(self.view.descendants[z].iter().copied()),
                ChildUse::Hosts(p) => {
                    if self.value(z, i, p).is_some() {
                        self.unfold(z, i, p, bundles)?;
                    } else {
                        let j = self.host(z, p).ok_or_else(|| {
                            Error::Internal("tree DP matched a block without a host".into())
                        })?;
                        self.unfold(z, j, p & !(1 << j), bundles)?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Set partitions of `members` into at most `max_blocks` blocks, as bitmasks, via
/// restricted growth strings.
fn set_partitions(members: &[usize], max_blocks: usize) -> Vec<Vec<AgentMask>> {
    let mut out = Vec::new();
    let mut blocks: Vec<AgentMask> = Vec::new();
    fn go(
        members: &[usize],
        k: usize,
        max_blocks: usize,
        blocks: &mut Vec<AgentMask>,
        out: &mut Vec<Vec<AgentMask>>,
    ) {
        if k == members.len() {
            out.push(blocks.clone());
            return;
        }
        let bit = 1 << members[k];
        for b in 0..blocks.len() {
            blocks[b] |= bit;
            go(members, k + 1, max_blocks, blocks, out);
            blocks[b] &= !bit;
        }
        if blocks.len() < max_blocks {
            blocks.push(bit);
            go(members, k + 1, max_blocks, blocks, out);
            blocks.pop();
        }
    }
    go(members, 0, max_blocks, &mut blocks, &mut out);
    out
}

/// Fills the DP table of [`prop_tree_fpt`] (rooted at vertex 0).
pub fn tree_dp_table(inst: &Instance) -> Result<TreeDpTable> {
    TreeDpTable::build(inst)
}

/// Proportionality on a tree, fixed-parameter tractable in the number of agents.
///
/// The answer is yes iff `A_r[i, N - {i}] >= 1/n` for some `i`; the lowest such `i` is
/// used for the witness.
pub fn prop_tree_fpt(inst: &Instance) -> Result<SolveReport> {
    let table = TreeDpTable::build(inst)?;
    let n = inst.agent_count();
    let all: AgentMask = ((1u64 << n) - 1) as AgentMask;
    let root = table.root();
    for i in 0..n {
        let rest = all & !(1 << i);
        if table.value(root, i, rest).is_some_and(|x| x >= &table.share) {
            let mut bundles = vec![VertexSet::new(); n];
            table.unfold(root, i, rest, &mut bundles)?;
            return SolveReport::yes(inst, Allocation::new(bundles), Method::TreeFpt);
        }
    }
    Ok(SolveReport::no(Method::TreeFpt))
}
