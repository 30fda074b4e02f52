use num_traits::Zero;

use crate::error::{input_err, Result};
use crate::graph::path_order;
use crate::model::{compute_type_partition, Allocation, AgentTypePartition, Instance, VertexSet};
use crate::rational::{fair_share, Rational};
use crate::report::{Method, SolveReport};

fn require_path(inst: &Instance, who: &str) -> Result<Vec<usize>> {
    match path_order(inst.graph()) {
        Some(order) => Ok(order),
        None => input_err(format!("{who} needs a path graph")),
    }
}

/// Proportionality on a path when all agents share one utility function.
///
/// Walks the path from the lower-indexed end, closing a piece as soon as it is worth
/// `1/n`. The instance is a yes-instance iff `n` pieces close; the last one then absorbs
/// the rest of the path. Agent `k` (by index) gets the `k`-th piece.
pub fn prop_path_greedy(inst: &Instance) -> Result<SolveReport> {
    let order = require_path(inst, "prop_path_greedy")?;
    let types = compute_type_partition(inst);
    if types.type_count > 1 {
        return input_err(format!(
            "prop_path_greedy needs a single agent type, found {}",
            types.type_count
        ));
    }
    let n = inst.agent_count();
    let share = fair_share(n);
    let mut pieces: Vec<VertexSet> = Vec::with_capacity(n);
    let mut current = VertexSet::new();
    let mut value = Rational::zero();
    for &v in &order {
        if pieces.len() == n {
            pieces[n - 1].insert(v);
            continue;
        }
        current.insert(v);
        value += inst.utility(0, v);
        if value >= share {
            pieces.push(std::mem::take(&mut current));
            value = Rational::zero();
        }
    }
    if pieces.len() < n {
        return Ok(SolveReport::no(Method::Greedy));
    }
    SolveReport::yes(inst, Allocation::new(pieces), Method::Greedy)
}

/// How a reachable DP state was first reached.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathStep {
    /// The empty prefix.
    Start,
    /// The last vertex of the prefix stays unallocated.
    Skip,
    /// Positions `start..i` form a piece for an agent of type `agent_type`.
    Piece { start: usize, agent_type: usize },
}

/// `A_i[j_1..j_p]` for every prefix length `i` and happy-count vector `j`, with `j_t`
/// capped at `n_t`. Counts are packed in mixed radix (type 0 least significant).
#[derive(Debug, Clone)]
pub struct PathDpTable {
    order: Vec<usize>,
    caps: Vec<usize>,
    entries: Vec<Vec<Option<PathStep>>>,
}

impl PathDpTable {
    /// Vertices in path order; prefix `i` is `order[..i]`.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// `n_t` for each type.
    pub fn caps(&self) -> &[usize] {
        &self.caps
    }

    pub fn prefix_count(&self) -> usize {
        self.entries.len()
    }

    pub fn state_count(&self) -> usize {
        self.caps.iter().map(|&c| c + 1).product()
    }

    pub fn encode(&self, counts: &[usize]) -> usize {
        counts
            .iter()
            .zip(&self.caps)
            .rev()
            .fold(0, |acc, (&j, &cap)| acc * (cap + 1) + j)
    }

    pub fn decode(&self, mut code: usize) -> Vec<usize> {
        self.caps
            .iter()
            .map(|&cap| {
                let j = code % (cap + 1);
                code /= cap + 1;
                j
            })
            .collect()
    }

    pub fn is_reachable(&self, prefix: usize, counts: &[usize]) -> bool {
        counts.iter().zip(&self.caps).all(|(j, cap)| j <= cap)
            && self.entries[prefix][self.encode(counts)].is_some()
    }

    pub fn step(&self, prefix: usize, code: usize) -> Option<PathStep> {
        self.entries[prefix][code]
    }
}

/// Fills the prefix table of [`prop_path_typed`].
pub fn path_dp_table(inst: &Instance) -> Result<PathDpTable> {
    let order = require_path(inst, "prop_path_typed")?;
    let types = compute_type_partition(inst);
    Ok(fill_table(inst, order, &types))
}

fn fill_table(inst: &Instance, order: Vec<usize>, types: &AgentTypePartition) -> PathDpTable {
    let m = order.len();
    let share = fair_share(inst.agent_count());
    let reps = types.representatives();
    let prefix_sums: Vec<Vec<Rational>> = reps
        .iter()
        .map(|&a| {
            let mut acc = vec![Rational::zero()];
            for &v in &order {
                let next = acc.last().unwrap() + inst.utility(a, v);
                acc.push(next);
            }
            acc
        })
        .collect();
    let mut table = PathDpTable {
        order,
        caps: types.agents_per_type.clone(),
        entries: Vec::with_capacity(m + 1),
    };
    let states = table.state_count();
    let mut strides = Vec::with_capacity(table.caps.len());
    let mut stride = 1;
    for &cap in &table.caps {
        strides.push(stride);
        stride *= cap + 1;
    }

    let mut first = vec![None; states];
    first[0] = Some(PathStep::Start);
    table.entries.push(first);
    for i in 1..=m {
        let mut row: Vec<Option<PathStep>> = table.entries[i - 1]
            .iter()
            .map(|e| e.map(|_| PathStep::Skip))
            .collect();
        for start in 0..i {
            for (t, sums) in prefix_sums.iter().enumerate() {
                if &sums[i] - &sums[start] < share {
                    continue;
                }
                for code in 0..states {
                    if table.entries[start][code].is_none() {
                        continue;
                    }
                    if (code / strides[t]) % (table.caps[t] + 1) == table.caps[t] {
                        continue;
                    }
                    let next = code + strides[t];
                    if row[next].is_none() {
                        row[next] = Some(PathStep::Piece {
                            start,
                            agent_type: t,
                        });
                    }
                }
            }
        }
        table.entries.push(row);
    }
    table
}

/// Proportionality on a path, polynomial for a fixed number of agent types.
///
/// Pieces found by the table are handed to agents of the matching type in index order,
/// left to right; unallocated vertices are then merged into the preceding piece (or the
/// following one at the left end), so the witness is complete.
pub fn prop_path_typed(inst: &Instance) -> Result<SolveReport> {
    let order = require_path(inst, "prop_path_typed")?;
    let types = compute_type_partition(inst);
    let table = fill_table(inst, order, &types);
    let m = table.order.len();
    let goal = table.encode(&table.caps);
    if table.entries[m][goal].is_none() {
        return Ok(SolveReport::no(Method::PathDp));
    }

    // Walk back to recover pieces as (start, end, type) in path order.
    let mut pieces = Vec::new();
    let (mut i, mut code) = (m, goal);
    while i > 0 {
        match table.entries[i][code].expect("backpointers stay on reachable states") {
            PathStep::Skip => i -= 1,
            PathStep::Piece { start, agent_type } => {
                pieces.push((start, i, agent_type));
                code -= table.encode(&unit(table.caps.len(), agent_type));
                i = start;
            }
            PathStep::Start => unreachable!("only the empty prefix is a start state"),
        }
    }
    pieces.reverse();

    // Stretch pieces over the gaps between them.
    let count = pieces.len();
    for k in 0..count {
        if k == 0 {
            pieces[k].0 = 0;
        }
        pieces[k].1 = if k + 1 < count { pieces[k + 1].0 } else { m };
    }

    let mut next_member = vec![0usize; types.type_count];
    let members: Vec<Vec<usize>> = (0..types.type_count).map(|t| types.members(t)).collect();
    let mut bundles = vec![VertexSet::new(); inst.agent_count()];
    for (start, end, t) in pieces {
        let agent = members[t][next_member[t]];
        next_member[t] += 1;
        bundles[agent] = table.order[start..end].iter().copied().collect();
    }
    SolveReport::yes(inst, Allocation::new(bundles), Method::PathDp)
}

fn unit(len: usize, t: usize) -> Vec<usize> {
    let mut v = vec![0; len];
    v[t] = 1;
    v
}
