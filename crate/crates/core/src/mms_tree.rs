//! Maximin shares on trees: the last-diminisher allocator, exact MMS values by binary
//! search, and the allocator that always succeeds with those values as quotas.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{input_err, Error, Result};
use crate::graph::{classify, RootedTreeView};
use crate::model::{Allocation, Instance, VertexSet};
use crate::rational::{self, Rational};
use crate::report::{Method, SolveReport};

/// One award of the last-diminisher procedure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiminisherStep {
    /// 1-based round number.
    pub round: usize,
    pub agent: usize,
    /// Root of the awarded subtree; `None` when the agent takes the whole residual.
    pub vertex: Option<usize>,
    pub awarded: VertexSet,
    /// What is left after this award.
    pub residual: VertexSet,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct DiminisherTrace {
    pub steps: Vec<DiminisherStep>,
}

impl DiminisherTrace {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("traces always serialize")
    }
}

fn require_tree(inst: &Instance) -> Result<()> {
    if !classify(inst.graph()).is_tree {
        return input_err("the item graph is not a tree");
    }
    Ok(())
}

/// Gives every agent a connected bundle worth at least her quota, or `None` if the
/// procedure fails.
///
/// Each round roots the residual tree at its lowest-index vertex and scans it in
/// postorder (children ascending, agents ascending) for the first agent `i` and vertex `v`
/// with `u_i(D(v)) >= q_i` such that no child subtree of `v` meets any remaining agent's
/// quota. `i` takes `D(v)` and leaves. The last agent takes whatever remains. The run fails
/// as soon as some remaining agent values the residual below her quota.
pub fn allocate_with_quotas(
    inst: &Instance,
    quotas: &[Rational],
) -> Result<Option<(Allocation, DiminisherTrace)>> {
    require_tree(inst)?;
    let n = inst.agent_count();
    if quotas.len() != n {
        return input_err(format!("expected {n} quotas, got {}", quotas.len()));
    }
    let g = inst.graph();
    let mut residual: VertexSet = (0..g.vertex_count()).collect();
    let mut active: Vec<usize> = (0..n).collect();
    let mut bundles = vec![VertexSet::new(); n];
    let mut trace = DiminisherTrace::default();

    for round in 1.. {
        if active.iter().any(|&j| inst.value_of(j, &residual) < quotas[j]) {
            return Ok(None);
        }
        if active.len() == 1 || residual.is_empty() {
            for (k, &j) in active.iter().enumerate() {
                let awarded = std::mem::take(&mut residual);
                bundles[j] = awarded.clone();
                trace.steps.push(DiminisherStep {
                    round: round + k,
                    agent: j,
                    vertex: None,
                    awarded,
                    residual: VertexSet::new(),
                });
            }
            break;
        }
        let root = *residual.first().expect("residual is nonempty");
        let view = RootedTreeView::over(g, &residual, root)?;
        let (agent, vertex) = view
            .postorder
            .iter()
            .find_map(|&v| {
                let minimal = view.children[v].iter().all(|&w| {
                    active
                        .iter()
                        .all(|&j| inst.value_of(j, &view.descendants[w]) < quotas[j])
                });
                if !minimal {
                    return None;
                }
                active
                    .iter()
                    .find(|&&i| inst.value_of(i, &view.descendants[v]) >= quotas[i])
                    .map(|&i| (i, v))
            })
            .ok_or_else(|| Error::Internal("no agent accepts the residual tree".into()))?;
        let awarded = view.descendants[vertex].clone();
        residual.retain(|v| !awarded.contains(v));
        bundles[agent] = awarded.clone();
        active.retain(|&j| j != agent);
        trace.steps.push(DiminisherStep {
            round,
            agent,
            vertex: Some(vertex),
            awarded,
            residual: residual.clone(),
        });
    }
    Ok(Some((Allocation::new(bundles), trace)))
}

/// Exact `mms_i` on a tree: the largest quota `n` copies of agent `i` can all meet.
///
/// Utilities are scaled to integers by the lcm of the agent's denominators, and the
/// integer quota is found by binary search over `[0, scaled total]`.
pub fn mms_value_tree(inst: &Instance, agent: usize) -> Result<Rational> {
    require_tree(inst)?;
    let n = inst.agent_count();
    if inst.vertex_count() < n {
        return input_err(format!(
            "{} items cannot be split into {n} connected pieces",
            inst.vertex_count()
        ));
    }
    let clones = inst.clone_agent(agent, n)?;
    let scale = rational::lcm_of_denominators(inst.utilities(agent));
    let feasible = |q: &BigInt| -> Result<bool> {
        let quota = Rational::new(q.clone(), scale.clone());
        Ok(allocate_with_quotas(&clones, &vec![quota; n])?.is_some())
    };
    let mut low = BigInt::zero();
    let mut high = scale.clone();
    while low < high {
        let mid: BigInt = (&low + &high + BigInt::one()).div_floor(&BigInt::from(2));
        if feasible(&mid)? {
            low = mid;
        } else {
            high = mid - BigInt::one();
        }
    }
    Ok(Rational::new(low, scale))
}

/// An MMS allocation on a tree, which always exists. Quotas in the report are the exact
/// maximin shares.
pub fn solve_mms_tree(inst: &Instance) -> Result<SolveReport> {
    solve_mms_tree_traced(inst).map(|(report, _)| report)
}

/// [`solve_mms_tree`] plus the trace of the final allocation run.
pub fn solve_mms_tree_traced(inst: &Instance) -> Result<(SolveReport, DiminisherTrace)> {
    let quotas = mms_values_tree(inst)?;
    let (alloc, trace) = allocate_with_quotas(inst, &quotas)?.ok_or_else(|| {
        Error::Internal("the last-diminisher run failed at maximin-share quotas".into())
    })?;
    let report = SolveReport::yes(inst, alloc, Method::MmsTree)?.with_quotas(quotas);
    Ok((report, trace))
}

/// [`mms_value_tree`] for every agent, computed in parallel.
pub fn mms_values_tree(inst: &Instance) -> Result<Vec<Rational>> {
    (0..inst.agent_count())
        .into_par_iter()
        .map(|i| mms_value_tree(inst, i))
        .collect()
}
