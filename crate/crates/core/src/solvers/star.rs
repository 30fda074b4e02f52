use crate::error::{input_err, Result};
use crate::graph::star_center;
use crate::matching::{solve_matching, MatchingProblem, Objective};
use crate::model::{Allocation, Instance, VertexSet};
use crate::rational::{fair_share, int};
use crate::report::{Method, SolveReport};

/// Proportionality on a star.
///
/// Whoever owns the center can also take any leaves; every other agent needs a single leaf
/// worth at least `1/n` to her. For each candidate center owner `i` (lowest index first)
/// a minimum-weight perfect matching of the other agents into leaves, weighted by what
/// `i` loses, decides whether `i` keeps at least `1/n`.
pub fn prop_star(inst: &Instance) -> Result<SolveReport> {
    let g = inst.graph();
    let Some(center) = star_center(g) else {
        return input_err("prop_star needs a star graph");
    };
    let n = inst.agent_count();
    let leaves: Vec<usize> = (0..g.vertex_count()).filter(|&v| v != center).collect();
    let share = fair_share(n);
    let budget = int(n as i64 - 1) / int(n as i64);

    for i in 0..n {
        let others: Vec<usize> = (0..n).filter(|&j| j != i).collect();
        if others.len() > leaves.len() {
            break;
        }
        let weights = others
            .iter()
            .map(|&j| {
                leaves
                    .iter()
                    .map(|&v| (inst.utility(j, v) >= &share).then(|| inst.utility(i, v).clone()))
                    .collect()
            })
            .collect();
        let problem = MatchingProblem::new(weights, leaves.len(), Objective::Minimize);
        let Some(matching) = solve_matching(&problem)? else {
            continue;
        };
        if matching.total > budget {
            continue;
        }
        let mut bundles = vec![VertexSet::new(); n];
        let mut taken = vec![false; leaves.len()];
        for (row, &j) in others.iter().enumerate() {
            let col = matching.assignment[row];
            taken[col] = true;
            bundles[j].insert(leaves[col]);
        }
        bundles[i].insert(center);
        bundles[i].extend(leaves.iter().zip(&taken).filter(|(_, &t)| !t).map(|(&v, _)| v));
        return SolveReport::yes(inst, Allocation::new(bundles), Method::Star);
    }
    Ok(SolveReport::no(Method::Star))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::ItemGraph;
    use crate::model::AgentSpec;
    use crate::rational::{ratio, Rational};
    use num_traits::One;

    fn star_instance(leaves: usize, rows: &[Vec<Rational>]) -> Instance {
        let agents = rows
            .iter()
            .enumerate()
            .map(|(i, u)| AgentSpec::new(format!("a{}", i + 1), u.clone()))
            .collect();
        Instance::new(ItemGraph::star(leaves), agents).unwrap()
    }

    #[test]
    fn two_agents_split_the_leaves() {
        let u = vec![int(0), ratio(1, 2), ratio(1, 2)];
        let inst = star_instance(2, &[u.clone(), u]);
        let report = prop_star(&inst).unwrap();
        assert!(report.decision);
        let w = report.witness.unwrap();
        assert_eq!(w.bundles[0], VertexSet::from([0, 2]));
        assert_eq!(w.bundles[1], VertexSet::from([1]));
    }

    #[test]
    fn single_agent_takes_everything() {
        let inst = star_instance(3, &[vec![ratio(1, 4); 4]]);
        let report = prop_star(&inst).unwrap();
        assert_eq!(report.witness.unwrap().bundles[0], VertexSet::from([0, 1, 2, 3]));
        assert!(report.achieved[0].is_one());
    }

    #[test]
    fn three_agents_competing_for_one_leaf() {
        let u = vec![int(0), int(1), int(0)];
        let inst = star_instance(2, &[u.clone(), u.clone(), u]);
        assert!(!prop_star(&inst).unwrap().decision);
    }

    #[test]
    fn rejects_paths_longer_than_three() {
        let inst = Instance::new(
            ItemGraph::path(4),
            vec![AgentSpec::new("a", vec![ratio(1, 4); 4])],
        )
        .unwrap();
        assert!(prop_star(&inst).is_err());
    }
}
