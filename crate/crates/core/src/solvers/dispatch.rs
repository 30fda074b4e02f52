use crate::error::{routing_err, Error, Result};
use crate::graph::classify;
use crate::mms_tree::{mms_values_tree, solve_mms_tree};
use crate::model::{
    compute_type_partition, is_complete, is_envy_free, is_mms_allocation, is_proportional,
    is_valid, Instance,
};
use crate::oracle::{oracle_ef_complete, oracle_mms_exists, oracle_mms_values, oracle_prop, OracleBudget};
use crate::rational::Rational;
use crate::report::{Method, Problem, SolveReport};

use super::{ef_path_typed, prop_path_greedy, prop_path_typed, prop_star, prop_tree_fpt};

/// The method `auto` picks for `problem` on this instance.
pub fn select_method(inst: &Instance, problem: Problem) -> Method {
    let class = classify(inst.graph());
    match problem {
        Problem::Prop if class.is_path && compute_type_partition(inst).type_count == 1 => {
            Method::Greedy
        }
        Problem::Prop if class.is_path => Method::PathDp,
        Problem::Prop if class.is_star => Method::Star,
        Problem::Prop if class.is_tree => Method::TreeFpt,
        Problem::EfComplete if class.is_path => Method::EfPath,
        Problem::Mms if class.is_tree => Method::MmsTree,
        _ => Method::Oracle,
    }
}

/// Checks that `method` solves `problem` on this instance's graph class.
fn check_route(inst: &Instance, problem: Problem, method: Method) -> Result<()> {
    let class = classify(inst.graph());
    let (wanted, fits) = match method {
        Method::Oracle => return Ok(()),
        Method::Greedy => (
            Problem::Prop,
            class.is_path && compute_type_partition(inst).type_count == 1,
        ),
        Method::PathDp => (Problem::Prop, class.is_path),
        Method::Star => (Problem::Prop, class.is_star),
        Method::TreeFpt => (Problem::Prop, class.is_tree),
        Method::EfPath => (Problem::EfComplete, class.is_path),
        Method::MmsTree => (Problem::Mms, class.is_tree),
    };
    if wanted != problem {
        return routing_err(format!("method {method} does not solve {problem}"));
    }
    if !fits {
        return routing_err(format!("method {method} does not apply to this instance"));
    }
    Ok(())
}

/// Solves `problem` with the method `auto` would pick.
pub fn dispatch(inst: &Instance, problem: Problem, budget: &OracleBudget) -> Result<SolveReport> {
    solve_with(inst, problem, None, budget)
}

/// Solves `problem`, forcing `method` when given. Incompatible overrides are routing errors,
/// raised before any work is done. Yes-witnesses are re-verified before being returned.
pub fn solve_with(
    inst: &Instance,
    problem: Problem,
    method: Option<Method>,
    budget: &OracleBudget,
) -> Result<SolveReport> {
    let method = match method {
        Some(m) => {
            check_route(inst, problem, m)?;
            m
        }
        None => select_method(inst, problem),
    };
    let report = match (problem, method) {
        (Problem::Prop, Method::Oracle) => oracle_prop(inst, budget)?,
        (Problem::Prop, Method::Greedy) => prop_path_greedy(inst)?,
        (Problem::Prop, Method::PathDp) => prop_path_typed(inst)?,
        (Problem::Prop, Method::Star) => prop_star(inst)?,
        (Problem::Prop, Method::TreeFpt) => prop_tree_fpt(inst)?,
        (Problem::EfComplete, Method::Oracle) => oracle_ef_complete(inst, budget)?,
        (Problem::EfComplete, Method::EfPath) => ef_path_typed(inst)?,
        (Problem::Mms, Method::Oracle) => oracle_mms_exists(inst, budget)?,
        (Problem::Mms, Method::MmsTree) => solve_mms_tree(inst)?,
        _ => unreachable!("routes are checked above"),
    };
    verify_report(inst, problem, &report)?;
    Ok(report)
}

/// Every agent's maximin share, by binary search on trees and by the oracle otherwise.
/// `method` may force `Oracle` or `MmsTree`. Returns the values and `"tree-binary-search"`
/// or `"oracle"`.
pub fn maximin_shares(
    inst: &Instance,
    method: Option<Method>,
    budget: &OracleBudget,
) -> Result<(Vec<Rational>, &'static str)> {
    let tree = classify(inst.graph()).is_tree;
    match method {
        None | Some(Method::MmsTree) if tree => Ok((mms_values_tree(inst)?, "tree-binary-search")),
        Some(Method::MmsTree) => routing_err("mms-tree needs a tree"),
        None | Some(Method::Oracle) => Ok((oracle_mms_values(inst, budget)?, "oracle")),
        Some(m) => routing_err(format!("method {m} does not compute maximin shares")),
    }
}

fn verify_report(inst: &Instance, problem: Problem, report: &SolveReport) -> Result<()> {
    let Some(witness) = &report.witness else {
        return Ok(());
    };
    let ok = is_valid(inst, witness)?
        && match problem {
            Problem::Prop => is_proportional(inst, witness)?,
            Problem::EfComplete => is_envy_free(inst, witness)? && is_complete(inst, witness)?,
            Problem::Mms => match &report.quotas {
                Some(q) => is_mms_allocation(inst, witness, q)?,
                None => false,
            },
        };
    if ok {
        Ok(())
    } else {
        Err(Error::Internal(format!(
            "{} returned a witness that fails the {} check",
            report.method, problem
        )))
    }
}
