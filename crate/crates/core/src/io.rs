//! JSON documents: instances, allocations, solver reports and verdicts.
//!
//! Rationals are always strings (`"3/4"`, `"0"`); maps keep agent and vertex order.

use std::collections::HashMap;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::error::{input_err, Result};
use crate::graph::ItemGraph;
use crate::model::{
    is_complete, is_envy_free, is_mms_allocation, is_proportional, is_valid, AgentSpec,
    Allocation, Instance, VertexSet,
};
use crate::rational::{self, Rational};
use crate::report::SolveReport;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphDoc {
    vertices: Vec<String>,
    edges: Vec<(String, String)>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AgentDoc {
    name: String,
    utilities: IndexMap<String, String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceDoc {
    graph: GraphDoc,
    agents: Vec<AgentDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AllocationDoc {
    bundles: IndexMap<String, Vec<String>>,
}

#[derive(Debug, Serialize)]
struct ReportDoc<'a> {
    decision: &'a str,
    method: &'a str,
    allocation: Option<AllocationDoc>,
    values: IndexMap<String, String>,
    quotas: Option<IndexMap<String, String>>,
}

/// Parses canonical instance JSON. With `normalize`, each agent's utilities are divided by
/// their sum; otherwise they must already sum to exactly 1.
pub fn parse_instance(text: &str, normalize: bool) -> Result<Instance> {
    let doc: InstanceDoc = serde_json::from_str(text)?;
    let index: HashMap<&str, usize> = doc
        .graph
        .vertices
        .iter()
        .enumerate()
        .map(|(i, l)| (l.as_str(), i))
        .collect();
    let lookup = |label: &str| match index.get(label) {
        Some(&v) => Ok(v),
        None => input_err(format!("unknown vertex {label:?}")),
    };
    let edges = doc
        .graph
        .edges
        .iter()
        .map(|(a, b)| Ok((lookup(a)?, lookup(b)?)))
        .collect::<Result<Vec<_>>>()?;
    let graph = ItemGraph::new(doc.graph.vertices.clone(), edges)?;
    let m = graph.vertex_count();
    let agents = doc
        .agents
        .iter()
        .map(|a| {
            let mut utilities = vec![Rational::from_integer(0.into()); m];
            for (label, value) in &a.utilities {
                utilities[lookup(label)?] = rational::parse(value)?;
            }
            Ok(AgentSpec::new(a.name.clone(), utilities))
        })
        .collect::<Result<Vec<_>>>()?;
    if normalize {
        Instance::normalized(graph, agents)
    } else {
        Instance::new(graph, agents)
    }
}

/// Canonical instance JSON; every agent lists every vertex.
pub fn instance_to_json(inst: &Instance) -> String {
    let g = inst.graph();
    let doc = InstanceDoc {
        graph: GraphDoc {
            vertices: g.labels().to_vec(),
            edges: g
                .edges()
                .iter()
                .map(|&(a, b)| (g.label(a).to_string(), g.label(b).to_string()))
                .collect(),
        },
        agents: inst
            .agents()
            .iter()
            .map(|a| AgentDoc {
                name: a.name.clone(),
                utilities: g
                    .labels()
                    .iter()
                    .cloned()
                    .zip(a.utilities.iter().map(rational::format))
                    .collect(),
            })
            .collect(),
    };
    to_pretty(&doc)
}

/// Parses allocation JSON against `inst`. Agents missing from the document get nothing.
pub fn parse_allocation(inst: &Instance, text: &str) -> Result<Allocation> {
    let doc: AllocationDoc = serde_json::from_str(text)?;
    let mut alloc = Allocation::empty(inst.agent_count());
    for (name, labels) in &doc.bundles {
        let Some(agent) = inst.agent_index(name) else {
            return input_err(format!("unknown agent {name:?}"));
        };
        let mut bundle = VertexSet::new();
        for label in labels {
            match inst.graph().index_of(label) {
                Some(v) => {
                    bundle.insert(v);
                }
                None => return input_err(format!("unknown vertex {label:?}")),
            }
        }
        alloc.bundles[agent] = bundle;
    }
    Ok(alloc)
}

fn allocation_doc(inst: &Instance, alloc: &Allocation) -> AllocationDoc {
    let g = inst.graph();
    AllocationDoc {
        bundles: inst
            .agents()
            .iter()
            .zip(&alloc.bundles)
            .map(|(a, b)| (a.name.clone(), b.iter().map(|&v| g.label(v).to_string()).collect()))
            .collect(),
    }
}

pub fn allocation_to_json(inst: &Instance, alloc: &Allocation) -> String {
    to_pretty(&allocation_doc(inst, alloc))
}

/// Agent name → rational string, in agent order.
pub fn agent_values(inst: &Instance, values: &[Rational]) -> IndexMap<String, String> {
    inst.agents()
        .iter()
        .zip(values)
        .map(|(a, v)| (a.name.clone(), rational::format(v)))
        .collect()
}

/// `{"decision", "method", "allocation", "values", "quotas"}`.
pub fn report_to_json(inst: &Instance, report: &SolveReport) -> String {
    let doc = ReportDoc {
        decision: if report.decision { "yes" } else { "no" },
        method: report.method.name(),
        allocation: report.witness.as_ref().map(|w| allocation_doc(inst, w)),
        values: agent_values(inst, &report.achieved),
        quotas: report.quotas.as_ref().map(|q| agent_values(inst, q)),
    };
    to_pretty(&doc)
}

#[derive(Serialize)]
struct MmsDoc<'a> {
    method: &'a str,
    values: IndexMap<String, String>,
}

/// `{"method", "values"}` with values in agent order.
pub fn mms_values_to_json(inst: &Instance, values: &[Rational], method: &str) -> String {
    to_pretty(&MmsDoc {
        method,
        values: agent_values(inst, values),
    })
}

/// Outcome of checking an allocation against every solution concept.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub valid: bool,
    pub proportional: bool,
    pub envy_free: bool,
    pub complete: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mms_ok: Option<bool>,
}

impl Verdict {
    /// Runs every verifier; `mms_ok` is filled in when maximin shares are supplied.
    pub fn check(inst: &Instance, alloc: &Allocation, mms: Option<&[Rational]>) -> Result<Self> {
        Ok(Verdict {
            valid: is_valid(inst, alloc)?,
            proportional: is_proportional(inst, alloc)?,
            envy_free: is_envy_free(inst, alloc)?,
            complete: is_complete(inst, alloc)?,
            mms_ok: mms.map(|q| is_mms_allocation(inst, alloc, q)).transpose()?,
        })
    }
}

pub fn to_pretty<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("documents always serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{fixture_cycle8, gen_random, GraphFamily};

    #[test]
    fn instance_round_trip() {
        for inst in [fixture_cycle8(), gen_random(5, GraphFamily::Tree, 6, 3, 9).unwrap()] {
            let text = instance_to_json(&inst);
            assert_eq!(parse_instance(&text, false).unwrap(), inst);
        }
    }

    #[test]
    fn missing_utilities_default_to_zero() {
        let text = r#"{"graph":{"vertices":["a","b"],"edges":[["a","b"]]},
            "agents":[{"name":"x","utilities":{"b":"1"}}]}"#;
        let inst = parse_instance(text, false).unwrap();
        assert_eq!(inst.utilities(0), &[Rational::from_integer(0.into()), Rational::from_integer(1.into())]);
    }

    #[test]
    fn rejects_bad_documents() {
        let unknown = r#"{"graph":{"vertices":["a"],"edges":[]},"agents":[{"name":"x","utilities":{"z":"1"}}]}"#;
        assert!(parse_instance(unknown, false).is_err());
        let unnormalized = r#"{"graph":{"vertices":["a","b"],"edges":[["a","b"]]},
            "agents":[{"name":"x","utilities":{"a":"2","b":"2"}}]}"#;
        assert!(parse_instance(unnormalized, false).is_err());
        let inst = parse_instance(unnormalized, true).unwrap();
        assert_eq!(rational::format(inst.utility(0, 0)), "1/2");
        assert!(parse_instance("{", false).is_err());
    }

    #[test]
    fn allocation_round_trip() {
        let inst = fixture_cycle8();
        let alloc = Allocation::new(vec![
            VertexSet::from([0, 1]),
            VertexSet::new(),
            VertexSet::from([4, 5]),
            VertexSet::from([7]),
        ]);
        let text = allocation_to_json(&inst, &alloc);
        assert_eq!(parse_allocation(&inst, &text).unwrap(), alloc);
        assert!(parse_allocation(&inst, r#"{"bundles":{"9":["v1"]}}"#).is_err());
    }

    #[test]
    fn report_layout() {
        let inst = fixture_cycle8();
        let report = SolveReport::no(crate::report::Method::Oracle)
            .with_quotas(vec![rational::ratio(1, 4); 4]);
        let value: serde_json::Value = serde_json::from_str(&report_to_json(&inst, &report)).unwrap();
        assert_eq!(value["decision"], "no");
        assert_eq!(value["allocation"], serde_json::Value::Null);
        assert_eq!(value["quotas"]["3"], "1/4");
        assert_eq!(value["values"], serde_json::json!({}));
    }
}
