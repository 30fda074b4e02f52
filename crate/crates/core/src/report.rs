use std::fmt;
use std::str::FromStr;

use crate::error::{input_err, Error, Result};
use crate::model::{achieved_values, Allocation, Instance};
use crate::rational::Rational;

/// The three decision problems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Problem {
    /// Is there a valid allocation giving everyone at least `1/n`?
    Prop,
    /// Is there a complete, envy-free valid allocation?
    EfComplete,
    /// Is there a valid allocation giving everyone her maximin share?
    Mms,
}

/// Which algorithm produced a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Oracle,
    Greedy,
    PathDp,
    Star,
    TreeFpt,
    EfPath,
    MmsTree,
}

impl Method {
    pub const ALL: [Method; 7] = [
        Method::Oracle,
        Method::Greedy,
        Method::PathDp,
        Method::Star,
        Method::TreeFpt,
        Method::EfPath,
        Method::MmsTree,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Oracle => "oracle",
            Method::Greedy => "greedy",
            Method::PathDp => "path-dp",
            Method::Star => "star",
            Method::TreeFpt => "tree-fpt",
            Method::EfPath => "ef-path",
            Method::MmsTree => "mms-tree",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match Method::ALL.iter().find(|m| m.name() == s) {
            Some(m) => Ok(*m),
            None => input_err(format!("unknown method {s:?}")),
        }
    }
}

impl Problem {
    pub fn name(self) -> &'static str {
        match self {
            Problem::Prop => "prop",
            Problem::EfComplete => "ef-complete",
            Problem::Mms => "mms",
        }
    }
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Problem {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "prop" => Ok(Problem::Prop),
            "ef-complete" | "ef_complete" | "ef" => Ok(Problem::EfComplete),
            "mms" => Ok(Problem::Mms),
            _ => input_err(format!("unknown problem {s:?}")),
        }
    }
}

/// Outcome of a solver run.
///
/// `achieved` is always recomputed from the witness; solvers never fill it in themselves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveReport {
    pub decision: bool,
    pub witness: Option<Allocation>,
    pub method: Method,
    pub achieved: Vec<Rational>,
    pub quotas: Option<Vec<Rational>>,
}

impl SolveReport {
    pub fn yes(inst: &Instance, witness: Allocation, method: Method) -> Result<Self> {
        let achieved = achieved_values(inst, &witness)?;
        Ok(SolveReport {
            decision: true,
            witness: Some(witness),
            method,
            achieved,
            quotas: None,
        })
    }

    pub fn no(method: Method) -> Self {
        SolveReport {
            decision: false,
            witness: None,
            method,
            achieved: Vec::new(),
            quotas: None,
        }
    }

    pub fn with_quotas(mut self, quotas: Vec<Rational>) -> Self {
        self.quotas = Some(quotas);
        self
    }
}
