//! Weighted bipartite perfect matching over exact rationals.
//!
//! A shortest-augmenting-path Hungarian method with dual potentials. Forbidden pairs are
//! left out of the search entirely. Costs carry a second, integer component encoding the
//! assignment vector in base `right_size + 1`, so among optimal matchings the
//! lexicographically smallest assignment wins without any perturbation of the weights.

use std::ops::{Add, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{input_err, Result};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    Minimize,
    Maximize,
}

/// `weights[l][r]` is `None` when the pair `(l, r)` may not be matched.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchingProblem {
    pub left_size: usize,
    pub right_size: usize,
    pub weights: Vec<Vec<Option<Rational>>>,
    pub objective: Objective,
}

impl MatchingProblem {
    pub fn new(weights: Vec<Vec<Option<Rational>>>, right_size: usize, objective: Objective) -> Self {
        MatchingProblem {
            left_size: weights.len(),
            right_size,
            weights,
            objective,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    /// Right vertex matched to each left vertex.
    pub assignment: Vec<usize>,
    pub total: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct LexCost {
    primary: Rational,
    tiebreak: BigInt,
}

impl LexCost {
    fn zero() -> Self {
        LexCost {
            primary: Rational::zero(),
            tiebreak: BigInt::zero(),
        }
    }
}

impl Add for &LexCost {
    type Output = LexCost;
    fn add(self, rhs: &LexCost) -> LexCost {
        LexCost {
            primary: &self.primary + &rhs.primary,
            tiebreak: &self.tiebreak + &rhs.tiebreak,
        }
    }
}

impl Sub for &LexCost {
    type Output = LexCost;
    fn sub(self, rhs: &LexCost) -> LexCost {
        LexCost {
            primary: &self.primary - &rhs.primary,
            tiebreak: &self.tiebreak - &rhs.tiebreak,
        }
    }
}

/// Optimal perfect matching saturating the left side, or `None` if none avoids the
/// forbidden pairs. Ties are broken towards the lexicographically smallest assignment.
pub fn solve_matching(problem: &MatchingProblem) -> Result<Option<Matching>> {
    let (n, m) = (problem.left_size, problem.right_size);
    if n > m {
        return input_err(format!("left side ({n}) larger than right side ({m})"));
    }
    if problem.weights.len() != n || problem.weights.iter().any(|row| row.len() != m) {
        return input_err("weight matrix shape does not match the side sizes");
    }

    // cost[i][j] for 1-based i, j; the tiebreak for (i, j) is j * base^(n - i).
    let base = BigInt::from(m + 1);
    let mut place = vec![BigInt::one(); n + 1];
    for i in (1..n).rev() {
        place[i] = &place[i + 1] * &base;
    }
    let cost: Vec<Vec<Option<LexCost>>> = (0..n)
        .map(|i| {
            problem.weights[i]
                .iter()
                .enumerate()
                .map(|(j, w)| {
                    w.as_ref().map(|w| LexCost {
                        primary: match problem.objective {
                            Objective::Minimize => w.clone(),
                            Objective::Maximize => -w,
                        },
                        tiebreak: &place[i + 1] * BigInt::from(j),
                    })
                })
                .collect()
        })
        .collect();

    let mut u = vec![LexCost::zero(); n + 1];
    let mut v = vec![LexCost::zero(); m + 1];
    // matched_row[j]: 1-based row matched to column j, 0 when free.
    let mut matched_row = vec![0usize; m + 1];
    let mut way = vec![0usize; m + 1];

    for row in 1..=n {
        matched_row[0] = row;
        let mut j0 = 0usize;
        let mut minv: Vec<Option<LexCost>> = vec![None; m + 1];
        let mut used = vec![false; m + 1];
        loop {
            used[j0] = true;
            let i0 = matched_row[j0];
            let mut delta: Option<LexCost> = None;
            let mut j1 = 0usize;
            for j in 1..=m {
                if used[j] {
                    continue;
                }
                if let Some(c) = &cost[i0 - 1][j - 1] {
                    let reduced = &(c - &u[i0]) - &v[j];
                    if minv[j].as_ref().is_none_or(|cur| reduced < *cur) {
                        minv[j] = Some(reduced);
                        way[j] = j0;
                    }
                }
                if let Some(mv) = &minv[j] {
                    if delta.as_ref().is_none_or(|d| mv < d) {
                        delta = Some(mv.clone());
                        j1 = j;
                    }
                }
            }
            let Some(delta) = delta else {
                return Ok(None);
            };
            for j in 0..=m {
                if used[j] {
                    let r = matched_row[j];
                    u[r] = &u[r] + &delta;
                    v[j] = &v[j] - &delta;
                } else if let Some(mv) = &mut minv[j] {
                    *mv = &*mv - &delta;
                }
            }
            j0 = j1;
            if matched_row[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            matched_row[j0] = matched_row[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut assignment = vec![0usize; n];
    for j in 1..=m {
        if matched_row[j] != 0 {
            assignment[matched_row[j] - 1] = j - 1;
        }
    }
    let total = assignment
        .iter()
        .enumerate()
        .map(|(i, &j)| problem.weights[i][j].clone().expect("matched pair is allowed"))
        .fold(Rational::zero(), |acc, w| acc + w);
    Ok(Some(Matching { assignment, total }))
}
