use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::error::{input_err, Error, Result};
use crate::graph::path_order;
use crate::model::{compute_type_partition, Allocation, Instance, VertexSet};
use crate::rational::{self, Rational};
use crate::report::{Method, SolveReport};

/// Per-type target value: every piece owned by type `t` is worth exactly `targets[t]` to it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EfGuess {
    pub targets: Vec<Rational>,
}

/// Interval values per type, scaled to integers: `value[t][s][e]` for positions `s..e`.
struct Intervals {
    m: usize,
    value: Vec<Vec<Vec<i128>>>,
    scale: Vec<BigInt>,
}

impl Intervals {
    fn new(inst: &Instance, order: &[usize], reps: &[usize]) -> Result<Self> {
        let m = order.len();
        let mut value = Vec::with_capacity(reps.len());
        let mut scale = Vec::with_capacity(reps.len());
        for &a in reps {
            let lcm = rational::lcm_of_denominators(inst.utilities(a));
            let row: Vec<i128> = order
                .iter()
                .map(|&v| {
                    (inst.utility(a, v) * Rational::from_integer(lcm.clone()))
                        .to_integer()
                        .to_i128()
                        .ok_or_else(|| Error::Input("utility denominators are too large".into()))
                })
                .collect::<Result<_>>()?;
            let mut table = vec![vec![0i128; m + 1]; m + 1];
            for s in 0..m {
                for e in s + 1..=m {
                    table[s][e] = table[s][e - 1] + row[e - 1];
                }
            }
            value.push(table);
            scale.push(lcm);
        }
        Ok(Intervals { m, value, scale })
    }

    /// Sorted distinct interval values of type `t`, plus 0.
    fn candidates(&self, t: usize) -> Vec<i128> {
        let mut c = vec![0];
        for s in 0..self.m {
            c.extend_from_slice(&self.value[t][s][s + 1..]);
        }
        c.sort_unstable();
        c.dedup();
        c
    }
}

struct Search<'a> {
    iv: &'a Intervals,
    caps: &'a [usize],
    strides: Vec<usize>,
    states: usize,
}

/// A complete tiling found by the prefix DP: pieces `(start, end, type)` left to right.
type Tiling = Vec<(usize, usize, usize)>;

impl Search<'_> {
    /// Prefix DP with the first `fixed` guesses pinned. Types at or beyond `fixed` may own
    /// any piece (a relaxation), so a failure here rules out every extension of `guess`.
    fn tile(&self, guess: &[i128], fixed: usize) -> Option<Tiling> {
        let m = self.iv.m;
        let p = self.caps.len();
        let allowed = |s: usize, e: usize| (0..fixed).all(|t| self.iv.value[t][s][e] <= guess[t]);
        let mut back: Vec<Vec<Option<(usize, usize, usize)>>> = vec![vec![None; self.states]; m + 1];
        back[0][0] = Some((0, 0, usize::MAX));
        for e in 1..=m {
            for s in 0..e {
                if !allowed(s, e) {
                    continue;
                }
                for t in 0..p {
                    if t < fixed && self.iv.value[t][s][e] != guess[t] {
                        continue;
                    }
                    for code in 0..self.states {
                        if back[s][code].is_none() {
                            continue;
                        }
                        if (code / self.strides[t]) % (self.caps[t] + 1) == self.caps[t] {
                            continue;
                        }
                        let next = code + self.strides[t];
                        if back[e][next].is_none() {
                            back[e][next] = Some((s, code, t));
                        }
                    }
                }
            }
        }
        let accepted = (0..self.states).find(|&code| {
            back[m][code].is_some()
                && (0..fixed).all(|t| {
                    let j = (code / self.strides[t]) % (self.caps[t] + 1);
                    j == self.caps[t] || guess[t] == 0
                })
        })?;
        let mut tiling = Vec::new();
        let (mut e, mut code) = (m, accepted);
        while e > 0 {
            let (s, prev, t) = back[e][code].expect("reachable states have backpointers");
            tiling.push((s, e, t));
            e = s;
            code = prev;
        }
        tiling.reverse();
        Some(tiling)
    }

    /// Lexicographically first full guess whose DP accepts, with its tiling.
    fn first_guess(&self, candidates: &[Vec<i128>], guess: &mut Vec<i128>) -> Option<Tiling> {
        let fixed = guess.len();
        if fixed == candidates.len() {
            return self.tile(guess, fixed);
        }
        for &g in &candidates[fixed] {
            guess.push(g);
            // Every vertex must fit under the pinned bounds, otherwise no tiling exists.
            let feasible = (0..self.iv.m).all(|v| self.iv.value[fixed][v][v + 1] <= g)
                && self.tile(guess, fixed + 1).is_some();
            if feasible {
                if let Some(tiling) = self.first_guess(candidates, guess) {
                    return Some(tiling);
                }
            }
            guess.pop();
        }
        None
    }
}

/// Complete envy-freeness on a path, polynomial for a fixed number of agent types.
pub fn ef_path_typed(inst: &Instance) -> Result<SolveReport> {
    ef_path_typed_with_guess(inst).map(|(report, _)| report)
}

/// [`ef_path_typed`] together with the accepted guess (targets indexed by type, as in
/// [`compute_type_partition`]).
pub fn ef_path_typed_with_guess(inst: &Instance) -> Result<(SolveReport, Option<EfGuess>)> {
    let Some(order) = path_order(inst.graph()) else {
        return input_err("ef_path_typed needs a path graph");
    };
    let types = compute_type_partition(inst);
    let iv = Intervals::new(inst, &order, &types.representatives())?;
    let caps = &types.agents_per_type;
    let mut strides = Vec::with_capacity(caps.len());
    let mut states = 1;
    for &cap in caps {
        strides.push(states);
        states *= cap + 1;
    }
    let search = Search {
        iv: &iv,
        caps,
        strides,
        states,
    };
    let candidates: Vec<Vec<i128>> = (0..types.type_count).map(|t| iv.candidates(t)).collect();
    let mut guess = Vec::with_capacity(types.type_count);
    let Some(tiling) = search.first_guess(&candidates, &mut guess) else {
        return Ok((SolveReport::no(Method::EfPath), None));
    };

    let members: Vec<Vec<usize>> = (0..types.type_count).map(|t| types.members(t)).collect();
    let mut next_member = vec![0usize; types.type_count];
    let mut bundles = vec![VertexSet::new(); inst.agent_count()];
    for (s, e, t) in tiling {
        let agent = members[t][next_member[t]];
        next_member[t] += 1;
        bundles[agent] = order[s..e].iter().copied().collect();
    }
    let targets = guess
        .iter()
        .zip(&iv.scale)
        .map(|(&g, scale)| Rational::new(BigInt::from(g), scale.clone()))
        .collect();
    let report = SolveReport::yes(inst, Allocation::new(bundles), Method::EfPath)?;
    Ok((report, Some(EfGuess { targets })))
}
