//! Instance constructors: hardness-reduction gadgets, the 8-cycle fixture without an MMS
//! allocation, and seeded random instances.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{input_err, Error, Result};
use crate::graph::{classify, ItemGraph};
use crate::model::{AgentSpec, Instance};
use crate::rational::{int, ratio, Rational};

/// Exact 3-Cover: cover `3s` elements with `s` of the given triples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct X3cInstance {
    element_count: usize,
    triples: Vec<[usize; 3]>,
}

impl X3cInstance {
    /// Elements are `0..element_count`; each triple must hold three distinct elements.
    pub fn new(element_count: usize, triples: Vec<[usize; 3]>) -> Result<Self> {
        if element_count == 0 || element_count % 3 != 0 {
            return input_err(format!(
                "X3C needs a positive multiple of 3 elements, got {element_count}"
            ));
        }
        for t in &triples {
            if t.iter().any(|&x| x >= element_count) {
                return input_err(format!("triple {t:?} mentions an unknown element"));
            }
            if t[0] == t[1] || t[1] == t[2] || t[0] == t[2] {
                return input_err(format!("triple {t:?} repeats an element"));
            }
        }
        Ok(X3cInstance {
            element_count,
            triples,
        })
    }

    pub fn element_count(&self) -> usize {
        self.element_count
    }

    pub fn triples(&self) -> &[[usize; 3]] {
        &self.triples
    }

    /// Cover size `s = |X| / 3`.
    pub fn s(&self) -> usize {
        self.element_count / 3
    }

    /// Number of triples `r`.
    pub fn r(&self) -> usize {
        self.triples.len()
    }

    /// Number of triples containing `x`.
    pub fn frequency(&self, x: usize) -> usize {
        self.triples.iter().filter(|t| t.contains(&x)).count()
    }
}

/// Proportionality on a path: small vertices per triple, `s` big vertices, one dummy.
///
/// Players are the triple players `T1..Tr`, element players `x1..x3s` and the dummy `d`,
/// so `n = 3s + r + 1`. Element players value every small vertex of every triple that
/// contains them; if some element is so frequent that its dummy-vertex utility
/// `(n - 3 p_x) / n` would be negative, the construction is rejected.
pub fn gen_x3c_prop_path(x3c: &X3cInstance) -> Result<Instance> {
    let s = x3c.s();
    let r = x3c.r();
    let n = 3 * s + r + 1;
    let n_i = n as i64;

    let mut labels = Vec::with_capacity(3 * r + s + 1);
    for t in 1..=r {
        for k in 1..=3 {
            labels.push(format!("t{t}_{k}"));
        }
    }
    labels.extend((1..=s).map(|b| format!("b{b}")));
    labels.push("w".to_string());
    let m = labels.len();
    let graph = ItemGraph::new(labels, (1..m).map(|i| (i - 1, i)))?;
    let small = |t: usize, k: usize| 3 * t + k;
    let big = |b: usize| 3 * r + b;
    let w = m - 1;

    let mut agents = Vec::with_capacity(n);
    for t in 0..r {
        let mut u = vec![Rational::zero(); m];
        for k in 0..3 {
            u[small(t, k)] = ratio(1, 3 * n_i);
        }
        for b in 0..s {
            u[big(b)] = ratio(1, n_i);
        }
        u[w] = ratio(n_i - s as i64 - 1, n_i);
        agents.push(AgentSpec::new(format!("T{}", t + 1), u));
    }
    for x in 0..x3c.element_count() {
        let mut u = vec![Rational::zero(); m];
        for (t, triple) in x3c.triples().iter().enumerate() {
            if triple.contains(&x) {
                for k in 0..3 {
                    u[small(t, k)] = ratio(1, n_i);
                }
            }
        }
        u[w] = ratio(n_i - 3 * x3c.frequency(x) as i64, n_i);
        agents.push(AgentSpec::new(format!("x{}", x + 1), u));
    }
    let mut d = vec![Rational::zero(); m];
    d[w] = int(1);
    agents.push(AgentSpec::new("d", d));
    Instance::new(graph, agents)
}

/// Partition: split positive integers into two halves of sum `half_sum` each.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionInstance {
    values: Vec<u64>,
    half_sum: u64,
}

impl PartitionInstance {
    pub fn new(values: Vec<u64>) -> Result<Self> {
        if values.is_empty() || values.contains(&0) {
            return input_err("Partition needs a nonempty list of positive integers");
        }
        let total: u64 = values.iter().sum();
        if total % 2 != 0 {
            return input_err(format!("Partition values sum to {total}, which is odd"));
        }
        Ok(PartitionInstance {
            values,
            half_sum: total / 2,
        })
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn half_sum(&self) -> u64 {
        self.half_sum
    }
}

/// Two identical agents on the complete bipartite graph between the value items and two
/// zero-valued hubs `w1`, `w2`.
pub fn gen_partition_bipartite(p: &PartitionInstance) -> Result<Instance> {
    let h = p.values().len();
    let mut labels: Vec<String> = (1..=h).map(|i| format!("v{i}")).collect();
    labels.push("w1".into());
    labels.push("w2".into());
    let edges = (0..h).flat_map(|i| [(i, h), (i, h + 1)]);
    let graph = ItemGraph::new(labels, edges)?;
    let denom = 2 * p.half_sum() as i64;
    let mut u: Vec<Rational> = p.values().iter().map(|&a| ratio(a as i64, denom)).collect();
    u.extend([Rational::zero(), Rational::zero()]);
    Instance::new(
        graph,
        vec![AgentSpec::new("a1", u.clone()), AgentSpec::new("a2", u)],
    )
}

/// Independent Set: does `graph` have an independent set of size `k`?
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndepSetInstance {
    graph: ItemGraph,
    k: usize,
}

impl IndepSetInstance {
    pub fn new(graph: ItemGraph, k: usize) -> Result<Self> {
        if k == 0 || k > graph.vertex_count() {
            return input_err(format!(
                "k = {k} must lie in 1..={}",
                graph.vertex_count()
            ));
        }
        Ok(IndepSetInstance { graph, k })
    }

    pub fn graph(&self) -> &ItemGraph {
        &self.graph
    }

    pub fn k(&self) -> usize {
        self.k
    }
}

/// Complete envy-freeness on a star. Center `c`; leaves are one item per vertex
/// (`w:<label>`), one per edge (`l:<a>-<b>`) and `k` dummies (`d1..dk`).
pub fn gen_indepset_ef_star(is: &IndepSetInstance) -> Result<Instance> {
    let g = is.graph();
    let k = is.k();
    let wn = g.vertex_count();
    let ln = g.edge_count();
    let mut labels = vec!["c".to_string()];
    labels.extend(g.labels().iter().map(|l| format!("w:{l}")));
    labels.extend(
        g.edges()
            .iter()
            .map(|&(a, b)| format!("l:{}-{}", g.label(a), g.label(b))),
    );
    labels.extend((1..=k).map(|j| format!("d{j}")));
    let m = labels.len();
    let star = ItemGraph::new(labels, (1..m).map(|v| (0, v)))?;
    let vertex_item = |x: usize| 1 + x;
    let edge_item = |e: usize| 1 + wn + e;
    let dummy_item = |j: usize| 1 + wn + ln + j;

    let share = ratio(1, k as i64 + 1);
    let mut agents = Vec::with_capacity(wn + ln + 1);
    for x in 0..wn {
        let mut u = vec![Rational::zero(); m];
        u[vertex_item(x)] = share.clone();
        for j in 0..k {
            u[dummy_item(j)] = share.clone();
        }
        agents.push(AgentSpec::new(format!("i_w:{}", g.label(x)), u));
    }
    for (e, &(a, b)) in g.edges().iter().enumerate() {
        let mut u = vec![Rational::zero(); m];
        u[edge_item(e)] = ratio(3, 7);
        u[vertex_item(a)] = ratio(2, 7);
        u[vertex_item(b)] = ratio(2, 7);
        agents.push(AgentSpec::new(format!("i_l:{}-{}", g.label(a), g.label(b)), u));
    }
    let mut center = vec![Rational::zero(); m];
    center[0] = int(1);
    agents.push(AgentSpec::new("i_c", center));
    Instance::new(star, agents)
}

/// The 8-cycle with four agents (two identical pairs) that has no MMS allocation.
pub fn fixture_cycle8() -> Instance {
    const PAIR_A: [i64; 8] = [1, 4, 4, 1, 3, 2, 2, 3];
    const PAIR_B: [i64; 8] = [4, 4, 1, 3, 2, 2, 3, 1];
    let row = |w: &[i64; 8]| w.iter().map(|&x| ratio(x, 20)).collect::<Vec<_>>();
    let agents = vec![
        AgentSpec::new("1", row(&PAIR_A)),
        AgentSpec::new("2", row(&PAIR_A)),
        AgentSpec::new("3", row(&PAIR_B)),
        AgentSpec::new("4", row(&PAIR_B)),
    ];
    Instance::new(ItemGraph::cycle(8), agents).expect("fixture is well formed")
}

/// Graph families for [`gen_random`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GraphFamily {
    Path,
    Star,
    Tree,
    Cycle,
    Connected,
}

impl GraphFamily {
    pub fn name(self) -> &'static str {
        match self {
            GraphFamily::Path => "path",
            GraphFamily::Star => "star",
            GraphFamily::Tree => "tree",
            GraphFamily::Cycle => "cycle",
            GraphFamily::Connected => "connected",
        }
    }
}

impl fmt::Display for GraphFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GraphFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        [
            GraphFamily::Path,
            GraphFamily::Star,
            GraphFamily::Tree,
            GraphFamily::Cycle,
            GraphFamily::Connected,
        ]
        .into_iter()
        .find(|f| f.name() == s)
        .ok_or_else(|| Error::Input(format!("unknown graph class {s:?}")))
    }
}

/// Seeded random instance: a graph drawn uniformly from `family` on `m` labelled vertices
/// and `n` agents with independent random utilities.
pub fn gen_random(
    seed: u64,
    family: GraphFamily,
    m: usize,
    n: usize,
    denom_bound: u32,
) -> Result<Instance> {
    gen_random_with_types(seed, family, m, n, n, denom_bound)
}

/// Like [`gen_random`], but agents share at most `types` distinct utility vectors. The
/// first `types` agents get one vector each; later agents pick one at random.
pub fn gen_random_with_types(
    seed: u64,
    family: GraphFamily,
    m: usize,
    n: usize,
    types: usize,
    denom_bound: u32,
) -> Result<Instance> {
    if m == 0 || n == 0 || denom_bound == 0 {
        return input_err("m, n and denom_bound must be positive");
    }
    if types == 0 || types > n {
        return input_err(format!("type count {types} must lie in 1..={n}"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let graph = random_graph(&mut rng, family, m)?;
    let vectors: Vec<Vec<Rational>> = (0..types)
        .map(|_| random_utilities(&mut rng, m, denom_bound))
        .collect();
    let agents = (0..n)
        .map(|i| {
            let t = if i < types { i } else { rng.gen_range(0..types) };
            AgentSpec::new(format!("a{}", i + 1), vectors[t].clone())
        })
        .collect();
    Instance::normalized(graph, agents)
}

fn random_utilities(rng: &mut ChaCha8Rng, m: usize, bound: u32) -> Vec<Rational> {
    loop {
        let u: Vec<Rational> = (0..m)
            .map(|_| {
                let num = rng.gen_range(0..=bound) as i64;
                let den = rng.gen_range(1..=bound) as i64;
                ratio(num, den)
            })
            .collect();
        if u.iter().any(|x| !x.is_zero()) {
            return u;
        }
    }
}

fn random_graph(rng: &mut ChaCha8Rng, family: GraphFamily, m: usize) -> Result<ItemGraph> {
    let mut perm: Vec<usize> = (0..m).collect();
    let edges: Vec<(usize, usize)> = match family {
        GraphFamily::Path => {
            perm.shuffle(rng);
            perm.windows(2).map(|w| (w[0], w[1])).collect()
        }
        GraphFamily::Cycle => {
            if m < 3 {
                return input_err("a cycle needs at least three vertices");
            }
            perm.shuffle(rng);
            (0..m).map(|i| (perm[i], perm[(i + 1) % m])).collect()
        }
        GraphFamily::Star => {
            let center = rng.gen_range(0..m);
            (0..m).filter(|&v| v != center).map(|v| (center, v)).collect()
        }
        GraphFamily::Tree => {
            let code: Vec<usize> = (0..m.saturating_sub(2)).map(|_| rng.gen_range(0..m)).collect();
            prufer_decode(&code, m)
        }
        GraphFamily::Connected => loop {
            let edges: Vec<(usize, usize)> = (0..m)
                .flat_map(|a| (a + 1..m).map(move |b| (a, b)))
                .filter(|_| rng.gen_bool(0.5))
                .collect();
            let g = ItemGraph::with_default_labels(m, edges.iter().copied())?;
            if classify(&g).is_connected {
                break edges;
            }
        },
    };
    ItemGraph::with_default_labels(m, edges)
}

/// Labelled tree on `m` vertices from its Prüfer code (length `m - 2`).
fn prufer_decode(code: &[usize], m: usize) -> Vec<(usize, usize)> {
    if m <= 1 {
        return Vec::new();
    }
    let mut degree = vec![1usize; m];
    for &x in code {
        degree[x] += 1;
    }
    let mut leaves: BTreeSet<usize> = (0..m).filter(|&v| degree[v] == 1).collect();
    let mut edges = Vec::with_capacity(m - 1);
    for &x in code {
        let leaf = leaves.pop_first().expect("a Prüfer code always leaves a leaf");
        edges.push((leaf, x));
        degree[x] -= 1;
        if degree[x] == 1 {
            leaves.insert(x);
        }
    }
    let last: Vec<usize> = leaves.into_iter().collect();
    edges.push((last[0], last[1]));
    edges
}
