//! Item graphs, connectivity, graph-class recognition, rooted tree views and the
//! enumerators of connected vertex sets and connected partitions.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::ops::ControlFlow;

use itertools::Itertools;
use serde::Serialize;

use crate::error::{input_err, Result};
use crate::model::VertexSet;

/// Undirected simple graph over labelled vertices `0..m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ItemGraph {
    labels: Vec<String>,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
}

impl ItemGraph {
    /// Edges are normalized to `(low, high)` and sorted. Rejects self-loops, duplicate edges,
    /// out-of-range endpoints, duplicate labels and the empty graph.
    pub fn new(
        labels: Vec<String>,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let m = labels.len();
        if m == 0 {
            return input_err("the item graph needs at least one vertex");
        }
        let mut index = HashMap::new();
        for (v, label) in labels.iter().enumerate() {
            if index.insert(label.as_str(), v).is_some() {
                return input_err(format!("duplicate vertex label {label:?}"));
            }
        }
        let mut normalized = BTreeSet::new();
        for (a, b) in edges {
            if a >= m || b >= m {
                return input_err(format!("edge ({a}, {b}) has an endpoint out of range"));
            }
            if a == b {
                return input_err(format!("self-loop at {:?}", labels[a]));
            }
            if !normalized.insert((a.min(b), a.max(b))) {
                return input_err(format!(
                    "duplicate edge {{{:?}, {:?}}}",
                    labels[a], labels[b]
                ));
            }
        }
        let edges: Vec<_> = normalized.into_iter().collect();
        let mut adjacency = vec![Vec::new(); m];
        for &(a, b) in &edges {
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(ItemGraph {
            labels,
            edges,
            adjacency,
        })
    }

    /// Labels `v1..vm`.
    pub fn with_default_labels(
        m: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        ItemGraph::new((1..=m).map(|i| format!("v{i}")).collect(), edges)
    }

    /// `v1 - v2 - ... - vm`.
    pub fn path(m: usize) -> Self {
        Self::with_default_labels(m, (1..m).map(|i| (i - 1, i))).expect("valid path")
    }

    /// `v1 - ... - vm - v1`, for `m >= 3`.
    pub fn cycle(m: usize) -> Self {
        assert!(m >= 3, "a cycle needs at least three vertices");
        Self::with_default_labels(m, (0..m).map(|i| (i, (i + 1) % m))).expect("valid cycle")
    }

    /// Center `v1` joined to `leaves` further vertices.
    pub fn star(leaves: usize) -> Self {
        Self::with_default_labels(leaves + 1, (1..=leaves).map(|i| (0, i))).expect("valid star")
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Neighbours in ascending order.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adjacency[a].binary_search(&b).is_ok()
    }
}

/// True iff `set` induces a connected subgraph. The empty set is connected.
pub fn is_connected_set(g: &ItemGraph, set: &VertexSet) -> bool {
    let Some(&start) = set.iter().next() else {
        return true;
    };
    let mut seen = BTreeSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        for &w in g.neighbors(v) {
            if set.contains(&w) && seen.insert(w) {
                queue.push_back(w);
            }
        }
    }
    seen.len() == set.len()
}

/// Structural flags used to route instances to solvers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GraphClass {
    pub is_path: bool,
    pub is_star: bool,
    pub is_tree: bool,
    pub is_cycle: bool,
    pub is_bipartite: bool,
    pub is_connected: bool,
}

pub fn classify(g: &ItemGraph) -> GraphClass {
    let m = g.vertex_count();
    let all: VertexSet = (0..m).collect();
    let is_connected = is_connected_set(g, &all);
    let is_tree = is_connected && g.edge_count() == m - 1;
    let max_degree = (0..m).map(|v| g.degree(v)).max().unwrap_or(0);
    GraphClass {
        is_path: is_tree && max_degree <= 2,
        is_star: is_tree && (m <= 2 || max_degree == m - 1),
        is_tree,
        is_cycle: is_connected && m >= 3 && g.edge_count() == m && (0..m).all(|v| g.degree(v) == 2),
        is_bipartite: is_bipartite(g),
        is_connected,
    }
}

fn is_bipartite(g: &ItemGraph) -> bool {
    let mut color: Vec<Option<bool>> = vec![None; g.vertex_count()];
    for start in 0..g.vertex_count() {
        if color[start].is_some() {
            continue;
        }
        color[start] = Some(false);
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            let c = color[v].unwrap();
            for &w in g.neighbors(v) {
                match color[w] {
                    None => {
                        color[w] = Some(!c);
                        queue.push_back(w);
                    }
                    Some(cw) if cw == c => return false,
                    Some(_) => {}
                }
            }
        }
    }
    true
}

/// The center of a star: its unique maximum-degree vertex, or vertex 0 when `m <= 2`.
pub fn star_center(g: &ItemGraph) -> Option<usize> {
    if !classify(g).is_star {
        return None;
    }
    if g.vertex_count() <= 2 {
        return Some(0);
    }
    (0..g.vertex_count()).max_by_key(|&v| (g.degree(v), std::cmp::Reverse(v)))
}

/// Vertices of a path graph from end to end, starting at the lower-indexed endpoint.
pub fn path_order(g: &ItemGraph) -> Option<Vec<usize>> {
    if !classify(g).is_path {
        return None;
    }
    let start = (0..g.vertex_count()).find(|&v| g.degree(v) <= 1)?;
    let mut order = vec![start];
    let mut prev = usize::MAX;
    let mut cur = start;
    while let Some(&next) = g.neighbors(cur).iter().find(|&&w| w != prev) {
        order.push(next);
        prev = cur;
        cur = next;
    }
    Some(order)
}

/// A tree (or a subtree induced by a vertex subset) hung from a root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedTreeView {
    pub root: usize,
    /// `None` for the root and for vertices outside the viewed subtree.
    pub parent: Vec<Option<usize>>,
    /// Children in ascending index order.
    pub children: Vec<Vec<usize>>,
    /// `D(v)`: `v` and everything below it. Empty for vertices outside the subtree.
    pub descendants: Vec<VertexSet>,
    /// Children before parents; siblings in ascending order.
    pub postorder: Vec<usize>,
}

impl RootedTreeView {
    /// Roots the subtree induced by `vertices`, which must be connected and acyclic.
    pub fn over(g: &ItemGraph, vertices: &VertexSet, root: usize) -> Result<Self> {
        if !vertices.contains(&root) {
            return input_err(format!("root {root} is not among the viewed vertices"));
        }
        let m = g.vertex_count();
        let mut parent = vec![None; m];
        let mut children = vec![Vec::new(); m];
        let mut visited = vec![false; m];
        visited[root] = true;
        let mut stack = vec![root];
        let mut preorder = Vec::with_capacity(vertices.len());
        let mut inner_edges = 0usize;
        while let Some(v) = stack.pop() {
            preorder.push(v);
            for &w in g.neighbors(v) {
                if !vertices.contains(&w) {
                    continue;
                }
                if w > v {
                    inner_edges += 1;
                }
                if !visited[w] {
                    visited[w] = true;
                    parent[w] = Some(v);
                    children[v].push(w);
                }
            }
            for &w in children[v].iter().rev() {
                stack.push(w);
            }
        }
        if preorder.len() != vertices.len() || inner_edges != vertices.len() - 1 {
            return input_err("the viewed vertices do not induce a tree");
        }

        let mut postorder = Vec::with_capacity(vertices.len());
        let mut stack = vec![(root, false)];
        while let Some((v, expanded)) = stack.pop() {
            if expanded {
                postorder.push(v);
            } else {
                stack.push((v, true));
                for &w in children[v].iter().rev() {
                    stack.push((w, false));
                }
            }
        }
        let mut descendants = vec![VertexSet::new(); m];
        for &v in &postorder {
            let mut below = VertexSet::from([v]);
            for &w in &children[v] {
                below.extend(descendants[w].iter().copied());
            }
            descendants[v] = below;
        }
        Ok(RootedTreeView {
            root,
            parent,
            children,
            descendants,
            postorder,
        })
    }

    pub fn is_leaf(&self, v: usize) -> bool {
        self.children[v].is_empty()
    }
}

/// Roots a whole tree at `root`; children are listed in ascending order.
pub fn root_tree(g: &ItemGraph, root: usize) -> Result<RootedTreeView> {
    if root >= g.vertex_count() {
        return input_err(format!("root {root} out of range"));
    }
    if !classify(g).is_tree {
        return input_err("rooting requires a tree");
    }
    RootedTreeView::over(g, &(0..g.vertex_count()).collect(), root)
}

/// Every nonempty connected vertex set exactly once, grouped by smallest vertex.
///
/// Limited to graphs with at most 64 vertices.
pub fn enumerate_connected_sets(g: &ItemGraph) -> Result<impl Iterator<Item = VertexSet>> {
    let adj = mask::adjacency(g)?;
    Ok(mask::connected_sets(&adj, mask::full(g.vertex_count()))
        .into_iter()
        .map(mask::to_set))
}

/// Unordered partitions of `V` into `k` nonempty connected parts, parts ordered by their
/// smallest vertex. Empty when `k == 0` or `k > m`.
///
/// Trees are enumerated by choosing `k - 1` edges to delete; other graphs by recursive
/// carving of the part holding the smallest unassigned vertex.
pub fn enumerate_connected_partitions(
    g: &ItemGraph,
    k: usize,
) -> Result<impl Iterator<Item = Vec<VertexSet>>> {
    let mut out = Vec::new();
    mask::for_each_connected_partition(g, k, |parts| {
        out.push(parts.iter().map(|&p| mask::to_set(p)).collect::<Vec<_>>());
        ControlFlow::<()>::Continue(())
    })?;
    Ok(out.into_iter())
}

/// Bitmask versions of the enumerators, used by the brute-force oracle.
pub(crate) mod mask {
    use super::*;

    pub type Mask = u64;

    pub const MAX_VERTICES: usize = 64;

    pub fn full(m: usize) -> Mask {
        if m >= 64 {
            Mask::MAX
        } else {
            (1 << m) - 1
        }
    }

    pub fn bit(v: usize) -> Mask {
        1 << v
    }

    pub fn adjacency(g: &ItemGraph) -> Result<Vec<Mask>> {
        if g.vertex_count() > MAX_VERTICES {
            return input_err(format!(
                "enumeration supports at most {MAX_VERTICES} vertices, got {}",
                g.vertex_count()
            ));
        }
        Ok((0..g.vertex_count())
            .map(|v| g.neighbors(v).iter().fold(0, |acc, &w| acc | bit(w)))
            .collect())
    }

    pub fn to_set(mask: Mask) -> VertexSet {
        iter(mask).collect()
    }

    pub fn from_set(set: &VertexSet) -> Mask {
        set.iter().fold(0, |acc, &v| acc | bit(v))
    }

    pub fn iter(mut mask: Mask) -> impl Iterator<Item = usize> {
        std::iter::from_fn(move || {
            if mask == 0 {
                None
            } else {
                let v = mask.trailing_zeros() as usize;
                mask &= mask - 1;
                Some(v)
            }
        })
    }

    pub fn lowest(mask: Mask) -> usize {
        mask.trailing_zeros() as usize
    }

    pub fn neighborhood(adj: &[Mask], set: Mask) -> Mask {
        iter(set).fold(0, |acc, v| acc | adj[v])
    }

    /// The connected component of `start` inside `within`.
    pub fn component(adj: &[Mask], within: Mask, start: usize) -> Mask {
        let mut comp = bit(start);
        let mut frontier = comp;
        while frontier != 0 {
            let next = neighborhood(adj, frontier) & within & !comp;
            comp |= next;
            frontier = next;
        }
        comp
    }

    pub fn is_connected(adj: &[Mask], set: Mask) -> bool {
        set == 0 || component(adj, set, lowest(set)) == set
    }

    pub fn component_count(adj: &[Mask], mut set: Mask) -> usize {
        let mut count = 0;
        while set != 0 {
            set &= !component(adj, set, lowest(set));
            count += 1;
        }
        count
    }

    /// Connected subsets of `allowed` that contain `seed`, each exactly once.
    pub fn connected_sets_containing(adj: &[Mask], allowed: Mask, seed: usize) -> Vec<Mask> {
        fn grow(adj: &[Mask], allowed: Mask, set: Mask, banned: Mask, out: &mut Vec<Mask>) {
            let frontier = neighborhood(adj, set) & allowed & !set & !banned;
            if frontier == 0 {
                out.push(set);
                return;
            }
            let u = frontier & frontier.wrapping_neg();
            grow(adj, allowed, set | u, banned, out);
            grow(adj, allowed, set, banned | u, out);
        }
        let mut out = Vec::new();
        if allowed & bit(seed) != 0 {
            grow(adj, allowed, bit(seed), 0, &mut out);
        }
        out
    }

    /// All nonempty connected subsets of `allowed`, grouped by smallest vertex.
    pub fn connected_sets(adj: &[Mask], allowed: Mask) -> Vec<Mask> {
        let mut out = Vec::new();
        for v in iter(allowed) {
            let above = allowed & !(bit(v) - 1);
            out.extend(connected_sets_containing(adj, above, v));
        }
        out
    }

    /// Calls `visit` on every connected `k`-partition of `g` (parts ordered by smallest vertex).
    pub fn for_each_connected_partition<B>(
        g: &ItemGraph,
        k: usize,
        mut visit: impl FnMut(&[Mask]) -> ControlFlow<B>,
    ) -> Result<Option<B>> {
        let adj = adjacency(g)?;
        let m = g.vertex_count();
        if k == 0 || k > m {
            return Ok(None);
        }
        let flow = if classify(g).is_tree {
            by_edge_deletion(g, &adj, k, &mut visit)
        } else {
            let mut parts = Vec::with_capacity(k);
            carve(&adj, full(m), k, &mut parts, &mut visit)
        };
        Ok(match flow {
            ControlFlow::Break(b) => Some(b),
            ControlFlow::Continue(()) => None,
        })
    }

    /// Calls `visit` on every partition of `allowed` into `k` connected parts.
    pub fn for_each_partition_within<B>(
        adj: &[Mask],
        allowed: Mask,
        k: usize,
        mut visit: impl FnMut(&[Mask]) -> ControlFlow<B>,
    ) -> ControlFlow<B> {
        if k == 0 || k > allowed.count_ones() as usize {
            return ControlFlow::Continue(());
        }
        let mut parts = Vec::with_capacity(k);
        carve(adj, allowed, k, &mut parts, &mut visit)
    }

    fn by_edge_deletion<B>(
        g: &ItemGraph,
        adj: &[Mask],
        k: usize,
        visit: &mut impl FnMut(&[Mask]) -> ControlFlow<B>,
    ) -> ControlFlow<B> {
        let all = full(g.vertex_count());
        let mut parts = Vec::with_capacity(k);
        for cut in g.edges().iter().combinations(k - 1) {
            let mut pruned = adj.to_vec();
            for &&(a, b) in &cut {
                pruned[a] &= !bit(b);
                pruned[b] &= !bit(a);
            }
            parts.clear();
            let mut rest = all;
            while rest != 0 {
                let comp = component(&pruned, rest, lowest(rest));
                parts.push(comp);
                rest &= !comp;
            }
            visit(&parts)?;
        }
        ControlFlow::Continue(())
    }

    fn carve<B>(
        adj: &[Mask],
        rest: Mask,
        k: usize,
        parts: &mut Vec<Mask>,
        visit: &mut impl FnMut(&[Mask]) -> ControlFlow<B>,
    ) -> ControlFlow<B> {
        if k == 1 {
            if is_connected(adj, rest) {
                parts.push(rest);
                let flow = visit(parts);
                parts.pop();
                return flow;
            }
            return ControlFlow::Continue(());
        }
        for part in connected_sets_containing(adj, rest, lowest(rest)) {
            let remaining = rest & !part;
            if (remaining.count_ones() as usize) < k - 1
                || component_count(adj, remaining) > k - 1
            {
                continue;
            }
            parts.push(part);
            let flow = carve(adj, remaining, k - 1, parts, visit);
            parts.pop();
            flow?;
        }
        ControlFlow::Continue(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn set(items: &[usize]) -> VertexSet {
        items.iter().copied().collect()
    }

    fn binomial(n: u64, k: u64) -> u64 {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn connected_set_checks() {
        let g = ItemGraph::path(3);
        assert!(is_connected_set(&g, &set(&[0, 1])));
        assert!(!is_connected_set(&g, &set(&[0, 2])));
        assert!(is_connected_set(&g, &set(&[])));
    }

    #[test]
    fn graph_rejects_malformed_input() {
        assert!(ItemGraph::with_default_labels(0, []).is_err());
        assert!(ItemGraph::with_default_labels(2, [(0, 0)]).is_err());
        assert!(ItemGraph::with_default_labels(2, [(0, 1), (1, 0)]).is_err());
        assert!(ItemGraph::with_default_labels(2, [(0, 2)]).is_err());
        assert!(ItemGraph::new(vec!["a".into(), "a".into()], []).is_err());
    }

    #[test]
    fn classification() {
        let c8 = classify(&ItemGraph::cycle(8));
        assert!(c8.is_cycle && !c8.is_tree && c8.is_connected && c8.is_bipartite);

        let star = classify(&ItemGraph::star(3));
        assert!(star.is_star && star.is_tree && !star.is_path);

        let p5 = classify(&ItemGraph::path(5));
        assert!(p5.is_path && p5.is_tree && !p5.is_star && !p5.is_cycle);

        let single = classify(&ItemGraph::path(1));
        assert!(single.is_path && single.is_star && single.is_tree);
        let pair = classify(&ItemGraph::path(2));
        assert!(pair.is_path && pair.is_star);

        let triangle = classify(&ItemGraph::cycle(3));
        assert!(triangle.is_cycle && !triangle.is_bipartite);

        let split = classify(&ItemGraph::with_default_labels(3, [(0, 1)]).unwrap());
        assert!(!split.is_connected && !split.is_tree && !split.is_path);
    }

    #[test]
    fn centers_and_orders() {
        assert_eq!(star_center(&ItemGraph::star(3)), Some(0));
        assert_eq!(star_center(&ItemGraph::path(2)), Some(0));
        assert_eq!(star_center(&ItemGraph::path(3)), Some(1));
        assert_eq!(star_center(&ItemGraph::path(4)), None);

        let g = ItemGraph::with_default_labels(4, [(2, 0), (0, 3), (3, 1)]).unwrap();
        assert_eq!(path_order(&g), Some(vec![1, 3, 0, 2]));
        assert_eq!(path_order(&ItemGraph::path(1)), Some(vec![0]));
        assert_eq!(path_order(&ItemGraph::cycle(4)), None);
    }

    #[test]
    fn rooted_views() {
        let view = root_tree(&ItemGraph::path(3), 0).unwrap();
        assert_eq!(view.descendants[1], set(&[1, 2]));
        assert_eq!(view.descendants[0], set(&[0, 1, 2]));
        assert_eq!(view.postorder, vec![2, 1, 0]);

        let single = root_tree(&ItemGraph::path(1), 0).unwrap();
        assert_eq!(single.descendants[0], set(&[0]));

        let star = root_tree(&ItemGraph::star(3), 0).unwrap();
        for leaf in 1..=3 {
            assert_eq!(star.descendants[leaf], set(&[leaf]));
            assert_eq!(star.parent[leaf], Some(0));
        }
        assert_eq!(star.children[0], vec![1, 2, 3]);
        assert_eq!(star.postorder, vec![1, 2, 3, 0]);

        assert!(root_tree(&ItemGraph::cycle(4), 0).is_err());
    }

    #[test]
    fn subtree_view_rejects_disconnected_subsets() {
        let g = ItemGraph::path(4);
        assert!(RootedTreeView::over(&g, &set(&[0, 2]), 0).is_err());
        let view = RootedTreeView::over(&g, &set(&[1, 2, 3]), 1).unwrap();
        assert_eq!(view.descendants[2], set(&[2, 3]));
        assert!(view.descendants[0].is_empty());
    }

    #[test]
    fn connected_set_counts() {
        assert_eq!(enumerate_connected_sets(&ItemGraph::path(3)).unwrap().count(), 6);
        assert_eq!(enumerate_connected_sets(&ItemGraph::cycle(3)).unwrap().count(), 7);
        assert_eq!(enumerate_connected_sets(&ItemGraph::path(1)).unwrap().count(), 1);
        for m in 1..=9 {
            let count = enumerate_connected_sets(&ItemGraph::path(m)).unwrap().count();
            assert_eq!(count, m * (m + 1) / 2);
        }
    }

    #[test]
    fn tree_partition_counts_match_binomial() {
        for m in 1..=9usize {
            let g = ItemGraph::path(m);
            let s = ItemGraph::star(m - 1);
            for k in 1..=m {
                let expected = binomial(m as u64 - 1, k as u64 - 1) as usize;
                assert_eq!(enumerate_connected_partitions(&g, k).unwrap().count(), expected);
                assert_eq!(enumerate_connected_partitions(&s, k).unwrap().count(), expected);
            }
            assert_eq!(enumerate_connected_partitions(&g, m + 1).unwrap().count(), 0);
        }
    }

    #[test]
    fn cycle8_pairs() {
        let g = ItemGraph::cycle(8);
        let pairs: Vec<_> = enumerate_connected_partitions(&g, 4)
            .unwrap()
            .filter(|parts| parts.iter().all(|p| p.len() == 2))
            .collect();
        assert_eq!(pairs.len(), 2);
        let p1 = vec![set(&[0, 1]), set(&[2, 3]), set(&[4, 5]), set(&[6, 7])];
        let p2 = vec![set(&[0, 7]), set(&[1, 2]), set(&[3, 4]), set(&[5, 6])];
        assert!(pairs.contains(&p1) && pairs.contains(&p2));
        // Cutting a cycle into k arcs: choose k of the m edges.
        assert_eq!(enumerate_connected_partitions(&g, 4).unwrap().count(), 70);
        assert_eq!(enumerate_connected_partitions(&g, 1).unwrap().count(), 1);
    }

    #[test]
    fn partitions_are_canonical_and_distinct() {
        let g = ItemGraph::with_default_labels(5, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 1)])
            .unwrap();
        for k in 1..=5 {
            let mut seen = HashSet::new();
            for parts in enumerate_connected_partitions(&g, k).unwrap() {
                assert_eq!(parts.len(), k);
                let mins: Vec<_> = parts.iter().map(|p| *p.first().unwrap()).collect();
                assert!(mins.windows(2).all(|w| w[0] < w[1]));
                assert!(parts.iter().all(|p| is_connected_set(&g, p)));
                let union: VertexSet = parts.iter().flatten().copied().collect();
                assert_eq!(union.len(), 5);
                assert!(seen.insert(parts));
            }
        }
    }
}
