//! Graphs in the Bass–Serre sense.
//!
//! Vertices are `1..=|V|`. Each unoriented edge is stored once with id `k` in
//! `1..=|E|` and an orientation `from → to`; the signed id `-k` addresses the
//! reversed edge, so the involution `ē` is negation and `τ(ē) = ι(e)` holds
//! by construction. Loops and parallel edges are allowed.

mod covering;
mod edit;

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub use covering::{check_covering, CombinatorialMap, Covering, LabeledGraph, LiftTable};
pub use edit::{edit_distance, EditDistance, EditMode, DEFAULT_EDIT_GUARD};

/// Signed directed-edge id: `+k` is the stored orientation of edge `k`,
/// `-k` the reversal.
pub type SignedEdge = i64;

/// Sort key realizing `-1 < 1 < -2 < 2 < …`.
pub fn signed_key(s: SignedEdge) -> (u64, bool) {
    (s.unsigned_abs(), s > 0)
}

/// One edge record as it appears in graph files.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub id: usize,
    pub from: usize,
    pub to: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Graph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
}

/// Check the structural invariants of a graph given as raw records and build it.
///
/// Records may come in any order; ids must be exactly `1..=|E|`.
pub fn validate_graph(vertex_count: usize, records: &[EdgeRecord]) -> Result<Graph> {
    if vertex_count == 0 {
        return Err(Error::InvalidGraph("graph has no vertices".into()));
    }
    let mut edges = vec![None; records.len()];
    for r in records {
        if r.id == 0 || r.id > records.len() {
            return Err(Error::InvalidGraph(format!(
                "edge id {} outside 1..={} (ids must have no gaps)",
                r.id,
                records.len()
            )));
        }
        for v in [r.from, r.to] {
            if v == 0 || v > vertex_count {
                return Err(Error::InvalidGraph(format!(
                    "dangling endpoint: edge {} references vertex {v} in a {vertex_count}-vertex graph",
                    r.id
                )));
            }
        }
        if edges[r.id - 1].replace((r.from, r.to)).is_some() {
            return Err(Error::InvalidGraph(format!("duplicate edge id {}", r.id)));
        }
    }
    let edges = edges.into_iter().map(|e| e.expect("ids form a bijection")).collect();
    Ok(Graph { vertex_count, edges })
}

impl Graph {
    /// Edges listed in id order as `(from, to)`.
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let records: Vec<EdgeRecord> = edges
            .iter()
            .enumerate()
            .map(|(i, &(from, to))| EdgeRecord { id: i + 1, from, to })
            .collect();
        validate_graph(vertex_count, &records)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// `(from, to)` of the stored orientation of edge `k`.
    pub fn edge(&self, k: usize) -> (usize, usize) {
        self.edges[k - 1]
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn records(&self) -> Vec<EdgeRecord> {
        self.edges
            .iter()
            .enumerate()
            .map(|(i, &(from, to))| EdgeRecord { id: i + 1, from, to })
            .collect()
    }

    pub fn contains_edge(&self, s: SignedEdge) -> bool {
        s != 0 && s.unsigned_abs() as usize <= self.edges.len()
    }

    /// `ι(s)`.
    pub fn origin(&self, s: SignedEdge) -> usize {
        let (from, to) = self.edges[s.unsigned_abs() as usize - 1];
        if s > 0 {
            from
        } else {
            to
        }
    }

    /// `τ(s)`.
    pub fn terminus(&self, s: SignedEdge) -> usize {
        self.origin(-s)
    }

    pub fn is_loop(&self, k: usize) -> bool {
        let (a, b) = self.edge(k);
        a == b
    }

    /// Directed edges terminating at `v`, in signed-key order. A loop at `v`
    /// contributes both orientations.
    pub fn star(&self, v: usize) -> Vec<SignedEdge> {
        let mut out = Vec::new();
        for (i, &(from, to)) in self.edges.iter().enumerate() {
            let k = i as i64 + 1;
            if from == v {
                out.push(-k);
            }
            if to == v {
                out.push(k);
            }
        }
        out
    }

    /// Directed edges leaving `v`.
    pub fn out_edges(&self, v: usize) -> Vec<SignedEdge> {
        let mut out: Vec<SignedEdge> = self.star(v).into_iter().map(|s| -s).collect();
        out.sort_by_key(|&s| signed_key(s));
        out
    }

    /// Number of directed edges leaving `v` (a loop counts twice).
    pub fn degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .map(|&(a, b)| usize::from(a == v) + usize::from(b == v))
            .sum()
    }

    /// Component index (0-based, in order of first vertex) for each vertex.
    pub fn components(&self) -> Vec<usize> {
        let mut uf = UnionFind::new(self.vertex_count);
        for &(a, b) in &self.edges {
            uf.union(a - 1, b - 1);
        }
        let mut label = vec![usize::MAX; self.vertex_count];
        let mut next = 0;
        let mut out = vec![0; self.vertex_count];
        for (v, o) in out.iter_mut().enumerate() {
            let r = uf.find(v);
            if label[r] == usize::MAX {
                label[r] = next;
                next += 1;
            }
            *o = label[r];
        }
        out
    }

    pub fn component_count(&self) -> usize {
        self.components().into_iter().max().map_or(0, |m| m + 1)
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() == 1
    }
}

/// Disjoint-set forest over `0..n`.
#[derive(Clone, Debug)]
pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false when `a` and `b` were already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}

/// A sequence of signed edges. Validity is relative to a graph and checked by
/// [`Path::validate`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Path {
    edges: Vec<SignedEdge>,
}

impl Path {
    pub fn new(edges: Vec<SignedEdge>) -> Self {
        Path { edges }
    }

    pub fn edges(&self) -> &[SignedEdge] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn validate(&self, g: &Graph) -> Result<()> {
        for (i, &s) in self.edges.iter().enumerate() {
            if !g.contains_edge(s) {
                return Err(Error::InvalidPath(format!(
                    "edge {s} at position {} is not in the graph",
                    i + 1
                )));
            }
        }
        for (i, w) in self.edges.windows(2).enumerate() {
            if g.terminus(w[0]) != g.origin(w[1]) {
                return Err(Error::InvalidPath(format!(
                    "edges {} and {} at positions {} and {} do not compose",
                    w[0],
                    w[1],
                    i + 1,
                    i + 2
                )));
            }
        }
        Ok(())
    }

    pub fn start(&self, g: &Graph) -> Option<usize> {
        self.edges.first().map(|&s| g.origin(s))
    }

    pub fn end(&self, g: &Graph) -> Option<usize> {
        self.edges.last().map(|&s| g.terminus(s))
    }

    /// The empty path counts as closed.
    pub fn is_closed(&self, g: &Graph) -> bool {
        self.start(g) == self.end(g)
    }

    /// `ē_ℓ … ē_1`.
    pub fn inverse(&self) -> Path {
        Path { edges: self.edges.iter().rev().map(|s| -s).collect() }
    }

    /// `e_{k+1} … e_ℓ e_1 … e_k`.
    pub fn shift(&self, k: usize) -> Path {
        let mut edges = self.edges.clone();
        if !edges.is_empty() {
            let k = k % edges.len();
            edges.rotate_left(k);
        }
        Path { edges }
    }

    pub fn is_reduced(&self) -> bool {
        self.edges.windows(2).all(|w| w[1] != -w[0])
    }

    /// Every orientation is non-backtracking: reduced and the wrap-around does
    /// not cancel. Meaningful for closed paths.
    pub fn is_cyclically_reduced(&self) -> bool {
        self.is_reduced()
            && match (self.edges.first(), self.edges.last()) {
                (Some(&a), Some(&b)) => self.edges.len() == 1 || a != -b,
                _ => true,
            }
    }

    /// Comparison key under the signed-edge order.
    pub(crate) fn key(&self) -> Vec<(u64, bool)> {
        self.edges.iter().map(|&s| signed_key(s)).collect()
    }
}

impl From<Vec<SignedEdge>> for Path {
    fn from(edges: Vec<SignedEdge>) -> Self {
        Path::new(edges)
    }
}

/// Remove cancelling pairs `e ē` until none remain. With `cyclic`, the path
/// must be closed and cancellation also runs across the wrap-around.
pub fn reduce_path(g: &Graph, p: &Path, cyclic: bool) -> Result<Path> {
    p.validate(g)?;
    if cyclic && !p.is_closed(g) {
        return Err(Error::InvalidPath("cyclic reduction requested on an open path".into()));
    }
    let mut out: Vec<SignedEdge> = Vec::with_capacity(p.len());
    for &s in p.edges() {
        if out.last() == Some(&-s) {
            out.pop();
        } else {
            out.push(s);
        }
    }
    if cyclic {
        let (mut lo, mut hi) = (0, out.len());
        while hi - lo >= 2 && out[lo] == -out[hi - 1] {
            lo += 1;
            hi -= 1;
        }
        out.truncate(hi);
        out.drain(..lo);
    }
    Ok(Path::new(out))
}

/// A spanning tree with a root; `parent_edge[v]` is the directed edge from
/// `v` towards the root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanningTree {
    root: usize,
    edges: BTreeSet<usize>,
    parent_edge: Vec<Option<SignedEdge>>,
    bfs_order: Vec<usize>,
}

impl SpanningTree {
    /// Validate a caller-supplied tree.
    pub fn from_edges(g: &Graph, root: usize, edges: impl IntoIterator<Item = usize>) -> Result<Self> {
        if root == 0 || root > g.vertex_count() {
            return Err(Error::InvalidInput(format!("root {root} is not a vertex")));
        }
        let edges: BTreeSet<usize> = edges.into_iter().collect();
        let mut uf = UnionFind::new(g.vertex_count());
        for &k in &edges {
            if k == 0 || k > g.edge_count() {
                return Err(Error::InvalidInput(format!("tree edge {k} is not an edge")));
            }
            let (a, b) = g.edge(k);
            if !uf.union(a - 1, b - 1) {
                return Err(Error::InvalidInput(format!("tree edge {k} closes a cycle")));
            }
        }
        if edges.len() + 1 != g.vertex_count() {
            return Err(Error::InvalidInput(format!(
                "{} tree edges do not span {} vertices",
                edges.len(),
                g.vertex_count()
            )));
        }
        Ok(Self::orient(g, root, edges))
    }

    fn orient(g: &Graph, root: usize, edges: BTreeSet<usize>) -> Self {
        let mut parent_edge = vec![None; g.vertex_count() + 1];
        let mut seen = vec![false; g.vertex_count() + 1];
        let mut order = vec![root];
        let mut queue = VecDeque::from([root]);
        seen[root] = true;
        while let Some(v) = queue.pop_front() {
            for &k in &edges {
                let (a, b) = g.edge(k);
                let (other, towards_v) = if a == v {
                    (b, -(k as i64))
                } else if b == v {
                    (a, k as i64)
                } else {
                    continue;
                };
                if !seen[other] {
                    seen[other] = true;
                    parent_edge[other] = Some(towards_v);
                    order.push(other);
                    queue.push_back(other);
                }
            }
        }
        SpanningTree { root, edges, parent_edge, bfs_order: order }
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn edges(&self) -> &BTreeSet<usize> {
        &self.edges
    }

    pub fn contains(&self, k: usize) -> bool {
        self.edges.contains(&k)
    }

    /// Vertices in breadth-first order from the root; parents precede children.
    pub fn bfs_order(&self) -> &[usize] {
        &self.bfs_order
    }

    /// Directed tree edge from `v` towards the root.
    pub fn parent_edge(&self, v: usize) -> Option<SignedEdge> {
        self.parent_edge[v]
    }

    /// The unique tree path from `v` to the root.
    pub fn path_to_root(&self, g: &Graph, v: usize) -> Path {
        let mut edges = Vec::new();
        let mut cur = v;
        while let Some(s) = self.parent_edge[cur] {
            edges.push(s);
            cur = g.terminus(s);
        }
        Path::new(edges)
    }
}

/// Breadth-first spanning tree from `root`, scanning edges in id order.
pub fn spanning_tree(g: &Graph, root: usize) -> Result<SpanningTree> {
    if root == 0 || root > g.vertex_count() {
        return Err(Error::InvalidInput(format!("root {root} is not a vertex")));
    }
    let mut seen = vec![false; g.vertex_count() + 1];
    let mut edges = BTreeSet::new();
    let mut queue = VecDeque::from([root]);
    seen[root] = true;
    while let Some(v) = queue.pop_front() {
        for (i, &(a, b)) in g.edges().iter().enumerate() {
            let other = if a == v {
                b
            } else if b == v {
                a
            } else {
                continue;
            };
            if !seen[other] {
                seen[other] = true;
                edges.insert(i + 1);
                queue.push_back(other);
            }
        }
    }
    if seen[1..].iter().any(|s| !s) {
        return Err(Error::Disconnected);
    }
    Ok(SpanningTree::orient(g, root, edges))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle_lex() -> Graph {
        Graph::new(3, vec![(1, 2), (1, 3), (2, 3)]).unwrap()
    }

    #[test]
    fn validate_examples() {
        assert!(Graph::new(1, vec![(1, 1)]).is_ok());
        let err = Graph::new(3, vec![(5, 1)]).unwrap_err();
        assert!(err.to_string().contains("dangling endpoint"), "{err}");
        let k4 = Graph::new(4, vec![(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]).unwrap();
        assert_eq!(k4.edge_count(), 6);
        let gap = [EdgeRecord { id: 1, from: 1, to: 2 }, EdgeRecord { id: 3, from: 1, to: 2 }];
        assert!(validate_graph(2, &gap).is_err());
        assert!(validate_graph(0, &[]).is_err());
    }

    #[test]
    fn involution_and_star() {
        let g = Graph::new(2, vec![(1, 2), (2, 2)]).unwrap();
        assert_eq!(g.origin(1), 1);
        assert_eq!(g.terminus(-1), 1);
        assert_eq!(g.terminus(1), g.origin(-1));
        assert_eq!(g.star(2), vec![1, -2, 2]);
        assert_eq!(g.star(1), vec![-1]);
        assert_eq!(g.degree(2), 3);
    }

    #[test]
    fn reduce_examples() {
        // k: 1→2, m: 2→3, j: 2→4
        let g = Graph::new(4, vec![(1, 2), (2, 3), (2, 4)]).unwrap();
        let r = reduce_path(&g, &Path::new(vec![1, -1]), false).unwrap();
        assert!(r.is_empty());
        let r = reduce_path(&g, &Path::new(vec![1, 2, -2, 3]), false).unwrap();
        assert_eq!(r.edges(), &[1, 3]);
        assert!(reduce_path(&g, &Path::new(vec![1]), true).is_err());
    }

    #[test]
    fn cyclic_reduce_conjugate_away() {
        // j: 1→2, k: 1→3, m: 3→1; the closed path [-j, k, m, j] sits at 2
        let g = Graph::new(3, vec![(1, 2), (1, 3), (3, 1)]).unwrap();
        let p = Path::new(vec![-1, 2, 3, 1]);
        assert!(p.is_closed(&g));
        let r = reduce_path(&g, &p, true).unwrap();
        assert_eq!(r.edges(), &[2, 3]);
        assert!(r.is_closed(&g));
        assert!(r.is_cyclically_reduced());
    }

    #[test]
    fn invalid_paths() {
        let g = triangle_lex();
        assert!(Path::new(vec![1, 1]).validate(&g).is_err());
        assert!(Path::new(vec![4]).validate(&g).is_err());
        assert!(Path::new(vec![1, 3, -2]).validate(&g).is_ok());
    }

    #[test]
    fn spanning_tree_examples() {
        let t = spanning_tree(&triangle_lex(), 1).unwrap();
        assert_eq!(t.edges().iter().copied().collect::<Vec<_>>(), vec![1, 2]);
        let single = Graph::new(1, vec![]).unwrap();
        assert!(spanning_tree(&single, 1).unwrap().edges().is_empty());
        let parallel = Graph::new(2, vec![(1, 2), (1, 2)]).unwrap();
        let t = spanning_tree(&parallel, 1).unwrap();
        assert_eq!(t.edges().iter().copied().collect::<Vec<_>>(), vec![1]);
        let disc = Graph::new(2, vec![]).unwrap();
        assert_eq!(spanning_tree(&disc, 1), Err(Error::Disconnected));
    }

    #[test]
    fn tree_paths_lead_to_root() {
        let g = Graph::new(4, vec![(1, 2), (2, 3), (3, 4), (4, 1)]).unwrap();
        let t = SpanningTree::from_edges(&g, 1, [1, 2, 3]).unwrap();
        let p = t.path_to_root(&g, 4);
        assert_eq!(p.edges(), &[-3, -2, -1]);
        assert_eq!(p.start(&g), Some(4));
        assert_eq!(p.end(&g), Some(1));
        assert!(SpanningTree::from_edges(&g, 1, [1, 2, 3, 4]).is_err());
        assert!(SpanningTree::from_edges(&g, 1, [1, 2]).is_err());
    }
}
