use super::{Graph, Path, SignedEdge};
use crate::{Error, Result};

/// A map of graphs given on vertices and on stored edge orientations; the
/// image of `-k` is `-edge_map[k]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CombinatorialMap {
    pub vertex_map: Vec<usize>,
    pub edge_map: Vec<SignedEdge>,
}

impl CombinatorialMap {
    pub fn validate(&self, source: &Graph, target: &Graph) -> Result<()> {
        if self.vertex_map.len() != source.vertex_count() {
            return Err(Error::InvalidMap(format!(
                "vertex_map has {} entries for {} vertices",
                self.vertex_map.len(),
                source.vertex_count()
            )));
        }
        if self.edge_map.len() != source.edge_count() {
            return Err(Error::InvalidMap(format!(
                "edge_map has {} entries for {} edges",
                self.edge_map.len(),
                source.edge_count()
            )));
        }
        for (i, &v) in self.vertex_map.iter().enumerate() {
            if v == 0 || v > target.vertex_count() {
                return Err(Error::InvalidMap(format!("vertex {} maps to missing vertex {v}", i + 1)));
            }
        }
        for (i, &s) in self.edge_map.iter().enumerate() {
            let k = i as i64 + 1;
            if !target.contains_edge(s) {
                return Err(Error::InvalidMap(format!("edge {k} maps to missing edge {s}")));
            }
            if target.origin(s) != self.vertex(source.origin(k)) {
                return Err(Error::InvalidMap(format!("edge {k} does not preserve initial points")));
            }
            if target.terminus(s) != self.vertex(source.terminus(k)) {
                return Err(Error::InvalidMap(format!("edge {k} does not preserve terminal points")));
            }
        }
        Ok(())
    }

    pub fn vertex(&self, v: usize) -> usize {
        self.vertex_map[v - 1]
    }

    pub fn edge(&self, s: SignedEdge) -> SignedEdge {
        let image = self.edge_map[s.unsigned_abs() as usize - 1];
        if s > 0 {
            image
        } else {
            -image
        }
    }
}

/// A graph together with a combinatorial map onto a fixed base graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledGraph {
    graph: Graph,
    base: Graph,
    labeling: CombinatorialMap,
}

impl LabeledGraph {
    pub fn new(graph: Graph, base: Graph, labeling: CombinatorialMap) -> Result<Self> {
        labeling.validate(&graph, &base)?;
        Ok(LabeledGraph { graph, base, labeling })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn base(&self) -> &Graph {
        &self.base
    }

    pub fn labeling(&self) -> &CombinatorialMap {
        &self.labeling
    }

    /// Source vertices over each base vertex, ascending.
    pub fn fibers(&self) -> Vec<Vec<usize>> {
        let mut fibers = vec![Vec::new(); self.base.vertex_count()];
        for v in 1..=self.graph.vertex_count() {
            fibers[self.labeling.vertex(v) - 1].push(v);
        }
        fibers
    }
}

/// For each source vertex and base directed edge, the lifted edge leaving it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftTable {
    base_edges: usize,
    // index: (v - 1) * 2E + slot(s)
    out: Vec<Option<SignedEdge>>,
}

impl LiftTable {
    fn slot(&self, s: SignedEdge) -> usize {
        2 * (s.unsigned_abs() as usize - 1) + usize::from(s > 0)
    }

    pub fn lift_edge(&self, v: usize, s: SignedEdge) -> Option<SignedEdge> {
        self.out[(v - 1) * 2 * self.base_edges + self.slot(s)]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Covering {
    labeled: LabeledGraph,
    degree: usize,
    fibers: Vec<Vec<usize>>,
    label_of: Vec<usize>,
    lifts: LiftTable,
}

/// Verify that `labeled` is a degree-`n` covering of its base and attach
/// canonical fiber labels.
pub fn check_covering(labeled: LabeledGraph, n: usize) -> Result<Covering> {
    let g = labeled.graph();
    let base = labeled.base();
    let f = labeled.labeling();
    for y in 1..=g.vertex_count() {
        let x = f.vertex(y);
        let mut image: Vec<SignedEdge> = g.star(y).into_iter().map(|s| f.edge(s)).collect();
        image.sort_unstable();
        if image.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::NotCovering(format!("star not injective at vertex {y}")));
        }
        let mut target = base.star(x);
        target.sort_unstable();
        if image != target {
            return Err(Error::NotCovering(format!("star not surjective at vertex {y}")));
        }
    }
    let fibers = labeled.fibers();
    for (i, fiber) in fibers.iter().enumerate() {
        if fiber.len() != n {
            return Err(Error::NotCovering(format!(
                "fiber over vertex {} has {} elements, expected {n}",
                i + 1,
                fiber.len()
            )));
        }
    }
    let mut label_of = vec![0; g.vertex_count()];
    for fiber in &fibers {
        for (i, &v) in fiber.iter().enumerate() {
            label_of[v - 1] = i + 1;
        }
    }
    let base_edges = base.edge_count();
    let mut lifts = LiftTable { base_edges, out: vec![None; g.vertex_count() * 2 * base_edges] };
    for k in 1..=g.edge_count() as i64 {
        for s in [k, -k] {
            let slot = (g.origin(s) - 1) * 2 * base_edges + lifts.slot(f.edge(s));
            lifts.out[slot] = Some(s);
        }
    }
    Ok(Covering { labeled, degree: n, fibers, label_of, lifts })
}

impl Covering {
    pub fn labeled(&self) -> &LabeledGraph {
        &self.labeled
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn graph(&self) -> &Graph {
        self.labeled.graph()
    }

    pub fn base(&self) -> &Graph {
        self.labeled.base()
    }

    /// The source vertex carrying label `i` over base vertex `x`.
    pub fn vertex_at(&self, x: usize, i: usize) -> usize {
        self.fibers[x - 1][i - 1]
    }

    /// `(base vertex, label)` of a source vertex.
    pub fn label(&self, v: usize) -> (usize, usize) {
        (self.labeled.labeling().vertex(v), self.label_of[v - 1])
    }

    pub fn lift_table(&self) -> &LiftTable {
        &self.lifts
    }

    /// Lift a base path starting at source vertex `start`; returns the lifted
    /// edges and the endpoint.
    pub fn lift_path(&self, start: usize, path: &Path) -> Result<(Path, usize)> {
        let (x, _) = self.label(start);
        if path.start(self.base()).is_some_and(|p| p != x) {
            return Err(Error::InvalidPath(format!(
                "path starts at {} but the lift point lies over {x}",
                path.start(self.base()).unwrap_or(x)
            )));
        }
        let mut cur = start;
        let mut edges = Vec::with_capacity(path.len());
        for &s in path.edges() {
            let lifted = self
                .lifts
                .lift_edge(cur, s)
                .expect("coverings lift every edge uniquely");
            edges.push(lifted);
            cur = self.graph().terminus(lifted);
        }
        Ok((Path::new(edges), cur))
    }

    /// Whether the lift of a closed base path at `start` closes up.
    pub fn lift_closes(&self, start: usize, path: &Path) -> Result<bool> {
        Ok(self.lift_path(start, path)?.1 == start)
    }

    /// The same covering with fiber labels permuted: over base vertex `x`,
    /// the vertex labeled `i` becomes labeled `relabel[x-1](i)`.
    pub fn relabeled(&self, relabel: &[crate::perm::Permutation]) -> Result<Covering> {
        if relabel.len() != self.fibers.len() || relabel.iter().any(|p| p.degree() != self.degree) {
            return Err(Error::InvalidInput("relabeling must give one permutation of degree n per base vertex".into()));
        }
        let mut out = self.clone();
        for (x, fiber) in self.fibers.iter().enumerate() {
            for (i, &v) in fiber.iter().enumerate() {
                let j = relabel[x].apply(i + 1);
                out.fibers[x][j - 1] = v;
                out.label_of[v - 1] = j;
            }
        }
        Ok(out)
    }
}
