//! Permutation-valued cochains and their correspondences with coverings and
//! homomorphisms.
//!
//! A 1-cochain stores one permutation per unoriented edge, the value on the
//! stored orientation; the reversed edge carries the inverse, so
//! antisymmetry holds by construction. 2-cochains are never stored: the
//! coboundary of a 1-cochain is evaluated on demand along polygons.

use num::Zero;
use rand::Rng;

use crate::complex::{check_distribution, GeneratorMap, PolygonalComplex, Presentation};
use crate::graph::{check_covering, CombinatorialMap, Covering, Graph, LabeledGraph, Path, SignedEdge, SpanningTree};
use crate::perm::{disagreements, hamming_distance_with_errors, random_permutation, Permutation};
use crate::{ratio, Error, Rational, Result};

/// Vertex → permutation of one common degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cochain0 {
    n: usize,
    values: Vec<Permutation>,
}

/// Unoriented edge → permutation on the stored orientation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cochain1 {
    n: usize,
    values: Vec<Permutation>,
}

fn check_values(n: usize, values: &[Permutation]) -> Result<()> {
    match values.iter().find(|p| p.degree() != n) {
        Some(p) => Err(Error::DegreeMismatch { left: n, right: p.degree() }),
        None => Ok(()),
    }
}

impl Cochain0 {
    pub fn new(n: usize, values: Vec<Permutation>) -> Result<Self> {
        check_values(n, &values)?;
        Ok(Cochain0 { n, values })
    }

    pub fn constant(vertices: usize, p: &Permutation) -> Self {
        Cochain0 { n: p.degree(), values: vec![p.clone(); vertices] }
    }

    pub fn identity(vertices: usize, n: usize) -> Self {
        Self::constant(vertices, &Permutation::identity(n))
    }

    pub fn random<R: Rng + ?Sized>(vertices: usize, n: usize, rng: &mut R) -> Self {
        Cochain0 { n, values: (0..vertices).map(|_| random_permutation(n, rng)).collect() }
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[Permutation] {
        &self.values
    }

    pub fn value(&self, v: usize) -> &Permutation {
        &self.values[v - 1]
    }

    pub fn check_graph(&self, g: &Graph) -> Result<()> {
        if self.values.len() != g.vertex_count() {
            return Err(Error::InvalidCochain(format!(
                "0-cochain has {} values for {} vertices",
                self.values.len(),
                g.vertex_count()
            )));
        }
        Ok(())
    }
}

impl Cochain1 {
    pub fn new(n: usize, values: Vec<Permutation>) -> Result<Self> {
        check_values(n, &values)?;
        Ok(Cochain1 { n, values })
    }

    pub fn identity(edges: usize, n: usize) -> Self {
        Cochain1 { n, values: vec![Permutation::identity(n); edges] }
    }

    pub fn random<R: Rng + ?Sized>(edges: usize, n: usize, rng: &mut R) -> Self {
        Cochain1 { n, values: (0..edges).map(|_| random_permutation(n, rng)).collect() }
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[Permutation] {
        &self.values
    }

    pub fn edge_count(&self) -> usize {
        self.values.len()
    }

    /// `α(s)`, inverting for reversed orientations.
    pub fn value(&self, s: SignedEdge) -> Permutation {
        let p = &self.values[s.unsigned_abs() as usize - 1];
        if s > 0 {
            p.clone()
        } else {
            p.inverse()
        }
    }

    pub fn set(&mut self, k: usize, p: Permutation) -> Result<()> {
        check_values(self.n, std::slice::from_ref(&p))?;
        self.values[k - 1] = p;
        Ok(())
    }

    pub fn check_graph(&self, g: &Graph) -> Result<()> {
        if self.values.len() != g.edge_count() {
            return Err(Error::InvalidCochain(format!(
                "1-cochain has {} values for {} edges",
                self.values.len(),
                g.edge_count()
            )));
        }
        Ok(())
    }

    /// `α(e₁) ∘ … ∘ α(e_ℓ)` without validating the path.
    pub(crate) fn path_value_unchecked(&self, edges: &[SignedEdge]) -> Permutation {
        let mut map: Vec<usize> = (0..self.n).collect();
        for &s in edges.iter().rev() {
            let p = &self.values[s.unsigned_abs() as usize - 1];
            let p = if s > 0 { p.clone() } else { p.inverse() };
            for v in map.iter_mut() {
                *v = p.apply0(*v);
            }
        }
        Permutation::from_map_unchecked(map)
    }
}

/// `δb(x → y) = b(x)⁻¹ b(y)` on each stored orientation.
pub fn coboundary0(g: &Graph, b: &Cochain0) -> Result<Cochain1> {
    b.check_graph(g)?;
    let values = g
        .edges()
        .iter()
        .map(|&(x, y)| b.value(x).inverse().then_unchecked(b.value(y)))
        .collect();
    Ok(Cochain1 { n: b.n, values })
}

/// `δα(π) = α(e₁) ∘ … ∘ α(e_ℓ)` along any path; the empty path gives `Id`.
pub fn coboundary1(g: &Graph, a: &Cochain1, p: &Path) -> Result<Permutation> {
    a.check_graph(g)?;
    p.validate(g)?;
    Ok(a.path_value_unchecked(p.edges()))
}

fn polygon_distribution(x: &PolygonalComplex, mu2: Option<&[Rational]>) -> Result<Vec<Rational>> {
    if x.polygon_count() == 0 {
        return Err(Error::InvalidComplex("complex has no polygons".into()));
    }
    match mu2 {
        Some(m) => {
            check_distribution(m, x.polygon_count(), "mu2")?;
            Ok(m.to_vec())
        }
        None => Ok(crate::complex::uniform(x.polygon_count())),
    }
}

/// Per-polygon disagreement counts `n − fix(δα(π))` on canonical representatives.
pub(crate) fn polygon_violations(x: &PolygonalComplex, a: &Cochain1) -> Vec<usize> {
    x.polygons()
        .iter()
        .map(|c| a.n - a.path_value_unchecked(c.canonical.edges()).fixed_points())
        .collect()
}

/// `‖δα‖ = E_{[π]} d_h(δα(π), Id)`, uniform or under `mu2`.
///
/// Fixed-point counts are invariant under conjugation and inversion, so one
/// orientation per class suffices.
pub fn coboundary_norm(x: &PolygonalComplex, a: &Cochain1, mu2: Option<&[Rational]>) -> Result<Rational> {
    a.check_graph(x.skeleton())?;
    let mu = polygon_distribution(x, mu2)?;
    let n = a.n as i64;
    Ok(polygon_violations(x, a)
        .into_iter()
        .zip(&mu)
        .map(|(v, p)| p * ratio(v as i64, n))
        .sum())
}

/// [`coboundary_norm`] computed by averaging over every distinct
/// orientation; used to cross-check the single-representative shortcut.
pub fn coboundary_norm_averaged(x: &PolygonalComplex, a: &Cochain1, mu2: Option<&[Rational]>) -> Result<Rational> {
    a.check_graph(x.skeleton())?;
    let mu = polygon_distribution(x, mu2)?;
    let id = Permutation::identity(a.n);
    let mut total = Rational::zero();
    for (c, p) in x.polygons().iter().zip(&mu) {
        let sum: Rational = c
            .orientations
            .iter()
            .map(|o| hamming_distance_with_errors(&a.path_value_unchecked(o.edges()), &id))
            .sum();
        total += p * sum / ratio(c.orientations.len() as i64, 1);
    }
    Ok(total)
}

/// `E_{[e]} d_h(α(e), φ(e))`, uniform over edges or under `mu1`; degrees may differ.
pub fn cochain_distance(a: &Cochain1, b: &Cochain1, mu1: Option<&[Rational]>) -> Result<Rational> {
    if a.values.len() != b.values.len() {
        return Err(Error::InvalidCochain(format!(
            "cochains live on different complexes ({} vs {} edges)",
            a.values.len(),
            b.values.len()
        )));
    }
    if a.values.is_empty() {
        return Ok(Rational::zero());
    }
    if let Some(m) = mu1 {
        check_distribution(m, a.values.len(), "mu1")?;
        return Ok(a.values.iter().zip(&b.values).zip(m).map(|((p, q), w)| w * hamming_distance_with_errors(p, q)).sum());
    }
    let big = a.n.max(b.n);
    let total: usize = a.values.iter().zip(&b.values).map(|(p, q)| disagreements(p, q)).sum();
    Ok(ratio(total as i64, (big * a.values.len()) as i64))
}

/// Vertex-wise distance between 0-cochains, uniform over vertices.
pub fn cochain0_distance(a: &Cochain0, b: &Cochain0) -> Result<Rational> {
    if a.values.len() != b.values.len() {
        return Err(Error::InvalidCochain("0-cochains live on different graphs".into()));
    }
    let big = a.n.max(b.n);
    let total: usize = a.values.iter().zip(&b.values).map(|(p, q)| disagreements(p, q)).sum();
    Ok(ratio(total as i64, (big * a.values.len().max(1)) as i64))
}

/// `E_{[π]∼μ₂} E_{orientation} d_h(δα(π), δφ(π))`.
///
/// Distances between permutations of different degrees are not conjugation
/// invariant, so this averages over the distinct orientations explicitly.
pub fn coboundary_distance(x: &PolygonalComplex, a: &Cochain1, b: &Cochain1, mu2: Option<&[Rational]>) -> Result<Rational> {
    a.check_graph(x.skeleton())?;
    b.check_graph(x.skeleton())?;
    let mu = polygon_distribution(x, mu2)?;
    let mut total = Rational::zero();
    for (c, p) in x.polygons().iter().zip(&mu) {
        let sum: Rational = c
            .orientations
            .iter()
            .map(|o| {
                hamming_distance_with_errors(&a.path_value_unchecked(o.edges()), &b.path_value_unchecked(o.edges()))
            })
            .sum();
        total += p * sum / ratio(c.orientations.len() as i64, 1);
    }
    Ok(total)
}

/// `β.α(x → y) = β(x)⁻¹ α(e) β(y)`.
pub fn act0on1(g: &Graph, beta: &Cochain0, alpha: &Cochain1) -> Result<Cochain1> {
    if beta.n != alpha.n {
        return Err(Error::DegreeMismatch { left: beta.n, right: alpha.n });
    }
    beta.check_graph(g)?;
    alpha.check_graph(g)?;
    let values = g
        .edges()
        .iter()
        .zip(&alpha.values)
        .map(|(&(x, y), a)| beta.value(x).inverse().then_unchecked(a).then_unchecked(beta.value(y)))
        .collect();
    Ok(Cochain1 { n: alpha.n, values })
}

/// `β(y) = α(π_y)` for the tree path `π_y` from `y` to the root; returns
/// `(β.α, β)`, which is the identity on every tree edge.
pub fn tree_normalize(g: &Graph, alpha: &Cochain1, tree: &SpanningTree) -> Result<(Cochain1, Cochain0)> {
    alpha.check_graph(g)?;
    if tree.edges().len() + 1 != g.vertex_count() || tree.edges().iter().any(|&k| k > g.edge_count()) {
        return Err(Error::InvalidInput("not a spanning tree of this graph".into()));
    }
    let mut beta = vec![Permutation::identity(alpha.n); g.vertex_count()];
    for &v in tree.bfs_order() {
        if let Some(s) = tree.parent_edge(v) {
            // π_v = s · π_parent
            let parent = g.terminus(s);
            beta[v - 1] = alpha.value(s).then_unchecked(&beta[parent - 1]);
        }
    }
    let beta = Cochain0 { n: alpha.n, values: beta };
    Ok((act0on1(g, &beta, alpha)?, beta))
}

/// Vertex `(x, i)` has id `(x−1)·n + i`; edge `(k, i)` has id `(k−1)·n + i`
/// and runs from `(x, α(k)(i))` to `(y, i)` over `+k`.
pub fn cochain_to_covering(g: &Graph, alpha: &Cochain1) -> Result<Covering> {
    alpha.check_graph(g)?;
    let n = alpha.n;
    let id = |v: usize, i: usize| (v - 1) * n + i;
    let mut edges = Vec::with_capacity(g.edge_count() * n);
    let mut edge_map = Vec::with_capacity(g.edge_count() * n);
    for (k, (&(x, y), a)) in g.edges().iter().zip(&alpha.values).enumerate() {
        for i in 1..=n {
            edges.push((id(x, a.apply(i)), id(y, i)));
            edge_map.push(k as i64 + 1);
        }
    }
    let vertex_map = (1..=g.vertex_count()).flat_map(|x| std::iter::repeat_n(x, n)).collect();
    let cover = Graph::new(g.vertex_count() * n, edges)?;
    let labeled = LabeledGraph::new(cover, g.clone(), CombinatorialMap { vertex_map, edge_map })?;
    check_covering(labeled, n)
}

/// `α(k)(i)` is the label of the origin of the lift of `+k` ending at label `i`.
pub fn covering_to_cochain(c: &Covering) -> Result<Cochain1> {
    let base = c.base();
    let n = c.degree();
    let mut values = Vec::with_capacity(base.edge_count());
    for k in 1..=base.edge_count() {
        let (_, y) = base.edge(k);
        let mut images = Vec::with_capacity(n);
        for i in 1..=n {
            let back = c
                .lift_table()
                .lift_edge(c.vertex_at(y, i), -(k as i64))
                .ok_or_else(|| Error::NotCovering(format!("edge {k} has no lift at label {i}")))?;
            images.push(c.label(c.graph().terminus(back)).1);
        }
        values.push(Permutation::from_images(&images)?);
    }
    Cochain1::new(n, values)
}

fn check_presentation_shaped(x: &PolygonalComplex, generators: usize) -> Result<()> {
    if x.skeleton().vertex_count() != 1 || x.skeleton().edge_count() != generators {
        return Err(Error::InvalidComplex(format!(
            "expected a single-vertex complex with {generators} edges"
        )));
    }
    Ok(())
}

/// `α_f(e(s)) = f(s)` on a presentation complex.
pub fn images_to_cochain(x: &PolygonalComplex, images: &[Permutation]) -> Result<Cochain1> {
    check_presentation_shaped(x, images.len())?;
    let n = crate::perm::common_degree(images)?;
    Cochain1::new(n, images.to_vec())
}

/// Inverse of [`images_to_cochain`].
pub fn cochain_to_images(x: &PolygonalComplex, alpha: &Cochain1) -> Result<Vec<Permutation>> {
    check_presentation_shaped(x, alpha.edge_count())?;
    Ok(alpha.values.clone())
}

/// `α|_S`: the values on the generators of a spanning-tree presentation.
pub fn restrict_to_generators(alpha: &Cochain1, map: &GeneratorMap) -> Vec<Permutation> {
    map.edges.iter().map(|&k| alpha.values[k - 1].clone()).collect()
}

/// Generator images extended by the identity on tree edges.
pub fn extend_from_generators(images: &[Permutation], map: &GeneratorMap, n: usize) -> Result<Cochain1> {
    if images.len() != map.edges.len() {
        return Err(Error::InvalidInput(format!(
            "{} images for {} generators",
            images.len(),
            map.edges.len()
        )));
    }
    let values = map
        .generator
        .iter()
        .map(|g| g.map_or_else(|| Permutation::identity(n), |j| images[j - 1].clone()))
        .collect();
    Cochain1::new(n, values)
}

/// Whether `p` is a presentation the cochain can be paired with.
pub fn check_images(p: &Presentation, images: &[Permutation]) -> Result<usize> {
    if images.len() != p.generator_count() {
        return Err(Error::InvalidInput(format!(
            "{} images for {} generators",
            images.len(),
            p.generator_count()
        )));
    }
    if images.is_empty() {
        return Ok(1);
    }
    crate::perm::common_degree(images)
}
