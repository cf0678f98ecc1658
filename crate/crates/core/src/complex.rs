//! Polygonal complexes, group presentations and edge weightings.
//!
//! A polygon is stored as an orbit class: every shift and inverse of a
//! closed, cyclically reduced path. Its canonical representative is the
//! lexicographic minimum under the signed-edge order `-1 < 1 < -2 < 2 < …`.

use std::collections::BTreeSet;

use num::{One, Zero};

use crate::graph::{spanning_tree, Graph, Path, SpanningTree};
use crate::perm::SignedWord;
use crate::{ratio, Error, Rational, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolygonClass {
    /// The path the class was built from.
    pub representative: Path,
    pub canonical: Path,
    /// Distinct orientations in signed-key order.
    pub orientations: Vec<Path>,
}

impl PolygonClass {
    pub fn len(&self) -> usize {
        self.canonical.len()
    }

    pub fn is_empty(&self) -> bool {
        self.canonical.is_empty()
    }

    pub fn contains(&self, p: &Path) -> bool {
        self.orientations.binary_search_by(|o| o.key().cmp(&p.key())).is_ok()
    }
}

/// The orbit of a closed, cyclically reduced path under shifts and inversion.
pub fn polygon_orbit(g: &Graph, p: &Path) -> Result<PolygonClass> {
    p.validate(g)?;
    if p.is_empty() {
        return Err(Error::InvalidComplex("polygon is empty".into()));
    }
    if !p.is_closed(g) {
        return Err(Error::InvalidComplex("polygon is not closed".into()));
    }
    if !p.is_cyclically_reduced() {
        return Err(Error::InvalidComplex("polygon is not cyclically reduced".into()));
    }
    let inv = p.inverse();
    let mut orientations: Vec<Path> = (0..p.len()).flat_map(|k| [p.shift(k), inv.shift(k)]).collect();
    orientations.sort_by_key(|o| o.key());
    orientations.dedup();
    Ok(PolygonClass {
        representative: p.clone(),
        canonical: orientations[0].clone(),
        orientations,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolygonalComplex {
    skeleton: Graph,
    polygons: Vec<PolygonClass>,
}

/// Build a complex from one representative per polygon, checking every rule.
pub fn validate_complex(skeleton: Graph, polygons: &[Path]) -> Result<PolygonalComplex> {
    let mut classes = Vec::with_capacity(polygons.len());
    let mut seen = BTreeSet::new();
    for (i, p) in polygons.iter().enumerate() {
        let class = polygon_orbit(&skeleton, p)
            .map_err(|e| Error::InvalidComplex(format!("polygon {}: {}", i + 1, strip(&e))))?;
        if !seen.insert(class.canonical.key()) {
            return Err(Error::InvalidComplex(format!("polygon {}: duplicate pasted path", i + 1)));
        }
        classes.push(class);
    }
    Ok(PolygonalComplex { skeleton, polygons: classes })
}

fn strip(e: &Error) -> String {
    match e {
        Error::InvalidComplex(m) | Error::InvalidPath(m) => m.clone(),
        other => other.to_string(),
    }
}

impl PolygonalComplex {
    pub fn new(skeleton: Graph, polygons: &[Path]) -> Result<Self> {
        validate_complex(skeleton, polygons)
    }

    pub fn skeleton(&self) -> &Graph {
        &self.skeleton
    }

    pub fn polygons(&self) -> &[PolygonClass] {
        &self.polygons
    }

    pub fn polygon_count(&self) -> usize {
        self.polygons.len()
    }

    /// Original representatives, in class order.
    pub fn representatives(&self) -> Vec<Path> {
        self.polygons.iter().map(|c| c.representative.clone()).collect()
    }

    /// The class containing `p` as an orientation.
    pub fn class_of(&self, p: &Path) -> Option<usize> {
        self.polygons.iter().position(|c| c.contains(p))
    }
}

/// A finite presentation `⟨S | R⟩` with generators `1..=generator_count`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    generator_count: usize,
    relators: Vec<SignedWord>,
}

impl Presentation {
    pub fn new(generator_count: usize, relators: Vec<SignedWord>) -> Result<Self> {
        for (i, r) in relators.iter().enumerate() {
            r.check_alphabet(generator_count).map_err(|_| {
                Error::InvalidPresentation(format!(
                    "relator {} uses generator {} of {generator_count}",
                    i + 1,
                    r.max_index()
                ))
            })?;
        }
        Ok(Presentation { generator_count, relators })
    }

    pub fn generator_count(&self) -> usize {
        self.generator_count
    }

    pub fn relators(&self) -> &[SignedWord] {
        &self.relators
    }
}

/// Single vertex, one loop per generator, one polygon per reduced relator.
pub fn presentation_complex(p: &Presentation) -> Result<PolygonalComplex> {
    let skeleton = Graph::new(1, vec![(1, 1); p.generator_count()])?;
    let mut polygons = Vec::with_capacity(p.relators().len());
    for (i, r) in p.relators().iter().enumerate() {
        let reduced = r.cyclically_reduced();
        if reduced.is_empty() {
            return Err(Error::InvalidPresentation(format!(
                "relator {} is trivial after reduction",
                i + 1
            )));
        }
        polygons.push(Path::new(reduced.letters().to_vec()));
    }
    validate_complex(skeleton, &polygons)
}

/// Correspondence between generators of a spanning-tree presentation and
/// the non-tree edges they came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorMap {
    /// `edges[j-1]` is the edge behind generator `j`.
    pub edges: Vec<usize>,
    /// `generator[k-1]` is the generator of edge `k`, if it is off the tree.
    pub generator: Vec<Option<usize>>,
}

/// Presentation of the fundamental group from the breadth-first tree at `root`.
pub fn fundamental_presentation(x: &PolygonalComplex, root: usize) -> Result<(Presentation, SpanningTree, GeneratorMap)> {
    let tree = spanning_tree(x.skeleton(), root)?;
    let (p, map) = fundamental_presentation_with_tree(x, &tree)?;
    Ok((p, tree, map))
}

/// Generators are the non-tree edges in ascending id order; each polygon's
/// representative becomes a relator by deleting its tree edges.
pub fn fundamental_presentation_with_tree(x: &PolygonalComplex, tree: &SpanningTree) -> Result<(Presentation, GeneratorMap)> {
    let g = x.skeleton();
    let mut edges = Vec::new();
    let mut generator = vec![None; g.edge_count()];
    for k in 1..=g.edge_count() {
        if !tree.contains(k) {
            edges.push(k);
            generator[k - 1] = Some(edges.len());
        }
    }
    let relators = x
        .polygons()
        .iter()
        .map(|c| {
            let letters = c
                .representative
                .edges()
                .iter()
                .filter_map(|&s| generator[s.unsigned_abs() as usize - 1].map(|j| s.signum() * j as i64))
                .collect();
            SignedWord::new(letters)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((Presentation::new(edges.len(), relators)?, GeneratorMap { edges, generator }))
}

/// Distributions on polygon classes and on unoriented edges tied together by
/// occurrence counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightingSystem {
    pub mu2: Vec<Rational>,
    pub mu1: Vec<Rational>,
    /// `w([e]) = E_{μ₂}[OC(e ≺ π)]`.
    pub w: Vec<Rational>,
    pub expected_length: Rational,
}

pub fn uniform(len: usize) -> Vec<Rational> {
    vec![ratio(1, len.max(1) as i64); len]
}

/// Nonnegative entries summing to one, with the expected length.
pub fn check_distribution(v: &[Rational], len: usize, what: &str) -> Result<()> {
    if v.len() != len {
        return Err(Error::InvalidDistribution(format!("{what} has {} entries, expected {len}", v.len())));
    }
    if let Some(i) = v.iter().position(|p| p < &Rational::zero()) {
        return Err(Error::InvalidDistribution(format!("{what} entry {} is negative", i + 1)));
    }
    let total: Rational = v.iter().sum();
    if !total.is_one() {
        return Err(Error::InvalidDistribution(format!("{what} sums to {total}, not 1")));
    }
    Ok(())
}

/// Number of positions of `p` carrying edge `k` in either orientation.
pub fn occurrences(p: &Path, k: usize) -> usize {
    p.edges().iter().filter(|s| s.unsigned_abs() as usize == k).count()
}

/// Induced edge weights; `mu2 = None` means uniform on polygon classes.
pub fn polygon_weights(x: &PolygonalComplex, mu2: Option<&[Rational]>) -> Result<WeightingSystem> {
    if x.polygon_count() == 0 {
        return Err(Error::InvalidComplex("complex has no polygons; edge weights are undefined".into()));
    }
    let mu2 = match mu2 {
        Some(m) => {
            check_distribution(m, x.polygon_count(), "mu2")?;
            m.to_vec()
        }
        None => uniform(x.polygon_count()),
    };
    let mut w = vec![Rational::zero(); x.skeleton().edge_count()];
    for (class, p) in x.polygons().iter().zip(&mu2) {
        for &s in class.canonical.edges() {
            w[s.unsigned_abs() as usize - 1] += p;
        }
    }
    let expected_length: Rational = w.iter().sum();
    let mu1 = w.iter().map(|v| v / &expected_length).collect();
    Ok(WeightingSystem { mu2, mu1, w, expected_length })
}
