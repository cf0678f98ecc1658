//! Standard graphs, complexes and presentations used by the tests, the
//! acceptance suite and `permstab generate`.

use rand::Rng;

use crate::cochain::{act0on1, coboundary_norm, extend_from_generators, Cochain0, Cochain1};
use crate::complex::{fundamental_presentation, presentation_complex, PolygonalComplex, Presentation};
use crate::graph::{Graph, Path, SpanningTree};
use crate::perm::{random_permutation, Permutation, SignedWord};
use crate::stability::enumerate_homomorphisms;
use crate::{Error, Rational, Result};

fn pres(k: usize, relators: &[&[i64]]) -> Presentation {
    Presentation::new(k, relators.iter().map(|r| SignedWord::new(r.to_vec()).expect("nonzero letters")).collect())
        .expect("valid presentation")
}

/// `⟨a | aᵐ⟩`.
pub fn cyclic_presentation(m: usize) -> Presentation {
    pres(1, &[&vec![1; m]])
}

/// `⟨a, b | aba⁻¹b⁻¹⟩`.
pub fn torus_presentation() -> Presentation {
    pres(2, &[&[1, 2, -1, -2]])
}

/// One vertex with `k` loops and no polygons.
pub fn bouquet(k: usize) -> PolygonalComplex {
    PolygonalComplex::new(Graph::new(1, vec![(1, 1); k]).expect("valid graph"), &[]).expect("no polygons")
}

pub fn torus_complex() -> PolygonalComplex {
    presentation_complex(&torus_presentation()).expect("valid relator")
}

/// The filled triangle: a 3-cycle with one polygon.
pub fn triangle_complex() -> PolygonalComplex {
    let g = cycle_graph(3);
    PolygonalComplex::new(g, &[Path::new(vec![1, 2, 3])]).expect("closed reduced polygon")
}

pub fn cycle_graph(n: usize) -> Graph {
    Graph::new(n, (1..=n).map(|i| (i, i % n + 1)).collect()).expect("valid graph")
}

/// Edges `ij` for `i < j` in lexicographic order.
pub fn complete_graph(n: usize) -> Graph {
    let mut e = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            e.push((i, j));
        }
    }
    Graph::new(n, e).expect("valid graph")
}

/// Id of edge `ij` (`i < j`) in [`complete_graph`].
pub fn complete_edge_id(d: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j <= d);
    (1..i).map(|a| d - a).sum::<usize>() + (j - i)
}

/// Outer 5-cycle `1..5`, spokes `i → i+5`, inner pentagram.
pub fn petersen() -> Graph {
    let mut e: Vec<(usize, usize)> = (1..=5).map(|i| (i, i % 5 + 1)).collect();
    e.extend((1..=5).map(|i| (i, i + 5)));
    e.extend((1..=5).map(|i| (i + 5, (i + 1) % 5 + 6)));
    Graph::new(10, e).expect("valid graph")
}

/// The 3-cube on vertices `1..8` (bit patterns of `v − 1`).
pub fn cube() -> Graph {
    let mut e = Vec::new();
    for a in 0..8usize {
        for bit in [1, 2, 4] {
            if a & bit == 0 {
                e.push((a + 1, (a | bit) + 1));
            }
        }
    }
    Graph::new(8, e).expect("valid graph")
}

pub fn k33() -> Graph {
    let e = (1..=3).flat_map(|i| (4..=6).map(move |j| (i, j))).collect();
    Graph::new(6, e).expect("valid graph")
}

/// Complete graph with every triangle `[e_ij, e_jk, −e_ik]`, `i < j < k`, filled.
pub fn complete_complex(d: usize) -> PolygonalComplex {
    let g = complete_graph(d);
    let mut polygons = Vec::new();
    for i in 1..=d {
        for j in i + 1..=d {
            for k in j + 1..=d {
                let (ij, jk, ik) = (complete_edge_id(d, i, j), complete_edge_id(d, j, k), complete_edge_id(d, i, k));
                polygons.push(Path::new(vec![ij as i64, jk as i64, -(ik as i64)]));
            }
        }
    }
    PolygonalComplex::new(g, &polygons).expect("triangles are closed and reduced")
}

/// The tightness family: complete complex, path tree `1-2-…-d`, and the
/// cochain that is `(1 2)` on cut edges between `{1..⌊d/2⌋}` and the
/// rest, except on the one cut edge of the tree.
#[derive(Clone, Debug)]
pub struct CutInstance {
    pub complex: PolygonalComplex,
    pub tree: SpanningTree,
    pub alpha: Cochain1,
}

pub fn cut_family(d: usize) -> Result<CutInstance> {
    if d < 3 {
        return Err(Error::InvalidInput("the cut family needs d ≥ 3".into()));
    }
    let complex = complete_complex(d);
    let tree_edges: Vec<usize> = (1..d).map(|i| complete_edge_id(d, i, i + 1)).collect();
    let tree = SpanningTree::from_edges(complex.skeleton(), 1, tree_edges.iter().copied())?;
    let half = d / 2;
    let flip = Permutation::from_images(&[2, 1]).expect("transposition");
    let values = complex
        .skeleton()
        .edges()
        .iter()
        .enumerate()
        .map(|(k, &(i, j))| {
            if i <= half && half < j && !tree_edges.contains(&(k + 1)) {
                flip.clone()
            } else {
                Permutation::identity(2)
            }
        })
        .collect();
    Ok(CutInstance { complex, tree, alpha: Cochain1::new(2, values)? })
}

/// Each edge independently with probability `p`.
pub fn random_graph<R: Rng + ?Sized>(v: usize, p: f64, rng: &mut R) -> Graph {
    let mut e = Vec::new();
    for i in 1..=v {
        for j in i + 1..=v {
            if rng.gen_bool(p) {
                e.push((i, j));
            }
        }
    }
    Graph::new(v, e).expect("valid graph")
}

/// A uniformly chosen cocycle of degree `n`: a homomorphism of the
/// spanning-tree presentation moved by a uniform 0-cochain.
pub fn random_cocycle<R: Rng + ?Sized>(x: &PolygonalComplex, n: usize, guard: u64, rng: &mut R) -> Result<Cochain1> {
    let (p, _, map) = fundamental_presentation(x, 1)?;
    let homs = enumerate_homomorphisms(&p, n, guard)?;
    let h = &homs[rng.gen_range(0..homs.len())];
    let g = x.skeleton();
    act0on1(g, &Cochain0::random(g.vertex_count(), n, rng), &extend_from_generators(h, &map, n)?)
}

/// A corrupted cocycle whose local defect is within `tolerance` of
/// `target`, by rejection sampling over corruption levels. Returns the
/// cochain and its exact defect.
pub fn random_instance<R: Rng + ?Sized>(
    x: &PolygonalComplex,
    n: usize,
    target: f64,
    tolerance: f64,
    attempts: usize,
    rng: &mut R,
) -> Result<(Cochain1, Rational)> {
    if !(0.0..=1.0).contains(&target) {
        return Err(Error::InvalidInput(format!("target defect {target} is outside [0, 1]")));
    }
    let m = x.skeleton().edge_count();
    for _ in 0..attempts {
        let mut alpha = random_cocycle(x, n, crate::stability::DEFAULT_GUARD, rng)?;
        let level = rng.gen_range(0.0..=1.0f64);
        for k in 1..=m {
            if rng.gen_bool(level) {
                alpha.set(k, random_permutation(n, rng))?;
            }
        }
        let defect = coboundary_norm(x, &alpha, None)?;
        if (crate::to_f64(&defect) - target).abs() <= tolerance {
            return Ok((alpha, defect));
        }
    }
    Err(Error::InvalidInput(format!("no sample within {tolerance} of defect {target} after {attempts} attempts")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio;

    #[test]
    fn shapes() {
        assert_eq!(complete_graph(5).edge_count(), 10);
        assert_eq!(complete_complex(5).polygon_count(), 10);
        for g in [petersen(), cube(), k33()] {
            let k = g.degree(1);
            assert!((1..=g.vertex_count()).all(|v| g.degree(v) == k));
            assert!(g.is_connected());
        }
        assert_eq!(complete_edge_id(4, 3, 4), 6);
        assert_eq!(complete_graph(4).edge(complete_edge_id(4, 2, 4)), (2, 4));
    }

    #[test]
    fn cut_instance() {
        let r = cut_family(6).unwrap();
        assert_eq!(coboundary_norm(&r.complex, &r.alpha, None).unwrap(), ratio(1, 5));
        let flipped = r.alpha.values().iter().filter(|p| !p.is_identity()).count();
        assert_eq!(flipped, 8);
    }
}
