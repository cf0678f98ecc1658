//! Cheeger constants by exhaustive search over small coefficient groups.
//!
//! The 0-dimensional constants only ever need targets of the cochain's own
//! degree `m`: a constant `σ ∈ Sym(N)` agrees with `b(v) ∈ Sym(m)` only on
//! points `i ≤ m` with `σ(i) ≤ m`, and those partial matchings extend to a
//! permutation of `Sym(m)` that agrees at least as often over fewer points.

use std::str::FromStr;

use serde::Serialize;

use super::global::{coboundary_distance_search, cocycle_global_defect, Exactness, SearchConfig};
use super::homs::Budget;
use super::spectral::{coboundary0_norm, nearest_blockwise};
use crate::cochain::{coboundary_norm, Cochain0, Cochain1};
use crate::complex::PolygonalComplex;
use crate::graph::Graph;
use crate::perm::{all_permutations, Permutation};
use crate::{ratio, Error, Rational, Result};

/// Largest vertex count accepted by the classical subset enumeration.
pub const MAX_CLASSICAL_VERTICES: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheegerVariant {
    Classical,
    Cocycle,
    Coboundary,
}

impl FromStr for CheegerVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "classical" => Ok(Self::Classical),
            "cocycle" => Ok(Self::Cocycle),
            "coboundary" => Ok(Self::Coboundary),
            other => Err(Error::InvalidInput(format!("unknown Cheeger variant {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CheegerWitness {
    /// The smaller side of the cut.
    Subset(Vec<usize>),
    Cochain0(Cochain0),
    Cochain1(Cochain1),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheegerReport {
    pub dimension: u8,
    pub variant: CheegerVariant,
    pub coeff_cap: usize,
    /// `None` when no cochain qualifies, so the infimum is over the empty set.
    pub value: Option<Rational>,
    pub witness: Option<CheegerWitness>,
    pub exactness: Exactness,
}

/// `min |E(A, Ā)| / min(|A|, |Ā|)` over nonempty proper subsets `A`.
pub fn classical_cheeger(g: &Graph) -> Result<CheegerReport> {
    let v = g.vertex_count();
    if v < 2 {
        return Err(Error::InvalidGraph("the classical Cheeger constant needs at least 2 vertices".into()));
    }
    if v > MAX_CLASSICAL_VERTICES {
        return Err(Error::GuardExceeded(format!("{v} vertices exceeds the subset enumeration cap")));
    }
    let mut best: Option<(Rational, u32)> = None;
    // vertex 1 is always outside A; complements give the same ratio
    for mask in 1u32..(1 << (v - 1)) {
        let inside = |x: usize| x > 1 && mask & (1 << (x - 2)) != 0;
        let cut = g.edges().iter().filter(|&&(a, b)| inside(a) != inside(b)).count();
        let size = mask.count_ones() as usize;
        let r = ratio(cut as i64, size.min(v - size) as i64);
        if best.as_ref().is_none_or(|(b, _)| r < *b) {
            best = Some((r, mask));
        }
    }
    let (value, mask) = best.expect("v ≥ 2 gives a proper subset");
    let side: Vec<usize> = (2..=v).filter(|&x| mask & (1 << (x - 2)) != 0).collect();
    let side = if 2 * side.len() <= v { side } else { (1..=v).filter(|x| !side.contains(x)).collect() };
    Ok(CheegerReport {
        dimension: 0,
        variant: CheegerVariant::Classical,
        coeff_cap: 2,
        value: Some(value),
        witness: Some(CheegerWitness::Subset(side)),
        exactness: Exactness::ExactWithinCap,
    })
}

/// Calls `visit` on every tuple in `Sym(m)^len` whose first `fixed` entries
/// are the identity.
fn for_each_tuple(
    m: usize,
    len: usize,
    fixed: usize,
    budget: &Budget,
    visit: &mut dyn FnMut(&[Permutation]) -> Result<()>,
) -> Result<()> {
    let perms = all_permutations(m);
    let mut idx = vec![0usize; len];
    loop {
        budget.tick()?;
        let tuple: Vec<Permutation> = idx.iter().map(|&i| perms[i].clone()).collect();
        visit(&tuple)?;
        let mut pos = len;
        loop {
            if pos == fixed.min(len) {
                return Ok(());
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < perms.len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}

fn better(best: &Option<(Rational, CheegerWitness)>, r: &Rational) -> bool {
    best.as_ref().is_none_or(|(b, _)| r < b)
}

/// `h₀` (cocycle variant: distance to locally constant cochains) or `h₀^B`
/// (coboundary variant: distance to constants) over `Sym(2) … Sym(coeff_cap)`.
pub fn cheeger0(g: &Graph, variant: CheegerVariant, coeff_cap: usize, guard: u64) -> Result<CheegerReport> {
    if variant == CheegerVariant::Classical {
        return classical_cheeger(g);
    }
    if coeff_cap < 2 {
        return Err(Error::InvalidInput("coefficient cap must be at least 2".into()));
    }
    let v = g.vertex_count();
    let labels = match variant {
        CheegerVariant::Cocycle => g.components(),
        _ => vec![0; v],
    };
    let budget = Budget::new(guard);
    let mut best: Option<(Rational, CheegerWitness)> = None;
    for m in 2..=coeff_cap {
        // left translation by a constant preserves both ratios
        for_each_tuple(m, v, 1, &budget, &mut |t| {
            let b = Cochain0::new(m, t.to_vec())?;
            let (d, big, _) = nearest_blockwise(&b, &labels, 0);
            if d == 0 {
                return Ok(());
            }
            let r = coboundary0_norm(g, &b)? / ratio(d as i64, (v * big) as i64);
            if better(&best, &r) {
                best = Some((r, CheegerWitness::Cochain0(b)));
            }
            Ok(())
        })?;
    }
    let (value, witness) = best.unzip();
    Ok(CheegerReport { dimension: 0, variant, coeff_cap, value, witness, exactness: Exactness::ExactWithinCap })
}

/// `h₁` or `h₁^B` over `Sym(2) … Sym(coeff_cap)`, with distances to `Z¹`
/// and `B¹` from the bounded global search under `cfg`.
pub fn cheeger1(x: &PolygonalComplex, variant: CheegerVariant, coeff_cap: usize, cfg: &SearchConfig) -> Result<CheegerReport> {
    if variant == CheegerVariant::Classical {
        return Err(Error::InvalidInput("the classical Cheeger constant is 0-dimensional".into()));
    }
    if coeff_cap < 2 {
        return Err(Error::InvalidInput("coefficient cap must be at least 2".into()));
    }
    let g = x.skeleton();
    let budget = Budget::new(cfg.guard);
    let mut best: Option<(Rational, CheegerWitness)> = None;
    let mut exactness = Exactness::ExactWithinCap;
    for m in 2..=coeff_cap {
        for_each_tuple(m, g.edge_count(), 0, &budget, &mut |t| {
            let alpha = Cochain1::new(m, t.to_vec())?;
            let norm = coboundary_norm(x, &alpha, None)?;
            if variant == CheegerVariant::Cocycle && norm == ratio(0, 1) {
                return Ok(());
            }
            let r = match variant {
                CheegerVariant::Cocycle => cocycle_global_defect(x, &alpha, cfg)?,
                _ => coboundary_distance_search(g, &alpha, cfg)?,
            };
            if r.exactness == Exactness::Heuristic {
                exactness = Exactness::Heuristic;
            }
            if r.upper_bound == ratio(0, 1) {
                return Ok(());
            }
            let q = norm / r.upper_bound;
            if better(&best, &q) {
                best = Some((q, CheegerWitness::Cochain1(alpha)));
            }
            Ok(())
        })?;
    }
    let (value, witness) = best.unzip();
    Ok(CheegerReport { dimension: 1, variant, coeff_cap, value, witness, exactness })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Path;
    use crate::stability::DEFAULT_GUARD;

    fn k4() -> Graph {
        Graph::new(4, vec![(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]).unwrap()
    }

    #[test]
    fn classical_k4() {
        let r = classical_cheeger(&k4()).unwrap();
        assert_eq!(r.value, Some(ratio(2, 1)));
        let Some(CheegerWitness::Subset(a)) = r.witness else { panic!() };
        assert_eq!(a.len(), 2);
    }

    #[test]
    fn f2_k4() {
        let r = cheeger0(&k4(), CheegerVariant::Cocycle, 2, DEFAULT_GUARD).unwrap();
        assert_eq!(r.value, Some(ratio(4, 3)));
    }

    #[test]
    fn disconnected_h0() {
        let g = Graph::new(4, vec![(1, 2), (3, 4)]).unwrap();
        let r = cheeger0(&g, CheegerVariant::Coboundary, 2, DEFAULT_GUARD).unwrap();
        assert_eq!(r.value, Some(ratio(0, 1)));
        let r = cheeger0(&g, CheegerVariant::Cocycle, 2, DEFAULT_GUARD).unwrap();
        assert!(r.value.unwrap() > ratio(0, 1));
    }

    #[test]
    fn triangle_h1() {
        let g = Graph::new(3, vec![(1, 2), (2, 3), (3, 1)]).unwrap();
        let x = PolygonalComplex::new(g, &[Path::new(vec![1, 2, 3])]).unwrap();
        // one flipped edge: ‖δα‖ = 1 at distance 1/3
        let r = cheeger1(&x, CheegerVariant::Cocycle, 2, &SearchConfig::default()).unwrap();
        assert_eq!(r.value, Some(ratio(3, 1)));
    }
}
