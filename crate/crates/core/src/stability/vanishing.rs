use std::collections::HashSet;

use serde::Serialize;

use super::homs::{backtrack_homs, Budget};
use crate::cochain::{coboundary0, polygon_violations, Cochain0, Cochain1};
use crate::complex::{fundamental_presentation, PolygonalComplex};
use crate::graph::Graph;
use crate::perm::{all_permutations, factorial, Permutation};
use crate::{Error, Result};

/// Largest `(N!)^m` enumerated by the brute-force cross-checks.
pub const BRUTE_FORCE_CAP: u128 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct H1Level {
    pub n: usize,
    pub vanishes: bool,
    /// Generator images of a nontrivial homomorphism of the tree presentation.
    pub nontrivial: Option<Vec<Permutation>>,
    pub cocycles: Option<u128>,
    pub coboundaries: Option<u128>,
}

fn power(base: u128, exp: usize) -> Option<u128> {
    (0..exp).try_fold(1u128, |acc, _| acc.checked_mul(base))
}

fn tuples(n: usize, len: usize) -> impl Iterator<Item = Vec<Permutation>> {
    let perms = all_permutations(n);
    let total = power(perms.len() as u128, len).expect("caller checked the size");
    (0..total).map(move |mut code| {
        (0..len)
            .map(|_| {
                let p = perms[(code % perms.len() as u128) as usize].clone();
                code /= perms.len() as u128;
                p
            })
            .collect()
    })
}

/// Whether `Z¹(X, Sym(N)) = B¹(X, Sym(N))` for each `N ≤ n_cap`.
///
/// A cocycle is a coboundary exactly when its tree-normalized form is the
/// identity, so this is decided by looking for a nontrivial homomorphism of
/// the spanning-tree presentation. When small enough, `Z¹` and `B¹` are also
/// counted by brute force and the two answers must agree.
pub fn h1_vanishing_check(x: &PolygonalComplex, n_cap: usize, guard: u64) -> Result<Vec<H1Level>> {
    let g = x.skeleton();
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let (pres, _, _) = fundamental_presentation(x, 1)?;
    let mut out = Vec::new();
    for n in 1..=n_cap {
        let budget = Budget::new(guard);
        let candidates = vec![all_permutations(n); pres.generator_count()];
        let mut nontrivial = None;
        let search = backtrack_homs(&pres, n, &candidates, &budget, &mut |_| false, &mut |h| {
            if h.iter().any(|p| !p.is_identity()) {
                nontrivial = Some(h.to_vec());
                // stop at the first witness
                return Err(Error::GuardExceeded(String::new()));
            }
            Ok(())
        });
        if nontrivial.is_none() {
            search?;
        }
        let vanishes = nontrivial.is_none();
        let nf = factorial(n);
        let small = |m: usize| power(nf, m).is_some_and(|c| c <= BRUTE_FORCE_CAP);
        let (cocycles, coboundaries) = if small(g.edge_count()) && small(g.vertex_count()) {
            let z = tuples(n, g.edge_count())
                .filter(|t| polygon_violations(x, &Cochain1::new(n, t.clone()).expect("degree n")).iter().all(|&v| v == 0))
                .count() as u128;
            let mut b = HashSet::new();
            for t in tuples(n, g.vertex_count()) {
                b.insert(coboundary0(g, &Cochain0::new(n, t)?)?);
            }
            let b = b.len() as u128;
            assert_eq!(vanishes, z == b, "brute-force count disagrees with the tree presentation at N = {n}");
            (Some(z), Some(b))
        } else {
            (None, None)
        };
        out.push(H1Level { n, vanishes, nontrivial, cocycles, coboundaries });
    }
    Ok(out)
}

/// Whether every 0-cocycle in `Sym(n)` is constant, by brute force.
pub fn h0_vanishes(g: &Graph, n: usize) -> Result<bool> {
    let count = power(factorial(n), g.vertex_count()).filter(|&c| c <= BRUTE_FORCE_CAP);
    if count.is_none() {
        return Err(Error::GuardExceeded(format!("(N!)^V exceeds {BRUTE_FORCE_CAP}")));
    }
    let cocycles = tuples(n, g.vertex_count())
        .filter(|t| g.edges().iter().all(|&(a, b)| t[a - 1] == t[b - 1]))
        .count() as u128;
    Ok(cocycles == factorial(n))
}
