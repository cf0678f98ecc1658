//! Global defects by bounded search.
//!
//! Every search covers target degrees `N ∈ [n, N_max]` in ascending order and
//! compares candidates by exact disagreement counts: a candidate of degree
//! `N` with `D` disagreements over `m` cells has distance `D / (m·N)`.
//! Lower bounds use that a cell compared against a degree-`N` value always
//! disagrees on at least `N − n` points.

use serde::Serialize;

use super::homs::{backtrack_homs, Budget, DEFAULT_GUARD};
use crate::cochain::{
    act0on1, cochain_to_covering, coboundary_norm, covering_to_cochain, extend_from_generators, Cochain0, Cochain1,
};
use crate::complex::{fundamental_presentation_with_tree, PolygonalComplex, Presentation};
use crate::graph::{edit_distance, spanning_tree, Covering, EditMode, Graph, DEFAULT_EDIT_GUARD};
use crate::perm::{all_permutations, disagreements, evaluate_unchecked, Permutation};
use crate::testers::DefectKind;
use crate::{ratio, Error, Rational, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    /// Largest target degree; `None` means `n + 2`.
    pub n_max: Option<usize>,
    /// Cap on explored search nodes.
    pub guard: u64,
    /// Return the best bound found when the guard trips instead of failing.
    pub allow_heuristic: bool,
    /// Cap on fiber alignments for the exact edit distance.
    pub edit_guard: u128,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { n_max: None, guard: DEFAULT_GUARD, allow_heuristic: true, edit_guard: DEFAULT_EDIT_GUARD }
    }
}

impl SearchConfig {
    pub fn with_n_max(n_max: usize) -> Self {
        SearchConfig { n_max: Some(n_max), ..Self::default() }
    }

    fn cap(&self, n: usize) -> Result<usize> {
        let cap = self.n_max.unwrap_or(n + 2);
        if cap < n {
            return Err(Error::InvalidInput(format!("N_max = {cap} is below the input degree {n}")));
        }
        Ok(cap)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Exactness {
    /// The minimum over every target of degree at most `N_max`.
    ExactWithinCap,
    /// The guard tripped; the value is the best bound found.
    Heuristic,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    Homomorphism(Vec<Permutation>),
    Cocycle(Cochain1),
    Cover(Box<Covering>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlobalDefectResult {
    pub kind: DefectKind,
    pub upper_bound: Rational,
    pub witness: Witness,
    pub witness_degree: usize,
    pub n_max_searched: usize,
    pub exactness: Exactness,
    pub nodes: u64,
}

/// Best candidate so far as `(disagreements, degree)`.
struct Best<W> {
    d: usize,
    deg: usize,
    witness: W,
}

impl<W> Best<W> {
    /// `d / deg < self.d / self.deg`.
    fn beaten_by(&self, d: usize, deg: usize) -> bool {
        (d as u128) * (self.deg as u128) < (self.d as u128) * (deg as u128)
    }
}

fn finish<T>(r: Result<T>, cfg: &SearchConfig) -> Result<Exactness> {
    match r {
        Ok(_) => Ok(Exactness::ExactWithinCap),
        Err(Error::GuardExceeded(_)) if cfg.allow_heuristic => Ok(Exactness::Heuristic),
        Err(e) => Err(e),
    }
}

/// `min_φ E_s d_h(f(s), φ(s))` over homomorphisms of degree `N ∈ [n, N_max]`.
pub fn hom_global_defect(p: &Presentation, images: &[Permutation], cfg: &SearchConfig) -> Result<GlobalDefectResult> {
    let n = crate::cochain::check_images(p, images)?;
    let cap = cfg.cap(n)?;
    let k = p.generator_count();
    let budget = Budget::new(cfg.guard);
    let already = p.relators().iter().all(|r| evaluate_unchecked(r.letters(), images, n).is_identity());
    if k == 0 || already {
        return Ok(GlobalDefectResult {
            kind: DefectKind::Hom,
            upper_bound: ratio(0, 1),
            witness: Witness::Homomorphism(images.to_vec()),
            witness_degree: n,
            n_max_searched: cap,
            exactness: Exactness::ExactWithinCap,
            nodes: 0,
        });
    }
    let id = Permutation::identity(n);
    let mut best = Best {
        d: images.iter().map(|f| disagreements(f, &id)).sum(),
        deg: n,
        witness: vec![id; k],
    };
    let outcome = (|| -> Result<()> {
        for big in n..=cap {
            let perms = all_permutations(big);
            // try images closest to f(s) first
            let candidates: Vec<Vec<Permutation>> = images
                .iter()
                .map(|f| {
                    let mut c = perms.clone();
                    c.sort_by_key(|q| disagreements(f, q));
                    c
                })
                .collect();
            let slack = big - n;
            let best_cell = std::cell::RefCell::new(&mut best);
            backtrack_homs(
                p,
                big,
                &candidates,
                &budget,
                &mut |prefix| {
                    let partial: usize = prefix.iter().zip(images).map(|(q, f)| disagreements(f, q)).sum();
                    let lb = partial + slack * (k - prefix.len());
                    !best_cell.borrow().beaten_by(lb, big)
                },
                &mut |h| {
                    let d: usize = h.iter().zip(images).map(|(q, f)| disagreements(f, q)).sum();
                    let mut b = best_cell.borrow_mut();
                    if b.beaten_by(d, big) {
                        **b = Best { d, deg: big, witness: h.to_vec() };
                    }
                    Ok(())
                },
            )?;
        }
        Ok(())
    })();
    let exactness = finish(outcome, cfg)?;
    Ok(GlobalDefectResult {
        kind: DefectKind::Hom,
        upper_bound: ratio(best.d as i64, (k * best.deg) as i64),
        witness_degree: best.deg,
        witness: Witness::Homomorphism(best.witness),
        n_max_searched: cap,
        exactness,
        nodes: budget.used(),
    })
}

/// Branch and bound over 0-cochains `β` with `β(root) = Id`, minimizing the
/// disagreements between `alpha` and `β.c0` (`c0` of degree `N`).
struct BetaSearch<'a> {
    g: &'a Graph,
    alpha: &'a Cochain1,
    c0: &'a Cochain1,
    big: usize,
    order: Vec<usize>,
    // edges settled once order[pos] is assigned
    settled: Vec<Vec<usize>>,
    // edges still unsettled after order[pos] is assigned
    open_after: Vec<usize>,
    perms: Vec<Permutation>,
    budget: &'a Budget,
}

impl<'a> BetaSearch<'a> {
    fn new(g: &'a Graph, order: &[usize], alpha: &'a Cochain1, c0: &'a Cochain1, budget: &'a Budget) -> Self {
        let mut pos_of = vec![0; g.vertex_count() + 1];
        for (i, &v) in order.iter().enumerate() {
            pos_of[v] = i;
        }
        let mut settled = vec![Vec::new(); order.len()];
        for (k, &(x, y)) in g.edges().iter().enumerate() {
            settled[pos_of[x].max(pos_of[y])].push(k + 1);
        }
        let mut open_after = vec![0; order.len()];
        let mut left = g.edge_count();
        for (i, s) in settled.iter().enumerate() {
            left -= s.len();
            open_after[i] = left;
        }
        let big = c0.degree();
        BetaSearch { g, alpha, c0, big, order: order.to_vec(), settled, open_after, perms: all_permutations(big), budget }
    }

    fn cost(&self, k: usize, beta: &[Option<Permutation>]) -> usize {
        let (x, y) = self.g.edge(k);
        let bx = beta[x].as_ref().expect("settled edges have both ends assigned");
        let by = beta[y].as_ref().expect("settled edges have both ends assigned");
        let v = bx.inverse().then_unchecked(&self.c0.values()[k - 1]).then_unchecked(by);
        disagreements(&self.alpha.values()[k - 1], &v)
    }

    fn run(&self, best: &mut Best<Cochain1>) -> Result<()> {
        let mut firsts = vec![false; self.order.len()];
        firsts[0] = true;
        let mut beta = vec![None; self.g.vertex_count() + 1];
        self.descend(0, 0, &mut beta, best, &firsts)
    }
}

fn identity_best(alpha: &Cochain1) -> Best<Cochain1> {
    let id = Permutation::identity(alpha.degree());
    Best {
        d: alpha.values().iter().map(|a| disagreements(a, &id)).sum(),
        deg: alpha.degree(),
        witness: Cochain1::identity(alpha.edge_count(), alpha.degree()),
    }
}

/// `min d(α, φ)` over 1-cocycles `φ` of degree `N ∈ [n, N_max]`.
///
/// Every cocycle is `β.φ_T` for a homomorphism `φ` of the spanning-tree
/// presentation extended trivially on the tree, and `β(root)` can be taken to
/// be the identity because conjugating `φ` stays within the enumeration.
pub fn cocycle_global_defect(x: &PolygonalComplex, alpha: &Cochain1, cfg: &SearchConfig) -> Result<GlobalDefectResult> {
    let g = x.skeleton();
    alpha.check_graph(g)?;
    let n = alpha.degree();
    let cap = cfg.cap(n)?;
    let tree = spanning_tree(g, 1)?;
    let m = g.edge_count();
    let already = x.polygon_count() == 0 || coboundary_norm(x, alpha, None)? == ratio(0, 1);
    if m == 0 || already {
        return Ok(GlobalDefectResult {
            kind: DefectKind::Cocycle,
            upper_bound: ratio(0, 1),
            witness: Witness::Cocycle(alpha.clone()),
            witness_degree: n,
            n_max_searched: cap,
            exactness: Exactness::ExactWithinCap,
            nodes: 0,
        });
    }
    let (pres, map) = fundamental_presentation_with_tree(x, &tree)?;
    let budget = Budget::new(cfg.guard);
    let mut best = identity_best(alpha);
    let outcome = (|| -> Result<()> {
        for big in n..=cap {
            let candidates = vec![all_permutations(big); pres.generator_count()];
            let best_cell = std::cell::RefCell::new(&mut best);
            backtrack_homs(&pres, big, &candidates, &budget, &mut |_| false, &mut |h| {
                let c0 = extend_from_generators(h, &map, big)?;
                let search = BetaSearch::new(g, tree.bfs_order(), alpha, &c0, &budget);
                search.run(&mut best_cell.borrow_mut())
            })?;
        }
        Ok(())
    })();
    let exactness = finish(outcome, cfg)?;
    Ok(GlobalDefectResult {
        kind: DefectKind::Cocycle,
        upper_bound: ratio(best.d as i64, (m * best.deg) as i64),
        witness_degree: best.deg,
        witness: Witness::Cocycle(best.witness),
        n_max_searched: cap,
        exactness,
        nodes: budget.used(),
    })
}

/// `min d(α, δβ)` over 0-cochains `β` of degree `N ∈ [n, N_max]`.
pub fn coboundary_distance_search(g: &Graph, alpha: &Cochain1, cfg: &SearchConfig) -> Result<GlobalDefectResult> {
    alpha.check_graph(g)?;
    let n = alpha.degree();
    let cap = cfg.cap(n)?;
    let m = g.edge_count();
    if m == 0 {
        return Ok(GlobalDefectResult {
            kind: DefectKind::Cocycle,
            upper_bound: ratio(0, 1),
            witness: Witness::Cocycle(alpha.clone()),
            witness_degree: n,
            n_max_searched: cap,
            exactness: Exactness::ExactWithinCap,
            nodes: 0,
        });
    }
    let budget = Budget::new(cfg.guard);
    let mut best = identity_best(alpha);
    let components = g.components();
    let order = component_order(g, &components);
    let outcome = (|| -> Result<()> {
        for big in n..=cap {
            let c0 = Cochain1::identity(m, big);
            let search = BetaSearch::new(g, &order, alpha, &c0, &budget);
            search.run_components(&components, &mut best)?;
        }
        Ok(())
    })();
    let exactness = finish(outcome, cfg)?;
    Ok(GlobalDefectResult {
        kind: DefectKind::Cocycle,
        upper_bound: ratio(best.d as i64, (m * best.deg) as i64),
        witness_degree: best.deg,
        witness: Witness::Cocycle(best.witness),
        n_max_searched: cap,
        exactness,
        nodes: budget.used(),
    })
}

// Breadth-first order within each component, components by first vertex.
fn component_order(g: &Graph, components: &[usize]) -> Vec<usize> {
    let mut order = Vec::with_capacity(g.vertex_count());
    let mut seen = vec![false; g.vertex_count() + 1];
    for start in 1..=g.vertex_count() {
        if seen[start] {
            continue;
        }
        let mut queue = std::collections::VecDeque::from([start]);
        seen[start] = true;
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &(a, b) in g.edges() {
                let other = if a == v { b } else if b == v { a } else { continue };
                if !seen[other] && components[other - 1] == components[v - 1] {
                    seen[other] = true;
                    queue.push_back(other);
                }
            }
        }
    }
    order
}

impl BetaSearch<'_> {
    /// Pins the first vertex of every component to the identity; coboundaries
    /// only see `β` up to a constant per component.
    fn run_components(&self, components: &[usize], best: &mut Best<Cochain1>) -> Result<()> {
        let mut firsts = vec![false; self.order.len()];
        let mut seen = std::collections::HashSet::new();
        for (pos, &v) in self.order.iter().enumerate() {
            firsts[pos] = seen.insert(components[v - 1]);
        }
        let mut beta = vec![None; self.g.vertex_count() + 1];
        self.descend(0, 0, &mut beta, best, &firsts)
    }

    fn descend(
        &self,
        pos: usize,
        partial: usize,
        beta: &mut Vec<Option<Permutation>>,
        best: &mut Best<Cochain1>,
        firsts: &[bool],
    ) -> Result<()> {
        if pos == self.order.len() {
            if best.beaten_by(partial, self.big) {
                let b = Cochain0::new(self.big, beta[1..].iter().map(|p| p.clone().expect("all assigned")).collect())?;
                *best = Best { d: partial, deg: self.big, witness: act0on1(self.g, &b, self.c0)? };
            }
            return Ok(());
        }
        let v = self.order[pos];
        let slack = (self.big - self.alpha.degree()) * self.open_after[pos];
        let choices: Vec<Permutation> =
            if firsts[pos] { vec![Permutation::identity(self.big)] } else { self.perms.clone() };
        let mut scored: Vec<(usize, Permutation)> = choices
            .into_iter()
            .map(|sigma| {
                beta[v] = Some(sigma.clone());
                let inc = self.settled[pos].iter().map(|&k| self.cost(k, beta)).sum();
                (inc, sigma)
            })
            .collect();
        beta[v] = None;
        scored.sort_by_key(|(inc, _)| *inc);
        for (inc, sigma) in scored {
            self.budget.tick()?;
            if !best.beaten_by(partial + inc + slack, self.big) {
                break;
            }
            beta[v] = Some(sigma);
            self.descend(pos + 1, partial + inc, beta, best, firsts)?;
        }
        beta[v] = None;
        Ok(())
    }
}

/// Normalized edit distance from `c` to the nearest genuine covering of
/// degree `N ∈ [n, N_max]`, found through the cocycle search and confirmed by
/// an exact edit-distance computation against the witness.
pub fn cover_global_defect(x: &PolygonalComplex, c: &Covering, cfg: &SearchConfig) -> Result<GlobalDefectResult> {
    if c.base() != x.skeleton() {
        return Err(Error::NotCovering("covering is not over the complex's skeleton".into()));
    }
    let alpha = covering_to_cochain(c)?;
    let coc = cocycle_global_defect(x, &alpha, cfg)?;
    let Witness::Cocycle(phi) = &coc.witness else { unreachable!("cocycle search returns cocycles") };
    if coc.upper_bound == ratio(0, 1) {
        return Ok(GlobalDefectResult { kind: DefectKind::Cover, witness: Witness::Cover(Box::new(c.clone())), ..coc });
    }
    let cover = cochain_to_covering(x.skeleton(), phi)?;
    match edit_distance(c.labeled(), cover.labeled(), EditMode::Exact, cfg.edit_guard) {
        Ok(e) if coc.exactness == Exactness::ExactWithinCap => {
            assert_eq!(e.value, coc.upper_bound, "edit distance to the nearest cover must equal the cocycle distance");
        }
        Ok(e) => assert!(e.value <= coc.upper_bound),
        Err(Error::GuardExceeded(_)) => {}
        Err(err) => return Err(err),
    }
    Ok(GlobalDefectResult { kind: DefectKind::Cover, witness: Witness::Cover(Box::new(cover)), ..coc })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::presentation_complex;
    use crate::perm::SignedWord;

    fn p(images: &[usize]) -> Permutation {
        Permutation::from_images(images).unwrap()
    }

    fn a3() -> Presentation {
        Presentation::new(1, vec![SignedWord::new(vec![1, 1, 1]).unwrap()]).unwrap()
    }

    #[test]
    fn a3_transposition() {
        let r = hom_global_defect(&a3(), &[p(&[2, 1])], &SearchConfig::with_n_max(4)).unwrap();
        assert_eq!(r.upper_bound, ratio(2, 3));
        assert_eq!(r.witness, Witness::Homomorphism(vec![p(&[2, 3, 1])]));
        assert_eq!(r.exactness, Exactness::ExactWithinCap);
    }

    #[test]
    fn homomorphism_is_its_own_witness() {
        let r = hom_global_defect(&a3(), &[p(&[2, 3, 1])], &SearchConfig::default()).unwrap();
        assert_eq!(r.upper_bound, ratio(0, 1));
        assert_eq!(r.witness, Witness::Homomorphism(vec![p(&[2, 3, 1])]));
    }

    #[test]
    fn cocycle_matches_hom_on_presentation_complex() {
        let x = presentation_complex(&a3()).unwrap();
        let alpha = Cochain1::new(2, vec![p(&[2, 1])]).unwrap();
        let r = cocycle_global_defect(&x, &alpha, &SearchConfig::with_n_max(4)).unwrap();
        assert_eq!(r.upper_bound, ratio(2, 3));
        assert_eq!(r.witness_degree, 3);
        let c = cochain_to_covering(x.skeleton(), &alpha).unwrap();
        let r = cover_global_defect(&x, &c, &SearchConfig::with_n_max(4)).unwrap();
        assert_eq!(r.upper_bound, ratio(2, 3));
    }

    #[test]
    fn heuristic_on_guard() {
        let cfg = SearchConfig { guard: 3, ..SearchConfig::with_n_max(4) };
        let r = hom_global_defect(&a3(), &[p(&[2, 1])], &cfg).unwrap();
        assert_eq!(r.exactness, Exactness::Heuristic);
        let strict = SearchConfig { allow_heuristic: false, ..cfg };
        assert!(hom_global_defect(&a3(), &[p(&[2, 1])], &strict).is_err());
    }

    #[test]
    fn coboundary_distance_on_triangle() {
        let g = Graph::new(3, vec![(1, 2), (2, 3), (3, 1)]).unwrap();
        // one flipped edge: the nearest coboundary flips two edges
        let alpha = Cochain1::new(2, vec![p(&[2, 1]), p(&[1, 2]), p(&[1, 2])]).unwrap();
        let r = coboundary_distance_search(&g, &alpha, &SearchConfig::default()).unwrap();
        assert_eq!(r.upper_bound, ratio(1, 3));
    }
}
