//! Normalized edit distance between graphs labeled over a common base.
//!
//! A common labeled subgraph identifies vertices only within the same fiber,
//! so a maximum one is determined by a partial bijection per fiber. Extending
//! a partial bijection never loses matched edges, so it suffices to search
//! injections of the smaller side of each fiber into the larger one.

use std::collections::HashMap;

use super::LabeledGraph;
use crate::{ratio, Error, Rational, Result};

/// Default cap on the number of complete fiber alignments in exact mode.
pub const DEFAULT_EDIT_GUARD: u128 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EditMode {
    Exact,
    Heuristic,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EditDistance {
    pub value: Rational,
    /// False when `value` is only an upper bound from the greedy alignment.
    pub exact: bool,
    pub matched_edges: usize,
    /// Matched vertex pairs `(vertex of a, vertex of b)`, ascending.
    pub alignment: Vec<(usize, usize)>,
}

struct Side {
    fibers: Vec<Vec<usize>>,
    // per base edge: (from, to) in the `+k` orientation → multiplicity
    edges: Vec<HashMap<(usize, usize), usize>>,
    edge_total: usize,
}

impl Side {
    fn new(lg: &LabeledGraph) -> Self {
        let base_edges = lg.base().edge_count();
        let mut edges = vec![HashMap::new(); base_edges];
        let g = lg.graph();
        for k in 1..=g.edge_count() as i64 {
            let s = lg.labeling().edge(k);
            let (u, v) = (g.origin(k), g.terminus(k));
            let key = if s > 0 { (u, v) } else { (v, u) };
            *edges[s.unsigned_abs() as usize - 1].entry(key).or_insert(0) += 1;
        }
        Side { fibers: lg.fibers(), edges, edge_total: g.edge_count() }
    }

    fn count(&self, k: usize) -> usize {
        self.edges[k].values().sum()
    }
}

struct Search<'a> {
    a: &'a Side,
    b: &'a Side,
    // base edges whose both endpoint fibers are settled after fiber x
    settled_at: Vec<Vec<usize>>,
    // Σ min(count_a, count_b) over base edges not yet settled after fiber x
    remaining: Vec<usize>,
    map: Vec<Option<usize>>,
    best: usize,
    best_map: Vec<Option<usize>>,
}

impl Search<'_> {
    fn gain(&self, k: usize) -> usize {
        self.a.edges[k]
            .iter()
            .filter_map(|(&(u, v), &m)| {
                let (pu, pv) = (self.map[u]?, self.map[v]?);
                self.b.edges[k].get(&(pu, pv)).map(|&mb| m.min(mb))
            })
            .sum()
    }

    fn fiber(&mut self, x: usize, current: usize) {
        if x == self.a.fibers.len() {
            if current > self.best {
                self.best = current;
                self.best_map = self.map.clone();
            }
            return;
        }
        let fa = self.a.fibers[x].clone();
        let fb = self.b.fibers[x].clone();
        let mut used = vec![false; fa.len().max(fb.len())];
        self.vertex(x, 0, &fa, &fb, &mut used, current);
    }

    fn vertex(&mut self, x: usize, pos: usize, fa: &[usize], fb: &[usize], used: &mut [bool], current: usize) {
        let a_small = fa.len() <= fb.len();
        let (small, large) = if a_small { (fa, fb) } else { (fb, fa) };
        if pos == small.len() {
            let gain: usize = self.settled_at[x].iter().map(|&k| self.gain(k)).sum();
            let total = current + gain;
            if total + self.remaining[x] > self.best {
                self.fiber(x + 1, total);
            }
            return;
        }
        for j in 0..large.len() {
            if used[j] {
                continue;
            }
            used[j] = true;
            let (u, v) = if a_small { (small[pos], large[j]) } else { (large[j], small[pos]) };
            self.map[u] = Some(v);
            self.vertex(x, pos + 1, fa, fb, used, current);
            self.map[u] = None;
            used[j] = false;
        }
    }
}

fn leaves(a: &Side, b: &Side) -> u128 {
    let mut total: u128 = 1;
    for (fa, fb) in a.fibers.iter().zip(&b.fibers) {
        let (s, l) = (fa.len().min(fb.len()) as u128, fa.len().max(fb.len()) as u128);
        for i in 0..s {
            total = total.saturating_mul(l - i);
        }
    }
    total
}

fn matched(a: &Side, b: &Side, map: &[Option<usize>]) -> usize {
    (0..a.edges.len())
        .map(|k| {
            a.edges[k]
                .iter()
                .filter_map(|(&(u, v), &m)| {
                    let (pu, pv) = (map[u]?, map[v]?);
                    b.edges[k].get(&(pu, pv)).map(|&mb| m.min(mb))
                })
                .sum::<usize>()
        })
        .sum()
}

fn greedy(a: &Side, b: &Side, n_a: usize) -> Vec<Option<usize>> {
    let mut map = vec![None; n_a + 1];
    for (fa, fb) in a.fibers.iter().zip(&b.fibers) {
        let a_small = fa.len() <= fb.len();
        let (small, large) = if a_small { (fa, fb) } else { (fb, fa) };
        let mut used = vec![false; large.len()];
        for &s in small {
            let mut choice: Option<(usize, usize)> = None;
            for (j, &l) in large.iter().enumerate() {
                if used[j] {
                    continue;
                }
                let (u, v) = if a_small { (s, l) } else { (l, s) };
                map[u] = Some(v);
                let score = matched(a, b, &map);
                map[u] = None;
                if choice.is_none_or(|(_, best)| score > best) {
                    choice = Some((j, score));
                }
            }
            let (j, _) = choice.expect("smaller side never exceeds larger side");
            used[j] = true;
            let (u, v) = if a_small { (s, large[j]) } else { (large[j], s) };
            map[u] = Some(v);
        }
    }
    map
}

/// `1 − |E(A)| / max(|E(a)|, |E(b)|)` for a maximum common labeled subgraph
/// `A`, or a greedy upper bound in heuristic mode.
pub fn edit_distance(a: &LabeledGraph, b: &LabeledGraph, mode: EditMode, guard: u128) -> Result<EditDistance> {
    if a.base() != b.base() {
        return Err(Error::InvalidInput("edit distance needs a common base graph".into()));
    }
    let (sa, sb) = (Side::new(a), Side::new(b));
    let n_a = a.graph().vertex_count();
    let map = match mode {
        EditMode::Heuristic => greedy(&sa, &sb, n_a),
        EditMode::Exact => {
            let size = leaves(&sa, &sb);
            if size > guard {
                return Err(Error::GuardExceeded(format!(
                    "exact edit distance needs {size} fiber alignments (guard {guard})"
                )));
            }
            let base = a.base();
            let vertices = base.vertex_count();
            let mut settled_at = vec![Vec::new(); vertices];
            for (i, &(u, v)) in base.edges().iter().enumerate() {
                settled_at[u.max(v) - 1].push(i);
            }
            let mut remaining = vec![0; vertices];
            for x in 0..vertices {
                remaining[x] = settled_at[x + 1..]
                    .iter()
                    .flatten()
                    .map(|&k| sa.count(k).min(sb.count(k)))
                    .sum();
            }
            let start = greedy(&sa, &sb, n_a);
            let mut search = Search {
                a: &sa,
                b: &sb,
                settled_at,
                remaining,
                map: vec![None; n_a + 1],
                best: matched(&sa, &sb, &start),
                best_map: start,
            };
            search.fiber(0, 0);
            search.best_map
        }
    };
    let matched_edges = matched(&sa, &sb, &map);
    let denom = sa.edge_total.max(sb.edge_total);
    let value = if denom == 0 {
        ratio(0, 1)
    } else {
        ratio(1, 1) - ratio(matched_edges as i64, denom as i64)
    };
    let alignment = map
        .iter()
        .enumerate()
        .filter_map(|(u, v)| v.map(|v| (u, v)))
        .collect();
    Ok(EditDistance { value, exact: mode == EditMode::Exact, matched_edges, alignment })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{CombinatorialMap, Graph};

    fn bouquet() -> Graph {
        Graph::new(1, vec![(1, 1)]).unwrap()
    }

    /// Cover of the one-loop bouquet with edge `i → images[i]`.
    fn cover(images: &[usize]) -> LabeledGraph {
        let n = images.len();
        let g = Graph::new(n, images.iter().enumerate().map(|(i, &j)| (j, i + 1)).collect()).unwrap();
        let f = CombinatorialMap { vertex_map: vec![1; n], edge_map: vec![1; n] };
        LabeledGraph::new(g, bouquet(), f).unwrap()
    }

    #[test]
    fn identical_covers() {
        let c = cover(&[2, 3, 1]);
        let d = edit_distance(&c, &c, EditMode::Exact, DEFAULT_EDIT_GUARD).unwrap();
        assert_eq!(d.value, ratio(0, 1));
        assert!(d.exact);
    }

    #[test]
    fn transposition_vs_three_cycle() {
        let d = edit_distance(&cover(&[2, 1]), &cover(&[2, 3, 1]), EditMode::Exact, DEFAULT_EDIT_GUARD).unwrap();
        assert_eq!(d.value, ratio(2, 3));
    }

    #[test]
    fn transposition_vs_identity() {
        // no alignment matches a swap edge with a loop
        let d = edit_distance(&cover(&[2, 1]), &cover(&[1, 2]), EditMode::Exact, DEFAULT_EDIT_GUARD).unwrap();
        assert_eq!(d.value, ratio(1, 1));
    }

    #[test]
    fn relabeled_cover_is_at_distance_zero() {
        // (1 2 3) and (1 3 2) give isomorphic covers
        let d = edit_distance(&cover(&[2, 3, 1]), &cover(&[3, 1, 2]), EditMode::Exact, DEFAULT_EDIT_GUARD).unwrap();
        assert_eq!(d.value, ratio(0, 1));
    }

    #[test]
    fn guard_refuses_exact_mode() {
        let big = cover(&[2, 3, 4, 5, 6, 7, 8, 9, 10, 1]);
        assert!(matches!(
            edit_distance(&big, &big, EditMode::Exact, DEFAULT_EDIT_GUARD),
            Err(Error::GuardExceeded(_))
        ));
        let h = edit_distance(&big, &big, EditMode::Heuristic, DEFAULT_EDIT_GUARD).unwrap();
        assert!(!h.exact);
        assert!(h.value >= ratio(0, 1) && h.value <= ratio(1, 1));
    }

    #[test]
    fn different_bases_rejected() {
        let other = Graph::new(1, vec![(1, 1), (1, 1)]).unwrap();
        let g = Graph::new(1, vec![(1, 1), (1, 1)]).unwrap();
        let f = CombinatorialMap { vertex_map: vec![1], edge_map: vec![1, 2] };
        let lg = LabeledGraph::new(g, other, f).unwrap();
        assert!(edit_distance(&cover(&[1]), &lg, EditMode::Exact, DEFAULT_EDIT_GUARD).is_err());
    }
}
