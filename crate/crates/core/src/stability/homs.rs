use std::cell::Cell;

use crate::complex::Presentation;
use crate::perm::{all_permutations, evaluate_unchecked, Permutation};
use crate::{Error, Result};

/// Default cap on explored search nodes.
pub const DEFAULT_GUARD: u64 = 100_000_000;

/// Node counter shared by nested searches.
#[derive(Debug)]
pub struct Budget {
    used: Cell<u64>,
    limit: u64,
}

impl Budget {
    pub fn new(limit: u64) -> Self {
        Budget { used: Cell::new(0), limit }
    }

    pub fn tick(&self) -> Result<()> {
        let used = self.used.get() + 1;
        self.used.set(used);
        if used > self.limit {
            return Err(Error::GuardExceeded(format!("search explored more than {} nodes", self.limit)));
        }
        Ok(())
    }

    pub fn used(&self) -> u64 {
        self.used.get()
    }
}

/// Backtracking over generator images, checking each relator as soon as its
/// largest generator is assigned. `prune` sees every consistent prefix;
/// `leaf` every complete homomorphism, in candidate order.
pub(crate) fn backtrack_homs(
    p: &Presentation,
    n: usize,
    candidates: &[Vec<Permutation>],
    budget: &Budget,
    prune: &mut dyn FnMut(&[Permutation]) -> bool,
    leaf: &mut dyn FnMut(&[Permutation]) -> Result<()>,
) -> Result<()> {
    let k = p.generator_count();
    let mut at_level: Vec<Vec<&[i64]>> = vec![Vec::new(); k];
    for r in p.relators() {
        if let Some(m) = r.max_index().checked_sub(1) {
            at_level[m].push(r.letters());
        }
    }
    let mut assigned = Vec::with_capacity(k);
    descend(0, n, candidates, &at_level, &mut assigned, budget, prune, leaf)
}

#[allow(clippy::too_many_arguments)]
fn descend(
    level: usize,
    n: usize,
    candidates: &[Vec<Permutation>],
    at_level: &[Vec<&[i64]>],
    assigned: &mut Vec<Permutation>,
    budget: &Budget,
    prune: &mut dyn FnMut(&[Permutation]) -> bool,
    leaf: &mut dyn FnMut(&[Permutation]) -> Result<()>,
) -> Result<()> {
    if level == at_level.len() {
        return leaf(assigned);
    }
    for c in &candidates[level] {
        budget.tick()?;
        assigned.push(c.clone());
        let consistent = at_level[level]
            .iter()
            .all(|r| evaluate_unchecked(r, assigned, n).is_identity());
        if consistent && !prune(assigned) {
            descend(level + 1, n, candidates, at_level, assigned, budget, prune, leaf)?;
        }
        assigned.pop();
    }
    Ok(())
}

/// Every `f : S → Sym(n)` with `f(r) = Id` for all relators, in
/// lexicographic order of image tuples.
pub fn enumerate_homomorphisms(p: &Presentation, n: usize, guard: u64) -> Result<Vec<Vec<Permutation>>> {
    if n == 0 {
        return Err(Error::InvalidInput("degree must be at least 1".into()));
    }
    let perms = all_permutations(n);
    let candidates = vec![perms; p.generator_count()];
    let budget = Budget::new(guard);
    let mut out = Vec::new();
    backtrack_homs(p, n, &candidates, &budget, &mut |_| false, &mut |h| {
        out.push(h.to_vec());
        Ok(())
    })?;
    Ok(out)
}
