use serde::Serialize;

use crate::cochain::Cochain0;
use crate::graph::Graph;
use crate::perm::{all_permutations, disagreements, Permutation};
use crate::{ratio, to_f64, Error, Rational, Result};

const JACOBI_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectralReport {
    pub k: usize,
    pub lambda2: f64,
    pub gamma: f64,
    /// Descending.
    pub eigenvalues: Vec<f64>,
}

/// `M(x, y)` counts directed edges from `x` to `y`; a loop adds 2 to `M(x, x)`.
pub fn adjacency_matrix(g: &Graph) -> Vec<Vec<f64>> {
    let v = g.vertex_count();
    let mut m = vec![vec![0.0; v]; v];
    for &(a, b) in g.edges() {
        m[a - 1][b - 1] += 1.0;
        m[b - 1][a - 1] += 1.0;
    }
    m
}

pub fn regularity(g: &Graph) -> Result<usize> {
    let k = g.degree(1);
    if let Some(v) = (2..=g.vertex_count()).find(|&v| g.degree(v) != k) {
        return Err(Error::NotRegular(format!("vertex 1 has degree {k} but vertex {v} has degree {}", g.degree(v))));
    }
    Ok(k)
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, descending.
pub fn symmetric_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    let scale = a.iter().flatten().map(|x| x * x).sum::<f64>().sqrt().max(1.0);
    for _sweep in 0..100 {
        let off: f64 = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| a[i][j] * a[i][j]).sum();
        if off.sqrt() <= JACOBI_TOL * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q] == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for row in a.iter_mut() {
                    let (arp, arq) = (row[p], row[q]);
                    row[p] = c * arp - s * arq;
                    row[q] = s * arp + c * arq;
                }
                let (head, tail) = a.split_at_mut(q);
                for (x, y) in head[p].iter_mut().zip(tail[0].iter_mut()) {
                    let (apr, aqr) = (*x, *y);
                    *x = c * apr - s * aqr;
                    *y = s * apr + c * aqr;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    ev.sort_by(|x, y| y.total_cmp(x));
    ev
}

/// `γ = (k − λ₂) / k` for a connected `k`-regular graph.
pub fn spectral_gap(g: &Graph) -> Result<SpectralReport> {
    if g.vertex_count() < 2 {
        return Err(Error::InvalidGraph("spectral gap needs at least 2 vertices".into()));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let k = regularity(g)?;
    let eigenvalues = symmetric_eigenvalues(adjacency_matrix(g));
    let lambda2 = eigenvalues[1];
    Ok(SpectralReport { k, lambda2, gamma: (k as f64 - lambda2) / k as f64, eigenvalues })
}

/// Both sides of the Poincaré-type inequality for `f : V → ℝ^d`: the mean of
/// `‖f(x) − f(y)‖²` over directed edges, and `γ` times its mean over ordered
/// vertex pairs.
pub fn poincare_check(g: &Graph, f: &[Vec<f64>]) -> Result<(f64, f64)> {
    if f.len() != g.vertex_count() {
        return Err(Error::InvalidInput(format!("expected {} vectors, got {}", g.vertex_count(), f.len())));
    }
    let gamma = spectral_gap(g)?.gamma;
    let sq = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>();
    let lhs = g.edges().iter().map(|&(a, b)| sq(&f[a - 1], &f[b - 1])).sum::<f64>() / g.edge_count() as f64;
    let v = f.len();
    let pairs: f64 = (0..v).flat_map(|i| (0..v).map(move |j| (i, j))).map(|(i, j)| sq(&f[i], &f[j])).sum();
    Ok((lhs, gamma * pairs / (v * v) as f64))
}

/// `‖δb‖ = E_edges d_h(b(x), b(y))`.
pub fn coboundary0_norm(g: &Graph, b: &Cochain0) -> Result<Rational> {
    b.check_graph(g)?;
    if g.edge_count() == 0 {
        return Ok(ratio(0, 1));
    }
    let d: usize = g.edges().iter().map(|&(x, y)| disagreements(b.value(x), b.value(y))).sum();
    Ok(ratio(d as i64, (g.edge_count() * b.degree()) as i64))
}

/// Nearest locally constant 0-cochain of degree `N ∈ [n, n + extra]`: one
/// permutation per connected component. Returns the distance and the values.
pub fn distance_to_locally_constant(g: &Graph, b: &Cochain0, extra: usize) -> Result<(Rational, Cochain0)> {
    b.check_graph(g)?;
    let (d, big, values) = nearest_blockwise(b, &g.components(), extra);
    Ok((ratio(d as i64, (b.values().len() * big) as i64), Cochain0::new(big, values)?))
}

/// Best assignment that is constant on each block (`labels[v − 1]` is the
/// block of `v`), as `(disagreements, degree, values)`.
pub(crate) fn nearest_blockwise(b: &Cochain0, labels: &[usize], extra: usize) -> (usize, usize, Vec<Permutation>) {
    let n = b.degree();
    let count = labels.iter().max().map_or(0, |m| m + 1);
    let mut best: Option<(usize, usize, Vec<Permutation>)> = None;
    for big in n..=n + extra {
        let perms = all_permutations(big);
        let mut total = 0;
        let mut chosen = Vec::with_capacity(count);
        for c in 0..count {
            let members: Vec<&Permutation> =
                b.values().iter().zip(labels).filter(|(_, &l)| l == c).map(|(p, _)| p).collect();
            let (d, sigma) = perms
                .iter()
                .map(|s| (members.iter().map(|p| disagreements(p, s)).sum::<usize>(), s))
                .min_by_key(|(d, _)| *d)
                .expect("Sym(N) is nonempty");
            total += d;
            chosen.push(sigma.clone());
        }
        if best.as_ref().is_none_or(|(bd, bn, _)| total * bn < bd * big) {
            best = Some((total, big, chosen));
        }
    }
    let (d, big, chosen) = best.expect("at least one degree searched");
    (d, big, labels.iter().map(|&l| chosen[l].clone()).collect())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZeroDimBound {
    #[serde(serialize_with = "crate::testers::ser_ratio")]
    pub lhs: Rational,
    pub rhs: f64,
    pub holds: bool,
}

/// `d_h(b, Z⁰) ≤ ‖δb‖ / γ` on a connected regular graph.
pub fn zero_dim_bound_check(g: &Graph, b: &Cochain0) -> Result<ZeroDimBound> {
    let gamma = spectral_gap(g)?.gamma;
    let (lhs, _) = distance_to_locally_constant(g, b, 2)?;
    let rhs = to_f64(&coboundary0_norm(g, b)?) / gamma;
    let holds = to_f64(&lhs) <= rhs + 1e-9;
    Ok(ZeroDimBound { lhs, rhs, holds })
}
