//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits nonzero if any failed. Expected values come from oracles written
//! here, independently of the library code under test.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use num::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use permstab::cochain::{
    coboundary0, coboundary1, coboundary_distance, coboundary_norm, cochain_distance, cochain_to_covering,
    covering_to_cochain, images_to_cochain, restrict_to_generators, tree_normalize, Cochain0, Cochain1,
};
use permstab::complex::{
    fundamental_presentation, fundamental_presentation_with_tree, polygon_weights, presentation_complex, PolygonalComplex,
    Presentation,
};
use permstab::graph::Graph;
use permstab::instances::{
    bouquet, complete_complex, complete_graph, cube, cycle_graph, cyclic_presentation, k33, petersen, random_graph,
    cut_family, torus_complex, torus_presentation, triangle_complex,
};
use permstab::perm::{all_permutations, hs_distance_check, random_permutation, Permutation};
use permstab::stability::{
    cheeger0, classical_cheeger, cocycle_global_defect, h0_vanishes, h1_vanishing_check, hom_global_defect, spectral_gap,
    stability_profile, zero_dim_bound_check, CheegerVariant, Exactness, ProfileConfig, ProfileSource, SearchConfig,
    DEFAULT_GUARD,
};
use permstab::testers::{
    blr_matrix, cocycle_local_defect, cover_local_defect, dm_cover_local_defect, hom_local_defect, linear_table,
    matrix_tester, run_sampled, vector_images, DefectKind, SampleTarget,
};
use permstab::{ratio, Rational};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn f64_of(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

// ---------------------------------------------------------------------------
// Oracles on raw image arrays (1-based), independent of the library metric.

fn oracle_distance(a: &[usize], b: &[usize]) -> Rational {
    let big = a.len().max(b.len());
    let agree = a.iter().zip(b).filter(|(x, y)| x == y).count();
    ratio((big - agree) as i64, big as i64)
}

fn oracle_inverse(a: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; a.len()];
    for (i, &j) in a.iter().enumerate() {
        inv[j - 1] = i + 1;
    }
    inv
}

/// Word value with letters applied right to left, so `w = s t` maps `x` to `f(s)(f(t)(x))`.
fn oracle_word(word: &[i64], images: &[Vec<usize>], n: usize) -> Vec<usize> {
    let mut out: Vec<usize> = (1..=n).collect();
    for &l in word.iter().rev() {
        let g = &images[l.unsigned_abs() as usize - 1];
        let g = if l > 0 { g.clone() } else { oracle_inverse(g) };
        for v in out.iter_mut() {
            *v = g[*v - 1];
        }
    }
    out
}

fn is_id(p: &[usize]) -> bool {
    p.iter().enumerate().all(|(i, &j)| i + 1 == j)
}

fn tuples(perms: &[Vec<usize>], len: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|t| {
                perms.iter().map(move |p| {
                    let mut t = t.clone();
                    t.push(p.clone());
                    t
                })
            })
            .collect();
    }
    out
}

fn images_of(perms: &[Permutation]) -> Vec<Vec<usize>> {
    perms.iter().map(Permutation::images).collect()
}

/// All homomorphisms to `Sym(N)`, checked letter by letter.
fn oracle_homs(p: &Presentation, big: usize) -> Vec<Vec<Vec<usize>>> {
    let perms = images_of(&all_permutations(big));
    tuples(&perms, p.generator_count())
        .into_iter()
        .filter(|t| p.relators().iter().all(|r| is_id(&oracle_word(r.letters(), t, big))))
        .collect()
}

fn oracle_hom_global(homs: &[(usize, Vec<Vec<Vec<usize>>>)], f: &[Vec<usize>]) -> Rational {
    let k = f.len() as i64;
    homs.iter()
        .flat_map(|(_, hs)| hs.iter())
        .map(|h| h.iter().zip(f).map(|(a, b)| oracle_distance(a, b)).sum::<Rational>() / ratio(k, 1))
        .min()
        .expect("the trivial homomorphism exists")
}

fn random_cochain0(v: usize, n: usize, r: &mut ChaCha8Rng) -> Cochain0 {
    Cochain0::random(v, n, r)
}

fn random_cochain1(e: usize, n: usize, r: &mut ChaCha8Rng) -> Cochain1 {
    Cochain1::random(e, n, r)
}

fn corpus() -> Vec<(&'static str, PolygonalComplex)> {
    vec![
        ("bouquet-a3", presentation_complex(&cyclic_presentation(3)).unwrap()),
        ("bouquet-a2", presentation_complex(&cyclic_presentation(2)).unwrap()),
        ("torus", torus_complex()),
        ("triangle", triangle_complex()),
        ("complete-4", complete_complex(4)),
        ("complete-5", complete_complex(5)),
        ("complete-6", complete_complex(6)),
    ]
}

fn regular_corpus() -> Vec<(&'static str, Graph)> {
    vec![
        ("K3", complete_graph(3)),
        ("K4", complete_graph(4)),
        ("K5", complete_graph(5)),
        ("C4", cycle_graph(4)),
        ("C5", cycle_graph(5)),
        ("C6", cycle_graph(6)),
        ("C7", cycle_graph(7)),
        ("C8", cycle_graph(8)),
        ("cube", cube()),
        ("K3,3", k33()),
        ("Petersen", petersen()),
    ]
}

fn random_distribution(len: usize, r: &mut ChaCha8Rng) -> Vec<Rational> {
    loop {
        let w: Vec<i64> = (0..len).map(|_| r.gen_range(0..=5)).collect();
        let total: i64 = w.iter().sum();
        if total > 0 {
            return w.into_iter().map(|x| ratio(x, total)).collect();
        }
    }
}

// ---------------------------------------------------------------------------

fn c01_metric_bridge() -> Check {
    let mut pairs = 0;
    for n in 1..=4 {
        let perms = all_permutations(n);
        for a in &perms {
            for b in &perms {
                let (d, hs) = hs_distance_check(a, b).map_err(|e| e.to_string())?;
                let m = |p: &Permutation| DMatrix::from_fn(n, n, |i, j| f64::from(u8::from(p.apply(j + 1) == i + 1)));
                let diff = m(a) - m(b);
                let oracle = 0.5 * diff.norm_squared() / n as f64;
                ensure(d == oracle_distance(&a.images(), &b.images()), || format!("{a:?} {b:?}: d_h = {d}"))?;
                ensure((f64_of(&d) - oracle).abs() <= 1e-12 && (hs - oracle).abs() <= 1e-12, || {
                    format!("{a:?} {b:?}: d_h = {d}, HS = {hs}, oracle = {oracle}")
                })?;
                pairs += 1;
            }
        }
    }
    Ok(format!("{pairs} pairs over n ≤ 4"))
}

fn c02_exactness() -> Check {
    let corpus = corpus();
    let mut r = rng(2);
    for t in 0..1000 {
        let (name, x) = &corpus[t % corpus.len()];
        let g = x.skeleton();
        let n = r.gen_range(1..=6);
        let b = random_cochain0(g.vertex_count(), n, &mut r);
        let a = coboundary0(g, &b).map_err(|e| e.to_string())?;
        for class in x.polygons() {
            for o in &class.orientations {
                let v = coboundary1(g, &a, o).map_err(|e| e.to_string())?;
                ensure(v.is_identity(), || format!("{name}: δ²b ≠ Id on {:?}", o.edges()))?;
            }
        }
        ensure(coboundary_norm(x, &a, None).map_err(|e| e.to_string())?.is_zero(), || format!("{name}: ‖δδb‖ ≠ 0"))?;
    }
    Ok(format!("1000 cochains over {} complexes", corpus.len()))
}

fn c03_covers_cochains() -> Check {
    let mut r = rng(3);
    let corpus = corpus();
    for (name, x) in &corpus {
        let g = x.skeleton();
        for _ in 0..1000 {
            let n = r.gen_range(1..=6);
            let alpha = random_cochain1(g.edge_count(), n, &mut r);
            let cover = cochain_to_covering(g, &alpha).map_err(|e| e.to_string())?;
            let lhs = cover_local_defect(&cover, x, None).map_err(|e| e.to_string())?.value;
            let rhs = cocycle_local_defect(x, &alpha, None).map_err(|e| e.to_string())?.value;
            ensure(lhs == rhs, || format!("{name}: cover {lhs} vs cocycle {rhs}"))?;
            let back = covering_to_cochain(&cover).map_err(|e| e.to_string())?;
            ensure(back == alpha, || format!("{name}: cochain round trip changed α"))?;
            let again = cochain_to_covering(g, &back).map_err(|e| e.to_string())?;
            ensure(again == cover, || format!("{name}: covering round trip changed the cover"))?;
        }
    }
    Ok(format!("1000 cochains on each of {} complexes", corpus.len()))
}

fn c04_homs_cocycles() -> Check {
    let mut checked = 0;
    for (name, p) in [("<a|a^3>", cyclic_presentation(3)), ("<a|a^2>", cyclic_presentation(2)), ("torus", torus_presentation())] {
        let x = presentation_complex(&p).map_err(|e| e.to_string())?;
        for n in 2..=3 {
            let cfg = SearchConfig::with_n_max(n + 2);
            let homs: Vec<_> = (n..=n + 2).map(|big| (big, oracle_homs(&p, big))).collect();
            for f in tuples(&images_of(&all_permutations(n)), p.generator_count()) {
                let images: Vec<Permutation> = f.iter().map(|i| Permutation::from_images(i).unwrap()).collect();
                let alpha = images_to_cochain(&x, &images).map_err(|e| e.to_string())?;
                let lh = hom_local_defect(&p, &images, None).map_err(|e| e.to_string())?.value;
                let lc = cocycle_local_defect(&x, &alpha, None).map_err(|e| e.to_string())?.value;
                ensure(lh == lc, || format!("{name} n={n} {f:?}: local {lh} vs {lc}"))?;
                let gh = hom_global_defect(&p, &images, &cfg).map_err(|e| e.to_string())?;
                let gc = cocycle_global_defect(&x, &alpha, &cfg).map_err(|e| e.to_string())?;
                ensure(gh.exactness == Exactness::ExactWithinCap && gc.exactness == Exactness::ExactWithinCap, || {
                    format!("{name} n={n}: search hit its guard")
                })?;
                let oracle = oracle_hom_global(&homs, &f);
                ensure(gh.upper_bound == gc.upper_bound && gh.upper_bound == oracle, || {
                    format!("{name} n={n} {f:?}: Def_hom {} Def_cocyc {} brute force {oracle}", gh.upper_bound, gc.upper_bound)
                })?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} generator tuples, N_max = n + 2"))
}

fn c05_tree_bound() -> Check {
    let x = complete_complex(5);
    let g = x.skeleton();
    let (pres, tree, map) = fundamental_presentation(&x, 1).map_err(|e| e.to_string())?;
    let cfg = SearchConfig::with_n_max(4);
    let mut r = rng(5);
    let mut strict = 0;
    for t in 0..100 {
        let level: f64 = r.gen_range(0.0..=1.0);
        let beta = random_cochain0(g.vertex_count(), 2, &mut r);
        let mut alpha = coboundary0(g, &beta).unwrap();
        for k in 1..=g.edge_count() {
            if r.gen_bool(level) {
                alpha.set(k, random_permutation(2, &mut r)).unwrap();
            }
        }
        let (normal, _) = tree_normalize(g, &alpha, &tree).map_err(|e| e.to_string())?;
        let dh = hom_global_defect(&pres, &restrict_to_generators(&normal, &map), &cfg).map_err(|e| e.to_string())?;
        let dc = cocycle_global_defect(&x, &alpha, &cfg).map_err(|e| e.to_string())?;
        ensure(dh.exactness == Exactness::ExactWithinCap && dc.exactness == Exactness::ExactWithinCap, || {
            format!("instance {t}: search hit its guard")
        })?;
        ensure(dh.upper_bound >= dc.upper_bound, || {
            format!("instance {t}: Def_hom {} < Def_cocyc {}", dh.upper_bound, dc.upper_bound)
        })?;
        if dh.upper_bound > dc.upper_bound {
            strict += 1;
        }
    }
    Ok(format!("100 instances, {strict} strict"))
}

fn c06_cut_family() -> Check {
    let d = 6usize;
    let inst = cut_family(d).map_err(|e| e.to_string())?;
    let (pres, map) = fundamental_presentation_with_tree(&inst.complex, &inst.tree).map_err(|e| e.to_string())?;
    let images = restrict_to_generators(&inst.alpha, &map);
    let def_hom = hom_local_defect(&pres, &images, None).map_err(|e| e.to_string())?.value;
    let def_coc = cocycle_local_defect(&inst.complex, &inst.alpha, None).map_err(|e| e.to_string())?.value;
    let formula = ratio(6, (d * (d - 1)) as i64);
    ensure(def_hom == formula && def_coc == formula, || format!("def_hom {def_hom}, def_cocyc {def_coc}, expected {formula}"))?;
    let big = hom_global_defect(&pres, &images, &SearchConfig::default()).map_err(|e| e.to_string())?;
    ensure(big.exactness == Exactness::ExactWithinCap, || "search hit its guard".into())?;
    // π₁ is trivial, so the only homomorphism is the identity: Def is the
    // fraction of generators carrying the transposition.
    let moved = images.iter().filter(|p| !p.is_identity()).count();
    let oracle = ratio(moved as i64, images.len() as i64);
    ensure(big.upper_bound == ratio(4, 5) && oracle == ratio(4, 5), || format!("Def_hom {} (oracle {oracle})", big.upper_bound))?;
    let ratio_ = &big.upper_bound / &def_hom;
    let directed = 2 * inst.complex.skeleton().edge_count();
    ensure(ratio_ == ratio(4, 1) && ratio_ >= ratio(directed as i64, 12), || format!("Def/def = {ratio_}"))?;
    Ok(format!("def = {def_hom}, Def_hom = {}, Def/def = {ratio_} ≥ {directed}/12", big.upper_bound))
}

fn oracle_eigenvalues(g: &Graph) -> Vec<f64> {
    let v = g.vertex_count();
    let mut m = DMatrix::<f64>::zeros(v, v);
    for &(a, b) in g.edges() {
        if a == b {
            m[(a - 1, a - 1)] += 2.0;
        } else {
            m[(a - 1, b - 1)] += 1.0;
            m[(b - 1, a - 1)] += 1.0;
        }
    }
    let mut e: Vec<f64> = m.symmetric_eigen().eigenvalues.iter().copied().collect();
    e.sort_by(|a, b| b.partial_cmp(a).unwrap());
    e
}

fn oracle_classical(g: &Graph) -> Rational {
    let v = g.vertex_count();
    (1u32..(1 << v) - 1)
        .map(|mask| {
            let inside = |x: usize| mask & (1 << (x - 1)) != 0;
            let cut = g.edges().iter().filter(|&&(a, b)| inside(a) != inside(b)).count();
            let s = mask.count_ones() as usize;
            ratio(cut as i64, s.min(v - s) as i64)
        })
        .min()
        .unwrap()
}

fn c07_spectral_cheeger() -> Check {
    let named = [("K4", complete_graph(4), 4.0 / 3.0), ("C4", cycle_graph(4), 1.0), ("Petersen", petersen(), 2.0 / 3.0)];
    for (name, g, want) in &named {
        let gamma = spectral_gap(g).map_err(|e| e.to_string())?.gamma;
        ensure((gamma - want).abs() <= 1e-9, || format!("γ({name}) = {gamma}, expected {want}"))?;
    }
    let h = classical_cheeger(&complete_graph(4)).map_err(|e| e.to_string())?.value.unwrap();
    ensure(h == ratio(2, 1), || format!("h(K4) = {h}"))?;
    let mut identity_count = 0;
    for (name, g) in regular_corpus() {
        let rep = spectral_gap(&g).map_err(|e| e.to_string())?;
        let oracle = oracle_eigenvalues(&g);
        ensure(rep.eigenvalues.iter().zip(&oracle).all(|(a, b)| (a - b).abs() <= 1e-9), || {
            format!("{name}: eigenvalues {:?} vs {oracle:?}", rep.eigenvalues)
        })?;
        let h0 = cheeger0(&g, CheegerVariant::Cocycle, 2, DEFAULT_GUARD).map_err(|e| e.to_string())?.value.unwrap();
        let h0f = f64_of(&h0);
        ensure(rep.gamma <= h0f + 1e-9 && h0f <= (8.0 * rep.gamma).sqrt() + 1e-9, || {
            format!("{name}: γ = {}, h₀ = {h0}", rep.gamma)
        })?;
        if g.vertex_count() <= 8 {
            let h = classical_cheeger(&g).map_err(|e| e.to_string())?.value.unwrap();
            ensure(h == oracle_classical(&g), || format!("{name}: classical h = {h}, brute force {}", oracle_classical(&g)))?;
            let scaled = ratio(rep.k as i64, 2) * &h0;
            ensure(h == scaled, || format!("{name}: h = {h}, (k/2)·h₀ = {scaled}"))?;
            identity_count += 1;
        }
    }
    Ok(format!("γ values, h(K4) = 2, (k/2)·h₀ identity on {identity_count} graphs, γ ≤ h₀ ≤ √(8γ) on 11"))
}

/// Distance to the nearest constant of the cochain's own degree.
fn oracle_distance_to_constants(b: &Cochain0) -> Rational {
    let n = b.degree();
    let v = b.values().len() as i64;
    all_permutations(n)
        .iter()
        .map(|s| b.values().iter().map(|p| oracle_distance(&p.images(), &s.images())).sum::<Rational>() / ratio(v, 1))
        .min()
        .unwrap()
}

fn c08_zero_dim_and_profile() -> Check {
    let graphs = [("K4", complete_graph(4)), ("C5", cycle_graph(5)), ("Petersen", petersen())];
    let mut r = rng(8);
    for t in 0..1000 {
        let (name, g) = &graphs[t % graphs.len()];
        let n = r.gen_range(1..=4);
        let b = random_cochain0(g.vertex_count(), n, &mut r);
        let rep = zero_dim_bound_check(g, &b).map_err(|e| e.to_string())?;
        let oracle = oracle_distance_to_constants(&b);
        ensure(rep.lhs == oracle, || format!("{name}: d(b, Z⁰) = {}, brute force {oracle}", rep.lhs))?;
        ensure(rep.holds && f64_of(&rep.lhs) <= rep.rhs + 1e-9, || format!("{name}: {} > {}", rep.lhs, rep.rhs))?;
    }
    let mut rows = 0;
    let mut violations = Vec::new();
    for d in [4, 5] {
        let x = complete_complex(d);
        let cfg = ProfileConfig {
            degree: 2,
            grid: vec![0.0, 0.05, 0.1, 0.2],
            samples: 5,
            seed: 8,
            search: SearchConfig::with_n_max(4),
        };
        let p = stability_profile(ProfileSource::Complex(&x), &cfg).map_err(|e| e.to_string())?;
        for row in &p.rows {
            rows += 1;
            if row.exactness != Exactness::ExactWithinCap || row.global > row.local {
                violations.push(format!("d={d} level={} Def={} def={}", row.level, row.global, row.local));
            }
        }
    }
    ensure(violations.is_empty(), || format!("profile rows with Def > def: {}", violations.join("; ")))?;
    Ok(format!("1000 zero-dim checks, {rows} profile rows with Def ≤ def"))
}

fn c09_perturbation() -> Check {
    let mut r = rng(9);
    let corpus = corpus();
    for (name, x) in &corpus {
        let g = x.skeleton();
        let longest = x.polygons().iter().map(|c| c.len()).max().unwrap();
        for _ in 0..1000 {
            let n = r.gen_range(1..=5);
            let big = if r.gen_bool(0.5) { n } else { r.gen_range(1..=5) };
            let alpha = random_cochain1(g.edge_count(), n, &mut r);
            let phi = random_cochain1(g.edge_count(), big, &mut r);
            let mu2 = random_distribution(x.polygon_count(), &mut r);
            let w = polygon_weights(x, Some(&mu2)).map_err(|e| e.to_string())?;
            let lhs = coboundary_distance(x, &alpha, &phi, Some(&mu2)).map_err(|e| e.to_string())?;
            let d = cochain_distance(&alpha, &phi, Some(&w.mu1)).map_err(|e| e.to_string())?;
            let mid = &w.expected_length * &d;
            ensure(lhs <= mid && mid <= ratio(longest as i64, 1) * &d, || {
                format!("{name}: d(δα, δφ) = {lhs}, E[ℓ]·d = {mid}, L·d = {}", ratio(longest as i64, 1) * &d)
            })?;
        }
    }
    Ok(format!("1000 triples on each of {} complexes", corpus.len()))
}

/// Rejection probability of the all-constraints variant: `1 − Π (1 − p_c)`.
fn linf_oracle(per: &[Rational]) -> Rational {
    Rational::one() - per.iter().map(|p| Rational::one() - p).product::<Rational>()
}

fn c10_monte_carlo() -> Check {
    const TRIALS: u64 = 100_000;
    let mut r = rng(10);
    let a3 = cyclic_presentation(3);
    let torus_p = torus_presentation();
    let tri = triangle_complex();
    let k4 = complete_complex(4);
    let tor = torus_complex();
    let cut = cut_family(6).unwrap();
    let blr = blr_matrix(2);
    let const_one = vec![1u8; 4];
    let noisy_table = vec![0u8, 1, 1, 1];

    let hom_images: Vec<Vec<Permutation>> = (0..2).map(|_| vec![random_permutation(3, &mut r), random_permutation(3, &mut r)]).collect();
    let a3_images = [vec![Permutation::from_images(&[2, 1]).unwrap()], vec![random_permutation(4, &mut r)]];
    let cochains: [(&PolygonalComplex, Cochain1); 6] = [
        (&tri, random_cochain1(3, 3, &mut r)),
        (&tri, random_cochain1(3, 4, &mut r)),
        (&k4, random_cochain1(6, 2, &mut r)),
        (&k4, random_cochain1(6, 3, &mut r)),
        (&tor, random_cochain1(2, 3, &mut r)),
        (&cut.complex, cut.alpha.clone()),
    ];
    let covers: Vec<_> = [(&tri, random_cochain1(3, 3, &mut r)), (&k4, random_cochain1(6, 2, &mut r))]
        .into_iter()
        .map(|(x, a)| (x, cochain_to_covering(x.skeleton(), &a).unwrap()))
        .collect();

    // (label, kind, target, linf, exact rejection probability from an oracle)
    let mut cases: Vec<(String, DefectKind, SampleTarget<'_>, bool, Rational)> = Vec::new();
    for (i, im) in hom_images.iter().enumerate() {
        let p = hom_local_defect(&torus_p, im, None).unwrap().value;
        cases.push((format!("torus hom {i}"), DefectKind::Hom, SampleTarget::Hom { presentation: &torus_p, images: im, mu: None }, false, p));
    }
    for (i, im) in a3_images.iter().enumerate() {
        let n = im[0].degree();
        let f = images_of(im);
        let v = oracle_word(a3.relators()[0].letters(), &f, n);
        let p = ratio(v.iter().enumerate().filter(|(i, &j)| i + 1 != j).count() as i64, n as i64);
        cases.push((format!("a3 hom {i}"), DefectKind::Hom, SampleTarget::Hom { presentation: &a3, images: im, mu: None }, false, p.clone()));
        cases.push((format!("a3 hom linf {i}"), DefectKind::Hom, SampleTarget::Hom { presentation: &a3, images: im, mu: None }, true, p));
    }
    for (i, (x, a)) in cochains.iter().enumerate() {
        let n = a.degree();
        let per: Vec<Rational> = x
            .polygons()
            .iter()
            .map(|c| {
                let v = coboundary1(x.skeleton(), a, &c.canonical).unwrap();
                ratio((n - v.fixed_points()) as i64, n as i64)
            })
            .collect();
        let p = per.iter().sum::<Rational>() / ratio(per.len() as i64, 1);
        cases.push((format!("cocycle {i}"), DefectKind::Cocycle, SampleTarget::Cocycle { complex: x, alpha: a, mu: None }, false, p));
        if i < 2 {
            cases.push((format!("cocycle linf {i}"), DefectKind::Cocycle, SampleTarget::Cocycle { complex: x, alpha: a, mu: None }, true, linf_oracle(&per)));
        }
    }
    for (i, (x, c)) in covers.iter().enumerate() {
        let p = cover_local_defect(c, x, None).unwrap().value;
        let dm = dm_cover_local_defect(c, x, None).unwrap().value;
        cases.push((format!("cover {i}"), DefectKind::Cover, SampleTarget::Cover { complex: x, covering: c, mu: None }, false, p));
        cases.push((format!("cover-dm {i}"), DefectKind::CoverDm, SampleTarget::Cover { complex: x, covering: c, mu: None }, false, dm));
    }
    for (label, v) in [("const-one", &const_one), ("noisy", &noisy_table)] {
        let rows = blr.rows();
        let bad = rows.iter().filter(|row| row.iter().zip(v.iter()).map(|(a, b)| a & b).sum::<u8>() % 2 == 1).count();
        let p = ratio(bad as i64, rows.len() as i64);
        cases.push((format!("matrix {label}"), DefectKind::Matrix, SampleTarget::Matrix { matrix: &blr, vector: v, mu: None }, false, p));
    }
    ensure(cases.len() == 20, || format!("{} instances assembled", cases.len()))?;

    let mut within = 0;
    let mut misses = Vec::new();
    for (i, (label, kind, target, linf, p)) in cases.iter().enumerate() {
        let seed = 1000 + i as u64;
        let one = run_sampled(*kind, target, TRIALS, seed, *linf, 1).map_err(|e| e.to_string())?;
        let eight = run_sampled(*kind, target, TRIALS, seed, *linf, 8).map_err(|e| e.to_string())?;
        let (s1, s8) = (serde_json::to_string(&one).unwrap(), serde_json::to_string(&eight).unwrap());
        ensure(s1 == s8, || format!("{label}: 1 vs 8 workers differ:\n{s1}\n{s8}"))?;
        ensure(&one.exact == p, || format!("{label}: reported exact {} vs oracle {p}", one.exact))?;
        let pf = f64_of(p);
        let rate = one.rejections as f64 / TRIALS as f64;
        let tol = 4.0 * (pf * (1.0 - pf) / TRIALS as f64).sqrt();
        if (rate - pf).abs() <= tol {
            within += 1;
        } else {
            misses.push(format!("{label}: rate {rate} vs {pf} (±{tol})"));
        }
    }
    ensure(within >= 19, || format!("only {within}/20 within 4σ: {}", misses.join("; ")))?;
    Ok(format!("{within}/20 within 4σ, 1 and 8 workers byte-identical"))
}

fn c11_matrix() -> Check {
    let a = blr_matrix(2);
    let pres = a.presentation();
    for s in 0..4 {
        let v = linear_table(2, s);
        let rep = matrix_tester(&a, &v, None).map_err(|e| e.to_string())?;
        ensure(rep.value.is_zero(), || format!("linear map {s} has defect {}", rep.value))?;
    }
    let ones = vec![1u8; 4];
    let rep = matrix_tester(&a, &ones, None).map_err(|e| e.to_string())?;
    let bad = a.rows().iter().filter(|row| row.iter().zip(&ones).filter(|(&x, &y)| x & y == 1).count() % 2 == 1).count();
    let rows = ratio(bad as i64, a.rows().len() as i64);
    let hom = hom_local_defect(&pres, &vector_images(&ones), None).map_err(|e| e.to_string())?.value;
    ensure(rep.value == rows && rows == hom && !rows.is_zero(), || {
        format!("constant-1: tester {}, row enumeration {rows}, induced hom {hom}", rep.value)
    })?;
    Ok(format!("4 linear maps accepted, constant-1 defect {rows}"))
}

fn c12_vanishing() -> Check {
    let mut r = rng(12);
    let mut connected = 0;
    for t in 0..50 {
        let v = r.gen_range(1..=6);
        let p = r.gen_range(0.1..0.9);
        let g = random_graph(v, p, &mut r);
        for n in [2, 3] {
            if n == 3 && v > 6 {
                continue;
            }
            let vanishes = h0_vanishes(&g, n).map_err(|e| e.to_string())?;
            ensure(vanishes == g.is_connected(), || format!("graph {t} (V={v}): H⁰ vanishing {vanishes} at N={n}"))?;
        }
        connected += usize::from(g.is_connected());
    }
    let expect = [
        ("triangle", triangle_complex(), [true, true, true]),
        ("bouquet", bouquet(1), [true, false, false]),
        ("torus", torus_complex(), [true, false, false]),
    ];
    for (name, x, want) in expect {
        let levels = h1_vanishing_check(&x, 3, DEFAULT_GUARD).map_err(|e| e.to_string())?;
        let got: Vec<bool> = levels.iter().map(|l| l.vanishes).collect();
        ensure(got == want, || format!("{name}: vanishing per N = {got:?}, expected {want:?}"))?;
    }
    Ok(format!("50 graphs ({connected} connected), H¹ checks on triangle, bouquet, torus"))
}

fn main() -> ExitCode {
    type Criterion = (&'static str, u64, fn() -> Check);
    let criteria: [Criterion; 12] = [
        ("metric bridge", 5, c01_metric_bridge),
        ("coboundary exactness", 10, c02_exactness),
        ("covers vs cochains", 30, c03_covers_cochains),
        ("homomorphisms vs cocycles", 120, c04_homs_cocycles),
        ("tree normalization bound", 300, c05_tree_bound),
        ("cut family d = 6", 60, c06_cut_family),
        ("spectral gap and Cheeger", 300, c07_spectral_cheeger),
        ("zero-dim bound and profile", 300, c08_zero_dim_and_profile),
        ("weighted perturbation bound", 60, c09_perturbation),
        ("Monte Carlo soundness", 120, c10_monte_carlo),
        ("matrix tester", 5, c11_matrix),
        ("H0/H1 vanishing", 60, c12_vanishing),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, budget, f)) in criteria.iter().enumerate() {
        let id = i + 1;
        if !filter.is_empty() && !filter.iter().any(|s| s.parse() == Ok(id) || name.contains(s.as_str())) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(_) if took > Duration::from_secs(*budget) => Err(format!("took {took:.1?}, budget {budget} s")),
            o => o,
        };
        match outcome {
            Ok(detail) => println!("PASS {id:>2} {name} ({took:.2?}): {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {id:>2} {name} ({took:.2?}): {detail}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
