//! Empirical stability profiles: corrupt genuine solutions at a grid of
//! levels and tabulate exact local defect against the global-defect bound.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::global::{cocycle_global_defect, hom_global_defect, Exactness, SearchConfig};
use super::homs::enumerate_homomorphisms;
use crate::cochain::{act0on1, extend_from_generators, Cochain0, Cochain1};
use crate::complex::{fundamental_presentation, PolygonalComplex, Presentation};
use crate::perm::{random_permutation, Permutation};
use crate::testers::{cocycle_local_defect, hom_local_defect, DefectKind};
use crate::{fmt_ratio, Error, Rational, Result};

/// Generator identifier recorded in profile output.
pub const PROFILE_GENERATOR_ID: &str = "chacha8/seed_from_u64/stream=level";

#[derive(Clone, Copy, Debug)]
pub enum ProfileSource<'a> {
    Presentation(&'a Presentation),
    Complex(&'a PolygonalComplex),
}

#[derive(Clone, Debug)]
pub struct ProfileConfig {
    pub degree: usize,
    /// Per-cell probability of replacing a value by a uniform permutation.
    pub grid: Vec<f64>,
    pub samples: usize,
    pub seed: u64,
    pub search: SearchConfig,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProfileRow {
    pub level: f64,
    pub sample: usize,
    #[serde(serialize_with = "crate::testers::ser_ratio")]
    pub local: Rational,
    #[serde(serialize_with = "crate::testers::ser_ratio")]
    pub global: Rational,
    pub witness_degree: usize,
    pub exactness: Exactness,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Profile {
    pub kind: DefectKind,
    pub seed: u64,
    pub generator: &'static str,
    pub rows: Vec<ProfileRow>,
}

fn corrupt<R: Rng + ?Sized>(values: &mut [Permutation], level: f64, n: usize, rng: &mut R) {
    for v in values {
        if rng.gen_bool(level) {
            *v = random_permutation(n, rng);
        }
    }
}

/// One row for explicit generator images.
pub fn hom_profile_row(p: &Presentation, images: &[Permutation], level: f64, sample: usize, cfg: &SearchConfig) -> Result<ProfileRow> {
    let local = hom_local_defect(p, images, None)?.value;
    let g = hom_global_defect(p, images, cfg)?;
    Ok(ProfileRow { level, sample, local, global: g.upper_bound, witness_degree: g.witness_degree, exactness: g.exactness })
}

/// One row for an explicit 1-cochain.
pub fn cocycle_profile_row(x: &PolygonalComplex, alpha: &Cochain1, level: f64, sample: usize, cfg: &SearchConfig) -> Result<ProfileRow> {
    let local = cocycle_local_defect(x, alpha, None)?.value;
    let g = cocycle_global_defect(x, alpha, cfg)?;
    Ok(ProfileRow { level, sample, local, global: g.upper_bound, witness_degree: g.witness_degree, exactness: g.exactness })
}

/// Level `i` of the grid draws from `ChaCha8Rng::seed_from_u64(seed)` on
/// stream `i`. Each sample starts from a uniformly chosen homomorphism
/// (for complexes: a tree-presentation homomorphism moved by a uniform
/// 0-cochain) and corrupts it.
pub fn stability_profile(src: ProfileSource<'_>, cfg: &ProfileConfig) -> Result<Profile> {
    let n = cfg.degree;
    if n == 0 {
        return Err(Error::InvalidInput("degree must be at least 1".into()));
    }
    if let Some(l) = cfg.grid.iter().find(|l| !(0.0..=1.0).contains(*l)) {
        return Err(Error::InvalidInput(format!("corruption level {l} is outside [0, 1]")));
    }
    let (kind, pres, tree_map) = match src {
        ProfileSource::Presentation(p) => (DefectKind::Hom, p.clone(), None),
        ProfileSource::Complex(x) => {
            let (p, _, map) = fundamental_presentation(x, 1)?;
            (DefectKind::Cocycle, p, Some(map))
        }
    };
    let homs = enumerate_homomorphisms(&pres, n, cfg.search.guard)?;
    let mut rows = Vec::new();
    for (i, &level) in cfg.grid.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(i as u64);
        for sample in 0..cfg.samples {
            let h = &homs[rng.gen_range(0..homs.len())];
            let row = match (src, &tree_map) {
                (ProfileSource::Complex(x), Some(map)) => {
                    let g = x.skeleton();
                    let beta = Cochain0::random(g.vertex_count(), n, &mut rng);
                    let mut values = act0on1(g, &beta, &extend_from_generators(h, map, n)?)?.values().to_vec();
                    corrupt(&mut values, level, n, &mut rng);
                    cocycle_profile_row(x, &Cochain1::new(n, values)?, level, sample, &cfg.search)?
                }
                _ => {
                    let mut images = h.clone();
                    corrupt(&mut images, level, n, &mut rng);
                    hom_profile_row(&pres, &images, level, sample, &cfg.search)?
                }
            };
            rows.push(row);
        }
    }
    Ok(Profile { kind, seed: cfg.seed, generator: PROFILE_GENERATOR_ID, rows })
}

/// Twelve significant digits, shortest form.
pub fn fmt_real(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    format!("{rounded}")
}

pub fn profile_csv(p: &Profile) -> String {
    let mut out = format!("# seed={} generator={} kind={}\n", p.seed, p.generator, p.kind);
    out.push_str("level,sample,local_defect,global_upper_bound,witness_degree,exactness\n");
    for r in &p.rows {
        let ex = match r.exactness {
            Exactness::ExactWithinCap => "exact-within-cap",
            Exactness::Heuristic => "heuristic",
        };
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            fmt_real(r.level),
            r.sample,
            fmt_ratio(&r.local),
            fmt_ratio(&r.global),
            r.witness_degree,
            ex
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::SignedWord;
    use crate::ratio;

    fn a3() -> Presentation {
        Presentation::new(1, vec![SignedWord::new(vec![1, 1, 1]).unwrap()]).unwrap()
    }

    #[test]
    fn bouquet_row() {
        let t = Permutation::from_images(&[2, 1]).unwrap();
        let r = hom_profile_row(&a3(), &[t], 0.0, 0, &SearchConfig::with_n_max(4)).unwrap();
        assert_eq!((r.local, r.global), (ratio(1, 1), ratio(2, 3)));
    }

    #[test]
    fn zero_level_rows_vanish() {
        let torus = Presentation::new(2, vec![SignedWord::new(vec![1, 2, -1, -2]).unwrap()]).unwrap();
        let cfg = ProfileConfig { degree: 3, grid: vec![0.0, 0.5], samples: 4, seed: 7, search: SearchConfig::default() };
        let p = stability_profile(ProfileSource::Presentation(&torus), &cfg).unwrap();
        assert_eq!(p.rows.len(), 8);
        for r in p.rows.iter().filter(|r| r.level == 0.0) {
            assert_eq!((r.local.clone(), r.global.clone()), (ratio(0, 1), ratio(0, 1)));
        }
        assert_eq!(profile_csv(&p), profile_csv(&stability_profile(ProfileSource::Presentation(&torus), &cfg).unwrap()));
    }

    #[test]
    fn reals() {
        assert_eq!(fmt_real(4.0 / 3.0), "1.33333333333");
        assert_eq!(fmt_real(0.25), "0.25");
    }
}
