//! The testers: exact rejection probabilities by enumeration, and seeded
//! Monte Carlo runs of the randomized procedures themselves.
//!
//! Sampled runs split the trials into fixed blocks of [`BLOCK`] trials.
//! Block `b` draws from `ChaCha8Rng::seed_from_u64(seed)` on stream `b`, so
//! the outcome depends only on the seed and the trial count, never on how
//! blocks are spread over worker threads.

use std::fmt;
use std::str::FromStr;

use num::{One, Zero};
use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cochain::{coboundary_norm, Cochain1};
use crate::complex::{check_distribution, uniform, PolygonalComplex, Presentation};
use crate::graph::Covering;
use crate::perm::{evaluate_unchecked, Permutation, SignedWord};
use crate::{fmt_ratio, ratio, to_f64, Error, Rational, Result};

/// Trials per independently seeded block.
pub const BLOCK: u64 = 4096;

/// Identifier of the random generator and stream derivation.
pub const GENERATOR_ID: &str = "chacha8/seed_from_u64/stream=block/4096";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DefectKind {
    Hom,
    Cocycle,
    Cover,
    CoverDm,
    Matrix,
}

impl fmt::Display for DefectKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DefectKind::Hom => "hom",
            DefectKind::Cocycle => "cocycle",
            DefectKind::Cover => "cover",
            DefectKind::CoverDm => "cover-dm",
            DefectKind::Matrix => "matrix",
        })
    }
}

impl FromStr for DefectKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hom" => Ok(DefectKind::Hom),
            "cocycle" => Ok(DefectKind::Cocycle),
            "cover" => Ok(DefectKind::Cover),
            "cover-dm" | "cover_dm" => Ok(DefectKind::CoverDm),
            "matrix" => Ok(DefectKind::Matrix),
            other => Err(Error::InvalidInput(format!("unknown kind {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DefectReport {
    pub kind: DefectKind,
    #[serde(serialize_with = "ser_ratio")]
    pub value: Rational,
    pub weighted: bool,
    pub distribution: String,
    pub warnings: Vec<String>,
}

pub(crate) fn ser_ratio<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_ratio(r))
}

fn describe(weights: Option<&[Rational]>, what: &str) -> String {
    match weights {
        None => format!("uniform over {what}"),
        Some(w) => format!("weighted over {what}: [{}]", w.iter().map(fmt_ratio).collect::<Vec<_>>().join(", ")),
    }
}

fn weights_or_uniform(w: Option<&[Rational]>, len: usize, what: &str) -> Result<Vec<Rational>> {
    match w {
        Some(w) => {
            check_distribution(w, len, what)?;
            Ok(w.to_vec())
        }
        None => Ok(uniform(len)),
    }
}

fn relator_values(p: &Presentation, images: &[Permutation]) -> Result<(usize, Vec<Permutation>)> {
    let n = crate::cochain::check_images(p, images)?;
    Ok((n, p.relators().iter().map(|r| evaluate_unchecked(r.letters(), images, n)).collect()))
}

/// `E_{r∼μ_R} d_h(f(r), Id)`.
pub fn hom_local_defect(p: &Presentation, images: &[Permutation], mu_r: Option<&[Rational]>) -> Result<DefectReport> {
    let (n, values) = relator_values(p, images)?;
    let mut report = DefectReport {
        kind: DefectKind::Hom,
        value: Rational::zero(),
        weighted: mu_r.is_some(),
        distribution: describe(mu_r, "relators"),
        warnings: Vec::new(),
    };
    if values.is_empty() {
        report.warnings.push("presentation has no relators; defect is 0".into());
        return Ok(report);
    }
    let mu = weights_or_uniform(mu_r, values.len(), "mu_R")?;
    report.value = values
        .iter()
        .zip(&mu)
        .map(|(v, w)| w * ratio((n - v.fixed_points()) as i64, n as i64))
        .sum();
    Ok(report)
}

/// `‖δα‖`, the rejection probability of the cocycle tester.
pub fn cocycle_local_defect(x: &PolygonalComplex, alpha: &Cochain1, mu2: Option<&[Rational]>) -> Result<DefectReport> {
    Ok(DefectReport {
        kind: DefectKind::Cocycle,
        value: coboundary_norm(x, alpha, mu2)?,
        weighted: mu2.is_some(),
        distribution: describe(mu2, "polygons"),
        warnings: Vec::new(),
    })
}

fn check_cover(c: &Covering, x: &PolygonalComplex) -> Result<()> {
    if c.base() != x.skeleton() {
        return Err(Error::NotCovering("covering is not over the complex's skeleton".into()));
    }
    Ok(())
}

/// Number of open lifts of each polygon class, found by lifting its
/// canonical representative from every point of the fiber.
pub fn open_lifts(c: &Covering, x: &PolygonalComplex) -> Result<Vec<usize>> {
    check_cover(c, x)?;
    let mut out = Vec::with_capacity(x.polygon_count());
    for class in x.polygons() {
        let path = &class.canonical;
        let start = path.start(x.skeleton()).expect("polygons are nonempty");
        let mut open = 0;
        for i in 1..=c.degree() {
            if !c.lift_closes(c.vertex_at(start, i), path)? {
                open += 1;
            }
        }
        out.push(open);
    }
    Ok(out)
}

fn no_polygons(x: &PolygonalComplex) -> Result<()> {
    if x.polygon_count() == 0 {
        return Err(Error::InvalidComplex("complex has no polygons".into()));
    }
    Ok(())
}

/// Probability that the lift of a random polygon at a random fiber point is open.
pub fn cover_local_defect(c: &Covering, x: &PolygonalComplex, mu2: Option<&[Rational]>) -> Result<DefectReport> {
    no_polygons(x)?;
    let open = open_lifts(c, x)?;
    let mu = weights_or_uniform(mu2, x.polygon_count(), "mu2")?;
    let n = c.degree() as i64;
    Ok(DefectReport {
        kind: DefectKind::Cover,
        value: open.iter().zip(&mu).map(|(&o, w)| w * ratio(o as i64, n)).sum(),
        weighted: mu2.is_some(),
        distribution: describe(mu2, "polygons"),
        warnings: Vec::new(),
    })
}

/// Probability that a random polygon has some open lift (discrete metric).
pub fn dm_cover_local_defect(c: &Covering, x: &PolygonalComplex, mu2: Option<&[Rational]>) -> Result<DefectReport> {
    no_polygons(x)?;
    let open = open_lifts(c, x)?;
    let mu = weights_or_uniform(mu2, x.polygon_count(), "mu2")?;
    Ok(DefectReport {
        kind: DefectKind::CoverDm,
        value: open.iter().zip(&mu).filter(|(&o, _)| o > 0).map(|(_, w)| w.clone()).sum(),
        weighted: mu2.is_some(),
        distribution: describe(mu2, "polygons"),
        warnings: Vec::new(),
    })
}

/// Dense 0/1 matrix over `F₂`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinaryMatrix {
    rows: Vec<Vec<u8>>,
    cols: usize,
}

impl BinaryMatrix {
    pub fn new(rows: Vec<Vec<u8>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::InvalidInput(format!("row {} has {} entries, expected {cols}", i + 1, r.len())));
            }
            if r.iter().any(|&b| b > 1) {
                return Err(Error::InvalidInput(format!("row {} has a non-binary entry", i + 1)));
            }
        }
        Ok(BinaryMatrix { rows, cols })
    }

    pub fn rows(&self) -> &[Vec<u8>] {
        &self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// `⟨x_1..x_n | ∏_j x_j^{A_ij}⟩`, each product ordered by index.
    pub fn presentation(&self) -> Presentation {
        let relators = self
            .rows
            .iter()
            .map(|r| {
                let letters = r.iter().enumerate().filter(|(_, &b)| b == 1).map(|(j, _)| j as i64 + 1).collect();
                SignedWord::new(letters).expect("letters are positive")
            })
            .collect();
        Presentation::new(self.cols, relators).expect("letters are within the alphabet")
    }

    fn violated(&self, v: &[u8]) -> Vec<bool> {
        self.rows
            .iter()
            .map(|r| r.iter().zip(v).filter(|(&a, &b)| a & b == 1).count() % 2 == 1)
            .collect()
    }
}

/// `x_j ↦ (1 2)^{v_j}` in `Sym(2) ≅ F₂`.
pub fn vector_images(v: &[u8]) -> Vec<Permutation> {
    v.iter()
        .map(|&b| if b == 1 { Permutation::from_images(&[2, 1]).expect("valid") } else { Permutation::identity(2) })
        .collect()
}

/// `Pr_{i∼μ}[R_i · v ≠ 0]`, cross-checked against the homomorphism tester on
/// the induced presentation over `Sym(2)`.
pub fn matrix_tester(a: &BinaryMatrix, v: &[u8], mu: Option<&[Rational]>) -> Result<DefectReport> {
    if v.len() != a.cols() {
        return Err(Error::InvalidInput(format!("vector has {} entries for {} columns", v.len(), a.cols())));
    }
    if v.iter().any(|&b| b > 1) {
        return Err(Error::InvalidInput("vector has a non-binary entry".into()));
    }
    let mut warnings = Vec::new();
    if a.rows().is_empty() {
        return Ok(DefectReport {
            kind: DefectKind::Matrix,
            value: Rational::zero(),
            weighted: mu.is_some(),
            distribution: describe(mu, "rows"),
            warnings: vec!["matrix has no rows; defect is 0".into()],
        });
    }
    let weights = weights_or_uniform(mu, a.rows().len(), "mu")?;
    if weights.iter().any(|w| w.is_zero()) {
        warnings.push("row distribution is not fully supported; the tester is not complete".into());
    }
    let value: Rational = a.violated(v).iter().zip(&weights).filter(|(&bad, _)| bad).map(|(_, w)| w.clone()).sum();
    let induced = hom_local_defect(&a.presentation(), &vector_images(v), Some(&weights))?;
    assert_eq!(value, induced.value, "matrix tester disagrees with the induced homomorphism tester");
    Ok(DefectReport { kind: DefectKind::Matrix, value, weighted: mu.is_some(), distribution: describe(mu, "rows"), warnings })
}

/// Parity rows `e_x + e_y + e_{x+y}` (mod 2) for all `x, y ∈ F₂^m`; columns
/// are indexed by the integer encoding of `x`.
pub fn blr_matrix(m: u32) -> BinaryMatrix {
    let size = 1usize << m;
    let mut rows = Vec::with_capacity(size * size);
    for x in 0..size {
        for y in 0..size {
            let mut row = vec![0u8; size];
            for j in [x, y, x ^ y] {
                row[j] ^= 1;
            }
            rows.push(row);
        }
    }
    BinaryMatrix::new(rows).expect("rows are binary and equal length")
}

/// Truth table of `x ↦ a · x` on `F₂^m`.
pub fn linear_table(m: u32, a: usize) -> Vec<u8> {
    (0..1usize << m).map(|x| ((x & a).count_ones() % 2) as u8).collect()
}

/// The object a sampled run tests.
#[derive(Clone, Debug)]
pub enum SampleTarget<'a> {
    Hom { presentation: &'a Presentation, images: &'a [Permutation], mu: Option<&'a [Rational]> },
    Cocycle { complex: &'a PolygonalComplex, alpha: &'a Cochain1, mu: Option<&'a [Rational]> },
    Cover { complex: &'a PolygonalComplex, covering: &'a Covering, mu: Option<&'a [Rational]> },
    Matrix { matrix: &'a BinaryMatrix, vector: &'a [u8], mu: Option<&'a [Rational]> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TestOutcome {
    pub kind: DefectKind,
    pub linf: bool,
    pub trials: u64,
    pub rejections: u64,
    #[serde(serialize_with = "ser_ratio")]
    pub empirical_rate: Rational,
    /// The exact rejection probability the rate estimates.
    #[serde(serialize_with = "ser_ratio")]
    pub exact: Rational,
    pub seed: u64,
    pub generator: String,
}

// One constraint: either a fixed permutation checked at a random point, a
// set of orientations with their values, or a whole polygon to lift.
enum Constraint<'a> {
    Point(Permutation),
    Orientations(Vec<Permutation>),
    Lift { paths: Vec<&'a crate::graph::Path> },
    Parity(bool),
}

struct Sampler<'a> {
    kind: DefectKind,
    n: usize,
    constraints: Vec<Constraint<'a>>,
    weights: Option<WeightedIndex<f64>>,
    covering: Option<&'a Covering>,
    base: Option<&'a crate::graph::Graph>,
}

impl Sampler<'_> {
    fn pick<R: Rng>(&self, rng: &mut R) -> usize {
        match &self.weights {
            Some(w) => w.sample(rng),
            None => rng.gen_range(0..self.constraints.len()),
        }
    }

    /// Whether constraint `c` rejects on one randomized check.
    fn check<R: Rng>(&self, c: usize, rng: &mut R) -> bool {
        match &self.constraints[c] {
            Constraint::Point(p) => {
                let i = rng.gen_range(1..=self.n);
                p.apply(i) != i
            }
            Constraint::Orientations(vals) => {
                let o = &vals[rng.gen_range(0..vals.len())];
                let i = rng.gen_range(1..=self.n);
                o.apply(i) != i
            }
            Constraint::Lift { paths } => {
                let cov = self.covering.expect("lift constraints carry a covering");
                let base = self.base.expect("lift constraints carry a base");
                let path = paths[rng.gen_range(0..paths.len())];
                let start = path.start(base).expect("polygons are nonempty");
                if self.kind == DefectKind::CoverDm {
                    (1..=self.n).any(|i| !cov.lift_closes(cov.vertex_at(start, i), path).expect("valid lift"))
                } else {
                    let i = rng.gen_range(1..=self.n);
                    !cov.lift_closes(cov.vertex_at(start, i), path).expect("valid lift")
                }
            }
            Constraint::Parity(bad) => *bad,
        }
    }

    fn trial<R: Rng>(&self, linf: bool, rng: &mut R) -> bool {
        if linf {
            // every constraint is checked; no short-circuit, so the stream
            // consumption per trial is fixed
            let mut reject = false;
            for c in 0..self.constraints.len() {
                reject |= self.check(c, rng);
            }
            reject
        } else {
            let c = self.pick(rng);
            self.check(c, rng)
        }
    }
}

fn weighted_index(mu: Option<&[Rational]>, len: usize, what: &str) -> Result<Option<WeightedIndex<f64>>> {
    match mu {
        None => Ok(None),
        Some(m) => {
            check_distribution(m, len, what)?;
            let w: Vec<f64> = m.iter().map(to_f64).collect();
            WeightedIndex::new(w).map(Some).map_err(|e| Error::InvalidDistribution(e.to_string()))
        }
    }
}

/// Exact `1 − Π_c (1 − p_c)` over constraint rejection probabilities.
fn linf_exact(per_constraint: &[Rational]) -> Rational {
    let accept: Rational = per_constraint.iter().map(|p| Rational::one() - p).product();
    Rational::one() - accept
}

/// Seeded Monte Carlo run of the tester of the given kind.
pub fn run_sampled(kind: DefectKind, target: &SampleTarget<'_>, trials: u64, seed: u64, linf: bool, workers: usize) -> Result<TestOutcome> {
    if trials == 0 {
        return Err(Error::InvalidInput("trials must be at least 1".into()));
    }
    let (sampler, exact) = match (kind, target) {
        (DefectKind::Hom, SampleTarget::Hom { presentation, images, mu }) => {
            let (n, values) = relator_values(presentation, images)?;
            if values.is_empty() {
                return Err(Error::InvalidPresentation("presentation has no relators to sample".into()));
            }
            let per: Vec<Rational> = values.iter().map(|v| ratio((n - v.fixed_points()) as i64, n as i64)).collect();
            let exact = if linf { linf_exact(&per) } else { hom_local_defect(presentation, images, *mu)?.value };
            let weights = weighted_index(*mu, values.len(), "mu_R")?;
            let constraints = values.into_iter().map(Constraint::Point).collect();
            (Sampler { kind, n, constraints, weights, covering: None, base: None }, exact)
        }
        (DefectKind::Cocycle, SampleTarget::Cocycle { complex, alpha, mu }) => {
            let exact_avg = cocycle_local_defect(complex, alpha, *mu)?.value;
            let constraints: Vec<Constraint> = complex
                .polygons()
                .iter()
                .map(|c| Constraint::Orientations(c.orientations.iter().map(|o| alpha.path_value_unchecked(o.edges())).collect()))
                .collect();
            let n = alpha.degree();
            let per: Vec<Rational> = crate::cochain::polygon_violations(complex, alpha)
                .into_iter()
                .map(|v| ratio(v as i64, n as i64))
                .collect();
            let exact = if linf { linf_exact(&per) } else { exact_avg };
            let weights = weighted_index(*mu, complex.polygon_count(), "mu2")?;
            (Sampler { kind, n, constraints, weights, covering: None, base: None }, exact)
        }
        (DefectKind::Cover | DefectKind::CoverDm, SampleTarget::Cover { complex, covering, mu }) => {
            no_polygons(complex)?;
            let open = open_lifts(covering, complex)?;
            let n = covering.degree();
            let per: Vec<Rational> = open
                .iter()
                .map(|&o| if kind == DefectKind::CoverDm { ratio(i64::from(o > 0), 1) } else { ratio(o as i64, n as i64) })
                .collect();
            let exact = if linf {
                linf_exact(&per)
            } else if kind == DefectKind::CoverDm {
                dm_cover_local_defect(covering, complex, *mu)?.value
            } else {
                cover_local_defect(covering, complex, *mu)?.value
            };
            let constraints = complex
                .polygons()
                .iter()
                .map(|c| Constraint::Lift { paths: c.orientations.iter().collect() })
                .collect();
            let weights = weighted_index(*mu, complex.polygon_count(), "mu2")?;
            (
                Sampler { kind, n, constraints, weights, covering: Some(covering), base: Some(complex.skeleton()) },
                exact,
            )
        }
        (DefectKind::Matrix, SampleTarget::Matrix { matrix, vector, mu }) => {
            let report = matrix_tester(matrix, vector, *mu)?;
            if matrix.rows().is_empty() {
                return Err(Error::InvalidInput("matrix has no rows to sample".into()));
            }
            let violated = matrix.violated(vector);
            let exact = if linf { ratio(i64::from(violated.iter().any(|&b| b)), 1) } else { report.value };
            let constraints = violated.into_iter().map(Constraint::Parity).collect();
            let weights = weighted_index(*mu, matrix.rows().len(), "mu")?;
            (Sampler { kind, n: 1, constraints, weights, covering: None, base: None }, exact)
        }
        (kind, _) => {
            return Err(Error::InvalidInput(format!("kind {kind} does not match the supplied object")));
        }
    };

    let blocks = trials.div_ceil(BLOCK);
    let run_block = |b: u64| -> u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(b);
        let count = BLOCK.min(trials - b * BLOCK);
        (0..count).filter(|_| sampler.trial(linf, &mut rng)).count() as u64
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::InvalidInput(format!("cannot start worker pool: {e}")))?;
    let rejections: u64 = pool.install(|| (0..blocks).into_par_iter().map(run_block).sum());
    Ok(TestOutcome {
        kind,
        linf,
        trials,
        rejections,
        empirical_rate: ratio(rejections as i64, trials as i64),
        exact,
        seed,
        generator: GENERATOR_ID.to_string(),
    })
}
