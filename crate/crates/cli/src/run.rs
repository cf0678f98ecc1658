use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use num::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use permstab::cochain::{
    cochain_to_covering, covering_to_cochain, extend_from_generators, images_to_cochain, restrict_to_generators, tree_normalize,
    Cochain1,
};
use permstab::complex::{fundamental_presentation_with_tree, polygon_weights, presentation_complex, PolygonalComplex};
use permstab::graph::{spanning_tree, Covering, Graph, SpanningTree};
use permstab::instances;
use permstab::io::{
    self, CochainDoc, CochainFile, ComplexFile, Document, GraphFile, ImagesDoc, ImagesFile, LabeledGraphFile, PresentationFile,
    Ref, TreeFile,
};
use permstab::perm::Permutation;
use permstab::stability::{
    cheeger0, cheeger1, cocycle_global_defect, cover_global_defect, h1_vanishing_check, hom_global_defect, profile_csv,
    spectral_gap, stability_profile, CheegerVariant, CheegerWitness, Exactness, GlobalDefectResult, ProfileConfig,
    ProfileSource, SearchConfig, Witness,
};
use permstab::testers::{
    cocycle_local_defect, cover_local_defect, dm_cover_local_defect, hom_local_defect, matrix_tester, run_sampled,
    vector_images, DefectKind, DefectReport, SampleTarget,
};
use permstab::{fmt_ratio, Rational};

use crate::{Command, DefectMode, Format, GuardArgs, ObjectArgs};

pub fn dispatch(cmd: Command) -> Result<u8> {
    match cmd {
        Command::Validate { input } => validate(&input),
        Command::Defect { mode: DefectMode::Local(o) } => defect_local(&o),
        Command::Defect { mode: DefectMode::Global { object, nmax, guards } } => defect_global(&object, nmax, &guards),
        Command::Test { object, trials, seed, linf, workers } => test(&object, trials, seed, linf, workers),
        Command::Convert { to, input, tree, complex, output } => convert(&to, &input, tree.as_deref(), complex.as_deref(), output.as_deref()),
        Command::Cheeger { input, variant, dim, coeff_cap, nmax, guards, format } => {
            cheeger(&input, &variant, dim, coeff_cap, &search_config(nmax, &guards), format)
        }
        Command::Spectral { input, format } => spectral(&input, format),
        Command::H1check { input, ncap, guard, format } => h1check(&input, ncap, guard, format),
        Command::Weights { input, weights, format } => edge_weights(&input, weights.as_deref(), format),
        Command::Profile { input, degree, grid, samples, seed, nmax, guards, format } => {
            profile(&input, degree, &grid, samples, seed, &search_config(nmax, &guards), format)
        }
        Command::Equiv { input, nmax, tree, guards } => equiv(&input, tree.as_deref(), &search_config(nmax, &guards)),
        Command::Generate { family, n, d, k, relator, target, tolerance, seed, output } => {
            generate(&family, n, d, k, &relator, target, tolerance, seed, &output)
        }
    }
}

fn search_config(nmax: Option<usize>, g: &GuardArgs) -> SearchConfig {
    SearchConfig { n_max: nmax, guard: g.search, allow_heuristic: !g.no_heuristic, edit_guard: g.edit }
}

fn emit(format: Format, text: String, value: Value) {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&value).expect("json values serialize")),
        _ => print!("{text}"),
    }
}

fn validate(inputs: &[PathBuf]) -> Result<u8> {
    let mut code = 0;
    for path in inputs {
        match io::read_document(path) {
            Ok(doc) => println!("ok {}: {}", path.display(), doc.kind()),
            Err(e) => {
                println!("invalid {}: {e}", path.display());
                code = 1;
            }
        }
    }
    Ok(code)
}

/// The object behind `--kind` / `--input`, loaded once.
enum Object {
    Hom(ImagesDoc),
    Cocycle(PolygonalComplex, Cochain1),
    Cover(PolygonalComplex, Covering),
    Matrix(io::MatrixDoc, Vec<u8>),
}

fn load_object(o: &ObjectArgs) -> Result<(DefectKind, Object, Option<Vec<Rational>>)> {
    let kind: DefectKind = o.kind.parse()?;
    let object = match kind {
        DefectKind::Hom => Object::Hom(io::load_images(&o.input)?),
        DefectKind::Cocycle => match io::load_cochain(&o.input)? {
            CochainDoc::One { complex, alpha } => Object::Cocycle(complex, alpha),
            CochainDoc::Zero { .. } => bail!("{}: cocycle defects need a 1-cochain", o.input.display()),
        },
        DefectKind::Cover | DefectKind::CoverDm => {
            let complex = o.complex.as_ref().ok_or_else(|| anyhow!("--complex is required for cover kinds"))?;
            Object::Cover(io::load_complex(complex)?, io::load_covering(&o.input)?)
        }
        DefectKind::Matrix => {
            let m = io::load_matrix(&o.input)?;
            let v = m.vector.clone().ok_or_else(|| anyhow!("{}: matrix file has no \"vector\"", o.input.display()))?;
            Object::Matrix(m, v)
        }
    };
    let mut weights = o.weights.as_deref().map(io::load_weights).transpose()?;
    if weights.is_none() {
        if let Object::Matrix(m, _) = &object {
            weights = m.mu.clone();
        }
    }
    Ok((kind, object, weights))
}

fn report_text(r: &DefectReport) -> String {
    let mut s = format!("kind: {}\nlocal defect: {}\ndistribution: {}\n", r.kind, fmt_ratio(&r.value), r.distribution);
    for w in &r.warnings {
        s.push_str(&format!("warning: {w}\n"));
    }
    s
}

fn defect_local(o: &ObjectArgs) -> Result<u8> {
    let (kind, object, w) = load_object(o)?;
    let w = w.as_deref();
    let r = match (&object, kind) {
        (Object::Hom(d), _) => hom_local_defect(&d.presentation, &d.images, w)?,
        (Object::Cocycle(x, a), _) => cocycle_local_defect(x, a, w)?,
        (Object::Cover(x, c), DefectKind::Cover) => cover_local_defect(c, x, w)?,
        (Object::Cover(x, c), _) => dm_cover_local_defect(c, x, w)?,
        (Object::Matrix(m, v), _) => matrix_tester(&m.matrix, v, w)?,
    };
    emit(o.format, report_text(&r), serde_json::to_value(&r)?);
    Ok(0)
}

fn exactness_str(e: Exactness) -> &'static str {
    match e {
        Exactness::ExactWithinCap => "exact-within-cap",
        Exactness::Heuristic => "heuristic",
    }
}

fn witness_json(w: &Witness) -> Value {
    match w {
        Witness::Homomorphism(h) => json!({ "images": h.iter().map(Permutation::images).collect::<Vec<_>>() }),
        Witness::Cocycle(c) => json!({ "n": c.degree(), "values": c.values().iter().map(Permutation::images).collect::<Vec<_>>() }),
        Witness::Cover(c) => serde_json::to_value(LabeledGraphFile::from_covering(c)).expect("file types serialize"),
    }
}

fn witness_text(w: &Witness) -> String {
    match w {
        Witness::Homomorphism(h) => h.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", "),
        Witness::Cocycle(c) => c.values().iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", "),
        Witness::Cover(c) => format!("covering of degree {} on {} vertices", c.degree(), c.graph().vertex_count()),
    }
}

fn global_output(format: Format, r: &GlobalDefectResult) {
    let text = format!(
        "kind: {}\nglobal defect upper bound: {}\nwitness degree: {}\nwitness: {}\nN_max searched: {}\nexactness: {}\nnodes: {}\n",
        r.kind,
        fmt_ratio(&r.upper_bound),
        r.witness_degree,
        witness_text(&r.witness),
        r.n_max_searched,
        exactness_str(r.exactness),
        r.nodes
    );
    let value = json!({
        "kind": r.kind.to_string(),
        "upper_bound": fmt_ratio(&r.upper_bound),
        "witness_degree": r.witness_degree,
        "witness": witness_json(&r.witness),
        "n_max_searched": r.n_max_searched,
        "exactness": exactness_str(r.exactness),
        "nodes": r.nodes,
    });
    emit(format, text, value);
}

fn defect_global(o: &ObjectArgs, nmax: Option<usize>, guards: &GuardArgs) -> Result<u8> {
    let (kind, object, w) = load_object(o)?;
    if w.is_some() {
        bail!("global defects are computed with uniform weights; drop --weights");
    }
    let cfg = search_config(nmax, guards);
    let r = match (&object, kind) {
        (Object::Hom(d), _) => hom_global_defect(&d.presentation, &d.images, &cfg)?,
        (Object::Cocycle(x, a), _) => cocycle_global_defect(x, a, &cfg)?,
        (Object::Cover(x, c), DefectKind::Cover) => cover_global_defect(x, c, &cfg)?,
        (Object::Cover(..), _) => bail!("no global defect is defined for kind cover-dm"),
        (Object::Matrix(m, v), _) => hom_global_defect(&m.matrix.presentation(), &vector_images(v), &cfg)?,
    };
    global_output(o.format, &r);
    Ok(0)
}

fn test(o: &ObjectArgs, trials: u64, seed: u64, linf: bool, workers: usize) -> Result<u8> {
    let (kind, object, w) = load_object(o)?;
    let mu = w.as_deref();
    let target = match &object {
        Object::Hom(d) => SampleTarget::Hom { presentation: &d.presentation, images: &d.images, mu },
        Object::Cocycle(x, a) => SampleTarget::Cocycle { complex: x, alpha: a, mu },
        Object::Cover(x, c) => SampleTarget::Cover { complex: x, covering: c, mu },
        Object::Matrix(m, v) => SampleTarget::Matrix { matrix: &m.matrix, vector: v, mu },
    };
    let r = run_sampled(kind, &target, trials, seed, linf, workers.max(1))?;
    let text = format!(
        "kind: {}\nlinf: {}\ntrials: {}\nrejections: {}\nempirical rate: {}\nexact: {}\nseed: {}\ngenerator: {}\n",
        r.kind,
        r.linf,
        r.trials,
        r.rejections,
        fmt_ratio(&r.empirical_rate),
        fmt_ratio(&r.exact),
        r.seed,
        r.generator
    );
    emit(o.format, text, serde_json::to_value(&r)?);
    Ok(0)
}

fn write_out(output: Option<&Path>, text: &str) -> Result<()> {
    match output {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn tree_for(g: &Graph, tree: Option<&Path>) -> Result<SpanningTree> {
    Ok(match tree {
        Some(t) => io::load_tree(t, g)?,
        None => spanning_tree(g, 1)?,
    })
}

fn convert(to: &str, input: &Path, tree: Option<&Path>, complex: Option<&Path>, output: Option<&Path>) -> Result<u8> {
    let doc = io::read_document(input)?;
    let text = match (to, doc) {
        ("cover", Document::Cochain(CochainDoc::One { complex, alpha })) => {
            io::to_json(&LabeledGraphFile::from_covering(&cochain_to_covering(complex.skeleton(), &alpha)?))
        }
        ("cochain", Document::Covering(c)) => {
            let alpha = covering_to_cochain(&c)?;
            let base = match complex {
                Some(p) => {
                    let x = io::load_complex(p)?;
                    if x.skeleton() != c.base() {
                        bail!("{}: skeleton differs from the covering's base graph", p.display());
                    }
                    ComplexFile::from_complex(&x)
                }
                None => ComplexFile { polygons: Vec::new(), ..complex_file_of_graph(c.base()) },
            };
            io::to_json(&CochainFile::from_cochain1(Ref::Inline(base), &alpha))
        }
        ("cochain", Document::Images(d)) => {
            let x = presentation_complex(&d.presentation)?;
            let alpha = images_to_cochain(&x, &d.images)?;
            io::to_json(&CochainFile::from_cochain1(Ref::Inline(ComplexFile::from_complex(&x)), &alpha))
        }
        ("images", Document::Cochain(CochainDoc::One { complex, alpha })) => {
            let t = tree_for(complex.skeleton(), tree)?;
            let (normalized, _) = tree_normalize(complex.skeleton(), &alpha, &t)?;
            let (p, map) = fundamental_presentation_with_tree(&complex, &t)?;
            let images = restrict_to_generators(&normalized, &map);
            let f = ImagesFile::from_images(Ref::Inline(PresentationFile::from_presentation(&p)), alpha.degree(), &images);
            io::to_json(&f)
        }
        ("complex", Document::Presentation(p)) => io::to_json(&ComplexFile::from_complex(&presentation_complex(&p)?)),
        ("presentation", Document::Complex(x)) => {
            let t = tree_for(x.skeleton(), tree)?;
            let (p, _) = fundamental_presentation_with_tree(&x, &t)?;
            io::to_json(&PresentationFile::from_presentation(&p))
        }
        (to, doc) => bail!("cannot convert a {} file to {to:?}", doc.kind()),
    };
    write_out(output, &text)?;
    Ok(0)
}

fn complex_file_of_graph(g: &Graph) -> ComplexFile {
    let f = GraphFile::from_graph(g);
    ComplexFile { vertices: f.vertices, edges: f.edges, polygons: Vec::new() }
}

fn cheeger(input: &Path, variant: &str, dim: u8, cap: usize, cfg: &SearchConfig, format: Format) -> Result<u8> {
    let variant: CheegerVariant = variant.parse()?;
    let r = match dim {
        0 => cheeger0(&io::load_graph(input)?, variant, cap, cfg.guard)?,
        1 => cheeger1(&io::load_complex(input)?, variant, cap, cfg)?,
        d => bail!("--dim must be 0 or 1, got {d}"),
    };
    let value = r.value.as_ref().map_or_else(|| "inf".to_string(), fmt_ratio);
    let witness = match &r.witness {
        None => Value::Null,
        Some(CheegerWitness::Subset(a)) => json!({ "subset": a }),
        Some(CheegerWitness::Cochain0(b)) => json!({ "n": b.degree(), "values": b.values().iter().map(Permutation::images).collect::<Vec<_>>() }),
        Some(CheegerWitness::Cochain1(a)) => json!({ "n": a.degree(), "values": a.values().iter().map(Permutation::images).collect::<Vec<_>>() }),
    };
    let variant_name = serde_json::to_value(r.variant)?;
    let text = format!(
        "variant: {}\ndimension: {}\ncoefficient cap: {}\nvalue: {value}\nexactness: {}\n",
        variant_name.as_str().unwrap_or_default(),
        r.dimension,
        r.coeff_cap,
        exactness_str(r.exactness)
    );
    let json = json!({
        "variant": variant_name,
        "dimension": r.dimension,
        "coeff_cap": r.coeff_cap,
        "value": value,
        "witness": witness,
        "exactness": exactness_str(r.exactness),
    });
    emit(format, text, json);
    Ok(0)
}

fn spectral(input: &Path, format: Format) -> Result<u8> {
    let r = spectral_gap(&io::load_graph(input)?)?;
    let text = format!("k: {}\nlambda2: {:.12}\ngamma: {:.12}\n", r.k, r.lambda2, r.gamma);
    emit(format, text, serde_json::to_value(&r)?);
    Ok(0)
}

fn h1check(input: &Path, ncap: usize, guard: u64, format: Format) -> Result<u8> {
    let levels = h1_vanishing_check(&io::load_complex(input)?, ncap, guard)?;
    let mut text = String::new();
    for l in &levels {
        let counts = match (l.cocycles, l.coboundaries) {
            (Some(z), Some(b)) => format!(" (|Z1| = {z}, |B1| = {b})"),
            _ => String::new(),
        };
        let status = if l.vanishes { "vanishes" } else { "fails" };
        text.push_str(&format!("N = {}: {status}{counts}\n", l.n));
        if let Some(h) = &l.nontrivial {
            text.push_str(&format!("  nontrivial: {}\n", h.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", ")));
        }
    }
    emit(format, text, serde_json::to_value(&levels)?);
    Ok(0)
}

fn edge_weights(input: &Path, weights: Option<&Path>, format: Format) -> Result<u8> {
    let x = io::load_complex(input)?;
    let mu2 = weights.map(io::load_weights).transpose()?;
    let w = polygon_weights(&x, mu2.as_deref())?;
    let strs = |v: &[Rational]| v.iter().map(fmt_ratio).collect::<Vec<_>>();
    let text = format!(
        "mu1: [{}]\nw: [{}]\nexpected length: {}\n",
        strs(&w.mu1).join(", "),
        strs(&w.w).join(", "),
        fmt_ratio(&w.expected_length)
    );
    let value = json!({
        "mu2": strs(&w.mu2),
        "mu1": strs(&w.mu1),
        "w": strs(&w.w),
        "expected_length": fmt_ratio(&w.expected_length),
    });
    emit(format, text, value);
    Ok(0)
}

fn profile(input: &Path, degree: usize, grid: &str, samples: usize, seed: u64, cfg: &SearchConfig, format: Format) -> Result<u8> {
    let grid = grid
        .split(',')
        .map(|s| s.trim().parse::<f64>().with_context(|| format!("bad grid level {s:?}")))
        .collect::<Result<Vec<_>>>()?;
    let pc = ProfileConfig { degree, grid, samples, seed, search: cfg.clone() };
    let p = match io::read_document(input)? {
        Document::Presentation(p) => stability_profile(ProfileSource::Presentation(&p), &pc)?,
        Document::Complex(x) => stability_profile(ProfileSource::Complex(&x), &pc)?,
        d => bail!("profile needs a presentation or complex file, got a {}", d.kind()),
    };
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&p)?),
        _ => print!("{}", profile_csv(&p)),
    }
    Ok(0)
}

struct Checks {
    failed: bool,
}

impl Checks {
    fn check(&mut self, name: &str, ok: bool, detail: String) {
        println!("{} {name}: {detail}", if ok { "PASS" } else { "FAIL" });
        self.failed |= !ok;
    }
}

fn equiv(input: &Path, tree: Option<&Path>, cfg: &SearchConfig) -> Result<u8> {
    let mut c = Checks { failed: false };
    let (x, alpha) = match io::read_document(input)? {
        Document::Images(d) => {
            let x = presentation_complex(&d.presentation)?;
            let alpha = images_to_cochain(&x, &d.images)?;
            let h = hom_local_defect(&d.presentation, &d.images, None)?.value;
            let k = cocycle_local_defect(&x, &alpha, None)?.value;
            c.check("presentation local", h == k, format!("def_hom = {}, def_cocyc = {}", fmt_ratio(&h), fmt_ratio(&k)));
            let hg = hom_global_defect(&d.presentation, &d.images, cfg)?;
            let kg = cocycle_global_defect(&x, &alpha, cfg)?;
            c.check(
                "presentation global",
                hg.upper_bound == kg.upper_bound,
                format!("Def_hom = {}, Def_cocyc = {}", fmt_ratio(&hg.upper_bound), fmt_ratio(&kg.upper_bound)),
            );
            (x, alpha)
        }
        Document::Cochain(CochainDoc::One { complex, alpha }) => (complex, alpha),
        d => bail!("equiv needs an images file or a 1-cochain file, got a {}", d.kind()),
    };
    // cochains and coverings
    let cover = cochain_to_covering(x.skeleton(), &alpha)?;
    let back = covering_to_cochain(&cover)?;
    c.check("cover round trip", back == alpha, "covering_to_cochain(cochain_to_covering(alpha)) = alpha".into());
    let kl = cocycle_local_defect(&x, &alpha, None)?.value;
    let cl = cover_local_defect(&cover, &x, None)?.value;
    c.check("cover local", kl == cl, format!("def_cocyc = {}, def_cover = {}", fmt_ratio(&kl), fmt_ratio(&cl)));
    let kg = cocycle_global_defect(&x, &alpha, cfg)?;
    let cg = cover_global_defect(&x, &cover, cfg)?;
    c.check(
        "cover global",
        kg.upper_bound == cg.upper_bound,
        format!("Def_cocyc = {}, Def_cover = {}", fmt_ratio(&kg.upper_bound), fmt_ratio(&cg.upper_bound)),
    );
    // spanning-tree presentation
    let g = x.skeleton();
    let t = tree_for(g, tree)?;
    let (normalized, _) = tree_normalize(g, &alpha, &t)?;
    let (p, map) = fundamental_presentation_with_tree(&x, &t)?;
    let images = restrict_to_generators(&normalized, &map);
    let on_tree = t.edges().iter().all(|&k| normalized.values()[k - 1].is_identity());
    c.check("tree normalization", on_tree, "normalized cochain is the identity on tree edges".into());
    let rebuilt = extend_from_generators(&images, &map, alpha.degree())?;
    c.check("tree extension", rebuilt == normalized, "extending the restriction recovers the normalized cochain".into());
    if p.generator_count() > 0 {
        let hd = hom_global_defect(&p, &images, cfg)?;
        let kd = cocycle_global_defect(&x, &normalized, cfg)?;
        c.check(
            "tree global",
            hd.upper_bound >= kd.upper_bound && kd.upper_bound == kg.upper_bound,
            format!(
                "Def_hom(restriction) = {} >= Def_cocyc = {} (before normalization {})",
                fmt_ratio(&hd.upper_bound),
                fmt_ratio(&kd.upper_bound),
                fmt_ratio(&kg.upper_bound)
            ),
        );
        if p.relators().len() == x.polygon_count() && !p.relators().is_empty() {
            let hl = hom_local_defect(&p, &images, None)?.value;
            let kl2 = cocycle_local_defect(&x, &normalized, None)?.value;
            c.check("tree local", hl == kl2, format!("def_hom = {}, def_cocyc = {}", fmt_ratio(&hl), fmt_ratio(&kl2)));
        }
    }
    if kg.upper_bound.is_zero() {
        println!("note: the instance is already a cocycle");
    }
    Ok(u8::from(c.failed))
}

fn write_file(dir: &Path, name: &str, text: &str, written: &mut Vec<PathBuf>) -> Result<()> {
    let p = dir.join(name);
    fs::write(&p, text).with_context(|| format!("writing {}", p.display()))?;
    written.push(p);
    Ok(())
}

fn parse_relator(s: &str) -> Result<Vec<i64>> {
    s.split(',').map(|t| t.trim().parse::<i64>().with_context(|| format!("bad relator letter {t:?}"))).collect()
}

#[allow(clippy::too_many_arguments)]
fn generate(
    family: &str,
    n: Option<usize>,
    d: Option<usize>,
    k: usize,
    relators: &[String],
    target: f64,
    tolerance: f64,
    seed: u64,
    out: &Path,
) -> Result<u8> {
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    let mut written = Vec::new();
    let need = |v: Option<usize>, flag: &str| v.ok_or_else(|| anyhow!("family {family} needs --{flag}"));
    match family {
        "bouquet" => {
            let words = relators.iter().map(|r| parse_relator(r)).collect::<Result<Vec<_>>>()?;
            let p = PresentationFile { generators: k, relators: words }.build()?;
            let x = if p.relators().is_empty() { instances::bouquet(k) } else { presentation_complex(&p)? };
            write_file(out, "complex.json", &io::to_json(&ComplexFile::from_complex(&x)), &mut written)?;
            write_file(out, "presentation.json", &io::to_json(&PresentationFile::from_presentation(&p)), &mut written)?;
        }
        "cycle" => {
            let g = instances::cycle_graph(need(n, "n")?);
            write_file(out, "graph.json", &io::to_json(&GraphFile::from_graph(&g)), &mut written)?;
        }
        "complete-graph" => {
            let g = instances::complete_graph(need(n.or(d), "n")?);
            write_file(out, "graph.json", &io::to_json(&GraphFile::from_graph(&g)), &mut written)?;
        }
        "petersen" => {
            write_file(out, "graph.json", &io::to_json(&GraphFile::from_graph(&instances::petersen())), &mut written)?;
        }
        "complete-complex" => {
            let x = instances::complete_complex(need(d, "d")?);
            write_file(out, "complex.json", &io::to_json(&ComplexFile::from_complex(&x)), &mut written)?;
        }
        "triangle" => {
            let x = instances::triangle_complex();
            write_file(out, "complex.json", &io::to_json(&ComplexFile::from_complex(&x)), &mut written)?;
        }
        "torus" => {
            let p = instances::torus_presentation();
            write_file(out, "presentation.json", &io::to_json(&PresentationFile::from_presentation(&p)), &mut written)?;
            let x = instances::torus_complex();
            write_file(out, "complex.json", &io::to_json(&ComplexFile::from_complex(&x)), &mut written)?;
        }
        "cut" => {
            let r = instances::cut_family(need(d, "d")?)?;
            write_file(out, "complex.json", &io::to_json(&ComplexFile::from_complex(&r.complex)), &mut written)?;
            write_file(out, "tree.json", &io::to_json(&TreeFile::from_tree(&r.tree)), &mut written)?;
            let f = CochainFile::from_cochain1(Ref::Path("complex.json".into()), &r.alpha);
            write_file(out, "cochain.json", &io::to_json(&f), &mut written)?;
        }
        "random" => {
            let x = instances::complete_complex(d.unwrap_or(4));
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (alpha, defect) = instances::random_instance(&x, n.unwrap_or(2), target, tolerance, 10_000, &mut rng)?;
            write_file(out, "complex.json", &io::to_json(&ComplexFile::from_complex(&x)), &mut written)?;
            let f = CochainFile::from_cochain1(Ref::Path("complex.json".into()), &alpha);
            write_file(out, "cochain.json", &io::to_json(&f), &mut written)?;
            println!("local defect: {}", fmt_ratio(&defect));
        }
        "blr" => {
            let m = need(n, "n")? as u32;
            let a = permstab::testers::blr_matrix(m);
            let file = |v: Vec<u8>| io::MatrixFile { rows: a.rows().to_vec(), vector: Some(v), mu: None };
            write_file(out, "linear.json", &io::to_json(&file(permstab::testers::linear_table(m, 1))), &mut written)?;
            write_file(out, "constant-one.json", &io::to_json(&file(vec![1; 1 << m])), &mut written)?;
        }
        other => bail!("unknown family {other:?}"),
    }
    for p in written {
        println!("wrote {}", p.display());
    }
    Ok(0)
}

