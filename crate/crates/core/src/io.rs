//! JSON file formats.
//!
//! Syntax errors carry serde's line and column; structural problems are
//! reported by the validating constructors of the owning modules.

use std::collections::BTreeMap;
use std::path::{Path as FsPath, PathBuf};

use serde::{Deserialize, Serialize};

use crate::cochain::{Cochain0, Cochain1};
use crate::complex::{PolygonalComplex, Presentation};
use crate::graph::{check_covering, validate_graph, CombinatorialMap, Covering, EdgeRecord, Graph, LabeledGraph, Path, SpanningTree};
use crate::perm::{Permutation, SignedWord};
use crate::testers::BinaryMatrix;
use crate::{fmt_ratio, parse_ratio, Error, Rational, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub vertices: usize,
    pub edges: Vec<EdgeRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LabeledGraphFile {
    pub vertices: usize,
    pub edges: Vec<EdgeRecord>,
    pub base: GraphFile,
    pub vertex_map: Vec<usize>,
    pub edge_map: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexFile {
    pub vertices: usize,
    pub edges: Vec<EdgeRecord>,
    #[serde(default)]
    pub polygons: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationFile {
    pub generators: usize,
    pub relators: Vec<Vec<i64>>,
}

/// A path relative to the referring file, or the object itself.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Ref<T> {
    Path(String),
    Inline(T),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CochainFile {
    pub complex: Ref<ComplexFile>,
    pub n: usize,
    /// 1 (edges, the default) or 0 (vertices).
    #[serde(default = "one", skip_serializing_if = "is_one")]
    pub dim: u8,
    pub values: BTreeMap<usize, Vec<usize>>,
}

fn one() -> u8 {
    1
}

fn is_one(d: &u8) -> bool {
    *d == 1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ImagesFile {
    pub presentation: Ref<PresentationFile>,
    pub n: usize,
    pub images: Vec<Vec<usize>>,
}

/// A rational as `"p/q"` or a bare integer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RatField {
    Text(String),
    Int(i64),
}

impl RatField {
    pub fn value(&self) -> Result<Rational> {
        match self {
            RatField::Text(s) => parse_ratio(s),
            RatField::Int(i) => Ok(crate::ratio(*i, 1)),
        }
    }

    pub fn from_rational(r: &Rational) -> Self {
        RatField::Text(fmt_ratio(r))
    }
}

fn rationals(v: &[RatField]) -> Result<Vec<Rational>> {
    v.iter().map(RatField::value).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub rows: Vec<Vec<u8>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vector: Option<Vec<u8>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<Vec<RatField>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightsFile {
    pub mu2: Vec<RatField>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TreeFile {
    pub root: usize,
    pub edges: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CochainDoc {
    Zero { complex: PolygonalComplex, beta: Cochain0 },
    One { complex: PolygonalComplex, alpha: Cochain1 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImagesDoc {
    pub presentation: Presentation,
    pub images: Vec<Permutation>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixDoc {
    pub matrix: BinaryMatrix,
    pub vector: Option<Vec<u8>>,
    pub mu: Option<Vec<Rational>>,
}

/// Any file the CLI accepts, recognized by its keys.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Document {
    Graph(Graph),
    Covering(Box<Covering>),
    Complex(PolygonalComplex),
    Presentation(Presentation),
    Cochain(CochainDoc),
    Images(ImagesDoc),
    Matrix(MatrixDoc),
    Weights(Vec<Rational>),
    Tree(TreeFile),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Graph(_) => "graph",
            Document::Covering(_) => "covering",
            Document::Complex(_) => "complex",
            Document::Presentation(_) => "presentation",
            Document::Cochain(CochainDoc::Zero { .. }) => "0-cochain",
            Document::Cochain(CochainDoc::One { .. }) => "1-cochain",
            Document::Images(_) => "images",
            Document::Matrix(_) => "matrix",
            Document::Weights(_) => "weights",
            Document::Tree(_) => "tree",
        }
    }
}

fn parse<T: serde::de::DeserializeOwned>(text: &str, origin: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("{origin}: {e}")))
}

fn read(path: &FsPath) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn base_dir(path: &FsPath) -> PathBuf {
    path.parent().map(FsPath::to_path_buf).unwrap_or_default()
}

impl GraphFile {
    pub fn build(&self) -> Result<Graph> {
        validate_graph(self.vertices, &self.edges)
    }

    pub fn from_graph(g: &Graph) -> Self {
        GraphFile { vertices: g.vertex_count(), edges: g.records() }
    }
}

impl ComplexFile {
    pub fn build(&self) -> Result<PolygonalComplex> {
        let g = validate_graph(self.vertices, &self.edges)?;
        let polys: Vec<Path> = self.polygons.iter().map(|p| Path::new(p.clone())).collect();
        PolygonalComplex::new(g, &polys)
    }

    pub fn from_complex(x: &PolygonalComplex) -> Self {
        let g = x.skeleton();
        ComplexFile {
            vertices: g.vertex_count(),
            edges: g.records(),
            polygons: x.representatives().iter().map(|p| p.edges().to_vec()).collect(),
        }
    }
}

impl PresentationFile {
    pub fn build(&self) -> Result<Presentation> {
        let relators = self
            .relators
            .iter()
            .enumerate()
            .map(|(i, r)| {
                SignedWord::new(r.clone()).map_err(|e| Error::InvalidPresentation(format!("relator {}: {e}", i + 1)))
            })
            .collect::<Result<Vec<_>>>()?;
        Presentation::new(self.generators, relators)
    }

    pub fn from_presentation(p: &Presentation) -> Self {
        PresentationFile {
            generators: p.generator_count(),
            relators: p.relators().iter().map(|r| r.letters().to_vec()).collect(),
        }
    }
}

impl LabeledGraphFile {
    pub fn build(&self) -> Result<Covering> {
        let graph = validate_graph(self.vertices, &self.edges)?;
        let base = self.base.build()?;
        let labeling = CombinatorialMap { vertex_map: self.vertex_map.clone(), edge_map: self.edge_map.clone() };
        let labeled = LabeledGraph::new(graph, base, labeling)?;
        let (top, bottom) = (labeled.graph().vertex_count(), labeled.base().vertex_count());
        if bottom == 0 || top % bottom != 0 {
            return Err(Error::NotCovering(format!("{top} vertices cannot cover {bottom} with equal fibers")));
        }
        check_covering(labeled, top / bottom)
    }

    pub fn from_covering(c: &Covering) -> Self {
        let l = c.labeled();
        LabeledGraphFile {
            vertices: l.graph().vertex_count(),
            edges: l.graph().records(),
            base: GraphFile::from_graph(l.base()),
            vertex_map: l.labeling().vertex_map.clone(),
            edge_map: l.labeling().edge_map.clone(),
        }
    }
}

fn resolve_complex(r: &Ref<ComplexFile>, dir: &FsPath) -> Result<PolygonalComplex> {
    match r {
        Ref::Inline(c) => c.build(),
        Ref::Path(p) => load_complex(&dir.join(p)),
    }
}

fn resolve_presentation(r: &Ref<PresentationFile>, dir: &FsPath) -> Result<Presentation> {
    match r {
        Ref::Inline(p) => p.build(),
        Ref::Path(p) => load_presentation(&dir.join(p)),
    }
}

fn perms(n: usize, what: &str, rows: impl IntoIterator<Item = (usize, Vec<usize>)>) -> Result<Vec<Permutation>> {
    rows.into_iter()
        .map(|(key, imgs)| {
            let p = Permutation::from_images(&imgs).map_err(|e| Error::InvalidCochain(format!("{what} {key}: {e}")))?;
            if p.degree() != n {
                return Err(Error::InvalidCochain(format!("{what} {key}: degree {} but n = {n}", p.degree())));
            }
            Ok(p)
        })
        .collect()
}

impl CochainFile {
    pub fn build(&self, dir: &FsPath) -> Result<CochainDoc> {
        let complex = resolve_complex(&self.complex, dir)?;
        let (size, what) = match self.dim {
            0 => (complex.skeleton().vertex_count(), "vertex"),
            1 => (complex.skeleton().edge_count(), "edge"),
            d => return Err(Error::InvalidCochain(format!("dim must be 0 or 1, got {d}"))),
        };
        if let Some(k) = self.values.keys().find(|&&k| k == 0 || k > size) {
            return Err(Error::InvalidCochain(format!("values: no {what} {k}")));
        }
        if let Some(k) = (1..=size).find(|k| !self.values.contains_key(k)) {
            return Err(Error::InvalidCochain(format!("values: missing {what} {k}")));
        }
        let values = perms(self.n, what, self.values.iter().map(|(&k, v)| (k, v.clone())))?;
        Ok(match self.dim {
            0 => CochainDoc::Zero { beta: Cochain0::new(self.n, values)?, complex },
            _ => CochainDoc::One { alpha: Cochain1::new(self.n, values)?, complex },
        })
    }

    fn values_of(ps: &[Permutation]) -> BTreeMap<usize, Vec<usize>> {
        ps.iter().enumerate().map(|(i, p)| (i + 1, p.images())).collect()
    }

    pub fn from_cochain1(complex: Ref<ComplexFile>, a: &Cochain1) -> Self {
        CochainFile { complex, n: a.degree(), dim: 1, values: Self::values_of(a.values()) }
    }

    pub fn from_cochain0(complex: Ref<ComplexFile>, b: &Cochain0) -> Self {
        CochainFile { complex, n: b.degree(), dim: 0, values: Self::values_of(b.values()) }
    }
}

impl ImagesFile {
    pub fn build(&self, dir: &FsPath) -> Result<ImagesDoc> {
        let presentation = resolve_presentation(&self.presentation, dir)?;
        if self.images.len() != presentation.generator_count() {
            return Err(Error::InvalidInput(format!(
                "images: {} given for {} generators",
                self.images.len(),
                presentation.generator_count()
            )));
        }
        let images = perms(self.n, "generator", self.images.iter().cloned().enumerate().map(|(i, v)| (i + 1, v)))?;
        Ok(ImagesDoc { presentation, images })
    }

    pub fn from_images(presentation: Ref<PresentationFile>, n: usize, images: &[Permutation]) -> Self {
        ImagesFile { presentation, n, images: images.iter().map(Permutation::images).collect() }
    }
}

impl MatrixFile {
    pub fn build(&self) -> Result<MatrixDoc> {
        let matrix = BinaryMatrix::new(self.rows.clone())?;
        if let Some(v) = &self.vector {
            if v.len() != matrix.cols() || v.iter().any(|&b| b > 1) {
                return Err(Error::InvalidInput(format!("vector must have {} binary entries", matrix.cols())));
            }
        }
        let mu = self.mu.as_deref().map(rationals).transpose()?;
        if let Some(m) = &mu {
            crate::complex::check_distribution(m, matrix.rows().len(), "mu")?;
        }
        Ok(MatrixDoc { matrix, vector: self.vector.clone(), mu })
    }
}

impl TreeFile {
    pub fn build(&self, g: &Graph) -> Result<SpanningTree> {
        SpanningTree::from_edges(g, self.root, self.edges.iter().copied())
    }

    pub fn from_tree(t: &SpanningTree) -> Self {
        TreeFile { root: t.root(), edges: t.edges().iter().copied().collect() }
    }
}

/// Parse any supported document; relative references resolve against `dir`.
pub fn parse_document(text: &str, origin: &str, dir: &FsPath) -> Result<Document> {
    let value: serde_json::Value = parse(text, origin)?;
    let obj = value.as_object().ok_or_else(|| Error::Parse(format!("{origin}: expected a JSON object")))?;
    let has = |k: &str| obj.contains_key(k);
    Ok(if has("generators") {
        Document::Presentation(parse::<PresentationFile>(text, origin)?.build()?)
    } else if has("presentation") {
        Document::Images(parse::<ImagesFile>(text, origin)?.build(dir)?)
    } else if has("complex") {
        Document::Cochain(parse::<CochainFile>(text, origin)?.build(dir)?)
    } else if has("rows") {
        Document::Matrix(parse::<MatrixFile>(text, origin)?.build()?)
    } else if has("mu2") {
        Document::Weights(rationals(&parse::<WeightsFile>(text, origin)?.mu2)?)
    } else if has("root") {
        Document::Tree(parse(text, origin)?)
    } else if has("base") {
        Document::Covering(Box::new(parse::<LabeledGraphFile>(text, origin)?.build()?))
    } else if has("polygons") {
        Document::Complex(parse::<ComplexFile>(text, origin)?.build()?)
    } else if has("vertices") {
        Document::Graph(parse::<GraphFile>(text, origin)?.build()?)
    } else {
        return Err(Error::Parse(format!("{origin}: unrecognized document (no known top-level key)")));
    })
}

pub fn read_document(path: &FsPath) -> Result<Document> {
    parse_document(&read(path)?, &path.display().to_string(), &base_dir(path))
}

fn wrong(path: &FsPath, want: &str, got: &Document) -> Error {
    Error::InvalidInput(format!("{}: expected a {want} file, found a {}", path.display(), got.kind()))
}

pub fn load_graph(path: &FsPath) -> Result<Graph> {
    match read_document(path)? {
        Document::Graph(g) => Ok(g),
        Document::Complex(x) => Ok(x.skeleton().clone()),
        d => Err(wrong(path, "graph", &d)),
    }
}

/// A complex file, or a graph file read as a complex without polygons.
pub fn load_complex(path: &FsPath) -> Result<PolygonalComplex> {
    match read_document(path)? {
        Document::Complex(x) => Ok(x),
        Document::Graph(g) => PolygonalComplex::new(g, &[]),
        d => Err(wrong(path, "complex", &d)),
    }
}

pub fn load_presentation(path: &FsPath) -> Result<Presentation> {
    match read_document(path)? {
        Document::Presentation(p) => Ok(p),
        d => Err(wrong(path, "presentation", &d)),
    }
}

pub fn load_covering(path: &FsPath) -> Result<Covering> {
    match read_document(path)? {
        Document::Covering(c) => Ok(*c),
        d => Err(wrong(path, "covering", &d)),
    }
}

pub fn load_cochain(path: &FsPath) -> Result<CochainDoc> {
    match read_document(path)? {
        Document::Cochain(c) => Ok(c),
        d => Err(wrong(path, "cochain", &d)),
    }
}

pub fn load_images(path: &FsPath) -> Result<ImagesDoc> {
    match read_document(path)? {
        Document::Images(i) => Ok(i),
        d => Err(wrong(path, "images", &d)),
    }
}

pub fn load_matrix(path: &FsPath) -> Result<MatrixDoc> {
    match read_document(path)? {
        Document::Matrix(m) => Ok(m),
        d => Err(wrong(path, "matrix", &d)),
    }
}

pub fn load_weights(path: &FsPath) -> Result<Vec<Rational>> {
    match read_document(path)? {
        Document::Weights(w) => Ok(w),
        d => Err(wrong(path, "weights", &d)),
    }
}

pub fn load_tree(path: &FsPath, g: &Graph) -> Result<SpanningTree> {
    match read_document(path)? {
        Document::Tree(t) => t.build(g),
        d => Err(wrong(path, "tree", &d)),
    }
}

pub fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("file types serialize");
    s.push('\n');
    s
}
