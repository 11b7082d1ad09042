//! JSON files for quantaloids, categories and finite sites.
//!
//! Output is canonical: maps are key-ordered and elements are written as
//! indices, so equal structures serialize to identical bytes. On input an
//! element may be given either by index or by label.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::completion::{presheaf_name, CompletionResult};
use crate::constructors::{ConstructorError, FiniteCategory, Morphism, Topology};
use crate::lattice::{FiniteLattice, LatticeError};
use crate::qcat::{QCatError, QCategory};
use crate::quantaloid::{HomSpec, Quantaloid, QuantaloidError};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{0}")]
    Invalid(String),
    #[error("lattice {hom}: {source}")]
    Lattice { hom: String, source: LatticeError },
    #[error(transparent)]
    Quantaloid(#[from] QuantaloidError),
    #[error(transparent)]
    Category(#[from] QCatError),
    #[error(transparent)]
    Constructor(#[from] ConstructorError),
}

fn invalid<T>(msg: impl Into<String>) -> Result<T, FormatError> {
    Err(FormatError::Invalid(msg.into()))
}

/// An element or morphism given by position or by name.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Ref {
    Index(usize),
    Name(String),
}

impl Ref {
    fn resolve(&self, names: &[String], what: &str) -> Result<usize, FormatError> {
        match self {
            Ref::Index(i) if *i < names.len() => Ok(*i),
            Ref::Index(i) => invalid(format!("{what}: index {i} out of range")),
            Ref::Name(s) => match names.iter().position(|n| n == s) {
                Some(i) => Ok(i),
                None => invalid(format!("{what}: unknown name {s:?}")),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomFile {
    pub elements: Vec<String>,
    pub leq: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuantaloidFile {
    pub objects: Vec<String>,
    pub homs: BTreeMap<String, HomFile>,
    pub compose: BTreeMap<String, Vec<Vec<Ref>>>,
    pub identity: BTreeMap<String, Ref>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub involution: Option<BTreeMap<String, Vec<Ref>>>,
}

fn key2(q: &[String], x: usize, y: usize) -> String {
    format!("{}->{}", q[x], q[y])
}

fn key3(q: &[String], x: usize, y: usize, z: usize) -> String {
    format!("{}->{}->{}", q[x], q[y], q[z])
}

pub fn quantaloid_to_file(q: &Quantaloid) -> QuantaloidFile {
    let names = q.object_names();
    let n = q.n_objects();
    let mut homs = BTreeMap::new();
    let mut compose = BTreeMap::new();
    let mut identity = BTreeMap::new();
    for x in 0..n {
        identity.insert(names[x].clone(), Ref::Index(q.id(x)));
        for y in 0..n {
            homs.insert(key2(names, x, y), HomFile { elements: q.labels(x, y).to_vec(), leq: q.hom(x, y).covers() });
            for z in 0..n {
                let fs = q.hom(x, y).size();
                let rows = q
                    .composition_table(x, y, z)
                    .chunks(fs.max(1))
                    .map(|row| row.iter().map(|&e| Ref::Index(e)).collect())
                    .collect();
                compose.insert(key3(names, x, y, z), rows);
            }
        }
    }
    let involution = q.involution_maps().map(|maps| {
        let mut out = BTreeMap::new();
        for x in 0..n {
            for y in 0..n {
                out.insert(key2(names, x, y), maps[x * n + y].iter().map(|&e| Ref::Index(e)).collect());
            }
        }
        out
    });
    QuantaloidFile { objects: names.to_vec(), homs, compose, identity, involution }
}

pub fn quantaloid_from_file(file: &QuantaloidFile) -> Result<Quantaloid, FormatError> {
    let names = &file.objects;
    let n = names.len();
    if let Some(bad) = names.iter().find(|s| s.contains("->")) {
        return invalid(format!("object name {bad:?} contains \"->\""));
    }
    for (i, a) in names.iter().enumerate() {
        if names[..i].contains(a) {
            return invalid(format!("duplicate object {a:?}"));
        }
    }
    let mut homs = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            let key = key2(names, x, y);
            let Some(h) = file.homs.get(&key) else { return invalid(format!("missing hom {key}")) };
            let lattice = FiniteLattice::from_order(h.elements.len(), &h.leq)
                .map_err(|source| FormatError::Lattice { hom: key.clone(), source })?;
            homs.push(HomSpec::new(lattice, h.elements.clone()));
        }
    }
    let labels = |x: usize, y: usize| &homs[x * n + y].labels;
    let mut compose = Vec::with_capacity(n * n * n);
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let key = key3(names, x, y, z);
                let Some(rows) = file.compose.get(&key) else {
                    return invalid(format!("missing composition table {key}"));
                };
                let (gs, fs) = (labels(y, z).len(), labels(x, y).len());
                if rows.len() != gs || rows.iter().any(|r| r.len() != fs) {
                    return invalid(format!("composition table {key} must be {gs} rows of {fs}"));
                }
                let mut table = Vec::with_capacity(gs * fs);
                for row in rows {
                    for r in row {
                        table.push(r.resolve(labels(x, z), &key)?);
                    }
                }
                compose.push(table);
            }
        }
    }
    let mut identity = Vec::with_capacity(n);
    for (x, name) in names.iter().enumerate() {
        let Some(r) = file.identity.get(name) else { return invalid(format!("missing identity of {name}")) };
        identity.push(r.resolve(labels(x, x), &format!("identity of {name}"))?);
    }
    let involution = match &file.involution {
        None => None,
        Some(maps) => {
            let mut out = Vec::with_capacity(n * n);
            for x in 0..n {
                for y in 0..n {
                    let key = key2(names, x, y);
                    let Some(map) = maps.get(&key) else { return invalid(format!("missing involution on {key}")) };
                    if map.len() != labels(x, y).len() {
                        return invalid(format!("involution on {key} has the wrong length"));
                    }
                    out.push(map.iter().map(|r| r.resolve(labels(y, x), &key)).collect::<Result<Vec<_>, _>>()?);
                }
            }
            Some(out)
        }
    };
    let mut q = Quantaloid::from_parts(names.clone(), homs, compose, identity, None)?;
    if involution.is_some() {
        q = q.with_involution(involution)?;
    }
    Ok(q)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObjectFile {
    pub name: String,
    #[serde(rename = "type")]
    pub ty: Ref,
}

/// The presheaf an object of a completion came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProvenanceFile {
    pub object: String,
    #[serde(rename = "type")]
    pub ty: String,
    pub column: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum QuantaloidSource {
    Path(String),
    Inline(Box<QuantaloidFile>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CategoryFile {
    pub quantaloid: QuantaloidSource,
    pub objects: Vec<ObjectFile>,
    /// `hom[i][j]` is `A(i, j)`.
    pub hom: Vec<Vec<Ref>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Vec<ProvenanceFile>>,
}

pub fn category_to_file(a: &QCategory) -> CategoryFile {
    let q = a.base();
    let objects = (0..a.len())
        .map(|x| ObjectFile { name: a.name(x).to_string(), ty: Ref::Name(q.object_name(a.type_of(x)).to_string()) })
        .collect();
    let hom = (0..a.len()).map(|y| (0..a.len()).map(|x| Ref::Index(a.hom(y, x))).collect()).collect();
    CategoryFile {
        quantaloid: QuantaloidSource::Inline(Box::new(quantaloid_to_file(q))),
        objects,
        hom,
        provenance: None,
    }
}

/// A completion with one provenance record per object.
pub fn completion_to_file(c: &CompletionResult) -> CategoryFile {
    let mut file = category_to_file(&c.completion);
    let base = c.completion.base();
    let provenance = c
        .presheaves
        .iter()
        .map(|p| {
            let t = p.presheaf_type().expect("a presheaf");
            let a = p.dst();
            ProvenanceFile {
                object: presheaf_name(p),
                ty: base.object_name(t).to_string(),
                column: (0..a.len()).map(|i| base.label(t, a.type_of(i), p.entry(i, 0)).to_string()).collect(),
            }
        })
        .collect();
    file.provenance = Some(provenance);
    file
}

/// Loads a category; a quantaloid given by path is resolved against
/// `base_dir`.
pub fn category_from_file(file: &CategoryFile, base_dir: &Path) -> Result<QCategory, FormatError> {
    let qfile = match &file.quantaloid {
        QuantaloidSource::Inline(q) => (**q).clone(),
        QuantaloidSource::Path(p) => {
            let path = base_dir.join(p);
            let text = std::fs::read_to_string(&path)
                .map_err(|source| FormatError::Io { path: path.display().to_string(), source })?;
            serde_json::from_str(&text)?
        }
    };
    let q = Arc::new(quantaloid_from_file(&qfile)?);
    category_over(q, file)
}

/// Loads the objects and homs of a category file over an already loaded
/// base.
pub fn category_over(q: Arc<Quantaloid>, file: &CategoryFile) -> Result<QCategory, FormatError> {
    let n = file.objects.len();
    let types = file
        .objects
        .iter()
        .map(|o| o.ty.resolve(q.object_names(), &format!("type of {}", o.name)))
        .collect::<Result<Vec<_>, _>>()?;
    if file.hom.len() != n || file.hom.iter().any(|r| r.len() != n) {
        return invalid(format!("hom must be a {n}×{n} matrix"));
    }
    let mut hom = Vec::with_capacity(n * n);
    for y in 0..n {
        for x in 0..n {
            hom.push(file.hom[y][x].resolve(q.labels(types[x], types[y]), &format!("hom({y}, {x})"))?);
        }
    }
    let names = file.objects.iter().map(|o| o.name.clone()).collect();
    Ok(QCategory::new(q, names, types, hom)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismFile {
    pub name: String,
    pub dom: Ref,
    pub cod: Ref,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SiteFile {
    pub objects: Vec<String>,
    pub morphisms: Vec<MorphismFile>,
    pub identities: Vec<Ref>,
    /// `compose[g][f]` is `g ∘ f`, or null when not composable.
    pub compose: Vec<Vec<Option<Ref>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub topology: Option<BTreeMap<String, Vec<Vec<Ref>>>>,
}

pub fn site_to_file(c: &FiniteCategory, topology: Option<&Topology>) -> SiteFile {
    let m = c.n_morphisms();
    let morphisms = c
        .morphisms()
        .iter()
        .map(|f| MorphismFile { name: f.name.clone(), dom: Ref::Index(f.dom), cod: Ref::Index(f.cod) })
        .collect();
    let compose = (0..m).map(|g| (0..m).map(|f| c.try_comp(g, f).map(Ref::Index)).collect()).collect();
    let topology = topology.map(|t| {
        (0..c.n_objects())
            .map(|y| {
                let sieves = t.covers[y].iter().map(|s| s.iter().map(|&f| Ref::Index(f)).collect()).collect();
                (c.object_names()[y].clone(), sieves)
            })
            .collect()
    });
    SiteFile {
        objects: c.object_names().to_vec(),
        morphisms,
        identities: c.identities().iter().map(|&i| Ref::Index(i)).collect(),
        compose,
        topology,
    }
}

pub fn site_from_file(file: &SiteFile) -> Result<(FiniteCategory, Option<Topology>), FormatError> {
    let objs = &file.objects;
    let morphisms = file
        .morphisms
        .iter()
        .map(|f| {
            Ok(Morphism {
                name: f.name.clone(),
                dom: f.dom.resolve(objs, &f.name)?,
                cod: f.cod.resolve(objs, &f.name)?,
            })
        })
        .collect::<Result<Vec<_>, FormatError>>()?;
    let names: Vec<String> = morphisms.iter().map(|f| f.name.clone()).collect();
    let identities = file.identities.iter().map(|r| r.resolve(&names, "identity")).collect::<Result<Vec<_>, _>>()?;
    let m = names.len();
    if file.compose.len() != m || file.compose.iter().any(|r| r.len() != m) {
        return invalid(format!("compose must be a {m}×{m} matrix"));
    }
    let mut table = Vec::with_capacity(m * m);
    for row in &file.compose {
        for r in row {
            table.push(r.as_ref().map(|r| r.resolve(&names, "composite")).transpose()?);
        }
    }
    let c = FiniteCategory::new(objs.clone(), morphisms, identities, table)?;
    let topology = match &file.topology {
        None => None,
        Some(map) => {
            let mut t = Topology { covers: vec![Vec::new(); objs.len()] };
            for (obj, sieves) in map {
                let y = Ref::Name(obj.clone()).resolve(objs, "topology")?;
                for s in sieves {
                    let set = s.iter().map(|r| r.resolve(&names, "sieve")).collect::<Result<_, _>>()?;
                    t.covers[y].push(set);
                }
            }
            t.validate(&c)?;
            Some(t)
        }
    };
    Ok((c, topology))
}

/// What a JSON document describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FileKind {
    Quantaloid,
    Category,
    Site,
}

pub fn detect(value: &Value) -> Option<FileKind> {
    let obj = value.as_object()?;
    if obj.contains_key("homs") {
        Some(FileKind::Quantaloid)
    } else if obj.contains_key("quantaloid") {
        Some(FileKind::Category)
    } else if obj.contains_key("morphisms") {
        Some(FileKind::Site)
    } else {
        None
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}
