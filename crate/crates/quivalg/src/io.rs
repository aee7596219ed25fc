//! Versioned JSON schemas for every instance kind, with loaders that resolve
//! cross-file references and realize validated core values. Scalars are
//! serialized as exact `"p/q"` strings; floats never appear.
//!
//! Error split, mirrored by the CLI exit codes: [`IoError::Read`],
//! [`IoError::Json`] and [`IoError::Format`] are I/O or parse errors;
//! [`IoError::Semantic`] carries a validation failure with its witness.

use std::collections::BTreeMap;
use std::path::{Path as FsPath, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{AlgebraWithQuiverData, FiniteDimAlgebra};
use crate::bimodule::BimoduleWithQuiverData;
use crate::connection::QuiverConnection;
use crate::linalg::{Field, Matrix, Scalar, Subspace};
use crate::quiver::{AdmissibleIdeal, BoundQuiver, Path, PathVector, Quiver};

pub const SCHEMA: &str = "quivalg/v1";

#[derive(Error, Debug)]
pub enum IoError {
    #[error("cannot read {path}: {message}")]
    Read { path: PathBuf, message: String },
    #[error("cannot parse {path}: {message}")]
    Json { path: PathBuf, message: String },
    #[error("bad instance file: {0}")]
    Format(String),
    #[error("validation failed: {0}")]
    Semantic(String),
}

impl IoError {
    /// CLI exit code class: 2 for I/O, parse and format errors, 1 for
    /// semantic validation failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            IoError::Semantic(_) => 1,
            _ => 2,
        }
    }
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct EdgeDto {
    pub id: String,
    pub src: String,
    pub tgt: String,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct GeneratorTermDto {
    pub coeff: String,
    pub path: Vec<String>,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct FileRef {
    pub id: String,
    pub path: String,
}

/// One instance per file; `kind` selects the payload fields.
#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct InstanceFile {
    pub schema: String,
    pub kind: String,
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edges: Option<Vec<EdgeDto>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<Vec<GeneratorTermDto>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nilpotency_bound: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<FileRef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<FileRef>,
    /// gamma["g,h"] = basis labels of the block.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<BTreeMap<String, Vec<String>>>,
    /// u["g,h"] = row-major matrix of exact scalars.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u: Option<BTreeMap<String, Vec<Vec<String>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<Vec<String>>,
    /// Sparse structure constants (i, j, k, coeff): e_i e_j += coeff e_k.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mult: Option<Vec<(usize, usize, usize, String)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radical: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta1: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta2: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub left: Option<FileRef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub right: Option<FileRef>,
    /// Sparse action entries (algebra basis index, row, col, coeff).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub left_action: Option<Vec<(usize, usize, usize, String)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub right_action: Option<Vec<(usize, usize, usize, String)>>,
}

#[derive(Clone, Debug)]
pub enum LoadedInstance {
    Quiver(Quiver),
    BoundQuiver(BoundQuiver),
    Connection { connection: QuiverConnection, source: BoundQuiver, target: BoundQuiver },
    Algebra(AlgebraWithQuiverData),
    Bimodule(BimoduleWithQuiverData),
}

impl LoadedInstance {
    pub fn kind(&self) -> &'static str {
        match self {
            LoadedInstance::Quiver(_) => "quiver",
            LoadedInstance::BoundQuiver(_) => "bound_quiver",
            LoadedInstance::Connection { .. } => "connection",
            LoadedInstance::Algebra(_) => "algebra",
            LoadedInstance::Bimodule(_) => "bimodule",
        }
    }
}

pub fn parse_file(path: &FsPath) -> Result<InstanceFile, IoError> {
    let text = std::fs::read_to_string(path).map_err(|e| IoError::Read {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    let file: InstanceFile = serde_json::from_str(&text).map_err(|e| IoError::Json {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    if file.schema != SCHEMA {
        return Err(IoError::Format(format!(
            "unsupported schema {:?} (expected {SCHEMA:?})",
            file.schema
        )));
    }
    Ok(file)
}

/// Loads and validates one instance, resolving references relative to the
/// file's directory.
pub fn load_instance(path: &FsPath, field: Field) -> Result<LoadedInstance, IoError> {
    let file = parse_file(path)?;
    let base = path.parent().map(FsPath::to_path_buf).unwrap_or_default();
    realize(&file, field, &base)
}

pub fn realize(
    file: &InstanceFile,
    field: Field,
    base: &FsPath,
) -> Result<LoadedInstance, IoError> {
    match file.kind.as_str() {
        "quiver" => Ok(LoadedInstance::Quiver(realize_quiver(file)?)),
        "bound_quiver" => Ok(LoadedInstance::BoundQuiver(realize_bound_quiver(file, field)?)),
        "connection" => {
            let source_ref = file
                .source
                .as_ref()
                .ok_or_else(|| IoError::Format("connection file lacks a source ref".into()))?;
            let target_ref = file
                .target
                .as_ref()
                .ok_or_else(|| IoError::Format("connection file lacks a target ref".into()))?;
            let source = load_bound_quiver_ref(source_ref, field, base)?;
            let target = load_bound_quiver_ref(target_ref, field, base)?;
            let connection = realize_connection(file, field, &source.quiver, &target.quiver)?;
            Ok(LoadedInstance::Connection { connection, source, target })
        }
        "algebra" => Ok(LoadedInstance::Algebra(realize_algebra(file, field)?)),
        "bimodule" => {
            let left_ref = file
                .left
                .as_ref()
                .ok_or_else(|| IoError::Format("bimodule file lacks a left algebra ref".into()))?;
            let right_ref = file
                .right
                .as_ref()
                .ok_or_else(|| IoError::Format("bimodule file lacks a right algebra ref".into()))?;
            let left = load_algebra_ref(left_ref, field, base)?;
            let right = load_algebra_ref(right_ref, field, base)?;
            Ok(LoadedInstance::Bimodule(realize_bimodule(file, field, left, right)?))
        }
        other => Err(IoError::Format(format!("unknown instance kind {other:?}"))),
    }
}

fn load_bound_quiver_ref(
    r: &FileRef,
    field: Field,
    base: &FsPath,
) -> Result<BoundQuiver, IoError> {
    let path = base.join(&r.path);
    let file = parse_file(&path)?;
    if file.id != r.id {
        return Err(IoError::Format(format!(
            "reference id {:?} does not match file id {:?} at {}",
            r.id,
            file.id,
            path.display()
        )));
    }
    realize_bound_quiver(&file, field)
}

fn load_algebra_ref(
    r: &FileRef,
    field: Field,
    base: &FsPath,
) -> Result<AlgebraWithQuiverData, IoError> {
    let path = base.join(&r.path);
    let file = parse_file(&path)?;
    if file.id != r.id {
        return Err(IoError::Format(format!(
            "reference id {:?} does not match file id {:?} at {}",
            r.id,
            file.id,
            path.display()
        )));
    }
    realize_algebra(&file, field)
}

fn parse_scalar(field: Field, s: &str) -> Result<Scalar, IoError> {
    field.parse_scalar(s).map_err(|e| IoError::Format(format!("scalar {s:?}: {e}")))
}

fn parse_matrix(field: Field, rows: &[Vec<String>]) -> Result<Matrix, IoError> {
    let parsed: Result<Vec<Vec<Scalar>>, IoError> = rows
        .iter()
        .map(|r| r.iter().map(|s| parse_scalar(field, s)).collect())
        .collect();
    let parsed = parsed?;
    if parsed.is_empty() {
        return Ok(Matrix::zeros(field, 0, 0));
    }
    let w = parsed[0].len();
    if parsed.iter().any(|r| r.len() != w) {
        return Err(IoError::Format("ragged matrix rows".into()));
    }
    Ok(Matrix::from_rows(field, parsed))
}

fn realize_quiver(file: &InstanceFile) -> Result<Quiver, IoError> {
    let vertices = file
        .vertices
        .clone()
        .ok_or_else(|| IoError::Format("quiver file lacks vertices".into()))?;
    let edges = file
        .edges
        .clone()
        .unwrap_or_default()
        .into_iter()
        .map(|e| (e.id, e.src, e.tgt))
        .collect();
    Quiver::new(vertices, edges).map_err(|e| IoError::Semantic(e.to_string()))
}

fn realize_bound_quiver(file: &InstanceFile, field: Field) -> Result<BoundQuiver, IoError> {
    let quiver = realize_quiver(file)?;
    let bound = file
        .nilpotency_bound
        .ok_or_else(|| IoError::Format("bound quiver file lacks nilpotency_bound".into()))?;
    let mut generators = Vec::new();
    for gen in file.generators.clone().unwrap_or_default() {
        let mut v = PathVector::zero(field);
        for term in gen {
            let coeff = parse_scalar(field, &term.coeff)?;
            let edges: Result<Vec<usize>, IoError> = term
                .path
                .iter()
                .map(|id| {
                    quiver
                        .edge_index(id)
                        .ok_or_else(|| IoError::Format(format!("unknown edge id {id:?}")))
                })
                .collect();
            let edges = edges?;
            if edges.is_empty() {
                return Err(IoError::Format(
                    "generator terms must name at least one edge".into(),
                ));
            }
            v.add_term(Path::from_edge_indices(edges), coeff);
        }
        // mixed-endpoint input is split into endpoint-homogeneous parts here
        for (_, part) in v.split_by_endpoints(&quiver) {
            if !part.is_zero() {
                generators.push(part);
            }
        }
    }
    let ideal = AdmissibleIdeal::new(&quiver, generators, bound, field)
        .map_err(|e| IoError::Semantic(e.to_string()))?;
    Ok(BoundQuiver::new(quiver, ideal))
}

fn block_key(s: &str, source: &Quiver, target: &Quiver) -> Result<(usize, usize), IoError> {
    let (g, h) = s
        .split_once(',')
        .ok_or_else(|| IoError::Format(format!("block key {s:?} is not \"g,h\"")))?;
    let gi = source
        .vertex_index(g.trim())
        .ok_or_else(|| IoError::Format(format!("unknown source vertex {g:?}")))?;
    let hi = target
        .vertex_index(h.trim())
        .ok_or_else(|| IoError::Format(format!("unknown target vertex {h:?}")))?;
    Ok((gi, hi))
}

fn realize_connection(
    file: &InstanceFile,
    field: Field,
    source: &Quiver,
    target: &Quiver,
) -> Result<QuiverConnection, IoError> {
    let mut gamma = BTreeMap::new();
    for (key, labels) in file.gamma.clone().unwrap_or_default() {
        gamma.insert(block_key(&key, source, target)?, labels);
    }
    let mut u = BTreeMap::new();
    for (key, rows) in file.u.clone().unwrap_or_default() {
        u.insert(block_key(&key, source, target)?, parse_matrix(field, &rows)?);
    }
    QuiverConnection::new(source.clone(), target.clone(), gamma, u, field)
        .map_err(|e| IoError::Semantic(e.to_string()))
}

fn realize_algebra(file: &InstanceFile, field: Field) -> Result<AlgebraWithQuiverData, IoError> {
    let labels = file
        .basis
        .clone()
        .ok_or_else(|| IoError::Format("algebra file lacks a basis".into()))?;
    let dim = labels.len();
    let unit_strs = file
        .unit
        .clone()
        .ok_or_else(|| IoError::Format("algebra file lacks unit coordinates".into()))?;
    if unit_strs.len() != dim {
        return Err(IoError::Format("unit length does not match the basis".into()));
    }
    let unit: Result<Vec<Scalar>, IoError> =
        unit_strs.iter().map(|s| parse_scalar(field, s)).collect();
    let mut mult = vec![Vec::new(); dim * dim];
    for (i, j, k, coeff) in file.mult.clone().unwrap_or_default() {
        if i >= dim || j >= dim || k >= dim {
            return Err(IoError::Format(format!(
                "structure constant ({i}, {j}, {k}) out of range"
            )));
        }
        mult[i * dim + j].push((k, parse_scalar(field, &coeff)?));
    }
    let algebra = FiniteDimAlgebra::new(field, labels, mult, unit?)
        .map_err(|e| IoError::Semantic(e.to_string()))?;
    let radical = match &file.radical {
        Some(rows) => {
            let m = parse_matrix(field, rows)?;
            if m.rows() > 0 && m.cols() != dim {
                return Err(IoError::Format("radical rows have the wrong length".into()));
            }
            Some(Subspace::from_matrix_rows(&m))
        }
        None => None,
    };
    match (&file.delta1, &file.delta2) {
        (Some(d1), Some(d2)) => AlgebraWithQuiverData::with_data(
            algebra,
            radical,
            parse_matrix(field, d1)?,
            parse_matrix(field, d2)?,
        )
        .map_err(|e| IoError::Semantic(e.to_string())),
        (None, None) => AlgebraWithQuiverData::canonical(algebra, radical)
            .map_err(|e| IoError::Semantic(e.to_string())),
        _ => Err(IoError::Format("delta1 and delta2 must be given together".into())),
    }
}

fn realize_bimodule(
    file: &InstanceFile,
    field: Field,
    left: AlgebraWithQuiverData,
    right: AlgebraWithQuiverData,
) -> Result<BimoduleWithQuiverData, IoError> {
    let labels = file
        .basis
        .clone()
        .ok_or_else(|| IoError::Format("bimodule file lacks a basis".into()))?;
    let dim = labels.len();
    let parse_actions = |entries: &Option<Vec<(usize, usize, usize, String)>>,
                         count: usize|
     -> Result<Vec<Matrix>, IoError> {
        let mut out = vec![Matrix::zeros(field, dim, dim); count];
        for (a, r, c, coeff) in entries.clone().unwrap_or_default() {
            if a >= count || r >= dim || c >= dim {
                return Err(IoError::Format(format!("action entry ({a}, {r}, {c}) out of range")));
            }
            out[a].set(r, c, parse_scalar(field, &coeff)?);
        }
        Ok(out)
    };
    let left_action = parse_actions(&file.left_action, left.dim())?;
    let right_action = parse_actions(&file.right_action, right.dim())?;
    let d1 = parse_matrix(
        field,
        file.delta1
            .as_ref()
            .ok_or_else(|| IoError::Format("bimodule file lacks delta1".into()))?,
    )?;
    let d2 = parse_matrix(
        field,
        file.delta2
            .as_ref()
            .ok_or_else(|| IoError::Format("bimodule file lacks delta2".into()))?,
    )?;
    BimoduleWithQuiverData::new(left, right, labels, left_action, right_action, d1, d2)
        .map_err(|e| IoError::Semantic(e.to_string()))
}

// ---------------------------------------------------------------------------
// writers

fn matrix_rows(m: &Matrix) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|r| m.row(r).iter().map(Scalar::to_string).collect())
        .collect()
}

pub fn quiver_file(id: &str, q: &Quiver) -> InstanceFile {
    InstanceFile {
        schema: SCHEMA.into(),
        kind: "quiver".into(),
        id: id.into(),
        vertices: Some(q.vertex_ids().to_vec()),
        edges: Some(
            q.edges()
                .iter()
                .map(|e| EdgeDto {
                    id: e.id.clone(),
                    src: q.vertex_id(e.src).to_string(),
                    tgt: q.vertex_id(e.tgt).to_string(),
                })
                .collect(),
        ),
        ..empty_file()
    }
}

pub fn bound_quiver_file(id: &str, bq: &BoundQuiver) -> InstanceFile {
    let mut f = quiver_file(id, &bq.quiver);
    f.kind = "bound_quiver".into();
    f.nilpotency_bound = Some(bq.ideal.bound());
    f.generators = Some(
        bq.ideal
            .generators()
            .iter()
            .map(|g| {
                g.terms()
                    .map(|(p, c)| GeneratorTermDto {
                        coeff: c.to_string(),
                        path: p
                            .edge_indices()
                            .iter()
                            .map(|&e| bq.quiver.edge(e).id.clone())
                            .collect(),
                    })
                    .collect()
            })
            .collect(),
    );
    f
}

pub fn connection_file(
    id: &str,
    c: &QuiverConnection,
    source: FileRef,
    target: FileRef,
) -> InstanceFile {
    let mut gamma = BTreeMap::new();
    let mut u = BTreeMap::new();
    for (&(g, h), labels) in c.gamma_blocks() {
        let key = format!("{},{}", c.source().vertex_id(g), c.target().vertex_id(h));
        gamma.insert(key, labels.clone());
    }
    for g in 0..c.source().vertex_count() {
        for h in 0..c.target().vertex_count() {
            if let Some(block) = c.u_block(g, h) {
                let key =
                    format!("{},{}", c.source().vertex_id(g), c.target().vertex_id(h));
                u.insert(key, matrix_rows(block));
            }
        }
    }
    InstanceFile {
        schema: SCHEMA.into(),
        kind: "connection".into(),
        id: id.into(),
        source: Some(source),
        target: Some(target),
        gamma: Some(gamma),
        u: Some(u),
        ..empty_file()
    }
}

pub fn algebra_file(id: &str, awd: &AlgebraWithQuiverData) -> InstanceFile {
    let a = awd.algebra();
    let dim = a.dim();
    let mut mult = Vec::new();
    for i in 0..dim {
        for j in 0..dim {
            for (k, c) in a.mult_basis(i, j) {
                mult.push((i, j, *k, c.to_string()));
            }
        }
    }
    InstanceFile {
        schema: SCHEMA.into(),
        kind: "algebra".into(),
        id: id.into(),
        basis: Some(a.labels().to_vec()),
        unit: Some(a.unit().iter().map(Scalar::to_string).collect()),
        mult: Some(mult),
        radical: Some(matrix_rows(awd.rad().basis_matrix())),
        delta1: Some(matrix_rows(awd.delta1())),
        delta2: Some(matrix_rows(awd.delta2())),
        ..empty_file()
    }
}

pub fn bimodule_file(
    id: &str,
    m: &BimoduleWithQuiverData,
    left: FileRef,
    right: FileRef,
) -> InstanceFile {
    let sparse = |mats: Vec<&Matrix>| -> Vec<(usize, usize, usize, String)> {
        let mut out = Vec::new();
        for (a, mat) in mats.iter().enumerate() {
            for r in 0..mat.rows() {
                for c in 0..mat.cols() {
                    if !mat.get(r, c).is_zero() {
                        out.push((a, r, c, mat.get(r, c).to_string()));
                    }
                }
            }
        }
        out
    };
    InstanceFile {
        schema: SCHEMA.into(),
        kind: "bimodule".into(),
        id: id.into(),
        left: Some(left),
        right: Some(right),
        basis: Some(m.labels().to_vec()),
        left_action: Some(sparse((0..m.left().dim()).map(|i| m.left_action_matrix(i)).collect())),
        right_action: Some(sparse(
            (0..m.right().dim()).map(|i| m.right_action_matrix(i)).collect(),
        )),
        delta1: Some(matrix_rows(m.delta1())),
        delta2: Some(matrix_rows(m.delta2())),
        ..empty_file()
    }
}

fn empty_file() -> InstanceFile {
    InstanceFile {
        schema: SCHEMA.into(),
        kind: String::new(),
        id: String::new(),
        vertices: None,
        edges: None,
        generators: None,
        nilpotency_bound: None,
        source: None,
        target: None,
        gamma: None,
        u: None,
        basis: None,
        unit: None,
        mult: None,
        radical: None,
        delta1: None,
        delta2: None,
        left: None,
        right: None,
        left_action: None,
        right_action: None,
    }
}

pub fn write_file(path: &FsPath, file: &InstanceFile) -> Result<(), IoError> {
    let text = serde_json::to_string_pretty(file)
        .map_err(|e| IoError::Format(e.to_string()))?;
    std::fs::write(path, text + "\n").map_err(|e| IoError::Read {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}
