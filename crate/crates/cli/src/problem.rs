//! Problem files: a TOML document describing a Lie algebra, a backend, a
//! closed form `omega`, an action and optionally an invariant potential.
//!
//! ```toml
//! n = 2
//!
//! [lie_algebra]
//! dim = 3
//! structure = [{ i = 1, j = 2, k = 3, c = "1" }]   # [e1, e2] = e3
//!
//! [backend]
//! kind = "euclidean"       # or "invariant" with a `structure` list
//! dim = 3
//!
//! [[omega]]
//! indices = [1, 2, 3]
//! exponents = [0, 0, 0]
//! coeff = "1"
//!
//! [[action]]               # one entry per generator
//! components = [[], [{ exponents = [0, 0, 1], coeff = "1" }], []]
//! ```

use serde::Deserialize;
use thiserror::Error;

use hcomoment::cartan::{Cartan, Euclidean, Form, Invariant};
use hcomoment::foundation::combinatorics::MAX_DIM;
use hcomoment::foundation::Rational;
use hcomoment::liealg::LieAlgebra;

use crate::terms::{decode_form, parse_coeff, semantic, Backend, FieldRecord, SemanticError, TermRecord};

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub n: usize,
    pub lie_algebra: AlgebraSection,
    pub backend: BackendSection,
    #[serde(default)]
    pub omega: Vec<TermRecord>,
    #[serde(default)]
    pub action: Vec<FieldRecord>,
    #[serde(default)]
    pub eta: Option<Vec<TermRecord>>,
    #[serde(default)]
    pub options: OptionsSection,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraSection {
    pub dim: usize,
    #[serde(default)]
    pub structure: Vec<StructureRecord>,
}

/// `[e_i, e_j] ∋ c e_k`, one-based with `i < j`.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureRecord {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub c: String,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BackendSection {
    pub kind: String,
    pub dim: usize,
    #[serde(default)]
    pub base_point: Option<Vec<String>>,
    #[serde(default)]
    pub structure: Option<Vec<StructureRecord>>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptionsSection {
    #[serde(default)]
    pub max_coeff_degree: Option<usize>,
    #[serde(default)]
    pub sample_points: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LoadError {
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error(transparent)]
    Semantic(#[from] SemanticError),
}

/// A decoded problem. The Lie algebras are kept unchecked so that validation
/// can report Jacobi failures.
#[derive(Clone, Debug)]
pub struct Loaded<C: Backend> {
    pub n: usize,
    pub algebra: LieAlgebra,
    pub backend: C,
    /// The algebra `𝔥` of the invariant backend.
    pub backend_algebra: Option<LieAlgebra>,
    pub omega: Form<C::Key>,
    pub fields: Vec<C::Field>,
    pub eta: Option<Form<C::Key>>,
    pub max_coeff_degree: Option<usize>,
    pub sample_points: Vec<Vec<Rational>>,
}

#[derive(Clone, Debug)]
pub enum AnyProblem {
    Euclidean(Loaded<Euclidean>),
    Invariant(Loaded<Invariant>),
}

/// One-based line and column of a byte offset.
pub fn line_column(text: &str, offset: usize) -> (usize, usize) {
    let offset = offset.min(text.len());
    let before = &text[..offset];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

pub fn parse_file(text: &str) -> Result<ProblemFile, LoadError> {
    toml::from_str(text).map_err(|e| {
        let (line, column) = e.span().map_or((1, 1), |s| line_column(text, s.start));
        LoadError::Parse {
            line,
            column,
            message: e.message().trim().lines().collect::<Vec<_>>().join("; "),
        }
    })
}

pub fn load(text: &str) -> Result<AnyProblem, LoadError> {
    let file = parse_file(text)?;
    Ok(decode(&file)?)
}

fn structure(records: &[StructureRecord], dim: usize, section: &str, list: &str) -> Result<LieAlgebra, SemanticError> {
    if dim == 0 || dim > MAX_DIM {
        return Err(semantic(
            format!("{section}.dim"),
            format!("dimension must be in 1..={MAX_DIM}"),
        ));
    }
    let path = format!("{section}.{list}");
    let mut entries = Vec::with_capacity(records.len());
    for (pos, r) in records.iter().enumerate() {
        let here = format!("{path}[{pos}]");
        for (name, v) in [("i", r.i), ("j", r.j), ("k", r.k)] {
            if v == 0 || v > dim {
                return Err(semantic(
                    format!("{here}.{name}"),
                    format!("index {v} outside 1..={dim}"),
                ));
            }
        }
        if r.i >= r.j {
            return Err(semantic(&here, format!("expected i < j, got ({}, {})", r.i, r.j)));
        }
        let c = parse_coeff(&r.c, &format!("{here}.c"))?;
        entries.push((r.i - 1, r.j - 1, r.k - 1, c));
    }
    LieAlgebra::new_unchecked(dim, entries).map_err(|e| semantic(path, e.to_string()))
}

fn points(records: &[Vec<String>], dim: usize, path: &str) -> Result<Vec<Vec<Rational>>, SemanticError> {
    records
        .iter()
        .enumerate()
        .map(|(p, coords)| {
            let here = format!("{path}[{p}]");
            if coords.len() != dim {
                return Err(semantic(
                    &here,
                    format!("{} coordinates given, expected {dim}", coords.len()),
                ));
            }
            coords
                .iter()
                .enumerate()
                .map(|(i, s)| parse_coeff(s, &format!("{here}[{i}]")))
                .collect()
        })
        .collect()
}

fn decode_with<C: Backend>(
    file: &ProblemFile,
    algebra: LieAlgebra,
    backend: C,
    backend_algebra: Option<LieAlgebra>,
    sample_points: Vec<Vec<Rational>>,
) -> Result<Loaded<C>, SemanticError> {
    let n = file.n;
    let omega = decode_form(&backend, &file.omega, None, "omega")?;
    if !file.omega.is_empty() && omega.degree() != n + 1 {
        return Err(semantic(
            "omega",
            format!("omega degree {} ≠ n+1 = {}", omega.degree(), n + 1),
        ));
    }
    let omega = if file.omega.is_empty() {
        Form::zero(n + 1)
    } else {
        omega
    };
    if omega.degree() > backend.dim() {
        return Err(semantic(
            "omega",
            format!(
                "degree {} exceeds the backend dimension {}",
                omega.degree(),
                backend.dim()
            ),
        ));
    }
    if file.action.len() != algebra.dim() {
        return Err(semantic(
            "action",
            format!(
                "{} generators given, lie_algebra.dim = {}",
                file.action.len(),
                algebra.dim()
            ),
        ));
    }
    let fields = file
        .action
        .iter()
        .enumerate()
        .map(|(i, rec)| backend.decode_field(rec, &format!("action[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    let eta = match &file.eta {
        None => None,
        Some(terms) => {
            let eta = decode_form(&backend, terms, Some(n), "eta")?;
            Some(eta)
        }
    };
    Ok(Loaded {
        n,
        algebra,
        backend,
        backend_algebra,
        omega,
        fields,
        eta,
        max_coeff_degree: file.options.max_coeff_degree,
        sample_points,
    })
}

pub fn decode(file: &ProblemFile) -> Result<AnyProblem, SemanticError> {
    if file.n == 0 {
        return Err(semantic("n", "must be at least 1"));
    }
    let algebra = structure(
        &file.lie_algebra.structure,
        file.lie_algebra.dim,
        "lie_algebra",
        "structure",
    )?;
    let b = &file.backend;
    match b.kind.as_str() {
        "euclidean" => {
            if b.structure.is_some() {
                return Err(semantic("backend.structure", "only allowed on the invariant backend"));
            }
            if b.dim == 0 || b.dim > MAX_DIM {
                return Err(semantic("backend.dim", format!("dimension must be in 1..={MAX_DIM}")));
            }
            let backend = match &b.base_point {
                None => Euclidean::new(b.dim),
                Some(p) => {
                    let bp = points(std::slice::from_ref(p), b.dim, "backend.base_point")?;
                    Euclidean::with_base_point(bp.into_iter().next().expect("one point"))
                }
            };
            let mut sample = points(&file.options.sample_points, b.dim, "options.sample_points")?;
            if sample.is_empty() {
                sample.push(backend.base_point());
            }
            Ok(AnyProblem::Euclidean(decode_with(
                file, algebra, backend, None, sample,
            )?))
        }
        "invariant" => {
            if b.base_point.is_some() {
                return Err(semantic("backend.base_point", "only allowed on the euclidean backend"));
            }
            let records = b.structure.as_deref().unwrap_or(&[]);
            let h = structure(records, b.dim, "backend", "structure")?;
            if !file.options.sample_points.is_empty() {
                return Err(semantic(
                    "options.sample_points",
                    "invariant forms are constant; sample points are not used",
                ));
            }
            let backend = Invariant::new(&h);
            Ok(AnyProblem::Invariant(decode_with(
                file,
                algebra,
                backend,
                Some(h),
                vec![Vec::new()],
            )?))
        }
        other => Err(semantic(
            "backend.kind",
            format!("expected \"euclidean\" or \"invariant\", got {other:?}"),
        )),
    }
}
