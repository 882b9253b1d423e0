//! Artifact files written by `--out` and read back by `verify`.
//!
//! Artifacts are JSON documents with sorted keys. Rationals are strings in
//! lowest terms, index lists are one-based, and forms are term lists as in
//! problem files. Writing and reading back yields the same object.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use hcomoment::applications::{MultiMomentMap, WeakComoment};
use hcomoment::cartan::Form;
use hcomoment::foundation::{IndexSet, Rational};
use hcomoment::liealg::Chain;
use hcomoment::moment::{Bigraded, ComomentMap};
use num_traits::Zero;

use crate::problem::line_column;
use crate::terms::{
    coeff_string, decode_form, encode_form, parse_coeff, semantic, Backend, FieldRecord, SemanticError, TermRecord,
};

/// `ε^J ⊗ α_J` for one index set `J`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntryRecord {
    pub generators: Vec<usize>,
    pub form: Vec<TermRecord>,
}

/// The form part of `f_k` (or any element of `Λ^k 𝔤* ⊗ Ω`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentRecord {
    pub k: usize,
    pub entries: Vec<EntryRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComomentArtifact {
    pub kind: String,
    pub backend: String,
    pub dim: usize,
    pub lie_dim: usize,
    pub n: usize,
    /// Vector parts `ζ(e_i)` of `f_1`.
    pub fields: Vec<FieldRecord>,
    pub components: Vec<ComponentRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeakArtifact {
    pub kind: String,
    pub backend: String,
    pub dim: usize,
    pub lie_dim: usize,
    pub n: usize,
    /// `j(e_i)` for each generator.
    pub forms: Vec<Vec<TermRecord>>,
}

/// `Σ c e_J`, one record per nonzero coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainTerm {
    pub generators: Vec<usize>,
    pub coeff: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MultimomentArtifact {
    pub kind: String,
    pub backend: String,
    pub dim: usize,
    pub lie_dim: usize,
    pub n: usize,
    /// Basis of `P_𝔤` as wedge monomials.
    pub basis: Vec<Vec<ChainTerm>>,
    /// `v̄` of each basis element.
    pub values: Vec<Vec<TermRecord>>,
    /// The component `f_n` restricted to `P_𝔤`.
    pub top: ComponentRecord,
}

/// Rebuild a JSON value with object keys in sorted order, independently of
/// how `serde_json` stores maps.
pub fn sorted(v: &Value) -> Value {
    match v {
        Value::Object(m) => {
            let mut entries: Vec<(&String, &Value)> = m.iter().collect();
            entries.sort_by(|a, b| a.0.cmp(b.0));
            let mut out = serde_json::Map::new();
            for (k, v) in entries {
                out.insert(k.clone(), sorted(v));
            }
            Value::Object(out)
        }
        Value::Array(a) => Value::Array(a.iter().map(sorted).collect()),
        other => other.clone(),
    }
}

/// Pretty JSON with sorted keys and a trailing newline.
pub fn canonical_json<T: Serialize>(x: &T) -> String {
    let v = serde_json::to_value(x).expect("artifact serializes");
    let mut s = serde_json::to_string_pretty(&sorted(&v)).expect("value serializes");
    s.push('\n');
    s
}

/// Parse an artifact, reporting syntax errors with line and column.
pub fn parse_json<T: DeserializeOwned>(text: &str) -> Result<T, SemanticError> {
    serde_json::from_str(text).map_err(|e| {
        let (line, column) = if e.line() == 0 {
            line_column(text, text.len())
        } else {
            (e.line(), e.column())
        };
        semantic(format!("line {line}, column {column}"), e.to_string())
    })
}

pub fn encode_bigraded<C: Backend>(backend: &C, b: &Bigraded<C::Key>) -> ComponentRecord {
    ComponentRecord {
        k: b.bidegree().0,
        entries: b
            .coeffs()
            .iter()
            .map(|(set, a)| EntryRecord {
                generators: set.labels(),
                form: encode_form(backend, a),
            })
            .collect(),
    }
}

/// Read an element of `Λ^k 𝔤* ⊗ Ω^j` with `k` and `j` fixed by the caller.
pub fn decode_bigraded<C: Backend>(
    backend: &C,
    rec: &ComponentRecord,
    lie_dim: usize,
    k: usize,
    j: usize,
    path: &str,
) -> Result<Bigraded<C::Key>, SemanticError> {
    if rec.k != k {
        return Err(semantic(format!("{path}.k"), format!("expected {k}, got {}", rec.k)));
    }
    let mut b = Bigraded::zero(k, j);
    for (e, entry) in rec.entries.iter().enumerate() {
        let here = format!("{path}.entries[{e}]");
        let set = IndexSet::from_labels(&entry.generators, lie_dim)
            .map_err(|err| semantic(format!("{here}.generators"), format!("{err:?}")))?;
        if set.len() != k {
            return Err(semantic(
                format!("{here}.generators"),
                format!("{} generators, expected {k}", set.len()),
            ));
        }
        let a = decode_form(backend, &entry.form, Some(j), &format!("{here}.form"))?;
        b.add(set, &a);
    }
    Ok(b)
}

fn check_header<C: Backend>(
    backend: &C,
    kind: &str,
    expected_kind: &str,
    name: &str,
    dim: usize,
) -> Result<(), SemanticError> {
    if kind != expected_kind {
        return Err(semantic("kind", format!("expected {expected_kind:?}, got {kind:?}")));
    }
    if name != C::NAME {
        return Err(semantic("backend", format!("expected {:?}, got {name:?}", C::NAME)));
    }
    if dim != backend.dim() {
        return Err(semantic("dim", format!("expected {}, got {dim}", backend.dim())));
    }
    Ok(())
}

pub fn encode_comoment<C: Backend>(backend: &C, map: &ComomentMap<C::Field, C::Key>) -> ComomentArtifact {
    ComomentArtifact {
        kind: "comoment".into(),
        backend: C::NAME.into(),
        dim: backend.dim(),
        lie_dim: map.fields().len(),
        n: map.n(),
        fields: map.fields().iter().map(|v| backend.encode_field(v)).collect(),
        components: map.components().iter().map(|b| encode_bigraded(backend, b)).collect(),
    }
}

pub fn decode_comoment<C: Backend>(
    backend: &C,
    art: &ComomentArtifact,
) -> Result<ComomentMap<C::Field, C::Key>, SemanticError> {
    check_header(backend, &art.kind, "comoment", &art.backend, art.dim)?;
    let n = art.n;
    if n == 0 {
        return Err(semantic("n", "must be at least 1"));
    }
    if art.fields.len() != art.lie_dim {
        return Err(semantic(
            "fields",
            format!("{} fields, lie_dim = {}", art.fields.len(), art.lie_dim),
        ));
    }
    if art.components.len() != n {
        return Err(semantic(
            "components",
            format!("{} components, expected n = {n}", art.components.len()),
        ));
    }
    let fields = art
        .fields
        .iter()
        .enumerate()
        .map(|(i, f)| backend.decode_field(f, &format!("fields[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    let components = art
        .components
        .iter()
        .enumerate()
        .map(|(pos, c)| {
            decode_bigraded(
                backend,
                c,
                art.lie_dim,
                pos + 1,
                n - pos - 1,
                &format!("components[{pos}]"),
            )
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ComomentMap::from_parts(n, fields, components))
}

pub fn encode_weak<C: Backend>(backend: &C, n: usize, w: &WeakComoment<C::Key>) -> WeakArtifact {
    WeakArtifact {
        kind: "weak".into(),
        backend: C::NAME.into(),
        dim: backend.dim(),
        lie_dim: w.forms.len(),
        n,
        forms: w.forms.iter().map(|a| encode_form(backend, a)).collect(),
    }
}

pub fn decode_weak<C: Backend>(
    backend: &C,
    art: &WeakArtifact,
) -> Result<(usize, WeakComoment<C::Key>), SemanticError> {
    check_header(backend, &art.kind, "weak", &art.backend, art.dim)?;
    if art.n == 0 {
        return Err(semantic("n", "must be at least 1"));
    }
    if art.forms.len() != art.lie_dim {
        return Err(semantic(
            "forms",
            format!("{} forms, lie_dim = {}", art.forms.len(), art.lie_dim),
        ));
    }
    let forms = art
        .forms
        .iter()
        .enumerate()
        .map(|(i, t)| decode_form(backend, t, Some(art.n - 1), &format!("forms[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((art.n, WeakComoment { forms }))
}

pub fn encode_chain(chain: &Chain, lie_dim: usize) -> Vec<ChainTerm> {
    let basis = hcomoment::foundation::SubsetBasis::new(lie_dim, chain.degree);
    chain
        .coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(pos, c)| ChainTerm {
            generators: basis.get(pos).labels(),
            coeff: coeff_string(c),
        })
        .collect()
}

pub fn decode_chain(terms: &[ChainTerm], lie_dim: usize, degree: usize, path: &str) -> Result<Chain, SemanticError> {
    let basis = hcomoment::foundation::SubsetBasis::new(lie_dim, degree);
    let mut coeffs = vec![Rational::zero(); basis.len()];
    for (t, term) in terms.iter().enumerate() {
        let here = format!("{path}[{t}]");
        let set = IndexSet::from_labels(&term.generators, lie_dim)
            .map_err(|err| semantic(format!("{here}.generators"), format!("{err:?}")))?;
        let pos = basis
            .index_of(set)
            .ok_or_else(|| semantic(format!("{here}.generators"), format!("expected {degree} generators")))?;
        coeffs[pos] += parse_coeff(&term.coeff, &format!("{here}.coeff"))?;
    }
    Ok(Chain { degree, coeffs })
}

pub fn encode_multimoment<C: Backend>(backend: &C, lie_dim: usize, mm: &MultiMomentMap<C::Key>) -> MultimomentArtifact {
    MultimomentArtifact {
        kind: "multimoment".into(),
        backend: C::NAME.into(),
        dim: backend.dim(),
        lie_dim,
        n: mm.n,
        basis: mm.basis.iter().map(|c| encode_chain(c, lie_dim)).collect(),
        values: mm.values.iter().map(|v| encode_form(backend, v)).collect(),
        top: encode_bigraded(backend, &mm.top),
    }
}

pub fn decode_multimoment<C: Backend>(
    backend: &C,
    art: &MultimomentArtifact,
) -> Result<MultiMomentMap<C::Key>, SemanticError> {
    check_header(backend, &art.kind, "multimoment", &art.backend, art.dim)?;
    let n = art.n;
    if n == 0 || n > art.lie_dim {
        return Err(semantic("n", format!("expected 1..={}", art.lie_dim)));
    }
    if art.basis.len() != art.values.len() {
        return Err(semantic(
            "values",
            format!("{} values for {} basis elements", art.values.len(), art.basis.len()),
        ));
    }
    let basis = art
        .basis
        .iter()
        .enumerate()
        .map(|(b, terms)| decode_chain(terms, art.lie_dim, n, &format!("basis[{b}]")))
        .collect::<Result<Vec<_>, _>>()?;
    let values = art
        .values
        .iter()
        .enumerate()
        .map(|(b, terms)| decode_form(backend, terms, Some(0), &format!("values[{b}]")))
        .collect::<Result<Vec<Form<C::Key>>, _>>()?;
    let top = decode_bigraded(backend, &art.top, art.lie_dim, n, 0, "top")?;
    Ok(MultiMomentMap { n, basis, values, top })
}
