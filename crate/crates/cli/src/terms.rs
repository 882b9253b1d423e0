//! Term-list encoding of forms, polynomials and vector fields, plus the
//! human-readable rendering used in reports.
//!
//! All indices in files are one-based. A form term is
//! `{indices = [i1, ..., ik], exponents = [a1, ..., am], coeff = "p/q"}` with
//! strictly increasing indices; `exponents` is present only on the Euclidean
//! backend, where it is the monomial `x1^a1 ... xm^am` multiplying
//! `dx_i1 ∧ ... ∧ dx_ik`.

use std::cmp::Ordering;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use hcomoment::cartan::{Cartan, Euclidean, Form, Invariant, Poly, PolyTerm, PolyVectorField};
use hcomoment::foundation::{format_rational, parse_rational, IndexSet, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermRecord {
    pub indices: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exponents: Option<Vec<u32>>,
    pub coeff: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonomialRecord {
    pub exponents: Vec<u32>,
    pub coeff: String,
}

/// A vector field: per-coordinate polynomials on the Euclidean backend, an
/// element of the Lie algebra on the invariant backend.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldRecord {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub components: Option<Vec<Vec<MonomialRecord>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub element: Option<Vec<String>>,
}

/// A well-formed file with meaningless content, located by key path.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{path}: {message}")]
pub struct SemanticError {
    pub path: String,
    pub message: String,
}

pub fn semantic(path: impl Into<String>, message: impl Into<String>) -> SemanticError {
    SemanticError {
        path: path.into(),
        message: message.into(),
    }
}

pub fn parse_coeff(s: &str, path: &str) -> Result<Rational, SemanticError> {
    parse_rational(s).map_err(|_| semantic(path, format!("not a rational number: {s:?}")))
}

pub fn coeff_string(q: &Rational) -> String {
    format_rational(q)
}

fn check_indices(indices: &[usize], dim: usize, path: &str) -> Result<IndexSet, SemanticError> {
    for (pos, &i) in indices.iter().enumerate() {
        if i == 0 || i > dim {
            return Err(semantic(
                format!("{path}.indices[{pos}]"),
                format!("index {i} outside 1..={dim}"),
            ));
        }
        if pos > 0 && indices[pos - 1] >= i {
            return Err(semantic(
                format!("{path}.indices"),
                "indices must be strictly increasing",
            ));
        }
    }
    Ok(IndexSet::from_indices(indices.iter().map(|i| i - 1)))
}

fn check_exponents(exponents: &[u32], dim: usize, path: &str) -> Result<(), SemanticError> {
    if exponents.len() != dim {
        return Err(semantic(
            format!("{path}.exponents"),
            format!("{} exponents given, the backend has dimension {dim}", exponents.len()),
        ));
    }
    Ok(())
}

/// Coordinate names `x, y, z` in dimension at most three, `x1, x2, ...`
/// otherwise.
pub fn variable(dim: usize, i: usize) -> String {
    if dim <= 3 {
        ["x", "y", "z"][i].to_string()
    } else {
        format!("x{}", i + 1)
    }
}

/// A backend whose keys, fields and points can be read from and written to
/// problem and artifact files.
pub trait Backend: Cartan + Clone {
    const NAME: &'static str;

    fn decode_key(&self, rec: &TermRecord, path: &str) -> Result<Self::Key, SemanticError>;
    fn encode_key(&self, key: &Self::Key) -> (Vec<usize>, Option<Vec<u32>>);
    fn decode_field(&self, rec: &FieldRecord, path: &str) -> Result<Self::Field, SemanticError>;
    fn encode_field(&self, v: &Self::Field) -> FieldRecord;

    /// Factors of a basis key for display, e.g. `["x^2", "dy∧dz"]`.
    fn key_factors(&self, key: &Self::Key) -> Vec<String>;
    /// Order in which terms are displayed.
    fn display_cmp(&self, a: &Self::Key, b: &Self::Key) -> Ordering {
        a.cmp(b)
    }
    fn show_field(&self, v: &Self::Field) -> String;
}

impl Backend for Euclidean {
    const NAME: &'static str = "euclidean";

    fn decode_key(&self, rec: &TermRecord, path: &str) -> Result<PolyTerm, SemanticError> {
        let dx = check_indices(&rec.indices, self.dim(), path)?;
        let Some(exp) = &rec.exponents else {
            return Err(semantic(
                format!("{path}.exponents"),
                "missing (required on the euclidean backend)",
            ));
        };
        check_exponents(exp, self.dim(), path)?;
        Ok(PolyTerm { dx, exp: exp.clone() })
    }

    fn encode_key(&self, key: &PolyTerm) -> (Vec<usize>, Option<Vec<u32>>) {
        (key.dx.labels(), Some(key.exp.clone()))
    }

    fn decode_field(&self, rec: &FieldRecord, path: &str) -> Result<PolyVectorField, SemanticError> {
        if rec.element.is_some() {
            return Err(semantic(
                format!("{path}.element"),
                "only allowed on the invariant backend",
            ));
        }
        let Some(comps) = &rec.components else {
            return Err(semantic(format!("{path}.components"), "missing"));
        };
        let m = self.dim();
        if comps.len() != m {
            return Err(semantic(
                format!("{path}.components"),
                format!("{} components given, the backend has dimension {m}", comps.len()),
            ));
        }
        let mut polys = Vec::with_capacity(m);
        for (c, terms) in comps.iter().enumerate() {
            let mut p = Poly::zero(m);
            for (t, rec) in terms.iter().enumerate() {
                let here = format!("{path}.components[{c}][{t}]");
                check_exponents(&rec.exponents, m, &here)?;
                let q = parse_coeff(&rec.coeff, &format!("{here}.coeff"))?;
                p.add_term(rec.exponents.clone(), &q);
            }
            polys.push(p);
        }
        Ok(PolyVectorField::new(polys))
    }

    fn encode_field(&self, v: &PolyVectorField) -> FieldRecord {
        FieldRecord {
            components: Some(
                v.components()
                    .iter()
                    .map(|p| {
                        p.terms()
                            .iter()
                            .map(|(e, c)| MonomialRecord {
                                exponents: e.clone(),
                                coeff: coeff_string(c),
                            })
                            .collect()
                    })
                    .collect(),
            ),
            element: None,
        }
    }

    fn key_factors(&self, key: &PolyTerm) -> Vec<String> {
        let m = self.dim();
        let mut out: Vec<String> = key
            .exp
            .iter()
            .enumerate()
            .filter(|(_, &a)| a > 0)
            .map(|(i, &a)| {
                if a == 1 {
                    variable(m, i)
                } else {
                    format!("{}^{a}", variable(m, i))
                }
            })
            .collect();
        if !key.dx.is_empty() {
            let dx: Vec<String> = key.dx.iter().map(|i| format!("d{}", variable(m, i))).collect();
            out.push(dx.join("∧"));
        }
        out
    }

    /// Form part first, then higher total degree, then larger exponents.
    fn display_cmp(&self, a: &PolyTerm, b: &PolyTerm) -> Ordering {
        let deg = |t: &PolyTerm| t.exp.iter().map(|&e| e as usize).sum::<usize>();
        a.dx.cmp(&b.dx)
            .then_with(|| deg(b).cmp(&deg(a)))
            .then_with(|| b.exp.cmp(&a.exp))
    }

    fn show_field(&self, v: &PolyVectorField) -> String {
        let parts: Vec<String> = v
            .components()
            .iter()
            .map(|p| {
                let f = self.function(p);
                show_form(self, &f)
            })
            .collect();
        format!("({})", parts.join(", "))
    }
}

impl Backend for Invariant {
    const NAME: &'static str = "invariant";

    fn decode_key(&self, rec: &TermRecord, path: &str) -> Result<IndexSet, SemanticError> {
        if rec.exponents.is_some() {
            return Err(semantic(
                format!("{path}.exponents"),
                "only allowed on the euclidean backend",
            ));
        }
        check_indices(&rec.indices, self.dim(), path)
    }

    fn encode_key(&self, key: &IndexSet) -> (Vec<usize>, Option<Vec<u32>>) {
        (key.labels(), None)
    }

    fn decode_field(&self, rec: &FieldRecord, path: &str) -> Result<Vec<Rational>, SemanticError> {
        if rec.components.is_some() {
            return Err(semantic(
                format!("{path}.components"),
                "only allowed on the euclidean backend",
            ));
        }
        let Some(el) = &rec.element else {
            return Err(semantic(format!("{path}.element"), "missing"));
        };
        if el.len() != self.dim() {
            return Err(semantic(
                format!("{path}.element"),
                format!(
                    "{} coordinates given, the backend has dimension {}",
                    el.len(),
                    self.dim()
                ),
            ));
        }
        el.iter()
            .enumerate()
            .map(|(i, s)| parse_coeff(s, &format!("{path}.element[{i}]")))
            .collect()
    }

    fn encode_field(&self, v: &Vec<Rational>) -> FieldRecord {
        FieldRecord {
            components: None,
            element: Some(v.iter().map(coeff_string).collect()),
        }
    }

    fn key_factors(&self, key: &IndexSet) -> Vec<String> {
        if key.is_empty() {
            return Vec::new();
        }
        let parts: Vec<String> = key.iter().map(|i| format!("ε{}", i + 1)).collect();
        vec![parts.join("∧")]
    }

    fn show_field(&self, v: &Vec<Rational>) -> String {
        show_vector(v)
    }
}

pub fn show_vector(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(coeff_string).collect();
    format!("({})", parts.join(", "))
}

/// Read a term list into a form. All terms must have the same degree; the
/// degree of an empty list is `degree` (or zero when unspecified).
pub fn decode_form<C: Backend>(
    backend: &C,
    terms: &[TermRecord],
    degree: Option<usize>,
    path: &str,
) -> Result<Form<C::Key>, SemanticError> {
    let deg = degree.or_else(|| terms.first().map(|t| t.indices.len())).unwrap_or(0);
    let mut out = Form::zero(deg);
    for (t, rec) in terms.iter().enumerate() {
        let here = format!("{path}[{t}]");
        let key = backend.decode_key(rec, &here)?;
        if rec.indices.len() != deg {
            return Err(semantic(
                format!("{here}.indices"),
                format!("term of degree {}, expected degree {deg}", rec.indices.len()),
            ));
        }
        let c = parse_coeff(&rec.coeff, &format!("{here}.coeff"))?;
        out.add_term(key, &c);
    }
    Ok(out)
}

pub fn encode_form<C: Backend>(backend: &C, a: &Form<C::Key>) -> Vec<TermRecord> {
    a.terms()
        .iter()
        .map(|(k, c)| {
            let (indices, exponents) = backend.encode_key(k);
            TermRecord {
                indices,
                exponents,
                coeff: coeff_string(c),
            }
        })
        .collect()
}

/// `-1/2·x^2·dz + y·dx∧dy`, or `0`.
pub fn show_form<C: Backend>(backend: &C, a: &Form<C::Key>) -> String {
    let mut terms: Vec<(&C::Key, &Rational)> = a.terms().iter().collect();
    terms.sort_by(|x, y| backend.display_cmp(x.0, y.0));
    show_terms(terms.into_iter().map(|(k, c)| (backend.key_factors(k), c.clone())))
}

/// Join `(factors, coefficient)` pairs into a signed sum.
pub fn show_terms<I: IntoIterator<Item = (Vec<String>, Rational)>>(terms: I) -> String {
    let mut out = String::new();
    for (factors, c) in terms {
        if c.is_zero() {
            continue;
        }
        let negative = c.is_negative();
        let abs = c.abs();
        let body = if factors.is_empty() {
            coeff_string(&abs)
        } else if abs.is_one() {
            factors.join("·")
        } else {
            format!("{}·{}", coeff_string(&abs), factors.join("·"))
        };
        match (out.is_empty(), negative) {
            (true, false) => out.push_str(&body),
            (true, true) => {
                out.push('-');
                out.push_str(&body);
            }
            (false, false) => {
                out.push_str(" + ");
                out.push_str(&body);
            }
            (false, true) => {
                out.push_str(" - ");
                out.push_str(&body);
            }
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// `e1∧e2` for a zero-based index set.
pub fn wedge_label(set: IndexSet) -> String {
    if set.is_empty() {
        return "1".to_string();
    }
    let parts: Vec<String> = set.iter().map(|i| format!("e{}", i + 1)).collect();
    parts.join("∧")
}
