//! JSON presentation documents.
//!
//! ```json
//! {"x": ["a"],
//!  "models": [{"label": 1, "kind": "Z^d", "rank": 1}],
//!  "relators": [[{"x": "a", "sign": 1}, {"h": {"lambda": 1, "elem": 2}}]],
//!  "oracle": {"kind": "free_product"}}
//! ```
//!
//! Element encodings: `Z^d` models use an integer when `d = 1` and an integer
//! array otherwise; `finite` models use the element index; `F_k` models use an
//! array of signed 1-based generator indices.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::model::{Elem, FiniteTable, ModelKind, PeripheralModel};
use super::{Letter, RelativePresentation, Word};
use crate::error::{Error, Result};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    #[serde(default)]
    x: Vec<String>,
    #[serde(default)]
    models: Vec<RawModel>,
    #[serde(default)]
    relators: Vec<Vec<RawLetter>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    oracle: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    window: Option<Value>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModel {
    label: i64,
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    rank: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    table: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    inverse: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    identity: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    names: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    generators: Option<Vec<usize>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum RawLetter {
    X { x: String, sign: i64 },
    H { h: RawH },
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawH {
    lambda: i64,
    elem: Value,
}

/// A parsed presentation document: the presentation plus the optional oracle
/// and window sections, kept as raw JSON for the modules that interpret them.
#[derive(Clone, Debug, PartialEq)]
pub struct Document {
    pub presentation: RelativePresentation,
    pub oracle: Option<Value>,
    pub window: Option<Value>,
}

fn syntax_error(e: serde_json::Error) -> Error {
    Error::Parse(format!("{} at line {} column {}", e, e.line(), e.column()))
}

pub fn elem_from_json(model: &PeripheralModel, v: &Value) -> Result<Elem> {
    let bad = || Error::Parse(format!("bad element encoding {v} for model {}", model.label));
    let elem = match &model.kind {
        ModelKind::FreeAbelian { rank } => match v {
            Value::Number(n) if *rank == 1 => Elem::Abelian(vec![n.as_i64().ok_or_else(bad)?]),
            Value::Array(a) => Elem::Abelian(a.iter().map(|c| c.as_i64().ok_or_else(bad)).collect::<Result<_>>()?),
            _ => return Err(bad()),
        },
        ModelKind::FiniteTable(t) => match v {
            Value::Number(n) => Elem::Table(n.as_u64().ok_or_else(bad)? as usize),
            Value::String(s) => Elem::Table(t.index_of(s).ok_or_else(bad)?),
            _ => return Err(bad()),
        },
        ModelKind::FreeGroup { .. } => match v {
            Value::Array(a) => Elem::Free(
                a.iter()
                    .map(|c| c.as_i64().and_then(|c| i32::try_from(c).ok()).ok_or_else(bad))
                    .collect::<Result<_>>()?,
            ),
            _ => return Err(bad()),
        },
    };
    if !model.contains(&elem) {
        return Err(bad());
    }
    Ok(elem)
}

pub fn elem_to_json(model: &PeripheralModel, e: &Elem) -> Value {
    match e {
        Elem::Abelian(v) if v.len() == 1 => Value::from(v[0]),
        Elem::Abelian(v) => Value::from(v.clone()),
        Elem::Table(i) => Value::from(*i),
        Elem::Free(w) => {
            debug_assert!(matches!(model.kind, ModelKind::FreeGroup { .. }));
            Value::from(w.clone())
        }
    }
}

fn letter_from_raw(p: &RelativePresentation, raw: &RawLetter) -> Result<Letter> {
    match raw {
        RawLetter::X { x, sign } => {
            let sym = p.symbol_index(x).ok_or_else(|| Error::Parse(format!("unknown generator symbol {x:?}")))?;
            match sign {
                1 => Ok(Letter::x(sym)),
                -1 => Ok(Letter::x_inv(sym)),
                _ => Err(Error::Parse(format!("sign must be 1 or -1, got {sign}"))),
            }
        }
        RawLetter::H { h } => {
            let model = p
                .model_index(h.lambda)
                .ok_or_else(|| Error::Parse(format!("unknown model label {}", h.lambda)))?;
            let elem = elem_from_json(p.model(model), &h.elem)?;
            if p.model(model).is_identity(&elem) {
                return Err(Error::Parse(format!("identity peripheral letter in model {}", h.lambda)));
            }
            Ok(Letter::h(model, elem))
        }
    }
}

fn letter_to_raw(p: &RelativePresentation, l: &Letter) -> RawLetter {
    match l {
        Letter::X { sym, inv } => RawLetter::X { x: p.x_symbols()[*sym].clone(), sign: if *inv { -1 } else { 1 } },
        Letter::H { model, elem } => {
            let m = p.model(*model);
            RawLetter::H { h: RawH { lambda: m.label, elem: elem_to_json(m, elem) } }
        }
    }
}

pub fn letter_from_json(p: &RelativePresentation, v: &Value) -> Result<Letter> {
    let raw: RawLetter = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
    letter_from_raw(p, &raw)
}

pub fn letter_to_json(p: &RelativePresentation, l: &Letter) -> Value {
    serde_json::to_value(letter_to_raw(p, l)).expect("letters serialize")
}

/// Parses a JSON array of letter objects.
pub fn word_from_json(p: &RelativePresentation, v: &Value) -> Result<Word> {
    let raw: Vec<RawLetter> = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
    raw.iter().map(|l| letter_from_raw(p, l)).collect()
}

pub fn word_to_json(p: &RelativePresentation, w: &Word) -> Value {
    Value::Array(w.letters().iter().map(|l| letter_to_json(p, l)).collect())
}

fn model_from_raw(raw: &RawModel) -> Result<PeripheralModel> {
    let need_rank = || raw.rank.ok_or_else(|| Error::Parse(format!("model {} needs \"rank\"", raw.label)));
    let kind = match raw.kind.as_str() {
        "Z^d" => ModelKind::FreeAbelian { rank: need_rank()? },
        "F_k" => ModelKind::FreeGroup { rank: need_rank()? },
        "finite" => {
            let table = raw
                .table
                .clone()
                .ok_or_else(|| Error::Parse(format!("finite model {} needs \"table\"", raw.label)))?;
            let identity = raw.identity.unwrap_or(0);
            let inverse = match &raw.inverse {
                Some(inv) => inv.clone(),
                None => (0..table.len())
                    .map(|a| {
                        (0..table.len())
                            .find(|&b| table[a].get(b) == Some(&identity))
                            .ok_or_else(|| Error::Invalid(format!("element {a} has no inverse")))
                    })
                    .collect::<Result<_>>()?,
            };
            let names = raw.names.clone().unwrap_or_default();
            ModelKind::FiniteTable(FiniteTable::new(table, inverse, identity, names, raw.generators.clone())?)
        }
        other => return Err(Error::Parse(format!("unknown model kind {other:?}"))),
    };
    Ok(PeripheralModel { label: raw.label, kind })
}

fn model_to_raw(m: &PeripheralModel) -> RawModel {
    let mut raw = RawModel {
        label: m.label,
        kind: String::new(),
        rank: None,
        table: None,
        inverse: None,
        identity: None,
        names: None,
        generators: None,
    };
    match &m.kind {
        ModelKind::FreeAbelian { rank } => {
            raw.kind = "Z^d".into();
            raw.rank = Some(*rank);
        }
        ModelKind::FreeGroup { rank } => {
            raw.kind = "F_k".into();
            raw.rank = Some(*rank);
        }
        ModelKind::FiniteTable(t) => {
            raw.kind = "finite".into();
            raw.table = Some(t.table().to_vec());
            raw.inverse = Some(t.inverse_table().to_vec());
            raw.identity = Some(t.identity());
            raw.names = (!t.names().is_empty()).then(|| t.names().to_vec());
            raw.generators = t.declared_generators().map(<[usize]>::to_vec);
        }
    }
    raw
}

/// Parses a full presentation document, keeping the oracle and window sections raw.
pub fn parse_document(text: &str) -> Result<Document> {
    let raw: RawDocument = serde_json::from_str(text).map_err(syntax_error)?;
    let models = raw.models.iter().map(model_from_raw).collect::<Result<Vec<_>>>()?;
    let shell = RelativePresentation::new(raw.x.clone(), models.clone(), Vec::new())?;
    let relators = raw
        .relators
        .iter()
        .enumerate()
        .map(|(i, r)| {
            if r.is_empty() {
                return Err(Error::Parse(format!("relator {i} is empty")));
            }
            r.iter()
                .map(|l| letter_from_raw(&shell, l))
                .collect::<Result<Word>>()
                .map_err(|e| Error::Parse(format!("relator {i}: {e}")))
        })
        .collect::<Result<Vec<_>>>()?;
    let presentation = RelativePresentation::new(raw.x, models, relators)?;
    Ok(Document { presentation, oracle: raw.oracle, window: raw.window })
}

pub fn parse_presentation(text: &str) -> Result<RelativePresentation> {
    parse_document(text).map(|d| d.presentation)
}

impl Document {
    pub fn new(presentation: RelativePresentation) -> Self {
        Self { presentation, oracle: None, window: None }
    }

    /// Canonical JSON rendering; parsing the output yields an equal document.
    pub fn to_json(&self) -> String {
        let p = &self.presentation;
        let raw = RawDocument {
            x: p.x_symbols().to_vec(),
            models: p.models().iter().map(model_to_raw).collect(),
            relators: p
                .relators()
                .iter()
                .map(|r| r.letters().iter().map(|l| letter_to_raw(p, l)).collect())
                .collect(),
            oracle: self.oracle.clone(),
            window: self.window.clone(),
        };
        serde_json::to_string_pretty(&raw).expect("documents serialize")
    }
}
