//! Instance files.
//!
//! ```json
//! {"kind":"kgraph","k":1,"vertices":["u","v"],"matrices":[[5,2,2,3]],"allow_sources":false}
//! {"kind":"zk_action","k":1,"points":3,"permutations":[[1,2,0]]}
//! ```
//!
//! Matrices are flat and row-major. Entries are arbitrary-precision
//! integers; whether they are non-negative, commute and have no zero rows is
//! a validation question, not a schema one.

use std::collections::HashSet;
use std::str::FromStr;

use ample_homology::{BigInt, IntMatrix, KGraphSkeleton};
use serde::Serialize;
use serde_json::{Map, Number, Value};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemaError {
    #[error("{path}: invalid JSON at line {line}, column {column}: {message}")]
    Syntax {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{path}: line {line}, field `{field}`: {message}")]
    Field {
        path: String,
        line: usize,
        field: String,
        message: String,
    },
    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

/// A parsed kgraph or zk_action file. The action is kept raw so that
/// non-bijective maps surface as validation findings rather than schema
/// errors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Instance {
    KGraph(KGraphSkeleton),
    ZkAction {
        k: usize,
        points: usize,
        permutations: Vec<Vec<usize>>,
    },
}

impl Instance {
    pub fn kind(&self) -> &'static str {
        match self {
            Instance::KGraph(_) => "kgraph",
            Instance::ZkAction { .. } => "zk_action",
        }
    }

    pub fn k(&self) -> usize {
        match self {
            Instance::KGraph(s) => s.k(),
            Instance::ZkAction { k, .. } => *k,
        }
    }
}

pub fn read_instance(path: &str) -> Result<Instance, SchemaError> {
    let text = std::fs::read_to_string(path).map_err(|e| SchemaError::Io {
        path: path.to_string(),
        message: e.to_string(),
    })?;
    parse_instance(&text, path)
}

/// `origin` names the source in diagnostics.
pub fn parse_instance(text: &str, origin: &str) -> Result<Instance, SchemaError> {
    let value: Value = serde_json::from_str(text).map_err(|e| SchemaError::Syntax {
        path: origin.to_string(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    Parser { text, origin }.instance(&value)
}

struct Parser<'a> {
    text: &'a str,
    origin: &'a str,
}

impl Parser<'_> {
    fn fail(&self, field: &str, message: impl Into<String>) -> SchemaError {
        let top = field.split(['[', '.']).next().unwrap_or(field);
        SchemaError::Field {
            path: self.origin.to_string(),
            line: self.line_of(top),
            field: field.to_string(),
            message: message.into(),
        }
    }

    /// Line of the first occurrence of `"key"`, or 1 when it is absent.
    fn line_of(&self, key: &str) -> usize {
        let needle = format!("\"{key}\"");
        match self.text.find(&needle) {
            Some(at) if !key.is_empty() => self.text[..at].matches('\n').count() + 1,
            _ => 1,
        }
    }

    fn instance(&self, value: &Value) -> Result<Instance, SchemaError> {
        let obj = value
            .as_object()
            .ok_or_else(|| self.fail("", "top level must be an object"))?;
        let kind = obj
            .get("kind")
            .ok_or_else(|| self.fail("kind", "missing"))?
            .as_str()
            .ok_or_else(|| self.fail("kind", "must be a string"))?;
        match kind {
            "kgraph" => {
                self.known_keys(obj, &["kind", "k", "vertices", "matrices", "allow_sources"])?;
                self.kgraph(obj).map(Instance::KGraph)
            }
            "zk_action" => {
                self.known_keys(obj, &["kind", "k", "points", "permutations"])?;
                self.zk_action(obj)
            }
            other => Err(self.fail(
                "kind",
                format!("unknown kind {other:?}, expected \"kgraph\" or \"zk_action\""),
            )),
        }
    }

    fn known_keys(&self, obj: &Map<String, Value>, allowed: &[&str]) -> Result<(), SchemaError> {
        match obj.keys().find(|key| !allowed.contains(&key.as_str())) {
            Some(key) => Err(self.fail(key, "unknown field")),
            None => Ok(()),
        }
    }

    fn field<'v>(&self, obj: &'v Map<String, Value>, key: &str) -> Result<&'v Value, SchemaError> {
        obj.get(key).ok_or_else(|| self.fail(key, "missing"))
    }

    fn array<'v>(&self, value: &'v Value, field: &str) -> Result<&'v Vec<Value>, SchemaError> {
        value
            .as_array()
            .ok_or_else(|| self.fail(field, "must be an array"))
    }

    fn count(&self, value: &Value, field: &str) -> Result<usize, SchemaError> {
        value
            .as_u64()
            .and_then(|n| usize::try_from(n).ok())
            .ok_or_else(|| self.fail(field, "must be a non-negative integer"))
    }

    fn integer(&self, value: &Value, field: &str) -> Result<BigInt, SchemaError> {
        match value {
            // arbitrary precision keeps the literal; reject fractions and exponents
            Value::Number(n) => BigInt::from_str(&n.to_string())
                .map_err(|_| self.fail(field, format!("{n} is not an integer"))),
            _ => Err(self.fail(field, "must be an integer")),
        }
    }

    fn kgraph(&self, obj: &Map<String, Value>) -> Result<KGraphSkeleton, SchemaError> {
        let k = self.count(self.field(obj, "k")?, "k")?;
        if k == 0 {
            return Err(self.fail("k", "a k-graph needs k >= 1"));
        }
        let labels = self.array(self.field(obj, "vertices")?, "vertices")?;
        let mut vertices = Vec::with_capacity(labels.len());
        let mut seen = HashSet::new();
        for (i, label) in labels.iter().enumerate() {
            let field = format!("vertices[{i}]");
            let name = match label {
                Value::String(s) => s.clone(),
                Value::Number(n) => n.to_string(),
                _ => return Err(self.fail(&field, "labels must be strings or numbers")),
            };
            if !seen.insert(name.clone()) {
                return Err(self.fail(&field, format!("duplicate label {name:?}")));
            }
            vertices.push(name);
        }
        let n = vertices.len();
        let mats = self.array(self.field(obj, "matrices")?, "matrices")?;
        if mats.len() != k {
            return Err(self.fail(
                "matrices",
                format!(
                    "expected {k} matrices (one per colour), found {}",
                    mats.len()
                ),
            ));
        }
        let mut matrices = Vec::with_capacity(k);
        for (i, m) in mats.iter().enumerate() {
            let field = format!("matrices[{i}]");
            let flat = self.array(m, &field)?;
            if flat.len() != n * n {
                return Err(self.fail(
                    &field,
                    format!(
                        "expected {} row-major entries for {n} vertices, found {}",
                        n * n,
                        flat.len()
                    ),
                ));
            }
            let entries = flat
                .iter()
                .enumerate()
                .map(|(j, x)| self.integer(x, &format!("{field}[{j}]")))
                .collect::<Result<Vec<_>, _>>()?;
            matrices.push(IntMatrix::new(n, n, entries).expect("length checked"));
        }
        let allow_sources = match obj.get("allow_sources") {
            None => false,
            Some(v) => v
                .as_bool()
                .ok_or_else(|| self.fail("allow_sources", "must be a boolean"))?,
        };
        let skeleton = KGraphSkeleton::new(vertices, matrices).expect("shapes checked");
        Ok(skeleton.with_allow_sources(allow_sources))
    }

    fn zk_action(&self, obj: &Map<String, Value>) -> Result<Instance, SchemaError> {
        let k = self.count(self.field(obj, "k")?, "k")?;
        let points = self.count(self.field(obj, "points")?, "points")?;
        let perms = self.array(self.field(obj, "permutations")?, "permutations")?;
        if perms.len() != k {
            return Err(self.fail(
                "permutations",
                format!("expected {k} permutations, found {}", perms.len()),
            ));
        }
        let mut permutations = Vec::with_capacity(k);
        for (i, p) in perms.iter().enumerate() {
            let field = format!("permutations[{i}]");
            let images = self.array(p, &field)?;
            if images.len() != points {
                return Err(self.fail(
                    &field,
                    format!("expected {points} images, found {}", images.len()),
                ));
            }
            let images = images
                .iter()
                .enumerate()
                .map(|(j, x)| self.count(x, &format!("{field}[{j}]")))
                .collect::<Result<Vec<_>, _>>()?;
            permutations.push(images);
        }
        Ok(Instance::ZkAction {
            k,
            points,
            permutations,
        })
    }
}

/// A JSON number carrying an exact integer of any size.
pub fn number(n: &BigInt) -> Number {
    Number::from_str(&n.to_string()).expect("integers are valid JSON numbers")
}

#[derive(Serialize)]
struct KGraphFile<'a> {
    kind: &'static str,
    k: usize,
    vertices: &'a [String],
    matrices: Vec<Vec<Number>>,
    allow_sources: bool,
}

/// Pretty-printed kgraph file, keys in schema order, ending in a newline.
pub fn write_kgraph(s: &KGraphSkeleton) -> String {
    let file = KGraphFile {
        kind: "kgraph",
        k: s.k(),
        vertices: s.vertices(),
        matrices: s
            .matrices()
            .iter()
            .map(|m| m.entries().iter().map(number).collect())
            .collect(),
        allow_sources: s.allow_sources(),
    };
    let mut out = serde_json::to_string_pretty(&file).expect("serializable");
    out.push('\n');
    out
}
