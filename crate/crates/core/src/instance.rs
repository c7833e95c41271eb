//! JSON instance files.
//!
//! ```json
//! { "n": 3,
//!   "generators": [ {"a": ["1"], "b": ["0"], "c": "1/2"},
//!                   {"dense": [["1","-1","-1/2"],["0","1","0"],["0","0","1"]]} ],
//!   "meta": {"name": "inverse pair"} }
//! ```
//!
//! Entries are Gaussian-rational string literals; plain JSON integers are
//! also accepted. Serialization always writes ψ-triples in canonical literal
//! form, so a serialized instance re-parses and re-serializes byte-identically.

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::arith::{format_gaussian, parse_gaussian, Gaussian, ParseGaussianError};
use crate::matrix::{DenseMatrix, GeneratorSet, HeisenbergMatrix, MatrixError};

#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    pub generators: GeneratorSet,
    pub meta: Option<Value>,
}

#[derive(Debug, Error)]
pub enum InstanceError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{path}: {reason}")]
    Shape { path: String, reason: String },
    #[error("{path}: {source}")]
    Literal {
        path: String,
        source: ParseGaussianError,
    },
    #[error("{path}: {source}")]
    Matrix { path: String, source: MatrixError },
}

fn shape(path: impl Into<String>, reason: impl Into<String>) -> InstanceError {
    InstanceError::Shape {
        path: path.into(),
        reason: reason.into(),
    }
}

impl Instance {
    pub fn new(generators: GeneratorSet) -> Self {
        Instance {
            generators,
            meta: None,
        }
    }

    pub fn parse(text: &str) -> Result<Self, InstanceError> {
        let root: Value = serde_json::from_str(text)?;
        let obj = root
            .as_object()
            .ok_or_else(|| shape("instance", "expected a JSON object"))?;
        let n = obj
            .get("n")
            .ok_or_else(|| shape("n", "missing"))?
            .as_u64()
            .ok_or_else(|| shape("n", "expected a nonnegative integer"))? as usize;
        if n < 2 {
            return Err(shape("n", format!("dimension {n} is below 2")));
        }
        let list = obj
            .get("generators")
            .ok_or_else(|| shape("generators", "missing"))?
            .as_array()
            .ok_or_else(|| shape("generators", "expected an array"))?;
        if list.is_empty() {
            return Err(shape("generators", "at least one generator is required"));
        }
        let gens = list
            .iter()
            .enumerate()
            .map(|(k, v)| parse_generator(v, n, &format!("generators[{}]", k + 1)))
            .collect::<Result<Vec<_>, _>>()?;
        let generators = GeneratorSet::new(gens).map_err(|source| InstanceError::Matrix {
            path: "generators".into(),
            source,
        })?;
        Ok(Instance {
            generators,
            meta: obj.get("meta").cloned(),
        })
    }

    fn generator_values(&self) -> Vec<Value> {
        let lits = |zs: &[Gaussian]| zs.iter().map(format_gaussian).collect::<Vec<_>>();
        self.generators
            .iter()
            .map(|m| json!({"a": lits(m.a()), "b": lits(m.b()), "c": format_gaussian(m.c())}))
            .collect()
    }

    pub fn to_value(&self) -> Value {
        let mut obj = Map::new();
        obj.insert("n".into(), json!(self.generators.dim()));
        obj.insert("generators".into(), Value::Array(self.generator_values()));
        if let Some(meta) = &self.meta {
            obj.insert("meta".into(), meta.clone());
        }
        Value::Object(obj)
    }

    /// Canonical text: `n` first, one generator per line, trailing newline.
    pub fn to_json(&self) -> String {
        let compact = |v: &Value| serde_json::to_string(v).expect("values serialize");
        let gens: Vec<String> = self
            .generator_values()
            .iter()
            .map(|g| format!("    {}", compact(g)))
            .collect();
        let mut s = format!(
            "{{\n  \"n\": {},\n  \"generators\": [\n{}\n  ]",
            self.generators.dim(),
            gens.join(",\n")
        );
        if let Some(meta) = &self.meta {
            s.push_str(&format!(",\n  \"meta\": {}", compact(meta)));
        }
        s.push_str("\n}\n");
        s
    }
}

fn parse_literal(v: &Value, path: &str) -> Result<Gaussian, InstanceError> {
    match v {
        Value::String(s) => parse_gaussian(s).map_err(|source| InstanceError::Literal {
            path: path.to_string(),
            source,
        }),
        Value::Number(num) => match num.as_i64() {
            Some(k) => Ok(Gaussian::from_int(k)),
            None => Err(shape(
                path,
                "numbers must be integers; write fractions as strings",
            )),
        },
        _ => Err(shape(path, "expected a Gaussian-rational string")),
    }
}

fn parse_vector(v: Option<&Value>, len: usize, path: &str) -> Result<Vec<Gaussian>, InstanceError> {
    let arr = v
        .ok_or_else(|| shape(path, "missing"))?
        .as_array()
        .ok_or_else(|| shape(path, "expected an array"))?;
    if arr.len() != len {
        return Err(shape(
            path,
            format!("expected {len} entries, found {}", arr.len()),
        ));
    }
    arr.iter()
        .enumerate()
        .map(|(k, x)| parse_literal(x, &format!("{path}[{}]", k + 1)))
        .collect()
}

fn parse_generator(v: &Value, n: usize, path: &str) -> Result<HeisenbergMatrix, InstanceError> {
    let obj = v
        .as_object()
        .ok_or_else(|| shape(path, "expected an object"))?;
    if let Some(rows) = obj.get("dense") {
        let dpath = format!("{path}.dense");
        let rows = rows
            .as_array()
            .ok_or_else(|| shape(&dpath, "expected an array of rows"))?;
        if rows.len() != n {
            return Err(shape(
                &dpath,
                format!("expected {n} rows, found {}", rows.len()),
            ));
        }
        let entries = rows
            .iter()
            .enumerate()
            .map(|(r, row)| parse_vector(Some(row), n, &format!("{dpath}[{}]", r + 1)))
            .collect::<Result<Vec<_>, _>>()?;
        let matrix_err = |source| InstanceError::Matrix {
            path: dpath.clone(),
            source,
        };
        let dense = DenseMatrix::new(entries).map_err(matrix_err)?;
        return HeisenbergMatrix::from_dense(&dense).map_err(matrix_err);
    }
    let a = parse_vector(obj.get("a"), n - 2, &format!("{path}.a"))?;
    let b = parse_vector(obj.get("b"), n - 2, &format!("{path}.b"))?;
    let c = parse_literal(
        obj.get("c")
            .ok_or_else(|| shape(format!("{path}.c"), "missing"))?,
        &format!("{path}.c"),
    )?;
    HeisenbergMatrix::new(a, b, c).map_err(|source| InstanceError::Matrix {
        path: path.to_string(),
        source,
    })
}
