//! The JSON algebra file format.
//!
//! ```json
//! { "dim": 6, "field": "Q",
//!   "brackets": [ {"i": 1, "j": 2, "out": [{"k": 3, "coeff": "1"}]} ],
//!   "J": [["0","0","0","-1","0","0"], ...] }
//! ```
//!
//! Indices are 1-based; omitted pairs bracket to zero. `"@name"` in place of a
//! path refers to a catalog entry.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::acs::{AcsError, AlmostComplexStructure};
use crate::constructions::{self, ConstructionError};
use crate::lie::{LieAlgebra, LieError, StructureConstants};
use crate::linalg::{Field, GaussianRational, Matrix, Rational, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LoadError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("malformed algebra file: {0}")]
    Syntax(String),
    #[error("bad scalar {0:?}")]
    Scalar(String),
    #[error("bracket pair ({i},{j}) must satisfy i < j")]
    IndexOrder { i: usize, j: usize },
    #[error("index {index} out of range 1..={dim}")]
    IndexRange { index: usize, dim: usize },
    #[error("Jacobi identity fails: {0}")]
    Jacobi(String),
    #[error("J must be a {dim}x{dim} matrix")]
    JShape { dim: usize },
    #[error("J*J is not -I")]
    JSquare,
    #[error("an almost complex structure needs even dimension, got {0}")]
    OddDimension(usize),
    #[error("J is only supported for field Q")]
    JOverComplex,
    #[error("catalog: {0}")]
    Catalog(String),
}

impl LoadError {
    /// A stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            LoadError::Io { .. } => "io",
            LoadError::Syntax(_) => "syntax",
            LoadError::Scalar(_) => "scalar",
            LoadError::IndexOrder { .. } => "index-order",
            LoadError::IndexRange { .. } => "index-range",
            LoadError::Jacobi(_) => "jacobi",
            LoadError::JShape { .. } => "j-shape",
            LoadError::JSquare => "j-square",
            LoadError::OddDimension(_) => "odd-dimension",
            LoadError::JOverComplex => "j-field",
            LoadError::Catalog(_) => "catalog",
        }
    }
}

/// Scalars may be written as strings (`"1/2"`, `"1+i"`) or bare integers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalarText {
    Int(i64),
    Text(String),
}

impl ScalarText {
    fn parse<T: Scalar>(&self) -> Result<T, LoadError> {
        match self {
            ScalarText::Int(n) => Ok(T::from_i64(*n)),
            ScalarText::Text(t) => T::parse_text(t.trim()).map_err(|_| LoadError::Scalar(t.clone())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutTerm {
    pub k: usize,
    pub coeff: ScalarText,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketEntry {
    pub i: usize,
    pub j: usize,
    pub out: Vec<OutTerm>,
}

fn default_field() -> Field {
    Field::Rational
}

/// The on-disk representation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    pub dim: usize,
    #[serde(default = "default_field")]
    pub field: Field,
    #[serde(default)]
    pub brackets: Vec<BracketEntry>,
    #[serde(rename = "J", default, skip_serializing_if = "Option::is_none")]
    pub j: Option<Vec<Vec<ScalarText>>>,
}

/// A loaded algebra.
#[derive(Debug, Clone)]
pub enum Loaded {
    Real { algebra: LieAlgebra<Rational>, j: Option<AlmostComplexStructure> },
    Complex { algebra: LieAlgebra<GaussianRational> },
}

impl AlgebraFile {
    pub fn from_real(g: &LieAlgebra<Rational>, j: Option<&AlmostComplexStructure>) -> Self {
        let mut file = Self::from_constants(g, Field::Rational);
        file.j = j.map(|j| {
            (0..j.dim()).map(|r| j.matrix().row(r).iter().map(|x| ScalarText::Text(x.to_string())).collect()).collect()
        });
        file
    }

    pub fn from_complex(g: &LieAlgebra<GaussianRational>) -> Self {
        Self::from_constants(g, Field::GaussianRational)
    }

    fn from_constants<T: Scalar>(g: &LieAlgebra<T>, field: Field) -> Self {
        let brackets = g
            .nonzero_brackets()
            .map(|(i, j, v)| BracketEntry {
                i: i + 1,
                j: j + 1,
                out: v
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(k, c)| OutTerm { k: k + 1, coeff: ScalarText::Text(c.to_string()) })
                    .collect(),
            })
            .collect();
        AlgebraFile { dim: g.dim(), field, brackets, j: None }
    }

    fn constants<T: Scalar>(&self) -> Result<StructureConstants<T>, LoadError> {
        let n = self.dim;
        let mut c = StructureConstants::zero(n);
        let check = |index: usize| {
            if index == 0 || index > n {
                Err(LoadError::IndexRange { index, dim: n })
            } else {
                Ok(index - 1)
            }
        };
        for b in &self.brackets {
            let (i, j) = (check(b.i)?, check(b.j)?);
            if i >= j {
                return Err(LoadError::IndexOrder { i: b.i, j: b.j });
            }
            for t in &b.out {
                let k = check(t.k)?;
                let v: T = t.coeff.parse()?;
                c.add_bracket(i, j, k, v).expect("indices validated");
            }
        }
        Ok(c)
    }

    pub fn into_loaded(self) -> Result<Loaded, LoadError> {
        let jacobi = |e: LieError| match e {
            LieError::Jacobi(v) => LoadError::Jacobi(v[0].to_string()),
            other => LoadError::Syntax(other.to_string()),
        };
        match self.field {
            Field::GaussianRational => {
                if self.j.is_some() {
                    return Err(LoadError::JOverComplex);
                }
                let algebra = LieAlgebra::new(self.constants::<GaussianRational>()?).map_err(jacobi)?;
                Ok(Loaded::Complex { algebra })
            }
            Field::Rational => {
                let c = self.constants::<Rational>()?;
                let j = match &self.j {
                    None => None,
                    Some(rows) => {
                        if self.dim % 2 == 1 {
                            return Err(LoadError::OddDimension(self.dim));
                        }
                        if rows.len() != self.dim || rows.iter().any(|r| r.len() != self.dim) {
                            return Err(LoadError::JShape { dim: self.dim });
                        }
                        let parsed = rows
                            .iter()
                            .map(|r| r.iter().map(|x| x.parse::<Rational>()).collect::<Result<Vec<_>, _>>())
                            .collect::<Result<Vec<_>, _>>()?;
                        let m = Matrix::from_rows(parsed).map_err(|_| LoadError::JShape { dim: self.dim })?;
                        Some(AlmostComplexStructure::new(m).map_err(|e| match e {
                            AcsError::OddDimension(n) => LoadError::OddDimension(n),
                            _ => LoadError::JSquare,
                        })?)
                    }
                };
                let algebra = LieAlgebra::new(c).map_err(jacobi)?;
                Ok(Loaded::Real { algebra, j })
            }
        }
    }
}

/// Parses algebra JSON text.
pub fn parse_algebra(text: &str) -> Result<Loaded, LoadError> {
    let file: AlgebraFile = serde_json::from_str(text).map_err(|e| LoadError::Syntax(e.to_string()))?;
    file.into_loaded()
}

/// Loads `@name` from the catalog, or a JSON file.
pub fn load(source: &str) -> Result<Loaded, LoadError> {
    if let Some(name) = source.strip_prefix('@') {
        let e = constructions::catalog(name).map_err(|e: ConstructionError| LoadError::Catalog(e.to_string()))?;
        return Ok(Loaded::Real { algebra: e.algebra, j: e.j });
    }
    let text = std::fs::read_to_string(Path::new(source))
        .map_err(|e| LoadError::Io { path: source.to_string(), message: e.to_string() })?;
    parse_algebra(&text)
}

/// Pretty JSON for a real algebra with optional `J`.
pub fn write_real(g: &LieAlgebra<Rational>, j: Option<&AlmostComplexStructure>) -> String {
    serde_json::to_string_pretty(&AlgebraFile::from_real(g, j)).expect("serializable")
}

/// Pretty JSON for an algebra over Q(i).
pub fn write_complex(g: &LieAlgebra<GaussianRational>) -> String {
    serde_json::to_string_pretty(&AlgebraFile::from_complex(g)).expect("serializable")
}

/// Reads a square matrix of scalars from JSON (`[["1","0"],["0","1"]]`).
pub fn parse_matrix<T: Scalar>(text: &str) -> Result<Matrix<T>, LoadError> {
    let rows: Vec<Vec<ScalarText>> = serde_json::from_str(text).map_err(|e| LoadError::Syntax(e.to_string()))?;
    let parsed = rows
        .iter()
        .map(|r| r.iter().map(ScalarText::parse).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    Matrix::from_rows(parsed).map_err(|e| LoadError::Syntax(e.to_string()))
}

/// Rows of a matrix as scalar text.
pub fn matrix_rows<T: Scalar>(m: &Matrix<T>) -> Vec<Vec<String>> {
    (0..m.rows()).map(|r| m.row(r).iter().map(|x| x.to_string()).collect()).collect()
}
