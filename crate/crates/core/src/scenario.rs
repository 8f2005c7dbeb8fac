//! Scenario files: the JSON input format shared by the command-line tool
//! and the tests. Atoms, generators and the cone kind describe a payoff
//! cone; an optional `product` block turns the scenario into a coupling
//! problem, with atom labels of the form `"row|col"`.

use serde::{Deserialize, Serialize};
use std::sync::Arc;
use thiserror::Error;

use crate::marginals::{MarginalError, MarginalPair, ProductSpace};
use crate::rational::{parse_rational, ParseRationalError, Rational};
use crate::space::{
    ConeKind, ConeSpec, FiniteProbSpace, RandomVariable, SpaceError,
};

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("unreadable scenario: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed scenario: {0}")]
    Json(#[from] serde_json::Error),
    #[error("atom `{label}`: {source}")]
    AtomWeight {
        label: String,
        source: ParseRationalError,
    },
    #[error("generator `{name}`, value {index}: {source}")]
    GeneratorValue {
        name: String,
        index: usize,
        source: ParseRationalError,
    },
    #[error("cone_kind `{0}` is neither \"cone\" nor \"linear\"")]
    ConeKind(String),
    #[error("marginal1 entry {index}: {source}")]
    Marginal1 {
        index: usize,
        source: ParseRationalError,
    },
    #[error("marginal2 entry {index}: {source}")]
    Marginal2 {
        index: usize,
        source: ParseRationalError,
    },
    #[error("atom `{0}` is not of the form \"row|col\"")]
    NotACell(String),
    #[error("atom `{0}` names an unknown row or column")]
    UnknownCell(String),
    #[error("duplicate atom for cell `{0}`")]
    DuplicateCell(String),
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Marginal(#[from] MarginalError),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AtomSpec {
    pub label: String,
    pub weight: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub name: String,
    pub values: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProductBlock {
    pub rows: Vec<String>,
    pub cols: Vec<String>,
    pub marginal1: Vec<String>,
    pub marginal2: Vec<String>,
}

/// The raw file shape; `build` turns it into validated domain objects.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScenarioFile {
    pub atoms: Vec<AtomSpec>,
    #[serde(default)]
    pub generators: Vec<GeneratorSpec>,
    pub cone_kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub product: Option<ProductBlock>,
}

/// A validated scenario: the probability space and payoff cone, plus the
/// coupling problem when a `product` block was present.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub space: Arc<FiniteProbSpace>,
    pub cone: ConeSpec,
    pub generator_names: Vec<String>,
    pub coupling: Option<(ProductSpace, MarginalPair)>,
}

impl ScenarioFile {
    pub fn from_str(text: &str) -> Result<ScenarioFile, ScenarioError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn from_path(path: &std::path::Path) -> Result<ScenarioFile, ScenarioError> {
        Self::from_str(&std::fs::read_to_string(path)?)
    }

    pub fn build(&self) -> Result<Scenario, ScenarioError> {
        let kind = match self.cone_kind.as_str() {
            "cone" => ConeKind::ConvexCone,
            "linear" => ConeKind::LinearSpace,
            other => return Err(ScenarioError::ConeKind(other.to_string())),
        };
        let mut labels = Vec::with_capacity(self.atoms.len());
        let mut weights = Vec::with_capacity(self.atoms.len());
        for atom in &self.atoms {
            labels.push(atom.label.clone());
            weights.push(parse_rational(&atom.weight).map_err(|source| {
                ScenarioError::AtomWeight {
                    label: atom.label.clone(),
                    source,
                }
            })?);
        }
        let space = FiniteProbSpace::new(labels, weights)?;
        let mut generators = Vec::with_capacity(self.generators.len());
        let mut generator_names = Vec::with_capacity(self.generators.len());
        for g in &self.generators {
            let values = g
                .values
                .iter()
                .enumerate()
                .map(|(index, v)| {
                    parse_rational(v).map_err(|source| ScenarioError::GeneratorValue {
                        name: g.name.clone(),
                        index,
                        source,
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            generators.push(RandomVariable::new(&space, values)?);
            generator_names.push(g.name.clone());
        }
        let cone = ConeSpec::new(&space, generators, kind)?;
        let coupling = match &self.product {
            Some(block) => Some(build_coupling(block, &space)?),
            None => None,
        };
        Ok(Scenario {
            space,
            cone,
            generator_names,
            coupling,
        })
    }
}

fn build_coupling(
    block: &ProductBlock,
    space: &Arc<FiniteProbSpace>,
) -> Result<(ProductSpace, MarginalPair), ScenarioError> {
    let row_of = |name: &str| block.rows.iter().position(|r| r == name);
    let col_of = |name: &str| block.cols.iter().position(|c| c == name);
    let mut grid = vec![vec![Rational::from_integer(0.into()); block.cols.len()]; block.rows.len()];
    for (a, label) in space.labels().iter().enumerate() {
        let (row, col) = label
            .split_once('|')
            .ok_or_else(|| ScenarioError::NotACell(label.clone()))?;
        let (i, j) = match (row_of(row), col_of(col)) {
            (Some(i), Some(j)) => (i, j),
            _ => return Err(ScenarioError::UnknownCell(label.clone())),
        };
        if !num_traits::Zero::is_zero(&grid[i][j]) {
            return Err(ScenarioError::DuplicateCell(label.clone()));
        }
        grid[i][j] = space.weight(a).clone();
    }
    let ps = ProductSpace::new(block.rows.clone(), block.cols.clone(), grid)?;
    let t1 = block
        .marginal1
        .iter()
        .enumerate()
        .map(|(index, v)| {
            parse_rational(v).map_err(|source| ScenarioError::Marginal1 { index, source })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let t2 = block
        .marginal2
        .iter()
        .enumerate()
        .map(|(index, v)| {
            parse_rational(v).map_err(|source| ScenarioError::Marginal2 { index, source })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let pair = MarginalPair::new(&ps, t1, t2)?;
    Ok((ps, pair))
}
