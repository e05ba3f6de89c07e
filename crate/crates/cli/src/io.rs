//! Point-set text files and network JSON.

use std::fs;
use std::path::Path;

use capacity_core::{CapacityError, LayeredNetwork, PointSet, Rational, ThresholdMap, ThresholdUnit};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// `cube:n`, or a path to a points file.
pub fn load_point_set(source: &str) -> Result<PointSet, CliError> {
    if let Some(n) = source.strip_prefix("cube:") {
        let n: usize = n
            .trim()
            .parse()
            .map_err(|_| CliError::Input(format!("bad cube dimension in {source:?}")))?;
        if n > 24 {
            return Err(CliError::Input(format!("cube:{n} is too large to list")));
        }
        return Ok(PointSet::cube(n));
    }
    let text = fs::read_to_string(source).map_err(|e| CliError::Input(format!("{source}: {e}")))?;
    parse_points(&text)
}

/// One point per line, whitespace-separated coordinates written as
/// integers or `p/q`; `#` starts a comment.
pub fn parse_points(text: &str) -> Result<PointSet, CliError> {
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    let mut lines = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let row = line
            .split_whitespace()
            .map(|tok| parse_rational(tok).map_err(|m| CliError::Input(format!("line {}: {m}", i + 1))))
            .collect::<Result<Vec<_>, _>>()?;
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(CliError::Input(format!(
                    "line {}: expected {} coordinates, found {}",
                    i + 1,
                    first.len(),
                    row.len()
                )));
            }
        }
        rows.push(row);
        lines.push(i + 1);
    }
    if rows.is_empty() {
        return Err(CliError::Input("points file has no points".into()));
    }
    let dim = rows[0].len();
    PointSet::new(dim, rows).map_err(|e| match e {
        CapacityError::DuplicatePoint { index } => {
            CliError::Input(format!("line {}: duplicate point", lines[index]))
        }
        other => CliError::Core(other),
    })
}

pub fn parse_rational(tok: &str) -> Result<Rational, String> {
    let value: Rational = tok
        .parse()
        .map_err(|_| format!("cannot parse {tok:?} as an integer or p/q"))?;
    Ok(value)
}

/// Comma-separated layer sizes such as `3,2,1`.
pub fn parse_sizes(text: &str) -> Result<Vec<usize>, CliError> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| CliError::Input(format!("bad layer size {t:?} in {text:?}")))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitJson {
    pub weights: Vec<String>,
    pub bias: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayerJson {
    pub units: Vec<UnitJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetworkJson {
    pub architecture: Vec<usize>,
    pub layers: Vec<LayerJson>,
}

impl NetworkJson {
    pub fn from_network(net: &LayeredNetwork) -> Self {
        Self {
            architecture: net.architecture().sizes().to_vec(),
            layers: net
                .layers()
                .iter()
                .map(|layer| LayerJson {
                    units: layer.units().iter().map(unit_json).collect(),
                })
                .collect(),
        }
    }

    pub fn to_network(&self) -> Result<LayeredNetwork, CliError> {
        let mut width = *self
            .architecture
            .first()
            .ok_or_else(|| CliError::Input("network architecture is empty".into()))?;
        let mut maps = Vec::with_capacity(self.layers.len());
        for (l, layer) in self.layers.iter().enumerate() {
            let units = layer
                .units
                .iter()
                .enumerate()
                .map(|(u, unit)| {
                    let at = |m: String| CliError::Input(format!("layer {l}, unit {u}: {m}"));
                    let weights = unit
                        .weights
                        .iter()
                        .map(|w| parse_rational(w))
                        .collect::<Result<Vec<_>, _>>()
                        .map_err(at)?;
                    let bias = parse_rational(&unit.bias).map_err(at)?;
                    Ok(ThresholdUnit::new(weights, bias))
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            let map = ThresholdMap::new(width, units)?;
            width = map.output_dim();
            maps.push(map);
        }
        let net = LayeredNetwork::new(maps)?;
        if net.architecture().sizes() != self.architecture.as_slice() {
            return Err(CliError::Input(format!(
                "declared architecture {:?} does not match layers {}",
                self.architecture,
                net.architecture()
            )));
        }
        Ok(net)
    }
}

fn unit_json(unit: &ThresholdUnit) -> UnitJson {
    UnitJson {
        weights: unit.weights().iter().map(|w| w.to_string()).collect(),
        bias: unit.bias().to_string(),
    }
}

pub fn load_network(path: &Path) -> Result<LayeredNetwork, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let doc: NetworkJson = serde_json::from_str(&text)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    doc.to_network()
}
