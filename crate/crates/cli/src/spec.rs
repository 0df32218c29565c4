//! The group specification document accepted by every subcommand.

use serde::Deserialize;
use serde_json::Value;

use wonder_core::group::{FiniteMatrixGroup, DEFAULT_GROUP_ORDER_CAP, DEFAULT_SUBGROUP_ORDER_CAP};
use wonder_core::linalg::RatMatrix;
use wonder_core::presets;
use wonder_core::stratification::LinearGModel;
use wonder_core::WonderError;

pub const DEFAULT_SEED: u64 = 7;
pub const DEFAULT_SAMPLES: usize = 1000;
pub const DEFAULT_CHAIN_SIZE: usize = 16;

#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Caps {
    pub group_order: Option<usize>,
    pub subgroup_order: Option<usize>,
    pub chain_size: Option<usize>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
}

impl Caps {
    pub fn group_order(&self) -> usize {
        self.group_order.unwrap_or(DEFAULT_GROUP_ORDER_CAP)
    }

    pub fn subgroup_order(&self) -> usize {
        self.subgroup_order.unwrap_or(DEFAULT_SUBGROUP_ORDER_CAP)
    }

    pub fn chain_size(&self) -> usize {
        self.chain_size.unwrap_or(DEFAULT_CHAIN_SIZE)
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    name: Option<String>,
    dimension: Option<usize>,
    generators: Option<Vec<RatMatrix>>,
    preset: Option<String>,
    #[serde(default)]
    params: Value,
    #[serde(default)]
    caps: Caps,
}

pub struct GroupSpec {
    pub model: LinearGModel,
    pub caps: Caps,
}

/// Parses a document; errors carry the line and column from the JSON parser.
pub fn parse_document(text: &str) -> Result<GroupSpec, WonderError> {
    let raw: RawDocument = serde_json::from_str(text).map_err(|e| WonderError::Parse(e.to_string()))?;
    let caps = raw.caps;
    let model = match (raw.preset, raw.dimension, raw.generators) {
        (Some(p), None, None) => {
            let m = presets::preset(&p, &raw.params)?;
            if m.group.order() > caps.group_order() {
                return Err(WonderError::CapExceeded {
                    what: "group order",
                    cap: caps.group_order(),
                });
            }
            m
        }
        (None, Some(dim), Some(gens)) => {
            for (i, g) in gens.iter().enumerate() {
                if g.rows() != dim || g.cols() != dim {
                    return Err(WonderError::Dimension(format!(
                        "generator {i} is {}x{}, expected {dim}x{dim}",
                        g.rows(),
                        g.cols()
                    )));
                }
            }
            let group = FiniteMatrixGroup::close_generators(dim, &gens, caps.group_order())?;
            LinearGModel::new(raw.name.unwrap_or_else(|| format!("custom(dim {dim})")), group)
        }
        _ => {
            return Err(WonderError::Parse(
                "a document needs either \"preset\" (with optional \"params\") or \"dimension\" and \"generators\""
                    .into(),
            ))
        }
    };
    Ok(GroupSpec { model, caps })
}

pub fn from_preset_expr(expr: &str) -> Result<GroupSpec, WonderError> {
    Ok(GroupSpec {
        model: presets::preset_from_expr(expr)?,
        caps: Caps::default(),
    })
}

/// A JSON list of generator sets, each a list of square rational-string matrices.
pub fn parse_generator_sets(text: &str) -> Result<Vec<Vec<RatMatrix>>, WonderError> {
    serde_json::from_str(text).map_err(|e| WonderError::Parse(e.to_string()))
}
