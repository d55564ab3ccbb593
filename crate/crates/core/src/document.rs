//! JSON documents for spaces, soft sets and mappings.
//!
//! A space document lists the universe, the parameters and the opens; each
//! open maps parameter names to point names. A parameter left out of an
//! open has an empty row. Emitted documents list every parameter in order.

use std::sync::Arc;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::context::{bits, Context};
use crate::error::{Error, Result};
use crate::mapping::SoftMapping;
use crate::soft_set::SoftSet;
use crate::topology::SoftSpace;

/// Parameter name → point names.
pub type SetDocument = IndexMap<String, Vec<String>>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OpenDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub sets: SetDocument,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceDocument {
    pub universe: Vec<String>,
    pub params: Vec<String>,
    pub opens: Vec<OpenDocument>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MappingDocument {
    pub u: IndexMap<String, String>,
    pub p: IndexMap<String, String>,
}

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Document(e.to_string()))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("documents always serialize");
    out.push('\n');
    out
}

/// Read a soft set, rejecting repeated points.
pub fn set_from_document(ctx: &Arc<Context>, doc: &SetDocument) -> Result<SoftSet> {
    let mut rows = vec![0u64; ctx.n_params()];
    for (param, points) in doc {
        let e = ctx.param(param)?;
        for p in points {
            let bit = 1u64 << ctx.point(p)?;
            if rows[e] & bit != 0 {
                return Err(Error::MalformedSet(format!(
                    "point `{p}` listed twice under `{param}`"
                )));
            }
            rows[e] |= bit;
        }
    }
    SoftSet::from_rows(ctx, rows)
}

pub fn set_to_document(f: &SoftSet) -> SetDocument {
    let ctx = f.context();
    f.rows()
        .iter()
        .enumerate()
        .map(|(e, &row)| {
            let points = bits(row).map(|x| ctx.point_name(x).to_string()).collect();
            (ctx.param_name(e).to_string(), points)
        })
        .collect()
}

impl SpaceDocument {
    pub fn parse(text: &str) -> Result<SpaceDocument> {
        parse_json(text)
    }

    pub fn to_json(&self) -> String {
        to_json(self)
    }

    pub fn context(&self) -> Result<Arc<Context>> {
        Context::new(self.universe.iter().cloned(), self.params.iter().cloned())
    }

    /// Context and opens as written, without checking the topology axioms.
    pub fn family(&self) -> Result<SoftSpace> {
        let ctx = self.context()?;
        let opens = self
            .opens
            .iter()
            .map(|o| set_from_document(&ctx, &o.sets))
            .collect::<Result<Vec<_>>>()?;
        SoftSpace::from_opens(&ctx, opens)
    }

    /// A validated space.
    pub fn space(&self) -> Result<SoftSpace> {
        let family = self.family()?;
        let violations = family.validate();
        if violations.is_empty() {
            Ok(family)
        } else {
            Err(Error::InvalidTopology(violations))
        }
    }

    pub fn from_space(space: &SoftSpace) -> SpaceDocument {
        let ctx = space.context();
        SpaceDocument {
            universe: ctx.points().to_vec(),
            params: ctx.params().to_vec(),
            opens: space
                .opens()
                .iter()
                .map(|f| OpenDocument {
                    name: None,
                    sets: set_to_document(f),
                })
                .collect(),
        }
    }
}

impl MappingDocument {
    pub fn parse(text: &str) -> Result<MappingDocument> {
        parse_json(text)
    }

    pub fn to_json(&self) -> String {
        to_json(self)
    }

    pub fn mapping(&self, source: &Arc<Context>, target: &Arc<Context>) -> Result<SoftMapping> {
        let points: Vec<(&str, &str)> = self.u.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        let params: Vec<(&str, &str)> = self.p.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        SoftMapping::from_names(source, target, &points, &params)
    }

    pub fn from_mapping(f: &SoftMapping) -> MappingDocument {
        let (s, t) = (f.source(), f.target());
        MappingDocument {
            u: f.point_map()
                .iter()
                .enumerate()
                .map(|(x, &v)| (s.point_name(x).to_string(), t.point_name(v).to_string()))
                .collect(),
            p: f.param_map()
                .iter()
                .enumerate()
                .map(|(a, &b)| (s.param_name(a).to_string(), t.param_name(b).to_string()))
                .collect(),
        }
    }
}
