//! JSON scenario files.

use std::collections::BTreeMap;
use std::sync::Arc;

use crformal_core::context::{Coords, Ctx};
use crformal_core::manifold::Manifold;
use crformal_core::mapping::FormalMapPair;
use crformal_core::series::Series;
use serde::{Deserialize, Serialize};

use crate::error::InputError;
use crate::parse::parse_expression;

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct Scenario {
    pub n: usize,
    pub d: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cutoff: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default)]
    pub manifolds: BTreeMap<String, ManifoldSpec>,
    #[serde(default)]
    pub maps: BTreeMap<String, MapSpec>,
    #[serde(default)]
    pub requests: Vec<Request>,
}

/// Either `{"Q": [...]}` in normal coordinates or
/// `{"defining": [...], "wSplit": [...]}`.
#[derive(Clone, Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ManifoldSpec {
    #[serde(rename = "Q", default, skip_serializing_if = "Option::is_none")]
    pub q: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub defining: Option<Vec<String>>,
    #[serde(rename = "wSplit", default, skip_serializing_if = "Option::is_none")]
    pub w_split: Option<Vec<String>>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct MapSpec {
    #[serde(rename = "F", default)]
    pub f: Vec<String>,
    #[serde(rename = "G")]
    pub g: Vec<String>,
    pub source: String,
    pub target: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Deserialize, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum Request {
    FiniteType,
    EssentialType,
    FinitelyNondegenerate,
    Predicates,
    Reflection,
    Audit,
}

impl Request {
    pub const DEFAULT: [Request; 3] = [Request::FiniteType, Request::EssentialType, Request::Predicates];
}

pub fn from_json(text: &str) -> Result<Scenario, InputError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| InputError::Schema {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })
}

/// A manifold built from a scenario entry, with the coordinate change used
/// to normalize it (old `w` in terms of the new coordinates).
pub struct BuiltManifold {
    pub name: String,
    pub manifold: Arc<Manifold>,
    pub change: Option<Vec<Series>>,
}

pub struct BuiltMap {
    pub name: String,
    pub source: String,
    pub target: String,
    pub pair: FormalMapPair,
}

fn parse_list(exprs: &[String], ctx: &Ctx, k: u32, path: &str) -> Result<Vec<Series>, InputError> {
    exprs
        .iter()
        .enumerate()
        .map(|(i, e)| {
            parse_expression(e, ctx, k).map_err(|err| InputError::Expression {
                path: format!("{path}[{i}]"),
                input: e.clone(),
                error: err,
            })
        })
        .collect()
}

fn expect_len(v: &[Series], want: usize, path: &str) -> Result<(), InputError> {
    if v.len() == want {
        Ok(())
    } else {
        Err(InputError::Schema {
            path: path.into(),
            message: format!("expected {want} expressions, got {}", v.len()),
        })
    }
}

fn core_at(path: &str) -> impl Fn(crformal_core::error::Error) -> InputError + '_ {
    move |e| InputError::Core {
        path: path.into(),
        error: e,
    }
}

pub fn build_manifold(c: &Coords, name: &str, spec: &ManifoldSpec, k: u32) -> Result<BuiltManifold, InputError> {
    let path = format!("manifolds.{name}");
    match (&spec.q, &spec.defining, &spec.w_split) {
        (Some(q), None, None) => {
            let qp = format!("{path}.Q");
            let q = parse_list(q, &c.q, k, &qp)?;
            expect_len(&q, c.d, &qp)?;
            let m = Manifold::new(c, q, k).map_err(core_at(&qp))?;
            Ok(BuiltManifold {
                name: name.into(),
                manifold: Arc::new(m),
                change: None,
            })
        }
        (None, Some(rho), Some(split)) => {
            let dp = format!("{path}.defining");
            let rho = parse_list(rho, &c.full, k, &dp)?;
            expect_len(&rho, c.d, &dp)?;
            let sp = format!("{path}.wSplit");
            let holo: Vec<&str> = (0..c.big_n()).map(|i| c.full.name(i)).collect();
            let split = split
                .iter()
                .map(|v| {
                    holo.iter().position(|h| h == v).ok_or_else(|| InputError::Schema {
                        path: sp.clone(),
                        message: format!("`{v}` is not one of {}", holo.join(", ")),
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            let (m, change) = Manifold::from_defining(c, &rho, &split, k).map_err(core_at(&dp))?;
            Ok(BuiltManifold {
                name: name.into(),
                manifold: Arc::new(m),
                change: Some(change),
            })
        }
        _ => Err(InputError::Schema {
            path,
            message: "give either `Q` or both `defining` and `wSplit`".into(),
        }),
    }
}

pub fn build_map(
    c: &Coords,
    name: &str,
    spec: &MapSpec,
    manifolds: &[BuiltManifold],
    k: u32,
) -> Result<BuiltMap, InputError> {
    let path = format!("maps.{name}");
    let lookup = |which: &str, key: &str| {
        manifolds
            .iter()
            .find(|m| m.name == key)
            .map(|m| m.manifold.clone())
            .ok_or_else(|| InputError::Schema {
                path: format!("{path}.{which}"),
                message: format!("no manifold named `{key}`"),
            })
    };
    let source = lookup("source", &spec.source)?;
    let target = lookup("target", &spec.target)?;
    let f = parse_list(&spec.f, &c.zw, k, &format!("{path}.F"))?;
    expect_len(&f, c.n, &format!("{path}.F"))?;
    let g = parse_list(&spec.g, &c.zw, k, &format!("{path}.G"))?;
    expect_len(&g, c.d, &format!("{path}.G"))?;
    let pair = FormalMapPair::attach(source, target, f, g).map_err(core_at(&path))?;
    Ok(BuiltMap {
        name: name.into(),
        source: spec.source.clone(),
        target: spec.target.clone(),
        pair,
    })
}
