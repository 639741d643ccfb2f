//! Versioned JSON artifacts. Every list is emitted in a canonical order and
//! no map with unordered keys is used, so identical inputs give
//! byte-identical output.
//!
//! Schemas (`schema` field, with `version`):
//!
//! - `invbraid.forest` v1: the system, the pair, every vertex with its
//!   parent, children, boundary generator, full braid-system dump and leaf
//!   tag, and the induced relations.
//! - `invbraid.span` v1: relation sets and per-pair forest summaries.
//! - `invbraid.verify` v1: named pass/fail checks.
//!
//! Generators are written by label throughout. [`SystemFile`] reads a
//! system back from the same shape as the `system` field.

use serde::{Deserialize, Serialize};

use crate::braidsys::{format_column, format_constraint, format_poly, BraidSystem};
use crate::coxeter::{Gen, TwistedSystem};
use crate::engine::{Forest, ForestVertex, VertexStats};
use crate::error::{Error, Result};
use crate::involutions::{Mode, WordRelation};
use crate::numfield::INFINITY;

pub const FOREST_SCHEMA: &str = "invbraid.forest";
pub const SPAN_SCHEMA: &str = "invbraid.span";
pub const VERIFY_SCHEMA: &str = "invbraid.verify";
pub const VERSION: u32 = 1;

fn labels(sys: &TwistedSystem, w: &[Gen]) -> Vec<String> {
    w.iter().map(|&g| sys.label(g).to_string()).collect()
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct RelationJson {
    pub left: Vec<String>,
    pub right: Vec<String>,
    pub mode: Mode,
}

impl RelationJson {
    pub fn new(sys: &TwistedSystem, r: &WordRelation) -> Self {
        Self {
            left: labels(sys, &r.left),
            right: labels(sys, &r.right),
            mode: r.mode,
        }
    }

    pub fn list(sys: &TwistedSystem, rels: &[WordRelation]) -> Vec<Self> {
        rels.iter().map(|r| Self::new(sys, r)).collect()
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct SystemJson {
    pub name: String,
    pub labels: Vec<String>,
    /// Generator order used for every tie-break.
    pub order: Vec<String>,
    /// Image of each generator under the twist, in label order.
    pub twist: Vec<String>,
    /// Coxeter matrix; 0 stands for ∞.
    pub matrix: Vec<Vec<u32>>,
}

impl SystemJson {
    pub fn new(sys: &TwistedSystem) -> Self {
        let matrix = sys
            .matrix()
            .iter()
            .map(|row| {
                row.iter()
                    .map(|&m| if m == INFINITY { 0 } else { m })
                    .collect()
            })
            .collect();
        Self {
            name: sys.name().to_string(),
            labels: sys.labels().to_vec(),
            order: labels(sys, sys.order()),
            twist: sys
                .gens()
                .map(|g| sys.label(sys.star(g)).to_string())
                .collect(),
            matrix,
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ColumnJson {
    pub generator: String,
    /// σ(α_s) as a combination of simple roots.
    pub image: String,
    /// Coordinates, one polynomial per simple root.
    pub coords: Vec<String>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct BraidSystemJson {
    pub left: Vec<String>,
    pub right: Vec<String>,
    pub domain: Vec<String>,
    pub sigma: Vec<ColumnJson>,
    pub constraints: Vec<String>,
    pub abs_one: Vec<String>,
}

impl BraidSystemJson {
    pub fn new(sys: &TwistedSystem, b: &BraidSystem) -> Self {
        let mut domain: Vec<Gen> = b.domain().into_iter().collect();
        sys.sort_gens(&mut domain);
        let sigma = domain
            .iter()
            .map(|&s| {
                let col = b.sigma.column(s).expect("domain column");
                ColumnJson {
                    generator: sys.label(s).to_string(),
                    image: format_column(sys, col),
                    coords: col.iter().map(|p| format_poly(sys, p)).collect(),
                }
            })
            .collect();
        Self {
            left: labels(sys, &b.left),
            right: labels(sys, &b.right),
            domain: labels(sys, &domain),
            sigma,
            constraints: b
                .constraints
                .constraints()
                .iter()
                .map(|c| format_constraint(sys, c))
                .collect(),
            abs_one: b.abs_one.iter().map(|p| format_poly(sys, p)).collect(),
        }
    }
}

/// Why a forest vertex has no children.
#[derive(Clone, Copy, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum ForestLeaf {
    /// The domain has empty boundary.
    Closed,
    /// Every branch under the vertex ended without output.
    Exhausted,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct VertexJson {
    pub id: usize,
    pub parent: Option<usize>,
    pub via: Option<String>,
    pub children: Vec<usize>,
    pub trivial: bool,
    pub leaf: Option<ForestLeaf>,
    pub system: BraidSystemJson,
    pub stats: VertexStats,
}

impl VertexJson {
    pub fn new(sys: &TwistedSystem, v: &ForestVertex) -> Self {
        let leaf = v.children.is_empty().then(|| {
            if sys.boundary(&v.system.domain()).is_empty() {
                ForestLeaf::Closed
            } else {
                ForestLeaf::Exhausted
            }
        });
        Self {
            id: v.id,
            parent: v.parent,
            via: v.via.map(|g| sys.label(g).to_string()),
            children: v.children.clone(),
            trivial: v.trivial,
            leaf,
            system: BraidSystemJson::new(sys, &v.system),
            stats: v.stats.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ForestJson {
    pub schema: &'static str,
    pub version: u32,
    pub system: SystemJson,
    pub pair: [String; 2],
    pub roots: Vec<usize>,
    pub vertices: Vec<VertexJson>,
    pub relations: Vec<RelationJson>,
}

impl ForestJson {
    pub fn new(sys: &TwistedSystem, forest: &Forest, relations: &[WordRelation]) -> Self {
        Self {
            schema: FOREST_SCHEMA,
            version: VERSION,
            system: SystemJson::new(sys),
            pair: [
                sys.label(forest.s).to_string(),
                sys.label(forest.t).to_string(),
            ],
            roots: forest.roots.clone(),
            vertices: forest
                .vertices
                .iter()
                .map(|v| VertexJson::new(sys, v))
                .collect(),
            relations: RelationJson::list(sys, relations),
        }
    }
}

/// Summary of one forest inside a span report.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct PairJson {
    pub pair: [String; 2],
    pub vertices: usize,
    pub trivial: usize,
    pub relations: usize,
    pub stats: VertexStats,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct SpanJson {
    pub schema: &'static str,
    pub version: u32,
    pub system: SystemJson,
    pub depth: usize,
    pub budget: usize,
    pub hat: Vec<RelationJson>,
    pub hat_plus: Vec<RelationJson>,
    pub pairs: Vec<PairJson>,
    pub relations: Vec<RelationJson>,
    pub minimal: Vec<RelationJson>,
    /// Name of the reference relation set checked against `minimal`.
    pub reference: String,
    /// Every minimal relation is implied by the reference set at `depth`.
    pub implied_by_reference: bool,
    pub perfectly_braided: bool,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CheckJson {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct VerifyJson {
    pub schema: &'static str,
    pub version: u32,
    pub system: SystemJson,
    /// Hat-length bound, absent for a full finite enumeration.
    pub bound: Option<usize>,
    pub involutions: usize,
    pub relations: String,
    pub observed_perfectly_braided: bool,
    /// The classification's prediction, absent when it does not apply.
    pub expected_perfectly_braided: Option<bool>,
    pub checks: Vec<CheckJson>,
    pub passed: bool,
}

/// Input format for a system given as a file. `twist` and `order` list
/// labels; the twist defaults to the identity and the order to label order.
#[derive(Clone, Debug, Deserialize)]
pub struct SystemFile {
    #[serde(default)]
    pub name: Option<String>,
    pub labels: Vec<String>,
    pub matrix: Vec<Vec<u32>>,
    #[serde(default)]
    pub twist: Option<Vec<String>>,
    #[serde(default)]
    pub order: Option<Vec<String>>,
}

impl SystemFile {
    pub fn parse(text: &str) -> Result<TwistedSystem> {
        let f: SystemFile = serde_json::from_str(text)?;
        let index = |l: &String| {
            f.labels
                .iter()
                .position(|x| x == l)
                .ok_or_else(|| Error::UnknownGenerator(l.clone()))
        };
        let twist = match &f.twist {
            Some(t) => t.iter().map(index).collect::<Result<Vec<_>>>()?,
            None => (0..f.labels.len()).collect(),
        };
        let order = f
            .order
            .as_ref()
            .map(|o| o.iter().map(index).collect::<Result<Vec<_>>>())
            .transpose()?;
        let matrix = f
            .matrix
            .iter()
            .map(|row| {
                row.iter()
                    .map(|&m| if m == 0 { INFINITY } else { m })
                    .collect()
            })
            .collect();
        TwistedSystem::new(
            f.name.clone().unwrap_or_else(|| "custom".into()),
            f.labels.clone(),
            matrix,
            twist,
            order,
        )
    }
}

/// Pretty-printed JSON with a trailing newline.
pub fn to_canonical_string<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::preset;
    use crate::engine::{build_forest, extract_relations, EngineConfig};

    #[test]
    fn a3_forest_artifact_is_stable() {
        let sys = preset("A", 3, "id").unwrap();
        let cfg = EngineConfig::default();
        let render = || {
            let f = build_forest(&sys, 0, 1, &cfg).unwrap();
            let rels = extract_relations(&sys, &f);
            to_canonical_string(&ForestJson::new(&sys, &f, &rels)).unwrap()
        };
        let a = render();
        assert_eq!(a, render());
        let v: serde_json::Value = serde_json::from_str(&a).unwrap();
        assert_eq!(v["schema"], FOREST_SCHEMA);
        assert_eq!(v["vertices"].as_array().unwrap().len(), 3);
        assert_eq!(v["relations"][0]["mode"], "prefix");
        assert_eq!(v["relations"][0]["left"], serde_json::json!(["1", "2"]));
    }

    #[test]
    fn system_file_round_trip() {
        let sys = preset("~C", 4, "reverse").unwrap();
        let text = serde_json::to_string(&SystemJson::new(&sys)).unwrap();
        let back = SystemFile::parse(&text).unwrap();
        assert_eq!(SystemJson::new(&back), SystemJson::new(&sys));
        assert!(SystemFile::parse(
            r#"{"labels":["a","b"],"matrix":[[1,3],[3,1]],"twist":["b","c"]}"#
        )
        .is_err());
    }
}
