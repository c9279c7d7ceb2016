//! On-disk formats: the image document (JSON), the report document (JSON),
//! and Graphviz DOT export.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::constructions::NamedComplex;
use crate::error::{Error, Result};
use crate::graph::{Adjacency, DigitalImage, Vertex, VertexId, VertexSet};
use crate::lattice::{CuSpec, LatticePoint};
use crate::verifier::VerificationReport;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum AdjacencyDoc {
    Cu { u: usize },
    Explicit,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexDoc {
    pub id: VertexId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coords: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

/// Serialized form of a [`NamedComplex`]. `edges` is present exactly for
/// explicit adjacency; `c_u` images recompute their edges on load.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImageDocument {
    pub format_version: u32,
    pub dimension: Option<usize>,
    pub adjacency: AdjacencyDoc,
    pub vertices: Vec<VertexDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edges: Option<Vec<[VertexId; 2]>>,
    #[serde(default)]
    pub named_sets: BTreeMap<String, Vec<VertexId>>,
}

impl ImageDocument {
    /// Canonical document: vertices by id, edges once each, smaller id
    /// first, in lexicographic order.
    pub fn from_complex(nc: &NamedComplex) -> Self {
        let image = &nc.image;
        let vertices = image
            .vertices()
            .iter()
            .enumerate()
            .map(|(id, v)| VertexDoc {
                id,
                coords: v.coords.as_ref().map(|p| p.coords().to_vec()),
                label: v.label.clone(),
            })
            .collect();
        let (adjacency, edges) = match image.adjacency() {
            Adjacency::Cu(spec) => (AdjacencyDoc::Cu { u: spec.u() }, None),
            Adjacency::Explicit => (AdjacencyDoc::Explicit, Some(image.edges().map(|(a, b)| [a, b]).collect())),
        };
        ImageDocument {
            format_version: FORMAT_VERSION,
            dimension: image.dimension(),
            adjacency,
            vertices,
            edges,
            named_sets: nc.named_sets.iter().map(|(k, v)| (k.clone(), v.to_vec())).collect(),
        }
    }

    pub fn to_complex(&self) -> Result<NamedComplex> {
        if self.format_version != FORMAT_VERSION {
            return Err(Error::Document(format!("unsupported format_version {}", self.format_version)));
        }
        let mut docs: Vec<&VertexDoc> = self.vertices.iter().collect();
        docs.sort_by_key(|v| v.id);
        if docs.iter().enumerate().any(|(i, v)| v.id != i) {
            return Err(Error::Document("vertex ids must be exactly 0..N-1".into()));
        }
        let image = match (&self.adjacency, &self.edges) {
            (AdjacencyDoc::Cu { u }, None) => {
                let d = self
                    .dimension
                    .ok_or_else(|| Error::Document("cu adjacency requires a dimension".into()))?;
                let spec = CuSpec::new(*u, d)?;
                let points = docs
                    .iter()
                    .map(|v| v.coords.clone().map(LatticePoint::new))
                    .collect::<Option<Vec<_>>>()
                    .ok_or_else(|| Error::Document("cu adjacency requires coordinates on every vertex".into()))?;
                let mut image = DigitalImage::from_points(points, spec)?;
                for v in &docs {
                    if let Some(l) = &v.label {
                        image = image.with_label(v.id, l.clone());
                    }
                }
                image
            }
            (AdjacencyDoc::Explicit, Some(edges)) => {
                let vertices = docs
                    .iter()
                    .map(|v| Vertex { coords: v.coords.clone().map(LatticePoint::new), label: v.label.clone() })
                    .collect();
                DigitalImage::explicit(vertices, edges.iter().map(|e| (e[0], e[1])), self.dimension)?
            }
            (AdjacencyDoc::Cu { .. }, Some(_)) => {
                return Err(Error::Document("edges must be absent for cu adjacency".into()));
            }
            (AdjacencyDoc::Explicit, None) => {
                return Err(Error::Document("explicit adjacency requires an edge list".into()));
            }
        };
        let mut nc = NamedComplex::new(image);
        for (name, ids) in &self.named_sets {
            let set: VertexSet = ids.iter().copied().collect();
            nc.image.check_set(&set)?;
            nc.named_sets.insert(name.clone(), set);
        }
        Ok(nc)
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Document(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }
}

/// A [`VerificationReport`] with a format version, as written by the CLI.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub format_version: u32,
    #[serde(flatten)]
    pub report: VerificationReport,
}

impl ReportDocument {
    pub fn new(report: VerificationReport) -> Self {
        ReportDocument { format_version: FORMAT_VERSION, report }
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Document(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// A JSON array of vertex ids.
pub fn parse_id_list(text: &str) -> Result<VertexSet> {
    let ids: Vec<VertexId> = serde_json::from_str(text).map_err(|e| Error::Document(e.to_string()))?;
    Ok(ids.into_iter().collect())
}

/// Graphviz DOT: one node per vertex, one undirected edge per adjacent pair.
pub fn to_dot(image: &DigitalImage) -> String {
    let mut out = String::from("graph image {\n");
    for v in 0..image.len() {
        let name = image.display_name(v).replace('"', "\\\"");
        writeln!(out, "  {v} [label=\"{name}\"];").unwrap();
    }
    for (a, b) in image.edges() {
        writeln!(out, "  {a} -- {b};").unwrap();
    }
    out.push_str("}\n");
    out
}
