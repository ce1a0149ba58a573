//! JSON interchange documents and Graphviz export.
//!
//! Every file is a document `{"kind", "payload", "version"}`. Payloads refer
//! to points and lines by identifier only, so a document can be edited by
//! hand. Output is canonical: keys sorted, two-space indentation, trailing
//! newline.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::covering::{Covering, Substructure, TackRelation};
use crate::error::{Error, Result};
use crate::morphism::{MapKind, StructureMap};
use crate::multiply::GlueSpec;
use crate::structure::{Builder, Coordinates, IncidenceStructure};

pub const VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Document {
    pub kind: String,
    pub payload: Value,
    pub version: u32,
}

impl Document {
    pub fn new(kind: &str, payload: impl Serialize) -> Result<Self> {
        Ok(Document {
            kind: kind.to_string(),
            payload: serde_json::to_value(payload)?,
            version: VERSION,
        })
    }

    pub fn parse(text: &str) -> Result<Self> {
        let doc: Document = serde_json::from_str(text)?;
        if doc.version != VERSION {
            return Err(Error::Format(format!("unsupported version {}", doc.version)));
        }
        Ok(doc)
    }

    /// Canonical text: sorted keys, pretty-printed, newline-terminated.
    pub fn render(&self) -> String {
        // Round-tripping through `Value` sorts object keys.
        let v = serde_json::to_value(self).expect("documents are plain JSON");
        let mut s = serde_json::to_string_pretty(&v).expect("documents are plain JSON");
        s.push('\n');
        s
    }

    pub fn expect_kind(&self, kind: &str) -> Result<()> {
        if self.kind != kind {
            return Err(Error::Format(format!("expected a `{kind}` document, found `{}`", self.kind)));
        }
        Ok(())
    }

    fn payload_as<T: DeserializeOwned>(&self, kind: &str) -> Result<T> {
        self.expect_kind(kind)?;
        Ok(serde_json::from_value(self.payload.clone())?)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LinePayload {
    id: String,
    points: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StructurePayload {
    name: String,
    points: Vec<String>,
    lines: Vec<LinePayload>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    coordinates: Option<Coordinates>,
}

fn structure_payload(s: &IncidenceStructure) -> StructurePayload {
    StructurePayload {
        name: s.name().to_string(),
        points: s.point_ids().to_vec(),
        lines: (0..s.num_lines())
            .map(|l| LinePayload {
                id: s.line_id(l).to_string(),
                points: s.points_on(l).iter().map(|&p| s.point_id(p).to_string()).collect(),
            })
            .collect(),
        coordinates: s.coordinates().cloned(),
    }
}

fn structure_from_payload(p: StructurePayload) -> Result<IncidenceStructure> {
    let mut b = Builder::new(p.name);
    for id in p.points {
        b.point(id)?;
    }
    for l in p.lines {
        b.line_by_ids(l.id, &l.points)?;
    }
    let s = b.build();
    match p.coordinates {
        Some(c) => s.with_coordinates(c),
        None => Ok(s),
    }
}

pub fn structure_to_document(s: &IncidenceStructure) -> Document {
    Document::new("structure", structure_payload(s)).expect("structures serialize")
}

pub fn structure_from_document(doc: &Document) -> Result<IncidenceStructure> {
    structure_from_payload(doc.payload_as("structure")?)
}

pub fn structure_from_str(text: &str) -> Result<IncidenceStructure> {
    structure_from_document(&Document::parse(text)?)
}

pub fn structure_to_string(s: &IncidenceStructure) -> String {
    structure_to_document(s).render()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MapPayload {
    kind: MapKind,
    point_part: BTreeMap<String, String>,
    line_part: BTreeMap<String, String>,
}

/// A map document lists, for every source identifier, the identifier of
/// its image in the target (a line for points under a correlation).
pub fn map_to_document(m: &StructureMap, source: &IncidenceStructure, target: &IncidenceStructure) -> Document {
    let corr = m.kind == MapKind::Correlation;
    let point_part = m
        .point_part
        .iter()
        .enumerate()
        .map(|(p, &x)| {
            let img = if corr { target.line_id(x) } else { target.point_id(x) };
            (source.point_id(p).to_string(), img.to_string())
        })
        .collect();
    let line_part = m
        .line_part
        .iter()
        .enumerate()
        .map(|(l, &x)| {
            let img = if corr { target.point_id(x) } else { target.line_id(x) };
            (source.line_id(l).to_string(), img.to_string())
        })
        .collect();
    Document::new(
        "map",
        MapPayload {
            kind: m.kind,
            point_part,
            line_part,
        },
    )
    .expect("maps serialize")
}

pub fn map_from_document(doc: &Document, source: &IncidenceStructure, target: &IncidenceStructure) -> Result<StructureMap> {
    map_from_payload(doc.payload_as("map")?, source, target)
}

fn map_from_payload(p: MapPayload, source: &IncidenceStructure, target: &IncidenceStructure) -> Result<StructureMap> {
    let corr = p.kind == MapKind::Correlation;
    let lookup = |part: &BTreeMap<String, String>, ids: &[String], to_line: bool, what: &str| -> Result<Vec<usize>> {
        if part.len() != ids.len() {
            return Err(Error::Format(format!(
                "{what} part has {} entries, source has {}",
                part.len(),
                ids.len()
            )));
        }
        ids.iter()
            .map(|id| {
                let img = part
                    .get(id)
                    .ok_or_else(|| Error::Format(format!("{what} part has no entry for `{id}`")))?;
                if to_line {
                    target.line(img)
                } else {
                    target.point(img)
                }
            })
            .collect()
    };
    Ok(StructureMap {
        kind: p.kind,
        point_part: lookup(&p.point_part, source.point_ids(), corr, "point")?,
        line_part: lookup(&p.line_part, source.line_ids(), !corr, "line")?,
        target_shape: (target.num_points(), target.num_lines()),
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BlockPayload {
    index: usize,
    points: Vec<String>,
    lines: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CoveringPayload {
    blocks: Vec<BlockPayload>,
}

pub fn covering_to_document(c: &Covering, host: &IncidenceStructure) -> Document {
    let blocks = c
        .blocks
        .iter()
        .enumerate()
        .map(|(index, b)| {
            let (points, lines) = b.ids(host);
            BlockPayload { index, points, lines }
        })
        .collect();
    Document::new("covering", CoveringPayload { blocks }).expect("coverings serialize")
}

/// Blocks are read in order of their `index` field, which must run `0..n`.
pub fn covering_from_document(doc: &Document, host: &IncidenceStructure) -> Result<Covering> {
    let mut p: CoveringPayload = doc.payload_as("covering")?;
    p.blocks.sort_by_key(|b| b.index);
    let mut blocks = Vec::with_capacity(p.blocks.len());
    for (i, b) in p.blocks.into_iter().enumerate() {
        if b.index != i {
            return Err(Error::Format(format!("block indices must run 0..n, found {}", b.index)));
        }
        let points = b.points.iter().map(|id| host.point(id)).collect::<Result<Vec<_>>>()?;
        let lines = b.lines.iter().map(|id| host.line(id)).collect::<Result<Vec<_>>>()?;
        blocks.push(Substructure::new(points, lines));
    }
    Covering::new(host, blocks)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TackPayload {
    pairs: Vec<(String, String)>,
}

pub fn tack_to_document(t: &TackRelation, host: &IncidenceStructure) -> Document {
    let pairs = t
        .pairs()
        .map(|(p, l)| (host.point_id(p).to_string(), host.line_id(l).to_string()))
        .collect();
    Document::new("tack", TackPayload { pairs }).expect("tack relations serialize")
}

pub fn tack_from_document(doc: &Document, host: &IncidenceStructure) -> Result<TackRelation> {
    let p: TackPayload = doc.payload_as("tack")?;
    let pairs = p
        .pairs
        .iter()
        .map(|(a, m)| Ok((host.point(a)?, host.line(m)?)))
        .collect::<Result<Vec<_>>>()?;
    TackRelation::new(host, pairs)
}

/// An entry of a glue spec: inline payload or a path to a document.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum Entry<T> {
    Path(String),
    Inline(T),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GlueSpecPayload {
    structures: Vec<Entry<StructurePayload>>,
    correlations: Vec<Entry<MapPayload>>,
}

fn resolve<T: DeserializeOwned>(entry: Entry<T>, base: Option<&Path>, kind: &str) -> Result<T> {
    match entry {
        Entry::Inline(t) => Ok(t),
        Entry::Path(p) => {
            let path = match base {
                Some(dir) => dir.join(&p),
                None => p.into(),
            };
            let text = std::fs::read_to_string(&path)?;
            Document::parse(&text)?.payload_as(kind)
        }
    }
}

/// Reads a glue spec. Correlation `i` maps structure `i` onto structure
/// `i+1 mod k`. Path entries are resolved against `base`.
pub fn glue_spec_from_document(doc: &Document, base: Option<&Path>) -> Result<GlueSpec> {
    let p: GlueSpecPayload = doc.payload_as("glue-spec")?;
    let structures = p
        .structures
        .into_iter()
        .map(|e| structure_from_payload(resolve(e, base, "structure")?))
        .collect::<Result<Vec<_>>>()?;
    let k = structures.len();
    if p.correlations.len() != k {
        return Err(Error::Format(format!(
            "{k} structures but {} correlations",
            p.correlations.len()
        )));
    }
    let correlations = p
        .correlations
        .into_iter()
        .enumerate()
        .map(|(i, e)| map_from_payload(resolve(e, base, "map")?, &structures[i], &structures[(i + 1) % k]))
        .collect::<Result<Vec<_>>>()?;
    GlueSpec::new(structures, correlations)
}

pub fn glue_spec_to_document(spec: &GlueSpec) -> Document {
    let ms = spec.structures();
    let k = ms.len();
    let structures = ms.iter().map(|s| Entry::Inline(structure_payload(s))).collect();
    let correlations = spec
        .correlations()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let doc = map_to_document(c, &ms[i], &ms[(i + 1) % k]);
            Entry::Inline(serde_json::from_value(doc.payload).expect("map payload round-trips"))
        })
        .collect();
    Document::new("glue-spec", GlueSpecPayload { structures, correlations }).expect("glue specs serialize")
}

fn dot_quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// The Levi graph in Graphviz syntax: circles for points, boxes for lines,
/// one edge per flag. Node names are prefixed by sort so that a point and a
/// line may share a label.
pub fn export_levi_dot(s: &IncidenceStructure) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "graph levi {{");
    let _ = writeln!(out, "  label={};", dot_quote(s.name()));
    for p in 0..s.num_points() {
        let _ = writeln!(
            out,
            "  {} [label={}, shape=circle];",
            dot_quote(&format!("p:{}", s.point_id(p))),
            dot_quote(s.point_id(p))
        );
    }
    for l in 0..s.num_lines() {
        let _ = writeln!(
            out,
            "  {} [label={}, shape=square];",
            dot_quote(&format!("l:{}", s.line_id(l))),
            dot_quote(s.line_id(l))
        );
    }
    for (p, l) in s.flags() {
        let _ = writeln!(
            out,
            "  {} -- {};",
            dot_quote(&format!("p:{}", s.point_id(p))),
            dot_quote(&format!("l:{}", s.line_id(l)))
        );
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{projective_plane, segment};
    use crate::multiply::multiply_dual;
    use crate::search::find_involutive_correlation;

    #[test]
    fn structure_round_trip_keeps_coordinates() {
        let m = multiply_dual(4, &segment()).unwrap();
        let text = structure_to_string(&m);
        let back = structure_from_str(&text).unwrap();
        assert_eq!(back, m);
        assert_eq!(back.coordinates(), m.coordinates());
        assert_eq!(structure_to_string(&back), text);
    }

    #[test]
    fn map_round_trip() {
        let f = projective_plane(2).unwrap();
        let pi = find_involutive_correlation(&f).unwrap();
        let doc = map_to_document(&pi, &f, &f);
        assert_eq!(map_from_document(&doc, &f, &f).unwrap(), pi);
    }

    #[test]
    fn covering_round_trip() {
        let m = multiply_dual(4, &segment()).unwrap();
        let c = Covering::layers(&m).unwrap();
        let doc = covering_to_document(&c, &m);
        let text = doc.render();
        assert_eq!(covering_from_document(&Document::parse(&text).unwrap(), &m).unwrap(), c);
    }

    #[test]
    fn rejects_bad_documents() {
        assert!(matches!(Document::parse("{"), Err(Error::Json(_))));
        let wrong = r#"{"kind":"structure","payload":{},"version":2}"#;
        assert!(matches!(Document::parse(wrong), Err(Error::Format(_))));
        let tack = Document::new("tack", TackPayload { pairs: vec![] }).unwrap();
        assert!(structure_from_document(&tack).is_err());
    }

    #[test]
    fn dot_has_one_edge_per_flag() {
        let s = IncidenceStructure::from_ids("q\"t", ["a", "b\""], [("c", vec!["a", "b\""])]).unwrap();
        let dot = export_levi_dot(&s);
        assert_eq!(dot.matches(" -- ").count(), 2);
        assert!(dot.contains("label=\"q\\\"t\""));
        assert!(dot.starts_with("graph levi {"));
    }
}
