//! On-disk formats.
//!
//! Every file is one JSON document with a `version`, a `kind` and an `id`.
//! Objects refer to each other by id; points by index into the referenced
//! space; group elements by name. Scalars are exact rationals written as
//! `"p/q"` strings (integers and `"p"` strings are accepted on input).
//!
//! [`to_canonical_string`] is the only writer, so reading a file this crate
//! wrote and writing it again reproduces it byte for byte.

use std::fmt;

use asdim_core::{Extended, Scalar};
use indexmap::IndexMap;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

pub const VERSION: &str = "asdim/1";

/// An exact rational serialized as `"p/q"`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Rat(pub Scalar);

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format!("{}/{}", self.0.numer(), self.0.denom()))
    }
}

struct RatVisitor;

impl Visitor<'_> for RatVisitor {
    type Value = Rat;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("a rational \"p/q\", \"p\" or an integer")
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<Rat, E> {
        v.parse::<Scalar>().map(Rat).map_err(E::custom)
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<Rat, E> {
        Ok(Rat(Scalar::int(v)))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<Rat, E> {
        i64::try_from(v).map(|v| Rat(Scalar::int(v))).map_err(E::custom)
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        d.deserialize_any(RatVisitor)
    }
}

/// A rational or `"inf"`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Ext(pub Extended);

impl Serialize for Ext {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0 {
            Extended::Finite(v) => Rat(v).serialize(s),
            Extended::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Ext {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Ext, D::Error> {
        struct ExtVisitor;
        impl Visitor<'_> for ExtVisitor {
            type Value = Ext;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a rational or \"inf\"")
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Ext, E> {
                if v == "inf" {
                    Ok(Ext(Extended::Infinite))
                } else {
                    RatVisitor.visit_str(v).map(|r| Ext(Extended::Finite(r.0)))
                }
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Ext, E> {
                Ok(Ext(Extended::Finite(Scalar::int(v))))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Ext, E> {
                RatVisitor.visit_u64(v).map(|r| Ext(Extended::Finite(r.0)))
            }
        }
        d.deserialize_any(ExtVisitor)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceDoc {
    pub version: String,
    pub id: String,
    pub labels: Vec<String>,
    pub distances: Vec<Vec<Rat>>,
}

/// A weighted graph; loads as its shortest-path metric.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDoc {
    pub version: String,
    pub id: String,
    pub labels: Vec<String>,
    /// `[u, v, weight]` with endpoint labels.
    pub edges: Vec<(String, String, Rat)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupDoc {
    pub version: String,
    pub id: String,
    pub elements: Vec<String>,
    /// `table[a][b]` is the name of `a * b`.
    pub table: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionDoc {
    pub version: String,
    pub id: String,
    pub group: String,
    pub space: String,
    /// Element name to the image of every point.
    pub perm: IndexMap<String, Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BallMeetDoc {
    pub radius: Rat,
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateDoc {
    pub dimension: usize,
    pub lebesgue: Ext,
    pub mesh: Rat,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ball_meet: Option<BallMeetDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub equivariant: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverDoc {
    pub version: String,
    pub id: String,
    pub space: String,
    pub members: Vec<Vec<usize>>,
    /// Checked against a recomputation on load.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateDoc>,
    /// Action the equivariance flag refers to.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action: Option<String>,
    /// How the cover was produced, e.g. `exact:subsets`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub method: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecompositionDoc {
    pub version: String,
    pub id: String,
    pub space: String,
    pub r: Rat,
    pub families: Vec<Vec<Vec<usize>>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PieceDoc {
    pub element: String,
    pub center: usize,
    pub subgroup: Vec<String>,
    pub piece: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MemberTraceDoc {
    pub member: usize,
    pub basepoint: usize,
    pub fiber: Vec<usize>,
    pub subgroup: Vec<String>,
    pub coset_representatives: Vec<String>,
    pub pieces: Vec<PieceDoc>,
}

/// Record of an equivariant lift; checked by rerunning the lift on load.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LiftTraceDoc {
    pub version: String,
    pub id: String,
    pub action: String,
    pub quotient_cover: String,
    pub cover: String,
    pub radius: Rat,
    pub scale: Rat,
    pub members: Vec<MemberTraceDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SSpaceDoc {
    pub version: String,
    pub id: String,
    pub components: Vec<String>,
    pub basepoints: Vec<Vec<usize>>,
    pub f: Vec<Rat>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileEntryDoc {
    #[serde(rename = "R")]
    pub radius: Rat,
    #[serde(rename = "B")]
    pub mesh_bound: Rat,
    pub dimension: Option<usize>,
    pub mesh: Option<Rat>,
    pub method: String,
    pub cover: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileDoc {
    pub version: String,
    pub id: String,
    pub space: String,
    pub entries: Vec<ProfileEntryDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Document {
    Space(SpaceDoc),
    Graph(GraphDoc),
    Group(GroupDoc),
    Action(ActionDoc),
    Cover(CoverDoc),
    Decomposition(DecompositionDoc),
    LiftTrace(LiftTraceDoc),
    Sspace(SSpaceDoc),
    Profile(ProfileDoc),
}

impl Document {
    pub fn id(&self) -> &str {
        match self {
            Document::Space(d) => &d.id,
            Document::Graph(d) => &d.id,
            Document::Group(d) => &d.id,
            Document::Action(d) => &d.id,
            Document::Cover(d) => &d.id,
            Document::Decomposition(d) => &d.id,
            Document::LiftTrace(d) => &d.id,
            Document::Sspace(d) => &d.id,
            Document::Profile(d) => &d.id,
        }
    }

    pub fn version(&self) -> &str {
        match self {
            Document::Space(d) => &d.version,
            Document::Graph(d) => &d.version,
            Document::Group(d) => &d.version,
            Document::Action(d) => &d.version,
            Document::Cover(d) => &d.version,
            Document::Decomposition(d) => &d.version,
            Document::LiftTrace(d) => &d.version,
            Document::Sspace(d) => &d.version,
            Document::Profile(d) => &d.version,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Document::Space(_) => "space",
            Document::Graph(_) => "graph",
            Document::Group(_) => "group",
            Document::Action(_) => "action",
            Document::Cover(_) => "cover",
            Document::Decomposition(_) => "decomposition",
            Document::LiftTrace(_) => "lift-trace",
            Document::Sspace(_) => "sspace",
            Document::Profile(_) => "profile",
        }
    }
}

pub fn parse_document(text: &str) -> Result<Document, serde_json::Error> {
    serde_json::from_str(text)
}

/// Deterministic layout: objects one key per line, arrays of scalars on one
/// line, arrays of arrays one row per line.
pub fn to_canonical_string(doc: &Document) -> String {
    let value = serde_json::to_value(doc).expect("documents serialize");
    let mut out = String::new();
    write_value(&mut out, &value, 0);
    out.push('\n');
    out
}

fn is_flat(v: &Value) -> bool {
    match v {
        Value::Array(items) => items.iter().all(|i| !i.is_array() && !i.is_object()),
        Value::Object(_) => false,
        _ => true,
    }
}

fn indent(out: &mut String, level: usize) {
    out.extend(std::iter::repeat_n("  ", level));
}

fn write_value(out: &mut String, v: &Value, level: usize) {
    match v {
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            out.push_str("{\n");
            for (i, (k, item)) in map.iter().enumerate() {
                indent(out, level + 1);
                out.push_str(&serde_json::to_string(k).expect("keys serialize"));
                out.push_str(": ");
                write_value(out, item, level + 1);
                if i + 1 < map.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            indent(out, level);
            out.push('}');
        }
        Value::Array(items) if items.is_empty() || is_flat(v) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                out.push_str(&serde_json::to_string(item).expect("scalars serialize"));
            }
            out.push(']');
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                indent(out, level + 1);
                write_value(out, item, level + 1);
                if i + 1 < items.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            indent(out, level);
            out.push(']');
        }
        scalar => out.push_str(&serde_json::to_string(scalar).expect("scalars serialize")),
    }
}

/// Plain-text edge list: one `u v weight` line per edge, `#` comments.
/// Vertices are listed in order of first appearance unless a
/// `# vertices: a b c` line fixes the order (and adds isolated vertices,
/// which the metric builder then rejects as disconnected).
pub fn parse_edge_list(id: &str, text: &str) -> Result<GraphDoc, String> {
    let mut labels: Vec<String> = Vec::new();
    let mut edges = Vec::new();
    let add = |labels: &mut Vec<String>, l: &str| {
        if !labels.iter().any(|x| x == l) {
            labels.push(l.to_string());
        }
    };
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if let Some(rest) = line.strip_prefix('#') {
            if let Some(vs) = rest.trim().strip_prefix("vertices:") {
                vs.split_whitespace().for_each(|v| add(&mut labels, v));
            }
            continue;
        }
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [u, v, w] = fields[..] else {
            return Err(format!("line {}: expected `u v weight`, got {line:?}", n + 1));
        };
        let w: Scalar = w.parse().map_err(|e| format!("line {}: {e}", n + 1))?;
        add(&mut labels, u);
        add(&mut labels, v);
        edges.push((u.to_string(), v.to_string(), Rat(w)));
    }
    Ok(GraphDoc { version: VERSION.to_string(), id: id.to_string(), labels, edges })
}

pub fn write_edge_list(g: &GraphDoc) -> String {
    let mut out = format!("# vertices: {}\n", g.labels.join(" "));
    for (u, v, w) in &g.edges {
        out.push_str(&format!("{u} {v} {}\n", w.0));
    }
    out
}

/// `R,B,dimension,mesh,method,cover` with empty cells for missing values.
pub fn profile_csv(p: &ProfileDoc) -> String {
    let mut out = String::from("R,B,dimension,mesh,method,cover\n");
    for e in &p.entries {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            e.radius.0,
            e.mesh_bound.0,
            e.dimension.map(|d| d.to_string()).unwrap_or_default(),
            e.mesh.map(|m| m.0.to_string()).unwrap_or_default(),
            e.method,
            e.cover.clone().unwrap_or_default(),
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_parse_in_every_accepted_form() {
        let doc: Vec<Rat> = serde_json::from_str(r#"["3/6", "4", 5, "-1/2"]"#).unwrap();
        let want = [Scalar::new(1, 2), Some(Scalar::int(4)), Some(Scalar::int(5)), Scalar::new(-1, 2)];
        assert_eq!(doc.iter().map(|r| Some(r.0)).collect::<Vec<_>>(), want);
        assert!(serde_json::from_str::<Rat>(r#""1/0""#).is_err());
        assert_eq!(serde_json::to_string(&Rat(Scalar::int(4))).unwrap(), r#""4/1""#);
        let e: Ext = serde_json::from_str(r#""inf""#).unwrap();
        assert_eq!(e.0, Extended::Infinite);
    }

    #[test]
    fn canonical_layout_round_trips() {
        let doc = Document::Space(SpaceDoc {
            version: VERSION.into(),
            id: "p2".into(),
            labels: vec!["a".into(), "b".into()],
            distances: vec![vec![Rat(Scalar::ZERO), Rat(Scalar::ONE)], vec![Rat(Scalar::ONE), Rat(Scalar::ZERO)]],
        });
        let text = to_canonical_string(&doc);
        assert_eq!(
            text,
            "{\n  \"kind\": \"space\",\n  \"version\": \"asdim/1\",\n  \"id\": \"p2\",\n  \"labels\": [\"a\", \"b\"],\n  \"distances\": [\n    [\"0/1\", \"1/1\"],\n    [\"1/1\", \"0/1\"]\n  ]\n}\n"
        );
        assert_eq!(to_canonical_string(&parse_document(&text).unwrap()), text);
    }

    #[test]
    fn edge_lists() {
        let g = parse_edge_list("t", "# a triangle\na b 1\nb c 1/2\n\nc a 2\n").unwrap();
        assert_eq!(g.labels, ["a", "b", "c"]);
        assert_eq!(g.edges[1].2 .0, Scalar::new(1, 2).unwrap());
        let text = write_edge_list(&g);
        assert_eq!(parse_edge_list("t", &text).unwrap(), g);
        assert_eq!(write_edge_list(&parse_edge_list("t", &text).unwrap()), text);
        assert!(parse_edge_list("t", "a b").is_err());
    }
}
