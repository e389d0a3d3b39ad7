//! Registry of named objects loaded from files.
//!
//! Loading is two-phase: every file is parsed first, then objects are built
//! in dependency order, so files may be given in any order. An object is
//! registered only after its validator passes; objects depending on a
//! rejected object are skipped without a second report.

use std::collections::HashSet;
use std::path::Path;

use asdim_core::action::{quotient, ActionError};
use asdim_core::cover::{validate_decomposition, Cover, CoverCertificate, Decomposition};
use asdim_core::lift::lift_equivariant;
use asdim_core::metric::{build_graph_metric, validate_metric, Edge, MetricError};
use asdim_core::sspace::{build_sspace, SSpace};
use asdim_core::{Extended, FiniteGroup, FiniteMetricSpace, IsometricAction, PointSet, Scalar};
use indexmap::IndexMap;

use crate::convert;
use crate::error::{CliError, ErrorClass};
use crate::format::*;

#[derive(Clone, Debug)]
pub struct ActionEntry {
    pub action: IsometricAction,
    pub group: String,
    pub space: String,
}

#[derive(Clone, Debug)]
pub struct CoverEntry {
    pub cover: Cover,
    pub space: String,
    pub doc: CoverDoc,
}

#[derive(Clone, Debug)]
pub struct DecompositionEntry {
    pub decomposition: Decomposition,
    pub space: String,
}

#[derive(Clone, Debug)]
pub struct SSpaceEntry {
    pub sspace: SSpace,
    pub components: Vec<String>,
}

#[derive(Clone, Debug, Default)]
pub struct Workspace {
    pub spaces: IndexMap<String, FiniteMetricSpace>,
    pub groups: IndexMap<String, FiniteGroup>,
    pub actions: IndexMap<String, ActionEntry>,
    pub covers: IndexMap<String, CoverEntry>,
    pub decompositions: IndexMap<String, DecompositionEntry>,
    pub sspaces: IndexMap<String, SSpaceEntry>,
    pub traces: IndexMap<String, LiftTraceDoc>,
    pub profiles: IndexMap<String, ProfileDoc>,
    /// `(kind, id)` in registration order.
    pub registered: Vec<(&'static str, String)>,
}

/// Reads one file: `.json` documents, anything else as an edge list whose id
/// is the file stem.
pub fn read_document(path: &Path) -> Result<Document, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        CliError::resolution(format!("cannot read {}: {e}", path.display())).about(path.display().to_string())
    })?;
    let about = path.display().to_string();
    if path.extension().is_some_and(|e| e == "json") {
        let doc = parse_document(&text)
            .map_err(|e| CliError::validation(format!("{}: {e}", path.display())).about(&about))?;
        if doc.version() != VERSION {
            return Err(CliError::validation(format!(
                "{}: unsupported version {:?}, expected {VERSION:?}",
                path.display(),
                doc.version()
            ))
            .about(doc.id()));
        }
        Ok(doc)
    } else {
        let id = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        parse_edge_list(&id, &text)
            .map(Document::Graph)
            .map_err(|e| CliError::validation(format!("{}: {e}", path.display())).about(&about))
    }
}

fn rank(doc: &Document) -> u8 {
    match doc {
        Document::Space(_) | Document::Graph(_) | Document::Group(_) => 0,
        Document::Sspace(_) => 1,
        Document::Action(_) => 2,
        Document::Cover(_) | Document::Decomposition(_) => 3,
        Document::LiftTrace(_) | Document::Profile(_) => 4,
    }
}

fn scalars(rows: &[Vec<Rat>]) -> Vec<Vec<Scalar>> {
    rows.iter().map(|r| r.iter().map(|x| x.0).collect()).collect()
}

fn point_set(m: &FiniteMetricSpace, pts: &[usize], what: &str) -> Result<PointSet, CliError> {
    if let Some(&p) = pts.iter().find(|&&p| p >= m.len()) {
        return Err(CliError::validation(format!("{what}: point {p} is not in the space ({} points)", m.len())));
    }
    Ok(pts.iter().copied().collect())
}

impl Workspace {
    /// Loads and registers every file; all problems are returned.
    pub fn load_all(paths: &[impl AsRef<Path>]) -> (Workspace, Vec<CliError>) {
        let mut errors = Vec::new();
        let mut docs = Vec::new();
        for p in paths {
            match read_document(p.as_ref()) {
                Ok(d) => docs.push(d),
                Err(e) => errors.push(e),
            }
        }
        let mut ws = Workspace::default();
        errors.extend(ws.register_all(docs));
        (ws, errors)
    }

    /// Loads every file and fails with the most severe problem.
    pub fn open(paths: &[impl AsRef<Path>]) -> Result<Workspace, CliError> {
        let (ws, errors) = Self::load_all(paths);
        match errors.into_iter().max_by_key(|e| e.exit_code()) {
            Some(e) => Err(e),
            None => Ok(ws),
        }
    }

    pub fn register_all(&mut self, mut docs: Vec<Document>) -> Vec<CliError> {
        docs.sort_by_key(rank);
        let mut errors = Vec::new();
        let mut failed: HashSet<String> = HashSet::new();
        for doc in docs {
            let id = doc.id().to_string();
            if self.registered.iter().any(|(_, i)| *i == id) || failed.contains(&id) {
                errors.push(CliError::resolution(format!("duplicate id {id:?}")).about(&id));
                continue;
            }
            let deps = dependencies(&doc);
            if deps.iter().any(|d| failed.contains(d)) {
                failed.insert(id);
                continue;
            }
            let kind = doc.kind();
            match self.register(doc) {
                Ok(()) => self.registered.push((kind, id)),
                Err(e) => {
                    errors.push(e.about(&id));
                    failed.insert(id);
                }
            }
        }
        errors
    }

    pub fn register(&mut self, doc: Document) -> Result<(), CliError> {
        match doc {
            Document::Space(d) => {
                let m = FiniteMetricSpace::from_rows_unchecked(d.labels, scalars(&d.distances))?;
                let violations = validate_metric(&m);
                if !violations.is_empty() {
                    let details = violations.iter().map(|v| convert::metric_violation(&m, v)).collect();
                    return Err(CliError::from(MetricError::Invalid(violations)).with_details(details));
                }
                self.spaces.insert(d.id, m);
            }
            Document::Graph(d) => {
                let index = |l: &str| {
                    d.labels
                        .iter()
                        .position(|x| x == l)
                        .ok_or_else(|| CliError::validation(format!("edge endpoint {l:?} is not a vertex")))
                };
                let edges: Vec<Edge> = d
                    .edges
                    .iter()
                    .map(|(u, v, w)| Ok((index(u)?, index(v)?, w.0)))
                    .collect::<Result<_, CliError>>()?;
                let m = build_graph_metric(d.labels.clone(), &edges)?;
                self.spaces.insert(d.id, m);
            }
            Document::Group(d) => {
                let index = |n: &String| {
                    d.elements
                        .iter()
                        .position(|x| x == n)
                        .ok_or_else(|| CliError::validation(format!("table entry {n:?} is not an element")))
                };
                let table = d
                    .table
                    .iter()
                    .map(|row| row.iter().map(index).collect::<Result<Vec<_>, _>>())
                    .collect::<Result<Vec<_>, _>>()?;
                let g = FiniteGroup::new(d.elements.clone(), table)?;
                self.groups.insert(d.id, g);
            }
            Document::Sspace(d) => {
                let comps = d.components.iter().map(|c| self.space(c).cloned()).collect::<Result<Vec<_>, _>>()?;
                if d.basepoints.len() != comps.len() {
                    return Err(CliError::validation(format!(
                        "{} basepoint sets for {} components",
                        d.basepoints.len(),
                        comps.len()
                    )));
                }
                let basepoints = comps
                    .iter()
                    .zip(&d.basepoints)
                    .map(|(m, b)| point_set(m, b, "basepoints"))
                    .collect::<Result<_, _>>()?;
                let sspace = build_sspace(comps, basepoints, d.f.iter().map(|r| r.0).collect())?;
                self.sspaces.insert(d.id, SSpaceEntry { sspace, components: d.components });
            }
            Document::Action(d) => {
                let g = self.group(&d.group)?.clone();
                let m = self.space(&d.space)?.clone();
                for name in d.perm.keys() {
                    if g.index_of(name).is_none() {
                        return Err(CliError::validation(format!("perm names unknown element {name:?}")));
                    }
                }
                let perms = g
                    .names()
                    .iter()
                    .map(|name| {
                        d.perm
                            .get(name)
                            .cloned()
                            .ok_or_else(|| CliError::validation(format!("no permutation for element {name:?}")))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                let action = match IsometricAction::new(g.clone(), m.clone(), perms.clone()) {
                    Ok(a) => a,
                    Err(ActionError::Invalid(vs)) => {
                        let a = IsometricAction::from_parts_unchecked(g, m, perms)?;
                        let details = vs.iter().map(|v| convert::action_violation(&a, v)).collect();
                        return Err(CliError::from(ActionError::Invalid(vs)).with_details(details));
                    }
                    Err(e) => return Err(e.into()),
                };
                self.actions.insert(d.id, ActionEntry { action, group: d.group, space: d.space });
            }
            Document::Cover(d) => {
                let m = self.space(&d.space)?.clone();
                let members = d
                    .members
                    .iter()
                    .map(|u| point_set(&m, u, "cover member"))
                    .collect::<Result<Vec<_>, _>>()?;
                let cover = Cover::new(&m, members)?;
                if let Some(claimed) = &d.certificate {
                    self.check_certificate(&m, &cover, claimed, d.action.as_deref())?;
                }
                self.covers.insert(d.id.clone(), CoverEntry { cover, space: d.space.clone(), doc: d });
            }
            Document::Decomposition(d) => {
                let m = self.space(&d.space)?;
                let families = d
                    .families
                    .iter()
                    .map(|f| f.iter().map(|p| point_set(m, p, "piece")).collect::<Result<Vec<_>, _>>())
                    .collect::<Result<Vec<_>, _>>()?;
                let decomposition = Decomposition::new(d.r.0, families);
                let report = validate_decomposition(m, &decomposition);
                if !report.is_valid() {
                    return Err(CliError::validation(format!(
                        "invalid decomposition ({} violations)",
                        report.violations.len()
                    ))
                    .with_details(report.violations.iter().map(convert::decomposition_violation).collect()));
                }
                self.decompositions.insert(d.id, DecompositionEntry { decomposition, space: d.space });
            }
            Document::LiftTrace(d) => {
                let entry = self.action(&d.action)?;
                let qcover = self.cover(&d.quotient_cover)?;
                let lifted = self.cover(&d.cover)?;
                let q = quotient(&entry.action)?;
                if !q.space().same_metric(self.space(&qcover.space)?) {
                    return Err(CliError::validation(format!(
                        "cover {:?} does not live on the quotient of {:?}",
                        d.quotient_cover, d.action
                    )));
                }
                let lift = lift_equivariant(&entry.action, &q, &qcover.cover, d.radius.0)?;
                let fresh = convert::trace_doc(
                    &d.id,
                    &d.action,
                    &d.quotient_cover,
                    &d.cover,
                    entry.action.group(),
                    &lift.trace,
                );
                if fresh != d {
                    return Err(CliError::validation("lift trace does not match a recomputed lift"));
                }
                if lift.cover != lifted.cover {
                    return Err(CliError::validation(format!(
                        "cover {:?} is not the lift recorded by the trace",
                        d.cover
                    )));
                }
                self.traces.insert(d.id.clone(), d);
            }
            Document::Profile(d) => {
                let m = self.space(&d.space)?.clone();
                for e in &d.entries {
                    let Some(cid) = &e.cover else { continue };
                    let c = self.cover(cid)?;
                    let cert = CoverCertificate::compute(&m, &c.cover);
                    let ok = c.cover.check_space(&m).is_ok()
                        && Some(cert.dimension) == e.dimension
                        && Some(cert.mesh) == e.mesh.map(|r| r.0)
                        && cert.mesh <= e.mesh_bound.0
                        && cert.lebesgue >= Extended::Finite(e.radius.0);
                    if !ok {
                        return Err(CliError::validation(format!(
                            "profile entry at R = {} disagrees with cover {cid:?}",
                            e.radius.0
                        )));
                    }
                }
                self.profiles.insert(d.id.clone(), d);
            }
        }
        Ok(())
    }

    fn check_certificate(
        &self,
        m: &FiniteMetricSpace,
        cover: &Cover,
        claimed: &CertificateDoc,
        action: Option<&str>,
    ) -> Result<(), CliError> {
        let mut fresh = CoverCertificate::compute(m, cover);
        if let Some(b) = &claimed.ball_meet {
            fresh = fresh.with_ball_meet(m, cover, b.radius.0);
        }
        if claimed.equivariant.is_some() {
            let id = action.ok_or_else(|| {
                CliError::validation("certificate claims equivariance but names no action")
            })?;
            let a = &self.action(id)?.action;
            if !a.space().same_metric(m) {
                return Err(CliError::validation(format!("action {id:?} does not act on the cover's space")));
            }
            fresh = fresh.with_equivariance(a, cover);
        }
        let fresh = convert::certificate_doc(&fresh);
        if &fresh != claimed {
            let detail = serde_json::json!({
                "claimed": serde_json::to_value(claimed).expect("serializes"),
                "recomputed": serde_json::to_value(&fresh).expect("serializes"),
            });
            return Err(CliError::validation("certificate does not match the cover").with_details(vec![detail]));
        }
        Ok(())
    }

    fn missing(kind: &str, id: &str) -> CliError {
        CliError::new(ErrorClass::Resolution, format!("no {kind} with id {id:?}")).about(id)
    }

    /// A metric space by id; S-spaces resolve to their assembled space.
    pub fn space(&self, id: &str) -> Result<&FiniteMetricSpace, CliError> {
        self.spaces
            .get(id)
            .or_else(|| self.sspaces.get(id).map(|s| s.sspace.assembled()))
            .ok_or_else(|| Self::missing("space", id))
    }

    pub fn group(&self, id: &str) -> Result<&FiniteGroup, CliError> {
        self.groups.get(id).ok_or_else(|| Self::missing("group", id))
    }

    pub fn action(&self, id: &str) -> Result<&ActionEntry, CliError> {
        self.actions.get(id).ok_or_else(|| Self::missing("action", id))
    }

    pub fn cover(&self, id: &str) -> Result<&CoverEntry, CliError> {
        self.covers.get(id).ok_or_else(|| Self::missing("cover", id))
    }

    pub fn decomposition(&self, id: &str) -> Result<&DecompositionEntry, CliError> {
        self.decompositions.get(id).ok_or_else(|| Self::missing("decomposition", id))
    }

    pub fn sspace(&self, id: &str) -> Result<&SSpaceEntry, CliError> {
        self.sspaces.get(id).ok_or_else(|| Self::missing("sspace", id))
    }
}

fn dependencies(doc: &Document) -> Vec<String> {
    match doc {
        Document::Space(_) | Document::Graph(_) | Document::Group(_) => vec![],
        Document::Sspace(d) => d.components.clone(),
        Document::Action(d) => vec![d.group.clone(), d.space.clone()],
        Document::Cover(d) => [Some(d.space.clone()), d.action.clone()].into_iter().flatten().collect(),
        Document::Decomposition(d) => vec![d.space.clone()],
        Document::LiftTrace(d) => vec![d.action.clone(), d.quotient_cover.clone(), d.cover.clone()],
        Document::Profile(d) => {
            let mut deps = vec![d.space.clone()];
            deps.extend(d.entries.iter().filter_map(|e| e.cover.clone()));
            deps
        }
    }
}
