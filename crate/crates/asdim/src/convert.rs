//! Core objects to documents and violation reports to JSON.

use asdim_core::action::ActionViolation;
use asdim_core::cover::{Cover, CoverCertificate, Decomposition, DecompositionViolation};
use asdim_core::estimate::DimensionProfile;
use asdim_core::lift::LiftTrace;
use asdim_core::metric::MetricViolation;
use asdim_core::sspace::SSpace;
use asdim_core::{FiniteGroup, FiniteMetricSpace, IsometricAction, PointSet};
use serde_json::{json, Value};

use crate::format::*;

fn v() -> String {
    VERSION.to_string()
}

fn points(s: &PointSet) -> Vec<usize> {
    s.as_slice().to_vec()
}

fn names(g: &FiniteGroup, elems: &[usize]) -> Vec<String> {
    elems.iter().map(|&e| g.name(e).to_string()).collect()
}

pub fn space_doc(id: &str, m: &FiniteMetricSpace) -> SpaceDoc {
    SpaceDoc {
        version: v(),
        id: id.into(),
        labels: m.labels().to_vec(),
        distances: m.points().map(|x| m.row(x).iter().map(|&d| Rat(d)).collect()).collect(),
    }
}

pub fn group_doc(id: &str, g: &FiniteGroup) -> GroupDoc {
    GroupDoc {
        version: v(),
        id: id.into(),
        elements: g.names().to_vec(),
        table: g.table().iter().map(|row| names(g, row)).collect(),
    }
}

pub fn action_doc(id: &str, group: &str, space: &str, a: &IsometricAction) -> ActionDoc {
    ActionDoc {
        version: v(),
        id: id.into(),
        group: group.into(),
        space: space.into(),
        perm: a.group().elements().map(|g| (a.group().name(g).to_string(), a.perm(g).to_vec())).collect(),
    }
}

pub fn certificate_doc(c: &CoverCertificate) -> CertificateDoc {
    CertificateDoc {
        dimension: c.dimension,
        lebesgue: Ext(c.lebesgue),
        mesh: Rat(c.mesh),
        ball_meet: c.ball_meet.map(|b| BallMeetDoc { radius: Rat(b.radius), count: b.count }),
        equivariant: c.equivariant,
    }
}

pub fn cover_doc(
    id: &str,
    space: &str,
    c: &Cover,
    certificate: Option<&CoverCertificate>,
    action: Option<&str>,
    method: Option<&str>,
) -> CoverDoc {
    CoverDoc {
        version: v(),
        id: id.into(),
        space: space.into(),
        members: c.members().iter().map(points).collect(),
        certificate: certificate.map(certificate_doc),
        action: action.map(Into::into),
        method: method.map(Into::into),
    }
}

pub fn decomposition_doc(id: &str, space: &str, d: &Decomposition) -> DecompositionDoc {
    DecompositionDoc {
        version: v(),
        id: id.into(),
        space: space.into(),
        r: Rat(d.r),
        families: d.families.iter().map(|f| f.iter().map(points).collect()).collect(),
    }
}

pub fn trace_doc(
    id: &str,
    action: &str,
    quotient_cover: &str,
    cover: &str,
    g: &FiniteGroup,
    t: &LiftTrace,
) -> LiftTraceDoc {
    LiftTraceDoc {
        version: v(),
        id: id.into(),
        action: action.into(),
        quotient_cover: quotient_cover.into(),
        cover: cover.into(),
        radius: Rat(t.radius),
        scale: Rat(t.scale),
        members: t
            .members
            .iter()
            .map(|m| MemberTraceDoc {
                member: m.member,
                basepoint: m.basepoint,
                fiber: points(&m.fiber),
                subgroup: names(g, &m.subgroup),
                coset_representatives: names(g, &m.coset_representatives),
                pieces: m
                    .pieces
                    .iter()
                    .map(|p| PieceDoc {
                        element: g.name(p.element).to_string(),
                        center: p.center,
                        subgroup: names(g, &p.subgroup),
                        piece: points(&p.piece),
                    })
                    .collect(),
            })
            .collect(),
    }
}

pub fn sspace_doc(id: &str, components: &[String], s: &SSpace) -> SSpaceDoc {
    SSpaceDoc {
        version: v(),
        id: id.into(),
        components: components.to_vec(),
        basepoints: s.basepoints().iter().map(points).collect(),
        f: s.weights().iter().map(|&w| Rat(w)).collect(),
    }
}

/// `covers[i]` names the cover stored for entry `i`, if any.
pub fn profile_doc(id: &str, space: &str, p: &DimensionProfile, covers: &[Option<String>]) -> ProfileDoc {
    ProfileDoc {
        version: v(),
        id: id.into(),
        space: space.into(),
        entries: p
            .entries
            .iter()
            .zip(covers)
            .map(|(e, cover)| ProfileEntryDoc {
                radius: Rat(e.radius),
                mesh_bound: Rat(e.mesh_bound),
                dimension: e.dimension(),
                mesh: e.mesh().map(Rat),
                method: e.found.as_ref().map_or("infeasible", |f| f.method.tag()).to_string(),
                cover: cover.clone(),
            })
            .collect(),
    }
}

pub fn metric_violation(m: &FiniteMetricSpace, v: &MetricViolation) -> Value {
    let l = |p: usize| m.label(p).to_string();
    match *v {
        MetricViolation::Diagonal { x } => json!({"violation": "diagonal", "x": l(x), "distance": m.d(x, x).to_string()}),
        MetricViolation::NotPositive { x, y } => {
            json!({"violation": "not-positive", "x": l(x), "y": l(y), "distance": m.d(x, y).to_string()})
        }
        MetricViolation::Asymmetric { x, y } => json!({
            "violation": "symmetry", "x": l(x), "y": l(y),
            "d(x,y)": m.d(x, y).to_string(), "d(y,x)": m.d(y, x).to_string(),
        }),
        MetricViolation::Triangle { x, y, z } => json!({
            "violation": "triangle", "x": l(x), "y": l(y), "z": l(z),
            "d(x,z)": m.d(x, z).to_string(),
            "d(x,y)+d(y,z)": (m.d(x, y) + m.d(y, z)).to_string(),
        }),
    }
}

pub fn action_violation(a: &IsometricAction, v: &ActionViolation) -> Value {
    let g = a.group();
    let l = |p: usize| a.space().label(p).to_string();
    match *v {
        ActionViolation::NotBijection { g: e } => json!({"violation": "not-bijection", "element": g.name(e)}),
        ActionViolation::Identity { x } => json!({"violation": "identity-moves-point", "x": l(x)}),
        ActionViolation::ActionLaw { g: e, h, x } => {
            json!({"violation": "action-law", "g": g.name(e), "h": g.name(h), "x": l(x)})
        }
        ActionViolation::Isometry { g: e, x, y } => {
            json!({"violation": "isometry", "element": g.name(e), "x": l(x), "y": l(y)})
        }
    }
}

pub fn decomposition_violation(v: &DecompositionViolation) -> Value {
    match v {
        DecompositionViolation::NegativeRadius => json!({"violation": "negative-radius"}),
        DecompositionViolation::UnknownPoint(p) => json!({"violation": "unknown-point", "point": p}),
        DecompositionViolation::Uncovered(p) => json!({"violation": "uncovered", "point": p}),
        DecompositionViolation::NotDisjoint { family, witness } => json!({
            "violation": "not-r-disjoint",
            "family": family,
            "pieces": [witness.first, witness.second],
            "points": [witness.x, witness.y],
            "distance": witness.distance.to_string(),
        }),
    }
}
