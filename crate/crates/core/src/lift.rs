//! Moving covers between a space and its quotient by a finite isometric
//! action.
//!
//! [`pushforward_cover`] projects a cover of `X` to a cover of `F\X`; the
//! dimension can grow by a factor of `|F|`. [`lift_equivariant`] goes the
//! other way and keeps the dimension: each fiber `p^-1(U)` is cut into pieces
//! around the orbit of a basepoint, grouped by the subgroup of elements that
//! move the basepoint by at most `4s`.

use alloc::string::String;
use alloc::vec::Vec;

use crate::action::{IsometricAction, QuotientSpace};
use crate::cover::{dimension, lebesgue_number, mesh, Cover, CoverCertificate, CoverError};
use crate::group::{Element, Subgroup};
use crate::metric::{Point, PointSet};
use crate::scalar::{Extended, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum LiftError {
    #[error("quotient has {got} projected points but the action's space has {expected}")]
    QuotientMismatch { expected: usize, got: usize },
    #[error("target radius must be positive, got {0}")]
    NonPositiveRadius(Scalar),
    #[error("quotient cover has Lebesgue number {lebesgue}, below the target radius {target}")]
    LebesgueBelowTarget { lebesgue: Extended, target: Scalar },
    #[error(transparent)]
    Cover(#[from] CoverError),
    /// A proved postcondition failed; this is a bug, never a data condition.
    #[error("internal assertion failed: {0}")]
    Internal(String),
}

/// A member `U` together with an element `g` whose image `gU` is not a
/// member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivarianceWitness {
    pub member: usize,
    pub element: Element,
    pub image: PointSet,
}

/// `Ok` iff every group element maps every member onto some member.
pub fn check_equivariance(a: &IsometricAction, c: &Cover) -> Result<(), EquivarianceWitness> {
    for (i, u) in c.members().iter().enumerate() {
        for g in a.group().elements() {
            let image = a.image(g, u);
            if !c.has_member(&image) {
                return Err(EquivarianceWitness { member: i, element: g, image });
            }
        }
    }
    Ok(())
}

fn check_quotient(a: &IsometricAction, q: &QuotientSpace) -> Result<(), LiftError> {
    if q.orbit_of().len() != a.space().len() {
        return Err(LiftError::QuotientMismatch {
            expected: a.space().len(),
            got: q.orbit_of().len(),
        });
    }
    Ok(())
}

/// Projects every member of a cover of `X` to `F\X`, dropping duplicate
/// images.
///
/// Certified: mesh does not grow, the Lebesgue number does not shrink, and
/// every orbit meets at most `|F|(n+1)` members.
pub fn pushforward_cover(
    a: &IsometricAction,
    q: &QuotientSpace,
    c: &Cover,
) -> Result<(Cover, CoverCertificate), LiftError> {
    check_quotient(a, q)?;
    c.check_space(a.space())?;
    let mut members: Vec<PointSet> = Vec::new();
    for u in c.members() {
        let image = q.project(u);
        if !members.contains(&image) {
            members.push(image);
        }
    }
    let out = Cover::new(q.space(), members)?;
    let before = CoverCertificate::compute(a.space(), c);
    let after = CoverCertificate::compute(q.space(), &out);

    if after.mesh > before.mesh {
        return Err(internal("pushforward mesh grew", after.mesh, before.mesh));
    }
    if after.lebesgue < before.lebesgue {
        return Err(internal("pushforward Lebesgue number shrank", after.lebesgue, before.lebesgue));
    }
    let bound = a.group().order() * (before.dimension + 1);
    if after.dimension + 1 > bound {
        return Err(internal("pushforward multiplicity exceeds |F|(n+1)", after.dimension + 1, bound));
    }
    Ok((out, after))
}

fn internal(what: &str, got: impl core::fmt::Display, bound: impl core::fmt::Display) -> LiftError {
    LiftError::Internal(alloc::format!("{what}: {got} vs {bound}"))
}

/// One piece `U_{f x_U}` of a lifted fiber.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PieceTrace {
    /// Coset representative `f`.
    pub element: Element,
    /// `f x_U`.
    pub center: Point,
    /// Subgroup generated by the elements moving `f x_U` by at most `4s`.
    pub subgroup: Subgroup,
    pub piece: PointSet,
}

/// Lift of one member `U` of the quotient cover.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MemberTrace {
    pub member: usize,
    /// `x_U`, the lowest-index point of the fiber.
    pub basepoint: Point,
    /// `p^-1(U)`.
    pub fiber: PointSet,
    /// Subgroup at the basepoint; its left cosets index the pieces.
    pub subgroup: Subgroup,
    pub coset_representatives: Vec<Element>,
    pub pieces: Vec<PieceTrace>,
}

/// Full record of an equivariant lift.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftTrace {
    /// Target Lebesgue radius `R`.
    pub radius: Scalar,
    /// Scale `s = max(mesh, R)`.
    pub scale: Scalar,
    pub members: Vec<MemberTrace>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lift {
    pub cover: Cover,
    pub trace: LiftTrace,
    pub certificate: CoverCertificate,
}

/// `U_x = p^-1(U) ∩ ⋃_{f ∈ F_{x,s}} B_s(f x)` with closed balls.
fn piece_at(a: &IsometricAction, fiber: &PointSet, x: Point, s: Scalar) -> (Subgroup, PointSet) {
    let subgroup = a.displacement_subgroup(x, s.times(4));
    let centers: PointSet = subgroup.iter().map(|&f| a.apply(f, x)).collect();
    let piece = fiber
        .iter()
        .filter(|&y| centers.iter().any(|c| a.space().d(y, c) <= s))
        .collect();
    (subgroup, piece)
}

/// Lifts a cover of `F\X` with Lebesgue number at least `radius` to an
/// `F`-equivariant cover of `X`.
///
/// With `s = max(mesh(c), radius)` the result is certified to be
/// equivariant, to have mesh `< 4s(|F|+1)`, dimension at most that of `c`,
/// Lebesgue number at least `radius` (indeed at least
/// `min(lebesgue(c), 2s)`), and per member of `c` pieces that are pairwise
/// more than `2s` apart and union to the fiber. Any failed check is returned
/// as [`LiftError::Internal`].
pub fn lift_equivariant(
    a: &IsometricAction,
    q: &QuotientSpace,
    c: &Cover,
    radius: Scalar,
) -> Result<Lift, LiftError> {
    check_quotient(a, q)?;
    c.check_space(q.space())?;
    if !radius.is_positive() {
        return Err(LiftError::NonPositiveRadius(radius));
    }
    let base_lebesgue = lebesgue_number(q.space(), c);
    if base_lebesgue < radius {
        return Err(LiftError::LebesgueBelowTarget { lebesgue: base_lebesgue, target: radius });
    }
    let s = mesh(q.space(), c).max(radius);
    let group = a.group();

    let mut traces = Vec::with_capacity(c.len());
    let mut members = Vec::new();
    for (idx, u) in c.members().iter().enumerate() {
        let fiber = q.preimage(u);
        let basepoint = fiber.first().expect("fibers of nonempty members are nonempty");
        let (subgroup, _) = piece_at(a, &fiber, basepoint, s);
        let reps = group.coset_representatives(&subgroup).map_err(|e| {
            LiftError::Internal(alloc::format!("displacement subgroup is not a subgroup: {e}"))
        })?;

        // Pieces at every f x_U, to check they only depend on the coset fH.
        let all: Vec<(Subgroup, PointSet)> = group
            .elements()
            .map(|f| piece_at(a, &fiber, a.apply(f, basepoint), s))
            .collect();
        for f in group.elements() {
            let rep = reps
                .iter()
                .copied()
                .find(|&r| subgroup.contains(&group.mul(group.inv(r), f)))
                .expect("cosets partition the group");
            if all[f].1 != all[rep].1 {
                return Err(LiftError::Internal(alloc::format!(
                    "member {idx}: pieces at elements {f} and {rep} differ within one coset"
                )));
            }
            let conj = group.conjugate(f, &subgroup);
            if all[f].0 != conj {
                return Err(LiftError::Internal(alloc::format!(
                    "member {idx}: subgroup at f x_U is not the conjugate for f = {f}"
                )));
            }
        }

        let pieces: Vec<PieceTrace> = reps
            .iter()
            .map(|&f| PieceTrace {
                element: f,
                center: a.apply(f, basepoint),
                subgroup: all[f].0.clone(),
                piece: all[f].1.clone(),
            })
            .collect();

        let union = pieces.iter().fold(PointSet::new(), |acc, p| acc.union(&p.piece));
        if union != fiber {
            return Err(LiftError::Internal(alloc::format!(
                "member {idx}: pieces do not union to the fiber"
            )));
        }
        let separation = s.times(2);
        for (i, p1) in pieces.iter().enumerate() {
            for p2 in &pieces[i + 1..] {
                let d = a.space().set_distance(&p1.piece, &p2.piece);
                if d <= separation {
                    return Err(LiftError::Internal(alloc::format!(
                        "member {idx}: pieces at {} and {} are {d} <= 2s = {separation} apart",
                        p1.center,
                        p2.center
                    )));
                }
            }
        }
        members.extend(pieces.iter().map(|p| p.piece.clone()));
        traces.push(MemberTrace {
            member: idx,
            basepoint,
            fiber,
            subgroup,
            coset_representatives: reps,
            pieces,
        });
    }

    let cover = Cover::new(a.space(), members)?;
    let certificate = CoverCertificate::compute(a.space(), &cover).with_equivariance(a, &cover);

    if let Err(w) = check_equivariance(a, &cover) {
        return Err(LiftError::Internal(alloc::format!(
            "lifted cover is not equivariant: element {} moves member {} off the cover",
            w.element,
            w.member
        )));
    }
    let mesh_bound = s.times(4 * (group.order() as i64 + 1));
    if certificate.mesh >= mesh_bound {
        return Err(internal("lifted mesh is not below 4s(|F|+1)", certificate.mesh, mesh_bound));
    }
    let base_dimension = dimension(c);
    if certificate.dimension > base_dimension {
        return Err(internal("lift raised the dimension", certificate.dimension, base_dimension));
    }
    let floor = base_lebesgue.min(Extended::Finite(s.times(2)));
    if certificate.lebesgue < floor || certificate.lebesgue < radius {
        return Err(internal("lifted Lebesgue number too small", certificate.lebesgue, floor));
    }
    Ok(Lift {
        cover,
        trace: LiftTrace { radius, scale: s, members: traces },
        certificate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::quotient;
    use crate::group::FiniteGroup;
    use crate::metric::{cycle_space, path_space, FiniteMetricSpace};
    use alloc::vec;

    fn s(v: i64) -> Scalar {
        Scalar::int(v)
    }

    fn c4_antipodal() -> IsometricAction {
        IsometricAction::cyclic(cycle_space(4), &[2, 3, 0, 1], 2).unwrap()
    }

    fn reflection(n: usize) -> IsometricAction {
        let flip: Vec<Point> = (0..n).rev().collect();
        IsometricAction::cyclic(path_space(n), &flip, 2).unwrap()
    }

    fn cover(space: &FiniteMetricSpace, members: &[&[Point]]) -> Cover {
        Cover::new(space, members.iter().map(|m| PointSet::from(m.to_vec())).collect()).unwrap()
    }

    #[test]
    fn equivariance_examples() {
        let p5 = path_space(5);
        let triv = IsometricAction::trivial(p5.clone());
        assert!(check_equivariance(&triv, &cover(&p5, &[&[0, 1], &[1, 2, 3, 4]])).is_ok());

        let a = c4_antipodal();
        assert!(check_equivariance(&a, &cover(a.space(), &[&[0, 1], &[2, 3]])).is_ok());
        let w = check_equivariance(&a, &cover(a.space(), &[&[0, 1], &[1, 2, 3]])).unwrap_err();
        assert_eq!(w, EquivarianceWitness { member: 0, element: 1, image: [2, 3].into() });
    }

    #[test]
    fn pushforward_examples() {
        let p5 = path_space(5);
        let triv = IsometricAction::trivial(p5.clone());
        let q = quotient(&triv).unwrap();
        let c = cover(&p5, &[&[0, 1, 2], &[2, 3, 4]]);
        let (out, cert) = pushforward_cover(&triv, &q, &c).unwrap();
        assert_eq!(out, c);
        assert_eq!(cert, CoverCertificate::compute(&p5, &c));

        let a = c4_antipodal();
        let q = quotient(&a).unwrap();
        let c = cover(a.space(), &[&[0, 1], &[1, 2], &[2, 3], &[3, 0]]);
        let (out, cert) = pushforward_cover(&a, &q, &c).unwrap();
        assert_eq!(out.members(), &[PointSet::from([0, 1])]);
        assert_eq!(cert.dimension, 0);

        let a = reflection(5);
        let q = quotient(&a).unwrap();
        let c = cover(a.space(), &[&[0, 1, 2], &[2, 3, 4]]);
        let (out, cert) = pushforward_cover(&a, &q, &c).unwrap();
        assert_eq!(out.members(), &[PointSet::from([0, 1, 2])]);
        assert_eq!(cert.dimension, 0);
        assert_eq!(cert.mesh, s(2));
    }

    #[test]
    fn pushforward_rejects_foreign_cover() {
        let a = reflection(5);
        let q = quotient(&a).unwrap();
        let other = path_space(3);
        let c = Cover::whole(&other);
        assert!(matches!(
            pushforward_cover(&a, &q, &c),
            Err(LiftError::Cover(CoverError::SpaceMismatch { .. }))
        ));
    }

    #[test]
    fn lift_under_trivial_group_is_identity() {
        let p5 = path_space(5);
        let triv = IsometricAction::trivial(p5.clone());
        let q = quotient(&triv).unwrap();
        let c = cover(&p5, &[&[0, 1, 2], &[2, 3, 4]]);
        let lift = lift_equivariant(&triv, &q, &c, s(1)).unwrap();
        assert_eq!(lift.cover, c);
        let mut expected = CoverCertificate::compute(&p5, &c);
        expected.equivariant = Some(true);
        assert_eq!(lift.certificate, expected);
    }

    #[test]
    fn lift_of_whole_quotient_on_p5() {
        let a = reflection(5);
        let q = quotient(&a).unwrap();
        let c = Cover::whole(q.space());
        let lift = lift_equivariant(&a, &q, &c, s(1)).unwrap();
        assert_eq!(lift.trace.scale, s(2));
        let m = &lift.trace.members[0];
        assert_eq!(m.basepoint, 0);
        assert_eq!(m.subgroup, vec![0, 1]);
        assert_eq!(m.coset_representatives, vec![0]);
        assert_eq!(lift.cover.members(), &[path_space(5).all()]);
        assert_eq!(lift.certificate.mesh, s(4));
        assert!(lift.certificate.mesh < s(24));
        assert_eq!(lift.certificate.dimension, 0);
        assert_eq!(lift.certificate.equivariant, Some(true));
    }

    #[test]
    fn lift_on_segment_splits_far_fibers() {
        // Segment [0, 20] with x -> 20 - x; quotient is an 11-point path
        // with orbit i = {i, 20 - i}.
        let a = reflection(21);
        let q = quotient(&a).unwrap();
        assert_eq!(q.space().len(), 11);
        let members: Vec<PointSet> =
            (0..5).map(|k| PointSet::from([2 * k, 2 * k + 1, 2 * k + 2])).collect();
        let c = Cover::new(q.space(), members).unwrap();
        let lift = lift_equivariant(&a, &q, &c, s(1)).unwrap();
        let scale = lift.trace.scale;
        assert_eq!(scale, s(2));
        for m in &lift.trace.members {
            // Brute-force generator condition at the basepoint.
            let x = m.basepoint;
            let moved = a.space().d(x, a.apply(1, x));
            let expected_pieces = if moved <= scale.times(4) { 1 } else { 2 };
            assert_eq!(m.pieces.len(), expected_pieces, "member {}", m.member);
        }
        // Near the ends the reflection moves points far, near the middle not.
        assert_eq!(lift.trace.members[0].pieces.len(), 2);
        assert_eq!(lift.trace.members[4].pieces.len(), 1);
        assert!(check_equivariance(&a, &lift.cover).is_ok());
        assert!(lift.certificate.dimension <= dimension(&c));
    }

    #[test]
    fn lift_requires_lebesgue_target() {
        let a = reflection(5);
        let q = quotient(&a).unwrap();
        let c = Cover::singletons(q.space());
        assert!(matches!(
            lift_equivariant(&a, &q, &c, s(2)),
            Err(LiftError::LebesgueBelowTarget { .. })
        ));
        assert_eq!(
            lift_equivariant(&a, &q, &c, s(0)),
            Err(LiftError::NonPositiveRadius(s(0)))
        );
    }

    #[test]
    fn lift_lebesgue_is_capped_by_piece_separation() {
        // Two points far apart swapped by Z/2: the quotient is one point,
        // covered with infinite Lebesgue number; the lift separates the two
        // points, so the lifted Lebesgue number is finite but still >= 2s.
        let space = FiniteMetricSpace::new(
            vec!["a".into(), "b".into()],
            vec![vec![s(0), s(100)], vec![s(100), s(0)]],
        )
        .unwrap();
        let a = IsometricAction::new(FiniteGroup::cyclic(2), space, vec![vec![0, 1], vec![1, 0]])
            .unwrap();
        let q = quotient(&a).unwrap();
        let lift = lift_equivariant(&a, &q, &Cover::whole(q.space()), s(1)).unwrap();
        assert_eq!(lift.cover.members(), &[PointSet::from([0]), PointSet::from([1])]);
        assert_eq!(lift.certificate.lebesgue, s(100));
    }
}
