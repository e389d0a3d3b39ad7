//! Covers and `r`-disjoint decompositions, with certificates that are always
//! recomputed from the raw sets.
//!
//! Lebesgue numbers use open balls: a cover has Lebesgue number at least `R`
//! when every open ball `{y : d(x, y) < R}` lies inside some member. With
//! that reading the exact Lebesgue number is
//! `min_x max_U d(x, X \ U)`, which needs no search.

use alloc::string::String;
use alloc::vec::Vec;

use crate::action::IsometricAction;
use crate::metric::{FiniteMetricSpace, Point, PointSet};
use crate::scalar::{Extended, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum CoverError {
    #[error("cover member {0} is empty")]
    EmptyMember(usize),
    #[error("point {0} is not in the space")]
    UnknownPoint(Point),
    #[error("point {0} is not covered")]
    Uncovered(Point),
    #[error("cover lives on a space with {got} points, expected {expected}")]
    SpaceMismatch { expected: usize, got: usize },
    #[error("invalid decomposition ({} violations)", .0.len())]
    InvalidDecomposition(Vec<DecompositionViolation>),
    #[error("internal assertion failed: {0}")]
    Internal(String),
}

/// A finite cover of a finite metric space by nonempty point sets.
///
/// The cover remembers the size of its space; operations that need
/// distances take the space explicitly and check the size matches.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cover {
    n_points: usize,
    members: Vec<PointSet>,
}

impl Cover {
    pub fn new(space: &FiniteMetricSpace, members: Vec<PointSet>) -> Result<Self, CoverError> {
        let n = space.len();
        let mut covered = alloc::vec![false; n];
        for (i, m) in members.iter().enumerate() {
            if m.is_empty() {
                return Err(CoverError::EmptyMember(i));
            }
            for p in m.iter() {
                if p >= n {
                    return Err(CoverError::UnknownPoint(p));
                }
                covered[p] = true;
            }
        }
        if let Some(p) = covered.iter().position(|c| !c) {
            return Err(CoverError::Uncovered(p));
        }
        Ok(Cover { n_points: n, members })
    }

    /// The cover with the whole space as its only member.
    pub fn whole(space: &FiniteMetricSpace) -> Self {
        Cover { n_points: space.len(), members: alloc::vec![space.all()] }
    }

    pub fn singletons(space: &FiniteMetricSpace) -> Self {
        Cover { n_points: space.len(), members: space.points().map(PointSet::singleton).collect() }
    }

    pub fn members(&self) -> &[PointSet] {
        &self.members
    }

    pub fn into_members(self) -> Vec<PointSet> {
        self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn check_space(&self, space: &FiniteMetricSpace) -> Result<(), CoverError> {
        if space.len() == self.n_points {
            Ok(())
        } else {
            Err(CoverError::SpaceMismatch { expected: space.len(), got: self.n_points })
        }
    }

    /// Number of members containing `x`.
    pub fn multiplicity(&self, x: Point) -> usize {
        self.members.iter().filter(|m| m.contains(x)).count()
    }

    /// Whether `s` equals some member (as a set).
    pub fn has_member(&self, s: &PointSet) -> bool {
        self.members.iter().any(|m| m == s)
    }
}

/// Maximum multiplicity minus one.
pub fn dimension(c: &Cover) -> usize {
    let mut counts = alloc::vec![0usize; c.n_points];
    for m in &c.members {
        for p in m.iter() {
            counts[p] += 1;
        }
    }
    counts.into_iter().max().unwrap_or(0).saturating_sub(1)
}

/// `min_x max_U d(x, X \ U)`, infinite when some member is the whole space.
pub fn lebesgue_number(space: &FiniteMetricSpace, c: &Cover) -> Extended {
    space
        .points()
        .map(|x| {
            c.members
                .iter()
                .map(|u| complement_distance(space, x, u))
                .max()
                .unwrap_or(Extended::Finite(Scalar::ZERO))
        })
        .min()
        .unwrap_or(Extended::Infinite)
}

/// `d(x, X \ U)`.
fn complement_distance(space: &FiniteMetricSpace, x: Point, u: &PointSet) -> Extended {
    space
        .points()
        .filter(|&y| !u.contains(y))
        .map(|y| space.d(x, y))
        .min()
        .map_or(Extended::Infinite, Extended::Finite)
}

/// Largest member diameter.
pub fn mesh(space: &FiniteMetricSpace, c: &Cover) -> Scalar {
    c.members
        .iter()
        .map(|m| space.diameter(m).expect("cover members are nonempty"))
        .max()
        .unwrap_or(Scalar::ZERO)
}

/// Maximum over points `x` of the number of members meeting the open ball
/// `B_R(x)`.
pub fn ball_meet_count(space: &FiniteMetricSpace, c: &Cover, radius: Scalar) -> usize {
    space
        .points()
        .map(|x| {
            c.members
                .iter()
                .filter(|u| u.iter().any(|y| space.d(x, y) < radius))
                .count()
        })
        .max()
        .unwrap_or(0)
}

/// Two pieces of a family that are not `r`-disjoint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DisjointnessWitness {
    pub first: usize,
    pub second: usize,
    pub x: Point,
    pub y: Point,
    pub distance: Scalar,
}

/// `Ok` iff every two distinct pieces are at distance `> r`; otherwise the
/// first offending pair with a closest pair of points.
pub fn check_r_disjoint(
    space: &FiniteMetricSpace,
    family: &[PointSet],
    r: Scalar,
) -> Result<(), DisjointnessWitness> {
    for (i, a) in family.iter().enumerate() {
        for (j, b) in family.iter().enumerate().skip(i + 1) {
            let closest = a
                .iter()
                .flat_map(|x| b.iter().map(move |y| (x, y)))
                .min_by_key(|&(x, y)| space.d(x, y));
            if let Some((x, y)) = closest {
                let distance = space.d(x, y);
                if distance <= r {
                    return Err(DisjointnessWitness { first: i, second: j, x, y, distance });
                }
            }
        }
    }
    Ok(())
}

pub fn is_r_disjoint(space: &FiniteMetricSpace, family: &[PointSet], r: Scalar) -> bool {
    check_r_disjoint(space, family, r).is_ok()
}

/// `X = U_0 ∪ ... ∪ U_n` with each `U_j` an `r`-disjoint union of pieces.
///
/// Empty families and empty pieces are allowed; they contribute nothing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub r: Scalar,
    pub families: Vec<Vec<PointSet>>,
}

impl Decomposition {
    pub fn new(r: Scalar, families: Vec<Vec<PointSet>>) -> Self {
        Decomposition { r, families }
    }

    pub fn pieces(&self) -> impl Iterator<Item = &PointSet> {
        self.families.iter().flatten()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecompositionViolation {
    NegativeRadius,
    UnknownPoint(Point),
    Uncovered(Point),
    NotDisjoint { family: usize, witness: DisjointnessWitness },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionReport {
    pub violations: Vec<DecompositionViolation>,
    /// Largest piece diameter, `None` when there are no nonempty pieces.
    pub piece_mesh: Option<Scalar>,
}

impl DecompositionReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn validate_decomposition(space: &FiniteMetricSpace, d: &Decomposition) -> DecompositionReport {
    let mut violations = Vec::new();
    if d.r.is_negative() {
        violations.push(DecompositionViolation::NegativeRadius);
    }
    let n = space.len();
    let mut covered = alloc::vec![false; n];
    let mut in_range = true;
    for piece in d.pieces() {
        for p in piece.iter() {
            if p < n {
                covered[p] = true;
            } else {
                violations.push(DecompositionViolation::UnknownPoint(p));
                in_range = false;
            }
        }
    }
    if !in_range {
        return DecompositionReport { violations, piece_mesh: None };
    }
    violations.extend(
        covered
            .iter()
            .enumerate()
            .filter(|(_, c)| !**c)
            .map(|(p, _)| DecompositionViolation::Uncovered(p)),
    );
    for (j, family) in d.families.iter().enumerate() {
        if let Err(witness) = check_r_disjoint(space, family, d.r) {
            violations.push(DecompositionViolation::NotDisjoint { family: j, witness });
        }
    }
    let piece_mesh = d
        .pieces()
        .filter(|p| !p.is_empty())
        .map(|p| space.diameter(p).expect("nonempty piece"))
        .max();
    DecompositionReport { violations, piece_mesh }
}

/// Multiplicity witness at a radius: at most `count` members meet any open
/// ball of that radius.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BallMeet {
    pub radius: Scalar,
    pub count: usize,
}

/// Recomputable summary of a cover.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverCertificate {
    pub dimension: usize,
    pub lebesgue: Extended,
    pub mesh: Scalar,
    pub ball_meet: Option<BallMeet>,
    pub equivariant: Option<bool>,
}

impl CoverCertificate {
    pub fn compute(space: &FiniteMetricSpace, c: &Cover) -> Self {
        CoverCertificate {
            dimension: dimension(c),
            lebesgue: lebesgue_number(space, c),
            mesh: mesh(space, c),
            ball_meet: None,
            equivariant: None,
        }
    }

    pub fn with_ball_meet(mut self, space: &FiniteMetricSpace, c: &Cover, radius: Scalar) -> Self {
        self.ball_meet = Some(BallMeet { radius, count: ball_meet_count(space, c, radius) });
        self
    }

    pub fn with_equivariance(mut self, a: &IsometricAction, c: &Cover) -> Self {
        self.equivariant = Some(crate::lift::check_equivariance(a, c).is_ok());
        self
    }

    /// Recomputes every present field from the cover and compares.
    /// Equivariance can only be rechecked when the action is supplied.
    pub fn verify(
        &self,
        space: &FiniteMetricSpace,
        c: &Cover,
        action: Option<&IsometricAction>,
    ) -> bool {
        if c.check_space(space).is_err() {
            return false;
        }
        let mut fresh = Self::compute(space, c);
        if let Some(b) = self.ball_meet {
            fresh = fresh.with_ball_meet(space, c, b.radius);
        }
        match (self.equivariant, action) {
            (Some(_), Some(a)) => fresh = fresh.with_equivariance(a, c),
            (Some(flag), None) => fresh.equivariant = Some(flag),
            (None, _) => {}
        }
        fresh == *self
    }
}

/// Thickens every piece to its closed `r/4`-neighbourhood.
///
/// Two pieces of one family are more than `r` apart, so their thickenings
/// stay more than `r/2` apart and each point meets at most one thickened
/// piece per family; every point sits in a piece, so the open `r/4`-ball
/// around it lies in that piece's thickening.
pub fn decomposition_to_cover(
    space: &FiniteMetricSpace,
    d: &Decomposition,
) -> Result<(Cover, CoverCertificate), CoverError> {
    let report = validate_decomposition(space, d);
    if !report.is_valid() {
        return Err(CoverError::InvalidDecomposition(report.violations));
    }
    let radius = d.r / Scalar::int(4);
    let members: Vec<PointSet> = d
        .pieces()
        .filter(|p| !p.is_empty())
        .map(|p| space.neighborhood(p, radius))
        .collect();
    let cover = Cover::new(space, members)?;
    let cert = CoverCertificate::compute(space, &cover);
    let families = d.families.len().max(1);
    if cert.dimension + 1 > families {
        return Err(CoverError::Internal(alloc::format!(
            "thickened cover has dimension {} with {} families",
            cert.dimension,
            families
        )));
    }
    if cert.lebesgue < radius {
        return Err(CoverError::Internal(alloc::format!(
            "thickened cover has Lebesgue number {} < r/4 = {}",
            cert.lebesgue,
            radius
        )));
    }
    Ok((cover, cert))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{cycle_space, path_space, BallMode};
    use alloc::vec;

    fn s(v: i64) -> Scalar {
        Scalar::int(v)
    }

    fn cover(space: &FiniteMetricSpace, members: &[&[Point]]) -> Cover {
        Cover::new(space, members.iter().map(|m| PointSet::from(m.to_vec())).collect()).unwrap()
    }

    /// Lebesgue oracle: the largest `R` among all pairwise distances (and
    /// infinity) such that every open `R`-ball sits in a member.
    fn lebesgue_oracle(space: &FiniteMetricSpace, c: &Cover) -> Extended {
        let ok = |r: Scalar| {
            space.points().all(|x| {
                let ball = space.ball(x, r, BallMode::Open).unwrap();
                c.members().iter().any(|u| ball.is_subset(u))
            })
        };
        let mut radii: Vec<Scalar> = space
            .points()
            .flat_map(|x| space.points().map(move |y| (x, y)))
            .map(|(x, y)| space.d(x, y))
            .collect();
        radii.sort();
        radii.dedup();
        let big = *radii.last().unwrap() + Scalar::ONE;
        if ok(big) {
            return Extended::Infinite;
        }
        // The admissible set is downward closed and only changes just above
        // a distance value, so the supremum is one of the distances.
        Extended::Finite(radii.into_iter().rev().find(|&r| ok(r)).unwrap())
    }

    #[test]
    fn cover_construction_errors() {
        let p5 = path_space(5);
        assert_eq!(
            Cover::new(&p5, vec![PointSet::from([0, 1, 2])]),
            Err(CoverError::Uncovered(3))
        );
        assert_eq!(
            Cover::new(&p5, vec![p5.all(), PointSet::new()]),
            Err(CoverError::EmptyMember(1))
        );
        assert_eq!(Cover::new(&p5, vec![PointSet::from([0, 9])]), Err(CoverError::UnknownPoint(9)));
    }

    #[test]
    fn dimension_examples() {
        let p5 = path_space(5);
        assert_eq!(dimension(&cover(&p5, &[&[0, 1, 2], &[2, 3, 4]])), 1);
        assert_eq!(dimension(&cover(&p5, &[&[0, 1], &[2], &[3, 4]])), 0);
        let c4 = cycle_space(4);
        assert_eq!(dimension(&cover(&c4, &[&[0, 1], &[1, 2], &[2, 3], &[3, 0]])), 1);
    }

    #[test]
    fn lebesgue_examples() {
        let p5 = path_space(5);
        assert_eq!(lebesgue_number(&p5, &Cover::whole(&p5)), Extended::Infinite);
        assert_eq!(lebesgue_number(&p5, &cover(&p5, &[&[0, 1, 2], &[2, 3, 4]])), s(1));
        assert_eq!(lebesgue_number(&p5, &cover(&p5, &[&[0, 1, 2, 3], &[1, 2, 3, 4]])), s(2));
    }

    #[test]
    fn lebesgue_matches_ball_containment_oracle() {
        let p7 = path_space(7);
        let c8 = cycle_space(8);
        let cases: Vec<(FiniteMetricSpace, Vec<&[Point]>)> = vec![
            (p7.clone(), vec![&[0, 1, 2, 3], &[2, 3, 4, 5, 6]]),
            (p7.clone(), vec![&[0, 1, 2, 3, 4, 5, 6]]),
            (p7, vec![&[0], &[1], &[2], &[3], &[4], &[5], &[6]]),
            (c8.clone(), vec![&[0, 1, 2, 3, 4], &[4, 5, 6, 7, 0]]),
            (c8, vec![&[7, 0, 1, 2], &[1, 2, 3, 4], &[3, 4, 5, 6], &[5, 6, 7, 0]]),
        ];
        for (space, members) in cases {
            let c = cover(&space, &members);
            assert_eq!(lebesgue_number(&space, &c), lebesgue_oracle(&space, &c));
        }
    }

    #[test]
    fn mesh_examples() {
        let p5 = path_space(5);
        assert_eq!(mesh(&p5, &Cover::singletons(&p5)), s(0));
        assert_eq!(mesh(&p5, &cover(&p5, &[&[0, 1, 2], &[2, 3, 4]])), s(2));
        let c4 = cycle_space(4);
        assert_eq!(mesh(&c4, &cover(&c4, &[&[0, 1, 2], &[3]])), s(2));
    }

    #[test]
    fn r_disjointness() {
        let p5 = path_space(5);
        let fam = [PointSet::from([0]), PointSet::from([4])];
        assert!(is_r_disjoint(&p5, &fam, s(3)));
        assert_eq!(
            check_r_disjoint(&p5, &fam, s(4)),
            Err(DisjointnessWitness { first: 0, second: 1, x: 0, y: 4, distance: s(4) })
        );
        assert!(is_r_disjoint(&p5, &[PointSet::from([0, 1]), PointSet::from([3, 4])], s(1)));
        assert!(is_r_disjoint(&p5, &[], s(100)));
    }

    #[test]
    fn decomposition_validation() {
        let p5 = path_space(5);
        let d = Decomposition::new(s(1), vec![vec![[0, 1].into()], vec![[3, 4].into()]]);
        let report = validate_decomposition(&p5, &d);
        assert_eq!(report.violations, vec![DecompositionViolation::Uncovered(2)]);

        let d = Decomposition::new(s(1), vec![vec![[0, 1].into(), [3, 4].into()], vec![[2].into()]]);
        let report = validate_decomposition(&p5, &d);
        assert!(report.is_valid());
        assert_eq!(report.piece_mesh, Some(s(1)));

        let c4 = cycle_space(4);
        let d = Decomposition::new(s(2), vec![vec![[0].into(), [2].into()]]);
        let report = validate_decomposition(&c4, &d);
        assert_eq!(report.violations.len(), 3);
        assert!(report.violations.contains(&DecompositionViolation::Uncovered(1)));
        assert!(report.violations.contains(&DecompositionViolation::Uncovered(3)));
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, DecompositionViolation::NotDisjoint { family: 0, .. })));
    }

    #[test]
    fn decomposition_to_cover_examples() {
        let p5 = path_space(5);
        let d = Decomposition::new(s(0), vec![vec![p5.all()]]);
        let (c, cert) = decomposition_to_cover(&p5, &d).unwrap();
        assert_eq!(c.members(), &[p5.all()]);
        assert_eq!(cert.dimension, 0);

        let d = Decomposition::new(s(1), vec![vec![[0, 1].into(), [3, 4].into()], vec![[2].into()]]);
        let (c, cert) = decomposition_to_cover(&p5, &d).unwrap();
        assert_eq!(c.members(), &[[0, 1].into(), [3, 4].into(), [2].into()]);
        assert_eq!(cert.dimension, 0);
        assert!(cert.lebesgue >= Scalar::new(1, 4).unwrap());
        // Recomputed exactly: the partition's complement distances are all >= 1.
        assert_eq!(cert.lebesgue, s(1));

        let seg = path_space(9);
        let d = Decomposition::new(s(4), vec![vec![[0, 1, 2, 3].into()], vec![[4, 5, 6, 7, 8].into()]]);
        let (c, cert) = decomposition_to_cover(&seg, &d).unwrap();
        assert_eq!(c.members(), &[[0, 1, 2, 3, 4].into(), [3, 4, 5, 6, 7, 8].into()]);
        assert_eq!(cert.dimension, 1);
        assert!(cert.lebesgue >= s(1));

        let bad = Decomposition::new(s(4), vec![vec![[0].into(), [4].into()]]);
        assert!(matches!(
            decomposition_to_cover(&p5, &bad),
            Err(CoverError::InvalidDecomposition(_))
        ));
    }

    #[test]
    fn ball_meet_examples() {
        let p5 = path_space(5);
        assert_eq!(ball_meet_count(&p5, &Cover::singletons(&p5), s(1)), 1);
        let c = cover(&p5, &[&[0, 1, 2], &[2, 3, 4]]);
        assert_eq!(ball_meet_count(&p5, &c, s(2)), 2);
        assert_eq!(ball_meet_count(&p5, &c, Scalar::new(1, 2).unwrap()), 2);
    }

    #[test]
    fn certificate_round_trip() {
        let p5 = path_space(5);
        let c = cover(&p5, &[&[0, 1, 2], &[2, 3, 4]]);
        let cert = CoverCertificate::compute(&p5, &c).with_ball_meet(&p5, &c, s(2));
        assert!(cert.verify(&p5, &c, None));
        let mut forged = cert.clone();
        forged.dimension = 0;
        assert!(!forged.verify(&p5, &c, None));
    }
}
