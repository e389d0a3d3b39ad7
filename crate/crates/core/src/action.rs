//! Isometric actions of finite groups on finite metric spaces, orbits and
//! quotient spaces with the min-over-group metric.

use alloc::string::String;
use alloc::vec::Vec;

use crate::group::{find_isomorphism, DirectSum, Element, FiniteGroup, GroupError, Subgroup};
use crate::metric::{FiniteMetricSpace, MetricError, Point, PointSet};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ActionViolation {
    /// The permutation of `g` has the wrong length or is not a bijection.
    NotBijection { g: Element },
    /// The identity moves `x`.
    Identity { x: Point },
    /// `(gh)x != g(hx)`.
    ActionLaw { g: Element, h: Element, x: Point },
    /// `d(gx, gy) != d(x, y)`.
    Isometry { g: Element, x: Point, y: Point },
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ActionError {
    #[error("expected {expected} permutations (one per group element), got {got}")]
    PermutationCount { expected: usize, got: usize },
    #[error("not an isometric action ({} violations)", .0.len())]
    Invalid(Vec<ActionViolation>),
    #[error("no isomorphism between the acting group and factor {0} of the direct sum")]
    NotIsomorphic(usize),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Metric(#[from] MetricError),
}

/// A finite group acting on a finite metric space by permutations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsometricAction {
    group: FiniteGroup,
    space: FiniteMetricSpace,
    perm: Vec<Vec<Point>>,
}

impl IsometricAction {
    /// Builds the action and rejects it unless the action law and the
    /// isometry law hold on every tuple.
    pub fn new(
        group: FiniteGroup,
        space: FiniteMetricSpace,
        perm: Vec<Vec<Point>>,
    ) -> Result<Self, ActionError> {
        let a = Self::from_parts_unchecked(group, space, perm)?;
        let report = validate_action(&a);
        if report.is_empty() {
            Ok(a)
        } else {
            Err(ActionError::Invalid(report))
        }
    }

    /// Checks only that there is one permutation per element.
    pub fn from_parts_unchecked(
        group: FiniteGroup,
        space: FiniteMetricSpace,
        perm: Vec<Vec<Point>>,
    ) -> Result<Self, ActionError> {
        if perm.len() != group.order() {
            return Err(ActionError::PermutationCount { expected: group.order(), got: perm.len() });
        }
        Ok(IsometricAction { group, space, perm })
    }

    pub fn trivial(space: FiniteMetricSpace) -> Self {
        let perm = alloc::vec![space.points().collect()];
        IsometricAction { group: FiniteGroup::trivial(), space, perm }
    }

    /// `Z/n` acting through the powers of one permutation of order dividing
    /// `n`.
    pub fn cyclic(space: FiniteMetricSpace, generator: &[Point], n: usize) -> Result<Self, ActionError> {
        if generator.len() != space.len() || generator.iter().any(|&p| p >= space.len()) {
            return Err(ActionError::Invalid(alloc::vec![ActionViolation::NotBijection { g: 1 }]));
        }
        let mut perm = Vec::with_capacity(n);
        let mut current: Vec<Point> = space.points().collect();
        for _ in 0..n {
            perm.push(current.clone());
            current = current.iter().map(|&p| generator[p]).collect();
        }
        Self::new(FiniteGroup::cyclic(n), space, perm)
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn space(&self) -> &FiniteMetricSpace {
        &self.space
    }

    pub fn perms(&self) -> &[Vec<Point>] {
        &self.perm
    }

    pub fn perm(&self, g: Element) -> &[Point] {
        &self.perm[g]
    }

    /// `g x`.
    #[inline]
    pub fn apply(&self, g: Element, x: Point) -> Point {
        self.perm[g][x]
    }

    pub fn image(&self, g: Element, s: &PointSet) -> PointSet {
        s.image(&self.perm[g])
    }

    /// `F x`.
    pub fn orbit(&self, x: Point) -> PointSet {
        self.group.elements().map(|g| self.apply(g, x)).collect()
    }

    /// `min_f d(x, f y)`.
    pub fn orbit_distance(&self, x: Point, y: Point) -> Scalar {
        self.group
            .elements()
            .map(|f| self.space.d(x, self.apply(f, y)))
            .min()
            .expect("groups are nonempty")
    }

    /// The subgroup generated by every element moving `x` by at most `bound`.
    pub fn displacement_subgroup(&self, x: Point, bound: Scalar) -> Subgroup {
        let gens: Vec<Element> = self
            .group
            .elements()
            .filter(|&f| self.space.d(x, self.apply(f, x)) <= bound)
            .collect();
        self.group.generated_subgroup(&gens).expect("elements come from the group")
    }

    /// Whether `s` is a union of orbits.
    pub fn is_invariant(&self, s: &PointSet) -> bool {
        self.group.elements().all(|g| s.iter().all(|x| s.contains(self.apply(g, x))))
    }
}

/// Lists every failure of bijectivity, the action law, or the isometry law.
pub fn validate_action(a: &IsometricAction) -> Vec<ActionViolation> {
    let n = a.space.len();
    let g = &a.group;
    let mut out = Vec::new();
    let mut bijective = true;
    for (e, p) in a.perm.iter().enumerate() {
        let mut hit = alloc::vec![false; n];
        let ok = p.len() == n
            && p.iter().all(|&y| y < n && !core::mem::replace(&mut hit[y], true));
        if !ok {
            out.push(ActionViolation::NotBijection { g: e });
            bijective = false;
        }
    }
    if !bijective {
        return out;
    }
    for x in 0..n {
        if a.apply(g.identity(), x) != x {
            out.push(ActionViolation::Identity { x });
        }
    }
    for e in g.elements() {
        for h in g.elements() {
            let eh = g.mul(e, h);
            for x in 0..n {
                if a.apply(eh, x) != a.apply(e, a.apply(h, x)) {
                    out.push(ActionViolation::ActionLaw { g: e, h, x });
                }
            }
        }
    }
    for e in g.elements() {
        for x in 0..n {
            for y in x + 1..n {
                if a.space.d(a.apply(e, x), a.apply(e, y)) != a.space.d(x, y) {
                    out.push(ActionViolation::Isometry { g: e, x, y });
                }
            }
        }
    }
    out
}

/// Orbits of the action, ordered by their smallest point.
pub fn orbits(a: &IsometricAction) -> Vec<PointSet> {
    let mut seen = alloc::vec![false; a.space.len()];
    let mut out = Vec::new();
    for x in a.space.points() {
        if seen[x] {
            continue;
        }
        let orbit = a.orbit(x);
        for y in orbit.iter() {
            seen[y] = true;
        }
        out.push(orbit);
    }
    out
}

/// `F\X` together with the projection `X -> F\X`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientSpace {
    space: FiniteMetricSpace,
    orbit_of: Vec<Point>,
    orbits: Vec<PointSet>,
    representatives: Vec<Point>,
}

impl QuotientSpace {
    /// The quotient metric space; its point `i` is the `i`-th orbit.
    pub fn space(&self) -> &FiniteMetricSpace {
        &self.space
    }

    /// The projection `p`.
    pub fn project_point(&self, x: Point) -> Point {
        self.orbit_of[x]
    }

    pub fn orbit_of(&self) -> &[Point] {
        &self.orbit_of
    }

    pub fn orbits(&self) -> &[PointSet] {
        &self.orbits
    }

    /// Lowest-index point of each orbit.
    pub fn representatives(&self) -> &[Point] {
        &self.representatives
    }

    pub fn fiber(&self, q: Point) -> &PointSet {
        &self.orbits[q]
    }

    /// `p(S)`.
    pub fn project(&self, s: &PointSet) -> PointSet {
        s.iter().map(|x| self.orbit_of[x]).collect()
    }

    /// `p^-1(U)`, the union of the fibers over `U`.
    pub fn preimage(&self, u: &PointSet) -> PointSet {
        u.iter().flat_map(|q| self.orbits[q].iter()).collect()
    }
}

/// Builds `F\X` with `d(Fx, Fy) = min_f d(x, f y)`.
pub fn quotient(a: &IsometricAction) -> Result<QuotientSpace, ActionError> {
    let report = validate_action(a);
    if !report.is_empty() {
        return Err(ActionError::Invalid(report));
    }
    let orbits = orbits(a);
    let mut orbit_of = alloc::vec![0; a.space.len()];
    for (i, o) in orbits.iter().enumerate() {
        for x in o.iter() {
            orbit_of[x] = i;
        }
    }
    let representatives: Vec<Point> =
        orbits.iter().map(|o| o.first().expect("orbits are nonempty")).collect();
    let labels: Vec<String> = orbits
        .iter()
        .map(|o| {
            let names: Vec<&str> = o.iter().map(|x| a.space.label(x)).collect();
            alloc::format!("{{{}}}", names.join(","))
        })
        .collect();
    let space = FiniteMetricSpace::from_fn(labels, |i, j| {
        a.orbit_distance(representatives[i], representatives[j])
    })?;
    Ok(QuotientSpace { space, orbit_of, orbits, representatives })
}

/// Lets `sum.group` act through factor `j`: the `j`-th coordinate acts as the
/// corresponding element of `a`'s group (via an isomorphism found by brute
/// force) and all other coordinates act trivially.
pub fn extend_action(
    a: &IsometricAction,
    sum: &DirectSum,
    j: usize,
) -> Result<IsometricAction, ActionError> {
    let factor = sum.factors.get(j).ok_or(ActionError::NotIsomorphic(j))?;
    let iso = find_isomorphism(factor, &a.group).ok_or(ActionError::NotIsomorphic(j))?;
    let perm = sum
        .group
        .elements()
        .map(|x| a.perm[iso[sum.projections[j][x]]].clone())
        .collect();
    IsometricAction::new(sum.group.clone(), a.space.clone(), perm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{cycle_space, path_space, validate_metric};
    use alloc::vec;

    fn s(v: i64) -> Scalar {
        Scalar::int(v)
    }

    pub(crate) fn c4_antipodal() -> IsometricAction {
        IsometricAction::cyclic(cycle_space(4), &[2, 3, 0, 1], 2).unwrap()
    }

    pub(crate) fn p5_reflection() -> IsometricAction {
        IsometricAction::cyclic(path_space(5), &[4, 3, 2, 1, 0], 2).unwrap()
    }

    #[test]
    fn validation_examples() {
        assert!(validate_action(&c4_antipodal()).is_empty());
        assert!(validate_action(&p5_reflection()).is_empty());
        let bad = IsometricAction::from_parts_unchecked(
            FiniteGroup::cyclic(2),
            path_space(5),
            vec![vec![0, 1, 2, 3, 4], vec![1, 0, 2, 3, 4]],
        )
        .unwrap();
        let report = validate_action(&bad);
        assert!(report.contains(&ActionViolation::Isometry { g: 1, x: 0, y: 2 }));
        assert!(report.iter().all(|v| matches!(v, ActionViolation::Isometry { .. })));
    }

    #[test]
    fn validation_catches_law_failures() {
        // Z/3 acting by a permutation of order 2 breaks the action law.
        let bad = IsometricAction::from_parts_unchecked(
            FiniteGroup::cyclic(3),
            cycle_space(4),
            vec![vec![0, 1, 2, 3], vec![2, 3, 0, 1], vec![2, 3, 0, 1]],
        )
        .unwrap();
        assert!(validate_action(&bad)
            .iter()
            .any(|v| matches!(v, ActionViolation::ActionLaw { .. })));
        let not_perm = IsometricAction::from_parts_unchecked(
            FiniteGroup::cyclic(2),
            cycle_space(4),
            vec![vec![0, 1, 2, 3], vec![0, 0, 2, 3]],
        )
        .unwrap();
        assert_eq!(validate_action(&not_perm), vec![ActionViolation::NotBijection { g: 1 }]);
    }

    #[test]
    fn orbit_examples() {
        let o = orbits(&c4_antipodal());
        assert_eq!(o, vec![PointSet::from([0, 2]), PointSet::from([1, 3])]);
        let o = orbits(&IsometricAction::trivial(path_space(5)));
        assert_eq!(o.len(), 5);
        let o = orbits(&p5_reflection());
        assert_eq!(o, vec![PointSet::from([0, 4]), PointSet::from([1, 3]), PointSet::from([2])]);
    }

    #[test]
    fn quotient_examples() {
        let q = quotient(&c4_antipodal()).unwrap();
        assert_eq!(q.space().len(), 2);
        assert_eq!(q.space().d(0, 1), s(1));

        let p5 = path_space(5);
        let q = quotient(&IsometricAction::trivial(p5.clone())).unwrap();
        assert!(q.space().same_metric(&p5));

        let q = quotient(&p5_reflection()).unwrap();
        assert_eq!(q.space().len(), 3);
        assert_eq!(q.space().d(0, 1), s(1));
        assert_eq!(q.space().d(1, 2), s(1));
        assert_eq!(q.space().d(0, 2), s(2));
        assert_eq!(q.space().label(0), "{0,4}");
        assert!(validate_metric(q.space()).is_empty());
        assert_eq!(q.preimage(&PointSet::from([0, 2])), PointSet::from([0, 2, 4]));
        assert_eq!(q.project(&PointSet::from([3, 4])), PointSet::from([0, 1]));
    }

    #[test]
    fn quotient_rejects_invalid_action() {
        let bad = IsometricAction::from_parts_unchecked(
            FiniteGroup::cyclic(2),
            path_space(5),
            vec![vec![0, 1, 2, 3, 4], vec![1, 0, 2, 3, 4]],
        )
        .unwrap();
        assert!(matches!(quotient(&bad), Err(ActionError::Invalid(_))));
    }

    #[test]
    fn displacement_subgroup_is_conjugation_covariant() {
        let a = IsometricAction::cyclic(cycle_space(6), &[1, 2, 3, 4, 5, 0], 6).unwrap();
        let g = a.group();
        for bound in 0..4 {
            for x in a.space().points() {
                let base = a.displacement_subgroup(x, s(bound));
                for h in g.elements() {
                    let moved = a.displacement_subgroup(a.apply(h, x), s(bound));
                    assert_eq!(moved, g.conjugate(h, &base));
                }
            }
        }
    }

    #[test]
    fn extended_action_through_direct_sum() {
        use crate::group::direct_sum;
        let sum = direct_sum(&[FiniteGroup::cyclic(3), FiniteGroup::cyclic(2)], 64).unwrap();
        let ext = extend_action(&p5_reflection(), &sum, 1).unwrap();
        assert_eq!(ext.group().order(), 6);
        assert_eq!(orbits(&ext), orbits(&p5_reflection()));
        let q1 = quotient(&ext).unwrap();
        let q2 = quotient(&p5_reflection()).unwrap();
        assert!(q1.space().same_metric(q2.space()));
        assert_eq!(extend_action(&p5_reflection(), &sum, 0), Err(ActionError::NotIsomorphic(0)));
    }
}
