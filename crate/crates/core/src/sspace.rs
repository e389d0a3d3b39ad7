//! Weighted disjoint unions `S({X_n}, {f(n)})`.
//!
//! Points of different components are at distance
//! `d_n(x, Y_n) + d_m(y, Y_m) + max(f(n), f(m))`, where `Y_n` is a chosen
//! finite basepoint set of `X_n`. The weights must be strictly increasing
//! and dominate `diam Y_n`; the second condition is what makes the formula a
//! metric.

use alloc::string::String;
use alloc::vec::Vec;

use crate::action::{quotient, ActionError, IsometricAction, QuotientSpace};
use crate::cover::{validate_decomposition, Decomposition, DecompositionViolation};
use crate::metric::{FiniteMetricSpace, MetricError, Point, PointSet};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SSpaceError {
    #[error("an S-space needs at least one component")]
    NoComponents,
    #[error("expected {expected} entries (one per component), got {got}")]
    CountMismatch { expected: usize, got: usize },
    #[error("basepoint set of component {0} is empty")]
    EmptyBasepoints(usize),
    #[error("basepoint {point} is not in component {component}")]
    UnknownBasepoint { component: usize, point: Point },
    #[error("weight f({0}) is not positive")]
    NonPositiveWeight(usize),
    #[error("weights are not strictly increasing at component {0}")]
    NotIncreasing(usize),
    #[error("weight f({component}) = {weight} is below diam Y = {diameter}")]
    WeightBelowDiameter { component: usize, weight: Scalar, diameter: Scalar },
    #[error("action {0} does not act on its component")]
    ActionSpaceMismatch(usize),
    #[error("action {0} uses a different group from action 0")]
    GroupMismatch(usize),
    #[error("basepoint set of component {0} is not invariant under the action")]
    NotInvariant(usize),
    #[error("decomposition {what} is invalid ({} violations)", .violations.len())]
    InvalidDecomposition { what: String, violations: Vec<DecompositionViolation> },
    #[error("family counts differ: head has {head}, tail {tail} has {got}")]
    FamilyCountMismatch { head: usize, tail: usize, got: usize },
    #[error("the head must cover at least one component")]
    EmptyHead,
    #[error("cross-component separation f({component}) = {weight} does not exceed r = {r}")]
    SeparationTooSmall { component: usize, weight: Scalar, r: Scalar },
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Action(#[from] ActionError),
    /// A proved identity failed; this is a bug, never a data condition.
    #[error("internal assertion failed: {0}")]
    Internal(String),
}

/// The assembled weighted disjoint union with component bookkeeping.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SSpace {
    components: Vec<FiniteMetricSpace>,
    basepoints: Vec<PointSet>,
    weights: Vec<Scalar>,
    offsets: Vec<usize>,
    assembled: FiniteMetricSpace,
}

/// Builds `S({X_n}, {f(n)})` after checking every precondition.
pub fn build_sspace(
    components: Vec<FiniteMetricSpace>,
    basepoints: Vec<PointSet>,
    weights: Vec<Scalar>,
) -> Result<SSpace, SSpaceError> {
    let k = components.len();
    if k == 0 {
        return Err(SSpaceError::NoComponents);
    }
    for len in [basepoints.len(), weights.len()] {
        if len != k {
            return Err(SSpaceError::CountMismatch { expected: k, got: len });
        }
    }
    for (n, (x, y)) in components.iter().zip(&basepoints).enumerate() {
        if y.is_empty() {
            return Err(SSpaceError::EmptyBasepoints(n));
        }
        if let Some(p) = y.max_point().filter(|&p| !x.contains(p)) {
            return Err(SSpaceError::UnknownBasepoint { component: n, point: p });
        }
        if !weights[n].is_positive() {
            return Err(SSpaceError::NonPositiveWeight(n));
        }
        if n > 0 && weights[n] <= weights[n - 1] {
            return Err(SSpaceError::NotIncreasing(n));
        }
        let diameter = x.diameter(y)?;
        if weights[n] < diameter {
            return Err(SSpaceError::WeightBelowDiameter {
                component: n,
                weight: weights[n],
                diameter,
            });
        }
    }

    let mut offsets = Vec::with_capacity(k + 1);
    let mut total = 0;
    for x in &components {
        offsets.push(total);
        total += x.len();
    }
    offsets.push(total);

    let mut owner = Vec::with_capacity(total);
    let mut labels = Vec::with_capacity(total);
    for (n, x) in components.iter().enumerate() {
        for p in x.points() {
            owner.push((n, p));
            labels.push(alloc::format!("{n}:{}", x.label(p)));
        }
    }
    // d(x, Y_n) for every assembled point.
    let to_base: Vec<Scalar> = owner
        .iter()
        .map(|&(n, p)| {
            components[n]
                .point_set_distance(p, &basepoints[n])
                .finite()
                .expect("basepoint sets are nonempty")
        })
        .collect();
    let assembled = FiniteMetricSpace::from_fn(labels, |i, j| {
        let ((n, x), (m, y)) = (owner[i], owner[j]);
        if n == m {
            components[n].d(x, y)
        } else {
            to_base[i] + to_base[j] + weights[n].max(weights[m])
        }
    })
    .map_err(|e| SSpaceError::Internal(alloc::format!("assembled table is not a metric: {e}")))?;

    Ok(SSpace { components, basepoints, weights, offsets, assembled })
}

impl SSpace {
    pub fn assembled(&self) -> &FiniteMetricSpace {
        &self.assembled
    }

    pub fn components(&self) -> &[FiniteMetricSpace] {
        &self.components
    }

    pub fn basepoints(&self) -> &[PointSet] {
        &self.basepoints
    }

    pub fn weights(&self) -> &[Scalar] {
        &self.weights
    }

    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    /// Assembled index of point `p` of component `n`.
    pub fn global(&self, n: usize, p: Point) -> Point {
        self.offsets[n] + p
    }

    pub fn component_of(&self, p: Point) -> usize {
        self.offsets.partition_point(|&o| o <= p) - 1
    }

    pub fn local_point(&self, p: Point) -> Point {
        p - self.offsets[self.component_of(p)]
    }

    /// Assembled points of component `n`.
    pub fn component_points(&self, n: usize) -> PointSet {
        (self.offsets[n]..self.offsets[n + 1]).collect()
    }

    /// Assembled points of the first `count` components; they are exactly
    /// `0..offset`, so subspace indices agree with assembled indices.
    pub fn prefix_points(&self, count: usize) -> PointSet {
        PointSet::full(self.offsets[count])
    }

    fn to_local(&self, n: usize, s: &PointSet) -> PointSet {
        s.iter()
            .filter(|&p| self.component_of(p) == n)
            .map(|p| p - self.offsets[n])
            .collect()
    }

    fn to_global(&self, n: usize, s: &PointSet) -> PointSet {
        s.iter().map(|p| self.offsets[n] + p).collect()
    }
}

/// Lets one group act on every component at once.
///
/// Each basepoint set must be a union of orbits, which gives
/// `d(hx, Y_n) = d(x, Y_n)` and hence an isometric action on the assembly.
pub fn sspace_componentwise_action(
    s: &SSpace,
    actions: &[IsometricAction],
) -> Result<IsometricAction, SSpaceError> {
    let k = s.component_count();
    if actions.len() != k {
        return Err(SSpaceError::CountMismatch { expected: k, got: actions.len() });
    }
    let group = actions[0].group();
    for (n, a) in actions.iter().enumerate() {
        if !a.space().same_metric(&s.components[n]) {
            return Err(SSpaceError::ActionSpaceMismatch(n));
        }
        if a.group().table() != group.table() {
            return Err(SSpaceError::GroupMismatch(n));
        }
        if !a.is_invariant(&s.basepoints[n]) {
            return Err(SSpaceError::NotInvariant(n));
        }
    }
    let perm = group
        .elements()
        .map(|g| {
            actions
                .iter()
                .enumerate()
                .flat_map(|(n, a)| a.perm(g).iter().map(move |&p| s.offsets[n] + p))
                .collect()
        })
        .collect();
    IsometricAction::new(group.clone(), s.assembled.clone(), perm).map_err(|e| {
        SSpaceError::Internal(alloc::format!("componentwise action is not isometric: {e}"))
    })
}

/// Both sides of `H\S({X_n}, {f(n)}) ≅ S({H\X_n}, {f(n)})` and the explicit
/// distance-preserving bijection between them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientCommutation {
    /// `H\S`.
    pub lhs: QuotientSpace,
    /// `S` over the component quotients with basepoint sets `p(Y_n)`.
    pub rhs: SSpace,
    pub component_quotients: Vec<QuotientSpace>,
    /// `map[i]` is the point of `rhs` matching orbit `i` of `lhs`.
    pub map: Vec<Point>,
}

pub fn sspace_quotient_commute(
    s: &SSpace,
    actions: &[IsometricAction],
) -> Result<QuotientCommutation, SSpaceError> {
    let combined = sspace_componentwise_action(s, actions)?;
    let lhs = quotient(&combined)?;
    let component_quotients: Vec<QuotientSpace> =
        actions.iter().map(quotient).collect::<Result<_, _>>()?;
    let rhs = build_sspace(
        component_quotients.iter().map(|q| q.space().clone()).collect(),
        component_quotients
            .iter()
            .zip(&s.basepoints)
            .map(|(q, y)| q.project(y))
            .collect(),
        s.weights.clone(),
    )?;
    let map: Vec<Point> = lhs
        .representatives()
        .iter()
        .map(|&p| {
            let n = s.component_of(p);
            rhs.global(n, component_quotients[n].project_point(s.local_point(p)))
        })
        .collect();

    let mut hit = alloc::vec![false; rhs.assembled.len()];
    if map.len() != hit.len() || map.iter().any(|&j| core::mem::replace(&mut hit[j], true)) {
        return Err(SSpaceError::Internal("orbit correspondence is not a bijection".into()));
    }
    for i in 0..map.len() {
        for j in 0..map.len() {
            let (l, r) = (lhs.space().d(i, j), rhs.assembled.d(map[i], map[j]));
            if l != r {
                return Err(SSpaceError::Internal(alloc::format!(
                    "orbits {i}, {j}: quotient distance {l} but S-space distance {r}"
                )));
            }
        }
    }
    Ok(QuotientCommutation { lhs, rhs, component_quotients, map })
}

/// Intersects every piece with every component. Pieces keep their family;
/// empty intersections are dropped; indices become component-local.
pub fn restrict_decomposition(
    s: &SSpace,
    d: &Decomposition,
) -> Result<Vec<Decomposition>, SSpaceError> {
    let report = validate_decomposition(&s.assembled, d);
    if !report.is_valid() {
        return Err(SSpaceError::InvalidDecomposition {
            what: "on the assembled space".into(),
            violations: report.violations,
        });
    }
    Ok((0..s.component_count())
        .map(|n| {
            let families = d
                .families
                .iter()
                .map(|fam| {
                    fam.iter()
                        .map(|piece| s.to_local(n, piece))
                        .filter(|p| !p.is_empty())
                        .collect()
                })
                .collect();
            Decomposition::new(d.r, families)
        })
        .collect())
}

/// Glues a decomposition of the first `N` components (in assembled indices)
/// with component-local decompositions of the remaining ones, family by
/// family. Requires `f(N+1) > r` so tail pieces are `r`-disjoint from
/// everything in other components.
pub fn merge_decompositions(
    s: &SSpace,
    head: &Decomposition,
    tails: &[Decomposition],
    r: Scalar,
) -> Result<Decomposition, SSpaceError> {
    let k = s.component_count();
    if tails.len() >= k {
        return Err(SSpaceError::EmptyHead);
    }
    let n_head = k - tails.len();
    let family_count = head.families.len();
    for (t, tail) in tails.iter().enumerate() {
        if tail.families.len() != family_count {
            return Err(SSpaceError::FamilyCountMismatch {
                head: family_count,
                tail: t,
                got: tail.families.len(),
            });
        }
    }
    if let Some(&weight) = s.weights.get(n_head).filter(|_| !tails.is_empty()) {
        if weight <= r {
            return Err(SSpaceError::SeparationTooSmall { component: n_head, weight, r });
        }
    }

    let prefix = s.assembled.subspace(&s.prefix_points(n_head))?;
    let head_at_r = Decomposition::new(r, head.families.clone());
    let report = validate_decomposition(&prefix, &head_at_r);
    if !report.is_valid() {
        return Err(SSpaceError::InvalidDecomposition {
            what: "head".into(),
            violations: report.violations,
        });
    }
    for (t, tail) in tails.iter().enumerate() {
        let tail_at_r = Decomposition::new(r, tail.families.clone());
        let report = validate_decomposition(&s.components[n_head + t], &tail_at_r);
        if !report.is_valid() {
            return Err(SSpaceError::InvalidDecomposition {
                what: alloc::format!("tail {t}"),
                violations: report.violations,
            });
        }
    }

    let families = (0..family_count)
        .map(|j| {
            let mut fam = head.families[j].clone();
            for (t, tail) in tails.iter().enumerate() {
                fam.extend(tail.families[j].iter().map(|p| s.to_global(n_head + t, p)));
            }
            fam
        })
        .collect();
    let merged = Decomposition::new(r, families);
    let report = validate_decomposition(&s.assembled, &merged);
    if !report.is_valid() {
        return Err(SSpaceError::Internal(alloc::format!(
            "merged decomposition is invalid: {:?}",
            report.violations
        )));
    }
    Ok(merged)
}
