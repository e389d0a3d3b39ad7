//! Finite-scale cover-dimension estimates.
//!
//! At a scale `R` and mesh bound `B` the question is: what is the smallest
//! dimension of a cover whose members have diameter at most `B` and whose
//! Lebesgue number is at least `R`? These `(R, B)` profiles are the
//! quantities asymptotic dimension quantifies over; nothing here claims to
//! compute asymptotic dimension itself.
//!
//! The exact search rests on one reduction. If `x` is served by member `U`
//! (the open ball `B_R(x)` lies in `U`), shrinking every member to the union
//! of the balls of the points it serves keeps a valid cover and never raises
//! a multiplicity. So it is enough to search over assignments of points to
//! groups, with the member of a group being the union of its points' balls.
//! A group is admissible when its member is contained in some set of the
//! candidate family:
//!
//! * [`CandidateFamily::Subsets`]: every subset of diameter at most `B`,
//!   i.e. no restriction at all; used up to [`SearchLimits::subset_cap`]
//!   points, which by default is every size the exact search accepts;
//! * [`CandidateFamily::Balls`]: closed balls of diameter at most `B`.
//!
//! Above [`SearchLimits::exact_cap`] points callers fall back to
//! [`greedy_cover`].

use alloc::string::String;
use alloc::vec::Vec;

use crate::action::{quotient, ActionError, IsometricAction, QuotientSpace};
use crate::cover::{Cover, CoverCertificate};
use crate::lift::{lift_equivariant, Lift, LiftError};
use crate::metric::{BallMode, FiniteMetricSpace, Point, PointSet};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum EstimateError {
    #[error("{points} points exceed the exact-search cap of {cap}; use the greedy cover")]
    CapExceeded { points: usize, cap: usize },
    #[error("radius must be positive, got {0}")]
    NonPositiveRadius(Scalar),
    #[error("scales must be positive and strictly increasing")]
    BadScales,
    #[error("no cover with Lebesgue number >= {radius} and mesh <= {mesh_bound}")]
    Infeasible { radius: Scalar, mesh_bound: Scalar },
    #[error(transparent)]
    Action(#[from] ActionError),
    #[error(transparent)]
    Lift(#[from] LiftError),
    #[error("internal assertion failed: {0}")]
    Internal(String),
}

/// Hard ceiling from the 64-bit point masks used by the search.
pub const MAX_EXACT_POINTS: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchLimits {
    /// Largest space searched exactly.
    pub exact_cap: usize,
    /// Largest space searched over all subsets rather than balls.
    pub subset_cap: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits { exact_cap: 14, subset_cap: MAX_EXACT_POINTS }
    }
}

impl SearchLimits {
    pub fn with_cap(exact_cap: usize) -> Self {
        SearchLimits { exact_cap, ..Self::default() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CandidateFamily {
    Subsets,
    Balls,
}

impl CandidateFamily {
    pub fn name(self) -> &'static str {
        match self {
            CandidateFamily::Subsets => "subsets",
            CandidateFamily::Balls => "balls",
        }
    }

    pub fn for_size(n: usize, limits: &SearchLimits) -> Self {
        if n <= limits.subset_cap {
            CandidateFamily::Subsets
        } else {
            CandidateFamily::Balls
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    Exact(CandidateFamily),
    Greedy,
}

impl Method {
    pub fn tag(self) -> &'static str {
        match self {
            Method::Exact(CandidateFamily::Subsets) => "exact:subsets",
            Method::Exact(CandidateFamily::Balls) => "exact:balls",
            Method::Greedy => "greedy",
        }
    }
}

/// A cover found by a search, with its recomputed certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoundCover {
    pub cover: Cover,
    pub certificate: CoverCertificate,
    pub method: Method,
}

type Mask = u64;

fn mask_of(s: &PointSet) -> Mask {
    s.iter().fold(0, |m, p| m | (1 << p))
}

fn set_of(mask: Mask) -> PointSet {
    (0..MAX_EXACT_POINTS).filter(|&p| mask >> p & 1 == 1).collect()
}

fn mask_diameter(m: &FiniteMetricSpace, mask: Mask) -> Scalar {
    let pts: Vec<Point> = (0..m.len()).filter(|&p| mask >> p & 1 == 1).collect();
    let mut best = Scalar::ZERO;
    for (i, &x) in pts.iter().enumerate() {
        for &y in &pts[i + 1..] {
            best = best.max(m.d(x, y));
        }
    }
    best
}

/// Admissibility test for group members.
struct Admissible<'a> {
    space: &'a FiniteMetricSpace,
    mesh_bound: Scalar,
    /// Closed balls of diameter <= B, for the ball family.
    balls: Option<Vec<Mask>>,
}

impl Admissible<'_> {
    fn allows(&self, mask: Mask) -> bool {
        match &self.balls {
            Some(balls) => balls.iter().any(|&b| mask & !b == 0),
            None => mask_diameter(self.space, mask) <= self.mesh_bound,
        }
    }
}

fn admissible_balls(m: &FiniteMetricSpace, mesh_bound: Scalar) -> Vec<Mask> {
    let mut out: Vec<Mask> = Vec::new();
    for x in m.points() {
        let mut radii: Vec<Scalar> = m.row(x).to_vec();
        radii.sort();
        radii.dedup();
        for t in radii {
            let ball = m.ball(x, t, BallMode::Closed).expect("x is a point");
            if m.diameter(&ball).expect("balls contain their center") > mesh_bound {
                break;
            }
            let mask = mask_of(&ball);
            if !out.contains(&mask) {
                out.push(mask);
            }
        }
    }
    // Only maximal balls matter for containment.
    let maximal: Vec<Mask> = out
        .iter()
        .copied()
        .filter(|&b| !out.iter().any(|&c| c != b && b & !c == 0))
        .collect();
    maximal
}

/// Depth-first search over assignments of points to groups for a fixed
/// multiplicity bound.
struct AssignmentSearch<'a> {
    order: Vec<Point>,
    balls: Vec<Mask>,
    admissible: Admissible<'a>,
    limit: u8,
    counts: Vec<u8>,
    unions: Vec<Mask>,
}

impl AssignmentSearch<'_> {
    fn run(&mut self, depth: usize) -> bool {
        if depth == self.order.len() {
            return true;
        }
        if !self.forward_check(depth) {
            return false;
        }
        let x = self.order[depth];
        let ball = self.balls[x];
        for g in 0..=self.unions.len() {
            let old = if g < self.unions.len() { self.unions[g] } else { 0 };
            let new = old | ball;
            let added = new & !old;
            if !self.fits(added) || (new != old && !self.admissible.allows(new)) {
                continue;
            }
            self.bump(added, 1);
            if g == self.unions.len() {
                self.unions.push(new);
            } else {
                self.unions[g] = new;
            }
            if self.run(depth + 1) {
                return true;
            }
            if g == self.unions.len() - 1 && old == 0 {
                self.unions.pop();
            } else {
                self.unions[g] = old;
            }
            self.bump(added, -1);
        }
        false
    }

    fn fits(&self, added: Mask) -> bool {
        let mut rest = added;
        while rest != 0 {
            let p = rest.trailing_zeros() as usize;
            if self.counts[p] >= self.limit {
                return false;
            }
            rest &= rest - 1;
        }
        true
    }

    fn bump(&mut self, added: Mask, delta: i8) {
        let mut rest = added;
        while rest != 0 {
            let p = rest.trailing_zeros() as usize;
            self.counts[p] = (self.counts[p] as i8 + delta) as u8;
            rest &= rest - 1;
        }
    }

    /// Every unassigned point must still have somewhere to go.
    fn forward_check(&self, depth: usize) -> bool {
        self.order[depth..].iter().all(|&y| {
            let ball = self.balls[y];
            self.fits(ball)
                || self.unions.iter().any(|&u| {
                    let new = u | ball;
                    self.fits(new & !u) && self.admissible.allows(new)
                })
        })
    }
}

/// Points in breadth-first order by distance from point 0, so consecutive
/// points tend to share groups and conflicts surface early.
fn search_order(m: &FiniteMetricSpace) -> Vec<Point> {
    let mut order: Vec<Point> = m.points().collect();
    order.sort_by_key(|&p| (m.d(0, p), p));
    order
}

/// Minimal-dimension cover with Lebesgue number `>= radius` and mesh
/// `<= mesh_bound`, exact over the candidate family chosen by size.
///
/// Returns `Ok(None)` when no such cover exists in the family.
pub fn min_dimension_cover_exact(
    m: &FiniteMetricSpace,
    radius: Scalar,
    mesh_bound: Scalar,
    limits: &SearchLimits,
) -> Result<Option<FoundCover>, EstimateError> {
    let family = CandidateFamily::for_size(m.len(), limits);
    min_dimension_cover_in(m, radius, mesh_bound, family, limits)
}

/// As [`min_dimension_cover_exact`] with an explicit candidate family.
pub fn min_dimension_cover_in(
    m: &FiniteMetricSpace,
    radius: Scalar,
    mesh_bound: Scalar,
    family: CandidateFamily,
    limits: &SearchLimits,
) -> Result<Option<FoundCover>, EstimateError> {
    let n = m.len();
    let cap = limits.exact_cap.min(MAX_EXACT_POINTS);
    if n > cap {
        return Err(EstimateError::CapExceeded { points: n, cap });
    }
    if !radius.is_positive() {
        return Err(EstimateError::NonPositiveRadius(radius));
    }
    let balls: Vec<Mask> = m
        .points()
        .map(|x| mask_of(&m.ball(x, radius, BallMode::Open).expect("x is a point")))
        .collect();
    let admissible = Admissible {
        space: m,
        mesh_bound,
        balls: match family {
            CandidateFamily::Subsets => None,
            CandidateFamily::Balls => Some(admissible_balls(m, mesh_bound)),
        },
    };
    if balls.iter().any(|&b| !admissible.allows(b)) {
        return Ok(None);
    }
    let mut search = AssignmentSearch {
        order: search_order(m),
        balls,
        admissible,
        limit: 1,
        counts: alloc::vec![0; n],
        unions: Vec::new(),
    };
    // One group per point is always admissible, so the loop terminates by
    // limit = n at the latest.
    for limit in 1..=n as u8 {
        search.limit = limit;
        search.counts.iter_mut().for_each(|c| *c = 0);
        search.unions.clear();
        if search.run(0) {
            let members: Vec<PointSet> = search.unions.iter().map(|&u| set_of(u)).collect();
            let cover = Cover::new(m, members)
                .map_err(|e| EstimateError::Internal(alloc::format!("search cover: {e}")))?;
            let certificate = CoverCertificate::compute(m, &cover);
            if certificate.dimension + 1 != limit as usize
                || certificate.lebesgue < radius
                || certificate.mesh > mesh_bound
            {
                return Err(EstimateError::Internal(alloc::format!(
                    "search returned a cover with certificate {certificate:?} at multiplicity {limit}"
                )));
            }
            return Ok(Some(FoundCover { cover, certificate, method: Method::Exact(family) }));
        }
    }
    Err(EstimateError::Internal("assignment search exhausted every multiplicity".into()))
}

/// Cover by open `2R`-balls around a greedy `R`-net.
///
/// Centers are picked in index order whenever they are more than `R` from
/// every earlier center, so every point lies within `R` of a center and its
/// open `R`-ball lies in that center's open `2R`-ball.
pub fn greedy_cover(m: &FiniteMetricSpace, radius: Scalar) -> Result<FoundCover, EstimateError> {
    if !radius.is_positive() {
        return Err(EstimateError::NonPositiveRadius(radius));
    }
    let mut centers: Vec<Point> = Vec::new();
    for x in m.points() {
        if centers.iter().all(|&c| m.d(x, c) > radius) {
            centers.push(x);
        }
    }
    let members = centers
        .iter()
        .map(|&c| m.ball(c, radius.times(2), BallMode::Open).expect("c is a point"))
        .collect();
    let cover = Cover::new(m, members)
        .map_err(|e| EstimateError::Internal(alloc::format!("greedy cover: {e}")))?;
    let certificate = CoverCertificate::compute(m, &cover);
    if certificate.lebesgue < radius {
        return Err(EstimateError::Internal(alloc::format!(
            "greedy cover has Lebesgue number {} < {radius}",
            certificate.lebesgue
        )));
    }
    Ok(FoundCover { cover, certificate, method: Method::Greedy })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Exact within the cap, greedy above it.
    Auto,
    Exact,
    Greedy,
}

/// Mesh bound used at each scale.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MeshBound {
    Fixed(Scalar),
    /// `B = k R`.
    Multiple(i64),
}

impl Default for MeshBound {
    /// `4R`, the worst mesh of a greedy cover.
    fn default() -> Self {
        MeshBound::Multiple(4)
    }
}

impl MeshBound {
    pub fn at(self, radius: Scalar) -> Scalar {
        match self {
            MeshBound::Fixed(b) => b,
            MeshBound::Multiple(k) => radius.times(k),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EstimateOptions {
    pub mesh_bound: MeshBound,
    pub mode: Mode,
    pub limits: SearchLimits,
}

impl Default for EstimateOptions {
    fn default() -> Self {
        EstimateOptions { mesh_bound: MeshBound::default(), mode: Mode::Auto, limits: SearchLimits::default() }
    }
}

/// Best cover at one scale under the given options.
pub fn estimate_cover(
    m: &FiniteMetricSpace,
    radius: Scalar,
    options: &EstimateOptions,
) -> Result<Option<FoundCover>, EstimateError> {
    let bound = options.mesh_bound.at(radius);
    let exact = match options.mode {
        Mode::Exact => true,
        Mode::Greedy => false,
        Mode::Auto => m.len() <= options.limits.exact_cap.min(MAX_EXACT_POINTS),
    };
    if exact {
        min_dimension_cover_exact(m, radius, bound, &options.limits)
    } else {
        greedy_cover(m, radius).map(Some)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProfileEntry {
    pub radius: Scalar,
    pub mesh_bound: Scalar,
    /// `None` when no admissible cover exists.
    pub found: Option<FoundCover>,
}

impl ProfileEntry {
    pub fn dimension(&self) -> Option<usize> {
        self.found.as_ref().map(|f| f.certificate.dimension)
    }

    pub fn mesh(&self) -> Option<Scalar> {
        self.found.as_ref().map(|f| f.certificate.mesh)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimensionProfile {
    pub entries: Vec<ProfileEntry>,
}

fn check_scales(scales: &[Scalar]) -> Result<(), EstimateError> {
    let positive = scales.iter().all(Scalar::is_positive);
    let increasing = scales.windows(2).all(|w| w[0] < w[1]);
    if positive && increasing {
        Ok(())
    } else {
        Err(EstimateError::BadScales)
    }
}

pub fn asdim_profile(
    m: &FiniteMetricSpace,
    scales: &[Scalar],
    options: &EstimateOptions,
) -> Result<DimensionProfile, EstimateError> {
    check_scales(scales)?;
    let entries = scales
        .iter()
        .map(|&radius| {
            Ok(ProfileEntry {
                radius,
                mesh_bound: options.mesh_bound.at(radius),
                found: estimate_cover(m, radius, options)?,
            })
        })
        .collect::<Result<_, EstimateError>>()?;
    Ok(DimensionProfile { entries })
}

/// An equivariant cover produced by estimating on the quotient and lifting.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivariantCover {
    pub quotient: QuotientSpace,
    pub quotient_cover: FoundCover,
    pub lift: Lift,
}

/// Finds a cover of `F\X` at scale `radius` and lifts it to an
/// `F`-equivariant cover of `X` of the same dimension.
pub fn equivariant_cover_pipeline(
    a: &IsometricAction,
    radius: Scalar,
    options: &EstimateOptions,
) -> Result<EquivariantCover, EstimateError> {
    let q = quotient(a)?;
    let found = estimate_cover(q.space(), radius, options)?.ok_or(EstimateError::Infeasible {
        radius,
        mesh_bound: options.mesh_bound.at(radius),
    })?;
    let lift = lift_equivariant(a, &q, &found.cover, radius)?;
    if lift.certificate.dimension > found.certificate.dimension {
        return Err(EstimateError::Internal("lift raised the quotient cover dimension".into()));
    }
    Ok(EquivariantCover { quotient: q, quotient_cover: found, lift })
}

/// Family maximum at one scale: the uniform dimension and mesh surrogates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniformEntry {
    pub radius: Scalar,
    /// `None` if some member has no admissible cover.
    pub dimension: Option<usize>,
    pub mesh: Option<Scalar>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyProfile {
    pub spaces: Vec<DimensionProfile>,
    pub uniform: Vec<UniformEntry>,
    /// Profiles of the quotients `F_i\X_i`, when actions were given.
    pub quotients: Option<Vec<DimensionProfile>>,
    pub quotient_uniform: Option<Vec<UniformEntry>>,
}

fn uniform(profiles: &[DimensionProfile], scales: &[Scalar]) -> Vec<UniformEntry> {
    scales
        .iter()
        .enumerate()
        .map(|(i, &radius)| {
            let dims: Option<Vec<usize>> =
                profiles.iter().map(|p| p.entries[i].dimension()).collect();
            let meshes: Option<Vec<Scalar>> = profiles.iter().map(|p| p.entries[i].mesh()).collect();
            UniformEntry {
                radius,
                dimension: dims.and_then(|d| d.into_iter().max()),
                mesh: meshes.and_then(|m| m.into_iter().max()),
            }
        })
        .collect()
}

pub fn family_profile(
    spaces: &[FiniteMetricSpace],
    actions: Option<&[IsometricAction]>,
    scales: &[Scalar],
    options: &EstimateOptions,
) -> Result<FamilyProfile, EstimateError> {
    let profiles = spaces
        .iter()
        .map(|m| asdim_profile(m, scales, options))
        .collect::<Result<Vec<_>, _>>()?;
    let uniform_spaces = uniform(&profiles, scales);
    let (quotients, quotient_uniform) = match actions {
        None => (None, None),
        Some(actions) => {
            let qs = actions
                .iter()
                .map(|a| asdim_profile(quotient(a)?.space(), scales, options))
                .collect::<Result<Vec<_>, _>>()?;
            let u = uniform(&qs, scales);
            (Some(qs), Some(u))
        }
    };
    Ok(FamilyProfile { spaces: profiles, uniform: uniform_spaces, quotients, quotient_uniform })
}

/// Outcome of comparing `X` with `F\X` at one `(R, B)` pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Equal,
    /// The quotient needs fewer multiplicities at this scale; a finite-scale
    /// gap, not a contradiction.
    QuotientLower,
    /// The quotient needs more; the mismatch is reported, not asserted.
    QuotientHigher,
    /// One side has no admissible cover.
    Undetermined,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Comparison {
    pub radius: Scalar,
    pub mesh_bound: Scalar,
    pub space: Option<FoundCover>,
    pub quotient: Option<FoundCover>,
    pub verdict: Verdict,
}

/// Exact `(R, B)` dimensions of `X` and `F\X` side by side.
pub fn compare_with_quotient(
    a: &IsometricAction,
    pairs: &[(Scalar, Scalar)],
    limits: &SearchLimits,
) -> Result<Vec<Comparison>, EstimateError> {
    let q = quotient(a)?;
    pairs
        .iter()
        .map(|&(radius, mesh_bound)| {
            let space = min_dimension_cover_exact(a.space(), radius, mesh_bound, limits)?;
            let quot = min_dimension_cover_exact(q.space(), radius, mesh_bound, limits)?;
            let dim = |f: &Option<FoundCover>| f.as_ref().map(|f| f.certificate.dimension);
            let verdict = match (dim(&space), dim(&quot)) {
                (Some(x), Some(y)) if x == y => Verdict::Equal,
                (Some(x), Some(y)) if y < x => Verdict::QuotientLower,
                (Some(_), Some(_)) => Verdict::QuotientHigher,
                _ => Verdict::Undetermined,
            };
            Ok(Comparison { radius, mesh_bound, space, quotient: quot, verdict })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{cycle_space, grid_space, path_space};
    use crate::scalar::Extended;
    use alloc::vec;

    fn s(v: i64) -> Scalar {
        Scalar::int(v)
    }

    #[test]
    fn p5_scale_one_is_zero_dimensional() {
        let p5 = path_space(5);
        let found = min_dimension_cover_exact(&p5, s(1), s(4), &SearchLimits::default())
            .unwrap()
            .unwrap();
        assert_eq!(found.certificate.dimension, 0);
        assert!(found.certificate.lebesgue >= s(1));
        let hand = Cover::new(&p5, vec![[0, 1, 2].into(), [3, 4].into()]).unwrap();
        let cert = CoverCertificate::compute(&p5, &hand);
        assert_eq!((cert.dimension, cert.lebesgue), (0, Extended::Finite(s(1))));
    }

    #[test]
    fn large_mesh_bound_gives_whole_space() {
        for m in [path_space(6), cycle_space(7), grid_space(3, 3)] {
            let b = m.diameter(&m.all()).unwrap();
            let found = min_dimension_cover_exact(&m, s(2), b, &SearchLimits::default())
                .unwrap()
                .unwrap();
            assert_eq!(found.certificate.dimension, 0);
        }
    }

    #[test]
    fn grid_needs_overlap_at_scale_two() {
        let limits = SearchLimits::with_cap(16);
        let grid = grid_space(4, 4);
        let found = min_dimension_cover_exact(&grid, s(2), s(3), &limits).unwrap().unwrap();
        assert_eq!(found.certificate.dimension, 3);
        assert_eq!(found.method, Method::Exact(CandidateFamily::Subsets));
        // Inside closed balls only plus-shaped members fit, one per point.
        let balls = min_dimension_cover_in(&grid, s(2), s(3), CandidateFamily::Balls, &limits)
            .unwrap()
            .unwrap();
        assert_eq!(balls.certificate.dimension, 4);
    }

    #[test]
    fn cap_and_infeasibility() {
        let limits = SearchLimits::default();
        let big = path_space(15);
        assert_eq!(
            min_dimension_cover_exact(&big, s(1), s(2), &limits),
            Err(EstimateError::CapExceeded { points: 15, cap: 14 })
        );
        let p5 = path_space(5);
        assert_eq!(min_dimension_cover_exact(&p5, s(5), s(1), &limits), Ok(None));
    }

    #[test]
    fn greedy_examples() {
        let p5 = path_space(5);
        let g = greedy_cover(&p5, s(1)).unwrap();
        assert_eq!(g.cover.members(), &[[0, 1].into(), [1, 2, 3].into(), [3, 4].into()]);
        assert!(g.certificate.dimension <= 1);

        let single = path_space(1);
        let g = greedy_cover(&single, s(3)).unwrap();
        assert_eq!((g.cover.len(), g.certificate.dimension), (1, 0));

        let c4 = cycle_space(4);
        let g = greedy_cover(&c4, s(1)).unwrap();
        assert!(g.cover.len() <= 2);
        assert!(g.certificate.lebesgue >= s(1));
    }

    #[test]
    fn profiles() {
        let opts = EstimateOptions::default();
        let p5 = path_space(5);
        let prof = asdim_profile(&p5, &[s(1), s(2)], &opts).unwrap();
        for e in &prof.entries {
            assert!(e.dimension().unwrap() <= 1);
            assert_eq!(e.found.as_ref().unwrap().method, Method::Exact(CandidateFamily::Subsets));
        }
        let point = path_space(1);
        let prof = asdim_profile(&point, &[s(1), s(2), s(3)], &opts).unwrap();
        assert!(prof.entries.iter().all(|e| e.dimension() == Some(0)));
        assert_eq!(asdim_profile(&p5, &[s(2), s(1)], &opts), Err(EstimateError::BadScales));

        let grid = grid_space(4, 4);
        let grid_opts = EstimateOptions { limits: SearchLimits::with_cap(16), ..opts };
        let prof = asdim_profile(&grid, &[s(1), s(2)], &grid_opts).unwrap();
        assert!(prof.entries.iter().all(|e| e.dimension().unwrap() <= 2));
        let tight = EstimateOptions { mesh_bound: MeshBound::Fixed(s(3)), ..grid_opts };
        let prof = asdim_profile(&grid, &[s(1), s(2)], &tight).unwrap();
        assert!(prof.entries[1].dimension().unwrap() >= 1);
    }

    #[test]
    fn pipeline_examples() {
        let opts = EstimateOptions::default();
        let p5 = path_space(5);
        let triv = IsometricAction::trivial(p5.clone());
        let out = equivariant_cover_pipeline(&triv, s(1), &opts).unwrap();
        let direct = estimate_cover(&p5, s(1), &opts).unwrap().unwrap();
        assert_eq!(out.lift.cover, direct.cover);

        let refl = IsometricAction::cyclic(p5, &[4, 3, 2, 1, 0], 2).unwrap();
        let out = equivariant_cover_pipeline(&refl, s(1), &opts).unwrap();
        assert!(out.lift.certificate.dimension <= 1);
        let bound = out.lift.trace.scale.times(12);
        assert!(out.lift.certificate.mesh < bound);
        assert_eq!(out.lift.certificate.equivariant, Some(true));

        let flip: Vec<Point> = (0..21).rev().collect();
        let seg = IsometricAction::cyclic(path_space(21), &flip, 2).unwrap();
        let out = equivariant_cover_pipeline(&seg, s(2), &opts).unwrap();
        assert_eq!(out.lift.certificate.dimension, out.quotient_cover.certificate.dimension);
    }

    #[test]
    fn family_dimension_is_member_max() {
        let opts = EstimateOptions { mesh_bound: MeshBound::Fixed(s(2)), ..Default::default() };
        let fam = [path_space(3), path_space(5), path_space(9)];
        let prof = family_profile(&fam, None, &[s(1), s(2)], &opts).unwrap();
        for (i, u) in prof.uniform.iter().enumerate() {
            let max = prof.spaces.iter().map(|p| p.entries[i].dimension().unwrap()).max();
            assert_eq!(u.dimension, max);
        }
    }
    #[test]
    fn rotated_grid_family_matches_its_quotients() {
        let opts = EstimateOptions { limits: SearchLimits::with_cap(16), ..Default::default() };
        let grids: Vec<FiniteMetricSpace> = (2..=4).map(|w| grid_space(w, w)).collect();
        let actions: Vec<IsometricAction> = grids
            .iter()
            .map(|g| {
                let rev: Vec<Point> = (0..g.len()).rev().collect();
                IsometricAction::cyclic(g.clone(), &rev, 2).unwrap()
            })
            .collect();
        let prof = family_profile(&grids, Some(&actions), &[s(1), s(2)], &opts).unwrap();
        let quot = prof.quotient_uniform.unwrap();
        for (u, q) in prof.uniform.iter().zip(&quot) {
            assert_eq!(u.dimension, q.dimension, "scale {}", u.radius);
        }
    }
}
