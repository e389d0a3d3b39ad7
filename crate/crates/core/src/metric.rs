//! Finite metric spaces with an exact dense distance table.
//!
//! Finite spaces are automatically proper, so properness never has to be
//! modelled separately.

use alloc::collections::BinaryHeap;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Reverse;

use crate::scalar::{Extended, Scalar};

/// Index of a point in its parent space.
pub type Point = usize;

/// A subset of points of some space, kept sorted and duplicate free.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PointSet(Vec<Point>);

impl PointSet {
    pub fn new() -> Self {
        PointSet(Vec::new())
    }

    pub fn singleton(p: Point) -> Self {
        PointSet(alloc::vec![p])
    }

    /// All points `0..n`.
    pub fn full(n: usize) -> Self {
        PointSet((0..n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, p: Point) -> bool {
        self.0.binary_search(&p).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = Point> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[Point] {
        &self.0
    }

    pub fn first(&self) -> Option<Point> {
        self.0.first().copied()
    }

    pub fn max_point(&self) -> Option<Point> {
        self.0.last().copied()
    }

    pub fn insert(&mut self, p: Point) -> bool {
        match self.0.binary_search(&p) {
            Ok(_) => false,
            Err(i) => {
                self.0.insert(i, p);
                true
            }
        }
    }

    pub fn union(&self, other: &PointSet) -> PointSet {
        let mut out = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            let (a, b) = (self.0[i], other.0[j]);
            if a < b {
                out.push(a);
                i += 1;
            } else if b < a {
                out.push(b);
                j += 1;
            } else {
                out.push(a);
                i += 1;
                j += 1;
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        PointSet(out)
    }

    pub fn intersection(&self, other: &PointSet) -> PointSet {
        self.iter().filter(|p| other.contains(*p)).collect()
    }

    pub fn is_subset(&self, other: &PointSet) -> bool {
        self.iter().all(|p| other.contains(p))
    }

    pub fn intersects(&self, other: &PointSet) -> bool {
        self.iter().any(|p| other.contains(p))
    }

    /// Image of the set under a point map (for instance a group element's
    /// permutation).
    pub fn image(&self, map: &[Point]) -> PointSet {
        self.iter().map(|p| map[p]).collect()
    }

    pub fn into_vec(self) -> Vec<Point> {
        self.0
    }
}

impl FromIterator<Point> for PointSet {
    fn from_iter<I: IntoIterator<Item = Point>>(iter: I) -> Self {
        let mut v: Vec<Point> = iter.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        PointSet(v)
    }
}

impl From<Vec<Point>> for PointSet {
    fn from(v: Vec<Point>) -> Self {
        v.into_iter().collect()
    }
}

impl<const N: usize> From<[Point; N]> for PointSet {
    fn from(v: [Point; N]) -> Self {
        v.into_iter().collect()
    }
}

/// Open balls use `d < r`, closed balls use `d <= r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BallMode {
    Open,
    Closed,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MetricViolation {
    /// `d(x, x) != 0`.
    Diagonal { x: Point },
    /// `d(x, y) <= 0` for distinct points.
    NotPositive { x: Point, y: Point },
    Asymmetric { x: Point, y: Point },
    /// `d(x, z) > d(x, y) + d(y, z)`.
    Triangle { x: Point, y: Point, z: Point },
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum MetricError {
    #[error("distance table is not square: {labels} labels, row {row} has {len} entries")]
    Shape { labels: usize, row: usize, len: usize },
    #[error("a metric space needs at least one point")]
    Empty,
    #[error("duplicate point label {0:?}")]
    DuplicateLabel(String),
    #[error("table violates the metric axioms ({} violations)", .0.len())]
    Invalid(Vec<MetricViolation>),
    #[error("graph is disconnected: no path from {0:?} to {1:?}")]
    Disconnected(String, String),
    #[error("edge {u}-{v} has nonpositive weight {weight}")]
    NonPositiveWeight { u: Point, v: Point, weight: Scalar },
    #[error("edge endpoint {0} is not a vertex")]
    UnknownVertex(Point),
    #[error("point {0} is not in the space")]
    UnknownPoint(Point),
    #[error("diameter of the empty set is undefined")]
    EmptySet,
}

/// A finite set of labelled points with an exact distance table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteMetricSpace {
    labels: Vec<String>,
    dist: Vec<Scalar>,
}

impl FiniteMetricSpace {
    /// Builds a space from an explicit table and rejects anything that is
    /// not a genuine metric.
    pub fn new(labels: Vec<String>, rows: Vec<Vec<Scalar>>) -> Result<Self, MetricError> {
        let space = Self::from_rows_unchecked(labels, rows)?;
        let report = validate_metric(&space);
        if report.is_empty() {
            Ok(space)
        } else {
            Err(MetricError::Invalid(report))
        }
    }

    /// Builds a space checking only the shape of the table. Pair this with
    /// [`validate_metric`] when a full violation report is wanted.
    pub fn from_rows_unchecked(
        labels: Vec<String>,
        rows: Vec<Vec<Scalar>>,
    ) -> Result<Self, MetricError> {
        let n = labels.len();
        if n == 0 {
            return Err(MetricError::Empty);
        }
        check_unique(&labels)?;
        if rows.len() != n {
            return Err(MetricError::Shape { labels: n, row: rows.len(), len: 0 });
        }
        let mut dist = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(MetricError::Shape { labels: n, row: i, len: row.len() });
            }
            dist.extend(row);
        }
        Ok(FiniteMetricSpace { labels, dist })
    }

    /// Space whose distance is `dist(i, j)`; the closure is evaluated once per
    /// ordered pair and the result is validated.
    pub fn from_fn(
        labels: Vec<String>,
        mut dist: impl FnMut(Point, Point) -> Scalar,
    ) -> Result<Self, MetricError> {
        let n = labels.len();
        let rows = (0..n).map(|i| (0..n).map(|j| dist(i, j)).collect()).collect();
        Self::new(labels, rows)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, p: Point) -> &str {
        &self.labels[p]
    }

    pub fn index_of(&self, label: &str) -> Option<Point> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn points(&self) -> core::ops::Range<Point> {
        0..self.len()
    }

    pub fn all(&self) -> PointSet {
        PointSet::full(self.len())
    }

    #[inline]
    pub fn d(&self, x: Point, y: Point) -> Scalar {
        self.dist[x * self.len() + y]
    }

    pub fn row(&self, x: Point) -> &[Scalar] {
        let n = self.len();
        &self.dist[x * n..(x + 1) * n]
    }

    /// Same distances, ignoring labels.
    pub fn same_metric(&self, other: &FiniteMetricSpace) -> bool {
        self.dist == other.dist
    }

    pub fn contains(&self, p: Point) -> bool {
        p < self.len()
    }

    pub fn check_point(&self, p: Point) -> Result<(), MetricError> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(MetricError::UnknownPoint(p))
        }
    }

    pub fn check_set(&self, s: &PointSet) -> Result<(), MetricError> {
        match s.max_point() {
            Some(p) if !self.contains(p) => Err(MetricError::UnknownPoint(p)),
            _ => Ok(()),
        }
    }

    pub fn ball(&self, x: Point, r: Scalar, mode: BallMode) -> Result<PointSet, MetricError> {
        self.check_point(x)?;
        let row = self.row(x);
        Ok(self
            .points()
            .filter(|&y| match mode {
                BallMode::Open => row[y] < r,
                BallMode::Closed => row[y] <= r,
            })
            .collect())
    }

    /// Points within `r` (closed) of some point of `s`.
    pub fn neighborhood(&self, s: &PointSet, r: Scalar) -> PointSet {
        self.points()
            .filter(|&y| s.iter().any(|x| self.d(x, y) <= r))
            .collect()
    }

    pub fn diameter(&self, s: &PointSet) -> Result<Scalar, MetricError> {
        self.check_set(s)?;
        if s.is_empty() {
            return Err(MetricError::EmptySet);
        }
        let pts = s.as_slice();
        let mut best = Scalar::ZERO;
        for (i, &x) in pts.iter().enumerate() {
            for &y in &pts[i + 1..] {
                best = best.max(self.d(x, y));
            }
        }
        Ok(best)
    }

    pub fn set_distance(&self, a: &PointSet, b: &PointSet) -> Extended {
        a.iter()
            .flat_map(|x| b.iter().map(move |y| (x, y)))
            .map(|(x, y)| self.d(x, y))
            .min()
            .map_or(Extended::Infinite, Extended::Finite)
    }

    pub fn point_set_distance(&self, x: Point, s: &PointSet) -> Extended {
        s.iter()
            .map(|y| self.d(x, y))
            .min()
            .map_or(Extended::Infinite, Extended::Finite)
    }

    /// The subspace on `s`, with points renumbered in increasing order.
    pub fn subspace(&self, s: &PointSet) -> Result<FiniteMetricSpace, MetricError> {
        self.check_set(s)?;
        if s.is_empty() {
            return Err(MetricError::Empty);
        }
        let labels = s.iter().map(|p| self.labels[p].clone()).collect();
        let dist = s
            .iter()
            .flat_map(|x| s.iter().map(move |y| (x, y)))
            .map(|(x, y)| self.d(x, y))
            .collect();
        Ok(FiniteMetricSpace { labels, dist })
    }
}

fn check_unique(labels: &[String]) -> Result<(), MetricError> {
    let mut sorted: Vec<&String> = labels.iter().collect();
    sorted.sort();
    for w in sorted.windows(2) {
        if w[0] == w[1] {
            return Err(MetricError::DuplicateLabel(w[0].clone()));
        }
    }
    Ok(())
}

/// Lists every violated metric axiom; an empty report means the table is a
/// genuine metric.
pub fn validate_metric(m: &FiniteMetricSpace) -> Vec<MetricViolation> {
    let n = m.len();
    let mut out = Vec::new();
    for x in 0..n {
        if m.d(x, x) != Scalar::ZERO {
            out.push(MetricViolation::Diagonal { x });
        }
        for y in 0..n {
            if x == y {
                continue;
            }
            if !m.d(x, y).is_positive() {
                out.push(MetricViolation::NotPositive { x, y });
            }
            if x < y && m.d(x, y) != m.d(y, x) {
                out.push(MetricViolation::Asymmetric { x, y });
            }
        }
    }
    for x in 0..n {
        for y in 0..n {
            let dxy = m.d(x, y);
            for z in 0..n {
                if m.d(x, z) > dxy + m.d(y, z) {
                    out.push(MetricViolation::Triangle { x, y, z });
                }
            }
        }
    }
    out
}

/// Weighted undirected edge `(u, v, w)`.
pub type Edge = (Point, Point, Scalar);

/// Shortest-path metric of a connected graph with positive edge weights.
pub fn build_graph_metric(
    labels: Vec<String>,
    edges: &[Edge],
) -> Result<FiniteMetricSpace, MetricError> {
    let n = labels.len();
    if n == 0 {
        return Err(MetricError::Empty);
    }
    check_unique(&labels)?;
    let mut adj: Vec<Vec<(Point, Scalar)>> = alloc::vec![Vec::new(); n];
    for &(u, v, w) in edges {
        for p in [u, v] {
            if p >= n {
                return Err(MetricError::UnknownVertex(p));
            }
        }
        if !w.is_positive() {
            return Err(MetricError::NonPositiveWeight { u, v, weight: w });
        }
        adj[u].push((v, w));
        adj[v].push((u, w));
    }

    let mut dist = Vec::with_capacity(n * n);
    for source in 0..n {
        let row = dijkstra(&adj, source);
        for (target, d) in row.iter().enumerate() {
            match d {
                Some(d) => dist.push(*d),
                None => {
                    return Err(MetricError::Disconnected(
                        labels[source].clone(),
                        labels[target].clone(),
                    ))
                }
            }
        }
    }
    Ok(FiniteMetricSpace { labels, dist })
}

fn dijkstra(adj: &[Vec<(Point, Scalar)>], source: Point) -> Vec<Option<Scalar>> {
    let mut best: Vec<Option<Scalar>> = alloc::vec![None; adj.len()];
    let mut heap = BinaryHeap::new();
    best[source] = Some(Scalar::ZERO);
    heap.push(Reverse((Scalar::ZERO, source)));
    while let Some(Reverse((d, u))) = heap.pop() {
        if best[u].is_some_and(|b| b < d) {
            continue;
        }
        for &(v, w) in &adj[u] {
            let nd = d + w;
            if best[v].is_none_or(|b| nd < b) {
                best[v] = Some(nd);
                heap.push(Reverse((nd, v)));
            }
        }
    }
    best
}

/// Labels `"0"`, `"1"`, ... for `n` points.
pub fn numeric_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| alloc::format!("{i}")).collect()
}

/// Unit-weight path `0 - 1 - ... - (n-1)`.
pub fn path_space(n: usize) -> FiniteMetricSpace {
    let edges: Vec<Edge> = (1..n).map(|i| (i - 1, i, Scalar::ONE)).collect();
    build_graph_metric(numeric_labels(n), &edges).expect("paths are connected")
}

/// Unit-weight cycle on `n >= 3` points (or a path for smaller `n`).
pub fn cycle_space(n: usize) -> FiniteMetricSpace {
    let mut edges: Vec<Edge> = (1..n).map(|i| (i - 1, i, Scalar::ONE)).collect();
    if n >= 3 {
        edges.push((n - 1, 0, Scalar::ONE));
    }
    build_graph_metric(numeric_labels(n), &edges).expect("cycles are connected")
}

/// `width x height` grid graph; point `(i, j)` has index `j * width + i`.
pub fn grid_space(width: usize, height: usize) -> FiniteMetricSpace {
    let labels = (0..width * height)
        .map(|p| alloc::format!("({},{})", p % width, p / width))
        .collect();
    let mut edges = Vec::new();
    for j in 0..height {
        for i in 0..width {
            let p = j * width + i;
            if i + 1 < width {
                edges.push((p, p + 1, Scalar::ONE));
            }
            if j + 1 < height {
                edges.push((p, p + width, Scalar::ONE));
            }
        }
    }
    build_graph_metric(labels, &edges).expect("grids are connected")
}
