mod support;

use asdim_core::cover::{
    check_r_disjoint, lebesgue_number, validate_decomposition, Cover, CoverCertificate,
    Decomposition,
};
use asdim_core::estimate::{greedy_cover, min_dimension_cover_exact, SearchLimits};
use asdim_core::lift::{check_equivariance, lift_equivariant, pushforward_cover};
use asdim_core::metric::{build_graph_metric, numeric_labels, Edge};
use asdim_core::sspace::{build_sspace, merge_decompositions, restrict_decomposition};
use asdim_core::{quotient, validate_metric, Extended, FiniteMetricSpace, IsometricAction, PointSet, Scalar};
use proptest::prelude::*;
use support::oracle;

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 { a } else { gcd(b, a % b) }
}

/// Order of a permutation: lcm of its cycle lengths.
fn perm_order(p: &[usize]) -> usize {
    let mut seen = vec![false; p.len()];
    let mut order = 1;
    for start in 0..p.len() {
        let mut len = 0;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = p[x];
            len += 1;
        }
        if len > 0 {
            order = order / gcd(order, len) * len;
        }
    }
    order
}

/// Closes `edges` under the permutation and adds a spanning path, so the
/// shortest-path metric is connected and the permutation is an isometry.
fn equivariant_graph(perm: &[usize], extra: &[(usize, usize, i64)]) -> IsometricAction {
    let n = perm.len();
    let order = perm_order(perm);
    let mut base: Vec<(usize, usize, i64)> = (1..n).map(|i| (i - 1, i, 2)).collect();
    base.extend(extra.iter().map(|&(u, v, w)| (u % n, v % n, w)).filter(|&(u, v, _)| u != v));
    let mut edges: Vec<Edge> = Vec::new();
    for (u, v, w) in base {
        let (mut a, mut b) = (u, v);
        for _ in 0..order {
            edges.push((a, b, Scalar::int(w)));
            a = perm[a];
            b = perm[b];
        }
    }
    let space = build_graph_metric(numeric_labels(n), &edges).unwrap();
    IsometricAction::cyclic(space, perm, order).unwrap()
}

fn action_strategy(max: usize) -> impl Strategy<Value = IsometricAction> {
    (2..=max)
        .prop_flat_map(|n| {
            let perm = Just((0..n).collect::<Vec<_>>()).prop_shuffle();
            let extra = prop::collection::vec((0..n, 0..n, 1i64..=3), 0..n);
            (perm, extra)
        })
        .prop_map(|(perm, extra)| equivariant_graph(&perm, &extra))
}

fn random_cover(space: &FiniteMetricSpace, masks: &[u16]) -> Cover {
    let n = space.len();
    let mut members: Vec<PointSet> = masks
        .iter()
        .map(|m| (0..n).filter(|&p| m >> p & 1 == 1).collect::<PointSet>())
        .filter(|s| !s.is_empty())
        .collect();
    let covered = members.iter().fold(PointSet::new(), |acc, m| acc.union(m));
    members.extend(space.points().filter(|&p| !covered.contains(p)).map(PointSet::singleton));
    Cover::new(space, members).unwrap()
}

fn space_strategy(max: usize) -> impl Strategy<Value = FiniteMetricSpace> {
    (1..=max)
        .prop_flat_map(|n| (Just(n), prop::collection::vec((0..n, 0..n, 1i64..=3), 0..2 * n)))
        .prop_map(|(n, extra)| {
            let mut edges: Vec<Edge> = (1..n).map(|i| (i - 1, i, Scalar::int(2))).collect();
            edges.extend(
                extra.into_iter().filter(|&(u, v, _)| u != v).map(|(u, v, w)| (u, v, Scalar::int(w))),
            );
            build_graph_metric(numeric_labels(n), &edges).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn quotient_is_a_metric_and_representative_independent(a in action_strategy(9)) {
        let q = quotient(&a).unwrap();
        prop_assert!(validate_metric(q.space()).is_empty());
        let x = a.space();
        for p in x.points() {
            for r in x.points() {
                let expected = q.space().d(q.project_point(p), q.project_point(r));
                for g in a.group().elements() {
                    let gp = a.apply(g, p);
                    let best = a.group().elements().map(|f| x.d(gp, a.apply(f, r))).min().unwrap();
                    prop_assert_eq!(best, expected);
                }
            }
        }
    }

    #[test]
    fn pushforward_respects_bounds(a in action_strategy(9), masks in prop::collection::vec(any::<u16>(), 1..6)) {
        let q = quotient(&a).unwrap();
        let c = random_cover(a.space(), &masks);
        let before = CoverCertificate::compute(a.space(), &c);
        let (image, after) = pushforward_cover(&a, &q, &c).unwrap();
        prop_assert_eq!(&after, &CoverCertificate::compute(q.space(), &image));
        prop_assert!(after.mesh <= before.mesh);
        prop_assert!(after.lebesgue >= before.lebesgue);
        prop_assert!(after.dimension < a.group().order() * (before.dimension + 1));
    }

    #[test]
    fn lift_postconditions(a in action_strategy(8), r in 1i64..=3) {
        let radius = Scalar::int(r);
        let q = quotient(&a).unwrap();
        let base = greedy_cover(q.space(), radius).unwrap();
        let lift = lift_equivariant(&a, &q, &base.cover, radius).unwrap();
        let s = lift.trace.scale;
        prop_assert_eq!(s, base.certificate.mesh.max(radius));
        let cert = CoverCertificate::compute(a.space(), &lift.cover);
        prop_assert!(check_equivariance(&a, &lift.cover).is_ok());
        prop_assert!(cert.mesh < s.times(4 * (a.group().order() as i64 + 1)));
        prop_assert!(cert.dimension <= base.certificate.dimension);
        prop_assert!(cert.lebesgue >= radius);
        for m in &lift.trace.members {
            let pieces: Vec<PointSet> = m.pieces.iter().map(|p| p.piece.clone()).collect();
            let mut distinct = pieces.clone();
            distinct.dedup();
            prop_assert!(check_r_disjoint(a.space(), &distinct, s.times(2)).is_ok());
            let union = pieces.iter().fold(PointSet::new(), |acc, p| acc.union(p));
            prop_assert_eq!(&union, &m.fiber);
        }
        let g = a.group();
        for x in a.space().points() {
            let h = a.displacement_subgroup(x, s.times(4));
            for f in g.elements() {
                prop_assert_eq!(a.displacement_subgroup(a.apply(f, x), s.times(4)), g.conjugate(f, &h));
            }
        }
    }

    #[test]
    fn sspace_triangle_and_decompositions(
        comps in prop::collection::vec(space_strategy(6), 1..=4),
        base_seed in any::<u64>(),
        r in 1i64..=4,
    ) {
        let basepoints: Vec<PointSet> = comps
            .iter()
            .enumerate()
            .map(|(i, c)| PointSet::singleton((base_seed as usize >> (4 * i)) % c.len()))
            .collect();
        let max_diam = comps.iter().map(|c| c.diameter(&c.all()).unwrap()).max().unwrap();
        let weights: Vec<Scalar> = (0..comps.len()).map(|i| max_diam + Scalar::int(i as i64 + 1)).collect();
        let sp = build_sspace(comps.clone(), basepoints, weights.clone()).unwrap();
        let m = sp.assembled();
        for x in m.points() {
            for y in m.points() {
                for z in m.points() {
                    prop_assert!(m.d(x, z) <= m.d(x, y) + m.d(y, z));
                }
            }
        }
        // Singleton pieces split into enough families to be r-disjoint: one
        // family per point is always valid.
        let r = Scalar::int(r);
        let d = Decomposition::new(r, m.points().map(|p| vec![PointSet::singleton(p)]).collect());
        prop_assert!(validate_decomposition(m, &d).is_valid());
        let parts = restrict_decomposition(&sp, &d).unwrap();
        for (n, part) in parts.iter().enumerate() {
            prop_assert!(validate_decomposition(&sp.components()[n], part).is_valid());
        }
        // Head: the first component, tails: the rest, all with the same
        // family count.
        if comps.len() > 1 {
            let families = m.len();
            let pad = |mut fams: Vec<Vec<PointSet>>| {
                fams.resize(families, Vec::new());
                fams
            };
            let head = Decomposition::new(
                r,
                pad(comps[0].points().map(|p| vec![PointSet::singleton(p)]).collect()),
            );
            let tails: Vec<Decomposition> = comps[1..]
                .iter()
                .map(|c| Decomposition::new(r, pad(c.points().map(|p| vec![PointSet::singleton(p)]).collect())))
                .collect();
            let merged = merge_decompositions(&sp, &head, &tails, r);
            if weights[1] > r {
                prop_assert!(validate_decomposition(m, &merged.unwrap()).is_valid());
            } else {
                prop_assert!(merged.is_err());
            }
        }
    }

    #[test]
    fn exact_search_matches_oracle(m in space_strategy(8), r in 1i64..=4, b in 1i64..=6) {
        let (r, b) = (Scalar::int(r), Scalar::int(b));
        let found = min_dimension_cover_exact(&m, r, b, &SearchLimits::default()).unwrap();
        prop_assert_eq!(found.as_ref().map(|f| f.certificate.dimension), oracle::min_dimension(&m, r, b));
        if let Some(f) = found {
            prop_assert_eq!(&f.certificate, &CoverCertificate::compute(&m, &f.cover));
            prop_assert!(lebesgue_number(&m, &f.cover) >= Extended::Finite(r));
            prop_assert!(f.certificate.mesh <= b);
        }
    }

    #[test]
    fn exact_dimension_is_monotone(m in space_strategy(8), r in 1i64..=3, b in 1i64..=5) {
        let lim = SearchLimits::default();
        let dim = |r: i64, b: i64| {
            min_dimension_cover_exact(&m, Scalar::int(r), Scalar::int(b), &lim)
                .unwrap()
                .map(|f| f.certificate.dimension)
        };
        let base = dim(r, b);
        // None (infeasible) acts as +infinity.
        let le = |a: Option<usize>, b: Option<usize>| match (a, b) {
            (_, None) => true,
            (None, Some(_)) => false,
            (Some(a), Some(b)) => a <= b,
        };
        prop_assert!(le(base, dim(r + 1, b)));
        prop_assert!(le(dim(r, b + 1), base));
    }

    #[test]
    fn greedy_is_certified(m in space_strategy(10), r in 1i64..=4) {
        let g = greedy_cover(&m, Scalar::int(r)).unwrap();
        prop_assert!(g.certificate.lebesgue >= Scalar::int(r));
        prop_assert!(g.certificate.mesh < Scalar::int(4 * r));
        prop_assert_eq!(&g.certificate, &CoverCertificate::compute(&m, &g.cover));
    }
}
