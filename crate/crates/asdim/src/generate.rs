//! Seeded instance generators.
//!
//! All randomness comes from a `ChaCha8Rng` seeded by the caller, so every
//! instance is reproducible from its parameters and seed.

use asdim_core::metric::{build_graph_metric, cycle_space, grid_space, numeric_labels, path_space, Edge};
use asdim_core::{direct_sum, FiniteGroup, FiniteMetricSpace, IsometricAction, PointSet, Scalar};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::CliError;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A space with an optional canonical action.
#[derive(Clone, Debug)]
pub struct Instance {
    pub name: String,
    pub space: FiniteMetricSpace,
    pub action: Option<IsometricAction>,
}

/// Size cap for generated spaces; exact distance tables are quadratic.
pub const MAX_GENERATED_POINTS: usize = 400;

fn check_size(n: usize) -> Result<(), CliError> {
    if n == 0 || n > MAX_GENERATED_POINTS {
        Err(CliError::validation(format!("instance size {n} outside 1..={MAX_GENERATED_POINTS}")))
    } else {
        Ok(())
    }
}

fn perm_order(p: &[usize]) -> usize {
    let mut order = 1;
    let mut x: Vec<usize> = p.to_vec();
    while x.iter().enumerate().any(|(i, &v)| i != v) {
        x = x.iter().map(|&v| p[v]).collect();
        order += 1;
    }
    order
}

/// The cyclic group generated by one isometry.
pub fn cyclic_action(space: FiniteMetricSpace, generator: &[usize]) -> Result<IsometricAction, CliError> {
    let order = perm_order(generator);
    Ok(IsometricAction::cyclic(space, generator, order)?)
}

pub fn path(n: usize, reflect: bool) -> Result<Instance, CliError> {
    check_size(n)?;
    let space = path_space(n);
    let action = if reflect {
        let flip: Vec<usize> = (0..n).rev().collect();
        Some(cyclic_action(space.clone(), &flip)?)
    } else {
        None
    };
    Ok(Instance { name: format!("path{n}"), space, action })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CycleSymmetry {
    None,
    /// Rotation by the given number of steps.
    Rotation(usize),
    Reflection,
}

pub fn cycle(n: usize, symmetry: CycleSymmetry) -> Result<Instance, CliError> {
    check_size(n)?;
    if n < 3 {
        return Err(CliError::validation("a cycle needs at least 3 points"));
    }
    let space = cycle_space(n);
    let generator: Option<Vec<usize>> = match symmetry {
        CycleSymmetry::None => None,
        CycleSymmetry::Rotation(k) => Some((0..n).map(|i| (i + k) % n).collect()),
        CycleSymmetry::Reflection => Some((0..n).map(|i| (n - i) % n).collect()),
    };
    let action = generator.map(|g| cyclic_action(space.clone(), &g)).transpose()?;
    Ok(Instance { name: format!("cycle{n}"), space, action })
}

/// `width × height` grid graph; the canonical action is the 180° rotation.
pub fn grid(width: usize, height: usize, rotate: bool) -> Result<Instance, CliError> {
    check_size(width * height)?;
    let space = grid_space(width, height);
    let action = if rotate {
        let rot: Vec<usize> = (0..width * height).rev().collect();
        Some(cyclic_action(space.clone(), &rot)?)
    } else {
        None
    };
    Ok(Instance { name: format!("grid{width}x{height}"), space, action })
}

/// Ball of the given radius around the origin in the Cayley graph of `Z²`
/// with standard generators (the `L1` metric); the canonical action is the
/// rotation by 90°.
pub fn cayley_ball(radius: usize, rotate: bool) -> Result<Instance, CliError> {
    let r = radius as i64;
    let pts: Vec<(i64, i64)> = (-r..=r)
        .flat_map(|x| (-r..=r).map(move |y| (x, y)))
        .filter(|(x, y)| x.abs() + y.abs() <= r)
        .collect();
    check_size(pts.len())?;
    let labels = pts.iter().map(|(x, y)| format!("({x},{y})")).collect();
    let space = FiniteMetricSpace::from_fn(labels, |i, j| {
        Scalar::int((pts[i].0 - pts[j].0).abs() + (pts[i].1 - pts[j].1).abs())
    })?;
    let action = if rotate && radius > 0 {
        let rot: Vec<usize> = pts
            .iter()
            .map(|&(x, y)| pts.iter().position(|&p| p == (-y, x)).expect("balls are rotation invariant"))
            .collect();
        Some(cyclic_action(space.clone(), &rot)?)
    } else {
        None
    };
    Ok(Instance { name: format!("cayley-ball{radius}"), space, action })
}

fn random_weight(rng: &mut ChaCha8Rng) -> Scalar {
    // Halves keep the metric genuinely rational.
    Scalar::new(rng.random_range(1..=6), 2).expect("nonzero denominator")
}

/// Shortest-path metric of a random connected graph: a random spanning tree
/// plus extra edges, weights in `{1/2, 1, ..., 3}`.
pub fn random_space(n: usize, seed: u64) -> Result<Instance, CliError> {
    check_size(n)?;
    let mut rng = rng(seed);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut edges: Vec<Edge> = Vec::new();
    for i in 1..n {
        let parent = order[rng.random_range(0..i)];
        edges.push((parent, order[i], random_weight(&mut rng)));
    }
    for _ in 0..rng.random_range(0..=n) {
        let (u, v) = (rng.random_range(0..n), rng.random_range(0..n));
        if u != v {
            edges.push((u, v, random_weight(&mut rng)));
        }
    }
    let space = build_graph_metric(numeric_labels(n), &edges)?;
    Ok(Instance { name: format!("random{n}-s{seed}"), space, action: None })
}

/// Groups of order at most 6 used for random actions.
pub fn small_groups() -> Vec<(String, FiniteGroup)> {
    let mut out: Vec<(String, FiniteGroup)> =
        (1..=6).map(|n| (format!("Z{n}"), FiniteGroup::cyclic(n))).collect();
    let v4 = direct_sum(&[FiniteGroup::cyclic(2), FiniteGroup::cyclic(2)], 64)
        .expect("order 4 is below the cap")
        .group;
    out.push(("Z2xZ2".into(), v4));
    out.push(("S3".into(), FiniteGroup::symmetric3()));
    out
}

/// Every subgroup, each as a sorted element list, found as subgroups
/// generated by at most two elements (enough for order <= 6).
pub fn subgroups(g: &FiniteGroup) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = Vec::new();
    for a in g.elements() {
        for b in g.elements() {
            let h = g.generated_subgroup(&[a, b]).expect("elements are in range");
            if !out.contains(&h) {
                out.push(h);
            }
        }
    }
    out.sort_by_key(|h| (h.len(), h.clone()));
    out
}

/// A random isometric action of `group` on at most `max_points` points.
///
/// Points are a disjoint union of coset spaces `G/H` with `G` acting by left
/// multiplication; random edges are closed under the action, so the
/// shortest-path metric is invariant.
pub fn random_action_of(
    group: &FiniteGroup,
    max_points: usize,
    rng: &mut ChaCha8Rng,
) -> Result<IsometricAction, CliError> {
    let subs = subgroups(group);
    let fitting: Vec<&Vec<usize>> = subs.iter().filter(|h| group.order() / h.len() <= max_points).collect();
    // cosets[k] = (orbit index, coset as sorted element list)
    let mut cosets: Vec<(usize, Vec<usize>)> = Vec::new();
    let orbits = rng.random_range(1..=3);
    for o in 0..orbits {
        let room = max_points - cosets.len();
        let options: Vec<&&Vec<usize>> = fitting.iter().filter(|h| group.order() / h.len() <= room).collect();
        if options.is_empty() {
            break;
        }
        let h = options[rng.random_range(0..options.len())];
        let mut seen: Vec<Vec<usize>> = Vec::new();
        for a in group.elements() {
            let mut coset: Vec<usize> = h.iter().map(|&x| group.mul(a, x)).collect();
            coset.sort_unstable();
            if !seen.contains(&coset) {
                seen.push(coset.clone());
                cosets.push((o, coset));
            }
        }
    }
    let n = cosets.len();
    let act = |g: usize, p: usize| -> usize {
        let (o, c) = &cosets[p];
        let mut image: Vec<usize> = c.iter().map(|&x| group.mul(g, x)).collect();
        image.sort_unstable();
        cosets.iter().position(|(o2, c2)| o2 == o && *c2 == image).expect("cosets are permuted")
    };
    let perms: Vec<Vec<usize>> = group.elements().map(|g| (0..n).map(|p| act(g, p)).collect()).collect();

    let mut edges: Vec<Edge> = Vec::new();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut x = x;
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let add_orbit = |u: usize, v: usize, w: Scalar, edges: &mut Vec<Edge>, parent: &mut Vec<usize>| {
        for perm in &perms {
            let (a, b) = (perm[u], perm[v]);
            if a != b {
                edges.push((a, b, w));
                let (ra, rb) = (find(parent, a), find(parent, b));
                parent[ra] = rb;
            }
        }
    };
    let extra = rng.random_range(0..=n / 2);
    let mut added = 0;
    let mut guard = 0;
    while n > 1 && (added < extra || (0..n).any(|p| find(&mut parent, p) != find(&mut parent, 0))) {
        let (u, v) = (rng.random_range(0..n), rng.random_range(0..n));
        let w = random_weight(rng);
        if u != v {
            add_orbit(u, v, w, &mut edges, &mut parent);
            added += 1;
        }
        guard += 1;
        if guard > 10_000 {
            return Err(CliError::internal("random action generator failed to connect its graph"));
        }
    }
    let labels: Vec<String> = cosets
        .iter()
        .map(|(o, c)| format!("o{o}:{}", c.iter().map(|&e| group.name(e)).collect::<Vec<_>>().join("|")))
        .collect();
    let space = build_graph_metric(labels, &edges)?;
    Ok(IsometricAction::new(group.clone(), space, perms)?)
}

/// A random group of order at most 6 acting on at most `max_points` points.
pub fn random_action(max_points: usize, seed: u64) -> Result<(String, IsometricAction), CliError> {
    let mut rng = rng(seed);
    let groups = small_groups();
    let (name, g) = &groups[rng.random_range(0..groups.len())];
    Ok((name.clone(), random_action_of(g, max_points, &mut rng)?))
}

/// Random cover of a space: a few random subsets, then singletons for
/// anything left uncovered.
pub fn random_cover_members(m: &FiniteMetricSpace, rng: &mut ChaCha8Rng) -> Vec<PointSet> {
    let n = m.len();
    let mut members: Vec<PointSet> = Vec::new();
    for _ in 0..rng.random_range(1..=4) {
        let s: PointSet = (0..n).filter(|_| rng.random_bool(0.4)).collect();
        if !s.is_empty() {
            members.push(s);
        }
    }
    let covered = members.iter().fold(PointSet::new(), |acc, s| acc.union(s));
    members.extend((0..n).filter(|&p| !covered.contains(p)).map(PointSet::singleton));
    members
}

/// Named spaces with at most 10 points: paths, cycles, small grids, a
/// Cayley ball, seeded random graphs and quotients of the canonical actions.
pub fn small_corpus() -> Vec<(String, FiniteMetricSpace)> {
    let mut out: Vec<(String, FiniteMetricSpace)> = Vec::new();
    for n in 1..=10 {
        out.push((format!("path{n}"), path_space(n)));
    }
    for n in 3..=10 {
        out.push((format!("cycle{n}"), cycle_space(n)));
    }
    for (w, h) in [(2, 2), (2, 3), (2, 4), (2, 5), (3, 3)] {
        out.push((format!("grid{w}x{h}"), grid_space(w, h)));
    }
    out.push(("cayley-ball1".into(), cayley_ball(1, false).expect("small").space));
    for n in 4..=10 {
        for seed in 0..3 {
            let inst = random_space(n, seed).expect("small");
            out.push((inst.name, inst.space));
        }
    }
    let actions = [
        path(9, true),
        cycle(8, CycleSymmetry::Rotation(4)),
        cycle(10, CycleSymmetry::Reflection),
        grid(4, 4, true),
        grid(3, 5, true),
        cayley_ball(2, true),
    ];
    for inst in actions {
        let inst = inst.expect("small");
        let q = asdim_core::quotient(inst.action.as_ref().expect("canonical action")).expect("valid action");
        if q.space().len() <= 10 {
            out.push((format!("{}-quotient", inst.name), q.space().clone()));
        }
    }
    out
}
