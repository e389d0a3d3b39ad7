//! Brute-force reference for minimal cover dimension.
//!
//! Independent of the library search: enumerates every union of open
//! `R`-balls with diameter at most `B` and solves the covering problem over
//! that explicit list by plain depth-first search. Any admissible cover can
//! shrink each member to the union of the balls it contains without raising
//! multiplicities, so this is the minimum over all subsets of the space.

#![allow(dead_code)]

use asdim_core::{FiniteMetricSpace, Scalar};

fn diameter(m: &FiniteMetricSpace, mask: u32) -> Scalar {
    let pts: Vec<usize> = (0..m.len()).filter(|&p| mask >> p & 1 == 1).collect();
    let mut best = Scalar::ZERO;
    for &x in &pts {
        for &y in &pts {
            if m.d(x, y) > best {
                best = m.d(x, y);
            }
        }
    }
    best
}

struct Problem {
    n: usize,
    balls: Vec<u32>,
    candidates: Vec<(u32, u32)>,
}

impl Problem {
    fn search(&self, limit: u32, counts: &mut Vec<u32>, served: u32) -> bool {
        let Some(x) = (0..self.n).find(|&x| served >> x & 1 == 0) else {
            return true;
        };
        for &(set, serves) in &self.candidates {
            if set & self.balls[x] != self.balls[x] {
                continue;
            }
            let pts: Vec<usize> = (0..self.n).filter(|&p| set >> p & 1 == 1).collect();
            if pts.iter().any(|&p| counts[p] >= limit) {
                continue;
            }
            pts.iter().for_each(|&p| counts[p] += 1);
            if self.search(limit, counts, served | serves) {
                return true;
            }
            pts.iter().for_each(|&p| counts[p] -= 1);
        }
        false
    }
}

/// Minimal dimension of a cover with Lebesgue number `>= r` and mesh `<= b`,
/// or `None` if none exists.
pub fn min_dimension(m: &FiniteMetricSpace, r: Scalar, b: Scalar) -> Option<usize> {
    let n = m.len();
    assert!(n <= 16, "oracle is exponential");
    let balls: Vec<u32> = (0..n)
        .map(|x| (0..n).filter(|&y| m.d(x, y) < r).fold(0, |acc, y| acc | 1 << y))
        .collect();
    if balls.iter().any(|&ball| diameter(m, ball) > b) {
        return None;
    }
    let mut sets: Vec<u32> = (1u32..1 << n)
        .map(|t| (0..n).filter(|&x| t >> x & 1 == 1).fold(0, |acc, x| acc | balls[x]))
        .collect();
    sets.sort_unstable();
    sets.dedup();
    let candidates: Vec<(u32, u32)> = sets
        .into_iter()
        .filter(|&s| diameter(m, s) <= b)
        .map(|s| {
            let serves = (0..n).filter(|&x| s & balls[x] == balls[x]).fold(0, |acc, x| acc | 1 << x);
            (s, serves)
        })
        .collect();
    let problem = Problem { n, balls, candidates };
    (1..=n as u32)
        .find(|&limit| problem.search(limit, &mut vec![0; n], 0))
        .map(|limit| limit as usize - 1)
}
