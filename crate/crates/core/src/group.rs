//! Finite groups given by explicit multiplication tables.
//!
//! Orders here are tiny, so every axiom is checked by exhaustion and every
//! subgroup/coset computation is a plain closure loop.

use alloc::string::String;
use alloc::vec::Vec;

/// Index of a group element.
pub type Element = usize;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum GroupError {
    #[error("a group needs at least one element")]
    Empty,
    #[error("multiplication table row {row} has {len} entries, expected {order}")]
    Shape { order: usize, row: usize, len: usize },
    #[error("table entry {a}*{b} = {value} is out of range")]
    OutOfRange { a: Element, b: Element, value: Element },
    #[error("no identity element")]
    NoIdentity,
    #[error("associativity fails for ({0}, {1}, {2})")]
    NotAssociative(Element, Element, Element),
    #[error("element {0} has no inverse")]
    NoInverse(Element),
    #[error("element {0} is not in the group")]
    UnknownElement(Element),
    #[error("subset is not a subgroup: {0}*{1} leaves it")]
    NotSubgroup(Element, Element),
    #[error("direct sum would have order {order}, above the cap {cap}")]
    OrderCap { order: usize, cap: usize },
}

/// A finite group: element names, a multiplication table and the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    names: Vec<String>,
    mul: Vec<Element>,
    identity: Element,
    inverse: Vec<Element>,
}

/// A subgroup as a sorted list of element indices.
pub type Subgroup = Vec<Element>;

impl FiniteGroup {
    /// Validates the table exhaustively (closure, identity, associativity,
    /// inverses) and builds the group.
    pub fn new(names: Vec<String>, table: Vec<Vec<Element>>) -> Result<Self, GroupError> {
        let n = names.len();
        if n == 0 {
            return Err(GroupError::Empty);
        }
        if table.len() != n {
            return Err(GroupError::Shape { order: n, row: table.len(), len: 0 });
        }
        let mut mul = Vec::with_capacity(n * n);
        for (a, row) in table.into_iter().enumerate() {
            if row.len() != n {
                return Err(GroupError::Shape { order: n, row: a, len: row.len() });
            }
            for (b, &value) in row.iter().enumerate() {
                if value >= n {
                    return Err(GroupError::OutOfRange { a, b, value });
                }
            }
            mul.extend(row);
        }
        let at = |a: Element, b: Element| mul[a * n + b];

        let identity = (0..n)
            .find(|&e| (0..n).all(|a| at(e, a) == a && at(a, e) == a))
            .ok_or(GroupError::NoIdentity)?;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if at(at(a, b), c) != at(a, at(b, c)) {
                        return Err(GroupError::NotAssociative(a, b, c));
                    }
                }
            }
        }
        let mut inverse = Vec::with_capacity(n);
        for a in 0..n {
            let inv = (0..n)
                .find(|&b| at(a, b) == identity && at(b, a) == identity)
                .ok_or(GroupError::NoInverse(a))?;
            inverse.push(inv);
        }
        Ok(FiniteGroup { names, mul, identity, inverse })
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    /// `Z/n` with elements `0..n` under addition.
    pub fn cyclic(n: usize) -> Self {
        assert!(n > 0, "cyclic group of order 0");
        let names = (0..n).map(|i| alloc::format!("{i}")).collect();
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::new(names, table).expect("cyclic table is a group")
    }

    /// Dihedral group of order `2n`: element `k` is the rotation `r^k` and
    /// element `n + k` is the reflection `s r^k`.
    pub fn dihedral(n: usize) -> Self {
        assert!(n > 0, "dihedral group of order 0");
        let names = (0..n)
            .map(|k| alloc::format!("r{k}"))
            .chain((0..n).map(|k| alloc::format!("sr{k}")))
            .collect();
        // (s^a r^i)(s^b r^j) = s^(a+b) r^((-1)^b i + j)
        let table = (0..2 * n)
            .map(|x| {
                let (a, i) = (x / n, x % n);
                (0..2 * n)
                    .map(|y| {
                        let (b, j) = (y / n, y % n);
                        let rot = if b == 0 { (i + j) % n } else { (n - i + j) % n };
                        ((a + b) % 2) * n + rot
                    })
                    .collect()
            })
            .collect();
        Self::new(names, table).expect("dihedral table is a group")
    }

    /// `S3` realised as the dihedral group of order 6.
    pub fn symmetric3() -> Self {
        Self::dihedral(3)
    }

    pub fn order(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, g: Element) -> &str {
        &self.names[g]
    }

    pub fn index_of(&self, name: &str) -> Option<Element> {
        self.names.iter().position(|n| n == name)
    }

    pub fn identity(&self) -> Element {
        self.identity
    }

    pub fn elements(&self) -> core::ops::Range<Element> {
        0..self.order()
    }

    #[inline]
    pub fn mul(&self, a: Element, b: Element) -> Element {
        self.mul[a * self.order() + b]
    }

    #[inline]
    pub fn inv(&self, a: Element) -> Element {
        self.inverse[a]
    }

    /// Rows of the multiplication table.
    pub fn table(&self) -> Vec<Vec<Element>> {
        self.mul.chunks(self.order()).map(<[Element]>::to_vec).collect()
    }

    pub fn element_order(&self, a: Element) -> usize {
        let mut k = 1;
        let mut x = a;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        self.elements()
            .all(|a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Smallest subgroup containing `gens`, by closure iteration.
    pub fn generated_subgroup(&self, gens: &[Element]) -> Result<Subgroup, GroupError> {
        if let Some(&g) = gens.iter().find(|&&g| g >= self.order()) {
            return Err(GroupError::UnknownElement(g));
        }
        let mut member = alloc::vec![false; self.order()];
        member[self.identity] = true;
        let mut found = alloc::vec![self.identity];
        let mut frontier = alloc::vec![self.identity];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if !member[y] {
                    member[y] = true;
                    found.push(y);
                    frontier.push(y);
                }
            }
        }
        found.sort_unstable();
        Ok(found)
    }

    /// Checks that `h` is nonempty and closed under multiplication (which
    /// suffices in a finite group).
    pub fn check_subgroup(&self, h: &[Element]) -> Result<(), GroupError> {
        let mut member = alloc::vec![false; self.order()];
        for &x in h {
            if x >= self.order() {
                return Err(GroupError::UnknownElement(x));
            }
            member[x] = true;
        }
        if !member[self.identity] {
            return Err(GroupError::NotSubgroup(self.identity, self.identity));
        }
        for &a in h {
            for &b in h {
                if !member[self.mul(a, b)] {
                    return Err(GroupError::NotSubgroup(a, b));
                }
            }
        }
        Ok(())
    }

    /// One representative per left coset `fH`, the smallest element index of
    /// each coset, listed in increasing order.
    pub fn coset_representatives(&self, h: &[Element]) -> Result<Vec<Element>, GroupError> {
        self.check_subgroup(h)?;
        let mut seen = alloc::vec![false; self.order()];
        let mut reps = Vec::new();
        for f in self.elements() {
            if seen[f] {
                continue;
            }
            reps.push(f);
            for &x in h {
                seen[self.mul(f, x)] = true;
            }
        }
        Ok(reps)
    }

    /// `g H g^-1`, sorted.
    pub fn conjugate(&self, g: Element, h: &[Element]) -> Subgroup {
        let mut out: Vec<Element> =
            h.iter().map(|&x| self.mul(self.mul(g, x), self.inv(g))).collect();
        out.sort_unstable();
        out
    }

    /// Group elements sorted into order classes, used to prune isomorphism
    /// search.
    fn order_profile(&self) -> Vec<usize> {
        let mut orders: Vec<usize> = self.elements().map(|a| self.element_order(a)).collect();
        orders.sort_unstable();
        orders
    }

    /// Small generating set: greedily add the lowest element not yet
    /// generated.
    pub fn generators(&self) -> Vec<Element> {
        let mut gens = Vec::new();
        let mut current = alloc::vec![self.identity];
        for g in self.elements() {
            if current.binary_search(&g).is_err() {
                gens.push(g);
                current = self.generated_subgroup(&gens).expect("valid elements");
            }
        }
        gens
    }
}

/// A multiplication-preserving bijection `self -> other`, if one exists.
///
/// Brute force over images of a generating set, pruned by element orders.
/// The first isomorphism in lexicographic order of generator images is
/// returned, so the result is deterministic.
pub fn find_isomorphism(g1: &FiniteGroup, g2: &FiniteGroup) -> Option<Vec<Element>> {
    if g1.order() != g2.order() || g1.order_profile() != g2.order_profile() {
        return None;
    }
    if g1.is_abelian() != g2.is_abelian() {
        return None;
    }
    let gens = g1.generators();
    let mut images = Vec::with_capacity(gens.len());
    search_images(g1, g2, &gens, &mut images)
}

fn search_images(
    g1: &FiniteGroup,
    g2: &FiniteGroup,
    gens: &[Element],
    images: &mut Vec<Element>,
) -> Option<Vec<Element>> {
    if images.len() == gens.len() {
        return extend_homomorphism(g1, g2, gens, images);
    }
    let want = g1.element_order(gens[images.len()]);
    for candidate in g2.elements() {
        if g2.element_order(candidate) != want {
            continue;
        }
        images.push(candidate);
        if let Some(map) = search_images(g1, g2, gens, images) {
            return Some(map);
        }
        images.pop();
    }
    None
}

/// Extends generator images to a map by closure and checks it is a
/// well-defined bijective homomorphism.
fn extend_homomorphism(
    g1: &FiniteGroup,
    g2: &FiniteGroup,
    gens: &[Element],
    images: &[Element],
) -> Option<Vec<Element>> {
    let n = g1.order();
    let mut map: Vec<Option<Element>> = alloc::vec![None; n];
    map[g1.identity()] = Some(g2.identity());
    let mut frontier = alloc::vec![g1.identity()];
    while let Some(x) = frontier.pop() {
        let fx = map[x]?;
        for (&g, &img) in gens.iter().zip(images) {
            let y = g1.mul(x, g);
            let fy = g2.mul(fx, img);
            match map[y] {
                Some(prev) if prev != fy => return None,
                Some(_) => {}
                None => {
                    map[y] = Some(fy);
                    frontier.push(y);
                }
            }
        }
    }
    let map: Vec<Element> = map.into_iter().collect::<Option<_>>()?;
    let mut hit = alloc::vec![false; n];
    for &y in &map {
        if core::mem::replace(&mut hit[y], true) {
            return None;
        }
    }
    for a in g1.elements() {
        for b in g1.elements() {
            if map[g1.mul(a, b)] != g2.mul(map[a], map[b]) {
                return None;
            }
        }
    }
    Some(map)
}

/// Default order cap for [`direct_sum`].
pub const DIRECT_SUM_CAP: usize = 64;

/// `H_1 + ... + H_k` with injections `H_j -> H`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectSum {
    pub group: FiniteGroup,
    pub factors: Vec<FiniteGroup>,
    /// `injections[j][h]` is the image of `h` in the sum.
    pub injections: Vec<Vec<Element>>,
    /// `projections[j][x]` is the `j`-th coordinate of `x`.
    pub projections: Vec<Vec<Element>>,
}

/// Componentwise product of the given groups. Elements are encoded in mixed
/// radix with the first factor least significant.
pub fn direct_sum(groups: &[FiniteGroup], cap: usize) -> Result<DirectSum, GroupError> {
    let order = groups
        .iter()
        .try_fold(1usize, |acc, g| acc.checked_mul(g.order()))
        .unwrap_or(usize::MAX);
    if order > cap {
        return Err(GroupError::OrderCap { order, cap });
    }
    let coords = |mut x: usize| -> Vec<Element> {
        groups
            .iter()
            .map(|g| {
                let c = x % g.order();
                x /= g.order();
                c
            })
            .collect()
    };
    let encode = |c: &[Element]| -> usize {
        c.iter()
            .zip(groups)
            .rev()
            .fold(0, |acc, (&ci, g)| acc * g.order() + ci)
    };
    let names = (0..order)
        .map(|x| {
            let parts: Vec<&str> =
                coords(x).iter().zip(groups).map(|(&c, g)| g.name(c)).collect();
            alloc::format!("({})", parts.join(","))
        })
        .collect();
    let table = (0..order)
        .map(|x| {
            let cx = coords(x);
            (0..order)
                .map(|y| {
                    let cy = coords(y);
                    let prod: Vec<Element> = groups
                        .iter()
                        .enumerate()
                        .map(|(j, g)| g.mul(cx[j], cy[j]))
                        .collect();
                    encode(&prod)
                })
                .collect()
        })
        .collect();
    let group = FiniteGroup::new(names, table)?;
    let identity_coords: Vec<Element> = groups.iter().map(FiniteGroup::identity).collect();
    let injections = groups
        .iter()
        .enumerate()
        .map(|(j, g)| {
            g.elements()
                .map(|h| {
                    let mut c = identity_coords.clone();
                    c[j] = h;
                    encode(&c)
                })
                .collect()
        })
        .collect();
    let projections = (0..groups.len())
        .map(|j| (0..order).map(|x| coords(x)[j]).collect())
        .collect();
    Ok(DirectSum { group, factors: groups.to_vec(), injections, projections })
}
