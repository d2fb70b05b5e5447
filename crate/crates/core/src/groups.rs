//! Finite groups given by full multiplication tables.
//!
//! Elements are dense indices `0..order`. Groups built from cyclic factors
//! use a mixed-radix encoding (first factor most significant), so the
//! element index of `(c_0, ..., c_{k-1})` is `sum c_i * stride_i`. Abelian
//! groups built from an arbitrary table carry an explicit coordinate table
//! with respect to a computed basis instead.

use std::collections::VecDeque;
use std::fmt;
use std::sync::Arc;

use num::integer::lcm;
use thiserror::Error;

/// Dense element index.
pub type Elem = usize;

pub const DEFAULT_ORDER_CAP: usize = 256;
pub const DEFAULT_NONABELIAN_AUTO_CAP: usize = 16;
pub const DEFAULT_ABELIAN_AUTO_CAP: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NotAGroupReason {
    NoIdentity,
    NotAssociative,
    MissingInverse,
}

impl fmt::Display for NotAGroupReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NotAGroupReason::NoIdentity => "no-identity",
            NotAGroupReason::NotAssociative => "not-associative",
            NotAGroupReason::MissingInverse => "missing-inverse",
        })
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum GroupError {
    #[error("group order {order} exceeds the configured cap {cap}")]
    OrderCapExceeded { order: usize, cap: usize },
    #[error("not a group: {0}")]
    NotAGroup(NotAGroupReason),
    #[error("malformed table: {0}")]
    MalformedTable(String),
    #[error("element {index} out of range for a group of order {order}")]
    IndexOutOfRange { index: usize, order: usize },
    #[error("cyclic factor orders must be >= 1")]
    ZeroInvariant,
    #[error("automorphism enumeration over a group of order {order} exceeds the cap {cap}")]
    EnumerationCapExceeded { order: usize, cap: usize },
    #[error("element set is not a subgroup")]
    NotASubgroup,
    #[error("map is not a group homomorphism")]
    NotAHomomorphism,
    #[error("group is not abelian")]
    NotAbelian,
    #[error("subgroups belong to different groups")]
    ParentMismatch,
    #[error("permutation generators are malformed: {0}")]
    BadPermutation(String),
}

/// Resource limits for construction and enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    pub max_order: usize,
    pub max_auto_nonabelian: usize,
    pub max_auto_abelian: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_order: DEFAULT_ORDER_CAP,
            max_auto_nonabelian: DEFAULT_NONABELIAN_AUTO_CAP,
            max_auto_abelian: DEFAULT_ABELIAN_AUTO_CAP,
        }
    }
}

/// Cyclic decomposition of an abelian group: `invariants[i]` is the order of
/// the i-th cyclic factor and `coords[x]` the coordinates of element `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianStructure {
    invariants: Vec<usize>,
    coords: Vec<Vec<usize>>,
    basis: Vec<Elem>,
}

impl AbelianStructure {
    pub fn invariants(&self) -> &[usize] {
        &self.invariants
    }

    pub fn coords(&self, x: Elem) -> &[usize] {
        &self.coords[x]
    }

    /// Element with coordinate `1` in factor `i` and `0` elsewhere.
    pub fn basis(&self) -> &[Elem] {
        &self.basis
    }

    /// Exponent of the group (lcm of the factor orders).
    pub fn exponent(&self) -> usize {
        self.invariants.iter().fold(1, |acc, &n| lcm(acc, n))
    }
}

#[derive(Clone, Debug)]
pub struct FiniteGroup {
    order: usize,
    mul: Vec<Elem>,
    identity: Elem,
    inv: Vec<Elem>,
    abelian: Option<AbelianStructure>,
    factors: Option<(usize, usize)>,
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.mul == other.mul
    }
}

impl Eq for FiniteGroup {}

/// Mixed-radix index of a coordinate tuple, first factor most significant.
pub fn mixed_radix_index(invariants: &[usize], coords: &[usize]) -> usize {
    invariants
        .iter()
        .zip(coords)
        .fold(0, |acc, (&n, &c)| acc * n + c % n)
}

fn mixed_radix_coords(invariants: &[usize], mut index: usize) -> Vec<usize> {
    let mut out = vec![0; invariants.len()];
    for (slot, &n) in out.iter_mut().zip(invariants).rev() {
        *slot = index % n;
        index /= n;
    }
    out
}

impl FiniteGroup {
    /// Direct product of cyclic groups `Z/n_1 x ... x Z/n_k` with the default
    /// order cap.
    pub fn cyclic_product(invariants: &[usize]) -> Result<Self, GroupError> {
        Self::cyclic_product_capped(invariants, DEFAULT_ORDER_CAP)
    }

    pub fn cyclic_product_capped(invariants: &[usize], cap: usize) -> Result<Self, GroupError> {
        if invariants.contains(&0) {
            return Err(GroupError::ZeroInvariant);
        }
        let order = invariants
            .iter()
            .try_fold(1usize, |acc, &n| acc.checked_mul(n))
            .unwrap_or(usize::MAX);
        if order > cap {
            return Err(GroupError::OrderCapExceeded { order, cap });
        }
        let coords: Vec<Vec<usize>> = (0..order)
            .map(|x| mixed_radix_coords(invariants, x))
            .collect();
        let mut mul = vec![0; order * order];
        let mut inv = vec![0; order];
        for x in 0..order {
            let neg: Vec<usize> = coords[x]
                .iter()
                .zip(invariants)
                .map(|(&c, &n)| (n - c) % n)
                .collect();
            inv[x] = mixed_radix_index(invariants, &neg);
            for y in 0..order {
                let sum: Vec<usize> = coords[x]
                    .iter()
                    .zip(&coords[y])
                    .map(|(&a, &b)| a + b)
                    .collect();
                mul[x * order + y] = mixed_radix_index(invariants, &sum);
            }
        }
        let basis = (0..invariants.len())
            .map(|i| {
                let mut c = vec![0; invariants.len()];
                c[i] = 1;
                mixed_radix_index(invariants, &c)
            })
            .collect();
        Ok(FiniteGroup {
            order,
            mul,
            identity: 0,
            inv,
            abelian: Some(AbelianStructure {
                invariants: invariants.to_vec(),
                coords,
                basis,
            }),
            factors: None,
        })
    }

    /// Validates a Cayley table exhaustively and builds the group.
    pub fn from_table(table: &[Vec<usize>]) -> Result<Self, GroupError> {
        Self::from_table_capped(table, DEFAULT_ORDER_CAP)
    }

    pub fn from_table_capped(table: &[Vec<usize>], cap: usize) -> Result<Self, GroupError> {
        let order = table.len();
        if order == 0 {
            return Err(GroupError::MalformedTable("empty table".into()));
        }
        if order > cap {
            return Err(GroupError::OrderCapExceeded { order, cap });
        }
        let mut mul = Vec::with_capacity(order * order);
        for (r, row) in table.iter().enumerate() {
            if row.len() != order {
                return Err(GroupError::MalformedTable(format!(
                    "row {r} has length {} instead of {order}",
                    row.len()
                )));
            }
            for &v in row {
                if v >= order {
                    return Err(GroupError::IndexOutOfRange { index: v, order });
                }
                mul.push(v);
            }
        }
        let at = |x: usize, y: usize| mul[x * order + y];
        let identity = (0..order)
            .find(|&e| (0..order).all(|x| at(e, x) == x && at(x, e) == x))
            .ok_or(GroupError::NotAGroup(NotAGroupReason::NoIdentity))?;
        let mut inv = vec![0; order];
        for x in 0..order {
            inv[x] = (0..order)
                .find(|&y| at(x, y) == identity && at(y, x) == identity)
                .ok_or(GroupError::NotAGroup(NotAGroupReason::MissingInverse))?;
        }
        for x in 0..order {
            for y in 0..order {
                let xy = at(x, y);
                for z in 0..order {
                    if at(xy, z) != at(x, at(y, z)) {
                        return Err(GroupError::NotAGroup(NotAGroupReason::NotAssociative));
                    }
                }
            }
        }
        let mut group = FiniteGroup {
            order,
            mul,
            identity,
            inv,
            abelian: None,
            factors: None,
        };
        if group.is_commutative() {
            let all: Vec<Elem> = (0..order).collect();
            let (invariants, basis) = abelian_basis(&group, &all);
            let coords = coordinate_table(&group, &basis, &invariants);
            group.abelian = Some(AbelianStructure {
                invariants,
                coords,
                basis,
            });
        }
        Ok(group)
    }

    /// Builds a group from a table already known to be associative (for
    /// instance the basis multiplication of an associative monomial
    /// algebra); only the identity and inverses are checked.
    pub fn from_table_unchecked(table: &[Vec<usize>]) -> Result<Self, GroupError> {
        let order = table.len();
        if order == 0 || table.iter().any(|r| r.len() != order || r.iter().any(|&v| v >= order)) {
            return Err(GroupError::MalformedTable("not a square index table".into()));
        }
        let mul: Vec<Elem> = table.iter().flatten().copied().collect();
        let at = |x: usize, y: usize| mul[x * order + y];
        let identity = (0..order)
            .find(|&e| (0..order).all(|x| at(e, x) == x && at(x, e) == x))
            .ok_or(GroupError::NotAGroup(NotAGroupReason::NoIdentity))?;
        let mut inv = vec![0; order];
        for (x, slot) in inv.iter_mut().enumerate() {
            *slot = (0..order)
                .find(|&y| at(x, y) == identity && at(y, x) == identity)
                .ok_or(GroupError::NotAGroup(NotAGroupReason::MissingInverse))?;
        }
        Ok(FiniteGroup {
            order,
            mul,
            identity,
            inv,
            abelian: None,
            factors: None,
        })
    }

    /// Group generated by permutations in one-line notation (`p[i]` is the
    /// image of `i`). Elements are the reachable permutations sorted
    /// lexicographically, so the identity is element 0. The product `x*y`
    /// is the composition "apply `y`, then `x`".
    pub fn from_permutations(degree: usize, gens: &[Vec<usize>]) -> Result<Self, GroupError> {
        Self::from_permutations_capped(degree, gens, DEFAULT_ORDER_CAP)
    }

    pub fn from_permutations_capped(
        degree: usize,
        gens: &[Vec<usize>],
        cap: usize,
    ) -> Result<Self, GroupError> {
        for g in gens {
            if g.len() != degree {
                return Err(GroupError::BadPermutation(format!(
                    "generator of length {} for degree {degree}",
                    g.len()
                )));
            }
            let mut seen = vec![false; degree];
            for &i in g {
                if i >= degree || seen[i] {
                    return Err(GroupError::BadPermutation(format!("{g:?} is not a bijection")));
                }
                seen[i] = true;
            }
        }
        let compose = |p: &[usize], q: &[usize]| -> Vec<usize> { q.iter().map(|&i| p[i]).collect() };
        let identity: Vec<usize> = (0..degree).collect();
        let mut elems = std::collections::BTreeSet::new();
        elems.insert(identity.clone());
        let mut queue = VecDeque::from([identity]);
        while let Some(p) = queue.pop_front() {
            for g in gens {
                let q = compose(g, &p);
                if elems.insert(q.clone()) {
                    if elems.len() > cap {
                        return Err(GroupError::OrderCapExceeded {
                            order: elems.len(),
                            cap,
                        });
                    }
                    queue.push_back(q);
                }
            }
        }
        let elems: Vec<Vec<usize>> = elems.into_iter().collect();
        let index: std::collections::HashMap<&[usize], usize> = elems
            .iter()
            .enumerate()
            .map(|(i, p)| (p.as_slice(), i))
            .collect();
        let table: Vec<Vec<usize>> = elems
            .iter()
            .map(|p| elems.iter().map(|q| index[compose(p, q).as_slice()]).collect())
            .collect();
        Self::from_table_capped(&table, cap)
    }

    /// Direct product `A x B`; the pair `(a, b)` has index `a * |B| + b`.
    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Result<Self, GroupError> {
        Self::direct_product_capped(a, b, DEFAULT_ORDER_CAP)
    }

    pub fn direct_product_capped(a: &FiniteGroup, b: &FiniteGroup, cap: usize) -> Result<Self, GroupError> {
        let order = a.order.saturating_mul(b.order);
        if order > cap {
            return Err(GroupError::OrderCapExceeded { order, cap });
        }
        let nb = b.order;
        let mut mul = vec![0; order * order];
        let mut inv = vec![0; order];
        for x in 0..order {
            let (xa, xb) = (x / nb, x % nb);
            inv[x] = a.inv(xa) * nb + b.inv(xb);
            for y in 0..order {
                let (ya, yb) = (y / nb, y % nb);
                mul[x * order + y] = a.mul(xa, ya) * nb + b.mul(xb, yb);
            }
        }
        let abelian = match (&a.abelian, &b.abelian) {
            (Some(sa), Some(sb)) => {
                let mut invariants = sa.invariants.clone();
                invariants.extend_from_slice(&sb.invariants);
                let coords = (0..order)
                    .map(|x| {
                        let mut c = sa.coords[x / nb].clone();
                        c.extend_from_slice(&sb.coords[x % nb]);
                        c
                    })
                    .collect();
                let basis = sa
                    .basis
                    .iter()
                    .map(|&e| e * nb + b.identity)
                    .chain(sb.basis.iter().map(|&e| a.identity * nb + e))
                    .collect();
                Some(AbelianStructure {
                    invariants,
                    coords,
                    basis,
                })
            }
            _ => None,
        };
        Ok(FiniteGroup {
            order,
            mul,
            identity: a.identity * nb + b.identity,
            inv,
            abelian,
            factors: Some((a.order, b.order)),
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> Elem {
        self.identity
    }

    #[inline]
    pub fn mul(&self, x: Elem, y: Elem) -> Elem {
        self.mul[x * self.order + y]
    }

    #[inline]
    pub fn inv(&self, x: Elem) -> Elem {
        self.inv[x]
    }

    /// `s^{-1} x s`.
    pub fn conjugate(&self, s: Elem, x: Elem) -> Elem {
        self.mul(self.mul(self.inv(s), x), s)
    }

    pub fn pow(&self, x: Elem, k: usize) -> Elem {
        (0..k).fold(self.identity, |acc, _| self.mul(acc, x))
    }

    pub fn element_order(&self, x: Elem) -> usize {
        let mut y = x;
        let mut k = 1;
        while y != self.identity {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        self.mul.chunks(self.order).map(|r| r.to_vec()).collect()
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.order).all(|x| (x..self.order).all(|y| self.mul(x, y) == self.mul(y, x)))
    }

    pub fn abelian(&self) -> Option<&AbelianStructure> {
        self.abelian.as_ref()
    }

    pub fn abelian_invariants(&self) -> Option<&[usize]> {
        self.abelian.as_ref().map(|s| s.invariants.as_slice())
    }

    /// Orders of the two factors when the group was built by
    /// [`FiniteGroup::direct_product`].
    pub fn factor_orders(&self) -> Option<(usize, usize)> {
        self.factors
    }

    /// Splits a product element into its components.
    pub fn split(&self, x: Elem) -> Option<(Elem, Elem)> {
        self.factors.map(|(_, nb)| (x / nb, x % nb))
    }

    pub fn join(&self, a: Elem, b: Elem) -> Option<Elem> {
        self.factors.map(|(_, nb)| a * nb + b)
    }

    /// `(x, y) ↦ (y, x)` for a product `H × H` of a group with itself.
    pub fn swap_factors(&self, x: Elem) -> Option<Elem> {
        let (a, b) = self.split(x)?;
        self.join(b, a)
    }

    /// Whether this is a product `H × H` of a group with itself, i.e. the
    /// factor swap is an automorphism.
    pub fn is_square_product(&self) -> bool {
        match self.factors {
            Some((a, b)) if a == b => (0..self.order).all(|x| {
                (0..self.order).all(|y| {
                    self.swap_factors(self.mul(x, y))
                        == Some(self.mul(self.swap_factors(x).unwrap(), self.swap_factors(y).unwrap()))
                })
            }),
            _ => false,
        }
    }

    pub fn exponent(&self) -> usize {
        (0..self.order).fold(1, |acc, x| lcm(acc, self.element_order(x)))
    }

    pub fn check_index(&self, x: Elem) -> Result<Elem, GroupError> {
        if x < self.order {
            Ok(x)
        } else {
            Err(GroupError::IndexOutOfRange {
                index: x,
                order: self.order,
            })
        }
    }

    /// Exhaustive associativity check (used by tests and debug assertions).
    pub fn is_associative(&self) -> bool {
        let n = self.order;
        (0..n).all(|x| {
            (0..n).all(|y| {
                let xy = self.mul(x, y);
                (0..n).all(|z| self.mul(xy, z) == self.mul(x, self.mul(y, z)))
            })
        })
    }
}

/// Invariant factors (ascending, each dividing the next) and a matching basis
/// of the abelian subgroup with the given members.
pub fn abelian_basis(g: &FiniteGroup, members: &[Elem]) -> (Vec<usize>, Vec<Elem>) {
    let invariants = invariant_factors(g, members);
    let mut wanted = invariants.clone();
    wanted.reverse();
    let mut span = vec![false; g.order()];
    span[g.identity()] = true;
    let mut chosen = Vec::new();
    let found = basis_search(g, members, &wanted, &mut span, &mut chosen);
    assert!(found, "abelian basis search failed for a commutative subgroup");
    chosen.reverse();
    (invariants, chosen)
}

fn basis_search(
    g: &FiniteGroup,
    members: &[Elem],
    wanted: &[usize],
    span: &mut Vec<bool>,
    chosen: &mut Vec<Elem>,
) -> bool {
    let Some(&n) = wanted.get(chosen.len()) else {
        return true;
    };
    let current: Vec<Elem> = (0..g.order()).filter(|&x| span[x]).collect();
    for &b in members {
        if g.element_order(b) != n {
            continue;
        }
        let mut p = b;
        let mut independent = true;
        for _ in 1..n {
            if span[p] {
                independent = false;
                break;
            }
            p = g.mul(p, b);
        }
        if !independent {
            continue;
        }
        let mut next = vec![false; g.order()];
        let mut power = g.identity();
        for _ in 0..n {
            for &s in &current {
                next[g.mul(s, power)] = true;
            }
            power = g.mul(power, b);
        }
        let saved = std::mem::replace(span, next);
        chosen.push(b);
        if basis_search(g, members, wanted, span, chosen) {
            return true;
        }
        chosen.pop();
        *span = saved;
    }
    false
}

fn invariant_factors(g: &FiniteGroup, members: &[Elem]) -> Vec<usize> {
    let order = members.len();
    let mut primes = Vec::new();
    let mut m = order;
    let mut p = 2;
    while m > 1 {
        if m % p == 0 {
            primes.push(p);
            while m % p == 0 {
                m /= p;
            }
        }
        p += 1;
    }
    // For each prime, exponents e_i of the p-primary cyclic factors, read off
    // from |G[p^k]| = p^{sum_i min(k, e_i)}.
    let mut primary: Vec<(usize, Vec<u32>)> = Vec::new();
    for &p in &primes {
        let mut counts = vec![1usize];
        let mut k = 1u32;
        loop {
            let pk = p.pow(k);
            let c = members
                .iter()
                .filter(|&&x| g.pow(x, pk) == g.identity())
                .count();
            counts.push(c);
            if c == *counts.get(counts.len() - 2).unwrap() && k > 1 {
                counts.pop();
                break;
            }
            k += 1;
        }
        let logs: Vec<u32> = counts.iter().map(|&c| log_exact(c, p)).collect();
        // at_least[k] = number of factors with exponent >= k
        let mut exps = Vec::new();
        for k in 1..logs.len() {
            let at_least = (logs[k] - logs[k - 1]) as usize;
            let at_least_next = if k + 1 < logs.len() {
                (logs[k + 1] - logs[k]) as usize
            } else {
                0
            };
            for _ in 0..(at_least - at_least_next) {
                exps.push(k as u32);
            }
        }
        exps.sort_unstable_by(|a, b| b.cmp(a));
        primary.push((p, exps));
    }
    let rank = primary.iter().map(|(_, e)| e.len()).max().unwrap_or(0);
    let mut factors: Vec<usize> = (0..rank)
        .map(|i| {
            primary
                .iter()
                .map(|(p, e)| e.get(i).map_or(1, |&k| p.pow(k)))
                .product()
        })
        .collect();
    factors.reverse();
    debug_assert!(factors.windows(2).all(|w| w[1] % w[0] == 0));
    debug_assert_eq!(factors.iter().product::<usize>(), order.max(1));
    factors
}

fn log_exact(mut c: usize, p: usize) -> u32 {
    let mut k = 0;
    while c > 1 {
        debug_assert_eq!(c % p, 0);
        c /= p;
        k += 1;
    }
    k
}

fn coordinate_table(g: &FiniteGroup, basis: &[Elem], invariants: &[usize]) -> Vec<Vec<usize>> {
    let order: usize = invariants.iter().product();
    let mut coords = vec![Vec::new(); g.order()];
    for idx in 0..order {
        let c = mixed_radix_coords(invariants, idx);
        let x = c
            .iter()
            .zip(basis)
            .fold(g.identity(), |acc, (&k, &b)| g.mul(acc, g.pow(b, k)));
        coords[x] = c;
    }
    coords
}

/// A subgroup, stored as sorted members plus a membership mask.
#[derive(Clone, Debug)]
pub struct Subgroup {
    parent: Arc<FiniteGroup>,
    members: Vec<Elem>,
    mask: Vec<bool>,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.members == other.members && *self.parent == *other.parent
    }
}

impl Eq for Subgroup {}

impl Subgroup {
    /// Validates closure and builds the subgroup.
    pub fn from_members(parent: Arc<FiniteGroup>, members: &[Elem]) -> Result<Self, GroupError> {
        let mut mask = vec![false; parent.order()];
        for &x in members {
            parent.check_index(x)?;
            mask[x] = true;
        }
        if !mask[parent.identity()] {
            return Err(GroupError::NotASubgroup);
        }
        let sorted: Vec<Elem> = (0..parent.order()).filter(|&x| mask[x]).collect();
        for &x in &sorted {
            if !mask[parent.inv(x)] {
                return Err(GroupError::NotASubgroup);
            }
            for &y in &sorted {
                if !mask[parent.mul(x, y)] {
                    return Err(GroupError::NotASubgroup);
                }
            }
        }
        Ok(Subgroup {
            parent,
            members: sorted,
            mask,
        })
    }

    pub fn whole(parent: Arc<FiniteGroup>) -> Self {
        let n = parent.order();
        Subgroup {
            parent,
            members: (0..n).collect(),
            mask: vec![true; n],
        }
    }

    pub fn trivial(parent: Arc<FiniteGroup>) -> Self {
        let mut mask = vec![false; parent.order()];
        mask[parent.identity()] = true;
        let members = vec![parent.identity()];
        Subgroup {
            parent,
            members,
            mask,
        }
    }

    /// Smallest subgroup containing `gens`, computed by closure.
    pub fn generated(parent: Arc<FiniteGroup>, gens: &[Elem]) -> Result<Self, GroupError> {
        for &g in gens {
            parent.check_index(g)?;
        }
        let mut mask = vec![false; parent.order()];
        mask[parent.identity()] = true;
        let mut queue = VecDeque::from([parent.identity()]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = parent.mul(x, g);
                if !mask[y] {
                    mask[y] = true;
                    queue.push_back(y);
                }
            }
        }
        let members = (0..parent.order()).filter(|&x| mask[x]).collect();
        Ok(Subgroup {
            parent,
            members,
            mask,
        })
    }

    pub fn parent(&self) -> &Arc<FiniteGroup> {
        &self.parent
    }

    pub fn members(&self) -> &[Elem] {
        &self.members
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    #[inline]
    pub fn contains(&self, x: Elem) -> bool {
        self.mask.get(x).copied().unwrap_or(false)
    }

    /// Position of `x` in the sorted member list.
    pub fn position(&self, x: Elem) -> Option<usize> {
        self.members.binary_search(&x).ok()
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        *self.parent == *other.parent && self.members.iter().all(|&x| other.contains(x))
    }

    pub fn intersection(&self, other: &Subgroup) -> Result<Subgroup, GroupError> {
        if *self.parent != *other.parent {
            return Err(GroupError::ParentMismatch);
        }
        let mask: Vec<bool> = self
            .mask
            .iter()
            .zip(&other.mask)
            .map(|(&a, &b)| a && b)
            .collect();
        let members = (0..mask.len()).filter(|&x| mask[x]).collect();
        Ok(Subgroup {
            parent: self.parent.clone(),
            members,
            mask,
        })
    }

    /// `{ s^{-1} f s : f in self }`.
    pub fn conjugate(&self, s: Elem) -> Subgroup {
        let g = &self.parent;
        let mut mask = vec![false; g.order()];
        for &f in &self.members {
            mask[g.conjugate(s, f)] = true;
        }
        let members = (0..mask.len()).filter(|&x| mask[x]).collect();
        Subgroup {
            parent: g.clone(),
            members,
            mask,
        }
    }

    /// The subgroup as a group in its own right, elements numbered by
    /// position in `members`.
    pub fn as_group(&self) -> FiniteGroup {
        let g = &self.parent;
        let table: Vec<Vec<usize>> = self
            .members
            .iter()
            .map(|&x| {
                self.members
                    .iter()
                    .map(|&y| self.position(g.mul(x, y)).expect("closed"))
                    .collect()
            })
            .collect();
        FiniteGroup::from_table_capped(&table, usize::MAX).expect("subgroup tables are groups")
    }

    pub fn exponent(&self) -> usize {
        self.members
            .iter()
            .fold(1, |acc, &x| lcm(acc, self.parent.element_order(x)))
    }
}

/// `s^{-1} F s` as a subgroup of the same parent.
pub fn conjugate_subgroup(s: Elem, f: &Subgroup) -> Subgroup {
    f.conjugate(s)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoubleCoset {
    pub representative: Elem,
    pub members: Vec<Elem>,
}

/// Partition of `G` into double cosets `F2 s F1`, each represented by its
/// minimal element and listed in increasing representative order.
pub fn double_cosets(f2: &Subgroup, f1: &Subgroup) -> Result<Vec<DoubleCoset>, GroupError> {
    if *f1.parent != *f2.parent {
        return Err(GroupError::ParentMismatch);
    }
    let g = &f1.parent;
    let mut seen = vec![false; g.order()];
    let mut out = Vec::new();
    for s in 0..g.order() {
        if seen[s] {
            continue;
        }
        let mut members: Vec<Elem> = Vec::new();
        for &a in f2.members() {
            let as_ = g.mul(a, s);
            for &b in f1.members() {
                let x = g.mul(as_, b);
                if !seen[x] {
                    seen[x] = true;
                    members.push(x);
                }
            }
        }
        members.sort_unstable();
        out.push(DoubleCoset {
            representative: s,
            members,
        });
    }
    Ok(out)
}

/// A homomorphism given by its image table.
#[derive(Clone, Debug)]
pub struct GroupHom {
    source: Arc<FiniteGroup>,
    target: Arc<FiniteGroup>,
    image: Vec<Elem>,
}

impl PartialEq for GroupHom {
    fn eq(&self, other: &Self) -> bool {
        self.image == other.image && *self.source == *other.source && *self.target == *other.target
    }
}

impl Eq for GroupHom {}

impl GroupHom {
    pub fn new(
        source: Arc<FiniteGroup>,
        target: Arc<FiniteGroup>,
        image: Vec<Elem>,
    ) -> Result<Self, GroupError> {
        if image.len() != source.order() {
            return Err(GroupError::NotAHomomorphism);
        }
        for &y in &image {
            target.check_index(y)?;
        }
        let n = source.order();
        for x in 0..n {
            for y in 0..n {
                if image[source.mul(x, y)] != target.mul(image[x], image[y]) {
                    return Err(GroupError::NotAHomomorphism);
                }
            }
        }
        Ok(GroupHom {
            source,
            target,
            image,
        })
    }

    pub(crate) fn new_unchecked(
        source: Arc<FiniteGroup>,
        target: Arc<FiniteGroup>,
        image: Vec<Elem>,
    ) -> Self {
        GroupHom {
            source,
            target,
            image,
        }
    }

    pub fn identity(g: Arc<FiniteGroup>) -> Self {
        let image = (0..g.order()).collect();
        GroupHom {
            source: g.clone(),
            target: g,
            image,
        }
    }

    pub fn source(&self) -> &Arc<FiniteGroup> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteGroup> {
        &self.target
    }

    pub fn image(&self) -> &[Elem] {
        &self.image
    }

    #[inline]
    pub fn apply(&self, x: Elem) -> Elem {
        self.image[x]
    }

    pub fn is_bijective(&self) -> bool {
        if self.source.order() != self.target.order() {
            return false;
        }
        let mut seen = vec![false; self.target.order()];
        self.image.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
    }

    /// `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &GroupHom) -> Result<GroupHom, GroupError> {
        if *other.target != *self.source {
            return Err(GroupError::ParentMismatch);
        }
        Ok(GroupHom {
            source: other.source.clone(),
            target: self.target.clone(),
            image: other.image.iter().map(|&y| self.image[y]).collect(),
        })
    }

    pub fn inverse(&self) -> Option<GroupHom> {
        if !self.is_bijective() {
            return None;
        }
        let mut image = vec![0; self.image.len()];
        for (x, &y) in self.image.iter().enumerate() {
            image[y] = x;
        }
        Some(GroupHom {
            source: self.target.clone(),
            target: self.source.clone(),
            image,
        })
    }
}

/// A generating set: the cyclic basis for abelian groups, otherwise a greedy
/// choice in index order.
fn generating_set(g: &FiniteGroup) -> Vec<Elem> {
    if let Some(ab) = g.abelian() {
        return ab
            .basis
            .iter()
            .zip(&ab.invariants)
            .filter(|(_, &n)| n > 1)
            .map(|(&b, _)| b)
            .collect();
    }
    let mut gens = Vec::new();
    let mut span = vec![false; g.order()];
    span[g.identity()] = true;
    for x in 0..g.order() {
        if span[x] {
            continue;
        }
        gens.push(x);
        let mut queue: VecDeque<Elem> = (0..g.order()).filter(|&y| span[y]).collect();
        while let Some(y) = queue.pop_front() {
            for &s in &gens {
                let z = g.mul(y, s);
                if !span[z] {
                    span[z] = true;
                    queue.push_back(z);
                }
            }
        }
    }
    gens
}

/// Extends generator images to a map on `<gens>`; `None` if inconsistent or
/// not injective.
fn extend_images(g: &FiniteGroup, gens: &[Elem], images: &[Elem]) -> Option<Vec<Option<Elem>>> {
    let mut map: Vec<Option<Elem>> = vec![None; g.order()];
    let mut used = vec![false; g.order()];
    map[g.identity()] = Some(g.identity());
    used[g.identity()] = true;
    let mut queue = VecDeque::from([g.identity()]);
    while let Some(x) = queue.pop_front() {
        let fx = map[x].expect("queued elements are mapped");
        for (&s, &fs) in gens.iter().zip(images) {
            let y = g.mul(x, s);
            let fy = g.mul(fx, fs);
            match map[y] {
                Some(existing) if existing != fy => return None,
                Some(_) => {}
                None => {
                    if used[fy] {
                        return None;
                    }
                    used[fy] = true;
                    map[y] = Some(fy);
                    queue.push_back(y);
                }
            }
        }
    }
    Some(map)
}

/// All automorphisms of `g`, ordered lexicographically by image table (so
/// the identity comes first).
pub fn enumerate_automorphisms(g: &Arc<FiniteGroup>) -> Result<Vec<GroupHom>, GroupError> {
    enumerate_automorphisms_with(g, &Caps::default())
}

pub fn enumerate_automorphisms_with(
    g: &Arc<FiniteGroup>,
    caps: &Caps,
) -> Result<Vec<GroupHom>, GroupError> {
    let cap = if g.abelian().is_some() {
        caps.max_auto_abelian
    } else {
        caps.max_auto_nonabelian
    };
    if g.order() > cap {
        return Err(GroupError::EnumerationCapExceeded {
            order: g.order(),
            cap,
        });
    }
    let gens = generating_set(g);
    let orders: Vec<usize> = gens.iter().map(|&s| g.element_order(s)).collect();
    let by_order: Vec<Vec<Elem>> = orders
        .iter()
        .map(|&o| (0..g.order()).filter(|&y| g.element_order(y) == o).collect())
        .collect();
    let mut found = Vec::new();
    let mut images = Vec::with_capacity(gens.len());
    auto_search(g, &gens, &by_order, &mut images, &mut found);
    found.sort();
    Ok(found
        .into_iter()
        .map(|image| GroupHom::new_unchecked(g.clone(), g.clone(), image))
        .collect())
}

fn auto_search(
    g: &FiniteGroup,
    gens: &[Elem],
    candidates: &[Vec<Elem>],
    images: &mut Vec<Elem>,
    found: &mut Vec<Vec<Elem>>,
) {
    let k = images.len();
    if k == gens.len() {
        if let Some(map) = extend_images(g, gens, images) {
            if map.iter().all(Option::is_some) {
                found.push(map.into_iter().map(Option::unwrap).collect());
            }
        }
        return;
    }
    for &y in &candidates[k] {
        images.push(y);
        if extend_images(g, &gens[..=k], images).is_some() {
            auto_search(g, gens, candidates, images, found);
        }
        images.pop();
    }
}

/// Number of elements in the subgroup product `A B`.
pub fn product_set_size(a: &Subgroup, b: &Subgroup) -> usize {
    let inter = a.intersection(b).map(|i| i.order()).unwrap_or(1);
    a.order() * b.order() / inter
}
