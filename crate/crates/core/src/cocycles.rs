//! Normalized 2-cocycles with root-of-unity values, stored as exponents.
//!
//! A table entry `k` at `(x, y)` stands for `ζ_M^k`. Rows and columns are
//! indexed by position in the sorted member list of the domain subgroup.

use std::sync::Arc;

use num::integer::{gcd, Integer};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::duality::OrthogonalMap;
use crate::groups::{abelian_basis, Elem, GroupError, Subgroup};

/// Largest modulus accepted from external input.
pub const MAX_INPUT_MODULUS: usize = 1 << 20;
/// Largest modulus produced internally by lcm merging and lifting.
pub const MAX_MODULUS: usize = 1 << 40;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum CocycleError {
    #[error("cocycle table is {rows}x{cols} but the domain has {order} elements")]
    ShapeMismatch { rows: usize, cols: usize, order: usize },
    #[error("modulus must be between 1 and {max}, got {got}")]
    BadModulus { got: usize, max: usize },
    #[error("cocycles live on different domains")]
    DomainMismatch,
    #[error("subgroup is not contained in the cocycle domain")]
    NotASubgroup,
    #[error("conjugate s x s^-1 leaves the cocycle domain")]
    ConjugateOutsideDomain,
    #[error("subgroup differs from s^-1 F1 s ∩ F2")]
    SubgroupMismatch,
    #[error("cocycle is not well defined on L: ({v}, {w}) disagrees with its representatives")]
    IllDefinedCocycle { v: Elem, w: Elem },
    #[error("bicharacter on L is not alternating")]
    NotAlternating,
    #[error("merged modulus exceeds {MAX_MODULUS}")]
    ModulusOverflow,
    #[error(transparent)]
    Group(#[from] GroupError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cocycle {
    domain: Subgroup,
    modulus: usize,
    values: Vec<usize>,
}

pub(crate) fn checked_lcm(a: usize, b: usize) -> Result<usize, CocycleError> {
    let l = (a / gcd(a, b)).checked_mul(b).ok_or(CocycleError::ModulusOverflow)?;
    if l > MAX_MODULUS {
        return Err(CocycleError::ModulusOverflow);
    }
    Ok(l)
}

impl Cocycle {
    pub fn new(domain: Subgroup, modulus: usize, values: &[Vec<usize>]) -> Result<Self, CocycleError> {
        if modulus == 0 || modulus > MAX_MODULUS {
            return Err(CocycleError::BadModulus {
                got: modulus,
                max: MAX_MODULUS,
            });
        }
        let n = domain.order();
        let bad = values.len() != n || values.iter().any(|r| r.len() != n);
        if bad {
            return Err(CocycleError::ShapeMismatch {
                rows: values.len(),
                cols: values.first().map_or(0, Vec::len),
                order: n,
            });
        }
        Ok(Cocycle {
            domain,
            modulus,
            values: values.iter().flatten().map(|&v| v % modulus).collect(),
        })
    }

    pub fn zero(domain: Subgroup, modulus: usize) -> Self {
        let n = domain.order();
        Cocycle {
            domain,
            modulus: modulus.max(1),
            values: vec![0; n * n],
        }
    }

    /// Table from a function of element pairs (any integers, reduced mod M).
    pub fn from_fn(domain: Subgroup, modulus: usize, f: impl Fn(Elem, Elem) -> i64) -> Self {
        let m = modulus.max(1) as i64;
        let values = domain
            .members()
            .iter()
            .flat_map(|&x| domain.members().iter().map(move |&y| (x, y)))
            .map(|(x, y)| f(x, y).rem_euclid(m) as usize)
            .collect();
        Cocycle {
            domain,
            modulus: m as usize,
            values,
        }
    }

    /// `δc(x, y) = c(x) + c(y) - c(xy)`, with `c` indexed by member position.
    pub fn coboundary(domain: Subgroup, modulus: usize, c: &[usize]) -> Self {
        let g = domain.parent().clone();
        let m = modulus.max(1) as i128;
        let pos = |x: Elem| domain.position(x).expect("closed");
        let members = domain.members().to_vec();
        let values = members
            .iter()
            .flat_map(|&x| members.iter().map(move |&y| (x, y)))
            .map(|(x, y)| {
                let v = c[pos(x)] as i128 + c[pos(y)] as i128 - c[pos(g.mul(x, y))] as i128;
                v.rem_euclid(m) as usize
            })
            .collect();
        Cocycle {
            domain,
            modulus: m as usize,
            values,
        }
    }

    pub fn domain(&self) -> &Subgroup {
        &self.domain
    }

    pub fn modulus(&self) -> usize {
        self.modulus
    }

    /// Exponent at member positions `(i, j)`.
    #[inline]
    pub fn at(&self, i: usize, j: usize) -> usize {
        self.values[i * self.domain.order() + j]
    }

    /// Exponent at elements `(x, y)` of the domain.
    pub fn value(&self, x: Elem, y: Elem) -> Option<usize> {
        Some(self.at(self.domain.position(x)?, self.domain.position(y)?))
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        let n = self.domain.order();
        self.values.chunks(n.max(1)).map(<[usize]>::to_vec).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    /// Same class with exponents rescaled to the modulus `m`, a multiple of
    /// the current one.
    pub fn with_modulus(&self, m: usize) -> Cocycle {
        assert_eq!(m % self.modulus, 0, "target modulus must be a multiple");
        let k = m / self.modulus;
        Cocycle {
            domain: self.domain.clone(),
            modulus: m,
            values: self.values.iter().map(|&v| v * k).collect(),
        }
    }

    fn merged(&self, other: &Cocycle) -> Result<(Cocycle, Cocycle), CocycleError> {
        if self.domain != other.domain {
            return Err(CocycleError::DomainMismatch);
        }
        let m = checked_lcm(self.modulus, other.modulus)?;
        Ok((self.with_modulus(m), other.with_modulus(m)))
    }

    pub fn add(&self, other: &Cocycle) -> Result<Cocycle, CocycleError> {
        let (a, b) = self.merged(other)?;
        let m = a.modulus;
        Ok(Cocycle {
            values: a.values.iter().zip(&b.values).map(|(x, y)| (x + y) % m).collect(),
            ..a
        })
    }

    pub fn sub(&self, other: &Cocycle) -> Result<Cocycle, CocycleError> {
        let (a, b) = self.merged(other)?;
        let m = a.modulus;
        Ok(Cocycle {
            values: a.values.iter().zip(&b.values).map(|(x, y)| (x + m - y) % m).collect(),
            ..a
        })
    }

    /// `ψ(x, y) - ψ(y, x)` as a table by positions.
    pub fn alternating_form(&self) -> Vec<Vec<usize>> {
        let n = self.domain.order();
        let m = self.modulus;
        (0..n)
            .map(|i| (0..n).map(|j| (self.at(i, j) + m - self.at(j, i)) % m).collect())
            .collect()
    }
}

/// Cocycle identity and normalization, checked on all triples.
pub fn check_cocycle(psi: &Cocycle) -> bool {
    let d = &psi.domain;
    let g = d.parent();
    let n = d.order();
    let m = psi.modulus;
    let e = d.position(g.identity()).expect("subgroups contain the identity");
    if (0..n).any(|i| psi.at(e, i) != 0 || psi.at(i, e) != 0) {
        return false;
    }
    let prod: Vec<usize> = d
        .members()
        .iter()
        .flat_map(|&x| d.members().iter().map(move |&y| (x, y)))
        .map(|(x, y)| d.position(g.mul(x, y)).expect("closed"))
        .collect();
    for x in 0..n {
        for y in 0..n {
            let xy = prod[x * n + y];
            for z in 0..n {
                let yz = prod[y * n + z];
                if (psi.at(x, y) + psi.at(xy, z)) % m != (psi.at(y, z) + psi.at(x, yz)) % m {
                    return false;
                }
            }
        }
    }
    true
}

/// Removes the constant coboundary `ψ(e, e)`, which makes a cocycle
/// normalized.
pub fn normalize(psi: &Cocycle) -> Cocycle {
    let d = &psi.domain;
    let e = d.position(d.parent().identity()).expect("identity");
    let shift = psi.at(e, e);
    let m = psi.modulus;
    Cocycle {
        values: psi.values.iter().map(|&v| (v + m - shift) % m).collect(),
        ..psi.clone()
    }
}

/// Generators of a subgroup, as member positions, chosen greedily.
fn generator_positions(d: &Subgroup) -> Vec<usize> {
    let g = d.parent();
    let mut span = vec![false; g.order()];
    span[g.identity()] = true;
    let mut gens = Vec::new();
    for (i, &x) in d.members().iter().enumerate() {
        if span[x] {
            continue;
        }
        gens.push(i);
        let mut frontier: Vec<Elem> = (0..g.order()).filter(|&y| span[y]).collect();
        while let Some(y) = frontier.pop() {
            for &gi in &gens {
                let z = g.mul(y, d.members()[gi]);
                if !span[z] {
                    span[z] = true;
                    frontier.push(z);
                }
            }
        }
    }
    gens
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    (a as u128 * b as u128 % m as u128) as u64
}

/// Solves `A c ≡ b (mod m)` by diagonalizing `A` with unimodular integer
/// row and column operations on residues.
pub(crate) fn solve_mod(mut a: Vec<Vec<u64>>, mut b: Vec<u64>, ncols: usize, m: u64) -> Option<Vec<u64>> {
    let rows = a.len();
    let mut v: Vec<Vec<u64>> = (0..ncols)
        .map(|i| (0..ncols).map(|j| u64::from(i == j)).collect())
        .collect();
    let row_op = |a: &mut Vec<Vec<u64>>, b: &mut Vec<u64>, i: usize, t: usize, q: u64| {
        let (src, dst) = if i < t {
            let (lo, hi) = a.split_at_mut(t);
            (&hi[0], &mut lo[i])
        } else {
            let (lo, hi) = a.split_at_mut(i);
            (&lo[t], &mut hi[0])
        };
        for (x, &y) in dst.iter_mut().zip(src.iter()) {
            if y != 0 {
                *x = (*x + m - mulmod(q, y, m)) % m;
            }
        }
        b[i] = (b[i] + m - mulmod(q, b[t], m)) % m;
    };
    let col_op = |a: &mut Vec<Vec<u64>>, v: &mut Vec<Vec<u64>>, j: usize, t: usize, q: u64| {
        for row in a.iter_mut().chain(v.iter_mut()) {
            if row[t] != 0 {
                row[j] = (row[j] + m - mulmod(q, row[t], m)) % m;
            }
        }
    };
    let swap_cols = |a: &mut Vec<Vec<u64>>, v: &mut Vec<Vec<u64>>, i: usize, j: usize| {
        for row in a.iter_mut().chain(v.iter_mut()) {
            row.swap(i, j);
        }
    };
    let mut t = 0;
    while t < rows.min(ncols) {
        let mut best: Option<(usize, usize, u64)> = None;
        for (i, row) in a.iter().enumerate().skip(t) {
            for (j, &x) in row.iter().enumerate().skip(t) {
                if x != 0 && best.is_none_or(|(_, _, bx)| x < bx) {
                    best = Some((i, j, x));
                }
            }
        }
        let Some((pi, pj, _)) = best else { break };
        a.swap(t, pi);
        b.swap(t, pi);
        swap_cols(&mut a, &mut v, t, pj);
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if a[i][t] != 0 {
                    let q = a[i][t] / a[t][t];
                    row_op(&mut a, &mut b, i, t, q);
                    if a[i][t] != 0 {
                        a.swap(t, i);
                        b.swap(t, i);
                        dirty = true;
                    }
                }
            }
            for j in t + 1..ncols {
                if a[t][j] != 0 {
                    let q = a[t][j] / a[t][t];
                    col_op(&mut a, &mut v, j, t, q);
                    if a[t][j] != 0 {
                        swap_cols(&mut a, &mut v, t, j);
                        dirty = true;
                    }
                }
            }
            if !dirty {
                break;
            }
        }
        t += 1;
    }
    let mut y = vec![0u64; ncols];
    for i in 0..rows {
        let d = if i < ncols { a[i][i] } else { 0 };
        let g = gcd(d, m);
        if b[i] % g != 0 {
            return None;
        }
        if i >= ncols {
            continue;
        }
        let mg = m / g;
        if mg == 1 {
            continue;
        }
        let ext = ((d / g) as i128).extended_gcd(&(mg as i128));
        let inv = ext.x.rem_euclid(mg as i128) as u64;
        y[i] = mulmod((b[i] / g) % mg, inv, mg);
    }
    Some(
        (0..ncols)
            .map(|i| (0..ncols).fold(0u64, |acc, j| (acc + mulmod(v[i][j], y[j], m)) % m))
            .collect(),
    )
}

/// Some `c` with `δc = ψ` over `Z/M` and `c(e) = 0`, indexed by member
/// position, or `None` if `ψ` is not a coboundary with values in `μ_M`.
pub fn coboundary_witness(psi: &Cocycle) -> Option<Vec<usize>> {
    let d = &psi.domain;
    let g = d.parent();
    let n = d.order();
    let m = psi.modulus as u64;
    let e = d.position(g.identity())?;
    // For a cocycle, agreement on (x, s) for generators s and on (e, e)
    // forces agreement everywhere.
    let gens = generator_positions(d);
    let mut a = Vec::with_capacity(n * gens.len() + 1);
    let mut b = Vec::with_capacity(n * gens.len() + 1);
    let mut push = |x: usize, y: usize| {
        let xy = d.position(g.mul(d.members()[x], d.members()[y])).expect("closed");
        let mut row = vec![0u64; n];
        row[x] = (row[x] + 1) % m;
        row[y] = (row[y] + 1) % m;
        row[xy] = (row[xy] + m - 1) % m;
        a.push(row);
        b.push(psi.at(x, y) as u64);
    };
    push(e, e);
    for x in 0..n {
        for &s in &gens {
            push(x, s);
        }
    }
    let c: Vec<usize> = solve_mod(a, b, n, m)?.into_iter().map(|v| v as usize).collect();
    let check = Cocycle::coboundary(d.clone(), psi.modulus, &c);
    (check.values == psi.values && c[e] == 0).then_some(c)
}

/// Whether `ψ` and `φ` define the same class in `H²(F, k^×)`.
///
/// Moduli are merged by lcm and then lifted by the exponent of the domain,
/// since a `k^×`-valued coboundary of a `μ_M`-valued cocycle can always be
/// realized with values in `μ_{M·exp F}`.
pub fn cohomologous(psi: &Cocycle, phi: &Cocycle) -> Result<bool, CocycleError> {
    let diff = psi.sub(phi)?;
    if diff.is_zero() {
        return Ok(true);
    }
    let lifted = checked_lcm(diff.modulus, 1)?
        .checked_mul(diff.domain.exponent())
        .filter(|&m| m <= MAX_MODULUS)
        .ok_or(CocycleError::ModulusOverflow)?;
    Ok(coboundary_witness(&diff.with_modulus(lifted)).is_some())
}

pub fn restrict(psi: &Cocycle, sub: &Subgroup) -> Result<Cocycle, CocycleError> {
    if !sub.is_subgroup_of(&psi.domain) {
        return Err(CocycleError::NotASubgroup);
    }
    let pos: Vec<usize> = sub
        .members()
        .iter()
        .map(|&x| psi.domain.position(x).expect("contained"))
        .collect();
    let values = pos
        .iter()
        .flat_map(|&i| pos.iter().map(move |&j| (i, j)))
        .map(|(i, j)| psi.at(i, j))
        .collect();
    Ok(Cocycle {
        domain: sub.clone(),
        modulus: psi.modulus,
        values,
    })
}

/// `ψ'(x, y) = ψ(s x s⁻¹, s y s⁻¹)` on `s⁻¹ F s`.
pub fn conj_pullback(psi: &Cocycle, s: Elem) -> Cocycle {
    let target = psi.domain.conjugate(s);
    conj_pullback_on(psi, s, &target).expect("conjugate of the domain")
}

/// `ψ'(x, y) = ψ(s x s⁻¹, s y s⁻¹)` on an arbitrary subgroup whose
/// conjugates by `s⁻¹` land in the domain of `ψ`.
pub fn conj_pullback_on(psi: &Cocycle, s: Elem, sub: &Subgroup) -> Result<Cocycle, CocycleError> {
    if *sub.parent() != *psi.domain.parent() {
        return Err(CocycleError::DomainMismatch);
    }
    let g = sub.parent();
    let s_inv = g.inv(s);
    let pos = sub
        .members()
        .iter()
        .map(|&x| {
            psi.domain
                .position(g.conjugate(s_inv, x))
                .ok_or(CocycleError::ConjugateOutsideDomain)
        })
        .collect::<Result<Vec<usize>, _>>()?;
    let values = pos
        .iter()
        .flat_map(|&i| pos.iter().map(move |&j| (i, j)))
        .map(|(i, j)| psi.at(i, j))
        .collect();
    Ok(Cocycle {
        domain: sub.clone(),
        modulus: psi.modulus,
        values,
    })
}

/// `ψ_s(x, y) = ψ₁(s x s⁻¹, s y s⁻¹) + ψ₂(x, y)` on
/// `F_s = s⁻¹ F₁ s ∩ F₂`.
pub fn fusion_cocycle(
    psi1: &Cocycle,
    psi2: &Cocycle,
    s: Elem,
    fs: &Subgroup,
) -> Result<Cocycle, CocycleError> {
    if *psi1.domain.parent() != *psi2.domain.parent() {
        return Err(CocycleError::DomainMismatch);
    }
    psi1.domain.parent().check_index(s)?;
    let expected = psi1.domain.conjugate(s).intersection(&psi2.domain)?;
    if expected != *fs {
        return Err(CocycleError::SubgroupMismatch);
    }
    let a = conj_pullback_on(psi1, s, fs)?;
    let b = restrict(psi2, fs)?;
    let out = a.add(&b)?;
    debug_assert!(check_cocycle(&out));
    Ok(out)
}

/// Which cocycle is attached to an orthogonal map.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CocycleForm {
    /// The bicharacter `-⟨α₂(g,χ), α₁(h,ξ)⟩ + ⟨χ, h⟩` itself.
    Literal,
    /// The upper-triangular bicharacter `β` in a basis of `L` with
    /// `β - βᵀ` equal to the literal bicharacter.
    AlternatingRoot,
}

/// `(L_α, ψ_α)` with `L_α = {(α₁(g,χ), g)} ⊆ G × G`.
pub fn brpic_cocycle(alpha: &OrthogonalMap) -> Result<(Subgroup, Cocycle), CocycleError> {
    brpic_cocycle_with(alpha, CocycleForm::Literal)
}

pub fn brpic_cocycle_with(
    alpha: &OrthogonalMap,
    form: CocycleForm,
) -> Result<(Subgroup, Cocycle), CocycleError> {
    let pair = alpha.pair();
    let sq: &Arc<_> = pair.square();
    let m = pair.modulus();
    let nd = pair.double().order();
    let a1: Vec<Elem> = (0..nd).map(|v| alpha.alpha1(v)).collect();
    let a2: Vec<Elem> = (0..nd).map(|v| alpha.alpha2(v)).collect();
    let split: Vec<(Elem, Elem)> = (0..nd).map(|v| pair.split(v)).collect();
    let ell: Vec<Elem> = (0..nd)
        .map(|v| sq.join(a1[v], split[v].0).expect("square is a product"))
        .collect();
    let mut rep: Vec<Option<Elem>> = vec![None; sq.order()];
    for v in 0..nd {
        rep[ell[v]].get_or_insert(v);
    }
    let members: Vec<Elem> = (0..sq.order()).filter(|&x| rep[x].is_some()).collect();
    let l = Subgroup::from_members(sq.clone(), &members)?;
    let formula = |v: Elem, w: Elem| (m - pair.pairing(a2[v], a1[w]) + pair.pairing(split[v].1, split[w].0)) % m;
    let lit = |x: Elem, y: Elem| formula(rep[x].unwrap(), rep[y].unwrap());
    for v in 0..nd {
        for w in 0..nd {
            if formula(v, w) != lit(ell[v], ell[w]) {
                return Err(CocycleError::IllDefinedCocycle { v, w });
            }
        }
    }
    let psi = match form {
        CocycleForm::Literal => Cocycle::from_fn(l.clone(), m, |x, y| lit(x, y) as i64),
        CocycleForm::AlternatingRoot => {
            let (invariants, basis) = abelian_basis(sq, l.members());
            let mut coords: Vec<Vec<usize>> = vec![Vec::new(); sq.order()];
            let total: usize = invariants.iter().product();
            for idx in 0..total {
                let mut rest = idx;
                let mut c = vec![0; invariants.len()];
                for (slot, &n) in c.iter_mut().zip(&invariants).rev() {
                    *slot = rest % n;
                    rest /= n;
                }
                let x = c
                    .iter()
                    .zip(&basis)
                    .fold(sq.identity(), |acc, (&k, &b)| sq.mul(acc, sq.pow(b, k)));
                coords[x] = c;
            }
            let k = basis.len();
            let omega: Vec<Vec<usize>> = (0..k)
                .map(|i| (0..k).map(|j| lit(basis[i], basis[j])).collect())
                .collect();
            let beta = |x: Elem, y: Elem| {
                let (cx, cy) = (&coords[x], &coords[y]);
                let mut s = 0usize;
                for i in 0..k {
                    for j in i + 1..k {
                        s = (s + omega[i][j] * cx[i] % m * cy[j]) % m;
                    }
                }
                s as i64
            };
            let psi = Cocycle::from_fn(l.clone(), m, beta);
            let alt = psi.alternating_form();
            let n = l.order();
            for i in 0..n {
                for j in 0..n {
                    if alt[i][j] != lit(l.members()[i], l.members()[j]) {
                        return Err(CocycleError::NotAlternating);
                    }
                }
            }
            psi
        }
    };
    debug_assert!(check_cocycle(&psi));
    Ok((l, psi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::duality::{orth_group, swap_map, DualPair};
    use crate::groups::FiniteGroup;

    fn klein() -> Subgroup {
        Subgroup::whole(Arc::new(FiniteGroup::cyclic_product(&[2, 2]).unwrap()))
    }

    /// σ((a,b),(c,d)) = b·c
    fn sigma() -> Cocycle {
        let d = klein();
        let g = d.parent().clone();
        let ab = g.abelian().unwrap().clone();
        Cocycle::from_fn(d, 2, move |x, y| (ab.coords(x)[1] * ab.coords(y)[0]) as i64)
    }

    #[test]
    fn zero_is_a_coboundary() {
        let z = Cocycle::zero(klein(), 2);
        assert!(check_cocycle(&z));
        assert_eq!(coboundary_witness(&z), Some(vec![0; 4]));
    }

    #[test]
    fn sigma_is_a_nontrivial_cocycle() {
        let s = sigma();
        assert!(check_cocycle(&s));
        assert_eq!(coboundary_witness(&s), None);
        let mut t = s.table();
        t[1][3] ^= 1;
        let broken = Cocycle::new(s.domain().clone(), 2, &t).unwrap();
        assert!(!check_cocycle(&broken));
    }

    #[test]
    fn sigma_has_no_witness_by_exhaustion() {
        // all 16^4 = 2^16 maps c: F -> Z/16 against σ lifted to μ_16
        let s = sigma().with_modulus(16);
        assert_eq!(coboundary_witness(&s), None);
        let d = s.domain();
        let g = d.parent();
        let found = (0usize..1 << 16).any(|mask| {
            let c: Vec<usize> = (0..4).map(|i| (mask >> (4 * i)) & 15).collect();
            d.members().iter().all(|&x| {
                d.members()
                    .iter()
                    .all(|&y| (c[x] + c[y] + 16 - c[g.mul(x, y)]) % 16 == s.value(x, y).unwrap())
            })
        });
        assert!(!found);
    }

    #[test]
    fn cohomology_relation() {
        let s = sigma();
        let z = Cocycle::zero(klein(), 2);
        assert!(cohomologous(&s, &s).unwrap());
        assert!(!cohomologous(&z, &s).unwrap());
        let c = Cocycle::coboundary(klein(), 4, &[0, 1, 3, 2]);
        assert!(cohomologous(&s.add(&c).unwrap(), &s).unwrap());
        // symmetric cocycle over Z/2: trivial over k^x but not over Z/2
        let z2 = Subgroup::whole(Arc::new(FiniteGroup::cyclic_product(&[2]).unwrap()));
        let sym = Cocycle::from_fn(z2.clone(), 2, |x, y| (x * y) as i64);
        assert!(check_cocycle(&sym));
        assert!(coboundary_witness(&sym).is_none());
        assert!(cohomologous(&sym, &Cocycle::zero(z2, 2)).unwrap());
    }

    #[test]
    fn witness_reconstructs_coboundaries() {
        let g = Arc::new(FiniteGroup::cyclic_product(&[4, 2]).unwrap());
        let d = Subgroup::whole(g);
        for seed in 0..20usize {
            let c: Vec<usize> = (0..8).map(|i| if i == 0 { 0 } else { (seed * 7 + i * i * 3) % 12 }).collect();
            let psi = Cocycle::coboundary(d.clone(), 12, &c);
            let w = coboundary_witness(&psi).unwrap();
            assert_eq!(Cocycle::coboundary(d.clone(), 12, &w), psi);
        }
    }

    #[test]
    fn normalization() {
        let d = klein();
        let shifted = Cocycle::from_fn(d.clone(), 3, |_, _| 2);
        assert!(!check_cocycle(&shifted));
        assert!(normalize(&shifted).is_zero());
    }

    #[test]
    fn restriction_and_pullback() {
        let s = sigma();
        let triv = Subgroup::trivial(s.domain().parent().clone());
        let r = restrict(&s, &triv).unwrap();
        assert_eq!(r.table(), vec![vec![0]]);
        assert_eq!(conj_pullback(&s, 0), s);
        let s3 = Arc::new(FiniteGroup::from_permutations(3, &[vec![1, 0, 2], vec![1, 2, 0]]).unwrap());
        let f = Subgroup::generated(s3.clone(), &[2]).unwrap();
        let c = (0..6).find(|&x| s3.element_order(x) == 3).unwrap();
        let p = conj_pullback(&Cocycle::zero(f.clone(), 2), c);
        assert_eq!(p.domain(), &f.conjugate(c));
        assert!(p.is_zero() && check_cocycle(&p));
        assert_eq!(
            conj_pullback_on(&Cocycle::zero(f.clone(), 2), c, &f).unwrap_err(),
            CocycleError::ConjugateOutsideDomain
        );
    }

    #[test]
    fn fusion_cocycle_examples() {
        let s = sigma();
        let d = s.domain().clone();
        let z = Cocycle::zero(d.clone(), 1);
        let out = fusion_cocycle(&s, &z, 0, &d).unwrap();
        assert_eq!(out, s);
        let triv = Subgroup::trivial(d.parent().clone());
        assert_eq!(fusion_cocycle(&s, &z, 0, &triv).unwrap_err(), CocycleError::SubgroupMismatch);
    }

    #[test]
    fn brpic_cocycle_identity_and_swap() {
        let p = Arc::new(DualPair::new(&[2]).unwrap());
        let o = orth_group(&p).unwrap();
        let (l, psi) = brpic_cocycle(&o[0]).unwrap();
        assert_eq!(l.order(), 2);
        for &x in l.members() {
            let (a, b) = p.square().split(x).unwrap();
            assert_eq!(a, b);
        }
        assert!(psi.is_zero());
        let swap = swap_map(&p).unwrap();
        let (l, psi) = brpic_cocycle(&swap).unwrap();
        assert_eq!(l.order(), 4);
        for &x in l.members() {
            for &y in l.members() {
                let (a, g) = p.square().split(x).unwrap();
                let (b, h) = p.square().split(y).unwrap();
                assert_eq!(psi.value(x, y).unwrap(), (g * b + a * h) % 2);
            }
        }
    }

    #[test]
    fn brpic_cocycles_over_z3() {
        let p = Arc::new(DualPair::new(&[3]).unwrap());
        for alpha in orth_group(&p).unwrap() {
            for form in [CocycleForm::Literal, CocycleForm::AlternatingRoot] {
                let (l, psi) = brpic_cocycle_with(&alpha, form).unwrap();
                assert!([3, 9].contains(&l.order()));
                assert!(check_cocycle(&psi));
            }
        }
    }
}
