//! Character duality for finite abelian groups and the orthogonal group of
//! `G ⊕ Ĝ` with respect to the canonical quadratic form.

use std::sync::Arc;

use num::integer::lcm;

use crate::groups::{
    enumerate_automorphisms_with, Caps, Elem, FiniteGroup, GroupError, GroupHom,
};

/// `G`, a concrete copy of `Ĝ` with the same invariants, and the products
/// `G ⊕ Ĝ` (pairs `(g, χ)`) and `G × G`.
#[derive(Clone, Debug)]
pub struct DualPair {
    base: Arc<FiniteGroup>,
    dual: Arc<FiniteGroup>,
    double: Arc<FiniteGroup>,
    square: Arc<FiniteGroup>,
    modulus: usize,
}

impl DualPair {
    pub fn new(invariants: &[usize]) -> Result<Self, GroupError> {
        let base = Arc::new(FiniteGroup::cyclic_product(invariants)?);
        Self::from_group(base)
    }

    /// Builds the pair from an abelian group; a commutative table group is
    /// used through its computed cyclic decomposition.
    pub fn from_group(base: Arc<FiniteGroup>) -> Result<Self, GroupError> {
        let ab = base.abelian().ok_or(GroupError::NotAbelian)?;
        let dual = Arc::new(FiniteGroup::cyclic_product_capped(
            ab.invariants(),
            usize::MAX,
        )?);
        let modulus = ab.invariants().iter().fold(1, |acc, &n| lcm(acc, n));
        let double = Arc::new(FiniteGroup::direct_product(&base, &dual)?);
        let square = Arc::new(FiniteGroup::direct_product(&base, &base)?);
        Ok(DualPair {
            base,
            dual,
            double,
            square,
            modulus,
        })
    }

    pub fn base(&self) -> &Arc<FiniteGroup> {
        &self.base
    }

    pub fn dual(&self) -> &Arc<FiniteGroup> {
        &self.dual
    }

    pub fn double(&self) -> &Arc<FiniteGroup> {
        &self.double
    }

    /// `G × G`, the grading group of bimodule algebras.
    pub fn square(&self) -> &Arc<FiniteGroup> {
        &self.square
    }

    pub fn modulus(&self) -> usize {
        self.modulus
    }

    pub fn invariants(&self) -> &[usize] {
        self.base.abelian_invariants().expect("abelian base")
    }

    /// `⟨χ, g⟩ = Σ (M/n_i) χ_i g_i mod M` as an exponent of `ζ_M`.
    pub fn pairing(&self, chi: Elem, g: Elem) -> usize {
        let m = self.modulus;
        let cg = self.base.abelian().unwrap().coords(g);
        let cc = self.dual.abelian().unwrap().coords(chi);
        self.invariants()
            .iter()
            .zip(cc.iter().zip(cg))
            .map(|(&n, (&a, &b))| (m / n) * a * b)
            .sum::<usize>()
            % m
    }

    /// The element `(g, χ)` of the double.
    pub fn join(&self, g: Elem, chi: Elem) -> Elem {
        g * self.dual.order() + chi
    }

    pub fn split(&self, v: Elem) -> (Elem, Elem) {
        (v / self.dual.order(), v % self.dual.order())
    }

    /// Dual element with the same coordinates as `g`.
    pub fn to_dual(&self, g: Elem) -> Elem {
        let ab = self.dual.abelian().unwrap();
        let c = self.base.abelian().unwrap().coords(g);
        crate::groups::mixed_radix_index(ab.invariants(), c)
    }

    /// Base element with the same coordinates as `χ`.
    pub fn from_dual(&self, chi: Elem) -> Elem {
        let c = self.dual.abelian().unwrap().coords(chi);
        let ab = self.base.abelian().unwrap();
        (0..self.base.order())
            .find(|&g| ab.coords(g) == c)
            .expect("same invariants")
    }
}

/// An automorphism of `G ⊕ Ĝ` preserving `q(g, χ) = ⟨χ, g⟩`.
#[derive(Clone, Debug)]
pub struct OrthogonalMap {
    pair: Arc<DualPair>,
    auto: GroupHom,
}

impl PartialEq for OrthogonalMap {
    fn eq(&self, other: &Self) -> bool {
        self.auto.image() == other.auto.image()
    }
}

impl Eq for OrthogonalMap {}

impl OrthogonalMap {
    /// Wraps an automorphism of the double after checking the pairing
    /// condition on every element.
    pub fn new(pair: Arc<DualPair>, auto: GroupHom) -> Option<Self> {
        if !auto.is_bijective() || **auto.source() != **pair.double() {
            return None;
        }
        let m = OrthogonalMap { pair, auto };
        m.is_orthogonal().then_some(m)
    }

    pub fn identity(pair: Arc<DualPair>) -> Self {
        let auto = GroupHom::identity(pair.double().clone());
        OrthogonalMap { pair, auto }
    }

    pub fn pair(&self) -> &Arc<DualPair> {
        &self.pair
    }

    pub fn auto(&self) -> &GroupHom {
        &self.auto
    }

    pub fn image(&self) -> &[Elem] {
        self.auto.image()
    }

    pub fn apply(&self, v: Elem) -> Elem {
        self.auto.apply(v)
    }

    /// `α₁(v) ∈ G`.
    pub fn alpha1(&self, v: Elem) -> Elem {
        self.pair.split(self.auto.apply(v)).0
    }

    /// `α₂(v) ∈ Ĝ`.
    pub fn alpha2(&self, v: Elem) -> Elem {
        self.pair.split(self.auto.apply(v)).1
    }

    pub fn is_identity(&self) -> bool {
        self.auto.image().iter().enumerate().all(|(i, &x)| i == x)
    }

    fn is_orthogonal(&self) -> bool {
        (0..self.pair.double().order()).all(|v| {
            let (g, chi) = self.pair.split(v);
            self.pair.pairing(self.alpha2(v), self.alpha1(v)) == self.pair.pairing(chi, g)
        })
    }
}

/// `a ∘ b` (apply `b` first).
pub fn orth_compose(a: &OrthogonalMap, b: &OrthogonalMap) -> OrthogonalMap {
    let auto = a.auto.compose(&b.auto).expect("same double");
    let out = OrthogonalMap {
        pair: a.pair.clone(),
        auto,
    };
    debug_assert!(out.is_orthogonal());
    out
}

pub fn orth_invert(a: &OrthogonalMap) -> OrthogonalMap {
    let out = OrthogonalMap {
        pair: a.pair.clone(),
        auto: a.auto.inverse().expect("automorphism"),
    };
    debug_assert!(out.is_orthogonal());
    out
}

/// All of `O(G ⊕ Ĝ)`, ordered by image table; the identity comes first.
pub fn orth_group(pair: &Arc<DualPair>) -> Result<Vec<OrthogonalMap>, GroupError> {
    orth_group_with(pair, &Caps::default())
}

pub fn orth_group_with(pair: &Arc<DualPair>, caps: &Caps) -> Result<Vec<OrthogonalMap>, GroupError> {
    let autos = enumerate_automorphisms_with(pair.double(), caps)?;
    Ok(autos
        .into_iter()
        .filter_map(|a| OrthogonalMap::new(pair.clone(), a))
        .collect())
}

/// The swap `(g, χ) ↦ (χ, g)` under the coordinate identification `G ≅ Ĝ`.
pub fn swap_map(pair: &Arc<DualPair>) -> Option<OrthogonalMap> {
    let n = pair.double().order();
    let image = (0..n)
        .map(|v| {
            let (g, chi) = pair.split(v);
            pair.join(pair.from_dual(chi), pair.to_dual(g))
        })
        .collect();
    let auto = GroupHom::new(pair.double().clone(), pair.double().clone(), image).ok()?;
    OrthogonalMap::new(pair.clone(), auto)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(inv: &[usize]) -> Arc<DualPair> {
        Arc::new(DualPair::new(inv).unwrap())
    }

    #[test]
    fn pairing_values() {
        let p = pair(&[2]);
        assert_eq!(p.pairing(1, 1), 1);
        let p = pair(&[4]);
        assert_eq!(p.pairing(1, 2), 2);
        for inv in [&[2][..], &[3], &[4], &[2, 2], &[2, 4]] {
            let p = pair(inv);
            for g in 0..p.base().order() {
                assert_eq!(p.pairing(0, g), 0);
            }
        }
    }

    #[test]
    fn pairing_is_biadditive_and_nondegenerate() {
        for inv in [&[2][..], &[3], &[4], &[2, 2], &[2, 6]] {
            let p = pair(inv);
            let (g, d, m) = (p.base(), p.dual(), p.modulus());
            for x in 0..g.order() {
                for y in 0..g.order() {
                    for c in 0..d.order() {
                        assert_eq!(
                            p.pairing(c, g.mul(x, y)),
                            (p.pairing(c, x) + p.pairing(c, y)) % m
                        );
                        assert_eq!(
                            p.pairing(d.mul(c, p.to_dual(y)), x),
                            (p.pairing(c, x) + p.pairing(p.to_dual(y), x)) % m
                        );
                    }
                }
                if x != g.identity() {
                    assert!((0..d.order()).any(|c| p.pairing(c, x) != 0));
                }
            }
        }
    }

    #[test]
    fn orth_counts() {
        assert_eq!(orth_group(&pair(&[2])).unwrap().len(), 2);
        assert_eq!(orth_group(&pair(&[3])).unwrap().len(), 4);
        assert_eq!(orth_group(&pair(&[4])).unwrap().len(), 4);
        assert_eq!(orth_group(&pair(&[2, 2])).unwrap().len(), 72);
        assert_eq!(orth_group(&pair(&[])).unwrap().len(), 1);
    }

    #[test]
    fn identity_first_and_swap_present() {
        let p = pair(&[2]);
        let o = orth_group(&p).unwrap();
        assert!(o[0].is_identity());
        let swap = swap_map(&p).unwrap();
        assert_eq!(o[1], swap);
        assert!(orth_compose(&swap, &swap).is_identity());
    }

    #[test]
    fn group_structure_z3() {
        let p = pair(&[3]);
        let o = orth_group(&p).unwrap();
        for a in &o {
            assert!(orth_compose(a, &orth_invert(a)).is_identity());
            for b in &o {
                let ab = orth_compose(a, b);
                assert!(o.contains(&ab));
                for c in &o {
                    assert_eq!(orth_compose(&ab, c), orth_compose(a, &orth_compose(b, c)));
                }
            }
        }
    }

    #[test]
    fn cap_applies_to_double() {
        let p = pair(&[3, 3]);
        assert!(matches!(
            orth_group(&p),
            Err(GroupError::EnumerationCapExceeded { .. })
        ));
    }
}
