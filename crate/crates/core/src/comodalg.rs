//! Monomial group-graded algebras (comodule algebras over a group algebra),
//! twisted group algebras, the bar construction, cotensor products and the
//! reduction of a graded algebra to its class `(L, [ψ])`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num::{BigInt, BigRational};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cocycles::{check_cocycle, checked_lcm, coboundary_witness, cohomologous, Cocycle, CocycleError};
use crate::cyclotomic::{nullspace, row_reduce, RootElem, RootRing};
use crate::groups::{Elem, FiniteGroup, GroupError, Subgroup};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("malformed algebra: {0}")]
    Malformed(String),
    #[error("product of basis elements {0} and {1} has the wrong degree")]
    DegreeMismatch(usize, usize),
    #[error("unit does not act as the identity on basis element {0}")]
    NotUnital(usize),
    #[error("multiplication is not associative on ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("grading group is not a product H x H")]
    NotAProductGrading,
    #[error("algebras are graded by different groups")]
    GradingMismatch,
    #[error("invalid cotensor convention: {0}")]
    ConventionUnresolved(String),
    #[error("cotensor product leaves the matched basis at ({0}, {1})")]
    NotClosed(usize, usize),
    #[error("reduction stuck: {0}")]
    ReductionStuck(String),
    #[error(transparent)]
    Cocycle(#[from] CocycleError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// Basis product `u_i u_j = ζ_M^coef u_target`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Term {
    pub coef: usize,
    pub target: usize,
}

/// Pairs of input basis elements spanning a cotensor product, with the
/// side convention used for the first factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CotensorOrigin {
    pub pairs: Vec<(usize, usize)>,
    pub opposite: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedAlgebra {
    grading: Arc<FiniteGroup>,
    modulus: usize,
    degrees: Vec<Elem>,
    mul: Vec<Option<Term>>,
    unit: Vec<usize>,
    provenance: String,
    origin: Option<CotensorOrigin>,
}

impl GradedAlgebra {
    /// Checks shape, ranges, degree compatibility and the unit law.
    /// Associativity is checked separately by [`GradedAlgebra::check_associative`].
    pub fn new(
        grading: Arc<FiniteGroup>,
        modulus: usize,
        degrees: Vec<Elem>,
        mul: Vec<Vec<Option<Term>>>,
        unit: Vec<usize>,
        provenance: impl Into<String>,
    ) -> Result<Self, AlgebraError> {
        let dim = degrees.len();
        if modulus == 0 {
            return Err(AlgebraError::Malformed("modulus must be positive".into()));
        }
        if dim == 0 {
            return Err(AlgebraError::Malformed("algebra has no basis".into()));
        }
        if mul.len() != dim || mul.iter().any(|r| r.len() != dim) {
            return Err(AlgebraError::Malformed("multiplication table shape".into()));
        }
        for &d in &degrees {
            grading.check_index(d)?;
        }
        let mut flat = Vec::with_capacity(dim * dim);
        for t in mul.into_iter().flatten() {
            if let Some(t) = t {
                if t.target >= dim {
                    return Err(AlgebraError::Malformed(format!("target {} out of range", t.target)));
                }
                flat.push(Some(Term {
                    coef: t.coef % modulus,
                    target: t.target,
                }));
            } else {
                flat.push(None);
            }
        }
        let mut u = unit;
        u.sort_unstable();
        u.dedup();
        if u.is_empty() || u.iter().any(|&i| i >= dim) {
            return Err(AlgebraError::Malformed("unit must list basis indices".into()));
        }
        let a = GradedAlgebra {
            grading,
            modulus,
            degrees,
            mul: flat,
            unit: u,
            provenance: provenance.into(),
            origin: None,
        };
        a.check_degrees()?;
        a.check_unit()?;
        Ok(a)
    }

    pub fn dim(&self) -> usize {
        self.degrees.len()
    }

    pub fn grading(&self) -> &Arc<FiniteGroup> {
        &self.grading
    }

    pub fn modulus(&self) -> usize {
        self.modulus
    }

    pub fn degree(&self, i: usize) -> Elem {
        self.degrees[i]
    }

    pub fn degrees(&self) -> &[Elem] {
        &self.degrees
    }

    #[inline]
    pub fn product(&self, i: usize, j: usize) -> Option<Term> {
        self.mul[i * self.dim() + j]
    }

    pub fn table(&self) -> Vec<Vec<Option<Term>>> {
        self.mul.chunks(self.dim()).map(<[_]>::to_vec).collect()
    }

    /// The unit is the sum of these basis elements.
    pub fn unit(&self) -> &[usize] {
        &self.unit
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn origin(&self) -> Option<&CotensorOrigin> {
        self.origin.as_ref()
    }

    /// Attaches cotensor bookkeeping; one pair per basis element.
    pub fn with_origin(mut self, origin: Option<CotensorOrigin>) -> Result<Self, AlgebraError> {
        if let Some(o) = &origin {
            if o.pairs.len() != self.dim() {
                return Err(AlgebraError::Malformed("origin needs one pair per basis element".into()));
            }
        }
        self.origin = origin;
        Ok(self)
    }

    fn check_degrees(&self) -> Result<(), AlgebraError> {
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                if let Some(t) = self.product(i, j) {
                    if self.degrees[t.target] != self.grading.mul(self.degrees[i], self.degrees[j]) {
                        return Err(AlgebraError::DegreeMismatch(i, j));
                    }
                }
            }
        }
        Ok(())
    }

    fn check_unit(&self) -> Result<(), AlgebraError> {
        for x in 0..self.dim() {
            for left in [true, false] {
                let hits: Vec<Term> = self
                    .unit
                    .iter()
                    .filter_map(|&u| if left { self.product(u, x) } else { self.product(x, u) })
                    .collect();
                if hits != [Term { coef: 0, target: x }] {
                    return Err(AlgebraError::NotUnital(x));
                }
            }
        }
        Ok(())
    }

    /// Exhaustive associativity check on basis triples.
    pub fn check_associative(&self) -> Result<(), AlgebraError> {
        let n = self.dim();
        let m = self.modulus;
        let mul3 = |a: Option<Term>, k: usize, left: bool| -> Option<Term> {
            let a = a?;
            let b = if left { self.product(a.target, k)? } else { self.product(k, a.target)? };
            Some(Term {
                coef: (a.coef + b.coef) % m,
                target: b.target,
            })
        };
        for i in 0..n {
            for j in 0..n {
                let ij = self.product(i, j);
                for k in 0..n {
                    let l = mul3(ij, k, true);
                    let r = mul3(self.product(j, k), i, false);
                    if l != r {
                        return Err(AlgebraError::NotAssociative(i, j, k));
                    }
                }
            }
        }
        Ok(())
    }

    /// Dimensions of the homogeneous components, keyed by degree.
    pub fn component_dims(&self) -> BTreeMap<Elem, usize> {
        let mut out = BTreeMap::new();
        for &d in &self.degrees {
            *out.entry(d).or_insert(0) += 1;
        }
        out
    }

    pub fn is_commutative(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| self.product(i, j) == self.product(j, i)))
    }
}

/// `k_ψ L`: basis `u_x` (`x ∈ L`, in member order) of degree `x` with
/// `u_x u_y = ζ^{ψ(x,y)} u_{xy}`.
pub fn twisted_group_algebra(l: &Subgroup, psi: &Cocycle) -> Result<GradedAlgebra, AlgebraError> {
    if psi.domain() != l {
        return Err(CocycleError::DomainMismatch.into());
    }
    let g = l.parent();
    let n = l.order();
    let e = l.position(g.identity()).expect("identity");
    if (0..n).any(|i| psi.at(e, i) != 0 || psi.at(i, e) != 0) {
        return Err(AlgebraError::Malformed("cocycle is not normalized".into()));
    }
    let members = l.members();
    let mul = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| {
            Some(Term {
                coef: psi.at(i, j),
                target: l.position(g.mul(members[i], members[j])).expect("closed"),
            })
        })
        .collect();
    Ok(GradedAlgebra {
        grading: g.clone(),
        modulus: psi.modulus(),
        degrees: members.to_vec(),
        mul,
        unit: vec![e],
        provenance: "twisted group algebra".into(),
        origin: None,
    })
}

/// `{(g, g)}` inside a square product `G × G`.
pub fn diagonal_subgroup(square: &Arc<FiniteGroup>) -> Result<Subgroup, AlgebraError> {
    let (n, m) = square.factor_orders().ok_or(AlgebraError::NotAProductGrading)?;
    if n != m {
        return Err(AlgebraError::NotAProductGrading);
    }
    let members: Vec<Elem> = (0..n).map(|g| square.join(g, g).unwrap()).collect();
    Ok(Subgroup::from_members(square.clone(), &members)?)
}

/// `diag(G)` graded by the given square `G × G`.
pub fn diag_algebra_in(square: &Arc<FiniteGroup>) -> Result<GradedAlgebra, AlgebraError> {
    let d = diagonal_subgroup(square)?;
    let mut a = twisted_group_algebra(&d, &Cocycle::zero(d.clone(), 1))?;
    a.provenance = "diag".into();
    Ok(a)
}

/// `diag(G)`: basis `u_g` of degree `(g, g)` in `G × G`.
pub fn diag_algebra(g: &FiniteGroup) -> Result<GradedAlgebra, AlgebraError> {
    let square = Arc::new(FiniteGroup::direct_product(g, g)?);
    diag_algebra_in(&square)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BarVariant {
    /// degree `x ↦ x⁻¹`
    PlainAntipode,
    /// degree `(x, y) ↦ (y⁻¹, x⁻¹)`
    SwapAntipode,
}

/// Opposite multiplication with antipode-transformed degrees.
pub fn bar(a: &GradedAlgebra, variant: BarVariant) -> Result<GradedAlgebra, AlgebraError> {
    let g = &a.grading;
    if variant == BarVariant::SwapAntipode && !g.is_square_product() {
        return Err(AlgebraError::NotAProductGrading);
    }
    let n = a.dim();
    let degrees = a
        .degrees
        .iter()
        .map(|&d| match variant {
            BarVariant::PlainAntipode => g.inv(d),
            BarVariant::SwapAntipode => g.inv(g.swap_factors(d).unwrap()),
        })
        .collect();
    let mul = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| a.product(j, i))
        .collect();
    Ok(GradedAlgebra {
        grading: g.clone(),
        modulus: a.modulus,
        degrees,
        mul,
        unit: a.unit.clone(),
        provenance: format!("bar[{variant:?}]({})", a.provenance),
        origin: None,
    })
}

/// Index bookkeeping for a cotensor product of two `G × G`-graded algebras.
///
/// Factors are numbered 1 and 2 and signs are `+1` or `-1`. A pair
/// `(s, k)` of basis elements is matched when
/// `π_{s_factor}(deg s)^{s_sign} · π_{k_factor}(deg k)^{k_sign} = e`, and
/// gets the degree `(π_{s'}(deg s)^{out_s_sign}, π_{k'}(deg k)^{out_k_sign})`
/// with `s'`, `k'` the complementary factors. With `opposite` set, the
/// first factor multiplies in the opposite algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CotensorConvention {
    pub s_factor: u8,
    pub s_sign: i8,
    pub k_factor: u8,
    pub k_sign: i8,
    pub out_s_sign: i8,
    pub out_k_sign: i8,
    pub opposite: bool,
}

impl CotensorConvention {
    /// Bar of the left factor followed by coinvariants of the combined
    /// coaction: ordinary multiplication, `π₁(deg s)⁻¹ · π₂(deg k) = e`,
    /// degree `(π₂(deg s), π₁(deg k))`.
    pub const PIPELINE: CotensorConvention = CotensorConvention {
        s_factor: 1,
        s_sign: -1,
        k_factor: 2,
        k_sign: 1,
        out_s_sign: 1,
        out_k_sign: 1,
        opposite: false,
    };

    /// All 128 conventions, [`CotensorConvention::PIPELINE`] first.
    pub fn all() -> Vec<CotensorConvention> {
        let mut out = vec![Self::PIPELINE];
        for s_factor in [1, 2] {
            for k_factor in [1, 2] {
                for s_sign in [1, -1] {
                    for k_sign in [1, -1] {
                        for out_s_sign in [1, -1] {
                            for out_k_sign in [1, -1] {
                                for opposite in [false, true] {
                                    let c = CotensorConvention {
                                        s_factor,
                                        s_sign,
                                        k_factor,
                                        k_sign,
                                        out_s_sign,
                                        out_k_sign,
                                        opposite,
                                    };
                                    if c != Self::PIPELINE {
                                        out.push(c);
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        out
    }

    pub fn validate(&self) -> Result<(), AlgebraError> {
        let factor_ok = |f: u8| f == 1 || f == 2;
        let sign_ok = |s: i8| s == 1 || s == -1;
        if factor_ok(self.s_factor)
            && factor_ok(self.k_factor)
            && [self.s_sign, self.k_sign, self.out_s_sign, self.out_k_sign]
                .into_iter()
                .all(sign_ok)
        {
            Ok(())
        } else {
            Err(AlgebraError::ConventionUnresolved(format!("{self:?}")))
        }
    }
}

struct SquareOps<'a> {
    sq: &'a FiniteGroup,
    e: Elem,
}

impl SquareOps<'_> {
    fn proj(&self, x: Elem, factor: u8) -> Elem {
        let (a, b) = self.sq.split(x).unwrap();
        if factor == 1 {
            a
        } else {
            b
        }
    }

    fn g_mul(&self, x: Elem, y: Elem) -> Elem {
        let p = self.sq.mul(self.sq.join(x, self.e).unwrap(), self.sq.join(y, self.e).unwrap());
        self.sq.split(p).unwrap().0
    }

    fn g_pow(&self, x: Elem, sign: i8) -> Elem {
        if sign == 1 {
            x
        } else {
            self.sq.split(self.sq.inv(self.sq.join(x, self.e).unwrap())).unwrap().0
        }
    }

    /// Both orders of projecting the coproduct `h ⊗ h` of a group-like
    /// degree agree.
    fn tech_pi(&self, x: Elem) -> bool {
        let coproduct = [(x, x)];
        coproduct.iter().all(|&(h1, h2)| {
            (self.proj(h1, 1), self.proj(h2, 2)) == (self.proj(h2, 1), self.proj(h1, 2))
        })
    }
}

/// The cotensor product of `S` and `K` under `conv`.
pub fn cotensor(
    s: &GradedAlgebra,
    k: &GradedAlgebra,
    conv: &CotensorConvention,
) -> Result<GradedAlgebra, AlgebraError> {
    conv.validate()?;
    if *s.grading != *k.grading {
        return Err(AlgebraError::GradingMismatch);
    }
    let sq = &s.grading;
    if !matches!(sq.factor_orders(), Some((a, b)) if a == b) {
        return Err(AlgebraError::NotAProductGrading);
    }
    let ops = SquareOps {
        sq,
        e: sq.split(sq.identity()).unwrap().0,
    };
    let m = checked_lcm(s.modulus, k.modulus)?;
    let (ks, kk) = (m / s.modulus, m / k.modulus);
    let (sd, kd) = (s.dim(), k.dim());
    let mut pairs = Vec::new();
    let mut index = vec![usize::MAX; sd * kd];
    for a in 0..sd {
        let da = s.degrees[a];
        debug_assert!(ops.tech_pi(da));
        let sa = ops.g_pow(ops.proj(da, conv.s_factor), conv.s_sign);
        for b in 0..kd {
            let kb = ops.g_pow(ops.proj(k.degrees[b], conv.k_factor), conv.k_sign);
            if ops.g_mul(sa, kb) == ops.e {
                index[a * kd + b] = pairs.len();
                pairs.push((a, b));
            }
        }
    }
    let (s_out, k_out) = (3 - conv.s_factor, 3 - conv.k_factor);
    let degrees = pairs
        .iter()
        .map(|&(a, b)| {
            let x = ops.g_pow(ops.proj(s.degrees[a], s_out), conv.out_s_sign);
            let y = ops.g_pow(ops.proj(k.degrees[b], k_out), conv.out_k_sign);
            sq.join(x, y).unwrap()
        })
        .collect();
    let n = pairs.len();
    let mut mul = Vec::with_capacity(n * n);
    for &(a, b) in &pairs {
        for &(a2, b2) in &pairs {
            let st = if conv.opposite { s.product(a2, a) } else { s.product(a, a2) };
            let term = match (st, k.product(b, b2)) {
                (Some(x), Some(y)) => {
                    let target = index[x.target * kd + y.target];
                    if target == usize::MAX {
                        return Err(AlgebraError::NotClosed(index[a * kd + b], index[a2 * kd + b2]));
                    }
                    Some(Term {
                        coef: (x.coef * ks + y.coef * kk) % m,
                        target,
                    })
                }
                _ => None,
            };
            mul.push(term);
        }
    }
    let mut unit = Vec::new();
    for &u in &s.unit {
        for &v in &k.unit {
            if index[u * kd + v] != usize::MAX {
                unit.push(index[u * kd + v]);
            }
        }
    }
    let out = GradedAlgebra {
        grading: sq.clone(),
        modulus: m,
        degrees,
        mul,
        unit,
        provenance: format!("cotensor({}, {})", s.provenance, k.provenance),
        origin: Some(CotensorOrigin {
            pairs,
            opposite: conv.opposite,
        }),
    };
    out.check_degrees()?;
    out.check_unit()?;
    Ok(out)
}

/// Whether `S ⊗ K` is a free left `C`-module for the monomial action of
/// `C`'s basis: every orbit is a free, transitive copy of `C`'s basis.
pub fn check_freeness(s: &GradedAlgebra, k: &GradedAlgebra, c: &GradedAlgebra) -> bool {
    let Some(origin) = c.origin() else {
        return false;
    };
    let total = s.dim() * k.dim();
    let cd = c.dim();
    if total % cd != 0 {
        return false;
    }
    let kd = k.dim();
    let act = |p: usize, x: usize| -> Option<usize> {
        let (c1, c2) = origin.pairs[p];
        let (a, b) = (x / kd, x % kd);
        let st = if origin.opposite { s.product(a, c1)? } else { s.product(c1, a)? };
        let kt = k.product(c2, b)?;
        Some(st.target * kd + kt.target)
    };
    let orbit = |x: usize| -> Option<Vec<usize>> {
        let mut o = (0..cd).map(|p| act(p, x)).collect::<Option<Vec<usize>>>()?;
        o.sort_unstable();
        let len = o.len();
        o.dedup();
        (o.len() == len).then_some(o)
    };
    let mut seen = vec![false; total];
    for x in 0..total {
        if seen[x] {
            continue;
        }
        let Some(o) = orbit(x) else {
            return false;
        };
        if o.binary_search(&x).is_err() || o.iter().any(|&y| seen[y]) {
            return false;
        }
        for &y in &o {
            if orbit(y).as_ref() != Some(&o) {
                return false;
            }
        }
        for &y in &o {
            seen[y] = true;
        }
    }
    true
}

/// No proper nonzero homogeneous right ideal: every homogeneous component
/// has dimension at most one and every basis element generates the whole
/// algebra as a right ideal.
pub fn is_graded_simple(a: &GradedAlgebra) -> bool {
    if a.component_dims().values().any(|&d| d > 1) {
        return false;
    }
    let n = a.dim();
    (0..n).all(|i| {
        let mut seen = vec![false; n];
        seen[i] = true;
        let mut stack = vec![i];
        let mut count = 1;
        while let Some(x) = stack.pop() {
            for j in 0..n {
                if let Some(t) = a.product(x, j) {
                    if !seen[t.target] {
                        seen[t.target] = true;
                        count += 1;
                        stack.push(t.target);
                    }
                }
            }
        }
        count == n
    })
}

/// An invertible bimodule class: a support `L ⊆ G × G` and a cocycle class
/// on it.
#[derive(Clone, Debug)]
pub struct BimoduleClass {
    pub support: Subgroup,
    pub cocycle: Cocycle,
    pub provenance: String,
}

impl BimoduleClass {
    pub fn new(support: Subgroup, cocycle: Cocycle, provenance: impl Into<String>) -> Result<Self, AlgebraError> {
        if cocycle.domain() != &support {
            return Err(CocycleError::DomainMismatch.into());
        }
        if !check_cocycle(&cocycle) {
            return Err(AlgebraError::Malformed("class representative is not a normalized cocycle".into()));
        }
        Ok(BimoduleClass {
            support,
            cocycle,
            provenance: provenance.into(),
        })
    }

    pub fn algebra(&self) -> Result<GradedAlgebra, AlgebraError> {
        twisted_group_algebra(&self.support, &self.cocycle)
    }
}

/// Same support and cohomologous representatives.
pub fn class_equal(a: &BimoduleClass, b: &BimoduleClass) -> bool {
    a.support == b.support && cohomologous(&a.cocycle, &b.cocycle).unwrap_or(false)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Unreduced {
    /// A homogeneous central idempotent other than 1 exists; `blocks` is
    /// the dimension of the degree-`e` part of the centre.
    Decomposable { blocks: usize },
}

#[derive(Clone, Debug)]
pub enum Reduction {
    Class(BimoduleClass),
    Unreduced(Unreduced),
}

impl Reduction {
    pub fn class(self) -> Option<BimoduleClass> {
        match self {
            Reduction::Class(c) => Some(c),
            Reduction::Unreduced(_) => None,
        }
    }
}

/// Basis multiplication of a twisted-group-like algebra as a group table.
fn basis_group(a: &GradedAlgebra) -> Option<FiniteGroup> {
    if a.unit.len() != 1 || a.mul.iter().any(Option::is_none) {
        return None;
    }
    let n = a.dim();
    let table: Vec<Vec<usize>> = (0..n)
        .map(|i| (0..n).map(|j| a.product(i, j).unwrap().target).collect())
        .collect();
    let latin = |get: &dyn Fn(usize, usize) -> usize| {
        (0..n).all(|i| {
            let mut seen = vec![false; n];
            (0..n).all(|j| !std::mem::replace(&mut seen[get(i, j)], true))
        })
    };
    if !latin(&|i, j| table[i][j]) || !latin(&|i, j| table[j][i]) {
        return None;
    }
    FiniteGroup::from_table_unchecked(&table).ok()
}

/// Reduces a graded algebra to its class `(L, [ψ])`.
///
/// Twisted group algebras `k_θ P` of an abelian group `P` go through exponent
/// arithmetic; everything else through exact linear algebra over `Q(ζ)`.
pub fn classify(a: &GradedAlgebra) -> Result<Reduction, AlgebraError> {
    match basis_group(a) {
        Some(p) if p.is_commutative() => classify_twisted(a, Arc::new(p)),
        _ => classify_generic(a),
    }
}

/// Exponent-arithmetic reduction; fails with `ReductionStuck` unless the
/// algebra is a twisted group algebra of an abelian group.
pub fn classify_structured(a: &GradedAlgebra) -> Result<Reduction, AlgebraError> {
    match basis_group(a) {
        Some(p) if p.is_commutative() => classify_twisted(a, Arc::new(p)),
        _ => Err(AlgebraError::ReductionStuck("not a twisted group algebra of an abelian group".into())),
    }
}

fn classify_twisted(a: &GradedAlgebra, p: Arc<FiniteGroup>) -> Result<Reduction, AlgebraError> {
    let n = a.dim();
    let m = a.modulus;
    let grading = &a.grading;
    let e_deg = grading.identity();
    let theta = |x: usize, y: usize| a.product(x, y).unwrap().coef;
    let alt = |x: usize, y: usize| (theta(x, y) + m - theta(y, x)) % m;
    let kernel: Vec<usize> = (0..n).filter(|&x| a.degrees[x] == e_deg).collect();
    let radical = kernel.iter().filter(|&&x| (0..n).all(|y| alt(x, y) == 0)).count();
    if radical > 1 {
        return Ok(Reduction::Unreduced(Unreduced::Decomposable { blocks: radical }));
    }
    // maximal isotropic subgroup of the kernel, grown greedily
    let mut lam = vec![false; n];
    lam[p.identity()] = true;
    for &x in &kernel {
        if lam[x] || !(0..n).filter(|&l| lam[l]).all(|l| alt(x, l) == 0) {
            continue;
        }
        let gens: Vec<usize> = (0..n).filter(|&l| lam[l]).chain([x]).collect();
        let closed = Subgroup::generated(p.clone(), &gens)?;
        for &y in closed.members() {
            lam[y] = true;
        }
    }
    let lam_members: Vec<usize> = (0..n).filter(|&l| lam[l]).collect();
    let lam_sub = Subgroup::from_members(p.clone(), &lam_members)?;
    let lifted = m
        .checked_mul(lam_sub.exponent())
        .ok_or(CocycleError::ModulusOverflow)?;
    let scale = lifted / m;
    let theta_lam = Cocycle::from_fn(lam_sub.clone(), lifted, |x, y| (theta(x, y) * scale) as i64);
    let c = coboundary_witness(&theta_lam)
        .ok_or_else(|| AlgebraError::ReductionStuck("restriction to the isotropic subgroup is not trivial".into()))?;
    let perp: Vec<usize> = (0..n)
        .filter(|&x| lam_members.iter().all(|&l| alt(x, l) == 0))
        .collect();
    let mut section: BTreeMap<Elem, usize> = BTreeMap::new();
    section.insert(e_deg, a.unit[0]);
    for &x in &perp {
        section.entry(a.degrees[x]).or_insert(x);
    }
    let members: Vec<Elem> = section.keys().copied().collect();
    let support = Subgroup::from_members(grading.clone(), &members)
        .map_err(|_| AlgebraError::ReductionStuck("support is not a subgroup".into()))?;
    let stuck = std::cell::Cell::new(false);
    let psi = Cocycle::from_fn(support.clone(), lifted, |g, h| {
        let (x, y) = (section[&g], section[&h]);
        let r = section[&grading.mul(g, h)];
        let xy = p.mul(x, y);
        let l = p.mul(p.inv(r), xy);
        let Some(lpos) = lam_sub.position(l) else {
            stuck.set(true);
            return 0;
        };
        (theta(x, y) * scale) as i64 - (theta(r, l) * scale) as i64 + c[lpos] as i64
    });
    if stuck.get() {
        return Err(AlgebraError::ReductionStuck("section products leave the isotropic subgroup".into()));
    }
    if !check_cocycle(&psi) {
        return Err(AlgebraError::ReductionStuck("extracted table is not a cocycle".into()));
    }
    Ok(Reduction::Class(BimoduleClass {
        support,
        cocycle: psi,
        provenance: format!("classify[structured]({})", a.provenance),
    }))
}

type Vector = Vec<RootElem>;

struct Linear<'a> {
    a: &'a GradedAlgebra,
    ring: RootRing,
    step: usize,
}

impl Linear<'_> {
    fn basis(&self, i: usize) -> Vector {
        let mut v = vec![self.ring.zero(); self.a.dim()];
        v[i] = self.ring.one();
        v
    }

    fn mul(&self, x: &Vector, y: &Vector) -> Vector {
        let n = self.a.dim();
        let mut out = vec![self.ring.zero(); n];
        for (i, xi) in x.iter().enumerate() {
            if self.ring.is_zero(xi) {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if self.ring.is_zero(yj) {
                    continue;
                }
                if let Some(t) = self.a.product(i, j) {
                    let c = self.ring.mul(&self.ring.mul(xi, yj), &self.ring.zeta(t.coef * self.step));
                    out[t.target] = self.ring.add(&out[t.target], &c);
                }
            }
        }
        out
    }

    fn is_zero(&self, v: &Vector) -> bool {
        v.iter().all(|x| self.ring.is_zero(x))
    }
}

/// Reduction by exact linear algebra over `Q(ζ)`: centre of the degree-`e`
/// part, a primitive idempotent `f` from a maximal commuting monomial
/// subgroup, and the corner `f A f`.
pub fn classify_generic(a: &GradedAlgebra) -> Result<Reduction, AlgebraError> {
    let n = a.dim();
    let grading = &a.grading;
    let e_deg = grading.identity();
    let kernel: Vec<usize> = (0..n).filter(|&x| a.degrees[x] == e_deg).collect();
    let ring_modulus = a
        .modulus
        .checked_mul(kernel.len().max(1))
        .ok_or(CocycleError::ModulusOverflow)?;
    let lin = Linear {
        a,
        ring: RootRing::new(ring_modulus),
        step: ring_modulus / a.modulus,
    };
    let ring = &lin.ring;

    // centre ∩ A_e
    let mut rows: Vec<Vector> = Vec::new();
    for j in 0..n {
        let uj = lin.basis(j);
        let comms: Vec<Vector> = kernel
            .iter()
            .map(|&i| {
                let ui = lin.basis(i);
                let l = lin.mul(&ui, &uj);
                let r = lin.mul(&uj, &ui);
                l.iter().zip(&r).map(|(x, y)| ring.sub(x, y)).collect()
            })
            .collect();
        for t in 0..n {
            let row: Vector = comms.iter().map(|c| c[t].clone()).collect();
            if row.iter().any(|x| !ring.is_zero(x)) {
                rows.push(row);
            }
        }
    }
    let centre = nullspace(ring, &rows, kernel.len());
    if centre.len() > 1 {
        return Ok(Reduction::Unreduced(Unreduced::Decomposable { blocks: centre.len() }));
    }
    if a.unit.len() != 1 {
        return Err(AlgebraError::ReductionStuck("unit is not a single basis element".into()));
    }
    let unit = a.unit[0];

    // maximal commuting monomial subgroup Λ of A_e
    let commute = |x: usize, y: usize| {
        let (p, q) = (a.product(x, y), a.product(y, x));
        p.is_some() && p == q
    };
    let mut lam = vec![unit];
    for &x in &kernel {
        if lam.contains(&x) || !lam.iter().all(|&l| commute(x, l)) {
            continue;
        }
        let mut grown = lam.clone();
        grown.push(x);
        let mut i = 0;
        while i < grown.len() {
            for j in 0..=i {
                for (u, v) in [(grown[i], grown[j]), (grown[j], grown[i])] {
                    let t = a
                        .product(u, v)
                        .ok_or_else(|| AlgebraError::ReductionStuck("zero product in degree e".into()))?
                        .target;
                    if !grown.contains(&t) {
                        grown.push(t);
                    }
                }
            }
            i += 1;
        }
        if grown.iter().all(|&u| grown.iter().all(|&v| commute(u, v))) {
            lam = grown;
        }
    }
    lam.sort_unstable();
    let table: Vec<Vec<usize>> = lam
        .iter()
        .map(|&x| {
            lam.iter()
                .map(|&y| lam.binary_search(&a.product(x, y).unwrap().target).unwrap())
                .collect()
        })
        .collect();
    let lam_group = Arc::new(FiniteGroup::from_table_unchecked(&table)?);
    let lam_sub = Subgroup::whole(lam_group.clone());
    let lifted = a.modulus * lam_sub.exponent();
    let scale = lifted / a.modulus;
    let theta_lam = Cocycle::from_fn(lam_sub, lifted, |i, j| (a.product(lam[i], lam[j]).unwrap().coef * scale) as i64);
    let c = coboundary_witness(&theta_lam)
        .ok_or_else(|| AlgebraError::ReductionStuck("commuting part is not split".into()))?;

    // f = (1/|Λ|) Σ ζ^{-c(λ)} u_λ
    let inv_len = BigRational::new(BigInt::from(1), BigInt::from(lam.len()));
    let mut f = vec![ring.zero(); n];
    let lift_step = ring_modulus / lifted;
    for (pos, &l) in lam.iter().enumerate() {
        let k = (lifted - c[pos]) % lifted * lift_step;
        f[l] = ring.scale(&ring.zeta(k), &inv_len);
    }
    if lin.mul(&f, &f) != f {
        return Err(AlgebraError::ReductionStuck("candidate idempotent is not idempotent".into()));
    }

    // corner f A f, one representative per degree
    let mut reps: BTreeMap<Elem, Vector> = BTreeMap::new();
    let mut spans: BTreeMap<Elem, Vec<Vector>> = BTreeMap::new();
    reps.insert(e_deg, f.clone());
    for j in 0..n {
        let w = lin.mul(&lin.mul(&f, &lin.basis(j)), &f);
        if lin.is_zero(&w) {
            continue;
        }
        let d = a.degrees[j];
        reps.entry(d).or_insert_with(|| w.clone());
        spans.entry(d).or_default().push(w);
    }
    for vs in spans.values() {
        let mut m = vs.clone();
        if row_reduce(ring, &mut m).len() > 1 {
            return Err(AlgebraError::ReductionStuck("corner has a component of dimension > 1".into()));
        }
    }
    let members: Vec<Elem> = reps.keys().copied().collect();
    let support = Subgroup::from_members(grading.clone(), &members)
        .map_err(|_| AlgebraError::ReductionStuck("support is not a subgroup".into()))?;
    let mut psi_rows = Vec::with_capacity(members.len());
    for &g in &members {
        let mut row = Vec::with_capacity(members.len());
        for &h in &members {
            let prod = lin.mul(&reps[&g], &reps[&h]);
            let target = &reps[&grading.mul(g, h)];
            let t = target
                .iter()
                .position(|x| !ring.is_zero(x))
                .expect("nonzero representative");
            let s = ring.div(&prod[t], &target[t]).expect("nonzero pivot");
            let scaled: Vector = target.iter().map(|x| ring.mul(x, &s)).collect();
            if scaled != prod {
                return Err(AlgebraError::ReductionStuck("corner product is not monomial".into()));
            }
            let k = ring
                .as_root_of_unity(&s)
                .ok_or_else(|| AlgebraError::ReductionStuck("structure constant is not a root of unity".into()))?;
            row.push(k);
        }
        psi_rows.push(row);
    }
    let psi = Cocycle::new(support.clone(), ring_modulus, &psi_rows)?;
    if !check_cocycle(&psi) {
        return Err(AlgebraError::ReductionStuck("extracted table is not a cocycle".into()));
    }
    Ok(Reduction::Class(BimoduleClass {
        support,
        cocycle: psi,
        provenance: format!("classify[generic]({})", a.provenance),
    }))
}

/// Block algebra `A ⊕ B` (same grading); the unit is the sum of both units.
pub fn direct_sum(a: &GradedAlgebra, b: &GradedAlgebra) -> Result<GradedAlgebra, AlgebraError> {
    if *a.grading != *b.grading {
        return Err(AlgebraError::GradingMismatch);
    }
    let m = checked_lcm(a.modulus, b.modulus)?;
    let (na, nb) = (a.dim(), b.dim());
    let n = na + nb;
    let mut mul = vec![None; n * n];
    for i in 0..na {
        for j in 0..na {
            mul[i * n + j] = a.product(i, j).map(|t| Term {
                coef: t.coef * (m / a.modulus),
                target: t.target,
            });
        }
    }
    for i in 0..nb {
        for j in 0..nb {
            mul[(na + i) * n + na + j] = b.product(i, j).map(|t| Term {
                coef: t.coef * (m / b.modulus),
                target: na + t.target,
            });
        }
    }
    let mut degrees = a.degrees.clone();
    degrees.extend_from_slice(&b.degrees);
    let unit = a.unit.iter().copied().chain(b.unit.iter().map(|&u| na + u)).collect();
    Ok(GradedAlgebra {
        grading: a.grading.clone(),
        modulus: m,
        degrees,
        mul,
        unit,
        provenance: format!("sum({}, {})", a.provenance, b.provenance),
        origin: None,
    })
}
