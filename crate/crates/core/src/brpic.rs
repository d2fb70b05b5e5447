//! The Brauer-Picard group of `Rep(G)` for finite abelian `G`: one class
//! `(L_α, ψ_α)` per `α ∈ O(G ⊕ Ĝ)`, multiplied by cotensor product and
//! reduction, and compared with composition in `O(G ⊕ Ĝ)`.

use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cocycles::{brpic_cocycle_with, CocycleError, CocycleForm};
use crate::comodalg::{
    check_freeness, class_equal, classify, cotensor, diagonal_subgroup, twisted_group_algebra, AlgebraError,
    BimoduleClass, CotensorConvention, GradedAlgebra, Reduction, Unreduced,
};
use crate::duality::{orth_compose, orth_group, DualPair, OrthogonalMap};
use crate::groups::{Elem, GroupError};

/// A cocycle form together with a cotensor convention.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConventionSpec {
    pub form: CocycleForm,
    pub cotensor: CotensorConvention,
}

/// The candidate space in resolution order: every cotensor convention with
/// the literal form (pipeline convention first), then the same with the
/// alternating-root form.
pub fn candidates() -> Vec<ConventionSpec> {
    [CocycleForm::Literal, CocycleForm::AlternatingRoot]
        .into_iter()
        .flat_map(|form| {
            CotensorConvention::all()
                .into_iter()
                .map(move |cotensor| ConventionSpec { form, cotensor })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrderFlag {
    /// `product[a][b]` is the class of `α_a ∘ α_b`.
    Left,
    /// `product[a][b]` is the class of `α_b ∘ α_a`.
    Right,
}

#[derive(Clone, Debug)]
pub struct GroupLawFailure {
    pub convention: ConventionSpec,
    pub pair: (usize, usize),
    pub reason: String,
    pub algebra: Option<GradedAlgebra>,
}

#[derive(Debug, Error)]
pub enum BrPicError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Cocycle(#[from] CocycleError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("classes of orthogonal maps {0} and {1} coincide")]
    ClassCollision(usize, usize),
    #[error("cotensor product is decomposable into {blocks} blocks")]
    Decomposable { blocks: usize },
    #[error("group law fails for pair {:?}: {}", .0.pair, .0.reason)]
    GroupLawFailure(Box<GroupLawFailure>),
}

#[derive(Clone, Debug)]
pub struct BrPicElement {
    pub alpha: OrthogonalMap,
    pub class: BimoduleClass,
}

/// One class per orthogonal map, in the order of [`orth_group`]; classes
/// are checked to be pairwise distinct.
pub fn brpic_elements(pair: &Arc<DualPair>, form: CocycleForm) -> Result<Vec<BrPicElement>, BrPicError> {
    let maps = orth_group(pair)?;
    let mut out = Vec::with_capacity(maps.len());
    for alpha in maps {
        let (l, psi) = brpic_cocycle_with(&alpha, form)?;
        let class = BimoduleClass::new(l, psi, format!("brpic_cocycle[{form:?}]"))?;
        out.push(BrPicElement { alpha, class });
    }
    let buckets = support_buckets(out.iter().map(|e| &e.class));
    for idx in buckets.values() {
        for (i, &a) in idx.iter().enumerate() {
            for &b in &idx[i + 1..] {
                if class_equal(&out[a].class, &out[b].class) {
                    return Err(BrPicError::ClassCollision(a, b));
                }
            }
        }
    }
    Ok(out)
}

fn support_buckets<'a>(classes: impl Iterator<Item = &'a BimoduleClass>) -> HashMap<Vec<Elem>, Vec<usize>> {
    let mut out: HashMap<Vec<Elem>, Vec<usize>> = HashMap::new();
    for (i, c) in classes.enumerate() {
        out.entry(c.support.members().to_vec()).or_default().push(i);
    }
    out
}

#[derive(Clone, Debug)]
pub struct ProductOutcome {
    pub class: BimoduleClass,
    pub free: bool,
    pub algebra: GradedAlgebra,
}

/// `classify(cotensor(k_ψ L, k_φ L'))` with the freeness hypothesis
/// recorded.
pub fn brpic_product(
    a: &BimoduleClass,
    b: &BimoduleClass,
    conv: &ConventionSpec,
) -> Result<ProductOutcome, BrPicError> {
    product_of_algebras(&a.algebra()?, &b.algebra()?, &conv.cotensor)
}

fn product_of_algebras(
    s: &GradedAlgebra,
    k: &GradedAlgebra,
    conv: &CotensorConvention,
) -> Result<ProductOutcome, BrPicError> {
    let c = cotensor(s, k, conv)?;
    let free = check_freeness(s, k, &c);
    match classify(&c)? {
        Reduction::Class(class) => Ok(ProductOutcome { class, free, algebra: c }),
        Reduction::Unreduced(Unreduced::Decomposable { blocks }) => Err(BrPicError::Decomposable { blocks }),
    }
}

/// How one cocycle form fared during convention resolution.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "status")]
pub enum FormOutcome {
    Collision { a: usize, b: usize },
    Rejected { tried: usize },
    Selected { tried: usize },
}

#[derive(Clone, Debug)]
pub struct BrPicTable {
    pub pair: Arc<DualPair>,
    pub elements: Vec<BrPicElement>,
    pub product: Vec<Vec<usize>>,
    pub free: Vec<Vec<bool>>,
    pub convention: ConventionSpec,
    pub order_flag: OrderFlag,
    pub forms: Vec<(CocycleForm, FormOutcome)>,
}

impl BrPicTable {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn all_free(&self) -> bool {
        self.free.iter().flatten().all(|&f| f)
    }
}

struct Context<'a> {
    elements: &'a [BrPicElement],
    algebras: Vec<GradedAlgebra>,
    buckets: HashMap<Vec<Elem>, Vec<usize>>,
}

impl Context<'_> {
    fn lookup(&self, c: &BimoduleClass) -> Option<usize> {
        self.buckets
            .get(c.support.members())?
            .iter()
            .copied()
            .find(|&i| class_equal(c, &self.elements[i].class))
    }

    fn product(&self, a: usize, b: usize, conv: &CotensorConvention) -> Result<(usize, bool), String> {
        let out = product_of_algebras(&self.algebras[a], &self.algebras[b], conv).map_err(|e| e.to_string())?;
        let idx = self
            .lookup(&out.class)
            .ok_or_else(|| "product class is not among the elements".to_string())?;
        Ok((idx, out.free))
    }
}

fn fail(
    ctx: &Context<'_>,
    spec: ConventionSpec,
    pair: (usize, usize),
    reason: impl Into<String>,
) -> GroupLawFailure {
    let algebra = cotensor(&ctx.algebras[pair.0], &ctx.algebras[pair.1], &spec.cotensor).ok();
    GroupLawFailure {
        convention: spec,
        pair,
        reason: reason.into(),
        algebra,
    }
}

type Attempt = (Vec<Vec<usize>>, Vec<Vec<bool>>, OrderFlag);

fn try_convention(
    ctx: &Context<'_>,
    spec: ConventionSpec,
    compose_index: &dyn Fn(usize, usize) -> usize,
) -> Result<Attempt, GroupLawFailure> {
    let n = ctx.elements.len();
    let conv = &spec.cotensor;
    for c in 0..n {
        for (a, b) in [(0, c), (c, 0)] {
            match ctx.product(a, b, conv) {
                Ok((idx, _)) if idx == c => {}
                Ok((idx, _)) => return Err(fail(ctx, spec, (a, b), format!("unit law gives class {idx} instead of {c}"))),
                Err(e) => return Err(fail(ctx, spec, (a, b), e)),
            }
        }
    }
    let results: Vec<Result<(usize, bool), String>> = (0..n * n)
        .into_par_iter()
        .map(|i| ctx.product(i / n, i % n, conv))
        .collect();
    let mut product = vec![vec![0; n]; n];
    let mut free = vec![vec![false; n]; n];
    for (i, r) in results.into_iter().enumerate() {
        let (a, b) = (i / n, i % n);
        match r {
            Ok((idx, f)) => {
                product[a][b] = idx;
                free[a][b] = f;
            }
            Err(e) => return Err(fail(ctx, spec, (a, b), e)),
        }
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if product[product[a][b]][c] != product[a][product[b][c]] {
                    return Err(fail(ctx, spec, (a, b), format!("associativity fails with third factor {c}")));
                }
            }
        }
        if !product[a].contains(&0) {
            return Err(fail(ctx, spec, (a, a), "no inverse"));
        }
    }
    let matches = |flag: OrderFlag| {
        (0..n).all(|a| {
            (0..n).all(|b| {
                let expect = match flag {
                    OrderFlag::Left => compose_index(a, b),
                    OrderFlag::Right => compose_index(b, a),
                };
                product[a][b] == expect
            })
        })
    };
    let flag = if matches(OrderFlag::Left) {
        OrderFlag::Left
    } else if matches(OrderFlag::Right) {
        OrderFlag::Right
    } else {
        return Err(fail(ctx, spec, (0, 0), "product matches composition in neither order"));
    };
    Ok((product, free, flag))
}

/// Resolves the convention and builds the full product table.
pub fn brpic_table(pair: &Arc<DualPair>) -> Result<BrPicTable, BrPicError> {
    let maps = orth_group(pair)?;
    debug_assert!(maps[0].is_identity());
    let by_image: HashMap<&[Elem], usize> = maps.iter().enumerate().map(|(i, m)| (m.image(), i)).collect();
    let compose_table: Vec<Vec<usize>> = maps
        .iter()
        .map(|a| maps.iter().map(|b| by_image[orth_compose(a, b).image()]).collect())
        .collect();
    let compose_index = |a: usize, b: usize| compose_table[a][b];
    let diag = diagonal_subgroup(pair.square())?;
    let mut forms = Vec::new();
    let mut first_failure: Option<GroupLawFailure> = None;
    let mut collision = None;
    for form in [CocycleForm::Literal, CocycleForm::AlternatingRoot] {
        let elements = match brpic_elements(pair, form) {
            Ok(e) => e,
            Err(BrPicError::ClassCollision(a, b)) => {
                forms.push((form, FormOutcome::Collision { a, b }));
                collision.get_or_insert((a, b));
                continue;
            }
            Err(e) => return Err(e),
        };
        if elements[0].class.support != diag || !elements[0].class.cocycle.is_zero() {
            return Err(AlgebraError::Malformed("identity map does not give the unit class".into()).into());
        }
        let algebras = elements
            .iter()
            .map(|e| twisted_group_algebra(&e.class.support, &e.class.cocycle))
            .collect::<Result<Vec<_>, _>>()?;
        let ctx = Context {
            buckets: support_buckets(elements.iter().map(|e| &e.class)),
            elements: &elements,
            algebras,
        };
        let mut tried = 0;
        for cotensor in CotensorConvention::all() {
            tried += 1;
            let spec = ConventionSpec { form, cotensor };
            match try_convention(&ctx, spec, &compose_index) {
                Ok((product, free, order_flag)) => {
                    forms.push((form, FormOutcome::Selected { tried }));
                    return Ok(BrPicTable {
                        pair: pair.clone(),
                        elements,
                        product,
                        free,
                        convention: spec,
                        order_flag,
                        forms,
                    });
                }
                Err(f) => {
                    first_failure.get_or_insert(f);
                }
            }
        }
        forms.push((form, FormOutcome::Rejected { tried }));
    }
    match (first_failure, collision) {
        (Some(f), _) => Err(BrPicError::GroupLawFailure(Box::new(f))),
        (None, Some((a, b))) => Err(BrPicError::ClassCollision(a, b)),
        (None, None) => unreachable!("at least one form is tried"),
    }
}

/// Product table under a fixed convention, without resolution.
pub fn brpic_table_with(pair: &Arc<DualPair>, spec: ConventionSpec) -> Result<BrPicTable, BrPicError> {
    let maps = orth_group(pair)?;
    let by_image: HashMap<&[Elem], usize> = maps.iter().enumerate().map(|(i, m)| (m.image(), i)).collect();
    let compose_table: Vec<Vec<usize>> = maps
        .iter()
        .map(|a| maps.iter().map(|b| by_image[orth_compose(a, b).image()]).collect())
        .collect();
    let elements = brpic_elements(pair, spec.form)?;
    let algebras = elements
        .iter()
        .map(|e| twisted_group_algebra(&e.class.support, &e.class.cocycle))
        .collect::<Result<Vec<_>, _>>()?;
    let ctx = Context {
        buckets: support_buckets(elements.iter().map(|e| &e.class)),
        elements: &elements,
        algebras,
    };
    let (product, free, order_flag) = try_convention(&ctx, spec, &|a, b| compose_table[a][b])
        .map_err(|f| BrPicError::GroupLawFailure(Box::new(f)))?;
    Ok(BrPicTable {
        pair: pair.clone(),
        elements,
        product,
        free,
        convention: spec,
        order_flag,
        forms: vec![(spec.form, FormOutcome::Selected { tried: 1 })],
    })
}
