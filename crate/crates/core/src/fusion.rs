//! Decomposition of `M(F₁, ψ₁) ⊠ M(F₂, ψ₂)` over `Rep(G)` into summands
//! indexed by the double cosets `F₂ \ G / F₁`.

use crate::cocycles::{check_cocycle, fusion_cocycle, Cocycle, CocycleError};
use crate::groups::{double_cosets, Elem, Subgroup};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FusionSummand {
    pub rep: Elem,
    pub fs: Subgroup,
    pub psi_s: Cocycle,
}

/// One summand `(s, F_s, ψ_s)` per double coset, ordered by minimal
/// representative.
pub fn fuse(psi1: &Cocycle, psi2: &Cocycle) -> Result<Vec<FusionSummand>, CocycleError> {
    let (f1, f2) = (psi1.domain(), psi2.domain());
    if *f1.parent() != *f2.parent() {
        return Err(CocycleError::DomainMismatch);
    }
    let mut out = Vec::new();
    for dc in double_cosets(f2, f1)? {
        let s = dc.representative;
        let fs = f1.conjugate(s).intersection(f2)?;
        let psi_s = fusion_cocycle(psi1, psi2, s, &fs)?;
        debug_assert!(check_cocycle(&psi_s));
        out.push(FusionSummand { rep: s, fs, psi_s });
    }
    Ok(out)
}
