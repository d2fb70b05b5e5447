mod common;

use std::collections::BTreeSet;
use std::sync::Arc;

use hbp_core::cocycles::{coboundary_witness, cohomologous, Cocycle};
use hbp_core::comodalg::{classify, class_equal, twisted_group_algebra, BimoduleClass, Reduction};
use hbp_core::duality::{orth_group, DualPair};
use hbp_core::fusion::fuse;
use hbp_core::groups::{enumerate_automorphisms, FiniteGroup, Subgroup};

use common::*;

fn library_orth(inv: &[usize]) -> BTreeSet<Vec<usize>> {
    let pair = Arc::new(DualPair::new(inv).unwrap());
    orth_group(&pair).unwrap().iter().map(|m| m.image().to_vec()).collect()
}

#[test]
fn orth_against_bijection_filter() {
    for inv in [&[][..], &[2], &[3]] {
        assert_eq!(library_orth(inv), orth_by_bijections(inv), "{inv:?}");
    }
    assert_eq!(orth_by_bijections(&[2]).len(), 2);
    assert_eq!(orth_by_bijections(&[3]).len(), 4);
}

#[test]
fn orth_against_basis_images() {
    for (inv, count) in [(&[2][..], 2), (&[3], 4), (&[4], 4), (&[2, 2], 72), (&[5], 8), (&[6], 8)] {
        let oracle = orth_by_basis_images(inv);
        assert_eq!(oracle.len(), count, "{inv:?}");
        assert_eq!(library_orth(inv), oracle, "{inv:?}");
    }
}

#[test]
fn pairing_matches_coordinates() {
    for inv in [&[2][..], &[4], &[2, 2], &[2, 4]] {
        let pair = DualPair::new(inv).unwrap();
        let n = order_of(inv);
        for chi in 0..n {
            for g in 0..n {
                assert_eq!(pair.pairing(chi, g), pairing(inv, chi, g));
            }
        }
    }
}

/// Automorphisms of a table group by filtering all bijections.
fn automorphisms_by_bijections(g: &FiniteGroup) -> usize {
    let n = g.order();
    let mut count = 0;
    let mut p: Vec<usize> = (0..n).collect();
    let mut c = vec![0; n];
    let hom = |p: &[usize]| (0..n).all(|x| (0..n).all(|y| p[g.mul(x, y)] == g.mul(p[x], p[y])));
    count += usize::from(hom(&p));
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                p.swap(0, i);
            } else {
                p.swap(c[i], i);
            }
            count += usize::from(hom(&p));
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    count
}

#[test]
fn automorphism_counts_against_bijections() {
    let cases: Vec<Arc<FiniteGroup>> = vec![
        s3(),
        Arc::new(FiniteGroup::cyclic_product(&[2, 2]).unwrap()),
        Arc::new(FiniteGroup::cyclic_product(&[8]).unwrap()),
        Arc::new(FiniteGroup::cyclic_product(&[2, 4]).unwrap()),
        Arc::new(FiniteGroup::cyclic_product(&[7]).unwrap()),
    ];
    for g in cases {
        let lib = enumerate_automorphisms(&g).unwrap();
        assert_eq!(lib.len(), automorphisms_by_bijections(&g), "order {}", g.order());
        assert!(lib[0].image().iter().enumerate().all(|(i, &x)| i == x));
    }
}

#[test]
fn s3_double_cosets_by_hand() {
    let g = s3();
    // elements: 012, 021, 102, 120, 201, 210; (0 1) is 102
    let t = Subgroup::generated(g.clone(), &[2]).unwrap();
    assert_eq!(t.members(), &[0, 2]);
    let out = fuse(&Cocycle::zero(t.clone(), 1), &Cocycle::zero(t.clone(), 1)).unwrap();
    assert_eq!(out.len(), 2);
    assert_eq!(out[0].fs, t);
    assert_eq!(out[1].fs.order(), 1);
    let cosets: Vec<Vec<usize>> = hbp_core::groups::double_cosets(&t, &t).unwrap().into_iter().map(|d| d.members).collect();
    assert_eq!(cosets, vec![vec![0, 2], vec![1, 3, 4, 5]]);
}

fn sigma() -> Cocycle {
    let g = Arc::new(FiniteGroup::cyclic_product(&[2, 2]).unwrap());
    // x = 2a + b, sigma((a,b),(c,d)) = b c
    Cocycle::from_fn(Subgroup::whole(g), 2, |x, y| ((x % 2) * (y / 2)) as i64)
}

#[test]
fn sigma_is_not_a_coboundary() {
    let s = sigma();
    assert!(!exhaustive_coboundary(&s));
    assert_eq!(coboundary_witness(&s), None);
    let lifted = s.with_modulus(16);
    assert!(!exhaustive_coboundary(&lifted));
    assert_eq!(coboundary_witness(&lifted), None);
    assert!(!cohomologous(&s, &Cocycle::zero(s.domain().clone(), 1)).unwrap());
}

#[test]
fn sigma_symmetrization_is_trivial_over_k() {
    // sigma + sigma^T is symmetric
    let s = sigma();
    let sym = Cocycle::from_fn(s.domain().clone(), 2, |x, y| (s.value(x, y).unwrap() + s.value(y, x).unwrap()) as i64);
    assert!(exhaustive_coboundary(&sym.with_modulus(4)));
    assert!(cohomologous(&sym, &Cocycle::zero(s.domain().clone(), 1)).unwrap());
}

#[test]
fn twisted_algebras_classify_to_themselves() {
    let g = Arc::new(FiniteGroup::cyclic_product(&[2, 2]).unwrap());
    for psi in [sigma(), Cocycle::zero(Subgroup::whole(g.clone()), 1)] {
        let a = twisted_group_algebra(psi.domain(), &psi).unwrap();
        let Reduction::Class(c) = classify(&a).unwrap() else {
            panic!("twisted group algebras are graded simple");
        };
        let own = BimoduleClass::new(psi.domain().clone(), psi.clone(), "input").unwrap();
        assert!(class_equal(&c, &own));
    }
}
