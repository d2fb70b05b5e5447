//! Independent oracles shared by the integration tests. Nothing here calls
//! into the library's enumeration or solving code; groups are handled in
//! plain mixed-radix coordinates.

#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::Arc;

use hbp_core::cocycles::Cocycle;
use hbp_core::comodalg::CotensorConvention;
use hbp_core::groups::{FiniteGroup, Subgroup};
use proptest::prelude::*;

pub fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn lcm_all(inv: &[usize]) -> usize {
    inv.iter().fold(1, |acc, &n| acc / gcd(acc, n) * n)
}

pub fn order_of(inv: &[usize]) -> usize {
    inv.iter().product()
}

/// Coordinates of `x`, first factor most significant.
pub fn coords(inv: &[usize], mut x: usize) -> Vec<usize> {
    let mut c = vec![0; inv.len()];
    for i in (0..inv.len()).rev() {
        c[i] = x % inv[i];
        x /= inv[i];
    }
    c
}

pub fn index(inv: &[usize], c: &[usize]) -> usize {
    inv.iter().zip(c).fold(0, |acc, (&n, &v)| acc * n + v % n)
}

pub fn add(inv: &[usize], x: usize, y: usize) -> usize {
    let (a, b) = (coords(inv, x), coords(inv, y));
    let s: Vec<usize> = a.iter().zip(&b).map(|(p, q)| p + q).collect();
    index(inv, &s)
}

pub fn neg(inv: &[usize], x: usize) -> usize {
    let c: Vec<usize> = coords(inv, x).iter().zip(inv).map(|(&v, &n)| (n - v) % n).collect();
    index(inv, &c)
}

/// `⟨χ, g⟩ = Σ (M / n_i) χ_i g_i mod M`.
pub fn pairing(inv: &[usize], chi: usize, g: usize) -> usize {
    let m = lcm_all(inv);
    let (c, x) = (coords(inv, chi), coords(inv, g));
    (0..inv.len()).map(|i| (m / inv[i]) * c[i] * x[i]).sum::<usize>() % m.max(1)
}

/// Invariants of `G ⊕ Ĝ`; element `(g, χ)` has index `g * |G| + χ`.
pub fn double_invariants(inv: &[usize]) -> Vec<usize> {
    let mut d = inv.to_vec();
    d.extend_from_slice(inv);
    d
}

fn preserves_pairing(inv: &[usize], img: &[usize]) -> bool {
    let n = order_of(inv);
    (0..n * n).all(|v| {
        let (g, chi) = (v / n, v % n);
        let (g2, chi2) = (img[v] / n, img[v] % n);
        pairing(inv, chi2, g2) == pairing(inv, chi, g)
    })
}

/// `O(G ⊕ Ĝ)` by filtering every bijection of the double.
pub fn orth_by_bijections(inv: &[usize]) -> BTreeSet<Vec<usize>> {
    let d = double_invariants(inv);
    let n = order_of(&d);
    let sums: Vec<Vec<usize>> = (0..n).map(|x| (0..n).map(|y| add(&d, x, y)).collect()).collect();
    let mut out = BTreeSet::new();
    let mut p: Vec<usize> = (0..n).collect();
    // Heap's algorithm
    let mut c = vec![0; n];
    let mut visit = |p: &[usize]| {
        let hom = (0..n).all(|x| (0..n).all(|y| p[sums[x][y]] == sums[p[x]][p[y]]));
        if hom && preserves_pairing(inv, p) {
            out.insert(p.to_vec());
        }
    };
    visit(&p);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                p.swap(0, i);
            } else {
                p.swap(c[i], i);
            }
            visit(&p);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

/// `O(G ⊕ Ĝ)` by trying every assignment of images to the standard basis
/// of the double (element orders respected), extending additively.
pub fn orth_by_basis_images(inv: &[usize]) -> BTreeSet<Vec<usize>> {
    let d = double_invariants(inv);
    let n = order_of(&d);
    let k = d.len();
    let order = |x: usize| {
        let c = coords(&d, x);
        c.iter().zip(&d).fold(1, |acc, (&v, &m)| {
            let o = m / gcd(m, v);
            acc / gcd(acc, o) * o
        })
    };
    let choices: Vec<Vec<usize>> = d.iter().map(|&m| (0..n).filter(|&x| m % order(x) == 0).collect()).collect();
    let mut out = BTreeSet::new();
    let mut pick = vec![0usize; k];
    loop {
        let images: Vec<usize> = (0..k).map(|j| choices[j][pick[j]]).collect();
        let img: Vec<usize> = (0..n)
            .map(|v| {
                let c = coords(&d, v);
                let mut acc = 0;
                for j in 0..k {
                    for _ in 0..c[j] {
                        acc = add(&d, acc, images[j]);
                    }
                }
                acc
            })
            .collect();
        let mut seen = vec![false; n];
        let bij = img.iter().all(|&y| !std::mem::replace(&mut seen[y], true));
        if bij && preserves_pairing(inv, &img) {
            out.insert(img);
        }
        let mut j = 0;
        loop {
            if j == k {
                return out;
            }
            pick[j] += 1;
            if pick[j] < choices[j].len() {
                break;
            }
            pick[j] = 0;
            j += 1;
        }
    }
}

/// Whether some `c : F → Z/M` (every function, `c(e)` included) has
/// `δc = ψ`.
pub fn exhaustive_coboundary(psi: &Cocycle) -> bool {
    let d = psi.domain();
    let g = d.parent();
    let n = d.order();
    let m = psi.modulus();
    let prod: Vec<usize> = (0..n * n)
        .map(|i| d.position(g.mul(d.members()[i / n], d.members()[i % n])).unwrap())
        .collect();
    let mut c = vec![0usize; n];
    loop {
        let ok = (0..n * n).all(|i| {
            let (x, y) = (i / n, i % n);
            (c[x] + c[y] + m - c[prod[i]]) % m == psi.at(x, y)
        });
        if ok {
            return true;
        }
        let mut j = 0;
        loop {
            if j == n {
                return false;
            }
            c[j] += 1;
            if c[j] < m {
                break;
            }
            c[j] = 0;
            j += 1;
        }
    }
}

pub fn s3() -> Arc<FiniteGroup> {
    Arc::new(FiniteGroup::from_permutations(3, &[vec![1, 0, 2], vec![1, 2, 0]]).unwrap())
}

/// Groups for generated cocycle cases, with a label.
pub fn case_groups() -> Vec<(&'static str, Arc<FiniteGroup>)> {
    let cyc = |inv: &[usize]| Arc::new(FiniteGroup::cyclic_product(inv).unwrap());
    vec![
        ("Z/2", cyc(&[2])),
        ("Z/3", cyc(&[3])),
        ("Z/4", cyc(&[4])),
        ("Z/2xZ/2", cyc(&[2, 2])),
        ("Z/5", cyc(&[5])),
        ("Z/6", cyc(&[6])),
        ("Z/2xZ/4", cyc(&[2, 4])),
        ("S3", s3()),
    ]
}

#[derive(Clone, Debug)]
pub struct CaseSpec {
    pub group: usize,
    pub gens: Vec<usize>,
    pub modulus: usize,
    pub kind: u8,
    pub params: Vec<usize>,
}

pub fn case_strategy() -> impl Strategy<Value = CaseSpec> {
    (
        0..case_groups().len(),
        prop::collection::vec(0usize..64, 0..3),
        0usize..1 << 20,
        0u8..4,
        prop::collection::vec(0usize..1 << 16, 24),
    )
        .prop_map(|(group, gens, modulus, kind, params)| CaseSpec {
            group,
            gens,
            modulus,
            kind,
            params,
        })
}

/// Largest `M` with `M^n ≤ 2^20`.
pub fn max_modulus(n: usize) -> usize {
    let mut m = 1usize;
    while (m + 1).checked_pow(n as u32).is_some_and(|v| v <= 1 << 20) {
        m += 1;
    }
    m
}

/// `k · ⌊(x_i + y_i) / n_i⌋`, the carry cocycle of one coordinate.
fn carry(coords: &dyn Fn(usize) -> Vec<usize>, inv: &[usize], i: usize, k: usize, x: usize, y: usize) -> i64 {
    let (a, b) = (coords(x)[i], coords(y)[i]);
    (k * ((a + b) / inv[i])) as i64
}

/// A normalized cocycle built from a spec: a coboundary, a bicharacter, a
/// carry cocycle, or a sum of these. Non-abelian domains use the carry
/// cocycle of the sign character when there is one.
pub fn build_case(spec: &CaseSpec) -> Cocycle {
    let groups = case_groups();
    let g = groups[spec.group % groups.len()].1.clone();
    let gens: Vec<usize> = spec.gens.iter().map(|&x| x % g.order()).collect();
    let f = Subgroup::generated(g.clone(), &gens).unwrap();
    let n = f.order();
    // twisted cases prefer moduli divisible by the exponent of F
    let (max, exp) = (max_modulus(n), f.exponent());
    let m = if spec.kind != 0 && exp <= max {
        exp * (1 + spec.modulus % (max / exp))
    } else {
        1 + spec.modulus % max
    };
    let p = |i: usize| spec.params[i % spec.params.len()];
    let fg = f.as_group();
    let pos = |x: usize| f.position(x).unwrap();

    let mut c: Vec<usize> = (0..n).map(|i| p(i) % m).collect();
    c[f.position(g.identity()).unwrap()] = 0;
    let cob = Cocycle::coboundary(f.clone(), m, &c);

    let twist: Box<dyn Fn(usize, usize) -> i64 + '_> = match fg.abelian() {
        Some(ab) if !ab.invariants().is_empty() => {
            let inv = ab.invariants().to_vec();
            let cs: Vec<Vec<usize>> = (0..n).map(|i| ab.coords(i).to_vec()).collect();
            match spec.kind {
                1 | 3 => {
                    let r = inv.len();
                    let b: Vec<usize> = (0..r * r).map(|i| p(8 + i)).collect();
                    Box::new(move |x, y| {
                        let (a, bb) = (&cs[pos(x)], &cs[pos(y)]);
                        let mut s = 0usize;
                        for i in 0..r {
                            for j in 0..r {
                                let gg = gcd(gcd(inv[i], inv[j]), m);
                                s += b[i * r + j] % gg * (m / gg) * a[i] * bb[j];
                            }
                        }
                        (s % m) as i64
                    })
                }
                _ => {
                    let i = p(20) % inv.len();
                    let k = p(21);
                    Box::new(move |x, y| carry(&|z| cs[pos(z)].clone(), &inv, i, k, x, y))
                }
            }
        }
        _ => {
            let squares: Vec<usize> = f.members().iter().map(|&x| g.mul(x, x)).collect();
            let mut comm = squares.clone();
            for &x in f.members() {
                for &y in f.members() {
                    comm.push(g.mul(g.mul(g.inv(x), g.inv(y)), g.mul(x, y)));
                }
            }
            let h = Subgroup::generated(g.clone(), &comm).unwrap();
            let k = p(21);
            if h.order() * 2 == n {
                Box::new(move |x, y| (k * usize::from(!h.contains(x) && !h.contains(y))) as i64)
            } else {
                Box::new(|_, _| 0)
            }
        }
    };
    let twisted = Cocycle::from_fn(f.clone(), m, |x, y| twist(x, y));
    match spec.kind {
        0 => cob,
        3 => cob.add(&twisted).unwrap(),
        _ => twisted,
    }
}

/// Number of pairs `(x, y) ∈ L × L'` matched by `conv`, counted in
/// coordinates of `G × G` for `G` the cyclic product `inv`.
pub fn matched_pairs(inv: &[usize], l: &[usize], l2: &[usize], conv: &CotensorConvention) -> usize {
    let n = order_of(inv);
    let proj = |x: usize, f: u8| if f == 1 { x / n } else { x % n };
    let signed = |x: usize, s: i8| if s == 1 { x } else { neg(inv, x) };
    l.iter()
        .flat_map(|&x| l2.iter().map(move |&y| (x, y)))
        .filter(|&(x, y)| {
            add(inv, signed(proj(x, conv.s_factor), conv.s_sign), signed(proj(y, conv.k_factor), conv.k_sign)) == 0
        })
        .count()
}
