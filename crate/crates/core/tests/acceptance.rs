//! Acceptance run: one PASS/FAIL line per criterion. Exits non-zero if any
//! criterion fails.

mod common;

use std::cell::{Cell, RefCell};
use std::collections::BTreeSet;
use std::sync::Arc;
use std::time::{Duration, Instant};

use hbp_core::brpic::{brpic_table, BrPicTable, FormOutcome, OrderFlag};
use hbp_core::cocycles::{check_cocycle, coboundary_witness, Cocycle};
use hbp_core::comodalg::{
    check_freeness, class_equal, classify, cotensor, diag_algebra_in, diagonal_subgroup, twisted_group_algebra,
    BimoduleClass, CotensorConvention, Reduction,
};
use hbp_core::duality::DualPair;
use hbp_core::fusion::fuse;
use hbp_core::groups::{FiniteGroup, Subgroup};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

use common::*;

const GROUPS: [(&str, &[usize]); 4] = [("Z/2", &[2]), ("Z/3", &[3]), ("Z/4", &[4]), ("Z/2xZ/2", &[2, 2])];

struct Outcome {
    ok: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Outcome {
    Outcome {
        ok: true,
        detail: detail.into(),
    }
}

fn fail(detail: impl Into<String>) -> Outcome {
    Outcome {
        ok: false,
        detail: detail.into(),
    }
}

fn runner(cases: u32) -> TestRunner {
    let config = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    b.iter().map(|&v| a[v]).collect()
}

fn is_group_table(t: &[Vec<usize>]) -> Result<(), String> {
    let n = t.len();
    let e = (0..n)
        .find(|&e| (0..n).all(|x| t[e][x] == x && t[x][e] == x))
        .ok_or("no identity")?;
    for x in 0..n {
        if !(0..n).any(|y| t[x][y] == e && t[y][x] == e) {
            return Err(format!("{x} has no inverse"));
        }
        for y in 0..n {
            for z in 0..n {
                if t[t[x][y]][z] != t[x][t[y][z]] {
                    return Err(format!("not associative at ({x}, {y}, {z})"));
                }
            }
        }
    }
    Ok(())
}

fn unit_class(pair: &DualPair) -> BimoduleClass {
    let d = diagonal_subgroup(pair.square()).unwrap();
    BimoduleClass::new(d.clone(), Cocycle::zero(d, 1), "unit").unwrap()
}

fn classify_class(c: &hbp_core::comodalg::GradedAlgebra) -> Option<BimoduleClass> {
    match classify(c) {
        Ok(Reduction::Class(x)) => Some(x),
        _ => None,
    }
}

fn forms_summary(t: &BrPicTable) -> String {
    t.forms
        .iter()
        .map(|(form, outcome)| {
            let o = match outcome {
                FormOutcome::Collision { a, b } => format!("classes {a} and {b} collide"),
                FormOutcome::Rejected { tried } => format!("rejected after {tried} conventions"),
                FormOutcome::Selected { tried } => format!("selected at convention {tried}"),
            };
            format!("{form:?} {o}")
        })
        .collect::<Vec<_>>()
        .join("; ")
}

fn criterion_1(tables: &RefCell<Vec<(&'static str, Arc<DualPair>, BrPicTable)>>) -> Outcome {
    let mut notes = Vec::new();
    for (name, inv) in GROUPS {
        let pair = Arc::new(DualPair::new(inv).unwrap());
        let t = match brpic_table(&pair) {
            Ok(t) => t,
            Err(e) => return fail(format!("{name}: {e}")),
        };
        if let Err(e) = is_group_table(&t.product) {
            return fail(format!("{name}: product is not a group: {e}"));
        }
        let oracle = orth_by_basis_images(inv);
        let alphas: Vec<Vec<usize>> = t.elements.iter().map(|e| e.alpha.image().to_vec()).collect();
        let distinct: BTreeSet<Vec<usize>> = alphas.iter().cloned().collect();
        if distinct.len() != alphas.len() || distinct != oracle {
            return fail(format!("{name}: classes do not biject onto O(G+G^)"));
        }
        let n = t.len();
        for a in 0..n {
            for b in 0..n {
                let want = match t.order_flag {
                    OrderFlag::Left => compose(&alphas[a], &alphas[b]),
                    OrderFlag::Right => compose(&alphas[b], &alphas[a]),
                };
                if alphas[t.product[a][b]] != want {
                    return fail(format!("{name}: transported product differs at ({a}, {b})"));
                }
            }
        }
        notes.push(format!("{name} |O|={n} order={:?}", t.order_flag));
        println!("  info {name}: {}", forms_summary(&t));
        tables.borrow_mut().push((name, pair, t));
    }
    pass(notes.join(", "))
}

fn criterion_2() -> Outcome {
    let a = orth_by_bijections(&[2]).len();
    let b = orth_by_bijections(&[3]).len();
    let lib = |inv: &[usize]| hbp_core::duality::orth_group(&Arc::new(DualPair::new(inv).unwrap())).unwrap().len();
    if (a, b) == (2, 4) && (lib(&[2]), lib(&[3])) == (2, 4) {
        pass(format!("|O(Z/2)|={a}, |O(Z/3)|={b} (bijection filter and library agree)"))
    } else {
        fail(format!("oracle {a}, {b}; library {}, {}", lib(&[2]), lib(&[3])))
    }
}

fn criterion_3(tables: &[(&'static str, Arc<DualPair>, BrPicTable)]) -> Outcome {
    let mut checked = 0;
    let trivial = Arc::new(DualPair::new(&[]).unwrap());
    let trivial_table = brpic_table(&trivial).unwrap();
    let all = tables.iter().map(|(n, p, t)| (*n, p, t)).chain([("trivial", &trivial, &trivial_table)]);
    for (name, pair, t) in all {
        let conv = t.convention.cotensor;
        let unit = unit_class(pair);
        let diag = diag_algebra_in(pair.square()).unwrap();
        if !class_equal(&t.elements[0].class, &unit) {
            return fail(format!("{name}: identity class is not (diag, trivial)"));
        }
        for (i, e) in t.elements.iter().enumerate() {
            let a = e.class.algebra().unwrap();
            for (s, k, side) in [(&diag, &a, "left"), (&a, &diag, "right")] {
                let c = cotensor(s, k, &conv).unwrap();
                match classify_class(&c) {
                    Some(x) if class_equal(&x, &e.class) => checked += 1,
                    _ => return fail(format!("{name}: {side} unit law fails for element {i}")),
                }
            }
        }
    }
    pass(format!("{checked} unit products over trivial, Z/2, Z/3, Z/4, Z/2xZ/2"))
}

fn criterion_4() -> Outcome {
    let g = s3();
    let t = Subgroup::generated(g.clone(), &[2]).unwrap();
    let z = Cocycle::zero(t.clone(), 1);
    let out = fuse(&z, &z).unwrap();
    let trivial = Subgroup::trivial(g.clone());
    let ok = out.len() == 2
        && out[0].fs == t
        && out[1].fs == trivial
        && out.iter().all(|s| coboundary_witness(&s.psi_s).is_some());
    let out_e = fuse(&Cocycle::zero(trivial, 1), &z).unwrap();
    let index = g.order() / t.order();
    if ok && out_e.len() == index {
        pass(format!("S3: 2 summands (<(01)>, 1) and ({{e}}, 1); F1={{e}} gives {} = [G:F2]", out_e.len()))
    } else {
        fail(format!("got {} and {} summands", out.len(), out_e.len()))
    }
}

fn criterion_5() -> Outcome {
    let g = Arc::new(FiniteGroup::cyclic_product(&[2, 2]).unwrap());
    let f = Subgroup::whole(g.clone());
    // x = 2a + b, sigma((a,b),(c,d)) = b c
    let sigma = Cocycle::from_fn(f.clone(), 2, |x, y| ((x % 2) * (y / 2)) as i64);
    // 16^4 = 2^16 functions F -> Z/16 against sigma inside mu_16
    let lifted = sigma.with_modulus(16);
    let exhaustive = exhaustive_coboundary(&lifted);
    let snf = coboundary_witness(&sigma).is_some() || coboundary_witness(&lifted).is_some();
    let noncomm = !twisted_group_algebra(&f, &sigma).unwrap().is_commutative();
    let comm = twisted_group_algebra(&f, &Cocycle::zero(f.clone(), 1)).unwrap().is_commutative();
    if check_cocycle(&sigma) && !exhaustive && !snf && noncomm && comm {
        pass("sigma has no witness (2^16 exhaustive and SNF agree); k_sigma noncommutative, k commutative")
    } else {
        fail(format!("exhaustive={exhaustive} snf={snf} noncomm={noncomm} comm={comm}"))
    }
}

fn criterion_6(tables: &[(&'static str, Arc<DualPair>, BrPicTable)]) -> Outcome {
    let invs: [&[usize]; 3] = [&[2], &[4], &[2, 2]];
    let count = Cell::new(0);
    let strategy = (
        0usize..3,
        prop::collection::vec(0usize..256, 1..3),
        prop::collection::vec(0usize..256, 1..3),
        prop::collection::vec(0usize..8, 16),
        prop::collection::vec(0usize..8, 16),
        0usize..128,
    );
    let res = runner(20).run(&strategy, |(gi, l1, l2, c1, c2, ci)| {
        let inv = invs[gi];
        let g = FiniteGroup::cyclic_product(inv).unwrap();
        let sq = Arc::new(FiniteGroup::direct_product(&g, &g).unwrap());
        let build = |gens: &[usize], c: &[usize], twist: bool| {
            let gens: Vec<usize> = gens.iter().map(|&x| x % sq.order()).collect();
            let l = Subgroup::generated(sq.clone(), &gens).unwrap();
            let mut c: Vec<usize> = (0..l.order()).map(|i| c[i % c.len()] % 4).collect();
            c[0] = 0;
            let mut psi = Cocycle::coboundary(l.clone(), 4, &c);
            if twist {
                // a bicharacter on L from the coordinates of G x G
                let n = g.order();
                let b = Cocycle::from_fn(l.clone(), 4, |x, y| {
                    let (a, d) = (coords(inv, x / n), coords(inv, y % n));
                    (a.iter().zip(&d).map(|(p, q)| p * q).sum::<usize>() * (4 / inv[0])) as i64
                });
                psi = psi.add(&b).unwrap();
            }
            (l, psi)
        };
        let (la, pa) = build(&l1, &c1, ci % 2 == 0);
        let (lb, pb) = build(&l2, &c2, ci % 3 == 0);
        prop_assert!(check_cocycle(&pa) && check_cocycle(&pb));
        let s = twisted_group_algebra(&la, &pa).unwrap();
        let k = twisted_group_algebra(&lb, &pb).unwrap();
        for conv in [CotensorConvention::all()[ci], CotensorConvention::PIPELINE] {
            let c = cotensor(&s, &k, &conv).unwrap();
            prop_assert_eq!(c.dim(), matched_pairs(inv, la.members(), lb.members(), &conv));
        }
        count.set(count.get() + 1);
        Ok(())
    });
    if let Err(e) = res {
        return fail(format!("{e}"));
    }
    for (name, pair, t) in tables {
        let d = diag_algebra_in(pair.square()).unwrap();
        for conv in [t.convention.cotensor, CotensorConvention::PIPELINE] {
            let c = cotensor(&d, &d, &conv).unwrap();
            match classify_class(&c) {
                Some(x) if class_equal(&x, &unit_class(pair)) => {}
                _ => return fail(format!("{name}: diag cotensor diag is not the unit class under {conv:?}")),
            }
        }
    }
    pass(format!("{} randomized inputs, each under two conventions; diag cotensor diag is the unit", count.get()))
}

fn criterion_7(tables: &[(&'static str, Arc<DualPair>, BrPicTable)]) -> Outcome {
    let mut parts = Vec::new();
    let mut all = true;
    for (name, _, t) in tables {
        let conv = t.convention.cotensor;
        let algebras: Vec<_> = t.elements.iter().map(|e| e.class.algebra().unwrap()).collect();
        let mut free = 0;
        let n = t.len();
        for a in 0..n {
            for b in 0..n {
                let c = cotensor(&algebras[a], &algebras[b], &conv).unwrap();
                let f = check_freeness(&algebras[a], &algebras[b], &c);
                if f != t.free[a][b] {
                    return fail(format!("{name}: recorded freeness differs at ({a}, {b})"));
                }
                free += usize::from(f);
            }
        }
        all &= free == n * n;
        parts.push(format!("{name} {free}/{}", n * n));
    }
    let detail = format!("free products: {}", parts.join(", "));
    if all {
        pass(detail)
    } else {
        fail(detail)
    }
}

fn criterion_8() -> Outcome {
    let (cases, yes, no) = (Cell::new(0), Cell::new(0), Cell::new(0));
    let res = runner(128).run(&case_strategy(), |spec| {
        let psi = build_case(&spec);
        prop_assert!(check_cocycle(&psi));
        prop_assert!((psi.modulus() as u64).pow(psi.domain().order() as u32) <= 1 << 20);
        let w = coboundary_witness(&psi);
        let oracle = exhaustive_coboundary(&psi);
        prop_assert_eq!(w.is_some(), oracle, "{:?}", spec);
        if let Some(c) = &w {
            prop_assert_eq!(&Cocycle::coboundary(psi.domain().clone(), psi.modulus(), c), &psi);
        }
        cases.set(cases.get() + 1);
        if oracle {
            yes.set(yes.get() + 1);
        } else {
            no.set(no.get() + 1);
        }
        Ok(())
    });
    match res {
        Err(e) => fail(format!("{e}")),
        Ok(()) if cases.get() < 100 => fail(format!("only {} cases", cases.get())),
        Ok(()) => pass(format!(
            "{} cases ({} coboundaries, {} not), M^|F| <= 2^20",
            cases.get(),
            yes.get(),
            no.get()
        )),
    }
}

fn report(id: u32, title: &str, limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let mut out = f();
    let elapsed = start.elapsed();
    if let Some(limit) = limit {
        if elapsed > limit {
            out.ok = false;
            out.detail = format!("{} [over the {:?} budget]", out.detail, limit);
        }
    }
    println!(
        "criterion {id} {}: {title}: {} ({:.2}s)",
        if out.ok { "PASS" } else { "FAIL" },
        out.detail,
        elapsed.as_secs_f64()
    );
    out.ok
}

fn main() {
    let tables = RefCell::new(Vec::new());
    let mut ok = true;
    ok &= report(1, "BrPic group law", Some(Duration::from_secs(60)), || criterion_1(&tables));
    ok &= report(2, "orthogonal group counts", Some(Duration::from_secs(5)), criterion_2);
    let tables = tables.into_inner();
    ok &= report(3, "unit laws", None, || criterion_3(&tables));
    ok &= report(4, "fusion rule", Some(Duration::from_secs(1)), criterion_4);
    ok &= report(5, "cohomology detection", Some(Duration::from_secs(5)), criterion_5);
    ok &= report(6, "cotensor dimension law", None, || criterion_6(&tables));
    ok &= report(7, "freeness", None, || criterion_7(&tables));
    ok &= report(8, "solver equivalence", None, criterion_8);
    if !ok {
        std::process::exit(1);
    }
}
