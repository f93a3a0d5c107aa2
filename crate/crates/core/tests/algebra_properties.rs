//! Randomized and exhaustive checks of the TL, Hecke and IC machinery.
//!
//! The Kazhdan–Lusztig basis is compared with the classical recursion
//! `C'_s C'_u = C'_{su} + Σ μ(z, u) C'_z`, which shares nothing with the
//! generic IC solver beyond Hecke multiplication.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, OnceLock};

use proptest::prelude::*;
use tlcanon::coxeter::{Bond, CoxElt, CoxeterGroup, Side, TotalOrder};
use tlcanon::hecke_kl::{HeckeAlgebra, HeckeVec};
use tlcanon::ic_solver::{apply_bar, solve_ic, verify_ic};
use tlcanon::laurent::{LaurentPoly, Subring};
use tlcanon::tl_algebra::{TLAlgebra, TLVec};

const GRAPHS: [&str; 7] = ["A2", "A3", "I2:4", "I2:5", "I2:6", "B3", "H3"];

struct Fixture {
    tl: Arc<TLAlgebra>,
    hecke: HeckeAlgebra,
    wc: Vec<CoxElt>,
    all: Vec<CoxElt>,
}

fn fixture(name: &str) -> &'static Fixture {
    static CELLS: OnceLock<HashMap<&'static str, Fixture>> = OnceLock::new();
    let map = CELLS.get_or_init(|| {
        GRAPHS
            .iter()
            .map(|&n| {
                let tl = Arc::new(TLAlgebra::new(Arc::new(CoxeterGroup::parse(n).unwrap())));
                let wc = tl.group().enumerate_wc(None).unwrap();
                let all = tl
                    .group()
                    .enumerate(None)
                    .unwrap()
                    .into_iter()
                    .map(|(w, _)| w)
                    .collect();
                let hecke = HeckeAlgebra::new(tl.clone());
                (n, Fixture { tl, hecke, wc, all })
            })
            .collect()
    });
    &map[name]
}

fn poly_strategy() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((-3i32..=3, -4i64..=4), 0..3).prop_map(LaurentPoly::from_terms)
}

/// Random combinations as (index into an element list, coefficient).
fn combo_strategy() -> impl Strategy<Value = Vec<(usize, LaurentPoly)>> {
    prop::collection::vec((0usize..10_000, poly_strategy()), 1..4)
}

fn build(elements: &[CoxElt], combo: &[(usize, LaurentPoly)]) -> TLVec {
    combo
        .iter()
        .map(|(i, c)| (elements[i % elements.len()], c.clone()))
        .collect()
}

fn graph_strategy() -> impl Strategy<Value = &'static str> {
    prop::sample::select(GRAPHS.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tl_bar_is_an_involution(g in graph_strategy(), combo in combo_strategy()) {
        let f = fixture(g);
        let a = build(&f.wc, &combo);
        prop_assert_eq!(f.tl.tl_bar(&f.tl.tl_bar(&a)), a);
    }

    #[test]
    fn tl_bar_is_multiplicative(g in graph_strategy(), x in combo_strategy(), y in combo_strategy()) {
        let f = fixture(g);
        let (a, b) = (build(&f.wc, &x), build(&f.wc, &y));
        let tl = &f.tl;
        prop_assert_eq!(tl.tl_bar(&tl.t_mul(&a, &b)), tl.t_mul(&tl.tl_bar(&a), &tl.tl_bar(&b)));
    }

    #[test]
    fn tl_multiplication_associates(g in graph_strategy(), i in 0usize..1000, j in 0usize..1000, k in 0usize..1000) {
        let f = fixture(g);
        let pick = |n: usize| f.tl.t(f.wc[n % f.wc.len()]);
        let (a, b, c) = (pick(i), pick(j), pick(k));
        let tl = &f.tl;
        prop_assert_eq!(tl.t_mul(&a, &tl.t_mul(&b, &c)), tl.t_mul(&tl.t_mul(&a, &b), &c));
    }

    #[test]
    fn projection_is_a_homomorphism(g in graph_strategy(), x in combo_strategy(), y in combo_strategy()) {
        let f = fixture(g);
        let (a, b): (HeckeVec, HeckeVec) = (build(&f.all, &x), build(&f.all, &y));
        let h = &f.hecke;
        prop_assert_eq!(h.project(&h.h_mul(&a, &b)), f.tl.t_mul(&h.project(&a), &h.project(&b)));
    }

    #[test]
    fn hecke_bar_commutes_with_projection(g in graph_strategy(), x in combo_strategy()) {
        let f = fixture(g);
        let a: HeckeVec = build(&f.all, &x);
        let h = &f.hecke;
        prop_assert_eq!(h.h_bar(&h.h_bar(&a)), a.clone());
        prop_assert_eq!(h.project(&h.h_bar(&a)), f.tl.tl_bar(&h.project(&a)));
    }
}

#[test]
fn rank_two_sums_stay_in_the_kernel() {
    for name in ["A3", "B3", "H3", "I2:5"] {
        let f = fixture(name);
        let g = f.tl.group();
        let h = &f.hecke;
        for i in 0..g.rank() {
            for j in i + 1..g.rank() {
                if g.graph().bond(i, j) == Bond::Finite(2) {
                    continue;
                }
                let Some(parabolic) = g.rank_two_parabolic(i, j) else {
                    continue;
                };
                let Some(top) = g.rank_two_longest(i, j) else { continue };
                let sum: HeckeVec = parabolic.iter().map(|&w| (w, LaurentPoly::one())).collect();
                assert!(h.project(&sum).is_zero(), "{name}: rank-two sum not in J");
                // T_{w_ij}^{-1} is the bar of T_{w_ij}.
                let inv = h.h_bar(&HeckeVec::basis(top));
                for &x in &f.all {
                    let tx = HeckeVec::basis(x);
                    assert!(h.project(&h.h_mul(&h.h_mul(&tx, &sum), &inv)).is_zero());
                    assert!(h.project(&h.h_mul(&inv, &h.h_mul(&sum, &tx))).is_zero());
                }
            }
        }
    }
}

fn reduced_words(g: &CoxeterGroup, w: CoxElt, memo: &mut HashMap<CoxElt, Vec<Vec<usize>>>) -> Vec<Vec<usize>> {
    if let Some(ws) = memo.get(&w) {
        return ws.clone();
    }
    let out = if g.length(w) == 0 {
        vec![Vec::new()]
    } else {
        let mut out = Vec::new();
        for s in g.left_descents(w) {
            for rest in reduced_words(g, g.mul_gen(w, s, Side::Left), memo) {
                let mut word = vec![s];
                word.extend(rest);
                out.push(word);
            }
        }
        out
    };
    memo.insert(w, out.clone());
    out
}

#[test]
fn monomials_do_not_depend_on_the_reduced_word() {
    for (name, cap) in [
        ("A3", None),
        ("D4", None),
        ("B3", None),
        ("H3", None),
        ("I2:5", None),
        ("affA3", Some(7)),
    ] {
        let tl = TLAlgebra::new(Arc::new(CoxeterGroup::parse(name).unwrap()));
        let g = tl.group();
        let mut memo = HashMap::new();
        for w in g.enumerate_wc(cap).unwrap() {
            let b = tl.monomial(w).unwrap();
            for word in reduced_words(g, w, &mut memo) {
                assert_eq!(tl.monomial_of_word(&word), *b, "{name}: {word:?}");
            }
        }
    }
}

#[test]
fn d_coefficients_are_polynomials_in_q() {
    for (name, cap) in [("A3", None), ("I2:4", None), ("B3", None), ("affA3", Some(6))] {
        let tl = TLAlgebra::new(Arc::new(CoxeterGroup::parse(name).unwrap()));
        let g = tl.group();
        for (w, in_wc) in g.enumerate(cap).unwrap() {
            let d = tl.d_expand(w);
            assert!(d
                .iter()
                .all(|(x, c)| c.in_subring(Subring::ZOfQ) && !g.is_complex(x) && g.bruhat_leq(x, w)));
            assert_eq!(in_wc, d.coeff(w).is_one());
        }
    }
}

#[test]
fn solved_tables_are_bar_fixed_and_order_independent() {
    for name in GRAPHS {
        let f = fixture(name);
        let table = solve_ic(&*f.tl, &f.wc, TotalOrder::ShortLex).unwrap();
        assert!(verify_ic(&*f.tl, &table, true).passed(), "{name}");
        for elem in table.iter() {
            assert_eq!(apply_bar(&*f.tl, &elem.coeffs), elem.coeffs);
        }
    }
}

/// `C'_w` in `T`-coordinates by the classical recursion.
fn classical_kl(f: &Fixture) -> BTreeMap<CoxElt, HeckeVec> {
    let g = f.tl.group();
    let h = &f.hecke;
    let mut order = f.all.clone();
    g.sort(&mut order, TotalOrder::ShortLex);
    let e = g.identity();
    let mut out: BTreeMap<CoxElt, HeckeVec> = BTreeMap::from([(e, HeckeVec::basis(e))]);
    // Coefficient of v^-1 in h_{z,u} = v^ℓ(z) (coefficient of T_z in C'_u).
    let mu = |cu: &HeckeVec, z: CoxElt| cu.coeff(z).shift(g.length(z) as i32).coeff(-1);
    for &w in order.iter().skip(1) {
        let s = g.left_descents(w)[0];
        let u = g.mul_gen(w, s, Side::Left);
        let cs = &(&HeckeVec::basis(g.generator(s)) + &HeckeVec::basis(e)).scale(&LaurentPoly::v_pow(-1));
        let mut cw = h.h_mul(cs, &out[&u]);
        for (&z, cz) in &out {
            if z != u && g.is_descent(z, s, Side::Left) {
                let m = mu(&out[&u], z);
                if m != 0.into() {
                    cw.add_scaled(cz, &-LaurentPoly::constant(m));
                }
            }
        }
        out.insert(w, cw);
    }
    out
}

#[test]
fn kl_basis_matches_classical_recursion() {
    for name in ["A3", "B3", "H3", "I2:6"] {
        let f = fixture(name);
        let classical = classical_kl(f);
        for &w in &f.all {
            let kl = f.hecke.kl_basis(w).unwrap();
            assert_eq!(kl.coords, classical[&w], "{name}: C'_{}", f.tl.group().format(w));
            // Bar-invariant and unitriangular once rescaled to v^ℓ(x) T_x.
            assert_eq!(f.hecke.h_bar(&kl.coords), kl.coords);
            let g = f.tl.group();
            for (x, c) in kl.coords.iter() {
                let hx = c.shift(g.length(x) as i32);
                if x == w {
                    assert!(hx.is_one());
                } else {
                    assert!(hx.in_subring(Subring::VInvAMinus));
                }
            }
        }
    }
}
