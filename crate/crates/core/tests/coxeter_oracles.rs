//! Cross-checks of the exact group machinery against a floating point model.
//!
//! The oracle enumerates `W` as real matrices by breadth-first search, so
//! lengths are graph distances. Complexity is decided by pushing every reduced
//! word through an automaton tracking the longest alternating suffix.

use std::collections::{HashMap, HashSet};

use proptest::prelude::*;
use tlcanon::coxeter::{Bond, CoxeterGroup, Side};

struct FloatModel {
    rank: usize,
    bonds: Vec<Vec<Bond>>,
    /// Generator matrices, row-major.
    gens: Vec<Vec<f64>>,
}

impl FloatModel {
    fn new(g: &CoxeterGroup) -> Self {
        let graph = g.graph();
        let n = graph.node_count();
        let bonds: Vec<Vec<Bond>> = (0..n).map(|i| (0..n).map(|j| graph.bond(i, j)).collect()).collect();
        let b = |i: usize, j: usize| -> f64 {
            if i == j {
                return 1.0;
            }
            match bonds[i][j] {
                Bond::Finite(m) => -(std::f64::consts::PI / m as f64).cos(),
                Bond::Infinite => -1.0,
            }
        };
        // s_i(v) = v - 2 B(α_i, v) α_i
        let gens = (0..n)
            .map(|i| {
                let mut m = vec![0.0; n * n];
                for c in 0..n {
                    m[c * n + c] = 1.0;
                    m[i * n + c] -= 2.0 * b(i, c);
                }
                m
            })
            .collect();
        Self { rank: n, bonds, gens }
    }

    fn mul(&self, a: &[f64], s: usize) -> Vec<f64> {
        let n = self.rank;
        let g = &self.gens[s];
        let mut out = vec![0.0; n * n];
        for r in 0..n {
            for c in 0..n {
                out[r * n + c] = (0..n).map(|k| a[r * n + k] * g[k * n + c]).sum();
            }
        }
        out
    }

    fn key(m: &[f64]) -> Vec<i64> {
        m.iter().map(|x| (x * 1e6).round() as i64).collect()
    }

    /// Elements up to length `cap` as (matrix, length, reduced-word prefix
    /// via parent pointer).
    fn enumerate(&self, cap: usize) -> Vec<(Vec<f64>, usize, Vec<usize>)> {
        let n = self.rank;
        let mut ident = vec![0.0; n * n];
        for i in 0..n {
            ident[i * n + i] = 1.0;
        }
        let mut seen = HashSet::from([Self::key(&ident)]);
        let mut out = vec![(ident, 0, vec![])];
        let mut start = 0;
        for len in 1..=cap {
            let end = out.len();
            for i in start..end {
                for s in 0..n {
                    let m = self.mul(&out[i].0, s);
                    if seen.insert(Self::key(&m)) {
                        let mut w = out[i].2.clone();
                        w.push(s);
                        out.push((m, len, w));
                    }
                }
            }
            if out.len() == end {
                break;
            }
            start = end;
        }
        out
    }

    /// For every element (by index in `enumerate`), whether some reduced
    /// word contains an alternating factor of length `m_ij`.
    fn complex_flags(&self, elems: &[(Vec<f64>, usize, Vec<usize>)]) -> Vec<bool> {
        #[derive(Clone, Copy, PartialEq, Eq, Hash)]
        enum State {
            Found,
            Run { last: usize, prev: usize, len: u32 },
            Single(usize),
            Empty,
        }
        let index: HashMap<Vec<i64>, usize> = elems.iter().enumerate().map(|(i, e)| (Self::key(&e.0), i)).collect();
        let mut states: Vec<HashSet<State>> = vec![HashSet::new(); elems.len()];
        states[0].insert(State::Empty);
        let limit = |a: usize, b: usize| match self.bonds[a][b] {
            Bond::Finite(m) => m,
            Bond::Infinite => u32::MAX,
        };
        for i in 0..elems.len() {
            let current: Vec<State> = states[i].iter().copied().collect();
            for s in 0..self.rank {
                let m = self.mul(&elems[i].0, s);
                let Some(&j) = index.get(&Self::key(&m)) else { continue };
                if elems[j].1 != elems[i].1 + 1 {
                    continue;
                }
                for &st in &current {
                    let next = match st {
                        State::Found => State::Found,
                        State::Empty => State::Single(s),
                        State::Single(a) => State::Run {
                            last: s,
                            prev: a,
                            len: 2,
                        },
                        State::Run { last, prev, len } => {
                            if s == prev {
                                State::Run {
                                    last: s,
                                    prev: last,
                                    len: len + 1,
                                }
                            } else {
                                State::Run {
                                    last: s,
                                    prev: last,
                                    len: 2,
                                }
                            }
                        }
                    };
                    let next = match next {
                        State::Run { last, prev, len } if len >= 3 && len == limit(last, prev) => State::Found,
                        other => other,
                    };
                    states[j].insert(next);
                }
            }
        }
        states.iter().map(|s| s.contains(&State::Found)).collect()
    }
}

fn compare_with_oracle(name: &str, cap: usize) -> (usize, usize) {
    let g = CoxeterGroup::parse(name).unwrap();
    let model = FloatModel::new(&g);
    let elems = model.enumerate(cap);
    let flags = model.complex_flags(&elems);
    let mut seen = HashSet::new();
    for ((_, len, word), complex) in elems.iter().zip(&flags) {
        let w = g.from_word(word);
        assert_eq!(g.length(w), *len, "{name}: length of {word:?}");
        assert_eq!(g.is_complex(w), *complex, "{name}: complexity of {word:?}");
        assert!(seen.insert(w), "{name}: {word:?} collides");
    }
    (elems.len(), flags.iter().filter(|c| !**c).count())
}

#[test]
fn type_a_group_and_wc_orders() {
    let catalan = [2, 5, 14, 42, 132];
    let factorial = [2, 6, 24, 120, 720];
    for n in 1..=5 {
        let (order, wc) = compare_with_oracle(&format!("A{n}"), 64);
        assert_eq!(order, factorial[n - 1]);
        assert_eq!(wc, catalan[n - 1]);
        let g = CoxeterGroup::parse(&format!("A{n}")).unwrap();
        assert_eq!(g.enumerate_wc(None).unwrap().len(), catalan[n - 1]);
    }
}

#[test]
fn finite_groups_match_float_model() {
    for (name, order) in [
        ("B3", 48),
        ("D4", 192),
        ("H3", 120),
        ("I2:4", 8),
        ("I2:5", 10),
        ("I2:7", 14),
        ("G2", 12),
        ("F4", 1152),
        ("D5", 1920),
    ] {
        let (n, wc) = compare_with_oracle(name, 200);
        assert_eq!(n, order, "{name}");
        let g = CoxeterGroup::parse(name).unwrap();
        assert_eq!(g.enumerate_wc(None).unwrap().len(), wc, "{name}");
        assert_eq!(g.enumerate(None).unwrap().len(), order, "{name}");
    }
}

#[test]
fn e6_matches_float_model() {
    let (n, wc) = compare_with_oracle("E6", 100);
    assert_eq!(n, 51840);
    let g = CoxeterGroup::parse("E6").unwrap();
    assert_eq!(g.enumerate_wc(None).unwrap().len(), wc);
}

#[test]
fn affine_prefix_matches_float_model() {
    compare_with_oracle("affA3", 7);
    compare_with_oracle("affA2", 8);
}

#[test]
fn hyperbolic_prefix_matches_float_model() {
    let json = r#"{"name":"tri","nodes":3,"labels":[1,2,3],"edges":[[1,2,4],[2,3,5],[1,3,0]]}"#;
    let g = CoxeterGroup::parse(json).unwrap();
    assert!(!g.is_finite());
    compare_with_oracle(json, 6);
}

fn word_strategy(rank: usize, max: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0..rank, 0..max)
}

proptest! {
    #[test]
    fn left_right_multiplication_associate(word in word_strategy(4, 12), s in 0..4usize, t in 0..4usize) {
        let g = CoxeterGroup::parse("B4").unwrap();
        let w = g.from_word(&word);
        let a = g.mul_gen(g.mul_gen(w, s, Side::Left), t, Side::Right);
        let b = g.mul_gen(g.mul_gen(w, t, Side::Right), s, Side::Left);
        prop_assert_eq!(a, b);
    }

    #[test]
    fn descents_change_length(word in word_strategy(4, 14)) {
        let g = CoxeterGroup::parse("affA3").unwrap();
        let w = g.from_word(&word);
        for s in 0..4 {
            for side in [Side::Left, Side::Right] {
                let ws = g.mul_gen(w, s, side);
                let down = g.length(ws) + 1 == g.length(w);
                prop_assert_eq!(down, g.is_descent(w, s, side));
                prop_assert_eq!(g.length(ws).abs_diff(g.length(w)), 1);
            }
        }
    }

    #[test]
    fn canonical_word_is_reduced_and_least(word in word_strategy(3, 10)) {
        let g = CoxeterGroup::parse("H3").unwrap();
        let w = g.from_word(&word);
        let canon = g.word_indices(w);
        prop_assert_eq!(g.from_word(&canon), w);
        // Any reduced word of w is lexicographically no smaller.
        let mut alt = Vec::new();
        let mut cur = w;
        while g.length(cur) > 0 {
            let s = *g.right_descents(cur).last().unwrap();
            alt.push(s);
            cur = g.mul_gen(cur, s, Side::Right);
        }
        alt.reverse();
        prop_assert_eq!(g.from_word(&alt), w);
        prop_assert!(canon <= alt);
    }

    #[test]
    fn bruhat_matches_subword_property(a in word_strategy(3, 6), b in word_strategy(3, 8)) {
        let g = CoxeterGroup::parse("B3").unwrap();
        let (x, w) = (g.from_word(&a), g.from_word(&b));
        let below = g.bruhat_interval(w);
        prop_assert_eq!(below.contains(&x), g.bruhat_leq(x, w));
    }

    #[test]
    fn wc_is_closed_under_reduced_prefixes(word in word_strategy(4, 12)) {
        let g = CoxeterGroup::parse("D4").unwrap();
        let w = g.from_word(&word);
        if !g.is_complex(w) {
            for s in g.right_descents(w) {
                prop_assert!(!g.is_complex(g.mul_gen(w, s, Side::Right)));
            }
            for s in g.left_descents(w) {
                prop_assert!(!g.is_complex(g.mul_gen(w, s, Side::Left)));
            }
        }
    }
}
