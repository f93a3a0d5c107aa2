//! Coxeter groups given by a graph: element normal forms, descents, the
//! Bruhat order, complex elements and enumeration of `W` and `W_c`.
//!
//! Elements are interned in a [`CoxeterGroup`]. Identity of an element is
//! decided by its matrix in the geometric representation, computed exactly
//! over `Z[2cos(π/N)]`; the stored word is the ShortLex-least reduced word.

mod field;
pub mod graph;

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use parking_lot::RwLock;
use thiserror::Error;

use field::{lcm, RealCyclotomic};
pub use graph::{Bond, CoxeterGraph};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoxeterError {
    #[error("unknown Coxeter graph {0:?}")]
    UnknownGraph(String),
    #[error("malformed graph JSON: {0}")]
    BadGraphJson(String),
    #[error("bond ({i}, {j}) has strength {m}; strengths must be at least 2 (0 for infinity)")]
    BondTooSmall { i: i64, j: i64, m: i64 },
    #[error("node {0} is out of range")]
    NodeOutOfRange(i64),
    #[error("graphs with more than 64 nodes are not supported")]
    TooManyNodes,
    #[error("bond strengths force a number field of degree above 64 (lcm {0})")]
    FieldTooLarge(u64),
    #[error("a length cap is required: the group is not known to be finite")]
    CapRequired,
    #[error("{0} is not a generator label of this graph")]
    BadGenerator(u32),
    #[error("word {0:?} is not reduced")]
    NotReduced(Vec<u32>),
}

/// Handle to an element interned in a [`CoxeterGroup`].
///
/// Handles are only meaningful for the group that produced them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoxElt(u32);

impl CoxElt {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Linear refinements of the Bruhat order used by the triangular solvers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TotalOrder {
    /// Length, then lexicographic on canonical words.
    #[default]
    ShortLex,
    /// Length, then reverse lexicographic.
    LengthReverseLex,
}

/// Why an element is complex, one step at a time.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Complexity {
    NonComplex,
    /// The element is the longest element of a rank-two parabolic.
    RankTwo(u8, u8),
    /// `s w` is complex for this left descent `s`.
    Left(u8),
    /// `w s` is complex for this right descent `s`.
    Right(u8),
}

/// A length-additive factorization `w = x1 · w_ij · x2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexWitness {
    pub prefix: Vec<usize>,
    pub pair: (usize, usize),
    pub suffix: Vec<usize>,
}

const UNKNOWN: u32 = u32::MAX;

struct ElemData {
    word: Arc<[u8]>,
    /// Matrix of `w`, column-major, each entry `degree` integers.
    mat: Box<[i64]>,
    /// Matrix of `w^-1`.
    inv: Box<[i64]>,
    left_desc: u64,
    right_desc: u64,
    left: Vec<u32>,
    right: Vec<u32>,
    complexity: Option<Complexity>,
}

#[derive(Default)]
struct Store {
    elems: Vec<ElemData>,
    index: HashMap<Box<[i64]>, u32>,
}

/// A Coxeter system with a growing table of interned elements.
pub struct CoxeterGroup {
    graph: CoxeterGraph,
    field: RealCyclotomic,
    rank: usize,
    /// `2cos(π/m_ij)` (2 for infinite bonds) for every neighbouring pair.
    neighbours: Vec<Vec<(usize, Vec<i64>)>>,
    finite: bool,
    store: RwLock<Store>,
}

impl fmt::Debug for CoxeterGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CoxeterGroup")
            .field("graph", &self.graph.name())
            .field("rank", &self.rank)
            .field("finite", &self.finite)
            .finish()
    }
}

impl CoxeterGroup {
    pub fn new(graph: CoxeterGraph) -> Result<Self, CoxeterError> {
        let rank = graph.node_count();
        if rank > 64 {
            return Err(CoxeterError::TooManyNodes);
        }
        let n = graph
            .edges()
            .iter()
            .filter_map(|&(_, _, b)| match b {
                Bond::Finite(m) => Some(m as u64),
                Bond::Infinite => None,
            })
            .fold(3, lcm);
        let field = RealCyclotomic::new(n)?;
        let neighbours = (0..rank)
            .map(|i| {
                (0..rank)
                    .filter(|&j| j != i)
                    .filter_map(|j| match graph.bond(i, j) {
                        Bond::Finite(2) => None,
                        Bond::Finite(m) => Some((j, field.two_cos_pi_over(m as u64))),
                        Bond::Infinite => Some((j, field.int(2))),
                    })
                    .collect()
            })
            .collect();
        let mut group = Self {
            graph,
            field,
            rank,
            neighbours,
            finite: false,
            store: RwLock::new(Store::default()),
        };
        group.finite = group.gram_positive_definite();

        let d = group.field.degree();
        let mut ident = vec![0i64; rank * rank * d];
        for i in 0..rank {
            ident[(i * rank + i) * d] = 1;
        }
        let e = group.intern(ident.clone(), ident);
        debug_assert_eq!(e, CoxElt(0));
        Ok(group)
    }

    pub fn parse(spec: &str) -> Result<Self, CoxeterError> {
        Self::new(CoxeterGraph::parse(spec)?)
    }

    pub fn graph(&self) -> &CoxeterGraph {
        &self.graph
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Whether `W` is finite (positive definite bilinear form).
    pub fn is_finite(&self) -> bool {
        self.finite
    }

    /// Whether `W_c` is known to be finite without a length cap.
    pub fn has_finite_wc(&self) -> bool {
        self.finite || self.graph.is_ade()
    }

    /// Number of elements interned so far.
    pub fn interned(&self) -> usize {
        self.store.read().elems.len()
    }

    pub fn identity(&self) -> CoxElt {
        CoxElt(0)
    }

    pub fn generator(&self, s: usize) -> CoxElt {
        self.mul_gen(self.identity(), s, Side::Right)
    }

    // ---- geometric representation ----

    fn degree(&self) -> usize {
        self.field.degree()
    }

    /// Applies the reflection `s` to a root vector (`rank * degree` integers).
    fn reflect(&self, s: usize, v: &mut [i64]) {
        let d = self.degree();
        let mut new = vec![0i64; d];
        for (k, x) in v[s * d..(s + 1) * d].iter().enumerate() {
            new[k] = -x;
        }
        for (j, kappa) in &self.neighbours[s] {
            self.field.mul_add(&mut new, kappa, &v[j * d..(j + 1) * d]);
        }
        v[s * d..(s + 1) * d].copy_from_slice(&new);
    }

    /// `M <- S_s M`.
    fn left_apply(&self, s: usize, mat: &mut [i64]) {
        let col = self.rank * self.degree();
        for c in mat.chunks_mut(col) {
            self.reflect(s, c);
        }
    }

    /// `M <- M S_s`: column `t` becomes `M s(α_t) = col_t + κ_st col_s`.
    fn right_apply(&self, s: usize, mat: &mut [i64]) {
        let col = self.rank * self.degree();
        let col_s: Vec<i64> = mat[s * col..(s + 1) * col].to_vec();
        let d = self.degree();
        for (t, kappa) in &self.neighbours[s] {
            let dst = &mut mat[t * col..(t + 1) * col];
            for r in 0..self.rank {
                self.field
                    .mul_add(&mut dst[r * d..(r + 1) * d], kappa, &col_s[r * d..(r + 1) * d]);
            }
        }
        for x in &mut mat[s * col..(s + 1) * col] {
            *x = -*x;
        }
    }

    /// Sign of a root: every root has all coordinates of one sign.
    fn root_is_negative(&self, v: &[i64]) -> bool {
        let d = self.degree();
        let best = v
            .chunks(d)
            .filter(|c| c.iter().any(|&x| x != 0))
            .max_by(|a, b| {
                self.field
                    .approx(a)
                    .abs()
                    .partial_cmp(&self.field.approx(b).abs())
                    .unwrap_or(Ordering::Equal)
            })
            .expect("roots are nonzero");
        self.field.sign(best) == Ordering::Less
    }

    fn negative_columns(&self, mat: &[i64]) -> u64 {
        let col = self.rank * self.degree();
        mat.chunks(col)
            .enumerate()
            .filter(|(_, c)| self.root_is_negative(c))
            .fold(0, |acc, (s, _)| acc | (1 << s))
    }

    /// ShortLex-least reduced word: strip the least left descent repeatedly.
    fn canonical_word(&self, inv: &[i64]) -> Vec<u8> {
        let col = self.rank * self.degree();
        let mut cur = inv.to_vec();
        let mut word = Vec::new();
        'strip: loop {
            for s in 0..self.rank {
                if self.root_is_negative(&cur[s * col..(s + 1) * col]) {
                    word.push(s as u8);
                    self.right_apply(s, &mut cur);
                    continue 'strip;
                }
            }
            return word;
        }
    }

    fn intern(&self, mat: Vec<i64>, inv: Vec<i64>) -> CoxElt {
        if let Some(&id) = self.store.read().index.get(mat.as_slice()) {
            return CoxElt(id);
        }
        let word: Arc<[u8]> = self.canonical_word(&inv).into();
        let left_desc = self.negative_columns(&inv);
        let right_desc = self.negative_columns(&mat);
        let mut store = self.store.write();
        if let Some(&id) = store.index.get(mat.as_slice()) {
            return CoxElt(id);
        }
        let id = u32::try_from(store.elems.len()).expect("element table overflow");
        let mat: Box<[i64]> = mat.into();
        store.index.insert(mat.clone(), id);
        store.elems.push(ElemData {
            word,
            mat,
            inv: inv.into(),
            left_desc,
            right_desc,
            left: vec![UNKNOWN; self.rank],
            right: vec![UNKNOWN; self.rank],
            complexity: None,
        });
        CoxElt(id)
    }

    // ---- basic element operations ----

    /// Canonical form of `s w` (left) or `w s` (right).
    pub fn mul_gen(&self, w: CoxElt, s: usize, side: Side) -> CoxElt {
        assert!(s < self.rank, "generator index {s} out of range");
        let (mut mat, mut inv) = {
            let store = self.store.read();
            let e = &store.elems[w.index()];
            let cached = match side {
                Side::Left => e.left[s],
                Side::Right => e.right[s],
            };
            if cached != UNKNOWN {
                return CoxElt(cached);
            }
            (e.mat.to_vec(), e.inv.to_vec())
        };
        match side {
            Side::Left => {
                self.left_apply(s, &mut mat);
                self.right_apply(s, &mut inv);
            }
            Side::Right => {
                self.right_apply(s, &mut mat);
                self.left_apply(s, &mut inv);
            }
        }
        let out = self.intern(mat, inv);
        let mut store = self.store.write();
        fn table(e: &mut ElemData, side: Side) -> &mut Vec<u32> {
            match side {
                Side::Left => &mut e.left,
                Side::Right => &mut e.right,
            }
        }
        table(&mut store.elems[w.index()], side)[s] = out.0;
        table(&mut store.elems[out.index()], side)[s] = w.0;
        out
    }

    /// Product of a word of generator indices (not necessarily reduced).
    pub fn from_word(&self, word: &[usize]) -> CoxElt {
        word.iter()
            .fold(self.identity(), |w, &s| self.mul_gen(w, s, Side::Right))
    }

    /// Like [`from_word`](Self::from_word) but taking node labels.
    pub fn from_labels(&self, labels: &[u32]) -> Result<CoxElt, CoxeterError> {
        let word = self.labels_to_indices(labels)?;
        Ok(self.from_word(&word))
    }

    /// Element of a reduced word given by labels; errors if not reduced.
    pub fn from_reduced_labels(&self, labels: &[u32]) -> Result<CoxElt, CoxeterError> {
        let w = self.from_labels(labels)?;
        if self.length(w) != labels.len() {
            return Err(CoxeterError::NotReduced(labels.to_vec()));
        }
        Ok(w)
    }

    pub fn labels_to_indices(&self, labels: &[u32]) -> Result<Vec<usize>, CoxeterError> {
        labels
            .iter()
            .map(|&l| self.graph.index_of(l).ok_or(CoxeterError::BadGenerator(l)))
            .collect()
    }

    pub fn mul(&self, x: CoxElt, y: CoxElt) -> CoxElt {
        self.word(y)
            .iter()
            .fold(x, |w, &s| self.mul_gen(w, s as usize, Side::Right))
    }

    pub fn inverse(&self, w: CoxElt) -> CoxElt {
        self.word(w)
            .iter()
            .fold(self.identity(), |acc, &s| self.mul_gen(acc, s as usize, Side::Left))
    }

    pub fn length(&self, w: CoxElt) -> usize {
        self.store.read().elems[w.index()].word.len()
    }

    /// The canonical (ShortLex-least reduced) word, as generator indices.
    pub fn word(&self, w: CoxElt) -> Arc<[u8]> {
        self.store.read().elems[w.index()].word.clone()
    }

    pub fn word_indices(&self, w: CoxElt) -> Vec<usize> {
        self.word(w).iter().map(|&s| s as usize).collect()
    }

    /// The canonical word as node labels, the serialized form of an element.
    pub fn word_labels(&self, w: CoxElt) -> Vec<u32> {
        self.word(w).iter().map(|&s| self.graph.label(s as usize)).collect()
    }

    /// Compact text form such as `s1s3s2`, or `e`.
    pub fn format(&self, w: CoxElt) -> String {
        let labels = self.word_labels(w);
        if labels.is_empty() {
            return "e".into();
        }
        labels.iter().map(|l| format!("s{l}")).collect()
    }

    /// `(-1)^ℓ(w)`.
    pub fn sign(&self, w: CoxElt) -> i64 {
        if self.length(w).is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    pub fn left_descent_mask(&self, w: CoxElt) -> u64 {
        self.store.read().elems[w.index()].left_desc
    }

    pub fn right_descent_mask(&self, w: CoxElt) -> u64 {
        self.store.read().elems[w.index()].right_desc
    }

    /// `{s : ℓ(sw) < ℓ(w)}` in increasing order.
    pub fn left_descents(&self, w: CoxElt) -> Vec<usize> {
        mask_to_vec(self.left_descent_mask(w))
    }

    pub fn right_descents(&self, w: CoxElt) -> Vec<usize> {
        mask_to_vec(self.right_descent_mask(w))
    }

    pub fn is_descent(&self, w: CoxElt, s: usize, side: Side) -> bool {
        let mask = match side {
            Side::Left => self.left_descent_mask(w),
            Side::Right => self.right_descent_mask(w),
        };
        mask >> s & 1 == 1
    }

    pub fn compare(&self, a: CoxElt, b: CoxElt, order: TotalOrder) -> Ordering {
        if a == b {
            return Ordering::Equal;
        }
        let (wa, wb) = (self.word(a), self.word(b));
        wa.len().cmp(&wb.len()).then_with(|| match order {
            TotalOrder::ShortLex => wa.cmp(&wb),
            TotalOrder::LengthReverseLex => wb.cmp(&wa),
        })
    }

    pub fn sort(&self, elems: &mut [CoxElt], order: TotalOrder) {
        let mut keyed: Vec<(usize, Arc<[u8]>, CoxElt)> = elems
            .iter()
            .map(|&w| {
                let word = self.word(w);
                (word.len(), word, w)
            })
            .collect();
        keyed.sort_by(|a, b| {
            a.0.cmp(&b.0).then_with(|| match order {
                TotalOrder::ShortLex => a.1.cmp(&b.1),
                TotalOrder::LengthReverseLex => b.1.cmp(&a.1),
            })
        });
        for (dst, (_, _, w)) in elems.iter_mut().zip(keyed) {
            *dst = w;
        }
    }

    // ---- rank-two parabolics and complex elements ----

    /// The longest element `w_ij` of `<s_i, s_j>`, when finite.
    pub fn rank_two_longest(&self, i: usize, j: usize) -> Option<CoxElt> {
        match self.graph.bond(i, j) {
            Bond::Finite(m) if i != j => {
                let word: Vec<usize> = (0..m as usize).map(|k| if k % 2 == 0 { i } else { j }).collect();
                Some(self.from_word(&word))
            }
            _ => None,
        }
    }

    /// All elements of the finite parabolic `<s_i, s_j>`.
    pub fn rank_two_parabolic(&self, i: usize, j: usize) -> Option<Vec<CoxElt>> {
        let m = match self.graph.bond(i, j) {
            Bond::Finite(m) if i != j => m as usize,
            _ => return None,
        };
        let mut out = vec![self.identity()];
        for len in 1..=m {
            for first in [i, j] {
                let word: Vec<usize> = (0..len)
                    .map(|k| if k % 2 == 0 { first } else { i + j - first })
                    .collect();
                let w = self.from_word(&word);
                if !out.contains(&w) {
                    out.push(w);
                }
            }
        }
        Some(out)
    }

    fn is_rank_two_longest(&self, word: &[u8]) -> Option<(u8, u8)> {
        if word.len() < 3 {
            return None;
        }
        let (a, b) = (word[0], word[1]);
        if a == b
            || word
                .iter()
                .enumerate()
                .any(|(k, &x)| x != if k % 2 == 0 { a } else { b })
        {
            return None;
        }
        match self.graph.bond(a as usize, b as usize) {
            Bond::Finite(m) if m as usize == word.len() => Some((a.min(b), a.max(b))),
            _ => None,
        }
    }

    fn complexity(&self, w: CoxElt) -> Complexity {
        let (cached, word, left, right) = {
            let store = self.store.read();
            let e = &store.elems[w.index()];
            (e.complexity, e.word.clone(), e.left_desc, e.right_desc)
        };
        if let Some(c) = cached {
            return c;
        }
        // w = x1 w_ij x2 additively: either x1 = x2 = e, or peeling a left
        // descent from x1 (or a right descent from x2) keeps a witness.
        let found = if word.len() < 3 {
            Complexity::NonComplex
        } else if let Some((a, b)) = self.is_rank_two_longest(&word) {
            Complexity::RankTwo(a, b)
        } else {
            let via_left = mask_to_vec(left)
                .into_iter()
                .find(|&s| self.is_complex(self.mul_gen(w, s, Side::Left)))
                .map(|s| Complexity::Left(s as u8));
            via_left
                .or_else(|| {
                    mask_to_vec(right)
                        .into_iter()
                        .find(|&s| self.is_complex(self.mul_gen(w, s, Side::Right)))
                        .map(|s| Complexity::Right(s as u8))
                })
                .unwrap_or(Complexity::NonComplex)
        };
        self.store.write().elems[w.index()].complexity = Some(found);
        found
    }

    /// Whether `w = x1 w_ij x2` with additive lengths for some adjacent pair
    /// with a finite bond.
    pub fn is_complex(&self, w: CoxElt) -> bool {
        self.complexity(w) != Complexity::NonComplex
    }

    pub fn complex_witness(&self, w: CoxElt) -> Option<ComplexWitness> {
        let mut prefix = Vec::new();
        let mut suffix_rev = Vec::new();
        let mut cur = w;
        loop {
            match self.complexity(cur) {
                Complexity::NonComplex => return None,
                Complexity::RankTwo(a, b) => {
                    suffix_rev.reverse();
                    return Some(ComplexWitness {
                        prefix,
                        pair: (a as usize, b as usize),
                        suffix: suffix_rev,
                    });
                }
                Complexity::Left(s) => {
                    prefix.push(s as usize);
                    cur = self.mul_gen(cur, s as usize, Side::Left);
                }
                Complexity::Right(s) => {
                    suffix_rev.push(s as usize);
                    cur = self.mul_gen(cur, s as usize, Side::Right);
                }
            }
        }
    }

    // ---- Bruhat order ----

    /// Bruhat–Chevalley order, via the lifting property: with `s` a left
    /// descent of `w`, `x <= w` iff `min(x, sx) <= sw`.
    pub fn bruhat_leq(&self, x: CoxElt, w: CoxElt) -> bool {
        let (mut x, mut w) = (x, w);
        loop {
            if x == w {
                return true;
            }
            let (lx, lw) = (self.length(x), self.length(w));
            if lx >= lw {
                return false;
            }
            if lx == 0 {
                return true;
            }
            let s = self.left_descent_mask(w).trailing_zeros() as usize;
            if self.is_descent(x, s, Side::Left) {
                x = self.mul_gen(x, s, Side::Left);
            }
            w = self.mul_gen(w, s, Side::Left);
        }
    }

    /// `{x in W : x <= w}`, ShortLex-ordered: products of subwords of a
    /// reduced word of `w`.
    pub fn bruhat_interval(&self, w: CoxElt) -> Vec<CoxElt> {
        let mut seen: HashSet<CoxElt> = HashSet::from([self.identity()]);
        let mut all = vec![self.identity()];
        for &s in self.word(w).iter() {
            let extended: Vec<CoxElt> = all
                .iter()
                .map(|&x| self.mul_gen(x, s as usize, Side::Right))
                .filter(|y| seen.insert(*y))
                .collect();
            all.extend(extended);
        }
        self.sort(&mut all, TotalOrder::ShortLex);
        all
    }

    /// `{x in W_c : x <= w}`, ShortLex-ordered.
    pub fn bruhat_ideal(&self, w: CoxElt) -> Vec<CoxElt> {
        self.bruhat_interval(w)
            .into_iter()
            .filter(|&x| !self.is_complex(x))
            .collect()
    }

    // ---- enumeration ----

    fn shells(&self, cap: Option<usize>, limit: Option<usize>, keep: impl Fn(CoxElt) -> bool) -> Vec<CoxElt> {
        let mut out = vec![self.identity()];
        let mut shell = vec![self.identity()];
        let mut len = 0;
        while !shell.is_empty() && cap.is_none_or(|c| len < c) && limit.is_none_or(|l| out.len() <= l) {
            let mut seen = HashSet::new();
            let mut next = Vec::new();
            for &w in &shell {
                for s in 0..self.rank {
                    if self.is_descent(w, s, Side::Right) {
                        continue;
                    }
                    let ws = self.mul_gen(w, s, Side::Right);
                    if seen.insert(ws) && keep(ws) {
                        next.push(ws);
                    }
                }
            }
            self.sort(&mut next, TotalOrder::ShortLex);
            out.extend_from_slice(&next);
            shell = next;
            len += 1;
        }
        out
    }

    /// All elements with `ℓ(w) <= cap` (or all of a finite `W`), ordered by
    /// length then ShortLex, each flagged with membership in `W_c`.
    pub fn enumerate(&self, cap: Option<usize>) -> Result<Vec<(CoxElt, bool)>, CoxeterError> {
        if cap.is_none() && !self.finite {
            return Err(CoxeterError::CapRequired);
        }
        Ok(self
            .shells(cap, None, |_| true)
            .into_iter()
            .map(|w| (w, !self.is_complex(w)))
            .collect())
    }

    /// `W_c` (up to the cap). Prefixes of non-complex elements are
    /// non-complex, so this grows shells inside `W_c` only.
    pub fn enumerate_wc(&self, cap: Option<usize>) -> Result<Vec<CoxElt>, CoxeterError> {
        if cap.is_none() && !self.has_finite_wc() {
            return Err(CoxeterError::CapRequired);
        }
        Ok(self.shells(cap, None, |w| !self.is_complex(w)))
    }

    /// All of a finite `W`, or `None` once more than `limit` elements turn up.
    pub fn enumerate_limited(&self, limit: usize) -> Option<Vec<(CoxElt, bool)>> {
        if !self.finite {
            return None;
        }
        let all = self.shells(None, Some(limit), |_| true);
        (all.len() <= limit).then(|| all.into_iter().map(|w| (w, !self.is_complex(w))).collect())
    }

    // ---- finiteness ----

    /// Sylvester's criterion on `2B`, exactly in the field.
    fn gram_positive_definite(&self) -> bool {
        let n = self.rank;
        if n > 20 {
            return false;
        }
        let d = self.degree();
        let entry = |i: usize, j: usize| -> Vec<i64> {
            if i == j {
                return self.field.int(2);
            }
            match self.neighbours[i].iter().find(|(k, _)| *k == j) {
                Some((_, kappa)) => kappa.iter().map(|x| -x).collect(),
                None => vec![0; d],
            }
        };
        for k in 1..=n {
            // Laplace expansion along rows, memoized on the remaining columns.
            let mut memo: HashMap<u64, Vec<i64>> = HashMap::new();
            memo.insert(0, self.field.one());
            for mask in 1u64..(1 << k) {
                let row = k - mask.count_ones() as usize;
                let mut acc = vec![0i64; d];
                for (pos, c) in mask_to_vec(mask).into_iter().enumerate() {
                    let a = entry(row, c);
                    if a.iter().all(|&x| x == 0) {
                        continue;
                    }
                    let minor = &memo[&(mask & !(1 << c))];
                    let mut term = vec![0i64; d];
                    self.field.mul_add(&mut term, &a, minor);
                    for (dst, t) in acc.iter_mut().zip(term) {
                        *dst += if pos % 2 == 0 { t } else { -t };
                    }
                }
                memo.insert(mask, acc);
            }
            if self.field.sign(&memo[&((1u64 << k) - 1)]) != Ordering::Greater {
                return false;
            }
        }
        true
    }
}

fn mask_to_vec(mut mask: u64) -> Vec<usize> {
    let mut out = Vec::new();
    while mask != 0 {
        let s = mask.trailing_zeros() as usize;
        out.push(s);
        mask &= mask - 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group(name: &str) -> CoxeterGroup {
        CoxeterGroup::parse(name).unwrap()
    }

    #[test]
    fn mult_gen_examples() {
        let g = group("A2");
        let e = g.identity();
        let s = g.mul_gen(e, 0, Side::Left);
        assert_eq!(g.word_indices(s), vec![0]);
        let st = g.from_word(&[0, 1]);
        assert_eq!(g.mul_gen(st, 0, Side::Left), g.generator(1));
        let ts = g.from_word(&[1, 0]);
        let tst = g.mul_gen(ts, 1, Side::Right);
        assert_eq!(g.word_indices(tst), vec![0, 1, 0]);
        assert_eq!(tst, g.from_word(&[0, 1, 0]));
    }

    #[test]
    fn descent_examples() {
        let g = group("A2");
        assert!(g.left_descents(g.identity()).is_empty());
        assert_eq!(g.left_descents(g.from_word(&[0, 1, 0])), vec![0, 1]);
        assert_eq!(g.left_descents(g.from_word(&[0, 1])), vec![0]);
        assert_eq!(g.right_descents(g.from_word(&[0, 1])), vec![1]);
    }

    #[test]
    fn bruhat_examples() {
        let g = group("A2");
        let st = g.from_word(&[0, 1]);
        let sts = g.from_word(&[0, 1, 0]);
        assert!(g.bruhat_leq(g.identity(), sts));
        assert!(g.bruhat_leq(st, sts));
        assert!(!g.bruhat_leq(sts, st));
        assert!(!g.bruhat_leq(st, g.from_word(&[1, 0])));
    }

    #[test]
    fn complex_examples() {
        let a2 = group("A2");
        assert!(a2.is_complex(a2.from_word(&[0, 1, 0])));
        let i24 = group("I2:4");
        assert!(!i24.is_complex(i24.from_word(&[0, 1, 0])));
        assert!(i24.is_complex(i24.from_word(&[0, 1, 0, 1])));
        let aff = group("affA3");
        let w = aff.from_labels(&[1, 3, 2, 4, 1, 3]).unwrap();
        assert_eq!(aff.length(w), 6);
        assert!(!aff.is_complex(w));
    }

    #[test]
    fn infinite_bonds_never_complex() {
        let g = group("affA1");
        assert!(!g.is_finite());
        let w = g.from_word(&[0, 1, 0, 1, 0, 1, 0]);
        assert_eq!(g.length(w), 7);
        assert!(!g.is_complex(w));
    }

    #[test]
    fn witness_is_additive_factorization() {
        let g = group("A3");
        let w = g.from_word(&[2, 0, 1, 0]);
        let wit = g.complex_witness(w).unwrap();
        let mut word = wit.prefix.clone();
        let wij = g.rank_two_longest(wit.pair.0, wit.pair.1).unwrap();
        word.extend(g.word_indices(wij));
        word.extend(&wit.suffix);
        assert_eq!(word.len(), g.length(w));
        assert_eq!(g.from_word(&word), w);
    }

    #[test]
    fn enumerate_examples() {
        let a2 = group("A2").enumerate(None).unwrap();
        assert_eq!(a2.len(), 6);
        assert_eq!(a2.iter().filter(|(_, c)| *c).count(), 5);
        let i24 = group("I2:4").enumerate(None).unwrap();
        assert_eq!((i24.len(), i24.iter().filter(|(_, c)| *c).count()), (8, 7));
        let a3 = group("A3").enumerate(None).unwrap();
        assert_eq!((a3.len(), a3.iter().filter(|(_, c)| *c).count()), (24, 14));
    }

    #[test]
    fn enumeration_order_is_shortlex() {
        let g = group("A2");
        let words: Vec<Vec<usize>> = g
            .enumerate(None)
            .unwrap()
            .iter()
            .map(|(w, _)| g.word_indices(*w))
            .collect();
        assert_eq!(
            words,
            vec![vec![], vec![0], vec![1], vec![0, 1], vec![1, 0], vec![0, 1, 0]]
        );
    }

    #[test]
    fn cap_required_for_infinite() {
        let g = group("affA3");
        assert_eq!(g.enumerate(None).unwrap_err(), CoxeterError::CapRequired);
        assert_eq!(g.enumerate_wc(None).unwrap_err(), CoxeterError::CapRequired);
        assert!(g.enumerate(Some(3)).is_ok());
    }

    #[test]
    fn finiteness() {
        for name in ["A4", "B3", "D4", "E6", "E8", "F4", "H3", "H4", "I2:7", "G2"] {
            assert!(group(name).is_finite(), "{name}");
        }
        for name in ["affA3", "affA1", "E9"] {
            assert!(!group(name).is_finite(), "{name}");
        }
        assert!(group("E9").has_finite_wc());
    }

    #[test]
    fn ideal_examples() {
        let g = group("A2");
        assert_eq!(g.bruhat_ideal(g.identity()), vec![g.identity()]);
        let st = g.from_word(&[0, 1]);
        let ideal: Vec<String> = g.bruhat_ideal(st).iter().map(|&x| g.format(x)).collect();
        assert_eq!(ideal, ["e", "s1", "s2", "s1s2"]);
        let i24 = group("I2:4");
        let sts = i24.from_word(&[0, 1, 0]);
        let ideal: Vec<String> = i24.bruhat_ideal(sts).iter().map(|&x| i24.format(x)).collect();
        assert_eq!(ideal, ["e", "s1", "s2", "s1s2", "s2s1", "s1s2s1"]);
    }

    #[test]
    fn infinite_ideal_is_finite() {
        let g = group("affA3");
        let w = g.from_labels(&[1, 3, 2, 4, 1, 3]).unwrap();
        let ideal = g.bruhat_ideal(w);
        assert!(ideal.iter().all(|&x| g.bruhat_leq(x, w) && !g.is_complex(x)));
        assert_eq!(*ideal.last().unwrap(), w);
    }

    #[test]
    fn labels_round_trip_type_e() {
        let g = group("E6");
        let w = g.from_labels(&[0, 4, 1]).unwrap();
        assert_eq!(g.word_labels(w), vec![0, 1, 4]);
        assert_eq!(g.length(w), 3);
        let w = g.from_labels(&[0, 3, 2]).unwrap();
        assert_eq!(g.word_labels(w), vec![0, 3, 2]);
        assert!(g.from_labels(&[9]).is_err());
        assert!(g.from_reduced_labels(&[1, 1]).is_err());
    }
}
