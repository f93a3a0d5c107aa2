//! The generalized Temperley–Lieb algebra in its `t`-basis, indexed by the
//! non-complex elements `W_c`.
//!
//! Products that land on a complex element are rewritten immediately through
//! [`TLAlgebra::d_expand`], so every stored vector is supported on `W_c`.

use std::collections::{BTreeMap, HashMap};
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use parking_lot::Mutex;
use serde_json::{json, Value};
use thiserror::Error;

use crate::coxeter::{CoxElt, CoxeterGroup, Side, TotalOrder};
use crate::ic_solver::{BarRow, IcContext, IcTable};
use crate::laurent::{LaurentPoly, Subring};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TlError {
    #[error("{0} is complex and does not index a basis element")]
    ComplexElement(String),
    #[error("element list is not closed under the Bruhat ideal: {missing} lies below {above}")]
    NotIdealClosed { missing: String, above: String },
    #[error("basis table has no entry for {0}")]
    MissingCoverage(String),
    #[error("malformed vector JSON: {0}")]
    BadJson(String),
}

/// A finitely supported linear combination of group elements.
///
/// Used both for the `t`-basis of TL and the `T`-basis of the Hecke
/// algebra. Coefficients are never zero.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LinComb {
    terms: BTreeMap<CoxElt, LaurentPoly>,
}

pub type TLVec = LinComb;

impl LinComb {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(w: CoxElt) -> Self {
        Self::term(w, LaurentPoly::one())
    }

    pub fn term(w: CoxElt, c: LaurentPoly) -> Self {
        let mut out = Self::zero();
        out.add_term(w, &c);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn get(&self, w: CoxElt) -> Option<&LaurentPoly> {
        self.terms.get(&w)
    }

    pub fn coeff(&self, w: CoxElt) -> LaurentPoly {
        self.terms.get(&w).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (CoxElt, &LaurentPoly)> + '_ {
        self.terms.iter().map(|(w, c)| (*w, c))
    }

    pub fn support(&self) -> impl Iterator<Item = CoxElt> + '_ {
        self.terms.keys().copied()
    }

    pub fn add_term(&mut self, w: CoxElt, c: &LaurentPoly) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(cur) => {
                *cur += c;
                if cur.is_zero() {
                    self.terms.remove(&w);
                }
            }
            None => {
                self.terms.insert(w, c.clone());
            }
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &LinComb, c: &LaurentPoly) {
        if c.is_zero() {
            return;
        }
        for (w, a) in other.iter() {
            if c.is_one() {
                self.add_term(w, a);
            } else {
                self.add_term(w, &(a * c));
            }
        }
    }

    pub fn scale(&self, c: &LaurentPoly) -> Self {
        let mut out = Self::zero();
        out.add_scaled(self, c);
        out
    }

    /// Coefficientwise map; zero results are dropped.
    pub fn map_coeffs(&self, mut f: impl FnMut(CoxElt, &LaurentPoly) -> LaurentPoly) -> Self {
        let mut out = Self::zero();
        for (w, c) in self.iter() {
            out.add_term(w, &f(w, c));
        }
        out
    }
}

impl FromIterator<(CoxElt, LaurentPoly)> for LinComb {
    fn from_iter<I: IntoIterator<Item = (CoxElt, LaurentPoly)>>(iter: I) -> Self {
        let mut out = Self::zero();
        for (w, c) in iter {
            out.add_term(w, &c);
        }
        out
    }
}

impl Add for &LinComb {
    type Output = LinComb;
    fn add(self, rhs: &LinComb) -> LinComb {
        let mut out = self.clone();
        out.add_scaled(rhs, &LaurentPoly::one());
        out
    }
}

impl Sub for &LinComb {
    type Output = LinComb;
    fn sub(self, rhs: &LinComb) -> LinComb {
        let mut out = self.clone();
        out.add_scaled(rhs, &LaurentPoly::constant(-1));
        out
    }
}

impl Neg for &LinComb {
    type Output = LinComb;
    fn neg(self) -> LinComb {
        self.scale(&LaurentPoly::constant(-1))
    }
}

/// Which basis of TL to re-expand products in.
#[derive(Clone, Copy)]
pub enum Basis<'a> {
    Monomial,
    Ic(&'a IcTable<CoxElt>),
}

/// Change of basis between `m'_w = v^-ℓ(w) t_w` and the monomials.
#[derive(Debug, Clone)]
pub struct TransitionTables {
    /// The index set, ShortLex-ordered.
    pub elements: Vec<CoxElt>,
    /// `(x, w) -> P̃_{x,w}`: coefficient of `m'_x` in `b_w`.
    pub p_tilde: BTreeMap<(CoxElt, CoxElt), LaurentPoly>,
    /// `(x, w) -> Q̃_{x,w}`, signed so that
    /// `m'_w = ε_w Σ_x ε_x Q̃_{x,w} b_x`.
    pub q_tilde: BTreeMap<(CoxElt, CoxElt), LaurentPoly>,
}

impl TransitionTables {
    pub fn q(&self, x: CoxElt, w: CoxElt) -> LaurentPoly {
        self.q_tilde.get(&(x, w)).cloned().unwrap_or_default()
    }

    pub fn p(&self, x: CoxElt, w: CoxElt) -> LaurentPoly {
        self.p_tilde.get(&(x, w)).cloned().unwrap_or_default()
    }

    /// Pairs where `Q̃` is not unitriangular with off-diagonal entries in
    /// `v^-1 Z[v^-1]`.
    pub fn q_violations(&self) -> Vec<(CoxElt, CoxElt)> {
        let mut bad = Vec::new();
        for &w in &self.elements {
            if !self.q(w, w).is_one() {
                bad.push((w, w));
            }
        }
        for (&(x, w), c) in &self.q_tilde {
            if x != w && !c.in_subring(Subring::VInvAMinus) {
                bad.push((x, w));
            }
        }
        bad
    }
}

/// `TL(X)` for a fixed group, with memo tables shared by all operations.
pub struct TLAlgebra {
    group: Arc<CoxeterGroup>,
    d_memo: Mutex<HashMap<CoxElt, Arc<TLVec>>>,
    bar_memo: Mutex<HashMap<CoxElt, Arc<TLVec>>>,
    bar_row_memo: Mutex<HashMap<CoxElt, BarRow<CoxElt>>>,
    mono_memo: Mutex<HashMap<CoxElt, Arc<TLVec>>>,
}

fn q() -> LaurentPoly {
    LaurentPoly::q()
}

fn q_minus_one() -> LaurentPoly {
    LaurentPoly::from_terms([(0, -1), (2, 1)])
}

impl TLAlgebra {
    pub fn new(group: Arc<CoxeterGroup>) -> Self {
        Self {
            group,
            d_memo: Mutex::default(),
            bar_memo: Mutex::default(),
            bar_row_memo: Mutex::default(),
            mono_memo: Mutex::default(),
        }
    }

    pub fn group(&self) -> &Arc<CoxeterGroup> {
        &self.group
    }

    /// The image of `T_w`: `t_w` itself when `w ∈ W_c`, else its expansion.
    pub fn t(&self, w: CoxElt) -> TLVec {
        if self.group.is_complex(w) {
            (*self.d_expand(w)).clone()
        } else {
            TLVec::basis(w)
        }
    }

    /// `t_s t_x` or `t_x t_s` for `x ∈ W_c`.
    fn basis_mul_gen(&self, x: CoxElt, s: usize, side: Side, coeff: &LaurentPoly, out: &mut TLVec) {
        let sx = self.group.mul_gen(x, s, side);
        if self.group.is_descent(x, s, side) {
            out.add_term(sx, &(coeff * &q()));
            out.add_term(x, &(coeff * &q_minus_one()));
        } else if self.group.is_complex(sx) {
            out.add_scaled(&self.d_expand(sx), coeff);
        } else {
            out.add_term(sx, coeff);
        }
    }

    /// `t_s · vec` (left) or `vec · t_s` (right).
    pub fn t_mul_gen(&self, s: usize, vec: &TLVec, side: Side) -> TLVec {
        let mut out = TLVec::zero();
        for (x, c) in vec.iter() {
            self.basis_mul_gen(x, s, side, c, &mut out);
        }
        out
    }

    /// `vec · t_{s_1} ··· t_{s_k}`.
    pub fn t_mul_word_right(&self, vec: &TLVec, word: &[usize]) -> TLVec {
        word.iter()
            .fold(vec.clone(), |acc, &s| self.t_mul_gen(s, &acc, Side::Right))
    }

    /// `t_{s_1} ··· t_{s_k} · vec`.
    pub fn t_mul_word_left(&self, word: &[usize], vec: &TLVec) -> TLVec {
        word.iter()
            .rev()
            .fold(vec.clone(), |acc, &s| self.t_mul_gen(s, &acc, Side::Left))
    }

    /// Products `a · t_y` for every `y` in `ys`, sharing work along
    /// canonical-word prefixes (prefixes of non-complex words stay in `W_c`).
    pub fn right_mul_basis(&self, a: &TLVec, ys: impl IntoIterator<Item = CoxElt>) -> HashMap<CoxElt, TLVec> {
        let mut done: HashMap<CoxElt, TLVec> = HashMap::from([(self.group.identity(), a.clone())]);
        let mut wanted: Vec<CoxElt> = ys.into_iter().collect();
        self.group.sort(&mut wanted, TotalOrder::ShortLex);
        for y in wanted {
            self.right_mul_into(y, &mut done);
        }
        done
    }

    fn right_mul_into(&self, y: CoxElt, done: &mut HashMap<CoxElt, TLVec>) {
        if done.contains_key(&y) {
            return;
        }
        let word = self.group.word(y);
        let s = *word.last().expect("identity is always present") as usize;
        let prefix = self.group.mul_gen(y, s, Side::Right);
        self.right_mul_into(prefix, done);
        let next = self.t_mul_gen(s, &done[&prefix], Side::Right);
        done.insert(y, next);
    }

    pub fn t_mul(&self, a: &TLVec, b: &TLVec) -> TLVec {
        let products = self.right_mul_basis(a, b.support());
        let mut out = TLVec::zero();
        for (y, c) in b.iter() {
            out.add_scaled(&products[&y], c);
        }
        out
    }

    /// How far `v^-ℓ(w) t_w` is from the lattice spanned over `Z[v^-1]` by
    /// the `m'_x`: the largest `v`-degree among its `m'` coefficients. It lies
    /// in the lattice exactly when this is at most 0.
    pub fn lattice_excess(&self, w: CoxElt) -> i32 {
        let lw = self.group.length(w) as i32;
        self.d_expand(w)
            .iter()
            .filter_map(|(x, c)| c.max_degree().map(|d| d + self.group.length(x) as i32 - lw))
            .max()
            .unwrap_or(i32::MIN)
    }

    /// Expansion of the image of `T_w` over `{t_x : x ∈ W_c, x <= w}`.
    ///
    /// Peels the first letter of the canonical word; when the rest is
    /// non-complex the rank-two relation is applied to a factorization
    /// `w = x1 w_ij x2`.
    pub fn d_expand(&self, w: CoxElt) -> Arc<TLVec> {
        if !self.group.is_complex(w) {
            return Arc::new(TLVec::basis(w));
        }
        if let Some(hit) = self.d_memo.lock().get(&w) {
            return hit.clone();
        }
        let s = self.group.word(w)[0] as usize;
        let u = self.group.mul_gen(w, s, Side::Left);
        let out = if self.group.is_complex(u) {
            self.t_mul_gen(s, &self.d_expand(u), Side::Left)
        } else {
            let wit = self.group.complex_witness(w).expect("complex element has a witness");
            let (i, j) = wit.pair;
            let top = self.group.rank_two_longest(i, j).expect("finite bond");
            let mut sum = TLVec::zero();
            for y in self.group.rank_two_parabolic(i, j).expect("finite bond") {
                if y != top {
                    sum.add_term(y, &LaurentPoly::constant(-1));
                }
            }
            let left = self.t_mul_word_left(&wit.prefix, &sum);
            self.t_mul_word_right(&left, &wit.suffix)
        };
        let out = Arc::new(out);
        self.d_memo.lock().insert(w, out.clone());
        out
    }

    /// `bar(t_w) = bar(t_s) bar(t_u)` for `w = s u`, with
    /// `bar(t_s) = q^-1 t_s + (q^-1 - 1) t_e`.
    pub fn bar_basis(&self, w: CoxElt) -> Arc<TLVec> {
        if w == self.group.identity() {
            return Arc::new(TLVec::basis(w));
        }
        if let Some(hit) = self.bar_memo.lock().get(&w) {
            return hit.clone();
        }
        let s = self.group.word(w)[0] as usize;
        let u = self.group.mul_gen(w, s, Side::Left);
        let bar_u = if self.group.is_complex(u) {
            self.tl_bar(&self.d_expand(u))
        } else {
            (*self.bar_basis(u)).clone()
        };
        let mut out = self.t_mul_gen(s, &bar_u, Side::Left).scale(&LaurentPoly::v_pow(-2));
        out.add_scaled(&bar_u, &LaurentPoly::from_terms([(-2, 1), (0, -1)]));
        let out = Arc::new(out);
        self.bar_memo.lock().insert(w, out.clone());
        out
    }

    /// The bar involution: semilinear, `t_w -> t_{w^-1}^-1`.
    pub fn tl_bar(&self, vec: &TLVec) -> TLVec {
        let mut out = TLVec::zero();
        for (x, c) in vec.iter() {
            out.add_scaled(&self.bar_basis(x), &c.bar());
        }
        out
    }

    /// `bar(m'_w)` in `m'` coordinates.
    pub fn bar_row(&self, w: CoxElt) -> BarRow<CoxElt> {
        if let Some(hit) = self.bar_row_memo.lock().get(&w) {
            return hit.clone();
        }
        let lw = self.group.length(w) as i32;
        let row: Vec<(CoxElt, LaurentPoly)> = self
            .bar_basis(w)
            .iter()
            .map(|(x, c)| (x, c.shift(lw + self.group.length(x) as i32)))
            .collect();
        let row = Arc::new(row);
        self.bar_row_memo.lock().insert(w, row.clone());
        row
    }

    /// `t`-coordinates to `m'`-coordinates.
    pub fn to_mprime(&self, vec: &TLVec) -> LinComb {
        vec.map_coeffs(|x, c| c.shift(self.group.length(x) as i32))
    }

    pub fn from_mprime(&self, vec: &LinComb) -> TLVec {
        vec.map_coeffs(|x, c| c.shift(-(self.group.length(x) as i32)))
    }

    /// `b_s = v^-1 (t_s + t_e)`.
    pub fn b_gen(&self, s: usize) -> TLVec {
        let vinv = LaurentPoly::v_pow(-1);
        let mut out = TLVec::term(self.group.generator(s), vinv.clone());
        out.add_term(self.group.identity(), &vinv);
        out
    }

    /// `b_s · vec`.
    fn b_left(&self, s: usize, vec: &TLVec) -> TLVec {
        let mut out = self.t_mul_gen(s, vec, Side::Left);
        out.add_scaled(vec, &LaurentPoly::one());
        out.scale(&LaurentPoly::v_pow(-1))
    }

    /// `b_{s_1} ··· b_{s_k}` for any word.
    pub fn monomial_of_word(&self, word: &[usize]) -> TLVec {
        word.iter()
            .rev()
            .fold(TLVec::basis(self.group.identity()), |acc, &s| self.b_left(s, &acc))
    }

    /// `b_w` over the canonical word of `w ∈ W_c`, in `t`-coordinates.
    pub fn monomial(&self, w: CoxElt) -> Result<Arc<TLVec>, TlError> {
        if self.group.is_complex(w) {
            return Err(TlError::ComplexElement(self.group.format(w)));
        }
        Ok(self.monomial_unchecked(w))
    }

    fn monomial_unchecked(&self, w: CoxElt) -> Arc<TLVec> {
        if w == self.group.identity() {
            return Arc::new(TLVec::basis(w));
        }
        if let Some(hit) = self.mono_memo.lock().get(&w) {
            return hit.clone();
        }
        let s = self.group.word(w)[0] as usize;
        let u = self.group.mul_gen(w, s, Side::Left);
        let out = Arc::new(self.b_left(s, &self.monomial_unchecked(u)));
        self.mono_memo.lock().insert(w, out.clone());
        out
    }

    /// `P̃` from the monomials and `Q̃` from its unitriangular inverse.
    pub fn transition_tables(&self, elements: &[CoxElt]) -> Result<TransitionTables, TlError> {
        let g = &self.group;
        let mut elements = elements.to_vec();
        g.sort(&mut elements, TotalOrder::ShortLex);
        elements.dedup();
        let present: std::collections::HashSet<CoxElt> = elements.iter().copied().collect();
        let mut p_tilde = BTreeMap::new();
        let mut columns: HashMap<CoxElt, LinComb> = HashMap::new();
        let mut q_tilde = BTreeMap::new();
        for &w in &elements {
            let b = self.to_mprime(&*self.monomial(w)?);
            for (x, c) in b.iter() {
                if !present.contains(&x) {
                    return Err(TlError::NotIdealClosed {
                        missing: g.format(x),
                        above: g.format(w),
                    });
                }
                p_tilde.insert((x, w), c.clone());
            }
            // m'_w = b_w - Σ_{x<w} P̃_{x,w} m'_x, each m'_x already inverted.
            let mut col = LinComb::basis(w);
            for (x, c) in b.iter().filter(|(x, _)| *x != w) {
                col.add_scaled(&columns[&x], &-c);
            }
            let sign = g.sign(w);
            for (x, c) in col.iter() {
                let signed = if sign * g.sign(x) == 1 { c.clone() } else { -c };
                q_tilde.insert((x, w), signed);
            }
            columns.insert(w, col);
        }
        Ok(TransitionTables {
            elements,
            p_tilde,
            q_tilde,
        })
    }

    /// Coordinates of `vec` (in `t`-coordinates) in the given basis.
    pub fn expand_in_basis(&self, vec: &TLVec, basis: Basis<'_>) -> Result<BTreeMap<CoxElt, LaurentPoly>, TlError> {
        let g = &self.group;
        let mut rest = self.to_mprime(vec);
        let mut out = BTreeMap::new();
        while let Some(top) = rest.support().max_by(|a, b| g.compare(*a, *b, TotalOrder::ShortLex)) {
            let a = rest.coeff(top);
            let elem = match basis {
                Basis::Monomial => self.to_mprime(&*self.monomial(top)?),
                Basis::Ic(table) => table
                    .get(top)
                    .map(|e| e.coeffs.iter().map(|(x, c)| (*x, c.clone())).collect())
                    .ok_or_else(|| TlError::MissingCoverage(g.format(top)))?,
            };
            rest.add_scaled(&elem, &-&a);
            out.insert(top, a);
        }
        Ok(out)
    }

    /// The basis element for `w`, in `t`-coordinates.
    pub fn basis_element(&self, w: CoxElt, basis: Basis<'_>) -> Result<TLVec, TlError> {
        match basis {
            Basis::Monomial => Ok((*self.monomial(w)?).clone()),
            Basis::Ic(table) => table
                .get(w)
                .map(|e| self.from_mprime(&e.coeffs.iter().map(|(x, c)| (*x, c.clone())).collect()))
                .ok_or_else(|| TlError::MissingCoverage(self.group.format(w))),
        }
    }

    /// Coefficients of `basis_x · basis_y` in the same basis.
    pub fn structure_constants(
        &self,
        basis: Basis<'_>,
        x: CoxElt,
        y: CoxElt,
    ) -> Result<BTreeMap<CoxElt, LaurentPoly>, TlError> {
        let a = self.basis_element(x, basis)?;
        let b = self.basis_element(y, basis)?;
        self.expand_in_basis(&self.t_mul(&a, &b), basis)
    }

    /// Visits `c_x · c_y`, in IC coordinates, for all `x, y` in `elements`
    /// with `ℓ(x) + ℓ(y) <= cap`.
    ///
    /// Works entirely in IC coordinates: right multiplication by each `b_s`
    /// is tabulated once, `c_x · b_z` is built along canonical-word
    /// prefixes, and `c_y` is rewritten as a combination of the `b_z`.
    /// `elements` must be closed under prefixes and the table must cover
    /// every element of `W_c` up to the cap.
    pub fn ic_products(
        &self,
        table: &IcTable<CoxElt>,
        elements: &[CoxElt],
        cap: Option<usize>,
        mut visit: impl FnMut(CoxElt, CoxElt, &LinComb),
    ) -> Result<(), TlError> {
        let g = &self.group;
        let fits = |len: usize| cap.is_none_or(|c| len <= c);
        let mut order = elements.to_vec();
        g.sort(&mut order, TotalOrder::ShortLex);
        let last = |z: CoxElt| -> (CoxElt, usize) {
            let s = *g.word(z).last().expect("not the identity") as usize;
            (g.mul_gen(z, s, Side::Right), s)
        };

        let mut right: HashMap<(CoxElt, usize), LinComb> = HashMap::new();
        for &z in order.iter().filter(|&&z| fits(g.length(z) + 1)) {
            let cz = self.basis_element(z, Basis::Ic(table))?;
            for s in 0..g.rank() {
                // c_z · b_s = v⁻¹ (c_z · t_s + c_z)
                let prod = (&self.t_mul_gen(s, &cz, Side::Right) + &cz).scale(&LaurentPoly::v_pow(-1));
                let coords: LinComb = self.expand_in_basis(&prod, Basis::Ic(table))?.into_iter().collect();
                right.insert((z, s), coords);
            }
        }
        let act = |vec: &LinComb, s: usize| -> LinComb {
            let mut out = LinComb::zero();
            for (z, c) in vec.iter() {
                out.add_scaled(&right[&(z, s)], c);
            }
            out
        };

        // b_y in IC coordinates, then c_y in terms of the b_z.
        let e = g.identity();
        let mut mono: HashMap<CoxElt, LinComb> = HashMap::from([(e, LinComb::basis(e))]);
        let mut inverse: HashMap<CoxElt, LinComb> = HashMap::new();
        for &y in &order {
            if y != e {
                let (prefix, s) = last(y);
                let b = act(&mono[&prefix], s);
                mono.insert(y, b);
            }
            let mut a = LinComb::basis(y);
            for (z, c) in mono[&y].iter().filter(|(z, _)| *z != y) {
                a.add_scaled(&inverse[&z], &-c);
            }
            inverse.insert(y, a);
        }

        for &x in &order {
            let mut partial: HashMap<CoxElt, LinComb> = HashMap::from([(e, LinComb::basis(x))]);
            for &z in order.iter().filter(|&&z| z != e && fits(g.length(x) + g.length(z))) {
                let (prefix, s) = last(z);
                let next = act(&partial[&prefix], s);
                partial.insert(z, next);
            }
            for &y in order.iter().filter(|&&y| fits(g.length(x) + g.length(y))) {
                let mut prod = LinComb::zero();
                for (z, c) in inverse[&y].iter() {
                    prod.add_scaled(&partial[&z], c);
                }
                visit(x, y, &prod);
            }
        }
        Ok(())
    }

    /// `{"coeffs": [{"word": [...], "poly": {...}}]}`, sorted by length then
    /// ShortLex.
    pub fn vec_to_json(&self, vec: &LinComb) -> Value {
        let mut support: Vec<CoxElt> = vec.support().collect();
        self.group.sort(&mut support, TotalOrder::ShortLex);
        let coeffs: Vec<Value> = support
            .iter()
            .map(|&w| json!({"word": self.group.word_labels(w), "poly": vec.coeff(w)}))
            .collect();
        json!({ "coeffs": coeffs })
    }

    pub fn vec_from_json(&self, value: &Value) -> Result<LinComb, TlError> {
        let bad = |m: &str| TlError::BadJson(m.to_string());
        let coeffs = value
            .get("coeffs")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing coeffs array"))?;
        let mut out = LinComb::zero();
        for entry in coeffs {
            let labels: Vec<u32> = serde_json::from_value(entry.get("word").cloned().unwrap_or(Value::Null))
                .map_err(|e| bad(&e.to_string()))?;
            let poly: LaurentPoly = serde_json::from_value(entry.get("poly").cloned().unwrap_or(Value::Null))
                .map_err(|e| bad(&e.to_string()))?;
            let w = self
                .group
                .from_reduced_labels(&labels)
                .map_err(|e| bad(&e.to_string()))?;
            out.add_term(w, &poly);
        }
        Ok(out)
    }
}

impl IcContext for TLAlgebra {
    type Index = CoxElt;

    fn down_set(&self, w: CoxElt) -> Vec<CoxElt> {
        self.group.bruhat_ideal(w)
    }

    fn bar_row(&self, w: CoxElt) -> BarRow<CoxElt> {
        TLAlgebra::bar_row(self, w)
    }

    fn compare(&self, a: CoxElt, b: CoxElt, order: TotalOrder) -> std::cmp::Ordering {
        self.group.compare(a, b, order)
    }

    fn leq(&self, x: CoxElt, w: CoxElt) -> bool {
        self.group.bruhat_leq(x, w)
    }

    fn labels(&self, w: CoxElt) -> Vec<u32> {
        self.group.word_labels(w)
    }
}
