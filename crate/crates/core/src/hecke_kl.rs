//! The Hecke algebra in its `T`-basis, the Kazhdan–Lusztig basis obtained
//! from the generic IC solver, and the projection onto TL.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use parking_lot::Mutex;
use serde::Serialize;
use thiserror::Error;

use crate::coxeter::{CoxElt, CoxeterGroup, Side, TotalOrder};
use crate::ic_solver::{solve_ic, solve_one, BarRow, IcContext, IcError, IcTable};
use crate::laurent::LaurentPoly;
use crate::tl_algebra::{LinComb, TLAlgebra, TLVec};

pub type HeckeVec = LinComb;

/// Default ceiling on `|W|` for [`HeckeAlgebra::kernel_analysis`].
pub const DEFAULT_BUDGET: usize = 10_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HeckeError {
    #[error("the group is infinite; kernel analysis needs a finite group")]
    Infinite,
    #[error("the group has more than {budget} elements")]
    TooLarge { budget: usize },
    #[error(transparent)]
    Ic(#[from] IcError),
}

/// `C'_w` in `T`-coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KlElement {
    pub w: CoxElt,
    pub coords: HeckeVec,
}

/// Outcome of comparing `J(X)` with the Kazhdan–Lusztig elements it holds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KernelReport {
    pub graph: String,
    #[serde(rename = "dim_J")]
    pub dim_j: usize,
    pub kl_in_kernel: usize,
    pub spanned: bool,
    pub projected_equals_ic: bool,
    /// Elements of `W_c` whose `C'_w` does not project to `c_w`.
    pub witnesses: Vec<Vec<u32>>,
}

pub struct HeckeAlgebra {
    tl: Arc<TLAlgebra>,
    bar_memo: Mutex<HashMap<CoxElt, Arc<HeckeVec>>>,
    bar_row_memo: Mutex<HashMap<CoxElt, BarRow<CoxElt>>>,
}

impl HeckeAlgebra {
    pub fn new(tl: Arc<TLAlgebra>) -> Self {
        Self {
            tl,
            bar_memo: Mutex::default(),
            bar_row_memo: Mutex::default(),
        }
    }

    pub fn group(&self) -> &Arc<CoxeterGroup> {
        self.tl.group()
    }

    pub fn tl(&self) -> &Arc<TLAlgebra> {
        &self.tl
    }

    /// `T_s · a` or `a · T_s`.
    pub fn h_mul_gen(&self, s: usize, a: &HeckeVec, side: Side) -> HeckeVec {
        let g = self.group();
        let q = LaurentPoly::q();
        let q1 = LaurentPoly::from_terms([(0, -1), (2, 1)]);
        let mut out = HeckeVec::zero();
        for (x, c) in a.iter() {
            let sx = g.mul_gen(x, s, side);
            if g.is_descent(x, s, side) {
                out.add_term(sx, &(c * &q));
                out.add_term(x, &(c * &q1));
            } else {
                out.add_term(sx, c);
            }
        }
        out
    }

    pub fn h_mul(&self, a: &HeckeVec, b: &HeckeVec) -> HeckeVec {
        let g = self.group();
        let mut ys: Vec<CoxElt> = b.support().collect();
        g.sort(&mut ys, TotalOrder::ShortLex);
        let mut done: HashMap<CoxElt, HeckeVec> = HashMap::from([(g.identity(), a.clone())]);
        let mut out = HeckeVec::zero();
        for y in ys {
            // Every prefix of a canonical word is canonical, so a shorter
            // prefix is either cached or built on the way.
            let word = g.word_indices(y);
            let mut cur = g.identity();
            for &s in &word {
                let next = g.mul_gen(cur, s, Side::Right);
                if !done.contains_key(&next) {
                    let v = self.h_mul_gen(s, &done[&cur], Side::Right);
                    done.insert(next, v);
                }
                cur = next;
            }
            out.add_scaled(&done[&y], &b.coeff(y));
        }
        out
    }

    /// `bar(T_w)`, built as `bar(T_s) bar(T_u)` for `w = s u`.
    pub fn bar_basis(&self, w: CoxElt) -> Arc<HeckeVec> {
        let g = self.group();
        if w == g.identity() {
            return Arc::new(HeckeVec::basis(w));
        }
        if let Some(hit) = self.bar_memo.lock().get(&w) {
            return hit.clone();
        }
        let s = g.word(w)[0] as usize;
        let u = g.mul_gen(w, s, Side::Left);
        let bar_u = self.bar_basis(u);
        let mut out = self.h_mul_gen(s, &bar_u, Side::Left).scale(&LaurentPoly::v_pow(-2));
        out.add_scaled(&bar_u, &LaurentPoly::from_terms([(-2, 1), (0, -1)]));
        let out = Arc::new(out);
        self.bar_memo.lock().insert(w, out.clone());
        out
    }

    pub fn h_bar(&self, a: &HeckeVec) -> HeckeVec {
        let mut out = HeckeVec::zero();
        for (x, c) in a.iter() {
            out.add_scaled(&self.bar_basis(x), &c.bar());
        }
        out
    }

    /// `C'_w` through the IC solver over `m'_x = v^-ℓ(x) T_x`.
    pub fn kl_basis(&self, w: CoxElt) -> Result<KlElement, IcError> {
        let elem = solve_one(self, w, TotalOrder::ShortLex)?;
        let g = self.group();
        let coords = elem
            .coeffs
            .iter()
            .map(|(x, h)| (*x, h.shift(-(g.length(*x) as i32))))
            .collect();
        Ok(KlElement { w, coords })
    }

    /// `T_w -> t_w`, re-expanded over `W_c`.
    pub fn project(&self, a: &HeckeVec) -> TLVec {
        let mut out = TLVec::zero();
        for (x, c) in a.iter() {
            out.add_scaled(&self.tl.d_expand(x), c);
        }
        out
    }

    /// Compares `J(X)` with the span of the `C'_w` it contains, and the
    /// images of `C'_w` for `w ∈ W_c` with the IC basis of TL.
    pub fn kernel_analysis(&self, budget: usize) -> Result<KernelReport, HeckeError> {
        let g = self.group();
        if !g.is_finite() {
            return Err(HeckeError::Infinite);
        }
        let all = g.enumerate_limited(budget).ok_or(HeckeError::TooLarge { budget })?;
        let wc: Vec<CoxElt> = all.iter().filter(|(_, c)| *c).map(|(w, _)| *w).collect();
        let ic = solve_ic(&*self.tl, &wc, TotalOrder::ShortLex)?;
        let mut kl_in_kernel = 0;
        let mut witnesses = Vec::new();
        for &(w, in_wc) in &all {
            let c = self.kl_basis(w)?;
            let image = self.tl.to_mprime(&self.project(&c.coords));
            if image.is_zero() {
                kl_in_kernel += 1;
            }
            if in_wc {
                let expected = &ic.get(w).expect("solved").coeffs;
                let got: BTreeMap<CoxElt, LaurentPoly> = image.iter().map(|(x, c)| (x, c.clone())).collect();
                if &got != expected {
                    witnesses.push(g.word_labels(w));
                }
            }
        }
        let dim_j = all.len() - wc.len();
        Ok(KernelReport {
            graph: g.graph().name().to_string(),
            dim_j,
            kl_in_kernel,
            spanned: kl_in_kernel == dim_j,
            projected_equals_ic: witnesses.is_empty(),
            witnesses,
        })
    }

    /// IC table of the Hecke algebra on the given targets.
    pub fn kl_table(&self, targets: &[CoxElt]) -> Result<IcTable<CoxElt>, IcError> {
        solve_ic(self, targets, TotalOrder::ShortLex)
    }
}

impl IcContext for HeckeAlgebra {
    type Index = CoxElt;

    fn down_set(&self, w: CoxElt) -> Vec<CoxElt> {
        self.group().bruhat_interval(w)
    }

    fn bar_row(&self, w: CoxElt) -> BarRow<CoxElt> {
        if let Some(hit) = self.bar_row_memo.lock().get(&w) {
            return hit.clone();
        }
        let g = self.group();
        let lw = g.length(w) as i32;
        let row: Arc<Vec<(CoxElt, LaurentPoly)>> = Arc::new(
            self.bar_basis(w)
                .iter()
                .map(|(x, c)| (x, c.shift(lw + g.length(x) as i32)))
                .collect(),
        );
        self.bar_row_memo.lock().insert(w, row.clone());
        row
    }

    fn compare(&self, a: CoxElt, b: CoxElt, order: TotalOrder) -> std::cmp::Ordering {
        self.group().compare(a, b, order)
    }

    fn leq(&self, x: CoxElt, w: CoxElt) -> bool {
        self.group().bruhat_leq(x, w)
    }

    fn labels(&self, w: CoxElt) -> Vec<u32> {
        self.group().word_labels(w)
    }
}
