//! Triangular construction of IC bases.
//!
//! A context supplies a poset with finite down-sets, a total refinement and
//! the bar involution on the normalized basis `m'_x`. For every target `w` the
//! solver finds the unique bar-invariant `c_w = m'_w + Σ_{x<w} h_x m'_x` with
//! every `h_x ∈ v^-1 Z[v^-1]`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt::Debug;
use std::hash::Hash;
use std::sync::Arc;

use num_traits::Zero;
use serde_json::{json, Value};
use thiserror::Error;

use crate::coxeter::TotalOrder;
use crate::laurent::{LaurentPoly, Subring};

/// One row of the bar matrix: `bar(m'_w) = Σ a_{x,w} m'_x`.
pub type BarRow<I> = Arc<Vec<(I, LaurentPoly)>>;

/// A based module with a bar involution, as seen by the solver.
pub trait IcContext {
    type Index: Copy + Eq + Hash + Ord + Debug;

    /// `{x : x <= w}`, including `w`.
    fn down_set(&self, w: Self::Index) -> Vec<Self::Index>;

    /// Coefficients `a_{xw}` of `bar(m'_w) = Σ_x a_{xw} m'_x`.
    fn bar_row(&self, w: Self::Index) -> BarRow<Self::Index>;

    /// A total order refining the partial order.
    fn compare(&self, a: Self::Index, b: Self::Index, order: TotalOrder) -> Ordering;

    fn leq(&self, x: Self::Index, w: Self::Index) -> bool;

    /// Serialized form of an index (node labels of a canonical word).
    fn labels(&self, w: Self::Index) -> Vec<u32>;
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IcError {
    /// The bar-defect at `x` was not antisymmetric with zero constant term.
    #[error("defect at {x} under target {w} is not of the form p - bar(p): {defect}")]
    DefectUnsolvable { w: String, x: String, defect: String },
    #[error("bar row of {w} reaches {x}, which is not below it")]
    RowOutsideDownSet { w: String, x: String },
}

/// `c_w` in `m'`-coordinates; `coeffs` includes `(w, 1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IcElement<I: Ord> {
    pub w: I,
    pub coeffs: BTreeMap<I, LaurentPoly>,
}

impl<I: Ord + Copy> IcElement<I> {
    pub fn h(&self, x: I) -> LaurentPoly {
        self.coeffs.get(&x).cloned().unwrap_or_default()
    }
}

/// Solved elements, keyed by target, remembering insertion order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IcTable<I: Ord> {
    elements: BTreeMap<I, IcElement<I>>,
    order: Vec<I>,
}

impl<I: Ord> Default for IcTable<I> {
    fn default() -> Self {
        Self {
            elements: BTreeMap::new(),
            order: Vec::new(),
        }
    }
}

impl<I: Ord + Copy> IcTable<I> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, elem: IcElement<I>) {
        if !self.elements.contains_key(&elem.w) {
            self.order.push(elem.w);
        }
        self.elements.insert(elem.w, elem);
    }

    pub fn get(&self, w: I) -> Option<&IcElement<I>> {
        self.elements.get(&w)
    }

    pub fn get_mut(&mut self, w: I) -> Option<&mut IcElement<I>> {
        self.elements.get_mut(&w)
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn targets(&self) -> &[I] {
        &self.order
    }

    pub fn iter(&self) -> impl Iterator<Item = &IcElement<I>> + '_ {
        self.order.iter().map(|w| &self.elements[w])
    }
}

/// Solves for a single `c_w`, walking the down-set from the top.
///
/// With `h_y` known for all `y` above `x`, bar invariance at `x` reads
/// `h_x - bar(h_x) = Σ_{y>x} a_{xy} bar(h_y)`; the right side is
/// accumulated as each `h_y` is fixed.
pub fn solve_one<C: IcContext>(ctx: &C, w: C::Index, order: TotalOrder) -> Result<IcElement<C::Index>, IcError> {
    let mut down = ctx.down_set(w);
    down.sort_by(|a, b| ctx.compare(*b, *a, order));
    let rank: HashMap<C::Index, usize> = down.iter().enumerate().map(|(i, x)| (*x, i)).collect();
    let mut defect: Vec<LaurentPoly> = vec![LaurentPoly::zero(); down.len()];
    let mut coeffs = BTreeMap::new();
    for (i, &y) in down.iter().enumerate() {
        let h = if y == w {
            LaurentPoly::one()
        } else {
            let d = std::mem::take(&mut defect[i]);
            if !(&d + &d.bar()).is_zero() || !d.coeff(0).is_zero() {
                return Err(IcError::DefectUnsolvable {
                    w: format!("{w:?}"),
                    x: format!("{y:?}"),
                    defect: d.to_plain_string(),
                });
            }
            d.negative_part()
        };
        if h.is_zero() {
            continue;
        }
        let bar_h = h.bar();
        for (x, a) in ctx.bar_row(y).iter() {
            if *x == y {
                continue;
            }
            let Some(&j) = rank.get(x) else {
                return Err(IcError::RowOutsideDownSet {
                    w: format!("{y:?}"),
                    x: format!("{x:?}"),
                });
            };
            defect[j].add_scaled_shifted(a, &bar_h, 0);
        }
        coeffs.insert(y, h);
    }
    Ok(IcElement { w, coeffs })
}

/// Solves every target, in the given total order.
pub fn solve_ic<C: IcContext>(ctx: &C, targets: &[C::Index], order: TotalOrder) -> Result<IcTable<C::Index>, IcError> {
    let mut targets = targets.to_vec();
    targets.sort_by(|a, b| ctx.compare(*a, *b, order));
    targets.dedup();
    let mut table = IcTable::new();
    for w in targets {
        table.insert(solve_one(ctx, w, order)?);
    }
    Ok(table)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    /// The coefficient of `m'_w` is not 1.
    Diagonal,
    /// Support outside the down-set of `w`.
    Support,
    /// A coefficient has positive powers of `v`, so `c_w` leaves the lattice.
    Lattice,
    /// A coefficient lies in `Z[v^-1]` but has a constant term, so
    /// `π(c_w) != π(m'_w)`.
    Projection,
    NotBarInvariant,
    /// Re-solving under another total order gives a different element.
    NotUnique,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation<I> {
    pub w: I,
    pub x: Option<I>,
    pub kind: ViolationKind,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IcReport<I> {
    pub checked: usize,
    pub violations: Vec<Violation<I>>,
}

impl<I> IcReport<I> {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Bar of an `m'`-coordinate vector.
pub fn apply_bar<C: IcContext>(ctx: &C, coeffs: &BTreeMap<C::Index, LaurentPoly>) -> BTreeMap<C::Index, LaurentPoly> {
    let mut out: BTreeMap<C::Index, LaurentPoly> = BTreeMap::new();
    for (y, h) in coeffs {
        let bar_h = h.bar();
        for (x, a) in ctx.bar_row(*y).iter() {
            out.entry(*x).or_default().add_scaled_shifted(a, &bar_h, 0);
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Checks the defining conditions of `c_w` for an arbitrary vector.
pub fn check_element<C: IcContext>(
    ctx: &C,
    vec: &BTreeMap<C::Index, LaurentPoly>,
    w: C::Index,
) -> Vec<Violation<C::Index>> {
    let mut out = Vec::new();
    let mut push = |x: Option<C::Index>, kind, detail: String| out.push(Violation { w, x, kind, detail });
    let diag = vec.get(&w).cloned().unwrap_or_default();
    if !diag.is_one() {
        push(Some(w), ViolationKind::Diagonal, diag.to_plain_string());
    }
    for (x, c) in vec {
        if *x == w || c.is_zero() {
            continue;
        }
        if !ctx.leq(*x, w) {
            push(Some(*x), ViolationKind::Support, c.to_plain_string());
        } else if !c.in_subring(Subring::AMinus) {
            push(Some(*x), ViolationKind::Lattice, c.to_plain_string());
        } else if !c.in_subring(Subring::VInvAMinus) {
            push(Some(*x), ViolationKind::Projection, c.to_plain_string());
        }
    }
    let mut clean = vec.clone();
    clean.retain(|_, c| !c.is_zero());
    if apply_bar(ctx, &clean) != clean {
        push(None, ViolationKind::NotBarInvariant, String::new());
    }
    out
}

/// Whether `vec` (in `m'`-coordinates) is the IC element `c_w`.
pub fn is_ic_element<C: IcContext>(ctx: &C, vec: &BTreeMap<C::Index, LaurentPoly>, w: C::Index) -> bool {
    check_element(ctx, vec, w).is_empty()
}

/// Re-checks every element of a table; with `uniqueness` it also re-solves
/// under the reverse-lexicographic refinement and compares.
pub fn verify_ic<C: IcContext>(ctx: &C, table: &IcTable<C::Index>, uniqueness: bool) -> IcReport<C::Index> {
    let mut violations = Vec::new();
    for elem in table.iter() {
        violations.extend(check_element(ctx, &elem.coeffs, elem.w));
        if uniqueness {
            match solve_one(ctx, elem.w, TotalOrder::LengthReverseLex) {
                Ok(other) if other.coeffs == elem.coeffs => {}
                Ok(_) => violations.push(Violation {
                    w: elem.w,
                    x: None,
                    kind: ViolationKind::NotUnique,
                    detail: String::new(),
                }),
                Err(e) => violations.push(Violation {
                    w: elem.w,
                    x: None,
                    kind: ViolationKind::NotUnique,
                    detail: e.to_string(),
                }),
            }
        }
    }
    IcReport {
        checked: table.len(),
        violations,
    }
}

/// One JSON object per element: `{"w": [...], "coeffs": [{"x": [...], "h": {...}}]}`.
pub fn element_to_json<C: IcContext>(ctx: &C, elem: &IcElement<C::Index>) -> Value {
    let mut xs: Vec<C::Index> = elem.coeffs.keys().copied().collect();
    xs.sort_by(|a, b| ctx.compare(*a, *b, TotalOrder::ShortLex));
    let coeffs: Vec<Value> = xs
        .iter()
        .map(|&x| json!({"x": ctx.labels(x), "h": elem.coeffs[&x]}))
        .collect();
    json!({"w": ctx.labels(elem.w), "coeffs": coeffs})
}

pub fn table_to_json<C: IcContext>(ctx: &C, table: &IcTable<C::Index>) -> Value {
    let mut targets = table.targets().to_vec();
    targets.sort_by(|a, b| ctx.compare(*a, *b, TotalOrder::ShortLex));
    Value::Array(
        targets
            .iter()
            .map(|&w| element_to_json(ctx, table.get(w).expect("target present")))
            .collect(),
    )
}

/// Parses a table written by [`table_to_json`]; `resolve` maps labels back
/// to indices.
pub fn table_from_json<I: Ord + Copy>(
    value: &Value,
    mut resolve: impl FnMut(&[u32]) -> Option<I>,
) -> Option<IcTable<I>> {
    let mut table = IcTable::new();
    for entry in value.as_array()? {
        let w_labels: Vec<u32> = serde_json::from_value(entry.get("w")?.clone()).ok()?;
        let w = resolve(&w_labels)?;
        let mut coeffs = BTreeMap::new();
        for c in entry.get("coeffs")?.as_array()? {
            let x_labels: Vec<u32> = serde_json::from_value(c.get("x")?.clone()).ok()?;
            let h: LaurentPoly = serde_json::from_value(c.get("h")?.clone()).ok()?;
            coeffs.insert(resolve(&x_labels)?, h);
        }
        table.insert(IcElement { w, coeffs });
    }
    Some(table)
}
