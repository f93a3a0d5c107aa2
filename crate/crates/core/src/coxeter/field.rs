//! Exact arithmetic in `Z[λ]`, `λ = 2cos(π/N)`.
//!
//! Every bond constant `2cos(π/m)` with `m | N` is an integer polynomial in
//! `λ`, so the root coordinates of the geometric representation stay
//! integral. Elements are coefficient vectors of length `degree`, reduced
//! modulo the (monic) minimal polynomial of `λ`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use parking_lot::Mutex;

use super::CoxeterError;

/// Field degrees beyond this are refused; they only arise from graphs that
/// mix many unrelated bond strengths.
const MAX_DEGREE: usize = 64;

#[derive(Debug)]
pub(crate) struct RealCyclotomic {
    n: u64,
    degree: usize,
    /// Monic minimal polynomial of `λ`, low degree first, length `degree + 1`.
    minpoly: Vec<i64>,
    /// `λ^k` in floating point for the fast sign path.
    powers: Vec<f64>,
    /// Isolating interval for `λ`, narrowed on demand.
    interval: Mutex<(BigRational, BigRational)>,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// Cyclotomic polynomial `Φ_n`, low degree first.
fn cyclotomic(n: u64) -> Vec<i64> {
    // z^n - 1 divided by Φ_d for every proper divisor d.
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            num = exact_div(&num, &cyclotomic(d));
        }
    }
    num
}

fn exact_div(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    assert_eq!(den[dd], 1, "divisor must be monic");
    let mut quot = vec![0i64; rem.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dd];
        quot[k] = c;
        for (j, &dj) in den.iter().enumerate() {
            rem[k + j] -= c * dj;
        }
    }
    assert!(rem.iter().all(|&c| c == 0), "inexact cyclotomic division");
    quot
}

fn poly_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0i64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_sub(a: &[i64], b: &[i64]) -> Vec<i64> {
    let len = a.len().max(b.len());
    (0..len)
        .map(|i| a.get(i).copied().unwrap_or(0) - b.get(i).copied().unwrap_or(0))
        .collect()
}

/// `D_k(x)` with `D_0 = 2`, `D_1 = x`, `D_k = x D_{k-1} - D_{k-2}`, so that
/// `D_k(2cos θ) = 2cos(kθ)`.
fn dickson(k: u64) -> Vec<i64> {
    let (mut prev, mut cur) = (vec![2i64], vec![0i64, 1]);
    if k == 0 {
        return prev;
    }
    for _ in 1..k {
        let next = poly_sub(&poly_mul(&[0, 1], &cur), &prev);
        prev = cur;
        cur = next;
    }
    cur
}

fn rational(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite float")
}

impl RealCyclotomic {
    /// The field generated by `2cos(π/n)`, `n >= 3`.
    pub(crate) fn new(n: u64) -> Result<Self, CoxeterError> {
        assert!(n >= 3);
        let phi = cyclotomic(2 * n);
        let degree = (phi.len() - 1) / 2;
        if degree > MAX_DEGREE {
            return Err(CoxeterError::FieldTooLarge(n));
        }
        // z^-d Φ(z) = c_d + Σ c_{d+k} (z^k + z^-k), and z^k + z^-k = D_k(z + 1/z).
        let mut minpoly = vec![0i64; degree + 1];
        minpoly[0] = phi[degree];
        for k in 1..=degree {
            let dk = dickson(k as u64);
            for (i, &c) in dk.iter().enumerate() {
                minpoly[i] += phi[degree + k] * c;
            }
        }
        let lambda = 2.0 * (std::f64::consts::PI / n as f64).cos();
        let powers = (0..degree).map(|k| lambda.powi(k as i32)).collect();
        // All other roots are 2cos(jπ/n) with j >= 3 odd, below 2cos(2π/n).
        let lo = rational(2.0 * (2.0 * std::f64::consts::PI / n as f64).cos());
        let hi = rational(2.0);
        let field = Self {
            n,
            degree,
            minpoly,
            powers,
            interval: Mutex::new((lo.clone(), hi.clone())),
        };
        let (slo, shi) = (field.minpoly_sign_at(&lo), field.minpoly_sign_at(&hi));
        assert!(slo != shi && slo != Ordering::Equal, "λ not isolated for n = {n}");
        Ok(field)
    }

    pub(crate) fn degree(&self) -> usize {
        self.degree
    }

    pub(crate) fn one(&self) -> Vec<i64> {
        let mut v = vec![0; self.degree];
        v[0] = 1;
        v
    }

    pub(crate) fn int(&self, c: i64) -> Vec<i64> {
        let mut v = vec![0; self.degree];
        v[0] = c;
        v
    }

    /// `2cos(π/m)` for `m | n`.
    pub(crate) fn two_cos_pi_over(&self, m: u64) -> Vec<i64> {
        assert!(self.n.is_multiple_of(m), "bond {m} not in field of 2cos(pi/{})", self.n);
        self.reduce(dickson(self.n / m))
    }

    fn reduce(&self, mut p: Vec<i64>) -> Vec<i64> {
        let d = self.degree;
        while p.len() > d {
            let top = p.pop().unwrap();
            if top != 0 {
                let base = p.len() - d;
                for (i, &c) in self.minpoly[..d].iter().enumerate() {
                    p[base + i] = p[base + i]
                        .checked_sub(top.checked_mul(c).expect("field overflow"))
                        .expect("field overflow");
                }
            }
        }
        p.resize(d, 0);
        p
    }

    /// `acc += a * b`.
    pub(crate) fn mul_add(&self, acc: &mut [i64], a: &[i64], b: &[i64]) {
        if self.degree == 1 {
            acc[0] = a[0]
                .checked_mul(b[0])
                .and_then(|x| acc[0].checked_add(x))
                .expect("root coordinate overflow; lower the length cap");
            return;
        }
        if b.iter().all(|&x| x == 0) || a.iter().all(|&x| x == 0) {
            return;
        }
        let mut prod = vec![0i64; 2 * self.degree - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = x
                    .checked_mul(y)
                    .and_then(|t| prod[i + j].checked_add(t))
                    .expect("root coordinate overflow; lower the length cap");
            }
        }
        for (dst, x) in acc.iter_mut().zip(self.reduce(prod)) {
            *dst = dst.checked_add(x).expect("root coordinate overflow");
        }
    }

    /// Rough magnitude, used only to pick which coordinate to sign-test.
    pub(crate) fn approx(&self, a: &[i64]) -> f64 {
        a.iter().zip(&self.powers).map(|(&c, &p)| c as f64 * p).sum()
    }

    /// Exact sign of `a(λ)`.
    pub(crate) fn sign(&self, a: &[i64]) -> Ordering {
        if a.iter().all(|&c| c == 0) {
            return Ordering::Equal;
        }
        if self.degree == 1 {
            return a[0].cmp(&0);
        }
        const EXACT_F64: i64 = 1 << 52;
        if a.iter().all(|&c| c.abs() < EXACT_F64) {
            let value = self.approx(a);
            let scale: f64 = a.iter().zip(&self.powers).map(|(&c, &p)| (c as f64 * p).abs()).sum();
            if value.abs() > scale * 1e-12 {
                return value.partial_cmp(&0.0).unwrap();
            }
        }
        self.sign_exact(a)
    }

    fn minpoly_sign_at(&self, x: &BigRational) -> Ordering {
        let mut acc = BigRational::zero();
        for &c in self.minpoly.iter().rev() {
            acc = acc * x + BigRational::from_integer(BigInt::from(c));
        }
        acc.cmp(&BigRational::zero())
    }

    /// Interval evaluation over the isolating interval, bisecting until the
    /// enclosure excludes zero. Terminates because `a(λ) != 0`.
    fn sign_exact(&self, a: &[i64]) -> Ordering {
        let mut guard = self.interval.lock();
        loop {
            let (lo, hi) = guard.clone();
            let (elo, ehi) = eval_interval(a, &lo, &hi);
            if elo.is_positive() {
                return Ordering::Greater;
            }
            if ehi.is_negative() {
                return Ordering::Less;
            }
            let mid = (&lo + &hi) / BigRational::from_integer(BigInt::from(2));
            if self.minpoly_sign_at(&mid) == self.minpoly_sign_at(&lo) {
                guard.0 = mid;
            } else {
                guard.1 = mid;
            }
        }
    }
}

fn eval_interval(a: &[i64], lo: &BigRational, hi: &BigRational) -> (BigRational, BigRational) {
    let mut acc_lo = BigRational::zero();
    let mut acc_hi = BigRational::zero();
    for &c in a.iter().rev() {
        let products = [&acc_lo * lo, &acc_lo * hi, &acc_hi * lo, &acc_hi * hi];
        let min = products.iter().min().unwrap().clone();
        let max = products.iter().max().unwrap().clone();
        let c = BigRational::from_integer(BigInt::from(c));
        acc_lo = min + &c;
        acc_hi = max + c;
    }
    (acc_lo, acc_hi)
}
