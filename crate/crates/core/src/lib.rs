//! Canonical bases of generalized Temperley–Lieb algebras of Coxeter groups.

pub mod coxeter;
pub mod harness;
pub mod hecke_kl;
pub mod ic_solver;
pub mod laurent;
pub mod tl_algebra;
