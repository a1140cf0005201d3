//! Degree sets for Cartan-type mod-`ell` Galois images of elliptic curves
//! over the rationals, and degrees of number fields over which such a curve
//! acquires a point of order `ell`.
//!
//! The crate is layered bottom-up:
//!
//! - [`modarith`]: residues, Legendre symbols, divisors.
//! - [`matgroup`]: `GL2(Z/ellZ)` matrices, closures, subgroup lattices, twists.
//! - [`standard`]: the Cartan subgroups, their normalizers and conjugacy tests.
//! - [`indexsets`]: divisor intervals and index sets, brute force and closed form.
//! - [`catalog`]: the known exceptional images and CM discriminant data.
//! - [`theorems`]: the assembled degree sets and the theorem predicates.

mod error;
mod exec;

pub mod catalog;
pub mod indexsets;
pub mod matgroup;
pub mod modarith;
pub mod standard;
pub mod theorems;

pub use error::{Error, Result};
pub use exec::{EnumConfig, Exec, DEFAULT_BUDGET};
