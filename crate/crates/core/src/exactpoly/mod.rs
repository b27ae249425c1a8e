//! Exact rational scalars, univariate polynomials over them, and residue sets.
//!
//! Everything here is exact; the only floating-point values are the root
//! approximations produced by [`roots`].

mod poly;
mod rat;
mod residue;
pub mod roots;

pub use poly::{Poly, MAX_RESIDUE_MODULUS};
pub use rat::{lcm_denominators, Rat};
pub use residue::ResidueSet;

use crate::error::PolyError;

pub fn poly_eval(p: &Poly, x: &Rat) -> Rat {
    p.eval(x)
}

pub fn poly_compose_affine(p: &Poly, a: &Rat, b: &Rat) -> Poly {
    p.compose_affine(a, b)
}

/// Panics if `n` is zero.
pub fn binomial_poly(n: u32, scale: &Rat, shift: &Rat) -> Poly {
    assert!(n >= 1, "binomial polynomial needs n >= 1");
    Poly::binomial(n, scale, shift)
}

pub fn symmetry_shift(p: &Poly) -> Option<Rat> {
    p.symmetry_shift()
}

pub fn integrality_residues(p: &Poly) -> Result<ResidueSet, PolyError> {
    p.integrality_residues()
}
