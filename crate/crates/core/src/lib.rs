//! Exact arithmetic for Hirzebruch-Riemann-Roch polynomials of
//! hyper-Kähler manifolds: polynomial toolkit, Chebyshev and Bernoulli
//! inputs, the Chern-number formula for the RR polynomial, the `Q_k` basis,
//! the constants `C_n`, profiles of known families, and the isotropic-class
//! case solver.

pub mod chebbern;
pub mod cli;
pub mod cnconst;
pub mod error;
pub mod exactpoly;
pub mod hkprofile;
pub mod isosolver;
pub mod nwformula;
pub mod qkbasis;
