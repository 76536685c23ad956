//! Numerical laboratory for the generalized Schrödinger–Poisson–Slater equation
//!
//!   -Δu + (I_α ∗ |u|^p) |u|^{p-2} u = |u|^{q-2} u   in R^N,
//!
//! and the Coulomb–Sobolev variational structure behind it.
//!
//! The crate is organised around the pipeline
//!
//!   [`regime`]   — exact exponent formulas and parameter-regime classification,
//!   [`grid`]     — logarithmic radial grids, quadrature, norms, dilations,
//!   [`riesz`]    — the radial reduction of the Riesz potential (kernel K^R_{α,N}),
//!   [`energy`]   — energy functionals, Euler–Lagrange / Nehari / Pohožaev residuals,
//!   [`solver`]   — constrained minimisation of E_* on the L^q sphere (radial groundstates),
//!   [`families`] — explicit test/counterexample families with fitted growth rates,
//!   [`verify`]   — inequality and identity checks over arbitrary radial inputs,
//!   [`cache`]    — binary kernel-matrix cache,
//!   [`io`]       — CSV/JSON serialisation, sweep configs, run manifests.
//!
//! All computations are deterministic given their inputs (fixed seeds, fixed
//! iteration orders), so identical run manifests reproduce byte-identical
//! numeric outputs.

pub mod cache;
pub mod energy;
pub mod error;
pub mod families;
pub mod grid;
pub mod io;
pub mod quad;
pub mod regime;
pub mod riesz;
pub mod scalar;
pub mod solver;
pub mod verify;

pub use error::{Error, Result};
pub use regime::Params;
