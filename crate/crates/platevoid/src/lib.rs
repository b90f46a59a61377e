//! Clamped-plate eigenmodes of the unit disk and the numerics needed to certify
//! a nodal void in a small deformation of the disk.
//!
//! The crate is organised bottom-up:
//!
//! * [`specfun`] evaluates `J_n`, `I_n`, `Y_0` and Bessel zeros with error bounds;
//! * [`disk_spectrum`] finds zeros of the cross ratio `W_N` and checks the
//!   nondegeneracy conditions of a mode;
//! * [`eigenfunctions`] evaluates the normalised eigenfunctions and their
//!   Helmholtz / screened-Poisson split;
//! * [`envelopes`] holds the Debye profiles and the sandwich/remainder bounds;
//! * [`perturbation`] is the shape-derivative calculus for cosine boundary fields
//!   and the scalar constant audits;
//! * [`voidcert`] solves for the limiting radius and certifies a void radius.
//!
//! Error bounds are propagated floating-point estimates, not interval enclosures.

pub mod audit;
pub mod disk_spectrum;
pub mod eigenfunctions;
pub mod envelopes;
mod error;
pub mod logspace;
pub mod perturbation;
pub mod quadrature;
pub mod roots;
pub mod specfun;
pub mod voidcert;

pub use error::{Error, Result};
pub use specfun::{Accuracy, BesselEval, Precision};
