//! Numerical toolkit for the quantum mechanics of extended objects.
//!
//! A particle of mass `m` is treated as smeared over its Compton wavelength
//! `1/m`: in the momentum basis the position operator becomes
//! `X_f = e^{-P²/2m²} X e^{-P²/2m²}`, with the noncanonical commutator
//! `[X_f, P] = i e^{-P²/m²}`. The crate is organised bottom-up:
//!
//! - [`numerics`]: grids, dense operators, quadrature, scalar minimisation,
//!   root bracketing and symmetric/generalized eigensolvers.
//! - [`operators`]: smeared operator algebra, commutator checks, uncertainty
//!   relations and fuzzy angular momentum.
//! - [`oscillator`]: the fuzzy harmonic/anharmonic oscillator.
//! - [`deuteron`]: the Yukawa deuteron range-depth analysis, repulsive core
//!   and meson coupling constants.
//!
//! Internally every quantity uses natural units (`ħ = c = 1`, energies and
//! momenta in MeV). Lengths in fm are converted with `ħc` at the boundary of
//! the [`deuteron`] module.

pub mod deuteron;
pub mod error;
pub mod numerics;
pub mod operators;
pub mod oscillator;

pub use error::{Error, Result};
