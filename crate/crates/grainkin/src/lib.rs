//! grainkin: a deterministic numerical laboratory for the one-dimensional
//! inelastic Boltzmann equation with collision kernel |x-y|^gamma.
//!
//! The crate solves the self-similar equation in physical space, solves the
//! Maxwell (gamma = 0) case in Fourier variables through its semigroup /
//! Duhamel structure, computes self-similar steady profiles for small
//! positive gamma, and measures the explicit constants, conservation laws,
//! decay rates and spectral-gap bounds of that theory at desk scale.
//!
//! Modules:
//! * [`grid`] — uniform velocity/frequency grids, quadrature, interpolation;
//! * [`collision`] — the collision operator, weak form, moments and
//!   dissipation functionals;
//! * [`maxwell`] — the Fourier-side Maxwell solver, Fourier norms, decay
//!   fits, transforms;
//! * [`selfsim`] — physical-space evolution, steady profiles, rescalings;
//! * [`linstab`] — the linearized operator around G_0, moment projection and
//!   spectral-gap experiments;
//! * [`oracle`] — whole-line reference quadratures for closed-form
//!   integrands;
//! * [`experiments`] — the reproducible experiment drivers behind the CLI.

pub mod collision;
pub mod error;
pub mod experiments;
pub mod grid;
pub mod linstab;
pub mod maxwell;
pub mod oracle;
pub mod profiles;
pub mod selfsim;

pub use error::{Error, Result};
