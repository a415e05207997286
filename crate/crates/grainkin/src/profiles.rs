//! Closed-form reference densities and transforms.
//!
//! These are the exact functions the solvers are measured against. They are
//! sampled, never produced by a solver, so they carry no discretization error.

use std::f64::consts::PI;

/// Maxwell equilibrium H(x) = 2 / (pi (1 + x^2)^2), unit mass and energy.
pub fn maxwell_h(x: f64) -> f64 {
    2.0 / (PI * (1.0 + x * x).powi(2))
}

/// Cauchy density G(x) = 1 / (pi (1 + x^2)); its Fourier transform is e^{-|xi|}.
pub fn cauchy_g(x: f64) -> f64 {
    1.0 / (PI * (1.0 + x * x))
}

/// Limiting temperature scale lambda_0 = 2 sqrt(e).
pub fn lambda0() -> f64 {
    2.0 * std::f64::consts::E.sqrt()
}

/// G_0(x) = lambda_0 H(lambda_0 x), the gamma -> 0 limit profile.
pub fn g0_profile(x: f64) -> f64 {
    let l = lambda0();
    l * maxwell_h(l * x)
}

/// Kernel element g_0(x) = (2/pi) (1 - 3x^2) / (1 + x^2)^3 of the linearized
/// operator around H; equals -G'' for the Cauchy density G.
pub fn g0_kernel(x: f64) -> f64 {
    let u = 1.0 + x * x;
    (2.0 / PI) * (1.0 - 3.0 * x * x) / (u * u * u)
}

/// Kernel element of the linearized operator around G_0: phi_0(x) = g_0(lambda_0 x).
pub fn phi0(x: f64) -> f64 {
    g0_kernel(lambda0() * x)
}

/// Fourier transform of H: Phi(xi) = (1 + |xi|) e^{-|xi|}.
pub fn equilibrium_phi(xi: f64) -> f64 {
    let r = xi.abs();
    (1.0 + r) * (-r).exp()
}

/// Fourier transform of g_0: psi_0(xi) = xi^2 e^{-|xi|}; stationary for the
/// linearized Fourier evolution.
pub fn psi0(xi: f64) -> f64 {
    xi * xi * (-xi.abs()).exp()
}

/// Normalized Maxwellian weight M(x) = e^{-x^2} / sqrt(pi).
pub fn maxwellian(x: f64) -> f64 {
    (-x * x).exp() / PI.sqrt()
}
