//! Reference quadratures for improper integrals of closed-form integrands.
//!
//! The dissipation functionals carry |x-y|^2 log|x-y| kernels against
//! densities with x^{-4} tails, so the integrands decay only like log(x)/x^2;
//! truncating at any desk-scale box leaves percent-level tails. For the
//! closed-form reference densities the integrals are therefore evaluated on
//! the whole line through the substitution x = tan(theta), which maps R onto
//! (-pi/2, pi/2) and turns the slow tails into bounded integrands with
//! integrable log endpoints. Midpoint nodes keep the evaluation away from the
//! endpoints and from x = 0.
//!
//! These routines are the independent oracle side of every dual-route check;
//! the grid-based functionals in [`crate::collision`] are the solver side.

/// Integral of f over R via the tangent substitution with n midpoint nodes.
pub fn integrate_line(f: impl Fn(f64) -> f64, n: usize) -> f64 {
    let h = std::f64::consts::PI / n as f64;
    let mut sum = 0.0;
    for j in 0..n {
        let theta = -0.5 * std::f64::consts::PI + (j as f64 + 0.5) * h;
        let c = theta.cos();
        let x = theta.tan();
        let v = f(x) / (c * c);
        if v.is_finite() {
            sum += v;
        }
    }
    sum * h
}

/// Double integral of f(x) g(y) k(|x-y|) over R^2, tangent substitution in
/// both variables; cells where x == y are skipped (the kernels in scope are
/// o(1) at the diagonal after their r^2 prefactor).
pub fn integrate_plane_kernel(
    f: impl Fn(f64) -> f64,
    g: impl Fn(f64) -> f64,
    kernel: impl Fn(f64) -> f64,
    n: usize,
) -> f64 {
    let h = std::f64::consts::PI / n as f64;
    let nodes: Vec<(f64, f64)> = (0..n)
        .map(|j| {
            let theta = -0.5 * std::f64::consts::PI + (j as f64 + 0.5) * h;
            let c = theta.cos();
            (theta.tan(), h / (c * c))
        })
        .collect();
    let fw: Vec<f64> = nodes.iter().map(|&(x, w)| f(x) * w).collect();
    let gw: Vec<f64> = nodes.iter().map(|&(x, w)| g(x) * w).collect();
    let mut total = 0.0;
    for (i, &(x, _)) in nodes.iter().enumerate() {
        if fw[i] == 0.0 {
            continue;
        }
        let mut row = 0.0;
        for (j, &(y, _)) in nodes.iter().enumerate() {
            let r = (x - y).abs();
            if r > 0.0 {
                let k = kernel(r);
                if k.is_finite() {
                    row += gw[j] * k;
                }
            }
        }
        total += fw[i] * row;
    }
    total
}

/// I_0(f, g) = iint f(x) g(y) |x-y|^2 log|x-y| dx dy on the whole plane.
pub fn i0_whole_line(f: impl Fn(f64) -> f64, g: impl Fn(f64) -> f64, n: usize) -> f64 {
    integrate_plane_kernel(f, g, |r| r * r * r.ln(), n)
}

/// I_gamma(f, g) = gamma^{-1} iint f g |x-y|^2 (|x-y|^gamma - 1).
pub fn i_gamma_whole_line(
    f: impl Fn(f64) -> f64,
    g: impl Fn(f64) -> f64,
    gamma: f64,
    n: usize,
) -> f64 {
    integrate_plane_kernel(f, g, |r| r * r * (r.powf(gamma) - 1.0) / gamma, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profiles::*;

    #[test]
    fn line_integrals_of_reference_densities() {
        assert!((integrate_line(maxwell_h, 1 << 14) - 1.0).abs() < 1e-10);
        assert!((integrate_line(|x| maxwell_h(x) * x * x, 1 << 14) - 1.0).abs() < 1e-8);
        assert!((integrate_line(cauchy_g, 1 << 14) - 1.0).abs() < 1e-10);
        // M_2(g_0) = -2 and M_0(g_0) = 0.
        assert!((integrate_line(|x| g0_kernel(x) * x * x, 1 << 14) + 2.0).abs() < 1e-8);
        assert!(integrate_line(g0_kernel, 1 << 14).abs() < 1e-10);
    }

    #[test]
    fn g0_log_moment() {
        // int g_0(x) x^2 log|x| dx = -3.
        let v = integrate_line(
            |x| {
                if x == 0.0 {
                    0.0
                } else {
                    g0_kernel(x) * x * x * x.abs().ln()
                }
            },
            1 << 15,
        );
        assert!((v + 3.0).abs() < 1e-3, "got {v}");
    }
}
