//! Shared measured-claim checks used by both the property suite and the
//! acceptance suite.

use grainkin::collision::{
    i0_functional, moment, moment_report, q_minus, q_plus, weighted_norm, CollisionParams,
};
use grainkin::grid::{Field, FrequencyGrid, VelocityGrid};
use grainkin::linstab::{project_y0, ProjectionBasis};
use grainkin::maxwell::{
    fourier_norm_k, fourier_norm_kp, sigma_kp, to_physical, to_spectral, FlowKind, FourierStepper,
    SpectralState, StepperOptions,
};
use grainkin::profiles::{equilibrium_phi, g0_profile, maxwell_h, phi0};
use grainkin::selfsim::{evolve, EvolveOptions};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rustfft::num_complex::Complex64;

pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &'static str, pass: bool, detail: String) -> Self {
        Self { name, pass, detail }
    }
}

fn random_bump_field(grid: &VelocityGrid, rng: &mut ChaCha8Rng, nonnegative: bool) -> Field {
    let bumps: Vec<(f64, f64, f64)> = (0..3)
        .map(|_| {
            (
                rng.gen_range(0.05..1.2),
                rng.gen_range(-3.0..3.0),
                rng.gen_range(0.2..1.5),
            )
        })
        .collect();
    Field::sample(grid, |x| {
        bumps
            .iter()
            .map(|&(a, x0, s)| {
                let amp = if nonnegative { a } else { a - 0.6 };
                amp * (-(x - x0) * (x - x0) / (2.0 * s * s)).exp()
            })
            .sum()
    })
}

fn l2_norm(f: &Field) -> f64 {
    (f.grid().spacing() * f.samples().iter().map(|v| v * v).sum::<f64>()).sqrt()
}

/// Q_0^+ trilinear bound on random nonnegative trios:
/// int Q_0^+(f,g) h <= sqrt(2) ||h||_2 min(||f||_1 ||g||_2, ||g||_1 ||f||_2).
pub fn q0_plus_bound_trios(n_trios: usize, seed: u64) -> Check {
    let grid = VelocityGrid::new(15.0, 256).unwrap();
    let p = CollisionParams::maxwell();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst_slack = f64::INFINITY;
    for _ in 0..n_trios {
        let f = random_bump_field(&grid, &mut rng, true);
        let g = random_bump_field(&grid, &mut rng, true);
        let h = random_bump_field(&grid, &mut rng, true);
        let qp = q_plus(&f, &g, &p).unwrap();
        let lhs = grid.spacing()
            * qp.samples()
                .iter()
                .zip(h.samples())
                .map(|(a, b)| a * b)
                .sum::<f64>();
        let rhs = 2f64.sqrt()
            * l2_norm(&h)
            * (f.quadrature() * l2_norm(&g)).min(g.quadrature() * l2_norm(&f));
        worst_slack = worst_slack.min(rhs - lhs);
        if lhs > rhs * (1.0 + 1e-9) {
            return Check::new(
                "q0_plus_bound",
                false,
                format!("violated: lhs {lhs} > rhs {rhs}"),
            );
        }
    }
    Check::new(
        "q0_plus_bound",
        true,
        format!("{n_trios} trios, smallest slack {worst_slack:.3e}"),
    )
}

/// L1(w_a) interpolation with the explicit Hoelder constant:
/// ||f||_{L1(w_a)} <= C ||f||_2^alpha ||f||_{L1(w_a*)}^{1-alpha}.
pub fn l1_l2_interpolation(n_fields: usize, seed: u64) -> Check {
    let (a, a_star, alpha) = (2.2, 2.8, 0.1);
    // C = (int (1+|x|)^{(2a - 2 a*(1-alpha))/alpha} dx)^{alpha/2}; the
    // exponent is -6.4, so the integral is 2/5.4.
    let expo = (2.0 * a - 2.0 * a_star * (1.0 - alpha)) / alpha;
    let integral = grainkin::oracle::integrate_line(|x| (1.0 + x.abs()).powf(expo), 1 << 15);
    let c = integral.powf(alpha / 2.0);
    let grid = VelocityGrid::new(30.0, 512).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst_ratio = 0.0f64;
    for _ in 0..n_fields {
        let f = random_bump_field(&grid, &mut rng, false);
        let lhs = weighted_norm(&f, a);
        let rhs = c * l2_norm(&f).powf(alpha) * weighted_norm(&f, a_star).powf(1.0 - alpha);
        worst_ratio = worst_ratio.max(lhs / rhs);
        if lhs > rhs * (1.0 + 1e-9) {
            return Check::new(
                "l1_l2_interpolation",
                false,
                format!("violated: lhs {lhs} > rhs {rhs}"),
            );
        }
    }
    Check::new(
        "l1_l2_interpolation",
        true,
        format!("{n_fields} fields, worst lhs/rhs {worst_ratio:.4}"),
    )
}

/// Barrier propagation: |phi0| <= Phi(a xi) implies |phi(t)| <= Phi(a xi).
pub fn barrier_propagation() -> Check {
    let grid = FrequencyGrid::with_default_floor(40.0, 2048).unwrap();
    let stepper = FourierStepper::new(&grid, 0.02, FlowKind::Nonlinear).unwrap();
    let mut psi: Vec<Complex64> = grid
        .nodes()
        .map(|xi| Complex64::new((-0.5 * xi * xi).exp() - equilibrium_phi(xi), 0.0))
        .collect();
    let mut worst = 0.0f64;
    for step in 1..=500 {
        stepper.step_psi(&mut psi);
        if step % 25 == 0 {
            let ratio = grid
                .nodes()
                .zip(&psi)
                .fold(0.0f64, |m, (xi, v)| {
                    m.max((v + equilibrium_phi(xi)).norm() / equilibrium_phi(xi))
                });
            worst = worst.max(ratio);
        }
    }
    Check::new(
        "barrier_propagation",
        worst <= 1.0 + 1e-4,
        format!("max ratio {worst:.8} over t in [0,10]"),
    )
}

/// Proposition diff_Q direction: ||Q_0(f,g) - Q_gamma(f,g)||_{L1(w_a)} -> 0
/// monotonically (within noise) as gamma -> 0.
pub fn diff_q_direction() -> Check {
    let grid = VelocityGrid::new(20.0, 1024).unwrap();
    let f = Field::sample(&grid, |x| (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt());
    let g = Field::sample(&grid, |x| {
        ((-0.5 * (x - 0.5) * (x - 0.5)).exp() + (-0.5 * (x + 0.5) * (x + 0.5)).exp()) / 2.0
    });
    let q0 = {
        let p = CollisionParams::maxwell();
        q_plus(&f, &g, &p)
            .unwrap()
            .lin_comb(1.0, &q_minus(&f, &g, &p).unwrap(), -1.0)
            .unwrap()
    };
    let mut prev = f64::INFINITY;
    let mut values = Vec::new();
    for gamma in [0.2, 0.1, 0.05, 0.025] {
        let p = CollisionParams::new(gamma, 0.25).unwrap();
        let qg = q_plus(&f, &g, &p)
            .unwrap()
            .lin_comb(1.0, &q_minus(&f, &g, &p).unwrap(), -1.0)
            .unwrap();
        let d = weighted_norm(&q0.lin_comb(1.0, &qg, -1.0).unwrap(), 2.5);
        values.push(d);
        if d > prev * 1.02 {
            return Check::new(
                "diff_q_direction",
                false,
                format!("not monotone: {values:?}"),
            );
        }
        prev = d;
    }
    Check::new("diff_q_direction", true, format!("distances {values:?}"))
}

/// Transform round trip on band-limited data.
pub fn transform_round_trip() -> Check {
    let vg = VelocityGrid::new(30.0, 1024).unwrap();
    let fg = FrequencyGrid::with_default_floor(25.0, 2048).unwrap();
    let f = Field::sample(&vg, |x| (-x * x).exp() * (1.0 + 0.2 * (2.0 * x).cos()));
    let back = to_physical(&to_spectral(&f, &fg), &vg);
    let worst = f
        .samples()
        .iter()
        .zip(back.samples())
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    Check::new(
        "transform_round_trip",
        worst <= 1e-8,
        format!("max error {worst:.3e}"),
    )
}

/// Strang splitting converges at 2nd order globally.
pub fn splitting_order() -> Check {
    let grid = VelocityGrid::new(30.0, 1024).unwrap();
    let p = CollisionParams::maxwell();
    let f = Field::sample(&grid, |x| {
        (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt()
    });
    let opts = EvolveOptions {
        frame_interval: 1.0,
        recenter_momentum: false,
        renormalize_mass: false,
        check_positivity: false,
    };
    let run = |dt: f64| evolve(&f, &p, 1.0, dt, &opts).unwrap().last_frame().clone();
    let (a, b, c) = (run(0.1), run(0.05), run(0.025));
    let ratio = a.l1_distance(&b).unwrap() / b.l1_distance(&c).unwrap();
    Check::new(
        "splitting_order",
        (3.5..=4.5).contains(&ratio),
        format!("Richardson ratio {ratio:.3}"),
    )
}

/// Conservation of the weak form: phi = 1 and phi = x annihilate it.
pub fn weak_conservation() -> Check {
    let grid = VelocityGrid::new(15.0, 512).unwrap();
    let f = Field::sample(&grid, |x| (-x * x).exp());
    let mut worst = 0.0f64;
    for gamma in [0.0, 0.3, 0.8] {
        let p = CollisionParams::new(gamma, 0.25).unwrap();
        worst = worst.max(
            grainkin::collision::weak_apply(&f, &f, |_| 1.0, &p)
                .unwrap()
                .abs(),
        );
        worst = worst.max(
            grainkin::collision::weak_apply(&f, &f, |x| x, &p)
                .unwrap()
                .abs(),
        );
    }
    Check::new(
        "weak_conservation",
        worst <= 1e-10,
        format!("largest residual {worst:.3e}"),
    )
}

/// (k,p)-norm contraction under the nonlinear flow for (2.8,2) and (3.0,2).
pub fn kp_contraction() -> Check {
    let grid = FrequencyGrid::with_default_floor(60.0, 8192).unwrap();
    let stepper = FourierStepper::new(&grid, 0.01, FlowKind::Nonlinear).unwrap();
    let mut psi: Vec<Complex64> = grid
        .nodes()
        .map(|xi| Complex64::new((-0.5 * xi * xi).exp() - equilibrium_phi(xi), 0.0))
        .collect();
    let pairs = [(2.8, 2.0), (3.0, 2.0)];
    let state = |psi: &[Complex64]| SpectralState::new(grid.clone(), psi.to_vec()).unwrap();
    let n0: Vec<f64> = pairs
        .iter()
        .map(|&(k, p)| fourier_norm_kp(&state(psi.as_slice()), k, p).unwrap())
        .collect();
    let mut worst = 0.0f64;
    for step in 1..=1500 {
        stepper.step_psi(&mut psi);
        if step % 50 == 0 {
            let t = 0.01 * step as f64;
            let s = state(psi.as_slice());
            for (i, &(k, p)) in pairs.iter().enumerate() {
                let v = fourier_norm_kp(&s, k, p).unwrap();
                worst = worst.max(v / ((-sigma_kp(k, p) * t).exp() * n0[i]));
            }
        }
    }
    Check::new(
        "kp_contraction",
        worst <= 1.05,
        format!("worst envelope ratio {worst:.4} over t in [0,15]"),
    )
}

/// Scaling invariance: a run with energy E compared against Phi(sqrt(E) xi)
/// reproduces lambda^k times the normalized run's norms.
pub fn scaling_invariance() -> Check {
    let e = 2.0f64;
    let lam = e.sqrt();
    let m = 4096;
    let xi_max_a = 40.0;
    // Run A: energy-E Gaussian on [0, xi_max_a], deviation from Phi(lam xi).
    let grid_a = FrequencyGrid::new(xi_max_a, m, 0.05).unwrap();
    let opts_a = StepperOptions {
        pin_radius: 0.02,
        window_hi: 0.25,
        reference_scale: lam,
    };
    let stepper_a =
        FourierStepper::with_options(&grid_a, 0.01, FlowKind::Nonlinear, &opts_a).unwrap();
    let mut psi_a: Vec<Complex64> = grid_a
        .nodes()
        .map(|xi| Complex64::new((-0.5 * e * xi * xi).exp() - equilibrium_phi(lam * xi), 0.0))
        .collect();
    // Run B: normalized Gaussian on the dilated grid with dilated radii.
    let grid_b = FrequencyGrid::new(lam * xi_max_a, m, lam * 0.05).unwrap();
    let opts_b = StepperOptions {
        pin_radius: lam * 0.02,
        window_hi: lam * 0.25,
        reference_scale: 1.0,
    };
    let stepper_b =
        FourierStepper::with_options(&grid_b, 0.01, FlowKind::Nonlinear, &opts_b).unwrap();
    let mut psi_b: Vec<Complex64> = grid_b
        .nodes()
        .map(|xi| Complex64::new((-0.5 * xi * xi).exp() - equilibrium_phi(xi), 0.0))
        .collect();
    let mut worst_rel = 0.0f64;
    for step in 1..=1000 {
        stepper_a.step_psi(&mut psi_a);
        stepper_b.step_psi(&mut psi_b);
        if step % 100 == 0 {
            for k in [2.2, 2.5, 2.8] {
                let na = fourier_norm_k(
                    &SpectralState::new(grid_a.clone(), psi_a.clone()).unwrap(),
                    k,
                )
                .value;
                let nb = fourier_norm_k(
                    &SpectralState::new(grid_b.clone(), psi_b.clone()).unwrap(),
                    k,
                )
                .value;
                // |phi_E(t) - H_lam|_k = lam^k |phi(t) - Phi|_k.
                let rel = (na - lam.powf(k) * nb).abs() / na.max(1e-300);
                worst_rel = worst_rel.max(rel);
            }
        }
    }
    Check::new(
        "scaling_invariance",
        worst_rel <= 1e-6,
        format!("worst relative identity gap {worst_rel:.3e} over t in [0,10]"),
    )
}

/// Lemma-direction checks: transforms of three-moment-free data have finite
/// k- and (k,p)-norms with the divergence probe silent.
pub fn moment_free_norms() -> Check {
    let vg = VelocityGrid::new(40.0, 2048).unwrap();
    let basis = ProjectionBasis::new(&vg);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let fg = FrequencyGrid::with_default_floor(30.0, 2048).unwrap();
    for _ in 0..5 {
        let f = random_bump_field(&vg, &mut rng, false);
        let y = project_y0(&basis, &f).unwrap();
        let spec = to_spectral(&y, &fg);
        for k in [2.2, 2.5, 2.8] {
            let n = fourier_norm_k(&spec, k);
            if !n.value.is_finite() || n.divergent {
                return Check::new(
                    "moment_free_norms",
                    false,
                    format!("k={k}: value {} divergent={}", n.value, n.divergent),
                );
            }
        }
        let kp = fourier_norm_kp(&spec, 2.5, 2.0).unwrap();
        if !kp.is_finite() {
            return Check::new("moment_free_norms", false, "kp-norm infinite".into());
        }
    }
    // The Gaussian-vs-H pair of lem:mukvertkp: finite (2.5,2)-norm.
    let g = Field::sample(&vg, |x| (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt());
    let spec = to_spectral(&g, &fg).deviation_from_equilibrium();
    let v = fourier_norm_kp(&spec, 2.5, 2.0).unwrap();
    Check::new(
        "moment_free_norms",
        v.is_finite(),
        format!("Gaussian-vs-H (2.5,2)-norm {v:.4}"),
    )
}

/// Steady residual of H itself shrinks under refinement (Theorem theo:bob in
/// its strong form).
pub fn h_steady_refinement() -> Check {
    let p = CollisionParams::maxwell();
    let res = |n: usize| {
        let g = VelocityGrid::new(200.0, n).unwrap();
        let h = Field::sample(&g, maxwell_h);
        let r = grainkin::selfsim::rhs_selfsim(&h, &p).unwrap();
        g.spacing() * r.samples().iter().map(|v| v.abs()).sum::<f64>()
    };
    let coarse = res(4096);
    let fine = res(8192);
    Check::new(
        "h_steady_refinement",
        fine < coarse * 0.25 && fine < 2e-5,
        format!("L1 residual {coarse:.3e} -> {fine:.3e}"),
    )
}

/// Role of I_0 (lem:roleI0 probe): for h = phi_0 + t y with y in Y_a^0, the
/// deviation of I_0(h, G_0) from (M_2(h)/M_2(phi_0)) I_0(phi_0, G_0) is O(t).
pub fn role_i0_probe() -> Check {
    let vg = VelocityGrid::new(60.0, 1024).unwrap();
    let basis = ProjectionBasis::new(&vg);
    let g0 = Field::sample(&vg, g0_profile);
    let p0 = Field::sample(&vg, phi0);
    let i0_p0 = i0_functional(&p0, &g0).unwrap();
    let m2_p0 = moment(&p0, 2.0);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let y = project_y0(&basis, &random_bump_field(&vg, &mut rng, false)).unwrap();
    let slope_scale = i0_functional(&y, &g0).unwrap().abs()
        + (moment(&y, 2.0) / m2_p0 * i0_p0).abs()
        + 1.0;
    let mut worst = 0.0f64;
    for t in [1e-2, 1e-3] {
        let h = p0.lin_comb(1.0, &y, t).unwrap();
        let lhs = i0_functional(&h, &g0).unwrap();
        let pred = moment(&h, 2.0) / m2_p0 * i0_p0;
        let dev = (lhs - pred).abs();
        worst = worst.max(dev / (t * slope_scale));
        if dev > 2.0 * t * slope_scale {
            return Check::new(
                "role_i0_probe",
                false,
                format!("t={t}: deviation {dev} exceeds O(t) bound"),
            );
        }
    }
    Check::new(
        "role_i0_probe",
        true,
        format!("deviation / (t * scale) <= {worst:.3}"),
    )
}

/// Positivity of probability-like evolutions is monitored and holds.
pub fn positivity_monitor() -> Check {
    let grid = VelocityGrid::new(30.0, 1024).unwrap();
    let p = CollisionParams::new(0.2, 0.25).unwrap();
    let f = Field::sample(&grid, |x| {
        (-0.5 * x * x / 0.15).exp() / (2.0 * std::f64::consts::PI * 0.15).sqrt()
    });
    match evolve(&f, &p, 5.0, 0.05, &EvolveOptions::default()) {
        Ok(traj) => {
            let min = traj
                .frames
                .iter()
                .map(|fr| fr.min_sample())
                .fold(f64::INFINITY, f64::min);
            Check::new(
                "positivity",
                min >= -1e-8,
                format!("min sample {min:.3e} over t in [0,5]"),
            )
        }
        Err(e) => Check::new("positivity", false, format!("evolve failed: {e}")),
    }
}

/// Full moment report sanity on a known density.
pub fn moment_report_sanity() -> Check {
    let grid = VelocityGrid::new(200.0, 16384).unwrap();
    let h = Field::sample(&grid, maxwell_h);
    let r = moment_report(&h, &[1.0], &[2.0]);
    let ok = (r.mass - 1.0).abs() < 1e-5
        && r.momentum.abs() < 1e-8
        && (r.energy - 1.0).abs() < 7e-3
        && (r.fractional[0].1 - 2.0 / std::f64::consts::PI).abs() < 1e-4
        && (r.weighted[0].1 - (2.0 + 4.0 / std::f64::consts::PI)).abs() < 8e-3;
    Check::new(
        "moment_report",
        ok,
        format!(
            "mass {:.6}, energy {:.4}, M1 {:.6}",
            r.mass, r.energy, r.fractional[0].1
        ),
    )
}
