//! Reproducible experiment drivers.
//!
//! Each driver returns a structured report (key/value rows with provenance
//! and optional pass/fail) plus an optional time series; the CLI renders
//! these to CSV, and the acceptance suite asserts on them directly.

use crate::collision::{
    self, i_gamma_functional, moment, pair_moment, weighted_norm, CollisionParams,
};
use crate::error::Result;
use crate::grid::{Field, FrequencyGrid, VelocityGrid};
use crate::linstab::{self, gap_bound, ProjectionBasis};
use crate::maxwell::{
    fit_decay_rate, fourier_norm_k, sigma_k, to_spectral, FlowKind, FourierStepper, SpectralState,
};
use crate::oracle;
use crate::profiles::{self, equilibrium_phi, lambda0, maxwell_h};
use crate::selfsim::{self, steady_profile, SteadyOptions, SteadyProfile};
use rustfft::num_complex::Complex64;

/// Where a reported value gets its reference from: a paper constant or an
/// independent quadrature oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Paper,
    Oracle,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::Paper => "paper",
            Provenance::Oracle => "oracle",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Row {
    pub key: String,
    pub value: f64,
    pub provenance: Provenance,
    pub pass: Option<bool>,
}

impl Row {
    fn new(key: &str, value: f64, provenance: Provenance) -> Self {
        Self {
            key: key.into(),
            value,
            provenance,
            pass: None,
        }
    }

    fn checked(key: &str, value: f64, provenance: Provenance, pass: bool) -> Self {
        Self {
            key: key.into(),
            value,
            provenance,
            pass: Some(pass),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Series {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Default)]
pub struct ExperimentOutput {
    pub report: Vec<Row>,
    pub series: Series,
}

impl ExperimentOutput {
    pub fn all_passed(&self) -> bool {
        self.report.iter().all(|r| r.pass.unwrap_or(true))
    }

    pub fn value(&self, key: &str) -> Option<f64> {
        self.report.iter().find(|r| r.key == key).map(|r| r.value)
    }

    pub fn passed(&self, key: &str) -> Option<bool> {
        self.report.iter().find(|r| r.key == key).and_then(|r| r.pass)
    }
}

// ---------------------------------------------------------------------------
// constants
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct ConstantsConfig {
    pub l: f64,
    pub n: usize,
    pub xi_max: f64,
    pub m: usize,
    /// Nodes per axis for the whole-line oracle quadratures.
    pub oracle_nodes: usize,
}

impl Default for ConstantsConfig {
    fn default() -> Self {
        Self {
            l: 200.0,
            n: 1 << 14,
            xi_max: 60.0,
            m: 2048,
            oracle_nodes: 8192,
        }
    }
}

/// Verify the explicit constants of the Maxwell theory: A_0 and lambda_0, the
/// dissipation functional values on (H, g_0, phi_0), the kernel moments, and
/// the H -> Phi transform.
pub fn constants(cfg: &ConstantsConfig) -> Result<ExperimentOutput> {
    let mut report = Vec::new();
    let n2 = cfg.oracle_nodes;
    let n1 = (cfg.oracle_nodes * 4).max(1 << 15);

    let i0_hh = oracle::i0_whole_line(maxwell_h, maxwell_h, n2);
    let a0 = 0.5 * i0_hh;
    let a0_ref = 2f64.ln() + 0.5;
    report.push(Row::checked(
        "A0",
        a0,
        Provenance::Paper,
        (a0 - a0_ref).abs() <= 0.01 * a0_ref,
    ));
    let lam = a0.exp();
    report.push(Row::checked(
        "lambda0",
        lam,
        Provenance::Paper,
        (lam - lambda0()).abs() <= 0.01 * lambda0(),
    ));
    let i0_ref = 2.0 * 2f64.ln() + 1.0;
    report.push(Row::checked(
        "I0_HH",
        i0_hh,
        Provenance::Paper,
        (i0_hh - i0_ref).abs() <= 0.01 * i0_ref,
    ));

    // The paper states two values for I0(g0, H); the oracle must land within
    // 1% of exactly one of them.
    let i0_g0h = oracle::i0_whole_line(profiles::g0_kernel, maxwell_h, n2);
    let cand_a = -2.0 * 2f64.ln() - 2.0; // eq:g0H
    let cand_b = -2.0 * 2f64.ln() - 5.0; // value used in the rmk:varphi0 proof
    let near_a = (i0_g0h - cand_a).abs() <= 0.01 * cand_a.abs();
    let near_b = (i0_g0h - cand_b).abs() <= 0.01 * cand_b.abs();
    report.push(Row::checked(
        "I0_g0H",
        i0_g0h,
        Provenance::Oracle,
        near_a ^ near_b,
    ));
    report.push(Row::new(
        "I0_g0H_matches_minus2log2_minus2",
        if near_a { 1.0 } else { 0.0 },
        Provenance::Oracle,
    ));

    let i0_phi0 = oracle::i0_whole_line(profiles::phi0, profiles::g0_profile, n2);
    let lam3 = lambda0().powi(3);
    let induced_a = -1.0 / lam3;
    let induced_b = -4.0 / lam3;
    let phi0_near_a = (i0_phi0 - induced_a).abs() <= 0.01 * induced_a.abs();
    let phi0_near_b = (i0_phi0 - induced_b).abs() <= 0.01 * induced_b.abs();
    report.push(Row::checked(
        "I0_phi0_G0",
        i0_phi0,
        Provenance::Oracle,
        phi0_near_a ^ phi0_near_b,
    ));
    report.push(Row::new(
        "I0_phi0_G0_matches_minus1_over_lambda0_cubed",
        if phi0_near_a { 1.0 } else { 0.0 },
        Provenance::Oracle,
    ));

    // Kernel moments of g0.
    let m0_g0 = oracle::integrate_line(profiles::g0_kernel, n1);
    let m2_g0 = oracle::integrate_line(|x| profiles::g0_kernel(x) * x * x, n1);
    let logm = oracle::integrate_line(
        |x| {
            if x == 0.0 {
                0.0
            } else {
                profiles::g0_kernel(x) * x * x * x.abs().ln()
            }
        },
        n1,
    );
    report.push(Row::checked("g0_mass", m0_g0, Provenance::Paper, m0_g0.abs() <= 1e-6));
    report.push(Row::checked(
        "g0_m2",
        m2_g0,
        Provenance::Paper,
        (m2_g0 + 2.0).abs() <= 1e-4,
    ));
    report.push(Row::checked(
        "g0_x2log_moment",
        logm,
        Provenance::Paper,
        (logm + 3.0).abs() <= 1e-3,
    ));

    // Grid-quadrature values at the pinned resolution, for comparison with
    // the oracle route (the |x-y|^2 log kernel has log(x)/x^2 tails, so the
    // truncated values carry a visible deficit).
    let vg = VelocityGrid::new(cfg.l, cfg.n)?;
    let h_field = Field::sample(&vg, maxwell_h);
    // The full N^2 double sum at N = 2^14 costs minutes; a half-resolution
    // field carries the same tail deficit, which is what the row documents.
    let vg_half = VelocityGrid::new(cfg.l, (cfg.n / 2).max(8))?;
    let h_half = Field::sample(&vg_half, maxwell_h);
    let i0_grid = collision::i0_functional(&h_half, &h_half)?;
    report.push(Row::new("I0_HH_grid_truncated", i0_grid, Provenance::Oracle));

    // H -> Phi at the pinned grid.
    let fg = FrequencyGrid::with_default_floor(cfg.xi_max, cfg.m)?;
    let spectral = to_spectral(&h_field, &fg);
    let h_to_phi_err = fg
        .nodes()
        .zip(spectral.values())
        .fold(0.0f64, |worst, (xi, v)| {
            worst.max((v - Complex64::new(equilibrium_phi(xi), 0.0)).norm())
        });
    report.push(Row::checked(
        "h_to_phi_max_err",
        h_to_phi_err,
        Provenance::Paper,
        h_to_phi_err <= 1e-4,
    ));

    Ok(ExperimentOutput {
        report,
        series: Series::default(),
    })
}

// ---------------------------------------------------------------------------
// maxwell-fourier
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct MaxwellFourierConfig {
    pub m: usize,
    pub xi_max: f64,
    pub dt: f64,
    pub t_end: f64,
    pub k_list: Vec<f64>,
    pub frame_interval: f64,
    /// Envelope slack (1 + eps_grid) allowed in the contraction checks.
    pub envelope_slack: f64,
}

impl Default for MaxwellFourierConfig {
    fn default() -> Self {
        Self {
            m: 8192,
            xi_max: 60.0,
            dt: 0.01,
            t_end: 50.0,
            k_list: vec![2.2, 2.5, 2.8],
            frame_interval: 0.5,
            envelope_slack: 1.05,
        }
    }
}

fn psi_state(grid: &FrequencyGrid, psi: &[Complex64]) -> SpectralState {
    SpectralState::new(grid.clone(), psi.to_vec()).expect("lengths match")
}

/// Nonlinear contraction run from the Gaussian transform, plus the
/// linearized harness (contraction from moment-free data and psi_0
/// stationarity).
pub fn maxwell_fourier(cfg: &MaxwellFourierConfig) -> Result<ExperimentOutput> {
    let grid = FrequencyGrid::with_default_floor(cfg.xi_max, cfg.m)?;
    let stepper = FourierStepper::new(&grid, cfg.dt, FlowKind::Nonlinear)?;
    let mut psi: Vec<Complex64> = grid
        .nodes()
        .map(|xi| Complex64::new((-0.5 * xi * xi).exp() - equilibrium_phi(xi), 0.0))
        .collect();

    let norms0: Vec<f64> = cfg
        .k_list
        .iter()
        .map(|&k| fourier_norm_k(&psi_state(&grid, &psi), k).value)
        .collect();
    let e0 = stepper.energy_of_psi(&psi);

    let mut columns = vec!["t".to_string()];
    for &k in &cfg.k_list {
        columns.push(format!("knorm_{k}"));
    }
    columns.push("barrier_ratio".into());
    columns.push("energy".into());
    let mut series = Series {
        columns,
        rows: Vec::new(),
    };

    let record =
        |series: &mut Series, t: f64, psi: &[Complex64], worst: &mut Vec<f64>| {
            let state = psi_state(&grid, psi);
            let mut row = vec![t];
            for (i, &k) in cfg.k_list.iter().enumerate() {
                let v = fourier_norm_k(&state, k).value;
                row.push(v);
                let envelope = (-sigma_k(k) * t).exp() * norms0[i];
                worst[i] = worst[i].max(v / envelope);
            }
            // Barrier a=1 is valid for the Gaussian initial transform.
            let barrier = grid
                .nodes()
                .zip(psi)
                .fold(0.0f64, |m, (xi, v)| {
                    m.max((v + equilibrium_phi(xi)).norm() / equilibrium_phi(xi))
                });
            row.push(barrier);
            row.push(stepper.energy_of_psi(psi));
            series.rows.push(row);
        };

    let steps_per_frame = (cfg.frame_interval / cfg.dt).round().max(1.0) as usize;
    let total = (cfg.t_end / cfg.dt).round() as usize;
    let mut worst = vec![0.0; cfg.k_list.len()];
    let mut sigma_series: Vec<(f64, f64)> = Vec::new();
    record(&mut series, 0.0, &psi, &mut worst);
    if let Some(i25) = cfg.k_list.iter().position(|&k| (k - 2.5).abs() < 1e-12) {
        sigma_series.push((0.0, norms0[i25]));
    }
    for step in 1..=total {
        stepper.step_psi(&mut psi);
        if step % steps_per_frame == 0 || step == total {
            let t = step as f64 * cfg.dt;
            record(&mut series, t, &psi, &mut worst);
            let state = psi_state(&grid, &psi);
            sigma_series.push((t, fourier_norm_k(&state, 2.5).value));
        }
    }

    let mut report = Vec::new();
    for (i, &k) in cfg.k_list.iter().enumerate() {
        report.push(Row::checked(
            &format!("contraction_max_ratio_{k}"),
            worst[i],
            Provenance::Paper,
            worst[i] <= cfg.envelope_slack,
        ));
    }
    let fit = fit_decay_rate(&sigma_series)?;
    report.push(Row::checked(
        "sigma_hat_2.5",
        fit.rate,
        Provenance::Paper,
        fit.rate >= 0.7 * sigma_k(2.5),
    ));
    let barrier_max = series
        .rows
        .iter()
        .map(|r| r[1 + cfg.k_list.len()])
        .fold(0.0f64, f64::max);
    report.push(Row::checked(
        "barrier_max_ratio",
        barrier_max,
        Provenance::Paper,
        barrier_max <= 1.0 + 1e-4,
    ));
    let e_end = series.rows.last().map(|r| r[2 + cfg.k_list.len()]).unwrap_or(e0);
    report.push(Row::new(
        "energy_drift_reported",
        (e_end - e0).abs(),
        Provenance::Oracle,
    ));

    // Linearized harness: contraction from moment-free data over [0, 20].
    let lin = FourierStepper::new(&grid, cfg.dt, FlowKind::Linearized)?;
    let mut lpsi: Vec<Complex64> = grid
        .nodes()
        .map(|xi| Complex64::new((-0.5 * xi * xi).exp() - equilibrium_phi(xi), 0.0))
        .collect();
    let lnorm0: Vec<f64> = cfg
        .k_list
        .iter()
        .map(|&k| fourier_norm_k(&psi_state(&grid, &lpsi), k).value)
        .collect();
    let lin_total = (20f64.min(cfg.t_end) / cfg.dt).round() as usize;
    let mut lworst = vec![0.0f64; cfg.k_list.len()];
    for step in 1..=lin_total {
        lin.step_psi(&mut lpsi);
        if step % steps_per_frame == 0 || step == lin_total {
            let t = step as f64 * cfg.dt;
            let state = psi_state(&grid, &lpsi);
            for (i, &k) in cfg.k_list.iter().enumerate() {
                let envelope = (-sigma_k(k) * t).exp() * lnorm0[i];
                lworst[i] = lworst[i].max(fourier_norm_k(&state, k).value / envelope);
            }
        }
    }
    for (i, &k) in cfg.k_list.iter().enumerate() {
        report.push(Row::checked(
            &format!("linearized_max_ratio_{k}"),
            lworst[i],
            Provenance::Paper,
            lworst[i] <= cfg.envelope_slack,
        ));
    }

    // psi_0 stationarity over [0, 10].
    let psi0_init: Vec<Complex64> = grid
        .nodes()
        .map(|xi| Complex64::new(profiles::psi0(xi), 0.0))
        .collect();
    let mut p = psi0_init.clone();
    let psi0_total = (10f64 / cfg.dt).round() as usize;
    for _ in 0..psi0_total {
        lin.step_psi(&mut p);
    }
    let drift = p
        .iter()
        .zip(&psi0_init)
        .fold(0.0f64, |m, (a, b)| m.max((a - b).norm()));
    report.push(Row::checked(
        "psi0_max_drift",
        drift,
        Provenance::Paper,
        drift <= 1e-5,
    ));

    Ok(ExperimentOutput { report, series })
}

// ---------------------------------------------------------------------------
// maxwell-physical
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct MaxwellPhysicalConfig {
    pub l: f64,
    pub n: usize,
    pub dt: f64,
    pub t_end: f64,
    pub xi_max: f64,
    pub m: usize,
    /// Also run at (2L, 2N) and check that the energy drift roughly halves.
    pub check_drift_halving: bool,
}

impl Default for MaxwellPhysicalConfig {
    fn default() -> Self {
        Self {
            l: 200.0,
            n: 1 << 14,
            dt: 0.01,
            t_end: 50.0,
            xi_max: 60.0,
            m: 1024,
            check_drift_halving: true,
        }
    }
}

fn unit_gaussian(grid: &VelocityGrid) -> Field {
    // mass 1, momentum 0, energy 1.
    Field::sample(grid, |x| {
        (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt()
    })
}

struct PhysicalRun {
    mass_err: f64,
    momentum_err: f64,
    m2_drift: f64,
    dissipation_rel_err: f64,
    sigma_hat: f64,
    traj_len: usize,
}

fn run_physical(cfg: &MaxwellPhysicalConfig, l: f64, n: usize) -> Result<PhysicalRun> {
    let grid = VelocityGrid::new(l, n)?;
    let p = CollisionParams::maxwell();
    let g0 = unit_gaussian(&grid);
    let opts = selfsim::EvolveOptions {
        frame_interval: 1.0,
        ..Default::default()
    };
    let traj = selfsim::evolve(&g0, &p, cfg.t_end, cfg.dt, &opts)?;
    let r0 = &traj.reports[0];
    let mut mass_err = 0.0f64;
    let mut momentum_err = 0.0f64;
    let mut m2_drift = 0.0f64;
    for r in &traj.reports {
        mass_err = mass_err.max((r.mass - r0.mass).abs());
        momentum_err = momentum_err.max(r.momentum.abs());
        m2_drift = m2_drift.max((r.energy - r0.energy).abs() / r0.energy);
    }
    // Dissipation identity on early frames: quadrature(x^2 rhs) against
    // 2 c M_2 - (1/4) iint g g |x-y|^2 computed by the pair quadrature.
    let mut dissipation_rel_err = 0.0f64;
    for idx in 1..=3.min(traj.frames.len() - 1) {
        let g = &traj.frames[idx];
        let rhs = selfsim::rhs_selfsim(g, &p)?;
        let lhs = grid.spacing()
            * rhs
                .samples()
                .iter()
                .enumerate()
                .map(|(j, v)| v * grid.node(j) * grid.node(j))
                .sum::<f64>();
        let m2_term = 2.0 * p.c * moment(g, 2.0);
        let pair_term = 0.25 * pair_moment(g, g, 2.0)?;
        let orc = m2_term - pair_term;
        // Energy is conserved at c = 1/4, so the net production is ~0; the
        // identity is checked relative to the scale of its two terms.
        dissipation_rel_err =
            dissipation_rel_err.max((lhs - orc).abs() / (m2_term.abs() + pair_term.abs()));
    }
    // Fourier cross-validation: the 2.5-norm of the transform decays at a
    // rate of at least 0.7 sigma_2.5.
    let fg = FrequencyGrid::with_default_floor(cfg.xi_max, cfg.m)?;
    let mut sig_series = Vec::new();
    for (idx, g) in traj.frames.iter().enumerate() {
        if idx % 2 == 0 {
            let spec = to_spectral(g, &fg).deviation_from_equilibrium();
            sig_series.push((traj.times[idx], fourier_norm_k(&spec, 2.5).value));
        }
    }
    let sigma_hat = fit_decay_rate(&sig_series)?.rate;
    Ok(PhysicalRun {
        mass_err,
        momentum_err,
        m2_drift,
        dissipation_rel_err,
        sigma_hat,
        traj_len: traj.frames.len(),
    })
}

/// Physical-space Maxwell run: conservation, energy drift, dissipation
/// identity, Fourier cross-validation, and the truncation-dominance probe.
pub fn maxwell_physical(cfg: &MaxwellPhysicalConfig) -> Result<ExperimentOutput> {
    let run = run_physical(cfg, cfg.l, cfg.n)?;
    let mut report = vec![
        Row::checked(
            "mass_max_err",
            run.mass_err,
            Provenance::Paper,
            run.mass_err <= 1e-8,
        ),
        Row::checked(
            "momentum_max_err",
            run.momentum_err,
            Provenance::Paper,
            run.momentum_err <= 1e-8,
        ),
        Row::checked(
            "m2_max_drift",
            run.m2_drift,
            Provenance::Paper,
            run.m2_drift <= 0.02,
        ),
        Row::checked(
            "dissipation_rel_err",
            run.dissipation_rel_err,
            Provenance::Oracle,
            run.dissipation_rel_err <= 1e-6,
        ),
        Row::checked(
            "sigma_hat_2.5",
            run.sigma_hat,
            Provenance::Paper,
            run.sigma_hat >= 0.7 * sigma_k(2.5),
        ),
        Row::new("frames", run.traj_len as f64, Provenance::Oracle),
    ];
    if cfg.check_drift_halving {
        let wide = run_physical(cfg, 2.0 * cfg.l, 2 * cfg.n)?;
        report.push(Row::new("m2_max_drift_2l", wide.m2_drift, Provenance::Paper));
        report.push(Row::checked(
            "m2_drift_halving_ratio",
            wide.m2_drift / run.m2_drift.max(1e-30),
            Provenance::Paper,
            wide.m2_drift <= 0.75 * run.m2_drift,
        ));
    }
    Ok(ExperimentOutput {
        report,
        series: Series::default(),
    })
}

// ---------------------------------------------------------------------------
// profile and the temperature sweep
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct ProfileConfig {
    pub gamma_list: Vec<f64>,
    pub tol: f64,
    pub l: f64,
    pub n: usize,
    pub dt: f64,
    pub max_time: f64,
    /// Recompute the gamma-first profile at N/2 and compare the pointwise
    /// peak for refinement stability.
    pub check_refinement: bool,
}

impl Default for ProfileConfig {
    fn default() -> Self {
        Self {
            gamma_list: vec![0.1],
            tol: 1e-4,
            l: 40.0,
            // The steady profiles live on the lambda_0 ~ 3.3 scale; the
            // 4th-order residual stencil needs h ~ 0.02 before its own error
            // falls safely below the 1e-4 residual tolerance.
            n: 4096,
            dt: 0.05,
            max_time: 1200.0,
            check_refinement: true,
        }
    }
}

/// Gaussian initial datum used by the profile runs; energy near the expected
/// limit 1/(4e) keeps the transient short.
pub fn profile_seed(grid: &VelocityGrid) -> Field {
    let sigma2 = 0.1;
    Field::sample(grid, |x| {
        (-0.5 * x * x / sigma2).exp() / (2.0 * std::f64::consts::PI * sigma2).sqrt()
    })
}

/// Symmetrized bimodal datum for the uniqueness probe.
pub fn bimodal_seed(grid: &VelocityGrid) -> Field {
    let (x0, s2) = (0.4, 0.032);
    let norm = 2.0 * (2.0 * std::f64::consts::PI * s2).sqrt();
    Field::sample(grid, |x| {
        ((-0.5 * (x - x0) * (x - x0) / s2).exp() + (-0.5 * (x + x0) * (x + x0) / s2).exp()) / norm
    })
}

fn profile_rows(
    gp: &SteadyProfile,
    tol: f64,
    suffix: &str,
    report: &mut Vec<Row>,
) -> Result<()> {
    report.push(Row::checked(
        &format!("residual{suffix}"),
        gp.residual,
        Provenance::Paper,
        gp.residual < tol,
    ));
    let m2 = moment(&gp.field, 2.0);
    report.push(Row::checked(
        &format!("m2{suffix}"),
        m2,
        Provenance::Paper,
        m2 > 0.0 && m2 <= 0.5,
    ));
    report.push(Row::new(&format!("lambda_gamma{suffix}"), gp.lambda, Provenance::Paper));
    let ig = i_gamma_functional(&gp.field, &gp.field, gp.gamma)?;
    report.push(Row::checked(
        &format!("i_gamma{suffix}"),
        ig,
        Provenance::Paper,
        ig.abs() <= 1e-3,
    ));
    // Pointwise bound max |x| G <= 8 ||G||_{L1(w_gamma)} C_interp, C_interp <= 2.
    let grid = gp.field.grid();
    let peak = gp
        .field
        .samples()
        .iter()
        .enumerate()
        .fold(0.0f64, |m, (j, v)| m.max((grid.node(j) * v).abs()));
    let bound = 16.0 * weighted_norm(&gp.field, gp.gamma);
    report.push(Row::checked(
        &format!("pointwise_peak{suffix}"),
        peak,
        Provenance::Paper,
        peak.is_finite() && peak <= bound,
    ));
    // Jensen probe of eq:frequency, reported but never asserted: the largest
    // Sigma_gamma(y) / |y|^gamma over |y| >= 1.
    let sigma = collision::collision_freq(&gp.field, gp.gamma)?;
    let jensen = sigma
        .samples()
        .iter()
        .enumerate()
        .filter(|(j, _)| grid.node(*j).abs() >= 1.0)
        .fold(0.0f64, |m, (j, v)| {
            m.max(v / grid.node(j).abs().powf(gp.gamma))
        });
    report.push(Row::new(
        &format!("jensen_max_ratio{suffix}"),
        jensen,
        Provenance::Oracle,
    ));
    Ok(())
}

/// Steady profiles for each gamma in the list, with the temperature-sweep
/// trend when more than one gamma is given.
pub fn profile(cfg: &ProfileConfig) -> Result<ExperimentOutput> {
    let grid = VelocityGrid::new(cfg.l, cfg.n)?;
    let opts = SteadyOptions {
        dt: cfg.dt,
        max_time: cfg.max_time,
        ..Default::default()
    };
    let mut report = Vec::new();
    let mut lambdas = Vec::new();
    let mut first_profile: Option<SteadyProfile> = None;
    for &gamma in &cfg.gamma_list {
        let p = CollisionParams::with_gamma(gamma)?;
        let gp = steady_profile(&p, cfg.tol, &profile_seed(&grid), &opts)?;
        let suffix = format!("_gamma_{gamma}");
        profile_rows(&gp, cfg.tol, &suffix, &mut report)?;
        lambdas.push((gamma, gp.lambda));
        if first_profile.is_none() {
            first_profile = Some(gp);
        }
    }
    if lambdas.len() >= 2 {
        // |lambda_gamma - lambda_0| strictly decreasing along decreasing gamma.
        let mut sorted = lambdas.clone();
        sorted.sort_by(|a, b| b.0.total_cmp(&a.0));
        let gaps: Vec<f64> = sorted.iter().map(|(_, l)| (l - lambda0()).abs()).collect();
        let monotone = gaps.windows(2).all(|w| w[1] < w[0]);
        report.push(Row::checked(
            "lambda_trend_strictly_decreasing",
            if monotone { 1.0 } else { 0.0 },
            Provenance::Paper,
            monotone,
        ));
        for ((gamma, lam), gap) in sorted.iter().zip(&gaps) {
            report.push(Row::new(
                &format!("lambda_gap_gamma_{gamma}_{lam:.6}"),
                *gap,
                Provenance::Paper,
            ));
        }
    }
    if cfg.check_refinement {
        if let Some(gp) = &first_profile {
            let coarse_grid = VelocityGrid::new(cfg.l, (cfg.n / 2).max(8))?;
            let p = CollisionParams::with_gamma(gp.gamma)?;
            let coarse = steady_profile(&p, cfg.tol, &profile_seed(&coarse_grid), &opts)?;
            let peak = |f: &Field| {
                f.samples()
                    .iter()
                    .enumerate()
                    .fold(0.0f64, |m, (j, v)| m.max((f.grid().node(j) * v).abs()))
            };
            let fine_peak = peak(&gp.field);
            let coarse_peak = peak(&coarse.field);
            let rel = (fine_peak - coarse_peak).abs() / fine_peak.max(1e-30);
            report.push(Row::checked(
                "pointwise_peak_refinement_rel_gap",
                rel,
                Provenance::Paper,
                rel <= 0.1,
            ));
        }
    }
    Ok(ExperimentOutput {
        report,
        series: Series::default(),
    })
}

// ---------------------------------------------------------------------------
// uniqueness-probe
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct UniquenessConfig {
    pub gamma: f64,
    pub tol: f64,
    pub l: f64,
    pub n: usize,
    pub dt: f64,
    pub max_time: f64,
}

impl Default for UniquenessConfig {
    fn default() -> Self {
        Self {
            gamma: 0.1,
            tol: 1e-4,
            l: 40.0,
            n: 4096,
            dt: 0.05,
            max_time: 1200.0,
        }
    }
}

/// Two distinct admissible initial data must land on the same profile.
pub fn uniqueness_probe(cfg: &UniquenessConfig) -> Result<ExperimentOutput> {
    let grid = VelocityGrid::new(cfg.l, cfg.n)?;
    let p = CollisionParams::with_gamma(cfg.gamma)?;
    // Converge each run beyond the reported tolerance so the gap measures
    // the shared fixed point rather than leftover transients.
    let opts = SteadyOptions {
        dt: cfg.dt,
        max_time: cfg.max_time,
        ..Default::default()
    };
    let inner_tol = 0.3 * cfg.tol;
    let a = steady_profile(&p, inner_tol, &profile_seed(&grid), &opts)?;
    let b = steady_profile(&p, inner_tol, &bimodal_seed(&grid), &opts)?;
    let diff = a.field.lin_comb(1.0, &b.field, -1.0)?;
    let gap = weighted_norm(&diff, 2.5);
    let report = vec![
        Row::new("residual_gaussian", a.residual, Provenance::Paper),
        Row::new("residual_bimodal", b.residual, Provenance::Paper),
        Row::checked(
            "profile_l1wa_gap",
            gap,
            Provenance::Paper,
            gap <= 20.0 * cfg.tol,
        ),
        Row::new("lambda_gaussian", a.lambda, Provenance::Paper),
        Row::new("lambda_bimodal", b.lambda, Provenance::Paper),
    ];
    Ok(ExperimentOutput {
        report,
        series: Series::default(),
    })
}

// ---------------------------------------------------------------------------
// gap
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct GapConfig {
    pub a: f64,
    pub l: f64,
    pub n: usize,
    pub t_end: f64,
    pub dt: f64,
}

impl Default for GapConfig {
    fn default() -> Self {
        Self {
            a: 2.5,
            l: 200.0,
            n: 1 << 14,
            t_end: 100.0,
            dt: 0.05,
        }
    }
}

/// Spectral-gap experiment in L^1(w_a): a projected Gaussian bump must decay
/// at >= 0.7 of the analytic bound; phi_0 must sit still.
pub fn gap(cfg: &GapConfig) -> Result<ExperimentOutput> {
    let grid = VelocityGrid::new(cfg.l, cfg.n)?;
    let basis = ProjectionBasis::new(&grid);
    let bump = Field::sample(&grid, |x| (-2.0 * (x - 1.0) * (x - 1.0)).exp());
    let h0 = linstab::project_y0(&basis, &bump)?;
    let est = linstab::spectral_gap_estimate(cfg.a, &h0, cfg.t_end, cfg.dt)?;
    let phi0_field = Field::sample(&grid, profiles::phi0);
    let est0 = linstab::spectral_gap_estimate(cfg.a, &phi0_field, cfg.t_end, cfg.dt)?;
    let bound = gap_bound(cfg.a);
    let mut series = Series {
        columns: vec!["t".into(), "l1wa_bump".into(), "l1wa_phi0".into()],
        rows: Vec::new(),
    };
    for (i, &(t, v)) in est.series.iter().enumerate() {
        let v0 = est0.series.get(i).map(|&(_, x)| x).unwrap_or(f64::NAN);
        series.rows.push(vec![t, v, v0]);
    }
    let report = vec![
        Row::new("gap_bound", bound, Provenance::Paper),
        Row::checked(
            "nu_hat_bump",
            est.fit.rate,
            Provenance::Paper,
            est.fit.rate >= 0.7 * bound,
        ),
        Row::checked(
            "sigma_hat_phi0",
            est0.fit.rate,
            Provenance::Paper,
            est0.fit.rate.abs() <= 2e-3,
        ),
        Row::new("fit_rms_bump", est.fit.rms_residual, Provenance::Oracle),
    ];
    Ok(ExperimentOutput { report, series })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_pass_at_reduced_resolution() {
        // Oracle-grade quadratures converge fast; a reduced node count keeps
        // this unit test quick while the acceptance suite runs the full one.
        let cfg = ConstantsConfig {
            n: 4096,
            xi_max: 20.0,
            m: 512,
            oracle_nodes: 4096,
            ..Default::default()
        };
        let out = constants(&cfg).unwrap();
        for row in &out.report {
            assert!(
                row.pass.unwrap_or(true),
                "constants row {} = {} failed",
                row.key,
                row.value
            );
        }
        assert_eq!(out.value("I0_g0H_matches_minus2log2_minus2"), Some(1.0));
        assert_eq!(
            out.value("I0_phi0_G0_matches_minus1_over_lambda0_cubed"),
            Some(1.0)
        );
    }
}
