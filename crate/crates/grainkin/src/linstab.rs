//! The linearized operator L_0 around G_0 in physical space, the moment
//! projection P, kernel elements, and spectral-gap measurement in L^1(w_a).

use crate::collision::{moment_report, weighted_norm, CollisionOperator};
use crate::error::{Error, Result};
use crate::grid::{Field, VelocityGrid};
use crate::maxwell::{fit_decay_rate, DecayFit};
use crate::profiles;
use crate::selfsim::drift_step;

/// Kernel element g_0 of the linearization around H (closed form).
pub fn g0_kernel(x: f64) -> f64 {
    profiles::g0_kernel(x)
}

/// Kernel element phi_0(x) = g_0(lambda_0 x) of the linearization around G_0.
pub fn phi0(x: f64) -> f64 {
    profiles::phi0(x)
}

/// The three Maxwellian-weighted profiles biorthogonal to the moment
/// functionals (1, x, x^2).
#[derive(Debug, Clone)]
pub struct ProjectionBasis {
    pub zeta1: Field,
    pub zeta2: Field,
    pub zeta3: Field,
}

impl ProjectionBasis {
    pub fn new(grid: &VelocityGrid) -> Self {
        let m = profiles::maxwellian;
        Self {
            zeta1: Field::sample(grid, |x| (1.5 - x * x) * m(x)),
            zeta2: Field::sample(grid, |x| 2.0 * x * m(x)),
            zeta3: Field::sample(grid, |x| (2.0 * x * x - 1.0) * m(x)),
        }
    }

    /// Quadrature moments (1, x, x^2) of (zeta1, zeta2, zeta3); the identity
    /// matrix up to quadrature error.
    pub fn gram_matrix(&self) -> [[f64; 3]; 3] {
        let row = |f: &Field| {
            let r = moment_report(f, &[], &[]);
            [r.mass, r.momentum, r.energy]
        };
        [row(&self.zeta1), row(&self.zeta2), row(&self.zeta3)]
    }
}

/// P f = zeta1 int f + zeta2 int f y + zeta3 int f y^2.
pub fn project_p(basis: &ProjectionBasis, f: &Field) -> Result<Field> {
    let r = moment_report(f, &[], &[]);
    let a = basis.zeta1.scale(r.mass);
    let b = basis.zeta2.scale(r.momentum);
    let c = basis.zeta3.scale(r.energy);
    a.lin_comb(1.0, &b, 1.0)?.lin_comb(1.0, &c, 1.0)
}

/// f - P f, which has vanishing mass, momentum and energy.
pub fn project_y0(basis: &ProjectionBasis, f: &Field) -> Result<Field> {
    let p = project_p(basis, f)?;
    f.lin_comb(1.0, &p, -1.0)
}

/// L_0 h = Q_0(h, G_0) + Q_0(G_0, h) - (1/4) d_x(x h) around the exact
/// closed-form G_0 samples (the linearization referent must not carry solver
/// error).
pub struct LinearizedOperator {
    op: CollisionOperator,
    g0: Field,
    g0_mass: f64,
}

impl LinearizedOperator {
    pub fn new(grid: &VelocityGrid) -> Result<Self> {
        let g0 = Field::sample(grid, profiles::g0_profile);
        let g0_mass = g0.quadrature();
        Ok(Self {
            op: CollisionOperator::new(grid, 0.0)?,
            g0,
            g0_mass,
        })
    }

    pub fn grid(&self) -> &VelocityGrid {
        self.g0.grid()
    }

    pub fn g0(&self) -> &Field {
        &self.g0
    }

    /// Collision part Q_0(h, G_0) + Q_0(G_0, h) = 4 (h conv G_0)(2x)
    /// - h M_0(G_0) - G_0 M_0(h).
    pub fn collision_part(&self, h: &Field) -> Result<Field> {
        let gain = self.op.q_plus(h, &self.g0)?.scale(2.0);
        let m_h = h.quadrature();
        let loss = h.lin_comb(self.g0_mass, &self.g0, m_h)?;
        gain.lin_comb(1.0, &loss, -1.0)
    }

    /// Full operator with the 4th-order drift stencil.
    pub fn apply(&self, h: &Field) -> Result<Field> {
        h.check_same_grid(&self.g0)?;
        let coll = self.collision_part(h)?;
        let drift = ddx_xg(h);
        coll.lin_comb(1.0, &drift, -0.25)
    }
}

fn ddx_xg(g: &Field) -> Field {
    crate::selfsim::ddx_xg_stencil(g)
}

/// Convenience wrapper around [`LinearizedOperator::apply`].
pub fn l0_apply(h: &Field) -> Result<Field> {
    LinearizedOperator::new(h.grid())?.apply(h)
}

/// Result of the semigroup decay experiment.
#[derive(Debug, Clone)]
pub struct GapEstimate {
    pub fit: DecayFit,
    /// Recorded (t, ||h(t)||_{L^1(w_a)}) series.
    pub series: Vec<(f64, f64)>,
    /// Analytic lower-bound rate 1 - a/4 - 2^{1-a}.
    pub bound: f64,
}

/// Rate bound nu < 1 - a/4 - 2^{1-a} available in L^1(w_a).
pub fn gap_bound(a: f64) -> f64 {
    1.0 - 0.25 * a - 2f64.powf(1.0 - a)
}

/// Evolve d_t h = L_0 h by Strang splitting (drift exact, collision part
/// explicit RK2), record ||h(t)||_{L^1(w_a)}, and fit the decay rate on the
/// tail window [T/2, T] where the C(nu) transient has passed.
///
/// The drift spectrum has eigenvalue +1/4 along the momentum functional and
/// 0 along mass, so roundoff-level moments would amplify by e^{t/4} and bury
/// the decay; since the experiment measures the semigroup on the zero
/// mass/momentum class, the state is deflated back onto it each step. The
/// energy direction is left untouched (phi_0 carries it).
pub fn spectral_gap_estimate(a: f64, h0: &Field, t_end: f64, dt: f64) -> Result<GapEstimate> {
    if !(2.0 < a && a < 3.0) {
        return Err(Error::InvalidArgument(format!(
            "weight exponent a must lie in (2,3), got {a}"
        )));
    }
    if !(dt > 0.0 && dt <= 0.25) {
        return Err(Error::InvalidArgument(format!(
            "gap experiment step must lie in (0, 0.25], got {dt}"
        )));
    }
    let lin = LinearizedOperator::new(h0.grid())?;
    let basis = ProjectionBasis::new(h0.grid());
    let deflate = |h: &Field| -> Result<Field> {
        let r = moment_report(h, &[], &[]);
        let a1 = basis.zeta1.scale(r.mass);
        let a2 = basis.zeta2.scale(r.momentum);
        h.lin_comb(1.0, &a1, -1.0)?.lin_comb(1.0, &a2, -1.0)
    };
    let mut h = deflate(h0)?;
    let record_interval = (1.0 / dt).round().max(1.0) as usize;
    let total = (t_end / dt).round() as usize;
    let mut series = vec![(0.0, weighted_norm(&h, a))];
    let mut last_good = 0.0;
    for step in 1..=total {
        h = drift_step(&h, 0.5 * dt, 0.25);
        let k1 = lin.collision_part(&h)?;
        let h1 = h.lin_comb(1.0, &k1, dt)?;
        let k2 = lin.collision_part(&h1)?;
        let k12 = k1.lin_comb(0.5 * dt, &k2, 0.5 * dt)?;
        h = h.lin_comb(1.0, &k12, 1.0)?;
        h = drift_step(&h, 0.5 * dt, 0.25);
        h = deflate(&h)?;
        let t = step as f64 * dt;
        if h.samples().iter().any(|v| !v.is_finite() || v.abs() > 1e12) {
            return Err(Error::Diverged { last_good_t: last_good });
        }
        last_good = t;
        if step % record_interval == 0 || step == total {
            series.push((t, weighted_norm(&h, a)));
        }
    }
    let tail: Vec<(f64, f64)> = series
        .iter()
        .copied()
        .filter(|(t, _)| *t >= 0.5 * t_end)
        .collect();
    let fit = fit_decay_rate(&tail)?;
    Ok(GapEstimate {
        fit,
        series,
        bound: gap_bound(a),
    })
}
