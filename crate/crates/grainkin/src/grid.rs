//! Uniform velocity/frequency grids, quadrature and interpolation.
//!
//! Every solver in the crate works on these two grids. The velocity grid is
//! the uniform lattice x_j = (j - N/2) h on [-L, L) with h = 2L/N, so that 0
//! is always a node and the doubled point 2 x_j is again a node whenever it
//! lies in range (this is what makes sampling convolutions at 2x exact for
//! the Maxwell gain term). The frequency grid is the nonnegative half-axis
//! xi_m = m (xi_max / M); negative frequencies are recovered by conjugate
//! symmetry of transforms of real data.

use crate::error::{Error, Result};

/// Uniform symmetric velocity grid on [-L, L).
#[derive(Debug, Clone, PartialEq)]
pub struct VelocityGrid {
    half_width: f64,
    count: usize,
    spacing: f64,
}

impl VelocityGrid {
    /// Build the grid with nodes x_j = (j - N/2) h, h = 2L/N.
    pub fn new(half_width: f64, count: usize) -> Result<Self> {
        if !(half_width > 0.0) || !half_width.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "grid half-width must be positive and finite, got {half_width}"
            )));
        }
        if count % 2 != 0 || count < 8 {
            return Err(Error::InvalidArgument(format!(
                "grid count must be an even integer >= 8, got {count}"
            )));
        }
        Ok(Self {
            half_width,
            count,
            spacing: 2.0 * half_width / count as f64,
        })
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    /// Node x_j = (j - N/2) h.
    #[inline]
    pub fn node(&self, j: usize) -> f64 {
        (j as f64 - (self.count / 2) as f64) * self.spacing
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.count).map(move |j| self.node(j))
    }

    /// Fractional index of position x, i.e. the j solving node(j) = x.
    #[inline]
    pub fn fractional_index(&self, x: f64) -> f64 {
        x / self.spacing + (self.count / 2) as f64
    }
}

/// A real-valued function sampled on a [`VelocityGrid`].
#[derive(Debug, Clone)]
pub struct Field {
    grid: VelocityGrid,
    samples: Vec<f64>,
}

impl Field {
    pub fn new(grid: VelocityGrid, samples: Vec<f64>) -> Result<Self> {
        if samples.len() != grid.count() {
            return Err(Error::InvalidArgument(format!(
                "sample count {} does not match grid count {}",
                samples.len(),
                grid.count()
            )));
        }
        if samples.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(
                "field samples must be finite".into(),
            ));
        }
        Ok(Self { grid, samples })
    }

    /// Sample a closed-form function on the grid nodes.
    pub fn sample(grid: &VelocityGrid, f: impl Fn(f64) -> f64) -> Self {
        let samples = grid.nodes().map(f).collect();
        Self {
            grid: grid.clone(),
            samples,
        }
    }

    pub fn zeros(grid: &VelocityGrid) -> Self {
        Self {
            grid: grid.clone(),
            samples: vec![0.0; grid.count()],
        }
    }

    pub fn grid(&self) -> &VelocityGrid {
        &self.grid
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn samples_mut(&mut self) -> &mut [f64] {
        &mut self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    /// Rectangle-rule integral h * sum_j f_j. For smooth decaying data this is
    /// spectrally accurate; linearity is exact.
    pub fn quadrature(&self) -> f64 {
        self.grid.spacing() * self.samples.iter().sum::<f64>()
    }

    /// Cubic (4-point Lagrange) interpolation; returns 0 for |x| >= L since
    /// every density in scope decays.
    pub fn interpolate(&self, x: f64) -> f64 {
        if x.abs() >= self.grid.half_width() {
            return 0.0;
        }
        let n = self.grid.count();
        let p = self.grid.fractional_index(x);
        // Centered 4-point stencil [k-1, k, k+1, k+2]; clamp near the edges.
        let k = (p.floor() as isize).clamp(1, n as isize - 3) as usize;
        let s = p - k as f64;
        let f = &self.samples;
        let (v0, v1, v2, v3) = (f[k - 1], f[k], f[k + 1], f[k + 2]);
        let w0 = -s * (s - 1.0) * (s - 2.0) / 6.0;
        let w1 = (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0;
        let w2 = -(s + 1.0) * s * (s - 2.0) / 2.0;
        let w3 = (s + 1.0) * s * (s - 1.0) / 6.0;
        w0 * v0 + w1 * v1 + w2 * v2 + w3 * v3
    }

    /// 12-point Lagrange interpolation, used by the exact-characteristics
    /// drift resampling. The resampling mass error is one-signed and
    /// accumulates over the 1e4-1e5 steps of a long run, so it must sit far
    /// below the interpolation order that plain evaluation needs.
    pub(crate) fn interpolate12(&self, x: f64) -> f64 {
        if x.abs() >= self.grid.half_width() {
            return 0.0;
        }
        let n = self.grid.count();
        let p = self.grid.fractional_index(x);
        let k = (p.floor() as isize).clamp(5, n as isize - 7) as usize;
        let s = p - k as f64;
        let f = &self.samples[k - 5..k + 7];
        let mut out = 0.0;
        for (i, &fi) in f.iter().enumerate() {
            let xi = i as f64 - 5.0;
            let mut w = 1.0;
            for j in 0..12 {
                if j != i {
                    let xj = j as f64 - 5.0;
                    w *= (s - xj) / (xi - xj);
                }
            }
            out += w * fi;
        }
        out
    }

    /// Elementwise a*self + b*other.
    pub fn lin_comb(&self, a: f64, other: &Field, b: f64) -> Result<Field> {
        self.check_same_grid(other)?;
        let samples = self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(x, y)| a * x + b * y)
            .collect();
        Ok(Field {
            grid: self.grid.clone(),
            samples,
        })
    }

    pub fn scale(&self, a: f64) -> Field {
        Field {
            grid: self.grid.clone(),
            samples: self.samples.iter().map(|x| a * x).collect(),
        }
    }

    pub fn check_same_grid(&self, other: &Field) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch(
                "fields live on different velocity grids".into(),
            ));
        }
        Ok(())
    }

    pub fn min_sample(&self) -> f64 {
        self.samples.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// L1 distance h * sum |f_j - g_j|.
    pub fn l1_distance(&self, other: &Field) -> Result<f64> {
        self.check_same_grid(other)?;
        Ok(self.grid.spacing()
            * self
                .samples
                .iter()
                .zip(&other.samples)
                .map(|(x, y)| (x - y).abs())
                .sum::<f64>())
    }
}

/// Uniform frequency grid on the nonnegative half-axis [0, xi_max].
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyGrid {
    xi_max: f64,
    count: usize,
    xi_min: f64,
}

impl FrequencyGrid {
    /// Nodes xi_m = m (xi_max / M), m = 0..=M. `xi_min` is the smallest
    /// frequency admitted in sup-norm evaluation; it defaults to the larger of
    /// the first positive node and the configured floor.
    pub fn new(xi_max: f64, count: usize, xi_min_floor: f64) -> Result<Self> {
        if !(xi_max > 0.0) || count == 0 {
            return Err(Error::InvalidArgument(format!(
                "frequency grid needs xi_max > 0 and M > 0, got xi_max={xi_max}, M={count}"
            )));
        }
        let spacing = xi_max / count as f64;
        Ok(Self {
            xi_max,
            count,
            xi_min: spacing.max(xi_min_floor),
        })
    }

    /// Grid with the default sup-norm floor xi_min = max(spacing, 0.05).
    ///
    /// Grid values at the very first nodes carry absolute noise of order
    /// spacing^3 from interpolating the |xi|^3 structure of transforms;
    /// dividing by xi^k with k near 3 would amplify that noise above the
    /// signal, so the sup norm starts at a small fixed floor instead.
    pub fn with_default_floor(xi_max: f64, count: usize) -> Result<Self> {
        Self::new(xi_max, count, 0.05)
    }

    pub fn xi_max(&self) -> f64 {
        self.xi_max
    }

    /// Number of intervals M; there are M+1 nodes.
    pub fn count(&self) -> usize {
        self.count
    }

    pub fn len(&self) -> usize {
        self.count + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        self.xi_max / self.count as f64
    }

    pub fn xi_min(&self) -> f64 {
        self.xi_min
    }

    pub fn with_xi_min(mut self, xi_min: f64) -> Self {
        self.xi_min = xi_min.max(self.spacing());
        self
    }

    #[inline]
    pub fn node(&self, m: usize) -> f64 {
        m as f64 * self.spacing()
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..=self.count).map(move |m| self.node(m))
    }
}
