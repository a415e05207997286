//! Plain `key = value` experiment configuration.
//!
//! All experiments are flat parameter sets; `#` starts a comment. Unknown
//! keys are rejected, values are validated against the preconditions of the
//! operations they feed, and the effective configuration is echoed into the
//! output directory for reproducibility.

use grainkin::experiments::{
    ConstantsConfig, GapConfig, MaxwellFourierConfig, MaxwellPhysicalConfig, ProfileConfig,
    UniquenessConfig,
};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "configuration error: {}", self.0)
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    Constants,
    MaxwellFourier,
    MaxwellPhysical,
    Profile,
    UniquenessProbe,
    Gap,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Constants => "constants",
            ExperimentKind::MaxwellFourier => "maxwell-fourier",
            ExperimentKind::MaxwellPhysical => "maxwell-physical",
            ExperimentKind::Profile => "profile",
            ExperimentKind::UniquenessProbe => "uniqueness-probe",
            ExperimentKind::Gap => "gap",
        }
    }

    fn parse(s: &str) -> Result<Self, ConfigError> {
        match s {
            "constants" => Ok(ExperimentKind::Constants),
            "maxwell-fourier" => Ok(ExperimentKind::MaxwellFourier),
            "maxwell-physical" => Ok(ExperimentKind::MaxwellPhysical),
            "profile" => Ok(ExperimentKind::Profile),
            "uniqueness-probe" => Ok(ExperimentKind::UniquenessProbe),
            "gap" => Ok(ExperimentKind::Gap),
            other => Err(ConfigError(format!(
                "unknown experiment '{other}'; run `grainkin list` for the catalogue"
            ))),
        }
    }
}

/// Validated experiment configuration with defaults filled in.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub gamma: Vec<f64>,
    pub c: f64,
    pub l: f64,
    pub n: usize,
    pub xi_max: f64,
    pub m: usize,
    pub dt: f64,
    pub t: f64,
    pub k_list: Vec<f64>,
    pub a: f64,
    pub tol: f64,
    pub seed: u64,
    pub output: String,
    /// Keys the user actually set, for default resolution per experiment.
    set_keys: Vec<String>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            experiment: ExperimentKind::Constants,
            gamma: vec![0.1],
            c: 0.25,
            l: 0.0,   // 0 means "experiment default"
            n: 0,
            xi_max: 60.0,
            m: 8192,
            dt: 0.0,
            t: 0.0,
            k_list: vec![2.2, 2.5, 2.8],
            a: 2.5,
            tol: 1e-4,
            seed: 0,
            output: String::new(),
            set_keys: Vec::new(),
        }
    }
}

fn parse_f64(key: &str, v: &str) -> Result<f64, ConfigError> {
    v.parse()
        .map_err(|_| ConfigError(format!("key '{key}': cannot parse '{v}' as a number")))
}

fn parse_usize(key: &str, v: &str) -> Result<usize, ConfigError> {
    v.parse()
        .map_err(|_| ConfigError(format!("key '{key}': cannot parse '{v}' as an integer")))
}

fn parse_list(key: &str, v: &str) -> Result<Vec<f64>, ConfigError> {
    v.split(',')
        .map(|s| parse_f64(key, s.trim()))
        .collect::<Result<Vec<_>, _>>()
        .and_then(|list| {
            if list.is_empty() {
                Err(ConfigError(format!("key '{key}': empty list")))
            } else {
                Ok(list)
            }
        })
}

impl ExperimentConfig {
    /// Parse `key = value` text; `#` comments; later assignments win.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = Self::default();
        let mut saw_experiment = false;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                ConfigError(format!("line {}: expected `key = value`", lineno + 1))
            })?;
            cfg.assign(key.trim(), value.trim())?;
            if key.trim() == "experiment" {
                saw_experiment = true;
            }
        }
        if !saw_experiment {
            return Err(ConfigError("missing key 'experiment'".into()));
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Apply one `key=value` override.
    pub fn assign(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        match key {
            "experiment" => self.experiment = ExperimentKind::parse(value)?,
            "gamma" => self.gamma = parse_list(key, value)?,
            "c" => self.c = parse_f64(key, value)?,
            "L" | "l" => self.l = parse_f64(key, value)?,
            "N" | "n" => self.n = parse_usize(key, value)?,
            "xi_max" => self.xi_max = parse_f64(key, value)?,
            "M" | "m" => self.m = parse_usize(key, value)?,
            "dt" => self.dt = parse_f64(key, value)?,
            "T" | "t" => self.t = parse_f64(key, value)?,
            "k_list" | "k-list" => self.k_list = parse_list(key, value)?,
            "a" => self.a = parse_f64(key, value)?,
            "tol" => self.tol = parse_f64(key, value)?,
            "seed" => {
                self.seed = value.parse().map_err(|_| {
                    ConfigError(format!("key 'seed': cannot parse '{value}' as an integer"))
                })?
            }
            "output" => self.output = value.to_string(),
            other => {
                return Err(ConfigError(format!("unknown key '{other}'")));
            }
        }
        self.set_keys.push(key.to_string());
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        for &g in &self.gamma {
            if !(0.0..1.0).contains(&g) {
                return Err(ConfigError(format!(
                    "gamma must lie in [0,1), got {g}"
                )));
            }
        }
        if !(self.c > 0.0) {
            return Err(ConfigError(format!("c must be positive, got {}", self.c)));
        }
        if self.l < 0.0 {
            return Err(ConfigError(format!("L must be positive, got {}", self.l)));
        }
        if self.n != 0 && (self.n % 2 != 0 || self.n < 8) {
            return Err(ConfigError(format!(
                "N must be an even integer >= 8, got {}",
                self.n
            )));
        }
        if !(self.xi_max > 0.0) {
            return Err(ConfigError(format!(
                "xi_max must be positive, got {}",
                self.xi_max
            )));
        }
        if self.m == 0 {
            return Err(ConfigError("M must be a positive integer".into()));
        }
        if self.dt < 0.0 {
            return Err(ConfigError(format!("dt must be positive, got {}", self.dt)));
        }
        if self.t < 0.0 {
            return Err(ConfigError(format!("T must be positive, got {}", self.t)));
        }
        for &k in &self.k_list {
            if !(0.0..3.0).contains(&k) {
                return Err(ConfigError(format!(
                    "k_list entries must lie in [0,3), got {k}"
                )));
            }
        }
        if !(2.0 < self.a && self.a < 3.0) {
            return Err(ConfigError(format!(
                "a must lie in (2,3), got {}",
                self.a
            )));
        }
        if !(self.tol > 0.0) {
            return Err(ConfigError(format!(
                "tol must be positive, got {}",
                self.tol
            )));
        }
        Ok(())
    }

    pub fn output_dir(&self) -> String {
        if self.output.is_empty() {
            format!("grainkin-out/{}", self.experiment.name())
        } else {
            self.output.clone()
        }
    }

    fn or_default(&self, value: f64, default: f64) -> f64 {
        if value == 0.0 {
            default
        } else {
            value
        }
    }

    fn n_or(&self, default: usize) -> usize {
        if self.n == 0 {
            default
        } else {
            self.n
        }
    }

    pub fn constants(&self) -> ConstantsConfig {
        ConstantsConfig {
            l: self.or_default(self.l, 200.0),
            n: self.n_or(1 << 14),
            xi_max: self.xi_max,
            m: if self.set_keys.iter().any(|k| k == "M" || k == "m") {
                self.m
            } else {
                2048
            },
            ..ConstantsConfig::default()
        }
    }

    pub fn maxwell_fourier(&self) -> MaxwellFourierConfig {
        MaxwellFourierConfig {
            m: self.m,
            xi_max: self.xi_max,
            dt: self.or_default(self.dt, 0.01),
            t_end: self.or_default(self.t, 50.0),
            k_list: self.k_list.clone(),
            ..MaxwellFourierConfig::default()
        }
    }

    pub fn maxwell_physical(&self) -> MaxwellPhysicalConfig {
        MaxwellPhysicalConfig {
            l: self.or_default(self.l, 200.0),
            n: self.n_or(1 << 14),
            dt: self.or_default(self.dt, 0.01),
            t_end: self.or_default(self.t, 50.0),
            xi_max: self.xi_max,
            m: if self.set_keys.iter().any(|k| k == "M" || k == "m") {
                self.m
            } else {
                1024
            },
            ..MaxwellPhysicalConfig::default()
        }
    }

    pub fn profile(&self) -> ProfileConfig {
        ProfileConfig {
            gamma_list: self.gamma.clone(),
            tol: self.tol,
            l: self.or_default(self.l, 40.0),
            n: self.n_or(4096),
            dt: self.or_default(self.dt, 0.05),
            max_time: self.or_default(self.t, 1200.0),
            ..ProfileConfig::default()
        }
    }

    pub fn uniqueness(&self) -> UniquenessConfig {
        UniquenessConfig {
            gamma: self.gamma[0],
            tol: self.tol,
            l: self.or_default(self.l, 40.0),
            n: self.n_or(4096),
            dt: self.or_default(self.dt, 0.05),
            max_time: self.or_default(self.t, 1200.0),
        }
    }

    pub fn gap(&self) -> GapConfig {
        GapConfig {
            a: self.a,
            l: self.or_default(self.l, 200.0),
            n: self.n_or(1 << 14),
            t_end: self.or_default(self.t, 100.0),
            dt: self.or_default(self.dt, 0.05),
        }
    }

    /// Effective configuration echo, written next to the outputs.
    pub fn echo(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("experiment = {}\n", self.experiment.name()));
        let gammas: Vec<String> = self.gamma.iter().map(|g| g.to_string()).collect();
        s.push_str(&format!("gamma = {}\n", gammas.join(",")));
        s.push_str(&format!("c = {}\n", self.c));
        match self.experiment {
            ExperimentKind::Constants => {
                let c = self.constants();
                s.push_str(&format!("L = {}\nN = {}\nxi_max = {}\nM = {}\n", c.l, c.n, c.xi_max, c.m));
            }
            ExperimentKind::MaxwellFourier => {
                let c = self.maxwell_fourier();
                s.push_str(&format!(
                    "M = {}\nxi_max = {}\ndt = {}\nT = {}\n",
                    c.m, c.xi_max, c.dt, c.t_end
                ));
                let ks: Vec<String> = c.k_list.iter().map(|k| k.to_string()).collect();
                s.push_str(&format!("k_list = {}\n", ks.join(",")));
            }
            ExperimentKind::MaxwellPhysical => {
                let c = self.maxwell_physical();
                s.push_str(&format!(
                    "L = {}\nN = {}\ndt = {}\nT = {}\nxi_max = {}\nM = {}\n",
                    c.l, c.n, c.dt, c.t_end, c.xi_max, c.m
                ));
            }
            ExperimentKind::Profile => {
                let c = self.profile();
                s.push_str(&format!(
                    "tol = {}\nL = {}\nN = {}\ndt = {}\nT = {}\n",
                    c.tol, c.l, c.n, c.dt, c.max_time
                ));
            }
            ExperimentKind::UniquenessProbe => {
                let c = self.uniqueness();
                s.push_str(&format!(
                    "tol = {}\nL = {}\nN = {}\ndt = {}\nT = {}\n",
                    c.tol, c.l, c.n, c.dt, c.max_time
                ));
            }
            ExperimentKind::Gap => {
                let c = self.gap();
                s.push_str(&format!(
                    "a = {}\nL = {}\nN = {}\ndt = {}\nT = {}\n",
                    c.a, c.l, c.n, c.dt, c.t_end
                ));
            }
        }
        s.push_str(&format!("seed = {}\n", self.seed));
        s.push_str(&format!("output = {}\n", self.output_dir()));
        s
    }
}

/// One line per experiment with its parameter summary, deterministic order.
pub fn list_experiments() -> String {
    let rows: BTreeMap<&str, &str> = BTreeMap::from([
        (
            "constants",
            "explicit Maxwell constants (A0, lambda0, I0 functionals, H->Phi); params: L, N, xi_max, M",
        ),
        (
            "gap",
            "spectral gap of the linearized operator in L1(w_a); params: a, L, N, dt, T",
        ),
        (
            "maxwell-fourier",
            "Fourier-side contraction and linearized decay at gamma=0; params: M, xi_max, dt, T, k_list",
        ),
        (
            "maxwell-physical",
            "physical-space Maxwell run, conservation and dissipation checks; params: L, N, dt, T, xi_max, M",
        ),
        (
            "profile",
            "steady self-similar profile(s) at gamma > 0 with temperature sweep; params: gamma, tol, L, N, dt, T",
        ),
        (
            "uniqueness-probe",
            "two initial data relax to one profile; params: gamma, tol, L, N, dt, T",
        ),
    ]);
    let mut out = String::new();
    for (name, desc) in rows {
        out.push_str(&format!("{name:18} {desc}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_from_minimal_config() {
        let cfg = ExperimentConfig::parse("experiment = constants\n").unwrap();
        assert_eq!(cfg.experiment, ExperimentKind::Constants);
        let c = cfg.constants();
        assert_eq!(c.l, 200.0);
        assert_eq!(c.n, 1 << 14);
    }

    #[test]
    fn gamma_out_of_range_names_key() {
        let err = ExperimentConfig::parse("experiment = profile\ngamma = 1.5\n").unwrap_err();
        assert!(err.0.contains("gamma"), "message: {}", err.0);
    }

    #[test]
    fn gap_experiment_with_overrides() {
        let cfg = ExperimentConfig::parse("experiment = gap\na = 2.5\nT = 100\n").unwrap();
        let g = cfg.gap();
        assert_eq!(g.a, 2.5);
        assert_eq!(g.t_end, 100.0);
    }

    #[test]
    fn unknown_key_rejected() {
        let err = ExperimentConfig::parse("experiment = gap\nbogus = 1\n").unwrap_err();
        assert!(err.0.contains("bogus"));
    }

    #[test]
    fn comments_and_spacing() {
        let cfg = ExperimentConfig::parse(
            "# a comment\nexperiment = maxwell-fourier # trailing\n\n  dt   =  0.02\n",
        )
        .unwrap();
        assert_eq!(cfg.maxwell_fourier().dt, 0.02);
    }

    #[test]
    fn list_is_deterministic_and_complete() {
        let a = list_experiments();
        let b = list_experiments();
        assert_eq!(a, b);
        assert!(a.contains("profile"));
        assert!(a.contains("gap"));
    }
}
