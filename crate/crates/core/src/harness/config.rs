//! Run configuration: defaults, a flat TOML file and command-line overrides.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::models::{SwingupWeights, System};
use crate::scan::Executor;
use crate::solvers::{AdmmOptions, BarrierOptions, NewtonOptions, StepRollout};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SolverKind {
    Barrier,
    Admm,
}

impl SolverKind {
    pub fn name(self) -> &'static str {
        match self {
            SolverKind::Barrier => "barrier",
            SolverKind::Admm => "admm",
        }
    }
}

impl fmt::Display for SolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SolverKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "barrier" | "ip" | "interior-point" => Ok(SolverKind::Barrier),
            "admm" => Ok(SolverKind::Admm),
            other => Err(Error::Config(format!("unknown solver '{other}'"))),
        }
    }
}

/// Default trajectory-optimization duration in seconds; `dt = duration / N`.
pub const DEFAULT_DURATION: f64 = 5.0;
pub const DEFAULT_MPC_DT: f64 = 0.01;

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub system: System,
    pub solver: SolverKind,
    pub executor: Executor,
    pub horizons: Vec<usize>,
    pub duration: f64,
    /// Fixed step size; overrides `duration / N` in benchmarks and the
    /// default MPC sampling period.
    pub dt: Option<f64>,
    pub reps: usize,
    pub seed: u64,
    /// Standard deviation of the random initial controls, relative to the
    /// control limit.
    pub init_std: f64,
    pub out: Option<PathBuf>,
    pub weights: SwingupWeights,
    pub barrier: BarrierOptions,
    pub admm: AdmmOptions,
    pub mpc_steps: usize,
    pub mpc_horizon: usize,
    pub initial_state: Option<Vec<f64>>,
}

impl RunConfig {
    pub fn new(system: System, solver: SolverKind) -> Self {
        let newton = NewtonOptions {
            max_iters: 500,
            ..Default::default()
        };
        RunConfig {
            system,
            solver,
            executor: Executor::parallel(),
            horizons: vec![20, 50, 100, 200, 500, 1000],
            duration: DEFAULT_DURATION,
            dt: None,
            reps: 10,
            seed: 0,
            init_std: 0.3,
            out: None,
            weights: SwingupWeights::default_for(system),
            barrier: BarrierOptions {
                newton,
                ..Default::default()
            },
            admm: AdmmOptions {
                rho: default_rho(system),
                newton,
                max_iters: 5000,
                ..Default::default()
            },
            mpc_steps: 400,
            mpc_horizon: 60,
            initial_state: None,
        }
    }

    /// Step size for a trajectory-optimization run with `n` steps.
    pub fn bench_dt(&self, n: usize) -> f64 {
        self.dt.unwrap_or(self.duration / n as f64)
    }

    pub fn mpc_dt(&self) -> f64 {
        self.dt.unwrap_or(DEFAULT_MPC_DT)
    }

    pub fn set_executor(&mut self, executor: Executor) {
        self.executor = executor;
        self.barrier.newton.executor = executor;
        self.admm.newton.executor = executor;
    }

    pub fn validate(&self) -> Result<()> {
        if self.horizons.is_empty() || self.horizons.contains(&0) {
            return Err(Error::Config("horizons must be a nonempty list of positive integers".into()));
        }
        if self.reps == 0 {
            return Err(Error::Config("reps must be >= 1".into()));
        }
        if !(self.duration > 0.0 && self.duration.is_finite()) {
            return Err(Error::Config(format!("duration must be positive, got {}", self.duration)));
        }
        if let Some(dt) = self.dt {
            if !(dt > 0.0 && dt.is_finite()) {
                return Err(Error::Config(format!("dt must be positive, got {dt}")));
            }
        }
        if !(self.init_std >= 0.0 && self.init_std.is_finite()) {
            return Err(Error::Config("init_std must be non-negative".into()));
        }
        if self.mpc_steps == 0 || self.mpc_horizon == 0 {
            return Err(Error::Config("mpc_steps and mpc_horizon must be >= 1".into()));
        }
        if self.weights.q.len() != self.system.state_dim() {
            return Err(Error::Config(format!(
                "q needs {} weights for {}",
                self.system.state_dim(),
                self.system
            )));
        }
        let wrap = |e: Error| Error::Config(e.to_string());
        self.barrier.validate().map_err(wrap)?;
        self.admm.validate().map_err(wrap)?;
        Ok(())
    }

    /// Applies every key present in `file` on top of the current values.
    pub fn apply_file(&mut self, file: &ConfigFile) -> Result<()> {
        if let Some(s) = &file.system {
            let system: System = s.parse()?;
            if system != self.system {
                let solver = file.solver.as_deref().map(str::parse).transpose()?.unwrap_or(self.solver);
                *self = RunConfig::new(system, solver);
            }
        }
        if let Some(s) = &file.solver {
            self.solver = s.parse()?;
        }
        if let Some(e) = &file.executor {
            self.set_executor(e.parse()?);
        }
        if let Some(h) = &file.horizons {
            self.horizons = h.clone();
        }
        macro_rules! set {
            ($($field:ident => $target:expr),* $(,)?) => {
                $(if let Some(v) = file.$field.clone() { $target = v; })*
            };
        }
        set! {
            duration => self.duration,
            reps => self.reps,
            seed => self.seed,
            init_std => self.init_std,
            mu0 => self.barrier.mu0,
            zeta => self.barrier.zeta,
            mu_tol => self.barrier.mu_tol,
            rho => self.admm.rho,
            residual_tol => self.admm.residual_tol,
            admm_max_iters => self.admm.max_iters,
            q => self.weights.q,
            r => self.weights.r,
            terminal_scale => self.weights.terminal_scale,
            cart_target => self.weights.cart_target,
            mpc_steps => self.mpc_steps,
            mpc_horizon => self.mpc_horizon,
        }
        if file.dt.is_some() {
            self.dt = file.dt;
        }
        if let Some(out) = &file.out {
            self.out = Some(out.clone());
        }
        if file.initial_state.is_some() {
            self.initial_state = file.initial_state.clone();
        }
        for newton in [&mut self.barrier.newton, &mut self.admm.newton] {
            if let Some(v) = file.alpha0 {
                newton.alpha0 = v;
            }
            if let Some(v) = file.nu0 {
                newton.nu0 = v;
            }
            if let Some(v) = file.inner_tol {
                newton.inner_tol = v;
            }
            if let Some(v) = file.max_iters {
                newton.max_iters = v;
            }
            if let Some(v) = &file.rollout {
                newton.rollout = match v.as_str() {
                    "open" | "open-loop" => StepRollout::OpenLoop,
                    "closed" | "closed-loop" => StepRollout::ClosedLoop,
                    other => return Err(Error::Config(format!("unknown rollout '{other}'"))),
                };
            }
        }
        Ok(())
    }

    pub fn load(path: &Path) -> Result<ConfigFile> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        ConfigFile::parse(&text)
    }
}

/// ADMM penalty used for each benchmark unless configured.
pub fn default_rho(system: System) -> f64 {
    match system {
        System::Pendulum => 1.0,
        System::CartPole => 0.5,
    }
}

/// Flat key-value configuration file. Every key is optional.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub system: Option<String>,
    pub solver: Option<String>,
    pub executor: Option<String>,
    pub horizons: Option<Vec<usize>>,
    pub duration: Option<f64>,
    pub dt: Option<f64>,
    pub reps: Option<usize>,
    pub seed: Option<u64>,
    pub init_std: Option<f64>,
    pub out: Option<PathBuf>,
    pub mu0: Option<f64>,
    pub zeta: Option<f64>,
    pub mu_tol: Option<f64>,
    pub rho: Option<f64>,
    pub residual_tol: Option<f64>,
    pub admm_max_iters: Option<usize>,
    pub alpha0: Option<f64>,
    pub nu0: Option<f64>,
    pub inner_tol: Option<f64>,
    pub max_iters: Option<usize>,
    pub rollout: Option<String>,
    pub q: Option<Vec<f64>>,
    pub r: Option<f64>,
    pub terminal_scale: Option<f64>,
    pub cart_target: Option<f64>,
    pub mpc_steps: Option<usize>,
    pub mpc_horizon: Option<usize>,
    pub initial_state: Option<Vec<f64>>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }
}
