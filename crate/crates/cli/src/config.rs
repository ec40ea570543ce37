//! Flat `key = value` experiment configuration.
//!
//! Lines are `key = value`; `#` starts a comment. `state` may repeat to build
//! a superposition from `index:re,im` terms. Command-line overrides use the
//! same keys and replace file values; any `state` override replaces the whole
//! state list from the file.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use rodeo_core::ensemble::{energy_grid, TimeDistribution, TimeSampler};
use rodeo_core::hamiltonians::{ising_diagonal, DiagonalHamiltonian, Spin};
use rodeo_core::microcanonical::homogeneous_state;
use rodeo_core::qudit::{make_basis_state, StateVector};
use rodeo_core::Complex64;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    Sweep,
    Dos,
    Nos,
    Table1,
    ProbCurves,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Sweep => "sweep",
            Experiment::Dos => "dos",
            Experiment::Nos => "nos",
            Experiment::Table1 => "table1",
            Experiment::ProbCurves => "prob-curves",
        }
    }
}

impl FromStr for Experiment {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "sweep" => Ok(Experiment::Sweep),
            "dos" => Ok(Experiment::Dos),
            "nos" => Ok(Experiment::Nos),
            "table1" => Ok(Experiment::Table1),
            "prob-curves" => Ok(Experiment::ProbCurves),
            _ => Err(config_err(format!("unknown experiment `{s}`"))),
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum InputState {
    Basis(usize),
    Weighted(Vec<(usize, Complex64)>),
    Homogeneous,
}

/// Fully resolved configuration with defaults applied.
#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub experiment: Option<Experiment>,
    pub ancilla_dim: usize,
    pub spin: Spin,
    pub n_sites: usize,
    pub coupling: f64,
    /// Custom diagonal energies; replaces the Ising chain when present.
    pub energies: Option<Vec<f64>>,
    pub local_dim: Option<usize>,
    pub state: InputState,
    pub energy_min: f64,
    pub energy_max: f64,
    pub energy_steps: usize,
    pub sigma: f64,
    pub mu: f64,
    pub n_times: usize,
    pub seed: u64,
    pub threshold: f64,
    pub output: Option<PathBuf>,
    pub repeats: usize,
    pub dims: Vec<usize>,
    pub delta_min: f64,
    pub delta_max: f64,
    pub delta_steps: usize,
    pub time: f64,
    pub time_distribution: TimeDistribution,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            experiment: None,
            ancilla_dim: 2,
            spin: Spin::Half,
            n_sites: 5,
            coupling: 1.0,
            energies: None,
            local_dim: None,
            state: InputState::Basis(0),
            energy_min: -7.0,
            energy_max: 7.0,
            energy_steps: 141,
            sigma: 5.0,
            mu: 0.0,
            n_times: 500,
            seed: 1,
            threshold: 0.1,
            output: None,
            repeats: 5,
            dims: vec![2, 3, 4, 5],
            delta_min: -2.0 * std::f64::consts::PI,
            delta_max: 2.0 * std::f64::consts::PI,
            delta_steps: 401,
            time: 1.0,
            time_distribution: TimeDistribution::Gaussian,
        }
    }
}

/// Key reference printed by `--help`.
pub const KEYS_HELP: &str = "\
Config keys (defaults in brackets):
  ancilla_dim        ancilla dimension d [2]
  spin               half | one [half]
  n_sites            chain length N [5]
  coupling           Ising coupling J [1]
  energies           comma-separated custom diagonal energies (replaces the Ising chain)
  local_dim          site dimension for custom energies [from spin]
  state              basis index, `homogeneous`, or repeated `index:re,im` terms [0]
  energy_min         first grid energy [-7]
  energy_max         last grid energy [7]
  energy_steps       number of grid energies [141]
  sigma              standard deviation of the evolution time [5]
  mu                 mean evolution time [0]
  n_times            evolution times per energy [500]
  seed               global seed [1]
  threshold          analytic amplitude bound of the fluctuation region [0.1]
  output             CSV path [standard output]
  repeats            independent seeds for table1 [5]
  dims               ancilla dimensions for table1 and prob-curves [2,3,4,5]
  delta_min          first phase offset for prob-curves [-2pi]
  delta_max          last phase offset for prob-curves [2pi]
  delta_steps        number of phase offsets for prob-curves [401]
  time               evolution time for prob-curves [1]
  time_distribution  gaussian | geometric [gaussian]
";

/// One `key = value` entry with its source line (0 for overrides).
#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub key: String,
    pub value: String,
    pub line: usize,
}

pub fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

/// Splits config text into entries, dropping blanks and comments.
pub fn parse_entries(text: &str) -> Result<Vec<Entry>, CliError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| config_err(format!("line {}: expected `key = value`", i + 1)))?;
        let key = key.trim();
        if key.is_empty() {
            return Err(config_err(format!("line {}: empty key", i + 1)));
        }
        out.push(Entry {
            key: key.to_string(),
            value: value.trim().to_string(),
            line: i + 1,
        });
    }
    Ok(out)
}

/// Parses a `--set key=value` override.
pub fn parse_override(s: &str) -> Result<Entry, CliError> {
    let (key, value) = s
        .split_once('=')
        .ok_or_else(|| config_err(format!("override `{s}` is not `key=value`")))?;
    Ok(Entry {
        key: key.trim().to_string(),
        value: value.trim().to_string(),
        line: 0,
    })
}

fn num<T: FromStr>(e: &Entry) -> Result<T, CliError> {
    e.value.parse().map_err(|_| bad(e, "not a valid number"))
}

fn float(e: &Entry) -> Result<f64, CliError> {
    let v: f64 = num(e)?;
    if !v.is_finite() {
        return Err(bad(e, "must be finite"));
    }
    Ok(v)
}

fn bad(e: &Entry, msg: &str) -> CliError {
    if e.line == 0 {
        config_err(format!("override `{}`: {msg}", e.key))
    } else {
        config_err(format!("line {} (`{}`): {msg}", e.line, e.key))
    }
}

fn list<T: FromStr>(e: &Entry) -> Result<Vec<T>, CliError> {
    e.value
        .split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| bad(e, "not a comma-separated list of numbers"))
        })
        .collect()
}

fn parse_term(e: &Entry) -> Result<(usize, Complex64), CliError> {
    let (idx, amp) = e
        .value
        .split_once(':')
        .ok_or_else(|| bad(e, "expected `index:re,im`"))?;
    let idx: usize = idx.trim().parse().map_err(|_| bad(e, "bad basis index"))?;
    let (re, im) = amp
        .split_once(',')
        .ok_or_else(|| bad(e, "expected `index:re,im`"))?;
    let re: f64 = re.trim().parse().map_err(|_| bad(e, "bad real part"))?;
    let im: f64 = im
        .trim()
        .parse()
        .map_err(|_| bad(e, "bad imaginary part"))?;
    if !re.is_finite() || !im.is_finite() {
        return Err(bad(e, "amplitude must be finite"));
    }
    Ok((idx, Complex64::new(re, im)))
}

fn parse_state(entries: &[&Entry]) -> Result<InputState, CliError> {
    match entries {
        [] => Ok(InputState::Basis(0)),
        [one] if one.value == "homogeneous" => Ok(InputState::Homogeneous),
        [one] if !one.value.contains(':') => Ok(InputState::Basis(
            one.value.parse().map_err(|_| bad(one, "bad basis index"))?,
        )),
        many => {
            let terms = many
                .iter()
                .map(|e| parse_term(e))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(InputState::Weighted(terms))
        }
    }
}

impl Config {
    /// Builds a config from file entries followed by overrides.
    pub fn from_entries(file: &[Entry], overrides: &[Entry]) -> Result<Self, CliError> {
        let state_overridden = overrides.iter().any(|e| e.key == "state");
        let mut cfg = Config::default();
        let mut states: Vec<&Entry> = Vec::new();
        for e in file.iter().chain(overrides) {
            if e.key == "state" {
                if !(state_overridden && e.line != 0) {
                    states.push(e);
                }
                continue;
            }
            cfg.set(e)?;
        }
        cfg.state = parse_state(&states)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn parse(text: &str, overrides: &[Entry]) -> Result<Self, CliError> {
        Self::from_entries(&parse_entries(text)?, overrides)
    }

    fn set(&mut self, e: &Entry) -> Result<(), CliError> {
        match e.key.as_str() {
            "experiment" => self.experiment = Some(e.value.parse()?),
            "ancilla_dim" => self.ancilla_dim = num(e)?,
            "spin" => {
                self.spin = match e.value.as_str() {
                    "half" => Spin::Half,
                    "one" => Spin::One,
                    _ => return Err(bad(e, "expected `half` or `one`")),
                }
            }
            "n_sites" => self.n_sites = num(e)?,
            "coupling" => self.coupling = float(e)?,
            "energies" => self.energies = Some(list(e)?),
            "local_dim" => self.local_dim = Some(num(e)?),
            "energy_min" => self.energy_min = float(e)?,
            "energy_max" => self.energy_max = float(e)?,
            "energy_steps" => self.energy_steps = num(e)?,
            "sigma" => self.sigma = float(e)?,
            "mu" => self.mu = float(e)?,
            "n_times" => self.n_times = num(e)?,
            "seed" => self.seed = num(e)?,
            "threshold" => self.threshold = float(e)?,
            "output" => self.output = Some(PathBuf::from(&e.value)),
            "repeats" => self.repeats = num(e)?,
            "dims" => self.dims = list(e)?,
            "delta_min" => self.delta_min = float(e)?,
            "delta_max" => self.delta_max = float(e)?,
            "delta_steps" => self.delta_steps = num(e)?,
            "time" => self.time = float(e)?,
            "time_distribution" => {
                self.time_distribution = match e.value.as_str() {
                    "gaussian" => TimeDistribution::Gaussian,
                    "geometric" => TimeDistribution::GeometricSeries,
                    _ => return Err(bad(e, "expected `gaussian` or `geometric`")),
                }
            }
            _ => return Err(bad(e, "unknown key")),
        }
        Ok(())
    }

    fn validate(&self) -> Result<(), CliError> {
        if self.ancilla_dim < 2 {
            return Err(config_err("ancilla_dim must be at least 2"));
        }
        if self.energy_steps < 1 {
            return Err(config_err("energy_steps must be at least 1"));
        }
        if self.energy_max < self.energy_min {
            return Err(config_err("energy_max must not be below energy_min"));
        }
        if self.n_times < 1 {
            return Err(config_err("n_times must be at least 1"));
        }
        if self.sigma.is_nan() || self.sigma <= 0.0 {
            return Err(config_err("sigma must be positive"));
        }
        if self.repeats < 1 {
            return Err(config_err("repeats must be at least 1"));
        }
        if self.dims.is_empty() || self.dims.iter().any(|&d| d < 2) {
            return Err(config_err(
                "dims must list ancilla dimensions of at least 2",
            ));
        }
        if self.delta_steps < 1 || self.delta_max < self.delta_min {
            return Err(config_err("invalid delta range"));
        }
        Ok(())
    }

    pub fn hamiltonian(&self) -> Result<DiagonalHamiltonian, CliError> {
        let h = match &self.energies {
            Some(e) => {
                let local = self.local_dim.unwrap_or(self.spin.local_dim());
                DiagonalHamiltonian::from_energies(local, self.n_sites, e.clone())
            }
            None => ising_diagonal(self.spin, self.n_sites, self.coupling),
        };
        h.map_err(|e| config_err(e.to_string()))
    }

    /// Input state on the system register, renormalized if needed.
    pub fn state_vector(&self, h: &DiagonalHamiltonian) -> Result<StateVector, CliError> {
        let dim = h.dim();
        let psi = match &self.state {
            InputState::Basis(x) => make_basis_state(dim, *x),
            InputState::Homogeneous => homogeneous_state(h.local_dim(), h.n_sites()),
            InputState::Weighted(terms) => {
                let mut amps = vec![Complex64::new(0.0, 0.0); dim];
                for &(x, c) in terms {
                    let slot = amps
                        .get_mut(x)
                        .ok_or_else(|| config_err(format!("state index {x} outside 0..{dim}")))?;
                    if *slot != Complex64::new(0.0, 0.0) {
                        return Err(config_err(format!("state index {x} listed twice")));
                    }
                    *slot = c;
                }
                let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
                if (norm - 1.0).abs() > rodeo_core::tol::INPUT_NORM {
                    return Err(config_err(format!("state norm {norm} is not 1")));
                }
                StateVector::from_amplitudes(amps.into_iter().map(|a| a / norm).collect())
            }
        };
        psi.map_err(|e| config_err(e.to_string()))
    }

    pub fn grid(&self) -> Result<Vec<f64>, CliError> {
        energy_grid(self.energy_min, self.energy_max, self.energy_steps)
            .map_err(|e| config_err(e.to_string()))
    }

    pub fn sampler(&self, seed: u64) -> Result<TimeSampler, CliError> {
        let mut s = TimeSampler::gaussian(self.mu, self.sigma, seed, self.n_times)
            .map_err(|e| config_err(e.to_string()))?;
        s.distribution = self.time_distribution;
        Ok(s)
    }
}
