//! Reproducible experiment runs behind the `pathwise-hj` binary.
//!
//! A run is a [`Scenario`] plus a [`Config`]. The config is resolved against
//! the scenario defaults (unknown keys are errors), echoed verbatim into the
//! output directory, and every random draw is derived from `[run] seed` and
//! `[run] stream`, so rerunning the echoed config reproduces the artifact.

mod artifact;
mod config;
mod deterministic;
mod stochastic;
mod tools;

use std::path::Path;

pub use artifact::{Assertion, Relation, RunArtifact, Table};
pub use config::Config;
pub use deterministic::{run_blowup, run_crossval, run_limit, run_stability};
pub use stochastic::{run_brownian_study, run_walk_convergence};
pub use tools::{run_norms, run_paths, run_solve};

use crate::error::{Error, Result};
use crate::par::Exec;
use crate::paths::RngSeed;

/// Experiments reachable from the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    Solve,
    Paths,
    Norms,
    Blowup,
    Limit,
    Brownian,
    Walks,
    Crossval,
    Stability,
}

const RUN_DEFAULTS: [(&str, &str, &str); 3] = [
    ("run", "seed", "1"),
    ("run", "stream", "0"),
    ("run", "parallel", "true"),
];

impl Scenario {
    pub const ALL: [Scenario; 9] = [
        Scenario::Solve,
        Scenario::Paths,
        Scenario::Norms,
        Scenario::Blowup,
        Scenario::Limit,
        Scenario::Brownian,
        Scenario::Walks,
        Scenario::Crossval,
        Scenario::Stability,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::Solve => "solve",
            Scenario::Paths => "paths",
            Scenario::Norms => "norms",
            Scenario::Blowup => "blowup",
            Scenario::Limit => "limit",
            Scenario::Brownian => "brownian",
            Scenario::Walks => "walks",
            Scenario::Crossval => "crossval",
            Scenario::Stability => "stability",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|s| s.name() == name)
            .ok_or_else(|| Error::Config(format!("unknown scenario {name:?}")))
    }

    pub fn description(self) -> &'static str {
        match self {
            Scenario::Solve => "solve one problem with either engine and write snapshots",
            Scenario::Paths => "generate a driving path and its regularity statistics",
            Scenario::Norms => "DC splitting, K-profile and membership sums of a power Hamiltonian",
            Scenario::Blowup => "growth exponent of u_n(0, T) along rescaled sawtooth paths",
            Scenario::Limit => "convergence to |x| ∨ c0 t^α in the critical scaling",
            Scenario::Brownian => "oscillation counts of Brownian paths and walk exit-time tails",
            Scenario::Walks => "random-walk versus Brownian-interpolant solution ensembles",
            Scenario::Crossval => {
                "finite differences against the conjugate engine and closed forms"
            }
            Scenario::Stability => "path-stability ratios against the DC-norm bound",
        }
    }

    /// `(section, key, default)` for every accepted key.
    pub fn defaults(self) -> Vec<(&'static str, &'static str, &'static str)> {
        let own: &[(&str, &str)] = match self {
            Scenario::Solve => &[
                ("engine", "hopf"),
                ("beta", "0.5"),
                ("coef", "2"),
                ("delta", "0"),
                ("a", "0"),
                ("path", "teeth"),
                ("horizon", "2"),
                ("slope", "1"),
                ("steps", "1024"),
                ("walk_n", "16"),
                ("sample_times", "0, 0.5, 1, 1.5, 2"),
                ("x_min", "-4"),
                ("x_max", "4"),
                ("x_nodes", "801"),
                ("dual_nodes", "4097"),
                ("h_radius", "2"),
                ("h_nodes", "17"),
                ("cfl", "0.9"),
                ("tolerance", "0.001"),
            ],
            Scenario::Paths => &[
                ("kind", "brownian"),
                ("horizon", "1"),
                ("steps", "4096"),
                ("walk_n", "64"),
                ("n", "4"),
                ("alpha", "0.25"),
                ("amp", "4"),
                ("deltas", "1, 0.5, 0.25, 0.125, 0.0625"),
                ("p", "2"),
                ("holder_alpha", "0.5"),
                ("n_max", "12"),
            ],
            Scenario::Norms => &[
                ("beta", "0.5"),
                ("delta", "0.25"),
                ("radius", "1"),
                ("nodes", "131073"),
                ("alphas", "0.75, 0.25"),
                ("n_levels", "30, 14"),
                ("fit_levels", "4, 14"),
                ("exponent_rel_tol", "0.1"),
            ],
            Scenario::Blowup => &[
                ("alpha", "0.25"),
                ("beta", "0.25"),
                ("n_list", "2, 3, 4, 5, 6, 7, 8, 9, 10"),
                ("horizon", "1"),
                ("dual_nodes", "16385"),
                ("tolerance", "0.1"),
            ],
            Scenario::Limit => &[
                ("alpha", "0.5"),
                ("c0", "1"),
                ("n_list", "2, 4, 8"),
                ("horizon", "1"),
                ("probe_times", "8"),
                ("x_max", "3"),
                ("x_nodes", "97"),
                ("dual_nodes", "16385"),
                ("threshold", "0.1"),
            ],
            Scenario::Brownian => &[
                ("samples", "200"),
                ("steps_log2", "16"),
                ("n_levels", "14"),
                ("horizon", "1"),
                ("p95_max", "20"),
                ("walks", "2000"),
                ("m", "10"),
                ("t_walk", "10000"),
                ("lambda", "2"),
                ("epochs", "2000"),
            ],
            Scenario::Walks => &[
                ("n_list", "4, 8, 16"),
                ("samples", "500"),
                ("x_probes", "0, 0.5, 1"),
                ("beta", "0.75"),
                ("delta", "0.125"),
                ("horizon", "1"),
                ("dual_nodes", "1025"),
                ("quantiles", "0.1, 0.25, 0.5, 0.75, 0.9"),
            ],
            Scenario::Crossval => &[
                ("resolutions", "401, 801, 1601"),
                ("beta", "0.5"),
                ("a_list", "0, 1"),
                ("times", "0.5, 1, 1.5, 2"),
                ("check_times", "1, 2"),
                ("x_max", "4"),
                ("window", "2"),
                ("dual_nodes", "4097"),
                ("h_radius", "2"),
                ("h_nodes", "17"),
                ("cfl", "0.9"),
                ("min_order", "0.8"),
            ],
            Scenario::Stability => &[
                ("trials", "10"),
                ("eps_exponents", "1, 2, 3, 4, 5, 6, 7, 8, 9, 10"),
                ("beta", "0.5"),
                ("delta", "0.25"),
                ("radius", "1"),
                ("h_nodes", "401"),
                ("x_max", "3"),
                ("x_nodes", "121"),
                ("path_steps", "64"),
                ("ratio_bound", "1"),
                ("variation_max", "2"),
            ],
        };
        let mut out: Vec<_> = RUN_DEFAULTS.to_vec();
        out.extend(own.iter().map(|(k, v)| (self.name(), *k, *v)));
        out
    }

    /// Applies defaults and an optional seed override.
    pub fn resolve(self, user: &Config, seed: Option<u64>) -> Result<Config> {
        let mut cfg = user.resolve(&self.defaults())?;
        if let Some(s) = seed {
            cfg.set("run", "seed", s);
        }
        Ok(cfg)
    }
}

/// Root seed of a resolved config.
pub fn run_seed(cfg: &Config) -> Result<RngSeed> {
    Ok(RngSeed::new(
        cfg.get("run", "seed")?,
        cfg.get("run", "stream")?,
    ))
}

/// Execution strategy requested by `[run] parallel`.
pub fn run_exec(cfg: &Config) -> Result<Exec> {
    Ok(if cfg.get::<bool>("run", "parallel")? {
        Exec::default()
    } else {
        Exec::Sequential
    })
}

/// Runs a scenario on an already resolved config.
pub fn run(scenario: Scenario, cfg: &Config) -> Result<RunArtifact> {
    let mut art = match scenario {
        Scenario::Solve => run_solve(cfg),
        Scenario::Paths => run_paths(cfg),
        Scenario::Norms => run_norms(cfg),
        Scenario::Blowup => run_blowup(cfg),
        Scenario::Limit => run_limit(cfg),
        Scenario::Brownian => run_brownian_study(cfg),
        Scenario::Walks => run_walk_convergence(cfg),
        Scenario::Crossval => run_crossval(cfg),
        Scenario::Stability => run_stability(cfg),
    }?;
    let seed = run_seed(cfg)?;
    art.metric("seed", seed.seed);
    art.metric("stream", seed.stream);
    Ok(art)
}

/// Resolves `config_text`, runs the scenario and writes everything into `out`.
pub fn execute(
    scenario: Scenario,
    config_text: &str,
    seed: Option<u64>,
    out: &Path,
) -> Result<RunArtifact> {
    let cfg = scenario.resolve(&Config::parse(config_text)?, seed)?;
    let art = run(scenario, &cfg)?;
    art.write(out, &cfg.echo())?;
    Ok(art)
}

pub(crate) fn param<T: std::str::FromStr>(cfg: &Config, s: Scenario, key: &str) -> Result<T> {
    cfg.get(s.name(), key)
}

pub(crate) fn param_list<T: std::str::FromStr>(
    cfg: &Config,
    s: Scenario,
    key: &str,
) -> Result<Vec<T>> {
    cfg.get_list(s.name(), key)
}

pub(crate) fn config_error<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Config(msg.into()))
}
