//! Monte Carlo death-birth dynamics of the donation game, estimating the
//! fixation probability of a single invading cooperator.
//!
//! Each trial starts from all defectors, flips one uniformly random node to
//! cooperation, and then repeats elementary updates: a uniformly random node
//! dies and adopts the strategy of a neighbor `y` drawn with probability
//! proportional to `1 + delta * payoff(y)`, where `payoff(y) = -c*s_y +
//! b * (cooperating fraction of y's neighbors)` (edge-averaged donation
//! game). The trial ends when cooperation fixes or goes extinct; the
//! estimate is the fraction of fixed trials.
//!
//! Trials draw from independent per-trial random streams derived from the
//! master seed, so results are bit-identical regardless of evaluation order
//! and could be partitioned across workers without changing the estimate.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::coalescence::{bstar_db, solve_coalescence, Classification, Method, SolveError};
use crate::graph::Graph;
use crate::random::stream_rng;

/// Default cap on elementary updates per trial. Absorption is almost surely
/// finite but unbounded; trials that hit the cap are counted and reported,
/// never silently dropped.
pub const DEFAULT_MAX_STEPS: u64 = 100_000_000;

/// Errors from the simulator.
#[derive(Debug, Error)]
pub enum SimulateError {
    /// The dynamics need at least two nodes.
    #[error("graph has {n} nodes; the dynamics need at least 2")]
    TooSmall {
        /// Node count.
        n: usize,
    },
    /// Fixation is ill-defined on a disconnected graph.
    #[error("graph is disconnected")]
    Disconnected,
    /// Parameters violate a config invariant.
    #[error("invalid simulation config: {0}")]
    InvalidConfig(String),
    /// A crossover scan needs a graph with a finite positive critical ratio.
    #[error("crossover scan requires a promoter graph; this one is classified {0:?}")]
    NotPromoter(Classification),
    /// The critical-ratio computation for a crossover scan failed.
    #[error(transparent)]
    Solve(#[from] SolveError),
}

/// Parameters of one fixation estimate.
#[derive(Debug, Clone, Copy)]
pub struct SimulationConfig {
    /// Benefit a cooperator donates to each neighbor.
    pub b: f64,
    /// Cost a cooperator pays (the conventional normalization is `c = 1`).
    pub c: f64,
    /// Selection strength; `0` is neutral drift.
    pub delta: f64,
    /// Number of independent trials.
    pub trials: u64,
    /// Master seed; trial `t` uses the derived stream `(seed, t)`.
    pub seed: u64,
    /// Cap on elementary updates per trial; see [`DEFAULT_MAX_STEPS`].
    pub max_steps: u64,
}

impl SimulationConfig {
    /// Validates selection-strength bounds: every reachable replacement
    /// weight `1 + delta * payoff` must stay positive. Payoffs range over
    /// the corner set `{0, b, -c, b-c}`.
    fn validate(&self) -> Result<(), SimulateError> {
        if !(self.delta >= 0.0) {
            return Err(SimulateError::InvalidConfig(format!(
                "delta {} must be nonnegative",
                self.delta
            )));
        }
        if self.trials == 0 {
            return Err(SimulateError::InvalidConfig(
                "trials must be positive".to_string(),
            ));
        }
        let min_payoff = [0.0, self.b, -self.c, self.b - self.c]
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        if !(1.0 + self.delta * min_payoff > 0.0) {
            return Err(SimulateError::InvalidConfig(format!(
                "replacement weight 1 + delta*payoff can reach {} (delta {}, b {}, c {})",
                1.0 + self.delta * min_payoff,
                self.delta,
                self.b,
                self.c
            )));
        }
        Ok(())
    }
}

/// Outcome of a fixation estimate.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct SimulationResult {
    /// Trials that ended with cooperation fixed.
    pub fixation_count: u64,
    /// Total trials run.
    pub trials: u64,
    /// Trials that hit the step cap before absorbing (counted as
    /// non-fixation in `rho_hat`; a nonzero value flags an undersized cap).
    pub capped_trials: u64,
    /// Estimated fixation probability `fixation_count / trials`.
    pub rho_hat: f64,
    /// Binomial standard error `sqrt(rho_hat * (1 - rho_hat) / trials)`.
    pub std_err: f64,
    /// `N * rho_hat`: above 1 means selection favors the invading
    /// cooperator relative to neutral drift.
    pub n_rho: f64,
}

enum TrialOutcome {
    Fixed,
    Extinct,
    Capped,
}

/// One trial's mutable state with incremental bookkeeping: the cooperator
/// count and each node's count of cooperating neighbors are maintained
/// exactly, so a step costs `O(1)` unless the dying node sits on the
/// cooperation boundary.
struct TrialState<'a> {
    g: &'a Graph,
    /// `delta * c`.
    delta_c: f64,
    /// `delta * b / k_y` per node.
    delta_b_over_k: &'a [f64],
    strategy: Vec<bool>,
    coop_neighbors: Vec<u32>,
    coop_count: usize,
    weights: Vec<f64>,
}

impl<'a> TrialState<'a> {
    fn new(g: &'a Graph, delta_c: f64, delta_b_over_k: &'a [f64]) -> Self {
        let n = g.node_count();
        let max_degree = (0..n).map(|x| g.degree(x)).max().unwrap_or(0);
        TrialState {
            g,
            delta_c,
            delta_b_over_k,
            strategy: vec![false; n],
            coop_neighbors: vec![0; n],
            coop_count: 0,
            weights: vec![0.0; max_degree],
        }
    }

    /// Resets to all defectors plus a single cooperator at `mutant`.
    fn reset(&mut self, mutant: usize) {
        self.strategy.fill(false);
        self.coop_neighbors.fill(0);
        self.strategy[mutant] = true;
        self.coop_count = 1;
        for &z in self.g.neighbors(mutant) {
            self.coop_neighbors[z as usize] += 1;
        }
    }

    fn flip(&mut self, x: usize) {
        let now_cooperates = !self.strategy[x];
        self.strategy[x] = now_cooperates;
        if now_cooperates {
            self.coop_count += 1;
            for &z in self.g.neighbors(x) {
                self.coop_neighbors[z as usize] += 1;
            }
        } else {
            self.coop_count -= 1;
            for &z in self.g.neighbors(x) {
                self.coop_neighbors[z as usize] -= 1;
            }
        }
    }

    /// One elementary update: a uniform node dies and adopts a
    /// payoff-weighted neighbor's strategy.
    fn step(&mut self, rng: &mut ChaCha8Rng) {
        let n = self.g.node_count();
        let x = rng.gen_range(0..n);
        let k = self.g.degree(x);
        // The state can only change if some neighbor disagrees with x; in
        // the frequent interior case the sampled neighbor's strategy is
        // x's own whatever the payoffs, so the draw can be skipped.
        let disagreeing_neighbors = if self.strategy[x] {
            k as u32 - self.coop_neighbors[x]
        } else {
            self.coop_neighbors[x]
        };
        if disagreeing_neighbors == 0 {
            return;
        }
        let neighbors = self.g.neighbors(x);
        let mut total = 0.0;
        for (i, &y) in neighbors.iter().enumerate() {
            let y = y as usize;
            let benefit = self.coop_neighbors[y] as f64 * self.delta_b_over_k[y];
            let cost = if self.strategy[y] { self.delta_c } else { 0.0 };
            let w = 1.0 + benefit - cost;
            self.weights[i] = w;
            total += w;
        }
        let mut r = rng.gen::<f64>() * total;
        let mut adopted = neighbors[k - 1] as usize;
        for (&w, &y) in self.weights.iter().zip(neighbors) {
            r -= w;
            if r <= 0.0 {
                adopted = y as usize;
                break;
            }
        }
        if self.strategy[adopted] != self.strategy[x] {
            self.flip(x);
        }
    }

    fn run(&mut self, rng: &mut ChaCha8Rng, max_steps: u64) -> TrialOutcome {
        let n = self.g.node_count();
        self.reset(rng.gen_range(0..n));
        for _ in 0..max_steps {
            if self.coop_count == 0 {
                return TrialOutcome::Extinct;
            }
            if self.coop_count == n {
                return TrialOutcome::Fixed;
            }
            self.step(rng);
        }
        match self.coop_count {
            0 => TrialOutcome::Extinct,
            c if c == n => TrialOutcome::Fixed,
            _ => TrialOutcome::Capped,
        }
    }
}

/// Estimates the fixation probability of a single invading cooperator by
/// direct simulation of the death-birth dynamics.
pub fn estimate_fixation(
    g: &Graph,
    cfg: &SimulationConfig,
) -> Result<SimulationResult, SimulateError> {
    cfg.validate()?;
    let n = g.node_count();
    if n < 2 {
        return Err(SimulateError::TooSmall { n });
    }
    if !g.is_connected() {
        return Err(SimulateError::Disconnected);
    }
    let delta_b_over_k: Vec<f64> = (0..n)
        .map(|y| cfg.delta * cfg.b / g.degree(y) as f64)
        .collect();
    let mut state = TrialState::new(g, cfg.delta * cfg.c, &delta_b_over_k);
    let mut fixation_count = 0u64;
    let mut capped_trials = 0u64;
    for trial in 0..cfg.trials {
        let mut rng = stream_rng(cfg.seed, trial);
        match state.run(&mut rng, cfg.max_steps) {
            TrialOutcome::Fixed => fixation_count += 1,
            TrialOutcome::Extinct => {}
            TrialOutcome::Capped => capped_trials += 1,
        }
    }
    let rho_hat = fixation_count as f64 / cfg.trials as f64;
    Ok(SimulationResult {
        fixation_count,
        trials: cfg.trials,
        capped_trials,
        rho_hat,
        std_err: (rho_hat * (1.0 - rho_hat) / cfg.trials as f64).sqrt(),
        n_rho: n as f64 * rho_hat,
    })
}

/// One row of a crossover scan.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct ScanPoint {
    /// Multiplier of the critical ratio.
    pub factor: f64,
    /// Benefit used, `factor * b_star`.
    pub b: f64,
    /// Fixation estimate at that benefit.
    pub result: SimulationResult,
}

/// Runs [`estimate_fixation`] at `b = factor * b_star` for each factor,
/// holding `c = 1`. The crossing of `N * rho_hat` through 1 near
/// `factor = 1` is the dynamical signature of the critical ratio.
///
/// Each factor derives its own seed from the master seed, so the points are
/// statistically independent.
pub fn crossover_scan(
    g: &Graph,
    delta: f64,
    trials: u64,
    seed: u64,
    factors: &[f64],
) -> Result<Vec<ScanPoint>, SimulateError> {
    let sol = solve_coalescence(g, Method::auto(g.node_count()))?;
    let report = bstar_db(&sol, g);
    let b_star = match report.classification {
        Classification::Promoter => report.b_star.expect("promoter has a finite ratio"),
        other => return Err(SimulateError::NotPromoter(other)),
    };
    let mut points = Vec::with_capacity(factors.len());
    for (i, &factor) in factors.iter().enumerate() {
        let factor_seed = stream_rng(seed, i as u64).gen::<u64>();
        let cfg = SimulationConfig {
            b: factor * b_star,
            c: 1.0,
            delta,
            trials,
            seed: factor_seed,
            max_steps: DEFAULT_MAX_STEPS,
        };
        let result = estimate_fixation(g, &cfg)?;
        points.push(ScanPoint {
            factor,
            b: cfg.b,
            result,
        });
    }
    Ok(points)
}
