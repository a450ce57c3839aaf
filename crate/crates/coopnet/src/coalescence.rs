//! Meeting times of coalescing random walks and the critical benefit-to-cost
//! ratio `b*` they determine.
//!
//! Two walkers sit on nodes `x` and `y`; each step, one of the two is chosen
//! uniformly and moves according to the replacement kernel of the update rule
//! (death-birth: uniform over neighbors; imitation: uniform over self and
//! neighbors). The expected meeting times `tau_xy` satisfy a linear system
//! over unordered node pairs. From the solution, cooperation in the donation
//! game is favored under weak selection exactly when `b/c` exceeds
//!
//! ```text
//! b* = (sum_x k_x tau_x - 2 N kbar) / (sum_x k_x p_x tau_x - 2 N kbar)
//! ```
//!
//! where `tau_x` is the remeeting time from node `x`, `p_x` the two-step
//! return probability of a simple random walk, and `kbar` the mean degree.
//! A positive denominator makes the structure a promoter of cooperation
//! (`b* > 1`), a negative one a promoter of spite (`b* < -1`), and a zero
//! denominator means cooperation is never favored at any benefit.
//!
//! Multiplying the pair equation for `(x, y)` by `2 d_x d_y` (with `d_x` the
//! kernel's per-node weight count) turns the system into a symmetric,
//! positive-definite, integer-coefficient matrix; the direct path hands that
//! matrix to a dense Cholesky solve, and the iterative path runs an
//! over-relaxed Gauss-Seidel sweep on the equivalent fixed-point form.

use serde::Serialize;

use crate::graph::Graph;
use crate::linalg;

/// Hard node cap for the dense direct solve; C(170,2) unknowns is ~1.7 GB of
/// matrix, about the practical ceiling.
pub const DIRECT_MAX_NODES: usize = 170;

/// Node count at which [`Method::auto`] switches from direct to iterative.
pub const AUTO_DIRECT_MAX_NODES: usize = 150;

/// Default convergence tolerance (max residual of the fixed-point form,
/// relative to the largest meeting time) for the iterative method.
pub const DEFAULT_ITER_TOL: f64 = 1e-12;

/// Default sweep cap for the iterative method.
pub const DEFAULT_MAX_SWEEPS: usize = 200_000;

/// Relative zero tolerance for classifying the `b*` denominator as zero.
pub const ZERO_TOL_REL: f64 = 1e-9;

/// Errors from the coalescence solvers and derived computations.
#[derive(Debug, thiserror::Error)]
pub enum SolveError {
    #[error("graph is disconnected: meeting times are infinite")]
    Disconnected,
    #[error("graph has {n} nodes; at least 3 required (on 2 nodes the ratio degenerates to 0/0)")]
    TooSmall { n: usize },
    #[error("graph has {n} nodes; the dense direct solve is capped at {max} (use the iterative method)")]
    TooLargeForDirect { n: usize, max: usize },
    #[error("graph has {n} nodes; the exact rational solve is capped at {max}")]
    TooLargeForExact { n: usize, max: usize },
    #[error("iterative solve did not reach tol within {sweeps} sweeps (residual {residual:.3e})")]
    NotConverged { residual: f64, sweeps: usize },
    #[error("dense factorization failed: {0}")]
    Factorization(String),
    #[error("b* is undefined for a NeverFavored structure; the general-game condition has no threshold")]
    UndefinedGameCondition,
}

/// Update rule determining the walk kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Updating {
    /// Death-birth: the walker moves uniformly over neighbors.
    #[serde(rename = "db")]
    DeathBirth,
    /// Imitation: the walker moves uniformly over itself and its neighbors.
    #[serde(rename = "im")]
    Imitation,
}

impl Updating {
    /// Per-node weight count `d_x` of the replacement kernel.
    pub(crate) fn weight_count(self, degree: usize) -> usize {
        match self {
            Updating::DeathBirth => degree,
            Updating::Imitation => degree + 1,
        }
    }

    pub(crate) fn includes_self(self) -> bool {
        matches!(self, Updating::Imitation)
    }

    /// Short identifier used in reports: `"db"` or `"im"`.
    pub fn as_str(self) -> &'static str {
        match self {
            Updating::DeathBirth => "db",
            Updating::Imitation => "im",
        }
    }
}

impl std::fmt::Display for Updating {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Solver choice for the pair system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Method {
    /// Dense Cholesky factorization of the symmetrized integer system.
    Direct,
    /// Over-relaxed Gauss-Seidel sweeps on the fixed-point form, run until
    /// the max residual drops below `tol` or `max_sweeps` is exhausted.
    Iterative { tol: f64, max_sweeps: usize },
}

impl Method {
    /// Iterative method with default tolerance and sweep cap.
    pub fn iterative_default() -> Method {
        Method::Iterative {
            tol: DEFAULT_ITER_TOL,
            max_sweeps: DEFAULT_MAX_SWEEPS,
        }
    }

    /// Direct for graphs up to [`AUTO_DIRECT_MAX_NODES`] nodes, iterative
    /// defaults beyond.
    pub fn auto(n: usize) -> Method {
        if n <= AUTO_DIRECT_MAX_NODES {
            Method::Direct
        } else {
            Method::iterative_default()
        }
    }

    /// Label used in reports: `"direct"` or `"iterative"`.
    pub fn label(&self) -> &'static str {
        match self {
            Method::Direct => "direct",
            Method::Iterative { .. } => "iterative",
        }
    }
}

/// Symmetric pair values `v(x, y)` stored as an upper triangle; the diagonal
/// is implicitly zero (a pair of walkers on the same node has met).
#[derive(Debug, Clone)]
pub struct PairValues {
    n: usize,
    data: Vec<f64>,
}

#[inline]
pub(crate) fn pair_index(n: usize, x: usize, y: usize) -> usize {
    debug_assert!(x < y && y < n);
    x * (2 * n - x - 1) / 2 + (y - x - 1)
}

impl PairValues {
    fn filled(n: usize, value: f64) -> PairValues {
        PairValues {
            n,
            data: vec![value; n * (n - 1) / 2],
        }
    }

    /// Number of nodes.
    pub fn node_count(&self) -> usize {
        self.n
    }

    /// Value for the unordered pair `{x, y}`; zero when `x == y`.
    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        match x.cmp(&y) {
            std::cmp::Ordering::Less => self.data[pair_index(self.n, x, y)],
            std::cmp::Ordering::Equal => 0.0,
            std::cmp::Ordering::Greater => self.data[pair_index(self.n, y, x)],
        }
    }

    #[inline]
    fn set(&mut self, x: usize, y: usize, value: f64) {
        let idx = pair_index(self.n, x.min(y), x.max(y));
        self.data[idx] = value;
    }

    /// Largest absolute value over all pairs.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, &v| m.max(v.abs()))
    }

    /// Iterates `(x, y, value)` over pairs with `x < y`, in index order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        let n = self.n;
        (0..n)
            .flat_map(move |x| ((x + 1)..n).map(move |y| (x, y)))
            .zip(self.data.iter())
            .map(|((x, y), &v)| (x, y, v))
    }
}

/// Solution of the pair system for one graph and update rule.
#[derive(Debug, Clone)]
pub struct CoalescenceSolution {
    /// Update rule the solution was computed for.
    pub updating: Updating,
    /// Two-step return probability of the simple random walk,
    /// `p_x = (1/k_x) sum_{y ~ x} 1/k_y`.
    pub p: Vec<f64>,
    /// Pairwise meeting times `tau_xy`.
    pub tau: PairValues,
    /// Remeeting times `tau_x = 1 + sum_y p_xy tau_xy` under the solution's
    /// replacement kernel.
    pub tau_node: Vec<f64>,
    /// Max componentwise violation of the pair equations at the solution,
    /// relative to the largest meeting time (absolute when that maximum is
    /// below one; an absolute measure would be finer than one float ulp once
    /// meeting times reach the thousands).
    pub residual: f64,
    /// Label of the method that produced the solution.
    pub method: &'static str,
}

pub(crate) fn validate(g: &Graph) -> Result<(), SolveError> {
    let n = g.node_count();
    if n < 3 {
        return Err(SolveError::TooSmall { n });
    }
    if !g.is_connected() {
        return Err(SolveError::Disconnected);
    }
    Ok(())
}

/// Solves the meeting-time system for death-birth updating.
pub fn solve_coalescence(g: &Graph, method: Method) -> Result<CoalescenceSolution, SolveError> {
    solve_coalescence_with(g, Updating::DeathBirth, method)
}

/// Solves the meeting-time system for the given update rule.
pub fn solve_coalescence_with(
    g: &Graph,
    updating: Updating,
    method: Method,
) -> Result<CoalescenceSolution, SolveError> {
    validate(g)?;
    let (tau, residual) = match method {
        Method::Direct => solve_direct(g, updating)?,
        Method::Iterative { tol, max_sweeps } => solve_iterative(g, updating, tol, max_sweeps)?,
    };
    let n = g.node_count();
    let p = return_probabilities(g);
    let tau_node = (0..n)
        .map(|x| {
            let d = updating.weight_count(g.degree(x)) as f64;
            let s: f64 = g.neighbors(x).iter().map(|&y| tau.get(x, y as usize)).sum();
            1.0 + s / d
        })
        .collect();
    Ok(CoalescenceSolution {
        updating,
        p,
        tau,
        tau_node,
        residual,
        method: method.label(),
    })
}

/// `p_x = (1/k_x) sum_{y ~ x} 1/k_y` for every node.
fn return_probabilities(g: &Graph) -> Vec<f64> {
    (0..g.node_count())
        .map(|x| {
            let s: f64 = g
                .neighbors(x)
                .iter()
                .map(|&y| 1.0 / g.degree(y as usize) as f64)
                .sum();
            s / g.degree(x) as f64
        })
        .collect()
}

/// Assembles the row of the scaled system for pair `(x, y)` and feeds the
/// coefficients to `emit(column_pair, coefficient)`; returns the diagonal
/// entry and right-hand side (both `2 d_x d_y`, minus the self terms on the
/// diagonal for imitation).
pub(crate) fn scaled_row(
    g: &Graph,
    updating: Updating,
    x: usize,
    y: usize,
    mut emit: impl FnMut(usize, usize, i64),
) -> (i64, i64) {
    let dx = updating.weight_count(g.degree(x)) as i64;
    let dy = updating.weight_count(g.degree(y)) as i64;
    let rhs = 2 * dx * dy;
    let diag = if updating.includes_self() {
        rhs - dx - dy
    } else {
        rhs
    };
    for &z in g.neighbors(x) {
        let z = z as usize;
        if z != y {
            emit(z.min(y), z.max(y), -dy);
        }
    }
    for &w in g.neighbors(y) {
        let w = w as usize;
        if w != x {
            emit(x.min(w), x.max(w), -dx);
        }
    }
    (diag, rhs)
}

fn solve_direct(g: &Graph, updating: Updating) -> Result<(PairValues, f64), SolveError> {
    let n = g.node_count();
    if n > DIRECT_MAX_NODES {
        return Err(SolveError::TooLargeForDirect {
            n,
            max: DIRECT_MAX_NODES,
        });
    }
    let pairs = n * (n - 1) / 2;
    let mut a = vec![0.0f64; pairs * pairs];
    let mut b = vec![0.0f64; pairs];
    for x in 0..n {
        for y in (x + 1)..n {
            let row = pair_index(n, x, y);
            let (diag, rhs) = scaled_row(g, updating, x, y, |u, v, coeff| {
                a[row + pair_index(n, u, v) * pairs] += coeff as f64;
            });
            a[row + row * pairs] += diag as f64;
            b[row] = rhs as f64;
        }
    }
    linalg::solve_spd(&mut a, &mut b, pairs).map_err(SolveError::Factorization)?;
    drop(a);
    let tau = PairValues { n, data: b };
    let scale = tau.max_abs().max(1.0);
    let residual = fixed_point_residual(g, updating, &tau) / scale;
    Ok((tau, residual))
}

/// Gauss-Seidel value of the fixed-point form at pair `(x, y)`.
#[inline]
fn relaxation_target(g: &Graph, updating: Updating, tau: &PairValues, x: usize, y: usize) -> f64 {
    let dx = updating.weight_count(g.degree(x)) as f64;
    let dy = updating.weight_count(g.degree(y)) as f64;
    let sx: f64 = g.neighbors(x).iter().map(|&z| tau.get(z as usize, y)).sum();
    let sy: f64 = g.neighbors(y).iter().map(|&w| tau.get(x, w as usize)).sum();
    let value = 1.0 + 0.5 * (sx / dx + sy / dy);
    if updating.includes_self() {
        value / (1.0 - 0.5 * (1.0 / dx + 1.0 / dy))
    } else {
        value
    }
}

/// Max componentwise residual `|tau_xy - target(tau)_xy|`.
fn fixed_point_residual(g: &Graph, updating: Updating, tau: &PairValues) -> f64 {
    let n = g.node_count();
    let mut worst = 0.0f64;
    for x in 0..n {
        for y in (x + 1)..n {
            let r = (tau.get(x, y) - relaxation_target(g, updating, tau, x, y)).abs();
            worst = worst.max(r);
        }
    }
    worst
}

fn solve_iterative(
    g: &Graph,
    updating: Updating,
    tol: f64,
    max_sweeps: usize,
) -> Result<(PairValues, f64), SolveError> {
    let n = g.node_count();
    let mut tau = PairValues::filled(n, 1.0);
    let mut omega = 1.0f64;
    let mut sweeps = 0usize;
    let mut last_checked = f64::INFINITY;

    // Warmup with plain Gauss-Seidel to estimate the convergence rate, then
    // over-relax. The fixed-point operator is a substochastic averaging, so
    // Gauss-Seidel converges unconditionally; over-relaxation only gets the
    // usual square-root speedup and is dialed back if it ever misbehaves.
    const WARMUP: usize = 24;
    let mut deltas = [0.0f64; WARMUP];
    while sweeps < WARMUP.min(max_sweeps) {
        deltas[sweeps] = sweep(g, updating, &mut tau, 1.0);
        sweeps += 1;
    }
    if sweeps == WARMUP && deltas[WARMUP - 9] > 0.0 {
        let ratio = (deltas[WARMUP - 1] / deltas[WARMUP - 9]).powf(1.0 / 8.0);
        if ratio.is_finite() && ratio > 0.2 && ratio < 1.0 {
            omega = (2.0 / (1.0 + (1.0 - ratio).sqrt())).clamp(1.0, 1.95);
        }
    }

    let mut scale = 1.0f64;
    loop {
        let delta = sweep(g, updating, &mut tau, omega);
        sweeps += 1;
        // Check the true residual when the per-sweep movement looks small, or
        // periodically as a backstop.
        if delta <= tol * scale || sweeps % 64 == 0 {
            scale = tau.max_abs().max(1.0);
            let residual = fixed_point_residual(g, updating, &tau) / scale;
            if residual <= tol {
                return Ok((tau, residual));
            }
            if residual > last_checked * 4.0 && omega > 1.0 {
                // Relaxation overshoot; retreat toward plain Gauss-Seidel.
                omega = 1.0 + (omega - 1.0) * 0.5;
            }
            last_checked = residual;
        }
        if sweeps >= max_sweeps {
            let scale = tau.max_abs().max(1.0);
            let residual = fixed_point_residual(g, updating, &tau) / scale;
            return Err(SolveError::NotConverged { residual, sweeps });
        }
    }
}

/// One in-place relaxation sweep; returns the max absolute update.
fn sweep(g: &Graph, updating: Updating, tau: &mut PairValues, omega: f64) -> f64 {
    let n = g.node_count();
    let mut max_delta = 0.0f64;
    for x in 0..n {
        for y in (x + 1)..n {
            let target = relaxation_target(g, updating, tau, x, y);
            let old = tau.get(x, y);
            let new = old + omega * (target - old);
            tau.set(x, y, new);
            max_delta = max_delta.max((new - old).abs());
        }
    }
    max_delta
}

/// Verdict on whether and how selection can favor cooperation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Classification {
    /// `b* > 1`: cooperation is favored whenever `b/c > b*`.
    Promoter,
    /// `b* < -1`: the structure favors spite (cooperation needs `b/c < b*`,
    /// i.e. a negative benefit).
    SpitePromoter,
    /// Zero denominator: no finite benefit-to-cost ratio favors cooperation.
    NeverFavored,
}

/// The critical-ratio computation for one graph and update rule.
#[derive(Debug, Clone, Serialize)]
pub struct BStarReport {
    /// Node count.
    pub n: usize,
    /// Mean degree `2|E| / n`.
    pub mean_degree: f64,
    /// Numerator of the critical ratio.
    pub numerator: f64,
    /// Denominator of the critical ratio; its sign drives the classification.
    pub denominator: f64,
    /// `numerator / denominator`, absent when the denominator is classified
    /// as zero.
    pub b_star: Option<f64>,
    /// `denominator / numerator`; 0 when the denominator is classified zero.
    /// Bounded and monotone, which makes it the right quantity to aggregate.
    pub inv_b_star: f64,
    /// Favorability verdict.
    pub classification: Classification,
    /// Update rule the report refers to.
    pub updating: Updating,
    /// Solver method label.
    pub method: String,
    /// Residual of the underlying pair-system solution.
    pub residual: f64,
}

fn classify(numerator: f64, denominator: f64, zero_scale: f64) -> (Classification, Option<f64>, f64) {
    let threshold = ZERO_TOL_REL * zero_scale;
    if denominator.abs() <= threshold {
        (Classification::NeverFavored, None, 0.0)
    } else {
        let class = if denominator > 0.0 {
            Classification::Promoter
        } else {
            Classification::SpitePromoter
        };
        (class, Some(numerator / denominator), denominator / numerator)
    }
}

/// Critical benefit-to-cost ratio under death-birth updating, from a solved
/// pair system.
///
/// Panics if `sol` was computed for a different update rule.
pub fn bstar_db(sol: &CoalescenceSolution, g: &Graph) -> BStarReport {
    assert!(
        sol.updating == Updating::DeathBirth,
        "bstar_db requires a death-birth solution"
    );
    let n = g.node_count();
    let two_n_kbar = 4.0 * g.edge_count() as f64;
    let mut sum_ktau = 0.0;
    let mut sum_ktaup = 0.0;
    for x in 0..n {
        let k = g.degree(x) as f64;
        sum_ktau += k * sol.tau_node[x];
        sum_ktaup += k * sol.tau_node[x] * sol.p[x];
    }
    let numerator = sum_ktau - two_n_kbar;
    let denominator = sum_ktaup - two_n_kbar;
    let (classification, b_star, inv_b_star) = classify(numerator, denominator, two_n_kbar);
    BStarReport {
        n,
        mean_degree: g.mean_degree(),
        numerator,
        denominator,
        b_star,
        inv_b_star,
        classification,
        updating: Updating::DeathBirth,
        method: sol.method.to_string(),
        residual: sol.residual,
    }
}

/// Critical benefit-to-cost ratio under imitation updating.
///
/// Solves the pair system with the imitation kernel (method picked by
/// [`Method::auto`]) and evaluates
///
/// ```text
/// b* = sum_{x,y,z} (k_x+1) p_xy p_yz tau_xz
///      / ( sum_{x,y,z,w} (k_x+1) p_xy p_yz ptilde_zw tau_xw
///          - sum_{x,y} (k_x+1) p_xy tau_xy )
/// ```
///
/// where `p` is the imitation kernel (uniform over self and neighbors) and
/// `ptilde` the interaction kernel (uniform over neighbors). The zero
/// classification uses the same relative tolerance as death-birth, scaled by
/// the subtracted term of the denominator.
pub fn bstar_im(g: &Graph) -> Result<BStarReport, SolveError> {
    bstar_im_with(g, Method::auto(g.node_count()))
}

/// [`bstar_im`] with an explicit solver method.
pub fn bstar_im_with(g: &Graph, method: Method) -> Result<BStarReport, SolveError> {
    let sol = solve_coalescence_with(g, Updating::Imitation, method)?;
    let n = g.node_count();
    let closed =
        |x: usize| std::iter::once(x).chain(g.neighbors(x).iter().map(|&v| v as usize));

    let mut numerator = 0.0;
    let mut den_walk = 0.0;
    let mut den_direct = 0.0;
    // Per-source precomputation keeps the quadruple sum at O(n * E) total.
    let mut tau_row = vec![0.0f64; n];
    let mut interact_avg = vec![0.0f64; n];
    for x in 0..n {
        for z in 0..n {
            tau_row[z] = sol.tau.get(x, z);
        }
        // interact_avg[z] = (1/k_z) sum_{w ~ z} tau_xw
        for z in 0..n {
            let s: f64 = g.neighbors(z).iter().map(|&w| tau_row[w as usize]).sum();
            interact_avg[z] = s / g.degree(z) as f64;
        }
        for y in closed(x) {
            let dy = g.degree(y) as f64 + 1.0;
            let t: f64 = closed(y).map(|z| tau_row[z]).sum();
            let w: f64 = closed(y).map(|z| interact_avg[z]).sum();
            numerator += t / dy;
            den_walk += w / dy;
            den_direct += tau_row[y];
        }
    }
    let denominator = den_walk - den_direct;
    let (classification, b_star, inv_b_star) = classify(numerator, denominator, den_direct);
    Ok(BStarReport {
        n,
        mean_degree: g.mean_degree(),
        numerator,
        denominator,
        b_star,
        inv_b_star,
        classification,
        updating: Updating::Imitation,
        method: method.label().to_string(),
        residual: sol.residual,
    })
}

/// The weighted meeting-time moments entering the weak-selection expansion.
#[derive(Debug, Clone)]
pub struct TauMoments {
    /// `tau^(1) = sum_x pi_x tau_x - 1`.
    pub tau1: f64,
    /// `tau^(2) = sum_x pi_x tau_x - 2`.
    pub tau2: f64,
    /// `tau^(3) = sum_x pi_x tau_x (1 + p_x) - 3`.
    pub tau3: f64,
    /// Reproductive-value weights `pi_x = k_x / sum_y k_y`.
    pub pi: Vec<f64>,
    /// Node count, kept for the fixation-probability formula.
    pub n: usize,
}

/// Degree-weighted meeting-time moments for a death-birth solution.
///
/// The identity `tau2 / (tau3 - tau1) = b*` ties these moments to
/// [`bstar_db`]; it is asserted here (debug builds) and tested as a library
/// invariant. Panics if `sol` was computed for imitation updating.
pub fn tau_moments(sol: &CoalescenceSolution, g: &Graph) -> TauMoments {
    assert!(
        sol.updating == Updating::DeathBirth,
        "tau_moments is defined for death-birth solutions"
    );
    let n = g.node_count();
    let total_degree = 2.0 * g.edge_count() as f64;
    let pi: Vec<f64> = (0..n).map(|x| g.degree(x) as f64 / total_degree).collect();
    let weighted: f64 = (0..n).map(|x| pi[x] * sol.tau_node[x]).sum();
    let weighted_p: f64 = (0..n).map(|x| pi[x] * sol.tau_node[x] * sol.p[x]).sum();
    let moments = TauMoments {
        tau1: weighted - 1.0,
        tau2: weighted - 2.0,
        tau3: weighted + weighted_p - 3.0,
        pi,
        n,
    };
    #[cfg(debug_assertions)]
    {
        let report = bstar_db(sol, g);
        if let Some(b) = report.b_star {
            let from_moments = moments.tau2 / (moments.tau3 - moments.tau1);
            debug_assert!(
                (from_moments - b).abs() <= 1e-9 * b.abs().max(1.0),
                "moment identity violated: {from_moments} vs {b}"
            );
        }
    }
    moments
}

/// First-order fixation probabilities `(rho_C, rho_D)` of a single invading
/// cooperator/defector under weak selection:
///
/// ```text
/// rho_C = 1/N + (delta / 2N) (-c tau2 + b (tau3 - tau1)) + O(delta^2)
/// ```
///
/// and `rho_D` with the increment negated (the first-order effects on the
/// two strategies are antisymmetric). Valid as a prediction only for small
/// `delta`; the quadratic remainder is the caller's concern.
pub fn weak_selection_fixation(m: &TauMoments, b: f64, c: f64, delta: f64) -> (f64, f64) {
    let base = 1.0 / m.n as f64;
    let increment = delta / (2.0 * m.n as f64) * (-c * m.tau2 + b * (m.tau3 - m.tau1));
    (base + increment, base - increment)
}

/// Payoff matrix of a symmetric two-player game: `R` (mutual cooperation),
/// `S` (cooperator vs defector), `T` (defector vs cooperator), `P` (mutual
/// defection).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct GameMatrix {
    pub r: f64,
    pub s: f64,
    pub t: f64,
    pub p: f64,
}

/// Whether selection favors cooperation in the general game, given a graph's
/// critical ratio: the condition is
///
/// ```text
/// (T - S) < (R - P) (b* + 1) / (b* - 1)
/// ```
///
/// Errors when the report is `NeverFavored` (no finite `b*` exists, so the
/// condition is undefined).
pub fn general_game_favored(report: &BStarReport, game: &GameMatrix) -> Result<bool, SolveError> {
    let b_star = report.b_star.ok_or(SolveError::UndefinedGameCondition)?;
    Ok(game.t - game.s < (game.r - game.p) * (b_star + 1.0) / (b_star - 1.0))
}
