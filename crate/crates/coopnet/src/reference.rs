//! Slow, self-contained reference implementations used to validate the
//! production solvers.
//!
//! Everything here favors directness over speed and shares no numerical code
//! with the rest of the crate: the pair system is assembled in its raw
//! fixed-point form (no symmetrization, no scaling) and solved by a plain
//! Gaussian elimination written out below; the critical-ratio formulas are
//! evaluated as literal nested sums over dense kernel matrices; fixation
//! probabilities are solved exactly from the full `2^N`-state Markov chain.
//! Complexities are `O(N^6)` and worse, fine for the small graphs these
//! functions exist for.

use crate::coalescence::Updating;
use crate::graph::Graph;

/// Dense Gaussian elimination with partial pivoting; returns the solution of
/// `m x = rhs`. Panics on a numerically singular system (the callers only
/// build nonsingular ones).
fn gaussian_solve(mut m: Vec<Vec<f64>>, mut rhs: Vec<f64>) -> Vec<f64> {
    let n = rhs.len();
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))
            .expect("nonempty range");
        assert!(m[pivot_row][col].abs() > 1e-300, "singular system");
        m.swap(col, pivot_row);
        rhs.swap(col, pivot_row);
        for row in (col + 1)..n {
            let factor = m[row][col] / m[col][col];
            if factor == 0.0 {
                continue;
            }
            for k in col..n {
                let v = m[col][k];
                m[row][k] -= factor * v;
            }
            rhs[row] -= factor * rhs[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut v = rhs[row];
        for k in (row + 1)..n {
            v -= m[row][k] * x[k];
        }
        x[row] = v / m[row][row];
    }
    x
}

/// Dense replacement-kernel matrix: uniform over neighbors (death-birth) or
/// over self and neighbors (imitation).
fn replacement_kernel(g: &Graph, updating: Updating) -> Vec<Vec<f64>> {
    let n = g.node_count();
    let mut p = vec![vec![0.0; n]; n];
    for x in 0..n {
        match updating {
            Updating::DeathBirth => {
                let w = 1.0 / g.degree(x) as f64;
                for &y in g.neighbors(x) {
                    p[x][y as usize] = w;
                }
            }
            Updating::Imitation => {
                let w = 1.0 / (g.degree(x) as f64 + 1.0);
                p[x][x] = w;
                for &y in g.neighbors(x) {
                    p[x][y as usize] = w;
                }
            }
        }
    }
    p
}

/// Meeting times of the coalescing pair walk, solved from the raw
/// `C(N,2)`-unknown fixed-point system: for `x != y`,
/// `tau_xy = 1 + (1/2) sum_z (p_xz tau_zy + p_yz tau_xz)`, with
/// `tau_xx = 0`. Returns the full symmetric `N x N` matrix.
pub fn meeting_times(g: &Graph, updating: Updating) -> Vec<Vec<f64>> {
    assert!(g.is_connected() && g.node_count() >= 2);
    let n = g.node_count();
    let p = replacement_kernel(g, updating);
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|x| ((x + 1)..n).map(move |y| (x, y)))
        .collect();
    let index = |x: usize, y: usize| -> Option<usize> {
        if x == y {
            return None;
        }
        let (a, b) = (x.min(y), x.max(y));
        Some(pairs.iter().position(|&q| q == (a, b)).expect("pair"))
    };

    let mut m = vec![vec![0.0; pairs.len()]; pairs.len()];
    let rhs = vec![1.0; pairs.len()];
    for (row, &(x, y)) in pairs.iter().enumerate() {
        m[row][row] += 1.0;
        for z in 0..n {
            if p[x][z] != 0.0 {
                if let Some(col) = index(z, y) {
                    m[row][col] -= 0.5 * p[x][z];
                }
            }
            if p[y][z] != 0.0 {
                if let Some(col) = index(x, z) {
                    m[row][col] -= 0.5 * p[y][z];
                }
            }
        }
    }
    let solution = gaussian_solve(m, rhs);
    let mut tau = vec![vec![0.0; n]; n];
    for (idx, &(x, y)) in pairs.iter().enumerate() {
        tau[x][y] = solution[idx];
        tau[y][x] = solution[idx];
    }
    tau
}

/// Numerator and denominator of the death-birth critical ratio,
/// `sum_x k_x tau_x - 2 N kbar` over `sum_x k_x p_x tau_x - 2 N kbar`,
/// computed from the reference meeting times.
pub fn bstar_db_parts(g: &Graph) -> (f64, f64) {
    let n = g.node_count();
    let tau = meeting_times(g, Updating::DeathBirth);
    let two_n_kbar = 4.0 * g.edge_count() as f64;
    let mut num = -two_n_kbar;
    let mut den = -two_n_kbar;
    for x in 0..n {
        let k = g.degree(x) as f64;
        let tau_x = 1.0 + g.neighbors(x).iter().map(|&y| tau[x][y as usize]).sum::<f64>() / k;
        let p_x = g
            .neighbors(x)
            .iter()
            .map(|&y| 1.0 / g.degree(y as usize) as f64)
            .sum::<f64>()
            / k;
        num += k * tau_x;
        den += k * tau_x * p_x;
    }
    (num, den)
}

/// Numerator and denominator of the imitation critical ratio, evaluated as
/// literal nested sums over dense kernels:
/// `sum (k_x+1) p_xy p_yz tau_xz` over
/// `sum (k_x+1) p_xy p_yz ptilde_zw tau_xw - sum (k_x+1) p_xy tau_xy`.
pub fn bstar_im_parts(g: &Graph) -> (f64, f64) {
    let n = g.node_count();
    let tau = meeting_times(g, Updating::Imitation);
    let p = replacement_kernel(g, Updating::Imitation);
    let pt = replacement_kernel(g, Updating::DeathBirth);
    let mut num = 0.0;
    let mut den_walk = 0.0;
    let mut den_direct = 0.0;
    for x in 0..n {
        let weight = g.degree(x) as f64 + 1.0;
        for y in 0..n {
            den_direct += weight * p[x][y] * tau[x][y];
            for z in 0..n {
                num += weight * p[x][y] * p[y][z] * tau[x][z];
                for w in 0..n {
                    den_walk += weight * p[x][y] * p[y][z] * pt[z][w] * tau[x][w];
                }
            }
        }
    }
    (num, den_walk - den_direct)
}

/// Exact fixation probability of a single cooperator (uniformly placed)
/// under death-birth updating of the donation game at finite selection
/// strength, from the full `2^N`-state absorbing Markov chain. Exponential in
/// `N`; keep `N` at 14 or below.
pub fn fixation_probability_markov(g: &Graph, b: f64, c: f64, delta: f64) -> f64 {
    let n = g.node_count();
    assert!(n <= 14, "state space is 2^N; this oracle is for tiny graphs");
    let states = 1usize << n;
    let full = states - 1;
    let payoff = |state: usize, y: usize| -> f64 {
        let coop_neighbors = g
            .neighbors(y)
            .iter()
            .filter(|&&z| state >> z & 1 == 1)
            .count();
        let s_y = (state >> y & 1) as f64;
        -c * s_y + b * coop_neighbors as f64 / g.degree(y) as f64
    };

    // phi(state) = fixation probability; phi(0) = 0, phi(full) = 1. Build the
    // linear system (I - T) phi = r over transient states, where r collects
    // transition mass into the all-cooperator state.
    let transient: Vec<usize> = (1..full).collect();
    let col_of = |state: usize| state - 1;
    let mut m = vec![vec![0.0; transient.len()]; transient.len()];
    let mut rhs = vec![0.0; transient.len()];
    for (row, &state) in transient.iter().enumerate() {
        m[row][row] += 1.0;
        for x in 0..n {
            let weights: Vec<f64> = g
                .neighbors(x)
                .iter()
                .map(|&y| 1.0 + delta * payoff(state, y as usize))
                .collect();
            let total: f64 = weights.iter().sum();
            assert!(weights.iter().all(|&w| w > 0.0), "negative replacement weight");
            for (&y, &w) in g.neighbors(x).iter().zip(&weights) {
                let bit = state >> y as usize & 1;
                let next = (state & !(1 << x)) | (bit << x);
                let prob = w / (total * n as f64);
                if next == full {
                    rhs[row] += prob;
                } else if next != 0 {
                    m[row][col_of(next)] -= prob;
                }
            }
        }
    }
    let phi = gaussian_solve(m, rhs);
    (0..n).map(|x| phi[col_of(1 << x)]).sum::<f64>() / n as f64
}

/// All labeled connected simple graphs on `n` nodes, in deterministic order.
/// There are 4 for `n = 3`, 38 for `n = 4`, 728 for `n = 5`, and 26704 for
/// `n = 6`; the enumeration is exponential in `C(n,2)`.
pub fn connected_graphs(n: usize) -> Vec<Graph> {
    assert!((2..=7).contains(&n), "enumeration is practical for n in 2..=7");
    let all_pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|x| ((x + 1)..n).map(move |y| (x, y)))
        .collect();
    let mut out = Vec::new();
    for mask in 0u32..(1u32 << all_pairs.len()) {
        let edges: Vec<(usize, usize)> = all_pairs
            .iter()
            .enumerate()
            .filter(|&(i, _)| mask >> i & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        if edges.len() + 1 < n {
            continue;
        }
        let g = Graph::from_edges(n, &edges).expect("valid edges");
        if g.is_connected() {
            out.push(g);
        }
    }
    out
}
