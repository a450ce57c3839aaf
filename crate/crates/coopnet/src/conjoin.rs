//! Composition operators: joining two graphs through gate nodes and broker
//! chains, attaching leaves, randomly interconnecting groups, and sweeping
//! every gate pair to map how the joint structure shifts the critical ratio.

use serde::Serialize;
use thiserror::Error;

use crate::coalescence::{
    bstar_db, solve_coalescence, BStarReport, Classification, Method, SolveError,
};
use crate::graph::Graph;
use crate::random::stream_rng;
use rand::Rng;

/// Attempt cap when resampling group interconnects for connectivity.
const CONNECT_ATTEMPTS: u64 = 1_000;

/// Errors from the composition operators.
#[derive(Debug, Error)]
pub enum ConjoinError {
    /// A gate or attachment node index is out of range.
    #[error("{role} index {node} out of range for a graph on {nodes} nodes")]
    InvalidNode {
        /// Which argument was invalid ("gate1", "gate2", "node").
        role: &'static str,
        /// Offending index.
        node: usize,
        /// Node count of the graph it was meant to address.
        nodes: usize,
    },
    /// Parameters admit no composite.
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    /// Random interconnection never produced a connected composite.
    #[error("no connected interconnection in {attempts} attempts (seed {seed})")]
    ConnectivityCapExceeded {
        /// How many attempts were made.
        attempts: u64,
        /// The master seed used.
        seed: u64,
    },
    /// A composite could not be solved (too small or disconnected input).
    #[error(transparent)]
    Solve(#[from] SolveError),
}

/// Joins two graphs by a path of `brokers` fresh degree-2 nodes between
/// `gate1` (in `g1`) and `gate2` (in `g2`); `brokers = 0` joins the gates
/// directly.
///
/// Node layout of the composite: `g1`'s nodes keep their indices, `g2`'s are
/// offset by `g1.node_count()`, and the brokers follow in chain order, so
/// the result has `N1 + N2 + brokers` nodes and `E1 + E2 + brokers + 1`
/// edges.
pub fn conjoin(
    g1: &Graph,
    g2: &Graph,
    gate1: usize,
    gate2: usize,
    brokers: usize,
) -> Result<Graph, ConjoinError> {
    let (n1, n2) = (g1.node_count(), g2.node_count());
    if gate1 >= n1 {
        return Err(ConjoinError::InvalidNode {
            role: "gate1",
            node: gate1,
            nodes: n1,
        });
    }
    if gate2 >= n2 {
        return Err(ConjoinError::InvalidNode {
            role: "gate2",
            node: gate2,
            nodes: n2,
        });
    }
    let mut edges: Vec<(usize, usize)> = g1.edges().collect();
    edges.extend(g2.edges().map(|(a, b)| (a + n1, b + n1)));
    let far_gate = gate2 + n1;
    if brokers == 0 {
        edges.push((gate1, far_gate));
    } else {
        let base = n1 + n2;
        edges.push((gate1, base));
        for i in 1..brokers {
            edges.push((base + i - 1, base + i));
        }
        edges.push((base + brokers - 1, far_gate));
    }
    Ok(Graph::from_edges(n1 + n2 + brokers, &edges)
        .expect("offset union of simple graphs is simple"))
}

/// Attaches `m` fresh degree-1 leaves to `node`.
pub fn attach_leaves(g: &Graph, node: usize, m: usize) -> Result<Graph, ConjoinError> {
    let n = g.node_count();
    if node >= n {
        return Err(ConjoinError::InvalidNode {
            role: "node",
            node,
            nodes: n,
        });
    }
    if m == 0 {
        return Err(ConjoinError::InvalidParameters(
            "must attach at least one leaf".to_string(),
        ));
    }
    let mut edges: Vec<(usize, usize)> = g.edges().collect();
    edges.extend((0..m).map(|i| (node, n + i)));
    Ok(Graph::from_edges(n + m, &edges).expect("leaf attachment keeps the graph simple"))
}

/// Takes the disjoint union of the groups and links every cross-group node
/// pair independently with probability `p_between`, resampling (fresh
/// stream per attempt, cap [`CONNECT_ATTEMPTS`]) until the composite is
/// connected.
pub fn connect_groups(
    graphs: &[Graph],
    p_between: f64,
    seed: u64,
) -> Result<Graph, ConjoinError> {
    if graphs.len() < 2 {
        return Err(ConjoinError::InvalidParameters(
            "need at least two groups".to_string(),
        ));
    }
    if !(p_between > 0.0 && p_between <= 1.0) {
        return Err(ConjoinError::InvalidParameters(format!(
            "p_between {p_between} must lie in (0, 1]"
        )));
    }
    let mut offsets = Vec::with_capacity(graphs.len());
    let mut base_edges: Vec<(usize, usize)> = Vec::new();
    let mut group_of: Vec<usize> = Vec::new();
    let mut total = 0usize;
    for (gi, g) in graphs.iter().enumerate() {
        offsets.push(total);
        base_edges.extend(g.edges().map(|(a, b)| (a + total, b + total)));
        group_of.extend(std::iter::repeat(gi).take(g.node_count()));
        total += g.node_count();
    }
    for attempt in 0..CONNECT_ATTEMPTS {
        let mut rng = stream_rng(seed, attempt);
        let mut edges = base_edges.clone();
        for a in 0..total {
            for b in (a + 1)..total {
                if group_of[a] != group_of[b] && rng.gen_bool(p_between) {
                    edges.push((a, b));
                }
            }
        }
        let candidate =
            Graph::from_edges(total, &edges).expect("offset union of simple graphs is simple");
        if candidate.is_connected() {
            return Ok(candidate);
        }
    }
    Err(ConjoinError::ConnectivityCapExceeded {
        attempts: CONNECT_ATTEMPTS,
        seed,
    })
}

/// Critical-ratio report for one gate pair of a sweep.
#[derive(Debug, Clone, Serialize)]
pub struct GatePairReport {
    /// Gate node in the first graph.
    pub gate1: usize,
    /// Gate node in the second graph.
    pub gate2: usize,
    /// Full critical-ratio report of the composite.
    #[serde(flatten)]
    pub report: BStarReport,
}

/// Tally of composite verdicts across a sweep.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct ClassificationCounts {
    /// Composites with `b* > 1`.
    pub promoter: usize,
    /// Composites with `b* < -1`.
    pub spite_promoter: usize,
    /// Composites where no finite ratio favors cooperation.
    pub never_favored: usize,
}

impl ClassificationCounts {
    fn add(&mut self, class: Classification) {
        match class {
            Classification::Promoter => self.promoter += 1,
            Classification::SpitePromoter => self.spite_promoter += 1,
            Classification::NeverFavored => self.never_favored += 1,
        }
    }
}

/// Selected quantiles of `1/b*` across a sweep.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct InvBStarQuantiles {
    /// 10th percentile.
    pub q10: f64,
    /// 25th percentile.
    pub q25: f64,
    /// 75th percentile.
    pub q75: f64,
    /// 90th percentile.
    pub q90: f64,
}

/// Aggregate of a full gate-pair sweep.
///
/// Aggregation works on `1/b*`, which is bounded and monotone in how
/// strongly a structure favors cooperation where `b*` itself jumps through
/// infinity at the never-favored boundary; never-favored composites
/// contribute `1/b* = 0`. `median_b_star` is the inverse of the median
/// `1/b*` (absent when that median is 0). Medians of even-length sweeps
/// average the two central order statistics, and quantiles interpolate
/// linearly between order statistics.
#[derive(Debug, Clone, Serialize)]
pub struct SweepSummary {
    /// Brokers inserted between the gates.
    pub brokers: usize,
    /// Number of gate pairs, `N1 * N2` for a full sweep.
    pub pair_count: usize,
    /// Per-pair reports in lexicographic `(gate1, gate2)` order.
    pub pairs: Vec<GatePairReport>,
    /// Median of `1/b*` over all pairs.
    pub median_inv_b_star: f64,
    /// `1 / median_inv_b_star`, absent when the median is 0.
    pub median_b_star: Option<f64>,
    /// Spread of `1/b*` over all pairs.
    pub quantiles: InvBStarQuantiles,
    /// Verdict tally.
    pub counts: ClassificationCounts,
}

/// Linear-interpolation quantile of already-sorted values.
fn quantile(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Evaluates the composite critical ratio for every gate pair `(u, v)` with
/// the default solver method; see [`gate_sweep_with`].
pub fn gate_sweep(g1: &Graph, g2: &Graph, brokers: usize) -> Result<SweepSummary, ConjoinError> {
    let n = g1.node_count() + g2.node_count() + brokers;
    gate_sweep_with(g1, g2, brokers, Method::auto(n))
}

/// Evaluates the composite critical ratio for every gate pair `(u, v)` in
/// `V1 x V2` and aggregates the sweep; fully deterministic, in lexicographic
/// gate order.
pub fn gate_sweep_with(
    g1: &Graph,
    g2: &Graph,
    brokers: usize,
    method: Method,
) -> Result<SweepSummary, ConjoinError> {
    let mut pairs = Vec::with_capacity(g1.node_count() * g2.node_count());
    let mut counts = ClassificationCounts::default();
    for gate1 in 0..g1.node_count() {
        for gate2 in 0..g2.node_count() {
            let composite = conjoin(g1, g2, gate1, gate2, brokers)?;
            let sol = solve_coalescence(&composite, method)?;
            let report = bstar_db(&sol, &composite);
            counts.add(report.classification);
            pairs.push(GatePairReport {
                gate1,
                gate2,
                report,
            });
        }
    }
    let mut inv: Vec<f64> = pairs.iter().map(|p| p.report.inv_b_star).collect();
    inv.sort_by(|a, b| a.partial_cmp(b).expect("inv_b_star is finite"));
    let mid = inv.len() / 2;
    let median_inv_b_star = if inv.len() % 2 == 1 {
        inv[mid]
    } else {
        0.5 * (inv[mid - 1] + inv[mid])
    };
    let median_b_star = (median_inv_b_star != 0.0).then(|| 1.0 / median_inv_b_star);
    let quantiles = InvBStarQuantiles {
        q10: quantile(&inv, 0.10),
        q25: quantile(&inv, 0.25),
        q75: quantile(&inv, 0.75),
        q90: quantile(&inv, 0.90),
    };
    Ok(SweepSummary {
        brokers,
        pair_count: pairs.len(),
        pairs,
        median_inv_b_star,
        median_b_star,
        quantiles,
        counts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::FamilySpec;
    use approx::assert_relative_eq;

    fn family(s: &str) -> Graph {
        s.parse::<FamilySpec>().unwrap().generate().unwrap()
    }

    fn bstar(g: &Graph) -> f64 {
        let sol = solve_coalescence(g, Method::auto(g.node_count())).unwrap();
        bstar_db(&sol, g).b_star.unwrap()
    }

    #[test]
    fn conjoin_counts_and_known_value() {
        let k3 = family("clique:n=3");
        let joined = conjoin(&k3, &k3, 1, 2, 0).unwrap();
        assert_eq!(joined.node_count(), 6);
        assert_eq!(joined.edge_count(), 7);
        // Matches the exact two-clique form 1692/191 = 8.8586...
        assert_relative_eq!(bstar(&joined), 1692.0 / 191.0, max_relative = 1e-12);

        let with_brokers = conjoin(&k3, &k3, 0, 0, 3).unwrap();
        assert_eq!(with_brokers.node_count(), 9);
        assert_eq!(with_brokers.edge_count(), 10);
        assert!(with_brokers.is_connected());
        assert_eq!(with_brokers.degree(6), 2);
        assert_eq!(with_brokers.degree(8), 2);
    }

    #[test]
    fn conjoin_rejects_bad_gates() {
        let k3 = family("clique:n=3");
        assert!(matches!(
            conjoin(&k3, &k3, 3, 0, 0),
            Err(ConjoinError::InvalidNode { role: "gate1", .. })
        ));
        assert!(matches!(
            conjoin(&k3, &k3, 0, 9, 1),
            Err(ConjoinError::InvalidNode { role: "gate2", .. })
        ));
    }

    #[test]
    fn conjoined_stars_match_family_constructions() {
        let star = family("star:n=50");
        let hub_hub = conjoin(&star, &star, 0, 0, 0).unwrap();
        assert_relative_eq!(
            bstar(&hub_hub),
            bstar(&family("two_stars_hub_hub:n1=50,n2=50")),
            max_relative = 1e-12
        );
        let via_broker = conjoin(&star, &star, 0, 0, 1).unwrap();
        assert_relative_eq!(
            bstar(&via_broker),
            bstar(&family("two_stars_via_broker:n1=50,n2=50")),
            max_relative = 1e-12
        );
    }

    #[test]
    fn conjoin_is_symmetric_in_its_arguments() {
        let a = family("star:n=4");
        let b = family("clique:n=3");
        let ab = conjoin(&a, &b, 0, 2, 2).unwrap();
        let ba = conjoin(&b, &a, 2, 0, 2).unwrap();
        assert_relative_eq!(bstar(&ab), bstar(&ba), max_relative = 1e-12);
    }

    #[test]
    fn attached_leaves_and_broker_star() {
        let k3 = family("clique:n=3");
        let with_leaves = attach_leaves(&k3, 0, 2).unwrap();
        assert_eq!(with_leaves.node_count(), 5);
        assert_eq!(with_leaves.edge_count(), 5);
        assert_eq!(with_leaves.degree(3), 1);

        // Leaves on a star hub just enlarge the star.
        let star = family("star:n=4");
        let grown = attach_leaves(&star, 0, 3).unwrap();
        let direct = family("star:n=7");
        let edges: Vec<_> = grown.edges().collect();
        let expected: Vec<_> = direct.edges().collect();
        assert_eq!(edges, expected);

        // Two K10 joined via one broker that carries four leaves is the
        // two-cliques-via-star composite.
        let k10 = family("clique:n=10");
        let joined = conjoin(&k10, &k10, 0, 0, 1).unwrap();
        let broker = joined.node_count() - 1;
        let composite = attach_leaves(&joined, broker, 4).unwrap();
        assert_relative_eq!(
            bstar(&composite),
            bstar(&family("two_cliques_via_star:n=10,m_star=5")),
            max_relative = 1e-12
        );

        assert!(attach_leaves(&k3, 9, 1).is_err());
        assert!(attach_leaves(&k3, 0, 0).is_err());
    }

    #[test]
    fn connect_groups_extremes() {
        let k3 = family("clique:n=3");
        let joined = connect_groups(&[k3.clone(), k3.clone()], 1.0, 1).unwrap();
        assert_eq!(joined.node_count(), 6);
        // Full cross join: 3 + 3 internal edges plus 9 cross edges.
        assert_eq!(joined.edge_count(), 15);

        assert!(connect_groups(&[k3.clone()], 0.5, 1).is_err());
        assert!(connect_groups(&[k3.clone(), k3.clone()], 0.0, 1).is_err());

        // A seed whose sample has exactly one cross edge reproduces the
        // direct conjoining up to isomorphism.
        let single = (0..200)
            .map(|seed| connect_groups(&[k3.clone(), k3.clone()], 0.1, seed).unwrap())
            .find(|g| g.edge_count() == 7)
            .expect("some seed links exactly one cross pair");
        assert_relative_eq!(bstar(&single), 1692.0 / 191.0, max_relative = 1e-12);
    }

    #[test]
    fn connect_groups_is_deterministic() {
        let star = family("star:n=6");
        let a = connect_groups(&[star.clone(), star.clone()], 0.2, 77).unwrap();
        let b = connect_groups(&[star.clone(), star.clone()], 0.2, 77).unwrap();
        let ea: Vec<_> = a.edges().collect();
        let eb: Vec<_> = b.edges().collect();
        assert_eq!(ea, eb);
    }

    #[test]
    fn sweep_over_vertex_transitive_cliques_is_flat() {
        let k3 = family("clique:n=3");
        let summary = gate_sweep(&k3, &k3, 0).unwrap();
        assert_eq!(summary.pair_count, 9);
        assert_eq!(summary.counts.promoter, 9);
        let expected = 1692.0 / 191.0;
        for pair in &summary.pairs {
            assert_relative_eq!(
                pair.report.b_star.unwrap(),
                expected,
                max_relative = 1e-12
            );
        }
        assert_relative_eq!(
            summary.median_b_star.unwrap(),
            expected,
            max_relative = 1e-12
        );
        // A flat sweep collapses the quantile envelope onto the median.
        assert_relative_eq!(
            summary.quantiles.q10,
            summary.median_inv_b_star,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            summary.quantiles.q90,
            summary.median_inv_b_star,
            max_relative = 1e-12
        );
    }

    #[test]
    fn sweep_over_two_stars_has_three_orbits() {
        let star = family("star:n=3");
        let summary = gate_sweep(&star, &star, 0).unwrap();
        assert_eq!(summary.pair_count, 16);
        assert_eq!(summary.counts.promoter, 16);

        // Gate orbits: hub-hub (1 pair, the worst), hub-leaf (6),
        // leaf-leaf (9, the best: the join looks like a long bridge).
        let mut values: Vec<f64> = summary
            .pairs
            .iter()
            .map(|p| p.report.b_star.unwrap())
            .collect();
        values.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let hub_hub = bstar(&family("two_stars_hub_hub:n1=3,n2=3"));
        assert_relative_eq!(values[15], hub_hub, max_relative = 1e-12);
        let distinct = {
            let mut d = values.clone();
            d.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
            d.len()
        };
        assert_eq!(distinct, 3);

        // Nine of sixteen pairs are leaf-leaf, so the median sits there.
        let leaf_leaf = values[0];
        assert_relative_eq!(
            summary.median_b_star.unwrap(),
            leaf_leaf,
            max_relative = 1e-12
        );
        // The median must lie inside the quantile envelope.
        assert!(summary.quantiles.q10 <= summary.median_inv_b_star);
        assert!(summary.median_inv_b_star <= summary.quantiles.q90);

        // Swapping the graphs cannot change anything.
        let swapped = gate_sweep(&star, &star, 0).unwrap();
        assert_eq!(
            swapped.median_inv_b_star.to_bits(),
            summary.median_inv_b_star.to_bits()
        );
    }

    #[test]
    fn sweep_frozen_star_orbit_values() {
        let star = family("star:n=3");
        let summary = gate_sweep(&star, &star, 0).unwrap();
        let mut values: Vec<f64> = summary
            .pairs
            .iter()
            .map(|p| p.report.b_star.unwrap())
            .collect();
        values.sort_by(|a, b| a.partial_cmp(b).unwrap());
        // Frozen from the exact solver: leaf-leaf, hub-leaf, hub-hub.
        assert_relative_eq!(values[0], 2.732880650548970, max_relative = 1e-11);
        assert_relative_eq!(values[9], 3.002009714945355, max_relative = 1e-11);
        assert_relative_eq!(values[15], 3.065616797900264, max_relative = 1e-11);
    }
}
