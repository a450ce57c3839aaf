//! Seeded random-graph models and the structural-noise perturbation used in
//! the robustness and community experiments.
//!
//! Every generator here is a pure function of its parameters and a 64-bit
//! seed: the same call always yields the same graph, and ensembles derive
//! one independent stream per task index via [`stream_rng`] so results do
//! not depend on evaluation order or worker count.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{Graph, Partition};

/// Attempt cap when resampling Erdos-Renyi graphs for connectivity.
const ER_CONNECT_ATTEMPTS: u64 = 10_000;
/// Attempt cap when resampling rewirings or group interconnects for
/// connectivity.
const REWIRE_CONNECT_ATTEMPTS: u64 = 1_000;

/// Errors from the random-graph generators.
#[derive(Debug, Error)]
pub enum RandomGraphError {
    /// A probability parameter lies outside `[0, 1]`.
    #[error("probability {name}={value} must lie in [0, 1]")]
    InvalidProbability {
        /// Parameter name.
        name: &'static str,
        /// Offending value.
        value: f64,
    },
    /// Parameters admit no graph (e.g. too few nodes for the model).
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    /// Connectivity rejection sampling exhausted its attempt budget.
    #[error("no connected sample in {attempts} attempts (seed {seed})")]
    ConnectivityCapExceeded {
        /// How many attempts were made.
        attempts: u64,
        /// The master seed used.
        seed: u64,
    },
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives an independent random stream from a master seed and a task index.
///
/// The (seed, stream) pair is hashed through splitmix64 into a full ChaCha8
/// key, so distinct indices give statistically independent generators and
/// the mapping is stable across platforms and versions of this crate.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut state = seed ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    ChaCha8Rng::from_seed(key)
}

fn check_probability(name: &'static str, value: f64) -> Result<(), RandomGraphError> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(RandomGraphError::InvalidProbability { name, value })
    }
}

/// Samples an Erdos-Renyi graph `G(n, p)`: every unordered node pair is
/// linked independently with probability `p`.
///
/// With `require_connected`, disconnected samples are rejected and redrawn
/// (fresh stream per attempt), up to [`ER_CONNECT_ATTEMPTS`] tries.
pub fn erdos_renyi(
    n: usize,
    p: f64,
    seed: u64,
    require_connected: bool,
) -> Result<Graph, RandomGraphError> {
    check_probability("p", p)?;
    if n == 0 {
        return Err(RandomGraphError::InvalidParameters(
            "n must be at least 1".to_string(),
        ));
    }
    let mut edges = Vec::new();
    for attempt in 0..ER_CONNECT_ATTEMPTS {
        let mut rng = stream_rng(seed, attempt);
        edges.clear();
        for a in 0..n {
            for b in (a + 1)..n {
                if rng.gen_bool(p) {
                    edges.push((a, b));
                }
            }
        }
        let g = Graph::from_edges(n, &edges).expect("sampled pairs are simple and in range");
        if !require_connected || g.is_connected() {
            return Ok(g);
        }
    }
    Err(RandomGraphError::ConnectivityCapExceeded {
        attempts: ER_CONNECT_ATTEMPTS,
        seed,
    })
}

/// Samples a stochastic block model: nodes are grouped into blocks of the
/// given sizes, within-block pairs are linked with `p_within` and
/// cross-block pairs with `p_between`.
///
/// Returns the sample together with the planted partition (block labels in
/// input order). The sample may be disconnected; downstream solvers reject
/// disconnected graphs themselves.
pub fn sbm(
    sizes: &[usize],
    p_within: f64,
    p_between: f64,
    seed: u64,
) -> Result<(Graph, Partition), RandomGraphError> {
    check_probability("p_within", p_within)?;
    check_probability("p_between", p_between)?;
    if sizes.is_empty() || sizes.contains(&0) {
        return Err(RandomGraphError::InvalidParameters(
            "block sizes must be nonempty and positive".to_string(),
        ));
    }
    let n: usize = sizes.iter().sum();
    let mut label = Vec::with_capacity(n);
    for (block, &size) in sizes.iter().enumerate() {
        label.extend(std::iter::repeat(block as u32).take(size));
    }
    let mut rng = stream_rng(seed, 0);
    let mut edges = Vec::new();
    for a in 0..n {
        for b in (a + 1)..n {
            let p = if label[a] == label[b] {
                p_within
            } else {
                p_between
            };
            if rng.gen_bool(p) {
                edges.push((a, b));
            }
        }
    }
    let g = Graph::from_edges(n, &edges).expect("sampled pairs are simple and in range");
    let partition = Partition::new(label).expect("labels cover 0..n");
    Ok((g, partition))
}

/// Grows a preferential-attachment graph with initial attractiveness.
///
/// The seed graph is a complete graph on `m_links + 1` nodes (a documented
/// convention; the growth rule does not fix one). Each subsequent node
/// attaches `m_links` edges to distinct existing nodes, chosen with
/// probability proportional to `degree + attractiveness`. Total edge count
/// is therefore `m_links·(n - m_links) + C(m_links, 2)`.
pub fn preferential_attachment(
    n: usize,
    m_links: usize,
    attractiveness: f64,
    seed: u64,
) -> Result<Graph, RandomGraphError> {
    if m_links == 0 {
        return Err(RandomGraphError::InvalidParameters(
            "m_links must be at least 1".to_string(),
        ));
    }
    if !(attractiveness >= 0.0) {
        return Err(RandomGraphError::InvalidParameters(format!(
            "attractiveness {attractiveness} must be nonnegative"
        )));
    }
    if n <= m_links {
        return Err(RandomGraphError::InvalidParameters(format!(
            "n={n} must exceed m_links={m_links}"
        )));
    }
    let mut rng = stream_rng(seed, 0);
    let mut edges = Vec::new();
    let mut degree = vec![0usize; n];
    let core = m_links + 1;
    for a in 0..core {
        for b in (a + 1)..core {
            edges.push((a, b));
        }
    }
    degree[..core].fill(m_links);
    for new in core..n {
        let mut chosen: Vec<usize> = Vec::with_capacity(m_links);
        while chosen.len() < m_links {
            let total: f64 = degree[..new]
                .iter()
                .map(|&d| d as f64 + attractiveness)
                .sum();
            let mut r = rng.gen::<f64>() * total;
            let mut pick = new - 1;
            for (node, &d) in degree[..new].iter().enumerate() {
                r -= d as f64 + attractiveness;
                if r <= 0.0 {
                    pick = node;
                    break;
                }
            }
            if !chosen.contains(&pick) {
                chosen.push(pick);
            }
        }
        for target in chosen {
            edges.push((target, new));
            degree[target] += 1;
            degree[new] += 1;
        }
    }
    Ok(Graph::from_edges(n, &edges).expect("growth edges are simple and in range"))
}

/// Rewires each edge independently with probability `p`: a selected edge is
/// deleted and a fresh edge is inserted between a uniformly random
/// currently-unlinked pair. Node and edge counts are preserved exactly.
///
/// Disconnected outcomes are rejected and the whole pass is redrawn (fresh
/// stream per attempt), up to [`REWIRE_CONNECT_ATTEMPTS`] tries; `p = 0`
/// therefore returns the input graph unchanged.
pub fn rewire(g: &Graph, p: f64, seed: u64) -> Result<Graph, RandomGraphError> {
    check_probability("p", p)?;
    let n = g.node_count();
    let original: Vec<(usize, usize)> = g.edges().collect();
    for attempt in 0..REWIRE_CONNECT_ATTEMPTS {
        let mut rng = stream_rng(seed, attempt);
        let mut current: std::collections::BTreeSet<(usize, usize)> =
            original.iter().copied().collect();
        for &edge in &original {
            if !rng.gen_bool(p) {
                continue;
            }
            current.remove(&edge);
            // Uniform over pairs currently unlinked; the removed edge itself
            // is a legal outcome. On a complete graph this puts every edge
            // back, as it must.
            loop {
                let a = rng.gen_range(0..n);
                let b = rng.gen_range(0..n);
                if a == b {
                    continue;
                }
                let pair = (a.min(b), a.max(b));
                if !current.contains(&pair) {
                    current.insert(pair);
                    break;
                }
            }
        }
        let edges: Vec<(usize, usize)> = current.into_iter().collect();
        let candidate =
            Graph::from_edges(n, &edges).expect("rewired pairs are simple and in range");
        if candidate.is_connected() {
            return Ok(candidate);
        }
    }
    Err(RandomGraphError::ConnectivityCapExceeded {
        attempts: REWIRE_CONNECT_ATTEMPTS,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::FamilySpec;
    use crate::graph::modularity;
    use proptest::prelude::*;
    use rand::Rng;

    fn edge_vec(g: &Graph) -> Vec<(usize, usize)> {
        g.edges().collect()
    }

    #[test]
    fn stream_rng_is_deterministic_and_stream_dependent() {
        let mut a = stream_rng(7, 0);
        let mut b = stream_rng(7, 0);
        let mut c = stream_rng(7, 1);
        let mut d = stream_rng(8, 0);
        let (xa, xb, xc, xd) = (
            a.gen::<u64>(),
            b.gen::<u64>(),
            c.gen::<u64>(),
            d.gen::<u64>(),
        );
        assert_eq!(xa, xb);
        assert_ne!(xa, xc);
        assert_ne!(xa, xd);
    }

    #[test]
    fn erdos_renyi_extremes_and_determinism() {
        let complete = erdos_renyi(5, 1.0, 3, false).unwrap();
        assert_eq!(complete.edge_count(), 10);
        let empty = erdos_renyi(5, 0.0, 3, false).unwrap();
        assert_eq!(empty.edge_count(), 0);
        assert!(matches!(
            erdos_renyi(40, 0.0, 3, true),
            Err(RandomGraphError::ConnectivityCapExceeded { .. })
        ));
        assert!(erdos_renyi(5, 1.5, 3, false).is_err());

        let g1 = erdos_renyi(40, 0.5, 7, true).unwrap();
        let g2 = erdos_renyi(40, 0.5, 7, true).unwrap();
        assert_eq!(edge_vec(&g1), edge_vec(&g2));
        assert!(g1.is_connected());
        let g3 = erdos_renyi(40, 0.5, 8, true).unwrap();
        assert_ne!(edge_vec(&g1), edge_vec(&g3));
    }

    #[test]
    fn erdos_renyi_edge_count_is_plausible() {
        // Binomial(4950, 0.3): mean 1485, sd ~32. A deterministic sample
        // should sit well inside five standard deviations.
        let g = erdos_renyi(100, 0.3, 11, false).unwrap();
        let edges = g.edge_count() as f64;
        assert!((edges - 1485.0).abs() < 160.0, "edge count {edges}");
    }

    #[test]
    fn sbm_extremes_and_planted_modularity() {
        let (two_cliques, part) = sbm(&[3, 3], 1.0, 0.0, 1).unwrap();
        assert_eq!(two_cliques.edge_count(), 6);
        assert!(!two_cliques.is_connected());
        assert_eq!(part.community_count(), 2);

        let (k6, _) = sbm(&[3, 3], 1.0, 1.0, 1).unwrap();
        assert_eq!(k6.edge_count(), 15);

        let (g, part) = sbm(&[100, 100], 0.5, 0.05, 42).unwrap();
        assert_eq!(g.node_count(), 200);
        assert_eq!(part.community(0), 0);
        assert_eq!(part.community(150), 1);
        let q = modularity(&g, &part).unwrap();
        assert!(q > 0.3, "planted modularity {q}");
    }

    #[test]
    fn preferential_attachment_counts_and_tail() {
        let tree = preferential_attachment(3, 1, 1.0, 5).unwrap();
        assert_eq!(tree.edge_count(), 2);

        let g = preferential_attachment(100, 2, 1.0, 5).unwrap();
        assert_eq!(g.edge_count(), 197);
        assert!(g.is_connected());

        assert!(preferential_attachment(2, 2, 1.0, 5).is_err());
        assert!(preferential_attachment(5, 0, 1.0, 5).is_err());
        assert!(preferential_attachment(5, 2, -1.0, 5).is_err());

        // Heavier tail than Erdos-Renyi at matched mean degree: compare the
        // median max-degree over twenty seeded samples.
        let mean_degree = 2.0 * 197.0 / 100.0;
        let p = mean_degree / 99.0;
        let median_max = |samples: &mut Vec<usize>| {
            samples.sort_unstable();
            samples[samples.len() / 2]
        };
        let mut pa_max: Vec<usize> = (0..20)
            .map(|s| {
                let g = preferential_attachment(100, 2, 1.0, s).unwrap();
                (0..100).map(|x| g.degree(x)).max().unwrap()
            })
            .collect();
        let mut er_max: Vec<usize> = (0..20)
            .map(|s| {
                let g = erdos_renyi(100, p, s, false).unwrap();
                (0..100).map(|x| g.degree(x)).max().unwrap()
            })
            .collect();
        assert!(
            median_max(&mut pa_max) > median_max(&mut er_max),
            "preferential attachment should have the heavier degree tail"
        );
    }

    #[test]
    fn rewire_preserves_counts_and_handles_extremes() {
        let g = FamilySpec::StarOfCliques { m: 4, n: 10 }
            .generate()
            .unwrap();
        let same = rewire(&g, 0.0, 9).unwrap();
        assert_eq!(edge_vec(&g), edge_vec(&same));

        let k6 = FamilySpec::Clique { n: 6 }.generate().unwrap();
        let rewired_k6 = rewire(&k6, 1.0, 9).unwrap();
        assert_eq!(edge_vec(&k6), edge_vec(&rewired_k6));

        let shuffled = rewire(&g, 0.3, 9).unwrap();
        assert_eq!(shuffled.node_count(), g.node_count());
        assert_eq!(shuffled.edge_count(), g.edge_count());
        assert!(shuffled.is_connected());
        assert_ne!(edge_vec(&g), edge_vec(&shuffled));
        // Determinism.
        let again = rewire(&g, 0.3, 9).unwrap();
        assert_eq!(edge_vec(&shuffled), edge_vec(&again));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn rewire_count_preservation(p in 0.0f64..=1.0, seed in 0u64..1000) {
            let g = FamilySpec::RingOfStars { l: 3, n: 4 }.generate().unwrap();
            let rewired = rewire(&g, p, seed).unwrap();
            prop_assert_eq!(rewired.node_count(), g.node_count());
            prop_assert_eq!(rewired.edge_count(), g.edge_count());
            prop_assert!(rewired.is_connected());
        }
    }
}
