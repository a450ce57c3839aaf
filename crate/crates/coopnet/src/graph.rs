//! Undirected simple graphs with a plain-text edge-list format, connectivity
//! checks, and Newman modularity for node partitions.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

/// Errors arising from graph construction, parsing, or partition handling.
#[derive(Debug, thiserror::Error)]
pub enum GraphError {
    #[error("line {line}: expected `u v`, got {found:?}")]
    Malformed { line: usize, found: String },
    #[error("line {line}: self-loop on node {node}")]
    SelfLoop { line: usize, node: u64 },
    #[error("edge ({u}, {v}) out of range for {n} nodes")]
    EdgeOutOfRange { u: usize, v: usize, n: usize },
    #[error("self-loop on node {0}")]
    SelfLoopNode(usize),
    #[error("edge list is empty")]
    EmptyEdgeList,
    #[error("partition covers {partition} nodes but graph has {graph}")]
    PartitionSizeMismatch { partition: usize, graph: usize },
    #[error("partition labels must be contiguous from 0; label {missing} is unused")]
    PartitionNotContiguous { missing: u32 },
    #[error("modularity is undefined for a graph with no edges")]
    NoEdges,
}

/// An undirected simple graph on nodes `0..n`.
///
/// Neighbor lists are kept sorted, self-loops are rejected, and parallel
/// edges collapse to one. Nodes loaded from an edge list are compacted to
/// `0..n` (in increasing order of their original labels), with the original
/// labels retained for reporting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<u32>>,
    edge_count: usize,
    labels: Vec<u64>,
}

impl Graph {
    /// Builds a graph on `n` nodes from an edge slice. Reversed duplicates
    /// collapse; self-loops and out-of-range endpoints are errors.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(GraphError::EdgeOutOfRange { u, v, n });
            }
            if u == v {
                return Err(GraphError::SelfLoopNode(u));
            }
            adjacency[u].push(v as u32);
            adjacency[v].push(u as u32);
        }
        let mut edge_count = 0;
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
            edge_count += list.len();
        }
        Ok(Graph {
            adjacency,
            edge_count: edge_count / 2,
            labels: (0..n as u64).collect(),
        })
    }

    /// Parses the plain-text edge-list format: one `u v` pair per line with
    /// arbitrary non-negative integer labels, blank lines skipped, and lines
    /// starting with `#` treated as comments. Node labels are compacted to
    /// `0..n` in increasing label order; duplicate and reversed edges
    /// collapse to one.
    pub fn from_edge_list(text: &str) -> Result<Self, GraphError> {
        let mut raw_edges: Vec<(u64, u64)> = Vec::new();
        for (idx, raw_line) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw_line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let mut parts = trimmed.split_whitespace();
            let (u, v) = match (parts.next(), parts.next(), parts.next()) {
                (Some(a), Some(b), None) => {
                    let parse = |s: &str| {
                        s.parse::<u64>().map_err(|_| GraphError::Malformed {
                            line,
                            found: trimmed.to_string(),
                        })
                    };
                    (parse(a)?, parse(b)?)
                }
                _ => {
                    return Err(GraphError::Malformed {
                        line,
                        found: trimmed.to_string(),
                    })
                }
            };
            if u == v {
                return Err(GraphError::SelfLoop { line, node: u });
            }
            raw_edges.push((u, v));
        }
        if raw_edges.is_empty() {
            return Err(GraphError::EmptyEdgeList);
        }

        let mut labels: Vec<u64> = raw_edges.iter().flat_map(|&(u, v)| [u, v]).collect();
        labels.sort_unstable();
        labels.dedup();
        let index_of = |label: u64| labels.binary_search(&label).expect("label present");

        let edges: Vec<(usize, usize)> = raw_edges
            .iter()
            .map(|&(u, v)| (index_of(u), index_of(v)))
            .collect();
        let mut graph = Self::from_edges(labels.len(), &edges)?;
        graph.labels = labels;
        Ok(graph)
    }

    /// Serializes to the edge-list format: one `u v` line per edge with
    /// `u < v` (internal compacted ids), sorted lexicographically.
    /// `Graph::from_edge_list` inverts this exactly.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for (u, v) in self.edges() {
            writeln!(out, "{} {}", u, v).expect("write to string");
        }
        out
    }

    /// Number of nodes.
    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    /// Number of edges.
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Degree of node `x`.
    pub fn degree(&self, x: usize) -> usize {
        self.adjacency[x].len()
    }

    /// Sorted neighbor list of node `x`.
    pub fn neighbors(&self, x: usize) -> &[u32] {
        &self.adjacency[x]
    }

    /// Whether the edge `{x, y}` is present.
    pub fn has_edge(&self, x: usize, y: usize) -> bool {
        self.adjacency[x].binary_search(&(y as u32)).is_ok()
    }

    /// Mean degree `2|E| / n`.
    pub fn mean_degree(&self) -> f64 {
        2.0 * self.edge_count as f64 / self.node_count() as f64
    }

    /// Original label of compacted node `x` (identity unless the graph came
    /// from an edge list with gaps).
    pub fn original_label(&self, x: usize) -> u64 {
        self.labels[x]
    }

    /// Iterates over edges as `(u, v)` pairs with `u < v`, in sorted order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(u, list)| {
            list.iter()
                .filter(move |&&v| u < v as usize)
                .map(move |&v| (u, v as usize))
        })
    }

    /// Whether the graph is connected. The empty graph and singletons count
    /// as connected.
    pub fn is_connected(&self) -> bool {
        let n = self.node_count();
        if n <= 1 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(x) = stack.pop() {
            for &y in &self.adjacency[x] {
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    count += 1;
                    stack.push(y as usize);
                }
            }
        }
        count == n
    }

    /// Map from degree to the number of nodes with that degree.
    pub fn degree_histogram(&self) -> BTreeMap<usize, usize> {
        let mut hist = BTreeMap::new();
        for list in &self.adjacency {
            *hist.entry(list.len()).or_insert(0) += 1;
        }
        hist
    }

    /// Summary metadata as JSON: node count, edge count, degree histogram.
    pub fn metadata_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.node_count(),
            "edge_count": self.edge_count(),
            "degree_histogram": self.degree_histogram(),
        })
    }

    /// Stable hex digest of the canonical edge list, for provenance records.
    pub fn digest(&self) -> String {
        crate::digest::hex_digest(self.to_edge_list().as_bytes())
    }

    /// Returns the graph with node `x` renamed to `perm[x]`. `perm` must be
    /// a permutation of `0..n`; useful for isomorphism-invariance checks.
    pub fn relabeled(&self, perm: &[usize]) -> Graph {
        let edges: Vec<(usize, usize)> = self.edges().map(|(u, v)| (perm[u], perm[v])).collect();
        Graph::from_edges(self.node_count(), &edges).expect("permutation preserves validity")
    }
}

/// A partition of graph nodes into communities labeled `0..count`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Partition {
    assignment: Vec<u32>,
    count: usize,
}

impl Partition {
    /// Validates that community labels are contiguous from 0 (every label
    /// below the maximum is used).
    pub fn new(assignment: Vec<u32>) -> Result<Self, GraphError> {
        let count = assignment.iter().copied().max().map_or(0, |m| m as usize + 1);
        let mut used = vec![false; count];
        for &c in &assignment {
            used[c as usize] = true;
        }
        if let Some(missing) = used.iter().position(|&u| !u) {
            return Err(GraphError::PartitionNotContiguous {
                missing: missing as u32,
            });
        }
        Ok(Partition { assignment, count })
    }

    /// Community label of node `x`.
    pub fn community(&self, x: usize) -> u32 {
        self.assignment[x]
    }

    /// Number of communities.
    pub fn community_count(&self) -> usize {
        self.count
    }

    /// Number of assigned nodes.
    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    /// Whether the partition covers no nodes.
    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    /// Per-node community labels.
    pub fn assignment(&self) -> &[u32] {
        &self.assignment
    }
}

/// Newman modularity `Q = sum_c (e_c / m - (d_c / 2m)^2)`, where `e_c` is the
/// number of edges inside community `c` and `d_c` the total degree of its
/// nodes.
///
/// # Examples
///
/// ```
/// use coopnet::graph::{modularity, Graph, Partition};
///
/// // Two triangles joined by a single edge, split at that edge.
/// let g = Graph::from_edges(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)])
///     .unwrap();
/// let p = Partition::new(vec![0, 0, 0, 1, 1, 1]).unwrap();
/// assert!((modularity(&g, &p).unwrap() - 5.0 / 14.0).abs() < 1e-12);
/// ```
pub fn modularity(g: &Graph, partition: &Partition) -> Result<f64, GraphError> {
    if partition.len() != g.node_count() {
        return Err(GraphError::PartitionSizeMismatch {
            partition: partition.len(),
            graph: g.node_count(),
        });
    }
    let m = g.edge_count();
    if m == 0 {
        return Err(GraphError::NoEdges);
    }
    let mut internal = vec![0usize; partition.community_count()];
    let mut total_degree = vec![0usize; partition.community_count()];
    for (u, v) in g.edges() {
        if partition.community(u) == partition.community(v) {
            internal[partition.community(u) as usize] += 1;
        }
    }
    for x in 0..g.node_count() {
        total_degree[partition.community(x) as usize] += g.degree(x);
    }
    let m = m as f64;
    let mut q = 0.0;
    for c in 0..partition.community_count() {
        let e_c = internal[c] as f64 / m;
        let d_c = total_degree[c] as f64 / (2.0 * m);
        q += e_c - d_c * d_c;
    }
    Ok(q)
}
