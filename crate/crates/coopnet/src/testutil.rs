//! Tiny graph builders for unit tests, independent of the family generators.

use crate::graph::Graph;

pub fn complete_graph(n: usize) -> Graph {
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|x| ((x + 1)..n).map(move |y| (x, y)))
        .collect();
    Graph::from_edges(n, &edges).unwrap()
}

/// Star with `leaves` leaves: hub is node 0.
pub fn star_graph(leaves: usize) -> Graph {
    let edges: Vec<(usize, usize)> = (1..=leaves).map(|l| (0, l)).collect();
    Graph::from_edges(leaves + 1, &edges).unwrap()
}

pub fn path_graph(n: usize) -> Graph {
    let edges: Vec<(usize, usize)> = (1..n).map(|x| (x - 1, x)).collect();
    Graph::from_edges(n, &edges).unwrap()
}

pub fn cycle_graph(n: usize) -> Graph {
    let edges: Vec<(usize, usize)> = (0..n).map(|x| (x, (x + 1) % n)).collect();
    Graph::from_edges(n, &edges).unwrap()
}

/// Two stars with `n1` and `n2` leaves, hubs 0 and 1 joined by an edge.
pub fn two_stars_hub_hub(n1: usize, n2: usize) -> Graph {
    let mut edges = vec![(0usize, 1usize)];
    for l in 0..n1 {
        edges.push((0, 2 + l));
    }
    for l in 0..n2 {
        edges.push((1, 2 + n1 + l));
    }
    Graph::from_edges(2 + n1 + n2, &edges).unwrap()
}
