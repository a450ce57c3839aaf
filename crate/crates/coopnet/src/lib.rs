//! Does natural selection favor cooperation on a given network?
//!
//! This crate answers that question exactly for any undirected, connected
//! graph under death-birth (and imitation) updating of the donation game. The
//! central quantity is the critical benefit-to-cost ratio `b*`: cooperation is
//! favored over neutral drift precisely when `b/c > b*`. `b*` is computed from
//! the expected meeting times of two coalescing random walkers, which satisfy
//! a linear system over node pairs that this crate assembles and solves
//! directly (dense Cholesky), iteratively (relaxation), or in exact rational
//! arithmetic.
//!
//! The crate also ships generators for the structured graph families whose
//! `b*` admits closed forms (stars, cliques, rings and hierarchies of them,
//! rich clubs, bipartite composites), those closed forms in big-rational
//! arithmetic as independent oracles, seeded random-graph models, composition
//! operators (conjoining, broker chains, leaf attachment), and a Monte Carlo
//! simulator of the evolutionary dynamics for end-to-end validation.

pub mod coalescence;
pub mod conjoin;
pub mod digest;
pub mod exact;
pub mod families;
pub mod graph;
mod linalg;
pub mod random;
pub mod reference;
pub mod simulate;
#[cfg(test)]
pub(crate) mod testutil;

pub use coalescence::{
    bstar_db, bstar_im, bstar_im_with, general_game_favored, solve_coalescence,
    solve_coalescence_with, tau_moments, weak_selection_fixation, BStarReport, Classification,
    CoalescenceSolution, GameMatrix, Method, SolveError, TauMoments, Updating,
};
pub use conjoin::{
    attach_leaves, conjoin, connect_groups, gate_sweep, gate_sweep_with, ClassificationCounts,
    ConjoinError, GatePairReport, InvBStarQuantiles, SweepSummary,
};
pub use families::{closed_form_grid, ClosedFormResult, FamilyError, FamilySpec, Form};
pub use graph::{modularity, Graph, GraphError, Partition};
pub use random::{
    erdos_renyi, preferential_attachment, rewire, sbm, stream_rng, RandomGraphError,
};
pub use simulate::{
    crossover_scan, estimate_fixation, ScanPoint, SimulateError, SimulationConfig,
    SimulationResult, DEFAULT_MAX_STEPS,
};
