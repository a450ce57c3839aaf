//! Structured graph families: deterministic generators, exact closed forms
//! for the critical ratio, and asymptotic expansions.
//!
//! Every family is described by a [`FamilySpec`], parsed from strings like
//! `"ring_of_stars:L=5,n=20"`. Three things can be asked of a spec:
//!
//! * [`FamilySpec::generate`] builds the graph with a documented, canonical
//!   node ordering (useful for reproducible sweeps and gate selection);
//! * [`FamilySpec::closed_form_bstar`] evaluates the family's exact critical
//!   ratio in big-rational arithmetic, when one is known;
//! * [`FamilySpec::asymptotic_bstar`] evaluates a large-parameter expansion,
//!   when one is known.
//!
//! The closed forms are independent of the coalescence solver: they are
//! polynomial (or quadratic-surd, for rings of stars) expressions in the
//! family parameters, so they serve as exact oracles for the numeric engine.
//! A zero denominator in a closed form means no finite benefit-to-cost ratio
//! favors cooperation ([`Classification::NeverFavored`]); this is an exact
//! statement, not a tolerance call.
//!
//! Closed-form coverage: stars, extended stars (perfect, imperfect, and
//! three-layer), stars of stars (perfect and imperfect), two stars joined
//! hub-to-hub or via one broker (the broker case only for equal sizes),
//! rings of stars, cliques, two cliques joined directly or via one broker,
//! stars of cliques, hierarchies of cliques, complete bipartite graphs, and
//! two complete bipartite graphs joined gate-to-gate. Rich clubs, two rich
//! clubs, rings of cliques, two cliques joined via a star, broker chains of
//! length two or more, and unequal-size broker joins are covered numerically
//! (by the solver) and asymptotically only; for those,
//! [`FamilySpec::closed_form_bstar`] returns `Ok(None)`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::coalescence::Classification;
use crate::graph::Graph;

/// Errors from parsing or evaluating a family specification.
#[derive(Debug, Error)]
pub enum FamilyError {
    /// The family name is not one of the supported generators.
    #[error("unknown family `{name}`; expected one of: {}", FamilySpec::NAMES.join(", "))]
    UnknownName {
        /// The offending name.
        name: String,
    },
    /// The spec string is malformed (bad syntax, missing or duplicate keys).
    #[error("invalid family spec `{spec}`: {reason}")]
    Parse {
        /// The full spec string.
        spec: String,
        /// What went wrong.
        reason: String,
    },
    /// A parameter value is outside the family's domain.
    #[error("{family}: parameter {parameter}={value} out of range ({requirement})")]
    ParameterRange {
        /// Family name.
        family: &'static str,
        /// Offending parameter key.
        parameter: &'static str,
        /// Offending value.
        value: usize,
        /// Human-readable bound, e.g. "requires L >= 3".
        requirement: &'static str,
    },
    /// No asymptotic expansion is available for this family or parameter
    /// point (including poles of an otherwise-valid expansion).
    #[error("{family}: no asymptotic expansion ({reason})")]
    NoExpansion {
        /// Family name.
        family: &'static str,
        /// Why there is no expansion here.
        reason: String,
    },
}

/// How a [`ClosedFormResult`] value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Form {
    /// Exact rational (or rationalized surd) arithmetic.
    Exact,
    /// Leading term of a large-parameter expansion.
    AsymptoticLeading,
    /// Expansion including constant and/or first-order corrections.
    AsymptoticWithCorrections,
}

impl Form {
    /// Stable lowercase token for reports.
    pub fn as_str(self) -> &'static str {
        match self {
            Form::Exact => "exact",
            Form::AsymptoticLeading => "asymptotic-leading",
            Form::AsymptoticWithCorrections => "asymptotic-with-corrections",
        }
    }
}

/// A critical ratio obtained from a formula rather than the solver.
#[derive(Debug, Clone)]
pub struct ClosedFormResult {
    /// The critical ratio as a float; `None` when never favored.
    pub b_star: Option<f64>,
    /// The exact value; populated only for [`Form::Exact`] results with a
    /// nonzero denominator.
    pub rational: Option<BigRational>,
    /// Favorability verdict implied by the formula.
    pub classification: Classification,
    /// Provenance of the value.
    pub form: Form,
}

/// A parametrized graph family.
///
/// All variants use 1-based "count" parameters (numbers of leaves, cliques,
/// hubs, and so on); see each variant for the exact construction and the
/// canonical node ordering produced by [`FamilySpec::generate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilySpec {
    /// Hub `0` joined to leaves `1..=n`. `N = n+1`, `E = n`.
    Star {
        /// Number of leaves.
        n: usize,
    },
    /// Hub `0`, gates `1..=n` on the hub, and one tip `n+i` pendant on each
    /// gate `i`. `N = 2n+1`, `E = 2n`.
    ExtendedStar {
        /// Number of gate/tip spokes.
        n: usize,
    },
    /// Extended star where only the first `n_g` of the `n` gates carry a
    /// tip: hub `0`, gates `1..=n`, tips `n+1..=n+n_g` (tip `n+i` on gate
    /// `i`). `N = 1+n+n_g`, `E = n+n_g`.
    ImperfectExtendedStar {
        /// Number of gates on the hub.
        n: usize,
        /// Number of gates carrying a tip (`1 <= n_g <= n`).
        n_g: usize,
    },
    /// Hub `0` with `n` three-node spokes: gate `i`, middle `n+i`, tip
    /// `2n+i`, chained hub-gate-middle-tip. `N = 3n+1`, `E = 3n`.
    ThreeLayerExtendedStar {
        /// Number of spokes.
        n: usize,
    },
    /// Center `0`, sub-hubs `1..=n`, and `n_d` leaves per sub-hub (leaves of
    /// sub-hub `i` are `n+1+(i-1)·n_d .. n+i·n_d`). `N = 1+n(1+n_d)`.
    StarOfStars {
        /// Number of sub-hubs.
        n: usize,
        /// Leaves per sub-hub.
        n_d: usize,
    },
    /// Star of stars where only the first `n_g` of the `n` peripherals carry
    /// leaves; peripheral `i <= n_g` owns leaves
    /// `1+n+(i-1)·n_d .. n+i·n_d`. `N = 1+n+n_g·n_d`.
    ImperfectStarOfStars {
        /// Number of peripheral nodes on the center.
        n: usize,
        /// Number of peripherals carrying leaves (`1 <= n_g <= n`).
        n_g: usize,
        /// Leaves per carrying peripheral.
        n_d: usize,
    },
    /// Two stars whose hubs `0` and `1` share an edge; leaves `2..2+n1` on
    /// hub `0`, then `n2` leaves on hub `1`. `N = 2+n1+n2`.
    TwoStarsHubHub {
        /// Leaves on the first hub.
        n1: usize,
        /// Leaves on the second hub.
        n2: usize,
    },
    /// Two stars whose hubs `0` and `1` are joined through broker `2`;
    /// leaves `3..3+n1` on hub `0`, then `n2` leaves on hub `1`.
    /// `N = 3+n1+n2`.
    TwoStarsViaBroker {
        /// Leaves on the first hub.
        n1: usize,
        /// Leaves on the second hub.
        n2: usize,
    },
    /// `l` hubs `0..l` on a cycle, each with `n` private leaves (hub `i`
    /// owns `l+i·n .. l+(i+1)·n`). `N = E = l(1+n)`.
    RingOfStars {
        /// Number of hubs on the cycle (`l >= 3`).
        l: usize,
        /// Leaves per hub.
        n: usize,
    },
    /// Complete graph on nodes `0..n`.
    Clique {
        /// Number of nodes (`n >= 2`).
        n: usize,
    },
    /// Two `n`-cliques `0..n` and `n..2n` bridged by the edge `(0, n)`.
    /// `N = 2n`, `E = n(n-1)+1`.
    TwoCliquesDirect {
        /// Clique size.
        n: usize,
    },
    /// Two `n`-cliques whose gates `0` and `n` are joined through a chain of
    /// `l` brokers `2n..2n+l`. `N = 2n+l`, `E = n(n-1)+l+1`.
    TwoCliquesBrokers {
        /// Clique size.
        n: usize,
        /// Brokers on the chain (`l >= 1`).
        l: usize,
    },
    /// Hub `0` joined to the gate of each of `m` cliques of size `n`;
    /// clique `i` occupies `1+i·n .. 1+(i+1)·n` with gate `1+i·n`.
    /// `N = 1+mn`, `E = m·n(n-1)/2 + m`.
    StarOfCliques {
        /// Number of cliques (`m >= 3`).
        m: usize,
        /// Clique size (`n >= 2`).
        n: usize,
    },
    /// Two `n`-cliques joined through the hub of a star of size `m_star`:
    /// cliques `0..n` and `n..2n` (gates `0` and `n`), hub `2n`, and
    /// `m_star-1` leaves `2n+1..`. `m_star = 1` degenerates to a single
    /// broker. `N = 2n+m_star`, `E = n(n-1)+m_star+1`.
    TwoCliquesViaStar {
        /// Clique size (`n >= 2`).
        n: usize,
        /// Star size: the hub plus `m_star - 1` leaves.
        m_star: usize,
    },
    /// `l` cliques of size `n` on a cycle, adjacent cliques joined by a
    /// gate-gate edge; clique `i` occupies `i·n..(i+1)·n` with gate `i·n`.
    /// `N = ln`, `E = l·n(n-1)/2 + l`.
    RingOfCliques {
        /// Number of cliques on the cycle (`l >= 3`).
        l: usize,
        /// Clique size (`n >= 2`).
        n: usize,
    },
    /// Three-level tree of cliques: base `0`, middle nodes `1..=q`, and `q`
    /// cliques of size `n` under each middle node. Clique `(i, j)` (middle
    /// `i`, branch `j` in `0..q`) starts at `1+q+((i-1)q+j)·n` and its first
    /// node is the gate joined to middle `i`. `N = 1+q+q²n`.
    HierarchyOfCliques {
        /// Branching factor (`q >= 2`).
        q: usize,
        /// Clique size (`n >= 2`).
        n: usize,
    },
    /// Core clique `0..n_c` plus periphery `n_c..n_c+n_p`, every peripheral
    /// joined to every core node. `N = n_c+n_p`, `E = n_c(n_c-1)/2 + n_c·n_p`.
    RichClub {
        /// Core size.
        n_c: usize,
        /// Periphery size.
        n_p: usize,
    },
    /// Two identical rich clubs (offsets `0` and `n_c+n_p`) bridged by an
    /// edge between their first core nodes. `N = 2(n_c+n_p)`.
    TwoRichClubs {
        /// Core size of each club.
        n_c: usize,
        /// Periphery size of each club.
        n_p: usize,
    },
    /// Complete bipartite graph: sides `0..n_x` and `n_x..n_x+n_y`, all
    /// cross edges. `N = n_x+n_y`, `E = n_x·n_y`.
    CompleteBipartite {
        /// First side size.
        n_x: usize,
        /// Second side size.
        n_y: usize,
    },
    /// Two identical complete bipartite graphs (offsets `0` and `n_x+n_y`)
    /// bridged by an edge between their first `x`-side nodes (the gates,
    /// degree `n_y+1`). `N = 2(n_x+n_y)`, `E = 2·n_x·n_y + 1`.
    TwoBipartite {
        /// `x`-side size of each half (the gated side).
        n_x: usize,
        /// `y`-side size of each half.
        n_y: usize,
    },
}

impl FamilySpec {
    /// Every recognized family name, in parse order.
    pub const NAMES: [&'static str; 20] = [
        "star",
        "extended_star",
        "imperfect_extended_star",
        "three_layer_extended_star",
        "star_of_stars",
        "imperfect_star_of_stars",
        "two_stars_hub_hub",
        "two_stars_via_broker",
        "ring_of_stars",
        "clique",
        "two_cliques_direct",
        "two_cliques_brokers",
        "star_of_cliques",
        "two_cliques_via_star",
        "ring_of_cliques",
        "hierarchy_of_cliques",
        "rich_club",
        "two_rich_clubs",
        "complete_bipartite",
        "two_bipartite",
    ];

    /// The family's name token (the part before `:` in spec strings).
    pub fn name(&self) -> &'static str {
        match self {
            FamilySpec::Star { .. } => "star",
            FamilySpec::ExtendedStar { .. } => "extended_star",
            FamilySpec::ImperfectExtendedStar { .. } => "imperfect_extended_star",
            FamilySpec::ThreeLayerExtendedStar { .. } => "three_layer_extended_star",
            FamilySpec::StarOfStars { .. } => "star_of_stars",
            FamilySpec::ImperfectStarOfStars { .. } => "imperfect_star_of_stars",
            FamilySpec::TwoStarsHubHub { .. } => "two_stars_hub_hub",
            FamilySpec::TwoStarsViaBroker { .. } => "two_stars_via_broker",
            FamilySpec::RingOfStars { .. } => "ring_of_stars",
            FamilySpec::Clique { .. } => "clique",
            FamilySpec::TwoCliquesDirect { .. } => "two_cliques_direct",
            FamilySpec::TwoCliquesBrokers { .. } => "two_cliques_brokers",
            FamilySpec::StarOfCliques { .. } => "star_of_cliques",
            FamilySpec::TwoCliquesViaStar { .. } => "two_cliques_via_star",
            FamilySpec::RingOfCliques { .. } => "ring_of_cliques",
            FamilySpec::HierarchyOfCliques { .. } => "hierarchy_of_cliques",
            FamilySpec::RichClub { .. } => "rich_club",
            FamilySpec::TwoRichClubs { .. } => "two_rich_clubs",
            FamilySpec::CompleteBipartite { .. } => "complete_bipartite",
            FamilySpec::TwoBipartite { .. } => "two_bipartite",
        }
    }

    /// Parameter keys and values in canonical display order.
    pub fn params(&self) -> Vec<(&'static str, usize)> {
        match *self {
            FamilySpec::Star { n }
            | FamilySpec::ExtendedStar { n }
            | FamilySpec::ThreeLayerExtendedStar { n }
            | FamilySpec::Clique { n }
            | FamilySpec::TwoCliquesDirect { n } => vec![("n", n)],
            FamilySpec::ImperfectExtendedStar { n, n_g } => vec![("n", n), ("n_g", n_g)],
            FamilySpec::StarOfStars { n, n_d } => vec![("n", n), ("n_d", n_d)],
            FamilySpec::ImperfectStarOfStars { n, n_g, n_d } => {
                vec![("n", n), ("n_g", n_g), ("n_d", n_d)]
            }
            FamilySpec::TwoStarsHubHub { n1, n2 } | FamilySpec::TwoStarsViaBroker { n1, n2 } => {
                vec![("n1", n1), ("n2", n2)]
            }
            FamilySpec::RingOfStars { l, n } | FamilySpec::RingOfCliques { l, n } => {
                vec![("L", l), ("n", n)]
            }
            FamilySpec::TwoCliquesBrokers { n, l } => vec![("n", n), ("L", l)],
            FamilySpec::StarOfCliques { m, n } => vec![("m", m), ("n", n)],
            FamilySpec::TwoCliquesViaStar { n, m_star } => vec![("n", n), ("m_star", m_star)],
            FamilySpec::HierarchyOfCliques { q, n } => vec![("q", q), ("n", n)],
            FamilySpec::RichClub { n_c, n_p } | FamilySpec::TwoRichClubs { n_c, n_p } => {
                vec![("n_c", n_c), ("n_p", n_p)]
            }
            FamilySpec::CompleteBipartite { n_x, n_y } | FamilySpec::TwoBipartite { n_x, n_y } => {
                vec![("n_x", n_x), ("n_y", n_y)]
            }
        }
    }

    /// Checks every parameter against the family's domain.
    pub fn validate(&self) -> Result<(), FamilyError> {
        let fail = |parameter, value, requirement| {
            Err(FamilyError::ParameterRange {
                family: self.name(),
                parameter,
                value,
                requirement,
            })
        };
        for (key, value) in self.params() {
            if value == 0 {
                return fail(key, 0, "every parameter must be at least 1");
            }
        }
        match *self {
            FamilySpec::ImperfectExtendedStar { n, n_g } if n_g > n => {
                fail("n_g", n_g, "requires n_g <= n")
            }
            FamilySpec::ImperfectStarOfStars { n, n_g, .. } if n_g > n => {
                fail("n_g", n_g, "requires n_g <= n")
            }
            FamilySpec::RingOfStars { l, .. } if l < 3 => fail("L", l, "a ring requires L >= 3"),
            FamilySpec::RingOfCliques { l, .. } if l < 3 => fail("L", l, "a ring requires L >= 3"),
            FamilySpec::RingOfCliques { n, .. } if n < 2 => {
                fail("n", n, "cliques must have n >= 2 nodes")
            }
            FamilySpec::Clique { n } if n < 2 => fail("n", n, "requires n >= 2"),
            FamilySpec::StarOfCliques { m, .. } if m < 3 => {
                fail("m", m, "a star of cliques requires m >= 3 cliques")
            }
            FamilySpec::StarOfCliques { n, .. } if n < 2 => {
                fail("n", n, "cliques must have n >= 2 nodes")
            }
            FamilySpec::TwoCliquesViaStar { n, .. } if n < 2 => {
                fail("n", n, "cliques must have n >= 2 nodes")
            }
            FamilySpec::HierarchyOfCliques { q, .. } if q < 2 => {
                fail("q", q, "a hierarchy requires branching q >= 2")
            }
            FamilySpec::HierarchyOfCliques { n, .. } if n < 2 => {
                fail("n", n, "cliques must have n >= 2 nodes")
            }
            _ => Ok(()),
        }
    }

    /// Builds the family graph with the canonical node ordering documented
    /// on each variant.
    pub fn generate(&self) -> Result<Graph, FamilyError> {
        self.validate()?;
        let mut edges: Vec<(usize, usize)> = Vec::new();
        let nodes: usize = match *self {
            FamilySpec::Star { n } => {
                for i in 1..=n {
                    edges.push((0, i));
                }
                n + 1
            }
            FamilySpec::ExtendedStar { n } => {
                for i in 1..=n {
                    edges.push((0, i));
                    edges.push((i, n + i));
                }
                2 * n + 1
            }
            FamilySpec::ImperfectExtendedStar { n, n_g } => {
                for i in 1..=n {
                    edges.push((0, i));
                }
                for i in 1..=n_g {
                    edges.push((i, n + i));
                }
                1 + n + n_g
            }
            FamilySpec::ThreeLayerExtendedStar { n } => {
                for i in 1..=n {
                    edges.push((0, i));
                    edges.push((i, n + i));
                    edges.push((n + i, 2 * n + i));
                }
                3 * n + 1
            }
            FamilySpec::StarOfStars { n, n_d } => {
                for i in 1..=n {
                    edges.push((0, i));
                    for j in 0..n_d {
                        edges.push((i, n + 1 + (i - 1) * n_d + j));
                    }
                }
                1 + n * (1 + n_d)
            }
            FamilySpec::ImperfectStarOfStars { n, n_g, n_d } => {
                for i in 1..=n {
                    edges.push((0, i));
                }
                for i in 1..=n_g {
                    for j in 0..n_d {
                        edges.push((i, 1 + n + (i - 1) * n_d + j));
                    }
                }
                1 + n + n_g * n_d
            }
            FamilySpec::TwoStarsHubHub { n1, n2 } => {
                edges.push((0, 1));
                for i in 0..n1 {
                    edges.push((0, 2 + i));
                }
                for i in 0..n2 {
                    edges.push((1, 2 + n1 + i));
                }
                2 + n1 + n2
            }
            FamilySpec::TwoStarsViaBroker { n1, n2 } => {
                edges.push((0, 2));
                edges.push((2, 1));
                for i in 0..n1 {
                    edges.push((0, 3 + i));
                }
                for i in 0..n2 {
                    edges.push((1, 3 + n1 + i));
                }
                3 + n1 + n2
            }
            FamilySpec::RingOfStars { l, n } => {
                for i in 0..l {
                    edges.push((i, (i + 1) % l));
                    for j in 0..n {
                        edges.push((i, l + i * n + j));
                    }
                }
                l * (1 + n)
            }
            FamilySpec::Clique { n } => {
                push_clique(&mut edges, 0, n);
                n
            }
            FamilySpec::TwoCliquesDirect { n } => {
                push_clique(&mut edges, 0, n);
                push_clique(&mut edges, n, n);
                edges.push((0, n));
                2 * n
            }
            FamilySpec::TwoCliquesBrokers { n, l } => {
                push_clique(&mut edges, 0, n);
                push_clique(&mut edges, n, n);
                edges.push((0, 2 * n));
                for i in 1..l {
                    edges.push((2 * n + i - 1, 2 * n + i));
                }
                edges.push((2 * n + l - 1, n));
                2 * n + l
            }
            FamilySpec::StarOfCliques { m, n } => {
                for i in 0..m {
                    let base = 1 + i * n;
                    edges.push((0, base));
                    push_clique(&mut edges, base, n);
                }
                1 + m * n
            }
            FamilySpec::TwoCliquesViaStar { n, m_star } => {
                push_clique(&mut edges, 0, n);
                push_clique(&mut edges, n, n);
                let hub = 2 * n;
                edges.push((hub, 0));
                edges.push((hub, n));
                for i in 1..m_star {
                    edges.push((hub, hub + i));
                }
                2 * n + m_star
            }
            FamilySpec::RingOfCliques { l, n } => {
                for i in 0..l {
                    push_clique(&mut edges, i * n, n);
                    edges.push((i * n, ((i + 1) % l) * n));
                }
                l * n
            }
            FamilySpec::HierarchyOfCliques { q, n } => {
                for i in 1..=q {
                    edges.push((0, i));
                    for j in 0..q {
                        let start = 1 + q + ((i - 1) * q + j) * n;
                        edges.push((i, start));
                        push_clique(&mut edges, start, n);
                    }
                }
                1 + q + q * q * n
            }
            FamilySpec::RichClub { n_c, n_p } => {
                push_rich_club(&mut edges, 0, n_c, n_p);
                n_c + n_p
            }
            FamilySpec::TwoRichClubs { n_c, n_p } => {
                let s = n_c + n_p;
                push_rich_club(&mut edges, 0, n_c, n_p);
                push_rich_club(&mut edges, s, n_c, n_p);
                edges.push((0, s));
                2 * s
            }
            FamilySpec::CompleteBipartite { n_x, n_y } => {
                push_bipartite(&mut edges, 0, n_x, n_y);
                n_x + n_y
            }
            FamilySpec::TwoBipartite { n_x, n_y } => {
                let s = n_x + n_y;
                push_bipartite(&mut edges, 0, n_x, n_y);
                push_bipartite(&mut edges, s, n_x, n_y);
                edges.push((0, s));
                2 * s
            }
        };
        Ok(Graph::from_edges(nodes, &edges).expect("family constructions are simple and in range"))
    }

    /// Evaluates the family's exact critical ratio, if one is covered.
    ///
    /// `Ok(None)` means the parameters are valid but this family (or this
    /// parameter range) has no exact form and must go through the solver:
    /// rich clubs, rings of cliques, two cliques via a star, broker chains
    /// with `L >= 2`, unequal-size broker joins, and the clique-pair forms
    /// at `n = 1`.
    pub fn closed_form_bstar(&self) -> Result<Option<ClosedFormResult>, FamilyError> {
        self.validate()?;
        let result = match *self {
            // A lone hub dominates replacement: the denominator vanishes
            // identically for stars and complete bipartite graphs.
            FamilySpec::Star { .. } | FamilySpec::CompleteBipartite { .. } => Some(never()),
            FamilySpec::Clique { n } => {
                if n == 2 {
                    Some(never())
                } else {
                    Some(exact(-big(n as i64 - 1), big(1)))
                }
            }
            FamilySpec::ExtendedStar { n } => {
                let n = &big(n as i64);
                Some(exact(poly1(&[-1, -39, 56], n), poly1(&[-2, -20, 22], n)))
            }
            FamilySpec::ImperfectExtendedStar { n, n_g } => {
                let (n, g) = (&big(n as i64), &big(n_g as i64));
                Some(exact(poly2(&IES_NUM, n, g), poly2(&IES_DEN, n, g)))
            }
            FamilySpec::ThreeLayerExtendedStar { n } => {
                let n = &big(n as i64);
                Some(exact(
                    poly1(&[-6, -4820, -52194, 106940], n),
                    poly1(&[0, -10790, -18453, 41723], n),
                ))
            }
            FamilySpec::StarOfStars { n, n_d } => {
                let (n, d) = (&big(n as i64), &big(n_d as i64));
                let alpha = n * n * poly1(&[9, 44, 47, 12], d)
                    - n * poly1(&[8, 33, 31, 6], d)
                    - poly1(&[1, 1], d);
                let beta =
                    big(2) * d * (n - 1) * (big(2) + n * poly1(&[8, 3], d) * poly1(&[1, 1], d));
                Some(exact(alpha, beta))
            }
            FamilySpec::ImperfectStarOfStars { n, n_g, n_d } => {
                Some(imperfect_star_of_stars_exact(n, n_g, n_d))
            }
            FamilySpec::TwoStarsHubHub { n1, n2 } => {
                let (x, y) = (&big(n1 as i64), &big(n2 as i64));
                Some(exact(poly2(&TSHH_NUM, x, y), poly2(&TSHH_DEN, x, y)))
            }
            FamilySpec::TwoStarsViaBroker { n1, n2 } => {
                if n1 != n2 {
                    None
                } else {
                    let n = &big(n1 as i64);
                    Some(exact(
                        (n + 1) * poly1(&[19, 90, 36], n),
                        big(4) * n * poly1(&[9, 11, 3], n),
                    ))
                }
            }
            FamilySpec::RingOfStars { l, n } => Some(ring_of_stars_exact(l, n)),
            FamilySpec::TwoCliquesDirect { n } => {
                if n == 1 {
                    None
                } else {
                    let n = &big(n as i64);
                    let d = poly1(&[-2, -1, 1, 2, 1, 1], n);
                    Some(exact(n * n * &d - big(2) * n * n * n * (n - 2), d))
                }
            }
            FamilySpec::TwoCliquesBrokers { n, l } => {
                if l != 1 || n == 1 {
                    None
                } else {
                    let n = &big(n as i64);
                    Some(exact(
                        poly1(&[0, 0, -26, 81, -76, 34, -32, 37, -10, 8], n),
                        poly1(&[16, -116, 222, -100, -100, 104, -42, 20], n),
                    ))
                }
            }
            FamilySpec::StarOfCliques { m, n } => {
                let (m, n) = (&big(m as i64), &big(n as i64));
                Some(exact(poly2(&SOC_NUM, m, n), poly2(&SOC_DEN, m, n)))
            }
            FamilySpec::HierarchyOfCliques { q, n } => {
                let (q, n) = (&big(q as i64), &big(n as i64));
                Some(exact(poly2(&HIER_NUM, n, q), poly2(&HIER_DEN, n, q)))
            }
            FamilySpec::TwoBipartite { n_x, n_y } => {
                let (x, y) = (&big(n_x as i64), &big(n_y as i64));
                let alpha = x * (y + 1) * (y + 1) * poly2(&TBIP_NUM, x, y);
                Some(exact(alpha, poly2(&TBIP_DEN, x, y)))
            }
            FamilySpec::TwoCliquesViaStar { .. }
            | FamilySpec::RingOfCliques { .. }
            | FamilySpec::RichClub { .. }
            | FamilySpec::TwoRichClubs { .. } => None,
        };
        Ok(result)
    }

    /// Evaluates the family's large-parameter expansion.
    ///
    /// Each family documents its expansion regime below; outside that regime
    /// the value degrades gracefully (it is an asymptotic series, not a
    /// bound). Families whose exact form is already elementary (stars,
    /// cliques, complete bipartite graphs) and parameter points on a pole of
    /// the series return [`FamilyError::NoExpansion`].
    pub fn asymptotic_bstar(&self) -> Result<ClosedFormResult, FamilyError> {
        self.validate()?;
        let no_expansion = |reason: &str| {
            Err(FamilyError::NoExpansion {
                family: self.name(),
                reason: reason.to_string(),
            })
        };
        match *self {
            FamilySpec::Star { .. } | FamilySpec::CompleteBipartite { .. } => {
                no_expansion("never favored at every size; nothing to expand")
            }
            FamilySpec::Clique { .. } => {
                no_expansion("exact value -(n-1) is already its own expansion")
            }
            // Limit of the exact form as n grows.
            FamilySpec::ExtendedStar { .. } => Ok(asym(28.0 / 11.0, Form::AsymptoticLeading)),
            // Regime n_g fixed, n -> infinity.
            FamilySpec::ImperfectExtendedStar { n, n_g } => {
                let (n, g) = (n as f64, n_g as f64);
                Ok(asym(
                    34.0 / (89.0 * g) * n + (28539.0 * g + 8845.0) / (15842.0 * g),
                    Form::AsymptoticWithCorrections,
                ))
            }
            FamilySpec::ThreeLayerExtendedStar { n } => Ok(asym(
                106_940.0 / 41_723.0 - (204_326_442.0 / 1_740_808_729.0) / n as f64,
                Form::AsymptoticWithCorrections,
            )),
            // Regime n fixed (>= 2), n_d -> infinity.
            FamilySpec::StarOfStars { n, n_d } => {
                if n == 1 {
                    return no_expansion("pole at n = 1 (the family degenerates to a star)");
                }
                let (n, d) = (n as f64, n_d as f64);
                Ok(asym(
                    2.0 + 1.0 / (n - 1.0) + (0.5 + 1.0 / (1.0 - n)) / d,
                    Form::AsymptoticWithCorrections,
                ))
            }
            // Double limit n_g << n << n_d.
            FamilySpec::ImperfectStarOfStars { n_g, .. } => {
                if n_g == 1 {
                    return no_expansion("pole at n_g = 1");
                }
                Ok(asym(
                    1.5 + 1.0 / (2.0 * (n_g as f64 - 1.0)),
                    Form::AsymptoticLeading,
                ))
            }
            // Regime n1 -> infinity at fixed leaf ratio n2/n1.
            FamilySpec::TwoStarsHubHub { n1, n2 } => {
                let (n1, a) = (n1 as f64, n2 as f64 / n1 as f64);
                Ok(asym(
                    2.0 + 0.25 / a
                        + 0.25 * a
                        + (a + 1.0) * (9.0 * a * a + 10.0 * a + 9.0) / (32.0 * a * a * n1),
                    Form::AsymptoticWithCorrections,
                ))
            }
            FamilySpec::TwoStarsViaBroker { n1, n2 } => {
                let (n1, a) = (n1 as f64, n2 as f64 / n1 as f64);
                Ok(asym(
                    2.5 + 0.25 / a + 0.25 * a
                        - (a + 1.0) * (a + 3.0) * (3.0 * a + 1.0) / (64.0 * a * a * n1),
                    Form::AsymptoticWithCorrections,
                ))
            }
            // Regime n -> infinity at fixed ring length.
            FamilySpec::RingOfStars { l, n } => {
                let (l, n) = (l as f64, n as f64);
                let c0 = (3.0 * l - 1.0) / (2.0 * l - 2.0);
                let c1 = (2.0 * l * l + l + 3.0) / (2.0 * (l - 1.0) * (l - 1.0));
                let c2 = (3.0 * l * l * l - 6.0 * l * l - 15.0 * l - 18.0)
                    / (4.0 * (l - 1.0) * (l - 1.0) * (l - 1.0));
                Ok(asym(
                    c0 + c1 / n - c2 / (n * n),
                    Form::AsymptoticWithCorrections,
                ))
            }
            FamilySpec::TwoCliquesDirect { n } => {
                let n = n as f64;
                Ok(asym(
                    n * n - 2.0 / n + 6.0 / (n * n),
                    Form::AsymptoticWithCorrections,
                ))
            }
            FamilySpec::TwoCliquesBrokers { n, l } => {
                let n = n as f64;
                Ok(match l {
                    1 => asym(
                        0.4 * n * n + 0.34 * n + 121.0 / 250.0,
                        Form::AsymptoticWithCorrections,
                    ),
                    2 => asym(
                        4.0 * n - 224.0 / 5.0 + 42_304.0 / (75.0 * n),
                        Form::AsymptoticWithCorrections,
                    ),
                    // Long chains: the cliques decouple and the chain length
                    // alone sets the scale.
                    _ => asym(4.0 * n / (l as f64 - 1.0), Form::AsymptoticLeading),
                })
            }
            FamilySpec::StarOfCliques { m, n } => {
                let (m, n) = (m as f64, n as f64);
                let c0 = m / (m - 2.0);
                let c1 = (m + 8.0) * (m - 1.0) / ((m - 2.0) * (m - 2.0));
                let c2 = (14.0 * m.powi(4) + 11.0 * m.powi(3) - 14.0 * m * m - 50.0 * m + 44.0)
                    / (2.0 * m * (m - 2.0).powi(3));
                Ok(asym(c0 * n - c1 + c2 / n, Form::AsymptoticWithCorrections))
            }
            FamilySpec::TwoCliquesViaStar { n, m_star } => {
                if m_star == 1 {
                    return no_expansion("pole at m_star = 1 (single-broker join)");
                }
                let (n, m) = (n as f64, m_star as f64);
                let lead = (m + 4.0) * (m + 1.0) / (m * m + m - 2.0);
                let constant = (m + 1.0)
                    * (15.0 * m.powi(4)
                        + 178.0 * m.powi(3)
                        + 579.0 * m * m
                        + 776.0 * m
                        + 452.0)
                    / (2.0 * (3.0 * m + 5.0) * (m * m + m - 2.0).powi(2));
                Ok(asym(lead * n - constant, Form::AsymptoticWithCorrections))
            }
            FamilySpec::RingOfCliques { l, n } => {
                let (l, n) = (l as f64, n as f64);
                Ok(asym(
                    l / (l - 2.0) * n - ((l + 1.0) * (l + 1.0) - 5.0) / ((l - 2.0) * (l - 2.0)),
                    Form::AsymptoticWithCorrections,
                ))
            }
            FamilySpec::HierarchyOfCliques { q, n } => {
                let (qf, n) = (q as f64, n as f64);
                let lead_den = qf * qf * (2.0 * qf * qf + qf + 3.0) - 6.0 * qf - 4.0;
                let lead = qf * qf * (2.0 * qf * qf + qf + 1.0) / lead_den;
                let q = &big(q as i64);
                let cnum = poly1(
                    &[
                        12, 136, 619, 1226, 827, -523, -1105, -689, -307, -152, -60, -16,
                    ],
                    q,
                );
                let cden = (q + 1) * (q + 1) * poly1(&[3, 4], q) * {
                    let d = poly1(&[-4, -6, 3, 1, 2], q);
                    &d * &d
                };
                let constant = ratio_f64(&cnum, &cden);
                Ok(asym(lead * n + constant, Form::AsymptoticWithCorrections))
            }
            // Regime n_p -> infinity at fixed core size; spite scales with
            // total population N = n_c + n_p.
            FamilySpec::RichClub { n_c, n_p } => {
                if n_c == 1 {
                    return no_expansion("pole at n_c = 1 (the club degenerates to a star)");
                }
                let (c, total) = (n_c as f64, (n_c + n_p) as f64);
                Ok(asym(
                    -(2.0 * total / 3.0) * (2.0 * c - 1.0) / (c - 1.0)
                        + (8.0 * c + 39.0 + 20.0 / (c - 1.0)) / 18.0,
                    Form::AsymptoticWithCorrections,
                ))
            }
            FamilySpec::TwoRichClubs { n_c, n_p } => {
                let (c, p) = (n_c as f64, n_p as f64);
                Ok(asym(
                    4.0 * c - 1.5
                        + (4.0 * c * c - 47.0 * c / 4.0 - 0.25 / c - 45.0 / (3.0 * c + 2.0)
                            + 75.0 / 4.0)
                            / p,
                    Form::AsymptoticWithCorrections,
                ))
            }
            FamilySpec::TwoBipartite { n_x, n_y } => {
                let (x, y) = (n_x as f64, n_y as f64);
                if n_x == n_y {
                    // Equal sides, both growing.
                    Ok(asym(2.0 * x - 1.0 + 3.0 / x, Form::AsymptoticWithCorrections))
                } else {
                    // Regime n_x fixed, n_y -> infinity.
                    Ok(asym(
                        4.0 * x - 1.5
                            + (14.0 - 0.25 / x + x - 4.0 * x * x - 45.0 / (3.0 * x + 2.0)) / y,
                        Form::AsymptoticWithCorrections,
                    ))
                }
            }
        }
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.name())?;
        for (i, (key, value)) in self.params().into_iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{key}={value}")?;
        }
        Ok(())
    }
}

impl FromStr for FamilySpec {
    type Err = FamilyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parse_err = |reason: String| FamilyError::Parse {
            spec: s.to_string(),
            reason,
        };
        let (name, rest) = s
            .split_once(':')
            .ok_or_else(|| parse_err("expected `name:key=value,...`".to_string()))?;
        if !Self::NAMES.contains(&name) {
            return Err(FamilyError::UnknownName {
                name: name.to_string(),
            });
        }
        let mut pairs: Vec<(&str, usize)> = Vec::new();
        for item in rest.split(',') {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| parse_err(format!("expected `key=value`, got `{item}`")))?;
            if pairs.iter().any(|(k, _)| *k == key) {
                return Err(parse_err(format!("duplicate parameter `{key}`")));
            }
            let value: usize = value
                .parse()
                .map_err(|_| parse_err(format!("parameter `{key}` is not an integer: `{value}`")))?;
            pairs.push((key, value));
        }
        let mut take = |key: &str| -> Result<usize, FamilyError> {
            pairs
                .iter()
                .position(|(k, _)| *k == key)
                .map(|i| pairs.remove(i).1)
                .ok_or_else(|| parse_err(format!("missing parameter `{key}`")))
        };
        let spec = match name {
            "star" => FamilySpec::Star { n: take("n")? },
            "extended_star" => FamilySpec::ExtendedStar { n: take("n")? },
            "imperfect_extended_star" => FamilySpec::ImperfectExtendedStar {
                n: take("n")?,
                n_g: take("n_g")?,
            },
            "three_layer_extended_star" => FamilySpec::ThreeLayerExtendedStar { n: take("n")? },
            "star_of_stars" => FamilySpec::StarOfStars {
                n: take("n")?,
                n_d: take("n_d")?,
            },
            "imperfect_star_of_stars" => FamilySpec::ImperfectStarOfStars {
                n: take("n")?,
                n_g: take("n_g")?,
                n_d: take("n_d")?,
            },
            "two_stars_hub_hub" => FamilySpec::TwoStarsHubHub {
                n1: take("n1")?,
                n2: take("n2")?,
            },
            "two_stars_via_broker" => FamilySpec::TwoStarsViaBroker {
                n1: take("n1")?,
                n2: take("n2")?,
            },
            "ring_of_stars" => FamilySpec::RingOfStars {
                l: take("L")?,
                n: take("n")?,
            },
            "clique" => FamilySpec::Clique { n: take("n")? },
            "two_cliques_direct" => FamilySpec::TwoCliquesDirect { n: take("n")? },
            "two_cliques_brokers" => FamilySpec::TwoCliquesBrokers {
                n: take("n")?,
                l: take("L")?,
            },
            "star_of_cliques" => FamilySpec::StarOfCliques {
                m: take("m")?,
                n: take("n")?,
            },
            "two_cliques_via_star" => FamilySpec::TwoCliquesViaStar {
                n: take("n")?,
                m_star: take("m_star")?,
            },
            "ring_of_cliques" => FamilySpec::RingOfCliques {
                l: take("L")?,
                n: take("n")?,
            },
            "hierarchy_of_cliques" => FamilySpec::HierarchyOfCliques {
                q: take("q")?,
                n: take("n")?,
            },
            "rich_club" => FamilySpec::RichClub {
                n_c: take("n_c")?,
                n_p: take("n_p")?,
            },
            "two_rich_clubs" => FamilySpec::TwoRichClubs {
                n_c: take("n_c")?,
                n_p: take("n_p")?,
            },
            "complete_bipartite" => FamilySpec::CompleteBipartite {
                n_x: take("n_x")?,
                n_y: take("n_y")?,
            },
            "two_bipartite" => FamilySpec::TwoBipartite {
                n_x: take("n_x")?,
                n_y: take("n_y")?,
            },
            _ => unreachable!("name membership checked above"),
        };
        if let Some((key, _)) = pairs.first() {
            return Err(parse_err(format!("unexpected parameter `{key}`")));
        }
        spec.validate()?;
        Ok(spec)
    }
}

/// Specs for every family/parameter combination with an exact closed form,
/// all parameters in `lo..=hi` (clamped to each family's domain), and at
/// least three nodes (the solver's domain). This is the grid the numeric
/// engine is checked against.
pub fn closed_form_grid(lo: usize, hi: usize) -> Vec<FamilySpec> {
    let lo = lo.max(1);
    let range = || lo..=hi;
    let mut specs = Vec::new();
    for a in range() {
        specs.push(FamilySpec::Star { n: a });
        specs.push(FamilySpec::ExtendedStar { n: a });
        specs.push(FamilySpec::ThreeLayerExtendedStar { n: a });
        specs.push(FamilySpec::TwoStarsViaBroker { n1: a, n2: a });
        if a >= 3 {
            specs.push(FamilySpec::Clique { n: a });
        }
        if a >= 2 {
            specs.push(FamilySpec::TwoCliquesDirect { n: a });
            specs.push(FamilySpec::TwoCliquesBrokers { n: a, l: 1 });
        }
        for b in range() {
            specs.push(FamilySpec::TwoStarsHubHub { n1: a, n2: b });
            specs.push(FamilySpec::StarOfStars { n: a, n_d: b });
            specs.push(FamilySpec::CompleteBipartite { n_x: a, n_y: b });
            specs.push(FamilySpec::TwoBipartite { n_x: a, n_y: b });
            if b <= a {
                specs.push(FamilySpec::ImperfectExtendedStar { n: a, n_g: b });
            }
            if a >= 3 {
                specs.push(FamilySpec::RingOfStars { l: a, n: b });
            }
            if a >= 3 && b >= 2 {
                specs.push(FamilySpec::StarOfCliques { m: a, n: b });
            }
            if a >= 2 && b >= 2 {
                specs.push(FamilySpec::HierarchyOfCliques { q: a, n: b });
            }
            for g in lo..=a.min(hi) {
                specs.push(FamilySpec::ImperfectStarOfStars { n: a, n_g: g, n_d: b });
            }
        }
    }
    specs
}

fn push_clique(edges: &mut Vec<(usize, usize)>, base: usize, n: usize) {
    for a in 0..n {
        for b in (a + 1)..n {
            edges.push((base + a, base + b));
        }
    }
}

fn push_rich_club(edges: &mut Vec<(usize, usize)>, base: usize, n_c: usize, n_p: usize) {
    push_clique(edges, base, n_c);
    for p in 0..n_p {
        for a in 0..n_c {
            edges.push((base + n_c + p, base + a));
        }
    }
}

fn push_bipartite(edges: &mut Vec<(usize, usize)>, base: usize, n_x: usize, n_y: usize) {
    for x in 0..n_x {
        for y in 0..n_y {
            edges.push((base + x, base + n_x + y));
        }
    }
}

fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

/// Evaluates `sum_i coeffs[i] * x^i` (coefficients ascending).
fn poly1(coeffs: &[i64], x: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for &c in coeffs.iter().rev() {
        acc = acc * x + big(c);
    }
    acc
}

/// Evaluates `sum_i x^i * (sum_j rows[i][j] * y^j)` (both ascending).
fn poly2(rows: &[&[i64]], x: &BigInt, y: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for row in rows.iter().rev() {
        acc = acc * x + poly1(row, y);
    }
    acc
}

fn never() -> ClosedFormResult {
    ClosedFormResult {
        b_star: None,
        rational: None,
        classification: Classification::NeverFavored,
        form: Form::Exact,
    }
}

fn exact(alpha: BigInt, beta: BigInt) -> ClosedFormResult {
    if beta.is_zero() {
        return never();
    }
    let value = BigRational::new(alpha, beta);
    let classification = if value.is_negative() {
        Classification::SpitePromoter
    } else {
        Classification::Promoter
    };
    ClosedFormResult {
        b_star: value.to_f64(),
        rational: Some(value),
        classification,
        form: Form::Exact,
    }
}

fn asym(value: f64, form: Form) -> ClosedFormResult {
    let classification = if value < 0.0 {
        Classification::SpitePromoter
    } else {
        Classification::Promoter
    };
    ClosedFormResult {
        b_star: Some(value),
        rational: None,
        classification,
        form,
    }
}

fn ratio_f64(num: &BigInt, den: &BigInt) -> f64 {
    BigRational::new(num.clone(), den.clone())
        .to_f64()
        .expect("finite ratio")
}

/// Exact form for the imperfect star of stars, organized by powers of the
/// peripheral count `n`; each coefficient is a polynomial in the number of
/// carrying peripherals `g` whose coefficients are polynomials in the leaf
/// count `d`.
fn imperfect_star_of_stars_exact(n: usize, n_g: usize, n_d: usize) -> ClosedFormResult {
    let (n, g, d) = (&big(n as i64), &big(n_g as i64), &big(n_d as i64));
    let c = |coeffs: &[i64]| poly1(coeffs, d);
    let g2 = g * g;
    let g3 = &g2 * g;
    let g4 = &g3 * g;

    let alpha_n5 = c(&[54, 120, 82, 16]);
    let alpha_n4 = g * c(&[0, 252, 600, 460, 112]) + c(&[-12, 22, 92, 74, 16]);
    let alpha_n3 = &g2 * c(&[0, 0, 182, 390, 256, 48])
        + g * c(&[0, -77, -227, -256, -138, -32])
        + c(&[-38, -135, -171, -90, -16]);
    let alpha_n2 = &g3 * c(&[0, 0, 0, 34, 56, 22])
        + &g2 * c(&[0, 0, 28, 80, 80, 28])
        + g * c(&[0, -71, -217, -238, -108, -16])
        + c(&[-4, -7, -3]);
    let alpha_n1 = &g4 * c(&[0, 0, 0, 0, 2, 2])
        + &g3 * c(&[0, 0, 0, 5, 9, 4])
        + &g2 * c(&[0, 0, -9, -18, -11, -2])
        + g * c(&[0, -4, -7, -3]);
    let alpha = ((((alpha_n5 * n + alpha_n4) * n + alpha_n3) * n + alpha_n2) * n + alpha_n1) * n;

    let beta_n4 = g * c(&[0, 96, 296, 256, 64]);
    let beta_n3 = &g2 * c(&[0, 0, 28, 162, 148, 32]) + g * c(&[0, -8, -124, -226, -148, -32]);
    let beta_n2 = &g3 * c(&[0, 0, 0, -22, -6, 4])
        + &g2 * c(&[0, 0, 48, 108, 98, 28])
        + g * c(&[0, -72, -264, -342, -180, -32]);
    let beta_n1 = &g4 * c(&[0, 0, 0, 0, -2])
        + &g3 * c(&[0, 0, 0, -28, -42, -12])
        + &g2 * c(&[0, 0, 44, 96, 60, 12])
        + g * c(&[0, -16, -28, -12]);
    let beta_n0 = &g4 * c(&[0, 0, 0, 0, -4, -2]) + &g3 * c(&[0, 0, 0, 8, 12, 2]);
    let beta = (((beta_n4 * n + beta_n3) * n + beta_n2) * n + beta_n1) * n + beta_n0;

    exact(alpha, beta)
}

/// `a + b*sqrt(disc)` with integer parts; `disc` is fixed per computation.
#[derive(Clone)]
struct Surd {
    a: BigInt,
    b: BigInt,
}

impl Surd {
    fn new(a: BigInt, b: BigInt) -> Self {
        Surd { a, b }
    }

    fn mul(&self, other: &Surd, disc: &BigInt) -> Surd {
        Surd {
            a: &self.a * &other.a + &self.b * &other.b * disc,
            b: &self.a * &other.b + &self.b * &other.a,
        }
    }

    fn pow(&self, mut exp: usize, disc: &BigInt) -> Surd {
        let mut base = self.clone();
        let mut acc = Surd::new(big(1), big(0));
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base, disc);
            }
            base = base.mul(&base, disc);
            exp >>= 1;
        }
        acc
    }

    fn scale(&self, factor: &BigInt) -> Surd {
        Surd {
            a: factor * &self.a,
            b: factor * &self.b,
        }
    }

    fn add(&self, other: &Surd) -> Surd {
        Surd {
            a: &self.a + &other.a,
            b: &self.b + &other.b,
        }
    }
}

/// Exact ring-of-stars critical ratio.
///
/// The pair system's symmetry reduces it to expressions in
/// `R = n + 2 + sqrt((n+1)(n+3))`, the growth rate of meeting times around
/// the ring. The discriminant `(n+1)(n+3) = (n+2)^2 - 1` is never a perfect
/// square, yet the final ratio is rational: numerator and denominator are
/// proportional as surds, which this function checks before dividing.
fn ring_of_stars_exact(l: usize, n_leaves: usize) -> ClosedFormResult {
    let n = &big(n_leaves as i64);
    let disc = &((n + 1) * (n + 3));
    let r = Surd::new(n + 2, big(1));
    let r_l = r.pow(l, disc);
    let r_2l = r.pow(2 * l, disc);
    let lf = big(l as i64);

    // Shared conjugate-pair polynomials.
    let p_a = poly1(&[11, 9, 2], n); // 2n^2 + 9n + 11
    let p_b = poly1(&[22, 24, 9, 1], n); // n^3 + 9n^2 + 24n + 22
    let q_a = poly1(&[11, 20, 17, 7, 1], n); // n^4 + 7n^3 + 17n^2 + 20n + 11
    let q_b = poly1(&[44, 98, 94, 46, 11, 1], n); // n^5 + 11n^4 + 46n^3 + 94n^2 + 98n + 44

    let alpha_ring = Surd::new(-big(2) * poly1(&[13, 11, 2], n), big(0))
        .mul(&r_l, disc)
        .add(&Surd::new(p_a.clone(), n.clone()).mul(&r_2l, disc))
        .add(&Surd::new(p_a, -n.clone()));
    let alpha = alpha_ring
        .scale(&(&lf * (n + 1)))
        .add(&Surd::new(big(2) * poly1(&[26, 28, 9, 1], n), big(0)).mul(&r_l, disc))
        .add(
            &Surd::new(p_b.clone(), n.clone())
                .mul(&r_2l, disc)
                .scale(&big(-1)),
        )
        .add(&Surd::new(-p_b, n.clone()))
        .scale(&((n + 2) * (n + 2)));

    let beta_ring = Surd::new(-big(2) * poly1(&[13, 24, 19, 7, 1], n), big(0))
        .mul(&r_l, disc)
        .add(&Surd::new(q_a.clone(), n.clone()).mul(&r_2l, disc))
        .add(&Surd::new(q_a, -n.clone()));
    let beta = beta_ring
        .scale(&(&lf * (n + 1)))
        .add(
            &Surd::new(big(2) * (n + 2) * poly1(&[26, 44, 30, 9, 1], n), big(0)).mul(&r_l, disc),
        )
        .add(
            &Surd::new(q_b.clone(), n.clone())
                .mul(&r_2l, disc)
                .scale(&big(-1)),
        )
        .add(&Surd::new(-q_b, n.clone()))
        .scale(&big(2));

    // alpha/beta is rational iff the surd parts are proportional.
    assert_eq!(
        &alpha.a * &beta.b,
        &alpha.b * &beta.a,
        "ring-of-stars surd ratio must be rational"
    );
    if beta.a.is_zero() && beta.b.is_zero() {
        never()
    } else if beta.a.is_zero() {
        exact(alpha.b, beta.b)
    } else {
        exact(alpha.a, beta.a)
    }
}

// Coefficient tables. Layout convention: `X_NUM[i][j]` multiplies
// `first_param^i * second_param^j` in the order given by the `poly2` call
// site, with ascending powers in both directions.

/// Imperfect extended star, numerator: rows are powers of `n`, columns
/// powers of `n_g`.
const IES_NUM: [&[i64]; 6] = [
    &[0, 0, 0, 0, 0],
    &[0, -7, -20, 9, 2],
    &[-7, -325, 108, 56, 0],
    &[-225, -365, 438, 0, 0],
    &[96, 712, 0, 0, 0],
    &[136, 0, 0, 0, 0],
];

/// Imperfect extended star, denominator.
const IES_DEN: [&[i64]; 5] = [
    &[0, 0, 0, 11, -3],
    &[0, -28, 106, -41, -1],
    &[0, -445, 141, -12, 0],
    &[0, -269, 185, 0, 0],
    &[0, 356, 0, 0, 0],
];

/// Two stars joined hub to hub, numerator: rows are powers of `n1`, columns
/// powers of `n2`. The table is symmetric, as the family demands.
const TSHH_NUM: [&[i64]; 6] = [
    &[0, 50, 175, 227, 129, 27],
    &[50, 450, 1065, 1042, 437, 60],
    &[175, 1065, 2066, 1686, 551, 41],
    &[227, 1042, 1686, 1170, 307, 8],
    &[129, 437, 551, 307, 64, 0],
    &[27, 60, 41, 8, 0, 0],
];

/// Two stars joined hub to hub, denominator.
const TSHH_DEN: [&[i64]; 5] = [
    &[0, 0, 0, 0, 0],
    &[0, 100, 240, 188, 48],
    &[0, 240, 636, 544, 148],
    &[0, 188, 544, 480, 128],
    &[0, 48, 148, 128, 32],
];

/// Star of cliques, numerator: rows are powers of `m`, columns powers of `n`.
const SOC_NUM: [&[i64]; 3] = [
    &[0, 0, 2, -5, 4, -2, 2, -1, 0, 0],
    &[0, 0, 2, -9, 22, -22, 1, 3, -5, 0],
    &[0, 0, -8, 26, -31, 20, -9, 8, 0, 2],
];

/// Star of cliques, denominator.
const SOC_DEN: [&[i64]; 3] = [
    &[0, -4, 18, -36, 46, -42, 24, -6, 0],
    &[-8, 32, -74, 112, -99, 55, -25, 9, -4],
    &[8, -44, 88, -72, 13, 9, -4, 2, 2],
];

/// Hierarchy of cliques, numerator: rows are powers of the clique size `n`,
/// columns powers of the branching factor `q`.
const HIER_NUM: [&[i64]; 15] = [
    &[0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    &[0, 0, 0, -32, -80, 48, 192, 32, -112, -48],
    &[0, 0, 16, 224, 412, -532, -1268, 116, 1064, 416],
    &[0, 32, 12, -610, -930, 2026, 3558, -1488, -4272, -1592],
    &[0, -120, -168, 871, 982, -4400, -5652, 5289, 10158, 3680],
    &[4, 110, 154, -540, 410, 6546, 5245, -10821, -16333, -5815],
    &[-20, 93, 288, -86, -2494, -7219, -2896, 13858, 18330, 6562],
    &[40, -160, -572, 294, 3689, 6888, 995, -12290, -14872, -5452],
    &[-40, -57, 430, 188, -3357, -5751, 332, 8622, 9035, 3398],
    &[20, 170, -407, -911, 1702, 3253, -996, -4385, -3719, -1527],
    &[-4, -69, 328, 539, -695, -379, 2282, 2535, 1281, 566],
    &[0, -4, -197, -468, -713, -1400, -1666, -678, -144, -170],
    &[0, -3, 26, 160, 602, 1235, 1204, 518, 176, 98],
    &[0, 0, -6, -61, -230, -349, -184, -2, -28, -36],
    &[0, 0, 0, 0, 6, 26, 54, 70, 52, 16],
];

/// Hierarchy of cliques, denominator.
const HIER_DEN: [&[i64]; 14] = [
    &[0, 0, 0, 0, 0, 32, 80, 0, -80, -32],
    &[0, 0, 0, 0, -48, -248, -280, 400, 768, 272],
    &[0, 0, 0, -16, 184, 624, -200, -2612, -3124, -1032],
    &[0, 0, 32, 68, -360, -586, 2572, 7482, 7348, 2364],
    &[0, 0, -120, -62, 456, -462, -5714, -11956, -11046, -3648],
    &[0, 12, 72, -234, -84, 1501, 4335, 9459, 10319, 3892],
    &[0, -50, 266, 762, -684, -265, 4176, 872, -4844, -2833],
    &[0, 62, -460, -665, 1151, -2571, -12452, -10140, -981, 1264],
    &[0, 20, 184, -421, -1095, 4334, 13630, 11894, 3627, -117],
    &[0, -120, 96, 1260, 914, -3815, -9143, -7795, -2917, -216],
    &[0, 118, -92, -1190, -1310, 1128, 3660, 3406, 1464, 152],
    &[0, -50, -10, 311, 328, -207, -564, -562, -268, -2],
    &[0, 8, 22, 97, 272, 293, 136, 80, 24, -20],
    &[0, 0, -24, -116, -190, -98, 50, 86, 52, 16],
];

/// Two conjoined bipartite graphs, numerator core (the full numerator is
/// `n_x (n_y+1)^2` times this): rows are powers of `n_x`, columns powers of
/// `n_y`.
const TBIP_NUM: [&[i64]; 5] = [
    &[0, -12, -18, -2, 0, 0],
    &[12, -32, -161, -141, -18, 0],
    &[-12, 24, -24, -263, -235, -36],
    &[0, 126, 623, 945, 474, 42],
    &[0, -16, 76, 362, 414, 144],
];

/// Two conjoined bipartite graphs, denominator.
const TBIP_DEN: [&[i64]; 6] = [
    &[0, 8, 26, 24, 6, 0, 0, 0],
    &[4, 2, 39, 138, 127, 34, 0, 0],
    &[60, 56, -412, -848, -531, -89, 8, 0],
    &[-192, -538, -467, -240, -155, 20, 84, 24],
    &[128, 408, 632, 858, 870, 548, 204, 36],
    &[0, 64, 272, 456, 392, 180, 36, 0],
];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coalescence::{bstar_db, solve_coalescence, Method};

    fn spec(s: &str) -> FamilySpec {
        s.parse().unwrap()
    }

    fn rational(spec: FamilySpec) -> BigRational {
        spec.closed_form_bstar()
            .unwrap()
            .unwrap_or_else(|| panic!("{spec} has no closed form"))
            .rational
            .unwrap_or_else(|| panic!("{spec} is never favored"))
    }

    fn frac(num: i64, den: i64) -> BigRational {
        BigRational::new(big(num), big(den))
    }

    fn engine_bstar(spec: FamilySpec) -> f64 {
        let g = spec.generate().unwrap();
        let sol = solve_coalescence(&g, Method::auto(g.node_count())).unwrap();
        bstar_db(&sol, &g).b_star.expect("finite critical ratio")
    }

    #[test]
    fn display_and_parse_round_trip() {
        let samples = [
            "star:n=10",
            "extended_star:n=4",
            "imperfect_extended_star:n=5,n_g=2",
            "three_layer_extended_star:n=3",
            "star_of_stars:n=5,n_d=5",
            "imperfect_star_of_stars:n=15,n_g=5,n_d=10",
            "two_stars_hub_hub:n1=50,n2=50",
            "two_stars_via_broker:n1=50,n2=50",
            "ring_of_stars:L=5,n=20",
            "clique:n=5",
            "two_cliques_direct:n=4",
            "two_cliques_brokers:n=10,L=1",
            "star_of_cliques:m=4,n=10",
            "two_cliques_via_star:n=10,m_star=5",
            "ring_of_cliques:L=4,n=20",
            "hierarchy_of_cliques:q=3,n=5",
            "rich_club:n_c=2,n_p=3",
            "two_rich_clubs:n_c=5,n_p=50",
            "complete_bipartite:n_x=3,n_y=7",
            "two_bipartite:n_x=10,n_y=10",
        ];
        for s in samples {
            let parsed = spec(s);
            assert_eq!(parsed.to_string(), s);
            assert_eq!(spec(&parsed.to_string()), parsed);
        }
        // Parameter order is free on input.
        assert_eq!(
            spec("ring_of_stars:n=20,L=5"),
            FamilySpec::RingOfStars { l: 5, n: 20 }
        );
    }

    #[test]
    fn parse_rejects_malformed_specs() {
        for bad in [
            "not_a_family:n=3",
            "star",
            "star:n",
            "star:n=x",
            "star:n=3,n=4",
            "star:n=3,extra=1",
            "star:m=3",
            "star:n=0",
            "ring_of_stars:L=2,n=5",
            "imperfect_extended_star:n=3,n_g=4",
            "star_of_cliques:m=2,n=5",
            "clique:n=1",
            "hierarchy_of_cliques:q=1,n=5",
        ] {
            assert!(bad.parse::<FamilySpec>().is_err(), "{bad} should not parse");
        }
    }

    #[test]
    fn node_and_edge_counts() {
        let cases = [
            ("star:n=10", 11, 10),
            ("extended_star:n=4", 9, 8),
            ("imperfect_extended_star:n=5,n_g=2", 8, 7),
            ("three_layer_extended_star:n=3", 10, 9),
            ("star_of_stars:n=5,n_d=5", 31, 30),
            ("imperfect_star_of_stars:n=15,n_g=5,n_d=10", 66, 65),
            ("two_stars_hub_hub:n1=50,n2=50", 102, 101),
            ("two_stars_via_broker:n1=50,n2=50", 103, 102),
            ("ring_of_stars:L=5,n=20", 105, 105),
            ("clique:n=5", 5, 10),
            ("two_cliques_direct:n=4", 8, 13),
            ("two_cliques_brokers:n=10,L=2", 22, 93),
            ("star_of_cliques:m=4,n=10", 41, 184),
            ("two_cliques_via_star:n=10,m_star=5", 25, 96),
            ("ring_of_cliques:L=4,n=20", 80, 764),
            ("hierarchy_of_cliques:q=3,n=5", 49, 102),
            ("rich_club:n_c=2,n_p=3", 5, 7),
            ("two_rich_clubs:n_c=5,n_p=50", 110, 521),
            ("complete_bipartite:n_x=3,n_y=7", 10, 21),
            ("two_bipartite:n_x=10,n_y=10", 40, 201),
        ];
        for (s, nodes, edge_count) in cases {
            let g = spec(s).generate().unwrap();
            assert_eq!(g.node_count(), nodes, "{s} node count");
            assert_eq!(g.edge_count(), edge_count, "{s} edge count");
            assert!(g.is_connected(), "{s} must be connected");
        }
    }

    #[test]
    fn frozen_exact_values() {
        assert_eq!(rational(spec("clique:n=5")), frac(-4, 1));
        assert_eq!(rational(spec("extended_star:n=2")), frac(145, 46));
        // A single three-layer spoke is the four-node path.
        assert_eq!(rational(spec("three_layer_extended_star:n=1")), frac(4, 1));
        assert_eq!(
            rational(spec("three_layer_extended_star:n=2")),
            frac(1379, 516)
        );
        assert_eq!(
            rational(spec("two_stars_hub_hub:n1=50,n2=50")),
            frac(13_449_771, 5_305_550)
        );
        assert_eq!(rational(spec("two_stars_hub_hub:n1=1,n2=1")), frac(4, 1));
        assert_eq!(
            rational(spec("two_stars_via_broker:n1=50,n2=50")),
            frac(4_820_469, 1_611_800)
        );
        assert_eq!(rational(spec("star_of_stars:n=5,n_d=5")), frac(8013, 3460));
        assert_eq!(
            rational(spec("imperfect_star_of_stars:n=15,n_g=5,n_d=10")),
            frac(1_398_503_337, 728_052_085)
        );
        assert_eq!(
            rational(spec("ring_of_stars:L=5,n=20")),
            frac(136_213_814, 74_066_989)
        );
        assert_eq!(rational(spec("two_cliques_direct:n=2")), frac(4, 1));
        assert_eq!(rational(spec("two_cliques_direct:n=4")), frac(11_216, 709));
        assert_eq!(
            rational(spec("two_cliques_brokers:n=2,L=1")),
            frac(145, 46)
        );
        assert_eq!(
            rational(spec("star_of_cliques:m=4,n=10")),
            frac(325_742_950, 21_980_701)
        );
        assert_eq!(
            rational(spec("star_of_cliques:m=3,n=10")),
            frac(44_878_400, 2_400_437)
        );
        assert_eq!(
            rational(spec("hierarchy_of_cliques:q=3,n=5")),
            frac(3_890_438_049_476, 810_606_704_679)
        );
        assert_eq!(
            rational(spec("two_bipartite:n_x=2,n_y=3")),
            frac(3_499_536, 723_055)
        );
        assert_eq!(
            rational(spec("two_bipartite:n_x=10,n_y=10")),
            frac(3_001_073_230_100, 155_601_676_949)
        );
    }

    #[test]
    fn never_favored_families_and_degenerations() {
        for s in [
            "star:n=1",
            "star:n=2",
            "star:n=50",
            "complete_bipartite:n_x=3,n_y=7",
            "complete_bipartite:n_x=10,n_y=10",
            "clique:n=2",
            // An extended star with one spoke is a 3-path, i.e. a star.
            "extended_star:n=1",
            "imperfect_extended_star:n=1,n_g=1",
            // A star of stars with one sub-hub is a star around the sub-hub.
            "star_of_stars:n=1,n_d=5",
            "imperfect_star_of_stars:n=1,n_g=1,n_d=5",
        ] {
            let result = spec(s).closed_form_bstar().unwrap().unwrap();
            assert_eq!(
                result.classification,
                Classification::NeverFavored,
                "{s} should never favor cooperation"
            );
            assert!(result.b_star.is_none());
        }
    }

    #[test]
    fn coverage_gaps_return_none() {
        for s in [
            "two_stars_via_broker:n1=3,n2=5",
            "two_cliques_direct:n=1",
            "two_cliques_brokers:n=10,L=2",
            "two_cliques_brokers:n=1,L=1",
            "two_cliques_via_star:n=10,m_star=5",
            "ring_of_cliques:L=4,n=20",
            "rich_club:n_c=5,n_p=50",
            "two_rich_clubs:n_c=5,n_p=50",
        ] {
            assert!(
                spec(s).closed_form_bstar().unwrap().is_none(),
                "{s} should have no exact form"
            );
        }
    }

    #[test]
    fn families_reduce_to_each_other() {
        // All gates carrying tips recovers the perfect extended star.
        for n in 1..=8 {
            assert_eq!(
                spec(&format!("imperfect_extended_star:n={n},n_g={n}"))
                    .closed_form_bstar()
                    .unwrap()
                    .unwrap()
                    .rational,
                spec(&format!("extended_star:n={n}"))
                    .closed_form_bstar()
                    .unwrap()
                    .unwrap()
                    .rational,
            );
        }
        // All peripherals carrying leaves recovers the star of stars.
        for n in 2..=5 {
            for d in 2..=5 {
                assert_eq!(
                    rational(spec(&format!(
                        "imperfect_star_of_stars:n={n},n_g={n},n_d={d}"
                    ))),
                    rational(spec(&format!("star_of_stars:n={n},n_d={d}"))),
                );
            }
        }
        // One leaf per carrier makes the star of stars an imperfect
        // extended star.
        for n in 2..=6 {
            for g in 1..=n {
                assert_eq!(
                    spec(&format!("imperfect_star_of_stars:n={n},n_g={g},n_d=1"))
                        .closed_form_bstar()
                        .unwrap()
                        .unwrap()
                        .rational,
                    spec(&format!("imperfect_extended_star:n={n},n_g={g}"))
                        .closed_form_bstar()
                        .unwrap()
                        .unwrap()
                        .rational,
                );
            }
        }
        // Five-node path, three ways.
        let path5 = rational(spec("extended_star:n=2"));
        assert_eq!(rational(spec("two_stars_via_broker:n1=1,n2=1")), path5);
        assert_eq!(rational(spec("two_cliques_brokers:n=2,L=1")), path5);
    }

    #[test]
    fn closed_forms_match_engine_on_spot_grid() {
        let specs = [
            "extended_star:n=3",
            "imperfect_extended_star:n=4,n_g=2",
            "three_layer_extended_star:n=2",
            "three_layer_extended_star:n=3",
            "star_of_stars:n=3,n_d=4",
            "imperfect_star_of_stars:n=4,n_g=2,n_d=3",
            "two_stars_hub_hub:n1=3,n2=5",
            "two_stars_via_broker:n1=4,n2=4",
            "ring_of_stars:L=4,n=3",
            "clique:n=6",
            "two_cliques_direct:n=3",
            "two_cliques_brokers:n=3,L=1",
            "star_of_cliques:m=3,n=3",
            "hierarchy_of_cliques:q=2,n=3",
            "two_bipartite:n_x=3,n_y=4",
        ];
        for s in specs {
            let formula = rational(spec(s)).to_f64().unwrap();
            let engine = engine_bstar(spec(s));
            let rel = (formula - engine).abs() / formula.abs().max(1.0);
            assert!(
                rel < 1e-9,
                "{s}: formula {formula} vs engine {engine} (rel {rel:.2e})"
            );
        }
    }

    #[test]
    fn engine_confirms_numeric_only_families() {
        // Families without exact forms still have frozen reference values
        // from the direct solver.
        let cases = [
            ("two_cliques_via_star:n=10,m_star=5", 13.20587362344665),
            ("ring_of_cliques:L=4,n=20", 35.895290424333744),
            ("two_rich_clubs:n_c=5,n_p=50", 19.665580547322143),
        ];
        for (s, frozen) in cases {
            let engine = engine_bstar(spec(s));
            assert!(
                (engine - frozen).abs() / frozen < 1e-9,
                "{s}: engine {engine} vs frozen {frozen}"
            );
        }
        // A rich club hinders cooperation: spite regime.
        let g = spec("rich_club:n_c=3,n_p=12").generate().unwrap();
        let sol = solve_coalescence(&g, Method::auto(g.node_count())).unwrap();
        let report = bstar_db(&sol, &g);
        assert_eq!(report.classification, Classification::SpitePromoter);
        // Two rich clubs with a single-node core are two joined stars.
        let joined = engine_bstar(spec("two_rich_clubs:n_c=1,n_p=8"));
        let reference = rational(spec("two_stars_hub_hub:n1=8,n2=8"))
            .to_f64()
            .unwrap();
        assert!((joined - reference).abs() < 1e-9);
    }

    #[test]
    fn asymptotics_approach_closed_forms() {
        // (spec at n, spec at 2n); the expansion error must shrink.
        let pairs = [
            ("imperfect_extended_star:n=400,n_g=2", "imperfect_extended_star:n=800,n_g=2"),
            ("three_layer_extended_star:n=100", "three_layer_extended_star:n=200"),
            ("star_of_stars:n=5,n_d=200", "star_of_stars:n=5,n_d=400"),
            ("two_stars_hub_hub:n1=100,n2=200", "two_stars_hub_hub:n1=200,n2=400"),
            ("two_stars_via_broker:n1=100,n2=100", "two_stars_via_broker:n1=200,n2=200"),
            ("ring_of_stars:L=5,n=100", "ring_of_stars:L=5,n=200"),
            ("two_cliques_direct:n=50", "two_cliques_direct:n=100"),
            ("two_cliques_brokers:n=50,L=1", "two_cliques_brokers:n=100,L=1"),
            ("star_of_cliques:m=5,n=100", "star_of_cliques:m=5,n=200"),
            ("hierarchy_of_cliques:q=3,n=100", "hierarchy_of_cliques:q=3,n=200"),
            ("two_bipartite:n_x=100,n_y=100", "two_bipartite:n_x=200,n_y=200"),
            ("two_bipartite:n_x=3,n_y=300", "two_bipartite:n_x=3,n_y=600"),
        ];
        for (small, large) in pairs {
            let rel = |s: &str| {
                let sp = spec(s);
                let exact_value = rational(sp).to_f64().unwrap();
                let approx = sp.asymptotic_bstar().unwrap().b_star.unwrap();
                ((approx - exact_value) / exact_value).abs()
            };
            let (err_small, err_large) = (rel(small), rel(large));
            assert!(
                err_large < err_small && err_small < 1e-2,
                "{small} -> {large}: {err_small:.2e} -> {err_large:.2e}"
            );
        }
    }

    #[test]
    fn asymptotic_values_match_verified_points() {
        let close = |s: &str, expect: f64, tol: f64| {
            let got = spec(s).asymptotic_bstar().unwrap().b_star.unwrap();
            assert!((got - expect).abs() < tol, "{s}: {got} vs {expect}");
        };
        close("extended_star:n=100", 28.0 / 11.0, 1e-12);
        // Identical stars: 5/2 + 7/(4 n).
        close("two_stars_hub_hub:n1=100,n2=100", 2.5 + 7.0 / 400.0, 1e-12);
        // Identical stars via broker: 3 - 1/(2 n).
        close(
            "two_stars_via_broker:n1=100,n2=100",
            3.0 - 1.0 / 200.0,
            1e-12,
        );
        // Ring limit at L = 100, n = 1e4 reproduces the exact value to
        // nine digits.
        let exact_value = rational(spec("ring_of_stars:L=100,n=10000"))
            .to_f64()
            .unwrap();
        close("ring_of_stars:L=100,n=10000", exact_value, 1e-8);
        // Two cliques via a star of two is a bridging broker with one leaf.
        close(
            "two_cliques_via_star:n=120,m_star=2",
            9.0 * 120.0 / 2.0 - 51.0,
            1e-9,
        );
    }

    #[test]
    fn asymptotic_poles_and_gaps_are_errors() {
        for s in [
            "star:n=5",
            "complete_bipartite:n_x=3,n_y=4",
            "clique:n=5",
            "star_of_stars:n=1,n_d=5",
            "imperfect_star_of_stars:n=5,n_g=1,n_d=5",
            "two_cliques_via_star:n=10,m_star=1",
            "rich_club:n_c=1,n_p=10",
        ] {
            assert!(
                matches!(
                    spec(s).asymptotic_bstar(),
                    Err(FamilyError::NoExpansion { .. })
                ),
                "{s} should have no expansion"
            );
        }
    }

    #[test]
    fn spite_families_classify_negative() {
        let clique = spec("clique:n=8").closed_form_bstar().unwrap().unwrap();
        assert_eq!(clique.classification, Classification::SpitePromoter);
        assert_eq!(clique.b_star, Some(-7.0));
        let club = spec("rich_club:n_c=4,n_p=40").asymptotic_bstar().unwrap();
        assert_eq!(club.classification, Classification::SpitePromoter);
        assert!(club.b_star.unwrap() < -1.0);
    }

    #[test]
    fn grid_enumerates_valid_specs_with_closed_forms() {
        let grid = closed_form_grid(2, 4);
        assert!(grid.len() > 50);
        for spec in &grid {
            spec.validate().unwrap();
            assert!(
                spec.closed_form_bstar().unwrap().is_some(),
                "{spec} should have a closed form"
            );
        }
        // No duplicates.
        let mut seen: Vec<String> = grid.iter().map(|s| s.to_string()).collect();
        seen.sort();
        let before = seen.len();
        seen.dedup();
        assert_eq!(before, seen.len());
    }
}
