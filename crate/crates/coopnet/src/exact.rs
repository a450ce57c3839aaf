//! Exact rational solution of the pair system and exact `b*` classification.
//!
//! The scaled pair system has integer coefficients and a nonzero integer
//! determinant, so meeting times are rationals. They are recovered without
//! rounding by p-adic lifting: factor the matrix once modulo a word-sized
//! prime, lift the solution digit by digit (Dixon's algorithm), and recover
//! each rational entry by the half-extended Euclidean algorithm once enough
//! digits are known. A candidate solution is accepted only after an exact
//! residual check, so an early reconstruction can never return a wrong
//! answer; a Hadamard bound caps the number of digits that can ever be
//! needed.
//!
//! The point of the exact path is the zero test: denominators that vanish
//! analytically (stars, complete bipartite graphs, cliques under imitation)
//! are classified by an exact integer comparison instead of a float
//! tolerance.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::coalescence::{
    pair_index, scaled_row, validate, BStarReport, Classification, SolveError, Updating,
};
use crate::graph::Graph;

/// Node cap for the exact solver: C(60,2) = 1770 unknowns keeps the modular
/// factorization and the big-integer reconstruction in the seconds range.
pub const EXACT_MAX_NODES: usize = 60;

/// Lifting primes, largest first; the leading Mersenne prime gets a branch-
/// free reduction. The rest are fallbacks for the (measure-zero) case of a
/// determinant divisible by the current prime.
const PRIMES: [u64; 5] = [
    2_147_483_647,
    2_147_483_629,
    2_147_483_587,
    2_147_483_579,
    2_147_483_563,
];

const M31: u64 = (1 << 31) - 1;

#[derive(Clone, Copy)]
struct Mod {
    p: u64,
}

impl Mod {
    #[inline]
    fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    fn mul(self, a: u64, b: u64) -> u64 {
        if self.p == M31 {
            // Operands are < 2^31, so the product fits u64 and two folds of
            // the high bits (2^31 = 1 mod p) reduce it below 2^31.
            let x = a * b;
            let folded = (x >> 31) + (x & M31);
            let folded = (folded >> 31) + (folded & M31);
            if folded >= M31 {
                folded - M31
            } else {
                folded
            }
        } else {
            ((a as u128 * b as u128) % self.p as u128) as u64
        }
    }

    fn inv(self, a: u64) -> u64 {
        let (mut t, mut new_t) = (0i64, 1i64);
        let (mut r, mut new_r) = (self.p as i64, a as i64);
        while new_r != 0 {
            let q = r / new_r;
            (t, new_t) = (new_t, t - q * new_t);
            (r, new_r) = (new_r, r - q * new_r);
        }
        debug_assert_eq!(r, 1, "inverse of a multiple of the prime");
        t.rem_euclid(self.p as i64) as u64
    }

    #[inline]
    fn from_i64(self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }
}

/// The integer-scaled pair system in sparse row form.
struct PairSystem {
    size: usize,
    rows: Vec<Vec<(u32, i64)>>,
    rhs: Vec<i64>,
}

fn assemble(g: &Graph, updating: Updating) -> PairSystem {
    let n = g.node_count();
    let size = n * (n - 1) / 2;
    let mut rows = Vec::with_capacity(size);
    let mut rhs = vec![0i64; size];
    for x in 0..n {
        for y in (x + 1)..n {
            let idx = pair_index(n, x, y);
            let mut row: Vec<(u32, i64)> = Vec::with_capacity(g.degree(x) + g.degree(y));
            let (diag, b) = scaled_row(g, updating, x, y, |u, v, coeff| {
                row.push((pair_index(n, u, v) as u32, coeff));
            });
            row.push((idx as u32, diag));
            rhs[idx] = b;
            rows.push(row);
        }
    }
    PairSystem { size, rows, rhs }
}

/// LU factors of the system modulo one prime, with the row swaps taken.
struct LuModP {
    m: Mod,
    size: usize,
    lu: Vec<u64>,
    diag_inv: Vec<u64>,
    swaps: Vec<(u32, u32)>,
}

fn factor(sys: &PairSystem, m: Mod) -> Option<LuModP> {
    let nn = sys.size;
    let mut a = vec![0u64; nn * nn];
    for (i, row) in sys.rows.iter().enumerate() {
        for &(j, c) in row {
            a[i * nn + j as usize] = m.from_i64(c);
        }
    }
    let mut diag_inv = vec![0u64; nn];
    let mut swaps = Vec::new();
    for k in 0..nn {
        let pivot = (k..nn).find(|&r| a[r * nn + k] != 0)?;
        if pivot != k {
            swaps.push((k as u32, pivot as u32));
            for j in 0..nn {
                a.swap(k * nn + j, pivot * nn + j);
            }
        }
        let inv = m.inv(a[k * nn + k]);
        diag_inv[k] = inv;
        let (top, bottom) = a.split_at_mut((k + 1) * nn);
        let row_k = &top[k * nn + k + 1..(k + 1) * nn];
        for i in 0..(nn - k - 1) {
            let base = i * nn;
            let factor = m.mul(bottom[base + k], inv);
            bottom[base + k] = factor;
            if factor == 0 {
                continue;
            }
            let row_i = &mut bottom[base + k + 1..base + nn];
            for (aij, &akj) in row_i.iter_mut().zip(row_k) {
                *aij = m.sub(*aij, m.mul(factor, akj));
            }
        }
    }
    Some(LuModP {
        m,
        size: nn,
        lu: a,
        diag_inv,
        swaps,
    })
}

impl LuModP {
    fn solve(&self, b: &mut [u64]) {
        let (nn, m, p) = (self.size, self.m, self.m.p as u128);
        for &(i, j) in &self.swaps {
            b.swap(i as usize, j as usize);
        }
        for i in 1..nn {
            let mut acc = 0u128;
            for (k, &l) in self.lu[i * nn..i * nn + i].iter().enumerate() {
                acc += l as u128 * b[k] as u128;
            }
            b[i] = m.sub(b[i], (acc % p) as u64);
        }
        for i in (0..nn).rev() {
            let mut acc = 0u128;
            for (off, &u) in self.lu[i * nn + i + 1..(i + 1) * nn].iter().enumerate() {
                acc += u as u128 * b[i + 1 + off] as u128;
            }
            let v = m.sub(b[i], (acc % p) as u64);
            b[i] = m.mul(v, self.diag_inv[i]);
        }
    }
}

/// Digits that surely suffice: p^k must exceed twice the product of the
/// Hadamard bounds on the solution's numerators and common denominator.
fn digit_cap(sys: &PairSystem, p: u64) -> usize {
    let log2_det: f64 = sys
        .rows
        .iter()
        .map(|row| {
            let sq: f64 = row.iter().map(|&(_, c)| (c as f64) * (c as f64)).sum();
            0.5 * sq.log2()
        })
        .sum();
    let sq_b: f64 = sys.rhs.iter().map(|&v| (v as f64) * (v as f64)).sum();
    let bits = 2.0 * log2_det + 0.5 * sq_b.log2() + 8.0;
    ((bits / (p as f64).log2()).ceil() as usize + 2).max(8)
}

/// Textbook rational reconstruction: the unique `num/den` with
/// `|num|, den <= bound` congruent to `v` modulo `modulus`, if one exists.
fn rational_reconstruct(v: &BigInt, modulus: &BigInt, bound: &BigInt) -> Option<BigRational> {
    let (mut r0, mut r1) = (modulus.clone(), v.clone());
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::from(1));
    while &r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        (r0, r1) = (r1, r2);
        (t0, t1) = (t1, t2);
    }
    if t1.is_zero() || t1.abs() > *bound {
        return None;
    }
    if t1.is_negative() {
        Some(BigRational::new(-r1, -t1))
    } else {
        Some(BigRational::new(r1, t1))
    }
}

fn try_reconstruct(sys: &PairSystem, digits: &[Vec<u64>], p: u64) -> Option<Vec<BigRational>> {
    let k = digits.len();
    let modulus = num_traits::pow(BigInt::from(p), k);
    let bound = (&modulus >> 1u8).sqrt();
    let mut out = Vec::with_capacity(sys.size);
    for comp in 0..sys.size {
        let mut v = BigInt::zero();
        for step in (0..k).rev() {
            v = v * p + digits[step][comp];
        }
        out.push(rational_reconstruct(&v, &modulus, &bound)?);
    }
    verify_exact(sys, &out).then_some(out)
}

/// Exact residual check `A x = b` over the rationals.
fn verify_exact(sys: &PairSystem, xs: &[BigRational]) -> bool {
    for (i, row) in sys.rows.iter().enumerate() {
        let mut acc = BigRational::zero();
        for &(j, c) in row {
            acc += &xs[j as usize] * BigRational::from_integer(c.into());
        }
        if acc != BigRational::from_integer(sys.rhs[i].into()) {
            return false;
        }
    }
    true
}

fn lift_with_prime(sys: &PairSystem, m: Mod) -> Option<Vec<BigRational>> {
    let lu = factor(sys, m)?;
    let cap = digit_cap(sys, m.p);
    let mut residual: Vec<i64> = sys.rhs.clone();
    let mut digits: Vec<Vec<u64>> = Vec::new();
    let mut next_check = 8usize;
    loop {
        let mut x: Vec<u64> = residual.iter().map(|&v| m.from_i64(v)).collect();
        lu.solve(&mut x);
        for (i, row) in sys.rows.iter().enumerate() {
            let mut acc = residual[i] as i128;
            for &(j, c) in row {
                acc -= c as i128 * x[j as usize] as i128;
            }
            debug_assert_eq!(acc.rem_euclid(m.p as i128), 0);
            residual[i] = (acc / m.p as i128) as i64;
        }
        digits.push(x);
        let settled = residual.iter().all(|&v| v == 0);
        if digits.len() >= next_check || digits.len() >= cap || settled {
            if let Some(xs) = try_reconstruct(sys, &digits, m.p) {
                return Some(xs);
            }
            if digits.len() >= cap {
                return None;
            }
            next_check = digits.len() * 2;
        }
    }
}

fn solve_rational(sys: &PairSystem) -> Result<Vec<BigRational>, SolveError> {
    for &p in &PRIMES {
        if let Some(xs) = lift_with_prime(sys, Mod { p }) {
            return Ok(xs);
        }
    }
    Err(SolveError::Factorization(
        "pair system singular modulo every configured prime".into(),
    ))
}

/// Exact counterpart of `CoalescenceSolution`.
pub struct ExactSolution {
    /// Update rule the solution was computed for.
    pub updating: Updating,
    n: usize,
    data: Vec<BigRational>,
    /// Exact two-step return probabilities `p_x`.
    pub p: Vec<BigRational>,
    /// Exact remeeting times `tau_x`.
    pub tau_node: Vec<BigRational>,
}

impl ExactSolution {
    /// Number of nodes.
    pub fn node_count(&self) -> usize {
        self.n
    }

    /// Exact meeting time of the pair `{x, y}`; zero when `x == y`.
    pub fn tau(&self, x: usize, y: usize) -> BigRational {
        if x == y {
            BigRational::zero()
        } else {
            self.data[pair_index(self.n, x.min(y), x.max(y))].clone()
        }
    }
}

/// Solves the meeting-time system exactly over the rationals.
pub fn solve_coalescence_exact(
    g: &Graph,
    updating: Updating,
) -> Result<ExactSolution, SolveError> {
    validate(g)?;
    let n = g.node_count();
    if n > EXACT_MAX_NODES {
        return Err(SolveError::TooLargeForExact {
            n,
            max: EXACT_MAX_NODES,
        });
    }
    let sys = assemble(g, updating);
    let data = solve_rational(&sys)?;
    let p = (0..n)
        .map(|x| {
            let s: BigRational = g
                .neighbors(x)
                .iter()
                .map(|&y| BigRational::new(1.into(), (g.degree(y as usize) as i64).into()))
                .sum();
            s / BigRational::from_integer((g.degree(x) as i64).into())
        })
        .collect();
    let tau_node = (0..n)
        .map(|x| {
            let s: BigRational = g
                .neighbors(x)
                .iter()
                .map(|&y| data[pair_index(n, x.min(y as usize), x.max(y as usize))].clone())
                .sum();
            BigRational::from_integer(1.into())
                + s / BigRational::from_integer((updating.weight_count(g.degree(x)) as i64).into())
        })
        .collect();
    Ok(ExactSolution {
        updating,
        n,
        data,
        p,
        tau_node,
    })
}

/// Exact counterpart of `BStarReport`: the ratio's parts as rationals and a
/// classification backed by an exact zero test.
pub struct ExactBStar {
    pub numerator: BigRational,
    pub denominator: BigRational,
    pub classification: Classification,
    pub updating: Updating,
}

impl ExactBStar {
    /// Exact critical ratio; absent when the denominator is exactly zero.
    pub fn b_star(&self) -> Option<BigRational> {
        (!self.denominator.is_zero()).then(|| &self.numerator / &self.denominator)
    }

    /// Float report with the same field layout as the inexact engines.
    pub fn to_report(&self, g: &Graph) -> BStarReport {
        let (b_star, inv) = match self.b_star() {
            Some(b) => (
                Some(b.to_f64().unwrap()),
                (&self.denominator / &self.numerator).to_f64().unwrap(),
            ),
            None => (None, 0.0),
        };
        BStarReport {
            n: g.node_count(),
            mean_degree: g.mean_degree(),
            numerator: self.numerator.to_f64().unwrap(),
            denominator: self.denominator.to_f64().unwrap(),
            b_star,
            inv_b_star: inv,
            classification: self.classification,
            updating: self.updating,
            method: "exact".into(),
            residual: 0.0,
        }
    }
}

fn classify_exact(denominator: &BigRational) -> Classification {
    if denominator.is_zero() {
        Classification::NeverFavored
    } else if denominator.is_positive() {
        Classification::Promoter
    } else {
        Classification::SpitePromoter
    }
}

/// Exact critical benefit-to-cost ratio under death-birth updating.
pub fn bstar_db_exact(g: &Graph) -> Result<ExactBStar, SolveError> {
    let sol = solve_coalescence_exact(g, Updating::DeathBirth)?;
    let two_n_kbar = BigRational::from_integer((4 * g.edge_count() as i64).into());
    let mut sum_ktau = BigRational::zero();
    let mut sum_ktaup = BigRational::zero();
    for x in 0..g.node_count() {
        let k = BigRational::from_integer((g.degree(x) as i64).into());
        let weighted = &k * &sol.tau_node[x];
        sum_ktaup += &weighted * &sol.p[x];
        sum_ktau += weighted;
    }
    let numerator = sum_ktau - &two_n_kbar;
    let denominator = sum_ktaup - two_n_kbar;
    Ok(ExactBStar {
        classification: classify_exact(&denominator),
        numerator,
        denominator,
        updating: Updating::DeathBirth,
    })
}

/// Exact critical benefit-to-cost ratio under imitation updating.
pub fn bstar_im_exact(g: &Graph) -> Result<ExactBStar, SolveError> {
    let sol = solve_coalescence_exact(g, Updating::Imitation)?;
    let n = g.node_count();
    let inv_weight: Vec<BigRational> = (0..n)
        .map(|y| BigRational::new(1.into(), (g.degree(y) as i64 + 1).into()))
        .collect();
    let mut numerator = BigRational::zero();
    let mut den_interact = BigRational::zero();
    let mut den_replace = BigRational::zero();
    for x in 0..n {
        let row: Vec<BigRational> = (0..n).map(|z| sol.tau(x, z)).collect();
        // Interaction average at z: mean of tau_xw over the neighbors of z.
        let interact: Vec<BigRational> = (0..n)
            .map(|z| {
                let s: BigRational = g.neighbors(z).iter().map(|&w| row[w as usize].clone()).sum();
                s / BigRational::from_integer((g.degree(z) as i64).into())
            })
            .collect();
        let closed = |v: usize| std::iter::once(v).chain(g.neighbors(v).iter().map(|&u| u as usize));
        for y in closed(x) {
            let mut tau_sum = BigRational::zero();
            let mut interact_sum = BigRational::zero();
            for z in closed(y) {
                tau_sum += &row[z];
                interact_sum += &interact[z];
            }
            numerator += &inv_weight[y] * tau_sum;
            den_interact += &inv_weight[y] * interact_sum;
        }
        for &y in g.neighbors(x) {
            den_replace += &row[y as usize];
        }
    }
    let denominator = den_interact - den_replace;
    Ok(ExactBStar {
        classification: classify_exact(&denominator),
        numerator,
        denominator,
        updating: Updating::Imitation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coalescence::{bstar_db, bstar_im, solve_coalescence, Method};
    use crate::reference;
    use crate::testutil::{complete_graph, path_graph, star_graph, two_stars_hub_hub};
    use rand::{Rng, SeedableRng};

    fn big(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn lifting_primes_are_prime() {
        for &p in &PRIMES {
            assert!((2..).take_while(|d| d * d <= p).all(|d| p % d != 0));
        }
    }

    #[test]
    fn mersenne_product_matches_wide_arithmetic() {
        let m = Mod { p: M31 };
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10_000 {
            let a = rng.gen_range(0..M31);
            let b = rng.gen_range(0..M31);
            assert_eq!(m.mul(a, b), ((a as u128 * b as u128) % M31 as u128) as u64);
        }
        assert_eq!(m.mul(M31 - 1, M31 - 1), 1);
        assert_eq!(m.mul(M31 - 1, 0), 0);
    }

    #[test]
    fn modular_inverse_round_trips() {
        for &p in &PRIMES {
            let m = Mod { p };
            for a in [1u64, 2, 3, 12_345, p - 2, p - 1] {
                assert_eq!(m.mul(a, m.inv(a)), 1);
            }
        }
    }

    #[test]
    fn star_meeting_times_are_exact_rationals() {
        for n in [3usize, 4, 7] {
            let sol = solve_coalescence_exact(&star_graph(n), Updating::DeathBirth).unwrap();
            let denom = n as i64 + 1;
            let hub_leaf = big(3 * denom - 4, denom);
            let leaf_leaf = big(4 * denom - 4, denom);
            for l in 1..=n {
                assert_eq!(sol.tau(0, l), hub_leaf);
                for k in (l + 1)..=n {
                    assert_eq!(sol.tau(l, k), leaf_leaf);
                }
            }
            for x in 0..=n {
                assert_eq!(sol.tau_node[x], big(4 * n as i64, denom));
            }
        }
    }

    #[test]
    fn star_denominator_is_exactly_zero() {
        for n in [3usize, 4, 10] {
            let exact = bstar_db_exact(&star_graph(n)).unwrap();
            assert!(exact.denominator.is_zero());
            assert_eq!(exact.classification, Classification::NeverFavored);
            assert!(exact.b_star().is_none());
        }
    }

    #[test]
    fn clique_values_are_exact() {
        for n in 3..=8 {
            let g = complete_graph(n);
            let sol = solve_coalescence_exact(&g, Updating::DeathBirth).unwrap();
            for x in 0..n {
                for y in (x + 1)..n {
                    assert_eq!(sol.tau(x, y), big(n as i64 - 1, 1));
                }
            }
            let exact = bstar_db_exact(&g).unwrap();
            assert_eq!(exact.b_star().unwrap(), big(-(n as i64 - 1), 1));
        }
    }

    #[test]
    fn imitation_clique_denominator_is_exactly_zero() {
        for n in 3..=5 {
            let exact = bstar_im_exact(&complete_graph(n)).unwrap();
            assert!(exact.denominator.is_zero());
            assert_eq!(exact.classification, Classification::NeverFavored);
        }
    }

    #[test]
    fn imitation_star_ratio_is_exact() {
        let exact = bstar_im_exact(&star_graph(4)).unwrap();
        assert_eq!(exact.b_star().unwrap(), big(1448, 387));
    }

    #[test]
    fn path_of_four_ratio_is_exactly_four() {
        let exact = bstar_db_exact(&path_graph(4)).unwrap();
        assert_eq!(exact.b_star().unwrap(), big(4, 1));
    }

    #[test]
    fn bridged_stars_match_hand_closed_form() {
        let exact = bstar_db_exact(&two_stars_hub_hub(3, 3)).unwrap();
        assert_eq!(exact.b_star().unwrap(), big(1168, 381));
    }

    #[test]
    fn exact_reports_match_float_engine_on_sampled_graphs() {
        let graphs = reference::connected_graphs(5);
        for g in graphs.iter().step_by(7) {
            let float_db = bstar_db(&solve_coalescence(g, Method::Direct).unwrap(), g);
            let exact_db = bstar_db_exact(g).unwrap().to_report(g);
            assert_eq!(float_db.classification, exact_db.classification);
            if let (Some(a), Some(b)) = (float_db.b_star, exact_db.b_star) {
                assert!((a - b).abs() <= 1e-12 * b.abs().max(1.0));
            }
            let float_im = bstar_im(g).unwrap();
            let exact_im = bstar_im_exact(g).unwrap().to_report(g);
            assert_eq!(float_im.classification, exact_im.classification);
            if let (Some(a), Some(b)) = (float_im.b_star, exact_im.b_star) {
                assert!((a - b).abs() <= 1e-12 * b.abs().max(1.0));
            }
        }
    }

    #[test]
    fn random_dense_graph_survives_exact_verification() {
        // A denser instance exercises multi-digit lifting and reconstruction.
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let n = 12;
        let mut edges = Vec::new();
        for x in 0..n {
            for y in (x + 1)..n {
                if rng.gen_bool(0.5) {
                    edges.push((x, y));
                }
            }
        }
        let g = Graph::from_edges(n, &edges).unwrap();
        assert!(g.is_connected());
        let exact = bstar_db_exact(&g).unwrap().to_report(&g);
        let float = bstar_db(&solve_coalescence(&g, Method::Direct).unwrap(), &g);
        assert!((exact.b_star.unwrap() - float.b_star.unwrap()).abs() <= 1e-9);
    }
}
