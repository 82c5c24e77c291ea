//! Exact maximum average degree.
//!
//! `mad(G)` is the maximum of `2|E(H)|/|V(H)|` over nonempty subgraphs `H`;
//! it is always attained on an induced subgraph, so only vertex subsets are
//! searched. Everything here is exact rational arithmetic.
//!
//! The exact value comes from a Dinkelbach-style parametric search: starting
//! from the density of the whole graph, a maximum-closure (min-cut) problem
//! either certifies that no subgraph beats the current candidate or returns a
//! strictly denser vertex set, whose density becomes the next candidate.
//! Every candidate is a rational with denominator at most `n`, and the
//! sequence strictly increases, so the search terminates.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::flow::Dinic;
use crate::graph::Graph;

/// A nonnegative rational in lowest terms, used for average-degree values.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Density(Ratio<i64>);

impl Density {
    pub fn new(numer: i64, denom: i64) -> Self {
        Density(Ratio::new(numer, denom))
    }

    pub fn from_ratio(r: Ratio<i64>) -> Self {
        Density(r)
    }

    pub fn integer(v: i64) -> Self {
        Density(Ratio::from_integer(v))
    }

    pub fn numer(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }

    pub fn ratio(&self) -> Ratio<i64> {
        self.0
    }

    /// `8k/(3k+1)`, the threshold for (I,O_k)-partitions with `k ≥ 2`.
    pub fn thm2_threshold(k: usize) -> Self {
        Density::new(8 * k as i64, 3 * k as i64 + 1)
    }
}

impl fmt::Display for Density {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("invalid rational `{0}`")]
pub struct ParseDensityError(String);

impl FromStr for Density {
    type Err = ParseDensityError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ParseDensityError(s.to_string());
        let (p, q) = match s.trim().split_once('/') {
            Some((p, q)) => (p.trim(), q.trim()),
            None => (s.trim(), "1"),
        };
        let p: i64 = p.parse().map_err(|_| bad())?;
        let q: i64 = q.parse().map_err(|_| bad())?;
        if q <= 0 || p < 0 {
            return Err(bad());
        }
        Ok(Density::new(p, q))
    }
}

impl Serialize for Density {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Density {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MadError {
    #[error("maximum average degree of the empty graph is undefined")]
    EmptyGraph,
    #[error("graph with {n} vertices exceeds the brute-force limit of {limit}")]
    TooLarge { n: usize, limit: usize },
}

/// Largest vertex count accepted by [`mad_bruteforce`].
pub const BRUTEFORCE_LIMIT: usize = 20;

/// Maximum over vertex sets `H` (including the empty set) of
/// `a·|E(G[H])| − b·|H|`, with a set attaining it. Solved as a maximum
/// closure: source → edge node (cap `a`), edge node → endpoints (∞),
/// vertex → sink (cap `b`).
fn closure(g: &Graph, a: i64, b: i64) -> (i64, Vec<usize>) {
    let edges = g.edges();
    let m = edges.len();
    let n = g.n();
    let s = 0;
    let t = m + n + 1;
    let inf = a.saturating_mul(m as i64 + 1).max(1);
    let mut net = Dinic::new(m + n + 2);
    for (i, &(u, v)) in edges.iter().enumerate() {
        net.add_edge(s, 1 + i, a);
        net.add_edge(1 + i, 1 + m + u, inf);
        net.add_edge(1 + i, 1 + m + v, inf);
    }
    for v in 0..n {
        net.add_edge(1 + m + v, t, b);
    }
    let flow = net.max_flow(s, t);
    let side = net.source_side(s);
    let set: Vec<usize> = (0..n).filter(|&v| side[1 + m + v]).collect();
    (a * m as i64 - flow, set)
}

/// Exact `mad(G)` with a vertex set attaining it.
pub fn mad_exact(g: &Graph) -> Result<(Density, Vec<usize>), MadError> {
    if g.is_empty() {
        return Err(MadError::EmptyGraph);
    }
    if g.m() == 0 {
        return Ok((Density::integer(0), vec![0]));
    }
    let mut best: Vec<usize> = (0..g.n()).collect();
    let mut edges = g.m() as i64;
    loop {
        let size = best.len() as i64;
        let (gain, set) = closure(g, size, edges);
        if gain == 0 {
            break;
        }
        debug_assert!(!set.is_empty());
        edges = g.induced_edge_count(&set) as i64;
        best = set;
    }
    Ok((Density::new(2 * edges, best.len() as i64), best))
}

/// `mad(G) < threshold`, decided by a single closure computation.
///
/// Densities of subgraphs have denominators at most `n`, so `mad < p/q` iff
/// `mad ≤ p/q − 1/(2nq)`, which is a non-strict closure test.
pub fn mad_below(g: &Graph, threshold: Density) -> bool {
    let n = g.n() as i64;
    if n == 0 {
        return true;
    }
    if !threshold.ratio().is_positive() {
        return false;
    }
    let (p, q) = (threshold.numer(), threshold.denom());
    // edge density test against (2np − 1)/(4nq)
    let (gain, _) = closure(g, 4 * n * q, 2 * n * p - 1);
    gain.is_zero()
}

/// Exhaustive maximum over all nonempty vertex subsets. Independent of the
/// flow route; limited to [`BRUTEFORCE_LIMIT`] vertices.
pub fn mad_bruteforce(g: &Graph) -> Result<Density, MadError> {
    let n = g.n();
    if n == 0 {
        return Err(MadError::EmptyGraph);
    }
    if n > BRUTEFORCE_LIMIT {
        return Err(MadError::TooLarge {
            n,
            limit: BRUTEFORCE_LIMIT,
        });
    }
    let adj: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u32, |acc, &w| acc | (1 << w)))
        .collect();
    let (mut best_e, mut best_h) = (0u64, 1u64);
    for mask in 1u32..(1u32 << n) {
        let mut twice_e = 0u64;
        let mut rest = mask;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            twice_e += u64::from((adj[v] & mask).count_ones());
        }
        let h = u64::from(mask.count_ones());
        if twice_e * best_h > best_e * h {
            best_e = twice_e;
            best_h = h;
        }
    }
    Ok(Density::new(best_e as i64, best_h as i64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named::*;

    fn k4_plus_pendant() -> Graph {
        let mut g = complete(4);
        let p = g.add_vertex();
        g.add_edge(0, p).unwrap();
        g
    }

    #[test]
    fn mad_exact_examples() {
        let (d, w) = mad_exact(&cycle(7)).unwrap();
        assert_eq!(d, Density::integer(2));
        assert_eq!(w, (0..7).collect::<Vec<_>>());

        let (d, w) = mad_exact(&k4_plus_pendant()).unwrap();
        assert_eq!(d, Density::integer(3));
        assert_eq!(w, vec![0, 1, 2, 3]);
        assert_eq!(
            mad_bruteforce(&k4_plus_pendant()).unwrap(),
            Density::integer(3)
        );

        assert_eq!(mad_exact(&star(3)).unwrap().0, Density::new(3, 2));
        assert_eq!(mad_exact(&Graph::empty(0)), Err(MadError::EmptyGraph));
        assert_eq!(
            mad_exact(&Graph::empty(3)).unwrap(),
            (Density::integer(0), vec![0])
        );
    }

    #[test]
    fn mad_below_examples() {
        let five_halves = Density::new(5, 2);
        assert!(mad_below(&cycle(7), five_halves));
        assert!(!mad_below(&complete(4), five_halves));
        let s = complete(4).subdivide(1);
        assert_eq!(mad_bruteforce(&s).unwrap(), Density::new(12, 5));
        assert!(mad_below(&s, five_halves));
        // threshold exactly equal to mad is not "below"
        assert!(!mad_below(&s, Density::new(12, 5)));
        assert!(mad_below(&s, Density::new(13, 5)));
    }

    #[test]
    fn bruteforce_examples() {
        assert_eq!(mad_bruteforce(&complete(4)).unwrap(), Density::integer(3));
        assert_eq!(mad_bruteforce(&path(4)).unwrap(), Density::new(3, 2));
        assert_eq!(mad_bruteforce(&petersen()).unwrap(), Density::integer(3));
        assert_eq!(
            mad_bruteforce(&Graph::empty(21)),
            Err(MadError::TooLarge { n: 21, limit: 20 })
        );
    }

    #[test]
    fn density_text_round_trip() {
        let d: Density = "16/7".parse().unwrap();
        assert_eq!(d, Density::thm2_threshold(2));
        assert_eq!(d.to_string(), "16/7");
        assert_eq!(Density::integer(3).to_string(), "3/1");
        assert_eq!("6/4".parse::<Density>().unwrap(), Density::new(3, 2));
        assert!("3/0".parse::<Density>().is_err());
        assert!("x".parse::<Density>().is_err());
    }
}
