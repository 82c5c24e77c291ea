//! Constructive (I, O_k)-partitions for `k ≥ 2` and graphs with
//! `mad < 8k/(3k+1)`, by a journaled repair procedure on marks, cluster sets,
//! giving edges and neutral edges.
//!
//! [`solve_iok`] strips vertices of degree at most one, then repeatedly takes
//! a 2-vertex that is not marked twice and has no neighbour marked twice,
//! colors the rest of the graph with an oracle, and runs [`RepairState::p_gen`]
//! on it. Either some step produces a valid partition, or the loop runs out
//! of such 2-vertices and the final state is returned for auditing with
//! [`discharge_thm2`].

mod audit;
mod procedure;
mod state;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, VertexMap};
use crate::partition::{exact_solve, verify, verify_colored_part, Color, Coloring, PartitionSpec};

pub use audit::{
    assert_structural_lemmas, check_pi, discharge_thm2, AuditIssue, DischargeAudit,
    DischargeParams, LemmaReport,
};
pub use state::{Cluster, RepairState, StateSnapshot, Token};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Thm2Error {
    #[error("checkpoint token used out of nesting order")]
    TokenOrderViolation,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("oracle returned an invalid partition of G - {vertex}")]
    OracleFailed { vertex: usize },
    #[error("oracle found no partition of G - {vertex}")]
    OracleUnsatisfiable { vertex: usize },
    #[error("outer loop exceeded {cap} iterations")]
    IterationCap { cap: usize },
    #[error("k must be at least 2, got {0}")]
    BadK(usize),
    #[error("invalid state: {0}")]
    BadState(String),
    #[error("a vertex of the overfull component moved to I without yielding a partition")]
    Stuck,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RepairOutcome {
    RecoloredToI,
    NeutralEdgeSet {
        edge: (usize, usize),
    },
    ClusterSetBuilt {
        supervisor: Option<usize>,
        members: Vec<usize>,
    },
    FullPartitionFound(Coloring),
}

/// Source of the partition of `G − v` used by [`RepairState::p_gen`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum OraclePolicy {
    /// Exhaustive search.
    Exact,
    /// [`solve_iok`] on `G − v`.
    Recursive,
}

impl OraclePolicy {
    fn partition_without(&self, g: &Graph, v: usize, k: usize) -> Result<Coloring, Thm2Error> {
        let (h, map) = g.remove_vertices(&[v]);
        let sub = match self {
            OraclePolicy::Exact => exact_solve(&h, PartitionSpec::order(k)),
            OraclePolicy::Recursive => match solve_iok(&h, k, *self)? {
                Thm2Outcome::Colored { coloring, .. } => Some(coloring),
                Thm2Outcome::Exhausted { .. } => None,
            },
        };
        let sub = sub.ok_or(Thm2Error::OracleUnsatisfiable { vertex: v })?;
        if verify(&h, &sub, PartitionSpec::order(k)).is_err() {
            return Err(Thm2Error::OracleFailed { vertex: v });
        }
        let mut c = Coloring::unset(g.n());
        for (new, &old) in map.new_to_old.iter().enumerate() {
            c.set(old, sub.get(new).expect("total"));
        }
        Ok(c)
    }
}

impl RepairState {
    fn full_partition(&self) -> Option<Coloring> {
        let c = self.coloring();
        verify(&self.g, &c, PartitionSpec::order(self.k))
            .ok()
            .map(|_| c)
    }

    /// The main procedure for a 2-vertex `v`: color `G − v` with the oracle,
    /// put `v` in O, and run the secondary procedure on the 3⁺-vertices of the
    /// `O⁰`-component of `v`, which then form a cluster set without
    /// supervisor.
    pub fn p_gen(&mut self, v: usize, oracle: OraclePolicy) -> Result<RepairOutcome, Thm2Error> {
        let g = self.g.clone();
        if g.degree(v) != 2
            || self.marks[v] == 2
            || g.neighbors(v).iter().any(|&w| self.marks[w] == 2)
        {
            return Err(Thm2Error::PreconditionViolated(format!(
                "p_gen needs a 2-vertex with no twice-marked vertex in its closed neighbourhood, got {v}"
            )));
        }
        let mut base = oracle.partition_without(&g, v, self.k)?;
        let spec = PartitionSpec::order(self.k);
        for col in [Color::I, Color::O] {
            base.set(v, col);
            if verify(&g, &base, spec).is_ok() {
                return Ok(RepairOutcome::FullPartitionFound(base));
            }
        }
        debug_assert!(verify_colored_part(&g, &base, spec).is_err());
        self.reset_coloring(base.as_slice().iter().map(|c| c.expect("total")).collect())?;

        // a vertex of the overfull component with no I-neighbour can leave it
        let comp = crate::partition::o_component(&g, &base, v);
        if let Some(&u) = comp
            .iter()
            .find(|&&u| g.neighbors(u).iter().all(|&y| self.coloring[y] == Color::O))
        {
            self.set_color(u, Color::I);
            return self
                .full_partition()
                .map(RepairOutcome::FullPartitionFound)
                .ok_or(Thm2Error::Stuck);
        }

        let start_twice: Vec<bool> = self.marks.iter().map(|&m| m == 2).collect();
        let c = self.o0_closure(&[v]);
        let big: Vec<usize> = c.iter().copied().filter(|&u| g.degree(u) >= 3).collect();
        for &u in &big {
            self.set_mark(u, 1);
        }
        for &x in &big {
            if self.marks[x] != 1 {
                continue;
            }
            self.set_mark(x, 2);
            let before = self.coloring_hash();
            self.p_sub(x)?;
            if self.coloring_hash() != before {
                return self
                    .full_partition()
                    .map(RepairOutcome::FullPartitionFound)
                    .ok_or(Thm2Error::Stuck);
            }
        }
        let link = big
            .iter()
            .flat_map(|&x| g.neighbors(x).iter().map(move |&y| (x, y)))
            .find(|&(_, y)| start_twice[y] && self.coloring[y] == Color::O);
        if let Some((x, y)) = link {
            self.set_giving(x, y);
        }
        self.add_free_cluster(big.clone());
        Ok(RepairOutcome::ClusterSetBuilt {
            supervisor: None,
            members: big,
        })
    }
}

#[derive(Clone, Debug)]
pub enum Thm2Outcome {
    Colored {
        coloring: Coloring,
        calls: usize,
    },
    /// No 2-vertex is left to treat. `state` lives on `core` (the input with
    /// vertices of degree at most one stripped repeatedly); `core_ids` maps
    /// core vertices back to input vertices.
    Exhausted {
        state: Box<RepairState>,
        core: Graph,
        core_ids: Vec<usize>,
    },
}

/// Repeatedly removes vertices of degree at most one. Returns the remaining
/// graph, its vertex map, and the removed vertices in removal order.
pub fn two_core(g: &Graph) -> (Graph, VertexMap, Vec<usize>) {
    let n = g.n();
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut gone = vec![false; n];
    let mut order = Vec::new();
    let mut stack: Vec<usize> = (0..n).rev().filter(|&v| deg[v] <= 1).collect();
    while let Some(v) = stack.pop() {
        if gone[v] {
            continue;
        }
        gone[v] = true;
        order.push(v);
        for &w in g.neighbors(v) {
            if !gone[w] {
                deg[w] -= 1;
                if deg[w] == 1 {
                    stack.push(w);
                }
            }
        }
    }
    let (core, map) = g.remove_vertices(&order);
    (core, map, order)
}

/// Colors the stripped vertices back in reverse order, each opposite to its
/// one remaining neighbour (I when it has none).
fn extend_stripped(g: &Graph, c: &mut Coloring, order: &[usize]) {
    for &v in order.iter().rev() {
        let nb = g.neighbors(v).iter().copied().find(|&w| c.get(w).is_some());
        let col = match nb.and_then(|w| c.get(w)) {
            Some(Color::I) => Color::O,
            _ => Color::I,
        };
        c.set(v, col);
    }
}

/// Runs the main loop; 2-vertices are taken in ascending id order.
pub fn solve_iok(g: &Graph, k: usize, oracle: OraclePolicy) -> Result<Thm2Outcome, Thm2Error> {
    solve_iok_with(g, k, oracle, cfg!(debug_assertions))
}

/// [`solve_iok`] with the in-procedure monitors switched on or off.
pub fn solve_iok_with(
    g: &Graph,
    k: usize,
    oracle: OraclePolicy,
    monitors: bool,
) -> Result<Thm2Outcome, Thm2Error> {
    solve_iok_observed(g, k, oracle, monitors, &mut |_| {})
}

/// [`solve_iok_with`], calling `observe` on the state before the first call
/// of the main procedure and after every call that leaves no partition.
pub fn solve_iok_observed(
    g: &Graph,
    k: usize,
    oracle: OraclePolicy,
    monitors: bool,
    observe: &mut dyn FnMut(&RepairState),
) -> Result<Thm2Outcome, Thm2Error> {
    if k < 2 {
        return Err(Thm2Error::BadK(k));
    }
    let (core, map, order) = two_core(g);
    let lift = |core_coloring: &Coloring| {
        let mut c = Coloring::unset(g.n());
        for (new, &old) in map.new_to_old.iter().enumerate() {
            c.set(old, core_coloring.get(new).expect("total"));
        }
        extend_stripped(g, &mut c, &order);
        c
    };
    let mut state = RepairState::new(core.clone(), k);
    state.monitors = monitors;
    if core.is_empty() {
        return Ok(Thm2Outcome::Colored {
            coloring: lift(&Coloring::unset(0)),
            calls: 0,
        });
    }
    let cap = core.n();
    let mut calls = 0;
    observe(&state);
    loop {
        let next = (0..core.n()).find(|&v| {
            core.degree(v) == 2
                && state.marks[v] != 2
                && core.neighbors(v).iter().all(|&w| state.marks[w] != 2)
        });
        let Some(v) = next else {
            return Ok(Thm2Outcome::Exhausted {
                state: Box::new(state),
                core,
                core_ids: map.new_to_old,
            });
        };
        calls += 1;
        if calls > cap {
            return Err(Thm2Error::IterationCap { cap });
        }
        if let RepairOutcome::FullPartitionFound(c) = state.p_gen(v, oracle)? {
            return Ok(Thm2Outcome::Colored {
                coloring: lift(&c),
                calls,
            });
        }
        observe(&state);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named::*;

    #[test]
    fn two_core_strips_trees() {
        let (core, _, order) = two_core(&path(5));
        assert!(core.is_empty());
        assert_eq!(order.len(), 5);
        let mut g = cycle(4);
        let p = g.add_vertex();
        g.add_edge(0, p).unwrap();
        let (core, map, order) = two_core(&g);
        assert_eq!((core.n(), order), (4, vec![4]));
        assert_eq!(map.new_to_old, vec![0, 1, 2, 3]);
    }

    #[test]
    fn cycle_seven_with_k_two() {
        // the explicit partition I = {v1, v4, v6}
        let c7 = cycle(7);
        let c = Coloring::with_i_set(7, &[0, 3, 5]);
        assert_eq!(verify(&c7, &c, PartitionSpec::order(2)), Ok(()));
        for oracle in [OraclePolicy::Exact, OraclePolicy::Recursive] {
            match solve_iok(&c7, 2, oracle).unwrap() {
                Thm2Outcome::Colored { coloring, .. } => {
                    assert_eq!(verify(&c7, &coloring, PartitionSpec::order(2)), Ok(()));
                }
                Thm2Outcome::Exhausted { .. } => panic!("C7 is (I,O2)-partitionable"),
            }
        }
        let mut st = RepairState::new(c7, 2);
        assert!(matches!(
            st.p_gen(0, OraclePolicy::Exact).unwrap(),
            RepairOutcome::FullPartitionFound(_)
        ));
    }

    #[test]
    fn rejects_small_k() {
        assert_eq!(
            solve_iok(&cycle(5), 1, OraclePolicy::Exact).unwrap_err(),
            Thm2Error::BadK(1)
        );
    }

    #[test]
    fn k4_has_no_two_vertices() {
        match solve_iok(&complete(4), 2, OraclePolicy::Exact).unwrap() {
            Thm2Outcome::Exhausted { state, core, .. } => {
                assert_eq!(core, complete(4));
                assert!(state.marks.iter().all(|&m| m == 0));
            }
            Thm2Outcome::Colored { .. } => panic!("no 2-vertex to start from"),
        }
    }

    #[test]
    fn p_sub_step_one_sets_neutral_edge() {
        // path 0-1-2: 1 is O and marked twice, its I-neighbour 0 marked twice
        let mut st = RepairState::new(path(3), 2);
        st.reset_coloring(vec![Color::I, Color::O, Color::O])
            .unwrap();
        st.set_mark(0, 2);
        st.set_mark(1, 2);
        assert_eq!(
            st.p_sub(1).unwrap(),
            RepairOutcome::NeutralEdgeSet { edge: (1, 0) }
        );
        assert!(st.is_neutral(0, 1));
        assert_eq!(st.cluster_of(1), Some(&[][..]));
    }

    #[test]
    fn p_sub_step_two_sets_giving_edge() {
        // 1 - 0 - 2 with 0 in I; 1 and 2 O and marked twice
        let mut st = RepairState::new(path(3), 2);
        st.reset_coloring(vec![Color::O, Color::I, Color::O])
            .unwrap();
        st.set_mark(0, 2);
        st.set_mark(2, 2);
        let out = st.p_sub(0).unwrap();
        assert_eq!(
            out,
            RepairOutcome::ClusterSetBuilt {
                supervisor: Some(0),
                members: vec![1]
            }
        );
        assert_eq!(st.giving_edge(1), Some(2));
        assert_eq!(st.mark(1), 2);
        assert!(st.violations.is_empty(), "{:?}", st.violations);
    }

    #[test]
    fn p_sub_recolors_along_a_path() {
        // path 0..6 colored O O I O O I O with k = 2: vertex 1 moves to I,
        // its I-neighbour 2 moves to O and overfills {2, 3, 4}, so 3 moves to I
        let g = path(7);
        let mut st = RepairState::new(g.clone(), 2);
        let (o, i) = (Color::O, Color::I);
        st.reset_coloring(vec![o, o, i, o, o, i, o]).unwrap();
        st.set_mark(1, 2);
        let out = st.p_sub(1).unwrap();
        assert_eq!(out, RepairOutcome::RecoloredToI);
        assert_eq!(
            st.coloring(),
            Coloring::from_total(vec![o, i, o, i, o, i, o])
        );
        assert_eq!(verify(&g, &st.coloring(), PartitionSpec::order(2)), Ok(()));
        assert!(st.violations.is_empty(), "{:?}", st.violations);
    }
}
