use std::collections::BTreeMap;

use num_rational::Ratio;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::state::RepairState;
use super::Thm2Error;
use crate::discharge::{Charge, ChargeLedger};
use crate::graph::Graph;
use crate::partition::Color;

/// No 3⁺-vertex of `O⁰` has an `O¹`-neighbour, and no 2-vertex of `O⁰` has
/// one neighbour in `O¹` and the other in `O`.
pub fn check_pi(s: &RepairState) -> bool {
    let g = &s.g;
    let class = |v: usize, m: u8| s.coloring[v] == Color::O && s.marks[v] == m;
    (0..g.n()).filter(|&v| class(v, 0)).all(|v| {
        let nb = g.neighbors(v);
        if g.degree(v) >= 3 {
            !nb.iter().any(|&w| class(w, 1))
        } else if g.degree(v) == 2 {
            let (a, b) = (nb[0], nb[1]);
            !((class(a, 1) && s.coloring[b] == Color::O)
                || (class(b, 1) && s.coloring[a] == Color::O))
        } else {
            true
        }
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditIssue {
    pub rule: String,
    pub witness: Vec<usize>,
}

impl AuditIssue {
    fn new(rule: &str, witness: Vec<usize>) -> Self {
        AuditIssue {
            rule: rule.to_string(),
            witness,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub violations: Vec<AuditIssue>,
}

impl LemmaReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

fn induced_connected(g: &Graph, set: &[usize]) -> bool {
    set.is_empty() || g.components(set).len() == 1
}

/// Checks the structural lemmas that hold between calls of the main
/// procedure, reporting every failure with the vertices involved.
pub fn assert_structural_lemmas(s: &RepairState) -> LemmaReport {
    let g = &s.g;
    let n = g.n();
    let mut out = Vec::new();
    let clusters = s.clusters();
    let mut containing: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, c) in clusters.iter().enumerate() {
        for &m in &c.members {
            containing[m].push(i);
        }
    }
    let supervisors: Vec<Vec<usize>> = (0..n).map(|v| s.supervisors(v)).collect();
    let twice = |v: usize| s.marks[v] == 2;
    let co_clustered = |a: usize, b: usize| containing[a].iter().any(|i| containing[b].contains(i));
    let supervises = |a: usize, b: usize| supervisors[b].contains(&a);

    for v in 0..n {
        if s.marks[v] == 1 {
            out.push(AuditIssue::new("gen_once", vec![v]));
        }
        if twice(v) {
            let adjacent_sup = supervisors[v].iter().any(|&u| g.has_edge(u, v));
            let has_neutral = g.neighbors(v).iter().any(|&w| s.is_neutral(v, w));
            let has_cluster = s.cluster_of(v).is_some_and(|m| !m.is_empty());
            if !(adjacent_sup || has_neutral || has_cluster) {
                out.push(AuditIssue::new("gen_P", vec![v]));
            }
            if containing[v].is_empty() {
                out.push(AuditIssue::new("mark_inter", vec![v]));
            }
        }
        if !containing[v].is_empty() && !twice(v) {
            out.push(AuditIssue::new("inter_mark", vec![v]));
        }
        if s.marks[v] == 0 && (s.cluster_of(v).is_some() || s.giving[v].is_some()) {
            out.push(AuditIssue::new("noMnosub", vec![v]));
        }
        match containing[v].len() {
            0 | 1 => {}
            2 => {
                let singletons = containing[v].iter().all(|&i| clusters[i].members == [v]);
                if !singletons || s.giving[v].is_some() {
                    out.push(AuditIssue::new("gen_inter", vec![v]));
                }
            }
            _ => out.push(AuditIssue::new("gen_inter", vec![v])),
        }
        if g.degree(v) == 2 && twice(v) && supervisors[v].iter().any(|&u| !g.has_edge(u, v)) {
            out.push(AuditIssue::new("gen_2sup", vec![v]));
        }
        if let Some(w) = s.giving[v] {
            let bad = !twice(v)
                || !twice(w)
                || co_clustered(v, w)
                || supervises(v, w)
                || supervises(w, v)
                || s.giving[w] == Some(v);
            if bad {
                out.push(AuditIssue::new("gen_give", vec![v, w]));
            }
        }
        if let Some(m) = s.cluster_of(v) {
            let mut with_v = m.to_vec();
            with_v.push(v);
            if m.contains(&v) || !induced_connected(g, &with_v) {
                out.push(AuditIssue::new("cluster_connected", with_v));
            }
        }
    }
    for (u, v) in s.neutral_edges() {
        let bad = !twice(u)
            || !twice(v)
            || supervises(u, v)
            || supervises(v, u)
            || co_clustered(u, v)
            || s.giving[u] == Some(v)
            || s.giving[v] == Some(u);
        if bad {
            out.push(AuditIssue::new("gen_neutral", vec![u, v]));
        }
    }
    for c in &clusters {
        if c.members.is_empty() {
            continue;
        }
        if let [x] = c.members[..] {
            let no_own = s.cluster_of(x).is_none_or(|m| m.is_empty());
            if supervisors[x].len() == 2 && no_own && s.giving[x].is_none() {
                continue;
            }
        }
        for comp in g.components(&c.members) {
            let gives = comp.iter().any(|&x| s.giving[x].is_some());
            let excess: usize = comp.iter().map(|&x| g.degree(x).saturating_sub(2)).sum();
            if !gives && excess + 1 < s.k {
                out.push(AuditIssue::new("gen_Sgood", comp));
            }
        }
    }
    LemmaReport { violations: out }
}

/// Constants of the weight argument for a given `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DischargeParams {
    pub k: usize,
    #[serde(with = "crate::discharge::ratio_text")]
    pub m: Charge,
    #[serde(with = "crate::discharge::ratio_text")]
    pub unit: Charge,
    #[serde(with = "crate::discharge::ratio_text")]
    pub half_unit: Charge,
    #[serde(with = "crate::discharge::ratio_text")]
    pub tree_decrement: Charge,
}

impl DischargeParams {
    /// `M = 8k/(3k+1)`, `unit = M − 2`, `tree_decrement = 4 − 3M/2`.
    pub fn new(k: usize) -> Result<Self, Thm2Error> {
        if k < 2 {
            return Err(Thm2Error::BadK(k));
        }
        let m = Ratio::new(8 * k as i64, 3 * k as i64 + 1);
        let two = Ratio::from_integer(2);
        let unit = m - two;
        Ok(DischargeParams {
            k,
            m,
            unit,
            half_unit: unit / two,
            tree_decrement: Ratio::from_integer(4) - Ratio::new(3, 2) * m,
        })
    }

    /// `k·(4 − 3M/2) = M/2`.
    pub fn identity_holds(&self) -> bool {
        Ratio::from_integer(self.k as i64) * self.tree_decrement == self.m / Ratio::from_integer(2)
    }
}

pub const STEP_SUPERVISORS: &str = "step1";
pub const STEP_UNMARKED: &str = "step2";
pub const STEP_GIVING: &str = "step3";
pub const STEP_TREE: &str = "step4";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DischargeAudit {
    pub ledger: ChargeLedger,
    /// Transfers across neutral edges, repeated or two-way transfers on one
    /// edge, and vertices ending with negative weight.
    pub issues: Vec<AuditIssue>,
}

impl DischargeAudit {
    pub fn is_clean(&self) -> bool {
        self.issues.is_empty()
    }
}

/// BFS spanning tree of `comp` from its smallest vertex, as parent links and
/// the visiting order.
fn bfs_tree(g: &Graph, comp: &[usize]) -> (BTreeMap<usize, Option<usize>>, Vec<usize>) {
    let mut parent: BTreeMap<usize, Option<usize>> = BTreeMap::new();
    let root = comp[0];
    parent.insert(root, None);
    let mut order = vec![root];
    let mut i = 0;
    while i < order.len() {
        let u = order[i];
        i += 1;
        for &w in g.neighbors(u) {
            if comp.binary_search(&w).is_ok() && !parent.contains_key(&w) {
                parent.insert(w, Some(u));
                order.push(w);
            }
        }
    }
    (parent, order)
}

/// Runs the four discharging steps on a terminal state: initial weight
/// `d(v) − M`; supervisors of a doubly supervised vertex give it
/// `(M−2)/2` each; twice-marked vertices give `M − 2` to unmarked
/// neighbours; `w` gives `M − 2` to `v` when `e(v) = vw`; inside each
/// component of each cluster set, along a BFS spanning tree `T`, `u` gives
/// `v` the positive part of `M − 2 − n_Tuv(4 − 3M/2)` unless the side of
/// `v` holds a vertex with a giving edge.
pub fn discharge_thm2(
    g: &Graph,
    s: &RepairState,
    params: &DischargeParams,
) -> Result<DischargeAudit, Thm2Error> {
    if g != &s.g {
        return Err(Thm2Error::PreconditionViolated(
            "state belongs to another graph".into(),
        ));
    }
    let n = g.n();
    let twice = |v: usize| s.marks[v] == 2;
    if let Some(v) =
        (0..n).find(|&v| g.degree(v) == 2 && !twice(v) && !g.neighbors(v).iter().any(|&w| twice(w)))
    {
        return Err(Thm2Error::PreconditionViolated(format!(
            "2-vertex {v} is still untreated"
        )));
    }
    let initial = (0..n)
        .map(|v| Ratio::from_integer(g.degree(v) as i64) - params.m)
        .collect();
    let mut ledger = ChargeLedger::new(initial);

    for w in 0..n {
        let sups = s.supervisors(w);
        if sups.len() == 2 {
            for u in sups {
                ledger.transfer(u, w, params.half_unit, STEP_SUPERVISORS);
            }
        }
    }
    for v in (0..n).filter(|&v| twice(v)) {
        for &w in g.neighbors(v) {
            if s.marks[w] == 0 {
                ledger.transfer(v, w, params.unit, STEP_UNMARKED);
            }
        }
    }
    for v in 0..n {
        if let Some(w) = s.giving[v] {
            ledger.transfer(w, v, params.unit, STEP_GIVING);
        }
    }
    for cluster in s.clusters() {
        let mut members = cluster.members.clone();
        members.sort_unstable();
        members.dedup();
        for comp in g.components(&members) {
            let (parent, order) = bfs_tree(g, &comp);
            let excess = |x: usize| Ratio::from_integer(g.degree(x) as i64 - 2);
            let mut below: BTreeMap<usize, (Charge, usize)> = BTreeMap::new();
            for &x in order.iter().rev() {
                below.insert(x, (excess(x), usize::from(s.giving[x].is_some())));
            }
            for &x in order.iter().rev() {
                if let Some(p) = parent[&x] {
                    let (e, gv) = below[&x];
                    let acc = below.get_mut(&p).expect("visited");
                    acc.0 += e;
                    acc.1 += gv;
                }
            }
            let (total, total_gives) = below[&comp[0]];
            for &c in &order[1..] {
                let p = parent[&c].expect("non-root");
                let (sub, sub_gives) = below[&c];
                // p gives towards the subtree of c; c gives towards the rest
                let sides = [
                    (p, c, sub, sub_gives),
                    (c, p, total - sub, total_gives - sub_gives),
                ];
                for (from, to, n_side, side_gives) in sides {
                    let amount = params.unit - n_side * params.tree_decrement;
                    if amount > Charge::zero() && side_gives == 0 {
                        ledger.transfer(from, to, amount, STEP_TREE);
                    }
                }
            }
        }
    }

    let mut issues = Vec::new();
    let mut seen: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for t in &ledger.transfers {
        if s.is_neutral(t.from, t.to) {
            issues.push(AuditIssue::new("l_neutral", vec![t.from, t.to]));
        }
        *seen
            .entry((t.from.min(t.to), t.from.max(t.to)))
            .or_default() += 1;
    }
    for ((a, b), count) in seen {
        if count > 1 {
            issues.push(AuditIssue::new("onlyone", vec![a, b]));
        }
    }
    for v in ledger.negatives() {
        issues.push(AuditIssue::new("nonnegative", vec![v]));
    }
    Ok(DischargeAudit { ledger, issues })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named::*;

    #[test]
    fn params_satisfy_identity() {
        for k in 2..40 {
            let p = DischargeParams::new(k).unwrap();
            assert!(p.identity_holds(), "k = {k}");
            assert!(p.m < Ratio::new(8, 3));
            assert!(p.unit > Charge::zero());
        }
        assert_eq!(DischargeParams::new(2).unwrap().m, Ratio::new(16, 7));
        assert!(DischargeParams::new(1).is_err());
    }

    #[test]
    fn pi_detects_o1_neighbour() {
        let g = star(3);
        let mut s = RepairState::new(g, 2);
        assert!(check_pi(&s));
        s.set_mark(0, 1);
        assert!(check_pi(&s), "leaves are not 2- or 3-vertices");
        let mut s = RepairState::new(complete(4), 2);
        s.set_mark(1, 1);
        assert!(!check_pi(&s));
        s.set_color(0, Color::I);
        s.set_color(2, Color::I);
        s.set_color(3, Color::I);
        assert!(check_pi(&s));
    }

    #[test]
    fn pi_checks_two_vertices() {
        // 0 - 1 - 2 with 1 of degree two
        let mut s = RepairState::new(path(3), 2);
        s.set_mark(0, 1);
        assert!(!check_pi(&s));
        s.set_color(2, Color::I);
        assert!(check_pi(&s));
    }

    #[test]
    fn cubic_graph_discharges_without_transfers() {
        let g = petersen();
        let s = RepairState::new(g.clone(), 3);
        let a = discharge_thm2(&g, &s, &DischargeParams::new(3).unwrap()).unwrap();
        assert!(a.is_clean());
        assert!(a.ledger.transfers.is_empty());
        assert!(a.ledger.is_consistent());
    }

    #[test]
    fn untreated_two_vertex_is_refused() {
        let g = cycle(5);
        let s = RepairState::new(g.clone(), 2);
        assert!(matches!(
            discharge_thm2(&g, &s, &DischargeParams::new(2).unwrap()),
            Err(Thm2Error::PreconditionViolated(_))
        ));
    }

    #[test]
    fn undersized_cluster_breaks_onlyone() {
        // a cluster {0, 1} of two adjacent 3-vertices: excess 2 < k - 1
        let g = prism();
        let mut s = RepairState::new(g.clone(), 4);
        for v in 0..g.n() {
            s.set_mark(v, 2);
        }
        s.add_free_cluster(vec![0, 1]);
        let lemmas = assert_structural_lemmas(&s);
        assert!(lemmas.violations.iter().any(|i| i.rule == "gen_Sgood"));
        let p = DischargeParams::new(4).unwrap();
        let a = discharge_thm2(&g, &s, &p).unwrap();
        let step4: Vec<_> = a
            .ledger
            .transfers
            .iter()
            .filter(|t| t.rule == STEP_TREE)
            .collect();
        assert_eq!(step4.len(), 2);
        for t in step4 {
            assert_eq!(t.amount, p.unit - p.tree_decrement);
        }
        assert_eq!(a.issues, vec![AuditIssue::new("onlyone", vec![0, 1])]);
    }

    #[test]
    fn clean_state_has_no_lemma_violations() {
        let s = RepairState::new(petersen(), 2);
        assert!(assert_structural_lemmas(&s).is_clean());
        let mut s = RepairState::new(cycle(6), 2);
        s.set_mark(0, 1);
        let r = assert_structural_lemmas(&s);
        assert_eq!(r.violations[0].rule, "gen_once");
    }
}
