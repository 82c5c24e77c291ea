//! Constructive (I, O_3)-partitions of graphs with `mad < 5/2`.
//!
//! The solver repeatedly removes a reducible configuration (a vertex of
//! degree at most one, a 3⁻-vertex whose neighbours all have degree two, or a
//! 3- or 4-vertex with too many sons in the forest `L`), colors what is left,
//! and extends the coloring back over each removed set with the matching
//! local argument. Each extension is checked; when the local argument does
//! not produce a valid coloring, the removed set and a growing neighbourhood
//! of it are recolored by exhaustive search. The number of such repairs is
//! reported.
//!
//! A graph with no reducible configuration is returned as `NotApplicable`;
//! [`audit_charges_thm1`] then shows its average degree is at least `5/2`.

use std::collections::VecDeque;
use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::discharge::ChargeLedger;
use crate::graph::{Graph, VertexMap};
use crate::partition::{
    exact_solve_with, saturation, verify, Color, Coloring, PartitionSpec, Saturation,
};

const O3: PartitionSpec = PartitionSpec {
    family: crate::partition::Family::BoundedOrder,
    k: 3,
};

/// The rooted forest `L`: father links from 2-vertices to 3⁺-vertices and
/// back, grown from the 2-chains of the graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForestL {
    father: Vec<Option<usize>>,
    sons: Vec<Vec<usize>>,
    leaf: Vec<bool>,
    member: Vec<bool>,
}

impl ForestL {
    pub fn empty(n: usize) -> Self {
        ForestL {
            father: vec![None; n],
            sons: vec![Vec::new(); n],
            leaf: vec![false; n],
            member: vec![false; n],
        }
    }

    pub fn father(&self, v: usize) -> Option<usize> {
        self.father[v]
    }

    pub fn sons(&self, v: usize) -> &[usize] {
        &self.sons[v]
    }

    pub fn is_leaf(&self, v: usize) -> bool {
        self.leaf[v]
    }

    pub fn contains(&self, v: usize) -> bool {
        self.member[v]
    }

    pub fn members(&self) -> Vec<usize> {
        (0..self.member.len()).filter(|&v| self.member[v]).collect()
    }

    /// Edges of `L`, as `(father, son)` pairs.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.father.len())
            .filter_map(|v| self.father[v].map(|f| (f, v)))
            .collect()
    }

    /// Whether `uv` is an edge of `L`.
    pub fn is_edge(&self, u: usize, v: usize) -> bool {
        self.father[u] == Some(v) || self.father[v] == Some(u)
    }

    fn link(&mut self, son: usize, father: usize) {
        debug_assert!(self.father[son].is_none());
        self.father[son] = Some(father);
        self.sons[father].push(son);
        self.member[son] = true;
        self.member[father] = true;
    }

    /// Descendants of `v`, sorted, not including `v`.
    pub fn descendants(&self, v: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack: Vec<usize> = self.sons[v].clone();
        let mut seen = vec![false; self.father.len()];
        while let Some(x) = stack.pop() {
            if seen[x] {
                continue;
            }
            seen[x] = true;
            out.push(x);
            stack.extend(self.sons[x].iter().copied());
        }
        out.sort_unstable();
        out
    }

    /// Structural checks: at most one father, alternating degrees along
    /// father links, fathers are neighbours, no cycles.
    pub fn check_invariants(&self, g: &Graph) -> Result<(), String> {
        for v in 0..self.father.len() {
            let Some(f) = self.father[v] else { continue };
            if !g.has_edge(v, f) {
                return Err(format!("father {f} of {v} is not a neighbour"));
            }
            let (dv, df) = (g.degree(v), g.degree(f));
            if !((df >= 3 && dv == 2) || (df == 2 && dv >= 3)) {
                return Err(format!("link {f}->{v} joins degrees {df} and {dv}"));
            }
            let mut steps = 0;
            let mut cur = f;
            while let Some(up) = self.father[cur] {
                cur = up;
                steps += 1;
                if cur == v || steps > self.father.len() {
                    return Err(format!("father relation has a cycle through {v}"));
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ReducibleKind {
    Degree0or1,
    AllTwoNeighbors,
    ThreeVertexTwoSons,
    FourVertexFourSons,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReducibleConfig {
    pub kind: ReducibleKind,
    pub center: usize,
    /// Vertices removed before recursing, sorted.
    pub support: Vec<usize>,
}

impl fmt::Display for ReducibleConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:?} at {} removing {:?}",
            self.kind, self.center, self.support
        )
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Thm1Error {
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("no valid extension exists at reduction step {step}")]
    ExtensionFailed { step: usize },
}

fn local_config(g: &Graph) -> Option<ReducibleConfig> {
    if let Some(v) = (0..g.n()).find(|&v| g.degree(v) <= 1) {
        return Some(ReducibleConfig {
            kind: ReducibleKind::Degree0or1,
            center: v,
            support: vec![v],
        });
    }
    let v = (0..g.n())
        .find(|&v| g.degree(v) <= 3 && g.neighbors(v).iter().all(|&w| g.degree(w) == 2))?;
    let mut support = g.neighbors(v).to_vec();
    support.push(v);
    support.sort_unstable();
    Some(ReducibleConfig {
        kind: ReducibleKind::AllTwoNeighbors,
        center: v,
        support,
    })
}

/// Builds `L`: every 2-chain `u1 v1 v2 u2` contributes the links
/// `u1 → v1` and `u2 → v2`; then, until nothing changes, every 4-vertex with
/// three sons or 3-vertex with a son that still has a 2-neighbour `v` outside
/// `L` gains the father `v`, whose own father is the other neighbour of `v`.
pub fn build_forest_l(g: &Graph) -> Result<ForestL, Thm1Error> {
    if let Some(c) = local_config(g) {
        return Err(Thm1Error::PreconditionViolated(c.to_string()));
    }
    let mut l = ForestL::empty(g.n());
    for chain in g.chains().chains {
        if chain.internal.len() != 2 {
            continue;
        }
        let (u1, u2) = chain.endpoints;
        let (v1, v2) = (chain.internal[0], chain.internal[1]);
        l.link(v1, u1);
        l.link(v2, u2);
        l.leaf[v1] = true;
        l.leaf[v2] = true;
    }
    loop {
        let mut grew = false;
        for w in 0..g.n() {
            let sons = l.sons[w].len();
            let grows = (g.degree(w) == 4 && sons >= 3) || (g.degree(w) == 3 && sons >= 1);
            if !grows || l.father[w].is_some() {
                continue;
            }
            let Some(&v) = g
                .neighbors(w)
                .iter()
                .find(|&&v| g.degree(v) == 2 && !l.member[v])
            else {
                continue;
            };
            let u = g.other_neighbor(v, w);
            if g.degree(u) < 3 {
                continue;
            }
            l.link(v, u);
            l.link(w, v);
            grew = true;
        }
        debug_assert_eq!(l.check_invariants(g), Ok(()));
        if !grew {
            break;
        }
    }
    Ok(l)
}

/// First reducible configuration in priority order (lowest center id within
/// a kind), or `None`. The son-count configurations are read off `l`.
pub fn find_reducible(g: &Graph, l: &ForestL) -> Option<ReducibleConfig> {
    if let Some(c) = local_config(g) {
        return Some(c);
    }
    let with_sons = |kind, degree, sons| {
        let v = (0..g.n()).find(|&v| g.degree(v) == degree && l.sons(v).len() >= sons)?;
        let mut support = l.descendants(v);
        support.push(v);
        support.sort_unstable();
        Some(ReducibleConfig {
            kind,
            center: v,
            support,
        })
    };
    with_sons(ReducibleKind::ThreeVertexTwoSons, 3, 2)
        .or_else(|| with_sons(ReducibleKind::FourVertexFourSons, 4, 4))
}

fn opposite(c: Option<Color>) -> Color {
    match c {
        Some(Color::O) => Color::I,
        _ => Color::O,
    }
}

/// Applies the local extension arguments to a partial coloring.
struct Extender<'a> {
    g: &'a Graph,
    l: &'a ForestL,
    c: Coloring,
    saturated_after_recolor: usize,
}

impl Extender<'_> {
    /// Makes the far neighbour `w` of the son `s` of `v` safe to sit next to
    /// an O-colored `s`, coloring the subtree below `s` if there is one.
    fn prepare_son(&mut self, v: usize, s: usize) -> usize {
        let w = self.g.other_neighbor(s, v);
        if self.l.is_leaf(s) {
            if self.c.is(w, Color::O) {
                let beyond = self.g.other_neighbor(w, s);
                if self.c.is(beyond, Color::O) {
                    self.c.set(w, Color::I);
                }
            }
        } else {
            self.recolor_unsaturated(w);
        }
        w
    }

    fn recolor_unsaturated(&mut self, v: usize) {
        let sons = self.l.sons(v).to_vec();
        let far: Vec<usize> = sons.iter().map(|&s| self.prepare_son(v, s)).collect();
        let father = self.l.father(v);
        if sons.len() == 1 {
            let third = self
                .g
                .neighbors(v)
                .iter()
                .copied()
                .find(|&x| Some(x) != father && x != sons[0]);
            if third.is_some_and(|x| self.c.is(x, Color::O)) {
                self.c.set(sons[0], Color::O);
                self.c.set(v, Color::I);
            } else {
                self.c.set(sons[0], opposite(self.c.get(far[0])));
                self.c.set(v, Color::O);
            }
        } else {
            for &s in &sons {
                self.c.set(s, Color::O);
            }
            self.c.set(v, Color::I);
        }
        if self.c.is(v, Color::O) && saturation(self.g, &self.c, v, O3) == Ok(Saturation::Saturated)
        {
            self.saturated_after_recolor += 1;
        }
    }

    fn extend(&mut self, config: &ReducibleConfig) {
        let (g, v) = (self.g, config.center);
        match config.kind {
            ReducibleKind::Degree0or1 => {
                let col = g
                    .neighbors(v)
                    .first()
                    .map_or(Color::I, |&u| opposite(self.c.get(u)));
                self.c.set(v, col);
            }
            ReducibleKind::AllTwoNeighbors => {
                for &u in g.neighbors(v) {
                    let beyond = g.other_neighbor(u, v);
                    if config.support.binary_search(&beyond).is_err() {
                        self.c.set(u, opposite(self.c.get(beyond)));
                    }
                }
                for &x in &config.support {
                    if self.c.get(x).is_none() {
                        self.c.set(x, Color::O);
                    }
                }
                if verify(g, &self.c, O3).is_err() {
                    self.c.set(v, Color::I);
                }
            }
            ReducibleKind::ThreeVertexTwoSons | ReducibleKind::FourVertexFourSons => {
                let sons = self.l.sons(v).to_vec();
                let far: Vec<usize> = sons.iter().map(|&s| self.prepare_son(v, s)).collect();
                let third = g.neighbors(v).iter().copied().find(|x| !sons.contains(x));
                if sons.len() == 2 && third.is_some_and(|x| self.c.is(x, Color::I)) {
                    for (&s, &w) in sons.iter().zip(&far) {
                        self.c.set(s, opposite(self.c.get(w)));
                    }
                    self.c.set(v, Color::O);
                } else {
                    for &s in &sons {
                        self.c.set(s, Color::O);
                    }
                    self.c.set(v, Color::I);
                }
            }
        }
    }
}

/// Colors `v` and its descendants on top of `c` (which must leave them and
/// the father of `v` unset) so that `v`, when colored O, is not saturated.
pub fn recolor_unsaturated(
    g: &Graph,
    l: &ForestL,
    v: usize,
    c: &Coloring,
) -> Result<Coloring, Thm1Error> {
    let Some(u) = l.father(v) else {
        return Err(Thm1Error::PreconditionViolated(format!(
            "{v} has no father in L"
        )));
    };
    if g.degree(v) < 3 {
        return Err(Thm1Error::PreconditionViolated(format!(
            "{v} is not a 3+-vertex"
        )));
    }
    let mut region = l.descendants(v);
    region.extend([u, v]);
    if let Some(&x) = region.iter().find(|&&x| c.get(x).is_some()) {
        return Err(Thm1Error::PreconditionViolated(format!(
            "{x} must be uncolored"
        )));
    }
    let mut ext = Extender {
        g,
        l,
        c: c.clone(),
        saturated_after_recolor: 0,
    };
    ext.recolor_unsaturated(v);
    Ok(ext.c)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Thm1Stats {
    /// Reductions applied, in order of removal.
    pub reductions: Vec<ReducibleKind>,
    /// Extensions that produced a valid coloring directly.
    pub direct_extensions: usize,
    /// Extensions that needed the exhaustive local repair.
    pub repairs: usize,
    /// Largest repair radius used (0 = only the removed set recolored).
    pub max_repair_radius: usize,
    /// O-colored vertices left saturated by the subtree recoloring.
    pub saturated_after_recolor: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Thm1Outcome {
    Colored {
        coloring: Coloring,
        stats: Thm1Stats,
    },
    /// No reducible configuration in `residual`; `original_ids[i]` is the
    /// input vertex behind residual vertex `i`, and `forest` is `L` of the
    /// residual.
    NotApplicable {
        residual: Graph,
        original_ids: Vec<usize>,
        forest: ForestL,
    },
}

struct Frame {
    graph: Graph,
    config: ReducibleConfig,
    forest: ForestL,
    kept: VertexMap,
}

fn next_config(g: &Graph) -> Result<(ReducibleConfig, ForestL), ForestL> {
    if let Some(c) = local_config(g) {
        return Ok((c, ForestL::empty(g.n())));
    }
    let l = build_forest_l(g).expect("local configurations ruled out");
    match find_reducible(g, &l) {
        Some(c) => Ok((c, l)),
        None => Err(l),
    }
}

/// Recolors the removed set, then ever larger balls around it, by exhaustive
/// search with everything else fixed.
fn repair(g: &Graph, partial: &Coloring, support: &[usize]) -> Option<(Coloring, usize)> {
    let mut dist = vec![usize::MAX; g.n()];
    let mut queue: VecDeque<usize> = support.iter().copied().collect();
    for &s in support {
        dist[s] = 0;
    }
    while let Some(u) = queue.pop_front() {
        for &w in g.neighbors(u) {
            if dist[w] == usize::MAX {
                dist[w] = dist[u] + 1;
                queue.push_back(w);
            }
        }
    }
    let reach = dist
        .iter()
        .copied()
        .filter(|&d| d != usize::MAX)
        .max()
        .unwrap_or(0);
    for radius in 0..=reach {
        let mut fixed = partial.clone();
        for (v, &d) in dist.iter().enumerate() {
            if d <= radius {
                fixed.clear(v);
            }
        }
        if let Some(c) = exact_solve_with(g, O3, &fixed) {
            return Some((c, radius));
        }
    }
    None
}

/// Runs the reduction and extension procedure on `g`.
pub fn solve_io3(g: &Graph) -> Result<Thm1Outcome, Thm1Error> {
    let mut stats = Thm1Stats::default();
    let mut frames: Vec<Frame> = Vec::new();
    let mut cur = g.clone();
    let mut original_ids: Vec<usize> = (0..g.n()).collect();
    while !cur.is_empty() {
        let (config, forest) = match next_config(&cur) {
            Ok(found) => found,
            Err(forest) => {
                return Ok(Thm1Outcome::NotApplicable {
                    residual: cur,
                    original_ids,
                    forest,
                });
            }
        };
        stats.reductions.push(config.kind);
        let (next, kept) = cur.remove_vertices(&config.support);
        original_ids = kept.new_to_old.iter().map(|&o| original_ids[o]).collect();
        frames.push(Frame {
            graph: cur,
            config,
            forest,
            kept,
        });
        cur = next;
    }

    let mut coloring = Coloring::unset(0);
    while let Some(frame) = frames.pop() {
        let step = frames.len();
        let mut partial = Coloring::unset(frame.graph.n());
        for (new, &old) in frame.kept.new_to_old.iter().enumerate() {
            if let Some(col) = coloring.get(new) {
                partial.set(old, col);
            }
        }
        let mut ext = Extender {
            g: &frame.graph,
            l: &frame.forest,
            c: partial.clone(),
            saturated_after_recolor: 0,
        };
        ext.extend(&frame.config);
        stats.saturated_after_recolor += ext.saturated_after_recolor;
        if verify(&frame.graph, &ext.c, O3).is_ok() {
            stats.direct_extensions += 1;
            coloring = ext.c;
        } else {
            let (c, radius) = repair(&frame.graph, &partial, &frame.config.support)
                .ok_or(Thm1Error::ExtensionFailed { step })?;
            stats.repairs += 1;
            stats.max_repair_radius = stats.max_repair_radius.max(radius);
            coloring = c;
        }
    }
    Ok(Thm1Outcome::Colored { coloring, stats })
}

pub const RULE_SONS: &str = "rule1";
pub const RULE_TWO_NEIGHBOURS: &str = "rule2";

/// Initial charge `d − 5/2`; every 3⁺-vertex gives `1/2` to each son in `l`
/// and `1/4` to each 2-neighbour not joined to it by an edge of `l`.
pub fn audit_charges_thm1(g: &Graph, l: &ForestL) -> Result<ChargeLedger, Thm1Error> {
    if let Some(c) = find_reducible(g, l) {
        return Err(Thm1Error::PreconditionViolated(c.to_string()));
    }
    let initial = (0..g.n())
        .map(|v| Ratio::new(2 * g.degree(v) as i64 - 5, 2))
        .collect();
    let mut ledger = ChargeLedger::new(initial);
    for v in 0..g.n() {
        if g.degree(v) < 3 {
            continue;
        }
        if l.contains(v) {
            for &s in l.sons(v) {
                ledger.transfer(v, s, Ratio::new(1, 2), RULE_SONS);
            }
        }
        for &w in g.neighbors(v) {
            if g.degree(w) == 2 && !l.is_edge(v, w) {
                ledger.transfer(v, w, Ratio::new(1, 4), RULE_TWO_NEIGHBOURS);
            }
        }
    }
    Ok(ledger)
}
