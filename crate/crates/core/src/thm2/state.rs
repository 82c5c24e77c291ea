use std::collections::hash_map::DefaultHasher;
use std::collections::BTreeSet;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};

use super::Thm2Error;
use crate::graph::Graph;
use crate::partition::{Color, Coloring};

/// A cluster set: its supervisor (if any) and members.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cluster {
    pub supervisor: Option<usize>,
    pub members: Vec<usize>,
}

/// Handle for a journal position. Tokens nest: only the innermost live token
/// may be released.
#[derive(Debug, PartialEq, Eq)]
pub struct Token {
    id: u64,
    colors: usize,
    structure: usize,
}

#[derive(Clone, Debug)]
enum Undo {
    Mark { v: usize, prev: u8 },
    Cluster { v: usize, prev: Option<Vec<usize>> },
    FreeCluster,
    Giving { v: usize, prev: Option<usize> },
    Neutral { edge: (usize, usize) },
}

/// Serializable view of a [`RepairState`], without the graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateSnapshot {
    pub k: usize,
    pub coloring: Coloring,
    pub marks: Vec<u8>,
    pub clusters: Vec<Cluster>,
    /// `(x, w)` for each giving edge `e(x) = xw`.
    pub giving: Vec<(usize, usize)>,
    pub neutral: Vec<(usize, usize)>,
}

/// Coloring, marks, cluster sets, giving and neutral edges, with an undo
/// journal. Colors and the rest are journaled separately so that either can
/// be reset on its own.
#[derive(Clone, Debug)]
pub struct RepairState {
    pub(crate) g: Graph,
    pub(crate) k: usize,
    pub(crate) coloring: Vec<Color>,
    pub(crate) marks: Vec<u8>,
    pub(crate) supervised: Vec<Option<Vec<usize>>>,
    pub(crate) free_clusters: Vec<Vec<usize>>,
    pub(crate) giving: Vec<Option<usize>>,
    pub(crate) neutral: BTreeSet<(usize, usize)>,
    color_log: Vec<(usize, Color)>,
    structure_log: Vec<Undo>,
    live: Vec<u64>,
    next_token: u64,
    /// Run the invariant monitors inside the procedures.
    pub monitors: bool,
    /// Monitor findings, in order.
    pub violations: Vec<String>,
}

fn edge(u: usize, v: usize) -> (usize, usize) {
    (u.min(v), u.max(v))
}

impl RepairState {
    /// Fresh state: every vertex O, nothing marked.
    pub fn new(g: Graph, k: usize) -> Self {
        let n = g.n();
        RepairState {
            g,
            k,
            coloring: vec![Color::O; n],
            marks: vec![0; n],
            supervised: vec![None; n],
            free_clusters: Vec::new(),
            giving: vec![None; n],
            neutral: BTreeSet::new(),
            color_log: Vec::new(),
            structure_log: Vec::new(),
            live: Vec::new(),
            next_token: 0,
            monitors: cfg!(debug_assertions),
            violations: Vec::new(),
        }
    }

    pub fn graph(&self) -> &Graph {
        &self.g
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn color(&self, v: usize) -> Color {
        self.coloring[v]
    }

    pub fn coloring(&self) -> Coloring {
        Coloring::from_total(self.coloring.clone())
    }

    pub fn mark(&self, v: usize) -> u8 {
        self.marks[v]
    }

    /// `S(v)`, if it has been set.
    pub fn cluster_of(&self, v: usize) -> Option<&[usize]> {
        self.supervised[v].as_deref()
    }

    pub fn giving_edge(&self, v: usize) -> Option<usize> {
        self.giving[v]
    }

    pub fn is_neutral(&self, u: usize, v: usize) -> bool {
        self.neutral.contains(&edge(u, v))
    }

    pub fn neutral_edges(&self) -> Vec<(usize, usize)> {
        self.neutral.iter().copied().collect()
    }

    /// All cluster sets: supervised ones by supervisor id, then the
    /// supervisor-less ones in creation order.
    pub fn clusters(&self) -> Vec<Cluster> {
        let mut out: Vec<Cluster> = (0..self.g.n())
            .filter_map(|v| {
                self.supervised[v].as_ref().map(|m| Cluster {
                    supervisor: Some(v),
                    members: m.clone(),
                })
            })
            .collect();
        out.extend(self.free_clusters.iter().map(|m| Cluster {
            supervisor: None,
            members: m.clone(),
        }));
        out
    }

    /// Supervisors of `v`, ascending.
    pub fn supervisors(&self, v: usize) -> Vec<usize> {
        (0..self.g.n())
            .filter(|&s| self.supervised[s].as_ref().is_some_and(|m| m.contains(&v)))
            .collect()
    }

    /// Replaces the coloring outright, outside any journal scope.
    pub(crate) fn reset_coloring(&mut self, c: Vec<Color>) -> Result<(), Thm2Error> {
        if !self.live.is_empty() {
            return Err(Thm2Error::TokenOrderViolation);
        }
        self.coloring = c;
        self.color_log.clear();
        self.structure_log.clear();
        Ok(())
    }

    pub fn set_color(&mut self, v: usize, c: Color) {
        if self.coloring[v] != c {
            self.color_log.push((v, self.coloring[v]));
            self.coloring[v] = c;
        }
    }

    pub fn set_mark(&mut self, v: usize, m: u8) {
        debug_assert!(m <= 2);
        if self.marks[v] != m {
            self.structure_log.push(Undo::Mark {
                v,
                prev: self.marks[v],
            });
            self.marks[v] = m;
        }
    }

    pub fn set_cluster(&mut self, v: usize, members: Vec<usize>) {
        let prev = self.supervised[v].replace(members);
        self.structure_log.push(Undo::Cluster { v, prev });
    }

    pub fn add_free_cluster(&mut self, members: Vec<usize>) {
        self.free_clusters.push(members);
        self.structure_log.push(Undo::FreeCluster);
    }

    pub fn set_giving(&mut self, x: usize, w: usize) {
        let prev = self.giving[x].replace(w);
        self.structure_log.push(Undo::Giving { v: x, prev });
    }

    pub fn add_neutral(&mut self, u: usize, v: usize) {
        if self.neutral.insert(edge(u, v)) {
            self.structure_log.push(Undo::Neutral { edge: edge(u, v) });
        }
    }

    pub fn checkpoint(&mut self) -> Token {
        let id = self.next_token;
        self.next_token += 1;
        self.live.push(id);
        Token {
            id,
            colors: self.color_log.len(),
            structure: self.structure_log.len(),
        }
    }

    fn position(&self, t: &Token) -> Result<usize, Thm2Error> {
        self.live
            .iter()
            .position(|&id| id == t.id)
            .ok_or(Thm2Error::TokenOrderViolation)
    }

    fn undo_colors(&mut self, len: usize) {
        while self.color_log.len() > len {
            let (v, c) = self.color_log.pop().expect("color entry");
            self.coloring[v] = c;
        }
    }

    fn undo_structure(&mut self, len: usize) {
        while self.structure_log.len() > len {
            match self.structure_log.pop().expect("structure entry") {
                Undo::Mark { v, prev } => self.marks[v] = prev,
                Undo::Cluster { v, prev } => self.supervised[v] = prev,
                Undo::FreeCluster => {
                    self.free_clusters.pop();
                }
                Undo::Giving { v, prev } => self.giving[v] = prev,
                Undo::Neutral { edge } => {
                    self.neutral.remove(&edge);
                }
            }
        }
    }

    /// Restores colors and structure to `t` and ends its scope, along with
    /// any scope opened inside it.
    pub fn rollback(&mut self, t: Token) -> Result<(), Thm2Error> {
        let at = self.position(&t)?;
        self.live.truncate(at);
        self.undo_colors(t.colors);
        self.undo_structure(t.structure);
        Ok(())
    }

    /// Restores only the colors; the scope stays open.
    pub fn rollback_colors(&mut self, t: &Token) -> Result<(), Thm2Error> {
        let at = self.position(t)?;
        self.live.truncate(at + 1);
        self.undo_colors(t.colors);
        Ok(())
    }

    /// Restores marks, cluster sets, giving and neutral edges; the scope
    /// stays open.
    pub fn rollback_marks(&mut self, t: &Token) -> Result<(), Thm2Error> {
        let at = self.position(t)?;
        self.live.truncate(at + 1);
        self.undo_structure(t.structure);
        Ok(())
    }

    /// Ends the innermost scope, keeping its changes.
    pub fn release(&mut self, t: Token) -> Result<(), Thm2Error> {
        if self.live.last() != Some(&t.id) {
            return Err(Thm2Error::TokenOrderViolation);
        }
        self.live.pop();
        Ok(())
    }

    pub fn snapshot(&self) -> StateSnapshot {
        StateSnapshot {
            k: self.k,
            coloring: self.coloring(),
            marks: self.marks.clone(),
            clusters: self.clusters(),
            giving: (0..self.g.n())
                .filter_map(|x| self.giving[x].map(|w| (x, w)))
                .collect(),
            neutral: self.neutral_edges(),
        }
    }

    /// Rebuilds a state on `g` from a snapshot; the coloring must be total.
    pub fn from_snapshot(g: Graph, s: &StateSnapshot) -> Result<Self, Thm2Error> {
        let n = g.n();
        let bad = |msg: &str| Thm2Error::BadState(msg.to_string());
        if s.coloring.len() != n || s.marks.len() != n {
            return Err(bad("vertex count does not match the graph"));
        }
        if !s.coloring.is_total() {
            return Err(bad("coloring must be total"));
        }
        let mut st = RepairState::new(g, s.k);
        st.coloring = s
            .coloring
            .as_slice()
            .iter()
            .map(|c| c.expect("total"))
            .collect();
        if s.marks.iter().any(|&m| m > 2) {
            return Err(bad("marks must be 0, 1 or 2"));
        }
        st.marks = s.marks.clone();
        let in_range = |v: usize| v < n;
        for c in &s.clusters {
            if !c.members.iter().all(|&v| in_range(v)) {
                return Err(bad("cluster member out of range"));
            }
            match c.supervisor {
                Some(v) if !in_range(v) => return Err(bad("supervisor out of range")),
                Some(v) if st.supervised[v].is_some() => {
                    return Err(bad("vertex supervises two cluster sets"))
                }
                Some(v) => st.supervised[v] = Some(c.members.clone()),
                None => st.free_clusters.push(c.members.clone()),
            }
        }
        for &(x, w) in &s.giving {
            if !in_range(x) || !in_range(w) || !st.g.has_edge(x, w) {
                return Err(bad("giving edge is not an edge"));
            }
            st.giving[x] = Some(w);
        }
        for &(u, v) in &s.neutral {
            if !in_range(u) || !in_range(v) || !st.g.has_edge(u, v) {
                return Err(bad("neutral edge is not an edge"));
            }
            st.neutral.insert(edge(u, v));
        }
        Ok(st)
    }

    /// Hash of the coloring alone.
    pub fn coloring_hash(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.coloring.hash(&mut h);
        h.finish()
    }

    /// Hash of marks, cluster sets, giving and neutral edges.
    pub fn structure_hash(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.marks.hash(&mut h);
        self.supervised.hash(&mut h);
        self.free_clusters.hash(&mut h);
        self.giving.hash(&mut h);
        self.neutral.hash(&mut h);
        h.finish()
    }

    /// Hash of the whole observable state.
    pub fn fingerprint(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.coloring_hash().hash(&mut h);
        self.structure_hash().hash(&mut h);
        h.finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named::path;

    fn mutate(s: &mut RepairState, salt: usize) {
        s.set_color(salt % 4, Color::I);
        s.set_mark((salt + 1) % 4, 2);
        s.set_cluster(salt % 4, vec![(salt + 1) % 4]);
        s.set_giving(1, 2);
        s.add_neutral(2, 3);
        s.add_free_cluster(vec![0]);
    }

    #[test]
    fn rollback_restores_everything() {
        let mut s = RepairState::new(path(4), 2);
        let before = s.fingerprint();
        let t = s.checkpoint();
        mutate(&mut s, 0);
        assert_ne!(s.fingerprint(), before);
        s.rollback(t).unwrap();
        assert_eq!(s.fingerprint(), before);
        assert_eq!(s.snapshot(), RepairState::new(path(4), 2).snapshot());
    }

    #[test]
    fn nested_scopes() {
        let mut s = RepairState::new(path(4), 2);
        let before = s.fingerprint();
        let a = s.checkpoint();
        mutate(&mut s, 1);
        let b = s.checkpoint();
        mutate(&mut s, 2);
        s.rollback(b).unwrap();
        mutate(&mut s, 3);
        s.rollback(a).unwrap();
        assert_eq!(s.fingerprint(), before);
    }

    #[test]
    fn stale_tokens_are_refused() {
        let mut s = RepairState::new(path(4), 2);
        let a = s.checkpoint();
        let b = s.checkpoint();
        assert_eq!(
            s.release(Token {
                id: a.id,
                colors: 0,
                structure: 0
            }),
            Err(Thm2Error::TokenOrderViolation)
        );
        s.rollback(a).unwrap();
        assert_eq!(s.rollback(b), Err(Thm2Error::TokenOrderViolation));
    }

    #[test]
    fn partial_rollbacks_are_independent() {
        let mut s = RepairState::new(path(4), 2);
        let t = s.checkpoint();
        s.set_color(0, Color::I);
        s.set_mark(1, 2);
        s.rollback_marks(&t).unwrap();
        assert_eq!((s.color(0), s.mark(1)), (Color::I, 0));
        s.set_mark(2, 1);
        s.rollback_colors(&t).unwrap();
        assert_eq!((s.color(0), s.mark(2)), (Color::O, 1));
        s.release(t).unwrap();
        assert_eq!(s.mark(2), 1);
    }

    #[test]
    fn snapshot_round_trip() {
        let mut s = RepairState::new(path(4), 3);
        s.set_mark(1, 2);
        s.set_mark(2, 2);
        s.set_cluster(1, vec![2]);
        s.set_giving(2, 3);
        s.add_neutral(0, 1);
        s.add_free_cluster(vec![3]);
        let snap = s.snapshot();
        let json = serde_json::to_string(&snap).unwrap();
        let back: StateSnapshot = serde_json::from_str(&json).unwrap();
        let rebuilt = RepairState::from_snapshot(path(4), &back).unwrap();
        assert_eq!(rebuilt.fingerprint(), s.fingerprint());
        let mut broken = snap.clone();
        broken.giving.push((0, 3));
        assert!(RepairState::from_snapshot(path(4), &broken).is_err());
    }
}
