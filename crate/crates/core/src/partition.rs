//! (I, O_k) and (I, P_k) partitions: the coloring type, the verifier, an
//! exhaustive backtracking solver used as ground truth, and the saturation
//! query shared by the constructive solvers.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    /// Components of `G[O]` have order at most `k`.
    BoundedOrder,
    /// Components of `G[O]` are paths of order at most `k`.
    BoundedPath,
}

/// Target class: `(I, O_k)` or `(I, P_k)`. With `k = 1` both mean that the two
/// parts are independent sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PartitionSpec {
    pub family: Family,
    pub k: usize,
}

impl PartitionSpec {
    pub fn order(k: usize) -> Self {
        assert!(k >= 1, "k must be positive");
        PartitionSpec {
            family: Family::BoundedOrder,
            k,
        }
    }

    pub fn path(k: usize) -> Self {
        assert!(k >= 1, "k must be positive");
        PartitionSpec {
            family: Family::BoundedPath,
            k,
        }
    }

    pub fn is_path(&self) -> bool {
        self.family == Family::BoundedPath
    }
}

impl fmt::Display for PartitionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::BoundedOrder => write!(f, "o{}", self.k),
            Family::BoundedPath => write!(f, "p{}", self.k),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("invalid partition spec `{0}` (expected o<k> or p<k>)")]
pub struct ParseSpecError(String);

impl FromStr for PartitionSpec {
    type Err = ParseSpecError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ParseSpecError(s.to_string());
        let s = s.trim().to_ascii_lowercase();
        let (family, rest) = match s.split_at_checked(1).ok_or_else(bad)? {
            ("o", r) => (Family::BoundedOrder, r),
            ("p", r) => (Family::BoundedPath, r),
            _ => return Err(bad()),
        };
        let k: usize = rest.parse().map_err(|_| bad())?;
        if k == 0 {
            return Err(bad());
        }
        Ok(PartitionSpec { family, k })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Color {
    I,
    O,
}

impl Color {
    pub fn other(self) -> Color {
        match self {
            Color::I => Color::O,
            Color::O => Color::I,
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Color::I => "I",
            Color::O => "O",
        })
    }
}

/// Partial map from vertices to `{I, O}`; `None` is an unset vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Coloring(Vec<Option<Color>>);

impl Coloring {
    pub fn unset(n: usize) -> Self {
        Coloring(vec![None; n])
    }

    pub fn from_total(colors: Vec<Color>) -> Self {
        Coloring(colors.into_iter().map(Some).collect())
    }

    /// Builds a total coloring on `n` vertices with the given `I` set.
    pub fn with_i_set(n: usize, i_set: &[usize]) -> Self {
        let mut c = Coloring(vec![Some(Color::O); n]);
        for &v in i_set {
            c.0[v] = Some(Color::I);
        }
        c
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, v: usize) -> Option<Color> {
        self.0[v]
    }

    pub fn is(&self, v: usize, c: Color) -> bool {
        self.0[v] == Some(c)
    }

    pub fn set(&mut self, v: usize, c: Color) {
        self.0[v] = Some(c);
    }

    pub fn clear(&mut self, v: usize) {
        self.0[v] = None;
    }

    pub fn is_total(&self) -> bool {
        self.0.iter().all(Option::is_some)
    }

    pub fn as_slice(&self) -> &[Option<Color>] {
        &self.0
    }

    pub fn vertices(&self, c: Color) -> Vec<usize> {
        (0..self.0.len())
            .filter(|&v| self.0[v] == Some(c))
            .collect()
    }

    pub fn push(&mut self, c: Option<Color>) {
        self.0.push(c);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ViolationKind {
    AdjacentIPair,
    OversizeComponent,
    NonPathComponent,
    UnsetVertex,
}

/// A reason a coloring is not a valid partition, with the vertices showing it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub witness: Vec<usize>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} {:?}", self.kind, self.witness)
    }
}

/// Component of `v` in `G[O]`.
pub fn o_component(g: &Graph, c: &Coloring, v: usize) -> Vec<usize> {
    let mut seen = vec![false; g.n()];
    seen[v] = true;
    let mut comp = vec![v];
    let mut i = 0;
    while i < comp.len() {
        let u = comp[i];
        i += 1;
        for &w in g.neighbors(u) {
            if !seen[w] && c.is(w, Color::O) {
                seen[w] = true;
                comp.push(w);
            }
        }
    }
    comp.sort_unstable();
    comp
}

/// Checks the coloring against `spec`, reporting the first problem found.
/// Unset vertices are reported before adjacency, adjacency before component
/// problems.
pub fn verify(g: &Graph, c: &Coloring, spec: PartitionSpec) -> Result<(), Violation> {
    if let Some(v) = (0..g.n()).find(|&v| c.get(v).is_none()) {
        return Err(Violation {
            kind: ViolationKind::UnsetVertex,
            witness: vec![v],
        });
    }
    verify_colored_part(g, c, spec)
}

/// Like [`verify`] but only looks at the subgraph induced by colored vertices.
pub fn verify_colored_part(g: &Graph, c: &Coloring, spec: PartitionSpec) -> Result<(), Violation> {
    for (u, v) in g.edges() {
        if c.is(u, Color::I) && c.is(v, Color::I) {
            return Err(Violation {
                kind: ViolationKind::AdjacentIPair,
                witness: vec![u, v],
            });
        }
    }
    let o = c.vertices(Color::O);
    for comp in g.components(&o) {
        if comp.len() > spec.k {
            return Err(Violation {
                kind: ViolationKind::OversizeComponent,
                witness: comp,
            });
        }
        if spec.is_path() {
            let edges = g.induced_edge_count(&comp);
            let max_deg = comp
                .iter()
                .map(|&v| {
                    g.neighbors(v)
                        .iter()
                        .filter(|&&w| c.is(w, Color::O))
                        .count()
                })
                .max()
                .unwrap_or(0);
            if edges + 1 != comp.len() || max_deg > 2 {
                return Err(Violation {
                    kind: ViolationKind::NonPathComponent,
                    witness: comp,
                });
            }
        }
    }
    Ok(())
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("search budget of {0} nodes exhausted")]
pub struct BudgetExceeded(pub u64);

#[derive(Clone, Copy)]
enum Undo {
    Color(usize),
    Union { child: usize, root: usize },
    ODeg(usize),
}

/// A vertex with its open colors `(I, O)`.
type Pick = (usize, (bool, bool));
/// Open colors, then colored neighbours and degree reversed; smaller wins.
type PickKey = (usize, usize, usize);

/// Backtracking search for valid total colorings extending a partial one.
///
/// O-components are tracked by a union-find without path compression whose
/// merges are undone on backtrack; for path specs the O-degree of every
/// vertex is tracked too, and a merge of two vertices already in one
/// component (a cycle) is refused. The next vertex is the one with the fewest
/// remaining colors (forced vertices first), ties broken by most colored
/// neighbours, then by degree, then by id; `I` is tried before `O`.
pub struct ExactSolver<'g> {
    g: &'g Graph,
    spec: PartitionSpec,
    color: Vec<Option<Color>>,
    parent: Vec<usize>,
    size: Vec<usize>,
    odeg: Vec<usize>,
    trail: Vec<Undo>,
    nodes: u64,
    node_limit: Option<u64>,
}

impl<'g> ExactSolver<'g> {
    pub fn new(g: &'g Graph, spec: PartitionSpec) -> Self {
        let n = g.n();
        ExactSolver {
            g,
            spec,
            color: vec![None; n],
            parent: (0..n).collect(),
            size: vec![1; n],
            odeg: vec![0; n],
            trail: Vec::new(),
            nodes: 0,
            node_limit: None,
        }
    }

    pub fn with_node_limit(mut self, limit: u64) -> Self {
        self.node_limit = Some(limit);
        self
    }

    /// Search nodes visited so far.
    pub fn nodes(&self) -> u64 {
        self.nodes
    }

    fn find(&self, mut v: usize) -> usize {
        while self.parent[v] != v {
            v = self.parent[v];
        }
        v
    }

    fn allows(&self, v: usize, c: Color) -> bool {
        match c {
            Color::I => !self
                .g
                .neighbors(v)
                .iter()
                .any(|&w| self.color[w] == Some(Color::I)),
            Color::O => {
                let path = self.spec.is_path();
                let mut roots = [usize::MAX; 8];
                let mut nroots = 0;
                let mut spill: Vec<usize> = Vec::new();
                let mut total = 1;
                let mut count = 0;
                for &w in self.g.neighbors(v) {
                    if self.color[w] != Some(Color::O) {
                        continue;
                    }
                    count += 1;
                    if path && (count > 2 || self.odeg[w] >= 2) {
                        return false;
                    }
                    let r = self.find(w);
                    let seen = roots[..nroots].contains(&r) || spill.contains(&r);
                    if seen {
                        if path {
                            return false;
                        }
                    } else {
                        if nroots < roots.len() {
                            roots[nroots] = r;
                            nroots += 1;
                        } else {
                            spill.push(r);
                        }
                        total += self.size[r];
                        if total > self.spec.k {
                            return false;
                        }
                    }
                }
                total <= self.spec.k
            }
        }
    }

    fn assign(&mut self, v: usize, c: Color) {
        self.color[v] = Some(c);
        self.trail.push(Undo::Color(v));
        if c == Color::O {
            for i in 0..self.g.neighbors(v).len() {
                let w = self.g.neighbors(v)[i];
                if self.color[w] != Some(Color::O) {
                    continue;
                }
                self.odeg[w] += 1;
                self.odeg[v] += 1;
                self.trail.push(Undo::ODeg(w));
                self.trail.push(Undo::ODeg(v));
                let (a, b) = (self.find(v), self.find(w));
                if a != b {
                    let (child, root) = if self.size[a] < self.size[b] {
                        (a, b)
                    } else {
                        (b, a)
                    };
                    self.parent[child] = root;
                    self.size[root] += self.size[child];
                    self.trail.push(Undo::Union { child, root });
                }
            }
        }
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            match self.trail.pop().expect("trail entry") {
                Undo::Color(v) => self.color[v] = None,
                Undo::ODeg(v) => self.odeg[v] -= 1,
                Undo::Union { child, root } => {
                    self.parent[child] = child;
                    self.size[root] -= self.size[child];
                }
            }
        }
    }

    fn domain(&self, v: usize) -> (bool, bool) {
        (self.allows(v, Color::I), self.allows(v, Color::O))
    }

    fn neighbours_alive(&self, v: usize) -> bool {
        self.g.neighbors(v).iter().all(|&u| {
            self.color[u].is_some() || {
                let (i, o) = self.domain(u);
                i || o
            }
        })
    }

    fn search(
        &mut self,
        on_solution: &mut dyn FnMut(&Coloring) -> bool,
    ) -> Result<bool, BudgetExceeded> {
        self.nodes += 1;
        if let Some(limit) = self.node_limit {
            if self.nodes > limit {
                return Err(BudgetExceeded(limit));
            }
        }
        let (v, (can_i, can_o)) = match self.pick_in(0..self.g.n()) {
            Err(()) => return Ok(false),
            Ok(None) => {
                let c = Coloring(self.color.clone());
                return Ok(!on_solution(&c));
            }
            Ok(Some(choice)) => choice,
        };
        for (c, ok) in [(Color::I, can_i), (Color::O, can_o)] {
            if !ok {
                continue;
            }
            let mark = self.trail.len();
            self.assign(v, c);
            if self.neighbours_alive(v) && self.search(on_solution)? {
                return Ok(true);
            }
            self.undo_to(mark);
        }
        Ok(false)
    }

    /// Splits the unassigned vertices of `region` into groups that cannot
    /// interact: no edge joins two groups and no assigned O-component is
    /// adjacent to two groups.
    fn independent_parts(&self, region: &[usize]) -> Vec<Vec<usize>> {
        let n = self.g.n();
        let mut slot = vec![usize::MAX; n];
        for (i, &v) in region.iter().enumerate() {
            slot[v] = i;
        }
        let mut link: Vec<usize> = (0..region.len()).collect();
        fn root(link: &mut [usize], mut i: usize) -> usize {
            while link[i] != i {
                link[i] = link[link[i]];
                i = link[i];
            }
            i
        }
        let mut owner = vec![usize::MAX; n];
        for (i, &v) in region.iter().enumerate() {
            for &w in self.g.neighbors(v) {
                let j = match self.color[w] {
                    None => slot[w],
                    Some(Color::O) => {
                        let r = self.find(w);
                        if owner[r] == usize::MAX {
                            owner[r] = i;
                        }
                        owner[r]
                    }
                    Some(Color::I) => continue,
                };
                let (a, b) = (root(&mut link, i), root(&mut link, j));
                if a != b {
                    link[a.max(b)] = a.min(b);
                }
            }
        }
        let mut parts: Vec<Vec<usize>> = Vec::new();
        let mut index = vec![usize::MAX; region.len()];
        for (i, &v) in region.iter().enumerate() {
            let r = root(&mut link, i);
            if index[r] == usize::MAX {
                index[r] = parts.len();
                parts.push(Vec::new());
            }
            parts[index[r]].push(v);
        }
        parts
    }

    /// Picks the next vertex of `region`; `Err(())` if some vertex has no
    /// color left.
    fn pick_in(&self, region: impl IntoIterator<Item = usize>) -> Result<Option<Pick>, ()> {
        let mut best: Option<(Pick, PickKey)> = None;
        for v in region {
            if self.color[v].is_some() {
                continue;
            }
            let dom = self.domain(v);
            let width = usize::from(dom.0) + usize::from(dom.1);
            if width == 0 {
                return Err(());
            }
            let colored = self
                .g
                .neighbors(v)
                .iter()
                .filter(|&&w| self.color[w].is_some())
                .count();
            // smaller key wins
            let key = (width, usize::MAX - colored, usize::MAX - self.g.degree(v));
            if best.as_ref().is_none_or(|b| key < b.1) {
                best = Some(((v, dom), key));
                if width == 1 && colored > 0 {
                    break;
                }
            }
        }
        Ok(best.map(|(p, _)| p))
    }

    /// First-solution search over the unassigned vertices of `region`,
    /// solving independent parts one after the other. A part without a
    /// solution fails the whole region, so choices made in other parts are
    /// never revisited.
    fn search_first(&mut self, region: Vec<usize>) -> Result<bool, BudgetExceeded> {
        self.nodes += 1;
        if let Some(limit) = self.node_limit {
            if self.nodes > limit {
                return Err(BudgetExceeded(limit));
            }
        }
        let region: Vec<usize> = region
            .into_iter()
            .filter(|&v| self.color[v].is_none())
            .collect();
        let mut parts = self.independent_parts(&region);
        if parts.len() > 1 {
            parts.sort_by_key(Vec::len);
            let mark = self.trail.len();
            for part in parts {
                if !self.search_first(part)? {
                    self.undo_to(mark);
                    return Ok(false);
                }
            }
            return Ok(true);
        }
        let (v, (can_i, can_o)) = match self.pick_in(region.iter().copied()) {
            Err(()) => return Ok(false),
            Ok(None) => return Ok(true),
            Ok(Some(choice)) => choice,
        };
        for (c, ok) in [(Color::I, can_i), (Color::O, can_o)] {
            if !ok {
                continue;
            }
            let mark = self.trail.len();
            self.assign(v, c);
            if self.neighbours_alive(v) && self.search_first(region.clone())? {
                return Ok(true);
            }
            self.undo_to(mark);
        }
        Ok(false)
    }

    fn load(&mut self, fixed: &Coloring) -> bool {
        assert_eq!(fixed.len(), self.g.n(), "fixed coloring size mismatch");
        for v in 0..self.g.n() {
            if let Some(c) = fixed.get(v) {
                if !self.allows(v, c) {
                    return false;
                }
                self.assign(v, c);
            }
        }
        true
    }

    /// Calls `on_solution` for every valid total coloring agreeing with
    /// `fixed`, until it returns `false`.
    pub fn enumerate(
        &mut self,
        fixed: &Coloring,
        on_solution: &mut dyn FnMut(&Coloring) -> bool,
    ) -> Result<(), BudgetExceeded> {
        self.undo_to(0);
        if self.load(fixed) {
            self.search(on_solution)?;
        }
        self.undo_to(0);
        Ok(())
    }

    /// First valid total coloring extending `fixed`, if any.
    pub fn solve(&mut self, fixed: &Coloring) -> Result<Option<Coloring>, BudgetExceeded> {
        self.undo_to(0);
        let mut found = None;
        if self.load(fixed) {
            let region: Vec<usize> = (0..self.g.n())
                .filter(|&v| self.color[v].is_none())
                .collect();
            let outcome = self.search_first(region);
            if let Ok(true) = outcome {
                found = Some(Coloring(self.color.clone()));
            }
            self.undo_to(0);
            outcome?;
        }
        self.undo_to(0);
        Ok(found)
    }
}

/// A valid coloring, or `None` when exhaustive search proves none exists.
pub fn exact_solve(g: &Graph, spec: PartitionSpec) -> Option<Coloring> {
    exact_solve_with(g, spec, &Coloring::unset(g.n()))
}

/// [`exact_solve`] restricted to colorings that agree with `fixed`.
pub fn exact_solve_with(g: &Graph, spec: PartitionSpec, fixed: &Coloring) -> Option<Coloring> {
    ExactSolver::new(g, spec)
        .solve(fixed)
        .expect("no node limit")
}

/// Every valid total coloring agreeing with `fixed`.
pub fn all_colorings(g: &Graph, spec: PartitionSpec, fixed: &Coloring) -> Vec<Coloring> {
    let mut out = Vec::new();
    ExactSolver::new(g, spec)
        .enumerate(fixed, &mut |c| {
            out.push(c.clone());
            true
        })
        .expect("no node limit");
    out
}

/// Subset of `{I, O}`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ColorSet {
    pub i: bool,
    pub o: bool,
}

impl ColorSet {
    pub const BOTH: ColorSet = ColorSet { i: true, o: true };
    pub const ONLY_I: ColorSet = ColorSet { i: true, o: false };
    pub const ONLY_O: ColorSet = ColorSet { i: false, o: true };
    pub const NONE: ColorSet = ColorSet { i: false, o: false };

    pub fn contains(&self, c: Color) -> bool {
        match c {
            Color::I => self.i,
            Color::O => self.o,
        }
    }

    pub fn is_empty(&self) -> bool {
        !self.i && !self.o
    }
}

/// Colors `v` takes across all valid total colorings of `g`.
pub fn feasible_colors(g: &Graph, v: usize, spec: PartitionSpec) -> ColorSet {
    let mut solver = ExactSolver::new(g, spec);
    let mut probe = |c: Color| {
        let mut fixed = Coloring::unset(g.n());
        fixed.set(v, c);
        solver.solve(&fixed).expect("no node limit").is_some()
    };
    ColorSet {
        i: probe(Color::I),
        o: probe(Color::O),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Saturation {
    Saturated,
    Unsaturated,
    Intermediate,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("vertex {0} is not colored O")]
pub struct NotColoredO(pub usize);

/// Saturation of an O-vertex. Unsaturated means no O-neighbour. For `k = 3`
/// the local form applies: two O-neighbours, or an O-neighbour that has two
/// O-neighbours. Otherwise saturated means the O-component has order at
/// least `k`.
pub fn saturation(
    g: &Graph,
    c: &Coloring,
    v: usize,
    spec: PartitionSpec,
) -> Result<Saturation, NotColoredO> {
    if !c.is(v, Color::O) {
        return Err(NotColoredO(v));
    }
    let o_nb: Vec<usize> = g
        .neighbors(v)
        .iter()
        .copied()
        .filter(|&w| c.is(w, Color::O))
        .collect();
    if o_nb.is_empty() {
        return Ok(Saturation::Unsaturated);
    }
    let saturated = if spec.k == 3 {
        o_nb.len() >= 2
            || o_nb.iter().any(|&w| {
                g.neighbors(w)
                    .iter()
                    .filter(|&&x| c.is(x, Color::O))
                    .count()
                    >= 2
            })
    } else {
        o_component(g, c, v).len() >= spec.k
    };
    Ok(if saturated {
        Saturation::Saturated
    } else {
        Saturation::Intermediate
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named::*;

    const O3: PartitionSpec = PartitionSpec {
        family: Family::BoundedOrder,
        k: 3,
    };
    const P3: PartitionSpec = PartitionSpec {
        family: Family::BoundedPath,
        k: 3,
    };

    #[test]
    fn verify_examples() {
        let c5 = cycle(5);
        // I = {v1, v3} = ids {0, 2}
        assert_eq!(verify(&c5, &Coloring::with_i_set(5, &[0, 2]), O3), Ok(()));

        let k4 = complete(4);
        assert_eq!(
            verify(&k4, &Coloring::with_i_set(4, &[0, 1]), O3),
            Err(Violation {
                kind: ViolationKind::AdjacentIPair,
                witness: vec![0, 1]
            })
        );
        let one_i = Coloring::with_i_set(4, &[0]);
        assert_eq!(
            verify(&k4, &one_i, P3),
            Err(Violation {
                kind: ViolationKind::NonPathComponent,
                witness: vec![1, 2, 3]
            })
        );
        assert_eq!(verify(&k4, &one_i, O3), Ok(()));
        assert_eq!(
            verify(&k4, &Coloring::unset(4), O3).unwrap_err().kind,
            ViolationKind::UnsetVertex
        );
        assert_eq!(
            verify(&path(4), &Coloring::with_i_set(4, &[]), O3)
                .unwrap_err()
                .kind,
            ViolationKind::OversizeComponent
        );
    }

    #[test]
    fn exact_solve_examples() {
        let k4 = complete(4);
        assert_eq!(exact_solve(&k4, P3), None);
        let c = exact_solve(&k4, O3).unwrap();
        assert_eq!(verify(&k4, &c, O3), Ok(()));
        assert_eq!(c.vertices(Color::I).len(), 1);

        let e3 = Graph::empty(3);
        for spec in [O3, P3, PartitionSpec::order(1)] {
            assert_eq!(
                exact_solve(&e3, spec),
                Some(Coloring::with_i_set(3, &[0, 1, 2]))
            );
        }
    }

    #[test]
    fn k_one_means_proper_two_coloring() {
        let o1 = PartitionSpec::order(1);
        assert!(exact_solve(&cycle(6), o1).is_some());
        assert!(exact_solve(&cycle(5), o1).is_none());
        assert!(exact_solve(&cycle(5), PartitionSpec::path(1)).is_none());
    }

    #[test]
    fn feasible_colors_examples() {
        assert_eq!(feasible_colors(&Graph::empty(1), 0, P3), ColorSet::BOTH);
        let k4 = complete(4);
        for v in 0..4 {
            assert_eq!(feasible_colors(&k4, v, O3), ColorSet::BOTH);
            assert_eq!(feasible_colors(&k4, v, P3), ColorSet::NONE);
        }
    }

    #[test]
    fn saturation_examples() {
        let p3 = path(3);
        let all_o = Coloring::with_i_set(3, &[]);
        assert_eq!(saturation(&p3, &all_o, 0, O3), Ok(Saturation::Saturated));
        assert_eq!(
            saturation(&p3, &all_o, 0, PartitionSpec::order(4)),
            Ok(Saturation::Intermediate)
        );
        let lone = Coloring::with_i_set(1, &[]);
        assert_eq!(
            saturation(&Graph::empty(1), &lone, 0, O3),
            Ok(Saturation::Unsaturated)
        );
        let edge = Coloring::with_i_set(3, &[2]);
        assert_eq!(saturation(&p3, &edge, 0, O3), Ok(Saturation::Intermediate));
        assert_eq!(saturation(&p3, &edge, 1, O3), Ok(Saturation::Intermediate));
        assert_eq!(saturation(&p3, &edge, 2, O3), Err(NotColoredO(2)));
    }

    #[test]
    fn spec_text_round_trip() {
        assert_eq!("o3".parse::<PartitionSpec>().unwrap(), O3);
        assert_eq!("P3".parse::<PartitionSpec>().unwrap(), P3);
        assert_eq!(P3.to_string(), "p3");
        assert!("q3".parse::<PartitionSpec>().is_err());
        assert!("o0".parse::<PartitionSpec>().is_err());
    }

    #[test]
    fn enumeration_counts_small_cases() {
        // P2 under O3: II invalid, every other assignment valid.
        assert_eq!(all_colorings(&path(2), O3, &Coloring::unset(2)).len(), 3);
        // triangle under P3: exactly one I (3 ways) or none (a cycle, invalid)
        assert_eq!(all_colorings(&cycle(3), P3, &Coloring::unset(3)).len(), 3);
    }
}
