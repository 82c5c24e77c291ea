//! Undirected simple graphs with stable vertex ids, plus the structural
//! queries the solvers lean on: girth, degree-2 chains and induced components.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Untrusted annotations carried along with a graph. No algorithm reads them.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metadata {
    pub claimed_planar: bool,
    pub claimed_girth: Option<usize>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("loop edge at vertex {0}")]
    LoopEdge(usize),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),
    #[error("vertex id {id} out of range for {n} vertices")]
    IdOutOfRange { id: usize, n: usize },
}

/// Simple undirected graph on vertices `0..n`; every adjacency list is sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    #[serde(default)]
    pub meta: Metadata,
}

/// Translation between the ids of a graph and one of its induced subgraphs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexMap {
    pub new_to_old: Vec<usize>,
    pub old_to_new: Vec<Option<usize>>,
}

impl VertexMap {
    pub fn to_old(&self, v: usize) -> usize {
        self.new_to_old[v]
    }

    pub fn to_new(&self, v: usize) -> Option<usize> {
        self.old_to_new.get(v).copied().flatten()
    }
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            meta: Metadata::default(),
        }
    }

    /// Builds a graph, rejecting loops, repeated edges (in either orientation)
    /// and ids outside `0..n`.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_vertex(&mut self) -> usize {
        self.adj.push(Vec::new());
        self.adj.len() - 1
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        let n = self.adj.len();
        for id in [u, v] {
            if id >= n {
                return Err(GraphError::IdOutOfRange { id, n });
            }
        }
        if u == v {
            return Err(GraphError::LoopEdge(u));
        }
        match self.adj[u].binary_search(&v) {
            Ok(_) => Err(GraphError::DuplicateEdge(u, v)),
            Err(pos) => {
                self.adj[u].insert(pos, v);
                let pos = self.adj[v].binary_search(&u).unwrap_err();
                self.adj[v].insert(pos, u);
                Ok(())
            }
        }
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) -> bool {
        match self.adj.get(u).map(|a| a.binary_search(&v)) {
            Some(Ok(pos)) => {
                self.adj[u].remove(pos);
                let pos = self.adj[v].binary_search(&u).expect("symmetric adjacency");
                self.adj[v].remove(pos);
                true
            }
            _ => false,
        }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj.get(u).is_some_and(|a| a.binary_search(&v).is_ok())
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).min().unwrap_or(0)
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.m());
        for (u, nb) in self.adj.iter().enumerate() {
            out.extend(nb.iter().filter(|&&v| v > u).map(|&v| (u, v)));
        }
        out
    }

    /// Subgraph induced by `keep` (any order, duplicates ignored). New ids
    /// follow increasing old ids.
    pub fn induced(&self, keep: &[usize]) -> (Graph, VertexMap) {
        let mut old_to_new = vec![None; self.n()];
        let mut sorted: Vec<usize> = keep.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        for (i, &v) in sorted.iter().enumerate() {
            old_to_new[v] = Some(i);
        }
        let adj = sorted
            .iter()
            .map(|&v| self.adj[v].iter().filter_map(|&w| old_to_new[w]).collect())
            .collect();
        let g = Graph {
            adj,
            meta: Metadata::default(),
        };
        (
            g,
            VertexMap {
                new_to_old: sorted,
                old_to_new,
            },
        )
    }

    /// `G - S`: deletes the given vertices and reports the id translation.
    pub fn remove_vertices(&self, remove: &[usize]) -> (Graph, VertexMap) {
        let mut gone = vec![false; self.n()];
        for &v in remove {
            gone[v] = true;
        }
        let keep: Vec<usize> = (0..self.n()).filter(|&v| !gone[v]).collect();
        self.induced(&keep)
    }

    /// Appends a copy of `other`; returns the id offset of the copy.
    pub fn append(&mut self, other: &Graph) -> usize {
        let off = self.n();
        for nb in &other.adj {
            self.adj.push(nb.iter().map(|&w| w + off).collect());
        }
        off
    }

    /// Merges vertex `drop` into `keep`: every edge of `drop` is moved to
    /// `keep`, `drop` is deleted and ids above it shift down by one. Returns
    /// the old-to-new map.
    pub fn identify(&mut self, keep: usize, drop: usize) -> Result<Vec<usize>, GraphError> {
        assert_ne!(keep, drop, "cannot identify a vertex with itself");
        let nb: Vec<usize> = self.adj[drop].clone();
        for w in nb {
            self.remove_edge(drop, w);
            if w == keep {
                return Err(GraphError::LoopEdge(keep));
            }
            if self.has_edge(keep, w) {
                return Err(GraphError::DuplicateEdge(keep, w));
            }
            self.add_edge(keep, w)?;
        }
        let map: Vec<usize> = (0..self.n())
            .map(|v| match v.cmp(&drop) {
                std::cmp::Ordering::Less => v,
                std::cmp::Ordering::Equal => {
                    if keep > drop {
                        keep - 1
                    } else {
                        keep
                    }
                }
                std::cmp::Ordering::Greater => v - 1,
            })
            .collect();
        self.adj.remove(drop);
        for list in &mut self.adj {
            for w in list.iter_mut() {
                *w = map[*w];
            }
        }
        Ok(map)
    }

    /// Length of a shortest cycle, `None` for forests.
    pub fn girth(&self) -> Option<usize> {
        let n = self.n();
        let mut best: Option<usize> = None;
        let mut dist = vec![usize::MAX; n];
        let mut parent = vec![usize::MAX; n];
        let mut queue = VecDeque::new();
        for root in 0..n {
            dist.fill(usize::MAX);
            dist[root] = 0;
            parent[root] = usize::MAX;
            queue.clear();
            queue.push_back(root);
            while let Some(u) = queue.pop_front() {
                if let Some(b) = best {
                    if 2 * dist[u] + 1 >= b {
                        break;
                    }
                }
                for &w in &self.adj[u] {
                    if dist[w] == usize::MAX {
                        dist[w] = dist[u] + 1;
                        parent[w] = u;
                        queue.push_back(w);
                    } else if parent[u] != w {
                        let len = dist[u] + dist[w] + 1;
                        best = Some(best.map_or(len, |b| b.min(len)));
                    }
                }
            }
        }
        best
    }

    /// Connected components of `G[subset]`, each sorted, ordered by their
    /// smallest vertex.
    pub fn components(&self, subset: &[usize]) -> Vec<Vec<usize>> {
        let mut inside = vec![false; self.n()];
        for &v in subset {
            inside[v] = true;
        }
        let mut seen = vec![false; self.n()];
        let mut roots: Vec<usize> = subset.to_vec();
        roots.sort_unstable();
        let mut out = Vec::new();
        for r in roots {
            if seen[r] {
                continue;
            }
            seen[r] = true;
            let mut comp = vec![r];
            let mut i = 0;
            while i < comp.len() {
                let u = comp[i];
                i += 1;
                for &w in &self.adj[u] {
                    if inside[w] && !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        let all: Vec<usize> = (0..self.n()).collect();
        self.components(&all).len() <= 1
    }

    /// Number of edges with both ends in `set`.
    pub fn induced_edge_count(&self, set: &[usize]) -> usize {
        let mut inside = vec![false; self.n()];
        for &v in set {
            inside[v] = true;
        }
        set.iter()
            .map(|&v| self.adj[v].iter().filter(|&&w| w > v && inside[w]).count())
            .sum()
    }

    /// Maximal degree-2 chains between 3⁺-vertices, plus the diagnostic list
    /// of components that are bare cycles of 2-vertices.
    pub fn chains(&self) -> ChainReport {
        let n = self.n();
        let mut visited = vec![false; n];
        let mut chains = Vec::new();
        for a in 0..n {
            if self.degree(a) == 2 {
                continue;
            }
            for &b in &self.adj[a] {
                if self.degree(b) != 2 || visited[b] {
                    continue;
                }
                let (internal, end) = self.walk_two_path(a, b);
                for &x in &internal {
                    visited[x] = true;
                }
                if self.degree(a) >= 3 && self.degree(end) >= 3 {
                    chains.push(Chain {
                        internal,
                        endpoints: (a, end),
                    });
                }
            }
        }
        let mut cycles = Vec::new();
        for s in 0..n {
            if visited[s] || self.degree(s) != 2 {
                continue;
            }
            let mut cyc = vec![s];
            visited[s] = true;
            let (mut prev, mut cur) = (s, self.adj[s][0]);
            while cur != s {
                visited[cur] = true;
                cyc.push(cur);
                let next = self.other_neighbor(cur, prev);
                prev = cur;
                cur = next;
            }
            cycles.push(cyc);
        }
        ChainReport { chains, cycles }
    }

    /// Follows 2-vertices from `start` (a neighbour of `from`) until a vertex
    /// of degree other than two. Returns the 2-vertices walked and the stop.
    fn walk_two_path(&self, from: usize, start: usize) -> (Vec<usize>, usize) {
        let mut internal = Vec::new();
        let (mut prev, mut cur) = (from, start);
        while self.degree(cur) == 2 {
            internal.push(cur);
            let next = self.other_neighbor(cur, prev);
            prev = cur;
            cur = next;
            if cur == start {
                break;
            }
        }
        (internal, cur)
    }

    /// For a 2-vertex `v`, its neighbour distinct from `u`.
    pub fn other_neighbor(&self, v: usize, u: usize) -> usize {
        let nb = &self.adj[v];
        if nb[0] == u {
            nb[1]
        } else {
            nb[0]
        }
    }

    /// Replaces every edge by a path with `t` new internal vertices.
    pub fn subdivide(&self, t: usize) -> Graph {
        let edges = self.edges();
        let mut g = Graph::empty(self.n() + edges.len() * t);
        let mut next = self.n();
        for (u, v) in edges {
            let mut prev = u;
            for _ in 0..t {
                g.add_edge(prev, next).expect("fresh vertex");
                prev = next;
                next += 1;
            }
            g.add_edge(prev, v).expect("fresh edge");
        }
        g.meta.claimed_planar = self.meta.claimed_planar;
        g.meta.claimed_girth = self.meta.claimed_girth.map(|x| x * (t + 1));
        g
    }

    /// Degeneracy ordering (repeatedly remove a minimum-degree vertex); ties
    /// go to the smallest id.
    pub fn degeneracy_order(&self) -> Vec<usize> {
        let n = self.n();
        let mut deg: Vec<usize> = (0..n).map(|v| self.degree(v)).collect();
        let mut removed = vec![false; n];
        let mut order = Vec::with_capacity(n);
        for _ in 0..n {
            let v = (0..n)
                .filter(|&v| !removed[v])
                .min_by_key(|&v| (deg[v], v))
                .expect("vertex left");
            removed[v] = true;
            order.push(v);
            for &w in &self.adj[v] {
                if !removed[w] {
                    deg[w] -= 1;
                }
            }
        }
        order
    }
}

/// A maximal induced path whose internal vertices all have degree two.
/// Endpoints coincide when the chain closes a cycle through one branch vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chain {
    pub internal: Vec<usize>,
    pub endpoints: (usize, usize),
}

impl Chain {
    /// Number of internal vertices (a `k`-chain has `k`).
    pub fn len(&self) -> usize {
        self.internal.len()
    }

    pub fn is_empty(&self) -> bool {
        self.internal.is_empty()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ChainReport {
    pub chains: Vec<Chain>,
    /// Components consisting only of 2-vertices.
    pub cycles: Vec<Vec<usize>>,
}

/// Small named graphs used across tests, examples and the CLI.
pub mod named {
    use super::Graph;

    pub fn path(n: usize) -> Graph {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::from_edges(n, &edges).expect("path")
    }

    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3);
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(n, &edges).expect("cycle")
    }

    pub fn complete(n: usize) -> Graph {
        let mut g = Graph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v).expect("complete");
            }
        }
        g
    }

    pub fn star(leaves: usize) -> Graph {
        let edges: Vec<_> = (1..=leaves).map(|i| (0, i)).collect();
        Graph::from_edges(leaves + 1, &edges).expect("star")
    }

    /// Wheel with `rim` rim vertices; hub is vertex 0.
    pub fn wheel(rim: usize) -> Graph {
        let mut g = Graph::empty(rim + 1);
        for i in 0..rim {
            g.add_edge(0, i + 1).unwrap();
            g.add_edge(i + 1, (i + 1) % rim + 1).unwrap();
        }
        g.meta.claimed_planar = true;
        g
    }

    pub fn grid(rows: usize, cols: usize) -> Graph {
        let mut g = Graph::empty(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                let v = r * cols + c;
                if c + 1 < cols {
                    g.add_edge(v, v + 1).unwrap();
                }
                if r + 1 < rows {
                    g.add_edge(v, v + cols).unwrap();
                }
            }
        }
        g.meta.claimed_planar = true;
        g
    }

    pub fn petersen() -> Graph {
        let mut g = Graph::empty(10);
        for i in 0..5 {
            g.add_edge(i, (i + 1) % 5).unwrap();
            g.add_edge(i, i + 5).unwrap();
            g.add_edge(i + 5, (i + 2) % 5 + 5).unwrap();
        }
        g
    }

    /// Triangular prism (planar, 3-regular, six vertices).
    pub fn prism() -> Graph {
        Graph::from_edges(
            6,
            &[
                (0, 1),
                (1, 2),
                (2, 0),
                (3, 4),
                (4, 5),
                (5, 3),
                (0, 3),
                (1, 4),
                (2, 5),
            ],
        )
        .unwrap()
    }

    /// Cube graph Q3 (planar, girth 4).
    pub fn cube() -> Graph {
        let mut g = Graph::empty(8);
        for v in 0..8usize {
            for b in 0..3 {
                let w = v ^ (1 << b);
                if w > v {
                    g.add_edge(v, w).unwrap();
                }
            }
        }
        g
    }

    /// Dodecahedron (planar, girth 5, 3-regular).
    pub fn dodecahedron() -> Graph {
        let mut g = Graph::empty(20);
        for i in 0..5 {
            g.add_edge(i, (i + 1) % 5).unwrap();
            g.add_edge(i, 5 + 2 * i).unwrap();
            g.add_edge(15 + i, 15 + (i + 1) % 5).unwrap();
            g.add_edge(15 + i, 6 + 2 * i).unwrap();
        }
        for j in 0..10 {
            g.add_edge(5 + j, 5 + (j + 1) % 10).unwrap();
        }
        g
    }
}
