use rand::Rng;
use serde::{Deserialize, Serialize};

use super::construct::attach;
use super::gadget::{certify_gadget_with_limit, Certificate, Gadget, GadgetRole};
use super::HardnessError;
use crate::gen::{random_tree, rng};
use crate::graph::Graph;
use crate::partition::{
    exact_solve, exact_solve_with, Color, Coloring, ExactSolver, PartitionSpec,
};

/// Largest order enumerated exhaustively; larger orders are sampled.
pub const EXHAUSTIVE_ORDER: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MineRequest {
    pub role: GadgetRole,
    pub spec: PartitionSpec,
    pub girth_floor: usize,
    pub degree_cap: Option<usize>,
    /// Order bound on candidates; for transmitters it bounds the caterpillar
    /// template, each pendant counting as one vertex.
    pub max_n: usize,
    /// Candidates examined before giving up.
    pub budget: u64,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinedGadget {
    pub gadget: Gadget,
    pub certificate: Certificate,
    pub provenance: String,
    pub examined: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MineOutcome {
    Found(Box<MinedGadget>),
    /// Search ended without a hit. This is no proof that none exists.
    NotFound {
        examined: u64,
    },
}

impl MineOutcome {
    pub fn found(self) -> Option<MinedGadget> {
        match self {
            MineOutcome::Found(m) => Some(*m),
            MineOutcome::NotFound { .. } => None,
        }
    }
}

struct Search<'a> {
    req: &'a MineRequest,
    examined: u64,
}

impl Search<'_> {
    fn admissible(&self, g: &Graph) -> bool {
        g.min_degree() >= 1
            && g.is_connected()
            && g.girth().unwrap_or(usize::MAX) >= self.req.girth_floor
            && self.req.degree_cap.is_none_or(|d| g.max_degree() <= d)
    }

    /// Smallest vertex that is I in every valid coloring, leaving room for
    /// one more edge when `pendant` is set.
    fn forced_i_vertex(&self, g: &Graph, pendant: bool) -> Option<usize> {
        let spec = self.req.spec;
        exact_solve(g, spec)?;
        let mut solver = ExactSolver::new(g, spec);
        (0..g.n()).find(|&v| {
            if pendant && self.req.degree_cap.is_some_and(|d| g.degree(v) + 1 > d) {
                return false;
            }
            let mut fixed = Coloring::unset(g.n());
            fixed.set(v, Color::O);
            solver.solve(&fixed).expect("no node limit").is_none()
        })
    }

    fn over_budget(&mut self) -> bool {
        self.examined += 1;
        self.examined > self.req.budget
    }

    /// First graph, by order and then edge mask, with a forced-I vertex;
    /// sampled graphs beyond [`EXHAUSTIVE_ORDER`].
    fn force_i(&mut self, max_n: usize, pendant: bool) -> Option<(Graph, usize, String)> {
        for n in 2..=max_n.min(EXHAUSTIVE_ORDER) {
            let pairs: Vec<(usize, usize)> = (0..n)
                .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                .collect();
            for mask in 0u64..1 << pairs.len() {
                if (mask.count_ones() as usize) < n - 1 {
                    continue;
                }
                let edges: Vec<(usize, usize)> = pairs
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &p)| p)
                    .collect();
                let g = Graph::from_edges(n, &edges).expect("distinct pairs");
                if !self.admissible(&g) {
                    continue;
                }
                if self.over_budget() {
                    return None;
                }
                if let Some(v) = self.forced_i_vertex(&g, pendant) {
                    return Some((g, v, format!("exhaustive order {n} mask {mask}")));
                }
            }
        }
        if max_n <= EXHAUSTIVE_ORDER {
            return None;
        }
        let mut r = rng(self.req.seed);
        loop {
            let n = r.gen_range(EXHAUSTIVE_ORDER + 1..=max_n);
            let mut g = random_tree(n, &mut r);
            let extra = r.gen_range(1..=n);
            for _ in 0..extra {
                let (u, v) = (r.gen_range(0..n), r.gen_range(0..n));
                if u != v && !g.has_edge(u, v) {
                    g.add_edge(u, v).expect("checked");
                }
            }
            if !self.admissible(&g) {
                continue;
            }
            if self.over_budget() {
                return None;
            }
            if let Some(v) = self.forced_i_vertex(&g, pendant) {
                return Some((g, v, format!("sampled order {n} seed {}", self.req.seed)));
            }
        }
    }

    fn force_o(&mut self, max_n: usize) -> Option<(Gadget, String)> {
        let (mut g, v, how) = self.force_i(max_n.checked_sub(1)?, true)?;
        let w = g.add_vertex();
        g.add_edge(v, w).expect("fresh vertex");
        Some((
            self.bounded(Gadget::forcing(g, GadgetRole::ForceO, w)),
            format!("{how}, pendant at {v}"),
        ))
    }

    fn bounded(&self, mut gadget: Gadget) -> Gadget {
        gadget.girth_floor = self.req.girth_floor;
        gadget.degree_cap = self.req.degree_cap;
        gadget
    }

    /// Caterpillar templates: a path from `s` to `e` whose inner vertices
    /// carry pendants that a ForceO copy pins to O. Templates are checked with
    /// the pendants fixed, then instantiated and certified in full.
    fn transmitter(&mut self, force_o: &Gadget) -> Option<(Gadget, String)> {
        let k = self.req.spec.k;
        let max_pendants = match self.req.degree_cap {
            Some(d) => (k - 1).min(d.saturating_sub(2)),
            None => k - 1,
        };
        for len in 2..self.req.max_n {
            let inner = len - 1;
            let mut counts = vec![0usize; inner];
            loop {
                let order = len + 1 + counts.iter().sum::<usize>();
                if order <= self.req.max_n {
                    if self.over_budget() {
                        return None;
                    }
                    if self.template_works(&counts) {
                        let g = self.instantiate(&counts, force_o);
                        return Some((g, format!("caterpillar pendants {counts:?}")));
                    }
                }
                if !next_counts(&mut counts, max_pendants) {
                    break;
                }
            }
        }
        None
    }

    fn template_works(&self, counts: &[usize]) -> bool {
        let (g, s, e, pins) = caterpillar(counts);
        let spec = self.req.spec;
        let solve = |a: Color, b: Color, clean: bool| {
            let mut fixed = Coloring::unset(g.n());
            for &p in &pins {
                fixed.set(p, Color::O);
            }
            for (port, c) in [(s, a), (e, b)] {
                fixed.set(port, c);
                if clean && c == Color::O {
                    for &w in g.neighbors(port) {
                        if fixed.is(w, Color::O) {
                            return false;
                        }
                        fixed.set(w, Color::I);
                    }
                }
            }
            exact_solve_with(&g, spec, &fixed).is_some()
        };
        !solve(Color::O, Color::I, false)
            && solve(Color::I, Color::I, true)
            && solve(Color::O, Color::O, true)
            && solve(Color::I, Color::O, true)
    }

    fn instantiate(&self, counts: &[usize], force_o: &Gadget) -> Gadget {
        let (template, s, e, pins) = caterpillar(counts);
        let mut g = Graph::empty(0);
        attach(&mut g, &template, &[]);
        let port = force_o
            .port(super::gadget::PORT_V)
            .expect("ForceO has a port");
        for &p in &pins {
            attach(&mut g, &force_o.graph, &[(port, p)]);
        }
        self.bounded(Gadget::transmitter(g, s, e))
    }
}

/// Path `0..=len` with `counts[i]` pendants on vertex `i + 1`; returns the
/// graph, the two ends and the pendants.
fn caterpillar(counts: &[usize]) -> (Graph, usize, usize, Vec<usize>) {
    let len = counts.len() + 1;
    let mut g = Graph::empty(len + 1);
    for i in 0..len {
        g.add_edge(i, i + 1).expect("path");
    }
    let mut pins = Vec::new();
    for (i, &c) in counts.iter().enumerate() {
        for _ in 0..c {
            let p = g.add_vertex();
            g.add_edge(i + 1, p).expect("fresh vertex");
            pins.push(p);
        }
    }
    (g, 0, len, pins)
}

/// Next vector in lexicographic order with entries at most `max`.
fn next_counts(counts: &mut [usize], max: usize) -> bool {
    for c in counts.iter_mut().rev() {
        if *c < max {
            *c += 1;
            return true;
        }
        *c = 0;
    }
    false
}

/// Searches for a certified gadget meeting the request. Transmitters first
/// mine a ForceO gadget under the same constraints for their pendants.
pub fn mine_gadget(req: &MineRequest) -> Result<MineOutcome, HardnessError> {
    if req.spec.k < 2 {
        return Err(HardnessError::BadSpec("k must be at least two".into()));
    }
    let mut search = Search { req, examined: 0 };
    let found = match req.role {
        GadgetRole::ForceI => search.force_i(req.max_n, false).map(|(g, v, how)| {
            (
                search.bounded(Gadget::forcing(g, GadgetRole::ForceI, v)),
                how,
            )
        }),
        GadgetRole::ForceO => search.force_o(req.max_n),
        GadgetRole::Transmitter => {
            let pendant_req = MineRequest {
                role: GadgetRole::ForceO,
                max_n: EXHAUSTIVE_ORDER + 1,
                ..*req
            };
            let mut inner = Search {
                req: &pendant_req,
                examined: 0,
            };
            let force_o = inner.force_o(pendant_req.max_n);
            search.examined = inner.examined;
            match force_o {
                Some((f, how)) => search
                    .transmitter(&f)
                    .map(|(t, tmpl)| (t, format!("{tmpl}; pendants from {how}"))),
                None => None,
            }
        }
    };
    let examined = search.examined;
    let Some((gadget, how)) = found else {
        return Ok(MineOutcome::NotFound { examined });
    };
    let certificate = certify_gadget_with_limit(&gadget, req.spec, gadget.graph.n())?;
    Ok(MineOutcome::Found(Box::new(MinedGadget {
        gadget,
        certificate,
        provenance: format!("mined: {how}"),
        examined,
    })))
}

/// An edge-minimal graph without a valid coloring, with minimum degree two
/// and at least one 2-vertex; exhaustive by order up to `max_n`.
pub fn mine_minimal_witness(
    spec: PartitionSpec,
    girth_floor: usize,
    degree_cap: Option<usize>,
    max_n: usize,
    budget: u64,
) -> Option<Graph> {
    let mut examined = 0u64;
    for n in 3..=max_n {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        for mask in 0u64..1 << pairs.len() {
            if (mask.count_ones() as usize) < n {
                continue;
            }
            let edges: Vec<(usize, usize)> = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &p)| p)
                .collect();
            let g = Graph::from_edges(n, &edges).expect("distinct pairs");
            if g.min_degree() != 2
                || !g.is_connected()
                || g.girth().unwrap_or(usize::MAX) < girth_floor
                || degree_cap.is_some_and(|d| g.max_degree() > d)
            {
                continue;
            }
            examined += 1;
            if examined > budget {
                return None;
            }
            if exact_solve(&g, spec).is_some() {
                continue;
            }
            let minimal = g.edges().into_iter().all(|(u, v)| {
                let mut h = g.clone();
                h.remove_edge(u, v);
                exact_solve(&h, spec).is_some()
            });
            if minimal {
                return Some(g);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hardness::gadget::Truth;
    use crate::partition::{feasible_colors, ColorSet};

    fn request(role: GadgetRole, spec: PartitionSpec, max_n: usize) -> MineRequest {
        MineRequest {
            role,
            spec,
            girth_floor: 3,
            degree_cap: None,
            max_n,
            budget: 1_000_000,
            seed: 7,
        }
    }

    #[test]
    fn mines_force_i_for_paths_of_three() {
        let m = mine_gadget(&request(GadgetRole::ForceI, PartitionSpec::path(3), 10))
            .unwrap()
            .found()
            .unwrap();
        assert_eq!(m.gadget.graph.n(), 5);
        assert!(matches!(
            m.certificate.truth,
            Truth::Forcing {
                feasible: ColorSet::ONLY_I,
                ..
            }
        ));
    }

    #[test]
    fn tiny_transmitters_do_not_exist() {
        let out =
            mine_gadget(&request(GadgetRole::Transmitter, PartitionSpec::path(3), 2)).unwrap();
        assert!(matches!(out, MineOutcome::NotFound { .. }));
    }

    #[test]
    fn force_o_attached_to_a_fresh_vertex() {
        let spec = PartitionSpec::order(3);
        let m = mine_gadget(&request(GadgetRole::ForceO, spec, 8))
            .unwrap()
            .found()
            .unwrap();
        let mut g = m.gadget.graph.clone();
        let w = m.gadget.port("v").unwrap();
        let fresh = g.add_vertex();
        g.add_edge(w, fresh).unwrap();
        assert_eq!(feasible_colors(&g, w, spec), ColorSet::ONLY_O);
        assert_eq!(feasible_colors(&g, fresh, spec), ColorSet::BOTH);
    }

    #[test]
    fn mines_a_transmitter_for_paths_of_three() {
        let m = mine_gadget(&request(
            GadgetRole::Transmitter,
            PartitionSpec::path(3),
            14,
        ))
        .unwrap()
        .found()
        .unwrap();
        assert!(matches!(
            m.certificate.truth,
            Truth::Transmitter {
                o_then_i: false,
                ..
            }
        ));
        assert!(m.provenance.contains("caterpillar"));
    }

    #[test]
    fn lexicographic_counts() {
        let mut c = vec![0, 2];
        assert!(next_counts(&mut c, 2));
        assert_eq!(c, vec![1, 0]);
        let mut c = vec![2, 2];
        assert!(!next_counts(&mut c, 2));
    }
}
