use serde::{Deserialize, Serialize};

use super::cnf::RestrictedCnf;
use super::construct::attach;
use super::gadget::{certify_gadget_with_limit, Gadget, GadgetRole, PORT_E, PORT_S, PORT_V};
use super::HardnessError;
use crate::graph::Graph;
use crate::partition::{exact_solve, Coloring, PartitionSpec};

/// Certified gadgets for one spec.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Catalog {
    pub force_o: Option<Gadget>,
    pub transmitter: Option<Gadget>,
}

impl Catalog {
    pub fn girth_floor(&self) -> usize {
        [&self.force_o, &self.transmitter]
            .iter()
            .flat_map(|g| g.as_ref())
            .map(|g| g.girth_floor)
            .min()
            .unwrap_or(usize::MAX)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransmitterCopy {
    pub variable: usize,
    pub clause: usize,
    pub position: usize,
    pub s: usize,
    pub e: usize,
    pub vertices: Vec<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionMap {
    pub graph: Graph,
    /// Per variable: first positive occurrence, negative occurrence, second
    /// positive occurrence, in path order.
    pub variables: Vec<[usize; 3]>,
    /// Per clause: the path on `k + 1` vertices.
    pub clause_paths: Vec<Vec<usize>>,
    /// Per clause: the path vertex of each literal, in clause order.
    pub clause_literals: Vec<Vec<usize>>,
    /// Path vertices pinned to O, each by its own ForceO copy.
    pub fillers: Vec<usize>,
    pub transmitters: Vec<TransmitterCopy>,
}

impl ReductionMap {
    /// Truth assignment read off a coloring: a variable is true exactly when
    /// the middle vertex of its path is O.
    pub fn decode(&self, c: &Coloring) -> Vec<bool> {
        self.variables
            .iter()
            .map(|v| c.is(v[1], crate::partition::Color::O))
            .collect()
    }
}

/// Positions of `t` literal vertices on a path `0..=k`, spread as evenly as
/// possible with both ends used.
fn literal_slots(t: usize, k: usize) -> Vec<usize> {
    (0..t).map(|i| (i * k + (t - 1) / 2) / (t - 1)).collect()
}

fn checked(
    gadget: &Option<Gadget>,
    role: GadgetRole,
    spec: PartitionSpec,
) -> Result<&Gadget, HardnessError> {
    let g = gadget.as_ref().ok_or(HardnessError::MissingGadget(role))?;
    if g.role != role {
        return Err(HardnessError::MissingGadget(role));
    }
    certify_gadget_with_limit(g, spec, g.graph.n())?;
    Ok(g)
}

/// Assembles `J`: a path on three vertices per variable, a path on `k + 1`
/// vertices per clause with the non-literal vertices pinned to O, and one
/// transmitter per literal occurrence from the variable path (`s`) to the
/// clause path (`e`).
pub fn build_reduction(
    cnf: &RestrictedCnf,
    catalog: &Catalog,
    spec: PartitionSpec,
) -> Result<ReductionMap, HardnessError> {
    if spec.k < 3 {
        return Err(HardnessError::BadSpec(
            "reductions need k at least three".into(),
        ));
    }
    if cnf.clauses().is_empty() {
        return Err(HardnessError::BadSpec("the instance has no clauses".into()));
    }
    let force_o = checked(&catalog.force_o, GadgetRole::ForceO, spec)?;
    let transmitter = checked(&catalog.transmitter, GadgetRole::Transmitter, spec)?;
    let (w, s, e) = (
        force_o.port(PORT_V)?,
        transmitter.port(PORT_S)?,
        transmitter.port(PORT_E)?,
    );

    let mut g = Graph::empty(0);
    let mut map = ReductionMap::default();
    for _ in 0..cnf.variable_count() {
        let a = attach(&mut g, &crate::graph::named::path(3), &[]);
        map.variables.push([a[0], a[1], a[2]]);
    }
    for clause in cnf.clauses() {
        let path = attach(&mut g, &crate::graph::named::path(spec.k + 1), &[]);
        let slots = literal_slots(clause.len(), spec.k);
        for (i, &p) in path.iter().enumerate() {
            if !slots.contains(&i) {
                attach(&mut g, &force_o.graph, &[(w, p)]);
                map.fillers.push(p);
            }
        }
        map.clause_literals
            .push(slots.iter().map(|&i| path[i]).collect());
        map.clause_paths.push(path);
    }
    for var in 0..cnf.variable_count() {
        let occ = cnf.occurrences(var);
        let places = [
            (occ.positive[0], 0),
            (occ.negative, 1),
            (occ.positive[1], 2),
        ];
        for (o, slot) in places {
            let from = map.variables[var][slot];
            let to = map.clause_literals[o.clause][o.position];
            let vertices = attach(&mut g, &transmitter.graph, &[(s, from), (e, to)]);
            map.transmitters.push(TransmitterCopy {
                variable: var,
                clause: o.clause,
                position: o.position,
                s: from,
                e: to,
                vertices,
            });
        }
    }
    let floor = catalog.girth_floor();
    if let Some(girth) = g.girth() {
        if girth < floor {
            return Err(HardnessError::PreconditionViolated(format!(
                "girth of the reduction graph is {girth}, below the catalog floor {floor}"
            )));
        }
    }
    map.graph = g;
    Ok(map)
}

/// Default order bound for [`soundness_check`].
pub const SOUNDNESS_LIMIT: usize = 5000;

/// Whether satisfiability of `cnf` (brute force) matches partitionability
/// of `J` (exact search).
pub fn soundness_check(
    cnf: &RestrictedCnf,
    j: &ReductionMap,
    spec: PartitionSpec,
) -> Result<bool, HardnessError> {
    if j.graph.n() > SOUNDNESS_LIMIT {
        return Err(HardnessError::TooLarge {
            size: j.graph.n(),
            limit: SOUNDNESS_LIMIT,
        });
    }
    let sat = cnf.solve_bruteforce()?.is_some();
    let part = exact_solve(&j.graph, spec);
    if let Some(c) = &part {
        if !cnf.clauses().is_empty() && !cnf.is_satisfied_by(&j.decode(c)) {
            return Ok(false);
        }
    }
    Ok(sat == part.is_some())
}
