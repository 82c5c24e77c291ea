use serde::{Deserialize, Serialize};

use super::gadget::{certify_gadget_with_limit, Certificate, Gadget, GadgetRole};
use super::HardnessError;
use crate::graph::Graph;
use crate::partition::{
    all_colorings, exact_solve, exact_solve_with, o_component, Color, Coloring, Family,
    PartitionSpec,
};

/// Adds a copy of `part` to `g`, merging each `(part vertex, g vertex)`
/// binding instead of creating a new vertex. Returns where every vertex of
/// `part` ended up.
pub fn attach(g: &mut Graph, part: &Graph, bindings: &[(usize, usize)]) -> Vec<usize> {
    let mut place: Vec<Option<usize>> = vec![None; part.n()];
    for &(p, target) in bindings {
        place[p] = Some(target);
    }
    let place: Vec<usize> = place
        .into_iter()
        .map(|p| p.unwrap_or_else(|| g.add_vertex()))
        .collect();
    for (u, v) in part.edges() {
        g.add_edge(place[u], place[v])
            .expect("bindings never create loops or parallel edges");
    }
    place
}

/// Which of the three cases the removed edge `xy` falls in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum HCase {
    /// `x` and `y` are I in every coloring of `G − xy`.
    AlwaysI,
    /// `x` and `y` are O in every coloring of `G − xy`.
    AlwaysO,
    /// Both II and OO occur.
    Both,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HGadgets {
    pub removed_edge: (usize, usize),
    pub case: HCase,
    pub h: Gadget,
    pub h_certificate: Certificate,
    pub h_prime: Gadget,
    pub h_prime_certificate: Certificate,
}

fn pair_feasible(g: &Graph, spec: PartitionSpec, x: usize, y: usize, cx: Color, cy: Color) -> bool {
    let mut fixed = Coloring::unset(g.n());
    fixed.set(x, cx);
    fixed.set(y, cy);
    exact_solve_with(g, spec, &fixed).is_some()
}

fn girth_or_max(g: &Graph) -> usize {
    g.girth().unwrap_or(usize::MAX)
}

/// Builds the forcing pair from an unsatisfiable witness: `H` forces I on
/// `v`, `H′ = H + w` with `w` a pendant at `v` forces O on `w`. The removed
/// edge is the first one, in lexicographic order, whose removal makes the
/// witness satisfiable.
pub fn build_h(
    witness: &Graph,
    spec: PartitionSpec,
    certify_limit: usize,
) -> Result<HGadgets, HardnessError> {
    if exact_solve(witness, spec).is_some() {
        return Err(HardnessError::WitnessSatisfiable);
    }
    let (x, y, minus) = witness
        .edges()
        .into_iter()
        .find_map(|(x, y)| {
            let mut minus = witness.clone();
            minus.remove_edge(x, y);
            exact_solve(&minus, spec).is_some().then_some((x, y, minus))
        })
        .ok_or(HardnessError::NoRemovableEdge)?;

    let ii = pair_feasible(&minus, spec, x, y, Color::I, Color::I);
    let oo = pair_feasible(&minus, spec, x, y, Color::O, Color::O);
    let mixed = pair_feasible(&minus, spec, x, y, Color::I, Color::O)
        || pair_feasible(&minus, spec, x, y, Color::O, Color::I);
    if mixed {
        return Err(HardnessError::PreconditionViolated(format!(
            "{x} and {y} take different colors in G - {x}{y}, so the witness is satisfiable"
        )));
    }
    let (case, h, v) = match (ii, oo) {
        (true, false) => (HCase::AlwaysI, minus.clone(), x),
        (false, true) => {
            let mut h = minus.clone();
            let v = h.add_vertex();
            h.add_edge(v, x).expect("fresh vertex");
            h.add_edge(v, y).expect("fresh vertex");
            (HCase::AlwaysO, h, v)
        }
        (true, true) => {
            let mut h = minus.clone();
            for _ in 0..2 {
                attach(&mut h, &minus, &[(x, x), (y, y)]);
            }
            (HCase::Both, h, x)
        }
        (false, false) => unreachable!("G - xy is satisfiable"),
    };
    let floor = girth_or_max(witness);
    if girth_or_max(&h) < floor {
        return Err(HardnessError::PreconditionViolated(
            "construction lowered the girth".into(),
        ));
    }
    let mut h_prime = h.clone();
    let w = h_prime.add_vertex();
    h_prime.add_edge(v, w).expect("fresh vertex");

    let mut h = Gadget::forcing(h, GadgetRole::ForceI, v);
    let mut h_prime = Gadget::forcing(h_prime, GadgetRole::ForceO, w);
    h.girth_floor = floor.min(h.girth_floor);
    h_prime.girth_floor = floor.min(h_prime.girth_floor);
    let h_certificate = certify_gadget_with_limit(&h, spec, certify_limit)?;
    let h_prime_certificate = certify_gadget_with_limit(&h_prime, spec, certify_limit)?;
    Ok(HGadgets {
        removed_edge: (x, y),
        case,
        h,
        h_certificate,
        h_prime,
        h_prime_certificate,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct APrimeGadgets {
    /// The witness with its 2-vertex replaced by a path of three 2-vertices;
    /// `v3` is the middle one.
    pub stretched: Graph,
    pub v3: usize,
    pub b: Gadget,
    pub b_certificate: Certificate,
    pub a_prime: Gadget,
    pub a_prime_certificate: Certificate,
}

/// The degree-preserving forcing gadgets for paths of order three: the
/// smallest 2-vertex `w` of the witness (neighbours `v1`, `v5`) is replaced
/// by the path `v1 v2 v3 v4 v5`; two copies joined through a new 2-vertex
/// `v` at their `v3` form `B`, forcing I on `v`; a pendant at `v` gives the
/// ForceO gadget.
pub fn build_a_prime(
    witness: &Graph,
    spec: PartitionSpec,
    degree_cap: Option<usize>,
    certify_limit: usize,
) -> Result<APrimeGadgets, HardnessError> {
    let bad = |m: &str| Err(HardnessError::PreconditionViolated(m.to_string()));
    if spec.family != Family::BoundedPath || spec.k != 3 {
        return bad("the construction is for paths of order at most three");
    }
    if witness.n() == 0 || witness.min_degree() < 2 {
        return bad("the witness needs minimum degree two");
    }
    if degree_cap.is_some_and(|d| witness.max_degree() > d) {
        return bad("the witness exceeds the degree cap");
    }
    if exact_solve(witness, spec).is_some() {
        return Err(HardnessError::WitnessSatisfiable);
    }
    let Some(w) = (0..witness.n()).find(|&u| witness.degree(u) == 2) else {
        return bad("the witness has no 2-vertex");
    };
    let (v1, v5) = (witness.neighbors(w)[0], witness.neighbors(w)[1]);
    let (mut stretched, map) = witness.remove_vertices(&[w]);
    let (v1, v5) = (map.to_new(v1).expect("kept"), map.to_new(v5).expect("kept"));
    let v2 = stretched.add_vertex();
    let v3 = stretched.add_vertex();
    let v4 = stretched.add_vertex();
    for (a, b) in [(v1, v2), (v2, v3), (v3, v4), (v4, v5)] {
        stretched.add_edge(a, b).expect("fresh vertices");
    }
    let colorings = all_colorings(&stretched, spec, &Coloring::unset(stretched.n()));
    if colorings.is_empty() {
        return Err(HardnessError::RoleViolated {
            reason: "the stretched witness is unsatisfiable".into(),
            witness: None,
        });
    }
    if let Some(c) = colorings
        .iter()
        .find(|c| !c.is(v3, Color::O) || o_component(&stretched, c, v3).len() != 2)
    {
        return Err(HardnessError::RoleViolated {
            reason: "v3 is not in an O-component of order exactly two".into(),
            witness: Some(c.clone()),
        });
    }

    let mut b = Graph::empty(0);
    let first = attach(&mut b, &stretched, &[]);
    let second = attach(&mut b, &stretched, &[]);
    let v = b.add_vertex();
    b.add_edge(v, first[v3]).expect("fresh vertex");
    b.add_edge(v, second[v3]).expect("fresh vertex");
    let mut a_prime = b.clone();
    let port = a_prime.add_vertex();
    a_prime.add_edge(v, port).expect("fresh vertex");

    let floor = girth_or_max(witness);
    let mut b = Gadget::forcing(b, GadgetRole::ForceI, v);
    let mut a_prime = Gadget::forcing(a_prime, GadgetRole::ForceO, port);
    for gadget in [&mut b, &mut a_prime] {
        gadget.girth_floor = gadget.girth_floor.min(floor);
        gadget.degree_cap = degree_cap;
    }
    let b_certificate = certify_gadget_with_limit(&b, spec, certify_limit)?;
    let a_prime_certificate = certify_gadget_with_limit(&a_prime, spec, certify_limit)?;
    Ok(APrimeGadgets {
        stretched,
        v3,
        b,
        b_certificate,
        a_prime,
        a_prime_certificate,
    })
}
