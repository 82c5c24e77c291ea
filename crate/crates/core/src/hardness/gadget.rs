use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::HardnessError;
use crate::graph::Graph;
use crate::partition::{Color, ColorSet, Coloring, ExactSolver, PartitionSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GadgetRole {
    /// Port `v` is I in every valid coloring.
    ForceI,
    /// Port `v` is O in every valid coloring, and some valid coloring puts
    /// every neighbour of `v` in I.
    ForceO,
    /// Ports `s` and `e`: no valid coloring has `s` in O and `e` in I; the
    /// pairs II, OO and IO are realised, each with every O-port's neighbours
    /// in I.
    Transmitter,
}

impl fmt::Display for GadgetRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GadgetRole::ForceI => "force-i",
            GadgetRole::ForceO => "force-o",
            GadgetRole::Transmitter => "transmitter",
        })
    }
}

impl std::str::FromStr for GadgetRole {
    type Err = HardnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "force-i" => Ok(GadgetRole::ForceI),
            "force-o" => Ok(GadgetRole::ForceO),
            "transmitter" => Ok(GadgetRole::Transmitter),
            _ => Err(HardnessError::Parse {
                line: 0,
                message: format!("unknown gadget role `{s}`"),
            }),
        }
    }
}

pub const PORT_V: &str = "v";
pub const PORT_S: &str = "s";
pub const PORT_E: &str = "e";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gadget {
    pub graph: Graph,
    pub role: GadgetRole,
    pub ports: BTreeMap<String, usize>,
    pub girth_floor: usize,
    pub degree_cap: Option<usize>,
}

impl Gadget {
    /// A forcing gadget with port `v`; the girth floor is the graph's girth.
    pub fn forcing(graph: Graph, role: GadgetRole, v: usize) -> Self {
        Self::with_ports(graph, role, &[(PORT_V, v)])
    }

    pub fn transmitter(graph: Graph, s: usize, e: usize) -> Self {
        Self::with_ports(graph, GadgetRole::Transmitter, &[(PORT_S, s), (PORT_E, e)])
    }

    fn with_ports(graph: Graph, role: GadgetRole, ports: &[(&str, usize)]) -> Self {
        let girth_floor = graph.girth().unwrap_or(usize::MAX);
        Gadget {
            graph,
            role,
            ports: ports.iter().map(|&(k, v)| (k.to_string(), v)).collect(),
            girth_floor,
            degree_cap: None,
        }
    }

    pub fn port(&self, name: &str) -> Result<usize, HardnessError> {
        self.ports.get(name).copied().ok_or_else(|| {
            HardnessError::PreconditionViolated(format!("gadget has no port `{name}`"))
        })
    }

    /// Girth floor and degree cap hold.
    pub fn meets_bounds(&self) -> bool {
        self.graph.girth().unwrap_or(usize::MAX) >= self.girth_floor
            && self.degree_cap.is_none_or(|d| self.graph.max_degree() <= d)
    }
}

/// Port behaviour established by exhaustive search, with one witness
/// coloring per realised case.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Truth {
    Forcing {
        port: usize,
        feasible: ColorSet,
        witness: Coloring,
    },
    Transmitter {
        s: usize,
        e: usize,
        both_i: Coloring,
        both_o: Coloring,
        i_then_o: Coloring,
        /// Always false in a certificate; kept so the record is explicit.
        o_then_i: bool,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub spec: PartitionSpec,
    pub role: GadgetRole,
    pub truth: Truth,
}

pub const CERTIFY_LIMIT: usize = 30;

/// Certifies with the default size limit.
pub fn certify_gadget(gadget: &Gadget, spec: PartitionSpec) -> Result<Certificate, HardnessError> {
    certify_gadget_with_limit(gadget, spec, CERTIFY_LIMIT)
}

/// Establishes the port behaviour claimed by the gadget's role by exhaustive
/// search over colorings with the ports fixed.
pub fn certify_gadget_with_limit(
    gadget: &Gadget,
    spec: PartitionSpec,
    limit: usize,
) -> Result<Certificate, HardnessError> {
    let g = &gadget.graph;
    if g.n() > limit {
        return Err(HardnessError::TooLarge { size: g.n(), limit });
    }
    if !gadget.meets_bounds() {
        return Err(HardnessError::PreconditionViolated(
            "gadget breaks its girth floor or degree cap".into(),
        ));
    }
    let mut solver = ExactSolver::new(g, spec);
    let mut solve = |assign: &[(usize, Color)]| {
        let mut fixed = Coloring::unset(g.n());
        for &(v, c) in assign {
            fixed.set(v, c);
        }
        solver.solve(&fixed).expect("no node limit")
    };
    let clean = |v: usize, c: Color| -> Vec<(usize, Color)> {
        let mut out = vec![(v, c)];
        if c == Color::O {
            out.extend(g.neighbors(v).iter().map(|&w| (w, Color::I)));
        }
        out
    };
    let violated = |reason: &str, witness: Option<Coloring>| HardnessError::RoleViolated {
        reason: reason.to_string(),
        witness,
    };
    let truth = match gadget.role {
        GadgetRole::ForceI | GadgetRole::ForceO => {
            let v = gadget.port(PORT_V)?;
            let (want, other) = match gadget.role {
                GadgetRole::ForceI => (Color::I, Color::O),
                _ => (Color::O, Color::I),
            };
            if let Some(c) = solve(&[(v, other)]) {
                return Err(violated("port takes the excluded color", Some(c)));
            }
            let witness = solve(&clean(v, want))
                .ok_or_else(|| violated("no valid coloring with a clean port", None))?;
            let feasible = ColorSet {
                i: want == Color::I,
                o: want == Color::O,
            };
            Truth::Forcing {
                port: v,
                feasible,
                witness,
            }
        }
        GadgetRole::Transmitter => {
            let (s, e) = (gadget.port(PORT_S)?, gadget.port(PORT_E)?);
            if s == e || g.has_edge(s, e) {
                return Err(HardnessError::PreconditionViolated(
                    "ports must be distinct and non-adjacent".into(),
                ));
            }
            if let Some(c) = solve(&[(s, Color::O), (e, Color::I)]) {
                return Err(violated("s in O with e in I is realised", Some(c)));
            }
            let mut case = |a: Color, b: Color, name: &str| {
                let mut assign = clean(s, a);
                assign.extend(clean(e, b));
                solve(&assign)
                    .ok_or_else(|| violated(&format!("no clean coloring for {name}"), None))
            };
            Truth::Transmitter {
                s,
                e,
                both_i: case(Color::I, Color::I, "II")?,
                both_o: case(Color::O, Color::O, "OO")?,
                i_then_o: case(Color::I, Color::O, "IO")?,
                o_then_i: false,
            }
        }
    };
    Ok(Certificate {
        spec,
        role: gadget.role,
        truth,
    })
}
