use std::path::Path;

use iopart::gen::{gen_sparse, gnp};
use iopart::graph::Graph;
use iopart::io::{parse_coloring, parse_edge_list, write_coloring, write_edge_list};
use iopart::mad::{mad_exact, Density};
use iopart::partition::{verify as check, Coloring, ExactSolver, Family, PartitionSpec};
use iopart::thm1::{audit_charges_thm1, solve_io3, Thm1Outcome};
use iopart::thm2::{solve_iok, OraclePolicy, Thm2Error, Thm2Outcome};
use serde::Serialize;
use serde_json::json;

use crate::audit::StateFile;
use crate::fail::{read, Fail, Reason, Run};
use crate::output::{save, Format, Sink, PRNG};
use crate::{resolve_spec, GenArgs, Method, Model, Oracle, SolveArgs, SpecArgs};

pub fn load_graph(path: &Path) -> Result<Graph, Fail> {
    parse_edge_list(&read(path)?).map_err(|e| Fail::config(format!("{}: {e}", path.display())))
}

#[derive(Serialize)]
struct MadReport {
    mad: Density,
    witness: Vec<usize>,
}

pub fn mad(path: &Path, sink: &Sink) -> Run {
    let g = load_graph(path)?;
    let (mad, witness) = mad_exact(&g).map_err(Fail::config)?;
    match sink.format {
        Format::Json => sink.emit_json(&MadReport { mad, witness }),
        _ => {
            let ids: Vec<String> = witness.iter().map(usize::to_string).collect();
            sink.emit(&format!("mad = {mad}\nwitness = {}\n", ids.join(" ")))
        }
    }
}

#[derive(Serialize)]
struct SolveReport {
    spec: PartitionSpec,
    method: String,
    coloring: Coloring,
    stats: serde_json::Value,
}

pub fn solve(args: &SolveArgs, sink: &Sink) -> Run {
    let g = load_graph(&args.graph)?;
    let spec = resolve_spec(&args.spec)?;
    let (coloring, stats) = match args.method {
        Method::Exact => {
            let mut solver = ExactSolver::new(&g, spec);
            if let Some(limit) = args.node_limit {
                solver = solver.with_node_limit(limit);
            }
            let found = solver
                .solve(&Coloring::unset(g.n()))
                .map_err(|e| Fail::outcome(Reason::BudgetExceeded, format!("{} nodes", e.0)))?;
            let c = found.ok_or_else(|| {
                Fail::outcome(Reason::Unsatisfiable, format!("no {spec} partition exists"))
            })?;
            (c, json!({ "nodes": solver.nodes() }))
        }
        Method::Thm1 => {
            if spec != PartitionSpec::order(3) {
                return Err(Fail::config("thm1 only produces o3 partitions"));
            }
            match solve_io3(&g).map_err(|e| Fail::outcome(Reason::NotApplicable, e))? {
                Thm1Outcome::Colored { coloring, stats } => {
                    (coloring, serde_json::to_value(stats).expect("serializable"))
                }
                Thm1Outcome::NotApplicable {
                    residual, forest, ..
                } => {
                    if let Some(path) = &args.ledger {
                        let ledger = audit_charges_thm1(&residual, &forest)
                            .map_err(|e| Fail::outcome(Reason::NotApplicable, e))?;
                        save(path, &ledger.to_tsv())?;
                    }
                    return Err(Fail::outcome(
                        Reason::NotApplicable,
                        format!(
                            "no reducible configuration in a residual of {} vertices",
                            residual.n()
                        ),
                    ));
                }
            }
        }
        Method::Thm2 => {
            if spec.family != Family::BoundedOrder || spec.k < 2 {
                return Err(Fail::config("thm2 needs an o<k> spec with k at least 2"));
            }
            let oracle = match args.oracle {
                Oracle::Exact => OraclePolicy::Exact,
                Oracle::Recursive => OraclePolicy::Recursive,
            };
            match solve_iok(&g, spec.k, oracle).map_err(thm2_fail)? {
                Thm2Outcome::Colored { coloring, calls } => (coloring, json!({ "calls": calls })),
                Thm2Outcome::Exhausted {
                    state, core_ids, ..
                } => {
                    if let Some(path) = &args.state {
                        let file = StateFile::new(&state, core_ids);
                        save(path, &crate::output::json(&file))?;
                    }
                    return Err(Fail::outcome(
                        Reason::Exhausted,
                        "no untreated 2-vertex is left",
                    ));
                }
            }
        }
    };
    if let Err(v) = check(&g, &coloring, spec) {
        return Err(Fail::outcome(Reason::Violation, v));
    }
    let method = format!("{:?}", args.method).to_ascii_lowercase();
    match sink.format {
        Format::Json => sink.emit_json(&SolveReport {
            spec,
            method,
            coloring,
            stats,
        }),
        _ => sink.emit(&format!(
            "c spec={spec} method={method}\n{}",
            write_coloring(&coloring)
        )),
    }
}

fn thm2_fail(e: Thm2Error) -> Fail {
    match e {
        Thm2Error::BadK(_) | Thm2Error::PreconditionViolated(_) => Fail::config(e),
        Thm2Error::OracleUnsatisfiable { .. } => Fail::outcome(Reason::NotApplicable, e),
        _ => Fail::outcome(Reason::Exhausted, e),
    }
}

pub fn verify(graph: &Path, coloring: &Path, spec: &SpecArgs, sink: &Sink) -> Run {
    let g = load_graph(graph)?;
    let spec = resolve_spec(spec)?;
    let c = parse_coloring(&read(coloring)?, g.n())
        .map_err(|e| Fail::config(format!("{}: {e}", coloring.display())))?;
    match check(&g, &c, spec) {
        Ok(()) => match sink.format {
            Format::Json => sink.emit_json(&json!({ "valid": true, "spec": spec })),
            _ => sink.emit("ok\n"),
        },
        Err(v) => {
            if sink.format == Format::Json {
                sink.emit_json(&json!({ "valid": false, "spec": spec, "violation": v }))?;
            }
            Err(Fail::outcome(Reason::Violation, v))
        }
    }
}

pub fn gen(args: &GenArgs, sink: &Sink) -> Run {
    let (g, model) = match args.model {
        Model::Sparse => {
            let cap: Density = args.cap.parse().map_err(Fail::config)?;
            (
                gen_sparse(args.n, cap, args.seed),
                format!("sparse cap={cap}"),
            )
        }
        Model::Gnp => {
            if !(0.0..=1.0).contains(&args.p) {
                return Err(Fail::config("--p must lie in [0, 1]"));
            }
            (gnp(args.n, args.p, args.seed), format!("gnp p={}", args.p))
        }
    };
    sink.emit(&format!(
        "c prng={PRNG} seed={} model={model}\n{}",
        args.seed,
        write_edge_list(&g)
    ))
}

pub fn subdivide(path: &Path, t: usize, sink: &Sink) -> Run {
    let g = load_graph(path)?;
    sink.emit(&write_edge_list(&g.subdivide(t)))
}
