use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::Args;
use iopart::hardness::{
    build_reduction, certify_gadget_with_limit, load_catalog, mine_gadget, parse_dimacs,
    soundness_check, store_record, CatalogRecord, GadgetRole, HardnessError, MineOutcome,
    MineRequest, CERTIFY_LIMIT,
};
use iopart::io::write_edge_list;
use iopart::partition::PartitionSpec;

use crate::fail::{read, Fail, Reason, Run};
use crate::graphs::load_graph;
use crate::output::{json, Format, Sink, PRNG};
use crate::{resolve_spec, SpecArgs};

#[derive(Args)]
pub struct ReduceArgs {
    pub cnf: PathBuf,
    #[command(flatten)]
    pub spec: SpecArgs,
    /// Catalog directory holding a ForceO and a transmitter for the spec.
    #[arg(long)]
    pub catalog: PathBuf,
    /// Mine missing gadgets and add them to the catalog.
    #[arg(long)]
    pub mine: bool,
    /// Also write the vertex map of the reduction as JSON.
    #[arg(long)]
    pub map: Option<PathBuf>,
    /// Compare satisfiability with partitionability of the result.
    #[arg(long)]
    pub check: bool,
}

#[derive(Args)]
pub struct CertifyArgs {
    pub graph: PathBuf,
    #[arg(long)]
    pub role: GadgetRole,
    /// Port assignment `name=vertex`: `v` for forcing gadgets, `s` and `e`
    /// for transmitters.
    #[arg(long = "port", value_parser = parse_port)]
    pub ports: Vec<(String, usize)>,
    #[command(flatten)]
    pub spec: SpecArgs,
    /// Defaults to the girth of the graph.
    #[arg(long)]
    pub girth_floor: Option<usize>,
    #[arg(long)]
    pub degree_cap: Option<usize>,
    #[arg(long, default_value_t = CERTIFY_LIMIT)]
    pub limit: usize,
    /// Store the certified gadget in this catalog directory.
    #[arg(long)]
    pub catalog: Option<PathBuf>,
    #[arg(long, default_value = "certify-gadget")]
    pub provenance: String,
}

#[derive(Args)]
pub struct MineArgs {
    #[arg(long)]
    pub role: GadgetRole,
    #[command(flatten)]
    pub spec: SpecArgs,
    #[arg(long, default_value_t = 3)]
    pub girth: usize,
    #[arg(long)]
    pub degree_cap: Option<usize>,
    #[arg(long, default_value_t = 14)]
    pub max_n: usize,
    #[arg(long, default_value_t = 1_000_000)]
    pub budget: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long)]
    pub catalog: Option<PathBuf>,
}

fn parse_port(s: &str) -> Result<(String, usize), String> {
    let (name, v) = s
        .split_once('=')
        .ok_or_else(|| format!("expected name=vertex, got `{s}`"))?;
    let v = v.parse().map_err(|_| format!("bad vertex `{v}`"))?;
    Ok((name.to_string(), v))
}

fn hardness_fail(e: HardnessError) -> Fail {
    match e {
        HardnessError::RoleViolated { .. } => Fail::outcome(Reason::RoleViolated, e),
        HardnessError::MissingGadget(_) => {
            Fail::config(format!("{e}; run mine-gadget or pass --mine"))
        }
        _ => Fail::config(e),
    }
}

fn request(role: GadgetRole, spec: PartitionSpec, args: Option<&MineArgs>) -> MineRequest {
    MineRequest {
        role,
        spec,
        girth_floor: args.map_or(3, |a| a.girth),
        degree_cap: args.and_then(|a| a.degree_cap),
        max_n: args.map_or(14, |a| a.max_n),
        budget: args.map_or(1_000_000, |a| a.budget),
        seed: args.map_or(1, |a| a.seed),
    }
}

fn mine_into(req: &MineRequest, catalog: Option<&Path>) -> Result<CatalogRecord, Fail> {
    match mine_gadget(req).map_err(hardness_fail)? {
        MineOutcome::Found(m) => {
            let record = CatalogRecord::new(&m.gadget, m.certificate, &m.provenance);
            if let Some(dir) = catalog {
                store_record(dir, &record).map_err(Fail::config)?;
            }
            Ok(record)
        }
        MineOutcome::NotFound { examined } => Err(Fail::outcome(
            Reason::NotFound,
            format!("no {} after {examined} candidates", req.role),
        )),
    }
}

pub fn reduce(args: &ReduceArgs, sink: &Sink) -> Run {
    let spec = resolve_spec(&args.spec)?;
    let cnf = parse_dimacs(&read(&args.cnf)?).map_err(Fail::config)?;
    let mut catalog = if args.catalog.exists() {
        load_catalog(&args.catalog, spec).map_err(hardness_fail)?
    } else {
        Default::default()
    };
    if args.mine {
        for (role, slot) in [
            (GadgetRole::ForceO, &mut catalog.force_o),
            (GadgetRole::Transmitter, &mut catalog.transmitter),
        ] {
            if slot.is_none() {
                let rec = mine_into(&request(role, spec, None), Some(&args.catalog))?;
                *slot = Some(rec.gadget().map_err(Fail::config)?);
            }
        }
    }
    let j = build_reduction(&cnf, &catalog, spec).map_err(hardness_fail)?;
    if let Some(path) = &args.map {
        crate::output::save(path, &json(&j))?;
    }
    match sink.format {
        Format::Json => sink.emit_json(&j)?,
        _ => sink.emit(&write_edge_list(&j.graph))?,
    }
    if args.check && !soundness_check(&cnf, &j, spec).map_err(Fail::config)? {
        return Err(Fail::outcome(
            Reason::ReductionMismatch,
            "satisfiability and partitionability disagree",
        ));
    }
    Ok(())
}

pub fn certify(args: &CertifyArgs, sink: &Sink) -> Run {
    let spec = resolve_spec(&args.spec)?;
    let graph = load_graph(&args.graph)?;
    let ports: BTreeMap<String, usize> = args.ports.iter().cloned().collect();
    let girth_floor = args
        .girth_floor
        .unwrap_or_else(|| graph.girth().unwrap_or(usize::MAX));
    let gadget = iopart::hardness::Gadget {
        graph,
        role: args.role,
        ports,
        girth_floor,
        degree_cap: args.degree_cap,
    };
    let cert = certify_gadget_with_limit(&gadget, spec, args.limit).map_err(hardness_fail)?;
    let record = CatalogRecord::new(&gadget, cert, &args.provenance);
    if let Some(dir) = &args.catalog {
        store_record(dir, &record).map_err(Fail::config)?;
    }
    match sink.format {
        Format::Json => sink.emit_json(&record.certificate),
        _ => sink.emit(&format!("certified {} for {spec}\n", args.role)),
    }
}

pub fn mine(args: &MineArgs, sink: &Sink) -> Run {
    let spec = resolve_spec(&args.spec)?;
    let req = request(args.role, spec, Some(args));
    let record = mine_into(&req, args.catalog.as_deref())?;
    match sink.format {
        Format::Json => sink.emit_json(&record),
        _ => {
            let ports: Vec<String> = record
                .ports
                .iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect();
            sink.emit(&format!(
                "c prng={PRNG} seed={}\nc role={} spec={spec} ports {}\nc {}\n{}",
                args.seed,
                record.role,
                ports.join(" "),
                record.provenance,
                record.graph
            ))
        }
    }
}
