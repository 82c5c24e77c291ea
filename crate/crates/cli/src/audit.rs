use std::path::Path;

use iopart::io::{parse_edge_list, write_edge_list};
use iopart::thm2::{
    assert_structural_lemmas, check_pi, discharge_thm2, AuditIssue, DischargeParams, RepairState,
    StateSnapshot,
};
use serde::{Deserialize, Serialize};

use crate::fail::{read, Fail, Reason, Run};
use crate::output::{Format, Sink};

/// A repair state on disk: the graph it lives on (edge-list text), the map
/// from its vertices to the input graph, and the snapshot fields.
#[derive(Debug, Serialize, Deserialize)]
pub struct StateFile {
    pub graph: String,
    #[serde(default)]
    pub core_ids: Vec<usize>,
    #[serde(flatten)]
    pub state: StateSnapshot,
}

impl StateFile {
    pub fn new(state: &RepairState, core_ids: Vec<usize>) -> Self {
        StateFile {
            graph: write_edge_list(state.graph()),
            core_ids,
            state: state.snapshot(),
        }
    }
}

#[derive(Serialize)]
struct AuditReport {
    k: usize,
    pi_holds: bool,
    lemma_violations: Vec<AuditIssue>,
    issues: Vec<AuditIssue>,
    ledger: iopart::discharge::ChargeLedger,
}

pub fn audit(path: &Path, k: usize, sink: &Sink) -> Run {
    let file: StateFile = serde_json::from_str(&read(path)?)
        .map_err(|e| Fail::config(format!("{}: {e}", path.display())))?;
    if file.state.k != k {
        return Err(Fail::config(format!(
            "state was built for k = {}, not {k}",
            file.state.k
        )));
    }
    let params = DischargeParams::new(k).map_err(Fail::config)?;
    let g = parse_edge_list(&file.graph).map_err(Fail::config)?;
    let state = RepairState::from_snapshot(g.clone(), &file.state).map_err(Fail::config)?;
    let audit = discharge_thm2(&g, &state, &params).map_err(Fail::config)?;
    let report = AuditReport {
        k,
        pi_holds: check_pi(&state),
        lemma_violations: assert_structural_lemmas(&state).violations,
        issues: audit.issues,
        ledger: audit.ledger,
    };
    match sink.format {
        Format::Json => sink.emit_json(&report)?,
        Format::Tsv => sink.emit(&report.ledger.to_tsv())?,
        Format::Text => {
            let mut s = format!(
                "k = {k}\nM = {}\ntotal = {} -> {}\npi = {}\n",
                params.m,
                report.ledger.total_initial(),
                report.ledger.total_final(),
                report.pi_holds
            );
            for i in report.lemma_violations.iter().chain(&report.issues) {
                s.push_str(&format!("issue {} {:?}\n", i.rule, i.witness));
            }
            sink.emit(&s)?;
        }
    }
    let bad = report.lemma_violations.len() + report.issues.len();
    if !report.pi_holds || bad > 0 || !report.ledger.is_consistent() {
        return Err(Fail::outcome(
            Reason::AuditFailed,
            format!("{bad} issues, pi holds: {}", report.pi_holds),
        ));
    }
    Ok(())
}
