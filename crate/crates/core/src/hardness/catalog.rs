use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::gadget::{certify_gadget_with_limit, Certificate, Gadget, GadgetRole};
use super::reduction::Catalog;
use super::HardnessError;
use crate::io::{parse_edge_list, write_atomic, write_edge_list};
use crate::partition::PartitionSpec;

/// One gadget on disk. The graph is kept in edge-list text.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogRecord {
    pub graph: String,
    pub role: GadgetRole,
    pub ports: BTreeMap<String, usize>,
    pub spec: PartitionSpec,
    pub girth_floor: usize,
    pub degree_cap: Option<usize>,
    pub certificate: Certificate,
    pub provenance: String,
}

fn store_err(e: impl std::fmt::Display) -> HardnessError {
    HardnessError::Store(e.to_string())
}

impl CatalogRecord {
    pub fn new(gadget: &Gadget, certificate: Certificate, provenance: &str) -> Self {
        CatalogRecord {
            graph: write_edge_list(&gadget.graph),
            role: gadget.role,
            ports: gadget.ports.clone(),
            spec: certificate.spec,
            girth_floor: gadget.girth_floor,
            degree_cap: gadget.degree_cap,
            certificate,
            provenance: provenance.to_string(),
        }
    }

    pub fn gadget(&self) -> Result<Gadget, HardnessError> {
        Ok(Gadget {
            graph: parse_edge_list(&self.graph).map_err(store_err)?,
            role: self.role,
            ports: self.ports.clone(),
            girth_floor: self.girth_floor,
            degree_cap: self.degree_cap,
        })
    }

    /// Certifies the stored gadget again and compares with the stored
    /// certificate.
    pub fn recheck(&self) -> Result<Gadget, HardnessError> {
        let gadget = self.gadget()?;
        let cert = certify_gadget_with_limit(&gadget, self.spec, gadget.graph.n())?;
        if cert != self.certificate {
            return Err(HardnessError::RoleViolated {
                reason: "stored certificate does not match a fresh one".into(),
                witness: None,
            });
        }
        Ok(gadget)
    }

    /// `<spec>-<role>-<digest>.json`, the digest taken over graph and ports.
    fn file_name(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.graph.as_bytes());
        for (name, v) in &self.ports {
            h.update(format!("{name}={v};").as_bytes());
        }
        let digest: String = h.finalize()[..8]
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect();
        format!("{}-{}-{digest}.json", self.spec, self.role)
    }
}

/// Adds a record to the catalog directory. Records are never overwritten;
/// storing the same gadget twice is a no-op. Returns the record's path.
pub fn store_record(dir: &Path, record: &CatalogRecord) -> Result<PathBuf, HardnessError> {
    fs::create_dir_all(dir).map_err(store_err)?;
    let path = dir.join(record.file_name());
    if path.exists() {
        return Ok(path);
    }
    let json = serde_json::to_vec_pretty(record).map_err(store_err)?;
    write_atomic(&path, &json).map_err(store_err)?;
    Ok(path)
}

/// All records in the directory, ordered by file name.
pub fn load_records(dir: &Path) -> Result<Vec<CatalogRecord>, HardnessError> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(store_err)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    paths
        .iter()
        .map(|p| {
            let text = fs::read_to_string(p).map_err(store_err)?;
            serde_json::from_str(&text).map_err(|e| store_err(format!("{}: {e}", p.display())))
        })
        .collect()
}

/// The first ForceO and transmitter records for `spec`, each re-certified.
pub fn load_catalog(dir: &Path, spec: PartitionSpec) -> Result<Catalog, HardnessError> {
    let mut catalog = Catalog::default();
    for rec in load_records(dir)? {
        if rec.spec != spec {
            continue;
        }
        let slot = match rec.role {
            GadgetRole::ForceO => &mut catalog.force_o,
            GadgetRole::Transmitter => &mut catalog.transmitter,
            GadgetRole::ForceI => continue,
        };
        if slot.is_none() {
            *slot = Some(rec.recheck()?);
        }
    }
    Ok(catalog)
}
