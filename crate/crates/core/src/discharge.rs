//! Exact charge bookkeeping for discharging audits.

use std::fmt::Write as _;

use num_rational::Ratio;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

pub type Charge = Ratio<i64>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transfer {
    pub from: usize,
    pub to: usize,
    #[serde(with = "ratio_text")]
    pub amount: Charge,
    pub rule: String,
}

/// Per-vertex initial charges, a log of transfers, and the resulting final
/// charges. `finalize` recomputes the finals from the other two.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChargeLedger {
    #[serde(with = "ratio_vec_text")]
    pub initial: Vec<Charge>,
    pub transfers: Vec<Transfer>,
    #[serde(with = "ratio_vec_text")]
    pub finals: Vec<Charge>,
}

impl ChargeLedger {
    pub fn new(initial: Vec<Charge>) -> Self {
        let finals = initial.clone();
        ChargeLedger {
            initial,
            transfers: Vec::new(),
            finals,
        }
    }

    pub fn transfer(&mut self, from: usize, to: usize, amount: Charge, rule: &str) {
        self.finals[from] -= amount;
        self.finals[to] += amount;
        self.transfers.push(Transfer {
            from,
            to,
            amount,
            rule: rule.to_string(),
        });
    }

    pub fn incoming(&self, v: usize) -> Charge {
        self.transfers
            .iter()
            .filter(|t| t.to == v)
            .map(|t| t.amount)
            .sum()
    }

    pub fn outgoing(&self, v: usize) -> Charge {
        self.transfers
            .iter()
            .filter(|t| t.from == v)
            .map(|t| t.amount)
            .sum()
    }

    pub fn total_initial(&self) -> Charge {
        self.initial.iter().sum()
    }

    pub fn total_final(&self) -> Charge {
        self.finals.iter().sum()
    }

    /// Checks `final = initial − out + in` for every vertex and that the
    /// totals agree.
    pub fn is_consistent(&self) -> bool {
        let mut expect = self.initial.clone();
        for t in &self.transfers {
            expect[t.from] -= t.amount;
            expect[t.to] += t.amount;
        }
        expect == self.finals && self.total_initial() == self.total_final()
    }

    /// Vertices whose final charge is negative.
    pub fn negatives(&self) -> Vec<usize> {
        (0..self.finals.len())
            .filter(|&v| self.finals[v] < Charge::zero())
            .collect()
    }

    /// Tab-separated `vertex initial in out final`, one row per vertex.
    pub fn to_tsv(&self) -> String {
        let mut s = String::from("vertex\tinitial\tin\tout\tfinal\n");
        for v in 0..self.initial.len() {
            writeln!(
                s,
                "{v}\t{}\t{}\t{}\t{}",
                self.initial[v],
                self.incoming(v),
                self.outgoing(v),
                self.finals[v]
            )
            .expect("write to string");
        }
        s
    }
}

pub(crate) mod ratio_text {
    use super::Charge;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Charge, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(r)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Charge, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

mod ratio_vec_text {
    use super::Charge;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Charge], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|r| r.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Charge>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter()
            .map(|s| s.parse().map_err(serde::de::Error::custom))
            .collect()
    }
}
