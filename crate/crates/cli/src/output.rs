use std::io::Write;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use iopart::io::write_atomic;
use serde::Serialize;

use crate::fail::Fail;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
    Tsv,
}

/// Name of the generator behind every seeded result; printed in headers.
pub const PRNG: &str = "chacha8";

/// Where the main artifact goes: a file (written atomically) or stdout.
pub struct Sink {
    pub format: Format,
    pub out: Option<PathBuf>,
}

impl Sink {
    pub fn emit(&self, text: &str) -> Result<(), Fail> {
        match &self.out {
            Some(p) => save(p, text),
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout
                    .write_all(text.as_bytes())
                    .map_err(|e| Fail::config(format!("stdout: {e}")))
            }
        }
    }

    pub fn emit_json<T: Serialize>(&self, value: &T) -> Result<(), Fail> {
        self.emit(&json(value))
    }
}

pub fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

pub fn save(path: &Path, text: &str) -> Result<(), Fail> {
    write_atomic(path, text.as_bytes())
        .map_err(|e| Fail::config(format!("{}: {e}", path.display())))
}
