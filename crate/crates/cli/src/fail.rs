use std::fmt;
use std::path::Path;

/// Why a run did not end with exit status 0.
#[derive(Debug)]
pub enum Fail {
    /// Bad arguments, unreadable input or an unwritable output. Exit 2.
    Config(String),
    /// The run finished and the answer is negative. Exit 1, with a reason
    /// code scripts can match on.
    Outcome { reason: Reason, detail: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Reason {
    Violation,
    Unsatisfiable,
    NotApplicable,
    Exhausted,
    RoleViolated,
    NotFound,
    AuditFailed,
    ReductionMismatch,
    BudgetExceeded,
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Reason::Violation => "violation",
            Reason::Unsatisfiable => "unsatisfiable",
            Reason::NotApplicable => "not-applicable",
            Reason::Exhausted => "exhausted",
            Reason::RoleViolated => "role-violated",
            Reason::NotFound => "not-found",
            Reason::AuditFailed => "audit-failed",
            Reason::ReductionMismatch => "reduction-mismatch",
            Reason::BudgetExceeded => "budget-exceeded",
        })
    }
}

impl Fail {
    pub fn config(msg: impl fmt::Display) -> Self {
        Fail::Config(msg.to_string())
    }

    pub fn outcome(reason: Reason, detail: impl fmt::Display) -> Self {
        Fail::Outcome {
            reason,
            detail: detail.to_string(),
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            Fail::Config(_) => 2,
            Fail::Outcome { .. } => 1,
        }
    }

    /// One line for standard error.
    pub fn report(&self) -> String {
        match self {
            Fail::Config(msg) => format!("error: {msg}"),
            Fail::Outcome { reason, detail } => format!("reason={reason} {detail}"),
        }
    }
}

pub type Run = Result<(), Fail>;

pub fn read(path: &Path) -> Result<String, Fail> {
    std::fs::read_to_string(path).map_err(|e| Fail::config(format!("{}: {e}", path.display())))
}
