use serde_json::json;

/// Failures surfaced by a command, each tied to one exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Core(#[from] cohent::Error),

    #[error("invalid input `{invariant}`: {detail}")]
    Input { invariant: &'static str, detail: String },

    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    /// Self-test found counterexamples; the report has already been written.
    #[error("{failures} invariant check(s) failed")]
    Invariant { failures: usize },
}

impl CliError {
    pub fn input(invariant: &'static str, detail: impl Into<String>) -> Self {
        Self::Input {
            invariant,
            detail: detail.into(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Invariant { .. } => 1,
            Self::Core(cohent::Error::NonConvergence { .. }) => 3,
            _ => 2,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Self::Invariant { .. } => "invariant_failure",
            Self::Core(cohent::Error::NonConvergence { .. }) => "non_convergence",
            Self::Io { .. } => "io",
            _ => "validation",
        }
    }

    fn invariant(&self) -> Option<&'static str> {
        match self {
            Self::Core(cohent::Error::Validation { invariant, .. }) | Self::Input { invariant, .. } => Some(invariant),
            _ => None,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut err = json!({
            "kind": self.kind(),
            "message": self.to_string(),
            "exit_code": self.exit_code(),
        });
        if let Some(inv) = self.invariant() {
            err["invariant"] = json!(inv);
        }
        if let Self::Core(cohent::Error::NonConvergence { iterations, lower, upper }) = self {
            err["iterations"] = json!(iterations);
            err["bounds"] = json!([lower, upper]);
        }
        json!({ "error": err })
    }
}

pub type CliResult<T> = Result<T, CliError>;
