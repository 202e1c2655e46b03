use thiserror::Error;

/// Errors raised while building agendas, rules, and operators or running checks.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("empty valuation set")]
    EmptyValuations,

    #[error("invalid agenda: {0}")]
    InvalidAgenda(String),

    #[error("invalid judgment set: {0}")]
    InvalidJudgmentSet(String),

    #[error("invalid rule spec `{spec}`: {reason}")]
    InvalidRule { spec: String, reason: String },

    #[error("invalid operator spec `{spec}`: {reason}")]
    InvalidOperator { spec: String, reason: String },

    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("profile outside the rule's domain")]
    DomainViolation,

    #[error("revision undefined: no rational judgment set contains {0}")]
    RevisionUndefined(String),

    #[error("unknown property `{0}`")]
    UnknownProperty(String),

    #[error("resource limit exceeded: {what} needs {needed}, budget is {budget}")]
    ResourceLimit { what: String, needed: u128, budget: u128 },

    #[error("agenda file error: {0}")]
    AgendaFile(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn resource(what: impl Into<String>, needed: u128, budget: u128) -> Self {
        Error::ResourceLimit {
            what: what.into(),
            needed,
            budget,
        }
    }

    /// True for resource-budget failures (distinct exit status in the CLI).
    pub fn is_resource_limit(&self) -> bool {
        matches!(self, Error::ResourceLimit { .. })
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
