use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("unknown suite `{name}`; valid suites: {}", valid.join(", "))]
    UnknownSuite { name: String, valid: Vec<&'static str> },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("oracle refuses vectors longer than {limit} (got {len})")]
    OracleTooLarge { len: usize, limit: usize },

    #[error(transparent)]
    Core(#[from] weaklp::Error),
}

pub type Result<T> = std::result::Result<T, HarnessError>;
