use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("unknown search kind `{0}`")]
    UnknownSearchKind(String),
    #[error("unknown oracle check `{0}`")]
    UnknownOracleCheck(String),
    #[error("bad config: {0}")]
    BadConfig(String),
    #[error(transparent)]
    Core(#[from] pbtv_core::Error),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("unsupported output format for `{0}` (use a .json or .csv path)")]
    BadFormat(String),
}
