use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("malformed witness: {0}")]
    Witness(String),

    #[error("unknown check `{0}`")]
    UnknownCheck(String),

    #[error("malformed case input `{key}`: {reason}")]
    Case { key: String, reason: String },

    #[error(transparent)]
    Numeric(#[from] normlab::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("cannot read TOML: {0}")]
    TomlRead(#[from] toml::de::Error),

    #[error("cannot write TOML: {0}")]
    TomlWrite(#[from] toml::ser::Error),
}

impl Error {
    /// Process exit status for this error: everything here is a usage or
    /// configuration problem.
    pub fn exit_code(&self) -> i32 {
        2
    }
}
