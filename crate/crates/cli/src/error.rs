use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid `{field}`: {reason}")]
    Config { field: &'static str, reason: String },

    #[error("cannot read config `{path}`: {reason}")]
    ConfigFile { path: String, reason: String },

    #[error(transparent)]
    Core(#[from] beamsym::Error),

    #[error("conjugacy check failed: relative error {error:e} at a{index}")]
    Conjugacy { error: f64, index: usize },

    #[error("output: {0}")]
    Output(String),
}

impl CliError {
    pub fn config(field: &'static str, reason: impl Into<String>) -> Self {
        CliError::Config {
            field,
            reason: reason.into(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_numerical() => 3,
            CliError::Conjugacy { .. } => 3,
            _ => 2,
        }
    }
}
