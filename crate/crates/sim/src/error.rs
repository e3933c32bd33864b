use thiserror::Error;

/// Exit code for invalid flags, config files or descriptors.
pub const EXIT_CONFIG: i32 = 1;
/// Exit code for failures while running or writing results.
pub const EXIT_RUNTIME: i32 = 2;
/// Exit code when `verify` finds a violation.
pub const EXIT_VERIFICATION: i32 = 3;

#[derive(Debug, Error)]
pub enum SimError {
    /// Argument parsing failed, or help/version was requested.
    #[error(transparent)]
    Cli(#[from] clap::Error),
    #[error("{0}")]
    Config(String),
    #[error("I/O error: {0}")]
    Io(String),
    #[error(transparent)]
    Core(usm_core::Error),
}

impl SimError {
    pub fn exit_code(&self) -> i32 {
        use usm_core::Error as E;
        match self {
            SimError::Cli(e) if !e.use_stderr() => 0,
            SimError::Cli(_) | SimError::Config(_) => EXIT_CONFIG,
            SimError::Core(E::Config(_) | E::InvalidInstance(_) | E::TooLarge { .. }) => EXIT_CONFIG,
            SimError::Io(_) | SimError::Core(_) => EXIT_RUNTIME,
        }
    }
}

impl From<usm_core::Error> for SimError {
    fn from(e: usm_core::Error) -> Self {
        match e {
            usm_core::Error::Config(msg) => SimError::Config(msg),
            other => SimError::Core(other),
        }
    }
}
