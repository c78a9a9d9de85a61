use std::fmt;

use weil_core::CoreError;

/// Command-level failure, split by how the process should exit:
/// 2 for domain validation failures, 3 for malformed input, 4 when a
/// resource cap is hit.
#[derive(Debug)]
pub enum AtlasError {
    Core(CoreError),
    Malformed(String),
    Io(std::io::Error),
}

pub type Result<T> = std::result::Result<T, AtlasError>;

impl AtlasError {
    pub fn exit_code(&self) -> i32 {
        match self {
            AtlasError::Core(CoreError::DegreeCap { .. }) => 4,
            AtlasError::Core(_) => 2,
            AtlasError::Malformed(_) | AtlasError::Io(_) => 3,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            AtlasError::Core(CoreError::DegreeCap { .. }) => "resource-cap",
            AtlasError::Core(_) => "validation",
            AtlasError::Malformed(_) => "malformed-input",
            AtlasError::Io(_) => "io",
        }
    }

    /// One-line JSON record for stderr.
    pub fn error_record(&self) -> String {
        let msg = self.to_string().replace('\\', "\\\\").replace('"', "\\\"");
        format!("{{\"error\":\"{}\",\"message\":\"{}\"}}", self.kind(), msg)
    }
}

impl fmt::Display for AtlasError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AtlasError::Core(e) => write!(f, "{e}"),
            AtlasError::Malformed(m) => write!(f, "{m}"),
            AtlasError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for AtlasError {}

impl From<CoreError> for AtlasError {
    fn from(e: CoreError) -> Self {
        AtlasError::Core(e)
    }
}

impl From<std::io::Error> for AtlasError {
    fn from(e: std::io::Error) -> Self {
        AtlasError::Io(e)
    }
}

impl From<serde_json::Error> for AtlasError {
    fn from(e: serde_json::Error) -> Self {
        AtlasError::Malformed(format!("invalid JSON: {e}"))
    }
}
