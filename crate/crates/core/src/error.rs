use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed graph6 input; `offset` is the byte position within the line.
    #[error("graph6 parse error at byte {offset}: {msg}")]
    Graph6 { offset: usize, msg: String },

    /// Input outside the supported size envelope (e.g. graph6 beyond 62 nodes).
    #[error("unsupported size: {0}")]
    Unsupported(String),

    /// A precondition on arguments was violated.
    #[error("invalid input: {0}")]
    Domain(String),

    /// Target not reachable from the source.
    #[error("no path from {from} to {to}")]
    Unreachable { from: usize, to: usize },

    /// Hitting times are infinite on a disconnected graph.
    #[error("graph is disconnected: hitting times are infinite")]
    Disconnected,

    /// Numerical failure (singular system, eigensolver non-convergence, step cap).
    #[error("numeric error: {0}")]
    Numeric(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}
