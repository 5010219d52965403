use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at position {pos}: {msg}")]
pub struct SyntaxError {
    pub pos: usize,
    pub msg: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("underlying graph is disconnected")]
    DisconnectedGraph,
    #[error("not a sphere embedding: V - E + F = {0}")]
    NotSphere(i64),
    #[error("strand from the tail does not cover every edge (linkoid)")]
    MultiComponent,
    #[error("bad degrees: {0}")]
    BadDegrees(String),
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("inconsistent code: {0}")]
    InconsistentCode(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MoveError {
    #[error("move site does not match this diagram")]
    StaleSite,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumerateError {
    #[error("size cap exceeded: {0}")]
    SizeCapExceeded(String),
    #[error("planar_code format error at byte {offset}: {msg}")]
    FormatError { offset: usize, msg: String },
    #[error("unsupported planar_code header")]
    UnsupportedHeader,
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("census schema version {found}, expected {expected}")]
    VersionMismatch { found: u32, expected: u32 },
    #[error("fixture line {line}: {msg}")]
    FixtureParse { line: usize, msg: String },
    #[error("census line {line}: {msg}")]
    CensusParse { line: usize, msg: String },
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}
