use thiserror::Error;

/// Errors raised by geometry and grid construction.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum BackgroundError {
    #[error("background: mass must be positive and finite, got {0}")]
    InvalidMass(f64),
    #[error("background: areal radius {r} is not outside the horizon 2M = {horizon}")]
    InsideHorizon { r: f64, horizon: f64 },
    #[error("background: tortoise inversion did not converge at rs = {rs} after {iterations} iterations")]
    NoConvergence { rs: f64, iterations: usize },
    #[error("background: invalid grid: {0}")]
    InvalidGrid(String),
    #[error("background: grid [{rs_min}, {rs_max}] does not contain the trapping interval [{left}, {right}]")]
    TrappingNotCovered {
        rs_min: f64,
        rs_max: f64,
        left: f64,
        right: f64,
    },
}

/// Errors raised while stepping or initializing a solver.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error("solver: time step {dt} exceeds the stability limit {limit} (cfl {cfl})")]
    CflViolation { dt: f64, limit: f64, cfl: f64 },
    #[error("solver: non-finite value in mode (l={l}, m={m}) at step {step}")]
    NonFinite { l: u32, m: i32, step: u64 },
    #[error("solver: initial data: {0}")]
    InitialData(String),
    #[error("solver: state does not match grid (expected {expected} nodes, got {got})")]
    LengthMismatch { expected: usize, got: usize },
}

/// Errors raised by fitting and post-processing.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error("analysis: insufficient data: {found} envelope points in window, need {needed}")]
    InsufficientData { found: usize, needed: usize },
    #[error("analysis: invalid window [{0}, {1}]")]
    InvalidWindow(f64, f64),
    #[error("analysis: grids are not nested: {0}")]
    NonNested(String),
    #[error("analysis: point rs = {0} is outside the grid")]
    OutsideGrid(f64),
}

/// Top-level error for configuration, runs and I/O.
#[derive(Debug, Error)]
pub enum Error {
    #[error("config: line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("config: {0}")]
    Validation(String),
    #[error(transparent)]
    Background(#[from] BackgroundError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error("io: {context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
    #[error("io: csv {context}: {source}")]
    Csv {
        context: String,
        #[source]
        source: csv::Error,
    },
}

impl Error {
    pub fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            context: context.into(),
            source,
        }
    }

    /// True for errors that stem from the configuration rather than the numerics.
    pub fn is_config(&self) -> bool {
        match self {
            Error::Parse { .. } | Error::Validation(_) => true,
            Error::Background(BackgroundError::InvalidMass(_))
            | Error::Background(BackgroundError::InvalidGrid(_))
            | Error::Background(BackgroundError::TrappingNotCovered { .. }) => true,
            Error::Solver(SolverError::CflViolation { .. })
            | Error::Solver(SolverError::InitialData(_)) => true,
            _ => false,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
