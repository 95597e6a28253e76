use thiserror::Error;

/// Errors surfaced by the solver stack.
#[derive(Debug, Error)]
pub enum FtError {
    #[error("state outside Ω: {0}")]
    OutsideDomain(String),

    #[error("hyperbolicity margin violated: gap {gap:.3e} below minimum {min:.3e}")]
    HyperbolicityMargin { gap: f64, min: f64 },

    #[error("eigendecomposition unsupported for dimension {0} without a model-provided eigenstructure")]
    EigenUnsupported(usize),

    #[error("curve left domain at parameter {0:.6e}")]
    CurveLeftDomain(f64),

    #[error("empty interval: a={0} b={1}")]
    EmptyInterval(usize, usize),

    #[error("contraction failure after {iterations} iterations, residual {residual:.3e}")]
    ContractionFailure { iterations: usize, residual: f64 },

    #[error("strength out of range: |{s:.4e}| exceeds s_max {s_max:.4e}")]
    StrengthOutOfRange { s: f64, s_max: f64 },

    #[error("iteration left admissible set: {0}")]
    LeftAdmissibleSet(String),

    #[error("Riemann inversion failed: residual {residual:.3e} after {iterations} iterations")]
    RiemannInversionFailed { residual: f64, iterations: usize },

    #[error("out of local well-posedness range: |uR-uL| = {0:.4e}")]
    JumpTooLarge(f64),

    #[error("front explosion: {count} fronts exceed cap {cap} at t = {time:.6}")]
    FrontExplosion { count: usize, cap: usize, time: f64 },

    #[error("non-transversal edge: front {front} meets polygon edge {edge} at angle below tolerance")]
    NonTransversalEdge { front: u32, edge: usize },

    #[error("left validity neighborhood: 2G-1 = {0:.4e} too close to zero")]
    OdeValidity(f64),

    #[error("outside construction neighborhood: radicand {0:.4e} negative")]
    NegativeRadicand(f64),

    #[error("anchor outside simulated window")]
    AnchorOutsideWindow,

    #[error("interaction point, theorem not applicable: window μ^IC mass {0:.3e} above threshold")]
    InteractionPoint(f64),

    #[error("total variation {tv:.4} exceeds bound {bound:.4} ({context})")]
    TvBound { tv: f64, bound: f64, context: String },

    #[error("config error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("{0}")]
    Other(String),
}

pub type Result<T> = std::result::Result<T, FtError>;
