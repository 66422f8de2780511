use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not Hermitian: relative asymmetry {asymmetry:.3e} exceeds {tol:.3e}")]
    NonHermitianInput { asymmetry: f64, tol: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix must be square and non-empty, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("eigenvalue {eigenvalue} lies within {tol:.3e} of the open endpoint {endpoint}")]
    EigenvalueOnBoundary {
        eigenvalue: f64,
        endpoint: f64,
        tol: f64,
    },

    #[error("eigenvalue {eigenvalue} is not classified by the split into exactly one part")]
    UnclassifiedEigenvalue { eigenvalue: f64 },

    #[error("operator has an eigenvalue within {tol:.3e} of mu = {mu} (distance {distance:.3e})")]
    KernelNotTrivial { mu: f64, distance: f64, tol: f64 },

    #[error("not an involution: ‖J − Jᴴ‖ = {asymmetry:.3e}, ‖J² − I‖ = {square_defect:.3e}")]
    NotInvolution { asymmetry: f64, square_defect: f64 },

    #[error("involutions are not in the acute case: σ_min(I + J′J) = {smin:.3e}")]
    NotAcute { smin: f64 },

    #[error("matrix is not unitary: ‖WᴴW − I‖ = {defect:.3e}")]
    NotUnitary { defect: f64 },

    #[error("matrix is not an orthogonal projection: defect {defect:.3e}")]
    NotAProjection { defect: f64 },

    #[error("operator is not accretive: Hermitian-part minimum {margin:.3e}")]
    NotAccretive { margin: f64 },

    #[error("diagonal entries must be positive (alpha = {alpha}, beta = {beta})")]
    NonPositiveDiagonal { alpha: f64, beta: f64 },

    #[error("perturbation is not off-diagonal: ‖JV + VJ‖ = {defect:.3e}")]
    NotOffDiagonal { defect: f64 },

    #[error("involution does not commute with the operator: ‖JA − AJ‖ = {defect:.3e}")]
    NotDiagonal { defect: f64 },

    #[error("vector {which} is not a unit vector in its prescribed subspace (defect {defect:.3e})")]
    NotInSubspace { which: &'static str, defect: f64 },

    #[error("operation requires a {expected} split")]
    WrongDisposition { expected: &'static str },

    #[error("invalid spectral split: {0}")]
    InvalidSplit(String),

    #[error("kappa must be nonnegative, got {0}")]
    NegativeKappa(f64),

    #[error("distance d must be positive, got {0}")]
    NonPositiveD(f64),

    #[error("condition {condition} violated: {detail}")]
    ConditionViolated {
        condition: &'static str,
        detail: String,
    },

    #[error("mu = {mu} outside the admissible window ({lo}, {hi})")]
    MuOutOfWindow { mu: f64, lo: f64, hi: f64 },

    #[error("perturbed eigenvalue {eigenvalue} lies outside its guaranteed enclosure")]
    EnclosureViolated { eigenvalue: f64 },

    #[error("infeasible random spec: {0}")]
    InfeasibleSpec(String),

    #[error("grid violates the spectral cutoff: {0}")]
    GridViolatesCutoff(String),

    #[error("construction failed: {0}")]
    ConstructionFailed(String),

    #[error("invalid tolerance override {name} = {value}")]
    InvalidTolerance { name: String, value: f64 },

    #[error("format error in field `{field}`: {reason}")]
    Format { field: String, reason: String },
}

impl Error {
    pub(crate) fn format(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Format {
            field: field.into(),
            reason: reason.into(),
        }
    }
}
