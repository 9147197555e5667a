use thiserror::Error;

/// Crate-wide error type. Variant names double as the machine-readable
/// error codes emitted by the CLI.
#[derive(Debug, Error)]
pub enum Error {
    #[error("side ({0},{1}) is not paired exactly once in the gluing table")]
    UnpairedSide(usize, usize),
    #[error("gluing produces {found} puncture links, expected {expected}")]
    WrongPunctureCount { expected: usize, found: usize },
    #[error("surface S_{{{genus},{punctures}}} has non-negative Euler characteristic")]
    NonNegativeEuler { genus: usize, punctures: usize },
    #[error("edge {0} has both sides on one triangle and cannot be flipped")]
    SelfGluedEdge(usize),
    #[error("weights violate normal-coordinate admissibility in triangle {0}")]
    InadmissibleWeights(usize),
    #[error("cross-ratio of a quadruple with coincident points")]
    DegenerateQuadruple,
    #[error("point has non-positive height {0}")]
    NonpositiveHeight(f64),
    #[error("framing is not generic for this triangulation at edge {edge}")]
    NonGenericFraming { edge: usize },
    #[error("operation requires a non-degenerate representation")]
    DegenerateInput,
    #[error("representation is not co-axial for the given axis")]
    NotCoaxial,
    #[error("developed vertices collide (coordinate {0} near a degenerate value)")]
    DegenerateCoordinate(usize),
    #[error("pleating lamination is not filling; route through strip deformations instead")]
    NotFilling,
    #[error("curve {0:?} has zero length in the reference Fuchsian structure")]
    ZeroDenominator(Vec<u64>),
    #[error("enumeration budget of {0} admissible vectors exceeded")]
    BudgetExceeded(usize),
    #[error("zero bending angle produces no length gap")]
    ZeroBend,
    #[error("normal curve is not connected")]
    DisconnectedCurve,
    #[error("strip arc exits at a cusped puncture {0}; strips require funnel ends")]
    CuspExit(usize),
    #[error("realized geodesic does not cross the listed edges: {0}")]
    TangledPath(String),
    #[error("realized strip arcs intersect in triangle {0}")]
    ArcsIntersect(usize),
    #[error("matrix is singular (|det| = {0:.3e})")]
    SingularMatrix(f64),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Stable machine-readable code for CLI error JSON.
    pub fn code(&self) -> &'static str {
        match self {
            Error::UnpairedSide(..) => "UnpairedSide",
            Error::WrongPunctureCount { .. } => "WrongPunctureCount",
            Error::NonNegativeEuler { .. } => "NonNegativeEuler",
            Error::SelfGluedEdge(..) => "SelfGluedEdge",
            Error::InadmissibleWeights(..) => "InadmissibleWeights",
            Error::DegenerateQuadruple => "DegenerateQuadruple",
            Error::NonpositiveHeight(..) => "NonpositiveHeight",
            Error::NonGenericFraming { .. } => "NonGenericFraming",
            Error::DegenerateInput => "DegenerateInput",
            Error::NotCoaxial => "NotCoaxial",
            Error::DegenerateCoordinate(..) => "DegenerateCoordinate",
            Error::NotFilling => "NotFilling",
            Error::ZeroDenominator(..) => "ZeroDenominator",
            Error::BudgetExceeded(..) => "BudgetExceeded",
            Error::ZeroBend => "ZeroBend",
            Error::DisconnectedCurve => "DisconnectedCurve",
            Error::CuspExit(..) => "CuspExit",
            Error::TangledPath(..) => "TangledPath",
            Error::ArcsIntersect(..) => "ArcsIntersect",
            Error::SingularMatrix(..) => "SingularMatrix",
            Error::Invalid(..) => "Invalid",
            Error::Json(..) => "Json",
            Error::Io(..) => "Io",
        }
    }
}
