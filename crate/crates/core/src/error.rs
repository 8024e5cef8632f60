use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} variables, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("coefficients violate Hermitian symmetry at {slot}")]
    NonRealInput { slot: String },
    #[error("syntax error at byte {pos}: expected {}, found {found}", expected.join(" or "))]
    Syntax {
        pos: usize,
        expected: Vec<String>,
        found: String,
    },
    #[error("expression is not real-valued (term {slot} has no conjugate partner)")]
    NonRealExpression { slot: String },
    #[error("term of degree {degree} exceeds truncation order {limit}")]
    DegreeOverflow { degree: u32, limit: u32 },
    #[error("gradient of the defining function vanishes at the origin")]
    NotAHypersurface,
    #[error("support is empty (flat jet)")]
    EmptySupport,
    #[error("face {face} is not a compact face of this polyhedron")]
    FaceMismatch { face: String },
    #[error("weight {weight:?} does not determine face {face}")]
    WeightDoesNotDetermineFace { weight: Vec<i64>, face: String },
    #[error("defining function is not N-nondegenerate on this coordinate")]
    NotCanonical,
    #[error("canonicity could not be decided within the search budget")]
    UnknownCanonicity,
    #[error("input is not in model form 2Re(w) + F(z, z̄)")]
    NotModelForm,
    #[error("gradient vanishes at the sample point")]
    SingularPoint,
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
    #[error("jet validity {validity} is below the requested order {requested}")]
    InsufficientValidity { validity: u32, requested: u32 },
    #[error("mixed terms block tangency: first surviving degree {degree}")]
    Obstruction { degree: u32 },
    #[error("invalid directive: {0}")]
    Directive(String),
}

impl Error {
    /// Stable snake_case name used in JSON output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::NonRealInput { .. } => "non_real_input",
            Error::Syntax { .. } => "syntax",
            Error::NonRealExpression { .. } => "non_real_expression",
            Error::DegreeOverflow { .. } => "degree_overflow",
            Error::NotAHypersurface => "not_a_hypersurface",
            Error::EmptySupport => "empty_support",
            Error::FaceMismatch { .. } => "face_mismatch",
            Error::WeightDoesNotDetermineFace { .. } => "weight_does_not_determine_face",
            Error::NotCanonical => "not_canonical",
            Error::UnknownCanonicity => "unknown_canonicity",
            Error::NotModelForm => "not_model_form",
            Error::SingularPoint => "singular_point",
            Error::InvalidCurve(_) => "invalid_curve",
            Error::InsufficientValidity { .. } => "insufficient_validity",
            Error::Obstruction { .. } => "obstruction",
            Error::Directive(_) => "directive",
        }
    }

    /// Byte offset into the input, for errors that have one.
    pub fn position(&self) -> Option<usize> {
        match self {
            Error::Syntax { pos, .. } => Some(*pos),
            _ => None,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
