use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("degenerate slope: zero vector")]
    DegenerateSlope,
    #[error("rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },
    #[error("duplicate catalog name `{0}`")]
    DuplicateName(String),
    #[error("unresolved group name `{0}`")]
    UnresolvedName(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("invalid chamber: {0}")]
    InvalidChamber(String),
    #[error("declared curvature {declared} inconsistent with angle sum (excess {excess})")]
    CurvatureMismatch { declared: String, excess: String },
    #[error("inconsistent lengths/angles: {0}")]
    Realization(String),
    #[error("development budget of {0} elements exhausted")]
    BudgetExhausted(usize),
    #[error("no polar group declared")]
    MissingPolarGroup,
    #[error("section non-compact, invariants undefined")]
    NonCompactSection,
    #[error("|Π| = {pi} is inconsistent with Coxeter order {order}")]
    PolarGroupInconsistent { pi: u64, order: usize },
    #[error("sequence not normalized: {0}")]
    NotNormalized(String),
    #[error("invalid weight sequence: {0}")]
    InvalidSequence(String),
    #[error("internal consistency: {0}")]
    Internal(String),
    #[error("mark mismatch at {0}")]
    MarkMismatch(String),
    #[error("slice representations inequivalent: {0}")]
    InequivalentSlices(String),
    #[error("invalid cut arc: {0}")]
    InvalidArc(String),
    #[error("incompatible restriction along arrow {from} -> {to}")]
    IncompatibleRestriction { from: String, to: String },
    #[error("lift requires torus data: {0}")]
    NotTorus(String),
    #[error("missing homomorphism for vertex {0}")]
    MissingHom(String),
    #[error("Γ element {0} does not preserve strata")]
    NotStrataPreserving(String),
    #[error("missing conjugation witness {from} -> {to}")]
    MissingWitness { from: String, to: String },
    #[error("Γ = {0} is not normal in Π")]
    NotNormal(String),
    #[error("normality of Γ = {0} relative to Π is not declared")]
    NormalityUndeclared(String),
    #[error("malformed descriptor: {0}")]
    MalformedDescriptor(String),
    #[error("glued data invalid: {0}")]
    InvalidResult(String),
    #[error("non-generic point: {0}")]
    NonGeneric(String),
    #[error("invalid billiard configuration: {0}")]
    InvalidConfig(String),
    #[error("too few samples: {0} (need at least 10)")]
    TooFewSamples(usize),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("I/O: {0}")]
    Io(String),
    #[error("invalid catalog: {0}")]
    InvalidCatalog(String),
}

pub type Result<T> = std::result::Result<T, Error>;
