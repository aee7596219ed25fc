use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum LinAlgError {
    #[error("ambient dimension mismatch: {left} vs {right}")]
    AmbientMismatch { left: usize, right: usize },
    #[error("subspace is not contained in the quotient's total space")]
    NotNested,
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("cannot parse scalar {0:?}")]
    BadScalar(String),
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum QuiverError {
    #[error("duplicate vertex id {0:?}")]
    DuplicateVertex(String),
    #[error("duplicate edge id {0:?}")]
    DuplicateEdge(String),
    #[error("edge {edge:?} references unknown vertex {vertex:?}")]
    UnknownVertex { edge: String, vertex: String },
    #[error("unknown edge id {0:?}")]
    UnknownEdge(String),
    #[error("path does not compose at position {0}")]
    BrokenPath(usize),
    #[error("path references edge index {0} outside the quiver")]
    EdgeOutOfRange(usize),
    #[error("nilpotency bound must be at least 2, got {0}")]
    BadNilpotencyBound(usize),
    #[error("ideal generator contains a term of length {0} (< 2)")]
    ShortGeneratorTerm(usize),
    #[error("ideal generator mixes endpoints: ({0}, {1}) vs ({2}, {3})")]
    MixedEndpoints(String, String, String, String),
    #[error("path vector spans different quivers")]
    ForeignPath,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ConnectionError {
    #[error("gamma block ({g}, {h}) has duplicate label {label:?}")]
    DuplicateGammaLabel { g: String, h: String, label: String },
    #[error("U block at ({g}, {h}) is {rows}x{cols}, expected {expected_rows}x{expected_cols}")]
    BlockShape { g: String, h: String, rows: usize, cols: usize, expected_rows: usize, expected_cols: usize },
    #[error("U block at ({g}, {h}) is singular")]
    SingularBlock { g: String, h: String },
    #[error("term endpoints incompatible with the connection")]
    IncompatibleTerm,
    #[error("connections are not composable: target of first != source of second")]
    NotComposable,
    #[error("morphism endpoints do not live on the same quiver pair")]
    MorphismQuiverMismatch,
    #[error("morphism block at ({g}, {h}) is {rows}x{cols}, expected {expected_rows}x{expected_cols}")]
    MorphismShape { g: String, h: String, rows: usize, cols: usize, expected_rows: usize, expected_cols: usize },
    #[error("composite violates the intertwiner law at block ({g}, {gp}, {h}, {hp})")]
    CompositeLawViolated { g: usize, gp: usize, h: usize, hp: usize },
    #[error("ideal does not belong to the connection's quiver")]
    ForeignIdeal,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("associativity fails on basis triple ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("unit law fails on basis element {0}")]
    UnitLaw(usize),
    #[error("structure constants reference basis index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("radical computation from structure constants requires characteristic zero")]
    UnsupportedField,
    #[error("radical is not nilpotent; input is not a valid finite dimensional algebra radical")]
    RadicalNotNilpotent,
    #[error("A/rad is not commutative: basis pair ({0}, {1})")]
    QuotientNotCommutative(usize, usize),
    #[error("A/rad is not split over the session field: {0}")]
    NotSplit(String),
    #[error("A/rad is not semisimple: {0}")]
    QuotientNotSemisimple(String),
    #[error("idempotent lifting did not stabilize")]
    LiftingDiverged,
    #[error("quiver data violates condition {condition}: {witness}")]
    QuiverData { condition: u8, witness: String },
    #[error("dimension check failed: dim kQ/I = {quotient_dim} but dim A = {algebra_dim}")]
    PresentationDimension { quotient_dim: usize, algebra_dim: usize },
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
    #[error(transparent)]
    Quiver(#[from] QuiverError),
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum BimoduleError {
    #[error("left action of basis element {0} violates {1}")]
    LeftAction(usize, String),
    #[error("right action of basis element {0} violates {1}")]
    RightAction(usize, String),
    #[error("left and right actions do not commute on triple ({0}, {1}, {2})")]
    ActionsDontCommute(usize, usize, usize),
    #[error("bimodule is not radically symmetric: rad A * M has dim {left} but M * rad B has dim {right}")]
    NotRadicallySymmetric { left: usize, right: usize },
    #[error("bimodule quiver data violates condition {condition}: {witness}")]
    QuiverData { condition: u8, witness: String },
    #[error("no two-sided projective basis exists in the lifted subspace: {0}")]
    NotDualizable(String),
    #[error("middle algebras of the tensor factors differ")]
    MiddleMismatch,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum EquivalenceError {
    #[error("connection is not ideally connected: {0}")]
    NotIdeallyConnected(String),
    #[error("input is outside the essential image: {0}")]
    EssentialImage(String),
    #[error(transparent)]
    Connection(#[from] ConnectionError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Bimodule(#[from] BimoduleError),
    #[error(transparent)]
    Quiver(#[from] QuiverError),
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
}
