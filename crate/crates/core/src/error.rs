use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("a {rows}x{cols} matrix needs {} entries, got {len}", rows * cols)]
    Shape { rows: usize, cols: usize, len: usize },
    #[error("row {row} has {found} entries, expected {expected}")]
    RaggedRow {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("vector of length {found} cannot multiply a matrix with {expected} rows")]
    Dimension { expected: usize, found: usize },
    #[error("shape mismatch: {left:?} vs {right:?}")]
    Mismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RegexError {
    #[error("regex syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("a^0 at byte {offset} is only allowed under a star")]
    EmptyLiteral { offset: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: unknown neuron `{name}`")]
    UnknownNeuron { line: usize, name: String },
    #[error("line {line}: duplicate neuron `{name}`")]
    DuplicateNeuron { line: usize, name: String },
    #[error("line {line}: duplicate synapse {from} -> {to}")]
    DuplicateSynapse {
        line: usize,
        from: String,
        to: String,
    },
    #[error("line {line}: bad guard: {source}")]
    Regex {
        line: usize,
        #[source]
        source: RegexError,
    },
}

impl ParseError {
    pub fn line(&self) -> usize {
        match self {
            ParseError::Syntax { line, .. }
            | ParseError::UnknownNeuron { line, .. }
            | ParseError::DuplicateNeuron { line, .. }
            | ParseError::DuplicateSynapse { line, .. }
            | ParseError::Regex { line, .. } => *line,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixFormError {
    #[error("the system has no designated output neuron")]
    MissingOutNeuron,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("vector `{what}` has length {found}, expected {expected}")]
    Dimension {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("not a valid spiking vector for configuration {config:?}: {spiking:?}")]
    InvalidSpikingVector { config: Vec<i64>, spiking: Vec<u8> },
    #[error("configuration became negative at step {k}: {context}")]
    SemanticsViolation { k: usize, context: String },
    #[error("exhaustive exploration exceeded {limit} nodes")]
    TreeTooLarge { limit: usize },
    #[error("the seeded-random policy needs a seed")]
    MissingSeed,
}

impl From<MatrixError> for EngineError {
    fn from(e: MatrixError) -> Self {
        match e {
            MatrixError::Dimension { expected, found } => EngineError::Dimension {
                what: "row vector",
                expected,
                found,
            },
            other => EngineError::SemanticsViolation {
                k: 0,
                context: other.to_string(),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReachabilityError {
    #[error("reachability search is only defined for delay-free systems (rule {rule} has delay {delay})")]
    DelaysUnsupported { rule: usize, delay: u32 },
    #[error("trace record {k} lacks the delay vectors needed for the closed form")]
    MissingDelayVectors { k: usize },
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}
