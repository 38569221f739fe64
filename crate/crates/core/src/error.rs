use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid event or state name `{0}`")]
    InvalidName(String),

    #[error("event `{event}` declared as `{first}` and as `{second}`")]
    AttributeConflict {
        event: String,
        first: String,
        second: String,
    },

    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),

    #[error("invalid projection: {0}")]
    InvalidProjection(String),

    #[error("specification is not a sublanguage of the plant (witness: {witness})")]
    NotSublanguage { witness: String },

    #[error("nondeterministic transition: state `{state}` event `{event}`")]
    Nondeterministic { state: String, event: String },

    #[error("invalid automaton: {0}")]
    InvalidAutomaton(String),

    #[error("invalid modular system: {0}")]
    InvalidSystem(String),

    #[error("manifest: {0}")]
    Manifest(String),

    #[error("{path}: {source}")]
    Load {
        path: String,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
