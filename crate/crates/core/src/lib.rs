//! Modular supervisory control of discrete-event systems under partial
//! observation.

pub mod automaton;
pub mod checks;
pub mod coordination;
pub mod error;
pub mod event;
pub mod fixtures;
pub mod format;
pub mod ops;
pub mod oracle;
pub mod pipeline;
pub mod random;
pub mod synthesis;
pub mod system;

pub use automaton::{Automaton, AutomatonBuilder, StateId};
pub use error::{Error, Result};
pub use event::{alphabet, Alphabet, Event, EventAttrs, EventTable, Word};
pub use synthesis::{closed_loop, ClosedLoop, SynthesisProblem};
pub use system::{ModularSystem, Specification};
