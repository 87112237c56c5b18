//! Evolution algebras attached to graphs: exact and spectral expansion,
//! plenary-power dynamics, Markov mixing, group-theoretic constructions and
//! an audit harness for the quantitative claims about them.
//!
//! Exact arithmetic (rationals and prime fields) is used wherever a verdict
//! depends on it; floating point is confined to spectra and mixing.

pub mod algebra;
pub mod audit;
pub mod caps;
pub mod constructions;
pub mod error;
pub mod expansion;
pub mod field;
pub mod graph;
pub mod markov;
pub mod spectral;
pub mod structure;

pub use algebra::{Element, EvolutionAlgebra};
pub use audit::{run_full_audit, AuditOptions, AuditReport, CheckKind, LogBase, TheoremCheck};
pub use caps::{ResourceCaps, MAX_ENUMERATION_CAP};
pub use error::{Error, Result};
pub use expansion::{cheeger_exact, is_h_eea, CheegerCertificate, CheegerMethod, CheegerValue};
pub use field::{FieldDescriptor, Scalar};
pub use graph::{underlying_graph, Digraph, SimpleGraph};
pub use spectral::{RealMatrix, Spectrum};
pub use structure::{SupportMode, SupportTrace};
