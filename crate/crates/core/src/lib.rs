//! Subsumption reasoning for FL0 and FL⊥ through blocked least functional
//! models.
//!
//! A query `A ⊑ B` is answered by growing a finite tree-shaped partial model
//! rooted at `ε` with `A` in its label, expanding violated axioms at
//! unblocked nodes until the tree is complete. The names in the root label
//! are then exactly the named subsumers of `A`. Two engines are provided:
//! [`saturate`] rescans for violations after every step, [`rete`] matches
//! incrementally. [`reasoner::Reasoner`] wraps both behind the usual tasks.

pub mod bitset;
pub mod blocking;
pub mod concept;
pub mod horn;
pub mod model;
pub mod parser;
pub mod random;
pub mod reasoner;
pub mod rete;
pub mod saturate;
pub mod symbols;
pub mod tbox;
pub mod transform;

pub use bitset::BitSet;
pub use blocking::{apply_label_change, recompute_blocking, BlockingDelta};
pub use concept::Concept;
pub use horn::{horn_subsumes, HornOutcome};
pub use model::{Encoding, LabelSet, ModelError, NodeIndex, PartialModel, Status};
pub use parser::{import_owl_subset, parse_concept, parse_tbox, serialize_concept, serialize_tbox, ParseError};
pub use reasoner::{
    classification_checksum, ClassificationResult, Engine, HornMode, Reasoner, ReasonerError, ReasonerOptions,
};
pub use rete::{compile, saturate_rete, ReteNetwork};
pub use saturate::{complete, saturate, Saturation, SaturationError, SaturationOptions, Strategy, Violation};
pub use symbols::{ConceptId, RoleId, SymbolError, SymbolTable};
pub use tbox::{Atom, Dialect, Gci, NormalGci, NormalSide, NormalTBox, Signature, TBox};
pub use transform::{eliminate_top_bottom, flip_quantifiers, is_horn, normalize, reduce_to_name_subsumption};
