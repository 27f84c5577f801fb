//! Knowledge-poor pronoun resolution for Turkish narrative text.
//!
//! Resolves annotated third-person personal and reflexive pronouns, overt
//! and zero, to proper person names. Candidates come from a name gazetteer
//! and a four-sentence search scope; hard constraints (number agreement,
//! reflexive locality, personal-pronoun disjointness) filter them, and eight
//! weighted shallow preferences rank the survivors.
//!
//! ```
//! use anafor::{parse_document, resolve_document, Context, Lexicon, PreferenceWeights};
//!
//! let ctx = Context::new(["Tekin", "Ali"].into_iter().collect());
//! let doc = parse_document(
//!     "Yolda Tekin, Ali'ye seslendi. <zero id=\"1\" kind=\"pers\" num=\"sg\"/> Çok yorgundu.",
//!     &Lexicon::default(),
//! )
//! .unwrap();
//! let resolved = resolve_document(&doc, &ctx, &PreferenceWeights::default());
//! let antecedent = resolved.resolutions[0].antecedent().unwrap();
//! assert!(antecedent.contains("Tekin"));
//! ```

pub mod candidates;
pub mod corpus;
pub mod dictionary;
pub mod error;
pub mod eval;
pub mod morph;
pub mod preferences;
pub mod resolver;
pub mod text;
pub mod trainer;

pub use candidates::{
    apply_constraints, extract_candidates, generate_sets, locate_candidates, surviving_candidates, Candidate,
    CandidateKind, Context, SearchScope,
};
pub use corpus::{parse_document, serialize_document};
pub use dictionary::NameDictionary;
pub use error::{Error, Result};
pub use eval::{evaluate, Comparison, Metrics};
pub use morph::{is_nominative, match_name, Case, Lexicon, NameOccurrence, PronounForm};
pub use preferences::{
    feature_vector, score, Preference, PreferenceVector, PreferenceWeights, ResolutionHistory, DEFAULT_WEIGHTS,
};
pub use resolver::{
    baseline_resolve_document, parse_trace, render_trace, resolve_document, resolve_pronoun, Decision, Outcome,
    Resolution, ResolvedDocument, Selection,
};
pub use text::{Document, Number, Overtness, PronounKind, PronounMention, Sentence, Token};
pub use trainer::{build_instances, train, InstanceSet, TrainConfig, TrainReport, TrainingInstance};
