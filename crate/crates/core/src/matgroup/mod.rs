//! Determinant-one matrices over `K` modulo `±I`, finitely generated groups,
//! breadth-first word enumeration and entry-size constants.

mod bounds;
mod context;
mod matrix;
mod words;

pub use bounds::{
    abs_upper, check_entry_bound, check_entry_bound_on, compute_entry_constants, tightest_word,
    BoundConstants, EntryBoundReport,
};
pub use context::{GroupContext, GroupSpec, MAX_GENERATORS};
pub use matrix::{Mat2, PslElem};
pub use words::{
    enumerate_words, enumerate_words_capped, Enumeration, Letter, Word, WordEntry,
    DEFAULT_ELEMENT_CAP,
};
