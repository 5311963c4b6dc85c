//! Workbench for the generalized Davenport-Schinzel extremal function
//! `Ex_r(v,k,n)`: the maximum length of a sequence over at most `n` letters
//! that avoids every subsequence isomorphic to `v` and whose letters at
//! positions `j, j+r, ..., j+(k-1)r` are pairwise distinct.
//!
//! * [`seq`]: sequences, normal form, isomorphism, (k,r)-sparsity.
//! * [`pattern`]: containment and pattern classifiers.
//! * [`closedform`]: exact formulas and bounds with their applicability rules.
//! * [`search`]: exhaustive canonical search, enumeration, explicit witnesses.
//! * [`verify`]: theorem suites, enumeration classification, conjecture probes.

pub mod closedform;
pub mod error;
pub mod pattern;
pub mod search;
pub mod seq;
pub mod verify;

pub use closedform::{ExtremalQuery, FormulaId, Prediction, PredictionKind};
pub use error::{Error, Result};
pub use pattern::{Occurrence, Pattern};
pub use search::{compute_extremal, enumerate_all, ExtremalResult, SearchConfig, Status};
pub use seq::{Letter, Sequence, SparsityParams, L_MAX};
