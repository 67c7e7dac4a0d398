//! Planar diagrams with Z_d charges on their strings, evaluated exactly in
//! Q(ζ, √d), with the matrix dictionary, the string Fourier transform and
//! numerical checks of inequalities, positivity, braid and 6j identities.
//!
//! Runnable examples, `cargo run --example <name>`:
//! `loop_values`, `rewrite_normal_form`, `matrix_dictionary`,
//! `string_fourier`, `hausdorff_young`, `schur_product`,
//! `entropic_uncertainty`, `reflection_positivity`, `quon_states`,
//! `parafermion_braids`, `sixj_duality`, `diagram_document`, `check_reports`.

pub mod error;
pub mod braids;
pub mod checks;
pub mod cli;
pub mod diagram;
pub mod document;
pub mod linalg;
pub mod matrix;
pub mod mtc;
pub mod qfa;
pub mod quon;
pub mod report;
pub mod rp;
pub mod scalar;
pub mod sft;

pub use error::{Error, Result};
