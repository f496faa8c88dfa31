//! Exact certification of the linking data that identifies the complements
//! of two distinguished periodic geodesic lifts with the figure-eight knot
//! complement.
//!
//! The library computes, by exact combinatorial and rational arithmetic:
//!
//! * symbolic orbit codes on the two supported triangle orbifolds and their
//!   admissibility rules ([`words`]);
//! * linking numbers of carried orbit curves in the ambient sphere via a
//!   calibrated crossing-count model ([`template`], [`calib`]);
//! * linking numbers after surgery, and the homology of the surgered
//!   manifolds through integer Smith normal form ([`surgery`]);
//! * the positivity certificate and the section invariants — Euler
//!   characteristic, genus, fixed points and monodromy class ([`birkhoff`]);
//! * the word calculus in the elementary matrices `L`, `R` ([`sl2`]).
//!
//! No floating point is used anywhere.

pub mod birkhoff;
pub mod calib;
pub mod error;
pub mod sl2;
pub mod surgery;
pub mod template;
pub mod words;

pub use birkhoff::{
    base_linking, certify, section_data, BaseOrbit, BaseRole, CertificationReport, Mode,
    SectionConfig, SectionData,
};
pub use calib::{default_calibration, Calibration, Table334};
pub use error::{Error, Result};
pub use sl2::{
    appendix_table, classes_with_trace, matrix_to_lr_word, trace, word_to_matrix, IntMatrix2,
    LrWord, SectionFamily,
};
pub use surgery::{
    homology, presentation_matrix, q_form, rational_string, smith_normal_form,
    surgered_linking, surgered_self_linking, AbelianGroup, QForm, Rational,
};
pub use template::{HopfVector, Layering, TemplateModel, TemplateParams};
pub use words::{
    block_decomposition, enumerate_orbits, is_admissible, orbit_tag, Block, CyclicWord, Letter,
    OrbitCode, SurfaceSpec,
};
