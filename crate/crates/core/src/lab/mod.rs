//! Verifiers for the stable and classical inequalities, the box-family
//! experiment, and the worst-case constant search.

mod boxes;
mod corpus;
mod search;
mod verify;

pub use boxes::{
    box_conjecture_experiment, box_limit, box_pair, box_row, extrapolate_to_zero, fit_exponent, rows_to_csv, BoxRow,
    ConjectureTable, DimSummary, ExponentFit,
};
pub use corpus::{corpus_pair, corpus_symmetric};
pub use search::{worst_case_search, Family, SearchEntry, SearchReport, MIN_DEFICIT, TOP};
pub use verify::{
    bm_constant, bm_report, derive_bm_from_iso, isoperimetric_report, verify_bm, verify_classical, verify_dar,
    verify_isoperimetric, ConstantMode, DerivationReport, InequalityName, InequalityReport, IsoperimetricParts,
    ReportInputs, VerifyOptions, DAR_TOLERANCE, TRIANGLE_TOLERANCE,
};
