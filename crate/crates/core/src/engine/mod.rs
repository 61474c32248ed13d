//! Extraction of restricted subgraphs, pure blockades, cographs and
//! homogeneous sets.

mod anticomplete;
mod baseline;
mod cograph;
mod driver;
mod outcome;
mod restricted;
mod rodl;

pub use anticomplete::{
    find_anticomplete_pair, grow_anticomplete_blockade, restricted_dispatch, PairOutcome,
};
pub use baseline::{baseline_floor, ramsey_baseline};
pub use cograph::{
    clique_or_stable, clique_or_stable_traced, extract_cograph, extract_cograph_traced,
    CographTree, DescentSummary,
};
pub use driver::{sparsify_driver, DriverOutcome, DriverRun, Step};
pub use outcome::{BlockadeKind, CliqueOrStable, ExtractionOutcome, Restricted};
pub use restricted::restricted_extract;
pub use rodl::{polyrodl_dispatch, rodl_initial};
