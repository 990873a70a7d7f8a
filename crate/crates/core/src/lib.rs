//! Exact-arithmetic Dempster-Shafer evidence library.
//!
//! Everything is computed over arbitrary-precision rationals: mass
//! functions with their Bel/Pl/Q views, Dempster combination with explicit
//! conflict reporting, frequency-based compatibility mappings over tabular
//! data, weighted populations with labelings and labeling processes, and a
//! replication suite for the worked examples the library grew out of.

pub mod combine;
pub mod fixtures;
pub mod frame;
pub mod gamma;
pub mod mass;
pub mod population;
pub mod rational;
pub mod replication;

pub use combine::{
    condition, dempster_combine, mass_from_belief, simple_support, vacuous_extension,
    CombinationResult,
};
pub use frame::{Element, Frame, Subset};
pub use gamma::{
    audit_honesty, bpa_from_gamma, build_gamma, condition_gamma, independence_report,
    DatasetTable, GammaMapping,
};
pub use mass::{MassFunction, ValidationMode};
pub use population::{
    apply_general_process, apply_simple_process, measure, modified_measure, pop_belief,
    pop_mass, pop_plausibility, verify_simple_process, Labeling, LabelingProcessSpec,
    PopObject, Population, SimulationMode,
};
pub use rational::Rat;

use thiserror::Error as ThisError;

#[derive(Debug, ThisError)]
pub enum Error {
    #[error("frame must contain at least one element")]
    EmptyFrame,
    #[error("frame exceeds the 24-element limit (got {0})")]
    FrameTooLarge(usize),
    #[error("duplicate frame element {0}")]
    DuplicateElement(String),
    #[error("element {0} is not in the frame")]
    UnknownElement(String),
    #[error("operands belong to different frames")]
    FrameMismatch,

    #[error("nonzero mass on the empty set")]
    EmptyFocal,
    #[error("masses sum to {0}, not 1")]
    NotNormalized(String),
    #[error("negative mass in strict mode")]
    NegativeMass,
    #[error("negative belief at {0} in generalized mode")]
    NegativeBelief(String),

    #[error("total conflict: pre-normalization empty-set mass is {0}")]
    TotalConflict(String),
    #[error("label must be nonempty")]
    EmptyLabel,
    #[error("combination of signed (generalized-mode) masses is undefined")]
    SignedCombination,
    #[error("target frame is not a product extension of the operand's frame")]
    NotAProductExtension,
    #[error("belief values do not define a belief function: {0}")]
    NotABeliefFunction(String),
    #[error("belief value missing for subset {0}")]
    IncompleteBeliefMap(String),
    #[error("duplicate belief entry for subset {0}")]
    DuplicateBeliefEntry(String),
    #[error("capacity exceeded: {0}")]
    CapacityExceeded(String),

    #[error("unknown attribute {0}")]
    UnknownAttribute(String),
    #[error("duplicate attribute {0}")]
    DuplicateAttribute(String),
    #[error("dataset is empty")]
    EmptyDataset,
    #[error("row {0} has the wrong number of cells")]
    RaggedRow(usize),
    #[error("row {0} has a missing value")]
    MissingValue(usize),
    #[error("csv error: {0}")]
    Csv(String),
    #[error("no rows survive the condition")]
    NoSurvivors,
    #[error("mappings are not defined over the same rows")]
    RowMismatch,

    #[error("unknown object {0}")]
    UnknownObject(String),
    #[error("object {0} has been discarded by the labeling")]
    DiscardedObject(String),
    #[error("object {0} has an empty true value")]
    EmptyTrueValue(String),
    #[error("object {0} has a non-positive weight")]
    NonPositiveWeight(String),
    #[error("duplicate object id {0}")]
    DuplicateObject(String),
    #[error("label of object {0} does not meet its true value")]
    InadmissibleLabel(String),
    #[error("population under the labeling is empty")]
    EmptyPopulation,
    #[error("invalid labeling process: {0}")]
    InvalidProcess(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}
