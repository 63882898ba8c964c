//! Bipolar PROMETHEE methods built on the Choquet integral with respect to
//! 2-additive bicapacities, with preference elicitation and robust ordinal
//! regression.

pub mod bicapacity;
pub mod choquet;
pub mod elicitation;
pub mod error;
pub mod lp;
pub mod model;
pub mod ror;

#[cfg(test)]
pub(crate) mod testing;

pub use bicapacity::{
    Bicapacity, GeneralBicapacity, SignedCoalition, SymmetryClass, TwoAdditiveBicapacity, ValidationReport,
};
pub use choquet::{
    bipolar_flows, choquet_2additive, choquet_general, classical_flows, outranking_structure, ChoquetValue, FlowTriple,
    Flows, Level, OutrankingStructure, Relation,
};
pub use elicitation::{
    constructive_elicitation, parse_statements, ElicitationOptions, ElicitationResult, InfeasibilityHint, ModelLevel,
    PreferenceStatement,
};
pub use error::{Error, Result};
pub use model::{
    bipolar_preference_matrix, bipolar_preference_vector, BipolarPreferenceMatrix, CriterionSpec, DecisionProblem,
    Direction, Shape,
};
pub use ror::{ror_snapshot, RelationKind, RorOptions, RorSnapshot, SnapshotDiff};
