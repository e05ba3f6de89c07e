//! Exact counting, bounds and constructions for the capacity of
//! linear-threshold networks.
//!
//! The capacity of a class of functions is `log₂` of the number of distinct
//! functions it contains. This crate counts threshold functions on finite
//! point sets with an exact LP, enumerates the functions computed by small
//! layered architectures, evaluates closed-form capacity bounds, builds
//! explicit threshold networks for the standard lower-bound gadgets and
//! searches layer-size compositions for extremal estimated capacity.

pub mod combinatorics;
pub mod constructions;
pub mod error;
pub mod extremal;
pub mod network;
pub mod points;
pub mod polycap;
pub mod report;
pub mod separability;
pub mod netcap;
pub mod setcap;

pub use error::{CapacityError, Result};
pub use network::{
    truth_table, truth_table_capped, Architecture, LayeredNetwork, ThresholdMap, ThresholdUnit,
    TruthTable,
};
pub use points::{direct_sum, direct_sum_vector, int, ratio, Dichotomy, PointSet, Rational};
pub use separability::{is_separable, SeparationWitness};
