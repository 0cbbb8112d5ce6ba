//! Filter-regular sequences: measured types, quasi-regularity flags, depth,
//! local cohomology a-invariants, regularity and Koszul cohomology.

pub mod koszul;
pub mod local;
pub mod measure;
pub mod types;

pub use crate::extint::ExtInt;
pub use crate::gring::params::ParameterSequence;
pub use koszul::{koszul_cohomology, KoszulReport};
pub use local::{
    a0_exact, a_invariant_bounds, exact_a_invariants, local_cohomology_report, regularity_bound,
    regularity_exact, LocalCohomologyReport,
};
pub use measure::{depth, measure_type, MeasuredType, Mode};
pub use types::{admissible_envelope, classify, sharpen_group_type, FilterType, QuasiFlags};
