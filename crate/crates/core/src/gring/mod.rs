//! Graded-commutative algebras over `F_p` given by generators and relations.

pub mod basis;
pub mod groebner;
pub mod json;
pub mod params;
pub mod poly;
pub mod rmodule;
pub mod series;

pub use basis::{degree_basis, hilbert, mult_matrix, DegreeBasis};
pub use groebner::{certify, exact_hilbert_series, GroebnerCertificate};
pub use params::ParameterSequence;
pub use poly::{Generator, GradedPresentation, Grading, Monomial, Polynomial, TruncatedPresentation};
pub use rmodule::{betti_numbers, r_module_structure, BettiTable, RModulePresentation};
pub use series::HilbertSeries;
