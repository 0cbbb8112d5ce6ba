//! Modules over the group algebra, minimal resolutions of the trivial module,
//! cup products, restriction maps and the syzygy modules `Ω^n k`, `L_ζ`.

pub mod cocycle;
pub mod module;
pub mod resolution;
pub mod restriction;
pub mod syzygy;

pub use cocycle::{cup_product, cup_product_with, ChainLift, Cocycle, LiftStrategy};
pub use module::KGModule;
pub use resolution::{MinimalResolution, ResolutionCaps};
pub use restriction::{restriction_map, RestrictionMap};
pub use syzygy::{l_module, omega};
