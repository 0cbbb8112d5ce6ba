use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u32),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid group input: {0}")]
    InvalidGroup(String),
    #[error("group of order {order} is not a {p}-group")]
    NotPGroup { p: u32, order: usize },
    #[error("group order exceeds the cap of {cap}")]
    OrderCap { cap: usize },
    #[error("modules are over different groups")]
    GroupMismatch,

    #[error("resolution only reaches degree {have}, degree {need} is required")]
    ResolutionTooShort { have: usize, need: usize },
    #[error("degree cap {cap} exceeded")]
    DegreeCap { cap: usize },
    #[error("dimension cap {cap} exceeded")]
    DimCap { cap: usize },
    #[error("degreewise ring bases exceed the cap of {cap} stored entries")]
    BasisCap { cap: usize },
    #[error("cocycle is zero, its representative is not surjective")]
    ZeroCocycle,

    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),
    #[error("element is not homogeneous")]
    NotHomogeneous,
    #[error("the parameters do not form a homogeneous system of parameters: {0}")]
    NotHsop(String),
    #[error("the parameters are not filter-regular: {0}")]
    NotFilterRegular(String),
    #[error("stopping bound {needed} exceeds the supplied bound {bound}")]
    StoppingBound { needed: i64, bound: i64 },
    #[error("input is not certified: {0}")]
    Uncertified(String),
    #[error("inadmissible filter type: {0}")]
    Inadmissible(String),
    #[error("Koszul window {window} exceeds the computed range {limit}")]
    WindowTooLarge { window: usize, limit: usize },
    #[error("group-cohomology provenance required for this sharpening rule")]
    ProvenanceRequired,

    #[error("Dickson product over {size} elements exceeds the cap of {cap}")]
    DicksonCap { size: u64, cap: u64 },
    #[error("missing restriction data: {0}")]
    MissingRestriction(String),
    #[error("no parameter of degree {degree} with the prescribed restrictions")]
    NoParameter { degree: usize },

    #[error("theorem inapplicable: {0}")]
    Inapplicable(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
