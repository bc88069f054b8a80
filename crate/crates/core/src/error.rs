use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("group closure exceeds the cap of {cap} elements")]
    ClosureTooLarge { cap: usize },
    #[error("group of order {order} exceeds the cap of {cap}")]
    TooLarge { order: usize, cap: usize },
    #[error("not a subgroup: {0}")]
    NotASubgroup(String),
    #[error("not a p-group for p = {0}")]
    NotAPGroup(u32),
    #[error("subgroup is not fully normalized")]
    NotFullyNormalized,
    #[error("bad object set: {0}")]
    BadObjectSet(String),
    #[error("no restriction exists: {0}")]
    NoSuchRestriction(String),
    #[error("no extension exists: {0}")]
    NoSuchExtension(String),
    #[error("not a transporter system: {0}")]
    NotATransporterSystem(String),
    #[error("not a cocycle: {0}")]
    NotACocycle(String),
    #[error("search space of size {size} exceeds the bound {bound}")]
    SearchSpaceTooLarge { size: u128, bound: u128 },
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
