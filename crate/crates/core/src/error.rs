use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("erased set is not upward-closed: ({0},{1}) is erased but its superinterval ({2},{3}) is not")]
    NotUpwardClosed(usize, usize, usize, usize),

    #[error("elements belong to different groups")]
    MixedGroups,

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("generating set rejected: {0}")]
    NotGenerating(String),

    #[error("coordinate set {0} is not a subgroup: {1}")]
    NotSubgroup(String, String),

    #[error("terraced filtration rejected at H_{index}: {condition}")]
    Terraced { index: usize, condition: String },

    #[error("moduli rejected: {0}")]
    InvalidModuli(String),

    #[error("resource limit exceeded: {states} states at radius {radius} exceed the limit of {limit}{hint}")]
    Resource {
        limit: usize,
        radius: u32,
        states: usize,
        hint: String,
    },

    #[error("search space of {size} candidates exceeds the budget of {budget}")]
    Budget { size: u128, budget: u128 },

    #[error("internal consistency check failed: {0}")]
    Internal(String),
}
