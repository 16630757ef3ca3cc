use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("zero polynomial has no support")]
    NoSupport,

    #[error("syntax error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),

    #[error("crossing limit exceeded: diagram has {crossings} crossings, limit is {limit}")]
    CrossingLimit { crossings: usize, limit: usize },

    #[error("malformed HOMFLY value: {0}")]
    MalformedHomfly(String),

    #[error("not a knot zeroth coefficient polynomial: {0}")]
    NotKnotP0(String),

    #[error("search space too large: {size} candidates exceed ceiling {ceiling}")]
    SearchCeiling { size: u128, ceiling: u128 },
}
