use thiserror::Error;

use crate::report::CheckReport;

#[derive(Debug, Error)]
pub enum Error {
    #[error("group order exceeds the cap of {cap} elements")]
    SizeCap { cap: usize },

    #[error("invalid permutation: {0}")]
    Permutation(String),

    #[error("invalid multiplication table: {0}")]
    Table(String),

    #[error("identification is not an isomorphism: {0}")]
    NotIsomorphism(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("locality construction failed:\n{0}")]
    Locality(Box<CheckReport>),

    #[error("quotient construction failed:\n{0}")]
    Quotient(Box<CheckReport>),

    #[error(transparent)]
    Model(#[from] crate::model::ModelError),
}

pub type Result<T> = std::result::Result<T, Error>;
