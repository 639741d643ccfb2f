use thiserror::Error;

use crate::numfield::{BondOrder, Var};

#[derive(Debug, Error)]
pub enum Error {
    #[error("field does not contain cos(π/{0})")]
    UnsupportedBond(BondOrder),
    #[error("field arithmetic: {0}")]
    Field(String),
    #[error("no value assigned to variable x{0}")]
    MissingVariable(Var),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid system: {0}")]
    InvalidSystem(String),
    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),
    #[error("infinite group: {0} needs an explicit length bound")]
    Unbounded(&'static str),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("equivalence class exceeded {limit} words")]
    ClassLimit {
        limit: usize,
        partial: Vec<Vec<usize>>,
    },
    #[error("expansion tree is not finite: {0}")]
    NonFiniteTree(String),
    #[error("descent elimination exceeded {budget} iterations without detecting periodicity")]
    Budget { budget: usize },
    #[error("catalog: {0}")]
    Catalog(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
