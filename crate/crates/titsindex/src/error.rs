use thiserror::Error;

use crate::rootkit::Kind;

#[derive(Debug, Error)]
pub enum TitsError {
    #[error("no root system of type {kind}{rank}")]
    InvalidType { kind: Kind, rank: usize },
    #[error("unknown Cartan type letter `{0}`")]
    UnknownKind(String),
    #[error("vertex {vertex} is not in the diagram")]
    VertexOutOfRange { vertex: usize },
    #[error("circled set {circled:?} is not invariant under the *-action")]
    NotInvariant { circled: Vec<usize> },
    #[error("subset {0:?} does not induce a Dynkin diagram of finite type")]
    NotFinite(Vec<usize>),
    #[error("diagram is already affine")]
    AlreadyAffine,
    #[error("no subgroup of order {order} in the automorphism group of {kind}{rank}")]
    NoSuchGamma { kind: Kind, rank: usize, order: usize },
    #[error("weight class {class:?} has no minuscule representative")]
    NoMinuscule { class: Vec<i64> },
    #[error("cohomological-dimension table: {0}")]
    Table(String),
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed json in {path}: {source}")]
    Json {
        path: String,
        #[source]
        source: serde_json::Error,
    },
}

pub type Result<T> = std::result::Result<T, TitsError>;
