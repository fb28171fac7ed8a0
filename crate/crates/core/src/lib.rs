//! Dataset construction and evaluation toolkit for drug-development
//! language models.

pub mod chem;
pub mod corpus;
pub mod eval;
pub mod forge;
pub mod kg;
pub mod pipeline;
