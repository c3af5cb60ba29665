pub mod cli;
pub mod combination;
pub mod composition;
pub mod diagrams;
pub mod error;
pub mod identities;
pub mod linalg;
pub mod numerics;
pub mod stuffle;
