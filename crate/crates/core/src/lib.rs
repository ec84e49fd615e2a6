//! Verification toolkit for BPMN collaborations: a textual model format,
//! a token-game execution semantics, and checkers for well-structuredness,
//! safeness and soundness.

pub mod model;
pub mod parser;
pub mod semantics;
pub mod structure;
pub mod analysis;
pub mod corpus;
pub mod generate;
pub mod cli;
