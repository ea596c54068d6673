//! Linear logic workbench: formulas, sequent proofs, proof search, cut
//! elimination and semantic models.

pub mod coherence;
pub mod corpus;
pub mod cutelim;
pub mod fixtures;
pub mod gen;
pub mod intern;
pub mod labeled;
pub mod lambda;
pub mod mall;
pub mod phase;
pub mod proof;
pub mod syntax;
pub mod tcm;
