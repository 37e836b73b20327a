//! A toolkit for the symmetric Post Correspondence Problem.
//!
//! The crate covers five connected areas:
//!
//! * [`words`] — words, alphabets, correspondence instances, solution
//!   checking, symmetric closure, and binary block recoding;
//! * [`search`] — bounded breadth-first solving with sound unsolvability
//!   criteria, plus a brute-force enumeration oracle;
//! * [`floyd`] — Floyd's reduction from the word problem of a finitely
//!   presented semigroup to a correspondence instance, with translations
//!   between derivations and solutions in both directions;
//! * [`matrix`] — the embedding of (word, index-word) pairs into 3x3
//!   natural matrices, in both directions, with a randomized product check;
//! * [`freeness`] — the generator family whose multiplicative relations
//!   certify solvability: building generators, turning solutions into
//!   relations, verifying relations, factoring them into blocks, extracting
//!   solutions back, and searching for relations.
//!
//! [`json`] carries the serialization formats shared with the command-line
//! tool.

pub mod error;
pub mod floyd;
pub mod freeness;
pub mod json;
pub mod matrix;
pub mod search;
pub mod words;

pub use error::{Error, Result};
pub use floyd::{
    build_pcp, build_sympcp, check_derivation, derivation_to_solution, solution_to_derivation,
    Derivation, FloydAlphabet, Presentation, RewriteWitness,
};
pub use freeness::{
    build_gamma, build_gamma_reduced, extract_pcp_solution, factor_blocks, find_relation,
    matrix_relation_check, relation_from_solution, relation_from_solution_symmetric,
    verify_relation, Block, BlockFactorization, BlockKind, GammaGenerator, GammaRelation, GammaTag,
};
pub use matrix::{
    binary_value, build_matrices, mat_mul, matrix_to_pair, pair_to_matrix, quaternary_value,
    verify_embedding, EmbeddingReport, EncodingParams, InstanceMatrices, Mat3, Nat, PairMatrices,
    StringPair,
};
pub use search::{
    enumerate_solutions, solve, solve_with_threads, SearchLimits, SearchOutcome, UnsolvableReason,
};
pub use words::{recode_base4_to_base2, Alphabet, PcpInstance, PcpSolution, Word};
