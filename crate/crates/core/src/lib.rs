//! Information-theoretic quantities of binary codes sent over the binary
//! symmetric and binary erasure channels.
//!
//! * [`bitspace`]: vectors over F_2^n, coordinate subsets, code families.
//! * [`boolfn`]: distribution functions on the cube, norms, `Ent`, Rényi entropy.
//! * [`channels`]: the noise operator, conditional expectations, channel samplers.
//! * [`entropy_analysis`]: H(X|Y) for BSC and BEC, marginal entropies over random subsets.
//! * [`inequalities`]: signed-slack checks of the noisy-entropy inequalities.
//! * [`listdecode`]: the radius list decoder, list-size formulas, simulation.
//! * [`cli`]: the `noisy-codes` command line.
//!
//! All logarithms are base 2.

// `!(x > 0.0)` style checks are deliberate: they reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bitspace;
pub mod boolfn;
pub mod channels;
pub mod cli;
pub mod corpus;
pub mod entropy_analysis;
pub mod error;
pub mod inequalities;
pub mod listdecode;

pub use error::{Error, Result};
