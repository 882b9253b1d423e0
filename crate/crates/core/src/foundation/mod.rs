//! Scalars, dense exact linear algebra and graded combinatorics.

pub mod combinatorics;
pub mod matrix;
pub mod rational;

pub use combinatorics::{
    binomial, koszul_sign, permutation_sign, rearrangement_sign, subsets, unshuffles, IndexSet, SubsetBasis,
};
pub use matrix::{solve_linear, Factorization, LinalgError, RationalMatrix, Solution};
pub use rational::{format_rational, frac, int, parse_rational, Rational};
