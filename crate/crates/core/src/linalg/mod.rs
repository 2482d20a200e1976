//! Exact integer and rational linear algebra.

mod lattice;
mod matrix;
mod normal_form;
mod solve;
mod vector;

pub use lattice::{extend_to_unimodular, is_saturated, AffineLattice, LatticeBasis};
pub use matrix::{rank_of, rank_of_rational, IntMatrix};
pub use normal_form::{elementary_divisors, hermite_normal_form, rows_span_direct_summand, smith_normal_form};
pub use solve::{integer_kernel, solve_integer, solve_rational, Solution};
pub use vector::{IntVector, RationalVector};

pub(crate) use vector::{ceil, floor};
