//! Exact laboratory for reverse-exchangeability symmetries of discrete
//! random vectors and the stochastic monotonicity of their absolute extremes,
//! with numeric companions for Gaussian and elliptical models.

// `!(x < y)` style guards also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod contlab;
pub mod dist;
pub mod extremes;
pub mod gallery;
pub mod rational;
pub mod stochorder;
pub mod symmetry;

pub use dist::{Atom, DistError, ExactJointDist, SignedPermutation, UnivariateDist};
pub use rational::{format_rational, parse_rational, Rational};
