//! Exact geometry of numbers over `K~ = F_q((1/x))` with `q = p` prime.
//!
//! Lattices are `g R^d` for `R = F_q[x]` and a nonsingular `g` over
//! `K = F_q(x)`. The crate computes successive minima and orthogonal bases,
//! covering radii for cubes and general convex bodies, well-rounded shifts
//! along the diagonal group, the Minkowski function `μ` of unipotent lattices
//! in dimensions 2 and 3, Mordell boxes, and improved Dirichlet
//! approximations.

pub mod cli;
pub mod dirichlet;
pub mod error;
pub mod field;
pub mod lattice;
pub mod matrix;
pub mod minkmu;
pub mod mordell;
pub mod orbit;
pub mod parse;
pub mod poly;
pub mod polymat;
pub mod random;
pub mod ratfunc;
pub mod selftest;

pub use error::{Error, Result};
pub use field::FieldSpec;
pub use lattice::{minima, LatticeBasis, MinimaProfile};
pub use matrix::RatMatrix;
pub use poly::Poly;
pub use ratfunc::{AbsValue, LaurentTail, RatFunc};
