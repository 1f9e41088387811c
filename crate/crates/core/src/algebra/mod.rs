//! Exact arithmetic: rationals, sparse multivariate polynomials, rational
//! functions, gcd and resultants, integer roots, and linear systems.

pub mod gcd;
pub mod linsolve;
pub mod poly;
pub mod ratfun;
pub mod rational;
pub mod roots;
pub mod symbol;

pub use gcd::{poly_gcd, poly_lcm, resultant};
pub use linsolve::{linear_solve, Solution};
pub use poly::{Monomial, Polynomial};
pub use ratfun::RationalFunction;
pub use rational::Rational;
pub use roots::integer_roots;
pub use symbol::Symbol;
