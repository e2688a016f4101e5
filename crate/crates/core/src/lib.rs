//! Hardy-space norms of vector-valued Dirichlet polynomials.
//!
//! A Dirichlet polynomial `D = Σ x_n n^{-s}` with coefficients in a normed
//! space `X` is measured through its Bohr lift: writing `n = Π p_i^{α_i}`,
//! the coefficient `x_n` becomes the coefficient of the monomial `z^α` on
//! the polytorus, and `‖D‖_{H_p(X)}` is the `L_p` norm of the lifted
//! polynomial. On top of that the crate provides Rademacher, Steinhaus and
//! Gaussian averages, the `H_p^rad` norm, RUC/RUD ratios with a
//! derivative-free search for lower bounds on the extremal constants,
//! type/cotype witnesses, and a handful of reproducible experiments.
//!
//! Modules, bottom to top:
//!
//! - [`bohr`]: primes, the `n ↔ α(n)` correspondence, fixed-point torus points.
//! - [`spaces`]: norm oracles for `ℓ_r^d`, sup-norm spaces and `L_r(T^k)`.
//! - [`random`]: sampler configuration, estimates and sign/rotation averages.
//! - [`dirichlet`]: Dirichlet polynomials and `H_p(X)` norm engines.
//! - [`constants`]: ratios, constant search, witnesses and experiments.

pub mod bohr;
pub mod constants;
pub mod dirichlet;
mod error;
pub mod quad;
pub mod random;
pub mod spaces;

pub use error::{Error, Result};

pub use num_complex::Complex64;
