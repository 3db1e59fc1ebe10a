//! Exact-arithmetic and arbitrary-precision kernels for the arithmetic of
//! quaternionic Hilbert modular surfaces.
//!
//! The crate is organised around a handful of independent engines:
//!
//! - [`numth`]: big rationals, Kronecker/Hilbert symbols, Bernoulli numbers;
//! - [`bigfloat`]: fixed-point arbitrary-precision reals with certified elementary
//!   functions;
//! - [`specialvals`]: Euler–Maclaurin evaluation of zeta/L-functions and their
//!   s-derivatives, plus exact special values at negative integers;
//! - [`quatalg`]: quaternion algebras over the rationals and their ramification;
//! - [`clifford`]: a structure-constant Clifford algebra engine over quadratic
//!   lattices;
//! - [`weilrep`]: discriminant forms and the Weil representation;
//! - [`eisen`]: local representation densities and vector-valued Eisenstein
//!   coefficients;
//! - [`theta`]: Jacobi and Siegel theta functions with certified tails;
//! - [`hypcalc`]: the Dolbeault/Maass calculus on the product of two hyperbolic
//!   planes;
//! - [`constants`]: exact symbolic bookkeeping over a basis of transcendental
//!   constants.
//!
//! The crate is `no_std` (with `alloc`); all floating-point transcendentals go
//! through `libm`.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod bigfloat;
pub mod clifford;
pub(crate) mod linalg;
pub mod constants;
pub mod eisen;
pub mod hypcalc;
pub mod numth;
pub mod quatalg;
pub mod specialvals;
pub mod theta;
pub mod weilrep;

pub use bigfloat::{BigFloat, Precision};
pub use numth::Rat;
