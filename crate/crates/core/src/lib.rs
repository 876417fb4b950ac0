//! Exact computations for the quantum Grassmannian O_q(Gr(r,N)), the quotient
//! coalgebra U/K⁺U of U_q(sl_N) and their dual pairing, leading up to the
//! classification of covariant first order differential calculi of small
//! dimension.
//!
//! Everything is computed over the field Q(q) of rational functions; no
//! floating point is involved anywhere.

pub mod comb;
pub mod error;
pub mod grassmann;
pub mod linalg;
pub mod pairing;
pub mod qfield;
pub mod tangent;
pub mod uq;

pub use error::QgrError;
pub use qfield::{Poly, RatFunc};
