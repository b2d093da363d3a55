//! Exact combinatorics of random matrix models.
//!
//! The crate is organised by subject:
//!
//! * [`arch`]: arch configurations (noncrossing perfect matchings) and their gluing.
//! * [`meander`]: meander and semi-meander polynomials, the semi-meander tree
//!   enumeration with winding statistics, higher-genus meander counts.
//! * [`temperley_lieb`]: Gram matrix of the arch basis and the meander determinant,
//!   computed both by elimination and by the Chebyshev product formula.
//! * [`planar_words`]: planar Gaussian averages of words in several matrices.
//! * [`wick`]: finite-N Gaussian averages over fatgraph pairings.
//! * [`matrix_one`]: the one-Hermitian-matrix model through orthogonal polynomials.
//! * [`exponents`]: KPZ relation and meander configuration exponents.
//! * [`hirota`]: tricolored triangulations through the discrete Hirota equation.
//! * [`seqfit`]: asymptotic fits of integer sequences.
//!
//! All exact quantities use arbitrary-precision integers and rationals.

pub mod algebra;
pub mod arch;
pub mod error;
pub mod exponents;
pub mod hirota;
pub mod limits;
pub mod matrix_one;
pub mod meander;
pub mod multiseries;
pub mod planar_words;
pub mod seqfit;
pub mod series;
pub mod temperley_lieb;
pub mod wick;

pub use error::{Error, Result};
pub use limits::WorkLimit;
