//! Exact computations around images of multilinear polynomials on matrix
//! algebras: matrix-unit evaluations, the cyclic-shift construction, harmonic
//! decompositions of diagonal values, image-dimension lower bounds,
//! power-centrality probes and square-central 2×2 quaternion matrices.

pub mod chiconstruct;
pub mod exactmath;
pub mod harmonic;
pub mod imagedim;
pub mod matunits;
pub mod ncpoly;
pub mod powercentral;
pub mod quaternion;
pub mod rng;

pub use exactmath::{Cyclotomic, FieldKind, Matrix, Rational, Scalar};
pub use ncpoly::NcPolynomial;
