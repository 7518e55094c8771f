//! Exact cohomology of multiplicative n-Hom-Leibniz algebras and of morphisms
//! between them, together with order-by-order checks, obstruction cochains and
//! an extension solver for formal one-parameter deformations of morphisms.
//!
//! Everything is computed over the rationals with no rounding. Algebras are
//! given by structure constants in a fixed basis; every multilinear map is a
//! dense [`Tensor`] whose last slot is the output.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, reports and
//! the command line live in the companion `homleib` crate.

#![no_std]

extern crate alloc;

pub mod algebra;
pub mod calibration;
pub mod cochain;
pub mod deformation;
mod error;
pub mod fixtures;
pub mod linalg;
pub mod morphism_complex;
pub mod scalar;
pub mod tensor;

pub use algebra::{HomNaryAlgebra, Morphism, Representation, Violation, ViolationKind};
pub use cochain::{Cochain, CochainComplex, CochainSpace, SignConvention};
pub use error::{Error, Result};
pub use linalg::{Matrix, SubspaceBasis};
pub use morphism_complex::{MorphismCochain, MorphismComplex};
pub use scalar::Scalar;
pub use tensor::Tensor;
