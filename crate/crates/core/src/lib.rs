//! Orders in 2x2 matrix algebras over local fields, studied through the
//! Bruhat-Tits tree: branches, Gorenstein closures, Bass and Eichler
//! classification, and ghost intersections over quadratic extensions.

pub mod error;
pub mod field;
pub mod ghost;
pub mod json;
pub mod lattice;
pub mod matrix;
pub mod orders;
pub mod padic;
pub mod selftest;
pub mod tree;

pub use error::{Error, Result};
pub use field::{Field, ResidueElement, Scalar};
