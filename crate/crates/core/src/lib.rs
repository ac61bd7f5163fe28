//! Symbolic computation over characteristic-p differential operator rings.
//!
//! The crate is organised bottom-up:
//!
//! * [`field`], [`monomial`], [`algebra`], [`vector`] and [`gb`] form the
//!   Gröbner engine shared by the commutative and Weyl sides.
//! * [`poly`], [`ideal`] and [`graded`] expose commutative polynomial
//!   arithmetic, ideal queries and graded free resolutions / Ext.
//! * [`weyl`] implements the level-0 differential operator ring.
//! * [`filt`] is the filtered-module layer (strictness, good resolutions,
//!   filtered Ext, filtered complexes).
//! * [`charvar`] computes characteristic varieties and purity certificates.
//! * [`symp`] holds the cotangent geometry: conormals, isotropy, Lagrangian
//!   tests and the logarithmic containment check.

pub mod algebra;
pub mod charvar;
pub mod complex;
pub mod error;
pub mod field;
pub mod filt;
pub mod gb;
pub mod graded;
pub mod ideal;
pub mod linalg;
pub mod monomial;
pub mod parse;
pub mod poly;
pub mod symp;
pub mod vector;
pub mod weyl;

pub use error::{Error, Result};
pub use field::Field;
pub use monomial::{Monomial, MonomialOrder};
pub use poly::{PolyRing, Polynomial};
