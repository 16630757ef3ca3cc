//! Exact computation of HOMFLY polynomials from diagram presentations and
//! the coefficient-polynomial obstructions they carry for the genus
//! non-increasing totally positive unknotting number.
//!
//! Pipeline: a [`knotio::Presentation`] (PD code, braid closure, pretzel or
//! twist family) is resolved to a diagram, [`skein`] evaluates the HOMFLY
//! polynomial by descending-diagram recursion and extracts the coefficient
//! polynomials, and [`obstruct`] turns the zeroth coefficient polynomial of
//! a genus one knot into certified lower bounds, with [`sequences`]
//! supplying matching upper bounds for the pretzel and twist families.

pub mod error;
pub mod knotio;
pub mod obstruct;
pub mod poly;
pub mod selftest;
pub mod sequences;
pub mod skein;
pub mod squares;

pub use error::Error;
