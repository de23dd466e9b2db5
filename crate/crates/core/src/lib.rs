//! Exact computations on Fano polygons and their mirror Laurent polynomials.
//!
//! The crate is organised bottom-up:
//!
//! * [`lattice`]: lattice points, polygons, duals, normal forms.
//! * [`singularity`]: cyclic quotient singularities and singularity content.
//! * [`mutation`]: combinatorial mutations and bounded mutation graphs.
//! * [`poly`] and [`laurent`]: parametric Laurent polynomials, cluster
//!   transformations and spaces of maximally-mutable Laurent polynomials.
//! * [`linalg`]: exact rational row reduction and affine solving.
//! * [`period`]: classical periods and affine period matching.
//! * [`pencil`]: the three-dimensional polytope interpolating a mutation.
//! * [`census`]: bounded enumeration and classification of Fano polygons.
//! * [`io`]: JSON interchange formats.

pub mod census;
pub mod error;
pub mod io;
pub mod laurent;
pub mod lattice;
pub mod linalg;
pub mod mutation;
pub mod pencil;
pub mod period;
pub mod poly;
pub mod singularity;

pub use error::{Error, Result};
