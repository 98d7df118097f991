//! Exact projective incidence proofs in three interchangeable forms:
//! binomial bracket equations, triangulated ratio manifolds, and
//! quadrilateral tilings, with translations between the forms and
//! randomized exact-arithmetic certification.

pub mod binomial;
pub mod bracket;
pub mod certify;
pub mod cli;
pub mod cm;
pub mod doc;
pub mod dot;
pub mod fixtures;
pub mod geom;
pub mod label;
pub mod parse;
pub mod quad;
pub mod serialize;
pub mod surface;
pub mod translate;
