//! Exact finite geometry over GF(q) for odd q: field and polynomial algebra,
//! the projective plane PG(2,q), ovals and conics, and a reconstruction
//! pipeline that recovers the conic through any oval while checking each
//! algebraic identity that forces the oval to be one.

pub mod cli;
pub mod error;
pub mod gf;
pub mod ovals;
pub mod plane;
pub mod poly;
pub mod segre;

pub use error::{Error, Result};
pub use gf::{Field, FieldCtx, FieldElement};
pub use ovals::{Conic, Oval};
pub use plane::{ProjLine, ProjPoint, ProjTransform};
pub use poly::{BivariatePoly, Degree, Polynomial};
pub use segre::{AffineFunction, IdentityReport};
